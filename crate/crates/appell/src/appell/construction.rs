//! Interchangeable construction strategies for Appell polynomials.
//!
//! The family attached to a law is determined by its values at zero, and
//! those values can be computed three independent ways: the moment
//! recurrence, reciprocation of the truncated exponential generating series,
//! and the moment-matrix determinant. Each route lives behind the
//! [`Construction`] trait and is registered by name so callers (notably the
//! CLI) can select one at runtime and cross-check them against each other.

use num_rational::BigRational;
use num_traits::One;

use super::bareiss::det_rational;
use super::{appell_poly_from_constants, AppellPoly, ConstructionKind};
use crate::comb::{binomial, binomial_big, factorial};
use crate::dist::DistSpec;
use crate::error::{Error, Result};
use crate::moments::moments_upto;
use crate::scalar::Scalar;

pub trait Construction: Send + Sync {
    fn name(&self) -> &'static str;

    fn kind(&self) -> ConstructionKind;

    /// [Q_0(0), ..., Q_N(0)].
    fn constants(&self, spec: &DistSpec, n: usize) -> Result<Vec<Scalar>>;

    fn build(&self, spec: &DistSpec, n: usize) -> Result<AppellPoly> {
        let constants = self.constants(spec, n)?;
        Ok(appell_poly_from_constants(
            spec,
            n,
            &constants,
            self.kind(),
        ))
    }

    fn build_all(&self, spec: &DistSpec, n: usize) -> Result<Vec<AppellPoly>> {
        let constants = self.constants(spec, n)?;
        Ok((0..=n)
            .map(|k| appell_poly_from_constants(spec, k, &constants, self.kind()))
            .collect())
    }
}

/// Q_k(0) = -sum_{i=1..k} C(k,i) Q_{k-i}(0) mu_i, the defining recurrence
/// restated with the unknown isolated on the left. Works for exact and
/// tracked-precision moment sequences alike.
pub struct Recurrence;

impl Construction for Recurrence {
    fn name(&self) -> &'static str {
        "recurrence"
    }

    fn kind(&self) -> ConstructionKind {
        ConstructionKind::Recurrence
    }

    fn constants(&self, spec: &DistSpec, n: usize) -> Result<Vec<Scalar>> {
        let mu = moments_upto(spec, n)?;
        let mut q = Vec::with_capacity(n + 1);
        q.push(Scalar::one());
        for k in 1..=n {
            let mut acc = Scalar::zero();
            for i in 1..=k {
                acc = &acc + &binomial(k, i).mul(&q[k - i]).mul(&mu[i]);
            }
            q.push(-acc);
        }
        Ok(q)
    }
}

/// Reciprocal of the truncated series sum mu_n u^n / n! by triangular
/// back-substitution; the coefficients of the reciprocal, rescaled by n!,
/// are exactly the constants Q_n(0). Exact input only.
pub struct SeriesInversion;

impl Construction for SeriesInversion {
    fn name(&self) -> &'static str {
        "inversion"
    }

    fn kind(&self) -> ConstructionKind {
        ConstructionKind::SeriesInversion
    }

    fn constants(&self, spec: &DistSpec, n: usize) -> Result<Vec<Scalar>> {
        if !spec.is_exact() {
            return Err(Error::InexactUnsupported(format!(
                "series inversion requires exact moments, `{}` is inexact",
                spec
            )));
        }
        let mu = moments_upto(spec, n)?;
        // a_k = mu_k / k!; b with a*b = 1 mod u^{n+1}; a_0 = mu_0 = 1.
        let a: Vec<Scalar> = mu
            .iter()
            .enumerate()
            .map(|(k, m)| m.div(&factorial(k)))
            .collect();
        let mut b: Vec<Scalar> = Vec::with_capacity(n + 1);
        b.push(Scalar::one());
        for k in 1..=n {
            let mut acc = Scalar::zero();
            for i in 1..=k {
                acc = &acc + &a[i].mul(&b[k - i]);
            }
            b.push(-acc);
        }
        Ok(b
            .into_iter()
            .enumerate()
            .map(|(k, c)| c.mul(&factorial(k)))
            .collect())
    }
}

/// Constants as negated determinants of the triangular moment system; the
/// k x k matrix is eliminated fraction-free. Exact input only.
pub struct Determinant;

impl Construction for Determinant {
    fn name(&self) -> &'static str {
        "determinant"
    }

    fn kind(&self) -> ConstructionKind {
        ConstructionKind::Determinant
    }

    fn constants(&self, spec: &DistSpec, n: usize) -> Result<Vec<Scalar>> {
        let mu = exact_moments(spec, n)?;
        (0..=n).map(|k| constant_from_determinant(&mu, k)).collect()
    }
}

pub(super) fn exact_moments(spec: &DistSpec, n: usize) -> Result<Vec<BigRational>> {
    if !spec.is_exact() {
        return Err(Error::InexactUnsupported(format!(
            "the determinant construction requires exact moments, `{}` is inexact",
            spec
        )));
    }
    moments_upto(spec, n)?
        .into_iter()
        .map(|m| {
            m.as_exact().cloned().ok_or_else(|| {
                Error::InexactUnsupported(format!("inexact moment for `{}`", spec))
            })
        })
        .collect()
}

/// Q_k(0) = -det of the k x k moment matrix: first column mu_k..mu_1 top to
/// bottom, and column c >= 2 holding the coefficients C(row_order, col_order)
/// mu_{c-r} of the triangular system solved by Cramer's rule.
pub(super) fn constant_from_determinant(mu: &[BigRational], k: usize) -> Result<Scalar> {
    if k == 0 {
        return Ok(Scalar::one());
    }
    let zero = BigRational::new(0.into(), 1.into());
    let mut m = vec![vec![zero; k]; k];
    for r in 1..=k {
        m[r - 1][0] = mu[k - r + 1].clone();
        for c in 2..=k {
            if c < r {
                continue;
            }
            let binom = binomial_big(k - r + 1, k - c + 1);
            m[r - 1][c - 1] = BigRational::from_integer(binom) * &mu[c - r];
        }
    }
    Ok(Scalar::from_rational(-det_rational(&m)))
}

/// Exponential-generating-series product of the moment sequence and the
/// constants; equals 1 when the constants are correct. A cheap self-check
/// oracle used by tests.
#[cfg(test)]
pub(crate) fn egf_product_is_one(mu: &[Scalar], q: &[Scalar]) -> bool {
    use crate::comb::factorial_big;
    let n = mu.len().min(q.len()) - 1;
    for k in 1..=n {
        let mut acc = Scalar::zero();
        for i in 0..=k {
            let w = Scalar::from_bigint(
                factorial_big(k) / (factorial_big(i) * factorial_big(k - i)),
            );
            acc = &acc + &w.mul(&q[i]).mul(&mu[k - i]);
        }
        if !acc.is_zero() {
            return false;
        }
    }
    true
}

/// All registered construction strategies, in a fixed order.
pub fn registry() -> &'static [&'static dyn Construction] {
    static STRATEGIES: [&dyn Construction; 3] = [&Recurrence, &SeriesInversion, &Determinant];
    &STRATEGIES
}

/// Looks a strategy up by its registered name.
pub fn by_name(name: &str) -> Option<&'static dyn Construction> {
    registry().iter().copied().find(|c| c.name() == name)
}

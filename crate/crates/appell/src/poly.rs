//! Dense univariate polynomials over [`Scalar`] coefficients.
//!
//! Coefficients are stored in ascending powers; index 0 is the constant term.
//! The representation is normalized: trailing zero coefficients are dropped,
//! and the zero polynomial is the empty coefficient list.

use std::fmt;

use crate::comb::binomial;
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq)]
pub struct Poly {
    coeffs: Vec<Scalar>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Poly::constant(Scalar::one())
    }

    pub fn constant(c: Scalar) -> Self {
        Poly::from_coeffs(vec![c])
    }

    /// The monomial c x^k.
    pub fn monomial(k: usize, c: Scalar) -> Self {
        let mut coeffs = vec![Scalar::zero(); k];
        coeffs.push(c);
        Poly::from_coeffs(coeffs)
    }

    pub fn from_coeffs(mut coeffs: Vec<Scalar>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    /// Coefficient of x^k (zero beyond the degree).
    pub fn coeff(&self, k: usize) -> Scalar {
        self.coeffs.get(k).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn leading(&self) -> Option<&Scalar> {
        self.coeffs.last()
    }

    pub fn is_exact(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_exact())
    }

    pub fn eval(&self, x: &Scalar) -> Scalar {
        let mut acc = Scalar::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * x) + c;
        }
        acc
    }

    pub fn derivative(&self) -> Poly {
        if self.coeffs.len() <= 1 {
            return Poly::zero();
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| c * &Scalar::from_int(k as i64))
            .collect();
        Poly::from_coeffs(coeffs)
    }

    pub fn scale(&self, s: &Scalar) -> Poly {
        Poly::from_coeffs(self.coeffs.iter().map(|c| c * s).collect())
    }

    /// p(a x + b), exact whenever the inputs are.
    pub fn compose_affine(&self, a: &Scalar, b: &Scalar) -> Poly {
        let mut acc = Poly::zero();
        for c in self.coeffs.iter().rev() {
            // acc = acc * (a x + b) + c
            let shifted = Poly::from_coeffs(
                std::iter::once(Scalar::zero())
                    .chain(acc.coeffs.iter().map(|t| t * a))
                    .collect(),
            );
            let scaled = acc.scale(b);
            acc = &(&shifted + &scaled) + &Poly::constant(c.clone());
        }
        acc
    }

    /// p(x + y) for a scalar shift y.
    pub fn shift_arg(&self, y: &Scalar) -> Poly {
        self.compose_affine(&Scalar::one(), y)
    }

    /// Largest |coefficient| as f64, for residual tolerance scaling.
    pub fn max_abs_f64(&self) -> f64 {
        self.coeffs
            .iter()
            .map(|c| c.to_f64().abs())
            .fold(0.0, f64::max)
    }

    /// Coefficientwise comparison; exact pairs must match exactly, anything
    /// inexact is compared at `rel_tol` relative to the larger operand scale.
    pub fn approx_eq(&self, rhs: &Poly, rel_tol: f64) -> bool {
        if self.is_exact() && rhs.is_exact() {
            return self == rhs;
        }
        let scale = self.max_abs_f64().max(rhs.max_abs_f64());
        let len = self.coeffs.len().max(rhs.coeffs.len());
        (0..len).all(|k| self.coeff(k).sub(&rhs.coeff(k)).approx_zero(rel_tol, scale))
    }

    /// True when every coefficient is (approximately) zero at the given scale.
    pub fn approx_zero(&self, rel_tol: f64, scale: f64) -> bool {
        self.coeffs.iter().all(|c| c.approx_zero(rel_tol, scale))
    }
}

impl std::ops::Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..len).map(|k| self.coeff(k).add(&rhs.coeff(k))).collect();
        Poly::from_coeffs(coeffs)
    }
}

impl std::ops::Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..len).map(|k| self.coeff(k).sub(&rhs.coeff(k))).collect();
        Poly::from_coeffs(coeffs)
    }
}

impl std::ops::Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut coeffs = vec![Scalar::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] = coeffs[i + j].add(&(a * b));
            }
        }
        Poly::from_coeffs(coeffs)
    }
}

impl std::ops::Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly::from_coeffs(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
                first = false;
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            match k {
                0 => write!(f, "{}", mag)?,
                _ => {
                    if !mag.is_one() {
                        write!(f, "{}*", mag)?;
                    }
                    if k == 1 {
                        write!(f, "x")?;
                    } else {
                        write!(f, "x^{}", k)?;
                    }
                }
            }
        }
        Ok(())
    }
}

/// (x + y)^m expanded as binomial coefficients times powers of y; a helper for
/// expectation-style expansions against moment sequences.
pub fn binomial_expand(m: usize, y: &Scalar) -> Poly {
    let coeffs = (0..=m)
        .map(|j| binomial(m, j).mul(&y.pow_u((m - j) as u32)))
        .collect();
    Poly::from_coeffs(coeffs)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(coeffs: &[(i64, i64)]) -> Poly {
        Poly::from_coeffs(coeffs.iter().map(|&(n, d)| Scalar::from_ratio(n, d)).collect())
    }

    #[test]
    fn normalization_drops_trailing_zeros() {
        let q = Poly::from_coeffs(vec![Scalar::one(), Scalar::zero(), Scalar::zero()]);
        assert_eq!(q.degree(), Some(0));
        assert!(Poly::from_coeffs(vec![Scalar::zero()]).is_zero());
    }

    #[test]
    fn eval_and_derivative() {
        // B_2 = x^2 - x + 1/6
        let b2 = p(&[(1, 6), (-1, 1), (1, 1)]);
        assert_eq!(b2.eval(&Scalar::zero()), Scalar::from_ratio(1, 6));
        assert_eq!(b2.eval(&Scalar::from_ratio(1, 2)), Scalar::from_ratio(-1, 12));
        assert_eq!(b2.derivative(), p(&[(-1, 1), (2, 1)]));
    }

    #[test]
    fn compose_affine_matches_hand_expansion() {
        // B_2((x+1)/2) = x^2/4 - 1/12
        let b2 = p(&[(1, 6), (-1, 1), (1, 1)]);
        let got = b2.compose_affine(&Scalar::from_ratio(1, 2), &Scalar::from_ratio(1, 2));
        assert_eq!(got, p(&[(-1, 12), (0, 1), (1, 4)]));
        // x^2 at a=2: 4x^2
        let sq = p(&[(0, 1), (0, 1), (1, 1)]);
        assert_eq!(
            sq.compose_affine(&Scalar::from_int(2), &Scalar::zero()),
            p(&[(0, 1), (0, 1), (4, 1)])
        );
    }

    #[test]
    fn shift_arg_is_composition() {
        let b2 = p(&[(1, 6), (-1, 1), (1, 1)]);
        // B_2(x+1) = x^2 + x + 1/6
        assert_eq!(b2.shift_arg(&Scalar::one()), p(&[(1, 6), (1, 1), (1, 1)]));
        assert_eq!(b2.shift_arg(&Scalar::zero()), b2);
    }

    #[test]
    fn mul_and_display() {
        let a = p(&[(-3, 1), (1, 1)]); // x - 3
        let b = p(&[(0, 1), (0, 1), (1, 1)]); // x^2
        let c = &a * &b;
        assert_eq!(c, p(&[(0, 1), (0, 1), (-3, 1), (1, 1)]));
        assert_eq!(format!("{}", c), "x^3 - 3*x^2");
        assert_eq!(format!("{}", p(&[(1, 6), (-1, 1), (1, 1)])), "x^2 - x + 1/6");
    }

    #[test]
    fn binomial_expansion() {
        // (x + 2)^3 = x^3 + 6x^2 + 12x + 8
        let e = binomial_expand(3, &Scalar::from_int(2));
        assert_eq!(e, p(&[(8, 1), (12, 1), (6, 1), (1, 1)]));
    }
}

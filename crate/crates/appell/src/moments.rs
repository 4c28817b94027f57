//! Moment and cumulant sequences of distribution specs.
//!
//! Closed forms are used wherever they are rational in the parameters
//! (uniform, Bernoulli, gamma as a rising product, point masses, normal via
//! the parity-split central moments, and finite compositions of those), so
//! exact specs yield exact sequences. The standard log-normal is the one
//! tracked-precision case: mu_k = e^(k^2/2).

use std::sync::RwLock;

use crate::comb::{binomial, factorial, odd_double_factorial, rising_product};
use crate::dist::DistSpec;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

fn unavailable(spec: &DistSpec, requested: usize) -> Error {
    Error::MomentUnavailable {
        spec: spec.to_string(),
        requested,
        max_available: spec.max_available().unwrap_or(usize::MAX),
    }
}

/// mu_0..mu_K of `spec`, recursively over composition nodes.
fn compute_moments(spec: &DistSpec, k_max: usize) -> Result<Vec<Scalar>> {
    if let Some(avail) = spec.max_available() {
        if k_max > avail {
            return Err(unavailable(spec, k_max));
        }
    }
    let out = match spec {
        DistSpec::Uniform01 => (0..=k_max)
            .map(|k| Scalar::from_ratio(1, k as i64 + 1))
            .collect(),
        DistSpec::Bernoulli { p } => (0..=k_max)
            .map(|k| if k == 0 { Scalar::one() } else { p.clone() })
            .collect(),
        DistSpec::Normal { mu, sigma2 } => (0..=k_max)
            .map(|k| {
                // E(mu + sigma Z)^k; odd moments of Z vanish, so only integer
                // powers of sigma2 appear and exactness is preserved.
                let mut acc = Scalar::zero();
                for j in (0..=k).step_by(2) {
                    let term = binomial(k, j)
                        .mul(&Scalar::from_bigint(odd_double_factorial(j / 2)))
                        .mul(&sigma2.pow_u((j / 2) as u32))
                        .mul(&mu.pow_u((k - j) as u32));
                    acc = &acc + &term;
                }
                acc
            })
            .collect(),
        DistSpec::Gamma { beta, alpha } => (0..=k_max)
            .map(|k| rising_product(beta, k).div(&alpha.pow_u(k as u32)))
            .collect(),
        DistSpec::Exponential { alpha } => (0..=k_max)
            .map(|k| factorial(k).div(&alpha.pow_u(k as u32)))
            .collect(),
        DistSpec::LogNormalStd => (0..=k_max)
            .map(|k| {
                if k == 0 {
                    Scalar::one()
                } else {
                    Scalar::exp_of_ratio((k * k) as i64, 2)
                }
            })
            .collect(),
        DistSpec::PointMass { c } => (0..=k_max).map(|k| c.pow_u(k as u32)).collect(),
        DistSpec::IndependentSum(l, r) => {
            let ml = compute_moments(l, k_max)?;
            let mr = compute_moments(r, k_max)?;
            (0..=k_max)
                .map(|n| {
                    let mut acc = Scalar::zero();
                    for k in 0..=n {
                        acc = &acc + &binomial(n, k).mul(&ml[k]).mul(&mr[n - k]);
                    }
                    acc
                })
                .collect()
        }
        DistSpec::Affine { a, b, inner } => {
            let mi = compute_moments(inner, k_max)?;
            (0..=k_max)
                .map(|k| {
                    let mut acc = Scalar::zero();
                    for j in 0..=k {
                        let term = binomial(k, j)
                            .mul(&a.pow_u(j as u32))
                            .mul(&b.pow_u((k - j) as u32))
                            .mul(&mi[j]);
                        acc = &acc + &term;
                    }
                    acc
                })
                .collect()
        }
        DistSpec::RawMoments { mu } => mu[..=k_max].to_vec(),
    };
    Ok(out)
}

/// kappa_1..kappa_K from mu_0..mu_K via the standard recursion
/// mu_n = sum_{j=1..n} C(n-1, j-1) kappa_j mu_{n-j}.
fn cumulants_from_moments(mu: &[Scalar]) -> Vec<Scalar> {
    let k_max = mu.len() - 1;
    let mut kappa: Vec<Scalar> = Vec::with_capacity(k_max);
    for n in 1..=k_max {
        let mut acc = mu[n].clone();
        for j in 1..n {
            acc = &acc - &binomial(n - 1, j - 1).mul(&kappa[j - 1]).mul(&mu[n - j]);
        }
        kappa.push(acc);
    }
    kappa
}

/// Lazily extended cache of mu_0..mu_K attached to one spec.
///
/// Extension happens under a write lock and recomputes the full prefix, so
/// concurrent readers always observe a consistent sequence. Cached values are
/// never invalidated.
#[derive(Debug)]
pub struct MomentSequence {
    spec: DistSpec,
    cache: RwLock<Vec<Scalar>>,
}

impl MomentSequence {
    pub fn new(spec: DistSpec) -> Self {
        MomentSequence {
            spec,
            cache: RwLock::new(vec![Scalar::one()]),
        }
    }

    pub fn spec(&self) -> &DistSpec {
        &self.spec
    }

    pub fn max_available(&self) -> Option<usize> {
        self.spec.max_available()
    }

    pub fn upto(&self, k: usize) -> Result<Vec<Scalar>> {
        {
            let cache = self.cache.read().expect("moment cache poisoned");
            if cache.len() > k {
                return Ok(cache[..=k].to_vec());
            }
        }
        let full = compute_moments(&self.spec, k)?;
        let mut cache = self.cache.write().expect("moment cache poisoned");
        if cache.len() <= k {
            debug_assert!(full[..cache.len()] == cache[..]);
            *cache = full.clone();
        }
        Ok(full)
    }

    pub fn get(&self, k: usize) -> Result<Scalar> {
        Ok(self.upto(k)?.pop().expect("nonempty prefix"))
    }
}

/// Lazily extended cache of kappa_1..kappa_K attached to one spec.
#[derive(Debug)]
pub struct CumulantSequence {
    moments: MomentSequence,
    cache: RwLock<Vec<Scalar>>,
}

impl CumulantSequence {
    pub fn new(spec: DistSpec) -> Self {
        CumulantSequence {
            moments: MomentSequence::new(spec),
            cache: RwLock::new(Vec::new()),
        }
    }

    pub fn spec(&self) -> &DistSpec {
        self.moments.spec()
    }

    /// kappa_1..kappa_K.
    pub fn upto(&self, k: usize) -> Result<Vec<Scalar>> {
        {
            let cache = self.cache.read().expect("cumulant cache poisoned");
            if cache.len() >= k {
                return Ok(cache[..k].to_vec());
            }
        }
        let mu = self.moments.upto(k)?;
        let full = cumulants_from_moments(&mu);
        let mut cache = self.cache.write().expect("cumulant cache poisoned");
        if cache.len() < k {
            *cache = full.clone();
        }
        Ok(full)
    }

    /// kappa_n for n >= 1.
    pub fn get(&self, n: usize) -> Result<Scalar> {
        assert!(n >= 1, "cumulants are indexed from 1");
        Ok(self.upto(n)?.pop().expect("nonempty"))
    }
}

/// E(xi^k) for the law described by `spec`.
pub fn moment(spec: &DistSpec, k: usize) -> Result<Scalar> {
    Ok(compute_moments(spec, k)?.pop().expect("nonempty"))
}

/// [mu_0, ..., mu_K].
pub fn moments_upto(spec: &DistSpec, k: usize) -> Result<Vec<Scalar>> {
    compute_moments(spec, k)
}

/// [kappa_1, ..., kappa_K].
pub fn cumulants_upto(spec: &DistSpec, k: usize) -> Result<Vec<Scalar>> {
    let mu = compute_moments(spec, k)?;
    Ok(cumulants_from_moments(&mu))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dist::parse_rational;

    fn rat(s: &str) -> Scalar {
        parse_rational(s).unwrap()
    }

    fn spec(s: &str) -> DistSpec {
        s.parse().unwrap()
    }

    /// Composite Simpson quadrature of x^k times the Gamma(beta, 1) density;
    /// an oracle independent of the rising-product closed form.
    fn gamma_moment_quadrature(beta: f64, k: u32) -> f64 {
        let gamma_beta = gamma_fn(beta);
        let f = |x: f64| {
            if x <= 0.0 {
                0.0
            } else {
                x.powi(k as i32) * x.powf(beta - 1.0) * (-x).exp() / gamma_beta
            }
        };
        // integrand decays like e^-x; [0, 80] is far past negligible
        let (a, b, n) = (0.0_f64, 80.0_f64, 80_000usize);
        let h = (b - a) / n as f64;
        let mut s = f(a) + f(b);
        for i in 1..n {
            let w = if i % 2 == 1 { 4.0 } else { 2.0 };
            s += w * f(a + i as f64 * h);
        }
        s * h / 3.0
    }

    /// Lanczos gamma, test-only.
    fn gamma_fn(x: f64) -> f64 {
        const G: f64 = 7.0;
        const C: [f64; 9] = [
            0.99999999999980993,
            676.5203681218851,
            -1259.1392167224028,
            771.32342877765313,
            -176.61502916214059,
            12.507343278686905,
            -0.13857109526572012,
            9.9843695780195716e-6,
            1.5056327351493116e-7,
        ];
        if x < 0.5 {
            std::f64::consts::PI / ((std::f64::consts::PI * x).sin() * gamma_fn(1.0 - x))
        } else {
            let x = x - 1.0;
            let mut a = C[0];
            let t = x + G + 0.5;
            for (i, &c) in C.iter().enumerate().skip(1) {
                a += c / (x + i as f64);
            }
            (2.0 * std::f64::consts::PI).sqrt() * t.powf(x + 0.5) * (-t).exp() * a
        }
    }

    #[test]
    fn uniform_moment_is_one_over_k_plus_one() {
        assert_eq!(moment(&DistSpec::Uniform01, 3).unwrap(), rat("1/4"));
        assert_eq!(moment(&DistSpec::Uniform01, 0).unwrap(), Scalar::one());
    }

    #[test]
    fn standard_normal_fourth_moment() {
        assert_eq!(moment(&spec("normal"), 4).unwrap(), rat("3"));
        assert_eq!(moment(&spec("normal"), 5).unwrap(), Scalar::zero());
    }

    #[test]
    fn normal_with_mean_moments() {
        // E(1 + Z)^2 = 1 + 0 + 1 = 2; E(1 + Z)^3 = 1 + 3 = 4
        let s = spec("normal:mu=1,sigma2=1");
        assert_eq!(moment(&s, 2).unwrap(), rat("2"));
        assert_eq!(moment(&s, 3).unwrap(), rat("4"));
    }

    #[test]
    fn lognormal_moment_is_inexact_exponential() {
        let m2 = moment(&DistSpec::LogNormalStd, 2).unwrap();
        assert!(!m2.is_exact());
        assert!((m2.to_f64() - 7.38905609893065).abs() < 1e-12);
    }

    #[test]
    fn gamma_moment_rising_product_vs_quadrature_oracle() {
        // beta = 1/2, alpha = 1, k = 2: rising product gives (1/2)(3/2) = 3/4.
        let got = moment(&spec("gamma:beta=1/2"), 2).unwrap();
        assert_eq!(got, rat("3/4"));
        let oracle = gamma_moment_quadrature(0.5, 2);
        assert!((oracle - 0.75).abs() < 1e-6, "quadrature oracle {}", oracle);
        // second instance: beta = 3/4, alpha = 2, k = 3
        let got = moment(&spec("gamma:beta=3/4,alpha=2"), 3).unwrap();
        assert_eq!(got, rat("231/512")); // (3/4)(7/4)(11/4) / 8
        let oracle = gamma_moment_quadrature(0.75, 3) / 8.0;
        assert!((oracle - got.to_f64()).abs() < 1e-6);
    }

    #[test]
    fn point_mass_powers() {
        assert_eq!(
            moments_upto(&spec("point:c=2"), 3).unwrap(),
            vec![rat("1"), rat("2"), rat("4"), rat("8")]
        );
    }

    #[test]
    fn independent_sum_is_binomial_convolution() {
        // U + Ber(1/2) ~ U(0,2): mu_1 = 1, mu_2 = 4/3.
        let s = spec("sum(uniform,bernoulli:p=1/2)");
        assert_eq!(
            moments_upto(&s, 2).unwrap(),
            vec![rat("1"), rat("1"), rat("4/3")]
        );
    }

    #[test]
    fn affine_reflection_of_uniform() {
        // 1 - U ~ U(0,1)
        let s = spec("affine:a=-1,b=1(uniform)");
        assert_eq!(
            moments_upto(&s, 2).unwrap(),
            vec![rat("1"), rat("1/2"), rat("1/3")]
        );
    }

    #[test]
    fn raw_moments_refuse_beyond_list() {
        let s = spec("moments:[1,1/2,1/3]");
        assert_eq!(moment(&s, 2).unwrap(), rat("1/3"));
        let err = moment(&s, 3).unwrap_err();
        assert!(matches!(err, Error::MomentUnavailable { requested: 3, .. }));
    }

    #[test]
    fn uniform_cumulants_match_bernoulli_numbers() {
        // kappa_{n+1} = B~_{n+1} / (n+1): [1/2, 1/12, 0, -1/120]
        assert_eq!(
            cumulants_upto(&DistSpec::Uniform01, 4).unwrap(),
            vec![rat("1/2"), rat("1/12"), rat("0"), rat("-1/120")]
        );
    }

    #[test]
    fn normal_cumulants_terminate() {
        assert_eq!(
            cumulants_upto(&spec("normal"), 4).unwrap(),
            vec![rat("0"), rat("1"), rat("0"), rat("0")]
        );
        assert_eq!(
            cumulants_upto(&spec("point:c=5"), 3).unwrap(),
            vec![rat("5"), rat("0"), rat("0")]
        );
    }

    #[test]
    fn bernoulli_half_cumulants() {
        assert_eq!(
            cumulants_upto(&spec("bernoulli"), 4).unwrap(),
            vec![rat("1/2"), rat("1/4"), rat("0"), rat("-1/8")]
        );
    }

    #[test]
    fn sequences_cache_and_extend() {
        let ms = MomentSequence::new(DistSpec::Uniform01);
        assert_eq!(ms.get(0).unwrap(), Scalar::one());
        assert_eq!(ms.get(5).unwrap(), rat("1/6"));
        assert_eq!(ms.upto(3).unwrap().len(), 4);
        let cs = CumulantSequence::new(DistSpec::Uniform01);
        assert_eq!(cs.get(2).unwrap(), rat("1/12"));
        assert_eq!(cs.upto(4).unwrap().len(), 4);
    }

    #[test]
    fn variance_nonnegative_for_laws() {
        for s in [
            "uniform",
            "bernoulli:p=1/3",
            "normal:mu=2,sigma2=9",
            "gamma:beta=1/2,alpha=3",
            "exp:alpha=2",
            "point:c=-4",
            "sum(uniform,exp)",
            "affine:a=-2,b=5(uniform)",
        ] {
            let kappa = cumulants_upto(&spec(s), 2).unwrap();
            assert!(kappa[1] >= Scalar::zero(), "kappa_2 of {} = {}", s, kappa[1]);
        }
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        fn atom() -> impl Strategy<Value = DistSpec> {
            prop_oneof![
                Just(DistSpec::Uniform01),
                (1i64..=3, 4i64..=6).prop_map(|(n, d)| DistSpec::bernoulli(
                    Scalar::from_ratio(n, d)
                )
                .unwrap()),
                (-2i64..=2, 1i64..=3).prop_map(|(m, v)| DistSpec::normal(
                    Scalar::from_int(m),
                    Scalar::from_int(v)
                )
                .unwrap()),
                (1i64..=5, 1i64..=3).prop_map(|(b, a)| DistSpec::gamma(
                    Scalar::from_ratio(b, 4),
                    Scalar::from_int(a)
                )
                .unwrap()),
                (-3i64..=3).prop_map(|c| DistSpec::point_mass(Scalar::from_int(c))),
            ]
        }

        fn tree() -> impl Strategy<Value = DistSpec> {
            atom().prop_recursive(2, 8, 2, |inner| {
                prop_oneof![
                    (inner.clone(), inner.clone())
                        .prop_map(|(l, r)| DistSpec::independent_sum(l, r)),
                    (inner, 1i64..=2, -2i64..=2).prop_map(|(s, a, b)| DistSpec::affine(
                        Scalar::from_int(a),
                        Scalar::from_int(b),
                        s
                    )
                    .unwrap()),
                ]
            })
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(48))]

            #[test]
            fn sum_moments_are_binomial_convolutions(l in tree(), r in tree()) {
                let k = 6;
                let sum = DistSpec::independent_sum(l.clone(), r.clone());
                let ms = moments_upto(&sum, k).unwrap();
                let ml = moments_upto(&l, k).unwrap();
                let mr = moments_upto(&r, k).unwrap();
                for n in 0..=k {
                    let mut acc = Scalar::zero();
                    for j in 0..=n {
                        acc = &acc + &binomial(n, j).mul(&ml[j]).mul(&mr[n - j]);
                    }
                    prop_assert_eq!(&ms[n], &acc);
                }
            }

            #[test]
            fn negation_flips_odd_moments(s in tree()) {
                let k = 6;
                let neg = DistSpec::affine(Scalar::from_int(-1), Scalar::zero(), s.clone()).unwrap();
                let m = moments_upto(&s, k).unwrap();
                let mn = moments_upto(&neg, k).unwrap();
                for n in 0..=k {
                    let expect = if n % 2 == 0 { m[n].clone() } else { -&m[n] };
                    prop_assert_eq!(&mn[n], &expect);
                }
            }
        }
    }

    #[test]
    fn symmetric_specs_have_zero_odd_moments() {
        for s in [
            "normal:mu=0,sigma2=4",
            "affine:a=1,b=-1/2(bernoulli:p=1/2)",
            "affine:a=1,b=-1/2(uniform)",
        ] {
            let mu = moments_upto(&spec(s), 9).unwrap();
            for n in (1..=9).step_by(2) {
                assert!(mu[n].is_zero(), "odd moment {} of {} = {}", n, s, mu[n]);
            }
        }
    }
}

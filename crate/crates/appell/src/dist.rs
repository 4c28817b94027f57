//! Declarative distribution specifications.
//!
//! A [`DistSpec`] names a law with concrete parameters, or composes laws by
//! independent sum, affine transform, or a raw moment list. Specs are plain
//! immutable values; moment and cumulant sequences attach to them in the
//! [`crate::moments`] module.
//!
//! The text form accepted by [`FromStr`] (and produced by `Display`) is
//!
//! ```text
//! uniform | bernoulli[:p=<rat>] | normal[:mu=<rat>,sigma2=<rat>]
//!   | gamma:beta=<rat>[,alpha=<rat>] | exp[:alpha=<rat>] | lognormal
//!   | point:c=<rat> | sum(<spec>,<spec>) | affine:a=<rat>,b=<rat>(<spec>)
//!   | moments:[<rat>,<rat>,...]
//! ```
//!
//! with rationals written as `n/d` or plain integers, and defaults `p=1/2`,
//! `mu=0`, `sigma2=1`, `alpha=1`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq)]
pub enum DistSpec {
    Uniform01,
    Bernoulli { p: Scalar },
    Normal { mu: Scalar, sigma2: Scalar },
    Gamma { beta: Scalar, alpha: Scalar },
    Exponential { alpha: Scalar },
    LogNormalStd,
    PointMass { c: Scalar },
    IndependentSum(Box<DistSpec>, Box<DistSpec>),
    Affine { a: Scalar, b: Scalar, inner: Box<DistSpec> },
    RawMoments { mu: Vec<Scalar> },
}

impl DistSpec {
    pub fn uniform01() -> Self {
        DistSpec::Uniform01
    }

    pub fn bernoulli(p: Scalar) -> Result<Self> {
        if p < Scalar::zero() || p > Scalar::one() {
            return Err(Error::InvalidParameter(format!(
                "bernoulli p must lie in [0,1], got {}",
                p
            )));
        }
        Ok(DistSpec::Bernoulli { p })
    }

    pub fn normal(mu: Scalar, sigma2: Scalar) -> Result<Self> {
        if !sigma2.is_positive() {
            return Err(Error::InvalidParameter(format!(
                "normal sigma2 must be > 0, got {}",
                sigma2
            )));
        }
        Ok(DistSpec::Normal { mu, sigma2 })
    }

    pub fn gamma(beta: Scalar, alpha: Scalar) -> Result<Self> {
        if !beta.is_positive() || !alpha.is_positive() {
            return Err(Error::InvalidParameter(format!(
                "gamma parameters must be > 0, got beta={}, alpha={}",
                beta, alpha
            )));
        }
        Ok(DistSpec::Gamma { beta, alpha })
    }

    pub fn exponential(alpha: Scalar) -> Result<Self> {
        if !alpha.is_positive() {
            return Err(Error::InvalidParameter(format!(
                "exponential alpha must be > 0, got {}",
                alpha
            )));
        }
        Ok(DistSpec::Exponential { alpha })
    }

    pub fn lognormal_std() -> Self {
        DistSpec::LogNormalStd
    }

    pub fn point_mass(c: Scalar) -> Self {
        DistSpec::PointMass { c }
    }

    pub fn independent_sum(left: DistSpec, right: DistSpec) -> Self {
        DistSpec::IndependentSum(Box::new(left), Box::new(right))
    }

    pub fn affine(a: Scalar, b: Scalar, inner: DistSpec) -> Result<Self> {
        if a.is_zero() {
            return Err(Error::InvalidParameter(
                "affine scale a must be nonzero".into(),
            ));
        }
        Ok(DistSpec::Affine {
            a,
            b,
            inner: Box::new(inner),
        })
    }

    pub fn raw_moments(mu: Vec<Scalar>) -> Result<Self> {
        if mu.first().map(|m| m.is_one()) != Some(true) {
            return Err(Error::InvalidParameter(
                "raw moment list must start with mu_0 = 1".into(),
            ));
        }
        Ok(DistSpec::RawMoments { mu })
    }

    /// Whether the moment sequence of this spec is exact.
    pub fn is_exact(&self) -> bool {
        match self {
            DistSpec::Uniform01 => true,
            DistSpec::Bernoulli { p } => p.is_exact(),
            DistSpec::Normal { mu, sigma2 } => mu.is_exact() && sigma2.is_exact(),
            DistSpec::Gamma { beta, alpha } => beta.is_exact() && alpha.is_exact(),
            DistSpec::Exponential { alpha } => alpha.is_exact(),
            DistSpec::LogNormalStd => false,
            DistSpec::PointMass { c } => c.is_exact(),
            DistSpec::IndependentSum(l, r) => l.is_exact() && r.is_exact(),
            DistSpec::Affine { a, b, inner } => a.is_exact() && b.is_exact() && inner.is_exact(),
            DistSpec::RawMoments { mu } => mu.iter().all(|m| m.is_exact()),
        }
    }

    /// Highest available moment order; `None` means unbounded.
    pub fn max_available(&self) -> Option<usize> {
        match self {
            DistSpec::RawMoments { mu } => Some(mu.len() - 1),
            DistSpec::IndependentSum(l, r) => match (l.max_available(), r.max_available()) {
                (Some(a), Some(b)) => Some(a.min(b)),
                (Some(a), None) | (None, Some(a)) => Some(a),
                (None, None) => None,
            },
            DistSpec::Affine { inner, .. } => inner.max_available(),
            _ => None,
        }
    }
}

fn fmt_rat(s: &Scalar, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    write!(f, "{}", s)
}

impl fmt::Display for DistSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DistSpec::Uniform01 => write!(f, "uniform"),
            DistSpec::Bernoulli { p } => {
                write!(f, "bernoulli:p=")?;
                fmt_rat(p, f)
            }
            DistSpec::Normal { mu, sigma2 } => {
                write!(f, "normal:mu=")?;
                fmt_rat(mu, f)?;
                write!(f, ",sigma2=")?;
                fmt_rat(sigma2, f)
            }
            DistSpec::Gamma { beta, alpha } => {
                write!(f, "gamma:beta=")?;
                fmt_rat(beta, f)?;
                write!(f, ",alpha=")?;
                fmt_rat(alpha, f)
            }
            DistSpec::Exponential { alpha } => {
                write!(f, "exp:alpha=")?;
                fmt_rat(alpha, f)
            }
            DistSpec::LogNormalStd => write!(f, "lognormal"),
            DistSpec::PointMass { c } => {
                write!(f, "point:c=")?;
                fmt_rat(c, f)
            }
            DistSpec::IndependentSum(l, r) => write!(f, "sum({},{})", l, r),
            DistSpec::Affine { a, b, inner } => {
                write!(f, "affine:a=")?;
                fmt_rat(a, f)?;
                write!(f, ",b=")?;
                fmt_rat(b, f)?;
                write!(f, "({})", inner)
            }
            DistSpec::RawMoments { mu } => {
                write!(f, "moments:[")?;
                for (i, m) in mu.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    fmt_rat(m, f)?;
                }
                write!(f, "]")
            }
        }
    }
}

/// Parses `n/d` or an integer into an exact scalar.
pub fn parse_rational(s: &str) -> Result<Scalar> {
    let s = s.trim();
    let bad = || Error::Parse(format!("invalid rational `{}`", s));
    if let Some((n, d)) = s.split_once('/') {
        let n = BigInt::from_str(n.trim()).map_err(|_| bad())?;
        let d = BigInt::from_str(d.trim()).map_err(|_| bad())?;
        if d == BigInt::from(0) {
            return Err(Error::Parse(format!("zero denominator in `{}`", s)));
        }
        Ok(Scalar::from_rational(BigRational::new(n, d)))
    } else {
        let n = BigInt::from_str(s).map_err(|_| bad())?;
        Ok(Scalar::from_bigint(n))
    }
}

struct Parser<'a> {
    s: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(s: &'a str) -> Self {
        Parser { s, pos: 0 }
    }

    fn rest(&self) -> &'a str {
        &self.s[self.pos..]
    }

    fn peek(&self) -> Option<char> {
        self.rest().chars().next()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += c.len_utf8();
        Some(c)
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.peek() == Some(c) {
            self.bump();
            Ok(())
        } else {
            Err(Error::Parse(format!(
                "expected `{}` at position {} in `{}`",
                c, self.pos, self.s
            )))
        }
    }

    fn ident(&mut self) -> String {
        let start = self.pos;
        while self
            .peek()
            .is_some_and(|c| c.is_ascii_alphanumeric() || c == '_')
        {
            self.bump();
        }
        self.s[start..self.pos].to_string()
    }

    /// A rational token: digits, sign, slash.
    fn rational(&mut self) -> Result<Scalar> {
        let start = self.pos;
        while self
            .peek()
            .is_some_and(|c| c.is_ascii_digit() || c == '/' || c == '-' || c == '+')
        {
            self.bump();
        }
        parse_rational(&self.s[start..self.pos])
    }

    /// `key=value` pairs separated by commas, stopping at `(`, `)` or end.
    fn params(&mut self) -> Result<Vec<(String, Scalar)>> {
        let mut out = Vec::new();
        loop {
            let key = self.ident();
            if key.is_empty() {
                return Err(Error::Parse(format!(
                    "expected parameter name at position {} in `{}`",
                    self.pos, self.s
                )));
            }
            self.expect('=')?;
            let value = self.rational()?;
            out.push((key, value));
            if self.peek() == Some(',') {
                self.bump();
            } else {
                break;
            }
        }
        Ok(out)
    }

    fn spec(&mut self) -> Result<DistSpec> {
        let name = self.ident();
        match name.as_str() {
            "uniform" => Ok(DistSpec::Uniform01),
            "lognormal" => Ok(DistSpec::LogNormalStd),
            "bernoulli" => {
                let params = self.optional_params()?;
                let p = take_param(&params, "p", &name)?
                    .unwrap_or_else(|| Scalar::from_ratio(1, 2));
                DistSpec::bernoulli(p)
            }
            "normal" => {
                let params = self.optional_params()?;
                let mu = take_param(&params, "mu", &name)?.unwrap_or_else(Scalar::zero);
                let sigma2 = take_param(&params, "sigma2", &name)?.unwrap_or_else(Scalar::one);
                DistSpec::normal(mu, sigma2)
            }
            "gamma" => {
                self.expect(':')?;
                let params = self.params()?;
                let beta = take_param(&params, "beta", &name)?.ok_or_else(|| {
                    Error::Parse("gamma requires beta=<rat>".into())
                })?;
                let alpha = take_param(&params, "alpha", &name)?.unwrap_or_else(Scalar::one);
                DistSpec::gamma(beta, alpha)
            }
            "exp" => {
                let params = self.optional_params()?;
                let alpha = take_param(&params, "alpha", &name)?.unwrap_or_else(Scalar::one);
                DistSpec::exponential(alpha)
            }
            "point" => {
                self.expect(':')?;
                let params = self.params()?;
                let c = take_param(&params, "c", &name)?
                    .ok_or_else(|| Error::Parse("point requires c=<rat>".into()))?;
                Ok(DistSpec::point_mass(c))
            }
            "sum" => {
                self.expect('(')?;
                let left = self.spec()?;
                self.expect(',')?;
                let right = self.spec()?;
                self.expect(')')?;
                Ok(DistSpec::independent_sum(left, right))
            }
            "affine" => {
                self.expect(':')?;
                let params = self.params()?;
                let a = take_param(&params, "a", &name)?
                    .ok_or_else(|| Error::Parse("affine requires a=<rat>".into()))?;
                let b = take_param(&params, "b", &name)?
                    .ok_or_else(|| Error::Parse("affine requires b=<rat>".into()))?;
                self.expect('(')?;
                let inner = self.spec()?;
                self.expect(')')?;
                DistSpec::affine(a, b, inner)
            }
            "moments" => {
                self.expect(':')?;
                self.expect('[')?;
                let mut mu = Vec::new();
                loop {
                    mu.push(self.rational()?);
                    match self.bump() {
                        Some(',') => continue,
                        Some(']') => break,
                        _ => {
                            return Err(Error::Parse(format!(
                                "unterminated moment list in `{}`",
                                self.s
                            )))
                        }
                    }
                }
                DistSpec::raw_moments(mu)
            }
            other => Err(Error::Parse(format!(
                "unknown distribution `{}` in `{}`",
                other, self.s
            ))),
        }
    }

    fn optional_params(&mut self) -> Result<Vec<(String, Scalar)>> {
        if self.peek() == Some(':') {
            self.bump();
            self.params()
        } else {
            Ok(Vec::new())
        }
    }
}

fn take_param(params: &[(String, Scalar)], key: &str, dist: &str) -> Result<Option<Scalar>> {
    for (k, _) in params {
        if !matches!(
            (dist, k.as_str()),
            ("bernoulli", "p")
                | ("normal", "mu")
                | ("normal", "sigma2")
                | ("gamma", "beta")
                | ("gamma", "alpha")
                | ("exp", "alpha")
                | ("point", "c")
                | ("affine", "a")
                | ("affine", "b")
        ) {
            return Err(Error::Parse(format!(
                "unknown parameter `{}` for `{}`",
                k, dist
            )));
        }
    }
    Ok(params
        .iter()
        .find(|(k, _)| k == key)
        .map(|(_, v)| v.clone()))
}

impl FromStr for DistSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut parser = Parser::new(s.trim());
        let spec = parser.spec()?;
        if !parser.rest().is_empty() {
            return Err(Error::Parse(format!(
                "trailing input `{}` in `{}`",
                parser.rest(),
                s
            )));
        }
        Ok(spec)
    }
}

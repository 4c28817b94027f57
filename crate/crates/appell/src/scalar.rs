//! Exact-or-tracked-precision scalars.
//!
//! Every coefficient, moment and cumulant in this crate is a [`Scalar`]: either
//! an exact big rational or a high-precision binary float carrying at least
//! [`MIN_PRECISION_BITS`] bits of significand. Arithmetic keeps exact operands
//! exact; as soon as an inexact value enters a computation the result is
//! marked inexact, so identity checks downstream know whether to compare for
//! equality or within a tolerance.

use std::cell::RefCell;
use std::cmp::Ordering;
use std::fmt;
use std::sync::atomic::{AtomicUsize, Ordering as AtomicOrdering};

use astro_float::{BigFloat, Consts, Radix, RoundingMode, Sign};
use num_bigint::{BigInt, Sign as IntSign};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

const RM: RoundingMode = RoundingMode::ToEven;

/// Lower bound on the working precision of inexact scalars.
pub const MIN_PRECISION_BITS: usize = 200;

static PRECISION_BITS: AtomicUsize = AtomicUsize::new(256);

/// Significand size (bits) used for inexact scalar arithmetic.
pub fn precision_bits() -> usize {
    PRECISION_BITS.load(AtomicOrdering::Relaxed)
}

/// Sets the working precision, clamped to [`MIN_PRECISION_BITS`].
pub fn set_precision_bits(bits: usize) {
    PRECISION_BITS.store(bits.max(MIN_PRECISION_BITS), AtomicOrdering::Relaxed);
}

thread_local! {
    static CONSTS: RefCell<Consts> = RefCell::new(Consts::new().expect("constants cache"));
}

fn with_consts<T>(f: impl FnOnce(&mut Consts) -> T) -> T {
    CONSTS.with(|cc| f(&mut cc.borrow_mut()))
}

/// An exact rational or a tracked-precision binary float.
#[derive(Clone, Debug)]
pub enum Scalar {
    Exact(BigRational),
    Approx(BigFloat),
}

fn bigint_to_bigfloat(i: &BigInt) -> BigFloat {
    if i.is_zero() {
        return BigFloat::new(precision_bits());
    }
    let (sign, words) = i.to_u64_digits();
    let s = match sign {
        IntSign::Minus => Sign::Neg,
        _ => Sign::Pos,
    };
    // `from_words` reads the mantissa as a fraction in [0,1) scaled by 2^e.
    let e = (64 * words.len()) as astro_float::Exponent;
    BigFloat::from_words(&words, s, e)
}

fn rational_to_bigfloat(r: &BigRational, p: usize) -> BigFloat {
    let num = bigint_to_bigfloat(r.numer());
    let den = bigint_to_bigfloat(r.denom());
    num.div(&den, p, RM)
}

fn bigfloat_to_f64(f: &BigFloat) -> f64 {
    if f.is_zero() {
        return 0.0;
    }
    if f.is_nan() {
        return f64::NAN;
    }
    if f.is_inf_pos() {
        return f64::INFINITY;
    }
    if f.is_inf_neg() {
        return f64::NEG_INFINITY;
    }
    let (words, _n, sign, e, _inexact) = f.as_raw_parts().expect("finite non-zero float");
    // Mantissa words are little endian; the value is frac(words) * 2^e.
    let len = words.len();
    let top = words[len - 1] as f64;
    let mut v = top * 2f64.powi(e - 64);
    if len > 1 {
        v += words[len - 2] as f64 * 2f64.powi(e.saturating_sub(128));
    }
    if sign == Sign::Neg {
        -v
    } else {
        v
    }
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar::Exact(BigRational::zero())
    }

    pub fn one() -> Self {
        Scalar::Exact(BigRational::one())
    }

    pub fn from_int(i: i64) -> Self {
        Scalar::Exact(BigRational::from_integer(BigInt::from(i)))
    }

    pub fn from_bigint(i: BigInt) -> Self {
        Scalar::Exact(BigRational::from_integer(i))
    }

    /// Exact rational `n/d`. Panics if `d == 0`.
    pub fn from_ratio(n: i64, d: i64) -> Self {
        assert!(d != 0, "zero denominator");
        Scalar::Exact(BigRational::new(BigInt::from(n), BigInt::from(d)))
    }

    pub fn from_rational(r: BigRational) -> Self {
        Scalar::Exact(r)
    }

    /// Inexact scalar from an `f64` (the binary value is taken verbatim).
    pub fn approx_from_f64(f: f64) -> Self {
        Scalar::Approx(BigFloat::from_f64(f, precision_bits()))
    }

    /// e^(n/d), correctly rounded at the working precision. Always inexact.
    pub fn exp_of_ratio(n: i64, d: i64) -> Self {
        let p = precision_bits();
        let arg = rational_to_bigfloat(&BigRational::new(BigInt::from(n), BigInt::from(d)), p + 64);
        Scalar::Approx(with_consts(|cc| arg.exp(p, RM, cc)))
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Scalar::Exact(_))
    }

    pub fn as_exact(&self) -> Option<&BigRational> {
        match self {
            Scalar::Exact(r) => Some(r),
            Scalar::Approx(_) => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Exact(r) => r.is_zero(),
            Scalar::Approx(f) => f.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Exact(r) => r.is_one(),
            Scalar::Approx(f) => f.cmp(&BigFloat::from_word(1, precision_bits())) == Some(0),
        }
    }

    pub fn is_negative(&self) -> bool {
        match self {
            Scalar::Exact(r) => r.is_negative(),
            Scalar::Approx(f) => f.is_negative() && !f.is_zero(),
        }
    }

    pub fn is_positive(&self) -> bool {
        match self {
            Scalar::Exact(r) => r.is_positive(),
            Scalar::Approx(f) => f.is_positive() && !f.is_zero(),
        }
    }

    pub fn is_integer(&self) -> bool {
        match self {
            Scalar::Exact(r) => r.is_integer(),
            Scalar::Approx(f) => f.is_int(),
        }
    }

    pub fn to_bigfloat(&self) -> BigFloat {
        let p = precision_bits();
        match self {
            Scalar::Exact(r) => rational_to_bigfloat(r, p),
            Scalar::Approx(f) => f.clone(),
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Scalar::Exact(r) => r.to_f64().unwrap_or(f64::NAN),
            Scalar::Approx(f) => bigfloat_to_f64(f),
        }
    }

    pub fn abs(&self) -> Scalar {
        match self {
            Scalar::Exact(r) => Scalar::Exact(r.abs()),
            Scalar::Approx(f) => Scalar::Approx(f.abs()),
        }
    }

    pub fn neg(&self) -> Scalar {
        match self {
            Scalar::Exact(r) => Scalar::Exact(-r),
            Scalar::Approx(f) => Scalar::Approx(f.neg()),
        }
    }

    pub fn add(&self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Exact(a), Scalar::Exact(b)) => Scalar::Exact(a + b),
            _ => Scalar::Approx(self.to_bigfloat().add(&rhs.to_bigfloat(), precision_bits(), RM)),
        }
    }

    pub fn sub(&self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Exact(a), Scalar::Exact(b)) => Scalar::Exact(a - b),
            _ => Scalar::Approx(self.to_bigfloat().sub(&rhs.to_bigfloat(), precision_bits(), RM)),
        }
    }

    pub fn mul(&self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Exact(a), Scalar::Exact(b)) => Scalar::Exact(a * b),
            _ => Scalar::Approx(self.to_bigfloat().mul(&rhs.to_bigfloat(), precision_bits(), RM)),
        }
    }

    /// Panics on division by an exact zero.
    pub fn div(&self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Exact(a), Scalar::Exact(b)) => {
                assert!(!b.is_zero(), "division by zero");
                Scalar::Exact(a / b)
            }
            _ => Scalar::Approx(self.to_bigfloat().div(&rhs.to_bigfloat(), precision_bits(), RM)),
        }
    }

    pub fn pow_u(&self, e: u32) -> Scalar {
        match self {
            Scalar::Exact(r) => {
                if e == 0 {
                    Scalar::one()
                } else {
                    Scalar::Exact(num_traits::pow::pow(r.clone(), e as usize))
                }
            }
            Scalar::Approx(f) => {
                if e == 0 {
                    Scalar::one()
                } else {
                    Scalar::Approx(f.powi(e as usize, precision_bits(), RM))
                }
            }
        }
    }

    pub fn pow_i(&self, e: i64) -> Scalar {
        if e >= 0 {
            self.pow_u(e as u32)
        } else {
            Scalar::one().div(&self.pow_u((-e) as u32))
        }
    }

    /// Equality up to a relative tolerance; exact pairs compare exactly.
    pub fn approx_eq(&self, rhs: &Scalar, rel_tol: f64) -> bool {
        match (self, rhs) {
            (Scalar::Exact(a), Scalar::Exact(b)) => a == b,
            _ => {
                let p = precision_bits();
                let a = self.to_bigfloat();
                let b = rhs.to_bigfloat();
                let diff = a.sub(&b, p, RM).abs();
                if diff.is_zero() {
                    return true;
                }
                let scale = a.abs().max(&b.abs());
                let tol = BigFloat::from_f64(rel_tol, p).mul(&scale, p, RM);
                diff.cmp(&tol) <= Some(0)
            }
        }
    }

    /// |self| <= rel_tol * max(1, scale); used for residual-is-zero checks.
    pub fn approx_zero(&self, rel_tol: f64, scale: f64) -> bool {
        match self {
            Scalar::Exact(r) => {
                if r.is_zero() {
                    return true;
                }
                let bound = BigRational::from_float(rel_tol * scale.max(1.0)).unwrap_or_default();
                r.abs() <= bound
            }
            Scalar::Approx(f) => {
                let p = precision_bits();
                let bound = BigFloat::from_f64(rel_tol * scale.max(1.0), p);
                f.abs().cmp(&bound) <= Some(0)
            }
        }
    }
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Scalar::Exact(a), Scalar::Exact(b)) => a == b,
            _ => self.to_bigfloat().cmp(&other.to_bigfloat()) == Some(0),
        }
    }
}

impl PartialOrd for Scalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match (self, other) {
            (Scalar::Exact(a), Scalar::Exact(b)) => a.partial_cmp(b),
            _ => self.to_bigfloat().cmp(&other.to_bigfloat()).map(|s| s.cmp(&0)),
        }
    }
}

macro_rules! impl_binop {
    ($trait:ident, $method:ident, $inner:ident) => {
        impl std::ops::$trait for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                Scalar::$inner(self, rhs)
            }
        }
        impl std::ops::$trait for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                Scalar::$inner(&self, &rhs)
            }
        }
        impl std::ops::$trait<&Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                Scalar::$inner(&self, rhs)
            }
        }
    };
}

impl_binop!(Add, add, add);
impl_binop!(Sub, sub, sub);
impl_binop!(Mul, mul, mul);
impl_binop!(Div, div, div);

impl std::ops::Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar::neg(self)
    }
}

impl std::ops::Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar::neg(&self)
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Exact(r) => write!(f, "{}", r),
            Scalar::Approx(v) => write!(f, "{}", v),
        }
    }
}

/// Parses a decimal float string produced by [`fmt::Display`] back into an
/// inexact scalar at the working precision.
pub fn parse_approx(s: &str) -> Option<Scalar> {
    let p = precision_bits();
    let f = with_consts(|cc| BigFloat::parse(s, Radix::Dec, p, RM, cc));
    if f.is_nan() && s.to_ascii_lowercase() != "nan" {
        None
    } else {
        Some(Scalar::Approx(f))
    }
}

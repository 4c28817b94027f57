//! Small exact combinatorial helpers used throughout the crate.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::scalar::Scalar;

pub fn binomial_big(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    num_integer::binomial(BigInt::from(n), BigInt::from(k))
}

pub fn binomial(n: usize, k: usize) -> Scalar {
    Scalar::from_bigint(binomial_big(n, k))
}

pub fn factorial_big(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

pub fn factorial(n: usize) -> Scalar {
    Scalar::from_bigint(factorial_big(n))
}

/// (2n-1)!! = (2n)!/(2^n n!), the 2n-th moment of a standard normal.
pub fn odd_double_factorial(n: usize) -> BigInt {
    (0..n).fold(BigInt::one(), |acc, i| acc * BigInt::from(2 * i + 1))
}

/// x (x+1) ... (x+k-1); the empty product for k = 0.
pub fn rising_product(x: &Scalar, k: usize) -> Scalar {
    let mut acc = Scalar::one();
    for i in 0..k {
        acc = &acc * &(x + &Scalar::from_int(i as i64));
    }
    acc
}

/// Generalized binomial coefficient C(x, k) = x (x-1) ... (x-k+1) / k!.
pub fn gen_binomial(x: &Scalar, k: usize) -> Scalar {
    let mut acc = Scalar::one();
    for i in 0..k {
        acc = &acc * &(x - &Scalar::from_int(i as i64));
    }
    acc.div(&factorial(k))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomials() {
        assert_eq!(binomial_big(5, 2), BigInt::from(10));
        assert_eq!(binomial_big(3, 5), BigInt::zero());
        assert_eq!(binomial_big(0, 0), BigInt::one());
    }

    #[test]
    fn double_factorial_is_normal_even_moment() {
        // (2n)!/(2^n n!) computed directly for n = 3: 720/48 = 15
        assert_eq!(odd_double_factorial(3), BigInt::from(15));
        assert_eq!(odd_double_factorial(0), BigInt::one());
    }

    #[test]
    fn gen_binomial_half() {
        // C(1/2, 2) = (1/2)(-1/2)/2 = -1/8
        let half = Scalar::from_ratio(1, 2);
        assert_eq!(gen_binomial(&half, 2), Scalar::from_ratio(-1, 8));
        assert_eq!(gen_binomial(&half, 0), Scalar::one());
    }

    #[test]
    fn rising() {
        // (1/2)(3/2) = 3/4
        let half = Scalar::from_ratio(1, 2);
        assert_eq!(rising_product(&half, 2), Scalar::from_ratio(3, 4));
    }
}

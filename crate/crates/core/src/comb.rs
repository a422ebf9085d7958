//! Exact integer combinatorics shared by the closed formulas and the tests.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};
pub use num_traits::{One, Zero};

pub type Int = BigInt;
pub type Rat = BigRational;

pub fn int(v: i64) -> Int {
    Int::from(v)
}

pub fn rat(v: i64) -> Rat {
    Rat::from_integer(Int::from(v))
}

pub fn ratio(num: i64, den: i64) -> Rat {
    Rat::new(Int::from(num), Int::from(den))
}

pub fn factorial(n: u64) -> Int {
    let mut r = Int::one();
    for i in 2..=n {
        r *= Int::from(i);
    }
    r
}

/// Binomial coefficient; zero when k > n.
pub fn binomial(n: u64, k: u64) -> Int {
    if k > n {
        return Int::zero();
    }
    let k = k.min(n - k);
    let mut r = Int::one();
    for i in 0..k {
        r = r * Int::from(n - i) / Int::from(i + 1);
    }
    r
}

/// Catalan number C(2n, n)/(n+1).
pub fn catalan(n: u64) -> Int {
    binomial(2 * n, n) / Int::from(n + 1)
}

/// Double factorial with (-1)!! = 0!! = 1: (2m)!! = 2^m m!, (2m-1)!! = (2m)!/(2^m m!).
pub fn double_factorial(m: i64) -> Int {
    assert!(m >= -1, "double factorial undefined below -1, got {m}");
    let mut r = Int::one();
    let mut i = m;
    while i > 1 {
        r *= Int::from(i);
        i -= 2;
    }
    r
}

/// Faithful conversion of an exact rational to f64, robust for values whose
/// numerator and denominator far exceed f64 range individually.
pub fn rat_to_f64(r: &Rat) -> f64 {
    if r.is_zero() {
        return 0.0;
    }
    let num = r.numer().abs();
    let den = r.denom().clone();
    // Scale so the integer quotient keeps ~96 significant bits.
    let shift: i64 = 96 - (num.bits() as i64 - den.bits() as i64);
    let q = if shift >= 0 {
        (num << shift as u64) / den
    } else {
        num / (den << (-shift) as u64)
    };
    let f = q.to_f64().unwrap_or(f64::INFINITY) * (-shift as f64).exp2();
    if r.is_negative() {
        -f
    } else {
        f
    }
}

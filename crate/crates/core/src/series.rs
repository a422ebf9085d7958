//! Truncated formal power series over exact rationals.
//!
//! Every series carries an explicit truncation order and an OGF/EGF tag.
//! Binary operations truncate to the shorter operand; nothing ever extends
//! an order silently, since fabricated zero coefficients would corrupt the
//! exact comparisons downstream.

use std::ops::{Add, Mul, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::comb::{factorial, rat_to_f64, Rat};
use crate::error::{Error, Result};

/// Common-denominator view of a coefficient slice. The rational coefficient
/// n is nums[n] / den. Heavy inner loops run on the integer numerators so
/// no gcd reductions happen per term; results are reduced once on repack.
struct ZSeries {
    nums: Vec<BigInt>,
    den: BigInt,
}

/// Integer-operand fast paths: Ratio's general routines reduce through
/// big-integer gcds even against a denominator of 1, which dominates the
/// runtime at high truncation orders.
fn rat_mul(a: &Rat, b: &Rat) -> Rat {
    if a.denom().is_one() && b.denom().is_one() {
        Rat::new_raw(a.numer() * b.numer(), BigInt::one())
    } else {
        a * b
    }
}

fn rat_add(a: &Rat, b: &Rat) -> Rat {
    if a.denom().is_one() && b.denom().is_one() {
        Rat::new_raw(a.numer() + b.numer(), BigInt::one())
    } else {
        a + b
    }
}

fn rat_sub(a: &Rat, b: &Rat) -> Rat {
    if a.denom().is_one() && b.denom().is_one() {
        Rat::new_raw(a.numer() - b.numer(), BigInt::one())
    } else {
        a - b
    }
}

impl ZSeries {
    fn from_coeffs(coeffs: &[Rat]) -> ZSeries {
        let mut den = BigInt::one();
        for c in coeffs {
            let d = c.denom();
            if !d.is_one() {
                den = &den / den.gcd(d) * d;
            }
        }
        let nums = coeffs
            .iter()
            .map(|c| {
                if den.is_one() {
                    c.numer().clone()
                } else if c.denom().is_one() {
                    c.numer() * &den
                } else {
                    c.numer() * (&den / c.denom())
                }
            })
            .collect();
        ZSeries { nums, den }
    }

    fn into_coeffs(self) -> Vec<Rat> {
        if self.den.is_one() {
            self.nums.into_iter().map(Rat::from_integer).collect()
        } else {
            self.nums
                .into_iter()
                .map(|n| Rat::new(n, self.den.clone()))
                .collect()
        }
    }
}

/// How the stored coefficients are read. EGF series store the plain
/// coefficient of x^n; the labeled count is n! times that, applied only on
/// extraction, so the ring operations stay uniform across both kinds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SeriesKind {
    Ogf,
    Egf,
}

/// The four ring operations, for the checked entry point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// A univariate power series truncated at order N: `coeffs[n]` is the
/// coefficient of x^n and there are exactly N + 1 entries.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerSeries {
    kind: SeriesKind,
    coeffs: Vec<Rat>,
}

impl PowerSeries {
    pub fn new(kind: SeriesKind, coeffs: Vec<Rat>) -> Self {
        assert!(!coeffs.is_empty(), "a series needs at least its constant term");
        Self { kind, coeffs }
    }

    pub fn zero(kind: SeriesKind, order: usize) -> Self {
        Self::new(kind, vec![Rat::zero(); order + 1])
    }

    pub fn one(kind: SeriesKind, order: usize) -> Self {
        Self::constant(kind, Rat::one(), order)
    }

    pub fn constant(kind: SeriesKind, value: Rat, order: usize) -> Self {
        let mut coeffs = vec![Rat::zero(); order + 1];
        coeffs[0] = value;
        Self::new(kind, coeffs)
    }

    /// c * x^degree as a series of the given order.
    pub fn monomial(kind: SeriesKind, degree: usize, value: Rat, order: usize) -> Self {
        assert!(degree <= order, "monomial degree {degree} above order {order}");
        let mut coeffs = vec![Rat::zero(); order + 1];
        coeffs[degree] = value;
        Self::new(kind, coeffs)
    }

    /// Series with the given integer coefficients; order = len - 1.
    pub fn from_ints(kind: SeriesKind, coeffs: &[i64]) -> Self {
        Self::new(kind, coeffs.iter().map(|&c| crate::comb::rat(c)).collect())
    }

    pub fn kind(&self) -> SeriesKind {
        self.kind
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn coeff(&self, n: usize) -> &Rat {
        assert!(
            n <= self.order(),
            "coefficient {n} past truncation order {}",
            self.order()
        );
        &self.coeffs[n]
    }

    /// Coefficient as a count: n! * [x^n] for EGF series, [x^n] otherwise.
    pub fn counting_coeff(&self, n: usize) -> Rat {
        match self.kind {
            SeriesKind::Ogf => self.coeff(n).clone(),
            SeriesKind::Egf => self.coeff(n) * Rat::from_integer(factorial(n as u64)),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Rat::is_zero)
    }

    /// Index of the lowest nonzero coefficient, None for the zero series.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn truncated(&self, order: usize) -> Self {
        assert!(order <= self.order(), "cannot truncate {} up to {order}", self.order());
        Self::new(self.kind, self.coeffs[..=order].to_vec())
    }

    /// Extend with zero coefficients. Internal only: the zeros are not real
    /// information, so callers must overwrite them (Newton iteration does).
    pub(crate) fn padded_to(&self, order: usize) -> Self {
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(order + 1, Rat::zero());
        Self::new(self.kind, coeffs)
    }

    pub fn scale(&self, factor: &Rat) -> Self {
        Self::new(
            self.kind,
            self.coeffs.iter().map(|c| rat_mul(c, factor)).collect(),
        )
    }

    pub fn scale_int(&self, factor: i64) -> Self {
        self.scale(&crate::comb::rat(factor))
    }

    /// Multiply by x^k; the order grows by k (all coefficients stay exact).
    pub fn shifted_up(&self, k: usize) -> Self {
        let mut coeffs = vec![Rat::zero(); k];
        coeffs.extend_from_slice(&self.coeffs);
        Self::new(self.kind, coeffs)
    }

    /// Divide by x^k; errors unless the first k coefficients vanish.
    pub fn shifted_down(&self, k: usize) -> Result<Self> {
        if k == 0 {
            return Ok(self.clone());
        }
        let val = self.valuation().unwrap_or(usize::MAX);
        if val < k {
            return Err(Error::ValuationError {
                dividend: val,
                divisor: k,
            });
        }
        assert!(k <= self.order(), "shift {k} would empty the series");
        Ok(Self::new(self.kind, self.coeffs[k..].to_vec()))
    }

    fn binop(&self, rhs: &Self, sub: bool) -> Self {
        assert_eq!(self.kind, rhs.kind, "cannot combine an OGF with an EGF");
        let order = self.order().min(rhs.order());
        let coeffs = (0..=order)
            .map(|n| {
                if sub {
                    rat_sub(&self.coeffs[n], &rhs.coeffs[n])
                } else {
                    rat_add(&self.coeffs[n], &rhs.coeffs[n])
                }
            })
            .collect();
        Self::new(self.kind, coeffs)
    }

    fn convolve(&self, rhs: &Self) -> Self {
        assert_eq!(self.kind, rhs.kind, "cannot combine an OGF with an EGF");
        let order = self.order().min(rhs.order());
        let a = ZSeries::from_coeffs(&self.coeffs[..=order]);
        let b = ZSeries::from_coeffs(&rhs.coeffs[..=order]);
        let mut nums = vec![BigInt::zero(); order + 1];
        for (i, ai) in a.nums.iter().enumerate() {
            if ai.is_zero() {
                continue;
            }
            for (j, bj) in b.nums.iter().enumerate().take(order + 1 - i) {
                if !bj.is_zero() {
                    nums[i + j] += ai * bj;
                }
            }
        }
        Self::new(
            self.kind,
            ZSeries {
                nums,
                den: a.den * b.den,
            }
            .into_coeffs(),
        )
    }

    /// Multiplicative inverse mod x^(order+1) by Newton doubling; the
    /// constant term must be nonzero (callers check).
    fn reciprocal_to(&self, order: usize) -> Self {
        debug_assert!(!self.coeffs[0].is_zero());
        let mut r = Self::constant(self.kind, Rat::one() / &self.coeffs[0], 0);
        let mut correct = 1usize;
        while correct <= order {
            let m = (correct * 2).min(order + 1) - 1;
            let b = self.truncated(m);
            let r_pad = r.padded_to(m);
            let prod = &b * &r_pad;
            let two_minus = &Self::constant(self.kind, crate::comb::rat(2), m) - &prod;
            r = &r_pad * &two_minus;
            correct = m + 1;
        }
        r
    }

    /// Termwise antiderivative with zero constant term; order grows by one.
    fn integrate(&self) -> Self {
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(Rat::zero());
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                coeffs.push(Rat::zero());
            } else {
                coeffs.push(Rat::new(
                    c.numer().clone(),
                    c.denom() * BigInt::from(i as u64 + 1),
                ));
            }
        }
        Self::new(self.kind, coeffs)
    }

    /// Exact division. The divisor's leading x-power is cancelled first, so
    /// e.g. (x^2 T') / T is fine even though T vanishes at 0; a divisor
    /// valuation above the dividend's is a genuine pole and errors out.
    pub fn div(&self, rhs: &Self) -> Result<Self> {
        if self.kind != rhs.kind {
            return Err(Error::KindMismatch);
        }
        let Some(bval) = rhs.valuation() else {
            return Err(Error::DivisionByZeroSeries);
        };
        if self.is_zero() {
            let order = self.order().min(rhs.order()).saturating_sub(bval);
            return Ok(Self::zero(self.kind, order));
        }
        let aval = self.valuation().expect("nonzero");
        if aval < bval {
            return Err(Error::ValuationError {
                dividend: aval,
                divisor: bval,
            });
        }
        // aval >= bval bounds both orders from below, so this cannot underflow
        let order = self.order().min(rhs.order()) - bval;
        let a = Self::new(self.kind, self.coeffs[bval..=bval + order].to_vec());
        let b = Self::new(self.kind, rhs.coeffs[bval..=bval + order].to_vec());
        Ok(&a * &b.reciprocal_to(order))
    }

    /// Square root with constant term +1; requires the input's constant term
    /// to be exactly 1 so all coefficients stay rational.
    pub fn sqrt(&self) -> Result<Self> {
        if !self.coeffs[0].is_one() {
            return Err(Error::NonUnitConstantTerm {
                got: self.coeffs[0].to_string(),
            });
        }
        let order = self.order();
        let half = crate::comb::ratio(1, 2);
        let mut r = vec![Rat::zero(); order + 1];
        r[0] = Rat::one();
        for n in 1..=order {
            let mut acc = self.coeffs[n].clone();
            for i in 1..n {
                if !r[i].is_zero() && !r[n - i].is_zero() {
                    acc -= &r[i] * &r[n - i];
                }
            }
            r[n] = acc * &half;
        }
        Ok(Self::new(self.kind, r))
    }

    /// Composition self(inner); inner must vanish at 0. The outer series is
    /// treated as the polynomial of its kept coefficients, and the result is
    /// truncated at inner's order and carries inner's kind.
    pub fn compose(&self, inner: &Self) -> Result<Self> {
        if !inner.coeffs[0].is_zero() {
            return Err(Error::NonzeroInnerConstant {
                got: inner.coeffs[0].to_string(),
            });
        }
        let order = inner.order();
        let mut acc = Self::constant(
            inner.kind,
            self.coeffs.last().expect("nonempty").clone(),
            order,
        );
        for c in self.coeffs.iter().rev().skip(1) {
            acc = acc.convolve(inner);
            acc.coeffs[0] += c;
        }
        Ok(acc)
    }

    /// Termwise formal derivative; the order drops by one.
    pub fn derivative(&self) -> Self {
        if self.order() == 0 {
            return Self::zero(self.kind, 0);
        }
        let coeffs = self.coeffs[1..]
            .iter()
            .enumerate()
            .map(|(i, c)| rat_mul(c, &crate::comb::rat(i as i64 + 1)))
            .collect();
        Self::new(self.kind, coeffs)
    }

    /// exp of a series vanishing at 0, by Newton doubling with
    /// E <- E (1 + a - ln E) and ln E = integral of E'/E.
    pub(crate) fn exp(&self) -> Result<Self> {
        if !self.coeffs[0].is_zero() {
            return Err(Error::NonzeroInnerConstant {
                got: self.coeffs[0].to_string(),
            });
        }
        let order = self.order();
        let mut e = Self::one(self.kind, 0);
        let mut correct = 1usize;
        while correct <= order {
            let m = (correct * 2).min(order + 1) - 1;
            let e_pad = e.padded_to(m);
            let ln_e = if m == 0 {
                Self::zero(self.kind, 0)
            } else {
                (&e_pad.derivative() * &e_pad.reciprocal_to(m - 1))
                    .integrate()
                    .truncated(m)
            };
            let mut correction = &self.truncated(m) - &ln_e;
            correction.coeffs[0] += Rat::one();
            e = &e_pad * &correction;
            correct = m + 1;
        }
        Ok(e)
    }

    /// Horner evaluation of the truncated polynomial at a float point.
    pub fn eval_f64(&self, x: f64) -> f64 {
        let mut acc = 0.0;
        for c in self.coeffs.iter().rev() {
            acc = acc * x + rat_to_f64(c);
        }
        acc
    }
}

/// Checked arithmetic entry covering all four operations, including the
/// OGF/EGF tag check the infix operators enforce by panicking.
pub fn arith(a: &PowerSeries, b: &PowerSeries, op: ArithOp) -> Result<PowerSeries> {
    if a.kind != b.kind {
        return Err(Error::KindMismatch);
    }
    match op {
        ArithOp::Add => Ok(a.binop(b, false)),
        ArithOp::Sub => Ok(a.binop(b, true)),
        ArithOp::Mul => Ok(a.convolve(b)),
        ArithOp::Div => a.div(b),
    }
}

impl Add for &PowerSeries {
    type Output = PowerSeries;
    fn add(self, rhs: Self) -> PowerSeries {
        self.binop(rhs, false)
    }
}

impl Sub for &PowerSeries {
    type Output = PowerSeries;
    fn sub(self, rhs: Self) -> PowerSeries {
        self.binop(rhs, true)
    }
}

impl Mul for &PowerSeries {
    type Output = PowerSeries;
    fn mul(self, rhs: Self) -> PowerSeries {
        self.convolve(rhs)
    }
}

/// Render an exact rational the way the CSV schema wants it: bare integers,
/// `p/q` otherwise.
pub fn rat_string(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parse the `rat_string` format back.
pub fn rat_parse(s: &str) -> Option<Rat> {
    let mut parts = s.splitn(2, '/');
    let num: num_bigint::BigInt = parts.next()?.parse().ok()?;
    match parts.next() {
        None => Some(Rat::from_integer(num)),
        Some(d) => {
            let den: num_bigint::BigInt = d.parse().ok()?;
            if den.is_zero() {
                None
            } else {
                Some(Rat::new(num, den))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::comb::{binomial, rat, ratio, Rat};
    use proptest::prelude::*;

    use SeriesKind::Ogf;

    fn geom_4x(order: usize) -> PowerSeries {
        // 1/(1-4x)
        let one = PowerSeries::one(Ogf, order);
        let base = PowerSeries::from_ints(Ogf, &[1, -4]).padded_to(order);
        one.div(&base).unwrap()
    }

    #[test]
    fn geometric_reciprocal() {
        let g = geom_4x(3);
        for (n, want) in [1i64, 4, 16, 64].iter().enumerate() {
            assert_eq!(g.coeff(n), &rat(*want));
        }
    }

    #[test]
    fn x2_over_1m4x() {
        let g = geom_4x(5).shifted_up(2);
        assert_eq!(g.coeff(5), &rat(64));
    }

    #[test]
    fn x2_over_1m4x_squared() {
        // Oracle: [x^n] 1/(1-4x)^2 = sum_i 4^i 4^(n-i) = (n+1) 4^n by direct
        // convolution of the geometric series with itself.
        let n_max = 5;
        let g = geom_4x(n_max);
        let sq = (&g * &g).shifted_up(2);
        let mut expect = vec![0i64; n_max + 2];
        for n in 0..n_max {
            let mut s = 0i64;
            for i in 0..=n {
                s += 4i64.pow(i as u32) * 4i64.pow((n - i) as u32);
            }
            expect[n + 2] = s;
        }
        for (n, want) in [(2usize, 1i64), (3, 8), (4, 48), (5, 256)] {
            assert_eq!(sq.coeff(n), &rat(want));
            assert_eq!(expect[n], want);
        }
    }

    #[test]
    fn sqrt_of_one() {
        let one = PowerSeries::one(Ogf, 4);
        assert_eq!(one.sqrt().unwrap(), one);
    }

    #[test]
    fn inverse_sqrt_1m4x_is_central_binomials() {
        let order = 6;
        let s = PowerSeries::from_ints(Ogf, &[1, -4])
            .padded_to(order)
            .sqrt()
            .unwrap();
        let inv = PowerSeries::one(Ogf, order).div(&s).unwrap();
        for n in 0..=3u64 {
            assert_eq!(
                inv.coeff(n as usize),
                &Rat::from_integer(binomial(2 * n, n)),
                "n = {n}"
            );
        }
    }

    #[test]
    fn catalan_shift_from_sqrt() {
        // (1 - sqrt(1-4x))/2 has coefficients 1, 1, 2, 5 at x^1..x^4
        let order = 6;
        let s = PowerSeries::from_ints(Ogf, &[1, -4])
            .padded_to(order)
            .sqrt()
            .unwrap();
        let t = (&PowerSeries::one(Ogf, order) - &s).scale(&ratio(1, 2));
        for (n, want) in [(1, 1i64), (2, 1), (3, 2), (4, 5)] {
            assert_eq!(t.coeff(n), &rat(want));
        }
    }

    #[test]
    fn compose_square_polynomial() {
        let outer = PowerSeries::from_ints(Ogf, &[0, 0, 1]); // u^2
        let inner = PowerSeries::from_ints(Ogf, &[0, 1, 1, 0, 0]); // x + x^2
        let got = outer.compose(&inner).unwrap();
        assert_eq!(got, PowerSeries::from_ints(Ogf, &[0, 0, 1, 2, 1]));
    }

    #[test]
    fn derivative_basic() {
        let x2 = PowerSeries::from_ints(Ogf, &[0, 0, 1]);
        assert_eq!(x2.derivative(), PowerSeries::from_ints(Ogf, &[0, 2]));
    }

    #[test]
    fn exp_matches_reference() {
        let x = PowerSeries::from_ints(Ogf, &[0, 1, 0, 0, 0]);
        let e = x.exp().unwrap();
        for n in 0..=4u64 {
            assert_eq!(
                e.coeff(n as usize),
                &Rat::new(1.into(), crate::comb::factorial(n)),
            );
        }
    }

    #[test]
    fn div_by_zero_series() {
        let a = PowerSeries::one(Ogf, 3);
        let z = PowerSeries::zero(Ogf, 3);
        assert_eq!(a.div(&z), Err(Error::DivisionByZeroSeries));
    }

    #[test]
    fn div_pole_at_zero() {
        let one = PowerSeries::one(Ogf, 3);
        let x = PowerSeries::from_ints(Ogf, &[0, 1, 0, 0]);
        assert_eq!(
            one.div(&x),
            Err(Error::ValuationError {
                dividend: 0,
                divisor: 1
            })
        );
    }

    #[test]
    fn kind_mismatch_is_checked() {
        let a = PowerSeries::one(Ogf, 2);
        let b = PowerSeries::one(SeriesKind::Egf, 2);
        assert_eq!(arith(&a, &b, ArithOp::Add), Err(Error::KindMismatch));
        assert_eq!(a.div(&b), Err(Error::KindMismatch));
    }

    #[test]
    #[should_panic(expected = "cannot combine")]
    fn kind_mismatch_panics_infix() {
        let a = PowerSeries::one(Ogf, 2);
        let b = PowerSeries::one(SeriesKind::Egf, 2);
        let _ = &a + &b;
    }

    #[test]
    fn sqrt_requires_unit_constant() {
        let a = PowerSeries::from_ints(Ogf, &[4, 1]);
        assert!(matches!(a.sqrt(), Err(Error::NonUnitConstantTerm { .. })));
    }

    #[test]
    fn compose_requires_vanishing_inner() {
        let outer = PowerSeries::one(Ogf, 3);
        let inner = PowerSeries::from_ints(Ogf, &[1, 1, 0, 0]);
        assert!(matches!(
            outer.compose(&inner),
            Err(Error::NonzeroInnerConstant { .. })
        ));
    }

    #[test]
    fn arith_truncates_to_shorter_operand() {
        let a = PowerSeries::one(Ogf, 8);
        let b = PowerSeries::one(Ogf, 3);
        assert_eq!((&a + &b).order(), 3);
        assert_eq!((&a * &b).order(), 3);
    }

    #[test]
    fn series_are_shareable_across_threads() {
        fn assert_send_sync<T: Send + Sync>() {}
        assert_send_sync::<PowerSeries>();
        assert_send_sync::<crate::family::TreeFamily>();
        assert_send_sync::<crate::family::SingularExpansion>();
        assert_send_sync::<crate::pathgf::PathGf>();
        assert_send_sync::<crate::bivariate::BivariateSeries>();
    }

    #[test]
    fn rat_string_roundtrip() {
        assert_eq!(rat_string(&rat(7)), "7");
        assert_eq!(rat_string(&ratio(-3, 4)), "-3/4");
        assert_eq!(rat_parse("7"), Some(rat(7)));
        assert_eq!(rat_parse("-3/4"), Some(ratio(-3, 4)));
        assert_eq!(rat_parse("1/0"), None);
    }

    fn small_series(unit_constant: bool) -> impl Strategy<Value = PowerSeries> {
        (prop::collection::vec(-9i64..=9, 1..=13)).prop_map(move |mut v| {
            if unit_constant {
                v[0] = 1;
            }
            PowerSeries::from_ints(Ogf, &v)
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]

        #[test]
        fn mul_div_roundtrip(a in small_series(false), b in small_series(true)) {
            let ab = &a * &b;
            let back = ab.div(&b).unwrap();
            prop_assert_eq!(back, a.truncated(ab.order()));
        }

        #[test]
        fn sqrt_squares_back(a in small_series(true)) {
            let r = a.sqrt().unwrap();
            prop_assert_eq!(&r * &r, a);
        }

        #[test]
        fn product_rule(a in small_series(false), b in small_series(false)) {
            // an order-0 operand leaves nothing of the derivative to compare
            prop_assume!(a.order() >= 1 && b.order() >= 1);
            let lhs = (&a * &b).derivative();
            let rhs = &(&a.derivative() * &b) + &(&a * &b.derivative());
            let o = lhs.order().min(rhs.order());
            prop_assert_eq!(lhs.truncated(o), rhs.truncated(o));
        }

        #[test]
        fn compose_additive_in_outer(o1 in small_series(false), o2 in small_series(false), mut iv in prop::collection::vec(-9i64..=9, 2..=13)) {
            iv[0] = 0;
            let inner = PowerSeries::from_ints(Ogf, &iv);
            let sum = arith(&o1, &o2, ArithOp::Add).unwrap();
            let lhs = sum.compose(&inner).unwrap();
            let rhs = &o1.truncated(sum.order()).compose(&inner).unwrap()
                + &o2.truncated(sum.order()).compose(&inner).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
    }
}

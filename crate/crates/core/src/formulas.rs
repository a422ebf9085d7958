//! Exact closed-form coefficients and expectations for the reference-table rows,
//! their asymptotic expansions, and the universal moment asymptotics driven
//! by a singular expansion.

use std::f64::consts::PI;

use num_traits::Zero;

use crate::comb::{binomial, double_factorial, factorial, rat_to_f64, Int, Rat};
use crate::error::{Error, Result};
use crate::family::{FamilyName, SingularExpansion};
use crate::pathgf::{Measure, PathGf, StatKind};

/// One closed coefficient or expectation row: an exact evaluator over
/// big integers with its validity floor (n >= 2, or 3 for leaf pairs).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ClosedFormula {
    pub family: FamilyName,
    pub stat: StatKind,
    pub measure: Measure,
    pub floor: u64,
}

/// Look up a row; None when no exact formula exists for it
/// (binary root/vertical/arbitrary expectations only appear asymptotically).
pub fn closed_formula(family: FamilyName, stat: StatKind, measure: Measure) -> Option<ClosedFormula> {
    let present = match (family, measure) {
        (FamilyName::General, _) => true,
        (FamilyName::Binary, Measure::Expectation) => matches!(
            stat,
            StatKind::RootToLeaf | StatKind::VerticalToLeaf | StatKind::LeafToLeaf
        ),
        (FamilyName::Binary, _) => true,
        _ => false,
    };
    present.then_some(ClosedFormula {
        family,
        stat,
        measure,
        floor: if stat == StatKind::LeafToLeaf { 3 } else { 2 },
    })
}

pub fn all_closed_formulas() -> Vec<ClosedFormula> {
    let mut rows = Vec::new();
    for family in [FamilyName::General, FamilyName::Binary] {
        for stat in StatKind::ALL {
            for measure in Measure::ALL {
                if let Some(f) = closed_formula(family, stat, measure) {
                    rows.push(f);
                }
            }
        }
    }
    rows
}

fn irat(i: Int) -> Rat {
    Rat::from_integer(i)
}

fn dfac(m: i64) -> Rat {
    irat(double_factorial(m))
}

fn pow4(e: u64) -> Int {
    Int::from(4u32).pow(e as u32)
}

/// Evaluate a closed row exactly.
pub fn closed_eval(formula: &ClosedFormula, n: u64) -> Result<Rat> {
    if n < formula.floor {
        return Err(Error::BelowValidityFloor {
            floor: formula.floor,
            n,
        });
    }
    use FamilyName::{Binary, General};
    use Measure::{Count, Edges, Expectation};
    use StatKind::*;
    let value = match (formula.family, formula.stat, formula.measure) {
        (General, RootVertical, Count) => irat(binomial(2 * n - 2, n)),
        (General, RootVertical, Edges) => irat(pow4(n - 1) - binomial(2 * n - 2, n - 1)) / crate::comb::rat(2),
        (General, RootVertical, Expectation) => {
            crate::comb::rat(n as i64)
                * (dfac(2 * n as i64 - 4) / dfac(2 * n as i64 - 3)
                    - crate::comb::ratio(1, 2 * (n as i64 - 1)))
        }
        (General, Vertical, Count) => irat(pow4(n - 1) - binomial(2 * n - 2, n - 1)) / crate::comb::rat(2),
        (General, Vertical, Edges) => irat(factorial(2 * n - 3)) / irat(factorial(n - 2).pow(2)),
        (General, Vertical, Expectation) => {
            crate::comb::rat(n as i64 - 1) / (dfac(2 * n as i64 - 2) / dfac(2 * n as i64 - 3) - crate::comb::rat(1))
        }
        (General, RootToLeaf, Count) => irat(binomial(2 * n - 2, n - 1)) / crate::comb::rat(2),
        (General, RootToLeaf, Edges) => irat(pow4(n - 2)),
        (General, RootToLeaf, Expectation) => dfac(2 * n as i64 - 2) / (crate::comb::rat(2) * dfac(2 * n as i64 - 3)),
        (General, VerticalToLeaf, Count) => irat(pow4(n - 2)),
        (General, VerticalToLeaf, Edges) => {
            irat(factorial(2 * n - 3)) / (crate::comb::rat(2) * irat(factorial(n - 2).pow(2)))
                + irat(pow4(n - 2)) / crate::comb::rat(2)
        }
        (General, VerticalToLeaf, Expectation) => {
            dfac(2 * n as i64 - 3) / (crate::comb::rat(2) * dfac(2 * n as i64 - 4)) + crate::comb::ratio(1, 2)
        }
        (General, Arbitrary, Count) => irat(factorial(2 * n - 3)) / irat(factorial(n - 2).pow(2)),
        (General, Arbitrary, Edges) => crate::comb::rat(n as i64 - 1) * irat(pow4(n - 2)),
        (General, Arbitrary, Expectation) => dfac(2 * n as i64 - 2) / (crate::comb::rat(2) * dfac(2 * n as i64 - 3)),
        (General, LeafToLeaf, Count) => irat(factorial(2 * n - 5)) / irat(factorial(n - 3).pow(2)),
        (General, LeafToLeaf, Edges) => {
            crate::comb::rat(n as i64 - 2) * irat(pow4(n - 3))
                + irat(factorial(2 * n - 5)) / irat(factorial(n - 3).pow(2))
        }
        (General, LeafToLeaf, Expectation) => {
            dfac(2 * n as i64 - 4) / (crate::comb::rat(2) * dfac(2 * n as i64 - 5)) + crate::comb::rat(1)
        }
        (Binary, RootVertical, Count) => irat(binomial(2 * n + 2, n + 1) - Int::from(3) * binomial(2 * n, n)),
        (Binary, RootVertical, Edges) => {
            irat(pow4(n) - binomial(2 * n + 2, n + 1) + binomial(2 * n, n))
        }
        (Binary, Vertical, Count) => irat(pow4(n) - binomial(2 * n + 2, n + 1) + binomial(2 * n, n)),
        (Binary, Vertical, Edges) => {
            irat(factorial(2 * n + 3)) / irat(factorial(n + 1).pow(2))
                - irat(Int::from(3) * factorial(2 * n + 1)) / irat(factorial(n).pow(2))
                - crate::comb::rat(3) * irat(pow4(n))
        }
        (Binary, RootToLeaf, Count) => irat(binomial(2 * n - 2, n - 1)),
        (Binary, RootToLeaf, Edges) => irat(pow4(n - 1) - binomial(2 * n - 2, n - 1)),
        (Binary, RootToLeaf, Expectation) => dfac(2 * n as i64 - 2) / dfac(2 * n as i64 - 3) - crate::comb::rat(1),
        (Binary, VerticalToLeaf, Count) => irat(pow4(n - 1) - binomial(2 * n - 2, n - 1)),
        (Binary, VerticalToLeaf, Edges) => {
            irat(factorial(2 * n - 1)) / irat(factorial(n - 1).pow(2)) - irat(pow4(n - 1))
        }
        (Binary, VerticalToLeaf, Expectation) => {
            (dfac(2 * n as i64 - 1) - dfac(2 * n as i64 - 2))
                / (dfac(2 * n as i64 - 2) - dfac(2 * n as i64 - 3))
        }
        (Binary, Arbitrary, Count) => {
            irat(binomial(n, 2) * binomial(2 * n, n)) / crate::comb::rat(n as i64 + 1)
        }
        (Binary, Arbitrary, Edges) => {
            crate::comb::ratio(n as i64 + 2, 2) * irat(pow4(n))
                - irat(factorial(2 * n + 1)) / irat(factorial(n).pow(2))
        }
        (Binary, LeafToLeaf, Count) => irat(pow4(n - 3)),
        (Binary, LeafToLeaf, Edges) => {
            crate::comb::rat(2) * irat(factorial(2 * n - 5)) / irat(factorial(n - 3).pow(2))
        }
        (Binary, LeafToLeaf, Expectation) => {
            crate::comb::rat(2) * dfac(2 * n as i64 - 5) / dfac(2 * n as i64 - 6)
        }
        (Binary, RootVertical | Vertical | Arbitrary, Expectation) | (FamilyName::Motzkin | FamilyName::Cayley, ..) => {
            unreachable!("closed_formula gates family/stat/measure presence")
        }
    };
    Ok(value)
}

/// Exact expectation through the closed count/edges rows; covers the binary
/// statistics whose expectation row is asymptotic-only.
pub fn expectation_from_closed(family: FamilyName, stat: StatKind, n: u64) -> Result<Rat> {
    let count = closed_formula(family, stat, Measure::Count).ok_or(Error::UnsupportedKind {
        family: family.as_str(),
        stat: stat.as_str(),
        what: "closed count formula".into(),
    })?;
    let edges = closed_formula(family, stat, Measure::Edges).expect("count row implies edges row");
    let c = closed_eval(&count, n)?;
    if c.is_zero() {
        return Err(Error::ZeroDenominator { n });
    }
    Ok(closed_eval(&edges, n)? / c)
}

/// A truncated asymptotic expansion sum_i c_i n^(p_i/2), optionally scaled
/// by 4^n, with the stated order of the dropped term.
#[derive(Debug, Clone)]
pub struct AsymptoticExpansion {
    pub family: FamilyName,
    pub stat: StatKind,
    pub measure: Measure,
    /// When set, the row reads 4^n * (sum of terms); eval returns the
    /// parenthesized part and exact comparisons divide by 4^n first.
    pub scaled_pow4: bool,
    /// (coefficient, twice the power of n), highest power first.
    pub terms: Vec<(f64, i32)>,
    /// Twice the exponent e of the dropped O(n^-e) term (relative to the
    /// 4^n scale when that is set).
    pub error_pow2: i32,
}

impl AsymptoticExpansion {
    /// Evaluate the kept terms at n with compensated summation.
    pub fn eval(&self, n: u64) -> f64 {
        let half = (n as f64).sqrt();
        let mut sum = 0.0;
        let mut c = 0.0;
        for &(coef, p2) in &self.terms {
            let term = coef * half.powi(p2);
            let y = term - c;
            let t = sum + y;
            c = (t - sum) - y;
            sum = t;
        }
        sum
    }

    /// The stated error exponent e (the row's tail is O(n^-e)).
    pub fn error_exponent(&self) -> f64 {
        self.error_pow2 as f64 / 2.0
    }
}

/// Free-function alias for the expansion evaluator.
pub fn asym_eval(expansion: &AsymptoticExpansion, n: u64) -> f64 {
    expansion.eval(n)
}

fn row(
    family: FamilyName,
    stat: StatKind,
    measure: Measure,
    scaled_pow4: bool,
    terms: Vec<(f64, i32)>,
    error_pow2: i32,
) -> AsymptoticExpansion {
    AsymptoticExpansion {
        family,
        stat,
        measure,
        scaled_pow4,
        terms,
        error_pow2,
    }
}

/// Every implemented asymptotic expansion row.
pub fn all_expansions() -> Vec<AsymptoticExpansion> {
    use FamilyName::{Binary, General};
    use Measure::{Count, Edges, Expectation};
    use StatKind::*;
    let sp = PI.sqrt();
    vec![
        // general trees
        row(General, RootVertical, Count, true,
            vec![(1.0 / (4.0 * sp), -1), (-5.0 / (32.0 * sp), -3), (-23.0 / (512.0 * sp), -5)], 7),
        row(General, RootVertical, Edges, true,
            vec![(0.125, 0), (-1.0 / (8.0 * sp), -1), (-3.0 / (64.0 * sp), -3)], 5),
        row(General, RootVertical, Expectation, false,
            vec![(sp / 2.0, 1), (-0.5, 0), (5.0 * sp / 16.0, -1), (-0.5, -2), (73.0 * sp / 256.0, -3), (-0.5, -4)], 5),
        row(General, Vertical, Count, true,
            vec![(0.125, 0), (-1.0 / (8.0 * sp), -1), (-3.0 / (64.0 * sp), -3)], 5),
        row(General, Vertical, Edges, true,
            vec![(1.0 / (8.0 * sp), 1), (-5.0 / (64.0 * sp), -1), (-23.0 / (1024.0 * sp), -3)], 5),
        row(General, Vertical, Expectation, false,
            vec![(1.0 / sp, 1), (1.0 / PI, 0), ((8.0 - 5.0 * PI) / (8.0 * PI * sp), -1), ((4.0 - PI) / (4.0 * PI * PI), -2)], 3),
        row(General, RootToLeaf, Count, true,
            vec![(1.0 / (8.0 * sp), -1), (3.0 / (64.0 * sp), -3), (25.0 / (1024.0 * sp), -5)], 7),
        row(General, RootToLeaf, Expectation, false,
            vec![(sp / 2.0, 1), (-3.0 * sp / 16.0, -1), (-7.0 * sp / 256.0, -3)], 5),
        row(General, VerticalToLeaf, Edges, true,
            vec![(1.0 / (16.0 * sp), 1), (1.0 / 32.0, 0), (-5.0 / (128.0 * sp), -1), (-23.0 / (2048.0 * sp), -3)], 5),
        row(General, VerticalToLeaf, Expectation, false,
            vec![(1.0 / sp, 1), (0.5, 0), (-5.0 / (8.0 * sp), -1), (-23.0 / (128.0 * sp), -3)], 5),
        row(General, Arbitrary, Count, true,
            vec![(1.0 / (8.0 * sp), 1), (-5.0 / (64.0 * sp), -1), (-23.0 / (1024.0 * sp), -3)], 5),
        row(General, Arbitrary, Expectation, false,
            vec![(sp / 2.0, 1), (-3.0 * sp / 16.0, -1), (-7.0 * sp / 256.0, -3)], 5),
        row(General, LeafToLeaf, Count, true,
            vec![(1.0 / (32.0 * sp), 1), (-9.0 / (256.0 * sp), -1), (-79.0 / (4096.0 * sp), -3)], 5),
        row(General, LeafToLeaf, Edges, true,
            vec![(1.0 / 64.0, 2), (1.0 / (32.0 * sp), 1), (-1.0 / 32.0, 0), (-9.0 / (256.0 * sp), -1)], 3),
        row(General, LeafToLeaf, Expectation, false,
            vec![(sp / 2.0, 1), (1.0, 0), (-7.0 * sp / 16.0, -1), (-47.0 * sp / 256.0, -3)], 5),
        // binary trees
        row(Binary, RootVertical, Count, true,
            vec![(1.0 / sp, -1), (-17.0 / (8.0 * sp), -3), (289.0 / (128.0 * sp), -5)], 7),
        row(Binary, RootVertical, Edges, true,
            vec![(1.0, 0), (-3.0 / sp, -1), (19.0 / (8.0 * sp), -3), (-291.0 / (128.0 * sp), -5)], 7),
        row(Binary, RootVertical, Expectation, false,
            vec![(sp, 1), (-3.0, 0), (17.0 * sp / 8.0, -1), (-4.0, -2), (289.0 * sp / 128.0, -3), (-4.0, -4)], 5),
        row(Binary, Vertical, Count, true,
            vec![(1.0, 0), (-3.0 / sp, -1), (19.0 / (8.0 * sp), -3), (-291.0 / (128.0 * sp), -5)], 7),
        row(Binary, Vertical, Edges, true,
            vec![(2.0 / sp, 1), (-3.0, 0), (19.0 / (4.0 * sp), -1), (-167.0 / (64.0 * sp), -3)], 5),
        row(Binary, Vertical, Expectation, false,
            vec![(2.0 / sp, 1), (-3.0 + 6.0 / PI, 0), ((72.0 - 17.0 * PI) / (4.0 * PI * sp), -1), ((108.0 - 35.0 * PI) / (2.0 * PI * PI), -2)], 3),
        row(Binary, RootToLeaf, Count, true,
            vec![(1.0 / (4.0 * sp), -1), (3.0 / (32.0 * sp), -3), (25.0 / (512.0 * sp), -5)], 7),
        row(Binary, RootToLeaf, Edges, true,
            vec![(0.25, 0), (-1.0 / (4.0 * sp), -1), (-3.0 / (32.0 * sp), -3), (-25.0 / (512.0 * sp), -5)], 7),
        row(Binary, RootToLeaf, Expectation, false,
            vec![(sp, 1), (-1.0, 0), (-3.0 * sp / 8.0, -1), (-7.0 * sp / 128.0, -3)], 5),
        row(Binary, VerticalToLeaf, Count, true,
            vec![(0.25, 0), (-1.0 / (4.0 * sp), -1), (-3.0 / (32.0 * sp), -3), (-25.0 / (512.0 * sp), -5)], 7),
        row(Binary, VerticalToLeaf, Edges, true,
            vec![(1.0 / (2.0 * sp), 1), (-0.25, 0), (-1.0 / (16.0 * sp), -1), (1.0 / (256.0 * sp), -3)], 5),
        row(Binary, VerticalToLeaf, Expectation, false,
            vec![(2.0 / sp, 1), (-1.0 + 2.0 / PI, 0), ((8.0 - 5.0 * PI) / (4.0 * PI * sp), -1), ((4.0 - PI) / (2.0 * PI * PI), -2)], 3),
        row(Binary, Arbitrary, Count, true,
            vec![(1.0 / (2.0 * sp), 1), (-17.0 / (16.0 * sp), -1), (289.0 / (256.0 * sp), -3)], 5),
        row(Binary, Arbitrary, Edges, true,
            vec![(0.5, 2), (-2.0 / sp, 1), (1.0, 0), (-3.0 / (4.0 * sp), -1), (7.0 / (64.0 * sp), -3)], 5),
        row(Binary, Arbitrary, Expectation, false,
            vec![(sp, 1), (-4.0, 0), (33.0 * sp / 8.0, -1), (-10.0, -2), (833.0 * sp / 128.0, -3), (-12.0, -4)], 5),
        row(Binary, LeafToLeaf, Edges, true,
            vec![(1.0 / (16.0 * sp), 1), (-9.0 / (128.0 * sp), -1), (-79.0 / (2048.0 * sp), -3)], 5),
        row(Binary, LeafToLeaf, Expectation, false,
            vec![(4.0 / sp, 1), (-9.0 / (2.0 * sp), -1), (-79.0 / (32.0 * sp), -3)], 5),
    ]
}

pub fn expansion(family: FamilyName, stat: StatKind, measure: Measure) -> Option<AsymptoticExpansion> {
    all_expansions()
        .into_iter()
        .find(|e| e.family == family && e.stat == stat && e.measure == measure)
}

/// Gamma(half2 / 2) for positive half-integers, exactly: integer arguments
/// are factorials, half-integers reduce to double factorials times sqrt(pi).
fn gamma_half(half2: i64) -> f64 {
    assert!(half2 >= 1, "gamma argument {half2}/2 out of range");
    if half2 % 2 == 0 {
        rat_to_f64(&Rat::from_integer(factorial(half2 as u64 / 2 - 1)))
    } else {
        let m = (half2 - 1) / 2;
        rat_to_f64(&Rat::new(double_factorial(2 * m - 1), Int::from(1) << m as u32)) * PI.sqrt()
    }
}

/// k(k-1) Gamma((k-1)/2), continued through the k = 1 pole: Gamma(z) ~ 1/z
/// there, so the product tends to 2 rather than 0. That limit is what the
/// constant terms of the expectation rows (-1/2 for general root paths, -3 for binary)
/// come from.
fn kk1_gamma(k: u32) -> f64 {
    match k {
        0 => 0.0,
        1 => 2.0,
        _ => (k * (k - 1)) as f64 * gamma_half(k as i64 - 1),
    }
}

/// Two-term moment asymptotics for the four vertical path statistics, from
/// the singular expansion alone.
pub fn moment_asym(exp: &SingularExpansion, kind: StatKind, k: u32, n: u64) -> f64 {
    assert!(k >= 1, "moments start at k = 1");
    assert!(
        kind.is_vertical_kind(),
        "moment asymptotics cover the vertical path kinds only"
    );
    let (a0, a1, a2) = (exp.a0, exp.a1, exp.a2);
    let nf = n as f64;
    let kf = k as f64;
    let n_k2 = nf.powf(kf / 2.0);
    let n_k12 = nf.powf((kf - 1.0) / 2.0);
    match kind {
        StatKind::RootVertical => {
            let lead = (a1 / a0).powi(k as i32) * gamma_half(k as i64 + 2);
            let corr = a1.powi(k as i32 - 1)
                * ((kf + 1.0) * a0 * a0 + 2.0 * a2 * (kf + 1.0) * a0 - a1 * a1 * kf)
                * kk1_gamma(k)
                / (4.0 * a0.powi(k as i32 + 1));
            n_k2 * lead - n_k12 * corr
        }
        StatKind::RootToLeaf => {
            let base = moment_asym(exp, StatKind::RootVertical, k, n);
            base + n_k12 * (a1 / a0).powi(k as i32 + 1) * kk1_gamma(k) / 4.0
        }
        StatKind::Vertical => {
            let lead = a1.powi(k as i32) * gamma_half(k as i64 + 1) / (a0.powi(k as i32) * PI.sqrt());
            let bracket = ((kf + 1.0) * a0 * a0 + 2.0 * a2 * (kf + 2.0) * a0 - a1 * a1 * (kf + 1.0))
                * PI.sqrt()
                * gamma_half(k as i64 + 2)
                + (a1 * a1 - 2.0 * a0 * (a0 + 2.0 * a2)) * gamma_half(k as i64 + 1);
            let corr = a1.powi(k as i32 - 1) / (a0.powi(k as i32 + 1) * PI) * bracket;
            n_k2 * lead - n_k12 * corr
        }
        StatKind::VerticalToLeaf => {
            let base = moment_asym(exp, StatKind::Vertical, k, n);
            let extra = (a1 / a0).powi(k as i32 + 1)
                * (PI.sqrt() * gamma_half(k as i64 + 2) - gamma_half(k as i64 + 1))
                / PI;
            base + n_k12 * extra
        }
        _ => unreachable!(),
    }
}

/// Exact k-th moment at size n: the coefficient ratio of the k-weighted
/// series to the path-count series, within an existing context.
pub fn moment_exact_in(ctx: &PathGf, stat: StatKind, k: usize, n: usize) -> Result<Rat> {
    let num = ctx.stat_series(stat, k)?;
    let den = ctx.stat_series(stat, 0)?;
    let d = den.coeff(n);
    if d.is_zero() {
        return Err(Error::ZeroDenominator { n: n as u64 });
    }
    Ok(num.coeff(n) / d)
}

/// One-shot exact moment, building the series context at order n.
pub fn moment_exact(family: FamilyName, stat: StatKind, k: usize, n: usize) -> Result<Rat> {
    moment_exact_in(&PathGf::new(family, n)?, stat, k, n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::comb::{rat, ratio};
    use crate::family::{singular_expand, TreeFamily};

    #[test]
    fn closed_eval_examples() {
        let f = closed_formula(FamilyName::General, StatKind::RootToLeaf, Measure::Expectation).unwrap();
        assert_eq!(closed_eval(&f, 2).unwrap(), rat(1));

        let f = closed_formula(FamilyName::General, StatKind::Vertical, Measure::Expectation).unwrap();
        assert_eq!(closed_eval(&f, 3).unwrap(), ratio(6, 5));

        let f = closed_formula(FamilyName::General, StatKind::LeafToLeaf, Measure::Expectation).unwrap();
        assert_eq!(closed_eval(&f, 3).unwrap(), rat(2));
    }

    #[test]
    fn validity_floor_is_enforced() {
        let f = closed_formula(FamilyName::General, StatKind::LeafToLeaf, Measure::Count).unwrap();
        assert_eq!(
            closed_eval(&f, 2),
            Err(Error::BelowValidityFloor { floor: 3, n: 2 })
        );
    }

    #[test]
    fn binary_asymptotic_only_rows_are_absent() {
        for stat in [StatKind::RootVertical, StatKind::Vertical, StatKind::Arbitrary] {
            assert!(closed_formula(FamilyName::Binary, stat, Measure::Expectation).is_none());
            assert!(expectation_from_closed(FamilyName::Binary, stat, 5).is_ok());
        }
    }

    #[test]
    fn closed_rows_match_series_to_60() {
        // every count/edges row against the generating-function coefficients
        for family in [FamilyName::General, FamilyName::Binary] {
            let ctx = PathGf::new(family, 60).unwrap();
            for stat in StatKind::ALL {
                for (measure, k) in [(Measure::Count, 0usize), (Measure::Edges, 1)] {
                    let f = closed_formula(family, stat, measure).unwrap();
                    let series = ctx.stat_series(stat, k).unwrap();
                    for n in f.floor..=60 {
                        assert_eq!(
                            &closed_eval(&f, n).unwrap(),
                            series.coeff(n as usize),
                            "{family} {stat} {measure} n = {n}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn closed_expectations_match_count_edge_ratios() {
        for family in [FamilyName::General, FamilyName::Binary] {
            for stat in StatKind::ALL {
                let Some(f) = closed_formula(family, stat, Measure::Expectation) else {
                    continue;
                };
                for n in f.floor..=40 {
                    assert_eq!(
                        closed_eval(&f, n).unwrap(),
                        expectation_from_closed(family, stat, n).unwrap(),
                        "{family} {stat} n = {n}"
                    );
                }
            }
        }
    }

    #[test]
    fn asym_example_roottoleaf_expectation_at_1e4() {
        let e = expansion(FamilyName::General, StatKind::RootToLeaf, Measure::Expectation).unwrap();
        let f = closed_formula(FamilyName::General, StatKind::RootToLeaf, Measure::Expectation).unwrap();
        let exact = rat_to_f64(&closed_eval(&f, 10_000).unwrap());
        assert!((exact - 88.6194).abs() < 1e-3);
        assert!((e.eval(10_000) - exact).abs() < 1e-4);
    }

    #[test]
    fn gamma_half_values() {
        assert!((gamma_half(1) - PI.sqrt()).abs() < 1e-15);
        assert!((gamma_half(2) - 1.0).abs() < 1e-15);
        assert!((gamma_half(3) - PI.sqrt() / 2.0).abs() < 1e-15);
        assert!((gamma_half(4) - 1.0).abs() < 1e-15);
        assert!((gamma_half(7) - 15.0 * PI.sqrt() / 8.0).abs() < 1e-14);
    }

    #[test]
    fn root_moment_leading_term_general() {
        // (a1/a0) Gamma(3/2) sqrt(n) = sqrt(pi n)/2 for general trees
        let fam = TreeFamily::new(FamilyName::General, 4);
        let e = singular_expand(&fam).unwrap();
        let n = 1 << 20;
        let lead = (e.a1 / e.a0) * gamma_half(3) * (n as f64).sqrt();
        let want = (PI * n as f64).sqrt() / 2.0;
        assert!((lead - want).abs() < 1e-9 * want);
        // and the full k = 1 value carries the limit-continued constant -1/2
        let full = moment_asym(&e, StatKind::RootVertical, 1, n as u64);
        assert!((full - (want - 0.5)).abs() < 1e-9 * want);
    }

    #[test]
    fn root_vs_roottoleaf_differ_by_half_ratio_squared() {
        // the k = 1 correction term does not vanish: the Gamma pole cancels
        // the k(k-1) zero, leaving (a1/a0)^2 / 2, which is exactly the gap
        // between the root and root-to-leaf expectation rows.
        for name in [FamilyName::General, FamilyName::Binary, FamilyName::Cayley] {
            let fam = TreeFamily::new(name, 4);
            let e = singular_expand(&fam).unwrap();
            let n = 10_000u64;
            let gap = moment_asym(&e, StatKind::RootToLeaf, 1, n)
                - moment_asym(&e, StatKind::RootVertical, 1, n);
            let want = (e.a1 / e.a0).powi(2) / 2.0;
            assert!((gap - want).abs() < 1e-9, "{name}: {gap} vs {want}");
        }
    }

    #[test]
    fn cayley_verticaltoleaf_first_moment() {
        // sqrt(2n/pi) + 2/(3 pi): the general-k Cayley display evaluated
        // at k = 1. A commonly quoted simplified form flips the constant's
        // sign; the exact series agrees with + to 0.2% at n = 400.
        let fam = TreeFamily::new(FamilyName::Cayley, 4);
        let e = singular_expand(&fam).unwrap();
        let n = 400u64;
        let got = moment_asym(&e, StatKind::VerticalToLeaf, 1, n);
        let want = (2.0 * n as f64 / PI).sqrt() + 2.0 / (3.0 * PI);
        assert!((got - want).abs() < 1e-9, "{got} vs {want}");
    }

    #[test]
    fn moment_exact_examples() {
        assert_eq!(
            moment_exact(FamilyName::General, StatKind::RootVertical, 1, 3).unwrap(),
            ratio(5, 4)
        );
        assert_eq!(
            moment_exact(FamilyName::General, StatKind::RootToLeaf, 1, 4).unwrap(),
            ratio(8, 5)
        );
        // binary vertical second moment at n = 3 against the brute count:
        // 4 path trees contribute 1^2+2^2+1^2 each, the full tree 1^2+1^2
        let got = moment_exact(FamilyName::Binary, StatKind::Vertical, 2, 3).unwrap();
        assert_eq!(got, ratio(4 * 6 + 2, 4 * 3 + 2));
    }

    #[test]
    fn moment_exact_zero_denominator() {
        assert_eq!(
            moment_exact(FamilyName::General, StatKind::RootVertical, 1, 1),
            Err(Error::ZeroDenominator { n: 1 })
        );
    }

    #[test]
    fn expansion_registry_covers_both_families() {
        let rows = all_expansions();
        assert_eq!(rows.len(), 32);
        for r in &rows {
            assert!(r.terms.len() >= 3, "{:?} {:?} {:?}", r.family, r.stat, r.measure);
            // terms must come sorted by decreasing power, error below last
            for w in r.terms.windows(2) {
                assert!(w[0].1 > w[1].1);
            }
            assert!(-r.error_pow2 < r.terms.last().unwrap().1);
        }
    }
}

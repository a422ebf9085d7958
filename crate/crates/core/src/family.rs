//! The built-in simple varieties of rooted trees, their tree/vertex/leaf
//! generating series, and local expansions at the dominant singularity.

use std::fmt;
use std::str::FromStr;

use num_traits::Zero;

use crate::comb::Rat;
use crate::error::{Error, Result};
use crate::series::{PowerSeries, SeriesKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FamilyName {
    General,
    Binary,
    Motzkin,
    Cayley,
}

impl FamilyName {
    pub const ALL: [FamilyName; 4] = [
        FamilyName::General,
        FamilyName::Binary,
        FamilyName::Motzkin,
        FamilyName::Cayley,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            FamilyName::General => "general",
            FamilyName::Binary => "binary",
            FamilyName::Motzkin => "motzkin",
            FamilyName::Cayley => "cayley",
        }
    }

    /// Cayley trees are labeled and live in the EGF world.
    pub fn series_kind(self) -> SeriesKind {
        match self {
            FamilyName::Cayley => SeriesKind::Egf,
            _ => SeriesKind::Ogf,
        }
    }

    pub fn labeled(self) -> bool {
        self == FamilyName::Cayley
    }
}

impl fmt::Display for FamilyName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for FamilyName {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        FamilyName::ALL
            .into_iter()
            .find(|f| f.as_str() == s)
            .ok_or_else(|| format!("unknown family `{s}`"))
    }
}

/// A simple variety of trees: T = x Phi(T), together with the labeled flag
/// and the single-vertex count t1 (1 for every built-in).
#[derive(Debug, Clone)]
pub struct TreeFamily {
    name: FamilyName,
    phi: PowerSeries,
    labeled: bool,
    t1: u32,
}

impl TreeFamily {
    /// Build a family with its degree function truncated at `phi_order`.
    pub fn new(name: FamilyName, phi_order: usize) -> Self {
        let phi = phi_series(name, phi_order);
        TreeFamily {
            name,
            phi,
            labeled: name.labeled(),
            t1: 1,
        }
    }

    pub fn name(&self) -> FamilyName {
        self.name
    }

    /// The degree function Phi as a series in u (raw coefficients).
    pub fn phi(&self) -> &PowerSeries {
        &self.phi
    }

    pub fn labeled(&self) -> bool {
        self.labeled
    }

    pub fn t1(&self) -> u32 {
        self.t1
    }

    pub fn series_kind(&self) -> SeriesKind {
        self.name.series_kind()
    }

    /// Phi(t) evaluated through the family's closed form, so high orders do
    /// not pay for a generic composition.
    pub fn phi_of(&self, t: &PowerSeries) -> PowerSeries {
        let order = t.order();
        let one = PowerSeries::one(t.kind(), order);
        match self.name {
            FamilyName::General => one
                .div(&(&one - t))
                .expect("1 - T has unit constant term"),
            FamilyName::Binary => {
                let p = &one + t;
                &p * &p
            }
            FamilyName::Motzkin => &(&one + t) + &(t * t),
            FamilyName::Cayley => t.exp().expect("T vanishes at 0"),
        }
    }

    /// Phi'(t), same closed-form route.
    pub fn phi_prime_of(&self, t: &PowerSeries) -> PowerSeries {
        let order = t.order();
        let one = PowerSeries::one(t.kind(), order);
        match self.name {
            FamilyName::General => {
                let inv = one
                    .div(&(&one - t))
                    .expect("1 - T has unit constant term");
                &inv * &inv
            }
            FamilyName::Binary => (&one + t).scale_int(2),
            FamilyName::Motzkin => &one + &t.scale_int(2),
            FamilyName::Cayley => t.exp().expect("T vanishes at 0"),
        }
    }

    /// (Phi(t), Phi'(t)) sharing the expensive intermediate (the inverse
    /// for general trees, the exponential for Cayley trees).
    pub fn phi_and_prime(&self, t: &PowerSeries) -> (PowerSeries, PowerSeries) {
        let order = t.order();
        let one = PowerSeries::one(t.kind(), order);
        match self.name {
            FamilyName::General => {
                let inv = one
                    .div(&(&one - t))
                    .expect("1 - T has unit constant term");
                let sq = &inv * &inv;
                (inv, sq)
            }
            FamilyName::Binary => {
                let p = &one + t;
                (&p * &p, p.scale_int(2))
            }
            FamilyName::Motzkin => (&(&one + t) + &(t * t), &one + &t.scale_int(2)),
            FamilyName::Cayley => {
                let e = t.exp().expect("T vanishes at 0");
                (e.clone(), e)
            }
        }
    }
}

fn phi_series(name: FamilyName, order: usize) -> PowerSeries {
    let mut coeffs = vec![Rat::zero(); order + 1];
    match name {
        FamilyName::General => {
            for c in coeffs.iter_mut() {
                *c = crate::comb::rat(1);
            }
        }
        FamilyName::Binary => {
            for (j, v) in [1i64, 2, 1].into_iter().enumerate().take(order + 1) {
                coeffs[j] = crate::comb::rat(v);
            }
        }
        FamilyName::Motzkin => {
            for c in coeffs.iter_mut().take(3) {
                *c = crate::comb::rat(1);
            }
        }
        FamilyName::Cayley => {
            for (j, c) in coeffs.iter_mut().enumerate() {
                *c = Rat::new(1.into(), crate::comb::factorial(j as u64));
            }
        }
    }
    PowerSeries::new(SeriesKind::Ogf, coeffs)
}

/// Solve T = x Phi(T) exactly to the requested order.
///
/// Newton iteration with doubling order: each step solves
/// T <- T - (T - x Phi(T)) / (1 - x Phi'(T)) mod x^(2m), which doubles the
/// number of correct coefficients, so order 1000 stays a handful of O(N^2)
/// passes instead of a thousand.
pub fn solve_tree_series(family: &TreeFamily, order: usize) -> PowerSeries {
    assert!(order >= 1, "need at least order 1");
    let kind = family.series_kind();
    let mut t = PowerSeries::monomial(kind, 1, crate::comb::rat(family.t1() as i64), 1);
    let mut correct = 1usize;
    while correct < order {
        let m = (correct * 2).min(order);
        t = t.padded_to(m);
        let (phi, phi1) = family.phi_and_prime(&t);
        let residual = &t - &phi.shifted_up(1).truncated(m);
        let denom = &PowerSeries::one(kind, m) - &phi1.shifted_up(1).truncated(m);
        let delta = residual.div(&denom).expect("denominator has constant term 1");
        t = &t - &delta;
        correct = m;
    }
    t
}

/// V = x T': the series counting vertices over all trees of each size.
pub fn vertices_series(t: &PowerSeries) -> PowerSeries {
    t.derivative().shifted_up(1)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LeavesMethod {
    /// L = x^2 T' / T, straight from the grafting identity.
    Quotient,
    /// L = x / (1 - x Phi'(T)), through the functional equation.
    PhiPrime,
}

/// Leaf-counting series; both methods must agree coefficient for
/// coefficient (tested invariant). Result order is t.order() - 1.
pub fn leaves_series(family: &TreeFamily, t: &PowerSeries, method: LeavesMethod) -> Result<PowerSeries> {
    let order = t.order();
    match method {
        LeavesMethod::Quotient => t.derivative().shifted_up(2).div(t),
        LeavesMethod::PhiPrime => {
            let p1 = family.phi_prime_of(t);
            let denom = &PowerSeries::one(t.kind(), order) - &p1.shifted_up(1).truncated(order);
            let num = PowerSeries::monomial(t.kind(), 1, crate::comb::rat(1), order);
            Ok(num.div(&denom)?.truncated(order - 1))
        }
    }
}

/// Local behaviour of T at its dominant singularity rho:
/// T = a0 - a1 sqrt(1 - x/rho) + a2 (1 - x/rho) + ...
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SingularExpansion {
    pub family: FamilyName,
    pub rho: f64,
    pub a0: f64,
    pub a1: f64,
    pub a2: f64,
}

/// Float evaluation of Phi and its derivatives from the exact coefficients.
pub(crate) struct PhiEvaluator {
    coeffs: Vec<f64>,
}

impl PhiEvaluator {
    pub(crate) fn new(name: FamilyName) -> Self {
        // High fixed order: the solver evaluates at tau <= 1 where the tail
        // of every built-in Phi is far below f64 resolution by order 400.
        let phi = phi_series(name, 400);
        PhiEvaluator {
            coeffs: phi.coeffs().iter().map(crate::comb::rat_to_f64).collect(),
        }
    }

    /// d^m/du^m Phi at u.
    pub(crate) fn deriv(&self, m: usize, u: f64) -> f64 {
        let mut acc = 0.0;
        for j in (m..self.coeffs.len()).rev() {
            let mut c = self.coeffs[j];
            for i in 0..m {
                c *= (j - i) as f64;
            }
            acc = acc * u + c;
        }
        acc
    }
}

/// Solve the characteristic equation Phi(tau) - tau Phi'(tau) = 0 and read
/// off (rho, a0, a1, a2).
///
/// a0 = tau and a1 = sqrt(2 Phi / Phi'') come from matching s^0..s^2 after
/// substituting T = a0 - a1 s + a2 s^2, x = rho(1 - s^2) into T = x Phi(T);
/// the s^3 coefficient then gives a2 = (1 - rho Phi''' a1^2 / 6)/(rho Phi'').
pub fn singular_expand(family: &TreeFamily) -> Result<SingularExpansion> {
    let phi = PhiEvaluator::new(family.name());
    let psi = |u: f64| phi.deriv(0, u) - u * phi.deriv(1, u);

    // psi decreases from Phi(0) >= 1; double until it crosses zero.
    let mut hi = 1.0 / 64.0;
    let limit = 1e9;
    while psi(hi) > 0.0 {
        hi *= 2.0;
        if hi > limit || !psi(hi).is_finite() {
            return Err(Error::NoSingularitySolution { limit });
        }
    }
    let mut lo = hi / 2.0;
    if psi(lo) <= 0.0 {
        lo = 0.0;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if psi(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= f64::EPSILON * hi {
            break;
        }
    }
    let mut tau = 0.5 * (lo + hi);
    for _ in 0..8 {
        let d = -tau * phi.deriv(2, tau);
        if d == 0.0 {
            break;
        }
        tau -= psi(tau) / d;
    }
    debug_assert!(psi(tau).abs() <= 1e-14 * phi.deriv(0, tau).abs().max(1.0));

    let p0 = phi.deriv(0, tau);
    let p2 = phi.deriv(2, tau);
    let p3 = phi.deriv(3, tau);
    let rho = tau / p0;
    let a1 = (2.0 * p0 / p2).sqrt();
    let a2 = (1.0 - rho * p3 * a1 * a1 / 6.0) / (rho * p2);
    Ok(SingularExpansion {
        family: family.name(),
        rho,
        a0: tau,
        a1,
        a2,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::comb::{factorial, rat, ratio, Rat};
    use crate::series::rat_string;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * b.abs().max(1.0)
    }

    #[test]
    fn general_tree_counts_are_catalan() {
        let fam = TreeFamily::new(FamilyName::General, 8);
        let t = solve_tree_series(&fam, 5);
        for (n, want) in [(1, 1i64), (2, 1), (3, 2), (4, 5), (5, 14)] {
            assert_eq!(t.coeff(n), &rat(want), "n = {n}");
        }
    }

    #[test]
    fn general_matches_closed_form_to_60() {
        let order = 60;
        let fam = TreeFamily::new(FamilyName::General, order);
        let t = solve_tree_series(&fam, order);
        let s = PowerSeries::from_ints(SeriesKind::Ogf, &[1, -4])
            .padded_to(order)
            .sqrt()
            .unwrap();
        let closed = (&PowerSeries::one(SeriesKind::Ogf, order) - &s).scale(&ratio(1, 2));
        assert_eq!(t, closed);
    }

    #[test]
    fn binary_matches_closed_form_to_60() {
        let order = 60;
        let fam = TreeFamily::new(FamilyName::Binary, order);
        let t = solve_tree_series(&fam, order);
        // (1 - 2x - sqrt(1-4x)) / (2x)
        let s = PowerSeries::from_ints(SeriesKind::Ogf, &[1, -4])
            .padded_to(order + 1)
            .sqrt()
            .unwrap();
        let num = &PowerSeries::from_ints(SeriesKind::Ogf, &[1, -2]).padded_to(order + 1) - &s;
        let closed = num
            .shifted_down(1)
            .unwrap()
            .scale(&ratio(1, 2));
        assert_eq!(t, closed);
        for (n, want) in [(1, 1i64), (2, 2), (3, 5), (4, 14)] {
            assert_eq!(t.coeff(n), &rat(want));
        }
    }

    #[test]
    fn cayley_counts_follow_cayley_formula() {
        let fam = TreeFamily::new(FamilyName::Cayley, 8);
        let t = solve_tree_series(&fam, 8);
        // n^(n-1) labeled rooted trees
        for n in 1..=8u64 {
            let want = Rat::from_integer(crate::comb::int(n as i64).pow(n as u32 - 1));
            assert_eq!(t.counting_coeff(n as usize), want, "n = {n}");
        }
    }

    #[test]
    fn every_family_satisfies_functional_equation() {
        for name in FamilyName::ALL {
            let order = 60;
            let fam = TreeFamily::new(name, order);
            let t = solve_tree_series(&fam, order);
            let composed = fam.phi().compose(&t).unwrap().shifted_up(1).truncated(order);
            assert_eq!(t, composed, "family {name}");
        }
    }

    #[test]
    fn cayley_compose_exp_recovers_t() {
        // x * e^(T_C) = T_C through the generic composition path
        let order = 10;
        let fam = TreeFamily::new(FamilyName::Cayley, order);
        let t = solve_tree_series(&fam, order);
        let back = fam.phi().compose(&t).unwrap().shifted_up(1).truncated(order);
        assert_eq!(back, t);
    }

    #[test]
    fn vertex_counts() {
        let fam = TreeFamily::new(FamilyName::General, 12);
        let t = solve_tree_series(&fam, 12);
        let v = vertices_series(&t);
        for (n, want) in [(1, 1i64), (2, 2), (3, 6)] {
            assert_eq!(v.coeff(n), &rat(want));
        }
        // closed form x / sqrt(1-4x)
        let s = PowerSeries::from_ints(SeriesKind::Ogf, &[1, -4])
            .padded_to(12)
            .sqrt()
            .unwrap();
        let closed = PowerSeries::one(SeriesKind::Ogf, 12)
            .div(&s)
            .unwrap()
            .shifted_up(1);
        assert_eq!(v.coeff(3), closed.coeff(3));
        assert_eq!(v.coeff(1), &rat(1));
    }

    #[test]
    fn vertices_minus_trees_counts_nonroot_vertices() {
        for name in FamilyName::ALL {
            let fam = TreeFamily::new(name, 40);
            let t = solve_tree_series(&fam, 40);
            let v = vertices_series(&t);
            for n in 1..=40usize {
                let lhs = v.coeff(n) - t.coeff(n);
                let rhs = t.coeff(n) * rat(n as i64 - 1);
                assert_eq!(lhs, rhs, "family {name}, n = {n}");
            }
        }
    }

    #[test]
    fn leaves_two_routes_agree() {
        for name in FamilyName::ALL {
            let fam = TreeFamily::new(name, 32);
            let t = solve_tree_series(&fam, 32);
            let a = leaves_series(&fam, &t, LeavesMethod::Quotient).unwrap();
            let b = leaves_series(&fam, &t, LeavesMethod::PhiPrime).unwrap();
            assert_eq!(a, b, "family {name}");
        }
    }

    #[test]
    fn leaf_counts_general_and_binary() {
        let fam = TreeFamily::new(FamilyName::General, 8);
        let t = solve_tree_series(&fam, 8);
        let l = leaves_series(&fam, &t, LeavesMethod::Quotient).unwrap();
        for (n, want) in [(1, 1i64), (2, 1), (3, 3)] {
            assert_eq!(l.coeff(n), &rat(want), "general n = {n}");
        }

        let fam = TreeFamily::new(FamilyName::Binary, 8);
        let t = solve_tree_series(&fam, 8);
        let l = leaves_series(&fam, &t, LeavesMethod::Quotient).unwrap();
        for (n, want) in [(1, 1i64), (2, 2), (3, 6)] {
            assert_eq!(l.coeff(n), &rat(want), "binary n = {n}");
        }
    }

    #[test]
    fn singleton_leaf_count_is_t1() {
        for name in FamilyName::ALL {
            let fam = TreeFamily::new(name, 6);
            let t = solve_tree_series(&fam, 6);
            let l = leaves_series(&fam, &t, LeavesMethod::Quotient).unwrap();
            assert_eq!(l.counting_coeff(1), rat(1), "family {name}");
        }
    }

    #[test]
    fn singular_expansions_match_known_values() {
        let cases: [(FamilyName, [f64; 4]); 4] = [
            (FamilyName::General, [0.25, 0.5, 0.5, 0.0]),
            (FamilyName::Binary, [0.25, 1.0, 2.0, 2.0]),
            (FamilyName::Cayley, [1.0 / std::f64::consts::E, 1.0, std::f64::consts::SQRT_2, 2.0 / 3.0]),
            // Derived by substituting x = (1 - s^2)/3 into the Motzkin
            // closed form (1 - x - sqrt((1-3x)(1+x)))/(2x) and expanding.
            (FamilyName::Motzkin, [1.0 / 3.0, 1.0, 3f64.sqrt(), 1.5]),
        ];
        for (name, [rho, a0, a1, a2]) in cases {
            let fam = TreeFamily::new(name, 4);
            let e = singular_expand(&fam).unwrap();
            assert!(close(e.rho, rho, 1e-12), "{name} rho: {} vs {rho}", e.rho);
            assert!(close(e.a0, a0, 1e-12), "{name} a0: {} vs {a0}", e.a0);
            assert!(close(e.a1, a1, 1e-12), "{name} a1: {} vs {a1}", e.a1);
            assert!(close(e.a2, a2, 1e-10), "{name} a2: {} vs {a2}", e.a2);
        }
    }

    #[test]
    fn singular_expansion_consistency_residuals() {
        for name in FamilyName::ALL {
            let fam = TreeFamily::new(name, 4);
            let e = singular_expand(&fam).unwrap();
            let phi = PhiEvaluator::new(name);
            assert!((e.rho * phi.deriv(1, e.a0) - 1.0).abs() < 1e-10, "{name}");
            assert!((e.a0 - e.rho * phi.deriv(0, e.a0)).abs() < 1e-10, "{name}");
            assert!(e.a1 > 0.0 && e.rho > 0.0 && e.rho <= 1.0, "{name}");
        }
    }

    #[test]
    fn family_parsing() {
        assert_eq!("general".parse::<FamilyName>().unwrap(), FamilyName::General);
        assert!("ternary".parse::<FamilyName>().is_err());
    }

    #[test]
    fn egf_counting_coeff_scales_by_factorial() {
        let fam = TreeFamily::new(FamilyName::Cayley, 5);
        let t = solve_tree_series(&fam, 5);
        let raw = t.coeff(4).clone();
        assert_eq!(
            t.counting_coeff(4),
            raw * Rat::from_integer(factorial(4))
        );
        // and a readable sanity check on the raw coefficient
        assert_eq!(rat_string(t.coeff(3)), "3/2");
    }
}

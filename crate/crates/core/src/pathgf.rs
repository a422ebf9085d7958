//! Generating series for path statistics: the universal D_k machinery for
//! vertical paths in any simple variety, plus the closed-form series for
//! arbitrary and leaf-to-leaf paths in general and binary trees.

use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};

use crate::comb::{factorial, rat, ratio, Rat};
use crate::error::{Error, Result};
use crate::family::{leaves_series, solve_tree_series, vertices_series, FamilyName, LeavesMethod, TreeFamily};
use crate::series::{PowerSeries, SeriesKind};

/// The six path statistics. The first four are "vertical" kinds covered by
/// the universal machinery; the last two only have closed series for the
/// general and binary families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StatKind {
    /// Root to any non-root vertex.
    RootVertical,
    /// Root to a non-root leaf.
    RootToLeaf,
    /// Any vertex to a strict descendant.
    Vertical,
    /// Any vertex to a strict descendant leaf.
    VerticalToLeaf,
    /// Unordered pair of distinct vertices.
    Arbitrary,
    /// Unordered pair of distinct leaves. For binary trees this is the
    /// statistic the source tables actually tabulate: pairs whose path
    /// passes through the root (the x L^2 construction); the general-tree
    /// rows cover all leaf pairs.
    LeafToLeaf,
}

impl StatKind {
    pub const ALL: [StatKind; 6] = [
        StatKind::RootVertical,
        StatKind::RootToLeaf,
        StatKind::Vertical,
        StatKind::VerticalToLeaf,
        StatKind::Arbitrary,
        StatKind::LeafToLeaf,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            StatKind::RootVertical => "root",
            StatKind::RootToLeaf => "roottoleaf",
            StatKind::Vertical => "vertical",
            StatKind::VerticalToLeaf => "verticaltoleaf",
            StatKind::Arbitrary => "arbitrary",
            StatKind::LeafToLeaf => "leaftoleaf",
        }
    }

    pub fn index(self) -> usize {
        StatKind::ALL.iter().position(|s| *s == self).expect("listed")
    }

    /// True for the four kinds the universal grafting machinery covers
    /// directly.
    pub fn is_vertical_kind(self) -> bool {
        !matches!(self, StatKind::Arbitrary | StatKind::LeafToLeaf)
    }
}

impl fmt::Display for StatKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for StatKind {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        StatKind::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| format!("unknown statistic `{s}`"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Measure {
    Count,
    Edges,
    Expectation,
}

impl Measure {
    pub const ALL: [Measure; 3] = [Measure::Count, Measure::Edges, Measure::Expectation];

    pub fn as_str(self) -> &'static str {
        match self {
            Measure::Count => "count",
            Measure::Edges => "edges",
            Measure::Expectation => "expectation",
        }
    }
}

impl fmt::Display for Measure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Measure {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Measure::ALL
            .into_iter()
            .find(|m| m.as_str() == s)
            .ok_or_else(|| format!("unknown measure `{s}`"))
    }
}

/// P_k with P_k(L/x)(V - T) = D_k. Leading structure: the u^k coefficient
/// is k! and the u^(k-1) coefficient is -k!(k-1)/2.
#[derive(Debug, Clone, PartialEq)]
pub struct PkPolynomial {
    k: usize,
    coeffs: Vec<Rat>,
}

impl PkPolynomial {
    pub fn k(&self) -> usize {
        self.k
    }

    /// Coefficients of P_k(u) = sum_j coeffs[j] u^j, j = 0..=k.
    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    /// Horner evaluation of P_k at a series argument.
    pub fn eval_series(&self, u: &PowerSeries) -> PowerSeries {
        let order = u.order();
        let mut acc = PowerSeries::constant(u.kind(), self.coeffs.last().expect("k+1 coeffs").clone(), order);
        for c in self.coeffs.iter().rev().skip(1) {
            acc = &acc * u;
            acc = &acc + &PowerSeries::constant(u.kind(), c.clone(), order);
        }
        acc
    }
}

/// Change of basis from the multiset counts to plain powers: express d^k in
/// the rising-factorial basis d(d+1)...(d+j-1) = j! C(d+j-1, j), then fold
/// the j! into the u^j coefficient. The basis matrix is upper triangular
/// with unit diagonal, so back-substitution solves it exactly.
pub fn pk_polynomial(k: usize) -> PkPolynomial {
    let m = k + 1;
    // cols[j][i] = coefficient of d^i in d(d+1)...(d+j-1)
    let mut cols: Vec<Vec<Rat>> = Vec::with_capacity(m);
    cols.push(vec![Rat::one()]);
    for j in 1..m {
        let prev = &cols[j - 1];
        let shift = rat(j as i64 - 1);
        let mut next = vec![Rat::zero(); j + 1];
        for (i, c) in prev.iter().enumerate() {
            next[i + 1] += c;
            next[i] += c * &shift;
        }
        cols.push(next);
    }
    let mut basis = vec![Rat::zero(); m];
    for j in (0..m).rev() {
        let mut s = if j == k { Rat::one() } else { Rat::zero() };
        for l in (j + 1)..m {
            if j < cols[l].len() && !cols[l][j].is_zero() {
                s -= &cols[l][j] * &basis[l];
            }
        }
        basis[j] = s;
    }
    let coeffs = basis
        .into_iter()
        .enumerate()
        .map(|(j, b)| b * Rat::from_integer(factorial(j as u64)))
        .collect();
    PkPolynomial { k, coeffs }
}

/// Shared context for one family at one truncation order: T, V, L and the
/// power products every path series is a linear combination of. The
/// products u^j (V-T) and u^j (L - t1 x) are built once up front, so each
/// statistic costs only scales and adds afterwards.
#[derive(Debug, Clone)]
pub struct PathGf {
    family: TreeFamily,
    order: usize,
    max_k: usize,
    t: PowerSeries,
    v: PowerSeries,
    l: PowerSeries,
    /// u^j (V - T) for j = 0..=max_k+1, with u = L/x
    ua: Vec<PowerSeries>,
    /// u^j (L - t1 x) for j = 0..=max_k+1
    ub: Vec<PowerSeries>,
}

impl PathGf {
    /// Context supporting moments up to k = 3 (every built-in use).
    pub fn new(name: FamilyName, order: usize) -> Result<Self> {
        Self::with_max_k(name, order, 3)
    }

    /// Context supporting moments up to the given k only; high truncation
    /// orders pay one series product per power, so keep it tight.
    pub fn with_max_k(name: FamilyName, order: usize, max_k: usize) -> Result<Self> {
        assert!(order >= 1);
        let family = TreeFamily::new(name, order + 2);
        let m = order + 2;
        let t_full = solve_tree_series(&family, m);
        let v_full = vertices_series(&t_full);
        let l_full = leaves_series(&family, &t_full, LeavesMethod::Quotient)?;
        let u = l_full.shifted_down(1)?.truncated(order);
        let t = t_full.truncated(order);
        let v = v_full.truncated(order);
        let l = l_full.truncated(order);
        let t1x = PowerSeries::monomial(family.series_kind(), 1, rat(family.t1() as i64), order);
        let mut ua = vec![&v - &t];
        let mut ub = vec![&l - &t1x];
        for j in 1..=max_k + 1 {
            ua.push(&ua[j - 1] * &u);
            ub.push(&ub[j - 1] * &u);
        }
        Ok(PathGf {
            family,
            order,
            max_k,
            t,
            v,
            l,
            ua,
            ub,
        })
    }

    pub fn family(&self) -> &TreeFamily {
        &self.family
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn max_k(&self) -> usize {
        self.max_k
    }

    pub fn tree_series(&self) -> &PowerSeries {
        &self.t
    }

    pub fn vertex_series(&self) -> &PowerSeries {
        &self.v
    }

    pub fn leaf_series(&self) -> &PowerSeries {
        &self.l
    }

    fn combine(&self, parts: &[PowerSeries], pk: &PkPolynomial, shift: usize) -> PowerSeries {
        let mut acc = PowerSeries::zero(self.family.series_kind(), self.order);
        for (j, c) in pk.coeffs().iter().enumerate() {
            if !c.is_zero() {
                acc = &acc + &parts[j + shift].scale(c);
            }
        }
        acc
    }

    /// (L/x)^k (V - T): each root path counted once per k-multiset of its
    /// edges.
    pub fn multiset_weight(&self, k: usize) -> PowerSeries {
        assert!(k <= self.max_k + 1, "context built for k <= {}", self.max_k);
        self.ua[k].clone()
    }

    /// D_k = (V - T) P_k(L/x): sum of d(v, root)^k over all trees and
    /// non-root vertices.
    pub fn dk(&self, k: usize) -> PowerSeries {
        assert!(k <= self.max_k, "context built for k <= {}", self.max_k);
        self.combine(&self.ua, &pk_polynomial(k), 0)
    }

    /// The three grafted variants: terminal factor L - t1 x for leaf ends,
    /// an extra L/x to free the upper endpoint.
    pub fn corollary(&self, kind: StatKind, k: usize) -> Result<PowerSeries> {
        assert!(k <= self.max_k, "context built for k <= {}", self.max_k);
        let pk = pk_polynomial(k);
        match kind {
            StatKind::RootToLeaf => Ok(self.combine(&self.ub, &pk, 0)),
            StatKind::Vertical => Ok(self.combine(&self.ua, &pk, 1)),
            StatKind::VerticalToLeaf => Ok(self.combine(&self.ub, &pk, 1)),
            _ => Err(Error::UnsupportedKind {
                family: self.family.name().as_str(),
                stat: kind.as_str(),
                what: "corollary series".into(),
            }),
        }
    }

    /// Unified access: vertical kinds for any k through the universal
    /// machinery, arbitrary/leaf-to-leaf through the closed forms (k <= 1,
    /// general and binary only).
    pub fn stat_series(&self, stat: StatKind, k: usize) -> Result<PowerSeries> {
        match stat {
            StatKind::RootVertical => Ok(self.dk(k)),
            StatKind::RootToLeaf | StatKind::Vertical | StatKind::VerticalToLeaf => {
                self.corollary(stat, k)
            }
            StatKind::Arbitrary | StatKind::LeafToLeaf => {
                let measure = match k {
                    0 => Measure::Count,
                    1 => Measure::Edges,
                    _ => {
                        return Err(Error::UnsupportedKind {
                            family: self.family.name().as_str(),
                            stat: stat.as_str(),
                            what: format!("series for k = {k}"),
                        })
                    }
                };
                match self.family.name() {
                    FamilyName::General => general_closed_gf(stat, measure, self.order),
                    FamilyName::Binary => binary_closed_gf(stat, measure, self.order),
                    name => Err(Error::UnsupportedKind {
                        family: name.as_str(),
                        stat: stat.as_str(),
                        what: "closed generating function".into(),
                    }),
                }
            }
        }
    }
}

/// Free-function wrappers over a one-shot context.
pub fn multiset_weight_series(name: FamilyName, k: usize, order: usize) -> Result<PowerSeries> {
    Ok(PathGf::with_max_k(name, order, k.saturating_sub(1))?.multiset_weight(k))
}

pub fn dk_series(name: FamilyName, k: usize, order: usize) -> Result<PowerSeries> {
    Ok(PathGf::with_max_k(name, order, k)?.dk(k))
}

pub fn corollary_series(name: FamilyName, kind: StatKind, k: usize, order: usize) -> Result<PowerSeries> {
    PathGf::with_max_k(name, order, k)?.corollary(kind, k)
}

/// The Catalan-flavoured building blocks every closed form below uses.
struct Blocks {
    one: PowerSeries,
    /// sqrt(1-4x)
    s: PowerSeries,
    /// (1-4x)^(-1/2)
    inv_s: PowerSeries,
    /// (1-4x)^(-1)
    i: PowerSeries,
    /// (1-4x)^(-2)
    i2: PowerSeries,
    /// (1-4x)^(-3/2)
    i3h: PowerSeries,
}

fn blocks(order: usize) -> Blocks {
    let one = PowerSeries::one(SeriesKind::Ogf, order);
    let base = PowerSeries::from_ints(SeriesKind::Ogf, &[1, -4]).padded_to(order);
    let s = base.sqrt().expect("unit constant");
    let inv_s = one.div(&s).expect("unit constant");
    let i = one.div(&base).expect("unit constant");
    let i2 = &i * &i;
    let i3h = &i * &inv_s;
    Blocks {
        one,
        s,
        inv_s,
        i,
        i2,
        i3h,
    }
}

/// Closed generating functions for general trees, assembled from series
/// primitives.
pub fn general_closed_gf(stat: StatKind, measure: Measure, order: usize) -> Result<PowerSeries> {
    let m = order + 4;
    let b = blocks(m);
    let half = ratio(1, 2);
    let gf = match (stat, measure) {
        // V - T = x/sqrt(1-4x) - (1 - sqrt(1-4x))/2
        (StatKind::RootVertical, Measure::Count) => {
            &b.inv_s.shifted_up(1).truncated(m) - &(&b.one - &b.s).scale(&half)
        }
        (StatKind::RootVertical, Measure::Edges) => {
            (&b.i - &b.inv_s).scale(&half).shifted_up(1)
        }
        (StatKind::Vertical, Measure::Count) => {
            (&b.i - &b.inv_s).scale(&half).shifted_up(1)
        }
        (StatKind::Vertical, Measure::Edges) => b.i3h.shifted_up(2),
        (StatKind::RootToLeaf, Measure::Count) => {
            (&b.inv_s - &b.one).scale(&half).shifted_up(1)
        }
        (StatKind::RootToLeaf, Measure::Edges) => b.i.shifted_up(2),
        (StatKind::VerticalToLeaf, Measure::Count) => b.i.shifted_up(2),
        (StatKind::VerticalToLeaf, Measure::Edges) => {
            (&b.i3h + &b.i).scale(&half).shifted_up(2)
        }
        (StatKind::Arbitrary, Measure::Count) => b.i3h.shifted_up(2),
        (StatKind::Arbitrary, Measure::Edges) => b.i2.shifted_up(2),
        (StatKind::LeafToLeaf, Measure::Count) => b.i3h.shifted_up(3),
        (StatKind::LeafToLeaf, Measure::Edges) => (&b.i2 + &b.i3h).shifted_up(3),
        (stat, Measure::Expectation) => {
            return Err(Error::UnsupportedKind {
                family: "general",
                stat: stat.as_str(),
                what: "expectation generating function".into(),
            })
        }
    };
    Ok(gf.truncated(order))
}

/// Closed generating functions for binary trees. The leaf-to-leaf rows count leaf
/// pairs joined through the root (x L^2 and its edge companion); counting
/// all leaf pairs instead would give L^3, which diverges from these rows
/// from n = 4 on (6 vs 4 pairs) and would break the 4/pi ratio.
pub fn binary_closed_gf(stat: StatKind, measure: Measure, order: usize) -> Result<PowerSeries> {
    let m = order + 4;
    let b = blocks(m);
    let gf = match (stat, measure) {
        // 1 - 1/x - 3/sqrt(1-4x) + 1/(x sqrt(1-4x))
        (StatKind::RootVertical, Measure::Count) => {
            &(&b.one - &b.inv_s.scale_int(3)) + &(&b.inv_s - &b.one).shifted_down(1)?
        }
        (StatKind::RootVertical, Measure::Edges) | (StatKind::Vertical, Measure::Count) => {
            &(&b.inv_s - &b.i.scale_int(3)) + &(&b.i - &b.inv_s).shifted_down(1)?
        }
        (StatKind::Vertical, Measure::Edges) => {
            &(&b.i - &b.i3h.scale_int(3)) + &(&b.i3h - &b.i).shifted_down(1)?
        }
        (StatKind::RootToLeaf, Measure::Count) => {
            (&b.inv_s - &b.one).shifted_up(1)
        }
        (StatKind::RootToLeaf, Measure::Edges) | (StatKind::VerticalToLeaf, Measure::Count) => {
            (&b.i - &b.inv_s).shifted_up(1)
        }
        (StatKind::VerticalToLeaf, Measure::Edges) => (&b.i3h - &b.i).shifted_up(1),
        // 9/4 (1-4x)^(-3/2) + 3/4 (1-4x)^(-1/2) + 1/(2x) - (1-4x)^(-3/2)/(2x)
        (StatKind::Arbitrary, Measure::Count) => {
            let head = &b.i3h.scale(&ratio(9, 4)) + &b.inv_s.scale(&ratio(3, 4));
            &head - &(&b.i3h - &b.one).scale(&ratio(1, 2)).shifted_down(1)?
        }
        (StatKind::Arbitrary, Measure::Edges) => {
            &(&b.i2.scale_int(2).shifted_up(1).truncated(m) - &b.i3h) + &b.i
        }
        (StatKind::LeafToLeaf, Measure::Count) => b.i.shifted_up(3),
        (StatKind::LeafToLeaf, Measure::Edges) => b.i3h.scale_int(2).shifted_up(3),
        (stat, Measure::Expectation) => {
            return Err(Error::UnsupportedKind {
                family: "binary",
                stat: stat.as_str(),
                what: "expectation generating function".into(),
            })
        }
    };
    Ok(gf.truncated(order))
}

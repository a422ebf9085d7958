//! Bivariate series in x (tree size) and y (path length) for binary trees:
//! root-to-leaf paths P(x, y) from its functional equation, and all paths
//! P*(x, y) assembled by grafting.

use num_traits::Zero;

use crate::comb::{rat, Rat};
use crate::error::Result;
use crate::family::{solve_tree_series, FamilyName, TreeFamily};
use crate::series::{PowerSeries, SeriesKind};

/// Row n holds the y-polynomial multiplying x^n, capped at y-degree n: a
/// path in an n-vertex tree has fewer than n edges, so anything above the
/// cap would already be a bug upstream.
#[derive(Debug, Clone, PartialEq)]
pub struct BivariateSeries {
    rows: Vec<Vec<Rat>>,
}

impl BivariateSeries {
    pub fn zero(order: usize) -> Self {
        BivariateSeries {
            rows: vec![Vec::new(); order + 1],
        }
    }

    /// Lift a univariate series to y-degree zero.
    pub fn from_series(ps: &PowerSeries) -> Self {
        let rows = ps
            .coeffs()
            .iter()
            .map(|c| if c.is_zero() { Vec::new() } else { vec![c.clone()] })
            .collect();
        BivariateSeries { rows }
    }

    pub fn order(&self) -> usize {
        self.rows.len() - 1
    }

    /// y-coefficients of x^n, lowest degree first (possibly empty).
    pub fn row(&self, n: usize) -> &[Rat] {
        &self.rows[n]
    }

    pub fn coeff(&self, n: usize, j: usize) -> Rat {
        self.rows[n].get(j).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn y_degree(&self, n: usize) -> Option<usize> {
        self.rows[n].iter().rposition(|c| !c.is_zero())
    }

    pub fn truncated_x(&self, order: usize) -> Self {
        assert!(order <= self.order());
        BivariateSeries {
            rows: self.rows[..=order].to_vec(),
        }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let order = self.order().min(rhs.order());
        let mut rows = Vec::with_capacity(order + 1);
        for n in 0..=order {
            let a = &self.rows[n];
            let b = &rhs.rows[n];
            let mut row = vec![Rat::zero(); a.len().max(b.len())];
            for (j, c) in a.iter().enumerate() {
                row[j] += c;
            }
            for (j, c) in b.iter().enumerate() {
                row[j] += c;
            }
            rows.push(row);
        }
        BivariateSeries { rows }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let order = self.order().min(rhs.order());
        let mut rows: Vec<Vec<Rat>> = (0..=order).map(|n| vec![Rat::zero(); n + 1]).collect();
        for (na, ra) in self.rows.iter().enumerate().take(order + 1) {
            if ra.is_empty() {
                continue;
            }
            for (nb, rb) in rhs.rows.iter().enumerate().take(order + 1 - na) {
                if rb.is_empty() {
                    continue;
                }
                let n = na + nb;
                let cap = n + 1;
                for (ja, ca) in ra.iter().enumerate() {
                    if ca.is_zero() {
                        continue;
                    }
                    for (jb, cb) in rb.iter().enumerate() {
                        let j = ja + jb;
                        if j >= cap {
                            break;
                        }
                        if !cb.is_zero() {
                            rows[n][j] += ca * cb;
                        }
                    }
                }
            }
        }
        for row in rows.iter_mut() {
            while row.last().is_some_and(Rat::is_zero) {
                row.pop();
            }
        }
        BivariateSeries { rows }
    }

    /// Multiply by c x^xd y^yd, keeping the same x-order.
    pub fn mul_monomial(&self, xd: usize, yd: usize, c: &Rat) -> Self {
        let order = self.order();
        let mut rows: Vec<Vec<Rat>> = vec![Vec::new(); order + 1];
        for (src_n, src) in self.rows.iter().enumerate().take((order + 1).saturating_sub(xd)) {
            if src.is_empty() {
                continue;
            }
            let n = src_n + xd;
            let cap = n + 1;
            let mut row = vec![Rat::zero(); (src.len() + yd).min(cap)];
            for (j, v) in src.iter().enumerate() {
                if j + yd < cap && !v.is_zero() {
                    row[j + yd] = v * c;
                }
            }
            rows[n] = row;
        }
        BivariateSeries { rows }
    }

    /// Divide by x^k; the first k rows must be empty.
    pub fn shifted_down_x(&self, k: usize) -> Result<Self> {
        for n in 0..k {
            if self.y_degree(n).is_some() {
                return Err(crate::error::Error::ValuationError {
                    dividend: n,
                    divisor: k,
                });
            }
        }
        Ok(BivariateSeries {
            rows: self.rows[k..].to_vec(),
        })
    }

    /// Specialize y = 1.
    pub fn at_y_one(&self) -> PowerSeries {
        let coeffs = self
            .rows
            .iter()
            .map(|row| row.iter().fold(Rat::zero(), |a, c| a + c))
            .collect();
        PowerSeries::new(SeriesKind::Ogf, coeffs)
    }

    /// d/dy at y = 1: rows become sum_j j * c_j.
    pub fn dy_at_y_one(&self) -> PowerSeries {
        let coeffs = self
            .rows
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .fold(Rat::zero(), |a, (j, c)| a + c * rat(j as i64))
            })
            .collect();
        PowerSeries::new(SeriesKind::Ogf, coeffs)
    }
}

/// Solve P(x,y) = x + 2xyP + 2xyPT for binary trees by fixed-point
/// iteration in the x-order (row n of the right side only involves rows
/// below n), then assemble P*(x,y) for paths with an arbitrary top vertex:
/// graft trees onto the marked leaf (P/x * T), close the two-sided case
/// through the root (x y^2 (...)^2), and free the top vertex with L/x.
pub fn binary_bivariate(order: usize) -> (BivariateSeries, BivariateSeries) {
    assert!(order >= 1);
    let m = order + 1;
    let fam = TreeFamily::new(FamilyName::Binary, 1);
    let t = solve_tree_series(&fam, m);

    // rows of P: P_n(y) = [n == 1] + 2y sum_{j<n} P_j(y) [x^(n-1-j)](1 + T)
    let mut rows: Vec<Vec<Rat>> = vec![Vec::new(); m + 1];
    rows[1] = vec![rat(1)];
    for n in 2..=m {
        let mut row = vec![Rat::zero(); n];
        for (j, p_row) in rows.iter().enumerate().take(n).skip(1) {
            let c = if n - 1 - j == 0 {
                rat(1)
            } else {
                t.coeff(n - 1 - j).clone()
            };
            if c.is_zero() {
                continue;
            }
            let c2 = &c * &rat(2);
            for (d, pv) in p_row.iter().enumerate() {
                if !pv.is_zero() {
                    row[d + 1] += pv * &c2;
                }
            }
        }
        rows[n] = row;
    }
    let p = BivariateSeries { rows };

    let t_biv = BivariateSeries::from_series(&t);
    // root-to-anywhere, including the empty path at the root itself
    let a = p
        .shifted_down_x(1)
        .expect("P has valuation 1 in x")
        .mul(&t_biv);
    // plus both-sides-of-the-root, then free the top vertex by grafting
    let through_root = a.mul(&a).mul_monomial(1, 2, &rat(1));
    let s = a.add(&through_root);
    let base = PowerSeries::from_ints(SeriesKind::Ogf, &[1, -4]).padded_to(m - 1);
    let inv_sqrt = PowerSeries::one(SeriesKind::Ogf, m - 1)
        .div(&base.sqrt().expect("unit constant"))
        .expect("unit constant");
    let pstar = BivariateSeries::from_series(&inv_sqrt).mul(&s);

    (p.truncated_x(order), pstar.truncated_x(order))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pathgf::{binary_closed_gf, Measure, StatKind};
    use crate::series::rat_string;

    #[test]
    fn p_small_rows() {
        let (p, _) = binary_bivariate(4);
        assert_eq!(p.row(1), &[rat(1)]);
        // two 2-vertex trees, each one root-to-leaf path of length 1
        assert_eq!(p.row(2), &[rat(0), rat(2)]);
        // five 3-vertex trees: 4 path-shaped give y^2, the full tree 2y
        assert_eq!(p.row(3), &[rat(0), rat(2), rat(4)]);
        assert_eq!(p.row(4), &[rat(0), rat(4), rat(8), rat(8)]);
    }

    #[test]
    fn p_at_y_one_is_leaf_series() {
        let order = 30;
        let (p, _) = binary_bivariate(order);
        let got = p.at_y_one();
        // x / sqrt(1-4x)
        let base = PowerSeries::from_ints(SeriesKind::Ogf, &[1, -4]).padded_to(order - 1);
        let want = PowerSeries::one(SeriesKind::Ogf, order - 1)
            .div(&base.sqrt().unwrap())
            .unwrap()
            .shifted_up(1);
        assert_eq!(got, want);
    }

    #[test]
    fn pstar_edge_gf_matches_closed_form() {
        let order = 24;
        let (_, pstar) = binary_bivariate(order);
        let edges = pstar.dy_at_y_one();
        // (1 - sqrt(1-4x) - 2x)/(1-4x)^2
        let closed = binary_closed_gf(StatKind::Arbitrary, Measure::Edges, order).unwrap();
        assert_eq!(edges, closed);
        assert_eq!(rat_string(edges.coeff(3)), "20");
    }

    #[test]
    fn pstar_counts_all_paths_with_lengths() {
        // n = 3 by hand: per path-shaped tree 3 + 2y + y^2, full tree the
        // same; five trees total.
        let (_, pstar) = binary_bivariate(5);
        assert_eq!(pstar.row(3), &[rat(15), rat(10), rat(5)]);
        // n = 1: the single vertex, one empty path
        assert_eq!(pstar.row(1), &[rat(1)]);
    }

    #[test]
    fn y_degree_stays_below_row_index() {
        let (p, pstar) = binary_bivariate(16);
        for n in 1..=16 {
            for b in [&p, &pstar] {
                if let Some(d) = b.y_degree(n) {
                    assert!(d < n, "row {n} has y-degree {d}");
                }
            }
        }
    }

    #[test]
    fn shifted_down_x_checks_valuation() {
        let (p, _) = binary_bivariate(4);
        assert!(p.shifted_down_x(1).is_ok());
        assert!(p.shifted_down_x(2).is_err());
    }
}

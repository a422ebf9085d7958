//! Quick timing probe for the heavy exact-series paths.

use std::time::Instant;

use treepaths::{FamilyName, PathGf, StatKind};

fn main() {
    for (family, order) in [
        (FamilyName::General, 500usize),
        (FamilyName::General, 1000),
        (FamilyName::Binary, 1000),
        (FamilyName::Cayley, 200),
        (FamilyName::Cayley, 400),
    ] {
        let t0 = Instant::now();
        let ctx = PathGf::with_max_k(family, order, 2).unwrap();
        let t_ctx = t0.elapsed();
        let t1 = Instant::now();
        let num = ctx.stat_series(StatKind::VerticalToLeaf, 1).unwrap();
        let den = ctx.stat_series(StatKind::VerticalToLeaf, 0).unwrap();
        let t_stat = t1.elapsed();
        let e = num.coeff(order) / den.coeff(order);
        println!(
            "{family} order {order}: ctx {:.2}s, vtl k=1+k=0 {:.2}s, E ~ {:.3}",
            t_ctx.as_secs_f64(),
            t_stat.as_secs_f64(),
            treepaths::comb::rat_to_f64(&e)
        );
    }
}

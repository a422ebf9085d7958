//! Command-line front end: compute path-statistic series, run the
//! brute-force census, compare every available source cell by cell, and
//! emit the reproduction tables.

mod output;

use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use output::{measure_label, sort_rows, to_csv, to_json, Row, SourceTag};
use treepaths::comb::{rat_to_f64, Rat, Zero};
use treepaths::{
    census_all, closed_eval, closed_formula, expansion, moment_asym, moment_exact_in, rat_string,
    singular_expand, Caps, Error as CoreError, FamilyName, Measure, PathGf, StatKind, TreeFamily,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Parser)]
#[command(name = "treepaths", version, about = "Path-length statistics in rooted tree families")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print coefficients of a path-statistic generating series.
    Series {
        #[arg(long, value_parser = FamilyName::from_str)]
        family: FamilyName,
        #[arg(long, value_parser = StatKind::from_str)]
        stat: StatKind,
        /// count or edges; shorthand for k = 0 or 1.
        #[arg(long, value_parser = Measure::from_str, conflicts_with = "k")]
        measure: Option<Measure>,
        /// Moment index weighting each path by d^k.
        #[arg(long)]
        k: Option<usize>,
        #[arg(long = "n-max", default_value_t = 12)]
        n_max: usize,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Exhaustive-enumeration tallies for one statistic at one size.
    Census {
        #[arg(long, value_parser = FamilyName::from_str)]
        family: FamilyName,
        #[arg(long, value_parser = StatKind::from_str)]
        stat: StatKind,
        #[arg(long, default_value_t = 1)]
        k: usize,
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Cross-check oracle, series and closed formulas cell by cell.
    /// Exits 1 if any exact sources disagree.
    Compare {
        #[arg(long, value_parser = FamilyName::from_str)]
        family: FamilyName,
        #[arg(long = "n-max", default_value_t = 12)]
        n_max: usize,
        /// Restrict to one moment index (default: k = 0 and 1).
        #[arg(long)]
        k: Option<usize>,
        /// Statistics to include (default: every one with a series).
        #[arg(long, value_parser = StatKind::from_str, value_delimiter = ',')]
        stats: Vec<StatKind>,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Exact k-th moment against the singular-expansion asymptotic.
    Moments {
        #[arg(long, value_parser = FamilyName::from_str)]
        family: FamilyName,
        #[arg(long, value_parser = StatKind::from_str)]
        kind: StatKind,
        #[arg(long, default_value_t = 1)]
        k: usize,
        #[arg(long, default_value_t = 100)]
        n: usize,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Singular expansion (rho, a0, a1, a2) of the tree series.
    Expand {
        #[arg(long, value_parser = FamilyName::from_str)]
        family: FamilyName,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Write the full reproduction tables as CSV files, one per table
    /// block.
    Report {
        #[arg(long)]
        out: PathBuf,
        #[arg(long = "n-max", default_value_t = 12)]
        n_max: usize,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn emit(mut rows: Vec<Row>, format: Format) {
    sort_rows(&mut rows);
    match format {
        Format::Csv => print!("{}", to_csv(&rows)),
        Format::Json => println!("{}", to_json(&rows)),
    }
}

fn run(command: Command) -> Result<ExitCode> {
    match command {
        Command::Series {
            family,
            stat,
            measure,
            k,
            n_max,
            format,
        } => {
            let k = match (measure, k) {
                (Some(Measure::Count), _) => 0,
                (Some(Measure::Edges), _) => 1,
                (Some(Measure::Expectation), _) => {
                    bail!("series prints coefficients; use --measure count or edges")
                }
                (None, Some(k)) => k,
                (None, None) => 1,
            };
            let ctx = PathGf::with_max_k(family, n_max.max(1), k)?;
            let series = ctx.stat_series(stat, k)?;
            let rows = (0..=n_max)
                .filter_map(|n| {
                    let value = series.counting_coeff(n);
                    if value.is_zero() {
                        return None;
                    }
                    Some(Row {
                        family,
                        stat,
                        measure: measure_label(k),
                        k,
                        n: n as u64,
                        source: SourceTag::Series,
                        value: rat_string(&value),
                    })
                })
                .collect();
            emit(rows, format);
            Ok(ExitCode::SUCCESS)
        }
        Command::Census {
            family,
            stat,
            k,
            n,
            format,
        } => {
            let table = census_all(family, n, k, &Caps::default()).map_err(size_diagnostic)?;
            let mut rows = vec![Row {
                family,
                stat,
                measure: "count",
                k: 0,
                n: n as u64,
                source: SourceTag::Oracle,
                value: table.count(stat).to_string(),
            }];
            if k > 0 {
                rows.push(Row {
                    family,
                    stat,
                    measure: measure_label(k),
                    k,
                    n: n as u64,
                    source: SourceTag::Oracle,
                    value: table.weighted_sum(stat, k).to_string(),
                });
            }
            emit(rows, format);
            Ok(ExitCode::SUCCESS)
        }
        Command::Compare {
            family,
            n_max,
            k,
            stats,
            format,
        } => compare(family, n_max, k, stats, format),
        Command::Moments {
            family,
            kind,
            k,
            n,
            format,
        } => {
            if !kind.is_vertical_kind() {
                bail!("moment asymptotics cover root/roottoleaf/vertical/verticaltoleaf");
            }
            if k < 1 {
                bail!("moments start at k = 1");
            }
            let ctx = PathGf::with_max_k(family, n, k)?;
            let exact = moment_exact_in(&ctx, kind, k, n)?;
            let exp = singular_expand(&TreeFamily::new(family, 4))?;
            let asym = moment_asym(&exp, kind, k as u32, n as u64);
            let rel = (asym - rat_to_f64(&exact)).abs() / rat_to_f64(&exact);
            let mk = |source, value| Row {
                family,
                stat: kind,
                measure: "moment",
                k,
                n: n as u64,
                source,
                value,
            };
            emit(
                vec![
                    mk(SourceTag::Series, rat_string(&exact)),
                    mk(SourceTag::Asym, asym.to_string()),
                ],
                format,
            );
            eprintln!("relative error {rel:.6}");
            Ok(ExitCode::SUCCESS)
        }
        Command::Expand { family, format } => {
            let e = singular_expand(&TreeFamily::new(family, 4))?;
            match format {
                Format::Csv => {
                    println!("family,rho,a0,a1,a2");
                    println!("{},{},{},{},{}", family, e.rho, e.a0, e.a1, e.a2);
                }
                Format::Json => println!(
                    "{}",
                    serde_json::json!({
                        "family": family.as_str(),
                        "rho": e.rho,
                        "a0": e.a0,
                        "a1": e.a1,
                        "a2": e.a2,
                    })
                ),
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Report { out, n_max } => report(&out, n_max),
    }
}

fn size_diagnostic(e: CoreError) -> anyhow::Error {
    match e {
        CoreError::SizeLimitExceeded { .. } => anyhow!("{e}; lower --n"),
        other => other.into(),
    }
}

/// Statistics that have a series for this family.
fn default_stats(family: FamilyName) -> Vec<StatKind> {
    StatKind::ALL
        .into_iter()
        .filter(|s| {
            s.is_vertical_kind()
                || matches!(family, FamilyName::General | FamilyName::Binary)
        })
        .collect()
}

fn compare(
    family: FamilyName,
    n_max: usize,
    k: Option<usize>,
    stats: Vec<StatKind>,
    format: Format,
) -> Result<ExitCode> {
    let caps = Caps::default();
    let cap = caps.for_family(family);
    let stats = if stats.is_empty() {
        default_stats(family)
    } else {
        stats
    };
    let ks = k.map(|k| vec![k]).unwrap_or_else(|| vec![0, 1]);
    let max_k = *ks.iter().max().expect("nonempty");
    let ctx = PathGf::with_max_k(family, n_max.max(1), max_k)?;
    let mut rows = Vec::new();
    let mut disagreements = Vec::new();

    for n in 2..=n_max {
        let oracle = (n <= cap)
            .then(|| census_all(family, n, max_k, &caps))
            .transpose()?;
        for &stat in &stats {
            for &k in &ks {
                if !stat.is_vertical_kind() && k > 1 {
                    continue;
                }
                let measure = measure_label(k);
                let mut exact: Vec<(SourceTag, Rat)> = Vec::new();
                if let Some(table) = &oracle {
                    exact.push((
                        SourceTag::Oracle,
                        Rat::from_integer(table.weighted_sum(stat, k)),
                    ));
                }
                let series = ctx.stat_series(stat, k)?;
                exact.push((SourceTag::Series, series.counting_coeff(n)));
                if k <= 1 {
                    let m = if k == 0 { Measure::Count } else { Measure::Edges };
                    if let Some(f) = closed_formula(family, stat, m) {
                        if n as u64 >= f.floor {
                            exact.push((SourceTag::Closed, closed_eval(&f, n as u64)?));
                        }
                    }
                    if let Some(e) = expansion(family, stat, m) {
                        let scale = if e.scaled_pow4 { (4f64).powi(n as i32) } else { 1.0 };
                        rows.push(Row {
                            family,
                            stat,
                            measure,
                            k,
                            n: n as u64,
                            source: SourceTag::Asym,
                            value: (e.eval(n as u64) * scale).to_string(),
                        });
                    }
                }
                for (source, value) in &exact {
                    rows.push(Row {
                        family,
                        stat,
                        measure,
                        k,
                        n: n as u64,
                        source: *source,
                        value: rat_string(value),
                    });
                }
                if exact.windows(2).any(|w| w[0].1 != w[1].1) {
                    disagreements.push(format!("{family}/{stat} {measure} n={n}"));
                }
            }
        }
        // expectation cells: exact ratios across the same sources
        if ks.contains(&1) {
            for &stat in &stats {
                let count = ctx.stat_series(stat, 0)?.counting_coeff(n);
                if count.is_zero() {
                    continue;
                }
                let mut exact: Vec<(SourceTag, Rat)> = Vec::new();
                if let Some(table) = &oracle {
                    exact.push((
                        SourceTag::Oracle,
                        Rat::from_integer(table.weighted_sum(stat, 1))
                            / Rat::from_integer(table.count(stat)),
                    ));
                }
                exact.push((
                    SourceTag::Series,
                    ctx.stat_series(stat, 1)?.counting_coeff(n) / &count,
                ));
                if let Some(f) = closed_formula(family, stat, Measure::Expectation) {
                    if n as u64 >= f.floor {
                        exact.push((SourceTag::Closed, closed_eval(&f, n as u64)?));
                    }
                }
                if let Some(e) = expansion(family, stat, Measure::Expectation) {
                    rows.push(Row {
                        family,
                        stat,
                        measure: "expectation",
                        k: 1,
                        n: n as u64,
                        source: SourceTag::Asym,
                        value: e.eval(n as u64).to_string(),
                    });
                }
                for (source, value) in &exact {
                    rows.push(Row {
                        family,
                        stat,
                        measure: "expectation",
                        k: 1,
                        n: n as u64,
                        source: *source,
                        value: rat_string(value),
                    });
                }
                if exact.windows(2).any(|w| w[0].1 != w[1].1) {
                    disagreements.push(format!("{family}/{stat} expectation n={n}"));
                }
            }
        }
    }

    emit(rows, format);
    if disagreements.is_empty() {
        Ok(ExitCode::SUCCESS)
    } else {
        for d in &disagreements {
            eprintln!("disagreement: {d}");
        }
        Ok(ExitCode::from(1))
    }
}

/// One file per table block, mirroring the layout: each family's first
/// block holds the three root/vertical statistics, the continuation block
/// the leaf-pair and arbitrary ones.
fn report(out: &std::path::Path, n_max: usize) -> Result<ExitCode> {
    std::fs::create_dir_all(out)
        .with_context(|| format!("creating output directory {}", out.display()))?;
    let blocks: [(&str, FamilyName, [StatKind; 3]); 4] = [
        (
            "general_trees.csv",
            FamilyName::General,
            [StatKind::RootVertical, StatKind::Vertical, StatKind::RootToLeaf],
        ),
        (
            "general_trees_cont.csv",
            FamilyName::General,
            [StatKind::VerticalToLeaf, StatKind::Arbitrary, StatKind::LeafToLeaf],
        ),
        (
            "binary_trees.csv",
            FamilyName::Binary,
            [StatKind::RootVertical, StatKind::Vertical, StatKind::RootToLeaf],
        ),
        (
            "binary_trees_cont.csv",
            FamilyName::Binary,
            [StatKind::VerticalToLeaf, StatKind::Arbitrary, StatKind::LeafToLeaf],
        ),
    ];
    let caps = Caps::default();
    for (file, family, stats) in blocks {
        let cap = caps.for_family(family);
        let ctx = PathGf::with_max_k(family, n_max.max(1), 1)?;
        let mut rows = Vec::new();
        for n in 2..=n_max {
            let oracle = (n <= cap)
                .then(|| census_all(family, n, 1, &caps))
                .transpose()?;
            for stat in stats {
                for (measure, k) in [("count", 0usize), ("edges", 1)] {
                    let mut push = |source, value| {
                        rows.push(Row {
                            family,
                            stat,
                            measure,
                            k,
                            n: n as u64,
                            source,
                            value,
                        })
                    };
                    if let Some(table) = &oracle {
                        push(SourceTag::Oracle, table.weighted_sum(stat, k).to_string());
                    }
                    push(
                        SourceTag::Series,
                        rat_string(&ctx.stat_series(stat, k)?.counting_coeff(n)),
                    );
                    let m = if k == 0 { Measure::Count } else { Measure::Edges };
                    if let Some(f) = closed_formula(family, stat, m) {
                        if n as u64 >= f.floor {
                            push(SourceTag::Closed, rat_string(&closed_eval(&f, n as u64)?));
                        }
                    }
                    if let Some(e) = expansion(family, stat, m) {
                        let scale = if e.scaled_pow4 { (4f64).powi(n as i32) } else { 1.0 };
                        push(SourceTag::Asym, (e.eval(n as u64) * scale).to_string());
                    }
                }
                // expectation row
                let count = ctx.stat_series(stat, 0)?.counting_coeff(n);
                if !count.is_zero() {
                    let ratio = ctx.stat_series(stat, 1)?.counting_coeff(n) / &count;
                    let mut push = |source, value| {
                        rows.push(Row {
                            family,
                            stat,
                            measure: "expectation",
                            k: 1,
                            n: n as u64,
                            source,
                            value,
                        })
                    };
                    push(SourceTag::Series, rat_string(&ratio));
                    if let Some(f) = closed_formula(family, stat, Measure::Expectation) {
                        if n as u64 >= f.floor {
                            push(SourceTag::Closed, rat_string(&closed_eval(&f, n as u64)?));
                        }
                    }
                    if let Some(e) = expansion(family, stat, Measure::Expectation) {
                        push(SourceTag::Asym, e.eval(n as u64).to_string());
                    }
                }
            }
        }
        sort_rows(&mut rows);
        std::fs::write(out.join(file), to_csv(&rows))
            .with_context(|| format!("writing {file}"))?;
    }
    Ok(ExitCode::SUCCESS)
}

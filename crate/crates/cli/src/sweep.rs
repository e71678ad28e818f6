use crate::synth::{measure_adder, verify_adder};
use crate::{Emit, Failure, SweepArgs};
use monosynth::adder::Construction;
use monosynth::report::SynthReport;
use rayon::prelude::*;

/// Parses `a..b` or `a..b..step` into the inclusive list of widths.
pub fn parse_range(s: &str) -> Result<Vec<usize>, Failure> {
    let bad = || Failure::Usage(format!("expected a..b or a..b..step, got `{s}`"));
    let parts: Vec<usize> = s.split("..").map(|x| x.trim().parse().map_err(|_| bad())).collect::<Result<_, _>>()?;
    let (a, b, step) = match parts[..] {
        [a, b] => (a, b, 1),
        [a, b, step] => (a, b, step),
        _ => return Err(bad()),
    };
    if step == 0 || a == 0 || a > b {
        return Err(Failure::Usage(format!("empty or invalid range `{s}`")));
    }
    Ok((a..=b).step_by(step).collect())
}

pub fn run(args: &SweepArgs) -> Result<(), Failure> {
    let widths = parse_range(&args.n_range)?;
    let constructions: Vec<Construction> = args
        .constructions
        .iter()
        .map(|c| c.parse().map_err(|_| Failure::Usage(format!("unknown adder construction `{c}`"))))
        .collect::<Result<_, _>>()?;
    if constructions.is_empty() {
        return Err(Failure::Usage("no constructions given".into()));
    }
    let cells: Vec<(usize, usize)> =
        widths.iter().flat_map(|&n| (0..constructions.len()).map(move |j| (n, j))).collect();
    let mut rows: Vec<(usize, usize, Option<SynthReport>)> = cells
        .par_iter()
        .map(|&(n, j)| {
            let c = constructions[j];
            if let Construction::Lf(f) = c {
                if n > 1 && f > usize::BITS - (n - 1).leading_zeros() {
                    return Ok((n, j, None));
                }
            }
            let (mut report, circuit) = measure_adder(c, n)?;
            verify_adder(&mut report, &circuit, args.verify, args.seed)?;
            Ok((n, j, Some(report)))
        })
        .collect::<Result<_, Failure>>()?;
    rows.sort_by_key(|&(n, j, _)| (n, j));
    for (n, j, _) in rows.iter().filter(|r| r.2.is_none()) {
        eprintln!("skipped {} at n={n}: f exceeds ceil(log2 n)", constructions[*j]);
    }
    let reports: Vec<&SynthReport> = rows.iter().filter_map(|r| r.2.as_ref()).collect();
    match args.emit {
        Emit::Csv => print!("{}", csv(&reports)),
        Emit::Md => print!("{}", markdown(&reports)),
    }
    match reports.iter().find(|r| !r.passed()) {
        Some(r) => Err(Failure::Check(format!("{} n={} failed its bound or verification", r.construction, r.n))),
        None => Ok(()),
    }
}

fn opt<T: ToString>(x: Option<T>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

pub fn csv(reports: &[&SynthReport]) -> String {
    let mut out = String::from("n,construction,depth,size,fanout,bound_depth,bound_size,pass\n");
    for r in reports {
        out += &format!(
            "{},{},{},{},{},{},{},{}\n",
            r.n,
            r.construction,
            r.depth,
            r.size,
            r.fanout,
            opt(r.bound_depth),
            opt(r.bound_size.map(|s| format!("{s:.2}"))),
            r.passed()
        );
    }
    out
}

fn markdown(reports: &[&SynthReport]) -> String {
    let mut out = String::from("| n | construction | depth | size | size/n | fanout | bound depth | bound size | pass |\n");
    out += "|---:|---|---:|---:|---:|---:|---:|---:|---|\n";
    for r in reports {
        out += &format!(
            "| {} | {} | {} | {} | {:.2} | {} | {} | {} | {} |\n",
            r.n,
            r.construction,
            r.depth,
            r.size,
            r.size as f64 / r.n as f64,
            r.fanout,
            opt(r.bound_depth),
            opt(r.bound_size.map(|s| format!("{s:.2}"))),
            if r.passed() { "yes" } else { "no" }
        );
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges() {
        assert_eq!(parse_range("4..6").ok(), Some(vec![4, 5, 6]));
        assert_eq!(parse_range("8..32..8").ok(), Some(vec![8, 16, 24, 32]));
        assert_eq!(parse_range("3..3").ok(), Some(vec![3]));
        for bad in ["", "4", "6..4", "0..3", "1..4..0", "a..b", "1..2..3..4"] {
            assert!(parse_range(bad).is_err(), "{bad}");
        }
    }
}

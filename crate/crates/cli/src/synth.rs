use crate::{FormatArg, Failure, Kind, ModeArg, PolarityArg, SynthArgs, VerifyArg};
use monosynth::adder::{adder_bounds, build_adder, Bounds, Construction};
use monosynth::aop::{depth_bound, size_bound, synth_extended_aop, SynthMode};
use monosynth::export::{export, Format};
use monosynth::reference::{interleaved_carry_oracle, Polarity};
use monosynth::report::{SynthReport, Verification};
use monosynth::verify::{verify_equivalence, Verdict, VerifyMode};
use monosynth::Circuit;
use std::path::PathBuf;
use std::time::Instant;

type Oracle = Box<dyn Fn(&[u64]) -> Vec<u64>>;

pub fn run(args: &SynthArgs) -> Result<(), Failure> {
    let start = Instant::now();
    let (mut report, circuit) = match args.kind {
        Kind::Aop => aop(args)?,
        Kind::Adder => adder(args)?,
    };
    if let Some(mode) = args.verify.mode(args.seed) {
        let oracle: Oracle = match args.kind {
            Kind::Adder => Box::new(interleaved_carry_oracle),
            Kind::Aop => aop_oracle(report.n_sym.unwrap_or(0), polarity(args)),
        };
        let verdict = verify_equivalence(&circuit, &*oracle, mode)?;
        record(&mut report, mode, verdict);
    }
    report.wall_time_ms = start.elapsed().as_secs_f64() * 1e3;

    if args.out.is_some() || args.format.is_some() {
        let format = netlist_format(args);
        let path = args.out.clone().unwrap_or_else(|| default_path(&report, format));
        std::fs::write(&path, export(&circuit, format))?;
        eprintln!("wrote {}", path.display());
    }
    let json = serde_json::to_string_pretty(&report).expect("report serializes");
    if let Some(path) = &args.report {
        std::fs::write(path, format!("{json}\n"))?;
    }
    println!("{json}");
    check(&report)
}

/// Exit status of a finished report.
pub fn check(report: &SynthReport) -> Result<(), Failure> {
    if !report.verified.passed() {
        return Err(Failure::Check(format!("{} n={}: circuit differs from its reference function", report.construction, report.n)));
    }
    if let Some(d) = report.bound_depth.filter(|&d| report.depth > d) {
        let formula = report.bound_depth_formula.as_deref().unwrap_or("depth bound");
        return Err(Failure::Check(format!("{} n={}: depth {} exceeds {formula} = {d}", report.construction, report.n, report.depth)));
    }
    if let Some(s) = report.bound_size.filter(|_| !report.bounds_hold) {
        let formula = report.bound_size_formula.as_deref().unwrap_or("size bound");
        return Err(Failure::Check(format!("{} n={}: size {} exceeds {formula} = {s}", report.construction, report.n, report.size)));
    }
    Ok(())
}

pub fn record(report: &mut SynthReport, mode: VerifyMode, verdict: Verdict) {
    let (passed, checked) = match verdict {
        Verdict::Pass { checked } => (true, checked),
        Verdict::Fail { .. } => (false, 0),
    };
    report.verified = match mode {
        VerifyMode::Exhaustive => Verification::Exhaustive { passed, checked },
        VerifyMode::Random { trials, seed } => Verification::Random { passed, checked, trials, seed },
    };
    if !passed {
        report.counterexample = Some(verdict);
    }
}

fn polarity(args: &SynthArgs) -> Polarity {
    match args.polarity.unwrap_or(PolarityArg::And) {
        PolarityArg::And => Polarity::F,
        PolarityArg::Or => Polarity::FStar,
    }
}

fn aop_oracle(n: usize, polarity: Polarity) -> Oracle {
    Box::new(move |lanes: &[u64]| {
        let (s, t) = lanes.split_at(n);
        vec![monosynth::reference::extended_aop_lanes(s, t, polarity).expect("nonempty path")]
    })
}

fn aop(args: &SynthArgs) -> Result<(SynthReport, Circuit), Failure> {
    if args.construction != "grinchuk" {
        return Err(Failure::Usage(format!("paths are built by `grinchuk`, not `{}`", args.construction)));
    }
    if args.f.is_some() {
        return Err(Failure::Usage("--f applies to lf adders only".into()));
    }
    let m = args.m.ok_or_else(|| Failure::Usage("--kind aop needs --m".into()))?;
    let n = args.n.unwrap_or(0);
    if n + m == 0 {
        return Err(Failure::Usage("path needs at least one input".into()));
    }
    let mode = match args.mode.unwrap_or(ModeArg::Shared) {
        ModeArg::Shared => SynthMode::Shared,
        ModeArg::Formula => SynthMode::Formula,
    };
    let a = synth_extended_aop(n, m, polarity(args), mode)?;
    let bounds = aop_bounds(n, m, mode, a.circuit.depth());
    let mut report = SynthReport::new("aop", "grinchuk".into(), m, &a.circuit, &bounds);
    report.n_sym = Some(n);
    report.gate_categories = Some(a.counts);
    Ok((report, a.circuit))
}

fn aop_bounds(n: usize, m: usize, mode: SynthMode, depth: u32) -> Bounds {
    let (n64, m64) = (n as u64, m as u64);
    let depth_formula = if m <= 2 { "ceil(log2(n + m))" } else { "d_min(n, m)" };
    let (size, size_formula) = match mode {
        SynthMode::Shared if m > 0 => (Some(size_bound(n64, m64)), Some("3.67 m + n + rho(n) - 2")),
        SynthMode::Formula if n + m >= 2 => (Some((m * depth as usize + n - 1) as f64), Some("m depth + n - 1")),
        _ => (None, None),
    };
    Bounds {
        depth: Some(depth_bound(n64, m64)),
        depth_formula: Some(depth_formula.into()),
        size,
        size_formula: size_formula.map(String::from),
    }
}

fn adder(args: &SynthArgs) -> Result<(SynthReport, Circuit), Failure> {
    if args.m.is_some() || args.mode.is_some() || args.polarity.is_some() {
        return Err(Failure::Usage("--m, --mode and --polarity apply to --kind aop only".into()));
    }
    let n = args.n.ok_or_else(|| Failure::Usage("--kind adder needs --n".into()))?;
    let mut construction: Construction = args
        .construction
        .parse()
        .map_err(|_| Failure::Usage(format!("unknown adder construction `{}`", args.construction)))?;
    if let Some(f) = args.f {
        match construction {
            Construction::Lf(_) => construction = Construction::Lf(f),
            other => return Err(Failure::Usage(format!("--f applies to lf only, not {other}"))),
        }
    }
    measure_adder(construction, n)
}

/// Builds an adder and fills in its metrics and bounds.
pub fn measure_adder(construction: Construction, n: usize) -> Result<(SynthReport, Circuit), Failure> {
    if n == 0 {
        return Err(Failure::Usage("adder needs --n >= 1".into()));
    }
    let a = build_adder(construction, n)?;
    let report = SynthReport::new("adder", construction.to_string(), n, &a.circuit, &adder_bounds(construction, n));
    Ok((report, a.circuit))
}

/// Adder verification for sweeps.
pub fn verify_adder(report: &mut SynthReport, circuit: &Circuit, verify: VerifyArg, seed: u64) -> Result<(), Failure> {
    if let Some(mode) = verify.mode(seed) {
        let verdict = verify_equivalence(circuit, &interleaved_carry_oracle, mode)?;
        record(report, mode, verdict);
    }
    Ok(())
}

fn netlist_format(args: &SynthArgs) -> Format {
    let from_ext = || match args.out.as_ref()?.extension()?.to_str()? {
        "blif" => Some(Format::Blif),
        "json" => Some(Format::Json),
        "dot" | "gv" => Some(Format::Dot),
        _ => None,
    };
    match args.format {
        Some(FormatArg::Dot) => Format::Dot,
        Some(FormatArg::Blif) => Format::Blif,
        Some(FormatArg::Json) => Format::Json,
        None => from_ext().unwrap_or(Format::Dot),
    }
}

/// `{kind}_{construction}_{n}.{ext}` with a file-safe construction tag.
fn default_path(report: &SynthReport, format: Format) -> PathBuf {
    let tag = report.construction.replace(":f=", "_f");
    PathBuf::from(format!("{}_{}_{}.{}", report.kind, tag, report.n, format.extension()))
}

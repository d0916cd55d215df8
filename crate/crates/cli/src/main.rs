mod report;

use std::fs;
use std::ops::RangeInclusive;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use abelquot::certify::{
    certify_with, recheck, verify_all, verify_theorem_with, Certificate, CertifyOptions,
    TheoremReport,
};
use abelquot::enumeration::{
    export_catalog, fixtures, transitive_groups_cached, EXHAUSTIVE_MAX, OPT_IN_MAX,
};
use abelquot::inequalities::{
    check_aux_sweep_with, kp_threshold, Constants, SweepConfig, DEFAULT_SWEEP_END, SWEEP_START,
};
use abelquot::interval::{decimal, DEFAULT_PRECISION};
use abelquot::{parse_group, Error, GroupSpec};
use clap::{Args, Parser, Subcommand};
use num_rational::BigRational;

use report::RunReport;

#[derive(Parser)]
#[command(
    name = "abelquot",
    version,
    about = "Abelianization bounds for transitive permutation groups"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check |G_ab| ≤ 4^{n/√log₂ n} and |G_ab| ≤ 3^{n/3} for groups.
    Verify(VerifyArgs),
    /// Build the recursive bound certificate for one group, or recheck one.
    Certify(CertifyArgs),
    /// Print the constants and the threshold where 3^{n/3} overtakes the bound.
    Constants(PrecisionArg),
    /// Check the inductive inequality for every n in range and every block size.
    Sweep(SweepArgs),
    /// Export groups as files plus an index.csv.
    Catalog(CatalogArgs),
}

#[derive(Args)]
struct PrecisionArg {
    /// Starting precision in bits; comparisons escalate from here.
    #[arg(long, default_value_t = DEFAULT_PRECISION)]
    precision: u32,
}

#[derive(Args)]
struct Sources {
    /// Exhaustively enumerated transitive groups of these degrees.
    #[arg(long, value_name = "A..B", value_parser = parse_range)]
    enumerate: Option<RangeInclusive<usize>>,
    /// Curated fixture groups of these degrees.
    #[arg(long, value_name = "A..B", value_parser = parse_range)]
    fixtures: Option<RangeInclusive<usize>>,
    /// Enumerated groups where available, fixtures above.
    #[arg(long, value_name = "A..B", value_parser = parse_range)]
    degree: Option<RangeInclusive<usize>>,
    /// A group file; may be repeated.
    #[arg(long = "file", value_name = "PATH")]
    files: Vec<PathBuf>,
    /// Allow exhaustive enumeration at degree 8 (several minutes).
    #[arg(long)]
    allow_degree_8: bool,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    sources: Sources,
    /// Worker threads (default: one per core).
    #[arg(long, value_name = "K")]
    jobs: Option<usize>,
    #[command(flatten)]
    precision: PrecisionArg,
}

#[derive(Args)]
struct CertifyArgs {
    /// The group to certify.
    #[arg(long, value_name = "PATH", required_unless_present = "recheck")]
    file: Option<PathBuf>,
    /// Where to write the certificate.
    #[arg(long, value_name = "PATH")]
    json: Option<PathBuf>,
    /// Recheck a certificate written earlier.
    #[arg(long, value_name = "PATH", conflicts_with = "file")]
    recheck: Option<PathBuf>,
    #[command(flatten)]
    precision: PrecisionArg,
}

#[derive(Args)]
struct SweepArgs {
    /// First degree checked.
    #[arg(long, default_value_t = SWEEP_START)]
    nmin: u64,
    /// Last degree checked.
    #[arg(long, default_value_t = DEFAULT_SWEEP_END)]
    nmax: u64,
    /// Write the tightest block size of every n as CSV.
    #[arg(long, value_name = "PATH")]
    csv: Option<PathBuf>,
    /// Worker threads (default: one per core).
    #[arg(long, value_name = "K")]
    jobs: Option<usize>,
    #[command(flatten)]
    precision: PrecisionArg,
}

#[derive(Args)]
struct CatalogArgs {
    #[command(flatten)]
    sources: Sources,
    /// Output directory.
    #[arg(long, value_name = "DIR")]
    out: PathBuf,
}

fn parse_range(s: &str) -> Result<RangeInclusive<usize>, String> {
    let (a, b) = match s.split_once("..") {
        Some((a, b)) => (a, b.strip_prefix('=').unwrap_or(b)),
        None => (s, s),
    };
    let a: usize = a
        .trim()
        .parse()
        .map_err(|_| format!("bad range start in {s:?}"))?;
    let b: usize = b
        .trim()
        .parse()
        .map_err(|_| format!("bad range end in {s:?}"))?;
    if a > b {
        return Err(format!("empty range {s:?}"));
    }
    Ok(a..=b)
}

/// A command that could not produce a report: bad input (exit 2) or a
/// comparison that stayed undecided at the precision ceiling (exit 1).
enum Failure {
    Input(String),
    Indeterminate(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Indeterminate { .. } => Failure::Indeterminate(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

fn input(msg: String) -> Failure {
    Failure::Input(msg)
}

type CmdResult = Result<RunReport, Failure>;

fn command_echo() -> String {
    std::env::args().skip(1).collect::<Vec<_>>().join(" ")
}

fn read_group(path: &PathBuf) -> Result<GroupSpec, Failure> {
    let text = fs::read_to_string(path).map_err(|e| input(format!("{}: {e}", path.display())))?;
    parse_group(&text).map_err(|e| input(format!("{}: {e}", path.display())))
}

fn collect_groups(src: &Sources) -> Result<Vec<GroupSpec>, Failure> {
    let mut groups = Vec::new();
    let enum_max = if src.allow_degree_8 {
        OPT_IN_MAX
    } else {
        EXHAUSTIVE_MAX
    };
    if let Some(range) = &src.enumerate {
        for n in range.clone() {
            groups.extend(transitive_groups_cached(n, src.allow_degree_8)?.groups);
        }
    }
    if let Some(range) = &src.fixtures {
        for n in range.clone() {
            groups.extend(fixtures(n)?.groups);
        }
    }
    if let Some(range) = &src.degree {
        for n in range.clone() {
            if n <= enum_max {
                groups.extend(transitive_groups_cached(n, src.allow_degree_8)?.groups);
            } else {
                groups.extend(fixtures(n)?.groups);
            }
        }
    }
    for path in &src.files {
        let g = read_group(path)?;
        let label = g
            .label()
            .map(str::to_string)
            .unwrap_or_else(|| path.display().to_string());
        groups.push(g.with_label(label));
    }
    if groups.is_empty() {
        return Err(input("no groups selected".into()));
    }
    Ok(groups)
}

fn dec(q: &BigRational) -> String {
    decimal(q, 6, true)
}

fn verdict_line(label: &str, r: &TheoremReport) -> String {
    format!(
        "n={} {} |G_ab|={} margin>={} kp={} cert<={} {}",
        r.degree,
        label,
        r.abelianization,
        r.margin.lo_decimal(6),
        if r.kp_holds { "ok" } else { "FAIL" },
        dec(&r.certificate_bound_hi),
        if r.passes() { "pass" } else { "FAIL" }
    )
}

fn cmd_verify(args: &VerifyArgs) -> CmdResult {
    let groups = collect_groups(&args.sources)?;
    let opts = CertifyOptions {
        prec: args.precision.precision,
        ..CertifyOptions::default()
    };
    let mut report = RunReport::new(command_echo(), Some(opts.prec));
    let results = verify_all(&groups, &opts, args.jobs)?;
    for (g, result) in groups.iter().zip(results) {
        let label = g.label().unwrap_or("-");
        match result {
            Ok(r) => {
                report.line(verdict_line(label, &r));
                report.record(r.passes());
            }
            Err(Error::Indeterminate { what, bits }) => {
                report.line(format!(
                    "n={} {label} indeterminate: {what} at {bits} bits",
                    g.degree()
                ));
                report.indeterminate += 1;
            }
            Err(e) => return Err(input(format!("{label}: {e}"))),
        }
    }
    Ok(report)
}

fn certificate_lines(cert: &Certificate, report: &mut RunReport) {
    for node in cert.path() {
        let mut line = format!("degree {} {}", node.degree, node.kind);
        if let Some(step) = &node.step {
            line.push_str(&format!(
                " r={} d={} 2^a(R)={} term<={}",
                step.r,
                step.d,
                step.a_r.product(),
                dec(&step.term_hi)
            ));
        }
        line.push_str(&format!(" bound<={}", dec(&node.bound_hi)));
        report.line(line);
    }
}

fn cmd_certify(args: &CertifyArgs) -> CmdResult {
    let prec = args.precision.precision;
    let mut report = RunReport::new(command_echo(), Some(prec));
    if let Some(path) = &args.recheck {
        let text =
            fs::read_to_string(path).map_err(|e| input(format!("{}: {e}", path.display())))?;
        let cert = Certificate::from_json(&text)?;
        certificate_lines(&cert, &mut report);
        match recheck(&cert) {
            Ok(()) => {
                report.line("certificate accepted");
                report.record(true);
            }
            Err(Error::Certificate(msg)) => {
                report.line(format!("certificate rejected: {msg}"));
                report.record(false);
            }
            Err(e) => return Err(e.into()),
        }
        return Ok(report);
    }
    let path = args.file.as_ref().expect("required by clap");
    let g = read_group(path)?;
    let opts = CertifyOptions {
        prec,
        ..CertifyOptions::default()
    };
    let cert = certify_with(&g, &opts)?;
    certificate_lines(&cert, &mut report);
    let r = verify_theorem_with(&g, &opts)?;
    report.line(format!(
        "|G_ab|={} bound covers log2|G_ab|: {}",
        r.abelianization,
        if r.certificate_sound { "yes" } else { "NO" }
    ));
    report.record(r.certificate_sound);
    if let Some(out) = &args.json {
        fs::write(out, cert.to_json()).map_err(|e| input(format!("{}: {e}", out.display())))?;
    }
    Ok(report)
}

fn cmd_constants(args: &PrecisionArg) -> CmdResult {
    let prec = args.precision;
    let mut report = RunReport::new(command_echo(), Some(prec));
    let c = Constants::compute(prec);
    let digits = (prec as usize * 3 / 10).min(60);
    for (name, x) in [
        ("c0", &c.c0),
        ("bprime", &c.bprime),
        ("log2(3)", &c.log3),
        ("log2(24)/3", &c.log24_over_3),
    ] {
        report.line(format!(
            "{name} in [{}, {}]",
            x.lo_decimal(digits),
            x.hi_decimal(digits)
        ));
    }
    let t = kp_threshold()?;
    report.line(format!("kp_threshold {t}"));
    report.record(true);
    Ok(report)
}

fn cmd_sweep(args: &SweepArgs) -> CmdResult {
    let prec = args.precision.precision;
    let mut report = RunReport::new(command_echo(), Some(prec));
    let cfg = SweepConfig {
        n_min: args.nmin,
        n_max: args.nmax,
        prec,
        jobs: args.jobs,
        keep_rows: args.csv.is_some(),
        ..SweepConfig::default()
    };
    let sweep = check_aux_sweep_with(&cfg)?;
    report.line(format!(
        "n in [{}, {}]: {} pairs checked, {} violations",
        sweep.n_min,
        sweep.n_max,
        sweep.pairs_checked,
        sweep.violations.len()
    ));
    if let Some(row) = sweep.min_margin() {
        report.line(format!(
            "smallest margin {:.6} at n={} r={}",
            row.margin, row.n, row.r
        ));
    }
    for v in &sweep.violations {
        report.line(format!("violation n={} r={} {:?}", v.n, v.r, v.kind));
    }
    report.record(sweep.violations.is_empty());
    if let Some(path) = &args.csv {
        let file = fs::File::create(path).map_err(|e| input(format!("{}: {e}", path.display())))?;
        sweep
            .write_csv(std::io::BufWriter::new(file))
            .map_err(|e| input(format!("{}: {e}", path.display())))?;
    }
    Ok(report)
}

fn cmd_catalog(args: &CatalogArgs) -> CmdResult {
    let groups = collect_groups(&args.sources)?;
    let mut report = RunReport::new(command_echo(), None);
    let rows = export_catalog(&groups, &args.out)?;
    for row in &rows {
        report.line(format!(
            "n={} {} order={} |G_ab|={} {}",
            row.degree,
            row.label,
            row.order,
            row.abelianization,
            match row.blocks {
                None => "primitive".to_string(),
                Some((r, d)) => format!("blocks r={r} d={d}"),
            }
        ));
        report.record(true);
    }
    Ok(report)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let result = match &cli.command {
        Command::Verify(a) => cmd_verify(a),
        Command::Certify(a) => cmd_certify(a),
        Command::Constants(a) => cmd_constants(a),
        Command::Sweep(a) => cmd_sweep(a),
        Command::Catalog(a) => cmd_catalog(a),
    };
    match result {
        Ok(mut report) => {
            report.elapsed = start.elapsed();
            print!("{}", report.render());
            eprintln!("elapsed: {:.3}s", report.elapsed.as_secs_f64());
            report.exit_code()
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Indeterminate(msg)) => {
            eprintln!("indeterminate: {msg}");
            ExitCode::from(1)
        }
    }
}

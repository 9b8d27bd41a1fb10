//! Command-line front end.
//!
//! Exit codes: `0` success, `1` a property failed or a counterexample alarm
//! fired, `2` invalid input, I/O failure or capacity refusal.

use std::ffi::OsString;
use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::construct::{thm12_pair, thm13_bound, thm13_pair, trivial_pair, UniformParams, UniformShape};
use crate::error::Error;
use crate::family::{product_bound_audit, CrossPair, Fraction, SetFamily};
use crate::format::{family_from_json, pair_from_json, to_json};
use crate::search::{
    max_product, sweep_fractions, ClassLabel, Classifier, SearchConfig, SearchReport,
    MAX_CANONICAL_GROUND,
};
use crate::structure::{
    check_intersection_closure, check_linearity, check_parity_closure,
    check_self_orthogonal_family, extract_atoms,
};

pub const EXIT_OK: u8 = 0;
pub const EXIT_VIOLATION: u8 = 1;
pub const EXIT_INVALID: u8 = 2;

#[derive(Debug, Parser)]
#[command(name = "cross-intersect", version, about = "Construct and verify fractional cross-intersecting families")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check a pair file: cross-intersection, the product bound chain and,
    /// for maximal 1/2 pairs, the structural properties of B.
    Verify {
        /// Pair JSON file, or `-` for standard input.
        file: PathBuf,
        #[command(flatten)]
        frac: FracArgs,
        #[arg(long)]
        json: bool,
    },
    /// Emit a pair JSON for one of the extremal constructions.
    Construct {
        kind: Kind,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        k: usize,
        /// Matched couples for `thm13b`.
        #[arg(long, default_value_t = 0)]
        tau: usize,
        /// Core size for `thm13a` (defaults to 2k).
        #[arg(long)]
        kappa: Option<usize>,
        #[command(flatten)]
        frac: FracArgs,
    },
    /// Exhaustively compute the maximum of |A||B|.
    Search {
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        frac: FracArgs,
        /// Run every irreducible c/d with d <= n.
        #[arg(long)]
        sweep: bool,
        /// Require every maximal 1/2 pair to match a known class.
        #[arg(long)]
        check_thm12: bool,
        /// Worker threads (0 = all cores).
        #[arg(long, default_value_t = 0)]
        workers: usize,
        #[arg(long, default_value_t = SearchConfig::default().shards)]
        shards: usize,
        /// Include every labeled witness in the report.
        #[arg(long)]
        all_witnesses: bool,
        /// Raise the family-count ceiling.
        #[arg(long)]
        allow_large: bool,
        #[arg(long)]
        json: bool,
    },
    /// Decompose a linear, self-orthogonal, intersection-closed family into atoms.
    Decompose {
        /// Family JSON file, or `-` for standard input.
        file: PathBuf,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Debug, Args)]
struct FracArgs {
    #[arg(long, requires = "d")]
    c: Option<u32>,
    #[arg(long, requires = "c")]
    d: Option<u32>,
}

impl FracArgs {
    fn get(&self) -> Result<Option<Fraction>, Error> {
        match (self.c, self.d) {
            (Some(c), Some(d)) => Fraction::new(c, d).map(Some),
            _ => Ok(None),
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Kind {
    Thm12,
    Thm13a,
    Thm13b,
    Trivial,
}

#[derive(Debug)]
enum Failure {
    Io(String),
    Lib(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e.to_string())
    }
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Io(_) => EXIT_INVALID,
            Failure::Lib(e) => match e {
                Error::Structure(_) | Error::Precondition(_) | Error::Inconsistent(_) => {
                    EXIT_VIOLATION
                }
                _ => EXIT_INVALID,
            },
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Io(e) => write!(f, "I/O error: {e}"),
            Failure::Lib(e) => write!(f, "{e}"),
        }
    }
}

/// Parses `args` and runs the command, writing results to `out` and
/// diagnostics to `err`. Returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{text}");
                EXIT_INVALID
            } else {
                let _ = write!(out, "{text}");
                EXIT_OK
            };
        }
    };
    let result = match cli.command {
        Command::Verify { file, frac, json } => verify(&file, &frac, json, out),
        Command::Construct {
            kind,
            n,
            k,
            tau,
            kappa,
            frac,
        } => construct(kind, n, k, tau, kappa, &frac, out, err),
        Command::Search {
            n,
            frac,
            sweep,
            check_thm12,
            workers,
            shards,
            all_witnesses,
            allow_large,
            json,
        } => {
            let cfg = SearchConfig {
                workers,
                shards,
                allow_large,
            };
            if sweep {
                search_sweep(n, &cfg, json, out)
            } else {
                search(n, &frac, check_thm12, all_witnesses, &cfg, json, out)
            }
        }
        Command::Decompose { file, json } => decompose(&file, json, out),
    };
    match result {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {f}");
            f.exit_code()
        }
    }
}

fn read_input(path: &Path) -> Result<String, Failure> {
    if path == Path::new("-") {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s)?;
        Ok(s)
    } else {
        fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
    }
}

#[derive(Serialize)]
struct Check {
    name: &'static str,
    status: &'static str,
    detail: String,
}

impl Check {
    fn new(name: &'static str, ok: bool, detail: impl Into<String>) -> Self {
        Self {
            name,
            status: if ok { "pass" } else { "fail" },
            detail: detail.into(),
        }
    }

    fn skipped(name: &'static str, detail: impl Into<String>) -> Self {
        Self {
            name,
            status: "skipped",
            detail: detail.into(),
        }
    }
}

#[derive(Serialize)]
struct VerifyReport {
    n: usize,
    c: u32,
    d: u32,
    product: u128,
    checks: Vec<Check>,
}

fn verify_checks(pair: &CrossPair) -> Result<Vec<Check>, Failure> {
    let n = pair.n();
    let frac = pair.frac();
    let mut checks = Vec::new();

    let cross = pair.is_cross_intersecting();
    checks.push(Check::new(
        "cross_intersection",
        cross,
        format!("|A ∩ B| = ({frac})|B| for all A, B"),
    ));
    if !cross {
        checks.push(Check::skipped("bound_chain", "pair is not cross-intersecting"));
        return Ok(checks);
    }
    match product_bound_audit(pair) {
        Ok(a) => checks.push(Check::new(
            "bound_chain",
            true,
            format!(
                "|A||B| = {} <= 2^{n}; dim span A' + dim span B' = {} + {} <= {}",
                a.product,
                a.dim_span_a,
                a.dim_span_b,
                n + 1
            ),
        )),
        Err(Error::Inconsistent(msg)) => checks.push(Check::new("bound_chain", false, msg)),
        Err(e) => return Err(e.into()),
    }

    if frac != Fraction::HALF {
        return Ok(checks);
    }
    let maximal = pair.product() == 1u128 << n;
    let b = pair.b();
    let structural: [(&'static str, Box<dyn Fn() -> bool>); 5] = [
        ("linearity", Box::new(|| check_linearity(b))),
        (
            "parity_closure",
            Box::new(|| check_parity_closure(b, Fraction::HALF).unwrap_or(false)),
        ),
        ("self_orthogonal", Box::new(|| check_self_orthogonal_family(b))),
        ("intersection_closure", Box::new(|| check_intersection_closure(b))),
        (
            "size_bound",
            Box::new(|| (b.len() as u128) <= 1u128 << (n / 2)),
        ),
    ];
    for (name, check) in structural {
        if maximal {
            checks.push(Check::new(name, check(), ""));
        } else {
            checks.push(Check::skipped(name, "pair is not maximal"));
        }
    }
    if maximal {
        if n <= MAX_CANONICAL_GROUND {
            let form = crate::search::canonical_form(pair)?;
            let label = Classifier::new(n, Fraction::HALF)?.label(&form);
            checks.push(Check::new(
                "classification",
                label != ClassLabel::Nonstandard,
                label.to_string(),
            ));
        } else {
            checks.push(Check::skipped(
                "classification",
                format!("n > {MAX_CANONICAL_GROUND}"),
            ));
        }
    }
    Ok(checks)
}

fn verify(file: &Path, frac: &FracArgs, json: bool, out: &mut dyn Write) -> Result<u8, Failure> {
    let text = read_input(file)?;
    let mut pair = pair_from_json(&text)?;
    if let Some(f) = frac.get()? {
        pair = pair.with_frac(f);
    }
    let checks = verify_checks(&pair)?;
    let failed = checks.iter().any(|c| c.status == "fail");
    if json {
        let report = VerifyReport {
            n: pair.n(),
            c: pair.frac().c(),
            d: pair.frac().d(),
            product: pair.product(),
            checks,
        };
        writeln!(out, "{}", to_json(&report))?;
    } else {
        writeln!(
            out,
            "n = {}, c/d = {}, |A| = {}, |B| = {}, |A||B| = {}",
            pair.n(),
            pair.frac(),
            pair.a().len(),
            pair.b().len(),
            pair.product()
        )?;
        for c in &checks {
            if c.detail.is_empty() {
                writeln!(out, "{:<8} {}", c.status.to_uppercase(), c.name)?;
            } else {
                writeln!(out, "{:<8} {}: {}", c.status.to_uppercase(), c.name, c.detail)?;
            }
        }
    }
    Ok(if failed { EXIT_VIOLATION } else { EXIT_OK })
}

#[allow(clippy::too_many_arguments)]
fn construct(
    kind: Kind,
    n: usize,
    k: usize,
    tau: usize,
    kappa: Option<usize>,
    frac: &FracArgs,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<u8, Failure> {
    let requested = frac.get()?;
    let mismatch = |expected: Fraction, got: Fraction| {
        Error::InvalidParameters(format!("{kind:?} uses c/d = {expected}, not {got}"))
    };
    let (pair, bound) = match kind {
        Kind::Thm12 => {
            if let Some(f) = requested.filter(|&f| f != Fraction::HALF) {
                return Err(mismatch(Fraction::HALF, f).into());
            }
            (thm12_pair(n, k)?, 1u128 << n)
        }
        Kind::Trivial => {
            let f = requested.ok_or_else(|| {
                Error::InvalidParameters("trivial construction needs --c and --d".into())
            })?;
            (trivial_pair(n, f, k)?, 1u128 << n)
        }
        Kind::Thm13a => {
            if let Some(f) = requested.filter(|&f| f != Fraction::ONE) {
                return Err(mismatch(Fraction::ONE, f).into());
            }
            let params = UniformParams::new(n, k, Fraction::ONE)?;
            let shape = UniformShape::Superset {
                kappa: kappa.unwrap_or(2 * k),
            };
            (thm13_pair(params, shape)?, thm13_bound(n, k, Fraction::ONE)?)
        }
        Kind::Thm13b => {
            let f = UniformParams::balanced_fraction(k)?;
            if let Some(g) = requested.filter(|&g| g != f) {
                return Err(mismatch(f, g).into());
            }
            let params = UniformParams::new(n, k, f)?;
            (
                thm13_pair(params, UniformShape::Matched { tau })?,
                thm13_bound(n, k, f)?,
            )
        }
    };
    if !pair.is_cross_intersecting() || pair.product() != bound {
        return Err(Error::Inconsistent(format!(
            "generated pair failed self-verification (product {}, expected {bound})",
            pair.product()
        ))
        .into());
    }
    product_bound_audit(&pair)?;
    writeln!(
        err,
        "{kind:?}: n = {n}, c/d = {}, |A| = {}, |B| = {}, product = {}",
        pair.frac(),
        pair.a().len(),
        pair.b().len(),
        pair.product()
    )?;
    if matches!(kind, Kind::Thm13a | Kind::Thm13b) {
        writeln!(
            err,
            "construction valid; extremality holds only above an unspecified threshold on k"
        )?;
    }
    writeln!(out, "{}", to_json(&pair))?;
    Ok(EXIT_OK)
}

fn search(
    n: usize,
    frac: &FracArgs,
    check_thm12: bool,
    all_witnesses: bool,
    cfg: &SearchConfig,
    json: bool,
    out: &mut dyn Write,
) -> Result<u8, Failure> {
    let frac = frac
        .get()?
        .ok_or_else(|| Error::InvalidParameters("search needs --c and --d, or --sweep".into()))?;
    if check_thm12 && frac != Fraction::HALF {
        return Err(Error::InvalidParameters("--check-thm12 applies to c/d = 1/2 only".into()).into());
    }
    let result = max_product(n, frac, cfg)?;
    let report = SearchReport::new(&result, all_witnesses)?;
    if json {
        writeln!(out, "{}", to_json(&report))?;
    } else {
        writeln!(
            out,
            "n = {n}, c/d = {frac}: max |A||B| = {} ({} 2^{n}), {} families scanned, {} labeled witnesses",
            report.max_product,
            if result.attains_power_of_two() { "=" } else { "<" },
            report.families_scanned,
            result.witness_pairs.len()
        )?;
        for c in &report.classes {
            writeln!(
                out,
                "  {:<14} |A| = {:<6} B = {}",
                c.k_or_nonstandard.to_string(),
                c.representative.a().len(),
                c.representative.b()
            )?;
        }
    }
    let violated = !result.attains_power_of_two()
        || (check_thm12
            && (report.has_nonstandard() || report.classes.len() != n / 2 + 1));
    Ok(if violated { EXIT_VIOLATION } else { EXIT_OK })
}

fn search_sweep(n: usize, cfg: &SearchConfig, json: bool, out: &mut dyn Write) -> Result<u8, Failure> {
    let sweep = sweep_fractions(n, cfg)?;
    if json {
        writeln!(out, "{}", to_json(&sweep))?;
    } else {
        writeln!(out, "n = {n}")?;
        for row in &sweep.rows {
            let frac = format!("{}/{}", row.c, row.d);
            match (row.max_product, row.nontrivial) {
                (Some(m), Some(nt)) => writeln!(
                    out,
                    "  {frac:<6} max = {m:<8} classes = {:<3} nontrivial witness: {}",
                    row.classes.len(),
                    if nt { "yes" } else { "no" }
                )?,
                _ => writeln!(out, "  {frac:<6} skipped (family count above ceiling)")?,
            }
        }
    }
    let short = sweep
        .rows
        .iter()
        .any(|r| r.max_product.is_some_and(|m| m != 1u128 << n));
    Ok(if short { EXIT_VIOLATION } else { EXIT_OK })
}

fn decompose(file: &Path, json: bool, out: &mut dyn Write) -> Result<u8, Failure> {
    let text = read_input(file)?;
    let family: SetFamily = family_from_json(&text)?;
    let report = extract_atoms(&family)?;
    if json {
        writeln!(out, "{}", to_json(&report))?;
    } else {
        let atoms: Vec<String> = report.atoms.iter().map(|a| a.to_string()).collect();
        writeln!(out, "atoms:        {}", atoms.join(" "))?;
        writeln!(out, "half sizes:   {:?}", report.half_sizes)?;
        writeln!(out, "zero part:    {} (n0 = {})", report.zero_part, report.n0)?;
        writeln!(out, "dimension:    {}", report.dim)?;
        writeln!(
            out,
            "best |A||B|:  {}{}",
            report.product_audit,
            if report.is_maximal() { " (maximal)" } else { "" }
        )?;
    }
    Ok(EXIT_OK)
}

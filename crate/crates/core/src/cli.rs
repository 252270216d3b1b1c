//! Command-line front end.
//!
//! Every subcommand produces a [`CliReport`]; JSON on stdout is the default
//! and `--text` switches to a plain table. Exit codes: 0 success, 2 usage
//! error, 3 domain outcome (no square / no noncommuting pair).

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use crate::affine::{verify_square, AffineMap};
use crate::centralizer::common_centralizer_zn;
use crate::classify::{classify_zn, construct_square, ClassificationVerdict};
use crate::crt::is_prime_power;
use crate::css::{
    build_block_arrays, detect_commuting_2x3, export_alist, gf2_product_is_zero, tanner_girth,
    two_row_array, DEFAULT_GIRTH_CAP,
};
use crate::error::Error;
use crate::modular::Modulus;
use crate::oracle::{brute_force_square_exists, sn_square, verify_families, verify_permutation_square};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_DOMAIN: i32 = 3;

/// Environment variable capping the worker count.
pub const THREADS_ENV: &str = "AFFSQ_THREADS";

#[derive(Debug, Parser)]
#[command(name = "affsq", version, about = "Cross-commuting nonabelian squares in AGL_1(Z/nZ)")]
pub struct Cli {
    /// Human-readable output instead of JSON.
    #[arg(long, global = true)]
    pub text: bool,
    /// Write the report to this file instead of stdout.
    #[arg(long, short = 'o', global = true)]
    pub output: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decide whether AGL_1(Z/nZ) contains a square.
    Classify { n: u64 },
    /// Build the CRT witness square for n.
    Construct { n: u64 },
    /// Check four maps "a,b" for the square property.
    Verify {
        n: u64,
        #[arg(num_args = 4, value_names = ["F0", "F1", "G0", "G1"], allow_hyphen_values = true)]
        maps: Vec<String>,
    },
    /// Common centralizer of two maps.
    Centralizer {
        n: u64,
        #[arg(allow_hyphen_values = true)]
        f0: String,
        #[arg(allow_hyphen_values = true)]
        f1: String,
    },
    /// Exhaustive search for the lexicographically smallest square.
    Search { n: u64 },
    /// The square (1 2 3), (1 2), (4 5 6), (4 5) in S_n.
    PermSquare { n: usize },
    /// Two-row block arrays H_X, H_Z from m maps per family.
    Css {
        n: u64,
        m: usize,
        /// m tokens for the F family followed by m tokens for the G family.
        #[arg(required = true)]
        maps: Vec<String>,
        /// Prefix for the `.hx.alist` / `.hz.alist` files.
        #[arg(long)]
        out: String,
        /// Also write `.hx.json` / `.hz.json` coordinate exports.
        #[arg(long)]
        matrix_json: bool,
        /// Girth search cap.
        #[arg(long, default_value_t = DEFAULT_GIRTH_CAP)]
        girth_cap: usize,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Classify { .. } => "classify",
            Command::Construct { .. } => "construct",
            Command::Verify { .. } => "verify",
            Command::Centralizer { .. } => "centralizer",
            Command::Search { .. } => "search",
            Command::PermSquare { .. } => "perm-square",
            Command::Css { .. } => "css",
        }
    }
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CliReport {
    pub command: String,
    pub args: Vec<String>,
    pub tool_version: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub result: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<Value>,
    pub elapsed_ms: u64,
}

/// Output of one subcommand in both renderings.
struct Outcome {
    json: Value,
    text: String,
}

#[derive(Debug)]
pub struct CliOutput {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

fn modulus(n: u64) -> Result<Modulus, Error> {
    Modulus::new(n)
}

fn parse_maps(n: Modulus, tokens: &[String]) -> Result<Vec<AffineMap>, Error> {
    tokens.iter().map(|t| AffineMap::parse_token(n, t)).collect()
}

fn ab(f: &AffineMap) -> Value {
    json!({ "a": f.a(), "b": f.b() })
}

fn factors_json(v: &ClassificationVerdict) -> Value {
    json!({
        "n": v.n,
        "exists": v.exists,
        "factors": v.factors.iter().map(|f| [f.p, f.e as u64]).collect::<Vec<_>>(),
        "bigFactors": v.big_factors.iter().map(|f| f.q).collect::<Vec<_>>(),
        "reason": v.reason,
        "chosenIndices": v.chosen_indices,
    })
}

fn run_classify(n: u64) -> Result<Outcome, Error> {
    let v = classify_zn(n)?;
    let factors: Vec<String> = v.factors.iter().map(|f| format!("{}^{}", f.p, f.e)).collect();
    let text = format!(
        "n = {} = {}\nsquare exists: {}\nreason: {:?}\n",
        n,
        factors.join(" * "),
        v.exists,
        v.reason
    );
    Ok(Outcome { json: factors_json(&v), text })
}

fn run_construct(n: u64) -> Result<Outcome, Error> {
    let w = construct_square(n)?;
    let json = json!({
        "n": n,
        "f0": ab(&w.f0), "f1": ab(&w.f1), "g0": ab(&w.g0), "g1": ab(&w.g1),
        "factorF": w.factor_f,
        "factorG": w.factor_g,
        "verification": w.verdict,
    });
    let mut text = String::new();
    for (name, f) in ["F0", "F1", "G0", "G1"].iter().zip(w.maps()) {
        let _ = writeln!(text, "{name}(x) = {}x + {}  (mod {n})", f.a(), f.b());
    }
    let _ = writeln!(text, "F pair on factor {}, G pair on factor {}", w.factor_f.q, w.factor_g.q);
    let _ = writeln!(text, "verified: {}", w.verdict.is_square);
    Ok(Outcome { json, text })
}

fn run_verify(n: u64, tokens: &[String]) -> Result<Outcome, Error> {
    let maps = parse_maps(modulus(n)?, tokens)?;
    let v = verify_square(&maps[0], &maps[1], &maps[2], &maps[3])?;
    let json = json!({
        "n": n,
        "maps": maps.iter().map(ab).collect::<Vec<_>>(),
        "verdict": v,
    });
    let mut text = String::new();
    for i in 0..2 {
        for j in 0..2 {
            let _ = writeln!(text, "[F{i}, G{j}] = 1: {}", v.cross[i][j]);
        }
    }
    let _ = writeln!(text, "[F0, F1] != 1: {}\n[G0, G1] != 1: {}", v.f_noncommuting, v.g_noncommuting);
    let _ = writeln!(text, "square: {}", v.is_square);
    Ok(Outcome { json, text })
}

fn run_centralizer(n: u64, f0: &str, f1: &str) -> Result<Outcome, Error> {
    let r = modulus(n)?;
    let (f0, f1) = (AffineMap::parse_token(r, f0)?, AffineMap::parse_token(r, f1)?);
    let set = common_centralizer_zn(&f0, &f1)?;
    let abelian = set.is_abelian();
    let mut json = json!({
        "n": n,
        "f0": ab(&f0),
        "f1": ab(&f1),
        "size": set.len(),
        "abelian": abelian,
        "elements": set.elements.iter().map(ab).collect::<Vec<_>>(),
    });
    let mut text = format!("C(F0) ∩ C(F1): {} elements, abelian: {abelian}\n", set.len());
    if is_prime_power(n) {
        let st = &set.structure[0];
        json["snf"] = json!({
            "alpha": st.alpha,
            "beta": st.beta,
            "delta": st.delta,
            "deltaValuation": st.delta_valuation,
            "kernelSize": st.kernel_size,
        });
        let _ = writeln!(
            text,
            "SNF: alpha = {}, beta = {}, delta = {}, v(delta) = {}",
            st.alpha,
            st.beta,
            st.delta,
            st.delta_valuation.map_or("-".to_string(), |v| v.to_string())
        );
    }
    for g in &set.elements {
        let _ = writeln!(text, "  ({}, {})", g.a(), g.b());
    }
    Ok(Outcome { json, text })
}

fn run_search(n: u64) -> Result<Outcome, Error> {
    let report = brute_force_square_exists(n)?;
    let expected = classify_zn(n)?.exists;
    let found = report.found.is_some();
    let json = json!({
        "n": n,
        "found": found,
        "witness": report.found.as_ref().map(|w| json!({
            "f0": ab(&w.f0), "f1": ab(&w.f1), "g0": ab(&w.g0), "g1": ab(&w.g1),
        })),
        "pairsScanned": report.pairs_scanned,
        "classification": expected,
        "agrees": found == expected,
    });
    let mut text = format!("n = {n}: square found: {found} (classification says {expected})\n");
    if let Some(w) = &report.found {
        let maps: Vec<String> = w.maps().iter().map(|f| format!("({},{})", f.a(), f.b())).collect();
        let _ = writeln!(text, "smallest witness: {}", maps.join(" "));
    }
    let _ = writeln!(text, "pairs scanned: {}", report.pairs_scanned);
    Ok(Outcome { json, text })
}

fn run_perm_square(n: usize) -> Result<Outcome, Error> {
    let square = sn_square(n)?;
    let v = verify_permutation_square(&square)?;
    let cycles: Vec<String> = square.iter().map(ToString::to_string).collect();
    let json = json!({ "degree": n, "permutations": cycles, "verdict": v });
    let text = format!(
        "S_{n}: F0 = {}, F1 = {}, G0 = {}, G1 = {}\nsquare: {}\n",
        cycles[0], cycles[1], cycles[2], cycles[3], v.is_square
    );
    Ok(Outcome { json, text })
}

fn run_css(
    n: u64,
    m: usize,
    tokens: &[String],
    out: &str,
    matrix_json: bool,
    cap: usize,
) -> Result<Outcome, Error> {
    if m < 3 {
        return Err(Error::FamilyTooSmall(m));
    }
    if tokens.len() != 2 * m {
        return Err(Error::Parse(format!("expected {} map tokens for m = {m}, got {}", 2 * m, tokens.len())));
    }
    let maps = parse_maps(modulus(n)?, tokens)?;
    let (fs, gs) = maps.split_at(m);
    let pair = build_block_arrays(fs, gs)?;
    let ortho = gf2_product_is_zero(&pair);
    let families = verify_families(fs, gs)?;
    let f_windows = detect_commuting_2x3(fs)?;
    let g_windows = detect_commuting_2x3(gs)?;
    let girth = json!({
        "cap": cap,
        "hx": tanner_girth(&pair.hx, cap),
        "hz": tanner_girth(&pair.hz, cap),
        "fHalf": tanner_girth(&two_row_array(fs)?, cap),
        "gHalf": tanner_girth(&two_row_array(gs)?, cap),
    });

    let hx_path = format!("{out}.hx.alist");
    let hz_path = format!("{out}.hz.alist");
    let write = |path: &str, body: String| {
        std::fs::write(path, body).map_err(|e| Error::Parse(format!("cannot write {path}: {e}")))
    };
    write(&hx_path, export_alist(&pair.hx))?;
    write(&hz_path, export_alist(&pair.hz))?;
    let mut files = vec![hx_path.clone(), hz_path.clone()];
    if matrix_json {
        for (suffix, h) in [("hx", &pair.hx), ("hz", &pair.hz)] {
            let path = format!("{out}.{suffix}.json");
            write(&path, serde_json::to_string(h).expect("matrix serializes") + "\n")?;
            files.push(path);
        }
    }

    let json = json!({
        "n": n,
        "m": m,
        "shape": [pair.hx.rows(), pair.hx.cols()],
        "files": files,
        "orthogonal": ortho.is_zero,
        "nonzeroBlocks": ortho.nonzero_blocks,
        "families": families,
        "fWindows": f_windows,
        "gWindows": g_windows,
        "girth": girth,
    });
    let show = |g: &Value| if g.is_null() { format!("> {cap}") } else { g.to_string() };
    let text = format!(
        "H_X, H_Z: {}x{} written to {hx_path}, {hz_path}\n\
         H_X H_Z^T = 0 over GF(2): {}\n\
         cross-commuting families: {}\n\
         commuting 2x3 windows: F {}, G {}\n\
         girth: H_X {}, H_Z {}, F half {}, G half {}\n",
        pair.hx.rows(),
        pair.hx.cols(),
        ortho.is_zero,
        families.cross_commuting,
        f_windows.len(),
        g_windows.len(),
        show(&girth["hx"]),
        show(&girth["hz"]),
        show(&girth["fHalf"]),
        show(&girth["gHalf"]),
    );
    Ok(Outcome { json, text })
}

fn dispatch(command: &Command) -> Result<Outcome, Error> {
    match command {
        Command::Classify { n } => run_classify(*n),
        Command::Construct { n } => run_construct(*n),
        Command::Verify { n, maps } => run_verify(*n, maps),
        Command::Centralizer { n, f0, f1 } => run_centralizer(*n, f0, f1),
        Command::Search { n } => run_search(*n),
        Command::PermSquare { n } => run_perm_square(*n),
        Command::Css { n, m, maps, out, matrix_json, girth_cap } => {
            run_css(*n, *m, maps, out, *matrix_json, *girth_cap)
        }
    }
}

fn error_json(err: &Error) -> Value {
    let kind = match err {
        Error::NoSquare(_) => "NoSquare",
        Error::NoPair(_) => "NoPair",
        _ => "Usage",
    };
    let mut v = json!({ "kind": kind, "message": err.to_string() });
    if let Error::NoSquare(verdict) = err {
        v["verdict"] = factors_json(verdict);
    }
    v
}

/// Parses `args` (including the program name) and runs the command.
pub fn execute<I, T>(args: I) -> CliOutput
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(cli) => cli,
        Err(e) => {
            let rendered = e.render().to_string();
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let (stdout, stderr) = if code == EXIT_OK { (rendered, String::new()) } else { (String::new(), rendered) };
            return CliOutput { code, stdout, stderr };
        }
    };
    let start = Instant::now();
    let outcome = dispatch(&cli.command);
    let mut report = CliReport {
        command: cli.command.name().to_string(),
        args: args.iter().skip(1).map(|a| a.to_string_lossy().into_owned()).collect(),
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        result: None,
        error: None,
        elapsed_ms: 0,
    };
    let (code, text) = match outcome {
        Ok(o) => {
            report.result = Some(o.json);
            (EXIT_OK, o.text)
        }
        Err(err) if err.is_domain() => {
            report.error = Some(error_json(&err));
            (EXIT_DOMAIN, format!("{err}\n"))
        }
        Err(err) => {
            return CliOutput { code: EXIT_USAGE, stdout: String::new(), stderr: format!("error: {err}\n") };
        }
    };
    report.elapsed_ms = start.elapsed().as_millis() as u64;

    let body = if cli.text {
        text
    } else {
        serde_json::to_string_pretty(&report).expect("report serializes") + "\n"
    };
    match &cli.output {
        Some(path) => match std::fs::write(path, &body) {
            Ok(()) => CliOutput { code, stdout: String::new(), stderr: String::new() },
            Err(e) => CliOutput {
                code: EXIT_USAGE,
                stdout: String::new(),
                stderr: format!("error: cannot write {}: {e}\n", path.display()),
            },
        },
        None => CliOutput { code, stdout: body, stderr: String::new() },
    }
}

/// Entry point used by the binary: honours the thread cap, prints, and
/// returns the exit code.
pub fn main_from_env() -> i32 {
    if let Some(threads) = std::env::var(THREADS_ENV).ok().and_then(|s| s.parse::<usize>().ok()) {
        crate::par::limit_threads(threads);
    }
    let out = execute(std::env::args_os());
    print!("{}", out.stdout);
    eprint!("{}", out.stderr);
    out.code
}

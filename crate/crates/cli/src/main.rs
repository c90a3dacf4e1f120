//! Command-line front end: run a solve and print its history, sweep the
//! efficiency model over system sizes, or print the reference tables for
//! the two built-in problems.
//!
//! Exit codes mirror the terminal solve status: 0 converged, 2 iteration
//! budget exhausted, 3 singular Jacobian, 1 usage error.

use std::fmt::Write as _;
use std::path::Path;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use nlsys::{
    coc_estimate, crossover, efficiency_sweep, lookup, solve, MethodId, NonlinearProblem,
    NormKind, OpCount, ProblemSpec, SolverConfig, SolveStatus, SolveTrace, SweepRow, Vector,
};

#[derive(Parser)]
#[command(name = "nlsys", version, about = "dense nonlinear system solver bench")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run one solve and print the iteration history
    Solve(SolveArgs),
    /// Evaluate the cost model over a range of system sizes
    Efficiency(EfficiencyArgs),
    /// Print the reference tables for the built-in problems
    Tables,
}

#[derive(Args)]
struct SolveArgs {
    /// Registered name (problem1, bvp7, bvp:N) or path to a JSON spec file
    #[arg(long, default_value = "problem1")]
    problem: String,
    /// newton, pg6, cordero5, or cordero6
    #[arg(long, default_value = "pg6")]
    method: String,
    /// Comma-separated components, or fill:V to repeat V; defaults to the
    /// problem's start
    #[arg(long)]
    x0: Option<String>,
    #[arg(long, default_value_t = 1e-12)]
    tol: f64,
    #[arg(long, default_value_t = 100)]
    max_iter: usize,
    /// l1, l2, or linf
    #[arg(long, default_value = "l2")]
    norm: String,
    #[arg(long, value_enum, default_value_t = OutputFormat::Table)]
    format: OutputFormat,
}

#[derive(Args)]
struct EfficiencyArgs {
    /// Single size or inclusive range as lo:hi
    #[arg(long, default_value = "2:30")]
    n: String,
    #[arg(long, default_value_t = 1.0)]
    mu0: f64,
    #[arg(long, default_value_t = 1.0)]
    mu1: f64,
    #[arg(long, default_value_t = 1.0)]
    l: f64,
    /// Comma-separated subset of pg6, cordero5, cordero6
    #[arg(long, default_value = "pg6,cordero5,cordero6")]
    methods: String,
    /// Print only the smallest n where pg6 overtakes cordero5
    #[arg(long)]
    crossover: bool,
    #[arg(long, value_enum, default_value_t = OutputFormat::Table)]
    format: OutputFormat,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Table,
    Csv,
    Json,
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    let out = match cli.cmd {
        Cmd::Solve(a) => cmd_solve(a),
        Cmd::Efficiency(a) => cmd_efficiency(a),
        Cmd::Tables => Ok(cmd_tables()),
    };
    match out {
        Ok(code) => std::process::exit(code),
        Err(msg) => {
            eprintln!("error: {msg}");
            std::process::exit(1);
        }
    }
}

// ---- shared parsing ----

fn resolve_problem(arg: &str) -> Result<NonlinearProblem, String> {
    if Path::new(arg).is_file() {
        let text =
            std::fs::read_to_string(arg).map_err(|e| format!("cannot read {arg}: {e}"))?;
        let spec: ProblemSpec =
            serde_json::from_str(&text).map_err(|e| format!("bad problem spec {arg}: {e}"))?;
        spec.instantiate().map_err(|e| e.to_string())
    } else {
        lookup(arg).map_err(|e| e.to_string())
    }
}

fn parse_x0(text: &str, dim: usize) -> Result<Vector, String> {
    let comps = if let Some(v) = text.strip_prefix("fill:") {
        let c: f64 = v.trim().parse().map_err(|_| format!("bad fill value {v:?}"))?;
        vec![c; dim]
    } else {
        text.split(',')
            .map(|t| t.trim().parse::<f64>().map_err(|_| format!("bad component {t:?}")))
            .collect::<Result<Vec<f64>, String>>()?
    };
    if comps.len() != dim {
        return Err(format!(
            "start vector has {} components, the problem needs {dim}",
            comps.len()
        ));
    }
    if comps.iter().any(|c| !c.is_finite()) {
        return Err("start vector must be finite".into());
    }
    Ok(Vector::new(comps))
}

/// Shortest decimal that parses back to the same value.
fn dec(v: f64) -> String {
    format!("{v}")
}

// ---- solve ----

#[derive(Serialize, Deserialize)]
struct RecordOut {
    k: usize,
    x: Vec<f64>,
    step_norm: Option<f64>,
    error_norm: Option<f64>,
}

#[derive(Serialize, Deserialize)]
struct OpsOut {
    products: u64,
    quotients: u64,
    residual_evals: u64,
    jacobian_evals: u64,
    lu_factorizations: u64,
}

impl From<OpCount> for OpsOut {
    fn from(o: OpCount) -> Self {
        OpsOut {
            products: o.products,
            quotients: o.quotients,
            residual_evals: o.residual_evals,
            jacobian_evals: o.jacobian_evals,
            lu_factorizations: o.lu_factorizations,
        }
    }
}

#[derive(Serialize, Deserialize)]
struct SolveOutput {
    problem: String,
    method: MethodId,
    norm: String,
    tol: f64,
    max_iter: usize,
    status: SolveStatus,
    iterations: usize,
    coc_p_max: Option<f64>,
    records: Vec<RecordOut>,
    ops: OpsOut,
}

fn cmd_solve(a: SolveArgs) -> Result<i32, String> {
    let p = resolve_problem(&a.problem)?;
    let method: MethodId = a.method.parse()?;
    let norm: NormKind = a.norm.parse()?;
    if !(a.tol >= 0.0) {
        return Err(format!("tolerance must be nonnegative, got {}", a.tol));
    }
    let x0 = match &a.x0 {
        Some(text) => parse_x0(text, p.dim())?,
        None => p.default_start().clone(),
    };
    let cfg = SolverConfig {
        tol: a.tol,
        max_iter: a.max_iter,
        norm,
    };
    let t = solve(&p, method, &x0, &cfg);
    let p_max = coc_estimate(&t).ok().map(|e| e.p_max);
    match a.format {
        OutputFormat::Table => {
            println!(
                "problem {}, method {}, norm {}, tol {}",
                p.name(),
                method,
                norm.name(),
                dec(a.tol)
            );
            print_trace_table(&t, p_max);
        }
        OutputFormat::Csv => {
            print_trace_csv(&t);
            // summary goes to stderr so the csv stream stays clean
            eprintln!(
                "status {} iterations {} coc_p_max {}",
                t.status,
                t.iterations(),
                p_max.map(dec).unwrap_or_else(|| "n/a".into())
            );
        }
        OutputFormat::Json => {
            let out = SolveOutput {
                problem: p.name().to_string(),
                method,
                norm: norm.name().to_string(),
                tol: a.tol,
                max_iter: a.max_iter,
                status: t.status,
                iterations: t.iterations(),
                coc_p_max: p_max,
                records: t
                    .records
                    .iter()
                    .map(|r| RecordOut {
                        k: r.k,
                        x: r.x.as_slice().to_vec(),
                        step_norm: r.step_norm,
                        error_norm: r.error_norm,
                    })
                    .collect(),
                ops: t.ops.into(),
            };
            println!("{}", serde_json::to_string_pretty(&out).expect("serializable"));
        }
    }
    Ok(match t.status {
        SolveStatus::Converged => 0,
        SolveStatus::MaxIterReached => 2,
        SolveStatus::SingularJacobian => 3,
    })
}

fn print_trace_table(t: &SolveTrace, p_max: Option<f64>) {
    let dim = t.records[0].x.dim();
    let has_err = t.records[0].error_norm.is_some();
    let mut header = format!("{:>3}", "k");
    for j in 0..dim {
        let _ = write!(header, "  {:>26}", format!("x{}", j + 1));
    }
    let _ = write!(header, "  {:>26}", "||dx||");
    if has_err {
        let _ = write!(header, "  {:>26}", "||x-alpha||");
    }
    println!("{header}");
    for r in &t.records {
        let mut line = format!("{:>3}", r.k);
        for c in r.x.as_slice() {
            let _ = write!(line, "  {:>26}", dec(*c));
        }
        let _ = write!(line, "  {:>26}", r.step_norm.map(dec).unwrap_or_else(|| "-".into()));
        if has_err {
            let _ = write!(line, "  {:>26}", r.error_norm.map(dec).unwrap_or_else(|| "-".into()));
        }
        println!("{line}");
    }
    println!("status {} after {} iterations", t.status, t.iterations());
    println!(
        "coc p_max {}",
        p_max.map(dec).unwrap_or_else(|| "n/a".into())
    );
    let o = &t.ops;
    println!(
        "ops products {} quotients {} residuals {} jacobians {} lu {}",
        o.products, o.quotients, o.residual_evals, o.jacobian_evals, o.lu_factorizations
    );
}

fn print_trace_csv(t: &SolveTrace) {
    let dim = t.records[0].x.dim();
    let has_err = t.records[0].error_norm.is_some();
    let mut header = String::from("k");
    for j in 0..dim {
        let _ = write!(header, ",x{}", j + 1);
    }
    header.push_str(",step_norm");
    if has_err {
        header.push_str(",error_norm");
    }
    println!("{header}");
    for r in &t.records {
        let mut line = r.k.to_string();
        for c in r.x.as_slice() {
            let _ = write!(line, ",{}", dec(*c));
        }
        let _ = write!(line, ",{}", r.step_norm.map(dec).unwrap_or_default());
        if has_err {
            let _ = write!(line, ",{}", r.error_norm.map(dec).unwrap_or_default());
        }
        println!("{line}");
    }
}

// ---- efficiency ----

fn parse_range(text: &str) -> Result<(usize, usize), String> {
    let one = |t: &str| {
        t.trim()
            .parse::<usize>()
            .map_err(|_| format!("bad size {t:?}"))
    };
    let (lo, hi) = match text.split_once(':') {
        Some((a, b)) => (one(a)?, one(b)?),
        None => {
            let n = one(text)?;
            (n, n)
        }
    };
    if lo < 2 {
        return Err(format!("sizes start at 2, got {lo}"));
    }
    if hi < lo {
        return Err(format!("empty size range {lo}:{hi}"));
    }
    Ok((lo, hi))
}

fn cmd_efficiency(a: EfficiencyArgs) -> Result<i32, String> {
    let (lo, hi) = parse_range(&a.n)?;
    if !(a.mu0 > 0.0) || !(a.mu1 > 0.0) {
        return Err("evaluation weights mu0 and mu1 must be positive".into());
    }
    if !(a.l >= 1.0) {
        return Err(format!("quotient weight l must be at least 1, got {}", a.l));
    }
    if a.crossover {
        match crossover(lo..=hi, a.mu0, a.mu1, a.l) {
            Some(n) => println!("{n}"),
            None => println!("none"),
        }
        return Ok(0);
    }
    if a.methods.trim().is_empty() {
        return Err("method list is empty".into());
    }
    let methods = a
        .methods
        .split(',')
        .map(|t| t.trim().parse::<MethodId>())
        .collect::<Result<Vec<MethodId>, String>>()?;
    let rows = efficiency_sweep(&methods, lo..=hi, a.mu0, a.mu1, a.l).map_err(|e| e.to_string())?;
    match a.format {
        OutputFormat::Table => print_sweep_table(&rows),
        OutputFormat::Csv => print_sweep_csv(&rows),
        OutputFormat::Json => {
            println!("{}", serde_json::to_string_pretty(&rows).expect("serializable"));
        }
    }
    Ok(0)
}

fn print_sweep_table(rows: &[SweepRow]) {
    println!(
        "{:<9}  {:>4}  {:>12}  {:>22}  {:>22}  {:>22}",
        "method", "n", "C", "E", "R_vs_cordero5", "R_vs_cordero6"
    );
    for r in rows {
        println!(
            "{:<9}  {:>4}  {:>12}  {:>22}  {:>22}  {:>22}",
            r.method.name(),
            r.n,
            dec(r.cost_c),
            dec(r.index_e),
            dec(r.r_vs_cordero5),
            dec(r.r_vs_cordero6)
        );
    }
}

fn print_sweep_csv(rows: &[SweepRow]) {
    println!("method,n,mu0,mu1,l,C,E,R_vs_cordero5,R_vs_cordero6");
    for r in rows {
        println!(
            "{},{},{},{},{},{},{},{},{}",
            r.method.name(),
            r.n,
            dec(r.mu0),
            dec(r.mu1),
            dec(r.l),
            dec(r.cost_c),
            dec(r.index_e),
            dec(r.r_vs_cordero5),
            dec(r.r_vs_cordero6)
        );
    }
}

// ---- tables ----

fn cmd_tables() -> i32 {
    for name in ["problem1", "bvp7"] {
        let p = lookup(name).expect("registered problem");
        let t = solve(&p, MethodId::Pg6, p.default_start(), &SolverConfig::default());
        println!("== {name}, pg6, tol 1e-12, l2 norm ==");
        println!("x columns are computed iterates; norm columns are diagnostics");
        let p_max = coc_estimate(&t).ok().map(|e| e.p_max);
        print_trace_table(&t, p_max);
        println!();
    }
    0
}

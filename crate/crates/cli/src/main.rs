use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

use krichever_core::bilocal::Window;
use krichever_core::diffalg::{DiffPoly, TermRecord};
use krichever_core::field::parse_q;
use krichever_core::geodata::{self, KricheverReport};
use krichever_core::psdo::{self, IndexSet};
use krichever_core::skewkp;
use krichever_core::verify::{self, exit_code, CheckResult, VerifyOptions};
use krichever_core::{Error, ParamScalar, Q};

#[derive(Parser, Debug)]
#[command(
    name = "krichever",
    version,
    about = "Deformed KP hierarchy, Sato Grassmannian and Krichever subspace checks"
)]
struct Cli {
    /// Print machine-readable JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Seed for randomized checks.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Truncation order in z for the hierarchy.
    #[arg(long = "trunc-z", global = true, value_name = "N")]
    trunc_z: Option<i32>,
    /// Window: `I J` gives i ∈ [−I, ⌊I/3⌋], j ∈ [−1, J] for `krichever`,
    /// and z^[−I, I] for `sato`.
    #[arg(long, global = true, num_args = 2, value_names = ["I", "J"], allow_negative_numbers = true)]
    window: Option<Vec<i32>>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Hierarchy equations d/dt_n u_m, or the eliminated final equation.
    Kp(KpArgs),
    /// Pseudo-differential operators and the Sato Grassmannian.
    Sato {
        #[command(subcommand)]
        command: SatoCommand,
    },
    /// Checks on the Krichever subspaces of a line, a conic and a cubic.
    Krichever(KricheverArgs),
    /// Runs every acceptance check.
    Verify(VerifyArgs),
}

#[derive(Args, Debug)]
struct KpArgs {
    #[arg(long, default_value_t = 1)]
    n: u32,
    #[arg(long, default_value_t = 1)]
    mmax: u32,
    /// Eliminate u3 and u2 from the n = 2, 3 equations.
    #[arg(long = "final")]
    final_eq: bool,
    /// Substitute a rational value for the parameter a.
    #[arg(long)]
    a: Option<String>,
}

#[derive(Subcommand, Debug)]
enum SatoCommand {
    /// Coefficients a_{j,i} of the operator W with γ(W) = W(α, β).
    Gamma {
        #[arg(long, allow_negative_numbers = true)]
        alpha: String,
        #[arg(long, allow_negative_numbers = true)]
        beta: String,
        #[arg(long, default_value_t = psdo::DEFAULT_DEPTH)]
        depth: i32,
    },
    /// Sato's operator R for an index set, checked against R V^S = W0.
    ROp {
        /// Values σ(0), σ(−1), … separated by commas.
        #[arg(long, allow_hyphen_values = true)]
        sigma: String,
        /// Use the constants as printed instead of the corrected ones.
        #[arg(long)]
        printed: bool,
    },
    /// Least m, n with x^m W and W⁻¹xⁿ in E, for W with γ(W) = W(α, β).
    Quasireg {
        #[arg(long, allow_negative_numbers = true)]
        alpha: String,
        #[arg(long, allow_negative_numbers = true)]
        beta: String,
        #[arg(long, default_value_t = 3)]
        max: u32,
        #[arg(long, default_value_t = psdo::DEFAULT_DEPTH)]
        depth: i32,
    },
}

#[derive(clap::ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Check {
    Support,
    Chi,
    Stabilizer,
    H0,
}

#[derive(Args, Debug)]
struct KricheverArgs {
    /// line, quadric or cubic.
    example: String,
    #[arg(value_enum)]
    check: Check,
    /// Largest n for χ(W(n)).
    #[arg(long, default_value_t = 3)]
    nmax: i32,
    /// Random combinations for the stabilizer check.
    #[arg(long, default_value_t = 100)]
    samples: usize,
    /// Rows u^0..u^J of each series.
    #[arg(long = "trunc-j")]
    trunc_j: Option<i32>,
    /// t-order of each row.
    #[arg(long = "trunc-t")]
    trunc_t: Option<i32>,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// Randomized cases per property.
    #[arg(long, default_value_t = 100)]
    cases: usize,
    #[arg(long = "inject-fault", hide = true)]
    inject_fault: bool,
}

#[derive(Serialize, Deserialize)]
struct EquationRecord {
    lhs: String,
    text: String,
    rhs: Vec<TermRecord>,
}

#[derive(Serialize, Deserialize)]
struct KpOutput {
    equations: Vec<EquationRecord>,
}

#[derive(Serialize, Deserialize)]
struct GammaOutput {
    alpha: String,
    beta: String,
    operator: String,
    /// `[j, i, value]` for the coefficient of `x^j ∂^{−i}`.
    coefficients: Vec<(i32, i32, String)>,
}

#[derive(Serialize, Deserialize)]
struct ROpOutput {
    sigma: Vec<i64>,
    operator: String,
    window: (i32, i32),
    verified: bool,
}

#[derive(Serialize, Deserialize)]
struct QuasiregOutput {
    alpha: String,
    beta: String,
    m: Option<u32>,
    n: Option<u32>,
}

#[derive(Serialize, Deserialize)]
struct VerifyOutput {
    passed: usize,
    total: usize,
    results: Vec<CheckResult>,
}

/// Text or JSON output plus the exit code.
struct Outcome {
    text: String,
    code: u8,
}

impl Outcome {
    fn ok(text: String) -> Self {
        Outcome { text, code: 0 }
    }
}

fn render<T: Serialize>(json: bool, value: &T, text: String) -> String {
    if json {
        serde_json::to_string_pretty(value).expect("report serializes")
    } else {
        text
    }
}

fn scalar(s: &str, what: &str) -> Result<ParamScalar, Error> {
    parse_q(s)
        .map(ParamScalar::rational)
        .ok_or_else(|| Error::Config(format!("{what}: {s:?} is not a rational number")))
}

fn param_value(a: &Option<String>) -> Result<Option<Q>, Error> {
    a.as_deref()
        .map(|s| {
            parse_q(s).ok_or_else(|| Error::Config(format!("--a: {s:?} is not a rational number")))
        })
        .transpose()
}

fn record(lhs: &str, rhs: &DiffPoly) -> EquationRecord {
    EquationRecord {
        lhs: lhs.into(),
        text: format!("{lhs} = {rhs}"),
        rhs: rhs.to_records(),
    }
}

fn cmd_kp(cli: &Cli, args: &KpArgs) -> Result<Outcome, Error> {
    let value = param_value(&args.a)?;
    let subs = |p: &DiffPoly| match &value {
        Some(v) => p.subs_param(v),
        None => p.clone(),
    };
    let mut equations = Vec::new();
    if args.final_eq {
        let n = cli.trunc_z.unwrap_or(skewkp::FINAL_KP_TRUNCATION);
        let kp = skewkp::derive_final_kp_from(&skewkp::final_kp_inputs(n)?)?;
        let lhs = subs(&kp.intermediate.lhs).to_string();
        equations.push(record(&lhs, &subs(&kp.intermediate.rhs)));
        let inner = format!("({})_x", subs(&kp.final_eq.inner));
        equations.push(record(&inner, &subs(&kp.final_eq.rhs)));
    } else {
        if args.n == 0 || args.mmax == 0 {
            return Err(Error::Config("--n and --mmax must be positive".into()));
        }
        let n = cli.trunc_z.unwrap_or((args.mmax + args.n + 2) as i32);
        for e in skewkp::hierarchy(args.n, args.mmax, n)? {
            equations.push(record(&format!("d/dt{} u{}", e.n, e.m), &subs(&e.rhs)));
        }
    }
    let text = equations
        .iter()
        .map(|e| e.text.as_str())
        .collect::<Vec<_>>()
        .join("\n");
    Ok(Outcome::ok(render(cli.json, &KpOutput { equations }, text)))
}

fn sato_window(cli: &Cli) -> Result<(i32, i32), Error> {
    match &cli.window {
        Some(w) if w[0] > 0 => Ok((-w[0], w[0])),
        Some(w) => Err(Error::Config(format!("window {} must be positive", w[0]))),
        None => Ok((-12, 12)),
    }
}

fn cmd_sato(cli: &Cli, cmd: &SatoCommand) -> Result<Outcome, Error> {
    match cmd {
        SatoCommand::Gamma { alpha, beta, depth } => {
            let (al, be) = (scalar(alpha, "--alpha")?, scalar(beta, "--beta")?);
            let w = psdo::gamma_point(&al, &be, *depth)?;
            let mut coefficients = Vec::new();
            for i in 1..=2 {
                for j in -1..=2 {
                    if let Some(c) = w.a(j, i) {
                        coefficients.push((j, i, c.to_string()));
                    }
                }
            }
            let mut text = vec![format!("W = {w}")];
            text.extend(
                coefficients
                    .iter()
                    .map(|(j, i, c)| format!("a_{{{j},{i}}} = {c}")),
            );
            let out = GammaOutput {
                alpha: al.to_string(),
                beta: be.to_string(),
                operator: w.to_string(),
                coefficients,
            };
            Ok(Outcome::ok(render(cli.json, &out, text.join("\n"))))
        }
        SatoCommand::ROp { sigma, printed } => {
            let s = IndexSet::parse(sigma)?;
            let r = if *printed {
                psdo::r_operator_printed(&s)
            } else {
                psdo::r_operator(&s)
            };
            let (lo, hi) = sato_window(cli)?;
            let verified = psdo::r_verifies(&r, &s, lo, hi)?;
            let status = if verified { "verified" } else { "FAILED" };
            let text = format!("R = {r}\nR V^S = W0: {status} (window z^[{lo},{hi}])");
            let out = ROpOutput {
                sigma: s.values().to_vec(),
                operator: r.to_string(),
                window: (lo, hi),
                verified,
            };
            Ok(Outcome {
                text: render(cli.json, &out, text),
                code: if verified { 0 } else { 1 },
            })
        }
        SatoCommand::Quasireg {
            alpha,
            beta,
            max,
            depth,
        } => {
            let (al, be) = (scalar(alpha, "--alpha")?, scalar(beta, "--beta")?);
            let w = psdo::gamma_point(&al, &be, *depth)?;
            let found = psdo::quasiregular_check(&w, *max, *max, *depth)?;
            let text = match found {
                Some((m, n)) => format!("quasiregular: m = {m}, n = {n}"),
                None => format!("not quasiregular with m, n ≤ {max}"),
            };
            let out = QuasiregOutput {
                alpha: al.to_string(),
                beta: be.to_string(),
                m: found.map(|p| p.0),
                n: found.map(|p| p.1),
            };
            Ok(Outcome {
                text: render(cli.json, &out, text),
                code: if found.is_some() { 0 } else { 1 },
            })
        }
    }
}

fn krichever_window(cli: &Cli) -> Result<Window, Error> {
    match &cli.window {
        Some(w) if w[0] > 0 && w[1] >= -1 => Ok(Window::new(-w[0], w[0] / 3, -1, w[1])),
        Some(w) => Err(Error::Config(format!("window {} {} is empty", w[0], w[1]))),
        None => Ok(geodata::default_window()),
    }
}

fn monomials(ms: &[krichever_core::bilocal::Monomial2]) -> String {
    let parts: Vec<String> = ms.iter().map(|m| format!("({},{})", m.i, m.j)).collect();
    format!("{{{}}}", parts.join(","))
}

fn cmd_krichever(cli: &Cli, args: &KricheverArgs) -> Result<Outcome, Error> {
    if !geodata::EXAMPLES.contains(&args.example.as_str()) {
        return Err(Error::Config(format!(
            "unknown example {:?}; expected line, quadric or cubic",
            args.example
        )));
    }
    let (dj, dt) = geodata::default_precision(&args.example);
    let g = geodata::build(
        &args.example,
        args.trunc_j.unwrap_or(dj),
        args.trunc_t.unwrap_or(dt),
    )?;
    let w = krichever_window(cli)?;
    let window = format!(
        "i in [{}, {}], j in [{}, {}]",
        w.imin, w.imax, w.jmin, w.jmax
    );
    let mut report = KricheverReport::new(&g.name);
    let mut ok = true;
    let text = match args.check {
        Check::Support => {
            let r = geodata::verify_support(&g, w)?;
            report = report.with_support(&g, &r);
            ok = r.support_match;
            let mut t = format!(
                "{} support: {} ({window}); excluded {}",
                g.name,
                if ok { "match" } else { "MISMATCH" },
                monomials(&report.excluded)
            );
            if !ok {
                t.push_str(&format!(
                    "\nmissing {}\nunexpected {}",
                    monomials(&r.missing),
                    monomials(&r.unexpected)
                ));
            }
            t
        }
        Check::Chi => {
            let fit = geodata::chi_fit(&g, args.nmax)?;
            report = report.with_chi(&fit);
            report.window = Some(geodata::chi_window(&g, args.nmax, geodata::CHI_MARGIN));
            ok = fit.a == (1 - g.genus) as i64 && fit.b == g.slope as i64;
            let chi: Vec<String> = fit.chi.iter().map(|c| c.to_string()).collect();
            format!(
                "{} chi(W(n)), n = 0..{}: {}\na={} b={}",
                g.name,
                args.nmax,
                chi.join(", "),
                fit.a,
                fit.b
            )
        }
        Check::Stabilizer => {
            report.window = Some(w);
            let s = geodata::stabilizer_inequality_check(&g, w, args.samples, cli.seed)?;
            report.stabilizer_checked = Some(s.basis_checked + s.combinations_checked);
            format!(
                "{} stabilizer: nubar <= {}*nu on {} products and {} random combinations ({window})",
                g.name, s.slope, s.basis_checked, s.combinations_checked
            )
        }
        Check::H0 => {
            let hw = match &cli.window {
                Some(_) => Window::new(w.imin, w.imax, 0, w.jmax.max(0)),
                None => Window::new(-12, 4, 0, 1),
            };
            let h = geodata::h0_dim(&g, hw)?;
            report.window = Some(hw);
            report.h0 = Some(h);
            ok = h == 1;
            format!("{} h0 = {h}", g.name)
        }
    };
    Ok(Outcome {
        text: render(cli.json, &report, text),
        code: if ok { 0 } else { 1 },
    })
}

fn cmd_verify(cli: &Cli, args: &VerifyArgs) -> Result<Outcome, Error> {
    let results = verify::verify_all(VerifyOptions {
        seed: cli.seed,
        cases: args.cases,
        inject_fault: args.inject_fault,
    });
    let passed = results.iter().filter(|r| r.passed).count();
    let code = results
        .iter()
        .map(|r| r.code)
        .filter(|c| *c != 0)
        .min()
        .unwrap_or(0);
    let mut lines: Vec<String> = results
        .iter()
        .map(|r| {
            format!(
                "criterion {} ({}): {} - {}",
                r.id,
                r.name,
                if r.passed { "pass" } else { "FAIL" },
                r.detail
            )
        })
        .collect();
    lines.push(format!("{passed}/{} criteria passed", results.len()));
    let out = VerifyOutput {
        passed,
        total: results.len(),
        results,
    };
    Ok(Outcome {
        text: render(cli.json, &out, lines.join("\n")),
        code: code as u8,
    })
}

fn run(cli: &Cli) -> Result<Outcome, Error> {
    if let Some(n) = cli.trunc_z {
        if n <= 0 {
            return Err(Error::Config("--trunc-z must be positive".into()));
        }
    }
    match &cli.command {
        Command::Kp(a) => cmd_kp(cli, a),
        Command::Sato { command } => cmd_sato(cli, command),
        Command::Krichever(a) => cmd_krichever(cli, a),
        Command::Verify(a) => cmd_verify(cli, a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 3 } else { 0 });
        }
    };
    match run(&cli) {
        Ok(o) => {
            println!("{}", o.text);
            ExitCode::from(o.code)
        }
        Err(e) => {
            let code = exit_code(&e) as u8;
            if cli.json {
                let v = serde_json::json!({ "error": e.to_string(), "code": code });
                println!("{v}");
            } else {
                eprintln!("error: {e}");
            }
            ExitCode::from(code)
        }
    }
}

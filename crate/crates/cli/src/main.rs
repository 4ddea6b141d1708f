//! `selberg-heat`: command-line front end for the trace-formula library.

mod output;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use selberg_heat::checks::run_invariant_suite;
use selberg_heat::plancherel::PlancherelPolynomial;
use selberg_heat::quad::AdaptiveConfig;
use selberg_heat::rep_theory::{parse_coords, Dimension, GWeight, GroupKind, KWeight, MWeight};
use selberg_heat::series::TruncatedSeries;
use selberg_heat::stationary_phase::{evaluate_expansion, expand_log_integral, quadrature_oracle, OracleConfig};
use selberg_heat::trace_formula::{default_amplitude, geometric_expansion, geometric_side, ManifoldData, TprimeModel};
use selberg_heat::zeta_torsion::{torsion_from_spectra, FormData, ZetaConfig};

use output::{csv_number, json_number, json_numbers, normalize};

const DEFAULT_SP_ORDER: u32 = 4;
const DEFAULT_EXPAND_ORDER: usize = 6;
const VERSION: &str = concat!(
    env!("CARGO_PKG_VERSION"),
    " (default orders: stationary-phase N=4, expand N=6)"
);

#[derive(Debug, Parser)]
#[command(name = "selberg-heat", version = VERSION, about = "Geometric side of the Selberg trace formula, heat-trace expansions and analytic torsion")]
struct Cli {
    /// Write the result here instead of stdout.
    #[arg(short, long, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Plancherel polynomial P_σ as coefficients of z^0, z^2, ..., z^{2n}.
    Plancherel {
        #[arg(long)]
        dim: usize,
        /// M-weight k_2,...,k_{n+1}, e.g. `2,-1` or `1/2,1/2`.
        #[arg(long, allow_hyphen_values = true)]
        sigma: String,
        /// Normalization constant c(n) > 0.
        #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
        cn: f64,
        #[arg(long, value_enum, default_value_t = Kind::SO0)]
        kind: Kind,
    },
    /// Log-corrected stationary-phase expansion of ∫ e^{-λ f} g log‖x‖ dx.
    StationaryPhase {
        /// Phase series JSON.
        #[arg(long)]
        f: PathBuf,
        /// Amplitude series JSON.
        #[arg(long)]
        g: PathBuf,
        #[arg(long, default_value_t = DEFAULT_SP_ORDER)]
        order: u32,
        /// Compare with the quadrature oracle at these λ (repeatable).
        #[arg(long)]
        oracle: Vec<f64>,
        /// Radius of the oracle's integration ball.
        #[arg(long, default_value_t = 0.5)]
        epsilon: f64,
    },
    /// CSV of I, H, T, T′ and the total over a t-grid.
    Trace {
        #[arg(long)]
        manifold: PathBuf,
        /// K-weight ν, e.g. `0` or `1,1`.
        #[arg(long)]
        nu: String,
        /// Grid `a:b:steps` with `steps` equal intervals from a to b.
        #[arg(long)]
        t: String,
        /// Relative tolerance of the T′ quadrature.
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
    },
    /// Small-time expansion of I + C₁T + C₂T′ as JSON.
    Expand {
        #[arg(long)]
        manifold: PathBuf,
        #[arg(long)]
        nu: String,
        #[arg(long, default_value_t = DEFAULT_EXPAND_ORDER)]
        order: usize,
    },
    /// ζ_p(0), ζ_p′(0) and log T_X(τ) from per-form spectral data.
    Torsion {
        /// JSON array with one SpectralData object per form degree p = 1..d.
        #[arg(long)]
        spectral: PathBuf,
        /// G-weight τ, e.g. `1,0`.
        #[arg(long)]
        tau: String,
        #[arg(long)]
        dim: usize,
        #[arg(long, value_enum, default_value_t = Kind::SO0)]
        kind: Kind,
        /// Upper limit of the Mellin integrals.
        #[arg(long, default_value_t = 50.0)]
        t_max: f64,
    },
    /// Run the invariant suite and print a pass/fail table.
    Check {
        /// Print the table as JSON.
        #[arg(long)]
        json: bool,
    },
}

#[derive(Debug, Clone, Copy, clap::ValueEnum)]
enum Kind {
    #[value(name = "SO0")]
    SO0,
    #[value(name = "Spin")]
    Spin,
}

impl From<Kind> for GroupKind {
    fn from(k: Kind) -> Self {
        match k {
            Kind::SO0 => GroupKind::SO0,
            Kind::Spin => GroupKind::Spin,
        }
    }
}

/// Failure of a command: the message goes to stderr, the process exits 1.
#[derive(Debug)]
struct Failure(String);

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure(e.to_string())
    }
}

fn read(path: &Path, what: &str) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure(format!("cannot read {what} {}: {e}", path.display())))
}

fn parse_json<T: serde::de::DeserializeOwned>(text: &str, path: &Path) -> Result<T, Failure> {
    // syntax first, so a broken file reports where it breaks rather than a shape mismatch
    serde_json::from_str::<serde::de::IgnoredAny>(text)
        .map_err(|e| Failure(format!("malformed JSON in {}: {e}", path.display())))?;
    serde_json::from_str(text).map_err(|e| Failure(format!("invalid data in {}: {e}", path.display())))
}

fn load_manifold(path: &Path) -> Result<ManifoldData, Failure> {
    let text = read(path, "manifest")?;
    ManifoldData::from_json(&text).map_err(|e| Failure(format!("{}: {e}", path.display())))
}

fn parse_grid(text: &str) -> Result<Vec<f64>, Failure> {
    let parts: Vec<&str> = text.split(':').collect();
    let [a, b, steps] = parts[..] else {
        return Err(Failure(format!("grid must be a:b:steps, got {text:?}")));
    };
    let (a, b): (f64, f64) = (a.trim().parse()?, b.trim().parse()?);
    let steps: usize = steps.trim().parse()?;
    if steps == 0 {
        return Err(Failure("grid needs a positive step count".into()));
    }
    if !(a > 0.0 && b >= a && b.is_finite()) {
        return Err(Failure(format!("grid needs 0 < a <= b, got {a}:{b}")));
    }
    Ok((0..=steps).map(|i| if i == steps { b } else { a + (b - a) * i as f64 / steps as f64 }).collect())
}

fn plancherel(dim: usize, sigma: &str, cn: f64, kind: Kind) -> Result<String, Failure> {
    let dim = Dimension::from_d(dim, kind.into())?;
    let sigma = MWeight::new(&dim, parse_coords(sigma)?)?;
    let p = PlancherelPolynomial::build(&sigma, &dim, cn)?;
    let out = json!({"coeffs": json_numbers(&p.coeffs())?, "degree": p.degree()});
    Ok(out.to_string())
}

fn stationary_phase(f: &Path, g: &Path, order: u32, oracle: &[f64], epsilon: f64) -> Result<String, Failure> {
    let fs: TruncatedSeries<f64> = parse_json(&read(f, "series file")?, f)?;
    let gs: TruncatedSeries<f64> = parse_json(&read(g, "series file")?, g)?;
    let e = expand_log_integral(&fs, &gs, order)?;
    let mut out = normalize(serde_json::to_value(&e)?);
    if !oracle.is_empty() {
        let cfg = OracleConfig { epsilon, ..OracleConfig::default() };
        let f_eval = |x: &[f64]| fs.eval(x);
        let g_eval = |x: &[f64]| gs.eval(x);
        let mut rows = Vec::new();
        for &lambda in oracle {
            let o = quadrature_oracle(&f_eval, &g_eval, fs.m(), lambda, &cfg)?;
            let v = evaluate_expansion(&e, lambda)?;
            rows.push(json!({
                "lambda": json_number(lambda)?,
                "expansion": json_number(v)?,
                "oracle": json_number(o.value)?,
                "oracle_error": json_number(o.error)?,
                "residual": json_number(o.value - v)?,
            }));
        }
        out["oracle"] = Value::Array(rows);
    }
    Ok(out.to_string())
}

fn trace(manifold: &Path, nu: &str, grid: &str, tol: f64) -> Result<String, Failure> {
    let m = load_manifold(manifold)?;
    let nu = KWeight::new(&m.dim, parse_coords(nu)?)?;
    let ts = parse_grid(grid)?;
    let model = TprimeModel::default_for(&nu, &m.dim);
    let cfg = AdaptiveConfig { rel_tol: tol, ..AdaptiveConfig::default() };
    let mut csv = String::from("t,I,H,T,Tprime,total\n");
    for t in ts {
        let g = geometric_side(t, &m, &nu, &model, cfg)?;
        let cells = [g.t, g.identity, g.hyperbolic, g.parabolic_t, g.parabolic_tprime, g.total]
            .iter()
            .map(|&v| csv_number(v))
            .collect::<Result<Vec<_>, _>>()?;
        csv.push_str(&cells.join(","));
        csv.push('\n');
    }
    Ok(csv.trim_end().to_string())
}

fn expand(manifold: &Path, nu: &str, order: usize) -> Result<String, Failure> {
    let m = load_manifold(manifold)?;
    let nu = KWeight::new(&m.dim, parse_coords(nu)?)?;
    let amp = default_amplitude(&nu, &m.dim, order as u32)?;
    let e = geometric_expansion(&m, &nu, &amp, order)?;
    Ok(normalize(serde_json::to_value(&e)?).to_string())
}

fn torsion(spectral: &Path, tau: &str, dim: usize, kind: Kind, t_max: f64) -> Result<String, Failure> {
    let dim = Dimension::from_d(dim, kind.into())?;
    let tau = GWeight::new(&dim, parse_coords(tau)?)?;
    let forms: Vec<FormData> = parse_json(&read(spectral, "spectral data")?, spectral)?;
    let cfg = ZetaConfig { t_max, ..ZetaConfig::default() };
    let report = torsion_from_spectra(&forms, &tau, &dim, &cfg)?;
    Ok(normalize(serde_json::to_value(&report)?).to_string())
}

/// Returns the rendered table and whether every check passed.
fn check(as_json: bool) -> Result<(String, bool), Failure> {
    let rows = run_invariant_suite();
    let ok = rows.iter().all(|r| r.passed);
    if as_json {
        return Ok((serde_json::to_string(&rows)?, ok));
    }
    let width = rows.iter().map(|r| r.module.len() + r.name.chars().count() + 2).max().unwrap_or(0);
    let mut out = String::new();
    for r in &rows {
        let label = format!("{}: {}", r.module, r.name);
        let pad = width.saturating_sub(label.chars().count());
        out.push_str(&format!(
            "{} {label}{} {}\n",
            if r.passed { "PASS" } else { "FAIL" },
            " ".repeat(pad),
            r.detail
        ));
    }
    let passed = rows.iter().filter(|r| r.passed).count();
    out.push_str(&format!("{passed}/{} checks passed", rows.len()));
    Ok((out, ok))
}

fn run(cli: &Cli) -> Result<(String, bool), Failure> {
    let text = match &cli.command {
        Command::Plancherel { dim, sigma, cn, kind } => plancherel(*dim, sigma, *cn, *kind)?,
        Command::StationaryPhase { f, g, order, oracle, epsilon } => stationary_phase(f, g, *order, oracle, *epsilon)?,
        Command::Trace { manifold, nu, t, tol } => trace(manifold, nu, t, *tol)?,
        Command::Expand { manifold, nu, order } => expand(manifold, nu, *order)?,
        Command::Torsion { spectral, tau, dim, kind, t_max } => torsion(spectral, tau, *dim, *kind, *t_max)?,
        Command::Check { json } => return check(*json),
    };
    Ok((text, true))
}

fn emit(text: &str, path: Option<&Path>) -> Result<(), Failure> {
    match path {
        Some(p) => fs::write(p, format!("{text}\n")).map_err(|e| Failure(format!("cannot write {}: {e}", p.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            writeln!(stdout, "{text}")?;
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    // clap exits with status 2 on usage errors
    let cli = Cli::parse();
    let result = run(&cli).and_then(|(text, ok)| emit(&text, cli.output.as_deref()).map(|_| ok));
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn version_mentions_default_orders() {
        assert!(VERSION.contains(&format!("stationary-phase N={DEFAULT_SP_ORDER}")));
        assert!(VERSION.contains(&format!("expand N={DEFAULT_EXPAND_ORDER}")));
    }

    #[test]
    fn grids() {
        assert_eq!(parse_grid("0.1:0.3:2").unwrap(), vec![0.1, 0.2, 0.3]);
        assert_eq!(parse_grid("1:1:1").unwrap(), vec![1.0, 1.0]);
        assert!(parse_grid("0.1:0.3:0").is_err());
        assert!(parse_grid("0:1:4").is_err());
        assert!(parse_grid("0.1:0.3").is_err());
    }

    #[test]
    fn cli_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}

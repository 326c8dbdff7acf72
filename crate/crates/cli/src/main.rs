//! `indeftheta` command line tool. Run `indeftheta --help` for the spec file schema.

mod args;
mod report;

use std::path::Path;
use std::process::ExitCode;

use clap::Parser;
use num_complex::Complex64;
use serde_json::{json, Value};

use indeftheta::families::{eisenstein, hurwitz, zagier, ModularSubstitution};
use indeftheta::qform::classify_vector;
use indeftheta::qseries::{CycNum, EvalPoint};
use indeftheta::rat::{fmt_rat, parse_rat, to_f64, Rat};
use indeftheta::theta::{
    almost_holo_eval, holomorphic_expansion, limit_probe, nonholo_eval, verify_exact, verify_modularity, EvalOptions,
    Move, ThetaSpec,
};
use indeftheta::{io::spec_from_json, Error, VERSION};

use args::{Cli, Command, Example, Part, Verify};
use report::{Report, Table};

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure { code: 2, message: message.into() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::ConvergenceNotAchieved { .. } | Error::EnumerationBound { .. } => 3,
            _ => 2,
        };
        Failure { code, message: e.to_string() }
    }
}

type Outcome<T> = std::result::Result<T, Failure>;

/// Parses `x+yi` with rational or decimal parts: `i`, `2i`, `0.1+0.9i`, `-1/2+1/2i`.
fn parse_tau(s: &str) -> Outcome<EvalPoint> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || Failure::usage(format!("cannot read {s:?} as x+yi"));
    let num = |p: &str| -> Outcome<f64> {
        let p = p.strip_prefix('+').unwrap_or(p);
        parse_rat(p).map(|r| to_f64(&r)).or_else(|_| p.parse::<f64>().map_err(|_| bad()))
    };
    let (re, im) = match t.strip_suffix('i') {
        Some(body) => {
            let b = body.as_bytes();
            let split = body
                .char_indices()
                .rev()
                .find(|&(i, ch)| (ch == '+' || ch == '-') && i > 0 && !matches!(b[i - 1], b'e' | b'E'))
                .map(|(i, _)| i);
            let (r, m) = match split {
                Some(i) => (&body[..i], &body[i..]),
                None => ("", body),
            };
            let im = match m {
                "" | "+" => 1.0,
                "-" => -1.0,
                m => num(m)?,
            };
            (if r.is_empty() { 0.0 } else { num(r)? }, im)
        }
        None => (num(&t)?, 0.0),
    };
    EvalPoint::new(re, im).map_err(|e| Failure::usage(e.to_string()))
}

fn parse_list(s: &str) -> Outcome<Vec<Rat>> {
    s.split(',').map(|p| parse_rat(p).map_err(Failure::from)).collect()
}

fn parse_one(s: &str) -> Outcome<Rat> {
    parse_rat(s).map_err(Failure::from)
}

fn load_spec(path: &Path) -> Outcome<ThetaSpec> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
    spec_from_json(&text).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

fn complex(z: Complex64) -> Value {
    json!([z.re, z.im])
}

fn fmt_complex(z: Complex64) -> String {
    format!("{:.12e}{:+.12e}i", z.re, z.im)
}

/// Exact coefficient: rational, Gaussian `a+bi`, or a combination of powers of `z_m = e^{2 pi i/m}`.
fn fmt_cyc(c: &CycNum) -> String {
    if let Some(r) = c.as_rational() {
        return fmt_rat(&r);
    }
    let f = c.to_file();
    if f.order == 4 && f.coeffs.len() == 2 {
        let im = parse_rat(&f.coeffs[1]).expect("canonical coefficient");
        let sign = if im < Rat::from_integer(0.into()) { "" } else { "+" };
        return format!("{}{sign}{}i", f.coeffs[0], fmt_rat(&im));
    }
    let terms: Vec<String> = f
        .coeffs
        .iter()
        .enumerate()
        .filter(|(_, x)| x.as_str() != "0")
        .map(|(j, x)| match j {
            0 => x.clone(),
            1 => format!("{x}*z{}", f.order),
            _ => format!("{x}*z{}^{j}", f.order),
        })
        .collect();
    terms.join(" + ")
}

fn gamma(s: &str) -> Outcome<ModularSubstitution> {
    ModularSubstitution::parse(s).map_err(Failure::from)
}

fn order_int(order: &Rat) -> Outcome<i64> {
    let n = order.ceil().to_integer();
    i64::try_from(n).ok().filter(|n| *n > 0).ok_or_else(|| Failure::usage("order must be a positive integer"))
}

struct Run {
    tol: Option<f64>,
    order: Rat,
    pt: EvalPoint,
    config: Value,
}

impl Run {
    /// The requested tolerance, or the default of the command.
    fn tol(&mut self, default: f64) -> f64 {
        let t = self.tol.unwrap_or(default);
        self.config["tol"] = json!(t);
        t
    }
    fn report(&self, command: &str, params: Value, pass: Option<bool>, result: Value, table: Option<Table>) -> Report {
        let mut config = self.config.clone();
        config["params"] = params;
        Report { command: command.into(), version: VERSION, config, pass, result, table }
    }
}

fn execute(command: &Command, run: &mut Run) -> Outcome<Report> {
    match command {
        Command::Expand { spec } => {
            let s = load_spec(spec)?;
            let series = holomorphic_expansion(&s, &run.order)?;
            let mut table = Table::new(&["exponent", "coefficient", "value"]);
            for (r, c) in series.terms() {
                table.push(vec![fmt_rat(&r), fmt_cyc(c), fmt_complex(c.eval())]);
            }
            let result = serde_json::to_value(series.to_file()).expect("serializable");
            Ok(run.report("expand", json!({ "spec": spec }), None, result, Some(table)))
        }
        Command::Eval { spec, part } => {
            let s = load_spec(spec)?;
            let opts = EvalOptions::with_tol(run.tol(1e-10));
            let e = match part {
                Part::Completed => nonholo_eval(&s, &run.pt, &opts)?,
                Part::AlmostHolomorphic => almost_holo_eval(&s, &run.pt, &opts)?,
            };
            let result = json!({ "value": complex(e.value), "error": e.error, "weight": fmt_rat(&s.weight()) });
            Ok(run.report("eval", json!({ "spec": spec, "part": part }), None, result, None))
        }
        Command::Verify(v) => verify(v, run),
        Command::Example(e) => example(e, run),
    }
}

fn verify(v: &Verify, run: &mut Run) -> Outcome<Report> {
    match v {
        Verify::Modularity { spec, mv, exact } => {
            let s = load_spec(spec)?;
            let m = Move::parse(mv)?;
            let tol = run.tol(1e-8);
            let r = verify_modularity(&s, &m, &run.pt, tol)?;
            let ex = if *exact { Some(verify_exact(&s, &m, &run.order)?) } else { None };
            let pass = r.pass && ex != Some(false);
            let mut result = serde_json::to_value(&r).expect("serializable");
            result["exact"] = json!(ex);
            let params = json!({ "spec": spec, "move": m.name(), "exact": exact });
            Ok(run.report("verify modularity", params, Some(pass), result, None))
        }
        Verify::Limit { spec, direction, t } => {
            let s = load_spec(spec)?;
            let c3 = classify_vector(s.qf(), s.anchor(), &parse_list(direction)?)
                .ok_or_else(|| Failure::usage("direction is not in the cone"))?;
            let ts = parse_list(t)?;
            let tol = run.tol(1e-3);
            let r = limit_probe(s.qf(), s.anchor(), s.f(), s.c1(), s.c2(), &c3, s.chars(), &run.pt, &ts, tol)?;
            let mut table = Table::new(&["t", "error", "estimate"]);
            for i in 0..r.t.len() {
                table.push(vec![r.t[i].to_string(), format!("{:.6e}", r.errors[i]), format!("{:.3e}", r.error_estimates[i])]);
            }
            let params = json!({ "spec": spec, "direction": direction, "t": t });
            let pass = r.pass;
            Ok(run.report("verify limit", params, Some(pass), serde_json::to_value(&r).expect("serializable"), Some(table)))
        }
        Verify::Gamma04 { series, k, x, gamma: g } => {
            let kind: zagier::SeriesKind = series.parse()?;
            let xr = parse_one(x)?;
            let tol = run.tol(1e-5);
            let c = zagier::verify_sx_tx(kind, *k, &xr, &gamma(g)?, &run.pt, tol)?;
            let params = json!({ "series": series, "k": k, "x": fmt_rat(&xr), "gamma": g });
            Ok(run.report("verify gamma04", params, Some(c.pass), serde_json::to_value(&c).expect("serializable"), None))
        }
        Verify::Gamma02 { gamma: g, route } => {
            let r: hurwitz::Route = route.parse()?;
            let tol = run.tol(1e-6);
            let c = hurwitz::gamma0_2_check(&gamma(g)?, &run.pt, tol, r)?;
            let params = json!({ "gamma": g, "route": route });
            Ok(run.report("verify gamma02", params, Some(c.pass), serde_json::to_value(&c).expect("serializable"), None))
        }
    }
}

fn example(e: &Example, run: &mut Run) -> Outcome<Report> {
    let n = order_int(&run.order)?;
    match e {
        Example::Eisenstein { k } => {
            let g = eisenstein::g_series(*k, n)?;
            let mut table = Table::new(&["n", "coefficient"]);
            for m in 0..n {
                table.push(vec![m.to_string(), fmt_cyc(&g.coeff(&Rat::from_integer(m.into())))]);
            }
            let params = json!({ "k": k });
            if *k == 2 {
                let tol = run.tol(1e-4);
                let grid: Vec<Rat> = [10, 20, 40, 80].iter().map(|d| Rat::new(1.into(), (*d).into())).collect();
                let r = eisenstein::eisenstein_g2_orders(&run.pt, &grid, tol)?;
                let result = serde_json::to_value(&r).expect("serializable");
                Ok(run.report("example eisenstein", params, Some(r.pass), result, Some(table)))
            } else {
                let tol = run.tol(1e-5);
                let ts = [Rat::new(1.into(), 100.into()), Rat::new(1.into(), 200.into())];
                let r = eisenstein::eisenstein_limit_check(*k, &run.pt, &ts, tol)?;
                let result = serde_json::to_value(&r).expect("serializable");
                Ok(run.report("example eisenstein", params, Some(r.pass), result, Some(table)))
            }
        }
        Example::Zagier { series, k, x } => {
            let kind: zagier::SeriesKind = series.parse()?;
            let xr = parse_one(x)?;
            let mut table = match kind {
                zagier::SeriesKind::S => Table::new(&["D", "P_kD coefficients", "P_kD(x)"]),
                zagier::SeriesKind::T => Table::new(&["D", "F_kD(x)"]),
            };
            for d in 0..n {
                match kind {
                    zagier::SeriesKind::S => {
                        let p = zagier::p_kd(*k, d)?;
                        let cs: Vec<String> = p.coeffs().iter().map(fmt_rat).collect();
                        let cs = if cs.is_empty() { "0".to_string() } else { cs.join(" ") };
                        table.push(vec![d.to_string(), cs, fmt_rat(&p.eval(&xr))]);
                    }
                    zagier::SeriesKind::T => table.push(vec![d.to_string(), fmt_rat(&zagier::f_kd(*k, d, &xr)?)]),
                }
            }
            let tol = run.tol(1e-5);
            let c = zagier::verify_sx_tx(kind, *k, &xr, &ModularSubstitution::gamma_prime(), &run.pt, tol)?;
            let params = json!({ "series": series, "k": k, "x": fmt_rat(&xr), "gamma": "1,0;4,1" });
            Ok(run.report("example zagier", params, Some(c.pass), serde_json::to_value(&c).expect("serializable"), Some(table)))
        }
        Example::Hurwitz { route } => {
            let r: hurwitz::Route = route.parse()?;
            let tol = run.tol(1e-8);
            let check = hurwitz::humbert_check(n)?;
            let bridge = hurwitz::holomorphic_bridge(n)?;
            let s = hurwitz::humbert_series(n)?;
            let mut table = Table::new(&["n", "8n+7", "H(8n+7)", "coefficient"]);
            for m in 0..n {
                let c = fmt_cyc(&s.coeff(&Rat::from_integer(m.into())));
                table.push(vec![m.to_string(), (8 * m + 7).to_string(), fmt_rat(&hurwitz::hurwitz_h(8 * m + 7)), c]);
            }
            let a = hurwitz::f_maass_eval(&run.pt, tol * 1e-2, r)?;
            let other = match r {
                hurwitz::Route::Theta => hurwitz::Route::BetaFormula,
                hurwitz::Route::BetaFormula => hurwitz::Route::Theta,
            };
            let b = hurwitz::f_maass_eval(&run.pt, tol * 1e-2, other)?;
            let diff = (a.value - b.value).norm();
            let pass = check.pass && bridge && diff <= tol;
            let result = json!({
                "humbert": check,
                "bridge": bridge,
                "value": complex(a.value),
                "other_route": complex(b.value),
                "route_difference": diff,
            });
            Ok(run.report("example hurwitz", json!({ "route": route }), Some(pass), result, Some(table)))
        }
    }
}

fn threads() -> Outcome<Option<usize>> {
    match std::env::var("INDEFTHETA_THREADS") {
        Err(_) => Ok(None),
        Ok(v) => v
            .trim()
            .parse::<usize>()
            .ok()
            .filter(|n| *n > 0)
            .map(Some)
            .ok_or_else(|| Failure::usage(format!("INDEFTHETA_THREADS must be a positive integer, got {v:?}"))),
    }
}

fn main_inner(cli: &Cli) -> Outcome<Report> {
    let c = &cli.common;
    if let Some(t) = c.tol {
        if !(1e-12..=1e-2).contains(&t) {
            return Err(Failure::usage("--tol must lie in [1e-12, 1e-2]"));
        }
    }
    let order = parse_one(&c.order)?;
    if order <= Rat::from_integer(0.into()) {
        return Err(Failure::usage("--order must be positive"));
    }
    let pt = parse_tau(&c.tau)?;
    let config = json!({
        "tol": c.tol,
        "order": fmt_rat(&order),
        "tau": c.tau,
        "tau_value": [pt.x, pt.y],
        "seed": c.seed,
        "threads": threads()?,
        "format": c.format,
    });
    let mut run = Run { tol: c.tol, order, pt, config };
    execute(&cli.command, &mut run)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match main_inner(&cli) {
        Ok(report) => {
            let text = report.render(cli.common.format);
            match &cli.common.out {
                Some(p) => {
                    if let Err(e) = std::fs::write(p, &text) {
                        eprintln!("error: {}: {e}", p.display());
                        return ExitCode::from(2);
                    }
                }
                None => print!("{text}"),
            }
            ExitCode::from(if report.pass == Some(false) { 1 } else { 0 })
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

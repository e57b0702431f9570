//! `scenario` subcommand: oracle comparisons and plot-ready profiles.

use std::io::Write;

use relsplit::fields::FieldExt;
use relsplit::scenarios::{self, Order, Params, RotatingOracle, Scenario};

use crate::Failure;

/// Relative tolerance of the oracle comparisons.
pub const ORACLE_TOL: f64 = 1e-11;

/// Outcome of one scenario run.
pub struct Outcome {
    /// Human-readable summary lines.
    pub lines: Vec<String>,
    pub ok: bool,
}

fn status(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}

fn oracle_lines(sc: &Scenario, pts: &[[f64; 4]], out: &mut Outcome) {
    for o in &sc.oracles {
        let r = o.residual(pts);
        let ok = o.tags_match() && r <= ORACLE_TOL;
        out.ok &= ok;
        out.lines.push(format!("oracle {}: residual {r:.3e} tol {ORACLE_TOL:.0e} {}", o.name, status(ok)));
    }
}

fn run_err(e: relsplit::Error) -> Failure {
    Failure::Run(e.to_string())
}

/// Runs a scenario, writing its CSV table to `csv` and returning the summary.
pub fn run(name: &str, p: Params, order: Order, rows: usize, seed: u32, csv: impl Write) -> Result<Outcome, Failure> {
    let sc = scenarios::by_name(name, p).map_err(|e| Failure::Usage(e.to_string()))?;
    let pts = sc.sample(100, seed);
    let mut out = Outcome { lines: Vec::new(), ok: true };
    oracle_lines(&sc, &pts, &mut out);
    let mut w = csv::Writer::from_writer(csv);
    match name {
        "rotating" => rotating_profile(&sc, rows, &mut w, &mut out)?,
        "schiff" => schiff_profile(p, order, rows, seed, &mut w, &mut out)?,
        _ => {
            w.write_record(["oracle", "residual", "tolerance", "status"]).map_err(io)?;
            for o in &sc.oracles {
                let r = o.residual(&pts);
                let ok = o.tags_match() && r <= ORACLE_TOL;
                w.write_record([o.name.to_string(), format!("{r:e}"), format!("{ORACLE_TOL:e}"), status(ok).into()])
                    .map_err(io)?;
            }
        }
    }
    w.flush().map_err(|e| Failure::Run(e.to_string()))?;
    out.lines.push(format!("scenario {name}: {}", status(out.ok)));
    Ok(out)
}

fn io(e: csv::Error) -> Failure {
    Failure::Run(e.to_string())
}

/// Curvature `Ω_rφ` along the ray `t = φ = z = 0`, derived and closed form.
fn rotating_profile<W: Write>(
    sc: &Scenario,
    rows: usize,
    w: &mut csv::Writer<W>,
    out: &mut Outcome,
) -> Result<(), Failure> {
    let p = sc.params;
    let derived = sc.ms.s.curvature().map_err(run_err)?;
    let oracle = RotatingOracle { p }.curvature();
    let rc = p.c0 / p.omega;
    w.write_record(["r", "Omega_rphi_derived", "Omega_rphi_oracle", "abs_delta"]).map_err(io)?;
    let mut worst = 0.0f64;
    for k in 0..rows {
        let r = rc * (0.02 + 0.96 * k as f64 / (rows.max(2) - 1) as f64);
        let x = [0.0, r, 0.0, 0.0];
        let (a, b) = (derived.at(x).get(0b0110), oracle.at(x).get(0b0110));
        worst = worst.max((a - b).abs() / (1.0 + b.abs()));
        w.write_record([r, a, b, (a - b).abs()].map(|v| format!("{v:e}"))).map_err(io)?;
    }
    let ok = worst <= ORACLE_TOL;
    out.ok &= ok;
    out.lines.push(format!("profile Omega_rphi: max relative |delta| {worst:.3e} {}", status(ok)));
    Ok(())
}

/// Sphere-pair field magnitudes along the equatorial ray `z = 0` and the
/// check that every field vanishes outside the outer sphere.
fn schiff_profile<W: Write>(
    p: Params,
    order: Order,
    rows: usize,
    seed: u32,
    w: &mut csv::Writer<W>,
    out: &mut Outcome,
) -> Result<(), Failure> {
    let sol = scenarios::schiff_solution(p).map_err(run_err)?;
    let f = sol.fields(order).map_err(run_err)?;
    w.write_record(["r", "region", "e", "b", "d", "h"]).map_err(io)?;
    let mut outside = Vec::new();
    for k in 0..rows {
        let r = p.r * (0.02 + 0.98 * k as f64 / (rows.max(2) - 1) as f64);
        let x = [0.0, r, 0.0, 0.0];
        let region = if r < p.r1 {
            "inner"
        } else if r <= p.r2 {
            "between"
        } else {
            outside.push(x);
            "outside"
        };
        let mut rec = vec![format!("{r:e}"), region.to_string()];
        rec.extend([&f.e, &f.b, &f.d, &f.h].map(|a| format!("{:e}", a.at(x).max_abs())));
        w.write_record(rec).map_err(io)?;
    }
    let rot = scenarios::rotating(p).map_err(run_err)?;
    outside.extend(rot.smooth_points(400, seed).into_iter().filter(|x| x[1].hypot(x[3]) > p.r2 * 1.01));
    let m = sol.max_field(&f, &outside);
    let ok = !outside.is_empty() && m == 0.0;
    out.ok &= ok;
    out.lines.push(format!("{order:?} fields outside R2 ({} points): max |field| {m:e} {}", outside.len(), status(ok)));
    Ok(())
}

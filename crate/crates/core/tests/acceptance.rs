//! Acceptance run: every suite at 100 points, summarized as one PASS/FAIL
//! line per acceptance criterion.
//!
//! Criteria listed in [`KNOWN_DEVIATIONS`] are printed but not asserted; the
//! decisions ledger records why they cannot hold as stated. All their other
//! sub-checks are still asserted.

use std::collections::BTreeMap;

use relsplit::fields::FieldExt;
use relsplit::metric::tensor_max_abs;
use relsplit::scenarios::{self, Params};
use relsplit::verify::{self, Check, Expect, Settings, SUITES};

/// Criteria whose statement conflicts with the measured mathematics, with
/// the sub-check that stays red.
const KNOWN_DEVIATIONS: [(u8, &str); 2] = [
    (7, "lapse ratio equals γ (measured: 1/γ, reverse Cauchy-Schwarz gives ξ ≤ 1)"),
    (10, "affine variance rule for the time-nonlinear map (extra -Γφ''/φ'² term)"),
];

/// One measured sub-check of a criterion.
struct Item {
    label: String,
    residual: Option<f64>,
    tol: f64,
    pass: bool,
    deviation: bool,
    /// Negative test: the residual must exceed its tolerance.
    negative: bool,
}

impl Item {
    fn from_check(c: &Check) -> Self {
        Item {
            label: format!("{}/{}", c.suite, c.id),
            residual: c.residual,
            tol: c.tolerance,
            pass: c.passed(),
            deviation: false,
            negative: c.expect == Expect::Above,
        }
    }

    fn measured(label: &str, r: f64, tol: f64, deviation: bool) -> Self {
        Item { label: label.into(), residual: Some(r), tol, pass: r <= tol, deviation, negative: false }
    }
}

struct Criterion {
    n: u8,
    title: &'static str,
    /// Largest tolerance any contributing check may use.
    tol: f64,
    items: Vec<Item>,
}

fn select(checks: &BTreeMap<&str, Vec<Check>>, suite: &str, pred: impl Fn(&str) -> bool) -> Vec<Item> {
    checks[suite].iter().filter(|c| pred(&c.id)).map(Item::from_check).collect()
}

fn run_all(settings: &Settings) -> BTreeMap<&'static str, Vec<Check>> {
    std::thread::scope(|s| {
        let hs: Vec<_> = SUITES.iter().map(|n| (*n, s.spawn(move || verify::run(n, settings)))).collect();
        hs.into_iter().map(|(n, h)| (n, h.join().expect("suite thread").expect("suite runs"))).collect()
    })
}

/// Largest `|ξ - γ|/γ` on the natural rotating Cartesian splitting.
fn xi_minus_gamma(p: Params, n: usize) -> f64 {
    let sc = scenarios::schiff_natural(p).expect("scenario");
    let xi = sc.ms.xi();
    sc.sample(n, 3)
        .iter()
        .map(|x| {
            let g = p.beta_gamma(x[1].hypot(x[2]).into()).1.re();
            (xi.at(*x).get(0) - g).abs() / g
        })
        .fold(0.0, f64::max)
}

/// `χ` and `λ` of the rotating splitting, which vanish identically.
fn rotating_chi_lambda(p: Params, n: usize) -> (f64, f64) {
    let sc = scenarios::rotating(p).expect("scenario");
    let pts = sc.sample(n, 5);
    let chi = relsplit::fields::max_abs(&sc.ms.s.chi(), &pts);
    let lambda = tensor_max_abs(&sc.ms.expansion().expect("expansion"), &pts);
    (chi, lambda)
}

/// Runs without the libtest harness so the criterion lines always print.
fn main() {
    let start = std::time::Instant::now();
    let settings = Settings { seed: 0, points: 100, params: Params::default() };
    let checks = run_all(&settings);
    let p = settings.params;
    let (chi, lambda) = rotating_chi_lambda(p, 100);
    let nonlinear_variance = checks["transitions"]
        .iter()
        .find(|c| c.id == "nonlinear.variance-departs")
        .and_then(|c| c.residual)
        .unwrap_or(f64::INFINITY);

    let mut crit = vec![
        Criterion {
            n: 1,
            title: "splitting bijection, 200 forms per degree",
            tol: 1e-12,
            items: select(&checks, "splitting", |id| id.starts_with("bijection")),
        },
        Criterion {
            n: 2,
            title: "split exterior derivative vs direct route, three Γ",
            tol: 1e-10,
            items: select(&checks, "splitting", |id| id.starts_with("d-matrix.")),
        },
        Criterion {
            n: 3,
            title: "commutator, curvature and Bianchi identities",
            tol: 1e-10,
            items: select(&checks, "splitting", |id| {
                [
                    "commutator-d-dg",
                    "d-squared-curvature",
                    "bianchi-variance",
                    "bianchi-curvature",
                    "curvature-formula",
                    "split-of-d-omega",
                    "anholonomity",
                ]
                .contains(&id)
            }),
        },
        Criterion {
            n: 4,
            title: "rotating observer closed forms",
            tol: 1e-11,
            items: {
                let mut v = select(&checks, "scenarios", |id| id.starts_with("rotating.oracle."));
                v.push(Item::measured("rotating χ = 0", chi, 1e-12, false));
                v.push(Item::measured("rotating λ = 0", lambda, 1e-12, false));
                v
            },
        },
        Criterion { n: 5, title: "kinematic relations", tol: 1e-10, items: select(&checks, "kinematics", |_| true) },
        Criterion {
            n: 6,
            title: "regular and nonregular metric operators",
            tol: 1e-10,
            items: select(&checks, "metric", |_| true),
        },
        Criterion {
            n: 7,
            title: "natural splitting of the rotating Cartesian chart",
            tol: 1e-9,
            items: {
                let mut v = select(&checks, "scenarios", |id| id.starts_with("schiff."));
                v.push(Item::measured("lapse ratio ξ = γ", xi_minus_gamma(p, 100), 1e-9, true));
                v
            },
        },
        Criterion {
            n: 8,
            title: "sphere-pair exact solution",
            tol: 1e-9,
            items: select(&checks, "scenarios", |id| id.starts_with("sphere-pair.")),
        },
        Criterion {
            n: 9,
            title: "energy-momentum, body force, Hodge commutator, proxy balance",
            tol: 1e-9,
            items: select(&checks, "em", |id| {
                id == "energy-momentum.matrix"
                    || id.starts_with("body-force.")
                    || id == "hodge-commutator"
                    || id.starts_with("proxy-")
                    || id.starts_with("balance.")
            }),
        },
        Criterion {
            n: 10,
            title: "changes of fiber chart",
            tol: 1e-10,
            items: {
                let mut v = select(&checks, "transitions", |_| true);
                v.push(Item::measured("nonlinear map obeys the affine variance rule", nonlinear_variance, 1e-10, true));
                v
            },
        },
        Criterion {
            n: 11,
            title: "dimensional audit and injected mismatches",
            tol: 0.0,
            items: select(&checks, "dims", |_| true),
        },
        Criterion {
            n: 12,
            title: "premetric classification flags and implications",
            tol: 0.0,
            items: {
                let mut v = select(&checks, "splitting", |id| id.starts_with("classification."));
                v.extend(select(&checks, "scenarios", |id| id.ends_with(".flags")));
                v
            },
        },
    ];

    let mut unexpected = Vec::new();
    for c in &mut crit {
        assert!(!c.items.is_empty(), "criterion {} has no checks", c.n);
        let deviation = KNOWN_DEVIATIONS.iter().find(|d| d.0 == c.n);
        // Every positive check must be at least as strict as the criterion.
        for it in c.items.iter_mut().filter(|i| !i.negative && i.tol > c.tol) {
            it.pass = false;
        }
        let pass = c.items.iter().all(|i| i.pass);
        let worst =
            c.items.iter().filter(|i| !i.deviation && !i.negative).filter_map(|i| i.residual).fold(0.0, f64::max);
        println!(
            "criterion {:>2}: {} {} ({} checks, worst residual {worst:.2e}, tolerance {:.0e})",
            c.n,
            if pass { "PASS" } else { "FAIL" },
            c.title,
            c.items.len(),
            c.tol
        );
        for it in c.items.iter().filter(|i| !i.pass) {
            println!("    failing: {} residual {:?} tolerance {:e}", it.label, it.residual, it.tol);
        }
        if let Some(d) = deviation {
            println!("    known deviation: {}", d.1);
        }
        let red: Vec<_> = c
            .items
            .iter()
            .filter(|i| !i.pass && !(deviation.is_some() && i.deviation))
            .map(|i| i.label.clone())
            .collect();
        if !red.is_empty() {
            unexpected.push(format!("criterion {}: {red:?}", c.n));
        }
        // Known deviations must stay visible rather than be silently fixed by a
        // looser check.
        if deviation.is_some() {
            assert!(c.items.iter().any(|i| i.deviation), "criterion {} lost its deviation probe", c.n);
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    println!("acceptance wall time {elapsed:.1} s");
    assert!(unexpected.is_empty(), "unexpected failures: {unexpected:#?}");
    assert!(elapsed < 60.0, "acceptance took {elapsed:.1} s");
    let stray: Vec<_> =
        checks.values().flatten().filter(|c| !c.passed()).map(|c| format!("{}/{}", c.suite, c.id)).collect();
    assert!(stray.is_empty(), "suite checks failed: {stray:?}");
}

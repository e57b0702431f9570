//! Structured verification report.

use relsplit::verify::{self, Check, Expect};
use serde::Serialize;

use crate::config::VerifyConfig;
use crate::Failure;

/// One check as written to the report.
#[derive(Debug, Serialize)]
pub struct Record {
    pub suite: String,
    pub id: String,
    pub anchor: String,
    pub residual: Option<f64>,
    pub tolerance: f64,
    pub expect: Expect,
    pub status: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub wall_ms: f64,
}

impl From<Check> for Record {
    fn from(c: Check) -> Self {
        let status = if c.passed() { "PASS" } else { "FAIL" };
        Record {
            suite: c.suite,
            id: c.id,
            anchor: c.anchor,
            residual: c.residual,
            tolerance: c.tolerance,
            expect: c.expect,
            status,
            error: c.error,
            wall_ms: c.wall_ms,
        }
    }
}

/// Report of a `verify` run. The status is `FAIL` iff any record fails.
#[derive(Debug, Serialize)]
pub struct Report {
    pub status: &'static str,
    pub seed: u64,
    pub points: usize,
    pub suites: Vec<String>,
    pub passed: usize,
    pub failed: usize,
    pub checks: Vec<Record>,
}

impl Report {
    pub fn ok(&self) -> bool {
        self.failed == 0
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Runs the configured suites in parallel and assembles the report in suite
/// order.
pub fn verify(cfg: &VerifyConfig) -> Result<Report, Failure> {
    let results: Vec<_> = std::thread::scope(|scope| {
        let handles: Vec<_> = cfg.suites.iter().map(|s| scope.spawn(move || verify::run(s, &cfg.settings))).collect();
        handles.into_iter().map(|h| h.join().expect("suite thread panicked")).collect()
    });
    let mut checks = Vec::new();
    for (suite, res) in cfg.suites.iter().zip(results) {
        let mut list = res.map_err(|e| Failure::Usage(e.to_string()))?;
        if let Some(&t) = cfg.tolerances.get(suite) {
            for c in list.iter_mut().filter(|c| c.expect == Expect::Below && c.tolerance > 0.0) {
                c.tolerance = t;
            }
        }
        checks.extend(list.into_iter().map(Record::from));
    }
    let failed = checks.iter().filter(|c| c.status == "FAIL").count();
    Ok(Report {
        status: if failed == 0 { "PASS" } else { "FAIL" },
        seed: cfg.settings.seed,
        points: cfg.settings.points,
        suites: cfg.suites.clone(),
        passed: checks.len() - failed,
        failed,
        checks,
    })
}

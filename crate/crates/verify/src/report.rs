use std::io::{self, Write};

use serde::{Deserialize, Serialize};

/// One evaluated identity. `pass` holds exactly when `residual <= tol`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub suite: String,
    pub check_id: String,
    /// Slug of the identity, documented in `docs/identities.md`
    pub anchor: String,
    /// `key=value` pairs joined by `;`
    pub parameters: String,
    pub residual: f64,
    pub tol: f64,
    pub pass: bool,
    pub wall_time_ms: f64,
}

impl CheckRecord {
    /// Non-finite residuals are stored as `f64::MAX` so every format can carry them.
    pub fn new(
        suite: &str,
        check_id: impl Into<String>,
        anchor: &str,
        parameters: impl Into<String>,
        residual: f64,
        tol: f64,
        wall_time_ms: f64,
    ) -> Self {
        let residual = if residual.is_finite() { residual } else { f64::MAX };
        Self {
            suite: suite.to_string(),
            check_id: check_id.into(),
            anchor: anchor.to_string(),
            parameters: parameters.into(),
            residual,
            tol,
            pass: residual <= tol,
            wall_time_ms,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Meta {
    pub seed: u64,
    pub version: String,
    /// Unix seconds
    pub started_at: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub meta: Meta,
    pub records: Vec<CheckRecord>,
    pub summary: Summary,
}

impl Report {
    pub fn new(seed: u64, started_at: u64, records: Vec<CheckRecord>) -> Self {
        let passed = records.iter().filter(|r| r.pass).count();
        Self {
            meta: Meta {
                seed,
                version: env!("CARGO_PKG_VERSION").to_string(),
                started_at,
            },
            summary: Summary {
                total: records.len(),
                passed,
                failed: records.len() - passed,
            },
            records,
        }
    }

    pub fn exit_code(&self) -> i32 {
        if self.summary.failed == 0 {
            0
        } else {
            1
        }
    }

    /// Copy with the timing fields zeroed, for determinism comparisons.
    pub fn masked(&self) -> Self {
        let mut r = self.clone();
        r.meta.started_at = 0;
        for rec in &mut r.records {
            rec.wall_time_ms = 0.0;
        }
        r
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn write_json<W: Write>(&self, mut w: W) -> io::Result<()> {
        w.write_all(self.to_json().as_bytes())?;
        w.write_all(b"\n")
    }

    /// Records only, one row each, columns in field order.
    pub fn write_csv<W: Write>(&self, w: W) -> io::Result<()> {
        let mut out = csv::Writer::from_writer(w);
        for r in &self.records {
            out.serialize(r).map_err(io::Error::other)?;
        }
        out.flush()
    }
}

pub fn read_csv<R: io::Read>(r: R) -> Result<Vec<CheckRecord>, csv::Error> {
    csv::Reader::from_reader(r).deserialize().collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rec(residual: f64, tol: f64) -> CheckRecord {
        CheckRecord::new("twist", "n2_even", "twist-even", "modes=2", residual, tol, 0.5)
    }

    #[test]
    fn summary_and_exit_code() {
        let one = Report::new(7, 1, vec![rec(1e-14, 1e-12)]);
        assert_eq!(one.summary, Summary { total: 1, passed: 1, failed: 0 });
        assert_eq!(one.exit_code(), 0);
        let mixed = Report::new(7, 1, vec![rec(1e-14, 1e-12), rec(1e-3, 1e-12)]);
        assert_eq!(mixed.summary.failed, 1);
        assert_eq!(mixed.exit_code(), 1);
    }

    #[test]
    fn pass_is_residual_within_tol() {
        assert!(rec(0.0, 0.0).pass);
        assert!(!rec(f64::NAN, 1.0).pass);
        assert!(!rec(f64::INFINITY, 1.0).pass);
        assert_eq!(rec(f64::INFINITY, 1.0).residual, f64::MAX);
    }

    #[test]
    fn csv_round_trip() {
        let report = Report::new(
            3,
            0,
            vec![
                rec(1.234_567_890_123e-13, 1e-12),
                CheckRecord::new("x", "a,b", "y", "k=1;t=-0.5", 0.1 + 0.2, 0.0, 12.25),
            ],
        );
        let mut buf = Vec::new();
        report.write_csv(&mut buf).unwrap();
        let header = String::from_utf8(buf.clone()).unwrap();
        assert!(header.starts_with("suite,check_id,anchor,parameters,residual,tol,pass,wall_time_ms"));
        assert_eq!(read_csv(buf.as_slice()).unwrap(), report.records);
    }

    #[test]
    fn json_round_trip_and_mask() {
        let report = Report::new(3, 99, vec![rec(1e-15, 1e-12)]);
        let back: Report = serde_json::from_str(&report.to_json()).unwrap();
        assert_eq!(back, report);
        let masked = report.masked();
        assert_eq!(masked.meta.started_at, 0);
        assert_eq!(masked.records[0].wall_time_ms, 0.0);
    }
}

//! Report document: the aggregated outcome of a verification or search
//! run, serialized as JSON with every float written at 17 significant
//! digits so witnesses round-trip losslessly.

use std::io;

use serde::{Deserialize, Serialize};

use radlab_core::catalogue::{CaseInputs, CaseParams, OptBudget};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Report {
    pub tool_version: String,
    pub master_seed: u64,
    pub cases: Vec<CaseReport>,
    pub wall_time_seconds: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CaseReport {
    pub case_id: String,
    /// Random instances evaluated (each swept over its parameter grid).
    pub trials: usize,
    /// Trials with at least one violated evaluation.
    pub violations: usize,
    /// Trials with an inconclusive (never violated) evaluation.
    pub inconclusive: usize,
    /// Smallest slack seen across every evaluation.
    pub min_slack: f64,
    /// Largest lhs/rhs ratio seen (binding side for two-sided cases).
    pub max_ratio: f64,
    /// The evaluation attaining `min_slack`, with everything needed to
    /// replay it.
    pub worst: Option<WorstWitness>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WorstWitness {
    pub trial: usize,
    pub lhs: f64,
    pub rhs: f64,
    pub mid: Option<f64>,
    pub slack: f64,
    pub status: String,
    pub params: CaseParams,
    pub budget: OptBudget,
    pub inputs: CaseInputs,
}

struct SciFormatter;

impl serde_json::ser::Formatter for SciFormatter {
    fn write_f64<W>(&mut self, writer: &mut W, value: f64) -> io::Result<()>
    where
        W: ?Sized + io::Write,
    {
        // 17 significant digits: lossless for f64 and still a JSON number.
        write!(writer, "{:.16e}", value)
    }
}

/// Serialize with 17-significant-digit floats.
pub fn to_json(report: &Report) -> String {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, SciFormatter);
    report.serialize(&mut ser).expect("report serialization");
    String::from_utf8(out).expect("reports are UTF-8")
}

/// Parse a report document.
pub fn from_json(text: &str) -> Result<Report, serde_json::Error> {
    serde_json::from_str(text)
}

#[cfg(test)]
mod tests {
    use super::*;
    use radlab_core::catalogue::CaseParams;

    #[test]
    fn floats_round_trip_bit_for_bit() {
        let report = Report {
            tool_version: "0.0.0".into(),
            master_seed: 42,
            cases: vec![CaseReport {
                case_id: "I3".into(),
                trials: 10,
                violations: 0,
                inconclusive: 0,
                min_slack: 0.1 + 0.2,
                max_ratio: 2.0 / 3.0,
                worst: Some(WorstWitness {
                    trial: 3,
                    lhs: 1.0 / 7.0,
                    rhs: core::f64::consts::PI,
                    mid: None,
                    slack: core::f64::consts::PI - 1.0 / 7.0,
                    status: "holds".into(),
                    params: CaseParams::default().with_p(3.0),
                    budget: Default::default(),
                    inputs: CaseInputs::Scalars { a: 0.1, b: 1e-300 },
                }),
            }],
            wall_time_seconds: 1.25,
        };
        let text = to_json(&report);
        assert!(text.contains("e0") || text.contains("e-"));
        let back = from_json(&text).unwrap();
        assert_eq!(back.cases[0].min_slack.to_bits(), (0.1f64 + 0.2).to_bits());
        assert_eq!(
            back.cases[0].max_ratio.to_bits(),
            (2.0f64 / 3.0).to_bits()
        );
        match &back.cases[0].worst.as_ref().unwrap().inputs {
            CaseInputs::Scalars { a, b } => {
                assert_eq!(a.to_bits(), (0.1f64).to_bits());
                assert_eq!(b.to_bits(), (1e-300f64).to_bits());
            }
            _ => panic!("wrong inputs variant"),
        }
    }
}

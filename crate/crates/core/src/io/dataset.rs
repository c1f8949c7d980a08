//! Delimited subject-level input: one row per subject with columns
//! `time`, `status`, `arm`, `stratum` (any order, case-insensitive, extra
//! columns ignored). Comma or tab separated, detected from the header.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::stratified::StratumCell;
use crate::survival::{Arm, Observation, StratumId, SubjectRecord};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Dataset {
    pub records: Vec<SubjectRecord>,
    /// Labels in order of first appearance; `StratumId(k)` indexes this list.
    pub stratum_labels: Vec<String>,
    /// `[control, treatment]` labels as they appear in the file.
    pub arm_labels: [String; 2],
    /// Observations per `[arm][stratum]`.
    #[serde(skip)]
    cells: [Vec<Vec<Observation>>; 2],
}

const COLUMNS: [&str; 4] = ["time", "status", "arm", "stratum"];

fn parse_err(line: u64, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

/// Parse and validate a dataset; `control_label` names the arm coded as 0.
pub fn parse_dataset(text: &str, control_label: &str) -> Result<Dataset> {
    let header_line = text
        .lines()
        .next()
        .ok_or_else(|| parse_err(1, "missing header row"))?;
    let delimiter = if header_line.contains('\t') {
        b'\t'
    } else {
        b','
    };

    let mut reader = csv::ReaderBuilder::new()
        .delimiter(delimiter)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());

    let headers = reader.headers().map_err(|e| csv_err(&e, 1))?.clone();
    let mut index = [0usize; 4];
    for (slot, name) in index.iter_mut().zip(COLUMNS) {
        *slot = headers
            .iter()
            .position(|h| h.eq_ignore_ascii_case(name))
            .ok_or_else(|| parse_err(1, format!("missing column {name:?}")))?;
    }

    struct Row {
        time: f64,
        event: bool,
        arm: String,
        stratum: String,
    }
    let mut rows = Vec::new();
    for result in reader.records() {
        let record = result.map_err(|e| csv_err(&e, 0))?;
        let line = record.position().map_or(0, |p| p.line());
        let field = |i: usize| -> Result<&str> {
            let v = record.get(index[i]).unwrap_or("");
            if v.is_empty() {
                Err(parse_err(line, format!("empty {} value", COLUMNS[i])))
            } else {
                Ok(v)
            }
        };
        let raw_time = field(0)?;
        let time: f64 = raw_time
            .parse()
            .map_err(|_| parse_err(line, format!("time {raw_time:?} is not a number")))?;
        if !time.is_finite() || time < 0.0 {
            return Err(parse_err(
                line,
                format!("time {raw_time:?} must be finite and non-negative"),
            ));
        }
        let event = match field(1)? {
            "0" => false,
            "1" => true,
            other => return Err(parse_err(line, format!("status {other:?} must be 0 or 1"))),
        };
        rows.push(Row {
            time,
            event,
            arm: field(2)?.to_string(),
            stratum: field(3)?.to_string(),
        });
    }
    if rows.is_empty() {
        return Err(parse_err(2, "no data rows"));
    }

    let mut arm_seen: Vec<String> = Vec::new();
    let mut stratum_labels: Vec<String> = Vec::new();
    for r in &rows {
        if !arm_seen.contains(&r.arm) {
            arm_seen.push(r.arm.clone());
        }
        if !stratum_labels.contains(&r.stratum) {
            stratum_labels.push(r.stratum.clone());
        }
    }
    if arm_seen.len() != 2 {
        return Err(Error::InvalidInput(format!(
            "expected exactly 2 arms, found {}: {arm_seen:?}",
            arm_seen.len()
        )));
    }
    let Some(control_at) = arm_seen.iter().position(|a| a == control_label) else {
        return Err(Error::InvalidInput(format!(
            "control label {control_label:?} not among arms {arm_seen:?}"
        )));
    };
    let treatment_label = arm_seen[1 - control_at].clone();

    let records = rows
        .iter()
        .map(|r| SubjectRecord {
            time: r.time,
            event: r.event,
            arm: if r.arm == control_label {
                Arm::Control
            } else {
                Arm::Treatment
            },
            stratum: StratumId(
                stratum_labels
                    .iter()
                    .position(|s| *s == r.stratum)
                    .expect("label registered"),
            ),
        })
        .collect();

    Dataset::new(
        records,
        stratum_labels,
        [control_label.to_string(), treatment_label],
    )
}

fn csv_err(e: &csv::Error, fallback_line: u64) -> Error {
    let line = e.position().map_or(fallback_line, |p| p.line());
    parse_err(line, e.to_string())
}

impl Dataset {
    /// Build from records; every `(arm, stratum)` cell must be populated.
    pub fn new(
        records: Vec<SubjectRecord>,
        stratum_labels: Vec<String>,
        arm_labels: [String; 2],
    ) -> Result<Self> {
        let k = stratum_labels.len();
        let mut cells = [vec![Vec::new(); k], vec![Vec::new(); k]];
        for r in &records {
            if r.stratum.0 >= k {
                return Err(Error::InvalidInput(format!(
                    "stratum index {} out of range",
                    r.stratum.0
                )));
            }
            cells[r.arm.index()][r.stratum.0].push(r.observation());
        }
        for (s, label) in stratum_labels.iter().enumerate() {
            for arm in Arm::BOTH {
                if cells[arm.index()][s].is_empty() {
                    return Err(Error::MissingStratumArm {
                        stratum: label.clone(),
                        arm: arm_labels[arm.index()].clone(),
                    });
                }
            }
        }
        Ok(Self {
            records,
            stratum_labels,
            arm_labels,
            cells,
        })
    }

    pub fn strata(&self) -> usize {
        self.stratum_labels.len()
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn sample(&self, arm: Arm, stratum: usize) -> &[Observation] {
        &self.cells[arm.index()][stratum]
    }

    pub fn arm_samples(&self, arm: Arm) -> Vec<&[Observation]> {
        self.cells[arm.index()].iter().map(Vec::as_slice).collect()
    }

    pub fn stratum_cells(&self) -> Vec<StratumCell<'_>> {
        self.stratum_labels
            .iter()
            .enumerate()
            .map(|(k, label)| StratumCell {
                label,
                control: &self.cells[0][k],
                treatment: &self.cells[1][k],
            })
            .collect()
    }

    /// Total subjects per stratum across both arms.
    pub fn stratum_sizes(&self) -> Vec<usize> {
        (0..self.strata())
            .map(|k| self.cells[0][k].len() + self.cells[1][k].len())
            .collect()
    }

    /// Comma-separated rendering accepted by [`parse_dataset`].
    pub fn to_csv(&self) -> String {
        let mut out = String::from("time,status,arm,stratum\n");
        for r in &self.records {
            out.push_str(&format!(
                "{},{},{},{}\n",
                r.time,
                r.event as u8,
                self.arm_labels[r.arm.index()],
                self.stratum_labels[r.stratum.0]
            ));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_file() {
        let text = "time,status,arm,stratum\n3.5,1,placebo,all\n4,0,drug,all\n1.2,1,drug,all\n7,1,placebo,all\n";
        let d = parse_dataset(text, "placebo").unwrap();
        assert_eq!(d.strata(), 1);
        assert_eq!(d.len(), 4);
        assert_eq!(d.arm_labels, ["placebo".to_string(), "drug".to_string()]);
        assert_eq!(d.sample(Arm::Control, 0).len(), 2);
        assert_eq!(d.records[1].arm, Arm::Treatment);
    }

    #[test]
    fn tab_delimited_and_case_insensitive_header() {
        let text = "ID\tTime\tStatus\tArm\tStratum\n1\t2.0\t1\ta\tx\n2\t3.0\t0\tb\tx\n";
        let d = parse_dataset(text, "b").unwrap();
        assert_eq!(d.records[0].arm, Arm::Treatment);
        assert_eq!(d.records[1].time, 3.0);
    }

    #[test]
    fn bad_status_reports_line() {
        let mut text = String::from("time,status,arm,stratum\n");
        for i in 0..4 {
            text.push_str(&format!("{i}.5,1,a,s\n"));
        }
        text.push_str("2,1,b,s\n");
        text.push_str("3,2,b,s\n"); // line 7
        assert_eq!(
            parse_dataset(&text, "a").unwrap_err(),
            Error::Parse {
                line: 7,
                message: "status \"2\" must be 0 or 1".into()
            }
        );
    }

    #[test]
    fn validation_errors() {
        let missing = "time,status,arm\n1,1,a\n";
        assert!(matches!(
            parse_dataset(missing, "a"),
            Err(Error::Parse { line: 1, .. })
        ));
        let negative = "time,status,arm,stratum\n1,1,a,s\n-2,1,b,s\n";
        assert!(matches!(
            parse_dataset(negative, "a"),
            Err(Error::Parse { line: 3, .. })
        ));
        let empty = "time,status,arm,stratum\n1,1,a,s\n2,,b,s\n";
        assert!(matches!(
            parse_dataset(empty, "a"),
            Err(Error::Parse { line: 3, .. })
        ));
        let text = "time,status,arm,stratum\n1,1,a,s\nabc,1,b,s\n";
        assert!(matches!(
            parse_dataset(text, "a"),
            Err(Error::Parse { line: 3, .. })
        ));
    }

    #[test]
    fn empty_cell_is_missing_stratum_arm() {
        let text = "time,status,arm,stratum\n1,1,a,s\n2,1,b,s\n3,1,a,t\n";
        assert_eq!(
            parse_dataset(text, "a").unwrap_err(),
            Error::MissingStratumArm {
                stratum: "t".into(),
                arm: "b".into()
            }
        );
    }

    #[test]
    fn arm_count_and_control_label() {
        let three = "time,status,arm,stratum\n1,1,a,s\n2,1,b,s\n3,1,c,s\n";
        assert!(matches!(
            parse_dataset(three, "a"),
            Err(Error::InvalidInput(_))
        ));
        let two = "time,status,arm,stratum\n1,1,a,s\n2,1,b,s\n";
        assert!(matches!(
            parse_dataset(two, "z"),
            Err(Error::InvalidInput(_))
        ));
    }
}

//! Result records and their CSV / JSON emission.

use std::fs;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::config::ExperimentConfig;
use crate::RunError;

/// JSON has no encoding for ±∞ or NaN, so non-finite values are written as
/// the strings "inf", "-inf" and "nan".
pub mod float {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
        if x.is_finite() {
            s.serialize_f64(*x)
        } else {
            s.serialize_str(super::text(*x).as_str())
        }
    }

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Repr {
        Num(f64),
        Text(String),
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        match Repr::deserialize(d)? {
            Repr::Num(x) => Ok(x),
            Repr::Text(t) => match t.as_str() {
                "inf" => Ok(f64::INFINITY),
                "-inf" => Ok(f64::NEG_INFINITY),
                "nan" => Ok(f64::NAN),
                other => Err(serde::de::Error::custom(format!("not a number: {other:?}"))),
            },
        }
    }
}

/// 17 significant digits in scientific notation, the same text on every
/// platform.
pub fn text(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf" } else { "-inf" }.into()
    } else {
        format!("{x:.16e}")
    }
}

/// One output line: a route's value at a cutoff N or index k.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Row {
    pub experiment: String,
    pub route: String,
    #[serde(rename = "N_or_k")]
    pub n_or_k: u64,
    #[serde(with = "float")]
    pub value: f64,
    #[serde(with = "float")]
    pub err: f64,
    #[serde(with = "float")]
    pub lower: f64,
    #[serde(with = "float")]
    pub upper: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResultRecord {
    pub experiment: String,
    pub config_hash: String,
    pub config: ExperimentConfig,
    pub rows: Vec<Row>,
    pub checks: Vec<Check>,
    pub passed: bool,
}

impl ResultRecord {
    pub fn routes(&self, route: &str) -> impl Iterator<Item = &Row> {
        let route = route.to_string();
        self.rows.iter().filter(move |r| r.route == route)
    }

    pub fn row(&self, route: &str, n_or_k: u64) -> Option<&Row> {
        self.rows
            .iter()
            .find(|r| r.route == route && r.n_or_k == n_or_k)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn hash_matches(&self) -> bool {
        self.config.hash() == self.config_hash
    }
}

/// Wall-clock per section; kept out of the result record so that reruns
/// produce identical bytes.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Timing {
    pub experiment: String,
    pub config_hash: String,
    pub threads: usize,
    pub sections: Vec<(String, f64)>,
    pub total_seconds: f64,
}

impl Timing {
    pub fn section(&self, name: &str) -> Option<f64> {
        self.sections.iter().find(|s| s.0 == name).map(|s| s.1)
    }
}

pub const CSV_HEADER: [&str; 7] = [
    "experiment",
    "route",
    "N_or_k",
    "value",
    "err",
    "lower",
    "upper",
];

pub fn to_csv(record: &ResultRecord) -> Result<String, RunError> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    w.write_record(CSV_HEADER).map_err(csv_err)?;
    for r in &record.rows {
        w.write_record([
            r.experiment.clone(),
            r.route.clone(),
            r.n_or_k.to_string(),
            text(r.value),
            text(r.err),
            text(r.lower),
            text(r.upper),
        ])
        .map_err(csv_err)?;
    }
    let bytes = w.into_inner().map_err(|e| RunError::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
}

fn csv_err(e: csv::Error) -> RunError {
    RunError::Io(std::io::Error::other(e))
}

pub fn to_json(record: &ResultRecord) -> String {
    let mut s = serde_json::to_string_pretty(record).expect("record serializes");
    s.push('\n');
    s
}

pub fn from_json(text: &str) -> Result<ResultRecord, RunError> {
    serde_json::from_str(text)
        .map_err(|e| RunError::Io(std::io::Error::new(std::io::ErrorKind::InvalidData, e)))
}

fn write(path: &Path, contents: &str) -> Result<(), RunError> {
    let mut f = fs::File::create(path)?;
    f.write_all(contents.as_bytes())?;
    Ok(())
}

/// Writes CSV, JSON and timing files into `dir`.
pub fn emit(record: &ResultRecord, timing: &Timing, dir: &Path) -> Result<(), RunError> {
    fs::create_dir_all(dir)?;
    let out = &record.config.output;
    write(&dir.join(&out.csv), &to_csv(record)?)?;
    write(&dir.join(&out.json), &to_json(record))?;
    let mut t = serde_json::to_string_pretty(timing).expect("timing serializes");
    t.push('\n');
    write(&dir.join(&out.timing), &t)
}

/// Golden-file regression on the CSV: the first run captures the file,
/// later runs must reproduce it byte for byte.
pub fn regression(record: &ResultRecord, golden: &Path) -> Result<Option<String>, RunError> {
    let csv = to_csv(record)?;
    if !golden.exists() {
        write(golden, &csv)?;
        return Ok(None);
    }
    let want = fs::read_to_string(golden)?;
    if want == csv {
        return Ok(None);
    }
    let first = want
        .lines()
        .zip(csv.lines())
        .position(|(a, b)| a != b)
        .unwrap_or_else(|| want.lines().count().min(csv.lines().count()));
    Ok(Some(format!(
        "output differs from {} at line {}",
        golden.display(),
        first + 1
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::{ExperimentConfig, ExperimentId};

    fn sample() -> ResultRecord {
        let config = ExperimentConfig::default_for(ExperimentId::L1Residue);
        ResultRecord {
            experiment: "l1-residue".into(),
            config_hash: config.hash(),
            config,
            rows: vec![
                Row {
                    experiment: "l1-residue".into(),
                    route: "residue-route".into(),
                    n_or_k: 0,
                    value: 1.0 / 3.0,
                    err: 1e-300,
                    lower: f64::NEG_INFINITY,
                    upper: f64::INFINITY,
                },
                Row {
                    experiment: "l1-residue".into(),
                    route: "a, \"quoted\" route".into(),
                    n_or_k: 7,
                    value: -0.1,
                    err: 0.0,
                    lower: 5e-324,
                    upper: f64::MAX,
                },
            ],
            checks: vec![Check {
                name: "x".into(),
                passed: true,
                detail: "ok".into(),
            }],
            passed: true,
        }
    }

    #[test]
    fn json_round_trip_is_exact() {
        let r = sample();
        assert_eq!(from_json(&to_json(&r)).unwrap(), r);
        assert!(r.hash_matches());
    }

    #[test]
    fn csv_has_fixed_schema_and_seventeen_digits() {
        let csv = to_csv(&sample()).unwrap();
        let mut lines = csv.lines();
        assert_eq!(
            lines.next().unwrap(),
            "experiment,route,N_or_k,value,err,lower,upper"
        );
        assert_eq!(
            lines.next().unwrap(),
            "l1-residue,residue-route,0,3.3333333333333331e-1,1.0000000000000000e-300,-inf,inf"
        );
        assert!(!csv.contains('\r'));
        let mut rd = csv::Reader::from_reader(csv.as_bytes());
        let rec: Vec<csv::StringRecord> = rd.records().map(|r| r.unwrap()).collect();
        assert_eq!(&rec[1][1], "a, \"quoted\" route");
        assert_eq!(rec[1][3].parse::<f64>().unwrap(), -0.1);
    }

    #[test]
    fn regression_captures_then_compares() {
        let dir = tempfile::tempdir().unwrap();
        let golden = dir.path().join("golden.csv");
        let mut r = sample();
        assert_eq!(regression(&r, &golden).unwrap(), None);
        assert_eq!(regression(&r, &golden).unwrap(), None);
        r.rows[0].value = 0.3;
        assert!(regression(&r, &golden).unwrap().unwrap().contains("line 2"));
    }
}

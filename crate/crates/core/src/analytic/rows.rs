use std::io::{BufRead, BufReader, Read, Write};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gauss_sums::ComplexVal;
use crate::gaussint::BetaClass;

/// First line of every CSV row file.
pub const ROW_SCHEMA: &str = "# quartic-experiment-rows v1";

/// One data point of a prime-sum experiment.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentRow {
    pub x: f64,
    pub ell: i64,
    pub beta: BetaClass,
    pub u: Option<f64>,
    pub value: ComplexVal,
    /// `value / X^{3/4}` for conjecture scans.
    pub normalized: Option<Complex64>,
}

#[derive(Serialize, Deserialize)]
struct CsvRow {
    #[serde(rename = "X")]
    x: f64,
    ell: i64,
    beta: String,
    u: Option<f64>,
    re: f64,
    im: f64,
    err: f64,
    normalized_re: Option<f64>,
    normalized_im: Option<f64>,
}

impl From<&ExperimentRow> for CsvRow {
    fn from(r: &ExperimentRow) -> Self {
        CsvRow {
            x: r.x,
            ell: r.ell,
            beta: r.beta.to_string(),
            u: r.u,
            re: r.value.value.re,
            im: r.value.value.im,
            err: r.value.err,
            normalized_re: r.normalized.map(|z| z.re),
            normalized_im: r.normalized.map(|z| z.im),
        }
    }
}

impl TryFrom<CsvRow> for ExperimentRow {
    type Error = Error;
    fn try_from(r: CsvRow) -> Result<Self> {
        let beta = r.beta.parse().map_err(Error::Precondition)?;
        let normalized = match (r.normalized_re, r.normalized_im) {
            (Some(a), Some(b)) => Some(Complex64::new(a, b)),
            (None, None) => None,
            _ => return Err(Error::Precondition("half-filled normalized column".into())),
        };
        Ok(ExperimentRow {
            x: r.x,
            ell: r.ell,
            beta,
            u: r.u,
            value: ComplexVal::new(Complex64::new(r.re, r.im), r.err),
            normalized,
        })
    }
}

pub fn write_csv<W: Write>(mut out: W, rows: &[ExperimentRow]) -> Result<()> {
    writeln!(out, "{ROW_SCHEMA}")?;
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(CsvRow::from(r))?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_csv<R: Read>(input: R) -> Result<Vec<ExperimentRow>> {
    let mut input = BufReader::new(input);
    let mut first = String::new();
    input.read_line(&mut first)?;
    if first.trim_end() != ROW_SCHEMA {
        return Err(Error::Precondition(format!("unexpected schema line '{}'", first.trim_end())));
    }
    let mut r = csv::Reader::from_reader(input);
    r.deserialize::<CsvRow>().map(|row| ExperimentRow::try_from(row?)).collect()
}

pub fn write_json<W: Write>(out: W, rows: &[ExperimentRow]) -> Result<()> {
    serde_json::to_writer_pretty(out, rows)?;
    Ok(())
}

pub fn read_json<R: Read>(input: R) -> Result<Vec<ExperimentRow>> {
    Ok(serde_json::from_reader(input)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Vec<ExperimentRow> {
        vec![
            ExperimentRow {
                x: 1000.0,
                ell: 0,
                beta: BetaClass::One,
                u: None,
                value: ComplexVal::new(Complex64::new(0.1 + 0.2, -1.0 / 3.0), 1e-13),
                normalized: Some(Complex64::new(std::f64::consts::PI, 1e-300)),
            },
            ExperimentRow {
                x: 2.5e5,
                ell: -2,
                beta: BetaClass::OnePlusLambda3,
                u: Some(5.0),
                value: ComplexVal::exact(Complex64::new(0.0, 0.0)),
                normalized: None,
            },
        ]
    }

    #[test]
    fn csv_reparses_exactly() {
        let mut buf = Vec::new();
        write_csv(&mut buf, &sample()).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with(ROW_SCHEMA));
        assert!(text.lines().nth(1).unwrap() == "X,ell,beta,u,re,im,err,normalized_re,normalized_im");
        assert_eq!(read_csv(&buf[..]).unwrap(), sample());
        assert!(read_csv(&b"X,ell\n1,2\n"[..]).is_err());
    }

    #[test]
    fn json_reparses_exactly() {
        let mut buf = Vec::new();
        write_json(&mut buf, &sample()).unwrap();
        assert_eq!(read_json(&buf[..]).unwrap(), sample());
    }
}

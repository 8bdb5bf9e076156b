//! Deterministic table serialization: CSV with 12-significant-digit
//! numbers and JSON mirroring the record field names.

use qsteer::verify::SweepRecord;
use serde::Serialize;

/// Exact CSV header for sweep tables.
pub const SWEEP_HEADER: &str = "c1,c2,c3,F2,F3,S2,S3,C2,C3,residual14,residual17";
/// Exact CSV header for oracle comparison tables.
pub const ORACLE_HEADER: &str = "c1,c2,c3,dev_f2,dev_f3,dev_c2,dev_c3,converged";

/// Formats with 12 significant digits, `.` separator, no locale dependence
/// (`%.12g`-style: fixed point for moderate exponents, scientific
/// otherwise, trailing zeros stripped).
pub fn fmt_g12(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{x:.11e}");
    let (mantissa, exp) = sci.split_once('e').expect("{:e} always contains an exponent");
    let exp: i32 = exp.parse().expect("exponent is an integer");
    if (-4..12).contains(&exp) {
        let prec = (11 - exp).max(0) as usize;
        strip_zeros(format!("{x:.prec$}"))
    } else {
        format!("{}e{exp}", strip_zeros(mantissa.to_string()))
    }
}

fn strip_zeros(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

pub fn sweep_csv_row(rec: &SweepRecord) -> String {
    [
        rec.c.c1,
        rec.c.c2,
        rec.c.c3,
        rec.f2,
        rec.f3,
        rec.s2,
        rec.s3,
        rec.c2_mub,
        rec.c3_mub,
        rec.residual_14,
        rec.residual_17,
    ]
    .map(fmt_g12)
    .join(",")
}

pub fn sweep_csv(records: &[SweepRecord]) -> String {
    let mut out = String::from(SWEEP_HEADER);
    out.push('\n');
    for rec in records {
        out.push_str(&sweep_csv_row(rec));
        out.push('\n');
    }
    out
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut out = serde_json::to_string_pretty(value).expect("records serialize to JSON");
    out.push('\n');
    out
}

/// One oracle comparison row; deviations are absent when the corresponding
/// maximization failed to converge.
#[derive(Clone, Debug, Serialize)]
pub struct OracleRow {
    #[serde(flatten)]
    pub c: qsteer::qstate::CorrelationVector,
    pub dev_f2: Option<f64>,
    pub dev_f3: Option<f64>,
    pub dev_c2: Option<f64>,
    pub dev_c3: Option<f64>,
    pub converged: bool,
}

pub fn oracle_csv(rows: &[OracleRow]) -> String {
    let mut out = String::from(ORACLE_HEADER);
    out.push('\n');
    for row in rows {
        let dev = |d: Option<f64>| d.map(fmt_g12).unwrap_or_default();
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            fmt_g12(row.c.c1),
            fmt_g12(row.c.c2),
            fmt_g12(row.c.c3),
            dev(row.dev_f2),
            dev(row.dev_f3),
            dev(row.dev_c2),
            dev(row.dev_c3),
            row.converged,
        ));
    }
    out
}

//! CSV report rows.

use std::io::Write;

use darboux_core::{Enclosure, IntegralResult, Rational};

/// Significant digits of the decimal columns.
pub const DECIMAL_DIGITS: usize = 15;

pub const HEADER: [&str; 12] = [
    "case_id",
    "operation",
    "input_summary",
    "lo",
    "hi",
    "exact_flag",
    "status",
    "depth",
    "evaluations",
    "verdict",
    "lo_decimal",
    "hi_decimal",
];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Row {
    pub case_id: String,
    pub operation: String,
    pub input_summary: String,
    pub lo: Option<Rational>,
    pub hi: Option<Rational>,
    pub exact: bool,
    pub status: String,
    pub depth: Option<u32>,
    pub evaluations: Option<u64>,
    pub verdict: String,
}

impl Row {
    pub fn new(
        case_id: impl Into<String>,
        operation: &str,
        input_summary: impl Into<String>,
    ) -> Self {
        Row {
            case_id: case_id.into(),
            operation: operation.to_string(),
            input_summary: input_summary.into(),
            lo: None,
            hi: None,
            exact: false,
            status: String::new(),
            depth: None,
            evaluations: None,
            verdict: String::new(),
        }
    }

    pub fn enclosure(mut self, e: &Enclosure) -> Self {
        self.lo = Some(e.lo().clone());
        self.hi = Some(e.hi().clone());
        self.exact = e.is_degenerate();
        self
    }

    pub fn value(self, v: &Rational) -> Self {
        self.enclosure(&Enclosure::point(v.clone()))
    }

    pub fn integral(mut self, r: &IntegralResult) -> Self {
        self = self.enclosure(&r.enclosure);
        self.status = r.status.label().to_string();
        self.depth = Some(r.depth);
        self.evaluations = Some(r.evaluations);
        self
    }

    pub fn status(mut self, s: impl Into<String>) -> Self {
        self.status = s.into();
        self
    }

    pub fn verdict(mut self, v: impl ToString) -> Self {
        self.verdict = v.to_string();
        self
    }

    fn fields(&self) -> [String; 12] {
        let opt = |r: &Option<Rational>| r.as_ref().map(ToString::to_string).unwrap_or_default();
        let dec = |r: &Option<Rational>| {
            r.as_ref()
                .map(|r| r.to_scientific(DECIMAL_DIGITS))
                .unwrap_or_default()
        };
        [
            self.case_id.clone(),
            self.operation.clone(),
            self.input_summary.clone(),
            opt(&self.lo),
            opt(&self.hi),
            self.exact.to_string(),
            self.status.clone(),
            self.depth.map(|d| d.to_string()).unwrap_or_default(),
            self.evaluations.map(|d| d.to_string()).unwrap_or_default(),
            self.verdict.clone(),
            dec(&self.lo),
            dec(&self.hi),
        ]
    }
}

/// Writes the header and `rows` in order.
pub fn write_csv<W: Write>(out: W, rows: &[Row]) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(HEADER)?;
    for r in rows {
        w.write_record(r.fields())?;
    }
    w.flush()?;
    Ok(())
}

pub fn to_csv_string(rows: &[Row]) -> String {
    let mut buf = Vec::new();
    write_csv(&mut buf, rows).expect("writing to memory");
    String::from_utf8(buf).expect("csv output is utf-8")
}

//! JSON reports. Key order follows struct field order and every float is
//! written with 17 significant digits, so identical inputs give identical bytes.

use std::io::{self, Write};

use diffh2::matkernel::to_rows;
use diffh2::sim::format_sig17;
use diffh2::Matrix;
use serde::Serialize;
use serde_json::ser::{Formatter, PrettyFormatter};

pub const SCHEMA_VERSION: &str = "1";

/// Pretty JSON with `{:.16e}` floats; non-finite values become `null`.
pub struct Sig17Formatter<'a>(PrettyFormatter<'a>);

impl Default for Sig17Formatter<'_> {
    fn default() -> Self {
        Sig17Formatter(PrettyFormatter::with_indent(b"  "))
    }
}

impl Formatter for Sig17Formatter<'_> {
    fn write_f64<W: ?Sized + Write>(&mut self, w: &mut W, value: f64) -> io::Result<()> {
        if value.is_finite() {
            w.write_all(format_sig17(value).as_bytes())
        } else {
            w.write_all(b"null")
        }
    }

    fn write_f32<W: ?Sized + Write>(&mut self, w: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(w, value as f64)
    }

    fn begin_array<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_array(w)
    }

    fn end_array<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array(w)
    }

    fn begin_array_value<W: ?Sized + Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_array_value(w, first)
    }

    fn end_array_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array_value(w)
    }

    fn begin_object<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object(w)
    }

    fn end_object<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object(w)
    }

    fn begin_object_key<W: ?Sized + Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_object_key(w, first)
    }

    fn begin_object_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object_value(w)
    }

    fn end_object_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object_value(w)
    }
}

pub fn to_json<T: Serialize>(report: &T) -> String {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, Sig17Formatter::default());
    report
        .serialize(&mut ser)
        .expect("report types serialize infallibly");
    buf.push(b'\n');
    String::from_utf8(buf).expect("serde_json writes UTF-8")
}

pub fn rows(m: &Matrix) -> Vec<Vec<f64>> {
    to_rows(m)
}

#[derive(Debug, Serialize)]
pub struct SpectrumReport {
    pub schema_version: &'static str,
    pub command: &'static str,
    pub nodes: usize,
    pub edges: usize,
    pub eigenvalues: Vec<f64>,
    pub lambda2: f64,
    pub lambda_n: f64,
    pub connected: bool,
}

#[derive(Debug, Serialize)]
pub struct RangeReport {
    pub lower: f64,
    pub upper: f64,
    pub upper_inclusive: bool,
}

#[derive(Debug, Serialize)]
pub struct ModeCertificate {
    pub lambda: f64,
    pub trace: f64,
    pub slack: f64,
    pub lyap_margin: f64,
}

#[derive(Debug, Serialize)]
pub struct CertificateReport {
    pub certified: bool,
    pub trace_sum: f64,
    pub eps: f64,
    pub modes: Vec<ModeCertificate>,
}

#[derive(Debug, Serialize)]
pub struct DesignReport {
    pub schema_version: &'static str,
    pub command: &'static str,
    pub status: &'static str,
    pub method: &'static str,
    pub gamma: f64,
    pub c: f64,
    pub coupling_range: RangeReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub minimal_gamma: Option<f64>,
    #[serde(rename = "K", skip_serializing_if = "Option::is_none")]
    pub k: Option<Vec<Vec<f64>>>,
    #[serde(rename = "P", skip_serializing_if = "Option::is_none")]
    pub p: Option<Vec<Vec<f64>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trace_value: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub riccati_eps: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub modal_costs: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub j_global: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<CertificateReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub message: Option<String>,
}

#[derive(Debug, Serialize)]
pub struct OracleReport {
    pub j_modal_sum: f64,
    pub j_reduced: f64,
    pub j_quadrature: f64,
    pub reduced_gap: f64,
    pub quadrature_gap: f64,
    pub agree: bool,
}

#[derive(Debug, Serialize)]
pub struct VerifyReport {
    pub schema_version: &'static str,
    pub command: &'static str,
    pub status: &'static str,
    pub gamma: f64,
    #[serde(rename = "K")]
    pub k: Vec<Vec<f64>>,
    pub synchronizing: bool,
    pub stable_modes: Vec<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub modal_costs: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<CertificateReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracles: Option<OracleReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub message: Option<String>,
}

#[derive(Debug, Serialize)]
pub struct SimulateReport {
    pub schema_version: &'static str,
    pub command: &'static str,
    pub status: &'static str,
    pub t_final: f64,
    pub dt: f64,
    pub samples: usize,
    pub final_disagreement: f64,
    pub decay_rate: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

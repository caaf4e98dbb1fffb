//! Machine-readable result documents and sweep tables.
//!
//! Floats are written with 17 significant digits so that every value
//! round-trips exactly.

use std::io;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::ser::Formatter;

use crate::error::{Error, Result};
use crate::fieldmap::fmt_f64;
use crate::zolotarev::{capacity_bound, SweepEntry, Z3Solution, Z4Solution};

/// The published JSON schema for [`ResultDocument`].
pub const RESULT_SCHEMA: &str = include_str!("../../../docs/result.schema.json");

/// Result of one solve. Z3 fields are absent when `tau >= 1`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ResultDocument {
    pub degree: usize,
    pub tau: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sigma: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<f64>,
    pub support_points: Vec<Complex64>,
    pub node_values: Vec<Complex64>,
    pub weights: Vec<Complex64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub poles_rstar: Option<Vec<Complex64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub zeros_rstar: Option<Vec<Complex64>>,
    pub poles_rhat: Vec<Complex64>,
    pub zeros_rhat: Vec<Complex64>,
    #[serde(rename = "min_on_F", default, skip_serializing_if = "Option::is_none")]
    pub min_on_f: Option<f64>,
    #[serde(rename = "max_on_E", default, skip_serializing_if = "Option::is_none")]
    pub max_on_e: Option<f64>,
    pub tau_history: Vec<f64>,
    pub warnings: Vec<String>,
}

impl ResultDocument {
    pub fn new(degree: usize, z4: &Z4Solution, z3: Option<&Z3Solution>) -> Result<Self> {
        let r = &z4.r_hat;
        // r_hat = 0 carries no poles or zeros worth reporting
        let (poles_rhat, zeros_rhat) = if r.values().iter().all(|v| *v == Complex64::new(0.0, 0.0)) {
            (vec![], vec![])
        } else {
            r.poles_and_zeros()?
        };
        Ok(Self {
            degree,
            tau: z4.tau,
            sigma: z3.map(|s| s.sigma),
            p: z3.map(|s| s.p),
            support_points: r.nodes().to_vec(),
            node_values: r.values().to_vec(),
            weights: r.weights().to_vec(),
            poles_rstar: z3.map(|s| s.poles.clone()),
            zeros_rstar: z3.map(|s| s.zeros.clone()),
            poles_rhat,
            zeros_rhat,
            min_on_f: z3.map(|s| s.min_on_f),
            max_on_e: z3.map(|s| s.max_on_e),
            tau_history: z4.tau_history.clone(),
            warnings: z4.warnings.clone(),
        })
    }

    pub fn to_json(&self) -> Result<String> {
        to_json(self)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config(format!("invalid result document: {e}")))
    }
}

/// Compact JSON with every float in `{:.16e}` form. Non-finite floats
/// become `null`, as serde_json does by default.
struct SeventeenDigits;

impl Formatter for SeventeenDigits {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        writer.write_all(fmt_f64(value).as_bytes())
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, value as f64)
    }
}

/// Serializes any value with the 17-digit float format, plus a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, SeventeenDigits);
    value.serialize(&mut ser).map_err(|e| Error::Config(format!("serialization failed: {e}")))?;
    buf.push(b'\n');
    Ok(String::from_utf8(buf).expect("serde_json emits UTF-8"))
}

/// Sweep table with columns `n,tau,sigma` and `lower_bound` when a capacity
/// is given. Failed degrees leave their value cells empty and add a `#` line
/// with the reason.
pub fn sweep_csv(entries: &[SweepEntry], capacity: Option<f64>) -> Result<String> {
    let mut out = String::from(if capacity.is_some() { "n,tau,sigma,lower_bound\n" } else { "n,tau,sigma\n" });
    for e in entries {
        let cell = |x: Option<f64>| x.map(fmt_f64).unwrap_or_default();
        out.push_str(&format!("{},{},{}", e.degree, cell(e.tau), cell(e.sigma)));
        if let Some(cap) = capacity {
            out.push_str(&format!(",{}", fmt_f64(capacity_bound(e.degree, cap)?)));
        }
        out.push('\n');
        if let Some(reason) = &e.failure {
            out.push_str(&format!("# n={} failed: {}\n", e.degree, reason.replace('\n', " ")));
        }
    }
    Ok(out)
}

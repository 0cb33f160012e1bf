use std::fmt::Write as _;

use fueter_core::singular::{ComponentReport, JacobianSample};
use fueter_core::Error;
use serde::Serialize;
use serde_json::json;

pub const SCAN_HEADER: &str = "t,x,y,z,u,v,det_fd,det_analytic,locus,residual_left,residual_right";

fn cell(x: Option<f64>) -> String {
    match x {
        Some(v) => format!("{v:e}"),
        None => "NaN".into(),
    }
}

/// Scan samples as CSV, header first. Residuals that are not defined near
/// the real axis are written as `NaN`.
pub fn scan_csv(samples: &[JacobianSample]) -> String {
    let mut out = String::from(SCAN_HEADER);
    out.push('\n');
    for s in samples {
        let p = s.point;
        let _ = writeln!(
            out,
            "{},{},{},{},{:e},{:e},{:e},{:e},{},{},{}",
            p.t,
            p.x,
            p.y,
            p.z,
            s.u,
            s.v,
            s.det_fd,
            s.det_analytic,
            s.locus.name(),
            cell(s.residual_left),
            cell(s.residual_right)
        );
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComponentsJson {
    pub n: usize,
    pub radii: Vec<f64>,
    pub multiplicities: Vec<usize>,
    pub verified_by_sampling: bool,
}

impl From<&ComponentReport> for ComponentsJson {
    fn from(r: &ComponentReport) -> Self {
        Self {
            n: r.n,
            radii: r.radii.radii(),
            multiplicities: r.radii.multiplicities(),
            verified_by_sampling: r.verified_by_sampling,
        }
    }
}

/// Structured error for stderr.
pub fn error_json(e: &Error) -> serde_json::Value {
    match e {
        Error::Syntax { position, message } => json!({
            "error": e.kind(),
            "position": position,
            "message": message,
        }),
        _ => json!({ "error": e.kind(), "message": e.to_string() }),
    }
}

//! Geodesic reports: what `geodesic` writes and `flow`/`converge` read back.

use std::sync::Arc;

use horogeo_core::geodesic::CoreValues;
use horogeo_core::{
    optimal_geodesic, FillingStatus, GeodesicLine, PerronOptions, WeightedMulticurve,
};
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::error::CliError;
use crate::fmt::{exact, sig15};
use crate::io::{BusemannFile, OrigamiFile};

/// Everything needed to rebuild the line bit-for-bit.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ReportInputs {
    pub origami: OrigamiFile,
    pub xi: BusemannFile,
    pub eta: BusemannFile,
    /// Round-trip representation of the Perron tolerance.
    pub tolerance: String,
    pub seed: u64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct GeodesicReport {
    pub inputs: ReportInputs,
    pub filling: String,
    pub lambda: String,
    pub scale_factor: String,
    pub weight_scale: String,
    pub x: Vec<String>,
    pub y: Vec<String>,
    pub residual: String,
    pub iterations: usize,
    pub system_residual: String,
    pub f_vert: Map<String, Value>,
    pub f_hor: Map<String, Value>,
    pub area: String,
    pub walsh_forward_cosine: String,
    pub walsh_backward_cosine: String,
    pub forward_limit: Map<String, Value>,
    pub backward_limit: Map<String, Value>,
    pub note: String,
}

fn weights(mc: &WeightedMulticurve<f64>) -> Map<String, Value> {
    mc.ids()
        .zip(mc.components())
        .map(|(id, (_, w))| (id.to_string(), Value::String(sig15(*w))))
        .collect()
}

fn limit(values: &CoreValues) -> Map<String, Value> {
    values
        .iter()
        .map(|(id, v)| (id.to_string(), Value::String(sig15(*v))))
        .collect()
}

impl GeodesicReport {
    pub fn new(line: &GeodesicLine, opts: &PerronOptions) -> Self {
        let e = line.eigen();
        Self {
            inputs: ReportInputs {
                origami: OrigamiFile::of(line.origami()),
                xi: BusemannFile::of(line.xi()),
                eta: BusemannFile::of(line.eta()),
                tolerance: exact(opts.tol),
                seed: opts.seed,
            },
            filling: FillingStatus::FillingCertified.as_str().into(),
            lambda: sig15(e.lambda),
            scale_factor: sig15(line.scale_factor()),
            weight_scale: sig15(line.weight_scale()),
            x: e.x.iter().map(|v| sig15(*v)).collect(),
            y: line.y().iter().map(|v| sig15(*v)).collect(),
            residual: sig15(e.residual),
            iterations: e.iterations,
            system_residual: sig15(line.system_residual()),
            f_vert: weights(line.f_vert()),
            f_hor: weights(line.f_hor()),
            area: sig15(line.area()),
            walsh_forward_cosine: sig15(line.forward_cosine()),
            walsh_backward_cosine: sig15(line.backward_cosine()),
            forward_limit: limit(&line.forward_limit()),
            backward_limit: limit(&line.backward_limit()),
            note:
                "forward limit = xi up to positive scale; backward limit = eta up to positive scale"
                    .into(),
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn options(&self) -> Result<PerronOptions, CliError> {
        let tol: f64 = self.inputs.tolerance.parse().map_err(|_| {
            CliError::input(format!("report: bad tolerance {:?}", self.inputs.tolerance))
        })?;
        Ok(PerronOptions {
            tol,
            seed: self.inputs.seed,
            ..PerronOptions::default()
        })
    }

    /// Recomputes the line from the embedded inputs and checks that it
    /// reproduces the stored eigen-data.
    pub fn rebuild(&self) -> Result<(GeodesicLine, PerronOptions), CliError> {
        let o = Arc::new(self.inputs.origami.build()?);
        let xi = self.inputs.xi.build(o.clone())?;
        let eta = self.inputs.eta.build(o)?;
        let opts = self.options()?;
        let line = optimal_geodesic(&xi, &eta, &opts)?;
        let again = GeodesicReport::new(&line, &opts);
        if again.lambda != self.lambda
            || again.x != self.x
            || again.f_vert != self.f_vert
            || again.f_hor != self.f_hor
        {
            return Err(CliError::input(
                "report: stored eigen-data do not match the line rebuilt from its inputs",
            ));
        }
        Ok((line, opts))
    }
}

pub fn read_report(path: &std::path::Path) -> Result<GeodesicReport, CliError> {
    crate::io::read_json(path)
}

#[cfg(test)]
mod tests {
    use super::*;
    use horogeo_core::origami::l_shaped;
    use horogeo_core::{BusemannSpec, Side};

    fn golden() -> (GeodesicLine, PerronOptions) {
        let o = Arc::new(l_shaped(2, 2));
        let xi = BusemannSpec::unit(o.clone(), Side::Vertical);
        let eta = BusemannSpec::unit(o, Side::Horizontal);
        let opts = PerronOptions::default();
        (optimal_geodesic(&xi, &eta, &opts).unwrap(), opts)
    }

    #[test]
    fn golden_report_round_trips() {
        let (line, opts) = golden();
        let r = GeodesicReport::new(&line, &opts);
        assert!(r.lambda.starts_with("2.6180339887"));
        assert_eq!(r.f_vert["B1"], "1");
        assert!(r.f_vert["B2"]
            .as_str()
            .unwrap()
            .starts_with("0.618033988749"));
        assert!(r.area.starts_with("2.236067977499"));
        let text = r.to_json();
        let back: GeodesicReport = serde_json::from_str(&text).unwrap();
        assert_eq!(back.to_json(), text);
        let (again, _) = back.rebuild().unwrap();
        assert_eq!(again.base(), line.base());
    }

    #[test]
    fn tampered_report_is_rejected() {
        let (line, opts) = golden();
        let mut r = GeodesicReport::new(&line, &opts);
        r.lambda = "3".into();
        assert_eq!(r.rebuild().unwrap_err().exit_code(), 2);
    }
}

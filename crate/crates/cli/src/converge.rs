//! Convergence experiment along `X_n = G(n)`, `Y_n = G(−n)`, plus a seeded
//! jitter demonstration.

use horogeo_core::horo::{miyachi_intersection, miyachi_on_line};
use horogeo_core::origami::distance_interval;
use horogeo_core::{GeodesicLine, Status, WeightedMulticurve, WeightedSurface};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::config::RunConfig;
use crate::error::CliError;
use crate::fmt::sig15;

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ConvergeRow {
    pub n: usize,
    /// `d(X_n, Y_n) − d(X₀, X_n)`.
    pub gap: String,
    /// `log i(X_n, Y_n) − (d(X_n, Y_n) − d(X₀, X_n) − d(X₀, Y_n))`.
    pub identity: String,
    pub miyachi: [String; 2],
    pub miyachi_certified: [String; 2],
    pub status: &'static str,
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct JitterRow {
    pub n: usize,
    pub distance_to_base: [String; 2],
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct JitterSection {
    pub label: &'static str,
    pub status: &'static str,
    pub eps: String,
    pub seed: u64,
    pub rows: Vec<JitterRow>,
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ConvergeReport {
    pub n_max: usize,
    pub lambda: String,
    pub rows: Vec<ConvergeRow>,
    pub jitter: JitterSection,
}

impl ConvergeReport {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

fn factors(rng: &mut ChaCha8Rng, count: usize, eps: f64) -> Vec<f64> {
    (0..count)
        .map(|_| rng.random_range(-1.0..=1.0) * eps)
        .collect()
}

/// Weights of `G(n)` and `G(−n)` each multiplied by `e^{εu}`, `u ∈ [−1, 1]`;
/// the proxy keeps base weights times the geometric mean of the two factors.
fn midpoint_proxy(
    rng: &mut ChaCha8Rng,
    base: &WeightedSurface,
    eps: f64,
) -> Result<WeightedSurface, CliError> {
    let (k, l) = (base.heights().len(), base.widths().len());
    let hx = factors(rng, k, eps);
    let wx = factors(rng, l, eps);
    let hy = factors(rng, k, eps);
    let wy = factors(rng, l, eps);
    let mean = |a: &[f64], b: &[f64]| -> Vec<f64> {
        a.iter()
            .zip(b)
            .map(|(u, v)| ((u + v) / 2.0).exp())
            .collect()
    };
    Ok(base.rescaled(&mean(&hx, &hy), &mean(&wx, &wy))?)
}

pub fn converge(line: &GeodesicLine, cfg: &RunConfig) -> Result<ConvergeReport, CliError> {
    cfg.validate()?;
    let x0 = line.point_at(0.0);
    let family = line.defining_family();
    let mut rows = Vec::with_capacity(cfg.n_max);
    for n in 1..=cfg.n_max {
        let t = n as f64;
        let dxy = line.flow_distance(-t, t)?;
        let d0x = line.flow_distance(0.0, t)?;
        let d0y = line.flow_distance(0.0, -t)?;
        let gap = dxy - d0x;
        if gap != t {
            return Err(CliError::certificate(format!(
                "gap at n = {n} is {gap}, expected {n}"
            )));
        }
        let exact = miyachi_on_line(line, t, -t, 0.0)?;
        if !exact.contains(1.0) {
            return Err(CliError::certificate(format!(
                "Miyachi interval {exact} at n = {n} misses 1"
            )));
        }
        let gromov = (d0x + d0y - dxy) / 2.0;
        let identity = -2.0 * gromov - (dxy - d0x - d0y);
        if identity != 0.0 {
            return Err(CliError::certificate(format!(
                "Gromov identity at n = {n} is {identity}"
            )));
        }
        let certified = miyachi_intersection(&line.point_at(t), &line.point_at(-t), &x0, &family)?;
        if !certified.contains(1.0) {
            return Err(CliError::certificate(format!(
                "certified Miyachi interval {certified} at n = {n} misses 1"
            )));
        }
        rows.push(ConvergeRow {
            n,
            gap: sig15(gap),
            identity: sig15(identity),
            miyachi: [sig15(exact.lo), sig15(exact.hi)],
            miyachi_certified: [sig15(certified.lo), sig15(certified.hi)],
            status: Status::Exact.as_str(),
        });
    }

    let o = line.origami();
    let mut cores: Vec<WeightedMulticurve<f64>> = family.to_vec();
    for id in o.cores() {
        cores.push(WeightedMulticurve::core(o.clone(), id)?);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut jitter = Vec::with_capacity(cfg.n_max);
    for n in 1..=cfg.n_max {
        let proxy = midpoint_proxy(&mut rng, &x0, cfg.eps)?;
        let d = distance_interval(&x0, &proxy, &cores)?;
        jitter.push(JitterRow {
            n,
            distance_to_base: [sig15(d.lo), sig15(d.hi)],
        });
    }
    Ok(ConvergeReport {
        n_max: cfg.n_max,
        lambda: sig15(line.eigen().lambda),
        rows,
        jitter: JitterSection {
            label: "demonstration, not certificate",
            status: Status::Probe.as_str(),
            eps: sig15(cfg.eps),
            seed: cfg.seed,
            rows: jitter,
        },
    })
}

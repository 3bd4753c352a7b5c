//! The geodesic joining two filling Busemann points, built from the Perron
//! eigenvector of the coefficient-weighted intersection matrix.
//!
//! `ξ = Σ c_a β_a` sits on vertical cores and `η = Σ d_b α_b` on horizontal
//! ones. With `M_ab = c_a d_b n(α_b, β_a)`, the Perron pair `(λ, x)` of `M·Mᵀ`
//! and `y = Mᵀx/√λ`, the base surface has width `x_a c_a` on `β_a` and height
//! `y_b d_b` on `α_b`. Along the Teichmüller flow widths grow by `e^t`, so the
//! forward limit is read from the vertical foliation and matches `ξ`.

use alloc::sync::Arc;
use alloc::vec::Vec;

use thiserror::Error;

use crate::horo::walsh_eval_core;
use crate::interval::DistanceInterval;
use crate::math;
use crate::matrix::Matrix;
use crate::multicurve::{
    filling_status, BusemannSpec, FillingStatus, MulticurveError, WeightedMulticurve,
};
use crate::origami::{distance_interval, CoreId, Origami, Side, SurfaceError, WeightedSurface};
use crate::perron::{perron_solve, PerronError, PerronOptions, PerronResult};

/// Minimum cosine between a computed limit and the direct Walsh evaluation.
pub const WALSH_COSINE_MIN: f64 = 1.0 - 1e-9;

/// Slack for the flow-distance cross-check.
pub const FLOW_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeodesicError {
    #[error("ξ must sit on vertical cores and η on horizontal ones (got ξ {xi}, η {eta})")]
    SideMismatch { xi: Side, eta: Side },
    #[error("ξ and η live on different origamis")]
    HostMismatch,
    #[error(
        "ξ and η do not fill: their intersection graph is disconnected or has an isolated core"
    )]
    NotFilling,
    #[error("ξ and η must use every core of their side to define a flat surface on this origami")]
    PartialSupport,
    #[error(transparent)]
    Perron(#[from] PerronError),
    #[error("system residual {residual:e} exceeds {bound:e}")]
    SystemResidual { residual: f64, bound: f64 },
    #[error("{direction} limit disagrees with the Walsh formula (cosine {cosine})")]
    WalshMismatch {
        direction: &'static str,
        cosine: f64,
    },
    #[error("distance interval {interval:?} misses the flow distance {expected}")]
    FlowCertification {
        expected: f64,
        interval: DistanceInterval,
    },
    #[error(transparent)]
    Surface(#[from] SurfaceError),
    #[error(transparent)]
    Multicurve(#[from] MulticurveError),
}

/// A Teichmüller geodesic `t ↦ G(t)` through a weighted origami.
#[derive(Debug, Clone)]
pub struct GeodesicLine {
    base: WeightedSurface,
    f_vert: WeightedMulticurve<f64>,
    f_hor: WeightedMulticurve<f64>,
    eigen: PerronResult,
    y: Vec<f64>,
    m: Matrix<f64>,
    xi: BusemannSpec,
    eta: BusemannSpec,
    scale_factor: f64,
    weight_scale: f64,
    system_residual: f64,
    forward_cosine: f64,
    backward_cosine: f64,
}

/// Values of a limit on every core of the origami, horizontal cores first.
pub type CoreValues = Vec<(CoreId, f64)>;

/// `ℓ²`-normalized `sqrt(Σ_a w_a i(γ_a, ·)² / i(γ_a, F_opp))` over the
/// components `w_a γ_a` of the defining foliation of `side`.
fn ergodic_limit(x: &WeightedSurface, side: Side) -> CoreValues {
    let o = x.origami();
    let count = o.cylinder_count(side);
    let ratio: Vec<f64> = (0..count)
        .map(|a| {
            let id = CoreId { side, index: a };
            x.thickness(id) / x.circumference(id).midpoint()
        })
        .collect();
    let raw: CoreValues = o
        .cores()
        .into_iter()
        .map(|g| {
            let s: f64 = (0..count)
                .map(|a| {
                    let n = o.core_intersection(CoreId { side, index: a }, g) as f64;
                    ratio[a] * n * n
                })
                .sum();
            (g, math::sqrt(s))
        })
        .collect();
    let norm = math::sqrt(raw.iter().map(|(_, v)| v * v).sum());
    raw.into_iter().map(|(g, v)| (g, v / norm)).collect()
}

/// Direct Walsh values `i(spec, γ)` on every core.
pub fn walsh_values(spec: &BusemannSpec) -> CoreValues {
    spec.host()
        .cores()
        .into_iter()
        .map(|g| (g, walsh_eval_core(spec, g)))
        .collect()
}

/// Cosine similarity of two value lists over the same cores.
pub fn cosine(a: &CoreValues, b: &CoreValues) -> f64 {
    let dot: f64 = a.iter().zip(b).map(|((_, u), (_, v))| u * v).sum();
    let na: f64 = a.iter().map(|(_, u)| u * u).sum();
    let nb: f64 = b.iter().map(|(_, v)| v * v).sum();
    dot / math::sqrt(na * nb)
}

/// The geodesic whose forward end is `ξ` (vertical) and backward end `η`
/// (horizontal).
pub fn optimal_geodesic(
    xi: &BusemannSpec,
    eta: &BusemannSpec,
    opts: &PerronOptions,
) -> Result<GeodesicLine, GeodesicError> {
    if xi.side() != Side::Vertical || eta.side() != Side::Horizontal {
        return Err(GeodesicError::SideMismatch {
            xi: xi.side(),
            eta: eta.side(),
        });
    }
    let host = xi.host().clone();
    if !(Arc::ptr_eq(&host, eta.host()) || *host == **eta.host()) {
        return Err(GeodesicError::HostMismatch);
    }
    let n = host.intersection_matrix();
    match filling_status(xi, eta, n)? {
        FillingStatus::NotFilling => return Err(GeodesicError::NotFilling),
        FillingStatus::MatrixPrimitiveOnly => return Err(GeodesicError::PartialSupport),
        FillingStatus::FillingCertified => {}
    }
    let c = xi.values();
    let d = eta.values();
    let m = Matrix::from_fn(c.len(), d.len(), |a, b| {
        c[a].1 * d[b].1 * n.get(d[b].0, c[a].0) as f64
    });
    let eigen = perron_solve(&m.gram(), opts)?;
    let s = math::sqrt(eigen.lambda);
    let y: Vec<f64> = m
        .transpose_mul_vec(&eigen.x)
        .iter()
        .map(|v| v / s)
        .collect();

    let weight_scale = 1.0 / eigen.x[0];
    let widths: Vec<f64> = eigen
        .x
        .iter()
        .zip(&c)
        .map(|(x, (_, ca))| x * weight_scale * ca)
        .collect();
    let heights: Vec<f64> = y
        .iter()
        .zip(&d)
        .map(|(y, (_, db))| y * weight_scale * db)
        .collect();
    let base = WeightedSurface::new(host.clone(), heights, widths)?;

    let mut line = GeodesicLine {
        f_vert: base.defining_foliation(Side::Vertical),
        f_hor: base.defining_foliation(Side::Horizontal),
        base,
        y,
        m,
        xi: xi.clone(),
        eta: eta.clone(),
        scale_factor: s,
        weight_scale,
        system_residual: 0.0,
        forward_cosine: 0.0,
        backward_cosine: 0.0,
        eigen,
    };
    line.system_residual = line.compute_system_residual();
    let bound = 10.0 * opts.tol;
    if !(line.system_residual <= bound) {
        return Err(GeodesicError::SystemResidual {
            residual: line.system_residual,
            bound,
        });
    }
    line.forward_cosine = cosine(&line.forward_limit(), &walsh_values(xi));
    line.backward_cosine = cosine(&line.backward_limit(), &walsh_values(eta));
    for (direction, cos) in [
        ("forward", line.forward_cosine),
        ("backward", line.backward_cosine),
    ] {
        if !(cos > WALSH_COSINE_MIN) {
            return Err(GeodesicError::WalshMismatch {
                direction,
                cosine: cos,
            });
        }
    }
    Ok(line)
}

impl GeodesicLine {
    pub fn origami(&self) -> &Arc<Origami> {
        self.base.origami()
    }

    /// `G(0)`.
    pub fn base(&self) -> &WeightedSurface {
        &self.base
    }

    pub fn f_vert(&self) -> &WeightedMulticurve<f64> {
        &self.f_vert
    }

    pub fn f_hor(&self) -> &WeightedMulticurve<f64> {
        &self.f_hor
    }

    /// `{F_v, F_h}`, the family that certifies distances along the line.
    pub fn defining_family(&self) -> [WeightedMulticurve<f64>; 2] {
        [self.f_vert.clone(), self.f_hor.clone()]
    }

    pub fn eigen(&self) -> &PerronResult {
        &self.eigen
    }

    /// `Mᵀx/√λ` with `x` the `ℓ¹`-normalized eigenvector.
    pub fn y(&self) -> &[f64] {
        &self.y
    }

    /// `M_ab = c_a d_b n(α_b, β_a)`, rows along `ξ`.
    pub fn weighted_matrix(&self) -> &Matrix<f64> {
        &self.m
    }

    pub fn xi(&self) -> &BusemannSpec {
        &self.xi
    }

    pub fn eta(&self) -> &BusemannSpec {
        &self.eta
    }

    /// `√λ`.
    pub fn scale_factor(&self) -> f64 {
        self.scale_factor
    }

    /// Factor taking the `ℓ¹`-normalized eigenvector to the surface weights.
    pub fn weight_scale(&self) -> f64 {
        self.weight_scale
    }

    pub fn system_residual(&self) -> f64 {
        self.system_residual
    }

    pub fn forward_cosine(&self) -> f64 {
        self.forward_cosine
    }

    pub fn backward_cosine(&self) -> f64 {
        self.backward_cosine
    }

    pub fn area(&self) -> f64 {
        self.base.area()
    }

    /// `max(|x_a s − (M y)_a|, |y_b s − (Mᵀx)_b|)` with `s = √λ`.
    fn compute_system_residual(&self) -> f64 {
        let s = self.scale_factor;
        let my = self.m.mul_vec(&self.y);
        let mtx = self.m.transpose_mul_vec(&self.eigen.x);
        let r1 = self
            .eigen
            .x
            .iter()
            .zip(&my)
            .map(|(x, v)| math::fma(*x, s, -v).abs());
        let r2 = self
            .y
            .iter()
            .zip(&mtx)
            .map(|(y, v)| math::fma(*y, s, -v).abs());
        r1.chain(r2).fold(0.0, f64::max)
    }

    /// `G(t)`: widths `×e^t`, heights `×e^−t`.
    pub fn point_at(&self, t: f64) -> WeightedSurface {
        if t == 0.0 {
            return self.base.clone();
        }
        self.base.flowed(t)
    }

    /// `d(G(s), G(t)) = |t − s|`, cross-checked against the certified
    /// distance interval with family `{F_v, F_h}`.
    pub fn flow_distance(&self, s: f64, t: f64) -> Result<f64, GeodesicError> {
        let expected = (t - s).abs();
        let interval = distance_interval(
            &self.point_at(s),
            &self.point_at(t),
            &self.defining_family(),
        )?;
        if !interval.contains_within(expected, FLOW_TOL) || interval.width() > FLOW_TOL {
            return Err(GeodesicError::FlowCertification { expected, interval });
        }
        Ok(expected)
    }

    /// Time `s` with `X = G(s)` (relative tolerance `1e−12` on every weight),
    /// or `None` if `X` is off the line.
    pub fn locate(&self, x: &WeightedSurface) -> Option<f64> {
        if !self.base.same_origami(x) {
            return None;
        }
        let s = math::ln(x.widths()[0] / self.base.widths()[0]);
        let g = self.point_at(s);
        let close = |a: &[f64], b: &[f64]| {
            a.iter()
                .zip(b)
                .all(|(u, v)| (u - v).abs() <= 1e-12 * v.abs())
        };
        (close(x.widths(), g.widths()) && close(x.heights(), g.heights())).then_some(s)
    }

    /// Limit of the ray `t → +∞` on every core, `ℓ²`-normalized.
    pub fn forward_limit(&self) -> CoreValues {
        ergodic_limit(&self.base, Side::Vertical)
    }

    /// Limit of the ray `t → −∞` on every core, `ℓ²`-normalized.
    pub fn backward_limit(&self) -> CoreValues {
        ergodic_limit(&self.base, Side::Horizontal)
    }

    /// The same line run backwards, on the rotated origami: horizontal and
    /// vertical trade places, `ξ ↔ η`, and `reversed.point_at(t)` is
    /// `point_at(−t)` turned a quarter. Cores of the rotated origami keep their
    /// index and switch side.
    pub fn reversed(&self) -> GeodesicLine {
        let rot = Arc::new(self.origami().rotated());
        let base = self.base.rotated(rot.clone());
        let m = self.m.transpose();
        let y_sum: f64 = self.y.iter().sum();
        let x: Vec<f64> = self.y.iter().map(|v| v / y_sum).collect();
        let t = m.gram();
        let tx = t.mul_vec(&x);
        let residual = tx
            .iter()
            .zip(&x)
            .map(|(a, b)| math::fma(-self.eigen.lambda, *b, *a).abs())
            .fold(0.0, f64::max);
        let eigen = PerronResult {
            lambda: self.eigen.lambda,
            x,
            residual,
            iterations: 0,
        };
        let y: Vec<f64> = m
            .transpose_mul_vec(&eigen.x)
            .iter()
            .map(|v| v / self.scale_factor)
            .collect();
        let mut line = GeodesicLine {
            f_vert: base.defining_foliation(Side::Vertical),
            f_hor: base.defining_foliation(Side::Horizontal),
            base,
            y,
            m,
            xi: self.eta.rotated(rot.clone()),
            eta: self.xi.rotated(rot),
            scale_factor: self.scale_factor,
            weight_scale: self.weight_scale,
            system_residual: 0.0,
            forward_cosine: self.backward_cosine,
            backward_cosine: self.forward_cosine,
            eigen,
        };
        line.system_residual = line.compute_system_residual();
        line
    }
}

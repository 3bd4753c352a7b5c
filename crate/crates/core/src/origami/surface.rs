use alloc::sync::Arc;
use alloc::vec::Vec;

use thiserror::Error;

use super::{CoreId, Origami, Side};
use crate::interval::{IntervalError, ValueInterval};
use crate::math;
use crate::multicurve::{MulticurveError, WeightedMulticurve};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SurfaceError {
    #[error("expected {expected} {side} weights, got {got}")]
    LengthMismatch {
        side: &'static str,
        expected: usize,
        got: usize,
    },
    #[error("weight of {0} must be positive and finite")]
    NonPositive(CoreId),
    #[error("surfaces or curves live on different origamis")]
    OrigamiMismatch,
    #[error("multicurve is not proportional to a defining foliation of the surface")]
    NotProportional,
    #[error("curve family is empty")]
    EmptyFamily,
    #[error(transparent)]
    Multicurve(#[from] MulticurveError),
    #[error(transparent)]
    Interval(#[from] IntervalError),
}

/// An origami whose cells in horizontal cylinder `i` have height `heights[i]`
/// and whose cells in vertical cylinder `j` have width `widths[j]`.
///
/// The vertical foliation is `Σ widths[j]·β_j`, the horizontal one
/// `Σ heights[i]·α_i`.
#[derive(Debug, Clone)]
pub struct WeightedSurface {
    origami: Arc<Origami>,
    heights: Vec<f64>,
    widths: Vec<f64>,
}

impl PartialEq for WeightedSurface {
    fn eq(&self, other: &Self) -> bool {
        self.same_origami(other) && self.heights == other.heights && self.widths == other.widths
    }
}

impl WeightedSurface {
    pub fn new(
        origami: Arc<Origami>,
        heights: Vec<f64>,
        widths: Vec<f64>,
    ) -> Result<Self, SurfaceError> {
        for (side, ws, name) in [
            (Side::Horizontal, &heights, "horizontal"),
            (Side::Vertical, &widths, "vertical"),
        ] {
            let expected = origami.cylinder_count(side);
            if ws.len() != expected {
                return Err(SurfaceError::LengthMismatch {
                    side: name,
                    expected,
                    got: ws.len(),
                });
            }
            if let Some(index) = ws.iter().position(|w| !(w.is_finite() && *w > 0.0)) {
                return Err(SurfaceError::NonPositive(CoreId { side, index }));
            }
        }
        Ok(Self {
            origami,
            heights,
            widths,
        })
    }

    /// Every cell a unit square.
    pub fn unit(origami: Arc<Origami>) -> Self {
        let k = origami.cylinder_count(Side::Horizontal);
        let l = origami.cylinder_count(Side::Vertical);
        Self {
            origami,
            heights: alloc::vec![1.0; k],
            widths: alloc::vec![1.0; l],
        }
    }

    pub fn origami(&self) -> &Arc<Origami> {
        &self.origami
    }

    pub fn heights(&self) -> &[f64] {
        &self.heights
    }

    pub fn widths(&self) -> &[f64] {
        &self.widths
    }

    pub fn same_origami(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.origami, &other.origami) || self.origami == other.origami
    }

    /// Transverse size of cylinder `id`: height for horizontal, width for vertical.
    pub fn thickness(&self, id: CoreId) -> f64 {
        match id.side {
            Side::Horizontal => self.heights[id.index],
            Side::Vertical => self.widths[id.index],
        }
    }

    /// Flat length of the core of `id`, enclosed.
    pub fn circumference(&self, id: CoreId) -> ValueInterval {
        let n = self.origami.intersection_matrix();
        let mut acc = ValueInterval::point(0.0);
        match id.side {
            Side::Horizontal => {
                for (j, w) in self.widths.iter().enumerate() {
                    let c = n.get(id.index, j);
                    if c > 0 {
                        acc = acc + ValueInterval::point(c as f64) * ValueInterval::point(*w);
                    }
                }
            }
            Side::Vertical => {
                for (i, h) in self.heights.iter().enumerate() {
                    let c = n.get(i, id.index);
                    if c > 0 {
                        acc = acc + ValueInterval::point(c as f64) * ValueInterval::point(*h);
                    }
                }
            }
        }
        acc
    }

    /// `Σ n_ij · height_i · width_j`, enclosed.
    pub fn area_interval(&self) -> ValueInterval {
        let n = self.origami.intersection_matrix();
        let mut acc = ValueInterval::point(0.0);
        for (i, h) in self.heights.iter().enumerate() {
            for (j, w) in self.widths.iter().enumerate() {
                let c = n.get(i, j);
                if c > 0 {
                    acc = acc
                        + ValueInterval::point(c as f64)
                            * ValueInterval::point(*h)
                            * ValueInterval::point(*w);
                }
            }
        }
        acc
    }

    pub fn area(&self) -> f64 {
        let n = self.origami.intersection_matrix();
        let mut acc = 0.0;
        for (i, h) in self.heights.iter().enumerate() {
            for (j, w) in self.widths.iter().enumerate() {
                acc += n.get(i, j) as f64 * h * w;
            }
        }
        acc
    }

    /// Image under the Teichmüller flow for time `t`: widths ×e^t, heights ×e^−t.
    pub fn flowed(&self, t: f64) -> Self {
        let (up, down) = (math::exp(t), math::exp(-t));
        Self {
            origami: self.origami.clone(),
            heights: self.heights.iter().map(|h| h * down).collect(),
            widths: self.widths.iter().map(|w| w * up).collect(),
        }
    }

    /// Widths and heights multiplied by per-cylinder factors.
    pub fn rescaled(
        &self,
        height_factors: &[f64],
        width_factors: &[f64],
    ) -> Result<Self, SurfaceError> {
        let heights = self
            .heights
            .iter()
            .zip(height_factors)
            .map(|(h, f)| h * f)
            .collect();
        let widths = self
            .widths
            .iter()
            .zip(width_factors)
            .map(|(w, f)| w * f)
            .collect();
        Self::new(self.origami.clone(), heights, widths)
    }

    /// `F_v = Σ width_j β_j` or `F_h = Σ height_i α_i`.
    pub fn defining_foliation(&self, side: Side) -> WeightedMulticurve<f64> {
        let weights = match side {
            Side::Horizontal => self.heights.clone(),
            Side::Vertical => self.widths.clone(),
        };
        WeightedMulticurve::from_dense(self.origami.clone(), side, weights)
            .expect("surface weights are positive")
    }

    /// The same flat surface on the rotated origami (quarter turn): heights and
    /// widths trade places.
    pub fn rotated(&self, rotated: Arc<Origami>) -> Self {
        Self {
            origami: rotated,
            heights: self.widths.clone(),
            widths: self.heights.clone(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::origami::l_shaped;
    use alloc::vec;

    #[test]
    fn unit_l22_area() {
        let s = WeightedSurface::unit(Arc::new(l_shaped(2, 2)));
        assert_eq!(s.area(), 3.0);
        assert_eq!(s.area_interval(), ValueInterval::point(3.0));
    }

    #[test]
    fn golden_area_is_sqrt5() {
        let phi = (1.0 + math::sqrt(5.0)) / 2.0;
        let s = WeightedSurface::new(
            Arc::new(l_shaped(2, 2)),
            vec![1.0, 1.0 / phi],
            vec![1.0, 1.0 / phi],
        )
        .unwrap();
        assert!((s.area() - math::sqrt(5.0)).abs() < 1e-12);
        assert!(s.area_interval().contains_within(math::sqrt(5.0), 1e-15));
    }

    #[test]
    fn width_scaling_scales_area() {
        let o = Arc::new(l_shaped(3, 2));
        let s = WeightedSurface::new(o.clone(), vec![0.5, 2.0], vec![1.5, 0.25, 3.0]).unwrap();
        let t = s.rescaled(&[1.0, 1.0], &[3.0, 3.0, 3.0]).unwrap();
        assert!((t.area() - 3.0 * s.area()).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_weights() {
        let o = Arc::new(l_shaped(2, 2));
        assert!(matches!(
            WeightedSurface::new(o.clone(), vec![1.0], vec![1.0, 1.0]),
            Err(SurfaceError::LengthMismatch { .. })
        ));
        assert_eq!(
            WeightedSurface::new(o, vec![1.0, 0.0], vec![1.0, 1.0]),
            Err(SurfaceError::NonPositive(CoreId::horizontal(1)))
        );
    }

    #[test]
    fn flow_preserves_area() {
        let phi = (1.0 + math::sqrt(5.0)) / 2.0;
        let s = WeightedSurface::new(
            Arc::new(l_shaped(2, 2)),
            vec![1.0, 1.0 / phi],
            vec![1.0, 1.0 / phi],
        )
        .unwrap();
        let t = s.flowed(1.0);
        let e = core::f64::consts::E;
        assert!((t.widths()[0] - e).abs() < 1e-14);
        assert!((t.heights()[1] - 1.0 / (phi * e)).abs() < 1e-14);
        assert!((t.area() - s.area()).abs() < 1e-12);
    }
}

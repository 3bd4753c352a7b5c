//! Extremal lengths and Teichmüller distances on weighted origamis.
//!
//! The defining foliations have exact extremal length (`Ext_X(F_v) = area`).
//! Other multicurves get certified two-sided bounds: Minsky's inequality
//! against the defining foliations from below, disjoint flat annuli from
//! above. Distances are bracketed by Kerckhoff's formula restricted to a finite
//! family (below) and the dilatation of the cellwise affine map (above).

use super::{CoreId, Side, SurfaceError, WeightedSurface};
use crate::interval::{div_down, div_up, mul_down, mul_up, DistanceInterval, ValueInterval};
use crate::multicurve::WeightedMulticurve;

/// Relative spread of weight ratios accepted as "proportional".
pub const PROPORTIONALITY_TOL: f64 = 1e-9;

/// Slack allowed between the two distance bounds before it is reported as a
/// certification failure.
pub const DISTANCE_TOL: f64 = 1e-12;

fn check_host(x: &WeightedSurface, mc: &WeightedMulticurve<f64>) -> Result<(), SurfaceError> {
    let (a, b) = (x.origami(), mc.host());
    if alloc::sync::Arc::ptr_eq(a, b) || **a == **b {
        Ok(())
    } else {
        Err(SurfaceError::OrigamiMismatch)
    }
}

/// `Ext_X(r·F)` for `F` the defining foliation of `side`: `r² · area`.
pub fn foliation_ext(x: &WeightedSurface, _side: Side, r: f64) -> f64 {
    r * r * x.area()
}

/// Ratio `r` with `mc ≈ r · (defining foliation of mc's side)`, or `None` if
/// `mc` misses a cylinder or its weight ratios spread by more than
/// [`PROPORTIONALITY_TOL`].
pub fn proportionality(x: &WeightedSurface, mc: &WeightedMulticurve<f64>) -> Option<f64> {
    if check_host(x, mc).is_err() || !mc.is_full() {
        return None;
    }
    let defining = match mc.side() {
        Side::Horizontal => x.heights(),
        Side::Vertical => x.widths(),
    };
    let mut lo = f64::INFINITY;
    let mut hi = 0.0f64;
    let (mut num, mut den) = (0.0, 0.0);
    for (i, u) in mc.components() {
        let r = u / defining[*i];
        lo = lo.min(r);
        hi = hi.max(r);
        num += u;
        den += defining[*i];
    }
    (hi - lo <= PROPORTIONALITY_TOL * hi).then_some(num / den)
}

/// Extremal length of a multicurve proportional to a defining foliation.
pub fn foliation_ext_of(
    x: &WeightedSurface,
    mc: &WeightedMulticurve<f64>,
) -> Result<f64, SurfaceError> {
    check_host(x, mc)?;
    let r = proportionality(x, mc).ok_or(SurfaceError::NotProportional)?;
    Ok(foliation_ext(x, mc.side(), r))
}

/// `i(mc, F)` for `F` the defining foliation of the opposite side.
fn transverse_intersection(x: &WeightedSurface, mc: &WeightedMulticurve<f64>) -> ValueInterval {
    let side = mc.side();
    mc.components()
        .iter()
        .fold(ValueInterval::point(0.0), |acc, (i, u)| {
            acc + ValueInterval::point(*u) * x.circumference(CoreId { side, index: *i })
        })
}

/// Certified enclosure of `Ext_X(mc)`.
///
/// Lower bound: `max_F i(mc, F)² / Ext_X(F)` over the two defining foliations
/// (only the opposite-side one pairs non-trivially). Upper bound:
/// `Σ w² · circumference / thickness` over the disjoint flat cylinders.
pub fn curve_ext_bounds(
    x: &WeightedSurface,
    mc: &WeightedMulticurve<f64>,
) -> Result<ValueInterval, SurfaceError> {
    check_host(x, mc)?;
    let area = x.area_interval();
    let lo = transverse_intersection(x, mc).sqr() / area;
    let side = mc.side();
    let hi = mc
        .components()
        .iter()
        .fold(ValueInterval::point(0.0), |acc, (i, u)| {
            let id = CoreId { side, index: *i };
            let w = ValueInterval::point(*u);
            acc + w.sqr() * x.circumference(id) / ValueInterval::point(x.thickness(id))
        });
    Ok(ValueInterval::new(lo.lo, hi.hi)?)
}

/// Upper bound for `d_T(X, Y)`: half the log of the largest dilatation of the
/// cellwise affine map `X → Y`.
pub fn qc_upper(x: &WeightedSurface, y: &WeightedSurface) -> Result<f64, SurfaceError> {
    if !x.same_origami(y) {
        return Err(SurfaceError::OrigamiMismatch);
    }
    let n = x.origami().intersection_matrix();
    let mut k = 1.0f64;
    for (i, (hx, hy)) in x.heights().iter().zip(y.heights()).enumerate() {
        for (j, (wx, wy)) in x.widths().iter().zip(y.widths()).enumerate() {
            if n.get(i, j) == 0 || (wx == wy && hx == hy) {
                continue;
            }
            // horizontal stretch wy/wx against vertical stretch hy/hx
            let (a_lo, a_hi) = (mul_down(*wy, *hx), mul_up(*wy, *hx));
            let (b_lo, b_hi) = (mul_down(*wx, *hy), mul_up(*wx, *hy));
            k = k.max(div_up(a_hi, b_lo)).max(div_up(b_hi, a_lo));
        }
    }
    Ok(ValueInterval::point(k).ln().hi * 0.5)
}

/// Lower bound for `d_T(X, Y)` from Kerckhoff's formula over `family`, using
/// certified extremal-length bounds in both directions.
pub fn kerckhoff_lower(
    x: &WeightedSurface,
    y: &WeightedSurface,
    family: &[WeightedMulticurve<f64>],
) -> Result<f64, SurfaceError> {
    if family.is_empty() {
        return Err(SurfaceError::EmptyFamily);
    }
    if !x.same_origami(y) {
        return Err(SurfaceError::OrigamiMismatch);
    }
    let mut best = 1.0f64;
    for gamma in family {
        let ex = curve_ext_bounds(x, gamma)?;
        let ey = curve_ext_bounds(y, gamma)?;
        best = best.max(div_down(ey.lo, ex.hi)).max(div_down(ex.lo, ey.hi));
    }
    if best <= 1.0 {
        return Ok(0.0);
    }
    Ok((ValueInterval::point(best).ln().lo * 0.5).max(0.0))
}

/// `[kerckhoff_lower, qc_upper]`.
pub fn distance_interval(
    x: &WeightedSurface,
    y: &WeightedSurface,
    family: &[WeightedMulticurve<f64>],
) -> Result<DistanceInterval, SurfaceError> {
    let lo = kerckhoff_lower(x, y, family)?;
    let hi = qc_upper(x, y)?;
    Ok(DistanceInterval::from_bounds(lo, hi, DISTANCE_TOL)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::origami::l_shaped;
    use alloc::sync::Arc;
    use alloc::vec;
    use alloc::vec::Vec;

    fn unit() -> WeightedSurface {
        WeightedSurface::unit(Arc::new(l_shaped(2, 2)))
    }

    fn core(x: &WeightedSurface, id: CoreId) -> WeightedMulticurve<f64> {
        WeightedMulticurve::core(x.origami().clone(), id).unwrap()
    }

    #[test]
    fn defining_foliation_ext_is_area() {
        let x = unit();
        assert_eq!(foliation_ext(&x, Side::Vertical, 1.0), 3.0);
        assert_eq!(foliation_ext(&x, Side::Vertical, 2.0), 12.0);
        let fv = x.defining_foliation(Side::Vertical);
        assert_eq!(foliation_ext_of(&x, &fv).unwrap(), 3.0);
        assert_eq!(foliation_ext_of(&x, &fv.scaled(&2.0)).unwrap(), 12.0);
    }

    #[test]
    fn non_proportional_rejected() {
        let x = unit();
        let a1 = core(&x, CoreId::horizontal(0));
        assert_eq!(
            foliation_ext_of(&x, &a1),
            Err(SurfaceError::NotProportional)
        );
        let skew =
            WeightedMulticurve::from_dense(x.origami().clone(), Side::Vertical, vec![1.0, 2.0])
                .unwrap();
        assert_eq!(
            foliation_ext_of(&x, &skew),
            Err(SurfaceError::NotProportional)
        );
    }

    #[test]
    fn alpha1_bounds_on_unit_l22() {
        let x = unit();
        let b = curve_ext_bounds(&x, &core(&x, CoreId::horizontal(0))).unwrap();
        assert!((b.lo - 4.0 / 3.0).abs() < 1e-15 && b.lo <= 4.0 / 3.0);
        assert_eq!(b.hi, 2.0);
    }

    #[test]
    fn defining_multicurve_bounds_collapse_to_area() {
        let x = unit();
        let b = curve_ext_bounds(&x, &x.defining_foliation(Side::Vertical)).unwrap();
        assert!(b.contains(3.0));
        assert!(b.width() < 1e-14);
    }

    #[test]
    fn width_doubling_distance() {
        let x = unit();
        let y = WeightedSurface::new(x.origami().clone(), vec![1.0, 1.0], vec![2.0, 2.0]).unwrap();
        let fam = [x.defining_foliation(Side::Vertical)];
        let half_ln2 = 0.5 * core::f64::consts::LN_2;
        // Ext_Y(F_v) = 3/2
        let ey = curve_ext_bounds(&y, &fam[0]).unwrap();
        assert!(ey.contains(1.5));
        assert!((qc_upper(&x, &y).unwrap() - half_ln2).abs() < 1e-15);
        assert!((kerckhoff_lower(&x, &y, &fam).unwrap() - half_ln2).abs() < 1e-15);
        let d = distance_interval(&x, &y, &fam).unwrap();
        assert!(d.width() <= 1e-12);
        assert!(d.contains_within(half_ln2, 0.0));
    }

    #[test]
    fn identical_surfaces_at_distance_zero() {
        let x = unit();
        let fam = [x.defining_foliation(Side::Vertical)];
        assert_eq!(qc_upper(&x, &x).unwrap(), 0.0);
        assert_eq!(kerckhoff_lower(&x, &x, &fam).unwrap(), 0.0);
        let d = distance_interval(&x, &x, &fam).unwrap();
        assert_eq!((d.lo, d.hi), (0.0, 0.0));
    }

    #[test]
    fn flow_pair_distance_is_time() {
        let phi = (1.0 + crate::math::sqrt(5.0)) / 2.0;
        let x = WeightedSurface::new(
            Arc::new(l_shaped(2, 2)),
            vec![1.0, 1.0 / phi],
            vec![1.0, 1.0 / phi],
        )
        .unwrap();
        let fam: Vec<_> = [Side::Vertical, Side::Horizontal]
            .iter()
            .map(|s| x.defining_foliation(*s))
            .collect();
        for t in [0.25, 1.0, 3.0] {
            let y = x.flowed(t);
            let d = distance_interval(&x, &y, &fam).unwrap();
            assert!(d.width() <= 1e-12, "{t}: {d:?}");
            assert!(d.contains_within(t, 1e-12));
        }
    }

    #[test]
    fn empty_family_rejected() {
        let x = unit();
        assert_eq!(kerckhoff_lower(&x, &x, &[]), Err(SurfaceError::EmptyFamily));
    }
}

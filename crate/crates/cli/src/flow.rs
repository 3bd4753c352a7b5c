//! The flow table: `G(t)` sampled on a time grid.

use std::io::Write;

use horogeo_core::horo::{busemann_interval, busemann_monotonicity, psi_foliation};
use horogeo_core::origami::foliation_ext_of;
use horogeo_core::{CoreId, GeodesicLine, Side};

use crate::config::RunConfig;
use crate::error::CliError;
use crate::fmt::sig15;

/// Tolerance on `psi_fv = −t` and `psi_fh = +t`.
pub const OPTIMALITY_TOL: f64 = 1e-12;

/// One row of the table, unformatted.
#[derive(Debug, Clone, PartialEq)]
pub struct FlowRow {
    pub t: f64,
    pub widths: Vec<f64>,
    pub heights: Vec<f64>,
    pub ext_fv: f64,
    pub ext_fh: f64,
    pub psi_fv: f64,
    pub psi_fh: f64,
    pub busemann_lo: f64,
    pub busemann_hi: f64,
    pub d_to_base: f64,
}

pub fn header(line: &GeodesicLine) -> Vec<String> {
    let o = line.origami();
    let mut h = vec!["t".to_string()];
    h.extend(
        (0..o.cylinder_count(Side::Vertical)).map(|i| format!("width_{}", CoreId::vertical(i))),
    );
    h.extend(
        (0..o.cylinder_count(Side::Horizontal))
            .map(|i| format!("height_{}", CoreId::horizontal(i))),
    );
    h.extend(
        [
            "ext_fv",
            "ext_fh",
            "psi_fv",
            "psi_fh",
            "busemann_lo",
            "busemann_hi",
            "d_to_base",
        ]
        .iter()
        .map(|s| s.to_string()),
    );
    h
}

/// Samples the grid and checks unit-speed optimality on every row.
pub fn flow_rows(line: &GeodesicLine, cfg: &RunConfig) -> Result<Vec<FlowRow>, CliError> {
    cfg.validate()?;
    let x0 = line.point_at(0.0);
    let family = line.defining_family();
    let horizon = cfg.horizon();
    let grid = cfg.t_grid();
    if grid.iter().any(|t| *t > horizon) {
        return Err(CliError::input(format!(
            "horizon {horizon} lies inside the time grid"
        )));
    }
    let mut rows = Vec::with_capacity(grid.len());
    for t in grid {
        let x = line.point_at(t);
        let psi_fv = psi_foliation(line.f_vert(), &x, &x0)?;
        let psi_fh = psi_foliation(line.f_hor(), &x, &x0)?;
        if (psi_fv + t).abs() > OPTIMALITY_TOL || (psi_fh - t).abs() > OPTIMALITY_TOL {
            return Err(CliError::certificate(format!(
                "optimality fails at t = {t}: psi_fv = {psi_fv}, psi_fh = {psi_fh}"
            )));
        }
        busemann_monotonicity(line, &x, &[t.max(cfg.t_max), horizon], &family)?;
        let b = busemann_interval(line, &x, &x0, horizon, &family)?;
        rows.push(FlowRow {
            t,
            widths: x.widths().to_vec(),
            heights: x.heights().to_vec(),
            ext_fv: foliation_ext_of(&x, line.f_vert())?,
            ext_fh: foliation_ext_of(&x, line.f_hor())?,
            psi_fv,
            psi_fh,
            busemann_lo: b.lo,
            busemann_hi: b.hi,
            d_to_base: line.flow_distance(0.0, t)?,
        });
    }
    Ok(rows)
}

pub fn write_csv(line: &GeodesicLine, rows: &[FlowRow], out: impl Write) -> Result<(), CliError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(header(line))?;
    for r in rows {
        let mut rec = vec![sig15(r.t)];
        rec.extend(r.widths.iter().chain(&r.heights).map(|v| sig15(*v)));
        rec.extend(
            [
                r.ext_fv,
                r.ext_fh,
                r.psi_fv,
                r.psi_fh,
                r.busemann_lo,
                r.busemann_hi,
                r.d_to_base,
            ]
            .iter()
            .map(|v| sig15(*v)),
        );
        w.write_record(rec)?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use horogeo_core::origami::l_shaped;
    use horogeo_core::{optimal_geodesic, BusemannSpec, PerronOptions};
    use std::sync::Arc;

    fn golden() -> GeodesicLine {
        let o = Arc::new(l_shaped(2, 2));
        optimal_geodesic(
            &BusemannSpec::unit(o.clone(), Side::Vertical),
            &BusemannSpec::unit(o, Side::Horizontal),
            &PerronOptions::default(),
        )
        .unwrap()
    }

    #[test]
    fn golden_table() {
        let line = golden();
        let rows = flow_rows(&line, &RunConfig::default()).unwrap();
        assert_eq!(rows.len(), 13);
        let s5 = 5f64.sqrt();
        for r in &rows {
            assert!((r.ext_fv - s5 * (-2.0 * r.t).exp()).abs() <= 1e-12 * r.ext_fv.max(1.0));
            assert!(r.busemann_lo <= r.busemann_hi);
            assert!((r.busemann_lo + r.t).abs() < 1e-9 && (r.busemann_hi + r.t).abs() < 1e-9);
            assert_eq!(r.d_to_base, r.t.abs());
        }
        assert_eq!(rows[6].t, 0.0);
        assert_eq!(rows[6].psi_fv, 0.0);
        let mut buf = Vec::new();
        write_csv(&line, &rows, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().count(), 14);
        assert!(text.starts_with(
            "t,width_B1,width_B2,height_A1,height_A2,ext_fv,ext_fh,psi_fv,psi_fh,busemann_lo,busemann_hi,d_to_base\n"
        ));
    }

    #[test]
    fn empty_grid_rejected() {
        let cfg = RunConfig {
            t_min: 1.0,
            t_max: 0.0,
            ..RunConfig::default()
        };
        assert_eq!(flow_rows(&golden(), &cfg).unwrap_err().exit_code(), 2);
    }
}

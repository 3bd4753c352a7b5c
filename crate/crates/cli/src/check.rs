//! Seeded invariant suites over built-in and random instances.

use std::sync::Arc;

use horogeo_core::geodesic::{cosine, walsh_values, CoreValues, WALSH_COSINE_MIN};
use horogeo_core::horo::{lower_bound_audit, minsky_audit, psi_foliation, sandwich_audit};
use horogeo_core::matrix::Matrix;
use horogeo_core::origami::{
    catalog, distance_interval, kerckhoff_lower, l_shaped, qc_upper, Combinatorics,
};
use horogeo_core::perron::{gram, is_primitive};
use horogeo_core::{
    optimal_geodesic, perron_solve, BusemannSpec, Coeff, CoreId, GeodesicLine, IntersectionMatrix,
    Origami, PerronOptions, Rational, Side, ValueInterval, WeightedMulticurve, WeightedSurface,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::config::RunConfig;
use crate::converge::converge;
use crate::error::CliError;
use crate::fmt::sig15;
use crate::oracle;

pub const SUITES: [&str; 9] = [
    "structure",
    "perron",
    "walsh",
    "optimality",
    "distance",
    "minsky",
    "sandwich",
    "intervals",
    "convergence",
];

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SuiteReport {
    pub name: &'static str,
    pub seed: u64,
    pub cases: usize,
    pub status: &'static str,
    /// Smallest slack seen over the suite's inequalities, when it has any.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub worst_margin: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CheckReport {
    pub seed: u64,
    pub tolerance: String,
    pub suites: Vec<SuiteReport>,
}

impl CheckReport {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

/// Running tally for one suite; the first failed invariant aborts the run.
struct Tally {
    name: &'static str,
    cases: usize,
    margin: Option<f64>,
}

impl Tally {
    fn new(name: &'static str) -> Self {
        Self {
            name,
            cases: 0,
            margin: None,
        }
    }

    fn ensure(&mut self, ok: bool, what: impl FnOnce() -> String) -> Result<(), CliError> {
        self.cases += 1;
        if ok {
            Ok(())
        } else {
            Err(CliError::certificate(format!("{}: {}", self.name, what())))
        }
    }

    /// `lhs ≤ rhs`, recording the slack.
    fn le(&mut self, lhs: f64, rhs: f64, what: &str) -> Result<(), CliError> {
        let m = rhs - lhs;
        self.margin = Some(self.margin.map_or(m, |x| x.min(m)));
        self.ensure(lhs <= rhs, || format!("{what}: {lhs} > {rhs}"))
    }
}

fn lift<T, E: Into<CliError>>(name: &str, r: Result<T, E>) -> Result<T, CliError> {
    r.map_err(|e| match e.into() {
        CliError::Input(m) | CliError::Certificate(m) => {
            CliError::certificate(format!("{name}: {m}"))
        }
        CliError::Hypothesis(m) => {
            CliError::certificate(format!("{name}: unexpected hypothesis failure: {m}"))
        }
        CliError::Convergence(m) => CliError::Convergence(format!("{name}: {m}")),
    })
}

/// Unit Busemann points on both sides of L(2,2).
pub fn golden(opts: &PerronOptions) -> Result<GeodesicLine, CliError> {
    let o = Arc::new(l_shaped(2, 2));
    let xi = BusemannSpec::unit(o.clone(), Side::Vertical);
    let eta = BusemannSpec::unit(o, Side::Horizontal);
    Ok(optimal_geodesic(&xi, &eta, opts)?)
}

/// Random primitive `N` (k, l ≤ 4, entries ≤ 3) realized as an origami,
/// with random coefficients on every core.
pub fn random_line(rng: &mut ChaCha8Rng, opts: &PerronOptions) -> Result<GeodesicLine, CliError> {
    loop {
        let k = rng.random_range(1..=4);
        let l = rng.random_range(1..=4);
        let im = IntersectionMatrix::new(oracle::random_matrix(rng, k, l, 3))?;
        if !is_primitive(&im) {
            continue;
        }
        let Ok(o) = Origami::realize(&im) else {
            continue;
        };
        let o = Arc::new(o);
        let mut spec = |side: Side| {
            let coeffs: Vec<(usize, Coeff)> = (0..o.cylinder_count(side))
                .map(|i| (i, Coeff::Approx(rng.random_range(0.25..4.0))))
                .collect();
            BusemannSpec::new(o.clone(), side, coeffs)
        };
        let xi = spec(Side::Vertical)?;
        let eta = spec(Side::Horizontal)?;
        return Ok(optimal_geodesic(&xi, &eta, opts)?);
    }
}

pub fn core_family(o: &Arc<Origami>) -> Result<Vec<WeightedMulticurve<f64>>, CliError> {
    o.cores()
        .into_iter()
        .map(|id| Ok(WeightedMulticurve::core(o.clone(), id)?))
        .collect()
}

pub fn random_surface(rng: &mut ChaCha8Rng, o: &Arc<Origami>) -> Result<WeightedSurface, CliError> {
    let h = (0..o.cylinder_count(Side::Horizontal))
        .map(|_| rng.random_range(0.2..5.0))
        .collect();
    let w = (0..o.cylinder_count(Side::Vertical))
        .map(|_| rng.random_range(0.2..5.0))
        .collect();
    Ok(WeightedSurface::new(o.clone(), h, w)?)
}

pub fn jitter(
    rng: &mut ChaCha8Rng,
    x: &WeightedSurface,
    eps: f64,
) -> Result<WeightedSurface, CliError> {
    let hf: Vec<f64> = x
        .heights()
        .iter()
        .map(|_| rng.random_range(-eps..eps).exp())
        .collect();
    let wf: Vec<f64> = x
        .widths()
        .iter()
        .map(|_| rng.random_range(-eps..eps).exp())
        .collect();
    Ok(x.rescaled(&hf, &wf)?)
}

fn structure_of(t: &mut Tally, h: &[usize], v: &[usize]) -> Result<(), CliError> {
    let n = h.len();
    let comb = Combinatorics::analyze(h, v)?;
    let corners = oracle::corner_classes(h, v);
    t.ensure(corners.iter().all(|c| c % 4 == 0), || {
        format!("corner count not a multiple of 4 for {h:?}, {v:?}")
    })?;
    let mut corners: Vec<usize> = corners.into_iter().map(|c| c / 4).collect();
    corners.sort();
    let mut cones = comb.cone_angles.clone();
    cones.sort();
    t.ensure(cones == corners, || {
        format!("cone angles {cones:?} vs corner oracle {corners:?}")
    })?;
    let chi = corners.len() as i64 - n as i64;
    t.ensure(
        comb.euler_characteristic == chi && 2 - 2 * comb.genus as i64 == chi,
        || {
            format!(
                "Euler characteristic {} vs {chi}",
                comb.euler_characteristic
            )
        },
    )?;
    t.ensure(comb.angle_excess() == 2 * comb.genus as i64 - 2, || {
        "Gauss-Bonnet".into()
    })?;
    let m = comb.intersection_matrix();
    let rows: Vec<u64> = comb
        .horizontal
        .iter()
        .map(|c| c.squares.len() as u64)
        .collect();
    let cols: Vec<u64> = comb
        .vertical
        .iter()
        .map(|c| c.squares.len() as u64)
        .collect();
    t.ensure(
        m.row_sums() == rows && m.col_sums() == cols && m.total() == n as u64,
        || format!("row/column partition of N fails for {h:?}, {v:?}"),
    )
}

fn structure(rng: &mut ChaCha8Rng, t: &mut Tally) -> Result<(), CliError> {
    let cat = catalog();
    t.ensure(cat.len() >= 5, || "catalog too small".into())?;
    let mut genera: Vec<usize> = cat.iter().map(|(_, o)| o.genus()).collect();
    genera.sort();
    genera.dedup();
    t.ensure(genera == [2, 3], || format!("catalog genera {genera:?}"))?;
    for (_, o) in &cat {
        structure_of(t, o.h(), o.v())?;
    }
    for k in 0..100 {
        let (h, v) = oracle::random_transitive_pair(rng, 2 + k % 11);
        structure_of(t, &h, &v)?;
    }
    Ok(())
}

fn to_f64(t: &[Vec<u64>]) -> Vec<Vec<f64>> {
    t.iter()
        .map(|r| r.iter().map(|&x| x as f64).collect())
        .collect()
}

fn perron(rng: &mut ChaCha8Rng, t: &mut Tally, cfg: &RunConfig) -> Result<(), CliError> {
    let opts = PerronOptions {
        tol: cfg.tolerance,
        seed: cfg.seed,
        ..PerronOptions::default()
    };
    let matrix = |rows: Vec<Vec<f64>>| Matrix::from_rows(rows).expect("rectangular");

    // λ² − 3λ + 1 = 0
    let r = lift(
        "perron",
        perron_solve(&matrix(vec![vec![2.0, 1.0], vec![1.0, 1.0]]), &opts),
    )?;
    let s5 = 5f64.sqrt();
    t.le(
        (r.lambda - (3.0 + s5) / 2.0).abs(),
        1e-10,
        "golden eigenvalue",
    )?;
    t.le(
        (r.x[1] / r.x[0] - (s5 - 1.0) / 2.0).abs(),
        1e-8,
        "golden ray",
    )?;
    t.le(r.residual, 1e-12, "golden residual")?;

    let mut closed_form = 0;
    for _ in 0..1500 {
        let k = rng.random_range(1..=3);
        let l = rng.random_range(1..=3);
        let n = oracle::random_matrix(rng, k, l, 3);
        if !is_primitive(&IntersectionMatrix::new(n.clone())?) {
            continue;
        }
        let g = to_f64(&oracle::gram(&n));
        let want = oracle::sym_top_eigenvalue(&g);
        let got = lift("perron", perron_solve(&matrix(g), &opts))?;
        t.le(
            (got.lambda - want).abs(),
            1e-10 * want.max(1.0),
            "closed-form eigenvalue",
        )?;
        closed_form += 1;
    }
    t.ensure(closed_form > 300, || {
        format!("only {closed_form} primitive instances")
    })?;

    let (mut yes, mut no) = (0, 0);
    for _ in 0..500 {
        let k = rng.random_range(1..=5);
        let l = rng.random_range(1..=5);
        let max = rng.random_range(1..=3);
        let mut n = oracle::random_matrix(rng, k, l, max);
        for x in n.iter_mut().flatten() {
            if rng.random_bool(0.4) {
                *x = 0;
            }
        }
        let im = IntersectionMatrix::new(n.clone())?;
        let fast = is_primitive(&im);
        t.ensure(fast == oracle::brute_force_primitive(&n), || {
            format!("primitivity disagrees on {n:?}")
        })?;
        t.ensure(gram(&im).to_rows() == oracle::gram(&n), || {
            format!("Gram matrix of {n:?}")
        })?;
        if fast {
            yes += 1;
        } else {
            no += 1;
        }
    }
    t.ensure(yes > 0 && no > 0, || {
        format!("degenerate primitivity sample {yes}/{no}")
    })?;

    let mut done = 0;
    while done < 50 {
        let (k, l) = (rng.random_range(1..=5), rng.random_range(1..=5));
        let n = oracle::random_matrix(rng, k, l, 3);
        if !is_primitive(&IntersectionMatrix::new(n.clone())?) {
            continue;
        }
        let g = matrix(to_f64(&oracle::gram(&n)));
        let a = lift("perron", perron_solve(&g, &opts))?;
        let b = lift(
            "perron",
            perron_solve(
                &g,
                &PerronOptions {
                    seed: opts.seed ^ 0x5eed,
                    ..opts
                },
            ),
        )?;
        let dev =
            a.x.iter()
                .zip(&b.x)
                .map(|(u, v)| (u - v).abs())
                .fold(0.0, f64::max);
        t.le(dev, 1e-8, "restart ray agreement")?;
        done += 1;
    }
    Ok(())
}

fn flip(v: CoreValues) -> CoreValues {
    let mut v: CoreValues = v
        .into_iter()
        .map(|(id, x)| {
            (
                CoreId {
                    side: id.side.opposite(),
                    index: id.index,
                },
                x,
            )
        })
        .collect();
    v.sort_by_key(|(id, _)| (id.side != Side::Horizontal, id.index));
    v
}

fn walsh(rng: &mut ChaCha8Rng, t: &mut Tally, opts: &PerronOptions) -> Result<(), CliError> {
    let mut lines = vec![lift("walsh", golden(opts))?];
    for _ in 0..50 {
        lines.push(lift("walsh", random_line(rng, opts))?);
    }
    for g in &lines {
        let f = cosine(&g.forward_limit(), &walsh_values(g.xi()));
        let b = cosine(&g.backward_limit(), &walsh_values(g.eta()));
        t.le(WALSH_COSINE_MIN, f, "forward Walsh cosine")?;
        t.le(WALSH_COSINE_MIN, b, "backward Walsh cosine")?;
        let r = g.reversed();
        t.ensure(g.backward_limit() == flip(r.forward_limit()), || {
            "time reversal of limits".into()
        })?;
    }
    Ok(())
}

fn optimality(
    rng: &mut ChaCha8Rng,
    t: &mut Tally,
    cfg: &RunConfig,
    opts: &PerronOptions,
) -> Result<(), CliError> {
    let mut lines = vec![lift("optimality", golden(opts))?];
    for _ in 0..10 {
        lines.push(lift("optimality", random_line(rng, opts))?);
    }
    for g in &lines {
        let x0 = g.point_at(0.0);
        for s in cfg.t_grid() {
            let x = g.point_at(s);
            let fv = lift("optimality", psi_foliation(g.f_vert(), &x, &x0))?;
            let fh = lift("optimality", psi_foliation(g.f_hor(), &x, &x0))?;
            t.le((fv + s).abs(), 1e-12, "psi_fv = -t")?;
            t.le((fh - s).abs(), 1e-12, "psi_fh = +t")?;
            let d = lift("optimality", g.flow_distance(0.0, s))?;
            t.ensure(d == s.abs(), || format!("flow distance {d} at t = {s}"))?;
        }
    }
    Ok(())
}

fn distance(rng: &mut ChaCha8Rng, t: &mut Tally) -> Result<(), CliError> {
    let o = Arc::new(l_shaped(2, 2));
    let x = WeightedSurface::unit(o.clone());
    let y = WeightedSurface::new(o, vec![1.0, 1.0], vec![2.0, 2.0])?;
    let d = lift(
        "distance",
        distance_interval(&x, &y, &[x.defining_foliation(Side::Vertical)]),
    )?;
    let want = 0.5 * 2f64.ln();
    t.le(
        (d.lo - want).abs().max((d.hi - want).abs()),
        1e-12,
        "width doubling",
    )?;
    let cat = catalog();
    for k in 0..200 {
        let o = Arc::new(cat[k % cat.len()].1.clone());
        let fam = core_family(&o)?;
        let x = random_surface(rng, &o)?;
        let y = random_surface(rng, &o)?;
        let lo = lift("distance", kerckhoff_lower(&x, &y, &fam))?;
        let hi = lift("distance", qc_upper(&x, &y))?;
        t.le(lo, hi, "kerckhoff_lower <= qc_upper")?;
    }
    Ok(())
}

fn minsky(rng: &mut ChaCha8Rng, t: &mut Tally) -> Result<(), CliError> {
    let cat = catalog();
    for k in 0..100 {
        let o = Arc::new(cat[k % cat.len()].1.clone());
        let fam = core_family(&o)?;
        let pairs: Vec<_> = fam
            .iter()
            .flat_map(|a| fam.iter().map(move |b| (a.clone(), b.clone())))
            .collect();
        let x = random_surface(rng, &o)?;
        let r = lift("minsky", minsky_audit(&x, &pairs))?;
        for e in &r.entries {
            t.le(e.lhs, e.rhs, "i(a,b)^2 <= Ext(a) Ext(b)")?;
        }
        t.ensure(r.defining.0.meet(r.defining.1).is_some(), || {
            format!("defining pair: {} vs {}", r.defining.0, r.defining.1)
        })?;
    }
    Ok(())
}

fn sandwich(rng: &mut ChaCha8Rng, t: &mut Tally, opts: &PerronOptions) -> Result<(), CliError> {
    let g = lift("sandwich", golden(opts))?;
    let fam = core_family(g.origami())?;
    let x0 = g.point_at(0.0);
    for _ in 0..100 {
        let s = rng.random_range(-2.0..2.0);
        let x = jitter(rng, &g.point_at(s), 0.3)?;
        let e = lift("sandwich", sandwich_audit(&g, &x, &x0, 7.0, &fam))?;
        t.le(e.psi_fv.lo, e.busemann.hi, "Psi_F <= B_xi")?;
    }
    for e in lift("sandwich", lower_bound_audit(&g, &g.origami().cores()))? {
        t.le(e.lhs.lo, e.rhs.hi, "i(F_v, g)/sqrt(area) <= i(xi, g)")?;
    }
    Ok(())
}

fn intervals(rng: &mut ChaCha8Rng, t: &mut Tally) -> Result<(), CliError> {
    let q = |x: f64| Rational::from_float(x).expect("finite");
    let encloses = |iv: ValueInterval, exact: &Rational| q(iv.lo) <= *exact && *exact <= q(iv.hi);
    for _ in 0..500 {
        let mut pick = || -> f64 {
            match rng.random_range(0..3) {
                0 => rng.random_range(-1e6..1e6),
                1 => rng.random_range(-1.0..1.0),
                _ => rng.random_range(1e-8..1e-3),
            }
        };
        let (a, b) = (pick(), pick());
        let (x, y) = (ValueInterval::point(a), ValueInterval::point(b));
        let (qa, qb) = (q(a), q(b));
        t.ensure(encloses(x + y, &(&qa + &qb)), || format!("{a} + {b}"))?;
        t.ensure(encloses(x - y, &(&qa - &qb)), || format!("{a} - {b}"))?;
        t.ensure(encloses(x * y, &(&qa * &qb)), || format!("{a} * {b}"))?;
        if b != 0.0 {
            t.ensure(encloses(x / y, &(&qa / &qb)), || format!("{a} / {b}"))?;
        }
        let m = a.abs();
        let r = ValueInterval::point(m).sqrt();
        let qm = q(m);
        t.ensure(q(r.lo) * q(r.lo) <= qm && qm <= q(r.hi) * q(r.hi), || {
            format!("sqrt {m}")
        })?;
        if m > 0.0 {
            t.ensure(ValueInterval::point(m).ln().exp().contains(m), || {
                format!("exp(ln {m})")
            })?;
        }
    }
    Ok(())
}

fn convergence(t: &mut Tally, cfg: &RunConfig, opts: &PerronOptions) -> Result<(), CliError> {
    let g = lift("convergence", golden(opts))?;
    let r = lift("convergence", converge(&g, cfg))?;
    for row in &r.rows {
        t.ensure(row.gap == row.n.to_string(), || {
            format!("gap {} at n = {}", row.gap, row.n)
        })?;
    }
    Ok(())
}

/// Runs the selected suites (all when `only` is empty) in a fixed order.
pub fn run_checks(cfg: &RunConfig, only: &[String]) -> Result<CheckReport, CliError> {
    cfg.validate()?;
    for s in only {
        if !SUITES.contains(&s.as_str()) {
            return Err(CliError::input(format!(
                "unknown suite {s:?}; known: {}",
                SUITES.join(", ")
            )));
        }
    }
    let opts = PerronOptions {
        tol: cfg.tolerance,
        seed: cfg.seed,
        ..PerronOptions::default()
    };
    let mut suites = Vec::new();
    for (k, name) in SUITES.iter().enumerate() {
        if !only.is_empty() && !only.iter().any(|s| s == name) {
            continue;
        }
        let seed = cfg.seed.wrapping_add(k as u64);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut t = Tally::new(name);
        match *name {
            "structure" => structure(&mut rng, &mut t),
            "perron" => perron(&mut rng, &mut t, cfg),
            "walsh" => walsh(&mut rng, &mut t, &opts),
            "optimality" => optimality(&mut rng, &mut t, cfg, &opts),
            "distance" => distance(&mut rng, &mut t),
            "minsky" => minsky(&mut rng, &mut t),
            "sandwich" => sandwich(&mut rng, &mut t, &opts),
            "intervals" => intervals(&mut rng, &mut t),
            "convergence" => convergence(&mut t, cfg, &opts),
            _ => unreachable!("suite list and dispatch agree"),
        }
        .map_err(|e| match e {
            CliError::Certificate(m) if !m.starts_with(name) => {
                CliError::certificate(format!("{name}: {m}"))
            }
            other => other,
        })?;
        suites.push(SuiteReport {
            name,
            seed,
            cases: t.cases,
            status: "pass",
            worst_margin: t.margin.map(sig15),
        });
    }
    Ok(CheckReport {
        seed: cfg.seed,
        tolerance: sig15(cfg.tolerance),
        suites,
    })
}

mod common;

use std::sync::Arc;

use horogeo_core::geodesic::{cosine, walsh_values, CoreValues, WALSH_COSINE_MIN};
use horogeo_core::horo::{
    busemann_interval, lower_bound_audit, minsky_audit, psi_foliation, psi_interior, sandwich_audit,
};
use horogeo_core::origami::{distance_interval, kerckhoff_lower, l_shaped, qc_upper};
use horogeo_core::perron::is_primitive;
use horogeo_core::{
    optimal_geodesic, BusemannSpec, Coeff, CoreId, GeodesicLine, IntersectionMatrix, Origami,
    PerronOptions, Side, WeightedMulticurve, WeightedSurface,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Random primitive `N` (k, l ≤ 4, entries ≤ 3) realized as an origami of
/// genus ≥ 2, with random coefficients on every core.
fn random_line(rng: &mut ChaCha8Rng) -> GeodesicLine {
    loop {
        let k = rng.random_range(1..=4);
        let l = rng.random_range(1..=4);
        let n = common::random_matrix(rng, k, l, 3);
        let im = IntersectionMatrix::new(n).unwrap();
        if !is_primitive(&im) {
            continue;
        }
        let Ok(o) = Origami::realize(&im) else {
            continue;
        };
        let o = Arc::new(o);
        let coeffs = |side: Side, rng: &mut ChaCha8Rng| {
            let count = o.cylinder_count(side);
            BusemannSpec::new(
                o.clone(),
                side,
                (0..count)
                    .map(|i| (i, Coeff::Approx(rng.random_range(0.25..4.0))))
                    .collect::<Vec<_>>(),
            )
            .unwrap()
        };
        let xi = coeffs(Side::Vertical, rng);
        let eta = coeffs(Side::Horizontal, rng);
        return optimal_geodesic(&xi, &eta, &PerronOptions::default()).unwrap();
    }
}

fn golden() -> GeodesicLine {
    let o = Arc::new(l_shaped(2, 2));
    optimal_geodesic(
        &BusemannSpec::unit(o.clone(), Side::Vertical),
        &BusemannSpec::unit(o, Side::Horizontal),
        &PerronOptions::default(),
    )
    .unwrap()
}

fn core_family(o: &Arc<Origami>) -> Vec<WeightedMulticurve<f64>> {
    o.cores()
        .into_iter()
        .map(|id| WeightedMulticurve::core(o.clone(), id).unwrap())
        .collect()
}

fn random_surface(rng: &mut ChaCha8Rng, o: &Arc<Origami>) -> WeightedSurface {
    let h = (0..o.cylinder_count(Side::Horizontal))
        .map(|_| rng.random_range(0.2..5.0))
        .collect();
    let w = (0..o.cylinder_count(Side::Vertical))
        .map(|_| rng.random_range(0.2..5.0))
        .collect();
    WeightedSurface::new(o.clone(), h, w).unwrap()
}

fn jitter(rng: &mut ChaCha8Rng, x: &WeightedSurface, eps: f64) -> WeightedSurface {
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
    x.rescaled(&hf, &wf).unwrap()
}

#[test]
fn golden_walsh_cosines() {
    let g = golden();
    assert!(cosine(&g.forward_limit(), &walsh_values(g.xi())) > WALSH_COSINE_MIN);
    assert!(cosine(&g.backward_limit(), &walsh_values(g.eta())) > WALSH_COSINE_MIN);
}

#[test]
fn random_lines_certify() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for _ in 0..50 {
        let g = random_line(&mut rng);
        assert!(g.forward_cosine() > WALSH_COSINE_MIN);
        assert!(g.backward_cosine() > WALSH_COSINE_MIN);
        assert!(g.system_residual() <= 1e-11);
        // area(G(0)) = i(F_h, F_v)
        let i = horogeo_core::multicurve::intersection(g.f_hor(), g.f_vert()).unwrap();
        assert!((g.area() - i).abs() <= 1e-12 * i);
    }
}

#[test]
fn forward_limit_closed_form_on_one_core() {
    // single ergodic component: i(γ, ·)/√i(γ, F_h), normalized
    let o = Arc::new(Origami::from_one_based(&[2, 3, 4, 5, 1], &[2, 3, 5, 1, 4]).unwrap());
    let xi = BusemannSpec::new(o.clone(), Side::Vertical, [(0, Coeff::Approx(2.0))]).unwrap();
    let eta = BusemannSpec::new(o.clone(), Side::Horizontal, [(0, Coeff::Approx(1.0))]).unwrap();
    let g = optimal_geodesic(&xi, &eta, &PerronOptions::default()).unwrap();
    let f = g.forward_limit();
    assert_eq!(f[0].0, CoreId::horizontal(0));
    assert!((f[0].1 - 1.0).abs() < 1e-15);
    assert_eq!(f[1].1, 0.0);
}

#[test]
fn reversal_is_exact_on_random_lines() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let flip = |v: CoreValues| -> CoreValues {
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
    };
    for _ in 0..20 {
        let g = random_line(&mut rng);
        let r = g.reversed();
        assert_eq!(g.backward_limit(), flip(r.forward_limit()));
        assert_eq!(g.forward_limit(), flip(r.backward_limit()));
    }
}

#[test]
fn seeds_do_not_change_the_line() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for _ in 0..10 {
        let g = random_line(&mut rng);
        let opts = PerronOptions {
            seed: 12345,
            ..PerronOptions::default()
        };
        let h = optimal_geodesic(g.xi(), g.eta(), &opts).unwrap();
        for (a, b) in g.base().widths().iter().zip(h.base().widths()) {
            assert!((a - b).abs() <= 1e-11 * a.max(1.0));
        }
        for (a, b) in g.base().heights().iter().zip(h.base().heights()) {
            assert!((a - b).abs() <= 1e-11 * a.max(1.0));
        }
    }
}

#[test]
fn scaling_xi_scales_lambda_only() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    for _ in 0..10 {
        let g = random_line(&mut rng);
        let r = rng.random_range(0.5..3.0);
        let h = optimal_geodesic(&g.xi().scaled(r), g.eta(), &PerronOptions::default()).unwrap();
        let lam = g.eigen().lambda;
        assert!((h.eigen().lambda - r * r * lam).abs() <= 1e-10 * r * r * lam);
        for (a, b) in g.eigen().x.iter().zip(&h.eigen().x) {
            assert!((a - b).abs() <= 1e-10);
        }
    }
}

#[test]
fn optimality_on_random_lines() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for _ in 0..10 {
        let g = random_line(&mut rng);
        let x0 = g.point_at(0.0);
        for k in -6..=6 {
            let t = k as f64 * 0.5;
            let x = g.point_at(t);
            assert!((psi_foliation(g.f_vert(), &x, &x0).unwrap() + t).abs() <= 1e-12);
            assert!((psi_foliation(g.f_hor(), &x, &x0).unwrap() - t).abs() <= 1e-12);
        }
        for (s, t) in [(0.0, 1.0), (-2.0, 3.0), (1.5, 1.5)] {
            assert_eq!(g.flow_distance(s, t).unwrap(), (t - s).abs());
        }
    }
}

#[test]
fn distance_bounds_are_ordered() {
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    let cat = horogeo_core::origami::catalog();
    for k in 0..200 {
        let o = Arc::new(cat[k % cat.len()].1.clone());
        let fam = core_family(&o);
        let x = random_surface(&mut rng, &o);
        let y = random_surface(&mut rng, &o);
        let lo = kerckhoff_lower(&x, &y, &fam).unwrap();
        let hi = qc_upper(&x, &y).unwrap();
        assert!(lo <= hi, "{lo} > {hi}");
        // symmetry
        assert_eq!(qc_upper(&y, &x).unwrap(), hi);
        assert_eq!(kerckhoff_lower(&y, &x, &fam).unwrap(), lo);
    }
}

#[test]
fn minsky_on_random_surfaces() {
    let mut rng = ChaCha8Rng::seed_from_u64(43);
    let cat = horogeo_core::origami::catalog();
    for k in 0..100 {
        let o = Arc::new(cat[k % cat.len()].1.clone());
        let fam = core_family(&o);
        let pairs: Vec<_> = fam
            .iter()
            .flat_map(|a| fam.iter().map(move |b| (a.clone(), b.clone())))
            .collect();
        let x = random_surface(&mut rng, &o);
        let r = minsky_audit(&x, &pairs).unwrap();
        assert!(r.entries.iter().all(|e| e.lhs <= e.rhs));
        assert!(r.defining.0.meet(r.defining.1).is_some());
    }
}

#[test]
fn sandwich_and_lipschitz_at_jittered_points() {
    let mut rng = ChaCha8Rng::seed_from_u64(47);
    let g = golden();
    let fam = core_family(g.origami());
    let x0 = g.point_at(0.0);
    for k in 0..100 {
        let t = rng.random_range(-2.0..2.0);
        let x = jitter(&mut rng, &g.point_at(t), 0.3);
        let s = sandwich_audit(&g, &x, &x0, 7.0, &fam).unwrap();
        assert!(s.psi_fv.lo <= s.busemann.hi);
        let b = busemann_interval(&g, &x, &x0, 7.0, &fam).unwrap();
        assert!(b.lo <= b.hi);
        // 1-Lipschitz horofunction of an interior point
        let z = jitter(&mut rng, &g.point_at(k as f64 * 0.01), 0.5);
        let y = jitter(&mut rng, &x, 0.2);
        let px = psi_interior(&z, &x, &x0, &fam).unwrap();
        let py = psi_interior(&z, &y, &x0, &fam).unwrap();
        let dxy = distance_interval(&x, &y, &fam).unwrap();
        let gap = (px.midpoint() - py.midpoint()).abs();
        assert!(gap <= dxy.hi + px.width() + py.width() + 1e-12);
    }
}

#[test]
fn lower_bound_on_random_lines() {
    let mut rng = ChaCha8Rng::seed_from_u64(53);
    for _ in 0..30 {
        let g = random_line(&mut rng);
        let cores = g.origami().cores();
        for e in lower_bound_audit(&g, &cores).unwrap() {
            assert!(e.lhs.lo <= e.rhs.hi);
        }
    }
}

#[test]
fn busemann_on_random_lines() {
    let mut rng = ChaCha8Rng::seed_from_u64(59);
    for _ in 0..10 {
        let g = random_line(&mut rng);
        let fam = g.defining_family();
        let x0 = g.point_at(0.0);
        for t in [-1.0, 0.0, 2.0] {
            let b = busemann_interval(&g, &g.point_at(t), &x0, t + 5.0, &fam).unwrap();
            assert!(b.contains_within(-t, 1e-9), "{t}: {b}");
        }
    }
}

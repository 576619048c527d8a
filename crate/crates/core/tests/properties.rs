use std::f64::consts::{PI, TAU};

use noisebound_core::boundary::{boundary_map, boundary_map_inverse};
use noisebound_core::front::{front_projection, lift_closed_curve, relax_to_invariant_loop, ClosedCurve};
use noisebound_core::geometry::{curve_hausdorff, hausdorff_distance, t1_hausdorff_distance, TangentPoint};
use noisebound_core::persistence::{initial_loop, run_persistence_experiment_with, PersistenceOptions};
use noisebound_core::setvalued::{minimal_invariant_set, Grid};
use noisebound_core::systems::{builtin_catalog, CatalogMap, FamilyKind, PerturbationFamily, Scenario, Window};
use proptest::prelude::*;

fn star(r0: f64, amps: &[(f64, f64)], n: usize) -> ClosedCurve {
    let v = (0..n)
        .map(|i| {
            let t = TAU * i as f64 / n as f64;
            let r = r0
                * (1.0
                    + amps
                        .iter()
                        .enumerate()
                        .map(|(k, (a, p))| a / ((k + 2) * (k + 2) - 1) as f64 * ((k + 2) as f64 * t + p).cos())
                        .sum::<f64>());
            [r * t.cos(), r * t.sin()]
        })
        .collect();
    ClosedCurve::new(v).unwrap()
}

fn tangent_points() -> impl Strategy<Value = Vec<TangentPoint>> {
    prop::collection::vec((-2.0..2.0f64, -2.0..2.0f64, -PI..PI), 1..40)
        .prop_map(|v| v.into_iter().map(|(x, y, t)| TangentPoint::planar(x, y, t)).collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn lift_projects_back_onto_curve(
        r0 in 0.3..1.2f64,
        amps in prop::collection::vec((0.0..0.24f64, 0.0..TAU), 3),
        h in 0.005..0.03f64,
    ) {
        let c = star(r0, &amps, 2000);
        let l = lift_closed_curve(&c, h).unwrap();
        let (proj, simple) = front_projection(&l);
        prop_assert!(simple);
        prop_assert_eq!(&proj.vertices, &l.base);
        prop_assert!(curve_hausdorff(&proj.vertices, &c.vertices, 4).unwrap() <= h * h / r0);
    }

    #[test]
    fn t1_distance_dominates_base_distance(p in tangent_points(), q in tangent_points()) {
        let bp: Vec<[f64; 2]> = p.iter().map(|t| t.base.planar()).collect();
        let bq: Vec<[f64; 2]> = q.iter().map(|t| t.base.planar()).collect();
        let d1 = t1_hausdorff_distance(&p, &q).unwrap();
        prop_assert!(d1 + 1e-12 >= hausdorff_distance(&bp, &bq).unwrap());
    }

    #[test]
    fn boundary_map_inverts_on_catalog(k in 0usize..7, x in -1.5..1.5f64, y in -1.5..1.5f64, t in -PI..PI) {
        let catalog = builtin_catalog();
        let s = &catalog[k % catalog.len()].1;
        let p = TangentPoint::planar(x, y, t);
        let back = boundary_map_inverse(&boundary_map(&p, s).unwrap(), s).unwrap();
        let err = p.stacked().iter().zip(back.stacked()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        prop_assert!(err <= 1e-10);
    }
}

fn shear_family() -> PerturbationFamily {
    let s = Scenario::catalog(CatalogMap::Affine { lambda: 0.5 }, 0.25, Window::square(2.0)).unwrap();
    PerturbationFamily::new(
        s,
        FamilyKind::Shear {
            bump_inner: 3.0,
            bump_outer: 6.0,
        },
    )
}

#[test]
fn shear_persistence_is_monotone_and_matches_box_route() {
    let (h_box, h_front, tol) = (0.01, 0.01, 1e-6);
    let opts = PersistenceOptions {
        h_front,
        ..PersistenceOptions::default()
    };
    let fam = shear_family();
    let table = run_persistence_experiment_with(&fam, &[0.1, 0.05, 0.025], tol, &opts).unwrap();
    assert!(table.all_converged());
    let c0: Vec<f64> = table.rows.iter().map(|r| r.hausdorff_c0.unwrap()).collect();
    assert!(c0.windows(2).all(|w| w[1] <= w[0]), "{c0:?}");

    let base = fam.perturbed(0.0).unwrap();
    let grid = Grid::new(base.window.clone(), h_box).unwrap();
    for row in &table.rows {
        let s = fam.perturbed(row.delta).unwrap();
        let (m, _) = minimal_invariant_set(&s, &grid, 20, 0).unwrap();
        let boxed = m.outer_boundary().unwrap();
        let l = relax_to_invariant_loop(&initial_loop(&s, h_front).unwrap(), &s, tol, 500).unwrap();
        let d = curve_hausdorff(&boxed, &l.base, 4).unwrap();
        assert!(d <= 2.0 * (h_box + h_front), "delta {}: {d}", row.delta);
    }
}

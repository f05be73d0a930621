//! Property tests of the discrete operators and quadrature.

use num_complex::Complex64;
use proptest::prelude::*;

use vlasov_bridge::fields::{curl, divergence, gradient, inner_product, integrate, laplacian};
use vlasov_bridge::scenarios::{sphere_integrate, sphere_time_of_radius, SphereState};
use vlasov_bridge::{Boundary, ComplexField, Constants, Grid, ScalarField, VectorField};

fn periodic_cube(n: usize) -> Grid {
    Grid::cube(0.0, std::f64::consts::TAU, n, Boundary::Periodic).unwrap()
}

fn modal_scalar(grid: &Grid, k: [i32; 3], phase: f64, amp: f64) -> ScalarField {
    ScalarField::from_fn(grid, |p| {
        amp * (k[0] as f64 * p[0] + k[1] as f64 * p[1] + k[2] as f64 * p[2] + phase).sin()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn divergence_of_curl_vanishes(
        k in prop::array::uniform3(-2i32..=2),
        phase in 0.0f64..6.0,
        amp in prop::array::uniform3(-1.0f64..1.0),
    ) {
        let g = periodic_cube(12);
        let comps: Vec<ScalarField> = (0..3)
            .map(|a| modal_scalar(&g, k, phase + a as f64, amp[a]))
            .collect();
        let v = VectorField::from_scalars(&comps).unwrap();
        let d = divergence(&curl(&v).unwrap()).unwrap();
        prop_assert!(d.max_abs() <= 1e-12 * (1.0 + v.max_norm()));
    }

    #[test]
    fn curl_of_gradient_vanishes(k in prop::array::uniform3(-3i32..=3), phase in 0.0f64..6.0) {
        let g = periodic_cube(12);
        let s = modal_scalar(&g, k, phase, 1.3);
        prop_assert!(curl(&gradient(&s).unwrap()).unwrap().max_norm() <= 1e-12);
    }

    #[test]
    fn integration_is_linear(a in -3.0f64..3.0, b in -3.0f64..3.0, k in 1i32..4) {
        let g = Grid::line(-4.0, 4.0, 64, Boundary::Decaying).unwrap();
        let f = ScalarField::from_fn(&g, |p| (-p[0] * p[0]).exp());
        let h = ScalarField::from_fn(&g, |p| (k as f64 * p[0]).cos());
        let lhs = integrate(&f.scale(a).add(&h.scale(b)).unwrap());
        let rhs = a * integrate(&f) + b * integrate(&h);
        prop_assert!((lhs - rhs).abs() <= 1e-12 * (1.0 + lhs.abs()));
    }

    #[test]
    fn inner_product_is_conjugate_symmetric(
        re in prop::collection::vec(-1.0f64..1.0, 32),
        im in prop::collection::vec(-1.0f64..1.0, 32),
    ) {
        let g = Grid::line(0.0, 1.0, 16, Boundary::Periodic).unwrap();
        let a = ComplexField::from_vec(g, (0..16).map(|i| Complex64::new(re[i], im[i])).collect()).unwrap();
        let b = ComplexField::from_vec(g, (0..16).map(|i| Complex64::new(im[16 + i], re[16 + i])).collect()).unwrap();
        let ab = inner_product(&a, &b).unwrap();
        let ba = inner_product(&b, &a).unwrap();
        prop_assert!((ab - ba.conj()).norm() <= 1e-14);
        prop_assert!(inner_product(&a, &a).unwrap().im.abs() <= 1e-15);
    }

    #[test]
    fn periodic_laplacian_sums_to_zero(k in prop::array::uniform3(-3i32..=3), phase in 0.0f64..6.0) {
        let g = periodic_cube(10);
        let s = modal_scalar(&g, k, phase, 2.0).add(&ScalarField::constant(&g, 0.5)).unwrap();
        prop_assert!(integrate(&laplacian(&s).unwrap()).abs() <= 1e-10);
    }

    #[test]
    fn sphere_radius_is_monotone_and_conserves_energy(gamma_bar in 0.2f64..3.0, r0 in 0.5f64..2.0) {
        let c = Constants::default();
        let q = -4.0 * std::f64::consts::PI * c.eps_bar * gamma_bar / c.gamma;
        let s0 = SphereState::initial(q, r0, &c).unwrap();
        let t_end = sphere_time_of_radius(3.0 * r0, &s0).unwrap();
        let traj = sphere_integrate(&s0, t_end, 0.02).unwrap();
        prop_assert!(traj.states.windows(2).all(|w| w[1].r_radius >= w[0].r_radius));
        prop_assert!(traj.energy_drift() <= 1e-8);
        prop_assert!((traj.last().r_radius - 3.0 * r0).abs() <= 1e-6 * r0);
    }
}

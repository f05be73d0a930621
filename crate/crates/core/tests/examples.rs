//! Every cargo example runs and reports what it claims to show.

macro_rules! example {
    ($name:ident) => {
        #[allow(dead_code)]
        mod $name {
            include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/", stringify!($name), ".rs"));
        }
    };
}

example!(accelerated_packet);
example!(center_of_mass);
example!(cli_config_run);
example!(expanding_sphere);
example!(helmholtz_split);
example!(operator_symmetry);
example!(phase_winding);
example!(sampled_series);
example!(sphere_trajectory);
example!(vortex_fields);

#[test]
fn accelerated_packet_runs() {
    let r = accelerated_packet::run_example().expect("accelerated packet");
    assert_eq!(r.electric, 2.0);
    assert!(r.rows.iter().all(|&(_, err, res)| err < 1e-3 && res < 1e-3), "{:?}", r.rows);
}

#[test]
fn center_of_mass_runs() {
    let rows = center_of_mass::run_example().expect("center of mass");
    for (_, r) in &rows {
        assert!(r.identity_gaps.values().all(|g| g.relative() < 1e-10));
    }
}

#[test]
fn cli_config_run_runs() {
    let r = cli_config_run::run_example().expect("config run");
    assert!(r.pass);
    assert!(r.verdicts.iter().all(|v| v == "Strong"), "{:?}", r.verdicts);
    assert!(r.files.contains(&"report.json".to_owned()));
    assert!(r.files.contains(&"sphere.csv".to_owned()));
}

#[test]
fn expanding_sphere_runs() {
    let rows = expanding_sphere::run_example().expect("expanding sphere");
    for r in rows {
        assert!(r.u_error < 1e-6 && r.ampere < 1e-9 && r.gauss < 1e-9);
        assert_eq!(format!("{:?}", r.verdict), "Strong");
    }
}

#[test]
fn helmholtz_split_runs() {
    for r in helmholtz_split::run_example().expect("helmholtz split") {
        assert!(r.recompose_gap < 1e-12 && r.div_a < 1e-10 * r.a_norm.max(1.0));
    }
}

#[test]
fn operator_symmetry_runs() {
    let r = operator_symmetry::run_example().expect("operator symmetry");
    assert!(r.hermitian_gap < 1e-12 && r.anti_hermitian_gap < 1e-12);
    assert!((r.pauli.direct + 0.5).abs() < 1e-12 && (r.pauli.cyclotron + 0.5).abs() < 1e-12);
}

#[test]
fn phase_winding_runs() {
    let r = phase_winding::run_example().expect("phase winding");
    assert!(r.phase_span > 20.0);
    assert!(r.phase_gap < 1e-10 && r.velocity_gap < 1e-10);
}

#[test]
fn sampled_series_runs() {
    let rows = sampled_series::run_example().expect("sampled series");
    assert!(!rows.is_empty());
    assert!(rows.iter().all(|&(_, err)| err < 2e-3), "{rows:?}");
}

#[test]
fn sphere_trajectory_runs() {
    let r = sphere_trajectory::run_example().expect("sphere trajectory");
    assert!(r.energy_drift < 1e-8);
    for (_, tn, tc) in r.crossings {
        assert!((tn - tc).abs() <= 1e-6 * tc);
    }
}

#[test]
fn vortex_fields_runs() {
    let rows = vortex_fields::run_example().expect("vortex fields");
    let ratio = rows[0].route_gap / rows[1].route_gap;
    assert!(ratio > 3.0, "route gap ratio {ratio}");
    assert!(rows.iter().all(|r| r.faraday < 1e-12 && r.div_b < 1e-12));
}

use mimetic_leapfrog::diagnostics::drift_of;
use mimetic_leapfrog::linalg::random_vec;
use mimetic_leapfrog::maxwell3d::{
    cfl_estimate, conserved, divergence_diagnostics, init_h_half, leapfrog_step, second_order_residual, ConservedKind,
    MaxwellState,
};
use mimetic_leapfrog::mimetic3d::{Field3, FieldKind, GridSpec3, Material};
use std::f64::consts::PI;
use std::sync::Arc;

fn evolve(s: MaxwellState, steps: usize) -> Vec<MaxwellState> {
    let mut out = vec![s];
    for _ in 0..steps {
        let next = leapfrog_step(out.last().unwrap()).unwrap();
        out.push(next);
    }
    out
}

fn random_material(g: GridSpec3, seed: u64) -> Material {
    let eps = random_vec(3 * g.len(), 0.5, 2.0, seed);
    let mu = random_vec(3 * g.len(), 0.5, 2.0, seed + 1);
    Material::maxwell(g, eps, mu).unwrap()
}

#[test]
fn unit_cfl_from_fourier_bound() {
    let g = GridSpec3::cube(8, 1.0).unwrap();
    let dt = cfl_estimate(&Material::unit(g), 1e-12).unwrap();
    assert!((dt - 2.0 / 12f64.sqrt()).abs() < 1e-6, "{dt}");
}

#[test]
fn cfl_scales_with_spacing_and_wave_speed() {
    let g = GridSpec3::cube(6, 1.0).unwrap();
    let base = cfl_estimate(&Material::unit(g), 1e-12).unwrap();
    let coarse = cfl_estimate(&Material::unit(g.scaled(2.0).unwrap()), 1e-12).unwrap();
    let slow = Material::maxwell(g, vec![4.0; 3 * g.len()], vec![1.0; 3 * g.len()]).unwrap();
    let slow = cfl_estimate(&slow, 1e-12).unwrap();
    assert!((coarse / base - 2.0).abs() < 1e-6);
    assert!((slow / base - 2.0).abs() < 1e-6);
}

/// `E_z = cos(θx)` is divergence free; `E^n = cos(nφ)E⁰` with
/// `cos φ = 1 − Δt²λ/2`, `λ = 4 sin²(θ/2)`.
#[test]
fn plane_wave_frequency() {
    let g = GridSpec3::new(8, 4, 4, 1.0, 1.0, 1.0).unwrap();
    let mat = Arc::new(Material::unit(g));
    let theta = 2.0 * PI * 3.0 / 8.0;
    let lambda = 4.0 * (0.5 * theta).sin().powi(2);
    let dt = 0.4;
    let phi = (1.0 - 0.5 * dt * dt * lambda).acos();
    let e0 = Field3::from_fn(FieldKind::EdgeVector, g, |c, p| {
        if c == 2 {
            (theta * p[0]).cos()
        } else {
            0.0
        }
    });
    let states = evolve(
        init_h_half(e0.clone(), &Field3::zeros(FieldKind::DualEdgeVector, g), mat, dt).unwrap(),
        500,
    );
    for s in &states {
        let c = (s.n as f64 * phi).cos();
        let err =
            s.e.data()
                .iter()
                .zip(e0.data())
                .fold(0.0_f64, |m, (a, b)| m.max((a - c * b).abs()));
        assert!(err < 1e-11, "n={}: {err}", s.n);
    }
}

#[test]
fn divergence_constant_for_non_solenoidal_data() {
    let g = GridSpec3::new(6, 5, 4, 1.0, 0.8, 1.2).unwrap();
    let mat = Arc::new(random_material(g, 2));
    let dt = 0.9 * cfl_estimate(&mat, 1e-10).unwrap();
    let e0 = Field3::random(FieldKind::EdgeVector, g, 3);
    let h0 = Field3::random(FieldKind::DualEdgeVector, g, 4);
    let states = evolve(init_h_half(e0, &h0, mat, dt).unwrap(), 300);
    let scale = states
        .iter()
        .fold(0.0_f64, |m, s| m.max(s.e.max_abs()).max(s.h_half.max_abs()))
        / g.min_spacing();
    for s in &states {
        let (de, dh) = divergence_diagnostics(s).unwrap();
        assert!(de <= 1e-12 * scale && dh <= 1e-12 * scale, "{de} {dh}");
    }
    for kind in [ConservedKind::Cn, ConservedKind::CHalf] {
        let c: Vec<f64> = states.windows(2).map(|w| conserved(w, kind).unwrap()).collect();
        assert!(c.iter().all(|x| *x > 0.0));
        assert!(drift_of(&c).unwrap().max_rel_drift < 1e-12);
    }
}

#[test]
fn scheme_satisfies_second_order_equation() {
    let g = GridSpec3::cube(5, 1.0).unwrap();
    let mat = Arc::new(random_material(g, 7));
    let dt = 0.5 * cfl_estimate(&mat, 1e-10).unwrap();
    let e0 = Field3::random(FieldKind::EdgeVector, g, 1);
    let states = evolve(
        init_h_half(e0, &Field3::zeros(FieldKind::DualEdgeVector, g), mat, dt).unwrap(),
        60,
    );
    for w in states.windows(3) {
        assert!(second_order_residual(w).unwrap() < 1e-10);
    }
}

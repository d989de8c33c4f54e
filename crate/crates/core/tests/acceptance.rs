//! Acceptance criteria. Runs without the libtest harness so that every
//! criterion prints exactly one PASS/FAIL line.

use mimetic_leapfrog::diagnostics::{convergence_order, drift_of, stability_probe, Stability};
use mimetic_leapfrog::maxwell3d::{self, MaxwellState};
use mimetic_leapfrog::mimetic3d::{
    apply_diff, apply_material, check_adjoints, check_exactness, inner, norm_sq, second_order, DiffOp, Field3,
    FieldKind, GridSpec3, Material, SecondOrder, Star,
};
use mimetic_leapfrog::scalarwave3d::{self, ScalarVariant};
use mimetic_leapfrog::{ode_system, oscillator, positivity1d, wave1d};
use std::f64::consts::PI;
use std::panic;
use std::process::Command;
use std::sync::Arc;
use std::time::{Duration, Instant};

const C1_DRIFT: f64 = 1e-12;
const C1_RUNTIME: Duration = Duration::from_secs(1);
const C2_BOUND: f64 = 10.0;
const C2_BLOWUP: f64 = 1e3;
const C3_DRIFT: f64 = 1e-13;
const C4_DRIFT: f64 = 1e-12;
const C5_DRIFT: f64 = 1e-12;
const C5_ORDER: (f64, f64) = (1.9, 2.1);
const C5_NORM: f64 = 1e-6;
const C6_RESIDUAL: f64 = 1e-13;
const C6_RUNTIME: Duration = Duration::from_secs(10);
const C7_SYMMETRY: f64 = 1e-12;
const C8_DRIFT: f64 = 1e-12;
const C8_CURL: f64 = 1e-11;
const C8_RUNTIME: Duration = Duration::from_secs(30);
const C9_DRIFT: f64 = 1e-12;
const C9_DIV: f64 = 1e-11;
const C10_MASS: f64 = 1e-14;
const C11_MASS: f64 = 1e-14;
const C11_MODE: f64 = 1e-10;

type Criterion = (&'static str, fn() -> Outcome);

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn max_rel_drift(values: &[f64]) -> f64 {
    drift_of(values).expect("nonempty").max_rel_drift
}

// 1 ----------------------------------------------------------------------

fn oscillator_conservation() -> Outcome {
    let t0 = Instant::now();
    let start = oscillator::init_half(1.0, 0.0, 1.0, 0.1).unwrap();
    let states = oscillator::run_leapfrog(start, 100_000).unwrap();
    let mut cn = Vec::with_capacity(states.len());
    let mut ch = Vec::with_capacity(states.len());
    for w in states.windows(2) {
        let w = oscillator::OscWindow::Staggered(w);
        cn.push(oscillator::conserved(w, oscillator::ConservedKind::Cn).unwrap());
        ch.push(oscillator::conserved(w, oscillator::ConservedKind::CHalf).unwrap());
    }
    let elapsed = t0.elapsed();
    let (dn, dh) = (max_rel_drift(&cn), max_rel_drift(&ch));
    outcome(
        dn <= C1_DRIFT && dh <= C1_DRIFT && elapsed < C1_RUNTIME,
        format!(
            "drift C_n {dn:.2e}, C_half {dh:.2e} (tol {C1_DRIFT:.0e}); {:.3} s",
            elapsed.as_secs_f64()
        ),
    )
}

// 2 ----------------------------------------------------------------------

fn oscillator_stability() -> Outcome {
    let probe = |dt: f64, factor: f64| {
        let s = oscillator::init_from_pair(1.0, 0.0, 1.0, dt).unwrap();
        let n0 = s.norm();
        let mut peak = 0.0_f64;
        let result = stability_probe(
            |s: &oscillator::OscState| {
                let next = oscillator::leapfrog_step(s)?;
                peak = peak.max(next.norm() / n0);
                Ok(next)
            },
            |s| s.norm(),
            s,
            10_000,
            factor,
        )
        .unwrap();
        (result, peak)
    };
    let (below, peak) = probe(1.99, C2_BOUND);
    let (above, _) = probe(2.01, C2_BLOWUP);
    let pass = below == Stability::Stable && matches!(above, Stability::UnstableAt(_));
    outcome(pass, format!("dt=1.99: {below:?}, peak {peak:.3}x; dt=2.01: {above:?}"))
}

// 3 ----------------------------------------------------------------------

fn crank_nicolson() -> Outcome {
    let mut worst = 0.0_f64;
    for dt in [0.1, 1.0, 10.0] {
        let mut s = oscillator::CNState::new(1.0, 0.0, 1.0, dt).unwrap();
        let mut e = vec![s.energy()];
        for _ in 0..10_000 {
            s = oscillator::crank_nicolson_step(&s);
            e.push(s.energy());
        }
        worst = worst.max(max_rel_drift(&e));
    }
    outcome(
        worst <= C3_DRIFT,
        format!("max drift over dt in {{0.1, 1, 10}}: {worst:.2e} (tol {C3_DRIFT:.0e})"),
    )
}

// 4 ----------------------------------------------------------------------

fn skew_drift(op: &ode_system::SkewOperator, seed: u64) -> (f64, f64) {
    let norm = ode_system::operator_norm(op, 1e-12).unwrap();
    let dt = 0.5 / norm;
    let f0 = mimetic_leapfrog::linalg::random_vec(op.rows(), -1.0, 1.0, seed);
    let g0 = mimetic_leapfrog::linalg::random_vec(op.cols(), -1.0, 1.0, seed + 1);
    let mut prev = ode_system::init_g_half(&f0, &g0, op, dt).unwrap();
    let (mut cn, mut ch) = (Vec::new(), Vec::new());
    for _ in 0..10_000 {
        let next = ode_system::leapfrog_step(&prev, op).unwrap();
        let w = [prev, next];
        cn.push(ode_system::conserved(&w, op, ode_system::ConservedKind::Cn).unwrap());
        ch.push(ode_system::conserved(&w, op, ode_system::ConservedKind::CHalf).unwrap());
        let [_, next] = w;
        prev = next;
    }
    (max_rel_drift(&cn), max_rel_drift(&ch))
}

fn ode_system_conservation() -> Outcome {
    let a = ode_system::SkewOperator::random(2, 3, 2024).unwrap();
    let (a_n, a_h) = skew_drift(&a, 7);
    let b = ode_system::SkewOperator::random_low_rank(3, 3, 2, 2025).unwrap();
    let (b_n, b_h) = skew_drift(&b, 9);
    let worst = a_n.max(a_h).max(b_n).max(b_h);
    outcome(
        worst <= C4_DRIFT,
        format!(
            "2x3: C_n {a_n:.2e}, C_half {a_h:.2e}; rank-2 3x3: C_n {b_n:.2e}, C_half {b_h:.2e} (tol {C4_DRIFT:.0e})"
        ),
    )
}

// 5 ----------------------------------------------------------------------

fn wave1d_traveling_error(n: usize, courant: f64, t_end: f64) -> f64 {
    let dx = 1.0 / n as f64;
    let steps = (t_end / (courant * dx)).round() as usize;
    let dt = t_end / steps as f64;
    let k = 2.0 * PI;
    let u0: Vec<f64> = (0..n).map(|i| (k * i as f64 * dx).sin()).collect();
    let v_half: Vec<f64> = (0..n).map(|i| (k * ((i as f64 + 0.5) * dx + 0.5 * dt)).sin()).collect();
    let mut s = wave1d::Wave1DState::new(u0, v_half, 1.0, dt, dx).unwrap();
    for _ in 0..steps {
        s = wave1d::leapfrog_step(&s).unwrap();
    }
    let t = steps as f64 * dt;
    s.u.iter()
        .enumerate()
        .fold(0.0_f64, |m, (i, u)| m.max((u - (k * (i as f64 * dx + t)).sin()).abs()))
}

fn wave1d_acceptance() -> Outcome {
    let n = 256;
    let dx = 1.0 / n as f64;
    let dt = 0.9 * dx;
    let u0: Vec<f64> = (0..n)
        .map(|i| (-((i as f64 * dx - 0.5) / 0.05).powi(2)).exp())
        .collect();
    let mut prev = wave1d::init_v_half(u0, &vec![0.0; n], 1.0, dt, dx).unwrap();
    let (mut cn, mut ch) = (Vec::new(), Vec::new());
    for _ in 0..10_000 {
        let next = wave1d::leapfrog_step(&prev).unwrap();
        let w = [prev, next];
        cn.push(wave1d::conserved(&w, wave1d::ConservedKind::Cn).unwrap());
        ch.push(wave1d::conserved(&w, wave1d::ConservedKind::CHalf).unwrap());
        let [_, next] = w;
        prev = next;
    }
    let (dn, dh) = (max_rel_drift(&cn), max_rel_drift(&ch));
    let errors: Vec<(f64, f64)> = [32, 64, 128, 256]
        .iter()
        .map(|&n| (1.0 / n as f64, wave1d_traveling_error(n, 0.5, 0.5)))
        .collect();
    let order = convergence_order(&errors).unwrap();
    let est = wave1d::delta_norm_estimate(n, 1e-9).unwrap();
    let exact = wave1d::delta_norm_exact(n);
    let pass = dn <= C5_DRIFT
        && dh <= C5_DRIFT
        && order >= C5_ORDER.0
        && order <= C5_ORDER.1
        && (est - exact).abs() <= C5_NORM;
    outcome(
        pass,
        format!("drift C_n {dn:.2e}, C_half {dh:.2e}; order {order:.4}; |delta| {est:.9} vs {exact:.9}"),
    )
}

// 6 ----------------------------------------------------------------------

fn mimetic_identities() -> Outcome {
    let t0 = Instant::now();
    let mut worst_exact = 0.0_f64;
    let mut worst_adj = 0.0_f64;
    for n in [8, 16, 32] {
        let h = 1.0 / n as f64;
        let grid = GridSpec3::new(n, n, n, h, 1.3 * h, 0.7 * h).unwrap();
        worst_exact = worst_exact.max(check_exactness(&grid, 11 + n as u64).unwrap().max());
        for mat in [
            Material::unit(grid),
            Material::random(grid, 0.5, 2.0, 3 + n as u64).unwrap(),
        ] {
            worst_adj = worst_adj.max(check_adjoints(&grid, &mat, 5 + n as u64).unwrap().max());
        }
    }
    let elapsed = t0.elapsed();
    outcome(
        worst_exact <= C6_RESIDUAL && worst_adj <= C6_RESIDUAL && elapsed < C6_RUNTIME,
        format!(
            "exactness {worst_exact:.2e}, adjoints {worst_adj:.2e} (tol {C6_RESIDUAL:.0e}); {:.2} s",
            elapsed.as_secs_f64()
        ),
    )
}

// 7 ----------------------------------------------------------------------

fn operator_structure() -> Outcome {
    let ops = [
        SecondOrder::LaplacianP,
        SecondOrder::LaplacianV,
        SecondOrder::LaplacianPStar,
        SecondOrder::CurlCurlC,
        SecondOrder::CurlCurlS,
        SecondOrder::CurlCurlCStar,
    ];
    let grid = GridSpec3::new(8, 8, 8, 0.125, 0.1, 0.15).unwrap();
    let mut worst_sym = 0.0_f64;
    let mut sign_ok = true;
    for seed in 0..4u64 {
        let mat = Material::random(grid, 0.5, 2.0, 100 + seed).unwrap();
        for op in ops {
            let space = op.space();
            let f = Field3::random(space, grid, 2 * seed);
            let g = Field3::random(space, grid, 2 * seed + 1);
            let lf = second_order(op, &mat, &f).unwrap();
            let lg = second_order(op, &mat, &g).unwrap();
            let a = inner(space, &lf, &g, &mat).unwrap();
            let b = inner(space, &f, &lg, &mat).unwrap();
            let scale = (norm_sq(&lf, &mat).unwrap() * norm_sq(&g, &mat).unwrap()).sqrt()
                + (norm_sq(&f, &mat).unwrap() * norm_sq(&lg, &mat).unwrap()).sqrt();
            worst_sym = worst_sym.max((a - b).abs() / scale);
            let q = inner(space, &lf, &f, &mat).unwrap();
            sign_ok &= if op.is_negative() { q <= 0.0 } else { q >= 0.0 };
        }
    }
    outcome(
        worst_sym <= C7_SYMMETRY && sign_ok,
        format!("self-adjointness {worst_sym:.2e} (tol {C7_SYMMETRY:.0e}); sign definiteness {sign_ok}"),
    )
}

// 8 ----------------------------------------------------------------------

struct ScalarRun {
    dn: f64,
    dh: f64,
    curl: f64,
}

fn scalar_run(variant: ScalarVariant, mat: Arc<Material>, steps: usize) -> ScalarRun {
    let grid = *mat.grid();
    let dt = 0.9 * scalarwave3d::dt_max(&mat, variant, 1e-10).unwrap();
    let u0 = Field3::from_fn(variant.u_kind(), grid, |_, p| {
        let r2: f64 = p.iter().map(|x| (x - 0.5).powi(2)).sum();
        (-r2 / 0.01).exp()
    });
    let v0 = Field3::zeros(variant.v_kind(), grid);
    let mut prev = scalarwave3d::init_v_half(u0, &v0, mat, dt).unwrap();
    let (mut cn, mut ch) = (Vec::new(), Vec::new());
    let mut curl = 0.0_f64;
    let mut v_scale = 0.0_f64;
    for _ in 0..steps {
        let next = scalarwave3d::leapfrog_step(&prev).unwrap();
        curl = curl.max(scalarwave3d::curl_diagnostic(&next).unwrap());
        v_scale = v_scale.max(next.v_half.max_abs());
        let w = [prev, next];
        cn.push(scalarwave3d::conserved(&w, scalarwave3d::ConservedKind::Cn).unwrap());
        ch.push(scalarwave3d::conserved(&w, scalarwave3d::ConservedKind::CHalf).unwrap());
        let [_, next] = w;
        prev = next;
    }
    let scale = v_scale / grid.min_spacing();
    ScalarRun {
        dn: max_rel_drift(&cn),
        dh: max_rel_drift(&ch),
        curl: curl / scale,
    }
}

fn scalar_wave() -> Outcome {
    let t0 = Instant::now();
    let grid = GridSpec3::cube(16, 1.0 / 16.0).unwrap();
    let mut pass = true;
    let mut parts = Vec::new();
    for (label, mat) in [
        ("unit", Material::unit(grid)),
        ("random", Material::random(grid, 0.5, 2.0, 77).unwrap()),
    ] {
        let mat = Arc::new(mat);
        for variant in [ScalarVariant::Primal, ScalarVariant::Starred] {
            let r = scalar_run(variant, Arc::clone(&mat), 500);
            pass &= r.dn <= C8_DRIFT && r.dh <= C8_DRIFT && r.curl <= C8_CURL;
            parts.push(format!(
                "{label}/{variant:?}: {:.1e} {:.1e} curl {:.1e}",
                r.dn, r.dh, r.curl
            ));
        }
    }
    let elapsed = t0.elapsed();
    pass &= elapsed < C8_RUNTIME;
    outcome(pass, format!("{}; {:.2} s", parts.join("; "), elapsed.as_secs_f64()))
}

// 9 ----------------------------------------------------------------------

fn solenoidal_e(grid: GridSpec3, mat: &Material) -> Field3 {
    let lx = grid.nx as f64 * grid.dx;
    let psi = Field3::from_fn(FieldKind::DualEdgeVector, grid, |c, p| {
        let s = |a: usize| (2.0 * PI * p[a] / lx).sin();
        match c {
            0 => s(1) * s(2),
            1 => 0.5 * s(2) * s(0),
            _ => (2.0 * PI * (p[0] + 2.0 * p[1]) / lx).cos(),
        }
    });
    apply_material(Star::UpperAInv, &apply_diff(DiffOp::RStar, &psi).unwrap(), mat).unwrap()
}

fn maxwell_run(mat: Arc<Material>, steps: usize) -> (f64, f64, f64, f64) {
    let grid = *mat.grid();
    let dt = 0.9 * maxwell3d::cfl_estimate(&mat, 1e-10).unwrap();
    let e0 = solenoidal_e(grid, &mat);
    let h0 = Field3::zeros(FieldKind::DualEdgeVector, grid);
    let mut prev = maxwell3d::init_h_half(e0, &h0, mat, dt).unwrap();
    let (mut cn, mut ch) = (Vec::new(), Vec::new());
    let (mut de, mut dh) = (0.0_f64, 0.0_f64);
    let mut scale = 0.0_f64;
    for _ in 0..steps {
        let next = maxwell3d::leapfrog_step(&prev).unwrap();
        let (a, b) = maxwell3d::divergence_diagnostics(&next).unwrap();
        de = de.max(a);
        dh = dh.max(b);
        scale = scale.max(next.e.max_abs()).max(next.h_half.max_abs());
        let w = [prev, next];
        cn.push(maxwell3d::conserved(&w, maxwell3d::ConservedKind::Cn).unwrap());
        ch.push(maxwell3d::conserved(&w, maxwell3d::ConservedKind::CHalf).unwrap());
        let [_, next] = w;
        prev = next;
    }
    let div_scale = scale / grid.min_spacing();
    (max_rel_drift(&cn), max_rel_drift(&ch), de / div_scale, dh / div_scale)
}

/// Classical Yee update with unit materials, written directly on index
/// arrays.
fn yee_step(g: &GridSpec3, e: &Field3, h: &Field3, dt: f64) -> (Vec<f64>, Vec<f64>) {
    let (nx, ny, nz) = (g.nx, g.ny, g.nz);
    let n = g.len();
    let id = |i: usize, j: usize, k: usize| i + nx * (j + ny * k);
    let m = |i: usize, len: usize| (i + len - 1) % len;
    let p = |i: usize, len: usize| (i + 1) % len;
    let (ex, ey, ez) = (e.component(0), e.component(1), e.component(2));
    let (hx, hy, hz) = (h.component(0), h.component(1), h.component(2));
    let mut en = vec![0.0; 3 * n];
    for k in 0..nz {
        for j in 0..ny {
            for i in 0..nx {
                let c = id(i, j, k);
                en[c] =
                    ex[c] + dt * ((hz[c] - hz[id(i, m(j, ny), k)]) / g.dy - (hy[c] - hy[id(i, j, m(k, nz))]) / g.dz);
                en[n + c] =
                    ey[c] + dt * ((hx[c] - hx[id(i, j, m(k, nz))]) / g.dz - (hz[c] - hz[id(m(i, nx), j, k)]) / g.dx);
                en[2 * n + c] =
                    ez[c] + dt * ((hy[c] - hy[id(m(i, nx), j, k)]) / g.dx - (hx[c] - hx[id(i, m(j, ny), k)]) / g.dy);
            }
        }
    }
    let (ex, ey, ez) = (&en[..n], &en[n..2 * n], &en[2 * n..]);
    let mut hn = vec![0.0; 3 * n];
    for k in 0..nz {
        for j in 0..ny {
            for i in 0..nx {
                let c = id(i, j, k);
                hn[c] =
                    hx[c] - dt * ((ez[id(i, p(j, ny), k)] - ez[c]) / g.dy - (ey[id(i, j, p(k, nz))] - ey[c]) / g.dz);
                hn[n + c] =
                    hy[c] - dt * ((ex[id(i, j, p(k, nz))] - ex[c]) / g.dz - (ez[id(p(i, nx), j, k)] - ez[c]) / g.dx);
                hn[2 * n + c] =
                    hz[c] - dt * ((ey[id(p(i, nx), j, k)] - ey[c]) / g.dx - (ex[id(i, p(j, ny), k)] - ex[c]) / g.dy);
            }
        }
    }
    (en, hn)
}

fn yee_matches() -> bool {
    let g = GridSpec3::new(4, 4, 4, 0.3, 0.25, 0.2).unwrap();
    let mat = Arc::new(Material::unit(g));
    let e = Field3::random(FieldKind::EdgeVector, g, 41);
    let h = Field3::random(FieldKind::DualEdgeVector, g, 42);
    let dt = 0.07;
    let mut state: MaxwellState = maxwell3d::init_h_half(e.clone(), &h, mat, dt).unwrap();
    state.h_half = h.clone();
    let next = maxwell3d::leapfrog_step(&state).unwrap();
    let (en, hn) = yee_step(&g, &e, &h, dt);
    next.e.data() == en.as_slice() && next.h_half.data() == hn.as_slice()
}

fn maxwell_instability(mat: Arc<Material>) -> Stability {
    let grid = *mat.grid();
    let dt = 1.05 * maxwell3d::cfl_estimate(&mat, 1e-10).unwrap();
    let e0 = Field3::random(FieldKind::EdgeVector, grid, 5);
    let h0 = Field3::zeros(FieldKind::DualEdgeVector, grid);
    let s = maxwell3d::init_h_half(e0, &h0, mat, dt).unwrap();
    stability_probe(maxwell3d::leapfrog_step, |s: &MaxwellState| s.norm(), s, 1000, 1e3).unwrap()
}

fn maxwell() -> Outcome {
    let grid = GridSpec3::cube(16, 1.0).unwrap();
    let eps = mimetic_leapfrog::linalg::random_vec(3 * grid.len(), 0.5, 2.0, 91);
    let mu = mimetic_leapfrog::linalg::random_vec(3 * grid.len(), 0.5, 2.0, 92);
    let mut pass = true;
    let mut parts = Vec::new();
    for (label, mat) in [
        ("unit", Material::unit(grid)),
        ("random", Material::maxwell(grid, eps, mu).unwrap()),
    ] {
        let mat = Arc::new(mat);
        let (dn, dh, de, dm) = maxwell_run(Arc::clone(&mat), 500);
        let unstable = maxwell_instability(mat);
        pass &= dn <= C9_DRIFT && dh <= C9_DRIFT && de <= C9_DIV && dm <= C9_DIV;
        pass &= matches!(unstable, Stability::UnstableAt(_));
        parts.push(format!(
            "{label}: C {dn:.1e}/{dh:.1e}, div {de:.1e}/{dm:.1e}, 1.05x {unstable:?}"
        ));
    }
    let yee = yee_matches();
    pass &= yee;
    outcome(pass, format!("{}; Yee bitwise {yee}", parts.join("; ")))
}

// 10 ---------------------------------------------------------------------

fn transport() -> Outcome {
    let n = 64;
    let dx = 1.0 / n as f64;
    let square: Vec<f64> = (0..n).map(|i| if (16..32).contains(&i) { 1.0 } else { 0.0 }).collect();
    let mut exact = true;
    for v in [1.0, -1.0] {
        let s = positivity1d::TransportState::new(square.clone(), vec![v; n], dx, dx).unwrap();
        let out = positivity1d::transport_step(&s).unwrap().rho;
        let mut want = square.clone();
        if v > 0.0 {
            want.rotate_right(1);
        } else {
            want.rotate_left(1);
        }
        exact &= out == want;
    }
    let mut min_rho = f64::INFINITY;
    let mut mass_drift = 0.0_f64;
    let profiles: [fn(f64) -> f64; 2] = [|x| -(x - 0.5), |x| x - 0.5];
    for v in profiles {
        let vel: Vec<f64> = (0..n).map(|i| v(i as f64 * dx)).collect();
        let vmax = vel.iter().fold(0.0_f64, |m, x| m.max(x.abs()));
        let dt = 0.5 * dx / vmax;
        let rho: Vec<f64> = (0..n)
            .map(|i| 0.1 + (-(((i as f64 + 0.5) * dx - 0.3) / 0.1).powi(2)).exp())
            .collect();
        let mut s = positivity1d::TransportState::new(rho, vel, dt, dx).unwrap();
        let mut mass = vec![positivity1d::total_mass(&s.rho, dx)];
        for _ in 0..1000 {
            s = positivity1d::transport_step(&s).unwrap();
            min_rho = min_rho.min(positivity1d::min_value(&s.rho));
            mass.push(positivity1d::total_mass(&s.rho, dx));
        }
        mass_drift = mass_drift.max(max_rel_drift(&mass));
    }
    outcome(
        exact && min_rho >= 0.0 && mass_drift <= C10_MASS,
        format!("bitwise shift {exact}; min rho {min_rho:.3e}; mass drift {mass_drift:.2e} (tol {C10_MASS:.0e})"),
    )
}

// 11 ---------------------------------------------------------------------

fn diffusion() -> Outcome {
    let n = 100;
    let dx = 1.0 / n as f64;
    let variable: Vec<f64> = (0..n).map(|i| 1.0 + 0.5 * (2.0 * PI * i as f64 * dx).sin()).collect();
    let mut min_rho = f64::INFINITY;
    let mut mass_drift = 0.0_f64;
    for d in [vec![1.0; n], variable] {
        let worst = (0..n).fold(0.0_f64, |m, i| m.max(d[(i + 1) % n] + d[i]));
        let dt = dx * dx / worst;
        let mut rho = vec![0.0; n];
        rho[37] = 1.0;
        let mut s = positivity1d::DiffusionState::new(rho, d, dt, dx).unwrap();
        let mut mass = vec![positivity1d::total_mass(&s.rho, dx)];
        for _ in 0..1000 {
            s = positivity1d::diffusion_step(&s).unwrap();
            min_rho = min_rho.min(positivity1d::min_value(&s.rho));
            mass.push(positivity1d::total_mass(&s.rho, dx));
        }
        mass_drift = mass_drift.max(max_rel_drift(&mass));
    }

    let m = 3;
    let theta = 2.0 * PI * m as f64 / n as f64;
    let mu = 0.4;
    let dt = mu * dx * dx;
    let rho0: Vec<f64> = (0..n).map(|i| (theta * (i as f64 + 0.5)).cos()).collect();
    let mut s =
        positivity1d::DiffusionState::new(rho0.iter().map(|x| x + 1.0).collect(), vec![1.0; n], dt, dx).unwrap();
    let g = 1.0 - 4.0 * mu * (0.5 * theta).sin().powi(2);
    let steps = 200;
    for _ in 0..steps {
        s = positivity1d::diffusion_step(&s).unwrap();
    }
    let amp = g.powi(steps);
    let mode_err = s
        .rho
        .iter()
        .zip(&rho0)
        .fold(0.0_f64, |e, (r, r0)| e.max((r - 1.0 - amp * r0).abs()));
    outcome(
        min_rho >= 0.0 && mass_drift <= C11_MASS && mode_err <= C11_MODE,
        format!("min rho {min_rho:.3e}; mass drift {mass_drift:.2e}; mode error {mode_err:.2e} (tol {C11_MODE:.0e})"),
    )
}

// 12 ---------------------------------------------------------------------

fn reproducibility() -> Outcome {
    let configs = [
        r#"{"scenario":"odesys","rows":4,"cols":6,"seed":5,"cfl_factor":0.5,"steps":500}"#,
        r#"{"scenario":"scalarwave3d","grid":{"nx":8,"ny":8,"nz":8,"dx":0.125,"dy":0.125,"dz":0.125},
            "material":{"random":{"lo":0.5,"hi":2.0,"seed":3}},"cfl_factor":0.9,"steps":50}"#,
        r#"{"scenario":"maxwell3d","grid":{"nx":8,"ny":8,"nz":8,"dx":1,"dy":1,"dz":1},
            "eps":{"random":{"lo":0.5,"hi":2.0,"seed":1}},"mu":{"random":{"lo":1.0,"hi":3.0,"seed":2}},
            "initial":{"random":{"seed":4}},"cfl_factor":0.9,"steps":50}"#,
    ];
    let dir = tempfile::tempdir().unwrap();
    let mut identical = 0;
    for (i, text) in configs.iter().enumerate() {
        let cfg = dir.path().join(format!("c{i}.json"));
        std::fs::write(&cfg, text).unwrap();
        let run = |tag: &str| {
            let out = dir.path().join(format!("out{i}{tag}"));
            let status = Command::new(env!("CARGO_BIN_EXE_mimetic"))
                .arg("run")
                .arg(&cfg)
                .arg("--out")
                .arg(&out)
                .arg("--quiet")
                .status()
                .unwrap();
            assert!(status.success());
            std::fs::read(out.join("ledger.csv")).unwrap()
        };
        if run("a") == run("b") {
            identical += 1;
        }
    }
    outcome(
        identical == configs.len(),
        format!("{identical}/{} ledgers byte-identical", configs.len()),
    )
}

fn main() {
    let criteria: [Criterion; 12] = [
        ("oscillator conservation", oscillator_conservation),
        ("oscillator stability boundary", oscillator_stability),
        ("Crank-Nicolson energy", crank_nicolson),
        ("skew ODE system conservation", ode_system_conservation),
        ("1D wave conservation, order, norm", wave1d_acceptance),
        ("mimetic exactness and adjoints", mimetic_identities),
        ("second order operator structure", operator_structure),
        ("3D scalar wave", scalar_wave),
        ("Maxwell", maxwell),
        ("positive transport", transport),
        ("positive diffusion", diffusion),
        ("reproducible ledgers", reproducibility),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let t0 = Instant::now();
        let result = panic::catch_unwind(f).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            outcome(false, format!("panicked: {msg}"))
        });
        if !result.pass {
            failed += 1;
        }
        println!(
            "criterion {:>2} {:<36} {} [{:.2} s] {}",
            i + 1,
            name,
            if result.pass { "PASS" } else { "FAIL" },
            t0.elapsed().as_secs_f64(),
            result.detail
        );
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}

//! Executes a parsed [`RunConfig`]: steps the selected scheme, records the
//! ledger CSV and optional snapshots.
//!
//! Row `n` of a leapfrog ledger holds `C_n` at level `n` and `C_half` at
//! level `n + 1/2`. The initial row evaluates `C_n` with a virtual back step
//! of the half-step variable.

use crate::config::{
    resolve_dt, DensityProfile, DiffusionProfile, LatticeConfig, MaterialConfig, MaxwellInitial, RunConfig,
    ScalarInitial, VelocityProfile, Wave1dInitial,
};
use crate::diagnostics::{drift_report, ConservedSeries, DEFAULT_BLOWUP};
use crate::error::{Error, Result};
use crate::mimetic3d::{snapshot, Field3, FieldKind, GridSpec3, Material};
use crate::{linalg, maxwell3d, ode_system, oscillator, positivity1d, scalarwave3d, wave1d};
use std::f64::consts::PI;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

#[derive(Debug, Clone, PartialEq)]
pub struct RunOptions {
    pub out_dir: PathBuf,
    pub quiet: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunSummary {
    pub csv_path: PathBuf,
    pub series: ConservedSeries,
    pub dt: f64,
}

/// A leapfrog state the generic driver can advance and measure.
trait Leapfrog: Clone {
    fn step(&self) -> Result<Self>;
    fn norm(&self) -> f64;
    fn dt(&self) -> f64;
    fn relabel(&self, n: u64) -> Self;
    /// State one step earlier, obtained by undoing the update.
    fn back_step(&self) -> Result<Self>;
    /// Ledger values from three consecutive states centred on `w[1]`.
    fn row(w: &[Self]) -> Result<Vec<f64>>;
    fn snapshot(&self, _dir: &Path) -> Result<()> {
        Ok(())
    }
}

fn drive<S: Leapfrog>(
    start: S,
    steps: u64,
    labels: &[&str],
    snapshot_every: Option<u64>,
    snap_dir: Option<&Path>,
) -> Result<ConservedSeries> {
    let mut series = ConservedSeries::new(labels.iter().copied());
    let limit = DEFAULT_BLOWUP * start.norm();
    let dt = start.dt();
    let mut prev = start.back_step()?.relabel(0);
    let mut cur = start.relabel(1);
    let mut next = cur.step()?;
    for n in 0..=steps {
        let values = S::row(&[prev.clone(), cur.clone(), next.clone()])?;
        series.push(n, n as f64 * dt, values)?;
        if let (Some(every), Some(dir)) = (snapshot_every, snap_dir) {
            if every > 0 && n.is_multiple_of(every) {
                cur.relabel(n).snapshot(dir)?;
            }
        }
        if n == steps {
            break;
        }
        prev = cur;
        cur = next;
        let nrm = cur.norm();
        if !nrm.is_finite() || nrm > limit {
            return Err(Error::Instability { step: n + 1 });
        }
        next = cur.step().map_err(|e| match e {
            Error::Instability { .. } => Error::Instability { step: n + 2 },
            e => e,
        })?;
    }
    Ok(series)
}

impl Leapfrog for oscillator::OscState {
    fn step(&self) -> Result<Self> {
        oscillator::leapfrog_step(self)
    }
    fn norm(&self) -> f64 {
        oscillator::OscState::norm(self)
    }
    fn dt(&self) -> f64 {
        self.dt
    }
    fn relabel(&self, n: u64) -> Self {
        Self { n, ..*self }
    }
    fn back_step(&self) -> Result<Self> {
        let k = self.dt * self.omega;
        let v_half = self.v_half + k * self.u;
        Ok(Self {
            u: self.u - k * v_half,
            v_half,
            ..*self
        })
    }
    fn row(w: &[Self]) -> Result<Vec<f64>> {
        use oscillator::{conserved, ConservedKind, OscWindow};
        Ok(vec![
            conserved(OscWindow::Staggered(&w[..2]), ConservedKind::Cn)?,
            conserved(OscWindow::Staggered(&w[1..]), ConservedKind::CHalf)?,
        ])
    }
}

#[derive(Clone)]
struct OdeRun {
    state: ode_system::SkewState,
    op: Arc<ode_system::SkewOperator>,
}

impl Leapfrog for OdeRun {
    fn step(&self) -> Result<Self> {
        Ok(Self {
            state: ode_system::leapfrog_step(&self.state, &self.op)?,
            op: Arc::clone(&self.op),
        })
    }
    fn norm(&self) -> f64 {
        self.state.norm()
    }
    fn dt(&self) -> f64 {
        self.state.dt
    }
    fn relabel(&self, n: u64) -> Self {
        let mut s = self.clone();
        s.state.n = n;
        s
    }
    fn back_step(&self) -> Result<Self> {
        let dt = self.state.dt;
        let atf = self.op.apply_adjoint(&self.state.f)?;
        let g: Vec<f64> = self.state.g_half.iter().zip(&atf).map(|(g, a)| g + dt * a).collect();
        let ag = self.op.apply(&g)?;
        let f = self.state.f.iter().zip(&ag).map(|(f, a)| f - dt * a).collect();
        let state = ode_system::SkewState {
            f,
            g_half: g,
            ..self.state.clone()
        };
        Ok(Self {
            state,
            op: Arc::clone(&self.op),
        })
    }
    fn row(w: &[Self]) -> Result<Vec<f64>> {
        use ode_system::{conserved, ConservedKind};
        let op = &w[0].op;
        Ok(vec![
            conserved(&[w[0].state.clone(), w[1].state.clone()], op, ConservedKind::Cn)?,
            conserved(&[w[1].state.clone(), w[2].state.clone()], op, ConservedKind::CHalf)?,
        ])
    }
}

impl Leapfrog for wave1d::Wave1DState {
    fn step(&self) -> Result<Self> {
        wave1d::leapfrog_step(self)
    }
    fn norm(&self) -> f64 {
        wave1d::Wave1DState::norm(self)
    }
    fn dt(&self) -> f64 {
        self.dt
    }
    fn relabel(&self, n: u64) -> Self {
        Self { n, ..self.clone() }
    }
    fn back_step(&self) -> Result<Self> {
        use wave1d::{delta, Direction};
        let r = self.courant();
        let du = delta(&self.u, Direction::ToHalf);
        let v_half: Vec<f64> = self.v_half.iter().zip(&du).map(|(v, d)| v - r * d).collect();
        let dv = delta(&v_half, Direction::ToInt);
        let u = self.u.iter().zip(&dv).map(|(u, d)| u - r * d).collect();
        Ok(Self {
            u,
            v_half,
            ..self.clone()
        })
    }
    fn row(w: &[Self]) -> Result<Vec<f64>> {
        use wave1d::{conserved, ConservedKind};
        Ok(vec![
            conserved(&w[..2], ConservedKind::Cn)?,
            conserved(&w[1..], ConservedKind::CHalf)?,
        ])
    }
    fn snapshot(&self, dir: &Path) -> Result<()> {
        let t = self.n as f64 * self.dt;
        snapshot::write_array(dir, &format!("u_{:06}", self.n), "u", &self.u, self.dx, self.n, t)?;
        snapshot::write_array(
            dir,
            &format!("v_{:06}", self.n),
            "v_half",
            &self.v_half,
            self.dx,
            self.n,
            t + 0.5 * self.dt,
        )?;
        Ok(())
    }
}

impl Leapfrog for scalarwave3d::ScalarWaveState {
    fn step(&self) -> Result<Self> {
        scalarwave3d::leapfrog_step(self)
    }
    fn norm(&self) -> f64 {
        scalarwave3d::ScalarWaveState::norm(self)
    }
    fn dt(&self) -> f64 {
        self.dt
    }
    fn relabel(&self, n: u64) -> Self {
        Self { n, ..self.clone() }
    }
    fn back_step(&self) -> Result<Self> {
        let var = self.variant;
        let v_half = self.v_half.add_scaled(-self.dt, &var.v_rate(&self.u, &self.mat)?)?;
        let u = self.u.add_scaled(-self.dt, &var.u_rate(&v_half, &self.mat)?)?;
        Ok(Self {
            u,
            v_half,
            ..self.clone()
        })
    }
    fn row(w: &[Self]) -> Result<Vec<f64>> {
        use scalarwave3d::{conserved, curl_diagnostic, ConservedKind};
        Ok(vec![
            conserved(&w[..2], ConservedKind::Cn)?,
            conserved(&w[1..], ConservedKind::CHalf)?,
            curl_diagnostic(&w[1])?,
        ])
    }
    fn snapshot(&self, dir: &Path) -> Result<()> {
        let t = self.n as f64 * self.dt;
        snapshot::write_field(dir, &format!("u_{:06}", self.n), &self.u, self.n, t)?;
        snapshot::write_field(
            dir,
            &format!("v_{:06}", self.n),
            &self.v_half,
            self.n,
            t + 0.5 * self.dt,
        )?;
        Ok(())
    }
}

impl Leapfrog for maxwell3d::MaxwellState {
    fn step(&self) -> Result<Self> {
        maxwell3d::leapfrog_step(self)
    }
    fn norm(&self) -> f64 {
        maxwell3d::MaxwellState::norm(self)
    }
    fn dt(&self) -> f64 {
        self.dt
    }
    fn relabel(&self, n: u64) -> Self {
        Self { n, ..self.clone() }
    }
    fn back_step(&self) -> Result<Self> {
        let h_half = self
            .h_half
            .add_scaled(self.dt, &maxwell3d::h_rate(&self.e, &self.mat)?)?;
        let e = self.e.add_scaled(-self.dt, &maxwell3d::e_rate(&h_half, &self.mat)?)?;
        Ok(Self {
            e,
            h_half,
            ..self.clone()
        })
    }
    fn row(w: &[Self]) -> Result<Vec<f64>> {
        use maxwell3d::{conserved, divergence_diagnostics, ConservedKind};
        let (de, dh) = divergence_diagnostics(&w[1])?;
        Ok(vec![
            conserved(&w[..2], ConservedKind::Cn)?,
            conserved(&w[1..], ConservedKind::CHalf)?,
            de,
            dh,
        ])
    }
    fn snapshot(&self, dir: &Path) -> Result<()> {
        let t = self.n as f64 * self.dt;
        snapshot::write_field(dir, &format!("E_{:06}", self.n), &self.e, self.n, t)?;
        snapshot::write_field(
            dir,
            &format!("H_{:06}", self.n),
            &self.h_half,
            self.n,
            t + 0.5 * self.dt,
        )?;
        Ok(())
    }
}

fn material(grid: GridSpec3, spec: &MaterialConfig) -> Result<Material> {
    match *spec {
        MaterialConfig::Constant { a, b, upper_a, upper_b } => Material::constant(grid, a, b, upper_a, upper_b),
        MaterialConfig::Random { lo, hi, seed } => Material::random(grid, lo, hi, seed),
    }
}

fn lattice(grid: &GridSpec3, spec: &LatticeConfig) -> Vec<f64> {
    let n = 3 * grid.len();
    match *spec {
        LatticeConfig::Constant(x) => vec![x; n],
        LatticeConfig::Random { lo, hi, seed } => linalg::random_vec(n, lo, hi, seed),
    }
}

/// Cell-centered density samples.
fn density(n: usize, dx: f64, length: f64, p: &DensityProfile) -> Vec<f64> {
    (0..n)
        .map(|i| {
            let x = (i as f64 + 0.5) * dx;
            match *p {
                DensityProfile::Square { lo, hi, start, end } => {
                    if x >= start * length && x < end * length {
                        hi
                    } else {
                        lo
                    }
                }
                DensityProfile::Gaussian { center, width, base } => {
                    base + (-((x - center * length) / (width * length)).powi(2)).exp()
                }
            }
        })
        .collect()
}

/// Node-sited samples `x_i = iΔx`.
fn nodes(n: usize, dx: f64, f: impl Fn(f64) -> f64) -> Vec<f64> {
    (0..n).map(|i| f(i as f64 * dx)).collect()
}

fn write_csv(path: &Path, series: &ConservedSeries) -> Result<()> {
    let file = fs::File::create(path)?;
    let mut w = std::io::BufWriter::new(file);
    series.write_csv(&mut w)?;
    std::io::Write::flush(&mut w)?;
    Ok(())
}

/// Largest transport step keeping every cell's outflow fraction at most 1.
fn transport_dt_max(vel: &[f64], dx: f64) -> Result<f64> {
    let n = vel.len();
    let worst = (0..n).fold(0.0_f64, |m, i| m.max(vel[(i + 1) % n].max(0.0) + (-vel[i]).max(0.0)));
    let vmax = vel.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    let rate = worst.max(vmax);
    if rate == 0.0 {
        return Err(Error::Config(
            "cfl_factor needs a nonzero velocity; give `dt` instead".into(),
        ));
    }
    Ok(dx / rate)
}

fn diffusion_dt_max(d: &[f64], dx: f64) -> Result<f64> {
    let n = d.len();
    let worst = (0..n).fold(0.0_f64, |m, i| m.max(d[(i + 1) % n] + d[i]));
    if worst == 0.0 {
        return Err(Error::Config(
            "cfl_factor needs a nonzero diffusion; give `dt` instead".into(),
        ));
    }
    Ok(dx * dx / worst)
}

/// Runs `config`, writing `ledger.csv` (and `snapshots/` when requested)
/// under `opts.out_dir`.
pub fn run_scenario(config: &RunConfig, opts: &RunOptions) -> Result<RunSummary> {
    config.validate()?;
    fs::create_dir_all(&opts.out_dir)?;
    let snap_dir = opts.out_dir.join("snapshots");
    let wants_snapshots = matches!(
        config,
        RunConfig::Wave1d(crate::config::Wave1dConfig { snapshot_every: Some(k), .. })
            | RunConfig::Scalarwave3d(crate::config::ScalarWave3dConfig { snapshot_every: Some(k), .. })
            | RunConfig::Maxwell3d(crate::config::Maxwell3dConfig { snapshot_every: Some(k), .. })
            | RunConfig::Transport1d(crate::config::Transport1dConfig { snapshot_every: Some(k), .. })
            | RunConfig::Diffusion1d(crate::config::Diffusion1dConfig { snapshot_every: Some(k), .. })
            if *k > 0
    );
    if wants_snapshots {
        fs::create_dir_all(&snap_dir)?;
    }
    let snap = Some(snap_dir.as_path());

    let (series, dt) = match config {
        RunConfig::Oscillator(c) => {
            let dt = resolve_dt(c.dt, c.cfl_factor, || Ok(2.0 / c.omega))?;
            let s = oscillator::init_from_pair(c.u0, c.v0, c.omega, dt)?;
            (drive(s, c.steps, &["C_n", "C_half"], None, None)?, dt)
        }
        RunConfig::Odesys(c) => {
            let op = match c.rank {
                Some(r) => ode_system::SkewOperator::random_low_rank(c.rows, c.cols, r, c.seed)?,
                None => ode_system::SkewOperator::random(c.rows, c.cols, c.seed)?,
            };
            let dt = resolve_dt(c.dt, c.cfl_factor, || Ok(2.0 / ode_system::operator_norm(&op, 1e-12)?))?;
            let f0 = linalg::random_vec(c.rows, -1.0, 1.0, c.seed.wrapping_add(100));
            let g0 = linalg::random_vec(c.cols, -1.0, 1.0, c.seed.wrapping_add(101));
            let state = ode_system::init_g_half(&f0, &g0, &op, dt)?;
            let run = OdeRun {
                state,
                op: Arc::new(op),
            };
            (drive(run, c.steps, &["C_n", "C_half"], None, None)?, dt)
        }
        RunConfig::Wave1d(c) => {
            let dx = c.length / c.n as f64;
            let dt = resolve_dt(c.dt, c.cfl_factor, || wave1d::cfl_max(dx, c.c))?;
            let (u0, v0) = match c.initial {
                Wave1dInitial::Gaussian { center, width } => {
                    let u = nodes(c.n, dx, |x| {
                        (-((x - center * c.length) / (width * c.length)).powi(2)).exp()
                    });
                    (u, vec![0.0; c.n])
                }
                Wave1dInitial::Sine { mode, traveling } => {
                    let k = 2.0 * PI * mode as f64 / c.length;
                    let u = nodes(c.n, dx, |x| (k * x).sin());
                    let v = if traveling {
                        (0..c.n).map(|i| (k * (i as f64 + 0.5) * dx).sin()).collect()
                    } else {
                        vec![0.0; c.n]
                    };
                    (u, v)
                }
            };
            let s = wave1d::init_v_half(u0, &v0, c.c, dt, dx)?;
            (drive(s, c.steps, &["C_n", "C_half"], c.snapshot_every, snap)?, dt)
        }
        RunConfig::Scalarwave3d(c) => {
            let mat = Arc::new(material(c.grid, &c.material)?);
            let variant = if c.starred {
                scalarwave3d::ScalarVariant::Starred
            } else {
                scalarwave3d::ScalarVariant::Primal
            };
            let dt = resolve_dt(c.dt, c.cfl_factor, || scalarwave3d::dt_max(&mat, variant, c.norm_tol))?;
            let g = c.grid;
            let len = [g.nx as f64 * g.dx, g.ny as f64 * g.dy, g.nz as f64 * g.dz];
            let u0 = match c.initial {
                ScalarInitial::Gaussian { center, width } => {
                    let w = width * len.iter().copied().fold(f64::INFINITY, f64::min);
                    Field3::from_fn(variant.u_kind(), g, |_, p| {
                        let r2: f64 = (0..3).map(|a| (p[a] - center[a] * len[a]).powi(2)).sum();
                        (-r2 / (w * w)).exp()
                    })
                }
                ScalarInitial::Mode { k } => Field3::from_fn(variant.u_kind(), g, |_, p| {
                    (0..3).map(|a| (2.0 * PI * k[a] as f64 * p[a] / len[a]).cos()).product()
                }),
            };
            let v0 = Field3::zeros(variant.v_kind(), g);
            let s = scalarwave3d::init_v_half(u0, &v0, mat, dt)?;
            (
                drive(s, c.steps, &["C_n", "C_half", "curl"], c.snapshot_every, snap)?,
                dt,
            )
        }
        RunConfig::Maxwell3d(c) => {
            let g = c.grid;
            let mat = Arc::new(Material::maxwell(g, lattice(&g, &c.eps), lattice(&g, &c.mu))?);
            let dt = resolve_dt(c.dt, c.cfl_factor, || maxwell3d::cfl_estimate(&mat, c.norm_tol))?;
            let e0 = match c.initial {
                MaxwellInitial::Mode { kx, ky } => {
                    let (lx, ly) = (g.nx as f64 * g.dx, g.ny as f64 * g.dy);
                    Field3::from_fn(FieldKind::EdgeVector, g, |comp, p| {
                        if comp == 2 {
                            (2.0 * PI * (kx as f64 * p[0] / lx + ky as f64 * p[1] / ly)).sin()
                        } else {
                            0.0
                        }
                    })
                }
                MaxwellInitial::Random { seed } => Field3::random(FieldKind::EdgeVector, g, seed),
            };
            let h0 = Field3::zeros(FieldKind::DualEdgeVector, g);
            let s = maxwell3d::init_h_half(e0, &h0, mat, dt)?;
            let labels = ["C_n", "C_half", "divE_drift", "divH_drift"];
            (drive(s, c.steps, &labels, c.snapshot_every, snap)?, dt)
        }
        RunConfig::Transport1d(c) => {
            let dx = c.length / c.n as f64;
            let vel = nodes(c.n, dx, |x| match c.velocity {
                VelocityProfile::Uniform { v } => v,
                VelocityProfile::Linear { slope } => slope * (x - 0.5 * c.length),
                VelocityProfile::Sine { amplitude, mode } => amplitude * (2.0 * PI * mode as f64 * x / c.length).sin(),
            });
            let dt = resolve_dt(c.dt, c.cfl_factor, || transport_dt_max(&vel, dx))?;
            let rho = density(c.n, dx, c.length, &c.initial);
            let mut s = positivity1d::TransportState::new(rho, vel, dt, dx)?;
            let mut series = ConservedSeries::new(["mass", "min_rho"]);
            for n in 0..=c.steps {
                series.push(
                    n,
                    n as f64 * dt,
                    vec![positivity1d::total_mass(&s.rho, dx), positivity1d::min_value(&s.rho)],
                )?;
                snapshot_1d(c.snapshot_every, snap, n, dt, dx, &s.rho)?;
                if n < c.steps {
                    s = positivity1d::transport_step(&s)?;
                }
            }
            (series, dt)
        }
        RunConfig::Diffusion1d(c) => {
            let dx = c.length / c.n as f64;
            let d = nodes(c.n, dx, |x| match c.diffusion {
                DiffusionProfile::Constant { d } => d,
                DiffusionProfile::Sine { base, amplitude, mode } => {
                    (base + amplitude * (2.0 * PI * mode as f64 * x / c.length).sin()).max(0.0)
                }
            });
            let dt = resolve_dt(c.dt, c.cfl_factor, || diffusion_dt_max(&d, dx))?;
            let rho = density(c.n, dx, c.length, &c.initial);
            let mut s = positivity1d::DiffusionState::new(rho, d, dt, dx)?;
            let mut series = ConservedSeries::new(["mass", "min_rho"]);
            for n in 0..=c.steps {
                series.push(
                    n,
                    n as f64 * dt,
                    vec![positivity1d::total_mass(&s.rho, dx), positivity1d::min_value(&s.rho)],
                )?;
                snapshot_1d(c.snapshot_every, snap, n, dt, dx, &s.rho)?;
                if n < c.steps {
                    s = positivity1d::diffusion_step(&s)?;
                }
            }
            (series, dt)
        }
    };

    let csv_path = opts.out_dir.join("ledger.csv");
    write_csv(&csv_path, &series)?;
    if !opts.quiet {
        println!(
            "{}: {} steps, dt = {dt:.6e}, ledger {}",
            config.scenario(),
            config.steps(),
            csv_path.display()
        );
        for label in series.labels() {
            let r = drift_report(&series, label)?;
            let rel = if r.first_value == 0.0 {
                "n/a".to_string()
            } else {
                format!("{:.3e}", r.max_rel_drift)
            };
            println!(
                "  {label:<12} first {:+.6e}  max drift {:.3e} (rel {rel})",
                r.first_value, r.max_abs_drift
            );
        }
    }
    Ok(RunSummary { csv_path, series, dt })
}

fn snapshot_1d(every: Option<u64>, dir: Option<&Path>, n: u64, dt: f64, dx: f64, rho: &[f64]) -> Result<()> {
    if let (Some(every), Some(dir)) = (every, dir) {
        if every > 0 && n.is_multiple_of(every) {
            snapshot::write_array(dir, &format!("rho_{n:06}"), "rho", rho, dx, n, n as f64 * dt)?;
        }
    }
    Ok(())
}

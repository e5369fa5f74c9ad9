//! Single-time slices, Schmidt spectra and the wave-packet scattering example.

use crate::error::{Error, Result};
use crate::geometry::{classify, Configuration, RegionLabel};
use crate::scenario::{BoundaryPhase, DataFunction, InitialData, Interval, PhaseFunction, Profile1D, Scenario};
use crate::solver::WaveFunction;
use crate::spinor::{spin_pair_index, Spinor4};
use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Uniform cell-centred grid of `n` points on `[lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SliceGrid {
    pub lo: f64,
    pub hi: f64,
    pub n: usize,
}

impl SliceGrid {
    pub const DEFAULT_POINTS: usize = 256;

    pub fn new(lo: f64, hi: f64, n: usize) -> Result<Self> {
        if !(lo < hi) || n < 2 {
            return Err(Error::InvalidInput(format!("bad slice grid [{lo}, {hi}] with {n} points")));
        }
        Ok(Self { lo, hi, n })
    }

    /// Grid over the region reachable from the data support within
    /// `max_time`, with one extra cell on each side.
    pub fn covering(s: &Scenario, max_time: f64, n: usize) -> Result<Self> {
        let hull = s
            .initial
            .support()
            .coordinate_hull()?
            .unwrap_or(Interval::new(-1.0, 1.0));
        let lo = hull.lo - max_time.abs();
        let hi = hull.hi + max_time.abs();
        let cell = (hi - lo) / n.saturating_sub(2).max(1) as f64;
        Self::new(lo - cell, hi + cell, n)
    }

    pub fn spacing(&self) -> f64 {
        (self.hi - self.lo) / self.n as f64
    }

    pub fn point(&self, i: usize) -> f64 {
        self.lo + (i as f64 + 0.5) * self.spacing()
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.point(i)).collect()
    }
}

/// Amplitudes `psi(t, z_i, t, z_j)` arranged as a `2n × 2n` matrix with row
/// `a n + i` for spin index `a` of particle 1 at `z_i` and column `b n + j`
/// for particle 2. Entries with `i = j` are zero.
#[derive(Debug, Clone, PartialEq)]
pub struct SingleTimeSlice {
    pub t: f64,
    pub grid: SliceGrid,
    pub matrix: DMatrix<Complex64>,
}

impl SingleTimeSlice {
    pub fn amplitude(&self, component: usize, i: usize, j: usize) -> Complex64 {
        let k = component - 1;
        let (a, b) = (k / 2, k % 2);
        self.matrix[(a * self.grid.n + i, b * self.grid.n + j)]
    }

    /// Riemann sums `Δz^2 Σ |psi_k|^2` per component.
    pub fn component_masses(&self) -> [f64; 4] {
        let n = self.grid.n;
        let dz2 = self.grid.spacing().powi(2);
        std::array::from_fn(|k| {
            let (a, b) = (k / 2, k % 2);
            let block = self.matrix.view((a * n, b * n), (n, n));
            block.iter().map(|z| z.norm_sqr()).sum::<f64>() * dz2
        })
    }

    pub fn is_zero(&self) -> bool {
        self.matrix.iter().all(|z| *z == ZERO)
    }
}

/// Sample `psi(t, z1, t, z2)` on the grid.
pub fn single_time_slice(w: &dyn WaveFunction, t: f64, grid: SliceGrid) -> Result<SingleTimeSlice> {
    let n = grid.n;
    let z = grid.points();
    let rows: Vec<Vec<Spinor4>> = (0..n)
        .into_par_iter()
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        Ok(Spinor4::zero())
                    } else {
                        w.evaluate(&Configuration::equal_time(t, z[i], z[j]))
                    }
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    let mut matrix = DMatrix::from_element(2 * n, 2 * n, ZERO);
    for (i, row) in rows.iter().enumerate() {
        for (j, psi) in row.iter().enumerate() {
            for a in 0..2 {
                for b in 0..2 {
                    matrix[(a * n + i, b * n + j)] = psi[2 * a + b];
                }
            }
        }
    }
    Ok(SingleTimeSlice { t, grid, matrix })
}

/// Singular values of a slice, non-increasing, scaled to unit Euclidean norm.
#[derive(Debug, Clone, PartialEq)]
pub struct SchmidtSpectrum {
    pub values: Vec<f64>,
}

impl SchmidtSpectrum {
    /// `sigma_2 / sigma_1`.
    pub fn ratio(&self) -> f64 {
        match self.values.as_slice() {
            [s1, s2, ..] if *s1 > 0.0 => s2 / s1,
            _ => 0.0,
        }
    }

    /// Entanglement entropy `-Σ p ln p` with `p = sigma^2`.
    pub fn entropy(&self) -> f64 {
        self.values
            .iter()
            .map(|s| s * s)
            .filter(|p| *p > 0.0)
            .map(|p| -p * p.ln())
            .sum()
    }
}

pub fn schmidt_spectrum(slice: &SingleTimeSlice) -> Result<SchmidtSpectrum> {
    if slice.is_zero() {
        return Err(Error::ZeroSlice);
    }
    let mut values: Vec<f64> = slice.matrix.singular_values().iter().copied().collect();
    values.sort_by(|a, b| b.total_cmp(a));
    let norm = values.iter().map(|s| s * s).sum::<f64>().sqrt();
    for v in &mut values {
        *v /= norm;
    }
    Ok(SchmidtSpectrum { values })
}

/// Two packets on a line: particle 1 in `[a, b]` moving right, particle 2 in
/// `[c, d]` moving left, both in the `psi2` spin state.
#[derive(Debug, Clone)]
pub struct WavepacketParams {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    pub phi: Profile1D,
    pub chi: Profile1D,
    pub theta1: PhaseFunction,
}

impl WavepacketParams {
    /// Smooth bumps filling both intervals, normalized to unit mass.
    pub fn smooth(a: f64, b: f64, c: f64, d: f64, theta1: PhaseFunction) -> Self {
        Self {
            a,
            b,
            c,
            d,
            phi: Profile1D::smooth_bump(a, b).normalized(),
            chi: Profile1D::smooth_bump(c, d).normalized(),
            theta1,
        }
    }

    fn validate(&self) -> Result<()> {
        if !(self.a < self.b && self.b < self.c && self.c < self.d) {
            return Err(Error::InvalidInput(format!(
                "packet intervals need a < b < c < d, got {} {} {} {}",
                self.a, self.b, self.c, self.d
            )));
        }
        if self.phi.lo < self.a || self.phi.hi > self.b || self.chi.lo < self.c || self.chi.hi > self.d {
            return Err(Error::InvalidInput("packet profiles exceed their intervals".into()));
        }
        Ok(())
    }

    /// Time after which the packets have fully swapped places.
    pub fn swap_time(&self) -> f64 {
        0.5 * (self.d - self.a)
    }

    /// Time at which the packets first touch.
    pub fn contact_time(&self) -> f64 {
        0.5 * (self.c - self.b)
    }
}

pub fn wavepacket_scenario(p: &WavepacketParams) -> Result<Scenario> {
    p.validate()?;
    let mut init = InitialData::zero();
    init.omega1[1] = DataFunction::product(p.phi.clone(), p.chi.clone())
        .restricted(Interval::new(p.a, p.b), Interval::new(p.c, p.d));
    Ok(Scenario::new(
        init,
        BoundaryPhase::new(p.theta1.clone(), PhaseFunction::Constant(0.0)),
    ))
}

fn indicator(lo: f64, hi: f64, x: f64) -> f64 {
    if lo <= x && x <= hi {
        1.0
    } else {
        0.0
    }
}

fn heaviside(x: f64) -> f64 {
    if x > 0.0 {
        1.0
    } else {
        0.0
    }
}

/// Closed-form solution of the packet problem. With `step_factors` false the
/// Heaviside cut-offs are dropped; the supports make them redundant.
pub fn closed_form_packet(p: &WavepacketParams, cfg: &Configuration, step_factors: bool) -> Spinor4 {
    if classify(cfg, 0.0) != RegionLabel::Omega1 {
        return Spinor4::zero();
    }
    let Configuration { t1, z1, t2, z2 } = *cfg;
    let theta = |x: f64| if step_factors { heaviside(x) } else { 1.0 };
    let psi2 = p.phi.eval(z1 - t1)
        * p.chi.eval(z2 + t2)
        * indicator(p.a, p.b, z1 - t1)
        * indicator(p.c, p.d, z2 + t2)
        * theta(-z1 + t1 + z2 + t2);
    let phase = p
        .theta1
        .phase_factor(0.5 * (z1 - z2 + t1 + t2), 0.5 * (z1 + z2 + t1 - t2));
    let psi3 = phase
        * p.phi.eval(z2 - t2)
        * p.chi.eval(z1 + t1)
        * indicator(p.a, p.b, z2 - t2)
        * indicator(p.c, p.d, z1 + t1)
        * theta(z1 + t1 - z2 + t2);
    Spinor4::new(ZERO, psi2, psi3, ZERO)
}

/// Product initial data `psi^{s1 s2}(z1, z2) = phi_{s1}(z1) chi_{s2}(z2)` on
/// both half-domains, with `theta2 = 0`.
pub fn product_scenario(phi: [Profile1D; 2], chi: [Profile1D; 2], theta1: PhaseFunction) -> Scenario {
    let mut init = InitialData::zero();
    for (s1, p) in [-1i8, 1].into_iter().zip(&phi) {
        for (s2, q) in [-1i8, 1].into_iter().zip(&chi) {
            let k = spin_pair_index(s1, s2);
            init.omega1[k] = DataFunction::product(p.clone(), q.clone());
            init.omega2[k] = DataFunction::product(p.clone(), q.clone());
        }
    }
    Scenario::new(init, BoundaryPhase::new(theta1, PhaseFunction::Constant(0.0)))
}

#[derive(Debug, Clone, PartialEq)]
pub struct InteractionVerdict {
    pub interacting: bool,
    pub witness_time: Option<f64>,
    /// `sigma_2 / sigma_1` of the initial slice.
    pub initial_ratio: f64,
    /// Largest `sigma_2 / sigma_1` over the later slices.
    pub schmidt_gap: f64,
    /// `(t, sigma_2 / sigma_1)` for every later slice that was not zero.
    pub ratios: Vec<(f64, f64)>,
}

/// Relative rank-one tolerance for productness.
pub const PRODUCT_TOLERANCE: f64 = 1e-10;

/// Starting from a product slice at `t = 0`, look for a later slice whose
/// Schmidt rank exceeds one, i.e. `sigma_2 > tol sigma_1`.
pub fn is_interacting(w: &dyn WaveFunction, times: &[f64], grid: SliceGrid, tol: f64) -> Result<InteractionVerdict> {
    let initial = schmidt_spectrum(&single_time_slice(w, 0.0, grid)?)?;
    let initial_ratio = initial.ratio();
    if initial_ratio > tol {
        return Err(Error::NotProduct { ratio: initial_ratio });
    }
    let mut verdict = InteractionVerdict {
        interacting: false,
        witness_time: None,
        initial_ratio,
        schmidt_gap: 0.0,
        ratios: Vec::new(),
    };
    for &t in times {
        let spectrum = match schmidt_spectrum(&single_time_slice(w, t, grid)?) {
            Ok(s) => s,
            Err(Error::ZeroSlice) => continue,
            Err(e) => return Err(e),
        };
        let r = spectrum.ratio();
        verdict.ratios.push((t, r));
        if r > verdict.schmidt_gap {
            verdict.schmidt_gap = r;
        }
        if r > tol && !verdict.interacting {
            verdict.interacting = true;
            verdict.witness_time = Some(t);
        }
    }
    Ok(verdict)
}

/// `max |psi^{s1 s2}(x1, x2) + psi^{s2 s1}(x2, x1)|` over spin pairs.
pub fn antisymmetry_residual(w: &dyn WaveFunction, cfg: &Configuration) -> Result<f64> {
    let a = w.evaluate(cfg)?;
    let b = w.evaluate(&cfg.swapped())?;
    let mut worst = 0.0_f64;
    for s1 in [-1i8, 1] {
        for s2 in [-1i8, 1] {
            worst = worst.max((a.double_index(s1, s2) + b.double_index(s2, s1)).norm());
        }
    }
    Ok(worst)
}

//! Boosts of configurations, spinors and solutions.

use crate::current::{current_at, TensorCurrent};
use crate::error::Result;
use crate::geometry::Configuration;
use crate::scenario::{Scenario, Support};
use crate::solver::{boundary_residual, pde_residual_max, BoundaryTrace, Side, WaveFunction};
use crate::spinor::{gamma, gamma5, levi_civita_gamma, SpinOperator, Spinor4};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Proper orthochronous boost of rapidity `beta`:
/// `t' = t cosh(beta) + z sinh(beta)`, `z' = t sinh(beta) + z cosh(beta)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Boost {
    pub beta: f64,
}

impl Boost {
    pub fn new(beta: f64) -> Self {
        Self { beta }
    }

    pub fn inverse(&self) -> Self {
        Self { beta: -self.beta }
    }

    /// `Lambda^mu_nu`.
    pub fn matrix(&self) -> [[f64; 2]; 2] {
        let (s, c) = (self.beta.sinh(), self.beta.cosh());
        [[c, s], [s, c]]
    }

    pub fn apply(&self, t: f64, z: f64) -> (f64, f64) {
        let (s, c) = (self.beta.sinh(), self.beta.cosh());
        (t * c + z * s, t * s + z * c)
    }
}

pub fn boost_config(b: &Boost, c: &Configuration) -> Configuration {
    let (t1, z1) = b.apply(c.t1, c.z1);
    let (t2, z2) = b.apply(c.t2, c.z2);
    Configuration::new(t1, z1, t2, z2)
}

/// `S_k^{01} = [gamma_k^0, gamma_k^1] / 4`.
pub fn boost_generator(particle: u8) -> SpinOperator {
    gamma(0, particle)
        .commutator(&gamma(1, particle))
        .scale(Complex64::new(0.25, 0.0))
}

/// `S_k[Lambda] = exp(beta S_k^{01})`. The generator is diagonal, so the
/// exponential is taken entry by entry.
pub fn spinor_factor(b: &Boost, particle: u8) -> SpinOperator {
    let g = boost_generator(particle);
    debug_assert!(g.is_diagonal());
    let mut out = SpinOperator::zero();
    for i in 0..4 {
        out.0[(i, i)] = (g.0[(i, i)] * b.beta).exp();
    }
    out
}

/// `S_1[Lambda] S_2[Lambda]`.
pub fn two_particle_factor(b: &Boost) -> SpinOperator {
    spinor_factor(b, 1) * spinor_factor(b, 2)
}

/// `max_mu |gamma_k^mu S_k - S_k Lambda^mu_nu gamma_k^nu|`.
pub fn commutation_residual(b: &Boost, particle: u8) -> f64 {
    let s = spinor_factor(b, particle);
    let l = b.matrix();
    let mut worst = 0.0_f64;
    for (mu, row) in l.iter().enumerate() {
        let rotated = gamma(0, particle).scale(Complex64::new(row[0], 0.0))
            + gamma(1, particle).scale(Complex64::new(row[1], 0.0));
        let r = gamma(mu as u8, particle) * s - s * rotated;
        worst = worst.max(r.max_abs());
    }
    worst
}

/// `1 + gamma_1^5 gamma_2^5`.
pub fn chirality_projector() -> SpinOperator {
    SpinOperator::identity() + gamma5(1) * gamma5(2)
}

/// Largest commutator of `S_1 S_2` with `epsilon_{mu nu} gamma_1^mu gamma_2^nu`
/// and with `1 + gamma_1^5 gamma_2^5`.
pub fn boundary_operator_commutation(b: &Boost) -> f64 {
    let s = two_particle_factor(b);
    s.commutator(&levi_civita_gamma())
        .max_abs()
        .max(s.commutator(&chirality_projector()).max_abs())
}

/// `|epsilon gamma gamma psi - lambda (1 + gamma5 gamma5) psi|` with
/// `lambda = e^{i theta}`. For `e^{i theta} = ±i` this vanishes exactly when
/// `psi2 = e^{-i theta} psi3`.
pub fn manifest_form_residual(psi: &Spinor4, lambda: Complex64) -> f64 {
    let lhs = levi_civita_gamma().apply(psi);
    let rhs = chirality_projector().apply(psi).scale(lambda);
    (lhs - rhs).0.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// `psi'(x1, x2) = S_1 S_2 psi(Lambda^{-1} x1, Lambda^{-1} x2)`, with phases
/// transformed as scalars.
pub struct TransformedSolution<'a> {
    inner: &'a dyn WaveFunction,
    boost: Boost,
    factor: SpinOperator,
}

impl<'a> TransformedSolution<'a> {
    pub fn new(inner: &'a dyn WaveFunction, boost: Boost) -> Self {
        Self {
            inner,
            boost,
            factor: two_particle_factor(&boost),
        }
    }

    pub fn boost(&self) -> Boost {
        self.boost
    }
}

pub fn transform_solution(w: &dyn WaveFunction, b: Boost) -> TransformedSolution<'_> {
    TransformedSolution::new(w, b)
}

impl WaveFunction for TransformedSolution<'_> {
    fn evaluate(&self, c: &Configuration) -> Result<Spinor4> {
        let back = boost_config(&self.boost.inverse(), c);
        Ok(self.factor.apply(&self.inner.evaluate(&back)?))
    }

    fn boundary_trace(&self, t: f64, z: f64, side: Side) -> BoundaryTrace {
        let (tb, zb) = self.boost.inverse().apply(t, z);
        let tr = self.inner.boundary_trace(tb, zb, side);
        BoundaryTrace {
            t,
            z,
            side,
            values: self.factor.apply(&tr.values),
        }
    }

    fn boundary_phase(&self, t: f64, z: f64, side: Side) -> Option<Complex64> {
        let (tb, zb) = self.boost.inverse().apply(t, z);
        self.inner.boundary_phase(tb, zb, side)
    }

    fn branch_margin(&self, c: &Configuration) -> f64 {
        // null coordinates scale by e^{±beta} under the boost
        let back = boost_config(&self.boost.inverse(), c);
        self.inner.branch_margin(&back) * (-self.boost.beta.abs()).exp()
    }
}

/// `max |j'^{mu nu}(c) - Lambda^mu_rho Lambda^nu_sigma j^{rho sigma}(Lambda^{-1} c)|`.
pub fn current_covariance(w: &dyn WaveFunction, b: &Boost, c: &Configuration) -> Result<f64> {
    let boosted = transform_solution(w, *b);
    let lhs = current_at(&boosted, c)?;
    let j = current_at(w, &boost_config(&b.inverse(), c))?;
    let l = b.matrix();
    let rhs = TensorCurrent::from_fn(|mu, nu| {
        let mut acc = 0.0;
        for rho in 0..2 {
            for sigma in 0..2 {
                acc += l[mu][rho] * l[nu][sigma] * j.get(rho, sigma);
            }
        }
        acc
    });
    Ok(lhs.max_abs_diff(&rhs))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CovarianceReport {
    /// Largest finite-difference residual of the boosted solution at step
    /// [`CovarianceReport::STEP`].
    pub pde_residual_max: f64,
    /// Largest `|psi2' - e^{-i theta'} psi3'|` on coincidence traces.
    pub bc_residual_max: f64,
    /// Largest residual of the manifestly invariant boundary form, over traces
    /// where `e^{i theta} = ±i`; `None` if there were none.
    pub manifest_residual_max: Option<f64>,
    pub current_residual_max: f64,
    pub interior_samples: usize,
    pub trace_samples: usize,
}

impl CovarianceReport {
    pub const STEP: f64 = 1e-4;
    /// Minimum branch margin of an interior sample.
    pub const MARGIN: f64 = 1e-2;
}

/// Space-time window in which samples are drawn: `|t| <= extent`,
/// `z` within the data support widened by `extent`.
fn sampling_window(s: &Scenario) -> (f64, f64, f64) {
    let (lo, hi) = match s.initial.support() {
        Support::Box(a, b) => {
            let h = a.hull(&b);
            (h.lo, h.hi)
        }
        _ => (-5.0, 5.0),
    };
    let extent = 0.5 * (hi - lo) + 1.0;
    (lo - extent, hi + extent, extent)
}

/// Check that the boosted solution of `s` solves the system, meets the
/// transformed boundary condition, and carries a tensor current.
pub fn covariance_report(s: &Scenario, b: &Boost, sample_count: usize, seed: u64) -> Result<CovarianceReport> {
    let boosted = transform_solution(s, *b);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (zlo, zhi, extent) = sampling_window(s);
    let mut report = CovarianceReport {
        pde_residual_max: 0.0,
        bc_residual_max: 0.0,
        manifest_residual_max: None,
        current_residual_max: 0.0,
        interior_samples: 0,
        trace_samples: 0,
    };
    let mut attempts = 0;
    while report.interior_samples < sample_count && attempts < 100 * sample_count.max(1) {
        attempts += 1;
        let c = Configuration::new(
            rng.random_range(-extent..extent),
            rng.random_range(zlo..zhi),
            rng.random_range(-extent..extent),
            rng.random_range(zlo..zhi),
        );
        if !crate::geometry::classify(&c, 0.0).is_domain() || boosted.branch_margin(&c) <= CovarianceReport::MARGIN {
            continue;
        }
        report.interior_samples += 1;
        report.pde_residual_max = report
            .pde_residual_max
            .max(pde_residual_max(&boosted, &c, CovarianceReport::STEP)?);
        report.current_residual_max = report.current_residual_max.max(current_covariance(s, b, &c)?);
    }
    for _ in 0..sample_count {
        let t = rng.random_range(-extent..extent);
        let z = rng.random_range(zlo..zhi);
        for side in Side::BOTH {
            report.trace_samples += 1;
            if let Some(r) = boundary_residual(&boosted, t, z, side) {
                report.bc_residual_max = report.bc_residual_max.max(r);
            }
            if let Some(lambda) = boosted.boundary_phase(t, z, side) {
                if (lambda.re.abs()) < 1e-15 {
                    let psi = boosted.boundary_trace(t, z, side).values;
                    let r = manifest_form_residual(&psi, lambda);
                    report.manifest_residual_max = Some(report.manifest_residual_max.map_or(r, |m: f64| m.max(r)));
                }
            }
        }
    }
    Ok(report)
}

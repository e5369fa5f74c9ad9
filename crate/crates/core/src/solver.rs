//! Closed-form evaluation of the initial boundary value problem by
//! multi-time characteristics.
//!
//! Component `i` of the general solution is a function of one pair of null
//! coordinates (see [`null_coords`]). On `Omega1` components 1 and 4 are
//! always fixed by the initial data; components 2 and 3 are fixed either by
//! the initial data or, once their characteristic hits the coincidence set,
//! by the boundary values `h_1^∓`. `Omega2` is the mirror image under particle
//! exchange.

use crate::error::{Error, Result};
use crate::geometry::{classify, Configuration, RegionLabel};
use crate::scenario::{Half, Scenario};
use crate::spinor::{sigma3_signs, Spinor4};
use num_complex::Complex64;
use rayon::prelude::*;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Side of the coincidence set a one-sided limit is taken from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    /// Limit `(t, z-0, t, z+0)`.
    FromOmega1,
    /// Limit `(t, z+0, t, z-0)`.
    FromOmega2,
}

impl Side {
    pub fn half(self) -> Half {
        match self {
            Side::FromOmega1 => Half::Omega1,
            Side::FromOmega2 => Half::Omega2,
        }
    }

    pub const BOTH: [Side; 2] = [Side::FromOmega1, Side::FromOmega2];
}

/// One-sided limit of the solution at the coincidence point `(t, z, t, z)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryTrace {
    pub t: f64,
    pub z: f64,
    pub side: Side,
    pub values: Spinor4,
}

/// Anything that can be evaluated like a solution of the two-time system.
pub trait WaveFunction: Sync {
    /// Value at a point of `Omega1 ∪ Omega2`.
    fn evaluate(&self, c: &Configuration) -> Result<Spinor4>;

    /// One-sided limit at the coincidence point `(t, z, t, z)`.
    fn boundary_trace(&self, t: f64, z: f64, side: Side) -> BoundaryTrace;

    /// `e^{i theta}` of the boundary relation on `side` at `(t, z)`, if the
    /// boundary rule is of phase type.
    fn boundary_phase(&self, t: f64, z: f64, side: Side) -> Option<Complex64>;

    /// Lower bound on the distance, in each coordinate, from `c` to the
    /// nearest branch line or domain boundary.
    fn branch_margin(&self, c: &Configuration) -> f64;
}

/// Null coordinates of component `i` (1-based):
/// `(z1 - t1, z2 - t2)`, `(z1 - t1, z2 + t2)`, `(z1 + t1, z2 - t2)`, `(z1 + t1, z2 + t2)`.
pub fn null_coords(c: &Configuration, component: usize) -> (f64, f64) {
    match component {
        1 => (c.z1 - c.t1, c.z2 - c.t2),
        2 => (c.z1 - c.t1, c.z2 + c.t2),
        3 => (c.z1 + c.t1, c.z2 - c.t2),
        4 => (c.z1 + c.t1, c.z2 + c.t2),
        _ => panic!("spinor component index {component} out of range"),
    }
}

/// General solution built from four arbitrary profiles.
pub fn general_solution_eval<F>(f: [F; 4], c: &Configuration) -> Spinor4
where
    F: Fn(f64, f64) -> Complex64,
{
    let mut out = [Complex64::new(0.0, 0.0); 4];
    for (i, fi) in f.iter().enumerate() {
        let (x, y) = null_coords(c, i + 1);
        out[i] = fi(x, y);
    }
    Spinor4::from_array(out)
}

/// Profile `f_i^{(half)}(x, y)` such that `psi_i = f_i(null_coords)` on `half`.
///
/// For components 2 and 3 the initial branch applies on the strict side
/// (`x < y` on `Omega1`, `x > y` on `Omega2`), the boundary branch otherwise.
pub fn characteristic_profile(s: &Scenario, half: Half, component: usize, x: f64, y: f64) -> Complex64 {
    let initial_side = match half {
        Half::Omega1 => x < y,
        Half::Omega2 => x > y,
    };
    match (component, half, initial_side) {
        (1 | 4, _, _) | (2 | 3, _, true) => s.initial.g(half, component, x, y),
        (2, Half::Omega1, false) => s.h1_minus(0.5 * (y - x), 0.5 * (x + y)),
        (3, Half::Omega1, false) => s.h1_plus(0.5 * (x - y), 0.5 * (x + y)),
        (2, Half::Omega2, false) => s.h2_plus(0.5 * (y - x), 0.5 * (x + y)),
        (3, Half::Omega2, false) => s.h2_minus(0.5 * (x - y), 0.5 * (x + y)),
        _ => panic!("spinor component index {component} out of range"),
    }
}

/// Half-domain of `c`, or the error for points outside `Omega1 ∪ Omega2`.
pub fn domain_half(c: &Configuration) -> Result<Half> {
    match classify(c, 0.0) {
        RegionLabel::Omega1 => Ok(Half::Omega1),
        RegionLabel::Omega2 => Ok(Half::Omega2),
        region => Err(Error::OutsideDomain { config: *c, region }),
    }
}

/// Whether component `i` of the solution at `c` is fixed by boundary values.
pub fn uses_boundary_branch(c: &Configuration, half: Half, component: usize) -> bool {
    if component == 1 || component == 4 {
        return false;
    }
    let (x, y) = null_coords(c, component);
    match half {
        Half::Omega1 => x >= y,
        Half::Omega2 => x <= y,
    }
}

pub fn evaluate(s: &Scenario, c: &Configuration) -> Result<Spinor4> {
    let half = domain_half(c)?;
    Ok(general_solution_eval(
        [1, 2, 3, 4].map(|i| move |x, y| characteristic_profile(s, half, i, x, y)),
        c,
    ))
}

/// One-sided limit at `(t, z, t, z)`, evaluated in the branch selected by the
/// approach direction and with the offset set to zero.
pub fn boundary_trace(s: &Scenario, t: f64, z: f64, side: Side) -> BoundaryTrace {
    let half = side.half();
    let g = |i, x, y| s.initial.g(half, i, x, y);
    let (psi2, psi3) = match side {
        Side::FromOmega1 => (
            if t >= 0.0 { g(2, z - t, z + t) } else { s.h1_minus(t, z) },
            if t <= 0.0 { g(3, z + t, z - t) } else { s.h1_plus(t, z) },
        ),
        Side::FromOmega2 => (
            if t <= 0.0 { g(2, z - t, z + t) } else { s.h2_plus(t, z) },
            if t >= 0.0 { g(3, z + t, z - t) } else { s.h2_minus(t, z) },
        ),
    };
    BoundaryTrace {
        t,
        z,
        side,
        values: Spinor4::new(g(1, z - t, z - t), psi2, psi3, g(4, z + t, z + t)),
    }
}

/// `min(|x2 - y2|, |x3 - y3|, |z1 - z2| - |t1 - t2|)` over the null
/// coordinates of the branching components.
pub fn scenario_branch_margin(c: &Configuration) -> f64 {
    let (x2, y2) = null_coords(c, 2);
    let (x3, y3) = null_coords(c, 3);
    let spacelike = (c.z1 - c.z2).abs() - (c.t1 - c.t2).abs();
    (x2 - y2).abs().min((x3 - y3).abs()).min(spacelike)
}

impl WaveFunction for Scenario {
    fn evaluate(&self, c: &Configuration) -> Result<Spinor4> {
        evaluate(self, c)
    }

    fn boundary_trace(&self, t: f64, z: f64, side: Side) -> BoundaryTrace {
        boundary_trace(self, t, z, side)
    }

    fn boundary_phase(&self, t: f64, z: f64, side: Side) -> Option<Complex64> {
        self.phase().map(|p| p.theta(side.half()).phase_factor(t, z))
    }

    fn branch_margin(&self, c: &Configuration) -> f64 {
        scenario_branch_margin(c)
    }
}

/// Evaluate a batch in parallel; order of the output follows the input.
pub fn evaluate_many<W: WaveFunction + ?Sized>(w: &W, configs: &[Configuration]) -> Vec<Result<Spinor4>> {
    configs.par_iter().map(|c| w.evaluate(c)).collect()
}

/// `psi_2 - e^{-i theta} psi_3` on a trace; `None` for raw boundary rules.
pub fn boundary_residual<W: WaveFunction + ?Sized>(w: &W, t: f64, z: f64, side: Side) -> Option<f64> {
    let phase = w.boundary_phase(t, z, side)?;
    let v = w.boundary_trace(t, z, side).values;
    Some((v[1] - phase.conj() * v[2]).norm())
}

pub(crate) fn check_stencil<W: WaveFunction + ?Sized>(w: &W, c: &Configuration, h: f64) -> Result<()> {
    if !(h > 0.0) {
        return Err(Error::InvalidInput(format!("finite-difference step must be positive, got {h}")));
    }
    domain_half(c)?;
    let margin = w.branch_margin(c);
    if margin <= 2.0 * h {
        return Err(Error::StencilTooClose {
            config: *c,
            step: h,
            margin,
        });
    }
    Ok(())
}

/// Central difference of `f` at `c` along coordinate `axis` (0..4 for t1, z1, t2, z2).
pub(crate) fn central_difference<T, F, const N: usize>(f: F, c: &Configuration, axis: usize, h: f64) -> Result<[T; N]>
where
    F: Fn(&Configuration) -> Result<[T; N]>,
    T: Copy + std::ops::Sub<Output = T> + std::ops::Mul<f64, Output = T>,
{
    let mut plus = c.as_array();
    let mut minus = c.as_array();
    plus[axis] += h;
    minus[axis] -= h;
    let fp = f(&Configuration::from_array(plus))?;
    let fm = f(&Configuration::from_array(minus))?;
    Ok(std::array::from_fn(|i| (fp[i] - fm[i]) * (0.5 / h)))
}

/// Residuals `i ∂_{t_k} psi + i sigma3^{(k)} ∂_{z_k} psi` for `k = 1, 2`,
/// by central differences of step `h`.
pub fn pde_residual<W: WaveFunction + ?Sized>(
    w: &W,
    c: &Configuration,
    h: f64,
) -> Result<([Complex64; 4], [Complex64; 4])> {
    check_stencil(w, c, h)?;
    let eval = |p: &Configuration| w.evaluate(p).map(|s| s.to_array());
    let mut out = [[Complex64::new(0.0, 0.0); 4]; 2];
    for (k, slot) in out.iter_mut().enumerate() {
        let dt = central_difference(eval, c, 2 * k, h)?;
        let dz = central_difference(eval, c, 2 * k + 1, h)?;
        let signs = sigma3_signs(k as u8 + 1);
        for i in 0..4 {
            slot[i] = I * dt[i] + I * signs[i] * dz[i];
        }
    }
    Ok((out[0], out[1]))
}

/// Largest modulus over both residual vectors.
pub fn pde_residual_max<W: WaveFunction + ?Sized>(w: &W, c: &Configuration, h: f64) -> Result<f64> {
    let (r1, r2) = pde_residual(w, c, h)?;
    Ok(r1.iter().chain(r2.iter()).map(|z| z.norm()).fold(0.0, f64::max))
}

/// Where a characteristic curve starts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CurveFoot {
    /// On the initial surface `t1 = t2 = 0`.
    Initial,
    /// On the coincidence set.
    Coincidence,
}

/// Straight segment `gamma(tau) = start + tau (end - start)`, `tau ∈ [0, 1]`,
/// lying on the characteristic surface of one component.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CharacteristicCurve {
    pub component: usize,
    pub foot: CurveFoot,
    pub start: Configuration,
    pub end: Configuration,
}

impl CharacteristicCurve {
    pub fn at(&self, tau: f64) -> Configuration {
        let a = self.start.as_array();
        let b = self.end.as_array();
        Configuration::from_array(std::array::from_fn(|k| a[k] + tau * (b[k] - a[k])))
    }
}

/// The curve connecting `c` to the datum that determines component
/// `component` of the solution there.
pub fn characteristic_curve(c: &Configuration, component: usize) -> Result<CharacteristicCurve> {
    let half = domain_half(c)?;
    let (start, foot) = if uses_boundary_branch(c, half, component) {
        let (x, y) = null_coords(c, component);
        // coincidence point (t*, z*, t*, z*) on the same characteristic
        let t = match component {
            2 => 0.5 * (y - x),
            _ => 0.5 * (x - y),
        };
        let z = 0.5 * (x + y);
        (Configuration::equal_time(t, z, z), CurveFoot::Coincidence)
    } else {
        let (x, y) = null_coords(c, component);
        (Configuration::equal_time(0.0, x, y), CurveFoot::Initial)
    };
    Ok(CharacteristicCurve {
        component,
        foot,
        start,
        end: *c,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario::{
        BoundaryPhase, DataFunction, InitialData, Interval, PhaseFunction, Profile1D, Smoothness, Support,
    };
    use proptest::prelude::*;
    use std::sync::Arc;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    /// Smooth data on both halves, every component populated, compatible at
    /// the diagonal because all profiles vanish there.
    fn busy_scenario(theta1: PhaseFunction, theta2: PhaseFunction) -> Scenario {
        let left = Profile1D::smooth_bump(-3.0, -0.5).with_wavenumber(1.7);
        let right = Profile1D::smooth_bump(0.5, 3.0).with_amplitude(c(0.3, 0.8));
        let mut init = InitialData::zero();
        for k in 0..4 {
            let scale = c(1.0 + k as f64, -0.5 * k as f64);
            init.omega1[k] = DataFunction::product(left.clone().with_amplitude(scale), right.clone());
            init.omega2[k] = DataFunction::product(right.clone(), left.clone().with_amplitude(scale.conj()));
        }
        Scenario::new(init, BoundaryPhase::new(theta1, theta2))
    }

    #[test]
    fn general_solution_example() {
        let f1 = |x: f64, y: f64| c(x, y);
        let zero = |_: f64, _: f64| c(0.0, 0.0);
        let cfg = Configuration::new(1.0, 2.0, 0.5, 5.0);
        let fs: [&dyn Fn(f64, f64) -> Complex64; 4] = [&f1, &zero, &zero, &zero];
        let v = general_solution_eval(fs, &cfg);
        assert_eq!(v[0], c(1.0, 4.5));
    }

    #[test]
    fn zero_scenario_is_zero() {
        let s = Scenario::zero();
        for cfg in [Configuration::new(0.3, -1.0, -0.2, 2.0), Configuration::new(1.0, 4.0, 2.0, 0.0)] {
            assert_eq!(evaluate(&s, &cfg).unwrap(), Spinor4::zero());
        }
    }

    #[test]
    fn initial_time_restriction() {
        let s = busy_scenario(PhaseFunction::Constant(0.4), PhaseFunction::Constant(-0.4));
        let cfg = Configuration::equal_time(0.0, -1.5, 1.2);
        let v = evaluate(&s, &cfg).unwrap();
        for i in 1..=4 {
            assert_eq!(v.component(i), s.initial.g(Half::Omega1, i, -1.5, 1.2));
        }
    }

    #[test]
    fn rejects_points_outside_domain() {
        let s = Scenario::zero();
        for cfg in [
            Configuration::new(0.0, 1.0, 0.0, 1.0),
            Configuration::new(0.0, 0.0, 1.0, 1.0),
            Configuration::new(0.0, 0.0, 2.0, 1.0),
        ] {
            assert!(matches!(evaluate(&s, &cfg), Err(Error::OutsideDomain { .. })));
        }
    }

    #[test]
    fn boundary_relation_holds_on_traces() {
        let theta = PhaseFunction::Linear { offset: 0.3, dt: 0.7, dz: -1.1 };
        let s = busy_scenario(theta.clone(), theta.negated());
        for i in 0..200 {
            let t = -3.0 + 0.031 * i as f64;
            let z = 2.0 - 0.021 * i as f64;
            for side in Side::BOTH {
                let tr = boundary_trace(&s, t, z, side);
                assert!(boundary_residual(&s, t, z, side).unwrap() <= 1e-15);
                assert!((tr.values[1].norm() - tr.values[2].norm()).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn trace_negative_time_is_h1_minus() {
        let s = busy_scenario(PhaseFunction::PlusI, PhaseFunction::MinusI);
        let tr = boundary_trace(&s, -0.8, 0.1, Side::FromOmega1);
        assert_eq!(tr.values[1], s.h1_minus(-0.8, 0.1));
    }

    #[test]
    fn trace_is_limit_of_interior_values() {
        let s = busy_scenario(PhaseFunction::Constant(1.1), PhaseFunction::Constant(-0.6));
        for &(t, z) in &[(0.7, 0.2), (-0.9, -0.3), (1.3, 1.0), (-0.4, 0.9)] {
            for side in Side::BOTH {
                let eps = 1e-9;
                let cfg = match side {
                    Side::FromOmega1 => Configuration::new(t, z - eps, t, z + eps),
                    Side::FromOmega2 => Configuration::new(t, z + eps, t, z - eps),
                };
                let near = evaluate(&s, &cfg).unwrap();
                let tr = boundary_trace(&s, t, z, side).values;
                assert!(near.max_abs_diff(&tr) < 1e-6, "{side:?} {t} {z}");
            }
        }
    }

    #[test]
    fn constant_first_component_has_zero_residual() {
        let mut init = InitialData::zero();
        init.omega1[0] = DataFunction::constant(c(0.5, -2.0));
        init.omega2[0] = DataFunction::constant(c(0.5, -2.0));
        let s = Scenario::new(init, BoundaryPhase::constant(0.0, 0.0));
        let cfg = Configuration::new(0.1, -1.0, 0.3, 1.0);
        assert_eq!(pde_residual_max(&s, &cfg, 1e-4).unwrap(), 0.0);
        assert_eq!(pde_residual_max(&Scenario::zero(), &cfg, 1e-4).unwrap(), 0.0);
    }

    #[test]
    fn stencil_near_branch_line_is_rejected() {
        let s = Scenario::zero();
        // z1 + t1 = z2 - t2 for component 3
        let cfg = Configuration::new(0.5, 0.0, 0.5, 1.0);
        assert!(matches!(pde_residual(&s, &cfg, 1e-4), Err(Error::StencilTooClose { .. })));
        assert!(pde_residual(&s, &cfg, 0.0).is_err());
    }

    #[test]
    fn first_curve_matches_closed_form() {
        let cfg = Configuration::new(0.4, -1.0, -0.3, 2.0);
        let g = characteristic_curve(&cfg, 1).unwrap();
        assert_eq!(g.foot, CurveFoot::Initial);
        assert_eq!(g.at(0.0), Configuration::new(0.0, -1.4, 0.0, 2.3));
        assert_eq!(g.at(1.0), cfg);
    }

    #[test]
    fn second_curve_boundary_foot() {
        // z1 - t1 >= z2 + t2 → boundary branch
        let cfg = Configuration::new(-1.0, 0.0, -1.2, 0.5);
        let g = characteristic_curve(&cfg, 2).unwrap();
        assert_eq!(g.foot, CurveFoot::Coincidence);
        let p = g.at(0.0);
        let (t1, z1, t2, z2) = (cfg.t1, cfg.z1, cfg.t2, cfg.z2);
        assert_eq!(p.t1, (-z1 + z2 + t1 + t2) / 2.0);
        assert_eq!(p.z1, (z1 + z2 - t1 + t2) / 2.0);
        assert_eq!((p.t1, p.z1), (p.t2, p.z2));
    }

    #[test]
    fn curves_stay_in_closure_of_domain() {
        let configs = [
            Configuration::new(1.0, 0.0, 1.5, 0.6),
            Configuration::new(-0.7, -0.2, 0.4, 1.5),
            Configuration::new(2.0, 0.3, -0.5, 3.0),
            Configuration::new(1.0, 2.0, 0.5, -1.0),
        ];
        for cfg in configs {
            for comp in 1..=4 {
                let g = characteristic_curve(&cfg, comp).unwrap();
                for k in 1..10 {
                    let r = classify(&g.at(k as f64 / 10.0), 0.0);
                    let target = classify(&cfg, 0.0);
                    if g.foot == CurveFoot::Initial {
                        assert_eq!(r, target);
                    } else {
                        assert!(r == target || r == RegionLabel::Coincidence);
                    }
                }
            }
        }
    }

    #[test]
    fn raw_boundary_values_are_used() {
        use crate::scenario::RawBoundary;
        let mut raw = RawBoundary::zero();
        raw.h1_plus = Arc::new(c);
        let s = Scenario::with_raw_boundary(InitialData::zero(), raw);
        let tr = boundary_trace(&s, 0.5, 0.25, Side::FromOmega1);
        assert_eq!(tr.values[2], c(0.5, 0.25));
        assert!(boundary_residual(&s, 0.5, 0.25, Side::FromOmega1).is_none());
    }

    #[test]
    fn unbounded_custom_data_evaluates() {
        let mut init = InitialData::zero();
        init.omega1[0] = DataFunction::custom(
            Support::Box(Interval::new(-1.0, 1.0), Interval::new(-1.0, 1.0)),
            Smoothness::Infinite,
            Arc::new(|x, y| c(x * y, 0.0)),
        );
        let s = Scenario::new(init, BoundaryPhase::constant(0.0, 0.0));
        let v = evaluate(&s, &Configuration::new(0.0, -0.5, 0.0, 0.5)).unwrap();
        assert_eq!(v[0], c(-0.25, 0.0));
    }

    fn domain_point() -> impl Strategy<Value = Configuration> {
        (-2.0..2.0f64, -3.0..3.0f64, -2.0..2.0f64, -3.0..3.0f64)
            .prop_map(|(t1, z1, t2, z2)| Configuration::new(t1, z1, t2, z2))
            .prop_filter("space-like", |c| classify(c, 0.0).is_domain())
    }

    proptest! {
        #[test]
        fn component_constant_along_curve(cfg in domain_point(), tau in 0.05..0.95f64, comp in 1usize..=4) {
            let s = busy_scenario(PhaseFunction::Constant(0.8), PhaseFunction::Constant(-0.8));
            let g = characteristic_curve(&cfg, comp).unwrap();
            let p = g.at(tau);
            prop_assume!(classify(&p, 0.0).is_domain());
            let a = evaluate(&s, &cfg).unwrap().component(comp);
            let b = evaluate(&s, &p).unwrap().component(comp);
            prop_assert!((a - b).norm() <= 1e-13 * a.norm().max(1.0));
        }

        #[test]
        fn residual_small_in_interior(cfg in domain_point()) {
            let s = busy_scenario(PhaseFunction::Constant(0.2), PhaseFunction::Constant(-0.2));
            prop_assume!(scenario_branch_margin(&cfg) > 1e-2);
            let r = pde_residual_max(&s, &cfg, 1e-4).unwrap();
            prop_assert!(r < 1e-6, "residual {}", r);
        }
    }
}

//! Problem instances: initial data on both half-domains plus the boundary rule
//! on the coincidence set.

pub mod config;

use crate::error::{Error, Result};
use num_complex::Complex64;
use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

pub type ComplexField = Arc<dyn Fn(f64, f64) -> Complex64 + Send + Sync>;
pub type RealField = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;
pub type ComplexProfileFn = Arc<dyn Fn(f64) -> Complex64 + Send + Sync>;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Closed interval `[lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Self {
        Self { lo, hi }
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn hull(&self, other: &Interval) -> Interval {
        Interval::new(self.lo.min(other.lo), self.hi.max(other.hi))
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }
}

/// Declared support of a function of two variables.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Support {
    Empty,
    Box(Interval, Interval),
    Unbounded,
}

impl Support {
    pub fn contains(&self, x: f64, y: f64) -> bool {
        match self {
            Support::Empty => false,
            Support::Box(a, b) => a.contains(x) && b.contains(y),
            Support::Unbounded => true,
        }
    }

    pub fn union(&self, other: &Support) -> Support {
        match (self, other) {
            (Support::Empty, s) | (s, Support::Empty) => *s,
            (Support::Unbounded, _) | (_, Support::Unbounded) => Support::Unbounded,
            (Support::Box(a1, b1), Support::Box(a2, b2)) => Support::Box(a1.hull(a2), b1.hull(b2)),
        }
    }

    /// Hull of both coordinate intervals, or `None` if empty.
    pub fn coordinate_hull(&self) -> Result<Option<Interval>> {
        match self {
            Support::Empty => Ok(None),
            Support::Box(a, b) => Ok(Some(a.hull(b))),
            Support::Unbounded => Err(Error::UnboundedSupport),
        }
    }
}

/// Declared regularity class; trusted, not verified.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Smoothness {
    Finite(u32),
    Infinite,
}

#[derive(Clone)]
pub enum ProfileShape {
    /// `exp(1 - 1/(1 - u^2))` on `u ∈ (-1, 1)`, peak value 1.
    SmoothBump,
    /// `(1 - u^2)^(order + 1)`, of class `C^order`.
    PolyBump { order: u32 },
    Custom { f: ComplexProfileFn, smoothness: Smoothness },
}

impl fmt::Debug for ProfileShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProfileShape::SmoothBump => write!(f, "SmoothBump"),
            ProfileShape::PolyBump { order } => write!(f, "PolyBump({order})"),
            ProfileShape::Custom { smoothness, .. } => write!(f, "Custom({smoothness:?})"),
        }
    }
}

/// A compactly supported function `R -> C`: shape rescaled to `[lo, hi]`,
/// multiplied by `amplitude * exp(i wavenumber x)`. Vanishes outside `[lo, hi]`.
#[derive(Debug, Clone)]
pub struct Profile1D {
    pub shape: ProfileShape,
    pub lo: f64,
    pub hi: f64,
    pub amplitude: Complex64,
    pub wavenumber: f64,
}

impl Profile1D {
    pub fn smooth_bump(lo: f64, hi: f64) -> Self {
        Self::with_shape(ProfileShape::SmoothBump, lo, hi)
    }

    pub fn poly_bump(lo: f64, hi: f64, order: u32) -> Self {
        Self::with_shape(ProfileShape::PolyBump { order }, lo, hi)
    }

    /// `f` is only ever evaluated inside `[lo, hi]`.
    pub fn custom(lo: f64, hi: f64, smoothness: Smoothness, f: ComplexProfileFn) -> Self {
        Self::with_shape(ProfileShape::Custom { f, smoothness }, lo, hi)
    }

    fn with_shape(shape: ProfileShape, lo: f64, hi: f64) -> Self {
        assert!(lo < hi, "profile support must satisfy lo < hi");
        Self {
            shape,
            lo,
            hi,
            amplitude: Complex64::new(1.0, 0.0),
            wavenumber: 0.0,
        }
    }

    pub fn with_amplitude(mut self, amplitude: Complex64) -> Self {
        self.amplitude = amplitude;
        self
    }

    pub fn with_wavenumber(mut self, k: f64) -> Self {
        self.wavenumber = k;
        self
    }

    pub fn support(&self) -> Interval {
        Interval::new(self.lo, self.hi)
    }

    pub fn smoothness(&self) -> Smoothness {
        match &self.shape {
            ProfileShape::SmoothBump => Smoothness::Infinite,
            ProfileShape::PolyBump { order } => Smoothness::Finite(*order),
            ProfileShape::Custom { smoothness, .. } => *smoothness,
        }
    }

    pub fn eval(&self, x: f64) -> Complex64 {
        if !(self.lo < x && x < self.hi) {
            return ZERO;
        }
        let u = (2.0 * x - self.lo - self.hi) / (self.hi - self.lo);
        let one_minus = 1.0 - u * u;
        let envelope = match &self.shape {
            ProfileShape::SmoothBump => Complex64::new((1.0 - 1.0 / one_minus).exp(), 0.0),
            ProfileShape::PolyBump { order } => {
                Complex64::new(one_minus.powi(*order as i32 + 1), 0.0)
            }
            ProfileShape::Custom { f, .. } => f(x),
        };
        let carrier = if self.wavenumber == 0.0 {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::from_polar(1.0, self.wavenumber * x)
        };
        self.amplitude * envelope * carrier
    }

    /// `∫ |p|^2 dx`, composite Gauss-Legendre on the support.
    pub fn norm_sqr(&self) -> f64 {
        let rule = gauss_quad::GaussLegendre::new(12.try_into().expect("nonzero order"));
        let panels = 256;
        let h = (self.hi - self.lo) / panels as f64;
        (0..panels)
            .map(|p| {
                let a = self.lo + p as f64 * h;
                rule.integrate(a, a + h, |x| self.eval(x).norm_sqr())
            })
            .sum()
    }

    /// Rescale the amplitude so that `∫ |p|^2 dx = 1`.
    pub fn normalized(mut self) -> Self {
        let n = self.norm_sqr().sqrt();
        if n > 0.0 {
            self.amplitude /= n;
        }
        self
    }
}

/// One initial-data function `g_i^{(j)}` of two real variables.
#[derive(Clone)]
pub struct DataFunction {
    f: ComplexField,
    support: Support,
    smoothness: Smoothness,
}

impl fmt::Debug for DataFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DataFunction")
            .field("support", &self.support)
            .field("smoothness", &self.smoothness)
            .finish_non_exhaustive()
    }
}

impl DataFunction {
    pub fn zero() -> Self {
        Self {
            f: Arc::new(|_, _| ZERO),
            support: Support::Empty,
            smoothness: Smoothness::Infinite,
        }
    }

    /// `(x, y) ↦ p(x) q(y)`.
    pub fn product(p: Profile1D, q: Profile1D) -> Self {
        let support = Support::Box(p.support(), q.support());
        let smoothness = min_smoothness(p.smoothness(), q.smoothness());
        Self {
            f: Arc::new(move |x, y| p.eval(x) * q.eval(y)),
            support,
            smoothness,
        }
    }

    /// Constant value everywhere (not compactly supported).
    pub fn constant(value: Complex64) -> Self {
        Self {
            f: Arc::new(move |_, _| value),
            support: Support::Unbounded,
            smoothness: Smoothness::Infinite,
        }
    }

    /// Arbitrary function; it is cut to zero outside a bounded `support`.
    pub fn custom(support: Support, smoothness: Smoothness, f: ComplexField) -> Self {
        Self { f, support, smoothness }
    }

    /// Restrict to a box; the function reads zero outside it.
    pub fn restricted(self, x: Interval, y: Interval) -> Self {
        let support = match self.support {
            Support::Empty => Support::Empty,
            Support::Unbounded => Support::Box(x, y),
            Support::Box(a, b) => {
                let lo_x = a.lo.max(x.lo);
                let hi_x = a.hi.min(x.hi);
                let lo_y = b.lo.max(y.lo);
                let hi_y = b.hi.min(y.hi);
                if lo_x > hi_x || lo_y > hi_y {
                    Support::Empty
                } else {
                    Support::Box(Interval::new(lo_x, hi_x), Interval::new(lo_y, hi_y))
                }
            }
        };
        Self { support, ..self }
    }

    pub fn eval(&self, x: f64, y: f64) -> Complex64 {
        if self.support.contains(x, y) {
            (self.f)(x, y)
        } else {
            ZERO
        }
    }

    pub fn support(&self) -> Support {
        self.support
    }

    pub fn smoothness(&self) -> Smoothness {
        self.smoothness
    }

    pub fn is_zero(&self) -> bool {
        self.support == Support::Empty
    }

    /// `(x, y) ↦ -self(y, x)`: data transported to the other half-domain by
    /// particle exchange.
    pub fn exchanged_negated(&self) -> Self {
        let f = self.f.clone();
        let support = match self.support {
            Support::Box(a, b) => Support::Box(b, a),
            s => s,
        };
        Self {
            f: Arc::new(move |x, y| -f(y, x)),
            support,
            smoothness: self.smoothness,
        }
    }
}

fn min_smoothness(a: Smoothness, b: Smoothness) -> Smoothness {
    match (a, b) {
        (Smoothness::Infinite, s) | (s, Smoothness::Infinite) => s,
        (Smoothness::Finite(x), Smoothness::Finite(y)) => Smoothness::Finite(x.min(y)),
    }
}

/// The two half-domains of the space-like configurations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Half {
    /// `z1 < z2`
    Omega1,
    /// `z1 > z2`
    Omega2,
}

/// Initial values `g_i^{(1)}` (for `z1 < z2`) and `g_i^{(2)}` (for `z1 > z2`).
#[derive(Debug, Clone)]
pub struct InitialData {
    pub omega1: [DataFunction; 4],
    pub omega2: [DataFunction; 4],
}

impl InitialData {
    pub fn zero() -> Self {
        Self {
            omega1: std::array::from_fn(|_| DataFunction::zero()),
            omega2: std::array::from_fn(|_| DataFunction::zero()),
        }
    }

    pub fn half(&self, half: Half) -> &[DataFunction; 4] {
        match half {
            Half::Omega1 => &self.omega1,
            Half::Omega2 => &self.omega2,
        }
    }

    /// `g_component^{(half)}(x, y)`, component in `1..=4`.
    pub fn g(&self, half: Half, component: usize, x: f64, y: f64) -> Complex64 {
        self.half(half)[component - 1].eval(x, y)
    }

    pub fn support(&self) -> Support {
        self.omega1
            .iter()
            .chain(self.omega2.iter())
            .fold(Support::Empty, |acc, g| acc.union(&g.support()))
    }

    pub fn smoothness(&self) -> Smoothness {
        self.omega1
            .iter()
            .chain(self.omega2.iter())
            .filter(|g| !g.is_zero())
            .fold(Smoothness::Infinite, |acc, g| min_smoothness(acc, g.smoothness()))
    }
}

/// Angle field `theta(t, z)` entering `psi2 = e^{-i theta} psi3` at coincidence.
#[derive(Clone)]
pub enum PhaseFunction {
    Constant(f64),
    /// `e^{-i theta} = i`, i.e. `theta = -pi/2`.
    PlusI,
    /// `e^{-i theta} = -i`, i.e. `theta = pi/2`.
    MinusI,
    /// `offset + dt * t + dz * z`.
    Linear { offset: f64, dt: f64, dz: f64 },
    Custom(RealField),
}

impl fmt::Debug for PhaseFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PhaseFunction::Constant(v) => write!(f, "Constant({v})"),
            PhaseFunction::PlusI => write!(f, "PlusI"),
            PhaseFunction::MinusI => write!(f, "MinusI"),
            PhaseFunction::Linear { offset, dt, dz } => {
                write!(f, "Linear({offset} + {dt} t + {dz} z)")
            }
            PhaseFunction::Custom(_) => write!(f, "Custom"),
        }
    }
}

/// Wrap an angle into `[-pi, pi)`.
pub fn wrap_angle(theta: f64) -> f64 {
    if (-PI..PI).contains(&theta) {
        return theta;
    }
    let w = (theta + PI).rem_euclid(2.0 * PI) - PI;
    if w >= PI {
        w - 2.0 * PI
    } else {
        w
    }
}

impl PhaseFunction {
    fn raw(&self, t: f64, z: f64) -> f64 {
        match self {
            PhaseFunction::Constant(v) => *v,
            PhaseFunction::PlusI => -PI / 2.0,
            PhaseFunction::MinusI => PI / 2.0,
            PhaseFunction::Linear { offset, dt, dz } => offset + dt * t + dz * z,
            PhaseFunction::Custom(f) => f(t, z),
        }
    }

    /// The angle at `(t, z)`, wrapped into `[-pi, pi)`.
    pub fn angle(&self, t: f64, z: f64) -> f64 {
        wrap_angle(self.raw(t, z))
    }

    /// `e^{i theta(t, z)}`. The two fixed presets return `∓i` exactly.
    pub fn phase_factor(&self, t: f64, z: f64) -> Complex64 {
        match self {
            PhaseFunction::PlusI => Complex64::new(0.0, -1.0),
            PhaseFunction::MinusI => Complex64::new(0.0, 1.0),
            _ => Complex64::from_polar(1.0, self.angle(t, z)),
        }
    }

    /// The pointwise negated angle field.
    pub fn negated(&self) -> PhaseFunction {
        match self {
            PhaseFunction::Constant(v) => PhaseFunction::Constant(-v),
            PhaseFunction::PlusI => PhaseFunction::MinusI,
            PhaseFunction::MinusI => PhaseFunction::PlusI,
            PhaseFunction::Linear { offset, dt, dz } => PhaseFunction::Linear {
                offset: -offset,
                dt: -dt,
                dz: -dz,
            },
            PhaseFunction::Custom(f) => {
                let f = f.clone();
                PhaseFunction::Custom(Arc::new(move |t, z| -f(t, z)))
            }
        }
    }
}

/// `theta1` acts at the `Omega1` side of the coincidence set, `theta2` at the `Omega2` side.
#[derive(Debug, Clone)]
pub struct BoundaryPhase {
    pub theta1: PhaseFunction,
    pub theta2: PhaseFunction,
}

impl BoundaryPhase {
    pub fn new(theta1: PhaseFunction, theta2: PhaseFunction) -> Self {
        Self { theta1, theta2 }
    }

    pub fn constant(theta1: f64, theta2: f64) -> Self {
        Self::new(PhaseFunction::Constant(theta1), PhaseFunction::Constant(theta2))
    }

    pub fn theta(&self, half: Half) -> &PhaseFunction {
        match half {
            Half::Omega1 => &self.theta1,
            Half::Omega2 => &self.theta2,
        }
    }
}

/// Boundary values `h_j^±(t, z)` given directly, bypassing the probability
/// conserving phase relation. Used to study existence of solutions in isolation
/// and to build deliberately lossy negative controls.
#[derive(Clone)]
pub struct RawBoundary {
    /// `psi3` on the `Omega1` side for `t >= 0`.
    pub h1_plus: ComplexField,
    /// `psi2` on the `Omega1` side for `t < 0`.
    pub h1_minus: ComplexField,
    /// `psi2` on the `Omega2` side for `t >= 0`.
    pub h2_plus: ComplexField,
    /// `psi3` on the `Omega2` side for `t < 0`.
    pub h2_minus: ComplexField,
}

impl RawBoundary {
    pub fn zero() -> Self {
        let z: ComplexField = Arc::new(|_, _| ZERO);
        Self {
            h1_plus: z.clone(),
            h1_minus: z.clone(),
            h2_plus: z.clone(),
            h2_minus: z,
        }
    }
}

#[derive(Clone)]
pub enum BoundaryRule {
    /// `psi2 = e^{-i theta_j} psi3` at the coincidence limit from `Omega_j`.
    Phases(BoundaryPhase),
    Raw(RawBoundary),
}

impl fmt::Debug for BoundaryRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BoundaryRule::Phases(p) => f.debug_tuple("Phases").field(p).finish(),
            BoundaryRule::Raw(_) => write!(f, "Raw"),
        }
    }
}

/// A complete initial boundary value problem.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub initial: InitialData,
    pub boundary: BoundaryRule,
    pub antisymmetric: bool,
}

impl Scenario {
    pub fn new(initial: InitialData, phase: BoundaryPhase) -> Self {
        Self {
            initial,
            boundary: BoundaryRule::Phases(phase),
            antisymmetric: false,
        }
    }

    pub fn with_raw_boundary(initial: InitialData, raw: RawBoundary) -> Self {
        Self {
            initial,
            boundary: BoundaryRule::Raw(raw),
            antisymmetric: false,
        }
    }

    pub fn zero() -> Self {
        Self::new(InitialData::zero(), BoundaryPhase::constant(0.0, 0.0))
    }

    pub fn phase(&self) -> Option<&BoundaryPhase> {
        match &self.boundary {
            BoundaryRule::Phases(p) => Some(p),
            BoundaryRule::Raw(_) => None,
        }
    }

    /// `h_1^+(t, z)`: value of `psi3` at `(t, z-0, t, z+0)`, `t >= 0`.
    pub fn h1_plus(&self, t: f64, z: f64) -> Complex64 {
        match &self.boundary {
            BoundaryRule::Phases(p) => {
                p.theta1.phase_factor(t, z) * self.initial.g(Half::Omega1, 2, z - t, z + t)
            }
            BoundaryRule::Raw(r) => (r.h1_plus)(t, z),
        }
    }

    /// `h_1^-(t, z)`: value of `psi2` at `(t, z-0, t, z+0)`, `t < 0`.
    pub fn h1_minus(&self, t: f64, z: f64) -> Complex64 {
        match &self.boundary {
            BoundaryRule::Phases(p) => {
                p.theta1.phase_factor(t, z).conj() * self.initial.g(Half::Omega1, 3, z + t, z - t)
            }
            BoundaryRule::Raw(r) => (r.h1_minus)(t, z),
        }
    }

    /// `h_2^+(t, z)`: value of `psi2` at `(t, z+0, t, z-0)`, `t >= 0`.
    pub fn h2_plus(&self, t: f64, z: f64) -> Complex64 {
        match &self.boundary {
            BoundaryRule::Phases(p) => {
                p.theta2.phase_factor(t, z).conj() * self.initial.g(Half::Omega2, 3, z + t, z - t)
            }
            BoundaryRule::Raw(r) => (r.h2_plus)(t, z),
        }
    }

    /// `h_2^-(t, z)`: value of `psi3` at `(t, z+0, t, z-0)`, `t < 0`.
    pub fn h2_minus(&self, t: f64, z: f64) -> Complex64 {
        match &self.boundary {
            BoundaryRule::Phases(p) => {
                p.theta2.phase_factor(t, z) * self.initial.g(Half::Omega2, 2, z - t, z + t)
            }
            BoundaryRule::Raw(r) => (r.h2_minus)(t, z),
        }
    }
}

/// Outcome of checking that initial values meet the boundary values at `t = 0`.
#[derive(Debug, Clone)]
pub struct CompatibilityReport {
    pub max_violation: f64,
    /// Sample points `z` where the violation exceeds `1e-12`.
    pub locations: Vec<f64>,
    /// Largest jump of the first and second derivative across the branch
    /// lines, from one-sided finite differences. Informational.
    pub derivative_jumps: [f64; 2],
}

impl CompatibilityReport {
    pub const TOLERANCE: f64 = 1e-12;

    pub fn is_compatible(&self) -> bool {
        self.max_violation <= Self::TOLERANCE
    }
}

/// Evaluate the four corner conditions
/// `g3^(1)(z,z) = h1+(0,z)`, `g2^(1)(z,z) = h1-(0,z)`,
/// `g2^(2)(z,z) = h2+(0,z)`, `g3^(2)(z,z) = h2-(0,z)`
/// at `sample_count` points spread over the data support.
pub fn check_compatibility(s: &Scenario, sample_count: usize) -> Result<CompatibilityReport> {
    if sample_count == 0 {
        return Err(Error::InvalidInput("sample_count must be at least 1".into()));
    }
    let range = match s.initial.support() {
        Support::Empty => {
            return Ok(CompatibilityReport {
                max_violation: 0.0,
                locations: Vec::new(),
                derivative_jumps: [0.0; 2],
            })
        }
        Support::Box(a, b) => a.hull(&b),
        // unbounded data: sample a representative window
        Support::Unbounded => Interval::new(-10.0, 10.0),
    };
    let g = |half, k, z| s.initial.g(half, k, z, z);
    let corner = |z: f64| -> f64 {
        let c1 = (g(Half::Omega1, 3, z) - s.h1_plus(0.0, z)).norm();
        let c2 = (g(Half::Omega1, 2, z) - s.h1_minus(0.0, z)).norm();
        let c3 = (g(Half::Omega2, 2, z) - s.h2_plus(0.0, z)).norm();
        let c4 = (g(Half::Omega2, 3, z) - s.h2_minus(0.0, z)).norm();
        c1.max(c2).max(c3).max(c4)
    };

    let mut max_violation = 0.0_f64;
    let mut locations = Vec::new();
    let mut jumps = [0.0_f64; 2];
    let step = 1e-3 * range.width().max(1.0);
    for i in 0..sample_count {
        let z = if sample_count == 1 {
            0.5 * (range.lo + range.hi)
        } else {
            range.lo + range.width() * i as f64 / (sample_count - 1) as f64
        };
        let v = corner(z);
        if v > CompatibilityReport::TOLERANCE {
            locations.push(z);
        }
        max_violation = max_violation.max(v);
        let j = derivative_jumps(s, z, step);
        jumps[0] = jumps[0].max(j[0]);
        jumps[1] = jumps[1].max(j[1]);
    }
    Ok(CompatibilityReport {
        max_violation,
        locations,
        derivative_jumps: jumps,
    })
}

/// Jumps of the first two derivatives of the characteristic profiles of
/// `psi2` and `psi3` across the diagonal `x = y` at `(z, z)`, moving along
/// `x` with `y = z` fixed. One-sided three-point stencils.
fn derivative_jumps(s: &Scenario, z: f64, h: f64) -> [f64; 2] {
    use crate::solver::characteristic_profile;
    let mut out = [0.0_f64; 2];
    for half in [Half::Omega1, Half::Omega2] {
        for comp in [2usize, 3] {
            let f = |x: f64| characteristic_profile(s, half, comp, x, z);
            // left side x < z, right side x > z; the point itself belongs to one branch
            let l0 = f(z - 1e-3 * h);
            let l1 = f(z - h);
            let l2 = f(z - 2.0 * h);
            let r0 = f(z + 1e-3 * h);
            let r1 = f(z + h);
            let r2 = f(z + 2.0 * h);
            let dl = (3.0 * l0 - 4.0 * l1 + l2) / (2.0 * h);
            let dr = (-3.0 * r0 + 4.0 * r1 - r2) / (2.0 * h);
            let ddl = (l0 - 2.0 * l1 + l2) / (h * h);
            let ddr = (r0 - 2.0 * r1 + r2) / (h * h);
            out[0] = out[0].max((dl - dr).norm());
            out[1] = out[1].max((ddl - ddr).norm());
        }
    }
    out
}

/// Continue data given on `Omega1` to `Omega2` by exchange antisymmetry
/// `psi^{s1 s2}(x1, x2) = -psi^{s2 s1}(x2, x1)`, and set `theta2 = -theta1`.
pub fn antisymmetric_extension(half: [DataFunction; 4], theta1: PhaseFunction) -> Scenario {
    let omega2 = [
        half[0].exchanged_negated(),
        half[2].exchanged_negated(),
        half[1].exchanged_negated(),
        half[3].exchanged_negated(),
    ];
    let theta2 = theta1.negated();
    Scenario {
        initial: InitialData { omega1: half, omega2 },
        boundary: BoundaryRule::Phases(BoundaryPhase::new(theta1, theta2)),
        antisymmetric: true,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn profiles_vanish_outside_support() {
        let shapes = [
            Profile1D::smooth_bump(-1.0, 2.0).with_wavenumber(3.0),
            Profile1D::poly_bump(-1.0, 2.0, 3).with_amplitude(c(0.0, 2.0)),
        ];
        for p in &shapes {
            for i in 0..1000 {
                let d = 1e-9 + i as f64 * 0.013;
                assert_eq!(p.eval(-1.0 - d), c(0.0, 0.0));
                assert_eq!(p.eval(2.0 + d), c(0.0, 0.0));
            }
            assert_eq!(p.eval(-1.0), c(0.0, 0.0));
            assert_eq!(p.eval(2.0), c(0.0, 0.0));
            assert!(p.eval(0.5).norm() > 0.5);
        }
    }

    #[test]
    fn smooth_bump_peak_is_amplitude() {
        let p = Profile1D::smooth_bump(0.0, 2.0).with_amplitude(c(3.0, 0.0));
        assert!((p.eval(1.0) - c(3.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn normalized_profile_has_unit_norm() {
        let p = Profile1D::smooth_bump(1.0, 4.0).with_wavenumber(2.0).normalized();
        assert!((p.norm_sqr() - 1.0).abs() < 1e-13);
    }

    #[test]
    fn poly_bump_norm_matches_closed_form() {
        // ∫_{-1}^{1} (1-u^2)^2 du = 16/15
        let p = Profile1D::poly_bump(-1.0, 1.0, 0);
        assert!((p.norm_sqr() - 16.0 / 15.0).abs() < 1e-13);
    }

    #[test]
    fn wrap_angle_range() {
        for &a in &[0.0, PI, -PI, 3.0 * PI, -7.5, 100.0, PI - 1e-12] {
            let w = wrap_angle(a);
            assert!((-PI..PI).contains(&w), "{a} -> {w}");
            assert!(((a - w) / (2.0 * PI) - ((a - w) / (2.0 * PI)).round()).abs() < 1e-12);
        }
    }

    #[test]
    fn fixed_phase_presets() {
        let p = PhaseFunction::PlusI;
        assert_eq!(p.phase_factor(0.3, 1.0).conj(), c(0.0, 1.0));
        assert_eq!(p.angle(0.0, 0.0), -PI / 2.0);
        assert_eq!(PhaseFunction::MinusI.phase_factor(0.0, 0.0).conj(), c(0.0, -1.0));
    }

    fn diagonal_scenario(g2: Complex64, g3: Complex64, theta: f64) -> Scenario {
        let mut init = InitialData::zero();
        let box_ = (Interval::new(-1.0, 1.0), Interval::new(-1.0, 1.0));
        init.omega1[1] =
            DataFunction::custom(Support::Box(box_.0, box_.1), Smoothness::Infinite, Arc::new(move |_, _| g2));
        init.omega1[2] =
            DataFunction::custom(Support::Box(box_.0, box_.1), Smoothness::Infinite, Arc::new(move |_, _| g3));
        Scenario::new(init, BoundaryPhase::constant(theta, 0.0))
    }

    #[test]
    fn compatibility_examples() {
        let theta = 0.7;
        let ok = diagonal_scenario(c(1.0, 0.0), Complex64::from_polar(1.0, theta), theta);
        let rep = check_compatibility(&ok, 101).unwrap();
        assert!(rep.max_violation < 1e-15, "{}", rep.max_violation);
        assert!(rep.is_compatible());

        let bad = diagonal_scenario(c(1.0, 0.0), c(0.0, 0.0), 0.0);
        let rep = check_compatibility(&bad, 101).unwrap();
        assert_eq!(rep.max_violation, 1.0);
        assert!(!rep.locations.is_empty());
    }

    #[test]
    fn compatibility_rejects_zero_samples() {
        assert!(check_compatibility(&Scenario::zero(), 0).is_err());
        assert_eq!(check_compatibility(&Scenario::zero(), 1).unwrap().max_violation, 0.0);
    }

    #[test]
    fn antisymmetric_extension_of_product() {
        let u = Profile1D::smooth_bump(-2.0, 0.0).with_wavenumber(1.3);
        let v = Profile1D::poly_bump(0.5, 3.0, 2).with_amplitude(c(0.4, -0.2));
        let mut half: [DataFunction; 4] = std::array::from_fn(|_| DataFunction::zero());
        half[0] = DataFunction::product(u.clone(), v.clone());
        let s = antisymmetric_extension(half, PhaseFunction::Constant(0.4));
        assert!(s.antisymmetric);
        for i in 0..50 {
            let z1 = -3.0 + 0.13 * i as f64;
            let z2 = 4.0 - 0.17 * i as f64;
            let lhs = s.initial.g(Half::Omega2, 1, z1, z2);
            assert_eq!(lhs, -(u.eval(z2) * v.eval(z1)));
        }
        match &s.boundary {
            BoundaryRule::Phases(p) => {
                assert_eq!(p.theta2.angle(0.3, 0.1), -0.4);
            }
            BoundaryRule::Raw(_) => panic!("expected phase boundary"),
        }
    }

    #[test]
    fn antisymmetric_extension_of_zero_and_involution() {
        let half: [DataFunction; 4] = std::array::from_fn(|_| DataFunction::zero());
        let s = antisymmetric_extension(half, PhaseFunction::Constant(0.0));
        assert!(s.initial.omega2.iter().all(DataFunction::is_zero));

        let g = DataFunction::product(
            Profile1D::smooth_bump(0.0, 1.0),
            Profile1D::smooth_bump(2.0, 3.0).with_wavenumber(2.0),
        );
        let twice = g.exchanged_negated().exchanged_negated();
        for i in 0..40 {
            let (x, y) = (0.03 * i as f64, 2.0 + 0.025 * i as f64);
            assert_eq!(twice.eval(x, y), g.eval(x, y));
        }
    }

    #[test]
    fn support_union_and_hull() {
        let a = Support::Box(Interval::new(0.0, 1.0), Interval::new(2.0, 3.0));
        let b = Support::Box(Interval::new(-1.0, 0.5), Interval::new(2.5, 4.0));
        let u = a.union(&b);
        assert_eq!(u, Support::Box(Interval::new(-1.0, 1.0), Interval::new(2.0, 4.0)));
        assert_eq!(u.coordinate_hull().unwrap(), Some(Interval::new(-1.0, 4.0)));
        assert!(Support::Unbounded.coordinate_hull().is_err());
        assert_eq!(Support::Empty.union(&a), a);
    }
}

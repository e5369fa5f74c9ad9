//! Normalization integral over products `Σ × Σ` of space-like curves and its
//! independence of `Σ`.
//!
//! Surfaces are graphs `t = f(z)` with `sup|f'| < 1`. The pulled-back
//! integrand is
//! `j00 - j01 f'(z2) - j10 f'(z1) + j11 f'(z1) f'(z2)`
//! at `(f(z1), z1, f(z2), z2)`. The integration square is cut into panels;
//! panels on the diagonal are split into the two triangles `z1 < z2` and
//! `z1 > z2`, so no rule ever straddles the coincidence set.

use crate::current::current_from_moduli;
use crate::error::{Error, Result};
use crate::geometry::Configuration;
use crate::scenario::{Half, Interval, Scenario};
use crate::solver::{boundary_trace, evaluate, Side};
use crate::spinor::Spinor4;
use rayon::prelude::*;
use std::fmt;
use std::sync::Arc;

/// Largest admissible `sup|f'|`.
pub const MAX_SLOPE: f64 = 1.0 - 1e-6;

pub type RealFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// A space-like curve `t = f(z)`.
#[derive(Clone)]
pub enum Hypersurface {
    Flat { t0: f64 },
    /// Image of `t = t0` under a boost of rapidity `beta`.
    BoostedFlat { beta: f64, t0: f64 },
    /// `height * exp(-((z - center) / width)^2)`.
    Bump { center: f64, height: f64, width: f64 },
    Custom { f: RealFn, df: RealFn, slope_bound: f64 },
}

impl fmt::Debug for Hypersurface {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Hypersurface::Flat { t0 } => write!(f, "Flat({t0})"),
            Hypersurface::BoostedFlat { beta, t0 } => write!(f, "BoostedFlat({beta}, {t0})"),
            Hypersurface::Bump { center, height, width } => write!(f, "Bump({center}, {height}, {width})"),
            Hypersurface::Custom { slope_bound, .. } => write!(f, "Custom(slope <= {slope_bound})"),
        }
    }
}

impl Hypersurface {
    pub fn flat(t0: f64) -> Self {
        Hypersurface::Flat { t0 }
    }

    pub fn boosted_flat(beta: f64, t0: f64) -> Self {
        Hypersurface::BoostedFlat { beta, t0 }
    }

    pub fn bump(center: f64, height: f64, width: f64) -> Self {
        Hypersurface::Bump { center, height, width }
    }

    pub fn time(&self, z: f64) -> f64 {
        match self {
            Hypersurface::Flat { t0 } => *t0,
            Hypersurface::BoostedFlat { beta, t0 } => t0 / beta.cosh() + z * beta.tanh(),
            Hypersurface::Bump { center, height, width } => {
                let u = (z - center) / width;
                height * (-u * u).exp()
            }
            Hypersurface::Custom { f, .. } => f(z),
        }
    }

    pub fn slope(&self, z: f64) -> f64 {
        match self {
            Hypersurface::Flat { .. } => 0.0,
            Hypersurface::BoostedFlat { beta, .. } => beta.tanh(),
            Hypersurface::Bump { center, height, width } => {
                let u = (z - center) / width;
                -2.0 * u / width * height * (-u * u).exp()
            }
            Hypersurface::Custom { df, .. } => df(z),
        }
    }

    /// `sup |f'|`.
    pub fn slope_bound(&self) -> f64 {
        match self {
            Hypersurface::Flat { .. } => 0.0,
            Hypersurface::BoostedFlat { beta, .. } => beta.tanh().abs(),
            Hypersurface::Bump { height, width, .. } => {
                height.abs() * std::f64::consts::SQRT_2 * (-0.5f64).exp() / width.abs()
            }
            Hypersurface::Custom { slope_bound, .. } => *slope_bound,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let slope = self.slope_bound();
        if slope.is_finite() && slope <= MAX_SLOPE {
            Ok(())
        } else {
            Err(Error::NotSpaceLike { slope })
        }
    }

    /// Future-directed unit normal covector `(1, -f') / sqrt(1 - f'^2)`.
    pub fn normal(&self, z: f64) -> [f64; 2] {
        let d = self.slope(z);
        let g = 1.0 / (1.0 - d * d).sqrt();
        [g, -d * g]
    }

    /// Induced length element `sqrt(1 - f'^2)`.
    pub fn measure(&self, z: f64) -> f64 {
        let d = self.slope(z);
        (1.0 - d * d).sqrt()
    }

    /// Point `(f(z1), z1, f(z2), z2)`.
    pub fn configuration(&self, z1: f64, z2: f64) -> Configuration {
        Configuration::new(self.time(z1), z1, self.time(z2), z2)
    }
}

/// Pulled-back current form at one pair of surface points.
pub fn pullback_integrand(j: &crate::current::TensorCurrent, d1: f64, d2: f64) -> f64 {
    j.j00 - j.j01 * d2 - j.j10 * d1 + j.j11 * d1 * d2
}

/// Same quantity written as `n_mu(x1) n_nu(x2) j^{mu nu}` times the induced measures.
pub fn normal_form_integrand(j: &crate::current::TensorCurrent, surf: &Hypersurface, z1: f64, z2: f64) -> f64 {
    let n1 = surf.normal(z1);
    let n2 = surf.normal(z2);
    let mut acc = 0.0;
    for (mu, a) in n1.iter().enumerate() {
        for (nu, b) in n2.iter().enumerate() {
            acc += a * b * j.get(mu, nu);
        }
    }
    acc * surf.measure(z1) * surf.measure(z2)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Rule {
    GaussLegendre(usize),
    /// One Simpson cell per panel; nodes on the diagonal read the boundary trace.
    Simpson,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Adaptivity {
    /// Accepted absolute change on refinement, for the whole box; each region
    /// gets the share proportional to its area.
    pub tolerance: f64,
    pub max_depth: u32,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    pub rule: Rule,
    /// Panels per axis over the truncation interval.
    pub panels: usize,
    /// Extra panels of the same width appended on each side.
    pub padding_panels: usize,
    /// Override of the automatic truncation interval; must contain it.
    pub truncation: Option<Interval>,
    pub adaptivity: Option<Adaptivity>,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            rule: Rule::GaussLegendre(8),
            panels: 64,
            padding_panels: 0,
            truncation: None,
            adaptivity: Some(Adaptivity {
                tolerance: 1e-11,
                max_depth: 3,
            }),
        }
    }
}

impl QuadratureSpec {
    pub fn with_panels(mut self, panels: usize) -> Self {
        self.panels = panels;
        self
    }

    pub fn doubled(self) -> Self {
        let p = self.panels * 2;
        self.with_panels(p)
    }
}

/// Interval of `z` values on `surf` that can carry a nonzero solution when
/// the initial data live in `[support.lo, support.hi]`: the solution at time
/// `t` vanishes for `z` outside `[lo - |t|, hi + |t|]`.
pub fn truncation_interval(surf: &Hypersurface, support: Interval) -> Interval {
    // z + |f(z)| and z - |f(z)| are strictly increasing for |f'| < 1
    // each root is bracketed to adjacent floats; take the outer end
    let lo = solve_increasing(|z| z + surf.time(z).abs() - support.lo, support.lo).0;
    let hi = solve_increasing(|z| z - surf.time(z).abs() - support.hi, support.hi).1;
    Interval::new(lo, hi)
}

/// Bracket `[a, b]` of the root of an increasing function, bisected to
/// floating-point resolution.
fn solve_increasing(g: impl Fn(f64) -> f64, guess: f64) -> (f64, f64) {
    let mut step = 1.0;
    let (mut a, mut b) = (guess, guess);
    while g(a) > 0.0 {
        a -= step;
        step *= 2.0;
    }
    step = 1.0;
    while g(b) < 0.0 {
        b += step;
        step *= 2.0;
    }
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        if g(m) < 0.0 {
            a = m;
        } else {
            b = m;
        }
    }
    (a, b)
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Region {
    Square { x0: f64, x1: f64, y0: f64, y1: f64 },
    /// Duffy-collapsed at `p[0]`.
    Triangle { p: [[f64; 2]; 3] },
}

impl Region {
    fn area(&self) -> f64 {
        match *self {
            Region::Square { x0, x1, y0, y1 } => (x1 - x0) * (y1 - y0),
            Region::Triangle { p } => 0.5 * cross(sub(p[1], p[0]), sub(p[2], p[1])).abs(),
        }
    }

    fn split(&self) -> [Region; 4] {
        match *self {
            Region::Square { x0, x1, y0, y1 } => {
                let xm = 0.5 * (x0 + x1);
                let ym = 0.5 * (y0 + y1);
                [
                    Region::Square { x0, x1: xm, y0, y1: ym },
                    Region::Square { x0: xm, x1, y0, y1: ym },
                    Region::Square { x0, x1: xm, y0: ym, y1 },
                    Region::Square { x0: xm, x1, y0: ym, y1 },
                ]
            }
            Region::Triangle { p } => {
                let m01 = mid(p[0], p[1]);
                let m12 = mid(p[1], p[2]);
                let m02 = mid(p[0], p[2]);
                [
                    Region::Triangle { p: [p[0], m01, m02] },
                    Region::Triangle { p: [m01, p[1], m12] },
                    Region::Triangle { p: [m02, m12, p[2]] },
                    Region::Triangle { p: [m12, m02, m01] },
                ]
            }
        }
    }
}

fn sub(a: [f64; 2], b: [f64; 2]) -> [f64; 2] {
    [a[0] - b[0], a[1] - b[1]]
}

fn cross(a: [f64; 2], b: [f64; 2]) -> f64 {
    a[0] * b[1] - a[1] * b[0]
}

fn mid(a: [f64; 2], b: [f64; 2]) -> [f64; 2] {
    [0.5 * (a[0] + b[0]), 0.5 * (a[1] + b[1])]
}

/// Nodes and weights on `[0, 1]`.
#[derive(Debug, Clone)]
struct UnitRule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl UnitRule {
    fn new(rule: Rule) -> Result<Self> {
        match rule {
            Rule::GaussLegendre(order) => {
                let order = order
                    .try_into()
                    .map_err(|_| Error::InvalidInput("Gauss-Legendre order must be at least 1".into()))?;
                let gl = gauss_quad::GaussLegendre::new(order);
                let (nodes, weights) = gl.iter().map(|(x, w)| (0.5 * (x + 1.0), 0.5 * w)).unzip();
                Ok(Self { nodes, weights })
            }
            Rule::Simpson => Ok(Self {
                nodes: vec![0.0, 0.5, 1.0],
                weights: vec![1.0 / 6.0, 4.0 / 6.0, 1.0 / 6.0],
            }),
        }
    }
}

/// Integrate `f(z1, z2, half)` over a region by a tensor rule.
fn apply_rule<const K: usize, F>(rule: &UnitRule, region: &Region, half: Half, f: &F) -> Result<[f64; K]>
where
    F: Fn(f64, f64, Half) -> Result<[f64; K]>,
{
    let mut acc = [0.0; K];
    for (u, wu) in rule.nodes.iter().zip(&rule.weights) {
        for (v, wv) in rule.nodes.iter().zip(&rule.weights) {
            let (z1, z2, jac) = match *region {
                Region::Square { x0, x1, y0, y1 } => {
                    (x0 + (x1 - x0) * u, y0 + (y1 - y0) * v, (x1 - x0) * (y1 - y0))
                }
                Region::Triangle { p } => {
                    let e1 = sub(p[1], p[0]);
                    let e2 = sub(p[2], p[1]);
                    let z1 = p[0][0] + u * e1[0] + u * v * e2[0];
                    let z2 = p[0][1] + u * e1[1] + u * v * e2[1];
                    (z1, z2, cross(e1, e2).abs() * u)
                }
            };
            if jac == 0.0 {
                continue;
            }
            let val = f(z1, z2, half)?;
            let w = wu * wv * jac;
            for k in 0..K {
                acc[k] += w * val[k];
            }
        }
    }
    Ok(acc)
}

fn max_diff<const K: usize>(a: &[f64; K], b: &[f64; K]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

fn add_into<const K: usize>(acc: &mut [f64; K], x: &[f64; K]) {
    for k in 0..K {
        acc[k] += x[k];
    }
}

struct Integrator<'a, const K: usize, F> {
    rule: UnitRule,
    adaptivity: Option<Adaptivity>,
    box_area: f64,
    f: &'a F,
}

impl<const K: usize, F> Integrator<'_, K, F>
where
    F: Fn(f64, f64, Half) -> Result<[f64; K]> + Sync,
{
    fn region(&self, region: Region, half: Half) -> Result<[f64; K]> {
        let coarse = apply_rule(&self.rule, &region, half, self.f)?;
        self.refine(region, half, coarse, 0)
    }

    fn refine(&self, region: Region, half: Half, coarse: [f64; K], depth: u32) -> Result<[f64; K]> {
        let Some(ad) = self.adaptivity else {
            return Ok(coarse);
        };
        if depth >= ad.max_depth {
            return Ok(coarse);
        }
        let kids = region.split();
        let mut vals = [[0.0; K]; 4];
        let mut fine = [0.0; K];
        for (v, kid) in vals.iter_mut().zip(&kids) {
            *v = apply_rule(&self.rule, kid, half, self.f)?;
            add_into(&mut fine, v);
        }
        if max_diff(&coarse, &fine) <= ad.tolerance * region.area() / self.box_area {
            return Ok(fine);
        }
        let mut acc = [0.0; K];
        for (kid, v) in kids.into_iter().zip(vals) {
            add_into(&mut acc, &self.refine(kid, half, v, depth + 1)?);
        }
        Ok(acc)
    }
}

/// Neumaier-compensated sum of each column, in slice order. Exact zeros
/// leave the result bit-for-bit unchanged.
fn compensated_sum<const K: usize>(values: &[[f64; K]]) -> [f64; K] {
    let mut sum = [0.0; K];
    let mut comp = [0.0; K];
    for v in values {
        for k in 0..K {
            let t = sum[k] + v[k];
            if sum[k].abs() >= v[k].abs() {
                comp[k] += (sum[k] - t) + v[k];
            } else {
                comp[k] += (v[k] - t) + sum[k];
            }
            sum[k] = t;
        }
    }
    std::array::from_fn(|k| sum[k] + comp[k])
}

/// Layout of the integration square: `panels` panels over `base`, plus
/// `padding` panels of the same width on every side.
#[derive(Debug, Clone, Copy, PartialEq)]
struct PanelGrid {
    base: Interval,
    panels: usize,
    padding: usize,
}

impl PanelGrid {
    fn count(&self) -> usize {
        self.panels + 2 * self.padding
    }

    /// Edge `k` in `0..=count()`; the base edges are hit exactly.
    fn edge(&self, k: usize) -> f64 {
        let h = self.base.width() / self.panels as f64;
        let offset = k as f64 - self.padding as f64;
        if k == self.padding {
            self.base.lo
        } else if k == self.padding + self.panels {
            self.base.hi
        } else {
            self.base.lo + h * offset
        }
    }
}

/// Integrate `f(z1, z2, half)` over the square of `grid`, with diagonal
/// panels split into the two triangles.
fn integrate_square<const K: usize, F>(grid: PanelGrid, spec: &QuadratureSpec, f: &F) -> Result<[f64; K]>
where
    F: Fn(f64, f64, Half) -> Result<[f64; K]> + Sync,
{
    let integrator = Integrator {
        rule: UnitRule::new(spec.rule)?,
        adaptivity: spec.adaptivity,
        box_area: grid.base.width() * grid.base.width(),
        f,
    };
    let n = grid.count();
    let panels: Vec<(usize, usize)> = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).collect();
    let values: Vec<[f64; K]> = panels
        .par_iter()
        .map(|&(i, j)| {
            let (x0, x1, y0, y1) = (grid.edge(i), grid.edge(i + 1), grid.edge(j), grid.edge(j + 1));
            if i < j {
                integrator.region(Region::Square { x0, x1, y0, y1 }, Half::Omega1)
            } else if i > j {
                integrator.region(Region::Square { x0, x1, y0, y1 }, Half::Omega2)
            } else {
                // collapsed vertex off the diagonal; the edge p1-p2 is the diagonal
                let upper = Region::Triangle { p: [[x0, y1], [x0, y0], [x1, y1]] };
                let lower = Region::Triangle { p: [[x1, y0], [x0, y0], [x1, y1]] };
                let mut a = integrator.region(upper, Half::Omega1)?;
                let b = integrator.region(lower, Half::Omega2)?;
                add_into(&mut a, &b);
                Ok(a)
            }
        })
        .collect::<Result<_>>()?;
    Ok(compensated_sum(&values))
}

/// Integration grid for `s` on `surf`, or `None` when the data vanish.
fn integration_grid(s: &Scenario, surf: &Hypersurface, q: &QuadratureSpec) -> Result<Option<PanelGrid>> {
    surf.validate()?;
    if q.panels == 0 {
        return Err(Error::InvalidInput("quadrature needs at least one panel".into()));
    }
    let Some(hull) = s.initial.support().coordinate_hull()? else {
        return Ok(None);
    };
    let auto = truncation_interval(surf, hull);
    let base = match q.truncation {
        None => auto,
        Some(t) if t.lo <= auto.lo && t.hi >= auto.hi => t,
        Some(t) => {
            return Err(Error::InvalidInput(format!(
                "truncation [{}, {}] does not contain the propagated support [{}, {}]",
                t.lo, t.hi, auto.lo, auto.hi
            )))
        }
    };
    Ok(Some(PanelGrid {
        base,
        panels: q.panels,
        padding: q.padding_panels,
    }))
}

/// Solution at the surface points over `(z1, z2)`; on the diagonal, the
/// one-sided limit from `half`. `None` for pairs that are not space-like.
pub fn surface_value(s: &Scenario, surf: &Hypersurface, z1: f64, z2: f64, half: Half) -> Result<Option<Spinor4>> {
    let scale = z1.abs().max(z2.abs()).max(1.0);
    if (z1 - z2).abs() <= 4.0 * f64::EPSILON * scale {
        let z = 0.5 * (z1 + z2);
        let side = match half {
            Half::Omega1 => Side::FromOmega1,
            Half::Omega2 => Side::FromOmega2,
        };
        return Ok(Some(boundary_trace(s, surf.time(z), z, side).values));
    }
    match evaluate(s, &surf.configuration(z1, z2)) {
        Ok(v) => Ok(Some(v)),
        Err(Error::OutsideDomain { .. }) => Ok(None),
        Err(e) => Err(e),
    }
}

/// Value and bookkeeping of one surface integral.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SurfaceIntegral {
    pub value: f64,
    /// Integrand evaluations skipped because the pair was not space-like.
    pub excluded_nodes: u64,
}

pub fn normalization_integral_report(s: &Scenario, surf: &Hypersurface, q: &QuadratureSpec) -> Result<SurfaceIntegral> {
    let Some(grid) = integration_grid(s, surf, q)? else {
        return Ok(SurfaceIntegral { value: 0.0, excluded_nodes: 0 });
    };
    let f = |z1: f64, z2: f64, half: Half| -> Result<[f64; 2]> {
        Ok(match surface_value(s, surf, z1, z2, half)? {
            Some(psi) => [pullback_integrand(&current_from_moduli(&psi), surf.slope(z1), surf.slope(z2)), 0.0],
            None => [0.0, 1.0],
        })
    };
    let [value, excluded] = integrate_square(grid, q, &f)?;
    Ok(SurfaceIntegral {
        value,
        excluded_nodes: excluded.round() as u64,
    })
}

/// `∫∫ over (Σ × Σ) ∩ Ω` of the pulled-back current form.
pub fn normalization_integral(s: &Scenario, surf: &Hypersurface, q: &QuadratureSpec) -> Result<f64> {
    Ok(normalization_integral_report(s, surf, q)?.value)
}

/// `∫∫ |psi_i(t, z1, t, z2)|^2 dz1 dz2` for each component.
pub fn component_masses(s: &Scenario, t: f64, q: &QuadratureSpec) -> Result<[f64; 4]> {
    let surf = Hypersurface::flat(t);
    let Some(grid) = integration_grid(s, &surf, q)? else {
        return Ok([0.0; 4]);
    };
    let f = |z1: f64, z2: f64, half: Half| -> Result<[f64; 4]> {
        Ok(match surface_value(s, &surf, z1, z2, half)? {
            Some(psi) => std::array::from_fn(|i| psi[i].norm_sqr()),
            None => [0.0; 4],
        })
    };
    integrate_square(grid, q, &f)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SurfaceComparison {
    pub ia: f64,
    pub ib: f64,
    pub abs_diff: f64,
}

pub fn compare_surfaces(
    s: &Scenario,
    a: &Hypersurface,
    b: &Hypersurface,
    q: &QuadratureSpec,
) -> Result<SurfaceComparison> {
    let ia = normalization_integral(s, a, q)?;
    let ib = normalization_integral(s, b, q)?;
    Ok(SurfaceComparison { ia, ib, abs_diff: (ia - ib).abs() })
}

/// Change of the normalization integral between two surfaces. For a
/// scenario whose boundary values break the phase relation this measures the
/// probability lost or gained at the coincidence set.
pub fn flux_violation_probe(s: &Scenario, a: &Hypersurface, b: &Hypersurface, q: &QuadratureSpec) -> Result<f64> {
    Ok(compare_surfaces(s, a, b, q)?.abs_diff)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::current::tensor_current;
    use crate::scenario::{BoundaryPhase, DataFunction, InitialData, PhaseFunction, Profile1D};
    use num_complex::Complex64;
    use proptest::prelude::*;

    fn packet() -> Scenario {
        let phi = Profile1D::smooth_bump(-4.0, -2.0).with_wavenumber(1.5).normalized();
        let chi = Profile1D::smooth_bump(2.0, 4.0).normalized();
        let mut init = InitialData::zero();
        init.omega1[1] = DataFunction::product(phi, chi);
        Scenario::new(init, BoundaryPhase::constant(0.7, 0.0))
    }

    fn coarse() -> QuadratureSpec {
        QuadratureSpec::default().with_panels(24)
    }

    #[test]
    fn normalized_data_integrate_to_one() {
        let v = normalization_integral(&packet(), &Hypersurface::flat(0.0), &QuadratureSpec::default()).unwrap();
        assert!((v - 1.0).abs() < 1e-10, "{v}");
    }

    #[test]
    fn zero_scenario_integrates_to_zero() {
        let v = normalization_integral(&Scenario::zero(), &Hypersurface::bump(0.0, 0.3, 5.0), &coarse()).unwrap();
        assert_eq!(v, 0.0);
    }

    #[test]
    fn identical_surfaces_compare_exactly() {
        let surf = Hypersurface::boosted_flat(0.4, 0.2);
        let r = compare_surfaces(&packet(), &surf, &surf, &coarse()).unwrap();
        assert_eq!(r.abs_diff, 0.0);
    }

    #[test]
    fn rejects_non_space_like_surfaces() {
        let steep = Hypersurface::bump(0.0, 1.0, 0.5);
        assert!(matches!(
            normalization_integral(&packet(), &steep, &coarse()),
            Err(Error::NotSpaceLike { .. })
        ));
        assert!(Hypersurface::boosted_flat(30.0, 0.0).validate().is_err());
    }

    #[test]
    fn rejects_unbounded_data() {
        let mut init = InitialData::zero();
        init.omega1[0] = DataFunction::constant(Complex64::new(1.0, 0.0));
        let s = Scenario::new(init, BoundaryPhase::constant(0.0, 0.0));
        assert!(matches!(
            normalization_integral(&s, &Hypersurface::flat(0.0), &coarse()),
            Err(Error::UnboundedSupport)
        ));
    }

    #[test]
    fn bump_slope_bound_is_attained() {
        let b = Hypersurface::bump(1.0, 0.3, 5.0);
        let z = 1.0 + 5.0 / std::f64::consts::SQRT_2;
        assert!((b.slope(z).abs() - b.slope_bound()).abs() < 1e-15);
    }

    #[test]
    fn boosted_flat_is_boost_image() {
        let (beta, t0) = (0.6_f64, 0.8);
        let surf = Hypersurface::boosted_flat(beta, t0);
        for s in [-2.0, 0.0, 1.5] {
            let t = t0 * beta.cosh() + s * beta.sinh();
            let z = t0 * beta.sinh() + s * beta.cosh();
            assert!((surf.time(z) - t).abs() < 1e-14);
        }
    }

    #[test]
    fn truncation_solves_edge_equations() {
        let surf = Hypersurface::boosted_flat(0.5, 1.0);
        let i = truncation_interval(&surf, Interval::new(-1.0, 2.0));
        assert!((i.lo + surf.time(i.lo).abs() + 1.0).abs() < 1e-12);
        assert!((i.hi - surf.time(i.hi).abs() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn padding_adds_exact_zeros() {
        let s = packet();
        let surf = Hypersurface::flat(2.5);
        let q = coarse();
        let a = normalization_integral(&s, &surf, &q).unwrap();
        let b = normalization_integral(&s, &surf, &QuadratureSpec { padding_panels: 5, ..q }).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn truncation_override_must_cover_support() {
        let q = QuadratureSpec {
            truncation: Some(Interval::new(-1.0, 1.0)),
            ..coarse()
        };
        assert!(normalization_integral(&packet(), &Hypersurface::flat(0.0), &q).is_err());
    }

    #[test]
    fn flat_integrand_is_density() {
        let s = packet();
        let surf = Hypersurface::flat(1.0);
        let psi = evaluate(&s, &surf.configuration(-2.5, 2.2)).unwrap();
        let j = current_from_moduli(&psi);
        assert_eq!(pullback_integrand(&j, 0.0, 0.0), psi.norm_sqr());
        assert!(pullback_integrand(&j, 0.0, 0.0) >= 0.0);
    }

    #[test]
    fn masses_sum_to_norm_on_flat_slices() {
        let s = packet();
        let q = coarse();
        for t in [0.0, 2.0, 5.0] {
            let m = component_masses(&s, t, &q).unwrap();
            let n = normalization_integral(&s, &Hypersurface::flat(t), &q).unwrap();
            assert!((m.iter().sum::<f64>() - n).abs() < 1e-12);
        }
    }

    #[test]
    fn simpson_rule_runs() {
        let q = QuadratureSpec {
            rule: Rule::Simpson,
            panels: 96,
            adaptivity: None,
            ..QuadratureSpec::default()
        };
        let v = normalization_integral(&packet(), &Hypersurface::flat(0.0), &q).unwrap();
        assert!((v - 1.0).abs() < 1e-3, "{v}");
    }

    #[test]
    fn theta_phase_scenario_conserves_on_bump() {
        let mut s = packet();
        s.boundary = crate::scenario::BoundaryRule::Phases(BoundaryPhase::new(
            PhaseFunction::Linear { offset: 0.1, dt: 0.5, dz: -0.3 },
            PhaseFunction::Constant(0.0),
        ));
        let r = compare_surfaces(&s, &Hypersurface::flat(0.0), &Hypersurface::bump(0.0, 0.3, 5.0), &QuadratureSpec::default())
            .unwrap();
        assert!(r.abs_diff < 1e-6, "{r:?}");
    }

    proptest! {
        #[test]
        fn two_integrand_forms_agree(
            a in prop::array::uniform8(-2.0..2.0f64),
            z1 in -5.0..5.0f64,
            z2 in -5.0..5.0f64,
            h in -0.9..0.9f64,
        ) {
            let psi = Spinor4::new(
                Complex64::new(a[0], a[1]), Complex64::new(a[2], a[3]),
                Complex64::new(a[4], a[5]), Complex64::new(a[6], a[7]),
            );
            let j = tensor_current(&psi).unwrap();
            let surf = Hypersurface::bump(0.5, h, 2.0);
            let lhs = pullback_integrand(&j, surf.slope(z1), surf.slope(z2));
            let rhs = normal_form_integrand(&j, &surf, z1, z2);
            prop_assert!((lhs - rhs).abs() <= 1e-12 * psi.norm_sqr().max(1.0));
        }
    }
}

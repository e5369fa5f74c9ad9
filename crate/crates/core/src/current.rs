//! Tensor current `j^{mu nu} = psibar gamma_1^mu gamma_2^nu psi` and its
//! conservation properties.

use crate::error::{Error, Result};
use crate::geometry::Configuration;
use crate::solver::{central_difference, check_stencil, Side, WaveFunction};
use crate::spinor::{dirac_adjoint, gamma, sigma3_signs, Spinor4};

/// The real 2×2 tensor `j^{mu nu}` at one configuration.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct TensorCurrent {
    pub j00: f64,
    pub j01: f64,
    pub j10: f64,
    pub j11: f64,
}

impl TensorCurrent {
    pub fn get(&self, mu: usize, nu: usize) -> f64 {
        match (mu, nu) {
            (0, 0) => self.j00,
            (0, 1) => self.j01,
            (1, 0) => self.j10,
            (1, 1) => self.j11,
            _ => panic!("Lorentz indices must be 0 or 1"),
        }
    }

    pub fn as_array(&self) -> [f64; 4] {
        [self.j00, self.j01, self.j10, self.j11]
    }

    pub fn from_fn(f: impl Fn(usize, usize) -> f64) -> Self {
        Self {
            j00: f(0, 0),
            j01: f(0, 1),
            j10: f(1, 0),
            j11: f(1, 1),
        }
    }

    pub fn max_abs_diff(&self, other: &TensorCurrent) -> f64 {
        self.as_array()
            .iter()
            .zip(other.as_array())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

/// Relative tolerance on the imaginary part of `j^{mu nu}`.
pub const REALNESS_TOLERANCE: f64 = 1e-13;

pub fn tensor_current(psi: &Spinor4) -> Result<TensorCurrent> {
    let bar = dirac_adjoint(psi);
    let norm_sq = psi.norm_sqr();
    let mut imag = 0.0_f64;
    let mut out = [[0.0; 2]; 2];
    for (mu, row) in out.iter_mut().enumerate() {
        for (nu, entry) in row.iter_mut().enumerate() {
            let m = (gamma(mu as u8, 1) * gamma(nu as u8, 2)).0;
            let v = (bar * m * psi.0)[(0, 0)];
            imag = imag.max(v.im.abs());
            *entry = v.re;
        }
    }
    if imag > REALNESS_TOLERANCE * norm_sq {
        return Err(Error::NonRealCurrent { imag, norm_sq });
    }
    Ok(TensorCurrent::from_fn(|mu, nu| out[mu][nu]))
}

/// Same as [`tensor_current`], read off from the diagonal structure
/// `j^{mu nu} = sum_i s1_i^mu s2_i^nu |psi_i|^2` with `s_k` the `sigma3`
/// signs of slot `k`. Used in inner quadrature loops.
pub fn current_from_moduli(psi: &Spinor4) -> TensorCurrent {
    let s1 = sigma3_signs(1);
    let s2 = sigma3_signs(2);
    let mut j = TensorCurrent::default();
    for i in 0..4 {
        let m = psi[i].norm_sqr();
        j.j00 += m;
        j.j01 += s2[i] * m;
        j.j10 += s1[i] * m;
        j.j11 += s1[i] * s2[i] * m;
    }
    j
}

/// `epsilon_{mu nu} j^{mu nu} = j^{01} - j^{10}`.
pub fn levi_civita_contraction(j: &TensorCurrent) -> f64 {
    j.j01 - j.j10
}

/// Current of a wave function at `c`.
pub fn current_at<W: WaveFunction + ?Sized>(w: &W, c: &Configuration) -> Result<TensorCurrent> {
    tensor_current(&w.evaluate(c)?)
}

/// Divergences `d1[nu] = ∂_{1,mu} j^{mu nu}` and `d2[mu] = ∂_{2,nu} j^{mu nu}`
/// by central differences of step `h`.
pub fn continuity_residual<W: WaveFunction + ?Sized>(
    w: &W,
    c: &Configuration,
    h: f64,
) -> Result<([f64; 2], [f64; 2])> {
    check_stencil(w, c, h)?;
    let j = |p: &Configuration| current_at(w, p).map(|j| j.as_array());
    let dt1 = central_difference(j, c, 0, h)?;
    let dz1 = central_difference(j, c, 1, h)?;
    let dt2 = central_difference(j, c, 2, h)?;
    let dz2 = central_difference(j, c, 3, h)?;
    // array layout: [j00, j01, j10, j11]
    let d1 = [dt1[0] + dz1[2], dt1[1] + dz1[3]];
    let d2 = [dt2[0] + dz2[1], dt2[2] + dz2[3]];
    Ok((d1, d2))
}

pub fn continuity_residual_max<W: WaveFunction + ?Sized>(w: &W, c: &Configuration, h: f64) -> Result<f64> {
    let (d1, d2) = continuity_residual(w, c, h)?;
    Ok(d1.iter().chain(d2.iter()).map(|x| x.abs()).fold(0.0, f64::max))
}

/// `epsilon_{mu nu} j^{mu nu}` of the one-sided limit at `(t, z, t, z)`.
pub fn coincidence_flux<W: WaveFunction + ?Sized>(w: &W, t: f64, z: f64, side: Side) -> Result<f64> {
    let trace = w.boundary_trace(t, z, side);
    Ok(levi_civita_contraction(&tensor_current(&trace.values)?))
}

/// Coefficients of the current 2-form on the coordinate planes of
/// `(z, Z, tau, T)`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
#[allow(non_snake_case)]
pub struct CurrentFormCoefficients {
    pub dz_dZ: f64,
    pub dtau_dZ: f64,
    pub dtau_dz: f64,
    pub dT_dZ: f64,
    pub dz_dT: f64,
    pub dtau_dT: f64,
}

pub fn current_form(psi: &Spinor4) -> Result<CurrentFormCoefficients> {
    let j = tensor_current(psi)?;
    let sum = j.j10 + j.j01;
    let diff = j.j10 - j.j01;
    Ok(CurrentFormCoefficients {
        dz_dZ: 0.5 * j.j00,
        dtau_dZ: -0.25 * sum,
        dtau_dz: 0.25 * diff,
        dT_dZ: -0.25 * diff,
        dz_dT: -0.25 * sum,
        dtau_dT: 0.5 * j.j11,
    })
}

//! Two-particle spin space `C^2 ⊗ C^2` and the gamma matrices acting on it.
//!
//! Components are always indexed through the ordered basis
//! `(e1⊗e1, e1⊗e2, e2⊗e1, e2⊗e2)`; component `k` (1-based) corresponds to the
//! Kronecker index `2a + b` with `a` the slot-1 and `b` the slot-2 basis index.
//! In double-spin notation `psi1 = psi^{-1,-1}`, `psi2 = psi^{-1,1}`,
//! `psi3 = psi^{1,-1}`, `psi4 = psi^{1,1}`.

use nalgebra::{Matrix2, Matrix4, RowVector4, Vector4};
use num_complex::Complex64;
use std::ops::{Add, Index, Mul, Sub};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

/// A 4-component complex amplitude.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Spinor4(pub Vector4<Complex64>);

impl Spinor4 {
    pub fn new(psi1: Complex64, psi2: Complex64, psi3: Complex64, psi4: Complex64) -> Self {
        Self(Vector4::new(psi1, psi2, psi3, psi4))
    }

    pub fn zero() -> Self {
        Self(Vector4::zeros())
    }

    pub fn from_array(a: [Complex64; 4]) -> Self {
        Self(Vector4::from(a))
    }

    pub fn to_array(&self) -> [Complex64; 4] {
        [self.0[0], self.0[1], self.0[2], self.0[3]]
    }

    /// Component `k` in `1..=4`.
    pub fn component(&self, k: usize) -> Complex64 {
        assert!((1..=4).contains(&k), "spinor component index {k} out of range");
        self.0[k - 1]
    }

    /// Amplitude `psi^{s1 s2}` with `s1, s2 ∈ {-1, 1}`.
    pub fn double_index(&self, s1: i8, s2: i8) -> Complex64 {
        self.0[spin_pair_index(s1, s2)]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.0.iter().map(|c| c.norm_sqr()).sum()
    }

    pub fn max_abs_diff(&self, other: &Spinor4) -> f64 {
        self.0
            .iter()
            .zip(other.0.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn scale(&self, k: Complex64) -> Self {
        Self(self.0 * k)
    }
}

impl Index<usize> for Spinor4 {
    type Output = Complex64;
    /// Zero-based access.
    fn index(&self, i: usize) -> &Complex64 {
        &self.0[i]
    }
}

impl Add for Spinor4 {
    type Output = Spinor4;
    fn add(self, rhs: Spinor4) -> Spinor4 {
        Spinor4(self.0 + rhs.0)
    }
}

impl Sub for Spinor4 {
    type Output = Spinor4;
    fn sub(self, rhs: Spinor4) -> Spinor4 {
        Spinor4(self.0 - rhs.0)
    }
}

/// Zero-based storage index of `psi^{s1 s2}`.
pub fn spin_pair_index(s1: i8, s2: i8) -> usize {
    let a = usize::from(s1 > 0);
    let b = usize::from(s2 > 0);
    2 * a + b
}

/// Dense 4×4 complex operator on two-particle spin space.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpinOperator(pub Matrix4<Complex64>);

impl SpinOperator {
    pub fn identity() -> Self {
        Self(Matrix4::identity())
    }

    pub fn zero() -> Self {
        Self(Matrix4::zeros())
    }

    /// `A ⊗ 1`: acts on the spin index of particle 1.
    pub fn first_slot(a: &Matrix2<Complex64>) -> Self {
        Self(a.kronecker(&Matrix2::identity()))
    }

    /// `1 ⊗ B`: acts on the spin index of particle 2.
    pub fn second_slot(b: &Matrix2<Complex64>) -> Self {
        Self(Matrix2::identity().kronecker(b))
    }

    /// Embed a single-particle operator into the slot of `particle` (1 or 2).
    pub fn embed(m: &Matrix2<Complex64>, particle: u8) -> Self {
        match particle {
            1 => Self::first_slot(m),
            2 => Self::second_slot(m),
            _ => panic!("particle index must be 1 or 2, got {particle}"),
        }
    }

    pub fn commutator(&self, other: &SpinOperator) -> SpinOperator {
        SpinOperator(self.0 * other.0 - other.0 * self.0)
    }

    pub fn anticommutator(&self, other: &SpinOperator) -> SpinOperator {
        SpinOperator(self.0 * other.0 + other.0 * self.0)
    }

    pub fn scale(&self, k: Complex64) -> SpinOperator {
        SpinOperator(self.0 * k)
    }

    pub fn adjoint(&self) -> SpinOperator {
        SpinOperator(self.0.adjoint())
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.0.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn apply(&self, s: &Spinor4) -> Spinor4 {
        Spinor4(self.0 * s.0)
    }

    pub fn is_diagonal(&self) -> bool {
        (0..4).all(|r| (0..4).all(|c| r == c || self.0[(r, c)] == ZERO))
    }
}

impl Mul for SpinOperator {
    type Output = SpinOperator;
    fn mul(self, rhs: SpinOperator) -> SpinOperator {
        SpinOperator(self.0 * rhs.0)
    }
}

impl Add for SpinOperator {
    type Output = SpinOperator;
    fn add(self, rhs: SpinOperator) -> SpinOperator {
        SpinOperator(self.0 + rhs.0)
    }
}

impl Sub for SpinOperator {
    type Output = SpinOperator;
    fn sub(self, rhs: SpinOperator) -> SpinOperator {
        SpinOperator(self.0 - rhs.0)
    }
}

pub fn sigma1() -> Matrix2<Complex64> {
    Matrix2::new(ZERO, ONE, ONE, ZERO)
}

pub fn sigma2() -> Matrix2<Complex64> {
    Matrix2::new(ZERO, -I, I, ZERO)
}

pub fn sigma3() -> Matrix2<Complex64> {
    Matrix2::new(ONE, ZERO, ZERO, -ONE)
}

/// Single-particle gamma matrix: `gamma^0 = sigma1`, `gamma^1 = sigma1 sigma3`.
pub fn gamma_1d(mu: u8) -> Matrix2<Complex64> {
    match mu {
        0 => sigma1(),
        1 => sigma1() * sigma3(),
        _ => panic!("Lorentz index must be 0 or 1, got {mu}"),
    }
}

/// Metric `g = diag(1, -1)`.
pub fn metric(mu: u8, nu: u8) -> f64 {
    match (mu, nu) {
        (0, 0) => 1.0,
        (1, 1) => -1.0,
        _ => 0.0,
    }
}

/// `gamma_k^mu` acting on the spin index of particle `k`.
pub fn gamma(mu: u8, particle: u8) -> SpinOperator {
    SpinOperator::embed(&gamma_1d(mu), particle)
}

/// `gamma_k^5 = i gamma_k^0 gamma_k^1`, equal to `i sigma3` in slot `k`.
pub fn gamma5(particle: u8) -> SpinOperator {
    (gamma(0, particle) * gamma(1, particle)).scale(I)
}

/// Max residual of `{gamma^mu, gamma^nu} - 2 g^{mu nu}` over `mu, nu ∈ {0, 1}`.
pub fn clifford_check(particle: u8) -> f64 {
    let mut worst = 0.0_f64;
    for mu in 0..2u8 {
        for nu in 0..2u8 {
            let ac = gamma(mu, particle).anticommutator(&gamma(nu, particle));
            let rhs = SpinOperator::identity().scale(Complex64::new(2.0 * metric(mu, nu), 0.0));
            worst = worst.max((ac - rhs).max_abs());
        }
    }
    worst
}

/// Two-particle Dirac adjoint `psi^† gamma_1^0 gamma_2^0`.
pub fn dirac_adjoint(s: &Spinor4) -> RowVector4<Complex64> {
    s.0.adjoint() * (gamma(0, 1) * gamma(0, 2)).0
}

/// Norm of `[sigma3 ⊗ 1, 1 ⊗ sigma3]`: the coefficient matrices of the two
/// evolution equations must commute for the system to be consistent.
pub fn compatibility_commutator() -> f64 {
    let a = SpinOperator::first_slot(&sigma3());
    let b = SpinOperator::second_slot(&sigma3());
    a.commutator(&b).max_abs()
}

/// `epsilon_{mu nu} gamma_1^mu gamma_2^nu = gamma_1^0 gamma_2^1 - gamma_1^1 gamma_2^0`.
pub fn levi_civita_gamma() -> SpinOperator {
    gamma(0, 1) * gamma(1, 2) - gamma(1, 1) * gamma(0, 2)
}

/// Diagonal signs of `sigma3` in the slot of `particle`, in basis order.
pub fn sigma3_signs(particle: u8) -> [f64; 4] {
    match particle {
        1 => [1.0, 1.0, -1.0, -1.0],
        2 => [1.0, -1.0, 1.0, -1.0],
        _ => panic!("particle index must be 1 or 2, got {particle}"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn gamma0_particle1_block_layout() {
        let g = gamma(0, 1).0;
        // sigma1 ⊗ 1: a12 = a21 = 1 placed per the tensor block pattern
        let mut expected = Matrix4::<Complex64>::zeros();
        expected[(0, 2)] = ONE;
        expected[(1, 3)] = ONE;
        expected[(2, 0)] = ONE;
        expected[(3, 1)] = ONE;
        assert_eq!(g, expected);
    }

    #[test]
    fn slot_embeddings_follow_tensor_layout() {
        let a = Matrix2::new(c(1.0), c(2.0), c(3.0), c(4.0));
        let first = SpinOperator::first_slot(&a).0;
        let second = SpinOperator::second_slot(&a).0;
        let e = |m: &Matrix4<Complex64>, r: usize, col: usize| m[(r, col)].re;
        assert_eq!(
            [e(&first, 0, 0), e(&first, 0, 2), e(&first, 1, 1), e(&first, 1, 3)],
            [1.0, 2.0, 1.0, 2.0]
        );
        assert_eq!(
            [e(&first, 2, 0), e(&first, 2, 2), e(&first, 3, 1), e(&first, 3, 3)],
            [3.0, 4.0, 3.0, 4.0]
        );
        assert_eq!(e(&first, 0, 1), 0.0);
        assert_eq!(
            [e(&second, 0, 0), e(&second, 0, 1), e(&second, 1, 0), e(&second, 1, 1)],
            [1.0, 2.0, 3.0, 4.0]
        );
        assert_eq!(
            [e(&second, 2, 2), e(&second, 2, 3), e(&second, 3, 2), e(&second, 3, 3)],
            [1.0, 2.0, 3.0, 4.0]
        );
        assert_eq!(e(&second, 0, 2), 0.0);
    }

    #[test]
    fn gamma_squares() {
        for k in 1..=2 {
            assert_eq!(gamma(0, k) * gamma(0, k), SpinOperator::identity());
            assert_eq!(
                gamma(1, k) * gamma(1, k),
                SpinOperator::identity().scale(c(-1.0))
            );
        }
    }

    #[test]
    fn different_slots_commute() {
        for mu in 0..2 {
            for nu in 0..2 {
                assert_eq!(gamma(mu, 1).commutator(&gamma(nu, 2)).max_abs(), 0.0);
            }
        }
    }

    #[test]
    fn gamma5_values() {
        let expected = SpinOperator::first_slot(&sigma3()).scale(I);
        assert_eq!(gamma5(1), expected);
        assert_eq!(gamma5(2), SpinOperator::second_slot(&sigma3()).scale(I));
        for k in 1..=2 {
            assert_eq!(gamma5(k) * gamma5(k), SpinOperator::identity().scale(c(-1.0)));
        }
        assert_eq!(gamma5(1) * gamma5(2), gamma5(2) * gamma5(1));
    }

    #[test]
    fn clifford_relations_exact() {
        assert_eq!(clifford_check(1), 0.0);
        assert_eq!(clifford_check(2), 0.0);
        let ac = gamma(0, 1).anticommutator(&gamma(1, 1));
        assert_eq!(ac.max_abs(), 0.0);
    }

    #[test]
    fn adjoint_examples() {
        let e1 = Spinor4::new(ONE, ZERO, ZERO, ZERO);
        let adj = dirac_adjoint(&e1);
        assert_eq!(adj, RowVector4::new(ZERO, ZERO, ZERO, ONE));
        assert_eq!(dirac_adjoint(&Spinor4::zero()), RowVector4::zeros());
        // conjugate-linear
        let s = Spinor4::new(c(1.0), I, c(-2.0), Complex64::new(0.5, 0.5));
        let k = Complex64::new(0.3, -1.2);
        let lhs = dirac_adjoint(&s.scale(k));
        let rhs = dirac_adjoint(&s) * k.conj();
        assert!((lhs - rhs).iter().all(|d| d.norm() < 1e-15));
    }

    #[test]
    fn compatibility_commutator_vanishes() {
        assert_eq!(compatibility_commutator(), 0.0);
        let a = SpinOperator::second_slot(&sigma3());
        let b = SpinOperator::first_slot(&sigma3());
        assert_eq!(a.commutator(&b).max_abs(), 0.0);
        // i gamma_k^mu: constant coefficient matrices commute across particles
        for mu in 0..2 {
            for nu in 0..2 {
                let a = gamma(mu, 1).scale(I);
                let b = gamma(nu, 2).scale(I);
                assert_eq!(a.commutator(&b).max_abs(), 0.0);
            }
        }
    }

    #[test]
    fn sigma3_signs_match_embedding() {
        for k in 1..=2u8 {
            let m = SpinOperator::embed(&sigma3(), k).0;
            let signs = sigma3_signs(k);
            for i in 0..4 {
                assert_eq!(m[(i, i)].re, signs[i]);
            }
        }
    }

    #[test]
    fn levi_civita_gamma_layout() {
        let m = levi_civita_gamma().0;
        assert_eq!(m[(1, 2)], c(2.0));
        assert_eq!(m[(2, 1)], c(-2.0));
        let nonzero = m.iter().filter(|z| **z != ZERO).count();
        assert_eq!(nonzero, 2);
    }

    #[test]
    fn double_index_matches_basis() {
        let s = Spinor4::new(c(1.0), c(2.0), c(3.0), c(4.0));
        assert_eq!(s.double_index(-1, -1), c(1.0));
        assert_eq!(s.double_index(-1, 1), c(2.0));
        assert_eq!(s.double_index(1, -1), c(3.0));
        assert_eq!(s.double_index(1, 1), c(4.0));
        assert_eq!(sigma2() * sigma2(), Matrix2::identity());
    }
}

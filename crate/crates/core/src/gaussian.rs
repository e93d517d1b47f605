//! Pure Gaussian states and the exact pair quantities between them.
//!
//! A state is (d, V) with quadrature ordering (x₁, p₁, …, x_n, p_n), ħ = 1 and
//! vacuum V = I/2. Pairwise quantities (overlap, cross characteristic function,
//! cross moments) are evaluated through the position-space wavefunction
//!
//!   ψ(x) = N exp(-½ xᵀA x + βᵀx + γ),
//!
//! in the canonical gauge where N = det(2πV_xx)^{-1/4} is real positive,
//! β = A x₀ + i p₀ and γ = -½ x₀ᵀA x₀ - (i/2) p₀ᵀx₀. The gauge matters: all
//! overlap *phases* produced here are phases of this specific wavefunction
//! convention, and the Fock oracle aligns to it when comparing.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::linalg;
use crate::C64;

const I: C64 = C64::new(0.0, 1.0);

/// Displacements and squeezing of one mode: the state D(x₀, p₀) S(r, θ)|0⟩,
/// whose covariance block is ½ R(θ) diag(e^{-2r}, e^{2r}) R(θ)ᵀ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeParams {
    pub x0: f64,
    pub p0: f64,
    pub r: f64,
    pub theta: f64,
}

impl ModeParams {
    pub fn displaced(x0: f64, p0: f64) -> Self {
        Self { x0, p0, r: 0.0, theta: 0.0 }
    }

    pub fn squeezed(r: f64) -> Self {
        Self { x0: 0.0, p0: 0.0, r, theta: 0.0 }
    }
}

/// The symplectic form Ω, block diagonal with per-mode blocks [[0, 1], [-1, 0]].
#[derive(Debug, Clone)]
pub struct SymplecticForm {
    n_modes: usize,
    matrix: DMatrix<f64>,
}

impl SymplecticForm {
    pub fn new(n_modes: usize) -> Result<Self> {
        if n_modes == 0 {
            return Err(Error::InvalidParameter("mode count must be at least 1".into()));
        }
        Ok(Self { n_modes, matrix: symplectic_form(n_modes) })
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }
}

/// Ω as a bare matrix.
pub fn symplectic_form(n_modes: usize) -> DMatrix<f64> {
    let mut omega = DMatrix::zeros(2 * n_modes, 2 * n_modes);
    for k in 0..n_modes {
        omega[(2 * k, 2 * k + 1)] = 1.0;
        omega[(2 * k + 1, 2 * k)] = -1.0;
    }
    omega
}

/// A pure n-mode Gaussian state: mean vector d = ⟨R̂⟩ and covariance
/// V = ½⟨{R̂ - d, (R̂ - d)ᵀ}⟩. Construction validates symmetry, the uncertainty
/// relation (V + iΩ/2 ⪰ 0 up to -1e-10) and purity (det V = 2^{-2n} to
/// relative 1e-8), so a value of this type is always a physical pure state.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianPure {
    n_modes: usize,
    d: DVector<f64>,
    v: DMatrix<f64>,
}

impl GaussianPure {
    pub fn new(d: DVector<f64>, v: DMatrix<f64>) -> Result<Self> {
        let dim = d.len();
        if dim == 0 || dim % 2 != 0 {
            return Err(Error::InvalidParameter(format!(
                "mean vector length {dim} is not a positive even number"
            )));
        }
        if v.nrows() != dim || v.ncols() != dim {
            return Err(Error::DimensionMismatch(format!(
                "covariance is {}x{}, expected {dim}x{dim}",
                v.nrows(),
                v.ncols()
            )));
        }
        if d.iter().any(|x| !x.is_finite()) || v.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidParameter("non-finite entry in (d, V)".into()));
        }
        let n_modes = dim / 2;
        let scale = v.iter().fold(1.0_f64, |acc, x| acc.max(x.abs()));
        let asym = (&v - v.transpose()).iter().fold(0.0_f64, |acc, x| acc.max(x.abs()));
        if asym > 1e-12 * scale {
            return Err(Error::UnphysicalCovariance(format!(
                "covariance asymmetry {asym:.3e}"
            )));
        }
        // Uncertainty: V + iΩ/2 is Hermitian; its spectrum must be ≥ -1e-10.
        let mut herm = linalg::to_complex(&v);
        let omega = symplectic_form(n_modes);
        for i in 0..dim {
            for j in 0..dim {
                herm[(i, j)] += I * C64::new(0.5 * omega[(i, j)], 0.0);
            }
        }
        let min_eig = linalg::herm_eigenvalues_desc(&herm)
            .last()
            .copied()
            .unwrap_or(f64::NEG_INFINITY);
        if min_eig < -1e-10 {
            return Err(Error::UnphysicalCovariance(format!(
                "uncertainty relation violated: min eig(V + iΩ/2) = {min_eig:.3e}"
            )));
        }
        let det = v.clone().lu().determinant();
        let pure_det = 0.25_f64.powi(n_modes as i32);
        if (det - pure_det).abs() > 1e-8 * pure_det {
            return Err(Error::UnphysicalCovariance(format!(
                "not a pure state: det V = {det:.12e}, expected {pure_det:.12e}"
            )));
        }
        Ok(Self { n_modes, d, v })
    }

    /// The n-mode vacuum: d = 0, V = I/2.
    pub fn vacuum(n_modes: usize) -> Result<Self> {
        if n_modes == 0 {
            return Err(Error::InvalidParameter("mode count must be at least 1".into()));
        }
        Ok(Self {
            n_modes,
            d: DVector::zeros(2 * n_modes),
            v: DMatrix::identity(2 * n_modes, 2 * n_modes) * 0.5,
        })
    }

    /// Product of per-mode displaced squeezed states ⊗_k D(x₀ₖ, p₀ₖ) S(rₖ, θₖ)|0⟩.
    pub fn displaced_squeezed(modes: &[ModeParams]) -> Result<Self> {
        if modes.is_empty() {
            return Err(Error::InvalidParameter("mode parameter list is empty".into()));
        }
        let n = modes.len();
        let mut d = DVector::zeros(2 * n);
        let mut v = DMatrix::zeros(2 * n, 2 * n);
        for (k, m) in modes.iter().enumerate() {
            if ![m.x0, m.p0, m.r, m.theta].iter().all(|x| x.is_finite()) {
                return Err(Error::InvalidParameter(format!(
                    "non-finite mode parameter in mode {k}"
                )));
            }
            if !(0.0..std::f64::consts::TAU).contains(&m.theta) {
                return Err(Error::InvalidParameter(format!(
                    "theta = {} outside [0, 2π) in mode {k}",
                    m.theta
                )));
            }
            d[2 * k] = m.x0;
            d[2 * k + 1] = m.p0;
            // ½ R(θ) diag(e^{-2r}, e^{2r}) R(θ)ᵀ written out.
            let (ch, sh) = ((2.0 * m.r).cosh(), (2.0 * m.r).sinh());
            let (c2, s2) = ((2.0 * m.theta).cos(), (2.0 * m.theta).sin());
            v[(2 * k, 2 * k)] = 0.5 * (ch - c2 * sh);
            v[(2 * k + 1, 2 * k + 1)] = 0.5 * (ch + c2 * sh);
            v[(2 * k, 2 * k + 1)] = -0.5 * s2 * sh;
            v[(2 * k + 1, 2 * k)] = v[(2 * k, 2 * k + 1)];
        }
        Self::new(d, v)
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    pub fn mean(&self) -> &DVector<f64> {
        &self.d
    }

    pub fn covariance(&self) -> &DMatrix<f64> {
        &self.v
    }

    /// Symplectic eigenvalues of the covariance; all ½ for a valid pure state.
    pub fn symplectic_eigenvalues(&self) -> Result<Vec<f64>> {
        symplectic_eigenvalues(&self.v)
    }
}

/// Symplectic eigenvalues of a (not necessarily pure) covariance matrix:
/// moduli of the eigenvalues of ΩV, which come in ±iν pairs. Pairs are
/// deduplicated with a 1e-10 pairing tolerance.
pub fn symplectic_eigenvalues(v: &DMatrix<f64>) -> Result<Vec<f64>> {
    let dim = v.nrows();
    if dim == 0 || dim % 2 != 0 || v.ncols() != dim {
        return Err(Error::DimensionMismatch(format!(
            "covariance is {}x{}",
            v.nrows(),
            v.ncols()
        )));
    }
    let omega_v = linalg::to_complex(&(symplectic_form(dim / 2) * v));
    let mut moduli: Vec<f64> = linalg::complex_eigenvalues(&omega_v)?
        .iter()
        .map(|z| z.norm())
        .collect();
    moduli.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let mut nus = Vec::with_capacity(dim / 2);
    for pair in moduli.chunks(2) {
        let gap = (pair[0] - pair[1]).abs();
        if gap > 1e-10 * pair[0].max(1.0) {
            return Err(Error::InvalidState(format!(
                "symplectic spectrum failed to pair: |{:.12e}| vs |{:.12e}|",
                pair[0], pair[1]
            )));
        }
        nus.push(0.5 * (pair[0] + pair[1]));
    }
    Ok(nus)
}

/// Wavefunction data (A, β, γ, N) of a pure Gaussian in the canonical gauge.
#[derive(Debug, Clone)]
pub struct WavefunctionParams {
    n_modes: usize,
    a: DMatrix<C64>,
    beta: DVector<C64>,
    gamma: C64,
    norm: f64,
}

impl WavefunctionParams {
    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    pub fn quadratic(&self) -> &DMatrix<C64> {
        &self.a
    }

    pub fn linear(&self) -> &DVector<C64> {
        &self.beta
    }

    pub fn constant(&self) -> C64 {
        self.gamma
    }

    pub fn prefactor(&self) -> f64 {
        self.norm
    }

    /// Invert the gauge map: recover (d, V) from (A, β).
    pub fn reconstruct(&self) -> Result<GaussianPure> {
        let n = self.n_modes;
        let a_re = self.a.map(|z| z.re);
        let a_im = self.a.map(|z| z.im);
        let a_re_lu = a_re.clone().lu();
        // V_xx = ½ A_R⁻¹, V_xp = -½ A_R⁻¹ A_I, V_pp = ½ (A_R + A_I A_R⁻¹ A_I).
        let vxx = a_re_lu
            .solve(&(DMatrix::identity(n, n) * 0.5))
            .ok_or_else(|| Error::DegenerateCovariance("Re A is singular".into()))?;
        let vxp = -a_re_lu
            .solve(&(&a_im * 0.5))
            .ok_or_else(|| Error::DegenerateCovariance("Re A is singular".into()))?;
        let vpp = (&a_re + &a_im * a_re_lu.solve(&a_im).unwrap()) * 0.5;
        let x0 = a_re_lu
            .solve(&self.beta.map(|z| z.re))
            .ok_or_else(|| Error::DegenerateCovariance("Re A is singular".into()))?;
        let p0 = self.beta.map(|z| z.im) - &a_im * &x0;
        let mut d = DVector::zeros(2 * n);
        let mut v = DMatrix::zeros(2 * n, 2 * n);
        for i in 0..n {
            d[2 * i] = x0[i];
            d[2 * i + 1] = p0[i];
            for j in 0..n {
                v[(2 * i, 2 * j)] = vxx[(i, j)];
                v[(2 * i, 2 * j + 1)] = vxp[(i, j)];
                v[(2 * i + 1, 2 * j)] = vxp[(j, i)];
                v[(2 * i + 1, 2 * j + 1)] = vpp[(i, j)];
            }
        }
        GaussianPure::new(d, v)
    }
}

fn split_blocks(g: &GaussianPure) -> (DMatrix<f64>, DMatrix<f64>, DVector<f64>, DVector<f64>) {
    let n = g.n_modes();
    let vxx = DMatrix::from_fn(n, n, |i, j| g.v[(2 * i, 2 * j)]);
    let vxp = DMatrix::from_fn(n, n, |i, j| g.v[(2 * i, 2 * j + 1)]);
    let x0 = DVector::from_fn(n, |i, _| g.d[2 * i]);
    let p0 = DVector::from_fn(n, |i, _| g.d[2 * i + 1]);
    (vxx, vxp, x0, p0)
}

/// Map (d, V) to the canonical-gauge wavefunction parameters:
/// A = V_xx⁻¹(I/2 - i V_xp), β = A x₀ + i p₀, γ = -½x₀ᵀAx₀ - (i/2)p₀ᵀx₀,
/// N = det(2πV_xx)^{-1/4}.
pub fn wavefunction_params(g: &GaussianPure) -> Result<WavefunctionParams> {
    let n = g.n_modes();
    let (vxx, vxp, x0, p0) = split_blocks(g);
    let eigs = vxx.clone().symmetric_eigen().eigenvalues;
    let (max_e, min_e) = (eigs.max(), eigs.min());
    if !(min_e > 0.0) || max_e / min_e > 1e14 {
        return Err(Error::DegenerateCovariance(format!(
            "V_xx condition number {:.3e} past 1e14",
            max_e / min_e
        )));
    }
    let rhs = DMatrix::from_fn(n, n, |i, j| {
        C64::new(if i == j { 0.5 } else { 0.0 }, -vxp[(i, j)])
    });
    let a_raw = linalg::to_complex(&vxx)
        .lu()
        .solve(&rhs)
        .ok_or_else(|| Error::DegenerateCovariance("V_xx is singular".into()))?;
    // A is symmetric for any pure-state covariance; enforce it exactly and
    // reject inputs where that is not just roundoff.
    let asym = (&a_raw - a_raw.transpose())
        .iter()
        .fold(0.0_f64, |acc, z| acc.max(z.norm()));
    let scale = a_raw.iter().fold(1.0_f64, |acc, z| acc.max(z.norm()));
    if asym > 1e-10 * scale {
        return Err(Error::InvalidState(format!(
            "wavefunction matrix asymmetry {asym:.3e}; covariance is not pure-state"
        )));
    }
    let a = (&a_raw + a_raw.transpose()) * C64::new(0.5, 0.0);
    let x0c = x0.map(|x| C64::new(x, 0.0));
    let beta = &a * &x0c + p0.map(|p| C64::new(0.0, p));
    let gamma = -0.5 * (x0c.transpose() * &a * &x0c)[(0, 0)] - 0.5 * I * C64::new(p0.dot(&x0), 0.0);
    let det_vxx = vxx.lu().determinant();
    let norm = ((2.0 * std::f64::consts::PI).powi(n as i32) * det_vxx).powf(-0.25);
    Ok(WavefunctionParams { n_modes: n, a, beta, gamma, norm })
}

/// Contract a bra (conjugated) and a ket parameter set: the Gaussian integral
/// ∫ ψ̄₁ψ₂ = N₁N₂ (2π)^{n/2} det(S)^{-1/2} exp(γ̄₁ + γ₂ + ½BᵀS⁻¹B) with
/// S = Ā₁ + A₂ and B = β̄₁ + β₂.
fn contract(w1: &WavefunctionParams, w2: &WavefunctionParams) -> Result<C64> {
    let n = w1.n_modes;
    let s = w1.a.conjugate() + &w2.a;
    let sqrt_det = linalg::sqrt_det_right_half_plane(&s)?;
    let b = w1.beta.conjugate() + &w2.beta;
    let s_inv_b = s
        .lu()
        .solve(&b)
        .ok_or_else(|| Error::DegeneratePair("Ā₁ + A₂ is singular".into()))?;
    let quad = 0.5 * (b.transpose() * s_inv_b)[(0, 0)];
    let prefactor = (2.0 * std::f64::consts::PI).powf(0.5 * n as f64) / sqrt_det;
    Ok(C64::new(w1.norm * w2.norm, 0.0) * prefactor * (w1.gamma.conj() + w2.gamma + quad).exp())
}

/// Exact overlap ⟨g₁|g₂⟩ in the canonical gauge.
pub fn overlap(g1: &GaussianPure, g2: &GaussianPure) -> Result<C64> {
    if g1.n_modes() != g2.n_modes() {
        return Err(Error::DimensionMismatch(format!(
            "overlap between {}-mode and {}-mode states",
            g1.n_modes(),
            g2.n_modes()
        )));
    }
    contract(&wavefunction_params(g1)?, &wavefunction_params(g2)?)
}

/// |⟨g₁|g₂⟩|² from means and covariances alone:
/// exp(-½ Δdᵀ(V₁+V₂)⁻¹Δd) / √det(V₁+V₂). Exact for pure states.
pub fn overlap_magnitude_sq(g1: &GaussianPure, g2: &GaussianPure) -> Result<f64> {
    if g1.n_modes() != g2.n_modes() {
        return Err(Error::DimensionMismatch(format!(
            "overlap between {}-mode and {}-mode states",
            g1.n_modes(),
            g2.n_modes()
        )));
    }
    let vsum = &g1.v + &g2.v;
    let dd = &g1.d - &g2.d;
    let lu = vsum.clone().lu();
    let det = lu.determinant();
    let sol = lu
        .solve(&dd)
        .ok_or_else(|| Error::DegeneratePair("V₁ + V₂ is singular".into()))?;
    Ok((-0.5 * dd.dot(&sol)).exp() / det.sqrt())
}

/// Parameters of D(η, π)ψ where D displaces x by η and p by π:
/// [Dψ](x) = e^{iπᵀ(x - η/2)} ψ(x - η).
fn shift_params(w: &WavefunctionParams, eta: &DVector<f64>, pi: &DVector<f64>) -> WavefunctionParams {
    let etac = eta.map(|x| C64::new(x, 0.0));
    let beta = &w.beta + &w.a * &etac + pi.map(|p| C64::new(0.0, p));
    let beta_eta = (w.beta.transpose() * &etac)[(0, 0)];
    let eta_a_eta = (etac.transpose() * &w.a * &etac)[(0, 0)];
    let pi_eta = pi.dot(eta);
    let gamma = w.gamma - beta_eta - 0.5 * eta_a_eta - 0.5 * I * C64::new(pi_eta, 0.0);
    WavefunctionParams { n_modes: w.n_modes, a: w.a.clone(), beta, gamma, norm: w.norm }
}

/// Cross characteristic function χ₁₂(ξ) = ⟨g₁|D(ξ)|g₂⟩ for ξ in the interleaved
/// quadrature ordering; D(ξ) displaces the state by +ξ in phase space.
pub fn cross_characteristic(g1: &GaussianPure, g2: &GaussianPure, xi: &DVector<f64>) -> Result<C64> {
    if g1.n_modes() != g2.n_modes() {
        return Err(Error::DimensionMismatch(format!(
            "characteristic function between {}-mode and {}-mode states",
            g1.n_modes(),
            g2.n_modes()
        )));
    }
    if xi.len() != 2 * g1.n_modes() {
        return Err(Error::DimensionMismatch(format!(
            "phase-space argument has length {}, expected {}",
            xi.len(),
            2 * g1.n_modes()
        )));
    }
    if xi.iter().any(|x| !x.is_finite()) {
        return Err(Error::InvalidParameter("non-finite phase-space argument".into()));
    }
    let n = g1.n_modes();
    let eta = DVector::from_fn(n, |i, _| xi[2 * i]);
    let pi = DVector::from_fn(n, |i, _| xi[2 * i + 1]);
    let w1 = wavefunction_params(g1)?;
    let w2 = shift_params(&wavefunction_params(g2)?, &eta, &pi);
    contract(&w1, &w2)
}

/// Single-mode cross moments ⟨g₁|Ô|g₂⟩ for Ô ∈ {1, x̂, p̂, x̂², ½{x̂,p̂}, p̂²}.
#[derive(Debug, Clone)]
pub struct CrossMomentData {
    /// ⟨g₁|g₂⟩.
    pub overlap: C64,
    /// (⟨g₁|x̂|g₂⟩, ⟨g₁|p̂|g₂⟩).
    pub first: DVector<C64>,
    /// [[⟨x̂²⟩₁₂, ½⟨{x̂,p̂}⟩₁₂], [·, ⟨p̂²⟩₁₂]], symmetric.
    pub second: DMatrix<C64>,
}

/// Closed-form single-mode cross moments between two pure Gaussians.
pub fn cross_moments(g1: &GaussianPure, g2: &GaussianPure) -> Result<CrossMomentData> {
    if g1.n_modes() != 1 || g2.n_modes() != 1 {
        return Err(Error::UnsupportedDimension(
            "cross moments are implemented for single-mode states".into(),
        ));
    }
    let w1 = wavefunction_params(g1)?;
    let w2 = wavefunction_params(g2)?;
    let a2 = w2.a[(0, 0)];
    let b2 = w2.beta[0];
    let s = w1.a[(0, 0)].conj() + a2;
    if s.re <= 0.0 {
        return Err(Error::DegeneratePair(format!(
            "Ā₁ + A₂ = {s} has non-positive real part"
        )));
    }
    let b = w1.beta[0].conj() + b2;
    let mu = b / s;
    let sigma = s.powi(-1);
    let tau = std::f64::consts::TAU;
    let g12 = C64::new(w1.norm * w2.norm, 0.0)
        * (C64::new(tau, 0.0) / s).sqrt()
        * (w1.gamma.conj() + w2.gamma + b * b / (2.0 * s)).exp();
    let x2 = sigma + mu * mu;
    let x12 = g12 * mu;
    let p12 = g12 * I * (a2 * mu - b2);
    let xx12 = g12 * x2;
    let xp12 = g12 * I * (a2 * x2 - b2 * mu - C64::new(0.5, 0.0));
    let pp12 = g12 * (a2 - a2 * a2 * x2 + 2.0 * a2 * b2 * mu - b2 * b2);
    Ok(CrossMomentData {
        overlap: g12,
        first: DVector::from_vec(vec![x12, p12]),
        second: DMatrix::from_row_slice(2, 2, &[xx12, xp12, xp12, pp12]),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn single(x0: f64, p0: f64, r: f64, theta: f64) -> GaussianPure {
        GaussianPure::displaced_squeezed(&[ModeParams { x0, p0, r, theta }]).unwrap()
    }

    #[test]
    fn vacuum_constructor() {
        let g = single(0.0, 0.0, 0.0, 0.0);
        assert_eq!(g.mean(), &DVector::zeros(2));
        assert_eq!(g.covariance(), &(DMatrix::identity(2, 2) * 0.5));
    }

    #[test]
    fn squeezed_covariance_diagonal() {
        let g = single(0.0, 0.0, 0.5, 0.0);
        let v = g.covariance();
        assert!((v[(0, 0)] - 0.5 * (-1.0_f64).exp()).abs() < 1e-15);
        assert!((v[(1, 1)] - 0.5 * (1.0_f64).exp()).abs() < 1e-15);
        assert!(v[(0, 1)].abs() < 1e-15);
    }

    #[test]
    fn rotated_squeezing_matches_conjugated_diagonal() {
        let (r, theta) = (0.3, std::f64::consts::FRAC_PI_4);
        let g = single(1.0, 0.0, r, theta);
        let rot = DMatrix::from_row_slice(2, 2, &[theta.cos(), -theta.sin(), theta.sin(), theta.cos()]);
        let diag = DMatrix::from_diagonal(&DVector::from_vec(vec![
            0.5 * (-2.0 * r).exp(),
            0.5 * (2.0 * r).exp(),
        ]));
        let expect = &rot * diag * rot.transpose();
        assert!((g.covariance() - expect).iter().all(|x| x.abs() < 1e-14));
    }

    #[test]
    fn constructor_rejects_bad_parameters() {
        assert!(matches!(
            GaussianPure::displaced_squeezed(&[ModeParams { x0: f64::NAN, p0: 0.0, r: 0.0, theta: 0.0 }]),
            Err(Error::InvalidParameter(_))
        ));
        assert!(matches!(
            GaussianPure::displaced_squeezed(&[ModeParams { x0: 0.0, p0: 0.0, r: 0.0, theta: 7.0 }]),
            Err(Error::InvalidParameter(_))
        ));
    }

    #[test]
    fn constructor_rejects_unphysical_covariances() {
        // Thermal: uncertainty fine, purity violated.
        let thermal = GaussianPure::new(DVector::zeros(2), DMatrix::identity(2, 2));
        assert!(matches!(thermal, Err(Error::UnphysicalCovariance(_))));
        // Sub-vacuum isotropic: uncertainty violated.
        let squeezed_both = GaussianPure::new(DVector::zeros(2), DMatrix::identity(2, 2) * 0.1);
        assert!(matches!(squeezed_both, Err(Error::UnphysicalCovariance(_))));
        // Asymmetric covariance.
        let mut v = DMatrix::identity(2, 2) * 0.5;
        v[(0, 1)] = 1e-3;
        assert!(matches!(
            GaussianPure::new(DVector::zeros(2), v),
            Err(Error::UnphysicalCovariance(_))
        ));
    }

    #[test]
    fn wavefunction_gauge_vacuum() {
        let w = wavefunction_params(&single(0.0, 0.0, 0.0, 0.0)).unwrap();
        assert!((w.quadratic()[(0, 0)] - C64::new(1.0, 0.0)).norm() < 1e-14);
        assert!(w.linear()[0].norm() < 1e-14);
        assert!(w.constant().norm() < 1e-14);
        assert!((w.prefactor() - std::f64::consts::PI.powf(-0.25)).abs() < 1e-14);
    }

    #[test]
    fn wavefunction_gauge_squeezed_and_displaced() {
        let r = 0.7;
        let w = wavefunction_params(&single(0.0, 0.0, r, 0.0)).unwrap();
        assert!((w.quadratic()[(0, 0)] - C64::new((2.0 * r).exp(), 0.0)).norm() < 1e-12);
        let w = wavefunction_params(&single(1.5, -0.4, 0.0, 0.0)).unwrap();
        assert!((w.linear()[0] - C64::new(1.5, -0.4)).norm() < 1e-12);
        let expect_gamma = C64::new(-0.5 * 1.5 * 1.5, 0.5 * 0.4 * 1.5);
        assert!((w.constant() - expect_gamma).norm() < 1e-12);
    }

    #[test]
    fn gauge_round_trips() {
        for g in [
            single(0.3, -1.1, 0.4, 1.2),
            single(-2.0, 0.7, -0.6, 5.5),
            GaussianPure::displaced_squeezed(&[
                ModeParams { x0: 0.5, p0: 0.2, r: 0.3, theta: 0.9 },
                ModeParams { x0: -0.1, p0: 1.4, r: -0.5, theta: 2.3 },
            ])
            .unwrap(),
        ] {
            let back = wavefunction_params(&g).unwrap().reconstruct().unwrap();
            assert!((back.mean() - g.mean()).iter().all(|x| x.abs() < 1e-12));
            assert!((back.covariance() - g.covariance()).iter().all(|x| x.abs() < 1e-12));
        }
    }

    #[test]
    fn overlap_normalization_and_symmetry() {
        let g1 = single(0.8, -0.3, 0.25, 0.7);
        let g2 = single(-0.2, 0.5, -0.4, 3.0);
        assert!((overlap(&g1, &g1).unwrap() - C64::new(1.0, 0.0)).norm() < 1e-12);
        assert!((overlap(&g2, &g2).unwrap() - C64::new(1.0, 0.0)).norm() < 1e-12);
        let o12 = overlap(&g1, &g2).unwrap();
        let o21 = overlap(&g2, &g1).unwrap();
        assert!((o12 - o21.conj()).norm() < 1e-12);
    }

    #[test]
    fn overlap_of_displaced_vacua() {
        // ⟨0|D(x₀=2)|0⟩ = e^{-1}; the coherent amplitude is x₀/√2.
        let vac = single(0.0, 0.0, 0.0, 0.0);
        let disp = single(2.0, 0.0, 0.0, 0.0);
        let o = overlap(&vac, &disp).unwrap();
        assert!((o - C64::new((-1.0_f64).exp(), 0.0)).norm() < 1e-12);
        // Symmetric pair at ±s: overlap e^{-s²}, real in this gauge.
        let s = 0.9;
        let o = overlap(&single(s, 0.0, 0.0, 0.0), &single(-s, 0.0, 0.0, 0.0)).unwrap();
        assert!((o - C64::new((-s * s).exp(), 0.0)).norm() < 1e-12);
    }

    #[test]
    fn overlap_vs_magnitude_identity() {
        let pairs = [
            (single(0.8, -0.3, 0.25, 0.7), single(-0.2, 0.5, -0.4, 3.0)),
            (single(0.0, 0.0, 0.0, 0.0), single(1.0, 1.0, 0.8, 0.0)),
            (single(0.4, 0.0, 0.5, 1.0), single(0.4, 0.0, 0.5, 4.0)),
        ];
        for (g1, g2) in pairs {
            let direct = overlap(&g1, &g2).unwrap().norm_sqr();
            let identity = overlap_magnitude_sq(&g1, &g2).unwrap();
            assert!(
                (direct - identity).abs() <= 1e-10 * identity.max(1e-300),
                "direct {direct:.15e} vs identity {identity:.15e}"
            );
        }
    }

    #[test]
    fn squeezed_vacuum_overlap_value() {
        // |⟨0|S(r)|0⟩|² = 1/cosh r.
        let r = 0.8;
        let o = overlap(&single(0.0, 0.0, 0.0, 0.0), &single(0.0, 0.0, r, 0.0)).unwrap();
        assert!((o.norm_sqr() - 1.0 / r.cosh()).abs() < 1e-12);
        assert!(o.im.abs() < 1e-14);
    }

    #[test]
    fn multimode_overlap_factorizes() {
        let a1 = ModeParams { x0: 0.5, p0: 0.2, r: 0.3, theta: 0.9 };
        let a2 = ModeParams { x0: -0.3, p0: 0.8, r: -0.2, theta: 2.0 };
        let b1 = ModeParams { x0: 1.0, p0: -0.4, r: 0.1, theta: 0.0 };
        let b2 = ModeParams { x0: 0.0, p0: 0.0, r: 0.5, theta: 1.1 };
        let big1 = GaussianPure::displaced_squeezed(&[a1, a2]).unwrap();
        let big2 = GaussianPure::displaced_squeezed(&[b1, b2]).unwrap();
        let o_big = overlap(&big1, &big2).unwrap();
        let o_fac = overlap(
            &GaussianPure::displaced_squeezed(&[a1]).unwrap(),
            &GaussianPure::displaced_squeezed(&[b1]).unwrap(),
        )
        .unwrap()
            * overlap(
                &GaussianPure::displaced_squeezed(&[a2]).unwrap(),
                &GaussianPure::displaced_squeezed(&[b2]).unwrap(),
            )
            .unwrap();
        assert!((o_big - o_fac).norm() < 1e-12);
    }

    #[test]
    fn overlap_dimension_mismatch() {
        let g1 = single(0.0, 0.0, 0.0, 0.0);
        let g2 = GaussianPure::vacuum(2).unwrap();
        assert!(matches!(overlap(&g1, &g2), Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn characteristic_function_of_vacuum() {
        let vac = single(0.0, 0.0, 0.0, 0.0);
        let xi = DVector::from_vec(vec![0.7, -0.4]);
        let chi = cross_characteristic(&vac, &vac, &xi).unwrap();
        let expect = (-0.25 * (0.7_f64 * 0.7 + 0.4 * 0.4)).exp();
        assert!((chi - C64::new(expect, 0.0)).norm() < 1e-13);
    }

    #[test]
    fn characteristic_function_displaced_phase() {
        // ⟨g|D(ξ)|g⟩ = exp(-¼|ξ|² + i(x₀ξ_p - p₀ξ_x)) for a displaced vacuum.
        let (x0, p0) = (1.2, -0.7);
        let g = single(x0, p0, 0.0, 0.0);
        let (ex, ep) = (0.3, 0.5);
        let chi = cross_characteristic(&g, &g, &DVector::from_vec(vec![ex, ep])).unwrap();
        let expect = C64::new(0.0, x0 * ep - p0 * ex).exp()
            * C64::new((-0.25 * (ex * ex + ep * ep)).exp(), 0.0);
        assert!((chi - expect).norm() < 1e-13);
    }

    #[test]
    fn characteristic_function_at_zero_is_overlap() {
        let g1 = single(0.8, -0.3, 0.25, 0.7);
        let g2 = single(-0.2, 0.5, -0.4, 3.0);
        let chi0 = cross_characteristic(&g1, &g2, &DVector::zeros(2)).unwrap();
        assert!((chi0 - overlap(&g1, &g2).unwrap()).norm() < 1e-13);
    }

    #[test]
    fn characteristic_function_hermiticity_and_bound() {
        let g1 = single(0.8, -0.3, 0.25, 0.7);
        let g2 = single(-0.2, 0.5, -0.4, 3.0);
        for xi in [
            DVector::from_vec(vec![0.3, -0.2]),
            DVector::from_vec(vec![-1.1, 0.9]),
            DVector::from_vec(vec![2.0, 2.0]),
        ] {
            let chi_ij = cross_characteristic(&g1, &g2, &xi).unwrap();
            let chi_ji = cross_characteristic(&g2, &g1, &(-&xi)).unwrap();
            assert!((chi_ji - chi_ij.conj()).norm() < 1e-12);
            assert!(chi_ij.norm() <= 1.0 + 1e-12);
        }
    }

    #[test]
    fn cross_moments_diagonal_values() {
        let vac = single(0.0, 0.0, 0.0, 0.0);
        let m = cross_moments(&vac, &vac).unwrap();
        assert!((m.overlap - C64::new(1.0, 0.0)).norm() < 1e-13);
        assert!(m.first.iter().all(|z| z.norm() < 1e-13));
        assert!((m.second[(0, 0)] - C64::new(0.5, 0.0)).norm() < 1e-13);
        assert!((m.second[(1, 1)] - C64::new(0.5, 0.0)).norm() < 1e-13);
        assert!(m.second[(0, 1)].norm() < 1e-13);

        let (x0, p0) = (0.9, -1.3);
        let g = single(x0, p0, 0.0, 0.0);
        let m = cross_moments(&g, &g).unwrap();
        assert!((m.first[0] - C64::new(x0, 0.0)).norm() < 1e-12);
        assert!((m.first[1] - C64::new(p0, 0.0)).norm() < 1e-12);
        assert!((m.second[(0, 0)] - C64::new(0.5 + x0 * x0, 0.0)).norm() < 1e-12);
        assert!((m.second[(0, 1)] - C64::new(x0 * p0, 0.0)).norm() < 1e-12);
        assert!((m.second[(1, 1)] - C64::new(0.5 + p0 * p0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn cross_moments_swap_conjugates() {
        let g1 = single(0.8, -0.3, 0.25, 0.7);
        let g2 = single(-0.2, 0.5, -0.4, 3.0);
        let m12 = cross_moments(&g1, &g2).unwrap();
        let m21 = cross_moments(&g2, &g1).unwrap();
        assert!((m12.overlap - m21.overlap.conj()).norm() < 1e-12);
        for i in 0..2 {
            assert!((m12.first[i] - m21.first[i].conj()).norm() < 1e-12);
            for j in 0..2 {
                assert!((m12.second[(i, j)] - m21.second[(i, j)].conj()).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn cross_moments_reject_multimode() {
        let g = GaussianPure::vacuum(2).unwrap();
        assert!(matches!(cross_moments(&g, &g), Err(Error::UnsupportedDimension(_))));
    }

    #[test]
    fn symplectic_eigenvalues_basics() {
        let g = single(0.4, -1.0, 0.8, 2.2);
        let nus = g.symplectic_eigenvalues().unwrap();
        assert_eq!(nus.len(), 1);
        assert!((nus[0] - 0.5).abs() < 1e-10);
        // A thermal covariance 2V has ν = 1.
        let nus = symplectic_eigenvalues(&DMatrix::identity(2, 2)).unwrap();
        assert!((nus[0] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn symplectic_form_properties() {
        let omega = SymplecticForm::new(3).unwrap();
        let m = omega.matrix();
        assert_eq!(m.transpose(), -m);
        assert_eq!(m * m, -DMatrix::identity(6, 6));
    }
}

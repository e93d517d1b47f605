//! Spectral diagnostics: entropies, the dephased two-branch family with its
//! closed-form spectrum, moment assembly for superpositions and mixtures, and
//! relative-entropy non-Gaussianity.
//!
//! Non-Gaussianity is δ = S(τ) - S(ρ) where τ is the Gaussian state with the
//! same first and second moments as ρ. Both entropies are exact here: S(ρ)
//! from the reduced density matrix on the branch manifold, S(τ) from the
//! symplectic spectrum of the assembled covariance.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::gaussian::{self, GaussianPure};
use crate::linalg;
use crate::manifold::{self, BranchManifold, EffectiveState, SupportedMixture};
use crate::C64;

/// -Σ λ ln λ of a probability spectrum. Entries in [-1e-10, 0) are treated
/// as roundoff zeros; anything lower, or a total off 1 by more than 1e-8,
/// is rejected.
pub fn von_neumann_entropy(spectrum: &[f64]) -> Result<f64> {
    let mut sum = 0.0;
    let mut s = 0.0;
    for &w in spectrum {
        if !w.is_finite() || w < -1e-10 {
            return Err(Error::InvalidState(format!(
                "spectrum entry {w:.3e} is not a probability"
            )));
        }
        sum += w;
        if w > 0.0 {
            s -= w * w.ln();
        }
    }
    if (sum - 1.0).abs() > 1e-8 {
        return Err(Error::InvalidState(format!(
            "spectrum sums to {sum:.12}, expected 1"
        )));
    }
    Ok(s)
}

/// Rényi entropy log(Σ λ^α)/(1-α) for α > 0, α ≠ 1.
pub fn renyi_entropy(spectrum: &[f64], alpha: f64) -> Result<f64> {
    if !alpha.is_finite() || alpha <= 0.0 || (alpha - 1.0).abs() < 1e-12 {
        return Err(Error::InvalidParameter(format!(
            "Rényi order must be positive and ≠ 1, got {alpha}"
        )));
    }
    let mut sum = 0.0;
    let mut powered = 0.0;
    for &w in spectrum {
        if !w.is_finite() || w < -1e-10 {
            return Err(Error::InvalidState(format!(
                "spectrum entry {w:.3e} is not a probability"
            )));
        }
        sum += w;
        if w > 0.0 {
            powered += w.powf(alpha);
        }
    }
    if (sum - 1.0).abs() > 1e-8 {
        return Err(Error::InvalidState(format!(
            "spectrum sums to {sum:.12}, expected 1"
        )));
    }
    Ok(powered.ln() / (1.0 - alpha))
}

/// The dephased two-branch family on branches |g₁⟩, |g₂⟩:
///
///   ρ(κ, p) = p |ψ₊⟩⟨ψ₊| + (1-p) |ψ₋⟩⟨ψ₋|,   |ψ±⟩ ∝ |g₁⟩ ± κ|g₂⟩,
///
/// with the branch-pair gauge fixed so the overlap enters as g = |⟨g₁|g₂⟩|.
#[derive(Debug, Clone, Copy)]
pub struct TwoBranchMixSpec {
    pub kappa: f64,
    pub p: f64,
}

impl TwoBranchMixSpec {
    pub fn new(kappa: f64, p: f64) -> Result<Self> {
        if !kappa.is_finite() || kappa < 0.0 {
            return Err(Error::InvalidParameter(format!(
                "branch weight κ must be finite and ≥ 0, got {kappa}"
            )));
        }
        if !p.is_finite() || !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidParameter(format!(
                "mixing probability must lie in [0, 1], got {p}"
            )));
        }
        Ok(Self { kappa, p })
    }
}

/// det ρ(κ, p) in closed form:
/// 4 p (1-p) κ² (1-g²) / ((1+κ²)² - (2κg)²).
pub fn detrho_closed_form(kappa: f64, p: f64, g: f64) -> Result<f64> {
    let spec = TwoBranchMixSpec::new(kappa, p)?;
    if !g.is_finite() || !(0.0..1.0).contains(&g) {
        return Err(Error::InvalidParameter(format!(
            "overlap magnitude must lie in [0, 1), got {g}"
        )));
    }
    let k2 = spec.kappa * spec.kappa;
    let denom = (1.0 + k2).powi(2) - (2.0 * spec.kappa * g).powi(2);
    Ok(4.0 * spec.p * (1.0 - spec.p) * k2 * (1.0 - g * g) / denom)
}

/// Spectrum {λ₊, λ₋} of ρ(κ, p) in closed form: λ± = ½(1 ± √(1 - 4 det ρ)).
pub fn two_branch_spectrum_closed_form(kappa: f64, p: f64, g: f64) -> Result<[f64; 2]> {
    let det = detrho_closed_form(kappa, p, g)?;
    let disc = (1.0 - 4.0 * det).max(0.0).sqrt();
    Ok([0.5 * (1.0 + disc), 0.5 * (1.0 - disc)])
}

/// The two mixture components of ρ(κ, p) as manifold coefficients, with the
/// second branch phased by the overlap argument so the model sees g = |o|.
pub fn two_branch_components(overlap01: C64, spec: &TwoBranchMixSpec) -> Vec<(f64, DVector<C64>)> {
    let phase = if overlap01.norm() > 0.0 {
        C64::new(0.0, -overlap01.arg()).exp()
    } else {
        C64::new(1.0, 0.0)
    };
    let kappa = C64::new(spec.kappa, 0.0);
    vec![
        (spec.p, DVector::from_vec(vec![C64::new(1.0, 0.0), kappa * phase])),
        (1.0 - spec.p, DVector::from_vec(vec![C64::new(1.0, 0.0), -kappa * phase])),
    ]
}

/// Assemble ρ(κ, p) on a concrete branch pair through the Löwdin reduction.
pub fn two_branch_effective_state(
    g1: &GaussianPure,
    g2: &GaussianPure,
    spec: &TwoBranchMixSpec,
    threshold: Option<f64>,
) -> Result<EffectiveState> {
    let m = BranchManifold::build(&[g1.clone(), g2.clone()], threshold)?;
    let components = two_branch_components(m.gram()[(0, 1)], spec);
    let mixture = SupportedMixture::new(components)?;
    manifold::effective_density(&m, &mixture)
}

/// First and second moments of a state on single-mode branches.
#[derive(Debug, Clone)]
pub struct MomentSummary {
    pub mean: DVector<f64>,
    pub covariance: DMatrix<f64>,
}

/// Moments of the normalized superposition Σ_k c_k|g_k⟩ assembled from
/// pairwise cross moments. Single-mode branches only.
pub fn superposition_moments(
    branches: &[GaussianPure],
    coeffs: &DVector<C64>,
) -> Result<MomentSummary> {
    let (mean_raw, second_raw, norm) = raw_moments(branches, coeffs)?;
    let mean_c = mean_raw / C64::new(norm, 0.0);
    let second_c = second_raw / C64::new(norm, 0.0);
    let (mean, res_mean) = vector_real(&mean_c);
    let (second, res_second) = matrix_real(&second_c);
    let residue = res_mean.max(res_second);
    if residue > 1e-9 {
        return Err(Error::InvalidState(format!(
            "assembled moments have imaginary residue {residue:.3e}"
        )));
    }
    let covariance = &second - &mean * mean.transpose();
    Ok(MomentSummary { mean, covariance })
}

/// Moments of a mixture Σ_μ p_μ |ψ_μ⟩⟨ψ_μ|/Z_μ: raw moments combine convexly,
/// the covariance is recentred once at the end.
pub fn mixture_moments(
    branches: &[GaussianPure],
    components: &[(f64, DVector<C64>)],
) -> Result<MomentSummary> {
    if components.is_empty() {
        return Err(Error::InvalidState("mixture has no components".into()));
    }
    let mut mean_acc = DVector::<C64>::zeros(2);
    let mut second_acc = DMatrix::<C64>::zeros(2, 2);
    for (p, c) in components {
        if *p == 0.0 {
            continue;
        }
        let (mean_raw, second_raw, norm) = raw_moments(branches, c)?;
        mean_acc += mean_raw * C64::new(p / norm, 0.0);
        second_acc += second_raw * C64::new(p / norm, 0.0);
    }
    let (mean, res_mean) = vector_real(&mean_acc);
    let (second, res_second) = matrix_real(&second_acc);
    let residue = res_mean.max(res_second);
    if residue > 1e-9 {
        return Err(Error::InvalidState(format!(
            "assembled moments have imaginary residue {residue:.3e}"
        )));
    }
    let covariance = &second - &mean * mean.transpose();
    Ok(MomentSummary { mean, covariance })
}

/// Unnormalized ⟨ψ|R̂|ψ⟩, ⟨ψ|R̂R̂|ψ⟩ (symmetrized) and ⟨ψ|ψ⟩ for
/// |ψ⟩ = Σ_k c_k|g_k⟩.
fn raw_moments(
    branches: &[GaussianPure],
    coeffs: &DVector<C64>,
) -> Result<(DVector<C64>, DMatrix<C64>, f64)> {
    if branches.is_empty() {
        return Err(Error::InvalidParameter("branch list is empty".into()));
    }
    if coeffs.len() != branches.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} coefficients for {} branches",
            coeffs.len(),
            branches.len()
        )));
    }
    let d = branches.len();
    let mut mean = DVector::<C64>::zeros(2);
    let mut second = DMatrix::<C64>::zeros(2, 2);
    let mut norm = C64::new(0.0, 0.0);
    for i in 0..d {
        for j in 0..d {
            let w = coeffs[i].conj() * coeffs[j];
            if w.norm_sqr() == 0.0 {
                continue;
            }
            let cm = gaussian::cross_moments(&branches[i], &branches[j])?;
            norm += w * cm.overlap;
            mean += cm.first.map(|z| w * z);
            second += cm.second.map(|z| w * z);
        }
    }
    if norm.im.abs() > 1e-10 * norm.re.abs().max(1.0) {
        return Err(Error::InvalidState(format!(
            "state norm {norm} is not real"
        )));
    }
    if norm.re <= 1e-12 * coeffs.iter().map(|z| z.norm_sqr()).sum::<f64>().max(1.0) {
        return Err(Error::DestructiveInterference(norm.re));
    }
    Ok((mean, second, norm.re))
}

fn vector_real(v: &DVector<C64>) -> (DVector<f64>, f64) {
    let residue = v.iter().fold(0.0_f64, |acc, z| acc.max(z.im.abs()));
    (v.map(|z| z.re), residue)
}

fn matrix_real(m: &DMatrix<C64>) -> (DMatrix<f64>, f64) {
    let sym = linalg::hermitian_part(m);
    let residue = sym.iter().fold(0.0_f64, |acc, z| acc.max(z.im.abs()));
    (sym.map(|z| z.re), residue)
}

/// h(ν) = (ν+½)ln(ν+½) - (ν-½)ln(ν-½), the entropy of one thermal mode.
pub fn thermal_mode_entropy(nu: f64) -> Result<f64> {
    if nu < 0.5 - 1e-9 {
        return Err(Error::UnphysicalCovariance(format!(
            "symplectic eigenvalue {nu:.12e} below the vacuum floor"
        )));
    }
    if nu <= 0.5 {
        return Ok(0.0);
    }
    let (a, b) = (nu + 0.5, nu - 0.5);
    Ok(a * a.ln() - b * b.ln())
}

/// Entropy of the Gaussian state with covariance `v`: Σ_k h(ν_k) over the
/// symplectic spectrum.
pub fn gaussian_reference_entropy(v: &DMatrix<f64>) -> Result<f64> {
    let nus = gaussian::symplectic_eigenvalues(v)?;
    nus.into_iter().map(thermal_mode_entropy).sum()
}

/// Relative-entropy non-Gaussianity δ = S(τ) - S(ρ) of a mixture supported on
/// single-mode branches; τ is the Gaussian state with the moments of ρ.
/// Exact on both sides: the reduction gives S(ρ), the assembled covariance
/// gives S(τ). δ ≥ 0 always; roundoff down to -1e-9 is clamped to zero.
pub fn non_gaussianity(
    branches: &[GaussianPure],
    components: &[(f64, DVector<C64>)],
    threshold: Option<f64>,
) -> Result<f64> {
    let m = BranchManifold::build(branches, threshold)?;
    let mixture = SupportedMixture::new(components.to_vec())?;
    let rho = manifold::effective_density(&m, &mixture)?;
    let s_rho = von_neumann_entropy(&rho.spectrum())?;
    let moments = mixture_moments(branches, components)?;
    let s_tau = gaussian_reference_entropy(&moments.covariance)?;
    let delta = s_tau - s_rho;
    if delta < -1e-9 {
        return Err(Error::InvalidState(format!(
            "non-Gaussianity {delta:.3e} came out negative beyond roundoff"
        )));
    }
    Ok(delta.max(0.0))
}

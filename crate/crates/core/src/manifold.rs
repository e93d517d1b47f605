//! Finite branch manifolds and the exact reduction to effective density matrices.
//!
//! A set of D pure Gaussian branches {|g_k⟩} spans a D-dimensional (generically
//! non-orthogonal) subspace with Gram matrix G_kl = ⟨g_k|g_l⟩. Any state
//! supported on the span — a mixture ρ = Σ_μ p_μ |ψ_μ⟩⟨ψ_μ| with
//! |ψ_μ⟩ = Σ_k c_kμ |g_k⟩ — reduces exactly to the D×D matrix
//!
//!   ρ_eff = G^{1/2} X G^{1/2},   X = Σ_μ p_μ c_μ c_μ† / (c_μ† G c_μ),
//!
//! expressed in the Löwdin (symmetrically orthogonalized) basis G^{-1/2}|g_k⟩.
//! The reduction is exact: ρ_eff carries the full spectrum of the infinite-
//! dimensional state, so entropies and other spectral functionals can be read
//! off a small Hermitian matrix.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::gaussian::{self, GaussianPure};
use crate::linalg;
use crate::C64;

/// Default conditioning threshold for a D-branch Gram matrix.
pub fn default_conditioning_threshold(dim: usize) -> f64 {
    1e-10 * dim as f64
}

/// A manifold of D Gaussian branches with its Gram matrix and the Löwdin
/// square roots G^{±1/2} precomputed.
#[derive(Debug, Clone)]
pub struct BranchManifold {
    dim: usize,
    branches: Option<Vec<GaussianPure>>,
    gram: DMatrix<C64>,
    g_half: DMatrix<C64>,
    g_neg_half: DMatrix<C64>,
    min_eigenvalue: f64,
    threshold: f64,
    rank: usize,
}

impl BranchManifold {
    /// Build from explicit branches; the Gram matrix comes from exact pairwise
    /// overlaps. `threshold` defaults to 1e-10·D; a Gram eigenvalue at or below
    /// it is treated as numerical linear dependence and rejected.
    pub fn build(branches: &[GaussianPure], threshold: Option<f64>) -> Result<Self> {
        let d = branches.len();
        if d == 0 {
            return Err(Error::InvalidParameter("branch list is empty".into()));
        }
        let n = branches[0].n_modes();
        if branches.iter().any(|g| g.n_modes() != n) {
            return Err(Error::DimensionMismatch(
                "branches have differing mode counts".into(),
            ));
        }
        let mut gram = DMatrix::zeros(d, d);
        for i in 0..d {
            gram[(i, i)] = C64::new(1.0, 0.0);
            for j in (i + 1)..d {
                let o = gaussian::overlap(&branches[i], &branches[j])?;
                gram[(i, j)] = o;
                gram[(j, i)] = o.conj();
            }
        }
        Self::from_gram_unchecked(gram, Some(branches.to_vec()), threshold, None)
    }

    /// Build from a Gram matrix directly (validated Hermitian with unit
    /// diagonal). Useful when overlaps are known in closed form, or to fix the
    /// gauge of a model by phasing branch coefficients instead of branches.
    pub fn build_with_gram(gram: DMatrix<C64>, threshold: Option<f64>) -> Result<Self> {
        let d = gram.nrows();
        if d == 0 || gram.ncols() != d {
            return Err(Error::DimensionMismatch(format!(
                "Gram matrix is {}x{}",
                gram.nrows(),
                gram.ncols()
            )));
        }
        let herm_res = linalg::hermiticity_residue(&gram);
        if herm_res > 1e-12 {
            return Err(Error::InvalidParameter(format!(
                "Gram matrix is not Hermitian: residue {herm_res:.3e}"
            )));
        }
        for i in 0..d {
            if (gram[(i, i)] - C64::new(1.0, 0.0)).norm() > 1e-12 {
                return Err(Error::InvalidParameter(format!(
                    "Gram diagonal entry {i} is {} rather than 1",
                    gram[(i, i)]
                )));
            }
        }
        Self::from_gram_unchecked(gram, None, threshold, None)
    }

    /// Build from branches but project out Gram eigendirections with
    /// eigenvalue ≤ `cutoff` instead of rejecting the manifold. G^{-1/2} is
    /// then the pseudo-inverse square root and reductions live on the retained
    /// rank-`r` subspace.
    pub fn build_pseudo_inverse(branches: &[GaussianPure], cutoff: f64) -> Result<Self> {
        if !(cutoff > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "pseudo-inverse cutoff must be positive, got {cutoff}"
            )));
        }
        let strict = Self::build(branches, Some(-1.0));
        match strict {
            Ok(m) if m.min_eigenvalue > cutoff => Ok(m),
            Ok(m) => Self::from_gram_unchecked(
                m.gram,
                m.branches,
                Some(cutoff),
                Some(cutoff),
            ),
            Err(e) => Err(e),
        }
    }

    fn from_gram_unchecked(
        gram: DMatrix<C64>,
        branches: Option<Vec<GaussianPure>>,
        threshold: Option<f64>,
        pseudo_cutoff: Option<f64>,
    ) -> Result<Self> {
        let d = gram.nrows();
        let threshold = threshold.unwrap_or_else(|| default_conditioning_threshold(d));
        let (eigs, vectors) = linalg::herm_eigen_desc(&gram);
        let min_eigenvalue = eigs[d - 1];
        let rank;
        let (g_half, g_neg_half) = match pseudo_cutoff {
            None => {
                if min_eigenvalue <= threshold {
                    return Err(Error::NearDependence {
                        min_eigenvalue,
                        threshold,
                    });
                }
                rank = d;
                (
                    linalg::herm_from_eigen(&eigs, &vectors, f64::sqrt),
                    linalg::herm_from_eigen(&eigs, &vectors, |w| w.sqrt().recip()),
                )
            }
            Some(cutoff) => {
                rank = eigs.iter().filter(|&&w| w > cutoff).count();
                if rank == 0 {
                    return Err(Error::NearDependence {
                        min_eigenvalue,
                        threshold: cutoff,
                    });
                }
                let clip = |w: f64| if w > cutoff { w } else { 0.0 };
                (
                    linalg::herm_from_eigen(&eigs, &vectors, move |w| clip(w).sqrt()),
                    linalg::herm_from_eigen(&eigs, &vectors, move |w| {
                        if w > cutoff { w.sqrt().recip() } else { 0.0 }
                    }),
                )
            }
        };
        Ok(Self {
            dim: d,
            branches,
            gram,
            g_half,
            g_neg_half,
            min_eigenvalue,
            threshold,
            rank,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Retained rank; equals `dim` unless built with a pseudo-inverse cutoff.
    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn gram(&self) -> &DMatrix<C64> {
        &self.gram
    }

    pub fn g_half(&self) -> &DMatrix<C64> {
        &self.g_half
    }

    pub fn g_neg_half(&self) -> &DMatrix<C64> {
        &self.g_neg_half
    }

    pub fn min_gram_eigenvalue(&self) -> f64 {
        self.min_eigenvalue
    }

    pub fn conditioning_threshold(&self) -> f64 {
        self.threshold
    }

    pub fn branches(&self) -> Option<&[GaussianPure]> {
        self.branches.as_deref()
    }

    /// Coefficients of Σ_k c_k|g_k⟩ in the Löwdin basis: G^{1/2}c / √(c†Gc).
    /// Unit norm by construction.
    pub fn lowdin_coefficients(&self, c: &DVector<C64>) -> Result<DVector<C64>> {
        let z = self.branch_norm_sq(c)?;
        Ok(&self.g_half * c / C64::new(z.sqrt(), 0.0))
    }

    /// ‖Σ_k c_k|g_k⟩‖² = c†Gc, rejecting destructive interference that leaves
    /// no state to normalize.
    pub fn branch_norm_sq(&self, c: &DVector<C64>) -> Result<f64> {
        if c.len() != self.dim {
            return Err(Error::DimensionMismatch(format!(
                "coefficient vector has length {}, manifold dimension is {}",
                c.len(),
                self.dim
            )));
        }
        let z = (c.adjoint() * &self.gram * c)[(0, 0)].re;
        let scale = c.iter().map(|x| x.norm_sqr()).sum::<f64>().max(1.0);
        if z <= 1e-12 * scale {
            return Err(Error::DestructiveInterference(z));
        }
        Ok(z)
    }
}

/// A mixture supported on a branch manifold: components (p_μ, c_μ) meaning
/// ρ ∝ Σ_μ p_μ |ψ_μ⟩⟨ψ_μ| with |ψ_μ⟩ = Σ_k c_kμ|g_k⟩ normalized per component.
#[derive(Debug, Clone)]
pub struct SupportedMixture {
    components: Vec<(f64, DVector<C64>)>,
}

impl SupportedMixture {
    pub fn new(components: Vec<(f64, DVector<C64>)>) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::InvalidState("mixture has no components".into()));
        }
        let dim = components[0].1.len();
        let mut total = 0.0;
        for (idx, (p, c)) in components.iter().enumerate() {
            if !p.is_finite() || *p < 0.0 {
                return Err(Error::InvalidParameter(format!(
                    "component {idx} has weight {p}"
                )));
            }
            if c.len() != dim {
                return Err(Error::DimensionMismatch(format!(
                    "component {idx} has {} coefficients, component 0 has {dim}",
                    c.len()
                )));
            }
            if c.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
                return Err(Error::InvalidParameter(format!(
                    "component {idx} has a non-finite coefficient"
                )));
            }
            if c.iter().all(|z| z.norm_sqr() == 0.0) {
                return Err(Error::InvalidState(format!(
                    "component {idx} has an all-zero coefficient vector"
                )));
            }
            total += p;
        }
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidParameter(format!(
                "mixture weights sum to {total:.15}, expected 1"
            )));
        }
        Ok(Self { components })
    }

    /// A pure state on the manifold.
    pub fn pure(c: DVector<C64>) -> Result<Self> {
        Self::new(vec![(1.0, c)])
    }

    pub fn components(&self) -> &[(f64, DVector<C64>)] {
        &self.components
    }

    pub fn dim(&self) -> usize {
        self.components[0].1.len()
    }
}

/// A reduced density matrix on the Löwdin basis of some manifold. Validated
/// Hermitian (1e-12), unit trace (1e-10) and positive semidefinite (-1e-10).
#[derive(Debug, Clone)]
pub struct EffectiveState {
    rho: DMatrix<C64>,
}

impl EffectiveState {
    pub fn new(rho: DMatrix<C64>) -> Result<Self> {
        let d = rho.nrows();
        if d == 0 || rho.ncols() != d {
            return Err(Error::DimensionMismatch(format!(
                "density matrix is {}x{}",
                rho.nrows(),
                rho.ncols()
            )));
        }
        let herm_res = linalg::hermiticity_residue(&rho);
        if herm_res > 1e-12 {
            return Err(Error::InvalidState(format!(
                "density matrix hermiticity residue {herm_res:.3e}"
            )));
        }
        let trace = rho.trace();
        if (trace - C64::new(1.0, 0.0)).norm() > 1e-10 {
            return Err(Error::InvalidState(format!(
                "density matrix trace {trace} is not 1"
            )));
        }
        let rho = linalg::hermitian_part(&rho);
        let min_eig = linalg::herm_eigenvalues_desc(&rho)[d - 1];
        if min_eig < -1e-10 {
            return Err(Error::InvalidState(format!(
                "density matrix min eigenvalue {min_eig:.3e}"
            )));
        }
        Ok(Self { rho })
    }

    pub fn dim(&self) -> usize {
        self.rho.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.rho
    }

    /// Eigenvalues sorted descending; negatives within the -1e-10 validation
    /// slack are clamped to zero so downstream entropies stay finite.
    pub fn spectrum(&self) -> Vec<f64> {
        linalg::herm_eigenvalues_desc(&self.rho)
            .into_iter()
            .map(|w| if w < 0.0 { 0.0 } else { w })
            .collect()
    }

    pub fn purity(&self) -> f64 {
        self.spectrum().iter().map(|w| w * w).sum()
    }
}

/// The exact reduction ρ_eff = G^{1/2} X G^{1/2}.
pub fn effective_density(
    manifold: &BranchManifold,
    mixture: &SupportedMixture,
) -> Result<EffectiveState> {
    if mixture.dim() != manifold.dim() {
        return Err(Error::DimensionMismatch(format!(
            "mixture coefficients have dimension {}, manifold has {}",
            mixture.dim(),
            manifold.dim()
        )));
    }
    let d = manifold.dim();
    let mut x = DMatrix::<C64>::zeros(d, d);
    for (p, c) in mixture.components() {
        if *p == 0.0 {
            continue;
        }
        let z = manifold.branch_norm_sq(c)?;
        x += (c * c.adjoint()) * C64::new(p / z, 0.0);
    }
    let rho = manifold.g_half() * x * manifold.g_half();
    // Hermitize before validation: G^{1/2}XG^{1/2} is Hermitian in exact
    // arithmetic, so this only removes roundoff.
    EffectiveState::new(linalg::hermitian_part(&rho))
}

/// The same spectrum through the generalized eigenproblem of XG (similar to
/// ρ_eff, so eigenvalues agree without ever forming G^{1/2}). Kept as an
/// independent route for cross-checking the Löwdin reduction.
pub fn generalized_spectrum(
    manifold: &BranchManifold,
    mixture: &SupportedMixture,
) -> Result<Vec<f64>> {
    if mixture.dim() != manifold.dim() {
        return Err(Error::DimensionMismatch(format!(
            "mixture coefficients have dimension {}, manifold has {}",
            mixture.dim(),
            manifold.dim()
        )));
    }
    let d = manifold.dim();
    let mut x = DMatrix::<C64>::zeros(d, d);
    for (p, c) in mixture.components() {
        if *p == 0.0 {
            continue;
        }
        let z = manifold.branch_norm_sq(c)?;
        x += (c * c.adjoint()) * C64::new(p / z, 0.0);
    }
    let xg = x * manifold.gram();
    let eigs = linalg::complex_eigenvalues(&xg)?;
    let scale = eigs.iter().map(|z| z.norm()).fold(1.0_f64, f64::max);
    let mut out = Vec::with_capacity(d);
    for z in eigs.iter() {
        if z.im.abs() > 1e-8 * scale {
            return Err(Error::InvalidState(format!(
                "generalized eigenvalue {z} has a non-negligible imaginary part"
            )));
        }
        out.push(if z.re < 0.0 && z.re > -1e-10 { 0.0 } else { z.re });
    }
    out.sort_by(|a, b| b.partial_cmp(a).unwrap());
    Ok(out)
}

/// Spectrum of the Gram matrix of a cyclic orbit {U^k|g₀⟩} given its first row
/// r_k = ⟨g₀|U^k|g₀⟩, via the discrete Fourier transform:
/// λ_m = Σ_k r_k e^{-2πi mk/D}, returned in DFT index order m = 0..D-1.
pub fn circulant_gram_spectrum(first_row: &[C64], threshold: Option<f64>) -> Result<Vec<f64>> {
    let d = first_row.len();
    if d == 0 {
        return Err(Error::InvalidParameter("empty circulant first row".into()));
    }
    if (first_row[0] - C64::new(1.0, 0.0)).norm() > 1e-12 {
        return Err(Error::InvalidParameter(format!(
            "circulant first row starts with {} rather than 1",
            first_row[0]
        )));
    }
    for k in 1..d {
        if (first_row[k] - first_row[d - k].conj()).norm() > 1e-12 {
            return Err(Error::InvalidParameter(format!(
                "first row is not Hermitian-circulant at offset {k}"
            )));
        }
    }
    let threshold = threshold.unwrap_or_else(|| default_conditioning_threshold(d));
    let mut spectrum = Vec::with_capacity(d);
    let mut min_lambda = f64::INFINITY;
    for m in 0..d {
        let mut acc = C64::new(0.0, 0.0);
        for (k, r) in first_row.iter().enumerate() {
            let phase = -std::f64::consts::TAU * (m * k) as f64 / d as f64;
            acc += r * C64::new(0.0, phase).exp();
        }
        if acc.im.abs() > 1e-10 {
            return Err(Error::InvalidState(format!(
                "circulant eigenvalue m = {m} has imaginary residue {:.3e}",
                acc.im
            )));
        }
        min_lambda = min_lambda.min(acc.re);
        spectrum.push(acc.re);
    }
    if min_lambda <= threshold {
        return Err(Error::NearDependence {
            min_eigenvalue: min_lambda,
            threshold,
        });
    }
    Ok(spectrum)
}

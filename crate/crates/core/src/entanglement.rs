//! Bipartite entanglement of two-branch superpositions.
//!
//! The model: local branch pairs {|a₁⟩, |a₂⟩} and {|b₁⟩, |b₂⟩} with gauge
//! fixed so the local overlaps are a = |⟨a₁|a₂⟩| and b = |⟨b₁|b₂⟩|, carrying
//! the entangled superposition
//!
//!   |Ψ(φ)⟩ ∝ |a₁⟩|b₁⟩ + e^{iφ}|a₂⟩|b₂⟩
//!
//! optionally dephased: ρ(φ, p) = (1-p)|Ψ⟩⟨Ψ| + p·½(ρ₁₁ + ρ₂₂) where ρ_ii is
//! the normalized projector onto |a_i⟩|b_i⟩. The 4×4 reduction is exact, so
//! the entanglement negativity of the continuous-variable state equals the
//! negativity of a 4×4 matrix; for p = 0 it also has a closed form.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::gaussian::{self, GaussianPure};
use crate::linalg;
use crate::manifold::{self, BranchManifold, EffectiveState, SupportedMixture};
use crate::C64;

/// Superposition phase and dephasing probability of the Bell-type family.
#[derive(Debug, Clone, Copy)]
pub struct TwoBranchBellSpec {
    pub phi: f64,
    pub p: f64,
}

impl TwoBranchBellSpec {
    pub fn new(phi: f64, p: f64) -> Result<Self> {
        if !phi.is_finite() {
            return Err(Error::InvalidParameter(format!("phase must be finite, got {phi}")));
        }
        if !p.is_finite() || !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidParameter(format!(
                "dephasing probability must lie in [0, 1], got {p}"
            )));
        }
        Ok(Self { phi, p })
    }
}

/// Closed-form negativity of the pure state |Ψ(φ)⟩:
///
///   N = √((1-a²)(1-b²)) / (2(1 + ab cos φ)).
pub fn negativity_from_overlaps(a: f64, b: f64, phi: f64) -> Result<f64> {
    for (name, v) in [("a", a), ("b", b)] {
        if !v.is_finite() || !(0.0..=1.0).contains(&v) {
            return Err(Error::InvalidParameter(format!(
                "overlap magnitude {name} must lie in [0, 1], got {v}"
            )));
        }
    }
    if !phi.is_finite() {
        return Err(Error::InvalidParameter(format!("phase must be finite, got {phi}")));
    }
    let z = 2.0 * (1.0 + a * b * phi.cos());
    if z <= 1e-12 {
        return Err(Error::DegenerateState(format!(
            "superposition norm {z:.3e} vanishes at a = {a}, b = {b}, φ = {phi}"
        )));
    }
    Ok(((1.0 - a * a) * (1.0 - b * b)).sqrt() / z)
}

/// Schmidt spectrum {λ₊, λ₋} of |Ψ(φ)⟩: λ± = ½(1 ± √(1 - 4N²)), with
/// N = √(λ₊λ₋) the closed-form negativity.
pub fn schmidt_spectrum(a: f64, b: f64, phi: f64) -> Result<[f64; 2]> {
    let n = negativity_from_overlaps(a, b, phi)?;
    let disc = (1.0 - 4.0 * n * n).max(0.0).sqrt();
    Ok([0.5 * (1.0 + disc), 0.5 * (1.0 - disc)])
}

/// A reduced bipartite state on the product Löwdin basis, with factor
/// dimensions remembered so partial operations stay well-defined.
#[derive(Debug, Clone)]
pub struct BipartiteEffectiveState {
    state: EffectiveState,
    dim_a: usize,
    dim_b: usize,
}

impl BipartiteEffectiveState {
    pub fn new(rho: DMatrix<C64>, dim_a: usize, dim_b: usize) -> Result<Self> {
        if rho.nrows() != dim_a * dim_b {
            return Err(Error::DimensionMismatch(format!(
                "matrix is {}x{}, factors give {}",
                rho.nrows(),
                rho.ncols(),
                dim_a * dim_b
            )));
        }
        Ok(Self { state: EffectiveState::new(rho)?, dim_a, dim_b })
    }

    pub fn dim_a(&self) -> usize {
        self.dim_a
    }

    pub fn dim_b(&self) -> usize {
        self.dim_b
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        self.state.matrix()
    }

    pub fn spectrum(&self) -> Vec<f64> {
        self.state.spectrum()
    }

    /// Partial transpose on the B factor: out[(a,b),(c,d)] = in[(a,d),(c,b)].
    /// Valid because the product Löwdin basis is an orthonormal product basis.
    pub fn partial_transpose_b(&self) -> DMatrix<C64> {
        let (da, db) = (self.dim_a, self.dim_b);
        let rho = self.state.matrix();
        let mut out = DMatrix::zeros(da * db, da * db);
        for a in 0..da {
            for c in 0..da {
                for b in 0..db {
                    for d in 0..db {
                        out[(a * db + b, c * db + d)] = rho[(a * db + d, c * db + b)];
                    }
                }
            }
        }
        out
    }

    /// Partial trace over B: ρ_A[(i,k)] = Σ_j ρ[(i,j),(k,j)].
    pub fn partial_trace_b(&self) -> Result<EffectiveState> {
        let (da, db) = (self.dim_a, self.dim_b);
        let rho = self.state.matrix();
        let mut out = DMatrix::<C64>::zeros(da, da);
        for i in 0..da {
            for k in 0..da {
                for j in 0..db {
                    out[(i, k)] += rho[(i * db + j, k * db + j)];
                }
            }
        }
        EffectiveState::new(linalg::hermitian_part(&out))
    }

    /// Entanglement negativity Σ|λ<0| of the partial transpose.
    pub fn negativity(&self) -> f64 {
        linalg::herm_eigenvalues_desc(&self.partial_transpose_b())
            .into_iter()
            .filter(|&w| w < 0.0)
            .map(|w| -w)
            .sum()
    }
}

/// Assemble ρ(φ, p) directly from the gauge-fixed overlap magnitudes a, b.
pub fn bipartite_from_overlaps(
    a: f64,
    b: f64,
    spec: &TwoBranchBellSpec,
    threshold: Option<f64>,
) -> Result<BipartiteEffectiveState> {
    for (name, v) in [("a", a), ("b", b)] {
        if !v.is_finite() || !(0.0..=1.0).contains(&v) {
            return Err(Error::InvalidParameter(format!(
                "overlap magnitude {name} must lie in [0, 1], got {v}"
            )));
        }
    }
    let real_gram = |g: f64| {
        let mut gram = DMatrix::identity(2, 2);
        gram[(0, 1)] = C64::new(g, 0.0);
        gram[(1, 0)] = C64::new(g, 0.0);
        gram
    };
    let gram_a = real_gram(a);
    let gram_b = real_gram(b);
    // Validate both local manifolds before forming the product.
    BranchManifold::build_with_gram(gram_a.clone(), threshold)?;
    BranchManifold::build_with_gram(gram_b.clone(), threshold)?;
    let product = BranchManifold::build_with_gram(gram_a.kronecker(&gram_b), threshold)?;

    let z = 2.0 * (1.0 + a * b * spec.phi.cos());
    if z <= 1e-12 {
        return Err(Error::DegenerateState(format!(
            "superposition norm {z:.3e} vanishes at a = {a:.6}, b = {b:.6}, φ = {}",
            spec.phi
        )));
    }
    let mut coherent = DVector::<C64>::zeros(4);
    coherent[0] = C64::new(1.0, 0.0);
    coherent[3] = C64::new(0.0, spec.phi).exp();
    let mut e11 = DVector::<C64>::zeros(4);
    e11[0] = C64::new(1.0, 0.0);
    let mut e22 = DVector::<C64>::zeros(4);
    e22[3] = C64::new(1.0, 0.0);
    let mixture = SupportedMixture::new(vec![
        (1.0 - spec.p, coherent),
        (0.5 * spec.p, e11),
        (0.5 * spec.p, e22),
    ])?;
    let rho = manifold::effective_density(&product, &mixture)?;
    BipartiteEffectiveState::new(rho.matrix().clone(), 2, 2)
}

/// Assemble ρ(φ, p) on concrete branch pairs. The local manifolds are gauge
/// fixed (overlap phases absorbed into the second branches), so `spec.phi` is
/// the physical relative phase of the model.
pub fn build_bipartite_effective(
    branches_a: (&GaussianPure, &GaussianPure),
    branches_b: (&GaussianPure, &GaussianPure),
    spec: &TwoBranchBellSpec,
    threshold: Option<f64>,
) -> Result<BipartiteEffectiveState> {
    let a = gaussian::overlap(branches_a.0, branches_a.1)?.norm();
    let b = gaussian::overlap(branches_b.0, branches_b.1)?.norm();
    bipartite_from_overlaps(a, b, spec, threshold)
}

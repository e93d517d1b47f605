//! Exact reduction of bosonic states supported on finitely many Gaussian branches.
//!
//! A state of the form Σ_k c_k |g_k⟩ with |g_k⟩ pure Gaussian lives in the span of
//! the branches, so every spectral quantity of its density matrix (entropies,
//! non-Gaussianity, bipartite negativity) can be computed from a small D×D problem
//! instead of a truncated Fock expansion. The bridge is the Gram matrix
//! G_jk = ⟨g_j|g_k⟩ together with its Löwdin square roots: the effective density
//! matrix on the orthonormalized span is ρ = G^{1/2} X G^{1/2} with
//! X = Σ_μ p_μ c^(μ) c^(μ)† / (c^(μ)† G c^(μ)).
//!
//! Modules:
//! - [`gaussian`]: pure Gaussian states (d, V), their position-space wavefunction
//!   parameters, exact pairwise overlaps, cross characteristic functions and
//!   cross moments.
//! - [`manifold`]: branch families, Gram conditioning, Löwdin orthogonalization,
//!   effective density matrices and their spectra.
//! - [`diagnostics`]: entropies, moment summaries of branch superpositions and
//!   dephased mixtures, relative-entropy non-Gaussianity.
//! - [`entanglement`]: two-branch-per-party encodings, closed-form and numeric
//!   partial-transpose negativity.
//! - [`fock`]: an independent truncated Fock-space oracle used only for
//!   verification; nothing in the closed-form paths depends on it.
//!
//! Conventions: ħ = 1, quadrature ordering (x₁, p₁, …, x_n, p_n), vacuum
//! covariance V = I/2, symplectic form Ω with per-mode blocks [[0, 1], [-1, 0]].

pub mod diagnostics;
pub mod entanglement;
pub mod error;
pub mod fock;
pub mod gaussian;
mod linalg;
pub mod manifold;

pub use error::{Error, Result};
pub use gaussian::{GaussianPure, ModeParams, SymplecticForm};
pub use manifold::{BranchManifold, EffectiveState, SupportedMixture};

/// Complex scalar used throughout.
pub type C64 = num_complex::Complex64;

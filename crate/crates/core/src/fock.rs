//! Truncated Fock-space oracle.
//!
//! Everything in this module is built from number-basis matrix elements and
//! never touches the Gaussian closed forms, so it serves as an independent
//! numerical check of the exact reductions. States carry the same global
//! phase convention as the wavefunction gauge in `gaussian`: the squeezed
//! vacuum produced by the operator recurrence is rotated by
//! δ = ½·arg(cosh r - e^{i2θ} sinh r), which makes Fock overlaps agree with
//! `gaussian::overlap` phase for phase (displacements commute with the
//! correction, so it is independent of x₀, p₀).

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::gaussian::ModeParams;
use crate::linalg;
use crate::C64;

/// Default bound on the truncation deficit 1 - Σ|c_n|².
pub const DEFAULT_MAX_DEFICIT: f64 = 1e-10;

/// A single-mode pure state as Fock coefficients c_0..c_{N-1}.
#[derive(Debug, Clone)]
pub struct FockState {
    coeffs: DVector<C64>,
    deficit: f64,
}

impl FockState {
    /// D(x₀, p₀) S(r, θ)|0⟩ expanded in the number basis via the three-term
    /// recurrence generated by (a cosh r + a† e^{i2θ} sinh r)|ψ⟩ = γ|ψ⟩,
    /// γ = α cosh r + ᾱ e^{i2θ} sinh r, α = (x₀ + i p₀)/√2.
    pub fn displaced_squeezed(mode: &ModeParams, cutoff: usize) -> Result<Self> {
        Self::with_max_deficit(mode, cutoff, DEFAULT_MAX_DEFICIT)
    }

    pub fn with_max_deficit(mode: &ModeParams, cutoff: usize, max_deficit: f64) -> Result<Self> {
        if cutoff == 0 {
            return Err(Error::InvalidParameter("cutoff must be at least 1".into()));
        }
        if ![mode.x0, mode.p0, mode.r, mode.theta].iter().all(|x| x.is_finite()) {
            return Err(Error::InvalidParameter("non-finite mode parameter".into()));
        }
        let alpha = C64::new(mode.x0, mode.p0) / 2.0_f64.sqrt();
        let phase_s = C64::new(0.0, 2.0 * mode.theta).exp();
        let (ch, sh, th) = (mode.r.cosh(), mode.r.sinh(), mode.r.tanh());
        let gamma = alpha * ch + alpha.conj() * phase_s * sh;
        let c0 = C64::new(ch.powf(-0.5), 0.0)
            * (-0.5 * alpha.norm_sqr() - 0.5 * alpha.conj() * alpha.conj() * phase_s * th).exp();
        let mut c = DVector::zeros(cutoff);
        c[0] = c0;
        if cutoff > 1 {
            c[1] = gamma * c0 / ch;
        }
        for n in 1..cutoff.saturating_sub(1) {
            c[n + 1] = (gamma * c[n] - phase_s * sh * (n as f64).sqrt() * c[n - 1])
                / (ch * ((n + 1) as f64).sqrt());
        }
        // Align the recurrence output with the wavefunction gauge.
        let delta = 0.5 * (C64::new(ch, 0.0) - phase_s * sh).arg();
        let c = c * C64::new(0.0, delta).exp();
        let deficit = 1.0 - c.iter().map(|z| z.norm_sqr()).sum::<f64>();
        if deficit > max_deficit {
            return Err(Error::InsufficientCutoff { deficit, required: max_deficit });
        }
        Ok(Self { coeffs: c, deficit })
    }

    /// A coherent state |α⟩.
    pub fn coherent(alpha: C64, cutoff: usize) -> Result<Self> {
        let root2 = 2.0_f64.sqrt();
        Self::displaced_squeezed(
            &ModeParams::displaced(root2 * alpha.re, root2 * alpha.im),
            cutoff,
        )
    }

    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coefficients(&self) -> &DVector<C64> {
        &self.coeffs
    }

    pub fn deficit(&self) -> f64 {
        self.deficit
    }
}

/// ⟨a|b⟩ in the truncated space.
pub fn overlap(a: &FockState, b: &FockState) -> Result<C64> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch(format!(
            "Fock states of dimension {} and {}",
            a.dim(),
            b.dim()
        )));
    }
    Ok(a.coeffs.dotc(&b.coeffs))
}

/// ⟨m|D(α)|n⟩ with D(α) = exp(αa† - ᾱa), from the associated-Laguerre closed
/// form; exact projected matrix elements (no truncated operator products).
pub fn displacement_matrix(alpha: C64, dim: usize) -> DMatrix<C64> {
    let x = alpha.norm_sqr();
    let envelope = (-0.5 * x).exp();
    DMatrix::from_fn(dim, dim, |m, n| {
        let (hi, lo, z) = if m >= n { (m, n, alpha) } else { (n, m, -alpha.conj()) };
        // z^{hi-lo} √(lo!/hi!) as a single stable product.
        let mut head = C64::new(envelope, 0.0);
        for k in (lo + 1)..=hi {
            head *= z / (k as f64).sqrt();
        }
        head * laguerre(lo, (hi - lo) as f64, x)
    })
}

/// Associated Laguerre polynomial L_k^{(ν)}(x) by the three-term recurrence.
fn laguerre(k: usize, nu: f64, x: f64) -> f64 {
    if k == 0 {
        return 1.0;
    }
    let (mut prev, mut cur) = (1.0, 1.0 + nu - x);
    for j in 1..k {
        let jf = j as f64;
        let next = ((2.0 * jf + 1.0 + nu - x) * cur - (jf + nu) * prev) / (jf + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

/// Exact projected matrix of x̂ = (a + a†)/√2.
pub fn op_x(dim: usize) -> DMatrix<C64> {
    DMatrix::from_fn(dim, dim, |m, n| {
        if m + 1 == n {
            C64::new((n as f64 / 2.0).sqrt(), 0.0)
        } else if m == n + 1 {
            C64::new((m as f64 / 2.0).sqrt(), 0.0)
        } else {
            C64::new(0.0, 0.0)
        }
    })
}

/// Exact projected matrix of p̂ = (a - a†)/(i√2).
pub fn op_p(dim: usize) -> DMatrix<C64> {
    DMatrix::from_fn(dim, dim, |m, n| {
        if m + 1 == n {
            C64::new(0.0, -(n as f64 / 2.0).sqrt())
        } else if m == n + 1 {
            C64::new(0.0, (m as f64 / 2.0).sqrt())
        } else {
            C64::new(0.0, 0.0)
        }
    })
}

/// Exact projected matrix of x̂².
pub fn op_xx(dim: usize) -> DMatrix<C64> {
    DMatrix::from_fn(dim, dim, |m, n| {
        if m == n {
            C64::new(n as f64 + 0.5, 0.0)
        } else if m + 2 == n || m == n + 2 {
            let k = m.min(n) as f64;
            C64::new(((k + 1.0) * (k + 2.0)).sqrt() / 2.0, 0.0)
        } else {
            C64::new(0.0, 0.0)
        }
    })
}

/// Exact projected matrix of p̂².
pub fn op_pp(dim: usize) -> DMatrix<C64> {
    DMatrix::from_fn(dim, dim, |m, n| {
        if m == n {
            C64::new(n as f64 + 0.5, 0.0)
        } else if m + 2 == n || m == n + 2 {
            let k = m.min(n) as f64;
            C64::new(-((k + 1.0) * (k + 2.0)).sqrt() / 2.0, 0.0)
        } else {
            C64::new(0.0, 0.0)
        }
    })
}

/// Exact projected matrix of ½{x̂, p̂} = (-i/2)(a² - a†²).
pub fn op_xp_sym(dim: usize) -> DMatrix<C64> {
    DMatrix::from_fn(dim, dim, |m, n| {
        if m + 2 == n {
            let k = m as f64;
            C64::new(0.0, -((k + 1.0) * (k + 2.0)).sqrt() / 2.0)
        } else if m == n + 2 {
            let k = n as f64;
            C64::new(0.0, ((k + 1.0) * (k + 2.0)).sqrt() / 2.0)
        } else {
            C64::new(0.0, 0.0)
        }
    })
}

/// tr(ρ·op).
pub fn expectation(rho: &DMatrix<C64>, op: &DMatrix<C64>) -> C64 {
    (rho * op).trace()
}

/// Density matrix of Σ_μ p_μ |ψ_μ⟩⟨ψ_μ| / ⟨ψ_μ|ψ_μ⟩ with
/// |ψ_μ⟩ = Σ_k c_kμ |branch_k⟩ built from the truncated branch states.
pub fn mixture_density(
    branches: &[FockState],
    components: &[(f64, DVector<C64>)],
) -> Result<DMatrix<C64>> {
    if branches.is_empty() {
        return Err(Error::InvalidParameter("no branch states".into()));
    }
    let dim = branches[0].dim();
    if branches.iter().any(|b| b.dim() != dim) {
        return Err(Error::DimensionMismatch("branch cutoffs differ".into()));
    }
    let mut rho = DMatrix::<C64>::zeros(dim, dim);
    for (p, c) in components {
        if c.len() != branches.len() {
            return Err(Error::DimensionMismatch(format!(
                "component has {} coefficients for {} branches",
                c.len(),
                branches.len()
            )));
        }
        if *p == 0.0 {
            continue;
        }
        let mut psi = DVector::<C64>::zeros(dim);
        for (k, b) in branches.iter().enumerate() {
            psi += &b.coeffs * c[k];
        }
        let norm_sq = psi.norm_squared();
        if norm_sq <= 1e-12 {
            return Err(Error::DestructiveInterference(norm_sq));
        }
        rho += (&psi * psi.adjoint()) * C64::new(p / norm_sq, 0.0);
    }
    Ok(rho)
}

/// Single-mode mean vector and covariance matrix of a Fock density matrix,
/// in the (x, p) ordering. Errors if ρ is far from Hermitian or the implied
/// moments carry a non-negligible imaginary part.
pub fn moments(rho: &DMatrix<C64>) -> Result<(DVector<f64>, DMatrix<f64>)> {
    let dim = rho.nrows();
    if dim == 0 || rho.ncols() != dim {
        return Err(Error::DimensionMismatch(format!(
            "density matrix is {}x{}",
            rho.nrows(),
            rho.ncols()
        )));
    }
    if linalg::hermiticity_residue(rho) > 1e-10 {
        return Err(Error::InvalidState("density matrix is not Hermitian".into()));
    }
    let take_real = |z: C64, what: &str| -> Result<f64> {
        if z.im.abs() > 1e-9 {
            return Err(Error::InvalidState(format!(
                "⟨{what}⟩ has imaginary residue {:.3e}",
                z.im
            )));
        }
        Ok(z.re)
    };
    let x = take_real(expectation(rho, &op_x(dim)), "x")?;
    let p = take_real(expectation(rho, &op_p(dim)), "p")?;
    let xx = take_real(expectation(rho, &op_xx(dim)), "x²")?;
    let pp = take_real(expectation(rho, &op_pp(dim)), "p²")?;
    let xp = take_real(expectation(rho, &op_xp_sym(dim)), "{x,p}/2")?;
    let d = DVector::from_vec(vec![x, p]);
    let v = DMatrix::from_row_slice(2, 2, &[xx - x * x, xp - x * p, xp - x * p, pp - p * p]);
    Ok((d, v))
}

/// Von Neumann entropy -Σ λ ln λ of a Hermitian density matrix; eigenvalues
/// below 0 (roundoff) contribute nothing.
pub fn vn_entropy(rho: &DMatrix<C64>) -> f64 {
    linalg::herm_eigenvalues_desc(rho)
        .into_iter()
        .filter(|&w| w > 0.0)
        .map(|w| -w * w.ln())
        .sum()
}

/// Rényi-α entropy log(Σ λ^α)/(1-α), α > 0, α ≠ 1.
pub fn renyi_entropy(rho: &DMatrix<C64>, alpha: f64) -> Result<f64> {
    if !(alpha > 0.0) || (alpha - 1.0).abs() < 1e-12 {
        return Err(Error::InvalidParameter(format!(
            "Rényi order must be positive and ≠ 1, got {alpha}"
        )));
    }
    let s: f64 = linalg::herm_eigenvalues_desc(rho)
        .into_iter()
        .filter(|&w| w > 0.0)
        .map(|w| w.powf(alpha))
        .sum();
    Ok(s.ln() / (1.0 - alpha))
}

/// Two-mode density matrix Σ_μ p_μ |Ψ_μ⟩⟨Ψ_μ|/‖Ψ_μ‖² with
/// |Ψ_μ⟩ = Σ_ij c_ij |a_i⟩ ⊗ |b_j⟩; composite index (row a)·dim_b + (row b).
pub fn bipartite_mixture_density(
    branches_a: &[FockState],
    branches_b: &[FockState],
    components: &[(f64, DMatrix<C64>)],
) -> Result<DMatrix<C64>> {
    if branches_a.is_empty() || branches_b.is_empty() {
        return Err(Error::InvalidParameter("no branch states".into()));
    }
    let (da, db) = (branches_a[0].dim(), branches_b[0].dim());
    if branches_a.iter().any(|s| s.dim() != da) || branches_b.iter().any(|s| s.dim() != db) {
        return Err(Error::DimensionMismatch("branch cutoffs differ".into()));
    }
    let mut rho = DMatrix::<C64>::zeros(da * db, da * db);
    for (p, c) in components {
        if c.nrows() != branches_a.len() || c.ncols() != branches_b.len() {
            return Err(Error::DimensionMismatch(format!(
                "coefficient matrix is {}x{} for {}x{} branches",
                c.nrows(),
                c.ncols(),
                branches_a.len(),
                branches_b.len()
            )));
        }
        if *p == 0.0 {
            continue;
        }
        let mut psi = DVector::<C64>::zeros(da * db);
        for (i, sa) in branches_a.iter().enumerate() {
            for (j, sb) in branches_b.iter().enumerate() {
                if c[(i, j)].norm_sqr() == 0.0 {
                    continue;
                }
                for (ai, za) in sa.coeffs.iter().enumerate() {
                    for (bj, zb) in sb.coeffs.iter().enumerate() {
                        psi[ai * db + bj] += c[(i, j)] * za * zb;
                    }
                }
            }
        }
        let norm_sq = psi.norm_squared();
        if norm_sq <= 1e-12 {
            return Err(Error::DestructiveInterference(norm_sq));
        }
        rho += (&psi * psi.adjoint()) * C64::new(p / norm_sq, 0.0);
    }
    Ok(rho)
}

/// Partial transpose on the second factor: out[(a,b),(c,d)] = in[(a,d),(c,b)].
pub fn partial_transpose_b(rho: &DMatrix<C64>, dim_a: usize, dim_b: usize) -> Result<DMatrix<C64>> {
    let dim = dim_a * dim_b;
    if rho.nrows() != dim || rho.ncols() != dim {
        return Err(Error::DimensionMismatch(format!(
            "density matrix is {}x{}, expected {dim}x{dim}",
            rho.nrows(),
            rho.ncols()
        )));
    }
    let mut out = DMatrix::zeros(dim, dim);
    for a in 0..dim_a {
        for c in 0..dim_a {
            for b in 0..dim_b {
                for d in 0..dim_b {
                    out[(a * dim_b + b, c * dim_b + d)] = rho[(a * dim_b + d, c * dim_b + b)];
                }
            }
        }
    }
    Ok(out)
}

/// Negativity Σ|λ<0| by full dense diagonalization; for small cutoffs only.
pub fn negativity_dense(rho_pt: &DMatrix<C64>) -> f64 {
    linalg::herm_eigenvalues_desc(rho_pt)
        .into_iter()
        .filter(|&w| w < 0.0)
        .map(|w| -w)
        .sum()
}

/// Negativity via projection onto a spanning set of the partial transpose's
/// range. For ρ supported on branches {|a_i⟩⊗|b_j⟩}, the range of ρ^{T_B} is
/// spanned by {|a_i⟩⊗|b̄_l⟩}, so projecting compresses the full spectrum into
/// a matrix of the branch-product size with no approximation. The spanning
/// set is orthonormalized here (near-dependent directions dropped); the trace
/// of the compressed matrix must reproduce tr ρ^{T_B} = 1, which is enforced.
pub fn negativity_projected(rho_pt: &DMatrix<C64>, spanning: &[DVector<C64>]) -> Result<f64> {
    let dim = rho_pt.nrows();
    if spanning.is_empty() {
        return Err(Error::InvalidParameter("empty spanning set".into()));
    }
    if spanning.iter().any(|v| v.len() != dim) {
        return Err(Error::DimensionMismatch(
            "spanning vector length does not match the density matrix".into(),
        ));
    }
    // Modified Gram-Schmidt with a drop tolerance.
    let mut q: Vec<DVector<C64>> = Vec::with_capacity(spanning.len());
    for v in spanning {
        let mut w = v.clone();
        for u in &q {
            let coeff = u.dotc(&w);
            w -= u * coeff;
        }
        // Re-orthogonalize once; classical single-pass MGS loses orthogonality
        // exactly in the near-dependent cases this is used for.
        for u in &q {
            let coeff = u.dotc(&w);
            w -= u * coeff;
        }
        let norm = w.norm();
        if norm > 1e-10 * v.norm().max(1.0) {
            w /= C64::new(norm, 0.0);
            q.push(w);
        }
    }
    let k = q.len();
    let mut compressed = DMatrix::<C64>::zeros(k, k);
    let images: Vec<DVector<C64>> = q.iter().map(|u| rho_pt * u).collect();
    for i in 0..k {
        for j in 0..k {
            compressed[(i, j)] = q[i].dotc(&images[j]);
        }
    }
    let eigs = linalg::herm_eigenvalues_desc(&compressed);
    let trace: f64 = eigs.iter().sum();
    if (trace - 1.0).abs() > 1e-8 {
        return Err(Error::InvalidState(format!(
            "compressed partial transpose has trace {trace:.12}, expected 1; \
             the spanning set does not cover the range"
        )));
    }
    Ok(eigs.into_iter().filter(|&w| w < 0.0).map(|w| -w).sum())
}

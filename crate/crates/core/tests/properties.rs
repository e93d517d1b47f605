//! Property-based tests: structural invariants that must hold across the
//! whole parameter space, checked on randomized inputs.

use nalgebra::{DMatrix, DVector};
use proptest::prelude::*;

use multiplet::error::Error;
use multiplet::gaussian::{self, GaussianPure, ModeParams};
use multiplet::manifold::{self, BranchManifold, SupportedMixture};
use multiplet::{diagnostics, entanglement, C64};

fn mode_strategy() -> impl Strategy<Value = ModeParams> {
    (
        -1.5f64..1.5,
        -1.5f64..1.5,
        -0.9f64..0.9,
        0.0f64..(std::f64::consts::TAU - 1e-9),
    )
        .prop_map(|(x0, p0, r, theta)| ModeParams { x0, p0, r, theta })
}

fn build_branches(modes: &[ModeParams]) -> Vec<GaussianPure> {
    modes
        .iter()
        .map(|m| GaussianPure::displaced_squeezed(std::slice::from_ref(m)).unwrap())
        .collect()
}

/// Build a manifold, discarding the proptest case if the random branches
/// happen to be numerically dependent.
fn try_manifold(branches: &[GaussianPure]) -> Result<BranchManifold, TestCaseError> {
    match BranchManifold::build(branches, None) {
        Ok(m) => Ok(m),
        Err(Error::NearDependence { .. }) => Err(TestCaseError::reject("dependent branches")),
        Err(e) => panic!("unexpected manifold failure: {e:?}"),
    }
}

fn try_mixture(
    components: Vec<(f64, DVector<C64>)>,
    m: &BranchManifold,
) -> Result<SupportedMixture, TestCaseError> {
    for (_, c) in &components {
        match m.branch_norm_sq(c) {
            Ok(_) => {}
            Err(Error::DestructiveInterference(_)) => {
                return Err(TestCaseError::reject("destructive interference"));
            }
            Err(e) => panic!("unexpected norm failure: {e:?}"),
        }
    }
    Ok(SupportedMixture::new(components).unwrap())
}

proptest! {
    /// The wavefunction gauge map is a bijection on physical states.
    #[test]
    fn gauge_round_trip(m in mode_strategy()) {
        let g = GaussianPure::displaced_squeezed(&[m]).unwrap();
        let back = gaussian::wavefunction_params(&g).unwrap().reconstruct().unwrap();
        let d_err = (back.mean() - g.mean()).amax();
        let v_err = (back.covariance() - g.covariance()).amax();
        prop_assert!(d_err < 1e-10, "mean drifted by {d_err:.3e}");
        prop_assert!(v_err < 1e-10, "covariance drifted by {v_err:.3e}");
    }

    /// ⟨g₁|g₂⟩ = ⟨g₂|g₁⟩* and |⟨g₁|g₂⟩|² equals the covariance-only identity.
    #[test]
    fn overlap_symmetry_and_magnitude(ma in mode_strategy(), mb in mode_strategy()) {
        let g1 = GaussianPure::displaced_squeezed(&[ma]).unwrap();
        let g2 = GaussianPure::displaced_squeezed(&[mb]).unwrap();
        let o12 = gaussian::overlap(&g1, &g2).unwrap();
        let o21 = gaussian::overlap(&g2, &g1).unwrap();
        prop_assert!((o12 - o21.conj()).norm() < 1e-12);
        let identity = gaussian::overlap_magnitude_sq(&g1, &g2).unwrap();
        prop_assert!(
            (o12.norm_sqr() - identity).abs() < 1e-10 * identity.max(1e-30),
            "|o|² = {:.15e} vs identity {identity:.15e}", o12.norm_sqr()
        );
        prop_assert!(o12.norm() <= 1.0 + 1e-12);
    }

    /// χ_ji(ξ) = χ_ij(-ξ)* and |χ| ≤ 1 everywhere.
    #[test]
    fn characteristic_function_hermiticity(
        ma in mode_strategy(),
        mb in mode_strategy(),
        ex in -2.0f64..2.0,
        ep in -2.0f64..2.0,
    ) {
        let g1 = GaussianPure::displaced_squeezed(&[ma]).unwrap();
        let g2 = GaussianPure::displaced_squeezed(&[mb]).unwrap();
        let xi = DVector::from_vec(vec![ex, ep]);
        let chi_ij = gaussian::cross_characteristic(&g1, &g2, &xi).unwrap();
        let chi_ji = gaussian::cross_characteristic(&g2, &g1, &(-&xi)).unwrap();
        prop_assert!((chi_ji - chi_ij.conj()).norm() < 1e-11);
        prop_assert!(chi_ij.norm() <= 1.0 + 1e-11, "|χ| = {}", chi_ij.norm());
    }

    /// The Löwdin route and the generalized eigenproblem agree on the
    /// spectrum, the trace is 1, and all eigenvalues are nonnegative.
    #[test]
    fn reduction_spectrum_invariants(
        modes in proptest::collection::vec(mode_strategy(), 2..5),
        seed_coeffs in proptest::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 16),
        weights in proptest::collection::vec(0.05f64..1.0, 1..4),
    ) {
        let branches = build_branches(&modes);
        let m = try_manifold(&branches)?;
        let d = m.dim();
        let total: f64 = weights.iter().sum();
        let mut components = Vec::new();
        for (i, w) in weights.iter().enumerate() {
            let c = DVector::from_fn(d, |k, _| {
                let (re, im) = seed_coeffs[(i * d + k) % seed_coeffs.len()];
                C64::new(re + 0.05 * (i as f64 + 1.0), im)
            });
            components.push((w / total, c));
        }
        let mixture = try_mixture(components, &m)?;
        let rho = manifold::effective_density(&m, &mixture).unwrap();
        let direct = rho.spectrum();
        let general = manifold::generalized_spectrum(&m, &mixture).unwrap();
        prop_assert_eq!(direct.len(), general.len());
        for (a, b) in direct.iter().zip(general.iter()) {
            prop_assert!((a - b).abs() < 1e-10, "spectra diverge: {a:.15e} vs {b:.15e}");
        }
        let trace: f64 = direct.iter().sum();
        prop_assert!((trace - 1.0).abs() < 1e-10);
        prop_assert!(direct.iter().all(|&w| w >= 0.0));
    }

    /// Relabeling branches (and permuting coefficients accordingly) cannot
    /// change the spectrum.
    #[test]
    fn reduction_is_permutation_covariant(
        modes in proptest::collection::vec(mode_strategy(), 3..5),
        coeffs_seed in proptest::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 5),
        rot in 1usize..4,
    ) {
        let branches = build_branches(&modes);
        let d = branches.len();
        let m = try_manifold(&branches)?;
        let c = DVector::from_fn(d, |k, _| {
            let (re, im) = coeffs_seed[k % coeffs_seed.len()];
            C64::new(re, im + 0.1)
        });
        let mixture = try_mixture(vec![(1.0, c.clone())], &m)?;
        let spec = manifold::effective_density(&m, &mixture).unwrap().spectrum();

        let rot = rot % d;
        let perm_branches: Vec<GaussianPure> =
            (0..d).map(|k| branches[(k + rot) % d].clone()).collect();
        let perm_c = DVector::from_fn(d, |k, _| c[(k + rot) % d]);
        let pm = try_manifold(&perm_branches)?;
        let pmix = try_mixture(vec![(1.0, perm_c)], &pm)?;
        let pspec = manifold::effective_density(&pm, &pmix).unwrap().spectrum();
        for (a, b) in spec.iter().zip(pspec.iter()) {
            prop_assert!((a - b).abs() < 1e-10);
        }
    }

    /// Rescaling a component's coefficients by any nonzero complex number
    /// leaves the reduced state invariant (components self-normalize).
    #[test]
    fn reduction_ignores_coefficient_scale(
        modes in proptest::collection::vec(mode_strategy(), 2..4),
        coeffs_seed in proptest::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 4),
        scale_mag in 0.1f64..10.0,
        scale_arg in 0.0f64..std::f64::consts::TAU,
    ) {
        let branches = build_branches(&modes);
        let d = branches.len();
        let m = try_manifold(&branches)?;
        let c = DVector::from_fn(d, |k, _| {
            let (re, im) = coeffs_seed[k % coeffs_seed.len()];
            C64::new(re + 0.2, im)
        });
        let mixture = try_mixture(vec![(1.0, c.clone())], &m)?;
        let rho = manifold::effective_density(&m, &mixture).unwrap();
        let scaled = c.map(|z| z * C64::from_polar(scale_mag, scale_arg));
        let mixture2 = try_mixture(vec![(1.0, scaled)], &m)?;
        let rho2 = manifold::effective_density(&m, &mixture2).unwrap();
        let diff = (rho.matrix() - rho2.matrix())
            .iter()
            .fold(0.0_f64, |acc, z| acc.max(z.norm()));
        prop_assert!(diff < 1e-12, "reduction moved by {diff:.3e} under rescaling");
    }

    /// Circulant DFT spectrum of a rotation orbit equals the dense Gram
    /// spectrum of the explicitly built branches.
    #[test]
    fn circulant_matches_dense_gram(
        d in 2usize..7,
        alpha_mag in 0.4f64..1.6,
        alpha_arg in 0.0f64..std::f64::consts::TAU,
    ) {
        let alpha = C64::from_polar(alpha_mag, alpha_arg);
        let branches: Vec<GaussianPure> = (0..d)
            .map(|k| {
                let rot = alpha * C64::new(0.0, std::f64::consts::TAU * k as f64 / d as f64).exp();
                let root2 = 2.0_f64.sqrt();
                GaussianPure::displaced_squeezed(&[ModeParams::displaced(
                    root2 * rot.re,
                    root2 * rot.im,
                )])
                .unwrap()
            })
            .collect();
        // First row from the coherent-overlap closed form.
        let row: Vec<C64> = (0..d)
            .map(|k| {
                let phase = C64::new(0.0, std::f64::consts::TAU * k as f64 / d as f64).exp();
                ((phase - 1.0) * alpha.norm_sqr()).exp()
            })
            .collect();
        let circ = match manifold::circulant_gram_spectrum(&row, None) {
            Ok(s) => s,
            Err(Error::NearDependence { .. }) => {
                return Err(TestCaseError::reject("degenerate orbit"));
            }
            Err(e) => panic!("unexpected circulant failure: {e:?}"),
        };
        let dense = match BranchManifold::build(&branches, None) {
            Ok(m) => m,
            Err(Error::NearDependence { .. }) => {
                return Err(TestCaseError::reject("degenerate orbit"));
            }
            Err(e) => panic!("unexpected manifold failure: {e:?}"),
        };
        let mut circ_sorted = circ;
        circ_sorted.sort_by(|a, b| b.partial_cmp(a).unwrap());
        let mut dense_sorted: Vec<f64> =
            nalgebra::SymmetricEigen::new(dense.gram().clone()).eigenvalues.iter().copied().collect();
        dense_sorted.sort_by(|a, b| b.partial_cmp(a).unwrap());
        for (a, b) in circ_sorted.iter().zip(dense_sorted.iter()) {
            prop_assert!((a - b).abs() < 1e-10, "circulant {a:.12e} vs dense {b:.12e}");
        }
    }

    /// Non-Gaussianity is nonnegative across the two-branch family.
    #[test]
    fn non_gaussianity_is_nonnegative(
        x0 in 0.35f64..1.8,
        kappa in 0.1f64..2.5,
        p in 0.0f64..1.0,
    ) {
        let g1 = GaussianPure::displaced_squeezed(&[ModeParams::displaced(x0, 0.0)]).unwrap();
        let g2 = GaussianPure::displaced_squeezed(&[ModeParams::displaced(-x0, 0.0)]).unwrap();
        let spec = diagnostics::TwoBranchMixSpec::new(kappa, p).unwrap();
        let o = gaussian::overlap(&g1, &g2).unwrap();
        let components = diagnostics::two_branch_components(o, &spec);
        let delta = diagnostics::non_gaussianity(&[g1, g2], &components, None).unwrap();
        prop_assert!(delta >= 0.0);
    }

    /// At κ = 1 the spectrum of the dephased family is {p, 1-p} for any
    /// branch pair, squeezed or displaced, at any overlap.
    #[test]
    fn balanced_family_spectrum_is_overlap_free(
        ma in mode_strategy(),
        mb in mode_strategy(),
        p in 0.0f64..1.0,
    ) {
        let g1 = GaussianPure::displaced_squeezed(&[ma]).unwrap();
        let g2 = GaussianPure::displaced_squeezed(&[mb]).unwrap();
        let spec = diagnostics::TwoBranchMixSpec::new(1.0, p).unwrap();
        let rho = match diagnostics::two_branch_effective_state(&g1, &g2, &spec, None) {
            Ok(r) => r,
            Err(Error::NearDependence { .. }) => {
                return Err(TestCaseError::reject("dependent branches"));
            }
            Err(e) => panic!("unexpected failure: {e:?}"),
        };
        let s = rho.spectrum();
        let hi = p.max(1.0 - p);
        prop_assert!((s[0] - hi).abs() < 1e-12, "p = {p}: spectrum {s:?}");
        prop_assert!((s[1] - (1.0 - hi)).abs() < 1e-12);
    }

    /// Product branches have factorizing Grams: the two-mode reduction of a
    /// product-branch superposition matches the single-mode one built from
    /// Hadamard-multiplied overlaps.
    #[test]
    fn product_branches_factorize(
        ma1 in mode_strategy(), ma2 in mode_strategy(),
        mb1 in mode_strategy(), mb2 in mode_strategy(),
        re in -1.0f64..1.0, im in -1.0f64..1.0,
    ) {
        let two_mode = vec![
            GaussianPure::displaced_squeezed(&[ma1, mb1]).unwrap(),
            GaussianPure::displaced_squeezed(&[ma2, mb2]).unwrap(),
        ];
        let m2 = try_manifold(&two_mode)?;
        // Hadamard product of the single-mode Grams.
        let oa = gaussian::overlap(
            &GaussianPure::displaced_squeezed(&[ma1]).unwrap(),
            &GaussianPure::displaced_squeezed(&[ma2]).unwrap(),
        ).unwrap();
        let ob = gaussian::overlap(
            &GaussianPure::displaced_squeezed(&[mb1]).unwrap(),
            &GaussianPure::displaced_squeezed(&[mb2]).unwrap(),
        ).unwrap();
        prop_assert!((m2.gram()[(0, 1)] - oa * ob).norm() < 1e-12);

        // And the reductions agree spectrum for spectrum.
        let mut gram = DMatrix::identity(2, 2);
        gram[(0, 1)] = oa * ob;
        gram[(1, 0)] = (oa * ob).conj();
        let m1 = match BranchManifold::build_with_gram(gram, None) {
            Ok(m) => m,
            Err(Error::NearDependence { .. }) => {
                return Err(TestCaseError::reject("dependent branches"));
            }
            Err(e) => panic!("unexpected: {e:?}"),
        };
        let c = DVector::from_vec(vec![C64::new(1.0, 0.0), C64::new(re, im + 0.1)]);
        let mix = try_mixture(vec![(1.0, c)], &m2)?;
        let s2 = manifold::effective_density(&m2, &mix).unwrap().spectrum();
        let s1 = manifold::effective_density(&m1, &mix).unwrap().spectrum();
        for (a, b) in s2.iter().zip(s1.iter()) {
            prop_assert!((a - b).abs() < 1e-11);
        }
    }

    /// Schmidt identities of the pure Bell family: λ₊ + λ₋ = 1 and
    /// λ₊λ₋ = N².
    #[test]
    fn schmidt_identities(
        a in 0.0f64..0.99,
        b in 0.0f64..0.99,
        phi in 0.0f64..std::f64::consts::TAU,
    ) {
        let n = entanglement::negativity_from_overlaps(a, b, phi).unwrap();
        let lam = entanglement::schmidt_spectrum(a, b, phi).unwrap();
        prop_assert!((lam[0] + lam[1] - 1.0).abs() < 1e-12);
        prop_assert!((lam[0] * lam[1] - n * n).abs() < 1e-12);
        prop_assert!(n <= 0.5 + 1e-12);
    }

    /// Dephasing never increases negativity beyond the linear envelope.
    #[test]
    fn dephasing_bound_holds(
        sa in 0.4f64..1.4,
        sb in 0.4f64..1.4,
        phi in 0.0f64..std::f64::consts::TAU,
        p in 0.0f64..1.0,
    ) {
        let a1 = GaussianPure::displaced_squeezed(&[ModeParams::displaced(sa, 0.0)]).unwrap();
        let a2 = GaussianPure::displaced_squeezed(&[ModeParams::displaced(-sa, 0.0)]).unwrap();
        let b1 = GaussianPure::displaced_squeezed(&[ModeParams::displaced(sb, 0.0)]).unwrap();
        let b2 = GaussianPure::displaced_squeezed(&[ModeParams::displaced(-sb, 0.0)]).unwrap();
        let a = gaussian::overlap(&a1, &a2).unwrap().norm();
        let b = gaussian::overlap(&b1, &b2).unwrap().norm();
        let spec = entanglement::TwoBranchBellSpec::new(phi, p).unwrap();
        let state = entanglement::build_bipartite_effective((&a1, &a2), (&b1, &b2), &spec, None)
            .unwrap();
        let pure = entanglement::negativity_from_overlaps(a, b, phi).unwrap();
        prop_assert!(
            state.negativity() <= (1.0 - p) * pure + 1e-11,
            "N = {:.12e} exceeds (1-p)·N_pure = {:.12e}",
            state.negativity(),
            (1.0 - p) * pure
        );
    }
}

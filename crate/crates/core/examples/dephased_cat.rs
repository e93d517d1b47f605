//! Reduce a dephased two-branch cat state and print its exact diagnostics.
//!
//! Run with: cargo run -p multiplet --example dephased_cat

use multiplet::diagnostics::{self, TwoBranchMixSpec};
use multiplet::gaussian::{self, GaussianPure, ModeParams};
use multiplet::manifold::{self, BranchManifold, SupportedMixture};

fn main() -> multiplet::Result<()> {
    let g1 = GaussianPure::displaced_squeezed(&[ModeParams::displaced(1.7, 0.0)])?;
    let g2 = GaussianPure::displaced_squeezed(&[ModeParams::displaced(-1.7, 0.0)])?;

    // Dephased cat ρ(κ = 1, p = 0.3) on the two-branch manifold.
    let spec = TwoBranchMixSpec::new(1.0, 0.3)?;
    let overlap = gaussian::overlap(&g1, &g2)?;
    let components = diagnostics::two_branch_components(overlap, &spec);

    let branches = [g1, g2];
    let m = BranchManifold::build(&branches, None)?;
    let rho = manifold::effective_density(&m, &SupportedMixture::new(components.clone())?)?;

    let s = diagnostics::von_neumann_entropy(&rho.spectrum())?;
    let dng = diagnostics::non_gaussianity(&branches, &components, None)?;

    println!("spectrum          {:?}", rho.spectrum());
    println!("entropy           {s:.15} nats");
    println!("non_gaussianity   {dng:.15} nats");
    Ok(())
}

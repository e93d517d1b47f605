//! Scalar commands: overlap, gram, reduce, entropy, nongauss, negativity.

use std::f64::consts::LN_2;
use std::path::PathBuf;

use clap::Args;

use multiplet::diagnostics;
use multiplet::entanglement;
use multiplet::gaussian::{self, GaussianPure};
use multiplet::manifold::{self, BranchManifold, SupportedMixture};

use crate::fmt_sig as fmt;
use crate::{spec, CliError, CliResult};

#[derive(Args)]
pub struct OverlapArgs {
    /// TOML state file
    #[arg(long)]
    pub spec: PathBuf,
}

#[derive(Args)]
pub struct StateArgs {
    /// TOML state file
    #[arg(long)]
    pub spec: PathBuf,
    /// Project out Gram eigendirections with eigenvalue ≤ CUTOFF instead of
    /// rejecting a near-dependent manifold
    #[arg(long, value_name = "CUTOFF")]
    pub pseudo_inverse: Option<f64>,
}

#[derive(Args)]
pub struct EntropyArgs {
    #[command(flatten)]
    pub state: StateArgs,
    /// Rényi order α (omit for the von Neumann entropy; α = 1 is the same)
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Report in bits instead of nats
    #[arg(long)]
    pub bits: bool,
}

#[derive(Args)]
pub struct NongaussArgs {
    #[command(flatten)]
    pub state: StateArgs,
    /// Report in bits instead of nats
    #[arg(long)]
    pub bits: bool,
}

#[derive(Args)]
pub struct NegativityArgs {
    /// TOML state file with a [bell] table and [[branch_a]]/[[branch_b]] pairs
    #[arg(long)]
    pub spec: PathBuf,
}

fn build_manifold(branches: &[GaussianPure], pseudo: Option<f64>) -> CliResult<BranchManifold> {
    Ok(match pseudo {
        Some(cutoff) => BranchManifold::build_pseudo_inverse(branches, cutoff)?,
        None => BranchManifold::build(branches, None)?,
    })
}

fn load_reduction(
    args: &StateArgs,
) -> CliResult<(Vec<GaussianPure>, Vec<(f64, nalgebra::DVector<multiplet::C64>)>, BranchManifold)> {
    let file = spec::load(&args.spec)?;
    let branches = spec::realize_branches(&file.branch, "branch")?;
    let comps = spec::mixture_components(&file, &branches)?;
    let m = build_manifold(&branches, args.pseudo_inverse)?;
    Ok((branches, comps, m))
}

pub fn overlap(args: &OverlapArgs) -> CliResult<()> {
    let file = spec::load(&args.spec)?;
    let branches = spec::realize_branches(&file.branch, "branch")?;
    if branches.len() < 2 {
        return Err(CliError::Parse(
            "overlap needs at least two [[branch]] tables".into(),
        ));
    }
    println!("branches {}", branches.len());
    for i in 0..branches.len() {
        for j in (i + 1)..branches.len() {
            let o = gaussian::overlap(&branches[i], &branches[j])?;
            println!(
                "overlap[{i},{j}] re {} im {} abs {} phase {}",
                fmt(o.re),
                fmt(o.im),
                fmt(o.norm()),
                fmt(o.arg())
            );
        }
    }
    Ok(())
}

pub fn gram(args: &StateArgs) -> CliResult<()> {
    let file = spec::load(&args.spec)?;
    let branches = spec::realize_branches(&file.branch, "branch")?;
    let m = build_manifold(&branches, args.pseudo_inverse)?;
    println!("dim {}", m.dim());
    println!("rank {}", m.rank());
    println!("min_eigenvalue {}", fmt(m.min_gram_eigenvalue()));
    println!("threshold {}", fmt(m.conditioning_threshold()));
    let g = m.gram();
    for i in 0..m.dim() {
        for j in 0..m.dim() {
            println!("gram[{i},{j}] {} {}", fmt(g[(i, j)].re), fmt(g[(i, j)].im));
        }
    }
    Ok(())
}

pub fn reduce(args: &StateArgs) -> CliResult<()> {
    let (_, comps, m) = load_reduction(args)?;
    let mixture = SupportedMixture::new(comps)?;
    let rho = manifold::effective_density(&m, &mixture)?;
    println!("dim {}", rho.dim());
    let spectrum: Vec<String> = rho.spectrum().iter().map(|w| fmt(*w)).collect();
    println!("spectrum {}", spectrum.join(" "));
    println!("purity {}", fmt(rho.purity()));
    let mat = rho.matrix();
    for i in 0..rho.dim() {
        for j in 0..rho.dim() {
            println!("rho[{i},{j}] {} {}", fmt(mat[(i, j)].re), fmt(mat[(i, j)].im));
        }
    }
    Ok(())
}

pub fn entropy(args: &EntropyArgs) -> CliResult<()> {
    let (_, comps, m) = load_reduction(&args.state)?;
    let mixture = SupportedMixture::new(comps)?;
    let rho = manifold::effective_density(&m, &mixture)?;
    let spectrum = rho.spectrum();
    let factor = if args.bits { 1.0 / LN_2 } else { 1.0 };
    let unit = if args.bits { "bits" } else { "nats" };
    match args.alpha {
        Some(a) if (a - 1.0).abs() > 1e-12 => {
            let s = diagnostics::renyi_entropy(&spectrum, a)?;
            println!("renyi_entropy {} {unit} alpha {a}", fmt(s * factor));
        }
        _ => {
            let s = diagnostics::von_neumann_entropy(&spectrum)?;
            println!("von_neumann_entropy {} {unit}", fmt(s * factor));
        }
    }
    Ok(())
}

pub fn nongauss(args: &NongaussArgs) -> CliResult<()> {
    let (branches, comps, m) = load_reduction(&args.state)?;
    let mixture = SupportedMixture::new(comps.clone())?;
    let rho = manifold::effective_density(&m, &mixture)?;
    let s_rho = diagnostics::von_neumann_entropy(&rho.spectrum())?;
    let moments = diagnostics::mixture_moments(&branches, &comps)?;
    let s_tau = diagnostics::gaussian_reference_entropy(&moments.covariance)?;
    let raw = s_tau - s_rho;
    if raw < -1e-9 {
        return Err(CliError::Unphysical(format!(
            "non-Gaussianity {raw:.3e} came out negative beyond roundoff"
        )));
    }
    let factor = if args.bits { 1.0 / LN_2 } else { 1.0 };
    let unit = if args.bits { "bits" } else { "nats" };
    println!("state_entropy {} {unit}", fmt(s_rho * factor));
    println!("reference_entropy {} {unit}", fmt(s_tau * factor));
    println!("non_gaussianity {} {unit}", fmt(raw.max(0.0) * factor));
    Ok(())
}

pub fn negativity(args: &NegativityArgs) -> CliResult<()> {
    let file = spec::load(&args.spec)?;
    let bell = file
        .bell
        .as_ref()
        .ok_or_else(|| CliError::Parse("state file needs a [bell] table".into()))?;
    let ba = spec::realize_branches(&file.branch_a, "branch_a")?;
    let bb = spec::realize_branches(&file.branch_b, "branch_b")?;
    if ba.len() != 2 || bb.len() != 2 {
        return Err(CliError::Parse(format!(
            "negativity needs exactly 2 branches per party, the file has {} and {}",
            ba.len(),
            bb.len()
        )));
    }
    let bell_spec = entanglement::TwoBranchBellSpec::new(bell.phi, bell.p)?;
    let a = gaussian::overlap(&ba[0], &ba[1])?.norm();
    let b = gaussian::overlap(&bb[0], &bb[1])?.norm();
    let state = entanglement::bipartite_from_overlaps(a, b, &bell_spec, None)?;
    println!("a {}", fmt(a));
    println!("b {}", fmt(b));
    println!("phi {}", fmt(bell.phi));
    println!("p {}", fmt(bell.p));
    println!("negativity {}", fmt(state.negativity()));
    if bell.p == 0.0 {
        let closed = entanglement::negativity_from_overlaps(a, b, bell.phi)?;
        println!("closed_form {}", fmt(closed));
    }
    Ok(())
}

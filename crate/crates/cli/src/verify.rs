//! Oracle cross-checks: the closed-form pipeline against dense truncated-Fock
//! arithmetic, as a user-runnable diff table.

use std::f64::consts::PI;

use clap::Args;
use nalgebra::{DMatrix, DVector};

use multiplet::diagnostics::{self, TwoBranchMixSpec};
use multiplet::entanglement::{self, TwoBranchBellSpec};
use multiplet::fock::{self, FockState};
use multiplet::gaussian::{self, GaussianPure, ModeParams};
use multiplet::C64;

use crate::fmt_sig as fmt;
use crate::{CliError, CliResult};

pub const SCENARIOS: [&str; 5] = [
    "overlap-phase",
    "cross-moments",
    "cat-entropy",
    "dng",
    "bell-negativity",
];

#[derive(Args)]
pub struct VerifyArgs {
    /// Scenario name, or `all`
    #[arg(long, default_value = "all")]
    pub scenario: String,
    /// Print the available scenario names and exit
    #[arg(long)]
    pub list: bool,
    /// Largest tolerated |closed - oracle| per quantity
    #[arg(long, default_value_t = 1e-6)]
    pub tolerance: f64,
}

struct DiffRow {
    scenario: &'static str,
    quantity: String,
    closed: f64,
    oracle: f64,
}

fn pure(m: &ModeParams) -> CliResult<GaussianPure> {
    Ok(GaussianPure::displaced_squeezed(std::slice::from_ref(m))?)
}

fn fock_state(m: &ModeParams, cutoff: usize) -> CliResult<FockState> {
    Ok(FockState::displaced_squeezed(m, cutoff)?)
}

fn overlap_phase() -> CliResult<Vec<DiffRow>> {
    let pairs = [
        (ModeParams::displaced(0.9, 0.0), ModeParams::displaced(-0.9, 0.0)),
        (
            ModeParams { x0: 1.1, p0: 0.6, r: 0.45, theta: 2.7 },
            ModeParams { x0: -0.4, p0: 0.9, r: 0.5, theta: 1.1 },
        ),
        (
            ModeParams { x0: 0.5, p0: -1.2, r: 0.35, theta: PI / 4.0 },
            ModeParams::displaced(0.0, 0.0),
        ),
    ];
    let mut rows = Vec::new();
    for (k, (m1, m2)) in pairs.iter().enumerate() {
        let closed = gaussian::overlap(&pure(m1)?, &pure(m2)?)?;
        let oracle = fock::overlap(&fock_state(m1, 80)?, &fock_state(m2, 80)?)?;
        rows.push(DiffRow {
            scenario: "overlap-phase",
            quantity: format!("overlap[{k}].re"),
            closed: closed.re,
            oracle: oracle.re,
        });
        rows.push(DiffRow {
            scenario: "overlap-phase",
            quantity: format!("overlap[{k}].im"),
            closed: closed.im,
            oracle: oracle.im,
        });
    }
    Ok(rows)
}

fn cross_moments() -> CliResult<Vec<DiffRow>> {
    let pairs = [
        (ModeParams::displaced(0.9, 0.0), ModeParams::displaced(-0.9, 0.0)),
        (
            ModeParams { x0: 1.1, p0: 0.6, r: 0.45, theta: 2.7 },
            ModeParams { x0: -0.4, p0: 0.9, r: 0.5, theta: 1.1 },
        ),
    ];
    let cutoff = 80;
    let mut rows = Vec::new();
    for (k, (m1, m2)) in pairs.iter().enumerate() {
        let data = gaussian::cross_moments(&pure(m1)?, &pure(m2)?)?;
        let f1 = fock_state(m1, cutoff)?;
        let f2 = fock_state(m2, cutoff)?;
        let dim = f1.dim();
        let expect =
            |op: &DMatrix<C64>| -> C64 { f1.coefficients().dotc(&(op * f2.coefficients())) };
        let quantities: [(&str, C64, C64); 5] = [
            ("x", data.first[0], expect(&fock::op_x(dim))),
            ("p", data.first[1], expect(&fock::op_p(dim))),
            ("xx", data.second[(0, 0)], expect(&fock::op_xx(dim))),
            ("pp", data.second[(1, 1)], expect(&fock::op_pp(dim))),
            ("xp_sym", data.second[(0, 1)], expect(&fock::op_xp_sym(dim))),
        ];
        for (name, closed, oracle) in quantities {
            rows.push(DiffRow {
                scenario: "cross-moments",
                quantity: format!("{name}[{k}].re"),
                closed: closed.re,
                oracle: oracle.re,
            });
            rows.push(DiffRow {
                scenario: "cross-moments",
                quantity: format!("{name}[{k}].im"),
                closed: closed.im,
                oracle: oracle.im,
            });
        }
    }
    Ok(rows)
}

fn cat_family(
    s: f64,
    kappa: f64,
    p: f64,
    cutoff: usize,
) -> CliResult<(Vec<GaussianPure>, Vec<(f64, DVector<C64>)>, DMatrix<C64>)> {
    let ma = ModeParams::displaced(s, 0.0);
    let mb = ModeParams::displaced(-s, 0.0);
    let branches = vec![pure(&ma)?, pure(&mb)?];
    let spec = TwoBranchMixSpec::new(kappa, p)?;
    let o = gaussian::overlap(&branches[0], &branches[1])?;
    let comps = diagnostics::two_branch_components(o, &spec);
    let rho_f = fock::mixture_density(&[fock_state(&ma, cutoff)?, fock_state(&mb, cutoff)?], &comps)?;
    Ok((branches, comps, rho_f))
}

fn cat_entropy() -> CliResult<Vec<DiffRow>> {
    let (branches, comps, rho_f) = cat_family(1.2, 1.0, 0.3, 60)?;
    let m = multiplet::BranchManifold::build(&branches, None)?;
    let mixture = multiplet::SupportedMixture::new(comps)?;
    let rho = multiplet::manifold::effective_density(&m, &mixture)?;
    let spectrum = rho.spectrum();
    Ok(vec![
        DiffRow {
            scenario: "cat-entropy",
            quantity: "von_neumann".into(),
            closed: diagnostics::von_neumann_entropy(&spectrum)?,
            oracle: fock::vn_entropy(&rho_f),
        },
        DiffRow {
            scenario: "cat-entropy",
            quantity: "renyi_2".into(),
            closed: diagnostics::renyi_entropy(&spectrum, 2.0)?,
            oracle: fock::renyi_entropy(&rho_f, 2.0)?,
        },
    ])
}

fn dng() -> CliResult<Vec<DiffRow>> {
    let mut rows = Vec::new();
    for (k, (kappa, p)) in [(1.0, 0.0), (0.8, 0.35)].iter().enumerate() {
        let (branches, comps, rho_f) = cat_family(1.2, *kappa, *p, 60)?;
        let closed = diagnostics::non_gaussianity(&branches, &comps, None)?;
        let (_, v_f) = fock::moments(&rho_f)?;
        let oracle =
            diagnostics::gaussian_reference_entropy(&v_f)? - fock::vn_entropy(&rho_f);
        rows.push(DiffRow {
            scenario: "dng",
            quantity: format!("delta_ng[{k}]"),
            closed,
            oracle,
        });
    }
    Ok(rows)
}

fn bell_negativity() -> CliResult<Vec<DiffRow>> {
    let cutoff = 40;
    let (sa, sb) = (0.8, 0.6);
    let ma1 = ModeParams::displaced(sa, 0.0);
    let ma2 = ModeParams::displaced(-sa, 0.0);
    let mb1 = ModeParams::displaced(0.0, sb);
    let mb2 = ModeParams::displaced(0.0, -sb);
    let (fa1, fa2) = (fock_state(&ma1, cutoff)?, fock_state(&ma2, cutoff)?);
    let (fb1, fb2) = (fock_state(&mb1, cutoff)?, fock_state(&mb2, cutoff)?);
    let mut rows = Vec::new();
    for (k, (phi, p)) in [(0.0, 0.0), (0.7, 0.4)].iter().enumerate() {
        let spec = TwoBranchBellSpec::new(*phi, *p)?;
        let state = entanglement::build_bipartite_effective(
            (&pure(&ma1)?, &pure(&ma2)?),
            (&pure(&mb1)?, &pure(&mb2)?),
            &spec,
            None,
        )?;
        // These coherent pairs have real positive overlaps, so the raw
        // branches realize the gauge-fixed model directly.
        let mut coherent = DMatrix::<C64>::zeros(2, 2);
        coherent[(0, 0)] = C64::new(1.0, 0.0);
        coherent[(1, 1)] = C64::new(0.0, *phi).exp();
        let mut e11 = DMatrix::<C64>::zeros(2, 2);
        e11[(0, 0)] = C64::new(1.0, 0.0);
        let mut e22 = DMatrix::<C64>::zeros(2, 2);
        e22[(1, 1)] = C64::new(1.0, 0.0);
        let rho_f = fock::bipartite_mixture_density(
            &[fa1.clone(), fa2.clone()],
            &[fb1.clone(), fb2.clone()],
            &[(1.0 - p, coherent), (0.5 * p, e11), (0.5 * p, e22)],
        )?;
        let pt = fock::partial_transpose_b(&rho_f, cutoff, cutoff)?;
        let mut spanning = Vec::new();
        for a in [&fa1, &fa2] {
            for b in [&fb1, &fb2] {
                spanning.push(a.coefficients().kronecker(&b.coefficients().map(|z| z.conj())));
            }
        }
        rows.push(DiffRow {
            scenario: "bell-negativity",
            quantity: format!("negativity[{k}]"),
            closed: state.negativity(),
            oracle: fock::negativity_projected(&pt, &spanning)?,
        });
    }
    Ok(rows)
}

pub fn verify(args: &VerifyArgs) -> CliResult<()> {
    if args.list {
        for s in SCENARIOS {
            println!("{s}");
        }
        println!("all");
        return Ok(());
    }
    if !(args.tolerance > 0.0) {
        return Err(CliError::Parse(format!(
            "tolerance must be positive, got {}",
            args.tolerance
        )));
    }
    let wanted: Vec<&'static str> = match args.scenario.as_str() {
        "all" => SCENARIOS.to_vec(),
        name => match SCENARIOS.iter().find(|s| **s == name) {
            Some(s) => vec![s],
            None => {
                return Err(CliError::Parse(format!(
                    "unknown scenario {name:?}; valid names: {}, all",
                    SCENARIOS.join(", ")
                )))
            }
        },
    };
    let mut rows = Vec::new();
    for s in wanted {
        let mut batch = match s {
            "overlap-phase" => overlap_phase()?,
            "cross-moments" => cross_moments()?,
            "cat-entropy" => cat_entropy()?,
            "dng" => dng()?,
            "bell-negativity" => bell_negativity()?,
            _ => unreachable!(),
        };
        rows.append(&mut batch);
    }
    let mut max_diff = 0.0f64;
    let mut breaches = 0usize;
    println!("scenario quantity closed oracle absdiff status");
    for row in &rows {
        let diff = (row.closed - row.oracle).abs();
        max_diff = max_diff.max(diff);
        let status = if diff > args.tolerance {
            breaches += 1;
            "BREACH"
        } else {
            "ok"
        };
        println!(
            "{} {} {} {} {:.2e} {status}",
            row.scenario,
            row.quantity,
            fmt(row.closed),
            fmt(row.oracle),
            diff
        );
    }
    let verdict = if breaches == 0 { "PASS" } else { "FAIL" };
    println!(
        "verify {} comparisons, max |closed - oracle| {:.2e}, tolerance {:.1e}: {verdict}",
        rows.len(),
        max_diff,
        args.tolerance
    );
    if breaches > 0 {
        return Err(CliError::Verification(format!(
            "{breaches} of {} quantities exceeded tolerance {:.1e}",
            rows.len(),
            args.tolerance
        )));
    }
    Ok(())
}

//! TOML state files. A file lists the Gaussian branches and, depending on
//! the command, mixture components over them or the parameters of one of the
//! built-in two-branch families:
//!
//! ```toml
//! [[branch]]
//! modes = [{ x0 = 2.0, p0 = 0.0, r = 0.0, theta = 0.0 }]
//!
//! [[branch]]                       # alternatively: raw mean and covariance
//! raw = { d = [0.0, 0.0], v = [[0.5, 0.0], [0.0, 0.5]] }
//!
//! [[component]]                    # explicit mixture component
//! weight = 1.0
//! coefficients = [[1.0, 0.0], [0.7, 0.1]]   # [re, im] per branch
//!
//! [two_branch]                     # or the κ/p family on two branches
//! kappa = 1.0
//! p = 0.3
//!
//! [bell]                           # for `negativity`, with [[branch_a]] and
//! phi = 0.0                        # [[branch_b]] pairs
//! p = 0.0
//! ```

use std::path::Path;

use nalgebra::{DMatrix, DVector};
use serde::Deserialize;

use multiplet::diagnostics::{self, TwoBranchMixSpec};
use multiplet::gaussian::{self, GaussianPure, ModeParams};
use multiplet::C64;

use crate::{CliError, CliResult};

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateFile {
    #[serde(default)]
    pub branch: Vec<BranchSpec>,
    #[serde(default)]
    pub component: Vec<ComponentSpec>,
    pub two_branch: Option<TwoBranchTable>,
    pub bell: Option<BellTable>,
    #[serde(default)]
    pub branch_a: Vec<BranchSpec>,
    #[serde(default)]
    pub branch_b: Vec<BranchSpec>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BranchSpec {
    pub modes: Option<Vec<ModeTable>>,
    pub raw: Option<RawTable>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModeTable {
    #[serde(default)]
    pub x0: f64,
    #[serde(default)]
    pub p0: f64,
    #[serde(default)]
    pub r: f64,
    #[serde(default)]
    pub theta: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawTable {
    pub d: Vec<f64>,
    pub v: Vec<Vec<f64>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComponentSpec {
    pub weight: f64,
    pub coefficients: Vec<[f64; 2]>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TwoBranchTable {
    pub kappa: f64,
    pub p: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BellTable {
    pub phi: f64,
    pub p: f64,
}

pub fn load(path: &Path) -> CliResult<StateFile> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Parse(format!("cannot read {}: {e}", path.display())))?;
    toml::from_str(&text).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))
}

fn realize_branch(b: &BranchSpec, table: &str, index: usize) -> CliResult<GaussianPure> {
    match (&b.modes, &b.raw) {
        (Some(modes), None) => {
            let params: Vec<ModeParams> = modes
                .iter()
                .map(|m| ModeParams { x0: m.x0, p0: m.p0, r: m.r, theta: m.theta })
                .collect();
            Ok(GaussianPure::displaced_squeezed(&params)?)
        }
        (None, Some(raw)) => {
            let n = raw.d.len();
            if raw.v.len() != n || raw.v.iter().any(|row| row.len() != n) {
                return Err(CliError::Parse(format!(
                    "{table} {index}: raw covariance must be {n}x{n} to match d"
                )));
            }
            let d = DVector::from_vec(raw.d.clone());
            let v = DMatrix::from_fn(n, n, |i, j| raw.v[i][j]);
            Ok(GaussianPure::new(d, v)?)
        }
        _ => Err(CliError::Parse(format!(
            "{table} {index}: give exactly one of `modes` or `raw`"
        ))),
    }
}

pub fn realize_branches(specs: &[BranchSpec], table: &str) -> CliResult<Vec<GaussianPure>> {
    if specs.is_empty() {
        return Err(CliError::Parse(format!("state file has no [[{table}]] tables")));
    }
    specs
        .iter()
        .enumerate()
        .map(|(i, b)| realize_branch(b, table, i))
        .collect()
}

/// Mixture components over the branches, from either explicit
/// `[[component]]` tables or the `[two_branch]` κ/p family.
pub fn mixture_components(
    file: &StateFile,
    branches: &[GaussianPure],
) -> CliResult<Vec<(f64, DVector<C64>)>> {
    if !file.component.is_empty() && file.two_branch.is_some() {
        return Err(CliError::Parse(
            "state file gives both [[component]] and [two_branch]; use one of them".into(),
        ));
    }
    if let Some(tb) = &file.two_branch {
        if branches.len() != 2 {
            return Err(CliError::Parse(format!(
                "[two_branch] needs exactly 2 branches, the file has {}",
                branches.len()
            )));
        }
        let spec = TwoBranchMixSpec::new(tb.kappa, tb.p)?;
        let o = gaussian::overlap(&branches[0], &branches[1])?;
        return Ok(diagnostics::two_branch_components(o, &spec));
    }
    if file.component.is_empty() {
        return Err(CliError::Parse(
            "state file needs [[component]] tables or a [two_branch] table".into(),
        ));
    }
    let mut out = Vec::with_capacity(file.component.len());
    for (k, c) in file.component.iter().enumerate() {
        if c.coefficients.len() != branches.len() {
            return Err(CliError::Parse(format!(
                "component {k} has {} coefficients for {} branches",
                c.coefficients.len(),
                branches.len()
            )));
        }
        let coeffs = DVector::from_iterator(
            c.coefficients.len(),
            c.coefficients.iter().map(|[re, im]| C64::new(*re, *im)),
        );
        out.push((c.weight, coeffs));
    }
    Ok(out)
}

//! From a pinching description to the free-product expression for `π(X)`.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{AlgebraSpec, LocalAlgebra};
use crate::field::Field;
use crate::newman::{decompose_sigma, filtration_dims, Factor, NewmanError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PipelineError {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("invalid spec{}: {message}", location(*branch, *component))]
    Validation {
        branch: Option<usize>,
        component: Option<usize>,
        message: String,
    },
    #[error(transparent)]
    Newman(#[from] NewmanError),
}

fn location(branch: Option<usize>, component: Option<usize>) -> String {
    match (branch, component) {
        (Some(b), Some(c)) => format!(" (branch {b}, component {c})"),
        (Some(b), None) => format!(" (branch {b})"),
        _ => String::new(),
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSpec {
    p: u64,
    #[serde(default = "default_degree")]
    n: usize,
    #[serde(default)]
    modulus: Option<Vec<i64>>,
    branches: Vec<Vec<AlgebraSpec>>,
}

fn default_degree() -> usize {
    1
}

/// Branches are reduced points of `C`; entries are the components of `D` over each.
#[derive(Debug, Clone)]
pub struct PinchingSpec {
    pub field: Field,
    pub branches: Vec<Vec<AlgebraSpec>>,
    pub algebras: Vec<Vec<LocalAlgebra>>,
}

impl PinchingSpec {
    /// One message per branch that is a single reduced point.
    pub fn warnings(&self) -> Vec<String> {
        self.algebras
            .iter()
            .enumerate()
            .filter(|(_, b)| b.len() == 1 && b[0].dim() == 0)
            .map(|(i, _)| {
                format!("branch {i} is a single reduced point; pinching is trivial there")
            })
            .collect()
    }
}

pub fn parse_spec(text: &str) -> Result<PinchingSpec, PipelineError> {
    let raw: RawSpec = serde_json::from_str(text).map_err(|e| PipelineError::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    let invalid = |branch, component, message: String| PipelineError::Validation {
        branch,
        component,
        message,
    };
    let field = Field::new(raw.p, raw.n, raw.modulus.as_deref())
        .map_err(|e| invalid(None, None, e.to_string()))?;
    if raw.branches.is_empty() {
        return Err(invalid(None, None, "no branches".into()));
    }
    let mut algebras = Vec::new();
    for (b, branch) in raw.branches.iter().enumerate() {
        if branch.is_empty() {
            return Err(invalid(Some(b), None, "branch has no components".into()));
        }
        let built = branch
            .iter()
            .enumerate()
            .map(|(c, s)| {
                LocalAlgebra::build(s, &field).map_err(|e| invalid(Some(b), Some(c), e.to_string()))
            })
            .collect::<Result<Vec<_>, _>>()?;
        algebras.push(built);
    }
    Ok(PinchingSpec {
        field,
        branches: raw.branches,
        algebras,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct ComponentReport {
    pub height: u32,
    pub factors: Vec<Factor>,
    pub filtration: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct BranchReport {
    pub components: Vec<ComponentReport>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pi1Expression {
    pub zhat_mult: usize,
    pub nw_counts: BTreeMap<u32, u32>,
    pub branches: Vec<BranchReport>,
}

fn component_report(
    a: &LocalAlgebra,
) -> Result<(ComponentReport, BTreeMap<u32, u32>), NewmanError> {
    let d = decompose_sigma(a)?;
    let report = ComponentReport {
        height: d.height,
        factors: d.factors(),
        filtration: filtration_dims(a),
    };
    Ok((report, d.counts))
}

fn assemble(
    spec: &PinchingSpec,
    results: Vec<(ComponentReport, BTreeMap<u32, u32>)>,
) -> Pi1Expression {
    let mut nw_counts = BTreeMap::new();
    let mut it = results.into_iter();
    let mut branches = Vec::new();
    for b in &spec.algebras {
        let mut components = Vec::new();
        for _ in b {
            let (report, counts) = it.next().expect("one result per component");
            for (l, c) in counts {
                *nw_counts.entry(l).or_insert(0) += c;
            }
            components.push(report);
        }
        components.sort();
        branches.push(BranchReport { components });
    }
    branches.sort();
    Pi1Expression {
        zhat_mult: spec.algebras.iter().map(|b| b.len() - 1).sum(),
        nw_counts,
        branches,
    }
}

/// Components are decomposed in parallel; the merge is order-independent.
pub fn compute_pi1(spec: &PinchingSpec) -> Result<Pi1Expression, PipelineError> {
    let flat: Vec<&LocalAlgebra> = spec.algebras.iter().flatten().collect();
    let results = flat
        .par_iter()
        .map(|a| component_report(a))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(assemble(spec, results))
}

pub fn compute_pi1_sequential(spec: &PinchingSpec) -> Result<Pi1Expression, PipelineError> {
    let results = spec
        .algebras
        .iter()
        .flatten()
        .map(component_report)
        .collect::<Result<Vec<_>, _>>()?;
    Ok(assemble(spec, results))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
}

pub fn render(expr: &Pi1Expression, format: Format) -> String {
    match format {
        Format::Text => render_text(expr),
        Format::Json => render_json(expr),
    }
}

fn power(base: String, k: usize) -> String {
    if k == 1 {
        base
    } else {
        format!("{base}^*{k}")
    }
}

/// `Zhat^*M * NW(ℓ)^*N * …`, exponents of one omitted, `1` when empty.
pub fn render_text(expr: &Pi1Expression) -> String {
    let mut parts = Vec::new();
    if expr.zhat_mult > 0 {
        parts.push(power("Zhat".into(), expr.zhat_mult));
    }
    for (l, c) in &expr.nw_counts {
        parts.push(power(format!("NW({l})"), *c as usize));
    }
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join(" * ")
    }
}

pub fn render_json(expr: &Pi1Expression) -> String {
    #[derive(Serialize)]
    struct Pi1 {
        zhat: usize,
        nw: Vec<Factor>,
    }
    #[derive(Serialize)]
    struct Out<'a> {
        pi1: Pi1,
        branches: &'a [BranchReport],
    }
    let out = Out {
        pi1: Pi1 {
            zhat: expr.zhat_mult,
            nw: expr
                .nw_counts
                .iter()
                .map(|(l, c)| Factor {
                    length: *l,
                    count: *c,
                })
                .collect(),
        },
        branches: &expr.branches,
    };
    serde_json::to_string_pretty(&out).expect("serializable")
}

//! Vertex-connectivity survivable network design through element-connectivity
//! subinstances.
//!
//! Each nonempty subset of a good family induces one subinstance: the same
//! graph, with only the terminals in the subset kept as terminals and only the
//! requirements among them kept. Any feasible solutions of the subinstances
//! union to a feasible solution of the original instance.

mod flow;
mod pipeline;
mod subsolver;

use thiserror::Error;

use crate::label::Variant;

pub use flow::{edge_connectivity, element_connectivity, vertex_connectivity};
pub use pipeline::{
    solve_single_source, solve_vcsndp, PairCheck, SolutionReport, SubSolution, Subinstance,
};
pub use subsolver::{
    exact_vcsndp_oracle, min_cost_feasible_subset, ElementSubsolver, ExactSubsolver,
    ReverseDeleteSubsolver, DEFAULT_EDGE_CAP,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SndpError {
    #[error("invalid instance: {0}")]
    InvalidInstance(String),
    #[error("vertex {0} does not exist")]
    UnknownVertex(usize),
    #[error("vertex {0} is not a terminal of this query")]
    NotTerminal(usize),
    #[error("connectivity query needs two distinct vertices, got {0} twice")]
    SameVertex(usize),
    #[error(
        "{edges} edges exceed the exact solver cap of {cap}; use the reverse-delete subsolver"
    )]
    TooManyEdges { edges: usize, cap: usize },
    #[error("infeasible: requirement r({u},{v}) = {required} but only {available} disjoint paths exist using every edge")]
    Infeasible {
        u: usize,
        v: usize,
        required: u32,
        available: u32,
    },
    #[error("family does not fit the instance: {0}")]
    FamilyMismatch(String),
    #[error(
        "subsolver {solver} returned an edge set violating r({u},{v}) = {required} (found {found})"
    )]
    SubsolverInfeasible {
        solver: &'static str,
        u: usize,
        v: usize,
        required: u32,
        found: u32,
    },
    #[error("union fails requirement r({u},{v}) = {required}: vertex connectivity {found}")]
    VerificationFailed {
        u: usize,
        v: usize,
        required: u32,
        found: u32,
    },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub cost: f64,
}

/// A connectivity requirement `r(u, v)`. For single-source instances `u` is
/// the source.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Demand {
    pub u: usize,
    pub v: usize,
    pub r: u32,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SndpInstance {
    vertex_count: usize,
    edges: Vec<Edge>,
    terminals: Vec<usize>,
    demands: Vec<Demand>,
    source: Option<usize>,
    k: u32,
    variant: Variant,
}

impl SndpInstance {
    /// Validates and builds an instance. The graph must be simple with
    /// nonnegative costs, requirements must be at most `k` and only between
    /// terminals (single-source: between the source and a terminal).
    pub fn new(
        variant: Variant,
        vertex_count: usize,
        k: u32,
        edges: Vec<Edge>,
        terminals: Vec<usize>,
        source: Option<usize>,
        demands: Vec<Demand>,
    ) -> Result<Self, SndpError> {
        let bad = |msg: String| Err(SndpError::InvalidInstance(msg));
        let mut seen = std::collections::BTreeSet::new();
        for (i, e) in edges.iter().enumerate() {
            if e.u >= vertex_count || e.v >= vertex_count {
                return bad(format!(
                    "edge {i} ({}, {}) has an unknown endpoint",
                    e.u, e.v
                ));
            }
            if e.u == e.v {
                return bad(format!("edge {i} is a self-loop at {}", e.u));
            }
            if !(e.cost.is_finite() && e.cost >= 0.0) {
                return bad(format!("edge {i} has invalid cost {}", e.cost));
            }
            if !seen.insert((e.u.min(e.v), e.u.max(e.v))) {
                return bad(format!("edge {i} ({}, {}) is a duplicate", e.u, e.v));
            }
        }
        let mut is_terminal = vec![false; vertex_count];
        for &t in &terminals {
            if t >= vertex_count {
                return bad(format!("terminal {t} does not exist"));
            }
            if is_terminal[t] {
                return bad(format!("terminal {t} listed twice"));
            }
            is_terminal[t] = true;
        }
        match (variant, source) {
            (Variant::SingleSource, None) => {
                return bad("single-source instance without a source".into())
            }
            (Variant::General, Some(s)) => {
                return bad(format!("general instance with a source line ({s})"))
            }
            (Variant::SingleSource, Some(s)) => {
                if s >= vertex_count {
                    return bad(format!("source {s} does not exist"));
                }
                if is_terminal[s] {
                    return bad(format!("source {s} is also listed as a terminal"));
                }
            }
            (Variant::General, None) => {}
        }
        let mut pairs = std::collections::BTreeSet::new();
        for d in &demands {
            if d.r > k {
                return bad(format!(
                    "requirement r({},{}) = {} exceeds k = {k}",
                    d.u, d.v, d.r
                ));
            }
            if d.u == d.v {
                return bad(format!("requirement on a single vertex {}", d.u));
            }
            let ok = match variant {
                Variant::General => {
                    d.u < vertex_count && d.v < vertex_count && is_terminal[d.u] && is_terminal[d.v]
                }
                Variant::SingleSource => {
                    Some(d.u) == source && d.v < vertex_count && is_terminal[d.v]
                }
            };
            if !ok {
                return bad(match variant {
                    Variant::General => {
                        format!("requirement ({}, {}) is not between terminals", d.u, d.v)
                    }
                    Variant::SingleSource => {
                        format!("requirement for {} is not source-to-terminal", d.v)
                    }
                });
            }
            if !pairs.insert((d.u.min(d.v), d.u.max(d.v))) {
                return bad(format!("requirement ({}, {}) given twice", d.u, d.v));
            }
        }
        Ok(SndpInstance {
            vertex_count,
            edges,
            terminals,
            demands,
            source,
            k,
            variant,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn terminals(&self) -> &[usize] {
        &self.terminals
    }

    pub fn demands(&self) -> &[Demand] {
        &self.demands
    }

    pub fn source(&self) -> Option<usize> {
        self.source
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    /// Sum of the costs of the given edges, each counted once.
    pub fn cost_of(&self, edges: &[usize]) -> f64 {
        let mut sorted = edges.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        sorted.iter().map(|&e| self.edges[e].cost).sum()
    }

    /// The same instance with only the given edges kept. Returns the new
    /// instance and, for each of its edges, the index in `self`.
    pub fn restricted_to(&self, keep: &[usize]) -> (SndpInstance, Vec<usize>) {
        let mut keep = keep.to_vec();
        keep.sort_unstable();
        keep.dedup();
        let inst = SndpInstance {
            edges: keep.iter().map(|&e| self.edges[e]).collect(),
            ..self.clone()
        };
        (inst, keep)
    }
}

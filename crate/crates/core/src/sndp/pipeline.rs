use std::collections::BTreeMap;

use super::flow::disjoint_paths;
use super::subsolver::ElementSubsolver;
use super::{Demand, SndpError, SndpInstance};
use crate::label::{subsets_from_labels, GoodFamily, SubsetIndex, Variant};

/// One element-connectivity instance: the parent graph with terminal set
/// `terminals` and the parent's requirements among them.
#[derive(Debug, Clone)]
pub struct Subinstance<'a> {
    parent: &'a SndpInstance,
    subset_indices: Vec<SubsetIndex>,
    terminals: Vec<usize>,
    is_terminal: Vec<bool>,
    requirements: Vec<Demand>,
}

impl<'a> Subinstance<'a> {
    /// Keeps the positive parent requirements with both ends in `terminals`.
    pub fn new(parent: &'a SndpInstance, terminals: Vec<usize>) -> Self {
        let mut is_terminal = vec![false; parent.vertex_count()];
        for &t in &terminals {
            is_terminal[t] = true;
        }
        let requirements = parent
            .demands()
            .iter()
            .filter(|d| d.r > 0 && is_terminal[d.u] && is_terminal[d.v])
            .copied()
            .collect();
        Subinstance {
            parent,
            subset_indices: Vec::new(),
            terminals,
            is_terminal,
            requirements,
        }
    }

    pub fn parent(&self) -> &'a SndpInstance {
        self.parent
    }

    /// Family subsets that produced this terminal set, in `(j, c)` order.
    pub fn subset_indices(&self) -> &[SubsetIndex] {
        &self.subset_indices
    }

    pub fn terminals(&self) -> &[usize] {
        &self.terminals
    }

    pub fn requirements(&self) -> &[Demand] {
        &self.requirements
    }

    /// First requirement the edge set misses in element connectivity, with
    /// the count reached (capped at the requirement).
    pub fn first_violation(&self, edges: &[usize]) -> Option<(Demand, u32)> {
        let mut mask = vec![false; self.parent.edges().len()];
        for &e in edges {
            mask[e] = true;
        }
        self.violation_in_mask(&mask)
    }

    pub(crate) fn satisfied_by_mask(&self, mask: &[bool]) -> bool {
        self.violation_in_mask(mask).is_none()
    }

    fn violation_in_mask(&self, mask: &[bool]) -> Option<(Demand, u32)> {
        let n = self.parent.vertex_count();
        for d in &self.requirements {
            let edges = self
                .parent
                .edges()
                .iter()
                .zip(mask)
                .filter(|(_, &keep)| keep)
                .map(|(e, _)| e);
            let found = disjoint_paths(n, edges, |x| !self.is_terminal[x], d.u, d.v, d.r);
            if found < d.r {
                return Some((*d, found));
            }
        }
        None
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SubSolution {
    /// All family subsets with this terminal set; the first is the one solved.
    pub subset_indices: Vec<SubsetIndex>,
    pub terminals: Vec<usize>,
    pub edges: Vec<usize>,
    pub cost: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PairCheck {
    pub u: usize,
    pub v: usize,
    pub required: u32,
    pub connectivity: u32,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolutionReport {
    pub chosen_edges: Vec<usize>,
    pub total_cost: f64,
    pub per_subinstance: Vec<SubSolution>,
    pub feasibility: Vec<PairCheck>,
    /// Nonempty family subsets, counted before deduplication.
    pub m: usize,
    pub subsolver: &'static str,
}

impl SolutionReport {
    pub fn distinct_subinstances(&self) -> usize {
        self.per_subinstance.len()
    }
}

/// Solves a general instance through the family's subsets. Terminal `i` of
/// the instance gets label `i`.
pub fn solve_vcsndp(
    instance: &SndpInstance,
    fam: &GoodFamily,
    subsolver: &dyn ElementSubsolver,
) -> Result<SolutionReport, SndpError> {
    if instance.variant() != Variant::General {
        return Err(SndpError::FamilyMismatch(
            "solve_vcsndp needs a general instance".into(),
        ));
    }
    run(instance, fam, subsolver, None)
}

/// Single-source version: each subinstance's terminal set also contains the
/// source.
pub fn solve_single_source(
    instance: &SndpInstance,
    fam: &GoodFamily,
    subsolver: &dyn ElementSubsolver,
) -> Result<SolutionReport, SndpError> {
    let Some(s) = instance.source() else {
        return Err(SndpError::FamilyMismatch(
            "solve_single_source needs a single-source instance".into(),
        ));
    };
    run(instance, fam, subsolver, Some(s))
}

fn run(
    instance: &SndpInstance,
    fam: &GoodFamily,
    subsolver: &dyn ElementSubsolver,
    source: Option<usize>,
) -> Result<SolutionReport, SndpError> {
    let want = instance.variant();
    if fam.params().variant != want {
        return Err(SndpError::FamilyMismatch(format!(
            "family variant {} but instance variant {want}",
            fam.params().variant
        )));
    }
    if fam.len() != instance.terminals().len() {
        return Err(SndpError::FamilyMismatch(format!(
            "family has {} labels but the instance has {} terminals",
            fam.len(),
            instance.terminals().len()
        )));
    }

    // Group subsets by terminal set, keeping first-seen (j, c) order.
    let mut groups: Vec<(Vec<usize>, Vec<SubsetIndex>)> = Vec::new();
    let mut position: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
    let mut m = 0;
    for (index, members) in subsets_from_labels(fam) {
        if members.is_empty() {
            continue;
        }
        m += 1;
        let mut terminals: Vec<usize> = members.iter().map(|&i| instance.terminals()[i]).collect();
        terminals.extend(source);
        terminals.sort_unstable();
        match position.get(&terminals) {
            Some(&p) => groups[p].1.push(index),
            None => {
                position.insert(terminals.clone(), groups.len());
                groups.push((terminals, vec![index]));
            }
        }
    }

    let mut in_union = vec![false; instance.edges().len()];
    let mut per_subinstance = Vec::with_capacity(groups.len());
    for (terminals, subset_indices) in groups {
        let mut sub = Subinstance::new(instance, terminals);
        sub.subset_indices = subset_indices;
        let mut edges = subsolver.solve(&sub)?;
        edges.sort_unstable();
        edges.dedup();
        if let Some(&bad) = edges.iter().find(|&&e| e >= instance.edges().len()) {
            return Err(SndpError::InvalidInstance(format!(
                "subsolver {} returned edge index {bad}",
                subsolver.name()
            )));
        }
        if let Some((d, found)) = sub.first_violation(&edges) {
            return Err(SndpError::SubsolverInfeasible {
                solver: subsolver.name(),
                u: d.u,
                v: d.v,
                required: d.r,
                found,
            });
        }
        for &e in &edges {
            in_union[e] = true;
        }
        per_subinstance.push(SubSolution {
            cost: instance.cost_of(&edges),
            subset_indices: sub.subset_indices,
            terminals: sub.terminals,
            edges,
        });
    }

    let chosen_edges: Vec<usize> = (0..in_union.len()).filter(|&e| in_union[e]).collect();
    let union: Vec<_> = chosen_edges.iter().map(|&e| &instance.edges()[e]).collect();
    let mut feasibility = Vec::new();
    for d in instance.demands() {
        let connectivity = disjoint_paths(
            instance.vertex_count(),
            union.iter().copied(),
            |_| true,
            d.u,
            d.v,
            u32::MAX / 2,
        );
        if connectivity < d.r {
            return Err(SndpError::VerificationFailed {
                u: d.u,
                v: d.v,
                required: d.r,
                found: connectivity,
            });
        }
        feasibility.push(PairCheck {
            u: d.u,
            v: d.v,
            required: d.r,
            connectivity,
        });
    }
    Ok(SolutionReport {
        total_cost: instance.cost_of(&chosen_edges),
        chosen_edges,
        per_subinstance,
        feasibility,
        m,
        subsolver: subsolver.name(),
    })
}

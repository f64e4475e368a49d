//! Element-connectivity subsolvers and the exact whole-instance oracle.

use super::flow::disjoint_paths;
use super::pipeline::Subinstance;
use super::{SndpError, SndpInstance};

/// Largest edge count the exact solvers accept.
pub const DEFAULT_EDGE_CAP: usize = 22;

/// Solves one element-connectivity subinstance. Returns indices into the
/// parent instance's edge list.
pub trait ElementSubsolver {
    fn name(&self) -> &'static str;
    fn solve(&self, sub: &Subinstance<'_>) -> Result<Vec<usize>, SndpError>;
}

/// Minimum-cost edge set satisfying a monotone feasibility predicate.
///
/// Depth-first branch and bound over edges in nonincreasing cost order,
/// trying exclusion first. The predicate is only ever asked about
/// "included plus undecided", so a failed check prunes the whole subtree.
/// Returns `None` when the full edge set is infeasible. Ties keep the first
/// optimum found.
pub fn min_cost_feasible_subset(
    costs: &[f64],
    mut feasible: impl FnMut(&[bool]) -> bool,
) -> Option<Vec<usize>> {
    let mut mask = vec![true; costs.len()];
    if !feasible(&mask) {
        return None;
    }
    let mut order: Vec<usize> = (0..costs.len()).collect();
    order.sort_by(|&a, &b| costs[b].total_cmp(&costs[a]).then(a.cmp(&b)));

    struct Search<'a, F> {
        costs: &'a [f64],
        order: &'a [usize],
        feasible: F,
        best: Option<(f64, Vec<bool>)>,
    }
    impl<F: FnMut(&[bool]) -> bool> Search<'_, F> {
        fn go(&mut self, depth: usize, mask: &mut Vec<bool>, cost: f64) {
            if let Some((b, _)) = &self.best {
                if cost >= *b {
                    return;
                }
            }
            if depth == self.order.len() {
                self.best = Some((cost, mask.clone()));
                return;
            }
            let e = self.order[depth];
            mask[e] = false;
            if (self.feasible)(mask) {
                self.go(depth + 1, mask, cost);
            }
            mask[e] = true;
            self.go(depth + 1, mask, cost + self.costs[e]);
        }
    }

    let mut search = Search {
        costs,
        order: &order,
        feasible: &mut feasible,
        best: None,
    };
    search.go(0, &mut mask, 0.0);
    search
        .best
        .map(|(_, m)| (0..m.len()).filter(|&e| m[e]).collect())
}

fn check_cap(edges: usize, cap: usize) -> Result<(), SndpError> {
    if edges > cap {
        Err(SndpError::TooManyEdges { edges, cap })
    } else {
        Ok(())
    }
}

fn infeasible(sub: &Subinstance<'_>) -> Result<(), SndpError> {
    let all: Vec<usize> = (0..sub.parent().edges().len()).collect();
    match sub.first_violation(&all) {
        Some((d, found)) => Err(SndpError::Infeasible {
            u: d.u,
            v: d.v,
            required: d.r,
            available: found,
        }),
        None => Ok(()),
    }
}

/// Exact element-connectivity solver for small graphs.
#[derive(Debug, Clone, Copy)]
pub struct ExactSubsolver {
    pub max_edges: usize,
}

impl Default for ExactSubsolver {
    fn default() -> Self {
        ExactSubsolver {
            max_edges: DEFAULT_EDGE_CAP,
        }
    }
}

impl ElementSubsolver for ExactSubsolver {
    fn name(&self) -> &'static str {
        "exact"
    }

    fn solve(&self, sub: &Subinstance<'_>) -> Result<Vec<usize>, SndpError> {
        let parent = sub.parent();
        check_cap(parent.edges().len(), self.max_edges)?;
        if sub.requirements().is_empty() {
            return Ok(Vec::new());
        }
        infeasible(sub)?;
        let costs: Vec<f64> = parent.edges().iter().map(|e| e.cost).collect();
        Ok(
            min_cost_feasible_subset(&costs, |mask| sub.satisfied_by_mask(mask))
                .expect("full edge set was checked feasible"),
        )
    }
}

/// Drops edges in nonincreasing cost order while the subinstance stays
/// feasible. The result is minimal, not necessarily minimum.
#[derive(Debug, Clone, Copy, Default)]
pub struct ReverseDeleteSubsolver;

impl ElementSubsolver for ReverseDeleteSubsolver {
    fn name(&self) -> &'static str {
        "reverse-delete"
    }

    fn solve(&self, sub: &Subinstance<'_>) -> Result<Vec<usize>, SndpError> {
        let parent = sub.parent();
        if sub.requirements().is_empty() {
            return Ok(Vec::new());
        }
        infeasible(sub)?;
        let m = parent.edges().len();
        let mut order: Vec<usize> = (0..m).collect();
        order.sort_by(|&a, &b| {
            parent.edges()[b]
                .cost
                .total_cmp(&parent.edges()[a].cost)
                .then(a.cmp(&b))
        });
        let mut mask = vec![true; m];
        for e in order {
            mask[e] = false;
            if !sub.satisfied_by_mask(&mask) {
                mask[e] = true;
            }
        }
        Ok((0..m).filter(|&e| mask[e]).collect())
    }
}

/// Minimum-cost edge set meeting every requirement in vertex connectivity,
/// by exhaustive branch and bound. Refuses graphs above the edge cap.
pub fn exact_vcsndp_oracle(inst: &SndpInstance) -> Result<(Vec<usize>, f64), SndpError> {
    exact_oracle_with_cap(inst, DEFAULT_EDGE_CAP)
}

pub(crate) fn exact_oracle_with_cap(
    inst: &SndpInstance,
    cap: usize,
) -> Result<(Vec<usize>, f64), SndpError> {
    check_cap(inst.edges().len(), cap)?;
    let demands: Vec<_> = inst.demands().iter().filter(|d| d.r > 0).copied().collect();
    let n = inst.vertex_count();
    let meets = |mask: &[bool]| -> Option<(super::Demand, u32)> {
        for d in &demands {
            let edges = inst
                .edges()
                .iter()
                .zip(mask)
                .filter(|(_, &k)| k)
                .map(|(e, _)| e);
            let found = disjoint_paths(n, edges, |_| true, d.u, d.v, d.r);
            if found < d.r {
                return Some((*d, found));
            }
        }
        None
    };
    let full = vec![true; inst.edges().len()];
    if let Some((d, found)) = meets(&full) {
        return Err(SndpError::Infeasible {
            u: d.u,
            v: d.v,
            required: d.r,
            available: found,
        });
    }
    let costs: Vec<f64> = inst.edges().iter().map(|e| e.cost).collect();
    let chosen = min_cost_feasible_subset(&costs, |mask| meets(mask).is_none())
        .expect("full edge set was checked feasible");
    let cost = inst.cost_of(&chosen);
    Ok((chosen, cost))
}

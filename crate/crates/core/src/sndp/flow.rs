//! Max-flow gadget for the three connectivity notions.
//!
//! Vertex `x` becomes `in(x) = 2x` and `out(x) = 2x + 1`. A split vertex has a
//! unit arc `in -> out`; an unsplit one has an unbounded arc. Each undirected
//! edge `{u, v}` gives unit arcs `out(u) -> in(v)` and `out(v) -> in(u)`.

use std::collections::VecDeque;

use super::{Edge, SndpError, SndpInstance};

const UNBOUNDED: u32 = u32::MAX / 2;

struct Network {
    head: Vec<Option<usize>>,
    to: Vec<usize>,
    cap: Vec<u32>,
    next: Vec<Option<usize>>,
}

impl Network {
    fn new(nodes: usize) -> Self {
        Network {
            head: vec![None; nodes],
            to: Vec::new(),
            cap: Vec::new(),
            next: Vec::new(),
        }
    }

    // Arc ids come in pairs; `id ^ 1` is the reverse arc.
    fn arc(&mut self, a: usize, b: usize, c: u32) {
        for (from, dest, cap) in [(a, b, c), (b, a, 0)] {
            self.to.push(dest);
            self.cap.push(cap);
            self.next.push(self.head[from]);
            self.head[from] = Some(self.to.len() - 1);
        }
    }

    /// Unit augmenting paths until none remain or `limit` is reached.
    fn max_flow(&mut self, s: usize, t: usize, limit: u32) -> u32 {
        let mut flow = 0;
        let mut parent: Vec<Option<usize>> = vec![None; self.head.len()];
        while flow < limit {
            parent.iter_mut().for_each(|p| *p = None);
            let mut seen = vec![false; self.head.len()];
            seen[s] = true;
            let mut queue = VecDeque::from([s]);
            'bfs: while let Some(x) = queue.pop_front() {
                let mut a = self.head[x];
                while let Some(id) = a {
                    let y = self.to[id];
                    if self.cap[id] > 0 && !seen[y] {
                        seen[y] = true;
                        parent[y] = Some(id);
                        if y == t {
                            break 'bfs;
                        }
                        queue.push_back(y);
                    }
                    a = self.next[id];
                }
            }
            if !seen[t] {
                break;
            }
            let mut y = t;
            while y != s {
                let id = parent[y].expect("bfs tree");
                self.cap[id] -= 1;
                self.cap[id ^ 1] += 1;
                y = self.to[id ^ 1];
            }
            flow += 1;
        }
        flow
    }
}

/// Number of `u`-`v` paths that are disjoint on edges and on every vertex with
/// `split(x)` true, other than `u` and `v`. Stops counting at `limit`.
pub(crate) fn disjoint_paths<'a>(
    vertex_count: usize,
    edges: impl IntoIterator<Item = &'a Edge>,
    split: impl Fn(usize) -> bool,
    u: usize,
    v: usize,
    limit: u32,
) -> u32 {
    let mut net = Network::new(2 * vertex_count);
    for x in 0..vertex_count {
        let c = if x != u && x != v && split(x) {
            1
        } else {
            UNBOUNDED
        };
        net.arc(2 * x, 2 * x + 1, c);
    }
    for e in edges {
        net.arc(2 * e.u + 1, 2 * e.v, 1);
        net.arc(2 * e.v + 1, 2 * e.u, 1);
    }
    net.max_flow(2 * u + 1, 2 * v, limit)
}

fn check_pair(inst: &SndpInstance, u: usize, v: usize) -> Result<(), SndpError> {
    for x in [u, v] {
        if x >= inst.vertex_count() {
            return Err(SndpError::UnknownVertex(x));
        }
    }
    if u == v {
        return Err(SndpError::SameVertex(u));
    }
    Ok(())
}

fn selected<'a>(
    inst: &'a SndpInstance,
    edge_subset: &'a [usize],
) -> Result<Vec<&'a Edge>, SndpError> {
    let mut mask = vec![false; inst.edges().len()];
    for &e in edge_subset {
        if e >= inst.edges().len() {
            return Err(SndpError::InvalidInstance(format!(
                "edge index {e} out of range"
            )));
        }
        mask[e] = true;
    }
    Ok(inst
        .edges()
        .iter()
        .zip(mask)
        .filter_map(|(e, keep)| keep.then_some(e))
        .collect())
}

/// Maximum number of internally vertex-disjoint `u`-`v` paths in the subgraph
/// formed by `edge_subset`.
pub fn vertex_connectivity(
    inst: &SndpInstance,
    edge_subset: &[usize],
    u: usize,
    v: usize,
) -> Result<u32, SndpError> {
    check_pair(inst, u, v)?;
    let edges = selected(inst, edge_subset)?;
    Ok(disjoint_paths(
        inst.vertex_count(),
        edges,
        |_| true,
        u,
        v,
        UNBOUNDED,
    ))
}

/// Maximum number of `u`-`v` paths disjoint on edges and on non-terminal
/// vertices, where terminals are `terminal_set`. Both ends must be terminals.
pub fn element_connectivity(
    inst: &SndpInstance,
    edge_subset: &[usize],
    terminal_set: &[usize],
    u: usize,
    v: usize,
) -> Result<u32, SndpError> {
    check_pair(inst, u, v)?;
    let mut is_terminal = vec![false; inst.vertex_count()];
    for &t in terminal_set {
        if t >= inst.vertex_count() {
            return Err(SndpError::UnknownVertex(t));
        }
        is_terminal[t] = true;
    }
    for x in [u, v] {
        if !is_terminal[x] {
            return Err(SndpError::NotTerminal(x));
        }
    }
    let edges = selected(inst, edge_subset)?;
    Ok(disjoint_paths(
        inst.vertex_count(),
        edges,
        |x| !is_terminal[x],
        u,
        v,
        UNBOUNDED,
    ))
}

/// Maximum number of edge-disjoint `u`-`v` paths.
pub fn edge_connectivity(
    inst: &SndpInstance,
    edge_subset: &[usize],
    u: usize,
    v: usize,
) -> Result<u32, SndpError> {
    check_pair(inst, u, v)?;
    let edges = selected(inst, edge_subset)?;
    Ok(disjoint_paths(
        inst.vertex_count(),
        edges,
        |_| false,
        u,
        v,
        UNBOUNDED,
    ))
}

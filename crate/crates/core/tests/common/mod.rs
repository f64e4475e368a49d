//! Independent oracles and generators shared by the integration tests.
#![allow(dead_code)]

use std::collections::HashMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use vcsndp::label::{Alphabet, FamilyParams, GoodFamily, Label, Variant};
use vcsndp::sndp::{Demand, Edge, SndpInstance};
use vcsndp::verify::verify_strong_goodness;
use vcsndp::{build_family, BuildConfig};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random simple graph with unit costs.
pub fn random_graph(rng: &mut ChaCha8Rng, n: usize, p: f64) -> Vec<Edge> {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                edges.push(Edge { u, v, cost: 1.0 });
            }
        }
    }
    edges
}

fn adjacency(n: usize, edges: &[(usize, usize)]) -> Vec<Vec<bool>> {
    let mut adj = vec![vec![false; n]; n];
    for &(u, v) in edges {
        adj[u][v] = true;
        adj[v][u] = true;
    }
    adj
}

fn reaches(adj: &[Vec<bool>], removed: &[bool], u: usize, v: usize) -> bool {
    let n = adj.len();
    let mut seen = vec![false; n];
    let mut stack = vec![u];
    seen[u] = true;
    while let Some(x) = stack.pop() {
        if x == v {
            return true;
        }
        for y in 0..n {
            if adj[x][y] && !seen[y] && !removed[y] {
                seen[y] = true;
                stack.push(y);
            }
        }
    }
    false
}

/// Vertex connectivity by exhaustive cut enumeration. Adjacent pairs count
/// their edge as one path and recurse on the graph without it.
pub fn menger_bruteforce(n: usize, edges: &[Edge], u: usize, v: usize) -> u32 {
    let pairs: Vec<(usize, usize)> = edges.iter().map(|e| (e.u, e.v)).collect();
    menger_pairs(n, &pairs, u, v)
}

fn menger_pairs(n: usize, pairs: &[(usize, usize)], u: usize, v: usize) -> u32 {
    let direct = |&(a, b): &(usize, usize)| (a == u && b == v) || (a == v && b == u);
    if pairs.iter().any(direct) {
        let rest: Vec<_> = pairs.iter().copied().filter(|p| !direct(p)).collect();
        return 1 + menger_pairs(n, &rest, u, v);
    }
    let adj = adjacency(n, pairs);
    let others: Vec<usize> = (0..n).filter(|&x| x != u && x != v).collect();
    let mut best = others.len() as u32;
    for mask in 0u32..(1 << others.len()) {
        let size = mask.count_ones();
        if size >= best {
            continue;
        }
        let mut removed = vec![false; n];
        for (b, &x) in others.iter().enumerate() {
            removed[x] = mask >> b & 1 == 1;
        }
        if !reaches(&adj, &removed, u, v) {
            best = size;
        }
    }
    best
}

/// Weak goodness checked over blocking sets of every size up to `k - 1`.
/// Pair form for general families, terminal form for single-source.
pub fn weak_all_sizes(fam: &GoodFamily, k: u32) -> bool {
    let labels = fam.labels();
    let n = labels.len();
    let gamma = fam.params().gamma as usize;
    let max = k.saturating_sub(1) as usize;
    let survives = |members: &[usize], blockers: &[usize]| {
        (0..gamma).any(|j| {
            let c = labels[members[0]].get(j);
            members.iter().all(|&m| labels[m].get(j) == c)
                && blockers.iter().all(|&x| labels[x].get(j) != c)
        })
    };
    let subsets_of = |pool: &[usize]| -> Vec<Vec<usize>> {
        (0u32..(1 << pool.len()))
            .filter(|m| m.count_ones() as usize <= max)
            .map(|m| {
                (0..pool.len())
                    .filter(|&b| m >> b & 1 == 1)
                    .map(|b| pool[b])
                    .collect()
            })
            .collect()
    };
    match fam.params().variant {
        Variant::General => (0..n).all(|i| {
            (i + 1..n).all(|j| {
                let pool: Vec<usize> = (0..n).filter(|&x| x != i && x != j).collect();
                subsets_of(&pool).iter().all(|x| survives(&[i, j], x))
            })
        }),
        Variant::SingleSource => (0..n).all(|i| {
            let pool: Vec<usize> = (0..n).filter(|&x| x != i).collect();
            subsets_of(&pool).iter().all(|x| survives(&[i], x))
        }),
    }
}

/// Family with uniformly random distinct labels and the given parameters
/// (not necessarily good).
pub fn random_family(rng: &mut ChaCha8Rng, params: &FamilyParams) -> Option<GoodFamily> {
    let size = params.alphabet.size();
    let labels: Vec<Label> = (0..params.n)
        .map(|_| Label::new((0..params.gamma).map(|_| rng.gen_range(0..size)).collect()))
        .collect();
    GoodFamily::new(params.clone(), labels).ok()
}

/// Small parameter sets where random labels are strongly good often enough
/// for rejection sampling.
pub const SAMPLED_SHAPES: &[(Variant, usize, u32, u16, u32)] = &[
    (Variant::General, 3, 1, 2, 4),
    (Variant::General, 4, 1, 2, 4),
    (Variant::General, 3, 2, 4, 16),
    (Variant::SingleSource, 3, 1, 4, 4),
    (Variant::SingleSource, 4, 2, 4, 8),
    (Variant::SingleSource, 5, 2, 8, 8),
];

/// Draws random families until `count` strongly good ones are found (or the
/// attempt cap is hit). Returns the families and the attempts used.
pub fn rejection_sample(seed: u64, count: usize, cap: usize) -> (Vec<GoodFamily>, usize) {
    let mut rng = rng(seed);
    let mut found = Vec::new();
    let mut attempts = 0;
    while found.len() < count && attempts < cap {
        let (variant, n, k, a, gamma) = SAMPLED_SHAPES[attempts % SAMPLED_SHAPES.len()];
        attempts += 1;
        let params = FamilyParams::with_gamma(n, k, variant, Alphabet::new(a).unwrap(), gamma)
            .expect("sampled shape must be valid");
        if let Some(fam) = random_family(&mut rng, &params) {
            if verify_strong_goodness(&fam).is_empty() {
                found.push(fam);
            }
        }
    }
    (found, attempts)
}

/// Memoized `build_family` with default settings.
#[derive(Default)]
pub struct FamilyCache(HashMap<(usize, u32, Variant), GoodFamily>);

impl FamilyCache {
    pub fn get(&mut self, n: usize, k: u32, variant: Variant) -> GoodFamily {
        self.0
            .entry((n, k, variant))
            .or_insert_with(|| {
                build_family(n, k, variant, &BuildConfig::default())
                    .unwrap_or_else(|e| panic!("build_family({n}, {k}, {variant}) failed: {e}"))
                    .family
            })
            .clone()
    }
}

/// Random feasible tiny instance: at most 8 vertices and 22 edges, k <= 3,
/// 2 to 4 terminals. Requirements are clipped to the full graph's vertex
/// connectivity so the instance is feasible.
pub fn random_tiny_instance(rng: &mut ChaCha8Rng, variant: Variant) -> SndpInstance {
    loop {
        let n = rng.gen_range(4..=8);
        let p = rng.gen_range(0.35..0.8);
        let mut edges = random_graph(rng, n, p);
        edges.shuffle(rng);
        edges.truncate(22);
        for e in &mut edges {
            e.cost = f64::from(rng.gen_range(1..=9u32));
        }
        let k = rng.gen_range(1..=3u32);
        let mut vertices: Vec<usize> = (0..n).collect();
        vertices.shuffle(rng);
        let t = rng.gen_range(2..=4usize).min(n - 1);
        let terminals: Vec<usize> = vertices[..t].to_vec();
        let mut demands = Vec::new();
        let source = match variant {
            Variant::General => {
                for i in 0..t {
                    for j in i + 1..t {
                        let (u, v) = (terminals[i], terminals[j]);
                        let cap = menger_bruteforce(n, &edges, u, v);
                        let r = rng.gen_range(0..=k).min(cap);
                        demands.push(Demand { u, v, r });
                    }
                }
                None
            }
            Variant::SingleSource => {
                let s = vertices[t];
                for &v in &terminals {
                    let cap = menger_bruteforce(n, &edges, s, v);
                    let r = rng.gen_range(1..=k).min(cap);
                    demands.push(Demand { u: s, v, r });
                }
                Some(s)
            }
        };
        if demands.iter().all(|d| d.r == 0) {
            continue;
        }
        return SndpInstance::new(variant, n, k, edges, terminals, source, demands)
            .expect("generated instance is valid");
    }
}

use std::fmt::Write as _;

use super::{read_family, ParseError};
use crate::builder::{build_family_traced, BuildConfig, BuildTrace};
use crate::label::{FamilyParams, GoodFamily, Variant};
use crate::sndp::{SndpInstance, SolutionReport};
use crate::verify::verify_strong_goodness;

#[derive(Debug, Clone, PartialEq)]
pub struct SolutionSummary {
    pub total_cost: f64,
    pub edges: usize,
    pub m: usize,
    pub distinct_subinstances: usize,
    pub requirements: usize,
    /// Smallest `connectivity - required` over all requirements.
    pub min_slack: Option<i64>,
}

impl From<&SolutionReport> for SolutionSummary {
    fn from(r: &SolutionReport) -> Self {
        SolutionSummary {
            total_cost: r.total_cost,
            edges: r.chosen_edges.len(),
            m: r.m,
            distinct_subinstances: r.distinct_subinstances(),
            requirements: r.feasibility.len(),
            min_slack: r
                .feasibility
                .iter()
                .map(|p| i64::from(p.connectivity) - i64::from(p.required))
                .min(),
        }
    }
}

/// Human-readable summary of a run. Only the search fields (`iteration_steps`,
/// `escalations`, `wall_ms`) come from the run itself; everything else can be
/// recomputed from the family file with [`RunReport::from_family_text`].
#[derive(Debug, Clone, PartialEq)]
pub struct RunReport {
    pub params: FamilyParams,
    pub r_size: u64,
    pub iteration_steps: Vec<usize>,
    pub escalations: u32,
    pub wall_ms: u128,
    pub strong_violations: usize,
    pub weak_ok: Option<bool>,
    pub solution: Option<SolutionSummary>,
}

impl RunReport {
    pub fn for_build(fam: &GoodFamily, trace: &BuildTrace) -> Self {
        let mut report = Self::for_family(fam);
        let last = trace.attempts.last();
        report.iteration_steps = last
            .map(|a| a.iterations.iter().map(|it| it.steps()).collect())
            .unwrap_or_default();
        report.escalations = trace.attempts.len().saturating_sub(1) as u32;
        report.wall_ms = trace.wall.as_millis();
        report
    }

    pub fn for_family(fam: &GoodFamily) -> Self {
        let p = fam.params().clone();
        RunReport {
            r_size: p.subset_count(),
            escalations: p.escalations,
            strong_violations: verify_strong_goodness(fam).len(),
            params: p,
            iteration_steps: Vec::new(),
            wall_ms: 0,
            weak_ok: None,
            solution: None,
        }
    }

    pub fn from_family_text(text: &str) -> Result<Self, ParseError> {
        Ok(Self::for_family(&read_family(text)?))
    }

    pub fn render(&self) -> String {
        let p = &self.params;
        let mut out = String::new();
        let _ = writeln!(
            out,
            "variant={} n={} k={} A={} gamma={} alpha={} beta={}",
            p.variant,
            p.n,
            p.k,
            p.alphabet.size(),
            p.gamma,
            p.alpha,
            p.beta
        );
        let _ = writeln!(out, "|R|={} escalations={}", self.r_size, self.escalations);
        if !self.iteration_steps.is_empty() {
            let max = self.iteration_steps.iter().max().copied().unwrap_or(0);
            let total: usize = self.iteration_steps.iter().sum();
            let _ = writeln!(
                out,
                "iterations={} total_steps={total} max_steps={max} wall_ms={}",
                self.iteration_steps.len(),
                self.wall_ms
            );
        }
        let _ = writeln!(out, "strong_violations={}", self.strong_violations);
        if let Some(ok) = self.weak_ok {
            let _ = writeln!(out, "weak_bruteforce={}", if ok { "pass" } else { "fail" });
        }
        if let Some(s) = &self.solution {
            let _ = writeln!(
                out,
                "cost={} edges={} m={} subinstances={} requirements={} min_slack={}",
                s.total_cost,
                s.edges,
                s.m,
                s.distinct_subinstances,
                s.requirements,
                s.min_slack.map_or("-".to_string(), |v| v.to_string())
            );
        }
        out
    }
}

/// Solution file: a summary header, the chosen edges, and one `c` line per
/// requirement with its verified vertex connectivity.
pub fn write_solution(report: &SolutionReport, inst: &SndpInstance) -> String {
    let mut out = format!(
        "solution v1 cost={} edges={} m={} subinstances={} subsolver={}\n",
        report.total_cost,
        report.chosen_edges.len(),
        report.m,
        report.distinct_subinstances(),
        report.subsolver
    );
    for &e in &report.chosen_edges {
        let edge = inst.edges()[e];
        let _ = writeln!(out, "e {} {} {}", edge.u, edge.v, edge.cost);
    }
    for c in &report.feasibility {
        let _ = writeln!(out, "c {} {} {} {}", c.u, c.v, c.required, c.connectivity);
    }
    out
}

pub const BENCH_HEADER: &str = "n,k,variant,gamma,R_size,escalations,max_steps,wall_ms,status";

#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    pub n: usize,
    pub k: u32,
    pub variant: Variant,
    /// Final gamma; on failure, the gamma of the last attempt.
    pub gamma: u32,
    pub r_size: u64,
    pub escalations: u32,
    pub max_steps: usize,
    /// Median over trials.
    pub wall_ms: u128,
    pub ok: bool,
}

/// Builds every grid point `trials` times. The construction is deterministic,
/// so repeats only affect the timing column.
pub fn run_bench(
    n_grid: &[usize],
    k_grid: &[u32],
    variants: &[Variant],
    trials: usize,
    config: &BuildConfig,
) -> Vec<BenchRow> {
    let mut rows = Vec::new();
    for &variant in variants {
        for &n in n_grid {
            for &k in k_grid {
                let mut walls = Vec::new();
                let mut row = None;
                for _ in 0..trials.max(1) {
                    let (result, trace) = build_family_traced(n, k, variant, config);
                    walls.push(trace.wall.as_millis());
                    let Some(last) = trace.attempts.last() else {
                        continue;
                    };
                    let a = match &result {
                        Ok(f) => u64::from(f.params().alphabet.size()),
                        Err(_) => {
                            crate::label::derive_params(n, k, variant, config.c_mult, config.zeta)
                                .map_or(0, |p| u64::from(p.alphabet.size()))
                        }
                    };
                    row = Some(BenchRow {
                        n,
                        k,
                        variant,
                        gamma: last.gamma,
                        r_size: u64::from(last.gamma) * a,
                        escalations: trace.attempts.len() as u32 - 1,
                        max_steps: trace.max_steps(),
                        wall_ms: 0,
                        ok: result.is_ok(),
                    });
                }
                walls.sort_unstable();
                let Some(mut row) = row else {
                    continue;
                };
                row.wall_ms = walls[walls.len() / 2];
                rows.push(row);
            }
        }
    }
    rows
}

pub fn bench_csv(rows: &[BenchRow]) -> String {
    let mut out = format!("{BENCH_HEADER}\n");
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{}",
            r.n,
            r.k,
            r.variant,
            r.gamma,
            r.r_size,
            r.escalations,
            r.max_steps,
            r.wall_ms,
            if r.ok { "ok" } else { "failed" }
        );
    }
    out
}

//! FLIP and k-FLIP local search with pluggable pivot rules.
//!
//! A run starts from a cut and repeatedly applies an improving move of at
//! most `k` vertices chosen by the pivot rule, until no improving move is
//! left (a `k`-local optimum) or the step budget runs out. Every step and its
//! exact improvement is recorded.

mod best;
mod explore;
mod state;

use std::cmp::Ordering;
use std::fmt::Write as _;
use std::ops::ControlFlow;

use num_bigint::BigInt;
use num_traits::Signed;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::cut::{Cut, FlipSequence};
use crate::error::{Error, Result};
use crate::graph::{VertexId, WeightedGraph};
use crate::maxcut::{self, check_enumeration_budget, for_each_subset};
use crate::rng::{tag, RngSeed};
use crate::weight::Weight;

pub use explore::{explore_executions, ExecutionTree};
pub use state::LocalState;

/// Default cap on the number of subsets a single enumeration may visit.
pub const DEFAULT_ENUM_BUDGET: u128 = 50_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PivotRule {
    /// Largest improvement; ties go to the lexicographically smallest set.
    Greedy,
    /// First improving move when scanning subsets of `order` (by size, then
    /// lexicographically by position in `order`).
    FirstImprovement { order: Vec<VertexId> },
    /// Uniform choice among all improving moves.
    Random { seed: RngSeed },
    /// Replays `script`; a step that is not improving when reached aborts the run.
    Scripted { script: FlipSequence },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Termination {
    LocalOpt,
    Budget,
    ScriptFail,
    /// A scripted run used up its script at a cut that still has improving moves.
    ScriptExhausted,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceStep {
    pub vertices: Vec<VertexId>,
    pub improvement: Weight,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScriptFailure {
    pub step: usize,
    pub vertices: Vec<VertexId>,
    pub improvement: Weight,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunTrace {
    pub steps: Vec<TraceStep>,
    pub initial_cut: Cut,
    pub final_cut: Cut,
    pub terminated: Termination,
    pub step_count: usize,
    pub script_failure: Option<ScriptFailure>,
}

impl RunTrace {
    pub fn sequence(&self, k: usize) -> FlipSequence {
        FlipSequence::from_steps(self.steps.iter().map(|s| s.vertices.clone()).collect(), k)
            .expect("trace steps are valid moves")
    }

    /// One JSON record per step followed by a summary record.
    pub fn to_jsonl(&self) -> String {
        let mut out = String::new();
        for (i, step) in self.steps.iter().enumerate() {
            let rec = serde_json::json!({
                "step_index": i,
                "vertices": step.vertices,
                "improvement_numerator": step.improvement.numerator().to_string(),
                "denominator_exponent": step.improvement.exponent(),
            });
            let _ = writeln!(out, "{rec}");
        }
        let summary = serde_json::json!({
            "summary": {
                "terminated": self.terminated,
                "step_count": self.step_count,
                "initial_cut": self.initial_cut,
                "final_cut": self.final_cut,
                "script_failure": self.script_failure,
            }
        });
        let _ = writeln!(out, "{summary}");
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FlipConfig {
    /// Largest move size.
    pub k: usize,
    /// Maximum number of steps.
    pub step_budget: usize,
    /// Maximum number of subsets one enumeration may visit.
    pub enum_budget: u128,
}

impl FlipConfig {
    pub fn new(k: usize, step_budget: usize) -> Self {
        FlipConfig { k, step_budget, enum_budget: DEFAULT_ENUM_BUDGET }
    }
}

fn by_value_then_lex(a: &(Vec<VertexId>, BigInt), b: &(Vec<VertexId>, BigInt)) -> Ordering {
    b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0))
}

fn improving_moves_num(state: &LocalState<'_>, k: usize, enum_budget: u128) -> Result<Vec<(Vec<VertexId>, BigInt)>> {
    let g = state.graph();
    check_enumeration_budget(g.n_vertices(), k, enum_budget)?;
    let mut out = Vec::new();
    if k == 1 {
        out.extend((0..g.n_vertices()).filter(|&v| state.gain(v).is_positive()).map(|v| (vec![v], state.gain(v).clone())));
    } else {
        for_each_subset(g.n_vertices(), k, |set| {
            let value = state.improvement_num(set);
            if value.is_positive() {
                out.push((set.to_vec(), value));
            }
            ControlFlow::Continue(())
        });
    }
    out.sort_by(by_value_then_lex);
    Ok(out)
}

/// All improving moves of size at most `k`, by improvement (descending) and
/// then lexicographically.
pub fn list_improving_moves(
    g: &WeightedGraph,
    sigma: &Cut,
    k: usize,
    enum_budget: u128,
) -> Result<Vec<(Vec<VertexId>, Weight)>> {
    if k == 0 {
        return Err(Error::invalid("k must be at least 1"));
    }
    let state = LocalState::new(g, sigma.clone())?;
    Ok(improving_moves_num(&state, k, enum_budget)?
        .into_iter()
        .map(|(s, v)| (s, Weight::new(v, g.denom_exp())))
        .collect())
}

/// The greedy choice: a maximally improving move, smallest set among ties.
pub fn best_move(state: &LocalState<'_>, k: usize, enum_budget: u128) -> Result<Option<(Vec<VertexId>, BigInt)>> {
    match k {
        0 => Err(Error::invalid("k must be at least 1")),
        1..=3 => Ok(best::best_move_small(state, k)),
        _ => Ok(improving_moves_num(state, k, enum_budget)?.into_iter().next()),
    }
}

fn first_improving(
    state: &LocalState<'_>,
    k: usize,
    order: &[VertexId],
    enum_budget: u128,
) -> Result<Option<(Vec<VertexId>, BigInt)>> {
    if k == 1 {
        return Ok(order.iter().find(|&&v| state.gain(v).is_positive()).map(|&v| (vec![v], state.gain(v).clone())));
    }
    check_enumeration_budget(order.len(), k, enum_budget)?;
    let mut found = None;
    let mut set = Vec::with_capacity(k);
    for_each_subset(order.len(), k, |positions| {
        set.clear();
        set.extend(positions.iter().map(|&p| order[p]));
        let value = state.improvement_num(&set);
        if value.is_positive() {
            found = Some((set.clone(), value));
            return ControlFlow::Break(());
        }
        ControlFlow::Continue(())
    });
    Ok(found)
}

fn check_order(order: &[VertexId], n: usize) -> Result<()> {
    let mut seen = vec![false; n];
    for &v in order {
        if v >= n || std::mem::replace(&mut seen[v], true) {
            return Err(Error::invalid("first-improvement order must be a permutation of the vertices"));
        }
    }
    if order.len() != n {
        return Err(Error::invalid("first-improvement order must list every vertex"));
    }
    Ok(())
}

/// Runs k-FLIP from `sigma` under `rule`.
pub fn run_flip(g: &WeightedGraph, sigma: &Cut, rule: &PivotRule, config: &FlipConfig) -> Result<RunTrace> {
    let k = config.k;
    if k == 0 {
        return Err(Error::invalid("k must be at least 1"));
    }
    let mut state = LocalState::new(g, sigma.clone())?;
    let mut rng = match rule {
        PivotRule::Random { seed } => Some(seed.child(tag::PIVOT).rng()),
        _ => None,
    };
    match rule {
        PivotRule::FirstImprovement { order } => check_order(order, g.n_vertices())?,
        PivotRule::Scripted { script } => script.check_vertices(g.n_vertices())?,
        _ => {}
    }

    let mut steps = Vec::new();
    let mut script_failure = None;
    let terminated = loop {
        let next = if steps.len() >= config.step_budget {
            None
        } else {
            match rule {
                PivotRule::Greedy => best_move(&state, k, config.enum_budget)?,
                PivotRule::FirstImprovement { order } => first_improving(&state, k, order, config.enum_budget)?,
                PivotRule::Random { .. } => {
                    let moves = improving_moves_num(&state, k, config.enum_budget)?;
                    if moves.is_empty() {
                        None
                    } else {
                        let pick = rng.as_mut().expect("random rule has an rng").gen_range(0..moves.len());
                        moves.into_iter().nth(pick)
                    }
                }
                PivotRule::Scripted { script } => match script.steps().get(steps.len()) {
                    Some(step) => {
                        if step.len() > k {
                            return Err(Error::invalid(format!(
                                "script step {} moves {} vertices but k = {k}",
                                steps.len(),
                                step.len()
                            )));
                        }
                        let value = state.improvement_num(step);
                        if !value.is_positive() {
                            script_failure = Some(ScriptFailure {
                                step: steps.len(),
                                vertices: step.clone(),
                                improvement: Weight::new(value, g.denom_exp()),
                            });
                            break Termination::ScriptFail;
                        }
                        Some((step.clone(), value))
                    }
                    None => {
                        break if best_move(&state, k, config.enum_budget)?.is_some() {
                            Termination::ScriptExhausted
                        } else {
                            Termination::LocalOpt
                        };
                    }
                },
            }
        };
        match next {
            Some((set, value)) => {
                state.apply(&set);
                steps.push(TraceStep { vertices: set, improvement: Weight::new(value, g.denom_exp()) });
            }
            None if steps.len() >= config.step_budget => {
                break if best_move(&state, k, config.enum_budget)?.is_some() {
                    Termination::Budget
                } else {
                    Termination::LocalOpt
                };
            }
            None => break Termination::LocalOpt,
        }
    };
    Ok(RunTrace {
        step_count: steps.len(),
        steps,
        initial_cut: sigma.clone(),
        final_cut: state.into_cut(),
        terminated,
        script_failure,
    })
}

/// Value of a maximum cut by enumerating all `2^(n-1)` cuts.
pub fn brute_force_max_cut(g: &WeightedGraph) -> Result<Weight> {
    let n = g.n_vertices();
    if n > 24 {
        return Err(Error::resource(format!("brute-force max cut over {n} vertices")));
    }
    if n == 0 {
        return Ok(Weight::zero());
    }
    let mut best: Option<BigInt> = None;
    for mask in 0u32..(1 << (n - 1)) {
        let sides = (0..n).map(|v| if v < n - 1 && mask >> v & 1 == 1 { -1 } else { 1 }).collect();
        let value = maxcut::cut_value_num(g, &Cut::new(sides)?);
        if best.as_ref().map_or(true, |b| value > *b) {
            best = Some(value);
        }
    }
    Ok(Weight::new(best.expect("at least one cut"), g.denom_exp()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f0_same_side() -> (WeightedGraph, Cut) {
        (WeightedGraph::new(2, [(0, 1, Weight::from_int(7))]).unwrap(), "++".parse().unwrap())
    }

    #[test]
    fn listing_excludes_zero_moves() {
        let (g, sigma) = f0_same_side();
        let moves = list_improving_moves(&g, &sigma, 2, 100).unwrap();
        let sets: Vec<_> = moves.iter().map(|(s, _)| s.clone()).collect();
        assert_eq!(sets, vec![vec![0], vec![1]]);
        assert!(list_improving_moves(&g, &"+-".parse().unwrap(), 1, 100).unwrap().is_empty());
    }

    #[test]
    fn budget_errors_are_resource_errors() {
        let (g, sigma) = f0_same_side();
        assert!(matches!(list_improving_moves(&g, &sigma, 2, 2), Err(Error::Resource(_))));
    }

    #[test]
    fn step_budget_stops_the_run() {
        let (g, sigma) = f0_same_side();
        let trace = run_flip(&g, &sigma, &PivotRule::Greedy, &FlipConfig::new(1, 0)).unwrap();
        assert_eq!(trace.terminated, Termination::Budget);
        assert_eq!(trace.step_count, 0);
        let trace = run_flip(&g, &sigma, &PivotRule::Greedy, &FlipConfig::new(1, 5)).unwrap();
        assert_eq!(trace.terminated, Termination::LocalOpt);
        assert_eq!(trace.steps, vec![TraceStep { vertices: vec![0], improvement: Weight::from_int(7) }]);
    }

    #[test]
    fn scripted_rule_reports_failures() {
        let (g, sigma) = f0_same_side();
        let script = FlipSequence::singletons([0, 1]);
        let trace = run_flip(&g, &sigma, &PivotRule::Scripted { script }, &FlipConfig::new(1, 10)).unwrap();
        assert_eq!(trace.terminated, Termination::ScriptFail);
        let failure = trace.script_failure.unwrap();
        assert_eq!(failure.step, 1);
        assert_eq!(failure.improvement, Weight::from_int(-7));

        let script = FlipSequence::new(1);
        let trace = run_flip(&g, &sigma, &PivotRule::Scripted { script }, &FlipConfig::new(1, 10)).unwrap();
        assert_eq!(trace.terminated, Termination::ScriptExhausted);
    }

    #[test]
    fn first_improvement_requires_permutation() {
        let (g, sigma) = f0_same_side();
        let rule = PivotRule::FirstImprovement { order: vec![1, 1] };
        assert!(run_flip(&g, &sigma, &rule, &FlipConfig::new(1, 10)).is_err());
        let rule = PivotRule::FirstImprovement { order: vec![1, 0] };
        let trace = run_flip(&g, &sigma, &rule, &FlipConfig::new(1, 10)).unwrap();
        assert_eq!(trace.steps[0].vertices, vec![1]);
    }

    #[test]
    fn jsonl_has_one_record_per_step_plus_summary() {
        let (g, sigma) = f0_same_side();
        let trace = run_flip(&g, &sigma, &PivotRule::Greedy, &FlipConfig::new(1, 5)).unwrap();
        let text = trace.to_jsonl();
        let lines: Vec<serde_json::Value> = text.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
        assert_eq!(lines.len(), 2);
        assert_eq!(lines[0]["improvement_numerator"], "7");
        assert_eq!(lines[1]["summary"]["terminated"], "local_opt");
    }
}

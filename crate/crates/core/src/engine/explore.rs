//! Exhaustive exploration of every improving execution from a cut.
//!
//! Improvements are recomputed from full cut values rather than gains, so
//! the explorer serves as an independent oracle for the engine. Cut values
//! strictly increase along an execution, so the state graph is acyclic and
//! execution counts can be memoized per cut.

use std::collections::HashMap;
use std::ops::ControlFlow;

use serde::Serialize;

use crate::cut::{Cut, FlipSequence};
use crate::error::{Error, Result};
use crate::graph::{VertexId, WeightedGraph};
use crate::maxcut::{cut_value_num, for_each_subset};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExecutionTree {
    /// Number of maximal improving executions (each ends in a local optimum), saturating.
    pub executions: u128,
    /// Distinct cuts reachable by improving moves, including the start.
    pub states: usize,
    /// Up to `witness_cap` executions in lexicographic order of their moves.
    pub witnesses: Vec<FlipSequence>,
}

struct Explorer<'g> {
    g: &'g WeightedGraph,
    k: usize,
    state_budget: usize,
    moves: HashMap<Cut, Vec<Vec<VertexId>>>,
    counts: HashMap<Cut, u128>,
}

impl Explorer<'_> {
    fn improving_moves(&mut self, sigma: &Cut) -> Result<Vec<Vec<VertexId>>> {
        if let Some(m) = self.moves.get(sigma) {
            return Ok(m.clone());
        }
        if self.moves.len() >= self.state_budget {
            return Err(Error::resource(format!("execution tree exceeds {} states", self.state_budget)));
        }
        let base = cut_value_num(self.g, sigma);
        let mut found = Vec::new();
        let mut next = sigma.clone();
        for_each_subset(self.g.n_vertices(), self.k, |set| {
            next.flip_all(set);
            if cut_value_num(self.g, &next) > base {
                found.push(set.to_vec());
            }
            next.flip_all(set);
            ControlFlow::Continue(())
        });
        self.moves.insert(sigma.clone(), found.clone());
        Ok(found)
    }

    fn count(&mut self, sigma: &Cut) -> Result<u128> {
        if let Some(&c) = self.counts.get(sigma) {
            return Ok(c);
        }
        let moves = self.improving_moves(sigma)?;
        let total = if moves.is_empty() {
            1
        } else {
            let mut total: u128 = 0;
            for m in &moves {
                let mut next = sigma.clone();
                next.flip_all(m);
                total = total.saturating_add(self.count(&next)?);
            }
            total
        };
        self.counts.insert(sigma.clone(), total);
        Ok(total)
    }

    fn collect(&mut self, sigma: &Cut, path: &mut Vec<Vec<VertexId>>, out: &mut Vec<FlipSequence>, cap: usize) -> Result<()> {
        if out.len() >= cap {
            return Ok(());
        }
        let moves = self.improving_moves(sigma)?;
        if moves.is_empty() {
            out.push(FlipSequence::from_steps(path.clone(), self.k)?);
            return Ok(());
        }
        for m in moves {
            let mut next = sigma.clone();
            next.flip_all(&m);
            path.push(m);
            self.collect(&next, path, out, cap)?;
            path.pop();
        }
        Ok(())
    }
}

/// Explores all improving `k`-flip executions from `sigma`.
///
/// Visiting more than `state_budget` distinct cuts is a resource error.
pub fn explore_executions(
    g: &WeightedGraph,
    sigma: &Cut,
    k: usize,
    state_budget: usize,
    witness_cap: usize,
) -> Result<ExecutionTree> {
    sigma.check_len(g.n_vertices())?;
    if k == 0 {
        return Err(Error::invalid("k must be at least 1"));
    }
    let mut ex = Explorer { g, k, state_budget, moves: HashMap::new(), counts: HashMap::new() };
    let executions = ex.count(sigma)?;
    let mut witnesses = Vec::new();
    ex.collect(sigma, &mut Vec::new(), &mut witnesses, witness_cap)?;
    Ok(ExecutionTree { executions, states: ex.moves.len(), witnesses })
}

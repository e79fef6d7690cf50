//! Cuts and flip sequences.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::VertexId;

/// Assignment of every vertex to side `+1` or `-1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Cut(Vec<i8>);

impl Cut {
    pub fn new(sides: Vec<i8>) -> Result<Self> {
        if let Some(i) = sides.iter().position(|&s| s != 1 && s != -1) {
            return Err(Error::invalid(format!("cut entry {i} is {}, expected +1 or -1", sides[i])));
        }
        Ok(Cut(sides))
    }

    /// Every vertex on `side`.
    pub fn uniform(n: usize, side: i8) -> Self {
        assert!(side == 1 || side == -1);
        Cut(vec![side; n])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn side(&self, v: VertexId) -> i8 {
        self.0[v]
    }

    pub fn set_side(&mut self, v: VertexId, side: i8) {
        assert!(side == 1 || side == -1);
        self.0[v] = side;
    }

    pub fn flip(&mut self, v: VertexId) {
        self.0[v] = -self.0[v];
    }

    pub fn flip_all(&mut self, set: &[VertexId]) {
        for &v in set {
            self.flip(v);
        }
    }

    pub fn negated(&self) -> Cut {
        Cut(self.0.iter().map(|s| -s).collect())
    }

    pub fn sides(&self) -> &[i8] {
        &self.0
    }

    pub(crate) fn check_len(&self, n: usize) -> Result<()> {
        if self.0.len() != n {
            return Err(Error::invalid(format!("cut has {} entries but the graph has {n} vertices", self.0.len())));
        }
        Ok(())
    }
}

/// Text form: one `+` or `-` per vertex.
impl fmt::Display for Cut {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: String = self.0.iter().map(|&x| if x > 0 { '+' } else { '-' }).collect();
        f.write_str(&s)
    }
}

impl FromStr for Cut {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.trim()
            .chars()
            .enumerate()
            .map(|(i, c)| match c {
                '+' => Ok(1),
                '-' => Ok(-1),
                other => Err(Error::Parse { line: 1, msg: format!("character {i} of cut is `{other}`") }),
            })
            .collect::<Result<Vec<_>>>()
            .map(Cut)
    }
}

impl Serialize for Cut {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Cut {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

/// An ordered list of moves; each move flips a set of at most `k_bound` vertices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FlipSequence {
    steps: Vec<Vec<VertexId>>,
    k_bound: usize,
}

impl FlipSequence {
    pub fn new(k_bound: usize) -> Self {
        FlipSequence { steps: Vec::new(), k_bound }
    }

    pub fn from_steps(steps: Vec<Vec<VertexId>>, k_bound: usize) -> Result<Self> {
        let mut seq = FlipSequence::new(k_bound);
        for step in steps {
            seq.push(step)?;
        }
        Ok(seq)
    }

    /// Sequence of single-vertex moves.
    pub fn singletons(vertices: impl IntoIterator<Item = VertexId>) -> Self {
        FlipSequence { steps: vertices.into_iter().map(|v| vec![v]).collect(), k_bound: 1 }
    }

    pub fn push(&mut self, step: Vec<VertexId>) -> Result<()> {
        let idx = self.steps.len();
        if step.is_empty() {
            return Err(Error::invalid(format!("step {idx} is empty")));
        }
        if step.len() > self.k_bound {
            return Err(Error::invalid(format!(
                "step {idx} moves {} vertices, more than k = {}",
                step.len(),
                self.k_bound
            )));
        }
        let mut sorted = step.clone();
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::invalid(format!("step {idx} repeats a vertex")));
        }
        self.steps.push(step);
        Ok(())
    }

    pub fn extend(&mut self, other: &FlipSequence) -> Result<()> {
        for step in &other.steps {
            self.push(step.clone())?;
        }
        Ok(())
    }

    pub fn steps(&self) -> &[Vec<VertexId>] {
        &self.steps
    }

    pub fn k_bound(&self) -> usize {
        self.k_bound
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Same steps under a (larger) size bound.
    pub fn with_k_bound(&self, k_bound: usize) -> Result<Self> {
        FlipSequence::from_steps(self.steps.clone(), k_bound)
    }

    pub(crate) fn check_vertices(&self, n: usize) -> Result<()> {
        for (i, step) in self.steps.iter().enumerate() {
            if let Some(v) = step.iter().find(|&&v| v >= n) {
                return Err(Error::invalid(format!("step {i} references vertex {v} outside 0..{n}")));
            }
        }
        Ok(())
    }

    /// Number of times each vertex is moved.
    pub fn occurrences(&self, n: usize) -> Vec<usize> {
        let mut counts = vec![0; n];
        for step in &self.steps {
            for &v in step {
                counts[v] += 1;
            }
        }
        counts
    }
}

/// Text form: one step per line, vertex ids separated by spaces.
impl fmt::Display for FlipSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for step in &self.steps {
            let line: Vec<String> = step.iter().map(ToString::to_string).collect();
            writeln!(f, "{}", line.join(" "))?;
        }
        Ok(())
    }
}

impl FromStr for FlipSequence {
    type Err = Error;

    /// Blank lines are ignored; the size bound is the largest step.
    fn from_str(s: &str) -> Result<Self> {
        let mut steps = Vec::new();
        for (i, line) in s.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let step = line
                .split_whitespace()
                .map(|t| {
                    t.parse::<VertexId>()
                        .map_err(|_| Error::Parse { line: i + 1, msg: format!("bad vertex id `{t}`") })
                })
                .collect::<Result<Vec<_>>>()?;
            steps.push(step);
        }
        let k = steps.iter().map(Vec::len).max().unwrap_or(1);
        FlipSequence::from_steps(steps, k)
    }
}

//! Hypergraph instances: ordered triples over a variable set, repeats allowed.
//!
//! Variables are 0-based in memory and 1-based in the text format:
//!
//! ```text
//! # comment
//! p hyp3 <nvars> <nedges>
//! e 1 2 3
//! ```

use crate::error::{parse_err, Error, Result};
use crate::structure::{make_structure, RelStructure};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instance {
    variable_count: usize,
    edges: Vec<[usize; 3]>,
}

impl Instance {
    /// `edges` use 0-based variable indices.
    pub fn new(variable_count: usize, edges: Vec<[usize; 3]>) -> Result<Self> {
        for e in &edges {
            if let Some(&v) = e.iter().find(|&&v| v >= variable_count) {
                return Err(Error::VariableOutOfRange {
                    index: v + 1,
                    count: variable_count,
                });
            }
        }
        Ok(Instance {
            variable_count,
            edges,
        })
    }

    pub fn variable_count(&self) -> usize {
        self.variable_count
    }

    pub fn edges(&self) -> &[[usize; 3]] {
        &self.edges
    }

    /// The instance as a structure, or `None` when there are no edges or no
    /// variables (a relational structure needs a nonempty relation).
    pub fn to_structure(&self) -> Option<RelStructure> {
        if self.edges.is_empty() || self.variable_count == 0 {
            return None;
        }
        let tuples = self.edges.iter().map(|e| e.to_vec()).collect();
        Some(make_structure(self.variable_count, vec![tuples]).expect("indices validated"))
    }

    /// Builds an instance from a structure with a single ternary relation.
    pub fn from_structure(s: &RelStructure) -> Result<Self> {
        let rel = s.ternary_relation()?;
        Instance::new(s.domain_size(), rel.tuples().map(|t| [t[0], t[1], t[2]]).collect())
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut header: Option<(usize, usize)> = None;
        let mut edges = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let words: Vec<&str> = line.split_whitespace().collect();
            match words.as_slice() {
                ["p", "hyp3", nv, ne] => {
                    if header.is_some() {
                        return Err(parse_err(line_no, "duplicate header"));
                    }
                    let nv = nv.parse().map_err(|_| parse_err(line_no, "bad variable count"))?;
                    let ne = ne.parse().map_err(|_| parse_err(line_no, "bad edge count"))?;
                    header = Some((nv, ne));
                }
                ["e", a, b, c] => {
                    let (nv, _) = header.ok_or_else(|| parse_err(line_no, "edge before header"))?;
                    let mut e = [0usize; 3];
                    for (slot, w) in e.iter_mut().zip([a, b, c]) {
                        let v: usize = w.parse().map_err(|_| parse_err(line_no, format!("bad variable `{w}`")))?;
                        if v == 0 || v > nv {
                            return Err(parse_err(line_no, format!("variable {v} out of range 1..={nv}")));
                        }
                        *slot = v - 1;
                    }
                    edges.push(e);
                }
                _ => return Err(parse_err(line_no, format!("unrecognised line `{line}`"))),
            }
        }
        let (nv, ne) = header.ok_or_else(|| parse_err(0, "missing `p hyp3` header"))?;
        if ne != edges.len() {
            return Err(parse_err(0, format!("header declares {ne} edges, found {}", edges.len())));
        }
        Instance::new(nv, edges)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("p hyp3 {} {}\n", self.variable_count, self.edges.len());
        for e in &self.edges {
            out.push_str(&format!("e {} {} {}\n", e[0] + 1, e[1] + 1, e[2] + 1));
        }
        out
    }
}

/// Formats a coloring as `v <var> <color>` lines (1-based variables).
pub fn coloring_to_text(coloring: &[usize]) -> String {
    coloring
        .iter()
        .enumerate()
        .map(|(v, c)| format!("v {} {}\n", v + 1, c))
        .collect()
}

/// SplitMix64: `state += 0x9E3779B97F4A7C15`, then the output is
/// `z ^ (z >> 31)` after `z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9` and
/// `z = (z ^ (z >> 27)) * 0x94D049BB133111EB`, all wrapping.
#[derive(Clone, Debug)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform-ish index in `0..n` as `next_u64() % n`.
    pub fn below(&mut self, n: usize) -> usize {
        (self.next_u64() % n as u64) as usize
    }
}

/// Generates an instance around a hidden 1in3 witness.
///
/// The witness bit of variable `v` is the top bit of one generator output,
/// redrawn in full until at least one 1 and two 0s are present. Each edge then
/// draws one 1-variable, two distinct 0-variables, and the slot (0..3) of the
/// 1-variable, in that order; the 0-variables fill the other slots in draw order.
pub fn generate_planted(nv: usize, ne: usize, seed: u64) -> Result<(Instance, Vec<usize>)> {
    if nv < 3 {
        return Err(Error::TooFewVariables(nv));
    }
    let mut rng = SplitMix64::new(seed);
    let witness = loop {
        let w: Vec<usize> = (0..nv).map(|_| (rng.next_u64() >> 63) as usize).collect();
        let ones = w.iter().filter(|&&b| b == 1).count();
        if ones >= 1 && nv - ones >= 2 {
            break w;
        }
    };
    let ones: Vec<usize> = (0..nv).filter(|&v| witness[v] == 1).collect();
    let zeros: Vec<usize> = (0..nv).filter(|&v| witness[v] == 0).collect();
    let mut edges = Vec::with_capacity(ne);
    for _ in 0..ne {
        let one = ones[rng.below(ones.len())];
        let z1 = rng.below(zeros.len());
        let mut z2 = rng.below(zeros.len() - 1);
        if z2 >= z1 {
            z2 += 1;
        }
        let slot = rng.below(3);
        let mut rest = [zeros[z1], zeros[z2]].into_iter();
        let mut e = [0usize; 3];
        for (i, cell) in e.iter_mut().enumerate() {
            *cell = if i == slot { one } else { rest.next().unwrap() };
        }
        edges.push(e);
    }
    Ok((Instance::new(nv, edges)?, witness))
}

//! Homomorphism search between finite structures.
//!
//! Backtracking over source elements in degree-descending order. After each
//! assignment every source tuple touching the assigned element is filtered
//! against the target relation and unsupported values are pruned from the
//! candidate sets of its other elements (forward checking).

use serde::Serialize;

use crate::catalog::named_template;
use crate::error::{Error, Result};
use crate::instance::Instance;
use crate::structure::RelStructure;

/// A total map from the source domain to the target domain.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HomMap {
    pub source_size: usize,
    pub target_size: usize,
    pub assignment: Vec<usize>,
}

impl HomMap {
    pub fn identity(n: usize) -> Self {
        HomMap {
            source_size: n,
            target_size: n,
            assignment: (0..n).collect(),
        }
    }

    pub fn apply(&self, v: usize) -> usize {
        self.assignment[v]
    }

    /// Checks relation preservation on every tuple.
    pub fn is_homomorphism(&self, x: &RelStructure, b: &RelStructure) -> bool {
        self.assignment.len() == x.domain_size()
            && self.assignment.iter().all(|&v| v < b.domain_size())
            && x.same_signature(b)
            && x.relations().iter().zip(b.relations()).all(|(rx, rb)| {
                rx.tuples().all(|t| {
                    let image: Vec<usize> = t.iter().map(|&v| self.assignment[v]).collect();
                    rb.contains(&image)
                })
            })
    }
}

struct Search<'a> {
    order: Vec<usize>,
    // (relation index, source tuple) pairs touching each source element
    touching: Vec<Vec<(usize, &'a [usize])>>,
    target: Vec<Vec<&'a [usize]>>,
    assigned: Vec<bool>,
}

impl<'a> Search<'a> {
    /// Filters one source tuple against the target relation and prunes the
    /// candidate sets of unassigned positions. Returns false on a wipe-out.
    fn revise(&self, rel: usize, tuple: &[usize], dom: &mut [u64]) -> bool {
        let mut support = [0u64; 8];
        let mut support_vec;
        let support: &mut [u64] = if tuple.len() <= 8 {
            &mut support[..tuple.len()]
        } else {
            support_vec = vec![0u64; tuple.len()];
            &mut support_vec
        };
        let mut any = false;
        'outer: for t in &self.target[rel] {
            for (p, (&s, &v)) in tuple.iter().zip(t.iter()).enumerate() {
                if dom[s] >> v & 1 == 0 {
                    continue 'outer;
                }
                // repeated source elements must receive equal values
                if tuple[..p].iter().zip(t.iter()).any(|(&s2, &v2)| s2 == s && v2 != v) {
                    continue 'outer;
                }
            }
            any = true;
            for (p, &v) in t.iter().enumerate() {
                support[p] |= 1 << v;
            }
        }
        if !any {
            return false;
        }
        for (p, &s) in tuple.iter().enumerate() {
            if !self.assigned[s] {
                dom[s] &= support[p];
                if dom[s] == 0 {
                    return false;
                }
            }
        }
        true
    }

    fn run(&mut self, depth: usize, dom: &mut Vec<u64>) -> bool {
        let Some(&v) = self.order.get(depth) else {
            return true;
        };
        let mut candidates = dom[v];
        while candidates != 0 {
            let c = candidates.trailing_zeros() as usize;
            candidates &= candidates - 1;
            let saved = dom.clone();
            dom[v] = 1 << c;
            self.assigned[v] = true;
            let ok = self.touching[v]
                .iter()
                .all(|&(rel, tuple)| self.revise(rel, tuple, dom));
            if ok && self.run(depth + 1, dom) {
                return true;
            }
            self.assigned[v] = false;
            *dom = saved;
        }
        false
    }
}

/// Finds a homomorphism `x -> b`, if one exists. Deterministic.
pub fn find_homomorphism(x: &RelStructure, b: &RelStructure) -> Result<Option<HomMap>> {
    if !x.same_signature(b) {
        return Err(Error::SignatureMismatch);
    }
    let k = b.domain_size();
    if k > 64 {
        return Err(Error::TargetTooLarge(k));
    }
    let n = x.domain_size();
    let mut touching: Vec<Vec<(usize, &[usize])>> = vec![Vec::new(); n];
    for (ri, rel) in x.relations().iter().enumerate() {
        for t in rel.tuples() {
            let mut seen: Vec<usize> = t.to_vec();
            seen.sort_unstable();
            seen.dedup();
            for s in seen {
                touching[s].push((ri, t));
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| std::cmp::Reverse(touching[v].len()));
    let target = b.relations().iter().map(|r| r.tuples().collect()).collect();
    let mut search = Search {
        order,
        touching,
        target,
        assigned: vec![false; n],
    };
    let full = if k == 64 { u64::MAX } else { (1u64 << k) - 1 };
    let mut dom = vec![full; n];
    // initial filtering of every tuple
    for (ri, rel) in x.relations().iter().enumerate() {
        for t in rel.tuples() {
            if !search.revise(ri, t, &mut dom) {
                return Ok(None);
            }
        }
    }
    if !search.run(0, &mut dom) {
        return Ok(None);
    }
    let map = HomMap {
        source_size: n,
        target_size: k,
        assignment: dom.iter().map(|d| d.trailing_zeros() as usize).collect(),
    };
    debug_assert!(map.is_homomorphism(x, b));
    Ok(Some(map))
}

pub fn hom_exists(x: &RelStructure, b: &RelStructure) -> Result<bool> {
    Ok(find_homomorphism(x, b)?.is_some())
}

/// Position of `a` relative to `b` in the homomorphism order (`a <= b` iff `a -> b`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum HomOrder {
    StrictlyBelow,
    StrictlyAbove,
    Equivalent,
    Incomparable,
}

impl std::fmt::Display for HomOrder {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            HomOrder::StrictlyBelow => "strictly_below",
            HomOrder::StrictlyAbove => "strictly_above",
            HomOrder::Equivalent => "equivalent",
            HomOrder::Incomparable => "incomparable",
        })
    }
}

pub fn hom_order_compare(a: &RelStructure, b: &RelStructure) -> Result<HomOrder> {
    let up = hom_exists(a, b)?;
    let down = hom_exists(b, a)?;
    Ok(match (up, down) {
        (true, true) => HomOrder::Equivalent,
        (true, false) => HomOrder::StrictlyBelow,
        (false, true) => HomOrder::StrictlyAbove,
        (false, false) => HomOrder::Incomparable,
    })
}

/// A promise template `(source, target)` with `source -> target`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TemplatePair {
    source: RelStructure,
    target: RelStructure,
}

impl TemplatePair {
    pub fn new(source: RelStructure, target: RelStructure) -> Result<Self> {
        if !source.same_signature(&target) {
            return Err(Error::SignatureMismatch);
        }
        if !hom_exists(&source, &target)? {
            return Err(Error::NotATemplate);
        }
        Ok(TemplatePair { source, target })
    }

    /// `(1in3, target)`.
    pub fn one_in_three(target: RelStructure) -> Result<Self> {
        TemplatePair::new(named_template("1in3")?, target)
    }

    pub fn source(&self) -> &RelStructure {
        &self.source
    }

    pub fn target(&self) -> &RelStructure {
        &self.target
    }

    pub fn source_is_one_in_three(&self) -> bool {
        named_template("1in3").map(|s| s == self.source).unwrap_or(false)
    }

    pub(crate) fn require_one_in_three(&self) -> Result<()> {
        if self.source_is_one_in_three() {
            Ok(())
        } else {
            Err(Error::SourceNotOneInThree)
        }
    }
}

/// True iff every hyperedge's ordered colour triple lies in the relation of `b`.
pub fn check_coloring(instance: &Instance, coloring: &[usize], b: &RelStructure) -> Result<bool> {
    let table = b.ternary_table()?;
    if coloring.len() < instance.variable_count() {
        return Err(Error::PartialColoring(coloring.len() + 1));
    }
    if let Some(&value) = coloring.iter().find(|&&c| c >= b.domain_size()) {
        return Err(Error::ValueOutOfRange {
            value,
            target_size: b.domain_size(),
        });
    }
    Ok(instance
        .edges()
        .iter()
        .all(|e| table.contains(coloring[e[0]], coloring[e[1]], coloring[e[2]])))
}

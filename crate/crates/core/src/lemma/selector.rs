use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::hom::TemplatePair;
use crate::poly::{enumerate_polymorphisms, i_sets, minor, CoordSet, MinorMap, PolyTable};

/// Assignment of a small coordinate set to each polymorphism.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Selector {
    D1,
    D2,
    T1,
    Ch,
}

/// A selected set and the rule (type) that produced it.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Selection {
    pub set: CoordSet,
    pub kind: u8,
}

impl Selector {
    pub fn all() -> [Selector; 4] {
        [Selector::D1, Selector::D2, Selector::T1, Selector::Ch]
    }

    pub fn name(&self) -> &'static str {
        match self {
            Selector::D1 => "SEL_D1",
            Selector::D2 => "SEL_D2",
            Selector::T1 => "SEL_T1",
            Selector::Ch => "SEL_CH",
        }
    }

    pub fn template(&self) -> &'static str {
        match self {
            Selector::D1 => "D1plus",
            Selector::D2 => "D2plus",
            Selector::T1 => "T1",
            Selector::Ch => "CH",
        }
    }

    /// Upper bound on the size of a selected set.
    pub fn max_size(&self) -> usize {
        match self {
            Selector::D1 => 3,
            Selector::T1 => 5,
            Selector::D2 | Selector::Ch => 2,
        }
    }

    /// Number of minor steps `l`; a chain has `l + 1` functions.
    pub fn chain_length(&self) -> usize {
        match self {
            Selector::D1 | Selector::T1 => 2,
            Selector::D2 | Selector::Ch => 5,
        }
    }

    /// The selected set, or `None` where the selector is undefined.
    /// Candidates are scanned in (size, lexicographic) order.
    pub fn select(&self, f: &PolyTable) -> Option<Selection> {
        let n = f.arity();
        let first = |value: usize, max: usize| i_sets(f, value, max).into_iter().next();
        let pick = |set: Option<CoordSet>, kind: u8| set.map(|set| Selection { set, kind });
        let e = f.at(0);
        match self {
            Selector::D1 => pick(first(2, 3), 1).or_else(|| pick(first(1, 3), 2)),
            Selector::D2 => pick(first(2, 2), 1).or_else(|| match e {
                0 => pick(first(1, 1), 2),
                1 => pick(first(0, 2), 3),
                _ => None,
            }),
            Selector::T1 => pick(first(2, 2), 1).or_else(|| {
                let ef = (0..n).filter(|&i| f.at(1 << i) != 0).fold(0u64, |m, i| m | 1 << i);
                pick(Some(CoordSet::from_bits(n, ef)), 2)
            }),
            Selector::Ch => {
                let k = f.target_size();
                pick(first((e + 3) % k, 2), 1).or_else(|| pick(first((e + 1) % k, 1), 2))
            }
        }
    }
}

impl fmt::Display for Selector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Selector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Selector::all()
            .into_iter()
            .find(|sel| sel.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::UnknownId(s.to_string()))
    }
}

/// A chain `f_0, α_{0,1}, .., f_l` on which no selected sets meet.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChainWitness {
    pub functions: Vec<Vec<u8>>,
    /// `α_{i,i+1}` as 1-based images of `1..=n_i`.
    pub maps: Vec<Vec<usize>>,
    pub selections: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SelectorReport {
    pub selector: String,
    pub template: String,
    pub max_size: usize,
    pub chain_length: usize,
    pub max_arity: usize,
    /// Polymorphisms per arity `1..=max_arity`.
    pub counts: Vec<usize>,
    /// Value vectors where the selector is undefined.
    pub undefined: Vec<Vec<u8>>,
    /// Value vectors where the selected set is too large.
    pub oversized: Vec<Vec<u8>>,
    /// Minor steps `(f, α)` checked against the preimage identity.
    pub transitions: usize,
    /// Chains covered, counted exactly.
    pub chains: u64,
    pub violation: Option<ChainWitness>,
    pub elapsed_ms: u128,
}

impl SelectorReport {
    pub fn holds(&self) -> bool {
        self.undefined.is_empty() && self.oversized.is_empty() && self.violation.is_none()
    }
}

struct Chains<'a> {
    funcs: &'a [PolyTable],
    sels: Vec<u64>,
    steps: Vec<Vec<(MinorMap, usize)>>,
    bad: HashMap<(usize, u64, usize), bool>,
    count: HashMap<(usize, usize), u64>,
}

impl Chains<'_> {
    /// Whether a violating continuation exists from `f` when `u` is the
    /// union of the earlier selections pushed forward to the arity of `f`.
    /// A chain satisfies the condition at `j` iff `sel(f_j)` meets some
    /// `α_{i,j}(sel(f_i))`, which is the same as meeting their union.
    fn bad(&mut self, f: usize, u: u64, rem: usize) -> bool {
        if self.sels[f] & u != 0 {
            return false;
        }
        if rem == 0 {
            return true;
        }
        if let Some(&b) = self.bad.get(&(f, u, rem)) {
            return b;
        }
        let carried = CoordSet::from_bits(self.funcs[f].arity(), u | self.sels[f]);
        let mut result = false;
        for s in 0..self.steps[f].len() {
            let (alpha, g) = (&self.steps[f][s].0, self.steps[f][s].1);
            let pushed = alpha.image(&carried).expect("arity matches").bits();
            if self.bad(g, pushed, rem - 1) {
                result = true;
                break;
            }
        }
        self.bad.insert((f, u, rem), result);
        result
    }

    fn count(&mut self, f: usize, rem: usize) -> u64 {
        if rem == 0 {
            return 1;
        }
        if let Some(&c) = self.count.get(&(f, rem)) {
            return c;
        }
        let next: Vec<usize> = self.steps[f].iter().map(|s| s.1).collect();
        let c = next.into_iter().fold(0u64, |acc, g| acc.saturating_add(self.count(g, rem - 1)));
        self.count.insert((f, rem), c);
        c
    }

    fn witness(&mut self, f0: usize, l: usize) -> ChainWitness {
        let (mut f, mut u) = (f0, 0u64);
        let mut path = vec![f0];
        let mut maps = Vec::new();
        for rem in (1..=l).rev() {
            let carried = CoordSet::from_bits(self.funcs[f].arity(), u | self.sels[f]);
            let (alpha, g, pushed) = self.steps[f]
                .clone()
                .into_iter()
                .map(|(a, g)| {
                    let p = a.image(&carried).expect("arity matches").bits();
                    (a, g, p)
                })
                .find(|&(_, g, p)| self.bad(g, p, rem - 1))
                .expect("a violating continuation exists");
            maps.push((1..=alpha.source_arity()).map(|i| alpha.apply(i)).collect());
            path.push(g);
            f = g;
            u = pushed;
        }
        ChainWitness {
            functions: path.iter().map(|&i| self.funcs[i].values().to_vec()).collect(),
            maps,
            selections: path
                .iter()
                .map(|&i| CoordSet::from_bits(self.funcs[i].arity(), self.sels[i]).to_string())
                .collect(),
        }
    }
}

/// Checks totality, the size bound, and the chain condition over all chains
/// whose functions have arity at most `max_arity`: some `i < j` with
/// `sel(f_i) ∩ α_{i,j}⁻¹(sel(f_j)) ≠ ∅`.
///
/// Polymorphisms are closed under minors, so every chain lives on the
/// enumerated tables; the search is memoised on (function, pushed-forward
/// selections, remaining steps). Each step `f -> f^α` is checked to satisfy
/// `f(α⁻¹(X)) = f^α(X)`, so preimages of i-sets are i-sets along the chain.
pub fn verify_selector(pair: &TemplatePair, selector: Selector, max_arity: usize) -> Result<SelectorReport> {
    if max_arity == 0 {
        return Err(Error::ZeroArityFunction);
    }
    let start = Instant::now();
    let mut funcs = Vec::new();
    let mut counts = Vec::new();
    for n in 1..=max_arity {
        let before = funcs.len();
        funcs.extend(enumerate_polymorphisms(pair, n, max_arity)?);
        counts.push(funcs.len() - before);
    }
    let index: HashMap<&PolyTable, usize> = funcs.iter().enumerate().map(|(i, f)| (f, i)).collect();

    let mut undefined = Vec::new();
    let mut oversized = Vec::new();
    let mut sels = Vec::with_capacity(funcs.len());
    for f in &funcs {
        match selector.select(f) {
            None => {
                undefined.push(f.values().to_vec());
                sels.push(0);
            }
            Some(s) => {
                if s.set.len() > selector.max_size() {
                    oversized.push(f.values().to_vec());
                }
                sels.push(s.set.bits());
            }
        }
    }

    let mut transitions = 0;
    let mut steps = Vec::with_capacity(funcs.len());
    for f in &funcs {
        let mut out = Vec::new();
        for m in 1..=max_arity {
            for alpha in MinorMap::all(f.arity(), m) {
                let g = minor(f, &alpha)?;
                for x in 0..1u64 << m {
                    assert_eq!(f.at(alpha.preimage_bits(x)), g.at(x), "preimage identity fails");
                }
                let gi = *index.get(&g).expect("minors of polymorphisms are polymorphisms");
                out.push((alpha, gi));
                transitions += 1;
            }
        }
        steps.push(out);
    }

    let l = selector.chain_length();
    let mut chains = Chains {
        funcs: &funcs,
        sels,
        steps,
        bad: HashMap::new(),
        count: HashMap::new(),
    };
    let total = (0..funcs.len()).fold(0u64, |acc, f| acc.saturating_add(chains.count(f, l)));
    let violation = (0..funcs.len())
        .find(|&f| chains.bad(f, 0, l))
        .map(|f| chains.witness(f, l));

    Ok(SelectorReport {
        selector: selector.name().to_string(),
        template: selector.template().to_string(),
        max_size: selector.max_size(),
        chain_length: l,
        max_arity,
        counts,
        undefined,
        oversized,
        transitions,
        chains: total,
        violation,
        elapsed_ms: start.elapsed().as_millis(),
    })
}

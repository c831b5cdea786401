//! Symmetric (weight-indexed) and two-block block-symmetric polymorphisms of
//! `(1in3, B)`: verification, propagation with traces, and exhaustive search.
//!
//! A symmetric `f` of arity `n` is a table `f(0..=n)`; `f` is a polymorphism
//! iff `(f(a), f(b), f(c)) ∈ R` whenever `a + b + c = n`. A block-symmetric
//! `g` with blocks of sizes `k1, k2` is a table over weight pairs, constrained
//! by every pair of ordered compositions of `k1` and `k2` into three parts.

mod network;
mod trace;

use std::collections::BTreeSet;
use std::fmt;
use std::time::{Duration, Instant};

use serde::Serialize;

pub use trace::{Event, Justification, PropagationTrace, TableShape};

use crate::error::{parse_err, Error, Result};
use crate::hom::TemplatePair;
use crate::poly::{PolyTable, MAX_TABLE_ARITY};
use crate::structure::automorphisms;
use network::{Network, NoRecord, Order, Outcome, Rule, SearchConfig, Tracer};

/// Largest target accepted by the searches (colour sets are 32-bit masks).
pub const MAX_SEARCH_COLORS: usize = 32;

/// A possibly partial symmetric table `f(0..=n)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct SymTable {
    arity: usize,
    target_size: usize,
    values: Vec<Option<u8>>,
}

impl SymTable {
    /// All weights unassigned.
    pub fn new(arity: usize, target_size: usize) -> Self {
        SymTable {
            arity,
            target_size,
            values: vec![None; arity + 1],
        }
    }

    pub fn from_values(target_size: usize, values: &[usize]) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::ZeroArityFunction);
        }
        let mut t = SymTable::new(values.len() - 1, target_size);
        for (w, &v) in values.iter().enumerate() {
            t.set(w, v)?;
        }
        Ok(t)
    }

    pub fn from_fn(arity: usize, target_size: usize, f: impl Fn(usize) -> usize) -> Result<Self> {
        let values: Vec<usize> = (0..=arity).map(f).collect();
        SymTable::from_values(target_size, &values)
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn target_size(&self) -> usize {
        self.target_size
    }

    pub fn get(&self, weight: usize) -> Option<usize> {
        self.values[weight].map(usize::from)
    }

    pub fn set(&mut self, weight: usize, value: usize) -> Result<()> {
        if value >= self.target_size {
            return Err(Error::ValueOutOfRange {
                value,
                target_size: self.target_size,
            });
        }
        if weight > self.arity {
            return Err(Error::ArityMismatch {
                expected: self.arity,
                found: weight,
            });
        }
        self.values[weight] = Some(value as u8);
        Ok(())
    }

    pub fn is_complete(&self) -> bool {
        self.values.iter().all(Option::is_some)
    }

    /// Values by weight; errors with the first unassigned weight.
    pub fn complete_values(&self) -> Result<Vec<usize>> {
        self.values
            .iter()
            .enumerate()
            .map(|(w, v)| v.map(usize::from).ok_or(Error::PartialTable(w)))
            .collect()
    }

    /// The full `2^n` table `f(X) = f(|X|)`.
    pub fn to_poly_table(&self) -> Result<PolyTable> {
        let values = self.complete_values()?;
        if self.arity > MAX_TABLE_ARITY {
            return Err(Error::BoundExceeded {
                requested: self.arity,
                bound: MAX_TABLE_ARITY,
            });
        }
        PolyTable::from_fn(self.arity, self.target_size, |x| values[x.len()])
    }

    /// Inverse of [`SymTable::to_poly_table`]; fails unless `f` depends only on weight.
    pub fn from_poly_table(f: &PolyTable) -> Result<Self> {
        let n = f.arity();
        let mut t = SymTable::new(n, f.target_size());
        for mask in 0..1u64 << n {
            let w = mask.count_ones() as usize;
            match t.get(w) {
                None => t.set(w, f.at(mask))?,
                Some(v) if v != f.at(mask) => return Err(Error::NotSymmetric),
                Some(_) => {}
            }
        }
        Ok(t)
    }

    /// `sym <n> <k>` then one `<w> <value>` line per weight, `?` if unassigned.
    pub fn to_text(&self) -> String {
        let mut out = format!("sym {} {}\n", self.arity, self.target_size);
        for (w, v) in self.values.iter().enumerate() {
            match v {
                Some(v) => out.push_str(&format!("{w} {v}\n")),
                None => out.push_str(&format!("{w} ?\n")),
            }
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = content_lines(text);
        let (ln, header) = lines.next().ok_or_else(|| parse_err(0, "empty input"))?;
        let h: Vec<&str> = header.split_whitespace().collect();
        let [tag, n, k] = h[..] else {
            return Err(parse_err(ln, "expected `sym <n> <k>`"));
        };
        if tag != "sym" {
            return Err(parse_err(ln, "expected `sym <n> <k>`"));
        }
        let mut t = SymTable::new(parse_num(n, ln)?, parse_num(k, ln)?);
        for (ln, line) in lines {
            let f: Vec<&str> = line.split_whitespace().collect();
            let [w, v] = f[..] else {
                return Err(parse_err(ln, "expected `<weight> <value>`"));
            };
            if v != "?" {
                t.set(parse_num(w, ln)?, parse_num(v, ln)?)
                    .map_err(|e| parse_err(ln, e.to_string()))?;
            }
        }
        Ok(t)
    }
}

impl fmt::Display for SymTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cells: Vec<String> = self
            .values
            .iter()
            .map(|v| v.map_or("?".to_string(), |v| v.to_string()))
            .collect();
        write!(f, "[{}]", cells.join(" "))
    }
}

/// A possibly partial table `g(w1, w2)`, `0 ≤ w1 ≤ k1`, `0 ≤ w2 ≤ k2`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct BlockSymTable {
    k1: usize,
    k2: usize,
    target_size: usize,
    values: Vec<Option<u8>>,
}

impl BlockSymTable {
    pub fn new(k1: usize, k2: usize, target_size: usize) -> Self {
        BlockSymTable {
            k1,
            k2,
            target_size,
            values: vec![None; (k1 + 1) * (k2 + 1)],
        }
    }

    pub fn from_fn(k1: usize, k2: usize, target_size: usize, g: impl Fn(usize, usize) -> usize) -> Result<Self> {
        let mut t = BlockSymTable::new(k1, k2, target_size);
        for w1 in 0..=k1 {
            for w2 in 0..=k2 {
                t.set(w1, w2, g(w1, w2))?;
            }
        }
        Ok(t)
    }

    pub fn blocks(&self) -> (usize, usize) {
        (self.k1, self.k2)
    }

    pub fn target_size(&self) -> usize {
        self.target_size
    }

    fn cell(&self, w1: usize, w2: usize) -> usize {
        w1 * (self.k2 + 1) + w2
    }

    pub fn get(&self, w1: usize, w2: usize) -> Option<usize> {
        self.values[self.cell(w1, w2)].map(usize::from)
    }

    pub fn set(&mut self, w1: usize, w2: usize, value: usize) -> Result<()> {
        if value >= self.target_size {
            return Err(Error::ValueOutOfRange {
                value,
                target_size: self.target_size,
            });
        }
        if w1 > self.k1 || w2 > self.k2 {
            return Err(Error::InvalidParameters(format!(
                "weight pair ({w1},{w2}) outside blocks ({},{})",
                self.k1, self.k2
            )));
        }
        let c = self.cell(w1, w2);
        self.values[c] = Some(value as u8);
        Ok(())
    }

    pub fn is_complete(&self) -> bool {
        self.values.iter().all(Option::is_some)
    }

    fn require_complete(&self) -> Result<()> {
        match self.values.iter().position(Option::is_none) {
            Some(c) => Err(Error::PartialTable(c)),
            None => Ok(()),
        }
    }

    /// Full table of arity `k1 + k2`; coordinates `1..=k1` form the first block.
    pub fn to_poly_table(&self) -> Result<PolyTable> {
        self.require_complete()?;
        let n = self.k1 + self.k2;
        if n > MAX_TABLE_ARITY {
            return Err(Error::BoundExceeded {
                requested: n,
                bound: MAX_TABLE_ARITY,
            });
        }
        let low = (1u64 << self.k1) - 1;
        PolyTable::from_fn(n, self.target_size, |x| {
            let w1 = (x.bits() & low).count_ones() as usize;
            let w2 = (x.bits() & !low).count_ones() as usize;
            self.get(w1, w2).expect("complete")
        })
    }

    /// `block <k1> <k2> <k>` then `<w1> <w2> <value>` lines.
    pub fn to_text(&self) -> String {
        let mut out = format!("block {} {} {}\n", self.k1, self.k2, self.target_size);
        for w1 in 0..=self.k1 {
            for w2 in 0..=self.k2 {
                match self.get(w1, w2) {
                    Some(v) => out.push_str(&format!("{w1} {w2} {v}\n")),
                    None => out.push_str(&format!("{w1} {w2} ?\n")),
                }
            }
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = content_lines(text);
        let (ln, header) = lines.next().ok_or_else(|| parse_err(0, "empty input"))?;
        let h: Vec<&str> = header.split_whitespace().collect();
        let [tag, k1, k2, k] = h[..] else {
            return Err(parse_err(ln, "expected `block <k1> <k2> <k>`"));
        };
        if tag != "block" {
            return Err(parse_err(ln, "expected `block <k1> <k2> <k>`"));
        }
        let mut t = BlockSymTable::new(parse_num(k1, ln)?, parse_num(k2, ln)?, parse_num(k, ln)?);
        for (ln, line) in lines {
            let f: Vec<&str> = line.split_whitespace().collect();
            let [w1, w2, v] = f[..] else {
                return Err(parse_err(ln, "expected `<w1> <w2> <value>`"));
            };
            if v != "?" {
                t.set(parse_num(w1, ln)?, parse_num(w2, ln)?, parse_num(v, ln)?)
                    .map_err(|e| parse_err(ln, e.to_string()))?;
            }
        }
        Ok(t)
    }
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty())
}

fn parse_num(s: &str, line: usize) -> Result<usize> {
    s.parse().map_err(|_| parse_err(line, format!("not a number: {s}")))
}

/// Multisets `{a, b, c}` with `a + b + c = n`, as `a ≤ b ≤ c`, lexicographically.
pub fn sym_compatible_triples(n: usize) -> Vec<(usize, usize, usize)> {
    let mut out = Vec::new();
    for a in 0..=n / 3 {
        for b in a..=(n - a) / 2 {
            out.push((a, b, n - a - b));
        }
    }
    out
}

/// Ordered compositions of `n` into three non-negative parts.
fn compositions(n: usize) -> Vec<[usize; 3]> {
    let mut out = Vec::new();
    for a in 0..=n {
        for b in 0..=n - a {
            out.push([a, b, n - a - b]);
        }
    }
    out
}

fn check_target(pair: &TemplatePair, target_size: usize) -> Result<()> {
    pair.require_one_in_three()?;
    let k = pair.target().domain_size();
    if target_size != k {
        return Err(Error::WrongDomainSize {
            expected: k,
            found: target_size,
        });
    }
    Ok(())
}

/// Checks every ordered triple of weights summing to the arity.
pub fn is_symmetric_polymorphism(f: &SymTable, pair: &TemplatePair) -> Result<bool> {
    check_target(pair, f.target_size)?;
    let v = f.complete_values()?;
    let r = pair.target().ternary_table()?;
    Ok(compositions(f.arity)
        .iter()
        .all(|&[a, b, c]| r.contains(v[a], v[b], v[c])))
}

/// Checks every pair of ordered compositions of the two block sizes.
pub fn is_block_symmetric_polymorphism(g: &BlockSymTable, pair: &TemplatePair) -> Result<bool> {
    check_target(pair, g.target_size)?;
    g.require_complete()?;
    let r = pair.target().ternary_table()?;
    let (p1, p2) = (compositions(g.k1), compositions(g.k2));
    Ok(p1.iter().all(|x| {
        p2.iter().all(|y| {
            let v = |i: usize| g.get(x[i], y[i]).expect("complete");
            r.contains(v(0), v(1), v(2))
        })
    }))
}

/// Cell triples for the symmetric network: canonical triples, or all their
/// distinct orderings when the target relation is not symmetric.
fn symmetric_constraints(n: usize, symmetric: bool) -> Vec<[usize; 3]> {
    let mut out = Vec::new();
    for (a, b, c) in sym_compatible_triples(n) {
        if symmetric {
            out.push([a, b, c]);
        } else {
            let perms: BTreeSet<[usize; 3]> = [[a, b, c], [a, c, b], [b, a, c], [b, c, a], [c, a, b], [c, b, a]]
                .into_iter()
                .collect();
            out.extend(perms);
        }
    }
    out
}

fn block_constraints(k1: usize, k2: usize, symmetric: bool) -> Vec<[usize; 3]> {
    let cell = |w1: usize, w2: usize| w1 * (k2 + 1) + w2;
    let mut set = BTreeSet::new();
    for x in compositions(k1) {
        for y in compositions(k2) {
            let mut t = [cell(x[0], y[0]), cell(x[1], y[1]), cell(x[2], y[2])];
            if symmetric {
                t.sort_unstable();
            }
            set.insert(t);
        }
    }
    set.into_iter().collect()
}

fn build_network(pair: &TemplatePair, cells: usize, constraints: impl FnOnce(bool) -> Vec<[usize; 3]>) -> Result<Network> {
    pair.require_one_in_three()?;
    let k = pair.target().domain_size();
    if k > MAX_SEARCH_COLORS {
        return Err(Error::TargetTooLarge(k));
    }
    let r = pair.target().ternary_table()?;
    let symmetric = r.is_symmetric();
    Ok(Network::new(cells, r, constraints(symmetric)))
}

/// Strength of [`propagate`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PropagationLevel {
    /// A triple prunes only once two of its weights are decided.
    #[default]
    Forward,
    /// Forward rule plus probing: each remaining colour of each undecided
    /// weight is tried and dropped if the forward rule refutes it.
    Probing,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Propagation {
    /// Decided weights (singleton candidate sets).
    pub table: SymTable,
    /// Remaining colours per weight.
    pub candidates: Vec<Vec<usize>>,
    /// Weight whose candidate set became empty, if any.
    pub contradiction: Option<usize>,
    pub trace: PropagationTrace,
}

/// Propagates the assigned weights of `partial` to a fixpoint or contradiction.
/// Triples are scanned in canonical order in rounds; every forcing and the
/// final contradiction are recorded with their justifying triple.
pub fn propagate(pair: &TemplatePair, partial: &SymTable, level: PropagationLevel) -> Result<Propagation> {
    check_target(pair, partial.target_size)?;
    let n = partial.arity;
    let net = build_network(pair, n + 1, |s| symmetric_constraints(n, s))?;
    let mut st = net.initial_state();
    let mut rec = Tracer::default();
    for w in 0..=n {
        if let Some(c) = partial.get(w) {
            rec.events.push(Event::Seed { cell: w, color: c });
            net.decide(&mut st, w, c, &mut rec);
        }
    }
    let result = net.propagate(&mut st, None, Rule::Assigned, level == PropagationLevel::Probing, &mut rec);
    let mut table = SymTable::new(n, partial.target_size);
    for (w, &m) in st.cand.iter().enumerate() {
        if m.count_ones() == 1 {
            table.values[w] = Some(m.trailing_zeros() as u8);
        }
    }
    Ok(Propagation {
        table,
        candidates: st.cand.iter().map(|&m| network::bits(m).collect()).collect(),
        contradiction: result.err(),
        trace: PropagationTrace {
            shape: TableShape::Symmetric { arity: n },
            events: rec.events,
        },
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum VariableOrder {
    /// Lowest undecided cell first.
    Lowest,
    /// Fewest remaining colours first, ties to the lowest cell.
    MinDomain,
}

#[derive(Clone, Debug)]
pub struct SearchOptions {
    /// Restrict the first decision to one colour per automorphism orbit.
    pub wlog: bool,
    /// Probe after every decision (see [`PropagationLevel::Probing`]).
    pub probing: bool,
    pub order: VariableOrder,
    pub time_budget: Option<Duration>,
    /// Record decisions, forcings and contradictions of the whole search.
    pub record_trace: bool,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            wlog: true,
            probing: true,
            order: VariableOrder::Lowest,
            time_budget: None,
            record_trace: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SearchOutcome<T> {
    Found(T),
    NotFound,
    /// The time budget ran out first.
    Aborted,
}

#[derive(Clone, Debug, Serialize)]
pub struct SearchReport<T> {
    pub outcome: SearchOutcome<T>,
    /// Search nodes visited.
    pub nodes: u64,
    pub elapsed: Duration,
    pub trace: Option<PropagationTrace>,
}

impl<T> SearchReport<T> {
    pub fn found(&self) -> Option<&T> {
        match &self.outcome {
            SearchOutcome::Found(t) => Some(t),
            _ => None,
        }
    }
}

fn color_orbits(pair: &TemplatePair) -> Vec<u32> {
    let k = pair.target().domain_size();
    let autos = automorphisms(pair.target());
    let mut orbits: Vec<u32> = Vec::new();
    for c in 0..k {
        if orbits.iter().any(|o| o >> c & 1 == 1) {
            continue;
        }
        orbits.push(autos.iter().fold(0u32, |m, p| m | 1 << p[c]));
    }
    orbits
}

fn run_search(
    pair: &TemplatePair,
    net: &Network,
    shape: TableShape,
    opts: &SearchOptions,
    rule: Rule,
) -> (Outcome, u64, Duration, Option<PropagationTrace>) {
    let start = Instant::now();
    let cfg = SearchConfig {
        rule,
        probing: opts.probing,
        order: match opts.order {
            VariableOrder::Lowest => Order::Lowest,
            VariableOrder::MinDomain => Order::MinDomain,
        },
        orbits: opts.wlog.then(|| color_orbits(pair)),
        deadline: opts.time_budget.map(|b| start + b),
    };
    let mut nodes = 0;
    let mut st = net.initial_state();
    if opts.record_trace {
        let mut rec = Tracer::default();
        let outcome = match net.propagate(&mut st, None, rule, opts.probing, &mut rec) {
            Ok(()) => net.search(st, &cfg, true, &mut rec, &mut nodes),
            Err(_) => Outcome::Exhausted,
        };
        let trace = PropagationTrace {
            shape,
            events: rec.events,
        };
        (outcome, nodes, start.elapsed(), Some(trace))
    } else {
        let mut rec = NoRecord;
        let outcome = match net.propagate(&mut st, None, rule, opts.probing, &mut rec) {
            Ok(()) => net.search(st, &cfg, true, &mut rec, &mut nodes),
            Err(_) => Outcome::Exhausted,
        };
        (outcome, nodes, start.elapsed(), None)
    }
}

/// Backtracking search for a symmetric polymorphism of arity `n`, with
/// arc-consistency propagation after every decision.
pub fn search_symmetric(pair: &TemplatePair, n: usize, opts: &SearchOptions) -> Result<SearchReport<SymTable>> {
    if n == 0 {
        return Err(Error::ZeroArityFunction);
    }
    let net = build_network(pair, n + 1, |s| symmetric_constraints(n, s))?;
    let k = net.colors();
    let (outcome, nodes, elapsed, trace) =
        run_search(pair, &net, TableShape::Symmetric { arity: n }, opts, Rule::Support);
    let outcome = match outcome {
        Outcome::Found(values) => {
            let values: Vec<usize> = values.into_iter().map(usize::from).collect();
            let t = SymTable::from_values(k, &values)?;
            debug_assert!(is_symmetric_polymorphism(&t, pair)?);
            SearchOutcome::Found(t)
        }
        Outcome::Exhausted => SearchOutcome::NotFound,
        Outcome::Aborted => SearchOutcome::Aborted,
    };
    Ok(SearchReport {
        outcome,
        nodes,
        elapsed,
        trace,
    })
}

/// Backtracking search for a block-symmetric polymorphism with blocks `(k1, k2)`.
pub fn search_block_symmetric(
    pair: &TemplatePair,
    k1: usize,
    k2: usize,
    opts: &SearchOptions,
) -> Result<SearchReport<BlockSymTable>> {
    if k1 == 0 || k2 == 0 {
        return Err(Error::ZeroArityFunction);
    }
    let net = build_network(pair, (k1 + 1) * (k2 + 1), |s| block_constraints(k1, k2, s))?;
    let k = net.colors();
    let (outcome, nodes, elapsed, trace) = run_search(pair, &net, TableShape::Block { k1, k2 }, opts, Rule::Support);
    let outcome = match outcome {
        Outcome::Found(values) => {
            let g = BlockSymTable::from_fn(k1, k2, k, |w1, w2| values[w1 * (k2 + 1) + w2] as usize)?;
            debug_assert!(is_block_symmetric_polymorphism(&g, pair)?);
            SearchOutcome::Found(g)
        }
        Outcome::Exhausted => SearchOutcome::NotFound,
        Outcome::Aborted => SearchOutcome::Aborted,
    };
    Ok(SearchReport {
        outcome,
        nodes,
        elapsed,
        trace,
    })
}

/// `f(m) = g(m, k2 / 3)`: each triple of weights summing to `k1` lifts to a
/// block partition giving every part `k2 / 3` coordinates of the second block.
pub fn restrict_block_to_symmetric(g: &BlockSymTable) -> Result<SymTable> {
    if !g.k2.is_multiple_of(3) {
        return Err(Error::BlockNotDivisible(g.k2));
    }
    g.require_complete()?;
    let z = g.k2 / 3;
    SymTable::from_fn(g.k1, g.target_size, |m| g.get(m, z).expect("complete"))
}

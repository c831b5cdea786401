//! Finite-domain constraint network over "cells" (table entries) with ternary
//! compatibility constraints, shared by the symmetric and block searches.

use std::collections::HashMap;
use std::time::Instant;

use super::trace::{Event, Justification};
use crate::structure::TernaryTable;

/// When a constraint may prune.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Rule {
    /// Only once two of its three positions are decided; prunes the third.
    Assigned,
    /// Generalised arc consistency on every position.
    Support,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Order {
    /// Lowest undecided cell.
    Lowest,
    /// Fewest remaining colours, ties to the lowest cell.
    MinDomain,
}

#[derive(Clone, Debug)]
pub(crate) struct State {
    pub cand: Vec<u32>,
}

impl State {
    pub fn values(&self) -> Vec<u8> {
        self.cand.iter().map(|m| m.trailing_zeros() as u8).collect()
    }
}

/// Receives propagation events. `NoRecord` compiles everything away.
pub(crate) trait Recorder {
    const ACTIVE: bool;
    fn removed(&mut self, _cell: usize, _colors: u32, _via: &Justification) {}
    fn event(&mut self, _e: Event) {}
    fn reason(&self, _cell: usize, _color: usize) -> Justification {
        Justification::Decision
    }
    fn fork(&self) -> Self;
    fn into_events(self) -> Vec<Event>;
}

pub(crate) struct NoRecord;

impl Recorder for NoRecord {
    const ACTIVE: bool = false;
    fn fork(&self) -> Self {
        NoRecord
    }
    fn into_events(self) -> Vec<Event> {
        Vec::new()
    }
}

#[derive(Clone, Default)]
pub(crate) struct Tracer {
    pub events: Vec<Event>,
    reasons: HashMap<(usize, usize), Justification>,
}

impl Recorder for Tracer {
    const ACTIVE: bool = true;

    fn removed(&mut self, cell: usize, colors: u32, via: &Justification) {
        for c in bits(colors) {
            self.reasons.insert((cell, c), via.clone());
        }
    }

    fn event(&mut self, e: Event) {
        self.events.push(e);
    }

    fn reason(&self, cell: usize, color: usize) -> Justification {
        self.reasons.get(&(cell, color)).cloned().unwrap_or(Justification::Decision)
    }

    fn fork(&self) -> Self {
        Tracer {
            events: Vec::new(),
            reasons: self.reasons.clone(),
        }
    }

    fn into_events(self) -> Vec<Event> {
        self.events
    }
}

pub(crate) fn bits(mask: u32) -> impl Iterator<Item = usize> {
    (0..32).filter(move |i| mask >> i & 1 == 1)
}

pub(crate) enum Outcome {
    Found(Vec<u8>),
    Exhausted,
    Aborted,
}

pub(crate) struct SearchConfig {
    pub rule: Rule,
    pub probing: bool,
    pub order: Order,
    /// Colour orbits under the target's automorphisms, used to restrict the
    /// first decision when nothing is seeded.
    pub orbits: Option<Vec<u32>>,
    pub deadline: Option<Instant>,
}

pub(crate) struct Network {
    colors: usize,
    constraints: Vec<[usize; 3]>,
    watch: Vec<Vec<u32>>,
    /// `fill[p][x * k + y]`: colours allowed at position `p` given the other two
    /// positions (in position order) hold `x` and `y`.
    fill: [Vec<u32>; 3],
    /// GAC supports by `(m0, m1, m2, equality pattern)` for small colour counts.
    support_cache: Option<Vec<[u32; 3]>>,
    relation: TernaryTable,
}

impl Network {
    pub fn new(cells: usize, relation: TernaryTable, constraints: Vec<[usize; 3]>) -> Self {
        let k = relation.domain_size();
        let mut fill = [vec![0u32; k * k], vec![0u32; k * k], vec![0u32; k * k]];
        for a in 0..k {
            for b in 0..k {
                for c in 0..k {
                    if relation.contains(a, b, c) {
                        fill[2][a * k + b] |= 1 << c;
                        fill[1][a * k + c] |= 1 << b;
                        fill[0][b * k + c] |= 1 << a;
                    }
                }
            }
        }
        let mut watch = vec![Vec::new(); cells];
        for (j, t) in constraints.iter().enumerate() {
            for (p, &x) in t.iter().enumerate() {
                if !t[..p].contains(&x) {
                    watch[x].push(j as u32);
                }
            }
        }
        let mut net = Network {
            colors: k,
            constraints,
            watch,
            fill,
            support_cache: None,
            relation,
        };
        if k <= 4 {
            let size = 1usize << (3 * k);
            let mut cache = vec![[0u32; 3]; size * 5];
            for pattern in 0..5 {
                for idx in 0..size {
                    let full = (1u32 << k) - 1;
                    let m0 = idx as u32 & full;
                    let m1 = (idx >> k) as u32 & full;
                    let m2 = (idx >> (2 * k)) as u32 & full;
                    cache[pattern * size + idx] = net.compute_supports([m0, m1, m2], pattern);
                }
            }
            net.support_cache = Some(cache);
        }
        net
    }

    pub fn cells(&self) -> usize {
        self.watch.len()
    }

    pub fn colors(&self) -> usize {
        self.colors
    }

    pub fn initial_state(&self) -> State {
        State {
            cand: vec![(1u32 << self.colors) - 1; self.cells()],
        }
    }

    fn compute_supports(&self, m: [u32; 3], pattern: usize) -> [u32; 3] {
        let mut s = [0u32; 3];
        for a in bits(m[0]) {
            for b in bits(m[1]) {
                for c in bits(m[2]) {
                    let ok_eq = match pattern {
                        1 => a == b,
                        2 => a == c,
                        3 => b == c,
                        4 => a == b && b == c,
                        _ => true,
                    };
                    if ok_eq && self.relation.contains(a, b, c) {
                        s[0] |= 1 << a;
                        s[1] |= 1 << b;
                        s[2] |= 1 << c;
                    }
                }
            }
        }
        s
    }

    fn supports(&self, t: &[usize; 3], m: [u32; 3]) -> [u32; 3] {
        let pattern = match (t[0] == t[1], t[0] == t[2], t[1] == t[2]) {
            (true, true, _) => 4,
            (true, false, _) => 1,
            (false, true, _) => 2,
            (false, false, true) => 3,
            _ => 0,
        };
        match &self.support_cache {
            Some(cache) => {
                let k = self.colors;
                let idx = m[0] as usize | (m[1] as usize) << k | (m[2] as usize) << (2 * k);
                cache[(pattern << (3 * k)) + idx]
            }
            None => self.compute_supports(m, pattern),
        }
    }

    /// Restricts `cell` to `mask`; returns the new mask.
    fn restrict<R: Recorder>(&self, st: &mut State, cell: usize, mask: u32, via: Justification, rec: &mut R) -> u32 {
        let old = st.cand[cell];
        let new = old & mask;
        if new == old {
            return new;
        }
        st.cand[cell] = new;
        if R::ACTIVE {
            rec.removed(cell, old & !new, &via);
            if new.count_ones() == 1 {
                rec.event(Event::Force {
                    cell,
                    color: new.trailing_zeros() as usize,
                    via,
                });
            } else if new == 0 {
                let refutations = (0..self.colors).map(|c| (c, rec.reason(cell, c))).collect();
                rec.event(Event::Contradiction { cell, refutations });
            }
        }
        new
    }

    /// Fixes `cell` to `color` as a decision.
    pub fn decide<R: Recorder>(&self, st: &mut State, cell: usize, color: usize, rec: &mut R) -> bool {
        let old = st.cand[cell];
        if R::ACTIVE {
            rec.removed(cell, old & !(1 << color), &Justification::Decision);
        }
        st.cand[cell] = old & (1 << color);
        st.cand[cell] != 0
    }

    /// Revises constraint `j`; pushes changed cells. Returns the empty cell on conflict.
    fn revise<R: Recorder>(
        &self,
        st: &mut State,
        j: usize,
        rule: Rule,
        changed: &mut Vec<usize>,
        rec: &mut R,
    ) -> Result<(), usize> {
        let t = self.constraints[j];
        let k = self.colors;
        match rule {
            Rule::Assigned => {
                for p in 0..3 {
                    let (q, r) = match p {
                        0 => (1, 2),
                        1 => (0, 2),
                        _ => (0, 1),
                    };
                    let (mq, mr) = (st.cand[t[q]], st.cand[t[r]]);
                    if mq.count_ones() != 1 || mr.count_ones() != 1 {
                        continue;
                    }
                    let allowed = self.fill[p][mq.trailing_zeros() as usize * k + mr.trailing_zeros() as usize];
                    let before = st.cand[t[p]];
                    if before & !allowed == 0 {
                        continue;
                    }
                    let via = if R::ACTIVE {
                        Justification::Triple {
                            cells: [t[q], t[r], t[p]],
                        }
                    } else {
                        Justification::Decision
                    };
                    let now = self.restrict(st, t[p], allowed, via, rec);
                    changed.push(t[p]);
                    if now == 0 {
                        return Err(t[p]);
                    }
                }
            }
            Rule::Support => {
                let m = [st.cand[t[0]], st.cand[t[1]], st.cand[t[2]]];
                let s = self.supports(&t, m);
                for p in 0..3 {
                    let before = st.cand[t[p]];
                    if before & !s[p] == 0 {
                        continue;
                    }
                    let (q, r) = match p {
                        0 => (1, 2),
                        1 => (0, 2),
                        _ => (0, 1),
                    };
                    let via = if R::ACTIVE {
                        Justification::Triple {
                            cells: [t[q], t[r], t[p]],
                        }
                    } else {
                        Justification::Decision
                    };
                    let now = self.restrict(st, t[p], s[p], via, rec);
                    changed.push(t[p]);
                    if now == 0 {
                        return Err(t[p]);
                    }
                }
            }
        }
        Ok(())
    }

    /// Runs constraint revisions to a fixpoint. Constraints are scanned in
    /// index order in rounds; a constraint is revisited when one of its cells
    /// changed since its last revision. `dirty = None` starts from all.
    pub fn forward<R: Recorder>(
        &self,
        st: &mut State,
        dirty: Option<&[usize]>,
        rule: Rule,
        rec: &mut R,
    ) -> Result<(), usize> {
        let nc = self.constraints.len();
        let words = nc.div_ceil(64);
        let mut cur = vec![0u64; words];
        let mut next = vec![0u64; words];
        match dirty {
            None => {
                for j in 0..nc {
                    cur[j / 64] |= 1 << (j % 64);
                }
            }
            Some(cells) => {
                for &c in cells {
                    for &j in &self.watch[c] {
                        cur[j as usize / 64] |= 1 << (j % 64);
                    }
                }
            }
        }
        let mut changed = Vec::new();
        loop {
            let mut w = 0;
            while w < words {
                let word = cur[w];
                if word == 0 {
                    w += 1;
                    continue;
                }
                let b = word.trailing_zeros() as usize;
                cur[w] &= !(1u64 << b);
                let j = w * 64 + b;
                changed.clear();
                self.revise(st, j, rule, &mut changed, rec)?;
                for &x in &changed {
                    for &j2 in &self.watch[x] {
                        let j2 = j2 as usize;
                        if j2 > j {
                            cur[j2 / 64] |= 1 << (j2 % 64);
                        } else {
                            next[j2 / 64] |= 1 << (j2 % 64);
                        }
                    }
                }
            }
            if next.iter().all(|&x| x == 0) {
                return Ok(());
            }
            std::mem::swap(&mut cur, &mut next);
        }
    }

    /// Forward propagation, then (if `probing`) repeated probing: every
    /// remaining colour of every undecided cell is tried in turn and removed
    /// if forward propagation refutes it. A cell losing all colours is a
    /// contradiction; among several, the one with the fewest refutation steps
    /// (ties to the lowest cell) is reported.
    pub fn propagate<R: Recorder>(
        &self,
        st: &mut State,
        dirty: Option<&[usize]>,
        rule: Rule,
        probing: bool,
        rec: &mut R,
    ) -> Result<(), usize> {
        self.forward(st, dirty, rule, rec)?;
        if !probing {
            return Ok(());
        }
        loop {
            let mut refuted: Vec<(usize, usize, Vec<Event>)> = Vec::new();
            let mut wiped: Vec<(usize, usize)> = Vec::new();
            for cell in 0..self.cells() {
                let m = st.cand[cell];
                if m.count_ones() <= 1 {
                    continue;
                }
                let mut dead = 0u32;
                let mut cost = 0usize;
                for c in bits(m) {
                    let mut trial = st.clone();
                    let mut sub = rec.fork();
                    self.decide(&mut trial, cell, c, &mut sub);
                    if self.forward(&mut trial, Some(&[cell]), rule, &mut sub).is_err() {
                        let steps = sub.into_events();
                        dead |= 1 << c;
                        cost += steps.len();
                        refuted.push((cell, c, steps));
                    }
                }
                if dead == m {
                    wiped.push((cost, cell));
                }
            }
            if let Some(&(_, cell)) = wiped.iter().min() {
                if R::ACTIVE {
                    let refutations = (0..self.colors)
                        .map(|c| {
                            let probe = refuted
                                .iter()
                                .find(|(x, col, _)| *x == cell && *col == c)
                                .map(|(_, _, steps)| Justification::Probe { steps: steps.clone() });
                            (c, probe.unwrap_or_else(|| rec.reason(cell, c)))
                        })
                        .collect();
                    rec.event(Event::Contradiction { cell, refutations });
                }
                st.cand[cell] = 0;
                return Err(cell);
            }
            if refuted.is_empty() {
                return Ok(());
            }
            let mut touched = Vec::new();
            for (cell, c, steps) in refuted {
                let via = Justification::Probe { steps };
                if R::ACTIVE {
                    rec.removed(cell, 1 << c, &via);
                    rec.event(Event::Refute {
                        cell,
                        color: c,
                        via,
                    });
                }
                st.cand[cell] &= !(1 << c);
                if st.cand[cell].count_ones() == 1
                    && R::ACTIVE {
                        rec.event(Event::Force {
                            cell,
                            color: st.cand[cell].trailing_zeros() as usize,
                            via: Justification::Exclusion,
                        });
                    }
                if touched.last() != Some(&cell) {
                    touched.push(cell);
                }
            }
            self.forward(st, Some(&touched), rule, rec)?;
        }
    }

    fn pick(&self, st: &State, order: Order) -> Option<usize> {
        match order {
            Order::Lowest => st.cand.iter().position(|m| m.count_ones() > 1),
            Order::MinDomain => (0..st.cand.len())
                .filter(|&i| st.cand[i].count_ones() > 1)
                .min_by_key(|&i| (st.cand[i].count_ones(), i)),
        }
    }

    /// Depth-first search from an already propagated state.
    pub fn search<R: Recorder>(
        &self,
        st: State,
        cfg: &SearchConfig,
        first: bool,
        rec: &mut R,
        nodes: &mut u64,
    ) -> Outcome {
        *nodes += 1;
        if let Some(deadline) = cfg.deadline {
            if (*nodes).is_multiple_of(64) && Instant::now() >= deadline {
                return Outcome::Aborted;
            }
        }
        let Some(cell) = self.pick(&st, cfg.order) else {
            return Outcome::Found(st.values());
        };
        let mut colors = st.cand[cell];
        if first {
            if let Some(orbits) = &cfg.orbits {
                // one colour per orbit of the automorphism group
                colors = orbits
                    .iter()
                    .filter(|&&o| o & colors != 0)
                    .map(|&o| 1u32 << (o & colors).trailing_zeros())
                    .fold(0, |a, b| a | b);
            }
        }
        for c in bits(colors) {
            let mut next = st.clone();
            if R::ACTIVE {
                rec.event(Event::Branch { cell, color: c });
            }
            self.decide(&mut next, cell, c, rec);
            if self.propagate(&mut next, Some(&[cell]), cfg.rule, cfg.probing, rec).is_ok() {
                match self.search(next, cfg, false, rec, nodes) {
                    Outcome::Exhausted => {}
                    other => return other,
                }
            } else if let Some(deadline) = cfg.deadline {
                if Instant::now() >= deadline {
                    return Outcome::Aborted;
                }
            }
        }
        Outcome::Exhausted
    }
}

//! Finite relational structures and the transformations used on templates:
//! symmetric closure, plus-closure, the associated digraph and automorphisms.
//!
//! Tuples are stored in sorted sets, so two structures compare equal exactly
//! when their domains and relations agree as sets. The derived ordering on
//! [`RelStructure`] is the canonical encoding order used to pick class
//! representatives in the homomorphism lattice.

use std::collections::BTreeSet;
use std::fmt;

use itertools::Itertools;

use crate::error::{parse_err, Error, Result};

/// A relation of fixed arity over `0..domain_size`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Relation {
    arity: usize,
    tuples: BTreeSet<Vec<usize>>,
}

impl Relation {
    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn tuples(&self) -> impl Iterator<Item = &[usize]> + '_ {
        self.tuples.iter().map(Vec::as_slice)
    }

    pub fn len(&self) -> usize {
        self.tuples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tuples.is_empty()
    }

    pub fn contains(&self, tuple: &[usize]) -> bool {
        self.tuples.contains(tuple)
    }

    /// Closed under every permutation of coordinates.
    pub fn is_symmetric(&self) -> bool {
        self.tuples.iter().all(|t| {
            t.iter()
                .copied()
                .permutations(t.len())
                .all(|p| self.tuples.contains(&p))
        })
    }

    fn symmetrized(&self) -> Relation {
        let mut tuples = BTreeSet::new();
        for t in &self.tuples {
            for p in t.iter().copied().permutations(t.len()) {
                tuples.insert(p);
            }
        }
        Relation {
            arity: self.arity,
            tuples,
        }
    }
}

/// A finite relational structure with domain `0..domain_size`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RelStructure {
    domain_size: usize,
    relations: Vec<Relation>,
}

/// Validates and builds a structure. Each relation is given as a list of tuples.
pub fn make_structure(domain_size: usize, relations: Vec<Vec<Vec<usize>>>) -> Result<RelStructure> {
    if domain_size == 0 {
        return Err(Error::EmptyDomain);
    }
    let mut rels = Vec::with_capacity(relations.len());
    for (index, tuples) in relations.into_iter().enumerate() {
        let arity = match tuples.first() {
            Some(t) => t.len(),
            None => return Err(Error::EmptyRelation { index }),
        };
        if arity == 0 {
            return Err(Error::ZeroArity);
        }
        let mut set = BTreeSet::new();
        for t in tuples {
            if t.len() != arity {
                return Err(Error::InconsistentArity {
                    index,
                    expected: arity,
                    found: t.len(),
                });
            }
            if let Some(&value) = t.iter().find(|&&v| v >= domain_size) {
                return Err(Error::EntryOutOfDomain {
                    index,
                    value,
                    domain_size,
                });
            }
            set.insert(t);
        }
        rels.push(Relation { arity, tuples: set });
    }
    Ok(RelStructure {
        domain_size,
        relations: rels,
    })
}

impl RelStructure {
    /// Shorthand for a structure with one ternary relation.
    pub fn ternary(domain_size: usize, tuples: impl IntoIterator<Item = [usize; 3]>) -> Result<Self> {
        make_structure(
            domain_size,
            vec![tuples.into_iter().map(|t| t.to_vec()).collect()],
        )
    }

    pub fn domain_size(&self) -> usize {
        self.domain_size
    }

    pub fn relations(&self) -> &[Relation] {
        &self.relations
    }

    pub fn same_signature(&self, other: &RelStructure) -> bool {
        self.relations.len() == other.relations.len()
            && self
                .relations
                .iter()
                .zip(&other.relations)
                .all(|(a, b)| a.arity == b.arity)
    }

    pub fn is_symmetric(&self) -> bool {
        self.relations.iter().all(Relation::is_symmetric)
    }

    /// The single ternary relation, or [`Error::NotTernary`].
    pub fn ternary_relation(&self) -> Result<&Relation> {
        match self.relations.as_slice() {
            [r] if r.arity == 3 => Ok(r),
            _ => Err(Error::NotTernary),
        }
    }

    /// Dense membership table for the single ternary relation.
    pub fn ternary_table(&self) -> Result<TernaryTable> {
        let rel = self.ternary_relation()?;
        let k = self.domain_size;
        let mut bits = vec![false; k * k * k];
        for t in rel.tuples() {
            bits[(t[0] * k + t[1]) * k + t[2]] = true;
        }
        Ok(TernaryTable { k, bits })
    }

    /// True if some relation contains a constant tuple `(b, .., b)`.
    pub fn has_constant_tuple(&self) -> bool {
        self.relations
            .iter()
            .any(|r| r.tuples().any(|t| t.iter().all(|&v| v == t[0])))
    }

    /// Compact text key, e.g. `3:001,010,100`.
    pub fn encoding(&self) -> String {
        let rels = self
            .relations
            .iter()
            .map(|r| {
                r.tuples()
                    .map(|t| t.iter().map(|v| v.to_string()).join(if self.domain_size > 10 { "." } else { "" }))
                    .join(",")
            })
            .join(";");
        format!("{}:{}", self.domain_size, rels)
    }

    /// Sorted orbit representatives of a symmetric ternary relation, e.g. `[001, 112]`.
    pub fn orbit_representatives(&self) -> Result<Vec<[usize; 3]>> {
        let rel = self.ternary_relation()?;
        let reps: BTreeSet<[usize; 3]> = rel
            .tuples()
            .map(|t| {
                let mut s = [t[0], t[1], t[2]];
                s.sort_unstable();
                s
            })
            .collect();
        Ok(reps.into_iter().collect())
    }

    /// Parses the line-oriented structure format:
    ///
    /// ```text
    /// # comment
    /// domain 3
    /// rel 3
    /// t 0 0 1
    /// ```
    pub fn from_text(text: &str) -> Result<Self> {
        let mut domain = None;
        let mut relations: Vec<(usize, Vec<Vec<usize>>)> = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let mut words = line.split_whitespace();
            let head = words.next().unwrap_or_default();
            let nums: std::result::Result<Vec<usize>, _> = words.map(str::parse::<usize>).collect();
            let nums = nums.map_err(|e| parse_err(line_no, format!("bad number: {e}")))?;
            match head {
                "domain" => {
                    if domain.is_some() {
                        return Err(parse_err(line_no, "duplicate `domain` line"));
                    }
                    match nums.as_slice() {
                        [k] => domain = Some(*k),
                        _ => return Err(parse_err(line_no, "expected `domain <k>`")),
                    }
                }
                "rel" => {
                    if domain.is_none() {
                        return Err(parse_err(line_no, "`rel` before `domain`"));
                    }
                    match nums.as_slice() {
                        [a] if *a >= 1 => relations.push((*a, Vec::new())),
                        _ => return Err(parse_err(line_no, "expected `rel <arity>` with arity >= 1")),
                    }
                }
                "t" => {
                    let (arity, tuples) = relations
                        .last_mut()
                        .ok_or_else(|| parse_err(line_no, "tuple before any `rel` header"))?;
                    if nums.len() != *arity {
                        return Err(parse_err(
                            line_no,
                            format!("tuple has {} entries, relation arity is {}", nums.len(), arity),
                        ));
                    }
                    tuples.push(nums);
                }
                other => return Err(parse_err(line_no, format!("unknown directive `{other}`"))),
            }
        }
        let domain = domain.ok_or_else(|| parse_err(0, "missing `domain` line"))?;
        let rels = relations.into_iter().map(|(_, t)| t).collect();
        make_structure(domain, rels)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("domain {}\n", self.domain_size);
        for r in &self.relations {
            out.push_str(&format!("rel {}\n", r.arity));
            for t in r.tuples() {
                out.push('t');
                for v in t {
                    out.push_str(&format!(" {v}"));
                }
                out.push('\n');
            }
        }
        out
    }
}

impl fmt::Display for RelStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.encoding())
    }
}

/// Dense `k^3` membership table of a ternary relation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TernaryTable {
    k: usize,
    bits: Vec<bool>,
}

impl TernaryTable {
    pub fn domain_size(&self) -> usize {
        self.k
    }

    #[inline]
    pub fn contains(&self, a: usize, b: usize, c: usize) -> bool {
        self.bits[(a * self.k + b) * self.k + c]
    }

    pub fn is_symmetric(&self) -> bool {
        let k = self.k;
        (0..k).all(|a| {
            (0..k).all(|b| {
                (0..k).all(|c| {
                    let v = self.contains(a, b, c);
                    v == self.contains(b, a, c) && v == self.contains(a, c, b)
                })
            })
        })
    }
}

/// Closure of every relation under coordinate permutations.
pub fn symmetrize(s: &RelStructure) -> RelStructure {
    RelStructure {
        domain_size: s.domain_size,
        relations: s.relations.iter().map(Relation::symmetrized).collect(),
    }
}

/// Adds every rainbow triple (three distinct entries) to the single ternary relation.
pub fn plus_closure(s: &RelStructure) -> Result<RelStructure> {
    let rel = s.ternary_relation()?;
    let k = s.domain_size;
    let mut tuples = rel.tuples.clone();
    for a in 0..k {
        for b in 0..k {
            for c in 0..k {
                if a != b && b != c && a != c {
                    tuples.insert(vec![a, b, c]);
                }
            }
        }
    }
    Ok(RelStructure {
        domain_size: k,
        relations: vec![Relation { arity: 3, tuples }],
    })
}

/// Simple digraph on `0..vertex_count`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Digraph {
    vertex_count: usize,
    arcs: BTreeSet<(usize, usize)>,
}

impl Digraph {
    pub fn new(vertex_count: usize, arcs: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let arcs: BTreeSet<_> = arcs.into_iter().collect();
        if let Some(&(u, v)) = arcs.iter().find(|&&(u, v)| u >= vertex_count || v >= vertex_count) {
            return Err(Error::EntryOutOfDomain {
                index: 0,
                value: u.max(v),
                domain_size: vertex_count,
            });
        }
        Ok(Digraph { vertex_count, arcs })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn arcs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.arcs.iter().copied()
    }

    pub fn has_arc(&self, u: usize, v: usize) -> bool {
        self.arcs.contains(&(u, v))
    }

    /// Lengths of directed cycles present, as a sorted set. Only simple
    /// cycles up to `vertex_count` are considered; loops count as length 1.
    pub fn cycle_lengths(&self) -> BTreeSet<usize> {
        let mut lengths = BTreeSet::new();
        let n = self.vertex_count;
        for len in 1..=n {
            for cycle in (0..n).permutations(len) {
                if cycle[0] != *cycle.iter().min().unwrap() {
                    continue;
                }
                if (0..len).all(|i| self.has_arc(cycle[i], cycle[(i + 1) % len])) {
                    lengths.insert(len);
                    break;
                }
            }
        }
        lengths
    }

    pub fn is_acyclic(&self) -> bool {
        self.cycle_lengths().is_empty()
    }
}

/// Arc `b -> b'` exactly when `(b, b, b')` is in the relation.
pub fn associated_digraph(s: &RelStructure) -> Result<Digraph> {
    let rel = s.ternary_relation()?;
    let arcs = rel
        .tuples()
        .filter(|t| t[0] == t[1])
        .map(|t| (t[0], t[2]));
    Digraph::new(s.domain_size, arcs)
}

/// All permutations of the domain that map every relation onto itself.
pub fn automorphisms(s: &RelStructure) -> Vec<Vec<usize>> {
    let k = s.domain_size;
    (0..k)
        .permutations(k)
        .filter(|perm| {
            // A bijection mapping each relation into itself maps it onto itself.
            s.relations.iter().all(|r| {
                r.tuples().all(|t| {
                    let image: Vec<usize> = t.iter().map(|&v| perm[v]).collect();
                    r.contains(&image)
                })
            })
        })
        .collect()
}

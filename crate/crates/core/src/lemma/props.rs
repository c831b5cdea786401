//! Closed predicates over a single table `f: {0,1}^n -> B`. Each returns the
//! first violation found, in mask order. Conditional statements pass when
//! their hypotheses fail.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::poly::{CoordSet, PolyTable};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum PropertyId {
    D1NoDisjoint,
    D1SmallIset,
    D2Unions,
    D2Singleton,
    D2Successor,
    D2Small02,
    T1Subunion,
    T1Parity,
    T1AddIf,
    T1Sizes,
    T1SmallEf,
    T1Nonidemp,
    ChForbid,
    ChUnion,
    ChSingleton,
}

const NAMES: [(PropertyId, &str); 15] = [
    (PropertyId::D1NoDisjoint, "D1_no_disjoint"),
    (PropertyId::D1SmallIset, "D1_small_iset"),
    (PropertyId::D2Unions, "D2_unions"),
    (PropertyId::D2Singleton, "D2_singleton"),
    (PropertyId::D2Successor, "D2_successor"),
    (PropertyId::D2Small02, "D2_small02"),
    (PropertyId::T1Subunion, "T1_subunion"),
    (PropertyId::T1Parity, "T1_parity"),
    (PropertyId::T1AddIf, "T1_addIf"),
    (PropertyId::T1Sizes, "T1_sizes"),
    (PropertyId::T1SmallEf, "T1_smallEf"),
    (PropertyId::T1Nonidemp, "T1_nonidemp"),
    (PropertyId::ChForbid, "CH_forbid"),
    (PropertyId::ChUnion, "CH_union"),
    (PropertyId::ChSingleton, "CH_singleton"),
];

impl PropertyId {
    pub fn all() -> Vec<PropertyId> {
        NAMES.iter().map(|&(p, _)| p).collect()
    }

    pub fn name(&self) -> &'static str {
        NAMES.iter().find(|(p, _)| p == self).expect("listed").1
    }

    /// The template whose polymorphisms the property is stated for.
    pub fn default_template(&self) -> &'static str {
        match self.name().split('_').next() {
            Some("D1") => "D1plus",
            Some("D2") => "D2plus",
            Some("T1") => "T1",
            _ => "CH",
        }
    }
}

impl fmt::Display for PropertyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for PropertyId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        NAMES
            .iter()
            .find(|(_, n)| n.eq_ignore_ascii_case(s))
            .map(|&(p, _)| p)
            .ok_or_else(|| Error::UnknownId(s.to_string()))
    }
}

/// A failed instance of a property, with the sets that witness it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub witnesses: Vec<String>,
    pub reason: String,
}

impl Violation {
    fn new(n: usize, sets: &[u64], reason: &str) -> Self {
        Violation {
            witnesses: sets.iter().map(|&m| CoordSet::from_bits(n, m).to_string()).collect(),
            reason: reason.to_string(),
        }
    }
}

struct View<'a> {
    f: &'a PolyTable,
    n: usize,
    full: u64,
    k: usize,
}

impl View<'_> {
    fn at(&self, m: u64) -> usize {
        self.f.at(m)
    }

    fn masks(&self) -> impl Iterator<Item = u64> {
        0..=self.full
    }

    fn small(&self, max: u32) -> impl Iterator<Item = u64> + '_ {
        self.masks().filter(move |m| m.count_ones() <= max)
    }

    /// Ordered pairs of disjoint sets.
    fn disjoint_pairs(&self) -> impl Iterator<Item = (u64, u64)> + '_ {
        self.masks().flat_map(move |x| submasks(self.full ^ x).map(move |y| (x, y)))
    }

    fn find_set(&self, mut pred: impl FnMut(u64) -> bool) -> Option<u64> {
        self.masks().find(|&m| pred(m))
    }

    fn odd_set(&self) -> u64 {
        (0..self.n)
            .filter(|&i| self.at(1 << i) != 0)
            .fold(0, |e, i| e | 1 << i)
    }
}

/// All submasks of `m`, including `0` and `m`.
pub(crate) fn submasks(m: u64) -> impl Iterator<Item = u64> {
    let mut next = Some(m);
    std::iter::from_fn(move || {
        let cur = next?;
        next = if cur == 0 { None } else { Some((cur - 1) & m) };
        Some(cur)
    })
}

fn r(v: usize) -> usize {
    (v != 0) as usize
}

/// First violation of `id` on `f`, or `None` if it holds.
pub fn evaluate(id: PropertyId, f: &PolyTable) -> Option<Violation> {
    let v = View {
        f,
        n: f.arity(),
        full: (1u64 << f.arity()) - 1,
        k: f.target_size(),
    };
    let n = v.n;
    let e = v.at(0);
    let fail = |sets: &[u64], why: &str| Some(Violation::new(n, sets, why));
    match id {
        PropertyId::D1NoDisjoint => v
            .disjoint_pairs()
            .find(|&(x, y)| v.at(x) == v.at(y) && matches!(v.at(x), 1 | 2))
            .and_then(|(x, y)| fail(&[x, y], "disjoint sets with equal value in {1,2}")),
        PropertyId::D1SmallIset => match v.small(3).find(|&m| matches!(v.at(m), 1 | 2)) {
            Some(_) => None,
            None => fail(&[], "no 1-set or 2-set of size at most 3"),
        },
        PropertyId::D2Unions => v
            .disjoint_pairs()
            .find(|&(x, y)| {
                let (fx, fy, fu) = (v.at(x), v.at(y), v.at(x | y));
                match e {
                    0 => (fx == 0 && matches!(fy, 0 | 2) && !matches!(fu, 0 | 2)) || (fx == 1 && fy <= 1 && fu != 1),
                    1 => (fx == 1 && fy == 1 && fu > 1) || (fx == 0 && fy == 0 && fu != 2),
                    _ => false,
                }
            })
            .and_then(|(x, y)| fail(&[x, y], "union rule broken")),
        PropertyId::D2Singleton => {
            if e != 0 || (0..n).any(|i| v.at(1 << i) == 2) {
                return None;
            }
            if !(0..n).any(|i| v.at(1 << i) == 1) {
                return fail(&[], "no singleton 1-set");
            }
            v.disjoint_pairs()
                .find(|&(x, y)| v.at(x) == 1 && v.at(y) == 1)
                .and_then(|(x, y)| fail(&[x, y], "disjoint 1-sets"))
        }
        PropertyId::D2Successor => {
            if e != 1 {
                return None;
            }
            for j in 2..=n as u32 {
                if v.small(j).any(|m| v.at(m) != 1) {
                    break;
                }
                if j as usize >= n {
                    return fail(&[v.full], "all sets up to size n are 1-sets");
                }
                if let Some(m) = v.find_set(|m| m.count_ones() == j + 1 && v.at(m) != 1) {
                    return fail(&[m], "a (j+1)-set is not a 1-set");
                }
            }
            None
        }
        PropertyId::D2Small02 => {
            if e == 1 && !v.small(2).any(|m| matches!(v.at(m), 0 | 2)) {
                return fail(&[], "no 0-set or 2-set of size at most 2");
            }
            None
        }
        // X and Y disjoint, as compatibility on X and Y requires; overlapping
        // 1-sets can cover a 2-set
        PropertyId::T1Subunion => v
            .disjoint_pairs()
            .filter(|&(x, y)| v.at(x) == 1 && v.at(y) == 1)
            .find_map(|(x, y)| submasks(x | y).find(|&z| v.at(z) == 2).map(|z| (x, y, z)))
            .and_then(|(x, y, z)| fail(&[x, y, z], "2-set inside a union of disjoint 1-sets")),
        PropertyId::T1Parity => {
            if e != 0 {
                return None;
            }
            let ef = v.odd_set();
            if ef.count_ones().is_multiple_of(2) {
                return fail(&[ef], "E(f) has even size");
            }
            v.find_set(|m| r(v.at(m)) != (m & ef).count_ones() as usize % 2)
                .and_then(|m| fail(&[m, ef], "r(f(X)) differs from |X ∩ E(f)| mod 2"))
        }
        PropertyId::T1AddIf => {
            if e != 0 || v.masks().any(|m| m.count_ones() == 2 && v.at(m) == 2) {
                return None;
            }
            let ef = v.odd_set();
            let i_f = v.full ^ ef;
            v.find_set(|x| v.at(x) == 1 && ef & !x != 0 && v.at(x | i_f) != 1)
                .and_then(|x| fail(&[x, i_f], "X ∪ I(f) is not a 1-set"))
        }
        PropertyId::T1Sizes => {
            if e != 0 || (0..n).any(|i| v.at(1 << i) == 2) {
                return None;
            }
            let ef = v.odd_set();
            for x in submasks(ef).filter(|&x| v.at(x) == 1) {
                if let Some(y) = submasks(ef).find(|&y| y.count_ones() == x.count_ones() && v.at(y) != 1) {
                    return fail(&[x, y], "same-size subset of E(f) is not a 1-set");
                }
            }
            None
        }
        PropertyId::T1SmallEf => {
            if e != 0 || v.small(2).any(|m| v.at(m) == 2) {
                return None;
            }
            let ef = v.odd_set();
            (ef.count_ones() > 5).then(|| Violation::new(n, &[ef], "|E(f)| > 5"))
        }
        PropertyId::T1Nonidemp => {
            if e == 1 && !v.small(2).any(|m| v.at(m) == 2) {
                return fail(&[], "no 2-set of size at most 2");
            }
            None
        }
        PropertyId::ChForbid => {
            let (plus1, plus2) = ((e + 1) % v.k, (e + 2) % v.k);
            if let Some(m) = v.find_set(|m| v.at(m) == plus2) {
                return fail(&[m], "an (i+2)-set exists");
            }
            v.disjoint_pairs()
                .find(|&(x, y)| v.at(x) == plus1 && v.at(y) == plus1)
                .and_then(|(x, y)| fail(&[x, y], "disjoint (i+1)-sets"))
        }
        PropertyId::ChUnion => {
            let (plus1, plus3) = ((e + 1) % v.k, (e + 3) % v.k);
            v.disjoint_pairs()
                .find(|&(x, y)| {
                    let (fx, fy, fu) = (v.at(x), v.at(y), v.at(x | y));
                    (fx == e && fy == e && fu != e) || (fx == plus3 && fy == plus3 && fu != plus1)
                })
                .and_then(|(x, y)| fail(&[x, y], "union rule broken"))
        }
        PropertyId::ChSingleton => {
            let (plus1, plus3) = ((e + 1) % v.k, (e + 3) % v.k);
            if v.small(2).any(|m| v.at(m) == plus3) || (0..n).any(|i| v.at(1 << i) == plus1) {
                return None;
            }
            fail(&[], "no small (i+3)-set and no singleton (i+1)-set")
        }
    }
}

/// `E(f)`: coordinates whose singleton is not a 0-set; `I(f)` is the rest.
pub fn compute_ef(f: &PolyTable) -> Result<(CoordSet, CoordSet)> {
    if f.target_size() != 3 {
        return Err(Error::WrongDomainSize {
            expected: 3,
            found: f.target_size(),
        });
    }
    let n = f.arity();
    let e = (0..n).filter(|&i| f.at(1 << i) != 0).fold(0u64, |m, i| m | 1 << i);
    let e = CoordSet::from_bits(n, e);
    Ok((e, e.complement()))
}

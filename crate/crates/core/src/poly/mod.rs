//! Boolean-source polymorphism tables, minors and i-sets.
//!
//! A function `f: {0,1}^n -> B` is stored as a table indexed by coordinate
//! subsets: bit `i` of the index is the input at coordinate `i + 1`. APIs that
//! name coordinates use the 1-based convention `[n] = {1, .., n}`.

mod enumerate;
mod general;

use std::fmt;

use serde::Serialize;

pub use enumerate::{enumerate_polymorphisms, PolyEnumerator, DEFAULT_ARITY_BOUND};
pub use general::{is_polymorphism_general, GeneralPolyTable};

use crate::error::{parse_err, Error, Result};
use crate::hom::TemplatePair;

/// Largest arity accepted for dense tables.
pub const MAX_TABLE_ARITY: usize = 24;

/// A subset of the coordinates `[n]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct CoordSet {
    arity: usize,
    bits: u64,
}

impl CoordSet {
    pub fn empty(arity: usize) -> Self {
        CoordSet { arity, bits: 0 }
    }

    pub fn full(arity: usize) -> Self {
        CoordSet {
            arity,
            bits: full_mask(arity),
        }
    }

    /// Builds a set from 1-based coordinates.
    pub fn from_coords(arity: usize, coords: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut bits = 0;
        for c in coords {
            if c == 0 || c > arity {
                return Err(Error::ValueOutOfRange {
                    value: c,
                    target_size: arity + 1,
                });
            }
            bits |= 1 << (c - 1);
        }
        Ok(CoordSet { arity, bits })
    }

    pub fn from_bits(arity: usize, bits: u64) -> Self {
        debug_assert_eq!(bits & !full_mask(arity), 0);
        CoordSet { arity, bits }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn bits(&self) -> u64 {
        self.bits
    }

    pub fn len(&self) -> usize {
        self.bits.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.bits == 0
    }

    /// 1-based membership test.
    pub fn contains(&self, coord: usize) -> bool {
        coord >= 1 && coord <= self.arity && self.bits >> (coord - 1) & 1 == 1
    }

    /// Members as 1-based coordinates, ascending.
    pub fn coords(&self) -> Vec<usize> {
        (1..=self.arity).filter(|&c| self.contains(c)).collect()
    }

    pub fn is_disjoint(&self, other: &CoordSet) -> bool {
        self.bits & other.bits == 0
    }

    pub fn union(&self, other: &CoordSet) -> CoordSet {
        CoordSet {
            arity: self.arity,
            bits: self.bits | other.bits,
        }
    }

    pub fn intersection(&self, other: &CoordSet) -> CoordSet {
        CoordSet {
            arity: self.arity,
            bits: self.bits & other.bits,
        }
    }

    pub fn complement(&self) -> CoordSet {
        CoordSet {
            arity: self.arity,
            bits: !self.bits & full_mask(self.arity),
        }
    }

    /// Input tuple `a_1 .. a_n` as a string of `0`/`1`.
    pub fn to_bit_string(&self) -> String {
        (0..self.arity)
            .map(|i| if self.bits >> i & 1 == 1 { '1' } else { '0' })
            .collect()
    }
}

impl fmt::Display for CoordSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let coords: Vec<String> = self.coords().iter().map(|c| c.to_string()).collect();
        write!(f, "{{{}}}", coords.join(","))
    }
}

pub(crate) fn full_mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// All subsets of `[n]` as masks in (cardinality, lexicographic) order.
pub fn canonical_subsets(n: usize) -> Vec<u64> {
    let mut masks: Vec<u64> = (0..1u64 << n).collect();
    masks.sort_by_cached_key(|&m| {
        let members: Vec<u32> = (0..n as u32).filter(|&i| m >> i & 1 == 1).collect();
        (members.len(), members)
    });
    masks
}

/// A function `{0,1}^n -> 0..target_size`, tabulated over coordinate subsets.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PolyTable {
    arity: usize,
    target_size: usize,
    values: Vec<u8>,
}

impl PolyTable {
    /// `values[mask]` is `f` on the indicator of `mask`.
    pub fn new(arity: usize, target_size: usize, values: Vec<u8>) -> Result<Self> {
        if arity > MAX_TABLE_ARITY {
            return Err(Error::BoundExceeded {
                requested: arity,
                bound: MAX_TABLE_ARITY,
            });
        }
        if values.len() != 1 << arity {
            return Err(Error::ArityMismatch {
                expected: 1 << arity,
                found: values.len(),
            });
        }
        if let Some(&v) = values.iter().find(|&&v| v as usize >= target_size) {
            return Err(Error::ValueOutOfRange {
                value: v as usize,
                target_size,
            });
        }
        Ok(PolyTable {
            arity,
            target_size,
            values,
        })
    }

    pub fn from_fn(arity: usize, target_size: usize, f: impl Fn(CoordSet) -> usize) -> Result<Self> {
        let values = (0..1u64 << arity)
            .map(|m| f(CoordSet::from_bits(arity, m)) as u8)
            .collect();
        PolyTable::new(arity, target_size, values)
    }

    /// The projection onto 1-based coordinate `coord`, over a Boolean target.
    pub fn dictator(arity: usize, coord: usize) -> Self {
        PolyTable::from_fn(arity, 2, |x| x.contains(coord) as usize).expect("valid dictator")
    }

    pub fn constant(arity: usize, target_size: usize, value: usize) -> Result<Self> {
        PolyTable::from_fn(arity, target_size, |_| value)
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn target_size(&self) -> usize {
        self.target_size
    }

    pub fn values(&self) -> &[u8] {
        &self.values
    }

    #[inline]
    pub fn at(&self, mask: u64) -> usize {
        self.values[mask as usize] as usize
    }

    /// Same table viewed over a larger target domain.
    pub fn with_target_size(&self, target_size: usize) -> Result<PolyTable> {
        PolyTable::new(self.arity, target_size, self.values.clone())
    }

    /// Parses `poly <n> <target_size>` followed by `<bits> <value>` lines.
    pub fn from_text(text: &str) -> Result<Self> {
        let mut header = None;
        let mut values: Vec<Option<u8>> = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let words: Vec<&str> = line.split_whitespace().collect();
            match (header, words.as_slice()) {
                (None, ["poly", n, k]) => {
                    let n: usize = n.parse().map_err(|_| parse_err(line_no, "bad arity"))?;
                    let k: usize = k.parse().map_err(|_| parse_err(line_no, "bad target size"))?;
                    if n == 0 || n > MAX_TABLE_ARITY || k == 0 || k > 256 {
                        return Err(parse_err(line_no, "arity or target size out of range"));
                    }
                    header = Some((n, k));
                    values = vec![None; 1 << n];
                }
                (Some((n, k)), [bits, value]) => {
                    if bits.len() != n || !bits.chars().all(|c| c == '0' || c == '1') {
                        return Err(parse_err(line_no, format!("expected {n} input bits, got `{bits}`")));
                    }
                    let mask = bits
                        .chars()
                        .enumerate()
                        .fold(0usize, |m, (i, c)| m | ((c == '1') as usize) << i);
                    let v: usize = value.parse().map_err(|_| parse_err(line_no, "bad value"))?;
                    if v >= k {
                        return Err(parse_err(line_no, format!("value {v} outside 0..{k}")));
                    }
                    if values[mask].replace(v as u8).is_some() {
                        return Err(parse_err(line_no, format!("duplicate row `{bits}`")));
                    }
                }
                _ => return Err(parse_err(line_no, format!("unexpected line `{line}`"))),
            }
        }
        let (n, k) = header.ok_or_else(|| parse_err(0, "missing `poly` header"))?;
        let values = values
            .into_iter()
            .enumerate()
            .map(|(m, v)| v.ok_or_else(|| parse_err(0, format!("missing row for subset {}", CoordSet::from_bits(n, m as u64)))))
            .collect::<Result<Vec<u8>>>()?;
        PolyTable::new(n, k, values)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("poly {} {}\n", self.arity, self.target_size);
        for m in canonical_subsets(self.arity) {
            let set = CoordSet::from_bits(self.arity, m);
            out.push_str(&format!("{} {}\n", set.to_bit_string(), self.at(m)));
        }
        out
    }
}

impl fmt::Display for PolyTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cells: Vec<String> = canonical_subsets(self.arity)
            .into_iter()
            .map(|m| format!("{}:{}", CoordSet::from_bits(self.arity, m), self.at(m)))
            .collect();
        write!(f, "[{}]", cells.join(" "))
    }
}

pub fn evaluate_on_set(f: &PolyTable, x: &CoordSet) -> Result<usize> {
    if x.arity() != f.arity() {
        return Err(Error::ArityMismatch {
            expected: f.arity(),
            found: x.arity(),
        });
    }
    Ok(f.at(x.bits()))
}

/// Polymorphism test for `(1in3, B)`: every ordered partition `X ⊎ Y ⊎ Z = [n]`
/// must give `(f(X), f(Y), f(Z))` in the target relation.
pub fn is_polymorphism(f: &PolyTable, pair: &TemplatePair) -> Result<bool> {
    pair.require_one_in_three()?;
    let table = pair.target().ternary_table()?;
    if f.target_size() != pair.target().domain_size() {
        return Err(Error::WrongDomainSize {
            expected: pair.target().domain_size(),
            found: f.target_size(),
        });
    }
    let full = full_mask(f.arity());
    for x in 0..=full {
        let rest = full ^ x;
        let fx = f.at(x);
        // enumerate y over submasks of rest, including the empty set
        let mut y = rest;
        loop {
            if !table.contains(fx, f.at(y), f.at(rest ^ y)) {
                return Ok(false);
            }
            if y == 0 {
                break;
            }
            y = (y - 1) & rest;
        }
    }
    Ok(true)
}

/// A map `α: [n] -> [m]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct MinorMap {
    n: usize,
    m: usize,
    // 0-based images
    images: Vec<usize>,
}

impl MinorMap {
    /// `images[i - 1] = α(i)`, with 1-based values in `1..=m`.
    pub fn new(m: usize, images: &[usize]) -> Result<Self> {
        if let Some(&bad) = images.iter().find(|&&v| v == 0 || v > m) {
            return Err(Error::ValueOutOfRange {
                value: bad,
                target_size: m + 1,
            });
        }
        Ok(MinorMap {
            n: images.len(),
            m,
            images: images.iter().map(|v| v - 1).collect(),
        })
    }

    pub(crate) fn from_zero_based(m: usize, images: Vec<usize>) -> Self {
        MinorMap {
            n: images.len(),
            m,
            images,
        }
    }

    pub fn identity(n: usize) -> Self {
        MinorMap::from_zero_based(n, (0..n).collect())
    }

    pub fn source_arity(&self) -> usize {
        self.n
    }

    pub fn target_arity(&self) -> usize {
        self.m
    }

    /// `α(i)` for 1-based `i`.
    pub fn apply(&self, i: usize) -> usize {
        self.images[i - 1] + 1
    }

    /// `next ∘ self`.
    pub fn then(&self, next: &MinorMap) -> Result<MinorMap> {
        if next.n != self.m {
            return Err(Error::ArityMismatch {
                expected: self.m,
                found: next.n,
            });
        }
        Ok(MinorMap::from_zero_based(
            next.m,
            self.images.iter().map(|&j| next.images[j]).collect(),
        ))
    }

    /// Image `α(X)` of a set over `[n]`.
    pub fn image(&self, x: &CoordSet) -> Result<CoordSet> {
        if x.arity() != self.n {
            return Err(Error::ArityMismatch {
                expected: self.n,
                found: x.arity(),
            });
        }
        let bits = (0..self.n)
            .filter(|&i| x.bits() >> i & 1 == 1)
            .fold(0u64, |b, i| b | 1 << self.images[i]);
        Ok(CoordSet::from_bits(self.m, bits))
    }

    #[inline]
    pub(crate) fn preimage_bits(&self, bits: u64) -> u64 {
        self.images
            .iter()
            .enumerate()
            .fold(0u64, |acc, (i, &j)| acc | ((bits >> j) & 1) << i)
    }

    /// Every map `[n] -> [m]`, in lexicographic order of image vectors.
    pub fn all(n: usize, m: usize) -> impl Iterator<Item = MinorMap> {
        let total = (m as u64).pow(n as u32);
        (0..total).map(move |mut code| {
            let mut images = vec![0; n];
            for slot in images.iter_mut().rev() {
                *slot = (code % m as u64) as usize;
                code /= m as u64;
            }
            MinorMap::from_zero_based(m, images)
        })
    }
}

impl fmt::Display for MinorMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .images
            .iter()
            .enumerate()
            .map(|(i, j)| format!("{}->{}", i + 1, j + 1))
            .collect();
        write!(f, "[{}]", parts.join(","))
    }
}

/// `α⁻¹(X)` for `X ⊆ [m]`.
pub fn preimage_set(alpha: &MinorMap, x: &CoordSet) -> Result<CoordSet> {
    if x.arity() != alpha.m {
        return Err(Error::ArityMismatch {
            expected: alpha.m,
            found: x.arity(),
        });
    }
    Ok(CoordSet::from_bits(alpha.n, alpha.preimage_bits(x.bits())))
}

/// `f^α`, i.e. `g(X) = f(α⁻¹(X))`.
pub fn minor(f: &PolyTable, alpha: &MinorMap) -> Result<PolyTable> {
    if alpha.n != f.arity() {
        return Err(Error::ArityMismatch {
            expected: f.arity(),
            found: alpha.n,
        });
    }
    let values = (0..1u64 << alpha.m)
        .map(|x| f.values[alpha.preimage_bits(x) as usize])
        .collect();
    PolyTable::new(alpha.m, f.target_size(), values)
}

/// All `X` with `|X| <= max_size` and `f(X) = i`, in (size, lexicographic) order.
pub fn i_sets(f: &PolyTable, i: usize, max_size: usize) -> Vec<CoordSet> {
    canonical_subsets(f.arity())
        .into_iter()
        .filter(|m| m.count_ones() as usize <= max_size && f.at(*m) == i)
        .map(|m| CoordSet::from_bits(f.arity(), m))
        .collect()
}

/// A sequence `f_0, α_{0,1}, f_1, .., f_l` with `f_{i-1}^{α_{i-1,i}} = f_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinorChain {
    functions: Vec<PolyTable>,
    maps: Vec<MinorMap>,
}

impl MinorChain {
    pub fn new(functions: Vec<PolyTable>, maps: Vec<MinorMap>) -> Result<Self> {
        if functions.is_empty() || maps.len() + 1 != functions.len() {
            return Err(Error::InvalidParameters(
                "a chain needs exactly one map between consecutive functions".into(),
            ));
        }
        for (i, alpha) in maps.iter().enumerate() {
            if minor(&functions[i], alpha)? != functions[i + 1] {
                return Err(Error::InvalidParameters(format!(
                    "function {} is not the minor of function {} along its map",
                    i + 1,
                    i
                )));
            }
        }
        Ok(MinorChain { functions, maps })
    }

    /// Builds the chain generated by `f_0` and the maps.
    pub fn generate(f0: PolyTable, maps: Vec<MinorMap>) -> Result<Self> {
        let mut functions = vec![f0];
        for alpha in &maps {
            let next = minor(functions.last().unwrap(), alpha)?;
            functions.push(next);
        }
        Ok(MinorChain { functions, maps })
    }

    pub fn len(&self) -> usize {
        self.maps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.maps.is_empty()
    }

    pub fn function(&self, i: usize) -> &PolyTable {
        &self.functions[i]
    }

    /// `α_{i,j}` for `i <= j`.
    pub fn composed(&self, i: usize, j: usize) -> MinorMap {
        assert!(i <= j && j < self.functions.len());
        self.maps[i..j]
            .iter()
            .fold(MinorMap::identity(self.functions[i].arity()), |acc, a| {
                acc.then(a).expect("chain arities match")
            })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::named_template;

    fn pair(name: &str) -> TemplatePair {
        TemplatePair::one_in_three(named_template(name).unwrap()).unwrap()
    }

    /// value 1 iff [1∈X] - [2∈X] + [3∈X] > 0
    fn at3() -> PolyTable {
        PolyTable::from_fn(3, 2, |x| {
            let s = x.contains(1) as i32 - x.contains(2) as i32 + x.contains(3) as i32;
            (s > 0) as usize
        })
        .unwrap()
    }

    fn set(n: usize, c: &[usize]) -> CoordSet {
        CoordSet::from_coords(n, c.iter().copied()).unwrap()
    }

    #[test]
    fn evaluation_examples() {
        assert_eq!(evaluate_on_set(&PolyTable::dictator(3, 1), &set(3, &[1, 3])).unwrap(), 1);
        let f = at3();
        assert_eq!(evaluate_on_set(&f, &CoordSet::empty(3)).unwrap(), f.at(0));
        assert_eq!(evaluate_on_set(&f, &set(3, &[2])).unwrap(), 0);
        assert!(evaluate_on_set(&f, &CoordSet::empty(2)).is_err());
    }

    #[test]
    fn polymorphism_examples() {
        let one = pair("1in3");
        assert!(is_polymorphism(&PolyTable::dictator(4, 2), &one).unwrap());
        assert!(is_polymorphism(&at3(), &pair("NAE")).unwrap());
        assert!(!is_polymorphism(&PolyTable::constant(3, 2, 0).unwrap(), &one).unwrap());
        let nae_source = TemplatePair::new(named_template("NAE").unwrap(), named_template("NAE").unwrap()).unwrap();
        assert_eq!(is_polymorphism(&at3(), &nae_source), Err(Error::SourceNotOneInThree));
    }

    #[test]
    fn minor_examples() {
        let diag = minor(&PolyTable::dictator(3, 1), &MinorMap::new(1, &[1, 1, 1]).unwrap()).unwrap();
        assert_eq!(diag.values(), &[0, 1]);
        let f = at3();
        assert_eq!(minor(&f, &MinorMap::identity(3)).unwrap(), f);
        // tie coordinates 1 and 2: g(b1, b2) = f(b1, b1, b2)
        let g = minor(&f, &MinorMap::new(2, &[1, 1, 2]).unwrap()).unwrap();
        for b1 in 0..2u64 {
            for b2 in 0..2u64 {
                let direct = f.at(b1 | b1 << 1 | b2 << 2);
                assert_eq!(g.at(b1 | b2 << 1), direct);
            }
        }
        assert!(minor(&f, &MinorMap::identity(2)).is_err());
    }

    #[test]
    fn preimage_examples() {
        let constant = MinorMap::new(1, &[1, 1, 1]).unwrap();
        assert_eq!(preimage_set(&constant, &set(1, &[1])).unwrap(), CoordSet::full(3));
        let x = set(3, &[1, 3]);
        assert_eq!(preimage_set(&MinorMap::identity(3), &x).unwrap(), x);
        let alpha = MinorMap::new(2, &[2, 1, 2]).unwrap();
        assert_eq!(preimage_set(&alpha, &set(2, &[2])).unwrap(), set(3, &[1, 3]));
        assert!(preimage_set(&alpha, &x).is_err());
    }

    #[test]
    fn i_set_examples() {
        assert_eq!(i_sets(&at3(), 1, 1), vec![set(3, &[1]), set(3, &[3])]);
        assert_eq!(i_sets(&PolyTable::dictator(3, 1), 1, 1), vec![set(3, &[1])]);
        assert!(i_sets(&PolyTable::constant(4, 2, 0).unwrap(), 1, 4).is_empty());
    }

    #[test]
    fn canonical_order_is_size_then_lex() {
        let order: Vec<String> = canonical_subsets(4)
            .into_iter()
            .filter(|m| m.count_ones() == 2)
            .map(|m| CoordSet::from_bits(4, m).to_string())
            .collect();
        assert_eq!(order, ["{1,2}", "{1,3}", "{1,4}", "{2,3}", "{2,4}", "{3,4}"]);
    }

    #[test]
    fn table_text_round_trip() {
        let f = at3();
        let text = f.to_text();
        assert!(text.starts_with("poly 3 2\n000 0\n100 1\n010 0\n001 1\n"));
        assert_eq!(PolyTable::from_text(&text).unwrap(), f);
        assert!(PolyTable::from_text("poly 2 2\n00 0\n10 1\n").is_err());
        assert!(PolyTable::from_text("poly 1 2\n0 0\n1 2\n").is_err());
    }

    #[test]
    fn chains() {
        let f0 = at3();
        let a = MinorMap::new(2, &[1, 2, 1]).unwrap();
        let b = MinorMap::new(2, &[2, 1]).unwrap();
        let chain = MinorChain::generate(f0.clone(), vec![a.clone(), b.clone()]).unwrap();
        let composed = chain.composed(0, 2);
        assert_eq!(minor(&f0, &composed).unwrap(), *chain.function(2));
        assert!(MinorChain::new(
            vec![f0.clone(), chain.function(1).clone(), chain.function(2).clone()],
            vec![a, b.clone()]
        )
        .is_ok());
        assert!(MinorChain::new(vec![f0.clone(), f0], vec![b]).is_err());
    }
}

use super::{canonical_subsets, full_mask, PolyTable};
use crate::error::{Error, Result};
use crate::hom::TemplatePair;
use crate::structure::TernaryTable;

/// Default arity cap for exhaustive enumeration (32-cell tables).
pub const DEFAULT_ARITY_BOUND: usize = 5;

/// Lazily enumerates every polymorphism of `(1in3, B)` of a fixed arity.
///
/// Cells are assigned in (size, lexicographic) subset order, colours in
/// ascending order; an ordered partition `(X, Y, Z)` is checked as soon as the
/// last of its three cells is assigned. Tables come out in lexicographic order
/// of their value vectors read in that cell order.
pub struct PolyEnumerator {
    arity: usize,
    colors: u8,
    relation: TernaryTable,
    order: Vec<u64>,
    checks: Vec<Vec<(u64, u64, u64)>>,
    values: Vec<u8>,
    next_color: Vec<u8>,
    depth: usize,
    done: bool,
}

/// Streams all polymorphisms of arity `n`. `bound` caps `n`.
pub fn enumerate_polymorphisms(pair: &TemplatePair, n: usize, bound: usize) -> Result<PolyEnumerator> {
    pair.require_one_in_three()?;
    if n == 0 {
        return Err(Error::ZeroArityFunction);
    }
    if n > bound || n > super::MAX_TABLE_ARITY {
        return Err(Error::BoundExceeded {
            requested: n,
            bound: bound.min(super::MAX_TABLE_ARITY),
        });
    }
    let k = pair.target().domain_size();
    if k > 255 {
        return Err(Error::TargetTooLarge(k));
    }
    let relation = pair.target().ternary_table()?;
    let order = canonical_subsets(n);
    let mut position = vec![0usize; order.len()];
    for (i, &m) in order.iter().enumerate() {
        position[m as usize] = i;
    }
    let mut checks = vec![Vec::new(); order.len()];
    let full = full_mask(n);
    for x in 0..=full {
        let rest = full ^ x;
        let mut y = rest;
        loop {
            let z = rest ^ y;
            let last = [x, y, z].iter().map(|&m| position[m as usize]).max().unwrap();
            checks[last].push((x, y, z));
            if y == 0 {
                break;
            }
            y = (y - 1) & rest;
        }
    }
    Ok(PolyEnumerator {
        arity: n,
        colors: k as u8,
        relation,
        values: vec![0; order.len()],
        next_color: vec![0; order.len()],
        order,
        checks,
        depth: 0,
        done: false,
    })
}

impl PolyEnumerator {
    fn consistent(&self, depth: usize) -> bool {
        self.checks[depth].iter().all(|&(x, y, z)| {
            self.relation.contains(
                self.values[x as usize] as usize,
                self.values[y as usize] as usize,
                self.values[z as usize] as usize,
            )
        })
    }
}

impl Iterator for PolyEnumerator {
    type Item = PolyTable;

    fn next(&mut self) -> Option<PolyTable> {
        let cells = self.order.len();
        if self.done {
            return None;
        }
        if self.depth == cells {
            // resume after the previously emitted table
            self.depth -= 1;
        }
        loop {
            let d = self.depth;
            let c = self.next_color[d];
            if c >= self.colors {
                self.next_color[d] = 0;
                if d == 0 {
                    self.done = true;
                    return None;
                }
                self.depth -= 1;
                continue;
            }
            self.next_color[d] = c + 1;
            self.values[self.order[d] as usize] = c;
            if self.consistent(d) {
                self.depth += 1;
                if self.depth == cells {
                    return Some(
                        PolyTable::new(self.arity, self.colors as usize, self.values.clone())
                            .expect("enumerated values are in range"),
                    );
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::named_template;
    use crate::poly::is_polymorphism;

    fn pair(name: &str) -> TemplatePair {
        TemplatePair::one_in_three(named_template(name).unwrap()).unwrap()
    }

    #[test]
    fn unary_one_in_three_is_identity_only() {
        let all: Vec<_> = enumerate_polymorphisms(&pair("1in3"), 1, 5).unwrap().collect();
        assert_eq!(all, vec![PolyTable::dictator(1, 1)]);
    }

    #[test]
    fn nae_arity_three_contains_at3_and_dictators() {
        let all: Vec<_> = enumerate_polymorphisms(&pair("NAE"), 3, 5).unwrap().collect();
        let at3 = PolyTable::from_fn(3, 2, |x| {
            (x.contains(1) as i32 - x.contains(2) as i32 + x.contains(3) as i32 > 0) as usize
        })
        .unwrap();
        assert!(all.contains(&at3));
        for i in 1..=3 {
            assert!(all.contains(&PolyTable::dictator(3, i)));
        }
        assert!(all.iter().all(|f| is_polymorphism(f, &pair("NAE")).unwrap()));
    }

    #[test]
    fn full_relation_gives_every_table() {
        let full = named_template("NAE_3").unwrap();
        let all_tuples: Vec<Vec<usize>> = (0..27).map(|i| vec![i / 9, i / 3 % 3, i % 3]).collect();
        let total = crate::structure::make_structure(3, vec![all_tuples]).unwrap();
        assert_ne!(full, total);
        let p = TemplatePair::one_in_three(total).unwrap();
        assert_eq!(enumerate_polymorphisms(&p, 2, 5).unwrap().count(), 81);
    }

    #[test]
    fn bound_is_enforced() {
        assert!(matches!(
            enumerate_polymorphisms(&pair("T1"), 6, DEFAULT_ARITY_BOUND),
            Err(Error::BoundExceeded { requested: 6, .. })
        ));
        assert!(enumerate_polymorphisms(&pair("T1"), 0, 5).is_err());
    }

    #[test]
    fn stream_is_sorted_and_duplicate_free() {
        let order = canonical_subsets(3);
        let keys: Vec<Vec<u8>> = enumerate_polymorphisms(&pair("D2plus"), 3, 5)
            .unwrap()
            .map(|f| order.iter().map(|&m| f.values()[m as usize]).collect())
            .collect();
        assert_eq!(keys.len(), 72);
        assert!(keys.windows(2).all(|w| w[0] < w[1]));
    }
}

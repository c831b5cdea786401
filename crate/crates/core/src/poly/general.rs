use itertools::Itertools;

use super::PolyTable;
use crate::error::{Error, Result};
use crate::hom::TemplatePair;

/// A function `A^n -> B` over an arbitrary finite source domain. The input
/// `(a_1, .., a_n)` sits at index `Σ a_i · |A|^(i-1)`, which for `|A| = 2`
/// agrees with the subset indexing of [`PolyTable`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneralPolyTable {
    arity: usize,
    source_size: usize,
    target_size: usize,
    values: Vec<u8>,
}

impl GeneralPolyTable {
    pub fn new(arity: usize, source_size: usize, target_size: usize, values: Vec<u8>) -> Result<Self> {
        if arity == 0 {
            return Err(Error::ZeroArityFunction);
        }
        let cells = source_size.checked_pow(arity as u32).ok_or(Error::BoundExceeded {
            requested: arity,
            bound: 0,
        })?;
        if values.len() != cells {
            return Err(Error::ArityMismatch {
                expected: cells,
                found: values.len(),
            });
        }
        if let Some(&v) = values.iter().find(|&&v| v as usize >= target_size) {
            return Err(Error::ValueOutOfRange {
                value: v as usize,
                target_size,
            });
        }
        Ok(GeneralPolyTable {
            arity,
            source_size,
            target_size,
            values,
        })
    }

    pub fn from_fn(
        arity: usize,
        source_size: usize,
        target_size: usize,
        f: impl Fn(&[usize]) -> usize,
    ) -> Result<Self> {
        let values = (0..arity)
            .map(|_| 0..source_size)
            .multi_cartesian_product()
            .map(|mut input| {
                // multi_cartesian_product varies the last position fastest
                input.reverse();
                (f(&input) as u8, input)
            })
            .collect::<Vec<_>>();
        let mut table = vec![0u8; values.len()];
        for (v, input) in values {
            table[index_of(&input, source_size)] = v;
        }
        GeneralPolyTable::new(arity, source_size, target_size, table)
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn value(&self, input: &[usize]) -> usize {
        self.values[index_of(input, self.source_size)] as usize
    }
}

fn index_of(input: &[usize], base: usize) -> usize {
    input.iter().rev().fold(0, |acc, &a| acc * base + a)
}

impl From<&PolyTable> for GeneralPolyTable {
    fn from(f: &PolyTable) -> Self {
        GeneralPolyTable {
            arity: f.arity(),
            source_size: 2,
            target_size: f.target_size(),
            values: f.values().to_vec(),
        }
    }
}

/// The column-wise definition: for every relation and every choice of `n`
/// source tuples, applying `f` to the columns gives a target tuple.
pub fn is_polymorphism_general(f: &GeneralPolyTable, pair: &TemplatePair) -> Result<bool> {
    let (source, target) = (pair.source(), pair.target());
    if f.source_size != source.domain_size() {
        return Err(Error::WrongDomainSize {
            expected: source.domain_size(),
            found: f.source_size,
        });
    }
    if f.target_size != target.domain_size() {
        return Err(Error::WrongDomainSize {
            expected: target.domain_size(),
            found: f.target_size,
        });
    }
    for (rs, rt) in source.relations().iter().zip(target.relations()) {
        let tuples: Vec<&[usize]> = rs.tuples().collect();
        for rows in (0..f.arity).map(|_| tuples.iter()).multi_cartesian_product() {
            let image: Vec<usize> = (0..rs.arity())
                .map(|col| {
                    let input: Vec<usize> = rows.iter().map(|row| row[col]).collect();
                    f.value(&input)
                })
                .collect();
            if !rt.contains(&image) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::named_template;
    use crate::poly::is_polymorphism;

    #[test]
    fn unary_identity_is_polymorphism() {
        for name in ["1in3", "T1", "CH", "LO_4"] {
            let a = named_template(name).unwrap();
            let k = a.domain_size();
            let pair = TemplatePair::new(a.clone(), a).unwrap();
            let id = GeneralPolyTable::from_fn(1, k, k, |x| x[0]).unwrap();
            assert!(is_polymorphism_general(&id, &pair).unwrap());
        }
    }

    #[test]
    fn zero_arity_rejected() {
        assert_eq!(GeneralPolyTable::new(0, 2, 2, vec![0]), Err(Error::ZeroArityFunction));
    }

    #[test]
    fn agrees_with_partition_test() {
        let pair = TemplatePair::one_in_three(named_template("NAE").unwrap()).unwrap();
        let at3 = PolyTable::from_fn(3, 2, |x| {
            (x.contains(1) as i32 - x.contains(2) as i32 + x.contains(3) as i32 > 0) as usize
        })
        .unwrap();
        assert!(is_polymorphism_general(&(&at3).into(), &pair).unwrap());
        assert!(is_polymorphism(&at3, &pair).unwrap());
        // all binary Boolean tables
        for code in 0..16u8 {
            let values: Vec<u8> = (0..4).map(|i| code >> i & 1).collect();
            let f = PolyTable::new(2, 2, values).unwrap();
            assert_eq!(
                is_polymorphism(&f, &pair).unwrap(),
                is_polymorphism_general(&(&f).into(), &pair).unwrap()
            );
        }
    }

    #[test]
    fn index_layout() {
        let f = GeneralPolyTable::from_fn(3, 3, 27, |x| x[0] + 3 * x[1] + 9 * x[2]).unwrap();
        for (i, v) in f.values.iter().enumerate() {
            assert_eq!(i, *v as usize);
        }
    }
}

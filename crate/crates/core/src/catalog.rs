//! Named templates.
//!
//! Three-element names follow the associated digraph; the plain name is the
//! smaller of the two symmetric structures sharing that digraph and the
//! `plus` variant adds the rainbow orbit. Vertex labels are fixed here once:
//!
//! | name | arcs |
//! |------|------|
//! | D1 | 0→1, 0→2 |
//! | D2 | 0→1, 1→2 |
//! | T1 | 0→1, 0→2, 1→2 |
//! | T2 | 0→1, 1→2, 2→0 |
//! | Q1 | 0→1, 0→2, 1→2, 2→1 |
//! | Q2 | 0→1, 1→0, 0→2, 2→1 |
//! | Q3 | 0→1, 0→2, 2→0, 2→1 |
//! | C  | 0→1, 1→0, 0→2, 2→0, 2→1 |
//! | S  | all six arcs |

use std::fmt;
use std::str::FromStr;

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::structure::{plus_closure, RelStructure};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    OneInThree,
    Nae,
    D1,
    D2,
    T1,
    T2,
    Q1,
    Q2,
    Q3,
    C,
    S,
    Ch,
    /// `LO_k`
    LinearOrder(usize),
    /// `NAE_k`
    NaeK(usize),
}

/// A template name, optionally with the rainbow (`plus`) suffix.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TemplateName {
    pub family: Family,
    pub plus: bool,
}

const FIXED: [(&str, Family); 12] = [
    ("1in3", Family::OneInThree),
    ("NAE", Family::Nae),
    ("D1", Family::D1),
    ("D2", Family::D2),
    ("T1", Family::T1),
    ("T2", Family::T2),
    ("Q1", Family::Q1),
    ("Q2", Family::Q2),
    ("Q3", Family::Q3),
    ("C", Family::C),
    ("S", Family::S),
    ("CH", Family::Ch),
];

impl TemplateName {
    pub const fn new(family: Family) -> Self {
        TemplateName { family, plus: false }
    }

    pub const fn plus(family: Family) -> Self {
        TemplateName { family, plus: true }
    }

    /// The eleven digraph-named templates (1in3, NAE and the nine
    /// three-element names), in table order.
    pub fn table_names() -> Vec<TemplateName> {
        FIXED[..11].iter().map(|&(_, f)| TemplateName::new(f)).collect()
    }

    pub fn build(&self) -> Result<RelStructure> {
        let base = match self.family {
            Family::OneInThree => from_arcs(2, &[(0, 1)]),
            Family::Nae => from_arcs(2, &[(0, 1), (1, 0)]),
            Family::D1 => from_arcs(3, &[(0, 1), (0, 2)]),
            Family::D2 => from_arcs(3, &[(0, 1), (1, 2)]),
            Family::T1 => from_arcs(3, &[(0, 1), (0, 2), (1, 2)]),
            Family::T2 => from_arcs(3, &[(0, 1), (1, 2), (2, 0)]),
            Family::Q1 => from_arcs(3, &[(0, 1), (0, 2), (1, 2), (2, 1)]),
            Family::Q2 => from_arcs(3, &[(0, 1), (1, 0), (0, 2), (2, 1)]),
            Family::Q3 => from_arcs(3, &[(0, 1), (0, 2), (2, 0), (2, 1)]),
            Family::C => from_arcs(3, &[(0, 1), (1, 0), (0, 2), (2, 0), (2, 1)]),
            Family::S => from_arcs(3, &[(0, 1), (1, 0), (0, 2), (2, 0), (1, 2), (2, 1)]),
            Family::Ch => from_arcs(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]),
            Family::LinearOrder(k) => {
                check_k("LO", k)?;
                linear_order(k)
            }
            Family::NaeK(k) => {
                check_k("NAE", k)?;
                nae(k)
            }
        }?;
        if self.plus {
            plus_closure(&base)
        } else {
            Ok(base)
        }
    }
}

fn check_k(name: &str, k: usize) -> Result<()> {
    if k < 2 {
        Err(Error::BadTemplateParameter {
            name: name.to_string(),
            k,
        })
    } else {
        Ok(())
    }
}

/// Symmetric structure whose relation is the orbits of `(b, b, b')` for each arc.
fn from_arcs(k: usize, arcs: &[(usize, usize)]) -> Result<RelStructure> {
    let tuples: Vec<Vec<usize>> = arcs
        .iter()
        .flat_map(|&(b, c)| [b, b, c].into_iter().permutations(3))
        .collect();
    crate::structure::make_structure(k, vec![tuples])
}

/// If two entries equal `b`, the third is strictly greater; all-distinct triples allowed.
fn linear_order(k: usize) -> Result<RelStructure> {
    let mut tuples = Vec::new();
    for t in (0..3).map(|_| 0..k).multi_cartesian_product() {
        let ok = if t[0] == t[1] {
            t[2] > t[0]
        } else if t[0] == t[2] {
            t[1] > t[0]
        } else if t[1] == t[2] {
            t[0] > t[1]
        } else {
            true
        };
        if ok {
            tuples.push(t);
        }
    }
    crate::structure::make_structure(k, vec![tuples])
}

fn nae(k: usize) -> Result<RelStructure> {
    let tuples = (0..3)
        .map(|_| 0..k)
        .multi_cartesian_product()
        .filter(|t| !(t[0] == t[1] && t[1] == t[2]))
        .collect();
    crate::structure::make_structure(k, vec![tuples])
}

impl FromStr for TemplateName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let unknown = || Error::UnknownTemplate(s.to_string());
        let (stem, plus) = if let Some(stem) = s.strip_suffix("plus") {
            (stem, true)
        } else if let Some(stem) = s.strip_suffix('+') {
            (stem, true)
        } else {
            (s, false)
        };
        if let Some((family, k)) = stem.split_once('_') {
            let k: usize = k.parse().map_err(|_| unknown())?;
            let family = match family {
                "LO" => Family::LinearOrder(k),
                "NAE" => Family::NaeK(k),
                _ => return Err(unknown()),
            };
            check_k(if matches!(family, Family::LinearOrder(_)) { "LO" } else { "NAE" }, k)?;
            return Ok(TemplateName { family, plus });
        }
        FIXED
            .iter()
            .find(|(name, _)| *name == stem)
            .map(|&(_, family)| TemplateName { family, plus })
            .ok_or_else(unknown)
    }
}

impl fmt::Display for TemplateName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.family {
            Family::LinearOrder(k) => write!(f, "LO_{k}")?,
            Family::NaeK(k) => write!(f, "NAE_{k}")?,
            fam => {
                let name = FIXED.iter().find(|(_, g)| *g == fam).map(|(n, _)| *n).unwrap_or("?");
                f.write_str(name)?
            }
        }
        if self.plus {
            f.write_str("plus")?;
        }
        Ok(())
    }
}

/// Builds a template by name, e.g. `"D2plus"`, `"LO_3"` or `"CH"`.
pub fn named_template(name: &str) -> Result<RelStructure> {
    name.parse::<TemplateName>()?.build()
}

/// Every nonempty symmetric ternary relation on a `k`-element domain,
/// ordered by the bitmask of included orbits.
pub fn all_symmetric_ternary(k: usize) -> Vec<RelStructure> {
    let orbits: Vec<[usize; 3]> = (0..k)
        .combinations_with_replacement(3)
        .map(|c| [c[0], c[1], c[2]])
        .collect();
    let count = orbits.len();
    (1u64..(1 << count))
        .map(|mask| {
            let tuples: Vec<Vec<usize>> = orbits
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .flat_map(|(_, o)| o.iter().copied().permutations(3))
                .collect();
            crate::structure::make_structure(k, vec![tuples]).expect("orbits are valid tuples")
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structure::{associated_digraph, symmetrize};

    fn orbits(name: &str) -> Vec<[usize; 3]> {
        named_template(name).unwrap().orbit_representatives().unwrap()
    }

    #[test]
    fn d2plus_orbits() {
        assert_eq!(orbits("D2plus"), vec![[0, 0, 1], [0, 1, 2], [1, 1, 2]]);
        assert_eq!(named_template("D2plus").unwrap().domain_size(), 3);
    }

    #[test]
    fn lo2_is_one_in_three() {
        assert_eq!(named_template("LO_2").unwrap(), named_template("1in3").unwrap());
        assert_eq!(named_template("LO_3").unwrap(), named_template("T1plus").unwrap());
        assert_eq!(named_template("NAE_2").unwrap(), named_template("NAE").unwrap());
    }

    #[test]
    fn ch_matches_listed_tuples() {
        let ch = named_template("CH").unwrap();
        assert_eq!(ch.domain_size(), 4);
        assert_eq!(orbits("CH"), vec![[0, 0, 1], [0, 3, 3], [1, 1, 2], [2, 2, 3]]);
        assert_eq!(ch.ternary_relation().unwrap().len(), 12);
    }

    #[test]
    fn section_relations() {
        assert_eq!(orbits("D1plus"), vec![[0, 0, 1], [0, 0, 2], [0, 1, 2]]);
        assert_eq!(orbits("T1"), vec![[0, 0, 1], [0, 0, 2], [1, 1, 2]]);
        let t2 = named_template("T2").unwrap();
        let rel = t2.ternary_relation().unwrap();
        for t in (0..3).map(|_| 0..3usize).multi_cartesian_product() {
            assert_eq!(rel.contains(&t), (t[0] + t[1] + t[2]) % 3 == 1, "{t:?}");
        }
    }

    #[test]
    fn names_parse_and_display() {
        for name in ["1in3", "NAE", "D1plus", "LO_3", "NAE_4", "CHplus", "S"] {
            assert_eq!(name.parse::<TemplateName>().unwrap().to_string(), name);
        }
        assert_eq!("T1+".parse::<TemplateName>().unwrap().to_string(), "T1plus");
        assert!(matches!(named_template("NOSUCH"), Err(Error::UnknownTemplate(_))));
        assert!(matches!(named_template("LO_1"), Err(Error::BadTemplateParameter { .. })));
        assert!(matches!(named_template("LO"), Err(Error::UnknownTemplate(_))));
    }

    #[test]
    fn plain_names_are_the_smaller_structure() {
        for name in TemplateName::table_names() {
            let s = name.build().unwrap();
            assert!(s.is_symmetric());
            assert!(!s.has_constant_tuple());
            let plus = TemplateName::plus(name.family).build().unwrap();
            assert_eq!(associated_digraph(&s).unwrap(), associated_digraph(&plus).unwrap());
            assert!(s.ternary_relation().unwrap().len() <= plus.ternary_relation().unwrap().len());
            assert_eq!(symmetrize(&s), s);
        }
    }

    #[test]
    fn enumerates_all_symmetric_relations() {
        let all = all_symmetric_ternary(3);
        assert_eq!(all.len(), 1023);
        assert!(all.iter().all(RelStructure::is_symmetric));
    }
}

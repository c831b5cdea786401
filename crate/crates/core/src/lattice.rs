//! Hom-equivalence classes and the Hasse diagram of the homomorphism order.

use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hom::hom_exists;
use crate::structure::RelStructure;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HomClass {
    /// Indices into the input list, ascending.
    pub members: Vec<usize>,
    /// Member with the lexicographically smallest encoding.
    pub representative: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HomLattice {
    /// Classes sorted by the encoding of their representative.
    pub classes: Vec<HomClass>,
    /// `(lower, upper)` class indices: `lower -> upper` with nothing strictly between.
    pub cover_edges: BTreeSet<(usize, usize)>,
    /// `order[i][j]` iff class `i` maps to class `j`.
    pub order: Vec<Vec<bool>>,
}

impl HomLattice {
    /// Index of the class containing input structure `i`.
    pub fn class_of(&self, i: usize) -> usize {
        self.classes
            .iter()
            .position(|c| c.members.contains(&i))
            .expect("classes partition the input")
    }

    pub fn below(&self, a: usize, b: usize) -> bool {
        self.order[a][b]
    }

    /// Graphviz rendering. `labels[i]` names input structure `i`; classes
    /// without a named member are labelled by their representative's encoding.
    pub fn to_dot(&self, structures: &[RelStructure], labels: &[Option<String>]) -> String {
        let mut out = String::from("digraph homlattice {\n  rankdir=BT;\n  node [shape=box];\n");
        for (ci, class) in self.classes.iter().enumerate() {
            let names: Vec<&str> = class
                .members
                .iter()
                .filter_map(|&m| labels.get(m).and_then(|l| l.as_deref()))
                .collect();
            let label = if names.is_empty() {
                structures[class.representative].encoding()
            } else {
                names.join(" = ")
            };
            out.push_str(&format!("  c{ci} [label=\"{}\"];\n", label.replace('"', "'")));
        }
        for &(lo, hi) in &self.cover_edges {
            out.push_str(&format!("  c{lo} -> c{hi};\n"));
        }
        out.push_str("}\n");
        out
    }
}

/// Groups structures by mutual homomorphism and computes cover edges.
/// Pairwise tests run in parallel; the result does not depend on scheduling.
pub fn hom_lattice(structures: &[RelStructure]) -> Result<HomLattice> {
    if let Some(first) = structures.first() {
        if structures.iter().any(|s| !s.same_signature(first)) {
            return Err(Error::SignatureMismatch);
        }
    }
    let n = structures.len();
    let reach: Vec<Vec<bool>> = (0..n)
        .into_par_iter()
        .map(|i| {
            (0..n)
                .map(|j| i == j || hom_exists(&structures[i], &structures[j]).expect("signatures checked"))
                .collect()
        })
        .collect();

    let mut class_index = vec![usize::MAX; n];
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for i in 0..n {
        if class_index[i] != usize::MAX {
            continue;
        }
        let members: Vec<usize> = (i..n).filter(|&j| reach[i][j] && reach[j][i]).collect();
        for &m in &members {
            class_index[m] = groups.len();
        }
        groups.push(members);
    }
    let mut classes: Vec<HomClass> = groups
        .into_iter()
        .map(|members| {
            let representative = *members
                .iter()
                .min_by(|&&a, &&b| structures[a].cmp(&structures[b]).then(a.cmp(&b)))
                .unwrap();
            HomClass {
                members,
                representative,
            }
        })
        .collect();
    classes.sort_by(|a, b| structures[a.representative].cmp(&structures[b.representative]));

    let m = classes.len();
    let order: Vec<Vec<bool>> = (0..m)
        .map(|a| {
            (0..m)
                .map(|b| reach[classes[a].representative][classes[b].representative])
                .collect()
        })
        .collect();
    let mut cover_edges = BTreeSet::new();
    for a in 0..m {
        for b in 0..m {
            if a == b || !order[a][b] {
                continue;
            }
            let between = (0..m).any(|c| c != a && c != b && order[a][c] && order[c][b]);
            if !between {
                cover_edges.insert((a, b));
            }
        }
    }
    Ok(HomLattice {
        classes,
        cover_edges,
        order,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::named_template;

    #[test]
    fn single_structure() {
        let l = hom_lattice(&[named_template("T1").unwrap()]).unwrap();
        assert_eq!(l.classes.len(), 1);
        assert!(l.cover_edges.is_empty());
    }

    #[test]
    fn chain_of_three() {
        let s: Vec<_> = ["NAE", "1in3", "LO_3", "T1plus"]
            .iter()
            .map(|n| named_template(n).unwrap())
            .collect();
        let l = hom_lattice(&s).unwrap();
        // LO_3 and T1plus coincide; 1in3 < LO_3 and 1in3 < NAE, LO_3 and NAE incomparable.
        assert_eq!(l.classes.len(), 3);
        let (one, nae, lo) = (l.class_of(1), l.class_of(0), l.class_of(2));
        assert_eq!(l.class_of(3), lo);
        assert!(l.cover_edges.contains(&(one, nae)));
        assert!(l.cover_edges.contains(&(one, lo)));
        assert_eq!(l.cover_edges.len(), 2);
        let dot = l.to_dot(&s, &[Some("NAE".into()), Some("1in3".into()), Some("LO_3".into()), None]);
        assert!(dot.contains("label=\"LO_3\""));
        assert_eq!(dot.matches("->").count(), 2);
    }

    #[test]
    fn mixed_signatures_rejected() {
        let binary = crate::structure::make_structure(2, vec![vec![vec![0, 1]]]).unwrap();
        assert_eq!(
            hom_lattice(&[binary, named_template("NAE").unwrap()]).unwrap_err(),
            Error::SignatureMismatch
        );
    }
}

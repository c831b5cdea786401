//! Bounded-arity checks of structural statements about polymorphisms of
//! `(1in3, B)`: closed properties of single tables, selector conditions along
//! chains of minors, and Kneser graph colourings.

mod kneser;
mod props;
mod selector;

use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hom::TemplatePair;
use crate::poly::enumerate_polymorphisms;

pub use kneser::{chromatic_number, color_graph, kneser_graph, Graph};
pub use props::{compute_ef, evaluate, PropertyId, Violation};
pub use selector::{verify_selector, ChainWitness, Selection, Selector, SelectorReport};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub arity: usize,
    /// `values[mask]`, as in [`crate::poly::PolyTable::values`].
    pub values: Vec<u8>,
    pub witnesses: Vec<String>,
    pub reason: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct PropertyReport {
    pub template: String,
    pub property: String,
    pub arities: Vec<usize>,
    /// Polymorphisms examined at each arity.
    pub counts: Vec<usize>,
    pub counterexamples: Vec<Counterexample>,
    pub elapsed_ms: u128,
}

impl PropertyReport {
    pub fn holds(&self) -> bool {
        self.counterexamples.is_empty()
    }
}

/// Evaluates `id` on every polymorphism of arity `1..=max_arity`.
/// Counterexamples come out in enumeration order.
pub fn check_property(pair: &TemplatePair, template: &str, id: PropertyId, max_arity: usize) -> Result<PropertyReport> {
    if max_arity == 0 {
        return Err(Error::ZeroArityFunction);
    }
    let start = Instant::now();
    let mut counts = Vec::new();
    let mut counterexamples = Vec::new();
    for n in 1..=max_arity {
        let tables: Vec<_> = enumerate_polymorphisms(pair, n, max_arity)?.collect();
        counts.push(tables.len());
        let found: Vec<Counterexample> = tables
            .par_iter()
            .filter_map(|f| {
                evaluate(id, f).map(|v| Counterexample {
                    arity: n,
                    values: f.values().to_vec(),
                    witnesses: v.witnesses,
                    reason: v.reason,
                })
            })
            .collect();
        counterexamples.extend(found);
    }
    Ok(PropertyReport {
        template: template.to_string(),
        property: id.to_string(),
        arities: (1..=max_arity).collect(),
        counts,
        counterexamples,
        elapsed_ms: start.elapsed().as_millis(),
    })
}

use serde::Serialize;

/// How a colour was forced or refuted.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Justification {
    /// Compatibility on a triple of cells; the affected cell is listed last.
    Triple { cells: [usize; 3] },
    /// Tentatively assigning the colour and propagating ended in a contradiction.
    Probe { steps: Vec<Event> },
    /// The remaining colours were all refuted by probes.
    Exclusion,
    /// Removed by a seed, branch or probe assumption.
    Decision,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "event", rename_all = "snake_case")]
pub enum Event {
    Seed {
        cell: usize,
        color: usize,
    },
    Branch {
        cell: usize,
        color: usize,
    },
    Force {
        cell: usize,
        color: usize,
        via: Justification,
    },
    /// Probes removed some colours of a cell without deciding it.
    Refute {
        cell: usize,
        color: usize,
        via: Justification,
    },
    /// Every colour of `cell` is excluded; `refutations` gives one reason per colour.
    Contradiction {
        cell: usize,
        refutations: Vec<(usize, Justification)>,
    },
}

/// Cell naming for rendering.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "shape", rename_all = "snake_case")]
pub enum TableShape {
    /// Cells are weights `0..=n`, shown as `f(w)`.
    Symmetric { arity: usize },
    /// Cell `w1 * (k2 + 1) + w2`, shown as `g(w1,w2)`.
    Block { k1: usize, k2: usize },
}

impl TableShape {
    pub fn cell_name(&self, cell: usize) -> String {
        match *self {
            TableShape::Symmetric { .. } => format!("f({cell})"),
            TableShape::Block { k2, .. } => format!("g({},{})", cell / (k2 + 1), cell % (k2 + 1)),
        }
    }

    pub fn triple_name(&self, cells: &[usize; 3]) -> String {
        match *self {
            TableShape::Symmetric { .. } => format!("({},{},{})", cells[0], cells[1], cells[2]),
            TableShape::Block { k2, .. } => {
                let parts: Vec<String> = cells
                    .iter()
                    .map(|c| format!("({},{})", c / (k2 + 1), c % (k2 + 1)))
                    .collect();
                format!("({})", parts.join(","))
            }
        }
    }
}

/// Ordered event log of propagation and search.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PropagationTrace {
    pub shape: TableShape,
    pub events: Vec<Event>,
}

impl PropagationTrace {
    pub fn new(shape: TableShape) -> Self {
        PropagationTrace {
            shape,
            events: Vec::new(),
        }
    }

    /// `(cell, color)` of every `Force` event at top level, in order.
    pub fn forced(&self) -> Vec<(usize, usize)> {
        self.events
            .iter()
            .filter_map(|e| match e {
                Event::Force { cell, color, .. } => Some((*cell, *color)),
                _ => None,
            })
            .collect()
    }

    /// Cell of the first top-level contradiction.
    pub fn contradiction(&self) -> Option<usize> {
        self.events.iter().find_map(|e| match e {
            Event::Contradiction { cell, .. } => Some(*cell),
            _ => None,
        })
    }

    /// One line per event; nested probe steps are indented.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for e in &self.events {
            self.render(e, 0, &mut out);
        }
        out
    }

    fn render(&self, e: &Event, depth: usize, out: &mut String) {
        let pad = "  ".repeat(depth);
        let s = &self.shape;
        match e {
            Event::Seed { cell, color } => out.push_str(&format!("{pad}seed {} = {color}\n", s.cell_name(*cell))),
            Event::Branch { cell, color } => {
                out.push_str(&format!("{pad}branch {} = {color}\n", s.cell_name(*cell)))
            }
            Event::Force { cell, color, via } => {
                let head = format!("{pad}force {} = {color}", s.cell_name(*cell));
                self.render_via(&head, via, depth, out);
            }
            Event::Refute { cell, color, via } => {
                let head = format!("{pad}refute {} = {color}", s.cell_name(*cell));
                self.render_via(&head, via, depth, out);
            }
            Event::Contradiction { cell, refutations } => {
                out.push_str(&format!("{pad}contradiction at {}\n", s.cell_name(*cell)));
                for (color, via) in refutations {
                    let head = format!("{pad}  {} = {color} refuted", s.cell_name(*cell));
                    self.render_via(&head, via, depth + 1, out);
                }
            }
        }
    }

    fn render_via(&self, head: &str, via: &Justification, depth: usize, out: &mut String) {
        match via {
            Justification::Triple { cells } => {
                out.push_str(&format!("{head} via {}\n", self.shape.triple_name(cells)))
            }
            Justification::Exclusion => out.push_str(&format!("{head} via exclusion\n")),
            Justification::Decision => out.push_str(&format!("{head} by assumption\n")),
            Justification::Probe { steps } => {
                out.push_str(&format!("{head} by probe\n"));
                for step in steps {
                    self.render(step, depth + 2, out);
                }
            }
        }
    }
}

impl PropagationTrace {
    /// The part of a derivation that the first top-level contradiction
    /// depends on: seeds, forcings and refutations are kept only if some
    /// justification of the contradiction (transitively) cites them. Probe
    /// sub-derivations are pruned the same way. `None` without a contradiction.
    pub fn proof(&self) -> Option<PropagationTrace> {
        let end = self
            .events
            .iter()
            .position(|e| matches!(e, Event::Contradiction { .. }))?;
        let (events, _) = prune(&self.events[..=end]);
        Some(PropagationTrace {
            shape: self.shape,
            events,
        })
    }
}

/// Prunes a derivation ending in a contradiction. Returns the kept events and
/// the cells it depends on that are not decided inside it.
fn prune(events: &[Event]) -> (Vec<Event>, std::collections::BTreeSet<usize>) {
    use std::collections::BTreeSet;
    let mut needed: BTreeSet<usize> = BTreeSet::new();
    let mut needed_refutes: BTreeSet<usize> = BTreeSet::new();
    let mut kept: Vec<Event> = Vec::new();
    let deps = |via: &Justification, cell: usize, needed: &mut BTreeSet<usize>, refutes: &mut BTreeSet<usize>| -> Justification {
        match via {
            Justification::Triple { cells } => {
                needed.insert(cells[0]);
                needed.insert(cells[1]);
                via.clone()
            }
            Justification::Probe { steps } => {
                let (inner, free) = prune(steps);
                // the probed cell itself is an assumption inside the probe
                needed.extend(free.into_iter().filter(|&c| c != cell));
                Justification::Probe { steps: inner }
            }
            Justification::Exclusion => {
                refutes.insert(cell);
                via.clone()
            }
            Justification::Decision => via.clone(),
        }
    };
    for e in events.iter().rev() {
        match e {
            Event::Contradiction { cell, refutations } if kept.is_empty() => {
                let refutations = refutations
                    .iter()
                    .map(|(c, via)| (*c, deps(via, *cell, &mut needed, &mut needed_refutes)))
                    .collect();
                kept.push(Event::Contradiction {
                    cell: *cell,
                    refutations,
                });
            }
            Event::Force { cell, color, via } if needed.remove(cell) => {
                let via = deps(via, *cell, &mut needed, &mut needed_refutes);
                kept.push(Event::Force {
                    cell: *cell,
                    color: *color,
                    via,
                });
            }
            Event::Refute { cell, color, via } if needed_refutes.contains(cell) => {
                let via = deps(via, *cell, &mut needed, &mut needed_refutes);
                kept.push(Event::Refute {
                    cell: *cell,
                    color: *color,
                    via,
                });
            }
            Event::Seed { cell, .. } | Event::Branch { cell, .. } if needed.remove(cell) => {
                kept.push(e.clone());
            }
            _ => {}
        }
    }
    kept.reverse();
    (kept, needed)
}

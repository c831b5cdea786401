use std::error::Error as StdError;
use std::io::Read;
use std::path::Path;
use std::time::{Duration, Instant};

use pcsp_core::catalog::all_symmetric_ternary;
use pcsp_core::hom::check_coloring;
use pcsp_core::instance::coloring_to_text;
use pcsp_core::lemma::{check_property, verify_selector, PropertyId, PropertyReport, Selector, SelectorReport};
use pcsp_core::poly::{enumerate_polymorphisms, is_polymorphism, DEFAULT_ARITY_BOUND, MAX_TABLE_ARITY};
use pcsp_core::sym::{
    is_block_symmetric_polymorphism, is_symmetric_polymorphism, propagate, search_block_symmetric, search_symmetric,
    BlockSymTable, PropagationLevel, SearchOptions, SearchOutcome, SearchReport, SymTable, VariableOrder,
};
use pcsp_core::tract::{classify_template, solve_via_relaxation, Route};
use pcsp_core::{
    associated_digraph, generate_planted, hom_lattice, hom_order_compare, named_template, plus_closure, Error,
    Instance, PolyTable, RelStructure, TemplateName, TemplatePair,
};
use serde_json::json;

use crate::{Cli, Command, HomCmd, Order, PolyCmd, Prefer, SearchFlags, TemplateCmd, VerifyCmd};

type Res<T> = std::result::Result<T, Box<dyn StdError>>;

const POSITIVE: u8 = 0;
const NEGATIVE: u8 = 1;
const ABORTED: u8 = 2;

pub fn run(cli: &Cli) -> Res<u8> {
    let ctx = Ctx {
        json: cli.json,
        budget: cli.time_budget.map(Duration::from_secs_f64),
    };
    match &cli.command {
        Command::Template(t) => ctx.template(t),
        Command::Hom(h) => ctx.hom(h),
        Command::Poly(p) => ctx.poly(p),
        Command::Verify(v) => ctx.verify(v),
        Command::Solve { target, file, prefer } => ctx.solve(target, file.as_deref(), *prefer),
        Command::Gen { nv, ne, seed } => ctx.gen(*nv, *ne, *seed),
    }
}

struct Ctx {
    json: bool,
    budget: Option<Duration>,
}

/// A template by catalog name, or a structure file when the path exists.
fn load(arg: &str) -> Res<(String, RelStructure)> {
    if Path::new(arg).is_file() {
        let text = std::fs::read_to_string(arg)?;
        return Ok((arg.to_string(), RelStructure::from_text(&text)?));
    }
    let name: TemplateName = arg.parse()?;
    Ok((name.to_string(), name.build()?))
}

fn pair_of(source: &str, target: &str) -> Res<(String, TemplatePair)> {
    let (_, a) = load(source)?;
    let (name, b) = load(target)?;
    Ok((name, TemplatePair::new(a, b)?))
}

fn one_in_three(target: &str) -> Res<(String, TemplatePair)> {
    pair_of("1in3", target)
}

fn check_bound(max_arity: usize, force: bool) -> Res<usize> {
    let bound = if force { MAX_TABLE_ARITY } else { DEFAULT_ARITY_BOUND };
    if max_arity > bound {
        return Err(Box::new(Error::BoundExceeded {
            requested: max_arity,
            bound,
        }));
    }
    Ok(bound)
}

fn set_list(values: impl IntoIterator<Item = String>) -> String {
    values.into_iter().collect::<Vec<_>>().join(" ")
}

impl Ctx {
    fn print_json(&self, v: serde_json::Value) -> Res<()> {
        println!("{}", serde_json::to_string_pretty(&v)?);
        Ok(())
    }

    fn template(&self, cmd: &TemplateCmd) -> Res<u8> {
        match cmd {
            TemplateCmd::Classify { template } => {
                let (name, b) = load(template)?;
                let label = classify_template(&b)?;
                if self.json {
                    self.print_json(json!({"template": name, "complexity": label.to_string()}))?;
                } else {
                    println!("{label}");
                }
            }
            TemplateCmd::Show { template } => {
                let (name, b) = load(template)?;
                let tuples: Vec<String> = match b.orbit_representatives() {
                    Ok(reps) => reps.iter().map(|t| format!("({},{},{})", t[0], t[1], t[2])).collect(),
                    Err(_) => b.relations().iter().flat_map(|r| r.tuples().map(|t| format!("{t:?}"))).collect(),
                };
                let arcs: Option<Vec<String>> = associated_digraph(&b)
                    .ok()
                    .map(|d| d.arcs().map(|(u, v)| format!("{u}->{v}")).collect());
                let plus_closed = plus_closure(&b).ok().map(|p| p == b);
                let label = classify_template(&b).ok().map(|c| c.to_string());
                if self.json {
                    return self
                        .print_json(json!({
                            "template": name,
                            "domain": b.domain_size(),
                            "symmetric": b.is_symmetric(),
                            "orbits": tuples,
                            "digraph": arcs,
                            "plus_closed": plus_closed,
                            "complexity": label,
                        }))
                        .map(|_| POSITIVE);
                }
                println!("template: {name}");
                println!("domain: {}", b.domain_size());
                println!("symmetric: {}", b.is_symmetric());
                println!("orbits: {}", set_list(tuples));
                if let Some(arcs) = arcs {
                    println!("digraph: {}", set_list(arcs));
                }
                if let Some(p) = plus_closed {
                    println!("plus-closed: {}", if p { "yes" } else { "no" });
                }
                if let Some(l) = label {
                    println!("complexity: {l}");
                }
            }
        }
        Ok(POSITIVE)
    }

    fn hom(&self, cmd: &HomCmd) -> Res<u8> {
        match cmd {
            HomCmd::Compare { a, b } => {
                let (na, sa) = load(a)?;
                let (nb, sb) = load(b)?;
                let order = hom_order_compare(&sa, &sb)?;
                if self.json {
                    self.print_json(json!({"a": na, "b": nb, "order": order}))?;
                } else {
                    println!("{order}");
                }
                Ok(POSITIVE)
            }
            HomCmd::Lattice { named3: _, all3, out } => {
                let (structures, labels) = if *all3 { all_three_element() } else { named_three_element() }?;
                let lattice = hom_lattice(&structures)?;
                let dot = lattice.to_dot(&structures, &labels);
                match out {
                    Some(path) => std::fs::write(path, &dot)?,
                    None if !self.json => print!("{dot}"),
                    None => {}
                }
                if self.json {
                    self.print_json(json!({
                        "structures": structures.len(),
                        "classes": lattice.classes.len(),
                        "cover_edges": lattice.cover_edges.len(),
                        "out": out,
                        "lattice": lattice,
                    }))?;
                } else if out.is_some() {
                    println!(
                        "{} structures, {} classes, {} cover edges",
                        structures.len(),
                        lattice.classes.len(),
                        lattice.cover_edges.len()
                    );
                }
                Ok(POSITIVE)
            }
        }
    }

    fn options(&self, flags: &SearchFlags) -> SearchOptions {
        SearchOptions {
            wlog: !flags.no_wlog,
            probing: !flags.no_probing,
            order: match flags.order {
                Order::Lowest => VariableOrder::Lowest,
                Order::MinDomain => VariableOrder::MinDomain,
            },
            time_budget: self.budget,
            record_trace: flags.trace.is_some(),
        }
    }

    fn report<T: serde::Serialize>(
        &self,
        r: &SearchReport<T>,
        flags: &SearchFlags,
        render: impl Fn(&T) -> String,
    ) -> Res<u8> {
        if let (Some(path), Some(trace)) = (&flags.trace, &r.trace) {
            std::fs::write(path, serde_json::to_string_pretty(trace)?)?;
        }
        let code = match r.outcome {
            SearchOutcome::Found(_) => POSITIVE,
            SearchOutcome::NotFound => NEGATIVE,
            SearchOutcome::Aborted => ABORTED,
        };
        if self.json {
            self.print_json(json!({
                "outcome": match &r.outcome {
                    SearchOutcome::Found(_) => "found",
                    SearchOutcome::NotFound => "none",
                    SearchOutcome::Aborted => "aborted",
                },
                "table": r.found(),
                "nodes": r.nodes,
                "elapsed_ms": r.elapsed.as_millis(),
            }))?;
        } else {
            match &r.outcome {
                SearchOutcome::Found(t) => print!("{}", render(t)),
                SearchOutcome::NotFound => println!("none"),
                SearchOutcome::Aborted => println!("aborted: time budget exhausted"),
            }
            eprintln!("nodes: {}, elapsed: {} ms", r.nodes, r.elapsed.as_millis());
        }
        Ok(code)
    }

    fn poly(&self, cmd: &PolyCmd) -> Res<u8> {
        match cmd {
            PolyCmd::SearchSym {
                source,
                target,
                n,
                flags,
            } => {
                let (_, pair) = pair_of(source, target)?;
                let r = search_symmetric(&pair, *n, &self.options(flags))?;
                self.report(&r, flags, SymTable::to_text)
            }
            PolyCmd::SearchBlock {
                source,
                target,
                k1,
                k2,
                flags,
            } => {
                let (_, pair) = pair_of(source, target)?;
                let r = search_block_symmetric(&pair, *k1, *k2, &self.options(flags))?;
                self.report(&r, flags, BlockSymTable::to_text)
            }
            PolyCmd::Enumerate {
                source,
                target,
                n,
                count,
                force,
            } => {
                let bound = check_bound(*n, *force)?;
                let (_, pair) = pair_of(source, target)?;
                let start = Instant::now();
                let mut total = 0usize;
                let mut tables = Vec::new();
                for f in enumerate_polymorphisms(&pair, *n, bound)? {
                    total += 1;
                    if self.json && !count {
                        tables.push(f.values().to_vec());
                    } else if !count {
                        println!("{f}");
                    }
                    if self.budget.is_some_and(|b| start.elapsed() > b) {
                        eprintln!("aborted after {total} tables");
                        return Ok(ABORTED);
                    }
                }
                if self.json {
                    self.print_json(json!({"arity": n, "count": total, "tables": tables}))?;
                } else {
                    println!("count: {total}");
                }
                Ok(if total > 0 { POSITIVE } else { NEGATIVE })
            }
            PolyCmd::Verify {
                appendix_b,
                table,
                target,
            } => {
                if *appendix_b {
                    return self.appendix_b();
                }
                let (Some(table), Some(target)) = (table, target) else {
                    return Err("poly verify needs --appendix-b or --table with --target".into());
                };
                let (_, pair) = one_in_three(target)?;
                let text = std::fs::read_to_string(table)?;
                let head = text
                    .lines()
                    .map(|l| l.split('#').next().unwrap_or("").trim())
                    .find(|l| !l.is_empty())
                    .and_then(|l| l.split_whitespace().next())
                    .unwrap_or("");
                let ok = match head {
                    "poly" => is_polymorphism(&PolyTable::from_text(&text)?, &pair)?,
                    "sym" => is_symmetric_polymorphism(&SymTable::from_text(&text)?, &pair)?,
                    "block" => is_block_symmetric_polymorphism(&BlockSymTable::from_text(&text)?, &pair)?,
                    other => return Err(format!("unknown table kind `{other}`").into()),
                };
                if self.json {
                    self.print_json(json!({"table": table, "polymorphism": ok}))?;
                } else {
                    println!("{}", if ok { "polymorphism" } else { "not a polymorphism" });
                }
                Ok(if ok { POSITIVE } else { NEGATIVE })
            }
        }
    }

    /// Seeds `f(8) = 0` for a symmetric CHplus polymorphism of arity 23 and
    /// propagates with probing until `f(6)` has no value left.
    fn appendix_b(&self) -> Res<u8> {
        const EXPECTED: [(usize, usize); 7] = [(7, 1), (9, 2), (5, 3), (13, 0), (2, 1), (14, 2), (0, 3)];
        let (_, pair) = one_in_three("CHplus")?;
        let mut seed = SymTable::new(23, 4);
        seed.set(8, 0)?;
        let out = propagate(&pair, &seed, PropagationLevel::Probing)?;
        let forced = out.trace.forced();
        let listed: Vec<(usize, usize)> = forced
            .iter()
            .copied()
            .filter(|(w, _)| EXPECTED.iter().any(|(e, _)| e == w))
            .collect();
        let reproduced = listed == EXPECTED && out.contradiction == Some(6);
        let proof = out.trace.proof();
        if self.json {
            self.print_json(json!({
                "arity": 23,
                "target": "CHplus",
                "seed": {"weight": 8, "value": 0},
                "forced": forced,
                "contradiction": out.contradiction,
                "reproduced": reproduced,
                "trace": out.trace,
                "proof": proof,
            }))?;
        } else {
            println!("# symmetric polymorphism of (1in3, CHplus), arity 23, seed f(8) = 0");
            print!("{}", out.trace.to_text());
            if let Some(p) = &proof {
                println!("# proof: events the contradiction depends on");
                print!("{}", p.to_text());
            }
            let shown: Vec<String> = listed.iter().map(|(w, c)| format!("f({w})={c}")).collect();
            println!("forced in order: {}", shown.join(", "));
            match out.contradiction {
                Some(w) => println!("no value of f({w}) is possible"),
                None => println!("no contradiction reached"),
            }
        }
        Ok(if reproduced { POSITIVE } else { NEGATIVE })
    }

    fn verify(&self, cmd: &VerifyCmd) -> Res<u8> {
        match cmd {
            VerifyCmd::Lemmas {
                template,
                max_arity,
                property,
                force,
            } => {
                check_bound(*max_arity, *force)?;
                let (name, _) = load(template)?;
                let (_, pair) = one_in_three(template)?;
                let ids: Vec<PropertyId> = match property {
                    Some(p) => vec![p.parse()?],
                    None => PropertyId::all()
                        .into_iter()
                        .filter(|id| id.default_template() == name)
                        .collect(),
                };
                if ids.is_empty() {
                    return Err(format!("no catalog properties are stated for `{name}`; pick one with --property").into());
                }
                let start = Instant::now();
                let mut reports = Vec::new();
                for id in ids {
                    if self.budget.is_some_and(|b| start.elapsed() > b) {
                        self.lemma_output(&reports)?;
                        eprintln!("aborted: time budget exhausted");
                        return Ok(ABORTED);
                    }
                    reports.push(check_property(&pair, &name, id, *max_arity)?);
                }
                self.lemma_output(&reports)?;
                Ok(if reports.iter().all(PropertyReport::holds) { POSITIVE } else { NEGATIVE })
            }
            VerifyCmd::Selector {
                template,
                max_arity,
                selector,
                force,
            } => {
                check_bound(*max_arity, *force)?;
                let sel: Selector = match selector {
                    Some(s) => s.parse()?,
                    None => match template.parse::<Selector>() {
                        Ok(s) => s,
                        Err(_) => {
                            let (name, _) = load(template)?;
                            Selector::all()
                                .into_iter()
                                .find(|s| s.template() == name)
                                .ok_or_else(|| format!("no selector is stated for `{name}`; pick one with --selector"))?
                        }
                    },
                };
                let target = if template.parse::<Selector>().is_ok() { sel.template() } else { template.as_str() };
                let (_, pair) = one_in_three(target)?;
                let r = verify_selector(&pair, sel, *max_arity)?;
                self.selector_output(&r)?;
                Ok(if r.holds() { POSITIVE } else { NEGATIVE })
            }
        }
    }

    fn lemma_output(&self, reports: &[PropertyReport]) -> Res<()> {
        if self.json {
            return self.print_json(serde_json::to_value(reports)?);
        }
        for r in reports {
            let counts: Vec<String> = r.arities.iter().zip(&r.counts).map(|(a, c)| format!("{a}:{c}")).collect();
            if r.holds() {
                println!(
                    "{} on {}: holds (polymorphisms by arity {}; {} ms)",
                    r.property,
                    r.template,
                    counts.join(" "),
                    r.elapsed_ms
                );
            } else {
                println!("{} on {}: {} counterexamples", r.property, r.template, r.counterexamples.len());
                for c in r.counterexamples.iter().take(5) {
                    println!(
                        "  arity {} values {:?}: {} [{}]",
                        c.arity,
                        c.values,
                        c.reason,
                        c.witnesses.join(" ")
                    );
                }
            }
        }
        Ok(())
    }

    fn selector_output(&self, r: &SelectorReport) -> Res<()> {
        if self.json {
            return self.print_json(serde_json::to_value(r)?);
        }
        let counts: Vec<String> = r.counts.iter().enumerate().map(|(a, c)| format!("{}:{c}", a + 1)).collect();
        println!(
            "{} on {} (|sel| <= {}, l = {}, arity <= {})",
            r.selector, r.template, r.max_size, r.chain_length, r.max_arity
        );
        println!("polymorphisms by arity: {}", counts.join(" "));
        println!("minor steps checked: {}", r.transitions);
        println!("chains covered: {}", r.chains);
        println!("undefined: {}, oversized: {}", r.undefined.len(), r.oversized.len());
        match &r.violation {
            None => println!("chain condition: holds"),
            Some(w) => {
                println!("chain condition: violated");
                for (i, f) in w.functions.iter().enumerate() {
                    println!("  f{i} = {:?}, sel = {}", f, w.selections[i]);
                    if let Some(m) = w.maps.get(i) {
                        println!("  alpha{i},{} = {:?}", i + 1, m);
                    }
                }
            }
        }
        Ok(())
    }

    fn solve(&self, target: &str, file: Option<&str>, prefer: Prefer) -> Res<u8> {
        let text = match file {
            Some(path) => std::fs::read_to_string(path)?,
            None => {
                let mut s = String::new();
                std::io::stdin().read_to_string(&mut s)?;
                s
            }
        };
        let inst = Instance::from_text(&text)?;
        let (name, b) = load(target)?;
        let route = match prefer {
            Prefer::T2 => Route::T2,
            Prefer::Nae => Route::Nae,
        };
        let relaxed = solve_via_relaxation(&inst, &b, route)?;
        let coloring = match &relaxed.coloring {
            Some(c) if check_coloring(&inst, c, &b)? => Some(c),
            Some(_) => return Err("relaxation produced an invalid coloring".into()),
            None => None,
        };
        if self.json {
            self.print_json(json!({"target": name, "route": relaxed.route, "coloring": coloring}))?;
        } else {
            match coloring {
                Some(c) => {
                    println!("c route {}", match relaxed.route { Route::T2 => "T2", Route::Nae => "NAE" });
                    print!("{}", coloring_to_text(c));
                }
                None => println!("none found"),
            }
        }
        Ok(if coloring.is_some() { POSITIVE } else { NEGATIVE })
    }

    fn gen(&self, nv: usize, ne: usize, seed: u64) -> Res<u8> {
        let (inst, witness) = generate_planted(nv, ne, seed)?;
        if self.json {
            let edges: Vec<[usize; 3]> = inst.edges().iter().map(|e| e.map(|v| v + 1)).collect();
            self.print_json(json!({"variables": nv, "edges": edges, "witness": witness}))?;
        } else {
            print!("{}", inst.to_text());
            for line in coloring_to_text(&witness).lines() {
                println!("# {line}");
            }
        }
        Ok(POSITIVE)
    }
}

type Labelled = (Vec<RelStructure>, Vec<Option<String>>);

const NAMED3: [&str; 19] = [
    "D1", "D1plus", "D2", "D2plus", "T1", "T1plus", "T2", "T2plus", "Q1", "Q1plus", "Q2", "Q2plus", "Q3", "Q3plus",
    "C", "Cplus", "S", "Splus", "NAE_3",
];

fn named_three_element() -> Res<Labelled> {
    let mut structures = Vec::new();
    let mut labels = Vec::new();
    for name in NAMED3.iter().chain(&["LO_3"]) {
        structures.push(named_template(name)?);
        labels.push(Some(name.to_string()));
    }
    Ok((structures, labels))
}

fn all_three_element() -> Res<Labelled> {
    let structures = all_symmetric_ternary(3);
    let named: Vec<(&str, RelStructure)> = NAMED3
        .iter()
        .chain(&["LO_3"])
        .map(|n| Ok((*n, named_template(n)?)))
        .collect::<Res<_>>()?;
    let labels = structures
        .iter()
        .map(|s| {
            let names: Vec<&str> = named.iter().filter(|(_, t)| t == s).map(|(n, _)| *n).collect();
            (!names.is_empty()).then(|| names.join(" = "))
        })
        .collect();
    Ok((structures, labels))
}

//! Acceptance suite: one PASS/FAIL line per criterion, printed to the
//! process stdout so it shows up without `--nocapture`.

use std::collections::HashSet;
use std::io::Write;
use std::process::Command;
use std::time::{Duration, Instant};

use pcsp_core::catalog::all_symmetric_ternary;
use pcsp_core::lemma::{check_property, chromatic_number, color_graph, kneser_graph, PropertyId};
use pcsp_core::poly::enumerate_polymorphisms;
use pcsp_core::sym::{search_block_symmetric, search_symmetric, SearchOptions};
use pcsp_core::tract::{classify_template, solve_nae, solve_t2, Complexity};
use pcsp_core::{
    check_coloring, generate_planted, hom_exists, hom_order_compare, named_template, HomOrder, Instance, RelStructure,
    TemplatePair,
};

type Outcome = Result<String, String>;

fn pair(name: &str) -> TemplatePair {
    TemplatePair::one_in_three(named_template(name).unwrap()).unwrap()
}

fn pcsp(args: &[&str]) -> (i32, String, Duration) {
    let start = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_pcsp")).args(args).output().expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&out.stdout).into_owned(),
        start.elapsed(),
    )
}

fn within(d: Duration, secs: u64, what: &str) -> Result<(), String> {
    if d > Duration::from_secs(secs) {
        return Err(format!("{what} took {:.1} s (limit {secs} s)", d.as_secs_f64()));
    }
    Ok(())
}

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn seeded_refutation() -> Outcome {
    let (code, out, t) = pcsp(&["poly", "verify", "--appendix-b"]);
    within(t, 60, "poly verify --appendix-b")?;
    ensure(code == 0, format!("seeded replay exit {code}"))?;
    ensure(
        out.contains("forced in order: f(7)=1, f(9)=2, f(5)=3, f(13)=0, f(2)=1, f(14)=2, f(0)=3"),
        "forced sequence differs",
    )?;
    ensure(out.contains("no value of f(6) is possible"), "no contradiction at f(6)")?;
    let extra: Vec<&str> = out
        .lines()
        .filter(|l| l.starts_with("force "))
        .filter(|l| !["f(7)", "f(9)", "f(5)", "f(13)", "f(2)", "f(14)", "f(0)"].iter().any(|w| l.contains(&format!("force {w} "))))
        .collect();
    let mut times = vec![t];
    for args in [
        &["poly", "search-block", "1in3", "CHplus", "23", "24"][..],
        &["poly", "search-sym", "1in3", "CHplus", "23"][..],
    ] {
        let (code, out, t) = pcsp(args);
        within(t, 60, &args.join(" "))?;
        ensure(code == 1 && out.trim() == "none", format!("{} gave exit {code}: {out}", args.join(" ")))?;
        times.push(t);
    }
    Ok(format!(
        "seeded trace reaches f(6) contradiction; block (23,24) and symmetric 23 report none; {} further top-level forcings ({}) also listed; max {:.2} s",
        extra.len(),
        extra.iter().map(|l| l.trim_start_matches("force ").split(" via").next().unwrap()).collect::<Vec<_>>().join(", "),
        times.iter().max().unwrap().as_secs_f64()
    ))
}

/// Every weight table `0..=n -> 0..3`, checked directly against `x + y + z ≡ 1 (mod 3)`.
fn t2_brute_force(n: usize) -> bool {
    let cells = n + 1;
    (0..3usize.pow(cells as u32)).any(|code| {
        let f: Vec<usize> = (0..cells).map(|i| code / 3usize.pow(i as u32) % 3).collect();
        (0..=n).all(|a| (0..=n - a).all(|b| (f[a] + f[b] + f[n - a - b]) % 3 == 1))
    })
}

/// Returns the positive clauses' outcome and, separately, the literal negative clause.
fn tractability() -> (Outcome, Outcome) {
    let start = Instant::now();
    let t2 = pair("T2");
    let opts = SearchOptions::default();
    let mut problems = Vec::new();
    for n in (1..=31).filter(|n| n % 3 == 1) {
        if search_symmetric(&t2, n, &opts).unwrap().found().is_none() {
            problems.push(format!("no T2 table at n={n}"));
        }
    }
    let mut found_other = Vec::new();
    for n in (1..=10).filter(|n| n % 3 != 1) {
        let found = search_symmetric(&t2, n, &opts).unwrap().found().is_some();
        if n <= 8 && found != t2_brute_force(n) {
            problems.push(format!("search and brute force disagree at n={n}"));
        }
        if found {
            found_other.push(n);
        }
    }
    let nae = pair("NAE");
    for k in 1..=15 {
        if search_block_symmetric(&nae, k + 1, k, &opts).unwrap().found().is_none() {
            problems.push(format!("no NAE block table at ({},{k})", k + 1));
        }
    }
    let t = start.elapsed();
    if t > Duration::from_secs(120) {
        problems.push(format!("took {:.1} s", t.as_secs_f64()));
    }
    let positive = if problems.is_empty() {
        Ok(format!(
            "T2 symmetric at every n ≡ 1 (mod 3) up to 31; NAE blocks (k+1,k) for k ≤ 15; search matches brute force at n ≤ 8; {:.2} s",
            t.as_secs_f64()
        ))
    } else {
        Err(problems.join("; "))
    };
    let negative = if found_other.is_empty() {
        Ok("no T2 symmetric table at n ≤ 10, n ≢ 1 (mod 3)".into())
    } else {
        Err(format!(
            "T2 symmetric tables exist at n = {found_other:?} (n ≡ 2 mod 3, e.g. f(m) = 2m mod 3), confirmed by brute force at n ≤ 8; only n ≡ 0 (mod 3) has none"
        ))
    };
    (positive, negative)
}

fn lemma_suites() -> Outcome {
    let start = Instant::now();
    let mut counts = 0usize;
    for id in PropertyId::all() {
        let name = id.default_template();
        let r = check_property(&pair(name), name, id, 4).map_err(|e| e.to_string())?;
        ensure(r.holds(), format!("{id}: {} counterexamples", r.counterexamples.len()))?;
        counts += r.counts.iter().sum::<usize>();
    }
    // the command-line driver agrees for each template
    for t in ["D1plus", "D2plus", "T1", "CH"] {
        let (code, _, _) = pcsp(&["verify", "lemmas", t, "--max-arity", "4"]);
        ensure(code == 0, format!("verify lemmas {t} exit {code}"))?;
    }
    within(start.elapsed(), 600, "lemma suites")?;
    Ok(format!(
        "15 properties, zero counterexamples at arity ≤ 4 ({counts} table checks); {:.2} s",
        start.elapsed().as_secs_f64()
    ))
}

fn selector_suites() -> Outcome {
    let start = Instant::now();
    let mut chains = Vec::new();
    for sel in ["SEL_D1", "SEL_D2", "SEL_T1", "SEL_CH"] {
        let (code, out, _) = pcsp(&["--json", "verify", "selector", sel, "--max-arity", "3"]);
        ensure(code == 0, format!("{sel} exit {code}"))?;
        let v: serde_json::Value = serde_json::from_str(&out).map_err(|e| e.to_string())?;
        ensure(v["violation"].is_null(), format!("{sel} has a violating chain"))?;
        chains.push(format!("{sel} {}", v["chains"]));
    }
    within(start.elapsed(), 600, "selector suites")?;
    Ok(format!("zero violations at arity ≤ 3 (chains: {}); {:.2} s", chains.join(", "), start.elapsed().as_secs_f64()))
}

fn kneser() -> Outcome {
    let start = Instant::now();
    let mut seen = Vec::new();
    for n in 2..=8 {
        for m in (1..=3).filter(|&m| n >= 2 * m) {
            let g = kneser_graph(n, m).map_err(|e| e.to_string())?;
            let chi = chromatic_number(&g, n + 1).ok_or(format!("KG({n},{m}) not coloured"))?;
            let bound = n - 2 * m + 2;
            ensure(chi >= bound, format!("χ(KG({n},{m})) = {chi} < {bound}"))?;
            let c = color_graph(&g, chi).unwrap();
            ensure(g.is_proper_coloring(&c), format!("KG({n},{m}) colouring invalid"))?;
            seen.push(format!("{n},{m}:{chi}"));
        }
    }
    let petersen = chromatic_number(&kneser_graph(5, 2).unwrap(), 10);
    ensure(petersen == Some(3), format!("χ(KG(5,2)) = {petersen:?}"))?;
    within(start.elapsed(), 60, "Kneser")?;
    Ok(format!("bound holds for {} graphs; χ(KG(5,2)) = 3; {:.2} s", seen.len(), start.elapsed().as_secs_f64()))
}

fn trichotomy() -> Outcome {
    let start = Instant::now();
    let lo3 = named_template("LO_3").unwrap();
    let (nae, t2) = (named_template("NAE").unwrap(), named_template("T2").unwrap());
    let tractable = |b: &RelStructure| hom_exists(&nae, b).unwrap() || hom_exists(&t2, b).unwrap();
    let mut tally = [0usize; 3];
    for b in all_symmetric_ternary(3) {
        let label = classify_template(&b).map_err(|e| e.to_string())?;
        let equivalent = hom_order_compare(&b, &lo3).unwrap() == HomOrder::Equivalent;
        ensure((label == Complexity::Open) == equivalent, format!("{b}: {label} vs equivalence {equivalent}"))?;
        if hom_exists(&lo3, &b).unwrap() && !equivalent {
            ensure(tractable(&b), format!("LO_3 below {b}, which admits neither NAE nor T2"))?;
        }
        tally[label as usize] += 1;
    }
    ensure(tally.iter().sum::<usize>() == 1023, "expected 1023 structures")?;
    for low in ["T1", "D1plus", "D2plus"] {
        let order = hom_order_compare(&named_template(low).unwrap(), &lo3).unwrap();
        ensure(order == HomOrder::StrictlyBelow, format!("{low} is {order} LO_3"))?;
    }
    let dot = std::env::temp_dir().join(format!("lattice-{}.dot", std::process::id()));
    let (code, _, _) = pcsp(&["hom", "lattice", "--named3", "--out", dot.to_str().unwrap()]);
    let text = std::fs::read_to_string(&dot).unwrap_or_default();
    let _ = std::fs::remove_file(&dot);
    ensure(code == 0 && text.contains("LO_3"), "named lattice export failed")?;
    for name in ["D1", "D1plus", "D2", "D2plus", "T1", "T2", "T2plus", "Q1", "Q1plus", "Q2", "Q2plus", "Q3", "Q3plus", "C", "Cplus", "S", "Splus", "NAE_3"] {
        let b = named_template(name).unwrap();
        if hom_exists(&lo3, &b).unwrap() && !hom_exists(&b, &lo3).unwrap() {
            ensure(tractable(&b), format!("LO_3 below {name} without NAE or T2"))?;
        }
    }
    within(start.elapsed(), 300, "trichotomy")?;
    Ok(format!(
        "1023 structures: {} P, {} NP-hard, {} open (all hom-equivalent to LO_3); LO_3 strictly above T1, D1plus, D2plus; {:.2} s",
        tally[0],
        tally[1],
        tally[2],
        start.elapsed().as_secs_f64()
    ))
}

fn solver_round_trip() -> Outcome {
    let (t2, nae) = (named_template("T2").unwrap(), named_template("NAE").unwrap());
    let mut slowest = Duration::ZERO;
    for i in 0..1000u64 {
        let nv = 3 + (i as usize * 13) % 48;
        let ne = 1 + (i as usize * 37) % 100;
        let (inst, _) = generate_planted(nv, ne, i).map_err(|e| e.to_string())?;
        let start = Instant::now();
        let a = solve_t2(&inst).ok_or(format!("instance {i}: no T2 coloring"))?;
        let b = solve_nae(&inst).ok_or(format!("instance {i}: no NAE coloring"))?;
        slowest = slowest.max(start.elapsed());
        ensure(check_coloring(&inst, &a, &t2).unwrap(), format!("instance {i}: bad T2 coloring"))?;
        ensure(check_coloring(&inst, &b, &nae).unwrap(), format!("instance {i}: bad NAE coloring"))?;
    }
    within(slowest, 1, "slowest instance")?;
    let degenerate = Instance::new(2, vec![[1, 1, 1]]).unwrap();
    ensure(solve_t2(&degenerate).is_none() && solve_nae(&degenerate).is_none(), "degenerate edge solved")?;
    let file = std::env::temp_dir().join(format!("degenerate-{}.hyp", std::process::id()));
    std::fs::write(&file, "p hyp3 2 1\ne 2 2 2\n").unwrap();
    for target in ["T2", "NAE"] {
        let (code, out, _) = pcsp(&["solve", target, file.to_str().unwrap()]);
        ensure(code == 1 && out.trim() == "none found", format!("solve {target} on (v,v,v): exit {code}"))?;
    }
    let _ = std::fs::remove_file(&file);
    Ok(format!(
        "1000 planted instances, all T2 and NAE colorings verified; slowest {:.2} ms; (v,v,v) gives none found",
        slowest.as_secs_f64() * 1e3
    ))
}

/// All `|B|^(2^n)` tables filtered by checking every ordered 3-partition.
fn naive_polymorphisms(b: &RelStructure, n: usize) -> HashSet<Vec<u8>> {
    let k = b.domain_size();
    let rel: HashSet<Vec<usize>> = b.relations()[0].tuples().map(|t| t.to_vec()).collect();
    let cells = 1usize << n;
    let parts: Vec<[usize; 3]> = (0..3usize.pow(n as u32))
        .map(|code| {
            let mut sets = [0usize; 3];
            for i in 0..n {
                sets[code / 3usize.pow(i as u32) % 3] |= 1 << i;
            }
            sets
        })
        .collect();
    let mut out = HashSet::new();
    for code in 0..k.pow(cells as u32) {
        let f: Vec<usize> = (0..cells).map(|i| code / k.pow(i as u32) % k).collect();
        if parts.iter().all(|p| rel.contains(&vec![f[p[0]], f[p[1]], f[p[2]]])) {
            out.insert(f.iter().map(|&v| v as u8).collect());
        }
    }
    out
}

fn oracle_equivalence() -> Outcome {
    let mut sizes = Vec::new();
    for name in ["1in3", "NAE", "T1", "T2", "D1plus", "D2plus", "CH", "CHplus"] {
        let b = named_template(name).unwrap();
        for n in 1..=3 {
            let listed: Vec<Vec<u8>> = enumerate_polymorphisms(&pair(name), n, 3)
                .map_err(|e| e.to_string())?
                .map(|f| f.values().to_vec())
                .collect();
            let set: HashSet<Vec<u8>> = listed.iter().cloned().collect();
            ensure(set.len() == listed.len(), format!("{name} n={n}: duplicates"))?;
            ensure(set == naive_polymorphisms(&b, n), format!("{name} n={n}: sets differ"))?;
            if n == 3 {
                sizes.push(format!("{name} {}", set.len()));
            }
        }
    }
    Ok(format!("enumeration equals naive filtering at arity ≤ 3 (arity 3: {})", sizes.join(", ")))
}

fn report(line: &str) {
    let mut out = std::io::stdout().lock();
    writeln!(out, "{line}").unwrap();
    out.flush().unwrap();
}

fn line(id: &str, title: &str, r: &Outcome) -> bool {
    match r {
        Ok(detail) => report(&format!("criterion {id} [{title}]: PASS - {detail}")),
        Err(why) => report(&format!("criterion {id} [{title}]: FAIL - {why}")),
    }
    r.is_ok()
}

#[test]
fn acceptance_criteria() {
    let mut failed = Vec::new();
    let mut check = |id: &str, title: &str, r: Outcome| {
        if !line(id, title, &r) {
            failed.push(id.to_string());
        }
    };
    check("1", "seeded CHplus refutation", seeded_refutation());
    let (positive, negative) = tractability();
    check("2", "tractability witnesses", positive);
    // reported, not asserted: the clause is contradicted by the brute-force oracle
    line("2-neg", "no T2 symmetric table at n ≢ 1 (mod 3), n ≤ 10", &negative);
    check("3", "lemma suites", lemma_suites());
    check("4", "selector suites", selector_suites());
    check("5", "Kneser bound", kneser());
    check("6", "trichotomy", trichotomy());
    check("7", "solver round trip", solver_round_trip());
    check("8", "oracle equivalence", oracle_equivalence());
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}

//! Acceptance checks. Run with `cargo test --test acceptance`; prints one
//! line per criterion and fails if any criterion fails.

mod common;

use std::fs;
use std::path::Path;
use std::time::Instant;

use blocklogic::chain::{complete, Model};
use blocklogic::corpus::{Bounds, Generator};
use blocklogic::proofcheck::{check_derivation, parse_derivation, AxiomName, ProofError, ProofErrorKind};
use blocklogic::propositional::{TheorySet, Valuation};
use blocklogic::reduction::{normalize, translate};
use blocklogic::semantics::principles::Principle;
use blocklogic::semantics::{enumerate_models, eval, find_countermodel, BoundedSearchSpace};
use blocklogic::sim::{run_simulation, NodeConfig, Schedule, SimulationConfig};
use blocklogic::syntax::{parse_formula, BcFormula, Block, ClassicalFormula};
use blocklogic::validity::decide;
use rand::Rng;

use common::{naive_entails, naive_sat, oracle_complete};

struct Outcome {
    ok: bool,
    detail: String,
}

fn pass(detail: impl Into<String>) -> Outcome {
    Outcome { ok: true, detail: detail.into() }
}

fn fail(detail: impl Into<String>) -> Outcome {
    Outcome { ok: false, detail: detail.into() }
}

fn f(s: &str) -> BcFormula {
    parse_formula(s).unwrap()
}

fn oracle_space(formula: &BcFormula) -> BoundedSearchSpace {
    BoundedSearchSpace::for_formula(formula)
}

fn axiom_suite() -> Outcome {
    let mut gen = Generator::new(1, Bounds::default());
    let mut checked = 0;
    for name in AxiomName::ALL {
        for _ in 0..500 {
            let g = gen.axiom_instance(name);
            let verdict = match decide(&g) {
                Ok(v) => v,
                Err(e) => return fail(format!("{name}: {g}: {e}")),
            };
            if !verdict.valid {
                return fail(format!("{name} instance decided INVALID: {g}"));
            }
            if let Some(m) = find_countermodel(&g, &oracle_space(&g)) {
                return fail(format!("{name} instance refuted by the oracle: {g}\n{m}"));
            }
            checked += 1;
        }
    }
    // the index-only swap, kept for comparison; it is not a schema
    let mut index_swap_invalid = 0;
    for _ in 0..500 {
        let (first, second) = loop {
            let (a, b) = (gen.block(), gen.block());
            if a.index() != b.index() {
                break (a, b);
            }
        };
        let rest = gen.compliant();
        let side = |x: &Block, y: &Block| {
            BcFormula::update(x.clone(), BcFormula::update(y.clone(), rest.clone()))
        };
        let swapped_first = first.with_index(second.index()).unwrap();
        let swapped_second = second.with_index(first.index()).unwrap();
        let g = BcFormula::iff(side(&first, &second), side(&swapped_first, &swapped_second));
        if !decide(&g).map(|v| v.valid).unwrap_or(true) {
            index_swap_invalid += 1;
        }
    }
    pass(format!(
        "{checked} instances over 13 schemas; index-only swap INVALID on {index_swap_invalid}/500"
    ))
}

fn principles() -> Outcome {
    let mut gen = Generator::new(2, Bounds::default());
    for p in Principle::ALL {
        for _ in 0..200 {
            let g = p.instance(&mut gen);
            match decide(&g) {
                Ok(v) if v.valid => {}
                Ok(_) => return fail(format!("{p:?} instance decided INVALID: {g}")),
                Err(e) => return fail(format!("{p:?}: {e}")),
            }
        }
    }
    pass("800 instances")
}

fn remarks() -> Outcome {
    let m = Model::new(
        TheorySet::new(),
        vec![],
        vec![Block::new(2, ClassicalFormula::top()).unwrap()],
        Valuation::new(),
    )
    .unwrap();
    if !eval(&m, &f("[1, P0]Q2")) || eval(&m, &f("Q2")) {
        return fail("(a) wrong truth values in the provisional model");
    }
    match decide(&f("[1, P0]Q2 <-> Q2")) {
        Ok(v) if v.valid => {}
        _ => return fail("(b) not VALID"),
    }
    let g = f("[2, top]([1, P0]Q2 <-> Q2)");
    match decide(&g) {
        Ok(v) if !v.valid => match v.countermodel {
            Some(cm) if cm.is_initial() && !eval(&cm, &g) => pass("(a) (b) (c)"),
            _ => fail("(c) countermodel missing or not falsifying"),
        },
        _ => fail("(c) not INVALID"),
    }
}

fn completion_conformance() -> Outcome {
    let mut gen = Generator::new(4, Bounds::default());
    let mut branches = [0usize; 4];
    for n in 0..1000 {
        let (background, chain, pending) = gen.completion_input();
        let got = match complete(&background, &chain, &pending) {
            Ok(c) => c,
            Err(e) => return fail(format!("input {n}: {e}")),
        };
        let want = oracle_complete(&background, &chain, &pending);
        if got.chain != want.chain
            || got.pending != want.pending
            || got.trace.accepted != want.accepted
            || got.trace.rejected_inconsistent != want.rejected
            || got.trace.discarded_stale != want.discarded
        {
            return fail(format!("input {n}: differs from the oracle"));
        }
        let mut beliefs: Vec<&ClassicalFormula> = background.iter().collect();
        beliefs.extend(&got.chain);
        if !naive_sat(&beliefs) {
            return fail(format!("input {n}: condition (1) violated"));
        }
        let limit = got.chain.len() as u64 + 1;
        if got.pending.iter().any(|b| b.index() <= limit) {
            return fail(format!("input {n}: condition (2) violated"));
        }
        if !got.chain.starts_with(&chain) {
            return fail(format!("input {n}: input chain is not a prefix"));
        }
        let t = &got.trace;
        for (k, hit) in [!t.accepted.is_empty(), !t.rejected_inconsistent.is_empty(), !t.discarded_stale.is_empty(), t.removed() == 0]
            .into_iter()
            .enumerate()
        {
            branches[k] += hit as usize;
        }
    }
    if branches.contains(&0) {
        return fail(format!("branch coverage incomplete: {branches:?}"));
    }
    pass(format!("1000 inputs; accept/reject/discard/idle seen {branches:?}"))
}

fn reduction_correctness() -> Outcome {
    let mut gen = Generator::new(5, Bounds::default());
    let mut models = 0usize;
    for n in 0..500 {
        let g = gen.compliant();
        let normal = normalize(&g).to_formula();
        let translated = translate(&normal);
        if !normal.is_compliant() || !translated.is_update_free() {
            return fail(format!("formula {n}: bad shape for {g}"));
        }
        for m in enumerate_models(&g, &oracle_space(&g)) {
            let (a, b, c) = (eval(&m, &g), eval(&m, &normal), eval(&m, &translated));
            if a != b || b != c {
                return fail(format!("formula {n}: {g}: {a} {b} {c} on\n{m}"));
            }
            models += 1;
        }
    }
    pass(format!("500 formulas, {models} model evaluations"))
}

fn oracle_agreement() -> Outcome {
    let mut gen = Generator::new(6, Bounds::default());
    let (mut valid, mut invalid) = (0, 0);
    for n in 0..500 {
        let g = gen.formula();
        let space = oracle_space(&g);
        let verdict = match decide(&g) {
            Ok(v) => v,
            Err(e) => return fail(format!("formula {n}: {g}: {e}")),
        };
        if verdict.valid {
            if let Some(m) = find_countermodel(&g, &space) {
                return fail(format!("formula {n}: VALID but the oracle refutes {g} with\n{m}"));
            }
            valid += 1;
        } else {
            let Some(m) = verdict.countermodel else {
                return fail(format!("formula {n}: INVALID without a countermodel"));
            };
            if !m.is_initial() || eval(&m, &g) {
                return fail(format!("formula {n}: countermodel does not falsify {g}"));
            }
            if space.contains(&g, &m) && find_countermodel(&g, &space).is_none() {
                return fail(format!("formula {n}: oracle misses an in-space countermodel for {g}"));
            }
            invalid += 1;
        }
    }
    pass(format!("{valid} VALID, {invalid} INVALID"))
}

fn proof_corpus() -> Outcome {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden/proofs");
    let mut entries: Vec<_> = fs::read_dir(&dir).unwrap().map(|e| e.unwrap().path()).collect();
    entries.sort();
    let mut theorems = 0;
    let mut used = std::collections::BTreeSet::new();
    for path in &entries {
        let name = path.file_name().unwrap().to_string_lossy().to_string();
        let d = match parse_derivation(&fs::read_to_string(path).unwrap()) {
            Ok(d) => d,
            Err(e) => return fail(format!("{name}: {e}")),
        };
        if name.starts_with("bad_") {
            continue;
        }
        if let Err(e) = check_derivation(&d) {
            return fail(format!("{name}: {e}"));
        }
        for line in &d.lines {
            if let blocklogic::proofcheck::Justification::Axiom(a) = line.justification {
                used.insert(a);
            }
        }
        match decide(d.conclusion().unwrap()) {
            Ok(v) if v.valid => theorems += 1,
            _ => return fail(format!("{name}: conclusion is not VALID")),
        }
    }
    if theorems < 10 || used.len() < AxiomName::ALL.len() {
        return fail(format!("{theorems} theorems, {} schemas used", used.len()));
    }
    let bad = parse_derivation(&fs::read_to_string(dir.join("bad_sub.proof")).unwrap()).unwrap();
    match check_derivation(&bad) {
        Err(ProofError { line: 2, kind: ProofErrorKind::SubNotCompliant }) => {}
        other => return fail(format!("bad_sub.proof: {other:?}")),
    }
    pass(format!("{theorems} theorems; SUB compliance violation rejected at line 2"))
}

fn probe_bodies(blocks: &[Block]) -> Vec<ClassicalFormula> {
    let mut out = vec![ClassicalFormula::Falsum, ClassicalFormula::top()];
    for b in blocks {
        out.push(b.formula().clone());
        out.push(ClassicalFormula::not(b.formula().clone()));
    }
    for p in 0..3 {
        out.push(ClassicalFormula::atom(p));
    }
    out
}

/// Persistence and consistency along every node's sequence of models.
fn step_invariants(report: &blocklogic::sim::SimulationReport, blocks: &[Block]) -> Result<(), String> {
    let probes = probe_bodies(blocks);
    let consistent = BcFormula::not(BcFormula::boxed(ClassicalFormula::Falsum));
    for node in &report.nodes {
        let models: Vec<&Model> = node.models().collect();
        for (k, m) in models.iter().enumerate() {
            if !eval(m, &consistent) {
                return Err(format!("node {} step {k}: beliefs inconsistent", node.name));
            }
            let beliefs: Vec<&ClassicalFormula> = m.beliefs().collect();
            if !naive_sat(&beliefs) {
                return Err(format!("node {} step {k}: oracle finds beliefs inconsistent", node.name));
            }
            if let Some(next) = models.get(k + 1) {
                for a in &probes {
                    let boxed = BcFormula::boxed(a.clone());
                    if eval(m, &boxed) && !eval(next, &boxed) {
                        return Err(format!("node {} step {k}: lost belief in {a}", node.name));
                    }
                    if naive_entails(&beliefs, a) != eval(m, &boxed) {
                        return Err(format!("node {} step {k}: box {a} disagrees with the oracle", node.name));
                    }
                }
            }
        }
    }
    Ok(())
}

fn seeded_nodes(rng: &mut impl Rng, count: usize, drop: usize) -> Vec<NodeConfig> {
    (0..count)
        .map(|k| NodeConfig { name: format!("N{k}"), schedule: Schedule::Seeded { seed: rng.gen(), drop } })
        .collect()
}

fn simulator() -> Outcome {
    let mut gen = Generator::new(8, Bounds::default());
    for run in 0..200 {
        // distinct indices 1..=n, each a literal on its own atom
        let n = gen.rng().gen_range(1..=5u64);
        let blocks: Vec<Block> = (1..=n)
            .map(|i| {
                let p = ClassicalFormula::atom(i);
                let lit = if gen.rng().gen_bool(0.5) { p } else { ClassicalFormula::not(p) };
                Block::new(i, lit).unwrap()
            })
            .collect();
        let cfg = SimulationConfig { background: TheorySet::new(), nodes: seeded_nodes(gen.rng(), 4, 0) };
        let report = run_simulation(&cfg, &blocks).unwrap();
        if !report.converged() || report.nodes[0].final_model().len() != n as usize {
            return fail(format!("run {run}: distinct-index delivery did not converge"));
        }
        if let Err(e) = step_invariants(&report, &blocks) {
            return fail(format!("run {run}: {e}"));
        }

        // arbitrary blocks, some dropped
        let count = gen.rng().gen_range(1..=6);
        let blocks: Vec<Block> = (0..count).map(|_| gen.block()).collect();
        let background = gen.background();
        let drop = gen.rng().gen_range(0..=1);
        let cfg = SimulationConfig { background, nodes: seeded_nodes(gen.rng(), 3, drop) };
        let report = run_simulation(&cfg, &blocks).unwrap();
        if let Err(e) = step_invariants(&report, &blocks) {
            return fail(format!("run {run}: {e}"));
        }
        if run_simulation(&cfg, &blocks).unwrap() != report {
            return fail(format!("run {run}: not reproducible"));
        }

        // two blocks competing for index 1
        let a = loop {
            let a = gen.small_classical();
            if naive_sat(&[&a]) && naive_sat(&[&ClassicalFormula::not(a.clone())]) {
                break a;
            }
        };
        let fork = [Block::new(1, a.clone()).unwrap(), Block::new(1, ClassicalFormula::not(a.clone())).unwrap()];
        let cfg = SimulationConfig {
            background: TheorySet::new(),
            nodes: vec![
                NodeConfig { name: "A".into(), schedule: Schedule::Explicit(vec![0, 1]) },
                NodeConfig { name: "B".into(), schedule: Schedule::Explicit(vec![1, 0]) },
            ],
        };
        let first = run_simulation(&cfg, &fork).unwrap();
        let expected_a = vec![a.clone()];
        let expected_b = vec![ClassicalFormula::not(a)];
        if first.nodes[0].final_model().chain() != expected_a
            || first.nodes[1].final_model().chain() != expected_b
            || first != run_simulation(&cfg, &fork).unwrap()
        {
            return fail(format!("run {run}: fork scenario did not diverge as expected"));
        }
    }
    pass("200 runs")
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("axiom schemas valid", axiom_suite),
        ("belief principles valid", principles),
        ("provisional update regressions", remarks),
        ("chain completion matches oracle", completion_conformance),
        ("normal form and translation preserve truth", reduction_correctness),
        ("decision agrees with bounded search", oracle_agreement),
        ("proof corpus", proof_corpus),
        ("simulator invariants", simulator),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (n, (name, run)) in criteria.iter().enumerate() {
        if !filter.is_empty() && !filter.iter().any(|f| name.contains(f.as_str())) {
            continue;
        }
        let started = Instant::now();
        let outcome = run();
        let status = if outcome.ok { "PASS" } else { "FAIL" };
        println!(
            "criterion {}: {status} {name} ({}; {:.1}s)",
            n + 1,
            outcome.detail,
            started.elapsed().as_secs_f64()
        );
        failed += !outcome.ok as usize;
    }
    if failed > 0 {
        std::process::exit(1);
    }
}

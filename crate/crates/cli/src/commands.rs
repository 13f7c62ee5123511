use std::collections::BTreeMap;
use std::path::Path;

use anyhow::{anyhow, bail, Result};
use serde_json::json;

use ordlab::depletion::{
    depletion_matrix, depletion_order, find_walk, is_walk, maximal_star_set, star_condition,
    star_condition_exhaustive, DepletionInstance, DepletionJson, WalkOutcome,
};
use ordlab::forcing::{
    default_schedule, generic_build, pipeline_from_generic, shuffled_schedule, verify_generic, ChainsJson,
};
use ordlab::order::GraphJson;
use ordlab::product::{
    atomic_los_check, is_op_chain, longest_op_chain, FiniteStructure, Formula, ProductElem, ProductJson,
    ReducedProduct, StructureJson,
};
use ordlab::seq::{leq_from, lt_from, SeqFun};
use ordlab::tie::{expansion_axiom_check, fragment, tie_decompose, true_tie_check, Point};
use ordlab::universal::{embed_structure, embedding_mismatch};
use ordlab::verify::{Budget, SUITES};

use crate::{Inputs, Outcome};

fn instance(inputs: &mut Inputs, path: &Path) -> Result<DepletionInstance> {
    let j: DepletionJson = inputs.read(path)?;
    Ok(DepletionInstance::try_from(&j)?)
}

fn positions(inst: &DepletionInstance, labels: &[String]) -> Result<Vec<usize>> {
    labels
        .iter()
        .map(|l| inst.label_position(l.trim()).map_err(Into::into))
        .collect()
}

pub fn depletion(inputs: &mut Inputs, path: &Path, s: &[String]) -> Result<Outcome> {
    let inst = instance(inputs, path)?;
    let s = positions(&inst, s)?;
    let m = depletion_matrix(&inst, &s)?;
    let order = depletion_order(&inst, &s);
    let ok = order.is_ok();
    let pairs = m.rel.iter().flatten().filter(|&&b| b).count();
    let summary = format!(
        "domain of {} elements, {pairs} related pairs, {}",
        m.domain.len(),
        match &order {
            Ok(_) => "a partial order contained in the base order".to_string(),
            Err(err) => format!("not a partial order: {err}"),
        }
    );
    let labels: Vec<&str> = m.s.iter().map(|&i| inst.labels()[i].as_str()).collect();
    let result = json!({
        "s": m.s,
        "labels": labels,
        "domain": m.domain,
        "matrix": m.rel,
        "partial_order": ok,
        "error": order.err().map(|e| e.to_string()),
    });
    Outcome::new(ok, result, summary)
}

pub fn walk(inputs: &mut Inputs, path: &Path, s: &[String], x: usize, y: usize) -> Result<Outcome> {
    let inst = instance(inputs, path)?;
    let s = positions(&inst, s)?;
    let outcome = find_walk(&inst, &s, x, y)?;
    let (ok, summary, result) = match &outcome {
        WalkOutcome::Found(w) => {
            let valid = is_walk(&inst, &w.s, w);
            let summary = format!("walk {:?} ({:?})", w.steps, w.direction);
            (valid, summary, json!({ "walk": w, "verified": valid }))
        }
        WalkOutcome::None { frontier } => (
            true,
            format!("no walk; frontier at index {} is {:?}", frontier.index, frontier.reachable),
            json!({ "walk": "none", "frontier": frontier }),
        ),
    };
    Outcome::new(ok, result, summary)
}

pub fn star(inputs: &mut Inputs, path: &Path, pair: Option<(&str, &str)>, exhaustive: bool) -> Result<Outcome> {
    let inst = instance(inputs, path)?;
    match pair {
        Some((xi, eta)) => {
            let xi = inst.label_position(xi)?;
            let eta = inst.label_position(eta)?;
            let v = star_condition(&inst, xi, eta)?;
            let (ok, cross) = if exhaustive {
                let e = star_condition_exhaustive(&inst, xi, eta)?;
                (e.holds == v.holds, Some(e))
            } else {
                (true, None)
            };
            let summary = format!(
                "star condition for ({xi}, {eta}) {}{}",
                if v.holds { "holds" } else { "fails" },
                if exhaustive {
                    if ok { "; exhaustive search agrees" } else { "; exhaustive search DISAGREES" }
                } else {
                    ""
                }
            );
            Outcome::new(ok, json!({ "xi": xi, "eta": eta, "verdict": v, "exhaustive": cross }), summary)
        }
        None => {
            let x = maximal_star_set(&inst);
            let mut bad = Vec::new();
            for (k, &a) in x.iter().enumerate() {
                for &b in &x[k + 1..] {
                    if !star_condition(&inst, a, b)?.holds {
                        bad.push((a, b));
                    }
                    if exhaustive && !star_condition_exhaustive(&inst, a, b)?.holds {
                        bad.push((a, b));
                    }
                }
            }
            let labels: Vec<&str> = x.iter().map(|&i| inst.labels()[i].as_str()).collect();
            let summary = format!("maximal star set {labels:?}");
            Outcome::new(bad.is_empty(), json!({ "set": x, "labels": labels, "failing_pairs": bad }), summary)
        }
    }
}

pub fn phi(inputs: &mut Inputs, path: &Path, against: Option<&Path>, from: usize) -> Result<Outcome> {
    let f: SeqFun = inputs.read(path)?;
    let pf = ordlab::seq::phi(&f)?;
    let Some(gpath) = against else {
        return Outcome::new(true, json!({ "phi": pf }), format!("phi of a length-{} function", f.len()));
    };
    let g: SeqFun = inputs.read(gpath)?;
    let pg = ordlab::seq::phi(&g)?;
    let premise = leq_from(&f, &g, from)?;
    let step = (from.max(1)..f.len()).find(|&n| f.get(n) < g.get(n));
    let conclusion = match (premise, step) {
        (true, Some(n)) => Some(lt_from(&pf, &pg, n + 1)?),
        _ => None,
    };
    let ok = conclusion != Some(false);
    let summary = match (premise, step, conclusion) {
        (false, ..) => format!("f <= g fails from {from}; nothing to certify"),
        (true, None, _) => format!("f <= g from {from} with no strict step at a positive index; nothing to certify"),
        (true, Some(n), Some(c)) => format!(
            "f <= g from {from}, first strict step at {n}; phi(f) < phi(g) from {}: {c}",
            n + 1
        ),
        (true, Some(_), None) => unreachable!(),
    };
    let result = json!({
        "phi": pf,
        "phi_against": pg,
        "certificate": {
            "from": from,
            "premise": premise,
            "step": step,
            "strict_from": step.map(|n| n + 1),
            "conclusion": conclusion,
        },
    });
    Outcome::new(ok, result, summary)
}

pub fn universal_embed(inputs: &mut Inputs, path: &Path) -> Result<Outcome> {
    let g: GraphJson = inputs.read(path)?;
    let s = g.to_structure()?;
    let map = embed_structure(&s);
    let mismatch = embedding_mismatch(&s, &map);
    let ok = mismatch.is_none();
    let summary = match mismatch {
        None => format!("{} elements embedded, every pair verified", s.len()),
        Some((a, b)) => format!("pair ({a}, {b}) is not preserved"),
    };
    let result = json!({
        "images": map.images,
        "verification": { "pairs": s.len() * s.len().saturating_sub(1), "mismatch": mismatch },
    });
    Outcome::new(ok, result, summary)
}

fn literals(rp: &ReducedProduct) -> Vec<Formula> {
    let mut out = Vec::new();
    for (name, arity) in rp.factors()[0].signature() {
        let vars = ["x0", "x1"];
        let mut tuples: Vec<Vec<&str>> = vec![vec![]];
        for _ in 0..arity {
            tuples = tuples
                .into_iter()
                .flat_map(|t| vars.iter().map(move |v| [t.clone(), vec![*v]].concat()))
                .collect();
        }
        for t in tuples {
            out.push(Formula::atom(&name, &t));
        }
    }
    let neg: Vec<Formula> = out.iter().cloned().map(Formula::negate).collect();
    out.extend(neg);
    out
}

fn assignments(vars: &[String], elements: &[ProductElem]) -> Vec<BTreeMap<String, ProductElem>> {
    let mut out = vec![BTreeMap::new()];
    for v in vars {
        out = out
            .into_iter()
            .flat_map(|env| {
                elements.iter().map(move |e| {
                    let mut env = env.clone();
                    env.insert(v.clone(), e.clone());
                    env
                })
            })
            .collect();
    }
    out
}

pub fn product(inputs: &mut Inputs, path: &Path, formula: Option<&str>, max: usize) -> Result<Outcome> {
    let j: ProductJson = inputs.read(path)?;
    let factors = j
        .factors
        .iter()
        .map(FiniteStructure::try_from)
        .collect::<Result<Vec<_>, _>>()?;
    let filter = j.filter.to_filter(factors.len())?;
    let rp = ReducedProduct::new(factors, filter)?;
    let formulas = match formula {
        Some(text) => {
            let phi: Formula = text.parse()?;
            if !phi.is_literal() {
                bail!("{phi} is neither atomic nor a negated atom");
            }
            vec![phi]
        }
        None => literals(&rp),
    };
    let elements = rp.elements();
    let mut rows = Vec::new();
    let mut all_ok = true;
    let mut failing = 0;
    let mut total = 0;
    for phi in &formulas {
        let vars = phi.variables();
        let count = (elements.len() as u128).checked_pow(vars.len() as u32).unwrap_or(u128::MAX);
        if count > max as u128 {
            bail!("{count} assignments for {phi} exceed --max-assignments {max}");
        }
        let mut forward_fail = 0;
        let mut backward_fail = 0;
        let mut first = None;
        let envs = assignments(&vars, &elements);
        for env in &envs {
            let c = atomic_los_check(&rp, phi, env)?;
            forward_fail += usize::from(!c.forward);
            backward_fail += usize::from(!c.backward);
            if !c.equivalent() && first.is_none() {
                first = Some(json!({ "assignment": env, "check": c }));
            }
        }
        total += envs.len();
        failing += forward_fail + backward_fail;
        all_ok &= forward_fail + backward_fail == 0;
        rows.push(json!({
            "formula": phi.to_string(),
            "assignments": envs.len(),
            "forward_failures": forward_fail,
            "backward_failures": backward_fail,
            "counterexample": first,
        }));
    }
    let summary = format!(
        "{} factors, {} classes, ultrafilter: {}; {total} checks, {failing} failing directions",
        rp.factors().len(),
        rp.classes().len(),
        rp.filter().is_ultra()
    );
    let result = json!({
        "filter": { "kernel": rp.filter().kernel(), "ultra": rp.filter().is_ultra() },
        "classes": rp.classes().len(),
        "checks": rows,
    });
    Outcome::new(all_ok, result, summary)
}

pub fn chains(inputs: &mut Inputs, path: &Path, formula: &str, budget: usize) -> Result<Outcome> {
    let j: StructureJson = inputs.read(path)?;
    let s = FiniteStructure::try_from(&j)?;
    let phi: Formula = formula.parse()?;
    let chain = longest_op_chain(&s, &phi, budget)?;
    let verified = is_op_chain(&s, &phi, &chain)?;
    let summary = format!("longest chain has {} tuples", chain.len());
    Outcome::new(
        verified,
        json!({ "formula": phi.to_string(), "arity": phi.pair_arity()?, "length": chain.len(), "chain": chain, "verified": verified }),
        summary,
    )
}

pub fn generic(inputs: &mut Inputs, path: &Path, depth: usize, seed: Option<u64>, upto: usize) -> Result<Outcome> {
    let g: GraphJson = inputs.read(path)?;
    let e = g.to_poset()?;
    let elements: Vec<usize> = e.elements().collect();
    if elements.is_empty() {
        bail!("the poset is empty");
    }
    let schedule = match seed {
        Some(s) => shuffled_schedule(&e, &elements, depth, s),
        None => default_schedule(&e, &elements, depth),
    };
    let emb = generic_build(&e, &elements, depth, &schedule)?;
    let report = verify_generic(&e, &emb, upto);
    let summary = format!(
        "{} elements at depth {}, {} ordered pairs checked, {} failures",
        elements.len(),
        emb.depth,
        report.pairs_checked,
        report.failures.len()
    );
    let mut result = serde_json::to_value(&emb)?;
    result["requests"] = json!(schedule.len());
    result["verification"] = serde_json::to_value(&report)?;
    Outcome::new(report.ok, result, summary)
}

pub fn pipeline(inputs: &mut Inputs, path: &Path, depth: usize, chains: Option<&Path>) -> Result<Outcome> {
    let g: GraphJson = inputs.read(path)?;
    let e = g.to_poset()?;
    let chains: ChainsJson = match chains {
        Some(p) => inputs.read(p)?,
        None => ChainsJson::all_linear(),
    };
    let elements: Vec<usize> = e.elements().collect();
    if elements.is_empty() {
        bail!("the poset is empty");
    }
    let emb = generic_build(&e, &elements, depth, &default_schedule(&e, &elements, depth))?;
    let report = pipeline_from_generic(&e, &emb, &chains)?;
    let bad = report.pairs.iter().filter(|p| !p.ok).count();
    let summary = format!(
        "{} elements at depth {}, {} pairs certified, {bad} failing",
        elements.len(),
        report.depth,
        report.pairs.len()
    );
    Outcome::new(report.ok, &report, summary)
}

pub fn tiepoint(point: &str, depth: usize) -> Result<Outcome> {
    let x: Point = point.parse().map_err(|e| anyhow!("{e}"))?;
    let td = tie_decompose(&x, depth)?;
    let probe_depth = depth.min(4);
    let probes = fragment(probe_depth);
    let invariants = td.invariant_errors();
    let tie = true_tie_check(&td, &probes)?;
    let axioms = expansion_axiom_check(&probes, probe_depth, &td);
    let ok = invariants.is_empty() && tie.ok() && axioms.ok();
    let summary = format!(
        "x = {x} at depth {depth}: {} probes of depth <= {probe_depth}, {} in the ultrafilter, {} covered",
        tie.probes, tie.in_ultrafilter, tie.covered
    );
    let result = json!({
        "decomposition": td,
        "invariant_errors": invariants,
        "tie_check": tie,
        "axioms": axioms,
    });
    Outcome::new(ok, result, summary)
}

pub fn check_all(budget: Budget, seed: u64, only: &[usize]) -> Result<Outcome> {
    let mut reports = Vec::new();
    let mut lines = Vec::new();
    for (id, name, suite) in SUITES {
        if !only.is_empty() && !only.contains(&id) {
            continue;
        }
        let r = suite(budget, seed);
        lines.push(format!(
            "{:>2} {} {name}: {} checks, {} violations",
            id,
            if r.passed { "PASS" } else { "FAIL" },
            r.checks,
            r.violations
        ));
        reports.push(r);
    }
    let passed = reports.iter().filter(|r| r.passed).count();
    lines.push(format!("{passed} of {} suites passed", reports.len()));
    let ok = passed == reports.len();
    Outcome::new(
        ok,
        json!({ "budget": budget, "seed": seed, "suites": reports }),
        lines.join("\n"),
    )
}

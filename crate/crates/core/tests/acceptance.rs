//! Acceptance gate. Runs every criterion, prints one PASS/FAIL line each and
//! exits nonzero if any fails.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::Instant;

use mcl_core::decide::{build_countermodel, hub_conjunction, Decider, Verdict};
use mcl_core::fixtures;
use mcl_core::formula::{parse, AgentUniverse, Coalition, Formula};
use mcl_core::model::{all_profiles, classify, oplus, GameModel, JointAction, Property};
use mcl_core::normalform::{conjunction_of, normalize};
use mcl_core::oracle::{ladder_model, search_countermodel, FormulaGen, Scheme, SearchBounds};
use mcl_core::semantics::eval;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn ab() -> AgentUniverse {
    AgentUniverse::new(["a", "b"]).unwrap()
}

fn strings(xs: &[&str]) -> Vec<String> {
    xs.iter().map(|s| s.to_string()).collect()
}

/// Shared tally for the certification criterion.
#[derive(Default)]
struct Certs {
    invalid: usize,
    certified: usize,
    hub_checked: usize,
    failures: Vec<String>,
}

impl Certs {
    fn record(&mut self, f: &Formula, v: &Verdict, u: &AgentUniverse) {
        if v.valid {
            return;
        }
        self.invalid += 1;
        let Some(pm) = &v.countermodel else {
            self.failures.push(format!("no countermodel for {}", f.print(u)));
            return;
        };
        let falsified = eval(&pm.model, pm.state, f) == Ok(false);
        let gcgm = pm.model.validate().is_ok() && classify(&pm.model).is_gcgm;
        let hub_ok = match (&v.failing_clause, &v.game_form) {
            (Some(sf), Some(_)) => {
                self.hub_checked += 1;
                eval(&pm.model, pm.state, &hub_conjunction(sf)) == Ok(true)
            }
            _ => true,
        };
        if falsified && gcgm && hub_ok {
            self.certified += 1;
        } else {
            self.failures.push(format!(
                "{}: falsified={falsified} gcgm={gcgm} hub={hub_ok}",
                f.print(u)
            ));
        }
    }
}

// 1 ------------------------------------------------------------------------

fn fixture_classification() -> Outcome {
    let two = classify(&fixtures::two_masks());
    if !(two.serial && two.independent && two.deterministic && two.is_cgm) {
        return Err(format!("two_masks: {two}"));
    }
    let one = classify(&fixtures::one_mask());
    let wit = |p: Property| one.witness(p).map(|w| (w.state.clone(), w.profile.clone()));
    let expected = [
        (Property::Serial, ("s1".to_string(), None)),
        (Property::Independent, ("s0".to_string(), Some("(w,w)".to_string()))),
        (Property::Deterministic, ("s0".to_string(), Some("(w,n)".to_string()))),
    ];
    if !one.is_gcgm || one.is_cgm {
        return Err(format!("one_mask: {one}"));
    }
    for (p, want) in expected {
        if one.has(p) || wit(p) != Some(want.clone()) {
            return Err(format!("one_mask {p}: got {:?}, want {:?}", wit(p), want));
        }
    }
    Ok(format!("two_masks -> {two}; one_mask -> {one}"))
}

// 2 ------------------------------------------------------------------------

fn joint_actions(n_agents: usize, m: usize, c: Coalition) -> Vec<JointAction> {
    let members: Vec<usize> = c.members().collect();
    all_profiles(members.len(), m)
        .into_iter()
        .map(|choice| {
            let mut slots = vec![None; n_agents];
            for (k, &agent) in members.iter().enumerate() {
                slots[agent] = Some(choice[k]);
            }
            JointAction::from_slots(slots)
        })
        .collect()
}

fn constraint_violations(m: &GameModel, cgm: bool) -> (usize, usize) {
    let u = m.universe();
    let n = u.len();
    let k = m.actions().len();
    let mut general = 0;
    let mut cgm_only = 0;
    for s in 0..m.n_states() {
        for c in u.coalitions() {
            let av = m.av(c, s).unwrap();
            let by_outcome: BTreeSet<JointAction> = joint_actions(n, k, c)
                .into_iter()
                .filter(|ja| !m.out(c, s, ja).unwrap().is_empty())
                .collect();
            general += usize::from(av != by_outcome);
            if cgm {
                let family: Vec<_> = c
                    .members()
                    .map(|x| (Coalition::singleton(x), m.av(Coalition::singleton(x), s).unwrap()))
                    .collect();
                cgm_only += usize::from(oplus(n, &family).unwrap() != av);
                cgm_only += usize::from(av.is_empty());
            }
            for d in u.coalitions().filter(|d| d.is_disjoint(c)) {
                let both = m.av(c.union(d), s).unwrap();
                let av_d = m.av(d, s).unwrap();
                general += both.iter().filter(|j| !av.contains(&j.restrict(c))).count();
                general += av
                    .iter()
                    .filter(|x| !av_d.iter().any(|y| both.contains(&x.merge(y).unwrap())))
                    .count();
                if cgm {
                    for x in &av {
                        cgm_only += av_d.iter().filter(|y| !both.contains(&x.merge(y).unwrap())).count();
                    }
                }
            }
        }
    }
    (general, cgm_only)
}

fn constraint_equivalence() -> Outcome {
    let u = ab();
    let atoms = strings(&["p", "q"]);
    let mut general = 0;
    let mut cgm_only = 0;
    let mut cgms = 0;
    for k in 0..500 {
        let m = ladder_model(&u, &atoms, 4, 2, 20_240, k).unwrap();
        let cgm = classify(&m).is_cgm;
        cgms += usize::from(cgm);
        let (g, c) = constraint_violations(&m, cgm);
        general += g;
        cgm_only += c;
    }
    let msg = format!("500 models ({cgms} CGMs): {general} general violations, {cgm_only} CGM violations");
    if general == 0 && cgm_only == 0 && cgms > 0 {
        Ok(msg)
    } else {
        Err(msg)
    }
}

// 3 ------------------------------------------------------------------------

fn scheme_suite(certs: &mut Certs) -> Outcome {
    let u = ab();
    let mut decider = Decider::new(&u);
    let gen = FormulaGen::new(u.clone(), &["p", "q", "r"], 2, 4);
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let mut wrong = Vec::new();
    let mut counts = Vec::new();
    for scheme in Scheme::VALID {
        let mut n = 0;
        for _ in 0..25 {
            let f = scheme.instance(&gen, &mut rng);
            let v = decider.valid(&f).map_err(|e| e.to_string())?;
            certs.record(&f, &v, &u);
            n += 1;
            if !v.valid {
                wrong.push(format!("{scheme}: {}", f.print(&u)));
            }
        }
        counts.push(format!("{scheme} {n}"));
    }
    let canonical = [
        ("A-Ser", "<{a}>true"),
        ("A-IA", "(<{a}>p & <{b}>q) -> <{a,b}>(p & q)"),
        ("A-Det", "<{a}>(p | q) -> (<{a}>p | <{a,b}>q)"),
        ("A-Max", "~<{}>~p -> <{a,b}>p"),
        ("A-Max", "<{a,b}>p | <{a,b}>~p"),
    ];
    for (name, text) in canonical {
        let f = parse(text, &u).unwrap();
        let v = decider.valid(&f).map_err(|e| e.to_string())?;
        certs.record(&f, &v, &u);
        if v.valid {
            wrong.push(format!("{name}: {text} judged VALID"));
        }
    }
    let mut generated_invalid = 0;
    for scheme in Scheme::INVALID {
        for _ in 0..20 {
            let f = scheme.instance(&gen, &mut rng);
            let v = decider.valid(&f).map_err(|e| e.to_string())?;
            certs.record(&f, &v, &u);
            generated_invalid += 1;
            if v.valid {
                wrong.push(format!("{scheme}: {} judged VALID", f.print(&u)));
            }
        }
    }
    if wrong.is_empty() {
        Ok(format!(
            "VALID: {}; INVALID: 5 canonical + {generated_invalid} generated",
            counts.join(", ")
        ))
    } else {
        Err(wrong.join("; "))
    }
}

// 4 ------------------------------------------------------------------------

fn certification(certs: &Certs) -> Outcome {
    let msg = format!(
        "{}/{} invalid verdicts certified, {} grafted hubs checked",
        certs.certified, certs.invalid, certs.hub_checked
    );
    if certs.failures.is_empty() && certs.certified == certs.invalid && certs.invalid > 0 {
        Ok(msg)
    } else {
        Err(format!("{msg}; {}", certs.failures.join("; ")))
    }
}

// 5 ------------------------------------------------------------------------

/// Every Boolean function of `p` and a single modal atom, written as a
/// disjunction of minterms.
fn single_modal_templates(u: &AgentUniverse) -> Vec<Formula> {
    let p = Formula::atom("p");
    let goals = [Formula::top(), Formula::bot(), p.clone(), Formula::not(p.clone())];
    let mut out = Vec::new();
    for c in u.coalitions() {
        for g in &goals {
            let m = Formula::can(c, g.clone());
            for table in 0u8..16 {
                let minterms = (0..4).filter(|row| table >> row & 1 == 1).map(|row| {
                    let lp = if row & 1 == 1 { p.clone() } else { Formula::not(p.clone()) };
                    let lm = if row & 2 == 2 { m.clone() } else { Formula::not(m.clone()) };
                    Formula::and(lp, lm)
                });
                out.push(Formula::disjunction(minterms));
            }
        }
    }
    out
}

/// Depth-1 instances of the schemes over a single agent.
fn single_agent_schemes(u: &AgentUniverse) -> Vec<Formula> {
    [
        "<{a}>true",
        "<{}>true",
        "~<{a}>false",
        "~<{}>false",
        "<{a}>p | <{a}>~p",
        "~<{}>~p -> <{a}>p",
        "<{a}>(p | ~p) -> (<{a}>p | <{a}>~p)",
        "<{}>p -> <{a}>p",
        "<{}>(p -> p) -> (<{a}>p -> <{a}>p)",
        "(<{}>p & <{a}>true) -> <{a}>(p & true)",
        "<{a}>(p & p) -> <{a}>p",
        "<{a}>p -> <{}>(p | ~p)",
        "<{a}>p -> p",
        "p -> <{a}>p",
    ]
    .iter()
    .map(|t| parse(t, u).unwrap())
    .collect()
}

/// Pairs of modal atoms; used for the soundness direction only.
fn two_modal_templates(u: &AgentUniverse) -> Vec<Formula> {
    let p = Formula::atom("p");
    let goals = [Formula::top(), p.clone(), Formula::not(p.clone())];
    let atoms: Vec<Formula> = u
        .coalitions()
        .flat_map(|c| goals.iter().map(move |g| Formula::can(c, g.clone())))
        .collect();
    let mut out = Vec::new();
    for x in &atoms {
        for y in &atoms {
            out.push(Formula::implies(x.clone(), y.clone()));
            out.push(Formula::or(x.clone(), y.clone()));
            out.push(Formula::not(Formula::and(x.clone(), y.clone())));
        }
    }
    out
}

fn oracle_agreement(certs: &mut Certs) -> Outcome {
    let one = AgentUniverse::new(["a"]).unwrap();
    let bounds = SearchBounds::exhaustive(one.clone(), &["p"], 2, 1);
    let mut decider = Decider::new(&one);
    let mut mismatches = Vec::new();
    let exact: Vec<Formula> = single_modal_templates(&one)
        .into_iter()
        .chain(single_agent_schemes(&one))
        .collect();
    for f in &exact {
        let v = decider.valid(f).map_err(|e| e.to_string())?;
        certs.record(f, &v, &one);
        let out = search_countermodel(f, &bounds).map_err(|e| e.to_string())?;
        if out.truncated || v.valid == out.found() {
            mismatches.push(format!("{} (decide valid={}, search found={})", f.print(&one), v.valid, out.found()));
        }
    }
    let mut soundness = Vec::new();
    let mut beyond_bounds = 0;
    let pairs = two_modal_templates(&one);
    for f in &pairs {
        let v = decider.valid(f).map_err(|e| e.to_string())?;
        certs.record(f, &v, &one);
        let out = search_countermodel(f, &bounds).map_err(|e| e.to_string())?;
        if v.valid && out.found() {
            soundness.push(f.print(&one));
        }
        if !v.valid && !out.found() {
            beyond_bounds += 1;
        }
    }

    let u = ab();
    let gen = FormulaGen::new(u.clone(), &["p", "q"], 2, 6);
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let mut decider = Decider::new(&u);
    let mut contradictions = Vec::new();
    let mut valid = 0;
    let mut refuted = 0;
    for _ in 0..200 {
        let f = gen.sample(&mut rng);
        let v = decider.valid(&f).map_err(|e| e.to_string())?;
        certs.record(&f, &v, &u);
        let b = SearchBounds::sampled(u.clone(), &["p", "q"], 3, 2, 1000, rng.gen());
        let out = search_countermodel(&f, &b).map_err(|e| e.to_string())?;
        valid += usize::from(v.valid);
        refuted += usize::from(out.found());
        if v.valid && out.found() {
            contradictions.push(f.print(&u));
        }
    }
    // valid scheme instances give the sampled grid a valid-heavy population
    let mut scheme_rng = ChaCha8Rng::seed_from_u64(78);
    let scheme_gen = FormulaGen::new(u.clone(), &["p", "q"], 2, 4);
    let mut scheme_valid = 0;
    for scheme in Scheme::VALID {
        for _ in 0..25 {
            let f = scheme.instance(&scheme_gen, &mut scheme_rng);
            let v = decider.valid(&f).map_err(|e| e.to_string())?;
            certs.record(&f, &v, &u);
            let b = SearchBounds::sampled(u.clone(), &["p", "q"], 3, 2, 1000, scheme_rng.gen());
            let out = search_countermodel(&f, &b).map_err(|e| e.to_string())?;
            scheme_valid += usize::from(v.valid);
            if v.valid && out.found() {
                contradictions.push(f.print(&u));
            }
        }
    }
    let msg = format!(
        "exhaustive: {} exact templates with {} mismatches, {} two-atom templates with {} unsound ({} need more than the bounds); \
         sampled: 200 formulas, {valid} valid, {refuted} refuted, plus {scheme_valid} valid scheme instances; {} contradictions",
        exact.len(),
        mismatches.len(),
        pairs.len(),
        soundness.len(),
        beyond_bounds,
        contradictions.len()
    );
    if mismatches.is_empty() && soundness.is_empty() && contradictions.is_empty() {
        Ok(msg)
    } else {
        Err(format!(
            "{msg}; mismatches: {}; unsound: {}; contradictions: {}",
            mismatches.join(", "),
            soundness.join(", "),
            contradictions.join(", ")
        ))
    }
}

// 6 ------------------------------------------------------------------------

fn normal_form() -> Outcome {
    let u = ab();
    let atoms = strings(&["p", "q"]);
    let gen = FormulaGen::new(u.clone(), &["p", "q"], 2, 6);
    let mut rng = ChaCha8Rng::seed_from_u64(606);
    let mut mismatches = 0;
    let mut depth_errors = 0;
    let mut checks = 0;
    for _ in 0..200 {
        let f = gen.sample_with_depth(&mut rng, 1);
        let clauses = normalize(&f, &u).map_err(|e| e.to_string())?;
        if clauses.iter().map(|c| c.modal_depth()).max() != Some(f.modal_depth()) {
            depth_errors += 1;
        }
        let g = conjunction_of(&clauses);
        let seed = rng.gen();
        for k in 0..100 {
            let m = ladder_model(&u, &atoms, 3, 2, seed, k).unwrap();
            let s = rng.gen_range(0..m.n_states());
            checks += 1;
            if eval(&m, s, &f) != eval(&m, s, &g) {
                mismatches += 1;
            }
        }
    }
    let msg = format!("200 formulas, {checks} pointed checks: {mismatches} mismatches, {depth_errors} depth errors");
    if mismatches == 0 && depth_errors == 0 {
        Ok(msg)
    } else {
        Err(msg)
    }
}

// 7 ------------------------------------------------------------------------

fn worked_example(certs: &mut Certs) -> Outcome {
    let u = ab();
    let f = parse(
        "false | ((<{a}>p & <{b}>q & <{}>true) -> (<{a,b}>(p & q) | <{a}>(~p | q) | <{a,b}>false))",
        &u,
    )
    .unwrap();
    let v = Decider::new(&u).valid(&f).map_err(|e| e.to_string())?;
    certs.record(&f, &v, &u);
    if v.valid {
        return Err("judged VALID".into());
    }
    let clauses = normalize(&f, &u).map_err(|e| e.to_string())?;
    if clauses.len() != 1 {
        return Err(format!("{} clauses", clauses.len()));
    }
    let cm = build_countermodel(&clauses[0], &u).map_err(|e| e.to_string())?;
    let gf = cm.game_form.as_ref().ok_or("no game form")?;
    let betas: Vec<String> = gf
        .betas
        .iter()
        .map(|b| format!("beta-{}-{} witness {}", b.ni + 1, b.pi + 1, u.name(b.witness)))
        .collect();
    let certified = eval(&cm.pointed.model, cm.pointed.state, &f) == Ok(false)
        && eval(&cm.pointed.model, cm.pointed.state, &hub_conjunction(&clauses[0])) == Ok(true);
    let msg = format!(
        "INVALID; {} grafted submodels, betas [{}], certified={certified}",
        gf.targets.len(),
        betas.join(", ")
    );
    let one_beta = gf.betas.len() == 1 && gf.betas[0].ni == 1 && gf.betas[0].pi == 1 && u.name(gf.betas[0].witness) == "b";
    if one_beta && gf.targets.len() == 8 && certified {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn main() -> ExitCode {
    let start = Instant::now();
    let mut certs = Certs::default();
    let results: Vec<(&str, Outcome)> = vec![
        ("1 fixture classification", fixture_classification()),
        ("2 constraint equivalence", constraint_equivalence()),
        ("3 decider scheme suite", scheme_suite(&mut certs)),
        ("5 oracle agreement", oracle_agreement(&mut certs)),
        ("6 normal form", normal_form()),
        ("7 worked example", worked_example(&mut certs)),
    ];
    let cert = ("4 certification", certification(&certs));
    let mut ordered: Vec<(&str, Outcome)> = results;
    ordered.insert(3, cert);

    let mut failed = 0;
    for (name, outcome) in &ordered {
        match outcome {
            Ok(msg) => println!("PASS  {name}: {msg}"),
            Err(msg) => {
                failed += 1;
                println!("FAIL  {name}: {msg}");
            }
        }
    }
    println!("acceptance: {} of {} criteria passed in {:.1?}", ordered.len() - failed, ordered.len(), start.elapsed());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

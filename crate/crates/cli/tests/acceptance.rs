//! End-to-end acceptance run: one PASS/FAIL line per criterion, exit status
//! nonzero if any criterion fails. Runs without the libtest harness so the
//! lines are always printed.

use std::sync::Arc;
use std::time::Instant;

use ualg::algebra::{check_hom, is_algebra_of, is_subalgebra, Homomorphism};
use ualg::congruence::{
    all_congruences, effectiveness_check, factorize, permutability_report, reflexive_implies_equivalence_report,
};
use ualg::corpus::{BUILTIN_SOURCE, GROUP_THEORY};
use ualg::lemmas::{factorization_kernel_check, run_harness, third_isomorphism_check, LemmaKind};
use ualg::semidirect::{
    action_to_point, build_semidirect, point_roundtrip_iso, point_to_action, reconstruct_omega_loop_point,
    semidirect_laws, split_exact_check, OmegaLoopSpec,
};
use ualg::syntax::{format_source, parse_source};
use ualg::topalg::{
    certify, closure_is_subalgebra, hausdorff_iff_constants_closed, homogeneity_check, iota_theta_check,
    is_regular_epi, neighborhood_base_check, open_subalgebra_closed, pullback_stability_check,
    regular_epi_iff_open_surjection, regularity_check, TopAlgebra,
};
use ualg::topology::{is_continuous, top_not_regular_counterexample, FiniteTopology, QuotientFailure};
use ualg::witness::{check_maltsev_witness, check_protomodular_witness, generate_clone, has_maltsev_term_operation};
use ualg::{sets, FiniteAlgebra, Registry, Subset};
use ualg_cli::{run, Report};

/// Relation enumeration cap for the reflexive-relation sweep; the library
/// default of 6 would skip the order-8 groups.
const RELATION_CAP: usize = 8;
const HARNESS_SEED: u64 = 0;
const HARNESS_COUNT: usize = 200;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn(&Registry) -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn lib<T>(r: ualg::Result<T>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn cli(args: &[&str]) -> Result<(i32, Report), String> {
    let mut argv = vec!["ualg", "--json"];
    argv.extend_from_slice(args);
    let out = run(argv);
    if out.code > 1 {
        return Err(format!("`ualg {}` exited {}: {}", args.join(" "), out.code, out.stderr.trim()));
    }
    let report: Report = serde_json::from_str(&out.stdout).map_err(|e| e.to_string())?;
    Ok((out.code, report))
}

fn subalgebras(alg: &FiniteAlgebra) -> Vec<Subset> {
    let n = alg.size();
    (1u32..1 << n)
        .map(|m| sets::from_elements(n, (0..n).filter(|&x| m >> x & 1 == 1)))
        .filter(|s| is_subalgebra(alg, s))
        .collect()
}

/// Certified topologies on `alg`: registered ones plus discrete and
/// indiscrete.
fn topologies_on(reg: &Registry, alg: &Arc<FiniteAlgebra>) -> Vec<Arc<TopAlgebra>> {
    let mut out: Vec<Arc<TopAlgebra>> = reg.top_algebras.values().filter(|t| t.alg.name() == alg.name()).cloned().collect();
    for top in [FiniteTopology::discrete(alg.size()), FiniteTopology::indiscrete(alg.size())] {
        if out.iter().all(|t| t.top != top) {
            if let Ok(t) = certify(alg, &top) {
                out.push(Arc::new(t));
            }
        }
    }
    out
}

fn criterion_1(reg: &Registry) -> Outcome {
    let sweep = reg.sweep();
    if let Some(bad) = sweep.iter().find(|s| !s.verdict.holds) {
        return Err(format!("{} {}: {:?}", bad.kind, bad.name, bad.verdict.witness));
    }
    let grp = lib(reg.theory(GROUP_THEORY))?;
    ensure(grp.axioms.len() == 5, || format!("Grp has {} axioms", grp.axioms.len()))?;
    for name in ["Z1", "Z2", "Z3", "Z4", "Z5", "Z6", "Z7", "Z8", "Klein", "S3"] {
        let rep = lib(is_algebra_of(lib(reg.algebra(name))?))?;
        ensure(rep.holds(), || format!("{name} fails a group axiom"))?;
    }
    for alg in reg.algebras.values() {
        ensure(lib(is_algebra_of(alg))?.holds(), || format!("{} fails its theory", alg.name()))?;
    }
    let (code, report) = cli(&["corpus"])?;
    ensure(code == 0 && !report.failed(), || "`ualg corpus` did not pass".into())?;
    Ok(format!("{} sweep items, {} algebras", sweep.len(), reg.algebras.len()))
}

fn criterion_2(reg: &Registry) -> Outcome {
    let composite = &reg.maltsev[GROUP_THEORY];
    let groups = reg.groups();
    for g in &groups {
        let search = lib(has_maltsev_term_operation(g))?;
        let term = search.term.ok_or_else(|| format!("no Maltsev term found on {}", g.name()))?;
        let f = lib(g.term_function(&term, 3))?;
        let n = g.size();
        let laws = (0..n).all(|x| (0..n).all(|y| f[(x * n + x) * n + y] == y && f[(x * n + y) * n + y] == x));
        ensure(laws, || format!("term {term} found on {} is not Maltsev", g.name()))?;
        ensure(lib(check_maltsev_witness(g, composite))?.holds, || format!("x.y^-1.z fails on {}", g.name()))?;
    }
    let m2 = lib(reg.algebra("M2"))?;
    let search = lib(has_maltsev_term_operation(m2))?;
    ensure(!search.found(), || "M2 has a Maltsev term".into())?;
    let clone = lib(generate_clone(m2, 3))?;
    // Ternary term operations of ({0,1}, max, 0): the constant 0 and the
    // joins of nonempty sets of projections.
    let expected = 1 + 7;
    ensure(clone.len() == expected && search.explored == expected, || {
        format!("M2 ternary clone has {} (explored {}), expected {expected}", clone.len(), search.explored)
    })?;
    let (code, report) = cli(&["maltsev", "--algebra", "M2"])?;
    ensure(code == 0, || "`ualg maltsev --algebra M2` exit code".into())?;
    ensure(
        report.notes.iter().any(|n| n.contains(&format!("no Maltsev term operation (clone exhausted, size {expected})"))),
        || format!("{:?}", report.notes),
    )?;
    Ok(format!("{} groups witnessed, M2 clone size {expected} exhausted", groups.len()))
}

fn criterion_3(reg: &Registry) -> Outcome {
    let w = &reg.protomodular[GROUP_THEORY];
    ensure(w.n() == 1, || format!("group witness has n = {}", w.n()))?;
    let composite = ualg::witness::MaltsevWitness { p: w.composite() };
    let mut tested = 0;
    for g in reg.groups() {
        let rep = lib(check_protomodular_witness(g, w))?;
        ensure(rep.holds(), || format!("{}: {:?}", g.name(), rep.first_failure()))?;
        ensure(lib(check_maltsev_witness(g, &composite))?.holds, || format!("composite fails on {}", g.name()))?;
        tested += 1;
    }
    let lw = &reg.protomodular["Loop"];
    for alg in reg.models("Loop") {
        ensure(lib(check_protomodular_witness(alg, lw))?.holds(), || format!("Loop witness fails on {}", alg.name()))?;
    }
    Ok(format!("{tested} groups, composite {}", w.composite()))
}

fn criterion_4(reg: &Registry) -> Outcome {
    let groups = reg.groups();
    for g in &groups {
        let p = lib(permutability_report(g))?;
        ensure(p.holds, || format!("congruences of {} do not permute", g.name()))?;
        let r = lib(reflexive_implies_equivalence_report(g, RELATION_CAP))?;
        ensure(r.holds, || format!("{}: {:?}", g.name(), r.witness.map(|w| w.pairs())))?;
    }
    let m2 = lib(reg.algebra("M2"))?;
    let r = lib(reflexive_implies_equivalence_report(m2, RELATION_CAP))?;
    let witness = r.witness.map(|w| w.pairs());
    ensure(!r.holds && witness == Some(vec![(0, 0), (0, 1), (1, 1)]), || format!("M2 witness {witness:?}"))?;
    Ok(format!("{} groups, relation cap {RELATION_CAP}; M2 witness <= on {{0,1}}", groups.len()))
}

fn criterion_5(reg: &Registry) -> Outcome {
    for f in reg.homs.values() {
        let fact = lib(factorize(f))?;
        let composes = (0..f.dom.size()).all(|x| fact.m.map[fact.e.map[x]] == f.map[x]);
        ensure(fact.m.is_injective() && fact.e.is_surjective() && composes, || format!("{} factorization", f.name))?;
        ensure(check_hom(&fact.e).holds && check_hom(&fact.m).holds, || format!("{} factors are not homs", f.name))?;
        let v = lib(factorization_kernel_check(f))?;
        ensure(v.holds, || format!("{}: kernel biconditional fails", f.name))?;
    }
    let mut congruences = 0;
    for alg in reg.algebras.values().filter(|a| a.size() <= 6) {
        for c in lib(all_congruences(alg))? {
            let v = lib(effectiveness_check(alg, &c))?;
            ensure(v.holds, || format!("{}: {:?} not effective", alg.name(), c.blocks()))?;
            congruences += 1;
        }
    }
    Ok(format!("{} homs, {congruences} congruences effective", reg.homs.len()))
}

fn criterion_6(reg: &Registry) -> Outcome {
    let t = top_not_regular_counterexample();
    ensure(t.f_quotient, || "f is not a quotient map".into())?;
    match &t.pi2_quotient.witness {
        Some(QuotientFailure::NotFinal { set }) if sets::elements(set) == vec![0] && !t.pi2_quotient.holds => {}
        other => return Err(format!("pi2 verdict {other:?}")),
    }
    ensure(t.pullback == vec![(0, 0), (3, 1), (3, 2)], || format!("pullback {:?}", t.pullback))?;
    let (code, report) = cli(&["counterexample", "top-not-regular"])?;
    ensure(code == 0, || "counterexample exit code".into())?;
    ensure(report.notes.iter().any(|n| n == "π₂ is not a quotient map: witness {b₁}"), || format!("{:?}", report.notes))?;
    let mut checked = 0;
    let tops = reg
        .topologies
        .values()
        .map(|t| t.topology.clone())
        .chain(reg.spaces.values().cloned())
        .chain(reg.top_algebras.values().map(|t| t.top.clone()))
        .chain([t.a, t.b, t.c, t.pullback_top]);
    for top in tops {
        let v = top.verify_closure_invariants();
        ensure(v.holds, || format!("closure invariants: {:?}", v.witness))?;
        checked += 1;
    }
    Ok(format!("pi2 witness {{b1}}, {checked} topologies closed under the lattice operations"))
}

fn criterion_7(reg: &Registry) -> Outcome {
    let mut tops = 0;
    for (name, t) in &reg.top_algebras {
        let fail = |what: &str| format!("{name}: {what}");
        if t.alg.op_index("inv").is_ok() {
            ensure(lib(homogeneity_check(t))?.holds, || fail("homogeneity"))?;
        }
        let Some(w) = reg.protomodular.get(&t.alg.theory().name) else { continue };
        if !lib(check_protomodular_witness(&t.alg, w))?.holds() {
            continue;
        }
        ensure(lib(regularity_check(t, w))?.holds, || fail("regularity"))?;
        ensure(lib(hausdorff_iff_constants_closed(t, w))?.holds(), || fail("Hausdorff iff constants closed"))?;
        for a in 0..t.alg.size() {
            ensure(lib(neighborhood_base_check(t, w, a))?.holds, || fail(&format!("neighborhood base at {a}")))?;
            ensure(lib(iota_theta_check(t, w, a))?.holds(), || fail(&format!("iota/theta at {a}")))?;
        }
        for s in subalgebras(&t.alg) {
            if t.top.is_open(&s) {
                ensure(lib(open_subalgebra_closed(t, w, &s))?.holds, || fail(&format!("open {} not closed", sets::format(&s))))?;
            }
            ensure(lib(closure_is_subalgebra(t, &s))?.holds, || fail(&format!("closure of {}", sets::format(&s))))?;
        }
        tops += 1;
    }

    let mut agreements = 0;
    let mut regular_epis: Vec<(Arc<Homomorphism>, Arc<TopAlgebra>, Arc<TopAlgebra>)> = Vec::new();
    for f in reg.homs.values().filter(|f| f.is_surjective()) {
        let Some(w) = reg.maltsev.get(&f.dom.theory().name) else { continue };
        for d in topologies_on(reg, &f.dom) {
            for c in topologies_on(reg, &f.cod) {
                if !is_continuous(&d.top, &c.top, &f.map).holds {
                    continue;
                }
                let b = lib(regular_epi_iff_open_surjection(f, &d, &c, w))?;
                ensure(b.holds(), || format!("{}: regular epi {} but open surjection {}", f.name, b.left, b.right))?;
                agreements += 1;
                if is_regular_epi(f, &d, &c) {
                    regular_epis.push((f.clone(), d.clone(), c.clone()));
                }
            }
        }
    }

    let mut pullbacks = 0;
    for (f, fd, c) in &regular_epis {
        let mut gs: Vec<Arc<Homomorphism>> = reg.homs.values().filter(|g| g.cod.name() == c.alg.name()).cloned().collect();
        gs.push(Arc::new(Homomorphism::identity(&c.alg)));
        for g in gs {
            for gd in topologies_on(reg, &g.dom) {
                if !is_continuous(&gd.top, &c.top, &g.map).holds {
                    continue;
                }
                let p = lib(pullback_stability_check(f, fd, c, &g, &gd))?;
                ensure(p.holds(), || format!("pullback of {} along {} is not a regular epi", f.name, g.name))?;
                pullbacks += 1;
            }
        }
    }
    ensure(pullbacks >= 5, || format!("only {pullbacks} pullback instances"))?;
    Ok(format!("{tops} top algebras, {agreements} epi agreements, {pullbacks} pullbacks stable"))
}

fn criterion_8(reg: &Registry) -> Outcome {
    let act = lib(reg.action("Z3_inversion"))?;
    let sd = lib(build_semidirect(act))?;
    let g = &sd.algebra;
    ensure(g.size() == 6 && lib(is_algebra_of(g))?.holds(), || "Z3 x| Z2 is not a group of order 6".into())?;
    let mul = lib(g.op_index("mul"))?;
    let abelian = (0..6).all(|x| (0..6).all(|y| g.apply(mul, &[x, y]) == g.apply(mul, &[y, x])));
    ensure(!abelian, || "Z3 x| Z2 is abelian".into())?;
    for (name, act) in &reg.actions {
        let sd = lib(build_semidirect(act))?;
        ensure(lib(semidirect_laws(act, &sd))?.holds, || format!("{name}: semidirect laws"))?;
        let (_, pt) = lib(action_to_point(act))?;
        let back = lib(point_to_action(&pt))?;
        ensure(back.phi == act.phi, || format!("{name}: action not recovered"))?;
    }
    let mut points = 0;
    for (name, pt) in &reg.points {
        if pt.total().theory().name != GROUP_THEORY {
            continue;
        }
        ensure(lib(point_roundtrip_iso(pt))?.holds(), || format!("{name}: point round trip"))?;
        let se = lib(split_exact_check(pt))?;
        ensure(se.holds(), || format!("{name}: split exact factorization at {:?}", se.factorization.witness))?;
        points += 1;
    }
    Ok(format!("order 6 nonabelian; {} actions, {points} points round trip", reg.actions.len()))
}

fn criterion_9(reg: &Registry) -> Outcome {
    let grp = lib(reg.theory(GROUP_THEORY))?;
    let gspec = OmegaLoopSpec::for_group(grp).ok_or("Grp is not an Omega-loop theory")?;
    let lspec = lib(OmegaLoopSpec::from_symbols(lib(reg.theory("Loop"))?, "zero", "add", "sub"))?;
    let disc = |a: &FiniteAlgebra| FiniteTopology::discrete(a.size());
    let named = [
        ("S3_point", None, &gspec),
        ("S3_point", Some("S3_a3"), &gspec),
        ("Z3xZ2_point", None, &gspec),
        ("L5_diagonal_point", None, &lspec),
    ];
    for (point, top, spec) in named {
        let pt = lib(reg.point(point))?;
        let ta = match top {
            Some(t) => lib(reg.topology(t))?.topology.clone(),
            None => disc(pt.total()),
        };
        let rec = lib(reconstruct_omega_loop_point(spec, pt, &ta, &disc(pt.base())))?;
        ensure(rec.holds(), || format!("{point} with {}: {rec:?}", top.unwrap_or("discrete")))?;
    }
    // product topology recovered for every continuous choice of topologies
    let mut pairs = 0;
    for pt in reg.points.values().filter(|p| p.total().theory().name == GROUP_THEORY) {
        for ta in topologies_on(reg, pt.total()) {
            for tb in topologies_on(reg, pt.base()) {
                if !is_continuous(&ta.top, &tb.top, &pt.p.map).holds || !is_continuous(&tb.top, &ta.top, &pt.s.map).holds {
                    continue;
                }
                let rec = lib(reconstruct_omega_loop_point(&gspec, pt, &ta.top, &tb.top))?;
                ensure(rec.holds() && rec.product_topology, || format!("{}: product topology not recovered", pt.name))?;
                pairs += 1;
            }
        }
    }
    Ok(format!("4 named reconstructions, {pairs} group point topologies"))
}

fn criterion_10(reg: &Registry) -> Outcome {
    let pool = lib(reg.group_pool())?;
    let mut parts = Vec::new();
    for kind in LemmaKind::ALL {
        let rep = lib(run_harness(&pool, kind, HARNESS_SEED, HARNESS_COUNT))?;
        ensure(rep.failures.is_empty(), || format!("{}: {:?}", kind.name(), rep.failures.first()))?;
        ensure(rep.count == HARNESS_COUNT, || format!("{}: {} instances", kind.name(), rep.count))?;
        parts.push(format!("{} {}", kind.name(), rep.count));
    }
    let z8 = lib(reg.algebra("Z8"))?;
    let t = lib(third_isomorphism_check(z8, &sets::from_elements(8, [0, 2, 4, 6]), &sets::from_elements(8, [0, 4])))?;
    ensure(t.holds(), || "Z8 third isomorphism grid".into())?;
    let iso = t.iso.as_ref().ok_or("no isomorphism (G/H)/(K/H) -> G/K")?;
    ensure(iso.dom.size() == 2 && iso.cod.size() == 2, || "quotients are not of order 2".into())?;
    Ok(format!("seed {HARNESS_SEED}: {}; Z8 grid verified", parts.join(", ")))
}

/// Mutations of the builtin corpus and the error class each must produce.
const MUTATIONS: [(&str, &str, &str); 20] = [
    ("theory Grp {", "theory Grp (", "syntax"),
    ("op e/0;", "op e/0", "syntax"),
    ("algebra Z1 : Grp", "algebra Z1 @ Grp", "syntax"),
    ("axiom mul(x, e) = x;", "axiom mul(x) = x;", "arity-mismatch"),
    ("axiom mul(inv(x), x) = e;", "axiom mul(inv(x, x), x) = e;", "arity-mismatch"),
    ("axiom mul(e, x) = x;", "axiom mul(e(x), x) = x;", "arity-mismatch"),
    ("axiom mul(x, inv(x)) = e;", "axiom mul(x, neg(x)) = e;", "unknown-symbol"),
    ("inv = [0,1]; mul = [[0,1],[1,0]];", "neg = [0,1]; mul = [[0,1],[1,0]];", "unknown-symbol"),
    ("algebra Z2 : Grp", "algebra Z2 : Group", "dangling-reference"),
    ("topology Z2_disc on Z2", "topology Z2_disc on Z9", "dangling-reference"),
    ("hom z4_mod2 : Z4 -> Z2", "hom z4_mod2 : Z4 -> Z2b", "dangling-reference"),
    ("algebra Z3 : Grp", "algebra Z2 : Grp", "duplicate"),
    ("op inv/1;", "op e/1;", "duplicate"),
    ("carrier = 2; e = 0; inv = [0,1]; mul", "carrier = 2; e = 0; mul", "missing-table"),
    ("mul = [[0,1],[1,0]];", "mul = [[0,1],[1]];", "table-shape"),
    ("inv = [0,1]; mul = [[0,1],[1,0]];", "inv = [[0],[1]]; mul = [[0,1],[1,0]];", "table-shape"),
    ("mul = [[0,1],[1,0]];", "mul = [[0,1],[1,2]];", "value-out-of-range"),
    ("carrier = 1;", "carrier = 0;", "empty-carrier"),
    ("hom m2_id : M2 -> M2", "hom m2_id : M2 -> Z2", "theory-mismatch"),
    ("hom z4_mod2 : Z4 -> Z2 = [0,1,0,1];", "hom z4_mod2 : Z4 -> Z2 = [0,1,0];", "shape-mismatch"),
];

fn criterion_11(reg: &Registry) -> Outcome {
    let parsed = parse_source(BUILTIN_SOURCE).map_err(|e| e.to_string())?;
    let printed = format_source(&parsed.declarations);
    let again = parse_source(&printed).map_err(|e| e.to_string())?;
    ensure(again.declarations == parsed.declarations, || "parse . format is not the identity".into())?;
    ensure(parsed.declarations.len() == reg.declarations.len(), || "registry and source disagree".into())?;
    for (i, (from, to, class)) in MUTATIONS.iter().enumerate() {
        ensure(BUILTIN_SOURCE.contains(from), || format!("mutation {i}: `{from}` not in the corpus"))?;
        let text = BUILTIN_SOURCE.replacen(from, to, 1);
        match parse_source(&text) {
            Ok(_) => return Err(format!("mutation {i} (`{to}`) parsed")),
            Err(e) if e.kind.class() == *class => {}
            Err(e) => return Err(format!("mutation {i}: expected {class}, got {} ({e})", e.kind.class())),
        }
    }
    Ok(format!("{} declarations round trip, {} mutations classified", parsed.declarations.len(), MUTATIONS.len()))
}

fn main() {
    let reg = match Registry::builtin() {
        Ok(r) => r,
        Err(e) => {
            println!("FAIL criterion 1: corpus did not load: {e}");
            std::process::exit(1);
        }
    };
    let criteria: [Criterion; 11] = [
        ("corpus load and invariant sweep", criterion_1),
        ("Maltsev terms on groups, none on M2", criterion_2),
        ("protomodular witness and its composite", criterion_3),
        ("permutability and reflexive relations", criterion_4),
        ("factorization and effective congruences", criterion_5),
        ("quotient maps not pullback stable", criterion_6),
        ("topological algebra checks", criterion_7),
        ("semidirect products and points", criterion_8),
        ("Omega-loop point reconstruction", criterion_9),
        ("diagram lemma harness", criterion_10),
        ("parser round trip and mutations", criterion_11),
    ];
    let mut failed = 0;
    for (i, (title, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = check(&reg);
        let ms = start.elapsed().as_millis();
        match outcome {
            Ok(detail) => println!("PASS criterion {}: {title} ({detail}) [{ms} ms]", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {}: {title}: {why} [{ms} ms]", i + 1);
            }
        }
    }
    println!("acceptance: {} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}

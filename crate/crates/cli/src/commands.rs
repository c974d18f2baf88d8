use std::collections::BTreeSet;
use std::fmt::Display;
use std::sync::Arc;

use itertools::Itertools;
use ualg::algebra::{
    check_hom, enumerate_homs, is_algebra_of, product, satisfies, subalgebra_closure, HomFailure,
};
use ualg::congruence::{
    all_congruences, classify_relation, congruence_generated, effectiveness_check, factorize, is_congruence,
    kernel_pair, permutability_report, quotient, reflexive_implies_equivalence_report,
};
use ualg::group::GroupView;
use ualg::lemmas::{self, LemmaKind};
use ualg::semidirect::{
    action_to_point, build_semidirect, complement_check, point_roundtrip_iso, point_to_action,
    reconstruct_omega_loop_point, semidirect_laws, split_exact_check, OmegaLoopSpec, SplitPoint,
};
use ualg::syntax::{parse_equation, parse_source_in, parse_term, Declaration};
use ualg::topalg::{
    certify, closure_is_subalgebra, continuity_report, hausdorff_iff_constants_closed, homogeneity_check,
    iota_theta_check, is_regular_epi, neighborhood_base_check, open_subalgebra_closed,
    regular_epi_iff_open_surjection, regularity_check, TopAlgebra,
};
use ualg::topology::{
    is_continuous, is_open_map, is_quotient_map, quotient_topology, separation_report,
    top_not_regular_counterexample, FiniteTopology, QuotientFailure,
};
use ualg::witness::{
    check_maltsev_witness, check_protomodular_witness, check_semiabelian_preconditions, generate_clone,
    has_maltsev_term_operation, search_protomodular_witness, LawFailure, MaltsevWitness,
};
use ualg::{corpus, sets, Congruence, Error, FiniteAlgebra, Homomorphism, Registry, Result, Subset, Verdict};

use crate::report::Report;
use crate::{Command, CounterexampleArg, LemmaArg};

pub fn execute(reg: &Registry, cmd: &Command, echo: String) -> Result<Report> {
    let mut r = Report::new(echo);
    match cmd {
        Command::Check { path } => check(reg, path, &mut r)?,
        Command::Eval { algebra, term, env } => eval(reg, algebra, term, env, &mut r)?,
        Command::Satisfies {
            algebra,
            equation,
            theory,
        } => satisfies_cmd(reg, algebra, equation.as_deref(), theory.as_deref(), &mut r)?,
        Command::Hom {
            name,
            from,
            to,
            map,
            enumerate,
        } => hom(reg, name.as_deref(), from.as_deref(), to.as_deref(), map.as_deref(), *enumerate, &mut r)?,
        Command::Product { left, right } => product_cmd(reg, left, right, &mut r)?,
        Command::KernelPair { hom } => kernel_pair_cmd(reg, hom, &mut r)?,
        Command::Congruence { algebra, pairs } => congruence_cmd(reg, algebra, pairs.as_deref(), &mut r)?,
        Command::Quotient { algebra, labels, hom } => {
            quotient_cmd(reg, algebra.as_deref(), labels.as_deref(), hom.as_deref(), &mut r)?
        }
        Command::Factorize { hom, all } => {
            let homs = select(&reg.homs, hom.as_deref(), *all, "hom")?;
            for h in homs {
                factorize_one(h, &mut r)?;
            }
        }
        Command::Permute { algebra } => {
            let alg = reg.algebra(algebra)?;
            let v = permutability_report(alg)?;
            r.fact("congruences", all_congruences(alg)?.len());
            r.verdict(
                format!("all congruences of {algebra} permute"),
                v.holds,
                v.witness.map(|(a, b)| format!("{a} and {b}")),
            );
        }
        Command::ReflexiveEq { algebra, max_carrier } => {
            let alg = reg.algebra(algebra)?;
            let v = reflexive_implies_equivalence_report(alg, *max_carrier)?;
            r.verdict(
                format!("every compatible reflexive relation on {algebra} is an equivalence"),
                v.holds,
                v.witness.map(|rel| rel.to_string()),
            );
        }
        Command::Clone { algebra, arity, list } => {
            let alg = reg.algebra(algebra)?;
            let c = generate_clone(alg, *arity)?;
            r.fact("arity", arity);
            r.fact("size", c.len());
            if *list {
                for (f, t) in c.funcs().iter().zip(c.terms()) {
                    r.note(format!("{} = {t}", list_str(f)));
                }
            }
        }
        Command::Maltsev { algebra, all } => {
            for alg in select(&reg.algebras, algebra.as_deref(), *all, "algebra")? {
                maltsev_one(reg, alg, &mut r)?;
            }
        }
        Command::Protomodular {
            theory,
            algebra,
            search,
        } => protomodular(reg, theory, algebra.as_deref(), *search, &mut r)?,
        Command::Topcheck { topology, all } => {
            let names: Vec<&String> = match topology {
                Some(t) => vec![reg.topology(t).map(|nt| &nt.name)?],
                None if *all => reg.topologies.keys().collect(),
                None => Vec::new(),
            };
            for name in names {
                topcheck_one(reg, name, &mut r)?;
            }
        }
        Command::Sep { topology, space } => {
            let (name, top) = space_arg(reg, topology.as_deref(), space.as_deref())?;
            let s = separation_report(&top);
            r.verdict(format!("{name} is T1"), s.t1, None);
            r.verdict(format!("{name} is Hausdorff"), s.hausdorff, None);
            r.verdict(format!("{name} is regular"), s.regular, None);
            r.instance(
                "T1 iff discrete",
                s.t1 == top.is_discrete(),
                None,
            );
        }
        Command::QuotientTop { topology, space, map } => {
            let (name, top) = space_arg(reg, topology.as_deref(), space.as_deref())?;
            if map.len() != top.carrier() {
                return Err(Error::Invalid(format!(
                    "map has {} entries for a space of {} points",
                    map.len(),
                    top.carrier()
                )));
            }
            let m = map.iter().max().map_or(0, |x| x + 1);
            let q = quotient_topology(&top, map, m)?;
            r.fact("space", name);
            r.fact("quotient generators", sets_str(&q.generators()));
            let v = is_quotient_map(&top, &q, map);
            r.instance("map is a quotient map onto the quotient topology", v.holds, v.witness.map(|w| quotient_failure(&w, None)));
        }
        Command::OpenMap { hom, dom, cod } => open_map(reg, hom, dom, cod, &mut r)?,
        Command::Semidirect { action, all } => {
            for (name, act) in &reg.actions {
                if *all || action.as_deref() == Some(name) {
                    semidirect_one(name, act, &mut r)?;
                }
            }
            if let Some(a) = action {
                reg.action(a)?;
            }
        }
        Command::Complement { algebra, normal, sub } => {
            let alg = reg.algebra(algebra)?;
            let (k, q) = (set_arg(alg.size(), normal)?, set_arg(alg.size(), sub)?);
            let v = complement_check(alg, &k, &q)?;
            r.verdict(
                format!("{} complements {} in {algebra}", sets::format(&q), sets::format(&k)),
                v.holds,
                v.witness,
            );
        }
        Command::PointRoundtrip { point, all } => {
            for pt in select(&reg.points, point.as_deref(), *all, "point")? {
                roundtrip_one(pt, &mut r)?;
            }
        }
        Command::Reconstruct { point, top_a, top_b } => reconstruct(reg, point, top_a, top_b, &mut r)?,
        Command::Lemma { kind, seed, count } => lemma(reg, *kind, *seed, *count, &mut r)?,
        Command::Counterexample { which } => match which {
            CounterexampleArg::TopNotRegular => top_not_regular(&mut r),
            CounterexampleArg::M2NotMaltsev => m2_not_maltsev(reg, &mut r)?,
        },
        Command::Corpus { verbose, source } => {
            if *source {
                r.note(corpus::BUILTIN_SOURCE.trim_end());
            } else {
                corpus_cmd(reg, *verbose, &mut r);
            }
        }
    }
    Ok(r)
}

fn list_str<T: Display>(xs: &[T]) -> String {
    format!("[{}]", xs.iter().join(","))
}

fn sets_str(xs: &[Subset]) -> String {
    if xs.is_empty() {
        "none".into()
    } else {
        xs.iter().map(sets::format).join(" ")
    }
}

fn set_arg(n: usize, xs: &[usize]) -> Result<Subset> {
    if let Some(x) = xs.iter().find(|&&x| x >= n) {
        return Err(Error::Invalid(format!("element {x} is outside the carrier {{0..{}}}", n - 1)));
    }
    Ok(sets::from_elements(n, xs.iter().copied()))
}

fn env_str(names: &[String], env: &[usize]) -> String {
    names.iter().zip(env).map(|(v, x)| format!("{v}={x}")).join(", ")
}

fn hom_failure(f: HomFailure) -> String {
    format!("{}({})", f.symbol, f.args.iter().join(","))
}

fn law_failure(f: LawFailure) -> String {
    format!("{} at {}", f.law, list_str(&f.env))
}

fn quotient_failure(w: &QuotientFailure, labels: Option<&dyn Fn(usize) -> String>) -> String {
    let show = |s: &Subset| match labels {
        Some(l) => format!("{{{}}}", s.ones().map(l).join(",")),
        None => sets::format(s),
    };
    match w {
        QuotientFailure::NotSurjective { missing } => format!("{missing} is not hit"),
        QuotientFailure::NotContinuous { open } => format!("preimage of {} is not open", show(open)),
        QuotientFailure::NotFinal { set } => show(set),
    }
}

/// `--name X` or every entry with `--all`.
fn select<'a, T>(
    map: &'a std::collections::BTreeMap<String, T>,
    name: Option<&str>,
    all: bool,
    kind: &str,
) -> Result<Vec<&'a T>> {
    match name {
        Some(n) => map
            .get(n)
            .map(|t| vec![t])
            .ok_or_else(|| Error::UnknownName {
                kind: kind.to_string(),
                name: n.to_string(),
            }),
        None if all => Ok(map.values().collect()),
        None => Ok(Vec::new()),
    }
}

fn space_arg(reg: &Registry, topology: Option<&str>, space: Option<&str>) -> Result<(String, FiniteTopology)> {
    match (topology, space) {
        (Some(t), _) => Ok((t.to_string(), reg.topology(t)?.topology.clone())),
        (None, Some(s)) => Ok((s.to_string(), reg.space(s)?.clone())),
        (None, None) => Err(Error::Invalid("give --topology or --space".into())),
    }
}

fn axiom_verdict(alg: &FiniteAlgebra) -> Result<Verdict<String>> {
    let rep = is_algebra_of(alg)?;
    Ok(match rep.results.into_iter().find(|(_, v)| !v.holds) {
        None => Verdict::pass(),
        Some((eq, v)) => Verdict::fail(format!("{eq} fails at {}", list_str(&v.witness.unwrap_or_default()))),
    })
}

fn check(reg: &Registry, path: &std::path::Path, r: &mut Report) -> Result<()> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Invalid(format!("cannot read {}: {e}", path.display())))?;
    let parsed = parse_source_in(&text, reg.scope())?;
    r.fact("declarations", parsed.declarations.len());
    for decl in &parsed.declarations {
        match decl {
            Declaration::Theory(t) => {
                r.fact(
                    format!("theory {}", t.name),
                    format!("{} symbols, {} axioms", t.signature.len(), t.axioms.len()),
                );
            }
            Declaration::Algebra(a) => {
                let v = axiom_verdict(a)?;
                r.instance(format!("{} satisfies {}", a.name(), a.theory().name), v.holds, v.witness);
            }
            Declaration::Topology(t) => {
                let v = t.topology.verify_closure_invariants();
                r.instance(format!("{} closure invariants", t.name), v.holds, v.witness);
                let cert = certify(&t.algebra, &t.topology);
                r.verdict(
                    format!("{} makes the operations of {} continuous", t.name, t.algebra.name()),
                    cert.is_ok(),
                    cert.err().map(|e| e.to_string()),
                );
            }
            Declaration::Hom(h) => {
                let v = check_hom(h);
                r.instance(format!("{} is a homomorphism", h.name), v.holds, v.witness.map(hom_failure));
            }
            Declaration::Point(p) => {
                let v = p.split_verdict();
                r.instance(
                    format!("{}: p after s is the identity", p.name),
                    v.holds,
                    v.witness.map(|y| format!("p(s({y})) != {y}")),
                );
            }
        }
    }
    for w in parsed.warnings {
        r.note(format!("warning: {w}"));
    }
    Ok(())
}

fn eval(reg: &Registry, algebra: &str, term: &str, env: &[usize], r: &mut Report) -> Result<()> {
    let alg = reg.algebra(algebra)?;
    let (t, vars) = parse_term(term, alg.signature())?;
    if env.len() != vars.len() {
        return Err(Error::Invalid(format!(
            "term has {} variable(s) ({}) but --env gives {} value(s)",
            vars.len(),
            vars.iter().join(","),
            env.len()
        )));
    }
    set_arg(alg.size(), env)?;
    r.fact("term", &t);
    if !vars.is_empty() {
        r.fact("env", env_str(&vars, env));
    }
    r.fact("value", alg.eval_term(&t, env)?);
    Ok(())
}

fn satisfies_cmd(
    reg: &Registry,
    algebra: &str,
    equation: Option<&str>,
    theory: Option<&str>,
    r: &mut Report,
) -> Result<()> {
    let alg = reg.algebra(algebra)?;
    if let Some(text) = equation {
        let (eq, vars) = parse_equation(text, alg.signature())?;
        let v = satisfies(alg, &eq)?;
        r.verdict(format!("{algebra} satisfies {text}"), v.holds, v.witness.map(|e| env_str(&vars, &e)));
        return Ok(());
    }
    let th = match theory {
        Some(t) => reg.theory(t)?,
        None => alg.theory(),
    };
    if th.signature != alg.theory().signature {
        r.verdict(
            format!("{algebra} is a {}-algebra", th.name),
            false,
            Some(format!("signature of {} differs from {}", alg.theory().name, th.name)),
        );
        return Ok(());
    }
    let own = Arc::ptr_eq(th, alg.theory()) || th == alg.theory();
    for ax in &th.axioms {
        let v = satisfies(alg, ax)?;
        let name = format!("{algebra} satisfies {ax}");
        let witness = v.witness.map(|e| list_str(&e));
        if own {
            r.instance(name, v.holds, witness);
        } else {
            r.verdict(name, v.holds, witness);
        }
    }
    Ok(())
}

fn hom(
    reg: &Registry,
    name: Option<&str>,
    from: Option<&str>,
    to: Option<&str>,
    map: Option<&[usize]>,
    enumerate: bool,
    r: &mut Report,
) -> Result<()> {
    if let Some(n) = name {
        let h = reg.hom(n)?;
        let v = check_hom(h);
        r.instance(format!("{n} is a homomorphism"), v.holds, v.witness.map(hom_failure));
        if v.holds {
            describe_hom(h, r)?;
        }
        return Ok(());
    }
    let (Some(from), Some(to)) = (from, to) else {
        return Err(Error::Invalid("give --name, or --from and --to".into()));
    };
    let (a, b) = (reg.algebra(from)?, reg.algebra(to)?);
    if enumerate {
        let homs = enumerate_homs(a, b)?;
        r.fact("homomorphisms", homs.len());
        for h in &homs {
            r.note(list_str(&h.map));
        }
        return Ok(());
    }
    let Some(map) = map else {
        return Err(Error::Invalid("give --map or --enumerate".into()));
    };
    let h = Homomorphism::new("h", a.clone(), b.clone(), map.to_vec())?;
    let v = check_hom(&h);
    r.verdict(format!("{} is a homomorphism {from} -> {to}", list_str(map)), v.holds, v.witness.map(hom_failure));
    if v.holds {
        describe_hom(&h, r)?;
    }
    Ok(())
}

fn describe_hom(h: &Homomorphism, r: &mut Report) -> Result<()> {
    let flags = lemmas::epi_classify(h)?;
    r.fact("injective", flags.injective);
    r.fact("surjective", flags.surjective);
    r.fact("split", flags.split);
    if let Some(s) = flags.section {
        r.fact("section", list_str(&s));
    }
    Ok(())
}

fn product_cmd(reg: &Registry, left: &str, right: &str, r: &mut Report) -> Result<()> {
    let (a, b) = (reg.algebra(left)?, reg.algebra(right)?);
    let p = product(a, b)?;
    r.fact("product", p.algebra.name());
    r.fact("size", p.algebra.size());
    let v = axiom_verdict(&p.algebra)?;
    r.instance(format!("{} satisfies {}", p.algebra.name(), a.theory().name), v.holds, v.witness);
    for proj in [&p.left, &p.right] {
        let v = check_hom(proj);
        r.instance(format!("{} is a homomorphism", proj.name), v.holds, v.witness.map(hom_failure));
    }
    // pairing: exactly one hom into the product per pair of homs into the factors
    let mut failure = None;
    let mut tested = 0;
    'outer: for c in [a, b] {
        let into_a = enumerate_homs(c, a)?;
        let into_b = enumerate_homs(c, b)?;
        let into_p = enumerate_homs(c, &p.algebra)?;
        for h1 in &into_a {
            for h2 in &into_b {
                tested += 1;
                let matching = into_p
                    .iter()
                    .filter(|k| {
                        p.left.after(k).is_ok_and(|x| x.map == h1.map) && p.right.after(k).is_ok_and(|x| x.map == h2.map)
                    })
                    .count();
                let paired = p.pairing(h1, h2)?;
                if matching != 1 || !check_hom(&paired).holds {
                    failure = Some(format!("{} into {}: {} candidates", c.name(), p.algebra.name(), matching));
                    break 'outer;
                }
            }
        }
    }
    r.fact("pairs tested", tested);
    r.instance("pairing property", failure.is_none(), failure);
    Ok(())
}

fn kernel_pair_cmd(reg: &Registry, name: &str, r: &mut Report) -> Result<()> {
    let h = reg.hom(name)?;
    let k = kernel_pair(h);
    let rel = k.relation();
    r.fact("kernel pair", &k);
    r.fact("pairs", rel.len());
    let flags = classify_relation(&h.dom, &rel);
    r.instance(
        "kernel pair is an equivalence relation",
        flags.reflexive && flags.symmetric && flags.transitive,
        None,
    );
    r.instance("kernel pair is compatible with the operations", flags.compatible, None);
    Ok(())
}

fn parse_pairs(text: &str) -> Result<Vec<(usize, usize)>> {
    text.split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|p| {
            let parsed = p
                .split_once(':')
                .and_then(|(x, y)| Some((x.trim().parse().ok()?, y.trim().parse().ok()?)));
            parsed.ok_or_else(|| Error::Invalid(format!("pair `{p}`; expected `x:y`")))
        })
        .collect()
}

fn congruence_cmd(reg: &Registry, algebra: &str, pairs: Option<&str>, r: &mut Report) -> Result<()> {
    let alg = reg.algebra(algebra)?;
    match pairs {
        Some(text) => {
            let seed = parse_pairs(text)?;
            if let Some(&(x, y)) = seed.iter().find(|&&(x, y)| x.max(y) >= alg.size()) {
                return Err(Error::Invalid(format!("pair {x}:{y} is outside the carrier")));
            }
            let c = congruence_generated(alg, &seed);
            r.fact("generated", &c);
            r.instance("generated relation is a congruence", is_congruence(alg, &c), None);
        }
        None => {
            let all = all_congruences(alg)?;
            r.fact("congruences", all.len());
            for c in &all {
                r.note(c.to_string());
            }
        }
    }
    Ok(())
}

fn quotient_cmd(
    reg: &Registry,
    algebra: Option<&str>,
    labels: Option<&[usize]>,
    hom: Option<&str>,
    r: &mut Report,
) -> Result<()> {
    let (alg, c) = match (hom, algebra, labels) {
        (Some(h), _, _) => {
            let h = reg.hom(h)?;
            (h.dom.clone(), kernel_pair(h))
        }
        (None, Some(a), Some(l)) => {
            let alg = reg.algebra(a)?;
            if l.len() != alg.size() {
                return Err(Error::Invalid(format!("{} labels for {} elements", l.len(), alg.size())));
            }
            (alg.clone(), Congruence::from_labels(l))
        }
        _ => return Err(Error::Invalid("give --hom, or --algebra and --labels".into())),
    };
    r.fact("relation", &c);
    let ok = is_congruence(&alg, &c);
    r.verdict("relation is a congruence", ok, None);
    if ok {
        let q = quotient(&alg, &c)?;
        r.fact("quotient size", q.algebra.size());
        let v = axiom_verdict(&q.algebra)?;
        r.instance(format!("quotient satisfies {}", alg.theory().name), v.holds, v.witness);
        let e = effectiveness_check(&alg, &c)?;
        r.instance("kernel pair of the projection is the congruence", e.holds, e.witness.map(|(x, y)| format!("({x},{y})")));
    }
    Ok(())
}

fn factorize_one(f: &Homomorphism, r: &mut Report) -> Result<()> {
    let fac = factorize(f)?;
    let name = &f.name;
    r.fact(format!("{name} image size"), fac.mid.size());
    r.instance(format!("{name}: e is surjective"), fac.e.is_surjective(), None);
    r.instance(format!("{name}: m is injective"), fac.m.is_injective(), None);
    let composite = fac.m.after(&fac.e)?;
    r.instance(format!("{name}: m after e equals f"), composite.map == f.map, None);
    let v = lemmas::factorization_kernel_check(f)?;
    r.instance(
        format!("{name}: R[e] = R[f] iff m injective, over all intermediate quotients"),
        v.holds,
        v.witness.map(|c| c.to_string()),
    );
    Ok(())
}

fn maltsev_one(reg: &Registry, alg: &Arc<FiniteAlgebra>, r: &mut Report) -> Result<()> {
    let name = alg.name();
    let search = has_maltsev_term_operation(alg)?;
    match &search.term {
        Some(t) => {
            r.verdict(format!("{name} has a Maltsev term operation"), true, None);
            r.fact(format!("{name} term"), t);
            let v = check_maltsev_witness(alg, &MaltsevWitness { p: t.clone() })?;
            r.instance(format!("{name}: found term satisfies the Maltsev laws"), v.holds, v.witness.map(law_failure));
        }
        None => {
            r.verdict(format!("{name} has a Maltsev term operation"), false, None);
            r.note(format!(
                "{name}: no Maltsev term operation (clone exhausted, size {})",
                search.explored
            ));
        }
    }
    if let Some(w) = reg.maltsev.get(&alg.theory().name) {
        let v = check_maltsev_witness(alg, w)?;
        r.instance(format!("{name}: registered term {} satisfies the Maltsev laws", w.p), v.holds, v.witness.map(law_failure));
    }
    Ok(())
}

fn protomodular(
    reg: &Registry,
    theory: &str,
    algebra: Option<&str>,
    search: Option<usize>,
    r: &mut Report,
) -> Result<()> {
    let th = reg.theory(theory)?;
    let models: Vec<Arc<FiniteAlgebra>> = match algebra {
        Some(a) => vec![reg.algebra(a)?.clone()],
        None => reg.models(theory).into_iter().cloned().collect(),
    };
    if let Some(max_n) = search {
        let alg = &models[0];
        let found = search_protomodular_witness(alg, max_n)?;
        r.verdict(
            format!("{} has a protomodularity witness with n <= {max_n}", alg.name()),
            found.is_some(),
            None,
        );
        if let Some(w) = found {
            r.fact("constants", w.consts.iter().join(", "));
            r.fact("alphas", w.alphas.iter().join(", "));
            r.fact("theta", &w.theta);
        }
        return Ok(());
    }
    let Some(w) = reg.protomodular.get(theory) else {
        r.note(format!("no registered protomodularity witness for {theory}"));
        return Ok(());
    };
    r.fact("constants", w.consts.iter().join(", "));
    r.fact("alphas", w.alphas.iter().join(", "));
    r.fact("theta", &w.theta);
    r.fact("composite", w.composite());
    let composite = MaltsevWitness { p: w.composite() };
    for alg in &models {
        let rep = check_protomodular_witness(alg, w)?;
        r.instance(format!("witness laws on {}", alg.name()), rep.holds(), rep.first_failure().map(law_failure));
        let v = check_maltsev_witness(alg, &composite)?;
        r.instance(format!("composite is a Maltsev term on {}", alg.name()), v.holds, v.witness.map(law_failure));
    }
    let sa = check_semiabelian_preconditions(th, w, &models)?;
    r.instance(
        format!("{theory}: one constant, used by the witness, laws on all models"),
        sa.holds(),
        sa.failing_model().map(str::to_string),
    );
    Ok(())
}

/// Subalgebras generated by at most two elements, plus the empty set when
/// it is one.
fn small_subalgebras(alg: &FiniteAlgebra) -> Vec<Subset> {
    let n = alg.size();
    let mut out = BTreeSet::new();
    let empty = sets::empty(n);
    let closed_empty = subalgebra_closure(alg, &empty);
    out.insert(sets::elements(&closed_empty));
    for x in 0..n {
        for y in x..n {
            out.insert(sets::elements(&subalgebra_closure(alg, &sets::from_elements(n, [x, y]))));
        }
    }
    out.into_iter().map(|xs| sets::from_elements(n, xs)).collect()
}

fn topcheck_one(reg: &Registry, name: &str, r: &mut Report) -> Result<()> {
    let nt = reg.topology(name)?;
    let t = match reg.top_algebras.get(name) {
        Some(t) => t.clone(),
        None => {
            let rep = continuity_report(&nt.algebra, &nt.topology)?;
            let bad = rep.into_iter().find(|(_, v)| !v.holds);
            r.verdict(
                format!("{name}: operations of {} are continuous", nt.algebra.name()),
                false,
                bad.map(|(s, v)| format!("{s}, preimage of {} is not open", sets::format(&v.witness.unwrap_or_default()))),
            );
            return Ok(());
        }
    };
    r.verdict(format!("{name}: operations of {} are continuous", t.alg.name()), true, None);
    let v = t.top.verify_closure_invariants();
    r.instance(format!("{name}: closure invariants"), v.holds, v.witness);
    if GroupView::new(&t.alg).is_ok() {
        let v = homogeneity_check(&t)?;
        r.instance(format!("{name}: translations are homeomorphisms"), v.holds, v.witness.map(|(a, b)| format!("a={a}, b={b}")));
    }
    let Some(w) = reg.protomodular.get(&t.alg.theory().name) else {
        return Ok(());
    };
    if !check_protomodular_witness(&t.alg, w)?.holds() {
        return Ok(());
    }
    topalg_checks(name, &t, w, r)
}

fn topalg_checks(name: &str, t: &TopAlgebra, w: &ualg::witness::ProtomodularWitness, r: &mut Report) -> Result<()> {
    let v = regularity_check(t, w)?;
    r.instance(format!("{name}: regular"), v.holds, v.witness.map(|(x, y)| format!("x={x}, y={y}")));
    let b = hausdorff_iff_constants_closed(t, w)?;
    r.instance(
        format!("{name}: Hausdorff iff constants closed"),
        b.holds(),
        (!b.holds()).then(|| format!("constants closed: {}, Hausdorff: {}", b.left, b.right)),
    );
    let n = t.alg.size();
    let mut base = None;
    let mut iota = None;
    for a in 0..n {
        let v = neighborhood_base_check(t, w, a)?;
        if base.is_none() && !v.holds {
            base = Some(format!("at {a}: {}", v.witness.unwrap_or_default()));
        }
        if iota.is_none() && !iota_theta_check(t, w, a)?.holds() {
            iota = Some(format!("at {a}"));
        }
    }
    r.instance(format!("{name}: witness neighborhoods form a base at every point"), base.is_none(), base);
    r.instance(format!("{name}: iota/theta retraction at every point"), iota.is_none(), iota);
    let subs = small_subalgebras(&t.alg);
    let mut open_fail = None;
    let mut closure_fail = None;
    for s in &subs {
        if t.top.is_open(s) {
            let v = open_subalgebra_closed(t, w, s)?;
            if open_fail.is_none() && !v.holds {
                open_fail = Some(sets::format(s));
            }
        }
        let v = closure_is_subalgebra(t, s)?;
        if closure_fail.is_none() && !v.holds {
            closure_fail = Some(sets::format(s));
        }
    }
    r.fact(format!("{name} subalgebras tested"), subs.len());
    r.instance(format!("{name}: open subalgebras are closed"), open_fail.is_none(), open_fail);
    r.instance(format!("{name}: closures of subalgebras are subalgebras"), closure_fail.is_none(), closure_fail);
    Ok(())
}

fn open_map(reg: &Registry, hom: &str, dom: &str, cod: &str, r: &mut Report) -> Result<()> {
    let f = reg.hom(hom)?;
    let (d, c) = (reg.top_algebra(dom)?, reg.top_algebra(cod)?);
    if d.alg != f.dom || c.alg != f.cod {
        return Err(Error::Invalid(format!("`{hom}` does not go from `{dom}` to `{cod}`")));
    }
    let cont = is_continuous(&d.top, &c.top, &f.map);
    r.verdict(format!("{hom} is continuous"), cont.holds, cont.witness.map(|s| sets::format(&s)));
    let open = is_open_map(&d.top, &c.top, &f.map);
    r.verdict(format!("{hom} is open"), open.holds, open.witness.map(|s| sets::format(&s)));
    r.verdict(format!("{hom} is surjective"), f.is_surjective(), None);
    r.verdict(format!("{hom} is a regular epimorphism"), is_regular_epi(f, d, c), None);
    if let (true, Some(w)) = (cont.holds, reg.maltsev.get(&f.dom.theory().name)) {
        if check_maltsev_witness(&f.dom, w)?.holds {
            let b = regular_epi_iff_open_surjection(f, d, c, w)?;
            r.instance(format!("{hom}: regular epi iff open surjection"), b.holds(), None);
        }
    }
    Ok(())
}

fn semidirect_one(name: &str, act: &ualg::semidirect::GroupAction, r: &mut Report) -> Result<()> {
    let sd = build_semidirect(act)?;
    let g = GroupView::new(&sd.algebra)?;
    r.fact(format!("{name} order"), sd.algebra.size());
    r.fact(format!("{name} abelian"), g.is_abelian());
    let v = axiom_verdict(&sd.algebra)?;
    r.instance(format!("{name}: group axioms"), v.holds, v.witness);
    let v = semidirect_laws(act, &sd)?;
    r.instance(format!("{name}: normality and b.a = phi_b(a).b"), v.holds, v.witness.map(|(a, b)| format!("a={a}, b={b}")));
    let (_, pt) = action_to_point(act)?;
    let back = point_to_action(&pt)?;
    r.instance(format!("{name}: action recovered from its point"), back.phi == act.phi, None);
    Ok(())
}

fn roundtrip_one(pt: &SplitPoint, r: &mut Report) -> Result<()> {
    let name = &pt.name;
    if GroupView::new(pt.total()).is_err() {
        r.note(format!("{name}: not a point of groups, skipped"));
        return Ok(());
    }
    let rt = point_roundtrip_iso(pt)?;
    r.fact(format!("{name} u"), list_str(&rt.u.map));
    r.instance(format!("{name}: u is an isomorphism of points"), rt.holds(), None);
    let se = split_exact_check(pt)?;
    r.instance(
        format!("{name}: kernel normal and g = s(p(g)).(s(p(g^-1)).g)"),
        se.holds(),
        se.factorization.witness.map(|g| format!("g={g}")),
    );
    Ok(())
}

fn topology_arg(reg: &Registry, name: &str, alg: &Arc<FiniteAlgebra>) -> Result<FiniteTopology> {
    match name {
        "discrete" => Ok(FiniteTopology::discrete(alg.size())),
        "indiscrete" => Ok(FiniteTopology::indiscrete(alg.size())),
        _ => {
            let t = reg.topology(name)?;
            if &t.algebra != alg {
                return Err(Error::Invalid(format!("`{name}` is a topology on `{}`, not `{}`", t.algebra.name(), alg.name())));
            }
            Ok(t.topology.clone())
        }
    }
}

fn reconstruct(reg: &Registry, point: &str, top_a: &str, top_b: &str, r: &mut Report) -> Result<()> {
    let pt = reg.point(point)?;
    let theory = pt.total().theory();
    let spec = match OmegaLoopSpec::for_group(theory) {
        Some(s) => s,
        None => OmegaLoopSpec::from_symbols(theory, "zero", "add", "sub")?,
    };
    let ta = topology_arg(reg, top_a, pt.total())?;
    let tb = topology_arg(reg, top_b, pt.base())?;
    let rec = reconstruct_omega_loop_point(&spec, pt, &ta, &tb)?;
    r.fact("kernel", list_str(&rec.kernel));
    r.fact("chi", list_str(&rec.chi));
    r.instance("zeta and chi are inverse", rec.inverse_pair, None);
    let show = |w: Option<(String, Vec<usize>)>| w.map(|(s, env)| format!("{s} at {}", list_str(&env)));
    r.instance("(i) second component is the base operation", rec.second_component.holds, show(rec.second_component.witness.clone()));
    r.instance("(ii) first component is w(x + s(b)) - s(w(b))", rec.first_component.holds, show(rec.first_component.witness.clone()));
    r.instance("(iii) transported topology is the product topology", rec.product_topology, None);
    r.instance("(iv) zeta and chi are continuous", rec.continuous, None);
    Ok(())
}

fn lemma(reg: &Registry, kind: LemmaArg, seed: u64, count: usize, r: &mut Report) -> Result<()> {
    let harness = match kind {
        LemmaArg::Five => Some(LemmaKind::Five),
        LemmaArg::SplitFive => Some(LemmaKind::SplitFive),
        LemmaArg::Nine => Some(LemmaKind::Nine),
        LemmaArg::BarrKock => Some(LemmaKind::BarrKock),
        _ => None,
    };
    if let Some(k) = harness {
        r.seed = Some(seed);
        let pool = reg.group_pool()?;
        r.fact("pool", pool.groups.iter().map(|g| g.name()).join(","));
        let rep = lemmas::run_harness(&pool, k, seed, count)?;
        r.fact("instances", rep.count);
        r.fact("rejected draws", rep.rejected);
        r.instance(
            format!("{}: conclusion holds on every instance", k.name()),
            rep.holds(),
            rep.failures.first().map(|(i, w)| format!("instance {i}: {w}")),
        );
    }
    if matches!(kind, LemmaArg::Nine | LemmaArg::ThirdIso) {
        let z8 = reg.algebra("Z8")?;
        let k = sets::from_elements(8, [0, 2, 4, 6]);
        let h = sets::from_elements(8, [0, 4]);
        let t = lemmas::third_isomorphism_check(z8, &k, &h)?;
        r.fact("Z8 grid first row", format!(
            "{} -> {} -> {}",
            t.grid.rows[0].0.dom.size(),
            t.grid.rows[0].0.cod.size(),
            t.grid.rows[0].1.cod.size()
        ));
        r.instance("Z8, H={0,4}, K={0,2,4,6}: first row exact", t.nine.holds, t.nine.witness.clone());
        r.instance(
            "Z8: H normal in K, K/H normal in G/H, (G/H)/(K/H) iso G/K",
            t.holds(),
            None,
        );
        if let Some(iso) = &t.iso {
            r.fact("isomorphism", list_str(&iso.map));
        }
    }
    match kind {
        LemmaArg::Factorization => {
            for f in reg.homs.values() {
                let v = lemmas::factorization_kernel_check(f)?;
                r.instance(format!("{}: R[e] = R[f] iff m injective", f.name), v.holds, v.witness.map(|c| c.to_string()));
            }
        }
        LemmaArg::Epi => {
            for f in reg.homs.values() {
                let flags = lemmas::epi_classify(f)?;
                r.fact(
                    &f.name,
                    format!("split={} surjective={} injective={}", flags.split, flags.surjective, flags.injective),
                );
                r.instance(format!("{}: split implies surjective", f.name), flags.consistent(), None);
                if flags.surjective && flags.injective {
                    let ok = f.inverse().is_some_and(|g| check_hom(&g).holds);
                    r.instance(format!("{}: inverse is a homomorphism", f.name), ok, None);
                }
            }
        }
        _ => {}
    }
    Ok(())
}

fn subscript(i: usize) -> String {
    i.to_string()
        .chars()
        .map(|c| char::from_u32(0x2080 + c.to_digit(10).unwrap()).unwrap())
        .collect()
}

fn top_not_regular(r: &mut Report) {
    let c = top_not_regular_counterexample();
    let label = |p: &str| {
        let p = p.to_string();
        move |i: usize| format!("{p}{}", subscript(i + 1))
    };
    let (la, lb, lc) = (label("a"), label("b"), label("c"));
    let opens = |t: &FiniteTopology, l: &dyn Fn(usize) -> String| {
        t.generators()
            .iter()
            .map(|s| format!("{{{}}}", s.ones().map(l).join(",")))
            .join(" ")
    };
    r.fact("A", format!("{{{}}}, open {}", (0..4).map(&la).join(","), opens(&c.a, &la)));
    r.fact("B", format!("{{{}}}, open {}", (0..3).map(&lb).join(","), opens(&c.b, &lb)));
    r.fact("C", format!("{{{}}}, indiscrete", (0..3).map(&lc).join(",")));
    r.fact("f", c.f.iter().enumerate().map(|(i, &y)| format!("{}->{}", la(i), lc(y))).join(" "));
    r.fact("g", c.g.iter().enumerate().map(|(i, &y)| format!("{}->{}", lb(i), lc(y))).join(" "));
    r.fact("pullback", c.pullback.iter().map(|&(x, y)| format!("({},{})", la(x), lb(y))).join(" "));
    r.instance("f is a quotient map", c.f_quotient, None);
    let witness = c.pi2_quotient.witness.as_ref().map(|w| quotient_failure(w, Some(&lb)));
    r.verdict("pi2 is a quotient map", c.pi2_quotient.holds, witness.clone());
    let expected = Some(format!("{{{}}}", lb(0)));
    r.instance(
        "quotient maps are not stable under pullback",
        c.f_quotient && !c.pi2_quotient.holds && witness == expected,
        None,
    );
    if let Some(w) = witness {
        r.note(format!("π₂ is not a quotient map: witness {w}"));
        r.note(format!(
            "preimage of {w} is {{{}}}, open in the pullback",
            c.witness_preimage.iter().map(|&(x, y)| format!("({},{})", la(x), lb(y))).join(",")
        ));
    }
}

fn m2_not_maltsev(reg: &Registry, r: &mut Report) -> Result<()> {
    let m2 = reg.algebra("M2")?;
    let search = has_maltsev_term_operation(m2)?;
    r.verdict("M2 has a Maltsev term operation", search.found(), None);
    r.fact("ternary clone size", search.explored);
    let v = reflexive_implies_equivalence_report(m2, 2)?;
    let witness = v.witness.clone();
    r.verdict("every compatible reflexive relation on M2 is an equivalence", v.holds, witness.as_ref().map(|w| w.to_string()));
    let permutes = permutability_report(m2)?;
    r.verdict("all congruences of M2 permute", permutes.holds, None);
    let expected = "{(0,0),(0,1),(1,1)}";
    r.instance(
        "M2 is not Maltsev: clone exhausted, order relation reflexive and compatible but not symmetric",
        !search.found() && witness.is_some_and(|w| w.to_string() == expected),
        None,
    );
    if !search.found() {
        r.note(format!("no Maltsev term operation (clone exhausted, size {})", search.explored));
    }
    Ok(())
}

fn corpus_cmd(reg: &Registry, verbose: bool, r: &mut Report) {
    r.fact("theories", reg.theories.keys().join(" "));
    r.fact("algebras", reg.algebras.keys().join(" "));
    r.fact("topologies", reg.topologies.len());
    r.fact("certified", reg.top_algebras.len());
    r.fact("spaces", reg.spaces.keys().join(" "));
    r.fact("homs", reg.homs.len());
    r.fact("points", reg.points.keys().join(" "));
    r.fact("actions", reg.actions.keys().join(" "));
    r.fact("protomodular witnesses", reg.protomodular.keys().join(" "));
    let sweep = reg.sweep();
    for (kind, items) in &sweep.iter().chunk_by(|i| i.kind) {
        let items: Vec<_> = items.collect();
        let failed = items.iter().find(|i| !i.verdict.holds);
        r.instance(
            format!("{} {kind} entries pass their invariants", items.len()),
            failed.is_none(),
            failed.map(|i| format!("{}: {}", i.name, i.verdict.witness.clone().unwrap_or_default())),
        );
        if verbose {
            for i in items {
                r.note(format!("{} {kind} {}", if i.verdict.holds { "ok" } else { "FAIL" }, i.name));
            }
        }
    }
    for w in &reg.warnings {
        r.note(format!("warning: {w}"));
    }
}

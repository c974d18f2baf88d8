//! Clones of term operations on finite algebras, and Maltsev / protomodular
//! witnesses.
//!
//! The Maltsev laws checked here are the standard pair `p(x,x,y) = y` and
//! `p(x,y,y) = x`. A protomodular witness consists of constants `e_i`, binary
//! terms `α_i` with `α_i(x,x) = e_i`, and an `(n+1)`-ary `θ` with
//! `θ(α_1(x,y),…,α_n(x,y),y) = x`; the composite
//! `θ(α_1(x,y),…,α_n(x,y),z)` is then a Maltsev term. Theory-level claims are
//! reduced to checking the laws on every registered finite model, which can
//! refute but never prove them.

use std::collections::HashMap;
use std::sync::Arc;

use crate::algebra::{decode_into, Compiled, FiniteAlgebra};
use crate::error::{search_size, Error, Result};
use crate::exec;
use crate::group::GroupSymbols;
use crate::syntax::{Term, Theory};
use crate::verdict::Verdict;

pub const DEFAULT_CLONE_BUDGET: usize = 100_000;
pub const MAX_CLONE_ARITY: usize = 4;
/// Cap on `tuples × n^k` evaluations in one closure round.
const ROUND_WORK_CAP: u128 = 500_000_000;
const CHUNK: usize = 8192;

/// The `k`-ary term functions of an algebra, each with a minimal-depth term.
#[derive(Debug, Clone)]
pub struct TermClone {
    pub arity: usize,
    pub carrier: usize,
    funcs: Vec<Vec<usize>>,
    terms: Vec<Term>,
    index: HashMap<Vec<usize>, usize>,
}

impl TermClone {
    pub fn len(&self) -> usize {
        self.funcs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.funcs.is_empty()
    }

    /// Functions as value tables over `k`-tuples (row-major), in discovery
    /// order.
    pub fn funcs(&self) -> &[Vec<usize>] {
        &self.funcs
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn term_for(&self, f: &[usize]) -> Option<&Term> {
        self.index.get(f).map(|&i| &self.terms[i])
    }

    pub fn contains(&self, f: &[usize]) -> bool {
        self.index.contains_key(f)
    }

    fn push(&mut self, f: Vec<usize>, t: Term) -> bool {
        if self.index.contains_key(&f) {
            return false;
        }
        self.index.insert(f.clone(), self.funcs.len());
        self.funcs.push(f);
        self.terms.push(t);
        true
    }
}

pub fn generate_clone(alg: &FiniteAlgebra, k: usize) -> Result<TermClone> {
    generate_clone_with(alg, k, DEFAULT_CLONE_BUDGET)
}

pub fn generate_clone_with(alg: &FiniteAlgebra, k: usize, budget: usize) -> Result<TermClone> {
    Ok(close_clone(alg, k, budget, &|_: &[usize]| false)?.0)
}

/// Breadth-first closure of the projections under the basic operations.
/// Round `r` combines functions with at least one argument found in round
/// `r-1`, so the first term attached to a function has minimal depth; within
/// a round, operations go in name order and argument tuples in row-major
/// order. Stops early at the first function satisfying `stop`.
fn close_clone(
    alg: &FiniteAlgebra,
    k: usize,
    budget: usize,
    stop: &(dyn Fn(&[usize]) -> bool + Sync),
) -> Result<(TermClone, Option<usize>)> {
    if k > MAX_CLONE_ARITY {
        return Err(Error::Precondition(format!(
            "clone arity {k} exceeds the cap of {MAX_CLONE_ARITY}"
        )));
    }
    let n = alg.size();
    let points = n.pow(k as u32);
    let mut clone = TermClone {
        arity: k,
        carrier: n,
        funcs: Vec::new(),
        terms: Vec::new(),
        index: HashMap::new(),
    };
    let mut env = vec![0; k];
    for i in 0..k {
        let f: Vec<usize> = (0..points)
            .map(|p| {
                decode_into(p, n, &mut env);
                env[i]
            })
            .collect();
        if clone.push(f, Term::var(i)) && stop(&clone.funcs[clone.len() - 1]) {
            let at = clone.len() - 1;
            return Ok((clone, Some(at)));
        }
    }
    let sig = alg.signature();
    let mut ops: Vec<usize> = (0..sig.len()).collect();
    ops.sort_by(|&a, &b| sig.ops()[a].name.cmp(&sig.ops()[b].name));

    let over_budget = |len: usize| Error::BudgetExceeded {
        what: format!("arity-{k} clone of `{}` (partial size {len})", alg.name()),
        count: len as u128,
        budget: budget as u128,
    };
    let mut prev_start = 0;
    let mut round = 1;
    loop {
        let len = clone.len();
        let before = len;
        for &op in &ops {
            let m = sig.ops()[op].arity;
            let name = &sig.ops()[op].name;
            if m == 0 {
                if round == 1 {
                    let c = alg.table(op)[0];
                    if clone.push(vec![c; points], Term::constant(name)) {
                        if clone.len() > budget {
                            return Err(over_budget(clone.len()));
                        }
                        if stop(&clone.funcs[clone.len() - 1]) {
                            let at = clone.len() - 1;
                            return Ok((clone, Some(at)));
                        }
                    }
                }
                continue;
            }
            let total = search_size(len, m);
            if total.saturating_mul(points as u128) > ROUND_WORK_CAP {
                return Err(over_budget(clone.len()));
            }
            let total = total as usize;
            let mut chunk_start = 0;
            while chunk_start < total {
                let chunk_len = CHUNK.min(total - chunk_start);
                let funcs = &clone.funcs;
                let computed: Vec<Option<(Vec<usize>, Vec<usize>)>> = exec::map_range(chunk_len, |c| {
                    let mut picks = vec![0; m];
                    decode_into(chunk_start + c, len, &mut picks);
                    if picks.iter().all(|&p| p < prev_start) {
                        return None;
                    }
                    let mut args = vec![0; m];
                    let f = (0..points)
                        .map(|p| {
                            for (slot, &pick) in args.iter_mut().zip(&picks) {
                                *slot = funcs[pick][p];
                            }
                            alg.apply(op, &args)
                        })
                        .collect();
                    Some((f, picks))
                });
                for (f, picks) in computed.into_iter().flatten() {
                    if clone.contains(&f) {
                        continue;
                    }
                    let term = Term::app(name, picks.iter().map(|&p| clone.terms[p].clone()).collect());
                    clone.push(f, term);
                    if clone.len() > budget {
                        return Err(over_budget(clone.len()));
                    }
                    if stop(&clone.funcs[clone.len() - 1]) {
                        let at = clone.len() - 1;
                        return Ok((clone, Some(at)));
                    }
                }
                chunk_start += chunk_len;
            }
        }
        if clone.len() == before {
            return Ok((clone, None));
        }
        prev_start = before;
        round += 1;
    }
}

fn is_maltsev_table(f: &[usize], n: usize) -> bool {
    (0..n).all(|a| (0..n).all(|b| f[(a * n + a) * n + b] == b && f[(a * n + b) * n + b] == a))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MaltsevSearch {
    /// Minimal-depth witnessing term, if any.
    pub term: Option<Term>,
    /// Number of ternary term functions generated before stopping.
    pub explored: usize,
}

impl MaltsevSearch {
    pub fn found(&self) -> bool {
        self.term.is_some()
    }
}

/// Scans the ternary clone for a Maltsev operation, stopping at the first
/// one. `term: None` means the whole clone was generated and none exists;
/// exceeding the budget is an error, since then nothing is decided.
pub fn has_maltsev_term_operation(alg: &FiniteAlgebra) -> Result<MaltsevSearch> {
    has_maltsev_term_operation_with(alg, DEFAULT_CLONE_BUDGET)
}

pub fn has_maltsev_term_operation_with(alg: &FiniteAlgebra, budget: usize) -> Result<MaltsevSearch> {
    let n = alg.size();
    let (clone, at) = close_clone(alg, 3, budget, &|f: &[usize]| is_maltsev_table(f, n))?;
    Ok(MaltsevSearch {
        term: at.map(|i| clone.terms[i].clone()),
        explored: clone.len(),
    })
}

/// A failing instance of a named law.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LawFailure {
    pub law: String,
    pub env: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MaltsevWitness {
    pub p: Term,
}

/// A named two-variable law: arguments of `p`, and the expected value.
type TernaryLaw = (&'static str, fn(usize, usize) -> [usize; 3], fn(usize, usize) -> usize);

/// Checks `p(x,x,y) = y` over all pairs, then `p(x,y,y) = x`.
pub fn check_maltsev_witness(alg: &FiniteAlgebra, w: &MaltsevWitness) -> Result<Verdict<LawFailure>> {
    let p = Compiled::new(&w.p, alg.signature())?;
    if w.p.var_bound() > 3 {
        return Err(Error::Invalid(format!("`{}` is not ternary", w.p)));
    }
    let n = alg.size();
    let laws: [TernaryLaw; 2] = [
        ("p(x,x,y) = y", |x, y| [x, x, y], |_, y| y),
        ("p(x,y,y) = x", |x, y| [x, y, y], |x, _| x),
    ];
    for (law, args, expected) in laws {
        let bad = exec::find_first(n * n, |i| {
            let (x, y) = (i / n, i % n);
            p.eval(alg, &args(x, y)) != expected(x, y)
        });
        if let Some(i) = bad {
            return Ok(Verdict::fail(LawFailure {
                law: law.into(),
                env: vec![i / n, i % n],
            }));
        }
    }
    Ok(Verdict::pass())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProtomodularWitness {
    pub consts: Vec<Term>,
    pub alphas: Vec<Term>,
    pub theta: Term,
}

impl ProtomodularWitness {
    pub fn n(&self) -> usize {
        self.alphas.len()
    }

    /// `n = 1`, `e`, `α = x·y⁻¹`, `θ = x·y` for a group-shaped theory.
    pub fn for_group(theory: &Theory) -> Option<Self> {
        let g = GroupSymbols::detect(&theory.signature)?;
        let (e, _, _) = g.names(&theory.signature);
        Some(ProtomodularWitness {
            consts: vec![Term::constant(e)],
            alphas: vec![g.division_term(&theory.signature)],
            theta: g.product_term(&theory.signature),
        })
    }

    /// `n = 1`, `0`, `α = x − y`, `θ = x + y`.
    pub fn for_omega_loop(zero: &str, plus: &str, minus: &str) -> Self {
        let xy = vec![Term::var(0), Term::var(1)];
        ProtomodularWitness {
            consts: vec![Term::constant(zero)],
            alphas: vec![Term::app(minus, xy.clone())],
            theta: Term::app(plus, xy),
        }
    }

    /// `p(x,y,z) = θ(α_1(x,y),…,α_n(x,y),z)`.
    pub fn composite(&self) -> Term {
        let mut images: Vec<Term> = self.alphas.clone();
        images.push(Term::var(2));
        self.theta.substitute(&images)
    }

    fn validate(&self) -> Result<()> {
        let n = self.n();
        if self.consts.len() != n {
            return Err(Error::Invalid(format!(
                "witness has {} constants for {n} binary terms",
                self.consts.len()
            )));
        }
        if let Some(c) = self.consts.iter().find(|c| !c.is_ground()) {
            return Err(Error::Invalid(format!("witness constant `{c}` has variables")));
        }
        if let Some(a) = self.alphas.iter().find(|a| a.var_bound() > 2) {
            return Err(Error::Invalid(format!("witness term `{a}` is not binary")));
        }
        if self.theta.var_bound() > n + 1 {
            return Err(Error::Invalid(format!("`{}` has more than {} variables", self.theta, n + 1)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LawReport {
    pub laws: Vec<(String, Verdict<Vec<usize>>)>,
}

impl LawReport {
    pub fn holds(&self) -> bool {
        self.laws.iter().all(|(_, v)| v.holds)
    }

    pub fn first_failure(&self) -> Option<LawFailure> {
        self.laws.iter().find(|(_, v)| !v.holds).map(|(law, v)| LawFailure {
            law: law.clone(),
            env: v.witness.clone().unwrap_or_default(),
        })
    }
}

/// Evaluates the `n + 1` laws over all pairs `(x, y)`.
pub fn check_protomodular_witness(alg: &FiniteAlgebra, w: &ProtomodularWitness) -> Result<LawReport> {
    w.validate()?;
    let sig = alg.signature();
    let n = alg.size();
    let consts = w
        .consts
        .iter()
        .map(|c| alg.constant_value(c))
        .collect::<Result<Vec<usize>>>()?;
    let alphas = w
        .alphas
        .iter()
        .map(|a| Compiled::new(a, sig))
        .collect::<Result<Vec<_>>>()?;
    let theta = Compiled::new(&w.theta, sig)?;
    let mut laws = Vec::new();
    for (i, alpha) in alphas.iter().enumerate() {
        let bad = exec::find_first(n, |x| alpha.eval(alg, &[x, x]) != consts[i]);
        laws.push((
            format!("{}(x,x) = {}", w.alphas[i], w.consts[i]),
            Verdict::from_counterexample(bad.map(|x| vec![x, x])),
        ));
    }
    let bad = exec::find_first(n * n, |i| {
        let (x, y) = (i / n, i % n);
        let mut args: Vec<usize> = alphas.iter().map(|a| a.eval(alg, &[x, y])).collect();
        args.push(y);
        theta.eval(alg, &args) != x
    });
    laws.push((
        format!("theta(alpha(x,y), y) = x for theta = {}", w.theta),
        Verdict::from_counterexample(bad.map(|i| vec![i / n, i % n])),
    ));
    Ok(LawReport { laws })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SemiAbelianReport {
    pub theory: String,
    /// The signature has exactly one constant symbol.
    pub single_constant: bool,
    /// Every `e_i` is that constant.
    pub constants_match: bool,
    /// Per registered model: name and whether the witness laws hold there.
    pub models: Vec<(String, bool)>,
}

impl SemiAbelianReport {
    pub fn holds(&self) -> bool {
        self.single_constant && self.constants_match && self.models.iter().all(|(_, ok)| *ok)
    }

    pub fn failing_model(&self) -> Option<&str> {
        self.models.iter().find(|(_, ok)| !ok).map(|(m, _)| m.as_str())
    }
}

/// Structural check (one constant, used as every `e_i`) plus the witness laws
/// on every given model of the theory. Holding means "holds on all registered
/// models".
pub fn check_semiabelian_preconditions(
    theory: &Theory,
    w: &ProtomodularWitness,
    models: &[Arc<FiniteAlgebra>],
) -> Result<SemiAbelianReport> {
    let constants = theory.signature.constants();
    let single_constant = constants.len() == 1;
    let constants_match = single_constant && {
        let name = &theory.signature.ops()[constants[0]].name;
        w.consts.iter().all(|c| *c == Term::constant(name))
    };
    let models = models
        .iter()
        .filter(|m| m.theory().as_ref() == theory)
        .map(|m| Ok((m.name().to_string(), check_protomodular_witness(m, w)?.holds())))
        .collect::<Result<Vec<_>>>()?;
    Ok(SemiAbelianReport {
        theory: theory.name.clone(),
        single_constant,
        constants_match,
        models,
    })
}

/// Searches `n = 1..=max_n` for constants, binary terms and a `θ` satisfying
/// the witness laws on `alg`. `Ok(None)` means none exists within the bound.
pub fn search_protomodular_witness(alg: &FiniteAlgebra, max_n: usize) -> Result<Option<ProtomodularWitness>> {
    let n = alg.size();
    let ground = generate_clone(alg, 0)?;
    let binary = generate_clone(alg, 2)?;
    // binary functions constant on the diagonal with a ground-term value
    let candidates: Vec<(usize, usize)> = binary
        .funcs()
        .iter()
        .enumerate()
        .filter_map(|(i, f)| {
            let c = f[0];
            ((0..n).all(|x| f[x * n + x] == c) && ground.contains(&[c])).then_some((i, c))
        })
        .collect();
    for k in 1..=max_n {
        if search_size(candidates.len(), k) > 1_000_000 {
            return Err(Error::BudgetExceeded {
                what: format!("choices of {k} binary witness terms"),
                count: search_size(candidates.len(), k),
                budget: 1_000_000,
            });
        }
        let thetas = generate_clone(alg, k + 1)?;
        let mut picks = vec![0; k];
        for t in 0..candidates.len().pow(k as u32) {
            decode_into(t, candidates.len(), &mut picks);
            let alpha = |j: usize, x: usize, y: usize| binary.funcs()[candidates[picks[j]].0][x * n + y];
            // θ must send (α(x,y), y) to x; index of that argument tuple
            let found = thetas.funcs().iter().position(|th| {
                (0..n * n).all(|i| {
                    let (x, y) = (i / n, i % n);
                    let index = (0..k).fold(0, |acc, j| acc * n + alpha(j, x, y)) * n + y;
                    th[index] == x
                })
            });
            if let Some(th) = found {
                return Ok(Some(ProtomodularWitness {
                    consts: picks
                        .iter()
                        .map(|&p| ground.term_for(&[candidates[p].1]).unwrap().clone())
                        .collect(),
                    alphas: picks.iter().map(|&p| binary.terms()[candidates[p].0].clone()).collect(),
                    theta: thetas.terms()[th].clone(),
                }));
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{satisfies, subalgebra_closure};
    use crate::syntax::{Equation, OpSymbol, Signature};
    use std::collections::BTreeSet;

    fn grp() -> Arc<Theory> {
        let sig = Signature::new(vec![
            OpSymbol::new("e", 0),
            OpSymbol::new("inv", 1),
            OpSymbol::new("mul", 2),
        ])
        .unwrap();
        Arc::new(Theory::new("Grp", sig, vec![]).unwrap())
    }

    fn cyclic(n: usize) -> Arc<FiniteAlgebra> {
        Arc::new(
            FiniteAlgebra::from_fn(format!("Z{n}"), grp(), n, |op, a| match op {
                0 => 0,
                1 => (n - a[0]) % n,
                _ => (a[0] + a[1]) % n,
            })
            .unwrap(),
        )
    }

    fn m2() -> Arc<FiniteAlgebra> {
        let sig = Signature::new(vec![OpSymbol::new("e", 0), OpSymbol::new("mul", 2)]).unwrap();
        let th = Arc::new(Theory::new("Mon", sig, vec![]).unwrap());
        Arc::new(
            FiniteAlgebra::from_fn("M2", th, 2, |op, a| if op == 0 { 0 } else { a[0].max(a[1]) }).unwrap(),
        )
    }

    /// M2's tables under the group signature, with `inv` the identity.
    fn m2_as_group() -> Arc<FiniteAlgebra> {
        Arc::new(
            FiniteAlgebra::from_fn("M2g", grp(), 2, |op, a| match op {
                0 => 0,
                1 => a[0],
                _ => a[0].max(a[1]),
            })
            .unwrap(),
        )
    }

    /// Clone as a subalgebra of A^(A^k) generated by the projections,
    /// computed with the plain subalgebra closure on the power algebra.
    fn clone_via_power(alg: &Arc<FiniteAlgebra>, k: usize) -> BTreeSet<Vec<usize>> {
        let n = alg.size();
        let points = n.pow(k as u32);
        let mut power = alg.clone();
        for _ in 1..points {
            power = crate::algebra::product(&power, alg).unwrap().algebra;
        }
        let encode = |f: &[usize]| f.iter().fold(0, |acc, &v| acc * n + v);
        let mut env = vec![0; k];
        let projections = (0..k).map(|i| {
            let f: Vec<usize> = (0..points)
                .map(|p| {
                    decode_into(p, n, &mut env);
                    env[i]
                })
                .collect();
            encode(&f)
        });
        let seed = crate::sets::from_elements(power.size(), projections);
        subalgebra_closure(&power, &seed)
            .ones()
            .map(|code| {
                let mut f = vec![0; points];
                decode_into(code, n, &mut f);
                f
            })
            .collect()
    }

    #[test]
    fn clone_sizes() {
        let z2 = cyclic(2);
        let c = generate_clone(&z2, 3).unwrap();
        assert_eq!(c.len(), 8);
        // x ⊕ y ⊕ z
        let xor: Vec<usize> = (0..8).map(|i: usize| i.count_ones() as usize % 2).collect();
        assert!(c.contains(&xor));
        let m = generate_clone(&m2(), 3).unwrap();
        // constant 0 and the joins of the seven nonempty variable sets
        assert_eq!(m.len(), 8);
        assert!(generate_clone(&cyclic(5), 1).unwrap().contains(&[0, 1, 2, 3, 4]));
    }

    #[test]
    fn clone_matches_power_closure() {
        for (alg, k) in [(cyclic(2), 3), (cyclic(3), 1), (m2(), 3), (m2(), 2), (cyclic(4), 1)] {
            let c = generate_clone(&alg, k).unwrap();
            let ours: BTreeSet<Vec<usize>> = c.funcs().iter().cloned().collect();
            assert_eq!(ours, clone_via_power(&alg, k));
        }
    }

    #[test]
    fn witness_terms_reproduce_their_functions() {
        for alg in [cyclic(3), m2(), cyclic(4)] {
            let c = generate_clone(&alg, 2).unwrap();
            for (f, t) in c.funcs().iter().zip(c.terms()) {
                assert_eq!(&alg.term_function(t, 2).unwrap(), f);
            }
            // depths never decrease along discovery order
            let depths: Vec<usize> = c.terms().iter().map(Term::depth).collect();
            assert!(depths.windows(2).all(|w| w[0] <= w[1]));
        }
    }

    #[test]
    fn budget_reports_partial_size() {
        let err = generate_clone_with(&cyclic(5), 2, 10).unwrap_err();
        assert!(matches!(err, Error::BudgetExceeded { budget: 10, .. }));
        assert!(generate_clone(&cyclic(2), 5).is_err());
    }

    #[test]
    fn maltsev_search() {
        let z2 = cyclic(2);
        let found = has_maltsev_term_operation(&z2).unwrap();
        let t = found.term.unwrap();
        let xor: Vec<usize> = (0..8).map(|i: usize| i.count_ones() as usize % 2).collect();
        assert_eq!(z2.term_function(&t, 3).unwrap(), xor);
        let none = has_maltsev_term_operation(&m2()).unwrap();
        assert!(!none.found());
        assert_eq!(none.explored, 8);
        let one = Arc::new(FiniteAlgebra::trivial(grp()));
        assert!(has_maltsev_term_operation(&one).unwrap().found());
    }

    #[test]
    fn maltsev_witness_checks() {
        let p = Term::app(
            "mul",
            vec![Term::var(0), Term::app("mul", vec![Term::app("inv", vec![Term::var(1)]), Term::var(2)])],
        );
        for n in 1..=6 {
            assert!(check_maltsev_witness(&cyclic(n), &MaltsevWitness { p: p.clone() }).unwrap().holds);
        }
        let v = check_maltsev_witness(&cyclic(3), &MaltsevWitness { p: Term::var(2) }).unwrap();
        assert_eq!(v.witness.unwrap(), LawFailure { law: "p(x,y,y) = x".into(), env: vec![0, 1] });
    }

    #[test]
    fn protomodular_witnesses() {
        let w = ProtomodularWitness::for_group(&grp()).unwrap();
        for n in 1..=6 {
            let alg = cyclic(n);
            assert!(check_protomodular_witness(&alg, &w).unwrap().holds());
            let p = MaltsevWitness { p: w.composite() };
            assert!(check_maltsev_witness(&alg, &p).unwrap().holds);
        }
        let report = check_protomodular_witness(&m2_as_group(), &w).unwrap();
        assert_eq!(report.first_failure().unwrap().env, vec![1, 1]);
        // composite is mul(mul(x, inv(y)), z)
        let eq = Equation::new(w.composite(), Term::app("mul", vec![
            Term::app("mul", vec![Term::var(0), Term::app("inv", vec![Term::var(1)])]),
            Term::var(2),
        ]));
        assert_eq!(eq.lhs, eq.rhs);
        assert!(satisfies(&cyclic(3), &eq).unwrap().holds);
    }

    #[test]
    fn semiabelian() {
        let th = grp();
        let w = ProtomodularWitness::for_group(&th).unwrap();
        let models = vec![cyclic(2), cyclic(3)];
        assert!(check_semiabelian_preconditions(&th, &w, &models).unwrap().holds());
        let broken = vec![cyclic(2), m2_as_group()];
        let r = check_semiabelian_preconditions(&th, &w, &broken).unwrap();
        assert_eq!(r.failing_model(), Some("M2g"));
        let sig = Signature::new(vec![OpSymbol::new("0", 0), OpSymbol::new("1", 0), OpSymbol::new("m", 2)]).unwrap();
        let two = Theory::new("Two", sig, vec![]).unwrap();
        let w2 = ProtomodularWitness::for_omega_loop("0", "m", "m");
        assert!(!check_semiabelian_preconditions(&two, &w2, &[]).unwrap().single_constant);
    }

    #[test]
    fn witness_search() {
        let z2 = cyclic(2);
        let w = search_protomodular_witness(&z2, 1).unwrap().unwrap();
        assert!(check_protomodular_witness(&z2, &w).unwrap().holds());
        assert!(search_protomodular_witness(&m2(), 2).unwrap().is_none());
        let one = FiniteAlgebra::trivial(grp());
        assert!(search_protomodular_witness(&one, 1).unwrap().is_some());
    }
}

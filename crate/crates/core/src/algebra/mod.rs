//! Finite algebras over a theory: term evaluation, equation checking,
//! products, subalgebras and homomorphisms.
//!
//! The carrier is always `{0..n-1}`. A table for an arity-`k` symbol has
//! `n^k` entries indexed row-major, first argument most significant; the same
//! encoding pairs `(i, j)` as `i*m + j` in products.

mod hom;

use std::sync::Arc;

use crate::error::{search_size, Error, Result};
use crate::exec;
use crate::sets::{self, Subset};
use crate::syntax::{Equation, Signature, Term, Theory};
use crate::verdict::Verdict;

pub use hom::{
    check_hom, enumerate_homs, enumerate_homs_with, find_isomorphism, HomFailure, HomSearch,
    Homomorphism, DEFAULT_HOM_BUDGET,
};

/// Environments beyond this count are refused by [`satisfies`].
const MAX_ENVIRONMENTS: u128 = 1 << 32;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteAlgebra {
    name: String,
    theory: Arc<Theory>,
    size: usize,
    tables: Vec<Vec<usize>>,
}

pub(crate) fn encode(args: &[usize], n: usize) -> usize {
    args.iter().fold(0, |acc, &a| acc * n + a)
}

pub(crate) fn decode_into(mut index: usize, n: usize, out: &mut [usize]) {
    for slot in out.iter_mut().rev() {
        *slot = index % n;
        index /= n;
    }
}

pub(crate) fn decode(index: usize, n: usize, k: usize) -> Vec<usize> {
    let mut out = vec![0; k];
    decode_into(index, n, &mut out);
    out
}

impl FiniteAlgebra {
    /// Tables are given in signature order, each with `size^arity` entries.
    pub fn new(
        name: impl Into<String>,
        theory: Arc<Theory>,
        size: usize,
        tables: Vec<Vec<usize>>,
    ) -> Result<Self> {
        let name = name.into();
        if size == 0 {
            return Err(Error::Invalid(format!("algebra `{name}`: empty carrier")));
        }
        if tables.len() != theory.signature.len() {
            return Err(Error::Invalid(format!(
                "algebra `{name}`: {} tables for {} symbols",
                tables.len(),
                theory.signature.len()
            )));
        }
        for (op, table) in theory.signature.ops().iter().zip(&tables) {
            let expected = size.pow(op.arity as u32);
            if table.len() != expected {
                return Err(Error::Invalid(format!(
                    "algebra `{name}`: table for `{}` has {} entries, expected {expected}",
                    op.name,
                    table.len()
                )));
            }
            if let Some(v) = table.iter().find(|&&v| v >= size) {
                return Err(Error::Invalid(format!(
                    "algebra `{name}`: table for `{}` contains {v}, outside a carrier of size {size}",
                    op.name
                )));
            }
        }
        Ok(FiniteAlgebra {
            name,
            theory,
            size,
            tables,
        })
    }

    /// Builds every table from `f(op_index, args)`.
    pub fn from_fn(
        name: impl Into<String>,
        theory: Arc<Theory>,
        size: usize,
        f: impl Fn(usize, &[usize]) -> usize,
    ) -> Result<Self> {
        let tables = theory
            .signature
            .ops()
            .iter()
            .enumerate()
            .map(|(op, sym)| {
                let count = size.pow(sym.arity as u32);
                let mut args = vec![0; sym.arity];
                (0..count)
                    .map(|i| {
                        decode_into(i, size, &mut args);
                        f(op, &args)
                    })
                    .collect()
            })
            .collect();
        FiniteAlgebra::new(name, theory, size, tables)
    }

    /// The one-element algebra of a theory.
    pub fn trivial(theory: Arc<Theory>) -> Self {
        FiniteAlgebra::from_fn("1", theory, 1, |_, _| 0).expect("one-element tables are valid")
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn theory(&self) -> &Arc<Theory> {
        &self.theory
    }

    pub fn signature(&self) -> &Signature {
        &self.theory.signature
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn table(&self, op: usize) -> &[usize] {
        &self.tables[op]
    }

    pub fn arity(&self, op: usize) -> usize {
        self.theory.signature.ops()[op].arity
    }

    pub fn apply(&self, op: usize, args: &[usize]) -> usize {
        self.tables[op][encode(args, self.size)]
    }

    pub fn op_index(&self, name: &str) -> Result<usize> {
        self.signature()
            .index_of(name)
            .ok_or_else(|| Error::UnknownSymbol(name.to_string()))
    }

    /// Value of a ground term (no variables).
    pub fn constant_value(&self, term: &Term) -> Result<usize> {
        self.eval_term(term, &[])
    }

    pub fn eval_term(&self, term: &Term, env: &[usize]) -> Result<usize> {
        match term {
            Term::Var(i) => env.get(*i).copied().ok_or(Error::UnboundVariable {
                index: *i,
                len: env.len(),
            }),
            Term::App(s, args) => {
                let op = self.op_index(s)?;
                let arity = self.arity(op);
                if arity != args.len() {
                    return Err(Error::ArityMismatch {
                        symbol: s.clone(),
                        expected: arity,
                        got: args.len(),
                    });
                }
                let mut index = 0;
                for a in args {
                    index = index * self.size + self.eval_term(a, env)?;
                }
                Ok(self.tables[op][index])
            }
        }
    }

    /// The term function of arity `k` as a table over `k`-tuples.
    pub fn term_function(&self, term: &Term, k: usize) -> Result<Vec<usize>> {
        let compiled = Compiled::new(term, self.signature())?;
        if term.var_bound() > k {
            return Err(Error::UnboundVariable {
                index: term.var_bound() - 1,
                len: k,
            });
        }
        let count = self.size.pow(k as u32);
        Ok(exec::map_range(count, |i| {
            let env = decode(i, self.size, k);
            compiled.eval(self, &env)
        }))
    }
}

/// A term resolved against a signature, so evaluation avoids name lookups.
#[derive(Debug, Clone)]
pub(crate) enum Compiled {
    Var(usize),
    App(usize, Vec<Compiled>),
}

impl Compiled {
    pub(crate) fn new(term: &Term, sig: &Signature) -> Result<Self> {
        term.check(sig)?;
        Ok(Self::build(term, sig))
    }

    fn build(term: &Term, sig: &Signature) -> Self {
        match term {
            Term::Var(i) => Compiled::Var(*i),
            Term::App(s, args) => Compiled::App(
                sig.index_of(s).expect("checked"),
                args.iter().map(|a| Self::build(a, sig)).collect(),
            ),
        }
    }

    /// Caller guarantees every variable index is within `env`.
    pub(crate) fn eval(&self, alg: &FiniteAlgebra, env: &[usize]) -> usize {
        match self {
            Compiled::Var(i) => env[*i],
            Compiled::App(op, args) => {
                let index = args
                    .iter()
                    .fold(0, |acc, a| acc * alg.size + a.eval(alg, env));
                alg.tables[*op][index]
            }
        }
    }
}

/// Checks `eq` over every environment; the witness is the lexicographically
/// smallest failing one.
pub fn satisfies(alg: &FiniteAlgebra, eq: &Equation) -> Result<Verdict<Vec<usize>>> {
    let lhs = Compiled::new(&eq.lhs, alg.signature())?;
    let rhs = Compiled::new(&eq.rhs, alg.signature())?;
    let k = eq.nvars.max(eq.lhs.var_bound()).max(eq.rhs.var_bound());
    let count = search_size(alg.size, k);
    if count > MAX_ENVIRONMENTS {
        return Err(Error::BudgetExceeded {
            what: format!("environments for `{eq}`"),
            count,
            budget: MAX_ENVIRONMENTS,
        });
    }
    let failing = exec::find_first(count as usize, |i| {
        let env = decode(i, alg.size, k);
        lhs.eval(alg, &env) != rhs.eval(alg, &env)
    });
    Ok(Verdict::from_counterexample(failing.map(|i| decode(i, alg.size, k))))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxiomReport {
    pub algebra: String,
    pub theory: String,
    pub results: Vec<(Equation, Verdict<Vec<usize>>)>,
}

impl AxiomReport {
    pub fn holds(&self) -> bool {
        self.results.iter().all(|(_, v)| v.holds)
    }
}

/// Runs [`satisfies`] on every axiom of the algebra's theory.
pub fn is_algebra_of(alg: &FiniteAlgebra) -> Result<AxiomReport> {
    let results = alg
        .theory
        .axioms
        .iter()
        .map(|ax| Ok((ax.clone(), satisfies(alg, ax)?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(AxiomReport {
        algebra: alg.name.clone(),
        theory: alg.theory.name.clone(),
        results,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Product {
    pub algebra: Arc<FiniteAlgebra>,
    pub left: Homomorphism,
    pub right: Homomorphism,
}

impl Product {
    /// The unique map into the product with the given components.
    pub fn pairing(&self, h1: &Homomorphism, h2: &Homomorphism) -> Result<Homomorphism> {
        if h1.dom != h2.dom {
            return Err(Error::Precondition("pairing needs a common domain".into()));
        }
        let m = self.right.cod.size();
        let map = (0..h1.dom.size()).map(|c| h1.map[c] * m + h2.map[c]).collect();
        Homomorphism::new(
            format!("<{},{}>", h1.name, h2.name),
            h1.dom.clone(),
            self.algebra.clone(),
            map,
        )
    }
}

/// Componentwise product; `(i, j)` is element `i*|b| + j`.
pub fn product(a: &Arc<FiniteAlgebra>, b: &Arc<FiniteAlgebra>) -> Result<Product> {
    if a.theory != b.theory {
        return Err(Error::Precondition(format!(
            "product of `{}` and `{}` over different theories",
            a.name, b.name
        )));
    }
    let m = b.size;
    let alg = FiniteAlgebra::from_fn(
        format!("{}x{}", a.name, b.name),
        a.theory.clone(),
        a.size * m,
        |op, args| {
            let left: Vec<usize> = args.iter().map(|x| x / m).collect();
            let right: Vec<usize> = args.iter().map(|x| x % m).collect();
            a.apply(op, &left) * m + b.apply(op, &right)
        },
    )?;
    let alg = Arc::new(alg);
    let left = Homomorphism::new(
        format!("pi1_{}", alg.name),
        alg.clone(),
        a.clone(),
        (0..alg.size).map(|x| x / m).collect(),
    )?;
    let right = Homomorphism::new(
        format!("pi2_{}", alg.name),
        alg.clone(),
        b.clone(),
        (0..alg.size).map(|x| x % m).collect(),
    )?;
    Ok(Product {
        algebra: alg,
        left,
        right,
    })
}

/// Least subset containing `seed` and the constants, closed under every
/// operation.
pub fn subalgebra_closure(alg: &FiniteAlgebra, seed: &Subset) -> Subset {
    let n = alg.size;
    let mut current = seed.clone();
    current.grow(n);
    for op in alg.signature().constants() {
        current.insert(alg.tables[op][0]);
    }
    loop {
        let members = sets::elements(&current);
        let mut next = current.clone();
        for (op, sym) in alg.signature().ops().iter().enumerate() {
            if sym.arity == 0 || members.is_empty() {
                continue;
            }
            let count = members.len().pow(sym.arity as u32);
            let mut picks = vec![0; sym.arity];
            let mut args = vec![0; sym.arity];
            for i in 0..count {
                decode_into(i, members.len(), &mut picks);
                for (slot, &p) in args.iter_mut().zip(&picks) {
                    *slot = members[p];
                }
                next.insert(alg.apply(op, &args));
            }
        }
        if next == current {
            return current;
        }
        current = next;
    }
}

pub fn is_subalgebra(alg: &FiniteAlgebra, subset: &Subset) -> bool {
    subalgebra_closure(alg, subset) == *subset
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subalgebra {
    pub algebra: Arc<FiniteAlgebra>,
    /// Embedding into the ambient algebra; elements keep their carrier order.
    pub inclusion: Homomorphism,
}

pub fn subalgebra(
    alg: &Arc<FiniteAlgebra>,
    subset: &Subset,
    name: impl Into<String>,
) -> Result<Subalgebra> {
    if !is_subalgebra(alg, subset) {
        return Err(Error::Precondition(format!(
            "{} is not closed under the operations of `{}`",
            sets::format(subset),
            alg.name
        )));
    }
    let members = sets::elements(subset);
    let mut index = vec![usize::MAX; alg.size];
    for (i, &x) in members.iter().enumerate() {
        index[x] = i;
    }
    let sub = FiniteAlgebra::from_fn(name, alg.theory.clone(), members.len(), |op, args| {
        let lifted: Vec<usize> = args.iter().map(|&a| members[a]).collect();
        index[alg.apply(op, &lifted)]
    })?;
    let sub = Arc::new(sub);
    let inclusion = Homomorphism::new(
        format!("incl_{}", sub.name),
        sub.clone(),
        alg.clone(),
        members,
    )?;
    Ok(Subalgebra {
        algebra: sub,
        inclusion,
    })
}

/// Isomorphic copy in which old element `x` becomes `perm[x]`.
pub fn relabel(alg: &FiniteAlgebra, perm: &[usize], name: impl Into<String>) -> Result<FiniteAlgebra> {
    let n = alg.size;
    let mut inverse = vec![usize::MAX; n];
    for (x, &y) in perm.iter().enumerate() {
        if y >= n || inverse[y] != usize::MAX {
            return Err(Error::Precondition("relabelling is not a permutation".into()));
        }
        inverse[y] = x;
    }
    if perm.len() != n {
        return Err(Error::Precondition("relabelling has the wrong length".into()));
    }
    FiniteAlgebra::from_fn(name, alg.theory.clone(), n, |op, args| {
        let old: Vec<usize> = args.iter().map(|&a| inverse[a]).collect();
        perm[alg.apply(op, &old)]
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_source;
    use crate::syntax::Declaration;

    const SRC: &str = "
        theory Grp { op e/0; op inv/1; op mul/2;
          axiom mul(x, mul(y, z)) = mul(mul(x, y), z);
          axiom mul(x, e) = x; axiom mul(e, x) = x;
          axiom mul(x, inv(x)) = e; axiom mul(inv(x), x) = e; }
        theory Mon { op e/0; op mul/2;
          axiom mul(x, e) = x; axiom mul(e, x) = x;
          axiom mul(mul(x, y), z) = mul(x, mul(y, z)); }
        algebra Z2 : Grp { carrier = 2; e = 0; inv = [0,1]; mul = [[0,1],[1,0]]; }
        algebra Z3 : Grp { carrier = 3; e = 0; inv = [0,2,1]; mul = [[0,1,2],[1,2,0],[2,0,1]]; }
        algebra M2 : Mon { carrier = 2; e = 0; mul = [[0,1],[1,1]]; }
        algebra M2g : Grp { carrier = 2; e = 0; inv = [0,1]; mul = [[0,1],[1,1]]; }
    ";

    fn algebras() -> Vec<Arc<FiniteAlgebra>> {
        parse_source(SRC)
            .unwrap()
            .declarations
            .into_iter()
            .filter_map(|d| match d {
                Declaration::Algebra(a) => Some(a),
                _ => None,
            })
            .collect()
    }

    fn cyclic(theory: &Arc<Theory>, n: usize) -> Arc<FiniteAlgebra> {
        Arc::new(
            FiniteAlgebra::from_fn(format!("Z{n}"), theory.clone(), n, |op, a| match op {
                0 => 0,
                1 => (n - a[0]) % n,
                _ => (a[0] + a[1]) % n,
            })
            .unwrap(),
        )
    }

    #[test]
    fn eval_examples() {
        let algs = algebras();
        let (z2, z3) = (&algs[0], &algs[1]);
        let t = Term::app("mul", vec![Term::var(0), Term::app("inv", vec![Term::var(1)])]);
        // 1 + (3 - 2) mod 3
        assert_eq!(z3.eval_term(&t, &[1, 2]).unwrap(), 2);
        assert_eq!(z3.eval_term(&Term::var(0), &[2]).unwrap(), 2);
        assert_eq!(z2.eval_term(&Term::constant("e"), &[]).unwrap(), 0);
        assert_eq!(
            z3.eval_term(&t, &[1]).unwrap_err(),
            Error::UnboundVariable { index: 1, len: 1 }
        );
    }

    #[test]
    fn satisfies_examples() {
        let algs = algebras();
        let (z2, m2, m2g) = (&algs[0], &algs[2], &algs[3]);
        assert!(is_algebra_of(z2).unwrap().holds());
        assert_eq!(is_algebra_of(z2).unwrap().results.len(), 5);
        let inverse_law = Equation::new(
            Term::app("mul", vec![Term::var(0), Term::app("inv", vec![Term::var(0)])]),
            Term::constant("e"),
        );
        assert_eq!(
            satisfies(m2, &inverse_law).unwrap_err(),
            Error::UnknownSymbol("inv".into())
        );
        let comm = Equation::new(
            Term::app("mul", vec![Term::var(0), Term::var(1)]),
            Term::app("mul", vec![Term::var(1), Term::var(0)]),
        );
        assert!(satisfies(m2, &comm).unwrap().holds);
        // 1·1 = 1 ≠ 0
        let report = is_algebra_of(m2g).unwrap();
        assert!(!report.holds());
        let failing: Vec<_> = report.results.iter().filter(|(_, v)| !v.holds).collect();
        assert_eq!(failing.len(), 2);
        assert_eq!(failing[0].1.witness, Some(vec![1]));
    }

    #[test]
    fn empty_theory_is_vacuous() {
        let th = Arc::new(Theory::new("T", Signature::default(), vec![]).unwrap());
        let alg = FiniteAlgebra::new("A", th, 3, vec![]).unwrap();
        assert!(is_algebra_of(&alg).unwrap().holds());
    }

    #[test]
    fn closure_examples() {
        let theory = algebras()[0].theory().clone();
        let z6 = cyclic(&theory, 6);
        let close = |xs: &[usize]| sets::elements(&subalgebra_closure(&z6, &sets::from_elements(6, xs.iter().copied())));
        assert_eq!(close(&[2]), vec![0, 2, 4]);
        assert_eq!(close(&[]), vec![0]);
        assert_eq!(close(&[1]), (0..6).collect::<Vec<_>>());
    }

    #[test]
    fn products() {
        let theory = algebras()[0].theory().clone();
        let z2 = cyclic(&theory, 2);
        let z3 = cyclic(&theory, 3);
        let klein = product(&z2, &z2).unwrap();
        assert!(is_algebra_of(&klein.algebra).unwrap().holds());
        // every element of Z2 x Z2 is its own inverse
        let inv = klein.algebra.op_index("inv").unwrap();
        assert_eq!(klein.algebra.table(inv), &[0, 1, 2, 3]);
        let z6 = product(&z2, &z3).unwrap();
        let g = z6.algebra.clone();
        // (1,1) = 1*3 + 1 has order 6
        let mul = g.op_index("mul").unwrap();
        let mut x = 4;
        let mut order = 1;
        while x != 0 {
            x = g.apply(mul, &[x, 4]);
            order += 1;
        }
        assert_eq!(order, 6);
        assert!(check_hom(&z6.left).holds && check_hom(&z6.right).holds);
        let one = Arc::new(FiniteAlgebra::trivial(theory.clone()));
        let p = product(&z3, &one).unwrap();
        assert!(p.left.is_bijective());
    }

    #[test]
    fn subalgebra_reindexes() {
        let theory = algebras()[0].theory().clone();
        let z6 = cyclic(&theory, 6);
        let sub = subalgebra(&z6, &sets::from_elements(6, [0, 2, 4]), "2Z6").unwrap();
        assert_eq!(sub.algebra.size(), 3);
        assert!(check_hom(&sub.inclusion).holds);
        assert!(find_isomorphism(&sub.algebra, &cyclic(&theory, 3)).is_some());
        assert!(subalgebra(&z6, &sets::from_elements(6, [0, 1]), "bad").is_err());
    }

    #[test]
    fn relabel_gives_an_isomorphic_copy() {
        let theory = algebras()[0].theory().clone();
        let z4 = cyclic(&theory, 4);
        let copy = Arc::new(relabel(&z4, &[2, 0, 3, 1], "Z4'").unwrap());
        assert!(is_algebra_of(&copy).unwrap().holds());
        let h = Homomorphism::new("r", z4.clone(), copy, vec![2, 0, 3, 1]).unwrap();
        assert!(check_hom(&h).holds);
    }
}

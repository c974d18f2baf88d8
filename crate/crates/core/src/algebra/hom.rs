use std::sync::Arc;

use super::{decode, decode_into, FiniteAlgebra};
use crate::error::{search_size, Error, Result};
use crate::exec;
use crate::sets::{self, Subset};
use crate::verdict::Verdict;

/// Default cap on `|cod|^|dom|` for [`enumerate_homs`].
pub const DEFAULT_HOM_BUDGET: u128 = 1_000_000;

/// A carrier map between algebras of one theory. Construction checks shape
/// only; [`check_hom`] checks that operations are preserved.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Homomorphism {
    pub name: String,
    pub dom: Arc<FiniteAlgebra>,
    pub cod: Arc<FiniteAlgebra>,
    pub map: Vec<usize>,
}

impl Homomorphism {
    pub fn new(
        name: impl Into<String>,
        dom: Arc<FiniteAlgebra>,
        cod: Arc<FiniteAlgebra>,
        map: Vec<usize>,
    ) -> Result<Self> {
        let name = name.into();
        if dom.theory() != cod.theory() {
            return Err(Error::Precondition(format!(
                "`{name}`: `{}` and `{}` are algebras of different theories",
                dom.name(),
                cod.name()
            )));
        }
        if map.len() != dom.size() {
            return Err(Error::Invalid(format!(
                "map `{name}`: {} values for a domain of size {}",
                map.len(),
                dom.size()
            )));
        }
        if let Some(v) = map.iter().find(|&&v| v >= cod.size()) {
            return Err(Error::Invalid(format!(
                "map `{name}`: value {v} outside a codomain of size {}",
                cod.size()
            )));
        }
        Ok(Homomorphism {
            name,
            dom,
            cod,
            map,
        })
    }

    pub fn identity(alg: &Arc<FiniteAlgebra>) -> Self {
        Homomorphism {
            name: format!("id_{}", alg.name()),
            dom: alg.clone(),
            cod: alg.clone(),
            map: (0..alg.size()).collect(),
        }
    }

    pub fn apply(&self, x: usize) -> usize {
        self.map[x]
    }

    /// `self ∘ first`.
    pub fn after(&self, first: &Homomorphism) -> Result<Homomorphism> {
        if first.cod != self.dom {
            return Err(Error::Precondition(format!(
                "cannot compose `{}` after `{}`: codomain `{}` is not domain `{}`",
                self.name,
                first.name,
                first.cod.name(),
                self.dom.name()
            )));
        }
        Ok(Homomorphism {
            name: format!("{}.{}", self.name, first.name),
            dom: first.dom.clone(),
            cod: self.cod.clone(),
            map: first.map.iter().map(|&x| self.map[x]).collect(),
        })
    }

    pub fn image(&self) -> Subset {
        sets::from_elements(self.cod.size(), self.map.iter().copied())
    }

    pub fn is_injective(&self) -> bool {
        self.image().count_ones(..) == self.dom.size()
    }

    pub fn is_surjective(&self) -> bool {
        self.image().count_ones(..) == self.cod.size()
    }

    pub fn is_bijective(&self) -> bool {
        self.is_injective() && self.is_surjective()
    }

    pub fn is_identity(&self) -> bool {
        self.dom == self.cod && self.map.iter().enumerate().all(|(i, &x)| i == x)
    }

    pub fn inverse(&self) -> Option<Homomorphism> {
        if !self.is_bijective() {
            return None;
        }
        let mut map = vec![0; self.cod.size()];
        for (x, &y) in self.map.iter().enumerate() {
            map[y] = x;
        }
        Some(Homomorphism {
            name: format!("{}^-1", self.name),
            dom: self.cod.clone(),
            cod: self.dom.clone(),
            map,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomFailure {
    pub symbol: String,
    pub args: Vec<usize>,
}

/// First `(symbol, args)` at which `f(op(args)) != op(f(args))`. Symbols are
/// scanned by decreasing arity (ties in signature order), tuples row-major.
pub fn check_hom(f: &Homomorphism) -> Verdict<HomFailure> {
    let (a, b) = (&f.dom, &f.cod);
    let ops = a.signature().ops();
    let mut order: Vec<usize> = (0..ops.len()).collect();
    order.sort_by_key(|&op| std::cmp::Reverse(ops[op].arity));
    for op in order {
        let sym = &ops[op];
        let k = sym.arity;
        let table = a.table(op);
        let bad = exec::find_first(table.len(), |i| {
            let args = decode(i, a.size(), k);
            let image: Vec<usize> = args.iter().map(|&x| f.map[x]).collect();
            f.map[table[i]] != b.apply(op, &image)
        });
        if let Some(i) = bad {
            return Verdict::fail(HomFailure {
                symbol: sym.name.clone(),
                args: decode(i, a.size(), k),
            });
        }
    }
    Verdict::pass()
}

/// All homomorphisms `a -> b` in lexicographic order of their maps, refusing
/// when `|b|^|a|` exceeds [`DEFAULT_HOM_BUDGET`].
pub fn enumerate_homs(a: &Arc<FiniteAlgebra>, b: &Arc<FiniteAlgebra>) -> Result<Vec<Homomorphism>> {
    enumerate_homs_with(a, b, DEFAULT_HOM_BUDGET)
}

pub fn enumerate_homs_with(
    a: &Arc<FiniteAlgebra>,
    b: &Arc<FiniteAlgebra>,
    budget: u128,
) -> Result<Vec<Homomorphism>> {
    if a.theory() != b.theory() {
        return Err(Error::Precondition("algebras of different theories".into()));
    }
    let count = search_size(b.size(), a.size());
    if count > budget {
        return Err(Error::BudgetExceeded {
            what: format!("maps {} -> {}", a.name(), b.name()),
            count,
            budget,
        });
    }
    Ok(HomSearch::new(a, b)
        .run()
        .into_iter()
        .enumerate()
        .map(|(i, map)| Homomorphism {
            name: format!("h{i}"),
            dom: a.clone(),
            cod: b.clone(),
            map,
        })
        .collect())
}

pub fn find_isomorphism(a: &Arc<FiniteAlgebra>, b: &Arc<FiniteAlgebra>) -> Option<Homomorphism> {
    if a.size() != b.size() || a.theory() != b.theory() {
        return None;
    }
    HomSearch::new(a, b)
        .injective()
        .limit(1)
        .run()
        .pop()
        .map(|map| Homomorphism {
            name: format!("iso_{}_{}", a.name(), b.name()),
            dom: a.clone(),
            cod: b.clone(),
            map,
        })
}

/// Backtracking search for homomorphic maps. Every table entry becomes a
/// constraint checked as soon as all elements it mentions are assigned, so
/// the search prunes far below the `|cod|^|dom|` bound.
pub struct HomSearch<'a> {
    dom: &'a FiniteAlgebra,
    cod: &'a FiniteAlgebra,
    injective: bool,
    limit: Option<usize>,
    allowed: Option<Box<dyn Fn(usize, usize) -> bool + 'a>>,
    fixed: Vec<Option<usize>>,
}

struct Constraint {
    op: usize,
    args: Vec<usize>,
    result: usize,
}

impl<'a> HomSearch<'a> {
    pub fn new(dom: &'a FiniteAlgebra, cod: &'a FiniteAlgebra) -> Self {
        HomSearch {
            dom,
            cod,
            injective: false,
            limit: None,
            allowed: None,
            fixed: vec![None; dom.size()],
        }
    }

    pub fn injective(mut self) -> Self {
        self.injective = true;
        self
    }

    pub fn limit(mut self, limit: usize) -> Self {
        self.limit = Some(limit);
        self
    }

    /// Restricts `x` to images `y` with `allowed(x, y)`.
    pub fn allow(mut self, allowed: impl Fn(usize, usize) -> bool + 'a) -> Self {
        self.allowed = Some(Box::new(allowed));
        self
    }

    pub fn fix(mut self, x: usize, y: usize) -> Self {
        self.fixed[x] = Some(y);
        self
    }

    pub fn run(&self) -> Vec<Vec<usize>> {
        let n = self.dom.size();
        let mut buckets: Vec<Vec<Constraint>> = (0..n).map(|_| Vec::new()).collect();
        for (op, sym) in self.dom.signature().ops().iter().enumerate() {
            let mut args = vec![0; sym.arity];
            for (i, &result) in self.dom.table(op).iter().enumerate() {
                decode_into(i, n, &mut args);
                let last = args.iter().copied().max().unwrap_or(0).max(result);
                buckets[last].push(Constraint {
                    op,
                    args: args.clone(),
                    result,
                });
            }
        }
        let mut state = State {
            map: vec![0; n],
            used: vec![false; self.cod.size()],
            out: Vec::new(),
            scratch: Vec::with_capacity(self.dom.signature().max_arity()),
        };
        self.extend(0, &buckets, &mut state);
        state.out
    }

    fn full(&self, state: &State) -> bool {
        self.limit.is_some_and(|l| state.out.len() >= l)
    }

    fn extend(&self, x: usize, buckets: &[Vec<Constraint>], state: &mut State) {
        if x == self.dom.size() {
            state.out.push(state.map.clone());
            return;
        }
        for y in 0..self.cod.size() {
            if self.full(state) {
                return;
            }
            if self.fixed[x].is_some_and(|f| f != y)
                || (self.injective && state.used[y])
                || self.allowed.as_ref().is_some_and(|a| !a(x, y))
            {
                continue;
            }
            state.map[x] = y;
            if !self.consistent(&buckets[x], state) {
                continue;
            }
            state.used[y] = true;
            self.extend(x + 1, buckets, state);
            state.used[y] = false;
        }
    }

    fn consistent(&self, constraints: &[Constraint], state: &mut State) -> bool {
        constraints.iter().all(|c| {
            state.scratch.clear();
            state.scratch.extend(c.args.iter().map(|&a| state.map[a]));
            self.cod.apply(c.op, &state.scratch) == state.map[c.result]
        })
    }
}

struct State {
    map: Vec<usize>,
    used: Vec<bool>,
    out: Vec<Vec<usize>>,
    scratch: Vec<usize>,
}

//! Group structure read off a finite algebra's tables.
//!
//! A theory is group-shaped when its signature has exactly one constant, one
//! unary and one binary symbol; the tables must then satisfy the group laws
//! for [`GroupView::new`] to succeed.

use std::sync::Arc;

use crate::algebra::FiniteAlgebra;
use crate::error::{Error, Result};
use crate::sets::{self, Subset};
use crate::syntax::{Signature, Term};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GroupSymbols {
    pub e: usize,
    pub inv: usize,
    pub mul: usize,
}

impl GroupSymbols {
    pub fn detect(sig: &Signature) -> Option<Self> {
        let of_arity = |k: usize| -> Option<usize> {
            let found: Vec<usize> = (0..sig.len()).filter(|&i| sig.ops()[i].arity == k).collect();
            match found.as_slice() {
                [i] => Some(*i),
                _ => None,
            }
        };
        if sig.len() != 3 {
            return None;
        }
        Some(GroupSymbols {
            e: of_arity(0)?,
            inv: of_arity(1)?,
            mul: of_arity(2)?,
        })
    }

    pub fn names<'a>(&self, sig: &'a Signature) -> (&'a str, &'a str, &'a str) {
        let ops = sig.ops();
        (&ops[self.e].name, &ops[self.inv].name, &ops[self.mul].name)
    }

    /// `mul(x0, inv(x1))`
    pub fn division_term(&self, sig: &Signature) -> Term {
        let (_, inv, mul) = self.names(sig);
        Term::app(mul, vec![Term::var(0), Term::app(inv, vec![Term::var(1)])])
    }

    /// `mul(x0, x1)`
    pub fn product_term(&self, sig: &Signature) -> Term {
        let (_, _, mul) = self.names(sig);
        Term::app(mul, vec![Term::var(0), Term::var(1)])
    }
}

/// A finite algebra known to be a group.
#[derive(Debug, Clone)]
pub struct GroupView {
    pub alg: Arc<FiniteAlgebra>,
    pub symbols: GroupSymbols,
    e: usize,
}

impl GroupView {
    pub fn new(alg: &Arc<FiniteAlgebra>) -> Result<Self> {
        let symbols = GroupSymbols::detect(alg.signature()).ok_or_else(|| {
            Error::NotAGroup(format!(
                "theory `{}` does not have a constant, a unary and a binary symbol",
                alg.theory().name
            ))
        })?;
        let e = alg.table(symbols.e)[0];
        let view = GroupView {
            alg: alg.clone(),
            symbols,
            e,
        };
        let n = alg.size();
        let name = alg.name();
        for x in 0..n {
            if view.mul(x, e) != x || view.mul(e, x) != x {
                return Err(Error::NotAGroup(format!("`{name}`: {e} is not neutral for {x}")));
            }
            let i = view.inv(x);
            if view.mul(x, i) != e || view.mul(i, x) != e {
                return Err(Error::NotAGroup(format!("`{name}`: {i} is not inverse to {x}")));
            }
            for y in 0..n {
                for z in 0..n {
                    if view.mul(x, view.mul(y, z)) != view.mul(view.mul(x, y), z) {
                        return Err(Error::NotAGroup(format!(
                            "`{name}`: multiplication is not associative at ({x},{y},{z})"
                        )));
                    }
                }
            }
        }
        Ok(view)
    }

    pub fn size(&self) -> usize {
        self.alg.size()
    }

    pub fn e(&self) -> usize {
        self.e
    }

    pub fn mul(&self, x: usize, y: usize) -> usize {
        self.alg.table(self.symbols.mul)[x * self.alg.size() + y]
    }

    pub fn inv(&self, x: usize) -> usize {
        self.alg.table(self.symbols.inv)[x]
    }

    pub fn is_abelian(&self) -> bool {
        let n = self.size();
        (0..n).all(|x| (0..n).all(|y| self.mul(x, y) == self.mul(y, x)))
    }

    pub fn order(&self, x: usize) -> usize {
        let mut y = x;
        let mut k = 1;
        while y != self.e {
            y = self.mul(y, x);
            k += 1;
        }
        k
    }

    pub fn is_subgroup(&self, s: &Subset) -> bool {
        let xs = sets::elements(s);
        s.contains(self.e)
            && xs
                .iter()
                .all(|&x| xs.iter().all(|&y| s.contains(self.mul(x, self.inv(y)))))
    }

    pub fn is_normal(&self, s: &Subset) -> bool {
        self.is_subgroup(s)
            && sets::elements(s).iter().all(|&k| {
                (0..self.size()).all(|g| s.contains(self.mul(self.mul(g, k), self.inv(g))))
            })
    }

    /// Block assignment of the left cosets `gH`, ids by smallest element.
    pub fn coset_blocks(&self, h: &Subset) -> Vec<usize> {
        let n = self.size();
        let mut block = vec![usize::MAX; n];
        let mut next = 0;
        for g in 0..n {
            if block[g] != usize::MAX {
                continue;
            }
            for k in sets::elements(h) {
                block[self.mul(g, k)] = next;
            }
            next += 1;
        }
        block
    }

    /// Subgroups in order of their sorted element lists.
    pub fn subgroups(&self) -> Vec<Subset> {
        let n = self.size();
        let mut found: Vec<Subset> = Vec::new();
        let mut frontier = vec![self.generated(&[])];
        while let Some(s) = frontier.pop() {
            if found.contains(&s) {
                continue;
            }
            for x in 0..n {
                if !s.contains(x) {
                    let mut gens = sets::elements(&s);
                    gens.push(x);
                    frontier.push(self.generated(&gens));
                }
            }
            found.push(s);
        }
        found.sort_by_key(sets::elements);
        found
    }

    pub fn normal_subgroups(&self) -> Vec<Subset> {
        self.subgroups().into_iter().filter(|s| self.is_normal(s)).collect()
    }

    pub fn generated(&self, gens: &[usize]) -> Subset {
        crate::algebra::subalgebra_closure(&self.alg, &sets::from_elements(self.size(), gens.iter().copied()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{OpSymbol, Theory};

    fn grp() -> Arc<Theory> {
        let sig = Signature::new(vec![
            OpSymbol::new("e", 0),
            OpSymbol::new("inv", 1),
            OpSymbol::new("mul", 2),
        ])
        .unwrap();
        Arc::new(Theory::new("Grp", sig, vec![]).unwrap())
    }

    fn s3() -> Arc<FiniteAlgebra> {
        // permutations of {0,1,2} as arrays; composition (p∘q)(i) = p[q[i]]
        let perms = [[0, 1, 2], [1, 2, 0], [2, 0, 1], [0, 2, 1], [2, 1, 0], [1, 0, 2]];
        let index = |p: [usize; 3]| perms.iter().position(|q| *q == p).unwrap();
        let compose = |a: usize, b: usize| {
            let (p, q) = (perms[a], perms[b]);
            index([p[q[0]], p[q[1]], p[q[2]]])
        };
        Arc::new(
            FiniteAlgebra::from_fn("S3", grp(), 6, |op, a| match op {
                0 => 0,
                1 => (0..6).find(|&b| compose(a[0], b) == 0).unwrap(),
                _ => compose(a[0], a[1]),
            })
            .unwrap(),
        )
    }

    #[test]
    fn s3_structure() {
        let g = GroupView::new(&s3()).unwrap();
        assert!(!g.is_abelian());
        assert_eq!((0..6).map(|x| g.order(x)).collect::<Vec<_>>(), vec![1, 3, 3, 2, 2, 2]);
        // trivial, three of order 2, A3, S3
        assert_eq!(g.subgroups().len(), 6);
        assert_eq!(g.normal_subgroups().len(), 3);
        let a3 = sets::from_elements(6, [0, 1, 2]);
        assert_eq!(g.coset_blocks(&a3), vec![0, 0, 0, 1, 1, 1]);
    }

    #[test]
    fn non_groups_are_rejected() {
        let m = Arc::new(
            FiniteAlgebra::from_fn("M", grp(), 2, |op, a| match op {
                0 => 0,
                1 => a[0],
                _ => a[0].max(a[1]),
            })
            .unwrap(),
        );
        assert!(matches!(GroupView::new(&m), Err(Error::NotAGroup(_))));
    }
}

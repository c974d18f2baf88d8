//! Finite topological spaces and continuous maps.
//!
//! A finite topology is determined by the smallest open set `U_x` around each
//! point, so that is what [`FiniteTopology`] stores: a set is open iff it
//! contains `U_x` for each of its points. Product, subspace and quotient
//! topologies, closures and separation properties are all computed on these
//! neighborhoods; [`FiniteTopology::opens`] enumerates the open sets
//! themselves when the count is small enough.

use std::collections::BTreeSet;
use std::sync::Arc;

use crate::algebra::FiniteAlgebra;
use crate::error::{Error, Result};
use crate::sets::{self, Subset};
use crate::verdict::Verdict;

/// Default cap on the number of open sets [`FiniteTopology::opens`] lists.
pub const OPEN_SET_BUDGET: usize = 1 << 16;
/// Above this many opens the pairwise union/intersection check is skipped and
/// only the neighborhood axioms are verified.
const PAIRWISE_CHECK_LIMIT: usize = 512;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FiniteTopology {
    nbhd: Vec<Subset>,
}

/// A topology declared on an algebra's carrier.
#[derive(Debug, Clone, PartialEq)]
pub struct NamedTopology {
    pub name: String,
    pub algebra: Arc<FiniteAlgebra>,
    pub topology: FiniteTopology,
}

impl FiniteTopology {
    /// Least topology on `{0..n-1}` in which every generator is open.
    pub fn generate(n: usize, generators: &[Subset]) -> Self {
        let nbhd = (0..n)
            .map(|x| {
                let mut u = sets::full(n);
                for g in generators.iter().filter(|g| g.contains(x)) {
                    u.intersect_with(g);
                }
                u
            })
            .collect();
        FiniteTopology { nbhd }
    }

    pub fn discrete(n: usize) -> Self {
        FiniteTopology {
            nbhd: (0..n).map(|x| sets::singleton(n, x)).collect(),
        }
    }

    pub fn indiscrete(n: usize) -> Self {
        FiniteTopology {
            nbhd: vec![sets::full(n); n],
        }
    }

    /// Requires `x ∈ U_x` and `y ∈ U_x ⇒ U_y ⊆ U_x`.
    pub fn from_neighborhoods(nbhd: Vec<Subset>) -> Result<Self> {
        let t = FiniteTopology { nbhd };
        match t.neighborhood_defect() {
            None => Ok(t),
            Some(x) => Err(Error::Invalid(format!(
                "minimal neighborhood {} of point {x}",
                sets::format(&t.nbhd[x])
            ))),
        }
    }

    fn neighborhood_defect(&self) -> Option<usize> {
        (0..self.carrier()).find(|&x| {
            let u = &self.nbhd[x];
            u.len() != self.carrier() || !u.contains(x) || u.ones().any(|y| !self.nbhd[y].is_subset(u))
        })
    }

    pub fn carrier(&self) -> usize {
        self.nbhd.len()
    }

    pub fn minimal_neighborhood(&self, x: usize) -> &Subset {
        &self.nbhd[x]
    }

    pub fn is_open(&self, s: &Subset) -> bool {
        s.ones().all(|x| self.nbhd[x].is_subset(s))
    }

    pub fn is_closed(&self, s: &Subset) -> bool {
        self.is_open(&sets::complement(s))
    }

    /// Smallest open superset.
    pub fn hull(&self, s: &Subset) -> Subset {
        let mut out = sets::empty(self.carrier());
        for x in s.ones() {
            out.union_with(&self.nbhd[x]);
        }
        out
    }

    pub fn interior(&self, s: &Subset) -> Subset {
        sets::from_elements(self.carrier(), (0..self.carrier()).filter(|&x| self.nbhd[x].is_subset(s)))
    }

    /// Least closed superset: the points all of whose neighborhoods meet `s`.
    pub fn closure(&self, s: &Subset) -> Subset {
        sets::from_elements(
            self.carrier(),
            (0..self.carrier()).filter(|&x| !self.nbhd[x].is_disjoint(s)),
        )
    }

    /// Distinct minimal neighborhoods other than the whole carrier, sorted by
    /// element list. They generate the topology.
    pub fn generators(&self) -> Vec<Subset> {
        let n = self.carrier();
        let set: BTreeSet<Vec<usize>> = self
            .nbhd
            .iter()
            .filter(|u| u.count_ones(..) < n)
            .map(sets::elements)
            .collect();
        set.into_iter().map(|xs| sets::from_elements(n, xs)).collect()
    }

    pub fn is_discrete(&self) -> bool {
        self.nbhd.iter().all(|u| u.count_ones(..) == 1)
    }

    pub fn is_indiscrete(&self) -> bool {
        self.nbhd.iter().all(|u| u.count_ones(..) == self.carrier())
    }

    /// Every open set, sorted by element list; errors once more than `budget`
    /// have been found.
    pub fn opens(&self, budget: usize) -> Result<Vec<Subset>> {
        let n = self.carrier();
        let mut found: BTreeSet<Vec<usize>> = BTreeSet::new();
        found.insert(Vec::new());
        let mut all: Vec<Subset> = vec![sets::empty(n)];
        for g in self.generators().into_iter().chain(std::iter::once(sets::full(n))) {
            let snapshot = all.len();
            for i in 0..snapshot {
                let mut u = all[i].clone();
                u.union_with(&g);
                if found.insert(sets::elements(&u)) {
                    if found.len() > budget {
                        return Err(Error::BudgetExceeded {
                            what: "open sets".into(),
                            count: found.len() as u128,
                            budget: budget as u128,
                        });
                    }
                    all.push(u);
                }
            }
        }
        Ok(found.into_iter().map(|xs| sets::from_elements(n, xs)).collect())
    }

    /// `∅` and the carrier are open and opens are closed under pairwise union
    /// and intersection. The pairwise part runs when there are at most a few
    /// hundred opens; otherwise the neighborhood axioms, which imply it, are
    /// checked instead.
    pub fn verify_closure_invariants(&self) -> Verdict<String> {
        let n = self.carrier();
        if let Some(x) = self.neighborhood_defect() {
            return Verdict::fail(format!("neighborhood of {x} is not minimal open"));
        }
        if !self.is_open(&sets::empty(n)) || !self.is_open(&sets::full(n)) {
            return Verdict::fail("empty set or carrier not open".into());
        }
        let opens = match self.opens(PAIRWISE_CHECK_LIMIT) {
            Ok(opens) => opens,
            Err(_) => return Verdict::pass(),
        };
        let listed: BTreeSet<Vec<usize>> = opens.iter().map(sets::elements).collect();
        for u in &opens {
            for v in &opens {
                let mut join = u.clone();
                join.union_with(v);
                let mut meet = u.clone();
                meet.intersect_with(v);
                for w in [join, meet] {
                    if !listed.contains(&sets::elements(&w)) {
                        return Verdict::fail(format!(
                            "{} and {} combine to {}, which is missing",
                            sets::format(u),
                            sets::format(v),
                            sets::format(&w)
                        ));
                    }
                }
            }
        }
        Verdict::pass()
    }
}

/// Product topology on `|a|·|b|` points, `(i, j)` encoded as `i*|b| + j`.
pub fn product_topology(a: &FiniteTopology, b: &FiniteTopology) -> FiniteTopology {
    let m = b.carrier();
    let n = a.carrier() * m;
    let nbhd = (0..n)
        .map(|p| {
            let (ua, ub) = (&a.nbhd[p / m], &b.nbhd[p % m]);
            sets::from_elements(n, ua.ones().flat_map(|i| ub.ones().map(move |j| i * m + j)))
        })
        .collect();
    FiniteTopology { nbhd }
}

/// `k`-fold product with row-major encoding; the 0-fold power is one point.
pub fn power_topology(a: &FiniteTopology, k: usize) -> FiniteTopology {
    (0..k).fold(FiniteTopology::discrete(1), |acc, _| product_topology(&acc, a))
}

/// Induced topology on `subset`, whose points are renumbered in increasing
/// order.
pub fn subspace_topology(a: &FiniteTopology, subset: &Subset) -> FiniteTopology {
    let members = sets::elements(subset);
    let mut index = vec![usize::MAX; a.carrier()];
    for (i, &x) in members.iter().enumerate() {
        index[x] = i;
    }
    let k = members.len();
    let nbhd = members
        .iter()
        .map(|&x| sets::from_elements(k, a.nbhd[x].ones().filter(|&y| subset.contains(y)).map(|y| index[y])))
        .collect();
    FiniteTopology { nbhd }
}

/// Finest topology on `{0..m-1}` making `map` continuous.
pub fn quotient_topology(a: &FiniteTopology, map: &[usize], m: usize) -> Result<FiniteTopology> {
    let image = sets::from_elements(m, map.iter().copied());
    if map.len() != a.carrier() || image.count_ones(..) != m {
        return Err(Error::Precondition("quotient topology needs a surjective map".into()));
    }
    let nbhd = (0..m)
        .map(|y| {
            let mut v = sets::singleton(m, y);
            loop {
                let grown = sets::image(&a.hull(&sets::preimage(&v, map)), map, m);
                if grown == v {
                    return v;
                }
                v = grown;
            }
        })
        .collect();
    Ok(FiniteTopology { nbhd })
}

/// Witness is an open of `cod` whose preimage is not open.
pub fn is_continuous(dom: &FiniteTopology, cod: &FiniteTopology, map: &[usize]) -> Verdict<Subset> {
    let bad = (0..dom.carrier()).find(|&x| {
        let target = &cod.nbhd[map[x]];
        dom.nbhd[x].ones().any(|y| !target.contains(map[y]))
    });
    Verdict::from_counterexample(bad.map(|x| cod.nbhd[map[x]].clone()))
}

/// Witness is an open of `dom` whose image is not open.
pub fn is_open_map(dom: &FiniteTopology, cod: &FiniteTopology, map: &[usize]) -> Verdict<Subset> {
    let bad = (0..dom.carrier()).find(|&x| !cod.is_open(&sets::image(&dom.nbhd[x], map, cod.carrier())));
    Verdict::from_counterexample(bad.map(|x| dom.nbhd[x].clone()))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum QuotientFailure {
    NotSurjective { missing: usize },
    NotContinuous { open: Subset },
    /// A set with open preimage that is not open.
    NotFinal { set: Subset },
}

pub fn is_quotient_map(dom: &FiniteTopology, cod: &FiniteTopology, map: &[usize]) -> Verdict<QuotientFailure> {
    let m = cod.carrier();
    let image = sets::image(&sets::full(dom.carrier()), map, m);
    if let Some(missing) = (0..m).find(|&y| !image.contains(y)) {
        return Verdict::fail(QuotientFailure::NotSurjective { missing });
    }
    if let Some(open) = is_continuous(dom, cod, map).witness {
        return Verdict::fail(QuotientFailure::NotContinuous { open });
    }
    let q = quotient_topology(dom, map, m).expect("surjective");
    match (0..m).find(|&y| q.nbhd[y] != cod.nbhd[y]) {
        None => Verdict::pass(),
        Some(y) => Verdict::fail(QuotientFailure::NotFinal { set: q.nbhd[y].clone() }),
    }
}

pub fn is_homeomorphism(dom: &FiniteTopology, cod: &FiniteTopology, map: &[usize]) -> bool {
    let n = dom.carrier();
    if n != cod.carrier() || sets::from_elements(n, map.iter().copied()).count_ones(..) != n {
        return false;
    }
    is_continuous(dom, cod, map).holds && is_open_map(dom, cod, map).holds
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SeparationFlags {
    pub t1: bool,
    pub hausdorff: bool,
    pub regular: bool,
}

/// Regularity is the point / closed-set condition without T1: whenever
/// `x ∉ cl{y}` the points have disjoint neighborhoods, which covers every
/// closed set not containing `x`.
pub fn separation_report(t: &FiniteTopology) -> SeparationFlags {
    let n = t.carrier();
    let pairs = || (0..n).flat_map(|x| (0..n).map(move |y| (x, y))).filter(|(x, y)| x != y);
    SeparationFlags {
        t1: pairs().all(|(x, y)| !t.nbhd[x].contains(y)),
        hausdorff: pairs().all(|(x, y)| t.nbhd[x].is_disjoint(&t.nbhd[y])),
        regular: (0..n)
            .flat_map(|x| (0..n).map(move |y| (x, y)))
            .all(|(x, y)| t.nbhd[x].contains(y) || t.nbhd[x].is_disjoint(&t.nbhd[y])),
    }
}

/// Pairs `(a, b)` with `f(a) = g(b)` in lexicographic order, as a subset of
/// the product carrier.
pub fn pullback_subset(f: &[usize], g: &[usize]) -> Subset {
    let m = g.len();
    sets::from_elements(
        f.len() * m,
        (0..f.len() * m).filter(|&p| f[p / m] == g[p % m]),
    )
}

/// The data showing that a pullback of a quotient map need not be one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TopNotRegular {
    pub a: FiniteTopology,
    pub b: FiniteTopology,
    pub c: FiniteTopology,
    pub f: Vec<usize>,
    pub g: Vec<usize>,
    pub f_quotient: bool,
    /// Pullback points as `(a, b)` index pairs.
    pub pullback: Vec<(usize, usize)>,
    pub pullback_top: FiniteTopology,
    pub pi2: Vec<usize>,
    pub pi2_quotient: Verdict<QuotientFailure>,
    /// Preimage of the witness under the second projection, as pullback pairs.
    pub witness_preimage: Vec<(usize, usize)>,
}

/// `A = {a1..a4}` with open `{a1,a2}`, `B = {b1,b2,b3}` with open `{b1,b3}`,
/// `C` indiscrete on three points, `f = [c1,c2,c2,c3]`, `g = [c1,c3,c3]`
/// (all zero-based here).
pub fn top_not_regular_counterexample() -> TopNotRegular {
    let a = FiniteTopology::generate(4, &[sets::from_elements(4, [0, 1])]);
    let b = FiniteTopology::generate(3, &[sets::from_elements(3, [0, 2])]);
    let c = FiniteTopology::indiscrete(3);
    let f = vec![0, 1, 1, 2];
    let g = vec![0, 2, 2];
    let f_quotient = is_quotient_map(&a, &c, &f).holds;
    let subset = pullback_subset(&f, &g);
    let pullback_top = subspace_topology(&product_topology(&a, &b), &subset);
    let pullback: Vec<(usize, usize)> = subset.ones().map(|p| (p / 3, p % 3)).collect();
    let pi2: Vec<usize> = pullback.iter().map(|&(_, y)| y).collect();
    let pi2_quotient = is_quotient_map(&pullback_top, &b, &pi2);
    let witness_preimage = match &pi2_quotient.witness {
        Some(QuotientFailure::NotFinal { set }) => pullback
            .iter()
            .copied()
            .filter(|&(_, y)| set.contains(y))
            .collect(),
        _ => Vec::new(),
    };
    TopNotRegular {
        a,
        b,
        c,
        f,
        g,
        f_quotient,
        pullback,
        pullback_top,
        pi2,
        pi2_quotient,
        witness_preimage,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(n: usize, xs: &[usize]) -> Subset {
        sets::from_elements(n, xs.iter().copied())
    }

    fn sierpinski() -> FiniteTopology {
        FiniteTopology::generate(2, &[set(2, &[0])])
    }

    fn coset_z4() -> FiniteTopology {
        FiniteTopology::generate(4, &[set(4, &[0, 2]), set(4, &[1, 3])])
    }

    /// Reference closure by brute force: the least family containing the
    /// generators, ∅, X and closed under ∪, ∩.
    fn brute_opens(n: usize, gens: &[Subset]) -> BTreeSet<Vec<usize>> {
        let mut fam: BTreeSet<Vec<usize>> = gens.iter().map(sets::elements).collect();
        fam.insert(vec![]);
        fam.insert((0..n).collect());
        loop {
            let list: Vec<Subset> = fam.iter().map(|xs| set(n, xs)).collect();
            let mut next = fam.clone();
            for u in &list {
                for v in &list {
                    let mut j = u.clone();
                    j.union_with(v);
                    let mut m = u.clone();
                    m.intersect_with(v);
                    next.insert(sets::elements(&j));
                    next.insert(sets::elements(&m));
                }
            }
            if next == fam {
                return fam;
            }
            fam = next;
        }
    }

    fn opens(t: &FiniteTopology) -> BTreeSet<Vec<usize>> {
        t.opens(OPEN_SET_BUDGET).unwrap().iter().map(sets::elements).collect()
    }

    #[test]
    fn generate_examples() {
        assert_eq!(opens(&sierpinski()), BTreeSet::from([vec![], vec![0], vec![0, 1]]));
        assert!(FiniteTopology::generate(3, &[]).is_indiscrete());
        assert!(FiniteTopology::generate(2, &[set(2, &[0]), set(2, &[1])]).is_discrete());
    }

    #[test]
    fn generate_matches_brute_force() {
        let cases = [
            (4, vec![set(4, &[0, 1]), set(4, &[1, 2])]),
            (5, vec![set(5, &[0]), set(5, &[3, 4]), set(5, &[1, 3])]),
            (3, vec![set(3, &[0, 1]), set(3, &[1, 2]), set(3, &[0, 2])]),
        ];
        for (n, gens) in cases {
            let t = FiniteTopology::generate(n, &gens);
            assert_eq!(opens(&t), brute_opens(n, &gens));
            assert!(t.verify_closure_invariants().holds);
        }
    }

    #[test]
    fn continuity_examples() {
        let s = sierpinski();
        assert!(is_continuous(&s, &s, &[0, 1]).holds);
        assert!(is_continuous(&FiniteTopology::discrete(3), &s, &[1, 0, 1]).holds);
        let v = is_continuous(&FiniteTopology::indiscrete(2), &s, &[0, 1]);
        assert_eq!(v.witness, Some(set(2, &[0])));
    }

    #[test]
    fn products() {
        let d = FiniteTopology::discrete(2);
        assert!(product_topology(&d, &FiniteTopology::discrete(3)).is_discrete());
        let p = product_topology(&FiniteTopology::indiscrete(2), &sierpinski());
        assert_eq!(opens(&p), BTreeSet::from([vec![], vec![0, 2], vec![0, 1, 2, 3]]));
        // up-sets of the product order with 0 on top: (0,0) < (0,1),(1,0) < (1,1)
        let ss = product_topology(&sierpinski(), &sierpinski());
        assert_eq!(
            opens(&ss),
            BTreeSet::from([vec![], vec![0], vec![0, 1], vec![0, 2], vec![0, 1, 2], vec![0, 1, 2, 3]])
        );
        let (a, b) = (coset_z4(), sierpinski());
        let ab = product_topology(&a, &b);
        let pi1: Vec<usize> = (0..8).map(|p| p / 2).collect();
        let pi2: Vec<usize> = (0..8).map(|p| p % 2).collect();
        assert!(is_continuous(&ab, &a, &pi1).holds && is_open_map(&ab, &a, &pi1).holds);
        assert!(is_continuous(&ab, &b, &pi2).holds && is_open_map(&ab, &b, &pi2).holds);
    }

    #[test]
    fn subspaces_and_quotients() {
        assert!(subspace_topology(&FiniteTopology::discrete(4), &set(4, &[1, 3])).is_discrete());
        assert!(subspace_topology(&sierpinski(), &set(2, &[1])).is_indiscrete());
        assert!(subspace_topology(&coset_z4(), &set(4, &[0, 2])).is_indiscrete());
        let mod2 = [0, 1, 0, 1];
        assert!(quotient_topology(&FiniteTopology::discrete(4), &mod2, 2).unwrap().is_discrete());
        assert!(quotient_topology(&FiniteTopology::indiscrete(4), &mod2, 2).unwrap().is_indiscrete());
        assert!(quotient_topology(&coset_z4(), &mod2, 2).unwrap().is_discrete());
        assert!(quotient_topology(&coset_z4(), &[0, 0, 0, 0], 2).is_err());
    }

    #[test]
    fn closures() {
        let s = sierpinski();
        assert_eq!(sets::elements(&s.closure(&set(2, &[0]))), vec![0, 1]);
        assert_eq!(sets::elements(&s.closure(&set(2, &[1]))), vec![1]);
        let d = FiniteTopology::discrete(3);
        assert_eq!(d.closure(&set(3, &[2])), set(3, &[2]));
        assert_eq!(s.closure(&sets::empty(2)), sets::empty(2));
    }

    #[test]
    fn open_and_quotient_maps() {
        let d2 = FiniteTopology::discrete(2);
        let mod2 = [0, 1, 0, 1];
        assert!(is_open_map(&coset_z4(), &d2, &mod2).holds);
        assert!(is_quotient_map(&coset_z4(), &d2, &mod2).holds);
        let v = is_quotient_map(&d2, &sierpinski(), &[1, 1]);
        assert_eq!(v.witness, Some(QuotientFailure::NotSurjective { missing: 0 }));
        // {0} ↪ Sierpiński
        assert!(is_open_map(&FiniteTopology::discrete(1), &sierpinski(), &[0]).holds);
    }

    #[test]
    fn separation_examples() {
        let all = SeparationFlags {
            t1: true,
            hausdorff: true,
            regular: true,
        };
        assert_eq!(separation_report(&FiniteTopology::discrete(3)), all);
        assert_eq!(
            separation_report(&FiniteTopology::indiscrete(3)),
            SeparationFlags {
                t1: false,
                hausdorff: false,
                regular: true
            }
        );
        assert_eq!(
            separation_report(&sierpinski()),
            SeparationFlags {
                t1: false,
                hausdorff: false,
                regular: false
            }
        );
    }

    /// Regularity by the textbook definition over all closed sets and opens.
    #[test]
    fn regular_matches_definition() {
        let spaces = [
            sierpinski(),
            coset_z4(),
            FiniteTopology::generate(4, &[set(4, &[0, 1]), set(4, &[1, 2])]),
            FiniteTopology::generate(3, &[set(3, &[0]), set(3, &[1, 2])]),
        ];
        for t in spaces {
            let n = t.carrier();
            let opens = t.opens(OPEN_SET_BUDGET).unwrap();
            let regular = opens.iter().all(|u| {
                let closed = sets::complement(u);
                (0..n).filter(|x| !closed.contains(*x)).all(|x| {
                    opens.iter().any(|v| {
                        v.contains(x)
                            && opens.iter().any(|w| closed.is_subset(w) && v.is_disjoint(w))
                    })
                })
            });
            assert_eq!(separation_report(&t).regular, regular);
        }
    }

    #[test]
    fn counterexample_data() {
        let r = top_not_regular_counterexample();
        assert!(r.f_quotient);
        // (a1,b1), (a4,b2), (a4,b3)
        assert_eq!(r.pullback, vec![(0, 0), (3, 1), (3, 2)]);
        assert!(!r.pi2_quotient.holds);
        assert_eq!(r.pi2_quotient.witness, Some(QuotientFailure::NotFinal { set: set(3, &[0]) }));
        assert_eq!(r.witness_preimage, vec![(0, 0)]);
    }
}

//! Binary relations and congruences on finite algebras: kernel pairs,
//! generated congruences, quotients, regular epi-mono factorization and the
//! permutability / reflexive-relation checks.
//!
//! Relation composition is right to left: `(x, z) ∈ compose_relations(r, s)`
//! iff some `y` has `(x, y) ∈ s` and `(y, z) ∈ r`.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use fixedbitset::FixedBitSet;

use crate::algebra::{decode_into, product, subalgebra_closure, FiniteAlgebra, Homomorphism};
use crate::error::{Error, Result};
use crate::exec;
use crate::verdict::Verdict;

/// Cap on the number of congruences [`all_congruences`] will collect.
pub const CONGRUENCE_BUDGET: usize = 10_000;
/// Default carrier cap for [`compatible_reflexive_relations`].
pub const DEFAULT_RELATION_CARRIER: usize = 6;
const RELATION_BUDGET: usize = 100_000;

/// A relation on `{0..n-1}` stored as an `n×n` bit matrix.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BinaryRelation {
    n: usize,
    bits: FixedBitSet,
}

impl BinaryRelation {
    pub fn empty(n: usize) -> Self {
        BinaryRelation {
            n,
            bits: FixedBitSet::with_capacity(n * n),
        }
    }

    pub fn diagonal(n: usize) -> Self {
        let mut r = Self::empty(n);
        for x in 0..n {
            r.insert(x, x);
        }
        r
    }

    pub fn full(n: usize) -> Self {
        let mut r = Self::empty(n);
        r.bits.insert_range(..);
        r
    }

    pub fn from_pairs(n: usize, pairs: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut r = Self::empty(n);
        for (x, y) in pairs {
            r.insert(x, y);
        }
        r
    }

    pub fn carrier(&self) -> usize {
        self.n
    }

    pub fn contains(&self, x: usize, y: usize) -> bool {
        self.bits.contains(x * self.n + y)
    }

    pub fn insert(&mut self, x: usize, y: usize) {
        self.bits.insert(x * self.n + y);
    }

    pub fn len(&self) -> usize {
        self.bits.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_clear()
    }

    /// Pairs in lexicographic order.
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        self.bits.ones().map(|i| (i / self.n, i % self.n)).collect()
    }

    pub fn union(&self, other: &BinaryRelation) -> BinaryRelation {
        let mut bits = self.bits.clone();
        bits.union_with(&other.bits);
        BinaryRelation { n: self.n, bits }
    }

    pub fn is_subset(&self, other: &BinaryRelation) -> bool {
        self.bits.is_subset(&other.bits)
    }

    pub fn converse(&self) -> BinaryRelation {
        BinaryRelation::from_pairs(self.n, self.pairs().into_iter().map(|(x, y)| (y, x)))
    }

    /// Bit `x*n + y` of the product carrier, i.e. the same encoding as `A×A`.
    pub(crate) fn as_subset(&self) -> &FixedBitSet {
        &self.bits
    }
}

impl fmt::Display for BinaryRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.pairs().iter().map(|(x, y)| format!("({x},{y})")).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

/// `(x, z)` iff `∃y. (x, y) ∈ s ∧ (y, z) ∈ r`.
pub fn compose_relations(r: &BinaryRelation, s: &BinaryRelation) -> BinaryRelation {
    let n = r.n;
    let mut out = BinaryRelation::empty(n);
    for (x, y) in s.pairs() {
        for z in 0..n {
            if r.contains(y, z) {
                out.insert(x, z);
            }
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RelationFlags {
    pub reflexive: bool,
    pub symmetric: bool,
    pub transitive: bool,
    pub compatible: bool,
}

impl RelationFlags {
    pub fn is_congruence(&self) -> bool {
        self.reflexive && self.symmetric && self.transitive && self.compatible
    }
}

pub fn classify_relation(alg: &FiniteAlgebra, r: &BinaryRelation) -> RelationFlags {
    let n = r.n;
    let pairs = r.pairs();
    RelationFlags {
        reflexive: (0..n).all(|x| r.contains(x, x)),
        symmetric: pairs.iter().all(|&(x, y)| r.contains(y, x)),
        transitive: compose_relations(r, r).is_subset(r),
        compatible: is_compatible(alg, r),
    }
}

/// Closed under componentwise operations, i.e. a subalgebra of `A×A`.
pub fn is_compatible(alg: &FiniteAlgebra, r: &BinaryRelation) -> bool {
    let pairs = r.pairs();
    alg.signature().ops().iter().enumerate().all(|(op, sym)| {
        let k = sym.arity;
        if k == 0 {
            let c = alg.table(op)[0];
            return r.contains(c, c);
        }
        let count = pairs.len().pow(k as u32);
        exec::all(count, |i| {
            let mut picks = vec![0; k];
            decode_into(i, pairs.len(), &mut picks);
            let xs: Vec<usize> = picks.iter().map(|&p| pairs[p].0).collect();
            let ys: Vec<usize> = picks.iter().map(|&p| pairs[p].1).collect();
            r.contains(alg.apply(op, &xs), alg.apply(op, &ys))
        })
    })
}

/// A partition of the carrier; block ids are dense and numbered by smallest
/// element.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Congruence {
    block: Vec<usize>,
}

impl Congruence {
    /// Canonicalizes any labelling of the blocks.
    pub fn from_labels(labels: &[usize]) -> Self {
        let mut ids = std::collections::HashMap::new();
        let block = labels
            .iter()
            .map(|l| {
                let next = ids.len();
                *ids.entry(*l).or_insert(next)
            })
            .collect();
        Congruence { block }
    }

    pub fn diagonal(n: usize) -> Self {
        Congruence {
            block: (0..n).collect(),
        }
    }

    pub fn full(n: usize) -> Self {
        Congruence { block: vec![0; n] }
    }

    /// The equivalence generated by `r` (no compatibility closure).
    pub fn equivalence_closure(r: &BinaryRelation) -> Self {
        let mut uf = UnionFind::new(r.n);
        for (x, y) in r.pairs() {
            uf.union(x, y);
        }
        uf.congruence()
    }

    pub fn carrier(&self) -> usize {
        self.block.len()
    }

    pub fn block_of(&self, x: usize) -> usize {
        self.block[x]
    }

    pub fn labels(&self) -> &[usize] {
        &self.block
    }

    pub fn num_blocks(&self) -> usize {
        self.block.iter().max().map_or(0, |m| m + 1)
    }

    pub fn related(&self, x: usize, y: usize) -> bool {
        self.block[x] == self.block[y]
    }

    pub fn blocks(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.num_blocks()];
        for (x, &b) in self.block.iter().enumerate() {
            out[b].push(x);
        }
        out
    }

    pub fn relation(&self) -> BinaryRelation {
        let n = self.carrier();
        let mut r = BinaryRelation::empty(n);
        for x in 0..n {
            for y in 0..n {
                if self.related(x, y) {
                    r.insert(x, y);
                }
            }
        }
        r
    }

    pub fn join(&self, other: &Congruence) -> Congruence {
        let mut uf = UnionFind::new(self.carrier());
        for x in 0..self.carrier() {
            for c in [self, other] {
                let rep = c.block.iter().position(|&b| b == c.block[x]).unwrap();
                uf.union(x, rep);
            }
        }
        uf.congruence()
    }

    pub fn meet(&self, other: &Congruence) -> Congruence {
        let pairs: Vec<(usize, usize)> = self.block.iter().copied().zip(other.block.iter().copied()).collect();
        Congruence::from_labels(&pairs.iter().map(|&(a, b)| a * other.carrier() + b).collect::<Vec<_>>())
    }

    pub fn refines(&self, other: &Congruence) -> bool {
        let n = self.carrier();
        (0..n).all(|x| (0..n).all(|y| !self.related(x, y) || other.related(x, y)))
    }
}

impl fmt::Display for Congruence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in self.blocks() {
            let parts: Vec<String> = b.iter().map(|x| x.to_string()).collect();
            write!(f, "{{{}}}", parts.join(","))?;
        }
        Ok(())
    }
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns whether two classes were merged.
    fn union(&mut self, x: usize, y: usize) -> bool {
        let (a, b) = (self.find(x), self.find(y));
        if a == b {
            return false;
        }
        // keep the smaller element as root
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        self.parent[hi] = lo;
        true
    }

    fn congruence(&mut self) -> Congruence {
        let roots: Vec<usize> = (0..self.parent.len()).map(|x| self.find(x)).collect();
        Congruence::from_labels(&roots)
    }
}

/// Fibers of `f`.
pub fn kernel_pair(f: &Homomorphism) -> Congruence {
    Congruence::from_labels(&f.map)
}

/// Least congruence containing `seed`.
pub fn congruence_generated(alg: &FiniteAlgebra, seed: &[(usize, usize)]) -> Congruence {
    let n = alg.size();
    let mut uf = UnionFind::new(n);
    for &(x, y) in seed {
        uf.union(x, y);
    }
    let ops: Vec<(usize, usize)> = alg
        .signature()
        .ops()
        .iter()
        .enumerate()
        .filter(|(_, s)| s.arity > 0)
        .map(|(i, s)| (i, s.arity))
        .collect();
    let mut changed = true;
    while changed {
        changed = false;
        for &(op, k) in &ops {
            let mut args = vec![0; k];
            for t in 0..alg.table(op).len() {
                decode_into(t, n, &mut args);
                let out = alg.table(op)[t];
                for i in 0..k {
                    let a = args[i];
                    let root = uf.find(a);
                    if root == a {
                        continue;
                    }
                    args[i] = root;
                    let moved = alg.apply(op, &args);
                    args[i] = a;
                    changed |= uf.union(out, moved);
                }
            }
        }
    }
    uf.congruence()
}

pub fn is_congruence(alg: &FiniteAlgebra, c: &Congruence) -> bool {
    is_compatible(alg, &c.relation())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Quotient {
    pub algebra: Arc<FiniteAlgebra>,
    pub projection: Homomorphism,
}

/// Operations on blocks through their smallest representatives, after
/// checking every tuple agrees with the representative choice.
pub fn quotient(alg: &Arc<FiniteAlgebra>, c: &Congruence) -> Result<Quotient> {
    let n = alg.size();
    if c.carrier() != n {
        return Err(Error::Precondition(format!(
            "partition of {} elements on `{}` of size {n}",
            c.carrier(),
            alg.name()
        )));
    }
    let reps: Vec<usize> = c.blocks().iter().map(|b| b[0]).collect();
    for (op, sym) in alg.signature().ops().iter().enumerate() {
        let k = sym.arity;
        let table = alg.table(op);
        let bad = exec::find_first(table.len(), |t| {
            let mut args = vec![0; k];
            decode_into(t, n, &mut args);
            let via_reps: Vec<usize> = args.iter().map(|&a| reps[c.block_of(a)]).collect();
            !c.related(table[t], alg.apply(op, &via_reps))
        });
        if let Some(t) = bad {
            let mut args = vec![0; k];
            decode_into(t, n, &mut args);
            return Err(Error::NotWellDefined(format!(
                "`{}` at {:?} leaves the block of its representative tuple",
                sym.name, args
            )));
        }
    }
    let q = FiniteAlgebra::from_fn(
        format!("{}/~", alg.name()),
        alg.theory().clone(),
        reps.len(),
        |op, blocks| {
            let args: Vec<usize> = blocks.iter().map(|&b| reps[b]).collect();
            c.block_of(alg.apply(op, &args))
        },
    )?;
    let q = Arc::new(q);
    let projection = Homomorphism::new(
        format!("q_{}", alg.name()),
        alg.clone(),
        q.clone(),
        c.labels().to_vec(),
    )?;
    Ok(Quotient {
        algebra: q,
        projection,
    })
}

/// Whether `c` is the kernel pair of its own quotient projection; the
/// witness is the first pair on which they differ.
pub fn effectiveness_check(alg: &Arc<FiniteAlgebra>, c: &Congruence) -> Result<Verdict<(usize, usize)>> {
    let q = quotient(alg, c)?;
    let k = kernel_pair(&q.projection);
    let n = alg.size();
    let bad = (0..n * n).find(|&i| c.related(i / n, i % n) != k.related(i / n, i % n));
    Ok(Verdict::from_counterexample(bad.map(|i| (i / n, i % n))))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    pub e: Homomorphism,
    pub m: Homomorphism,
    pub mid: Arc<FiniteAlgebra>,
}

/// `f = m ∘ e` through the quotient by the kernel pair of `f`.
pub fn factorize(f: &Homomorphism) -> Result<Factorization> {
    let q = quotient(&f.dom, &kernel_pair(f))?;
    let mut map = vec![0; q.algebra.size()];
    for (x, &b) in q.projection.map.iter().enumerate() {
        map[b] = f.map[x];
    }
    let mid = Arc::new(q.algebra.as_ref().clone().with_name(format!("im_{}", f.name)));
    let e = Homomorphism::new(format!("e_{}", f.name), f.dom.clone(), mid.clone(), q.projection.map)?;
    let m = Homomorphism::new(format!("m_{}", f.name), mid.clone(), f.cod.clone(), map)?;
    Ok(Factorization { e, m, mid })
}

/// Given `v ∘ f = g ∘ u`, the map `θ` between the factorization middles with
/// `θ ∘ e_f = e_g ∘ u` and `m_g ∘ θ = v ∘ m_f`.
pub fn induced_image_map(
    f: &Homomorphism,
    g: &Homomorphism,
    u: &Homomorphism,
    v: &Homomorphism,
) -> Result<Homomorphism> {
    if v.after(f)?.map != g.after(u)?.map {
        return Err(Error::Precondition("the square does not commute".into()));
    }
    let (ff, fg) = (factorize(f)?, factorize(g)?);
    let mut theta = vec![usize::MAX; ff.mid.size()];
    for a in 0..f.dom.size() {
        let (i, j) = (ff.e.map[a], fg.e.map[u.map[a]]);
        if theta[i] != usize::MAX && theta[i] != j {
            return Err(Error::NotWellDefined(format!("image element {i} has two candidates")));
        }
        theta[i] = j;
    }
    Homomorphism::new("theta", ff.mid.clone(), fg.mid.clone(), theta)
}

/// Principal congruences closed under joins, ordered by decreasing number of
/// blocks then by labels (the diagonal first).
pub fn all_congruences(alg: &FiniteAlgebra) -> Result<Vec<Congruence>> {
    let n = alg.size();
    let principal: BTreeSet<Congruence> = exec::map_range(n * n, |i| {
        let (x, y) = (i / n, i % n);
        (x < y).then(|| congruence_generated(alg, &[(x, y)]))
    })
    .into_iter()
    .flatten()
    .collect();
    let mut all: BTreeSet<Congruence> = principal.clone();
    all.insert(Congruence::diagonal(n));
    let mut frontier: Vec<Congruence> = all.iter().cloned().collect();
    while let Some(c) = frontier.pop() {
        for p in &principal {
            let j = c.join(p);
            if all.insert(j.clone()) {
                if all.len() > CONGRUENCE_BUDGET {
                    return Err(Error::BudgetExceeded {
                        what: format!("congruences of `{}`", alg.name()),
                        count: all.len() as u128,
                        budget: CONGRUENCE_BUDGET as u128,
                    });
                }
                frontier.push(j);
            }
        }
    }
    let mut out: Vec<Congruence> = all.into_iter().collect();
    out.sort_by(|a, b| b.num_blocks().cmp(&a.num_blocks()).then_with(|| a.cmp(b)));
    Ok(out)
}

/// Whether every pair of congruences permutes; witness is the first
/// non-permuting pair `(R, R')` in [`all_congruences`] order.
pub fn permutability_report(alg: &FiniteAlgebra) -> Result<Verdict<(Congruence, Congruence)>> {
    let cons = all_congruences(alg)?;
    let rels: Vec<BinaryRelation> = cons.iter().map(Congruence::relation).collect();
    let m = cons.len();
    let bad = exec::find_first(m * m, |i| {
        let (a, b) = (i / m, i % m);
        a < b && compose_relations(&rels[a], &rels[b]) != compose_relations(&rels[b], &rels[a])
    });
    Ok(Verdict::from_counterexample(
        bad.map(|i| (cons[i / m].clone(), cons[i % m].clone())),
    ))
}

/// Every reflexive subalgebra of `A×A`, sorted by pair list. Refuses carriers
/// above `max_carrier`.
pub fn compatible_reflexive_relations(
    alg: &Arc<FiniteAlgebra>,
    max_carrier: usize,
) -> Result<Vec<BinaryRelation>> {
    let n = alg.size();
    if n > max_carrier {
        return Err(Error::BudgetExceeded {
            what: format!("relation enumeration on `{}` (carrier cap {max_carrier})", alg.name()),
            count: n as u128,
            budget: max_carrier as u128,
        });
    }
    let square = product(alg, alg)?.algebra;
    let close = |r: &FixedBitSet| BinaryRelation {
        n,
        bits: subalgebra_closure(&square, r),
    };
    let diagonal = BinaryRelation::diagonal(n);
    let base: Vec<BinaryRelation> = (0..n * n)
        .filter(|i| i / n != i % n)
        .map(|i| {
            let mut r = diagonal.clone();
            r.insert(i / n, i % n);
            close(r.as_subset())
        })
        .collect();
    let mut all: BTreeSet<Vec<(usize, usize)>> = BTreeSet::new();
    let mut found: Vec<BinaryRelation> = Vec::new();
    let start = close(diagonal.as_subset());
    all.insert(start.pairs());
    found.push(start.clone());
    let mut frontier = vec![start];
    while let Some(r) = frontier.pop() {
        for b in &base {
            if b.is_subset(&r) {
                continue;
            }
            let j = close(r.union(b).as_subset());
            if all.insert(j.pairs()) {
                if all.len() > RELATION_BUDGET {
                    return Err(Error::BudgetExceeded {
                        what: format!("reflexive relations on `{}`", alg.name()),
                        count: all.len() as u128,
                        budget: RELATION_BUDGET as u128,
                    });
                }
                found.push(j.clone());
                frontier.push(j);
            }
        }
    }
    found.sort_by_key(BinaryRelation::pairs);
    Ok(found)
}

/// Whether every compatible reflexive relation is an equivalence; witness is
/// the first one that is not.
pub fn reflexive_implies_equivalence_report(
    alg: &Arc<FiniteAlgebra>,
    max_carrier: usize,
) -> Result<Verdict<BinaryRelation>> {
    let rels = compatible_reflexive_relations(alg, max_carrier)?;
    let bad = rels.into_iter().find(|r| {
        let f = classify_relation(alg, r);
        !(f.symmetric && f.transitive)
    });
    Ok(Verdict::from_counterexample(bad))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{OpSymbol, Signature, Theory};

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

    fn hom(a: &Arc<FiniteAlgebra>, b: &Arc<FiniteAlgebra>, map: Vec<usize>) -> Homomorphism {
        Homomorphism::new("f", a.clone(), b.clone(), map).unwrap()
    }

    /// Partitions of `{0..n-1}` as restricted growth strings.
    fn partitions(n: usize) -> Vec<Congruence> {
        fn go(prefix: &mut Vec<usize>, n: usize, out: &mut Vec<Congruence>) {
            if prefix.len() == n {
                out.push(Congruence::from_labels(prefix));
                return;
            }
            let next = prefix.iter().max().map_or(0, |m| m + 1);
            for b in 0..=next {
                prefix.push(b);
                go(prefix, n, out);
                prefix.pop();
            }
        }
        let mut out = Vec::new();
        go(&mut Vec::new(), n, &mut out);
        out
    }

    #[test]
    fn classify_examples() {
        let z4 = cyclic(4);
        let all = RelationFlags {
            reflexive: true,
            symmetric: true,
            transitive: true,
            compatible: true,
        };
        assert_eq!(classify_relation(&z4, &BinaryRelation::diagonal(4)), all);
        assert_eq!(classify_relation(&z4, &BinaryRelation::full(4)), all);
        let z2 = cyclic(2);
        let f = classify_relation(&z2, &BinaryRelation::from_pairs(2, [(0, 0), (1, 1), (0, 1)]));
        assert!(f.reflexive && !f.symmetric);
    }

    #[test]
    fn kernel_pairs() {
        let (z4, z2) = (cyclic(4), cyclic(2));
        assert_eq!(kernel_pair(&hom(&z4, &z2, vec![0, 1, 0, 1])).blocks(), vec![vec![0, 2], vec![1, 3]]);
        assert_eq!(kernel_pair(&Homomorphism::identity(&z4)), Congruence::diagonal(4));
        assert_eq!(kernel_pair(&hom(&z4, &z2, vec![0; 4])).num_blocks(), 1);
    }

    #[test]
    fn generated_examples() {
        let z6 = cyclic(6);
        assert_eq!(
            congruence_generated(&z6, &[(0, 3)]).blocks(),
            vec![vec![0, 3], vec![1, 4], vec![2, 5]]
        );
        assert_eq!(congruence_generated(&z6, &[]), Congruence::diagonal(6));
        assert_eq!(congruence_generated(&z6, &[(0, 1)]), Congruence::full(6));
    }

    #[test]
    fn congruences_match_brute_force() {
        // oracle: filter all partitions by compatibility
        for (alg, expected) in [(cyclic(4), 3), (cyclic(6), 4), (m2(), 2)] {
            let brute: BTreeSet<Congruence> = partitions(alg.size())
                .into_iter()
                .filter(|c| is_congruence(&alg, c))
                .collect();
            let found: BTreeSet<Congruence> = all_congruences(&alg).unwrap().into_iter().collect();
            assert_eq!(found, brute);
            assert_eq!(found.len(), expected);
        }
    }

    #[test]
    fn quotients() {
        let z6 = cyclic(6);
        let c = congruence_generated(&z6, &[(0, 3)]);
        let q = quotient(&z6, &c).unwrap();
        assert!(crate::algebra::find_isomorphism(&q.algebra, &cyclic(3)).is_some());
        assert_eq!(kernel_pair(&q.projection), c);
        let full = quotient(&z6, &Congruence::full(6)).unwrap();
        assert_eq!(full.algebra.size(), 1);
        let bad = Congruence::from_labels(&[0, 0, 1, 1, 1, 1]);
        assert!(matches!(quotient(&z6, &bad), Err(Error::NotWellDefined(_))));
        for c in all_congruences(&cyclic(4)).unwrap() {
            assert!(effectiveness_check(&cyclic(4), &c).unwrap().holds);
        }
    }

    #[test]
    fn factorizations() {
        let (z4, z2) = (cyclic(4), cyclic(2));
        let f = hom(&z4, &z2, vec![0, 1, 0, 1]);
        let fac = factorize(&f).unwrap();
        assert!(fac.m.is_bijective() && fac.e.is_surjective());
        assert_eq!(fac.m.after(&fac.e).unwrap().map, f.map);
        let zero = hom(&z4, &z4, vec![0; 4]);
        assert_eq!(factorize(&zero).unwrap().mid.size(), 1);
        assert!(factorize(&Homomorphism::identity(&z4)).unwrap().e.is_bijective());
    }

    #[test]
    fn composition_examples() {
        let z6 = cyclic(6);
        let a = congruence_generated(&z6, &[(0, 3)]).relation();
        let b = congruence_generated(&z6, &[(0, 2)]).relation();
        assert_eq!(compose_relations(&a, &b), BinaryRelation::full(6));
        assert_eq!(compose_relations(&b, &a), BinaryRelation::full(6));
        let d = BinaryRelation::diagonal(6);
        assert_eq!(compose_relations(&a, &d), a);
        assert_eq!(compose_relations(&d, &d), d);
        // (0,1) then (1,2): right-to-left reading
        let r = BinaryRelation::from_pairs(3, [(1, 2)]);
        let s = BinaryRelation::from_pairs(3, [(0, 1)]);
        assert_eq!(compose_relations(&r, &s).pairs(), vec![(0, 2)]);
    }

    #[test]
    fn permutability_and_reflexive() {
        assert!(permutability_report(&cyclic(4)).unwrap().holds);
        assert!(permutability_report(&cyclic(1)).unwrap().holds);
        assert!(permutability_report(&m2()).unwrap().holds);
        let z2 = cyclic(2);
        assert!(reflexive_implies_equivalence_report(&z2, 6).unwrap().holds);
        assert!(reflexive_implies_equivalence_report(&cyclic(1), 6).unwrap().holds);
        let v = reflexive_implies_equivalence_report(&m2(), 6).unwrap();
        assert_eq!(v.witness.unwrap().pairs(), vec![(0, 0), (0, 1), (1, 1)]);
        assert!(matches!(
            reflexive_implies_equivalence_report(&cyclic(7), 6),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn reflexive_relations_match_brute_force() {
        // oracle: every reflexive relation on a 3-element carrier, filtered
        let z3 = cyclic(3);
        let off: Vec<(usize, usize)> = (0..9).map(|i| (i / 3, i % 3)).filter(|(x, y)| x != y).collect();
        let mut brute = Vec::new();
        for mask in 0u32..(1 << off.len()) {
            let mut r = BinaryRelation::diagonal(3);
            for (b, &(x, y)) in off.iter().enumerate() {
                if mask >> b & 1 == 1 {
                    r.insert(x, y);
                }
            }
            if is_compatible(&z3, &r) {
                brute.push(r);
            }
        }
        brute.sort_by_key(BinaryRelation::pairs);
        assert_eq!(compatible_reflexive_relations(&z3, 6).unwrap(), brute);
    }

    #[test]
    fn image_map_of_a_square() {
        let (z4, z2) = (cyclic(4), cyclic(2));
        let f = hom(&z4, &z2, vec![0, 1, 0, 1]);
        let id4 = Homomorphism::identity(&z4);
        let id2 = Homomorphism::identity(&z2);
        let theta = induced_image_map(&f, &f, &id4, &id2).unwrap();
        assert!(crate::algebra::check_hom(&theta).holds && theta.is_bijective());
        let zero = hom(&z4, &z2, vec![0; 4]);
        assert!(induced_image_map(&f, &zero, &id4, &id2).is_err());
    }
}

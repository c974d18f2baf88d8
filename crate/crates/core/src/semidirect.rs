//! Group actions and semidirect products, split points and their kernels,
//! the action / point round trip, and the reconstruction of a split point of
//! Ω-loop algebras as an algebra on `X × B`.
//!
//! A split point is a pair `p: A → B`, `s: B → A` with `p ∘ s = id_B`. The
//! semidirect product `K ⋊_φ Q` has carrier `K × Q` (row-major) and
//! multiplication `(a, b)(a', b') = (a·φ_b(a'), b·b')`.

use std::sync::Arc;

use crate::algebra::{check_hom, is_algebra_of, satisfies, subalgebra, FiniteAlgebra, Homomorphism};
use crate::error::{Error, Result};
use crate::group::GroupView;
use crate::sets::{self, Subset};
use crate::syntax::{Equation, Term, Theory};
use crate::topalg::certify;
use crate::topology::{is_continuous, product_topology, subspace_topology, FiniteTopology};
use crate::verdict::Verdict;

#[derive(Debug, Clone, PartialEq)]
pub struct SplitPoint {
    pub name: String,
    pub p: Arc<Homomorphism>,
    pub s: Arc<Homomorphism>,
}

impl SplitPoint {
    /// Checks only that `p: A → B` and `s: B → A` fit together; whether
    /// `p ∘ s = id` is left to [`SplitPoint::split_verdict`].
    pub fn new(name: impl Into<String>, p: Arc<Homomorphism>, s: Arc<Homomorphism>) -> Result<Self> {
        let name = name.into();
        if p.dom != s.cod || p.cod != s.dom {
            return Err(Error::Invalid(format!(
                "point `{name}`: `{}` runs {} -> {} but `{}` runs {} -> {}",
                p.name,
                p.dom.name(),
                p.cod.name(),
                s.name,
                s.dom.name(),
                s.cod.name()
            )));
        }
        Ok(SplitPoint { name, p, s })
    }

    pub fn total(&self) -> &Arc<FiniteAlgebra> {
        &self.p.dom
    }

    pub fn base(&self) -> &Arc<FiniteAlgebra> {
        &self.p.cod
    }

    /// `p ∘ s = id`, with the first `b` where it fails.
    pub fn split_verdict(&self) -> Verdict<usize> {
        Verdict::from_counterexample((0..self.base().size()).find(|&b| self.p.map[self.s.map[b]] != b))
    }

    fn require_split(&self) -> Result<()> {
        match self.split_verdict().witness {
            None => Ok(()),
            Some(b) => Err(Error::Precondition(format!(
                "point `{}`: p(s({b})) = {} is not {b}",
                self.name,
                self.p.map[self.s.map[b]]
            ))),
        }
    }
}

/// `phi[b]` is the automorphism of `k` by which `b ∈ q` acts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupAction {
    pub k: Arc<FiniteAlgebra>,
    pub q: Arc<FiniteAlgebra>,
    pub phi: Vec<Vec<usize>>,
}

impl GroupAction {
    pub fn new(k: Arc<FiniteAlgebra>, q: Arc<FiniteAlgebra>, phi: Vec<Vec<usize>>) -> Result<Self> {
        let gk = GroupView::new(&k)?;
        let gq = GroupView::new(&q)?;
        if phi.len() != q.size() {
            return Err(Error::Invalid(format!("action has {} maps for a group of order {}", phi.len(), q.size())));
        }
        for (b, f) in phi.iter().enumerate() {
            let h = Homomorphism::new(format!("phi{b}"), k.clone(), k.clone(), f.clone())?;
            if !check_hom(&h).holds || !h.is_bijective() {
                return Err(Error::Invalid(format!("phi_{b} is not an automorphism of `{}`", k.name())));
            }
        }
        if phi[gq.e()].iter().enumerate().any(|(x, &y)| x != y) {
            return Err(Error::Invalid("the identity does not act trivially".into()));
        }
        for b in 0..q.size() {
            for c in 0..q.size() {
                let bc = gq.mul(b, c);
                if (0..k.size()).any(|x| phi[bc][x] != phi[b][phi[c][x]]) {
                    return Err(Error::Invalid(format!("phi_({b}*{c}) differs from phi_{b} . phi_{c}")));
                }
            }
        }
        debug_assert_eq!(gk.size(), k.size());
        Ok(GroupAction { k, q, phi })
    }

    pub fn trivial(k: Arc<FiniteAlgebra>, q: Arc<FiniteAlgebra>) -> Result<Self> {
        let phi = vec![(0..k.size()).collect(); q.size()];
        GroupAction::new(k, q, phi)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Semidirect {
    pub algebra: Arc<FiniteAlgebra>,
    /// `x ↦ (x, e)`
    pub k_injection: Homomorphism,
    /// `b ↦ (e, b)`
    pub q_injection: Homomorphism,
    /// `(a, b) ↦ b`
    pub projection: Homomorphism,
}

pub fn build_semidirect(act: &GroupAction) -> Result<Semidirect> {
    let gk = GroupView::new(&act.k)?;
    let gq = GroupView::new(&act.q)?;
    let m = act.q.size();
    let sym = gk.symbols;
    let name = format!("{}sd{}", act.k.name(), act.q.name());
    let alg = FiniteAlgebra::from_fn(name, act.k.theory().clone(), act.k.size() * m, |op, args| {
        let (a, b) = (|x: usize| x / m, |x: usize| x % m);
        if op == sym.e {
            gk.e() * m + gq.e()
        } else if op == sym.inv {
            let binv = gq.inv(b(args[0]));
            act.phi[binv][gk.inv(a(args[0]))] * m + binv
        } else {
            let (x, y) = (args[0], args[1]);
            gk.mul(a(x), act.phi[b(x)][a(y)]) * m + gq.mul(b(x), b(y))
        }
    })?;
    let alg = Arc::new(alg);
    let report = is_algebra_of(&alg)?;
    if !report.holds() {
        return Err(Error::Invalid(format!("`{}` fails the group axioms", alg.name())));
    }
    let k_injection = Homomorphism::new("inK", act.k.clone(), alg.clone(), (0..act.k.size()).map(|x| x * m + gq.e()).collect())?;
    let q_injection = Homomorphism::new("inQ", act.q.clone(), alg.clone(), (0..m).map(|b| gk.e() * m + b).collect())?;
    let projection = Homomorphism::new("prQ", alg.clone(), act.q.clone(), (0..alg.size()).map(|x| x % m).collect())?;
    Ok(Semidirect {
        algebra: alg,
        k_injection,
        q_injection,
        projection,
    })
}

/// The semidirect product laws: `(e,b)(a,e)(e,b)⁻¹ = (φ_b(a), e)` and
/// `b·a = φ_b(a)·b` under the injections. Witness `(a, b)`.
pub fn semidirect_laws(act: &GroupAction, sd: &Semidirect) -> Result<Verdict<(usize, usize)>> {
    let g = GroupView::new(&sd.algebra)?;
    for a in 0..act.k.size() {
        for b in 0..act.q.size() {
            let (ia, jb) = (sd.k_injection.map[a], sd.q_injection.map[b]);
            let phi_a = sd.k_injection.map[act.phi[b][a]];
            let normal = g.mul(g.mul(jb, ia), g.inv(jb)) == phi_a;
            let relation = g.mul(jb, ia) == g.mul(phi_a, jb);
            if !normal || !relation {
                return Ok(Verdict::fail((a, b)));
            }
        }
    }
    Ok(Verdict::pass())
}

/// `k_sub` normal, `q_sub` a subgroup, `K ∩ Q = {e}` and `KQ = G`.
pub fn complement_check(g: &Arc<FiniteAlgebra>, k_sub: &Subset, q_sub: &Subset) -> Result<Verdict<String>> {
    let gv = GroupView::new(g)?;
    if !gv.is_subgroup(k_sub) || !gv.is_subgroup(q_sub) {
        return Err(Error::Precondition("both sets must be subgroups".into()));
    }
    if !gv.is_normal(k_sub) {
        return Err(Error::Precondition(format!("{} is not normal", sets::format(k_sub))));
    }
    let mut meet = k_sub.clone();
    meet.intersect_with(q_sub);
    if meet != sets::singleton(g.size(), gv.e()) {
        return Ok(Verdict::fail(format!("intersection is {}", sets::format(&meet))));
    }
    let products = sets::from_elements(
        g.size(),
        k_sub.ones().flat_map(|k| q_sub.ones().map(move |q| (k, q))).map(|(k, q)| gv.mul(k, q)),
    );
    if products.count_ones(..) != g.size() {
        return Ok(Verdict::fail(format!("KQ is only {}", sets::format(&products))));
    }
    Ok(Verdict::pass())
}

#[derive(Debug, Clone, PartialEq)]
pub struct SplitExact {
    /// `p⁻¹(e)` in the total group.
    pub kernel: Subset,
    pub kernel_normal: bool,
    pub p_surjective: bool,
    /// First element not reproduced by `g = s(p(g)) · (s(p(g⁻¹)) · g)` with
    /// the second factor in the kernel.
    pub factorization: Verdict<usize>,
}

impl SplitExact {
    pub fn holds(&self) -> bool {
        self.kernel_normal && self.p_surjective && self.factorization.holds
    }
}

pub fn split_exact_check(pt: &SplitPoint) -> Result<SplitExact> {
    pt.require_split()?;
    let ga = GroupView::new(pt.total())?;
    let gb = GroupView::new(pt.base())?;
    let (p, s) = (&pt.p.map, &pt.s.map);
    let kernel = sets::from_elements(ga.size(), (0..ga.size()).filter(|&x| p[x] == gb.e()));
    let bad = (0..ga.size()).find(|&g| {
        let left = s[p[g]];
        let right = ga.mul(s[p[ga.inv(g)]], g);
        !kernel.contains(right) || ga.mul(left, right) != g
    });
    Ok(SplitExact {
        kernel_normal: ga.is_normal(&kernel),
        p_surjective: pt.p.is_surjective(),
        factorization: Verdict::from_counterexample(bad),
        kernel,
    })
}

/// The kernel of `p` as a group of its own (elements in carrier order) and
/// its inclusion.
pub fn kernel_of_point(pt: &SplitPoint) -> Result<(Arc<FiniteAlgebra>, Homomorphism)> {
    let gb = GroupView::new(pt.base())?;
    let a = pt.total();
    let kernel = sets::from_elements(a.size(), (0..a.size()).filter(|&x| pt.p.map[x] == gb.e()));
    let sub = subalgebra(a, &kernel, format!("ker_{}", pt.p.name))?;
    Ok((sub.algebra, sub.inclusion))
}

/// Conjugation by the section: `φ_g(x) = s(g)·x·s(g)⁻¹` on the kernel.
pub fn point_to_action(pt: &SplitPoint) -> Result<GroupAction> {
    pt.require_split()?;
    let ga = GroupView::new(pt.total())?;
    let (k, incl) = kernel_of_point(pt)?;
    let mut index = vec![usize::MAX; ga.size()];
    for (i, &x) in incl.map.iter().enumerate() {
        index[x] = i;
    }
    let phi = (0..pt.base().size())
        .map(|g| {
            let sg = pt.s.map[g];
            (0..k.size())
                .map(|x| {
                    let conj = ga.mul(ga.mul(sg, incl.map[x]), ga.inv(sg));
                    match index[conj] {
                        usize::MAX => Err(Error::Invalid(format!("conjugate of {x} by s({g}) leaves the kernel"))),
                        i => Ok(i),
                    }
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    GroupAction::new(k, pt.base().clone(), phi)
}

/// The point `(projection, Q-injection)` of the semidirect product.
pub fn action_to_point(act: &GroupAction) -> Result<(Semidirect, SplitPoint)> {
    let sd = build_semidirect(act)?;
    let pt = SplitPoint::new(
        format!("pt_{}", sd.algebra.name()),
        Arc::new(sd.projection.clone()),
        Arc::new(sd.q_injection.clone()),
    )?;
    Ok((sd, pt))
}

#[derive(Debug, Clone, PartialEq)]
pub struct RoundTrip {
    pub action: GroupAction,
    pub semidirect: Semidirect,
    /// `u(x) = (x·s(p(x))⁻¹, p(x))`
    pub u: Homomorphism,
    pub u_is_iso: bool,
    /// `projection ∘ u = p`
    pub commutes_p: bool,
    /// `u ∘ s = Q-injection`
    pub commutes_s: bool,
}

impl RoundTrip {
    pub fn holds(&self) -> bool {
        self.u_is_iso && self.commutes_p && self.commutes_s
    }
}

pub fn point_roundtrip_iso(pt: &SplitPoint) -> Result<RoundTrip> {
    let action = point_to_action(pt)?;
    let semidirect = build_semidirect(&action)?;
    let ga = GroupView::new(pt.total())?;
    let (_, incl) = kernel_of_point(pt)?;
    let mut index = vec![usize::MAX; ga.size()];
    for (i, &x) in incl.map.iter().enumerate() {
        index[x] = i;
    }
    let m = pt.base().size();
    let map = (0..ga.size())
        .map(|x| {
            let b = pt.p.map[x];
            let x0 = ga.mul(x, ga.inv(pt.s.map[b]));
            match index[x0] {
                usize::MAX => Err(Error::Invalid(format!("{x}·s(p({x}))⁻¹ is not in the kernel"))),
                i => Ok(i * m + b),
            }
        })
        .collect::<Result<Vec<_>>>()?;
    let u = Homomorphism::new("u", pt.total().clone(), semidirect.algebra.clone(), map)?;
    Ok(RoundTrip {
        u_is_iso: check_hom(&u).holds && u.is_bijective(),
        commutes_p: semidirect.projection.after(&u)?.map == pt.p.map,
        commutes_s: u.after(&pt.s)?.map == semidirect.q_injection.map,
        action,
        semidirect,
        u,
    })
}

/// A pointed theory with binary `+` and `−` (given as terms in `x0`, `x1`)
/// satisfying `x+0 = x`, `0+x = x`, `(x+y)−y = x`, `(x−y)+y = x`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OmegaLoopSpec {
    pub theory: Arc<Theory>,
    pub zero: Term,
    pub plus: Term,
    pub minus: Term,
}

impl OmegaLoopSpec {
    /// `0 = e`, `x + y = x·y`, `x − y = x·y⁻¹`.
    pub fn for_group(theory: &Arc<Theory>) -> Option<Self> {
        let g = crate::group::GroupSymbols::detect(&theory.signature)?;
        let (e, _, _) = g.names(&theory.signature);
        Some(OmegaLoopSpec {
            theory: theory.clone(),
            zero: Term::constant(e),
            plus: g.product_term(&theory.signature),
            minus: g.division_term(&theory.signature),
        })
    }

    pub fn from_symbols(theory: &Arc<Theory>, zero: &str, plus: &str, minus: &str) -> Result<Self> {
        let xy = vec![Term::var(0), Term::var(1)];
        let spec = OmegaLoopSpec {
            theory: theory.clone(),
            zero: Term::constant(zero),
            plus: Term::app(plus, xy.clone()),
            minus: Term::app(minus, xy),
        };
        for t in [&spec.zero, &spec.plus, &spec.minus] {
            t.check(&theory.signature)?;
        }
        Ok(spec)
    }

    fn add(&self, a: &Term, b: &Term) -> Term {
        self.plus.substitute(&[a.clone(), b.clone()])
    }

    fn sub(&self, a: &Term, b: &Term) -> Term {
        self.minus.substitute(&[a.clone(), b.clone()])
    }

    pub fn axioms(&self) -> Vec<Equation> {
        let (x, y, z) = (Term::var(0), Term::var(1), &self.zero);
        vec![
            Equation::new(self.add(&x, z), x.clone()),
            Equation::new(self.add(z, &x), x.clone()),
            Equation::new(self.sub(&self.add(&x, &y), &y), x.clone()),
            Equation::new(self.add(&self.sub(&x, &y), &y), x.clone()),
        ]
    }

    /// First failing axiom on `alg`, if any.
    pub fn verify(&self, alg: &FiniteAlgebra) -> Result<Option<(Equation, Vec<usize>)>> {
        for ax in self.axioms() {
            let v = satisfies(alg, &ax)?;
            if let Some(env) = v.witness {
                return Ok(Some((ax, env)));
            }
        }
        Ok(None)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Reconstruction {
    /// Kernel elements of the total algebra, in carrier order.
    pub kernel: Vec<usize>,
    /// The algebra transported to `X × B` (row-major).
    pub algebra: Arc<FiniteAlgebra>,
    /// Product of the kernel subspace and the base topology.
    pub topology: FiniteTopology,
    /// `ζ(x, b) = x + s(b)` on `X × B`.
    pub zeta: Vec<usize>,
    /// `χ(a) = (a − s(p(a)), p(a))`.
    pub chi: Vec<usize>,
    pub inverse_pair: bool,
    /// (i) second component is `ω_B(b̄)`.
    pub second_component: Verdict<(String, Vec<usize>)>,
    /// (ii) first component is `ω_A(x̄ + s(b̄)) − s(ω_B(b̄))`.
    pub first_component: Verdict<(String, Vec<usize>)>,
    /// (iii) the topology transported along `χ` is the product topology.
    pub product_topology: bool,
    /// (iv) `ζ` and `χ` are continuous.
    pub continuous: bool,
}

impl Reconstruction {
    pub fn holds(&self) -> bool {
        self.inverse_pair
            && self.second_component.holds
            && self.first_component.holds
            && self.product_topology
            && self.continuous
    }
}

/// Rebuilds the total algebra of a split point as an algebra on `X × B`,
/// where `X` is the kernel of `p`, and checks the transported operations and
/// topology.
pub fn reconstruct_omega_loop_point(
    spec: &OmegaLoopSpec,
    pt: &SplitPoint,
    top_a: &FiniteTopology,
    top_b: &FiniteTopology,
) -> Result<Reconstruction> {
    pt.require_split()?;
    let (a, b) = (pt.total(), pt.base());
    for alg in [a, b] {
        if alg.theory() != &spec.theory {
            return Err(Error::Precondition(format!("`{}` is not over `{}`", alg.name(), spec.theory.name)));
        }
        if let Some((ax, env)) = spec.verify(alg)? {
            return Err(Error::Precondition(format!("`{}` fails `{ax}` at {env:?}", alg.name())));
        }
    }
    certify(a, top_a)?;
    certify(b, top_b)?;
    let plus_a = a.term_function(&spec.plus, 2)?;
    let minus_a = a.term_function(&spec.minus, 2)?;
    let (na, nb) = (a.size(), b.size());
    let add = |x: usize, y: usize| plus_a[x * na + y];
    let sub = |x: usize, y: usize| minus_a[x * na + y];
    let zero_b = b.constant_value(&spec.zero)?;
    let (p, s) = (&pt.p.map, &pt.s.map);

    let kernel: Vec<usize> = (0..na).filter(|&x| p[x] == zero_b).collect();
    let mut index = vec![usize::MAX; na];
    for (i, &x) in kernel.iter().enumerate() {
        index[x] = i;
    }
    let nx = kernel.len();
    if nx * nb != na {
        return Err(Error::Invalid(format!(
            "kernel of size {nx} times base of size {nb} does not match {na} elements"
        )));
    }
    let zeta: Vec<usize> = (0..nx * nb).map(|i| add(kernel[i / nb], s[i % nb])).collect();
    let chi = (0..na)
        .map(|x| match index[sub(x, s[p[x]])] {
            usize::MAX => Err(Error::Invalid(format!("{x} − s(p({x})) is not in the kernel"))),
            i => Ok(i * nb + p[x]),
        })
        .collect::<Result<Vec<usize>>>()?;
    let inverse_pair = (0..na).all(|x| zeta[chi[x]] == x) && (0..nx * nb).all(|i| chi[zeta[i]] == i);
    if !inverse_pair {
        return Err(Error::Invalid("ζ and χ are not inverse bijections".into()));
    }

    let name = format!("{}_on_XxB", a.name());
    let transported = FiniteAlgebra::from_fn(name, a.theory().clone(), na, |op, args| {
        let lifted: Vec<usize> = args.iter().map(|&i| zeta[i]).collect();
        chi[a.apply(op, &lifted)]
    })?;
    let transported = Arc::new(transported);

    let mut second = Verdict::pass();
    let mut first = Verdict::pass();
    'ops: for (op, sym) in a.signature().ops().iter().enumerate() {
        let k = sym.arity;
        let mut args = vec![0; k];
        for t in 0..(na).pow(k as u32) {
            crate::algebra::decode_into(t, na, &mut args);
            let out = transported.apply(op, &args);
            let bs: Vec<usize> = args.iter().map(|&i| i % nb).collect();
            let omega_b = b.apply(op, &bs);
            if out % nb != omega_b {
                second = Verdict::fail((sym.name.clone(), args.clone()));
                break 'ops;
            }
            let shifted: Vec<usize> = args.iter().map(|&i| add(kernel[i / nb], s[i % nb])).collect();
            let expected = sub(a.apply(op, &shifted), s[omega_b]);
            if kernel[out / nb] != expected {
                first = Verdict::fail((sym.name.clone(), args.clone()));
                break 'ops;
            }
        }
    }

    let x_top = subspace_topology(top_a, &sets::from_elements(na, kernel.iter().copied()));
    let topology = product_topology(&x_top, top_b);
    let transported_top = FiniteTopology::from_neighborhoods(
        (0..na)
            .map(|i| sets::image(top_a.minimal_neighborhood(zeta[i]), &chi, na))
            .collect(),
    )?;
    let continuous = is_continuous(top_a, &topology, &chi).holds && is_continuous(&topology, top_a, &zeta).holds;
    Ok(Reconstruction {
        kernel,
        algebra: transported,
        product_topology: transported_top == topology,
        topology,
        zeta,
        chi,
        inverse_pair,
        second_component: second,
        first_component: first,
        continuous,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{OpSymbol, Signature};

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

    fn inversion() -> GroupAction {
        GroupAction::new(cyclic(3), cyclic(2), vec![vec![0, 1, 2], vec![0, 2, 1]]).unwrap()
    }

    #[test]
    fn semidirect_z3_z2() {
        let act = inversion();
        let sd = build_semidirect(&act).unwrap();
        let g = GroupView::new(&sd.algebra).unwrap();
        assert_eq!(g.size(), 6);
        assert!(!g.is_abelian());
        // (0,1)·(1,0) = (φ_1(1), 1) = (2,1)
        assert_eq!(g.mul(1, 2), 2 * 2 + 1);
        assert!(semidirect_laws(&act, &sd).unwrap().holds);
        for h in [&sd.k_injection, &sd.q_injection, &sd.projection] {
            assert!(check_hom(h).holds);
        }
        let direct = build_semidirect(&GroupAction::trivial(cyclic(3), cyclic(2)).unwrap()).unwrap();
        assert!(GroupView::new(&direct.algebra).unwrap().is_abelian());
        assert!(GroupAction::new(cyclic(3), cyclic(2), vec![vec![0, 1, 2], vec![1, 2, 0]]).is_err());
    }

    #[test]
    fn complements() {
        let sd = build_semidirect(&inversion()).unwrap();
        let s3 = &sd.algebra;
        let a3 = sets::from_elements(6, [0, 2, 4]);
        let c2 = sets::from_elements(6, [0, 1]);
        assert!(complement_check(s3, &a3, &c2).unwrap().holds);
        assert!(complement_check(s3, &sets::full(6), &sets::singleton(6, 0)).unwrap().holds);
        let z4 = cyclic(4);
        let h = sets::from_elements(4, [0, 2]);
        assert!(!complement_check(&z4, &h, &h).unwrap().holds);
        assert!(complement_check(s3, &c2, &a3).is_err());
    }

    #[test]
    fn round_trips() {
        let act = inversion();
        let (_, pt) = action_to_point(&act).unwrap();
        assert!(split_exact_check(&pt).unwrap().holds());
        let back = point_to_action(&pt).unwrap();
        assert_eq!(back.phi, act.phi);
        let rt = point_roundtrip_iso(&pt).unwrap();
        assert!(rt.holds());
        let bad = SplitPoint::new("bad", pt.p.clone(), Arc::new(Homomorphism::new("z", cyclic(2), pt.total().clone(), vec![0, 0]).unwrap())).unwrap();
        assert!(split_exact_check(&bad).is_err());
    }

    #[test]
    fn reconstruction_of_group_points() {
        let spec = OmegaLoopSpec::for_group(&grp()).unwrap();
        let (_, pt) = action_to_point(&inversion()).unwrap();
        let r = reconstruct_omega_loop_point(&spec, &pt, &FiniteTopology::discrete(6), &FiniteTopology::discrete(2)).unwrap();
        assert!(r.holds());
        assert!(r.topology.is_discrete());
        // coset topology of the normal subgroup {0,2,4}
        let a3 = FiniteTopology::generate(6, &[sets::from_elements(6, [0, 2, 4]), sets::from_elements(6, [1, 3, 5])]);
        let r = reconstruct_omega_loop_point(&spec, &pt, &a3, &FiniteTopology::discrete(2)).unwrap();
        assert!(r.holds());
        assert_eq!(r.kernel, vec![0, 2, 4]);
        assert!(!r.topology.is_discrete());
    }
}

//! Topological algebras on finite spaces: continuity certification of the
//! operations and instance checks of the structural results for topological
//! algebras over protomodular theories.
//!
//! Checks return `Err` when their hypotheses fail (a witness that does not
//! hold, a subset that is not a subalgebra, ...) and a failing [`Verdict`]
//! only when the hypotheses hold but the conclusion does not.

use std::sync::Arc;

use crate::algebra::{check_hom, decode_into, is_subalgebra, product, subalgebra, Compiled, FiniteAlgebra, Homomorphism};
use crate::error::{Error, Result};
use crate::group::GroupView;
use crate::sets::{self, Subset};
use crate::topology::{
    is_continuous, is_homeomorphism, is_open_map, power_topology, product_topology, pullback_subset,
    quotient_topology, separation_report, subspace_topology, FiniteTopology, OPEN_SET_BUDGET,
};
use crate::verdict::Verdict;
use crate::witness::{check_maltsev_witness, check_protomodular_witness, MaltsevWitness, ProtomodularWitness};

/// An algebra whose operations are continuous for `top` (products carry the
/// product topology).
#[derive(Debug, Clone, PartialEq)]
pub struct TopAlgebra {
    pub alg: Arc<FiniteAlgebra>,
    pub top: FiniteTopology,
    /// Per symbol, in signature order.
    pub certified: Vec<(String, Verdict<Subset>)>,
}

/// Continuity of each operation from the `k`-fold product topology; the
/// witness is an open set whose preimage is not open.
pub fn continuity_report(alg: &FiniteAlgebra, top: &FiniteTopology) -> Result<Vec<(String, Verdict<Subset>)>> {
    if alg.size() != top.carrier() {
        return Err(Error::Precondition(format!(
            "`{}` has {} elements but the topology has {} points",
            alg.name(),
            alg.size(),
            top.carrier()
        )));
    }
    Ok(alg
        .signature()
        .ops()
        .iter()
        .enumerate()
        .map(|(op, sym)| {
            let domain = power_topology(top, sym.arity);
            (sym.name.clone(), is_continuous(&domain, top, alg.table(op)))
        })
        .collect())
}

pub fn certify(alg: &Arc<FiniteAlgebra>, top: &FiniteTopology) -> Result<TopAlgebra> {
    let certified = continuity_report(alg, top)?;
    if let Some((symbol, v)) = certified.iter().find(|(_, v)| !v.holds) {
        return Err(Error::Discontinuous {
            symbol: symbol.clone(),
            open: sets::format(v.witness.as_ref().expect("failing verdict")),
        });
    }
    Ok(TopAlgebra {
        alg: alg.clone(),
        top: top.clone(),
        certified,
    })
}

/// For all `a, b`, the translation `x ↦ b·a⁻¹·x` is a homeomorphism; the
/// witness is the first failing `(a, b)`.
pub fn homogeneity_check(t: &TopAlgebra) -> Result<Verdict<(usize, usize)>> {
    let g = GroupView::new(&t.alg)?;
    let n = g.size();
    for a in 0..n {
        for b in 0..n {
            let shift = g.mul(b, g.inv(a));
            let map: Vec<usize> = (0..n).map(|x| g.mul(shift, x)).collect();
            if !is_homeomorphism(&t.top, &t.top, &map) {
                return Ok(Verdict::fail((a, b)));
            }
        }
    }
    Ok(Verdict::pass())
}

fn require_witness(t: &TopAlgebra, w: &ProtomodularWitness) -> Result<()> {
    if check_protomodular_witness(&t.alg, w)?.holds() {
        Ok(())
    } else {
        Err(Error::Precondition(format!(
            "protomodular witness does not hold on `{}`",
            t.alg.name()
        )))
    }
}

fn constant_values(alg: &FiniteAlgebra, w: &ProtomodularWitness) -> Result<Vec<usize>> {
    w.consts.iter().map(|c| alg.constant_value(c)).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Biconditional {
    pub left: bool,
    pub right: bool,
}

impl Biconditional {
    pub fn holds(&self) -> bool {
        self.left == self.right
    }
}

/// Left: every `{e_i}` is closed. Right: the space is Hausdorff.
pub fn hausdorff_iff_constants_closed(t: &TopAlgebra, w: &ProtomodularWitness) -> Result<Biconditional> {
    require_witness(t, w)?;
    let n = t.alg.size();
    let left = constant_values(&t.alg, w)?
        .into_iter()
        .all(|e| t.top.is_closed(&sets::singleton(n, e)));
    Ok(Biconditional {
        left,
        right: separation_report(&t.top).hausdorff,
    })
}

/// Witness is a pair `(x, y)` with `x ∉ cl{y}` whose neighborhoods meet.
pub fn regularity_check(t: &TopAlgebra, w: &ProtomodularWitness) -> Result<Verdict<(usize, usize)>> {
    require_witness(t, w)?;
    let n = t.top.carrier();
    let bad = (0..n * n).map(|i| (i / n, i % n)).find(|&(x, y)| {
        let ux = t.top.minimal_neighborhood(x);
        !ux.contains(y) && !ux.is_disjoint(t.top.minimal_neighborhood(y))
    });
    debug_assert_eq!(bad.is_none(), separation_report(&t.top).regular);
    Ok(Verdict::from_counterexample(bad))
}

/// An open subalgebra has open complement; the witness is that complement.
pub fn open_subalgebra_closed(t: &TopAlgebra, w: &ProtomodularWitness, sub: &Subset) -> Result<Verdict<Subset>> {
    require_witness(t, w)?;
    if !is_subalgebra(&t.alg, sub) {
        return Err(Error::Precondition(format!("{} is not a subalgebra", sets::format(sub))));
    }
    if !t.top.is_open(sub) {
        return Err(Error::Precondition(format!("{} is not open", sets::format(sub))));
    }
    let complement = sets::complement(sub);
    Ok(if t.top.is_open(&complement) {
        Verdict::pass()
    } else {
        Verdict::fail(complement)
    })
}

/// The topological closure of a subalgebra is a subalgebra; the witness is
/// the closure when it is not.
pub fn closure_is_subalgebra(t: &TopAlgebra, sub: &Subset) -> Result<Verdict<Subset>> {
    if !is_subalgebra(&t.alg, sub) {
        return Err(Error::Precondition(format!("{} is not a subalgebra", sets::format(sub))));
    }
    let closure = t.top.closure(sub);
    Ok(if is_subalgebra(&t.alg, &closure) {
        Verdict::pass()
    } else {
        Verdict::fail(closure)
    })
}

fn opens_containing(top: &FiniteTopology, x: usize) -> Result<Vec<Subset>> {
    Ok(top
        .opens(OPEN_SET_BUDGET)?
        .into_iter()
        .filter(|u| u.contains(x))
        .collect())
}

/// The family `{ ∩ α_i(−,a)⁻¹(U_i) : U_i open ∋ e_i }`, sorted and
/// deduplicated.
pub fn neighborhood_family(t: &TopAlgebra, w: &ProtomodularWitness, a: usize) -> Result<Vec<Subset>> {
    let n = t.alg.size();
    let consts = constant_values(&t.alg, w)?;
    let alphas: Vec<Vec<usize>> = w
        .alphas
        .iter()
        .map(|alpha| {
            let f = Compiled::new(alpha, t.alg.signature())?;
            Ok((0..n).map(|x| f.eval(&t.alg, &[x, a])).collect())
        })
        .collect::<Result<_>>()?;
    let choices: Vec<Vec<Subset>> = consts
        .iter()
        .map(|&e| opens_containing(&t.top, e))
        .collect::<Result<_>>()?;
    let total = choices.iter().map(Vec::len).product::<usize>();
    if total > OPEN_SET_BUDGET {
        return Err(Error::BudgetExceeded {
            what: "neighborhood family".into(),
            count: total as u128,
            budget: OPEN_SET_BUDGET as u128,
        });
    }
    let mut family = std::collections::BTreeSet::new();
    let mut picks = vec![0; choices.len()];
    for i in 0..total {
        // mixed radix over the choice lists
        let mut rest = i;
        for (slot, c) in picks.iter_mut().zip(&choices).rev() {
            *slot = rest % c.len();
            rest /= c.len();
        }
        let mut member = sets::full(n);
        for (j, &p) in picks.iter().enumerate() {
            member.intersect_with(&sets::preimage(&choices[j][p], &alphas[j]));
        }
        family.insert(sets::elements(&member));
    }
    Ok(family.into_iter().map(|xs| sets::from_elements(n, xs)).collect())
}

/// The family is a base of open neighborhoods at `a`: every member is an
/// open set containing `a`, and every open set containing `a` contains a
/// member. The witness names the offending set.
pub fn neighborhood_base_check(t: &TopAlgebra, w: &ProtomodularWitness, a: usize) -> Result<Verdict<String>> {
    require_witness(t, w)?;
    let family = neighborhood_family(t, w, a)?;
    if let Some(m) = family.iter().find(|m| !m.contains(a) || !t.top.is_open(m)) {
        return Ok(Verdict::fail(format!("member {} is not an open neighborhood of {a}", sets::format(m))));
    }
    for v in opens_containing(&t.top, a)? {
        if !family.iter().any(|m| m.is_subset(&v)) {
            return Ok(Verdict::fail(format!("open {} contains no member", sets::format(&v))));
        }
    }
    Ok(Verdict::pass())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IotaTheta {
    /// `ι_a(x)` as an element of `A^n` (row-major).
    pub iota: Vec<usize>,
    /// `θ_a` on `A^n`.
    pub theta: Vec<usize>,
    pub iota_continuous: bool,
    pub theta_continuous: bool,
    pub retraction: bool,
    pub iota_at_a_is_constants: bool,
}

impl IotaTheta {
    pub fn holds(&self) -> bool {
        self.iota_continuous && self.theta_continuous && self.retraction && self.iota_at_a_is_constants
    }
}

/// `ι_a(x) = (α_1(x,a),…,α_n(x,a))` and `θ_a(y_1..y_n) = θ(y_1,…,y_n,a)`.
pub fn iota_theta_check(t: &TopAlgebra, w: &ProtomodularWitness, a: usize) -> Result<IotaTheta> {
    require_witness(t, w)?;
    let alg = &t.alg;
    let n = alg.size();
    let k = w.n();
    let alphas = w
        .alphas
        .iter()
        .map(|f| Compiled::new(f, alg.signature()))
        .collect::<Result<Vec<_>>>()?;
    let theta = Compiled::new(&w.theta, alg.signature())?;
    let iota: Vec<usize> = (0..n)
        .map(|x| alphas.iter().fold(0, |acc, f| acc * n + f.eval(alg, &[x, a])))
        .collect();
    let points = n.pow(k as u32);
    let mut ys = vec![0; k + 1];
    let theta_map: Vec<usize> = (0..points)
        .map(|p| {
            decode_into(p, n, &mut ys[..k]);
            ys[k] = a;
            theta.eval(alg, &ys)
        })
        .collect();
    let power = power_topology(&t.top, k);
    let consts = constant_values(alg, w)?;
    Ok(IotaTheta {
        iota_continuous: is_continuous(&t.top, &power, &iota).holds,
        theta_continuous: is_continuous(&power, &t.top, &theta_map).holds,
        retraction: (0..n).all(|x| theta_map[iota[x]] == x),
        iota_at_a_is_constants: iota[a] == consts.iter().fold(0, |acc, &e| acc * n + e),
        iota,
        theta: theta_map,
    })
}

fn require_top_hom(f: &Homomorphism, dom: &TopAlgebra, cod: &TopAlgebra) -> Result<()> {
    if f.dom != dom.alg || f.cod != cod.alg {
        return Err(Error::Precondition(format!("`{}` does not run between the given algebras", f.name)));
    }
    if !check_hom(f).holds {
        return Err(Error::Precondition(format!("`{}` is not a homomorphism", f.name)));
    }
    if !is_continuous(&dom.top, &cod.top, &f.map).holds {
        return Err(Error::Precondition(format!("`{}` is not continuous", f.name)));
    }
    Ok(())
}

/// Regular epi (surjective, codomain carries the quotient topology) against
/// open surjection.
pub fn regular_epi_iff_open_surjection(
    f: &Homomorphism,
    dom: &TopAlgebra,
    cod: &TopAlgebra,
    w: &MaltsevWitness,
) -> Result<Biconditional> {
    if !check_maltsev_witness(&dom.alg, w)?.holds {
        return Err(Error::Precondition(format!("no Maltsev witness on `{}`", dom.alg.name())));
    }
    require_top_hom(f, dom, cod)?;
    Ok(Biconditional {
        left: is_regular_epi(f, dom, cod),
        right: f.is_surjective() && is_open_map(&dom.top, &cod.top, &f.map).holds,
    })
}

pub fn is_regular_epi(f: &Homomorphism, dom: &TopAlgebra, cod: &TopAlgebra) -> bool {
    f.is_surjective()
        && quotient_topology(&dom.top, &f.map, cod.alg.size()).is_ok_and(|q| q == cod.top)
}

#[derive(Debug, Clone, PartialEq)]
pub struct PullbackStability {
    /// Pullback carrier as `(dom f, dom g)` pairs.
    pub pullback: Vec<(usize, usize)>,
    pub algebra: Arc<FiniteAlgebra>,
    pub top: FiniteTopology,
    /// Projection onto the domain of `g`.
    pub projection: Vec<usize>,
    pub surjective: bool,
    pub open: bool,
    pub quotient: bool,
}

impl PullbackStability {
    pub fn holds(&self) -> bool {
        self.surjective && self.open && self.quotient
    }
}

/// Pulls the regular epi `f: A → C` back along `g: B → C` and checks the
/// projection `A ×_C B → B` is again a regular epi.
pub fn pullback_stability_check(
    f: &Homomorphism,
    f_dom: &TopAlgebra,
    cod: &TopAlgebra,
    g: &Homomorphism,
    g_dom: &TopAlgebra,
) -> Result<PullbackStability> {
    require_top_hom(f, f_dom, cod)?;
    require_top_hom(g, g_dom, cod)?;
    if !is_regular_epi(f, f_dom, cod) {
        return Err(Error::Precondition(format!("`{}` is not a regular epimorphism", f.name)));
    }
    let m = g.dom.size();
    let subset = pullback_subset(&f.map, &g.map);
    let prod = product(&f.dom, &g.dom)?;
    let sub = subalgebra(&prod.algebra, &subset, format!("{}x_{}", f.dom.name(), g.dom.name()))?;
    let top = subspace_topology(&product_topology(&f_dom.top, &g_dom.top), &subset);
    let pullback: Vec<(usize, usize)> = subset.ones().map(|p| (p / m, p % m)).collect();
    let projection: Vec<usize> = pullback.iter().map(|&(_, b)| b).collect();
    let pb = TopAlgebra {
        alg: sub.algebra.clone(),
        top: top.clone(),
        certified: Vec::new(),
    };
    let proj = Homomorphism::new("pi2", sub.algebra.clone(), g.dom.clone(), projection.clone())?;
    Ok(PullbackStability {
        surjective: proj.is_surjective(),
        open: is_open_map(&top, &g_dom.top, &projection).holds,
        quotient: is_regular_epi(&proj, &pb, g_dom),
        pullback,
        algebra: sub.algebra,
        top,
        projection,
    })
}

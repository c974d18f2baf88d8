//! Instance checks for the homological lemmas on finite groups: split five
//! lemma, five lemma, the special case of the nine lemma (with the third
//! isomorphism theorem as its main instance), Barr–Kock, and the
//! factorization / epimorphism-class facts.
//!
//! Each check reports a violated hypothesis as `Err(Error::Precondition)` and
//! a failed conclusion as a failing [`Verdict`]. The harness draws seeded
//! random instances from a pool of groups of order at most 8; regular
//! epimorphisms of finite models are the surjective homomorphisms.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{
    check_hom, find_isomorphism, relabel, subalgebra, FiniteAlgebra, HomSearch, Homomorphism,
    Subalgebra, DEFAULT_HOM_BUDGET,
};
use crate::congruence::{all_congruences, kernel_pair, quotient, Congruence, Quotient};
use crate::error::{Error, Result};
use crate::exec;
use crate::group::GroupView;
use crate::sets::{self, Subset};
use crate::verdict::Verdict;

/// Fiber of `f` over the constant of a pointed theory, as a subalgebra of the
/// domain.
pub fn kernel_of(f: &Homomorphism) -> Result<Subalgebra> {
    let c = f.dom.theory().point_constant().ok_or_else(|| {
        Error::Precondition(format!("theory `{}` has no unique constant", f.dom.theory().name))
    })?;
    let zero = f.cod.table(c)[0];
    let fiber = sets::from_elements(f.dom.size(), (0..f.dom.size()).filter(|&x| f.map[x] == zero));
    subalgebra(&f.dom, &fiber, format!("K[{}]", f.name))
}

fn require(cond: bool, what: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::Precondition(what()))
    }
}

fn require_hom(h: &Homomorphism) -> Result<()> {
    require(check_hom(h).holds, || format!("`{}` is not a homomorphism", h.name))
}

fn commutes(left: (&Homomorphism, &Homomorphism), right: (&Homomorphism, &Homomorphism)) -> Result<bool> {
    Ok(left.1.after(left.0)?.map == right.1.after(right.0)?.map)
}

/// Index of each ambient element in a subalgebra given by its inclusion.
fn index_in(incl: &Homomorphism) -> Vec<usize> {
    let mut index = vec![usize::MAX; incl.cod.size()];
    for (i, &x) in incl.map.iter().enumerate() {
        index[x] = i;
    }
    index
}

/// Homomorphism `dom → sub` from ambient values that land in the subalgebra.
fn corestrict(
    name: &str,
    dom: &Arc<FiniteAlgebra>,
    values: impl Fn(usize) -> usize,
    sub: &Subalgebra,
) -> Result<Homomorphism> {
    let index = index_in(&sub.inclusion);
    let map = (0..dom.size())
        .map(|x| match index[values(x)] {
            usize::MAX => Err(Error::Invalid(format!("`{name}` leaves `{}`", sub.algebra.name()))),
            i => Ok(i),
        })
        .collect::<Result<Vec<_>>>()?;
    Homomorphism::new(name, dom.clone(), sub.algebra.clone(), map)
}

/// ```text
/// K[f] --k--> X --f--> Y
///   a         b        c
/// K[f'] -k'-> X' -f'-> Y'
/// ```
#[derive(Debug, Clone, PartialEq)]
pub struct LadderDiagram {
    pub k: Homomorphism,
    pub f: Homomorphism,
    pub k2: Homomorphism,
    pub f2: Homomorphism,
    pub a: Homomorphism,
    pub b: Homomorphism,
    pub c: Homomorphism,
}

impl LadderDiagram {
    /// Computes both kernels and takes `a` to be `b` restricted to them.
    pub fn from_verticals(f: Homomorphism, f2: Homomorphism, b: Homomorphism, c: Homomorphism) -> Result<Self> {
        let top = kernel_of(&f)?;
        let bottom = kernel_of(&f2)?;
        let a = corestrict("a", &top.algebra, |x| b.map[top.inclusion.map[x]], &bottom)?;
        Ok(LadderDiagram {
            k: top.inclusion,
            f,
            k2: bottom.inclusion,
            f2,
            a,
            b,
            c,
        })
    }

    /// All maps are homomorphisms, the kernels are genuine and both squares
    /// commute.
    pub fn validate(&self) -> Result<()> {
        for h in [&self.k, &self.f, &self.k2, &self.f2, &self.a, &self.b, &self.c] {
            require_hom(h)?;
        }
        for (incl, f) in [(&self.k, &self.f), (&self.k2, &self.f2)] {
            let kernel = kernel_of(f)?;
            require(
                incl.image() == kernel.inclusion.image() && incl.is_injective(),
                || format!("`{}` is not the kernel of `{}`", incl.name, f.name),
            )?;
        }
        require(commutes((&self.k, &self.b), (&self.a, &self.k2))?, || "kernel square does not commute".into())?;
        require(commutes((&self.f, &self.c), (&self.b, &self.f2))?, || "right square does not commute".into())
    }

    fn conclusion(&self) -> Verdict<String> {
        if self.b.is_bijective() {
            Verdict::pass()
        } else {
            Verdict::fail(format!("b = {:?} is not bijective", self.b.map))
        }
    }
}

/// Hypotheses: a valid ladder, `s`, `s2` sections of `f`, `f'` with
/// `b ∘ s = s' ∘ c`, and `a`, `c` bijective. Conclusion: `b` bijective.
pub fn split_five_lemma_check(d: &LadderDiagram, s: &Homomorphism, s2: &Homomorphism) -> Result<Verdict<String>> {
    d.validate()?;
    for (sec, f) in [(s, &d.f), (s2, &d.f2)] {
        require_hom(sec)?;
        require(f.after(sec)?.is_identity(), || format!("`{}` is not a section of `{}`", sec.name, f.name))?;
    }
    require(commutes((s, &d.b), (&d.c, s2))?, || "sections are not compatible with b and c".into())?;
    require(d.a.is_bijective() && d.c.is_bijective(), || "a and c must be bijective".into())?;
    Ok(d.conclusion())
}

/// Hypotheses: a valid ladder, `f`, `f'` surjective, `a`, `c` bijective.
/// Conclusion: `b` bijective.
pub fn five_lemma_check(d: &LadderDiagram) -> Result<Verdict<String>> {
    d.validate()?;
    require(d.f.is_surjective() && d.f2.is_surjective(), || "f and f' must be surjective".into())?;
    require(d.a.is_bijective() && d.c.is_bijective(), || "a and c must be bijective".into())?;
    Ok(d.conclusion())
}

/// ```text
/// A   -f-->  B   -g-->  C
/// a          b          c
/// A'  -f'->  B'  -g'->  C'
/// a'         b'         c'
/// A'' -f''-> B'' -g''-> C''
/// ```
#[derive(Debug, Clone, PartialEq)]
pub struct ThreeByThree {
    pub rows: [(Homomorphism, Homomorphism); 3],
    /// Columns left to right, each `(upper, lower)`.
    pub cols: [(Homomorphism, Homomorphism); 3],
}

/// `f` injective with image the kernel of `g`, and `g` surjective.
pub fn is_exact(f: &Homomorphism, g: &Homomorphism) -> Result<bool> {
    if f.cod != g.dom {
        return Ok(false);
    }
    let kernel = kernel_of(g)?;
    Ok(f.is_injective() && f.image() == kernel.inclusion.image() && g.is_surjective())
}

impl ThreeByThree {
    pub fn validate(&self) -> Result<()> {
        for (x, y) in self.rows.iter().chain(&self.cols) {
            require_hom(x)?;
            require_hom(y)?;
        }
        for i in 0..2 {
            for j in 0..2 {
                // square between rows i, i+1 and columns j, j+1
                let along = if i == 0 { &self.rows[0] } else { &self.rows[1] };
                let below = &self.rows[i + 1];
                let (hor, hor2) = if j == 0 { (&along.0, &below.0) } else { (&along.1, &below.1) };
                let (left, right) = if i == 0 {
                    (&self.cols[j].0, &self.cols[j + 1].0)
                } else {
                    (&self.cols[j].1, &self.cols[j + 1].1)
                };
                require(commutes((hor, right), (left, hor2))?, || format!("square ({i},{j}) does not commute"))?;
            }
        }
        Ok(())
    }
}

/// Hypotheses: commuting grid, the last two rows and all columns exact.
/// Conclusion: the first row is exact.
pub fn nine_lemma_special_check(d: &ThreeByThree) -> Result<Verdict<String>> {
    d.validate()?;
    for (i, (f, g)) in d.rows.iter().enumerate().skip(1) {
        require(is_exact(f, g)?, || format!("row {} is not exact", i + 1))?;
    }
    for (j, (u, l)) in d.cols.iter().enumerate() {
        require(is_exact(u, l)?, || format!("column {} is not exact", j + 1))?;
    }
    let (f, g) = &d.rows[0];
    Ok(if is_exact(f, g)? {
        Verdict::pass()
    } else {
        Verdict::fail(format!("first row {} -> {} -> {} is not exact", f.dom.name(), f.cod.name(), g.cod.name()))
    })
}

fn quotient_by_normal(g: &Arc<FiniteAlgebra>, h: &Subset, name: String) -> Result<Quotient> {
    let gv = GroupView::new(g)?;
    require(gv.is_normal(h), || format!("{} is not a normal subgroup of `{}`", sets::format(h), g.name()))?;
    let q = quotient(g, &Congruence::from_labels(&gv.coset_blocks(h)))?;
    let algebra = Arc::new(q.algebra.as_ref().clone().with_name(name));
    let projection = Homomorphism::new(format!("q_{}", algebra.name()), g.clone(), algebra.clone(), q.projection.map)?;
    Ok(Quotient { algebra, projection })
}

/// The grid of a group `B'` with normal subgroups `M` and `N`: middle row
/// `M ↪ B' ↠ B'/M`, bottom row `MN/N ↪ B'/N ↠ (B'/N)/(MN/N)`, middle column
/// `N ↪ B' ↠ B'/N`, and top row `M∩N ↪ N → ker c'` forced by the columns.
pub fn grid_from_normals(bp: &Arc<FiniteAlgebra>, m: &Subset, n: &Subset) -> Result<ThreeByThree> {
    let size = bp.size();
    let name = bp.name();
    let q_m = quotient_by_normal(bp, m, format!("{name}/M"))?;
    let q_n = quotient_by_normal(bp, n, format!("{name}/N"))?;
    let a_mid = subalgebra(bp, m, format!("{name}.M"))?;
    let b_low = q_n.algebra.clone();
    let m_image = sets::image(m, &q_n.projection.map, b_low.size());
    let a_low = subalgebra(&b_low, &m_image, format!("{name}.MN/N"))?;
    let q_low = quotient_by_normal(&b_low, &m_image, format!("{name}/MN"))?;
    let a2 = corestrict("a'", &a_mid.algebra, |x| q_n.projection.map[a_mid.inclusion.map[x]], &a_low)?;
    let mut c2_map = vec![0; q_m.algebra.size()];
    for x in 0..size {
        c2_map[q_m.projection.map[x]] = q_low.projection.map[q_n.projection.map[x]];
    }
    let c2 = Homomorphism::new("c'", q_m.algebra.clone(), q_low.algebra.clone(), c2_map)?;
    let mut meet = m.clone();
    meet.intersect_with(n);
    let a_top = subalgebra(bp, &meet, format!("{name}.MnN"))?;
    let b_top = subalgebra(bp, n, format!("{name}.N"))?;
    let c_top = kernel_of(&c2)?;
    let f = corestrict("f", &a_top.algebra, |x| a_top.inclusion.map[x], &b_top)?;
    let g = corestrict("g", &b_top.algebra, |x| q_m.projection.map[b_top.inclusion.map[x]], &c_top)?;
    let a = corestrict("a", &a_top.algebra, |x| a_top.inclusion.map[x], &a_mid)?;
    Ok(ThreeByThree {
        rows: [
            (f, g),
            (a_mid.inclusion.clone(), q_m.projection.clone()),
            (a_low.inclusion.clone(), q_low.projection.clone()),
        ],
        cols: [
            (a, a2),
            (b_top.inclusion.clone(), q_n.projection.clone()),
            (c_top.inclusion.clone(), c2),
        ],
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ThirdIsomorphism {
    pub grid: ThreeByThree,
    pub nine: Verdict<String>,
    /// `H` is normal in `K`.
    pub h_normal_in_k: bool,
    /// `K/H` is normal in `G/H`.
    pub kh_normal_in_gh: bool,
    /// An isomorphism `(G/H)/(K/H) → G/K`, if one exists.
    pub iso: Option<Homomorphism>,
}

impl ThirdIsomorphism {
    pub fn holds(&self) -> bool {
        self.nine.holds && self.h_normal_in_k && self.kh_normal_in_gh && self.iso.is_some()
    }
}

/// `H ⊆ K`, both normal in `G`.
pub fn third_isomorphism_check(g: &Arc<FiniteAlgebra>, k: &Subset, h: &Subset) -> Result<ThirdIsomorphism> {
    let gv = GroupView::new(g)?;
    require(h.is_subset(k), || "H must be contained in K".into())?;
    require(gv.is_normal(h) && gv.is_normal(k), || "H and K must be normal in G".into())?;
    let grid = grid_from_normals(g, h, k)?;
    let nine = nine_lemma_special_check(&grid)?;
    let k_alg = subalgebra(g, k, "K")?;
    let h_in_k = sets::from_elements(k_alg.algebra.size(), index_in(&k_alg.inclusion).iter().enumerate().filter(|(x, _)| h.contains(*x)).map(|(_, &i)| i));
    let h_normal_in_k = GroupView::new(&k_alg.algebra)?.is_normal(&h_in_k);
    let gh = quotient_by_normal(g, h, "G/H".into())?;
    let kh = sets::image(k, &gh.projection.map, gh.algebra.size());
    let kh_normal_in_gh = GroupView::new(&gh.algebra)?.is_normal(&kh);
    let ghkh = quotient_by_normal(&gh.algebra, &kh, "(G/H)/(K/H)".into())?;
    let gk = quotient_by_normal(g, k, "G/K".into())?;
    Ok(ThirdIsomorphism {
        iso: find_isomorphism(&ghkh.algebra, &gk.algebra),
        grid,
        nine,
        h_normal_in_k,
        kh_normal_in_gh,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BarrKock {
    /// Square 1 is a pullback: `x ↦ (g x, f x)` is a bijection onto
    /// `X' ×_{Y'} Y`.
    pub square1_pullback: bool,
    pub g_injective: bool,
    pub h_injective: bool,
}

impl BarrKock {
    pub fn holds(&self) -> bool {
        self.square1_pullback && (!self.g_injective || self.h_injective)
    }
}

/// Square 2 (kernel pairs, with `γ(x1, x2) = (g x1, g x2)`) is a pullback iff
/// `(x1, x2) ↦ ((g x1, g x2), x1)` is a bijection `R[f] → R[f'] ×_{X'} X`,
/// i.e. `g` maps each fiber of `f` bijectively onto a fiber of `f'`.
pub fn kernel_square_is_pullback(f: &Homomorphism, g: &Homomorphism, f2: &Homomorphism) -> bool {
    let n = f.dom.size();
    (0..n).all(|x1| {
        let target: Vec<usize> = (0..f2.dom.size()).filter(|&y| f2.map[y] == f2.map[g.map[x1]]).collect();
        let mut hits = vec![0usize; f2.dom.size()];
        for x2 in (0..n).filter(|&x2| f.map[x2] == f.map[x1]) {
            hits[g.map[x2]] += 1;
        }
        target.iter().all(|&y| hits[y] == 1) && hits.iter().sum::<usize>() == target.len()
    })
}

/// Diagram `f: X → Y`, `f': X' → Y'`, `g: X → X'`, `h: Y → Y'`.
/// Hypotheses: homomorphisms, `h ∘ f = f' ∘ g`, `f` surjective and square 2
/// a pullback. Conclusion: square 1 a pullback, and `h` injective whenever
/// `g` is.
pub fn barr_kock_instance_check(
    f: &Homomorphism,
    g: &Homomorphism,
    h: &Homomorphism,
    f2: &Homomorphism,
) -> Result<BarrKock> {
    for m in [f, g, h, f2] {
        require_hom(m)?;
    }
    require(commutes((f, h), (g, f2))?, || "h ∘ f differs from f' ∘ g".into())?;
    require(f.is_surjective(), || format!("`{}` is not surjective", f.name))?;
    require(kernel_square_is_pullback(f, g, f2), || "the kernel-pair square is not a pullback".into())?;
    let (nx, ny) = (f2.dom.size(), h.dom.size());
    let mut hits = vec![0usize; nx * ny];
    for x in 0..f.dom.size() {
        hits[g.map[x] * ny + f.map[x]] += 1;
    }
    let square1_pullback = (0..nx * ny).all(|i| {
        let expected = usize::from(f2.map[i / ny] == h.map[i % ny]);
        hits[i] == expected
    });
    Ok(BarrKock {
        square1_pullback,
        g_injective: g.is_injective(),
        h_injective: h.is_injective(),
    })
}

/// For every congruence `θ ⊆ R[f]`, splitting `f = m ∘ e` through `X/θ`:
/// `R[e] = R[f]` iff `m` is injective. Witness is the first `θ` where the two
/// sides disagree.
pub fn factorization_kernel_check(f: &Homomorphism) -> Result<Verdict<Congruence>> {
    require_hom(f)?;
    let rf = kernel_pair(f);
    for theta in all_congruences(&f.dom)? {
        if !theta.refines(&rf) {
            continue;
        }
        let q = quotient(&f.dom, &theta)?;
        let mut m_map = vec![0; q.algebra.size()];
        for x in 0..f.dom.size() {
            m_map[q.projection.map[x]] = f.map[x];
        }
        let m = Homomorphism::new("m", q.algebra.clone(), f.cod.clone(), m_map)?;
        require(m.after(&q.projection)?.map == f.map, || "m ∘ e differs from f".into())?;
        let same_kernel = kernel_pair(&q.projection) == rf;
        if same_kernel != m.is_injective() {
            return Ok(Verdict::fail(theta));
        }
    }
    Ok(Verdict::pass())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EpiFlags {
    pub split: bool,
    pub surjective: bool,
    pub injective: bool,
    /// A section `s` with `f ∘ s = id`, when split.
    pub section: Option<Vec<usize>>,
}

impl EpiFlags {
    /// Split implies surjective.
    pub fn consistent(&self) -> bool {
        !self.split || self.surjective
    }
}

pub fn epi_classify(f: &Homomorphism) -> Result<EpiFlags> {
    require_hom(f)?;
    let fibers: Vec<usize> = (0..f.cod.size())
        .map(|y| f.map.iter().filter(|&&v| v == y).count())
        .collect();
    let candidates = fibers.iter().fold(1u128, |acc, &c| acc.saturating_mul(c as u128));
    if candidates > DEFAULT_HOM_BUDGET {
        return Err(Error::BudgetExceeded {
            what: format!("section candidates for `{}`", f.name),
            count: candidates,
            budget: DEFAULT_HOM_BUDGET,
        });
    }
    let section = HomSearch::new(&f.cod, &f.dom)
        .allow(|y, x| f.map[x] == y)
        .limit(1)
        .run()
        .pop();
    Ok(EpiFlags {
        split: section.is_some(),
        surjective: f.is_surjective(),
        injective: f.is_injective(),
        section,
    })
}

/// Groups used by the random instance generators, with their normal
/// subgroups.
#[derive(Debug, Clone)]
pub struct GroupPool {
    pub groups: Vec<Arc<FiniteAlgebra>>,
    normals: Vec<Vec<Subset>>,
}

impl GroupPool {
    pub fn new(groups: Vec<Arc<FiniteAlgebra>>) -> Result<Self> {
        let normals = groups
            .iter()
            .map(|g| Ok(GroupView::new(g)?.normal_subgroups()))
            .collect::<Result<Vec<_>>>()?;
        Ok(GroupPool { groups, normals })
    }

    fn pick(&self, rng: &mut ChaCha8Rng) -> (Arc<FiniteAlgebra>, Subset) {
        let i = rng.gen_range(0..self.groups.len());
        let n = self.normals[i].choose(rng).expect("every group has normal subgroups").clone();
        (self.groups[i].clone(), n)
    }

    fn pick_group(&self, rng: &mut ChaCha8Rng) -> (Arc<FiniteAlgebra>, &[Subset]) {
        let i = rng.gen_range(0..self.groups.len());
        (self.groups[i].clone(), &self.normals[i])
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LemmaKind {
    SplitFive,
    Five,
    Nine,
    BarrKock,
}

impl LemmaKind {
    pub const ALL: [LemmaKind; 4] = [LemmaKind::SplitFive, LemmaKind::Five, LemmaKind::Nine, LemmaKind::BarrKock];

    pub fn name(self) -> &'static str {
        match self {
            LemmaKind::SplitFive => "split-five",
            LemmaKind::Five => "five",
            LemmaKind::Nine => "nine",
            LemmaKind::BarrKock => "barr-kock",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        LemmaKind::ALL.into_iter().find(|k| k.name() == s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HarnessReport {
    pub kind: LemmaKind,
    pub seed: u64,
    pub count: usize,
    /// Instances whose hypotheses held but conclusion failed, with details.
    pub failures: Vec<(usize, String)>,
    /// Candidate draws rejected because a hypothesis did not hold.
    pub rejected: usize,
}

impl HarnessReport {
    pub fn holds(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Attempts per instance before giving up on finding one that meets the
/// hypotheses.
const MAX_ATTEMPTS: usize = 500;

/// Runs `count` instances; instance `i` draws from its own ChaCha stream of
/// `seed`, so results do not depend on scheduling.
pub fn run_harness(pool: &GroupPool, kind: LemmaKind, seed: u64, count: usize) -> Result<HarnessReport> {
    let outcomes = exec::map_tasks(count, |i| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(i as u64);
        let mut rejected = 0;
        for _ in 0..MAX_ATTEMPTS {
            match instance(pool, kind, &mut rng) {
                Ok(Some(v)) => return Ok((v, rejected)),
                Ok(None) | Err(Error::Precondition(_)) => rejected += 1,
                Err(e) => return Err(e),
            }
        }
        Err(Error::Invalid(format!(
            "no {} instance met the hypotheses after {MAX_ATTEMPTS} draws",
            kind.name()
        )))
    });
    let mut failures = Vec::new();
    let mut rejected = 0;
    for (i, outcome) in outcomes.into_iter().enumerate() {
        let (verdict, r) = outcome?;
        rejected += r;
        if let Some(w) = verdict.witness {
            failures.push((i, w));
        }
    }
    Ok(HarnessReport {
        kind,
        seed,
        count,
        failures,
        rejected,
    })
}

/// One random draw; `Ok(None)` when the draw does not meet the hypotheses.
fn instance(pool: &GroupPool, kind: LemmaKind, rng: &mut ChaCha8Rng) -> Result<Option<Verdict<String>>> {
    match kind {
        LemmaKind::Five | LemmaKind::SplitFive => ladder_instance(pool, kind == LemmaKind::SplitFive, rng),
        LemmaKind::Nine => {
            let (g, normals) = pool.pick_group(rng);
            let m = normals.choose(rng).unwrap();
            let n = normals.choose(rng).unwrap();
            nine_lemma_special_check(&grid_from_normals(&g, m, n)?).map(Some)
        }
        LemmaKind::BarrKock => barr_kock_instance(pool, rng),
    }
}

fn random_perm(n: usize, rng: &mut ChaCha8Rng) -> Vec<usize> {
    let mut p: Vec<usize> = (0..n).collect();
    p.shuffle(rng);
    p
}

fn inverse_perm(p: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; p.len()];
    for (x, &y) in p.iter().enumerate() {
        inv[y] = x;
    }
    inv
}

/// `X ↠ X/N` on top, a relabelled copy of it below, and `b = π ∘ e` for a
/// random endomorphism `e` of `X` preserving `N` (and commuting with a random
/// section when split).
fn ladder_instance(pool: &GroupPool, split: bool, rng: &mut ChaCha8Rng) -> Result<Option<Verdict<String>>> {
    let (x, n) = pool.pick(rng);
    let q = quotient_by_normal(&x, &n, format!("{}/N", x.name()))?;
    let y = q.algebra.clone();
    let f = Homomorphism::new("f", x.clone(), y.clone(), q.projection.map.clone())?;
    let section = if split {
        let sections = HomSearch::new(&y, &x).allow(|b, a| f.map[a] == b).run();
        match sections.choose(rng) {
            Some(s) => Some(s.clone()),
            None => return Ok(None),
        }
    } else {
        None
    };
    let endos = HomSearch::new(&x, &x).allow(|a, b| !n.contains(a) || n.contains(b)).run();
    let e = endos.choose(rng).expect("identity preserves N").clone();
    let mut c = vec![0; y.size()];
    for a in 0..x.size() {
        c[f.map[a]] = f.map[e[a]];
    }
    if let Some(s) = &section {
        if (0..y.size()).any(|b| e[s[b]] != s[c[b]]) {
            return Ok(None);
        }
    }
    let pi = random_perm(x.size(), rng);
    let sigma = random_perm(y.size(), rng);
    let x2 = Arc::new(relabel(&x, &pi, format!("{}'", x.name()))?);
    let y2 = Arc::new(relabel(&y, &sigma, format!("{}'", y.name()))?);
    let pi_inv = inverse_perm(&pi);
    let f2 = Homomorphism::new("f'", x2.clone(), y2.clone(), (0..x.size()).map(|a| sigma[f.map[pi_inv[a]]]).collect())?;
    let b = Homomorphism::new("b", x.clone(), x2.clone(), e.iter().map(|&v| pi[v]).collect())?;
    let c = Homomorphism::new("c", y.clone(), y2.clone(), c.iter().map(|&v| sigma[v]).collect())?;
    let d = LadderDiagram::from_verticals(f, f2, b, c)?;
    if !(d.a.is_bijective() && d.c.is_bijective()) {
        return Ok(None);
    }
    match section {
        None => five_lemma_check(&d).map(Some),
        Some(s) => {
            let sigma_inv = inverse_perm(&sigma);
            let s_top = Homomorphism::new("s", y.clone(), x.clone(), s.clone())?;
            let s_bottom = Homomorphism::new("s'", y2, x2, (0..y.size()).map(|b| pi[s[sigma_inv[b]]]).collect())?;
            split_five_lemma_check(&d, &s_top, &s_bottom).map(Some)
        }
    }
}

/// Two quotient maps `X ↠ X/N`, `X' ↠ X'/N'` and a random homomorphism
/// `g: X → X'` with `g(N) ⊆ N'`, which induces `h`.
fn barr_kock_instance(pool: &GroupPool, rng: &mut ChaCha8Rng) -> Result<Option<Verdict<String>>> {
    let (x, n) = pool.pick(rng);
    let (x2, n2) = pool.pick(rng);
    if n.count_ones(..) != n2.count_ones(..) {
        return Ok(None);
    }
    let q = quotient_by_normal(&x, &n, format!("{}/N", x.name()))?;
    let q2 = quotient_by_normal(&x2, &n2, format!("{}/N'", x2.name()))?;
    let homs = HomSearch::new(&x, &x2).allow(|a, b| !n.contains(a) || n2.contains(b)).run();
    let g = homs.choose(rng).expect("the trivial map preserves N").clone();
    let mut h = vec![0; q.algebra.size()];
    for a in 0..x.size() {
        h[q.projection.map[a]] = q2.projection.map[g[a]];
    }
    let f = Homomorphism::new("f", x.clone(), q.algebra.clone(), q.projection.map.clone())?;
    let f2 = Homomorphism::new("f'", x2.clone(), q2.algebra.clone(), q2.projection.map.clone())?;
    let g = Homomorphism::new("g", x, x2, g)?;
    let h = Homomorphism::new("h", q.algebra, q2.algebra, h)?;
    if !kernel_square_is_pullback(&f, &g, &f2) {
        return Ok(None);
    }
    let r = barr_kock_instance_check(&f, &g, &h, &f2)?;
    Ok(Some(if r.holds() {
        Verdict::pass()
    } else {
        Verdict::fail(format!("{r:?}"))
    }))
}

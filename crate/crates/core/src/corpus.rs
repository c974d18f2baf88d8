//! The bundled corpus: theories, small models, topologies, homomorphisms and
//! points written in the DSL, plus entries derived from them in code
//! (products, semidirect products, actions, certified topological algebras
//! and the standard witnesses).

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

use crate::algebra::{check_hom, is_algebra_of, product, FiniteAlgebra, Homomorphism};
use crate::error::{Error, Result};
use crate::lemmas::GroupPool;
use crate::semidirect::{build_semidirect, GroupAction, SplitPoint};
use crate::syntax::{parse_source_in, Declaration, Scope, Theory};
use crate::topalg::{certify, TopAlgebra};
use crate::topology::{top_not_regular_counterexample, FiniteTopology, NamedTopology};
use crate::verdict::Verdict;
use crate::witness::{check_maltsev_witness, check_protomodular_witness, MaltsevWitness, ProtomodularWitness};

pub const BUILTIN_SOURCE: &str = include_str!("../corpus/builtin.ua");

/// Name of the group theory in the builtin corpus.
pub const GROUP_THEORY: &str = "Grp";

/// Immutable once loaded; cheap to share behind an `Arc`.
#[derive(Debug, Clone, Default)]
pub struct Registry {
    /// Parsed declarations of every loaded source, in order.
    pub declarations: Vec<Declaration>,
    pub warnings: Vec<String>,
    pub theories: BTreeMap<String, Arc<Theory>>,
    pub algebras: BTreeMap<String, Arc<FiniteAlgebra>>,
    pub topologies: BTreeMap<String, Arc<NamedTopology>>,
    /// Bare spaces with no algebra attached.
    pub spaces: BTreeMap<String, FiniteTopology>,
    pub top_algebras: BTreeMap<String, Arc<TopAlgebra>>,
    pub homs: BTreeMap<String, Arc<Homomorphism>>,
    pub points: BTreeMap<String, Arc<SplitPoint>>,
    pub actions: BTreeMap<String, Arc<GroupAction>>,
    /// Keyed by theory name.
    pub protomodular: BTreeMap<String, ProtomodularWitness>,
    /// Keyed by theory name.
    pub maltsev: BTreeMap<String, MaltsevWitness>,
    scope: Scope,
}

/// One line of the invariant sweep.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SweepItem {
    pub kind: &'static str,
    pub name: String,
    pub verdict: Verdict<String>,
}

pub fn load_builtin_corpus() -> Result<Registry> {
    Registry::builtin()
}

fn missing(kind: &str, name: &str) -> Error {
    Error::UnknownName {
        kind: kind.to_string(),
        name: name.to_string(),
    }
}

fn lookup<'a, T>(map: &'a BTreeMap<String, T>, kind: &str, name: &str) -> Result<&'a T> {
    map.get(name).ok_or_else(|| missing(kind, name))
}

impl Registry {
    pub fn builtin() -> Result<Self> {
        let mut reg = Registry::default();
        reg.extend_source("builtin.ua", BUILTIN_SOURCE)?;
        reg.add_derived()?;
        let failures: Vec<SweepItem> = reg.sweep().into_iter().filter(|i| !i.verdict.holds).collect();
        if let Some(first) = failures.first() {
            return Err(Error::Invalid(format!(
                "builtin corpus fails {} invariant(s), first: {} `{}`: {}",
                failures.len(),
                first.kind,
                first.name,
                first.verdict.witness.as_deref().unwrap_or("")
            )));
        }
        Ok(reg)
    }

    /// Parses `text` against everything already registered and adds its
    /// declarations. Returns the names added.
    pub fn extend_source(&mut self, origin: &str, text: &str) -> Result<Vec<String>> {
        let parsed = parse_source_in(text, &self.scope)?;
        let mut added = Vec::new();
        for decl in &parsed.declarations {
            self.scope.insert(decl);
            added.push(decl.name().to_string());
            match decl {
                Declaration::Theory(t) => {
                    self.theories.insert(t.name.clone(), t.clone());
                }
                Declaration::Algebra(a) => {
                    self.algebras.insert(a.name().to_string(), a.clone());
                }
                Declaration::Topology(t) => {
                    self.topologies.insert(t.name.clone(), t.clone());
                    if let Ok(ta) = certify(&t.algebra, &t.topology) {
                        self.top_algebras.insert(t.name.clone(), Arc::new(ta));
                    }
                }
                Declaration::Hom(h) => {
                    self.homs.insert(h.name.clone(), h.clone());
                }
                Declaration::Point(p) => {
                    self.points.insert(p.name.clone(), p.clone());
                }
            }
        }
        self.declarations.extend(parsed.declarations);
        self.warnings.extend(parsed.warnings.into_iter().map(|w| format!("{origin}: {w}")));
        Ok(added)
    }

    /// Loads a user DSL file on top of the registry.
    pub fn extend(&mut self, path: &Path) -> Result<Vec<String>> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Invalid(format!("cannot read {}: {e}", path.display())))?;
        self.extend_source(&path.display().to_string(), &text)
    }

    fn add_algebra(&mut self, alg: Arc<FiniteAlgebra>) {
        self.scope.algebras.insert(alg.name().to_string(), alg.clone());
        self.algebras.insert(alg.name().to_string(), alg);
    }

    fn add_hom(&mut self, h: Homomorphism) {
        let h = Arc::new(h);
        self.scope.homs.insert(h.name.clone(), h.clone());
        self.homs.insert(h.name.clone(), h);
    }

    fn add_point(&mut self, p: SplitPoint) {
        let p = Arc::new(p);
        self.scope.points.insert(p.name.clone(), p.clone());
        self.points.insert(p.name.clone(), p);
    }

    fn add_topology(&mut self, name: &str, alg: &Arc<FiniteAlgebra>, top: FiniteTopology) -> Result<()> {
        let ta = certify(alg, &top)?;
        let named = Arc::new(NamedTopology {
            name: name.to_string(),
            algebra: alg.clone(),
            topology: top,
        });
        self.scope.topologies.insert(name.to_string(), named.clone());
        self.topologies.insert(name.to_string(), named);
        self.top_algebras.insert(name.to_string(), Arc::new(ta));
        Ok(())
    }

    fn add_derived(&mut self) -> Result<()> {
        let z2 = self.algebra("Z2")?.clone();
        let z3 = self.algebra("Z3")?.clone();
        let z4 = self.algebra("Z4")?.clone();
        let klein = self.algebra("Klein")?.clone();
        let l5 = self.algebra("L5")?.clone();

        let inversion3 = GroupAction::new(z3.clone(), z2.clone(), vec![vec![0, 1, 2], vec![0, 2, 1]])?;
        let inversion4 = GroupAction::new(z4.clone(), z2.clone(), vec![vec![0, 1, 2, 3], vec![0, 3, 2, 1]])?;
        let trivial = GroupAction::trivial(z3.clone(), z2.clone())?;
        let d4 = build_semidirect(&inversion4)?;
        self.add_algebra(Arc::new(d4.algebra.as_ref().clone().with_name("D4")));
        for (name, act) in [("Z3_inversion", inversion3), ("Z4_inversion", inversion4), ("Z3_trivial", trivial)] {
            self.actions.insert(name.to_string(), Arc::new(act));
        }

        let z2z4 = product(&z2, &z4)?;
        self.add_algebra(Arc::new(z2z4.algebra.as_ref().clone().with_name("Z2xZ4")));
        let z2cubed = product(&klein, &z2)?;
        self.add_algebra(Arc::new(z2cubed.algebra.as_ref().clone().with_name("Z2xZ2xZ2")));

        // product points: projection onto the second factor, section x -> (0, x)
        let z3z2 = product(&z3, &z2)?;
        self.add_algebra(z3z2.algebra.clone());
        let zero = Homomorphism::new("z2_zero3", z2.clone(), z3.clone(), vec![0; 2])?;
        let s = z3z2.pairing(&zero, &Homomorphism::identity(&z2))?;
        let p = z3z2.right.clone();
        self.add_point(SplitPoint::new("Z3xZ2_point", Arc::new(p.clone()), Arc::new(s.clone()))?);
        self.add_hom(Homomorphism { name: "z3xz2_p2".into(), ..p });
        self.add_hom(Homomorphism { name: "z2_z3xz2".into(), ..s });

        // non-associative loop: the diagonal point of L5 x L5
        let l5l5 = product(&l5, &l5)?;
        self.add_algebra(l5l5.algebra.clone());
        let diagonal = l5l5.pairing(&Homomorphism::identity(&l5), &Homomorphism::identity(&l5))?;
        let p1 = l5l5.left.clone();
        self.add_point(SplitPoint::new("L5_diagonal_point", Arc::new(p1.clone()), Arc::new(diagonal.clone()))?);
        self.add_hom(Homomorphism { name: "l5xl5_p1".into(), ..p1 });
        self.add_hom(Homomorphism { name: "l5_diagonal".into(), ..diagonal });

        for name in ["D4", "Z2xZ4", "Z2xZ2xZ2", "Z3xZ2"] {
            let alg = self.algebra(name)?.clone();
            let n = alg.size();
            self.add_topology(&format!("{name}_disc"), &alg, FiniteTopology::discrete(n))?;
            self.add_topology(&format!("{name}_indisc"), &alg, FiniteTopology::indiscrete(n))?;
        }
        let z3z2_top = crate::topology::product_topology(
            &self.topology("Z3_disc")?.topology,
            &self.topology("Z2_indisc")?.topology,
        );
        self.add_topology("Z3xZ2_mixed", &z3z2.algebra, z3z2_top)?;

        for n in 1..=6 {
            self.spaces.insert(format!("disc{n}"), FiniteTopology::discrete(n));
            self.spaces.insert(format!("indisc{n}"), FiniteTopology::indiscrete(n));
        }
        self.spaces.insert(
            "sierpinski".into(),
            FiniteTopology::generate(2, &[crate::sets::singleton(2, 0)]),
        );
        let tnr = top_not_regular_counterexample();
        self.spaces.insert("tnr_A".into(), tnr.a);
        self.spaces.insert("tnr_B".into(), tnr.b);
        self.spaces.insert("tnr_C".into(), tnr.c);
        self.spaces.insert("tnr_pullback".into(), tnr.pullback_top);

        for (name, theory) in &self.theories {
            let witness = if let Some(w) = ProtomodularWitness::for_group(theory) {
                w
            } else if name == "Loop" {
                ProtomodularWitness::for_omega_loop("zero", "add", "sub")
            } else {
                continue;
            };
            self.maltsev.insert(name.clone(), MaltsevWitness { p: witness.composite() });
            self.protomodular.insert(name.clone(), witness);
        }
        Ok(())
    }

    pub fn theory(&self, name: &str) -> Result<&Arc<Theory>> {
        lookup(&self.theories, "theory", name)
    }

    pub fn algebra(&self, name: &str) -> Result<&Arc<FiniteAlgebra>> {
        lookup(&self.algebras, "algebra", name)
    }

    pub fn topology(&self, name: &str) -> Result<&Arc<NamedTopology>> {
        lookup(&self.topologies, "topology", name)
    }

    pub fn space(&self, name: &str) -> Result<&FiniteTopology> {
        lookup(&self.spaces, "space", name)
    }

    pub fn top_algebra(&self, name: &str) -> Result<&Arc<TopAlgebra>> {
        lookup(&self.top_algebras, "certified topological algebra", name)
    }

    pub fn hom(&self, name: &str) -> Result<&Arc<Homomorphism>> {
        lookup(&self.homs, "hom", name)
    }

    pub fn point(&self, name: &str) -> Result<&Arc<SplitPoint>> {
        lookup(&self.points, "point", name)
    }

    pub fn action(&self, name: &str) -> Result<&Arc<GroupAction>> {
        lookup(&self.actions, "action", name)
    }

    pub fn scope(&self) -> &Scope {
        &self.scope
    }

    /// Algebras over the named theory, in name order.
    pub fn models(&self, theory: &str) -> Vec<&Arc<FiniteAlgebra>> {
        self.algebras.values().filter(|a| a.theory().name == theory).collect()
    }

    pub fn groups(&self) -> Vec<&Arc<FiniteAlgebra>> {
        self.models(GROUP_THEORY)
    }

    /// The groups of order at most 8, for the lemma harness.
    pub fn group_pool(&self) -> Result<GroupPool> {
        GroupPool::new(self.groups().into_iter().filter(|g| g.size() <= 8).cloned().collect())
    }

    /// Every entry's own invariants, in a fixed order.
    pub fn sweep(&self) -> Vec<SweepItem> {
        let mut items = Vec::new();
        let mut push = |kind, name: &str, verdict: Verdict<String>| {
            items.push(SweepItem {
                kind,
                name: name.to_string(),
                verdict,
            })
        };
        for (name, alg) in &self.algebras {
            let v = match is_algebra_of(alg) {
                Ok(r) => match r.results.iter().find(|(_, v)| !v.holds) {
                    None => Verdict::pass(),
                    Some((eq, v)) => Verdict::fail(format!("`{eq}` fails at {:?}", v.witness.clone().unwrap_or_default())),
                },
                Err(e) => Verdict::fail(e.to_string()),
            };
            push("algebra", name, v);
        }
        for (name, t) in &self.topologies {
            push("topology", name, t.topology.verify_closure_invariants());
        }
        for (name, t) in &self.spaces {
            push("space", name, t.verify_closure_invariants());
        }
        for (name, t) in &self.top_algebras {
            let v = match t.certified.iter().find(|(_, v)| !v.holds) {
                None => Verdict::pass(),
                Some((sym, _)) => Verdict::fail(format!("`{sym}` is not continuous")),
            };
            push("top-algebra", name, v);
        }
        for (name, h) in &self.homs {
            let v = check_hom(h).map(|f| format!("fails at {}{:?}", f.symbol, f.args));
            push("hom", name, v);
        }
        for (name, p) in &self.points {
            push("point", name, p.split_verdict().map(|y| format!("p(s({y})) != {y}")));
        }
        for (name, act) in &self.actions {
            let v = match GroupAction::new(act.k.clone(), act.q.clone(), act.phi.clone()) {
                Ok(_) => Verdict::pass(),
                Err(e) => Verdict::fail(e.to_string()),
            };
            push("action", name, v);
        }
        for (theory, w) in &self.protomodular {
            for alg in self.models(theory) {
                let v = match check_protomodular_witness(alg, w) {
                    Ok(r) => match r.first_failure() {
                        None => Verdict::pass(),
                        Some(f) => Verdict::fail(format!("{} fails at {:?}", f.law, f.env)),
                    },
                    Err(e) => Verdict::fail(e.to_string()),
                };
                push("protomodular-witness", &format!("{theory} on {}", alg.name()), v);
            }
        }
        for (theory, w) in &self.maltsev {
            for alg in self.models(theory) {
                let v = match check_maltsev_witness(alg, w) {
                    Ok(v) => v.map(|f| format!("{} fails at {:?}", f.law, f.env)),
                    Err(e) => Verdict::fail(e.to_string()),
                };
                push("maltsev-witness", &format!("{theory} on {}", alg.name()), v);
            }
        }
        items
    }
}

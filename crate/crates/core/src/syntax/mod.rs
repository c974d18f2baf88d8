//! Signatures, terms, equations and theories, plus the textual DSL that
//! declares them together with finite algebras, topologies, homomorphisms and
//! points.
//!
//! ```text
//! theory Grp { op e/0; op inv/1; op mul/2; axiom mul(x, e) = x; }
//! algebra Z2 : Grp { carrier = 2; e = 0; inv = [0,1]; mul = [[0,1],[1,0]]; }
//! topology Z2_disc on Z2 { open {0}; open {1}; }
//! hom id2 : Z2 -> Z2 = [0,1];
//! point P { p = id2; s = id2; }
//! ```

mod format;
mod lexer;
mod parser;

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::algebra::{FiniteAlgebra, Homomorphism};
use crate::error::{Error, Result};
use crate::semidirect::SplitPoint;
use crate::topology::NamedTopology;

pub use format::{format_declaration, format_source, format_term};
pub use parser::{parse_equation, parse_source, parse_source_in, parse_term, ParseError, ParseErrorKind, Parsed, Scope};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct OpSymbol {
    pub name: String,
    pub arity: usize,
}

impl OpSymbol {
    pub fn new(name: impl Into<String>, arity: usize) -> Self {
        OpSymbol {
            name: name.into(),
            arity,
        }
    }
}

/// Ordered list of operation symbols with their arities.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Signature {
    ops: Vec<OpSymbol>,
}

impl Signature {
    pub fn new(ops: Vec<OpSymbol>) -> Result<Self> {
        for (i, op) in ops.iter().enumerate() {
            if ops[..i].iter().any(|o| o.name == op.name) {
                return Err(Error::DuplicateSymbol(op.name.clone()));
            }
        }
        Ok(Signature { ops })
    }

    pub fn ops(&self) -> &[OpSymbol] {
        &self.ops
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.ops.iter().position(|o| o.name == name)
    }

    pub fn arity_of(&self, name: &str) -> Option<usize> {
        self.ops.iter().find(|o| o.name == name).map(|o| o.arity)
    }

    /// Indices of the arity-0 symbols.
    pub fn constants(&self) -> Vec<usize> {
        (0..self.ops.len())
            .filter(|&i| self.ops[i].arity == 0)
            .collect()
    }

    pub fn max_arity(&self) -> usize {
        self.ops.iter().map(|o| o.arity).max().unwrap_or(0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Var(usize),
    App(String, Vec<Term>),
}

impl Term {
    pub fn var(index: usize) -> Term {
        Term::Var(index)
    }

    pub fn app(symbol: impl Into<String>, args: Vec<Term>) -> Term {
        Term::App(symbol.into(), args)
    }

    pub fn constant(symbol: impl Into<String>) -> Term {
        Term::App(symbol.into(), Vec::new())
    }

    pub fn depth(&self) -> usize {
        match self {
            Term::Var(_) => 0,
            Term::App(_, args) => 1 + args.iter().map(Term::depth).max().unwrap_or(0),
        }
    }

    /// Number of variables the term needs, i.e. one past the largest index.
    pub fn var_bound(&self) -> usize {
        match self {
            Term::Var(i) => i + 1,
            Term::App(_, args) => args.iter().map(Term::var_bound).max().unwrap_or(0),
        }
    }

    pub fn is_ground(&self) -> bool {
        self.var_bound() == 0
    }

    /// Replaces `Var(i)` by `images[i]`.
    pub fn substitute(&self, images: &[Term]) -> Term {
        match self {
            Term::Var(i) => images[*i].clone(),
            Term::App(s, args) => {
                Term::App(s.clone(), args.iter().map(|a| a.substitute(images)).collect())
            }
        }
    }

    /// Checks every application against `sig`.
    pub fn check(&self, sig: &Signature) -> Result<()> {
        match self {
            Term::Var(_) => Ok(()),
            Term::App(s, args) => {
                let arity = sig
                    .arity_of(s)
                    .ok_or_else(|| Error::UnknownSymbol(s.clone()))?;
                if arity != args.len() {
                    return Err(Error::ArityMismatch {
                        symbol: s.clone(),
                        expected: arity,
                        got: args.len(),
                    });
                }
                args.iter().try_for_each(|a| a.check(sig))
            }
        }
    }

    fn renumber(&self, map: &mut HashMap<usize, usize>) -> Term {
        match self {
            Term::Var(i) => {
                let next = map.len();
                Term::Var(*map.entry(*i).or_insert(next))
            }
            Term::App(s, args) => {
                Term::App(s.clone(), args.iter().map(|a| a.renumber(map)).collect())
            }
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_term(self, "x"))
    }
}

/// `lhs = rhs` with variables numbered densely in first-occurrence order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Equation {
    pub lhs: Term,
    pub rhs: Term,
    pub nvars: usize,
}

impl Equation {
    pub fn new(lhs: Term, rhs: Term) -> Self {
        let mut map = HashMap::new();
        let lhs = lhs.renumber(&mut map);
        let rhs = rhs.renumber(&mut map);
        Equation {
            lhs,
            rhs,
            nvars: map.len(),
        }
    }

    pub fn check(&self, sig: &Signature) -> Result<()> {
        self.lhs.check(sig)?;
        self.rhs.check(sig)
    }
}

impl fmt::Display for Equation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = {}", self.lhs, self.rhs)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Theory {
    pub name: String,
    pub signature: Signature,
    pub axioms: Vec<Equation>,
}

impl Theory {
    pub fn new(name: impl Into<String>, signature: Signature, axioms: Vec<Equation>) -> Result<Self> {
        for ax in &axioms {
            ax.check(&signature)?;
        }
        Ok(Theory {
            name: name.into(),
            signature,
            axioms,
        })
    }

    /// The unique constant symbol of a pointed theory.
    pub fn point_constant(&self) -> Option<usize> {
        match self.signature.constants().as_slice() {
            [c] => Some(*c),
            _ => None,
        }
    }
}

/// One top-level item of a DSL source file.
#[derive(Debug, Clone, PartialEq)]
pub enum Declaration {
    Theory(Arc<Theory>),
    Algebra(Arc<FiniteAlgebra>),
    Topology(Arc<NamedTopology>),
    Hom(Arc<Homomorphism>),
    Point(Arc<SplitPoint>),
}

impl Declaration {
    pub fn name(&self) -> &str {
        match self {
            Declaration::Theory(t) => &t.name,
            Declaration::Algebra(a) => a.name(),
            Declaration::Topology(t) => &t.name,
            Declaration::Hom(h) => &h.name,
            Declaration::Point(p) => &p.name,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Declaration::Theory(_) => "theory",
            Declaration::Algebra(_) => "algebra",
            Declaration::Topology(_) => "topology",
            Declaration::Hom(_) => "hom",
            Declaration::Point(_) => "point",
        }
    }
}

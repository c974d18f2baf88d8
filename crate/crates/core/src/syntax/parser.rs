use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use super::lexer::{tokenize, Tok, Token};
use super::{Declaration, Equation, OpSymbol, Signature, Term, Theory};
use crate::algebra::{FiniteAlgebra, Homomorphism};
use crate::semidirect::SplitPoint;
use crate::sets;
use crate::topology::{FiniteTopology, NamedTopology};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    Syntax(String),
    UnknownSymbol(String),
    ArityMismatch {
        symbol: String,
        expected: usize,
        got: usize,
    },
    DanglingReference {
        kind: &'static str,
        name: String,
    },
    Duplicate {
        kind: &'static str,
        name: String,
    },
    MissingTable(String),
    TableShape(String),
    ValueOutOfRange {
        value: usize,
        bound: usize,
    },
    EmptyCarrier,
    TheoryMismatch {
        expected: String,
        found: String,
    },
    ShapeMismatch(String),
}

impl ParseErrorKind {
    /// Stable short name of the error class.
    pub fn class(&self) -> &'static str {
        match self {
            ParseErrorKind::Syntax(_) => "syntax",
            ParseErrorKind::UnknownSymbol(_) => "unknown-symbol",
            ParseErrorKind::ArityMismatch { .. } => "arity-mismatch",
            ParseErrorKind::DanglingReference { .. } => "dangling-reference",
            ParseErrorKind::Duplicate { .. } => "duplicate",
            ParseErrorKind::MissingTable(_) => "missing-table",
            ParseErrorKind::TableShape(_) => "table-shape",
            ParseErrorKind::ValueOutOfRange { .. } => "value-out-of-range",
            ParseErrorKind::EmptyCarrier => "empty-carrier",
            ParseErrorKind::TheoryMismatch { .. } => "theory-mismatch",
            ParseErrorKind::ShapeMismatch(_) => "shape-mismatch",
        }
    }
}

impl fmt::Display for ParseErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseErrorKind::Syntax(msg) => write!(f, "syntax error: {msg}"),
            ParseErrorKind::UnknownSymbol(s) => write!(f, "unknown symbol `{s}`"),
            ParseErrorKind::ArityMismatch {
                symbol,
                expected,
                got,
            } => write!(f, "arity mismatch for `{symbol}`: expected {expected}, got {got}"),
            ParseErrorKind::DanglingReference { kind, name } => {
                write!(f, "reference to undeclared {kind} `{name}`")
            }
            ParseErrorKind::Duplicate { kind, name } => write!(f, "duplicate {kind} `{name}`"),
            ParseErrorKind::MissingTable(s) => write!(f, "no table given for `{s}`"),
            ParseErrorKind::TableShape(msg) => write!(f, "malformed table: {msg}"),
            ParseErrorKind::ValueOutOfRange { value, bound } => {
                write!(f, "value {value} is outside the carrier {{0..{}}}", bound.saturating_sub(1))
            }
            ParseErrorKind::EmptyCarrier => write!(f, "carrier must have at least one element"),
            ParseErrorKind::TheoryMismatch { expected, found } => {
                write!(f, "theory mismatch: expected `{expected}`, found `{found}`")
            }
            ParseErrorKind::ShapeMismatch(msg) => write!(f, "shape mismatch: {msg}"),
        }
    }
}

/// A DSL error located at the offending token.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub kind: ParseErrorKind,
    pub line: usize,
    pub col: usize,
    pub token: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {} (at `{}`)", self.line, self.col, self.kind, self.token)
    }
}

impl std::error::Error for ParseError {}

/// Names visible to a source file: everything declared before it.
#[derive(Debug, Clone, Default)]
pub struct Scope {
    pub theories: HashMap<String, Arc<Theory>>,
    pub algebras: HashMap<String, Arc<FiniteAlgebra>>,
    pub topologies: HashMap<String, Arc<NamedTopology>>,
    pub homs: HashMap<String, Arc<Homomorphism>>,
    pub points: HashMap<String, Arc<SplitPoint>>,
}

impl Scope {
    pub fn insert(&mut self, decl: &Declaration) {
        match decl {
            Declaration::Theory(t) => {
                self.theories.insert(t.name.clone(), t.clone());
            }
            Declaration::Algebra(a) => {
                self.algebras.insert(a.name().to_string(), a.clone());
            }
            Declaration::Topology(t) => {
                self.topologies.insert(t.name.clone(), t.clone());
            }
            Declaration::Hom(h) => {
                self.homs.insert(h.name.clone(), h.clone());
            }
            Declaration::Point(p) => {
                self.points.insert(p.name.clone(), p.clone());
            }
        }
    }

    fn contains(&self, kind: &str, name: &str) -> bool {
        match kind {
            "theory" => self.theories.contains_key(name),
            "algebra" => self.algebras.contains_key(name),
            "topology" => self.topologies.contains_key(name),
            "hom" => self.homs.contains_key(name),
            _ => self.points.contains_key(name),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Parsed {
    pub declarations: Vec<Declaration>,
    pub warnings: Vec<String>,
}

pub fn parse_source(text: &str) -> Result<Parsed, ParseError> {
    parse_source_in(text, &Scope::default())
}

/// Parses `text`, resolving references against `scope` as well as earlier
/// declarations in the same text.
pub fn parse_source_in(text: &str, scope: &Scope) -> Result<Parsed, ParseError> {
    let tokens = tokenize(text)?;
    let mut parser = Parser {
        tokens,
        pos: 0,
        scope: scope.clone(),
        declared: Scope::default(),
        decls: Vec::new(),
        warnings: Vec::new(),
    };
    parser.file()?;
    Ok(Parsed {
        declarations: parser.decls,
        warnings: parser.warnings,
    })
}

fn standalone(text: &str) -> Result<Parser, ParseError> {
    Ok(Parser {
        tokens: tokenize(text)?,
        pos: 0,
        scope: Scope::default(),
        declared: Scope::default(),
        decls: Vec::new(),
        warnings: Vec::new(),
    })
}

/// Parses a single term over `sig`. Variables are numbered by first
/// occurrence; their names are returned in that order.
pub fn parse_term(text: &str, sig: &Signature) -> Result<(Term, Vec<String>), ParseError> {
    let mut parser = standalone(text)?;
    let mut vars = Vec::new();
    let term = parser.term(sig, &mut vars)?;
    parser.expect(Tok::Eof)?;
    Ok((term, vars))
}

/// Parses `lhs = rhs` over `sig`, numbering variables as [`parse_term`].
pub fn parse_equation(text: &str, sig: &Signature) -> Result<(Equation, Vec<String>), ParseError> {
    let mut parser = standalone(text)?;
    let mut vars = Vec::new();
    let lhs = parser.term(sig, &mut vars)?;
    parser.expect(Tok::Eq)?;
    let rhs = parser.term(sig, &mut vars)?;
    parser.expect(Tok::Eof)?;
    Ok((Equation::new(lhs, rhs), vars))
}

/// Nested table literal before it is checked against an arity.
enum TableLit {
    Leaf(usize, usize),
    List(Vec<TableLit>, usize),
}

impl TableLit {
    fn token(&self) -> usize {
        match self {
            TableLit::Leaf(_, t) | TableLit::List(_, t) => *t,
        }
    }
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    scope: Scope,
    declared: Scope,
    decls: Vec<Declaration>,
    warnings: Vec<String>,
}

type PResult<T> = Result<T, ParseError>;

impl Parser {
    fn peek(&self) -> &Tok {
        &self.tokens[self.pos].tok
    }

    fn advance(&mut self) -> usize {
        let at = self.pos;
        if self.pos < self.tokens.len() - 1 {
            self.pos += 1;
        }
        at
    }

    fn error_at(&self, at: usize, kind: ParseErrorKind) -> ParseError {
        let t = &self.tokens[at];
        ParseError {
            kind,
            line: t.line,
            col: t.col,
            token: t.tok.text(),
        }
    }

    fn unexpected(&self, expected: &str) -> ParseError {
        let found = self.peek().text();
        self.error_at(
            self.pos,
            ParseErrorKind::Syntax(format!("expected {expected}, found `{found}`")),
        )
    }

    fn expect(&mut self, tok: Tok) -> PResult<usize> {
        if *self.peek() == tok {
            Ok(self.advance())
        } else {
            Err(self.unexpected(&format!("`{}`", tok.text())))
        }
    }

    fn expect_keyword(&mut self, kw: &str) -> PResult<usize> {
        match self.peek() {
            Tok::Ident(s) if s == kw => Ok(self.advance()),
            _ => Err(self.unexpected(&format!("`{kw}`"))),
        }
    }

    fn ident(&mut self) -> PResult<(String, usize)> {
        match self.peek().clone() {
            Tok::Ident(s) => Ok((s, self.advance())),
            _ => Err(self.unexpected("an identifier")),
        }
    }

    fn nat(&mut self) -> PResult<(usize, usize)> {
        match *self.peek() {
            Tok::Nat(n) => Ok((n, self.advance())),
            _ => Err(self.unexpected("a natural number")),
        }
    }

    fn file(&mut self) -> PResult<()> {
        while *self.peek() != Tok::Eof {
            let decl = match self.peek() {
                Tok::Ident(kw) if kw == "theory" => self.theory()?,
                Tok::Ident(kw) if kw == "algebra" => self.algebra()?,
                Tok::Ident(kw) if kw == "topology" => self.topology()?,
                Tok::Ident(kw) if kw == "hom" => self.hom()?,
                Tok::Ident(kw) if kw == "point" => self.point()?,
                _ => return Err(self.unexpected("a declaration")),
            };
            self.scope.insert(&decl);
            self.declared.insert(&decl);
            self.decls.push(decl);
        }
        Ok(())
    }

    fn check_fresh(&self, kind: &'static str, name: &str, at: usize) -> PResult<()> {
        if self.declared.contains(kind, name) {
            return Err(self.error_at(
                at,
                ParseErrorKind::Duplicate {
                    kind,
                    name: name.to_string(),
                },
            ));
        }
        Ok(())
    }

    fn theory(&mut self) -> PResult<Declaration> {
        self.expect_keyword("theory")?;
        let (name, name_at) = self.ident()?;
        self.check_fresh("theory", &name, name_at)?;
        self.expect(Tok::LBrace)?;
        let mut ops: Vec<OpSymbol> = Vec::new();
        while matches!(self.peek(), Tok::Ident(kw) if kw == "op") {
            self.advance();
            let (sym, sym_at) = self.ident()?;
            self.expect(Tok::Slash)?;
            let (arity, _) = self.nat()?;
            self.expect(Tok::Semi)?;
            if ops.iter().any(|o| o.name == sym) {
                return Err(self.error_at(
                    sym_at,
                    ParseErrorKind::Duplicate {
                        kind: "symbol",
                        name: sym,
                    },
                ));
            }
            if arity == 0 && looks_like_variable(&sym) {
                self.warnings.push(format!(
                    "theory {name}: constant `{sym}` shadows the variable of the same name; bare `{sym}` denotes the constant"
                ));
            }
            ops.push(OpSymbol::new(sym, arity));
        }
        let signature = Signature::new(ops).expect("duplicates rejected above");
        let mut axioms = Vec::new();
        while matches!(self.peek(), Tok::Ident(kw) if kw == "axiom") {
            self.advance();
            let mut vars = Vec::new();
            let lhs = self.term(&signature, &mut vars)?;
            self.expect(Tok::Eq)?;
            let rhs = self.term(&signature, &mut vars)?;
            self.expect(Tok::Semi)?;
            axioms.push(Equation::new(lhs, rhs));
        }
        self.expect(Tok::RBrace)?;
        let theory = Theory::new(name, signature, axioms).expect("terms checked while parsing");
        Ok(Declaration::Theory(Arc::new(theory)))
    }

    fn term(&mut self, sig: &Signature, vars: &mut Vec<String>) -> PResult<Term> {
        let (name, at) = self.ident()?;
        if *self.peek() == Tok::LParen {
            let Some(arity) = sig.arity_of(&name) else {
                return Err(self.error_at(at, ParseErrorKind::UnknownSymbol(name)));
            };
            self.advance();
            let mut args = vec![self.term(sig, vars)?];
            while *self.peek() == Tok::Comma {
                self.advance();
                args.push(self.term(sig, vars)?);
            }
            self.expect(Tok::RParen)?;
            if args.len() != arity {
                return Err(self.error_at(
                    at,
                    ParseErrorKind::ArityMismatch {
                        symbol: name,
                        expected: arity,
                        got: args.len(),
                    },
                ));
            }
            return Ok(Term::App(name, args));
        }
        match sig.arity_of(&name) {
            Some(0) => Ok(Term::constant(name)),
            Some(arity) => Err(self.error_at(
                at,
                ParseErrorKind::ArityMismatch {
                    symbol: name,
                    expected: arity,
                    got: 0,
                },
            )),
            None => {
                let index = match vars.iter().position(|v| *v == name) {
                    Some(i) => i,
                    None => {
                        vars.push(name);
                        vars.len() - 1
                    }
                };
                Ok(Term::Var(index))
            }
        }
    }

    fn lookup<T: Clone>(
        &self,
        map: &HashMap<String, T>,
        kind: &'static str,
        name: &str,
        at: usize,
    ) -> PResult<T> {
        map.get(name).cloned().ok_or_else(|| {
            self.error_at(
                at,
                ParseErrorKind::DanglingReference {
                    kind,
                    name: name.to_string(),
                },
            )
        })
    }

    fn algebra(&mut self) -> PResult<Declaration> {
        self.expect_keyword("algebra")?;
        let (name, name_at) = self.ident()?;
        self.check_fresh("algebra", &name, name_at)?;
        self.expect(Tok::Colon)?;
        let (theory_name, theory_at) = self.ident()?;
        let theory = self.lookup(&self.scope.theories, "theory", &theory_name, theory_at)?;
        self.expect(Tok::LBrace)?;
        self.expect_keyword("carrier")?;
        self.expect(Tok::Eq)?;
        let (size, size_at) = self.nat()?;
        if size == 0 {
            return Err(self.error_at(size_at, ParseErrorKind::EmptyCarrier));
        }
        self.expect(Tok::Semi)?;
        let sig = &theory.signature;
        let mut tables: Vec<Option<Vec<usize>>> = vec![None; sig.len()];
        while let Tok::Ident(_) = self.peek() {
            let (sym, sym_at) = self.ident()?;
            let Some(op) = sig.index_of(&sym) else {
                return Err(self.error_at(sym_at, ParseErrorKind::UnknownSymbol(sym)));
            };
            if tables[op].is_some() {
                return Err(self.error_at(
                    sym_at,
                    ParseErrorKind::Duplicate {
                        kind: "table",
                        name: sym,
                    },
                ));
            }
            self.expect(Tok::Eq)?;
            let lit = self.table()?;
            self.expect(Tok::Semi)?;
            let mut flat = Vec::new();
            self.flatten(&lit, sig.ops()[op].arity, size, &sym, &mut flat)?;
            tables[op] = Some(flat);
        }
        let close_at = self.expect(Tok::RBrace)?;
        let mut complete = Vec::with_capacity(tables.len());
        for (op, table) in tables.into_iter().enumerate() {
            match table {
                Some(t) => complete.push(t),
                None => {
                    return Err(self.error_at(
                        close_at,
                        ParseErrorKind::MissingTable(sig.ops()[op].name.clone()),
                    ))
                }
            }
        }
        let alg = FiniteAlgebra::new(name, theory, size, complete)
            .expect("table shapes checked while parsing");
        Ok(Declaration::Algebra(Arc::new(alg)))
    }

    fn table(&mut self) -> PResult<TableLit> {
        match *self.peek() {
            Tok::Nat(n) => Ok(TableLit::Leaf(n, self.advance())),
            Tok::LBracket => {
                let at = self.advance();
                let mut items = vec![self.table()?];
                while *self.peek() == Tok::Comma {
                    self.advance();
                    items.push(self.table()?);
                }
                self.expect(Tok::RBracket)?;
                Ok(TableLit::List(items, at))
            }
            _ => Err(self.unexpected("a table entry")),
        }
    }

    fn flatten(
        &self,
        lit: &TableLit,
        depth: usize,
        size: usize,
        sym: &str,
        out: &mut Vec<usize>,
    ) -> PResult<()> {
        match (lit, depth) {
            (TableLit::Leaf(v, at), 0) => {
                if *v >= size {
                    return Err(self.error_at(
                        *at,
                        ParseErrorKind::ValueOutOfRange {
                            value: *v,
                            bound: size,
                        },
                    ));
                }
                out.push(*v);
                Ok(())
            }
            (TableLit::List(items, at), d) if d > 0 => {
                if items.len() != size {
                    return Err(self.error_at(
                        *at,
                        ParseErrorKind::TableShape(format!(
                            "`{sym}` rows must have {size} entries, found {}",
                            items.len()
                        )),
                    ));
                }
                items
                    .iter()
                    .try_for_each(|item| self.flatten(item, d - 1, size, sym, out))
            }
            (lit, _) => Err(self.error_at(
                lit.token(),
                ParseErrorKind::TableShape(format!("`{sym}` table nesting does not match its arity")),
            )),
        }
    }

    fn topology(&mut self) -> PResult<Declaration> {
        self.expect_keyword("topology")?;
        let (name, name_at) = self.ident()?;
        self.check_fresh("topology", &name, name_at)?;
        self.expect_keyword("on")?;
        let (alg_name, alg_at) = self.ident()?;
        let algebra = self.lookup(&self.scope.algebras, "algebra", &alg_name, alg_at)?;
        let n = algebra.size();
        self.expect(Tok::LBrace)?;
        let mut generators = Vec::new();
        while matches!(self.peek(), Tok::Ident(kw) if kw == "open") {
            self.advance();
            self.expect(Tok::LBrace)?;
            let mut set = sets::empty(n);
            if *self.peek() != Tok::RBrace {
                loop {
                    let (x, at) = self.nat()?;
                    if x >= n {
                        return Err(self.error_at(
                            at,
                            ParseErrorKind::ValueOutOfRange { value: x, bound: n },
                        ));
                    }
                    set.insert(x);
                    if *self.peek() != Tok::Comma {
                        break;
                    }
                    self.advance();
                }
            }
            self.expect(Tok::RBrace)?;
            self.expect(Tok::Semi)?;
            generators.push(set);
        }
        self.expect(Tok::RBrace)?;
        let topology = FiniteTopology::generate(n, &generators);
        Ok(Declaration::Topology(Arc::new(NamedTopology {
            name,
            algebra,
            topology,
        })))
    }

    fn hom(&mut self) -> PResult<Declaration> {
        self.expect_keyword("hom")?;
        let (name, name_at) = self.ident()?;
        self.check_fresh("hom", &name, name_at)?;
        self.expect(Tok::Colon)?;
        let (dom_name, dom_at) = self.ident()?;
        let dom = self.lookup(&self.scope.algebras, "algebra", &dom_name, dom_at)?;
        self.expect(Tok::Arrow)?;
        let (cod_name, cod_at) = self.ident()?;
        let cod = self.lookup(&self.scope.algebras, "algebra", &cod_name, cod_at)?;
        if dom.theory() != cod.theory() {
            return Err(self.error_at(
                cod_at,
                ParseErrorKind::TheoryMismatch {
                    expected: dom.theory().name.clone(),
                    found: cod.theory().name.clone(),
                },
            ));
        }
        self.expect(Tok::Eq)?;
        let open_at = self.expect(Tok::LBracket)?;
        let mut map = Vec::new();
        loop {
            let (v, at) = self.nat()?;
            if v >= cod.size() {
                return Err(self.error_at(
                    at,
                    ParseErrorKind::ValueOutOfRange {
                        value: v,
                        bound: cod.size(),
                    },
                ));
            }
            map.push(v);
            if *self.peek() != Tok::Comma {
                break;
            }
            self.advance();
        }
        self.expect(Tok::RBracket)?;
        self.expect(Tok::Semi)?;
        if map.len() != dom.size() {
            return Err(self.error_at(
                open_at,
                ParseErrorKind::ShapeMismatch(format!(
                    "`{name}` lists {} images but `{dom_name}` has {} elements",
                    map.len(),
                    dom.size()
                )),
            ));
        }
        let hom = Homomorphism::new(name, dom, cod, map).expect("shape checked while parsing");
        Ok(Declaration::Hom(Arc::new(hom)))
    }

    fn point(&mut self) -> PResult<Declaration> {
        self.expect_keyword("point")?;
        let (name, name_at) = self.ident()?;
        self.check_fresh("point", &name, name_at)?;
        self.expect(Tok::LBrace)?;
        self.expect_keyword("p")?;
        self.expect(Tok::Eq)?;
        let (p_name, p_at) = self.ident()?;
        let p = self.lookup(&self.scope.homs, "hom", &p_name, p_at)?;
        self.expect(Tok::Semi)?;
        self.expect_keyword("s")?;
        self.expect(Tok::Eq)?;
        let (s_name, s_at) = self.ident()?;
        let s = self.lookup(&self.scope.homs, "hom", &s_name, s_at)?;
        self.expect(Tok::Semi)?;
        self.expect(Tok::RBrace)?;
        let point = SplitPoint::new(name, p, s).map_err(|e| {
            self.error_at(s_at, ParseErrorKind::ShapeMismatch(e.to_string()))
        })?;
        Ok(Declaration::Point(Arc::new(point)))
    }
}

/// `x`, `y2`, `z10`: single lowercase letter with an optional numeric suffix.
fn looks_like_variable(name: &str) -> bool {
    let mut chars = name.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_lowercase()) && chars.all(|c| c.is_ascii_digit())
}

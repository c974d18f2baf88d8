use proptest::prelude::*;
use ualg::corpus::BUILTIN_SOURCE;
use ualg::syntax::{
    format_declaration, format_source, format_term, parse_equation, parse_source, parse_term, OpSymbol,
    ParseErrorKind,
};
use ualg::{Equation, Signature, Term};

fn grp_signature() -> Signature {
    Signature::new(vec![
        OpSymbol::new("e", 0),
        OpSymbol::new("inv", 1),
        OpSymbol::new("mul", 2),
    ])
    .unwrap()
}

fn arb_term(nvars: usize) -> impl Strategy<Value = Term> {
    let leaf = prop_oneof![
        (0..nvars).prop_map(Term::Var),
        Just(Term::constant("e")),
    ];
    leaf.prop_recursive(5, 40, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(|t| Term::app("inv", vec![t])),
            (inner.clone(), inner).prop_map(|(a, b)| Term::app("mul", vec![a, b])),
        ]
    })
}

/// Renumbers variables in first-occurrence order, as the parser does.
fn canonical(t: &Term) -> Term {
    Equation::new(t.clone(), Term::constant("e")).lhs
}

#[test]
fn builtin_corpus_round_trips_declaration_by_declaration() {
    let parsed = parse_source(BUILTIN_SOURCE).unwrap();
    assert!(!parsed.declarations.is_empty());
    let text = format_source(&parsed.declarations);
    let again = parse_source(&text).unwrap();
    assert_eq!(parsed.declarations, again.declarations);
    for decl in &parsed.declarations {
        let single = format_declaration(decl);
        assert!(single.contains(decl.name()), "{single}");
    }
}

#[test]
fn formatting_is_a_fixed_point_after_one_pass() {
    let parsed = parse_source(BUILTIN_SOURCE).unwrap();
    let once = format_source(&parsed.declarations);
    let twice = format_source(&parse_source(&once).unwrap().declarations);
    assert_eq!(once, twice);
}

#[test]
fn z2_prints_in_canonical_form() {
    let src = "theory Grp { op e/0; op inv/1; op mul/2; }\n\
               algebra Z2 : Grp { carrier = 2; e = 0; inv = [0,1]; mul = [[0,1],[1,0]]; }";
    let parsed = parse_source(src).unwrap();
    assert_eq!(
        format_declaration(&parsed.declarations[1]),
        "algebra Z2 : Grp { carrier = 2; e = 0; inv = [0,1]; mul = [[0,1],[1,0]]; }"
    );
}

#[test]
fn arity_mismatch_names_the_symbol() {
    let err = parse_term("mul(x)", &grp_signature()).unwrap_err();
    assert_eq!(
        err.kind,
        ParseErrorKind::ArityMismatch {
            symbol: "mul".into(),
            expected: 2,
            got: 1
        }
    );
}

proptest! {
    #[test]
    fn term_print_then_parse_is_identity(t in arb_term(4)) {
        let sig = grp_signature();
        let text = format_term(&t, "x");
        let (back, _) = parse_term(&text, &sig).unwrap();
        prop_assert_eq!(back, canonical(&t));
    }

    #[test]
    fn equation_print_then_parse_is_identity(l in arb_term(3), r in arb_term(3)) {
        let sig = grp_signature();
        let eq = Equation::new(l, r);
        let (back, _) = parse_equation(&eq.to_string(), &sig).unwrap();
        prop_assert!(back.lhs.var_bound() <= back.nvars && back.rhs.var_bound() <= back.nvars);
        prop_assert_eq!(back, eq);
    }

    #[test]
    fn wrong_arity_anywhere_is_rejected(t in arb_term(3), extra in 1usize..3) {
        let sig = grp_signature();
        let text = format_term(&t, "x");
        let bad = format!("inv({text}{})", ", x0".repeat(extra));
        let err = parse_term(&bad, &sig).unwrap_err();
        prop_assert_eq!(err.kind.class(), "arity-mismatch");
    }
}

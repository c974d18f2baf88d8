use super::{Declaration, Term, Theory};
use crate::algebra::FiniteAlgebra;
use crate::sets;

/// Renders a term with variables named `{prefix}{index}`.
pub fn format_term(term: &Term, prefix: &str) -> String {
    let mut out = String::new();
    write_term(term, prefix, &mut out);
    out
}

fn write_term(term: &Term, prefix: &str, out: &mut String) {
    match term {
        Term::Var(i) => {
            out.push_str(prefix);
            out.push_str(&i.to_string());
        }
        Term::App(s, args) => {
            out.push_str(s);
            if !args.is_empty() {
                out.push('(');
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        out.push_str(", ");
                    }
                    write_term(a, prefix, out);
                }
                out.push(')');
            }
        }
    }
}

/// A variable prefix that cannot be confused with a symbol of the theory.
fn variable_prefix(theory: &Theory) -> &'static str {
    const CANDIDATES: [&str; 6] = ["x", "v", "w", "u", "var", "var_"];
    CANDIDATES
        .into_iter()
        .find(|p| {
            !theory.signature.ops().iter().any(|op| {
                op.name
                    .strip_prefix(p)
                    .is_some_and(|rest| !rest.is_empty() && rest.chars().all(|c| c.is_ascii_digit()))
            })
        })
        .unwrap_or("var_")
}

fn format_theory(theory: &Theory) -> String {
    if theory.signature.is_empty() && theory.axioms.is_empty() {
        return format!("theory {} {{ }}", theory.name);
    }
    let prefix = variable_prefix(theory);
    let mut out = format!("theory {} {{\n", theory.name);
    for op in theory.signature.ops() {
        out.push_str(&format!("  op {}/{};\n", op.name, op.arity));
    }
    for ax in &theory.axioms {
        out.push_str(&format!(
            "  axiom {} = {};\n",
            format_term(&ax.lhs, prefix),
            format_term(&ax.rhs, prefix)
        ));
    }
    out.push('}');
    out
}

fn write_table(values: &[usize], arity: usize, size: usize, out: &mut String) {
    if arity == 0 {
        out.push_str(&values[0].to_string());
        return;
    }
    let stride = values.len() / size;
    out.push('[');
    for i in 0..size {
        if i > 0 {
            out.push(',');
        }
        write_table(&values[i * stride..(i + 1) * stride], arity - 1, size, out);
    }
    out.push(']');
}

fn format_algebra(alg: &FiniteAlgebra) -> String {
    let mut out = format!(
        "algebra {} : {} {{ carrier = {};",
        alg.name(),
        alg.theory().name,
        alg.size()
    );
    for (i, op) in alg.signature().ops().iter().enumerate() {
        out.push(' ');
        out.push_str(&op.name);
        out.push_str(" = ");
        write_table(alg.table(i), op.arity, alg.size(), &mut out);
        out.push(';');
    }
    out.push_str(" }");
    out
}

pub fn format_declaration(decl: &Declaration) -> String {
    match decl {
        Declaration::Theory(t) => format_theory(t),
        Declaration::Algebra(a) => format_algebra(a),
        Declaration::Topology(t) => {
            let gens = t.topology.generators();
            let body: Vec<String> = gens.iter().map(|g| format!("open {};", sets::format(g))).collect();
            if body.is_empty() {
                format!("topology {} on {} {{ }}", t.name, t.algebra.name())
            } else {
                format!("topology {} on {} {{ {} }}", t.name, t.algebra.name(), body.join(" "))
            }
        }
        Declaration::Hom(h) => {
            let map: Vec<String> = h.map.iter().map(|v| v.to_string()).collect();
            format!(
                "hom {} : {} -> {} = [{}];",
                h.name,
                h.dom.name(),
                h.cod.name(),
                map.join(",")
            )
        }
        Declaration::Point(p) => format!("point {} {{ p = {}; s = {}; }}", p.name, p.p.name, p.s.name),
    }
}

/// One declaration per line (theories span several lines).
pub fn format_source(decls: &[Declaration]) -> String {
    let mut out = String::new();
    for d in decls {
        out.push_str(&format_declaration(d));
        out.push('\n');
    }
    out
}

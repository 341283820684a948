//! Text rendering that parses back to an equal-valued tree.

use num_traits::{One, Signed};

use super::{Node, Rational, ScalarExpr};

pub(crate) fn render(e: &ScalarExpr) -> String {
    let mut out = String::new();
    write_sum(e, &mut out);
    out
}

fn rational(c: &Rational) -> String {
    if c.denom().is_one() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

// Precedence levels: sum < product < unary minus < power < atom.
fn needs_parens_in_product(e: &ScalarExpr, first: bool) -> bool {
    match e.node() {
        Node::Add(_) => true,
        Node::Neg(_) => !first,
        Node::Const(c) => !first && (c.is_negative() || !c.denom().is_one()),
        Node::Div(..) => !first,
        _ => false,
    }
}

fn is_atomic(e: &ScalarExpr) -> bool {
    match e.node() {
        Node::Var(_) | Node::Fn(..) => true,
        Node::Const(c) => !c.is_negative() && c.denom().is_one(),
        _ => false,
    }
}

fn write_sum(e: &ScalarExpr, out: &mut String) {
    match e.node() {
        Node::Add(ts) => {
            for (i, t) in ts.iter().enumerate() {
                let mut s = String::new();
                write_product(t, &mut s);
                if i == 0 {
                    out.push_str(&s);
                } else if let Some(rest) = s.strip_prefix('-') {
                    out.push_str(" - ");
                    out.push_str(rest);
                } else {
                    out.push_str(" + ");
                    out.push_str(&s);
                }
            }
        }
        _ => write_product(e, out),
    }
}

fn write_product(e: &ScalarExpr, out: &mut String) {
    match e.node() {
        Node::Add(_) => {
            out.push('(');
            write_sum(e, out);
            out.push(')');
        }
        Node::Mul(fs) => {
            for (i, f) in fs.iter().enumerate() {
                if i > 0 {
                    out.push('*');
                }
                if needs_parens_in_product(f, i == 0) {
                    out.push('(');
                    write_sum(f, out);
                    out.push(')');
                } else {
                    write_product(f, out);
                }
            }
        }
        Node::Div(a, b) => {
            write_product(a, out);
            out.push('/');
            if matches!(b.node(), Node::Pow(..)) || is_atomic(b) {
                write_unary(b, out);
            } else {
                out.push('(');
                write_sum(b, out);
                out.push(')');
            }
        }
        _ => write_unary(e, out),
    }
}

fn write_unary(e: &ScalarExpr, out: &mut String) {
    match e.node() {
        Node::Neg(a) => {
            out.push('-');
            match a.node() {
                Node::Neg(_) | Node::Add(_) => {
                    out.push('(');
                    write_sum(a, out);
                    out.push(')');
                }
                Node::Const(c) if c.is_negative() => {
                    out.push('(');
                    out.push_str(&rational(c));
                    out.push(')');
                }
                _ => write_product(a, out),
            }
        }
        Node::Const(c) => out.push_str(&rational(c)),
        Node::Pow(b, n) => {
            if is_atomic(b) {
                write_atom(b, out);
            } else {
                out.push('(');
                write_sum(b, out);
                out.push(')');
            }
            out.push('^');
            out.push_str(&n.to_string());
        }
        Node::Add(_) | Node::Mul(_) | Node::Div(..) => {
            out.push('(');
            write_sum(e, out);
            out.push(')');
        }
        _ => write_atom(e, out),
    }
}

fn write_atom(e: &ScalarExpr, out: &mut String) {
    match e.node() {
        Node::Var(v) => out.push_str(v.name()),
        Node::Fn(f, a) => {
            out.push_str(f.name());
            out.push('(');
            write_sum(a, out);
            out.push(')');
        }
        Node::Const(c) => out.push_str(&rational(c)),
        _ => {
            out.push('(');
            write_sum(e, out);
            out.push(')');
        }
    }
}

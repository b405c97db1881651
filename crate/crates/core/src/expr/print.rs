use super::{BinaryOp, Expr, UnaryOp};

// Binding strength of the printed form of a node.
const SUM: u8 = 1;
const PRODUCT: u8 = 2;
const PREFIX: u8 = 3;
const POWER: u8 = 4;
const ATOM: u8 = 5;

fn level(e: &Expr) -> u8 {
    match e {
        Expr::Const(v) if v.is_sign_negative() => PREFIX,
        Expr::Const(_) | Expr::Var => ATOM,
        Expr::Unary(UnaryOp::Neg, _) => PREFIX,
        Expr::Unary(..) => ATOM,
        Expr::Binary(BinaryOp::Add | BinaryOp::Sub, ..) => SUM,
        Expr::Binary(..) => PRODUCT,
        Expr::Pow(..) => POWER,
    }
}

pub(crate) fn fmt_number(v: f64) -> String {
    if v.fract() == 0.0 && v.abs() < 1e15 {
        format!("{v:.0}")
    } else {
        format!("{v:?}")
    }
}

fn wrap(e: &Expr, parens: bool, out: &mut String) {
    if parens {
        out.push('(');
        write(e, out);
        out.push(')');
    } else {
        write(e, out);
    }
}

fn write(e: &Expr, out: &mut String) {
    match e {
        Expr::Const(v) => out.push_str(&fmt_number(*v)),
        Expr::Var => out.push('t'),
        Expr::Unary(UnaryOp::Neg, c) => {
            out.push('-');
            // `-2` would read back as a folded literal.
            let literal = matches!(**c, Expr::Const(v) if !v.is_sign_negative());
            wrap(c, literal || level(c) < PREFIX, out);
        }
        Expr::Unary(op, c) => {
            out.push_str(op.function_name().expect("named function"));
            out.push('(');
            write(c, out);
            out.push(')');
        }
        Expr::Binary(op, l, r) => {
            let (lvl, sym) = match op {
                BinaryOp::Add => (SUM, '+'),
                BinaryOp::Sub => (SUM, '-'),
                BinaryOp::Mul => (PRODUCT, '*'),
                BinaryOp::Div => (PRODUCT, '/'),
            };
            wrap(l, level(l) < lvl, out);
            if lvl == SUM {
                out.push(' ');
                out.push(sym);
                out.push(' ');
            } else {
                out.push(sym);
            }
            wrap(r, level(r) <= lvl, out);
        }
        Expr::Pow(b, p) => {
            wrap(b, level(b) < ATOM, out);
            out.push('^');
            out.push_str(&fmt_number(*p));
        }
    }
}

pub(crate) fn to_infix(e: &Expr) -> String {
    let mut s = String::new();
    write(e, &mut s);
    s
}

#[cfg(test)]
mod tests {
    use super::super::parse_expression;

    #[test]
    fn canonical_strings() {
        for (src, want) in [
            ("3*cos(t)", "3*cos(t)"),
            ("t^2+t^3", "t^2 + t^3"),
            ("(t+1)*(t-1)", "(t + 1)*(t - 1)"),
            ("t-(t-1)", "t - (t - 1)"),
            ("-(2)", "-(2)"),
            ("(-2)^2", "(-2)^2"),
            ("2*-t", "2*-t"),
            ("t^-0.5", "t^-0.5"),
            ("-(t*2)", "-(t*2)"),
        ] {
            let e = parse_expression(src).unwrap();
            assert_eq!(e.to_string(), want, "{src}");
            assert_eq!(parse_expression(want).unwrap(), e);
        }
    }
}

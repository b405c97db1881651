use super::{BinaryOp, Expr, ExprError, UnaryOp};
use crate::jet::{Jet, JetError, DEFAULT_MAX_ORDER, TAN_POLE_EPS};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct JetConfig {
    pub max_order: usize,
}

impl Default for JetConfig {
    fn default() -> Self {
        Self {
            max_order: DEFAULT_MAX_ORDER,
        }
    }
}

fn domain(msg: String) -> ExprError {
    ExprError::Jet(JetError::Domain(msg))
}

impl Expr {
    /// Plain floating-point evaluation at `t`.
    pub fn eval(&self, t: f64) -> Result<f64, ExprError> {
        let v = match self {
            Expr::Const(c) => *c,
            Expr::Var => t,
            Expr::Unary(op, c) => {
                let x = c.eval(t)?;
                match op {
                    UnaryOp::Neg => -x,
                    UnaryOp::Sin => x.sin(),
                    UnaryOp::Cos => x.cos(),
                    UnaryOp::Tan => {
                        if x.cos().abs() < TAN_POLE_EPS {
                            return Err(domain(format!("tan pole at argument {x}")));
                        }
                        x.tan()
                    }
                    UnaryOp::Exp => x.exp(),
                    UnaryOp::Log => {
                        if x <= 0.0 {
                            return Err(domain(format!("log of non-positive value {x}")));
                        }
                        x.ln()
                    }
                    UnaryOp::Sqrt => {
                        if x < 0.0 {
                            return Err(domain(format!("sqrt of value {x}")));
                        }
                        x.sqrt()
                    }
                    UnaryOp::Asin | UnaryOp::Acos => {
                        if x.abs() > 1.0 {
                            return Err(domain(format!("inverse sine/cosine of value {x}")));
                        }
                        if *op == UnaryOp::Asin {
                            x.asin()
                        } else {
                            x.acos()
                        }
                    }
                    UnaryOp::Atan => x.atan(),
                }
            }
            Expr::Binary(op, l, r) => {
                let a = l.eval(t)?;
                let b = r.eval(t)?;
                match op {
                    BinaryOp::Add => a + b,
                    BinaryOp::Sub => a - b,
                    BinaryOp::Mul => a * b,
                    BinaryOp::Div => {
                        if b == 0.0 {
                            return Err(domain("division by zero".into()));
                        }
                        a / b
                    }
                }
            }
            Expr::Pow(b, p) => {
                let x = b.eval(t)?;
                if x < 0.0 && p.fract() != 0.0 {
                    return Err(domain(format!("non-integer power {p} of negative value {x}")));
                }
                if x == 0.0 && *p < 0.0 {
                    return Err(domain("negative power of zero".into()));
                }
                if p.fract() == 0.0 && p.abs() <= 64.0 {
                    x.powi(*p as i32)
                } else {
                    x.powf(*p)
                }
            }
        };
        if !v.is_finite() {
            return Err(domain(format!("non-finite value at t = {t}")));
        }
        Ok(v)
    }

    /// Taylor coefficients of the expression about `t0`, using the default
    /// maximum order.
    pub fn eval_jet(&self, t0: f64, order: usize) -> Result<Jet, ExprError> {
        self.eval_jet_with(t0, order, &JetConfig::default())
    }

    pub fn eval_jet_with(&self, t0: f64, order: usize, cfg: &JetConfig) -> Result<Jet, ExprError> {
        if order > cfg.max_order {
            return Err(JetError::OrderOverflow {
                requested: order,
                max: cfg.max_order,
            }
            .into());
        }
        let j = self.jet_rec(t0, order)?;
        if !j.is_finite() {
            return Err(domain(format!("non-finite jet at t = {t0}")));
        }
        Ok(j)
    }

    fn jet_rec(&self, t0: f64, order: usize) -> Result<Jet, ExprError> {
        Ok(match self {
            Expr::Const(c) => Jet::constant(*c, order),
            Expr::Var => Jet::variable(t0, order),
            Expr::Unary(op, c) => {
                let x = c.jet_rec(t0, order)?;
                match op {
                    UnaryOp::Neg => -x,
                    UnaryOp::Sin => x.sin(),
                    UnaryOp::Cos => x.cos(),
                    UnaryOp::Tan => x.tan()?,
                    UnaryOp::Exp => x.exp(),
                    UnaryOp::Log => x.ln()?,
                    UnaryOp::Sqrt => x.sqrt()?,
                    UnaryOp::Asin => x.asin()?,
                    UnaryOp::Acos => x.acos()?,
                    UnaryOp::Atan => x.atan(),
                }
            }
            Expr::Binary(op, l, r) => {
                let a = l.jet_rec(t0, order)?;
                let b = r.jet_rec(t0, order)?;
                match op {
                    BinaryOp::Add => a + b,
                    BinaryOp::Sub => a - b,
                    BinaryOp::Mul => a.mul_jet(&b),
                    BinaryOp::Div => a.div_jet(&b)?,
                }
            }
            Expr::Pow(b, p) => b.jet_rec(t0, order)?.powf(*p)?,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::super::parse_expression;
    use super::*;

    #[test]
    fn identity_jet() {
        let j = parse_expression("t").unwrap().eval_jet(2.0, 3).unwrap();
        assert_eq!(j.coeffs(), &[2.0, 1.0, 0.0, 0.0]);
    }

    #[test]
    fn sine_jet() {
        let j = parse_expression("sin(t)").unwrap().eval_jet(0.0, 3).unwrap();
        let want = [0.0, 1.0, 0.0, -1.0 / 6.0];
        for (a, b) in j.coeffs().iter().zip(want) {
            assert!((a - b).abs() < 1e-16);
        }
    }

    #[test]
    fn order_overflow() {
        let e = parse_expression("t").unwrap();
        assert!(matches!(
            e.eval_jet(0.0, 9),
            Err(ExprError::Jet(JetError::OrderOverflow { requested: 9, max: 8 }))
        ));
        assert!(e.eval_jet_with(0.0, 12, &JetConfig { max_order: 12 }).is_ok());
    }

    #[test]
    fn domain_errors_surface() {
        let e = parse_expression("log(t)").unwrap();
        assert!(matches!(e.eval_jet(-1.0, 2), Err(ExprError::Jet(JetError::Domain(_)))));
        assert!(e.eval(-1.0).is_err());
        let e = parse_expression("tan(t)").unwrap();
        assert!(e.eval_jet(std::f64::consts::FRAC_PI_2, 2).is_err());
    }

    #[test]
    fn product_rule_is_convolution() {
        let a = parse_expression("exp(t)").unwrap();
        let b = parse_expression("cos(t)").unwrap();
        let ab = parse_expression("exp(t)*cos(t)").unwrap();
        let ja = a.eval_jet(0.3, 6).unwrap();
        let jb = b.eval_jet(0.3, 6).unwrap();
        assert_eq!(ab.eval_jet(0.3, 6).unwrap(), ja.mul_jet(&jb));
    }
}

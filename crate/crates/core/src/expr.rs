//! A small closed vocabulary of pointwise expressions for building grid
//! functions from JSON.

use serde::{Deserialize, Serialize};

use crate::mollifier::bump_value;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Expr {
    /// `c0 + c1 x + c2 x^2 + ...`
    Poly(Vec<f64>),
    /// `sin(a x + b)`
    Sin { a: f64, b: f64 },
    /// `cos(a x + b)`
    Cos { a: f64, b: f64 },
    /// `exp(a x + b)`
    Exp { a: f64, b: f64 },
    /// `|x - c|`
    Abs { c: f64 },
    /// Standard bump of the given radius centred at `center`.
    Bump { center: f64, radius: f64 },
    Sum(Vec<Expr>),
    Product(Vec<Expr>),
    Scale { by: f64, of: Box<Expr> },
}

impl Expr {
    pub fn constant(c: f64) -> Self {
        Expr::Poly(vec![c])
    }

    pub fn eval(&self, x: f64) -> f64 {
        match self {
            Expr::Poly(c) => c.iter().rev().fold(0.0, |acc, &ci| acc * x + ci),
            Expr::Sin { a, b } => (a * x + b).sin(),
            Expr::Cos { a, b } => (a * x + b).cos(),
            Expr::Exp { a, b } => (a * x + b).exp(),
            Expr::Abs { c } => (x - c).abs(),
            Expr::Bump { center, radius } => bump_value(*radius, x - center),
            Expr::Sum(v) => v.iter().map(|e| e.eval(x)).sum(),
            Expr::Product(v) => v.iter().map(|e| e.eval(x)).product(),
            Expr::Scale { by, of } => by * of.eval(x),
        }
    }

    /// A Lipschitz constant on `[lo, hi]`, when one is cheap to state.
    pub fn lipschitz_on(&self, lo: f64, hi: f64) -> Option<f64> {
        let m = lo.abs().max(hi.abs());
        match self {
            Expr::Poly(c) => Some(
                c.iter()
                    .enumerate()
                    .skip(1)
                    .map(|(i, ci)| i as f64 * ci.abs() * m.powi(i as i32 - 1))
                    .sum(),
            ),
            Expr::Sin { a, .. } | Expr::Cos { a, .. } => Some(a.abs()),
            Expr::Exp { a, b } => Some(a.abs() * (a * lo + b).exp().max((a * hi + b).exp())),
            Expr::Abs { .. } => Some(1.0),
            Expr::Sum(v) => v.iter().map(|e| e.lipschitz_on(lo, hi)).sum(),
            Expr::Scale { by, of } => of.lipschitz_on(lo, hi).map(|l| by.abs() * l),
            Expr::Bump { .. } | Expr::Product(_) => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn evaluation() {
        assert_eq!(Expr::Poly(vec![1.0, 2.0, 3.0]).eval(2.0), 17.0);
        assert_eq!(Expr::Abs { c: 1.0 }.eval(-1.0), 2.0);
        let e = Expr::Scale {
            by: 2.0,
            of: Box::new(Expr::Sum(vec![Expr::constant(1.0), Expr::Sin { a: 0.0, b: 0.0 }])),
        };
        assert_eq!(e.eval(0.3), 2.0);
    }

    #[test]
    fn json_shape() {
        let e: Expr = serde_json::from_str(r#"{"sum":[{"poly":[0,1]},{"sin":{"a":5,"b":0}}]}"#).unwrap();
        assert!((e.eval(0.1) - (0.1 + 0.5f64.sin())).abs() < 1e-15);
    }
}

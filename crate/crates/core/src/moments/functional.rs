//! Coordinate-symmetric functionals of a gas point.
//!
//! Every functional is already averaged over coordinates, so its mean under
//! an exchangeable law equals the mean of the unsymmetrized version
//! (`x1^2` means `(1/n) Σ x_i²`).

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::density::pair_kernel;
use crate::error::{Error, Result};
use crate::types::lp_pow;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Functional {
    One,
    /// `(1/n) Σ |x_i|^k`
    Coord(f64),
    /// `Σ |x_i|^ξ = ‖x‖_ξ^ξ`
    PowerSum(f64),
    /// `(1/(n(n−1))) Σ_{i≠j} |x_i|^k |x_j|^k`
    Pair(f64),
    /// `‖x‖_2^m`
    Euclid(f64),
    /// `‖x‖_∞^l`
    MaxPow(f64),
    /// `‖x‖_q^l`, finite `q`
    NormPow { q: f64, l: f64 },
    /// `Σ_{i<j} (|x_i|^ξ x_i^a − |x_j|^ξ x_j^a)/(x_i^a − x_j^a)`
    PairKernel { a: u32, xi: f64 },
    Product(Box<Functional>, Box<Functional>),
}

impl Functional {
    pub fn product(a: Functional, b: Functional) -> Functional {
        Functional::Product(Box::new(a), Box::new(b))
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        let n = x.len();
        match self {
            Functional::One => 1.0,
            Functional::Coord(k) => lp_pow(x, *k) / n as f64,
            Functional::PowerSum(xi) => lp_pow(x, *xi),
            Functional::Pair(k) => {
                if n < 2 {
                    return 0.0;
                }
                let s1 = lp_pow(x, *k);
                let s2 = lp_pow(x, 2.0 * k);
                (s1 * s1 - s2) / (n * (n - 1)) as f64
            }
            Functional::Euclid(m) => {
                let s = lp_pow(x, 2.0);
                if *m == 2.0 {
                    s
                } else if *m == 4.0 {
                    s * s
                } else {
                    s.powf(0.5 * m)
                }
            }
            Functional::MaxPow(l) => x.iter().fold(0.0f64, |a, v| a.max(v.abs())).powf(*l),
            Functional::NormPow { q, l } => lp_pow(x, *q).powf(l / q),
            Functional::PairKernel { a, xi } => {
                let mut s = 0.0;
                for i in 0..n {
                    for j in (i + 1)..n {
                        s += pair_kernel(x[i], x[j], *a, *xi);
                    }
                }
                s
            }
            Functional::Product(f, g) => f.eval(x) * g.eval(x),
        }
    }

    /// Degree of positive homogeneity.
    pub fn degree(&self) -> f64 {
        match self {
            Functional::One => 0.0,
            Functional::Coord(k) | Functional::PowerSum(k) => *k,
            Functional::Pair(k) => 2.0 * k,
            Functional::Euclid(m) => *m,
            Functional::MaxPow(l) => *l,
            Functional::NormPow { l, .. } => *l,
            Functional::PairKernel { xi, .. } => *xi,
            Functional::Product(f, g) => f.degree() + g.degree(),
        }
    }
}

fn num(s: &str) -> Result<f64> {
    s.parse()
        .map_err(|_| Error::Domain(format!("bad number {s:?} in functional")))
}

impl FromStr for Functional {
    type Err = Error;

    /// Syntax: `one`, `x1^k`, `x1^k*x2^k`, `sum|x|^xi`, `norm2^m`,
    /// `norminf^l`, `norm<q>^l`, `kernel<a>,<xi>`, and `f&g` for products.
    fn from_str(s: &str) -> Result<Functional> {
        let s = s.trim();
        if let Some((a, b)) = s.split_once('&') {
            return Ok(Functional::product(a.parse()?, b.parse()?));
        }
        if s == "one" || s == "1" {
            return Ok(Functional::One);
        }
        if let Some(rest) = s.strip_prefix("x1^") {
            if let Some((k, k2)) = rest.split_once("*x2^") {
                if k != k2 {
                    return Err(Error::Domain(format!("unequal pair powers in {s:?}")));
                }
                return Ok(Functional::Pair(num(k)?));
            }
            return Ok(Functional::Coord(num(rest)?));
        }
        if let Some(rest) = s.strip_prefix("sum|x|^") {
            return Ok(Functional::PowerSum(num(rest)?));
        }
        if let Some(rest) = s.strip_prefix("norminf^") {
            return Ok(Functional::MaxPow(num(rest)?));
        }
        if let Some(rest) = s.strip_prefix("norm") {
            let (q, l) = rest
                .split_once('^')
                .ok_or_else(|| Error::Domain(format!("bad functional {s:?}")))?;
            let (q, l) = (num(q)?, num(l)?);
            return Ok(if q == 2.0 {
                Functional::Euclid(l)
            } else {
                Functional::NormPow { q, l }
            });
        }
        if let Some(rest) = s.strip_prefix("kernel") {
            let (a, xi) = rest
                .split_once(',')
                .ok_or_else(|| Error::Domain(format!("bad functional {s:?}")))?;
            let a: u32 = a
                .parse()
                .map_err(|_| Error::Domain(format!("bad kernel order in {s:?}")))?;
            return Ok(Functional::PairKernel { a, xi: num(xi)? });
        }
        Err(Error::Domain(format!("unknown functional {s:?}")))
    }
}

impl fmt::Display for Functional {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Functional::One => write!(f, "one"),
            Functional::Coord(k) => write!(f, "x1^{k}"),
            Functional::PowerSum(k) => write!(f, "sum|x|^{k}"),
            Functional::Pair(k) => write!(f, "x1^{k}*x2^{k}"),
            Functional::Euclid(m) => write!(f, "norm2^{m}"),
            Functional::MaxPow(l) => write!(f, "norminf^{l}"),
            Functional::NormPow { q, l } => write!(f, "norm{q}^{l}"),
            Functional::PairKernel { a, xi } => write!(f, "kernel{a},{xi}"),
            Functional::Product(a, b) => write!(f, "{a}&{b}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_roundtrip() {
        for s in [
            "one", "x1^2", "x1^2*x2^2", "sum|x|^4", "norm2^4", "norminf^2", "norm3^5", "kernel2,4",
            "norm2^2&sum|x|^3",
        ] {
            let f: Functional = s.parse().unwrap();
            assert_eq!(f.to_string(), s);
        }
    }

    #[test]
    fn symmetrized_values() {
        let x = [1.0, -2.0, 3.0];
        assert_eq!(Functional::Coord(2.0).eval(&x), 14.0 / 3.0);
        assert_eq!(Functional::PowerSum(2.0).eval(&x), 14.0);
        // pairs: 1*4 + 1*9 + 4*9 = 49, twice over 6 ordered pairs
        assert!((Functional::Pair(2.0).eval(&x) - 98.0 / 6.0).abs() < 1e-12);
        assert_eq!(Functional::Euclid(4.0).eval(&x), 196.0);
        assert_eq!(Functional::MaxPow(2.0).eval(&x), 9.0);
    }
}

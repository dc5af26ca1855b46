//! Fields, matrix subspaces, exponents and the reduction of a Schatten ball
//! to its log-gas parameters.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Field {
    R,
    C,
    H,
}

impl Field {
    pub fn beta(self) -> u32 {
        match self {
            Field::R => 1,
            Field::C => 2,
            Field::H => 4,
        }
    }

    pub fn from_beta(beta: u32) -> Option<Field> {
        match beta {
            1 => Some(Field::R),
            2 => Some(Field::C),
            4 => Some(Field::H),
            _ => None,
        }
    }
}

impl FromStr for Field {
    type Err = Error;
    fn from_str(s: &str) -> Result<Field> {
        match s.to_ascii_uppercase().as_str() {
            "R" | "REAL" => Ok(Field::R),
            "C" | "COMPLEX" => Ok(Field::C),
            "H" | "QUATERNION" => Ok(Field::H),
            _ => Err(Error::IllegalSpec(format!("unknown field {s:?}"))),
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Field::R => "R",
            Field::C => "C",
            Field::H => "H",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Subspace {
    Full,
    SelfAdjoint,
    AntiSymHermitian,
    ComplexSymmetric,
}

impl FromStr for Subspace {
    type Err = Error;
    fn from_str(s: &str) -> Result<Subspace> {
        match s.to_ascii_lowercase().replace(['-', '_'], "").as_str() {
            "full" => Ok(Subspace::Full),
            "selfadjoint" | "hermitian" => Ok(Subspace::SelfAdjoint),
            "antisymhermitian" | "antisym" => Ok(Subspace::AntiSymHermitian),
            "complexsymmetric" | "symmetric" => Ok(Subspace::ComplexSymmetric),
            _ => Err(Error::IllegalSpec(format!("unknown subspace {s:?}"))),
        }
    }
}

impl fmt::Display for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Subspace::Full => "full",
            Subspace::SelfAdjoint => "self-adjoint",
            Subspace::AntiSymHermitian => "antisym-hermitian",
            Subspace::ComplexSymmetric => "complex-symmetric",
        };
        f.write_str(s)
    }
}

/// Exponent `p ∈ [1, ∞]`. Infinity is its own variant, never a large float.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Exponent {
    Finite(f64),
    Infinity,
}

impl Exponent {
    pub fn finite(p: f64) -> Result<Exponent> {
        if p.is_finite() && p >= 1.0 {
            Ok(Exponent::Finite(p))
        } else {
            Err(Error::Domain(format!("exponent must lie in [1, inf), got {p}")))
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, Exponent::Infinity)
    }

    /// The finite value, or `None` for infinity.
    pub fn value(self) -> Option<f64> {
        match self {
            Exponent::Finite(p) => Some(p),
            Exponent::Infinity => None,
        }
    }

    /// `‖x‖_p^p` for finite `p`, `‖x‖_∞` otherwise.
    pub fn norm_pow(self, x: &[f64]) -> f64 {
        match self {
            Exponent::Finite(p) => lp_pow(x, p),
            Exponent::Infinity => x.iter().fold(0.0f64, |m, v| m.max(v.abs())),
        }
    }

    /// `‖x‖_p`.
    pub fn norm(self, x: &[f64]) -> f64 {
        match self {
            Exponent::Finite(p) => lp_pow(x, p).powf(1.0 / p),
            Exponent::Infinity => self.norm_pow(x),
        }
    }
}

/// `Σ |x_i|^q`, with the common integer cases kept exact.
pub fn lp_pow(x: &[f64], q: f64) -> f64 {
    if q == 2.0 {
        x.iter().map(|v| v * v).sum()
    } else if q == 1.0 {
        x.iter().map(|v| v.abs()).sum()
    } else if q == 4.0 {
        x.iter().map(|v| (v * v) * (v * v)).sum()
    } else {
        x.iter().map(|v| v.abs().powf(q)).sum()
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Exponent::Finite(p) => write!(f, "{p}"),
            Exponent::Infinity => f.write_str("inf"),
        }
    }
}

impl FromStr for Exponent {
    type Err = Error;
    fn from_str(s: &str) -> Result<Exponent> {
        let t = s.trim();
        if t.eq_ignore_ascii_case("inf") || t.eq_ignore_ascii_case("infinity") {
            return Ok(Exponent::Infinity);
        }
        let p: f64 = t
            .parse()
            .map_err(|_| Error::Domain(format!("cannot parse exponent {s:?}")))?;
        Exponent::finite(p)
    }
}

impl Serialize for Exponent {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Exponent::Finite(p) => s.serialize_f64(*p),
            Exponent::Infinity => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for Exponent {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Exponent, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(p) => Exponent::finite(p).map_err(serde::de::Error::custom),
            Raw::Text(s) => s.parse().map_err(serde::de::Error::custom),
        }
    }
}

/// Parameters of `f_{a,b,c}` on `R^n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct EnsembleParams {
    pub a: u32,
    pub b: u32,
    pub c: u32,
    pub n: usize,
}

impl EnsembleParams {
    pub fn new(a: u32, b: u32, c: u32, n: usize) -> Result<EnsembleParams> {
        if a == 0 || b == 0 || n == 0 {
            return Err(Error::Domain(format!(
                "need a, b, n >= 1, got a={a} b={b} n={n}"
            )));
        }
        Ok(EnsembleParams { a, b, c, n })
    }

    /// Total degree `ab n(n-1)/2 + (c+1) n`.
    pub fn d(&self) -> usize {
        let n = self.n;
        (self.a * self.b) as usize * n * (n - 1) / 2 + (self.c as usize + 1) * n
    }

    pub fn with_n(&self, n: usize) -> EnsembleParams {
        EnsembleParams { n, ..*self }
    }
}

impl fmt::Display for EnsembleParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{}) n={}", self.a, self.b, self.c, self.n)
    }
}

/// A Schatten ball `K_{p,E}` in a named matrix subspace.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SchattenSpec {
    pub field: Field,
    pub subspace: Subspace,
    pub n: usize,
    pub p: Exponent,
}

impl SchattenSpec {
    pub fn new(field: Field, subspace: Subspace, n: usize, p: Exponent) -> Result<SchattenSpec> {
        let spec = SchattenSpec { field, subspace, n, p };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::IllegalSpec("matrix size must be positive".into()));
        }
        match (self.subspace, self.field) {
            (Subspace::AntiSymHermitian | Subspace::ComplexSymmetric, f) if f != Field::C => {
                Err(Error::IllegalSpec(format!(
                    "{} requires the complex field, got {f}",
                    self.subspace
                )))
            }
            (Subspace::AntiSymHermitian, _) if self.n < 2 => Err(Error::IllegalSpec(
                "anti-symmetric subspace is trivial for n = 1".into(),
            )),
            _ => Ok(()),
        }
    }

    /// Real dimension of the subspace.
    pub fn real_dim(&self) -> usize {
        let n = self.n;
        let beta = self.field.beta() as usize;
        match self.subspace {
            Subspace::Full => beta * n * n,
            Subspace::SelfAdjoint => n + beta * n * (n - 1) / 2,
            Subspace::ComplexSymmetric => n * (n + 1),
            Subspace::AntiSymHermitian => n * (n - 1) / 2,
        }
    }
}

/// Result of reducing a Schatten spec to a gas.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Ensemble {
    pub params: EnsembleParams,
    /// How many singular values each gas coordinate accounts for.
    pub multiplicity: u32,
    /// An extra zero singular value is appended (odd anti-symmetric case).
    pub forced_zero: bool,
    /// Gas coordinates are signed eigenvalues rather than singular values.
    pub signed: bool,
}

impl Ensemble {
    /// Singular values of a matrix whose gas coordinates are `x`, unsorted.
    pub fn singular_values(&self, x: &[f64]) -> Vec<f64> {
        let mut s = Vec::with_capacity(x.len() * self.multiplicity as usize + 1);
        for v in x {
            for _ in 0..self.multiplicity {
                s.push(v.abs());
            }
        }
        if self.forced_zero {
            s.push(0.0);
        }
        s
    }

    /// `‖T‖_2^2` from gas coordinates.
    pub fn frobenius_sq(&self, x: &[f64]) -> f64 {
        self.multiplicity as f64 * lp_pow(x, 2.0)
    }
}

pub fn ensemble_of(spec: &SchattenSpec) -> Result<Ensemble> {
    spec.validate()?;
    let n = spec.n;
    let beta = spec.field.beta();
    let plain = |a, b, c| -> Result<Ensemble> {
        Ok(Ensemble {
            params: EnsembleParams::new(a, b, c, n)?,
            multiplicity: 1,
            forced_zero: false,
            signed: false,
        })
    };
    match spec.subspace {
        Subspace::Full => plain(2, beta, beta - 1),
        Subspace::ComplexSymmetric => plain(2, 1, 1),
        Subspace::SelfAdjoint => {
            let mut e = plain(1, beta, 0)?;
            e.signed = true;
            Ok(e)
        }
        Subspace::AntiSymHermitian => {
            let odd = n % 2 == 1;
            Ok(Ensemble {
                params: EnsembleParams::new(2, 2, if odd { 2 } else { 0 }, n / 2)?,
                multiplicity: 2,
                forced_zero: odd,
                signed: false,
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(f: Field, s: Subspace, n: usize) -> SchattenSpec {
        SchattenSpec::new(f, s, n, Exponent::Finite(2.0)).unwrap()
    }

    #[test]
    fn table_examples() {
        let e = ensemble_of(&spec(Field::C, Subspace::Full, 3)).unwrap();
        assert_eq!((e.params.a, e.params.b, e.params.c), (2, 2, 1));
        assert_eq!(e.params.d(), 18);

        let e = ensemble_of(&spec(Field::R, Subspace::SelfAdjoint, 4)).unwrap();
        assert_eq!((e.params.a, e.params.b, e.params.c, e.params.n), (1, 1, 0, 4));
        assert_eq!(e.params.d(), 10);
        assert!(e.signed);

        let e = ensemble_of(&spec(Field::C, Subspace::AntiSymHermitian, 5)).unwrap();
        assert_eq!((e.params.a, e.params.b, e.params.c, e.params.n), (2, 2, 2, 2));
        assert_eq!(e.multiplicity, 2);
        assert!(e.forced_zero);

        let e = ensemble_of(&spec(Field::C, Subspace::ComplexSymmetric, 3)).unwrap();
        assert_eq!((e.params.a, e.params.b, e.params.c), (2, 1, 1));
    }

    #[test]
    fn full_degree_is_beta_n_squared() {
        for f in [Field::R, Field::C, Field::H] {
            for n in 1..=32 {
                let s = spec(f, Subspace::Full, n);
                let e = ensemble_of(&s).unwrap();
                assert_eq!(e.params.d(), f.beta() as usize * n * n);
                assert_eq!(e.params.d(), s.real_dim());
            }
        }
    }

    #[test]
    fn gas_degree_matches_subspace_dimension() {
        for n in 2..=12 {
            for (f, s) in [
                (Field::R, Subspace::SelfAdjoint),
                (Field::C, Subspace::SelfAdjoint),
                (Field::H, Subspace::SelfAdjoint),
                (Field::C, Subspace::ComplexSymmetric),
                (Field::C, Subspace::AntiSymHermitian),
            ] {
                let sp = spec(f, s, n);
                assert_eq!(ensemble_of(&sp).unwrap().params.d(), sp.real_dim(), "{f} {s} {n}");
            }
        }
    }

    #[test]
    fn illegal_pairs_rejected() {
        for f in [Field::R, Field::H] {
            for s in [Subspace::AntiSymHermitian, Subspace::ComplexSymmetric] {
                assert!(matches!(
                    SchattenSpec::new(f, s, 3, Exponent::Infinity),
                    Err(Error::IllegalSpec(_))
                ));
            }
        }
    }

    #[test]
    fn exponent_parse_and_serde() {
        assert_eq!("inf".parse::<Exponent>().unwrap(), Exponent::Infinity);
        assert_eq!("2.5".parse::<Exponent>().unwrap(), Exponent::Finite(2.5));
        assert!("0.5".parse::<Exponent>().is_err());
        assert_eq!(Exponent::Infinity.to_string(), "inf");
        assert_eq!(Exponent::Infinity.norm(&[0.5, -2.0]), 2.0);
        assert_eq!(Exponent::Finite(2.0).norm(&[3.0, 4.0]), 5.0);
    }
}

//! Stochastic single-spin error channels applied as sampled unitaries.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::group::{omega, GroupElement};
use crate::lattice::EdgeId;
use crate::state::{SpinDiagonalOp, StateVector};
use crate::Error;

/// A single-spin error.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum ErrorOp {
    LeftMul(GroupElement),
    RightMul(GroupElement),
    /// The `W_Λ` table `(1,1,1,−1,−1,−1)`.
    SignFlip,
    /// The table `(1,ω,ω²,1,ω,ω²)`.
    PhasePattern,
}

impl ErrorOp {
    pub fn apply(self, s: &mut StateVector, e: EdgeId) -> Result<(), Error> {
        match self {
            ErrorOp::LeftMul(g) => s.apply_left_mul(e, g),
            ErrorOp::RightMul(g) => s.apply_right_mul(e, g),
            ErrorOp::SignFlip => s.apply_diagonal(&SpinDiagonalOp::real(e, [1.0, 1.0, 1.0, -1.0, -1.0, -1.0])),
            ErrorOp::PhasePattern => {
                let w = omega();
                let one = Complex64::new(1.0, 0.0);
                s.apply_diagonal(&SpinDiagonalOp::new(e, [one, w, w * w, one, w, w * w]))
            }
        }
    }
}

impl fmt::Display for ErrorOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ErrorOp::LeftMul(g) => write!(f, "left:{g}"),
            ErrorOp::RightMul(g) => write!(f, "right:{g}"),
            ErrorOp::SignFlip => f.write_str("signflip"),
            ErrorOp::PhasePattern => f.write_str("phase"),
        }
    }
}

impl FromStr for ErrorOp {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "signflip" => return Ok(ErrorOp::SignFlip),
            "phase" => return Ok(ErrorOp::PhasePattern),
            _ => {}
        }
        let op = match s.split_once(':') {
            Some(("left", g)) => ErrorOp::LeftMul(g.parse()?),
            Some(("right", g)) => ErrorOp::RightMul(g.parse()?),
            _ => return Err(Error::Parse(format!("unknown error operator `{s}`"))),
        };
        Ok(op)
    }
}

impl TryFrom<String> for ErrorOp {
    type Error = Error;
    fn try_from(s: String) -> Result<Self, Error> {
        s.parse()
    }
}

impl From<ErrorOp> for String {
    fn from(op: ErrorOp) -> String {
        op.to_string()
    }
}

/// Independent per-spin, per-step errors drawn uniformly from `errors`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NoiseModel {
    pub p: f64,
    pub errors: Vec<ErrorOp>,
    pub steps: usize,
}

impl NoiseModel {
    pub fn new(p: f64, errors: Vec<ErrorOp>, steps: usize) -> Result<Self, Error> {
        let m = Self { p, errors, steps };
        m.validate()?;
        Ok(m)
    }

    pub fn sign_flip(p: f64) -> Self {
        Self { p, errors: vec![ErrorOp::SignFlip], steps: 1 }
    }

    pub fn validate(&self) -> Result<(), Error> {
        if !(0.0..=1.0).contains(&self.p) {
            return Err(Error::InvalidConfig(format!("error probability {} outside [0, 1]", self.p)));
        }
        if self.errors.is_empty() {
            return Err(Error::InvalidConfig("empty error set".into()));
        }
        if self.errors.iter().any(|op| matches!(op, ErrorOp::LeftMul(g) | ErrorOp::RightMul(g) if g.is_identity())) {
            return Err(Error::InvalidConfig("identity multiplication is not an error".into()));
        }
        Ok(())
    }
}

/// One applied error.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AppliedError {
    pub step: usize,
    pub edge: EdgeId,
    pub op: ErrorOp,
}

/// Samples and applies errors to every spin of `s` for each step.
pub fn inject_noise<R: Rng + ?Sized>(s: &mut StateVector, model: &NoiseModel, rng: &mut R) -> Result<Vec<AppliedError>, Error> {
    model.validate()?;
    let mut log = Vec::new();
    for step in 0..model.steps {
        for e in 0..s.width() {
            if rng.random::<f64>() >= model.p {
                continue;
            }
            let op = model.errors[rng.random_range(0..model.errors.len())];
            op.apply(s, EdgeId(e))?;
            log.push(AppliedError { step, edge: EdgeId(e), op });
        }
    }
    Ok(log)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{Boundary, Lattice};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn certain_and_absent_noise() {
        let lat = Lattice::grid(2, 2, Boundary::Open).unwrap();
        let s0 = StateVector::identity_config(&lat).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(0);

        let mut s = s0.clone();
        assert!(inject_noise(&mut s, &NoiseModel::sign_flip(0.0), &mut rng).unwrap().is_empty());
        assert_eq!(s.max_abs_diff(&s0).unwrap(), 0.0);

        let log = inject_noise(&mut s, &NoiseModel::sign_flip(1.0), &mut rng).unwrap();
        assert_eq!(log.len(), 4);
        assert!(log.iter().all(|a| a.op == ErrorOp::SignFlip));
    }

    #[test]
    fn parse_ops() {
        for op in [ErrorOp::SignFlip, ErrorOp::PhasePattern, ErrorOp::LeftMul(GroupElement::TC), ErrorOp::RightMul(GroupElement::C2)] {
            assert_eq!(op.to_string().parse::<ErrorOp>().unwrap(), op);
        }
        assert!("left:x".parse::<ErrorOp>().is_err());
        assert!(NoiseModel::new(0.1, vec![ErrorOp::LeftMul(GroupElement::E)], 1).is_err());
        assert!(NoiseModel::new(1.5, vec![ErrorOp::SignFlip], 1).is_err());
        assert!(NoiseModel::new(0.1, vec![], 1).is_err());
    }
}

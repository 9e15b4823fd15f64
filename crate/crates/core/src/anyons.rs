//! Charge creation operators, chains, the `U(v)` rotation and pair fusion.

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::double::{holonomy, ChargeType, QuantumDouble};
use crate::group::{omega, GroupElement, ORDER};
use crate::lattice::{EdgeId, Path, VertexId};
use crate::state::{digit, SpinDiagonalOp, StateVector};
use crate::Error;

/// Single-spin creation operators.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CreationKind {
    WLambda,
    WPhi,
    WPhiPrime,
}

impl CreationKind {
    /// Diagonal table indexed `(e, c, c², t, tc, tc²)`.
    pub const fn table(self) -> [f64; ORDER] {
        match self {
            CreationKind::WLambda => [1.0, 1.0, 1.0, -1.0, -1.0, -1.0],
            CreationKind::WPhi => [2.0, -1.0, -1.0, 0.0, 0.0, 0.0],
            CreationKind::WPhiPrime => [0.0, 1.0, -1.0, 0.0, 0.0, 0.0],
        }
    }

    pub fn op(self, e: EdgeId) -> SpinDiagonalOp {
        SpinDiagonalOp::real(e, self.table())
    }

    pub const fn charge(self) -> ChargeType {
        match self {
            CreationKind::WLambda => ChargeType::Lambda,
            CreationKind::WPhi | CreationKind::WPhiPrime => ChargeType::Phi,
        }
    }
}

/// Which Φ chain weights to use.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Flavor {
    Standard,
    Primed,
}

fn check_path(s: &StateVector, path: &Path) -> Result<(), Error> {
    match path.edges().find(|e| e.0 >= s.width()) {
        Some(e) => Err(Error::OutOfRange { kind: "edge", index: e.0, len: s.width() }),
        None => Ok(()),
    }
}

fn renormalize(s: &mut StateVector, before: f64) -> Result<f64, Error> {
    let after = s.normalize()?;
    Ok(if before > 0.0 { after / before } else { after })
}

/// Applies a creation operator to one spin and renormalizes.
///
/// Returns `‖W s‖ / ‖s‖`.
pub fn apply_w(s: &mut StateVector, kind: CreationKind, e: EdgeId) -> Result<f64, Error> {
    let before = s.norm();
    s.apply_diagonal(&kind.op(e))?;
    renormalize(s, before)
}

/// Product of `W_Λ` over every spin of the path.
pub fn w_lambda_chain(s: &mut StateVector, path: &Path) -> Result<(), Error> {
    check_path(s, path)?;
    let edges: Vec<usize> = path.edges().map(|e| e.0).collect();
    s.apply_diagonal_fn(|k| {
        let odd = edges.iter().filter(|&&e| digit(k, e) >= 3).count() % 2 == 1;
        Complex64::new(if odd { -1.0 } else { 1.0 }, 0.0)
    });
    Ok(())
}

/// Sign `±1` of the `W_Λ` chain on one configuration.
#[inline]
pub fn lambda_parity(key: u64, edges: &[usize]) -> f64 {
    if edges.iter().filter(|&&e| digit(key, e) >= 3).count() % 2 == 1 {
        -1.0
    } else {
        1.0
    }
}

/// Chain weight as a function of the path holonomy.
///
/// Standard weights are `ω^k + ω^{-k}` on `c^k`; primed weights are
/// `i(ω^k − ω^{-k})` scaled so that `c ↦ 1`. Reflections get weight 0.
pub fn phi_weight(flavor: Flavor, holonomy: GroupElement) -> f64 {
    if holonomy.is_reflection() {
        return 0.0;
    }
    let k = holonomy.c_exp() as i32;
    let w = omega();
    match flavor {
        Flavor::Standard => (w.powi(k) + w.powi(-k)).re,
        Flavor::Primed => {
            let raw = Complex64::i() * (w.powi(k) - w.powi(-k));
            let unit = (Complex64::i() * (w - w.conj())).re;
            raw.re / unit
        }
    }
}

fn phi_weights(flavor: Flavor) -> [f64; ORDER] {
    GroupElement::ALL.map(|g| {
        let x = phi_weight(flavor, g);
        if x.abs() < 1e-12 {
            0.0
        } else {
            x.round()
        }
    })
}

/// Diagonal Φ chain weighted by the holonomy along `path`; renormalizes and
/// returns `‖W s‖ / ‖s‖`.
pub fn w_phi_chain(s: &mut StateVector, path: &Path, flavor: Flavor) -> Result<f64, Error> {
    check_path(s, path)?;
    let weights = phi_weights(flavor);
    let before = s.norm();
    s.apply_diagonal_fn(|k| Complex64::new(weights[holonomy(k, path).index()], 0.0));
    renormalize(s, before)
}

/// Coefficients of `U(v) = T_e/3 − (2/3)(ω T_c + ω² T_{c²})`.
pub fn u_coefficients() -> [Complex64; ORDER] {
    let w = omega();
    let mut c = [Complex64::default(); ORDER];
    c[GroupElement::E.index()] = Complex64::new(1.0 / 3.0, 0.0);
    c[GroupElement::C.index()] = -2.0 / 3.0 * w;
    c[GroupElement::C2.index()] = -2.0 / 3.0 * w * w;
    c
}

pub fn u_vertex(qd: &QuantumDouble, s: &mut StateVector, v: VertexId) -> Result<(), Error> {
    if !s.same_lattice(qd.lattice()) {
        return Err(Error::LatticeMismatch);
    }
    qd.gauge(v)?.apply_combination(s, &u_coefficients());
    Ok(())
}

/// Probabilities of the joint charge `(1, Λ, Φ)` of two vertices.
pub fn pair_charge_probabilities(qd: &QuantumDouble, s: &StateVector, v1: VertexId, v2: VertexId) -> Result<[f64; 3], Error> {
    if v1 == v2 {
        return Err(Error::SameVertex(v1.0));
    }
    Ok(qd.region(&[v1, v2])?.charge_probabilities(s))
}

/// Fusion-channel measurement of the pair `(v1, v2)`.
pub fn pair_charge_measure<R: Rng + ?Sized>(
    qd: &QuantumDouble,
    s: &mut StateVector,
    v1: VertexId,
    v2: VertexId,
    rng: &mut R,
) -> Result<(ChargeType, f64), Error> {
    if v1 == v2 {
        return Err(Error::SameVertex(v1.0));
    }
    if !s.same_lattice(qd.lattice()) {
        return Err(Error::LatticeMismatch);
    }
    qd.region(&[v1, v2])?.measure_charge(s, rng)
}

/// A pair of charges created along a path.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnyonPair {
    pub kind: ChargeType,
    pub v_left: VertexId,
    pub v_right: VertexId,
    pub path: Path,
    pub flavor: Flavor,
}

impl AnyonPair {
    pub fn new(kind: ChargeType, path: Path, flavor: Flavor) -> Result<Self, Error> {
        match (kind, flavor) {
            (ChargeType::Trivial, _) => return Err(Error::Unsupported("pairs of trivial charges".into())),
            (ChargeType::Lambda, Flavor::Primed) => return Err(Error::Unsupported("primed Λ chains".into())),
            _ => {}
        }
        Ok(Self { kind, v_left: path.start(), v_right: path.end(), path, flavor })
    }

    /// Applies the creating chain; returns the norm ratio.
    pub fn create(&self, s: &mut StateVector) -> Result<f64, Error> {
        match self.kind {
            ChargeType::Lambda => w_lambda_chain(s, &self.path).map(|_| 1.0),
            _ => w_phi_chain(s, &self.path, self.flavor),
        }
    }
}

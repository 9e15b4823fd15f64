//! Logical qubits stored in vertex charges and the gate set acting on them.
//!
//! Three encodings are supported:
//!
//! * `LambdaOnly`: `|0⟩` is the vacuum on two vertices, `|1⟩` a Λ pair
//!   created along the path between them.
//! * `PhiPair`: two Φ pairs `(v1,v4)` and `(v2,v3)`; `|0⟩` has both pairs in
//!   the trivial fusion channel, `|1⟩` adds a Λ chain from `v1` to `v2` so
//!   both pairs fuse to Λ.
//! * `Strong`: as `PhiPair` for `|0⟩`, while `|1⟩` uses primed Φ chains.
//!   The two states agree on every vertex-local measurement.
//!
//! Logical `X` is the Λ chain from `v1` to `v2` (followed by `U(v)` at both
//! ends for `Strong`). Every X-diagonal gate is built from that operator.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_complex::Complex64;
use rand::Rng;
use rustc_hash::FxHashMap;
use serde::{Deserialize, Serialize};

use crate::anyons::{lambda_parity, pair_charge_measure, u_vertex, w_lambda_chain, w_phi_chain, Flavor};
use crate::double::{ChargeType, QuantumDouble};
use crate::lattice::{EdgeId, Lattice, Path, VertexId};
use crate::state::{sample_index, StateVector};
use crate::Error;

/// Repeat-until-success attempts allowed before giving up.
pub const MAX_RUS_ROUNDS: usize = 64;

const GROUND_TOL: f64 = 1e-9;
const DETERMINISTIC: f64 = 1e-14;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EncodingKind {
    #[serde(rename = "lambda")]
    LambdaOnly,
    #[serde(rename = "phipair")]
    PhiPair,
    Strong,
}

impl FromStr for EncodingKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "lambda" => Ok(EncodingKind::LambdaOnly),
            "phipair" => Ok(EncodingKind::PhiPair),
            "strong" => Ok(EncodingKind::Strong),
            _ => Err(Error::Parse(format!("unknown encoding `{s}`"))),
        }
    }
}

impl fmt::Display for EncodingKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EncodingKind::LambdaOnly => "lambda",
            EncodingKind::PhiPair => "phipair",
            EncodingKind::Strong => "strong",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Layout {
    Lambda { v1: VertexId, v2: VertexId, path: Path },
    Pairs { v: [VertexId; 4], c14: Path, c23: Path, c12: Path },
}

/// Placement of one logical qubit on the lattice.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LogicalQubit {
    kind: EncodingKind,
    layout: Layout,
    separation: usize,
}

impl LogicalQubit {
    /// Λ-only qubit on `v1`, `v2` joined by the L-shaped path between them.
    pub fn lambda(lat: &Lattice, v1: VertexId, v2: VertexId) -> Result<Self, Error> {
        let path = lat.path_between(v1, v2)?;
        let separation = path.len();
        Ok(Self { kind: EncodingKind::LambdaOnly, layout: Layout::Lambda { v1, v2, path }, separation })
    }

    /// Pair-based qubit on `[v1, v2, v3, v4]`: pairs `(v1,v4)` and `(v2,v3)`,
    /// logical X along `v1 → v2`.
    pub fn pairs(kind: EncodingKind, lat: &Lattice, v: [VertexId; 4]) -> Result<Self, Error> {
        if kind == EncodingKind::LambdaOnly {
            return Err(Error::Unsupported("pair layout for a Λ-only qubit".into()));
        }
        let c14 = lat.path_between(v[0], v[3])?;
        let c23 = lat.path_between(v[1], v[2])?;
        let c12 = lat.path_between(v[0], v[1])?;
        Self::with_paths(kind, v, c14, c23, c12)
    }

    /// Pair-based qubit with explicit chains.
    pub fn with_paths(kind: EncodingKind, v: [VertexId; 4], c14: Path, c23: Path, c12: Path) -> Result<Self, Error> {
        if kind == EncodingKind::LambdaOnly {
            return Err(Error::Unsupported("pair layout for a Λ-only qubit".into()));
        }
        let ends = |p: &Path, a: VertexId, b: VertexId| (p.start(), p.end()) == (a, b);
        if !(ends(&c14, v[0], v[3]) && ends(&c23, v[1], v[2]) && ends(&c12, v[0], v[1])) {
            return Err(Error::InvalidPath("chains do not join the declared vertices".into()));
        }
        let distinct: BTreeSet<_> = v.iter().collect();
        if distinct.len() != 4 {
            return Err(Error::InvalidConfig("pair qubit needs four distinct vertices".into()));
        }
        let separation = c12.len();
        Ok(Self { kind, layout: Layout::Pairs { v, c14, c23, c12 }, separation })
    }

    /// Qubit on the two-row window with bottom-left vertex `(row, col)`
    /// spanning columns `col..=col+l`.
    ///
    /// Pair qubits put `v4 = (row, col)`, `v1 = (row+1, col)` on the left and
    /// `v3 = (row, col+l)`, `v2 = (row+1, col+l)` on the right, so both pairs
    /// are single vertical spins and the logical X runs along the top row.
    pub fn strip(kind: EncodingKind, lat: &Lattice, row: usize, col: usize, l: usize) -> Result<Self, Error> {
        if l == 0 {
            return Err(Error::InvalidConfig("separation must be positive".into()));
        }
        match kind {
            EncodingKind::LambdaOnly => Self::lambda(lat, lat.vertex(row, col)?, lat.vertex(row, col + l)?),
            _ => {
                let v = [lat.vertex(row + 1, col)?, lat.vertex(row + 1, col + l)?, lat.vertex(row, col + l)?, lat.vertex(row, col)?];
                Self::pairs(kind, lat, v)
            }
        }
    }

    pub fn kind(&self) -> EncodingKind {
        self.kind
    }

    pub fn layout(&self) -> &Layout {
        &self.layout
    }

    /// Length of the logical-X chain.
    pub fn separation(&self) -> usize {
        self.separation
    }

    pub fn vertices(&self) -> Vec<VertexId> {
        match &self.layout {
            Layout::Lambda { v1, v2, .. } => vec![*v1, *v2],
            Layout::Pairs { v, .. } => v.to_vec(),
        }
    }

    pub fn x_path(&self) -> &Path {
        match &self.layout {
            Layout::Lambda { path, .. } => path,
            Layout::Pairs { c12, .. } => c12,
        }
    }

    /// Endpoints of the logical-X chain.
    pub fn x_endpoints(&self) -> (VertexId, VertexId) {
        (self.x_path().start(), self.x_path().end())
    }

    /// Spins touched by the logical X operator.
    pub fn x_support(&self, lat: &Lattice) -> Result<BTreeSet<EdgeId>, Error> {
        let mut edges: BTreeSet<EdgeId> = self.x_path().edges().collect();
        if self.kind == EncodingKind::Strong {
            let (a, b) = self.x_endpoints();
            for v in [a, b] {
                edges.extend(lat.incident_edges(v)?.iter().map(|&(e, _)| e));
            }
        }
        Ok(edges)
    }

    /// Every spin the encoding or the gates act on.
    pub fn support_edges(&self, lat: &Lattice) -> Result<BTreeSet<EdgeId>, Error> {
        let mut edges = self.x_support(lat)?;
        if let Layout::Pairs { c14, c23, .. } = &self.layout {
            edges.extend(c14.edges());
            edges.extend(c23.edges());
        }
        Ok(edges)
    }

    fn x_edges(&self) -> Vec<usize> {
        self.x_path().edges().map(|e| e.0).collect()
    }
}

fn encode_raw(qb: &LogicalQubit, s: &mut StateVector, bit: u8) -> Result<(), Error> {
    match &qb.layout {
        Layout::Lambda { path, .. } => {
            if bit == 1 {
                w_lambda_chain(s, path)?;
            }
        }
        Layout::Pairs { c14, c23, c12, .. } => {
            let flavor = if qb.kind == EncodingKind::Strong && bit == 1 { Flavor::Primed } else { Flavor::Standard };
            w_phi_chain(s, c14, flavor)?;
            w_phi_chain(s, c23, flavor)?;
            if bit == 1 {
                w_lambda_chain(s, c12)?;
            }
        }
    }
    Ok(())
}

/// Phase `φ` with `X|0⟩ = φ|1⟩` for the raw chain encodings.
fn x_phase(qd: &QuantumDouble, qb: &LogicalQubit, ground: &StateVector) -> Result<Complex64, Error> {
    let mut zero = ground.clone();
    encode_raw(qb, &mut zero, 0)?;
    zero.normalize()?;
    let mut one = ground.clone();
    encode_raw(qb, &mut one, 1)?;
    one.normalize()?;
    apply_x(qd, qb, &mut zero)?;
    let ip = one.inner_product(&zero)?;
    if (ip.norm() - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidConfig(format!("logical X does not map |0⟩ onto |1⟩ (overlap {:.3e})", ip.norm())));
    }
    Ok(ip / ip.norm())
}

fn apply_x(qd: &QuantumDouble, qb: &LogicalQubit, s: &mut StateVector) -> Result<(), Error> {
    w_lambda_chain(s, qb.x_path())?;
    if qb.kind == EncodingKind::Strong {
        let (a, b) = qb.x_endpoints();
        u_vertex(qd, s, a)?;
        u_vertex(qd, s, b)?;
    }
    Ok(())
}

/// Result of the repeat-until-success Hadamard.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RusOutcome {
    /// Attempts until success; geometric with success probability 1/2.
    pub rounds: usize,
    /// Entangle-and-measure gadgets executed, always `2·rounds − 1`.
    pub gadgets: usize,
    /// Qubit that holds the output.
    pub output: usize,
}

/// Matrix of an operation restricted to the encoded basis.
#[derive(Clone, Debug, PartialEq)]
pub struct CodeSpaceMatrix {
    /// `m[i][j] = ⟨i| op |j⟩`; bit `q` of a basis index is qubit `q`.
    pub m: Vec<Vec<Complex64>>,
    /// Largest weight of `op|j⟩` outside the code space.
    pub leakage: f64,
}

type M2 = [[Complex64; 2]; 2];

fn m2(a: [[f64; 2]; 2]) -> M2 {
    a.map(|r| r.map(|x| Complex64::new(x, 0.0)))
}

fn m2_mul(a: &M2, b: &M2) -> M2 {
    let mut c = [[Complex64::default(); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            c[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    c
}

/// `Some(φ)` when `a = φ·b` with `|φ| = 1`.
fn phase_relation(a: &M2, b: &M2) -> Option<Complex64> {
    let mut num = Complex64::default();
    for i in 0..2 {
        for j in 0..2 {
            num += b[i][j].conj() * a[i][j];
        }
    }
    let phi = num / 2.0;
    let dev: f64 = (0..4).map(|k| (a[k / 2][k % 2] - phi * b[k / 2][k % 2]).norm()).sum();
    ((phi.norm() - 1.0).abs() < 1e-9 && dev < 1e-9).then_some(phi)
}

type ZWeights = (Arc<Vec<StateVector>>, Vec<usize>, Vec<Complex64>, [f64; 3]);

/// Register of logical qubits sharing one lattice state.
#[derive(Clone, Debug)]
pub struct CodeRegister {
    qd: Arc<QuantumDouble>,
    qubits: Vec<LogicalQubit>,
    ground: Arc<StateVector>,
    state: StateVector,
    encoded: Vec<bool>,
    one_phase: Vec<Complex64>,
    basis: FxHashMap<u64, Arc<Vec<StateVector>>>,
}

impl CodeRegister {
    /// Checks the supports are disjoint and starts from the ground state.
    pub fn new(lat: Lattice, qubits: Vec<LogicalQubit>) -> Result<Self, Error> {
        let mut seen_v = BTreeSet::new();
        let mut seen_e = BTreeSet::new();
        for (i, q) in qubits.iter().enumerate() {
            for v in q.vertices() {
                lat.check_vertex(v)?;
                if !seen_v.insert(v) {
                    return Err(Error::OverlappingSupports(format!("vertex {} reused by qubit {i}", v.0)));
                }
            }
            for e in q.support_edges(&lat)? {
                if !seen_e.insert(e) {
                    return Err(Error::OverlappingSupports(format!("edge {} reused by qubit {i}", e.0)));
                }
            }
        }
        let qd = QuantumDouble::new(lat);
        let ground = qd.ground_state()?;
        // Strong |1⟩ is rephased so that logical X acts as σx on the encoded basis.
        let one_phase = qubits
            .iter()
            .map(|q| match q.kind {
                EncodingKind::Strong => x_phase(&qd, q, &ground),
                _ => Ok(Complex64::new(1.0, 0.0)),
            })
            .collect::<Result<_, _>>()?;
        Ok(Self {
            one_phase,
            qd: Arc::new(qd),
            encoded: vec![false; qubits.len()],
            qubits,
            state: ground.clone(),
            ground: Arc::new(ground),
            basis: FxHashMap::default(),
        })
    }

    pub fn qd(&self) -> &QuantumDouble {
        &self.qd
    }

    pub fn lattice(&self) -> &Lattice {
        self.qd.lattice()
    }

    pub fn state(&self) -> &StateVector {
        &self.state
    }

    /// Replaces the lattice state; encoding flags are left unchanged.
    pub fn set_state(&mut self, s: StateVector) -> Result<(), Error> {
        if !s.same_lattice(self.lattice()) {
            return Err(Error::LatticeMismatch);
        }
        self.state = s;
        Ok(())
    }

    pub fn state_mut(&mut self) -> &mut StateVector {
        &mut self.state
    }

    pub fn num_qubits(&self) -> usize {
        self.qubits.len()
    }

    pub fn qubit(&self, q: usize) -> Result<&LogicalQubit, Error> {
        self.qubits.get(q).ok_or(Error::NoSuchQubit(q))
    }

    pub fn is_encoded(&self, q: usize) -> bool {
        self.encoded.get(q).copied().unwrap_or(false)
    }

    /// Fresh copy in the ground state with nothing encoded.
    pub fn reset(&mut self) {
        self.state = (*self.ground).clone();
        self.encoded.iter_mut().for_each(|e| *e = false);
    }

    fn encoded_qubit(&self, q: usize) -> Result<&LogicalQubit, Error> {
        let qb = self.qubit(q)?;
        if !self.encoded[q] {
            return Err(Error::Unencoded(q));
        }
        Ok(qb)
    }

    /// True when every vertex of qubit `q` carries trivial charge.
    pub fn support_in_ground_state(&self, q: usize) -> Result<bool, Error> {
        for v in self.qubit(q)?.vertices() {
            let p = self.qd.charge_probabilities(&self.state, v)?;
            if p[ChargeType::Trivial.index()] < 1.0 - GROUND_TOL {
                return Ok(false);
            }
        }
        Ok(true)
    }

    fn encode_into(&self, s: &mut StateVector, q: usize, bit: u8) -> Result<(), Error> {
        encode_raw(self.qubit(q)?, s, bit)?;
        if bit == 1 && self.one_phase[q] != Complex64::new(1.0, 0.0) {
            s.scale(self.one_phase[q]);
        }
        Ok(())
    }

    /// Encodes `bit` on a qubit whose support is in the ground state.
    pub fn encode(&mut self, q: usize, bit: u8) -> Result<(), Error> {
        if bit > 1 {
            return Err(Error::InvalidConfig(format!("logical bit {bit}")));
        }
        if !self.support_in_ground_state(q)? {
            return Err(Error::NotGroundState(q));
        }
        let mut s = self.state.clone();
        self.encode_into(&mut s, q, bit)?;
        s.normalize()?;
        self.state = s;
        self.encoded[q] = true;
        Ok(())
    }

    /// Encodes `α|0⟩ + β|1⟩` (normalized) on a qubit in the ground state.
    pub fn prepare(&mut self, q: usize, alpha: Complex64, beta: Complex64) -> Result<(), Error> {
        if !self.support_in_ground_state(q)? {
            return Err(Error::NotGroundState(q));
        }
        let mut s0 = self.state.clone();
        self.encode_into(&mut s0, q, 0)?;
        s0.normalize()?;
        let mut s1 = self.state.clone();
        self.encode_into(&mut s1, q, 1)?;
        s1.normalize()?;
        let mut s = StateVector::combine(&[(alpha, &s0), (beta, &s1)])?;
        s.normalize()?;
        self.state = s;
        self.encoded[q] = true;
        Ok(())
    }

    fn apply_x_to(&self, s: &mut StateVector, q: usize) -> Result<(), Error> {
        apply_x(&self.qd, self.qubit(q)?, s)
    }

    fn x_image(&self, q: usize) -> Result<StateVector, Error> {
        let mut s = self.state.clone();
        self.apply_x_to(&mut s, q)?;
        Ok(s)
    }

    fn x_is_diagonal(&self, q: usize) -> bool {
        self.qubits[q].kind != EncodingKind::Strong
    }

    pub fn logical_x(&mut self, q: usize) -> Result<(), Error> {
        self.encoded_qubit(q)?;
        apply_x(&self.qd, &self.qubits[q], &mut self.state)
    }

    /// Encoded basis states for the current encoding mask; unencoded qubits stay in vacuum.
    fn basis(&mut self) -> Result<Arc<Vec<StateVector>>, Error> {
        let mask = self.encoded.iter().enumerate().fold(0u64, |m, (i, &e)| m | ((e as u64) << i));
        if let Some(b) = self.basis.get(&mask) {
            return Ok(b.clone());
        }
        let active: Vec<usize> = (0..self.qubits.len()).filter(|&q| self.encoded[q]).collect();
        let mut states = Vec::with_capacity(1 << active.len());
        for x in 0..(1usize << self.qubits.len()) {
            if (0..self.qubits.len()).any(|q| !self.encoded[q] && (x >> q) & 1 == 1) {
                continue;
            }
            let mut s = (*self.ground).clone();
            for &q in &active {
                self.encode_into(&mut s, q, ((x >> q) & 1) as u8)?;
            }
            s.normalize()?;
            states.push(s);
        }
        let b = Arc::new(states);
        self.basis.insert(mask, b.clone());
        Ok(b)
    }

    /// Indices into `basis()` paired with the full basis label.
    fn basis_labels(&self) -> Vec<usize> {
        (0..(1usize << self.qubits.len()))
            .filter(|&x| (0..self.qubits.len()).all(|q| self.encoded[q] || (x >> q) & 1 == 0))
            .collect()
    }

    /// Overlaps with the encoded basis and the weights of bit `q` being 0, 1
    /// or outside the code space.
    fn z_weights(&mut self, q: usize) -> Result<ZWeights, Error> {
        let basis = self.basis()?;
        let labels = self.basis_labels();
        let n = self.state.norm_sqr();
        let overlaps: Vec<Complex64> =
            basis.iter().map(|b| b.inner_product(&self.state)).collect::<Result<_, _>>()?;
        let mut p = [0.0f64; 3];
        for (&x, c) in labels.iter().zip(&overlaps) {
            p[(x >> q) & 1] += c.norm_sqr() / n;
        }
        p[2] = (1.0 - p[0] - p[1]).max(0.0);
        Ok((basis, labels, overlaps, p))
    }

    /// Projective readout onto the encoded basis states with bit `q` fixed.
    pub fn project_logical_z<R: Rng + ?Sized>(&mut self, q: usize, rng: &mut R) -> Result<u8, Error> {
        self.encoded_qubit(q)?;
        let (basis, labels, overlaps, p) = self.z_weights(q)?;
        let i = sample_index(&p, rng);
        if i == 2 {
            return Err(Error::Corruption { qubit: q, detail: format!("state left the code space (weight {:.3e})", p[2]) });
        }
        let mut post = StateVector::zero(self.lattice())?;
        for ((&x, c), b) in labels.iter().zip(&overlaps).zip(basis.iter()) {
            if (x >> q) & 1 == i {
                post.add_scaled(b, *c)?;
            }
        }
        post.normalize()?;
        self.state = post;
        Ok(i as u8)
    }

    /// Logical Z measurement.
    ///
    /// Λ-only qubits read the charge at `v1`; Φ-pair qubits fuse `(v1, v4)`.
    /// Strong qubits are read out by projecting onto the encoded basis, since
    /// no charge measurement separates their logical states.
    pub fn measure_logical_z<R: Rng + ?Sized>(&mut self, q: usize, rng: &mut R) -> Result<u8, Error> {
        let qb = self.encoded_qubit(q)?.clone();
        let (charge, _) = match &qb.layout {
            Layout::Lambda { v1, .. } => self.qd.measure_charge(&mut self.state, *v1, rng)?,
            Layout::Pairs { v, .. } if qb.kind == EncodingKind::PhiPair => {
                pair_charge_measure(&self.qd, &mut self.state, v[0], v[3], rng)?
            }
            Layout::Pairs { .. } => return self.project_logical_z(q, rng),
        };
        match charge {
            ChargeType::Trivial => Ok(0),
            ChargeType::Lambda => Ok(1),
            ChargeType::Phi => Err(Error::Corruption { qubit: q, detail: "Φ fusion outcome".into() }),
        }
    }

    /// Measures `(I ± X)/2`; returns `+1` or `−1`.
    pub fn measure_logical_x<R: Rng + ?Sized>(&mut self, q: usize, rng: &mut R) -> Result<i8, Error> {
        self.encoded_qubit(q)?;
        let n = self.state.norm_sqr();
        if self.x_is_diagonal(q) {
            let edges = self.qubits[q].x_edges();
            let ex = self.state.diagonal_expectation(|k| Complex64::new(lambda_parity(k, &edges), 0.0)).re / n;
            let plus = ((1.0 + ex) / 2.0).clamp(0.0, 1.0);
            let i = sample_index(&[plus, 1.0 - plus], rng);
            let (sign, prob) = if i == 0 { (1.0, plus) } else { (-1.0, 1.0 - plus) };
            if 1.0 - prob > DETERMINISTIC {
                self.state.apply_diagonal_fn(|k| {
                    Complex64::new(if lambda_parity(k, &edges) == sign { 1.0 } else { 0.0 }, 0.0)
                });
                self.state.normalize()?;
            }
            Ok(sign as i8)
        } else {
            let xs = self.x_image(q)?;
            let ex = self.state.inner_product(&xs)?.re / n;
            let plus = ((1.0 + ex) / 2.0).clamp(0.0, 1.0);
            let i = sample_index(&[plus, 1.0 - plus], rng);
            let (sign, prob) = if i == 0 { (1.0, plus) } else { (-1.0, 1.0 - plus) };
            if 1.0 - prob > DETERMINISTIC {
                let half = Complex64::new(0.5, 0.0);
                let mut s = StateVector::combine(&[(half, &self.state), (half * sign, &xs)])?;
                s.normalize()?;
                self.state = s;
            }
            Ok(sign as i8)
        }
    }

    /// `U_θ = |+⟩⟨+| + e^{iθ}|−⟩⟨−|`.
    pub fn phase_gate(&mut self, q: usize, theta: f64) -> Result<(), Error> {
        self.encoded_qubit(q)?;
        let phase = Complex64::from_polar(1.0, theta);
        if self.x_is_diagonal(q) {
            let edges = self.qubits[q].x_edges();
            self.state.apply_diagonal_fn(|k| if lambda_parity(k, &edges) > 0.0 { Complex64::new(1.0, 0.0) } else { phase });
        } else {
            let xs = self.x_image(q)?;
            let one = Complex64::new(1.0, 0.0);
            self.state = StateVector::combine(&[((one + phase) / 2.0, &self.state), ((one - phase) / 2.0, &xs)])?;
        }
        Ok(())
    }

    /// `K = |+⟩⟨+|_a ⊗ I + |−⟩⟨−|_a ⊗ X_b = (I + X_a + X_b − X_a X_b) / 2`.
    pub fn entangle_k(&mut self, qa: usize, qb: usize) -> Result<(), Error> {
        if qa == qb {
            return Err(Error::OverlappingSupports(format!("qubit {qa} used twice")));
        }
        self.encoded_qubit(qa)?;
        self.encoded_qubit(qb)?;
        if self.x_is_diagonal(qa) && self.x_is_diagonal(qb) {
            let ea = self.qubits[qa].x_edges();
            let eb = self.qubits[qb].x_edges();
            self.state.apply_diagonal_fn(|k| {
                let (sa, sb) = (lambda_parity(k, &ea), lambda_parity(k, &eb));
                Complex64::new((1.0 + sa + sb - sa * sb) / 2.0, 0.0)
            });
        } else {
            let xa = self.x_image(qa)?;
            let xb = self.x_image(qb)?;
            let mut xab = xa.clone();
            self.apply_x_to(&mut xab, qb)?;
            let h = Complex64::new(0.5, 0.0);
            self.state = StateVector::combine(&[(h, &self.state), (h, &xa), (h, &xb), (-h, &xab)])?;
        }
        Ok(())
    }

    /// Measurement-based Hadamard on `qa` using the vacuum qubit `aux`.
    ///
    /// Each gadget entangles the live qubit with a fresh `|0⟩`, measures the
    /// live qubit in Z and hands the state over. Outcome 1 leaves an extra Z,
    /// so the accumulated frame is tracked and corrected with logical X until
    /// it equals H. The measured qubit is reset to `|0⟩` and becomes the next
    /// auxiliary. The output global phase is removed.
    ///
    /// `aux` must either be unencoded with a vacuum support or hold `|0⟩`.
    pub fn hadamard_rus<R: Rng + ?Sized>(&mut self, qa: usize, aux: usize, rng: &mut R) -> Result<RusOutcome, Error> {
        if qa == aux {
            return Err(Error::OverlappingSupports(format!("qubit {qa} used twice")));
        }
        self.encoded_qubit(qa)?;
        if self.is_encoded(aux) {
            if self.z_weights(aux)?.3[0] < 1.0 - 1e-9 {
                return Err(Error::NotGroundState(aux));
            }
        } else if self.support_in_ground_state(aux)? {
            self.encode(aux, 0)?;
        } else {
            return Err(Error::NotGroundState(aux));
        }

        let s = std::f64::consts::FRAC_1_SQRT_2;
        let h = m2([[s, s], [s, -s]]);
        let zh = m2([[s, s], [-s, s]]);
        let x = m2([[0.0, 1.0], [1.0, 0.0]]);
        let z = m2([[1.0, 0.0], [0.0, -1.0]]);
        let id = m2([[1.0, 0.0], [0.0, 1.0]]);

        let (mut live, mut spare) = (qa, aux);
        let mut frame = id;
        let mut gadgets = 0;
        loop {
            if gadgets >= 2 * MAX_RUS_ROUNDS - 1 {
                return Err(Error::RoundLimit(MAX_RUS_ROUNDS));
            }
            self.entangle_k(live, spare)?;
            let bit = self.measure_logical_z(live, rng)?;
            gadgets += 1;
            frame = m2_mul(if bit == 0 { &h } else { &zh }, &frame);
            if bit == 1 {
                self.logical_x(live)?;
            }
            std::mem::swap(&mut live, &mut spare);

            let fixed = m2_mul(&x, &frame);
            if let Some(phi) = phase_relation(&frame, &h) {
                self.state.scale(phi.conj());
                break;
            }
            if let Some(phi) = phase_relation(&fixed, &h) {
                self.logical_x(live)?;
                self.state.scale(phi.conj());
                break;
            }
            let resumable = |m: &M2| [id, zh, z].iter().any(|t| phase_relation(m, t).is_some());
            if !resumable(&frame) {
                debug_assert!(resumable(&fixed));
                self.logical_x(live)?;
                frame = fixed;
            }
        }
        Ok(RusOutcome { rounds: gadgets.div_ceil(2), gadgets, output: live })
    }

    /// Measures `T_t` at both vertices of each pair and returns the products
    /// for `(v1, v4)` and `(v2, v3)`.
    pub fn locc_parity_test<R: Rng + ?Sized>(&mut self, q: usize, rng: &mut R) -> Result<(i8, i8), Error> {
        let qb = self.encoded_qubit(q)?;
        let v = match &qb.layout {
            Layout::Pairs { v, .. } => *v,
            Layout::Lambda { .. } => return Err(Error::Unsupported("parity test on a Λ-only qubit".into())),
        };
        let mut out = [0i8; 4];
        for (slot, vertex) in out.iter_mut().zip(v) {
            *slot = self.qd.measure_tt(&mut self.state, vertex, rng)?.0;
        }
        Ok((out[0] * out[3], out[1] * out[2]))
    }

    /// Matrix of `op` on the span of the encoded basis of all qubits.
    pub fn code_space_matrix(&self, op: impl Fn(&mut CodeRegister) -> Result<(), Error>) -> Result<CodeSpaceMatrix, Error> {
        let mut probe = self.clone();
        probe.reset();
        probe.encoded.iter_mut().for_each(|e| *e = true);
        let basis = probe.basis()?;
        let dim = basis.len();
        let mut m = vec![vec![Complex64::default(); dim]; dim];
        let mut leakage: f64 = 0.0;
        for j in 0..dim {
            let mut r = probe.clone();
            r.state = basis[j].clone();
            op(&mut r)?;
            let n = r.state.norm_sqr();
            let mut kept = 0.0;
            for i in 0..dim {
                m[i][j] = basis[i].inner_product(&r.state)?;
                kept += m[i][j].norm_sqr();
            }
            leakage = leakage.max((n - kept).max(0.0));
        }
        Ok(CodeSpaceMatrix { m, leakage })
    }

    /// Encoded basis state `|x⟩` of all qubits.
    pub fn basis_state(&self, x: usize) -> Result<StateVector, Error> {
        let mut probe = self.clone();
        probe.reset();
        probe.encoded.iter_mut().for_each(|e| *e = true);
        let basis = probe.basis()?;
        basis.get(x).cloned().ok_or(Error::NoSuchQubit(x))
    }
}

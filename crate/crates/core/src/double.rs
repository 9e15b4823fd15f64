//! Gauge operators, charge and flux projectors, the ground state and
//! syndrome measurement for the D(S3) model.

use std::fmt;

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::group::{GroupElement, Irrep, ORDER};
use crate::lattice::{Attachment, Direction, Lattice, Path, PlaquetteId, VertexId};
use crate::state::{digit, sample_index, LocalPermutation, StateVector};
use crate::Error;

/// Largest ground-state support the builder will attempt.
pub const MAX_GROUND_STATE_ENTRIES: usize = 2_000_000;

/// Branches whose total weight falls below this are treated as absent.
const DETERMINISTIC: f64 = 1e-14;

const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Vertex charge labels, one per irrep.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ChargeType {
    #[serde(rename = "1")]
    Trivial,
    #[serde(rename = "L")]
    Lambda,
    #[serde(rename = "P")]
    Phi,
}

impl ChargeType {
    pub const ALL: [ChargeType; 3] = [ChargeType::Trivial, ChargeType::Lambda, ChargeType::Phi];

    pub const fn index(self) -> usize {
        self as usize
    }

    pub const fn irrep(self) -> Irrep {
        match self {
            ChargeType::Trivial => Irrep::Trivial,
            ChargeType::Lambda => Irrep::Sign,
            ChargeType::Phi => Irrep::TwoDim,
        }
    }

    pub const fn label(self) -> &'static str {
        match self {
            ChargeType::Trivial => "1",
            ChargeType::Lambda => "L",
            ChargeType::Phi => "P",
        }
    }
}

impl From<Irrep> for ChargeType {
    fn from(a: Irrep) -> Self {
        match a {
            Irrep::Trivial => ChargeType::Trivial,
            Irrep::Sign => ChargeType::Lambda,
            Irrep::TwoDim => ChargeType::Phi,
        }
    }
}

impl fmt::Display for ChargeType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Outcome record of a full syndrome measurement.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Syndrome {
    pub vertices: Vec<ChargeType>,
    pub plaquettes: Vec<bool>,
}

impl Syndrome {
    pub fn count(&self, charge: ChargeType) -> usize {
        self.vertices.iter().filter(|&&c| c == charge).count()
    }

    pub fn vertices_with(&self, charge: ChargeType) -> Vec<VertexId> {
        self.vertices
            .iter()
            .enumerate()
            .filter(|(_, &c)| c == charge)
            .map(|(i, _)| VertexId(i))
            .collect()
    }

    /// True when no charge or flux is present.
    pub fn is_vacuum(&self) -> bool {
        self.vertices.iter().all(|&c| c == ChargeType::Trivial) && self.plaquettes.iter().all(|&f| f)
    }
}

/// Ordered product along a path for one configuration.
#[inline]
pub fn holonomy(key: u64, path: &Path) -> GroupElement {
    path_product(key, path.steps())
}

#[inline]
fn path_product(key: u64, steps: &[(crate::EdgeId, Direction)]) -> GroupElement {
    let mut acc = GroupElement::E;
    for &(e, dir) in steps {
        let g = GroupElement::from_index(digit(key, e.0)).unwrap_or(GroupElement::E);
        acc = acc * if dir == Direction::With { g } else { g.inverse() };
    }
    acc
}

/// The six gauge transformations `T_g` acting jointly on a set of vertices.
#[derive(Clone, Debug)]
pub struct GaugeAction {
    perms: [LocalPermutation; ORDER],
}

impl GaugeAction {
    /// `T_g(v)`: `R_g` on edges pointing into `v`, `L_{g⁻¹}` on edges leaving it.
    pub fn vertex(lat: &Lattice, v: VertexId) -> Result<Self, Error> {
        Self::region(lat, &[v])
    }

    /// `Π_v T_g(v)` over distinct vertices.
    pub fn region(lat: &Lattice, vs: &[VertexId]) -> Result<Self, Error> {
        for (i, v) in vs.iter().enumerate() {
            lat.check_vertex(*v)?;
            if vs[..i].contains(v) {
                return Err(Error::SameVertex(v.0));
            }
        }
        let perms = GroupElement::ALL.map(|g| {
            let mut p = LocalPermutation::identity();
            for &v in vs {
                for &(e, att) in lat.incident_edges(v).expect("checked") {
                    p = match att {
                        Attachment::Head => p.then_edge(e, |h| h * g),
                        Attachment::Tail => p.then_edge(e, |h| g.inverse() * h),
                    };
                }
            }
            p
        });
        Ok(Self { perms })
    }

    pub fn permutation(&self, g: GroupElement) -> &LocalPermutation {
        &self.perms[g.index()]
    }

    pub fn apply(&self, s: &mut StateVector, g: GroupElement) {
        s.apply_permutation(&self.perms[g.index()]);
    }

    /// Replaces `s` by `Σ_g coeffs[g] T_g s`.
    pub fn apply_combination(&self, s: &mut StateVector, coeffs: &[Complex64; ORDER]) {
        let terms: Vec<(Complex64, &LocalPermutation)> =
            GroupElement::ALL.iter().map(|g| (coeffs[g.index()], &self.perms[g.index()])).collect();
        s.apply_combination(&terms);
    }

    /// `⟨s|T_g|s⟩`.
    pub fn expectation(&self, s: &StateVector, g: GroupElement) -> Complex64 {
        s.expectation(&self.perms[g.index()])
    }

    pub fn project_charge(&self, s: &mut StateVector, charge: ChargeType) {
        let coeffs = charge.irrep().projector_coefficients().map(|x| Complex64::new(x, 0.0));
        self.apply_combination(s, &coeffs);
    }

    /// Probabilities of `(1, Λ, Φ)`, computed from gauge expectation values.
    pub fn charge_probabilities(&self, s: &StateVector) -> [f64; 3] {
        let n = s.norm_sqr();
        if n == 0.0 {
            return [0.0; 3];
        }
        // ⟨T_c²⟩ = conj⟨T_c⟩ and the reflections are Hermitian.
        let [c, t, tc, tc2] = s.expectations([GroupElement::C, GroupElement::T, GroupElement::TC, GroupElement::TC2].map(|g| self.permutation(g)));
        let rot = 2.0 * c.re;
        let refl = t.re + tc.re + tc2.re;
        let p = [(n + rot + refl) / 6.0, (n + rot - refl) / 6.0, (2.0 * n - rot) / 3.0];
        p.map(|x| (x / n).clamp(0.0, 1.0))
    }

    /// Born-measures the charge and collapses `s`.
    pub fn measure_charge<R: Rng + ?Sized>(&self, s: &mut StateVector, rng: &mut R) -> Result<(ChargeType, f64), Error> {
        let probs = self.charge_probabilities(s);
        let i = sample_index(&probs, rng);
        let rest: f64 = probs.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, p)| p).sum();
        let charge = ChargeType::ALL[i];
        if rest > DETERMINISTIC {
            self.project_charge(s, charge);
            s.normalize()?;
        }
        Ok((charge, probs[i]))
    }
}

/// A lattice together with its precomputed vertex gauge actions.
#[derive(Clone, Debug)]
pub struct QuantumDouble {
    lat: Lattice,
    gauge: Vec<GaugeAction>,
}

impl QuantumDouble {
    pub fn new(lat: Lattice) -> Self {
        let gauge = lat.vertices().map(|v| GaugeAction::vertex(&lat, v).expect("vertex in range")).collect();
        Self { lat, gauge }
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lat
    }

    pub fn gauge(&self, v: VertexId) -> Result<&GaugeAction, Error> {
        self.lat.check_vertex(v)?;
        Ok(&self.gauge[v.0])
    }

    pub fn region(&self, vs: &[VertexId]) -> Result<GaugeAction, Error> {
        GaugeAction::region(&self.lat, vs)
    }

    fn check(&self, s: &StateVector) -> Result<(), Error> {
        if s.same_lattice(&self.lat) {
            Ok(())
        } else {
            Err(Error::LatticeMismatch)
        }
    }

    /// `T_g(v)`.
    pub fn vertex_op(&self, s: &mut StateVector, v: VertexId, g: GroupElement) -> Result<(), Error> {
        self.check(s)?;
        self.gauge(v)?.apply(s, g);
        Ok(())
    }

    /// `P_A(v)`; the result is left unnormalized.
    pub fn charge_project(&self, s: &mut StateVector, v: VertexId, charge: ChargeType) -> Result<(), Error> {
        self.check(s)?;
        self.gauge(v)?.project_charge(s, charge);
        Ok(())
    }

    pub fn charge_probabilities(&self, s: &StateVector, v: VertexId) -> Result<[f64; 3], Error> {
        self.check(s)?;
        Ok(self.gauge(v)?.charge_probabilities(s))
    }

    pub fn measure_charge<R: Rng + ?Sized>(
        &self,
        s: &mut StateVector,
        v: VertexId,
        rng: &mut R,
    ) -> Result<(ChargeType, f64), Error> {
        self.check(s)?;
        self.gauge(v)?.measure_charge(s, rng)
    }

    /// Whether the counterclockwise boundary product of `p` is trivial in this configuration.
    pub fn flux_is_trivial(&self, key: u64, p: PlaquetteId) -> bool {
        let boundary = self.lat.plaquette_edges(p).expect("plaquette in range");
        path_product(key, boundary).is_identity()
    }

    /// Keeps only configurations with trivial flux through `p`.
    pub fn flux_trivial_project(&self, s: &mut StateVector, p: PlaquetteId) -> Result<(), Error> {
        self.check(s)?;
        self.lat.check_plaquette(p)?;
        s.apply_diagonal_fn(|k| if self.flux_is_trivial(k, p) { ONE } else { Complex64::default() });
        Ok(())
    }

    pub fn flux_trivial_probability(&self, s: &StateVector, p: PlaquetteId) -> Result<f64, Error> {
        self.check(s)?;
        self.lat.check_plaquette(p)?;
        let n = s.norm_sqr();
        if n == 0.0 {
            return Ok(0.0);
        }
        let kept: f64 = s.iter().filter(|&(k, _)| self.flux_is_trivial(k, p)).map(|(_, a)| a.norm_sqr()).sum();
        Ok(kept / n)
    }

    /// Normalized `Π_v P_1(v) |all e⟩`.
    pub fn ground_state(&self) -> Result<StateVector, Error> {
        let expected = (ORDER as f64).powi(self.lat.num_vertices() as i32 - 1);
        if expected > MAX_GROUND_STATE_ENTRIES as f64 {
            return Err(Error::SizeBudget(format!(
                "ground state on {} vertices needs about {expected:.0} amplitudes",
                self.lat.num_vertices()
            )));
        }
        let mut s = StateVector::identity_config(&self.lat)?;
        for g in &self.gauge {
            g.project_charge(&mut s, ChargeType::Trivial);
        }
        s.normalize()?;
        Ok(s)
    }

    /// Measures every vertex charge, then every plaquette flux, collapsing `s`.
    pub fn measure_syndrome<R: Rng + ?Sized>(&self, s: &mut StateVector, rng: &mut R) -> Result<Syndrome, Error> {
        self.check(s)?;
        let mut vertices = Vec::with_capacity(self.lat.num_vertices());
        for g in &self.gauge {
            vertices.push(g.measure_charge(s, rng)?.0);
        }
        let mut plaquettes = Vec::with_capacity(self.lat.num_plaquettes());
        for p in self.lat.plaquette_ids() {
            let prob = self.flux_trivial_probability(s, p)?;
            let trivial = rng.random::<f64>() < prob;
            let rest = if trivial { 1.0 - prob } else { prob };
            if rest > DETERMINISTIC {
                s.apply_diagonal_fn(|k| {
                    if self.flux_is_trivial(k, p) == trivial {
                        ONE
                    } else {
                        Complex64::default()
                    }
                });
                s.normalize()?;
            }
            plaquettes.push(trivial);
        }
        Ok(Syndrome { vertices, plaquettes })
    }

    /// `⟨H⟩ = −Σ_v ⟨P_1(v)⟩ − Σ_p ⟨P_1(p)⟩` for a normalized state.
    pub fn energy(&self, s: &StateVector) -> Result<f64, Error> {
        self.check(s)?;
        let n = s.norm();
        if (n - 1.0).abs() > 1e-6 {
            return Err(Error::NotNormalized(n));
        }
        let mut e = 0.0;
        for g in &self.gauge {
            e -= g.charge_probabilities(s)[ChargeType::Trivial.index()];
        }
        for p in self.lat.plaquette_ids() {
            e -= self.flux_trivial_probability(s, p)?;
        }
        Ok(e)
    }

    /// Probability of outcome +1 for `T_t(v)`.
    pub fn tt_plus_probability(&self, s: &StateVector, v: VertexId) -> Result<f64, Error> {
        self.check(s)?;
        let n = s.norm_sqr();
        if n == 0.0 {
            return Err(Error::ZeroState);
        }
        let t = self.gauge(v)?.expectation(s, GroupElement::T).re;
        Ok(((1.0 + t / n) / 2.0).clamp(0.0, 1.0))
    }

    /// Measures the involution `T_t(v)` and returns `(±1, probability)`.
    pub fn measure_tt<R: Rng + ?Sized>(&self, s: &mut StateVector, v: VertexId, rng: &mut R) -> Result<(i8, f64), Error> {
        let plus = self.tt_plus_probability(s, v)?;
        let i = sample_index(&[plus, 1.0 - plus], rng);
        let (sign, prob) = if i == 0 { (1i8, plus) } else { (-1i8, 1.0 - plus) };
        if 1.0 - prob > DETERMINISTIC {
            let mut coeffs = [Complex64::default(); ORDER];
            coeffs[GroupElement::E.index()] = Complex64::new(0.5, 0.0);
            coeffs[GroupElement::T.index()] = Complex64::new(0.5 * sign as f64, 0.0);
            self.gauge(v)?.apply_combination(s, &coeffs);
            s.normalize()?;
        }
        Ok((sign, prob))
    }

    /// `P′_Λ(v) = (T_e(v) + T_t(v)) / 2`, left unnormalized.
    pub fn modified_lambda_project(&self, s: &mut StateVector, v: VertexId) -> Result<(), Error> {
        self.check(s)?;
        let mut coeffs = [Complex64::default(); ORDER];
        coeffs[GroupElement::E.index()] = Complex64::new(0.5, 0.0);
        coeffs[GroupElement::T.index()] = Complex64::new(0.5, 0.0);
        self.gauge(v)?.apply_combination(s, &coeffs);
        Ok(())
    }
}

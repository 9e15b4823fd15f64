//! Dense reference backend for tiny lattices.
//!
//! Amplitudes live in a flat array of length `6^E` indexed in radix 6 (edge
//! `i` is digit `i`). Every operation works directly from the lattice tables
//! and the group product, so it shares no code path with the sparse engine
//! beyond [`GroupElement`] itself.

use num_complex::Complex64;

use crate::group::{GroupElement, Irrep, ORDER};
use crate::lattice::{Attachment, Direction, EdgeId, Lattice, Path, PlaquetteId, VertexId};
use crate::state::StateVector;
use crate::Error;

/// Largest lattice the dense backend accepts.
pub const MAX_DENSE_EDGES: usize = 5;

#[derive(Clone, Debug, PartialEq)]
pub struct DenseState {
    width: usize,
    amps: Vec<Complex64>,
}

fn digits(mut index: usize, width: usize) -> Vec<usize> {
    let mut d = Vec::with_capacity(width);
    for _ in 0..width {
        d.push(index % ORDER);
        index /= ORDER;
    }
    d
}

fn index_of(d: &[usize]) -> usize {
    d.iter().rev().fold(0, |acc, &x| acc * ORDER + x)
}

fn el(i: usize) -> GroupElement {
    GroupElement::from_index(i).unwrap()
}

impl DenseState {
    pub fn zero(lat: &Lattice) -> Result<Self, Error> {
        let width = lat.num_edges();
        if width > MAX_DENSE_EDGES {
            return Err(Error::SizeBudget(format!("dense backend handles at most {MAX_DENSE_EDGES} edges")));
        }
        Ok(Self { width, amps: vec![Complex64::default(); ORDER.pow(width as u32)] })
    }

    pub fn basis_state(lat: &Lattice, config: &[GroupElement]) -> Result<Self, Error> {
        if config.len() != lat.num_edges() {
            return Err(Error::WidthMismatch { expected: lat.num_edges(), got: config.len() });
        }
        let mut s = Self::zero(lat)?;
        let d: Vec<usize> = config.iter().map(|g| g.index()).collect();
        s.amps[index_of(&d)] = Complex64::new(1.0, 0.0);
        Ok(s)
    }

    pub fn from_sparse(lat: &Lattice, s: &StateVector) -> Result<Self, Error> {
        let mut d = Self::zero(lat)?;
        for (k, a) in s.iter() {
            let cfg = crate::state::unpack(k, lat.num_edges());
            let idx: Vec<usize> = cfg.iter().map(|g| g.index()).collect();
            d.amps[index_of(&idx)] = a;
        }
        Ok(d)
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn amplitude(&self, config: &[GroupElement]) -> Complex64 {
        let d: Vec<usize> = config.iter().map(|g| g.index()).collect();
        self.amps[index_of(&d)]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn normalize(&mut self) -> Result<f64, Error> {
        let n = self.norm_sqr().sqrt();
        if n == 0.0 {
            return Err(Error::ZeroState);
        }
        self.amps.iter_mut().for_each(|a| *a /= n);
        Ok(n)
    }

    pub fn inner_product(&self, other: &Self) -> Complex64 {
        self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum()
    }

    pub fn add_scaled(&mut self, other: &Self, c: Complex64) {
        self.amps.iter_mut().zip(&other.amps).for_each(|(a, b)| *a += c * b);
    }

    pub fn scaled(&self, c: Complex64) -> Self {
        Self { width: self.width, amps: self.amps.iter().map(|a| a * c).collect() }
    }

    /// Largest elementwise deviation from a sparse state on the same lattice.
    pub fn max_abs_diff_sparse(&self, lat: &Lattice, s: &StateVector) -> Result<f64, Error> {
        let other = Self::from_sparse(lat, s)?;
        Ok(self.amps.iter().zip(&other.amps).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max))
    }

    fn map_configs(&self, f: impl Fn(&mut [usize])) -> Self {
        let mut out = vec![Complex64::default(); self.amps.len()];
        for (i, &a) in self.amps.iter().enumerate() {
            if a == Complex64::default() {
                continue;
            }
            let mut d = digits(i, self.width);
            f(&mut d);
            out[index_of(&d)] += a;
        }
        Self { width: self.width, amps: out }
    }

    fn weight_configs(&self, f: impl Fn(&[usize]) -> Complex64) -> Self {
        let amps = self.amps.iter().enumerate().map(|(i, &a)| a * f(&digits(i, self.width))).collect();
        Self { width: self.width, amps }
    }

    pub fn left_mul(&self, e: EdgeId, g: GroupElement) -> Self {
        self.map_configs(|d| d[e.0] = (g * el(d[e.0])).index())
    }

    pub fn right_mul(&self, e: EdgeId, g: GroupElement) -> Self {
        self.map_configs(|d| d[e.0] = (el(d[e.0]) * g).index())
    }

    pub fn diagonal(&self, e: EdgeId, table: &[Complex64; ORDER]) -> Self {
        self.weight_configs(|d| table[d[e.0]])
    }

    /// Gauge transformation at `v`: right multiplication on incoming edges and
    /// left multiplication by the inverse on outgoing ones.
    pub fn vertex_op(&self, lat: &Lattice, v: VertexId, g: GroupElement) -> Self {
        let mut out = self.clone();
        for &(e, att) in lat.incident_edges(v).expect("vertex in range") {
            out = match att {
                Attachment::Head => out.right_mul(e, g),
                Attachment::Tail => out.left_mul(e, g.inverse()),
            };
        }
        out
    }

    fn combination(&self, coeffs: impl Fn(GroupElement) -> Complex64, op: impl Fn(&Self, GroupElement) -> Self) -> Self {
        let mut acc = Self { width: self.width, amps: vec![Complex64::default(); self.amps.len()] };
        for g in GroupElement::ALL {
            let c = coeffs(g);
            if c != Complex64::default() {
                acc.add_scaled(&op(self, g), c);
            }
        }
        acc
    }

    pub fn charge_project(&self, lat: &Lattice, v: VertexId, irrep: Irrep) -> Self {
        let scale = irrep.dimension() as f64 / ORDER as f64;
        self.combination(|g| Complex64::new(scale * irrep.character(g), 0.0), |s, g| s.vertex_op(lat, v, g))
    }

    /// Joint charge of a vertex set under simultaneous gauge transformations.
    pub fn region_charge_project(&self, lat: &Lattice, vs: &[VertexId], irrep: Irrep) -> Self {
        let scale = irrep.dimension() as f64 / ORDER as f64;
        self.combination(
            |g| Complex64::new(scale * irrep.character(g), 0.0),
            |s, g| vs.iter().fold(s.clone(), |acc, &v| acc.vertex_op(lat, v, g)),
        )
    }

    pub fn flux_trivial_project(&self, lat: &Lattice, p: PlaquetteId) -> Self {
        let boundary = *lat.plaquette_edges(p).expect("plaquette in range");
        self.weight_configs(|d| {
            let prod = boundary.iter().fold(GroupElement::E, |acc, &(e, dir)| {
                let g = el(d[e.0]);
                acc * if dir == Direction::With { g } else { g.inverse() }
            });
            Complex64::new(if prod.is_identity() { 1.0 } else { 0.0 }, 0.0)
        })
    }

    /// Ground state built as the normalized image of the all-identity
    /// configuration under every trivial-charge projector.
    pub fn ground_state(lat: &Lattice) -> Result<Self, Error> {
        let mut s = Self::basis_state(lat, &vec![GroupElement::E; lat.num_edges()])?;
        for v in lat.vertices() {
            s = s.charge_project(lat, v, Irrep::Trivial);
        }
        s.normalize()?;
        Ok(s)
    }

    /// Diagonal weight `f(holonomy)` where the holonomy is the ordered product
    /// along the path, using inverses for steps against the edge orientation.
    pub fn holonomy_weight(&self, path: &Path, f: impl Fn(GroupElement) -> Complex64) -> Self {
        self.weight_configs(|d| {
            let h = path.steps().iter().fold(GroupElement::E, |acc, &(e, dir)| {
                let g = el(d[e.0]);
                acc * if dir == Direction::With { g } else { g.inverse() }
            });
            f(h)
        })
    }
}

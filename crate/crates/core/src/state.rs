//! Sparse amplitude tables over edge configurations.
//!
//! A basis configuration assigns one [`GroupElement`] to every edge and is
//! packed into a `u64` key with 3 bits per edge (edge `i` occupies bits
//! `3i..3i+3`). Amplitudes at or below the pruning tolerance are dropped.

pub mod dense;

use std::fmt::Write as _;

use num_complex::Complex64;
use rand::Rng;
use rustc_hash::FxHashMap;

use crate::group::{GroupElement, ORDER};
use crate::lattice::{Boundary, EdgeId, Lattice};
use crate::Error;

/// Default pruning tolerance on amplitude magnitudes.
pub const DEFAULT_EPS: f64 = 1e-14;

/// Widest lattice whose configurations fit a `u64` key.
pub const MAX_EDGES: usize = 21;

const BITS: u32 = 3;
const MASK: u64 = 0b111;

#[inline]
fn shift(e: usize) -> u32 {
    BITS * e as u32
}

/// Element stored on edge `e` of a packed key.
#[inline]
pub fn digit(key: u64, e: usize) -> usize {
    ((key >> shift(e)) & MASK) as usize
}

/// Packs one element per edge into a key.
pub fn pack(config: &[GroupElement]) -> u64 {
    config
        .iter()
        .enumerate()
        .fold(0u64, |k, (i, g)| k | ((g.index() as u64) << shift(i)))
}

/// Inverse of [`pack`] for a key of the given width.
pub fn unpack(key: u64, width: usize) -> Vec<GroupElement> {
    (0..width)
        .map(|e| GroupElement::from_index(digit(key, e)).expect("stored digit is a valid element"))
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Shape {
    rows: usize,
    cols: usize,
    boundary: Boundary,
    edges: usize,
}

impl Shape {
    fn of(lat: &Lattice) -> Self {
        Self { rows: lat.rows(), cols: lat.cols(), boundary: lat.boundary(), edges: lat.num_edges() }
    }
}

/// A diagonal single-spin operator: the amplitude of each configuration is
/// multiplied by `table[g]` where `g` is the element on `edge`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpinDiagonalOp {
    pub edge: EdgeId,
    pub table: [Complex64; ORDER],
}

impl SpinDiagonalOp {
    pub fn new(edge: EdgeId, table: [Complex64; ORDER]) -> Self {
        Self { edge, table }
    }

    pub fn real(edge: EdgeId, table: [f64; ORDER]) -> Self {
        Self { edge, table: table.map(|x| Complex64::new(x, 0.0)) }
    }
}

/// A product of single-spin permutations `h ↦ σ_e(h)` on a few edges.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct LocalPermutation {
    maps: Vec<(u32, [u8; 8])>,
}

const IDENTITY_DIGITS: [u8; 8] = [0, 1, 2, 3, 4, 5, 6, 7];

impl LocalPermutation {
    pub fn identity() -> Self {
        Self::default()
    }

    /// `h ↦ g·h` on edge `e`.
    pub fn left(e: EdgeId, g: GroupElement) -> Self {
        Self::identity().then_edge(e, |h| g * h)
    }

    /// `h ↦ h·g` on edge `e`.
    pub fn right(e: EdgeId, g: GroupElement) -> Self {
        Self::identity().then_edge(e, |h| h * g)
    }

    /// Follows the current action with `f` on edge `e`.
    pub fn then_edge(mut self, e: EdgeId, f: impl Fn(GroupElement) -> GroupElement) -> Self {
        let s = shift(e.0);
        let pos = self.maps.iter().position(|&(sh, _)| sh == s);
        let (_, table) = match pos {
            Some(i) => &mut self.maps[i],
            None => {
                self.maps.push((s, IDENTITY_DIGITS));
                self.maps.last_mut().unwrap()
            }
        };
        for d in table.iter_mut().take(ORDER) {
            *d = f(GroupElement::from_index(*d as usize).unwrap()).index() as u8;
        }
        self.maps.retain(|(_, t)| *t != IDENTITY_DIGITS);
        self.maps.sort_by_key(|&(sh, _)| sh);
        self
    }

    /// Action of `self` followed by `other`.
    pub fn then(mut self, other: &LocalPermutation) -> Self {
        for &(s, table) in &other.maps {
            let e = EdgeId((s / BITS) as usize);
            self = self.then_edge(e, |h| GroupElement::from_index(table[h.index()] as usize).unwrap());
        }
        self
    }

    pub fn is_identity(&self) -> bool {
        self.maps.is_empty()
    }

    /// Edges moved by the permutation.
    pub fn support(&self) -> impl Iterator<Item = EdgeId> + '_ {
        self.maps.iter().map(|&(s, _)| EdgeId((s / BITS) as usize))
    }

    #[inline]
    pub fn apply(&self, mut key: u64) -> u64 {
        for &(s, ref table) in &self.maps {
            let d = (key >> s) & MASK;
            key = (key & !(MASK << s)) | ((table[d as usize] as u64) << s);
        }
        key
    }
}

/// Outcome of a projective measurement.
#[derive(Clone, Debug, PartialEq)]
pub struct Measurement<L> {
    pub label: L,
    pub index: usize,
    pub probability: f64,
}

/// A projector given as an action on states.
pub type ProjectorFn<'a> = dyn Fn(&StateVector) -> StateVector + 'a;

/// Draws an index with probability proportional to `weights`.
pub fn sample_index<R: Rng + ?Sized>(weights: &[f64], rng: &mut R) -> usize {
    let total: f64 = weights.iter().map(|w| w.max(0.0)).sum();
    let u = rng.random::<f64>() * total;
    let mut acc = 0.0;
    let mut last = 0;
    for (i, &w) in weights.iter().enumerate() {
        if w <= 0.0 {
            continue;
        }
        acc += w;
        last = i;
        if u < acc {
            return i;
        }
    }
    last
}

#[derive(Clone, Debug)]
pub struct StateVector {
    shape: Shape,
    amps: FxHashMap<u64, Complex64>,
    eps: f64,
    pruned: f64,
}

impl StateVector {
    /// The zero vector on `lat`.
    pub fn zero(lat: &Lattice) -> Result<Self, Error> {
        if lat.num_edges() > MAX_EDGES {
            return Err(Error::SizeBudget(format!(
                "{} edges exceed the {MAX_EDGES}-edge key width",
                lat.num_edges()
            )));
        }
        Ok(Self { shape: Shape::of(lat), amps: FxHashMap::default(), eps: DEFAULT_EPS, pruned: 0.0 })
    }

    /// Single configuration with amplitude 1.
    pub fn basis_state(lat: &Lattice, config: &[GroupElement]) -> Result<Self, Error> {
        if config.len() != lat.num_edges() {
            return Err(Error::WidthMismatch { expected: lat.num_edges(), got: config.len() });
        }
        let mut s = Self::zero(lat)?;
        s.amps.insert(pack(config), Complex64::new(1.0, 0.0));
        Ok(s)
    }

    /// The all-identity configuration.
    pub fn identity_config(lat: &Lattice) -> Result<Self, Error> {
        Self::basis_state(lat, &vec![GroupElement::E; lat.num_edges()])
    }

    pub fn with_eps(mut self, eps: f64) -> Self {
        self.eps = eps;
        self
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    /// Total squared magnitude discarded by pruning so far.
    pub fn pruned_weight(&self) -> f64 {
        self.pruned
    }

    pub fn width(&self) -> usize {
        self.shape.edges
    }

    /// Number of stored amplitudes.
    pub fn len(&self) -> usize {
        self.amps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amps.is_empty()
    }

    pub fn same_lattice(&self, lat: &Lattice) -> bool {
        self.shape == Shape::of(lat)
    }

    fn check_same(&self, other: &Self) -> Result<(), Error> {
        if self.shape == other.shape {
            Ok(())
        } else {
            Err(Error::LatticeMismatch)
        }
    }

    fn check_edge(&self, e: EdgeId) -> Result<(), Error> {
        if e.0 < self.width() {
            Ok(())
        } else {
            Err(Error::OutOfRange { kind: "edge", index: e.0, len: self.width() })
        }
    }

    pub fn amplitude(&self, config: &[GroupElement]) -> Complex64 {
        self.amplitude_key(pack(config))
    }

    #[inline]
    pub fn amplitude_key(&self, key: u64) -> Complex64 {
        self.amps.get(&key).copied().unwrap_or_default()
    }

    /// Stored `(key, amplitude)` pairs in unspecified order.
    pub fn iter(&self) -> impl Iterator<Item = (u64, Complex64)> + '_ {
        self.amps.iter().map(|(&k, &a)| (k, a))
    }

    /// Stored entries sorted by key.
    pub fn sorted_entries(&self) -> Vec<(u64, Complex64)> {
        let mut v: Vec<_> = self.iter().collect();
        v.sort_unstable_by_key(|&(k, _)| k);
        v
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.values().map(|a| a.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// Rescales to unit norm and returns the previous norm.
    pub fn normalize(&mut self) -> Result<f64, Error> {
        let n = self.norm();
        if n <= self.eps {
            return Err(Error::ZeroState);
        }
        let inv = 1.0 / n;
        for a in self.amps.values_mut() {
            *a *= inv;
        }
        Ok(n)
    }

    pub fn scale(&mut self, c: Complex64) {
        for a in self.amps.values_mut() {
            *a *= c;
        }
        self.prune();
    }

    /// `self += c · other`.
    pub fn add_scaled(&mut self, other: &Self, c: Complex64) -> Result<(), Error> {
        self.check_same(other)?;
        for (&k, &a) in &other.amps {
            *self.amps.entry(k).or_default() += c * a;
        }
        self.prune();
        Ok(())
    }

    /// Linear combination `Σ c_i · s_i`.
    pub fn combine(terms: &[(Complex64, &StateVector)]) -> Result<Self, Error> {
        let (_, first) = terms.first().ok_or_else(|| Error::InvalidConfig("empty combination".into()))?;
        let mut out = first.clone_empty();
        for (c, s) in terms {
            out.add_scaled(s, *c)?;
        }
        Ok(out)
    }

    fn clone_empty(&self) -> Self {
        Self { shape: self.shape, amps: FxHashMap::default(), eps: self.eps, pruned: 0.0 }
    }

    /// Drops amplitudes at or below the tolerance; returns the dropped weight.
    pub fn prune(&mut self) -> f64 {
        let eps = self.eps;
        let mut dropped = 0.0;
        self.amps.retain(|_, a| {
            let keep = a.norm() > eps;
            if !keep {
                dropped += a.norm_sqr();
            }
            keep
        });
        self.pruned += dropped;
        dropped
    }

    /// `⟨self|other⟩`.
    pub fn inner_product(&self, other: &Self) -> Result<Complex64, Error> {
        self.check_same(other)?;
        let (small, large, conj_small) =
            if self.len() <= other.len() { (self, other, true) } else { (other, self, false) };
        let mut acc = Complex64::default();
        for (k, &a) in &small.amps {
            if let Some(&b) = large.amps.get(k) {
                acc += if conj_small { a.conj() * b } else { b.conj() * a };
            }
        }
        Ok(acc)
    }

    /// `|⟨a|b⟩|² / (‖a‖²‖b‖²)`.
    pub fn fidelity(&self, other: &Self) -> Result<f64, Error> {
        let ip = self.inner_product(other)?;
        let d = self.norm_sqr() * other.norm_sqr();
        if d == 0.0 {
            return Err(Error::ZeroState);
        }
        Ok(ip.norm_sqr() / d)
    }

    /// Largest elementwise deviation between two states.
    pub fn max_abs_diff(&self, other: &Self) -> Result<f64, Error> {
        self.check_same(other)?;
        let mut m: f64 = 0.0;
        for (k, &a) in &self.amps {
            m = m.max((a - other.amplitude_key(*k)).norm());
        }
        for (k, &b) in &other.amps {
            if !self.amps.contains_key(k) {
                m = m.max(b.norm());
            }
        }
        Ok(m)
    }

    /// Replaces every key by its image under `perm`; amplitudes are carried along.
    pub fn apply_permutation(&mut self, perm: &LocalPermutation) {
        if perm.is_identity() {
            return;
        }
        let mut out = FxHashMap::with_capacity_and_hasher(self.amps.len(), Default::default());
        for (&k, &a) in &self.amps {
            out.insert(perm.apply(k), a);
        }
        self.amps = out;
    }

    /// `L_g` on edge `e`: `|h⟩ ↦ |gh⟩`.
    pub fn apply_left_mul(&mut self, e: EdgeId, g: GroupElement) -> Result<(), Error> {
        self.check_edge(e)?;
        self.apply_permutation(&LocalPermutation::left(e, g));
        Ok(())
    }

    /// `R_g` on edge `e`: `|h⟩ ↦ |hg⟩`.
    pub fn apply_right_mul(&mut self, e: EdgeId, g: GroupElement) -> Result<(), Error> {
        self.check_edge(e)?;
        self.apply_permutation(&LocalPermutation::right(e, g));
        Ok(())
    }

    pub fn apply_diagonal(&mut self, op: &SpinDiagonalOp) -> Result<(), Error> {
        self.check_edge(op.edge)?;
        let e = op.edge.0;
        for (&k, a) in self.amps.iter_mut() {
            *a *= op.table[digit(k, e)];
        }
        self.prune();
        Ok(())
    }

    /// Multiplies each amplitude by `f(key)`.
    pub fn apply_diagonal_fn(&mut self, f: impl Fn(u64) -> Complex64) {
        for (&k, a) in self.amps.iter_mut() {
            *a *= f(k);
        }
        self.prune();
    }

    /// Replaces the state by `Σ c_i · P_i |self⟩`.
    pub fn apply_combination(&mut self, terms: &[(Complex64, &LocalPermutation)]) {
        let live: Vec<_> = terms.iter().filter(|(c, _)| *c != Complex64::default()).collect();
        let mut out = FxHashMap::with_capacity_and_hasher(self.amps.len() * live.len().min(2), Default::default());
        for (&k, &a) in &self.amps {
            for (c, p) in &live {
                *out.entry(p.apply(k)).or_insert_with(Complex64::default) += c * a;
            }
        }
        self.amps = out;
        self.prune();
    }

    /// `⟨self| P |self⟩` for a key permutation `P`, without building `P|self⟩`.
    pub fn expectation(&self, perm: &LocalPermutation) -> Complex64 {
        if perm.is_identity() {
            return Complex64::new(self.norm_sqr(), 0.0);
        }
        let mut acc = Complex64::default();
        for (&k, &a) in &self.amps {
            if let Some(b) = self.amps.get(&perm.apply(k)) {
                acc += b.conj() * a;
            }
        }
        acc
    }

    /// Several permutation expectations in one pass over the stored entries.
    pub fn expectations<const N: usize>(&self, perms: [&LocalPermutation; N]) -> [Complex64; N] {
        let mut acc = [Complex64::default(); N];
        for (&k, &a) in &self.amps {
            for (slot, p) in acc.iter_mut().zip(perms) {
                if let Some(b) = self.amps.get(&p.apply(k)) {
                    *slot += b.conj() * a;
                }
            }
        }
        acc
    }

    /// `⟨self| D |self⟩` for a diagonal operator given by `f(key)`.
    pub fn diagonal_expectation(&self, f: impl Fn(u64) -> Complex64) -> Complex64 {
        self.amps.values().zip(self.amps.keys()).map(|(a, &k)| a.norm_sqr() * f(k)).sum()
    }

    /// Born-rule measurement over labelled projector actions.
    ///
    /// Samples outcome `i` with probability `‖P_i ψ‖² / ‖ψ‖²` and collapses the
    /// state onto the normalized branch. With `check_completeness`, the sum of
    /// all branches must reproduce the input within 1e-9.
    pub fn measure<L: Clone, R: Rng + ?Sized>(
        &mut self,
        projectors: &[(L, &ProjectorFn<'_>)],
        rng: &mut R,
        check_completeness: bool,
    ) -> Result<Measurement<L>, Error> {
        let total = self.norm_sqr();
        if total <= self.eps * self.eps {
            return Err(Error::ZeroState);
        }
        let branches: Vec<StateVector> = projectors.iter().map(|(_, p)| p(self)).collect();
        if check_completeness {
            let mut sum = self.clone_empty();
            for b in &branches {
                sum.add_scaled(b, Complex64::new(1.0, 0.0))?;
            }
            let dev = sum.max_abs_diff(self)?;
            if dev > 1e-9 {
                return Err(Error::InconsistentProjectors(format!("branches miss the input by {dev:.3e}")));
            }
        }
        let probs: Vec<f64> = branches.iter().map(|b| b.norm_sqr() / total).collect();
        if probs.iter().all(|&p| p < 1e-12) {
            return Err(Error::InconsistentProjectors("every outcome has vanishing probability".into()));
        }
        let i = sample_index(&probs, rng);
        let mut post = branches.into_iter().nth(i).expect("index from sampled range");
        post.normalize()?;
        *self = post;
        Ok(Measurement { label: projectors[i].0.clone(), index: i, probability: probs[i] })
    }

    /// Debug dump: one `config TAB re TAB im` line per stored amplitude, sorted by key.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for (k, a) in self.sorted_entries() {
            let names: Vec<&str> = unpack(k, self.width()).iter().map(|g| g.name()).collect();
            let _ = writeln!(out, "{}\t{:e}\t{:e}", names.join(","), a.re, a.im);
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::Boundary;
    use GroupElement as G;

    fn lat() -> Lattice {
        Lattice::grid(2, 2, Boundary::Open).unwrap()
    }

    #[test]
    fn basis_states() {
        let l = lat();
        let s = StateVector::identity_config(&l).unwrap();
        assert_eq!(s.len(), 1);
        assert!((s.norm() - 1.0).abs() < 1e-15);
        assert!(matches!(StateVector::basis_state(&l, &[G::E; 3]), Err(Error::WidthMismatch { .. })));
    }

    #[test]
    fn pack_round_trip() {
        let cfg = [G::TC2, G::E, G::C, G::T];
        assert_eq!(unpack(pack(&cfg), 4), cfg);
    }

    #[test]
    fn left_and_right_multiplication() {
        let l = lat();
        let mut s = StateVector::identity_config(&l).unwrap();
        s.apply_left_mul(EdgeId(0), G::C).unwrap();
        assert_eq!(s.amplitude(&[G::C, G::E, G::E, G::E]), Complex64::new(1.0, 0.0));

        let mut s = StateVector::basis_state(&l, &[G::T, G::E, G::E, G::E]).unwrap();
        s.apply_right_mul(EdgeId(0), G::C).unwrap();
        assert_eq!(s.amplitude(&[G::TC, G::E, G::E, G::E]), Complex64::new(1.0, 0.0));

        let before = s.clone();
        s.apply_left_mul(EdgeId(1), G::T).unwrap();
        s.apply_left_mul(EdgeId(1), G::T).unwrap();
        assert_eq!(s.max_abs_diff(&before).unwrap(), 0.0);
        assert!(s.apply_left_mul(EdgeId(4), G::T).is_err());
    }

    #[test]
    fn diagonal_tables() {
        let l = lat();
        let mut s = StateVector::basis_state(&l, &[G::T, G::E, G::E, G::E]).unwrap();
        s.apply_diagonal(&SpinDiagonalOp::real(EdgeId(0), [2.0, -1.0, -1.0, 0.0, 0.0, 0.0])).unwrap();
        assert!(s.is_empty());
        assert!(matches!(s.normalize(), Err(Error::ZeroState)));
    }

    #[test]
    fn permutation_composition() {
        let p = LocalPermutation::left(EdgeId(2), G::C).then(&LocalPermutation::right(EdgeId(2), G::T));
        let k = pack(&[G::E, G::E, G::TC, G::E]);
        assert_eq!(unpack(p.apply(k), 4)[2], G::C * G::TC * G::T);
        let inv = LocalPermutation::left(EdgeId(2), G::C2);
        assert!(LocalPermutation::left(EdgeId(2), G::C).then(&inv).is_identity());
    }

    #[test]
    fn expectation_matches_inner_product() {
        let l = lat();
        let mut s = StateVector::zero(&l).unwrap();
        for (i, g) in G::ALL.iter().enumerate() {
            let mut b = StateVector::basis_state(&l, &[*g, G::C, G::E, G::T]).unwrap();
            b.scale(Complex64::new(1.0 + i as f64, 0.5 * i as f64));
            s.add_scaled(&b, Complex64::new(1.0, 0.0)).unwrap();
        }
        let p = LocalPermutation::left(EdgeId(0), G::C);
        let mut moved = s.clone();
        moved.apply_permutation(&p);
        let direct = s.inner_product(&moved).unwrap();
        assert!((direct - s.expectation(&p)).norm() < 1e-12);
    }

    #[test]
    fn dump_lists_entries() {
        let l = lat();
        let s = StateVector::basis_state(&l, &[G::C2, G::E, G::E, G::TC]).unwrap();
        assert_eq!(s.dump(), "c2,e,e,tc\t1e0\t0e0\n");
    }
}

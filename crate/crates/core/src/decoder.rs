//! Greedy matching decoder for stray Λ charges.
//!
//! Visible Λ charges are paired with each other or absorbed into a Φ vertex,
//! whichever is closest, and annihilated with a Λ chain along the L-shaped
//! path between the two vertices. Φ vertices can absorb any number of Λ's
//! since `Φ × Λ = Φ`.

use crate::anyons::w_lambda_chain;
use crate::double::{ChargeType, Syndrome};
use crate::lattice::{Lattice, Path, VertexId};
use crate::state::StateVector;
use crate::Error;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Correction {
    pub from: VertexId,
    pub to: VertexId,
    pub path: Path,
}

/// Pairs every visible Λ, preferring shorter links and Λ–Λ links on ties.
///
/// A Λ with no partner and no Φ vertex left on the lattice is left alone.
pub fn greedy_matching(lat: &Lattice, syndrome: &Syndrome) -> Result<Vec<Correction>, Error> {
    if syndrome.vertices.len() != lat.num_vertices() {
        return Err(Error::WidthMismatch { expected: lat.num_vertices(), got: syndrome.vertices.len() });
    }
    let lambdas = syndrome.vertices_with(ChargeType::Lambda);
    let sinks = syndrome.vertices_with(ChargeType::Phi);

    let mut candidates = Vec::new();
    for (i, &a) in lambdas.iter().enumerate() {
        for &b in &lambdas[i + 1..] {
            candidates.push((lat.distance(a, b), 0u8, a, b));
        }
        for &s in &sinks {
            candidates.push((lat.distance(a, s), 1u8, a, s));
        }
    }
    candidates.sort();

    let mut matched = vec![false; lat.num_vertices()];
    let mut out = Vec::new();
    for (_, kind, a, b) in candidates {
        if matched[a.0] || (kind == 0 && matched[b.0]) {
            continue;
        }
        matched[a.0] = true;
        if kind == 0 {
            matched[b.0] = true;
        }
        out.push(Correction { from: a, to: b, path: lat.path_between(a, b)? });
    }
    Ok(out)
}

pub fn apply_corrections(s: &mut StateVector, corrections: &[Correction]) -> Result<(), Error> {
    for c in corrections {
        w_lambda_chain(s, &c.path)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::Boundary;
    use ChargeType::*;

    fn syndrome(v: &[ChargeType], plaquettes: usize) -> Syndrome {
        Syndrome { vertices: v.to_vec(), plaquettes: vec![true; plaquettes] }
    }

    #[test]
    fn pairs_adjacent_lambdas() {
        let lat = Lattice::grid(2, 3, Boundary::Open).unwrap();
        let syn = syndrome(&[Trivial, Lambda, Lambda, Trivial, Trivial, Trivial], 2);
        let c = greedy_matching(&lat, &syn).unwrap();
        assert_eq!(c.len(), 1);
        assert_eq!((c[0].from, c[0].to, c[0].path.len()), (VertexId(1), VertexId(2), 1));
    }

    #[test]
    fn prefers_lambda_partner_on_ties() {
        let lat = Lattice::grid(2, 3, Boundary::Open).unwrap();
        let syn = syndrome(&[Phi, Lambda, Trivial, Trivial, Lambda, Trivial], 2);
        let c = greedy_matching(&lat, &syn).unwrap();
        assert_eq!(c.len(), 1);
        assert_eq!((c[0].from, c[0].to), (VertexId(1), VertexId(4)));
    }

    #[test]
    fn sinks_absorb_several() {
        let lat = Lattice::grid(2, 3, Boundary::Open).unwrap();
        let syn = syndrome(&[Phi, Lambda, Trivial, Lambda, Trivial, Trivial], 2);
        let c = greedy_matching(&lat, &syn).unwrap();
        assert_eq!(c.len(), 2);
        assert!(c.iter().all(|c| c.to == VertexId(0) || c.to == VertexId(3)));
    }

    #[test]
    fn lone_lambda_without_sink() {
        let lat = Lattice::grid(2, 2, Boundary::Open).unwrap();
        let syn = syndrome(&[Lambda, Trivial, Trivial, Trivial], 1);
        assert!(greedy_matching(&lat, &syn).unwrap().is_empty());
    }
}

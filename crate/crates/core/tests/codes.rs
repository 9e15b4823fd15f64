use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use qdouble::codes::{CodeRegister, EncodingKind, LogicalQubit};
use qdouble::experiments::{hadamard_register, hadamard_trial};
use qdouble::*;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn single(kind: EncodingKind) -> CodeRegister {
    let lat = Lattice::grid(2, 2, Boundary::Open).unwrap();
    let q = match kind {
        EncodingKind::LambdaOnly => LogicalQubit::lambda(&lat, VertexId(0), VertexId(1)).unwrap(),
        k => LogicalQubit::strip(k, &lat, 0, 0, 1).unwrap(),
    };
    CodeRegister::new(lat, vec![q]).unwrap()
}

fn dev(m: &[Vec<Complex64>], t: [[Complex64; 2]; 2]) -> f64 {
    (0..4).map(|k| (m[k / 2][k % 2] - t[k / 2][k % 2]).norm()).fold(0.0, f64::max)
}

const KINDS: [EncodingKind; 3] = [EncodingKind::LambdaOnly, EncodingKind::PhiPair, EncodingKind::Strong];

#[test]
fn encoded_basis_is_orthonormal() {
    for kind in KINDS {
        let reg = single(kind);
        let b0 = reg.basis_state(0).unwrap();
        let b1 = reg.basis_state(1).unwrap();
        assert!((b0.norm() - 1.0).abs() < 1e-12 && (b1.norm() - 1.0).abs() < 1e-12);
        assert!(b0.inner_product(&b1).unwrap().norm() < 1e-10, "{kind}");
    }
}

#[test]
fn logical_x_is_pauli_x() {
    let zero = c(0.0, 0.0);
    let one = c(1.0, 0.0);
    for kind in KINDS {
        let m = single(kind).code_space_matrix(|r| r.logical_x(0)).unwrap();
        assert!(dev(&m.m, [[zero, one], [one, zero]]) < 1e-10, "{kind}: {:?}", m.m);
        assert!(m.leakage < 1e-10);
    }
}

#[test]
fn phase_gate_is_diagonal_in_x_basis() {
    let theta = 0.9;
    for kind in KINDS {
        let m = single(kind).code_space_matrix(|r| r.phase_gate(0, theta)).unwrap();
        assert!(m.leakage < 1e-10);
        // |±⟩ are eigenvectors with unimodular eigenvalues.
        let s = std::f64::consts::FRAC_1_SQRT_2;
        for sign in [1.0, -1.0] {
            let v = [c(s, 0.0), c(sign * s, 0.0)];
            let mv = [m.m[0][0] * v[0] + m.m[0][1] * v[1], m.m[1][0] * v[0] + m.m[1][1] * v[1]];
            let lambda = mv[0] / v[0];
            assert!((mv[1] - lambda * v[1]).norm() < 1e-10, "{kind}");
            assert!((lambda.norm() - 1.0).abs() < 1e-10);
        }
        let gap = (m.m[0][0] + m.m[0][1]) / (m.m[0][0] - m.m[0][1]);
        assert!((gap.arg().abs() - theta).abs() < 1e-9 || (gap.arg().abs() - (std::f64::consts::TAU - theta)).abs() < 1e-9, "{kind}");
    }
}

#[test]
fn entangler_is_controlled_x_in_x_basis() {
    let lat = Lattice::grid(2, 2, Boundary::Open).unwrap();
    let a = LogicalQubit::lambda(&lat, VertexId(0), VertexId(1)).unwrap();
    let b = LogicalQubit::lambda(&lat, VertexId(2), VertexId(3)).unwrap();
    let reg = CodeRegister::new(lat, vec![a, b]).unwrap();
    let k = reg.code_space_matrix(|r| r.entangle_k(0, 1)).unwrap();
    let kk = reg
        .code_space_matrix(|r| {
            r.entangle_k(0, 1)?;
            r.entangle_k(0, 1)
        })
        .unwrap();
    for i in 0..4 {
        for j in 0..4 {
            assert!((kk.m[i][j] - c((i == j) as u8 as f64, 0.0)).norm() < 1e-10);
            assert!(k.m[i][j].im.abs() < 1e-10);
            assert!((k.m[i][j].re.abs() - 0.5).abs() < 1e-10);
        }
    }
    assert!(k.leakage < 1e-10);
}

#[test]
fn hadamard_square_and_conjugation() {
    let base = hadamard_register(EncodingKind::LambdaOnly).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let inputs = [(c(1.0, 0.0), c(0.0, 0.0)), (c(s, 0.0), c(s, 0.0)), (c(0.6, 0.0), c(0.0, 0.8))];
    for (alpha, beta) in inputs {
        let t = hadamard_trial(&base, alpha, beta, &mut rng).unwrap();
        assert!(t.fidelity > 1.0 - 1e-9);
        assert_eq!(t.gadgets, 2 * t.rounds - 1);

        // H applied twice returns the input.
        let mut reg = base.clone();
        reg.prepare(0, alpha, beta).unwrap();
        let first = reg.hadamard_rus(0, 1, &mut rng).unwrap();
        let second = reg.hadamard_rus(first.output, 1 - first.output, &mut rng).unwrap();
        let mut ideal = base.clone();
        ideal.prepare(second.output, alpha, beta).unwrap();
        ideal.encode(1 - second.output, 0).unwrap();
        assert!(ideal.state().fidelity(reg.state()).unwrap() > 1.0 - 1e-9);

        // H X = Z H.
        let mut reg = base.clone();
        reg.prepare(0, alpha, beta).unwrap();
        reg.logical_x(0).unwrap();
        let out = reg.hadamard_rus(0, 1, &mut rng).unwrap();
        let mut ideal = base.clone();
        ideal.prepare(out.output, (alpha + beta) * s, -(alpha - beta) * s).unwrap();
        ideal.encode(1 - out.output, 0).unwrap();
        assert!(ideal.state().fidelity(reg.state()).unwrap() > 1.0 - 1e-9);
    }
}

#[test]
fn hadamard_on_basis_inputs() {
    let base = hadamard_register(EncodingKind::LambdaOnly).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let mut reg = base.clone();
    reg.encode(0, 0).unwrap();
    let out = reg.hadamard_rus(0, 1, &mut rng).unwrap();
    let mut plus = base.clone();
    plus.prepare(out.output, c(s, 0.0), c(s, 0.0)).unwrap();
    plus.encode(1 - out.output, 0).unwrap();
    assert!(plus.state().fidelity(reg.state()).unwrap() > 1.0 - 1e-9);

    let mut reg = base.clone();
    reg.prepare(0, c(s, 0.0), c(s, 0.0)).unwrap();
    let out = reg.hadamard_rus(0, 1, &mut rng).unwrap();
    assert_eq!(reg.measure_logical_z(out.output, &mut rng).unwrap(), 0);
}

#[test]
fn parity_test_outcomes() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for (kind, bit, expect) in [
        (EncodingKind::PhiPair, 0, (1, 1)),
        (EncodingKind::PhiPair, 1, (-1, -1)),
        (EncodingKind::Strong, 1, (1, 1)),
    ] {
        for _ in 0..20 {
            let mut reg = single(kind);
            reg.encode(0, bit).unwrap();
            assert_eq!(reg.locc_parity_test(0, &mut rng).unwrap(), expect, "{kind} |{bit}⟩");
        }
    }
    let mut reg = single(EncodingKind::LambdaOnly);
    reg.encode(0, 0).unwrap();
    assert!(reg.locc_parity_test(0, &mut rng).is_err());
}

#[test]
fn strong_states_are_locally_invisible() {
    let reg = single(EncodingKind::Strong);
    let qd = reg.qd();
    let s0 = reg.basis_state(0).unwrap();
    let s1 = reg.basis_state(1).unwrap();
    for v in qd.lattice().vertices() {
        let (a, b) = (qd.charge_probabilities(&s0, v).unwrap(), qd.charge_probabilities(&s1, v).unwrap());
        for i in 0..3 {
            assert!((a[i] - b[i]).abs() < 1e-10);
        }
        let (ta, tb) = (qd.tt_plus_probability(&s0, v).unwrap(), qd.tt_plus_probability(&s1, v).unwrap());
        assert!((ta - tb).abs() < 1e-10);
        let (mut pa, mut pb) = (s0.clone(), s1.clone());
        qd.modified_lambda_project(&mut pa, v).unwrap();
        qd.modified_lambda_project(&mut pb, v).unwrap();
        assert!((pa.norm_sqr() - pb.norm_sqr()).abs() < 1e-10);
    }

    let weak = single(EncodingKind::PhiPair);
    let w0 = weak.basis_state(0).unwrap();
    let w1 = weak.basis_state(1).unwrap();
    let parity = |s: &StateVector| {
        let mut t = s.clone();
        let [p, q] = [weak.qubit(0).unwrap().vertices()[0], weak.qubit(0).unwrap().vertices()[3]];
        let qd = weak.qd();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let (x, _) = qd.measure_tt(&mut t, p, &mut rng).unwrap();
        let (y, _) = qd.measure_tt(&mut t, q, &mut rng).unwrap();
        x * y
    };
    assert_eq!(parity(&w0), 1);
    assert_eq!(parity(&w1), -1);
}

#[test]
fn logical_supports_scale_with_separation() {
    for l in 1..=4 {
        let lat = Lattice::grid(3, l + 2, Boundary::Open).unwrap();
        let phi = LogicalQubit::strip(EncodingKind::PhiPair, &lat, 0, 0, l).unwrap();
        assert_eq!(phi.x_support(&lat).unwrap().len(), l);
        assert_eq!(phi.separation(), l);

        let strong = LogicalQubit::strip(EncodingKind::Strong, &lat, 0, 0, l).unwrap();
        let (a, b) = strong.x_endpoints();
        assert_eq!(strong.x_support(&lat).unwrap().len(), l + lat.degree(a) + lat.degree(b) - 2);
    }
}

#[test]
fn strong_x_on_interior_neighbours_touches_seven_spins() {
    let lat = Lattice::grid(3, 4, Boundary::Open).unwrap();
    let v = |r, c| lat.vertex(r, c).unwrap();
    let q = LogicalQubit::pairs(EncodingKind::Strong, &lat, [v(1, 1), v(1, 2), v(0, 2), v(0, 1)]).unwrap();
    let (a, b) = q.x_endpoints();
    assert_eq!((lat.degree(a), lat.degree(b)), (4, 4));
    assert_eq!(q.x_support(&lat).unwrap().len(), 7);
}

#[test]
fn register_validation() {
    let lat = Lattice::grid(2, 2, Boundary::Open).unwrap();
    let a = LogicalQubit::lambda(&lat, VertexId(0), VertexId(1)).unwrap();
    assert!(CodeRegister::new(lat.clone(), vec![a.clone(), a.clone()]).is_err());
    assert!(LogicalQubit::lambda(&lat, VertexId(0), VertexId(0)).is_err());
    let mut reg = CodeRegister::new(lat, vec![a]).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    assert!(reg.logical_x(0).is_err());
    assert!(reg.measure_logical_z(3, &mut rng).is_err());
    reg.encode(0, 1).unwrap();
    assert_eq!(reg.measure_logical_z(0, &mut rng).unwrap(), 1);
}

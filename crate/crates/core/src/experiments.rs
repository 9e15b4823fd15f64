//! Seeded Monte Carlo campaigns and their reports.

use std::fmt::Write as _;

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::anyons::{apply_w, pair_charge_measure, pair_charge_probabilities, CreationKind};
use crate::codes::{CodeRegister, EncodingKind, LogicalQubit};
use crate::decoder::{apply_corrections, greedy_matching};
use crate::double::{ChargeType, QuantumDouble};
use crate::exec::{map_trials, trial_rng, Execution};
use crate::lattice::{Boundary, EdgeId, Lattice, VertexId};
use crate::noise::{inject_noise, ErrorOp, NoiseModel};
use crate::Error;

/// One summary statistic of a sweep.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub x: serde_json::Value,
    pub mean: f64,
    pub stderr: f64,
    pub n: usize,
}

impl Point {
    /// Success frequency with its binomial standard error.
    pub fn bernoulli(x: impl Into<serde_json::Value>, hits: usize, n: usize) -> Self {
        let mean = if n == 0 { 0.0 } else { hits as f64 / n as f64 };
        let stderr = if n == 0 { 0.0 } else { (mean * (1.0 - mean) / n as f64).sqrt() };
        Self { x: x.into(), mean, stderr, n }
    }

    /// Sample mean with the standard error of the mean.
    pub fn sample(x: impl Into<serde_json::Value>, values: &[f64]) -> Self {
        let n = values.len();
        if n == 0 {
            return Self { x: x.into(), mean: 0.0, stderr: 0.0, n };
        }
        let mean = values.iter().sum::<f64>() / n as f64;
        let var = if n > 1 { values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64 } else { 0.0 };
        Self { x: x.into(), mean, stderr: (var / n as f64).sqrt(), n }
    }

    /// An exactly known value.
    pub fn exact(x: impl Into<serde_json::Value>, value: f64, n: usize) -> Self {
        Self { x: x.into(), mean: value, stderr: 0.0, n }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub experiment: String,
    pub config: serde_json::Value,
    pub seed: u64,
    pub points: Vec<Point>,
    pub wall_ms: u64,
}

impl ExperimentReport {
    fn new<C: Serialize>(experiment: &str, config: &C, seed: u64, points: Vec<Point>) -> Result<Self, Error> {
        let config = serde_json::to_value(config).map_err(|e| Error::InvalidConfig(e.to_string()))?;
        Ok(Self { experiment: experiment.into(), config, seed, points, wall_ms: 0 })
    }

    pub fn point(&self, x: impl Into<serde_json::Value>) -> Option<&Point> {
        let x = x.into();
        self.points.iter().find(|p| p.x == x)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report is serializable") + "\n"
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("x,mean,stderr,n\n");
        for p in &self.points {
            let x = match &p.x {
                serde_json::Value::String(s) => s.clone(),
                other => other.to_string(),
            };
            let _ = writeln!(out, "{x},{},{},{}", p.mean, p.stderr, p.n);
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuppressionConfig {
    pub ls: Vec<usize>,
    pub p: f64,
    pub trials: usize,
    pub steps: usize,
    pub encoding: EncodingKind,
    pub errors: Vec<ErrorOp>,
}

impl Default for SuppressionConfig {
    fn default() -> Self {
        Self { ls: vec![1, 2, 3], p: 0.05, trials: 1000, steps: 1, encoding: EncodingKind::PhiPair, errors: vec![ErrorOp::SignFlip] }
    }
}

/// Lattice and qubit used for separation `l`: a `2 × (l+1)` strip.
pub fn suppression_register(encoding: EncodingKind, l: usize) -> Result<CodeRegister, Error> {
    if encoding == EncodingKind::LambdaOnly {
        return Err(Error::Unsupported("error suppression needs a pair encoding".into()));
    }
    let lat = Lattice::grid(2, l + 1, Boundary::Open)?;
    let q = LogicalQubit::strip(encoding, &lat, 0, 0, l)?;
    let mut reg = CodeRegister::new(lat, vec![q])?;
    reg.encode(0, 0)?;
    Ok(reg)
}

/// Outcome of one noisy memory trial.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MemoryOutcome {
    Kept,
    Flipped,
    Corrupted,
}

/// Noise, syndrome, greedy correction and logical Z readout on an encoded `|0⟩`.
pub fn memory_trial<R: Rng + ?Sized>(reg: &CodeRegister, noise: &NoiseModel, rng: &mut R) -> Result<MemoryOutcome, Error> {
    let mut r = reg.clone();
    inject_noise(r.state_mut(), noise, rng)?;
    let qd = reg.qd();
    let syndrome = qd.measure_syndrome(r.state_mut(), rng)?;
    let corrections = greedy_matching(qd.lattice(), &syndrome)?;
    apply_corrections(r.state_mut(), &corrections)?;
    match r.measure_logical_z(0, rng) {
        Ok(0) => Ok(MemoryOutcome::Kept),
        Ok(_) => Ok(MemoryOutcome::Flipped),
        Err(Error::Corruption { .. }) => Ok(MemoryOutcome::Corrupted),
        Err(e) => Err(e),
    }
}

/// Logical failure rate against separation.
///
/// Each trial encodes `|0⟩`, applies noise, decodes and reads Z; a flipped or
/// corrupted readout counts as a failure.
pub fn run_error_suppression(config: &SuppressionConfig, seed: u64, exec: Execution) -> Result<ExperimentReport, Error> {
    let noise = NoiseModel::new(config.p, config.errors.clone(), config.steps)?;
    let mut points = Vec::with_capacity(config.ls.len());
    for (pi, &l) in config.ls.iter().enumerate() {
        let reg = suppression_register(config.encoding, l)?;
        let outcomes = map_trials(exec, config.trials, |t| {
            memory_trial(&reg, &noise, &mut trial_rng(seed, pi as u32, t as u32))
        });
        let mut failures = 0;
        for o in outcomes {
            if o? != MemoryOutcome::Kept {
                failures += 1;
            }
        }
        points.push(Point::bernoulli(l, failures, config.trials));
    }
    ExperimentReport::new("suppression", config, seed, points)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DistinguishConfig {
    pub encoding: EncodingKind,
    pub trials: usize,
}

/// Success rates for guessing a uniformly random logical bit with
/// single-vertex `T_t` parities (`locc`), fusion of the `(v1, v4)` pair
/// (`pair_fusion`) and projection onto the encoded basis (`ideal_readout`).
pub fn run_distinguishability(config: &DistinguishConfig, seed: u64, exec: Execution) -> Result<ExperimentReport, Error> {
    if config.encoding == EncodingKind::LambdaOnly {
        return Err(Error::Unsupported("parity test on a Λ-only qubit".into()));
    }
    let lat = Lattice::grid(2, 2, Boundary::Open)?;
    let q = LogicalQubit::strip(config.encoding, &lat, 0, 0, 1)?;
    let v = q.vertices();
    let base = CodeRegister::new(lat, vec![q])?;
    let mut prepared = Vec::new();
    for bit in 0..2 {
        let mut r = base.clone();
        r.encode(0, bit)?;
        prepared.push(r);
    }
    let outcomes = map_trials(exec, config.trials, |t| -> Result<[bool; 3], Error> {
        let mut rng = trial_rng(seed, 0, t as u32);
        let bit = rng.random_range(0..2u8);
        let reg = &prepared[bit as usize];

        let mut r = reg.clone();
        let locc_guess = match r.locc_parity_test(0, &mut rng)? {
            (1, 1) => 0,
            (-1, -1) => 1,
            _ => rng.random_range(0..2),
        };

        let mut s = reg.state().clone();
        let fusion_guess = match pair_charge_measure(reg.qd(), &mut s, v[0], v[3], &mut rng)?.0 {
            ChargeType::Trivial => 0,
            ChargeType::Lambda => 1,
            ChargeType::Phi => rng.random_range(0..2),
        };

        let mut r = reg.clone();
        let ideal_guess = r.project_logical_z(0, &mut rng)?;
        Ok([locc_guess == bit, fusion_guess == bit, ideal_guess == bit])
    });
    let mut hits = [0usize; 3];
    for o in outcomes {
        for (h, ok) in hits.iter_mut().zip(o?) {
            *h += ok as usize;
        }
    }
    let points = ["locc", "pair_fusion", "ideal_readout"]
        .iter()
        .zip(hits)
        .map(|(x, h)| Point::bernoulli(*x, h, config.trials))
        .collect();
    ExperimentReport::new("distinguish", config, seed, points)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FusionConfig {
    pub trials: usize,
}

/// Two Φ pairs on a 2×2 lattice, one on each horizontal spin.
///
/// Returns the state, the same-pair vertices and the cross-pair vertices.
pub fn two_phi_pairs() -> Result<(QuantumDouble, crate::StateVector, [VertexId; 2], [VertexId; 2]), Error> {
    let qd = QuantumDouble::new(Lattice::grid(2, 2, Boundary::Open)?);
    let mut s = qd.ground_state()?;
    apply_w(&mut s, CreationKind::WPhi, EdgeId(0))?;
    apply_w(&mut s, CreationKind::WPhi, EdgeId(1))?;
    Ok((qd, s, [VertexId(0), VertexId(1)], [VertexId(0), VertexId(2)]))
}

/// Channel frequencies for fusing one anyon from each of two independent
/// Φ pairs, the exact channel probabilities, and same-pair fusion.
pub fn run_fusion_stats(config: &FusionConfig, seed: u64, exec: Execution) -> Result<ExperimentReport, Error> {
    let (qd, s, same, cross) = two_phi_pairs()?;
    let exact = pair_charge_probabilities(&qd, &s, cross[0], cross[1])?;
    let outcomes = map_trials(exec, config.trials, |t| -> Result<(ChargeType, ChargeType), Error> {
        let mut rng = trial_rng(seed, 0, t as u32);
        let mut a = s.clone();
        let (c, _) = pair_charge_measure(&qd, &mut a, cross[0], cross[1], &mut rng)?;
        let mut b = s.clone();
        let (d, _) = pair_charge_measure(&qd, &mut b, same[0], same[1], &mut rng)?;
        Ok((c, d))
    });
    let mut cross_counts = [0usize; 3];
    let mut same_trivial = 0;
    for o in outcomes {
        let (c, d) = o?;
        cross_counts[c.index()] += 1;
        same_trivial += (d == ChargeType::Trivial) as usize;
    }
    let mut points = Vec::new();
    for c in ChargeType::ALL {
        points.push(Point::bernoulli(format!("cross:{c}"), cross_counts[c.index()], config.trials));
    }
    for c in ChargeType::ALL {
        points.push(Point::exact(format!("exact:{c}"), exact[c.index()], 0));
    }
    points.push(Point::bernoulli("same:1", same_trivial, config.trials));
    ExperimentReport::new("fusion-stats", config, seed, points)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HadamardConfig {
    pub trials: usize,
    pub encoding: EncodingKind,
}

/// Two-qubit register for the Hadamard protocol: qubit 0 holds the input,
/// qubit 1 starts in vacuum.
pub fn hadamard_register(encoding: EncodingKind) -> Result<CodeRegister, Error> {
    match encoding {
        EncodingKind::LambdaOnly => {
            let lat = Lattice::grid(2, 2, Boundary::Open)?;
            let a = LogicalQubit::lambda(&lat, VertexId(0), VertexId(1))?;
            let b = LogicalQubit::lambda(&lat, VertexId(2), VertexId(3))?;
            CodeRegister::new(lat, vec![a, b])
        }
        kind => {
            let gap = if kind == EncodingKind::Strong { 3 } else { 2 };
            let lat = Lattice::grid(2, gap + 2, Boundary::Open)?;
            let a = LogicalQubit::strip(kind, &lat, 0, 0, 1)?;
            let b = LogicalQubit::strip(kind, &lat, 0, gap, 1)?;
            CodeRegister::new(lat, vec![a, b])
        }
    }
}

/// Random input amplitudes `(cos θ/2, e^{iφ} sin θ/2)`.
pub fn random_qubit<R: Rng + ?Sized>(rng: &mut R) -> (Complex64, Complex64) {
    let theta = (1.0 - 2.0 * rng.random::<f64>()).acos();
    let phi = rng.random::<f64>() * std::f64::consts::TAU;
    (Complex64::new((theta / 2.0).cos(), 0.0), Complex64::from_polar((theta / 2.0).sin(), phi))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HadamardTrial {
    pub rounds: usize,
    pub gadgets: usize,
    pub fidelity: f64,
}

/// Runs the protocol on `α|0⟩ + β|1⟩` and compares with the ideal output.
pub fn hadamard_trial<R: Rng + ?Sized>(base: &CodeRegister, alpha: Complex64, beta: Complex64, rng: &mut R) -> Result<HadamardTrial, Error> {
    let mut reg = base.clone();
    reg.prepare(0, alpha, beta)?;
    let out = reg.hadamard_rus(0, 1, rng)?;
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let mut ideal = base.clone();
    ideal.prepare(out.output, (alpha + beta) * s, (alpha - beta) * s)?;
    ideal.encode(1 - out.output, 0)?;
    let fidelity = ideal.state().fidelity(reg.state())?;
    Ok(HadamardTrial { rounds: out.rounds, gadgets: out.gadgets, fidelity })
}

/// Statistics of the repeat-until-success Hadamard on random inputs.
pub fn run_hadamard_stats(config: &HadamardConfig, seed: u64, exec: Execution) -> Result<ExperimentReport, Error> {
    let base = hadamard_register(config.encoding)?;
    let trials = map_trials(exec, config.trials, |t| {
        let mut rng = trial_rng(seed, 0, t as u32);
        let (a, b) = random_qubit(&mut rng);
        hadamard_trial(&base, a, b, &mut rng)
    });
    let trials: Vec<HadamardTrial> = trials.into_iter().collect::<Result<_, _>>()?;
    let rounds: Vec<f64> = trials.iter().map(|t| t.rounds as f64).collect();
    let gadgets: Vec<f64> = trials.iter().map(|t| t.gadgets as f64).collect();
    let first = trials.iter().filter(|t| t.rounds == 1).count();
    let min_fid = trials.iter().map(|t| t.fidelity).fold(1.0f64, f64::min);
    let points = vec![
        Point::sample("rounds", &rounds),
        Point::bernoulli("first_round_success", first, config.trials),
        Point::sample("gadgets", &gadgets),
        Point::exact("min_fidelity", min_fid, config.trials),
    ];
    ExperimentReport::new("hadamard", config, seed, points)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GroundStateConfig {
    pub rows: usize,
    pub cols: usize,
    pub boundary: Boundary,
}

/// Builds the ground state and reports its size, energy and the smallest
/// vacuum probability over vertices and plaquettes.
pub fn run_ground_state_check(config: &GroundStateConfig, seed: u64) -> Result<ExperimentReport, Error> {
    let qd = QuantumDouble::new(Lattice::grid(config.rows, config.cols, config.boundary)?);
    let gs = qd.ground_state()?;
    let mut min_vertex: f64 = 1.0;
    for v in qd.lattice().vertices() {
        min_vertex = min_vertex.min(qd.charge_probabilities(&gs, v)?[ChargeType::Trivial.index()]);
    }
    let mut min_flux: f64 = 1.0;
    for p in qd.lattice().plaquette_ids() {
        min_flux = min_flux.min(qd.flux_trivial_probability(&gs, p)?);
    }
    let lat = qd.lattice();
    let points = vec![
        Point::exact("entries", gs.len() as f64, 1),
        Point::exact("energy", qd.energy(&gs)?, 1),
        Point::exact("expected_energy", -((lat.num_vertices() + lat.num_plaquettes()) as f64), 1),
        Point::exact("min_vertex_vacuum", min_vertex, 1),
        Point::exact("min_plaquette_vacuum", min_flux, 1),
    ];
    ExperimentReport::new("ground-state-check", config, seed, points)
}

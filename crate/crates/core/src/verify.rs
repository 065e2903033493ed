//! Named, reportable checks for every identity the constructions rely on.
//!
//! Each check is deterministic in its parameters. [`run_check`] refuses
//! parameters beyond the size caps with an explicit error; [`run_suite`]
//! records such cases as skipped instead.

use std::collections::BTreeMap;
use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;
use std::time::{Duration, Instant};

use num_complex::Complex64;
use rayon::prelude::*;

use crate::basis::{hamming_weight, parity};
use crate::circuits::{
    fanout_circuit, parity_circuit, parity_circuit_variant, parity_like_circuit, simplified_fanout_circuit,
    Circuit, ParityVariant, PARITY_CNOT_STEP,
};
use crate::equiv::equiv_up_to_global_phase;
use crate::error::{Error, Result};
use crate::gates::{cz_from_ieq, fanout_reference, parity_reference, ieq_reference, StandardGate};
use crate::hamiltonians::{
    build_hn, build_kn, build_l2, build_ln, evolve, un, un_dagger, CouplingMatrix, QUARTER_PI_TIME,
};
use crate::operator::{compose, max_abs_diff, DenseOperator, DiagonalOperator, Operator};
use crate::state::StateVector;

/// Negative controls must miss by at least this much.
pub const NEGATIVE_CONTROL_MARGIN: f64 = 0.5;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SizeCaps {
    /// Max qubits for dense operator work.
    pub dense_cap: usize,
    /// Max qubits for dense Hamiltonian evolution.
    pub l2_cap: usize,
    /// Max qubits for state-vector and diagonal work.
    pub state_cap: usize,
}

impl Default for SizeCaps {
    fn default() -> Self {
        Self { dense_cap: 12, l2_cap: 8, state_cap: 20 }
    }
}

impl SizeCaps {
    pub fn new(dense_cap: usize, l2_cap: usize, state_cap: usize) -> Result<Self> {
        if !(l2_cap <= dense_cap && dense_cap <= state_cap) {
            return Err(Error::Invalid(format!(
                "caps must satisfy l2 <= dense <= state, got l2={l2_cap} dense={dense_cap} state={state_cap}"
            )));
        }
        Ok(Self { dense_cap, l2_cap, state_cap })
    }

    /// Default caps, each lowered to at most `n_max`.
    pub fn limited_to(n_max: usize) -> Self {
        let d = Self::default();
        Self { dense_cap: d.dense_cap.min(n_max), l2_cap: d.l2_cap.min(n_max), state_cap: d.state_cap.min(n_max) }
    }

    fn limit(&self, kind: CapKind) -> usize {
        match kind {
            CapKind::Dense => self.dense_cap,
            CapKind::L2 => self.l2_cap,
            CapKind::State => self.state_cap,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum CapKind {
    Dense,
    L2,
    State,
}

impl fmt::Display for CapKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CapKind::Dense => "dense",
            CapKind::L2 => "l2",
            CapKind::State => "state",
        })
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CheckParams(BTreeMap<String, i64>);

impl CheckParams {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, key: &str, value: i64) -> Self {
        self.0.insert(key.to_string(), value);
        self
    }

    pub fn n(n: usize) -> Self {
        Self::new().with("n", n as i64)
    }

    pub fn get(&self, key: &str) -> Option<i64> {
        self.0.get(key).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, i64)> {
        self.0.iter().map(|(k, &v)| (k.as_str(), v))
    }

    fn require_n(&self) -> Result<usize> {
        let n = self.get("n").ok_or(Error::MissingParam("n"))?;
        usize::try_from(n).map_err(|_| Error::Invalid(format!("n must be non-negative, got {n}")))
    }
}

impl fmt::Display for CheckParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|(k, v)| format!("{k}={v}")).collect();
        f.write_str(&parts.join(","))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CheckStatus {
    Passed,
    Failed,
    Skipped,
}

impl CheckStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            CheckStatus::Passed => "pass",
            CheckStatus::Failed => "fail",
            CheckStatus::Skipped => "skipped",
        }
    }
}

/// What a check is supposed to do. Negative controls are supposed to fail.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Expectation {
    Pass,
    Fail,
}

impl Expectation {
    pub fn as_str(self) -> &'static str {
        match self {
            Expectation::Pass => "pass",
            Expectation::Fail => "fail",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CheckResult {
    pub check_id: String,
    pub params: CheckParams,
    pub status: CheckStatus,
    /// `max_deviation < tolerance`; false for skipped checks.
    pub passed: bool,
    pub expectation: Expectation,
    pub max_deviation: f64,
    pub tolerance: f64,
    pub phase: Complex64,
    pub elapsed: Duration,
    /// Short description of the identity being checked.
    pub anchor: &'static str,
    /// Values the check found, e.g. a fitted coefficient or a phase pattern.
    pub note: Option<String>,
}

impl CheckResult {
    /// True for checks that behaved as designed: passing checks pass,
    /// negative controls fail by the required margin. Skipped checks count
    /// as neither.
    pub fn as_expected(&self) -> bool {
        match (self.status, self.expectation) {
            (CheckStatus::Passed, Expectation::Pass) => true,
            (CheckStatus::Failed, Expectation::Fail) => self.max_deviation > NEGATIVE_CONTROL_MARGIN,
            _ => false,
        }
    }
}

struct Outcome {
    max_deviation: f64,
    phase: Complex64,
    note: Option<String>,
}

impl Outcome {
    fn new(max_deviation: f64) -> Self {
        Self { max_deviation, phase: Complex64::new(1.0, 0.0), note: None }
    }

    fn with_phase(mut self, phase: Complex64) -> Self {
        self.phase = phase;
        self
    }

    fn with_note(mut self, note: String) -> Self {
        self.note = Some(note);
        self
    }
}

struct CheckDef {
    id: &'static str,
    anchor: &'static str,
    tolerance: f64,
    expectation: Expectation,
    /// Qubits required and which cap applies.
    needs: fn(&CheckParams) -> Result<(CapKind, usize)>,
    sweep: fn() -> Vec<CheckParams>,
    run: fn(&CheckParams) -> Result<Outcome>,
}

fn even_up_to(max: usize) -> Vec<CheckParams> {
    (2..=max).step_by(2).map(CheckParams::n).collect()
}

fn range_n(max: usize) -> Vec<CheckParams> {
    (1..=max).map(CheckParams::n).collect()
}

fn state_n(p: &CheckParams) -> Result<(CapKind, usize)> {
    Ok((CapKind::State, p.require_n()?))
}

fn state_n_plus_1(p: &CheckParams) -> Result<(CapKind, usize)> {
    Ok((CapKind::State, p.require_n()? + 1))
}

fn dense_n_plus_1(p: &CheckParams) -> Result<(CapKind, usize)> {
    Ok((CapKind::Dense, p.require_n()? + 1))
}

static CHECKS: &[CheckDef] = &[
    CheckDef {
        id: "cz_from_ieq",
        anchor: "I_= with one qubit fixed to |1> is CZ; H-conjugated CZ is CNOT",
        tolerance: 1e-12,
        expectation: Expectation::Pass,
        needs: |_| Ok((CapKind::Dense, 3)),
        sweep: || vec![CheckParams::new()],
        run: check_cz_from_ieq,
    },
    CheckDef {
        id: "fanout",
        anchor: "Hadamard-conjugated parity circuit implements fanout",
        tolerance: 1e-9,
        expectation: Expectation::Pass,
        needs: dense_n_plus_1,
        sweep: || even_up_to(8),
        run: check_fanout,
    },
    CheckDef {
        id: "fanout_simplified",
        anchor: "fanout circuit after inverse-pair cancellation",
        tolerance: 1e-9,
        expectation: Expectation::Pass,
        needs: dense_n_plus_1,
        sweep: || even_up_to(8),
        run: check_fanout_simplified,
    },
    CheckDef {
        id: "hadamard_conjugation",
        anchor: "H on every wire turns parity into fanout",
        tolerance: 1e-10,
        expectation: Expectation::Pass,
        needs: |p| Ok((CapKind::Dense, p.require_n()? + 1)),
        sweep: || (1..=7).map(CheckParams::n).collect(),
        run: check_hadamard_conjugation,
    },
    CheckDef {
        id: "ieq",
        anchor: "U_3 is proportional to I_= = diag(1,-1,-1,-1,-1,-1,-1,1)",
        tolerance: 1e-10,
        expectation: Expectation::Pass,
        needs: |_| Ok((CapKind::State, 3)),
        sweep: || vec![CheckParams::new()],
        run: check_ieq,
    },
    CheckDef {
        id: "kn_offset",
        anchor: "K_n with all J_ij = J/2 differs from H_n by a multiple of I",
        tolerance: 1e-12,
        expectation: Expectation::Pass,
        needs: state_n,
        sweep: || range_n(10),
        run: check_kn_offset,
    },
    CheckDef {
        id: "ln_l2_coefficient",
        anchor: "uniform Heisenberg coupling differs from L^2 by a multiple of I",
        tolerance: 1e-10,
        expectation: Expectation::Pass,
        needs: |p| Ok((CapKind::L2, p.require_n()?)),
        sweep: || (2..=4).map(CheckParams::n).collect(),
        run: check_ln_l2_coefficient,
    },
    CheckDef {
        id: "mid_circuit_state",
        anchor: "after H and U_n the nth qubit holds (i^p|0> + i^(1-p)(-1)^r|1>)/sqrt2",
        tolerance: 1e-10,
        expectation: Expectation::Pass,
        needs: state_n_plus_1,
        sweep: || even_up_to(6),
        run: check_mid_circuit_state,
    },
    CheckDef {
        id: "parity",
        anchor: "U_n-based circuit implements the (n+1)-qubit parity gate",
        tolerance: 1e-9,
        expectation: Expectation::Pass,
        needs: dense_n_plus_1,
        sweep: || even_up_to(8),
        run: check_parity,
    },
    CheckDef {
        id: "parity_dichotomy",
        anchor: "U_n diagonal is 1 on even parity, i (n=2 mod 4) or -i (n=0 mod 4) on odd",
        tolerance: 1e-10,
        expectation: Expectation::Pass,
        needs: state_n,
        sweep: || even_up_to(10),
        run: check_parity_dichotomy,
    },
    CheckDef {
        id: "parity_like",
        anchor: "single-U_n circuit writes x_1 xor ... xor x_(n-1) onto a |0> wire",
        tolerance: 1e-10,
        expectation: Expectation::Pass,
        needs: state_n,
        sweep: || even_up_to(8),
        run: check_parity_like,
    },
    CheckDef {
        id: "parity_negative_control",
        anchor: "parity circuit with U_n and U_n^dagger swapped for the wrong n mod 4 class",
        tolerance: 1e-9,
        expectation: Expectation::Fail,
        needs: dense_n_plus_1,
        sweep: || even_up_to(8),
        run: check_parity_negative_control,
    },
    CheckDef {
        id: "phase_formula",
        anchor: "<x|U_n|x> proportional to i^(k(n-k))",
        tolerance: 1e-10,
        expectation: Expectation::Pass,
        needs: state_n,
        sweep: || range_n(10),
        run: check_phase_formula,
    },
    CheckDef {
        id: "unentangled_control",
        anchor: "before the CNOT the control is i^p|p xor r>, unentangled",
        tolerance: 1e-9,
        expectation: Expectation::Pass,
        needs: state_n_plus_1,
        sweep: || even_up_to(6),
        run: check_unentangled_control,
    },
    CheckDef {
        id: "unitary_pow4",
        anchor: "U_n^4 = I and U_n U_n^dagger = I",
        tolerance: 1e-12,
        expectation: Expectation::Pass,
        needs: state_n,
        sweep: || range_n(10),
        run: check_unitary_pow4,
    },
];

/// Identifiers of every registered check, sorted.
pub fn check_ids() -> Vec<&'static str> {
    let mut ids: Vec<&'static str> = CHECKS.iter().map(|c| c.id).collect();
    ids.sort_unstable();
    ids
}

fn lookup(id: &str) -> Result<&'static CheckDef> {
    CHECKS.iter().find(|c| c.id == id).ok_or_else(|| Error::UnknownCheck(id.to_string()))
}

/// Runs one check under the default caps.
pub fn run_check(check_id: &str, params: &CheckParams) -> Result<CheckResult> {
    run_check_with_caps(check_id, params, &SizeCaps::default())
}

pub fn run_check_with_caps(check_id: &str, params: &CheckParams, caps: &SizeCaps) -> Result<CheckResult> {
    let def = lookup(check_id)?;
    let (kind, qubits) = (def.needs)(params)?;
    let cap = caps.limit(kind);
    if qubits > cap {
        return Err(Error::CapExceeded { what: format!("check {check_id} ({kind} cap)"), n: qubits, cap });
    }
    execute(def, params)
}

fn execute(def: &CheckDef, params: &CheckParams) -> Result<CheckResult> {
    let start = Instant::now();
    let outcome = (def.run)(params)?;
    let elapsed = start.elapsed();
    let passed = outcome.max_deviation < def.tolerance;
    Ok(CheckResult {
        check_id: def.id.to_string(),
        params: params.clone(),
        status: if passed { CheckStatus::Passed } else { CheckStatus::Failed },
        passed,
        expectation: def.expectation,
        max_deviation: outcome.max_deviation,
        tolerance: def.tolerance,
        phase: outcome.phase,
        elapsed,
        anchor: def.anchor,
        note: outcome.note,
    })
}

fn skipped(def: &CheckDef, params: &CheckParams, note: String) -> CheckResult {
    CheckResult {
        check_id: def.id.to_string(),
        params: params.clone(),
        status: CheckStatus::Skipped,
        passed: false,
        expectation: def.expectation,
        max_deviation: 0.0,
        tolerance: def.tolerance,
        phase: Complex64::new(1.0, 0.0),
        elapsed: Duration::ZERO,
        anchor: def.anchor,
        note: Some(note),
    }
}

/// Runs every registered check (optionally only ids starting with
/// `filter`) over its default parameter sweep. Checks beyond `caps` are
/// reported as skipped; failures and errors never abort the suite.
/// Results are sorted by id, then parameters.
pub fn run_suite(filter: Option<&str>, caps: &SizeCaps) -> Vec<CheckResult> {
    let jobs: Vec<(&CheckDef, CheckParams)> = CHECKS
        .iter()
        .filter(|c| filter.is_none_or(|f| c.id.starts_with(f)))
        .flat_map(|c| (c.sweep)().into_iter().map(move |p| (c, p)))
        .collect();
    let mut results: Vec<CheckResult> = jobs
        .into_par_iter()
        .map(|(def, params)| {
            let needs = (def.needs)(&params);
            match needs {
                Ok((kind, qubits)) if qubits > caps.limit(kind) => skipped(
                    def,
                    &params,
                    format!("needs {qubits} qubits, {kind} cap is {}", caps.limit(kind)),
                ),
                Ok(_) => execute(def, &params).unwrap_or_else(|e| {
                    let mut r = skipped(def, &params, format!("error: {e}"));
                    r.status = CheckStatus::Failed;
                    r.max_deviation = f64::INFINITY;
                    r
                }),
                Err(e) => skipped(def, &params, format!("error: {e}")),
            }
        })
        .collect();
    results.sort_by(|a, b| a.check_id.cmp(&b.check_id).then_with(|| a.params.cmp(&b.params)));
    results
}

// --- helpers ---------------------------------------------------------------

fn i_pow(m: usize) -> Complex64 {
    match m % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

/// Diagonal entries divided by the `x = 0` entry.
fn phase_normalized(d: &DiagonalOperator) -> Vec<Complex64> {
    let e0 = d.entries()[0];
    d.entries().iter().map(|&z| z / e0).collect()
}

fn dense(m: DenseOperator) -> Operator {
    Operator::Dense(m)
}

/// Tracks `|actual - c * expected|` with a single `c` fixed by the first
/// comparison.
struct GlobalPhaseTracker {
    phase: Option<Complex64>,
    worst: f64,
}

impl GlobalPhaseTracker {
    fn new() -> Self {
        Self { phase: None, worst: 0.0 }
    }

    fn observe(&mut self, actual: &[Complex64], expected: &[Complex64]) {
        let phase = *self.phase.get_or_insert_with(|| {
            let overlap: Complex64 = expected.iter().zip(actual).map(|(e, a)| e.conj() * a).sum();
            let r = overlap.norm();
            if r > 0.0 { overlap / r } else { Complex64::new(1.0, 0.0) }
        });
        for (a, e) in actual.iter().zip(expected) {
            self.worst = self.worst.max((a - phase * e).norm());
        }
    }

    fn phase(&self) -> Complex64 {
        self.phase.unwrap_or(Complex64::new(1.0, 0.0))
    }
}

fn parity_bits(x: usize, n_bits: usize) -> usize {
    (x & ((1 << n_bits) - 1)).count_ones() as usize & 1
}

// --- checks ------------------------------------------------------------------

fn check_phase_formula(p: &CheckParams) -> Result<Outcome> {
    let n = p.require_n()?;
    let u = un(n)?;
    let normalized = phase_normalized(&u);
    let worst = normalized
        .iter()
        .enumerate()
        .map(|(x, z)| {
            let k = hamming_weight(x);
            (z - i_pow(k * (n - k))).norm()
        })
        .fold(0.0, f64::max);
    Ok(Outcome::new(worst).with_phase(u.entries()[0]))
}

fn check_parity_dichotomy(p: &CheckParams) -> Result<Outcome> {
    let n = p.require_n()?;
    if n % 2 != 0 {
        return Err(Error::InvalidSize { n, reason: "parity dichotomy needs even n" });
    }
    let odd = if n % 4 == 2 { Complex64::i() } else { -Complex64::i() };
    let u = un(n)?;
    let worst = phase_normalized(&u)
        .iter()
        .enumerate()
        .map(|(x, z)| {
            let expected = if parity(x) { odd } else { Complex64::new(1.0, 0.0) };
            (z - expected).norm()
        })
        .fold(0.0, f64::max);
    Ok(Outcome::new(worst)
        .with_phase(u.entries()[0])
        .with_note(format!("odd-parity phase {}", if n % 4 == 2 { "+i" } else { "-i" })))
}

fn check_ieq(_: &CheckParams) -> Result<Outcome> {
    let pattern: Vec<Complex64> =
        [1.0, -1.0, -1.0, -1.0, -1.0, -1.0, -1.0, 1.0].iter().map(|&v| Complex64::new(v, 0.0)).collect();
    let pattern: Operator = DiagonalOperator::new(3, pattern)?.into();
    let evolved = evolve(&build_hn(3)?.into(), QUARTER_PI_TIME)?;
    let a = equiv_up_to_global_phase(&evolved, &pattern, 1e-10)?;
    let b = equiv_up_to_global_phase(&un(3)?.into(), &ieq_reference().into(), 1e-10)?;
    Ok(Outcome::new(a.max_deviation.max(b.max_deviation)).with_phase(a.phase))
}

fn check_cz_from_ieq(_: &CheckParams) -> Result<Outcome> {
    let r = cz_from_ieq(1e-12)?;
    let block: Vec<String> = r.complementary_block.entries().iter().map(|z| format!("{:+}", z.re)).collect();
    let note = format!(
        "qubit 2 = |0> block diag({}), {} (X(x)X)CZ(X(x)X)",
        block.join(","),
        if r.complementary.equivalent { "equivalent to" } else { "not equivalent to" }
    );
    Ok(Outcome::new(r.cz.max_deviation.max(r.cnot_deviation)).with_phase(r.cz.phase).with_note(note))
}

fn check_parity(p: &CheckParams) -> Result<Outcome> {
    let n = p.require_n()?;
    let u = dense(parity_circuit(n)?.compile()?);
    let r = equiv_up_to_global_phase(&u, &dense(parity_reference(n + 1)?), 1e-9)?;
    Ok(Outcome::new(r.max_deviation).with_phase(r.phase))
}

fn check_parity_negative_control(p: &CheckParams) -> Result<Outcome> {
    let n = p.require_n()?;
    let u = dense(parity_circuit_variant(n, ParityVariant::wrong_for(n))?.compile()?);
    let r = equiv_up_to_global_phase(&u, &dense(parity_reference(n + 1)?), 1e-9)?;
    Ok(Outcome::new(r.max_deviation).with_phase(r.phase))
}

fn check_fanout(p: &CheckParams) -> Result<Outcome> {
    let n = p.require_n()?;
    let u = dense(fanout_circuit(n)?.compile()?);
    let r = equiv_up_to_global_phase(&u, &dense(fanout_reference(n + 1)?), 1e-9)?;
    Ok(Outcome::new(r.max_deviation).with_phase(r.phase))
}

fn check_fanout_simplified(p: &CheckParams) -> Result<Outcome> {
    let n = p.require_n()?;
    let full = fanout_circuit(n)?;
    let simple = simplified_fanout_circuit(n)?;
    let u = dense(simple.compile()?);
    let r = equiv_up_to_global_phase(&u, &dense(fanout_reference(n + 1)?), 1e-9)?;
    let (a, b) = (simple.single_qubit_gate_count(), full.single_qubit_gate_count());
    let mut deviation = r.max_deviation;
    if a >= b {
        deviation = deviation.max(1.0);
    }
    Ok(Outcome::new(deviation)
        .with_phase(r.phase)
        .with_note(format!("single-qubit gates {a} vs {b} unsimplified; {} steps", simple.len())))
}

fn hadamard_all(qubits: usize) -> Result<Operator> {
    let mut c = Circuit::new(qubits);
    for q in 0..qubits {
        c.gate(StandardGate::H, &[q])?;
    }
    Ok(dense(c.compile_with_cap(usize::MAX)?))
}

fn check_hadamard_conjugation(p: &CheckParams) -> Result<Outcome> {
    let qubits = p.require_n()? + 1;
    let h = hadamard_all(qubits)?;
    let conj = compose(&h, &compose(&dense(parity_reference(qubits)?), &h)?)?;
    Ok(Outcome::new(max_abs_diff(&conj, &dense(fanout_reference(qubits)?))?))
}

fn check_kn_offset(p: &CheckParams) -> Result<Outcome> {
    let n = p.require_n()?;
    let k = build_kn(&CouplingMatrix::uniform(n, 1.0))?;
    let h = build_hn(n)?;
    let offset = -(n as f64) / 2.0;
    let worst = k
        .energies()
        .iter()
        .zip(h.energies())
        .map(|(a, b)| (a - b - offset).abs())
        .fold(0.0, f64::max);
    Ok(Outcome::new(worst).with_note(format!("K_n - H_n = {offset}")))
}

fn check_unitary_pow4(p: &CheckParams) -> Result<Outcome> {
    let n = p.require_n()?;
    let u: Operator = un(n)?.into();
    let ud: Operator = un_dagger(n)?.into();
    let id = Operator::identity_diagonal(n)?;
    let u2 = compose(&u, &u)?;
    let u4 = compose(&u2, &u2)?;
    let worst = max_abs_diff(&u4, &id)?.max(max_abs_diff(&compose(&u, &ud)?, &id)?);
    Ok(Outcome::new(worst))
}

fn check_mid_circuit_state(p: &CheckParams) -> Result<Outcome> {
    let n = p.require_n()?;
    let c = parity_circuit(n)?;
    let last = n - 1;
    let mut tracker = GlobalPhaseTracker::new();
    for input in 0..1usize << (n + 1) {
        let mut psi = StateVector::basis(n + 1, input)?;
        c.apply_prefix(&mut psi, 2)?;
        let p = parity_bits(input, last);
        let r = input >> last & 1;
        let rest = input & !(1 << last);
        let mut expected = vec![Complex64::new(0.0, 0.0); 1 << (n + 1)];
        let sign = if r == 1 { -1.0 } else { 1.0 };
        expected[rest] = i_pow(p) * FRAC_1_SQRT_2;
        expected[rest | 1 << last] = i_pow(1 - p) * sign * FRAC_1_SQRT_2;
        tracker.observe(psi.amplitudes(), &expected);
    }
    Ok(Outcome::new(tracker.worst).with_phase(tracker.phase()))
}

fn check_unentangled_control(p: &CheckParams) -> Result<Outcome> {
    let n = p.require_n()?;
    let c = parity_circuit(n)?;
    let last = n - 1;
    let mut tracker = GlobalPhaseTracker::new();
    let mut residual = 0.0f64;
    for input in 0..1usize << (n + 1) {
        let mut psi = StateVector::basis(n + 1, input)?;
        c.apply_prefix(&mut psi, PARITY_CNOT_STEP)?;
        residual = residual.max(psi.schmidt_residual(last)?);
        let p = parity_bits(input, last);
        let r = input >> last & 1;
        let target = (input & !(1 << last)) | ((p ^ r) << last);
        let mut expected = vec![Complex64::new(0.0, 0.0); 1 << (n + 1)];
        expected[target] = i_pow(p);
        tracker.observe(psi.amplitudes(), &expected);
    }
    Ok(Outcome::new(residual.max(tracker.worst))
        .with_phase(tracker.phase())
        .with_note(format!("max Schmidt residual {residual:.3e}")))
}

fn check_parity_like(p: &CheckParams) -> Result<Outcome> {
    let n = p.require_n()?;
    let c = parity_like_circuit(n)?;
    let last = n - 1;
    let mut worst = 0.0f64;
    let mut phases = Vec::with_capacity(1 << last);
    for x in 0..1usize << last {
        let mut psi = StateVector::basis(n, x)?;
        c.apply(&mut psi)?;
        let target = x | parity_bits(x, last) << last;
        let amp = psi.amplitude(target);
        worst = worst.max((1.0 - amp.norm()).abs());
        phases.push((x, amp));
    }
    let reference = phases[0].1;
    let (mut spread, mut vs_ip) = (0.0f64, 0.0f64);
    for &(x, amp) in &phases {
        let rel = amp / reference;
        spread = spread.max((rel - Complex64::new(1.0, 0.0)).norm());
        vs_ip = vs_ip.max((rel - i_pow(parity_bits(x, last))).norm());
    }
    Ok(Outcome::new(worst)
        .with_phase(reference)
        .with_note(format!("phase spread over inputs {spread:.3e}; distance from i^p pattern {vs_ip:.3e}")))
}

fn check_ln_l2_coefficient(p: &CheckParams) -> Result<Outcome> {
    let n = p.require_n()?;
    let l2 = build_l2(n)?;
    let mut best: Option<(f64, f64, f64)> = None;
    // c = 1/8, 2/8, ..., 32/8.
    for step in 1..=32 {
        let c = step as f64 / 8.0;
        let ln = build_ln(&CouplingMatrix::uniform(n, c))?;
        let diff = l2.matrix().sub(ln.matrix())?;
        let offset = diff.get(0, 0);
        let scalar = DenseOperator::identity(n)?.scale(offset);
        let dev = max_abs_diff(&dense(diff), &dense(scalar))?;
        if best.is_none_or(|(_, d, _)| dev < d) {
            best = Some((c, dev, offset.re));
        }
    }
    let (c, dev, offset) = best.expect("non-empty grid");
    Ok(Outcome::new(dev).with_note(format!("coefficient J_ij = {c}; L^2 - L_n = {offset} I")))
}

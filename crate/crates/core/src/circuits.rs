//! Circuit model, builders for the parity/fanout constructions, and the
//! line-oriented circuit text format.
//!
//! Text format, one step per line (`#` starts a comment):
//!
//! ```text
//! QUBITS 3
//! H 1
//! UN 2          # U_n on qubits 0..2; explicit targets may follow
//! SDAG 1
//! CNOT 1 2      # control, target
//! UNDAG 2 0 1
//! ```
//!
//! `QUBITS` is optional; without it the register is sized by the largest
//! target.

use std::fmt;
use std::str::FromStr;

use crate::basis::validate_targets;
use crate::error::{Error, Result};
use crate::gates::StandardGate;
use crate::hamiltonians::{un, un_dagger};
use crate::operator::{DenseOperator, Operator};
use crate::state::StateVector;
use crate::verify::SizeCaps;

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum StepKind {
    Gate(StandardGate),
    /// `U_n` on the step's targets (n = number of targets).
    Un,
    /// `U_n^dagger` on the step's targets.
    UnDagger,
}

impl StepKind {
    pub fn inverse(self) -> Self {
        match self {
            StepKind::Gate(g) => StepKind::Gate(g.inverse()),
            StepKind::Un => StepKind::UnDagger,
            StepKind::UnDagger => StepKind::Un,
        }
    }

    pub fn arity(self) -> Option<usize> {
        match self {
            StepKind::Gate(g) => Some(g.arity()),
            StepKind::Un | StepKind::UnDagger => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Step {
    pub kind: StepKind,
    pub targets: Vec<usize>,
}

impl Step {
    pub fn operator(&self) -> Result<Operator> {
        Ok(match self.kind {
            StepKind::Gate(g) => g.unitary(),
            StepKind::Un => Operator::Diagonal(un(self.targets.len())?),
            StepKind::UnDagger => Operator::Diagonal(un_dagger(self.targets.len())?),
        })
    }

    pub fn is_single_qubit_gate(&self) -> bool {
        matches!(self.kind, StepKind::Gate(g) if g.arity() == 1)
    }
}

impl fmt::Display for Step {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let qubits = |f: &mut fmt::Formatter<'_>| -> fmt::Result {
            for q in &self.targets {
                write!(f, " {q}")?;
            }
            Ok(())
        };
        match self.kind {
            StepKind::Gate(g) => {
                f.write_str(g.name())?;
                qubits(f)
            }
            StepKind::Un | StepKind::UnDagger => {
                let tag = if self.kind == StepKind::Un { "UN" } else { "UNDAG" };
                let m = self.targets.len();
                write!(f, "{tag} {m}")?;
                if self.targets.iter().copied().ne(0..m) {
                    qubits(f)?;
                }
                Ok(())
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Circuit {
    n: usize,
    steps: Vec<Step>,
}

impl Circuit {
    pub fn new(n: usize) -> Self {
        Self { n, steps: Vec::new() }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn steps(&self) -> &[Step] {
        &self.steps
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn push(&mut self, kind: StepKind, targets: &[usize]) -> Result<&mut Self> {
        validate_targets(targets, self.n)?;
        match kind.arity() {
            Some(a) if a != targets.len() => {
                return Err(Error::ArityMismatch { gate: a, targets: targets.len() })
            }
            None if targets.is_empty() => return Err(Error::ArityMismatch { gate: 1, targets: 0 }),
            _ => {}
        }
        self.steps.push(Step { kind, targets: targets.to_vec() });
        Ok(self)
    }

    pub fn gate(&mut self, g: StandardGate, targets: &[usize]) -> Result<&mut Self> {
        self.push(StepKind::Gate(g), targets)
    }

    pub fn single_qubit_gate_count(&self) -> usize {
        self.steps.iter().filter(|s| s.is_single_qubit_gate()).count()
    }

    /// The inverse circuit: steps reversed, each replaced by its inverse.
    pub fn dagger(&self) -> Self {
        let steps = self
            .steps
            .iter()
            .rev()
            .map(|s| Step { kind: s.kind.inverse(), targets: s.targets.clone() })
            .collect();
        Self { n: self.n, steps }
    }

    /// Product of the step unitaries, first step acting first.
    pub fn compile(&self) -> Result<DenseOperator> {
        self.compile_with_cap(SizeCaps::default().dense_cap)
    }

    pub fn compile_with_cap(&self, cap: usize) -> Result<DenseOperator> {
        if self.n > cap {
            return Err(Error::CapExceeded { what: "circuit compilation".into(), n: self.n, cap });
        }
        let mut m = DenseOperator::identity(self.n)?;
        for step in &self.steps {
            m.left_apply(&step.operator()?, &step.targets)?;
        }
        Ok(m)
    }

    /// Runs the first `count` steps on `state`.
    pub fn apply_prefix(&self, state: &mut StateVector, count: usize) -> Result<()> {
        if state.n() != self.n {
            return Err(Error::DimensionMismatch { left: state.n(), right: self.n });
        }
        for step in self.steps.iter().take(count) {
            state.apply(&step.operator()?, &step.targets)?;
        }
        Ok(())
    }

    pub fn apply(&self, state: &mut StateVector) -> Result<()> {
        self.apply_prefix(state, self.steps.len())
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("QUBITS {}\n", self.n);
        for s in &self.steps {
            out.push_str(&s.to_string());
            out.push('\n');
        }
        out
    }
}

impl FromStr for Circuit {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let mut declared: Option<usize> = None;
        let mut parsed: Vec<(usize, StepKind, Vec<usize>)> = Vec::new();
        let uint = |line: usize, tok: &str| {
            tok.parse::<usize>()
                .map_err(|_| Error::Parse { line, msg: format!("expected a qubit index, got `{tok}`") })
        };
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let mut toks = content.split_whitespace();
            let head = toks.next().expect("non-empty").to_ascii_uppercase();
            let args = toks.map(|t| uint(line, t)).collect::<Result<Vec<_>>>()?;
            match head.as_str() {
                "QUBITS" => {
                    if declared.is_some() || !parsed.is_empty() {
                        return Err(Error::Parse { line, msg: "QUBITS must be the first statement".into() });
                    }
                    match args.as_slice() {
                        [n] => declared = Some(*n),
                        _ => return Err(Error::Parse { line, msg: "QUBITS takes one count".into() }),
                    }
                }
                "UN" | "UNDAG" => {
                    let kind = if head == "UN" { StepKind::Un } else { StepKind::UnDagger };
                    let (m, rest) = args
                        .split_first()
                        .ok_or_else(|| Error::Parse { line, msg: format!("{head} needs a qubit count") })?;
                    let targets = if rest.is_empty() {
                        (0..*m).collect()
                    } else if rest.len() == *m {
                        rest.to_vec()
                    } else {
                        return Err(Error::Parse {
                            line,
                            msg: format!("{head} {m} lists {} targets", rest.len()),
                        });
                    };
                    if *m == 0 {
                        return Err(Error::Parse { line, msg: format!("{head} needs at least one qubit") });
                    }
                    parsed.push((line, kind, targets));
                }
                name => {
                    let g = name
                        .parse::<StandardGate>()
                        .map_err(|e| Error::Parse { line, msg: e.to_string() })?;
                    parsed.push((line, StepKind::Gate(g), args));
                }
            }
        }
        let n = declared.unwrap_or_else(|| {
            parsed.iter().flat_map(|(_, _, t)| t.iter().copied()).max().map_or(0, |q| q + 1)
        });
        let mut c = Circuit::new(n);
        for (line, kind, targets) in parsed {
            c.push(kind, &targets).map_err(|e| Error::Parse { line, msg: e.to_string() })?;
        }
        Ok(c)
    }
}

/// Which of `U_n` / `U_n^dagger` opens the parity construction.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum ParityVariant {
    /// Pick by `n mod 4`: `U_n` first when `n = 2 (mod 4)`, `U_n^dagger`
    /// first when `n = 0 (mod 4)`.
    Auto,
    /// `U_n` first regardless of `n`.
    UnFirst,
    /// `U_n^dagger` first regardless of `n`.
    UnDaggerFirst,
}

impl ParityVariant {
    fn opening(self, n: usize) -> StepKind {
        match self {
            ParityVariant::Auto if n.is_multiple_of(4) => StepKind::UnDagger,
            ParityVariant::Auto | ParityVariant::UnFirst => StepKind::Un,
            ParityVariant::UnDaggerFirst => StepKind::UnDagger,
        }
    }

    /// The variant that is wrong for this `n`.
    pub fn wrong_for(n: usize) -> Self {
        if n.is_multiple_of(4) {
            ParityVariant::UnFirst
        } else {
            ParityVariant::UnDaggerFirst
        }
    }
}

fn require_even(n: usize) -> Result<()> {
    if n == 0 || !n.is_multiple_of(2) {
        return Err(Error::InvalidSize { n, reason: "construction needs a positive even n" });
    }
    Ok(())
}

/// Parity of qubits `0..n-1` into qubit `n`, using one evolution, its
/// inverse and a CNOT from qubit `n-1`.
pub fn parity_circuit(n: usize) -> Result<Circuit> {
    parity_circuit_variant(n, ParityVariant::Auto)
}

pub fn parity_circuit_variant(n: usize, variant: ParityVariant) -> Result<Circuit> {
    require_even(n)?;
    let open = variant.opening(n);
    let evolve_on: Vec<usize> = (0..n).collect();
    let last = n - 1;
    let mut c = Circuit::new(n + 1);
    c.gate(StandardGate::H, &[last])?
        .push(open, &evolve_on)?
        .gate(StandardGate::Sdag, &[last])?
        .gate(StandardGate::H, &[last])?
        .gate(StandardGate::Cnot, &[last, n])?
        .gate(StandardGate::H, &[last])?
        .gate(StandardGate::S, &[last])?
        .push(open.inverse(), &evolve_on)?
        .gate(StandardGate::H, &[last])?;
    Ok(c)
}

/// Index of the CNOT step in [`parity_circuit`].
pub const PARITY_CNOT_STEP: usize = 4;

/// `n`-qubit circuit that writes the parity of qubits `0..n-1` onto qubit
/// `n-1` when that qubit starts in `|0>`, with a single evolution.
pub fn parity_like_circuit(n: usize) -> Result<Circuit> {
    require_even(n)?;
    let last = n - 1;
    let evolve_on: Vec<usize> = (0..n).collect();
    let mut c = Circuit::new(n);
    c.gate(StandardGate::H, &[last])?
        .push(ParityVariant::Auto.opening(n), &evolve_on)?
        .gate(StandardGate::Sdag, &[last])?
        .gate(StandardGate::H, &[last])?
        .gate(StandardGate::Sdag, &[last])?;
    Ok(c)
}

/// Fanout from qubit `n` onto qubits `0..n-1`: the parity circuit
/// conjugated by Hadamards on every wire.
pub fn fanout_circuit(n: usize) -> Result<Circuit> {
    let inner = parity_circuit(n)?;
    let mut c = Circuit::new(n + 1);
    for q in 0..=n {
        c.gate(StandardGate::H, &[q])?;
    }
    c.steps.extend(inner.steps.iter().cloned());
    for q in 0..=n {
        c.gate(StandardGate::H, &[q])?;
    }
    Ok(c)
}

/// [`fanout_circuit`] after cancelling adjacent inverse pairs.
pub fn simplified_fanout_circuit(n: usize) -> Result<Circuit> {
    Ok(cancel_inverse_pairs(&fanout_circuit(n)?))
}

/// Removes pairs of mutually inverse steps that are adjacent on their
/// wires (no intervening step touches any of their qubits), repeatedly.
pub fn cancel_inverse_pairs(c: &Circuit) -> Circuit {
    let mut out: Vec<Step> = Vec::with_capacity(c.steps.len());
    for step in &c.steps {
        let blocker = out
            .iter()
            .rposition(|prev| prev.targets.iter().any(|q| step.targets.contains(q)));
        match blocker {
            Some(j) if out[j].targets == step.targets && out[j].kind == step.kind.inverse() => {
                out.remove(j);
            }
            _ => out.push(step.clone()),
        }
    }
    Circuit { n: c.n, steps: out }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::equiv::equiv_up_to_global_phase;
    use crate::gates::{fanout_reference, parity_reference};
    use crate::operator::max_abs_diff;

    fn op(m: DenseOperator) -> Operator {
        m.into()
    }

    #[test]
    fn empty_circuit_is_identity() {
        assert_eq!(Circuit::new(3).compile().unwrap(), DenseOperator::identity(3).unwrap());
    }

    #[test]
    fn single_cnot_embeds() {
        let mut c = Circuit::new(2);
        c.gate(StandardGate::Cnot, &[0, 1]).unwrap();
        assert_eq!(op(c.compile().unwrap()), StandardGate::Cnot.unitary());
    }

    #[test]
    fn hh_is_identity() {
        let mut c = Circuit::new(1);
        c.gate(StandardGate::H, &[0]).unwrap().gate(StandardGate::H, &[0]).unwrap();
        let id = op(DenseOperator::identity(1).unwrap());
        assert!(max_abs_diff(&op(c.compile().unwrap()), &id).unwrap() < 1e-15);
        assert!(cancel_inverse_pairs(&c).is_empty());
    }

    #[test]
    fn push_validates() {
        let mut c = Circuit::new(2);
        assert!(c.gate(StandardGate::Cnot, &[0]).is_err());
        assert!(c.gate(StandardGate::H, &[2]).is_err());
        assert!(c.push(StepKind::Un, &[]).is_err());
        assert!(c.push(StepKind::Un, &[1, 1]).is_err());
    }

    #[test]
    fn compile_respects_cap() {
        let c = Circuit::new(5);
        assert!(matches!(c.compile_with_cap(4), Err(Error::CapExceeded { .. })));
    }

    #[test]
    fn odd_n_rejected() {
        assert!(parity_circuit(3).is_err());
        assert!(parity_like_circuit(5).is_err());
        assert!(fanout_circuit(1).is_err());
        assert!(simplified_fanout_circuit(0).is_err());
    }

    #[test]
    fn parity_small_cases() {
        for n in [2, 4] {
            let u = op(parity_circuit(n).unwrap().compile().unwrap());
            let r = equiv_up_to_global_phase(&u, &op(parity_reference(n + 1).unwrap()), 1e-9).unwrap();
            assert!(r.equivalent, "n={n}: {r:?}");
        }
    }

    #[test]
    fn wrong_variant_fails() {
        for n in [2, 4] {
            let u = op(parity_circuit_variant(n, ParityVariant::wrong_for(n)).unwrap().compile().unwrap());
            let r = equiv_up_to_global_phase(&u, &op(parity_reference(n + 1).unwrap()), 1e-9).unwrap();
            assert!(!r.equivalent && r.max_deviation > 0.5, "n={n}: {r:?}");
        }
    }

    #[test]
    fn fanout_small_case() {
        let u = op(fanout_circuit(2).unwrap().compile().unwrap());
        let r = equiv_up_to_global_phase(&u, &op(fanout_reference(3).unwrap()), 1e-9).unwrap();
        assert!(r.equivalent);
    }

    #[test]
    fn fanout_control_zero_keeps_targets() {
        let c = fanout_circuit(2).unwrap();
        for x in 0..4 {
            let mut psi = StateVector::basis(3, x).unwrap();
            c.apply(&mut psi).unwrap();
            assert!((psi.amplitude(x).norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn simplification_drops_gates() {
        for n in [2, 4, 6] {
            let full = fanout_circuit(n).unwrap();
            let simple = simplified_fanout_circuit(n).unwrap();
            assert!(simple.single_qubit_gate_count() < full.single_qubit_gate_count());
            assert_eq!(simple.single_qubit_gate_count() + 4, full.single_qubit_gate_count());
            let u = op(simple.compile().unwrap());
            let r = equiv_up_to_global_phase(&u, &op(fanout_reference(n + 1).unwrap()), 1e-9).unwrap();
            assert!(r.equivalent, "n={n}");
        }
    }

    #[test]
    fn cancellation_sees_through_disjoint_wires() {
        let mut c = Circuit::new(2);
        c.gate(StandardGate::S, &[0])
            .unwrap()
            .gate(StandardGate::X, &[1])
            .unwrap()
            .gate(StandardGate::Sdag, &[0])
            .unwrap()
            .gate(StandardGate::Cnot, &[0, 1])
            .unwrap()
            .gate(StandardGate::Cnot, &[1, 0])
            .unwrap();
        let s = cancel_inverse_pairs(&c);
        assert_eq!(s.len(), 3);
        assert_eq!(s.steps()[0].kind, StepKind::Gate(StandardGate::X));
    }

    #[test]
    fn dagger_round_trip() {
        for c in [parity_circuit(2).unwrap(), parity_like_circuit(4).unwrap(), fanout_circuit(4).unwrap()] {
            let u = c.compile().unwrap();
            let v = c.dagger().compile().unwrap();
            let id = op(DenseOperator::identity(c.n()).unwrap());
            assert!(max_abs_diff(&op(u.matmul(&v).unwrap()), &id).unwrap() < 1e-10);
        }
    }

    #[test]
    fn text_round_trip() {
        let c = fanout_circuit(4).unwrap();
        let text = c.to_text();
        assert!(text.contains("UN 4\n") || text.contains("UNDAG 4\n"));
        assert_eq!(text.parse::<Circuit>().unwrap(), c);

        let mut odd = Circuit::new(4);
        odd.push(StepKind::Un, &[3, 1]).unwrap();
        assert_eq!(odd.to_text(), "QUBITS 4\nUN 2 3 1\n");
        assert_eq!(odd.to_text().parse::<Circuit>().unwrap(), odd);
    }

    #[test]
    fn text_parse_details() {
        let c: Circuit = "# bell\nh 0\ncx 0 1  # entangle\n".parse().unwrap();
        assert_eq!(c.n(), 2);
        assert_eq!(c.len(), 2);
        for bad in ["FOO 0", "H x", "CNOT 0", "UN 2 0", "H 0\nQUBITS 2", "QUBITS 1\nH 1", "UN 0"] {
            assert!(matches!(bad.parse::<Circuit>(), Err(Error::Parse { .. })), "{bad}");
        }
    }
}

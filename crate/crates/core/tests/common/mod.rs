//! Naive dense model: every operator is a full `Vec<Vec<C>>` built by
//! enumerating basis pairs. Shares nothing with the crate's kernels.
#![allow(dead_code)]

use fanout_core::circuits::{Circuit, StepKind};
use fanout_core::gates::StandardGate;
use fanout_core::Complex64 as C;

pub type Mat = Vec<Vec<C>>;

pub const ZERO: C = C { re: 0.0, im: 0.0 };
pub const ONE: C = C { re: 1.0, im: 0.0 };
pub const I: C = C { re: 0.0, im: 1.0 };

pub fn i_pow(k: usize) -> C {
    [ONE, I, -ONE, -I][k % 4]
}

pub fn weight(x: usize) -> usize {
    let mut w = 0;
    let mut y = x;
    while y > 0 {
        w += y & 1;
        y >>= 1;
    }
    w
}

pub fn identity(dim: usize) -> Mat {
    (0..dim).map(|r| (0..dim).map(|c| if r == c { ONE } else { ZERO }).collect()).collect()
}

pub fn matmul(a: &Mat, b: &Mat) -> Mat {
    let dim = a.len();
    let mut out = vec![vec![ZERO; dim]; dim];
    for r in 0..dim {
        for k in 0..dim {
            if a[r][k] == ZERO {
                continue;
            }
            for c in 0..dim {
                out[r][c] += a[r][k] * b[k][c];
            }
        }
    }
    out
}

pub fn dagger(a: &Mat) -> Mat {
    let dim = a.len();
    (0..dim).map(|r| (0..dim).map(|c| a[c][r].conj()).collect()).collect()
}

pub fn diag(entries: &[C]) -> Mat {
    let dim = entries.len();
    (0..dim).map(|r| (0..dim).map(|c| if r == c { entries[r] } else { ZERO }).collect()).collect()
}

pub fn small_gate(g: StandardGate) -> Mat {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let r = |v: f64| C::new(v, 0.0);
    match g {
        StandardGate::H => vec![vec![r(h), r(h)], vec![r(h), r(-h)]],
        StandardGate::S => diag(&[ONE, I]),
        StandardGate::Sdag => diag(&[ONE, -I]),
        StandardGate::Z => diag(&[ONE, -ONE]),
        StandardGate::X => vec![vec![ZERO, ONE], vec![ONE, ZERO]],
        StandardGate::Cz => diag(&[ONE, ONE, ONE, -ONE]),
        // Local bit 0 is the control.
        StandardGate::Cnot => permutation(4, |x| if x & 1 == 1 { x ^ 2 } else { x }),
    }
}

/// Embeds `g` (local bit j on `targets[j]`) into `n` qubits.
pub fn embed(g: &Mat, targets: &[usize], n: usize) -> Mat {
    let dim = 1usize << n;
    let mask: usize = targets.iter().map(|&q| 1 << q).sum();
    let local = |x: usize| targets.iter().enumerate().map(|(j, &q)| ((x >> q) & 1) << j).sum::<usize>();
    let mut out = vec![vec![ZERO; dim]; dim];
    for r in 0..dim {
        for c in 0..dim {
            if r & !mask == c & !mask {
                out[r][c] = g[local(r)][local(c)];
            }
        }
    }
    out
}

/// `i^{k(m-k)}` on `m` qubits, exact.
pub fn un_entries(m: usize, dagger: bool) -> Vec<C> {
    (0..1usize << m)
        .map(|x| {
            let k = weight(x);
            let z = i_pow(k * (m - k));
            if dagger { z.conj() } else { z }
        })
        .collect()
}

pub fn compile(c: &Circuit) -> Mat {
    let n = c.n();
    let mut u = identity(1 << n);
    for s in c.steps() {
        let g = match s.kind {
            StepKind::Gate(g) => small_gate(g),
            StepKind::Un => diag(&un_entries(s.targets.len(), false)),
            StepKind::UnDagger => diag(&un_entries(s.targets.len(), true)),
        };
        u = matmul(&embed(&g, &s.targets, n), &u);
    }
    u
}

pub fn permutation(dim: usize, f: impl Fn(usize) -> usize) -> Mat {
    let mut m = vec![vec![ZERO; dim]; dim];
    for x in 0..dim {
        m[f(x)][x] = ONE;
    }
    m
}

/// `qubits`-qubit parity gate: the last qubit accumulates the others' XOR.
pub fn parity_gate(qubits: usize) -> Mat {
    let last = qubits - 1;
    permutation(1 << qubits, |x| x ^ ((weight(x & ((1 << last) - 1)) & 1) << last))
}

/// `qubits`-qubit fanout: the last qubit, when set, flips all others.
pub fn fanout_gate(qubits: usize) -> Mat {
    let last = qubits - 1;
    permutation(1 << qubits, |x| if (x >> last) & 1 == 1 { x ^ ((1 << last) - 1) } else { x })
}

/// Max deviation of `a` from `phase * b` with the overlap-maximizing phase.
pub fn phase_distance(a: &Mat, b: &Mat) -> f64 {
    let overlap: C = a.iter().flatten().zip(b.iter().flatten()).map(|(x, y)| x * y.conj()).sum();
    let phase = if overlap.norm() > 1e-12 { overlap / overlap.norm() } else { ONE };
    let mut worst = 0.0f64;
    for (ra, rb) in a.iter().zip(b) {
        for (x, y) in ra.iter().zip(rb) {
            worst = worst.max((x - phase * y).norm());
        }
    }
    worst
}

pub fn max_diff(a: &Mat, b: &Mat) -> f64 {
    a.iter().flatten().zip(b.iter().flatten()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

pub fn to_mat(op: &fanout_core::Operator) -> Mat {
    let dim = op.dim();
    (0..dim).map(|r| (0..dim).map(|c| op.entry(r, c)).collect()).collect()
}

/// Single-qubit Pauli on `q`, `n` qubits.
pub fn pauli(axis: char, q: usize, n: usize) -> Mat {
    let p = match axis {
        'X' => vec![vec![ZERO, ONE], vec![ONE, ZERO]],
        'Y' => vec![vec![ZERO, -I], vec![I, ZERO]],
        'Z' => diag(&[ONE, -ONE]),
        _ => unreachable!(),
    };
    embed(&p, &[q], n)
}

pub fn add(a: &Mat, b: &Mat, scale: f64) -> Mat {
    a.iter().zip(b).map(|(ra, rb)| ra.iter().zip(rb).map(|(x, y)| x + y * scale).collect()).collect()
}

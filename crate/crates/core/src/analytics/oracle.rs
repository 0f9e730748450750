//! Exhaustive-enumeration reference for per-control-run detection and Eve's
//! guess accuracy.
//!
//! Everything here is exact: amplitudes are unnormalized Gaussian integers
//! (states and Bell vectors are scaled by powers of √2) and branch weights are
//! ratios of integer squared norms. Nothing is shared with the floating-point
//! simulator except the strategy definitions themselves, so agreement between
//! the two is evidence for both.

use std::ops::{Add, Mul};

use num_rational::Ratio;
use serde::Serialize;

use crate::adversary::AttackStrategy;
use crate::quantum::BitPair;

pub type Exact = Ratio<i64>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
struct Gauss {
    re: i64,
    im: i64,
}

impl Gauss {
    const ZERO: Gauss = Gauss { re: 0, im: 0 };
    const ONE: Gauss = Gauss { re: 1, im: 0 };
    const I: Gauss = Gauss { re: 0, im: 1 };

    fn conj(self) -> Gauss {
        Gauss { re: self.re, im: -self.im }
    }

    fn norm(self) -> i64 {
        self.re * self.re + self.im * self.im
    }

    fn neg(self) -> Gauss {
        Gauss { re: -self.re, im: -self.im }
    }
}

impl Add for Gauss {
    type Output = Gauss;
    fn add(self, o: Gauss) -> Gauss {
        Gauss { re: self.re + o.re, im: self.im + o.im }
    }
}

impl Mul for Gauss {
    type Output = Gauss;
    fn mul(self, o: Gauss) -> Gauss {
        Gauss {
            re: self.re * o.re - self.im * o.im,
            im: self.re * o.im + self.im * o.re,
        }
    }
}

/// Encoding matrices, written out independently of the simulator's table.
fn encoding(code: usize) -> [[Gauss; 2]; 2] {
    let (o, z, i) = (Gauss::ONE, Gauss::ZERO, Gauss::I);
    match code {
        0 => [[o, z], [z, o]],
        1 => [[z, o], [o, z]],
        2 => [[z, i.neg()], [i, z]],
        _ => [[o, z], [z, o.neg()]],
    }
}

/// Unnormalized ket; qubit 0 is the most significant index bit.
#[derive(Debug, Clone, PartialEq)]
struct Ket {
    qubits: usize,
    amps: Vec<Gauss>,
}

impl Ket {
    fn bit(&self, q: usize) -> usize {
        1 << (self.qubits - 1 - q)
    }

    fn norm(&self) -> i64 {
        self.amps.iter().map(|a| a.norm()).sum()
    }

    /// `(|↑↓⟩ + |↓↑⟩)` with `C_code` applied to the second qubit.
    fn epr(code: usize) -> Ket {
        let mut amps = vec![Gauss::ZERO; 4];
        amps[0b01] = Gauss::ONE;
        amps[0b10] = Gauss::ONE;
        let mut ket = Ket { qubits: 2, amps };
        ket.apply(1, code);
        ket
    }

    fn tensor(&self, other: &Ket) -> Ket {
        let mut amps = Vec::with_capacity(self.amps.len() * other.amps.len());
        for &a in &self.amps {
            for &b in &other.amps {
                amps.push(a * b);
            }
        }
        Ket { qubits: self.qubits + other.qubits, amps }
    }

    fn apply(&mut self, q: usize, code: usize) {
        let m = encoding(code);
        let bit = self.bit(q);
        for idx in 0..self.amps.len() {
            if idx & bit == 0 {
                let (u, d) = (self.amps[idx], self.amps[idx | bit]);
                self.amps[idx] = m[0][0] * u + m[0][1] * d;
                self.amps[idx | bit] = m[1][0] * u + m[1][1] * d;
            }
        }
    }

    /// Z-basis measurement of qubit `q`: `(outcome, weight, post-measurement ket)`.
    fn measure_z(&self, q: usize) -> Vec<(usize, Exact, Ket)> {
        let total = self.norm();
        let bit = self.bit(q);
        (0..2)
            .filter_map(|outcome| {
                let mut post = self.clone();
                for (idx, a) in post.amps.iter_mut().enumerate() {
                    if usize::from(idx & bit != 0) != outcome {
                        *a = Gauss::ZERO;
                    }
                }
                let w = post.norm();
                (w > 0).then(|| (outcome, Exact::new(w, total), post))
            })
            .collect()
    }

    /// Bell measurement of `(qa, qb)`: `(code index, weight, post-measurement ket)`.
    fn measure_bell(&self, qa: usize, qb: usize) -> Vec<(usize, Exact, Ket)> {
        let total = self.norm();
        let (ba, bb) = (self.bit(qa), self.bit(qb));
        let mut branches = Vec::new();
        for code in 0..4 {
            let v = Ket::epr(code).amps; // index 2a + b, squared norm 2
            let mut post = Ket {
                qubits: self.qubits,
                amps: vec![Gauss::ZERO; self.amps.len()],
            };
            let mut weight = 0;
            for base in (0..self.amps.len()).filter(|idx| idx & (ba | bb) == 0) {
                let slots = [base, base | bb, base | ba, base | ba | bb];
                let proj = slots
                    .iter()
                    .zip(&v)
                    .fold(Gauss::ZERO, |acc, (&idx, vk)| acc + vk.conj() * self.amps[idx]);
                weight += proj.norm();
                for (&idx, &vk) in slots.iter().zip(&v) {
                    post.amps[idx] = vk * proj;
                }
            }
            if weight > 0 {
                // |⟨v|ψ⟩|² / (‖v‖² ‖ψ‖²) with ‖v‖² = 2
                branches.push((code, Exact::new(weight, 2 * total), post));
            }
        }
        branches
    }
}

/// Exact Bell-outcome distribution of an unnormalized two-qubit vector given
/// as `(re, im)` integer pairs over `|↑↑⟩, |↑↓⟩, |↓↑⟩, |↓↓⟩`.
pub fn bell_distribution(amps: [(i64, i64); 4]) -> [Exact; 4] {
    let ket = Ket {
        qubits: 2,
        amps: amps.iter().map(|&(re, im)| Gauss { re, im }).collect(),
    };
    let mut dist = [Exact::from_integer(0); 4];
    for (code, w, _) in ket.measure_bell(0, 1) {
        dist[code] = w;
    }
    dist
}

/// Exact Bell-outcome distribution of `C_alice · |Ψ_bob⟩`.
pub fn encoded_bell_distribution(bob: BitPair, alice: BitPair) -> [Exact; 4] {
    let mut ket = Ket::epr(bob.index());
    ket.apply(1, alice.index());
    let a: Vec<(i64, i64)> = ket.amps.iter().map(|g| (g.re, g.im)).collect();
    bell_distribution([a[0], a[1], a[2], a[3]])
}

/// One leaf of the scenario tree for a fixed `(alice, bob)` code pair.
struct Leaf {
    weight: Exact,
    bob_outcome: usize,
    learned: Option<usize>,
}

fn leaves(strategy: &AttackStrategy, bob: usize, alice: usize) -> Option<Vec<Leaf>> {
    const H: usize = 0;
    const T: usize = 1;
    let one = Exact::from_integer(1);
    let mut out = Vec::new();
    let bob_measures = |weight: Exact, ket: &Ket, learned: Option<usize>, out: &mut Vec<Leaf>| {
        for (outcome, w, _) in ket.measure_bell(H, T) {
            out.push(Leaf {
                weight: weight * w,
                bob_outcome: outcome,
                learned,
            });
        }
    };
    match strategy {
        AttackStrategy::None => {
            let mut ket = Ket::epr(bob);
            ket.apply(T, alice);
            bob_measures(one, &ket, None, &mut out);
        }
        AttackStrategy::DisturbMeasure => {
            let mut ket = Ket::epr(bob);
            ket.apply(T, alice);
            for (_, w, post) in ket.measure_z(T) {
                bob_measures(w, &post, None, &mut out);
            }
        }
        AttackStrategy::DisturbPauliZ | AttackStrategy::DisturbPauli4 => {
            let kicks: &[usize] = if *strategy == AttackStrategy::DisturbPauliZ {
                &[0, 3]
            } else {
                &[0, 1, 2, 3]
            };
            for &kick in kicks {
                let mut ket = Ket::epr(bob);
                ket.apply(T, alice);
                ket.apply(T, kick);
                bob_measures(Exact::new(1, kicks.len() as i64), &ket, None, &mut out);
            }
        }
        AttackStrategy::InterceptResendLiteral | AttackStrategy::InterceptResendBlind => {
            // qubits: h, t, H, T
            let mut ket = Ket::epr(bob).tensor(&Ket::epr(0));
            ket.apply(3, alice);
            for (learned, w, mut post) in ket.measure_bell(2, 3) {
                if *strategy == AttackStrategy::InterceptResendLiteral {
                    post.apply(T, learned);
                }
                bob_measures(w, &post, Some(learned), &mut out);
            }
        }
        AttackStrategy::EntangleMeasure { .. } => return None,
    }
    Some(out)
}

/// Exact per-run figures for one strategy, averaged uniformly over all 16
/// `(alice, bob)` code pairs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OracleRow {
    /// Probability a control run fails.
    #[serde(serialize_with = "ser_exact")]
    pub per_cm_detection: Exact,
    /// Probability Eve's guess of Alice's pair is right on a message run.
    #[serde(serialize_with = "ser_exact")]
    pub alice_guess_accuracy: Exact,
    /// Same for Bob's pair.
    #[serde(serialize_with = "ser_exact")]
    pub bob_guess_accuracy: Exact,
}

fn ser_exact<S: serde::Serializer>(value: &Exact, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&value.to_string())
}

/// `None` for strategies with irrational amplitudes (the entangling probe).
pub fn oracle_row(strategy: &AttackStrategy) -> Option<OracleRow> {
    let zero = Exact::from_integer(0);
    let blind_guess = Exact::new(1, 4);
    let mut fail = zero;
    let mut alice_hit = zero;
    let mut bob_hit = zero;
    for bob in 0..4 {
        for alice in 0..4 {
            for leaf in leaves(strategy, bob, alice)? {
                if leaf.bob_outcome != alice ^ bob {
                    fail += leaf.weight;
                }
                match leaf.learned {
                    Some(learned) => {
                        if learned == alice {
                            alice_hit += leaf.weight;
                        }
                        if leaf.bob_outcome ^ learned == bob {
                            bob_hit += leaf.weight;
                        }
                    }
                    None => {
                        alice_hit += leaf.weight * blind_guess;
                        bob_hit += leaf.weight * blind_guess;
                    }
                }
            }
        }
    }
    let cases = Exact::from_integer(16);
    Some(OracleRow {
        per_cm_detection: fail / cases,
        alice_guess_accuracy: alice_hit / cases,
        bob_guess_accuracy: bob_hit / cases,
    })
}

pub fn to_f64(value: Exact) -> f64 {
    *value.numer() as f64 / *value.denom() as f64
}

/// The per-control-run detection figure the protocol's security argument
/// states for each attack family.
pub fn claimed_per_cm_detection(strategy: &AttackStrategy) -> Option<f64> {
    match strategy {
        AttackStrategy::None => None,
        AttackStrategy::EntangleMeasure { beta2 } => Some(*beta2),
        _ => Some(0.75),
    }
}

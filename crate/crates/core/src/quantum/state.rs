use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::density::DensityMatrix;
use super::pauli::pauli_matrix;
use super::{BitPair, StateError};

/// Tolerance on `Σ|amp|² = 1`.
pub const NORM_TOLERANCE: f64 = 1e-9;

/// Largest system any scenario needs: h, t, H, T and e.
pub const MAX_REGISTERS: usize = 5;

/// A named two-level register.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Register {
    /// Bob's home qubit `h`.
    #[serde(rename = "h")]
    Home,
    /// The travel qubit `t` that makes the ping-pong round trip.
    #[serde(rename = "t")]
    Travel,
    /// Home qubit `H` of Eve's substitute pair.
    #[serde(rename = "H")]
    EveHome,
    /// Travel qubit `T` of Eve's substitute pair.
    #[serde(rename = "T")]
    EveTravel,
    /// Eve's probe ancilla `e`.
    #[serde(rename = "e")]
    Ancilla,
}

impl Register {
    pub fn label(self) -> &'static str {
        match self {
            Register::Home => "h",
            Register::Travel => "t",
            Register::EveHome => "H",
            Register::EveTravel => "T",
            Register::Ancilla => "e",
        }
    }
}

impl fmt::Display for Register {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Pure state of up to five named qubits.
///
/// Amplitudes are indexed by the computational basis over `registers`, the
/// first register being the most significant bit. A register bit of 0 is
/// `|↑⟩` and 1 is `|↓⟩`; for the ancilla these are `|χ0⟩` and `|χ1⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    registers: Vec<Register>,
    amps: Vec<Complex64>,
}

impl StateVector {
    /// Validates register uniqueness, size, finiteness and normalization.
    pub fn from_amplitudes(registers: Vec<Register>, amps: Vec<Complex64>) -> Result<Self, StateError> {
        if registers.is_empty() || registers.len() > MAX_REGISTERS {
            return Err(StateError::TooManyRegisters(registers.len()));
        }
        for (pos, reg) in registers.iter().enumerate() {
            if registers[..pos].contains(reg) {
                return Err(StateError::DuplicateRegister(*reg));
            }
        }
        if amps.len() != 1 << registers.len() {
            return Err(StateError::DimensionMismatch {
                expected: 1 << registers.len(),
                actual: amps.len(),
            });
        }
        if amps.iter().any(|a| !a.re.is_finite() || !a.im.is_finite()) {
            return Err(StateError::NonFinite);
        }
        let state = Self { registers, amps };
        state.check_norm()?;
        Ok(state)
    }

    /// Computational basis state `|index⟩`.
    pub fn basis(registers: Vec<Register>, index: usize) -> Result<Self, StateError> {
        let dim = 1usize << registers.len().min(MAX_REGISTERS + 1);
        if index >= dim {
            return Err(StateError::DimensionMismatch { expected: dim, actual: index });
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); dim];
        amps[index] = Complex64::new(1.0, 0.0);
        Self::from_amplitudes(registers, amps)
    }

    /// `(1 ⊗ C_code)(|↑↓⟩ + |↓↑⟩)/√2` over `(home, travel)`.
    pub fn bell_pair(home: Register, travel: Register, code: BitPair) -> Result<Self, StateError> {
        let amps = bell_vector(code).to_vec();
        Self::from_amplitudes(vec![home, travel], amps)
    }

    /// `|Ψ_{a,b}⟩` on Bob's registers `h`, `t`.
    pub fn bell(code: BitPair) -> Self {
        Self::bell_pair(Register::Home, Register::Travel, code).expect("two distinct registers")
    }

    pub fn registers(&self) -> &[Register] {
        &self.registers
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn amplitude(&self, index: usize) -> Complex64 {
        self.amps[index]
    }

    pub fn contains(&self, reg: Register) -> bool {
        self.registers.contains(&reg)
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    fn check_norm(&self) -> Result<(), StateError> {
        let norm = self.norm_sqr();
        if (norm - 1.0).abs() > NORM_TOLERANCE {
            return Err(StateError::NotNormalized(norm));
        }
        Ok(())
    }

    /// `⟨self|other⟩`; both states must share the same register order.
    pub fn inner(&self, other: &StateVector) -> Result<Complex64, StateError> {
        if self.registers != other.registers {
            return Err(StateError::RegisterOrderMismatch);
        }
        Ok(self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum())
    }

    /// `|⟨self|other⟩|²`, which ignores global phase.
    pub fn overlap(&self, other: &StateVector) -> Result<f64, StateError> {
        Ok(self.inner(other)?.norm_sqr())
    }

    /// Multiplies every amplitude by a unit complex number.
    pub fn with_global_phase(&self, phase: Complex64) -> Result<Self, StateError> {
        if (phase.norm() - 1.0).abs() > NORM_TOLERANCE {
            return Err(StateError::NotNormalized(phase.norm_sqr()));
        }
        Ok(Self {
            registers: self.registers.clone(),
            amps: self.amps.iter().map(|a| a * phase).collect(),
        })
    }

    /// Bit mask of `reg` within a basis index.
    fn mask(&self, reg: Register) -> Result<usize, StateError> {
        let pos = self
            .registers
            .iter()
            .position(|&r| r == reg)
            .ok_or(StateError::UnknownRegister(reg))?;
        Ok(1 << (self.registers.len() - 1 - pos))
    }

    /// `self ⊗ other`, with `other`'s registers appended.
    pub fn tensor(&self, other: &StateVector) -> Result<Self, StateError> {
        if let Some(dup) = other.registers.iter().find(|r| self.registers.contains(r)) {
            return Err(StateError::DuplicateRegister(*dup));
        }
        let mut registers = self.registers.clone();
        registers.extend_from_slice(&other.registers);
        if registers.len() > MAX_REGISTERS {
            return Err(StateError::TooManyRegisters(registers.len()));
        }
        let amps = self
            .amps
            .iter()
            .flat_map(|a| other.amps.iter().map(move |b| a * b))
            .collect();
        Ok(Self { registers, amps })
    }

    /// Applies an arbitrary single-qubit matrix to `reg`.
    fn apply_single(&mut self, reg: Register, m: &[[Complex64; 2]; 2]) -> Result<(), StateError> {
        let mask = self.mask(reg)?;
        for idx in 0..self.amps.len() {
            if idx & mask != 0 {
                continue;
            }
            let up = self.amps[idx];
            let down = self.amps[idx | mask];
            self.amps[idx] = m[0][0] * up + m[0][1] * down;
            self.amps[idx | mask] = m[1][0] * up + m[1][1] * down;
        }
        Ok(())
    }

    /// Applies `C_code` to `reg`.
    pub fn apply_pauli(&mut self, reg: Register, code: BitPair) -> Result<(), StateError> {
        if code == BitPair::ZERO {
            // still reject unknown registers
            self.mask(reg)?;
            return Ok(());
        }
        self.apply_single(reg, &pauli_matrix(code))?;
        debug_assert!((self.norm_sqr() - 1.0).abs() <= NORM_TOLERANCE);
        Ok(())
    }

    /// Extends the state with `reg` in its index-0 (fiducial) state `|χ⟩`.
    pub fn attach_ancilla(&mut self, reg: Register) -> Result<(), StateError> {
        if self.contains(reg) {
            return Err(StateError::DuplicateRegister(reg));
        }
        if self.registers.len() == MAX_REGISTERS {
            return Err(StateError::TooManyRegisters(MAX_REGISTERS + 1));
        }
        let zero = Complex64::new(0.0, 0.0);
        self.amps = self.amps.iter().flat_map(|&a| [a, zero]).collect();
        self.registers.push(reg);
        Ok(())
    }

    /// Eve's probe `E`:
    /// `|↓⟩|χ⟩ → α|↓⟩|χ0⟩ + β|↑⟩|χ1⟩` and `|↑⟩|χ⟩ → α|↑⟩|χ0⟩ + β|↓⟩|χ1⟩`.
    ///
    /// Only defined when `ancilla` is in `|χ⟩` in every branch of the state.
    pub fn entangling_probe(
        &mut self,
        target: Register,
        ancilla: Register,
        alpha: f64,
        beta: f64,
    ) -> Result<(), StateError> {
        if !alpha.is_finite() || !beta.is_finite() || (alpha * alpha + beta * beta - 1.0).abs() > 1e-12 {
            return Err(StateError::ProbeNormalization { alpha, beta });
        }
        let target_mask = self.mask(target)?;
        let ancilla_mask = self.mask(ancilla)?;
        if target_mask == ancilla_mask {
            return Err(StateError::DuplicateRegister(target));
        }
        if self
            .amps
            .iter()
            .enumerate()
            .any(|(idx, a)| idx & ancilla_mask != 0 && a.norm_sqr() > NORM_TOLERANCE)
        {
            return Err(StateError::AncillaNotFiducial(ancilla));
        }
        let mut out = vec![Complex64::new(0.0, 0.0); self.amps.len()];
        for (idx, &amp) in self.amps.iter().enumerate() {
            if idx & ancilla_mask != 0 {
                continue;
            }
            out[idx] += alpha * amp;
            out[idx ^ target_mask ^ ancilla_mask] += beta * amp;
        }
        self.amps = out;
        self.check_norm()
    }

    /// Born probabilities of `reg` reading 0 (`|↑⟩`) and 1 (`|↓⟩`).
    pub fn z_probabilities(&self, reg: Register) -> Result<[f64; 2], StateError> {
        let mask = self.mask(reg)?;
        let mut probs = [0.0; 2];
        for (idx, a) in self.amps.iter().enumerate() {
            probs[usize::from(idx & mask != 0)] += a.norm_sqr();
        }
        Ok(probs)
    }

    /// Measures `reg` in `{|↑⟩, |↓⟩}` and collapses the joint state.
    /// Returns 0 for `|↑⟩` and 1 for `|↓⟩`.
    pub fn measure_z<R: Rng + ?Sized>(&mut self, reg: Register, rng: &mut R) -> Result<u8, StateError> {
        let probs = self.z_probabilities(reg)?;
        let outcome = sample_outcome(&probs, rng);
        let mask = self.mask(reg)?;
        let scale = 1.0 / probs[outcome].sqrt();
        for (idx, a) in self.amps.iter_mut().enumerate() {
            if usize::from(idx & mask != 0) == outcome {
                *a *= scale;
            } else {
                *a = Complex64::new(0.0, 0.0);
            }
        }
        Ok(outcome as u8)
    }

    /// For each Bell outcome, the projection amplitudes `⟨Ψ_{x,y}|_{ab} ψ⟩`
    /// indexed by the configuration of the remaining registers.
    fn bell_projections(&self, reg_a: Register, reg_b: Register) -> Result<BellSlices, StateError> {
        let mask_a = self.mask(reg_a)?;
        let mask_b = self.mask(reg_b)?;
        if mask_a == mask_b {
            return Err(StateError::DuplicateRegister(reg_a));
        }
        let rest: Vec<usize> = (0..self.amps.len()).filter(|idx| idx & (mask_a | mask_b) == 0).collect();
        let mut projections = [(); 4].map(|_| Vec::with_capacity(rest.len()));
        for outcome in BitPair::ALL {
            let v = bell_vector(outcome);
            for &base in &rest {
                let slice = [base, base | mask_b, base | mask_a, base | mask_a | mask_b];
                let proj: Complex64 = slice.iter().zip(v.iter()).map(|(&idx, vk)| vk.conj() * self.amps[idx]).sum();
                projections[outcome.index()].push(proj);
            }
        }
        Ok(BellSlices { mask_a, mask_b, rest, projections })
    }

    /// Probability of each Bell outcome `(x, y)` on `(reg_a, reg_b)`, indexed by
    /// [`BitPair::index`].
    pub fn bell_probabilities(&self, reg_a: Register, reg_b: Register) -> Result<[f64; 4], StateError> {
        let slices = self.bell_projections(reg_a, reg_b)?;
        Ok(slices.projections.map(|p| p.iter().map(|c| c.norm_sqr()).sum()))
    }

    /// Bell measurement on `(reg_a, reg_b)` where `reg_a` plays the role of the
    /// home qubit. The pair collapses onto `|Ψ_{x,y}⟩` while correlations with
    /// the other registers are kept.
    pub fn bell_measure<R: Rng + ?Sized>(
        &mut self,
        reg_a: Register,
        reg_b: Register,
        rng: &mut R,
    ) -> Result<BitPair, StateError> {
        let slices = self.bell_projections(reg_a, reg_b)?;
        let probs = slices.projections.clone().map(|p| p.iter().map(|c| c.norm_sqr()).sum::<f64>());
        let outcome = BitPair::from_index(sample_outcome(&probs, rng));
        let scale = 1.0 / probs[outcome.index()].sqrt();
        let v = bell_vector(outcome);
        let mut out = vec![Complex64::new(0.0, 0.0); self.amps.len()];
        for (&base, proj) in slices.rest.iter().zip(&slices.projections[outcome.index()]) {
            let slice = [
                base,
                base | slices.mask_b,
                base | slices.mask_a,
                base | slices.mask_a | slices.mask_b,
            ];
            for (&idx, vk) in slice.iter().zip(v.iter()) {
                out[idx] = vk * proj * scale;
            }
        }
        self.amps = out;
        self.check_norm()?;
        Ok(outcome)
    }

    /// Partial trace onto `keep`, in the order given.
    pub fn reduced_density(&self, keep: &[Register]) -> Result<DensityMatrix, StateError> {
        if keep.is_empty() {
            return Err(StateError::EmptyKeepList);
        }
        let masks = keep.iter().map(|&r| self.mask(r)).collect::<Result<Vec<_>, _>>()?;
        for (pos, reg) in keep.iter().enumerate() {
            if keep[..pos].contains(reg) {
                return Err(StateError::DuplicateRegister(*reg));
            }
        }
        let keep_mask: usize = masks.iter().sum();
        let dim = 1usize << keep.len();
        // sub-index of each full index within the kept registers
        let sub = |idx: usize| {
            masks
                .iter()
                .fold(0usize, |acc, &m| (acc << 1) | usize::from(idx & m != 0))
        };
        let mut entries = vec![Complex64::new(0.0, 0.0); dim * dim];
        for (i, ai) in self.amps.iter().enumerate() {
            if ai.norm_sqr() == 0.0 {
                continue;
            }
            for (j, aj) in self.amps.iter().enumerate() {
                if i & !keep_mask != j & !keep_mask {
                    continue;
                }
                entries[sub(i) * dim + sub(j)] += ai * aj.conj();
            }
        }
        DensityMatrix::from_row_major(keep.to_vec(), dim, entries)
    }
}

struct BellSlices {
    mask_a: usize,
    mask_b: usize,
    rest: Vec<usize>,
    projections: [Vec<Complex64>; 4],
}

/// Amplitudes of `|Ψ_{x,y}⟩` over `(home, travel)` in index order
/// `|↑↑⟩, |↑↓⟩, |↓↑⟩, |↓↓⟩`.
pub fn bell_vector(code: BitPair) -> [Complex64; 4] {
    let s = Complex64::new(FRAC_1_SQRT_2, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    // travel factor when home is ↑ is |↓⟩, when home is ↓ it is |↑⟩
    let m = pauli_matrix(code);
    let down = [m[0][1], m[1][1]];
    let up = [m[0][0], m[1][0]];
    let mut v = [zero; 4];
    v[0] = s * down[0];
    v[1] = s * down[1];
    v[2] = s * up[0];
    v[3] = s * up[1];
    v
}

/// Inverse-CDF sample that never returns a zero-probability outcome.
fn sample_outcome<R: Rng + ?Sized>(probs: &[f64], rng: &mut R) -> usize {
    let u: f64 = rng.random();
    let total: f64 = probs.iter().sum();
    let mut acc = 0.0;
    let mut last_possible = 0;
    for (idx, &p) in probs.iter().enumerate() {
        if p <= 0.0 {
            continue;
        }
        last_possible = idx;
        acc += p / total;
        if u < acc {
            return idx;
        }
    }
    last_possible
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn assert_amps(state: &StateVector, expected: &[Complex64]) {
        for (a, e) in state.amplitudes().iter().zip(expected) {
            assert_abs_diff_eq!(a.re, e.re, epsilon = 1e-12);
            assert_abs_diff_eq!(a.im, e.im, epsilon = 1e-12);
        }
    }

    #[test]
    fn bell_00_is_antiparallel_superposition() {
        let s = FRAC_1_SQRT_2;
        assert_amps(&StateVector::bell(BitPair::ZERO), &[c(0.0, 0.0), c(s, 0.0), c(s, 0.0), c(0.0, 0.0)]);
    }

    #[test]
    fn bell_11_and_01_by_hand() {
        let s = FRAC_1_SQRT_2;
        // σz on t: |↑↓⟩ picks up -1, |↓↑⟩ unchanged
        assert_amps(
            &StateVector::bell(BitPair::new(true, true)),
            &[c(0.0, 0.0), c(-s, 0.0), c(s, 0.0), c(0.0, 0.0)],
        );
        // σx on t: |↑↑⟩ + |↓↓⟩
        assert_amps(
            &StateVector::bell(BitPair::new(false, true)),
            &[c(s, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(s, 0.0)],
        );
    }

    #[test]
    fn identity_and_involution() {
        let original = StateVector::bell(BitPair::new(true, false));
        let mut state = original.clone();
        state.apply_pauli(Register::Travel, BitPair::ZERO).unwrap();
        assert_eq!(state, original);
        state.apply_pauli(Register::Travel, BitPair::new(true, true)).unwrap();
        state.apply_pauli(Register::Travel, BitPair::new(true, true)).unwrap();
        assert_amps(&state, original.amplitudes());
    }

    #[test]
    fn x_then_y_gives_bell_11_up_to_phase() {
        let mut state = StateVector::bell(BitPair::ZERO);
        state.apply_pauli(Register::Travel, BitPair::new(false, true)).unwrap();
        state.apply_pauli(Register::Travel, BitPair::new(true, false)).unwrap();
        let target = StateVector::bell(BitPair::new(true, true));
        assert_abs_diff_eq!(state.overlap(&target).unwrap(), 1.0, epsilon = 1e-12);
        // σy σx = -iσz
        let phase = target.inner(&state).unwrap();
        assert_abs_diff_eq!(phase.re, 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(phase.im, -1.0, epsilon = 1e-12);
    }

    #[test]
    fn unknown_register_is_an_error() {
        let mut state = StateVector::bell(BitPair::ZERO);
        assert_eq!(
            state.apply_pauli(Register::Ancilla, BitPair::new(true, true)),
            Err(StateError::UnknownRegister(Register::Ancilla))
        );
        assert_eq!(
            state.apply_pauli(Register::Ancilla, BitPair::ZERO),
            Err(StateError::UnknownRegister(Register::Ancilla))
        );
    }

    #[test]
    fn product_state_bell_distribution() {
        // |↑⟩_h|↓⟩_t = (Ψ00 - Ψ11)/√2
        let state = StateVector::basis(vec![Register::Home, Register::Travel], 0b01).unwrap();
        let probs = state.bell_probabilities(Register::Home, Register::Travel).unwrap();
        assert_abs_diff_eq!(probs[0], 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(probs[1], 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(probs[2], 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(probs[3], 0.5, epsilon = 1e-12);
    }

    #[test]
    fn bell_measurement_is_deterministic_on_encoded_pairs() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for k in BitPair::ALL {
            for i in BitPair::ALL {
                let mut state = StateVector::bell(k);
                state.apply_pauli(Register::Travel, i).unwrap();
                assert_eq!(state.bell_measure(Register::Home, Register::Travel, &mut rng).unwrap(), i ^ k);
            }
        }
    }

    #[test]
    fn z_measurement_of_bell_pair_anticorrelates() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let probs = StateVector::bell(BitPair::ZERO).z_probabilities(Register::Travel).unwrap();
        assert_abs_diff_eq!(probs[0], 0.5, epsilon = 1e-12);
        for _ in 0..20 {
            let mut state = StateVector::bell(BitPair::ZERO);
            let t = state.measure_z(Register::Travel, &mut rng).unwrap();
            let h = state.measure_z(Register::Home, &mut rng).unwrap();
            assert_ne!(t, h);
        }
    }

    #[test]
    fn attach_ancilla_layout() {
        let mut state = StateVector::bell(BitPair::new(false, true));
        let before = state.clone();
        state.attach_ancilla(Register::Ancilla).unwrap();
        assert_eq!(state.registers(), &[Register::Home, Register::Travel, Register::Ancilla]);
        for idx in 0..4 {
            assert_eq!(state.amplitude(idx << 1), before.amplitude(idx));
            assert_eq!(state.amplitude((idx << 1) | 1), Complex64::new(0.0, 0.0));
        }
        assert_abs_diff_eq!(state.norm_sqr(), 1.0, epsilon = 1e-12);
        assert_eq!(state.attach_ancilla(Register::Ancilla), Err(StateError::DuplicateRegister(Register::Ancilla)));
        let rho = state.reduced_density(&[Register::Home, Register::Travel]).unwrap();
        let pure = before.reduced_density(&[Register::Home, Register::Travel]).unwrap();
        assert!(rho.max_abs_diff(&pure) < 1e-12);
    }

    #[test]
    fn probe_on_down_travel_qubit() {
        let mut state = StateVector::basis(vec![Register::Travel], 1).unwrap();
        state.attach_ancilla(Register::Ancilla).unwrap();
        let s = FRAC_1_SQRT_2;
        state.entangling_probe(Register::Travel, Register::Ancilla, s, s).unwrap();
        // index = 2t + e: |↓χ0⟩ = 0b10, |↑χ1⟩ = 0b01
        assert_amps(&state, &[c(0.0, 0.0), c(s, 0.0), c(s, 0.0), c(0.0, 0.0)]);
    }

    #[test]
    fn probe_rejects_bad_normalization_and_used_ancilla() {
        let mut state = StateVector::bell(BitPair::ZERO);
        state.attach_ancilla(Register::Ancilla).unwrap();
        assert!(matches!(
            state.entangling_probe(Register::Travel, Register::Ancilla, 0.9, 0.9),
            Err(StateError::ProbeNormalization { .. })
        ));
        let s = FRAC_1_SQRT_2;
        state.entangling_probe(Register::Travel, Register::Ancilla, s, s).unwrap();
        assert_eq!(
            state.entangling_probe(Register::Travel, Register::Ancilla, s, s),
            Err(StateError::AncillaNotFiducial(Register::Ancilla))
        );
    }

    #[test]
    fn zero_beta_probe_leaves_pair_untouched() {
        let mut state = StateVector::bell(BitPair::new(true, false));
        let before = state.clone();
        state.attach_ancilla(Register::Ancilla).unwrap();
        state.entangling_probe(Register::Travel, Register::Ancilla, 1.0, 0.0).unwrap();
        let mut expected = before;
        expected.attach_ancilla(Register::Ancilla).unwrap();
        assert_eq!(state, expected);
    }

    #[test]
    fn reduced_density_of_bell_home_is_maximally_mixed() {
        let rho = StateVector::bell(BitPair::ZERO).reduced_density(&[Register::Home]).unwrap();
        let mixed = DensityMatrix::from_diagonal(vec![Register::Home], &[0.5, 0.5]).unwrap();
        assert!(rho.max_abs_diff(&mixed) < 1e-12);
        assert!(matches!(
            StateVector::bell(BitPair::ZERO).reduced_density(&[]),
            Err(StateError::EmptyKeepList)
        ));
    }

    #[test]
    fn rejects_malformed_states() {
        let half = Complex64::new(0.5, 0.0);
        assert!(matches!(
            StateVector::from_amplitudes(vec![Register::Home], vec![half, half]),
            Err(StateError::NotNormalized(_))
        ));
        assert!(matches!(
            StateVector::from_amplitudes(vec![Register::Home, Register::Home], vec![half; 4]),
            Err(StateError::DuplicateRegister(Register::Home))
        ));
        assert!(matches!(
            StateVector::from_amplitudes(vec![Register::Home], vec![Complex64::new(f64::NAN, 0.0), half]),
            Err(StateError::NonFinite)
        ));
    }
}

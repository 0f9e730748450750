//! Pauli encodings `C_{a,b}` and their composition law.
//!
//! Codes map to operators as `(0,0) -> 1`, `(0,1) -> σx`, `(1,0) -> σy`,
//! `(1,1) -> σz`, with `σy = [[0, -i], [i, 0]]`. Under this assignment the
//! product of two encodings is the encoding of the XOR of their codes, up to a
//! phase in `{1, i, -i}`.

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::BitPair;

pub type Matrix2 = [[Complex64; 2]; 2];

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

/// The 2×2 matrix of `C_code` in the `{|↑⟩, |↓⟩}` basis.
pub fn pauli_matrix(code: BitPair) -> Matrix2 {
    match code.index() {
        0 => [[ONE, ZERO], [ZERO, ONE]],
        1 => [[ZERO, ONE], [ONE, ZERO]],
        2 => [[ZERO, -I], [I, ZERO]],
        _ => [[ONE, ZERO], [ZERO, -ONE]],
    }
}

/// Phase factor that can arise when composing two encodings.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Phase {
    #[serde(rename = "1")]
    One,
    #[serde(rename = "+i")]
    PlusI,
    #[serde(rename = "-i")]
    MinusI,
}

impl Phase {
    pub fn to_complex(self) -> Complex64 {
        match self {
            Phase::One => ONE,
            Phase::PlusI => I,
            Phase::MinusI => -I,
        }
    }
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Phase::One => "1",
            Phase::PlusI => "+i",
            Phase::MinusI => "-i",
        })
    }
}

/// `C_second · C_first = phase · C_code`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PauliProduct {
    pub code: BitPair,
    pub phase: Phase,
}

// Rows: second operator, columns: first operator, both in code-index order (1, x, y, z).
// σaσb = δab·1 + i·εabc·σc.
const PHASE_TABLE: [[Phase; 4]; 4] = {
    use Phase::{MinusI as M, One as O, PlusI as P};
    [
        [O, O, O, O], // 1·(1, x, y, z)
        [O, O, P, M], // x·(1, x, y, z): xy = iz, xz = -iy
        [O, M, O, P], // y·(1, x, y, z): yx = -iz, yz = ix
        [O, P, M, O], // z·(1, x, y, z): zx = iy, zy = -ix
    ]
};

/// Composes two encodings applied in sequence (`first`, then `second`).
pub fn pauli_compose(second: BitPair, first: BitPair) -> PauliProduct {
    PauliProduct {
        code: second ^ first,
        phase: PHASE_TABLE[second.index()][first.index()],
    }
}

/// A `(second, first)` cell where a composition rule disagrees with explicit
/// matrix multiplication.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseTableMismatch {
    pub second: BitPair,
    pub first: BitPair,
    pub claimed: PauliProduct,
    /// `None` if the matrix product is not a unit multiple of any encoding.
    pub actual: Option<(BitPair, Complex64)>,
}

impl fmt::Display for PhaseTableMismatch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "C{}·C{}: table says {}·C{}, ",
            self.second, self.first, self.claimed.phase, self.claimed.code
        )?;
        match self.actual {
            Some((code, phase)) => write!(f, "matrices give ({})·C{}", phase, code),
            None => f.write_str("matrix product is not a Pauli"),
        }
    }
}

pub fn matmul2(lhs: &Matrix2, rhs: &Matrix2) -> Matrix2 {
    let mut out = [[ZERO; 2]; 2];
    for (r, row) in out.iter_mut().enumerate() {
        for (c, cell) in row.iter_mut().enumerate() {
            *cell = lhs[r][0] * rhs[0][c] + lhs[r][1] * rhs[1][c];
        }
    }
    out
}

/// Finds `(code, phase)` with `matrix == phase · C_code`, searching the four
/// encodings against the four unit phases `±1, ±i`. Entries of Pauli products
/// are exact in floating point, so the comparison is exact.
pub fn decompose_pauli_multiple(matrix: &Matrix2) -> Option<(BitPair, Complex64)> {
    let phases = [ONE, -ONE, I, -I];
    BitPair::ALL.iter().find_map(|&code| {
        let basis = pauli_matrix(code);
        phases.iter().find_map(|&phase| {
            let equal = (0..2).all(|r| (0..2).all(|c| matrix[r][c] == phase * basis[r][c]));
            equal.then_some((code, phase))
        })
    })
}

/// Checks a composition rule against 2×2 matrix multiplication over all 16
/// `(second, first)` pairs.
pub fn verify_composition<F>(compose: F) -> Vec<PhaseTableMismatch>
where
    F: Fn(BitPair, BitPair) -> PauliProduct,
{
    let mut mismatches = Vec::new();
    for second in BitPair::ALL {
        for first in BitPair::ALL {
            let claimed = compose(second, first);
            let product = matmul2(&pauli_matrix(second), &pauli_matrix(first));
            let actual = decompose_pauli_multiple(&product);
            let agrees = matches!(actual, Some((code, phase))
                if code == claimed.code && phase == claimed.phase.to_complex());
            if !agrees {
                mismatches.push(PhaseTableMismatch {
                    second,
                    first,
                    claimed,
                    actual,
                });
            }
        }
    }
    mismatches
}

#[cfg(test)]
mod tests {
    use super::*;

    const X: BitPair = BitPair::new(false, true);
    const Y: BitPair = BitPair::new(true, false);
    const Z: BitPair = BitPair::new(true, true);

    #[test]
    fn table_matches_matrix_oracle() {
        assert!(verify_composition(pauli_compose).is_empty());
    }

    #[test]
    fn identity_composes_trivially() {
        for code in BitPair::ALL {
            let p = pauli_compose(BitPair::ZERO, code);
            assert_eq!(p.code, code);
            assert_eq!(p.phase, Phase::One);
        }
    }

    #[test]
    fn x_then_y() {
        // σx σy = iσz
        let p = pauli_compose(X, Y);
        assert_eq!(p.code, Z);
        assert_eq!(p.phase, Phase::PlusI);
    }

    #[test]
    fn z_squared_is_identity() {
        let p = pauli_compose(Z, Z);
        assert_eq!(p.code, BitPair::ZERO);
        assert_eq!(p.phase, Phase::One);
    }

    #[test]
    fn corrupted_table_is_reported_by_cell() {
        let broken = |second: BitPair, first: BitPair| {
            let mut p = pauli_compose(second, first);
            if second == Y && first == Z {
                p.phase = Phase::MinusI;
            }
            p
        };
        let mismatches = verify_composition(broken);
        assert_eq!(mismatches.len(), 1);
        assert_eq!((mismatches[0].second, mismatches[0].first), (Y, Z));
        assert!(mismatches[0].to_string().contains("C(1,0)·C(1,1)"));
    }
}

//! Complex state vectors, single-qubit gates and the two-qubit threshold
//! projector.
//!
//! Amplitudes are stored big-endian: qubit 0 is the leftmost symbol of a ket,
//! so `|q0 q1 ... q_{n-1}>` lives at index `sum_i q_i * 2^(n-1-i)`. All
//! operations are pure; they take `&self` and return fresh values.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Tolerance for algebraic identities (norms, unitarity).
pub const NORM_TOL: f64 = 1e-12;

/// Whether a state's squared norm is pinned to 1 or merely bounded by 1.
///
/// Projection never increases the norm, so `Unnormalized` still implies
/// `norm2 <= 1 + NORM_TOL`.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum NormContract {
    Normalized,
    Unnormalized,
}

/// Big-endian index of a computational basis state.
///
/// `bits` must contain one entry per qubit, each 0 or 1; `n_qubits` fixes the
/// expected length.
pub fn basis_index(bits: &[u8], n_qubits: usize) -> Result<usize> {
    if bits.len() != n_qubits {
        return Err(Error::DimensionMismatch {
            expected: n_qubits,
            got: bits.len(),
        });
    }
    let mut index = 0;
    for &b in bits {
        if b > 1 {
            return Err(Error::InvalidArgument(format!(
                "bit value {b} is not 0 or 1"
            )));
        }
        index = (index << 1) | b as usize;
    }
    Ok(index)
}

/// An n-qubit pure state as a dense vector of 2^n complex amplitudes.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    n_qubits: usize,
    amps: Vec<Complex64>,
    norm: NormContract,
}

impl StateVector {
    /// `|0...0>` on `n_qubits` qubits.
    pub fn zero_state(n_qubits: usize) -> Self {
        assert!(n_qubits > 0, "state must have at least one qubit");
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n_qubits];
        amps[0] = Complex64::new(1.0, 0.0);
        StateVector {
            n_qubits,
            amps,
            norm: NormContract::Normalized,
        }
    }

    /// Computational basis state `|bits>`.
    pub fn basis_state(bits: &[u8]) -> Result<Self> {
        let n = bits.len();
        if n == 0 {
            return Err(Error::InvalidArgument("empty bit string".into()));
        }
        let idx = basis_index(bits, n)?;
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n];
        amps[idx] = Complex64::new(1.0, 0.0);
        Ok(StateVector {
            n_qubits: n,
            amps,
            norm: NormContract::Normalized,
        })
    }

    /// `|+>^n`, the uniform superposition with all-positive amplitudes.
    pub fn plus_state(n_qubits: usize) -> Self {
        assert!(n_qubits > 0, "state must have at least one qubit");
        let dim = 1usize << n_qubits;
        let a = Complex64::new(1.0 / (dim as f64).sqrt(), 0.0);
        StateVector {
            n_qubits,
            amps: vec![a; dim],
            norm: NormContract::Normalized,
        }
    }

    /// Bell state `(|01> + |10>)/sqrt(2)`.
    pub fn bell_psi_plus() -> Self {
        let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        let z = Complex64::new(0.0, 0.0);
        StateVector {
            n_qubits: 2,
            amps: vec![z, h, h, z],
            norm: NormContract::Normalized,
        }
    }

    /// Bell state `(|01> - |10>)/sqrt(2)`.
    pub fn bell_psi_minus() -> Self {
        let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        let z = Complex64::new(0.0, 0.0);
        StateVector {
            n_qubits: 2,
            amps: vec![z, h, -h, z],
            norm: NormContract::Normalized,
        }
    }

    /// Builds a state from raw amplitudes. The length must be a power of two;
    /// the norm contract is inferred from the squared norm, and anything above
    /// `1 + NORM_TOL` is rejected.
    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self> {
        let dim = amps.len();
        if dim < 2 || !dim.is_power_of_two() {
            return Err(Error::InvalidArgument(format!(
                "amplitude count {dim} is not a power of two >= 2"
            )));
        }
        if amps.iter().any(|a| !a.re.is_finite() || !a.im.is_finite()) {
            return Err(Error::InvalidArgument("non-finite amplitude".into()));
        }
        let n_qubits = dim.trailing_zeros() as usize;
        let norm2: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        let norm = if (norm2 - 1.0).abs() <= NORM_TOL {
            NormContract::Normalized
        } else if norm2 <= 1.0 + NORM_TOL {
            NormContract::Unnormalized
        } else {
            return Err(Error::NormContract { norm2 });
        };
        Ok(StateVector {
            n_qubits,
            amps,
            norm,
        })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    /// Raw access for crate-internal diagonal kernels; callers must preserve
    /// the norm contract.
    pub(crate) fn amps_mut(&mut self) -> &mut [Complex64] {
        &mut self.amps
    }

    pub fn amp(&self, index: usize) -> Complex64 {
        self.amps[index]
    }

    /// Squared norm of the amplitude vector.
    pub fn norm2(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn is_normalized(&self) -> bool {
        self.norm == NormContract::Normalized
    }

    pub fn norm_contract(&self) -> NormContract {
        self.norm
    }

    fn check_qubit(&self, q: usize) -> Result<()> {
        if q >= self.n_qubits {
            return Err(Error::QubitOutOfRange {
                index: q,
                n_qubits: self.n_qubits,
            });
        }
        Ok(())
    }

    /// Applies a single-qubit gate to qubit `q`.
    ///
    /// Unitary gates preserve the norm contract; non-unitary gates downgrade
    /// it to `Unnormalized`.
    pub fn apply_single(&self, gate: &SingleQubitGate, q: usize) -> Result<StateVector> {
        self.check_qubit(q)?;
        let mut out = self.clone();
        out.apply_single_in_place(gate, q);
        if !gate.is_unitary() {
            out.norm = NormContract::Unnormalized;
        }
        Ok(out)
    }

    pub(crate) fn apply_single_in_place(&mut self, gate: &SingleQubitGate, q: usize) {
        let stride = 1usize << (self.n_qubits - 1 - q);
        let m = gate.matrix();
        let dim = self.amps.len();
        let mut base = 0;
        while base < dim {
            for i in base..base + stride {
                let a = self.amps[i];
                let b = self.amps[i + stride];
                self.amps[i] = m[0][0] * a + m[0][1] * b;
                self.amps[i + stride] = m[1][0] * a + m[1][1] * b;
            }
            base += 2 * stride;
        }
    }

    /// Threshold projection of the pair `(q1, q2)` onto the no-click subspace:
    /// amplitudes with both qubits in `|1>` are zeroed.
    ///
    /// Returns the projected state (unnormalized) and the click probability,
    /// i.e. the Born weight of the removed `|11>` component. The input must be
    /// normalized, so `click_prob + norm2(projected) == 1`.
    pub fn j_project(&self, q1: usize, q2: usize) -> Result<(StateVector, f64)> {
        self.check_qubit(q1)?;
        self.check_qubit(q2)?;
        if q1 == q2 {
            return Err(Error::DuplicateQubit { index: q1 });
        }
        if !self.is_normalized() {
            return Err(Error::NormContract {
                norm2: self.norm2(),
            });
        }
        let mut out = self.clone();
        let click_prob = out.j_project_in_place(q1, q2);
        out.norm = NormContract::Unnormalized;
        Ok((out, click_prob))
    }

    pub(crate) fn j_project_in_place(&mut self, q1: usize, q2: usize) -> f64 {
        let m1 = 1usize << (self.n_qubits - 1 - q1);
        let m2 = 1usize << (self.n_qubits - 1 - q2);
        let mut click = 0.0;
        for (i, a) in self.amps.iter_mut().enumerate() {
            if i & m1 != 0 && i & m2 != 0 {
                click += a.norm_sqr();
                *a = Complex64::new(0.0, 0.0);
            }
        }
        click
    }

    /// Rescales to unit norm, returning the pre-normalization squared norm.
    pub fn normalize(&self) -> Result<(StateVector, f64)> {
        let norm2 = self.norm2();
        if norm2 <= 0.0 {
            return Err(Error::DegenerateState);
        }
        let inv = 1.0 / norm2.sqrt();
        let amps = self.amps.iter().map(|a| a * inv).collect();
        Ok((
            StateVector {
                n_qubits: self.n_qubits,
                amps,
                norm: NormContract::Normalized,
            },
            norm2,
        ))
    }

    pub(crate) fn normalize_in_place(&mut self) -> Result<f64> {
        let norm2 = self.norm2();
        if norm2 <= 0.0 {
            return Err(Error::DegenerateState);
        }
        let inv = 1.0 / norm2.sqrt();
        for a in &mut self.amps {
            *a *= inv;
        }
        self.norm = NormContract::Normalized;
        Ok(norm2)
    }

    /// Tensors `|value>` onto the state as a new last qubit.
    pub fn append_qubit(&self, value: u8) -> StateVector {
        assert!(value <= 1, "appended qubit value must be 0 or 1");
        let mut amps = vec![Complex64::new(0.0, 0.0); self.amps.len() * 2];
        for (i, a) in self.amps.iter().enumerate() {
            amps[2 * i + value as usize] = *a;
        }
        StateVector {
            n_qubits: self.n_qubits + 1,
            amps,
            norm: self.norm,
        }
    }
}

/// `<s1|s2>`, conjugate-linear in the first argument.
pub fn inner(s1: &StateVector, s2: &StateVector) -> Result<Complex64> {
    if s1.n_qubits != s2.n_qubits {
        return Err(Error::DimensionMismatch {
            expected: s1.amps.len(),
            got: s2.amps.len(),
        });
    }
    Ok(s1
        .amps
        .iter()
        .zip(&s2.amps)
        .map(|(a, b)| a.conj() * b)
        .sum())
}

/// `|<s1|s2>|^2` for normalized states; invariant under a global phase of
/// either argument.
pub fn fidelity(s1: &StateVector, s2: &StateVector) -> Result<f64> {
    if !s1.is_normalized() {
        return Err(Error::NormContract { norm2: s1.norm2() });
    }
    if !s2.is_normalized() {
        return Err(Error::NormContract { norm2: s2.norm2() });
    }
    Ok(inner(s1, s2)?.norm_sqr())
}

/// A 2x2 gate with a unitarity flag checked at construction.
#[derive(Clone, Debug, PartialEq)]
pub struct SingleQubitGate {
    m: [[Complex64; 2]; 2],
    unitary: bool,
}

impl SingleQubitGate {
    /// Wraps a matrix, detecting unitarity within `NORM_TOL`.
    pub fn from_matrix(m: [[Complex64; 2]; 2]) -> Self {
        // G^dagger G == I ?
        let mut unitary = true;
        for i in 0..2 {
            for j in 0..2 {
                let e: Complex64 = (0..2).map(|k| m[k][i].conj() * m[k][j]).sum();
                let target = if i == j { 1.0 } else { 0.0 };
                if (e - target).norm() > NORM_TOL {
                    unitary = false;
                }
            }
        }
        SingleQubitGate { m, unitary }
    }

    fn from_reals(m: [[f64; 2]; 2]) -> Self {
        Self::from_matrix([
            [Complex64::new(m[0][0], 0.0), Complex64::new(m[0][1], 0.0)],
            [Complex64::new(m[1][0], 0.0), Complex64::new(m[1][1], 0.0)],
        ])
    }

    pub fn identity() -> Self {
        Self::from_reals([[1.0, 0.0], [0.0, 1.0]])
    }

    /// Bit flip `X`.
    pub fn bit_flip() -> Self {
        Self::from_reals([[0.0, 1.0], [1.0, 0.0]])
    }

    /// Phase flip `Z` (`|1> -> -|1>`).
    pub fn phase_flip() -> Self {
        Self::from_reals([[1.0, 0.0], [0.0, -1.0]])
    }

    pub fn hadamard() -> Self {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        Self::from_reals([[h, h], [h, -h]])
    }

    /// `exp(-i theta sigma_x) = cos(theta) I - i sin(theta) X`, the tunneling
    /// propagator of a two-level system over one measurement interval.
    pub fn x_rotation(theta: f64) -> Self {
        let c = Complex64::new(theta.cos(), 0.0);
        let s = Complex64::new(0.0, -theta.sin());
        Self::from_matrix([[c, s], [s, c]])
    }

    pub fn matrix(&self) -> &[[Complex64; 2]; 2] {
        &self.m
    }

    pub fn is_unitary(&self) -> bool {
        self.unitary
    }
}

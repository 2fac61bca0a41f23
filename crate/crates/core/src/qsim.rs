//! Dense statevector simulator for the search circuit's gate set: Hadamard,
//! Pauli-X, Pauli-Z, multi-controlled Z, diagonal phase oracles, and the
//! inversion-about-the-mean diffusion operator.
//!
//! Qubit `q` (0-based) occupies bit `N-1-q` of the basis-state integer, so
//! qubit 0 is the most significant bit. With users mapped to qubits in
//! order, a basis index reads directly as the scheduling bitstring.

use num_complex::Complex64;
use rand::Rng;
use std::f64::consts::FRAC_1_SQRT_2;
use std::io::{self, Write};

use crate::error::{Error, Result};

/// Dense simulation is capped to keep the amplitude buffer desk-sized
/// (2^24 complex doubles = 256 MiB).
pub const MAX_QUBITS: usize = 24;

/// Set of computational-basis indices whose phase the oracle flips.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct MarkedSet {
    indices: Vec<usize>,
}

impl MarkedSet {
    /// Build from arbitrary indices; duplicates collapse, order is sorted.
    pub fn new(indices: impl IntoIterator<Item = usize>) -> Self {
        let mut indices: Vec<usize> = indices.into_iter().collect();
        indices.sort_unstable();
        indices.dedup();
        MarkedSet { indices }
    }

    pub fn empty() -> Self {
        MarkedSet::default()
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn contains(&self, index: usize) -> bool {
        self.indices.binary_search(&index).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.indices.iter().copied()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.indices
    }

    pub fn max_index(&self) -> Option<usize> {
        self.indices.last().copied()
    }
}

/// One gate application. `Mcz` treats controls and target symmetrically;
/// the split only mirrors circuit-diagram notation.
#[derive(Debug, Clone, PartialEq)]
pub enum GateOp {
    H { qubit: usize },
    X { qubit: usize },
    Z { qubit: usize },
    Mcz { controls: Vec<usize>, target: usize },
    PhaseOracle { marked: MarkedSet },
    Diffusion,
}

/// `2^N` complex amplitudes of an `N`-qubit register.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    amps: Vec<Complex64>,
    num_qubits: usize,
}

impl StateVector {
    /// `|0...0>`: amplitude 1 at index 0.
    pub fn zero(num_qubits: usize) -> Result<Self> {
        if num_qubits == 0 || num_qubits > MAX_QUBITS {
            return Err(Error::QubitCount {
                requested: num_qubits,
                max: MAX_QUBITS,
            });
        }
        let mut amps = vec![Complex64::ZERO; 1 << num_qubits];
        amps[0] = Complex64::ONE;
        Ok(StateVector { amps, num_qubits })
    }

    /// Uniform superposition prepared analytically: every amplitude is
    /// exactly `1/sqrt(2^N)`. Equal to `H` on every qubit of `|0...0>` up to
    /// rounding in the gate path.
    pub fn uniform(num_qubits: usize) -> Result<Self> {
        let mut sv = StateVector::zero(num_qubits)?;
        let amp = Complex64::new(((1usize << num_qubits) as f64).sqrt().recip(), 0.0);
        sv.amps.fill(amp);
        Ok(sv)
    }

    /// Adopt an explicit amplitude vector. The length must be a power of
    /// two and the norm must already be 1 (within 1e-6).
    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self> {
        if !amps.len().is_power_of_two() || amps.len() < 2 {
            return Err(Error::InvalidConfig(format!(
                "amplitude count {} is not a power of two >= 2",
                amps.len()
            )));
        }
        let num_qubits = amps.len().trailing_zeros() as usize;
        if num_qubits > MAX_QUBITS {
            return Err(Error::QubitCount {
                requested: num_qubits,
                max: MAX_QUBITS,
            });
        }
        let sv = StateVector { amps, num_qubits };
        let norm = sv.norm();
        if (norm - 1.0).abs() > 1e-6 {
            return Err(Error::InvalidConfig(format!(
                "statevector norm {norm} is not 1"
            )));
        }
        Ok(sv)
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    fn bit_mask(&self, qubit: usize) -> Result<usize> {
        if qubit >= self.num_qubits {
            return Err(Error::IndexOutOfRange {
                what: "qubit",
                index: qubit,
                num_qubits: self.num_qubits,
            });
        }
        Ok(1usize << (self.num_qubits - 1 - qubit))
    }

    /// Hadamard on one qubit.
    pub fn apply_h(&mut self, qubit: usize) -> Result<()> {
        let mask = self.bit_mask(qubit)?;
        for i in 0..self.amps.len() {
            if i & mask == 0 {
                let a = self.amps[i];
                let b = self.amps[i | mask];
                self.amps[i] = (a + b) * FRAC_1_SQRT_2;
                self.amps[i | mask] = (a - b) * FRAC_1_SQRT_2;
            }
        }
        Ok(())
    }

    /// Hadamard on every qubit.
    pub fn hadamard_all(&mut self) {
        for q in 0..self.num_qubits {
            self.apply_h(q).expect("qubit index in range");
        }
    }

    /// Pauli-X: swaps each amplitude pair differing in the target bit.
    pub fn apply_x(&mut self, qubit: usize) -> Result<()> {
        let mask = self.bit_mask(qubit)?;
        for i in 0..self.amps.len() {
            if i & mask == 0 {
                self.amps.swap(i, i | mask);
            }
        }
        Ok(())
    }

    /// Pauli-Z: negates amplitudes where the target bit is 1.
    pub fn apply_z(&mut self, qubit: usize) -> Result<()> {
        let mask = self.bit_mask(qubit)?;
        for i in 0..self.amps.len() {
            if i & mask != 0 {
                self.amps[i] = -self.amps[i];
            }
        }
        Ok(())
    }

    /// Multi-controlled Z: negates exactly the basis states where every
    /// listed qubit (controls and target alike) is 1. An empty control set
    /// degenerates to plain Z.
    pub fn apply_mcz(&mut self, controls: &[usize], target: usize) -> Result<()> {
        let mut mask = self.bit_mask(target)?;
        for &c in controls {
            let m = self.bit_mask(c)?;
            if mask & m != 0 {
                let mut all: Vec<usize> = controls.to_vec();
                all.push(target);
                return Err(Error::DuplicateQubits(all));
            }
            mask |= m;
        }
        for i in 0..self.amps.len() {
            if i & mask == mask {
                self.amps[i] = -self.amps[i];
            }
        }
        Ok(())
    }

    /// Diagonal phase oracle: flips the sign of every marked basis state.
    pub fn apply_phase_oracle(&mut self, marked: &MarkedSet) -> Result<()> {
        if let Some(max) = marked.max_index() {
            if max >= self.amps.len() {
                return Err(Error::IndexOutOfRange {
                    what: "marked state",
                    index: max,
                    num_qubits: self.num_qubits,
                });
            }
        }
        for i in marked.iter() {
            self.amps[i] = -self.amps[i];
        }
        Ok(())
    }

    /// Inversion about the mean: `amp[i] -> 2*mean - amp[i]`, the reflection
    /// `2|U><U| - I` about the uniform state.
    pub fn apply_diffusion(&mut self) {
        let mean = self.amps.iter().sum::<Complex64>() / self.amps.len() as f64;
        let twice = mean * 2.0;
        for a in self.amps.iter_mut() {
            *a = twice - *a;
        }
    }

    pub fn apply_gate(&mut self, op: &GateOp) -> Result<()> {
        match op {
            GateOp::H { qubit } => self.apply_h(*qubit),
            GateOp::X { qubit } => self.apply_x(*qubit),
            GateOp::Z { qubit } => self.apply_z(*qubit),
            GateOp::Mcz { controls, target } => self.apply_mcz(controls, *target),
            GateOp::PhaseOracle { marked } => self.apply_phase_oracle(marked),
            GateOp::Diffusion => {
                self.apply_diffusion();
                Ok(())
            }
        }
    }

    pub fn apply_gates(&mut self, ops: &[GateOp]) -> Result<()> {
        for op in ops {
            self.apply_gate(op)?;
        }
        Ok(())
    }

    /// Measurement distribution `|amp|^2` over basis indices.
    pub fn probabilities(&self) -> Vec<f64> {
        self.amps.iter().map(|a| a.norm_sqr()).collect()
    }

    /// Draw one basis index from the measurement distribution. The state is
    /// not collapsed; callers model collapse by adopting the drawn index.
    pub fn sample(&self, rng: &mut impl Rng) -> usize {
        let u: f64 = rng.random();
        let mut acc = 0.0;
        let mut last_nonzero = 0;
        for (i, a) in self.amps.iter().enumerate() {
            let p = a.norm_sqr();
            if p > 0.0 {
                last_nonzero = i;
            }
            acc += p;
            if u < acc {
                return i;
            }
        }
        // Rounding left acc slightly below 1; attribute the sliver to the
        // last state with support.
        last_nonzero
    }

    /// Lowest basis index attaining the maximum probability.
    pub fn argmax_probability(&self) -> usize {
        let mut best = 0;
        let mut best_p = f64::NEG_INFINITY;
        for (i, a) in self.amps.iter().enumerate() {
            let p = a.norm_sqr();
            if p > best_p {
                best_p = p;
                best = i;
            }
        }
        best
    }

    /// Debug dump: one `index,real,imag,probability` row per basis state.
    pub fn dump_amplitudes(&self, out: &mut impl Write) -> io::Result<()> {
        for (i, a) in self.amps.iter().enumerate() {
            writeln!(out, "{},{},{},{}", i, a.re, a.im, a.norm_sqr())?;
        }
        Ok(())
    }
}

/// Convert an MSB-first bit pattern to its basis-state index.
pub fn pattern_to_index(pattern: &[bool]) -> usize {
    pattern
        .iter()
        .fold(0usize, |acc, &b| (acc << 1) | usize::from(b))
}

/// Gate realization of a single-pattern phase oracle: X on every qubit whose
/// pattern bit is 0, a multi-controlled Z across the full register, then the
/// same X layer to undo the conjugation. The composition flips exactly
/// `|pattern>`, matching [`StateVector::apply_phase_oracle`] on the
/// singleton set.
pub fn oracle_from_pattern(pattern: &[bool]) -> Vec<GateOp> {
    let n = pattern.len();
    assert!(n >= 1, "pattern must cover at least one qubit");
    let flips: Vec<GateOp> = pattern
        .iter()
        .enumerate()
        .filter(|(_, &bit)| !bit)
        .map(|(q, _)| GateOp::X { qubit: q })
        .collect();

    let mut ops = flips.clone();
    ops.push(GateOp::Mcz {
        controls: (0..n - 1).collect(),
        target: n - 1,
    });
    ops.extend(flips);
    ops
}

/// Gate realization of the diffusion layer: H, X on every qubit, a full
/// multi-controlled Z, then the X and H layers again. Equals
/// `-(2|U><U| - I)`, i.e. [`StateVector::apply_diffusion`] times a global
/// -1 phase, which no measurement can observe.
pub fn diffusion_gate_sequence(num_qubits: usize) -> Vec<GateOp> {
    assert!(num_qubits >= 1);
    let mut ops = Vec::new();
    for q in 0..num_qubits {
        ops.push(GateOp::H { qubit: q });
    }
    for q in 0..num_qubits {
        ops.push(GateOp::X { qubit: q });
    }
    ops.push(GateOp::Mcz {
        controls: (0..num_qubits - 1).collect(),
        target: num_qubits - 1,
    });
    for q in 0..num_qubits {
        ops.push(GateOp::X { qubit: q });
    }
    for q in 0..num_qubits {
        ops.push(GateOp::H { qubit: q });
    }
    ops
}

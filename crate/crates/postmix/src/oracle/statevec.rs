//! Small dense state-vector simulator used as a qubit-level ground truth.
//!
//! Supports exactly what the postselected gadgets need: computational and
//! plus-state preparations, X and CNOT gates, and projective measurements in
//! the Z or X basis with a postselected outcome. States are complex
//! amplitude vectors over up to 14 qubits; measurements renormalize and
//! report the branch probability, so a circuit run yields the joint
//! probability of all postselected outcomes together with the surviving
//! state.

use crate::error::Error;
use num_complex::Complex64;

/// Hard cap on register width (2^14 amplitudes).
pub const MAX_QUBITS: usize = 14;

/// Branch probabilities below this are treated as an impossible outcome.
/// Genuine branches in these circuits are products of 1/2 and 1/4 factors
/// (at least 4^-14), while float dust from cancelled amplitudes sits around
/// 1e-32.
const BRANCH_EPS: f64 = 1e-20;

/// A pure state on `qubits` qubits. Basis index bit `q` is the value of
/// qubit `q`.
#[derive(Clone, Debug)]
pub struct PureState {
    qubits: usize,
    amps: Vec<Complex64>,
}

impl PureState {
    /// The all-zeros computational basis state.
    pub fn zero(qubits: usize) -> Result<Self, Error> {
        if qubits == 0 || qubits > MAX_QUBITS {
            return Err(Error::TooManyQubits { got: qubits });
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << qubits];
        amps[0] = Complex64::new(1.0, 0.0);
        Ok(Self { qubits, amps })
    }

    pub fn qubits(&self) -> usize {
        self.qubits
    }

    pub fn amps(&self) -> &[Complex64] {
        &self.amps
    }

    /// Squared norm; 1 within 1e-10 for any state produced by a run.
    pub fn norm2(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Basis indices carrying more than `tol` probability.
    pub fn support(&self, tol: f64) -> Vec<usize> {
        (0..self.amps.len())
            .filter(|&i| self.amps[i].norm_sqr() > tol)
            .collect()
    }

    /// Squared overlap |<other|self>|^2.
    pub fn fidelity(&self, other: &PureState) -> Result<f64, Error> {
        if self.qubits != other.qubits {
            return Err(Error::SizeMismatch {
                expected: self.qubits,
                got: other.qubits,
            });
        }
        let inner: Complex64 = self
            .amps
            .iter()
            .zip(other.amps.iter())
            .map(|(a, b)| b.conj() * a)
            .sum();
        Ok(inner.norm_sqr())
    }

    fn apply_single(&mut self, q: usize, m: [[Complex64; 2]; 2]) {
        let bit = 1usize << q;
        for idx in 0..self.amps.len() {
            if idx & bit == 0 {
                let a0 = self.amps[idx];
                let a1 = self.amps[idx | bit];
                self.amps[idx] = m[0][0] * a0 + m[0][1] * a1;
                self.amps[idx | bit] = m[1][0] * a0 + m[1][1] * a1;
            }
        }
    }

    fn apply_x(&mut self, q: usize) {
        let bit = 1usize << q;
        for idx in 0..self.amps.len() {
            if idx & bit == 0 {
                self.amps.swap(idx, idx | bit);
            }
        }
    }

    fn apply_cnot(&mut self, control: usize, target: usize) {
        let cbit = 1usize << control;
        let tbit = 1usize << target;
        for idx in 0..self.amps.len() {
            if idx & cbit != 0 && idx & tbit == 0 {
                self.amps.swap(idx, idx | tbit);
            }
        }
    }

    /// Project qubit `q` onto `|outcome>`; returns the branch probability
    /// after renormalizing.
    fn project_z(&mut self, q: usize, outcome: bool) -> Result<f64, Error> {
        let bit = 1usize << q;
        let keep = if outcome { bit } else { 0 };
        let mut p = 0.0;
        for idx in 0..self.amps.len() {
            if idx & bit == keep {
                p += self.amps[idx].norm_sqr();
            } else {
                self.amps[idx] = Complex64::new(0.0, 0.0);
            }
        }
        if p <= BRANCH_EPS {
            return Err(Error::ZeroAmplitudeBranch);
        }
        let scale = 1.0 / p.sqrt();
        for a in self.amps.iter_mut() {
            *a *= scale;
        }
        Ok(p)
    }

    /// Project qubit `q` onto `|+>` (or `|->`); returns the branch
    /// probability after renormalizing.
    fn project_x(&mut self, q: usize, plus: bool) -> Result<f64, Error> {
        let bit = 1usize << q;
        let sign = if plus { 1.0 } else { -1.0 };
        let mut p = 0.0;
        for idx in 0..self.amps.len() {
            if idx & bit == 0 {
                let a0 = self.amps[idx];
                let a1 = self.amps[idx | bit];
                let half = (a0 + sign * a1) * 0.5;
                self.amps[idx] = half;
                self.amps[idx | bit] = sign * half;
                p += 2.0 * half.norm_sqr();
            }
        }
        if p <= BRANCH_EPS {
            return Err(Error::ZeroAmplitudeBranch);
        }
        let scale = 1.0 / p.sqrt();
        for a in self.amps.iter_mut() {
            *a *= scale;
        }
        Ok(p)
    }
}

/// One circuit instruction. Preparations assume the qubit is fresh (still in
/// `|0>`): they act as the unitary sending `|0>` to the prepared state.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Op {
    PrepZero(usize),
    PrepOne(usize),
    PrepPlus(usize),
    PrepMinus(usize),
    X(usize),
    Cnot { control: usize, target: usize },
    /// Postselect qubit on the given Z outcome.
    MeasureZ { qubit: usize, outcome: bool },
    /// Postselect qubit on `|+>` (`plus = true`) or `|->`.
    MeasureX { qubit: usize, plus: bool },
}

/// An ordered list of operations on a fixed register.
#[derive(Clone, Debug, Default)]
pub struct Circuit {
    pub qubits: usize,
    pub ops: Vec<Op>,
}

impl Circuit {
    pub fn new(qubits: usize) -> Self {
        Self {
            qubits,
            ops: Vec::new(),
        }
    }

    pub fn push(&mut self, op: Op) -> &mut Self {
        self.ops.push(op);
        self
    }
}

const FRAC_1_SQRT_2: f64 = std::f64::consts::FRAC_1_SQRT_2;

fn hadamard() -> [[Complex64; 2]; 2] {
    let h = Complex64::new(FRAC_1_SQRT_2, 0.0);
    [[h, h], [h, -h]]
}

/// Run the circuit from `|0...0>`. Returns the joint probability of all
/// postselected outcomes and the surviving normalized state. A measurement
/// whose branch has (numerically) zero probability is an error.
pub fn statevector_run(circuit: &Circuit) -> Result<(f64, PureState), Error> {
    let mut state = PureState::zero(circuit.qubits)?;
    let mut accept = 1.0;
    let check = |q: usize| -> Result<usize, Error> {
        if q < circuit.qubits {
            Ok(q)
        } else {
            Err(Error::SizeMismatch {
                expected: circuit.qubits,
                got: q + 1,
            })
        }
    };
    for op in &circuit.ops {
        match *op {
            Op::PrepZero(q) => {
                check(q)?;
            }
            Op::PrepOne(q) => state.apply_x(check(q)?),
            Op::PrepPlus(q) => state.apply_single(check(q)?, hadamard()),
            Op::PrepMinus(q) => {
                let q = check(q)?;
                state.apply_x(q);
                state.apply_single(q, hadamard());
            }
            Op::X(q) => state.apply_x(check(q)?),
            Op::Cnot { control, target } => {
                let control = check(control)?;
                let target = check(target)?;
                if control == target {
                    return Err(Error::bad_gadget("CNOT control equals target"));
                }
                state.apply_cnot(control, target);
            }
            Op::MeasureZ { qubit, outcome } => {
                accept *= state.project_z(check(qubit)?, outcome)?;
            }
            Op::MeasureX { qubit, plus } => {
                accept *= state.project_x(check(qubit)?, plus)?;
            }
        }
    }
    Ok((accept, state))
}

/// Wire roles in [`teleported_cnot_circuit`], in qubit order: logical
/// control in, logical target in, two teleportation pairs (measured qubit,
/// output qubit each).
pub const TC_CONTROL_IN: usize = 0;
pub const TC_TARGET_IN: usize = 1;
pub const TC_M1: usize = 2;
pub const TC_OUT_CONTROL: usize = 3;
pub const TC_M2: usize = 4;
pub const TC_OUT_TARGET: usize = 5;

/// Physical teleported-CNOT circuit on computational inputs `|a, b>`.
///
/// Two pre-entangled pairs are linked by a CNOT, the inputs are coupled in,
/// and all four non-output qubits are measured with postselection (`|0>` on
/// the pair halves, `|+>` on the consumed inputs). Every joint postselected
/// outcome has probability exactly 1/16, independent of the input values,
/// and the surviving output qubits hold `|a, a XOR b>`.
///
/// `faults` are X gates inserted after specific gates for noise
/// enumeration, given as (position, qubit): position `k` inserts after the
/// k-th CNOT of the fixed gate sequence (0 = pair-1 link, 1 = pair-2 link,
/// 2 = inter-pair, 3 = control coupling, 4 = target coupling).
pub fn teleported_cnot_circuit(a: bool, b: bool, faults: &[(usize, usize)]) -> Circuit {
    let mut c = Circuit::new(6);
    if a {
        c.push(Op::PrepOne(TC_CONTROL_IN));
    }
    if b {
        c.push(Op::PrepOne(TC_TARGET_IN));
    }
    c.push(Op::PrepPlus(TC_M1));
    c.push(Op::PrepZero(TC_OUT_CONTROL));
    c.push(Op::PrepPlus(TC_M2));
    c.push(Op::PrepZero(TC_OUT_TARGET));
    let cnots = [
        (TC_M1, TC_OUT_CONTROL),
        (TC_M2, TC_OUT_TARGET),
        (TC_M1, TC_M2),
        (TC_CONTROL_IN, TC_M1),
        (TC_TARGET_IN, TC_M2),
    ];
    for (k, (control, target)) in cnots.into_iter().enumerate() {
        c.push(Op::Cnot { control, target });
        for &(pos, qubit) in faults {
            if pos == k {
                c.push(Op::X(qubit));
            }
        }
    }
    c.push(Op::MeasureZ {
        qubit: TC_M1,
        outcome: false,
    });
    c.push(Op::MeasureZ {
        qubit: TC_M2,
        outcome: false,
    });
    c.push(Op::MeasureX {
        qubit: TC_CONTROL_IN,
        plus: true,
    });
    c.push(Op::MeasureX {
        qubit: TC_TARGET_IN,
        plus: true,
    });
    c
}

/// Reference output of the ideal teleported CNOT: consumed qubits in their
/// postselected states, outputs holding `|a, a XOR b>`.
pub fn teleported_cnot_reference(a: bool, b: bool) -> Result<PureState, Error> {
    let mut c = Circuit::new(6);
    c.push(Op::PrepPlus(TC_CONTROL_IN));
    c.push(Op::PrepPlus(TC_TARGET_IN));
    if a {
        c.push(Op::PrepOne(TC_OUT_CONTROL));
    }
    if a != b {
        c.push(Op::PrepOne(TC_OUT_TARGET));
    }
    Ok(statevector_run(&c)?.1)
}

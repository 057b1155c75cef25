//! Independent brute-force verifiers for the two pillars of the analysis:
//! hull membership (dense linear-algebra solve in [`lp`]) and circuit
//! behavior (dense state-vector simulation in [`statevec`]). Both are
//! deliberately naive — their job is to catch bugs in the fast paths, not to
//! scale.

pub mod lp;
pub mod statevec;

pub use lp::{brute_force_decompose, lp_membership, LpReport, MAX_ORACLE_WIRES};
pub use statevec::{
    statevector_run, teleported_cnot_circuit, teleported_cnot_reference, Circuit, Op, PureState,
    MAX_QUBITS,
};

//! Fast zeta and Mobius transforms over the subset lattice.
//!
//! All tables are dense vectors of length 2^n indexed by wire mask. The
//! transforms used here run over supersets:
//!
//! * superset zeta:   g(x) = sum over y >= x of f(y)   (y ranges over
//!   supersets of x, i.e. masks with `x & y == x`),
//! * superset Mobius: f(x) = sum over y >= x of (-1)^{|y|-|x|} g(y),
//!
//! which are mutually inverse. Both run in n * 2^n additions via the usual
//! in-place butterfly over one bit position at a time.

use crate::scalar::Scalar;

fn check_len<T>(values: &[T]) -> usize {
    let len = values.len();
    assert!(len.is_power_of_two(), "table length must be a power of two");
    len.trailing_zeros() as usize
}

/// In-place superset-sum transform: `values[x] <- sum over y >= x`.
pub fn superset_zeta<T: Scalar>(values: &mut [T]) {
    let n = check_len(values);
    for i in 0..n {
        let bit = 1usize << i;
        for mask in 0..values.len() {
            if mask & bit == 0 {
                let upper = values[mask | bit].clone();
                values[mask] = values[mask].clone() + upper;
            }
        }
    }
}

/// In-place inverse of [`superset_zeta`] (signed superset sums).
pub fn superset_mobius<T: Scalar>(values: &mut [T]) {
    let n = check_len(values);
    for i in 0..n {
        let bit = 1usize << i;
        for mask in 0..values.len() {
            if mask & bit == 0 {
                let upper = values[mask | bit].clone();
                values[mask] = values[mask].clone() - upper;
            }
        }
    }
}

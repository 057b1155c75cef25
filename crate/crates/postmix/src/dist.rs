//! Distributions over bit-flip patterns and bitwise-independent products.
//!
//! An [`ErrorDistribution`] is a dense probability table over all 2^n flip
//! patterns of an n-wire register (n <= 24). A [`ProductParams`] holds
//! per-wire flip rates; the associated product distribution flips each wire
//! independently.
//!
//! The central derived quantity is the up-set probability of a pattern `y`:
//! the total mass on patterns whose error set contains `y`'s. Up-set values
//! for every `y` at once are a superset-zeta transform of the table, and for
//! a product distribution they factor into the product of the rates on `y`'s
//! errored wires.

use crate::error::Error;
use crate::pattern::{ErrorPattern, MAX_WIRES};
use crate::scalar::{sum, Rational, Scalar};
use crate::transform::superset_zeta;

/// Per-wire flip rates for a bitwise-independent distribution.
#[derive(Clone, Debug, PartialEq)]
pub struct ProductParams<T> {
    rates: Vec<T>,
}

impl<T: Scalar> ProductParams<T> {
    /// Validate rates; each must lie in [0, 1].
    pub fn new(rates: Vec<T>) -> Result<Self, Error> {
        if rates.is_empty() || rates.len() > MAX_WIRES {
            return Err(Error::BadWireCount { n: rates.len() });
        }
        for (i, r) in rates.iter().enumerate() {
            if *r < T::zero() || *r > T::one() {
                return Err(Error::ProbabilityOutOfRange {
                    what: format!("wire {i} rate"),
                });
            }
        }
        Ok(Self { rates })
    }

    /// The same rate on every wire.
    pub fn uniform(n: usize, rate: T) -> Result<Self, Error> {
        Self::new(vec![rate; n])
    }

    pub fn wires(&self) -> usize {
        self.rates.len()
    }

    pub fn rates(&self) -> &[T] {
        &self.rates
    }

    pub fn rate(&self, wire: usize) -> &T {
        &self.rates[wire]
    }

    /// Product of the rates on the errored wires of `y` (one for the empty
    /// pattern). This is the up-set probability of `y` under the product
    /// distribution at these rates.
    pub fn upset_product(&self, y: &ErrorPattern) -> T {
        debug_assert_eq!(y.wires(), self.wires());
        let mut acc = T::one();
        for (i, r) in self.rates.iter().enumerate() {
            if y.bit(i) {
                acc = acc * r.clone();
            }
        }
        acc
    }

    /// Up-set products for every pattern mask at once.
    pub fn upset_products(&self) -> Vec<T> {
        let n = self.wires();
        let mut out = vec![T::one(); 1 << n];
        for mask in 0..out.len() {
            let mut acc = T::one();
            for (i, r) in self.rates.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    acc = acc * r.clone();
                }
            }
            out[mask] = acc;
        }
        out
    }
}

/// Dense probability table over the 2^n flip patterns of an n-wire register.
#[derive(Clone, Debug, PartialEq)]
pub struct ErrorDistribution<T> {
    n: usize,
    probs: Vec<T>,
}

impl<T: Scalar> ErrorDistribution<T> {
    /// Validate a full table: correct length, nonnegative entries, total mass
    /// one (exactly in exact mode, within the float band otherwise).
    pub fn new(n: usize, probs: Vec<T>) -> Result<Self, Error> {
        if n == 0 || n > MAX_WIRES {
            return Err(Error::BadWireCount { n });
        }
        if probs.len() != 1 << n {
            return Err(Error::SizeMismatch {
                expected: 1 << n,
                got: probs.len(),
            });
        }
        for (mask, p) in probs.iter().enumerate() {
            if *p < T::zero() {
                return Err(Error::ProbabilityOutOfRange {
                    what: format!("pattern {mask:#b}"),
                });
            }
        }
        let total = sum(&probs);
        if (total.clone() - T::one()).abs() > T::band() {
            return Err(Error::NotNormalized {
                sum: format!("{total:?}"),
            });
        }
        Ok(Self { n, probs })
    }

    /// All mass on a single pattern.
    pub fn point_mass(pattern: &ErrorPattern) -> Self {
        let mut probs = vec![T::zero(); 1 << pattern.wires()];
        probs[pattern.mask() as usize] = T::one();
        Self {
            n: pattern.wires(),
            probs,
        }
    }

    /// Independent per-wire flips at the given rates.
    pub fn product(params: &ProductParams<T>) -> Self {
        let n = params.wires();
        let mut probs = vec![T::one(); 1 << n];
        for mask in 0..probs.len() {
            let mut acc = T::one();
            for (i, r) in params.rates().iter().enumerate() {
                let factor = if mask >> i & 1 == 1 {
                    r.clone()
                } else {
                    T::one() - r.clone()
                };
                acc = acc * factor;
            }
            probs[mask] = acc;
        }
        Self { n, probs }
    }

    /// Construct from an already-validated table without re-checking mass.
    /// Used by engines whose intermediate states are normalized by
    /// construction; debug builds still assert the invariants.
    pub(crate) fn from_normalized(n: usize, probs: Vec<T>) -> Self {
        debug_assert_eq!(probs.len(), 1 << n);
        debug_assert!(
            (sum(&probs) - T::one()).abs() <= T::band(),
            "internal table not normalized"
        );
        Self { n, probs }
    }

    pub fn wires(&self) -> usize {
        self.n
    }

    pub fn probs(&self) -> &[T] {
        &self.probs
    }

    pub fn prob(&self, pattern: &ErrorPattern) -> &T {
        debug_assert_eq!(pattern.wires(), self.n);
        &self.probs[pattern.mask() as usize]
    }

    /// Total mass on patterns whose error set contains `y`'s.
    pub fn upset_probability(&self, y: &ErrorPattern) -> T {
        debug_assert_eq!(y.wires(), self.n);
        let y = y.mask() as usize;
        let mut acc = T::zero();
        for (mask, p) in self.probs.iter().enumerate() {
            if mask & y == y {
                acc = acc + p.clone();
            }
        }
        acc
    }

    /// Up-set probabilities for every pattern at once (superset-zeta of the
    /// table); entry 0 is always the total mass.
    pub fn upset_probabilities(&self) -> Vec<T> {
        let mut table = self.probs.clone();
        superset_zeta(&mut table);
        table
    }

    /// Convex mixture of distributions on the same register. Weights must be
    /// nonnegative and sum to one (within the float band).
    pub fn mix(components: &[(T, ErrorDistribution<T>)]) -> Result<Self, Error> {
        let n = match components.first() {
            Some((_, d)) => d.wires(),
            None => return Err(Error::BadMixtureWeights),
        };
        let mut total_weight = T::zero();
        let mut probs = vec![T::zero(); 1 << n];
        for (w, d) in components {
            if d.wires() != n {
                return Err(Error::SizeMismatch {
                    expected: n,
                    got: d.wires(),
                });
            }
            if *w < T::zero() {
                return Err(Error::BadMixtureWeights);
            }
            total_weight = total_weight + w.clone();
            for (acc, p) in probs.iter_mut().zip(d.probs.iter()) {
                *acc = acc.clone() + w.clone() * p.clone();
            }
        }
        if (total_weight - T::one()).abs() > T::band() {
            return Err(Error::BadMixtureWeights);
        }
        Ok(Self { n, probs })
    }

    /// Total variation distance: half the L1 distance between tables.
    pub fn total_variation(&self, other: &Self) -> Result<T, Error> {
        if other.wires() != self.n {
            return Err(Error::SizeMismatch {
                expected: self.n,
                got: other.wires(),
            });
        }
        let mut acc = T::zero();
        for (a, b) in self.probs.iter().zip(other.probs.iter()) {
            acc = acc + (a.clone() - b.clone()).abs();
        }
        Ok(acc / T::from_ratio(2, 1))
    }

    /// Marginal flip probability of a single wire.
    pub fn wire_marginal(&self, wire: usize) -> T {
        let bit = 1usize << wire;
        let mut acc = T::zero();
        for (mask, p) in self.probs.iter().enumerate() {
            if mask & bit != 0 {
                acc = acc + p.clone();
            }
        }
        acc
    }
}

impl ErrorDistribution<f64> {
    /// Lossless lift of a float table into exact arithmetic, renormalized so
    /// the exact mass is one (the float table is only one-within-band).
    pub fn to_exact(&self) -> ErrorDistribution<Rational> {
        let probs: Vec<Rational> = self
            .probs
            .iter()
            .map(|p| Rational::from_f64_lossless(*p))
            .collect();
        let total = sum(&probs);
        let probs = probs.into_iter().map(|p| p / total.clone()).collect();
        ErrorDistribution {
            n: self.n,
            probs,
        }
    }
}

impl ErrorDistribution<Rational> {
    /// Nearest-float projection of an exact table, for reporting.
    pub fn to_f64(&self) -> ErrorDistribution<f64> {
        ErrorDistribution {
            n: self.n,
            probs: self.probs.iter().map(Scalar::to_f64).collect(),
        }
    }
}

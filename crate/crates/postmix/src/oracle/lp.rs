//! Exhaustive linear-algebra oracle for hull membership.
//!
//! Independent of the lattice-transform route in [`crate::mixing`]: the
//! vertex matrix is materialized column by column from the product formula
//! and the system `V·λ = target` is solved by dense Gaussian elimination
//! with partial pivoting. For rates in `(0, 1)` the vertices are linearly
//! independent, so the solve always succeeds and feasibility reduces to the
//! sign of the smallest coefficient. On infeasibility a separating
//! functional is extracted (the row of `V⁻¹` belonging to the most negative
//! coefficient): it is nonnegative on every vertex but negative on the
//! target. Capacity is capped at 6 wires — a 64×64 system — which keeps the
//! exact-rational path fast and the oracle boring.

use crate::dist::{ErrorDistribution, ProductParams};
use crate::error::Error;
use crate::mixing::MixtureDecomposition;
use crate::pattern::ErrorPattern;
use crate::scalar::Scalar;

/// Widest register the dense oracle accepts.
pub const MAX_ORACLE_WIRES: usize = 6;

/// Outcome of the dense feasibility solve.
#[derive(Clone, Debug, PartialEq)]
pub struct LpReport<T> {
    /// Whether a nonnegative mixture exists (smallest coefficient at least
    /// `-tol`).
    pub feasible: bool,
    /// Full signed solution of `V·λ = target`, indexed by vertex mask.
    pub lambda: Vec<T>,
    /// Smallest coefficient.
    pub margin: T,
    /// Vertex attaining the smallest coefficient (first in mask order).
    pub worst_w: ErrorPattern,
    /// On infeasibility, a functional over patterns that is `>= 0` on every
    /// vertex distribution but `< 0` on the target.
    pub certificate: Option<Vec<T>>,
}

/// Entry of the vertex matrix: probability that the product `w·p` produces
/// the pattern `z`, written out directly so the oracle shares no code with
/// the distribution plumbing it checks.
fn vertex_entry<T: Scalar>(z: usize, w: usize, rates: &[T]) -> T {
    let mut acc = T::one();
    for (i, rate) in rates.iter().enumerate() {
        let r = if w >> i & 1 == 1 {
            rate.clone()
        } else {
            T::zero()
        };
        let factor = if z >> i & 1 == 1 { r } else { T::one() - r };
        acc = acc * factor;
    }
    acc
}

/// Solve `A·x = b` by Gaussian elimination with partial pivoting. `A` is
/// consumed. Exact over rationals; standard floating elimination otherwise.
fn solve_dense<T: Scalar>(mut a: Vec<Vec<T>>, mut b: Vec<T>) -> Result<Vec<T>, Error> {
    let n = b.len();
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| {
                a[i][col]
                    .abs()
                    .partial_cmp(&a[j][col].abs())
                    .expect("rates and masses are never NaN")
            })
            .expect("nonempty range");
        if a[pivot][col].is_zero() {
            return Err(Error::SingularSystem);
        }
        a.swap(col, pivot);
        b.swap(col, pivot);
        for row in (col + 1)..n {
            if a[row][col].is_zero() {
                continue;
            }
            let f = a[row][col].clone() / a[col][col].clone();
            for k in col..n {
                a[row][k] = a[row][k].clone() - f.clone() * a[col][k].clone();
            }
            b[row] = b[row].clone() - f * b[col].clone();
        }
    }
    let mut x = vec![T::zero(); n];
    for row in (0..n).rev() {
        let mut acc = b[row].clone();
        for col in (row + 1)..n {
            acc = acc - a[row][col].clone() * x[col].clone();
        }
        x[row] = acc / a[row][row].clone();
    }
    Ok(x)
}

/// Square vertex matrix over the live (positive-rate) wires.
fn vertex_matrix<T: Scalar>(rates: &[T]) -> Vec<Vec<T>> {
    let dim = 1 << rates.len();
    (0..dim)
        .map(|z| (0..dim).map(|w| vertex_entry(z, w, rates)).collect())
        .collect()
}

struct Reduction<T> {
    live: Vec<usize>,
    rates: Vec<T>,
    target: Vec<T>,
    /// A wire with zero rate but positive error mass, if any.
    blocked: Option<(usize, T)>,
}

/// Split off zero-rate wires, mirroring the projection rules of the
/// transform route: mass on a zero-rate wire blocks any decomposition;
/// otherwise the wire is dropped and the solve happens on the rest.
fn reduce<T: Scalar>(dist: &ErrorDistribution<T>, params: &ProductParams<T>) -> Reduction<T> {
    let n = dist.wires();
    let live: Vec<usize> = (0..n).filter(|&i| !params.rate(i).is_zero()).collect();
    for i in 0..n {
        if params.rate(i).is_zero() {
            let mass = dist.wire_marginal(i);
            if mass > T::band() {
                return Reduction {
                    live,
                    rates: Vec::new(),
                    target: Vec::new(),
                    blocked: Some((i, mass)),
                };
            }
        }
    }
    let dead_mask: usize = (0..n)
        .filter(|&i| params.rate(i).is_zero())
        .map(|i| 1usize << i)
        .sum();
    let mut target = vec![T::zero(); 1 << live.len()];
    for (mask, p) in dist.probs().iter().enumerate() {
        if mask & dead_mask != 0 {
            continue;
        }
        let mut idx = 0usize;
        for (k, &wire) in live.iter().enumerate() {
            if mask >> wire & 1 == 1 {
                idx |= 1 << k;
            }
        }
        target[idx] = target[idx].clone() + p.clone();
    }
    let rates = live.iter().map(|&i| params.rate(i).clone()).collect();
    Reduction {
        live,
        rates,
        target,
        blocked: None,
    }
}

/// Expand a reduced-lattice vector back to the full lattice, placing zeros
/// on entries that touch a dropped wire.
fn expand<T: Scalar>(reduced: Vec<T>, live: &[usize], n: usize) -> Vec<T> {
    let mut full = vec![T::zero(); 1 << n];
    for (ridx, v) in reduced.into_iter().enumerate() {
        let mut mask = 0usize;
        for (k, &wire) in live.iter().enumerate() {
            if ridx >> k & 1 == 1 {
                mask |= 1 << wire;
            }
        }
        full[mask] = v;
    }
    full
}

/// Decide whether `dist` is a convex mixture of the vertex products of
/// `params`, by explicit solve. `tol` is the feasibility slack on the
/// smallest coefficient (zero for exact arithmetic, `1e-9` is the
/// conventional float margin).
pub fn lp_membership<T: Scalar>(
    dist: &ErrorDistribution<T>,
    params: &ProductParams<T>,
    tol: T,
) -> Result<LpReport<T>, Error> {
    let n = dist.wires();
    if n > MAX_ORACLE_WIRES {
        return Err(Error::OracleTooWide { got: n });
    }
    if params.wires() != n {
        return Err(Error::SizeMismatch {
            expected: n,
            got: params.wires(),
        });
    }
    let reduction = reduce(dist, params);

    if let Some((wire, mass)) = reduction.blocked {
        // No vertex puts mass on a zero-rate wire, so "minus the wire-i
        // marginal" is nonnegative (identically zero) on the hull yet
        // negative on the target.
        let mut certificate = vec![T::zero(); 1 << n];
        for (z, c) in certificate.iter_mut().enumerate() {
            if z >> wire & 1 == 1 {
                *c = -T::one();
            }
        }
        return Ok(LpReport {
            feasible: false,
            lambda: Vec::new(),
            margin: -mass,
            worst_w: ErrorPattern::zero(n).expect("validated width").toggled(wire),
            certificate: Some(certificate),
        });
    }

    let matrix = vertex_matrix(&reduction.rates);
    let lambda_reduced = solve_dense(matrix, reduction.target.clone())?;
    let lambda = expand(lambda_reduced.clone(), &reduction.live, n);

    let mut worst = 0usize;
    for (mask, v) in lambda.iter().enumerate() {
        if *v < lambda[worst] {
            worst = mask;
        }
    }
    let margin = lambda[worst].clone();
    let feasible = margin >= -tol;

    let certificate = if feasible {
        None
    } else {
        // Row of V^-1 for the worst vertex: solve V^T y = e_worst on the
        // reduced lattice, then pad with zeros on dropped-wire patterns.
        let mut worst_reduced = 0usize;
        for (k, &wire) in reduction.live.iter().enumerate() {
            if worst >> wire & 1 == 1 {
                worst_reduced |= 1 << k;
            }
        }
        let dim = 1 << reduction.rates.len();
        let transpose: Vec<Vec<T>> = (0..dim)
            .map(|r| {
                (0..dim)
                    .map(|c| vertex_entry(c, r, &reduction.rates))
                    .collect()
            })
            .collect();
        let mut rhs = vec![T::zero(); dim];
        rhs[worst_reduced] = T::one();
        let functional = solve_dense(transpose, rhs)?;
        Some(expand(functional, &reduction.live, n))
    };

    Ok(LpReport {
        feasible,
        lambda,
        margin,
        worst_w: ErrorPattern::new(worst as u32, n).expect("mask in range"),
        certificate,
    })
}

/// Decompose by explicit solve instead of lattice transforms. Returns the
/// full signed coefficient vector (negative entries meaning the input lies
/// outside the hull); a zero-rate wire carrying mass has no solution at all
/// and errors out.
pub fn brute_force_decompose<T: Scalar>(
    dist: &ErrorDistribution<T>,
    params: &ProductParams<T>,
) -> Result<MixtureDecomposition<T>, Error> {
    let n = dist.wires();
    if n > MAX_ORACLE_WIRES {
        return Err(Error::OracleTooWide { got: n });
    }
    if params.wires() != n {
        return Err(Error::SizeMismatch {
            expected: n,
            got: params.wires(),
        });
    }
    let reduction = reduce(dist, params);
    if let Some((wire, mass)) = reduction.blocked {
        return Err(Error::ZeroRateWire {
            wire,
            mass: mass.render_value(),
        });
    }
    let matrix = vertex_matrix(&reduction.rates);
    let lambda_reduced = solve_dense(matrix, reduction.target)?;
    MixtureDecomposition::new(params.clone(), expand(lambda_reduced, &reduction.live, n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mixing::{check_hull_membership, mixing_coefficients, vertex_distribution};
    use crate::scalar::Rational;
    use num_traits::Zero;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha12Rng;

    fn pat(s: &str) -> ErrorPattern {
        ErrorPattern::parse(s).unwrap()
    }

    fn rat(n: i64, d: i64) -> Rational {
        Rational::from_ratio(n, d)
    }

    #[test]
    fn vertex_input_gives_indicator() {
        let params = ProductParams::new(vec![rat(1, 5), rat(1, 3), rat(2, 7)]).unwrap();
        let v = vertex_distribution(&pat("101"), &params).unwrap();
        let report = lp_membership(&v, &params, Rational::zero()).unwrap();
        assert!(report.feasible);
        for (mask, c) in report.lambda.iter().enumerate() {
            let expected = if mask == pat("101").mask() as usize {
                rat(1, 1)
            } else {
                rat(0, 1)
            };
            assert_eq!(*c, expected);
        }
    }

    #[test]
    fn counterexample_is_infeasible_with_valid_certificate() {
        let mut probs = vec![Rational::zero(); 16];
        probs[pat("1010").mask() as usize] = rat(1, 200);
        probs[pat("0101").mask() as usize] = rat(1, 200);
        probs[0] = rat(99, 100);
        let dist = ErrorDistribution::new(4, probs).unwrap();
        let params = ProductParams::uniform(4, rat(1, 10)).unwrap();
        let report = lp_membership(&dist, &params, Rational::zero()).unwrap();
        assert!(!report.feasible);
        let cert = report.certificate.as_ref().unwrap();
        // Negative on the target...
        let on_target: Rational = dist
            .probs()
            .iter()
            .zip(cert.iter())
            .map(|(p, c)| p.clone() * c.clone())
            .fold(Rational::zero(), |a, b| a + b);
        assert!(on_target < Rational::zero());
        // ...and nonnegative on every vertex.
        for w in 0..16u32 {
            let vertex = vertex_distribution(&ErrorPattern::new(w, 4).unwrap(), &params).unwrap();
            let on_vertex: Rational = vertex
                .probs()
                .iter()
                .zip(cert.iter())
                .map(|(p, c)| p.clone() * c.clone())
                .fold(Rational::zero(), |a, b| a + b);
            assert!(on_vertex >= Rational::zero(), "vertex {w:#b}");
        }
    }

    #[test]
    fn matches_transform_route_exactly() {
        let mut rng = ChaCha12Rng::seed_from_u64(11);
        for _ in 0..25 {
            let n = rng.gen_range(2..=4);
            let rates: Vec<Rational> = (0..n)
                .map(|_| Rational::from_ratio(rng.gen_range(1..40), 100))
                .collect();
            let params = ProductParams::new(rates).unwrap();
            let raw: Vec<i64> = (0..1 << n).map(|_| rng.gen_range(1..1000)).collect();
            let total: i64 = raw.iter().sum();
            let probs: Vec<Rational> =
                raw.into_iter().map(|x| Rational::from_ratio(x, total)).collect();
            let dist = ErrorDistribution::new(n, probs).unwrap();
            let via_solve = brute_force_decompose(&dist, &params).unwrap();
            let via_transform = mixing_coefficients(&dist, &params).unwrap();
            assert_eq!(via_solve.coeffs(), via_transform.coeffs());
        }
    }

    #[test]
    fn sign_agrees_with_closed_form_float() {
        let mut rng = ChaCha12Rng::seed_from_u64(5);
        let mut agreements = 0;
        for _ in 0..60 {
            let n = rng.gen_range(2..=5);
            let rates: Vec<f64> = (0..n).map(|_| rng.gen_range(0.05..0.5)).collect();
            let params = ProductParams::new(rates).unwrap();
            let raw: Vec<f64> = (0..1 << n).map(|_| rng.gen_range(0.0f64..1.0)).collect();
            let total: f64 = raw.iter().sum();
            let dist =
                ErrorDistribution::new(n, raw.into_iter().map(|x| x / total).collect()).unwrap();
            let report = lp_membership(&dist, &params, 1e-9).unwrap();
            if report.margin.abs() < 1e-9 {
                continue; // boundary band excluded from the comparison
            }
            let verdict = check_hull_membership(&dist, &params).unwrap();
            assert_eq!(report.feasible, verdict.member);
            agreements += 1;
        }
        assert!(agreements > 30, "only {agreements} decisive instances");
    }

    #[test]
    fn zero_rate_wire_paths() {
        let params = ProductParams::new(vec![Rational::zero(), rat(1, 4)]).unwrap();
        // Mass on the zero-rate wire: infeasible with an explicit marginal
        // functional.
        let bad = ErrorDistribution::product(
            &ProductParams::new(vec![rat(1, 10), rat(1, 10)]).unwrap(),
        );
        let report = lp_membership(&bad, &params, Rational::zero()).unwrap();
        assert!(!report.feasible);
        assert_eq!(report.worst_w, pat("10"));
        assert!(matches!(
            brute_force_decompose(&bad, &params),
            Err(Error::ZeroRateWire { wire: 0, .. })
        ));
        // No mass there: the wire is dropped and the rest solves normally.
        let good = ErrorDistribution::product(
            &ProductParams::new(vec![Rational::zero(), rat(1, 10)]).unwrap(),
        );
        let d = brute_force_decompose(&good, &params).unwrap();
        assert_eq!(*d.coeff(&pat("00")), rat(3, 5));
        assert_eq!(*d.coeff(&pat("01")), rat(2, 5));
    }

    #[test]
    fn capacity_is_enforced() {
        let params = ProductParams::uniform(7, 0.1).unwrap();
        let dist = ErrorDistribution::product(&params);
        assert!(matches!(
            lp_membership(&dist, &params, 0.0),
            Err(Error::OracleTooWide { got: 7 })
        ));
    }
}

//! Decomposition of correlated flip distributions into mixtures of bounded
//! product distributions.
//!
//! Fix per-wire rate bounds `p = (p_1, ..., p_n)`. For each subset `w` of
//! wires there is a vertex distribution `w * p` that flips wire `i`
//! independently with rate `p_i` if `w` contains `i` and rate zero otherwise.
//! The convex hull of these 2^n vertices is the set of distributions that can
//! be explained as "some subset of wires misbehaving independently, each at
//! most at its bound".
//!
//! Vertices are linearly independent, so every distribution `D` has a unique
//! signed coefficient vector with `D = sum_w lambda_w (w * p)`, and `D` lies
//! in the hull exactly when all coefficients are nonnegative. The
//! coefficients have a closed form in terms of up-set probabilities:
//!
//! ```text
//! lambda(x) = sum over y >= x of (-1)^(|y| - |x|) * up(y) / prod_{i in y} p_i
//! ```
//!
//! where `y >= x` ranges over supersets and `up(y)` is the mass on patterns
//! containing `y`. Both the division step and the signed sum are lattice
//! transforms, so the full coefficient vector costs two n * 2^n passes.
//!
//! Wires with `p_i = 0` are handled outside the formula: if the distribution
//! puts mass on such a wire no mixture can cover it (reported as
//! non-membership with the wire as certificate), otherwise the wire is
//! projected out and the decomposition computed on the remaining lattice.

use crate::dist::{ErrorDistribution, ProductParams};
use crate::error::Error;
use crate::pattern::ErrorPattern;
use crate::scalar::{sum, Scalar};
use crate::transform::{superset_mobius, superset_zeta};

/// Signed coefficients of a distribution over the vertex products `w * p`.
///
/// Coefficients always sum to one. The distribution they came from is a
/// member of the hull iff every coefficient is nonnegative; in float mode a
/// coefficient above `-1e-12` counts as zero.
#[derive(Clone, Debug, PartialEq)]
pub struct MixtureDecomposition<T> {
    params: ProductParams<T>,
    coeffs: Vec<T>,
}

impl<T: Scalar> MixtureDecomposition<T> {
    /// Validate dimensions and that the coefficients sum to one. Signed
    /// coefficients are allowed; membership is a separate question.
    pub fn new(params: ProductParams<T>, coeffs: Vec<T>) -> Result<Self, Error> {
        if coeffs.len() != 1 << params.wires() {
            return Err(Error::SizeMismatch {
                expected: 1 << params.wires(),
                got: coeffs.len(),
            });
        }
        let total = sum(&coeffs);
        if (total.clone() - T::one()).abs() > T::band() {
            return Err(Error::NotNormalized {
                sum: total.render_value(),
            });
        }
        Ok(Self { params, coeffs })
    }

    pub fn params(&self) -> &ProductParams<T> {
        &self.params
    }

    pub fn wires(&self) -> usize {
        self.params.wires()
    }

    /// Coefficient table indexed by vertex mask.
    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn coeff(&self, w: &ErrorPattern) -> &T {
        &self.coeffs[w.mask() as usize]
    }

    /// Smallest coefficient and the vertex attaining it (first such vertex in
    /// mask order on ties).
    pub fn min_coefficient(&self) -> (ErrorPattern, T) {
        let mut best = 0usize;
        for (mask, c) in self.coeffs.iter().enumerate() {
            if *c < self.coeffs[best] {
                best = mask;
            }
        }
        (
            ErrorPattern::new(best as u32, self.wires()).expect("mask in range"),
            self.coeffs[best].clone(),
        )
    }

    /// Whether all coefficients are nonnegative (up to the float band).
    pub fn is_member(&self) -> bool {
        let bound = -T::band();
        self.coeffs.iter().all(|c| *c >= bound)
    }

    /// Nonnegative version: coefficients inside `[-band, 0)` are clamped to
    /// zero and the vector renormalized. `None` if any coefficient is
    /// genuinely negative.
    pub fn clamped(&self) -> Option<Self> {
        if !self.is_member() {
            return None;
        }
        let mut coeffs: Vec<T> = self
            .coeffs
            .iter()
            .map(|c| if *c < T::zero() { T::zero() } else { c.clone() })
            .collect();
        let total = sum(&coeffs);
        for c in coeffs.iter_mut() {
            *c = c.clone() / total.clone();
        }
        Some(Self {
            params: self.params.clone(),
            coeffs,
        })
    }
}

/// Membership verdict: the sign of the smallest vertex coefficient, with the
/// vertex attaining it as witness.
#[derive(Clone, Debug, PartialEq)]
pub struct HullVerdict<T> {
    pub member: bool,
    pub worst_x: ErrorPattern,
    pub worst_value: T,
}

/// The product distribution of the vertex `w * p`: rate `p_i` on wires in
/// `w`, zero elsewhere.
pub fn vertex_distribution<T: Scalar>(
    w: &ErrorPattern,
    params: &ProductParams<T>,
) -> Result<ErrorDistribution<T>, Error> {
    if w.wires() != params.wires() {
        return Err(Error::SizeMismatch {
            expected: params.wires(),
            got: w.wires(),
        });
    }
    let rates = params
        .rates()
        .iter()
        .enumerate()
        .map(|(i, p)| if w.bit(i) { p.clone() } else { T::zero() })
        .collect();
    Ok(ErrorDistribution::product(&ProductParams::new(rates)?))
}

/// Signed coefficient table for `dist` over the vertices of `params`,
/// including the zero-rate wire projection. On a zero-rate wire carrying
/// mass, returns that wire and its mass instead.
fn signed_coefficients<T: Scalar>(
    dist: &ErrorDistribution<T>,
    params: &ProductParams<T>,
) -> Result<Vec<T>, (usize, T)> {
    let n = dist.wires();
    debug_assert_eq!(params.wires(), n);

    let live: Vec<usize> = (0..n).filter(|&i| !params.rate(i).is_zero()).collect();
    let dead: Vec<usize> = (0..n).filter(|&i| params.rate(i).is_zero()).collect();
    for &wire in &dead {
        let mass = dist.wire_marginal(wire);
        if mass > T::band() {
            return Err((wire, mass));
        }
    }

    if dead.is_empty() {
        return Ok(signed_coefficients_positive(dist, params));
    }

    // Project onto the live wires. Mass on dead wires is zero (or float dust
    // inside the band), so folding it onto the cleared-bit entry is exact up
    // to the band.
    let dead_mask: usize = dead.iter().map(|&i| 1usize << i).sum();
    let m = live.len();
    if m == 0 {
        // Every rate is zero; the only representable distribution is the
        // point mass on no errors, with coefficient one on the empty vertex.
        let mut coeffs = vec![T::zero(); 1 << n];
        coeffs[0] = T::one();
        return Ok(coeffs);
    }
    let mut reduced = vec![T::zero(); 1 << m];
    for (mask, p) in dist.probs().iter().enumerate() {
        let mut idx = 0usize;
        for (k, &wire) in live.iter().enumerate() {
            if mask >> wire & 1 == 1 {
                idx |= 1 << k;
            }
        }
        if mask & dead_mask == 0 {
            reduced[idx] = reduced[idx].clone() + p.clone();
        }
        // Dust on dead wires is dropped; it is below the band by the check
        // above, and exact mode guarantees it is exactly zero.
    }
    let reduced_params = ProductParams::new(
        live.iter().map(|&i| params.rate(i).clone()).collect(),
    )
    .expect("filtered rates stay valid");
    let reduced_dist =
        ErrorDistribution::new(m, normalize_within_band(reduced)).expect("projection preserves mass");
    let reduced_coeffs = signed_coefficients_positive(&reduced_dist, &reduced_params);

    // Re-embed: vertices touching a dead wire get coefficient zero.
    let mut coeffs = vec![T::zero(); 1 << n];
    for (ridx, c) in reduced_coeffs.into_iter().enumerate() {
        let mut mask = 0usize;
        for (k, &wire) in live.iter().enumerate() {
            if ridx >> k & 1 == 1 {
                mask |= 1 << wire;
            }
        }
        coeffs[mask] = c;
    }
    Ok(coeffs)
}

/// Renormalize a table whose mass is one up to float dust dropped during
/// projection. Exact mode tables are untouched.
fn normalize_within_band<T: Scalar>(probs: Vec<T>) -> Vec<T> {
    if T::EXACT {
        return probs;
    }
    let total = sum(&probs);
    probs.into_iter().map(|p| p / total.clone()).collect()
}

/// Coefficient table when every rate is positive: divide up-set values by the
/// rate products, then apply the signed superset transform.
fn signed_coefficients_positive<T: Scalar>(
    dist: &ErrorDistribution<T>,
    params: &ProductParams<T>,
) -> Vec<T> {
    let mut table = dist.upset_probabilities();
    let rate_products = params.upset_products();
    for (t, rp) in table.iter_mut().zip(rate_products.iter()) {
        *t = t.clone() / rp.clone();
    }
    superset_mobius(&mut table);
    table
}

/// Decompose `dist` over the vertices of `params`. The result is the unique
/// signed coefficient vector reproducing `dist`; it has negative entries
/// exactly when `dist` lies outside the hull. A zero-rate wire carrying
/// error mass is an infeasibility (no decomposition exists at these rates)
/// and is reported as [`Error::ZeroRateWire`].
pub fn mixing_coefficients<T: Scalar>(
    dist: &ErrorDistribution<T>,
    params: &ProductParams<T>,
) -> Result<MixtureDecomposition<T>, Error> {
    if params.wires() != dist.wires() {
        return Err(Error::SizeMismatch {
            expected: dist.wires(),
            got: params.wires(),
        });
    }
    match signed_coefficients(dist, params) {
        Ok(coeffs) => MixtureDecomposition::new(params.clone(), coeffs),
        Err((wire, mass)) => Err(Error::ZeroRateWire {
            wire,
            mass: mass.render_value(),
        }),
    }
}

/// Evaluate hull membership: the smallest coefficient over all vertices and
/// the vertex attaining it. A zero-rate wire carrying mass is reported as
/// non-membership with that wire's single-error pattern as witness and the
/// uncoverable mass (negated) as the worst value.
pub fn check_hull_membership<T: Scalar>(
    dist: &ErrorDistribution<T>,
    params: &ProductParams<T>,
) -> Result<HullVerdict<T>, Error> {
    if params.wires() != dist.wires() {
        return Err(Error::SizeMismatch {
            expected: dist.wires(),
            got: params.wires(),
        });
    }
    match signed_coefficients(dist, params) {
        Ok(coeffs) => {
            let decomp = MixtureDecomposition::new(params.clone(), coeffs)?;
            let (worst_x, worst_value) = decomp.min_coefficient();
            Ok(HullVerdict {
                member: worst_value >= -T::band(),
                worst_x,
                worst_value,
            })
        }
        Err((wire, mass)) => Ok(HullVerdict {
            member: false,
            worst_x: ErrorPattern::zero(dist.wires())
                .expect("validated width")
                .toggled(wire),
            worst_value: -mass,
        }),
    }
}

/// Float-mode membership with exact fallback: when the float verdict lands
/// inside the `1e-12` band around zero, the worst coefficient is recomputed
/// in exact arithmetic on the losslessly lifted table. The signed transform
/// cancels terms of wildly different magnitude, so near-zero float verdicts
/// carry cancellation noise; the exact pass removes it. The band is then
/// applied to the noise-free value, since the inputs are still floats.
pub fn check_hull_membership_refined(
    dist: &ErrorDistribution<f64>,
    params: &ProductParams<f64>,
) -> Result<HullVerdict<f64>, Error> {
    let float_verdict = check_hull_membership(dist, params)?;
    if float_verdict.worst_value.abs() > F64_REFINE_BAND {
        return Ok(float_verdict);
    }
    let exact_dist = dist.to_exact();
    let exact_params = ProductParams::new(
        params
            .rates()
            .iter()
            .map(|r| crate::scalar::Rational::from_f64_lossless(*r))
            .collect(),
    )?;
    let exact = check_hull_membership(&exact_dist, &exact_params)?;
    let worst_value = exact.worst_value.to_f64();
    Ok(HullVerdict {
        member: worst_value >= -F64_REFINE_BAND,
        worst_x: exact.worst_x,
        worst_value,
    })
}

const F64_REFINE_BAND: f64 = crate::scalar::F64_BAND;

/// Rebuild the distribution from its decomposition: `sum_w lambda_w (w*p)`.
/// Works for signed coefficient vectors too, as long as the result is a
/// genuine distribution (which it is for any vector produced by
/// [`mixing_coefficients`]). Runs through up-set space in two lattice passes
/// rather than materializing each vertex.
pub fn reconstruct<T: Scalar>(decomp: &MixtureDecomposition<T>) -> Result<ErrorDistribution<T>, Error> {
    let n = decomp.wires();
    // Up-set value of the mixture at y: prod_{i in y} p_i times the total
    // coefficient of vertices containing y.
    let mut table = decomp.coeffs().to_vec();
    superset_zeta(&mut table);
    let rate_products = decomp.params().upset_products();
    for (t, rp) in table.iter_mut().zip(rate_products.iter()) {
        *t = t.clone() * rp.clone();
    }
    superset_mobius(&mut table);
    // Float roundoff can leave dust below zero; clamp it inside the band and
    // let validation reject anything larger.
    for t in table.iter_mut() {
        if *t < T::zero() && *t >= -T::band() {
            *t = T::zero();
        }
    }
    ErrorDistribution::new(n, table)
}

/// Smallest uniform rate `q <= q_max` whose hull contains `dist`, to within
/// `tol`, found by bisection. Valid because hulls are nested in `q`: each
/// vertex at rate `q` is itself a mixture of vertices at any rate `q' >= q`.
/// Returns exactly zero for the no-error point mass and
/// [`Error::InfeasibleUniformRate`] when even `q_max` fails.
pub fn min_uniform_parameter<T: Scalar>(
    dist: &ErrorDistribution<T>,
    q_max: T,
    tol: T,
) -> Result<T, Error> {
    if q_max <= T::zero() || q_max > T::one() {
        return Err(Error::ProbabilityOutOfRange {
            what: "q_max".to_string(),
        });
    }
    if tol <= T::zero() {
        return Err(Error::ProbabilityOutOfRange {
            what: "tolerance".to_string(),
        });
    }
    let n = dist.wires();
    let member_at = |q: &T| -> Result<bool, Error> {
        let params = ProductParams::uniform(n, q.clone())?;
        Ok(check_hull_membership(dist, &params)?.member)
    };
    if member_at(&T::zero())? {
        return Ok(T::zero());
    }
    if !member_at(&q_max)? {
        return Err(Error::InfeasibleUniformRate {
            q_max: q_max.render_value(),
        });
    }
    let mut lo = T::zero();
    let mut hi = q_max;
    let two = T::from_ratio(2, 1);
    while (hi.clone() - lo.clone()) > tol {
        let mid = (lo.clone() + hi.clone()) / two.clone();
        if member_at(&mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;
    use num_traits::Zero;

    fn pat(s: &str) -> ErrorPattern {
        ErrorPattern::parse(s).unwrap()
    }

    fn rat(n: i64, d: i64) -> Rational {
        Rational::from_ratio(n, d)
    }

    #[test]
    fn vertex_distribution_two_wires() {
        // w = 11 at rates (0.3, 0.3): both 0.09, single 0.21 each, none 0.49.
        let params = ProductParams::new(vec![0.3, 0.3]).unwrap();
        let v = vertex_distribution(&pat("11"), &params).unwrap();
        assert!((v.prob(&pat("11")) - 0.09).abs() < 1e-15);
        assert!((v.prob(&pat("10")) - 0.21).abs() < 1e-15);
        assert!((v.prob(&pat("01")) - 0.21).abs() < 1e-15);
        assert!((v.prob(&pat("00")) - 0.49).abs() < 1e-15);
    }

    #[test]
    fn vertex_decomposes_to_indicator() {
        let params = ProductParams::new(vec![rat(1, 10), rat(2, 5), rat(3, 10)]).unwrap();
        for mask in 0..8u32 {
            let w = ErrorPattern::new(mask, 3).unwrap();
            let v = vertex_distribution(&w, &params).unwrap();
            let d = mixing_coefficients(&v, &params).unwrap();
            for (idx, c) in d.coeffs().iter().enumerate() {
                let expected = if idx as u32 == mask { rat(1, 1) } else { rat(0, 1) };
                assert_eq!(*c, expected, "vertex {w} coefficient at {idx:#b}");
            }
        }
    }

    #[test]
    fn mixture_membership_and_roundtrip() {
        let params = ProductParams::new(vec![rat(1, 4), rat(1, 3)]).unwrap();
        let components: Vec<(Rational, ErrorDistribution<Rational>)> = (0..4u32)
            .map(|mask| {
                let w = ErrorPattern::new(mask, 2).unwrap();
                (rat(1, 4), vertex_distribution(&w, &params).unwrap())
            })
            .collect();
        let mixed = ErrorDistribution::mix(&components).unwrap();
        let d = mixing_coefficients(&mixed, &params).unwrap();
        assert!(d.is_member());
        for c in d.coeffs() {
            assert_eq!(*c, rat(1, 4));
        }
        assert_eq!(reconstruct(&d).unwrap(), mixed);
    }

    #[test]
    fn correlated_double_errors_fall_outside_every_hull() {
        // Mass eps split over the complementary pair {1010, 0101}, rest on
        // no-error: the witness is a weight-one vertex with value
        // -(eps/2)(1-q)/q^2, for every uniform q < 1.
        let eps = rat(1, 100);
        let half_eps = eps.clone() / rat(2, 1);
        let mut probs = vec![Rational::zero(); 16];
        probs[pat("1010").mask() as usize] = half_eps.clone();
        probs[pat("0101").mask() as usize] = half_eps.clone();
        probs[0] = rat(1, 1) - eps.clone();
        let dist = ErrorDistribution::new(4, probs).unwrap();
        for q in [rat(1, 20), rat(1, 10), rat(3, 10), rat(9, 10)] {
            let params = ProductParams::uniform(4, q.clone()).unwrap();
            let verdict = check_hull_membership(&dist, &params).unwrap();
            assert!(!verdict.member, "q = {q}");
            assert_eq!(verdict.worst_x.weight(), 1);
            assert_eq!(verdict.worst_x, pat("1000"));
            let expected =
                -half_eps.clone() * (rat(1, 1) - q.clone()) / (q.clone() * q.clone());
            assert_eq!(verdict.worst_value, expected);
            // The signed vector still reconstructs the distribution exactly.
            let signed = mixing_coefficients(&dist, &params).unwrap();
            assert_eq!(reconstruct(&signed).unwrap(), dist);
        }
    }

    #[test]
    fn zero_rate_wire_with_mass_is_certified_infeasible() {
        let params = ProductParams::new(vec![Rational::zero(), rat(3, 10)]).unwrap();
        let dist = ErrorDistribution::product(
            &ProductParams::new(vec![rat(1, 10), rat(1, 5)]).unwrap(),
        );
        match mixing_coefficients(&dist, &params) {
            Err(Error::ZeroRateWire { wire: 0, .. }) => {}
            other => panic!("expected zero-rate error, got {other:?}"),
        }
        let verdict = check_hull_membership(&dist, &params).unwrap();
        assert!(!verdict.member);
        assert_eq!(verdict.worst_x, pat("10"));
        assert_eq!(verdict.worst_value, -rat(1, 10));
    }

    #[test]
    fn zero_rate_wire_without_mass_is_projected_out() {
        let params = ProductParams::new(vec![Rational::zero(), rat(3, 10)]).unwrap();
        let dist = ErrorDistribution::product(
            &ProductParams::new(vec![Rational::zero(), rat(1, 5)]).unwrap(),
        );
        let d = mixing_coefficients(&dist, &params).unwrap();
        // Wire 1 at rate 1/5 against bound 3/10: weight 2/3 on the vertex
        // using wire 1, 1/3 on the empty vertex; nothing on wire-0 vertices.
        assert_eq!(*d.coeff(&pat("00")), rat(1, 3));
        assert_eq!(*d.coeff(&pat("01")), rat(2, 3));
        assert_eq!(*d.coeff(&pat("10")), rat(0, 1));
        assert_eq!(*d.coeff(&pat("11")), rat(0, 1));
        assert!(d.is_member());
        assert_eq!(reconstruct(&d).unwrap(), dist);
    }

    #[test]
    fn min_uniform_point_mass_is_zero() {
        let dist = ErrorDistribution::<Rational>::point_mass(&pat("0000"));
        let q = min_uniform_parameter(&dist, rat(99, 100), rat(1, 1000)).unwrap();
        assert!(q.is_zero());
    }

    #[test]
    fn min_uniform_recovers_product_rate() {
        let q0 = 0.07;
        let dist = ErrorDistribution::product(&ProductParams::uniform(3, q0).unwrap());
        let q = min_uniform_parameter(&dist, 0.999, 1e-9).unwrap();
        assert!((q - q0).abs() < 1e-8, "got {q}");
    }

    #[test]
    fn min_uniform_counterexample_is_infeasible() {
        let mut probs = vec![0.0; 16];
        probs[pat("1010").mask() as usize] = 0.005;
        probs[pat("0101").mask() as usize] = 0.005;
        probs[0] = 0.99;
        let dist = ErrorDistribution::new(4, probs).unwrap();
        match min_uniform_parameter(&dist, 0.999, 1e-9) {
            Err(Error::InfeasibleUniformRate { .. }) => {}
            other => panic!("expected infeasibility, got {other:?}"),
        }
    }

    #[test]
    fn refined_check_settles_band_verdicts_exactly() {
        // A vertex distribution sits on the hull boundary: floats may put the
        // worst coefficient at tiny negative values, the exact recheck must
        // keep it a member.
        let params = ProductParams::new(vec![0.1, 0.2, 0.3, 0.25, 0.15]).unwrap();
        let v = vertex_distribution(&pat("10111"), &params).unwrap();
        let verdict = check_hull_membership_refined(&v, &params).unwrap();
        assert!(verdict.member);
    }

    #[test]
    fn clamped_renormalizes_float_dust() {
        let params = ProductParams::new(vec![0.25, 0.25]).unwrap();
        let coeffs = vec![0.5 + 2e-13, 0.25, 0.25, -2e-13];
        let d = MixtureDecomposition::new(params, coeffs).unwrap();
        assert!(d.is_member());
        let c = d.clamped().unwrap();
        assert!(c.coeffs().iter().all(|&x| x >= 0.0));
        let total: f64 = c.coeffs().iter().sum();
        assert!((total - 1.0).abs() < 1e-15);
    }
}

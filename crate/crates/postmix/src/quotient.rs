//! Error classes on four wires modulo the simultaneous flip of all wires,
//! and the linear embedding of class distributions back into four-wire
//! string distributions.
//!
//! On the two-qubit code state (|0000⟩ + |1111⟩)/√2 — four wires after the
//! check bits are measured off — flipping all four wires acts trivially, so
//! error patterns only matter up to complementation: `x ~ x ⊕ 1111`. That
//! leaves 8 classes. In X-string notation (`X` = flipped wire, leftmost
//! symbol = wire 0) they are `IIII`, `XIII`, `IXII`, `IIXI`, `IIIX`, `XXII`,
//! `XIXI`, `XIIX`.
//!
//! The hull machinery in [`crate::mixing`] works on string distributions,
//! not class distributions, so classes are embedded by putting each class's
//! mass on its minimum-weight members: whole mass on the single member for
//! weight 0 and 1, an even half/half split for the three weight-2 classes.
//! The embedding is linear and injective (images of distinct classes have
//! disjoint support), and folding a string distribution back to classes
//! inverts it. Together this lets a hull certificate for the embedded image
//! be pulled back verbatim: fold each vertex of the mixture and keep its
//! coefficient.

use crate::dist::{ErrorDistribution, ProductParams};
use crate::error::Error;
use crate::mixing::{check_hull_membership, mixing_coefficients, vertex_distribution};
use crate::pattern::ErrorPattern;
use crate::scalar::{sum, Scalar};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

/// Number of wires the quotient is defined on.
pub const QUOTIENT_WIRES: usize = 4;

/// Canonical representative masks in class-index order:
/// IIII, XIII, IXII, IIXI, IIIX, XXII, XIXI, XIIX.
/// (Bit `i` of a mask is wire `i`; wire 0 prints leftmost.)
const CLASS_REPS: [u32; 8] = [
    0b0000, 0b0001, 0b0010, 0b0100, 0b1000, 0b0011, 0b0101, 0b1001,
];

const ALL_ONES: u32 = 0b1111;

/// One of the 8 error classes of `{0,1}^4` modulo complementation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct QuotientClass {
    index: u8,
}

impl QuotientClass {
    /// All classes in canonical order.
    pub fn all() -> [QuotientClass; 8] {
        [0, 1, 2, 3, 4, 5, 6, 7].map(|index| QuotientClass { index })
    }

    pub fn from_index(index: usize) -> Option<QuotientClass> {
        (index < 8).then_some(QuotientClass { index: index as u8 })
    }

    /// Position in [`QuotientClass::all`] order; also the index into
    /// [`QuotientDistribution`] tables.
    pub fn index(&self) -> usize {
        self.index as usize
    }

    /// The class of an arbitrary four-wire pattern. The canonical
    /// representative is the minimum-weight member; the weight-2 classes
    /// break the tie toward the member containing wire 0 (1100 over 0011,
    /// 1010 over 0101, 1001 over 0110).
    pub fn canonicalize(x: &ErrorPattern) -> Result<QuotientClass, Error> {
        if x.wires() != QUOTIENT_WIRES {
            return Err(Error::QuotientWidth { got: x.wires() });
        }
        let mask = x.mask();
        let comp = mask ^ ALL_ONES;
        let rep = match (mask.count_ones(), comp.count_ones()) {
            (a, b) if a < b => mask,
            (a, b) if a > b => comp,
            // Both weight 2: prefer the member with wire 0 flipped.
            _ => {
                if mask & 1 == 1 {
                    mask
                } else {
                    comp
                }
            }
        };
        let index = CLASS_REPS
            .iter()
            .position(|&r| r == rep)
            .expect("every mask canonicalizes to a listed representative");
        Ok(QuotientClass { index: index as u8 })
    }

    /// Canonical representative pattern.
    pub fn rep(&self) -> ErrorPattern {
        ErrorPattern::new(CLASS_REPS[self.index()], QUOTIENT_WIRES).expect("fixed masks are valid")
    }

    /// Both members of the class: the canonical representative and its
    /// complement.
    pub fn members(&self) -> (ErrorPattern, ErrorPattern) {
        let rep = CLASS_REPS[self.index()];
        (
            ErrorPattern::new(rep, QUOTIENT_WIRES).expect("valid"),
            ErrorPattern::new(rep ^ ALL_ONES, QUOTIENT_WIRES).expect("valid"),
        )
    }

    /// Weight of the canonical representative (0, 1 or 2).
    pub fn weight(&self) -> u32 {
        CLASS_REPS[self.index()].count_ones()
    }

    /// X-string name, e.g. `"XIXI"` for the class of 1010 ~ 0101.
    pub fn x_string(&self) -> String {
        let rep = CLASS_REPS[self.index()];
        (0..QUOTIENT_WIRES)
            .map(|i| if rep >> i & 1 == 1 { 'X' } else { 'I' })
            .collect()
    }

    /// Parse an X-string naming any member of a class (e.g. both `"XXII"`
    /// and `"IIXX"` name the same class).
    pub fn parse_x_string(s: &str) -> Result<QuotientClass, Error> {
        if s.len() != QUOTIENT_WIRES {
            return Err(Error::Parse(format!(
                "class name {s:?} must be 4 symbols of 'X'/'I'"
            )));
        }
        let mut mask = 0u32;
        for (i, c) in s.chars().enumerate() {
            match c {
                'X' | 'x' => mask |= 1 << i,
                'I' | 'i' => {}
                other => {
                    return Err(Error::Parse(format!(
                        "class name {s:?} has invalid symbol {other:?}"
                    )))
                }
            }
        }
        Self::canonicalize(&ErrorPattern::new(mask, QUOTIENT_WIRES).expect("4-wire mask"))
    }
}

impl std::fmt::Display for QuotientClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.x_string())
    }
}

/// A probability distribution over the 8 error classes.
#[derive(Clone, Debug, PartialEq)]
pub struct QuotientDistribution<T> {
    probs: Vec<T>,
}

impl<T: Scalar> QuotientDistribution<T> {
    /// Validate: 8 nonnegative entries summing to one (within the float
    /// band), indexed in [`QuotientClass::all`] order.
    pub fn new(probs: Vec<T>) -> Result<Self, Error> {
        if probs.len() != 8 {
            return Err(Error::SizeMismatch {
                expected: 8,
                got: probs.len(),
            });
        }
        for (i, p) in probs.iter().enumerate() {
            if *p < T::zero() || *p > T::one() {
                return Err(Error::ProbabilityOutOfRange {
                    what: format!("class {}", QuotientClass::from_index(i).expect("i < 8")),
                });
            }
        }
        let total = sum(&probs);
        if (total.clone() - T::one()).abs() > T::band() {
            return Err(Error::NotNormalized {
                sum: total.render_value(),
            });
        }
        Ok(Self { probs })
    }

    pub fn point_mass(class: QuotientClass) -> Self {
        let mut probs = vec![T::zero(); 8];
        probs[class.index()] = T::one();
        Self { probs }
    }

    pub fn probs(&self) -> &[T] {
        &self.probs
    }

    pub fn prob(&self, class: QuotientClass) -> &T {
        &self.probs[class.index()]
    }

    /// Largest absolute difference over classes.
    pub fn max_abs_diff(&self, other: &Self) -> T {
        let mut worst = T::zero();
        for (a, b) in self.probs.iter().zip(other.probs.iter()) {
            let d = (a.clone() - b.clone()).abs();
            if d > worst {
                worst = d;
            }
        }
        worst
    }
}

/// Fold a four-wire string distribution to classes: each class gets the
/// mass of both its members. Inverts [`embed_distribution`].
pub fn fold_distribution<T: Scalar>(
    dist: &ErrorDistribution<T>,
) -> Result<QuotientDistribution<T>, Error> {
    if dist.wires() != QUOTIENT_WIRES {
        return Err(Error::QuotientWidth { got: dist.wires() });
    }
    let probs = QuotientClass::all()
        .iter()
        .map(|class| {
            let (a, b) = class.members();
            dist.prob(&a).clone() + dist.prob(&b).clone()
        })
        .collect();
    QuotientDistribution::new(probs)
}

/// Embed a class distribution as a string distribution on minimum-weight
/// members: whole mass on the representative for weight-0/1 classes, an even
/// half/half split for weight-2 classes. Weight-3/4 strings get zero mass.
pub fn embed_distribution<T: Scalar>(qd: &QuotientDistribution<T>) -> ErrorDistribution<T> {
    let mut probs = vec![T::zero(); 1 << QUOTIENT_WIRES];
    let half = T::from_ratio(1, 2);
    for class in QuotientClass::all() {
        let mass = qd.prob(class).clone();
        if class.weight() <= 1 {
            let idx = class.rep().mask() as usize;
            probs[idx] = probs[idx].clone() + mass;
        } else {
            let (a, b) = class.members();
            let split = mass * half.clone();
            probs[a.mask() as usize] = probs[a.mask() as usize].clone() + split.clone();
            probs[b.mask() as usize] = probs[b.mask() as usize].clone() + split;
        }
    }
    ErrorDistribution::new(QUOTIENT_WIRES, probs).expect("mass-preserving reshuffle")
}

/// Pull a nonnegative mixture of product vertices back to quotient space:
/// each vertex `w·p` folds to a class distribution, keeping its coefficient.
/// Coefficients inside the float band are clamped first; genuinely negative
/// coefficients mean the input was not a convex mixture and are rejected.
pub fn lift_decomposition<T: Scalar>(
    decomp: &crate::mixing::MixtureDecomposition<T>,
) -> Result<Vec<(T, QuotientDistribution<T>)>, Error> {
    if decomp.wires() != QUOTIENT_WIRES {
        return Err(Error::QuotientWidth { got: decomp.wires() });
    }
    let clamped = decomp.clamped().ok_or(Error::BadMixtureWeights)?;
    let mut parts = Vec::new();
    for (mask, coeff) in clamped.coeffs().iter().enumerate() {
        if coeff.is_zero() {
            continue;
        }
        let w = ErrorPattern::new(mask as u32, QUOTIENT_WIRES).expect("4-wire mask");
        let vertex = vertex_distribution(&w, clamped.params())?;
        parts.push((coeff.clone(), fold_distribution(&vertex)?));
    }
    Ok(parts)
}

/// Mix class distributions with the given nonnegative weights.
pub fn mix_quotient<T: Scalar>(
    parts: &[(T, QuotientDistribution<T>)],
) -> Result<QuotientDistribution<T>, Error> {
    if parts.is_empty() {
        return Err(Error::BadMixtureWeights);
    }
    let mut probs = vec![T::zero(); 8];
    for (w, qd) in parts {
        if *w < T::zero() {
            return Err(Error::BadMixtureWeights);
        }
        for (acc, p) in probs.iter_mut().zip(qd.probs().iter()) {
            *acc = acc.clone() + w.clone() * p.clone();
        }
    }
    QuotientDistribution::new(probs)
}

/// Results of the randomized embedding verification.
#[derive(Clone, Debug, serde::Serialize)]
pub struct EmbeddingReport {
    pub samples: usize,
    pub linearity_failures: usize,
    pub injectivity_failures: usize,
    pub vertex_image_failures: usize,
    pub transport_checked: usize,
    pub transport_failures: usize,
    pub violations: Vec<String>,
}

impl EmbeddingReport {
    pub fn all_ok(&self) -> bool {
        self.linearity_failures == 0
            && self.injectivity_failures == 0
            && self.vertex_image_failures == 0
            && self.transport_failures == 0
    }
}

/// Randomized verification of the embedding properties the certificate
/// transfer relies on:
///
/// * linearity and injectivity of [`embed_distribution`] (disjoint supports
///   of class images, mixtures commute with embedding);
/// * every product vertex folds to the class distribution obtained by
///   directly pushing the product formula through the class members;
/// * transport: for random class distributions whose embedding lies in a
///   product hull, folding the mixture vertices reproduces the class
///   distribution with the same coefficients.
pub fn verify_embedding_properties(samples: usize, seed: u64) -> EmbeddingReport {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let mut report = EmbeddingReport {
        samples,
        linearity_failures: 0,
        injectivity_failures: 0,
        vertex_image_failures: 0,
        transport_checked: 0,
        transport_failures: 0,
        violations: Vec::new(),
    };

    // Injectivity: class point-mass images must have pairwise disjoint
    // support (hence no nontrivial kernel for the linear extension).
    let images: Vec<ErrorDistribution<f64>> = QuotientClass::all()
        .iter()
        .map(|c| embed_distribution(&QuotientDistribution::point_mass(*c)))
        .collect();
    for i in 0..8 {
        for j in (i + 1)..8 {
            let overlap = images[i]
                .probs()
                .iter()
                .zip(images[j].probs().iter())
                .any(|(a, b)| *a > 0.0 && *b > 0.0);
            if overlap {
                report.injectivity_failures += 1;
                report.violations.push(format!(
                    "images of classes {} and {} overlap",
                    QuotientClass::from_index(i).expect("i < 8"),
                    QuotientClass::from_index(j).expect("j < 8"),
                ));
            }
        }
    }

    for k in 0..samples {
        // Linearity on a random pair mixed with a random weight.
        let qd1 = random_quotient(&mut rng);
        let qd2 = random_quotient(&mut rng);
        let t: f64 = rng.gen_range(0.0..1.0);
        let mixed = mix_quotient(&[(t, qd1.clone()), (1.0 - t, qd2.clone())])
            .expect("weights are a convex pair");
        let lhs = embed_distribution(&mixed);
        let rhs = ErrorDistribution::mix(&[
            (t, embed_distribution(&qd1)),
            (1.0 - t, embed_distribution(&qd2)),
        ])
        .expect("convex mixture of embeddings");
        if lhs.total_variation(&rhs).expect("matching widths") > 1e-12 {
            report.linearity_failures += 1;
            report
                .violations
                .push(format!("linearity violated at sample {k}"));
        }

        // Vertex images: fold(w·p) must match the direct pushforward of the
        // product formula over each class's two members.
        let p: Vec<f64> = (0..4).map(|_| rng.gen_range(0.05..0.95)).collect();
        let params = ProductParams::new(p.clone()).expect("rates in range");
        let w_mask = rng.gen_range(0..16u32);
        let w = ErrorPattern::new(w_mask, 4).expect("4-wire mask");
        let vertex = vertex_distribution(&w, &params).expect("matching width");
        let folded = fold_distribution(&vertex).expect("4 wires");
        let direct = direct_vertex_fold(w_mask, &p);
        if folded.max_abs_diff(&direct) > 1e-12 {
            report.vertex_image_failures += 1;
            report
                .violations
                .push(format!("vertex image mismatch at sample {k} (w = {w})"));
        }

        // Transport on a guaranteed hull member.
        let (qd, q) = random_hull_member(&mut rng);
        let params = ProductParams::uniform(4, q).expect("rate in range");
        let embedded = embed_distribution(&qd);
        let verdict = check_hull_membership(&embedded, &params).expect("matching width");
        if !verdict.member {
            // The generator is designed to stay inside the hull; a miss is a
            // bug worth flagging rather than skipping.
            report.transport_failures += 1;
            report.violations.push(format!(
                "hull-member generator produced non-member at sample {k}"
            ));
            continue;
        }
        report.transport_checked += 1;
        let decomp = mixing_coefficients(&embedded, &params).expect("matching width");
        let parts = lift_decomposition(&decomp).expect("member decomposition");
        let rebuilt = mix_quotient(&parts).expect("nonempty convex mixture");
        if qd.max_abs_diff(&rebuilt) > 1e-10 {
            report.transport_failures += 1;
            report
                .violations
                .push(format!("transport mismatch at sample {k}"));
        }
    }
    report
}

/// Fold of the vertex `w·p` computed by brute force from the product
/// formula, independently of `ErrorDistribution` plumbing.
fn direct_vertex_fold(w_mask: u32, p: &[f64]) -> QuotientDistribution<f64> {
    let string_prob = |mask: u32| -> f64 {
        (0..4)
            .map(|i| {
                let rate = if w_mask >> i & 1 == 1 { p[i] } else { 0.0 };
                if mask >> i & 1 == 1 {
                    rate
                } else {
                    1.0 - rate
                }
            })
            .product()
    };
    let probs = QuotientClass::all()
        .iter()
        .map(|class| {
            let (a, b) = class.members();
            string_prob(a.mask()) + string_prob(b.mask())
        })
        .collect();
    QuotientDistribution::new(probs).expect("pushforward of a distribution")
}

fn random_quotient(rng: &mut ChaCha12Rng) -> QuotientDistribution<f64> {
    let raw: Vec<f64> = (0..8).map(|_| rng.gen_range(0.0f64..1.0)).collect();
    let total: f64 = raw.iter().sum();
    QuotientDistribution::new(raw.into_iter().map(|x| x / total).collect())
        .expect("normalized positive vector")
}

/// Random class distribution guaranteed to embed inside the uniform-rate
/// hull, plus the rate. Only the weight-0/1 inequalities can bind on
/// embedded inputs, and for wire `i` at uniform rate `q` the binding
/// condition is
///
/// ```text
/// single_mass(i) >= (1/q - 1) * (total pair mass) / 2,
/// ```
///
/// since each wire meets all three pair classes exactly once. Pair masses
/// are therefore drawn inside 90% of that budget, and magnitudes are kept
/// small enough that the no-error inequality stays positive too.
fn random_hull_member(rng: &mut ChaCha12Rng) -> (QuotientDistribution<f64>, f64) {
    let q: f64 = rng.gen_range(0.15..0.4);
    let singles: Vec<f64> = (0..4).map(|_| rng.gen_range(0.001..0.01)).collect();
    let min_single = singles.iter().cloned().fold(f64::INFINITY, f64::min);
    let budget = 0.9 * min_single * 2.0 / (1.0 / q - 1.0);
    let raw: Vec<f64> = (0..3).map(|_| rng.gen_range(0.0f64..1.0)).collect();
    let raw_total: f64 = raw.iter().sum();
    let scale = rng.gen_range(0.0..1.0) * budget / raw_total.max(1e-9);
    let pairs: Vec<f64> = raw.into_iter().map(|x| x * scale).collect();
    let occupied: f64 = singles.iter().sum::<f64>() + pairs.iter().sum::<f64>();
    let mut probs = vec![0.0; 8];
    probs[0] = 1.0 - occupied;
    probs[1..5].copy_from_slice(&singles);
    probs[5..8].copy_from_slice(&pairs);
    (
        QuotientDistribution::new(probs).expect("normalized by construction"),
        q,
    )
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
    fn canonical_reps_are_the_eight_listed_classes() {
        let names: Vec<String> = QuotientClass::all().iter().map(|c| c.x_string()).collect();
        assert_eq!(
            names,
            ["IIII", "XIII", "IXII", "IIXI", "IIIX", "XXII", "XIXI", "XIIX"]
        );
        for class in QuotientClass::all() {
            assert_eq!(QuotientClass::canonicalize(&class.rep()).unwrap(), class);
        }
    }

    #[test]
    fn canonicalize_matches_complement_examples() {
        // 0111 (wires 1,2,3) ~ 1000 (wire 0): class XIII.
        let c = QuotientClass::canonicalize(&pat("0111")).unwrap();
        assert_eq!(c.x_string(), "XIII");
        // The all-ones string is the identity class.
        assert_eq!(
            QuotientClass::canonicalize(&pat("1111")).unwrap().x_string(),
            "IIII"
        );
        // 1100 ~ 0011 canonicalizes to the wire-0 member.
        let c = QuotientClass::canonicalize(&pat("0011")).unwrap();
        assert_eq!(c.rep(), pat("1100"));
        assert_eq!(c.x_string(), "XXII");
        // Same for the other weight-2 classes.
        assert_eq!(
            QuotientClass::canonicalize(&pat("0101")).unwrap().rep(),
            pat("1010")
        );
        assert_eq!(
            QuotientClass::canonicalize(&pat("0110")).unwrap().rep(),
            pat("1001")
        );
    }

    #[test]
    fn x_string_roundtrip_and_aliases() {
        for class in QuotientClass::all() {
            assert_eq!(
                QuotientClass::parse_x_string(&class.x_string()).unwrap(),
                class
            );
        }
        // Either member's name parses to the same class.
        assert_eq!(
            QuotientClass::parse_x_string("IIXX").unwrap().x_string(),
            "XXII"
        );
        assert!(QuotientClass::parse_x_string("XYZ").is_err());
        assert!(QuotientClass::parse_x_string("XXXXX").is_err());
    }

    #[test]
    fn embed_point_masses() {
        // Whole mass goes to the representative for weight <= 1.
        let e = embed_distribution(&QuotientDistribution::<Rational>::point_mass(
            QuotientClass::parse_x_string("XIII").unwrap(),
        ));
        assert_eq!(*e.prob(&pat("1000")), rat(1, 1));
        // Weight-2 mass splits evenly between the two members.
        let e = embed_distribution(&QuotientDistribution::<Rational>::point_mass(
            QuotientClass::parse_x_string("XXII").unwrap(),
        ));
        assert_eq!(*e.prob(&pat("1100")), rat(1, 2));
        assert_eq!(*e.prob(&pat("0011")), rat(1, 2));
        for mask in 0..16u32 {
            let x = ErrorPattern::new(mask, 4).unwrap();
            if x.weight() >= 3 {
                assert!(e.prob(&x).is_zero());
            }
        }
    }

    #[test]
    fn fold_inverts_embed() {
        let qd = QuotientDistribution::new(vec![
            rat(8, 16),
            rat(1, 16),
            rat(1, 16),
            rat(1, 16),
            rat(1, 16),
            rat(2, 16),
            rat(1, 16),
            rat(1, 16),
        ])
        .unwrap();
        assert_eq!(fold_distribution(&embed_distribution(&qd)).unwrap(), qd);
    }

    #[test]
    fn embedded_inputs_have_structured_slack() {
        // On embedded inputs the weight-2 inequality values collapse to
        // up(x)/(p_i p_j) and the weight-3/4 ones vanish identically.
        let qd = QuotientDistribution::new(vec![
            rat(90, 100),
            rat(2, 100),
            rat(2, 100),
            rat(2, 100),
            rat(2, 100),
            rat(1, 150),
            rat(1, 150),
            rat(1, 150),
        ])
        .unwrap();
        let embedded = embed_distribution(&qd);
        let params = ProductParams::uniform(4, rat(3, 10)).unwrap();
        let decomp = mixing_coefficients(&embedded, &params).unwrap();
        for mask in 0..16u32 {
            let x = ErrorPattern::new(mask, 4).unwrap();
            let coeff = decomp.coeff(&x).clone();
            match x.weight() {
                2 => {
                    let expected = embedded.upset_probability(&x)
                        / (rat(3, 10) * rat(3, 10));
                    assert_eq!(coeff, expected, "at x = {x}");
                    assert!(coeff >= Rational::zero());
                }
                3 | 4 => assert!(coeff.is_zero(), "at x = {x}"),
                _ => {}
            }
        }
    }

    #[test]
    fn lift_rejects_signed_decompositions() {
        // The correlated counterexample has negative coefficients; lifting
        // it must fail rather than silently clamp real negativity.
        let mut probs = vec![Rational::zero(); 16];
        probs[pat("1010").mask() as usize] = rat(1, 200);
        probs[pat("0101").mask() as usize] = rat(1, 200);
        probs[0] = rat(99, 100);
        let dist = ErrorDistribution::new(4, probs).unwrap();
        let params = ProductParams::uniform(4, rat(1, 10)).unwrap();
        let decomp = mixing_coefficients(&dist, &params).unwrap();
        assert!(matches!(
            lift_decomposition(&decomp),
            Err(Error::BadMixtureWeights)
        ));
    }

    #[test]
    fn lift_of_vertex_delta_examples() {
        // Point mass on w = 0000 lifts to the no-error class.
        let params = ProductParams::uniform(4, rat(1, 8)).unwrap();
        let v = vertex_distribution(&pat("0000"), &params).unwrap();
        let decomp = mixing_coefficients(&v, &params).unwrap();
        let parts = lift_decomposition(&decomp).unwrap();
        assert_eq!(parts.len(), 1);
        assert_eq!(parts[0].0, rat(1, 1));
        assert_eq!(
            parts[0].1,
            QuotientDistribution::point_mass(QuotientClass::parse_x_string("IIII").unwrap())
        );
        // Vertex w = 1000 at uniform rate eta: class XIII with mass eta.
        let v = vertex_distribution(&pat("1000"), &params).unwrap();
        let decomp = mixing_coefficients(&v, &params).unwrap();
        let parts = lift_decomposition(&decomp).unwrap();
        assert_eq!(parts.len(), 1);
        let qd = &parts[0].1;
        assert_eq!(
            *qd.prob(QuotientClass::parse_x_string("XIII").unwrap()),
            rat(1, 8)
        );
        assert_eq!(
            *qd.prob(QuotientClass::parse_x_string("IIII").unwrap()),
            rat(7, 8)
        );
    }

    #[test]
    fn embedding_report_is_clean() {
        let report = verify_embedding_properties(100, 7);
        assert!(report.all_ok(), "violations: {:?}", report.violations);
        assert_eq!(report.transport_checked, 100);
    }
}

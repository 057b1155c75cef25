//! Exact execution of compiled gadgets on dense error-pattern tables.
//!
//! The state is the full joint distribution over error patterns on all
//! wires (2^n entries, n at most 24 but in practice single digits),
//! together with an acceptance probability accumulated across postselected
//! measurements. After each conditioning step the table is renormalized, so
//! the invariant "entries sum to one" holds throughout and the final output
//! is already a conditional distribution.

use super::compile::{compile, CompiledGadget, FrameOp};
use super::{CnotNoise, Gadget, PatternSet};
use crate::dist::ErrorDistribution;
use crate::error::Error;
use crate::scalar::Scalar;

/// Outcome of an exact gadget run: overall acceptance probability and the
/// error distribution on the output wires conditioned on acceptance.
#[derive(Clone, Debug, PartialEq)]
pub struct GadgetResult<T> {
    pub accept_probability: T,
    pub output: ErrorDistribution<T>,
}

/// XOR-shift: redistribute mass by flipping `mask` in every pattern.
fn shifted_entry<T: Scalar>(probs: &[T], z: usize, mask: usize) -> T {
    probs[z ^ mask].clone()
}

fn apply_cnot_xor<T: Scalar>(probs: &mut [T], control: usize, target: usize) {
    let cbit = 1usize << control;
    let tbit = 1usize << target;
    for z in 0..probs.len() {
        if z & cbit != 0 && z & tbit == 0 {
            probs.swap(z, z | tbit);
        }
    }
}

fn apply_noise<T: Scalar>(probs: &mut Vec<T>, control: usize, target: usize, noise: &CnotNoise<T>) {
    let cbit = 1usize << control;
    let tbit = 1usize << target;
    let p_none = noise.p_none();
    let next: Vec<T> = (0..probs.len())
        .map(|z| {
            p_none.clone() * probs[z].clone()
                + noise.p_xi().clone() * shifted_entry(probs, z, cbit)
                + noise.p_ix().clone() * shifted_entry(probs, z, tbit)
                + noise.p_xx().clone() * shifted_entry(probs, z, cbit | tbit)
        })
        .collect();
    *probs = next;
}

fn apply_inject<T: Scalar>(probs: &mut Vec<T>, wire: usize, rate: &T) {
    let bit = 1usize << wire;
    let keep = T::one() - rate.clone();
    let next: Vec<T> = (0..probs.len())
        .map(|z| keep.clone() * probs[z].clone() + rate.clone() * shifted_entry(probs, z, bit))
        .collect();
    *probs = next;
}

fn local_outcome(z: usize, wires: &[usize]) -> u32 {
    let mut m = 0u32;
    for (k, &w) in wires.iter().enumerate() {
        if z >> w & 1 == 1 {
            m |= 1 << k;
        }
    }
    m
}

/// Condition on the predicate; returns the accepted mass. The table is
/// renormalized in place.
fn apply_predicate<T: Scalar>(
    probs: &mut [T],
    wires: &[usize],
    accept: &PatternSet,
) -> Result<T, Error> {
    let mut kept = T::zero();
    for (z, p) in probs.iter().enumerate() {
        if accept.accepts(local_outcome(z, wires)) {
            kept = kept + p.clone();
        }
    }
    if kept <= T::band() {
        return Err(Error::AlwaysRejects);
    }
    for (z, p) in probs.iter_mut().enumerate() {
        if accept.accepts(local_outcome(z, wires)) {
            *p = p.clone() / kept.clone();
        } else {
            *p = T::zero();
        }
    }
    Ok(kept)
}

fn apply_transfer<T: Scalar>(probs: &mut [T], from: usize, to_mask: u32) {
    let fbit = 1usize << from;
    let mask = to_mask as usize;
    debug_assert_eq!(mask & fbit, 0, "transfer target includes its source");
    let pivot = 1usize << to_mask.trailing_zeros();
    for z in 0..probs.len() {
        if z & fbit != 0 && z & pivot == 0 {
            probs.swap(z, z ^ mask);
        }
    }
}

fn apply_marginalize<T: Scalar>(probs: &mut [T], wire: usize) {
    let bit = 1usize << wire;
    for z in 0..probs.len() {
        if z & bit == 0 {
            probs[z] = probs[z].clone() + probs[z | bit].clone();
            probs[z | bit] = T::zero();
        }
    }
}

/// Run a compiled gadget from the error-free state.
pub(crate) fn run_compiled<T: Scalar>(compiled: &CompiledGadget<T>) -> Result<GadgetResult<T>, Error> {
    if compiled.output_wires.is_empty() {
        return Err(Error::bad_gadget("gadget declares no output wires"));
    }
    let mut probs = vec![T::zero(); 1 << compiled.n_wires];
    probs[0] = T::one();
    let mut accept = T::one();
    let half = T::from_ratio(1, 2);
    for op in &compiled.ops {
        match op {
            FrameOp::CnotXor { control, target } => apply_cnot_xor(&mut probs, *control, *target),
            FrameOp::Noise {
                control,
                target,
                noise,
            } => apply_noise(&mut probs, *control, *target, noise),
            FrameOp::Inject { wire, rate } => apply_inject(&mut probs, *wire, rate),
            FrameOp::Predicate { wires, accept: set } => {
                let kept = apply_predicate(&mut probs, wires, set)?;
                accept = accept * kept;
            }
            FrameOp::Transfer { from, to_mask } => apply_transfer(&mut probs, *from, *to_mask),
            FrameOp::HalveAccept => accept = accept * half.clone(),
            FrameOp::Marginalize { wire } => apply_marginalize(&mut probs, *wire),
        }
    }
    // Gather onto the output wires; everything else is marginalized (dead
    // wires already hold bit zero).
    let k = compiled.output_wires.len();
    let mut out = vec![T::zero(); 1 << k];
    for (z, p) in probs.iter().enumerate() {
        if p.is_zero() {
            continue;
        }
        let idx = local_outcome(z, &compiled.output_wires) as usize;
        out[idx] = out[idx].clone() + p.clone();
    }
    Ok(GadgetResult {
        accept_probability: accept,
        output: ErrorDistribution::from_normalized(k, out),
    })
}

/// Fold the gadget's locations in order over an initially error-free
/// distribution, returning the acceptance probability and the conditional
/// output error distribution.
pub fn run_exact<T: Scalar>(gadget: &Gadget<T>) -> Result<GadgetResult<T>, Error> {
    run_compiled(&compile(gadget)?)
}

/// Standalone form of the noisy-CNOT update: ideal propagation (control's
/// error copies onto the target), then the four-outcome noise channel.
pub fn apply_noisy_cnot<T: Scalar>(
    dist: &ErrorDistribution<T>,
    control: usize,
    target: usize,
    noise: &CnotNoise<T>,
) -> Result<ErrorDistribution<T>, Error> {
    let n = dist.wires();
    if control >= n || target >= n || control == target {
        return Err(Error::bad_gadget("invalid CNOT wire pair"));
    }
    let mut probs = dist.probs().to_vec();
    apply_cnot_xor(&mut probs, control, target);
    apply_noise(&mut probs, control, target, noise);
    Ok(ErrorDistribution::from_normalized(n, probs))
}

/// Standalone form of the injection update: independent X at `rate`.
pub fn apply_inject_x<T: Scalar>(
    dist: &ErrorDistribution<T>,
    wire: usize,
    rate: &T,
) -> Result<ErrorDistribution<T>, Error> {
    let n = dist.wires();
    if wire >= n {
        return Err(Error::bad_gadget("injection wire out of range"));
    }
    if *rate < T::zero() || *rate > T::one() {
        return Err(Error::ProbabilityOutOfRange {
            what: "injection rate".to_string(),
        });
    }
    let mut probs = dist.probs().to_vec();
    apply_inject(&mut probs, wire, rate);
    Ok(ErrorDistribution::from_normalized(n, probs))
}

/// Standalone postselected readout: accept mass, condition, and remove the
/// measured wires (remaining wires keep their relative order).
pub fn apply_measure_postselect<T: Scalar>(
    dist: &ErrorDistribution<T>,
    wires: &[usize],
    accept: &PatternSet,
) -> Result<(T, ErrorDistribution<T>), Error> {
    let n = dist.wires();
    let mut seen = vec![false; n];
    for &w in wires {
        if w >= n {
            return Err(Error::bad_gadget("measured wire out of range"));
        }
        if seen[w] {
            return Err(Error::bad_gadget("wire measured twice"));
        }
        seen[w] = true;
    }
    if accept.wires() != wires.len() {
        return Err(Error::bad_gadget("predicate width mismatch"));
    }
    if wires.len() == n {
        return Err(Error::bad_gadget(
            "measuring every wire leaves no output register",
        ));
    }
    let mut probs = dist.probs().to_vec();
    let kept = apply_predicate(&mut probs, wires, accept)?;
    let survivors: Vec<usize> = (0..n).filter(|&w| !seen[w]).collect();
    let mut out = vec![T::zero(); 1 << survivors.len()];
    for (z, p) in probs.iter().enumerate() {
        if p.is_zero() {
            continue;
        }
        let idx = local_outcome(z, &survivors) as usize;
        out[idx] = out[idx].clone() + p.clone();
    }
    Ok((kept, ErrorDistribution::from_normalized(survivors.len(), out)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gadget::{
        build_bell_prep, build_plus_prep, build_teleported_cnot, bell_prep_quotient,
        plus_prep_quotient_rate, BellPrepConfig, InjectionPlacement,
    };
    use crate::pattern::ErrorPattern;
    use crate::quotient::QuotientClass;
    use crate::scalar::Rational;
    use num_traits::{One, Zero};

    fn pat(s: &str) -> ErrorPattern {
        ErrorPattern::parse(s).unwrap()
    }

    fn rat(n: i64, d: i64) -> Rational {
        Rational::from_ratio(n, d)
    }

    #[test]
    fn ideal_cnot_copies_control_errors_only() {
        // X on the control spreads to both wires; X on the target stays put.
        let from_control = ErrorDistribution::<Rational>::point_mass(&pat("10"));
        let out = apply_noisy_cnot(&from_control, 0, 1, &CnotNoise::zero()).unwrap();
        assert_eq!(*out.prob(&pat("11")), Rational::one());
        let from_target = ErrorDistribution::<Rational>::point_mass(&pat("01"));
        let out = apply_noisy_cnot(&from_target, 0, 1, &CnotNoise::zero()).unwrap();
        assert_eq!(*out.prob(&pat("01")), Rational::one());
    }

    #[test]
    fn symmetric_noise_on_clean_input() {
        let clean = ErrorDistribution::<Rational>::point_mass(&pat("00"));
        let noise = CnotNoise::symmetric(rat(3, 100)).unwrap();
        let out = apply_noisy_cnot(&clean, 0, 1, &noise).unwrap();
        assert_eq!(*out.prob(&pat("00")), rat(97, 100));
        assert_eq!(*out.prob(&pat("10")), rat(1, 100));
        assert_eq!(*out.prob(&pat("01")), rat(1, 100));
        assert_eq!(*out.prob(&pat("11")), rat(1, 100));
    }

    #[test]
    fn noiseless_cnot_is_an_involution() {
        let dist = ErrorDistribution::new(
            2,
            vec![rat(2, 5), rat(1, 5), rat(1, 5), rat(1, 5)],
        )
        .unwrap();
        let once = apply_noisy_cnot(&dist, 0, 1, &CnotNoise::zero()).unwrap();
        let twice = apply_noisy_cnot(&once, 0, 1, &CnotNoise::zero()).unwrap();
        assert_eq!(twice, dist);
    }

    #[test]
    fn injection_examples() {
        let clean = ErrorDistribution::<Rational>::point_mass(&pat("00"));
        assert_eq!(apply_inject_x(&clean, 0, &Rational::zero()).unwrap(), clean);
        let flipped = apply_inject_x(&clean, 1, &Rational::one()).unwrap();
        assert_eq!(*flipped.prob(&pat("01")), Rational::one());
        let eta = rat(1, 50);
        let noisy = apply_inject_x(&clean, 0, &eta).unwrap();
        assert_eq!(*noisy.prob(&pat("10")), eta);
    }

    #[test]
    fn measurement_examples() {
        // Accept-all on a clean input: probability one, clean output.
        let clean = ErrorDistribution::<Rational>::point_mass(&pat("000"));
        let (p, out) =
            apply_measure_postselect(&clean, &[0, 1], &PatternSet::accept_all(2).unwrap())
                .unwrap();
        assert_eq!(p, Rational::one());
        assert_eq!(*out.prob(&ErrorPattern::parse("0").unwrap()), Rational::one());

        // A target-only error on the measured pair is caught: outcome 01.
        let eps = rat(1, 25);
        let mut probs = vec![Rational::zero(); 8];
        probs[pat("010").mask() as usize] = eps.clone();
        probs[0] = Rational::one() - eps.clone();
        let dist = ErrorDistribution::new(3, probs).unwrap();
        let (p, out) =
            apply_measure_postselect(&dist, &[0, 1], &PatternSet::codespace_pair()).unwrap();
        assert_eq!(p, Rational::one() - eps.clone());
        assert_eq!(*out.prob(&ErrorPattern::parse("0").unwrap()), Rational::one());

        // A double flip slips through, and the linked error on the third
        // wire survives with it.
        let mut probs = vec![Rational::zero(); 8];
        probs[pat("111").mask() as usize] = eps.clone();
        probs[0] = Rational::one() - eps.clone();
        let dist = ErrorDistribution::new(3, probs).unwrap();
        let (p, out) =
            apply_measure_postselect(&dist, &[0, 1], &PatternSet::codespace_pair()).unwrap();
        assert_eq!(p, Rational::one());
        assert_eq!(*out.prob(&ErrorPattern::parse("1").unwrap()), eps);
    }

    #[test]
    fn rejecting_everything_is_an_error() {
        let clean = ErrorDistribution::<Rational>::point_mass(&pat("00"));
        let only_11 = PatternSet::new(1, vec![1]).unwrap();
        assert!(matches!(
            apply_measure_postselect(&clean, &[0], &only_11),
            Err(Error::AlwaysRejects)
        ));
    }

    #[test]
    fn noiseless_plus_prep_is_clean() {
        let result = run_exact(&build_plus_prep(CnotNoise::<Rational>::zero())).unwrap();
        assert_eq!(result.accept_probability, Rational::one());
        assert_eq!(*result.output.prob(&pat("00")), Rational::one());
        assert!(plus_prep_quotient_rate(&result.output).is_zero());
    }

    #[test]
    fn plus_prep_quotient_rate_is_two_thirds_of_eta() {
        // XI and IX survive the fold, XX folds back to no error.
        let eta = rat(3, 100);
        let result = run_exact(&build_plus_prep(CnotNoise::symmetric(eta.clone()).unwrap()))
            .unwrap();
        assert_eq!(
            plus_prep_quotient_rate(&result.output),
            rat(2, 3) * eta.clone()
        );
        assert!(plus_prep_quotient_rate(&result.output) <= eta);
    }

    #[test]
    fn noiseless_bell_prep_accepts_cleanly() {
        let config = BellPrepConfig::<Rational>::symmetric(Rational::zero(), false).unwrap();
        let result = run_exact(&build_bell_prep(&config)).unwrap();
        assert_eq!(result.accept_probability, Rational::one());
        assert_eq!(*result.output.prob(&pat("0000")), Rational::one());
    }

    #[test]
    fn noiseless_teleported_cnot_accepts_at_one_sixteenth() {
        let result = run_exact(&build_teleported_cnot(CnotNoise::<Rational>::zero())).unwrap();
        assert_eq!(result.accept_probability, rat(1, 16));
        assert_eq!(*result.output.prob(&pat("00")), Rational::one());
    }

    #[test]
    fn teleported_cnot_accepts_at_one_sixteenth_under_any_noise() {
        // The postselected outcomes pin random branches; errors shift which
        // branch survives rather than being filtered, so acceptance never
        // moves.
        let noise = CnotNoise::new(rat(1, 7), rat(1, 9), rat(1, 11)).unwrap();
        let result = run_exact(&build_teleported_cnot(noise)).unwrap();
        assert_eq!(result.accept_probability, rat(1, 16));
    }

    #[test]
    fn correlated_failures_evade_the_check_together() {
        // Only the first coupling fails (always as a double flip) and only
        // the first check fails (always on its target): each alone is
        // caught, together they pass, leaving the correlated double error.
        let eps_a = rat(1, 50);
        let eps_c = rat(1, 40);
        let config = BellPrepConfig {
            noise_a: CnotNoise::new(Rational::zero(), Rational::zero(), eps_a.clone()).unwrap(),
            noise_b: CnotNoise::zero(),
            noise_c: CnotNoise::new(Rational::zero(), eps_c.clone(), Rational::zero()).unwrap(),
            noise_d: CnotNoise::zero(),
            injection_rate: None,
            placement: InjectionPlacement::AfterCheck,
        };
        let result = run_exact(&build_bell_prep(&config)).unwrap();
        let both = eps_a.clone() * eps_c.clone();
        let neither = (Rational::one() - eps_a) * (Rational::one() - eps_c);
        assert_eq!(result.accept_probability, neither.clone() + both.clone());
        let qd = bell_prep_quotient(&result.output).unwrap();
        let accept = result.accept_probability.clone();
        assert_eq!(
            *qd.prob(QuotientClass::parse_x_string("XIXI").unwrap()),
            both / accept.clone()
        );
        for name in ["XIII", "IXII", "IIXI", "IIIX"] {
            assert!(
                qd.prob(QuotientClass::parse_x_string(name).unwrap()).is_zero(),
                "single-flip class {name} should be empty"
            );
        }
    }

    #[test]
    fn injections_alone_give_independent_singles() {
        // All couplings noiseless, injections at rate eta: each single-flip
        // class carries exactly eta(1-eta)^3.
        let eta = rat(1, 30);
        let mut config = BellPrepConfig::<Rational>::symmetric(Rational::zero(), false).unwrap();
        config.injection_rate = Some(eta.clone());
        let result = run_exact(&build_bell_prep(&config)).unwrap();
        assert_eq!(result.accept_probability, Rational::one());
        let qd = bell_prep_quotient(&result.output).unwrap();
        let single = eta.clone()
            * (Rational::one() - eta.clone())
            * (Rational::one() - eta.clone())
            * (Rational::one() - eta.clone());
        for name in ["XIII", "IXII", "IIXI", "IIIX"] {
            assert_eq!(
                *qd.prob(QuotientClass::parse_x_string(name).unwrap()),
                single,
                "class {name}"
            );
        }
    }

    #[test]
    fn bell_prep_accept_probability_degrades_monotonically() {
        let mut previous = f64::INFINITY;
        for step in 0..=50 {
            let eta = step as f64 * 0.001;
            let config = BellPrepConfig::<f64>::symmetric(eta, false).unwrap();
            let result = run_exact(&build_bell_prep(&config)).unwrap();
            assert!(
                result.accept_probability <= previous + 1e-15,
                "accept rose at eta = {eta}"
            );
            previous = result.accept_probability;
        }
    }

    #[test]
    fn injection_placement_does_not_change_acceptance() {
        // Injections on the data wires never reach the check ancillas after
        // the couplings, and before them they cancel in pairs on the check
        // parity, so acceptance is placement-independent.
        let mut accepts = Vec::new();
        for placement in [
            InjectionPlacement::BeforeCoupling,
            InjectionPlacement::BeforeCheck,
            InjectionPlacement::AfterCheck,
        ] {
            let mut config = BellPrepConfig::<Rational>::symmetric(rat(1, 25), true).unwrap();
            config.placement = placement;
            let result = run_exact(&build_bell_prep(&config)).unwrap();
            accepts.push(result.accept_probability);
        }
        assert_eq!(accepts[1], accepts[2]);
        assert_eq!(accepts[0].clone(), accepts[2].clone());
    }
}

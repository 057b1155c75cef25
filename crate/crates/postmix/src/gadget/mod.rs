//! Abstract gadget simulation: exact propagation of bit-flip error
//! distributions through circuits of noisy CNOTs, deliberate error
//! injections and postselected measurements.
//!
//! A [`Gadget`] is an ordered list of [`Location`]s over abstract wires.
//! One wire stands for one code block at the current recursion level; the
//! qubit-level picture lives only in [`crate::oracle::statevec`]. The state
//! tracked is the joint distribution of X-error patterns relative to the
//! ideal computation, folded location by location by [`exact::run_exact`]
//! (dense tables) and sampled shot by shot by
//! [`sample::sample_pauli_frame`] (Monte Carlo) — both driven by the same
//! compiled program, so their semantics cannot drift apart.
//!
//! Measurements come in three flavors:
//!
//! * [`Location::MeasurePostselect`] — a transversal readout whose outcome
//!   reveals the error pattern on the measured wires up to a known value;
//!   acceptance is a predicate on outcomes (e.g. the codespace check
//!   `{00, 11}`).
//! * [`Location::TeleportMeasureZ`] — the `<0|` half of a teleportation:
//!   postselecting the outcome pins down the random preparation branch
//!   instead of rejecting errors, so an error on the measured wire is
//!   *transferred* onto every wire entangled with that branch, and
//!   acceptance picks up a factor 1/2.
//! * [`Location::MeasureXPlus`] — a `<+|` measurement: X errors commute
//!   with it, so it only contributes its 1/2 acceptance factor.
//!
//! The compiler ([`compile`]) tracks the ideal value carried by each wire
//! as an XOR of preparation branch symbols and input symbols, which is what
//! lets it verify that each measurement's predicate is well defined and
//! compute which wires a teleport measurement transfers its error to.

pub mod compile;
pub mod exact;
pub mod sample;

pub use compile::{compile, CompiledGadget};
pub use exact::{
    apply_inject_x, apply_measure_postselect, apply_noisy_cnot, run_exact, GadgetResult,
};
pub use sample::{sample_pauli_frame, SampleReport};

use crate::error::Error;
use crate::quotient::{fold_distribution, QuotientDistribution};
use crate::scalar::Scalar;

/// Error split of one noisy CNOT: probabilities of an X appearing on the
/// control only, the target only, or both, after the ideal gate. The
/// remaining mass is the no-error outcome.
#[derive(Clone, Debug, PartialEq)]
pub struct CnotNoise<T> {
    p_xi: T,
    p_ix: T,
    p_xx: T,
}

impl<T: Scalar> CnotNoise<T> {
    /// Validate: each component nonnegative, total at most one.
    pub fn new(p_xi: T, p_ix: T, p_xx: T) -> Result<Self, Error> {
        for (name, p) in [("XI", &p_xi), ("IX", &p_ix), ("XX", &p_xx)] {
            if *p < T::zero() || *p > T::one() {
                return Err(Error::ProbabilityOutOfRange {
                    what: format!("CNOT {name} component"),
                });
            }
        }
        let total = p_xi.clone() + p_ix.clone() + p_xx.clone();
        if total > T::one() {
            return Err(Error::ProbabilityOutOfRange {
                what: "CNOT noise total".to_string(),
            });
        }
        Ok(Self { p_xi, p_ix, p_xx })
    }

    /// The symmetric split: each of XI, IX, XX at `rate / 3`.
    pub fn symmetric(rate: T) -> Result<Self, Error> {
        let third = rate / T::from_ratio(3, 1);
        Self::new(third.clone(), third.clone(), third)
    }

    /// Noiseless gate.
    pub fn zero() -> Self {
        Self {
            p_xi: T::zero(),
            p_ix: T::zero(),
            p_xx: T::zero(),
        }
    }

    /// X on the control only (first symbol = control).
    pub fn p_xi(&self) -> &T {
        &self.p_xi
    }

    /// X on the target only.
    pub fn p_ix(&self) -> &T {
        &self.p_ix
    }

    /// X on both.
    pub fn p_xx(&self) -> &T {
        &self.p_xx
    }

    /// Probability of the no-error outcome.
    pub fn p_none(&self) -> T {
        T::one() - self.p_xi.clone() - self.p_ix.clone() - self.p_xx.clone()
    }

    pub fn is_zero(&self) -> bool {
        self.p_xi.is_zero() && self.p_ix.is_zero() && self.p_xx.is_zero()
    }
}

/// Acceptance predicate of a postselected transversal measurement: the set
/// of accepted outcome patterns over the measured wires, as local masks
/// (bit `k` = k-th measured wire).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PatternSet {
    wires: usize,
    masks: Vec<u32>,
}

impl PatternSet {
    pub fn new(wires: usize, mut masks: Vec<u32>) -> Result<Self, Error> {
        if wires == 0 || wires > 24 {
            return Err(Error::BadWireCount { n: wires });
        }
        masks.sort_unstable();
        masks.dedup();
        if masks.is_empty() {
            return Err(Error::bad_gadget("acceptance predicate accepts nothing"));
        }
        if let Some(&m) = masks.iter().find(|&&m| m >= 1 << wires) {
            return Err(Error::PatternOutOfRange { mask: m, n: wires });
        }
        Ok(Self { wires, masks })
    }

    /// The two-wire codespace check: accept outcomes 00 and 11.
    pub fn codespace_pair() -> Self {
        Self {
            wires: 2,
            masks: vec![0b00, 0b11],
        }
    }

    /// Accept every outcome (a plain destructive readout).
    pub fn accept_all(wires: usize) -> Result<Self, Error> {
        Ok(Self {
            wires,
            masks: (0..1u32 << wires).collect(),
        })
    }

    pub fn wires(&self) -> usize {
        self.wires
    }

    pub fn masks(&self) -> &[u32] {
        &self.masks
    }

    pub fn accepts(&self, mask: u32) -> bool {
        self.masks.binary_search(&mask).is_ok()
    }

    /// Whether XOR-ing every outcome by `flip` maps the accepted set onto
    /// itself. This is the condition for the predicate to be insensitive to
    /// a random value shared by the measured wires.
    pub fn invariant_under(&self, flip: u32) -> bool {
        self.masks.iter().all(|&m| self.accepts(m ^ flip))
    }

    /// The predicate shifted by a constant outcome offset: accepted error
    /// masks when the ideal outcome would be `offset`.
    pub fn shifted(&self, offset: u32) -> Self {
        let mut masks: Vec<u32> = self.masks.iter().map(|&m| m ^ offset).collect();
        masks.sort_unstable();
        Self {
            wires: self.wires,
            masks,
        }
    }
}

/// One circuit location. Wires are indices below the gadget's width.
#[derive(Clone, Debug, PartialEq)]
pub enum Location<T> {
    /// Bring a wire up in the fixed value 0, error-free.
    PrepZero { wire: usize },
    /// Bring a wire up in a uniformly random branch value (the abstract
    /// stand-in for a |+> preparation), error-free.
    PrepPlus { wire: usize },
    /// Declare a gadget input: carries an unknown external value. Errors on
    /// inputs are modeled by an explicit injection after this location.
    Input { wire: usize },
    /// Ideal CNOT followed by the four-outcome error channel.
    NoisyCnot {
        control: usize,
        target: usize,
        noise: CnotNoise<T>,
    },
    /// Deliberate X injection: flip the wire with the given probability.
    InjectX { wire: usize, rate: T },
    /// Transversal readout of several wires, postselected on the predicate;
    /// the measured wires leave the register.
    MeasurePostselect { wires: Vec<usize>, accept: PatternSet },
    /// `<0|` teleportation measurement: accept factor 1/2, transfer the
    /// wire's error to everything sharing its preparation branch, remove
    /// the wire.
    TeleportMeasureZ { wire: usize },
    /// `<+|` measurement: accept factor 1/2, remove the wire.
    MeasureXPlus { wire: usize },
    /// Drop wires without measuring them (marginalize).
    Discard { wires: Vec<usize> },
}

/// An ordered gadget over `n_wires` abstract wires.
#[derive(Clone, Debug, PartialEq)]
pub struct Gadget<T> {
    n_wires: usize,
    locations: Vec<Location<T>>,
    output_wires: Vec<usize>,
}

impl<T: Scalar> Gadget<T> {
    /// Validate structurally (wire ranges, preparation before use, outputs
    /// alive at the end) by compiling once.
    pub fn new(
        n_wires: usize,
        locations: Vec<Location<T>>,
        output_wires: Vec<usize>,
    ) -> Result<Self, Error> {
        let g = Self {
            n_wires,
            locations,
            output_wires,
        };
        compile::compile(&g)?;
        Ok(g)
    }

    pub fn n_wires(&self) -> usize {
        self.n_wires
    }

    pub fn locations(&self) -> &[Location<T>] {
        &self.locations
    }

    pub fn output_wires(&self) -> &[usize] {
        &self.output_wires
    }
}

/// Wire labels of [`build_plus_prep`]: the plus-role wire and the zero-role
/// wire of the produced pair.
pub const PLUS_PREP_TOP: usize = 0;
pub const PLUS_PREP_BOTTOM: usize = 1;

/// Pair-preparation gadget: a noisy CNOT from a fresh random-branch wire
/// into a fresh zero wire. Outputs both wires; downstream analysis folds
/// them modulo the pair's stabilizer (flipping both wires is trivial on the
/// ideal pair state).
pub fn build_plus_prep<T: Scalar>(noise: CnotNoise<T>) -> Gadget<T> {
    Gadget::new(
        2,
        vec![
            Location::PrepPlus {
                wire: PLUS_PREP_TOP,
            },
            Location::PrepZero {
                wire: PLUS_PREP_BOTTOM,
            },
            Location::NoisyCnot {
                control: PLUS_PREP_TOP,
                target: PLUS_PREP_BOTTOM,
                noise,
            },
        ],
        vec![PLUS_PREP_TOP, PLUS_PREP_BOTTOM],
    )
    .expect("fixed wiring is well formed")
}

/// Probability that the pair gadget output carries an error that survives
/// folding modulo the double flip, i.e. odd parity across the two wires.
pub fn plus_prep_quotient_rate<T: Scalar>(output: &crate::dist::ErrorDistribution<T>) -> T {
    let mut rate = T::zero();
    for (mask, p) in output.probs().iter().enumerate() {
        if (mask.count_ones() & 1) == 1 {
            rate = rate + p.clone();
        }
    }
    rate
}

/// Where the deliberate injections sit inside the Bell-preparation gadget.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InjectionPlacement {
    /// Before the pair-coupling CNOTs.
    BeforeCoupling,
    /// Between the coupling CNOTs and the check CNOTs.
    BeforeCheck,
    /// After the check CNOTs, right before output (default).
    AfterCheck,
}

/// Configuration of [`build_bell_prep`]: per-location noise, optional
/// injections and their placement.
#[derive(Clone, Debug)]
pub struct BellPrepConfig<T> {
    /// Coupling CNOT from the first pair wire into the third.
    pub noise_a: CnotNoise<T>,
    /// Coupling CNOT from the second pair wire into the fourth.
    pub noise_b: CnotNoise<T>,
    /// Check CNOT from the third wire into the first check ancilla.
    pub noise_c: CnotNoise<T>,
    /// Check CNOT from the fourth wire into the second check ancilla.
    pub noise_d: CnotNoise<T>,
    /// When set, each data wire gets an independent X injection at this
    /// rate.
    pub injection_rate: Option<T>,
    pub placement: InjectionPlacement,
}

impl<T: Scalar> BellPrepConfig<T> {
    /// Same symmetric split at all four noisy locations.
    pub fn symmetric(rate: T, injections_on: bool) -> Result<Self, Error> {
        let noise = CnotNoise::symmetric(rate.clone())?;
        Ok(Self {
            noise_a: noise.clone(),
            noise_b: noise.clone(),
            noise_c: noise.clone(),
            noise_d: noise,
            injection_rate: injections_on.then_some(rate),
            placement: InjectionPlacement::AfterCheck,
        })
    }
}

/// Data wires of the Bell-preparation gadget, in output order.
pub const BELL_DATA: [usize; 4] = [0, 1, 2, 3];
/// Check ancillas of the Bell-preparation gadget.
pub const BELL_CHECKS: [usize; 2] = [4, 5];

/// Bell-pair preparation with error detection. Four data wires hold the
/// encoded pair; the first two come up as a noiselessly linked random
/// branch (the incoming encoded plus state), coupling CNOTs extend the
/// branch onto wires three and four, and check CNOTs copy those wires onto
/// two fresh ancillas that are read out transversally, accepting only the
/// codespace outcomes 00 and 11. Optional injections add independent X
/// errors on each data wire.
pub fn build_bell_prep<T: Scalar>(config: &BellPrepConfig<T>) -> Gadget<T> {
    let [d1, d2, d3, d4] = BELL_DATA;
    let [c1, c2] = BELL_CHECKS;
    let mut locations = vec![
        Location::PrepPlus { wire: d1 },
        Location::PrepZero { wire: d2 },
        Location::NoisyCnot {
            control: d1,
            target: d2,
            noise: CnotNoise::zero(),
        },
        Location::PrepZero { wire: d3 },
        Location::PrepZero { wire: d4 },
    ];
    let injections = |locations: &mut Vec<Location<T>>| {
        if let Some(rate) = &config.injection_rate {
            for wire in BELL_DATA {
                locations.push(Location::InjectX {
                    wire,
                    rate: rate.clone(),
                });
            }
        }
    };
    if config.placement == InjectionPlacement::BeforeCoupling {
        injections(&mut locations);
    }
    locations.push(Location::NoisyCnot {
        control: d1,
        target: d3,
        noise: config.noise_a.clone(),
    });
    locations.push(Location::NoisyCnot {
        control: d2,
        target: d4,
        noise: config.noise_b.clone(),
    });
    if config.placement == InjectionPlacement::BeforeCheck {
        injections(&mut locations);
    }
    locations.push(Location::PrepZero { wire: c1 });
    locations.push(Location::PrepZero { wire: c2 });
    locations.push(Location::NoisyCnot {
        control: d3,
        target: c1,
        noise: config.noise_c.clone(),
    });
    locations.push(Location::NoisyCnot {
        control: d4,
        target: c2,
        noise: config.noise_d.clone(),
    });
    if config.placement == InjectionPlacement::AfterCheck {
        injections(&mut locations);
    }
    locations.push(Location::MeasurePostselect {
        wires: vec![c1, c2],
        accept: PatternSet::codespace_pair(),
    });
    Gadget::new(6, locations, BELL_DATA.to_vec()).expect("fixed wiring is well formed")
}

/// Fold the four-wire Bell-preparation output modulo the all-wires flip.
pub fn bell_prep_quotient<T: Scalar>(
    output: &crate::dist::ErrorDistribution<T>,
) -> Result<QuotientDistribution<T>, Error> {
    fold_distribution(output)
}

/// Wire labels of [`build_teleported_cnot`].
pub const TC_WIRE_CONTROL_IN: usize = 0;
pub const TC_WIRE_TARGET_IN: usize = 1;
pub const TC_WIRE_M1: usize = 2;
pub const TC_WIRE_OUT_CONTROL: usize = 3;
pub const TC_WIRE_M2: usize = 4;
pub const TC_WIRE_OUT_TARGET: usize = 5;

/// Teleported CNOT: two freshly prepared pairs linked by a CNOT, inputs
/// coupled in, pair halves measured out with `<0|` teleport measurements
/// and consumed inputs with `<+|`. All five CNOTs carry the same noise.
/// Accepts with probability exactly 1/16 at zero noise (and at any noise —
/// the postselected outcomes pin random branches rather than detect
/// errors); outputs are the two fresh wires, which inherit transferred
/// errors per the teleportation identities.
pub fn build_teleported_cnot<T: Scalar>(noise: CnotNoise<T>) -> Gadget<T> {
    build_teleported_cnot_with_input_errors(noise, None)
}

/// Same gadget with optional deterministic-or-random X injections on the
/// two input wires (modeling errored inputs), inserted right after the
/// input declarations.
pub fn build_teleported_cnot_with_input_errors<T: Scalar>(
    noise: CnotNoise<T>,
    input_error_rates: Option<(T, T)>,
) -> Gadget<T> {
    let mut locations = vec![
        Location::Input {
            wire: TC_WIRE_CONTROL_IN,
        },
        Location::Input {
            wire: TC_WIRE_TARGET_IN,
        },
    ];
    if let Some((ra, rb)) = input_error_rates {
        locations.push(Location::InjectX {
            wire: TC_WIRE_CONTROL_IN,
            rate: ra,
        });
        locations.push(Location::InjectX {
            wire: TC_WIRE_TARGET_IN,
            rate: rb,
        });
    }
    locations.extend([
        Location::PrepPlus { wire: TC_WIRE_M1 },
        Location::PrepZero {
            wire: TC_WIRE_OUT_CONTROL,
        },
        Location::NoisyCnot {
            control: TC_WIRE_M1,
            target: TC_WIRE_OUT_CONTROL,
            noise: noise.clone(),
        },
        Location::PrepPlus { wire: TC_WIRE_M2 },
        Location::PrepZero {
            wire: TC_WIRE_OUT_TARGET,
        },
        Location::NoisyCnot {
            control: TC_WIRE_M2,
            target: TC_WIRE_OUT_TARGET,
            noise: noise.clone(),
        },
        Location::NoisyCnot {
            control: TC_WIRE_M1,
            target: TC_WIRE_M2,
            noise: noise.clone(),
        },
        Location::NoisyCnot {
            control: TC_WIRE_CONTROL_IN,
            target: TC_WIRE_M1,
            noise: noise.clone(),
        },
        Location::NoisyCnot {
            control: TC_WIRE_TARGET_IN,
            target: TC_WIRE_M2,
            noise,
        },
        Location::TeleportMeasureZ { wire: TC_WIRE_M1 },
        Location::TeleportMeasureZ { wire: TC_WIRE_M2 },
        Location::MeasureXPlus {
            wire: TC_WIRE_CONTROL_IN,
        },
        Location::MeasureXPlus {
            wire: TC_WIRE_TARGET_IN,
        },
    ]);
    Gadget::new(
        6,
        locations,
        vec![TC_WIRE_OUT_CONTROL, TC_WIRE_OUT_TARGET],
    )
    .expect("fixed wiring is well formed")
}

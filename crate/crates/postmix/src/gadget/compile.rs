//! Gadget validation and lowering to frame operations.
//!
//! The compiler walks the location list once, tracking for every live wire
//! the ideal value it carries as an XOR of *symbols* plus a constant bit.
//! Symbols come in two kinds: branch symbols (introduced by random-branch
//! preparations — the state is a uniform superposition over the symbol's
//! values) and input symbols (unknown external values on declared inputs).
//! This symbolic layer is what makes the measurement semantics checkable:
//!
//! * A postselected transversal readout observes `value XOR error` on each
//!   measured wire. The predicate is well defined on error patterns only
//!   if it is invariant under flipping each symbol that reaches the
//!   measured wires (the symbols are not knowable in advance); the constant
//!   parts shift which error patterns are accepted.
//! * A teleport `<0|` measurement resolves one branch symbol: instead of
//!   constraining the error, the accepted outcome decides which branch
//!   survived, at probability 1/2. Algebraically the surviving branch sets
//!   `symbol = rest XOR error(wire)`, so the wire's current error is XORed
//!   into every other wire whose value contains the symbol, and the symbol
//!   is substituted away.
//!
//! The output of compilation is a flat list of [`FrameOp`]s acting on error
//! patterns and an acceptance accumulator — the single program both the
//! exact engine and the Monte Carlo sampler execute.

use super::{CnotNoise, Gadget, Location, PatternSet};
use crate::error::Error;
use crate::scalar::Scalar;

/// A lowered operation on the error-pattern state.
#[derive(Clone, Debug, PartialEq)]
pub enum FrameOp<T> {
    /// Ideal CNOT propagation: the control's error copies onto the target.
    CnotXor { control: usize, target: usize },
    /// Four-outcome noise channel on a wire pair.
    Noise {
        control: usize,
        target: usize,
        noise: CnotNoise<T>,
    },
    /// Independent X with the given rate.
    Inject { wire: usize, rate: T },
    /// Keep only error patterns whose masked outcome is accepted; scales
    /// acceptance by the kept mass. `accept` is already shifted by the
    /// measured wires' constant values, so it applies to raw error bits.
    Predicate { wires: Vec<usize>, accept: PatternSet },
    /// XOR the source wire's error bit into every wire of `to_mask`.
    Transfer { from: usize, to_mask: u32 },
    /// Unconditional acceptance factor 1/2 (a postselected branch choice).
    HalveAccept,
    /// Sum a wire's error bit out of the state and force it to zero.
    Marginalize { wire: usize },
}

/// A validated, lowered gadget.
#[derive(Clone, Debug)]
pub struct CompiledGadget<T> {
    pub n_wires: usize,
    pub ops: Vec<FrameOp<T>>,
    pub output_wires: Vec<usize>,
}

#[derive(Clone)]
struct WireValue {
    /// XOR of symbols, as a bitmask over symbol ids.
    symbols: u64,
    constant: bool,
}

#[derive(Clone, Copy, PartialEq)]
enum SymbolKind {
    Branch,
    Input,
}

struct Compiler<T> {
    n_wires: usize,
    values: Vec<Option<WireValue>>,
    symbol_kinds: Vec<SymbolKind>,
    ops: Vec<FrameOp<T>>,
}

impl<T: Scalar> Compiler<T> {
    fn live(&self, wire: usize) -> Result<&WireValue, Error> {
        if wire >= self.n_wires {
            return Err(Error::bad_gadget(format!(
                "wire {wire} out of range for width {}",
                self.n_wires
            )));
        }
        self.values[wire]
            .as_ref()
            .ok_or_else(|| Error::bad_gadget(format!("wire {wire} used before preparation")))
    }

    fn prepare(&mut self, wire: usize, value: WireValue, what: &str) -> Result<(), Error> {
        if wire >= self.n_wires {
            return Err(Error::bad_gadget(format!(
                "wire {wire} out of range for width {}",
                self.n_wires
            )));
        }
        if self.values[wire].is_some() {
            return Err(Error::bad_gadget(format!(
                "{what} on wire {wire} which is already live"
            )));
        }
        self.values[wire] = Some(value);
        Ok(())
    }

    fn fresh_symbol(&mut self, kind: SymbolKind) -> Result<u64, Error> {
        let id = self.symbol_kinds.len();
        if id >= 64 {
            return Err(Error::bad_gadget("more than 64 preparation/input symbols"));
        }
        self.symbol_kinds.push(kind);
        Ok(1u64 << id)
    }

    fn remove(&mut self, wire: usize) {
        self.values[wire] = None;
        self.ops.push(FrameOp::Marginalize { wire });
    }

    fn visit(&mut self, location: &Location<T>) -> Result<(), Error> {
        match location {
            Location::PrepZero { wire } => self.prepare(
                *wire,
                WireValue {
                    symbols: 0,
                    constant: false,
                },
                "zero preparation",
            ),
            Location::PrepPlus { wire } => {
                let s = self.fresh_symbol(SymbolKind::Branch)?;
                self.prepare(
                    *wire,
                    WireValue {
                        symbols: s,
                        constant: false,
                    },
                    "branch preparation",
                )
            }
            Location::Input { wire } => {
                let s = self.fresh_symbol(SymbolKind::Input)?;
                self.prepare(
                    *wire,
                    WireValue {
                        symbols: s,
                        constant: false,
                    },
                    "input declaration",
                )
            }
            Location::NoisyCnot {
                control,
                target,
                noise,
            } => {
                if control == target {
                    return Err(Error::bad_gadget("CNOT control equals target"));
                }
                let cv = self.live(*control)?.clone();
                let tv = self.live(*target)?;
                let new_target = WireValue {
                    symbols: tv.symbols ^ cv.symbols,
                    constant: tv.constant ^ cv.constant,
                };
                self.values[*target] = Some(new_target);
                self.ops.push(FrameOp::CnotXor {
                    control: *control,
                    target: *target,
                });
                if !noise.is_zero() {
                    self.ops.push(FrameOp::Noise {
                        control: *control,
                        target: *target,
                        noise: noise.clone(),
                    });
                }
                Ok(())
            }
            Location::InjectX { wire, rate } => {
                self.live(*wire)?;
                if *rate < T::zero() || *rate > T::one() {
                    return Err(Error::ProbabilityOutOfRange {
                        what: format!("injection rate on wire {wire}"),
                    });
                }
                if !rate.is_zero() {
                    self.ops.push(FrameOp::Inject {
                        wire: *wire,
                        rate: rate.clone(),
                    });
                }
                Ok(())
            }
            Location::MeasurePostselect { wires, accept } => {
                if wires.is_empty() {
                    return Err(Error::bad_gadget("measurement of no wires"));
                }
                let mut seen = vec![false; self.n_wires];
                for &w in wires {
                    self.live(w)?;
                    if seen[w] {
                        return Err(Error::bad_gadget(format!("wire {w} measured twice")));
                    }
                    seen[w] = true;
                }
                if accept.wires() != wires.len() {
                    return Err(Error::bad_gadget(format!(
                        "predicate over {} wires attached to {} measured wires",
                        accept.wires(),
                        wires.len()
                    )));
                }
                // Every symbol reaching the measured wires must leave the
                // predicate invariant; the constants shift it.
                let mut constant_mask = 0u32;
                let mut symbol_union = 0u64;
                for (k, &w) in wires.iter().enumerate() {
                    let v = self.live(w)?;
                    symbol_union |= v.symbols;
                    if v.constant {
                        constant_mask |= 1 << k;
                    }
                }
                let mut remaining = symbol_union;
                while remaining != 0 {
                    let s = remaining & remaining.wrapping_neg();
                    remaining ^= s;
                    let mut flip = 0u32;
                    for (k, &w) in wires.iter().enumerate() {
                        if self.live(w)?.symbols & s != 0 {
                            flip |= 1 << k;
                        }
                    }
                    if !accept.invariant_under(flip) {
                        return Err(Error::bad_gadget(format!(
                            "acceptance predicate depends on an unknown value \
                             (symbol flip mask {flip:#b} over the measured wires); \
                             use a teleport measurement to resolve branch values"
                        )));
                    }
                }
                self.ops.push(FrameOp::Predicate {
                    wires: wires.clone(),
                    accept: accept.shifted(constant_mask),
                });
                for &w in wires {
                    self.remove(w);
                }
                Ok(())
            }
            Location::TeleportMeasureZ { wire } => {
                let v = self.live(*wire)?.clone();
                let mut branch_bits = v.symbols;
                let resolved = loop {
                    if branch_bits == 0 {
                        return Err(Error::bad_gadget(format!(
                            "teleport measurement on wire {wire} whose value \
                             contains no branch symbol to resolve"
                        )));
                    }
                    let s = branch_bits & branch_bits.wrapping_neg();
                    if self.symbol_kinds[s.trailing_zeros() as usize] == SymbolKind::Branch {
                        break s;
                    }
                    branch_bits ^= s;
                };
                // Surviving branch: resolved = rest-of-value XOR error(wire).
                let rest = WireValue {
                    symbols: v.symbols ^ resolved,
                    constant: v.constant,
                };
                let mut to_mask = 0u32;
                for other in 0..self.n_wires {
                    if other == *wire {
                        continue;
                    }
                    if let Some(ov) = &self.values[other] {
                        if ov.symbols & resolved != 0 {
                            to_mask |= 1 << other;
                            self.values[other] = Some(WireValue {
                                symbols: (ov.symbols ^ resolved) ^ rest.symbols,
                                constant: ov.constant ^ rest.constant,
                            });
                        }
                    }
                }
                self.ops.push(FrameOp::HalveAccept);
                if to_mask != 0 {
                    self.ops.push(FrameOp::Transfer {
                        from: *wire,
                        to_mask,
                    });
                }
                self.remove(*wire);
                Ok(())
            }
            Location::MeasureXPlus { wire } => {
                self.live(*wire)?;
                self.ops.push(FrameOp::HalveAccept);
                self.remove(*wire);
                Ok(())
            }
            Location::Discard { wires } => {
                for &w in wires {
                    self.live(w)?;
                }
                for &w in wires {
                    self.remove(w);
                }
                Ok(())
            }
        }
    }
}

/// Validate a gadget and lower it to frame operations.
pub fn compile<T: Scalar>(gadget: &Gadget<T>) -> Result<CompiledGadget<T>, Error> {
    let n = gadget.n_wires();
    if n == 0 || n > 24 {
        return Err(Error::BadWireCount { n });
    }
    let mut compiler = Compiler {
        n_wires: n,
        values: vec![None; n],
        symbol_kinds: Vec::new(),
        ops: Vec::new(),
    };
    for location in gadget.locations() {
        compiler.visit(location)?;
    }
    let mut seen = vec![false; n];
    for &w in gadget.output_wires() {
        if w >= n {
            return Err(Error::bad_gadget(format!(
                "output wire {w} out of range for width {n}"
            )));
        }
        if seen[w] {
            return Err(Error::bad_gadget(format!("output wire {w} listed twice")));
        }
        seen[w] = true;
        if compiler.values[w].is_none() {
            return Err(Error::bad_gadget(format!(
                "output wire {w} is not live at the end of the gadget"
            )));
        }
    }
    Ok(CompiledGadget {
        n_wires: n,
        ops: compiler.ops,
        output_wires: gadget.output_wires().to_vec(),
    })
}

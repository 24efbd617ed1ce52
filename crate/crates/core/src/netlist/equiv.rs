//! Equivalence checking against a reference function.

use rayon::prelude::*;

use super::sim::word_bits;
use super::{Netlist, NetlistError, MAX_EXHAUSTIVE_INPUTS};

/// A reference function over bit vectors, first bit = first declared port.
pub trait Oracle: Sync {
    fn input_arity(&self) -> usize;
    fn output_arity(&self) -> usize;
    fn eval(&self, inputs: &[bool]) -> Vec<bool>;
}

/// Adapts a closure to [`Oracle`].
pub struct FnOracle<F> {
    inputs: usize,
    outputs: usize,
    f: F,
}

impl<F> FnOracle<F>
where
    F: Fn(&[bool]) -> Vec<bool> + Sync,
{
    pub fn new(inputs: usize, outputs: usize, f: F) -> Self {
        Self { inputs, outputs, f }
    }
}

impl<F> Oracle for FnOracle<F>
where
    F: Fn(&[bool]) -> Vec<bool> + Sync,
{
    fn input_arity(&self) -> usize {
        self.inputs
    }

    fn output_arity(&self) -> usize {
        self.outputs
    }

    fn eval(&self, inputs: &[bool]) -> Vec<bool> {
        (self.f)(inputs)
    }
}

/// 64-bit linear congruential generator used for random equivalence checks.
///
/// `state ← state · 6364136223846793005 + 1442695040888963407 (mod 2^64)`,
/// starting from `state = seed`. Each step yields the upper 32 bits of the
/// new state. Input bit `j` of a sample is bit `31 − (j mod 32)` of draw
/// `⌊j / 32⌋`, so every sample consumes `⌈n / 32⌉` draws.
#[derive(Debug, Clone)]
pub struct Lcg64 {
    state: u64,
}

impl Lcg64 {
    pub const MULTIPLIER: u64 = 6364136223846793005;
    pub const INCREMENT: u64 = 1442695040888963407;

    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    pub fn next_u32(&mut self) -> u32 {
        self.state = self
            .state
            .wrapping_mul(Self::MULTIPLIER)
            .wrapping_add(Self::INCREMENT);
        (self.state >> 32) as u32
    }

    pub fn next_bits(&mut self, n: usize) -> Vec<bool> {
        let mut bits = Vec::with_capacity(n);
        while bits.len() < n {
            let draw = self.next_u32();
            let take = (n - bits.len()).min(32);
            bits.extend((0..take).map(|i| draw >> (31 - i) & 1 == 1));
        }
        bits
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckMode {
    Exhaustive,
    Random { count: u64, seed: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Counterexample {
    pub input: Vec<bool>,
    pub expected: Vec<bool>,
    pub actual: Vec<bool>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Equivalence {
    Pass { cases: u64 },
    Counterexample(Counterexample),
}

impl Equivalence {
    pub fn is_pass(&self) -> bool {
        matches!(self, Equivalence::Pass { .. })
    }
}

fn compare(netlist: &Netlist, oracle: &dyn Oracle, input: Vec<bool>) -> Option<Counterexample> {
    let actual = netlist.eval_outputs(&input).expect("arity checked");
    let expected = oracle.eval(&input);
    (actual != expected).then_some(Counterexample {
        input,
        expected,
        actual,
    })
}

/// Compares the netlist's primary outputs with `oracle`.
///
/// Exhaustive mode splits the input space across worker threads and reports
/// the counterexample with the smallest input word.
pub fn check_equivalence(
    netlist: &Netlist,
    oracle: &dyn Oracle,
    mode: CheckMode,
) -> Result<Equivalence, NetlistError> {
    let (inputs, outputs) = (netlist.input_count(), netlist.output_count());
    if oracle.input_arity() != inputs || oracle.output_arity() != outputs {
        return Err(NetlistError::ArityMismatch {
            inputs,
            outputs,
            oracle_inputs: oracle.input_arity(),
            oracle_outputs: oracle.output_arity(),
        });
    }
    match mode {
        CheckMode::Exhaustive => {
            if inputs > MAX_EXHAUSTIVE_INPUTS {
                return Err(NetlistError::TooLarge {
                    what: "primary inputs",
                    count: inputs,
                    max: MAX_EXHAUSTIVE_INPUTS,
                });
            }
            let cases = 1u64 << inputs;
            let found = (0..cases)
                .into_par_iter()
                .find_map_first(|word| compare(netlist, oracle, word_bits(word, inputs)));
            Ok(found.map_or(Equivalence::Pass { cases }, Equivalence::Counterexample))
        }
        CheckMode::Random { count, seed } => {
            let mut rng = Lcg64::new(seed);
            for _ in 0..count {
                if let Some(cex) = compare(netlist, oracle, rng.next_bits(inputs)) {
                    return Ok(Equivalence::Counterexample(cex));
                }
            }
            Ok(Equivalence::Pass { cases: count })
        }
    }
}

//! Adder netlist generators built from Peres full adders.
//!
//! All adders take primary inputs `A_1..A_n, B_1..B_n, Cin` and produce
//! `S_1..S_n, Cout`, with index 1 the least-significant bit. Every line that
//! is not a primary output is garbage.
//!
//! A carry-skip block of `B` bits contains:
//!
//! * a Feynman copy of the block carry-in onto a fresh constant line,
//! * a `B`-stage ripple chain of Peres full adders (`2B` Peres gates),
//! * a balanced Peres AND-tree over the propagate lines (`B − 1` gates),
//! * a Fredkin multiplexer `(P_block, C_ripple, Cin_copy)` whose middle
//!   output is the block carry-out.
//!
//! That is `3B + 1` gates. Counting only the Peres-style gates (tree, chain
//! and multiplexer) gives the customary `3B`; see
//! [`Metrics::nominal_gate_count`](crate::netlist::Metrics::nominal_gate_count).

use thiserror::Error;

use crate::gate::Builtin;
use crate::netlist::{Netlist, NetlistBuilder, NetlistError, Oracle};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AdderError {
    #[error("adder width must be at least 1")]
    ZeroBits,
    #[error("block size {block} does not divide {bits} bits")]
    NonDividingBlock { bits: usize, block: usize },
    #[error("block count {0} must be even and at least 2")]
    BadBlockCount(usize),
    #[error("{bits} bits cannot be split into {blocks} blocks")]
    TooFewBits { bits: usize, blocks: usize },
    #[error("no block plan with every block at least 1 bit exists for {bits} bits in {blocks} blocks (base size {base:.3})")]
    InfeasiblePlan {
        bits: usize,
        blocks: usize,
        base: f64,
    },
    #[error("addition oracle supports at most {max} bits, got {bits}")]
    TooWide { bits: usize, max: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlanStyle {
    Fixed,
    Variable,
}

/// Partition of an adder into carry-skip blocks, least-significant first.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockPlan {
    pub total_bits: usize,
    pub block_sizes: Vec<usize>,
    pub style: PlanStyle,
    /// Real-valued end-block size the sizes were derived from.
    pub base: f64,
}

impl BlockPlan {
    pub fn fixed(bits: usize, block: usize) -> Result<Self, AdderError> {
        if bits == 0 || block == 0 {
            return Err(AdderError::ZeroBits);
        }
        if !bits.is_multiple_of(block) {
            return Err(AdderError::NonDividingBlock { bits, block });
        }
        Ok(Self {
            total_bits: bits,
            block_sizes: vec![block; bits / block],
            style: PlanStyle::Fixed,
            base: block as f64,
        })
    }

    /// Sizes `b, b+1, …, b+t/2−1, b+t/2−1, …, b+1, b` with
    /// `b = N/t − t/4 + 1/2`, integerized.
    ///
    /// Every block starts at the profile built on `⌊b⌋`; the missing bits
    /// are then added one per block in mirrored pairs from the middle
    /// outward. An odd leftover bit goes to the later middle block.
    pub fn variable(bits: usize, blocks: usize) -> Result<Self, AdderError> {
        if blocks < 2 || !blocks.is_multiple_of(2) {
            return Err(AdderError::BadBlockCount(blocks));
        }
        if bits < blocks {
            return Err(AdderError::TooFewBits { bits, blocks });
        }
        let base = bits as f64 / blocks as f64 - blocks as f64 / 4.0 + 0.5;
        let floor = base.floor();
        if floor < 1.0 {
            return Err(AdderError::InfeasiblePlan { bits, blocks, base });
        }
        let floor = floor as usize;
        let half = blocks / 2;
        let mut sizes: Vec<usize> = (0..half)
            .chain((0..half).rev())
            .map(|i| floor + i)
            .collect();
        let mut missing = bits - sizes.iter().sum::<usize>();
        for offset in 0..half {
            if missing < 2 {
                break;
            }
            sizes[half - 1 - offset] += 1;
            sizes[half + offset] += 1;
            missing -= 2;
        }
        if missing == 1 {
            sizes[half] += 1;
            missing = 0;
        }
        debug_assert_eq!(missing, 0);
        Ok(Self {
            total_bits: bits,
            block_sizes: sizes,
            style: PlanStyle::Variable,
            base,
        })
    }

    pub fn is_palindromic(&self) -> bool {
        self.block_sizes.iter().eq(self.block_sizes.iter().rev())
    }
}

/// Lines produced by one Peres full adder.
struct FullAdder {
    sum: usize,
    carry: usize,
    propagate: usize,
}

/// `peres(A, B, 0)` then `peres(A⊕B, Cin, AB)`.
fn place_full_adder(b: &mut NetlistBuilder, a: usize, bb: usize, cin: usize) -> FullAdder {
    let c = b.constant(false);
    b.builtin(Builtin::Peres, &[a, bb, c]).expect("fresh lines");
    b.builtin(Builtin::Peres, &[bb, cin, c])
        .expect("fresh lines");
    FullAdder {
        sum: cin,
        carry: c,
        propagate: bb,
    }
}

struct Ripple {
    sums: Vec<usize>,
    carry: usize,
    propagates: Vec<usize>,
}

/// `first_bit` is the 1-based global index of the chain's lowest bit.
fn place_ripple(
    b: &mut NetlistBuilder,
    a: &[usize],
    bb: &[usize],
    cin: usize,
    first_bit: usize,
) -> Ripple {
    let mut carry = cin;
    let mut sums = Vec::with_capacity(a.len());
    let mut propagates = Vec::with_capacity(a.len());
    for (i, (&ai, &bi)) in a.iter().zip(bb).enumerate() {
        let fa = place_full_adder(b, ai, bi, carry);
        let bit = first_bit + i;
        b.mark(fa.propagate, format!("P_{bit}"))
            .expect("valid line");
        b.mark(fa.carry, format!("C_{bit}")).expect("valid line");
        sums.push(fa.sum);
        propagates.push(fa.propagate);
        carry = fa.carry;
    }
    Ripple {
        sums,
        carry,
        propagates,
    }
}

/// Balanced pairwise AND of `inputs` with one Peres gate per pair.
fn place_and_tree(b: &mut NetlistBuilder, inputs: &[usize]) -> usize {
    assert!(!inputs.is_empty(), "AND-tree needs at least one input");
    let mut level = inputs.to_vec();
    while level.len() > 1 {
        let mut next = Vec::with_capacity(level.len().div_ceil(2));
        for pair in level.chunks(2) {
            match *pair {
                [x, y] => {
                    let product = b.constant(false);
                    b.builtin(Builtin::Peres, &[x, y, product])
                        .expect("fresh lines");
                    next.push(product);
                }
                [x] => next.push(x),
                _ => unreachable!(),
            }
        }
        level = next;
    }
    let out = level[0];
    b.mark(out, "P_block").expect("valid line");
    out
}

struct SkipBlock {
    sums: Vec<usize>,
    carry: usize,
}

fn place_skip_block(
    b: &mut NetlistBuilder,
    a: &[usize],
    bb: &[usize],
    cin: usize,
    first_bit: usize,
) -> SkipBlock {
    let copy = b.constant(false);
    b.builtin(Builtin::Feynman, &[cin, copy])
        .expect("fresh lines");
    b.mark(copy, "Cin_copy").expect("valid line");
    let ripple = place_ripple(b, a, bb, cin, first_bit);
    b.mark(ripple.carry, "C_ripple").expect("valid line");
    let p_block = place_and_tree(b, &ripple.propagates);
    // Q = P_block'·C_ripple ⊕ P_block·Cin lands on the ripple carry line.
    b.builtin(Builtin::Fredkin, &[p_block, ripple.carry, copy])
        .expect("fresh lines");
    SkipBlock {
        sums: ripple.sums,
        carry: ripple.carry,
    }
}

struct AdderPorts {
    a: Vec<usize>,
    b: Vec<usize>,
    cin: usize,
}

fn adder_inputs(b: &mut NetlistBuilder, bits: usize) -> AdderPorts {
    let a = (1..=bits).map(|i| b.input(format!("A_{i}"))).collect();
    let bb = (1..=bits).map(|i| b.input(format!("B_{i}"))).collect();
    let cin = b.input("Cin");
    AdderPorts { a, b: bb, cin }
}

/// Declares `outputs` in order and every remaining line as garbage.
fn seal(mut b: NetlistBuilder, outputs: Vec<(usize, String)>) -> Netlist {
    let mut used = vec![false; b.line_count()];
    for (line, name) in outputs {
        used[line] = true;
        b.output(line, name).expect("distinct output lines");
    }
    for (line, _) in used.iter().enumerate().filter(|(_, u)| !**u) {
        b.garbage(line).expect("distinct garbage lines");
    }
    b.finish().expect("generated wiring is valid")
}

fn adder_outputs(sums: &[usize], carry: usize) -> Vec<(usize, String)> {
    sums.iter()
        .enumerate()
        .map(|(i, &l)| (l, format!("S_{}", i + 1)))
        .chain(std::iter::once((carry, "Cout".to_string())))
        .collect()
}

/// The two-gate Peres full adder on lines `A, B, Cin, 0`.
pub fn peres_full_adder() -> Netlist {
    let mut b = NetlistBuilder::new();
    let a = b.input("A");
    let bb = b.input("B");
    let cin = b.input("Cin");
    let fa = place_full_adder(&mut b, a, bb, cin);
    b.mark(fa.propagate, "P").expect("valid line");
    seal(b, vec![(fa.sum, "S".into()), (fa.carry, "Cout".into())])
}

/// `bits` chained Peres full adders.
pub fn ripple_adder(bits: usize) -> Result<Netlist, AdderError> {
    if bits == 0 {
        return Err(AdderError::ZeroBits);
    }
    let mut b = NetlistBuilder::new();
    let ports = adder_inputs(&mut b, bits);
    let ripple = place_ripple(&mut b, &ports.a, &ports.b, ports.cin, 1);
    Ok(seal(b, adder_outputs(&ripple.sums, ripple.carry)))
}

/// Standalone `fan_in`-input AND-tree with inputs `P_1..P_n` and output
/// `P_block`.
pub fn and_tree(fan_in: usize) -> Result<Netlist, AdderError> {
    if fan_in == 0 {
        return Err(AdderError::ZeroBits);
    }
    let mut b = NetlistBuilder::new();
    let inputs: Vec<usize> = (1..=fan_in).map(|i| b.input(format!("P_{i}"))).collect();
    let out = place_and_tree(&mut b, &inputs);
    Ok(seal(b, vec![(out, "P_block".into())]))
}

pub fn carry_skip_block(bits: usize) -> Result<Netlist, AdderError> {
    skip_adder(&BlockPlan::fixed(bits, bits)?)
}

/// Carry-skip adder for an arbitrary block plan.
pub fn skip_adder(plan: &BlockPlan) -> Result<Netlist, AdderError> {
    if plan.total_bits == 0 || plan.block_sizes.contains(&0) {
        return Err(AdderError::ZeroBits);
    }
    let mut b = NetlistBuilder::new();
    let ports = adder_inputs(&mut b, plan.total_bits);
    let mut carry = ports.cin;
    let mut sums = Vec::with_capacity(plan.total_bits);
    let mut lo = 0;
    for &size in &plan.block_sizes {
        let hi = lo + size;
        let block = place_skip_block(&mut b, &ports.a[lo..hi], &ports.b[lo..hi], carry, lo + 1);
        sums.extend(block.sums);
        carry = block.carry;
        lo = hi;
    }
    Ok(seal(b, adder_outputs(&sums, carry)))
}

pub fn fixed_block_adder(bits: usize, block: usize) -> Result<Netlist, AdderError> {
    skip_adder(&BlockPlan::fixed(bits, block)?)
}

pub fn block_plan(bits: usize, blocks: usize) -> Result<BlockPlan, AdderError> {
    BlockPlan::variable(bits, blocks)
}

pub fn variable_block_adder(bits: usize, blocks: usize) -> Result<Netlist, AdderError> {
    skip_adder(&BlockPlan::variable(bits, blocks)?)
}

/// `A + B + Cin` computed with machine integers, on the adder port layout.
#[derive(Debug, Clone, Copy)]
pub struct AdditionOracle {
    bits: usize,
}

impl AdditionOracle {
    pub const MAX_BITS: usize = 127;

    pub fn new(bits: usize) -> Result<Self, AdderError> {
        match bits {
            0 => Err(AdderError::ZeroBits),
            b if b > Self::MAX_BITS => Err(AdderError::TooWide {
                bits,
                max: Self::MAX_BITS,
            }),
            _ => Ok(Self { bits }),
        }
    }
}

impl Oracle for AdditionOracle {
    fn input_arity(&self) -> usize {
        2 * self.bits + 1
    }

    fn output_arity(&self) -> usize {
        self.bits + 1
    }

    fn eval(&self, inputs: &[bool]) -> Vec<bool> {
        let n = self.bits;
        let value = |bits: &[bool]| {
            bits.iter()
                .enumerate()
                .fold(0u128, |acc, (i, &b)| acc | (b as u128) << i)
        };
        let total = value(&inputs[..n]) + value(&inputs[n..2 * n]) + inputs[2 * n] as u128;
        (0..=n).map(|i| total >> i & 1 == 1).collect()
    }
}

/// Convenience wrapper used by the CLI and tests.
pub fn check_adder(
    netlist: &Netlist,
    bits: usize,
    mode: crate::netlist::CheckMode,
) -> Result<crate::netlist::Equivalence, NetlistError> {
    let oracle = AdditionOracle::new(bits).map_err(|_| NetlistError::TooLarge {
        what: "adder bits",
        count: bits,
        max: AdditionOracle::MAX_BITS,
    })?;
    crate::netlist::check_equivalence(netlist, &oracle, mode)
}

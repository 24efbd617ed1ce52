//! Lower bounds on garbage outputs and constant inputs.
//!
//! If some output word of an irreversible function is produced by `μ`
//! distinct input words, a reversible embedding needs `⌈log₂μ⌉` extra
//! (garbage) outputs to tell those inputs apart. The line count must then
//! be balanced with constant inputs.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use crate::netlist::{Netlist, MAX_EXHAUSTIVE_INPUTS};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BoundsError {
    #[error("function table line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("function table is incomplete: {missing} of {expected} rows missing")]
    Incomplete { missing: usize, expected: usize },
    #[error("function table has {n_in} inputs / {n_out} outputs; limits are {max_in} / 64")]
    TooLarge {
        n_in: usize,
        n_out: usize,
        max_in: usize,
    },
    #[error("name mismatch: {0}")]
    NameMismatch(String),
}

/// Complete truth table of a multi-output Boolean function.
///
/// Words put the first input (output) in the most-significant bit. Port
/// names are optional; when present, realizations are matched by name.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FunctionTable {
    n_in: usize,
    n_out: usize,
    rows: Vec<u64>,
    input_names: Option<Vec<String>>,
    output_names: Option<Vec<String>>,
}

impl FunctionTable {
    pub fn new(n_in: usize, n_out: usize, rows: Vec<u64>) -> Result<Self, BoundsError> {
        if n_in > MAX_EXHAUSTIVE_INPUTS || n_out > 64 {
            return Err(BoundsError::TooLarge {
                n_in,
                n_out,
                max_in: MAX_EXHAUSTIVE_INPUTS,
            });
        }
        let expected = 1usize << n_in;
        if rows.len() != expected {
            return Err(BoundsError::Incomplete {
                missing: expected.saturating_sub(rows.len()),
                expected,
            });
        }
        Ok(Self {
            n_in,
            n_out,
            rows,
            input_names: None,
            output_names: None,
        })
    }

    pub fn from_fn(n_in: usize, n_out: usize, f: impl Fn(u64) -> u64) -> Result<Self, BoundsError> {
        let mask = if n_out == 64 {
            u64::MAX
        } else {
            (1 << n_out) - 1
        };
        Self::new(
            n_in,
            n_out,
            (0..1u64 << n_in).map(|w| f(w) & mask).collect(),
        )
    }

    pub fn with_names(mut self, inputs: &[&str], outputs: &[&str]) -> Result<Self, BoundsError> {
        if inputs.len() != self.n_in || outputs.len() != self.n_out {
            return Err(BoundsError::NameMismatch(format!(
                "{} input and {} output names for a {}→{} table",
                inputs.len(),
                outputs.len(),
                self.n_in,
                self.n_out
            )));
        }
        self.input_names = Some(inputs.iter().map(|s| s.to_string()).collect());
        self.output_names = Some(outputs.iter().map(|s| s.to_string()).collect());
        Ok(self)
    }

    /// `(A, B, Cin) → (S, Cout)`.
    pub fn full_adder() -> Self {
        Self::from_fn(3, 2, |w| {
            let ones = w.count_ones() as u64;
            (ones & 1) << 1 | ones >> 1
        })
        .and_then(|t| t.with_names(&["A", "B", "Cin"], &["S", "Cout"]))
        .expect("static table")
    }

    /// `(A, B) → AND`.
    pub fn and2() -> Self {
        Self::from_fn(2, 1, |w| (w == 0b11) as u64)
            .and_then(|t| t.with_names(&["A", "B"], &["AND"]))
            .expect("static table")
    }

    pub fn n_in(&self) -> usize {
        self.n_in
    }

    pub fn n_out(&self) -> usize {
        self.n_out
    }

    pub fn rows(&self) -> &[u64] {
        &self.rows
    }

    /// Parses the `ftab` format:
    ///
    /// ```text
    /// ftab 3 2
    /// inputs A B Cin     # optional
    /// outputs S Cout     # optional
    /// 000 00
    /// 001 10
    /// ...
    /// ```
    ///
    /// All `2^n_in` rows are required, in any order.
    pub fn parse(text: &str) -> Result<Self, BoundsError> {
        let syntax = |line: usize, message: String| BoundsError::Syntax { line, message };
        let mut header: Option<(usize, usize)> = None;
        let mut rows: Vec<Option<u64>> = Vec::new();
        let mut input_names = None;
        let mut output_names = None;

        for (idx, raw) in text.lines().enumerate() {
            let lineno = idx + 1;
            let toks: Vec<&str> = raw
                .split('#')
                .next()
                .unwrap_or("")
                .split_whitespace()
                .collect();
            if toks.is_empty() {
                continue;
            }
            let Some((n_in, n_out)) = header else {
                let [kw, i, o] = toks[..] else {
                    return Err(syntax(lineno, "expected `ftab <n_in> <n_out>`".into()));
                };
                let parse = |s: &str| {
                    s.parse::<usize>()
                        .map_err(|_| syntax(lineno, format!("invalid arity `{s}`")))
                };
                if kw != "ftab" {
                    return Err(syntax(lineno, "expected `ftab <n_in> <n_out>`".into()));
                }
                let (n_in, n_out) = (parse(i)?, parse(o)?);
                if n_in > MAX_EXHAUSTIVE_INPUTS || n_out > 64 {
                    return Err(BoundsError::TooLarge {
                        n_in,
                        n_out,
                        max_in: MAX_EXHAUSTIVE_INPUTS,
                    });
                }
                header = Some((n_in, n_out));
                rows = vec![None; 1 << n_in];
                continue;
            };
            match toks[0] {
                "inputs" | "outputs" => {
                    let names: Vec<String> = toks[1..].iter().map(|s| s.to_string()).collect();
                    let (slot, want) = if toks[0] == "inputs" {
                        (&mut input_names, n_in)
                    } else {
                        (&mut output_names, n_out)
                    };
                    if names.len() != want {
                        return Err(syntax(
                            lineno,
                            format!("expected {want} names, got {}", names.len()),
                        ));
                    }
                    *slot = Some(names);
                }
                _ => {
                    let [inbits, outbits] = toks[..] else {
                        return Err(syntax(lineno, "expected `<inbits> <outbits>`".into()));
                    };
                    let word = |bits: &str, width: usize| -> Result<u64, BoundsError> {
                        if bits.len() != width || !bits.chars().all(|c| c == '0' || c == '1') {
                            return Err(syntax(
                                lineno,
                                format!("`{bits}` is not a {width}-bit string"),
                            ));
                        }
                        Ok(bits.chars().fold(0, |acc, c| acc << 1 | (c == '1') as u64))
                    };
                    let input = word(inbits, n_in)? as usize;
                    let output = word(outbits, n_out)?;
                    if rows[input].replace(output).is_some() {
                        return Err(syntax(lineno, format!("duplicate row for input {inbits}")));
                    }
                }
            }
        }

        let (n_in, n_out) = header.ok_or_else(|| syntax(1, "missing `ftab` header".into()))?;
        let missing = rows.iter().filter(|r| r.is_none()).count();
        if missing > 0 {
            return Err(BoundsError::Incomplete {
                missing,
                expected: rows.len(),
            });
        }
        let mut table = Self::new(
            n_in,
            n_out,
            rows.into_iter().map(|r| r.unwrap_or(0)).collect(),
        )?;
        table.input_names = input_names;
        table.output_names = output_names;
        Ok(table)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BoundsReport {
    /// Largest number of input words sharing one output word.
    pub mu: usize,
    pub min_garbage: usize,
    pub min_constant_inputs: usize,
    pub total_outputs: usize,
}

impl fmt::Display for BoundsReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "mu={} min_garbage={} min_constant_inputs={} total_outputs={}",
            self.mu, self.min_garbage, self.min_constant_inputs, self.total_outputs
        )
    }
}

fn ceil_log2(n: usize) -> usize {
    if n <= 1 {
        0
    } else {
        (usize::BITS - (n - 1).leading_zeros()) as usize
    }
}

pub fn analyze_bounds(f: &FunctionTable) -> BoundsReport {
    let mut counts: HashMap<u64, usize> = HashMap::new();
    for &row in &f.rows {
        *counts.entry(row).or_default() += 1;
    }
    let mu = counts.values().copied().max().unwrap_or(0);
    let min_garbage = ceil_log2(mu);
    let total_outputs = f.n_out + min_garbage;
    BoundsReport {
        mu,
        min_garbage,
        min_constant_inputs: total_outputs.saturating_sub(f.n_in),
        total_outputs,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RealizationFailure {
    FunctionMismatch {
        input: u64,
        expected: u64,
        actual: u64,
    },
    TooFewGarbage {
        garbage: usize,
        bound: usize,
    },
    TooFewConstants {
        constants: usize,
        bound: usize,
    },
}

impl fmt::Display for RealizationFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RealizationFailure::FunctionMismatch {
                input,
                expected,
                actual,
            } => write!(
                f,
                "function mismatch at input {input:#b}: expected {expected:#b}, got {actual:#b}"
            ),
            RealizationFailure::TooFewGarbage { garbage, bound } => {
                write!(f, "{garbage} garbage outputs, bound is {bound}")
            }
            RealizationFailure::TooFewConstants { constants, bound } => {
                write!(f, "{constants} constant inputs, bound is {bound}")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Realization {
    Pass {
        garbage_tight: bool,
        constants_tight: bool,
    },
    Fail(RealizationFailure),
}

fn port_map(
    what: &str,
    names: Option<&Vec<String>>,
    count: usize,
    netlist_names: &[&str],
    exact: bool,
) -> Result<Vec<usize>, BoundsError> {
    match names {
        Some(names) => {
            if exact && netlist_names.len() != names.len() {
                return Err(BoundsError::NameMismatch(format!(
                    "netlist has {} {what}s, table has {}",
                    netlist_names.len(),
                    names.len()
                )));
            }
            names
                .iter()
                .map(|n| {
                    netlist_names.iter().position(|m| m == n).ok_or_else(|| {
                        BoundsError::NameMismatch(format!("netlist has no {what} named `{n}`"))
                    })
                })
                .collect()
        }
        None if netlist_names.len() == count => Ok((0..count).collect()),
        None => Err(BoundsError::NameMismatch(format!(
            "netlist has {} {what}s, table has {count}",
            netlist_names.len()
        ))),
    }
}

/// Checks that `netlist` computes `f` and respects both lower bounds.
pub fn verify_realization(
    f: &FunctionTable,
    netlist: &Netlist,
) -> Result<Realization, BoundsError> {
    let net_inputs: Vec<&str> = netlist.inputs().iter().map(|(_, n)| *n).collect();
    let net_outputs: Vec<&str> = netlist.outputs().iter().map(|(_, n)| *n).collect();
    let in_map = port_map("input", f.input_names.as_ref(), f.n_in, &net_inputs, true)?;
    let out_map = port_map(
        "output",
        f.output_names.as_ref(),
        f.n_out,
        &net_outputs,
        false,
    )?;

    for (word, &expected) in f.rows.iter().enumerate() {
        let mut bits = vec![false; f.n_in];
        for (i, &pos) in in_map.iter().enumerate() {
            bits[pos] = word >> (f.n_in - 1 - i) & 1 == 1;
        }
        let outs = netlist
            .eval_outputs(&bits)
            .expect("input arity matched above");
        let actual = out_map
            .iter()
            .fold(0u64, |acc, &pos| acc << 1 | outs[pos] as u64);
        if actual != expected {
            return Ok(Realization::Fail(RealizationFailure::FunctionMismatch {
                input: word as u64,
                expected,
                actual,
            }));
        }
    }

    let bounds = analyze_bounds(f);
    let metrics = netlist.metrics();
    if metrics.garbage_outputs < bounds.min_garbage {
        return Ok(Realization::Fail(RealizationFailure::TooFewGarbage {
            garbage: metrics.garbage_outputs,
            bound: bounds.min_garbage,
        }));
    }
    if metrics.constant_inputs < bounds.min_constant_inputs {
        return Ok(Realization::Fail(RealizationFailure::TooFewConstants {
            constants: metrics.constant_inputs,
            bound: bounds.min_constant_inputs,
        }));
    }
    Ok(Realization::Pass {
        garbage_tight: metrics.garbage_outputs == bounds.min_garbage,
        constants_tight: metrics.constant_inputs == bounds.min_constant_inputs,
    })
}

//! Closed-form worst-case delay model for carry-skip adders, in gate delays.
//!
//! Two evaluation modes exist for each total-delay expression:
//! [`DelayMode::Exact`] keeps the `⌈log₂B⌉` AND-tree term and
//! [`DelayMode::Approx`] replaces it by `B/2`, which is what the closed-form
//! optima are derived from. The real-valued optima use exact `√3` constants;
//! the rounded 1.73 / 3.47 figures do not reproduce the N = 4096 row of the
//! reference table.

use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DelayError {
    #[error("{0}")]
    Domain(String),
}

fn domain(msg: impl Into<String>) -> DelayError {
    DelayError::Domain(msg.into())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DelayMode {
    Exact,
    Approx,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    Fixed,
    Variable,
}

/// `⌈log₂x⌉` for `x ≥ 1`, exact for integral `x`.
pub fn ceil_log2(x: f64) -> f64 {
    if x.fract() == 0.0 && x <= u64::MAX as f64 {
        let n = x as u64;
        if n <= 1 {
            0.0
        } else {
            (u64::BITS - (n - 1).leading_zeros()) as f64
        }
    } else {
        x.log2().ceil()
    }
}

/// Carry-out delay of a `B`-bit block through its ripple chain.
pub fn d_ripple(block: f64) -> f64 {
    block + 1.0
}

/// Carry-out delay of a `B`-bit block through its skip path.
pub fn d_skip(block: f64) -> f64 {
    ceil_log2(block) + 3.0
}

/// Worst-case delay of an `N`-bit adder with fixed block size `B`.
///
/// `N/B` is real-valued here; a non-dividing `B` is allowed.
pub fn t_fixed(bits: f64, block: f64, mode: DelayMode) -> Result<f64, DelayError> {
    if block <= 0.0 || bits <= 0.0 {
        return Err(domain(format!(
            "need N > 0 and B > 0 (N={bits}, B={block})"
        )));
    }
    match mode {
        DelayMode::Exact => {
            if bits / block < 2.0 {
                return Err(domain(format!(
                    "exact fixed-block delay needs N/B >= 2 (N={bits}, B={block})"
                )));
            }
            Ok(2.0 * d_ripple(block) + (bits / block - 2.0) * d_skip(block))
        }
        DelayMode::Approx => Ok(block + bits / 2.0 + 3.0 * bits / block - 4.0),
    }
}

/// Real block size minimizing the approximate fixed-block delay: `√(3N)`.
pub fn b_opt(bits: f64) -> f64 {
    (3.0 * bits).sqrt()
}

/// Approximate fixed-block delay at [`b_opt`]: `N/2 + 2√3·√N − 4`.
pub fn t_fixed_opt(bits: f64) -> f64 {
    bits / 2.0 + 2.0 * 3f64.sqrt() * bits.sqrt() - 4.0
}

/// End-block size `b = N/t − t/4 + 1/2` of a variable-block plan.
pub fn b_variable(bits: f64, blocks: f64) -> f64 {
    bits / blocks - blocks / 4.0 + 0.5
}

fn check_blocks(blocks: u64) -> Result<(), DelayError> {
    if blocks < 2 || !blocks.is_multiple_of(2) {
        return Err(domain(format!(
            "block count t must be even and >= 2 (t={blocks})"
        )));
    }
    Ok(())
}

/// Worst-case delay of the variable-block adder with `t` blocks.
///
/// Exact mode sums `⌈log₂k⌉ + 3` over the intermediate block sizes, with a
/// fractional `b` floored for the summation bounds only. Approx mode is the
/// collected form `9t/4 − 5/2 + 3N/t + N/2`.
pub fn t_variable(bits: f64, blocks: u64, mode: DelayMode) -> Result<f64, DelayError> {
    check_blocks(blocks)?;
    let b = b_variable(bits, blocks as f64);
    if b < 1.0 {
        return Err(domain(format!(
            "end-block size b = {b:.4} < 1 for N={bits}, t={blocks}"
        )));
    }
    let t = blocks as f64;
    Ok(match mode {
        DelayMode::Exact => {
            let lo = b.floor() as u64;
            let skips: f64 = (lo + 1..lo + blocks / 2).map(|k| d_skip(k as f64)).sum();
            2.0 * (b + 1.0) + 2.0 * skips
        }
        DelayMode::Approx => 9.0 * t / 4.0 - 2.5 + 3.0 * bits / t + bits / 2.0,
    })
}

/// The variable-block delay written in `t` and `b` before substituting `b`:
/// `t²/8 + 11t/4 + bt/2 + 3b − 4`.
pub fn t_variable_in_tb(blocks: f64, b: f64) -> f64 {
    blocks * blocks / 8.0 + 11.0 * blocks / 4.0 + b * blocks / 2.0 + 3.0 * b - 4.0
}

/// Real block count minimizing the approximate variable-block delay:
/// `(2/3)·√3·√N`.
pub fn t_opt(bits: f64) -> f64 {
    2.0 / 3.0 * 3f64.sqrt() * bits.sqrt()
}

/// Approximate variable-block delay at [`t_opt`]: `N/2 + 3√3·√N − 5/2`.
pub fn t_variable_opt_consistent(bits: f64) -> f64 {
    bits / 2.0 + 3.0 * 3f64.sqrt() * bits.sqrt() - 2.5
}

/// The published closed form `N/2 + √3·√N − 5/2`.
pub fn t_variable_opt_published(bits: f64) -> f64 {
    bits / 2.0 + 3f64.sqrt() * bits.sqrt() - 2.5
}

pub const FLAG_END_BLOCK: &str =
    "b = N/t - t/4 + 1/2 is used; the published end-block formula has N/2 in place of N/t, \
which does not reproduce the collected delay 9t/4 - 5/2 + 3N/t + N/2";
pub const FLAG_OPTIMUM_GAP: &str = "T_variable_opt_published (N/2 + sqrt3*sqrtN - 5/2) is not the minimum of \
9t/4 - 5/2 + 3N/t + N/2; evaluating that at t_opt gives T_variable_opt_consistent (N/2 + 3*sqrt3*sqrtN - 5/2), \
2*sqrt3*sqrtN larger";
pub const FLAG_FRACTIONAL_B: &str = "b is fractional; floor(b) bounds the exact skip-delay sum";

/// Named delay values plus discrepancy notices.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct DelayReport {
    pub values: Vec<(String, f64)>,
    pub flags: Vec<String>,
}

impl DelayReport {
    pub fn push(&mut self, name: &str, value: f64) {
        self.values.push((name.to_string(), value));
    }

    pub fn flag(&mut self, text: &str) {
        if !self.flags.iter().any(|f| f == text) {
            self.flags.push(text.to_string());
        }
    }

    pub fn get(&self, name: &str) -> Option<f64> {
        self.values.iter().find(|(n, _)| n == name).map(|(_, v)| *v)
    }
}

impl fmt::Display for DelayReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (name, value) in &self.values {
            writeln!(f, "{name}={}", round_half_up(*value))?;
        }
        for flag in &self.flags {
            writeln!(f, "flag: {flag}")?;
        }
        Ok(())
    }
}

/// Report for the variable-block adder with `t` blocks.
pub fn variable_report(bits: f64, blocks: u64, mode: DelayMode) -> Result<DelayReport, DelayError> {
    let value = t_variable(bits, blocks, mode)?;
    let b = b_variable(bits, blocks as f64);
    let mut report = DelayReport::default();
    report.push("b", b);
    report.push("T_variable", value);
    report.flag(FLAG_END_BLOCK);
    if mode == DelayMode::Exact && b.fract() != 0.0 {
        report.flag(FLAG_FRACTIONAL_B);
    }
    Ok(report)
}

/// Analytic optimum of a family.
pub fn optimum_report(bits: f64, family: Family) -> DelayReport {
    let mut report = DelayReport::default();
    match family {
        Family::Fixed => {
            report.push("B_opt", b_opt(bits));
            report.push("T_fixed_opt", t_fixed_opt(bits));
        }
        Family::Variable => {
            let t = t_opt(bits);
            report.push("t_opt", t);
            report.push("b", b_variable(bits, t));
            report.push("T_variable_opt_consistent", t_variable_opt_consistent(bits));
            report.push("T_variable_opt_published", t_variable_opt_published(bits));
            report.flag(FLAG_END_BLOCK);
            report.flag(FLAG_OPTIMUM_GAP);
        }
    }
    report
}

/// Formats with two decimals, rounding halves up.
pub fn round_half_up(value: f64) -> String {
    let scaled = (value * 100.0).round() + 0.0;
    format!("{:.2}", scaled / 100.0)
}

/// Optimal fixed-block delay for each `N`.
pub fn table3(sizes: &[u64]) -> Vec<(u64, f64)> {
    sizes.iter().map(|&n| (n, t_fixed_opt(n as f64))).collect()
}

pub const TABLE3_HEADER: &str = "N,T_fixed_peres";

pub fn table3_csv(rows: &[(u64, f64)]) -> String {
    let mut out = String::from(TABLE3_HEADER);
    out.push('\n');
    for (n, t) in rows {
        out.push_str(&format!("{n},{}\n", round_half_up(*t)));
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiscreteOptimum {
    /// Block size `B` (fixed) or block count `t` (variable).
    pub parameter: u64,
    pub delay: f64,
}

/// Brute-force scan of the exact delay over integer parameters.
///
/// Fixed: every `B` with `N/B ≥ 2`. Variable: every even `t` with end-block
/// size `b ≥ 1`. Ties go to the smaller parameter.
pub fn discrete_optimize(bits: u64, family: Family) -> Result<DiscreteOptimum, DelayError> {
    if bits < 4 {
        return Err(domain(format!(
            "discrete optimization needs N >= 4 (N={bits})"
        )));
    }
    let n = bits as f64;
    let candidates: Vec<(u64, f64)> = match family {
        Family::Fixed => (1..=bits / 2)
            .map(|b| Ok((b, t_fixed(n, b as f64, DelayMode::Exact)?)))
            .collect::<Result<_, DelayError>>()?,
        Family::Variable => (1..)
            .map(|h| 2 * h)
            .take_while(|&t| t <= bits && b_variable(n, t as f64) >= 1.0)
            .map(|t| Ok((t, t_variable(n, t, DelayMode::Exact)?)))
            .collect::<Result<_, DelayError>>()?,
    };
    candidates
        .into_iter()
        .fold(None, |best: Option<(u64, f64)>, (p, d)| match best {
            Some((_, bd)) if bd <= d => best,
            _ => Some((p, d)),
        })
        .map(|(parameter, delay)| DiscreteOptimum { parameter, delay })
        .ok_or_else(|| domain(format!("no feasible parameter for N={bits}")))
}

//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use revskip::adders::{
    and_tree, carry_skip_block, check_adder, fixed_block_adder, peres_full_adder, ripple_adder,
};
use revskip::bounds::{analyze_bounds, verify_realization, FunctionTable, Realization};
use revskip::delay::{
    b_opt, b_variable, discrete_optimize, t_fixed, t_fixed_opt, t_variable, t_variable_in_tb,
    t_variable_opt_consistent, t_variable_opt_published, table3, DelayMode, Family,
    FLAG_OPTIMUM_GAP,
};
use revskip::gate::ClassicalCost;
use revskip::netlist::{CheckMode, Equivalence, Lcg64};
use revskip::Netlist;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn table3_rows() -> Outcome {
    let sizes = [4, 8, 16, 32, 64, 128, 256, 512, 1024, 2048, 4096];
    let expected = [
        4.93, 9.80, 17.86, 31.60, 55.71, 99.19, 179.43, 330.38, 618.85, 1176.77, 2265.70,
    ];
    let start = Instant::now();
    let rows = table3(&sizes);
    let elapsed = start.elapsed();
    let mut worst = 0.0f64;
    for ((n, got), want) in rows.iter().zip(expected) {
        let delta = (got - want).abs();
        worst = worst.max(delta);
        ensure(delta <= 0.01, || {
            format!("N={n}: got {got:.4}, want {want}")
        })?;
    }
    ensure(rows.len() == sizes.len(), || format!("{} rows", rows.len()))?;
    ensure(elapsed < Duration::from_secs(1), || {
        format!("took {elapsed:?}")
    })?;
    Ok(format!("11 rows, max |delta| {worst:.4}, {elapsed:?}"))
}

fn full_adder_costs() -> Outcome {
    let m = peres_full_adder().metrics();
    let got = (
        m.gate_count,
        m.garbage_outputs,
        m.constant_inputs,
        m.quantum_cost,
    );
    ensure(got == (2, 2, 1, Some(8)), || {
        format!("(gates, garbage, constants, qcost) = {got:?}")
    })?;
    Ok("gates=2 garbage=2 constants=1 qcost=8".into())
}

fn full_adder_timing() -> Outcome {
    let m = peres_full_adder().metrics();
    let want = ClassicalCost {
        xor: 4,
        and: 2,
        not: 0,
    };
    ensure(m.depth == 2, || format!("depth {}", m.depth))?;
    ensure(m.classical_cost == Some(want), || {
        format!("classical {:?}", m.classical_cost)
    })?;
    Ok("depth=2 classical=(4,2,0)".into())
}

fn exhaustive_adders() -> Outcome {
    let suites: Vec<(&str, Netlist, usize)> = vec![
        ("peres_full_adder", peres_full_adder(), 1),
        (
            "ripple_adder(8)",
            ripple_adder(8).map_err(|e| e.to_string())?,
            8,
        ),
        (
            "carry_skip_block(4)",
            carry_skip_block(4).map_err(|e| e.to_string())?,
            4,
        ),
        (
            "fixed_block_adder(8,4)",
            fixed_block_adder(8, 4).map_err(|e| e.to_string())?,
            8,
        ),
    ];
    let mut summary = Vec::new();
    for (name, netlist, bits) in suites {
        let start = Instant::now();
        let result =
            check_adder(&netlist, bits, CheckMode::Exhaustive).map_err(|e| e.to_string())?;
        let elapsed = start.elapsed();
        let want = 1u64 << (2 * bits + 1);
        match result {
            Equivalence::Pass { cases } if cases == want => {}
            other => return Err(format!("{name}: {other:?}")),
        }
        ensure(elapsed < Duration::from_secs(10), || {
            format!("{name} took {elapsed:?}")
        })?;
        summary.push(format!("{name} {want} cases {elapsed:.0?}"));
    }
    Ok(summary.join(", "))
}

fn block_arrivals() -> Outcome {
    for block in [2usize, 4, 8] {
        let t = carry_skip_block(block)
            .map_err(|e| e.to_string())?
            .arrival_times();
        let ripple = t.mark("C_ripple").ok_or("no C_ripple mark")?;
        let and = t.mark("P_block").ok_or("no P_block mark")?;
        let log = (block as f64).log2().ceil() as u32;
        ensure(ripple as usize == block + 1, || {
            format!("B={block}: C_ripple at {ripple}")
        })?;
        ensure(and + 1 == log + 3, || {
            format!("B={block}: P_block at {and}")
        })?;
    }
    Ok("B=2,4,8: C_ripple=B+1, P_block+1=ceil(log2 B)+3".into())
}

fn gate_counts() -> Outcome {
    for fan_in in 2..=16 {
        let n = and_tree(fan_in)
            .map_err(|e| e.to_string())?
            .metrics()
            .gate_count;
        ensure(n == fan_in - 1, || {
            format!("and_tree({fan_in}) has {n} gates")
        })?;
    }
    for block in 1..=16 {
        let m = carry_skip_block(block)
            .map_err(|e| e.to_string())?
            .metrics();
        let kind = |k: &str| m.gate_count_by_kind.get(k).copied().unwrap_or(0);
        let got = (
            kind("peres"),
            kind("fredkin"),
            kind("feynman"),
            m.gate_count,
        );
        let want = (3 * block - 1, 1, 1, 3 * block + 1);
        ensure(got == want, || {
            format!("carry_skip_block({block}): (peres, fredkin, feynman, total) = {got:?}")
        })?;
    }
    Ok("and_tree B-1 for B=2..16; block 3B-1 peres + fredkin + feynman = 3B+1".into())
}

fn garbage_bounds() -> Outcome {
    let f = FunctionTable::full_adder();
    let r = analyze_bounds(&f);
    let got = (r.mu, r.min_garbage, r.min_constant_inputs);
    ensure(got == (3, 2, 1), || {
        format!("(mu, garbage, constants) = {got:?}")
    })?;
    match verify_realization(&f, &peres_full_adder()).map_err(|e| e.to_string())? {
        Realization::Pass {
            garbage_tight: true,
            constants_tight: true,
        } => {}
        other => return Err(format!("realization: {other:?}")),
    }
    Ok("mu=3 min_garbage=2 min_constant_inputs=1, realization tight".into())
}

// Collected variable-block delay written out independently of the library.
fn collected_variable(n: f64, t: f64) -> f64 {
    9.0 * t / 4.0 - 5.0 / 2.0 + 3.0 * n / t + n / 2.0
}

fn equation_consistency() -> Outcome {
    let mut checked = 0;
    for n in [24.0, 48.0, 96.0, 1024.0] {
        for t in (2..=64).step_by(2) {
            let tf = t as f64;
            let in_tb = t_variable_in_tb(tf, b_variable(n, tf));
            let collected = collected_variable(n, tf);
            ensure((in_tb - collected).abs() <= 1e-9, || {
                format!("N={n} t={t}: {in_tb} vs {collected}")
            })?;
            if let Ok(lib) = t_variable(n, t, DelayMode::Approx) {
                ensure((lib - collected).abs() <= 1e-9, || {
                    format!("N={n} t={t}: approx {lib}")
                })?;
            }
            checked += 1;
        }
    }
    for n in [8.0, 16.0, 64.0, 1024.0] {
        for block in [2.0, 4.0] {
            let exact = t_fixed(n, block, DelayMode::Exact).map_err(|e| e.to_string())?;
            let approx = t_fixed(n, block, DelayMode::Approx).map_err(|e| e.to_string())?;
            ensure((exact - approx).abs() <= 1e-9, || {
                format!("N={n} B={block}: {exact} vs {approx}")
            })?;
        }
    }
    let mut rng = Lcg64::new(42);
    for _ in 0..100 {
        let n = f64::from(4 + rng.next_u32() % 4093);
        let at_opt = t_fixed(n, b_opt(n), DelayMode::Approx).map_err(|e| e.to_string())?;
        let closed = n / 2.0 + 2.0 * 3f64.sqrt() * n.sqrt() - 4.0;
        ensure(
            (at_opt - closed).abs() <= 1e-9 && (t_fixed_opt(n) - closed).abs() <= 1e-9,
            || format!("N={n}: {at_opt} vs {closed}"),
        )?;
    }
    Ok(format!(
        "{checked} (N,t) pairs, exact=approx at B=2,4, 100 random N at sqrt(3N)"
    ))
}

fn optimum_gap() -> Outcome {
    for n in [12.0f64, 48.0, 300.0] {
        let gap = t_variable_opt_consistent(n) - t_variable_opt_published(n);
        let want = 2.0 * 3f64.sqrt() * n.sqrt();
        ensure((gap - want).abs() <= 1e-9, || {
            format!("N={n}: gap {gap} vs {want}")
        })?;

        let bits = n.to_string();
        let mut out = Vec::new();
        let mut err = Vec::new();
        let args = [
            "revskip", "optimize", "--bits", &bits, "--family", "variable",
        ];
        let code = revskip::cli::run(args, &mut out, &mut err);
        let out = String::from_utf8_lossy(&out);
        ensure(code == 0, || {
            format!("N={n}: exit {code}: {}", String::from_utf8_lossy(&err))
        })?;
        for needle in [
            format!(
                "T_variable_opt_consistent={:.2}",
                t_variable_opt_consistent(n)
            ),
            format!(
                "T_variable_opt_published={:.2}",
                t_variable_opt_published(n)
            ),
            FLAG_OPTIMUM_GAP.to_string(),
        ] {
            ensure(out.contains(&needle), || {
                format!("N={n}: output lacks {needle:?}")
            })?;
        }
    }
    Ok("gap = 2*sqrt3*sqrtN for N=12,48,300; both values and flag printed".into())
}

fn discrete_optima() -> Outcome {
    let mut summary = Vec::new();
    let mut failures = Vec::new();
    for n in [16u64, 64, 256] {
        let nf = n as f64;
        let opt = discrete_optimize(n, Family::Fixed).map_err(|e| e.to_string())?;
        let analytic = b_opt(nf);
        let rounded = analytic.round();
        let at_rounded = t_fixed(nf, rounded, DelayMode::Exact).map_err(|e| e.to_string())?;
        let distance = (opt.parameter as f64 - analytic).abs();
        let line = format!(
            "N={n}: B={} T={:.2}, sqrt(3N)={analytic:.2}, T(round)={at_rounded:.2}",
            opt.parameter, opt.delay
        );
        if distance > 3.0 {
            failures.push(format!("{line}, |B - sqrt(3N)| = {distance:.2} > 3"));
        } else if opt.delay > at_rounded {
            failures.push(format!("{line}, worse than round(sqrt(3N))"));
        } else {
            summary.push(line);
        }
    }
    if failures.is_empty() {
        Ok(summary.join("; "))
    } else {
        Err(failures.join("; "))
    }
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("table3 fixed-block delays", table3_rows),
        ("full adder gate/garbage/constant/qcost", full_adder_costs),
        ("full adder depth and classical cost", full_adder_timing),
        ("exhaustive adder equivalence", exhaustive_adders),
        ("block ripple and skip arrivals", block_arrivals),
        ("and-tree and block gate counts", gate_counts),
        ("full adder garbage and constant bounds", garbage_bounds),
        ("delay equation consistency", equation_consistency),
        ("variable optimum discrepancy", optimum_gap),
        ("discrete vs analytic fixed optimum", discrete_optima),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("criterion {}: PASS {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {}: FAIL {name}: {detail}", i + 1);
            }
        }
    }
    println!("{} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

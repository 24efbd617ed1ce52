//! `revskip` command-line front end.
//!
//! Exit codes: 0 on success, 1 on usage or validation errors, 2 when
//! `verify` or `bounds --check` finds a genuine mismatch.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{ArgGroup, Parser, Subcommand, ValueEnum};

use crate::adders::{self, BlockPlan};
use crate::bounds::{analyze_bounds, verify_realization, FunctionTable, Realization};
use crate::delay::{self, DelayMode, DelayReport, Family};
use crate::gate::{make_named_gate, word_to_bits};
use crate::netlist::{CheckMode, Equivalence, Metrics, Netlist};

#[derive(Debug, Parser)]
#[command(
    name = "revskip",
    version,
    about = "Reversible Peres-gate adders and carry-skip delay analysis"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Inspect a builtin gate.
    Gate {
        #[command(subcommand)]
        action: GateAction,
    },
    /// Simulate a netlist on one input vector.
    Sim {
        #[arg(long)]
        netlist: PathBuf,
        /// Primary-input bits in declaration order.
        #[arg(long)]
        inputs: String,
    },
    /// Print the full truth table of a netlist in ftab format.
    Truthtable {
        #[arg(long)]
        netlist: PathBuf,
    },
    /// Gate count, cost, garbage, constants and depth.
    Metrics {
        #[arg(long)]
        netlist: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Generate an adder netlist in RNL format.
    Build {
        #[arg(long, value_enum)]
        kind: Kind,
        #[arg(long)]
        bits: Option<usize>,
        #[arg(long)]
        block: Option<usize>,
        #[arg(long)]
        blocks: Option<usize>,
        /// Output file; standard output when omitted.
        #[arg(short = 'o', long = "output")]
        output: Option<PathBuf>,
    },
    /// Check a netlist against a reference function.
    #[command(group(ArgGroup::new("mode").required(true).args(["exhaustive", "random"])))]
    Verify {
        #[arg(long)]
        netlist: PathBuf,
        #[arg(long, value_enum)]
        oracle: OracleKind,
        #[arg(long)]
        bits: usize,
        #[arg(long)]
        exhaustive: bool,
        /// Number of random samples.
        #[arg(long)]
        random: Option<u64>,
        #[arg(long, default_value_t = 42)]
        seed: u64,
    },
    /// Evaluate one delay expression.
    Delay {
        #[arg(long, value_enum)]
        model: Model,
        #[arg(long)]
        bits: Option<f64>,
        #[arg(long)]
        block: Option<f64>,
        #[arg(long)]
        blocks: Option<u64>,
    },
    /// Optimal fixed-block delay for a list of adder widths.
    Table3 {
        #[arg(long, value_delimiter = ',', required = true)]
        sizes: Vec<u64>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Analytic (and optionally brute-force) optimum block parameters.
    Optimize {
        #[arg(long)]
        bits: u64,
        #[arg(long, value_enum)]
        family: FamilyArg,
        #[arg(long)]
        discrete: bool,
    },
    /// Garbage and constant-input lower bounds of a function table.
    Bounds {
        #[arg(long)]
        ftab: PathBuf,
        /// Netlist to check against the table and the bounds.
        #[arg(long)]
        check: Option<PathBuf>,
    },
}

#[derive(Debug, Subcommand)]
enum GateAction {
    /// Print the truth table of a builtin gate.
    Truth {
        #[arg(long)]
        gate: String,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Csv,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Kind {
    Fulladder,
    Ripple,
    SkipFixed,
    SkipVariable,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum OracleKind {
    Adder,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Model {
    Ripple,
    Skip,
    Fixed,
    FixedApprox,
    Variable,
    VariableApprox,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FamilyArg {
    Fixed,
    Variable,
}

/// An error that maps to exit code 1.
struct Failure(String);

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure(e.to_string())
    }
}

type CmdResult = Result<i32, Failure>;

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    0
                }
                _ => {
                    let _ = write!(err, "{e}");
                    1
                }
            };
        }
    };
    match dispatch(cli.command, out) {
        Ok(code) => code,
        Err(Failure(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            1
        }
    }
}

fn read_netlist(path: &PathBuf) -> Result<Netlist, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure(format!("{}: {e}", path.display())))?;
    Netlist::parse(&text).map_err(|e| Failure(format!("{}: {e}", path.display())))
}

fn need<T>(value: Option<T>, flag: &str, what: &str) -> Result<T, Failure> {
    value.ok_or_else(|| Failure(format!("{what} requires --{flag}")))
}

fn bits_string(bits: &[bool]) -> String {
    bits.iter().map(|&b| if b { '1' } else { '0' }).collect()
}

fn dispatch(command: Command, out: &mut dyn Write) -> CmdResult {
    match command {
        Command::Gate {
            action: GateAction::Truth { gate },
        } => {
            let g = make_named_gate(&gate)?;
            let table = g.truth_table()?;
            for (input, &output) in table.entries().iter().enumerate() {
                writeln!(
                    out,
                    "{} -> {}",
                    word_to_bits(input as u64, g.width()),
                    word_to_bits(output, g.width())
                )?;
            }
            writeln!(
                out,
                "bijective={} qcost={} classical=({})",
                table.is_bijective(),
                g.quantum_cost().map_or("unknown".into(), |c| c.to_string()),
                g.classical_cost().map_or("unknown".into(), |c| format!(
                    "{},{},{}",
                    c.xor, c.and, c.not
                )),
            )?;
            Ok(0)
        }
        Command::Sim { netlist, inputs } => {
            let n = read_netlist(&netlist)?;
            let bits = inputs
                .chars()
                .map(|c| match c {
                    '0' => Ok(false),
                    '1' => Ok(true),
                    other => Err(Failure(format!("invalid input bit `{other}`"))),
                })
                .collect::<Result<Vec<_>, _>>()?;
            let sim = n.simulate(&bits)?;
            for ((_, name), bit) in n.outputs().iter().zip(&sim.outputs) {
                writeln!(out, "{name}={}", *bit as u8)?;
            }
            writeln!(out, "garbage={}", bits_string(&sim.garbage))?;
            Ok(0)
        }
        Command::Truthtable { netlist } => {
            let n = read_netlist(&netlist)?;
            let table = n.truth_table()?;
            let (ni, no) = (n.input_count(), n.output_count());
            writeln!(out, "ftab {ni} {no}")?;
            let names = |ports: Vec<(usize, &str)>| {
                ports.iter().map(|(_, n)| *n).collect::<Vec<_>>().join(" ")
            };
            writeln!(out, "inputs {}", names(n.inputs()))?;
            writeln!(out, "outputs {}", names(n.outputs()))?;
            for (input, &output) in table.iter().enumerate() {
                writeln!(
                    out,
                    "{} {}",
                    word_to_bits(input as u64, ni),
                    word_to_bits(output, no)
                )?;
            }
            Ok(0)
        }
        Command::Metrics { netlist, format } => {
            let m = read_netlist(&netlist)?.metrics();
            match format {
                Format::Text => writeln!(out, "{m}")?,
                Format::Csv => writeln!(out, "{}\n{}", Metrics::CSV_HEADER, m.csv_row())?,
            }
            Ok(0)
        }
        Command::Build {
            kind,
            bits,
            block,
            blocks,
            output,
        } => {
            let netlist = match kind {
                Kind::Fulladder => adders::peres_full_adder(),
                Kind::Ripple => adders::ripple_adder(need(bits, "bits", "ripple")?)?,
                Kind::SkipFixed => {
                    let n = need(bits, "bits", "skip-fixed")?;
                    adders::fixed_block_adder(n, block.unwrap_or(n))?
                }
                Kind::SkipVariable => adders::skip_adder(&BlockPlan::variable(
                    need(bits, "bits", "skip-variable")?,
                    need(blocks, "blocks", "skip-variable")?,
                )?)?,
            };
            let text = netlist.render();
            match output {
                Some(path) => fs::write(&path, text)
                    .map_err(|e| Failure(format!("{}: {e}", path.display())))?,
                None => out.write_all(text.as_bytes())?,
            }
            Ok(0)
        }
        Command::Verify {
            netlist,
            oracle: OracleKind::Adder,
            bits,
            exhaustive,
            random,
            seed,
        } => {
            let n = read_netlist(&netlist)?;
            let mode = match (exhaustive, random) {
                (true, _) => CheckMode::Exhaustive,
                (false, Some(count)) => CheckMode::Random { count, seed },
                (false, None) => return Err(Failure("need --exhaustive or --random".into())),
            };
            match adders::check_adder(&n, bits, mode)? {
                Equivalence::Pass { cases } => {
                    writeln!(out, "pass ({cases} cases)")?;
                    Ok(0)
                }
                Equivalence::Counterexample(c) => {
                    writeln!(
                        out,
                        "counterexample: inputs={} expected={} actual={}",
                        bits_string(&c.input),
                        bits_string(&c.expected),
                        bits_string(&c.actual)
                    )?;
                    Ok(2)
                }
            }
        }
        Command::Delay {
            model,
            bits,
            block,
            blocks,
        } => {
            let mut report = DelayReport::default();
            match model {
                Model::Ripple => {
                    report.push("d_ripple", delay::d_ripple(need(block, "block", "ripple")?))
                }
                Model::Skip => {
                    let b = need(block, "block", "skip")?;
                    if b < 1.0 {
                        return Err(Failure("block size must be >= 1".into()));
                    }
                    report.push("d_skip", delay::d_skip(b))
                }
                Model::Fixed | Model::FixedApprox => {
                    let mode = if matches!(model, Model::Fixed) {
                        DelayMode::Exact
                    } else {
                        DelayMode::Approx
                    };
                    let value = delay::t_fixed(
                        need(bits, "bits", "fixed")?,
                        need(block, "block", "fixed")?,
                        mode,
                    )?;
                    report.push("T_fixed", value);
                }
                Model::Variable | Model::VariableApprox => {
                    let mode = if matches!(model, Model::Variable) {
                        DelayMode::Exact
                    } else {
                        DelayMode::Approx
                    };
                    report = delay::variable_report(
                        need(bits, "bits", "variable")?,
                        need(blocks, "blocks", "variable")?,
                        mode,
                    )?;
                }
            }
            write!(out, "{report}")?;
            Ok(0)
        }
        Command::Table3 { sizes, format } => {
            let rows = delay::table3(&sizes);
            match format {
                Format::Csv => out.write_all(delay::table3_csv(&rows).as_bytes())?,
                Format::Text => {
                    writeln!(out, "{:>6}  {:>12}", "N", "T_fixed")?;
                    for (n, t) in rows {
                        writeln!(out, "{n:>6}  {:>12}", delay::round_half_up(t))?;
                    }
                }
            }
            Ok(0)
        }
        Command::Optimize {
            bits,
            family,
            discrete,
        } => {
            let family = match family {
                FamilyArg::Fixed => Family::Fixed,
                FamilyArg::Variable => Family::Variable,
            };
            let mut report = delay::optimum_report(bits as f64, family);
            if discrete {
                let best = delay::discrete_optimize(bits, family)?;
                let name = match family {
                    Family::Fixed => "discrete_B",
                    Family::Variable => "discrete_t",
                };
                report.push(name, best.parameter as f64);
                report.push("discrete_delay", best.delay);
            }
            write!(out, "{report}")?;
            Ok(0)
        }
        Command::Bounds { ftab, check } => {
            let text = fs::read_to_string(&ftab)
                .map_err(|e| Failure(format!("{}: {e}", ftab.display())))?;
            let table = FunctionTable::parse(&text)?;
            writeln!(out, "{}", analyze_bounds(&table))?;
            let Some(path) = check else {
                return Ok(0);
            };
            let n = read_netlist(&path)?;
            match verify_realization(&table, &n)? {
                Realization::Pass {
                    garbage_tight,
                    constants_tight,
                } => {
                    writeln!(out, "check=pass garbage_tight={garbage_tight} constants_tight={constants_tight}")?;
                    Ok(0)
                }
                Realization::Fail(reason) => {
                    writeln!(out, "check=fail {reason}")?;
                    Ok(2)
                }
            }
        }
    }
}

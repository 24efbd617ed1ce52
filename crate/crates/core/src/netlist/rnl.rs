//! The RNL text format.
//!
//! ```text
//! rnl 1
//! lines 3
//! in 0 A
//! in 1 B
//! const 2 0
//! gate peres 0 1 2
//! garbage 0
//! garbage 1
//! out 2 AND
//! ```
//!
//! `#` starts a comment. Sinks (`out`, `garbage`) follow all gates. A
//! `mark` labels the value of its line at the point where it appears in the
//! gate sequence.

use std::fmt::Write as _;
use std::str::FromStr;

use super::{LineSink, LineSource, Netlist, NetlistBuilder, NetlistError};
use crate::gate::GeneralizedSpec;

fn syntax(line: usize, message: impl Into<String>) -> NetlistError {
    NetlistError::Syntax {
        line,
        message: message.into(),
    }
}

fn parse_num<T: FromStr>(tok: &str, line: usize, what: &str) -> Result<T, NetlistError> {
    tok.parse()
        .map_err(|_| syntax(line, format!("invalid {what} `{tok}`")))
}

fn expect_args<'a>(
    toks: &'a [&'a str],
    count: usize,
    line: usize,
) -> Result<&'a [&'a str], NetlistError> {
    let args = &toks[1..];
    if args.len() != count {
        return Err(syntax(
            line,
            format!("`{}` takes {count} arguments, got {}", toks[0], args.len()),
        ));
    }
    Ok(args)
}

impl Netlist {
    pub fn parse(text: &str) -> Result<Netlist, NetlistError> {
        let mut builder: Option<NetlistBuilder> = None;
        let mut seen_header = false;
        let mut in_sinks = false;
        let mut last_line = 0;

        for (idx, raw) in text.lines().enumerate() {
            let lineno = idx + 1;
            last_line = lineno;
            let content = raw.split('#').next().unwrap_or("");
            let toks: Vec<&str> = content.split_whitespace().collect();
            if toks.is_empty() {
                continue;
            }
            if !seen_header {
                if toks != ["rnl", "1"] {
                    return Err(syntax(lineno, "expected header `rnl 1`"));
                }
                seen_header = true;
                continue;
            }
            if toks[0] == "lines" {
                if builder.is_some() {
                    return Err(syntax(lineno, "duplicate `lines` declaration"));
                }
                let args = expect_args(&toks, 1, lineno)?;
                builder = Some(NetlistBuilder::with_lines(parse_num(
                    args[0],
                    lineno,
                    "line count",
                )?));
                continue;
            }
            let b = builder
                .as_mut()
                .ok_or_else(|| syntax(lineno, "`lines` must precede other declarations"))?;
            let at = |e: NetlistError| e.at(lineno);

            match toks[0] {
                "defgate" => {
                    let args = expect_args(&toks, 4, lineno)?;
                    let k = parse_num(args[1], lineno, "gate width")?;
                    let spec = GeneralizedSpec::from_bitstrings(k, args[2], args[3])
                        .map_err(|e| at(e.into()))?;
                    b.define_gate(args[0], spec).map_err(at)?;
                }
                "in" => {
                    let args = expect_args(&toks, 2, lineno)?;
                    let index = parse_num(args[0], lineno, "line index")?;
                    b.declare_source(index, LineSource::Input(args[1].to_string()))
                        .map_err(at)?;
                }
                "const" => {
                    let args = expect_args(&toks, 2, lineno)?;
                    let index = parse_num(args[0], lineno, "line index")?;
                    let bit = match args[1] {
                        "0" => false,
                        "1" => true,
                        other => {
                            return Err(syntax(
                                lineno,
                                format!("constant must be 0 or 1, got `{other}`"),
                            ))
                        }
                    };
                    b.declare_source(index, LineSource::Constant(bit))
                        .map_err(at)?;
                }
                "gate" => {
                    if toks.len() < 2 {
                        return Err(syntax(lineno, "`gate` needs a gate name"));
                    }
                    if in_sinks {
                        return Err(syntax(lineno, "gate after output declarations"));
                    }
                    let operands = toks[2..]
                        .iter()
                        .map(|t| parse_num(t, lineno, "line index"))
                        .collect::<Result<Vec<usize>, _>>()?;
                    b.gate_by_name(toks[1], &operands).map_err(at)?;
                }
                "out" => {
                    let args = expect_args(&toks, 2, lineno)?;
                    let index = parse_num(args[0], lineno, "line index")?;
                    in_sinks = true;
                    b.declare_sink(index, LineSink::Output(args[1].to_string()))
                        .map_err(at)?;
                }
                "garbage" => {
                    let args = expect_args(&toks, 1, lineno)?;
                    let index = parse_num(args[0], lineno, "line index")?;
                    in_sinks = true;
                    b.declare_sink(index, LineSink::Garbage).map_err(at)?;
                }
                "mark" => {
                    let args = expect_args(&toks, 2, lineno)?;
                    let index = parse_num(args[0], lineno, "line index")?;
                    b.mark(index, args[1]).map_err(at)?;
                }
                other => return Err(syntax(lineno, format!("unknown directive `{other}`"))),
            }
        }

        if !seen_header {
            return Err(syntax(last_line.max(1), "missing header `rnl 1`"));
        }
        builder
            .ok_or_else(|| syntax(last_line, "missing `lines` declaration"))?
            .finish()
    }

    /// Serializes to RNL; [`Netlist::parse`] inverts this exactly.
    pub fn render(&self) -> String {
        let mut out = String::new();
        // Writing to a String cannot fail.
        let _ = writeln!(out, "rnl 1");
        let _ = writeln!(out, "lines {}", self.line_count);
        for g in &self.defgates {
            let spec = g.generalized_spec().expect("defgates are generalized");
            let _ = writeln!(
                out,
                "defgate {} {} {} {}",
                g.name(),
                spec.width(),
                spec.f_low_bits(),
                spec.f_high_bits()
            );
        }
        for (line, src) in &self.sources {
            match src {
                LineSource::Input(name) => {
                    let _ = writeln!(out, "in {line} {name}");
                }
                LineSource::Constant(bit) => {
                    let _ = writeln!(out, "const {line} {}", *bit as u8);
                }
            }
        }
        let mut marks = self.marks.iter().peekable();
        for (position, inst) in self.gates.iter().enumerate() {
            while let Some(m) = marks.next_if(|m| m.position == position) {
                let _ = writeln!(out, "mark {} {}", m.line, m.label);
            }
            let operands: Vec<String> = inst.operands.iter().map(|o| o.to_string()).collect();
            let _ = writeln!(out, "gate {} {}", inst.gate.name(), operands.join(" "));
        }
        for (line, sink) in &self.sinks {
            match sink {
                LineSink::Output(name) => {
                    let _ = writeln!(out, "out {line} {name}");
                }
                LineSink::Garbage => {
                    let _ = writeln!(out, "garbage {line}");
                }
            }
        }
        for m in marks {
            let _ = writeln!(out, "mark {} {}", m.line, m.label);
        }
        out
    }
}

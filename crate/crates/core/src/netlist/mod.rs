//! Fan-out-free reversible circuits.
//!
//! A [`Netlist`] is a set of indexed lines, each with exactly one source
//! (primary input or constant) and one sink (primary output or garbage),
//! and an ordered list of gate applications over those lines. A line carries
//! one value at a time; duplicating a signal needs an explicit copy gate.

mod equiv;
mod rnl;
mod sim;
mod timing;

use std::collections::HashSet;
use std::sync::Arc;

use thiserror::Error;

use crate::gate::{Builtin, Gate, GateError, GeneralizedSpec};

pub use equiv::{
    check_equivalence, CheckMode, Counterexample, Equivalence, FnOracle, Lcg64, Oracle,
};
pub use sim::{Simulation, MAX_EXHAUSTIVE_INPUTS};
pub use timing::{ArrivalMap, Metrics};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NetlistError {
    #[error("syntax error on line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("on line {line}: {source}")]
    At {
        line: usize,
        #[source]
        source: Box<NetlistError>,
    },
    #[error("line {0} already has a source")]
    DuplicateSource(usize),
    #[error("line {0} has no source")]
    MissingSource(usize),
    #[error("line {0} already has a sink")]
    DuplicateSink(usize),
    #[error("line {0} has no sink")]
    MissingSink(usize),
    #[error("line index {index} out of range (netlist has {line_count} lines)")]
    IndexOutOfRange { index: usize, line_count: usize },
    #[error("repeated operand {line} in gate {gate}")]
    RepeatedOperand { gate: String, line: usize },
    #[error("gate {gate} takes {expected} operands, got {got}")]
    OperandCount {
        gate: String,
        expected: usize,
        got: usize,
    },
    #[error("unknown gate name `{0}`")]
    UnknownGate(String),
    #[error("gate name `{0}` is already defined")]
    DuplicateGateName(String),
    #[error("signal name `{0}` is declared twice")]
    DuplicateName(String),
    #[error(transparent)]
    Gate(#[from] GateError),
    #[error("expected {expected} input bits, got {got}")]
    InputWidth { expected: usize, got: usize },
    #[error("{count} {what} exceeds the enumeration limit of {max}")]
    TooLarge {
        what: &'static str,
        count: usize,
        max: usize,
    },
    #[error(
        "oracle arity {oracle_inputs}→{oracle_outputs} does not match netlist {inputs}→{outputs}"
    )]
    ArityMismatch {
        inputs: usize,
        outputs: usize,
        oracle_inputs: usize,
        oracle_outputs: usize,
    },
}

impl NetlistError {
    fn at(self, line: usize) -> Self {
        match self {
            e @ (NetlistError::Syntax { .. } | NetlistError::At { .. }) => e,
            e => NetlistError::At {
                line,
                source: Box::new(e),
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LineSource {
    Input(String),
    Constant(bool),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LineSink {
    Output(String),
    Garbage,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GateInstance {
    pub gate: Arc<Gate>,
    pub operands: Vec<usize>,
}

/// A label attached to the value a line holds after the first `position`
/// gate applications.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mark {
    pub line: usize,
    pub label: String,
    pub position: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Netlist {
    line_count: usize,
    defgates: Vec<Arc<Gate>>,
    sources: Vec<(usize, LineSource)>,
    gates: Vec<GateInstance>,
    sinks: Vec<(usize, LineSink)>,
    marks: Vec<Mark>,
}

impl Netlist {
    pub fn line_count(&self) -> usize {
        self.line_count
    }

    pub fn gates(&self) -> &[GateInstance] {
        &self.gates
    }

    /// Generalized gate definitions, in definition order.
    pub fn defgates(&self) -> &[Arc<Gate>] {
        &self.defgates
    }

    /// Source declarations in declaration order.
    pub fn sources(&self) -> &[(usize, LineSource)] {
        &self.sources
    }

    /// Sink declarations in declaration order.
    pub fn sinks(&self) -> &[(usize, LineSink)] {
        &self.sinks
    }

    pub fn marks(&self) -> &[Mark] {
        &self.marks
    }

    /// Primary inputs as `(line, name)` in declaration order.
    pub fn inputs(&self) -> Vec<(usize, &str)> {
        self.sources
            .iter()
            .filter_map(|(line, src)| match src {
                LineSource::Input(name) => Some((*line, name.as_str())),
                LineSource::Constant(_) => None,
            })
            .collect()
    }

    /// Primary outputs as `(line, name)` in declaration order.
    pub fn outputs(&self) -> Vec<(usize, &str)> {
        self.sinks
            .iter()
            .filter_map(|(line, sink)| match sink {
                LineSink::Output(name) => Some((*line, name.as_str())),
                LineSink::Garbage => None,
            })
            .collect()
    }

    pub fn garbage_lines(&self) -> Vec<usize> {
        self.sinks
            .iter()
            .filter(|(_, sink)| *sink == LineSink::Garbage)
            .map(|(line, _)| *line)
            .collect()
    }

    pub fn constant_count(&self) -> usize {
        self.sources
            .iter()
            .filter(|(_, src)| matches!(src, LineSource::Constant(_)))
            .count()
    }

    pub fn input_count(&self) -> usize {
        self.sources.len() - self.constant_count()
    }

    pub fn output_count(&self) -> usize {
        self.sinks.len() - self.garbage_lines().len()
    }

    pub fn input_index(&self, name: &str) -> Option<usize> {
        self.inputs().iter().position(|(_, n)| *n == name)
    }

    pub fn output_index(&self, name: &str) -> Option<usize> {
        self.outputs().iter().position(|(_, n)| *n == name)
    }

    /// Marks carrying `label`, in declaration order.
    pub fn marks_labelled<'a>(&'a self, label: &'a str) -> impl Iterator<Item = &'a Mark> + 'a {
        self.marks.iter().filter(move |m| m.label == label)
    }

    /// Replaces the operands of gate `index`, revalidating the wiring.
    pub fn with_rewired_gate(
        &self,
        index: usize,
        operands: Vec<usize>,
    ) -> Result<Netlist, NetlistError> {
        let mut copy = self.clone();
        let inst = copy
            .gates
            .get_mut(index)
            .ok_or(NetlistError::IndexOutOfRange {
                index,
                line_count: self.gates.len(),
            })?;
        check_operands(inst.gate.as_ref(), &operands, self.line_count)?;
        inst.operands = operands;
        Ok(copy)
    }
}

fn check_line(index: usize, line_count: usize) -> Result<(), NetlistError> {
    if index < line_count {
        Ok(())
    } else {
        Err(NetlistError::IndexOutOfRange { index, line_count })
    }
}

fn check_operands(gate: &Gate, operands: &[usize], line_count: usize) -> Result<(), NetlistError> {
    if operands.len() != gate.width() {
        return Err(NetlistError::OperandCount {
            gate: gate.name().to_string(),
            expected: gate.width(),
            got: operands.len(),
        });
    }
    let mut seen = HashSet::new();
    for &line in operands {
        check_line(line, line_count)?;
        if !seen.insert(line) {
            return Err(NetlistError::RepeatedOperand {
                gate: gate.name().to_string(),
                line,
            });
        }
    }
    Ok(())
}

/// Incremental construction with validation on [`finish`](Self::finish).
///
/// Generators allocate lines on the fly with [`input`](Self::input) and
/// [`constant`](Self::constant); the RNL parser fixes the line count up
/// front and declares sources by index.
#[derive(Debug, Default, Clone)]
pub struct NetlistBuilder {
    line_count: usize,
    defgates: Vec<Arc<Gate>>,
    sources: Vec<(usize, LineSource)>,
    gates: Vec<GateInstance>,
    sinks: Vec<(usize, LineSink)>,
    marks: Vec<Mark>,
    source_set: HashSet<usize>,
    sink_set: HashSet<usize>,
}

impl NetlistBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_lines(line_count: usize) -> Self {
        Self {
            line_count,
            ..Self::default()
        }
    }

    pub fn line_count(&self) -> usize {
        self.line_count
    }

    pub fn gate_count(&self) -> usize {
        self.gates.len()
    }

    /// Allocates a fresh primary-input line.
    pub fn input(&mut self, name: impl Into<String>) -> usize {
        let line = self.line_count;
        self.line_count += 1;
        self.source_set.insert(line);
        self.sources.push((line, LineSource::Input(name.into())));
        line
    }

    /// Allocates a fresh constant line.
    pub fn constant(&mut self, bit: bool) -> usize {
        let line = self.line_count;
        self.line_count += 1;
        self.source_set.insert(line);
        self.sources.push((line, LineSource::Constant(bit)));
        line
    }

    pub fn declare_source(&mut self, line: usize, source: LineSource) -> Result<(), NetlistError> {
        check_line(line, self.line_count)?;
        if !self.source_set.insert(line) {
            return Err(NetlistError::DuplicateSource(line));
        }
        self.sources.push((line, source));
        Ok(())
    }

    pub fn declare_sink(&mut self, line: usize, sink: LineSink) -> Result<(), NetlistError> {
        check_line(line, self.line_count)?;
        if !self.sink_set.insert(line) {
            return Err(NetlistError::DuplicateSink(line));
        }
        self.sinks.push((line, sink));
        Ok(())
    }

    pub fn output(&mut self, line: usize, name: impl Into<String>) -> Result<(), NetlistError> {
        self.declare_sink(line, LineSink::Output(name.into()))
    }

    pub fn garbage(&mut self, line: usize) -> Result<(), NetlistError> {
        self.declare_sink(line, LineSink::Garbage)
    }

    /// Registers a generalized gate under `name` for later [`gate_by_name`](Self::gate_by_name).
    pub fn define_gate(&mut self, name: &str, spec: GeneralizedSpec) -> Result<(), NetlistError> {
        if name.parse::<Builtin>().is_ok() || self.defgates.iter().any(|g| g.name() == name) {
            return Err(NetlistError::DuplicateGateName(name.to_string()));
        }
        self.defgates.push(Arc::new(Gate::generalized(name, spec)));
        Ok(())
    }

    pub fn gate(&mut self, gate: Arc<Gate>, operands: &[usize]) -> Result<(), NetlistError> {
        check_operands(&gate, operands, self.line_count)?;
        self.gates.push(GateInstance {
            gate,
            operands: operands.to_vec(),
        });
        Ok(())
    }

    pub fn builtin(&mut self, kind: Builtin, operands: &[usize]) -> Result<(), NetlistError> {
        self.gate(Arc::new(Gate::builtin(kind)), operands)
    }

    pub fn gate_by_name(&mut self, name: &str, operands: &[usize]) -> Result<(), NetlistError> {
        let gate = match name.parse::<Builtin>() {
            Ok(kind) => Arc::new(Gate::builtin(kind)),
            Err(_) => self
                .defgates
                .iter()
                .find(|g| g.name() == name)
                .cloned()
                .ok_or_else(|| NetlistError::UnknownGate(name.to_string()))?,
        };
        self.gate(gate, operands)
    }

    /// Labels the value `line` holds after the gates added so far.
    pub fn mark(&mut self, line: usize, label: impl Into<String>) -> Result<(), NetlistError> {
        check_line(line, self.line_count)?;
        self.marks.push(Mark {
            line,
            label: label.into(),
            position: self.gates.len(),
        });
        Ok(())
    }

    pub fn finish(self) -> Result<Netlist, NetlistError> {
        for line in 0..self.line_count {
            if !self.source_set.contains(&line) {
                return Err(NetlistError::MissingSource(line));
            }
            if !self.sink_set.contains(&line) {
                return Err(NetlistError::MissingSink(line));
            }
        }
        let mut names = HashSet::new();
        let input_names = self.sources.iter().filter_map(|(_, s)| match s {
            LineSource::Input(n) => Some(n),
            LineSource::Constant(_) => None,
        });
        for name in input_names {
            if !names.insert(name) {
                return Err(NetlistError::DuplicateName(name.clone()));
            }
        }
        let mut names = HashSet::new();
        let output_names = self.sinks.iter().filter_map(|(_, s)| match s {
            LineSink::Output(n) => Some(n),
            LineSink::Garbage => None,
        });
        for name in output_names {
            if !names.insert(name) {
                return Err(NetlistError::DuplicateName(name.clone()));
            }
        }
        Ok(Netlist {
            line_count: self.line_count,
            defgates: self.defgates,
            sources: self.sources,
            gates: self.gates,
            sinks: self.sinks,
            marks: self.marks,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn width_condition_is_enforced() {
        let mut b = NetlistBuilder::new();
        let a = b.input("A");
        let c = b.constant(false);
        b.builtin(Builtin::Feynman, &[a, c]).unwrap();
        b.output(c, "copy").unwrap();
        assert_eq!(b.clone().finish(), Err(NetlistError::MissingSink(0)));
        b.output(a, "A").unwrap();
        let n = b.finish().unwrap();
        assert_eq!(n.input_count() + n.constant_count(), n.line_count());
        assert_eq!(n.output_count() + n.garbage_lines().len(), n.line_count());
    }

    #[test]
    fn operand_checks() {
        let mut b = NetlistBuilder::with_lines(3);
        assert!(matches!(
            b.builtin(Builtin::Peres, &[0, 0, 1]),
            Err(NetlistError::RepeatedOperand { line: 0, .. })
        ));
        assert!(matches!(
            b.builtin(Builtin::Peres, &[0, 1, 3]),
            Err(NetlistError::IndexOutOfRange {
                index: 3,
                line_count: 3
            })
        ));
        assert!(matches!(
            b.builtin(Builtin::Peres, &[0, 1]),
            Err(NetlistError::OperandCount {
                expected: 3,
                got: 2,
                ..
            })
        ));
        assert_eq!(
            b.gate_by_name("swap", &[0, 1]),
            Err(NetlistError::UnknownGate("swap".into()))
        );
    }

    #[test]
    fn duplicate_declarations() {
        let mut b = NetlistBuilder::with_lines(2);
        b.declare_source(0, LineSource::Input("A".into())).unwrap();
        assert_eq!(
            b.declare_source(0, LineSource::Constant(true)),
            Err(NetlistError::DuplicateSource(0))
        );
        b.declare_source(1, LineSource::Input("A".into())).unwrap();
        b.garbage(0).unwrap();
        assert_eq!(b.garbage(0), Err(NetlistError::DuplicateSink(0)));
        b.garbage(1).unwrap();
        assert_eq!(b.finish(), Err(NetlistError::DuplicateName("A".into())));
    }

    #[test]
    fn defgate_names_cannot_shadow_builtins() {
        let mut b = NetlistBuilder::with_lines(3);
        let spec = GeneralizedSpec::from_bitstrings(3, "01", "0001").unwrap();
        assert_eq!(
            b.define_gate("peres", spec.clone()),
            Err(NetlistError::DuplicateGateName("peres".into()))
        );
        b.define_gate("g", spec.clone()).unwrap();
        assert!(b.define_gate("g", spec).is_err());
        b.gate_by_name("g", &[0, 1, 2]).unwrap();
    }
}

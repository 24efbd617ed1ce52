//! Support-aware unit-delay timing and circuit metrics.
//!
//! Every gate costs one delay unit, but an output only waits for the inputs
//! in its support set: a Peres gate's P output is ready one unit after A,
//! whatever B and C are doing.

use std::collections::BTreeMap;
use std::fmt;

use super::Netlist;
use crate::gate::ClassicalCost;

/// Arrival times in gate delays. Sources arrive at time 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArrivalMap {
    line_times: Vec<u32>,
    gate_times: Vec<Vec<u32>>,
    mark_times: Vec<(String, usize, u32)>,
    depth: u32,
}

impl ArrivalMap {
    /// Time at which `line` holds its final value.
    pub fn line(&self, line: usize) -> u32 {
        self.line_times[line]
    }

    pub fn lines(&self) -> &[u32] {
        &self.line_times
    }

    /// Time at which output `port` of gate instance `gate` is ready.
    pub fn gate_output(&self, gate: usize, port: usize) -> u32 {
        self.gate_times[gate][port]
    }

    /// Time of the first mark labelled `label`.
    pub fn mark(&self, label: &str) -> Option<u32> {
        self.mark_times
            .iter()
            .find(|(l, _, _)| l == label)
            .map(|(_, _, t)| *t)
    }

    /// Times of every mark as `(label, line, time)`, in declaration order.
    pub fn marks(&self) -> &[(String, usize, u32)] {
        &self.mark_times
    }

    /// Latest primary-output arrival ("unit clock cycle").
    pub fn depth(&self) -> u32 {
        self.depth
    }
}

impl Netlist {
    pub fn arrival_times(&self) -> ArrivalMap {
        let mut times = vec![0u32; self.line_count];
        let mut gate_times = Vec::with_capacity(self.gates.len());
        let mut mark_times = Vec::with_capacity(self.marks.len());
        let mut marks = self.marks.iter().peekable();

        for (position, inst) in self.gates.iter().enumerate() {
            while let Some(m) = marks.next_if(|m| m.position == position) {
                mark_times.push((m.label.clone(), m.line, times[m.line]));
            }
            let ready: Vec<u32> = (0..inst.gate.width())
                .map(|port| {
                    1 + inst
                        .gate
                        .support(port)
                        .iter()
                        .map(|&p| times[inst.operands[p]])
                        .max()
                        .unwrap_or(0)
                })
                .collect();
            for (&line, &t) in inst.operands.iter().zip(&ready) {
                times[line] = t;
            }
            gate_times.push(ready);
        }
        for m in marks {
            mark_times.push((m.label.clone(), m.line, times[m.line]));
        }

        let depth = self
            .outputs()
            .iter()
            .map(|(line, _)| times[*line])
            .max()
            .unwrap_or(0);
        ArrivalMap {
            line_times: times,
            gate_times,
            mark_times,
            depth,
        }
    }

    pub fn metrics(&self) -> Metrics {
        let mut by_kind = BTreeMap::new();
        let mut quantum_cost = Some(0u64);
        let mut classical_cost = Some(ClassicalCost::default());
        for inst in &self.gates {
            *by_kind.entry(inst.gate.name().to_string()).or_insert(0) += 1;
            quantum_cost = quantum_cost
                .zip(inst.gate.quantum_cost())
                .map(|(a, b)| a + b as u64);
            classical_cost = classical_cost
                .zip(inst.gate.classical_cost())
                .map(|(a, b)| a + b);
        }
        let copies = self.marks_labelled("Cin_copy").count();
        let nominal_gate_count = (copies > 0).then(|| self.gates.len() - copies);
        Metrics {
            gate_count: self.gates.len(),
            gate_count_by_kind: by_kind,
            quantum_cost,
            classical_cost,
            primary_inputs: self.input_count(),
            primary_outputs: self.output_count(),
            constant_inputs: self.constant_count(),
            garbage_outputs: self.line_count - self.output_count(),
            width: self.line_count,
            depth: self.arrival_times().depth(),
            nominal_gate_count,
        }
    }
}

/// Cost and size figures for a netlist.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Metrics {
    pub gate_count: usize,
    pub gate_count_by_kind: BTreeMap<String, usize>,
    /// Unknown if any gate's cost is unknown.
    pub quantum_cost: Option<u64>,
    pub classical_cost: Option<ClassicalCost>,
    pub primary_inputs: usize,
    pub primary_outputs: usize,
    pub constant_inputs: usize,
    pub garbage_outputs: usize,
    pub width: usize,
    pub depth: u32,
    /// Gate count without the carry-in copy gates of carry-skip blocks,
    /// i.e. the count the "3B gates per block" convention gives. Present
    /// only for netlists carrying `Cin_copy` marks.
    pub nominal_gate_count: Option<usize>,
}

fn opt<T: fmt::Display>(v: Option<T>) -> String {
    v.map_or_else(|| "unknown".to_string(), |v| v.to_string())
}

impl Metrics {
    pub const CSV_HEADER: &'static str =
        "gates,garbage,constants,qcost,depth,width,xor,and,not,nominal_gates";

    pub fn csv_row(&self) -> String {
        let (xor, and, not) = match self.classical_cost {
            Some(c) => (c.xor.to_string(), c.and.to_string(), c.not.to_string()),
            None => ("unknown".into(), "unknown".into(), "unknown".into()),
        };
        format!(
            "{},{},{},{},{},{},{},{},{},{}",
            self.gate_count,
            self.garbage_outputs,
            self.constant_inputs,
            opt(self.quantum_cost),
            self.depth,
            self.width,
            xor,
            and,
            not,
            self.nominal_gate_count
                .map_or(String::new(), |c| c.to_string()),
        )
    }
}

impl fmt::Display for Metrics {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "gates={} garbage={} constants={} qcost={} depth={} width={} classical={}",
            self.gate_count,
            self.garbage_outputs,
            self.constant_inputs,
            opt(self.quantum_cost),
            self.depth,
            self.width,
            match self.classical_cost {
                Some(c) => format!("({},{},{})", c.xor, c.and, c.not),
                None => "unknown".into(),
            }
        )?;
        let kinds: Vec<String> = self
            .gate_count_by_kind
            .iter()
            .map(|(k, n)| format!("{k}:{n}"))
            .collect();
        write!(f, " kinds={}", kinds.join(","))?;
        if let Some(nominal) = self.nominal_gate_count {
            write!(f, " nominal_gates={nominal}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use crate::gate::Builtin;
    use crate::netlist::NetlistBuilder;

    #[test]
    fn single_inverter() {
        let mut b = NetlistBuilder::new();
        let a = b.input("A");
        b.builtin(Builtin::Not, &[a]).unwrap();
        b.output(a, "Y").unwrap();
        let m = b.finish().unwrap().metrics();
        assert_eq!(m.gate_count, 1);
        assert_eq!(m.quantum_cost, Some(0));
        assert_eq!(m.depth, 1);
        assert_eq!(m.garbage_outputs, 0);
    }

    #[test]
    fn supports_shorten_paths() {
        // P of the second Peres depends only on its A operand.
        let mut b = NetlistBuilder::new();
        let x = b.input("x");
        let y = b.input("y");
        let z = b.input("z");
        b.builtin(Builtin::Peres, &[x, y, z]).unwrap();
        b.builtin(Builtin::Peres, &[z, x, y]).unwrap();
        b.builtin(Builtin::Peres, &[x, y, z]).unwrap();
        for l in [x, y, z] {
            b.garbage(l).unwrap();
        }
        let t = b.finish().unwrap().arrival_times();
        assert_eq!(t.gate_output(0, 0), 1);
        assert_eq!(t.gate_output(1, 0), 2);
        assert_eq!(t.gate_output(1, 1), 2);
        assert_eq!(t.gate_output(2, 0), 3);
        assert_eq!(t.lines(), &[3, 3, 3]);
        assert_eq!(t.depth(), 0);
    }

    #[test]
    fn unknown_cost_propagates() {
        use crate::gate::GeneralizedSpec;
        let mut b = NetlistBuilder::with_lines(3);
        b.define_gate(
            "g",
            GeneralizedSpec::from_bitstrings(3, "11", "0110").unwrap(),
        )
        .unwrap();
        for i in 0..3 {
            b.declare_source(i, crate::netlist::LineSource::Input(format!("x{i}")))
                .unwrap();
        }
        b.gate_by_name("g", &[0, 1, 2]).unwrap();
        b.builtin(Builtin::Peres, &[0, 1, 2]).unwrap();
        for i in 0..3 {
            b.output(i, format!("y{i}")).unwrap();
        }
        let m = b.finish().unwrap().metrics();
        assert_eq!(m.quantum_cost, None);
        assert_eq!(m.classical_cost, None);
        assert!(m.to_string().contains("qcost=unknown"));
    }
}

use super::{LineSource, Netlist, NetlistError};
use crate::gate::{TruthTable, MAX_TABLE_WIDTH};

/// Largest primary-input count accepted by exhaustive enumeration.
pub const MAX_EXHAUSTIVE_INPUTS: usize = 24;

/// Values read from the sinks after a simulation run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Simulation {
    /// Primary outputs in declaration order.
    pub outputs: Vec<bool>,
    /// Garbage lines in declaration order.
    pub garbage: Vec<bool>,
}

/// Splits `word` into `width` bits, most-significant first.
pub(crate) fn word_bits(word: u64, width: usize) -> Vec<bool> {
    (0..width)
        .map(|i| word >> (width - 1 - i) & 1 == 1)
        .collect()
}

pub(crate) fn bits_word(bits: &[bool]) -> u64 {
    bits.iter().fold(0, |acc, &b| acc << 1 | b as u64)
}

impl Netlist {
    fn initial_state(&self, inputs: &[bool]) -> Vec<bool> {
        let mut state = vec![false; self.line_count];
        let mut next = inputs.iter();
        for (line, src) in &self.sources {
            state[*line] = match src {
                LineSource::Input(_) => *next.next().expect("input width checked"),
                LineSource::Constant(bit) => *bit,
            };
        }
        state
    }

    /// Applies every gate, in order, to a full line state.
    pub fn run(&self, state: &mut [bool]) {
        for inst in &self.gates {
            inst.gate.apply(state, &inst.operands);
        }
    }

    fn check_input_width(&self, inputs: &[bool]) -> Result<(), NetlistError> {
        let expected = self.input_count();
        if inputs.len() != expected {
            return Err(NetlistError::InputWidth {
                expected,
                got: inputs.len(),
            });
        }
        Ok(())
    }

    pub fn simulate(&self, inputs: &[bool]) -> Result<Simulation, NetlistError> {
        self.check_input_width(inputs)?;
        let mut state = self.initial_state(inputs);
        self.run(&mut state);
        let outputs = self
            .outputs()
            .iter()
            .map(|(line, _)| state[*line])
            .collect();
        let garbage = self
            .garbage_lines()
            .iter()
            .map(|&line| state[line])
            .collect();
        Ok(Simulation { outputs, garbage })
    }

    /// Primary-output bits for the given primary-input bits.
    pub fn eval_outputs(&self, inputs: &[bool]) -> Result<Vec<bool>, NetlistError> {
        self.simulate(inputs).map(|s| s.outputs)
    }

    /// Output word for every input word; the first declared input and
    /// output are the most-significant bits.
    pub fn truth_table(&self) -> Result<Vec<u64>, NetlistError> {
        let inputs = self.input_count();
        if inputs > MAX_EXHAUSTIVE_INPUTS {
            return Err(NetlistError::TooLarge {
                what: "primary inputs",
                count: inputs,
                max: MAX_EXHAUSTIVE_INPUTS,
            });
        }
        let outputs = self.output_count();
        if outputs > 64 {
            return Err(NetlistError::TooLarge {
                what: "primary outputs",
                count: outputs,
                max: 64,
            });
        }
        let out_lines: Vec<usize> = self.outputs().iter().map(|(l, _)| *l).collect();
        Ok((0..1u64 << inputs)
            .map(|word| {
                let mut state = self.initial_state(&word_bits(word, inputs));
                self.run(&mut state);
                out_lines
                    .iter()
                    .fold(0, |acc, &l| acc << 1 | state[l] as u64)
            })
            .collect())
    }

    /// The permutation the gate sequence induces on all lines, ignoring
    /// source and sink roles. Line 0 is the most-significant bit.
    pub fn line_permutation(&self) -> Result<TruthTable, NetlistError> {
        if self.line_count > MAX_TABLE_WIDTH {
            return Err(NetlistError::TooLarge {
                what: "lines",
                count: self.line_count,
                max: MAX_TABLE_WIDTH,
            });
        }
        let entries = (0..1u64 << self.line_count)
            .map(|word| {
                let mut state = word_bits(word, self.line_count);
                self.run(&mut state);
                bits_word(&state)
            })
            .collect();
        Ok(TruthTable::new(self.line_count, entries))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gate::Builtin;
    use crate::netlist::NetlistBuilder;
    use proptest::prelude::*;

    #[test]
    fn feynman_table() {
        let mut b = NetlistBuilder::new();
        let a = b.input("A");
        let c = b.input("B");
        b.builtin(Builtin::Feynman, &[a, c]).unwrap();
        b.output(a, "P").unwrap();
        b.output(c, "Q").unwrap();
        let n = b.finish().unwrap();
        assert_eq!(n.truth_table().unwrap(), vec![0b00, 0b01, 0b11, 0b10]);
    }

    #[test]
    fn empty_netlist_is_identity() {
        let mut b = NetlistBuilder::new();
        let a = b.input("A");
        b.output(a, "A").unwrap();
        let n = b.finish().unwrap();
        assert_eq!(n.truth_table().unwrap(), vec![0, 1]);
    }

    #[test]
    fn input_width_mismatch() {
        let n = Netlist::parse(
            "rnl 1\nlines 3\nin 0 A\nin 1 B\nconst 2 0\ngate peres 0 1 2\ngarbage 0\ngarbage 1\nout 2 AND\n",
        )
        .unwrap();
        assert_eq!(
            n.simulate(&[true]),
            Err(NetlistError::InputWidth {
                expected: 2,
                got: 1
            })
        );
    }

    #[test]
    fn enumeration_guard() {
        let mut b = NetlistBuilder::new();
        let lines: Vec<usize> = (0..25).map(|i| b.input(format!("x{i}"))).collect();
        for l in lines {
            b.garbage(l).unwrap();
        }
        assert!(matches!(
            b.finish().unwrap().truth_table(),
            Err(NetlistError::TooLarge { count: 25, .. })
        ));
    }

    fn arb_circuit() -> impl Strategy<Value = Netlist> {
        let kinds = prop_oneof![
            Just(Builtin::Not),
            Just(Builtin::Feynman),
            Just(Builtin::Toffoli),
            Just(Builtin::Fredkin),
            Just(Builtin::Peres),
        ];
        (3usize..=10).prop_flat_map(move |lines| {
            let gate = (
                kinds.clone(),
                Just((0..lines).collect::<Vec<usize>>()).prop_shuffle(),
            );
            (Just(lines), proptest::collection::vec(gate, 0..20)).prop_map(|(lines, gates)| {
                let mut b = NetlistBuilder::new();
                for i in 0..lines {
                    b.input(format!("x{i}"));
                }
                for (kind, order) in gates {
                    b.builtin(kind, &order[..kind.width()]).unwrap();
                }
                for i in 0..lines {
                    b.output(i, format!("y{i}")).unwrap();
                }
                b.finish().unwrap()
            })
        })
    }

    proptest! {
        #[test]
        fn closed_circuits_are_bijective(n in arb_circuit()) {
            prop_assert!(n.line_permutation().unwrap().is_bijective());
        }

        #[test]
        fn render_parse_round_trip(n in arb_circuit()) {
            prop_assert_eq!(Netlist::parse(&n.render()).unwrap(), n);
        }
    }
}

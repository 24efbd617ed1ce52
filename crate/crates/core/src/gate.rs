//! Reversible gate primitives.
//!
//! Words are `u64` values whose most-significant used bit is the first port
//! (A1, or A for a 3×3 gate). A gate of width `k` therefore maps
//! `0..2^k` onto itself.

use std::fmt;
use std::ops::{Add, AddAssign};
use std::str::FromStr;

use thiserror::Error;

/// Largest width for which a full truth table is tabulated.
pub const MAX_TABLE_WIDTH: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GateError {
    #[error("unknown gate name `{0}`")]
    UnknownGate(String),
    #[error("malformed generalized gate: {0}")]
    MalformedSpec(String),
    #[error("input word {word:#b} does not fit a {width}-line gate")]
    WidthMismatch { width: usize, word: u64 },
    #[error("gate width {width} exceeds the enumeration limit of {max}")]
    TooWide { width: usize, max: usize },
}

/// Counts of two-input XOR, two-input AND and NOT operations needed to
/// compute a gate classically.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct ClassicalCost {
    pub xor: u32,
    pub and: u32,
    pub not: u32,
}

impl ClassicalCost {
    pub const fn new(xor: u32, and: u32, not: u32) -> Self {
        Self { xor, and, not }
    }
}

impl Add for ClassicalCost {
    type Output = Self;

    fn add(self, rhs: Self) -> Self {
        Self::new(self.xor + rhs.xor, self.and + rhs.and, self.not + rhs.not)
    }
}

impl AddAssign for ClassicalCost {
    fn add_assign(&mut self, rhs: Self) {
        *self = *self + rhs;
    }
}

impl fmt::Display for ClassicalCost {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "xor={} and={} not={}", self.xor, self.and, self.not)
    }
}

/// The five named gates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Builtin {
    Not,
    Feynman,
    Toffoli,
    Fredkin,
    Peres,
}

impl Builtin {
    pub const ALL: [Builtin; 5] = [
        Builtin::Not,
        Builtin::Feynman,
        Builtin::Toffoli,
        Builtin::Fredkin,
        Builtin::Peres,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Builtin::Not => "not",
            Builtin::Feynman => "feynman",
            Builtin::Toffoli => "toffoli",
            Builtin::Fredkin => "fredkin",
            Builtin::Peres => "peres",
        }
    }

    pub fn width(self) -> usize {
        match self {
            Builtin::Not => 1,
            Builtin::Feynman => 2,
            Builtin::Toffoli | Builtin::Fredkin | Builtin::Peres => 3,
        }
    }

    /// Number of 2×2 quantum primitives; 1×1 gates are free.
    pub fn quantum_cost(self) -> u32 {
        match self {
            Builtin::Not => 0,
            Builtin::Feynman => 1,
            Builtin::Toffoli | Builtin::Fredkin => 5,
            Builtin::Peres => 4,
        }
    }

    pub fn classical_cost(self) -> ClassicalCost {
        match self {
            Builtin::Not => ClassicalCost::new(0, 0, 1),
            Builtin::Feynman => ClassicalCost::new(1, 0, 0),
            Builtin::Toffoli => ClassicalCost::new(1, 1, 0),
            Builtin::Fredkin => ClassicalCost::new(2, 4, 1),
            Builtin::Peres => ClassicalCost::new(2, 1, 0),
        }
    }

    fn supports(self) -> Vec<Vec<usize>> {
        match self {
            Builtin::Not => vec![vec![0]],
            Builtin::Feynman => vec![vec![0], vec![0, 1]],
            Builtin::Toffoli => vec![vec![0], vec![1], vec![0, 1, 2]],
            Builtin::Fredkin => vec![vec![0], vec![0, 1, 2], vec![0, 1, 2]],
            Builtin::Peres => vec![vec![0], vec![0, 1], vec![0, 1, 2]],
        }
    }

    fn eval(self, word: u64) -> u64 {
        match self {
            Builtin::Not => word ^ 1,
            Builtin::Feynman => {
                let (a, b) = (word >> 1 & 1, word & 1);
                a << 1 | (a ^ b)
            }
            Builtin::Toffoli => {
                let (a, b, c) = (word >> 2 & 1, word >> 1 & 1, word & 1);
                a << 2 | b << 1 | (a & b ^ c)
            }
            Builtin::Fredkin => {
                let (a, b, c) = (word >> 2 & 1, word >> 1 & 1, word & 1);
                let na = a ^ 1;
                let q = na & b ^ a & c;
                let r = na & c ^ a & b;
                a << 2 | q << 1 | r
            }
            Builtin::Peres => {
                let (a, b, c) = (word >> 2 & 1, word >> 1 & 1, word & 1);
                a << 2 | (a ^ b) << 1 | (a & b ^ c)
            }
        }
    }
}

impl FromStr for Builtin {
    type Err = GateError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Builtin::ALL
            .into_iter()
            .find(|b| b.name() == s)
            .ok_or_else(|| GateError::UnknownGate(s.to_string()))
    }
}

impl fmt::Display for Builtin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Parameters of a member of the generalized k×k family.
///
/// Lines 1..k−2 pass through; line k−1 is XOR-masked by `f_low` of the
/// first k−2 inputs and line k by `f_high` of the first k−1 inputs. Both
/// tables are indexed with A1 as the most-significant argument bit.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GeneralizedSpec {
    k: usize,
    f_low: Vec<bool>,
    f_high: Vec<bool>,
}

impl GeneralizedSpec {
    pub fn new(k: usize, f_low: Vec<bool>, f_high: Vec<bool>) -> Result<Self, GateError> {
        if k < 2 {
            return Err(GateError::MalformedSpec(format!(
                "width {k} is below the family minimum of 2"
            )));
        }
        if k > 32 {
            return Err(GateError::MalformedSpec(format!("width {k} is too large")));
        }
        let (low_len, high_len) = (1usize << (k - 2), 1usize << (k - 1));
        if f_low.len() != low_len {
            return Err(GateError::MalformedSpec(format!(
                "f_low has {} entries, expected {low_len}",
                f_low.len()
            )));
        }
        if f_high.len() != high_len {
            return Err(GateError::MalformedSpec(format!(
                "f_high has {} entries, expected {high_len}",
                f_high.len()
            )));
        }
        Ok(Self { k, f_low, f_high })
    }

    /// Builds a spec from `0`/`1` strings such as `"01"` and `"0001"`.
    pub fn from_bitstrings(k: usize, f_low: &str, f_high: &str) -> Result<Self, GateError> {
        Self::new(k, parse_bits(f_low)?, parse_bits(f_high)?)
    }

    pub fn width(&self) -> usize {
        self.k
    }

    pub fn f_low(&self) -> &[bool] {
        &self.f_low
    }

    pub fn f_high(&self) -> &[bool] {
        &self.f_high
    }

    pub fn f_low_bits(&self) -> String {
        render_bits(&self.f_low)
    }

    pub fn f_high_bits(&self) -> String {
        render_bits(&self.f_high)
    }

    fn eval(&self, word: u64) -> u64 {
        let low = self.f_low[(word >> 2) as usize] as u64;
        let high = self.f_high[(word >> 1) as usize] as u64;
        word ^ (low << 1) ^ high
    }

    fn supports(&self) -> Vec<Vec<usize>> {
        let k = self.k;
        let mut supports: Vec<Vec<usize>> = (0..k - 2).map(|i| vec![i]).collect();
        let mut low = essential_vars(&self.f_low, k - 2);
        low.push(k - 2);
        let mut high = essential_vars(&self.f_high, k - 1);
        high.push(k - 1);
        supports.push(low);
        supports.push(high);
        supports
    }
}

fn parse_bits(s: &str) -> Result<Vec<bool>, GateError> {
    s.chars()
        .map(|c| match c {
            '0' => Ok(false),
            '1' => Ok(true),
            other => Err(GateError::MalformedSpec(format!(
                "unexpected character `{other}` in bitstring"
            ))),
        })
        .collect()
}

fn render_bits(bits: &[bool]) -> String {
    bits.iter().map(|&b| if b { '1' } else { '0' }).collect()
}

/// Variables (0 = most significant) on which a tabulated function depends.
fn essential_vars(table: &[bool], vars: usize) -> Vec<usize> {
    (0..vars)
        .filter(|&j| {
            let mask = 1usize << (vars - 1 - j);
            (0..table.len()).any(|idx| table[idx] != table[idx ^ mask])
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Semantics {
    Builtin(Builtin),
    Generalized(GeneralizedSpec),
}

/// A reversible gate with its output supports and cost attributes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Gate {
    name: String,
    width: usize,
    semantics: Semantics,
    supports: Vec<Vec<usize>>,
    quantum_cost: Option<u32>,
    classical_cost: Option<ClassicalCost>,
}

impl Gate {
    pub fn builtin(kind: Builtin) -> Self {
        Self {
            name: kind.name().to_string(),
            width: kind.width(),
            semantics: Semantics::Builtin(kind),
            supports: kind.supports(),
            quantum_cost: Some(kind.quantum_cost()),
            classical_cost: Some(kind.classical_cost()),
        }
    }

    /// Builds a family member named `name`.
    ///
    /// Costs stay unknown unless the resulting permutation coincides with a
    /// builtin of the same width, in which case the builtin costs are taken.
    pub fn generalized(name: impl Into<String>, spec: GeneralizedSpec) -> Self {
        let width = spec.width();
        let supports = spec.supports();
        let mut gate = Self {
            name: name.into(),
            width,
            semantics: Semantics::Generalized(spec),
            supports,
            quantum_cost: None,
            classical_cost: None,
        };
        if let Some(twin) = Builtin::ALL
            .into_iter()
            .filter(|b| b.width() == width)
            .find(|&b| gate.same_function(&Gate::builtin(b)))
        {
            gate.quantum_cost = Some(twin.quantum_cost());
            gate.classical_cost = Some(twin.classical_cost());
        }
        gate
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn builtin_kind(&self) -> Option<Builtin> {
        match self.semantics {
            Semantics::Builtin(b) => Some(b),
            Semantics::Generalized(_) => None,
        }
    }

    pub fn generalized_spec(&self) -> Option<&GeneralizedSpec> {
        match &self.semantics {
            Semantics::Builtin(_) => None,
            Semantics::Generalized(spec) => Some(spec),
        }
    }

    /// Input ports (0 = first) on which output port `port` depends.
    pub fn support(&self, port: usize) -> &[usize] {
        &self.supports[port]
    }

    pub fn supports(&self) -> &[Vec<usize>] {
        &self.supports
    }

    pub fn quantum_cost(&self) -> Option<u32> {
        self.quantum_cost
    }

    pub fn classical_cost(&self) -> Option<ClassicalCost> {
        self.classical_cost
    }

    pub fn eval(&self, word: u64) -> Result<u64, GateError> {
        if self.width < 64 && word >> self.width != 0 {
            return Err(GateError::WidthMismatch {
                width: self.width,
                word,
            });
        }
        Ok(self.eval_unchecked(word))
    }

    pub(crate) fn eval_unchecked(&self, word: u64) -> u64 {
        match &self.semantics {
            Semantics::Builtin(b) => b.eval(word),
            Semantics::Generalized(spec) => spec.eval(word),
        }
    }

    /// Applies the gate in place to `state` at the given operand lines.
    pub(crate) fn apply(&self, state: &mut [bool], operands: &[usize]) {
        let word = operands
            .iter()
            .fold(0u64, |acc, &line| acc << 1 | state[line] as u64);
        let out = self.eval_unchecked(word);
        for (port, &line) in operands.iter().enumerate() {
            state[line] = out >> (self.width - 1 - port) & 1 == 1;
        }
    }

    pub fn truth_table(&self) -> Result<TruthTable, GateError> {
        if self.width > MAX_TABLE_WIDTH {
            return Err(GateError::TooWide {
                width: self.width,
                max: MAX_TABLE_WIDTH,
            });
        }
        let entries = (0..1u64 << self.width)
            .map(|w| self.eval_unchecked(w))
            .collect();
        Ok(TruthTable {
            width: self.width,
            entries,
        })
    }

    /// True when both gates have the same width and permutation.
    pub fn same_function(&self, other: &Gate) -> bool {
        self.width == other.width
            && self.width <= MAX_TABLE_WIDTH
            && (0..1u64 << self.width).all(|w| self.eval_unchecked(w) == other.eval_unchecked(w))
    }
}

/// Looks up one of the five named gates.
pub fn make_named_gate(name: &str) -> Result<Gate, GateError> {
    name.parse().map(Gate::builtin)
}

/// Builds a generalized gate, naming it `gen<k>`.
pub fn make_generalized_gate(spec: GeneralizedSpec) -> Gate {
    let name = format!("gen{}", spec.width());
    Gate::generalized(name, spec)
}

/// Exhaustive map of a `width`-line reversible function.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruthTable {
    width: usize,
    entries: Vec<u64>,
}

impl TruthTable {
    pub fn new(width: usize, entries: Vec<u64>) -> Self {
        Self { width, entries }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn entries(&self) -> &[u64] {
        &self.entries
    }

    pub fn is_bijective(&self) -> bool {
        let size = 1usize << self.width;
        if self.entries.len() != size {
            return false;
        }
        let mut seen = vec![false; size];
        for &e in &self.entries {
            match seen.get_mut(e as usize) {
                Some(slot) if !*slot => *slot = true,
                _ => return false,
            }
        }
        true
    }

    /// The inverse permutation, if the table is bijective.
    pub fn inverse(&self) -> Option<TruthTable> {
        if !self.is_bijective() {
            return None;
        }
        let mut entries = vec![0u64; self.entries.len()];
        for (input, &output) in self.entries.iter().enumerate() {
            entries[output as usize] = input as u64;
        }
        Some(TruthTable::new(self.width, entries))
    }
}

/// Formats the low `width` bits of `word`, most-significant first.
pub fn word_to_bits(word: u64, width: usize) -> String {
    (0..width)
        .map(|i| {
            if word >> (width - 1 - i) & 1 == 1 {
                '1'
            } else {
                '0'
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn gate(name: &str) -> Gate {
        make_named_gate(name).unwrap()
    }

    #[test]
    fn builtin_quantum_costs() {
        assert_eq!(gate("not").quantum_cost(), Some(0));
        assert_eq!(gate("feynman").quantum_cost(), Some(1));
        assert_eq!(gate("toffoli").quantum_cost(), Some(5));
        assert_eq!(gate("fredkin").quantum_cost(), Some(5));
        assert_eq!(gate("peres").quantum_cost(), Some(4));
    }

    #[test]
    fn unknown_name() {
        assert_eq!(
            make_named_gate("swap"),
            Err(GateError::UnknownGate("swap".into()))
        );
    }

    #[test]
    fn evaluation_examples() {
        assert_eq!(gate("peres").eval(0b110), Ok(0b101));
        assert_eq!(gate("fredkin").eval(0b101), Ok(0b110));
        assert_eq!(gate("feynman").eval(0b11), Ok(0b10));
        assert_eq!(gate("toffoli").eval(0b111), Ok(0b110));
        assert!(matches!(
            gate("feynman").eval(0b100),
            Err(GateError::WidthMismatch { width: 2, .. })
        ));
    }

    #[test]
    fn small_truth_tables() {
        assert_eq!(gate("not").truth_table().unwrap().entries(), &[1, 0]);
        assert_eq!(
            gate("feynman").truth_table().unwrap().entries(),
            &[0, 1, 3, 2]
        );
    }

    #[test]
    fn classical_costs() {
        assert_eq!(
            gate("peres").classical_cost(),
            Some(ClassicalCost::new(2, 1, 0))
        );
        assert_eq!(
            gate("fredkin").classical_cost(),
            Some(ClassicalCost::new(2, 4, 1))
        );
        assert_eq!(
            gate("not").classical_cost(),
            Some(ClassicalCost::new(0, 0, 1))
        );
        assert_eq!(
            gate("feynman").classical_cost(),
            Some(ClassicalCost::new(1, 0, 0))
        );
        assert_eq!(
            gate("toffoli").classical_cost(),
            Some(ClassicalCost::new(1, 1, 0))
        );
    }

    #[test]
    fn family_reduces_to_peres_and_feynman() {
        let peres =
            make_generalized_gate(GeneralizedSpec::from_bitstrings(3, "01", "0001").unwrap());
        assert!(peres.same_function(&gate("peres")));
        assert_eq!(peres.quantum_cost(), Some(4));
        assert_eq!(peres.supports(), gate("peres").supports());

        let feynman =
            make_generalized_gate(GeneralizedSpec::from_bitstrings(2, "0", "01").unwrap());
        assert!(feynman.same_function(&gate("feynman")));
        assert_eq!(feynman.quantum_cost(), Some(1));
    }

    #[test]
    fn family_identity_member() {
        let id = make_generalized_gate(GeneralizedSpec::from_bitstrings(3, "00", "0000").unwrap());
        let table = id.truth_table().unwrap();
        assert_eq!(table.entries(), &[0, 1, 2, 3, 4, 5, 6, 7]);
        assert_eq!(id.quantum_cost(), None);
        assert_eq!(id.classical_cost(), None);
        assert_eq!(id.supports(), &[vec![0], vec![1], vec![2]]);
    }

    #[test]
    fn malformed_specs() {
        assert!(GeneralizedSpec::from_bitstrings(3, "0", "0001").is_err());
        assert!(GeneralizedSpec::from_bitstrings(3, "01", "001").is_err());
        assert!(GeneralizedSpec::from_bitstrings(1, "", "0").is_err());
        assert!(GeneralizedSpec::from_bitstrings(2, "2", "01").is_err());
    }

    #[test]
    fn width_guard() {
        let spec = GeneralizedSpec::new(21, vec![false; 1 << 19], vec![false; 1 << 20]).unwrap();
        assert!(matches!(
            make_generalized_gate(spec).truth_table(),
            Err(GateError::TooWide { width: 21, .. })
        ));
    }

    /// Outputs must be unchanged when only non-support inputs flip.
    fn check_supports(g: &Gate) {
        let k = g.width();
        for w in 0..1u64 << k {
            let out = g.eval(w).unwrap();
            for port in 0..k {
                let outside: Vec<usize> = (0..k).filter(|p| !g.support(port).contains(p)).collect();
                for subset in 0..1u64 << outside.len() {
                    let mut flipped = w;
                    for (i, &p) in outside.iter().enumerate() {
                        if subset >> i & 1 == 1 {
                            flipped ^= 1 << (k - 1 - p);
                        }
                    }
                    let bit = |x: u64| x >> (k - 1 - port) & 1;
                    assert_eq!(
                        bit(out),
                        bit(g.eval(flipped).unwrap()),
                        "{} port {port}",
                        g.name()
                    );
                }
            }
        }
    }

    #[test]
    fn builtin_tables_are_permutations_and_respect_supports() {
        for b in Builtin::ALL {
            let g = Gate::builtin(b);
            let table = g.truth_table().unwrap();
            assert!(table.is_bijective(), "{b}");
            let inv = table.inverse().unwrap();
            for w in 0..1u64 << g.width() {
                assert_eq!(inv.entries()[g.eval(w).unwrap() as usize], w);
            }
            check_supports(&g);
        }
    }

    fn arb_spec() -> impl Strategy<Value = GeneralizedSpec> {
        (2usize..=5).prop_flat_map(|k| {
            (
                Just(k),
                proptest::collection::vec(any::<bool>(), 1 << (k - 2)),
                proptest::collection::vec(any::<bool>(), 1 << (k - 1)),
            )
                .prop_map(|(k, lo, hi)| GeneralizedSpec::new(k, lo, hi).unwrap())
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]

        #[test]
        fn generalized_gates_are_bijective(spec in arb_spec()) {
            let g = make_generalized_gate(spec);
            let table = g.truth_table().unwrap();
            prop_assert!(table.is_bijective());
            check_supports(&g);
        }

        #[test]
        fn bitstrings_round_trip(spec in arb_spec()) {
            let again = GeneralizedSpec::from_bitstrings(spec.width(), &spec.f_low_bits(), &spec.f_high_bits()).unwrap();
            prop_assert_eq!(again, spec);
        }
    }
}

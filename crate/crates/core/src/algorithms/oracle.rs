use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::qstate::MAX_QUBITS;

/// Largest `n` for which [`OracleFunction::all_balanced`] enumerates
/// (`C(16, 8) = 12870` functions).
pub const MAX_BALANCED_QUBITS: usize = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OracleClass {
    /// `f i = f 0` for all `i`.
    Constant,
    /// Equally many zeros and ones.
    Balanced,
    /// Exactly one `i` with `f i = 1`.
    Point,
    Other,
}

/// A function `f : 0,..2^n → 0,1` given by its truth table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleFunction {
    n: usize,
    table: Vec<bool>,
    class: OracleClass,
}

impl OracleFunction {
    pub fn new(table: Vec<bool>) -> Result<Self> {
        let len = table.len();
        if len < 2 || !len.is_power_of_two() {
            return Err(Error::domain(format!(
                "oracle table length {len} is not a power of two >= 2"
            )));
        }
        let n = len.trailing_zeros() as usize;
        if n > MAX_QUBITS {
            return Err(Error::capacity(format!("oracle on {n} bits (limit {MAX_QUBITS})")));
        }
        let ones = table.iter().filter(|&&b| b).count();
        // A 2-entry table with one 1 is both balanced and a point function;
        // balanced wins so that the Deutsch-Jozsa promise accepts it.
        let class = if ones == 0 || ones == len {
            OracleClass::Constant
        } else if 2 * ones == len {
            OracleClass::Balanced
        } else if ones == 1 {
            OracleClass::Point
        } else {
            OracleClass::Other
        };
        Ok(OracleFunction { n, table, class })
    }

    /// Parses a string of `0`s and `1`s, entry `0` first.
    pub fn from_bits(s: &str) -> Result<Self> {
        let table = s
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::domain(format!("`{other}` is not a bit"))),
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(table)
    }

    /// The function that is 1 exactly at `x1`.
    pub fn point(n: usize, x1: usize) -> Result<Self> {
        if n == 0 || n > MAX_QUBITS {
            return Err(Error::capacity(format!("oracle on {n} bits (limit {MAX_QUBITS})")));
        }
        if x1 >= 1 << n {
            return Err(Error::domain(format!("solution {x1} outside 0,..{}", 1usize << n)));
        }
        let mut table = vec![false; 1 << n];
        table[x1] = true;
        Self::new(table)
    }

    pub fn constant(n: usize, value: bool) -> Result<Self> {
        if n == 0 || n > MAX_QUBITS {
            return Err(Error::capacity(format!("oracle on {n} bits (limit {MAX_QUBITS})")));
        }
        Self::new(vec![value; 1 << n])
    }

    pub fn all_constant(n: usize) -> Result<Vec<Self>> {
        Ok(vec![Self::constant(n, false)?, Self::constant(n, true)?])
    }

    /// Every balanced function on `n` bits, in increasing order of the table
    /// read as a binary number with entry 0 as the low bit.
    pub fn all_balanced(n: usize) -> Result<Vec<Self>> {
        if n == 0 || n > MAX_BALANCED_QUBITS {
            return Err(Error::capacity(format!(
                "enumerating balanced functions on {n} bits (limit {MAX_BALANCED_QUBITS})"
            )));
        }
        let len = 1usize << n;
        let half = len / 2;
        let mut out = Vec::new();
        for mask in 0u32..(1u32 << len) {
            if mask.count_ones() as usize == half {
                let table = (0..len).map(|i| mask >> i & 1 == 1).collect();
                out.push(Self::new(table)?);
            }
        }
        Ok(out)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn table(&self) -> &[bool] {
        &self.table
    }

    pub fn class(&self) -> OracleClass {
        self.class
    }

    pub fn eval(&self, x: usize) -> bool {
        self.table[x]
    }

    pub fn is_constant(&self) -> bool {
        self.class == OracleClass::Constant
    }

    pub fn is_balanced(&self) -> bool {
        self.class == OracleClass::Balanced
    }

    /// The unique `x1` with `f x1 = 1`, if there is exactly one.
    pub fn solution(&self) -> Option<usize> {
        let mut ones = self.table.iter().enumerate().filter(|(_, b)| **b);
        match (ones.next(), ones.next()) {
            (Some((x, _)), None) => Some(x),
            _ => None,
        }
    }

    pub fn bits(&self) -> String {
        self.table.iter().map(|&b| if b { '1' } else { '0' }).collect()
    }
}

impl fmt::Display for OracleFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.bits())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classes() {
        assert_eq!(
            OracleFunction::from_bits("0000").unwrap().class(),
            OracleClass::Constant
        );
        assert_eq!(
            OracleFunction::from_bits("0110").unwrap().class(),
            OracleClass::Balanced
        );
        assert_eq!(OracleFunction::from_bits("0010").unwrap().class(), OracleClass::Point);
        assert_eq!(OracleFunction::from_bits("0111").unwrap().class(), OracleClass::Other);
        assert_eq!(OracleFunction::from_bits("01").unwrap().class(), OracleClass::Balanced);
        assert_eq!(OracleFunction::from_bits("0010").unwrap().solution(), Some(2));
        assert!(OracleFunction::from_bits("012").is_err());
        assert!(OracleFunction::from_bits("010").is_err());
    }

    #[test]
    fn balanced_counts() {
        assert_eq!(OracleFunction::all_balanced(1).unwrap().len(), 2);
        assert_eq!(OracleFunction::all_balanced(2).unwrap().len(), 6);
        assert_eq!(OracleFunction::all_balanced(3).unwrap().len(), 70);
        assert!(OracleFunction::all_balanced(5).unwrap_err().is_capacity());
        // |Σ (−1)^{f i}| = 0 for every enumerated function
        for f in OracleFunction::all_balanced(3).unwrap() {
            let s: i32 = f.table().iter().map(|&b| if b { -1 } else { 1 }).sum();
            assert_eq!(s, 0);
        }
    }
}

//! Transmitted packet and its canonical text form.
//!
//! One JSON object, fields in this order:
//!
//! ```text
//! {"version":1,"algorithm":"lucas2","n":2,"b":1,"original_length":4,"records":[{"d":-216,"retained":[8,16,5]}]}
//! ```

use serde::{Deserialize, Serialize};

use super::message::choose_n;
use super::{Algorithm, CodecError};

pub const PACKET_VERSION: u32 = 1;

/// Determinant of one block plus every entry except the withheld one.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BlockRecord {
    pub d: i64,
    pub retained: Vec<i64>,
}

impl BlockRecord {
    /// `[d, retained…]` as one flat row.
    pub fn flat(&self) -> Vec<i64> {
        std::iter::once(self.d).chain(self.retained.iter().copied()).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CodePacket {
    pub algorithm: Algorithm,
    /// Character-table offset.
    pub n: u64,
    /// Block count.
    pub b: usize,
    /// Symbol count before padding.
    pub original_length: usize,
    pub records: Vec<BlockRecord>,
}

#[derive(Serialize)]
struct WireOut<'a> {
    version: u32,
    algorithm: Algorithm,
    n: u64,
    b: usize,
    original_length: usize,
    records: &'a [BlockRecord],
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct WireIn {
    version: u32,
    algorithm: Algorithm,
    n: u64,
    b: usize,
    original_length: usize,
    records: Vec<BlockRecord>,
}

impl CodePacket {
    /// Checks the structural invariants: `b ≥ 1`, `b` matches the record
    /// count and is a perfect square, `n` follows the offset rule, record
    /// widths match the algorithm, and `original_length` fits.
    pub fn validate(&self) -> Result<(), CodecError> {
        let invalid = |msg: String| Err(CodecError::InvalidPacket(msg));
        if self.b == 0 {
            return invalid("packet has no blocks (b = 0)".into());
        }
        if self.b != self.records.len() {
            return invalid(format!("b = {} but {} records present", self.b, self.records.len()));
        }
        let per_side = (self.b as f64).sqrt().round() as usize;
        if per_side * per_side != self.b {
            return invalid(format!("b = {} is not a perfect square", self.b));
        }
        let expected_n = choose_n(self.b, self.algorithm);
        if self.n != expected_n {
            return invalid(format!("n = {} but b = {} requires n = {expected_n}", self.n, self.b));
        }
        let width = self.algorithm.retained_cells().len();
        if let Some(i) = self.records.iter().position(|r| r.retained.len() != width) {
            return invalid(format!("record {} retains {} entries, expected {width}", i + 1, self.records[i].retained.len()));
        }
        let capacity = self.b * self.algorithm.cells();
        if self.original_length > capacity {
            return invalid(format!("original_length {} exceeds capacity {capacity}", self.original_length));
        }
        Ok(())
    }

    /// Blocks per side of the message matrix (`√b`).
    pub fn blocks_per_side(&self) -> usize {
        (self.b as f64).sqrt().round() as usize
    }

    pub fn to_canonical_string(&self) -> String {
        serde_json::to_string(&WireOut {
            version: PACKET_VERSION,
            algorithm: self.algorithm,
            n: self.n,
            b: self.b,
            original_length: self.original_length,
            records: &self.records,
        })
        .expect("packet serialization cannot fail")
    }

    /// Parses and validates a canonical packet.
    pub fn from_canonical_str(text: &str) -> Result<Self, CodecError> {
        let wire: WireIn = serde_json::from_str(text).map_err(|e| CodecError::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
        if wire.version != PACKET_VERSION {
            return Err(CodecError::InvalidPacket(format!(
                "unsupported version {} (expected {PACKET_VERSION})",
                wire.version
            )));
        }
        let packet = Self {
            algorithm: wire.algorithm,
            n: wire.n,
            b: wire.b,
            original_length: wire.original_length,
            records: wire.records,
        };
        packet.validate()?;
        Ok(packet)
    }
}

pub fn serialize_packet(packet: &CodePacket) -> String {
    packet.to_canonical_string()
}

pub fn deserialize_packet(text: &str) -> Result<CodePacket, CodecError> {
    CodePacket::from_canonical_str(text)
}

use super::table::{CharTable, PAD_SYMBOL};
use super::{Algorithm, CodecError};

/// Message after uppercasing, separator substitution and padding.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormalizedMessage {
    pub padded: String,
    /// Symbol count before padding.
    pub original_length: usize,
}

impl NormalizedMessage {
    /// Blocks per side of the message matrix.
    pub fn blocks_per_side(&self, algorithm: Algorithm) -> usize {
        side_blocks(self.padded.len(), algorithm).unwrap_or(0)
    }
}

/// Uppercases, maps spaces to `'0'` and pads with `'0'` up to the smallest
/// square of side `3m` (Fib3) or `2m` (Lucas2) that holds the message.
pub fn normalize_message(text: &str, algorithm: Algorithm) -> Result<NormalizedMessage, CodecError> {
    let mut padded = String::with_capacity(text.len());
    for (position, ch) in text.chars().enumerate() {
        let symbol = match ch {
            'a'..='z' | 'A'..='Z' => ch.to_ascii_uppercase(),
            ' ' | PAD_SYMBOL => PAD_SYMBOL,
            _ => return Err(CodecError::UnsupportedCharacter { ch, position }),
        };
        padded.push(symbol);
    }
    if padded.is_empty() {
        return Err(CodecError::EmptyMessage);
    }
    let original_length = padded.len();
    let dim = algorithm.dim();
    let mut m = 1;
    while (dim * m) * (dim * m) < original_length {
        m += 1;
    }
    padded.extend(std::iter::repeat_n(PAD_SYMBOL, (dim * m) * (dim * m) - original_length));
    Ok(NormalizedMessage { padded, original_length })
}

/// Character-table offset for `b` blocks: the block dimension when `b = 1`,
/// otherwise `dimension · b`.
pub fn choose_n(b: usize, algorithm: Algorithm) -> u64 {
    let dim = algorithm.dim() as u64;
    if b == 1 {
        dim
    } else {
        dim * b as u64
    }
}

/// A `3×3` (Fib3) or `2×2` (Lucas2) block of symbol codes, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Block {
    algorithm: Algorithm,
    entries: Vec<i64>,
}

impl Block {
    pub fn new(algorithm: Algorithm, entries: Vec<i64>) -> Result<Self, CodecError> {
        if entries.len() != algorithm.cells() {
            return Err(CodecError::LengthMismatch { expected: algorithm.cells(), actual: entries.len() });
        }
        if let Some(&bad) = entries.iter().find(|v| !(1..=27).contains(*v)) {
            return Err(CodecError::CodeOutOfRange(bad));
        }
        Ok(Self { algorithm, entries })
    }

    pub fn algorithm(&self) -> Algorithm {
        self.algorithm
    }

    /// Entries `b_1 … b_9` (or `b_1 … b_4`), row-major.
    pub fn entries(&self) -> &[i64] {
        &self.entries
    }

    pub fn get(&self, row: usize, col: usize) -> i64 {
        self.entries[row * self.algorithm.dim() + col]
    }

    pub fn rows(&self) -> Vec<Vec<i64>> {
        self.entries.chunks(self.algorithm.dim()).map(<[i64]>::to_vec).collect()
    }

    pub fn det(&self) -> i64 {
        let b = &self.entries;
        match self.algorithm {
            Algorithm::Lucas2 => b[0] * b[3] - b[1] * b[2],
            Algorithm::Fib3 => {
                b[0] * (b[4] * b[8] - b[5] * b[7]) - b[1] * (b[3] * b[8] - b[5] * b[6])
                    + b[2] * (b[3] * b[7] - b[4] * b[6])
            }
        }
    }
}

fn side_blocks(len: usize, algorithm: Algorithm) -> Option<usize> {
    let dim = algorithm.dim();
    let side = (len as f64).sqrt().round() as usize;
    (side > 0 && side * side == len && side.is_multiple_of(dim)).then_some(side / dim)
}

/// Message-matrix position (index into the padded string) of cell
/// `(row, col)` of block `index`. Blocks run left to right, then top to bottom.
pub fn cell_position(algorithm: Algorithm, blocks_per_side: usize, index: usize, row: usize, col: usize) -> usize {
    let dim = algorithm.dim();
    let side = dim * blocks_per_side;
    let (block_row, block_col) = (index / blocks_per_side, index % blocks_per_side);
    (block_row * dim + row) * side + block_col * dim + col
}

/// Fills the message matrix row-major and cuts it into blocks.
pub fn build_blocks(padded: &str, table: &CharTable, algorithm: Algorithm) -> Result<Vec<Block>, CodecError> {
    let symbols: Vec<char> = padded.chars().collect();
    let per_side = side_blocks(symbols.len(), algorithm).ok_or_else(|| {
        let dim = algorithm.dim();
        let mut m = 1;
        while (dim * m) * (dim * m) < symbols.len() {
            m += 1;
        }
        CodecError::LengthMismatch { expected: (dim * m) * (dim * m), actual: symbols.len() }
    })?;
    let dim = algorithm.dim();
    (0..per_side * per_side)
        .map(|index| {
            let mut entries = Vec::with_capacity(dim * dim);
            for row in 0..dim {
                for col in 0..dim {
                    let symbol = symbols[cell_position(algorithm, per_side, index, row, col)];
                    entries.push(i64::from(table.code(symbol)?));
                }
            }
            Block::new(algorithm, entries)
        })
        .collect()
}

/// Inverse of [`build_blocks`]: the padded symbol string.
pub fn assemble_message(blocks: &[Block], table: &CharTable, algorithm: Algorithm) -> Result<String, CodecError> {
    let per_side = (blocks.len() as f64).sqrt().round() as usize;
    if per_side * per_side != blocks.len() || blocks.is_empty() {
        return Err(CodecError::InvalidPacket(format!("{} blocks do not tile a square message matrix", blocks.len())));
    }
    let dim = algorithm.dim();
    let side = dim * per_side;
    let mut symbols = vec![PAD_SYMBOL; side * side];
    for (index, block) in blocks.iter().enumerate() {
        for row in 0..dim {
            for col in 0..dim {
                symbols[cell_position(algorithm, per_side, index, row, col)] = table.symbol(block.get(row, col))?;
            }
        }
    }
    Ok(symbols.into_iter().collect())
}

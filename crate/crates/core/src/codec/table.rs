use super::CodecError;

/// The 27 message symbols in rank order. `'0'` is the word separator and pad.
pub const ALPHABET: [char; 27] = [
    'A', 'B', 'C', 'D', 'E', 'F', 'G', 'H', 'I', 'J', 'K', 'L', 'M', 'N', 'O', 'P', 'Q', 'R', 'S', 'T', 'U',
    'V', 'W', 'X', 'Y', 'Z', '0',
];

pub const PAD_SYMBOL: char = '0';

/// Offset character table: the symbol of rank `k` maps to `(offset + k) mod 27`,
/// written in `1..=27` (residue 0 is 27).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CharTable {
    offset: u64,
}

impl CharTable {
    pub fn new(offset: u64) -> Result<Self, CodecError> {
        if offset == 0 {
            return Err(CodecError::InvalidPacket("character table offset must be positive".into()));
        }
        Ok(Self { offset })
    }

    pub fn offset(&self) -> u64 {
        self.offset
    }

    pub fn code(&self, symbol: char) -> Result<u8, CodecError> {
        let rank = ALPHABET
            .iter()
            .position(|&c| c == symbol)
            .ok_or(CodecError::SymbolNotInAlphabet(symbol))? as u64;
        Ok(((self.offset + rank - 1) % 27 + 1) as u8)
    }

    pub fn symbol(&self, code: i64) -> Result<char, CodecError> {
        if !(1..=27).contains(&code) {
            return Err(CodecError::CodeOutOfRange(code));
        }
        let rank = (code as u64 + 27 - self.offset % 27) % 27;
        Ok(ALPHABET[rank as usize])
    }

    /// `(symbol, code)` pairs in alphabet order.
    pub fn entries(&self) -> impl Iterator<Item = (char, u8)> + '_ {
        ALPHABET.iter().map(|&c| (c, self.code(c).expect("alphabet symbol")))
    }
}

/// Code for `symbol` under `table`.
pub fn char_to_code(symbol: char, table: &CharTable) -> Result<u8, CodecError> {
    table.code(symbol)
}

/// Symbol for `code` under `table`.
pub fn code_to_char(code: i64, table: &CharTable) -> Result<char, CodecError> {
    table.symbol(code)
}

//! Right-circulant matrices over generalized Fibonacci and Lucas sequences.
//!
//! - [`polyseq`]: sequences by recurrence and Binet formula, exact or real.
//! - [`circulant`]: circulant construction, closed-form spectra and
//!   determinants, and the brute-force oracles they are checked against.
//! - [`codec`]: determinant-checked block coding of short messages.
//! - [`cli`]: the `fibcirc` command line, as a library call.
//! - [`selftest`]: seeded end-to-end checks.
//!
//! ```
//! use fibcirc::codec::{decode, encode, Algorithm};
//!
//! let packet = encode("GOOD", Algorithm::Lucas2).unwrap();
//! assert_eq!(packet.records[0].flat(), [-216, 8, 16, 5]);
//! assert_eq!(decode(&packet).unwrap(), "GOOD");
//! ```

pub mod circulant;
pub mod cli;
pub mod codec;
pub mod polyseq;
pub mod selftest;

// Run the guide's snippets as doctests.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/sequences.md")]
    mod sequences {}
    #[doc = include_str!("../../../book/src/circulants.md")]
    mod circulants {}
    #[doc = include_str!("../../../book/src/determinants.md")]
    mod determinants {}
    #[doc = include_str!("../../../book/src/codec.md")]
    mod codec {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}

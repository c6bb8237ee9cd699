//! Lossless compression of a target genome against a reference genome that
//! both sides already have.
//!
//! The pipeline has two stages:
//!
//! 1. [`mapper`] parses the target into `(position, length, novel char)`
//!    phrases copied from a sliding window over the reference, and
//!    [`segmenter`] folds neighbouring phrases into substitution, insertion
//!    and deletion records.
//! 2. [`entropy`] codes the resulting integers with a canonical Huffman code
//!    and the characters with a fixed prefix table; [`container`] frames the
//!    streams into one file.
//!
//! [`codec`] ties the stages together:
//!
//! ```
//! use rgc::{codec, Sequence};
//!
//! let reference = Sequence::from("AATGTAGGTACATAAGATGCNNNN");
//! let target = Sequence::from("AATGCAGGTACTATAAGNAAN");
//! let bytes = codec::compress(&target, &reference, &codec::Params::default())?;
//! assert_eq!(codec::decompress(&bytes, &reference)?, target);
//! # Ok::<(), rgc::codec::CodecError>(())
//! ```

pub mod codec;
pub mod container;
pub mod entropy;
pub mod mapper;
pub mod segmenter;
pub mod seqio;

pub use codec::{compress, decompress, CodecError, Params};
pub use mapper::{Instruction, Novel, WindowParams};
pub use segmenter::EditSet;
pub use seqio::Sequence;

// The guide under book/ is compiled here so its snippets run as doctests.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/parsing.md")]
    mod parsing {}
    #[doc = include_str!("../../../book/src/segmentation.md")]
    mod segmentation {}
    #[doc = include_str!("../../../book/src/entropy.md")]
    mod entropy {}
    #[doc = include_str!("../../../book/src/container.md")]
    mod container {}
}

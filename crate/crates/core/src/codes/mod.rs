//! Prefix codes, their decoders, and generators for named automaton families.

mod decoder;
mod families;
mod prefix;

pub use decoder::{ceil_log, decoder_reset, small_rank_word, DecoderRun};
pub use families::{
    gen_cerny, gen_random_decoder, gen_random_dfa, gen_random_eulerian, gen_xnk, random_binary_code, xnk_ell,
    xnk_reset_word,
};
pub use prefix::{Decoder, PrefixCode, MAX_CODE_ALPHABET};

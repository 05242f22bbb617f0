//! Deterministic, platform-independent random streams.
//!
//! All sampling in this crate draws from [`RandomStream`], a xoshiro256++
//! generator (Blackman & Vigna) whose 256-bit state is derived from a
//! `(seed, label, purpose)` triple by a SplitMix64-based hash chain
//! (see [`split_stream`]). Because each alternative in a scenario gets its
//! own stream keyed by its identifier, results do not depend on evaluation
//! order or on how work is spread across threads, and a given seed
//! reproduces an analysis bit for bit on any platform.
//!
//! Reference outputs (first three values), useful when porting:
//!
//! SplitMix64:
//!
//! | seed         | outputs                                                        |
//! |--------------|----------------------------------------------------------------|
//! | `0x0`        | `0xE220A8397B1DCDAF`, `0x6E789E6AA1B965F4`, `0x06C45D188009454F` |
//! | `0x2A`       | `0xBDD732262FEB6E95`, `0x28EFE333B266F103`, `0x47526757130F9F52` |
//! | `0x5AFEC0DE` | `0x70C30EDF9C10ECD9`, `0x1F47E4C92E786CB5`, `0x48CBC94AFB30CCE8` |
//!
//! xoshiro256++:
//!
//! | state                         | outputs                                                        |
//! |-------------------------------|----------------------------------------------------------------|
//! | `[1, 2, 3, 4]`                | `0x0000000002800001`, `0x0000000003800067`, `0x000CC00003800067` |
//! | SplitMix64(0) words           | `0x53175D61490B23DF`, `0x61DA6F3DC380D507`, `0x5C0FDF91EC9A7BFC` |

use crate::math;

/// Weyl-sequence increment used by SplitMix64.
const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// Domain-separation constant absorbed before anything else when deriving a
/// stream; the ASCII bytes `"margins1"` read as a little-endian word.
const STREAM_DOMAIN: u64 = u64::from_le_bytes(*b"margins1");

/// SplitMix64 finalizer: a 64-bit avalanche permutation.
#[inline]
fn mix64(z: u64) -> u64 {
    let z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    let z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// The SplitMix64 generator (Steele, Lea & Flood).
///
/// Used here only to expand seeds and hash stream labels; simulation draws
/// come from [`RandomStream`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GOLDEN_GAMMA);
        mix64(self.state)
    }
}

/// A xoshiro256++ generator: the single source of randomness for sampling.
///
/// Obtain instances through [`split_stream`] so that independent pieces of
/// work get provably distinct streams; [`RandomStream::from_raw_state`] is
/// for tests and cross-checks against reference implementations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RandomStream {
    state: [u64; 4],
}

impl RandomStream {
    /// Builds a stream directly from raw xoshiro256++ state words.
    ///
    /// # Panics
    ///
    /// Panics if all four words are zero, the one state xoshiro256++ cannot
    /// leave.
    pub fn from_raw_state(state: [u64; 4]) -> Self {
        assert!(
            state != [0, 0, 0, 0],
            "xoshiro256++ state must not be all zeros"
        );
        Self { state }
    }

    /// Next raw 64-bit output.
    pub fn next_u64(&mut self) -> u64 {
        let s = &mut self.state;
        let result = s[0]
            .wrapping_add(s[3])
            .rotate_left(23)
            .wrapping_add(s[0]);
        let t = s[1] << 17;
        s[2] ^= s[0];
        s[3] ^= s[1];
        s[1] ^= s[2];
        s[0] ^= s[3];
        s[2] ^= t;
        s[3] = s[3].rotate_left(45);
        result
    }

    /// Uniform draw in `[0, 1)` with 53 bits of precision: the top 53 bits
    /// of [`next_u64`](Self::next_u64) scaled by `2^-53`.
    pub fn next_f64(&mut self) -> f64 {
        const SCALE: f64 = 1.0 / (1u64 << 53) as f64;
        (self.next_u64() >> 11) as f64 * SCALE
    }

    /// Standard normal draw via Marsaglia's polar method.
    ///
    /// The method produces pairs; the second value is discarded so the
    /// stream position depends only on the number of calls and rejected
    /// candidates, never on caller-side buffering.
    pub fn standard_normal(&mut self) -> f64 {
        loop {
            let u = 2.0 * self.next_f64() - 1.0;
            let v = 2.0 * self.next_f64() - 1.0;
            let s = u * u + v * v;
            if s > 0.0 && s < 1.0 {
                return u * math::sqrt(-2.0 * math::ln(s) / s);
            }
        }
    }
}

/// Derives the stream for one `(seed, label, purpose)` triple.
///
/// The derivation absorbs, in order: the domain constant, each 8-byte
/// little-endian chunk of `label` (zero-padded), the label length, and the
/// `purpose` tag. Each absorption step runs the accumulator through the
/// SplitMix64 finalizer, so triples differing in any component — including
/// labels that are prefixes of one another — yield unrelated streams. The
/// final accumulator seeds a SplitMix64 whose first four outputs become the
/// xoshiro256++ state, per the generator authors' seeding recommendation.
pub fn split_stream(seed: u64, label: &str, purpose: u32) -> RandomStream {
    let mut acc = mix64(seed ^ STREAM_DOMAIN);
    for chunk in label.as_bytes().chunks(8) {
        let mut word = [0u8; 8];
        word[..chunk.len()].copy_from_slice(chunk);
        acc = mix64(acc.wrapping_add(GOLDEN_GAMMA) ^ u64::from_le_bytes(word));
    }
    acc = mix64(acc.wrapping_add(GOLDEN_GAMMA) ^ label.len() as u64);
    acc = mix64(acc.wrapping_add(GOLDEN_GAMMA) ^ u64::from(purpose));

    let mut expander = SplitMix64::new(acc);
    let mut state = [
        expander.next_u64(),
        expander.next_u64(),
        expander.next_u64(),
        expander.next_u64(),
    ];
    if state == [0, 0, 0, 0] {
        // Vanishingly unlikely, but xoshiro must never start all-zero.
        state[0] = GOLDEN_GAMMA;
    }
    RandomStream { state }
}

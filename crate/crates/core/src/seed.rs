//! Seed splitting.
//!
//! Every random stream in the toolkit is derived from one master seed:
//! `derive(parent, label) = splitmix64(parent ^ fnv1a64(label))`. Labels are
//! short slash-separated paths such as `"profiles"`, `"metrics/256"` or
//! `"cv/3"`, so adding a new consumer never shifts an existing stream.

const FNV_OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
const FNV_PRIME: u64 = 0x0000_0100_0000_01b3;

fn fnv1a64(label: &str) -> u64 {
    label.bytes().fold(FNV_OFFSET, |hash, byte| {
        (hash ^ u64::from(byte)).wrapping_mul(FNV_PRIME)
    })
}

/// One round of the SplitMix64 finalizer.
pub fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Derive a child seed for the stream named `label`.
pub fn derive(parent: u64, label: &str) -> u64 {
    splitmix64(parent ^ fnv1a64(label))
}

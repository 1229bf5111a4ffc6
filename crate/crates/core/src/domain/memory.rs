use std::fmt;

use rust_decimal::Decimal;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// One of the six discrete memory allocation levels.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "u32", into = "u32")]
pub struct MemorySize(u32);

impl MemorySize {
    pub const MB_128: MemorySize = MemorySize(128);
    pub const MB_256: MemorySize = MemorySize(256);
    pub const MB_512: MemorySize = MemorySize(512);
    pub const MB_1024: MemorySize = MemorySize(1024);
    pub const MB_2048: MemorySize = MemorySize(2048);
    pub const MB_3008: MemorySize = MemorySize(3008);

    /// All sizes, ascending.
    pub const ALL: [MemorySize; 6] = [
        Self::MB_128,
        Self::MB_256,
        Self::MB_512,
        Self::MB_1024,
        Self::MB_2048,
        Self::MB_3008,
    ];

    pub fn new(megabytes: u32) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|m| m.0 == megabytes)
            .ok_or_else(|| {
                Error::domain(format!(
                    "unsupported memory size {megabytes} MB (expected one of 128, 256, 512, 1024, 2048, 3008)"
                ))
            })
    }

    pub fn megabytes(self) -> u32 {
        self.0
    }

    /// Allocated memory in GB with GB = 1024 MB.
    pub fn gigabytes(self) -> Decimal {
        Decimal::from(self.0) / Decimal::from(1024)
    }

    /// Position in [`MemorySize::ALL`].
    pub fn index(self) -> usize {
        Self::ALL
            .iter()
            .position(|m| *m == self)
            .expect("MemorySize values are always one of ALL")
    }

    /// The five sizes other than `self`, ascending.
    pub fn others(self) -> [MemorySize; 5] {
        let mut out = [self; 5];
        let mut i = 0;
        for m in Self::ALL {
            if m != self {
                out[i] = m;
                i += 1;
            }
        }
        out
    }
}

impl TryFrom<u32> for MemorySize {
    type Error = Error;
    fn try_from(value: u32) -> Result<Self> {
        MemorySize::new(value)
    }
}

impl From<MemorySize> for u32 {
    fn from(value: MemorySize) -> u32 {
        value.0
    }
}

impl fmt::Display for MemorySize {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}MB", self.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn only_six_sizes() {
        assert!(MemorySize::new(64).is_err());
        assert!(MemorySize::new(3072).is_err());
        assert_eq!(MemorySize::new(3008).unwrap(), MemorySize::MB_3008);
    }

    #[test]
    fn ordering_follows_megabytes() {
        let mut sorted = MemorySize::ALL;
        sorted.sort();
        assert_eq!(sorted, MemorySize::ALL);
        assert!(MemorySize::MB_2048 < MemorySize::MB_3008);
    }

    #[test]
    fn others_excludes_self() {
        let others = MemorySize::MB_256.others();
        assert!(!others.contains(&MemorySize::MB_256));
        assert_eq!(others[0], MemorySize::MB_128);
        assert_eq!(others[4], MemorySize::MB_3008);
    }

    #[test]
    fn gigabytes_use_binary_convention() {
        assert_eq!(MemorySize::MB_512.gigabytes(), Decimal::new(5, 1));
        assert_eq!(MemorySize::MB_3008.gigabytes(), Decimal::new(29375, 4));
    }

    #[test]
    fn serde_as_integer() {
        assert_eq!(serde_json::to_string(&MemorySize::MB_256).unwrap(), "256");
        assert!(serde_json::from_str::<MemorySize>("100").is_err());
    }
}

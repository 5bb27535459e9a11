//! Size caps for the brute-force routines.

/// Default cap on group orders and determinants for exhaustive searches.
pub const DEFAULT_CAP: u64 = 10_000;

/// Environment variable overriding [`DEFAULT_CAP`].
pub const CAP_ENV: &str = "QUADLAT_CAP";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Largest discriminant group searched exhaustively.
    pub group_cap: u64,
    /// Largest |det| accepted by binary-form enumeration.
    pub det_cap: u64,
}

impl Default for Limits {
    fn default() -> Self {
        Limits { group_cap: DEFAULT_CAP, det_cap: DEFAULT_CAP }
    }
}

impl Limits {
    pub fn with_cap(cap: u64) -> Self {
        Limits { group_cap: cap, det_cap: cap }
    }

    /// Defaults, overridden by `QUADLAT_CAP` when it parses as an integer.
    pub fn from_env() -> Self {
        std::env::var(CAP_ENV).ok().and_then(|v| v.trim().parse().ok()).map_or_else(Limits::default, Limits::with_cap)
    }
}

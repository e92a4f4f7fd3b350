//! Resource guards for the exhaustive algorithms.
//!
//! Every enumeration-heavy operation checks its input size against a fixed
//! bound before starting. The bounds are sized for interactive use; the
//! multiplier set via [`set_scale`] (the CLI wires it to `SWLAB_GUARD_SCALE`)
//! relaxes all of them uniformly.

use std::sync::atomic::{AtomicU64, Ordering};

use crate::error::{Error, Result};

static SCALE_BITS: AtomicU64 = AtomicU64::new(0x3FF0_0000_0000_0000); // 1.0f64

/// Sets the global guard multiplier. Values below 1.0 are clamped to 1.0.
pub fn set_scale(scale: f64) {
    let s = if scale.is_finite() && scale > 1.0 {
        scale
    } else {
        1.0
    };
    SCALE_BITS.store(s.to_bits(), Ordering::Relaxed);
}

/// Current guard multiplier.
pub fn scale() -> f64 {
    f64::from_bits(SCALE_BITS.load(Ordering::Relaxed))
}

/// Checks `actual <= base_limit * scale()`, returning `GuardExceeded` otherwise.
pub fn check(what: &'static str, actual: u128, base_limit: u128) -> Result<()> {
    let limit = (base_limit as f64 * scale()) as u128;
    if actual > limit {
        return Err(Error::GuardExceeded {
            what,
            actual,
            limit,
        });
    }
    Ok(())
}

/// Prime-field and residue-ring moduli.
pub const MODULUS_LIMIT: u128 = 1 << 20;
/// Extension fields: p^e bounded so exhaustive factor search stays cheap.
pub const EXT_CARD_LIMIT: u128 = 1 << 24;
/// Element enumeration of a finite ring.
pub const ENUM_LIMIT: u128 = 1 << 20;
/// Coefficients of a dense tensor power: n^d.
pub const TENSOR_LIMIT: u128 = 4096;
/// Orbit-basis size C(dimM + d - 1, d).
pub const ORBIT_LIMIT: u128 = 4096;
/// Candidate matrices scanned when enumerating GL_n: |ring|^(n^2).
pub const GL_SCAN_LIMIT: u128 = 10_000_000;
/// Entries touched by the balanced-tensor row reduction: dim^4 * |G|.
pub const EPI_ENTRY_LIMIT: u128 = 10_000_000;
/// Group order for group-algebra construction.
pub const GROUP_ALGEBRA_LIMIT: u128 = 256;
/// Elements enumerated by the brute-force radical search: |k|^dim.
pub const RADICAL_ENUM_LIMIT: u128 = 1 << 20;
/// Pairs checked exhaustively by homomorphism tests.
pub const HOM_PAIR_LIMIT: u128 = 10_000;
/// Entries materialized when restricting a module to the group: |G| * dimV^2.
pub const RESTRICT_ENTRY_LIMIT: u128 = 10_000_000;
/// Longest generator words fed to the integer-lattice saturation.
pub const WORD_LEN_LIMIT: u128 = 12;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn check_within_limit() {
        assert!(check("x", 10, 10).is_ok());
        let err = check("x", 11, 10).unwrap_err();
        assert!(err.is_guard());
    }
}

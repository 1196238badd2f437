//! Resource limits shared by all computations.
//!
//! Every iterative procedure in the crate consults a [`Budget`] so that a
//! pathological input surfaces as [`Error::Budget`] instead of a hang.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest admissible characteristic.
pub const MAX_PRIME: u32 = 97;
/// Largest admissible number of variables.
pub const MAX_VARS: usize = 6;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct Budget {
    /// Maximum number of S-pairs processed in a single Gröbner computation.
    pub max_pairs: usize,
    /// Maximum total degree of a basis element.
    pub max_degree: u32,
    /// Maximum number of terms of any intermediate polynomial.
    pub max_terms: usize,
    /// Largest Frobenius level that may be materialized as `p^e`.
    pub e_max: u32,
    /// Upper bound on `p^e` for materialized levels.
    pub max_pe: u64,
    /// Largest number of composed one-step Cartier maps in a single image.
    pub max_iterated_level: u32,
    /// Iteration cap for stable images, test modules and chains.
    pub max_iterations: usize,
    /// Probe cap for one-sided limits.
    pub max_probes: usize,
    /// Deepest grid level used by the jump search.
    pub max_refine_level: u32,
    /// Guard for multiplicative-order computations.
    pub max_order_modulus: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_pairs: 200_000,
            max_degree: 512,
            max_terms: 5_000_000,
            e_max: 12,
            max_pe: 1 << 20,
            max_iterated_level: 4096,
            max_iterations: 64,
            max_probes: 8,
            max_refine_level: 64,
            max_order_modulus: 1_000_000,
        }
    }
}

impl Budget {
    /// Apply `CARTIER_LAB_*` environment overrides, e.g. `CARTIER_LAB_MAX_PAIRS`.
    pub fn with_env_overrides(mut self) -> Result<Self> {
        fn read<T: std::str::FromStr>(key: &str, slot: &mut T) -> Result<()> {
            if let Ok(raw) = std::env::var(key) {
                *slot = raw
                    .trim()
                    .parse()
                    .map_err(|_| Error::Config(format!("{key}: cannot parse `{raw}`")))?;
            }
            Ok(())
        }
        read("CARTIER_LAB_MAX_PAIRS", &mut self.max_pairs)?;
        read("CARTIER_LAB_MAX_DEGREE", &mut self.max_degree)?;
        read("CARTIER_LAB_MAX_TERMS", &mut self.max_terms)?;
        read("CARTIER_LAB_E_MAX", &mut self.e_max)?;
        read("CARTIER_LAB_MAX_PE", &mut self.max_pe)?;
        read("CARTIER_LAB_MAX_ITERATED_LEVEL", &mut self.max_iterated_level)?;
        read("CARTIER_LAB_MAX_ITERATIONS", &mut self.max_iterations)?;
        read("CARTIER_LAB_MAX_PROBES", &mut self.max_probes)?;
        read("CARTIER_LAB_MAX_REFINE_LEVEL", &mut self.max_refine_level)?;
        read("CARTIER_LAB_MAX_ORDER_MODULUS", &mut self.max_order_modulus)?;
        Ok(self)
    }

    pub(crate) fn check_terms(&self, len: usize, what: &str) -> Result<()> {
        if len > self.max_terms {
            return Err(Error::Budget(format!(
                "{what} has {len} terms (limit {})",
                self.max_terms
            )));
        }
        Ok(())
    }
}

use rust_decimal::prelude::FromPrimitive;
use rust_decimal::Decimal;
use serde::{Deserialize, Serialize};

use super::MemorySize;
use crate::{Error, Result};

/// Pay-per-use pricing: a GB-second rate plus a flat per-invocation charge.
///
/// Currency amounts are fixed-point decimals; the per-invocation charge is
/// on the order of 1e-7 and must survive arithmetic untouched.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PricingModel {
    pub price_per_gb_second: Decimal,
    pub price_per_invocation: Decimal,
}

impl PricingModel {
    pub fn new(price_per_gb_second: Decimal, price_per_invocation: Decimal) -> Result<Self> {
        if price_per_gb_second.is_sign_negative() || price_per_invocation.is_sign_negative() {
            return Err(Error::domain("prices must be nonnegative"));
        }
        Ok(PricingModel {
            price_per_gb_second,
            price_per_invocation,
        })
    }

    /// 0.00001667 $ per GB-s and 0.0000002 $ per invocation.
    pub fn aws_default() -> Self {
        PricingModel {
            price_per_gb_second: Decimal::new(1667, 8),
            price_per_invocation: Decimal::new(2, 7),
        }
    }

    pub fn free() -> Self {
        PricingModel {
            price_per_gb_second: Decimal::ZERO,
            price_per_invocation: Decimal::ZERO,
        }
    }
}

impl Default for PricingModel {
    fn default() -> Self {
        PricingModel::aws_default()
    }
}

/// Cost of one execution lasting `duration_ms` at `memory`.
///
/// `duration_s * memory_GB * price_per_gb_second + price_per_invocation`, with
/// the duration converted to a decimal before any arithmetic.
pub fn execution_cost(duration_ms: f64, memory: MemorySize, pricing: &PricingModel) -> Result<Decimal> {
    if !(duration_ms.is_finite() && duration_ms > 0.0) {
        return Err(Error::domain(format!(
            "execution duration must be positive and finite, got {duration_ms} ms"
        )));
    }
    let duration = Decimal::from_f64_retain(duration_ms)
        .or_else(|| Decimal::from_f64(duration_ms))
        .ok_or_else(|| Error::domain(format!("duration {duration_ms} ms is not representable")))?;
    // ms * MB / (1000 * 1024) = GB-s, an exact terminating decimal
    let gb_seconds = duration * Decimal::from(memory.megabytes()) / Decimal::from(1_024_000);
    Ok(gb_seconds * pricing.price_per_gb_second + pricing.price_per_invocation)
}

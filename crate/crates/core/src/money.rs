// SPDX-License-Identifier: MIT OR Apache-2.0

//! Fixed-precision currency amounts and per-unit prices.
//!
//! Amounts of money carry six fraction digits. Rates (currency per gram,
//! currency per kilocalorie) carry twelve so that cheap currencies keep
//! their significant digits; sums of rates at a fixed scale are exact.

use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Mul, Sub};

use rust_decimal::prelude::{FromPrimitive, ToPrimitive};
use rust_decimal::{Decimal, RoundingStrategy};
use serde::{Deserialize, Serialize};

/// Fraction digits kept for money amounts.
pub const MONEY_SCALE: u32 = 6;
/// Fraction digits kept for unit prices.
pub const RATE_SCALE: u32 = 12;

fn round(value: Decimal, scale: u32) -> Decimal {
    let mut v = value.round_dp_with_strategy(scale, RoundingStrategy::MidpointNearestEven);
    v.rescale(scale);
    v
}

/// A currency amount rounded to [`MONEY_SCALE`] fraction digits.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Money(Decimal);

impl Money {
    pub const ZERO: Money = Money(Decimal::ZERO);

    pub fn new(value: Decimal) -> Self {
        Money(round(value, MONEY_SCALE))
    }

    /// Converts a binary float, rounding to six fraction digits.
    ///
    /// Non-finite input maps to zero.
    pub fn from_f64(value: f64) -> Self {
        Decimal::from_f64(value).map(Money::new).unwrap_or(Money::ZERO)
    }

    pub fn value(self) -> Decimal {
        self.0
    }

    pub fn to_f64(self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    pub fn is_zero(self) -> bool {
        self.0.is_zero()
    }

    /// Multiplies by a dimensionless factor and re-rounds.
    pub fn scale(self, factor: Decimal) -> Self {
        Money::new(self.0 * factor)
    }
}

impl Add for Money {
    type Output = Money;
    fn add(self, rhs: Money) -> Money {
        Money(self.0 + rhs.0)
    }
}

impl AddAssign for Money {
    fn add_assign(&mut self, rhs: Money) {
        self.0 += rhs.0;
    }
}

impl Sub for Money {
    type Output = Money;
    fn sub(self, rhs: Money) -> Money {
        Money(self.0 - rhs.0)
    }
}

impl Sum for Money {
    fn sum<I: Iterator<Item = Money>>(iter: I) -> Money {
        iter.fold(Money::ZERO, |a, b| a + b)
    }
}

impl<'a> Sum<&'a Money> for Money {
    fn sum<I: Iterator<Item = &'a Money>>(iter: I) -> Money {
        iter.copied().sum()
    }
}

impl fmt::Display for Money {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Currency per unit of something (gram or kilocalorie), at [`RATE_SCALE`].
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct UnitPrice(Decimal);

impl UnitPrice {
    pub const ZERO: UnitPrice = UnitPrice(Decimal::ZERO);

    pub fn new(value: Decimal) -> Self {
        UnitPrice(round(value, RATE_SCALE))
    }

    pub fn value(self) -> Decimal {
        self.0
    }

    pub fn to_f64(self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    pub fn is_positive(self) -> bool {
        self.0 > Decimal::ZERO
    }

    /// Cost of buying `quantity` units at this price.
    pub fn cost_of(self, quantity: Decimal) -> Money {
        Money::new(self.0 * quantity)
    }
}

impl Add for UnitPrice {
    type Output = UnitPrice;
    fn add(self, rhs: UnitPrice) -> UnitPrice {
        UnitPrice(self.0 + rhs.0)
    }
}

impl Sum for UnitPrice {
    fn sum<I: Iterator<Item = UnitPrice>>(iter: I) -> UnitPrice {
        iter.fold(UnitPrice::ZERO, |a, b| a + b)
    }
}

impl Mul<Decimal> for UnitPrice {
    type Output = UnitPrice;
    fn mul(self, rhs: Decimal) -> UnitPrice {
        UnitPrice::new(self.0 * rhs)
    }
}

impl fmt::Display for UnitPrice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::str::FromStr;

    #[test]
    fn money_rounds_to_six_places() {
        let m = Money::new(Decimal::from_str("1.23456789").unwrap());
        assert_eq!(m.to_string(), "1.234568");
        assert_eq!(Money::from_f64(10.0).to_string(), "10.000000");
    }

    #[test]
    fn rate_sums_are_exact() {
        let a = UnitPrice::new(Decimal::from_str("0.1").unwrap());
        let b = UnitPrice::new(Decimal::from_str("0.2").unwrap());
        assert_eq!((a + b).value(), Decimal::from_str("0.3").unwrap());
    }
}

// SPDX-License-Identifier: MIT OR Apache-2.0

//! Least-cost healthy diet costing.
//!
//! The pipeline prices a food-based dietary guideline at each market
//! location ([`cohd`]), compares it with energy-adjusted household food
//! spending ([`afford`]) and scores the nutrient and food-group adequacy of
//! household diets ([`adequacy`]).

pub mod adequacy;
pub mod afford;
pub mod cohd;
pub mod ingest;
pub mod model;
pub mod money;
pub mod par;
pub mod stats;

pub use cohd::{cohd_all, cohd_location, CohdOptions};
pub use ingest::{validate, Dataset, InputPaths, ValidationReport};
pub use model::{DietBasket, FoodGroup, NutrientId};
pub use money::{Money, UnitPrice};
pub use par::Execution;

//! Seeded random scenarios for property and equivalence checks.
//!
//! Frontier parameters are log-uniform in `[1e-3, 1e3]`, prices uniform in
//! `[0, 1e7]` and discount rates uniform in `(-0.5, 0.5)`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dynamic::{DynamicScenario, PeriodPrices};
use crate::model::{PossibilityFrontier, StaticScenario, Valuation};

pub const PARAM_MIN: f64 = 1e-3;
pub const PARAM_MAX: f64 = 1e3;
pub const PRICE_MAX: f64 = 1e7;
pub const RATE_BOUND: f64 = 0.5;

pub struct ScenarioSampler {
    rng: ChaCha8Rng,
}

impl ScenarioSampler {
    pub fn new(seed: u64) -> Self {
        Self { rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    fn log_uniform(&mut self) -> f64 {
        let (lo, hi) = (PARAM_MIN.ln(), PARAM_MAX.ln());
        self.rng.random_range(lo..=hi).exp()
    }

    fn price(&mut self) -> f64 {
        self.rng.random_range(0.0..=PRICE_MAX)
    }

    pub fn frontier(&mut self) -> PossibilityFrontier {
        PossibilityFrontier::new(self.log_uniform(), self.log_uniform(), self.log_uniform())
            .expect("sampled parameters are positive")
    }

    /// A valuation with at least one positive price.
    pub fn valuation(&mut self) -> Valuation {
        loop {
            if let Ok(v) = Valuation::new(self.price(), self.price()) {
                return v;
            }
        }
    }

    /// A valuation with both prices strictly positive.
    pub fn positive_valuation(&mut self) -> Valuation {
        loop {
            let v = self.valuation();
            if v.p_life() > 0.0 && v.p_job() > 0.0 {
                return v;
            }
        }
    }

    pub fn discount_rate(&mut self) -> f64 {
        loop {
            let i = self.rng.random_range(-RATE_BOUND..RATE_BOUND);
            if i > -RATE_BOUND {
                return i;
            }
        }
    }

    pub fn static_scenario(&mut self) -> StaticScenario {
        StaticScenario::new(self.frontier(), self.valuation())
    }

    pub fn dynamic_scenario(&mut self) -> DynamicScenario {
        let (k1, k2) = (self.frontier(), self.frontier());
        let v1 = self.positive_valuation();
        let v2 = self.positive_valuation();
        let i = self.discount_rate();
        DynamicScenario::new(
            k1,
            k2,
            PeriodPrices::new(v1.p_life(), v1.p_job()).expect("sampled prices are valid"),
            PeriodPrices::new(v2.p_life(), v2.p_job()).expect("sampled prices are valid"),
            i,
        )
        .expect("sampled scenario is valid")
    }
}

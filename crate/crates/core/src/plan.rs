//! The weekly plan matrix: three scheduled visits per vehicle.

use rand::Rng;

use crate::agents::PoiId;
use crate::error::SimError;

/// Hours in one plan cycle.
pub const HOURS_PER_WEEK: u32 = 168;
/// Scheduled visits per plan.
pub const PLAN_ROWS: usize = 3;
/// Experience stored in a row before its first visit.
pub const INITIAL_EXPERIENCE: f64 = 1.0;
/// Inclusive bounds of a generated visit duration, in hours.
pub const MIN_DURATION: u32 = 1;
pub const MAX_DURATION: u32 = 5;

/// One scheduled visit.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PlanRow {
    pub poi_id: PoiId,
    /// Hour of week in `[0, 168)` at which the visit fires.
    pub time: u32,
    /// Stay length in hours, at least 1.
    pub duration: u32,
    /// Last perceived quality, `1.0` until the first visit.
    pub experience: f64,
    pub suspended: bool,
}

impl PlanRow {
    pub fn new(poi_id: PoiId, time: u32, duration: u32) -> Self {
        PlanRow {
            poi_id,
            time,
            duration,
            experience: INITIAL_EXPERIENCE,
            suspended: false,
        }
    }

    pub fn is_valid(&self) -> bool {
        self.duration >= 1
            && self.time < HOURS_PER_WEEK
            && (0.0..=1.25).contains(&self.experience)
    }
}

/// A vehicle's weekly schedule. Always exactly three rows; strategies
/// rewrite rows in place but never add or remove them.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Plan {
    pub rows: [PlanRow; PLAN_ROWS],
}

impl Plan {
    pub fn new(rows: [PlanRow; PLAN_ROWS]) -> Self {
        Plan { rows }
    }

    /// Draws a random plan: each row picks a PoI uniformly from `poi_ids`,
    /// an hour of week uniformly in `[0, 168)` and a duration in `[1, 5]`.
    pub fn random<R: Rng + ?Sized>(rng: &mut R, poi_ids: &[PoiId]) -> Result<Self, SimError> {
        if poi_ids.is_empty() {
            return Err(SimError::NoPois);
        }
        let rows = std::array::from_fn(|_| {
            let poi_id = poi_ids[rng.random_range(0..poi_ids.len())];
            let time = rng.random_range(0..HOURS_PER_WEEK);
            let duration = rng.random_range(MIN_DURATION..=MAX_DURATION);
            PlanRow::new(poi_id, time, duration)
        });
        Ok(Plan { rows })
    }

    /// Index of the first row scheduled at `hour_of_week`, if any.
    pub fn scheduled_at(&self, hour_of_week: u32) -> Option<usize> {
        self.rows.iter().position(|r| r.time == hour_of_week)
    }

    pub fn all_suspended(&self) -> bool {
        self.rows.iter().all(|r| r.suspended)
    }

    pub fn any_suspended(&self) -> bool {
        self.rows.iter().any(|r| r.suspended)
    }

    pub fn mean_experience(&self) -> f64 {
        self.rows.iter().map(|r| r.experience).sum::<f64>() / PLAN_ROWS as f64
    }
}

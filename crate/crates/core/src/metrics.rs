//! Per-tick evaluation measures and the weekly no-visit counter.

use std::collections::HashMap;

use crate::agents::{Poi, PoiId, Vehicle};
use crate::plan::PLAN_ROWS;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MetricsSample {
    pub clock: u64,
    pub quality_index: f64,
    pub connectivity_index: f64,
    pub sdu: f64,
}

/// Everything one run produces.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct RunSeries {
    pub samples: Vec<MetricsSample>,
    pub weekly_no_visit: Vec<usize>,
}

/// Mean of every vehicle's three plan experiences, suspended rows included.
pub fn quality_index(vehicles: &[Vehicle]) -> f64 {
    if vehicles.is_empty() {
        return 0.0;
    }
    let total: f64 = vehicles
        .iter()
        .flat_map(|v| v.plan.rows.iter())
        .map(|r| r.experience)
        .sum();
    total / (PLAN_ROWS * vehicles.len()) as f64
}

/// Occupants per PoI this hour (vehicles at the PoI or communicating there).
pub fn occupancy(vehicles: &[Vehicle]) -> HashMap<PoiId, usize> {
    let mut counts = HashMap::new();
    for v in vehicles.iter().filter(|v| v.state.is_at_poi()) {
        if let Some(p) = v.current_poi {
            *counts.entry(p).or_insert(0) += 1;
        }
    }
    counts
}

/// Mean instantaneous co-location degree: a PoI holding `n` vehicles gives
/// each of them `n - 1` connections.
pub fn connectivity_index(vehicles: &[Vehicle]) -> f64 {
    if vehicles.is_empty() {
        return 0.0;
    }
    let links: usize = occupancy(vehicles).values().map(|&n| n * (n - 1)).sum();
    links as f64 / vehicles.len() as f64
}

/// Population standard deviation of per-PoI occupant counts.
pub fn poi_utilization_sd(pois: &[Poi], vehicles: &[Vehicle]) -> f64 {
    let occ = occupancy(vehicles);
    let counts: Vec<f64> = pois
        .iter()
        .map(|p| occ.get(&p.id).copied().unwrap_or(0) as f64)
        .collect();
    population_sd(&counts)
}

pub fn population_sd(values: &[f64]) -> f64 {
    if values.is_empty() {
        return 0.0;
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n;
    var.sqrt()
}

/// Counts completed arrivals per vehicle within the current week.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeeklyVisits {
    arrivals: Vec<u32>,
}

impl WeeklyVisits {
    pub fn new(vehicle_count: usize) -> Self {
        WeeklyVisits {
            arrivals: vec![0; vehicle_count],
        }
    }

    pub fn record_arrival(&mut self, vehicle_index: usize) {
        self.arrivals[vehicle_index] += 1;
    }

    pub fn arrivals(&self) -> &[u32] {
        &self.arrivals
    }

    /// Vehicles without a single arrival this week; resets the counters.
    pub fn close_week(&mut self) -> usize {
        let idle = self.arrivals.iter().filter(|&&n| n == 0).count();
        self.arrivals.iter_mut().for_each(|n| *n = 0);
        idle
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::agents::{HomeId, VehicleId, VehicleState};
    use crate::plan::{Plan, PlanRow};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn vehicle(id: u32, exps: [f64; 3]) -> Vehicle {
        let rows = std::array::from_fn(|k| PlanRow {
            experience: exps[k],
            ..PlanRow::new(PoiId(k as u32), k as u32, 1)
        });
        Vehicle::new(VehicleId(id), HomeId(0), 0.5, Plan::new(rows))
    }

    fn place(v: &mut Vehicle, poi: Option<u32>) {
        match poi {
            Some(p) => {
                v.state = VehicleState::AtPoi;
                v.current_poi = Some(PoiId(p));
                v.remaining_stay = 1;
            }
            None => {
                v.state = VehicleState::AtHome;
                v.current_poi = None;
            }
        }
    }

    fn pois(n: u32) -> Vec<Poi> {
        (0..n).map(|i| Poi { id: PoiId(i), quality: 0.5, position: (i, 0) }).collect()
    }

    #[test]
    fn fresh_experiences_give_unit_quality_index() {
        let vs: Vec<_> = (0..4).map(|i| vehicle(i, [1.0; 3])).collect();
        assert_eq!(quality_index(&vs), 1.0);
    }

    #[test]
    fn table_four_quality_index() {
        let vs = [vehicle(569, [0.0909, 0.5684, 0.3325])];
        assert!((quality_index(&vs) - 0.3306).abs() < 5e-5);
    }

    #[test]
    fn quality_index_equals_flat_sum() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let vs: Vec<_> = (0..5)
            .map(|i| vehicle(i, std::array::from_fn(|_| rng.random_range(0.0..1.25))))
            .collect();
        let mut cells = Vec::new();
        for v in &vs {
            for r in &v.plan.rows {
                cells.push(r.experience);
            }
        }
        assert_eq!(cells.len(), 15);
        let oracle = cells.iter().sum::<f64>() / 15.0;
        assert!((quality_index(&vs) - oracle).abs() < 1e-12);
    }

    #[test]
    fn connectivity_cases() {
        let mut vs: Vec<_> = (0..5).map(|i| vehicle(i, [1.0; 3])).collect();
        assert_eq!(connectivity_index(&vs), 0.0);
        for v in vs.iter_mut().take(3) {
            place(v, Some(2));
        }
        assert!((connectivity_index(&vs) - 1.2).abs() < 1e-12);
        for v in vs.iter_mut() {
            place(v, Some(0));
        }
        assert_eq!(connectivity_index(&vs), 4.0);
    }

    #[test]
    fn outbound_vehicles_are_not_connected() {
        let mut vs: Vec<_> = (0..3).map(|i| vehicle(i, [1.0; 3])).collect();
        for v in vs.iter_mut() {
            v.state = VehicleState::Outbound;
            v.current_poi = Some(PoiId(1));
        }
        assert_eq!(connectivity_index(&vs), 0.0);
        assert_eq!(poi_utilization_sd(&pois(3), &vs), 0.0);
    }

    #[test]
    fn utilization_sd_cases() {
        let mut vs: Vec<_> = (0..4).map(|i| vehicle(i, [1.0; 3])).collect();
        assert_eq!(poi_utilization_sd(&pois(4), &vs), 0.0);
        for v in vs.iter_mut() {
            place(v, Some(0));
        }
        assert!((poi_utilization_sd(&pois(4), &vs) - 3f64.sqrt()).abs() < 1e-12);
        for (i, v) in vs.iter_mut().enumerate() {
            place(v, Some(i as u32));
        }
        assert_eq!(poi_utilization_sd(&pois(4), &vs), 0.0);
    }

    #[test]
    fn weekly_counter_resets() {
        let mut w = WeeklyVisits::new(4);
        w.record_arrival(1);
        w.record_arrival(1);
        w.record_arrival(3);
        assert_eq!(w.close_week(), 2);
        assert_eq!(w.close_week(), 4);
    }
}

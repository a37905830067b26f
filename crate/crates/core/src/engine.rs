//! World construction and the hourly tick loop.
//!
//! Every tick visits vehicles in ascending id order and runs exactly one
//! state handler per vehicle:
//!
//! | state           | handler                                   |
//! |-----------------|-------------------------------------------|
//! | `AtHome`        | strategy-specific outbound check          |
//! | `Outbound`      | arrive, record experience                 |
//! | `AtPoi`         | count down the stay                       |
//! | `Communicating` | exchange contacts (Replace*), return home |
//!
//! After the vehicles, every PoI's quality takes one step, a metrics
//! sample is recorded and the clock advances. A decision at hour `t` with
//! duration `d` therefore arrives at `t + 1`, turns to communicating at
//! `t + d + 1` and is home again at the end of tick `t + d + 2`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::agents::{Cell, HomeId, Poi, PoiId, Vehicle, VehicleId, VehicleState};
use crate::error::SimError;
use crate::metrics::{self, MetricsSample, RunSeries, WeeklyVisits};
use crate::plan::{Plan, HOURS_PER_WEEK};
use crate::quality::{experience_of, QualityProcess, RandomWalk, DEFAULT_STEP_SIGMA};
use crate::strategy::{
    check_outbound_as_planned, check_outbound_blacklist_with, check_outbound_replace, triadic_closure,
    AlternativeScan, ClosureParams, StrategyKind, TieGraph, Visit,
};
use crate::ties::TieTable;

/// Parameters of a single simulation run.
#[derive(Clone, Debug, PartialEq)]
pub struct SimConfig {
    pub grid_size: u32,
    pub poi_count: u32,
    pub home_count: u32,
    pub strong_tie_threshold: u32,
    pub strategy: StrategyKind,
    pub weeks: u32,
    pub runs: u32,
    pub step_sigma: f64,
    pub seed: u64,
    pub closure_requires_both_strong: bool,
    pub alternative_scan: AlternativeScan,
}

impl Default for SimConfig {
    fn default() -> Self {
        SimConfig {
            grid_size: 75,
            poi_count: 15,
            home_count: 500,
            strong_tie_threshold: 5,
            strategy: StrategyKind::AsPlanned,
            weeks: 20,
            runs: 100,
            step_sigma: DEFAULT_STEP_SIGMA,
            seed: 0,
            closure_requires_both_strong: false,
            alternative_scan: AlternativeScan::default(),
        }
    }
}

impl SimConfig {
    pub fn validate(&self) -> Result<(), SimError> {
        let bad = |msg: &str| Err(SimError::InvalidConfig(msg.to_string()));
        if self.grid_size == 0 {
            return bad("grid_size must be at least 1");
        }
        if self.poi_count == 0 {
            return bad("poi_count must be at least 1");
        }
        if self.home_count == 0 {
            return bad("home_count must be at least 1");
        }
        if self.strong_tie_threshold == 0 {
            return bad("strong_tie_threshold must be at least 1");
        }
        if self.runs == 0 {
            return bad("runs must be at least 1");
        }
        if !(self.step_sigma.is_finite() && self.step_sigma > 0.0) {
            return bad("step_sigma must be a positive number");
        }
        let cells = u64::from(self.grid_size) * u64::from(self.grid_size);
        let needed = u64::from(self.poi_count) + u64::from(self.home_count);
        if needed > cells {
            return Err(SimError::GridTooSmall {
                width: self.grid_size,
                height: self.grid_size,
                needed,
                available: cells,
            });
        }
        Ok(())
    }

    /// Ten percent more vehicles than homes, rounded up.
    pub fn vehicle_count(&self) -> u32 {
        vehicle_count_for(self.home_count)
    }

    pub fn ticks(&self) -> u64 {
        u64::from(self.weeks) * u64::from(HOURS_PER_WEEK)
    }
}

pub fn vehicle_count_for(home_count: u32) -> u32 {
    (u64::from(home_count) * 11).div_ceil(10) as u32
}

/// Something that happened during a tick, kept when event logging is on.
#[derive(Clone, Debug, PartialEq)]
pub enum Event {
    Depart { clock: u64, vehicle: VehicleId, poi: PoiId, row: usize },
    Arrive { clock: u64, vehicle: VehicleId, poi: PoiId },
    /// A plan row's experience changed, by a visit or by a copied row.
    Experience { clock: u64, vehicle: VehicleId, row: usize, value: f64 },
    Suspend { clock: u64, vehicle: VehicleId, row: usize },
    StartCommunicating { clock: u64, vehicle: VehicleId },
    Encounter { clock: u64, a: VehicleId, b: VehicleId },
    Home { clock: u64, vehicle: VehicleId },
}

/// The simulated world and everything needed to advance it.
pub struct World {
    width: u32,
    height: u32,
    pois: Vec<Poi>,
    homes: Vec<Cell>,
    vehicles: Vec<Vehicle>,
    /// Plan row chosen by each vehicle's pending or current visit.
    active_rows: Vec<Option<usize>>,
    clock: u64,
    config: SimConfig,
    rng: ChaCha8Rng,
    quality: Box<dyn QualityProcess>,
    visits: WeeklyVisits,
    series: RunSeries,
    events: Option<Vec<Event>>,
}

impl World {
    /// Builds a random world: PoIs and homes on distinct cells, vehicles
    /// attached to uniformly chosen homes with random plans and
    /// expectations.
    pub fn setup(config: &SimConfig, seed: u64) -> Result<Self, SimError> {
        Self::setup_with_process(
            config,
            seed,
            Box::new(RandomWalk {
                step_sigma: config.step_sigma,
            }),
        )
    }

    pub fn setup_with_process(
        config: &SimConfig,
        seed: u64,
        quality: Box<dyn QualityProcess>,
    ) -> Result<Self, SimError> {
        config.validate()?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let side = config.grid_size;
        let cells = (side as usize) * (side as usize);
        let needed = (config.poi_count + config.home_count) as usize;
        let picks = rand::seq::index::sample(&mut rng, cells, needed);
        let to_cell = |i: usize| ((i % side as usize) as u32, (i / side as usize) as u32);

        let mut picks = picks.iter();
        let mut pois: Vec<Poi> = (0..config.poi_count)
            .map(|i| Poi {
                id: PoiId(i),
                quality: 0.0,
                position: to_cell(picks.next().expect("sampled enough cells")),
            })
            .collect();
        let homes: Vec<Cell> = picks.map(to_cell).collect();

        let poi_ids: Vec<PoiId> = pois.iter().map(|p| p.id).collect();
        let mut vehicles = Vec::with_capacity(config.vehicle_count() as usize);
        for i in 0..config.vehicle_count() {
            let home = HomeId(rng.random_range(0..config.home_count));
            let plan = Plan::random(&mut rng, &poi_ids)?;
            let expectation = rng.random::<f64>();
            vehicles.push(Vehicle::new(VehicleId(i), home, expectation, plan));
        }
        for p in pois.iter_mut() {
            p.quality = quality.init(&mut rng);
        }

        Ok(Self::assemble(config, side, side, pois, homes, vehicles, rng, quality))
    }

    /// Builds a world from explicit agents, e.g. a hand-written fixture.
    /// Vehicles are reordered by id; ids must be unique and every planned
    /// PoI must exist.
    pub fn from_parts(
        config: &SimConfig,
        mut pois: Vec<Poi>,
        homes: Vec<Cell>,
        mut vehicles: Vec<Vehicle>,
        seed: u64,
    ) -> Result<Self, SimError> {
        let invalid = |m: String| Err(SimError::InvalidWorld(m));
        if pois.is_empty() {
            return Err(SimError::NoPois);
        }
        pois.sort_by_key(|p| p.id);
        vehicles.sort_by_key(|v| v.id);
        if pois.windows(2).any(|w| w[0].id == w[1].id) {
            return invalid("duplicate PoI id".into());
        }
        if vehicles.windows(2).any(|w| w[0].id == w[1].id) {
            return invalid("duplicate vehicle id".into());
        }
        for v in &vehicles {
            if !v.is_consistent() {
                return invalid(format!("vehicle {} has inconsistent state", v.id));
            }
            if let Some(r) = v.plan.rows.iter().find(|r| pois.binary_search_by_key(&r.poi_id, |p| p.id).is_err()) {
                return invalid(format!("vehicle {} plans unknown PoI {}", v.id, r.poi_id));
            }
            if v.state != VehicleState::AtHome {
                return invalid(format!("vehicle {} must start at home", v.id));
            }
            if v.ties.owner() != v.id {
                return invalid(format!("vehicle {} holds another vehicle's tie table", v.id));
            }
        }
        if pois.iter().any(|p| !(0.0..=1.0).contains(&p.quality)) {
            return invalid("PoI quality outside [0, 1]".into());
        }
        let quality = Box::new(RandomWalk {
            step_sigma: config.step_sigma,
        });
        let side = config.grid_size;
        Ok(Self::assemble(
            config,
            side,
            side,
            pois,
            homes,
            vehicles,
            ChaCha8Rng::seed_from_u64(seed),
            quality,
        ))
    }

    #[allow(clippy::too_many_arguments)]
    fn assemble(
        config: &SimConfig,
        width: u32,
        height: u32,
        pois: Vec<Poi>,
        homes: Vec<Cell>,
        vehicles: Vec<Vehicle>,
        rng: ChaCha8Rng,
        quality: Box<dyn QualityProcess>,
    ) -> Self {
        let n = vehicles.len();
        World {
            width,
            height,
            pois,
            homes,
            vehicles,
            active_rows: vec![None; n],
            clock: 0,
            config: config.clone(),
            rng,
            quality,
            visits: WeeklyVisits::new(n),
            series: RunSeries::default(),
            events: None,
        }
    }

    pub fn enable_event_log(&mut self) {
        self.events.get_or_insert_with(Vec::new);
    }

    pub fn events(&self) -> &[Event] {
        self.events.as_deref().unwrap_or(&[])
    }

    pub fn clock(&self) -> u64 {
        self.clock
    }

    pub fn dimensions(&self) -> (u32, u32) {
        (self.width, self.height)
    }

    pub fn config(&self) -> &SimConfig {
        &self.config
    }

    pub fn pois(&self) -> &[Poi] {
        &self.pois
    }

    pub fn homes(&self) -> &[Cell] {
        &self.homes
    }

    pub fn vehicles(&self) -> &[Vehicle] {
        &self.vehicles
    }

    pub fn vehicle(&self, id: VehicleId) -> Option<&Vehicle> {
        index_of(&self.vehicles, id).map(|i| &self.vehicles[i])
    }

    pub fn poi(&self, id: PoiId) -> Option<&Poi> {
        self.pois
            .binary_search_by_key(&id, |p| p.id)
            .ok()
            .map(|i| &self.pois[i])
    }

    /// Overrides a PoI's current quality (clamped to `[0, 1]`).
    pub fn set_poi_quality(&mut self, id: PoiId, quality: f64) -> bool {
        match self.pois.binary_search_by_key(&id, |p| p.id) {
            Ok(i) => {
                self.pois[i].quality = quality.clamp(0.0, 1.0);
                true
            }
            Err(_) => false,
        }
    }

    pub fn series(&self) -> &RunSeries {
        &self.series
    }

    pub fn into_series(self) -> RunSeries {
        self.series
    }

    /// Arrivals counted so far in the current week, by vehicle index.
    pub fn arrivals_this_week(&self) -> &[u32] {
        self.visits.arrivals()
    }

    pub fn sample(&self) -> MetricsSample {
        MetricsSample {
            clock: self.clock,
            quality_index: metrics::quality_index(&self.vehicles),
            connectivity_index: metrics::connectivity_index(&self.vehicles),
            sdu: metrics::poi_utilization_sd(&self.pois, &self.vehicles),
        }
    }

    /// True when every tie record has a matching mirror record.
    pub fn ties_symmetric(&self) -> bool {
        self.vehicles.iter().all(|v| {
            v.ties.iter().all(|r| {
                self.vehicle(r.peer_id)
                    .and_then(|peer| peer.ties.get(v.id))
                    .is_some_and(|m| {
                        (m.last_encounter, m.encounters, m.strong)
                            == (r.last_encounter, r.encounters, r.strong)
                    })
            })
        })
    }

    /// Advances the world by one hour and returns the sample recorded for it.
    pub fn tick(&mut self) -> MetricsSample {
        let hour_of_week = (self.clock % u64::from(HOURS_PER_WEEK)) as u32;
        for idx in 0..self.vehicles.len() {
            match self.vehicles[idx].state {
                VehicleState::AtHome => self.check_outbound(idx, hour_of_week),
                VehicleState::Outbound => self.move_location(idx),
                VehicleState::AtPoi => self.check_inbound(idx),
                VehicleState::Communicating => {
                    self.communicate(idx);
                    self.move_home(idx);
                }
            }
        }
        for p in self.pois.iter_mut() {
            p.quality = self.quality.step(p.quality, &mut self.rng);
        }
        let sample = self.sample();
        self.series.samples.push(sample);
        self.clock += 1;
        if self.clock.is_multiple_of(u64::from(HOURS_PER_WEEK)) {
            let idle = self.visits.close_week();
            self.vehicles.iter_mut().for_each(|v| v.visited_this_week = false);
            self.series.weekly_no_visit.push(idle);
        }
        sample
    }

    /// Runs `weeks` full weeks.
    pub fn run_weeks(&mut self, weeks: u32) {
        for _ in 0..u64::from(weeks) * u64::from(HOURS_PER_WEEK) {
            self.tick();
        }
    }

    fn log(&mut self, event: Event) {
        if let Some(events) = self.events.as_mut() {
            events.push(event);
        }
    }

    fn check_outbound(&mut self, idx: usize, hour_of_week: u32) {
        let vehicle = &self.vehicles[idx];
        let expectation = vehicle.expectation();
        let before = vehicle.plan;
        let mut plan = vehicle.plan;
        let scan = self.config.alternative_scan;
        let decision: Option<Visit> = match self.config.strategy {
            StrategyKind::AsPlanned => check_outbound_as_planned(&plan, hour_of_week),
            StrategyKind::Blacklist => check_outbound_blacklist_with(&mut plan, hour_of_week, expectation, scan),
            StrategyKind::Replace | StrategyKind::ReplaceWithClosure => {
                if plan.any_suspended() {
                    let friends: Vec<(VehicleId, &Plan)> = vehicle
                        .ties
                        .strong_friends()
                        .into_iter()
                        .filter_map(|f| self.vehicle(f).map(|v| (f, &v.plan)))
                        .collect();
                    check_outbound_replace(&mut plan, hour_of_week, expectation, &friends, scan)
                } else {
                    check_outbound_blacklist_with(&mut plan, hour_of_week, expectation, scan)
                }
            }
        };

        if self.events.is_some() && plan != before {
            let (clock, id) = (self.clock, self.vehicles[idx].id);
            for row in 0..plan.rows.len() {
                if plan.rows[row].experience.to_bits() != before.rows[row].experience.to_bits() {
                    let value = plan.rows[row].experience;
                    self.log(Event::Experience { clock, vehicle: id, row, value });
                }
                if plan.rows[row].suspended && !before.rows[row].suspended {
                    self.log(Event::Suspend { clock, vehicle: id, row });
                }
            }
        }
        self.vehicles[idx].plan = plan;

        if let Some(visit) = decision {
            debug_assert!(
                self.config.strategy == StrategyKind::AsPlanned || !plan.rows[visit.row].suspended
            );
            let v = &mut self.vehicles[idx];
            v.state = VehicleState::Outbound;
            v.current_poi = Some(visit.poi_id);
            v.remaining_stay = visit.duration;
            self.active_rows[idx] = Some(visit.row);
            let (clock, id) = (self.clock, v.id);
            self.log(Event::Depart { clock, vehicle: id, poi: visit.poi_id, row: visit.row });
        }
    }

    fn move_location(&mut self, idx: usize) {
        let poi = self.vehicles[idx].current_poi.expect("outbound vehicle has a destination");
        let quality = self.poi(poi).map_or(0.0, |p| p.quality);
        let experience = experience_of(quality, &mut self.rng);
        let row = self.active_rows[idx].expect("outbound vehicle has an active row");
        let v = &mut self.vehicles[idx];
        v.plan.rows[row].experience = experience;
        v.state = VehicleState::AtPoi;
        v.visited_this_week = true;
        self.visits.record_arrival(idx);
        let (clock, id) = (self.clock, v.id);
        self.log(Event::Arrive { clock, vehicle: id, poi });
        self.log(Event::Experience { clock, vehicle: id, row, value: experience });
    }

    fn check_inbound(&mut self, idx: usize) {
        let v = &mut self.vehicles[idx];
        v.remaining_stay = v.remaining_stay.saturating_sub(1);
        if v.remaining_stay == 0 {
            v.state = VehicleState::Communicating;
            let (clock, id) = (self.clock, v.id);
            self.log(Event::StartCommunicating { clock, vehicle: id });
        }
    }

    fn communicate(&mut self, idx: usize) {
        if !self.config.strategy.communicates() {
            return;
        }
        let here = self.vehicles[idx].current_poi;
        let me = self.vehicles[idx].id;
        let now = self.clock;
        let threshold = self.config.strong_tie_threshold;

        let peers: Vec<usize> = (0..self.vehicles.len())
            .filter(|&j| {
                j != idx && self.vehicles[j].state.is_at_poi() && self.vehicles[j].current_poi == here
            })
            .collect();
        for j in peers {
            let other = self.vehicles[j].id;
            self.vehicles[idx]
                .ties
                .record_encounter(other, now, threshold)
                .expect("distinct vehicles");
            self.vehicles[j]
                .ties
                .record_encounter(me, now, threshold)
                .expect("distinct vehicles");
            self.log(Event::Encounter { clock: now, a: me, b: other });
        }

        if self.config.strategy.uses_closure() {
            let params = ClosureParams {
                now,
                threshold,
                require_both_strong: self.config.closure_requires_both_strong,
            };
            let mut graph = VehicleGraph(&mut self.vehicles);
            triadic_closure(me, &mut graph, params, &mut self.rng);
        }
    }

    fn move_home(&mut self, idx: usize) {
        let v = &mut self.vehicles[idx];
        v.state = VehicleState::AtHome;
        v.current_poi = None;
        v.remaining_stay = 0;
        self.active_rows[idx] = None;
        let (clock, id) = (self.clock, v.id);
        self.log(Event::Home { clock, vehicle: id });
    }
}

fn index_of(vehicles: &[Vehicle], id: VehicleId) -> Option<usize> {
    vehicles.binary_search_by_key(&id, |v| v.id).ok()
}

struct VehicleGraph<'a>(&'a mut [Vehicle]);

impl TieGraph for VehicleGraph<'_> {
    fn ties(&self, id: VehicleId) -> Option<&TieTable> {
        index_of(self.0, id).map(|i| &self.0[i].ties)
    }

    fn ties_mut(&mut self, id: VehicleId) -> Option<&mut TieTable> {
        index_of(self.0, id).map(move |i| &mut self.0[i].ties)
    }
}

/// Sets up a world from `run_seed` and simulates `config.weeks` weeks.
pub fn run(config: &SimConfig, run_seed: u64) -> Result<RunSeries, SimError> {
    let mut world = World::setup(config, run_seed)?;
    world.run_weeks(config.weeks);
    Ok(world.into_series())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::plan::PlanRow;

    fn small(strategy: StrategyKind) -> SimConfig {
        SimConfig {
            grid_size: 10,
            poi_count: 3,
            home_count: 10,
            strategy,
            weeks: 2,
            runs: 1,
            ..SimConfig::default()
        }
    }

    #[test]
    fn default_world_population() {
        let w = World::setup(&SimConfig::default(), 1).unwrap();
        assert_eq!(w.pois().len(), 15);
        assert_eq!(w.homes().len(), 500);
        assert_eq!(w.vehicles().len(), 550);
        assert_eq!(w.clock(), 0);
        assert!(w.vehicles().iter().all(|v| v.state == VehicleState::AtHome));
        assert_eq!(metrics::quality_index(w.vehicles()), 1.0);

        let mut cells: Vec<Cell> = w.pois().iter().map(|p| p.position).chain(w.homes().iter().copied()).collect();
        cells.sort();
        cells.dedup();
        assert_eq!(cells.len(), 515);
        assert!(cells.iter().all(|&(x, y)| x < 75 && y < 75));
        assert!(w.pois().iter().all(|p| (0.0..=1.0).contains(&p.quality)));
        assert!(w.vehicles().iter().all(|v| (0.0..=1.0).contains(&v.expectation())));
    }

    #[test]
    fn minimal_world() {
        let cfg = SimConfig { poi_count: 1, home_count: 1, ..SimConfig::default() };
        let w = World::setup(&cfg, 0).unwrap();
        assert_eq!(w.vehicles().len(), 2);
        assert!(w.vehicles().iter().all(|v| v.home_id == HomeId(0)));
    }

    #[test]
    fn grid_too_small() {
        let cfg = SimConfig { grid_size: 3, poi_count: 5, home_count: 5, ..SimConfig::default() };
        assert!(matches!(World::setup(&cfg, 0), Err(SimError::GridTooSmall { needed: 10, available: 9, .. })));
        let exact = SimConfig { grid_size: 3, poi_count: 4, home_count: 5, ..SimConfig::default() };
        assert!(World::setup(&exact, 0).is_ok());
    }

    #[test]
    fn invalid_counts_rejected() {
        for cfg in [
            SimConfig { poi_count: 0, ..SimConfig::default() },
            SimConfig { home_count: 0, ..SimConfig::default() },
            SimConfig { strong_tie_threshold: 0, ..SimConfig::default() },
            SimConfig { runs: 0, ..SimConfig::default() },
            SimConfig { step_sigma: 0.0, ..SimConfig::default() },
        ] {
            assert!(matches!(cfg.validate(), Err(SimError::InvalidConfig(_))));
        }
    }

    #[test]
    fn setup_is_deterministic() {
        let cfg = SimConfig::default();
        let a = World::setup(&cfg, 42).unwrap();
        let b = World::setup(&cfg, 42).unwrap();
        assert_eq!(a.pois(), b.pois());
        assert_eq!(a.homes(), b.homes());
        assert_eq!(a.vehicles(), b.vehicles());
        let c = World::setup(&cfg, 43).unwrap();
        assert_ne!(a.vehicles(), c.vehicles());
    }

    #[test]
    fn zero_weeks_gives_empty_series() {
        let cfg = SimConfig { weeks: 0, ..small(StrategyKind::Blacklist) };
        let s = run(&cfg, 3).unwrap();
        assert!(s.samples.is_empty() && s.weekly_no_visit.is_empty());
    }

    #[test]
    fn run_lengths_and_determinism() {
        for strategy in StrategyKind::ALL {
            let cfg = small(strategy);
            let a = run(&cfg, 9).unwrap();
            assert_eq!(a.samples.len(), 336);
            assert_eq!(a.weekly_no_visit.len(), 2);
            assert_eq!(a, run(&cfg, 9).unwrap());
            for (t, s) in a.samples.iter().enumerate() {
                assert_eq!(s.clock, t as u64);
            }
        }
    }

    #[test]
    fn quiescent_tick_only_moves_qualities_and_clock() {
        let cfg = small(StrategyKind::AsPlanned);
        let mut w = World::setup(&cfg, 5).unwrap();
        // Move every row away from hour 0.
        for v in w.vehicles.iter_mut() {
            for r in v.plan.rows.iter_mut() {
                r.time = 100;
            }
        }
        let vehicles = w.vehicles().to_vec();
        let qualities: Vec<f64> = w.pois().iter().map(|p| p.quality).collect();
        w.tick();
        assert_eq!(w.vehicles(), &vehicles[..]);
        assert_eq!(w.clock(), 1);
        let after: Vec<f64> = w.pois().iter().map(|p| p.quality).collect();
        assert_ne!(qualities, after);
    }

    fn fixture_vehicle(id: u32, row: PlanRow) -> Vehicle {
        let parked = PlanRow::new(PoiId(0), 160, 1);
        Vehicle::new(VehicleId(id), HomeId(0), 0.3, Plan::new([row, parked, parked]))
    }

    /// Three vehicles arrive together at PoI 0 and finish together: the
    /// first to communicate meets both others, the second meets the third
    /// (the first has already gone home), so each ends with two records.
    #[test]
    fn colocated_trio_forms_pairwise_ties() {
        let cfg = SimConfig { strategy: StrategyKind::Replace, ..small(StrategyKind::Replace) };
        let pois = vec![Poi { id: PoiId(0), quality: 0.5, position: (0, 0) }];
        let vehicles = (0..3).map(|i| fixture_vehicle(i, PlanRow::new(PoiId(0), 4, 2))).collect();
        let mut w = World::from_parts(&cfg, pois, vec![(1, 1)], vehicles, 0).unwrap();
        for _ in 0..9 {
            w.tick();
            assert!(w.ties_symmetric());
        }
        for v in w.vehicles() {
            assert_eq!(v.ties.len(), 2);
            for r in v.ties.iter() {
                // decide 4, arrive 5, communicating at 7, talk on the next tick.
                assert_eq!((r.last_encounter, r.encounters, r.strong), (8, 1, false));
            }
        }
    }

    #[test]
    fn non_social_strategies_never_form_ties() {
        for strategy in [StrategyKind::AsPlanned, StrategyKind::Blacklist] {
            let mut w = World::setup(&small(strategy), 1).unwrap();
            w.run_weeks(2);
            assert!(w.vehicles().iter().all(|v| v.ties.is_empty()));
        }
    }

    #[test]
    fn world_invariants_hold_every_tick() {
        for strategy in StrategyKind::ALL {
            let cfg = SimConfig { strong_tie_threshold: 2, ..small(strategy) };
            let mut w = World::setup(&cfg, 17).unwrap();
            for _ in 0..cfg.ticks() {
                w.tick();
                assert!(w.ties_symmetric());
                assert_eq!(w.vehicles().len(), 11);
                assert_eq!(w.pois().len(), 3);
                for v in w.vehicles() {
                    assert!(v.is_consistent());
                    assert!(v.plan.rows.iter().all(PlanRow::is_valid));
                    for r in v.ties.iter() {
                        assert_eq!(r.strong, r.encounters >= cfg.strong_tie_threshold);
                        assert!(r.last_encounter < w.clock());
                    }
                }
            }
        }
    }
}

//! Outbound-selection strategies and the social operators they rely on.
//!
//! All functions here are pure over their explicit arguments (plus an RNG
//! where noted); the engine decides when to call them.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rand::Rng;

use crate::agents::{PoiId, VehicleId};
use crate::plan::Plan;
use crate::ties::TieTable;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum StrategyKind {
    AsPlanned,
    Blacklist,
    Replace,
    ReplaceWithClosure,
}

impl StrategyKind {
    pub const ALL: [StrategyKind; 4] = [
        StrategyKind::AsPlanned,
        StrategyKind::Blacklist,
        StrategyKind::Replace,
        StrategyKind::ReplaceWithClosure,
    ];

    /// Stable snake-case name, used in file names and on the command line.
    pub fn name(self) -> &'static str {
        match self {
            StrategyKind::AsPlanned => "as_planned",
            StrategyKind::Blacklist => "blacklist",
            StrategyKind::Replace => "replace",
            StrategyKind::ReplaceWithClosure => "replace_with_closure",
        }
    }

    /// Whether co-located vehicles exchange contacts after a visit.
    pub fn communicates(self) -> bool {
        matches!(self, StrategyKind::Replace | StrategyKind::ReplaceWithClosure)
    }

    pub fn uses_closure(self) -> bool {
        self == StrategyKind::ReplaceWithClosure
    }
}

impl fmt::Display for StrategyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnknownStrategy(pub String);

impl fmt::Display for UnknownStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "unknown strategy `{}` (expected as_planned, blacklist, replace, replace_with_closure or all)",
            self.0
        )
    }
}

impl std::error::Error for UnknownStrategy {}

impl FromStr for StrategyKind {
    type Err = UnknownStrategy;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let key: String = s
            .chars()
            .filter(|c| !matches!(c, '_' | '-' | ' '))
            .flat_map(char::to_lowercase)
            .collect();
        match key.as_str() {
            "asplanned" => Ok(StrategyKind::AsPlanned),
            "blacklist" => Ok(StrategyKind::Blacklist),
            "replace" => Ok(StrategyKind::Replace),
            "replacewithclosure" | "replaceclosure" | "closure" => {
                Ok(StrategyKind::ReplaceWithClosure)
            }
            _ => Err(UnknownStrategy(s.to_string())),
        }
    }
}

/// A decision to leave home now for the PoI in plan row `row`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Visit {
    pub row: usize,
    pub poi_id: PoiId,
    pub duration: u32,
}

impl Visit {
    fn from_row(plan: &Plan, row: usize) -> Self {
        Visit {
            row,
            poi_id: plan.rows[row].poi_id,
            duration: plan.rows[row].duration,
        }
    }
}

/// Executes the plan verbatim: the lowest-index row scheduled at
/// `hour_of_week` fires regardless of experience or suspension.
pub fn check_outbound_as_planned(plan: &Plan, hour_of_week: u32) -> Option<Visit> {
    plan.scheduled_at(hour_of_week)
        .map(|row| Visit::from_row(plan, row))
}

/// When the blacklisting check looks for an alternative row.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum AlternativeScan {
    /// Only right after the row due now has been suspended.
    #[default]
    OnSuspension,
    /// On every check at home, whenever the due row (if any) was not taken.
    EveryHour,
}

impl AlternativeScan {
    pub fn name(self) -> &'static str {
        match self {
            AlternativeScan::OnSuspension => "on_suspension",
            AlternativeScan::EveryHour => "every_hour",
        }
    }
}

impl FromStr for AlternativeScan {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().replace('-', "_").as_str() {
            "on_suspension" => Ok(AlternativeScan::OnSuspension),
            "every_hour" => Ok(AlternativeScan::EveryHour),
            _ => Err(format!("unknown alternative scan `{s}` (expected on_suspension or every_hour)")),
        }
    }
}

/// Blacklisting selection with the default [`AlternativeScan::OnSuspension`].
pub fn check_outbound_blacklist(
    plan: &mut Plan,
    hour_of_week: u32,
    expectation: f64,
) -> Option<Visit> {
    check_outbound_blacklist_with(plan, hour_of_week, expectation, AlternativeScan::OnSuspension)
}

/// Blacklisting selection.
///
/// The first live row scheduled now is visited if its last experience beats
/// `expectation`; otherwise it is suspended. Then, depending on `scan`, the
/// first live row whose experience is at least `expectation` is moved to the
/// current hour and visited instead. Suspended rows never fire.
pub fn check_outbound_blacklist_with(
    plan: &mut Plan,
    hour_of_week: u32,
    expectation: f64,
    scan: AlternativeScan,
) -> Option<Visit> {
    let due = plan
        .rows
        .iter()
        .position(|r| r.time == hour_of_week && !r.suspended);

    match due {
        Some(i) if plan.rows[i].experience > expectation => return Some(Visit::from_row(plan, i)),
        Some(i) => plan.rows[i].suspended = true,
        None if scan == AlternativeScan::OnSuspension => return None,
        None => {}
    }

    let alt = plan
        .rows
        .iter()
        .position(|r| !r.suspended && r.experience >= expectation)?;
    plan.rows[alt].time = hour_of_week;
    Some(Visit::from_row(plan, alt))
}

/// Overwrites every suspended row with the first live row found among the
/// friends' plans, scanning friends in the given order and each friend's
/// rows top to bottom. Rows with no donor stay as they are.
pub fn replace_suspended(plan: &mut Plan, friend_plans: &[(VehicleId, &Plan)]) {
    for row in plan.rows.iter_mut().filter(|r| r.suspended) {
        let donor = friend_plans
            .iter()
            .flat_map(|(_, fp)| fp.rows.iter())
            .find(|r| !r.suspended);
        if let Some(donor) = donor {
            *row = *donor;
        }
    }
}

/// Replacement followed by blacklisting selection on the refreshed plan.
pub fn check_outbound_replace(
    plan: &mut Plan,
    hour_of_week: u32,
    expectation: f64,
    friend_plans: &[(VehicleId, &Plan)],
    scan: AlternativeScan,
) -> Option<Visit> {
    if plan.any_suspended() {
        replace_suspended(plan, friend_plans);
    }
    check_outbound_blacklist_with(plan, hour_of_week, expectation, scan)
}

/// Read/write access to every vehicle's tie table by vehicle id.
pub trait TieGraph {
    fn ties(&self, id: VehicleId) -> Option<&TieTable>;
    fn ties_mut(&mut self, id: VehicleId) -> Option<&mut TieTable>;
}

impl TieGraph for BTreeMap<VehicleId, TieTable> {
    fn ties(&self, id: VehicleId) -> Option<&TieTable> {
        self.get(&id)
    }

    fn ties_mut(&mut self, id: VehicleId) -> Option<&mut TieTable> {
        self.get_mut(&id)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ClosureParams {
    pub now: u64,
    pub threshold: u32,
    /// Also require a strong tie to the second contact.
    pub require_both_strong: bool,
}

/// One triadic-closure attempt for `owner`.
///
/// Two contact indices are drawn uniformly from the owner's table (any
/// strength). If they differ and the owner's tie to the first is strong,
/// the two contacts receive mutual strong records wherever one is missing.
/// Returns the number of records created.
pub fn triadic_closure<G, R>(owner: VehicleId, graph: &mut G, params: ClosureParams, rng: &mut R) -> usize
where
    G: TieGraph + ?Sized,
    R: Rng + ?Sized,
{
    let Some(table) = graph.ties(owner) else {
        return 0;
    };
    let nof = table.len();
    if nof <= 1 {
        return 0;
    }
    let fv_idx = rng.random_range(0..nof);
    let sv_idx = rng.random_range(0..nof);
    if fv_idx == sv_idx {
        return 0;
    }
    let (Some(fv), Some(sv)) = (table.nth_peer(fv_idx), table.nth_peer(sv_idx)) else {
        return 0;
    };
    if !table.is_strong(fv) || (params.require_both_strong && !table.is_strong(sv)) {
        return 0;
    }

    let mut created = 0;
    let mut link = |graph: &mut G, from: VehicleId, to: VehicleId| {
        if let Some(t) = graph.ties_mut(from) {
            if t.insert_strong(to, params.now, params.threshold) {
                created += 1;
            }
        }
    };
    if !graph.ties(fv).is_some_and(|t| t.contains(sv)) {
        link(graph, fv, sv);
        link(graph, sv, fv);
    }
    if !graph.ties(sv).is_some_and(|t| t.contains(fv)) {
        link(graph, sv, fv);
        link(graph, fv, sv);
    }
    created
}

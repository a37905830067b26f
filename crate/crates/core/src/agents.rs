//! Identifiers and the two agent kinds that live in a world: PoIs and vehicles.

use std::fmt;

use crate::plan::Plan;
use crate::ties::TieTable;

macro_rules! id_newtype {
    ($(#[$meta:meta])* $name:ident) => {
        $(#[$meta])*
        #[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
        pub struct $name(pub u32);

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(f, "{}", self.0)
            }
        }

        impl From<u32> for $name {
            fn from(v: u32) -> Self {
                $name(v)
            }
        }
    };
}

id_newtype!(
    /// Identifier of a point of interest.
    PoiId
);
id_newtype!(
    /// Identifier of a vehicle (and its owner).
    VehicleId
);
id_newtype!(
    /// Identifier of a home cell.
    HomeId
);

/// A grid cell, `(x, y)`.
pub type Cell = (u32, u32);

/// A destination with a time-varying service quality in `[0, 1]`.
#[derive(Clone, Debug, PartialEq)]
pub struct Poi {
    pub id: PoiId,
    pub quality: f64,
    pub position: Cell,
}

/// Behavioral state of a vehicle. The discriminants match the numeric
/// states used in the model description (0 = home ... 3 = communicating).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
#[repr(u8)]
pub enum VehicleState {
    AtHome = 0,
    Outbound = 1,
    AtPoi = 2,
    Communicating = 3,
}

impl VehicleState {
    /// True when the vehicle is physically present at a PoI.
    pub fn is_at_poi(self) -> bool {
        matches!(self, VehicleState::AtPoi | VehicleState::Communicating)
    }
}

/// A vehicle agent driven through the home -> outbound -> PoI ->
/// communicating -> home cycle.
#[derive(Clone, Debug, PartialEq)]
pub struct Vehicle {
    pub id: VehicleId,
    pub home_id: HomeId,
    pub state: VehicleState,
    pub current_poi: Option<PoiId>,
    /// Duration of the pending visit while outbound, hours left while at the PoI.
    pub remaining_stay: u32,
    expectation: f64,
    pub plan: Plan,
    pub ties: TieTable,
    pub visited_this_week: bool,
}

impl Vehicle {
    pub fn new(id: VehicleId, home_id: HomeId, expectation: f64, plan: Plan) -> Self {
        Vehicle {
            id,
            home_id,
            state: VehicleState::AtHome,
            current_poi: None,
            remaining_stay: 0,
            expectation,
            plan,
            ties: TieTable::new(id),
            visited_this_week: false,
        }
    }

    /// The vehicle's fixed quality bar.
    pub fn expectation(&self) -> f64 {
        self.expectation
    }

    /// Whether the state-dependent field invariants hold.
    pub fn is_consistent(&self) -> bool {
        match self.state {
            VehicleState::AtHome => self.current_poi.is_none() && self.remaining_stay == 0,
            VehicleState::Outbound => self.current_poi.is_some(),
            VehicleState::AtPoi | VehicleState::Communicating => self.current_poi.is_some(),
        }
    }
}

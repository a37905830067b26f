//! Per-vehicle social contact records and weak -> strong promotion.

use std::collections::BTreeMap;

use crate::agents::VehicleId;
use crate::error::SimError;

/// What a vehicle remembers about one peer.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TieRecord {
    pub peer_id: VehicleId,
    /// Absolute simulation hour of the latest encounter.
    pub last_encounter: u64,
    pub encounters: u32,
    pub strong: bool,
}

/// Contact records owned by a single vehicle, keyed by peer.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TieTable {
    owner: VehicleId,
    records: BTreeMap<VehicleId, TieRecord>,
}

impl TieTable {
    pub fn new(owner: VehicleId) -> Self {
        TieTable {
            owner,
            records: BTreeMap::new(),
        }
    }

    pub fn owner(&self) -> VehicleId {
        self.owner
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn get(&self, peer: VehicleId) -> Option<&TieRecord> {
        self.records.get(&peer)
    }

    pub fn contains(&self, peer: VehicleId) -> bool {
        self.records.contains_key(&peer)
    }

    pub fn is_strong(&self, peer: VehicleId) -> bool {
        self.records.get(&peer).is_some_and(|r| r.strong)
    }

    /// Records in ascending peer order.
    pub fn iter(&self) -> impl Iterator<Item = &TieRecord> {
        self.records.values()
    }

    /// The `index`-th peer in ascending peer order.
    pub fn nth_peer(&self, index: usize) -> Option<VehicleId> {
        self.records.keys().nth(index).copied()
    }

    /// Counts one encounter with `peer` at hour `now`, creating a weak
    /// record on first contact and promoting it once `encounters` reaches
    /// `threshold`. Strength is never demoted.
    pub fn record_encounter(
        &mut self,
        peer: VehicleId,
        now: u64,
        threshold: u32,
    ) -> Result<&TieRecord, SimError> {
        if peer == self.owner {
            return Err(SimError::SelfTie(peer));
        }
        let record = self
            .records
            .entry(peer)
            .and_modify(|r| {
                r.encounters += 1;
                r.last_encounter = r.last_encounter.max(now);
                r.strong |= r.encounters >= threshold;
            })
            .or_insert(TieRecord {
                peer_id: peer,
                last_encounter: now,
                encounters: 1,
                strong: 1 >= threshold,
            });
        Ok(record)
    }

    /// Inserts a record that starts out strong, as created by triadic
    /// closure. The encounter count is set to `threshold` so that strength
    /// and count stay consistent. Returns false (and changes nothing) when a
    /// record for `peer` already exists or `peer` is the owner.
    pub fn insert_strong(&mut self, peer: VehicleId, now: u64, threshold: u32) -> bool {
        if peer == self.owner || self.records.contains_key(&peer) {
            return false;
        }
        self.records.insert(
            peer,
            TieRecord {
                peer_id: peer,
                last_encounter: now,
                encounters: threshold.max(1),
                strong: true,
            },
        );
        true
    }

    /// Peers with a strong tie, ascending by id.
    pub fn strong_friends(&self) -> Vec<VehicleId> {
        self.records
            .values()
            .filter(|r| r.strong)
            .map(|r| r.peer_id)
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_encounter_creates_weak_tie() {
        let mut t = TieTable::new(VehicleId(569));
        let r = *t.record_encounter(VehicleId(984), 20, 5).unwrap();
        assert_eq!(
            r,
            TieRecord {
                peer_id: VehicleId(984),
                last_encounter: 20,
                encounters: 1,
                strong: false
            }
        );
    }

    #[test]
    fn promotion_at_threshold_boundary() {
        let mut t = TieTable::new(VehicleId(569));
        for now in [2, 5, 9] {
            t.record_encounter(VehicleId(984), now, 5).unwrap();
        }
        let r = *t.record_encounter(VehicleId(984), 20, 5).unwrap();
        assert_eq!((r.last_encounter, r.encounters, r.strong), (20, 4, false));
        let r = *t.record_encounter(VehicleId(984), 30, 5).unwrap();
        assert_eq!((r.last_encounter, r.encounters, r.strong), (30, 5, true));
    }

    #[test]
    fn threshold_one_is_immediately_strong() {
        let mut t = TieTable::new(VehicleId(1));
        assert!(t.record_encounter(VehicleId(2), 0, 1).unwrap().strong);
    }

    #[test]
    fn self_tie_rejected() {
        let mut t = TieTable::new(VehicleId(1));
        assert!(matches!(
            t.record_encounter(VehicleId(1), 0, 5),
            Err(SimError::SelfTie(VehicleId(1)))
        ));
        assert!(!t.insert_strong(VehicleId(1), 0, 5));
        assert!(t.is_empty());
    }

    #[test]
    fn strong_friends_listing() {
        let mut t = TieTable::new(VehicleId(569));
        t.record_encounter(VehicleId(984), 20, 5).unwrap();
        t.record_encounter(VehicleId(691), 20, 5).unwrap();
        assert!(t.strong_friends().is_empty());
        assert!(TieTable::new(VehicleId(0)).strong_friends().is_empty());

        let mut t = TieTable::new(VehicleId(0));
        t.insert_strong(VehicleId(12), 1, 5);
        t.record_encounter(VehicleId(7), 1, 5).unwrap();
        t.insert_strong(VehicleId(3), 1, 5);
        assert_eq!(t.strong_friends(), vec![VehicleId(3), VehicleId(12)]);
    }

    #[test]
    fn closure_records_never_overwrite() {
        let mut t = TieTable::new(VehicleId(0));
        t.record_encounter(VehicleId(4), 3, 5).unwrap();
        assert!(!t.insert_strong(VehicleId(4), 9, 5));
        assert!(!t.is_strong(VehicleId(4)));
        assert!(t.insert_strong(VehicleId(5), 9, 5));
        let r = t.get(VehicleId(5)).unwrap();
        assert_eq!((r.encounters, r.strong, r.last_encounter), (5, true, 9));
    }
}

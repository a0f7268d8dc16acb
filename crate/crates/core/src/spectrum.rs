//! Per-link frequency-slot occupancy.
//!
//! Each link carries one [`SpectrumGrid`] shared by both directions. A
//! connection occupies one contiguous [`SlotRange`] at the same indices on
//! every link of its path.

use std::fmt;

use thiserror::Error;

/// Slots per link in the default flex-grid (12.5 GHz spacing).
pub const DEFAULT_SLOTS: usize = 180;

/// Contiguous run of slots `[start, start + count)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SlotRange {
    pub start: usize,
    pub count: usize,
}

impl SlotRange {
    pub fn new(start: usize, count: usize) -> Self {
        SlotRange { start, count }
    }

    /// One past the last slot.
    pub fn end(&self) -> usize {
        self.start + self.count
    }

    pub fn slots(&self) -> std::ops::Range<usize> {
        self.start..self.end()
    }
}

impl fmt::Display for SlotRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {})", self.start, self.end())
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SpectrumError {
    #[error("slot range {range} exceeds grid of {total} slots")]
    OutOfRange { range: SlotRange, total: usize },
    #[error("slot range {range} is empty")]
    EmptyRange { range: SlotRange },
    #[error("slot {slot} is already occupied")]
    DoubleAllocation { slot: usize },
    #[error("slot {slot} is not occupied")]
    ReleaseFree { slot: usize },
}

/// Occupancy of one link's spectrum.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpectrumGrid {
    occupied: Vec<bool>,
    used: usize,
}

impl Default for SpectrumGrid {
    fn default() -> Self {
        SpectrumGrid::new(DEFAULT_SLOTS)
    }
}

impl SpectrumGrid {
    pub fn new(total_slots: usize) -> Self {
        assert!(total_slots > 0, "a spectrum grid needs at least one slot");
        SpectrumGrid {
            occupied: vec![false; total_slots],
            used: 0,
        }
    }

    /// Builds a grid with the given slots pre-occupied.
    pub fn with_occupied(total_slots: usize, occupied: &[usize]) -> Self {
        let mut grid = SpectrumGrid::new(total_slots);
        for &slot in occupied {
            grid.allocate(SlotRange::new(slot, 1))
                .expect("occupied slot list must be in range and distinct");
        }
        grid
    }

    pub fn total_slots(&self) -> usize {
        self.occupied.len()
    }

    pub fn used_slots(&self) -> usize {
        self.used
    }

    pub fn free_slots(&self) -> usize {
        self.occupied.len() - self.used
    }

    pub fn is_free(&self, slot: usize) -> bool {
        !self.occupied[slot]
    }

    pub fn occupancy(&self) -> &[bool] {
        &self.occupied
    }

    pub fn is_empty(&self) -> bool {
        self.used == 0
    }

    /// Fraction of slots in use, `u` in [0, 1].
    pub fn usage(&self) -> f64 {
        self.used as f64 / self.total_slots() as f64
    }

    /// Number of free slots that sit inside a maximal free run of at least
    /// `needed` slots. Every slot of a qualifying run counts, not only the
    /// feasible start positions.
    pub fn usable_slots(&self, needed: usize) -> usize {
        let needed = needed.max(1);
        let mut usable = 0;
        let mut run = 0;
        for &busy in &self.occupied {
            if busy {
                if run >= needed {
                    usable += run;
                }
                run = 0;
            } else {
                run += 1;
            }
        }
        if run >= needed {
            usable += run;
        }
        usable
    }

    /// Probability `p` that this link can accommodate a demand of `needed`
    /// contiguous slots: `usable_slots(needed) / total_slots`.
    pub fn accommodation_probability(&self, needed: usize) -> f64 {
        self.usable_slots(needed) as f64 / self.total_slots() as f64
    }

    fn check_range(&self, range: SlotRange) -> Result<(), SpectrumError> {
        if range.count == 0 {
            return Err(SpectrumError::EmptyRange { range });
        }
        if range.end() > self.total_slots() {
            return Err(SpectrumError::OutOfRange {
                range,
                total: self.total_slots(),
            });
        }
        Ok(())
    }

    /// Marks `range` occupied. Fails without modifying the grid if any slot
    /// in the range is already taken.
    pub fn allocate(&mut self, range: SlotRange) -> Result<(), SpectrumError> {
        self.check_range(range)?;
        if let Some(slot) = range.slots().find(|&s| self.occupied[s]) {
            return Err(SpectrumError::DoubleAllocation { slot });
        }
        self.occupied[range.slots()].fill(true);
        self.used += range.count;
        Ok(())
    }

    /// Frees `range`. Fails without modifying the grid if any slot in the
    /// range is already free.
    pub fn release(&mut self, range: SlotRange) -> Result<(), SpectrumError> {
        self.check_range(range)?;
        if let Some(slot) = range.slots().find(|&s| !self.occupied[s]) {
            return Err(SpectrumError::ReleaseFree { slot });
        }
        self.occupied[range.slots()].fill(false);
        self.used -= range.count;
        Ok(())
    }

    /// Recounts occupied slots; must always equal [`Self::used_slots`].
    pub fn recount(&self) -> usize {
        self.occupied.iter().filter(|&&b| b).count()
    }
}

/// Lowest-start range of `needed` slots free on every grid, if one exists.
///
/// All grids must have the same number of slots. An empty grid list is
/// treated as unconstrained spectrum of zero width and yields `None`.
pub fn first_fit<'a, I>(grids: I, needed: usize) -> Option<SlotRange>
where
    I: IntoIterator<Item = &'a SpectrumGrid>,
{
    let grids: Vec<&SpectrumGrid> = grids.into_iter().collect();
    let total = grids.first()?.total_slots();
    debug_assert!(grids.iter().all(|g| g.total_slots() == total));
    if needed == 0 || needed > total {
        return None;
    }
    let mut run = 0;
    for slot in 0..total {
        if grids.iter().all(|g| !g.occupied[slot]) {
            run += 1;
            if run == needed {
                return Some(SlotRange::new(slot + 1 - needed, needed));
            }
        } else {
            run = 0;
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn usage_basics() {
        let mut g = SpectrumGrid::new(180);
        assert_eq!(g.usage(), 0.0);
        g.allocate(SlotRange::new(0, 90)).unwrap();
        assert_eq!(g.usage(), 0.5);

        let mut g = SpectrumGrid::new(180);
        g.allocate(SlotRange::new(0, 3)).unwrap();
        g.allocate(SlotRange::new(10, 2)).unwrap();
        assert_eq!(g.used_slots(), 5);
        assert_eq!(g.usage(), 5.0 / 180.0);
    }

    #[test]
    fn accommodation_example() {
        let g = SpectrumGrid::with_occupied(8, &[0, 3, 4]);
        assert_eq!(g.usable_slots(3), 3);
        assert_eq!(g.accommodation_probability(3), 3.0 / 8.0);
        assert_eq!(g.usable_slots(2), 5);
        assert_eq!(g.usable_slots(1), 5);
    }

    #[test]
    fn isolated_free_slot_not_usable() {
        let g = SpectrumGrid::with_occupied(5, &[0, 2, 3, 4]);
        assert_eq!(g.usable_slots(3), 0);
        assert_eq!(g.usable_slots(1), 1);
    }

    #[test]
    fn first_fit_examples() {
        let g1 = SpectrumGrid::with_occupied(8, &[0, 1]);
        let g2 = SpectrumGrid::with_occupied(8, &[2]);
        assert_eq!(first_fit([&g1, &g2], 3), Some(SlotRange::new(3, 3)));

        let empty = SpectrumGrid::new(180);
        assert_eq!(first_fit([&empty], 4), Some(SlotRange::new(0, 4)));

        let mut full = SpectrumGrid::new(4);
        full.allocate(SlotRange::new(0, 4)).unwrap();
        assert_eq!(first_fit([&full], 1), None);
        assert_eq!(first_fit(std::iter::empty(), 1), None);
        assert_eq!(first_fit([&empty], 181), None);
    }

    #[test]
    fn allocate_release_errors() {
        let mut g = SpectrumGrid::new(180);
        g.allocate(SlotRange::new(0, 3)).unwrap();
        assert_eq!(g.used_slots(), 3);
        assert_eq!(
            g.allocate(SlotRange::new(2, 2)),
            Err(SpectrumError::DoubleAllocation { slot: 2 })
        );
        assert_eq!(g.used_slots(), 3);
        assert_eq!(
            g.release(SlotRange::new(2, 2)),
            Err(SpectrumError::ReleaseFree { slot: 3 })
        );
        assert_eq!(g.used_slots(), 3);
        g.release(SlotRange::new(0, 3)).unwrap();
        assert_eq!(g, SpectrumGrid::new(180));
        assert!(matches!(
            g.allocate(SlotRange::new(179, 2)),
            Err(SpectrumError::OutOfRange { .. })
        ));
        assert!(matches!(
            g.release(SlotRange::new(0, 0)),
            Err(SpectrumError::EmptyRange { .. })
        ));
    }

    fn grid_strategy(max: usize) -> impl Strategy<Value = SpectrumGrid> {
        prop::collection::vec(any::<bool>(), 1..=max).prop_map(|bits| {
            let occupied: Vec<usize> = bits
                .iter()
                .enumerate()
                .filter(|(_, &b)| b)
                .map(|(i, _)| i)
                .collect();
            SpectrumGrid::with_occupied(bits.len(), &occupied)
        })
    }

    proptest! {
        #[test]
        fn probability_non_increasing(g in grid_strategy(64)) {
            for n in 1..10 {
                prop_assert!(g.usable_slots(n + 1) <= g.usable_slots(n));
            }
            prop_assert_eq!(g.usable_slots(1), g.free_slots());
            prop_assert_eq!(g.recount(), g.used_slots());
        }

        #[test]
        fn allocate_release_inverse(g in grid_strategy(64), start in 0usize..64, count in 1usize..8) {
            let range = SlotRange::new(start, count);
            let mut h = g.clone();
            if h.allocate(range).is_ok() {
                prop_assert_eq!(h.recount(), h.used_slots());
                h.release(range).unwrap();
            }
            prop_assert_eq!(h, g);
        }
    }
}

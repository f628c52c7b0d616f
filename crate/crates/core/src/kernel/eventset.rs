//! Fixed-width bitsets over the event indices of a [`Universe`](super::Universe).

use std::cmp::Ordering;
use std::fmt;
use std::ops::{BitAnd, BitOr, Not, Sub};

/// Largest number of events a single structure may declare.
pub const MAX_EVENTS: usize = 64;

/// A set of event indices.
///
/// Indices follow the sorted order of event ids, so the ordering below
/// (lexicographic over the ascending element sequence) coincides with the
/// ordering of the sorted id lists.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct EventSet(u64);

impl EventSet {
    pub const EMPTY: EventSet = EventSet(0);

    pub const fn from_bits(bits: u64) -> Self {
        EventSet(bits)
    }

    pub const fn bits(self) -> u64 {
        self.0
    }

    pub fn singleton(index: usize) -> Self {
        debug_assert!(index < MAX_EVENTS);
        EventSet(1 << index)
    }

    /// The set `{0, 1, ..., n-1}`.
    pub fn full(n: usize) -> Self {
        debug_assert!(n <= MAX_EVENTS);
        if n == MAX_EVENTS {
            EventSet(u64::MAX)
        } else {
            EventSet((1u64 << n) - 1)
        }
    }

    pub fn contains(self, index: usize) -> bool {
        index < MAX_EVENTS && self.0 & (1 << index) != 0
    }

    pub fn insert(&mut self, index: usize) {
        self.0 |= 1 << index;
    }

    pub fn remove(&mut self, index: usize) {
        self.0 &= !(1 << index);
    }

    pub fn with(self, index: usize) -> Self {
        EventSet(self.0 | (1 << index))
    }

    pub fn without(self, index: usize) -> Self {
        EventSet(self.0 & !(1 << index))
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_subset(self, other: EventSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_disjoint(self, other: EventSet) -> bool {
        self.0 & other.0 == 0
    }

    pub fn iter(self) -> Iter {
        Iter(self.0)
    }

    /// Every subset of `self`, starting with the empty set.
    pub fn subsets(self) -> Subsets {
        Subsets {
            mask: self.0,
            next: Some(0),
        }
    }
}

impl BitOr for EventSet {
    type Output = EventSet;
    fn bitor(self, rhs: EventSet) -> EventSet {
        EventSet(self.0 | rhs.0)
    }
}

impl BitAnd for EventSet {
    type Output = EventSet;
    fn bitand(self, rhs: EventSet) -> EventSet {
        EventSet(self.0 & rhs.0)
    }
}

impl Sub for EventSet {
    type Output = EventSet;
    fn sub(self, rhs: EventSet) -> EventSet {
        EventSet(self.0 & !rhs.0)
    }
}

impl Not for EventSet {
    type Output = EventSet;
    fn not(self) -> EventSet {
        EventSet(!self.0)
    }
}

impl Ord for EventSet {
    fn cmp(&self, other: &Self) -> Ordering {
        self.iter().cmp(other.iter())
    }
}

impl PartialOrd for EventSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for EventSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl FromIterator<usize> for EventSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut set = EventSet::EMPTY;
        for i in iter {
            set.insert(i);
        }
        set
    }
}

impl IntoIterator for EventSet {
    type Item = usize;
    type IntoIter = Iter;
    fn into_iter(self) -> Iter {
        self.iter()
    }
}

/// Ascending iterator over the members of an [`EventSet`].
#[derive(Clone)]
pub struct Iter(u64);

impl Iterator for Iter {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let i = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(i)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = self.0.count_ones() as usize;
        (n, Some(n))
    }
}

impl ExactSizeIterator for Iter {}

/// Iterator over all subsets of a mask, in increasing numeric order.
pub struct Subsets {
    mask: u64,
    next: Option<u64>,
}

impl Iterator for Subsets {
    type Item = EventSet;

    fn next(&mut self) -> Option<EventSet> {
        let current = self.next?;
        // standard submask walk: (current - mask) & mask enumerates upwards
        let following = current.wrapping_sub(self.mask) & self.mask;
        self.next = if following == 0 {
            None
        } else {
            Some(following)
        };
        Some(EventSet(current))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn subsets_cover_powerset() {
        let mask = EventSet::from_bits(0b1011);
        let subs: Vec<u64> = mask.subsets().map(EventSet::bits).collect();
        assert_eq!(subs, vec![0, 1, 2, 3, 8, 9, 10, 11]);
        assert_eq!(EventSet::EMPTY.subsets().count(), 1);
        assert_eq!(EventSet::full(MAX_EVENTS).len(), 64);
    }

    #[test]
    fn ordering_is_lexicographic_over_members() {
        let e = EventSet::EMPTY;
        let a = EventSet::singleton(0);
        let ab = a.with(1);
        let b = EventSet::singleton(1);
        let mut v = vec![b, ab, e, a];
        v.sort();
        assert_eq!(v, vec![e, a, ab, b]);
    }

    #[test]
    fn set_algebra() {
        let x: EventSet = [0, 2, 5].into_iter().collect();
        let y: EventSet = [2, 3].into_iter().collect();
        assert_eq!((x | y).iter().collect::<Vec<_>>(), vec![0, 2, 3, 5]);
        assert_eq!((x & y).iter().collect::<Vec<_>>(), vec![2]);
        assert_eq!((x - y).iter().collect::<Vec<_>>(), vec![0, 5]);
        assert!(!x.is_subset(y));
        assert!((x & y).is_subset(y));
        assert!(x.without(2).is_disjoint(y));
    }
}

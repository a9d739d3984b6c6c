use std::fmt;

/// A strictly increasing multi-index over the coframe slots
/// `(dx1..dxm, dv1..dvm)`, stored as a bit set.
#[derive(Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MultiIndex(u32);

impl MultiIndex {
    pub const EMPTY: MultiIndex = MultiIndex(0);

    pub fn single(slot: usize) -> Self {
        MultiIndex(1 << slot)
    }

    pub fn from_slots(slots: impl IntoIterator<Item = usize>) -> Option<Self> {
        let mut bits = 0u32;
        for s in slots {
            if bits & (1 << s) != 0 {
                return None;
            }
            bits |= 1 << s;
        }
        Some(MultiIndex(bits))
    }

    /// Multi-index of a possibly unsorted slot list together with the sign of
    /// the sorting permutation; `None` on a repeated slot.
    pub fn sorted_with_sign(slots: &[usize]) -> Option<(Self, i32)> {
        let idx = Self::from_slots(slots.iter().copied())?;
        let mut inversions = 0;
        for i in 0..slots.len() {
            for j in i + 1..slots.len() {
                if slots[i] > slots[j] {
                    inversions += 1;
                }
            }
        }
        Some((idx, if inversions % 2 == 0 { 1 } else { -1 }))
    }

    pub fn bits(&self) -> u32 {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.0 == 0
    }

    pub fn contains(&self, slot: usize) -> bool {
        self.0 & (1 << slot) != 0
    }

    /// Slots in increasing order.
    pub fn slots(&self) -> impl Iterator<Item = usize> {
        let bits = self.0;
        (0..32).filter(move |s| bits & (1 << s) != 0)
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.slots().collect()
    }

    /// Number of fibre slots (`dv`) for chart dimension `m`.
    pub fn fiber_count(&self, m: usize) -> usize {
        (self.0 >> m).count_ones() as usize
    }

    /// Number of base slots (`dx`) for chart dimension `m`.
    pub fn base_count(&self, m: usize) -> usize {
        (self.0 & ((1 << m) - 1)).count_ones() as usize
    }

    /// `dz^self ∧ dz^other = sign · dz^(self ∪ other)`, or `None` on overlap.
    pub fn wedge(&self, other: &MultiIndex) -> Option<(MultiIndex, i32)> {
        if self.0 & other.0 != 0 {
            return None;
        }
        let mut inversions = 0;
        for j in other.slots() {
            inversions += (self.0 >> (j + 1)).count_ones();
        }
        Some((
            MultiIndex(self.0 | other.0),
            if inversions % 2 == 0 { 1 } else { -1 },
        ))
    }

    /// Removes `slot`, returning the sign `(-1)^k` where `k` is its position.
    pub fn remove(&self, slot: usize) -> Option<(MultiIndex, i32)> {
        if !self.contains(slot) {
            return None;
        }
        let before = (self.0 & ((1 << slot) - 1)).count_ones();
        Some((
            MultiIndex(self.0 & !(1 << slot)),
            if before.is_multiple_of(2) { 1 } else { -1 },
        ))
    }

    /// All multi-indices of length `p` over `n` slots, in increasing order.
    pub fn all_of_len(n: usize, p: usize) -> Vec<MultiIndex> {
        let mut out: Vec<MultiIndex> = (0u32..(1 << n))
            .filter(|b| b.count_ones() as usize == p)
            .map(MultiIndex)
            .collect();
        out.sort();
        out
    }
}

impl fmt::Debug for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.to_vec())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wedge_sign_counts_inversions() {
        let a = MultiIndex::single(2);
        let b = MultiIndex::from_slots([0, 1]).unwrap();
        assert_eq!(
            a.wedge(&b),
            Some((MultiIndex::from_slots([0, 1, 2]).unwrap(), 1))
        );
        let c = MultiIndex::single(1);
        assert_eq!(a.wedge(&c).unwrap().1, -1);
        assert_eq!(c.wedge(&a).unwrap().1, 1);
        assert_eq!(a.wedge(&a), None);
    }

    #[test]
    fn remove_sign_is_position_parity() {
        let i = MultiIndex::from_slots([0, 2, 3]).unwrap();
        assert_eq!(i.remove(0).unwrap().1, 1);
        assert_eq!(i.remove(2).unwrap().1, -1);
        assert_eq!(i.remove(3).unwrap().1, 1);
        assert_eq!(i.remove(1), None);
    }

    #[test]
    fn sorting_sign() {
        assert_eq!(MultiIndex::sorted_with_sign(&[3, 1]).unwrap().1, -1);
        assert_eq!(MultiIndex::sorted_with_sign(&[2, 0, 1]).unwrap().1, 1);
        assert!(MultiIndex::sorted_with_sign(&[1, 1]).is_none());
    }

    #[test]
    fn fiber_and_base_counts() {
        let i = MultiIndex::from_slots([0, 2, 3]).unwrap();
        assert_eq!(i.fiber_count(2), 2);
        assert_eq!(i.base_count(2), 1);
        assert_eq!(MultiIndex::all_of_len(4, 2).len(), 6);
    }
}

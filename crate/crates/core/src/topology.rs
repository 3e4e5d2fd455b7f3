//! The apartness topology, whose base is the family of apartness
//! complements `−A`.
//!
//! Every point `x` has a smallest basic neighbourhood: `x ∈ −A` exactly when
//! `A ⊆ P_x = {y : p(x,y)}`, and `−` is antitone, so `−P_x` is contained in
//! every basic open around `x`. [`Neighborhoods`] works from that table alone
//! and scales to any carrier; [`Topology`] additionally materialises the
//! base and the full lattice of opens for small carriers.

use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::space::Space;
use crate::subset::{full_mask, Subset};

/// Largest carrier for which [`Topology::build`] enumerates every subset.
pub const TOPOLOGY_LIMIT: usize = 16;

/// Minimal basic neighbourhoods of every point of a space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Neighborhoods {
    n: usize,
    min: Vec<u64>,
}

impl Neighborhoods {
    pub fn new(space: &Space) -> Self {
        let min = (0..space.n())
            .map(|x| space.minus_bits(space.p_rows()[x]))
            .collect();
        Neighborhoods { n: space.n(), min }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn min_neighborhood(&self, x: usize) -> Result<Subset> {
        if x >= self.n {
            return Err(Error::PointOutOfRange { point: x, n: self.n });
        }
        Ok(Subset::from_bits_unchecked(self.n, self.min[x]))
    }

    #[inline]
    pub(crate) fn min_bits(&self, x: usize) -> u64 {
        self.min[x]
    }

    /// Points every neighbourhood of which meets `s`.
    pub fn closure(&self, s: Subset) -> Result<Subset> {
        s.check_carrier(self.n)?;
        Ok(Subset::from_bits_unchecked(self.n, self.closure_bits(s.bits())))
    }

    pub(crate) fn closure_bits(&self, s: u64) -> u64 {
        (0..self.n)
            .filter(|&x| self.min[x] & s != 0)
            .fold(0, |acc, x| acc | (1 << x))
    }

    /// Points with a neighbourhood inside `s`.
    pub fn interior(&self, s: Subset) -> Result<Subset> {
        s.check_carrier(self.n)?;
        Ok(Subset::from_bits_unchecked(self.n, self.interior_bits(s.bits())))
    }

    pub(crate) fn interior_bits(&self, s: u64) -> u64 {
        (0..self.n)
            .filter(|&x| self.min[x] & !s == 0)
            .fold(0, |acc, x| acc | (1 << x))
    }

    pub fn is_open(&self, s: Subset) -> Result<bool> {
        Ok(self.interior(s)? == s)
    }

    pub fn is_closed(&self, s: Subset) -> Result<bool> {
        Ok(self.closure(s)? == s)
    }

    pub fn is_dense(&self, s: Subset) -> Result<bool> {
        s.check_carrier(self.n)?;
        Ok(self.closure_bits(s.bits()) == full_mask(self.n))
    }
}

/// The apartness topology of a small space with its base and opens listed.
#[derive(Clone, Debug)]
pub struct Topology {
    space: Space,
    nbhd: Neighborhoods,
    basics: Vec<Subset>,
    opens: Vec<Subset>,
    open_set: HashSet<u64>,
}

impl Topology {
    pub fn build(space: &Space) -> Result<Self> {
        let n = space.n();
        Error::too_large(n, TOPOLOGY_LIMIT)?;
        let nbhd = Neighborhoods::new(space);

        let mut basics: Vec<u64> = (0..1u64 << n).map(|a| space.minus_bits(a)).collect();
        basics.sort_unstable();
        basics.dedup();

        // A union of basics is the union of the minimal neighbourhoods of its
        // points, so U is open iff it equals that union.
        let opens: Vec<u64> = (0..1u64 << n)
            .filter(|&u| {
                Subset::from_bits_unchecked(n, u)
                    .iter()
                    .fold(0, |acc, x| acc | nbhd.min[x])
                    == u
            })
            .collect();
        let open_set = opens.iter().copied().collect();

        Ok(Topology {
            space: space.clone(),
            nbhd,
            basics: basics.into_iter().map(|b| Subset::from_bits_unchecked(n, b)).collect(),
            opens: opens.into_iter().map(|o| Subset::from_bits_unchecked(n, o)).collect(),
            open_set,
        })
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    pub fn neighborhoods(&self) -> &Neighborhoods {
        &self.nbhd
    }

    /// Distinct apartness complements, in increasing mask order.
    pub fn basics(&self) -> &[Subset] {
        &self.basics
    }

    /// Every open set, in increasing mask order.
    pub fn opens(&self) -> &[Subset] {
        &self.opens
    }

    pub fn is_open(&self, s: Subset) -> Result<bool> {
        s.check_carrier(self.space.n())?;
        Ok(self.open_set.contains(&s.bits()))
    }

    pub fn is_closed(&self, s: Subset) -> Result<bool> {
        self.is_open(s.complement())
    }

    pub fn closure(&self, s: Subset) -> Result<Subset> {
        self.nbhd.closure(s)
    }

    pub fn interior(&self, s: Subset) -> Result<Subset> {
        self.nbhd.interior(s)
    }

    pub fn is_dense(&self, s: Subset) -> Result<bool> {
        self.nbhd.is_dense(s)
    }

    pub fn min_neighborhood(&self, x: usize) -> Result<Subset> {
        self.nbhd.min_neighborhood(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::subset::all_subsets;

    #[test]
    fn discrete_space_has_discrete_topology() {
        let top = Topology::build(&Space::discrete(3).unwrap()).unwrap();
        assert_eq!(top.opens().len(), 8);
        for x in 0..3 {
            assert_eq!(top.min_neighborhood(x).unwrap(), Subset::singleton(3, x).unwrap());
        }
        for s in all_subsets(3) {
            assert_eq!(top.closure(s).unwrap(), s);
            assert_eq!(top.is_dense(s).unwrap(), s == Subset::full(3));
        }
    }

    #[test]
    fn indiscrete_space_has_two_opens() {
        let s = Space::indiscrete(4).unwrap();
        let top = Topology::build(&s).unwrap();
        assert_eq!(top.opens(), &[s.empty(), s.full()]);
        for a in all_subsets(4).filter(|a| !a.is_empty()) {
            assert_eq!(top.closure(a).unwrap(), s.full());
            assert!(top.is_dense(a).unwrap());
        }
        assert_eq!(top.min_neighborhood(2).unwrap(), s.full());
    }

    #[test]
    fn one_point_topology() {
        let top = Topology::build(&Space::discrete(1).unwrap()).unwrap();
        assert_eq!(top.opens().len(), 2);
    }

    #[test]
    fn size_guard() {
        let s = Space::discrete(17).unwrap();
        assert!(matches!(Topology::build(&s), Err(Error::CarrierTooLarge { .. })));
        // Neighbourhood queries have no such limit.
        let nb = Neighborhoods::new(&Space::discrete(40).unwrap());
        assert!(nb.is_dense(Subset::full(40)).unwrap());
    }
}

//! Finite pre-apartness spaces.
//!
//! A [`Space`] stores an inequality and the apartness of singletons, both as
//! symmetric bit matrices. On a finite carrier with decidable membership the
//! union axiom forces `S ⋈ T` to hold exactly when every point of `S` is
//! apart from every point of `T`, so the point matrix determines the whole
//! subset relation. [`RawRelation`] keeps the full subset-pair table for
//! candidate relations that may not satisfy that axiom.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::subset::{full_mask, Subset, MAX_POINTS};

/// Largest carrier for which operations enumerate all `2ⁿ` subsets.
pub const ENUMERATION_LIMIT: usize = 20;

/// Largest carrier a [`RawRelation`] may have (its table holds `4ⁿ` bits).
pub const RAW_LIMIT: usize = 13;

fn rows_from_bools(n: usize, rows: &[Vec<bool>], what: &str) -> Result<Vec<u64>> {
    if rows.len() != n {
        return Err(Error::invariant(format!(
            "{what} matrix has {} rows, expected {n}",
            rows.len()
        )));
    }
    rows.iter()
        .enumerate()
        .map(|(i, row)| {
            if row.len() != n {
                return Err(Error::invariant(format!(
                    "{what} row {i} has {} entries, expected {n}",
                    row.len()
                )));
            }
            Ok(row
                .iter()
                .enumerate()
                .fold(0u64, |acc, (j, &b)| acc | ((b as u64) << j)))
        })
        .collect()
}

fn check_shape(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::EmptyCarrier("a space must be inhabited"));
    }
    Error::too_large(n, MAX_POINTS)
}

fn check_symmetric_irreflexive(n: usize, rows: &[u64], what: &str) -> Result<()> {
    for (x, &row) in rows.iter().enumerate() {
        if row & !full_mask(n) != 0 {
            return Err(Error::invariant(format!("{what} row {x} has bits beyond the carrier")));
        }
        if (row >> x) & 1 == 1 {
            return Err(Error::invariant(format!("{what}({x},{x}) must be false")));
        }
        for y in Subset::from_bits_unchecked(n, row) {
            if (rows[y] >> x) & 1 == 0 {
                return Err(Error::invariant(format!(
                    "{what} is not symmetric: ({x},{y}) set but ({y},{x}) clear"
                )));
            }
        }
    }
    Ok(())
}

/// An inequality relation on a finite carrier: irreflexive and symmetric.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Inequality {
    n: usize,
    rows: Vec<u64>,
}

impl Inequality {
    pub fn from_rows(n: usize, rows: Vec<u64>) -> Result<Self> {
        check_shape(n)?;
        if rows.len() != n {
            return Err(Error::invariant(format!("inequality has {} rows, expected {n}", rows.len())));
        }
        check_symmetric_irreflexive(n, &rows, "neq")?;
        Ok(Inequality { n, rows })
    }

    pub fn from_matrix(rows: &[Vec<bool>]) -> Result<Self> {
        let n = rows.len();
        check_shape(n)?;
        Inequality::from_rows(n, rows_from_bools(n, rows, "neq")?)
    }

    /// `x ≠ y` exactly when the indices differ.
    pub fn denotational(n: usize) -> Result<Self> {
        check_shape(n)?;
        let full = full_mask(n);
        Ok(Inequality {
            n,
            rows: (0..n).map(|x| full & !(1 << x)).collect(),
        })
    }

    /// The inequality that holds nowhere.
    pub fn trivial(n: usize) -> Result<Self> {
        check_shape(n)?;
        Ok(Inequality { n, rows: vec![0; n] })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn neq(&self, x: usize, y: usize) -> bool {
        (self.rows[x] >> y) & 1 == 1
    }

    /// Points unequal to `x`.
    #[inline]
    pub fn row(&self, x: usize) -> Subset {
        Subset::from_bits_unchecked(self.n, self.rows[x])
    }

    pub fn rows(&self) -> &[u64] {
        &self.rows
    }

    pub fn to_matrix(&self) -> Vec<Vec<bool>> {
        (0..self.n)
            .map(|x| (0..self.n).map(|y| self.neq(x, y)).collect())
            .collect()
    }
}

/// Apartness between singletons, `p(x, y)` meaning `{x} ⋈ {y}`.
/// Symmetric with a false diagonal.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PointApartness {
    n: usize,
    rows: Vec<u64>,
}

impl PointApartness {
    pub fn from_rows(n: usize, rows: Vec<u64>) -> Result<Self> {
        check_shape(n)?;
        if rows.len() != n {
            return Err(Error::invariant(format!("apartness has {} rows, expected {n}", rows.len())));
        }
        check_symmetric_irreflexive(n, &rows, "p")?;
        Ok(PointApartness { n, rows })
    }

    pub fn from_matrix(rows: &[Vec<bool>]) -> Result<Self> {
        let n = rows.len();
        check_shape(n)?;
        PointApartness::from_rows(n, rows_from_bools(n, rows, "p")?)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn apart(&self, x: usize, y: usize) -> bool {
        (self.rows[x] >> y) & 1 == 1
    }

    /// Points apart from `x`.
    #[inline]
    pub fn row(&self, x: usize) -> Subset {
        Subset::from_bits_unchecked(self.n, self.rows[x])
    }

    pub fn rows(&self) -> &[u64] {
        &self.rows
    }

    pub fn to_matrix(&self) -> Vec<Vec<bool>> {
        (0..self.n)
            .map(|x| (0..self.n).map(|y| self.apart(x, y)).collect())
            .collect()
    }
}

/// A finite symmetric pre-apartness space in point-matrix form.
///
/// Which of the axioms B4 and B5 hold is a property of the particular model
/// and is decided by [`crate::axioms::check_axioms`]; construction only
/// enforces the shape invariants and `p ⊆ neq`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Space {
    ineq: Inequality,
    apart: PointApartness,
}

impl Space {
    pub fn new(ineq: Inequality, apart: PointApartness) -> Result<Self> {
        if ineq.n != apart.n {
            return Err(Error::SizeMismatch {
                expected: ineq.n,
                found: apart.n,
            });
        }
        for x in 0..ineq.n {
            let stray = apart.rows[x] & !ineq.rows[x];
            if stray != 0 {
                let y = stray.trailing_zeros();
                return Err(Error::invariant(format!(
                    "p({x},{y}) holds but neq({x},{y}) does not"
                )));
            }
        }
        Ok(Space { ineq, apart })
    }

    /// Builds a space from row masks of `neq` and `p`.
    pub fn from_rows(n: usize, neq: Vec<u64>, p: Vec<u64>) -> Result<Self> {
        Space::new(Inequality::from_rows(n, neq)?, PointApartness::from_rows(n, p)?)
    }

    pub fn from_matrices(neq: &[Vec<bool>], p: &[Vec<bool>]) -> Result<Self> {
        Space::new(Inequality::from_matrix(neq)?, PointApartness::from_matrix(p)?)
    }

    /// Denotational inequality with every pair of distinct points apart.
    pub fn discrete(n: usize) -> Result<Self> {
        let ineq = Inequality::denotational(n)?;
        let apart = PointApartness {
            n,
            rows: ineq.rows.clone(),
        };
        Ok(Space { ineq, apart })
    }

    /// Denotational inequality with no two points apart.
    pub fn indiscrete(n: usize) -> Result<Self> {
        Ok(Space {
            ineq: Inequality::denotational(n)?,
            apart: PointApartness { n, rows: vec![0; n] },
        })
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.ineq.n
    }

    pub fn inequality(&self) -> &Inequality {
        &self.ineq
    }

    pub fn point_apartness(&self) -> &PointApartness {
        &self.apart
    }

    #[inline]
    pub fn neq(&self, x: usize, y: usize) -> bool {
        self.ineq.neq(x, y)
    }

    #[inline]
    pub fn p(&self, x: usize, y: usize) -> bool {
        self.apart.apart(x, y)
    }

    pub fn full(&self) -> Subset {
        Subset::full(self.n())
    }

    pub fn empty(&self) -> Subset {
        Subset::empty(self.n())
    }

    /// `A ⋈ B`: every point of `A` is apart from every point of `B`.
    /// Vacuously true when either side is empty.
    pub fn subset_apart(&self, a: Subset, b: Subset) -> Result<bool> {
        a.check_carrier(self.n())?;
        b.check_carrier(self.n())?;
        Ok(self.apart_bits(a.bits(), b.bits()))
    }

    #[inline]
    pub(crate) fn apart_bits(&self, a: u64, b: u64) -> bool {
        Subset::from_bits_unchecked(self.n(), a)
            .iter()
            .all(|s| b & !self.apart.rows[s] == 0)
    }

    /// `¬S`, the points not in `S`.
    pub fn complement_not(&self, s: Subset) -> Result<Subset> {
        s.check_carrier(self.n())?;
        Ok(s.complement())
    }

    /// `∼S`, the points unequal to every member of `S`.
    pub fn complement_neq(&self, s: Subset) -> Result<Subset> {
        s.check_carrier(self.n())?;
        Ok(Subset::from_bits_unchecked(self.n(), self.neq_bits(s.bits())))
    }

    /// `−S`, the points apart from `S`.
    pub fn complement_apart(&self, s: Subset) -> Result<Subset> {
        s.check_carrier(self.n())?;
        Ok(Subset::from_bits_unchecked(self.n(), self.minus_bits(s.bits())))
    }

    #[inline]
    pub(crate) fn minus_bits(&self, s: u64) -> u64 {
        // {x : ∀s∈S p(x,s)} = ⋂_{s∈S} row(s), by symmetry of p.
        Subset::from_bits_unchecked(self.n(), s)
            .iter()
            .fold(full_mask(self.n()), |acc, y| acc & self.apart.rows[y])
    }

    #[inline]
    pub(crate) fn neq_bits(&self, s: u64) -> u64 {
        Subset::from_bits_unchecked(self.n(), s)
            .iter()
            .fold(full_mask(self.n()), |acc, y| acc & self.ineq.rows[y])
    }

    #[inline]
    pub(crate) fn p_rows(&self) -> &[u64] {
        &self.apart.rows
    }

    #[inline]
    pub(crate) fn neq_rows(&self) -> &[u64] {
        &self.ineq.rows
    }
}

/// An arbitrary relation between subsets of an `n`-point carrier, stored as
/// a `2ⁿ × 2ⁿ` bit table indexed by subset masks.
#[derive(Clone, PartialEq, Eq)]
pub struct RawRelation {
    n: usize,
    table: Vec<u64>,
}

impl std::fmt::Debug for RawRelation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("RawRelation")
            .field("n", &self.n)
            .field("pairs", &self.count())
            .finish()
    }
}

impl RawRelation {
    /// The relation that holds for no pair.
    pub fn empty(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyCarrier("a space must be inhabited"));
        }
        Error::too_large(n, RAW_LIMIT)?;
        let bits = 1usize << (2 * n);
        Ok(RawRelation {
            n,
            table: vec![0; bits.div_ceil(64)],
        })
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(Subset, Subset) -> bool) -> Result<Self> {
        let mut rel = RawRelation::empty(n)?;
        for a in 0..1u64 << n {
            for b in 0..1u64 << n {
                if f(
                    Subset::from_bits_unchecked(n, a),
                    Subset::from_bits_unchecked(n, b),
                ) {
                    rel.set_bits(a, b, true);
                }
            }
        }
        Ok(rel)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    fn index(&self, a: u64, b: u64) -> usize {
        ((a as usize) << self.n) | b as usize
    }

    #[inline]
    pub(crate) fn get_bits(&self, a: u64, b: u64) -> bool {
        let i = self.index(a, b);
        (self.table[i / 64] >> (i % 64)) & 1 == 1
    }

    #[inline]
    pub(crate) fn set_bits(&mut self, a: u64, b: u64, v: bool) {
        let i = self.index(a, b);
        if v {
            self.table[i / 64] |= 1 << (i % 64);
        } else {
            self.table[i / 64] &= !(1 << (i % 64));
        }
    }

    pub fn get(&self, a: Subset, b: Subset) -> Result<bool> {
        a.check_carrier(self.n)?;
        b.check_carrier(self.n)?;
        Ok(self.get_bits(a.bits(), b.bits()))
    }

    pub fn set(&mut self, a: Subset, b: Subset, v: bool) -> Result<()> {
        a.check_carrier(self.n)?;
        b.check_carrier(self.n)?;
        self.set_bits(a.bits(), b.bits(), v);
        Ok(())
    }

    /// Number of related pairs.
    pub fn count(&self) -> usize {
        self.table.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// `−A` computed from the table: `{x : {x} ⋈ A}`.
    pub(crate) fn minus_bits(&self, a: u64) -> u64 {
        (0..self.n)
            .filter(|&x| self.get_bits(1 << x, a))
            .fold(0, |acc, x| acc | (1 << x))
    }
}

/// Tabulates the subset relation a space induces.
pub fn raw_from_space(space: &Space) -> Result<RawRelation> {
    let n = space.n();
    Error::too_large(n, RAW_LIMIT)?;
    let mut rel = RawRelation::empty(n)?;
    for a in 0..1u64 << n {
        // B ⋈-related to A iff B ⊆ −A.
        let minus = space.minus_bits(a);
        for b in 0..1u64 << n {
            if b & !minus == 0 {
                rel.set_bits(a, b, true);
            }
        }
    }
    Ok(rel)
}

/// Restricts a table to singleton pairs. Fails if the restriction breaks a
/// point-matrix invariant (asymmetry, a true diagonal, or `p ⊄ neq`).
pub fn space_from_raw(rel: &RawRelation, ineq: &Inequality) -> Result<Space> {
    if rel.n != ineq.n {
        return Err(Error::SizeMismatch {
            expected: rel.n,
            found: ineq.n,
        });
    }
    let n = rel.n;
    let rows = (0..n)
        .map(|x| {
            (0..n)
                .filter(|&y| rel.get_bits(1 << x, 1 << y))
                .fold(0u64, |acc, y| acc | (1 << y))
        })
        .collect();
    Space::new(ineq.clone(), PointApartness::from_rows(n, rows)?)
}

/// Human-readable summary of a space's matrices.
#[derive(Clone, Debug, Serialize)]
pub struct SpaceSummary {
    pub n: usize,
    pub neq: Vec<Vec<u8>>,
    pub p: Vec<Vec<u8>>,
}

impl From<&Space> for SpaceSummary {
    fn from(s: &Space) -> Self {
        let conv = |m: Vec<Vec<bool>>| -> Vec<Vec<u8>> {
            m.into_iter()
                .map(|r| r.into_iter().map(u8::from).collect())
                .collect()
        };
        SpaceSummary {
            n: s.n(),
            neq: conv(s.ineq.to_matrix()),
            p: conv(s.apart.to_matrix()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_point() -> Space {
        Space::discrete(2).unwrap()
    }

    fn set(n: usize, pts: &[usize]) -> Subset {
        Subset::from_points(n, pts.iter().copied()).unwrap()
    }

    #[test]
    fn empty_side_is_always_apart() {
        let s = Space::indiscrete(3).unwrap();
        for b in crate::subset::all_subsets(3) {
            assert!(s.subset_apart(s.empty(), b).unwrap());
            assert!(s.subset_apart(b, s.empty()).unwrap());
        }
    }

    #[test]
    fn point_pairs_read_the_matrix() {
        let s = two_point();
        assert!(s.subset_apart(set(2, &[0]), set(2, &[1])).unwrap());
        assert!(!s.subset_apart(set(2, &[0, 1]), set(2, &[1])).unwrap());
    }

    #[test]
    fn complements_on_three_points() {
        let s = Space::discrete(3).unwrap();
        assert_eq!(s.complement_not(set(3, &[0, 1, 2])).unwrap(), s.empty());
        assert_eq!(s.complement_not(s.empty()).unwrap(), s.full());
        assert_eq!(s.complement_not(set(3, &[1])).unwrap(), set(3, &[0, 2]));
        assert_eq!(s.complement_neq(s.empty()).unwrap(), s.full());
        assert_eq!(s.complement_apart(s.empty()).unwrap(), s.full());
    }

    #[test]
    fn neq_and_apart_complements() {
        let s = two_point();
        assert_eq!(s.complement_neq(set(2, &[1])).unwrap(), set(2, &[0]));
        assert_eq!(s.complement_apart(set(2, &[1])).unwrap(), set(2, &[0]));

        let trivial = Space::new(
            Inequality::trivial(3).unwrap(),
            PointApartness::from_rows(3, vec![0; 3]).unwrap(),
        )
        .unwrap();
        assert_eq!(trivial.complement_neq(set(3, &[2])).unwrap(), trivial.empty());

        let flat = Space::indiscrete(3).unwrap();
        assert_eq!(flat.complement_apart(set(3, &[1])).unwrap(), flat.empty());
    }

    #[test]
    fn size_mismatch_is_reported() {
        let s = two_point();
        let wrong = Subset::empty(3);
        assert_eq!(
            s.subset_apart(wrong, s.empty()),
            Err(Error::SizeMismatch { expected: 2, found: 3 })
        );
        assert!(s.complement_apart(wrong).is_err());
    }

    #[test]
    fn construction_rejects_bad_matrices() {
        assert!(Inequality::from_rows(2, vec![0b01, 0]).is_err()); // reflexive
        assert!(Inequality::from_rows(2, vec![0b10, 0]).is_err()); // asymmetric
        let ineq = Inequality::trivial(2).unwrap();
        let p = PointApartness::from_rows(2, vec![0b10, 0b01]).unwrap();
        assert!(matches!(Space::new(ineq, p), Err(Error::Invariant(_))));
        assert!(matches!(Inequality::denotational(0), Err(Error::EmptyCarrier(_))));
    }

    #[test]
    fn one_point_raw_table() {
        let s = Space::discrete(1).unwrap();
        let rel = raw_from_space(&s).unwrap();
        assert!(rel.get_bits(0, 0));
        assert!(rel.get_bits(0, 1));
        assert!(rel.get_bits(1, 0));
        assert!(!rel.get_bits(1, 1));
        assert_eq!(space_from_raw(&rel, s.inequality()).unwrap(), s);
    }

    #[test]
    fn raw_table_size_guard() {
        assert!(matches!(
            RawRelation::empty(14),
            Err(Error::CarrierTooLarge { n: 14, max: 13 })
        ));
    }
}

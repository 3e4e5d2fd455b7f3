//! Decision procedures for the pre-apartness axioms B1–B4, the apartness
//! axiom B5, symmetry and tightness.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::report::{PropertyReport, Witness};
use crate::space::{Inequality, RawRelation, Space, ENUMERATION_LIMIT};
use crate::subset::{full_mask, Subset};

/// Selects between the reduced decision procedures and exhaustive search.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct CheckOptions {
    pub brute_force: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AxiomReport {
    pub b1: PropertyReport,
    pub b2: PropertyReport,
    pub b3: PropertyReport,
    pub b4: PropertyReport,
    pub b5: PropertyReport,
    pub symmetry: PropertyReport,
}

impl AxiomReport {
    pub fn entries(&self) -> [&PropertyReport; 6] {
        [&self.b1, &self.b2, &self.b3, &self.b4, &self.b5, &self.symmetry]
    }

    /// B1–B4 and symmetry.
    pub fn is_pre_apartness(&self) -> bool {
        self.b1.holds && self.b2.holds && self.b3.holds && self.b4.holds && self.symmetry.holds
    }

    /// All of B1–B5 and symmetry.
    pub fn is_apartness(&self) -> bool {
        self.is_pre_apartness() && self.b5.holds
    }

    /// The verdicts alone, for comparing two reports.
    pub fn verdicts(&self) -> [bool; 6] {
        self.entries().map(|r| r.holds)
    }
}

fn subset(n: usize, bits: u64) -> Subset {
    Subset::from_bits_unchecked(n, bits)
}

pub fn check_axioms(space: &Space) -> Result<AxiomReport> {
    check_axioms_with(space, CheckOptions::default())
}

pub fn check_axioms_with(space: &Space, opts: CheckOptions) -> Result<AxiomReport> {
    let n = space.n();
    Error::too_large(n, ENUMERATION_LIMIT)?;
    let full = full_mask(n);

    let b1 = if space.apart_bits(full, 0) {
        PropertyReport::pass("B1")
    } else {
        PropertyReport::fail("B1", Witness::new().set("A", space.full()))
    };

    let b2 = PropertyReport::from_search("B2", b2_failure(space));

    // The subset relation is derived from the point matrix, so the union law
    // holds identically; see the raw checker for relations where it may not.
    let b3 = PropertyReport::pass("B3").with_note("holds by construction of the point-matrix relation");

    let b4 = if opts.brute_force {
        PropertyReport::from_search("B4", b4_failure_brute(space))
    } else {
        PropertyReport::from_search("B4", b4_failure(space))
    };

    let b5 = if opts.brute_force {
        PropertyReport::from_search("B5", b5_failure_brute(space))
    } else {
        PropertyReport::from_search("B5", b5_failure(space))
    };

    let symmetry = PropertyReport::from_search("SYM", symmetry_failure(space));

    Ok(AxiomReport {
        b1,
        b2,
        b3,
        b4,
        b5,
        symmetry,
    })
}

fn b2_failure(space: &Space) -> Option<Witness> {
    let n = space.n();
    (0..1u64 << n).find_map(|a| {
        let bad = space.minus_bits(a) & !space.neq_bits(a);
        (bad != 0).then(|| {
            Witness::new()
                .set("A", subset(n, a))
                .point("x", bad.trailing_zeros() as usize)
        })
    })
}

fn symmetry_failure(space: &Space) -> Option<Witness> {
    let n = space.n();
    (0..n).find_map(|x| {
        (0..n)
            .find(|&y| space.p(x, y) != space.p(y, x))
            .map(|y| Witness::new().point("x", x).point("y", y))
    })
}

/// B4 for a fixed `A` with `C = −A`: `−A ⊆ ∼B` says `B ⊆ ⋂_{c∈C} neq(c)`,
/// and `−A ⊆ −B` says `B ⊆ ⋂_{c∈C} p(c)`. The axiom holds for every `B`
/// iff the first intersection is contained in the second.
pub(crate) fn b4_failure(space: &Space) -> Option<Witness> {
    let n = space.n();
    (0..1u64 << n).find_map(|a| {
        let c = space.minus_bits(a);
        let bad = space.neq_bits(c) & !space.minus_bits(c);
        (bad != 0).then(|| {
            Witness::new()
                .set("A", subset(n, a))
                .set("B", subset(n, 1 << bad.trailing_zeros()))
        })
    })
}

pub(crate) fn b4_failure_brute(space: &Space) -> Option<Witness> {
    let n = space.n();
    for a in 0..1u64 << n {
        let minus_a = space.minus_bits(a);
        for b in 0..1u64 << n {
            let premise = minus_a & !space.neq_bits(b) == 0;
            if premise && minus_a & !space.minus_bits(b) != 0 {
                return Some(Witness::new().set("A", subset(n, a)).set("B", subset(n, b)));
            }
        }
    }
    None
}

/// B5 via its canonical witness: any admissible `S` must contain `X∖−A`, and
/// `−` is antitone, so `S = X∖−A` is admissible whenever any `S` is. The
/// axiom is therefore `∀A ∀x∈−A: {x} ⋈ X∖−A`.
pub(crate) fn b5_failure(space: &Space) -> Option<Witness> {
    let n = space.n();
    let full = full_mask(n);
    (0..1u64 << n).find_map(|a| {
        let minus_a = space.minus_bits(a);
        let rest = full & !minus_a;
        subset(n, minus_a)
            .iter()
            .find(|&x| rest & !space.p_rows()[x] != 0)
            .map(|x| Witness::new().set("A", subset(n, a)).point("x", x))
    })
}

/// B5 with a genuine search for `S`.
pub(crate) fn b5_failure_brute(space: &Space) -> Option<Witness> {
    let n = space.n();
    let full = full_mask(n);
    let minus: Vec<u64> = (0..1u64 << n).map(|s| space.minus_bits(s)).collect();
    for a in 0..1u64 << n {
        let minus_a = minus[a as usize];
        for x in subset(n, minus_a) {
            let found = (0..1u64 << n)
                .any(|s| (minus[s as usize] >> x) & 1 == 1 && (minus_a | s) == full);
            if !found {
                return Some(Witness::new().set("A", subset(n, a)).point("x", x));
            }
        }
    }
    None
}

/// Decides every axiom for an arbitrary subset relation. B3 is tested over
/// all triples (equivalently, all quadruples); B5 uses the canonical witness
/// only once B3 has passed and otherwise searches for `S`.
pub fn check_axioms_raw(rel: &RawRelation, ineq: &Inequality) -> Result<AxiomReport> {
    let n = rel.n();
    if ineq.n() != n {
        return Err(Error::SizeMismatch {
            expected: n,
            found: ineq.n(),
        });
    }
    let size = 1u64 << n;
    let full = full_mask(n);
    let minus: Vec<u64> = (0..size).map(|a| rel.minus_bits(a)).collect();
    let neqc: Vec<u64> = (0..size)
        .map(|b| {
            subset(n, b)
                .iter()
                .fold(full, |acc, y| acc & ineq.rows()[y])
        })
        .collect();

    let b1 = if rel.get_bits(full, 0) {
        PropertyReport::pass("B1")
    } else {
        PropertyReport::fail("B1", Witness::new().set("A", Subset::full(n)).set("B", Subset::empty(n)))
    };

    let b2 = PropertyReport::from_search(
        "B2",
        (0..size).find_map(|a| {
            let bad = minus[a as usize] & !neqc[a as usize];
            (bad != 0).then(|| {
                Witness::new()
                    .set("A", subset(n, a))
                    .point("x", bad.trailing_zeros() as usize)
            })
        }),
    );

    let b3_fail = raw_b3_failure(rel);
    let b3 = PropertyReport::from_search("B3", b3_fail);

    let mut b4_fail = None;
    'b4: for a in 0..size {
        let ma = minus[a as usize];
        for b in 0..size {
            if ma & !neqc[b as usize] == 0 && ma & !minus[b as usize] != 0 {
                b4_fail = Some(Witness::new().set("A", subset(n, a)).set("B", subset(n, b)));
                break 'b4;
            }
        }
    }
    let b4 = PropertyReport::from_search("B4", b4_fail);

    let b5 = if b3.holds {
        PropertyReport::from_search(
            "B5",
            (0..size).find_map(|a| {
                let ma = minus[a as usize];
                let rest = full & !ma;
                subset(n, ma)
                    .iter()
                    .find(|&x| !rel.get_bits(1 << x, rest))
                    .map(|x| Witness::new().set("A", subset(n, a)).point("x", x))
            }),
        )
    } else {
        PropertyReport::from_search("B5", raw_b5_failure_brute(rel, &minus))
    };

    let symmetry = check_symmetry(rel);

    Ok(AxiomReport {
        b1,
        b2,
        b3,
        b4,
        b5,
        symmetry,
    })
}

pub(crate) fn raw_b5_failure_brute(rel: &RawRelation, minus: &[u64]) -> Option<Witness> {
    let n = rel.n();
    let full = full_mask(n);
    for a in 0..1u64 << n {
        let ma = minus[a as usize];
        for x in subset(n, ma) {
            let found = (0..1u64 << n).any(|s| (minus[s as usize] >> x) & 1 == 1 && (ma | s) == full);
            if !found {
                return Some(Witness::new().set("A", subset(n, a)).point("x", x));
            }
        }
    }
    None
}

/// The two-sided union law follows from its one-sided instances (take
/// `A₁ = A₂` or `B₁ = B₂`), and conversely applying the one-sided laws in
/// turn recovers it. Failures are reported as quadruples.
fn raw_b3_failure(rel: &RawRelation) -> Option<Witness> {
    let n = rel.n();
    let size = 1u64 << n;
    let quad = |a1, a2, b1, b2| {
        Witness::new()
            .set("A1", subset(n, a1))
            .set("A2", subset(n, a2))
            .set("B1", subset(n, b1))
            .set("B2", subset(n, b2))
    };
    for a in 0..size {
        for b1 in 0..size {
            for b2 in b1..size {
                let lhs = rel.get_bits(a, b1 | b2);
                let rhs = rel.get_bits(a, b1) && rel.get_bits(a, b2);
                if lhs != rhs {
                    return Some(quad(a, a, b1, b2));
                }
                let lhs = rel.get_bits(b1 | b2, a);
                let rhs = rel.get_bits(b1, a) && rel.get_bits(b2, a);
                if lhs != rhs {
                    return Some(quad(b1, b2, a, a));
                }
            }
        }
    }
    None
}

pub fn check_symmetry(rel: &RawRelation) -> PropertyReport {
    let n = rel.n();
    let size = 1u64 << n;
    for a in 0..size {
        for b in a + 1..size {
            if rel.get_bits(a, b) != rel.get_bits(b, a) {
                return PropertyReport::fail(
                    "SYM",
                    Witness::new().set("A", subset(n, a)).set("B", subset(n, b)),
                );
            }
        }
    }
    PropertyReport::pass("SYM")
}

/// `¬(x ≠ y) ⇒ x = y`: every pair of distinct indices is unequal.
pub fn check_tight(ineq: &Inequality) -> PropertyReport {
    let n = ineq.n();
    for x in 0..n {
        for y in x + 1..n {
            if !ineq.neq(x, y) {
                return PropertyReport::fail("TIGHT", Witness::new().point("x", x).point("y", y));
            }
        }
    }
    PropertyReport::pass("TIGHT")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::raw_from_space;

    /// neq and p both exactly {(0,1)}: passes B1–B4, fails B5.
    fn b5_failing() -> Space {
        Space::from_rows(3, vec![0b010, 0b001, 0], vec![0b010, 0b001, 0]).unwrap()
    }

    #[test]
    fn one_point_space_passes_everything() {
        let r = check_axioms(&Space::discrete(1).unwrap()).unwrap();
        assert!(r.is_apartness());
    }

    #[test]
    fn b5_failure_has_expected_witness() {
        let s = b5_failing();
        let r = check_axioms(&s).unwrap();
        assert!(r.is_pre_apartness());
        assert!(!r.b5.holds);
        let w = r.b5.witness.as_ref().unwrap();
        assert_eq!(w.get_set("A"), Some(Subset::from_points(3, [0]).unwrap()));
        assert_eq!(w.get_point("x"), Some(1));
        // Brute force agrees on the verdict.
        let rb = check_axioms_with(&s, CheckOptions { brute_force: true }).unwrap();
        assert_eq!(rb.verdicts(), r.verdicts());
    }

    #[test]
    fn complete_neq_version_breaks_b4() {
        let s = Space::from_rows(3, vec![0b110, 0b101, 0b011], vec![0b010, 0b001, 0]).unwrap();
        let r = check_axioms(&s).unwrap();
        assert!(!r.b4.holds);
        let w = r.b4.witness.unwrap();
        assert_eq!(w.get_set("A"), Some(Subset::from_points(3, [0]).unwrap()));
        assert_eq!(w.get_set("B"), Some(Subset::from_points(3, [2]).unwrap()));
    }

    #[test]
    fn all_true_table_fails_b2() {
        let rel = RawRelation::from_fn(2, |_, _| true).unwrap();
        let ineq = Inequality::denotational(2).unwrap();
        let r = check_axioms_raw(&rel, &ineq).unwrap();
        assert!(!r.b2.holds);
    }

    #[test]
    fn empty_side_table_passes_with_full_witness() {
        for n in 1..=3 {
            let rel = RawRelation::from_fn(n, |a, b| a.is_empty() || b.is_empty()).unwrap();
            let r = check_axioms_raw(&rel, &Inequality::denotational(n).unwrap()).unwrap();
            assert!(r.b1.holds && r.b2.holds && r.b3.holds, "n={n}");
            assert!(r.b5.holds, "n={n}");
        }
    }

    #[test]
    fn raw_checker_matches_point_checker() {
        let s = b5_failing();
        let raw = raw_from_space(&s).unwrap();
        let r1 = check_axioms(&s).unwrap();
        let r2 = check_axioms_raw(&raw, s.inequality()).unwrap();
        assert_eq!(r1.verdicts(), r2.verdicts());
    }

    #[test]
    fn b3_violation_is_caught() {
        // {0} ⋈ {1} and {0} ⋈ {2}, but not {0} ⋈ {1,2}.
        let rel = RawRelation::from_fn(3, |a, b| {
            if a.is_empty() || b.is_empty() {
                return true;
            }
            let pair = |x: u64, y: u64| (a.bits() == x && b.bits() == y) || (a.bits() == y && b.bits() == x);
            pair(0b001, 0b010) || pair(0b001, 0b100)
        })
        .unwrap();
        let r = check_axioms_raw(&rel, &Inequality::denotational(3).unwrap()).unwrap();
        assert!(!r.b3.holds);
        assert!(r.symmetry.holds);
    }

    #[test]
    fn tightness() {
        assert!(check_tight(&Inequality::denotational(4).unwrap()).holds);
        let r = check_tight(&Inequality::trivial(2).unwrap());
        assert!(!r.holds);
        let w = r.witness.unwrap();
        assert_eq!((w.get_point("x"), w.get_point("y")), (Some(0), Some(1)));
    }

    #[test]
    fn asymmetric_table_is_flagged() {
        let rel = RawRelation::from_fn(2, |a, b| a.bits() == 0b01 && b.bits() == 0b10).unwrap();
        assert!(!check_symmetry(&rel).holds);
        let sym = raw_from_space(&Space::discrete(2).unwrap()).unwrap();
        assert!(check_symmetry(&sym).holds);
    }

    #[test]
    fn space_from_raw_rejects_asymmetric_restriction() {
        let rel = RawRelation::from_fn(2, |a, b| a.bits() == 0b01 && b.bits() == 0b10).unwrap();
        assert!(crate::space::space_from_raw(&rel, &Inequality::denotational(2).unwrap()).is_err());
    }
}

//! Point maps between spaces and their continuity properties.

use serde::Serialize;

use crate::constructors::{disjoint_union, product_index, subspace, UniformBase};
use crate::error::{Error, Result};
use crate::properties::PAIR_LIMIT;
use crate::report::{PropertyReport, Witness};
use crate::space::Space;
use crate::subset::Subset;
use crate::topology::{Neighborhoods, Topology};

pub mod harness;

/// A total function from `{0..source}` to `{0..target}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct PointMap {
    source: usize,
    target: usize,
    image: Vec<usize>,
}

impl PointMap {
    pub fn new(target: usize, image: Vec<usize>) -> Result<Self> {
        if let Some(&y) = image.iter().find(|&&y| y >= target) {
            return Err(Error::PointOutOfRange { point: y, n: target });
        }
        Ok(PointMap {
            source: image.len(),
            target,
            image,
        })
    }

    pub fn identity(n: usize) -> Self {
        PointMap {
            source: n,
            target: n,
            image: (0..n).collect(),
        }
    }

    pub fn constant(source: usize, target: usize, c: usize) -> Result<Self> {
        PointMap::new(target, vec![c; source])
    }

    pub fn source(&self) -> usize {
        self.source
    }

    pub fn target(&self) -> usize {
        self.target
    }

    pub fn image(&self) -> &[usize] {
        &self.image
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.image[x]
    }

    /// `then ∘ self`.
    pub fn then(&self, then: &PointMap) -> Result<PointMap> {
        if self.target != then.source {
            return Err(Error::SizeMismatch {
                expected: then.source,
                found: self.target,
            });
        }
        Ok(PointMap {
            source: self.source,
            target: then.target,
            image: self.image.iter().map(|&y| then.image[y]).collect(),
        })
    }

    pub fn image_of(&self, a: Subset) -> Result<Subset> {
        a.check_carrier(self.source)?;
        Subset::from_points(self.target, a.iter().map(|x| self.image[x]))
    }

    pub fn preimage(&self, b: Subset) -> Result<Subset> {
        b.check_carrier(self.target)?;
        Subset::from_points(self.source, (0..self.source).filter(|&x| b.contains(self.image[x])))
    }

    pub fn range(&self) -> Subset {
        Subset::from_points(self.target, self.image.iter().copied()).expect("image indices are in range")
    }

    pub fn is_injective(&self) -> bool {
        self.range().len() == self.source
    }

    fn check_between(&self, x: usize, y: usize) -> Result<()> {
        if self.source != x {
            return Err(Error::SizeMismatch {
                expected: x,
                found: self.source,
            });
        }
        if self.target != y {
            return Err(Error::SizeMismatch {
                expected: y,
                found: self.target,
            });
        }
        Ok(())
    }
}

/// `f(A) ⋈ f(B) ⇒ A ⋈ B`. With both relations determined by their point
/// matrices this reduces to `p_Y(f x, f x′) ⇒ p_X(x, x′)`.
pub fn is_strongly_continuous(f: &PointMap, x: &Space, y: &Space) -> Result<PropertyReport> {
    f.check_between(x.n(), y.n())?;
    for a in 0..x.n() {
        for b in 0..x.n() {
            if y.p(f.apply(a), f.apply(b)) && !x.p(a, b) {
                return Ok(PropertyReport::fail("SC", Witness::new().point("x", a).point("x'", b)));
            }
        }
    }
    Ok(PropertyReport::pass("SC"))
}

/// Strong continuity checked over every pair of subsets of the domain.
pub fn is_strongly_continuous_brute(f: &PointMap, x: &Space, y: &Space) -> Result<PropertyReport> {
    f.check_between(x.n(), y.n())?;
    let n = x.n();
    Error::too_large(n, PAIR_LIMIT)?;
    let images: Vec<Subset> = crate::subset::all_subsets(n)
        .map(|a| f.image_of(a))
        .collect::<Result<_>>()?;
    for a in crate::subset::all_subsets(n) {
        for b in crate::subset::all_subsets(n) {
            let fa = images[a.bits() as usize];
            let fb = images[b.bits() as usize];
            if y.subset_apart(fa, fb)? && !x.subset_apart(a, b)? {
                return Ok(PropertyReport::fail("SC", Witness::new().set("A", a).set("B", b)));
            }
        }
    }
    Ok(PropertyReport::pass("SC"))
}

/// `∀V ∃U ∀(x,x′) ∈ U: (f x, f x′) ∈ V`.
pub fn is_uniformly_continuous(f: &PointMap, ux: &UniformBase, uy: &UniformBase) -> Result<PropertyReport> {
    f.check_between(ux.n(), uy.n())?;
    let n = ux.n();
    for (kv, _) in uy.entourages().iter().enumerate() {
        let found = (0..ux.entourages().len()).any(|ku| {
            (0..n).all(|a| (0..n).all(|b| !ux.contains(ku, a, b) || uy.contains(kv, f.apply(a), f.apply(b))))
        });
        if !found {
            return Ok(PropertyReport::fail("UC", Witness::new().point("V", kv)));
        }
    }
    Ok(PropertyReport::pass("UC"))
}

/// Every open set of the source has an open image.
pub fn is_open_map(f: &PointMap, top_x: &Topology, top_y: &Topology) -> Result<bool> {
    f.check_between(top_x.space().n(), top_y.space().n())?;
    for &u in top_x.opens() {
        if !top_y.is_open(f.image_of(u)?)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Openness from minimal neighbourhoods: every open is the union of the
/// minimal neighbourhoods of its points and images preserve unions, so `f`
/// is open iff each `f(N(x))` is open. Returns the offending point.
pub fn open_map_failure(f: &PointMap, nx: &Neighborhoods, ny: &Neighborhoods) -> Result<Option<usize>> {
    f.check_between(nx.n(), ny.n())?;
    for x in 0..nx.n() {
        if !ny.is_open(f.image_of(nx.min_neighborhood(x)?)?)? {
            return Ok(Some(x));
        }
    }
    Ok(None)
}

/// The gluing map together with its domain.
#[derive(Clone, Debug)]
pub struct GlueMap {
    /// `subspace(E, X) ⊍ subspace(E, Y)`.
    pub domain: Space,
    /// `(x, 0) ↦ x`, `(y, 1) ↦ y`, into `E`.
    pub map: PointMap,
}

pub fn glue_map(x_sub: Subset, y_sub: Subset, e: &Space) -> Result<GlueMap> {
    let sx = subspace(e, x_sub)?;
    let sy = subspace(e, y_sub)?;
    let domain = disjoint_union(&sx, &sy)?;
    let image = x_sub.iter().chain(y_sub.iter()).collect();
    Ok(GlueMap {
        domain,
        map: PointMap::new(e.n(), image)?,
    })
}

/// Projection of `X × Y` (row-major) onto factor `k` (0 or 1).
pub fn projection(x: &Space, y: &Space, k: usize) -> Result<PointMap> {
    let (nx, ny) = (x.n(), y.n());
    let image = (0..nx * ny)
        .map(|i| match k {
            0 => Ok(i / ny),
            1 => Ok(i % ny),
            _ => Err(Error::InvalidArgument(format!("projection index {k} must be 0 or 1"))),
        })
        .collect::<Result<Vec<_>>>()?;
    PointMap::new(if k == 0 { nx } else { ny }, image)
}

/// `(a₁, a₂) ↦ (h₁ a₁, h₂ a₂)` between row-major products.
pub fn pair_map(h1: &PointMap, h2: &PointMap) -> Result<PointMap> {
    let image = (0..h1.source)
        .flat_map(|a| (0..h2.source).map(move |b| (a, b)))
        .map(|(a, b)| product_index(h1.apply(a), h2.apply(b), h2.target))
        .collect();
    PointMap::new(h1.target * h2.target, image)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructors::product;

    #[test]
    fn identity_and_constant_maps() {
        let s = Space::discrete(3).unwrap();
        assert!(is_strongly_continuous(&PointMap::identity(3), &s, &s).unwrap().holds);
        let c = PointMap::constant(3, 3, 1).unwrap();
        assert!(is_strongly_continuous(&c, &s, &s).unwrap().holds);
        assert!(is_strongly_continuous_brute(&c, &s, &s).unwrap().holds);
    }

    #[test]
    fn identity_from_indiscrete_to_discrete_is_not_sc() {
        let flat = Space::indiscrete(2).unwrap();
        let disc = Space::discrete(2).unwrap();
        let id = PointMap::identity(2);
        let r = is_strongly_continuous_brute(&id, &flat, &disc).unwrap();
        assert!(!r.holds);
        let w = r.witness.unwrap();
        assert_eq!(w.get_set("A"), Some(Subset::singleton(2, 0).unwrap()));
        assert_eq!(w.get_set("B"), Some(Subset::singleton(2, 1).unwrap()));
        assert!(!is_strongly_continuous(&id, &flat, &disc).unwrap().holds);
    }

    #[test]
    fn size_mismatch() {
        let s = Space::discrete(2).unwrap();
        let f = PointMap::identity(3);
        assert!(matches!(is_strongly_continuous(&f, &s, &s), Err(Error::SizeMismatch { .. })));
        assert!(PointMap::new(2, vec![0, 2]).is_err());
    }

    #[test]
    fn constant_map_into_indiscrete_is_not_open() {
        let x = Space::discrete(2).unwrap();
        let y = Space::indiscrete(2).unwrap();
        let tx = Topology::build(&x).unwrap();
        let ty = Topology::build(&y).unwrap();
        let c = PointMap::constant(2, 2, 0).unwrap();
        assert!(!is_open_map(&c, &tx, &ty).unwrap());
        assert!(is_open_map(&PointMap::identity(2), &tx, &tx).unwrap());
        assert_eq!(
            open_map_failure(&c, tx.neighborhoods(), ty.neighborhoods()).unwrap(),
            Some(0)
        );
    }

    #[test]
    fn glue_of_full_carriers_is_the_fold() {
        let e = Space::discrete(3).unwrap();
        let g = glue_map(e.full(), e.full(), &e).unwrap();
        assert_eq!(g.map.image(), &[0, 1, 2, 0, 1, 2]);
        assert!(is_strongly_continuous(&g.map, &g.domain, &e).unwrap().holds);
    }

    #[test]
    fn glue_of_disjoint_parts_is_injective() {
        let e = Space::indiscrete(4).unwrap();
        let g = glue_map(
            Subset::from_points(4, [0, 2]).unwrap(),
            Subset::from_points(4, [1, 3]).unwrap(),
            &e,
        )
        .unwrap();
        assert!(g.map.is_injective());
        assert!(glue_map(e.empty(), e.full(), &e).is_err());
    }

    #[test]
    fn pair_of_identities_is_identity() {
        let f = pair_map(&PointMap::identity(2), &PointMap::identity(3)).unwrap();
        assert_eq!(f, PointMap::identity(6));
    }

    #[test]
    fn projections_index_row_major() {
        let x = Space::discrete(2).unwrap();
        let y = Space::discrete(3).unwrap();
        let p0 = projection(&x, &y, 0).unwrap();
        let p1 = projection(&x, &y, 1).unwrap();
        assert_eq!(p0.image(), &[0, 0, 0, 1, 1, 1]);
        assert_eq!(p1.image(), &[0, 1, 2, 0, 1, 2]);
        let xy = product(&x, &y).unwrap();
        assert!(is_strongly_continuous(&p0, &xy, &x).unwrap().holds);
        assert!(projection(&x, &y, 2).is_err());
    }

    #[test]
    fn uniform_continuity_of_identity() {
        let diag: Vec<u64> = (0..3).map(|x| 1 << x).collect();
        let u = UniformBase::new(3, vec![diag]).unwrap();
        assert!(is_uniformly_continuous(&PointMap::identity(3), &u, &u).unwrap().holds);
    }
}

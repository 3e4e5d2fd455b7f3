//! The union-of-precompact-subsets diagram replayed on truncated Cantor
//! spaces.
//!
//! `2^N` is truncated to `{0,1}ᵏ` and `2^N × {0,1}` is realised as
//! `{0,1}ᵏ⁺¹` through the first-bit split `f(α) = (tail α, first bit α)`.
//! Given dense `D₁, D₂ ⊆ {0,1}ᵏ` and maps `hᵢ` from `Dᵢ` into subspaces
//! `X₀, X₁` of an ambient space `E`, the harness builds
//!
//! ```text
//!   D ⊆ {0,1}ᵏ⁺¹ --f--> (D₁×{0}) ∪ (D₂×{1}) --w--> X₀ ⊍ X₁ --g--> E
//! ```
//!
//! and reports every property the argument relies on.

use serde::Serialize;

use super::{glue_map, is_strongly_continuous, open_map_failure, PointMap};
use crate::constructors::{cantor, first_difference, from_metric, product, subspace, CantorSpec};
use crate::error::{Error, Result};
use crate::report::{PropertyReport, Witness};
use crate::space::Space;
use crate::subset::Subset;
use crate::topology::Neighborhoods;

/// Deepest `k` the harness accepts; `{0,1}ᵏ⁺¹` must fit in a `Space`.
pub const HARNESS_MAX_DEPTH: usize = 5;

#[derive(Clone, Debug)]
pub struct HarnessInput {
    pub depth: usize,
    pub d1: Subset,
    pub d2: Subset,
    /// From `subspace(C, D₁)` (points in increasing order) to `X₀`.
    pub h1: PointMap,
    /// From `subspace(C, D₂)` to `X₁`.
    pub h2: PointMap,
    pub ambient: Space,
    pub x0: Subset,
    pub x1: Subset,
}

impl HarnessInput {
    /// Full `Dᵢ`, identity `hᵢ`, and both `Xᵢ` equal to the Cantor space
    /// itself.
    pub fn identity(depth: usize) -> Result<Self> {
        let c = cantor_space(depth)?;
        let n = c.n();
        Ok(HarnessInput {
            depth,
            d1: c.full(),
            d2: c.full(),
            h1: PointMap::identity(n),
            h2: PointMap::identity(n),
            x0: c.full(),
            x1: c.full(),
            ambient: c,
        })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct HarnessReport {
    pub depth: usize,
    /// Hypotheses on `Dᵢ` and `hᵢ`.
    pub preconditions: Vec<PropertyReport>,
    /// Properties of the first-bit split `f`.
    pub isomorphism: Vec<PropertyReport>,
    /// The five diagram claims.
    pub checks: Vec<PropertyReport>,
    /// Further facts used along the way.
    pub auxiliary: Vec<PropertyReport>,
}

impl HarnessReport {
    pub fn all_checks_pass(&self) -> bool {
        self.checks.iter().all(|c| c.holds)
    }

    pub fn all_pass(&self) -> bool {
        self.preconditions
            .iter()
            .chain(&self.isomorphism)
            .chain(&self.checks)
            .chain(&self.auxiliary)
            .all(|c| c.holds)
    }

    pub fn check(&self, name: &str) -> Option<&PropertyReport> {
        self.checks
            .iter()
            .chain(&self.preconditions)
            .chain(&self.isomorphism)
            .chain(&self.auxiliary)
            .find(|c| c.property == name)
    }
}

fn cantor_space(depth: usize) -> Result<Space> {
    from_metric(&cantor(CantorSpec::new(depth)?)?)
}

fn density(name: &str, s: Subset, nb: &Neighborhoods) -> Result<PropertyReport> {
    let closure = nb.closure(s)?;
    Ok(PropertyReport::from_search(
        name,
        closure.complement().first().map(|x| Witness::new().point("x", x)),
    ))
}

fn renamed(mut r: PropertyReport, name: &str) -> PropertyReport {
    r.property = name.to_owned();
    r
}

/// Rank of each member of `s` within `s`.
fn ranks(s: Subset) -> Vec<Option<usize>> {
    let mut out = vec![None; s.carrier()];
    for (i, x) in s.iter().enumerate() {
        out[x] = Some(i);
    }
    out
}

pub fn union_harness(input: &HarnessInput) -> Result<HarnessReport> {
    let k = input.depth;
    if k == 0 || k > HARNESS_MAX_DEPTH {
        return Err(Error::InvalidArgument(format!(
            "harness depth must be between 1 and {HARNESS_MAX_DEPTH}, got {k}"
        )));
    }
    let c = cantor_space(k)?;
    let c_next = cantor_space(k + 1)?;
    let nc = c.n();
    input.d1.check_carrier(nc)?;
    input.d2.check_carrier(nc)?;
    let e = &input.ambient;
    input.x0.check_carrier(e.n())?;
    input.x1.check_carrier(e.n())?;
    if input.d1.is_empty() || input.d2.is_empty() {
        return Err(Error::EmptyCarrier("D₁ and D₂ must be inhabited"));
    }

    let dom1 = subspace(&c, input.d1)?;
    let dom2 = subspace(&c, input.d2)?;
    let x0 = subspace(e, input.x0)?;
    let x1 = subspace(e, input.x1)?;
    let nbc = Neighborhoods::new(&c);
    let nbx0 = Neighborhoods::new(&x0);
    let nbx1 = Neighborhoods::new(&x1);

    let preconditions = vec![
        density("D1 dense", input.d1, &nbc)?,
        density("D2 dense", input.d2, &nbc)?,
        renamed(is_strongly_continuous(&input.h1, &dom1, &x0)?, "h1 SC"),
        renamed(is_strongly_continuous(&input.h2, &dom2, &x1)?, "h2 SC"),
        density("h1 image dense", input.h1.range(), &nbx0)?,
        density("h2 image dense", input.h2.range(), &nbx1)?,
    ];

    // P = C × {0,1}, row-major: (a, i) is point 2a + i.
    let two = Space::discrete(2)?;
    let p = product(&c, &two)?;
    let tail_mask = nc - 1;
    let f = PointMap::new(
        p.n(),
        (0..c_next.n()).map(|alpha| 2 * (alpha & tail_mask) + (alpha >> k)).collect(),
    )?;

    let isometry_failure = (0..c_next.n()).find_map(|a| {
        (0..c_next.n()).find_map(|b| {
            // Distances as exponents: 2^(−i) at depth k+1 versus 1 across the
            // split and half the depth-k distance within a copy.
            let lhs = first_difference(k + 1, a, b);
            let rhs = if (a >> k) != (b >> k) {
                Some(0)
            } else {
                first_difference(k, a & tail_mask, b & tail_mask).map(|i| i + 1)
            };
            (lhs != rhs).then(|| Witness::new().point("α", a).point("β", b))
        })
    });
    let nb_next = Neighborhoods::new(&c_next);
    let nbp = Neighborhoods::new(&p);
    let isomorphism = vec![
        PropertyReport::from_search(
            "f bijective",
            (!(f.is_injective() && f.range() == p.full())).then(|| Witness::new().set("range", f.range())),
        ),
        PropertyReport::from_search("f scaled isometry", isometry_failure),
        renamed(is_strongly_continuous(&f, &c_next, &p)?, "f SC"),
    ];

    // Domain of w: (D₁ × {0}) ∪ (D₂ × {1}) inside P.
    let w_dom = Subset::from_points(
        p.n(),
        input
            .d1
            .iter()
            .map(|a| 2 * a)
            .chain(input.d2.iter().map(|a| 2 * a + 1)),
    )?;
    let w_space = subspace(&p, w_dom)?;
    let union = crate::constructors::disjoint_union(&x0, &x1)?;
    let rank1 = ranks(input.d1);
    let rank2 = ranks(input.d2);
    let nx0 = x0.n();
    let w_image = w_dom
        .iter()
        .map(|pt| {
            let (a, bit) = (pt / 2, pt % 2);
            if bit == 0 {
                input.h1.apply(rank1[a].expect("a ∈ D₁"))
            } else {
                nx0 + input.h2.apply(rank2[a].expect("a ∈ D₂"))
            }
        })
        .collect();
    let w = PointMap::new(union.n(), w_image)?;

    // D = f⁻¹(dom w) and f restricted to D, landing in dom w.
    let d = f.preimage(w_dom)?;
    let d_space = subspace(&c_next, d)?;
    let w_rank = ranks(w_dom);
    let f_on_d = PointMap::new(
        w_space.n(),
        d.iter().map(|alpha| w_rank[f.apply(alpha)].expect("f(D) ⊆ dom w")).collect(),
    )?;

    let g = glue_map(input.x0, input.x1, e)?;
    debug_assert_eq!(g.domain, union);
    let composite = f_on_d.then(&w)?.then(&g.map)?;

    let covered = input.x0.union(input.x1);
    let z = subspace(e, covered)?;
    let z_rank = ranks(covered);
    let composite_image = Subset::from_points(
        z.n(),
        composite.image().iter().map(|&y| z_rank[y].expect("g lands in X₀ ∪ X₁")),
    )?;

    let nbu = Neighborhoods::new(&union);
    let checks = vec![
        density("range(w) dense", w.range(), &nbu)?,
        renamed(is_strongly_continuous(&w, &w_space, &union)?, "w SC"),
        PropertyReport::from_search(
            "f open",
            open_map_failure(&f, &nb_next, &nbp)?.map(|x| Witness::new().point("x", x)),
        ),
        renamed(is_strongly_continuous(&composite, &d_space, e)?, "gwf SC"),
        density("gwf image dense", composite_image, &Neighborhoods::new(&z))?,
    ];

    let auxiliary = vec![
        density("D dense", d, &nb_next)?,
        renamed(is_strongly_continuous(&g.map, &g.domain, e)?, "g SC"),
    ];

    Ok(HarnessReport {
        depth: k,
        preconditions,
        isomorphism,
        checks,
        auxiliary,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_harness_passes_at_depth_three() {
        let report = union_harness(&HarnessInput::identity(3).unwrap()).unwrap();
        assert!(report.all_pass(), "{report:#?}");
        assert_eq!(report.checks.len(), 5);
    }

    #[test]
    fn depth_guard() {
        assert!(union_harness(&HarnessInput {
            depth: 6,
            ..HarnessInput::identity(1).unwrap()
        })
        .is_err());
    }

    #[test]
    fn non_dense_h1_is_reported_not_thrown() {
        let mut input = HarnessInput::identity(2).unwrap();
        input.h1 = PointMap::constant(4, 4, 0).unwrap();
        let report = union_harness(&input).unwrap();
        assert!(!report.check("h1 image dense").unwrap().holds);
        assert!(!report.check("range(w) dense").unwrap().holds);
        // Finite metric domains are discrete, so w stays strongly continuous.
        assert!(report.check("w SC").unwrap().holds);
    }
}

//! Spaces induced by metrics and uniform bases, and the subspace, disjoint
//! union, product and truncated Cantor constructions.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::space::{Inequality, PointApartness, Space};
use crate::subset::{full_mask, Subset, MAX_POINTS};

/// Deepest truncation [`cantor`] will build (`2⁸ = 256` points).
pub const CANTOR_MAX_DEPTH: usize = 8;

/// A finite metric with exact rational distances.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MetricSpace {
    n: usize,
    dist: Vec<BigRational>,
}

impl MetricSpace {
    /// Checks symmetry, zero diagonal, positivity off the diagonal and the
    /// triangle inequality.
    #[allow(clippy::needless_range_loop)]
    pub fn new(dist: Vec<Vec<BigRational>>) -> Result<Self> {
        let n = dist.len();
        if n == 0 {
            return Err(Error::EmptyCarrier("a metric space must be inhabited"));
        }
        if let Some((i, row)) = dist.iter().enumerate().find(|(_, r)| r.len() != n) {
            return Err(Error::invariant(format!("distance row {i} has {} entries, expected {n}", row.len())));
        }
        for x in 0..n {
            if !dist[x][x].is_zero() {
                return Err(Error::invariant(format!("dist({x},{x}) = {} is not zero", dist[x][x])));
            }
            for y in 0..n {
                if dist[x][y] != dist[y][x] {
                    return Err(Error::invariant(format!("dist is not symmetric at ({x},{y})")));
                }
                if x != y && !dist[x][y].is_positive() {
                    return Err(Error::invariant(format!(
                        "dist({x},{y}) = {} must be positive for distinct points",
                        dist[x][y]
                    )));
                }
            }
        }
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    if dist[x][z] > &dist[x][y] + &dist[y][z] {
                        return Err(Error::invariant(format!("triangle inequality fails for ({x},{y},{z})")));
                    }
                }
            }
        }
        Ok(MetricSpace {
            n,
            dist: dist.into_iter().flatten().collect(),
        })
    }

    fn from_fn_unchecked(n: usize, f: impl Fn(usize, usize) -> BigRational) -> Self {
        let dist = (0..n).flat_map(|x| (0..n).map(move |y| (x, y))).map(|(x, y)| f(x, y)).collect();
        MetricSpace { n, dist }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dist(&self, x: usize, y: usize) -> &BigRational {
        &self.dist[x * self.n + y]
    }

    pub fn to_matrix(&self) -> Vec<Vec<BigRational>> {
        self.dist.chunks(self.n).map(|r| r.to_vec()).collect()
    }

    /// Largest distance.
    pub fn diameter(&self) -> BigRational {
        self.dist.iter().max().cloned().unwrap_or_else(BigRational::zero)
    }

    /// The metric restricted to `carrier`, re-indexed in increasing order.
    pub fn restrict(&self, carrier: Subset) -> Result<MetricSpace> {
        carrier.check_carrier(self.n)?;
        if carrier.is_empty() {
            return Err(Error::EmptyCarrier("subspace carrier must be inhabited"));
        }
        let pts: Vec<usize> = carrier.iter().collect();
        Ok(MetricSpace::from_fn_unchecked(pts.len(), |i, j| self.dist(pts[i], pts[j]).clone()))
    }
}

/// Space induced by a finite metric: `S ⋈ T` iff some `ε > 0` bounds every
/// cross distance from below. With finitely many pairs this is positivity of
/// the minimum distance, so `p(x,y) ⇔ dist(x,y) > 0`.
pub fn from_metric(m: &MetricSpace) -> Result<Space> {
    let n = m.n;
    Error::too_large(n, MAX_POINTS)?;
    let rows: Vec<u64> = (0..n)
        .map(|x| {
            (0..n)
                .filter(|&y| m.dist(x, y).is_positive())
                .fold(0u64, |acc, y| acc | (1 << y))
        })
        .collect();
    Space::new(
        Inequality::denotational(n)?,
        PointApartness::from_rows(n, rows)?,
    )
}

/// A finite base of entourages, each an `n × n` relation stored by rows.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct UniformBase {
    n: usize,
    entourages: Vec<Vec<u64>>,
}

fn compose(a: &[u64], b: &[u64]) -> Vec<u64> {
    a.iter()
        .map(|&row| {
            let n = a.len();
            Subset::from_bits_unchecked(n, row).iter().fold(0, |acc, y| acc | b[y])
        })
        .collect()
}

fn transpose(a: &[u64]) -> Vec<u64> {
    let n = a.len();
    (0..n)
        .map(|y| (0..n).filter(|&x| (a[x] >> y) & 1 == 1).fold(0, |acc, x| acc | (1 << x)))
        .collect()
}

fn contained(a: &[u64], b: &[u64]) -> bool {
    a.iter().zip(b).all(|(x, y)| x & !y == 0)
}

impl UniformBase {
    pub fn new(n: usize, entourages: Vec<Vec<u64>>) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyCarrier("a uniform space must be inhabited"));
        }
        Error::too_large(n, MAX_POINTS)?;
        if entourages.is_empty() {
            return Err(Error::invariant("a uniform base needs at least one entourage"));
        }
        for (k, u) in entourages.iter().enumerate() {
            if u.len() != n || u.iter().any(|&r| r & !full_mask(n) != 0) {
                return Err(Error::invariant(format!("entourage {k} is not an {n}×{n} relation")));
            }
            if let Some(x) = (0..n).find(|&x| (u[x] >> x) & 1 == 0) {
                return Err(Error::invariant(format!("entourage {k} misses the diagonal at {x}")));
            }
        }
        for (k, u) in entourages.iter().enumerate() {
            if !entourages.iter().any(|v| contained(&compose(v, v), u)) {
                return Err(Error::invariant(format!("no base member V has V∘V ⊆ entourage {k}")));
            }
            let ut = transpose(u);
            if !entourages.iter().any(|v| contained(v, &ut)) {
                return Err(Error::invariant(format!("no base member lies inside the transpose of entourage {k}")));
            }
            for (j, w) in entourages.iter().enumerate().skip(k + 1) {
                let meet: Vec<u64> = u.iter().zip(w).map(|(a, b)| a & b).collect();
                if !entourages.iter().any(|v| contained(v, &meet)) {
                    return Err(Error::invariant(format!(
                        "no base member lies inside the intersection of entourages {k} and {j}"
                    )));
                }
            }
        }
        let meet = entourages
            .iter()
            .fold(vec![full_mask(n); n], |acc, u| acc.iter().zip(u).map(|(a, b)| a & b).collect());
        if let Some(x) = (0..n).find(|&x| meet[x] != 1 << x) {
            let y = (meet[x] & !(1 << x)).trailing_zeros();
            return Err(Error::invariant(format!(
                "base is not Hausdorff: ({x},{y}) lies in every entourage"
            )));
        }
        Ok(UniformBase { n, entourages })
    }

    pub fn from_matrices(entourages: &[Vec<Vec<bool>>]) -> Result<Self> {
        let n = entourages.first().map_or(0, |u| u.len());
        let rows = entourages
            .iter()
            .map(|u| {
                u.iter()
                    .map(|r| r.iter().enumerate().fold(0u64, |acc, (j, &b)| acc | ((b as u64) << j)))
                    .collect()
            })
            .collect();
        UniformBase::new(n, rows)
    }

    /// The base `{(x,y) : dist(x,y) < r}` over every positive distance `r`.
    pub fn from_metric(m: &MetricSpace) -> Result<Self> {
        let n = m.n;
        let mut radii: Vec<&BigRational> = m.dist.iter().filter(|d| d.is_positive()).collect();
        radii.sort();
        radii.dedup();
        let ents: Vec<Vec<u64>> = if radii.is_empty() {
            vec![vec![1]]
        } else {
            radii
                .into_iter()
                .map(|r| {
                    (0..n)
                        .map(|x| (0..n).filter(|&y| m.dist(x, y) < r).fold(0u64, |acc, y| acc | (1 << y)))
                        .collect()
                })
                .collect()
        };
        UniformBase::new(n, ents)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn entourages(&self) -> &[Vec<u64>] {
        &self.entourages
    }

    #[inline]
    pub fn contains(&self, k: usize, x: usize, y: usize) -> bool {
        (self.entourages[k][x] >> y) & 1 == 1
    }

    /// `x ≠ y` iff some entourage omits `(x, y)`.
    pub fn induced_inequality(&self) -> Inequality {
        let n = self.n;
        let rows = (0..n)
            .map(|x| self.entourages.iter().fold(0u64, |acc, u| acc | (full_mask(n) & !u[x])))
            .collect();
        Inequality::from_rows(n, rows).expect("entourages contain the diagonal and the base is symmetric")
    }
}

/// `(x, y) ∈ ∼U`: unequal, in the product inequality, to every pair of `U`.
fn outside(ineq: &Inequality, u: &[u64], x: usize, y: usize) -> bool {
    // (x,y) ≠ (a,b) iff x ≠ a or y ≠ b; only a with ¬(x ≠ a) constrain b.
    let n = ineq.n();
    (0..n)
        .filter(|&a| !ineq.neq(x, a))
        .all(|a| u[a] & !ineq.rows()[y] == 0)
}

/// Space induced by a uniform base: `S ⋈ T` iff `S × T ⊆ ∼U` for some `U`.
/// The base is closed under finite meets, so this collapses to singletons.
/// Without an explicit inequality the induced one is used.
pub fn from_uniform(u: &UniformBase, ineq: Option<&Inequality>) -> Result<Space> {
    let ineq = match ineq {
        Some(i) if i.n() != u.n => {
            return Err(Error::SizeMismatch {
                expected: u.n,
                found: i.n(),
            })
        }
        Some(i) => i.clone(),
        None => u.induced_inequality(),
    };
    let n = u.n;
    let rows: Vec<u64> = (0..n)
        .map(|x| {
            (0..n)
                .filter(|&y| u.entourages.iter().any(|e| outside(&ineq, e, x, y)))
                .fold(0u64, |acc, y| acc | (1 << y))
        })
        .collect();
    Space::new(ineq, PointApartness::from_rows(n, rows)?)
}

/// Subset apartness straight from the uniform definition, quantifying over
/// all pairs in `S × T` for each entourage.
pub fn uniform_subset_apart(u: &UniformBase, ineq: &Inequality, s: Subset, t: Subset) -> bool {
    u.entourages
        .iter()
        .any(|e| s.iter().all(|x| t.iter().all(|y| outside(ineq, e, x, y))))
}

/// The induced sub-space on `carrier`, points re-indexed in increasing order.
pub fn subspace(space: &Space, carrier: Subset) -> Result<Space> {
    carrier.check_carrier(space.n())?;
    if carrier.is_empty() {
        return Err(Error::EmptyCarrier("subspace carrier must be inhabited"));
    }
    let pts: Vec<usize> = carrier.iter().collect();
    let k = pts.len();
    let restrict = |rows: &[u64]| -> Vec<u64> {
        pts.iter()
            .map(|&x| {
                pts.iter()
                    .enumerate()
                    .filter(|(_, &y)| (rows[x] >> y) & 1 == 1)
                    .fold(0u64, |acc, (j, _)| acc | (1 << j))
            })
            .collect()
    };
    Space::from_rows(k, restrict(space.neq_rows()), restrict(space.p_rows()))
}

/// The disjoint union: `X`'s points first, then `Y`'s. Within each block the
/// matrices are inherited; across blocks every pair is unequal and apart,
/// since a singleton of one block has an empty component in the other.
pub fn disjoint_union(x: &Space, y: &Space) -> Result<Space> {
    let (nx, ny) = (x.n(), y.n());
    let n = nx + ny;
    Error::too_large(n, MAX_POINTS)?;
    let glue = |rx: &[u64], ry: &[u64]| -> Vec<u64> {
        let ymask = full_mask(n) & !full_mask(nx);
        rx.iter()
            .map(|&r| r | ymask)
            .chain(ry.iter().map(|&r| (r << nx) | full_mask(nx)))
            .collect()
    };
    Space::from_rows(n, glue(x.neq_rows(), y.neq_rows()), glue(x.p_rows(), y.p_rows()))
}

/// Index of `(i, j)` in a product with `ny` points in the second factor.
#[inline]
pub fn product_index(i: usize, j: usize, ny: usize) -> usize {
    i * ny + j
}

/// The product space, row-major: `(i, j)` is point `i·n_Y + j`. Two pairs are
/// apart (unequal) iff their first or their second components are.
pub fn product(x: &Space, y: &Space) -> Result<Space> {
    let (nx, ny) = (x.n(), y.n());
    let n = nx * ny;
    Error::too_large(n, MAX_POINTS)?;
    let combine = |rx: &[u64], ry: &[u64]| -> Vec<u64> {
        let mut rows = vec![0u64; n];
        for i in 0..nx {
            for j in 0..ny {
                let mut row = 0u64;
                for i2 in 0..nx {
                    for j2 in 0..ny {
                        if (rx[i] >> i2) & 1 == 1 || (ry[j] >> j2) & 1 == 1 {
                            row |= 1 << product_index(i2, j2, ny);
                        }
                    }
                }
                rows[product_index(i, j, ny)] = row;
            }
        }
        rows
    };
    Space::from_rows(n, combine(x.neq_rows(), y.neq_rows()), combine(x.p_rows(), y.p_rows()))
}

/// Depth of a truncated Cantor space `{0,1}ᵏ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CantorSpec {
    pub depth: usize,
}

impl CantorSpec {
    pub fn new(depth: usize) -> Result<Self> {
        if depth == 0 {
            return Err(Error::InvalidArgument("Cantor depth must be at least 1".into()));
        }
        if depth > CANTOR_MAX_DEPTH {
            return Err(Error::CarrierTooLarge {
                n: 1 << depth.min(63),
                max: 1 << CANTOR_MAX_DEPTH,
            });
        }
        Ok(CantorSpec { depth })
    }

    pub fn points(&self) -> usize {
        1 << self.depth
    }
}

/// Position of the first differing bit between two depth-`k` words, with
/// position 0 the most significant; `None` when equal.
pub fn first_difference(depth: usize, a: usize, b: usize) -> Option<usize> {
    let diff = a ^ b;
    (diff != 0).then(|| depth - 1 - (usize::BITS - 1 - diff.leading_zeros()) as usize)
}

/// `{0,1}ᵏ` in lexicographic order (point `i` spells `i` in binary, most
/// significant bit first) with the first-difference ultrametric `2^(−i)`.
pub fn cantor(spec: CantorSpec) -> Result<MetricSpace> {
    let spec = CantorSpec::new(spec.depth)?;
    let k = spec.depth;
    Ok(MetricSpace::from_fn_unchecked(spec.points(), |a, b| match first_difference(k, a, b) {
        None => BigRational::zero(),
        Some(i) => BigRational::new(BigInt::one(), BigInt::one() << i),
    }))
}

/// Greedy ε-net: scanning points in order, each point not yet within `< ε`
/// of a chosen centre becomes a centre.
pub fn epsilon_net(m: &MetricSpace, eps: &BigRational) -> Result<Vec<usize>> {
    if !eps.is_positive() {
        return Err(Error::InvalidArgument(format!("ε must be positive, got {eps}")));
    }
    let mut covered = vec![false; m.n];
    let mut centres = Vec::new();
    for c in 0..m.n {
        if covered[c] {
            continue;
        }
        centres.push(c);
        for (y, cov) in covered.iter_mut().enumerate() {
            if m.dist(c, y) < eps {
                *cov = true;
            }
        }
    }
    Ok(centres)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(p: i64, q: i64) -> BigRational {
        BigRational::new(p.into(), q.into())
    }

    #[test]
    fn two_point_metric() {
        let m = MetricSpace::new(vec![vec![r(0, 1), r(1, 1)], vec![r(1, 1), r(0, 1)]]).unwrap();
        let s = from_metric(&m).unwrap();
        assert!(s.p(0, 1));
        let one = MetricSpace::new(vec![vec![r(0, 1)]]).unwrap();
        assert_eq!(from_metric(&one).unwrap().point_apartness().rows(), &[0]);
    }

    #[test]
    fn metric_invariants() {
        assert!(MetricSpace::new(vec![vec![r(0, 1), r(1, 1)], vec![r(2, 1), r(0, 1)]]).is_err());
        assert!(MetricSpace::new(vec![vec![r(0, 1), r(0, 1)], vec![r(0, 1), r(0, 1)]]).is_err());
        let bad_triangle = vec![
            vec![r(0, 1), r(1, 1), r(3, 1)],
            vec![r(1, 1), r(0, 1), r(1, 1)],
            vec![r(3, 1), r(1, 1), r(0, 1)],
        ];
        assert!(MetricSpace::new(bad_triangle).is_err());
    }

    #[test]
    fn diagonal_base_gives_discrete_apartness() {
        let diag: Vec<u64> = (0..3).map(|x| 1 << x).collect();
        let u = UniformBase::new(3, vec![diag]).unwrap();
        let s = from_uniform(&u, Some(&Inequality::denotational(3).unwrap())).unwrap();
        assert_eq!(s, Space::discrete(3).unwrap());
        assert!(crate::axioms::check_tight(&u.induced_inequality()).holds);
    }

    #[test]
    fn full_base_is_not_hausdorff() {
        let full = vec![0b11, 0b11];
        assert!(matches!(UniformBase::new(2, vec![full]), Err(Error::Invariant(_))));
        assert!(UniformBase::new(1, vec![vec![1]]).is_ok());
    }

    #[test]
    fn base_needs_symmetric_member() {
        // Δ ∪ {(0,1)} alone: nothing in the base fits inside its transpose.
        let asym = vec![0b011, 0b010, 0b100];
        assert!(UniformBase::new(3, vec![asym]).is_err());
    }

    #[test]
    fn cantor_distances() {
        let c1 = cantor(CantorSpec { depth: 1 }).unwrap();
        assert_eq!(c1.n(), 2);
        assert_eq!(c1.dist(0, 1), &r(1, 1));
        let c3 = cantor(CantorSpec { depth: 3 }).unwrap();
        assert_eq!(c3.dist(0b000, 0b001), &r(1, 4));
        assert_eq!(c3.dist(0b000, 0b100), &r(1, 1));
        assert!(CantorSpec::new(CANTOR_MAX_DEPTH + 1).is_err());
        assert!(CantorSpec::new(0).is_err());
    }

    #[test]
    fn epsilon_nets() {
        let c3 = cantor(CantorSpec { depth: 3 }).unwrap();
        assert_eq!(epsilon_net(&c3, &r(1, 2)).unwrap(), vec![0, 2, 4, 6]);
        assert_eq!(epsilon_net(&c3, &r(1, 1)).unwrap(), vec![0, 4]);
        assert_eq!(epsilon_net(&c3, &r(2, 1)).unwrap(), vec![0]);
        assert_eq!(epsilon_net(&c3, &r(1, 8)).unwrap().len(), 8);
        assert!(epsilon_net(&c3, &r(0, 1)).is_err());
    }

    #[test]
    fn subspace_reindexes() {
        let s = Space::discrete(4).unwrap();
        let sub = subspace(&s, Subset::from_points(4, [1, 3]).unwrap()).unwrap();
        assert_eq!(sub, Space::discrete(2).unwrap());
        let single = subspace(&s, Subset::singleton(4, 2).unwrap()).unwrap();
        assert_eq!(single.n(), 1);
        assert_eq!(subspace(&s, s.full()).unwrap(), s);
        assert!(matches!(subspace(&s, s.empty()), Err(Error::EmptyCarrier(_))));
    }

    #[test]
    fn union_blocks() {
        let x = Space::indiscrete(2).unwrap();
        let y = Space::discrete(1).unwrap();
        let u = disjoint_union(&x, &y).unwrap();
        assert_eq!(u.n(), 3);
        assert!(!u.p(0, 1));
        assert!(u.p(0, 2) && u.p(1, 2));
        assert!(u.neq(0, 1) && u.neq(2, 0));
    }

    #[test]
    fn product_is_row_major() {
        let x = Space::discrete(2).unwrap();
        let y = Space::indiscrete(3).unwrap();
        let p = product(&x, &y).unwrap();
        assert_eq!(p.n(), 6);
        // (0,1) vs (0,2): same x, y's indiscrete → not apart.
        assert!(!p.p(product_index(0, 1, 3), product_index(0, 2, 3)));
        // (0,1) vs (1,1): x's apart.
        assert!(p.p(product_index(0, 1, 3), product_index(1, 1, 3)));
        assert!(p.neq(1, 2));
    }
}

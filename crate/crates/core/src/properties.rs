//! Separation properties (EF, NN, WSS), the consequences D11 and D12, and
//! totally Cauchy / convergent nets over finite directed sets.
//!
//! Each of EF, NN and WSS has a reduced decision procedure that picks the
//! extremal witness set, plus an exhaustive `*_brute` counterpart that
//! searches for it. The two are kept side by side and compared in tests.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::report::{PropertyReport, Witness};
use crate::space::{Space, ENUMERATION_LIMIT};
use crate::subset::{full_mask, Subset};
use crate::topology::{Neighborhoods, Topology};

/// Largest carrier for checks that enumerate all `4ⁿ` subset pairs.
pub const PAIR_LIMIT: usize = 10;

/// Largest index set for [`totally_cauchy`].
pub const NET_INDEX_LIMIT: usize = 8;

fn subset(n: usize, bits: u64) -> Subset {
    Subset::from_bits_unchecked(n, bits)
}

/// How the set expression `S−U` in weak symmetric separatedness is read.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum WssReading {
    /// `S ∩ (−U)`: the part of `S` inside the neighbourhood `−U`.
    #[default]
    Neighborhood,
    /// `S ∖ U`: literal set difference.
    Difference,
}

impl FromStr for WssReading {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "neighborhood" | "neighbourhood" => Ok(WssReading::Neighborhood),
            "difference" => Ok(WssReading::Difference),
            other => Err(Error::InvalidArgument(format!("unknown WSS reading {other:?}"))),
        }
    }
}

impl fmt::Display for WssReading {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            WssReading::Neighborhood => "neighborhood",
            WssReading::Difference => "difference",
        })
    }
}

/// Which polarity of the totally-Cauchy condition to evaluate.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TcVariant {
    /// `¬(∃m∈A m≽N ∧ ∃n∈B n≽N)`: the tail past `N` does not meet both sides.
    #[default]
    Corrected,
    /// `¬(∃m∈A m≽N ∧ ¬∃n∈B n≽N)`, evaluated literally.
    AsPrinted,
}

impl FromStr for TcVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('_', "-").as_str() {
            "corrected" => Ok(TcVariant::Corrected),
            "as-printed" => Ok(TcVariant::AsPrinted),
            other => Err(Error::InvalidArgument(format!("unknown totally-Cauchy variant {other:?}"))),
        }
    }
}

impl fmt::Display for TcVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TcVariant::Corrected => "corrected",
            TcVariant::AsPrinted => "as-printed",
        })
    }
}

/// EF: `S ⋈ T ⇒ ∃E (S ⋈ ¬E ∧ E ⋈ T)`.
///
/// `E ⋈ T` means `E ⊆ −T`, and `⋈` is antitone in each argument, so the best
/// choice is `E = −T` and the hardest `S` is `−T` itself. EF therefore holds
/// iff `−T ⋈ X∖−T` for every `T`.
pub fn check_ef(space: &Space) -> Result<PropertyReport> {
    let n = space.n();
    Error::too_large(n, ENUMERATION_LIMIT)?;
    let full = full_mask(n);
    let failure = (0..1u64 << n).find_map(|t| {
        let mt = space.minus_bits(t);
        (!space.apart_bits(mt, full & !mt)).then(|| Witness::new().set("S", subset(n, mt)).set("T", subset(n, t)))
    });
    Ok(PropertyReport::from_search("EF", failure))
}

pub fn check_ef_brute(space: &Space) -> Result<PropertyReport> {
    let n = space.n();
    Error::too_large(n, PAIR_LIMIT)?;
    let size = 1u64 << n;
    let full = full_mask(n);
    for s in 0..size {
        for t in 0..size {
            if !space.apart_bits(s, t) {
                continue;
            }
            let found = (0..size).any(|e| space.apart_bits(s, full & !e) && space.apart_bits(e, t));
            if !found {
                return Ok(PropertyReport::fail(
                    "EF",
                    Witness::new().set("S", subset(n, s)).set("T", subset(n, t)),
                ));
            }
        }
    }
    Ok(PropertyReport::pass("EF"))
}

/// NN: `x ∈ −U ⇒ ∃V (x ∈ −V ∧ ¬V ⋈ U)`.
///
/// `¬V ⋈ U` means `X∖V ⊆ −U`, so the smallest admissible `V` is `X∖−U`, and
/// NN holds iff `{x} ⋈ X∖−U` for all `U` and `x ∈ −U`.
pub fn check_nn(space: &Space) -> Result<PropertyReport> {
    let n = space.n();
    Error::too_large(n, ENUMERATION_LIMIT)?;
    let full = full_mask(n);
    let failure = (0..1u64 << n).find_map(|u| {
        let mu = space.minus_bits(u);
        let rest = full & !mu;
        subset(n, mu)
            .iter()
            .find(|&x| rest & !space.p_rows()[x] != 0)
            .map(|x| Witness::new().set("U", subset(n, u)).point("x", x))
    });
    Ok(PropertyReport::from_search("NN", failure))
}

pub fn check_nn_brute(space: &Space) -> Result<PropertyReport> {
    let n = space.n();
    Error::too_large(n, PAIR_LIMIT)?;
    let size = 1u64 << n;
    let full = full_mask(n);
    let minus: Vec<u64> = (0..size).map(|s| space.minus_bits(s)).collect();
    for u in 0..size {
        for x in subset(n, minus[u as usize]) {
            let found = (0..size).any(|v| (minus[v as usize] >> x) & 1 == 1 && space.apart_bits(full & !v, u));
            if !found {
                return Ok(PropertyReport::fail(
                    "NN",
                    Witness::new().set("U", subset(n, u)).point("x", x),
                ));
            }
        }
    }
    Ok(PropertyReport::pass("NN"))
}

/// WSS: `S ⋈ T ⇒ ∀x ∃U (x ∈ −U ∧ ¬(S▫U ≠ ∅ ∧ T▫U ≠ ∅))`.
///
/// `x ∈ −U` iff `U ⊆ P_x`. Under the neighbourhood reading the best `U` is
/// `P_x` (giving the minimal neighbourhood `−P_x`), and the property fails
/// iff some apart pair of points lies inside a minimal neighbourhood. Under
/// the difference reading the best `U` is again `P_x`, and it fails iff some
/// apart pair of points lies outside `P_x`.
pub fn check_wss(space: &Space, reading: WssReading) -> Result<PropertyReport> {
    let n = space.n();
    let nb = Neighborhoods::new(space);
    let failure = (0..n).find_map(|x| {
        let region = match reading {
            WssReading::Neighborhood => nb.min_bits(x),
            WssReading::Difference => full_mask(n) & !space.p_rows()[x],
        };
        subset(n, region).iter().find_map(|s| {
            let t = region & space.p_rows()[s];
            (t != 0).then(|| {
                Witness::new()
                    .set("S", subset(n, 1 << s))
                    .set("T", subset(n, 1 << t.trailing_zeros()))
                    .point("x", x)
            })
        })
    });
    Ok(PropertyReport::from_search("WSS", failure).with_note(format!("{reading} reading")))
}

pub fn check_wss_brute(space: &Space, reading: WssReading) -> Result<PropertyReport> {
    let n = space.n();
    Error::too_large(n, PAIR_LIMIT)?;
    let size = 1u64 << n;
    let minus: Vec<u64> = (0..size).map(|s| space.minus_bits(s)).collect();
    let part = |s: u64, u: u64| match reading {
        WssReading::Neighborhood => s & minus[u as usize],
        WssReading::Difference => s & !u,
    };
    for s in 1..size {
        for t in 1..size {
            if !space.apart_bits(s, t) {
                continue;
            }
            for x in 0..n {
                let found = (0..size)
                    .any(|u| (minus[u as usize] >> x) & 1 == 1 && !(part(s, u) != 0 && part(t, u) != 0));
                if !found {
                    return Ok(PropertyReport::fail(
                        "WSS",
                        Witness::new().set("S", subset(n, s)).set("T", subset(n, t)).point("x", x),
                    )
                    .with_note(format!("{reading} reading")));
                }
            }
        }
    }
    Ok(PropertyReport::pass("WSS").with_note(format!("{reading} reading")))
}

/// D11: `A ⋈ B ⇔ ¬¬A ⋈ B`. Membership is decidable on a finite carrier, so
/// `¬¬A = A` and the equivalence is an identity; the check confirms the
/// double complement is the identity on every subset.
pub fn check_d11(space: &Space) -> Result<PropertyReport> {
    let n = space.n();
    Error::too_large(n, ENUMERATION_LIMIT)?;
    let failure = crate::subset::all_subsets(n)
        .find(|&a| a.complement().complement() != a)
        .map(|a| Witness::new().set("A", a));
    Ok(PropertyReport::from_search("D11", failure).with_note("¬¬A = A under decidable membership"))
}

/// D12: `A ⋈ B ⇔ cl(A) ⋈ cl(B)` over all subset pairs, with closures taken
/// in the apartness topology.
pub fn check_d12(space: &Space, top: &Topology) -> Result<PropertyReport> {
    let n = space.n();
    if top.space() != space {
        return Err(Error::InvalidArgument("topology was built for a different space".into()));
    }
    Error::too_large(n, PAIR_LIMIT)?;
    let nb = top.neighborhoods();
    let size = 1u64 << n;
    let closures: Vec<u64> = (0..size).map(|a| nb.closure_bits(a)).collect();
    for a in 0..size {
        for b in a..size {
            let direct = space.apart_bits(a, b);
            let closed = space.apart_bits(closures[a as usize], closures[b as usize]);
            if direct != closed {
                return Ok(PropertyReport::fail(
                    "D12",
                    Witness::new().set("A", subset(n, a)).set("B", subset(n, b)),
                ));
            }
        }
    }
    Ok(PropertyReport::pass("D12"))
}

/// A net indexed by a finite directed preorder.
///
/// `preceq(a, b)` reads `b ≽ a`. Reflexivity, transitivity and directedness
/// are checked on construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DirectedNet {
    m: usize,
    /// `up[a]` = indices `b` with `b ≽ a`.
    up: Vec<u64>,
    values: Vec<usize>,
}

impl DirectedNet {
    pub fn new(preceq: &[Vec<bool>], values: Vec<usize>) -> Result<Self> {
        let m = preceq.len();
        let mut up = Vec::with_capacity(m);
        for (a, row) in preceq.iter().enumerate() {
            if row.len() != m {
                return Err(Error::invariant(format!("preorder row {a} has {} entries, expected {m}", row.len())));
            }
            up.push(row.iter().enumerate().fold(0u64, |acc, (b, &v)| acc | ((v as u64) << b)));
        }
        DirectedNet::from_up_sets(up, values)
    }

    /// Builds a net from `up[a] = {b : b ≽ a}` masks.
    pub fn from_up_sets(up: Vec<u64>, values: Vec<usize>) -> Result<Self> {
        let m = up.len();
        if m == 0 {
            return Err(Error::EmptyCarrier("a directed set must be inhabited"));
        }
        Error::too_large(m, crate::subset::MAX_POINTS)?;
        if values.len() != m {
            return Err(Error::SizeMismatch {
                expected: m,
                found: values.len(),
            });
        }
        if up.iter().any(|&r| r & !full_mask(m) != 0) {
            return Err(Error::invariant("preorder mentions indices beyond the index set"));
        }
        if let Some(a) = (0..m).find(|&a| (up[a] >> a) & 1 == 0) {
            return Err(Error::invariant(format!("preorder is not reflexive at {a}")));
        }
        for a in 0..m {
            for b in subset(m, up[a]) {
                if up[b] & !up[a] != 0 {
                    return Err(Error::invariant(format!("preorder is not transitive through {a} ≼ {b}")));
                }
            }
        }
        for a in 0..m {
            for b in a + 1..m {
                if up[a] & up[b] == 0 {
                    return Err(Error::invariant(format!("indices {a} and {b} have no common upper bound")));
                }
            }
        }
        Ok(DirectedNet { m, up, values })
    }

    /// Indices `0 ≼ 1 ≼ … ≼ m−1`.
    pub fn chain(values: Vec<usize>) -> Result<Self> {
        let m = values.len();
        let up = (0..m).map(|a| full_mask(m) & !((1u64 << a) - 1)).collect();
        DirectedNet::from_up_sets(up, values)
    }

    pub fn index_size(&self) -> usize {
        self.m
    }

    pub fn values(&self) -> &[usize] {
        &self.values
    }

    /// The tail `{n : n ≽ a}`.
    pub fn tail(&self, a: usize) -> Subset {
        subset(self.m, self.up[a])
    }

    fn image_bits(&self, idx: u64) -> u64 {
        subset(self.m, idx).iter().fold(0, |acc, i| acc | (1 << self.values[i]))
    }

    fn check_values(&self, space: &Space) -> Result<()> {
        match self.values.iter().find(|&&v| v >= space.n()) {
            Some(&v) => Err(Error::PointOutOfRange { point: v, n: space.n() }),
            None => Ok(()),
        }
    }
}

/// Every directed preorder on `m` labelled indices, as up-set masks.
pub fn directed_preorders(m: usize) -> Vec<Vec<u64>> {
    assert!((1..=5).contains(&m), "directed preorders enumerated for 1 ≤ m ≤ 5 only");
    let off: Vec<(usize, usize)> = (0..m)
        .flat_map(|a| (0..m).filter(move |&b| b != a).map(move |b| (a, b)))
        .collect();
    let mut out = Vec::new();
    for code in 0..1u64 << off.len() {
        let mut up: Vec<u64> = (0..m).map(|a| 1u64 << a).collect();
        for (k, &(a, b)) in off.iter().enumerate() {
            if (code >> k) & 1 == 1 {
                up[a] |= 1 << b;
            }
        }
        let transitive = (0..m).all(|a| subset(m, up[a]).iter().all(|b| up[b] & !up[a] == 0));
        let directed = (0..m).all(|a| (a + 1..m).all(|b| up[a] & up[b] != 0));
        if transitive && directed {
            out.push(up);
        }
    }
    out
}

/// For every pair of index sets `A, B` with `s(A) ⋈ s(B)`, looks for an `N`
/// satisfying the chosen form of the tail condition.
pub fn totally_cauchy(net: &DirectedNet, space: &Space, variant: TcVariant) -> Result<PropertyReport> {
    let m = net.m;
    Error::too_large(m, NET_INDEX_LIMIT)?;
    net.check_values(space)?;
    let size = 1u64 << m;
    let images: Vec<u64> = (0..size).map(|a| net.image_bits(a)).collect();
    for a in 0..size {
        for b in 0..size {
            if !space.apart_bits(images[a as usize], images[b as usize]) {
                continue;
            }
            let found = (0..m).any(|nidx| {
                let tail = net.up[nidx];
                let reaches_a = a & tail != 0;
                let reaches_b = b & tail != 0;
                match variant {
                    TcVariant::Corrected => !(reaches_a && reaches_b),
                    TcVariant::AsPrinted => !(reaches_a && !reaches_b),
                }
            });
            if !found {
                return Ok(PropertyReport::fail(
                    "TC",
                    Witness::new().set("A", subset(m, a)).set("B", subset(m, b)),
                )
                .with_note(format!("{variant} variant")));
            }
        }
    }
    Ok(PropertyReport::pass("TC").with_note(format!("{variant} variant")))
}

/// The net is eventually inside every basic open containing `x`. Since the
/// minimal neighbourhood of `x` is itself basic, it suffices that some tail
/// lies inside it.
pub fn net_converges(net: &DirectedNet, space: &Space, x: usize) -> Result<bool> {
    net.check_values(space)?;
    if x >= space.n() {
        return Err(Error::PointOutOfRange { point: x, n: space.n() });
    }
    let nb = Neighborhoods::new(space);
    let target = nb.min_bits(x);
    Ok((0..net.m).any(|a| net.image_bits(net.up[a]) & !target == 0))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b5_failing() -> Space {
        Space::from_rows(3, vec![0b010, 0b001, 0], vec![0b010, 0b001, 0]).unwrap()
    }

    #[test]
    fn one_point_space_has_every_property() {
        let s = Space::discrete(1).unwrap();
        assert!(check_ef(&s).unwrap().holds);
        assert!(check_nn(&s).unwrap().holds);
        for r in [WssReading::Neighborhood, WssReading::Difference] {
            assert!(check_wss(&s, r).unwrap().holds);
        }
    }

    #[test]
    fn ef_failure_witness() {
        let s = b5_failing();
        let r = check_ef(&s).unwrap();
        assert!(!r.holds);
        let w = r.witness.unwrap();
        assert_eq!(w.get_set("T"), Some(Subset::from_points(3, [0]).unwrap()));
        assert_eq!(w.get_set("S"), Some(Subset::from_points(3, [1]).unwrap()));
        assert!(!check_ef_brute(&s).unwrap().holds);
    }

    #[test]
    fn nn_failure_matches_b5_witness() {
        let s = b5_failing();
        let r = check_nn(&s).unwrap();
        let w = r.witness.unwrap();
        assert_eq!(w.get_set("U"), Some(Subset::from_points(3, [0]).unwrap()));
        assert_eq!(w.get_point("x"), Some(1));
        assert!(!check_nn_brute(&s).unwrap().holds);
    }

    #[test]
    fn indiscrete_space_has_nn() {
        assert!(check_nn(&Space::indiscrete(3).unwrap()).unwrap().holds);
    }

    #[test]
    fn d11_is_trivial() {
        assert!(check_d11(&b5_failing()).unwrap().holds);
    }

    #[test]
    fn d12_on_indiscrete_space() {
        let s = Space::indiscrete(3).unwrap();
        let top = Topology::build(&s).unwrap();
        assert!(check_d12(&s, &top).unwrap().holds);
    }

    #[test]
    fn directedness_is_enforced() {
        // Two incomparable indices.
        let err = DirectedNet::from_up_sets(vec![0b01, 0b10], vec![0, 0]).unwrap_err();
        assert!(matches!(err, Error::Invariant(_)));
        // Not transitive: 0 ≼ 1 ≼ 2 without 0 ≼ 2.
        assert!(DirectedNet::from_up_sets(vec![0b011, 0b110, 0b100], vec![0; 3]).is_err());
        assert!(DirectedNet::chain(vec![0, 1, 2]).is_ok());
    }

    #[test]
    fn preorder_counts() {
        // Counted independently by brute force over all reflexive relations.
        assert_eq!(directed_preorders(1).len(), 1);
        assert_eq!(directed_preorders(2).len(), 3);
        assert_eq!(directed_preorders(3).len(), 16);
        assert_eq!(directed_preorders(4).len(), 145);
    }

    #[test]
    fn constant_net_is_totally_cauchy_and_converges() {
        let s = Space::discrete(3).unwrap();
        let net = DirectedNet::chain(vec![2, 2, 2, 2]).unwrap();
        assert!(totally_cauchy(&net, &s, TcVariant::Corrected).unwrap().holds);
        assert!(net_converges(&net, &s, 2).unwrap());
        assert!(!net_converges(&net, &s, 0).unwrap());
    }

    #[test]
    fn interleaved_top_class_is_not_totally_cauchy() {
        // 0 ≼ 1 ≼ {2, 3} with 2 and 3 equivalent; values alternate a, b.
        let s = Space::discrete(2).unwrap();
        let net = DirectedNet::from_up_sets(vec![0b1111, 0b1110, 0b1100, 0b1100], vec![0, 1, 0, 1]).unwrap();
        let r = totally_cauchy(&net, &s, TcVariant::Corrected).unwrap();
        assert!(!r.holds);
        let w = r.witness.unwrap();
        assert_eq!(w.get_set("A"), Some(Subset::from_points(4, [2]).unwrap()));
        assert_eq!(w.get_set("B"), Some(Subset::from_points(4, [3]).unwrap()));
    }

    #[test]
    fn indiscrete_space_every_net_converges_everywhere() {
        let s = Space::indiscrete(3).unwrap();
        let net = DirectedNet::chain(vec![0, 1, 2, 0]).unwrap();
        for x in 0..3 {
            assert!(net_converges(&net, &s, x).unwrap());
        }
    }

    #[test]
    fn reading_parsers() {
        assert_eq!("NEIGHBORHOOD".parse::<WssReading>().unwrap(), WssReading::Neighborhood);
        assert_eq!("as_printed".parse::<TcVariant>().unwrap(), TcVariant::AsPrinted);
        assert!("other".parse::<TcVariant>().is_err());
    }
}

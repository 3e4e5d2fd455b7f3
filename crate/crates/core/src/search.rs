//! Exhaustive model finder over point-matrix models.
//!
//! A model on `n` points is fixed by the state of each unordered pair:
//! `(neq=0, p=0)`, `(neq=1, p=0)` or `(neq=1, p=1)`, since `p ⊆ neq` and
//! both relations are symmetric and irreflexive. Candidates are numbered in
//! base 3 with the pair `(0,1)` as the most significant digit, and pairs
//! ordered `(0,1), (0,2), …, (1,2), …`. Enumeration follows that numbering.

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::axioms::{check_axioms_with, check_tight, AxiomReport, CheckOptions};
use crate::error::{Error, Result};
use crate::properties::{
    check_d12, check_ef, check_ef_brute, check_nn, check_nn_brute, check_wss, check_wss_brute, WssReading,
};
use crate::report::{PropertyReport, Witness};
use crate::space::{Space, SpaceSummary};
use crate::topology::Topology;

/// Largest `n` searched exhaustively.
pub const EXHAUSTIVE_LIMIT: usize = 6;
/// Largest `n` accepted when the query sets a result limit.
pub const SEARCH_LIMIT: usize = 7;
/// Largest `n` for [`canonical_form`].
pub const CANONICAL_LIMIT: usize = 6;

const BLOCK: u64 = 4096;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Property {
    B1,
    B2,
    B3,
    B4,
    B5,
    Sym,
    Tight,
    Ef,
    Nn,
    Wss,
    D12,
}

impl Property {
    pub const ALL: [Property; 11] = [
        Property::B1,
        Property::B2,
        Property::B3,
        Property::B4,
        Property::B5,
        Property::Sym,
        Property::Tight,
        Property::Ef,
        Property::Nn,
        Property::Wss,
        Property::D12,
    ];

    pub const AXIOMS: [Property; 5] = [Property::B1, Property::B2, Property::B3, Property::B4, Property::B5];

    pub fn name(self) -> &'static str {
        match self {
            Property::B1 => "B1",
            Property::B2 => "B2",
            Property::B3 => "B3",
            Property::B4 => "B4",
            Property::B5 => "B5",
            Property::Sym => "SYM",
            Property::Tight => "TIGHT",
            Property::Ef => "EF",
            Property::Nn => "NN",
            Property::Wss => "WSS",
            Property::D12 => "D12",
        }
    }

    /// Parses a comma-separated list such as `B1,B2,EF`.
    pub fn parse_list(s: &str) -> Result<Vec<Property>> {
        s.split(',')
            .map(str::trim)
            .filter(|t| !t.is_empty())
            .map(str::parse)
            .collect()
    }
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Property {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Property::ALL
            .into_iter()
            .find(|p| p.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::InvalidArgument(format!("unknown property {s:?}")))
    }
}

impl Serialize for Property {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct EvalOptions {
    /// Use the exhaustive subset searches instead of the reduced procedures.
    pub brute_force: bool,
    pub wss_reading: WssReading,
}

/// Decides properties of one model, sharing the axiom report and topology.
pub struct Evaluator<'a> {
    space: &'a Space,
    options: EvalOptions,
    axioms: Option<AxiomReport>,
    topology: Option<Topology>,
}

impl<'a> Evaluator<'a> {
    pub fn new(space: &'a Space) -> Self {
        Self::with_options(space, EvalOptions::default())
    }

    pub fn with_options(space: &'a Space, options: EvalOptions) -> Self {
        Evaluator {
            space,
            options,
            axioms: None,
            topology: None,
        }
    }

    fn axioms(&mut self) -> Result<&AxiomReport> {
        if self.axioms.is_none() {
            let opts = CheckOptions {
                brute_force: self.options.brute_force,
            };
            self.axioms = Some(check_axioms_with(self.space, opts)?);
        }
        Ok(self.axioms.as_ref().expect("just set"))
    }

    pub fn evaluate(&mut self, prop: Property) -> Result<PropertyReport> {
        Ok(match prop {
            Property::B1 => self.axioms()?.b1.clone(),
            Property::B2 => self.axioms()?.b2.clone(),
            Property::B3 => self.axioms()?.b3.clone(),
            Property::B4 => self.axioms()?.b4.clone(),
            Property::B5 => self.axioms()?.b5.clone(),
            Property::Sym => self.axioms()?.symmetry.clone(),
            Property::Tight => check_tight(self.space.inequality()),
            Property::Ef if self.options.brute_force => check_ef_brute(self.space)?,
            Property::Ef => check_ef(self.space)?,
            Property::Nn if self.options.brute_force => check_nn_brute(self.space)?,
            Property::Nn => check_nn(self.space)?,
            Property::Wss if self.options.brute_force => check_wss_brute(self.space, self.options.wss_reading)?,
            Property::Wss => check_wss(self.space, self.options.wss_reading)?,
            Property::D12 => {
                if self.topology.is_none() {
                    self.topology = Some(Topology::build(self.space)?);
                }
                check_d12(self.space, self.topology.as_ref().expect("just set"))?
            }
        })
    }

    pub fn evaluate_all(&mut self) -> Result<BTreeMap<Property, PropertyReport>> {
        Property::ALL.into_iter().map(|p| Ok((p, self.evaluate(p)?))).collect()
    }
}

/// Number of unordered pairs on `n` points.
pub fn pair_count(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// Number of candidate models on `n` points, `3^(n(n−1)/2)`.
pub fn candidate_count(n: usize) -> u64 {
    3u64.pow(pair_count(n) as u32)
}

fn pairs(n: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..n).flat_map(move |i| (i + 1..n).map(move |j| (i, j)))
}

/// The model with the given candidate number.
pub fn model_from_code(n: usize, code: u64) -> Result<Space> {
    if code >= candidate_count(n) {
        return Err(Error::InvalidArgument(format!("code {code} out of range for n = {n}")));
    }
    let mut neq = vec![0u64; n];
    let mut p = vec![0u64; n];
    let mut rest = code;
    let digits: Vec<(usize, usize)> = pairs(n).collect();
    for &(i, j) in digits.iter().rev() {
        let state = rest % 3;
        rest /= 3;
        if state >= 1 {
            neq[i] |= 1 << j;
            neq[j] |= 1 << i;
        }
        if state == 2 {
            p[i] |= 1 << j;
            p[j] |= 1 << i;
        }
    }
    Space::from_rows(n, neq, p)
}

fn pair_state(space: &Space, i: usize, j: usize) -> u64 {
    match (space.neq(i, j), space.p(i, j)) {
        (false, _) => 0,
        (true, false) => 1,
        (true, true) => 2,
    }
}

/// Candidate number of a model.
pub fn code_of(space: &Space) -> u64 {
    pairs(space.n()).fold(0, |acc, (i, j)| acc * 3 + pair_state(space, i, j))
}

/// Isomorphism-invariant encoding: the least candidate number over all
/// relabellings of the carrier.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct CanonicalForm {
    pub n: usize,
    pub code: u64,
}

impl fmt::Display for CanonicalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n{}:{}", self.n, self.code)
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn go(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for x in 0..used.len() {
            if !used[x] {
                used[x] = true;
                prefix.push(x);
                go(prefix, used, out);
                prefix.pop();
                used[x] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::with_capacity(n), &mut vec![false; n], &mut out);
    out
}

pub fn canonical_form(space: &Space) -> Result<CanonicalForm> {
    let n = space.n();
    Error::too_large(n, CANONICAL_LIMIT)?;
    Ok(canonical_with(space, &permutations(n)))
}

fn canonical_with(space: &Space, perms: &[Vec<usize>]) -> CanonicalForm {
    let n = space.n();
    let states: Vec<Vec<u64>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { 0 } else { pair_state(space, i, j) }).collect())
        .collect();
    let code = perms
        .iter()
        .map(|sigma| pairs(n).fold(0u64, |acc, (i, j)| acc * 3 + states[sigma[i]][sigma[j]]))
        .min()
        .unwrap_or(0);
    CanonicalForm { n, code }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ModelQuery {
    pub n: usize,
    pub require: Vec<Property>,
    pub forbid: Vec<Property>,
    pub limit: Option<usize>,
    pub canonicalize: bool,
    /// Evaluate candidate blocks on the rayon pool. Output is identical
    /// either way.
    pub parallel: bool,
}

impl ModelQuery {
    pub fn new(n: usize) -> Self {
        ModelQuery {
            n,
            require: Vec::new(),
            forbid: Vec::new(),
            limit: None,
            canonicalize: false,
            parallel: true,
        }
    }

    pub fn require(mut self, props: &[Property]) -> Self {
        self.require.extend_from_slice(props);
        self
    }

    pub fn forbid(mut self, props: &[Property]) -> Self {
        self.forbid.extend_from_slice(props);
        self
    }

    pub fn limit(mut self, limit: usize) -> Self {
        self.limit = Some(limit);
        self
    }

    pub fn canonicalize(mut self, on: bool) -> Self {
        self.canonicalize = on;
        self
    }

    pub fn parallel(mut self, on: bool) -> Self {
        self.parallel = on;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::EmptyCarrier("models must be inhabited"));
        }
        if let Some(p) = self.require.iter().find(|p| self.forbid.contains(p)) {
            return Err(Error::InvalidArgument(format!("{p} is both required and forbidden")));
        }
        let cap = if self.limit.is_some() { SEARCH_LIMIT } else { EXHAUSTIVE_LIMIT };
        Error::too_large(self.n, cap)?;
        if self.canonicalize {
            Error::too_large(self.n, CANONICAL_LIMIT)?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ModelReport {
    /// Candidate number of this labelled model.
    pub code: u64,
    pub model: SpaceSummary,
    pub verdicts: BTreeMap<Property, bool>,
    /// Failure witnesses for every forbidden property.
    pub witnesses: BTreeMap<Property, Witness>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub canonical: Option<CanonicalForm>,
    #[serde(skip)]
    pub space: Space,
}

fn evaluate_candidate(q: &ModelQuery, code: u64) -> Result<Option<ModelReport>> {
    let space = model_from_code(q.n, code)?;
    let mut ev = Evaluator::new(&space);
    for &p in &q.require {
        if !ev.evaluate(p)?.holds {
            return Ok(None);
        }
    }
    let mut witnesses = BTreeMap::new();
    for &p in &q.forbid {
        let r = ev.evaluate(p)?;
        match r.witness {
            Some(w) if !r.holds => {
                witnesses.insert(p, w);
            }
            _ => return Ok(None),
        }
    }
    let verdicts = ev
        .evaluate_all()?
        .into_iter()
        .map(|(p, r)| (p, r.holds))
        .collect();
    Ok(Some(ModelReport {
        code,
        model: SpaceSummary::from(&space),
        verdicts,
        witnesses,
        canonical: None,
        space,
    }))
}

/// Models matching a query, in candidate order. Blocks of candidates are
/// evaluated together (in parallel when requested) and emitted in order, so
/// the stream is the same regardless of worker count.
pub struct ModelStream {
    query: ModelQuery,
    next_code: u64,
    total: u64,
    buffer: std::collections::VecDeque<ModelReport>,
    seen: HashSet<CanonicalForm>,
    perms: Vec<Vec<usize>>,
    emitted: usize,
    error: Option<Error>,
}

impl ModelStream {
    fn fill(&mut self) -> Result<()> {
        while self.buffer.is_empty() && self.next_code < self.total {
            let start = self.next_code;
            let end = (start + BLOCK).min(self.total);
            self.next_code = end;
            let q = &self.query;
            let found: Vec<ModelReport> = if q.parallel {
                (start..end)
                    .into_par_iter()
                    .map(|c| evaluate_candidate(q, c))
                    .collect::<Result<Vec<_>>>()?
                    .into_iter()
                    .flatten()
                    .collect()
            } else {
                (start..end)
                    .map(|c| evaluate_candidate(q, c))
                    .collect::<Result<Vec<_>>>()?
                    .into_iter()
                    .flatten()
                    .collect()
            };
            for mut report in found {
                if self.query.canonicalize {
                    let cf = canonical_with(&report.space, &self.perms);
                    if !self.seen.insert(cf) {
                        continue;
                    }
                    report.canonical = Some(cf);
                }
                self.buffer.push_back(report);
            }
        }
        Ok(())
    }

    /// The error that ended the stream early, if any.
    pub fn error(&self) -> Option<&Error> {
        self.error.as_ref()
    }
}

impl Iterator for ModelStream {
    type Item = ModelReport;

    fn next(&mut self) -> Option<ModelReport> {
        if self.query.limit.is_some_and(|l| self.emitted >= l) || self.error.is_some() {
            return None;
        }
        if let Err(e) = self.fill() {
            self.error = Some(e);
            return None;
        }
        let r = self.buffer.pop_front()?;
        self.emitted += 1;
        Some(r)
    }
}

pub fn enumerate_models(q: ModelQuery) -> Result<ModelStream> {
    q.validate()?;
    let perms = if q.canonicalize { permutations(q.n) } else { Vec::new() };
    Ok(ModelStream {
        total: candidate_count(q.n),
        query: q,
        next_code: 0,
        buffer: Default::default(),
        seen: HashSet::new(),
        perms,
        emitted: 0,
        error: None,
    })
}

/// Outcome of running a query at increasing carrier sizes.
#[derive(Clone, Debug, Serialize)]
pub struct Escalation {
    /// `(n, number of models found)` for each size tried.
    pub tried: Vec<(usize, usize)>,
    pub found_at: Option<usize>,
    pub models: Vec<ModelReport>,
}

/// Runs `q` at `q.n`, then larger sizes up to `max_n`, stopping at the first
/// size with a match.
pub fn find_with_escalation(q: ModelQuery, max_n: usize) -> Result<Escalation> {
    let mut tried = Vec::new();
    for n in q.n..=max_n {
        let query = ModelQuery { n, ..q.clone() };
        let mut stream = enumerate_models(query)?;
        let models: Vec<ModelReport> = stream.by_ref().collect();
        if let Some(e) = stream.error() {
            return Err(e.clone());
        }
        tried.push((n, models.len()));
        if !models.is_empty() {
            return Ok(Escalation {
                tried,
                found_at: Some(n),
                models,
            });
        }
    }
    Ok(Escalation {
        tried,
        found_at: None,
        models: Vec::new(),
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct Implication {
    pub from: Property,
    pub to: Property,
    pub holds: bool,
    /// Isomorphism classes satisfying `from` but not `to`.
    pub counterexamples: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct Independence {
    pub axiom: Property,
    /// A class where every other axiom holds and this one fails.
    pub separating_model: Option<CanonicalForm>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CatalogLevel {
    pub n: usize,
    pub labelled_models: u64,
    pub classes: usize,
    /// Isomorphism classes satisfying each property.
    pub property_counts: BTreeMap<Property, usize>,
    pub implications: Vec<Implication>,
    pub independence: Vec<Independence>,
    /// Classes on which the two readings of WSS disagree.
    pub wss_divergent: Vec<CanonicalForm>,
    /// One entry per class: canonical form and its verdicts.
    pub models: Vec<CatalogEntry>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CatalogEntry {
    pub canonical: CanonicalForm,
    pub verdicts: BTreeMap<Property, bool>,
    pub wss_difference: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct CatalogDocument {
    pub version: u32,
    pub nmax: usize,
    pub levels: Vec<CatalogLevel>,
    /// Equivalences `P ⇔ Q` that held at every level, among properties that
    /// fail somewhere.
    pub equivalences: Vec<(Property, Property)>,
    pub observations: Vec<String>,
}

fn catalog_level(n: usize) -> Result<CatalogLevel> {
    let perms = permutations(n);
    let classes: Vec<(CanonicalForm, u64)> = (0..candidate_count(n))
        .into_par_iter()
        .map(|code| -> Result<(CanonicalForm, u64)> {
            Ok((canonical_with(&model_from_code(n, code)?, &perms), code))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut reps: BTreeMap<CanonicalForm, u64> = BTreeMap::new();
    for (cf, code) in classes {
        reps.entry(cf).or_insert(code);
    }

    let entries: Vec<CatalogEntry> = reps
        .keys()
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|cf| -> Result<CatalogEntry> {
            let space = model_from_code(n, cf.code)?;
            let mut ev = Evaluator::new(&space);
            let verdicts = ev.evaluate_all()?.into_iter().map(|(p, r)| (p, r.holds)).collect();
            let wss_difference = check_wss(&space, WssReading::Difference)?.holds;
            Ok(CatalogEntry {
                canonical: *cf,
                verdicts,
                wss_difference,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let property_counts = Property::ALL
        .into_iter()
        .map(|p| (p, entries.iter().filter(|e| e.verdicts[&p]).count()))
        .collect();

    let mut implications = Vec::new();
    for from in Property::ALL {
        for to in Property::ALL {
            if from == to {
                continue;
            }
            let counterexamples = entries
                .iter()
                .filter(|e| e.verdicts[&from] && !e.verdicts[&to])
                .count();
            implications.push(Implication {
                from,
                to,
                holds: counterexamples == 0,
                counterexamples,
            });
        }
    }

    let independence = Property::AXIOMS
        .into_iter()
        .map(|axiom| Independence {
            axiom,
            separating_model: entries
                .iter()
                .find(|e| {
                    !e.verdicts[&axiom]
                        && Property::AXIOMS
                            .iter()
                            .filter(|&&a| a != axiom)
                            .all(|a| e.verdicts[a])
                })
                .map(|e| e.canonical),
        })
        .collect();

    let wss_divergent = entries
        .iter()
        .filter(|e| e.verdicts[&Property::Wss] != e.wss_difference)
        .map(|e| e.canonical)
        .collect();

    Ok(CatalogLevel {
        n,
        labelled_models: candidate_count(n),
        classes: entries.len(),
        property_counts,
        implications,
        independence,
        wss_divergent,
        models: entries,
    })
}

/// Classifies every model up to isomorphism for each `n ≤ nmax`.
pub fn catalog(nmax: usize) -> Result<CatalogDocument> {
    Error::too_large(nmax, CANONICAL_LIMIT.min(5))?;
    let levels = (1..=nmax).map(catalog_level).collect::<Result<Vec<_>>>()?;

    let mut equivalences = Vec::new();
    let mut observations = Vec::new();
    let universal: Vec<Property> = Property::ALL
        .into_iter()
        .filter(|p| levels.iter().all(|lvl| lvl.property_counts[p] == lvl.classes))
        .collect();
    if !universal.is_empty() {
        let names: Vec<&str> = universal.iter().map(|p| p.name()).collect();
        observations.push(format!("{} hold on every model n <= {nmax}", names.join(", ")));
    }
    let varying: Vec<Property> = Property::ALL.into_iter().filter(|p| !universal.contains(p)).collect();
    for (i, &a) in varying.iter().enumerate() {
        for &b in &varying[i + 1..] {
            let both_ways = levels.iter().all(|lvl| {
                lvl.implications
                    .iter()
                    .filter(|imp| (imp.from == a && imp.to == b) || (imp.from == b && imp.to == a))
                    .all(|imp| imp.holds)
            });
            if both_ways {
                equivalences.push((a, b));
                observations.push(format!("{a} <=> {b} observed at all n <= {nmax}"));
            }
        }
    }
    for lvl in &levels {
        for ind in &lvl.independence {
            if let Some(cf) = ind.separating_model {
                observations.push(format!(
                    "{} independent of the other axioms at n = {} (model {cf})",
                    ind.axiom, lvl.n
                ));
            }
        }
        if !lvl.wss_divergent.is_empty() {
            observations.push(format!(
                "WSS readings diverge on {} of {} classes at n = {}",
                lvl.wss_divergent.len(),
                lvl.classes,
                lvl.n
            ));
        }
    }

    Ok(CatalogDocument {
        version: 1,
        nmax,
        levels,
        equivalences,
        observations,
    })
}

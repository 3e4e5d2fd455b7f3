//! Finite-model workbench for constructive pre-apartness and apartness
//! spaces.
//!
//! A [`Space`] on `n ≤ 64` points is given by an inequality `≠` and a point
//! apartness `p ⊆ ≠`; subset apartness `S ⋈ T` holds when every point of `S`
//! is apart from every point of `T`. On top of that the crate decides the
//! axioms B1–B5 and the separation properties EF, NN and WSS, builds the
//! apartness topology, constructs induced spaces (metric, uniform, Cantor,
//! subspace, disjoint union, product), checks maps for strong continuity and
//! searches small models exhaustively.
//!
//! ```
//! use apartness_lab::{check_axioms, Space};
//!
//! let s = Space::discrete(3).unwrap();
//! assert!(check_axioms(&s).unwrap().is_apartness());
//! ```

pub mod axioms;
pub mod constructors;
pub mod document;
pub mod error;
pub mod morphisms;
pub mod properties;
pub mod report;
pub mod search;
pub mod space;
pub mod subset;
pub mod topology;

pub use axioms::{check_axioms, check_axioms_raw, check_axioms_with, check_symmetry, check_tight, AxiomReport, CheckOptions};
pub use constructors::{
    cantor, disjoint_union, epsilon_net, first_difference, from_metric, from_uniform, product, product_index, subspace,
    CantorSpec, MetricSpace, UniformBase,
};
pub use document::SpaceDocument;
pub use error::{Error, Result};
pub use morphisms::harness::{union_harness, HarnessInput, HarnessReport};
pub use morphisms::{
    glue_map, is_open_map, is_strongly_continuous, is_uniformly_continuous, pair_map, projection, GlueMap, PointMap,
};
pub use properties::{
    check_d11, check_d12, check_ef, check_nn, check_wss, net_converges, totally_cauchy, DirectedNet, TcVariant,
    WssReading,
};
pub use report::{PropertyReport, Witness};
pub use search::{
    canonical_form, catalog, enumerate_models, find_with_escalation, EvalOptions, Evaluator, ModelQuery, ModelReport,
    Property,
};
pub use space::{Inequality, PointApartness, RawRelation, Space};
pub use subset::Subset;
pub use topology::{Neighborhoods, Topology};

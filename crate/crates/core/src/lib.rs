//! Placement delivery arrays (PDAs) and hierarchical PDAs built from
//! combinatorial t-designs, with axiom checkers, lower bounds, a coded
//! caching simulator and table emitters.

pub mod bounds;
pub mod combinatorics;
pub mod design;
pub mod hpda;
pub mod pda;
pub mod rational;
pub mod schemes;
pub mod sim;
pub mod tables;

pub use bounds::{cheng_bound, classify, wei_bound, BoundReport, Classification};
pub use design::{
    catalog, catalog_design, lambda_s, load_design, verify_design, Design, DesignReport,
};
pub use hpda::{hpda_from_scheme1, hpda_from_scheme2, hpda_loads, verify_hpda, Hpda, HpdaLoads};
pub use pda::{regularity, transpose, verify_pda, Entry, Pda, PdaParams, PdaViolation};
pub use rational::Rational;
pub use schemes::{
    construct, predicted_params, scheme1_construct, scheme1_params, scheme2_construct,
    scheme2_params, ConstructOptions, Construction, PredictedParams, Scheme, SchemeSpec,
};
pub use sim::{run_flat, run_hierarchical, Demand, FileLibrary, SimError, SimOptions, SimReport};
pub use tables::{
    emit_table2, emit_table3, known_scheme_params, mn_params, KnownScheme, SchemeId, SchemeRow,
};

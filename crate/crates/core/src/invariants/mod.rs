//! Poincaré series, Betti numbers, Tor, and the verdicts and theorem reports
//! built from them.

mod classify;
mod resolution;
mod series;
mod theorems;
mod tor;
mod verdict;

pub use classify::{
    classify_map, golod_check, koszul_check, koszul_routes, poincare_series, poincare_series_from_closure,
    residue_degree_bound, residue_window, ClassifyMode, GolodCheck, KoszulCheck,
};
pub use resolution::{betti_numbers, tor_dims, BigradedTable, Resolution};
pub use series::{
    deviations_from_bigraded, deviations_from_series, poincare_from_deviations, BigradedSeries, TruncatedSeries,
};
pub use theorems::{
    pair_inputs, tor_independence_record, verify_all, verify_koszul_transfer, verify_never_golod,
    verify_poincare_identity, verify_pullback_theorem,
};
pub use tor::{tor_independence, tor_independence_routes, TorIndependence};
pub use verdict::{
    CheckRecord, ComparisonRow, ComparisonTable, Outcome, PairInputs, TheoremReport, Verdict, VerdictStatus, Witness,
};

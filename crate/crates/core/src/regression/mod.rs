//! Analogy-based regression on `R₊ⁿ`.
//!
//! A query `x` is labelled from every triple `(a, b, c)` of the sample with
//! `a : b ::^p c : x` componentwise, solving `f(a) : f(b) ::^q f(c) : y` for
//! each and aggregating the solutions with the `q`-mean. Functions of the
//! form `(Σ a_j x_j^{p_j} + b)^(1/q)` are reproduced exactly.

mod dataset;
mod model;
mod nnls;
mod roots;
mod selection;

pub use dataset::LabeledDataset;
pub use model::{ap_eval, ap_fit, ApFit, ApModel};
pub use roots::{
    analogical_value, predict_dataset, predict_one, root_set, Prediction, PredictionBatch, RootSet, Triple,
};
pub use selection::{
    build_selection_map, check_regular, closed_form_value, selected_value, RootBasis, SelectionMap,
};

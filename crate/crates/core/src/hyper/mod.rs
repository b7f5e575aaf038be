//! Terminating hypergeometric series and closed-form solutions.

mod closed_form;
mod pfq;
mod surd;

pub use closed_form::{
    closed_form, closed_form_eval, closed_form_exact, closed_form_polynomial, closed_form_value,
    Argument, FormulaBranch, HypergeometricForm, LinearPower, SeriesKind, CLOSED_FORM_ACCURACY,
};
pub use pfq::{pochhammer, terminating_pfq, termination_order};
pub use surd::Surd;

//! Metric completions of bounded derived categories of hereditary rings.

/// Runs `$body` with `$f` bound to the concrete arithmetic of a field
/// descriptor; symbolic fields have no arithmetic.
macro_rules! with_field {
    ($fd:expr, $f:ident => $body:expr) => {
        match $fd {
            $crate::field::FieldDescriptor::Rational => {
                let $f = &$crate::field::Rationals;
                $body
            }
            $crate::field::FieldDescriptor::FiniteField(q) => {
                let $f = &$crate::field::FiniteField::new(*q)?;
                $body
            }
            $crate::field::FieldDescriptor::SymbolicUncountable => Err($crate::error::Error::UnsupportedField(
                "no element arithmetic over a symbolic field".to_string(),
            )),
        }
    };
}

pub mod arith;
pub mod catalog;
pub mod cauchy;
pub mod chain;
pub mod classify;
pub mod derived;
pub mod error;
pub mod field;
pub mod indec;
pub mod labels;
pub mod linalg;
pub mod metric;
pub mod oracle;
pub mod rep;
pub mod thick;
pub mod zgroup;

pub use error::{Error, Result};

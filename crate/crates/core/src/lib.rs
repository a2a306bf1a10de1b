//! Quasi-complementary sequence sets built from characters of `GF(p^n)`,
//! with an exact correlation verifier.
//!
//! - [`gf`]: table-driven field arithmetic and the canonical element order.
//! - [`chars`]: additive, multiplicative and mixed characters as
//!   root-of-unity exponents; exact cyclotomic sums.
//! - [`algebra`]: Gauss sums, character sums and root counts, with
//!   exhaustive self-checks.
//! - [`constructions`]: the five matrix families and on-demand entries.
//! - [`verifier`]: correlation, closed-form predictions, the lower bound and
//!   verification reports.
//! - [`report`]: JSON, CSV, text and SVG renderings used by the `qcss` binary.
//!
//! ```
//! use std::sync::Arc;
//! use qcss::constructions::{Family, QcssDescriptor};
//! use qcss::gf::make_field;
//! use qcss::verifier::{verify, VerifyOptions};
//!
//! let fs = Arc::new(make_field(2, 4).unwrap());
//! let d = QcssDescriptor::new(Family::QuadChar2, fs, None).unwrap();
//! let r = verify(&d, &VerifyOptions::default()).unwrap();
//! assert_eq!((r.theta_observed, r.support()), (16.0, vec![0, 16]));
//! ```

pub mod algebra;
pub mod chars;
pub mod constructions;
pub mod error;
pub mod gf;
pub mod report;
pub mod verifier;

//! Exact-arithmetic toolkit for Mordell-Weil lattices of elliptic curves
//! over function fields.
//!
//! The crate revolves around one family of objects: Berger-style pencils
//! `f(x) - t g(y) = 0` over a product of rational curves, the Kummer towers
//! `K_d = k(t^{1/d}) = k(u)` above them, and the elliptic curve
//!
//! ```text
//!     y^2 + x y + t y = x^3 + t x^2
//! ```
//!
//! which carries completely explicit points of unbounded rank over
//! `F_q(t^{1/d})` for `d = p^n + 1`.  Everything is computed exactly:
//! finite fields, arbitrary-precision rationals, rational functions, the
//! curve group law, and the height lattice all run without a single
//! floating-point operation (decimals appear only when reports are
//! rendered).
//!
//! Module map:
//!
//! * [`fields`] — prime fields, small extensions, `Q`, and rational-function
//!   fields behind a single [`fields::FieldCtx`] abstraction.
//! * [`ratfunc`] — dense univariate polynomials and reduced rational
//!   functions with the degree height.
//! * [`ellcurve`] — long-Weierstrass curves, the group law, invariants.
//! * [`berger`] — blow-up counts, genus formulas, Kummer-cover invariants,
//!   and the Mordell-Weil rank formula.
//! * [`explicit_points`] — the explicit point families on the curve above
//!   and their verification.
//! * [`heights`] — closed-form Gram matrices, exact rank/kernel, `A_n*`
//!   identification, and a doubling-limit height oracle.
//! * [`casebook`] — end-to-end reproductions of the two worked examples.
//! * [`cli`] — the `mwforge` command-line front end.
//!
//! The `examples/` directory contains one runnable walk-through per major
//! capability; start with `cargo run --example explicit_points`.

pub mod berger;
pub mod casebook;
pub mod cli;
pub mod ellcurve;
mod error;
pub mod explicit_points;
pub mod fields;
pub mod heights;
pub mod ratfunc;
pub mod report;

pub use error::Error;

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;

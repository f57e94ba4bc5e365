//! Weighted (h,q)-Genocchi numbers and polynomials, the weighted
//! (h,q)-zeta function and finite-level fermionic p-adic q-integrals, with
//! an engine that checks their identities over parameter grids.
//!
//! * [`qcore`]: rationals, truncated q-series, precise complex numbers and
//!   q-brackets behind one [`qcore::QAlgebra`] interface.
//! * [`genocchi`]: `G̃_n(x)`, classical Genocchi values and `S̃`-sums.
//! * [`zeta`]: `ζ̃(s, x)` and the Hurwitz-Euler zeta function.
//! * [`padic`]: valuations, the q-Haar distribution and level sums.
//! * [`verify`]: identity residuals, grids and suite reports.
//! * [`cli`]: the `qzeta` command line.
//!
//! ```
//! use qzeta::genocchi::genocchi_poly;
//! use qzeta::qcore::rational::int;
//! use qzeta::qcore::QContext;
//!
//! let g = genocchi_poly(2, &int(0), &QContext::exact(1, 1, 4)).unwrap();
//! assert_eq!(g.value.to_string(), "-2q + 2q^3 + O(q^5)");
//! ```

pub mod cli;
pub mod error;
pub mod genocchi;
pub mod padic;
pub mod qcore;
pub mod verify;
pub mod zeta;

pub use error::{Error, Result};

// The guide's snippets run as doctests of this crate.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/qnumbers.md")]
    mod qnumbers {}
    #[doc = include_str!("../../../book/src/genocchi.md")]
    mod genocchi {}
    #[doc = include_str!("../../../book/src/zeta.md")]
    mod zeta {}
    #[doc = include_str!("../../../book/src/padic.md")]
    mod padic {}
    #[doc = include_str!("../../../book/src/verification.md")]
    mod verification {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}

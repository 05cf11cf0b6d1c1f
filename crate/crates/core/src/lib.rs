//! Exact arithmetic for modular Laguerre polynomials `L_{p-1}^{(α)}(X)`, the
//! `b_{r,s}(α)` polynomials, the generalized truncated logarithm `G^{(α)}(X)`,
//! and mechanical checkers for the identities relating them, over F_p for any
//! odd prime p.

pub mod bpoly;
pub mod error;
pub mod fields;
pub mod glog;
pub mod jacobi;
pub mod polys;
pub mod quotient;
pub mod special;
pub mod verify;

pub use bpoly::{
    b1, b_root_lucas, b_roots_predicted, b_rs, b_rs_alt, b_rs_coeff, product_all_b, BPolyKey,
};
pub use error::{Error, Result};
pub use fields::{
    binom_lucas, binomial, binomials, pochhammer, Falling, Fp2, Fp2Elem, FpElem, Prime,
};
pub use glog::{glog, glog_coeff_normal, reciprocal_rhs, GLog};
pub use jacobi::{
    jacobi_pm1, jacobi_reflection_check, jacobi_shift_residual, p_times_jacobi_p, JacobiSpec,
};
pub use polys::{FpPoly, RatFn, Split, Var};
pub use quotient::{compose_mod, mulmod, powmod, reduce_mod, XPoly};
pub use special::{
    finite_polylog, laguerre_const, laguerre_pm1, laguerre_scaled, trunc_binomial, truncated_exp,
};
pub use verify::{
    expected_cases, verify_all, verify_c_coefficients, verify_c_coefficients_with, verify_theorem,
    verify_with, Fixtures, PairBudget, Status, TheoremId, VerifyReport, Witness,
};

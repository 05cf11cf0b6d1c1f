//! Constructors for `L_{p-1}^{(α)}(X)` and its scaled variants, the truncated
//! exponential, finite polylogarithms, truncated binomial series, and the
//! constant `L_{p-1}^{(α^p)}(α^p - α)`.

use crate::error::{check_range, Error, Result};
use crate::fields::{binomials, factorial, pochhammer, FpElem, Prime};
use crate::polys::{FpPoly, RatFn, Var};
use crate::quotient::XPoly;

/// `α^p - α`, the modulus constant of the left-inverse congruence.
pub fn alpha_p_minus_alpha(p: Prime) -> FpPoly {
    let a = FpPoly::var(p, Var::Alpha);
    &a.pow(p.get()) - &a
}

/// `1 - α^{p-1}`, which vanishes exactly on F_p*.
pub fn one_minus_alpha_pm1(p: Prime) -> FpPoly {
    let mut c = vec![0u64; p.get() as usize];
    c[0] = 1;
    c[p.get() as usize - 1] = p.get() - 1;
    FpPoly::from_coeffs(p, c, Var::Alpha)
}

/// `L_{p-1}^{(α)}(X)`: the coefficient of `X^k` is `-(α - 1)_{p-1-k}`.
pub fn laguerre_pm1(p: Prime) -> XPoly {
    let am1 = FpPoly::linear(FpElem::one(p), -FpElem::one(p), Var::Alpha);
    let n = p.get() as usize;
    let coeffs = (0..n).map(|k| -pochhammer(&am1, n - 1 - k)).collect();
    XPoly::from_polys(p, coeffs).expect("degree p - 1")
}

/// `L_{p-1}^{(rα)}(rX)` for `1 <= r <= p - 1`.
pub fn laguerre_scaled(p: Prime, r: u64) -> Result<XPoly> {
    check_range("r", r, 1, p.get() - 1)?;
    Ok(substitute_scaled(&laguerre_pm1(p), FpElem::new(r, p)))
}

/// Applies `α ↦ rα, X ↦ rX` to any polynomial in X with coefficients in F_p(α).
pub fn substitute_scaled(f: &XPoly, r: FpElem) -> XPoly {
    f.map_coeffs(|c| c.scale_var(r)).scale_x(r)
}

/// `E(X) = Σ_{k<p} X^k / k!`.
pub fn truncated_exp(p: Prime) -> FpPoly {
    let coeffs = (0..p.get())
        .map(|k| factorial(k, p).inv().expect("k < p").value())
        .collect();
    FpPoly::from_coeffs(p, coeffs, Var::X)
}

/// `£_d(X) = Σ_{k=1}^{p-1} X^k / k^d`.
pub fn finite_polylog(p: Prime, d: u32) -> FpPoly {
    let mut coeffs = vec![0u64];
    coeffs.extend(p.units().map(|k| k.inv().unwrap().pow(d as u64).value()));
    FpPoly::from_coeffs(p, coeffs, Var::X)
}

/// `(1 + bX)_*^f = Σ_{k<p} C(f, k) b^k X^k`.
pub fn trunc_binomial(f: &RatFn, b: &RatFn) -> XPoly {
    let p = f.prime();
    let n = p.get() as usize;
    let binoms = binomials(f, n - 1).expect("index below p");
    let mut bk = RatFn::one(p, Var::Alpha);
    let coeffs = binoms
        .into_iter()
        .map(|c| {
            let term = &c * &bk;
            bk = &bk * b;
            term
        })
        .collect();
    XPoly::from_coeffs(p, coeffs).expect("degree below p")
}

/// `l^{(α^p)}(α^p - α)` for a polynomial `l^{(α)}(X)` with coefficients in
/// F_p(α): substitutes `α^p` for α in every coefficient and `α^p - α` for X.
pub fn eval_at_frobenius_shift(l: &XPoly) -> Result<RatFn> {
    let p = l.prime();
    let ap = FpPoly::var(p, Var::Alpha).pow(p.get());
    let shift = RatFn::from_poly(alpha_p_minus_alpha(p));
    let mut acc = RatFn::zero(p, Var::Alpha);
    for c in l.coeffs().iter().rev() {
        acc = &(&acc * &shift) + &c.substitute(&ap)?;
    }
    Ok(acc)
}

/// `L_{p-1}^{(α^p)}(α^p - α)` by substituting `α^p` for the parameter and
/// `α^p - α` for X in `L_{p-1}`.
pub fn laguerre_const_by_substitution(p: Prime) -> FpPoly {
    let v = eval_at_frobenius_shift(&laguerre_pm1(p)).expect("polynomial coefficients");
    v.as_poly().expect("polynomial coefficients").clone()
}

/// `Π_{k=1}^{p-1} (1 + α/k)^k`.
pub fn laguerre_const_product(p: Prime) -> FpPoly {
    p.units().fold(FpPoly::one(p, Var::Alpha), |acc, k| {
        let factor = FpPoly::linear(k.inv().unwrap(), FpElem::one(p), Var::Alpha);
        &acc * &factor.pow(k.value())
    })
}

/// `L_{p-1}^{(α^p)}(α^p - α)`, computed by substitution and checked against
/// the product `Π_{k=1}^{p-1} (1 + α/k)^k` before it is returned.
pub fn laguerre_const(p: Prime) -> Result<FpPoly> {
    let sub = laguerre_const_by_substitution(p);
    let prod = laguerre_const_product(p);
    if sub != prod {
        return Err(Error::TheoremViolation(format!(
            "L^(a^p)(a^p - a) = {sub} differs from its product form {prod} at p = {p}"
        )));
    }
    Ok(sub)
}

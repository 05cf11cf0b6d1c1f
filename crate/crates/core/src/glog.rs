//! The generalized truncated logarithm
//! `G^{(α)}(X) = -Σ_{k=1}^{p-1} X^k / (k Π_{s<k} b_{1,s}(α))`, the compositional
//! left inverse of `L_{p-1}^{(α)}(X)` modulo `X^p - (α^p - α)`.

use std::fmt;

use serde::Serialize;

use crate::bpoly::{b1, b1_prefix_product};
use crate::error::{check_range, Error, Result};
use crate::fields::{FpElem, Prime};
use crate::polys::{FpPoly, RatFn, Var};
use crate::quotient::{compose_mod, XPoly};
use crate::special::{alpha_p_minus_alpha, laguerre_pm1, one_minus_alpha_pm1};

/// `G^{(α)}(X)`; `coeffs[k - 1]` is the coefficient of `X^k` for `1 <= k <= p - 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GLog {
    p: Prime,
    coeffs: Vec<RatFn>,
}

impl GLog {
    /// Wraps arbitrary coefficients of `X^1 .. X^{p-1}` without checking them.
    /// Used to build perturbed copies.
    pub fn from_coeffs_unchecked(p: Prime, coeffs: Vec<RatFn>) -> Self {
        assert_eq!(
            coeffs.len(),
            p.get() as usize - 1,
            "one coefficient per X^1 .. X^(p-1)"
        );
        GLog { p, coeffs }
    }

    pub fn prime(&self) -> Prime {
        self.p
    }

    /// Coefficient of `X^k`, `1 <= k <= p - 1`.
    pub fn coeff(&self, k: usize) -> &RatFn {
        &self.coeffs[k - 1]
    }

    pub fn coeffs(&self) -> &[RatFn] {
        &self.coeffs
    }

    pub fn to_xpoly(&self) -> XPoly {
        let mut c = vec![RatFn::zero(self.p, Var::Alpha)];
        c.extend(self.coeffs.iter().cloned());
        XPoly::from_coeffs(self.p, c).expect("degree below p")
    }

    /// `G^{(hα)}`: substitutes `α ↦ hα` in every coefficient.
    pub fn substitute_alpha(&self, h: FpElem) -> GLog {
        GLog {
            p: self.p,
            coeffs: self.coeffs.iter().map(|c| c.scale_var(h)).collect(),
        }
    }

    /// Substitutes `α = a` in every coefficient; fails at the first k whose
    /// reduced denominator vanishes at a.
    pub fn specialize(&self, a: FpElem) -> Result<FpPoly> {
        let mut out = vec![0u64];
        for (i, c) in self.coeffs.iter().enumerate() {
            let v = c.eval(a).map_err(|_| Error::CoefficientPole {
                k: i + 1,
                point: a.value(),
            })?;
            out.push(v.value());
        }
        Ok(FpPoly::from_coeffs(self.p, out, Var::X))
    }

    /// Per-coefficient numerator and denominator strings.
    pub fn coefficient_strings(&self) -> Vec<CoeffString> {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| CoeffString {
                k: i + 1,
                num: c.num().to_string(),
                den: c.den().to_string(),
            })
            .collect()
    }
}

/// Numerator and denominator of the coefficient of `X^k`, as rendered text.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CoeffString {
    pub k: usize,
    pub num: String,
    pub den: String,
}

fn term_count(f: &FpPoly) -> usize {
    f.raw().iter().filter(|&&c| c != 0).count()
}

fn wrap(f: &FpPoly) -> String {
    if term_count(f) > 1 {
        format!("({f})")
    } else {
        f.to_string()
    }
}

/// Renders a polynomial in X with F_p(α) coefficients. Constant numerators
/// are shown as signed residues in `(-p/2, p/2)`; everything else uses
/// residues in `[0, p)`. Example at p = 3: `-X - X^2/(a + 2)`.
pub fn render_x_terms(coeffs: &[RatFn]) -> String {
    let mut out = String::new();
    for (k, c) in coeffs.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let power = match k {
            0 => String::new(),
            1 => "X".to_string(),
            _ => format!("X^{k}"),
        };
        let (negative, mut body) = if c.num().is_constant() {
            let v = c.num().constant_term().balanced();
            let mag = v.unsigned_abs();
            let body = match (mag, power.is_empty()) {
                (_, true) => mag.to_string(),
                (1, false) => power.clone(),
                _ => format!("{mag}*{power}"),
            };
            (v < 0, body)
        } else if power.is_empty() {
            (false, wrap(c.num()))
        } else {
            (false, format!("{}*{power}", wrap(c.num())))
        };
        if !c.den().is_one() {
            body = format!("{body}/{}", wrap(c.den()));
        }
        match (out.is_empty(), negative) {
            (true, true) => out.push('-'),
            (true, false) => {}
            (false, true) => out.push_str(" - "),
            (false, false) => out.push_str(" + "),
        }
        out.push_str(&body);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

impl fmt::Display for GLog {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut c = vec![RatFn::zero(self.p, Var::Alpha)];
        c.extend(self.coeffs.iter().cloned());
        f.write_str(&render_x_terms(&c))
    }
}

/// Builds `G^{(α)}` from its coefficient formula without the inverse check.
pub fn glog_unchecked(p: Prime) -> GLog {
    let coeffs = (1..p.get())
        .map(|k| {
            let den = b1_prefix_product(p, k).expect("k in range");
            let minus_inv_k = -FpElem::new(k, p).inv().unwrap();
            RatFn::new(FpPoly::constant(minus_inv_k, Var::Alpha), den).expect("nonzero denominator")
        })
        .collect();
    GLog { p, coeffs }
}

/// `G^{(α)}(X)`, checked to satisfy `G(L_{p-1}^{(α)}(X)) ≡ X (mod X^p - (α^p - α))`.
pub fn glog(p: Prime) -> Result<GLog> {
    let g = glog_unchecked(p);
    let c = RatFn::from_poly(alpha_p_minus_alpha(p));
    let composed = compose_mod(&g.to_xpoly(), &laguerre_pm1(p), &c)?.without_modulus();
    if composed != XPoly::x(p) {
        return Err(Error::TheoremViolation(format!(
            "G(L(X)) = {composed} instead of X mod X^{p} - (a^{p} - a)"
        )));
    }
    Ok(g)
}

/// `(N_k, k - 1)` with the coefficient of `X^k` equal to `N_k / (1 - α^{p-1})^{k-1}`
/// and `N_k = -(1/k) Π_{s<k} b_{1,s}(-α)`.
pub fn glog_coeff_normal(p: Prime, k: u64) -> Result<(FpPoly, u64)> {
    check_range("k", k, 1, p.get() - 1)?;
    let minus_one = -FpElem::one(p);
    let prod = (1..k).try_fold(FpPoly::one(p, Var::Alpha), |acc, s| {
        Ok::<_, Error>(&acc * &b1(p, s)?.scale_var(minus_one))
    })?;
    let n = prod.scale(-FpElem::new(k, p).inv().unwrap());
    let normal = RatFn::new(n.clone(), one_minus_alpha_pm1(p).pow(k - 1))?;
    let direct = RatFn::new(
        FpPoly::constant(-FpElem::new(k, p).inv().unwrap(), Var::Alpha),
        b1_prefix_product(p, k)?,
    )?;
    if normal != direct {
        return Err(Error::TheoremViolation(format!(
            "coefficient {k} of G: {direct} differs from {normal} at p = {p}"
        )));
    }
    Ok((n, k - 1))
}

/// `-X^p G^{(-α)}((1 - α^{p-1})/X)` for a given G: the coefficient of `X^{p-k}`
/// is `-g_k(-α) (1 - α^{p-1})^k`.
pub fn reciprocal_rhs_from(g: &GLog) -> XPoly {
    let p = g.p;
    let n = p.get() as usize;
    let u = RatFn::from_poly(one_minus_alpha_pm1(p));
    let gm = g.substitute_alpha(-FpElem::one(p));
    let mut coeffs = vec![RatFn::zero(p, Var::Alpha); n];
    let mut uk = u.clone();
    for k in 1..n {
        coeffs[n - k] = -(gm.coeff(k) * &uk);
        uk = &uk * &u;
    }
    XPoly::from_coeffs(p, coeffs).expect("degree below p")
}

/// `-X^p G^{(-α)}((1 - α^{p-1})/X)`.
pub fn reciprocal_rhs(p: Prime) -> XPoly {
    reciprocal_rhs_from(&glog_unchecked(p))
}

/// Where the reduced coefficient of `X^k` in `G^{(α)}` has poles in F_p*.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PoleRow {
    pub p: u64,
    pub k: usize,
    /// Points of F_p* where the reduced denominator vanishes, ascending, `;`-separated.
    pub poles: String,
    pub den_degree: usize,
}

/// One row per coefficient of `G^{(α)}`, listing the poles in F_p*.
pub fn pole_table(g: &GLog) -> Vec<PoleRow> {
    let p = g.p;
    g.coeffs
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let poles = p
                .units()
                .filter(|&a| c.den().eval(a).is_zero())
                .map(|a| a.value().to_string())
                .collect::<Vec<_>>()
                .join(";");
            PoleRow {
                p: p.get(),
                k: i + 1,
                poles,
                den_degree: c.den().degree().unwrap_or(0),
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::{finite_polylog, laguerre_const};

    fn pr(q: u64) -> Prime {
        Prime::new(q).unwrap()
    }

    fn odd_primes(max: u64) -> impl Iterator<Item = Prime> {
        (3..=max).filter_map(|q| Prime::new(q).ok())
    }

    #[test]
    fn p3_rendering() {
        let g = glog(pr(3)).unwrap();
        assert_eq!(g.to_string(), "-X - X^2/(a + 2)");
        let strings = g.coefficient_strings();
        assert_eq!(
            strings[1],
            CoeffString {
                k: 2,
                num: "2".into(),
                den: "a + 2".into()
            }
        );
    }

    #[test]
    fn p5_second_coefficient() {
        let p = pr(5);
        let g = glog(p).unwrap();
        let b11 = FpPoly::from_i64(p, &[1, 1, 3], Var::Alpha);
        let expect = RatFn::new(FpPoly::from_i64(p, &[-3], Var::Alpha), b11).unwrap();
        assert_eq!(g.coeff(2), &expect);
        assert!(g.to_string().contains(" - X^2/(a^2 + 2*a + 2)"), "{g}");
    }

    #[test]
    fn left_inverse_for_small_primes() {
        for p in odd_primes(11) {
            let g = glog(p).unwrap();
            assert_eq!(g.coeff(1), &RatFn::constant(-FpElem::one(p), Var::Alpha));
            assert_eq!(
                g.specialize(FpElem::zero(p)).unwrap(),
                -&finite_polylog(p, 1)
            );
        }
    }

    #[test]
    fn specialization_examples() {
        let p = pr(5);
        let g = glog(p).unwrap();
        assert_eq!(
            g.specialize(FpElem::zero(p)).unwrap(),
            FpPoly::from_i64(p, &[0, -1, -3, -2, -4], Var::X)
        );
        let g3 = glog(pr(3)).unwrap();
        assert_eq!(
            g3.specialize(FpElem::new(1, pr(3))),
            Err(Error::CoefficientPole { k: 2, point: 1 })
        );
        assert_eq!(
            g3.specialize(FpElem::new(2, pr(3))).unwrap(),
            FpPoly::from_i64(pr(3), &[0, -1, -1], Var::X)
        );
    }

    #[test]
    fn perturbed_coefficient_breaks_inverse() {
        for p in odd_primes(7) {
            let g = glog(p).unwrap();
            let c = RatFn::from_poly(alpha_p_minus_alpha(p));
            for k in 1..p.get() as usize {
                let mut coeffs = g.coeffs().to_vec();
                coeffs[k - 1] = &coeffs[k - 1] + &RatFn::one(p, Var::Alpha);
                let bad = GLog::from_coeffs_unchecked(p, coeffs);
                let composed = compose_mod(&bad.to_xpoly(), &laguerre_pm1(p), &c).unwrap();
                assert_ne!(composed.without_modulus(), XPoly::x(p), "p = {p}, k = {k}");
            }
        }
    }

    #[test]
    fn normal_form() {
        let p = pr(3);
        let (n, e) = glog_coeff_normal(p, 1).unwrap();
        assert_eq!((n, e), (FpPoly::constant(-FpElem::one(p), Var::Alpha), 0));
        let (n, e) = glog_coeff_normal(p, 2).unwrap();
        assert_eq!(e, 1);
        assert_eq!(
            n,
            FpPoly::from_i64(p, &[1, 1], Var::Alpha).scale(-FpElem::new(2, p).inv().unwrap())
        );
        for p in odd_primes(17) {
            let g = glog_unchecked(p);
            for k in 1..p.get() {
                let (_, e) = glog_coeff_normal(p, k).unwrap();
                let (_, rem) = one_minus_alpha_pm1(p)
                    .pow(e)
                    .divrem(g.coeff(k as usize).den())
                    .unwrap();
                assert!(rem.is_zero(), "p = {p}, k = {k}");
            }
        }
    }

    #[test]
    fn reciprocal_identity() {
        let p = pr(3);
        let rhs = reciprocal_rhs(p);
        assert!(rhs.coeff(0).is_zero());
        for p in odd_primes(13) {
            let g = glog_unchecked(p);
            let lconst = RatFn::from_poly(laguerre_const(p).unwrap());
            assert_eq!(g.to_xpoly().scale(&lconst), reciprocal_rhs(p), "p = {p}");
        }
    }

    #[test]
    fn reciprocal_at_zero_is_polylog_reflection() {
        for p in odd_primes(13) {
            let rhs = reciprocal_rhs(p).specialize(FpElem::zero(p)).unwrap();
            assert_eq!(rhs, -&finite_polylog(p, 1), "p = {p}");
        }
    }

    #[test]
    fn pole_rows() {
        let rows = pole_table(&glog_unchecked(pr(3)));
        assert_eq!(
            rows[0],
            PoleRow {
                p: 3,
                k: 1,
                poles: String::new(),
                den_degree: 0
            }
        );
        assert_eq!(
            rows[1],
            PoleRow {
                p: 3,
                k: 2,
                poles: "1".into(),
                den_degree: 1
            }
        );
    }
}

//! The polynomials `b_{r,s}(α) = Σ_k (-r/s)^k C(rα-1, p-1-k) C(sα-1, k)`, their
//! root sets, and the product over `s` of `b_{1,s}`.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

use serde::Serialize;

use crate::error::{check_range, Error, Result};
use crate::fields::{binom_lucas, binomial, binomials, FpElem, Prime};
use crate::polys::{FpPoly, RatFn, Var};
use crate::special::{laguerre_const, one_minus_alpha_pm1, trunc_binomial};

/// Index pair `(r, s)` of a b-polynomial at a prime p, with `1 <= r, s <= p - 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BPolyKey {
    p: Prime,
    r: u64,
    s: u64,
}

impl BPolyKey {
    pub fn new(p: Prime, r: u64, s: u64) -> Result<Self> {
        check_range("r", r, 1, p.get() - 1)?;
        check_range("s", s, 1, p.get() - 1)?;
        Ok(BPolyKey { p, r, s })
    }

    pub fn prime(&self) -> Prime {
        self.p
    }

    pub fn r(&self) -> u64 {
        self.r
    }

    pub fn s(&self) -> u64 {
        self.s
    }

    /// `r + s ≡ 0 (mod p)`, where `b_{r,s}` is the zero polynomial.
    pub fn is_degenerate(&self) -> bool {
        self.r + self.s == self.p.get()
    }

    fn elems(&self) -> (FpElem, FpElem) {
        (FpElem::new(self.r, self.p), FpElem::new(self.s, self.p))
    }
}

/// `Σ_k c^k C(rα-1, p-1-k) C(sα + shift, k)`.
fn defining_sum(key: BPolyKey, s_shift: i64) -> FpPoly {
    let p = key.p;
    let n = p.get() as usize;
    let (r, s) = key.elems();
    let ratio = -(r / s);
    let left = binomials(&FpPoly::linear(r, -FpElem::one(p), Var::Alpha), n - 1).expect("below p");
    let right = binomials(
        &FpPoly::linear(s, FpElem::from_i64(s_shift, p), Var::Alpha),
        n - 1,
    )
    .expect("below p");
    let mut acc = FpPoly::zero(p, Var::Alpha);
    let mut c = FpElem::one(p);
    for k in 0..n {
        acc = &acc + &(&left[n - 1 - k] * &right[k]).scale(c);
        c = c * ratio;
    }
    acc
}

/// `b_{r,s}(α)` from its defining sum; the zero polynomial when `r + s = p`.
pub fn b_rs(key: BPolyKey) -> FpPoly {
    defining_sum(key, -1)
}

/// `Σ_k (-r/s)^k C(rα-1, p-1-k) C(sα, k)`, equal to `b_{r,s}` away from the
/// diagonal `r + s = p`, where it is rejected.
pub fn b_rs_alt(key: BPolyKey) -> Result<FpPoly> {
    if key.is_degenerate() {
        return Err(Error::Hypothesis("the alternate sum requires r + s != p"));
    }
    Ok(defining_sum(key, 0))
}

/// The coefficient of `X^{p-1}` in `(1 + X/r)_*^{rα-1} (1 - X/s)_*^{sα-1}`.
pub fn b_rs_coeff(key: BPolyKey) -> FpPoly {
    let p = key.p;
    let n = p.get() as usize;
    let (r, s) = key.elems();
    let one = FpElem::one(p);
    let exp_r = RatFn::from_poly(FpPoly::linear(r, -one, Var::Alpha));
    let exp_s = RatFn::from_poly(FpPoly::linear(s, -one, Var::Alpha));
    let left = trunc_binomial(&exp_r, &RatFn::constant(r.inv().unwrap(), Var::Alpha));
    let right = trunc_binomial(&exp_s, &RatFn::constant(-s.inv().unwrap(), Var::Alpha));
    let top = (0..n).fold(RatFn::zero(p, Var::Alpha), |acc, k| {
        &acc + &(left.coeff(n - 1 - k) * right.coeff(k))
    });
    top.as_poly().expect("polynomial coefficients").clone()
}

type Cache = RwLock<HashMap<(u64, u64), Arc<FpPoly>>>;

fn cache() -> &'static Cache {
    static CACHE: OnceLock<Cache> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// Memoized `b_{1,s}(α)` for `1 <= s <= p - 1`.
pub fn b1(p: Prime, s: u64) -> Result<Arc<FpPoly>> {
    let key = BPolyKey::new(p, 1, s)?;
    if let Some(hit) = cache().read().expect("cache poisoned").get(&(p.get(), s)) {
        return Ok(hit.clone());
    }
    let value = Arc::new(b_rs(key));
    let mut map = cache().write().expect("cache poisoned");
    Ok(map.entry((p.get(), s)).or_insert(value).clone())
}

/// `Π_{s<k} b_{1,s}(α)` for `1 <= k <= p - 1`.
pub fn b1_prefix_product(p: Prime, k: u64) -> Result<FpPoly> {
    check_range("k", k, 1, p.get() - 1)?;
    (1..k).try_fold(FpPoly::one(p, Var::Alpha), |acc, s| {
        Ok(&acc * b1(p, s)?.as_ref())
    })
}

/// `{a in [1, p-1] : a + (sa mod p) < p}` for `1 <= s <= p - 2`.
pub fn b_roots_predicted(p: Prime, s: u64) -> Result<Vec<FpElem>> {
    check_range("s", s, 1, p.get() - 2)?;
    let q = p.get();
    Ok((1..q)
        .filter(|a| a + (s * a) % q < q)
        .map(|a| FpElem::new(a, p))
        .collect())
}

/// Whether p does not divide `C(a + sa, a)`.
pub fn b_root_lucas(p: Prime, s: u64, a: u64) -> Result<bool> {
    check_range("s", s, 1, p.get() - 2)?;
    check_range("a", a, 1, p.get() - 1)?;
    Ok(!binom_lucas(a + s * a, a, p).is_zero())
}

/// `Π_a (1 - α/a)` over the given roots.
pub fn product_over_roots(p: Prime, roots: &[FpElem]) -> FpPoly {
    roots.iter().fold(FpPoly::one(p, Var::Alpha), |acc, &a| {
        &acc * &FpPoly::linear(-a.inv().expect("nonzero root"), FpElem::one(p), Var::Alpha)
    })
}

/// `(-1)^{(p-1)/2} C(rα-1, (p-1)/2)`.
pub fn b_rr_binomial(p: Prime, r: u64) -> Result<FpPoly> {
    check_range("r", r, 1, p.get() - 1)?;
    let half = (p.get() as usize - 1) / 2;
    let f = FpPoly::linear(FpElem::new(r, p), -FpElem::one(p), Var::Alpha);
    let c = binomial(&f, half)?;
    Ok(if half.is_multiple_of(2) { c } else { -c })
}

/// `Π_{a <= (p-1)/2} (1 - α/a)`.
pub fn b11_product(p: Prime) -> FpPoly {
    let roots: Vec<_> = (1..=(p.get() - 1) / 2).map(|a| FpElem::new(a, p)).collect();
    product_over_roots(p, &roots)
}

/// `Π_{0<a<p/3} (1 - α/a) · Π_{p/2<a<2p/3} (1 - α/a)`.
pub fn b12_product(p: Prime) -> FpPoly {
    let q = p.get();
    let roots: Vec<_> = (1..q)
        .filter(|&a| 3 * a < q || (2 * a > q && 3 * a < 2 * q))
        .map(|a| FpElem::new(a, p))
        .collect();
    product_over_roots(p, &roots)
}

/// `C((α-1)/2, (p-1)/2)`. Its constant term is `4^{-(p-1)/2} = 1`, so no sign
/// factor is needed; a factor `(-1)^{(p+1)/2}` would be wrong for `p ≡ 1 (mod 4)`.
pub fn b_half_binomial(p: Prime) -> FpPoly {
    let half = (p.get() as usize - 1) / 2;
    let inv2 = FpElem::new(2, p).inv().unwrap();
    let f = FpPoly::linear(inv2, -inv2, Var::Alpha);
    binomial(&f, half).expect("below p")
}

/// `Π_{k=2}^{p-1} (1 + α/k)^{k-1}`.
pub fn product_all_b_closed(p: Prime) -> FpPoly {
    p.units()
        .skip(1)
        .fold(FpPoly::one(p, Var::Alpha), |acc, k| {
            let factor = FpPoly::linear(k.inv().unwrap(), FpElem::one(p), Var::Alpha);
            &acc * &factor.pow(k.value() - 1)
        })
}

/// `Π_{s=1}^{p-2} b_{1,s}(α)`, checked against `Π_{k=2}^{p-1} (1 + α/k)^{k-1}`
/// and `L_{p-1}^{(α^p)}(α^p - α) / (1 - α^{p-1})` before it is returned.
pub fn product_all_b(p: Prime) -> Result<FpPoly> {
    let direct = b1_prefix_product(p, p.get() - 1)?;
    let closed = product_all_b_closed(p);
    let (quot, rem) = laguerre_const(p)?.divrem(&one_minus_alpha_pm1(p))?;
    if direct != closed || !rem.is_zero() || quot != direct {
        return Err(Error::TheoremViolation(format!(
            "product of b_(1,s) = {direct}, closed form {closed}, quotient {quot} rem {rem} at p = {p}"
        )));
    }
    Ok(direct)
}

/// One row of the root table of `b_{1,s}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BRootsRow {
    pub p: u64,
    pub s: u64,
    /// Roots in ascending order, separated by `;`.
    pub roots: String,
    pub degree: usize,
}

/// Root-table row for `b_{1,s}`, from an actual factorization.
pub fn b_roots_row(p: Prime, s: u64) -> Result<BRootsRow> {
    check_range("s", s, 1, p.get() - 2)?;
    let b = b1(p, s)?;
    let split = b.roots_and_split()?;
    let roots = split
        .roots
        .iter()
        .map(|a| a.value().to_string())
        .collect::<Vec<_>>()
        .join(";");
    Ok(BRootsRow {
        p: p.get(),
        s,
        roots,
        degree: b.degree().unwrap_or(0),
    })
}

//! Polynomials of degree < p in X over F_p(α), reduced modulo a binomial `X^p - c`.
//!
//! Coefficients are stored as canonical [`RatFn`] values. Products and
//! compositions are computed over a single common denominator so that the
//! inner loops are plain polynomial arithmetic; every result is brought back
//! to canonical per-coefficient form before it is returned.

use std::fmt;
use std::ops::{Add, Neg, Sub};

use crate::error::{Error, Result};
use crate::fields::{FpElem, Prime};
use crate::polys::{FpPoly, RatFn, Var};

/// `Σ_{k<p} coeffs[k] X^k`, optionally tagged with the constant `c` of the
/// modulus `X^p - c`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct XPoly {
    p: Prime,
    coeffs: Vec<RatFn>,
    modulus: Option<RatFn>,
}

impl XPoly {
    /// Builds from coefficients of `X^0, X^1, ...`; fails when a nonzero
    /// coefficient sits at degree `p` or above.
    pub fn from_coeffs(p: Prime, coeffs: Vec<RatFn>) -> Result<Self> {
        let n = p.get() as usize;
        if coeffs.iter().skip(n).any(|c| !c.is_zero()) {
            return Err(Error::OutOfRange {
                name: "X-degree",
                value: coeffs.len() as u64 - 1,
                lo: 0,
                hi: n as u64 - 1,
            });
        }
        let mut coeffs = coeffs;
        coeffs.truncate(n);
        coeffs.resize(n, RatFn::zero(p, Var::Alpha));
        Ok(XPoly {
            p,
            coeffs,
            modulus: None,
        })
    }

    /// Builds from polynomial coefficients in α.
    pub fn from_polys(p: Prime, coeffs: Vec<FpPoly>) -> Result<Self> {
        Self::from_coeffs(p, coeffs.into_iter().map(RatFn::from_poly).collect())
    }

    pub fn zero(p: Prime) -> Self {
        Self::from_coeffs(p, Vec::new()).unwrap()
    }

    pub fn constant(c: RatFn) -> Self {
        let p = c.prime();
        Self::from_coeffs(p, vec![c]).unwrap()
    }

    pub fn one(p: Prime) -> Self {
        Self::constant(RatFn::one(p, Var::Alpha))
    }

    /// `c X^k` for `k < p`.
    pub fn monomial(c: RatFn, k: usize) -> Result<Self> {
        let p = c.prime();
        let mut coeffs = vec![RatFn::zero(p, Var::Alpha); k + 1];
        coeffs[k] = c;
        Self::from_coeffs(p, coeffs)
    }

    /// The indeterminate X.
    pub fn x(p: Prime) -> Self {
        Self::monomial(RatFn::one(p, Var::Alpha), 1).unwrap()
    }

    pub fn with_modulus(mut self, c: RatFn) -> Self {
        self.modulus = Some(c);
        self
    }

    pub fn without_modulus(mut self) -> Self {
        self.modulus = None;
        self
    }

    pub fn modulus(&self) -> Option<&RatFn> {
        self.modulus.as_ref()
    }

    pub fn prime(&self) -> Prime {
        self.p
    }

    /// Exactly `p` coefficients, `X^0` first.
    pub fn coeffs(&self) -> &[RatFn] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> &RatFn {
        &self.coeffs[k]
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.iter().rposition(|c| !c.is_zero())
    }

    pub fn is_zero(&self) -> bool {
        self.degree().is_none()
    }

    /// Whether every coefficient is a polynomial in α.
    pub fn has_polynomial_coeffs(&self) -> bool {
        self.coeffs.iter().all(RatFn::is_polynomial)
    }

    /// Applies `f` to every coefficient, keeping the modulus tag.
    pub fn map_coeffs(&self, f: impl Fn(&RatFn) -> RatFn) -> Self {
        XPoly {
            p: self.p,
            coeffs: self.coeffs.iter().map(f).collect(),
            modulus: self.modulus.clone(),
        }
    }

    pub fn scale(&self, c: &RatFn) -> Self {
        self.map_coeffs(|a| a * c)
    }

    /// `self(c X)`.
    pub fn scale_x(&self, c: FpElem) -> Self {
        let mut pw = FpElem::one(self.p);
        let coeffs = self
            .coeffs
            .iter()
            .map(|a| {
                let v = a.scale(pw);
                pw = pw * c;
                v
            })
            .collect();
        XPoly {
            p: self.p,
            coeffs,
            modulus: self.modulus.clone(),
        }
    }

    /// Formal d/dX; the X^{p-1} term differentiates to a multiple of p, so the result stays below degree p.
    pub fn derivative_x(&self) -> Self {
        let n = self.coeffs.len();
        let mut coeffs: Vec<RatFn> = (1..n)
            .map(|k| self.coeffs[k].scale(FpElem::new(k as u64, self.p)))
            .collect();
        coeffs.push(RatFn::zero(self.p, Var::Alpha));
        XPoly {
            p: self.p,
            coeffs,
            modulus: self.modulus.clone(),
        }
    }

    /// Substitutes `α = a` in every coefficient.
    pub fn specialize(&self, a: FpElem) -> Result<FpPoly> {
        let vals = self
            .coeffs
            .iter()
            .map(|c| c.eval(a))
            .collect::<Result<Vec<_>>>()?;
        Ok(FpPoly::from_elems(self.p, &vals, Var::X))
    }

    fn same_tag(&self, rhs: &Self) -> Result<()> {
        if self.modulus != rhs.modulus {
            Err(Error::QuotientMismatch)
        } else {
            Ok(())
        }
    }

    pub fn checked_add(&self, rhs: &Self) -> Result<Self> {
        self.same_tag(rhs)?;
        Ok(XPoly {
            p: self.p,
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
            modulus: self.modulus.clone(),
        })
    }

    pub fn checked_sub(&self, rhs: &Self) -> Result<Self> {
        self.checked_add(&-rhs)
    }

    /// Product of two polynomials of degree < p, without reduction
    /// (coefficients of `X^0 .. X^{2p-2}`).
    pub fn full_product(&self, rhs: &Self) -> Vec<RatFn> {
        let n = self.coeffs.len();
        let mut out = vec![RatFn::zero(self.p, Var::Alpha); 2 * n - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        out
    }
}

impl Add for &XPoly {
    type Output = XPoly;
    fn add(self, rhs: &XPoly) -> XPoly {
        self.checked_add(rhs)
            .expect("adding quotient polynomials with different moduli")
    }
}

impl Sub for &XPoly {
    type Output = XPoly;
    fn sub(self, rhs: &XPoly) -> XPoly {
        self.checked_sub(rhs)
            .expect("subtracting quotient polynomials with different moduli")
    }
}

impl Neg for &XPoly {
    type Output = XPoly;
    fn neg(self) -> XPoly {
        self.map_coeffs(|c| -c)
    }
}

/// Ascending powers of X, each coefficient parenthesized when compound:
/// `(2*a^2 + 1) + (2*a + 1)*X + 2*X^2`.
impl fmt::Display for XPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let s = c.to_string();
            let compound = s.contains(' ');
            let x = match k {
                0 => String::new(),
                1 => "X".to_string(),
                _ => format!("X^{k}"),
            };
            match (k, compound, c.is_one()) {
                (0, true, _) if self.degree() != Some(0) => write!(f, "({s})")?,
                (0, _, _) => write!(f, "{s}")?,
                (_, _, true) => write!(f, "{x}")?,
                (_, true, _) => write!(f, "({s})*{x}")?,
                (_, false, _) => write!(f, "{s}*{x}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// Reduces `Σ f[i] X^i` of any degree modulo `X^p - c`.
pub fn reduce_mod(p: Prime, f: &[RatFn], c: &RatFn) -> XPoly {
    let n = p.get() as usize;
    let mut coeffs: Vec<RatFn> = f.to_vec();
    for i in (n..coeffs.len()).rev() {
        let top = std::mem::replace(&mut coeffs[i], RatFn::zero(p, Var::Alpha));
        if !top.is_zero() {
            coeffs[i - n] = &coeffs[i - n] + &(&top * c);
        }
    }
    coeffs.truncate(n);
    XPoly::from_coeffs(p, coeffs)
        .expect("degree below p after reduction")
        .with_modulus(c.clone())
}

fn tag_of(a: &XPoly, b: &XPoly) -> Result<RatFn> {
    a.same_tag(b)?;
    a.modulus.clone().ok_or(Error::MissingModulus)
}

/// `a * b mod (X^p - c)`; both operands must carry the same modulus tag.
pub fn mulmod(a: &XPoly, b: &XPoly) -> Result<XPoly> {
    let c = tag_of(a, b)?;
    let m = Modulus::new(&c);
    let prod = FracX::from_xpoly(a).mul_reduce(&FracX::from_xpoly(b), &m);
    Ok(prod
        .into_xpoly(a.p, &FpPoly::one(a.p, Var::Alpha))
        .with_modulus(c))
}

/// `a^j mod (X^p - c)` by repeated squaring.
pub fn powmod(a: &XPoly, j: u64) -> Result<XPoly> {
    let c = a.modulus.clone().ok_or(Error::MissingModulus)?;
    let m = Modulus::new(&c);
    let mut acc = FracX::one(a.p);
    let mut base = FracX::from_xpoly(a);
    let mut e = j;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc.mul_reduce(&base, &m);
        }
        e >>= 1;
        if e > 0 {
            base = base.mul_reduce(&base, &m);
        }
    }
    Ok(acc
        .into_xpoly(a.p, &FpPoly::one(a.p, Var::Alpha))
        .with_modulus(c))
}

/// `outer(inner) mod (X^p - c)` by Horner's rule.
///
/// `outer` is read as a plain polynomial (its own tag is ignored); `inner`
/// must be untagged or tagged with `c`.
pub fn compose_mod(outer: &XPoly, inner: &XPoly, c: &RatFn) -> Result<XPoly> {
    if let Some(t) = &inner.modulus {
        if t != c {
            return Err(Error::QuotientMismatch);
        }
    }
    let p = outer.p;
    let m = Modulus::new(c);
    let Some(deg) = outer.degree() else {
        return Ok(XPoly::zero(p).with_modulus(c.clone()));
    };
    let (onums, oden) = common_denominator(&outer.coeffs);
    let inner = FracX::from_xpoly(inner);
    let mut acc = FracX::constant(p, onums[deg].clone());
    for k in (0..deg).rev() {
        acc = acc.mul_reduce(&inner, &m);
        if !onums[k].is_zero() {
            let add = &onums[k] * &acc.den;
            acc.nums[0] = &acc.nums[0] + &add;
        }
    }
    Ok(acc.into_xpoly(p, &oden).with_modulus(c.clone()))
}

/// Numerator and denominator of the modulus constant.
struct Modulus {
    num: FpPoly,
    den: FpPoly,
}

impl Modulus {
    fn new(c: &RatFn) -> Self {
        Modulus {
            num: c.num().clone(),
            den: c.den().clone(),
        }
    }
}

fn lcm(a: &FpPoly, b: &FpPoly) -> FpPoly {
    if b.is_one() {
        return a.clone();
    }
    if a.is_one() {
        return b.clone();
    }
    let g = a.gcd(b);
    a * &b.exact_div(&g)
}

/// Writes `coeffs[i] = nums[i] / den` over a least common denominator.
fn common_denominator(coeffs: &[RatFn]) -> (Vec<FpPoly>, FpPoly) {
    let p = coeffs[0].prime();
    let den = coeffs
        .iter()
        .filter(|c| !c.is_zero())
        .fold(FpPoly::one(p, Var::Alpha), |acc, c| lcm(&acc, c.den()));
    let nums = coeffs
        .iter()
        .map(|c| {
            if c.is_zero() {
                FpPoly::zero(p, Var::Alpha)
            } else if c.den() == &den {
                c.num().clone()
            } else {
                c.num() * &den.exact_div(c.den())
            }
        })
        .collect();
    (nums, den)
}

/// `Σ nums[i] X^i / den` with polynomial numerators.
struct FracX {
    nums: Vec<FpPoly>,
    den: FpPoly,
}

impl FracX {
    fn from_xpoly(x: &XPoly) -> Self {
        let (nums, den) = common_denominator(&x.coeffs);
        FracX { nums, den }
    }

    fn constant(p: Prime, c: FpPoly) -> Self {
        let n = p.get() as usize;
        let mut nums = vec![FpPoly::zero(p, Var::Alpha); n];
        nums[0] = c;
        FracX {
            nums,
            den: FpPoly::one(p, Var::Alpha),
        }
    }

    fn one(p: Prime) -> Self {
        Self::constant(p, FpPoly::one(p, Var::Alpha))
    }

    fn mul_reduce(&self, rhs: &Self, m: &Modulus) -> Self {
        let n = self.nums.len();
        let p = self.den.prime();
        let mut prod = vec![FpPoly::zero(p, Var::Alpha); 2 * n - 1];
        for (i, a) in self.nums.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.nums.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                prod[i + j] = &prod[i + j] + &(a * b);
            }
        }
        let high: Vec<FpPoly> = prod.drain(n..).collect();
        let scale_low = !m.den.is_one();
        let nums = prod
            .into_iter()
            .enumerate()
            .map(|(t, low)| {
                let low = if scale_low { &low * &m.den } else { low };
                match high.get(t) {
                    Some(h) if !h.is_zero() => &low + &(h * &m.num),
                    _ => low,
                }
            })
            .collect();
        let mut den = &self.den * &rhs.den;
        if scale_low {
            den = &den * &m.den;
        }
        FracX { nums, den }
    }

    fn into_xpoly(self, p: Prime, extra_den: &FpPoly) -> XPoly {
        let den = if extra_den.is_one() {
            self.den
        } else {
            &self.den * extra_den
        };
        let coeffs = self
            .nums
            .into_iter()
            .map(|n| RatFn::new(n, den.clone()).expect("nonzero denominator"))
            .collect();
        XPoly::from_coeffs(p, coeffs).expect("p coefficients")
    }
}

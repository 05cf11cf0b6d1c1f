//! Dense univariate polynomials over F_p and reduced rational functions.

use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Div, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::fields::{Falling, FpElem, Prime};

/// Name of the indeterminate. Only used for rendering; arithmetic ignores it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum Var {
    #[default]
    Alpha,
    X,
    Y,
    T,
}

impl Var {
    pub fn symbol(self) -> &'static str {
        match self {
            Var::Alpha => "a",
            Var::X => "X",
            Var::Y => "Y",
            Var::T => "t",
        }
    }
}

/// Polynomial over F_p, lowest degree first, with no trailing zeros.
#[derive(Clone, Debug)]
pub struct FpPoly {
    p: Prime,
    coeffs: Vec<u64>,
    var: Var,
}

impl PartialEq for FpPoly {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.coeffs == other.coeffs
    }
}

impl Eq for FpPoly {}

impl Hash for FpPoly {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.p.hash(state);
        self.coeffs.hash(state);
    }
}

impl FpPoly {
    /// Builds a polynomial from raw residues (reduced mod p, trailing zeros trimmed).
    pub fn from_coeffs(p: Prime, coeffs: Vec<u64>, var: Var) -> Self {
        let q = p.get();
        let mut coeffs = coeffs;
        for c in coeffs.iter_mut() {
            *c %= q;
        }
        let mut out = FpPoly { p, coeffs, var };
        out.trim();
        out
    }

    pub fn from_i64(p: Prime, coeffs: &[i64], var: Var) -> Self {
        Self::from_coeffs(p, coeffs.iter().map(|&c| p.reduce(c)).collect(), var)
    }

    pub fn from_elems(p: Prime, coeffs: &[FpElem], var: Var) -> Self {
        Self::from_coeffs(p, coeffs.iter().map(|c| c.value()).collect(), var)
    }

    pub fn zero(p: Prime, var: Var) -> Self {
        FpPoly {
            p,
            coeffs: Vec::new(),
            var,
        }
    }

    pub fn one(p: Prime, var: Var) -> Self {
        Self::constant(FpElem::one(p), var)
    }

    pub fn constant(c: FpElem, var: Var) -> Self {
        Self::from_coeffs(c.prime(), vec![c.value()], var)
    }

    /// The indeterminate itself.
    pub fn var(p: Prime, var: Var) -> Self {
        Self::monomial(FpElem::one(p), 1, var)
    }

    pub fn monomial(c: FpElem, deg: usize, var: Var) -> Self {
        let mut coeffs = vec![0; deg + 1];
        coeffs[deg] = c.value();
        Self::from_coeffs(c.prime(), coeffs, var)
    }

    /// `c1 * v + c0`.
    pub fn linear(c1: FpElem, c0: FpElem, var: Var) -> Self {
        Self::from_coeffs(c1.prime(), vec![c0.value(), c1.value()], var)
    }

    fn trim(&mut self) {
        while self.coeffs.last() == Some(&0) {
            self.coeffs.pop();
        }
    }

    pub fn prime(&self) -> Prime {
        self.p
    }

    pub fn variable(&self) -> Var {
        self.var
    }

    pub fn with_var(mut self, var: Var) -> Self {
        self.var = var;
        self
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs == [1]
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Number of stored coefficients (degree + 1, or 0 for the zero polynomial).
    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn raw(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> FpElem {
        FpElem::new(self.coeffs.get(i).copied().unwrap_or(0), self.p)
    }

    pub fn coeffs(&self) -> Vec<FpElem> {
        self.coeffs
            .iter()
            .map(|&c| FpElem::new(c, self.p))
            .collect()
    }

    /// Leading coefficient; zero for the zero polynomial.
    pub fn leading(&self) -> FpElem {
        FpElem::new(self.coeffs.last().copied().unwrap_or(0), self.p)
    }

    /// Constant term.
    pub fn constant_term(&self) -> FpElem {
        self.coeff(0)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last() == Some(&1)
    }

    fn check(&self, rhs: &Self) {
        assert!(
            self.p == rhs.p,
            "polynomial arithmetic across moduli {} and {}",
            self.p,
            rhs.p
        );
    }

    pub fn scale(&self, c: FpElem) -> Self {
        assert_eq!(c.prime(), self.p);
        if c.is_zero() {
            return Self::zero(self.p, self.var);
        }
        let p = self.p;
        FpPoly {
            p,
            coeffs: self.coeffs.iter().map(|&a| p.mul(a, c.value())).collect(),
            var: self.var,
        }
    }

    /// Multiplies by `v^n`.
    pub fn shift(&self, n: usize) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut coeffs = vec![0; n];
        coeffs.extend_from_slice(&self.coeffs);
        FpPoly {
            p: self.p,
            coeffs,
            var: self.var,
        }
    }

    /// Returns `(lc, self / lc)`; the zero polynomial is returned unchanged with `lc = 0`.
    pub fn monic(&self) -> (FpElem, Self) {
        let lc = self.leading();
        match lc.inv() {
            Some(inv) => (lc, self.scale(inv)),
            None => (lc, self.clone()),
        }
    }

    fn add_raw(&self, rhs: &Self) -> Self {
        self.check(rhs);
        let p = self.p;
        let (long, short) = if self.coeffs.len() >= rhs.coeffs.len() {
            (&self.coeffs, &rhs.coeffs)
        } else {
            (&rhs.coeffs, &self.coeffs)
        };
        let mut coeffs = long.clone();
        for (c, &s) in coeffs.iter_mut().zip(short.iter()) {
            *c = p.add(*c, s);
        }
        let mut out = FpPoly {
            p,
            coeffs,
            var: self.var,
        };
        out.trim();
        out
    }

    fn neg_raw(&self) -> Self {
        let p = self.p;
        FpPoly {
            p,
            coeffs: self.coeffs.iter().map(|&c| p.neg(c)).collect(),
            var: self.var,
        }
    }

    fn mul_raw(&self, rhs: &Self) -> Self {
        self.check(rhs);
        if self.is_zero() || rhs.is_zero() {
            return Self::zero(self.p, self.var);
        }
        let q = self.p.get();
        let (a, b) = (&self.coeffs, &rhs.coeffs);
        let mut acc = vec![0u64; a.len() + b.len() - 1];
        let max_sq = (q - 1) * (q - 1);
        let lazy_terms = u64::MAX.checked_div(max_sq).unwrap_or(u64::MAX);
        if lazy_terms >= a.len().min(b.len()) as u64 {
            // every slot receives at most min(len) products, all fitting in u64
            let (outer, inner) = if a.len() <= b.len() { (a, b) } else { (b, a) };
            for (i, &x) in outer.iter().enumerate() {
                if x == 0 {
                    continue;
                }
                for (slot, &y) in acc[i..].iter_mut().zip(inner.iter()) {
                    *slot += x * y;
                }
            }
            for c in acc.iter_mut() {
                *c %= q;
            }
        } else {
            for (i, &x) in a.iter().enumerate() {
                for (j, &y) in b.iter().enumerate() {
                    acc[i + j] = (acc[i + j] + x * y % q) % q;
                }
            }
        }
        let mut out = FpPoly {
            p: self.p,
            coeffs: acc,
            var: self.var,
        };
        out.trim();
        out
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut acc = Self::one(self.p, self.var);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Euclidean division: `self = q * rhs + r` with `deg r < deg rhs`.
    pub fn divrem(&self, rhs: &Self) -> Result<(Self, Self)> {
        self.check(rhs);
        if rhs.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let p = self.p;
        let db = rhs.coeffs.len() - 1;
        if self.coeffs.len() <= db {
            return Ok((Self::zero(p, self.var), self.clone()));
        }
        let lead_inv = p.inv(*rhs.coeffs.last().unwrap()).expect("nonzero leading");
        let mut rem = self.coeffs.clone();
        let mut quot = vec![0u64; rem.len() - db];
        for i in (0..quot.len()).rev() {
            let c = p.mul(rem[i + db], lead_inv);
            quot[i] = c;
            if c == 0 {
                continue;
            }
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                rem[i + j] = p.sub(rem[i + j], p.mul(c, b));
            }
        }
        rem.truncate(db);
        let mut q = FpPoly {
            p,
            coeffs: quot,
            var: self.var,
        };
        let mut r = FpPoly {
            p,
            coeffs: rem,
            var: self.var,
        };
        q.trim();
        r.trim();
        Ok((q, r))
    }

    /// Quotient of a division known to be exact.
    pub fn exact_div(&self, rhs: &Self) -> Self {
        let (q, r) = self.divrem(rhs).expect("exact division by zero polynomial");
        debug_assert!(r.is_zero(), "inexact division");
        q
    }

    /// Monic greatest common divisor; `gcd(0, 0) = 0`.
    pub fn gcd(&self, rhs: &Self) -> Self {
        self.check(rhs);
        let mut a = self.clone();
        let mut b = rhs.clone();
        while !b.is_zero() {
            let (_, r) = a.divrem(&b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        a.monic().1
    }

    pub fn eval(&self, x: FpElem) -> FpElem {
        assert_eq!(x.prime(), self.p);
        let p = self.p;
        let v = self
            .coeffs
            .iter()
            .rev()
            .fold(0u64, |acc, &c| p.add(p.mul(acc, x.value()), c));
        FpElem::new(v, p)
    }

    /// Formal derivative.
    pub fn derivative(&self) -> Self {
        let p = self.p;
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| p.mul(c, i as u64 % p.get()))
            .collect();
        let mut out = FpPoly {
            p,
            coeffs,
            var: self.var,
        };
        out.trim();
        out
    }

    /// `self(inner)`, by Horner's rule. The result carries `inner`'s variable.
    pub fn compose(&self, inner: &Self) -> Self {
        self.check(inner);
        let mut acc = Self::zero(self.p, inner.var);
        for &c in self.coeffs.iter().rev() {
            acc = &(&acc * inner) + &Self::constant(FpElem::new(c, self.p), inner.var);
        }
        acc
    }

    /// `self(c * v)`.
    pub fn scale_var(&self, c: FpElem) -> Self {
        let p = self.p;
        let mut pw = 1u64;
        let coeffs = self
            .coeffs
            .iter()
            .map(|&a| {
                let v = p.mul(a, pw);
                pw = p.mul(pw, c.value());
                v
            })
            .collect();
        let mut out = FpPoly {
            p,
            coeffs,
            var: self.var,
        };
        out.trim();
        out
    }

    /// `self(rhs)` where `rhs` is a rational function, by Horner's rule in the fraction field.
    pub fn eval_ratfn(&self, x: &RatFn) -> RatFn {
        let mut acc = RatFn::zero(self.p, x.var());
        for &c in self.coeffs.iter().rev() {
            acc = &(&acc * x) + &RatFn::constant(FpElem::new(c, self.p), x.var());
        }
        acc
    }

    /// Divides out `(v - a)` by synthetic division, returning the quotient and `self(a)`.
    fn div_linear(&self, a: FpElem) -> (Self, FpElem) {
        let p = self.p;
        if self.is_zero() {
            return (self.clone(), FpElem::zero(p));
        }
        let n = self.coeffs.len();
        let mut quot = vec![0u64; n - 1];
        let mut carry = 0u64;
        for i in (0..n).rev() {
            let v = p.add(self.coeffs[i], p.mul(carry, a.value()));
            if i == 0 {
                carry = v;
            } else {
                quot[i - 1] = v;
                carry = v;
            }
        }
        let mut q = FpPoly {
            p,
            coeffs: quot,
            var: self.var,
        };
        q.trim();
        (q, FpElem::new(carry, p))
    }

    /// Roots in F_p with multiplicity, or an error when an irreducible factor
    /// of degree > 1 remains. Found by exhaustive evaluation.
    pub fn roots_and_split(&self) -> Result<Split> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let mut rest = self.clone();
        let mut roots = Vec::new();
        for a in self.p.elements() {
            loop {
                if rest.degree() == Some(0) {
                    break;
                }
                let (q, r) = rest.div_linear(a);
                if !r.is_zero() {
                    break;
                }
                roots.push(a);
                rest = q;
            }
        }
        if rest.degree() != Some(0) {
            return Err(Error::NotSplit {
                factor: rest.monic().1.to_string(),
            });
        }
        Ok(Split {
            leading: rest.leading(),
            roots,
            var: self.var,
        })
    }

    /// Root set (without multiplicity) by evaluation at every residue.
    pub fn roots(&self) -> Vec<FpElem> {
        self.p
            .elements()
            .filter(|&a| self.eval(a).is_zero())
            .collect()
    }
}

/// Complete factorization into linear factors: `leading * prod (v - root)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Split {
    pub leading: FpElem,
    /// Roots with multiplicity, in ascending order.
    pub roots: Vec<FpElem>,
    var: Var,
}

impl Split {
    pub fn reconstruct(&self) -> FpPoly {
        let p = self.leading.prime();
        self.roots
            .iter()
            .fold(FpPoly::constant(self.leading, self.var), |acc, &a| {
                &acc * &FpPoly::linear(FpElem::one(p), -a, self.var)
            })
    }

    pub fn multiplicity(&self, a: FpElem) -> usize {
        self.roots.iter().filter(|&&r| r == a).count()
    }

    pub fn is_squarefree(&self) -> bool {
        self.roots.windows(2).all(|w| w[0] != w[1])
    }
}

macro_rules! forward_binop {
    ($t:ty, $trait:ident, $method:ident, $body:expr) => {
        impl<'a> $trait<&'a $t> for &'a $t {
            type Output = $t;
            fn $method(self, rhs: &'a $t) -> $t {
                let f: fn(&$t, &$t) -> $t = $body;
                f(self, rhs)
            }
        }
        impl $trait<$t> for $t {
            type Output = $t;
            fn $method(self, rhs: $t) -> $t {
                let f: fn(&$t, &$t) -> $t = $body;
                f(&self, &rhs)
            }
        }
    };
}

forward_binop!(FpPoly, Add, add, |a, b| a.add_raw(b));
forward_binop!(FpPoly, Sub, sub, |a, b| a.add_raw(&b.neg_raw()));
forward_binop!(FpPoly, Mul, mul, |a, b| a.mul_raw(b));

impl Neg for &FpPoly {
    type Output = FpPoly;
    fn neg(self) -> FpPoly {
        self.neg_raw()
    }
}

impl Neg for FpPoly {
    type Output = FpPoly;
    fn neg(self) -> FpPoly {
        self.neg_raw()
    }
}

fn fmt_term(f: &mut fmt::Formatter<'_>, c: u64, deg: usize, var: &str) -> fmt::Result {
    match (c, deg) {
        (c, 0) => write!(f, "{c}"),
        (1, 1) => write!(f, "{var}"),
        (1, d) => write!(f, "{var}^{d}"),
        (c, 1) => write!(f, "{c}*{var}"),
        (c, d) => write!(f, "{c}*{var}^{d}"),
    }
}

/// Descending powers, residues in `[0, p)`, e.g. `2*a^2 + 1`.
impl fmt::Display for FpPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let var = self.var.symbol();
        let mut first = true;
        for (deg, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            fmt_term(f, c, deg, var)?;
        }
        Ok(())
    }
}

impl Falling for FpPoly {
    fn prime(&self) -> Prime {
        self.p
    }
    fn one_like(&self) -> Self {
        Self::one(self.p, self.var)
    }
    fn minus_int(&self, j: u64) -> Self {
        self - &Self::constant(FpElem::new(j, self.p), self.var)
    }
    fn times(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn scale(&self, c: FpElem) -> Self {
        FpPoly::scale(self, c)
    }
}

/// A reduced fraction `num / den` with `den` monic and `gcd(num, den) = 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RatFn {
    num: FpPoly,
    den: FpPoly,
}

impl RatFn {
    pub fn new(num: FpPoly, den: FpPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::canonical(num, den))
    }

    fn canonical(num: FpPoly, den: FpPoly) -> Self {
        debug_assert!(!den.is_zero());
        let var = num.var;
        if num.is_zero() {
            return RatFn {
                num: FpPoly::zero(num.p, var),
                den: FpPoly::one(num.p, var),
            };
        }
        let (num, den) = if den.is_constant() {
            (num, den)
        } else {
            let g = num.gcd(&den);
            if g.is_one() {
                (num, den)
            } else {
                (num.exact_div(&g), den.exact_div(&g))
            }
        };
        let (lc, den) = den.monic();
        let num = num.scale(lc.inv().expect("nonzero leading coefficient"));
        RatFn {
            num,
            den: den.with_var(var),
        }
    }

    pub fn from_poly(num: FpPoly) -> Self {
        let den = FpPoly::one(num.p, num.var);
        RatFn { num, den }
    }

    pub fn constant(c: FpElem, var: Var) -> Self {
        Self::from_poly(FpPoly::constant(c, var))
    }

    pub fn zero(p: Prime, var: Var) -> Self {
        Self::from_poly(FpPoly::zero(p, var))
    }

    pub fn one(p: Prime, var: Var) -> Self {
        Self::from_poly(FpPoly::one(p, var))
    }

    pub fn num(&self) -> &FpPoly {
        &self.num
    }

    pub fn den(&self) -> &FpPoly {
        &self.den
    }

    pub fn into_parts(self) -> (FpPoly, FpPoly) {
        (self.num, self.den)
    }

    pub fn prime(&self) -> Prime {
        self.num.p
    }

    pub fn var(&self) -> Var {
        self.num.var
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    pub fn as_poly(&self) -> Option<&FpPoly> {
        self.is_polynomial().then_some(&self.num)
    }

    pub fn scale(&self, c: FpElem) -> Self {
        RatFn {
            num: self.num.scale(c),
            den: if c.is_zero() {
                FpPoly::one(self.prime(), self.var())
            } else {
                self.den.clone()
            },
        }
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::canonical(
            self.den.clone().with_var(self.var()),
            self.num.clone(),
        ))
    }

    pub fn checked_div(&self, rhs: &Self) -> Result<Self> {
        Ok(self * &rhs.inv()?)
    }

    pub fn pow(&self, e: u64) -> Self {
        // powers of coprime polynomials stay coprime
        RatFn {
            num: self.num.pow(e),
            den: self.den.pow(e),
        }
    }

    /// Value at `a`; fails when the reduced denominator vanishes there.
    pub fn eval(&self, a: FpElem) -> Result<FpElem> {
        let d = self.den.eval(a);
        let inv = d.inv().ok_or(Error::Pole { point: a.value() })?;
        Ok(self.num.eval(a) * inv)
    }

    /// `self(inner)` for a polynomial `inner`.
    pub fn substitute(&self, inner: &FpPoly) -> Result<Self> {
        Self::new(self.num.compose(inner), self.den.compose(inner))
    }

    /// `self(c * v)` for a unit `c`.
    pub fn scale_var(&self, c: FpElem) -> Self {
        assert!(!c.is_zero(), "scaling the variable by zero");
        Self::canonical(self.num.scale_var(c), self.den.scale_var(c))
    }

    fn add_raw(&self, rhs: &Self) -> Self {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        if self.den.is_one() && rhs.den.is_one() {
            return Self::from_poly(&self.num + &rhs.num);
        }
        if self.den == rhs.den {
            return Self::canonical(&self.num + &rhs.num, self.den.clone());
        }
        let g = self.den.gcd(&rhs.den);
        if g.is_one() {
            let num = &(&self.num * &rhs.den) + &(&rhs.num * &self.den);
            return Self::canonical(num, &self.den * &rhs.den);
        }
        let d1 = self.den.exact_div(&g);
        let d2 = rhs.den.exact_div(&g);
        let num = &(&self.num * &d2) + &(&rhs.num * &d1);
        Self::canonical(num, &(&d1 * &d2) * &g)
    }

    fn mul_raw(&self, rhs: &Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Self::zero(self.prime(), self.var());
        }
        if self.den.is_one() && rhs.den.is_one() {
            return Self::from_poly(&self.num * &rhs.num);
        }
        // cross-cancel so the product is already reduced
        let g1 = self.num.gcd(&rhs.den);
        let g2 = rhs.num.gcd(&self.den);
        let (n1, d2) = if g1.is_one() {
            (self.num.clone(), rhs.den.clone())
        } else {
            (self.num.exact_div(&g1), rhs.den.exact_div(&g1))
        };
        let (n2, d1) = if g2.is_one() {
            (rhs.num.clone(), self.den.clone())
        } else {
            (rhs.num.exact_div(&g2), self.den.exact_div(&g2))
        };
        let num = &n1 * &n2;
        let den = &d1 * &d2;
        let (lc, den) = den.monic();
        RatFn {
            num: num.scale(lc.inv().unwrap()),
            den,
        }
    }

    fn neg_raw(&self) -> Self {
        RatFn {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

forward_binop!(RatFn, Add, add, |a, b| a.add_raw(b));
forward_binop!(RatFn, Sub, sub, |a, b| a.add_raw(&b.neg_raw()));
forward_binop!(RatFn, Mul, mul, |a, b| a.mul_raw(b));
forward_binop!(RatFn, Div, div, |a, b| a
    .checked_div(b)
    .expect("division by the zero rational function"));

impl Neg for &RatFn {
    type Output = RatFn;
    fn neg(self) -> RatFn {
        self.neg_raw()
    }
}

impl Neg for RatFn {
    type Output = RatFn;
    fn neg(self) -> RatFn {
        self.neg_raw()
    }
}

impl From<FpPoly> for RatFn {
    fn from(p: FpPoly) -> Self {
        RatFn::from_poly(p)
    }
}

fn paren_if_compound(f: &mut fmt::Formatter<'_>, poly: &FpPoly) -> fmt::Result {
    if poly.raw().iter().filter(|&&c| c != 0).count() > 1 {
        write!(f, "({poly})")
    } else {
        write!(f, "{poly}")
    }
}

/// `num / den`, with compound parts parenthesized; just `num` when `den = 1`.
impl fmt::Display for RatFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            return write!(f, "{}", self.num);
        }
        paren_if_compound(f, &self.num)?;
        write!(f, " / ")?;
        paren_if_compound(f, &self.den)
    }
}

impl Falling for RatFn {
    fn prime(&self) -> Prime {
        self.num.p
    }
    fn one_like(&self) -> Self {
        Self::one(self.prime(), self.var())
    }
    fn minus_int(&self, j: u64) -> Self {
        self - &Self::constant(FpElem::new(j, self.prime()), self.var())
    }
    fn times(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn scale(&self, c: FpElem) -> Self {
        RatFn::scale(self, c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::{binomial, pochhammer};
    use proptest::prelude::*;

    fn pr(q: u64) -> Prime {
        Prime::new(q).unwrap()
    }

    fn poly(q: u64, c: &[i64]) -> FpPoly {
        FpPoly::from_i64(pr(q), c, Var::Alpha)
    }

    fn xpoly(q: u64, c: &[i64]) -> FpPoly {
        FpPoly::from_i64(pr(q), c, Var::X)
    }

    #[test]
    fn gcd_shared_root() {
        let a = xpoly(5, &[-1, 0, 1]);
        let b = xpoly(5, &[-1, 1]);
        assert_eq!(a.gcd(&b), xpoly(5, &[-1, 1]));
    }

    #[test]
    fn derivative_of_frobenius_power_vanishes() {
        for q in [3u64, 5, 7] {
            let xp = FpPoly::monomial(FpElem::one(pr(q)), q as usize, Var::X);
            assert!(xp.derivative().is_zero());
        }
    }

    #[test]
    fn divrem_by_hand() {
        let (q, r) = xpoly(3, &[0, 0, 0, 1])
            .divrem(&xpoly(3, &[1, 0, 1]))
            .unwrap();
        assert_eq!(q, xpoly(3, &[0, 1]));
        assert_eq!(r, xpoly(3, &[0, -1]));
    }

    #[test]
    fn divrem_by_zero_rejected() {
        assert_eq!(
            xpoly(3, &[1, 1]).divrem(&xpoly(3, &[])).unwrap_err(),
            Error::DivisionByZero
        );
    }

    #[test]
    fn pochhammer_alpha_minus_one() {
        for q in [3u64, 5, 7, 11] {
            let f = poly(q, &[-1, 1]);
            let got = pochhammer(&f, q as usize - 1);
            let mut expect = vec![0i64; q as usize];
            expect[0] = -1;
            expect[q as usize - 1] = 1;
            assert_eq!(got, poly(q, &expect));
        }
    }

    #[test]
    fn binomial_examples() {
        assert!(binomial(&poly(5, &[0, 1]), 0).unwrap().is_one());
        assert!(binomial(&poly(5, &[-1]), 4).unwrap().is_one());
        assert_eq!(
            binomial(&poly(3, &[-1, 1]), 2).unwrap(),
            poly(3, &[1, 0, 2])
        );
    }

    #[test]
    fn roots_examples() {
        let s = poly(5, &[-1, 0, 1]).roots_and_split().unwrap();
        assert_eq!(s.leading.value(), 1);
        let roots: Vec<u64> = s.roots.iter().map(|r| r.value()).collect();
        assert_eq!(roots, vec![1, 4]);

        let err = poly(3, &[1, 0, 1]).roots_and_split().unwrap_err();
        assert!(matches!(err, Error::NotSplit { .. }));
    }

    #[test]
    fn roots_with_multiplicity() {
        // 2 (a - 1)^2 (a - 3) over F_7
        let f = &(&poly(7, &[-1, 1]) * &poly(7, &[-1, 1])) * &poly(7, &[-6, 2]);
        let s = f.roots_and_split().unwrap();
        assert_eq!(s.multiplicity(FpElem::new(1, pr(7))), 2);
        assert_eq!(s.multiplicity(FpElem::new(3, pr(7))), 1);
        assert!(!s.is_squarefree());
        assert_eq!(s.reconstruct(), f);
    }

    #[test]
    fn ratfn_canonicalize_common_factor() {
        let f = RatFn::new(poly(5, &[-1, 1]), poly(5, &[-1, 0, 1])).unwrap();
        assert!(f.num().is_one());
        assert_eq!(f.den(), &poly(5, &[1, 1]));
    }

    #[test]
    fn ratfn_eval_and_pole() {
        let f = RatFn::new(poly(3, &[1]), poly(3, &[2, 1])).unwrap();
        assert_eq!(f.eval(FpElem::new(0, pr(3))).unwrap().value(), 2);
        assert_eq!(
            f.eval(FpElem::new(1, pr(3))).unwrap_err(),
            Error::Pole { point: 1 }
        );
    }

    #[test]
    fn ratfn_zero_denominator_rejected() {
        assert_eq!(
            RatFn::new(poly(3, &[1]), poly(3, &[])).unwrap_err(),
            Error::DivisionByZero
        );
    }

    #[test]
    fn rendering() {
        assert_eq!(poly(3, &[1, 0, 2]).to_string(), "2*a^2 + 1");
        assert_eq!(poly(3, &[]).to_string(), "0");
        assert_eq!(xpoly(5, &[0, 1, 0, 1]).to_string(), "X^3 + X");
        let f = RatFn::new(poly(3, &[2]), poly(3, &[2, 1])).unwrap();
        assert_eq!(f.to_string(), "2 / (a + 2)");
        let g = RatFn::new(poly(5, &[1, 1]), poly(5, &[0, 1])).unwrap();
        assert_eq!(g.to_string(), "(a + 1) / a");
    }

    #[test]
    fn var_tags_do_not_affect_equality() {
        assert_eq!(poly(5, &[1, 2]), xpoly(5, &[1, 2]));
    }

    fn arb_poly(q: u64, max_len: usize) -> impl Strategy<Value = FpPoly> {
        prop::collection::vec(0..q, 0..max_len)
            .prop_map(move |c| FpPoly::from_coeffs(Prime::new(q).unwrap(), c, Var::Alpha))
    }

    proptest! {
        #[test]
        fn divrem_recombines(f in arb_poly(7, 12), g in arb_poly(7, 6)) {
            prop_assume!(!g.is_zero());
            let (q, r) = f.divrem(&g).unwrap();
            prop_assert!(r.degree().is_none_or(|d| d < g.degree().unwrap()));
            prop_assert_eq!(&(&q * &g) + &r, f);
        }

        #[test]
        fn product_degree_adds(f in arb_poly(11, 8), g in arb_poly(11, 8)) {
            prop_assume!(!f.is_zero() && !g.is_zero());
            prop_assert_eq!((&f * &g).degree(), Some(f.degree().unwrap() + g.degree().unwrap()));
        }

        #[test]
        fn split_size_matches_degree(roots in prop::collection::vec(0u64..13, 1..8), lead in 1u64..13) {
            let p = Prime::new(13).unwrap();
            let f = roots.iter().fold(FpPoly::constant(FpElem::new(lead, p), Var::Alpha), |acc, &r| {
                &acc * &FpPoly::from_coeffs(p, vec![p.neg(r), 1], Var::Alpha)
            });
            let s = f.roots_and_split().unwrap();
            prop_assert_eq!(s.roots.len(), f.degree().unwrap());
            prop_assert_eq!(s.reconstruct(), f);
        }

        #[test]
        fn ratfn_normal_form(a in arb_poly(5, 5), b in arb_poly(5, 5), c in arb_poly(5, 4)) {
            prop_assume!(!b.is_zero() && !c.is_zero());
            // a/b and (a c)/(b c) are the same fraction
            let f = RatFn::new(a.clone(), b.clone()).unwrap();
            let g = RatFn::new(&a * &c, &b * &c).unwrap();
            prop_assert_eq!(&f, &g);
            prop_assert!(f.den().is_monic());
            prop_assert!(f.num().gcd(f.den()).is_one() || f.is_zero());
        }

        #[test]
        fn ratfn_field_axioms(a in arb_poly(7, 4), b in arb_poly(7, 4), c in arb_poly(7, 4), d in arb_poly(7, 4)) {
            prop_assume!(!b.is_zero() && !d.is_zero());
            let x = RatFn::new(a, b).unwrap();
            let y = RatFn::new(c, d).unwrap();
            prop_assert_eq!(&(&x + &y) - &y, x.clone());
            if !y.is_zero() {
                prop_assert_eq!(&(&x * &y) / &y, x.clone());
            }
            prop_assert_eq!(&x * &(&x + &y), &(&x * &x) + &(&x * &y));
        }

        #[test]
        fn binomial_commutes_with_evaluation(f in arb_poly(7, 4), k in 0usize..7, a in 0u64..7) {
            let p = Prime::new(7).unwrap();
            let at = FpElem::new(a, p);
            let lhs = binomial(&f, k).unwrap().eval(at);
            let rhs = binomial(&f.eval(at), k).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
    }
}

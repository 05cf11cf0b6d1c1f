//! Prime fields with a runtime modulus, the quadratic extension F_{p^2},
//! and the falling-factorial combinatorics the rest of the crate is written in.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::polys::{FpPoly, Var};

/// An odd prime, validated by trial division.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Prime(u64);

impl Prime {
    /// Largest accepted modulus; products of two residues must fit in a `u64`.
    pub const MAX: u64 = u32::MAX as u64;

    pub fn new(p: u64) -> Result<Self> {
        if !(3..=Self::MAX).contains(&p) || !is_prime(p) {
            return Err(Error::NotOddPrime(p));
        }
        Ok(Prime(p))
    }

    #[inline]
    pub fn get(self) -> u64 {
        self.0
    }

    /// Reduces a signed integer into `[0, p)`.
    #[inline]
    pub fn reduce(self, v: i64) -> u64 {
        v.rem_euclid(self.0 as i64) as u64
    }

    #[inline]
    pub(crate) fn add(self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.0 {
            s - self.0
        } else {
            s
        }
    }

    #[inline]
    pub(crate) fn sub(self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.0 - b
        }
    }

    #[inline]
    pub(crate) fn mul(self, a: u64, b: u64) -> u64 {
        a * b % self.0
    }

    #[inline]
    pub(crate) fn neg(self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.0 - a
        }
    }

    /// Inverse by the extended Euclidean algorithm; `None` for zero.
    pub(crate) fn inv(self, a: u64) -> Option<u64> {
        let a = a % self.0;
        if a == 0 {
            return None;
        }
        let (mut r0, mut r1) = (self.0 as i64, a as i64);
        let (mut t0, mut t1) = (0i64, 1i64);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        debug_assert_eq!(r0, 1);
        Some(self.reduce(t0))
    }

    pub(crate) fn pow(self, mut base: u64, mut e: u64) -> u64 {
        let mut acc = 1 % self.0;
        base %= self.0;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Residues `1, ..., p-1`.
    pub fn units(self) -> impl Iterator<Item = FpElem> {
        (1..self.0).map(move |v| FpElem::new(v, self))
    }

    /// Every residue `0, ..., p-1`.
    pub fn elements(self) -> impl Iterator<Item = FpElem> {
        (0..self.0).map(move |v| FpElem::new(v, self))
    }
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// An element of F_p.
///
/// Arithmetic between elements with different moduli panics; use
/// [`FpElem::checked_add`] and friends where the moduli are not known to agree.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FpElem {
    value: u64,
    p: Prime,
}

impl FpElem {
    pub fn new(value: u64, p: Prime) -> Self {
        FpElem {
            value: value % p.get(),
            p,
        }
    }

    pub fn from_i64(value: i64, p: Prime) -> Self {
        FpElem {
            value: p.reduce(value),
            p,
        }
    }

    pub fn zero(p: Prime) -> Self {
        FpElem { value: 0, p }
    }

    pub fn one(p: Prime) -> Self {
        FpElem { value: 1, p }
    }

    #[inline]
    pub fn value(self) -> u64 {
        self.value
    }

    #[inline]
    pub fn prime(self) -> Prime {
        self.p
    }

    pub fn is_zero(self) -> bool {
        self.value == 0
    }

    pub fn inv(self) -> Option<Self> {
        self.p.inv(self.value).map(|v| FpElem {
            value: v,
            p: self.p,
        })
    }

    pub fn pow(self, e: u64) -> Self {
        FpElem {
            value: self.p.pow(self.value, e),
            p: self.p,
        }
    }

    /// Signed representative in `(-p/2, p/2]`.
    pub fn balanced(self) -> i64 {
        let p = self.p.get();
        if self.value > p / 2 {
            self.value as i64 - p as i64
        } else {
            self.value as i64
        }
    }

    fn same_field(self, rhs: Self) -> Result<()> {
        if self.p != rhs.p {
            Err(Error::ModulusMismatch {
                left: self.p.get(),
                right: rhs.p.get(),
            })
        } else {
            Ok(())
        }
    }

    pub fn checked_add(self, rhs: Self) -> Result<Self> {
        self.same_field(rhs)?;
        Ok(self + rhs)
    }

    pub fn checked_sub(self, rhs: Self) -> Result<Self> {
        self.same_field(rhs)?;
        Ok(self - rhs)
    }

    pub fn checked_mul(self, rhs: Self) -> Result<Self> {
        self.same_field(rhs)?;
        Ok(self * rhs)
    }

    pub fn checked_div(self, rhs: Self) -> Result<Self> {
        self.same_field(rhs)?;
        let inv = rhs.inv().ok_or(Error::DivisionByZero)?;
        Ok(self * inv)
    }

    fn assert_same(self, rhs: Self) {
        assert!(
            self.p == rhs.p,
            "F_p arithmetic across moduli {} and {}",
            self.p,
            rhs.p
        );
    }
}

impl Add for FpElem {
    type Output = FpElem;
    fn add(self, rhs: FpElem) -> FpElem {
        self.assert_same(rhs);
        FpElem {
            value: self.p.add(self.value, rhs.value),
            p: self.p,
        }
    }
}

impl Sub for FpElem {
    type Output = FpElem;
    fn sub(self, rhs: FpElem) -> FpElem {
        self.assert_same(rhs);
        FpElem {
            value: self.p.sub(self.value, rhs.value),
            p: self.p,
        }
    }
}

impl Mul for FpElem {
    type Output = FpElem;
    fn mul(self, rhs: FpElem) -> FpElem {
        self.assert_same(rhs);
        FpElem {
            value: self.p.mul(self.value, rhs.value),
            p: self.p,
        }
    }
}

impl Div for FpElem {
    type Output = FpElem;
    fn div(self, rhs: FpElem) -> FpElem {
        self.checked_div(rhs).expect("F_p division")
    }
}

impl Neg for FpElem {
    type Output = FpElem;
    fn neg(self) -> FpElem {
        FpElem {
            value: self.p.neg(self.value),
            p: self.p,
        }
    }
}

impl fmt::Display for FpElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

/// Binomial coefficient `C(n, k) mod p`, digit by digit in base `p`.
pub fn binom_lucas(mut n: u64, mut k: u64, p: Prime) -> FpElem {
    let q = p.get();
    let mut acc = FpElem::one(p);
    while k > 0 || n > 0 {
        let (nd, kd) = (n % q, k % q);
        if kd > nd {
            return FpElem::zero(p);
        }
        acc = acc * small_binom(nd, kd, p);
        n /= q;
        k /= q;
    }
    acc
}

/// `C(n, k) mod p` for `k <= n < p`.
fn small_binom(n: u64, k: u64, p: Prime) -> FpElem {
    let mut num = FpElem::one(p);
    let mut den = FpElem::one(p);
    for i in 0..k {
        num = num * FpElem::new(n - i, p);
        den = den * FpElem::new(i + 1, p);
    }
    num / den
}

/// `k!` in F_p.
pub fn factorial(k: u64, p: Prime) -> FpElem {
    (1..=k).fold(FpElem::one(p), |acc, i| acc * FpElem::new(i, p))
}

/// Values for which falling factorials and binomials with an F_p-scalar
/// denominator make sense: scalars, polynomials, rational functions, and
/// elements of F_{p^2}.
pub trait Falling: Clone {
    fn prime(&self) -> Prime;
    fn one_like(&self) -> Self;
    /// `self - j`.
    fn minus_int(&self, j: u64) -> Self;
    fn times(&self, rhs: &Self) -> Self;
    fn scale(&self, c: FpElem) -> Self;
}

/// Falling product `f (f - 1) ... (f - m + 1)`, with `(f)_0 = 1`.
pub fn pochhammer<T: Falling>(f: &T, m: usize) -> T {
    (0..m as u64).fold(f.one_like(), |acc, j| acc.times(&f.minus_int(j)))
}

/// `C(f, k) = (f)_k / k!`, defined for `k < p`.
pub fn binomial<T: Falling>(f: &T, k: usize) -> Result<T> {
    let p = f.prime();
    if k as u64 >= p.get() {
        return Err(Error::BinomialIndex { k, p: p.get() });
    }
    let inv = factorial(k as u64, p).inv().expect("k < p");
    Ok(pochhammer(f, k).scale(inv))
}

/// `[C(f, 0), ..., C(f, n)]`, built incrementally; requires `n < p`.
pub fn binomials<T: Falling>(f: &T, n: usize) -> Result<Vec<T>> {
    let p = f.prime();
    if n as u64 >= p.get() {
        return Err(Error::BinomialIndex { k: n, p: p.get() });
    }
    let mut out = Vec::with_capacity(n + 1);
    out.push(f.one_like());
    for k in 0..n {
        let step = FpElem::new(k as u64 + 1, p).inv().expect("k + 1 < p");
        let next = out[k].times(&f.minus_int(k as u64)).scale(step);
        out.push(next);
    }
    Ok(out)
}

impl Falling for FpElem {
    fn prime(&self) -> Prime {
        self.p
    }
    fn one_like(&self) -> Self {
        FpElem::one(self.p)
    }
    fn minus_int(&self, j: u64) -> Self {
        *self - FpElem::new(j, self.p)
    }
    fn times(&self, rhs: &Self) -> Self {
        *self * *rhs
    }
    fn scale(&self, c: FpElem) -> Self {
        *self * c
    }
}

/// The field F_p[t]/(t^2 - n), with `n` the least quadratic non-residue mod p.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Fp2 {
    p: Prime,
    nonresidue: u64,
}

impl Fp2 {
    pub fn new(p: Prime) -> Self {
        let q = p.get();
        let squares: std::collections::BTreeSet<u64> = (0..q).map(|x| p.mul(x, x)).collect();
        let nonresidue = (1..q)
            .find(|n| !squares.contains(n))
            .expect("odd primes have non-residues");
        Fp2 { p, nonresidue }
    }

    pub fn prime(&self) -> Prime {
        self.p
    }

    pub fn nonresidue(&self) -> FpElem {
        FpElem::new(self.nonresidue, self.p)
    }

    /// The defining polynomial `t^2 - n`.
    pub fn minpoly(&self) -> FpPoly {
        FpPoly::from_coeffs(self.p, vec![self.p.neg(self.nonresidue), 0, 1], Var::T)
    }

    /// Checks that the defining polynomial has no root in F_p.
    pub fn minpoly_is_irreducible(&self) -> bool {
        let m = self.minpoly();
        self.p.elements().all(|x| !m.eval(x).is_zero())
    }

    pub fn elem(&self, c0: u64, c1: u64) -> Fp2Elem {
        Fp2Elem {
            c0: c0 % self.p.get(),
            c1: c1 % self.p.get(),
            field: *self,
        }
    }

    pub fn embed(&self, x: FpElem) -> Fp2Elem {
        assert_eq!(x.prime(), self.p);
        self.elem(x.value(), 0)
    }

    pub fn zero(&self) -> Fp2Elem {
        self.elem(0, 0)
    }

    pub fn one(&self) -> Fp2Elem {
        self.elem(1, 0)
    }

    /// The generator `t`.
    pub fn t(&self) -> Fp2Elem {
        self.elem(0, 1)
    }

    pub fn order(&self) -> u64 {
        self.p.get() * self.p.get()
    }

    /// All `p^2` elements, ordered by `(c1, c0)`.
    pub fn elements(&self) -> impl Iterator<Item = Fp2Elem> + '_ {
        let q = self.p.get();
        (0..q).flat_map(move |c1| (0..q).map(move |c0| self.elem(c0, c1)))
    }
}

/// An element `c0 + c1 t` of F_{p^2}.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Fp2Elem {
    c0: u64,
    c1: u64,
    field: Fp2,
}

impl Fp2Elem {
    pub fn c0(&self) -> FpElem {
        FpElem::new(self.c0, self.field.p)
    }

    pub fn c1(&self) -> FpElem {
        FpElem::new(self.c1, self.field.p)
    }

    pub fn field(&self) -> Fp2 {
        self.field
    }

    pub fn is_zero(&self) -> bool {
        self.c0 == 0 && self.c1 == 0
    }

    pub fn in_base_field(&self) -> bool {
        self.c1 == 0
    }

    /// Whether the element lies in F_p \ {0}.
    pub fn in_base_units(&self) -> bool {
        self.c1 == 0 && self.c0 != 0
    }

    pub fn pow(self, mut e: u64) -> Self {
        let mut acc = self.field.one();
        let mut base = self;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            e >>= 1;
        }
        acc
    }

    /// `x^p`; on this basis it maps `c0 + c1 t` to `c0 - c1 t`.
    pub fn frobenius(self) -> Self {
        let p = self.field.p;
        Fp2Elem {
            c0: self.c0,
            c1: p.neg(self.c1),
            field: self.field,
        }
    }

    pub fn inv(self) -> Option<Self> {
        let p = self.field.p;
        // (c0 + c1 t)(c0 - c1 t) = c0^2 - n c1^2 lies in F_p
        let norm = p.sub(
            p.mul(self.c0, self.c0),
            p.mul(self.field.nonresidue, p.mul(self.c1, self.c1)),
        );
        let ninv = p.inv(norm)?;
        Some(Fp2Elem {
            c0: p.mul(self.c0, ninv),
            c1: p.mul(p.neg(self.c1), ninv),
            field: self.field,
        })
    }
}

impl Add for Fp2Elem {
    type Output = Fp2Elem;
    fn add(self, rhs: Self) -> Self {
        assert_eq!(self.field, rhs.field, "F_p^2 arithmetic across fields");
        let p = self.field.p;
        Fp2Elem {
            c0: p.add(self.c0, rhs.c0),
            c1: p.add(self.c1, rhs.c1),
            field: self.field,
        }
    }
}

impl Sub for Fp2Elem {
    type Output = Fp2Elem;
    fn sub(self, rhs: Self) -> Self {
        assert_eq!(self.field, rhs.field, "F_p^2 arithmetic across fields");
        let p = self.field.p;
        Fp2Elem {
            c0: p.sub(self.c0, rhs.c0),
            c1: p.sub(self.c1, rhs.c1),
            field: self.field,
        }
    }
}

impl Mul for Fp2Elem {
    type Output = Fp2Elem;
    fn mul(self, rhs: Self) -> Self {
        assert_eq!(self.field, rhs.field, "F_p^2 arithmetic across fields");
        let p = self.field.p;
        let n = self.field.nonresidue;
        let c0 = p.add(p.mul(self.c0, rhs.c0), p.mul(n, p.mul(self.c1, rhs.c1)));
        let c1 = p.add(p.mul(self.c0, rhs.c1), p.mul(self.c1, rhs.c0));
        Fp2Elem {
            c0,
            c1,
            field: self.field,
        }
    }
}

impl Div for Fp2Elem {
    type Output = Fp2Elem;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: Self) -> Self {
        self * rhs.inv().expect("F_p^2 division by zero")
    }
}

impl Neg for Fp2Elem {
    type Output = Fp2Elem;
    fn neg(self) -> Self {
        self.field.zero() - self
    }
}

impl fmt::Display for Fp2Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.c0, self.c1) {
            (c0, 0) => write!(f, "{c0}"),
            (0, 1) => write!(f, "t"),
            (0, c1) => write!(f, "{c1}*t"),
            (c0, 1) => write!(f, "{c0} + t"),
            (c0, c1) => write!(f, "{c0} + {c1}*t"),
        }
    }
}

impl Falling for Fp2Elem {
    fn prime(&self) -> Prime {
        self.field.p
    }
    fn one_like(&self) -> Self {
        self.field.one()
    }
    fn minus_int(&self, j: u64) -> Self {
        *self - self.field.elem(j, 0)
    }
    fn times(&self, rhs: &Self) -> Self {
        *self * *rhs
    }
    fn scale(&self, c: FpElem) -> Self {
        *self * self.field.embed(c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(q: u64) -> Prime {
        Prime::new(q).unwrap()
    }

    /// C(n, k) by exact integer arithmetic.
    fn int_binom(n: u64, k: u64) -> u128 {
        if k > n {
            return 0;
        }
        let mut acc: u128 = 1;
        for i in 0..k as u128 {
            acc = acc * (n as u128 - i) / (i + 1);
        }
        acc
    }

    #[test]
    fn primes_are_validated() {
        assert!(Prime::new(2).is_err());
        assert!(Prime::new(9).is_err());
        assert!(Prime::new(1).is_err());
        assert!(Prime::new(0).is_err());
        assert_eq!(Prime::new(31).unwrap().get(), 31);
    }

    #[test]
    fn lucas_examples() {
        assert_eq!(binom_lucas(3, 1, p(5)).value(), 3);
        assert_eq!(binom_lucas(7, 2, p(5)).value(), 1);
        assert_eq!(binom_lucas(10, 5, p(3)).value(), 0);
    }

    #[test]
    fn lucas_matches_integer_binomials() {
        for q in [3u64, 5, 7, 11] {
            for n in 0..60u64 {
                for k in 0..=n {
                    let expect = (int_binom(n, k) % q as u128) as u64;
                    assert_eq!(
                        binom_lucas(n, k, p(q)).value(),
                        expect,
                        "C({n},{k}) mod {q}"
                    );
                }
            }
        }
    }

    #[test]
    fn lucas_agrees_with_pochhammer_below_p() {
        for q in [3u64, 5, 7, 13] {
            let pr = p(q);
            for n in 0..q {
                for k in 0..=n {
                    let via_falling = binomial(&FpElem::new(n, pr), k as usize).unwrap();
                    assert_eq!(binom_lucas(n, k, pr), via_falling);
                }
            }
        }
    }

    #[test]
    fn pochhammer_scalars() {
        let x = FpElem::new(3, p(5));
        assert_eq!(pochhammer(&x, 0).value(), 1);
        assert_eq!(pochhammer(&x, 2).value(), 1);
    }

    #[test]
    fn binomial_rejects_large_index() {
        let x = FpElem::new(3, p(5));
        assert_eq!(
            binomial(&x, 5).unwrap_err(),
            Error::BinomialIndex { k: 5, p: 5 }
        );
    }

    #[test]
    fn binomials_incremental_matches_direct() {
        let x = FpElem::new(4, p(7));
        let seq = binomials(&x, 6).unwrap();
        for (k, v) in seq.iter().enumerate() {
            assert_eq!(*v, binomial(&x, k).unwrap());
        }
    }

    #[test]
    fn inverse_by_euclid() {
        let pr = p(13);
        for x in pr.units() {
            assert_eq!((x * x.inv().unwrap()).value(), 1);
        }
        assert!(FpElem::zero(pr).inv().is_none());
    }

    #[test]
    #[should_panic(expected = "across moduli")]
    fn mixed_moduli_panic() {
        let _ = FpElem::new(1, p(3)) + FpElem::new(1, p(5));
    }

    #[test]
    fn mixed_moduli_checked() {
        let e = FpElem::new(1, p(3)).checked_mul(FpElem::new(1, p(5)));
        assert_eq!(e.unwrap_err(), Error::ModulusMismatch { left: 3, right: 5 });
    }

    #[test]
    fn quadratic_extension_examples() {
        let f9 = Fp2::new(p(3));
        assert_eq!(f9.nonresidue().value(), 2);
        assert_eq!(f9.elements().count(), 9);
        assert_eq!(f9.t().frobenius(), f9.elem(0, 2));
        assert_eq!(f9.t().pow(3), f9.elem(0, 2));

        let f25 = Fp2::new(p(5));
        assert_eq!(f25.nonresidue().value(), 2);
        assert_eq!(f25.elements().count(), 25);
    }

    #[test]
    fn quadratic_extension_axioms() {
        for q in [3u64, 5, 7, 11] {
            let f = Fp2::new(p(q));
            assert!(f.minpoly_is_irreducible());
            let elems: Vec<_> = f.elements().collect();
            let mut fixed = 0;
            for &x in &elems {
                assert_eq!(x.pow(f.order()), x);
                assert_eq!(x.frobenius(), x.pow(q));
                if x.frobenius() == x {
                    fixed += 1;
                    assert!(x.in_base_field());
                }
                if !x.is_zero() {
                    assert_eq!(x * x.inv().unwrap(), f.one());
                }
            }
            assert_eq!(fixed, q);
            for &x in elems.iter().step_by(3) {
                for &y in elems.iter().step_by(5) {
                    for &z in elems.iter().step_by(7) {
                        assert_eq!(x * (y + z), x * y + x * z);
                        assert_eq!((x * y) * z, x * (y * z));
                    }
                }
            }
        }
    }
}

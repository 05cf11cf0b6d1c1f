//! Jacobi polynomials `P_{p-1}^{(A,B)}(x)` read modulo p, with parameters that
//! are polynomials in α and a fixed argument `x ∈ F_p`.

use crate::error::{check_range, Result};
use crate::fields::{binomials, FpElem, Prime};
use crate::polys::{FpPoly, Var};

/// Parameters `A(α)`, `B(α)` and argument x of `P_{p-1}^{(A,B)}(x)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JacobiSpec {
    pub p: Prime,
    pub a: FpPoly,
    pub b: FpPoly,
    pub x: FpElem,
}

impl JacobiSpec {
    pub fn new(p: Prime, a: FpPoly, b: FpPoly, x: FpElem) -> Self {
        JacobiSpec {
            p,
            a: a.with_var(Var::Alpha),
            b: b.with_var(Var::Alpha),
            x,
        }
    }

    /// `A = rα`, `B = sα`, `x = (s - r)/(s + r)`; requires `r + s ≢ 0`.
    pub fn for_b(p: Prime, r: u64, s: u64) -> Result<Self> {
        check_range("r", r, 1, p.get() - 1)?;
        check_range("s", s, 1, p.get() - 1)?;
        if r + s == p.get() {
            return Err(crate::Error::Hypothesis(
                "the b/Jacobi link requires r + s != p",
            ));
        }
        let (rf, sf) = (FpElem::new(r, p), FpElem::new(s, p));
        let x = (sf - rf) / (sf + rf);
        Ok(JacobiSpec::new(p, alpha_times(rf), alpha_times(sf), x))
    }

    /// The same spec with B replaced by `B + 1`.
    pub fn shift_b(&self) -> Self {
        let one = FpPoly::one(self.p, Var::Alpha);
        JacobiSpec {
            b: &self.b + &one,
            ..self.clone()
        }
    }
}

fn alpha_times(c: FpElem) -> FpPoly {
    FpPoly::linear(c, FpElem::zero(c.prime()), Var::Alpha)
}

/// `Σ_k C(A-1, p-1-k) C(B-1, k) (x+1)^{p-1-k} (x-1)^k`.
pub fn jacobi_pm1(spec: &JacobiSpec) -> FpPoly {
    let p = spec.p;
    let n = p.get() as usize;
    let one = FpPoly::one(p, Var::Alpha);
    let left = binomials(&(&spec.a - &one), n - 1).expect("below p");
    let right = binomials(&(&spec.b - &one), n - 1).expect("below p");
    let xp = spec.x + FpElem::one(p);
    let xm = spec.x - FpElem::one(p);
    (0..n).fold(FpPoly::zero(p, Var::Alpha), |acc, k| {
        let w = xp.pow((n - 1 - k) as u64) * xm.pow(k as u64);
        &acc + &(&left[n - 1 - k] * &right[k]).scale(w)
    })
}

/// `p P_p^{(A,B)}(x) ≡ ½(A - A^p)(x+1)^p + ½(B - B^p)(x-1)^p`.
pub fn p_times_jacobi_p(spec: &JacobiSpec) -> FpPoly {
    let p = spec.p;
    let q = p.get();
    let half = FpElem::new(2, p).inv().unwrap();
    let one = FpElem::one(p);
    let ta = (&spec.a - &spec.a.pow(q)).scale(half * (spec.x + one).pow(q));
    let tb = (&spec.b - &spec.b.pow(q)).scale(half * (spec.x - one).pow(q));
    &ta + &tb
}

/// `(A+B)(x+1)/2 · P^{(A,B+1)} - B · P^{(A,B)} - p P_p^{(A,B)}`, which vanishes
/// identically when reduced mod p.
pub fn jacobi_shift_residual(spec: &JacobiSpec) -> FpPoly {
    let half = FpElem::new(2, spec.p).inv().unwrap();
    let factor = (&spec.a + &spec.b).scale((spec.x + FpElem::one(spec.p)) * half);
    let lhs = &factor * &jacobi_pm1(&spec.shift_b());
    let rhs = &(&spec.b * &jacobi_pm1(spec)) + &p_times_jacobi_p(spec);
    &lhs - &rhs
}

/// The three polynomials of the reflection chain
/// `P^{(α, sα)}((s-1)/(s+1))`, `P^{(α, (-s-1)α + 1)}((s+2)/s)`, `P^{(α, (-s-1)α)}((s+2)/s)`
/// for `1 <= s <= p - 2`.
pub fn jacobi_reflection_chain(p: Prime, s: u64) -> Result<[FpPoly; 3]> {
    check_range("s", s, 1, p.get() - 2)?;
    let one = FpElem::one(p);
    let sf = FpElem::new(s, p);
    let a = alpha_times(one);
    let x0 = (sf - one) / (sf + one);
    let x1 = (sf + one + one) / sf;
    let reflected = alpha_times(-sf - one);
    let first = jacobi_pm1(&JacobiSpec::new(p, a.clone(), alpha_times(sf), x0));
    let second = jacobi_pm1(&JacobiSpec::new(
        p,
        a.clone(),
        &reflected + &FpPoly::one(p, Var::Alpha),
        x1,
    ));
    let third = jacobi_pm1(&JacobiSpec::new(p, a, reflected, x1));
    Ok([first, second, third])
}

/// Whether all three polynomials of the reflection chain coincide.
pub fn jacobi_reflection_check(p: Prime, s: u64) -> Result<bool> {
    let [a, b, c] = jacobi_reflection_chain(p, s)?;
    Ok(a == b && b == c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bpoly::{b1, b_rs, BPolyKey};

    fn pr(q: u64) -> Prime {
        Prime::new(q).unwrap()
    }

    fn odd_primes(max: u64) -> impl Iterator<Item = Prime> {
        (3..=max).filter_map(|q| Prime::new(q).ok())
    }

    #[test]
    fn link_to_b() {
        for p in odd_primes(13) {
            for r in 1..p.get() {
                for s in 1..p.get() {
                    if r + s == p.get() {
                        assert!(JacobiSpec::for_b(p, r, s).is_err());
                        continue;
                    }
                    let spec = JacobiSpec::for_b(p, r, s).unwrap();
                    let b = b_rs(BPolyKey::new(p, r, s).unwrap());
                    assert_eq!(jacobi_pm1(&spec), b, "p = {p}, r = {r}, s = {s}");
                    assert_eq!(jacobi_pm1(&spec.shift_b()), b);
                }
            }
        }
    }

    #[test]
    fn diagonal_example() {
        let p = pr(5);
        let spec = JacobiSpec::for_b(p, 1, 1).unwrap();
        assert!(spec.x.is_zero());
        assert_eq!(
            jacobi_pm1(&spec),
            FpPoly::from_i64(p, &[1, 1, 3], Var::Alpha)
        );
    }

    #[test]
    fn shift_residual_vanishes() {
        for p in odd_primes(13) {
            for r in 1..p.get() {
                for s in 1..p.get() {
                    if let Ok(spec) = JacobiSpec::for_b(p, r, s) {
                        assert!(
                            jacobi_shift_residual(&spec).is_zero(),
                            "p = {p}, r = {r}, s = {s}"
                        );
                    }
                }
            }
        }
        let p = pr(3);
        let spec = JacobiSpec::new(
            p,
            alpha_times(FpElem::one(p)),
            alpha_times(FpElem::one(p)),
            FpElem::zero(p),
        );
        assert!(jacobi_shift_residual(&spec).is_zero());
    }

    #[test]
    fn p_times_jacobi_p_examples() {
        let p = pr(7);
        let c = FpPoly::constant(FpElem::new(3, p), Var::Alpha);
        let a = alpha_times(FpElem::one(p));
        let spec = JacobiSpec::new(p, c.clone(), a.clone(), FpElem::new(2, p));
        let only_b = (&a - &a.pow(7)).scale(FpElem::new(2, p).inv().unwrap());
        assert_eq!(p_times_jacobi_p(&spec), only_b);
        let spec = JacobiSpec::new(p, a.clone(), a.clone(), FpElem::one(p));
        let expect =
            (&a - &a.pow(7)).scale(FpElem::new(2, p).inv().unwrap() * FpElem::new(2, p).pow(7));
        assert_eq!(p_times_jacobi_p(&spec), expect);
    }

    #[test]
    fn reflection_chain() {
        assert!(jacobi_reflection_check(pr(5), 2).unwrap());
        assert!(jacobi_reflection_check(pr(7), 2).unwrap());
        assert_eq!(
            jacobi_reflection_chain(pr(7), 2).unwrap()[0],
            *b1(pr(7), 4).unwrap()
        );
        assert!(jacobi_reflection_check(pr(5), 4).is_err());
        for p in odd_primes(17) {
            for s in 1..p.get() - 1 {
                let chain = jacobi_reflection_chain(p, s).unwrap();
                assert!(jacobi_reflection_check(p, s).unwrap(), "p = {p}, s = {s}");
                assert_eq!(chain[2], *b1(p, p.get() - 1 - s).unwrap());
            }
        }
    }

    /// Exact rational evaluation of the classical `2^{-n} Σ C(a+n, n-k) C(b+n, k)
    /// (x+1)^{n-k} (x-1)^k` at integers, reduced mod p.
    fn classical(p: u64, a: i128, b: i128, x: i128) -> u64 {
        fn binom(n: i128, k: i128) -> i128 {
            (0..k).fold(1i128, |acc, i| acc * (n - i) / (i + 1))
        }
        let n = (p - 1) as i128;
        let sum: i128 = (0..=n)
            .map(|k| {
                binom(a + n, n - k)
                    * binom(b + n, k)
                    * (x + 1).pow((n - k) as u32)
                    * (x - 1).pow(k as u32)
            })
            .sum();
        let q = p as i128;
        let two_n_inv = (0..n).fold(1i128, |acc, _| acc * ((q + 1) / 2) % q);
        ((sum.rem_euclid(q) * two_n_inv) % q) as u64
    }

    #[test]
    fn constant_parameters_match_classical_values() {
        for q in [3u64, 5, 7, 11, 13] {
            let p = pr(q);
            for a in 0..q as i128 {
                for b in 0..q as i128 {
                    for x in 0..q as i128 {
                        let spec = JacobiSpec::new(
                            p,
                            FpPoly::constant(FpElem::new(a as u64, p), Var::Alpha),
                            FpPoly::constant(FpElem::new(b as u64, p), Var::Alpha),
                            FpElem::new(x as u64, p),
                        );
                        let got = jacobi_pm1(&spec).constant_term().value();
                        assert_eq!(
                            got,
                            classical(q, a, b, x),
                            "p = {q}, a = {a}, b = {b}, x = {x}"
                        );
                    }
                }
            }
        }
    }
}

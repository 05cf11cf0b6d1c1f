//! One exhaustive checker per identity, each producing a [`VerifyReport`].
//!
//! Checkers read the objects under test from a [`Fixtures`] value so that a
//! perturbed copy of L, G or a b-polynomial can be fed through the same code.

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Serialize, Serializer};

use crate::bpoly::{
    b1, b11_product, b12_product, b_half_binomial, b_root_lucas, b_roots_predicted, b_rr_binomial,
    b_rs, b_rs_alt, b_rs_coeff, product_all_b_closed, BPolyKey,
};
use crate::error::{Error, Result};
use crate::fields::{binom_lucas, Fp2, Fp2Elem, FpElem, Prime};
use crate::glog::{glog_unchecked, reciprocal_rhs_from, GLog};
use crate::jacobi::{jacobi_pm1, jacobi_reflection_chain, jacobi_shift_residual, JacobiSpec};
use crate::polys::{FpPoly, RatFn, Var};
use crate::quotient::{compose_mod, mulmod, powmod, XPoly};
use crate::special::{
    alpha_p_minus_alpha, eval_at_frobenius_shift, finite_polylog, laguerre_const_by_substitution,
    laguerre_const_product, laguerre_pm1, one_minus_alpha_pm1, substitute_scaled, trunc_binomial,
    truncated_exp,
};

macro_rules! theorem_ids {
    ($($name:ident),* $(,)?) => {
        /// The checked identities, in the order [`verify_all`] runs them.
        #[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
        pub enum TheoremId {
            $($name),*
        }

        impl TheoremId {
            pub const ALL: &'static [TheoremId] = &[$(TheoremId::$name),*];

            pub fn name(self) -> &'static str {
                match self {
                    $(TheoremId::$name => stringify!($name)),*
                }
            }
        }
    };
}

theorem_ids!(
    LeftInverse,
    RightInverse,
    LemmaProduct,
    PowerFormula,
    BConjugate,
    RootsTheorem,
    LucasCriterion,
    Symmetry,
    ProductFormula,
    LFactorization,
    Reciprocal,
    PowersFunctional,
    PowersHEqualsPMinus1,
    PolylogShift,
    PolylogWilson,
    SixSymmetries,
    FourTerm,
    TruncBinomialRules,
    BAltAgreement,
    JacobiLink,
    JacobiShift,
    JacobiReflection,
    CCoefficients,
);

impl fmt::Display for TheoremId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for TheoremId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        TheoremId::ALL
            .iter()
            .copied()
            .find(|id| id.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::UnknownTheorem(s.to_string()))
    }
}

impl Serialize for TheoremId {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    Skipped { reason: String },
}

impl Status {
    pub fn as_str(&self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Skipped { .. } => "skipped",
        }
    }
}

impl Serialize for Status {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

/// The first failing case of a checker, with both sides rendered.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub case: String,
    pub lhs: String,
    pub rhs: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifyReport {
    pub theorem: TheoremId,
    pub prime: u64,
    pub cases: u64,
    pub status: Status,
    pub witness: Option<Witness>,
    /// Extra observations that are reported but not asserted.
    pub note: Option<String>,
    pub elapsed: Duration,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn failed(&self) -> bool {
        self.status == Status::Fail
    }
}

impl Serialize for VerifyReport {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Json<'a> {
            prime: u64,
            theorem: TheoremId,
            cases: u64,
            status: &'a Status,
            witness: &'a Option<Witness>,
            elapsed_ms: u64,
        }
        Json {
            prime: self.prime,
            theorem: self.theorem,
            cases: self.cases,
            status: &self.status,
            witness: &self.witness,
            elapsed_ms: self.elapsed.as_millis() as u64,
        }
        .serialize(s)
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "p={} {} {} cases={} ({} ms)",
            self.prime,
            self.theorem,
            self.status.as_str(),
            self.cases,
            self.elapsed.as_millis()
        )?;
        if let Status::Skipped { reason } = &self.status {
            write!(f, " reason: {reason}")?;
        }
        if let Some(n) = &self.note {
            write!(f, " [{n}]")?;
        }
        if let Some(w) = &self.witness {
            write!(
                f,
                "\n  case: {}\n  lhs:  {}\n  rhs:  {}",
                w.case, w.lhs, w.rhs
            )?;
        }
        Ok(())
    }
}

/// The objects the checkers test.
#[derive(Debug, Clone)]
pub struct Fixtures {
    pub p: Prime,
    /// `L_{p-1}^{(α)}(X)`.
    pub laguerre: XPoly,
    /// `G^{(α)}(X)`.
    pub glog: GLog,
    /// `b_{1,s}(α)` at index `s - 1`, for `1 <= s <= p - 2`.
    pub b1: Vec<FpPoly>,
    /// `L_{p-1}^{(α^p)}(α^p - α)`.
    pub lconst: FpPoly,
}

impl Fixtures {
    pub fn new(p: Prime) -> Self {
        Fixtures {
            p,
            laguerre: laguerre_pm1(p),
            glog: glog_unchecked(p),
            b1: (1..p.get() - 1)
                .map(|s| (*b1(p, s).expect("s in range")).clone())
                .collect(),
            lconst: laguerre_const_by_substitution(p),
        }
    }

    fn b(&self, s: u64) -> &FpPoly {
        &self.b1[s as usize - 1]
    }

    /// `Π_{s<k} b_{1,s}`.
    fn prefix(&self, k: u64) -> FpPoly {
        (1..k).fold(FpPoly::one(self.p, Var::Alpha), |acc, s| &acc * self.b(s))
    }

    /// `b_{r,s}(α) = b_{1,s/r}(rα)`, zero on the diagonal.
    fn b_rs(&self, r: u64, s: u64) -> FpPoly {
        let (rf, sf) = (FpElem::new(r, self.p), FpElem::new(s, self.p));
        let t = (sf / rf).value();
        if t == self.p.get() - 1 {
            FpPoly::zero(self.p, Var::Alpha)
        } else {
            self.b(t).scale_var(rf)
        }
    }
}

/// How many `(α̃, β̃)` pairs the c_i check examines.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PairBudget {
    Exhaustive,
    Random { count: u64, seed: u64 },
}

impl PairBudget {
    /// Exhaustive for `p <= 5`, otherwise 200 pairs drawn with seed 0.
    pub fn default_for(p: Prime) -> Self {
        if p.get() <= 5 {
            PairBudget::Exhaustive
        } else {
            PairBudget::Random {
                count: 200,
                seed: 0,
            }
        }
    }
}

/// Number of pairs in `F_{p^2}^2` whose sum is outside F_p*.
pub fn valid_pair_count(p: Prime) -> u64 {
    let q = p.get();
    q * q * (q * q - q + 1)
}

/// The case count a passing report carries, with the default pair budget.
pub fn expected_cases(p: Prime, id: TheoremId) -> u64 {
    use TheoremId::*;
    let q = p.get();
    match id {
        LeftInverse => 2,
        RightInverse | LFactorization | Reciprocal | PowersHEqualsPMinus1 | PolylogWilson
        | FourTerm => 1,
        LemmaProduct => (q - 1) * (q - 1),
        PowerFormula | PowersFunctional => q - 1,
        BConjugate | Symmetry | JacobiReflection => q - 2,
        RootsTheorem | LucasCriterion => (q - 2) * (q - 1),
        ProductFormula => 2 + (q - 1),
        PolylogShift => 3,
        SixSymmetries => 5,
        TruncBinomialRules => (q - 1) * (q - 1) + 2 * (q - 1),
        BAltAgreement => 3 * (q - 1) * (q - 1) + (q - 1) + 2 + u64::from(q >= 5),
        JacobiLink | JacobiShift => 2 * (q - 1) * (q - 2),
        CCoefficients => match PairBudget::default_for(p) {
            PairBudget::Exhaustive => valid_pair_count(p),
            PairBudget::Random { count, .. } => count,
        },
    }
}

/// Case tally and first failure.
struct Run {
    cases: u64,
    witness: Option<Witness>,
}

impl Run {
    fn new() -> Self {
        Run {
            cases: 0,
            witness: None,
        }
    }

    fn check<T: PartialEq + fmt::Display>(
        &mut self,
        case: impl FnOnce() -> String,
        lhs: &T,
        rhs: &T,
    ) {
        self.cases += 1;
        if self.witness.is_none() && lhs != rhs {
            self.witness = Some(Witness {
                case: case(),
                lhs: lhs.to_string(),
                rhs: rhs.to_string(),
            });
        }
    }

    /// Records a case whose left side could not be computed.
    fn check_result<T: PartialEq + fmt::Display>(
        &mut self,
        case: impl FnOnce() -> String,
        lhs: Result<T>,
        rhs: &T,
    ) {
        match lhs {
            Ok(v) => self.check(case, &v, rhs),
            Err(e) => {
                self.cases += 1;
                if self.witness.is_none() {
                    self.witness = Some(Witness {
                        case: case(),
                        lhs: format!("error: {e}"),
                        rhs: rhs.to_string(),
                    });
                }
            }
        }
    }

    fn finish(self, id: TheoremId, p: Prime, start: Instant) -> VerifyReport {
        VerifyReport {
            theorem: id,
            prime: p.get(),
            cases: self.cases,
            status: if self.witness.is_some() {
                Status::Fail
            } else {
                Status::Pass
            },
            witness: self.witness,
            note: None,
            elapsed: start.elapsed(),
        }
    }
}

/// Checks one identity at p against freshly built fixtures.
pub fn verify_theorem(p: Prime, id: TheoremId) -> VerifyReport {
    verify_with(&Fixtures::new(p), id)
}

/// Every identity at p in [`TheoremId::ALL`] order.
pub fn verify_all(p: Prime) -> Vec<VerifyReport> {
    let fx = Fixtures::new(p);
    TheoremId::ALL
        .iter()
        .map(|&id| verify_with(&fx, id))
        .collect()
}

/// Checks one identity against the given fixtures.
pub fn verify_with(fx: &Fixtures, id: TheoremId) -> VerifyReport {
    use TheoremId::*;
    let start = Instant::now();
    let p = fx.p;
    if id == CCoefficients {
        return c_coefficients(fx, PairBudget::default_for(p), start);
    }
    let mut run = Run::new();
    match id {
        LeftInverse => left_inverse(fx, &mut run),
        RightInverse => right_inverse(fx, &mut run),
        LemmaProduct => lemma_product(fx, &mut run),
        PowerFormula => power_formula(fx, &mut run),
        BConjugate => b_conjugate(fx, &mut run),
        RootsTheorem => roots_theorem(fx, &mut run),
        LucasCriterion => lucas_criterion(fx, &mut run),
        Symmetry => symmetry(fx, &mut run),
        ProductFormula => product_formula(fx, &mut run),
        LFactorization => l_factorization(fx, &mut run),
        Reciprocal => reciprocal(fx, &mut run),
        PowersFunctional => powers_functional(fx, &mut run),
        PowersHEqualsPMinus1 => powers_p_minus_1(fx, &mut run),
        PolylogShift => polylog_shift(p, &mut run),
        PolylogWilson => polylog_wilson(p, &mut run),
        SixSymmetries => six_symmetries(p, &mut run),
        FourTerm => four_term(p, &mut run),
        TruncBinomialRules => trunc_binomial_rules(p, &mut run),
        BAltAgreement => b_alt_agreement(fx, &mut run),
        JacobiLink => jacobi_link(fx, &mut run),
        JacobiShift => jacobi_shift(p, &mut run),
        JacobiReflection => jacobi_reflection(fx, &mut run),
        CCoefficients => unreachable!(),
    }
    run.finish(id, p, start)
}

fn ratfn(f: FpPoly) -> RatFn {
    RatFn::from_poly(f)
}

fn left_inverse(fx: &Fixtures, run: &mut Run) {
    let p = fx.p;
    let c = ratfn(alpha_p_minus_alpha(p));
    let lhs = compose_mod(&fx.glog.to_xpoly(), &fx.laguerre, &c).map(XPoly::without_modulus);
    run.check_result(|| "G(L(X)) mod X^p - (a^p - a)".into(), lhs, &XPoly::x(p));
    let at_zero = fx.glog.specialize(FpElem::zero(p));
    run.check_result(|| "G at a = 0".into(), at_zero, &-&finite_polylog(p, 1));
}

fn right_inverse(fx: &Fixtures, run: &mut Run) {
    let c = ratfn(fx.lconst.clone());
    let lhs = compose_mod(&fx.laguerre, &fx.glog.to_xpoly(), &c).map(XPoly::without_modulus);
    run.check_result(|| "L(G(X)) mod X^p - Lconst".into(), lhs, &XPoly::x(fx.p));
}

fn lemma_product(fx: &Fixtures, run: &mut Run) {
    let p = fx.p;
    let q = p.get();
    let c = ratfn(alpha_p_minus_alpha(p));
    let scaled: Vec<XPoly> = (1..q)
        .map(|r| substitute_scaled(&fx.laguerre, FpElem::new(r, p)).with_modulus(c.clone()))
        .collect();
    let diagonal = XPoly::constant(ratfn(one_minus_alpha_pm1(p))).with_modulus(c.clone());
    for r in 1..q {
        for s in 1..q {
            let lhs = mulmod(&scaled[r as usize - 1], &scaled[s as usize - 1]);
            let rhs = if r + s == q {
                diagonal.clone()
            } else {
                let t = (r + s) % q;
                scaled[t as usize - 1].scale(&ratfn(fx.b_rs(r, s)))
            };
            run.check_result(|| format!("r={r}, s={s}"), lhs, &rhs);
        }
    }
}

fn power_formula(fx: &Fixtures, run: &mut Run) {
    let p = fx.p;
    let c = ratfn(alpha_p_minus_alpha(p));
    let l = fx.laguerre.clone().with_modulus(c.clone());
    for j in 1..p.get() {
        let lhs = powmod(&l, j);
        let rhs = substitute_scaled(&fx.laguerre, FpElem::new(j, p))
            .scale(&ratfn(fx.prefix(j)))
            .with_modulus(c.clone());
        run.check_result(|| format!("j={j}"), lhs, &rhs);
    }
}

fn b_conjugate(fx: &Fixtures, run: &mut Run) {
    let p = fx.p;
    let target = one_minus_alpha_pm1(p);
    for s in 1..p.get() - 1 {
        let b = fx.b(s);
        run.check(
            || format!("s={s}"),
            &(b * &b.scale_var(-FpElem::one(p))),
            &target,
        );
    }
}

fn is_root(fx: &Fixtures, s: u64, a: u64) -> bool {
    fx.b(s).eval(FpElem::new(a, fx.p)).is_zero()
}

fn roots_theorem(fx: &Fixtures, run: &mut Run) {
    let p = fx.p;
    for s in 1..p.get() - 1 {
        let predicted = b_roots_predicted(p, s).expect("s in range");
        for a in 1..p.get() {
            let want = predicted.iter().any(|x| x.value() == a);
            run.check(
                || format!("s={s}, a={a}: b(a) = 0 vs a + (sa mod p) < p"),
                &is_root(fx, s, a),
                &want,
            );
        }
    }
}

fn lucas_criterion(fx: &Fixtures, run: &mut Run) {
    let p = fx.p;
    for s in 1..p.get() - 1 {
        for a in 1..p.get() {
            let want = b_root_lucas(p, s, a).expect("in range");
            run.check(
                || format!("s={s}, a={a}: b(a) = 0 vs p does not divide C(a+sa, a)"),
                &is_root(fx, s, a),
                &want,
            );
        }
    }
}

fn symmetry(fx: &Fixtures, run: &mut Run) {
    let q = fx.p.get();
    for s in 1..q - 1 {
        run.check(
            || format!("s={s}: b_(1,s) vs b_(1,p-1-s)"),
            fx.b(s),
            fx.b(q - 1 - s),
        );
    }
}

fn product_formula(fx: &Fixtures, run: &mut Run) {
    let p = fx.p;
    let q = p.get();
    let prod = fx.prefix(q - 1);
    run.check(
        || "product of b_(1,s) vs prod (1 + a/k)^(k-1)".into(),
        &prod,
        &product_all_b_closed(p),
    );
    run.check(
        || "product of b_(1,s) times (1 - a^(p-1)) vs Lconst".into(),
        &(&prod * &one_minus_alpha_pm1(p)),
        &fx.lconst,
    );
    let split = prod.roots_and_split();
    for a in 1..q {
        let got = match &split {
            Ok(sp) => sp.multiplicity(FpElem::new(a, p)) as u64,
            Err(_) => u64::MAX,
        };
        run.check(|| format!("multiplicity of root a={a}"), &got, &(q - a - 1));
    }
}

fn l_factorization(fx: &Fixtures, run: &mut Run) {
    let p = fx.p;
    let lhs = eval_at_frobenius_shift(&fx.laguerre);
    run.check_result(
        || "L^(a^p)(a^p - a) vs prod (1 + a/k)^k".into(),
        lhs,
        &ratfn(laguerre_const_product(p)),
    );
}

fn reciprocal(fx: &Fixtures, run: &mut Run) {
    let lhs = fx.glog.to_xpoly().scale(&ratfn(fx.lconst.clone()));
    run.check(
        || "Lconst * G(X) vs -X^p G^(-a)((1 - a^(p-1))/X)".into(),
        &lhs,
        &reciprocal_rhs_from(&fx.glog),
    );
}

fn powers_functional(fx: &Fixtures, run: &mut Run) {
    let p = fx.p;
    let c = ratfn(fx.lconst.clone());
    let g = fx.glog.to_xpoly();
    for h in 1..p.get() {
        let hf = FpElem::new(h, p);
        let outer = fx.glog.substitute_alpha(hf).to_xpoly();
        let inner = RatFn::new(FpPoly::one(p, Var::Alpha), fx.prefix(h))
            .and_then(|d| XPoly::monomial(d, h as usize));
        let lhs = inner
            .and_then(|inner| compose_mod(&outer, &inner, &c))
            .map(XPoly::without_modulus);
        let rhs = g.scale(&RatFn::constant(hf, Var::Alpha));
        run.check_result(|| format!("h={h}"), lhs, &rhs);
    }
}

fn powers_p_minus_1(fx: &Fixtures, run: &mut Run) {
    let p = fx.p;
    let q = p.get() as usize;
    let c = ratfn(fx.lconst.clone());
    let outer = fx.glog.substitute_alpha(-FpElem::one(p)).to_xpoly();
    let lhs = RatFn::new(one_minus_alpha_pm1(p), fx.lconst.clone())
        .and_then(|k| XPoly::monomial(k, q - 1))
        .and_then(|inner| compose_mod(&outer, &inner, &c))
        .map(XPoly::without_modulus);
    run.check_result(
        || "G^(-a)(X^(p-1) (1 - a^(p-1)) / Lconst)".into(),
        lhs,
        &-&fx.glog.to_xpoly(),
    );
}

fn x_ratfn(p: Prime, num: &[i64], den: &[i64]) -> RatFn {
    RatFn::new(
        FpPoly::from_i64(p, num, Var::X),
        FpPoly::from_i64(p, den, Var::X),
    )
    .expect("nonzero")
}

fn polylog_shift(p: Prime, run: &mut Run) {
    let l1 = finite_polylog(p, 1);
    let one_minus_x = FpPoly::from_i64(p, &[1, -1], Var::X);
    run.check(
        || "L1(1 - X) vs L1(X)".into(),
        &l1.compose(&one_minus_x),
        &l1,
    );
    let e = truncated_exp(p);
    let x = FpPoly::var(p, Var::X);
    let trunc =
        |f: FpPoly| FpPoly::from_elems(p, &f.coeffs()[..f.len().min(p.get() as usize)], Var::X);
    run.check(|| "-L1(E(X)) mod X^p".into(), &trunc(-&l1.compose(&e)), &x);
    let one_minus_e = &FpPoly::one(p, Var::X) - &e;
    run.check(
        || "-L1(1 - E(X)) mod X^p".into(),
        &trunc(-&l1.compose(&one_minus_e)),
        &x,
    );
}

fn polylog_wilson(p: Prime, run: &mut Run) {
    let l1 = finite_polylog(p, 1);
    let prefactor = ratfn(-&FpPoly::var(p, Var::X).pow(p.get()));
    let rhs = &l1.eval_ratfn(&x_ratfn(p, &[1], &[0, 1])) * &prefactor;
    run.check(|| "-X^p L1(1/X)".into(), &rhs, &ratfn(l1.clone()));
}

fn six_symmetries(p: Prime, run: &mut Run) {
    let q = p.get();
    let l1 = finite_polylog(p, 1);
    let target = ratfn(l1.clone());
    let x_minus_1_p = ratfn(FpPoly::from_i64(p, &[-1, 1], Var::X).pow(q));
    let minus_x_p = ratfn(-&FpPoly::var(p, Var::X).pow(q));
    let one = ratfn(FpPoly::one(p, Var::X));
    let forms: [(&str, RatFn, RatFn); 5] = [
        ("L1(1 - X)", one.clone(), x_ratfn(p, &[1, -1], &[1])),
        (
            "(X - 1)^p L1(1/(1 - X))",
            x_minus_1_p.clone(),
            x_ratfn(p, &[1], &[1, -1]),
        ),
        (
            "(X - 1)^p L1(X/(X - 1))",
            x_minus_1_p,
            x_ratfn(p, &[0, 1], &[-1, 1]),
        ),
        (
            "-X^p L1((X - 1)/X)",
            minus_x_p.clone(),
            x_ratfn(p, &[-1, 1], &[0, 1]),
        ),
        ("-X^p L1(1/X)", minus_x_p, x_ratfn(p, &[1], &[0, 1])),
    ];
    for (label, prefactor, arg) in forms {
        let v = &prefactor * &l1.eval_ratfn(&arg);
        run.check(|| label.to_string(), &v, &target);
    }
}

/// Dense `Σ c[i][j] X^i Y^j` with `i, j <= p`.
struct BiPoly {
    c: Vec<Vec<FpElem>>,
}

impl BiPoly {
    fn new(p: Prime) -> Self {
        let n = p.get() as usize + 1;
        BiPoly {
            c: vec![vec![FpElem::zero(p); n]; n],
        }
    }

    fn add(&mut self, i: usize, j: usize, v: FpElem) {
        self.c[i][j] = self.c[i][j] + v;
    }

    fn first_nonzero(&self) -> Option<(usize, usize, FpElem)> {
        self.c
            .iter()
            .enumerate()
            .flat_map(|(i, row)| row.iter().enumerate().map(move |(j, &v)| (i, j, v)))
            .find(|(_, _, v)| !v.is_zero())
    }
}

fn four_term(p: Prime, run: &mut Run) {
    let q = p.get() as usize;
    let mut f = BiPoly::new(p);
    let signed_binom = |n: usize, k: usize| {
        let b = binom_lucas(n as u64, k as u64, p);
        if k.is_multiple_of(2) {
            b
        } else {
            -b
        }
    };
    for k in 1..q {
        let inv = FpElem::new(k as u64, p).inv().unwrap();
        // L1(X) - L1(Y)
        f.add(k, 0, inv);
        f.add(0, k, -inv);
        // X^p L1(Y/X)
        f.add(q - k, k, inv);
        // (1 - X)^p L1((1 - Y)/(1 - X)) = Σ (1 - Y)^k (1 - X)^(p-k) / k
        for i in 0..=q - k {
            for j in 0..=k {
                f.add(i, j, inv * signed_binom(q - k, i) * signed_binom(k, j));
            }
        }
    }
    let zero = "0".to_string();
    match f.first_nonzero() {
        None => run.check(String::new, &zero, &zero),
        Some((i, j, v)) => run.check(
            || "L1(X) - L1(Y) + X^p L1(Y/X) + (1-X)^p L1((1-Y)/(1-X))".into(),
            &format!("{v}*X^{i}*Y^{j} + ..."),
            &zero,
        ),
    }
}

fn trunc_binomial_rules(p: Prime, run: &mut Run) {
    let q = p.get();
    let n = q as usize;
    let one = RatFn::one(p, Var::Alpha);
    let poly_exps: Vec<RatFn> = (1..q)
        .map(|i| {
            ratfn(FpPoly::linear(
                FpElem::new(i, p),
                -FpElem::one(p),
                Var::Alpha,
            ))
        })
        .collect();
    let frac_exps: Vec<RatFn> = (1..q)
        .map(|i| {
            RatFn::new(
                FpPoly::one(p, Var::Alpha),
                FpPoly::linear(FpElem::one(p), FpElem::new(i, p), Var::Alpha),
            )
            .expect("nonzero")
        })
        .collect();
    let series: Vec<XPoly> = poly_exps.iter().map(|f| trunc_binomial(f, &one)).collect();
    for i in 0..n - 1 {
        for j in 0..n - 1 {
            let full = series[i].full_product(&series[j]);
            let lhs = XPoly::from_coeffs(p, full[..n].to_vec()).expect("degree below p");
            let rhs = trunc_binomial(&(&poly_exps[i] + &poly_exps[j]), &one);
            run.check(
                || {
                    format!(
                        "product rule, exponents {} and {}",
                        poly_exps[i], poly_exps[j]
                    )
                },
                &lhs,
                &rhs,
            );
        }
    }
    for f in poly_exps.iter().chain(frac_exps.iter()) {
        let lhs = trunc_binomial(f, &one).derivative_x();
        let defect = XPoly::monomial(&f.pow(q) - f, n - 1).expect("degree below p");
        let rhs = &trunc_binomial(&(f - &one), &one).scale(f) + &defect;
        run.check(|| format!("derivative rule, exponent {f}"), &lhs, &rhs);
    }
}

fn b_alt_agreement(fx: &Fixtures, run: &mut Run) {
    let p = fx.p;
    let q = p.get();
    for r in 1..q {
        for s in 1..q {
            let key = BPolyKey::new(p, r, s).expect("in range");
            let b = fx.b_rs(r, s);
            run.check(|| format!("r={r}, s={s}: defining sum"), &b_rs(key), &b);
            run.check(
                || format!("r={r}, s={s}: coefficient of X^(p-1)"),
                &b_rs_coeff(key),
                &b,
            );
            if key.is_degenerate() {
                let rejected = b_rs_alt(key).is_err();
                run.check(
                    || format!("r={r}, s={s}: alternate sum rejected"),
                    &rejected,
                    &true,
                );
            } else {
                run.check_result(|| format!("r={r}, s={s}: alternate sum"), b_rs_alt(key), &b);
            }
        }
    }
    for r in 1..q {
        let key = BPolyKey::new(p, r, r).expect("in range");
        run.check_result(
            || format!("r={r}: coefficient form vs (-1)^((p-1)/2) C(ra-1, (p-1)/2)"),
            b_rr_binomial(p, r),
            &b_rs_coeff(key),
        );
    }
    run.check(
        || "b_(1,1) vs prod_(a <= (p-1)/2) (1 - a/a)".into(),
        fx.b(1),
        &b11_product(p),
    );
    run.check(
        || "b_(1,(p-1)/2) vs C((a-1)/2, (p-1)/2)".into(),
        fx.b((q - 1) / 2),
        &b_half_binomial(p),
    );
    if q >= 5 {
        run.check(
            || "b_(1,2) vs two-interval product".into(),
            fx.b(2),
            &b12_product(p),
        );
    }
}

fn jacobi_link(fx: &Fixtures, run: &mut Run) {
    let p = fx.p;
    let q = p.get();
    for r in 1..q {
        for s in 1..q {
            if r + s == q {
                continue;
            }
            let spec = JacobiSpec::for_b(p, r, s).expect("off the diagonal");
            let b = fx.b_rs(r, s);
            run.check(
                || format!("r={r}, s={s}: P^(ra,sa)"),
                &jacobi_pm1(&spec),
                &b,
            );
            run.check(
                || format!("r={r}, s={s}: P^(ra,sa+1)"),
                &jacobi_pm1(&spec.shift_b()),
                &b,
            );
        }
    }
}

fn jacobi_shift(p: Prime, run: &mut Run) {
    let q = p.get();
    let zero = FpPoly::zero(p, Var::Alpha);
    for r in 1..q {
        for s in 1..q {
            if r + s == q {
                continue;
            }
            let spec = JacobiSpec::for_b(p, r, s).expect("off the diagonal");
            run.check(
                || format!("r={r}, s={s}: B = sa"),
                &jacobi_shift_residual(&spec),
                &zero,
            );
            run.check(
                || format!("r={r}, s={s}: B = sa + 1"),
                &jacobi_shift_residual(&spec.shift_b()),
                &zero,
            );
        }
    }
}

fn jacobi_reflection(fx: &Fixtures, run: &mut Run) {
    let q = fx.p.get();
    for s in 1..q - 1 {
        let case = || {
            format!("s={s}: P^(a,sa)((s-1)/(s+1)), P^(a,(-s-1)a+1)((s+2)/s), P^(a,(-s-1)a)((s+2)/s), b_(1,s)")
        };
        match jacobi_reflection_chain(fx.p, s) {
            Ok([x, y, z]) => {
                let lhs = format!("{x} | {y} | {z}");
                let b = fx.b(s);
                let rhs = format!("{b} | {b} | {b}");
                run.check(case, &lhs, &rhs);
            }
            Err(e) => run.check_result::<String>(case, Err(e), &String::new()),
        }
    }
}

fn eval_fp2(f: &FpPoly, x: Fp2Elem) -> Fp2Elem {
    let field = x.field();
    f.coeffs()
        .iter()
        .rev()
        .fold(field.zero(), |acc, &c| acc * x + field.embed(c))
}

/// `L^{(a)}(X)` coefficients at a point of F_{p^2}.
fn laguerre_at(l: &XPoly, a: Fp2Elem) -> Vec<Fp2Elem> {
    l.coeffs()
        .iter()
        .map(|c| eval_fp2(c.num(), a) / eval_fp2(c.den(), a))
        .collect()
}

fn binom_table(n: usize, p: Prime) -> Vec<Vec<FpElem>> {
    (0..n)
        .map(|a| (0..n).map(|b| binom_lucas(a as u64, b as u64, p)).collect())
        .collect()
}

/// Outcome of the c_i linear solve at one pair.
struct PairSolve {
    solution: Option<Vec<Fp2Elem>>,
    unique: bool,
    grids: Vec<Vec<Fp2Elem>>,
    target: Vec<Fp2Elem>,
}

/// Solves `Σ_i c_i M_i = P` where `P` is the grid of `L^(α̃)(X) L^(β̃)(Y)` and
/// `M_i` that of `L^(α̃+β̃)(X+Y) X^i Y^(p-i)` (with `M_0` unshifted), both
/// modulo `X^p - u, Y^p - v`.
fn solve_pair(l: &XPoly, a: Fp2Elem, b: Fp2Elem, binoms: &[Vec<FpElem>]) -> PairSolve {
    let field = a.field();
    let n = field.prime().get() as usize;
    let la = laguerre_at(l, a);
    let lb = laguerre_at(l, b);
    let ls = laguerre_at(l, a + b);
    let q = n as u64;
    let u = a.pow(q) - a;
    let v = b.pow(q) - b;
    let mut target = vec![field.zero(); n * n];
    for i in 0..n {
        for j in 0..n {
            target[i * n + j] = la[i] * lb[j];
        }
    }
    // L^(σ)(X + Y) = Σ_k l_k Σ_i C(k, i) X^i Y^(k-i)
    let mut m0 = vec![field.zero(); n * n];
    for (k, &lk) in ls.iter().enumerate() {
        for i in 0..=k {
            m0[i * n + (k - i)] = m0[i * n + (k - i)] + lk * field.embed(binoms[k][i]);
        }
    }
    let mut grids = vec![m0.clone()];
    for shift in 1..n {
        let mut g = vec![field.zero(); n * n];
        for i in 0..n {
            for j in 0..n {
                let c = m0[i * n + j];
                if c.is_zero() {
                    continue;
                }
                let (mut xi, mut yj, mut w) = (i + shift, j + n - shift, c);
                if xi >= n {
                    xi -= n;
                    w = w * u;
                }
                if yj >= n {
                    yj -= n;
                    w = w * v;
                }
                g[xi * n + yj] = g[xi * n + yj] + w;
            }
        }
        grids.push(g);
    }
    let (solution, unique) = gauss(&grids, &target, field);
    PairSolve {
        solution,
        unique,
        grids,
        target,
    }
}

/// Least-squares-free exact solve of `Σ_i x_i cols[i] = rhs` over F_{p^2};
/// returns one solution (free variables set to zero) and whether it is unique.
fn gauss(cols: &[Vec<Fp2Elem>], rhs: &[Fp2Elem], field: Fp2) -> (Option<Vec<Fp2Elem>>, bool) {
    let unknowns = cols.len();
    let rows = rhs.len();
    let mut m: Vec<Vec<Fp2Elem>> = (0..rows)
        .map(|r| {
            let mut row: Vec<Fp2Elem> = cols.iter().map(|c| c[r]).collect();
            row.push(rhs[r]);
            row
        })
        .collect();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..unknowns {
        let Some(pr) = (row..rows).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(row, pr);
        let inv = m[row][col].inv().expect("nonzero pivot");
        for x in m[row].iter_mut() {
            *x = *x * inv;
        }
        let pivot_row = m[row].clone();
        for (r, target) in m.iter_mut().enumerate() {
            if r != row && !target[col].is_zero() {
                let f = target[col];
                for (t, &v) in target[col..=unknowns]
                    .iter_mut()
                    .zip(&pivot_row[col..=unknowns])
                {
                    *t = *t - f * v;
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    if m[row..].iter().any(|r| !r[unknowns].is_zero()) {
        return (None, false);
    }
    let mut x = vec![field.zero(); unknowns];
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = m[r][unknowns];
    }
    (Some(x), pivots.len() == unknowns)
}

/// The p = 3 closed forms `c_0 = (1-α²)(1-β²)/D`, `c_1 = (α-1)/D`, `c_2 = (β-1)/D`
/// with `D = 1 - (α+β)²`; `None` where D vanishes.
fn closed_forms_p3(a: Fp2Elem, b: Fp2Elem) -> Option<[Fp2Elem; 3]> {
    let one = a.field().one();
    let d = one - (a + b) * (a + b);
    let inv = d.inv()?;
    Some([
        (one - a * a) * (one - b * b) * inv,
        (a - one) * inv,
        (b - one) * inv,
    ])
}

fn residual_zero(grids: &[Vec<Fp2Elem>], target: &[Fp2Elem], c: &[Fp2Elem]) -> bool {
    (0..target.len()).all(|r| {
        let s = grids
            .iter()
            .zip(c)
            .fold(target[r].field().zero(), |acc, (g, &ci)| acc + g[r] * ci);
        s == target[r]
    })
}

fn c_coefficients(fx: &Fixtures, budget: PairBudget, start: Instant) -> VerifyReport {
    let p = fx.p;
    let field = Fp2::new(p);
    let valid = |a: Fp2Elem, b: Fp2Elem| !(a + b).in_base_units();
    let pairs: Vec<(Fp2Elem, Fp2Elem)> = match budget {
        PairBudget::Exhaustive => field
            .elements()
            .flat_map(|a| field.elements().map(move |b| (a, b)))
            .filter(|&(a, b)| valid(a, b))
            .collect(),
        PairBudget::Random { count, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let q = p.get();
            let mut out = Vec::with_capacity(count as usize);
            while (out.len() as u64) < count {
                let a = field.elem(rng.gen_range(0..q), rng.gen_range(0..q));
                let b = field.elem(rng.gen_range(0..q), rng.gen_range(0..q));
                if valid(a, b) {
                    out.push((a, b));
                }
            }
            out
        }
    };
    if pairs.is_empty() {
        return VerifyReport {
            theorem: TheoremId::CCoefficients,
            prime: p.get(),
            cases: 0,
            status: Status::Skipped {
                reason: "empty pair budget".into(),
            },
            witness: None,
            note: None,
            elapsed: start.elapsed(),
        };
    }
    let binoms = binom_table(p.get() as usize, p);
    let mut run = Run::new();
    let mut unique = 0u64;
    let mut closed_checked = 0u64;
    for &(a, b) in &pairs {
        let solved = solve_pair(&fx.laguerre, a, b, &binoms);
        let case = || format!("alpha={a}, beta={b}");
        let Some(c) = &solved.solution else {
            run.check(case, &"no solution".to_string(), &"solution".to_string());
            continue;
        };
        unique += u64::from(solved.unique);
        if p.get() == 3 {
            if let Some(closed) = closed_forms_p3(a, b) {
                closed_checked += 1;
                let satisfies = residual_zero(&solved.grids, &solved.target, &closed);
                let render = |v: &[Fp2Elem]| {
                    v.iter()
                        .map(|x| x.to_string())
                        .collect::<Vec<_>>()
                        .join(", ")
                };
                let lhs = if !satisfies {
                    format!(
                        "closed forms ({}) do not satisfy the system",
                        render(&closed)
                    )
                } else if solved.unique {
                    render(c)
                } else {
                    render(&closed)
                };
                run.check(case, &lhs, &render(&closed));
                continue;
            }
        }
        run.check(case, &true, &true);
    }
    let mut report = run.finish(TheoremId::CCoefficients, p, start);
    let mut note = format!("unique solutions at {unique}/{} pairs", pairs.len());
    if p.get() == 3 {
        note.push_str(&format!(
            "; closed forms compared at {closed_checked} pairs"
        ));
    }
    report.note = Some(note);
    report
}

/// The c_i check with an explicit pair budget.
pub fn verify_c_coefficients(p: Prime, budget: PairBudget) -> VerifyReport {
    verify_c_coefficients_with(&Fixtures::new(p), budget)
}

/// The c_i check against the given fixtures with an explicit pair budget.
pub fn verify_c_coefficients_with(fx: &Fixtures, budget: PairBudget) -> VerifyReport {
    c_coefficients(fx, budget, Instant::now())
}

//! The ground field: rational functions in q, k_sh, k_lg and the adjoined g-parameters,
//! plus the representation-parameter tables.

use std::fmt;
use std::sync::atomic::{AtomicU8, Ordering};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::{self, gcd, pow_rat, Mono, Poly, Rat, MAX_G, NVARS, VAR_K_LG, VAR_K_SH, VAR_Q};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SimplifyLevel {
    None = 0,
    Content = 1,
    Gcd = 2,
}

static SIMPLIFY: AtomicU8 = AtomicU8::new(SimplifyLevel::Content as u8);

pub fn set_simplify_level(level: SimplifyLevel) {
    SIMPLIFY.store(level as u8, Ordering::Relaxed);
}

pub fn simplify_level() -> SimplifyLevel {
    match SIMPLIFY.load(Ordering::Relaxed) {
        0 => SimplifyLevel::None,
        1 => SimplifyLevel::Content,
        _ => SimplifyLevel::Gcd,
    }
}

/// Field operations shared by symbolic scalars and rational specializations.
pub trait Coeff: Clone + PartialEq + fmt::Debug + Send + Sync + 'static {
    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(c: i64) -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn inv(&self) -> Result<Self>;

    fn div(&self, o: &Self) -> Result<Self> {
        Ok(self.mul(&o.inv()?))
    }

    fn is_one(&self) -> bool {
        *self == Self::one()
    }

    fn pow(&self, e: i32) -> Result<Self> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut acc = Self::one();
        let mut b = base;
        let mut e = e.unsigned_abs();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&b);
            }
            e >>= 1;
            if e > 0 {
                b = b.mul(&b);
            }
        }
        Ok(acc)
    }
}

impl Coeff for Rat {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn from_i64(c: i64) -> Self {
        Rat::from_integer(BigInt::from(c))
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn inv(&self) -> Result<Self> {
        if Zero::is_zero(self) {
            return Err(Error::DivisionByZero);
        }
        Ok(self.recip())
    }
}

/// Element of the ground field, num/den with den monic and free of monomial factors.
#[derive(Clone, Debug)]
pub struct Scalar {
    num: Poly,
    den: Poly,
}

impl Scalar {
    pub fn from_poly(p: Poly) -> Self {
        Scalar { num: p, den: Poly::one() }
    }

    pub fn from_rat(c: Rat) -> Self {
        Scalar::from_poly(Poly::constant(c))
    }

    pub fn var(v: usize) -> Self {
        Scalar::from_poly(Poly::var(v))
    }

    pub fn var_pow(v: usize, e: i32) -> Self {
        Scalar::from_poly(Poly::var_pow(v, e))
    }

    pub fn q() -> Self {
        Scalar::var(VAR_Q)
    }

    pub fn new(num: Poly, den: Poly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let mut s = Scalar { num, den };
        s.normalize(simplify_level());
        Ok(s)
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    fn normalize(&mut self, level: SimplifyLevel) {
        if self.num.is_zero() {
            self.den = Poly::one();
            return;
        }
        if self.den.is_one() {
            return;
        }
        if let Some((m, c)) = self.den.as_monomial() {
            let (m, c) = (*m, c.clone());
            self.num = self.num.mul_mono(&m.pow(-1)).scale(&c.recip());
            self.den = Poly::one();
            return;
        }
        if level == SimplifyLevel::None {
            return;
        }
        let (d, shift) = self.den.shifted_nonneg();
        if !shift.is_one() {
            self.num = self.num.mul_mono(&shift.pow(-1));
        }
        let lc = d.leading_coeff();
        self.den = d.scale(&lc.recip());
        self.num = self.num.scale(&lc.recip());
        if level == SimplifyLevel::Gcd {
            self.reduce_gcd();
        }
    }

    fn reduce_gcd(&mut self) {
        if self.den.is_one() || self.num.is_zero() {
            return;
        }
        if let Some(q) = self.num.div_exact(&self.den) {
            self.num = q;
            self.den = Poly::one();
            return;
        }
        let g = gcd(&self.num, &self.den);
        if !g.is_one() {
            self.num = self.num.div_exact(&g).expect("gcd divides numerator");
            self.den = self.den.div_exact(&g).expect("gcd divides denominator");
            self.normalize(SimplifyLevel::Content);
        }
    }

    /// Fully gcd-reduced copy.
    pub fn reduced(&self) -> Scalar {
        let mut s = self.clone();
        s.normalize(SimplifyLevel::Content);
        s.reduce_gcd();
        s
    }

    fn build(num: Poly, den: Poly) -> Scalar {
        let mut s = Scalar { num, den };
        s.normalize(simplify_level());
        s
    }

    pub fn eval(&self, point: &[Rat; NVARS]) -> Result<Rat> {
        let d = self.den.eval(point);
        if Zero::is_zero(&d) {
            return Err(Error::DenominatorZero);
        }
        Ok(self.num.eval(point) / d)
    }

    /// Applies a substitution homomorphism sending each indeterminate to a scalar.
    pub fn substitute(&self, images: &[Scalar; NVARS]) -> Result<Scalar> {
        let n = subst_poly(&self.num, images)?;
        let d = subst_poly(&self.den, images)?;
        n.div(&d)
    }

    pub fn fmt_with(&self, f: &mut fmt::Formatter<'_>, latex: bool) -> fmt::Result {
        let num = Wrap(&self.num, latex);
        if self.den.is_one() {
            return write!(f, "{num}");
        }
        let den = Wrap(&self.den, latex);
        if latex {
            write!(f, "\\frac{{{num}}}{{{den}}}")
        } else {
            let nw = if self.num.len() > 1 { format!("({num})") } else { num.to_string() };
            let dw = if self.den.len() > 1 { format!("({den})") } else { den.to_string() };
            write!(f, "{nw}/{dw}")
        }
    }

    pub fn to_latex(&self) -> String {
        struct L<'a>(&'a Scalar);
        impl fmt::Display for L<'_> {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                self.0.fmt_with(f, true)
            }
        }
        L(self).to_string()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({"num": self.num.to_string(), "den": self.den.to_string()})
    }
}

struct Wrap<'a>(&'a Poly, bool);

impl fmt::Display for Wrap<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt_with(f, self.1)
    }
}

fn subst_poly(p: &Poly, images: &[Scalar; NVARS]) -> Result<Scalar> {
    let mut acc = Scalar::zero();
    for (m, c) in p.terms() {
        let mut t = Scalar::from_rat(c.clone());
        for (v, &e) in m.0.iter().enumerate() {
            if e != 0 {
                t = t.mul(&images[v].pow(e)?);
            }
        }
        acc = acc.add(&t);
    }
    Ok(acc)
}

impl PartialEq for Scalar {
    fn eq(&self, o: &Self) -> bool {
        if self.den == o.den {
            return self.num == o.num;
        }
        self.num.mul(&o.den) == o.num.mul(&self.den)
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_with(f, false)
    }
}

impl Coeff for Scalar {
    fn zero() -> Self {
        Scalar::from_poly(Poly::zero())
    }
    fn one() -> Self {
        Scalar::from_poly(Poly::one())
    }
    fn from_i64(c: i64) -> Self {
        Scalar::from_poly(Poly::from_i64(c))
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
    fn is_one(&self) -> bool {
        self.num == self.den
    }

    fn add(&self, o: &Self) -> Self {
        if o.num.is_zero() {
            return self.clone();
        }
        if self.num.is_zero() {
            return o.clone();
        }
        if self.den == o.den {
            return Scalar::build(self.num.add(&o.num), self.den.clone());
        }
        if self.den.is_one() {
            return Scalar::build(self.num.mul(&o.den).add(&o.num), o.den.clone());
        }
        if o.den.is_one() {
            return Scalar::build(self.num.add(&o.num.mul(&self.den)), self.den.clone());
        }
        Scalar::build(
            self.num.mul(&o.den).add(&o.num.mul(&self.den)),
            self.den.mul(&o.den),
        )
    }
    fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }
    fn mul(&self, o: &Self) -> Self {
        if self.num.is_zero() || o.num.is_zero() {
            return Scalar::zero();
        }
        if self.den.is_one() && o.den.is_one() {
            return Scalar::from_poly(self.num.mul(&o.num));
        }
        if self.den == o.num {
            return Scalar::build(self.num.clone(), o.den.clone());
        }
        if o.den == self.num {
            return Scalar::build(o.num.clone(), self.den.clone());
        }
        Scalar::build(self.num.mul(&o.num), self.den.mul(&o.den))
    }
    fn neg(&self) -> Self {
        Scalar { num: self.num.neg(), den: self.den.clone() }
    }
    fn inv(&self) -> Result<Self> {
        if self.num.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Scalar::build(self.den.clone(), self.num.clone()))
    }
}

/// Root length classes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LengthClass {
    Sh,
    Lg,
}

impl LengthClass {
    pub fn idx(self) -> usize {
        match self {
            LengthClass::Sh => 0,
            LengthClass::Lg => 1,
        }
    }

    pub fn k_var(self) -> usize {
        match self {
            LengthClass::Sh => VAR_K_SH,
            LengthClass::Lg => VAR_K_LG,
        }
    }

    pub fn g_var(self, j: usize) -> usize {
        match self {
            LengthClass::Sh => poly::var_g_sh(j),
            LengthClass::Lg => poly::var_g_lg(j),
        }
    }
}

/// Largest supported metaplectic degree (bounded by the g-slots).
pub const MAX_N: u32 = 2 * MAX_G as u32 + 1;

/// Number of adjoined g-indeterminates per class: 1 <= j < n/2.
pub fn adjoined_g_count(n: u32) -> usize {
    (n as usize).div_ceil(2) - 1
}

/// Metaplectic degree, per-class signs and which classes carry independent parameters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroundField {
    pub n: u32,
    pub eps_sh: i8,
    pub eps_lg: i8,
    /// When false only the lg class is instantiated and sh aliases it.
    pub two_classes: bool,
}

impl GroundField {
    pub fn new(n: u32, eps_sh: i8, eps_lg: i8, two_classes: bool) -> Result<Self> {
        if n == 0 || n > MAX_N {
            return Err(Error::InvalidConfig(format!("n must lie in 1..={MAX_N}")));
        }
        if !matches!(eps_sh, 1 | -1) || !matches!(eps_lg, 1 | -1) {
            return Err(Error::InvalidConfig("epsilon must be +1 or -1".into()));
        }
        Ok(GroundField { n, eps_sh, eps_lg, two_classes })
    }

    /// Single-class field, as used for simply-laced systems and GL_r.
    pub fn simple(n: u32, eps: i8) -> Result<Self> {
        GroundField::new(n, eps, eps, false)
    }

    fn class(&self, y: LengthClass) -> LengthClass {
        if self.two_classes {
            y
        } else {
            LengthClass::Lg
        }
    }

    pub fn eps(&self, y: LengthClass) -> i8 {
        match self.class(y) {
            LengthClass::Sh => self.eps_sh,
            LengthClass::Lg => self.eps_lg,
        }
    }

    pub fn k(&self, y: LengthClass) -> Scalar {
        Scalar::var(self.class(y).k_var())
    }

    /// g_j(y) for any integer j.
    pub fn g(&self, j: i64, y: LengthClass) -> Scalar {
        rep_param_g(self, j, y)
    }

    pub fn params(&self) -> Params<Scalar> {
        let n = self.n as usize;
        let mut k = Vec::new();
        let mut kinv = Vec::new();
        let mut g: Vec<Vec<Scalar>> = Vec::new();
        for y in [LengthClass::Sh, LengthClass::Lg] {
            let ky = self.k(y);
            kinv.push(ky.inv().expect("k is nonzero"));
            k.push(ky);
            g.push((0..n).map(|j| self.g(j as i64, y)).collect());
        }
        Params {
            n: self.n,
            q: Scalar::q(),
            qinv: Scalar::var_pow(VAR_Q, -1),
            k: [k[0].clone(), k[1].clone()],
            kinv: [kinv[0].clone(), kinv[1].clone()],
            g: [g[0].clone(), g[1].clone()],
        }
    }

    /// Indeterminates actually present in this field.
    pub fn variables(&self) -> Vec<usize> {
        let mut vs = vec![VAR_Q, VAR_K_LG];
        if self.two_classes {
            vs.push(VAR_K_SH);
        }
        for j in 1..=adjoined_g_count(self.n) {
            vs.push(poly::var_g_lg(j));
            if self.two_classes {
                vs.push(poly::var_g_sh(j));
            }
        }
        vs
    }
}

/// The representation parameter g_j(y).
pub fn rep_param_g(field: &GroundField, j: i64, y: LengthClass) -> Scalar {
    let n = field.n as i64;
    let y = field.class(y);
    let r = j.rem_euclid(n);
    if r == 0 {
        return Scalar::from_i64(-1);
    }
    let kv = y.k_var();
    if 2 * r < n {
        return Scalar::var(y.g_var(r as usize));
    }
    if 2 * r == n {
        let e = field.eps(y) as i64;
        return Scalar::var_pow(kv, -1).mul(&Scalar::from_i64(e));
    }
    let other = Scalar::var(y.g_var((n - r) as usize));
    Scalar::var_pow(kv, -2).mul(&other.inv().expect("indeterminate is nonzero"))
}

/// Tabulated parameters over a coefficient field; index 0 is sh, 1 is lg.
#[derive(Clone, Debug)]
pub struct Params<C> {
    pub n: u32,
    pub q: C,
    pub qinv: C,
    pub k: [C; 2],
    pub kinv: [C; 2],
    pub g: [Vec<C>; 2],
}

impl<C: Coeff> Params<C> {
    pub fn k(&self, y: LengthClass) -> &C {
        &self.k[y.idx()]
    }

    pub fn kinv(&self, y: LengthClass) -> &C {
        &self.kinv[y.idx()]
    }

    pub fn g(&self, j: i64, y: LengthClass) -> &C {
        &self.g[y.idx()][j.rem_euclid(self.n as i64) as usize]
    }

    pub fn q_pow(&self, e: i64) -> C {
        let b = if e < 0 { &self.qinv } else { &self.q };
        let mut acc = C::one();
        for _ in 0..e.unsigned_abs() {
            acc = acc.mul(b);
        }
        acc
    }

    pub fn k_pow(&self, y: LengthClass, e: i64) -> C {
        let b = if e < 0 { self.kinv(y) } else { self.k(y) };
        let mut acc = C::one();
        for _ in 0..e.unsigned_abs() {
            acc = acc.mul(b);
        }
        acc
    }
}

/// A point at which every indeterminate takes a nonzero rational value.
#[derive(Clone, Debug)]
pub struct Specialization {
    pub point: [Rat; NVARS],
}

impl Specialization {
    pub fn random(rng: &mut ChaCha8Rng) -> Self {
        let point = std::array::from_fn(|_| {
            let mut num: i64 = 0;
            while num == 0 {
                num = rng.gen_range(-23..=23);
            }
            let den: i64 = rng.gen_range(1..=7);
            BigRational::new(BigInt::from(num), BigInt::from(den))
        });
        Specialization { point }
    }

    pub fn eval(&self, s: &Scalar) -> Result<Rat> {
        s.eval(&self.point)
    }

    pub fn params(&self, p: &Params<Scalar>) -> Result<Params<Rat>> {
        let e = |s: &Scalar| self.eval(s);
        Ok(Params {
            n: p.n,
            q: e(&p.q)?,
            qinv: e(&p.qinv)?,
            k: [e(&p.k[0])?, e(&p.k[1])?],
            kinv: [e(&p.kinv[0])?, e(&p.kinv[1])?],
            g: [
                p.g[0].iter().map(e).collect::<Result<_>>()?,
                p.g[1].iter().map(e).collect::<Result<_>>()?,
            ],
        })
    }
}

/// Identity substitution images, to be overwritten selectively.
pub fn identity_images() -> [Scalar; NVARS] {
    std::array::from_fn(Scalar::var)
}

pub fn rat_pow(x: &Rat, e: i32) -> Rat {
    pow_rat(x, e)
}

pub fn mono_scalar(m: Mono, c: Rat) -> Scalar {
    Scalar::from_poly(Poly::monomial(m, c))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    fn k() -> Scalar {
        Scalar::var(VAR_K_LG)
    }

    #[test]
    fn ring_identity() {
        let a = k().mul(&k()).sub(&Scalar::one());
        let b = k().sub(&Scalar::one()).mul(&k().add(&Scalar::one()));
        assert_eq!(a, b);
        assert!(Scalar::q().inv().unwrap().mul(&Scalar::q()).is_one());
        assert!(matches!(Scalar::zero().inv(), Err(Error::DivisionByZero)));
    }

    #[test]
    fn g_table_n3() {
        let f = GroundField::simple(3, 1).unwrap();
        let g1 = Scalar::var(poly::var_g_lg(1));
        assert_eq!(f.g(0, LengthClass::Lg), Scalar::from_i64(-1));
        let expect = Scalar::var_pow(VAR_K_LG, -2).mul(&g1.inv().unwrap());
        assert_eq!(f.g(-1, LengthClass::Lg), expect);
        assert_eq!(f.g(1, LengthClass::Lg).mul(&f.g(2, LengthClass::Lg)), Scalar::var_pow(VAR_K_LG, -2));
    }

    #[test]
    fn g_half_uses_epsilon() {
        let f = GroundField::simple(2, 1).unwrap();
        assert_eq!(f.g(1, LengthClass::Lg), Scalar::var_pow(VAR_K_LG, -1));
        let f = GroundField::simple(2, -1).unwrap();
        assert_eq!(f.g(1, LengthClass::Lg), Scalar::var_pow(VAR_K_LG, -1).neg());
    }

    #[test]
    fn g_reciprocity_and_periodicity() {
        for n in 1..=8u32 {
            for two in [false, true] {
                let f = GroundField::new(n, -1, 1, two).unwrap();
                for y in [LengthClass::Sh, LengthClass::Lg] {
                    let ky = f.k(y);
                    let k2inv = ky.mul(&ky).inv().unwrap();
                    for j in 1..n as i64 {
                        assert_eq!(f.g(j, y).mul(&f.g(n as i64 - j, y)), k2inv, "n={n} j={j}");
                    }
                    for j in -3 * n as i64..=3 * n as i64 {
                        assert_eq!(f.g(j, y), f.g(j.rem_euclid(n as i64), y));
                    }
                }
            }
        }
    }

    #[test]
    fn gcd_level_reduces() {
        let a = k().mul(&k()).sub(&Scalar::one());
        let b = k().sub(&Scalar::one());
        let r = a.div(&b).unwrap().reduced();
        assert!(r.is_polynomial());
        assert_eq!(r.to_string(), "k + 1");
    }

    #[test]
    fn field_axioms_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let vars = [VAR_Q, VAR_K_LG, poly::var_g_lg(1)];
        let rand_scalar = |rng: &mut ChaCha8Rng| {
            let mut p = Poly::zero();
            for _ in 0..3 {
                let mut m = Mono::one();
                for &v in &vars {
                    m.0[v] = rng.gen_range(-1..=2);
                }
                p.add_term(m, Rat::from_integer(BigInt::from(rng.gen_range(-3..=3))));
            }
            let mut d = Poly::one();
            d.add_term(Mono::var(vars[rng.gen_range(0..3)], 1), <Rat as One>::one());
            Scalar::new(p, d).unwrap()
        };
        for _ in 0..20 {
            let (a, b, c) = (rand_scalar(&mut rng), rand_scalar(&mut rng), rand_scalar(&mut rng));
            assert_eq!(a.add(&b).add(&c), a.add(&b.add(&c)));
            assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
            assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
            if !a.is_zero() {
                assert!(a.mul(&a.inv().unwrap()).is_one());
            }
        }
    }
}

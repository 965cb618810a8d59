//! Sparse multivariate Laurent polynomials over Q in the ground-field indeterminates.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Rat = BigRational;

/// Number of indeterminate slots.
pub const NVARS: usize = 15;
/// Largest g-index that can be adjoined per length class.
pub const MAX_G: usize = 6;

pub const VAR_Q: usize = 0;
pub const VAR_K_LG: usize = 1;
pub const VAR_K_SH: usize = 2;

/// Slot of the adjoined g_j for the long (or unique) class, 1 <= j <= MAX_G.
pub fn var_g_lg(j: usize) -> usize {
    debug_assert!((1..=MAX_G).contains(&j));
    2 + j
}

pub fn var_g_sh(j: usize) -> usize {
    debug_assert!((1..=MAX_G).contains(&j));
    2 + MAX_G + j
}

pub fn var_name(v: usize) -> String {
    match v {
        VAR_Q => "q".into(),
        VAR_K_LG => "k".into(),
        VAR_K_SH => "k_sh".into(),
        v if v < 3 + MAX_G => format!("g{}", v - 2),
        v => format!("g{}_sh", v - 2 - MAX_G),
    }
}

pub fn var_by_name(name: &str) -> Option<usize> {
    match name {
        "q" => return Some(VAR_Q),
        "k" | "k_lg" => return Some(VAR_K_LG),
        "k_sh" => return Some(VAR_K_SH),
        _ => {}
    }
    let rest = name.strip_prefix('g')?;
    let (digits, sh) = if let Some(d) = rest.strip_suffix("_sh") {
        (d, true)
    } else if let Some(d) = rest.strip_suffix("_lg") {
        (d, false)
    } else {
        (rest, false)
    };
    let j: usize = digits.parse().ok()?;
    if !(1..=MAX_G).contains(&j) {
        return None;
    }
    Some(if sh { var_g_sh(j) } else { var_g_lg(j) })
}

/// Exponent vector; negative exponents allowed.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct Mono(pub [i32; NVARS]);

impl Mono {
    pub fn one() -> Self {
        Mono([0; NVARS])
    }

    pub fn var(v: usize, e: i32) -> Self {
        let mut m = Mono::one();
        m.0[v] = e;
        m
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, o: &Mono) -> Mono {
        let mut r = *self;
        for (a, b) in r.0.iter_mut().zip(o.0.iter()) {
            *a += b;
        }
        r
    }

    pub fn div(&self, o: &Mono) -> Mono {
        let mut r = *self;
        for (a, b) in r.0.iter_mut().zip(o.0.iter()) {
            *a -= b;
        }
        r
    }

    pub fn pow(&self, e: i32) -> Mono {
        let mut r = *self;
        for a in r.0.iter_mut() {
            *a *= e;
        }
        r
    }

    pub fn meet(&self, o: &Mono) -> Mono {
        let mut r = *self;
        for (a, b) in r.0.iter_mut().zip(o.0.iter()) {
            *a = (*a).min(*b);
        }
        r
    }

    pub fn join(&self, o: &Mono) -> Mono {
        let mut r = *self;
        for (a, b) in r.0.iter_mut().zip(o.0.iter()) {
            *a = (*a).max(*b);
        }
        r
    }

    /// Factors as (name, exponent), sorted by variable name.
    pub fn factors(&self) -> Vec<(String, i32)> {
        let mut f: Vec<(String, i32)> = self
            .0
            .iter()
            .enumerate()
            .filter(|(_, &e)| e != 0)
            .map(|(v, &e)| (var_name(v), e))
            .collect();
        f.sort();
        f
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Default, Debug)]
pub struct Poly {
    terms: BTreeMap<Mono, Rat>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn one() -> Self {
        Poly::constant(Rat::one())
    }

    pub fn constant(c: Rat) -> Self {
        Poly::monomial(Mono::one(), c)
    }

    pub fn from_i64(c: i64) -> Self {
        Poly::constant(Rat::from_integer(BigInt::from(c)))
    }

    pub fn monomial(m: Mono, c: Rat) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Poly { terms }
    }

    pub fn var(v: usize) -> Self {
        Poly::monomial(Mono::var(v, 1), Rat::one())
    }

    pub fn var_pow(v: usize, e: i32) -> Self {
        Poly::monomial(Mono::var(v, e), Rat::one())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.as_constant().is_some_and(|c| c.is_one())
    }

    pub fn as_constant(&self) -> Option<&Rat> {
        match self.terms.len() {
            0 => None,
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                m.is_one().then_some(c)
            }
            _ => None,
        }
    }

    pub fn as_monomial(&self) -> Option<(&Mono, &Rat)> {
        if self.terms.len() == 1 {
            self.terms.iter().next()
        } else {
            None
        }
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Mono, &Rat)> {
        self.terms.iter()
    }

    pub fn from_terms(it: impl IntoIterator<Item = (Mono, Rat)>) -> Self {
        let mut p = Poly::zero();
        for (m, c) in it {
            p.add_term(m, c);
        }
        p
    }

    pub fn add_term(&mut self, m: Mono, c: Rat) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    /// Lex-leading term.
    pub fn leading(&self) -> Option<(&Mono, &Rat)> {
        self.terms.iter().next_back()
    }

    pub fn min_mono(&self) -> Mono {
        let mut it = self.terms.keys();
        let first = match it.next() {
            Some(m) => *m,
            None => return Mono::one(),
        };
        it.fold(first, |a, b| a.meet(b))
    }

    pub fn max_mono(&self) -> Mono {
        let mut it = self.terms.keys();
        let first = match it.next() {
            Some(m) => *m,
            None => return Mono::one(),
        };
        it.fold(first, |a, b| a.join(b))
    }

    pub fn mul_mono(&self, m: &Mono) -> Poly {
        if m.is_one() {
            return self.clone();
        }
        Poly {
            terms: self.terms.iter().map(|(k, c)| (k.mul(m), c.clone())).collect(),
        }
    }

    pub fn scale(&self, c: &Rat) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        if c.is_one() {
            return self.clone();
        }
        Poly {
            terms: self.terms.iter().map(|(k, v)| (*k, v * c)).collect(),
        }
    }

    pub fn neg(&self) -> Poly {
        Poly {
            terms: self.terms.iter().map(|(k, v)| (*k, -v)).collect(),
        }
    }

    pub fn add(&self, o: &Poly) -> Poly {
        let (big, small) = if self.len() >= o.len() { (self, o) } else { (o, self) };
        let mut r = big.clone();
        for (m, c) in small.terms.iter() {
            r.add_term(*m, c.clone());
        }
        r
    }

    pub fn sub(&self, o: &Poly) -> Poly {
        let mut r = self.clone();
        for (m, c) in o.terms.iter() {
            r.add_term(*m, -c);
        }
        r
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        if let Some((m, c)) = o.as_monomial() {
            return self.mul_mono(m).scale(c);
        }
        if let Some((m, c)) = self.as_monomial() {
            return o.mul_mono(m).scale(c);
        }
        let mut r = Poly::zero();
        for (m1, c1) in self.terms.iter() {
            for (m2, c2) in o.terms.iter() {
                r.add_term(m1.mul(m2), c1 * c2);
            }
        }
        r
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut result = Poly::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        result
    }

    /// Exact quotient in the Laurent polynomial ring, or None if `d` does not divide.
    pub fn div_exact(&self, d: &Poly) -> Option<Poly> {
        if d.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Poly::zero());
        }
        if let Some((m, c)) = d.as_monomial() {
            let inv = c.recip();
            return Some(Poly {
                terms: self.terms.iter().map(|(k, v)| (k.div(m), v * &inv)).collect(),
            });
        }
        let lo = self.min_mono().div(&d.min_mono());
        let hi = self.max_mono().div(&d.max_mono());
        let (dm, dc) = d.leading().map(|(m, c)| (*m, c.clone()))?;
        let dinv = dc.recip();
        let mut r = self.clone();
        let mut q = Poly::zero();
        while let Some((rm, rc)) = r.leading().map(|(m, c)| (*m, c.clone())) {
            let qm = rm.div(&dm);
            if (0..NVARS).any(|v| qm.0[v] < lo.0[v] || qm.0[v] > hi.0[v]) {
                return None;
            }
            let qc = rc * &dinv;
            for (m, c) in d.terms.iter() {
                r.add_term(m.mul(&qm), -(c * &qc));
            }
            q.add_term(qm, qc);
        }
        Some(q)
    }

    pub fn deg_in(&self, v: usize) -> i32 {
        self.terms.keys().map(|m| m.0[v]).max().unwrap_or(0)
    }

    pub fn vars_mask(&self) -> u32 {
        let mut mask = 0u32;
        for m in self.terms.keys() {
            for (v, &e) in m.0.iter().enumerate() {
                if e != 0 {
                    mask |= 1 << v;
                }
            }
        }
        mask
    }

    /// Coefficients with respect to variable `v`, keyed by exponent.
    pub fn coeffs_in(&self, v: usize) -> BTreeMap<i32, Poly> {
        let mut out: BTreeMap<i32, Poly> = BTreeMap::new();
        for (m, c) in self.terms.iter() {
            let e = m.0[v];
            let mut mm = *m;
            mm.0[v] = 0;
            out.entry(e).or_default().add_term(mm, c.clone());
        }
        out
    }

    fn coeff_in(&self, v: usize, e: i32) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in self.terms.iter() {
            if m.0[v] == e {
                let mut mm = *m;
                mm.0[v] = 0;
                out.add_term(mm, c.clone());
            }
        }
        out
    }

    pub fn leading_coeff(&self) -> Rat {
        self.leading().map(|(_, c)| c.clone()).unwrap_or_else(Rat::zero)
    }

    pub fn monic(&self) -> Poly {
        let lc = self.leading_coeff();
        if lc.is_zero() || lc.is_one() {
            return self.clone();
        }
        self.scale(&lc.recip())
    }

    /// Positive rational c with self/c having coprime integer coefficients.
    pub fn rational_content(&self) -> Rat {
        let mut num = BigInt::zero();
        let mut den = BigInt::one();
        for c in self.terms.values() {
            num = num.gcd(c.numer());
            den = den.lcm(c.denom());
        }
        if num.is_zero() {
            return Rat::one();
        }
        Rat::new(num, den)
    }

    /// Shifts by a monomial so that every exponent is nonnegative and no variable divides.
    pub fn shifted_nonneg(&self) -> (Poly, Mono) {
        let m = self.min_mono();
        (self.mul_mono(&m.pow(-1)), m)
    }

    pub fn eval(&self, point: &[Rat; NVARS]) -> Rat {
        let mut acc = Rat::zero();
        for (m, c) in self.terms.iter() {
            let mut t = c.clone();
            for (v, &e) in m.0.iter().enumerate() {
                if e != 0 {
                    t *= pow_rat(&point[v], e);
                }
            }
            acc += t;
        }
        acc
    }

    pub fn total_degree_span(&self) -> i32 {
        self.terms.keys().map(|m| m.0.iter().map(|e| e.abs()).sum::<i32>()).max().unwrap_or(0)
    }

    pub fn fmt_with(&self, f: &mut fmt::Formatter<'_>, latex: bool) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut items: Vec<(Vec<(String, i32)>, &Rat)> =
            self.terms.iter().map(|(m, c)| (m.factors(), c)).collect();
        items.sort_by(|a, b| b.0.cmp(&a.0));
        for (idx, (factors, c)) in items.iter().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if idx == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mut parts: Vec<String> = Vec::new();
            if !a.is_one() || factors.is_empty() {
                if latex && !a.is_integer() {
                    parts.push(format!("\\frac{{{}}}{{{}}}", a.numer(), a.denom()));
                } else {
                    parts.push(a.to_string());
                }
            }
            for (name, e) in factors {
                let name = if latex { latex_var(name) } else { name.clone() };
                if *e == 1 {
                    parts.push(name);
                } else if latex {
                    parts.push(format!("{name}^{{{e}}}"));
                } else {
                    parts.push(format!("{name}^{e}"));
                }
            }
            let sep = if latex { " " } else { "*" };
            write!(f, "{}", parts.join(sep))?;
        }
        Ok(())
    }
}

fn latex_var(name: &str) -> String {
    if let Some(rest) = name.strip_prefix('g') {
        if let Some(j) = rest.strip_suffix("_sh") {
            return format!("g_{{{j},\\mathrm{{sh}}}}");
        }
        return format!("g_{{{rest}}}");
    }
    match name {
        "k_sh" => "k_{\\mathrm{sh}}".into(),
        other => other.into(),
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_with(f, false)
    }
}

pub fn pow_rat(x: &Rat, e: i32) -> Rat {
    let base = if e < 0 { x.recip() } else { x.clone() };
    let mut acc = Rat::one();
    let mut b = base;
    let mut e = e.unsigned_abs();
    while e > 0 {
        if e & 1 == 1 {
            acc *= &b;
        }
        e >>= 1;
        if e > 0 {
            b = &b * &b;
        }
    }
    acc
}

/// Greatest common divisor in the Laurent polynomial ring, normalized monic.
pub fn gcd(a: &Poly, b: &Poly) -> Poly {
    if a.is_zero() {
        return b.shifted_nonneg().0.monic();
    }
    if b.is_zero() {
        return a.shifted_nonneg().0.monic();
    }
    let (a, _) = a.shifted_nonneg();
    let (b, _) = b.shifted_nonneg();
    gcd_nonneg(&a, &b).monic()
}

fn gcd_nonneg(a: &Poly, b: &Poly) -> Poly {
    if a.as_constant().is_some() || b.as_constant().is_some() {
        return Poly::one();
    }
    if a == b {
        return a.clone();
    }
    let common = a.vars_mask() & b.vars_mask();
    if common == 0 {
        return Poly::one();
    }
    let v = (0..NVARS)
        .filter(|v| common & (1 << v) != 0)
        .min_by_key(|&v| a.deg_in(v).max(b.deg_in(v)))
        .unwrap();
    let ca = content_in(a, v);
    let cb = content_in(b, v);
    let pa = a.div_exact(&ca).expect("content divides");
    let pb = b.div_exact(&cb).expect("content divides");
    let g = gcd_nonneg(&ca.shifted_nonneg().0, &cb.shifted_nonneg().0);
    let (mut p, mut q) = if pa.deg_in(v) >= pb.deg_in(v) { (pa, pb) } else { (pb, pa) };
    loop {
        let r = prem(&p, &q, v);
        if r.is_zero() {
            break;
        }
        if r.deg_in(v) == 0 {
            q = Poly::one();
            break;
        }
        p = q;
        q = primitive_in(&r, v);
    }
    let q = if q.as_constant().is_some() { Poly::one() } else { primitive_in(&q, v) };
    g.mul(&q).monic()
}

/// gcd of the coefficients of `p` viewed as a polynomial in `v`.
fn content_in(p: &Poly, v: usize) -> Poly {
    let cs = p.coeffs_in(v);
    let mut g: Option<Poly> = None;
    let mut coeffs: Vec<Poly> = cs.into_values().collect();
    coeffs.sort_by_key(|c| c.len());
    for c in coeffs {
        g = Some(match g {
            None => c.shifted_nonneg().0.monic(),
            Some(g) => {
                if g.as_constant().is_some() {
                    return Poly::one();
                }
                gcd_nonneg(&g, &c.shifted_nonneg().0).monic()
            }
        });
    }
    g.unwrap_or_else(Poly::one)
}

fn primitive_in(p: &Poly, v: usize) -> Poly {
    let c = content_in(p, v);
    let q = p.div_exact(&c).expect("content divides");
    let rc = q.rational_content();
    q.scale(&rc.recip())
}

/// Pseudo-remainder of p by q with respect to v.
fn prem(p: &Poly, q: &Poly, v: usize) -> Poly {
    let dq = q.deg_in(v);
    let lc = q.coeff_in(v, dq);
    let mut r = p.clone();
    while !r.is_zero() && r.deg_in(v) >= dq {
        let dr = r.deg_in(v);
        let lr = r.coeff_in(v, dr);
        let shift = Mono::var(v, dr - dq);
        r = r.mul(&lc).sub(&q.mul(&lr).mul_mono(&shift));
        let rc = r.rational_content();
        if !rc.is_zero() && !rc.is_one() {
            r = r.scale(&rc.recip());
        }
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k() -> Poly {
        Poly::var(VAR_K_LG)
    }
    fn q() -> Poly {
        Poly::var(VAR_Q)
    }

    #[test]
    fn names_round_trip() {
        for v in 0..NVARS {
            assert_eq!(var_by_name(&var_name(v)), Some(v));
        }
        assert_eq!(var_by_name("k_lg"), Some(VAR_K_LG));
        assert_eq!(var_by_name("g2_lg"), Some(var_g_lg(2)));
        assert_eq!(var_by_name("g7"), None);
    }

    #[test]
    fn exact_division() {
        let a = k().mul(&k()).sub(&Poly::one());
        let b = k().sub(&Poly::one());
        assert_eq!(a.div_exact(&b), Some(k().add(&Poly::one())));
        assert_eq!(b.div_exact(&a), None);
        let c = q().mul(&k()).add(&Poly::one());
        assert_eq!(a.div_exact(&c), None);
    }

    #[test]
    fn gcd_multivariate() {
        let x = k().add(&q());
        let y = k().mul(&q()).sub(&Poly::from_i64(2));
        let z = q().pow(2).add(&Poly::one());
        let a = x.mul(&y).mul(&k());
        let b = x.mul(&z);
        assert_eq!(gcd(&a, &b), x.monic());
        assert_eq!(gcd(&y, &z), Poly::one());
        let w = x.pow(2).mul(&y);
        assert_eq!(gcd(&w, &x.mul(&y).mul(&z)), x.mul(&y).monic());
    }

    #[test]
    fn display_orders_terms() {
        let p = k().pow(2).sub(&Poly::one());
        assert_eq!(p.to_string(), "k^2 - 1");
        let p = k().pow(4).mul(&q()).sub(&Poly::one());
        assert_eq!(p.to_string(), "k^4*q - 1");
    }
}

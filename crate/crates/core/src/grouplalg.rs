//! Group algebras K[P], rational functions over K[P^m], and the coset decomposition of K(P).

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::linalg::{determinant, ExactRing};
use crate::scalars::{Coeff, Scalar};
use crate::weight::Weight;

pub const DEFAULT_COSET_CAP: usize = 256;

/// Finitely supported map Weight → C.
#[derive(Clone, Debug)]
pub struct Laurent<C> {
    rank: usize,
    terms: BTreeMap<Weight, C>,
}

impl<C: Coeff> PartialEq for Laurent<C> {
    fn eq(&self, o: &Self) -> bool {
        self.rank == o.rank
            && self.terms.len() == o.terms.len()
            && self.terms.iter().zip(o.terms.iter()).all(|((a, x), (b, y))| a == b && x == y)
    }
}

impl<C: Coeff> Laurent<C> {
    pub fn zero(rank: usize) -> Self {
        Laurent { rank, terms: BTreeMap::new() }
    }

    pub fn one(rank: usize) -> Self {
        Laurent::monomial(Weight::zero(rank), C::one())
    }

    pub fn constant(rank: usize, c: C) -> Self {
        Laurent::monomial(Weight::zero(rank), c)
    }

    pub fn monomial(w: Weight, c: C) -> Self {
        let mut l = Laurent::zero(w.len());
        l.add_term(w, c);
        l
    }

    pub fn x(w: Weight) -> Self {
        Laurent::monomial(w, C::one())
    }

    /// 1 − c x^w.
    pub fn one_minus(w: Weight, c: &C) -> Self {
        let mut l = Laurent::one(w.len());
        l.add_term(w, c.neg());
        l
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Weight, &C)> {
        self.terms.iter()
    }

    pub fn into_terms(self) -> impl Iterator<Item = (Weight, C)> {
        self.terms.into_iter()
    }

    pub fn support(&self) -> impl Iterator<Item = &Weight> {
        self.terms.keys()
    }

    pub fn coeff(&self, w: &Weight) -> C {
        self.terms.get(w).cloned().unwrap_or_else(C::zero)
    }

    pub fn as_constant(&self) -> Option<C> {
        if self.terms.is_empty() {
            return Some(C::zero());
        }
        if self.terms.len() == 1 {
            let (w, c) = self.terms.iter().next().unwrap();
            if w.is_zero() {
                return Some(c.clone());
            }
        }
        None
    }

    pub fn add_term(&mut self, w: Weight, c: C) {
        debug_assert_eq!(w.len(), self.rank);
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(w) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                let s = e.get().add(&c);
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    pub fn add_assign(&mut self, o: &Laurent<C>) {
        for (w, c) in o.terms.iter() {
            self.add_term(*w, c.clone());
        }
    }

    pub fn add(&self, o: &Laurent<C>) -> Laurent<C> {
        let (big, small) = if self.len() >= o.len() { (self, o) } else { (o, self) };
        let mut r = big.clone();
        r.add_assign(small);
        r
    }

    pub fn sub(&self, o: &Laurent<C>) -> Laurent<C> {
        let mut r = self.clone();
        for (w, c) in o.terms.iter() {
            r.add_term(*w, c.neg());
        }
        r
    }

    pub fn neg(&self) -> Laurent<C> {
        Laurent { rank: self.rank, terms: self.terms.iter().map(|(w, c)| (*w, c.neg())).collect() }
    }

    pub fn scale(&self, s: &C) -> Laurent<C> {
        if s.is_zero() {
            return Laurent::zero(self.rank);
        }
        let mut r = Laurent::zero(self.rank);
        for (w, c) in self.terms.iter() {
            r.add_term(*w, c.mul(s));
        }
        r
    }

    /// Multiplication by c x^w.
    pub fn mul_monomial(&self, w: &Weight, c: &C) -> Laurent<C> {
        let mut r = Laurent::zero(self.rank);
        for (v, d) in self.terms.iter() {
            r.add_term(v.add(w), d.mul(c));
        }
        r
    }

    pub fn shift(&self, w: &Weight) -> Laurent<C> {
        Laurent { rank: self.rank, terms: self.terms.iter().map(|(v, d)| (v.add(w), d.clone())).collect() }
    }

    pub fn mul(&self, o: &Laurent<C>) -> Laurent<C> {
        if self.is_zero() || o.is_zero() {
            return Laurent::zero(self.rank);
        }
        if o.len() == 1 {
            let (w, c) = o.terms.iter().next().unwrap();
            return self.mul_monomial(w, c);
        }
        if self.len() == 1 {
            let (w, c) = self.terms.iter().next().unwrap();
            return o.mul_monomial(w, c);
        }
        let mut r = Laurent::zero(self.rank);
        for (a, x) in self.terms.iter() {
            for (b, y) in o.terms.iter() {
                r.add_term(a.add(b), x.mul(y));
            }
        }
        r
    }

    pub fn pow(&self, e: u32) -> Laurent<C> {
        let mut acc = Laurent::one(self.rank);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Arithmetic with a rank check.
    pub fn checked(&self, o: &Laurent<C>, op: LaurentOp) -> Result<Laurent<C>> {
        if self.rank != o.rank {
            return Err(Error::LatticeMismatch { left: self.rank, right: o.rank });
        }
        Ok(match op {
            LaurentOp::Add => self.add(o),
            LaurentOp::Sub => self.sub(o),
            LaurentOp::Mul => self.mul(o),
        })
    }

    /// Applies a map on exponents; the map must be injective on the support.
    pub fn map_exponents(&self, f: impl Fn(&Weight) -> Weight) -> Laurent<C> {
        let mut r = Laurent::zero(self.rank);
        for (w, c) in self.terms.iter() {
            r.add_term(f(w), c.clone());
        }
        r
    }

    pub fn map_coeffs<D: Coeff>(&self, f: impl Fn(&C) -> Result<D>) -> Result<Laurent<D>> {
        let mut r = Laurent::zero(self.rank);
        for (w, c) in self.terms.iter() {
            r.add_term(*w, f(c)?);
        }
        Ok(r)
    }

    pub fn leading(&self) -> Option<(&Weight, &C)> {
        self.terms.iter().next_back()
    }

    pub fn min_exps(&self) -> Weight {
        let mut it = self.terms.keys();
        let Some(first) = it.next() else { return Weight::zero(self.rank) };
        let mut m = *first;
        for w in it {
            for i in 0..self.rank {
                m.set(i, m.get(i).min(w.get(i)));
            }
        }
        m
    }

    pub fn max_exps(&self) -> Weight {
        let mut it = self.terms.keys();
        let Some(first) = it.next() else { return Weight::zero(self.rank) };
        let mut m = *first;
        for w in it {
            for i in 0..self.rank {
                m.set(i, m.get(i).max(w.get(i)));
            }
        }
        m
    }

    /// Exact quotient in the Laurent ring, or None.
    pub fn div_exact(&self, d: &Laurent<C>) -> Option<Laurent<C>> {
        if d.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Laurent::zero(self.rank));
        }
        let (dw, dc) = d.leading().map(|(w, c)| (*w, c.clone()))?;
        let dinv = dc.inv().ok()?;
        if d.len() == 1 {
            return Some(self.mul_monomial(&dw.neg(), &dinv));
        }
        let lo = self.min_exps().sub(&d.min_exps());
        let hi = self.max_exps().sub(&d.max_exps());
        let mut r = self.clone();
        let mut q = Laurent::zero(self.rank);
        while let Some((rw, rc)) = r.leading().map(|(w, c)| (*w, c.clone())) {
            let qw = rw.sub(&dw);
            if (0..self.rank).any(|i| qw.get(i) < lo.get(i) || qw.get(i) > hi.get(i)) {
                return None;
            }
            let qc = rc.mul(&dinv);
            for (w, c) in d.terms.iter() {
                r.add_term(w.add(&qw), c.mul(&qc).neg());
            }
            q.add_term(qw, qc);
        }
        Some(q)
    }

    /// Splits off the leading term as a unit: self = u · rest with rest having leading term 1·x^0.
    pub fn unit_normalize(&self) -> (Laurent<C>, Weight, C) {
        match self.leading() {
            None => (self.clone(), Weight::zero(self.rank), C::one()),
            Some((w, c)) => {
                let (w, c) = (*w, c.clone());
                let cinv = c.inv().expect("nonzero leading coefficient");
                (self.mul_monomial(&w.neg(), &cinv), w, c)
            }
        }
    }

    pub fn support_in(&self, pred: impl Fn(&Weight) -> bool) -> bool {
        self.terms.keys().all(pred)
    }

    pub fn fmt_terms(
        &self,
        f: &mut fmt::Formatter<'_>,
        coeff: impl Fn(&C) -> String,
        var: &str,
    ) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (idx, (w, c)) in self.terms.iter().rev().enumerate() {
            if idx > 0 {
                write!(f, " + ")?;
            }
            let mono: Vec<String> = w
                .coords()
                .iter()
                .enumerate()
                .filter(|(_, &e)| e != 0)
                .map(|(i, &e)| if e == 1 { format!("{var}{}", i + 1) } else { format!("{var}{}^{e}", i + 1) })
                .collect();
            let cs = coeff(c);
            if mono.is_empty() {
                write!(f, "{cs}")?;
            } else if c.is_one() {
                write!(f, "{}", mono.join("*"))?;
            } else {
                write!(f, "({cs})*{}", mono.join("*"))?;
            }
        }
        Ok(())
    }
}

impl<C: Coeff + fmt::Display> fmt::Display for Laurent<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_terms(f, |c| c.to_string(), "x")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LaurentOp {
    Add,
    Sub,
    Mul,
}

impl<C: Coeff> ExactRing for Laurent<C> {
    fn is_zero(&self) -> bool {
        Laurent::is_zero(self)
    }
    fn mul(&self, o: &Self) -> Self {
        Laurent::mul(self, o)
    }
    fn sub(&self, o: &Self) -> Self {
        Laurent::sub(self, o)
    }
    fn neg(&self) -> Self {
        Laurent::neg(self)
    }
    fn div_exact(&self, d: &Self) -> Option<Self> {
        Laurent::div_exact(self, d)
    }
    fn one_like(&self) -> Self {
        Laurent::one(self.rank)
    }
    fn weight(&self) -> usize {
        self.len()
    }
}

/// Quotient num / ∏ factor^e with unit-normalized, pairwise distinct factors.
#[derive(Clone, Debug)]
pub struct Fraction<C> {
    num: Laurent<C>,
    den: Vec<(Laurent<C>, u32)>,
}

/// Fractions whose supports lie in P^m.
pub type PmFraction<C> = Fraction<C>;

impl<C: Coeff> Fraction<C> {
    pub fn from_laurent(num: Laurent<C>) -> Self {
        Fraction { num, den: Vec::new() }
    }

    pub fn zero(rank: usize) -> Self {
        Fraction::from_laurent(Laurent::zero(rank))
    }

    pub fn one(rank: usize) -> Self {
        Fraction::from_laurent(Laurent::one(rank))
    }

    pub fn new(num: Laurent<C>, den: Laurent<C>) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DenominatorZero);
        }
        let mut f = Fraction::from_laurent(num);
        f.push_factor(den, 1);
        f.cancel();
        Ok(f)
    }

    pub fn num(&self) -> &Laurent<C> {
        &self.num
    }

    pub fn den_factors(&self) -> &[(Laurent<C>, u32)] {
        &self.den
    }

    pub fn rank(&self) -> usize {
        self.num.rank()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn den_product(&self) -> Laurent<C> {
        let mut d = Laurent::one(self.rank());
        for (f, e) in &self.den {
            for _ in 0..*e {
                d = d.mul(f);
            }
        }
        d
    }

    fn push_factor(&mut self, d: Laurent<C>, e: u32) {
        let (d, w, c) = d.unit_normalize();
        let cinv = c.inv().expect("nonzero");
        for _ in 0..e {
            self.num = self.num.mul_monomial(&w.neg(), &cinv);
        }
        if d.as_constant().is_some() {
            return;
        }
        match self.den.iter_mut().find(|(f, _)| *f == d) {
            Some((_, k)) => *k += e,
            None => self.den.push((d, e)),
        }
    }

    /// Removes factors that divide the numerator.
    fn cancel(&mut self) {
        if self.num.is_zero() {
            self.den.clear();
            return;
        }
        for (f, e) in self.den.iter_mut() {
            while *e > 0 {
                match self.num.div_exact(f) {
                    Some(q) => {
                        self.num = q;
                        *e -= 1;
                    }
                    None => break,
                }
            }
        }
        self.den.retain(|(_, e)| *e > 0);
    }

    pub fn mul(&self, o: &Fraction<C>) -> Fraction<C> {
        let mut r = Fraction::from_laurent(self.num.mul(&o.num));
        if r.num.is_zero() {
            return r;
        }
        r.den = self.den.clone();
        for (f, e) in &o.den {
            r.push_factor(f.clone(), *e);
        }
        r.cancel();
        r
    }

    pub fn mul_laurent(&self, l: &Laurent<C>) -> Fraction<C> {
        let mut r = Fraction { num: self.num.mul(l), den: self.den.clone() };
        if l.len() > 1 {
            r.cancel();
        } else if r.num.is_zero() {
            r.den.clear();
        }
        r
    }

    pub fn mul_monomial(&self, w: &Weight, c: &C) -> Fraction<C> {
        let num = self.num.mul_monomial(w, c);
        if num.is_zero() {
            return Fraction::zero(self.rank());
        }
        Fraction { num, den: self.den.clone() }
    }

    pub fn scale(&self, c: &C) -> Fraction<C> {
        self.mul_monomial(&Weight::zero(self.rank()), c)
    }

    pub fn div_laurent(&self, d: &Laurent<C>) -> Result<Fraction<C>> {
        if d.is_zero() {
            return Err(Error::DenominatorZero);
        }
        let mut r = self.clone();
        r.push_factor(d.clone(), 1);
        r.cancel();
        Ok(r)
    }

    pub fn neg(&self) -> Fraction<C> {
        Fraction { num: self.num.neg(), den: self.den.clone() }
    }

    /// Numerators of self and o brought over the lcm of the two denominators.
    fn common(&self, o: &Fraction<C>) -> (Laurent<C>, Laurent<C>, Vec<(Laurent<C>, u32)>) {
        let mut lcm = self.den.clone();
        let mut extra_a = Laurent::one(self.rank());
        let mut extra_b = Laurent::one(self.rank());
        for (f, e) in &o.den {
            match lcm.iter_mut().find(|(g, _)| g == f) {
                Some((_, k)) => {
                    for _ in *k..*e {
                        extra_a = extra_a.mul(f);
                    }
                    for _ in *e..*k {
                        extra_b = extra_b.mul(f);
                    }
                    *k = (*k).max(*e);
                }
                None => {
                    for _ in 0..*e {
                        extra_a = extra_a.mul(f);
                    }
                    lcm.push((f.clone(), *e));
                }
            }
        }
        for (f, e) in &self.den {
            if !o.den.iter().any(|(g, _)| g == f) {
                for _ in 0..*e {
                    extra_b = extra_b.mul(f);
                }
            }
        }
        (self.num.mul(&extra_a), o.num.mul(&extra_b), lcm)
    }

    pub fn add(&self, o: &Fraction<C>) -> Fraction<C> {
        if o.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return o.clone();
        }
        let (a, b, den) = self.common(o);
        let mut r = Fraction { num: a.add(&b), den };
        r.cancel();
        r
    }

    pub fn sub(&self, o: &Fraction<C>) -> Fraction<C> {
        self.add(&o.neg())
    }

    /// Equality by cross-multiplication.
    pub fn equals(&self, o: &Fraction<C>) -> bool {
        let (a, b, _) = self.common(o);
        a == b
    }

    pub fn map_exponents(&self, f: impl Fn(&Weight) -> Weight) -> Fraction<C> {
        let mut r = Fraction::from_laurent(self.num.map_exponents(&f));
        for (d, e) in &self.den {
            r.push_factor(d.map_exponents(&f), *e);
        }
        r
    }

    pub fn map_coeffs<D: Coeff>(&self, f: impl Fn(&C) -> Result<D>) -> Result<Fraction<D>> {
        let mut r = Fraction::from_laurent(self.num.map_coeffs(&f)?);
        for (d, e) in &self.den {
            let dd = d.map_coeffs(&f)?;
            if dd.is_zero() {
                return Err(Error::DenominatorZero);
            }
            r.push_factor(dd, *e);
        }
        r.cancel();
        Ok(r)
    }

    /// Exact conversion to a Laurent polynomial.
    pub fn to_laurent(&self) -> Result<Laurent<C>> {
        let mut n = self.num.clone();
        for (f, e) in &self.den {
            for _ in 0..*e {
                n = n.div_exact(f).ok_or(Error::NotPolynomial)?;
            }
        }
        Ok(n)
    }
}

/// Element of K(P) as Σ_{reps} f_rep x^rep with f_rep ∈ K(P^m).
#[derive(Clone, Debug)]
pub struct CosetElement<C> {
    moduli: Vec<i32>,
    parts: BTreeMap<Weight, Fraction<C>>,
}

fn split(moduli: &[i32], w: &Weight) -> (Weight, Weight) {
    let mut r = *w;
    for (i, &m) in moduli.iter().enumerate() {
        r.set(i, w.get(i).rem_euclid(m));
    }
    (r, w.sub(&r))
}

impl<C: Coeff> CosetElement<C> {
    pub fn zero(moduli: &[i32]) -> Self {
        CosetElement { moduli: moduli.to_vec(), parts: BTreeMap::new() }
    }

    pub fn rank(&self) -> usize {
        self.moduli.len()
    }

    pub fn moduli(&self) -> &[i32] {
        &self.moduli
    }

    pub fn parts(&self) -> impl Iterator<Item = (&Weight, &Fraction<C>)> {
        self.parts.iter()
    }

    pub fn part(&self, rep: &Weight) -> Option<&Fraction<C>> {
        self.parts.get(rep)
    }

    pub fn is_zero(&self) -> bool {
        self.parts.is_empty()
    }

    /// Adds f · x^w, where f lives on P^m and w is arbitrary.
    pub fn add_part(&mut self, w: &Weight, f: Fraction<C>) {
        if f.is_zero() {
            return;
        }
        let (rep, qw) = split(&self.moduli, w);
        let f = if qw.is_zero() { f } else { f.mul_monomial(&qw, &C::one()) };
        let sum = match self.parts.remove(&rep) {
            Some(g) => g.add(&f),
            None => f,
        };
        if !sum.is_zero() {
            self.parts.insert(rep, sum);
        }
    }

    pub fn from_laurent(moduli: &[i32], l: &Laurent<C>) -> Self {
        let mut by_rep: BTreeMap<Weight, Laurent<C>> = BTreeMap::new();
        for (w, c) in l.terms() {
            let (rep, qw) = split(moduli, w);
            by_rep.entry(rep).or_insert_with(|| Laurent::zero(l.rank())).add_term(qw, c.clone());
        }
        CosetElement {
            moduli: moduli.to_vec(),
            parts: by_rep
                .into_iter()
                .filter(|(_, v)| !v.is_zero())
                .map(|(k, v)| (k, Fraction::from_laurent(v)))
                .collect(),
        }
    }

    pub fn monomial(moduli: &[i32], w: &Weight) -> Self {
        CosetElement::from_laurent(moduli, &Laurent::x(*w))
    }

    pub fn add(&self, o: &CosetElement<C>) -> CosetElement<C> {
        let mut r = self.clone();
        for (rep, f) in &o.parts {
            r.add_part(rep, f.clone());
        }
        r
    }

    pub fn sub(&self, o: &CosetElement<C>) -> CosetElement<C> {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> CosetElement<C> {
        CosetElement {
            moduli: self.moduli.clone(),
            parts: self.parts.iter().map(|(k, v)| (*k, v.neg())).collect(),
        }
    }

    pub fn scale(&self, c: &C) -> CosetElement<C> {
        if c.is_zero() {
            return CosetElement::zero(&self.moduli);
        }
        CosetElement {
            moduli: self.moduli.clone(),
            parts: self.parts.iter().map(|(k, v)| (*k, v.scale(c))).collect(),
        }
    }

    /// Multiplication by an element of K(P^m).
    pub fn mul_pm(&self, f: &Fraction<C>) -> CosetElement<C> {
        let mut r = CosetElement::zero(&self.moduli);
        for (rep, g) in &self.parts {
            let p = g.mul(f);
            if !p.is_zero() {
                r.parts.insert(*rep, p);
            }
        }
        r
    }

    /// Multiplication by x^w for arbitrary w ∈ P.
    pub fn mul_monomial(&self, w: &Weight) -> CosetElement<C> {
        let mut r = CosetElement::zero(&self.moduli);
        for (rep, g) in &self.parts {
            r.add_part(&rep.add(w), g.clone());
        }
        r
    }

    /// Multiplication by an arbitrary Laurent polynomial.
    pub fn mul_laurent(&self, l: &Laurent<C>) -> CosetElement<C> {
        let mut r = CosetElement::zero(&self.moduli);
        for (w, c) in l.terms() {
            r = r.add(&self.mul_monomial(w).scale(c));
        }
        r
    }

    /// Componentwise cross-multiplication equality.
    pub fn rational_eq(&self, o: &CosetElement<C>) -> bool {
        let keys: std::collections::BTreeSet<&Weight> = self.parts.keys().chain(o.parts.keys()).collect();
        let z = Fraction::zero(self.rank());
        keys.into_iter().all(|k| {
            let a = self.parts.get(k).unwrap_or(&z);
            let b = o.parts.get(k).unwrap_or(&z);
            a.equals(b)
        })
    }

    /// Applies a linear automorphism of P that preserves P^m.
    pub fn map_exponents(&self, f: impl Fn(&Weight) -> Weight) -> CosetElement<C> {
        let mut r = CosetElement::zero(&self.moduli);
        for (rep, g) in &self.parts {
            r.add_part(&f(rep), g.map_exponents(&f));
        }
        r
    }

    pub fn map_coeffs<D: Coeff>(&self, f: impl Fn(&C) -> Result<D>) -> Result<CosetElement<D>> {
        let mut r = CosetElement::zero(&self.moduli);
        for (rep, g) in &self.parts {
            r.add_part(rep, g.map_coeffs(&f)?);
        }
        Ok(r)
    }

    pub fn to_laurent(&self) -> Result<Laurent<C>> {
        let mut out = Laurent::zero(self.rank());
        for (rep, g) in &self.parts {
            out.add_assign(&g.to_laurent()?.shift(rep));
        }
        Ok(out)
    }

    /// The element as a single fraction over K[P].
    pub fn recombine(&self) -> Fraction<C> {
        let mut acc = Fraction::zero(self.rank());
        for (rep, g) in &self.parts {
            acc = acc.add(&g.mul_monomial(rep, &C::one()));
        }
        acc
    }

    pub fn is_polynomial(&self) -> bool {
        self.to_laurent().is_ok()
    }
}

/// Norm of `d` relative to the subring where coordinate i is divisible by m.
fn coordinate_norm<C: Coeff>(d: &Laurent<C>, i: usize, m: i32) -> Laurent<C> {
    let rank = d.rank();
    let size = m as usize;
    let mut mat: Vec<Vec<Laurent<C>>> = vec![vec![Laurent::zero(rank); size]; size];
    let unit = Weight::unit(rank, i);
    for j in 0..m {
        for (w, c) in d.terms() {
            let e = w.get(i) + j;
            let l = e.rem_euclid(m);
            let target = w.add(&unit.scale(j - l));
            mat[l as usize][j as usize].add_term(target, c.clone());
        }
    }
    determinant(mat).expect("nonempty matrix")
}

/// Splits num/den into coset components, clearing the denominator into K[P^m].
pub fn decompose<C: Coeff>(moduli: &[i32], num: &Laurent<C>, den: &Laurent<C>, cap: usize) -> Result<CosetElement<C>> {
    if den.is_zero() {
        return Err(Error::DenominatorZero);
    }
    let size: usize = moduli.iter().map(|&m| m as usize).product();
    if size > cap {
        return Err(Error::CosetGroupTooLarge { size, cap });
    }
    let mut n = num.clone();
    let mut d = den.clone();
    for (i, &m) in moduli.iter().enumerate() {
        if m == 1 || d.support_in(|w| w.get(i).rem_euclid(m) == 0) {
            continue;
        }
        let nd = coordinate_norm(&d, i, m);
        let cof = nd.div_exact(&d).ok_or_else(|| Error::InternalMismatch("norm not divisible".into()))?;
        n = n.mul(&cof);
        d = nd;
    }
    let mut by_rep: BTreeMap<Weight, Laurent<C>> = BTreeMap::new();
    for (w, c) in n.terms() {
        let (rep, qw) = split(moduli, w);
        by_rep.entry(rep).or_insert_with(|| Laurent::zero(n.rank())).add_term(qw, c.clone());
    }
    let mut out = CosetElement::zero(moduli);
    for (rep, part) in by_rep {
        out.add_part(&rep, Fraction::new(part, d.clone())?);
    }
    Ok(out)
}

impl<C: Coeff + fmt::Display> fmt::Display for CosetElement<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.parts.is_empty() {
            return write!(f, "0");
        }
        for (i, (rep, g)) in self.parts.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "[({})", g.num)?;
            for (d, e) in &g.den {
                write!(f, "/({d})^{e}")?;
            }
            write!(f, "]*x^{rep}")?;
        }
        Ok(())
    }
}

/// Laurent polynomial with symbolic coefficients.
pub type LaurentElement = Laurent<Scalar>;
pub type CosetRationalElement = CosetElement<Scalar>;

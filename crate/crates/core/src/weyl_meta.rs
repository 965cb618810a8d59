//! Chinta–Gunnells action σ, c-functions, the localized action τ, metaplectic
//! Demazure–Lusztig operators, symmetrizers and Whittaker sums.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::finite_hecke::Rep;
use crate::grouplalg::{CosetElement, Fraction, Laurent};
use crate::roots::{RootData, WeylGroup};
use crate::scalars::Coeff;
use crate::weight::Weight;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

/// Coefficients of 1_± over the enumerated group, with the normalizer W(k^{±2}).
#[derive(Clone, Debug)]
pub struct SymmetrizerSpec<C> {
    pub sign: Sign,
    pub coeffs: Vec<C>,
    pub normalizer: C,
}

impl<'a, C: Coeff> Rep<'a, C> {
    pub fn moduli(&self) -> Vec<i32> {
        self.sys.moduli()
    }

    pub fn coset_monomial(&self, w: &Weight) -> CosetElement<C> {
        CosetElement::monomial(&self.moduli(), w)
    }

    pub fn coset_from_laurent(&self, f: &Laurent<C>) -> CosetElement<C> {
        CosetElement::from_laurent(&self.moduli(), f)
    }

    /// s_i acting on exponents.
    fn reflect_fraction(&self, i: usize, f: &Fraction<C>) -> Fraction<C> {
        f.map_exponents(|w| self.sys.reflect(i, w))
    }

    pub fn sigma_s(&self, i: usize, f: &CosetElement<C>) -> CosetElement<C> {
        let sys = self.sys;
        let m = sys.m_simple(i);
        let am = sys.simple_root_m(i);
        let ai = sys.simple_root(i);
        let k2 = self.k(i).mul(self.k(i));
        let den = Laurent::one_minus(am, &k2);
        let one_minus_k2 = C::one().sub(&k2);
        let qa = sys.q_simple(i);
        let mut out = CosetElement::zero(f.moduli());
        for (lam, g) in f.parts() {
            let sg = self.reflect_fraction(i, g);
            let a = (-lam.get(i)).div_euclid(m);
            let t1 = Fraction::new(Laurent::monomial(am.scale(a), one_minus_k2.clone()), den.clone())
                .expect("nonzero denominator");
            out.add_part(lam, sg.mul(&t1));
            let gpar = self.params.g(qa - sys.b_simple(lam, i), self.class(i));
            let coef = k2.mul(gpar);
            let num = Laurent::constant(lam.len(), coef.clone()).sub(&Laurent::monomial(am.neg(), coef));
            let t2 = Fraction::new(num, den.clone()).expect("nonzero denominator");
            out.add_part(&ai.add(&sys.reflect(i, lam)), sg.mul(&t2));
        }
        out
    }

    /// σ(s_{i1} ⋯ s_{il}) f, applying s_{il} first.
    pub fn sigma_word(&self, word: &[usize], f: &CosetElement<C>) -> CosetElement<C> {
        word.iter().rev().fold(f.clone(), |acc, &i| self.sigma_s(i, &acc))
    }

    /// c_α for α given in fundamental-weight coordinates (any sign).
    pub fn c_function(&self, alpha: &Weight) -> Result<Fraction<C>> {
        let (a, _) = self
            .sys
            .root_by_weight(alpha)
            .ok_or_else(|| Error::InvalidConfig(format!("{alpha} is not a root")))?;
        Ok(self.c_function_of(a, alpha))
    }

    fn c_function_of(&self, a: &RootData, alpha: &Weight) -> Fraction<C> {
        let am = alpha.scale(a.m);
        let k = self.k_root(a);
        let k2 = k.mul(k);
        Fraction::new(Laurent::one_minus(am, &k2), Laurent::one_minus(am, &C::one())).expect("nonzero")
    }

    pub fn c_simple(&self, i: usize) -> Fraction<C> {
        let a = self.sys.simple_root(i);
        self.c_function(&a).expect("simple root")
    }

    /// τ(T_i) f = k_i f + k_i^{-1} c_i (σ(s_i) f − f).
    pub fn tau_t(&self, i: usize, f: &CosetElement<C>) -> CosetElement<C> {
        let diff = self.sigma_s(i, f).sub(f);
        f.scale(self.k(i)).add(&diff.mul_pm(&self.c_simple(i)).scale(self.kinv(i)))
    }

    pub fn tau_word(&self, word: &[usize], f: &CosetElement<C>) -> CosetElement<C> {
        word.iter().rev().fold(f.clone(), |acc, &i| self.tau_t(i, &acc))
    }

    /// 𝒯_i(f) = (1 − k_i² x^{α_i^m}) (f − x^{α_i^m} σ(s_i) f)/(1 − x^{α_i^m}) − f.
    pub fn dl_t(&self, i: usize, f: &CosetElement<C>) -> CosetElement<C> {
        let am = self.sys.simple_root_m(i);
        let k2 = self.k(i).mul(self.k(i));
        let inner = f.sub(&self.sigma_s(i, f).mul_monomial(&am));
        let factor = Fraction::new(Laurent::one_minus(am, &k2), Laurent::one_minus(am, &C::one())).expect("nonzero");
        inner.mul_pm(&factor).sub(f)
    }

    pub fn dl_word(&self, word: &[usize], f: &CosetElement<C>) -> CosetElement<C> {
        word.iter().rev().fold(f.clone(), |acc, &i| self.dl_t(i, &acc))
    }

    /// 𝒯_i on a Laurent polynomial; the result is asserted polynomial by exact division.
    pub fn dl_t_poly(&self, i: usize, f: &Laurent<C>) -> Result<Laurent<C>> {
        self.dl_t(i, &self.coset_from_laurent(f)).to_laurent()
    }

    pub fn tau_t_poly(&self, i: usize, f: &Laurent<C>) -> Result<Laurent<C>> {
        self.tau_t(i, &self.coset_from_laurent(f)).to_laurent()
    }

    /// x^{ρ−ρ^m} π(T_i) (x^{ρ^m−ρ} f).
    pub fn tau_t_via_pi(&self, i: usize, f: &Laurent<C>) -> Laurent<C> {
        let shift = self.sys.rho().sub(&self.sys.rho_m());
        self.pi_t(i, &f.shift(&shift.neg())).shift(&shift)
    }

    /// −k_i x^ρ π(T_i^{-1}) (x^{−ρ} f), the conjugation form of 𝒯_i on polynomials.
    pub fn dl_t_via_pi(&self, i: usize, f: &Laurent<C>) -> Laurent<C> {
        let rho = self.sys.rho();
        self.pi_t_inv(i, &f.shift(&rho.neg())).shift(&rho).scale(&self.k(i).neg())
    }

    /// k_w along a reduced word.
    pub fn k_word(&self, word: &[usize]) -> C {
        word.iter().fold(C::one(), |acc, &i| acc.mul(self.k(i)))
    }

    pub fn symmetrizer(&self, group: &WeylGroup, sign: Sign) -> Result<SymmetrizerSpec<C>> {
        let mut coeffs = Vec::with_capacity(group.len());
        let mut normalizer = C::zero();
        for w in &group.elements {
            let kw = self.k_word(&w.word);
            let c = match sign {
                Sign::Plus => kw.clone(),
                Sign::Minus => {
                    let inv = kw.inv()?;
                    if w.len() % 2 == 1 {
                        inv.neg()
                    } else {
                        inv
                    }
                }
            };
            let kw2 = kw.mul(&kw);
            normalizer = normalizer.add(&match sign {
                Sign::Plus => kw2,
                Sign::Minus => kw2.inv()?,
            });
            coeffs.push(c);
        }
        Ok(SymmetrizerSpec { sign, coeffs, normalizer })
    }

    /// Images T_w f for all w, computed along the parent chain of the enumeration.
    pub fn orbit_images(
        &self,
        group: &WeylGroup,
        f: &CosetElement<C>,
        op: impl Fn(usize, &CosetElement<C>) -> CosetElement<C>,
    ) -> Vec<CosetElement<C>> {
        let mut out: Vec<CosetElement<C>> = Vec::with_capacity(group.len());
        for (e, par) in group.parent.iter().enumerate() {
            let img = match par {
                None => f.clone(),
                Some((i, p)) => op(*i, &out[*p]),
            };
            debug_assert_eq!(e, out.len());
            out.push(img);
        }
        out
    }

    pub fn symmetrizer_apply(&self, group: &WeylGroup, spec: &SymmetrizerSpec<C>, f: &CosetElement<C>) -> CosetElement<C> {
        let imgs = self.orbit_images(group, f, |i, g| self.tau_t(i, g));
        imgs.iter()
            .zip(&spec.coeffs)
            .fold(CosetElement::zero(f.moduli()), |acc, (g, c)| acc.add(&g.scale(c)))
    }

    fn check_dominant(&self, lambda: &Weight) -> Result<()> {
        if !self.sys.is_dominant(lambda) {
            return Err(Error::NotDominant(lambda.to_string()));
        }
        if !self.sys.in_lattice(lambda) {
            return Err(Error::NotInLattice(lambda.to_string()));
        }
        Ok(())
    }

    /// Σ_w 𝒯_w(x^{w₀λ}).
    pub fn whittaker_dl(&self, group: &WeylGroup, lambda: &Weight) -> Result<Laurent<C>> {
        let start = group.longest().act(lambda);
        let mut imgs: Vec<Laurent<C>> = Vec::with_capacity(group.len());
        for par in &group.parent {
            let img = match par {
                None => Laurent::x(start),
                Some((i, p)) => self.dl_t_poly(*i, &imgs[*p])?,
            };
            imgs.push(img);
        }
        Ok(imgs.iter().fold(Laurent::zero(self.rank()), |acc, g| acc.add(g)))
    }

    /// (∏_{α>0} c_α) Σ_w (−1)^{ℓ(w)} x^{ρ^m − wρ^m} σ(w)(x^{w₀λ}).
    pub fn whittaker_sigma(&self, group: &WeylGroup, lambda: &Weight) -> CosetElement<C> {
        let start = self.coset_monomial(&group.longest().act(lambda));
        let imgs = self.orbit_images(group, &start, |i, g| self.sigma_s(i, g));
        let rho_m = self.sys.rho_m();
        let mut sum = CosetElement::zero(&self.moduli());
        for (w, img) in group.elements.iter().zip(&imgs) {
            let shift = rho_m.sub(&w.act(&rho_m));
            let term = img.mul_monomial(&shift);
            sum = if w.len() % 2 == 0 { sum.add(&term) } else { sum.sub(&term) };
        }
        let prod = self
            .sys
            .positive
            .iter()
            .fold(Fraction::one(self.rank()), |acc, a| acc.mul(&self.c_function_of(a, &a.weight)));
        sum.mul_pm(&prod)
    }

    /// Whittaker sum by both formulas; they must agree and give a polynomial.
    pub fn whittaker(&self, group: &WeylGroup, lambda: &Weight) -> Result<Laurent<C>> {
        self.check_dominant(lambda)?;
        let dl = self.whittaker_dl(group, lambda)?;
        let sig = self.whittaker_sigma(group, lambda);
        if !sig.rational_eq(&self.coset_from_laurent(&dl)) {
            return Err(Error::InternalMismatch(format!("Whittaker paths differ at {lambda}")));
        }
        let poly = sig.to_laurent().map_err(|_| Error::InternalMismatch("Whittaker sum is not polynomial".into()))?;
        if poly != dl {
            return Err(Error::InternalMismatch(format!("Whittaker polynomial differs at {lambda}")));
        }
        Ok(dl)
    }

    /// τ(1_+)(x^λ).
    pub fn symmetric_hl(&self, group: &WeylGroup, lambda: &Weight) -> Result<Laurent<C>> {
        self.check_dominant(lambda)?;
        let spec = self.symmetrizer(group, Sign::Plus)?;
        self.symmetrizer_apply(group, &spec, &self.coset_monomial(lambda)).to_laurent()
    }

    /// Applies σ to each monomial of a grid in parallel, collecting failures.
    pub fn par_map<T: Send>(&self, items: &[Weight], f: impl Fn(&Weight) -> T + Sync + Send) -> Vec<T>
    where
        C: Sync,
    {
        items.par_iter().map(f).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{Rat, VAR_K_LG};
    use crate::roots::{Lattice, MetaRootSystem};
    use crate::scalars::{Params, Scalar, Specialization};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn setup(t: &str, n: u32) -> (MetaRootSystem, Params<Scalar>) {
        let sys = MetaRootSystem::from_str_type(t, n, 1, Lattice::Weight).unwrap();
        let p = sys.ground_field(1, 1).unwrap().params();
        (sys, p)
    }

    fn w(c: &[i32]) -> Weight {
        Weight::new(c)
    }

    #[test]
    fn sigma_classical_at_n1() {
        let (sys, p) = setup("A2", 1);
        let rep = Rep::new(&sys, &p);
        for lam in crate::weight::grid(2, -2, 2) {
            for i in 0..2 {
                let s = rep.sigma_s(i, &rep.coset_monomial(&lam));
                assert!(s.rational_eq(&rep.coset_monomial(&sys.reflect(i, &lam))));
            }
        }
    }

    #[test]
    fn sigma_a1_n2_example() {
        let (sys, p) = setup("A1", 2);
        let rep = Rep::new(&sys, &p);
        let s = rep.sigma_s(0, &rep.coset_monomial(&w(&[1])));
        // ϖ − α^m = ϖ − 4ϖ
        assert!(s.rational_eq(&rep.coset_monomial(&w(&[-3]))));
    }

    #[test]
    fn sigma_fixes_rho_shift() {
        for t in ["A2", "B2"] {
            for n in 1..=3 {
                let (sys, p) = setup(t, n);
                let rep = Rep::new(&sys, &p);
                let v = sys.rho().sub(&sys.rho_m());
                for i in 0..2 {
                    let s = rep.sigma_s(i, &rep.coset_monomial(&v));
                    assert!(s.rational_eq(&rep.coset_monomial(&v)), "{t} n={n}");
                }
            }
        }
    }

    #[test]
    fn c_function_transforms() {
        let (sys, p) = setup("B2", 2);
        let rep = Rep::new(&sys, &p);
        let g = sys.weyl_group().unwrap();
        for a in &sys.positive {
            let ca = rep.c_function(&a.weight).unwrap();
            for el in &g.elements {
                let lhs = ca.map_exponents(|x| el.act(x));
                let rhs = rep.c_function(&el.act(&a.weight)).unwrap();
                assert!(lhs.equals(&rhs));
            }
        }
        let a = &sys.positive[0];
        let prod = rep.c_function(&a.weight).unwrap().mul(&rep.c_function(&a.weight.neg()).unwrap());
        let am = a.weight.scale(a.m);
        let k2 = rep.k_root(a).mul(rep.k_root(a));
        let expect_num = Laurent::one_minus(am, &k2).mul(&Laurent::one_minus(am.neg(), &k2));
        let expect_den = Laurent::one_minus(am, &Scalar::one()).mul(&Laurent::one_minus(am.neg(), &Scalar::one()));
        assert!(prod.equals(&Fraction::new(expect_num, expect_den).unwrap()));
    }

    #[test]
    fn dl_of_one_at_n1() {
        // (1 − k²x^α)(1 − x^α)/(1 − x^α) − 1 = −k² x^α
        let (sys, p) = setup("A1", 1);
        let rep = Rep::new(&sys, &p);
        let one = Laurent::one(1);
        let k2 = Scalar::var_pow(VAR_K_LG, 2);
        let expect = Laurent::monomial(w(&[2]), k2.neg());
        assert_eq!(rep.dl_t_poly(0, &one).unwrap(), expect);
        assert_eq!(rep.dl_t_via_pi(0, &one), expect);
    }

    #[test]
    fn dl_matches_conjugated_pi() {
        for t in ["A1", "A2", "B2"] {
            for n in 1..=3 {
                let (sys, p) = setup(t, n);
                let rep = Rep::new(&sys, &p);
                for lam in crate::weight::grid(sys.rank, -1, 1) {
                    for i in 0..sys.rank {
                        let f = Laurent::x(lam);
                        assert_eq!(rep.dl_t_poly(i, &f).unwrap(), rep.dl_t_via_pi(i, &f), "{t} n={n} {lam} i={i}");
                    }
                }
            }
        }
    }

    #[test]
    fn a2_normalizer() {
        let (sys, p) = setup("A2", 1);
        let rep = Rep::new(&sys, &p);
        let g = sys.weyl_group().unwrap();
        let spec = rep.symmetrizer(&g, Sign::Plus).unwrap();
        let k2 = Scalar::var_pow(VAR_K_LG, 2);
        let expect = Scalar::one()
            .add(&k2.mul(&Scalar::from_i64(2)))
            .add(&k2.pow(2).unwrap().mul(&Scalar::from_i64(2)))
            .add(&k2.pow(3).unwrap());
        assert_eq!(spec.normalizer, expect);
    }

    #[test]
    fn whittaker_a1_classical_bruteforce() {
        let (sys, p) = setup("A1", 1);
        let rep = Rep::new(&sys, &p);
        let g = sys.weyl_group().unwrap();
        let wh = rep.whittaker(&g, &w(&[1])).unwrap();
        // Σ_w 𝒯_w x^{-ϖ} = x^{-ϖ} + 𝒯(x^{-ϖ}), expanded by hand at n = 1:
        // 𝒯 x^{-ϖ} = (1 − k²x^{2ϖ})(x^{-ϖ} − x^{2ϖ}x^{ϖ})/(1 − x^{2ϖ}) − x^{-ϖ}
        //          = (1 − k²x^{2ϖ})x^{-ϖ}(1 + x^{2ϖ}) − x^{-ϖ} = x^{ϖ} − k² x^{ϖ} − k² x^{3ϖ}
        let k2 = Scalar::var_pow(VAR_K_LG, 2);
        let mut expect = Laurent::x(w(&[-1]));
        expect.add_term(w(&[1]), Scalar::one().sub(&k2));
        expect.add_term(w(&[3]), k2.neg());
        assert_eq!(wh, expect);
        assert!(matches!(rep.whittaker(&g, &w(&[-1])), Err(Error::NotDominant(_))));
    }

    #[test]
    fn randomized_sigma_involution() {
        let (sys, p) = setup("B2", 3);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let sp = Specialization::random(&mut rng);
        let pr: Params<Rat> = sp.params(&p).unwrap();
        let rep = Rep::new(&sys, &pr);
        for lam in crate::weight::grid(2, -2, 2) {
            for i in 0..2 {
                let f = rep.coset_monomial(&lam);
                assert!(rep.sigma_s(i, &rep.sigma_s(i, &f)).rational_eq(&f));
            }
        }
    }
}

//! The reflection representation of H(k) and the metaplectic affine Hecke action π on K[P].

use crate::error::{Error, Result};
use crate::grouplalg::Laurent;
use crate::roots::{MetaRootSystem, RootData};
use crate::scalars::{Coeff, LengthClass, Params};
use crate::weight::Weight;

/// Vector in the direct sum of permutation modules, basis v_μ.
pub type VModuleVector<C> = Laurent<C>;

/// A root system together with parameter values; all operators hang off this.
#[derive(Clone, Copy)]
pub struct Rep<'a, C> {
    pub sys: &'a MetaRootSystem,
    pub params: &'a Params<C>,
}

impl<'a, C: Coeff> Rep<'a, C> {
    pub fn new(sys: &'a MetaRootSystem, params: &'a Params<C>) -> Self {
        Rep { sys, params }
    }

    pub fn rank(&self) -> usize {
        self.sys.rank
    }

    pub fn class(&self, i: usize) -> LengthClass {
        self.sys.class_simple(i)
    }

    pub fn k(&self, i: usize) -> &C {
        self.params.k(self.class(i))
    }

    pub fn kinv(&self, i: usize) -> &C {
        self.params.kinv(self.class(i))
    }

    pub fn k_root(&self, a: &RootData) -> &C {
        self.params.k(a.class)
    }

    pub fn k_minus_kinv(&self, i: usize) -> C {
        self.k(i).sub(self.kinv(i))
    }

    pub fn refl_t(&self, i: usize, v: &VModuleVector<C>) -> VModuleVector<C> {
        let mut out = Laurent::zero(v.rank());
        let kk = self.k_minus_kinv(i);
        for (mu, c) in v.terms() {
            let s = mu.get(i);
            let smu = self.sys.reflect(i, mu);
            if s > 0 {
                out.add_term(smu, c.clone());
            } else if s == 0 {
                out.add_term(*mu, c.mul(self.k(i)));
            } else {
                out.add_term(*mu, c.mul(&kk));
                out.add_term(smu, c.clone());
            }
        }
        out
    }

    /// x^λ (1 − Y^{−c})/(1 − Y), Y = x^{α_i^m}, c = (q(λ), α_i^{m∨}).
    pub fn nabla_bar(&self, i: usize, f: &Laurent<C>) -> Laurent<C> {
        let m = self.sys.m_simple(i);
        let am = self.sys.simple_root_m(i);
        let mut out = Laurent::zero(f.rank());
        for (lam, coef) in f.terms() {
            let c = lam.get(i).div_euclid(m);
            if c > 0 {
                for t in 1..=c {
                    out.add_term(lam.sub(&am.scale(t)), coef.neg());
                }
            } else if c < 0 {
                for t in 0..-c {
                    out.add_term(lam.add(&am.scale(t)), coef.clone());
                }
            }
        }
        out
    }

    /// p_i(λ̄) = −k_i g_{−B(λ,α_i)}(size(α_i^m)).
    pub fn p_factor(&self, i: usize, lambda: &Weight) -> C {
        let b = self.sys.b_simple(lambda, i);
        self.k(i).mul(self.params.g(-b, self.class(i))).neg()
    }

    pub fn pi_t(&self, i: usize, f: &Laurent<C>) -> Laurent<C> {
        let kk = self.k_minus_kinv(i);
        let mut out = self.nabla_bar(i, f).scale(&kk);
        for (lam, c) in f.terms() {
            out.add_term(self.sys.reflect(i, lam), c.mul(&self.p_factor(i, lam)));
        }
        out
    }

    pub fn pi_t_inv(&self, i: usize, f: &Laurent<C>) -> Laurent<C> {
        self.pi_t(i, f).sub(&f.scale(&self.k_minus_kinv(i)))
    }

    /// π(x^ν) for ν ∈ P^m.
    pub fn pi_x(&self, nu: &Weight, f: &Laurent<C>) -> Result<Laurent<C>> {
        if !self.sys.in_pm(nu) {
            return Err(Error::NotInLattice(nu.to_string()));
        }
        Ok(f.shift(nu))
    }

    /// Classical divided difference (x^ν − x^{s_iν})/(1 − x^{α_i^m}) for ν ∈ P^m.
    pub fn nabla_m(&self, i: usize, nu: &Weight) -> Result<Laurent<C>> {
        if !self.sys.in_pm(nu) {
            return Err(Error::NotInLattice(nu.to_string()));
        }
        let num = Laurent::<C>::x(*nu).sub(&Laurent::x(self.sys.reflect(i, nu)));
        let den = Laurent::one_minus(self.sys.simple_root_m(i), &C::one());
        num.div_exact(&den).ok_or(Error::NotPolynomial)
    }

    pub fn h(&self, j: i64, y: LengthClass) -> Result<C> {
        let n = self.params.n as i64;
        if j >= 0 {
            Ok(C::one())
        } else if j % n == 0 {
            Ok(self.params.k(y).clone())
        } else {
            Ok(self.params.kinv(y).mul(&self.params.g(j, y).inv()?).neg())
        }
    }

    pub fn c_norm(&self, lambda: &Weight) -> Result<C> {
        if !self.sys.in_c(lambda) {
            return Err(Error::NotInC(lambda.to_string()));
        }
        let mut acc = C::one();
        for a in &self.sys.positive {
            let qa = self.sys.kappa as i64 * a.norm2 as i64 / 2;
            acc = acc.mul(&self.h(qa * self.sys.pair_coroot(lambda, a), a.class)?);
        }
        Ok(acc)
    }

    pub fn d_factor(&self, i: usize, lambda: &Weight) -> Result<C> {
        let ratio = self.c_norm(lambda)?.div(&self.c_norm(&self.sys.reflect(i, lambda))?)?;
        let s = lambda.get(i);
        let m = self.sys.m_simple(i);
        Ok(if s == 0 {
            self.k(i).mul(&ratio)
        } else if s == m {
            self.k_minus_kinv(i).add(&ratio)
        } else {
            ratio
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::VAR_K_LG;
    use crate::roots::Lattice;
    use crate::scalars::Scalar;

    fn setup(t: &str, n: u32, eps: i8) -> (MetaRootSystem, Params<Scalar>) {
        let sys = MetaRootSystem::from_str_type(t, n, 1, Lattice::Weight).unwrap();
        let p = sys.ground_field(eps, eps).unwrap().params();
        (sys, p)
    }

    fn x(c: &[i32]) -> Laurent<Scalar> {
        Laurent::x(Weight::new(c))
    }

    fn k() -> Scalar {
        Scalar::var(VAR_K_LG)
    }

    #[test]
    fn reflection_rep_cases() {
        let (sys, p) = setup("A2", 1, 1);
        let rep = Rep::new(&sys, &p);
        let v = x(&[1, 0]);
        assert_eq!(rep.refl_t(1, &v), v.scale(&k()));
        let sv = x(&[-1, 1]);
        assert_eq!(rep.refl_t(0, &v), sv);
        let kk = k().sub(&k().inv().unwrap());
        assert_eq!(rep.refl_t(0, &sv), sv.scale(&kk).add(&v));
    }

    #[test]
    fn nabla_bar_examples() {
        let (sys, p) = setup("A1", 2, 1);
        let rep = Rep::new(&sys, &p);
        assert!(rep.nabla_bar(0, &x(&[1])).is_zero());
        assert_eq!(rep.nabla_bar(0, &x(&[2])), x(&[-2]).neg());
        assert_eq!(rep.nabla_bar(0, &x(&[-1])), x(&[-1]));
        // on P^m it is the classical divided difference
        for nu in [-6, -4, -2, 0, 2, 4, 6] {
            let lhs = rep.nabla_bar(0, &x(&[nu]));
            assert_eq!(lhs, rep.nabla_m(0, &Weight::new(&[nu])).unwrap(), "nu={nu}");
        }
    }

    #[test]
    fn p_factor_examples() {
        for eps in [1i8, -1] {
            let (sys, p) = setup("A1", 2, eps);
            let rep = Rep::new(&sys, &p);
            assert_eq!(rep.p_factor(0, &Weight::new(&[0])), k());
            assert_eq!(rep.p_factor(0, &Weight::new(&[4])), k());
            assert_eq!(rep.p_factor(0, &Weight::new(&[1])), Scalar::from_i64(-(eps as i64)));
            let pt = rep.pi_t(0, &x(&[1]));
            assert_eq!(pt, x(&[-1]).scale(&Scalar::from_i64(-(eps as i64))));
        }
    }

    #[test]
    fn p_factor_depends_on_coset_only() {
        for t in ["A2", "B2", "G2"] {
            for n in 1..=4 {
                let sys = MetaRootSystem::from_str_type(t, n, 1, Lattice::Weight).unwrap();
                let p = sys.ground_field(1, -1).unwrap().params();
                let rep = Rep::new(&sys, &p);
                for lam in crate::weight::grid(2, -3, 3) {
                    for i in 0..2 {
                        let q = sys.q_part(&lam);
                        assert_eq!(rep.p_factor(i, &lam), rep.p_factor(i, &lam.sub(&q)));
                    }
                }
            }
        }
    }

    #[test]
    fn scaffold_basic_cases() {
        let (sys, p) = setup("A2", 3, 1);
        let rep = Rep::new(&sys, &p);
        assert_eq!(rep.c_norm(&Weight::new(&[0, 0])).unwrap(), Scalar::one());
        assert_eq!(rep.d_factor(1, &Weight::new(&[1, 0])).unwrap(), k());
        assert!(matches!(rep.c_norm(&Weight::new(&[4, 0])), Err(Error::NotInC(_))));
    }
}

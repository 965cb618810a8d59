//! GL_r double affine Hecke algebra: the metaplectic basic representation,
//! Y-operators, their spectrum, the polynomials E_μ and parameter transport.

use std::collections::{BTreeMap, BTreeSet};

use num_integer::Integer;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::grouplalg::Laurent;
use crate::linalg::bareiss_echelon;
use crate::poly::{self, Poly, VAR_Q};
use crate::scalars::{identity_images, Coeff, GroundField, LengthClass, Params, Scalar};
use crate::weight::Weight;

pub type GLWeight = Weight;
pub type GLLaurent<C> = Laurent<C>;

pub const DEFAULT_CLOSURE_CAP: usize = 5000;

const LG: LengthClass = LengthClass::Lg;

/// Metaplectic data (n, κ) for GL_r together with the derived κ′ and m.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GLMetaData {
    pub r: usize,
    pub n: u32,
    pub kappa: i64,
    pub kappa_p: u32,
    pub m: u32,
    pub eps: i8,
    pub field: GroundField,
}

impl GLMetaData {
    pub fn new(r: usize, n: u32, kappa: i64, eps: i8) -> Result<Self> {
        if !(2..=crate::weight::MAX_COORDS).contains(&r) {
            return Err(Error::InvalidConfig(format!("r must lie in 2..={}", crate::weight::MAX_COORDS)));
        }
        if kappa == 0 {
            return Err(Error::InvalidConfig("kappa must be nonzero".into()));
        }
        let field = GroundField::simple(n, eps)?;
        let kappa_p = (n as i64).gcd(&kappa) as u32;
        Ok(GLMetaData { r, n, kappa, kappa_p, m: n / kappa_p, eps, field })
    }

    pub fn params(&self) -> Params<Scalar> {
        self.field.params()
    }

    pub fn theta(&self) -> Weight {
        let mut t = Weight::zero(self.r);
        t.set(0, 1);
        t.set(self.r - 1, -1);
        t
    }

    pub fn alpha(&self, j: usize) -> Weight {
        let mut a = Weight::zero(self.r);
        a.set(j - 1, 1);
        a.set(j, -1);
        a
    }

    /// s_1 ⋯ s_{r−1} λ = (λ_r, λ_1, …, λ_{r−1}).
    pub fn rotate(&self, lambda: &Weight) -> Weight {
        let mut out = *lambda;
        out.set(0, lambda.get(self.r - 1));
        for i in 1..self.r {
            out.set(i, lambda.get(i - 1));
        }
        out
    }

    pub fn rotate_inv(&self, lambda: &Weight) -> Weight {
        let mut out = *lambda;
        for i in 0..self.r - 1 {
            out.set(i, lambda.get(i + 1));
        }
        out.set(self.r - 1, lambda.get(0));
        out
    }

    /// Finite part of s_j: the transposition (j, j+1), or (1, r) for j = 0.
    pub fn swap(&self, j: usize, lambda: &Weight) -> Weight {
        let (a, b) = if j == 0 { (0, self.r - 1) } else { (j - 1, j) };
        let mut out = *lambda;
        out.set(a, lambda.get(b));
        out.set(b, lambda.get(a));
        out
    }

    /// Coordinatewise residues in [0, m).
    pub fn residue(&self, lambda: &Weight) -> Weight {
        let m = self.m as i32;
        let c: Vec<i32> = lambda.coords().iter().map(|x| x.rem_euclid(m)).collect();
        Weight::new(&c)
    }

    pub fn in_m_lattice(&self, lambda: &Weight) -> bool {
        lambda.coords().iter().all(|x| x % self.m as i32 == 0)
    }
}

/// Element σ τ(ν) of S_r ⋉ mℤ^r; `perm[i]` is the image of ε_i under σ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineWeylGL {
    pub perm: Vec<usize>,
    pub nu: Weight,
}

impl AffineWeylGL {
    pub fn identity(r: usize) -> Self {
        AffineWeylGL { perm: (0..r).collect(), nu: Weight::zero(r) }
    }

    fn finite(perm: Vec<usize>) -> Self {
        let r = perm.len();
        AffineWeylGL { perm, nu: Weight::zero(r) }
    }

    fn translation(nu: Weight) -> Self {
        AffineWeylGL { perm: (0..nu.len()).collect(), nu }
    }

    pub fn act_finite(&self, v: &Weight) -> Weight {
        let mut out = *v;
        for (i, &p) in self.perm.iter().enumerate() {
            out.set(p, v.get(i));
        }
        out
    }

    fn inv_finite(&self, v: &Weight) -> Weight {
        let mut out = *v;
        for (i, &p) in self.perm.iter().enumerate() {
            out.set(i, v.get(p));
        }
        out
    }

    /// (σ₁τ(ν₁))(σ₂τ(ν₂)) = σ₁σ₂ τ(σ₂^{-1}ν₁ + ν₂).
    pub fn compose(&self, o: &AffineWeylGL) -> AffineWeylGL {
        let perm = o.perm.iter().map(|&p| self.perm[p]).collect();
        AffineWeylGL { perm, nu: o.inv_finite(&self.nu).add(&o.nu) }
    }

    /// The simple reflection s_j^{(m)}.
    pub fn simple(data: &GLMetaData, j: usize) -> Self {
        let r = data.r;
        let (a, b) = if j == 0 { (0, r - 1) } else { (j - 1, j) };
        let mut perm: Vec<usize> = (0..r).collect();
        perm.swap(a, b);
        let s = AffineWeylGL::finite(perm);
        if j == 0 {
            AffineWeylGL::translation(data.theta().scale(data.m as i32)).compose(&s)
        } else {
            s
        }
    }

    /// ω^{(m)} = s_1 ⋯ s_{r−1} τ(mε_r).
    pub fn omega(data: &GLMetaData) -> Self {
        let r = data.r;
        let perm = (0..r).map(|i| (i + 1) % r).collect();
        let t = Weight::unit(r, r - 1).scale(data.m as i32);
        AffineWeylGL::finite(perm).compose(&AffineWeylGL::translation(t))
    }

    /// x^{wλ} = q^{e} x^{μ}, returned as (e, μ).
    pub fn act_monomial(&self, lambda: &Weight) -> (i64, Weight) {
        (-self.nu.dot(lambda), self.act_finite(lambda))
    }

    /// Action on affine linear functionals (v, c).
    pub fn act_affine(&self, v: &Weight, c: i64) -> (Weight, i64) {
        (self.act_finite(v), c - self.nu.dot(v))
    }
}

/// The basic representation π̂ with parameter values in C.
#[derive(Clone, Copy)]
pub struct GlRep<'a, C> {
    pub data: &'a GLMetaData,
    pub params: &'a Params<C>,
    /// Negative control: flips the sign of p_0.
    pub corrupt_p0: bool,
}

impl<'a, C: Coeff> GlRep<'a, C> {
    pub fn new(data: &'a GLMetaData, params: &'a Params<C>) -> Self {
        GlRep { data, params, corrupt_p0: false }
    }

    pub fn k(&self) -> &C {
        self.params.k(LG)
    }

    pub fn kinv(&self) -> &C {
        self.params.kinv(LG)
    }

    pub fn k_minus_kinv(&self) -> C {
        self.k().sub(self.kinv())
    }

    fn pairing(&self, j: usize, lambda: &Weight) -> i32 {
        if j == 0 {
            lambda.get(0) - lambda.get(self.data.r - 1)
        } else {
            lambda.get(j - 1) - lambda.get(j)
        }
    }

    /// p_j(λ̄^m).
    pub fn p_factor(&self, j: usize, lambda: &Weight) -> C {
        let s = self.pairing(j, lambda) as i64 * self.data.kappa;
        let idx = if j == 0 { s } else { -s };
        let p = self.k().mul(self.params.g(idx, LG)).neg();
        if j == 0 && self.corrupt_p0 {
            p.neg()
        } else {
            p
        }
    }

    /// ∇̄_j^{(m)} x^λ.
    pub fn nabla_bar(&self, j: usize, lambda: &Weight) -> Laurent<C> {
        let r = self.data.r;
        let m = self.data.m as i32;
        let mut out = Laurent::zero(r);
        if j == 0 {
            // X = q^{m²} x^{−mθ}; the factor is (1 − X^{−c})/(1 − X)
            let c = (-self.pairing(0, lambda)).div_euclid(m);
            let step = self.data.theta().scale(-m);
            let qm2 = (m as i64) * (m as i64);
            if c > 0 {
                for t in 1..=c {
                    let coef = self.params.q_pow(-qm2 * t as i64).neg();
                    out.add_term(lambda.sub(&step.scale(t)), coef);
                }
            } else if c < 0 {
                for t in 0..-c {
                    out.add_term(lambda.add(&step.scale(t)), self.params.q_pow(qm2 * t as i64));
                }
            }
        } else {
            let c = self.pairing(j, lambda).div_euclid(m);
            let step = self.data.alpha(j).scale(m);
            if c > 0 {
                for t in 1..=c {
                    out.add_term(lambda.sub(&step.scale(t)), C::one().neg());
                }
            } else if c < 0 {
                for t in 0..-c {
                    out.add_term(lambda.add(&step.scale(t)), C::one());
                }
            }
        }
        out
    }

    /// x^{s_j^{(m)}λ} = q^e x^μ.
    pub fn reflect_monomial(&self, j: usize, lambda: &Weight) -> (i64, Weight) {
        let mu = self.data.swap(j, lambda);
        if j == 0 {
            (self.data.m as i64 * self.pairing(0, lambda) as i64, mu)
        } else {
            (0, mu)
        }
    }

    pub fn pi_t(&self, j: usize, f: &Laurent<C>) -> Laurent<C> {
        let kk = self.k_minus_kinv();
        let mut out = Laurent::zero(self.data.r);
        for (lam, c) in f.terms() {
            out.add_assign(&self.nabla_bar(j, lam).scale(&c.mul(&kk)));
            let (e, mu) = self.reflect_monomial(j, lam);
            let coef = self.p_factor(j, lam).mul(&self.params.q_pow(e));
            out.add_term(mu, c.mul(&coef));
        }
        out
    }

    /// T^{-1} = T − (k − k^{-1}).
    pub fn pi_t_inv(&self, j: usize, f: &Laurent<C>) -> Laurent<C> {
        self.pi_t(j, f).sub(&f.scale(&self.k_minus_kinv()))
    }

    /// π̂(ω)^{±1}.
    pub fn omega(&self, f: &Laurent<C>, inverse: bool) -> Laurent<C> {
        let m = self.data.m as i64;
        let r = self.data.r;
        let mut out = Laurent::zero(r);
        for (lam, c) in f.terms() {
            if inverse {
                let e = m * lam.get(0) as i64;
                out.add_term(self.data.rotate_inv(lam), c.mul(&self.params.q_pow(e)));
            } else {
                let e = -m * lam.get(r - 1) as i64;
                out.add_term(self.data.rotate(lam), c.mul(&self.params.q_pow(e)));
            }
        }
        out
    }

    /// Y^{mε_i} = T_{i−1}^{-1} ⋯ T_1^{-1} ω T_{r−1} ⋯ T_i, for 1 ≤ i ≤ r.
    pub fn y_act(&self, i: usize, f: &Laurent<C>) -> Laurent<C> {
        let r = self.data.r;
        let mut g = f.clone();
        for j in i..r {
            g = self.pi_t(j, &g);
        }
        g = self.omega(&g, false);
        for j in 1..i {
            g = self.pi_t_inv(j, &g);
        }
        g
    }

    fn sigma_value(&self, s: i64) -> C {
        let m = self.data.m as i64;
        if s > 0 && s % m == 0 {
            self.kinv().clone()
        } else {
            self.k().mul(self.params.g(-self.data.kappa * s, LG)).neg()
        }
    }

    /// (γ_μ)^λ for λ ∈ mℤ^r.
    pub fn gamma_eval(&self, mu: &Weight, lambda: &Weight) -> Result<C> {
        if !self.data.in_m_lattice(lambda) {
            return Err(Error::NotInLattice(lambda.to_string()));
        }
        let m = self.data.m as i32;
        let r = self.data.r;
        let mut acc = self.params.q_pow(-lambda.dot(mu));
        for a in 0..r {
            for b in a + 1..r {
                let e = (lambda.get(a) - lambda.get(b)) / m;
                if e != 0 {
                    let s = (mu.get(a) - mu.get(b)) as i64;
                    acc = acc.mul(&self.sigma_value(s).pow(e)?);
                }
            }
        }
        Ok(acc)
    }

    pub fn gamma_i(&self, mu: &Weight, i: usize) -> Result<C> {
        let lam = Weight::unit(self.data.r, i - 1).scale(self.data.m as i32);
        self.gamma_eval(mu, &lam)
    }

    /// Residual of the joint eigen-equation: Σ_i ‖Y_i E − γ_i E‖ vanishes iff zero vector.
    pub fn is_eigenfunction(&self, mu: &Weight, e: &Laurent<C>) -> Result<bool> {
        for i in 1..=self.data.r {
            let g = self.gamma_i(mu, i)?;
            if self.y_act(i, e) != e.scale(&g) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// x^{b_j}: q^{m²}x^{−mθ} for j = 0, x^{mα_j} otherwise, as a Laurent element.
    fn x_b(&self, j: usize) -> Laurent<C> {
        let m = self.data.m as i32;
        if j == 0 {
            Laurent::monomial(self.data.theta().scale(-m), self.params.q_pow((m * m) as i64))
        } else {
            Laurent::x(self.data.alpha(j).scale(m))
        }
    }

    /// Cross relation residual for T_j and x^λ (λ ∈ mℤ^r) applied to f.
    pub fn cross_residual(&self, j: usize, lambda: &Weight, f: &Laurent<C>) -> Result<Laurent<C>> {
        if !self.data.in_m_lattice(lambda) {
            return Err(Error::NotInLattice(lambda.to_string()));
        }
        let (e, slam) = self.reflect_monomial(j, lambda);
        let xs = Laurent::monomial(slam, self.params.q_pow(e));
        let xl = Laurent::x(*lambda);
        let lhs = self.pi_t(j, &f.shift(lambda)).sub(&self.pi_t(j, f).mul(&xs));
        let den = Laurent::one(self.data.r).sub(&self.x_b(j));
        let dd = xl.sub(&xs).div_exact(&den).ok_or(Error::NotPolynomial)?;
        Ok(lhs.sub(&dd.mul(f).scale(&self.k_minus_kinv())))
    }
}

/// Which defining relations held on the tested monomials.
#[derive(Clone, Debug, Default, Serialize)]
pub struct DahaReport {
    pub braid: bool,
    pub hecke: bool,
    pub omega: bool,
    pub cross: bool,
    pub y_commute: bool,
    pub p_shift: bool,
    pub monomials: usize,
    pub failures: Vec<String>,
}

impl DahaReport {
    pub fn all_pass(&self) -> bool {
        self.braid && self.hecke && self.omega && self.cross && self.y_commute && self.p_shift
    }
}

/// All λ ∈ ℤ^r with Σ|λ_i| ≤ bound.
pub fn degree_grid(r: usize, bound: i32) -> Vec<Weight> {
    crate::weight::grid(r, -bound, bound)
        .into_iter()
        .filter(|w| w.abs_sum() <= bound)
        .collect()
}

pub fn check_daha_relations<C: Coeff>(rep: &GlRep<'_, C>, degree_bound: i32) -> DahaReport {
    let data = rep.data;
    let r = data.r;
    let m = data.m as i32;
    let grid = degree_grid(r, degree_bound);
    let mut rep_out = DahaReport { monomials: grid.len(), ..Default::default() };
    let k = rep.k().clone();
    let kinv = rep.kinv().clone();

    let braid_fail: Vec<String> = grid
        .par_iter()
        .flat_map_iter(|lam| {
            let f = Laurent::x(*lam);
            let mut fails = Vec::new();
            for a in 0..r {
                for b in a + 1..r {
                    let adjacent = r > 2 && ((b - a) == 1 || (a == 0 && b == r - 1));
                    let ok = if adjacent {
                        let l = rep.pi_t(a, &rep.pi_t(b, &rep.pi_t(a, &f)));
                        let rr = rep.pi_t(b, &rep.pi_t(a, &rep.pi_t(b, &f)));
                        l == rr
                    } else if r == 2 {
                        true
                    } else {
                        rep.pi_t(a, &rep.pi_t(b, &f)) == rep.pi_t(b, &rep.pi_t(a, &f))
                    };
                    if !ok {
                        fails.push(format!("braid T{a},T{b} at x^{lam}"));
                    }
                }
            }
            fails
        })
        .collect();

    let hecke_fail: Vec<String> = grid
        .par_iter()
        .flat_map_iter(|lam| {
            let f = Laurent::x(*lam);
            (0..r)
                .filter(|&j| {
                    let t = rep.pi_t(j, &f);
                    let u = t.add(&f.scale(&kinv));
                    let v = rep.pi_t(j, &u).sub(&u.scale(&k));
                    !v.is_zero()
                })
                .map(|j| format!("hecke T{j} at x^{lam}"))
                .collect::<Vec<_>>()
        })
        .collect();

    let omega_fail: Vec<String> = grid
        .par_iter()
        .flat_map_iter(|lam| {
            let f = Laurent::x(*lam);
            let mut fails = Vec::new();
            if rep.omega(&rep.omega(&f, true), false) != f || rep.omega(&rep.omega(&f, false), true) != f {
                fails.push(format!("omega inverse at x^{lam}"));
            }
            for j in 0..r {
                let lhs = rep.omega(&rep.pi_t(j, &f), false);
                let rhs = rep.pi_t((j + 1) % r, &rep.omega(&f, false));
                if lhs != rhs {
                    fails.push(format!("omega T{j} = T{} omega at x^{lam}", (j + 1) % r));
                }
            }
            fails
        })
        .collect();

    let mut shifts = Vec::new();
    for i in 0..r {
        shifts.push(Weight::unit(r, i).scale(m));
        shifts.push(Weight::unit(r, i).scale(-m));
        for j in i + 1..r {
            shifts.push(Weight::unit(r, i).sub(&Weight::unit(r, j)).scale(m));
        }
    }
    let cross_fail: Vec<String> = grid
        .par_iter()
        .flat_map_iter(|lam| {
            let f = Laurent::x(*lam);
            let mut fails = Vec::new();
            for nu in &shifts {
                for j in 0..r {
                    match rep.cross_residual(j, nu, &f) {
                        Ok(res) if res.is_zero() => {}
                        _ => fails.push(format!("cross T{j}, x^{nu} at x^{lam}")),
                    }
                }
                let w = AffineWeylGL::omega(data);
                let (e, mu) = w.act_monomial(nu);
                let lhs = rep.omega(&f.shift(nu), false);
                let rhs = rep.omega(&f, false).mul_monomial(&mu, &rep.params.q_pow(e));
                if lhs != rhs {
                    fails.push(format!("omega x^{nu} at x^{lam}"));
                }
            }
            fails
        })
        .collect();

    let y_fail: Vec<String> = grid
        .par_iter()
        .flat_map_iter(|lam| {
            let f = Laurent::x(*lam);
            let ys: Vec<Laurent<C>> = (1..=r).map(|i| rep.y_act(i, &f)).collect();
            let mut fails = Vec::new();
            for a in 1..=r {
                for b in a + 1..=r {
                    if rep.y_act(a, &ys[b - 1]) != rep.y_act(b, &ys[a - 1]) {
                        fails.push(format!("Y{a} Y{b} commute at x^{lam}"));
                    }
                }
            }
            fails
        })
        .collect();

    let mut p_fail = Vec::new();
    for lam in crate::weight::grid(r, 0, m - 1) {
        for j in 0..r {
            if rep.p_factor((j + 1) % r, &data.rotate(&lam)) != rep.p_factor(j, &lam) {
                p_fail.push(format!("p shift j={j} at {lam}"));
            }
            let shifted = lam.add(&Weight::unit(r, j).scale(m));
            if rep.p_factor(j, &shifted) != rep.p_factor(j, &lam) {
                p_fail.push(format!("p period j={j} at {lam}"));
            }
        }
    }

    rep_out.braid = braid_fail.is_empty();
    rep_out.hecke = hecke_fail.is_empty();
    rep_out.omega = omega_fail.is_empty();
    rep_out.cross = cross_fail.is_empty();
    rep_out.y_commute = y_fail.is_empty();
    rep_out.p_shift = p_fail.is_empty();
    for v in [braid_fail, hecke_fail, omega_fail, cross_fail, y_fail, p_fail] {
        rep_out.failures.extend(v);
    }
    rep_out
}

/// Options for the E_μ solver.
#[derive(Clone, Copy, Debug)]
pub struct SolverOptions {
    pub cap: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions { cap: DEFAULT_CLOSURE_CAP }
    }
}

/// Smallest span of monomials containing x^μ and stable under every Y^{mε_i};
/// returns the monomials and the images Y_i x^ν for each.
fn closure(rep: &GlRep<'_, Scalar>, mu: &Weight, cap: usize) -> Result<BTreeMap<Weight, Vec<Laurent<Scalar>>>> {
    let r = rep.data.r;
    let mut images: BTreeMap<Weight, Vec<Laurent<Scalar>>> = BTreeMap::new();
    let mut seen: BTreeSet<Weight> = BTreeSet::from([*mu]);
    let mut frontier = vec![*mu];
    while !frontier.is_empty() {
        let cols: Vec<(Weight, Vec<Laurent<Scalar>>)> = frontier
            .par_iter()
            .map(|nu| (*nu, (1..=r).map(|i| rep.y_act(i, &Laurent::x(*nu))).collect()))
            .collect();
        let mut next = Vec::new();
        for (nu, ys) in cols {
            for y in &ys {
                for w in y.support() {
                    if seen.insert(*w) {
                        if seen.len() > cap {
                            return Err(Error::ClosureCapExceeded { cap });
                        }
                        next.push(*w);
                    }
                }
            }
            images.insert(nu, ys);
        }
        frontier = next;
    }
    Ok(images)
}

/// Clears denominators of a row of scalars and shifts it to nonnegative exponents.
fn row_to_polys(row: &[Scalar]) -> Vec<Poly> {
    let mut dens: Vec<Poly> = Vec::new();
    for s in row {
        if !s.den().is_one() && !dens.contains(s.den()) {
            dens.push(s.den().clone());
        }
    }
    let l = dens.iter().fold(Poly::one(), |a, d| a.mul(d));
    let polys: Vec<Poly> = row
        .iter()
        .map(|s| {
            if s.num().is_zero() {
                Poly::zero()
            } else {
                s.num().mul(&l.div_exact(s.den()).expect("denominator divides product"))
            }
        })
        .collect();
    let low = polys
        .iter()
        .filter(|p| !p.is_zero())
        .map(|p| p.min_mono())
        .reduce(|a, b| a.meet(&b));
    match low {
        Some(low) if !low.is_one() => {
            let inv = low.pow(-1);
            polys.iter().map(|p| p.mul_mono(&inv)).collect()
        }
        _ => polys,
    }
}

/// E_μ: the joint Y-eigenfunction with unit coefficient at x^μ.
pub fn e_poly(rep: &GlRep<'_, Scalar>, mu: &Weight, opts: SolverOptions) -> Result<Laurent<Scalar>> {
    let r = rep.data.r;
    if mu.len() != r {
        return Err(Error::InvalidConfig(format!("mu must have {r} coordinates")));
    }
    let images = closure(rep, mu, opts.cap)?;
    let basis: Vec<Weight> = images.keys().copied().collect();
    let index: BTreeMap<Weight, usize> = basis.iter().enumerate().map(|(i, w)| (*w, i)).collect();
    let d = basis.len();
    let gammas: Vec<Scalar> = (1..=r).map(|i| rep.gamma_i(mu, i)).collect::<Result<_>>()?;

    let mut mat: Vec<Vec<Poly>> = Vec::with_capacity(r * d);
    for (i, g) in gammas.iter().enumerate() {
        let mut rows = vec![vec![Scalar::zero(); d]; d];
        for (c, nu) in basis.iter().enumerate() {
            for (w, coef) in images[nu][i].terms() {
                rows[index[w]][c] = coef.clone();
            }
            rows[c][c] = rows[c][c].sub(g);
        }
        for row in rows {
            if row.iter().any(|s| !s.is_zero()) {
                mat.push(row_to_polys(&row));
            }
        }
    }
    let pivots = if mat.is_empty() { Vec::new() } else { bareiss_echelon(&mut mat) };
    let nullity = d - pivots.len();
    if nullity != 1 {
        return Err(Error::NonUniqueEigenvector { dim: nullity });
    }
    let free = (0..d).find(|c| !pivots.contains(c)).expect("one free column");
    let mut v = vec![Scalar::zero(); d];
    v[free] = Scalar::one();
    for (t, &p) in pivots.iter().enumerate().rev() {
        let mut acc = Scalar::zero();
        for c in p + 1..d {
            if !mat[t][c].is_zero() && !v[c].is_zero() {
                acc = acc.add(&Scalar::from_poly(mat[t][c].clone()).mul(&v[c]));
            }
        }
        v[p] = acc.neg().div(&Scalar::from_poly(mat[t][p].clone()))?.reduced();
    }
    let lead = v[index[mu]].clone();
    if lead.is_zero() {
        return Err(Error::NormalizationFailure);
    }
    let mut e = Laurent::zero(r);
    for (c, nu) in basis.iter().enumerate() {
        if !v[c].is_zero() {
            e.add_term(*nu, v[c].div(&lead)?.reduced());
        }
    }
    if !rep.is_eigenfunction(mu, &e)? {
        return Err(Error::InternalMismatch(format!("E_{mu} failed the eigen-equation")));
    }
    Ok(e)
}

/// Substitution images for g_j^{(m)} ↦ g_{cj}^{(n)} and q ↦ q^{qpow}.
fn transport_images(m: u32, target: &GroundField, c: i64, qpow: i32) -> [Scalar; poly::NVARS] {
    let mut img = identity_images();
    img[VAR_Q] = Scalar::var_pow(VAR_Q, qpow);
    for j in 1..=crate::scalars::adjoined_g_count(m) {
        img[poly::var_g_lg(j)] = target.g(c * j as i64, LG);
    }
    img
}

/// ῑ_κ: coefficients over K^{(m)} mapped into K^{(n)} by g_j ↦ g_{κj}.
pub fn map_iota(kappa: i64, m: u32, target: &GroundField, f: &Laurent<Scalar>) -> Result<Laurent<Scalar>> {
    let img = transport_images(m, target, kappa, 1);
    f.map_coeffs(|s| Ok(s.substitute(&img)?.reduced()))
}

/// ȷ̄_{κ′}: q ↦ q^{κ′²}, x ↦ x^{κ′}, g_j ↦ g_{κ′j}.
pub fn map_jmath(kappa_p: u32, m: u32, target: &GroundField, f: &Laurent<Scalar>) -> Result<Laurent<Scalar>> {
    let kp = kappa_p as i32;
    let img = transport_images(m, target, kappa_p as i64, kp * kp);
    f.map_coeffs(|s| Ok(s.substitute(&img)?.reduced()))
        .map(|g| g.map_exponents(|w| w.scale(kp)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{var_g_lg, VAR_K_LG};

    fn setup(n: u32, kappa: i64, eps: i8) -> (GLMetaData, Params<Scalar>) {
        let d = GLMetaData::new(3, n, kappa, eps).unwrap();
        let p = d.params();
        (d, p)
    }

    fn w(c: &[i32]) -> Weight {
        Weight::new(c)
    }

    fn k() -> Scalar {
        Scalar::var(VAR_K_LG)
    }

    fn q() -> Scalar {
        Scalar::q()
    }

    #[test]
    fn derived_data() {
        let d = GLMetaData::new(3, 6, 4, 1).unwrap();
        assert_eq!((d.kappa_p, d.m), (2, 3));
        let d = GLMetaData::new(3, 4, 2, 1).unwrap();
        assert_eq!((d.kappa_p, d.m), (2, 2));
    }

    #[test]
    fn t1_examples() {
        let (d, p) = setup(1, 1, 1);
        let rep = GlRep::new(&d, &p);
        let f = Laurent::x(w(&[1, 1, 0]));
        assert_eq!(rep.pi_t(1, &f), f.scale(&k()));
        for eps in [1i8, -1] {
            let (d, p) = setup(2, 1, eps);
            let rep = GlRep::new(&d, &p);
            let got = rep.pi_t(1, &Laurent::x(w(&[1, 0, 0])));
            assert_eq!(got, Laurent::monomial(w(&[0, 1, 0]), Scalar::from_i64(-(eps as i64))));
        }
    }

    #[test]
    fn t0_matches_fraction() {
        // m = 2, λ = (0,0,2): (λ,θ) = −2, so ∇̄₀ uses c = 1
        let (d, p) = setup(2, 1, 1);
        let rep = GlRep::new(&d, &p);
        for lam in [w(&[0, 0, 2]), w(&[0, 0, 4]), w(&[2, 0, 0]), w(&[1, 0, 3]), w(&[0, 1, 1])] {
            let got = rep.nabla_bar(0, &lam);
            let s = lam.get(0) - lam.get(2);
            let t = 2 * (-s).div_euclid(2);
            // (1 − q^{−mt} x^{tθ})/(1 − q^{m²}x^{−mθ}) x^λ
            let num = Laurent::one(3)
                .sub(&Laurent::monomial(d.theta().scale(t), p.q_pow(-2 * t as i64)))
                .shift(&lam);
            let den = Laurent::one(3).sub(&Laurent::monomial(d.theta().scale(-2), p.q_pow(4)));
            let expect = num.div_exact(&den).unwrap();
            assert_eq!(got, expect, "{lam}");
        }
    }

    #[test]
    fn omega_examples() {
        let (d, p) = setup(2, 1, 1);
        let rep = GlRep::new(&d, &p);
        assert_eq!(rep.omega(&Laurent::one(3), false), Laurent::one(3));
        let got = rep.omega(&Laurent::x(w(&[1, 2, 3])), false);
        assert_eq!(got, Laurent::monomial(w(&[3, 1, 2]), q().pow(-6).unwrap()));
        for lam in degree_grid(3, 2) {
            let f = Laurent::x(lam);
            assert_eq!(rep.omega(&rep.omega(&f, false), true), f);
            let (e, mu) = AffineWeylGL::omega(&d).act_monomial(&lam);
            assert_eq!(rep.omega(&f, false), Laurent::monomial(mu, p.q_pow(e)));
        }
    }

    #[test]
    fn affine_weyl_generators() {
        let d = GLMetaData::new(4, 3, 1, 1).unwrap();
        let om = AffineWeylGL::omega(&d);
        let m = d.m as i32;
        let mut b = vec![(d.theta().scale(-m), (m * m) as i64)];
        for j in 1..d.r {
            b.push((d.alpha(j).scale(m), 0));
        }
        for j in 0..d.r {
            let (v, c) = om.act_affine(&b[j].0, b[j].1);
            assert_eq!((v, c), b[(j + 1) % d.r], "j={j}");
        }
        let s0 = AffineWeylGL::simple(&d, 0);
        let lam = w(&[2, -1, 0, 5]);
        let (e, mu) = s0.act_monomial(&lam);
        assert_eq!(e, m as i64 * (2 - 5));
        assert_eq!(mu, w(&[5, -1, 0, 2]));
        assert_eq!(s0.compose(&s0), AffineWeylGL::identity(4));
    }

    #[test]
    fn y_on_one() {
        let (d, p) = setup(3, 1, 1);
        let rep = GlRep::new(&d, &p);
        for i in 1..=3 {
            let expect = k().pow(4 - 2 * i as i32).unwrap();
            assert_eq!(rep.y_act(i, &Laurent::one(3)), Laurent::constant(3, expect.clone()));
            assert_eq!(rep.gamma_i(&w(&[0, 0, 0]), i).unwrap(), expect);
        }
        assert!(matches!(rep.gamma_eval(&w(&[0, 0, 0]), &w(&[1, 0, 0])), Err(Error::NotInLattice(_))));
    }

    #[test]
    fn daha_relations_small() {
        for (n, eps) in [(1, 1), (2, 1), (2, -1)] {
            let (d, p) = setup(n, 1, eps);
            let rep = GlRep::new(&d, &p);
            let report = check_daha_relations(&rep, 1);
            assert!(report.all_pass(), "n={n}: {:?}", report.failures);
        }
    }

    #[test]
    fn corrupted_p0_is_detected() {
        let (d, p) = setup(2, 1, 1);
        let mut rep = GlRep::new(&d, &p);
        rep.corrupt_p0 = true;
        let report = check_daha_relations(&rep, 1);
        // p_0 is periodic either way, so the cross relations cannot see the flip
        assert!(report.cross);
        assert!(!report.all_pass());
        assert!(!report.omega && !report.hecke && !report.braid);
    }

    #[test]
    fn e_small_cases() {
        let (d, p) = setup(1, 1, 1);
        let rep = GlRep::new(&d, &p);
        let opts = SolverOptions::default();
        assert_eq!(e_poly(&rep, &w(&[0, 0, 0]), opts).unwrap(), Laurent::one(3));
        // ((k−1)(k+1)/(k⁴q−1)) x1 + x2
        let e = e_poly(&rep, &w(&[0, 1, 0]), opts).unwrap();
        let c = k().mul(&k()).sub(&Scalar::one()).div(&k().pow(4).unwrap().mul(&q()).sub(&Scalar::one())).unwrap();
        let mut expect = Laurent::x(w(&[0, 1, 0]));
        expect.add_term(w(&[1, 0, 0]), c);
        assert_eq!(e, expect);
        // dominant with λ₁ − λ_r ≤ m gives a monomial
        assert_eq!(e_poly(&rep, &w(&[1, 0, 0]), opts).unwrap(), Laurent::x(w(&[1, 0, 0])));
    }

    #[test]
    fn e_m3() {
        let (d, p) = setup(3, 1, 1);
        let rep = GlRep::new(&d, &p);
        let e = e_poly(&rep, &w(&[0, 0, 1]), SolverOptions::default()).unwrap();
        let g1 = Scalar::var(var_g_lg(1));
        let kk = k().mul(&k()).sub(&Scalar::one());
        let den = k().mul(&k()).mul(&g1.pow(3).unwrap()).mul(&q().pow(3).unwrap()).add(&Scalar::one());
        let mut expect = Laurent::x(w(&[0, 0, 1]));
        expect.add_term(w(&[1, 0, 0]), kk.mul(&g1.mul(&g1)).div(&den).unwrap().neg());
        expect.add_term(w(&[0, 1, 0]), kk.mul(&g1).div(&den).unwrap());
        assert_eq!(e, expect);
    }

    #[test]
    fn closure_cap_reported() {
        let (d, p) = setup(1, 1, 1);
        let rep = GlRep::new(&d, &p);
        let r = e_poly(&rep, &w(&[0, 0, 2]), SolverOptions { cap: 2 });
        assert!(matches!(r, Err(Error::ClosureCapExceeded { cap: 2 })));
    }

    #[test]
    fn jmath_doubles() {
        let (d, p) = setup(1, 1, 1);
        let rep = GlRep::new(&d, &p);
        let e1 = e_poly(&rep, &w(&[0, 1, 0]), SolverOptions::default()).unwrap();
        let (d2, p2) = setup(2, 1, 1);
        let rep2 = GlRep::new(&d2, &p2);
        let e2 = e_poly(&rep2, &w(&[0, 2, 0]), SolverOptions::default()).unwrap();
        assert_eq!(map_jmath(2, 1, &d2.field, &e1).unwrap(), e2);
    }
}

//! Root systems, the metaplectic structure m(α), the r/q decomposition and the set C.

mod weyl;

pub use weyl::{braid_order, WeylElement, WeylGroup, DEFAULT_WEYL_CAP};

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::poly::Rat;
use crate::scalars::{GroundField, LengthClass};
use crate::weight::Weight;

pub const MAX_RANK: usize = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct CartanType {
    pub family: Family,
    pub rank: usize,
}

impl FromStr for CartanType {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let mut chars = s.chars();
        let fam = match chars.next().map(|c| c.to_ascii_uppercase()) {
            Some('A') => Family::A,
            Some('B') => Family::B,
            Some('C') => Family::C,
            Some('D') => Family::D,
            Some('E') => Family::E,
            Some('F') => Family::F,
            Some('G') => Family::G,
            _ => return Err(Error::UnsupportedType(s.to_string())),
        };
        let rank: usize = chars
            .as_str()
            .parse()
            .map_err(|_| Error::UnsupportedType(s.to_string()))?;
        Ok(CartanType { family: fam, rank })
    }
}

impl fmt::Display for CartanType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}{}", self.family, self.rank)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum Lattice {
    #[default]
    Weight,
    Root,
}

impl FromStr for Lattice {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "weight" | "P" => Ok(Lattice::Weight),
            "root" | "Q" => Ok(Lattice::Root),
            _ => Err(Error::InvalidConfig(format!("unknown lattice {s}"))),
        }
    }
}

/// Gram matrix of the simple roots, short roots of squared length 2.
fn gram(t: CartanType) -> Result<Vec<Vec<i32>>> {
    let r = t.rank;
    let bad = || Error::UnsupportedType(t.to_string());
    let valid = match t.family {
        Family::A => r >= 1,
        Family::B | Family::C => r >= 2,
        Family::D => r >= 4,
        Family::E => (6..=8).contains(&r),
        Family::F => r == 4,
        Family::G => r == 2,
    };
    if !valid {
        return Err(bad());
    }
    if r > MAX_RANK {
        return Err(Error::UnsupportedType(format!("{t}: rank above {MAX_RANK}")));
    }
    let mut g = vec![vec![0; r]; r];
    match t.family {
        Family::A => {
            for i in 0..r {
                g[i][i] = 2;
                if i + 1 < r {
                    g[i][i + 1] = -1;
                    g[i + 1][i] = -1;
                }
            }
        }
        Family::B => {
            for i in 0..r {
                g[i][i] = if i + 1 == r { 2 } else { 4 };
                if i + 1 < r {
                    g[i][i + 1] = -2;
                    g[i + 1][i] = -2;
                }
            }
        }
        Family::C => {
            for i in 0..r {
                g[i][i] = if i + 1 == r { 4 } else { 2 };
                if i + 1 < r {
                    let v = if i + 2 == r { -2 } else { -1 };
                    g[i][i + 1] = v;
                    g[i + 1][i] = v;
                }
            }
        }
        Family::D => {
            for i in 0..r {
                g[i][i] = 2;
            }
            for i in 0..r - 2 {
                g[i][i + 1] = -1;
                g[i + 1][i] = -1;
            }
            g[r - 3][r - 1] = -1;
            g[r - 1][r - 3] = -1;
        }
        Family::F => {
            g = vec![
                vec![4, -2, 0, 0],
                vec![-2, 4, -2, 0],
                vec![0, -2, 2, -1],
                vec![0, 0, -1, 2],
            ];
        }
        Family::G => {
            g = vec![vec![2, -3], vec![-3, 6]];
        }
        Family::E => return Err(bad()),
    }
    Ok(g)
}

/// A positive root with its data under the metaplectic structure.
#[derive(Clone, Debug)]
pub struct RootData {
    /// Coefficients in the simple-root basis.
    pub simple: Vec<i32>,
    /// Coordinates in the fundamental-weight basis.
    pub weight: Weight,
    pub norm2: i32,
    pub m: i32,
    /// Length class of m(α)α inside Φ^m.
    pub class: LengthClass,
}

#[derive(Clone, Debug)]
pub struct MetaRootSystem {
    pub cartan_type: CartanType,
    pub rank: usize,
    pub n: u32,
    pub kappa: u32,
    pub lattice: Lattice,
    gram: Vec<Vec<i32>>,
    /// cartan[i][j] = (α_j, α_i^∨).
    cartan: Vec<Vec<i32>>,
    cartan_inv: Vec<Vec<Rat>>,
    pub positive: Vec<RootData>,
    simple_m: Vec<i32>,
    simple_class: Vec<LengthClass>,
    two_classes: bool,
}

fn gcd_i(a: i64, b: i64) -> i64 {
    a.gcd(&b)
}

fn invert(m: &[Vec<i32>]) -> Vec<Vec<Rat>> {
    let r = m.len();
    let mut a: Vec<Vec<Rat>> = m
        .iter()
        .map(|row| row.iter().map(|&x| Rat::from_integer(BigInt::from(x))).collect())
        .collect();
    let mut inv: Vec<Vec<Rat>> = (0..r)
        .map(|i| (0..r).map(|j| if i == j { Rat::one() } else { Rat::zero() }).collect())
        .collect();
    for col in 0..r {
        let piv = (col..r).find(|&i| !a[i][col].is_zero()).expect("Cartan matrix is invertible");
        a.swap(col, piv);
        inv.swap(col, piv);
        let p = a[col][col].clone();
        for j in 0..r {
            a[col][j] = &a[col][j] / &p;
            inv[col][j] = &inv[col][j] / &p;
        }
        for i in 0..r {
            if i != col && !a[i][col].is_zero() {
                let f = a[i][col].clone();
                for j in 0..r {
                    let (ac, ic) = (a[col][j].clone(), inv[col][j].clone());
                    a[i][j] -= &f * ac;
                    inv[i][j] -= &f * ic;
                }
            }
        }
    }
    inv
}

impl MetaRootSystem {
    pub fn new(cartan_type: CartanType, n: u32, kappa: u32, lattice: Lattice) -> Result<Self> {
        if n == 0 || kappa == 0 {
            return Err(Error::InvalidConfig("n and kappa must be positive".into()));
        }
        let gram = gram(cartan_type)?;
        let r = cartan_type.rank;
        let cartan: Vec<Vec<i32>> = (0..r)
            .map(|i| (0..r).map(|j| 2 * gram[i][j] / gram[i][i]).collect())
            .collect();
        let cartan_inv = invert(&cartan);
        let mut sys = MetaRootSystem {
            cartan_type,
            rank: r,
            n,
            kappa,
            lattice,
            gram,
            cartan,
            cartan_inv,
            positive: Vec::new(),
            simple_m: Vec::new(),
            simple_class: Vec::new(),
            two_classes: false,
        };
        sys.build_roots();
        Ok(sys)
    }

    pub fn from_str_type(t: &str, n: u32, kappa: u32, lattice: Lattice) -> Result<Self> {
        MetaRootSystem::new(t.parse()?, n, kappa, lattice)
    }

    fn build_roots(&mut self) {
        let r = self.rank;
        let mut found: Vec<Vec<i32>> = Vec::new();
        let mut frontier: Vec<Vec<i32>> = (0..r)
            .map(|i| (0..r).map(|j| (i == j) as i32).collect())
            .collect();
        while let Some(c) = frontier.pop() {
            if found.contains(&c) {
                continue;
            }
            for i in 0..r {
                let s = self.reflect_simple_coeffs(i, &c);
                if s.iter().all(|&x| x >= 0) && s.iter().any(|&x| x > 0) && !found.contains(&s) {
                    frontier.push(s);
                }
            }
            found.push(c);
        }
        found.sort_by_key(|c| (c.iter().sum::<i32>(), std::cmp::Reverse(c.clone())));
        let n = self.n as i64;
        let mut roots: Vec<RootData> = found
            .into_iter()
            .map(|c| {
                let weight = self.root_weight(&c);
                let norm2 = self.norm2_coeffs(&c);
                let qa = self.kappa as i64 * norm2 as i64 / 2;
                let m = (n / gcd_i(n, qa)) as i32;
                RootData { simple: c, weight, norm2, m, class: LengthClass::Lg }
            })
            .collect();
        let lens: Vec<i64> = roots.iter().map(|a| a.m as i64 * a.m as i64 * a.norm2 as i64).collect();
        let maxl = *lens.iter().max().unwrap();
        let minl = *lens.iter().min().unwrap();
        self.two_classes = maxl != minl;
        for (a, l) in roots.iter_mut().zip(lens) {
            a.class = if l == maxl { LengthClass::Lg } else { LengthClass::Sh };
        }
        self.simple_m = (0..r).map(|i| roots.iter().find(|a| a.simple[i] == 1 && a.simple.iter().sum::<i32>() == 1).unwrap().m).collect();
        self.simple_class = (0..r)
            .map(|i| roots.iter().find(|a| a.simple[i] == 1 && a.simple.iter().sum::<i32>() == 1).unwrap().class)
            .collect();
        self.positive = roots;
    }

    fn reflect_simple_coeffs(&self, i: usize, c: &[i32]) -> Vec<i32> {
        // s_i β = β − (β, α_i^∨) α_i
        let pair: i32 = (0..self.rank).map(|j| c[j] * self.cartan[i][j]).sum();
        let mut out = c.to_vec();
        out[i] -= pair;
        out
    }

    fn root_weight(&self, c: &[i32]) -> Weight {
        let r = self.rank;
        let coords: Vec<i32> = (0..r).map(|i| (0..r).map(|j| self.cartan[i][j] * c[j]).sum()).collect();
        Weight::new(&coords)
    }

    fn norm2_coeffs(&self, c: &[i32]) -> i32 {
        let r = self.rank;
        (0..r).map(|i| (0..r).map(|j| c[i] * self.gram[i][j] * c[j]).sum::<i32>()).sum()
    }

    /// Field with parameters instantiated for the length classes of Φ^m.
    pub fn ground_field(&self, eps_sh: i8, eps_lg: i8) -> Result<GroundField> {
        GroundField::new(self.n, eps_sh, eps_lg, self.two_classes)
    }

    pub fn two_classes(&self) -> bool {
        self.two_classes
    }

    pub fn cartan(&self) -> &[Vec<i32>] {
        &self.cartan
    }

    pub fn gram(&self) -> &[Vec<i32>] {
        &self.gram
    }

    pub fn simple_root(&self, i: usize) -> Weight {
        let c: Vec<i32> = (0..self.rank).map(|j| (i == j) as i32).collect();
        self.root_weight(&c)
    }

    pub fn fundamental(&self, i: usize) -> Weight {
        Weight::unit(self.rank, i)
    }

    /// m(α_i).
    pub fn m_simple(&self, i: usize) -> i32 {
        self.simple_m[i]
    }

    pub fn class_simple(&self, i: usize) -> LengthClass {
        self.simple_class[i]
    }

    pub fn simple_norm2(&self, i: usize) -> i32 {
        self.gram[i][i]
    }

    /// 𝐐(α_i).
    pub fn q_simple(&self, i: usize) -> i64 {
        self.kappa as i64 * self.gram[i][i] as i64 / 2
    }

    /// α_i^m in fundamental-weight coordinates.
    pub fn simple_root_m(&self, i: usize) -> Weight {
        self.simple_root(i).scale(self.simple_m[i])
    }

    pub fn rho(&self) -> Weight {
        Weight::new(&vec![1; self.rank])
    }

    pub fn rho_m(&self) -> Weight {
        Weight::new(&self.simple_m)
    }

    /// (λ, β) for β with the given simple-root coefficients.
    pub fn pair_root(&self, lambda: &Weight, simple: &[i32]) -> i64 {
        (0..self.rank)
            .map(|j| simple[j] as i64 * lambda.get(j) as i64 * self.gram[j][j] as i64 / 2)
            .sum()
    }

    /// (λ, α^∨) for a positive root.
    pub fn pair_coroot(&self, lambda: &Weight, a: &RootData) -> i64 {
        2 * self.pair_root(lambda, &a.simple) / a.norm2 as i64
    }

    /// Simple-root coefficients of a weight (rational in general).
    pub fn to_simple_coeffs(&self, lambda: &Weight) -> Vec<Rat> {
        let r = self.rank;
        (0..r)
            .map(|j| {
                (0..r)
                    .map(|i| &self.cartan_inv[j][i] * Rat::from_integer(BigInt::from(lambda.get(i))))
                    .fold(Rat::zero(), |a, b| a + b)
            })
            .collect()
    }

    /// κ(λ, μ).
    pub fn bilinear_b(&self, lambda: &Weight, mu: &Weight) -> Rat {
        let c = self.to_simple_coeffs(mu);
        let mut acc = Rat::zero();
        for (j, cj) in c.iter().enumerate() {
            acc += cj * Rat::from_integer(BigInt::from(lambda.get(j) as i64 * self.gram[j][j] as i64));
        }
        acc * Rat::from_integer(BigInt::from(self.kappa)) / Rat::from_integer(BigInt::from(2))
    }

    /// B(λ, α) as an integer, for α given by simple-root coefficients.
    pub fn b_root(&self, lambda: &Weight, simple: &[i32]) -> i64 {
        self.kappa as i64 * self.pair_root(lambda, simple)
    }

    pub fn b_simple(&self, lambda: &Weight, i: usize) -> i64 {
        self.kappa as i64 * lambda.get(i) as i64 * self.gram[i][i] as i64 / 2
    }

    /// (r(λ), q(λ)).
    pub fn r_and_q(&self, lambda: &Weight) -> (Weight, Weight) {
        let r = self.r_part(lambda);
        (r, lambda.sub(&r))
    }

    pub fn r_part(&self, lambda: &Weight) -> Weight {
        let mut r = *lambda;
        for i in 0..self.rank {
            r.set(i, lambda.get(i).rem_euclid(self.simple_m[i]));
        }
        r
    }

    pub fn q_part(&self, lambda: &Weight) -> Weight {
        lambda.sub(&self.r_part(lambda))
    }

    pub fn in_pm(&self, lambda: &Weight) -> bool {
        (0..self.rank).all(|i| lambda.get(i).rem_euclid(self.simple_m[i]) == 0)
    }

    /// B(λ, α) ≡ 0 mod n for every root.
    pub fn in_pm_by_form(&self, lambda: &Weight) -> bool {
        self.positive.iter().all(|a| self.b_root(lambda, &a.simple).rem_euclid(self.n as i64) == 0)
    }

    pub fn in_c(&self, lambda: &Weight) -> bool {
        self.positive.iter().all(|a| self.pair_coroot(lambda, a).abs() <= a.m as i64)
    }

    pub fn is_dominant(&self, lambda: &Weight) -> bool {
        lambda.coords().iter().all(|&x| x >= 0)
    }

    pub fn in_root_lattice(&self, lambda: &Weight) -> bool {
        self.to_simple_coeffs(lambda).iter().all(|c| c.is_integer())
    }

    pub fn in_lattice(&self, lambda: &Weight) -> bool {
        match self.lattice {
            Lattice::Weight => true,
            Lattice::Root => self.in_root_lattice(lambda),
        }
    }

    /// Membership in Q^m = ⊕ ℤ α_i^m.
    pub fn in_qm(&self, lambda: &Weight) -> bool {
        self.to_simple_coeffs(lambda).iter().enumerate().all(|(i, c)| {
            c.is_integer() && c.to_integer().mod_floor(&BigInt::from(self.simple_m[i])).is_zero()
        })
    }

    pub fn reflect(&self, i: usize, lambda: &Weight) -> Weight {
        let li = lambda.get(i);
        let mut out = *lambda;
        for j in 0..self.rank {
            out.set(j, lambda.get(j) - self.cartan[j][i] * li);
        }
        out
    }

    /// Reflection in an arbitrary positive root.
    pub fn reflect_root(&self, a: &RootData, lambda: &Weight) -> Weight {
        let p = self.pair_coroot(lambda, a) as i32;
        lambda.sub(&a.weight.scale(p))
    }

    /// Size of P/P^m.
    pub fn coset_count(&self) -> usize {
        self.simple_m.iter().map(|&m| m as usize).product()
    }

    pub fn coset_reps(&self) -> Vec<Weight> {
        let mut out = vec![Weight::zero(self.rank)];
        for i in 0..self.rank {
            let mut next = Vec::new();
            for w in &out {
                for v in 0..self.simple_m[i] {
                    let mut x = *w;
                    x.set(i, v);
                    next.push(x);
                }
            }
            out = next;
        }
        out
    }

    pub fn moduli(&self) -> Vec<i32> {
        self.simple_m.clone()
    }

    /// Positive root data for the root with given fundamental-weight coordinates (sign-insensitive).
    pub fn root_by_weight(&self, w: &Weight) -> Option<(&RootData, bool)> {
        self.positive.iter().find_map(|a| {
            if a.weight == *w {
                Some((a, true))
            } else if a.weight == w.neg() {
                Some((a, false))
            } else {
                None
            }
        })
    }

    /// Lands in C ∩ P⁺ by dominating and reflecting in the affine walls (λ, α^∨) = m(α).
    pub fn orbit_rep_in_c(&self, lambda: &Weight) -> Weight {
        let mut l = *lambda;
        loop {
            l = self.dominant(&l);
            match self.positive.iter().find(|a| self.pair_coroot(&l, a) > a.m as i64) {
                None => return l,
                Some(a) => {
                    let shift = self.pair_coroot(&l, a) as i32 - a.m;
                    l = l.sub(&a.weight.scale(shift));
                }
            }
        }
    }

    pub fn dominant(&self, lambda: &Weight) -> Weight {
        let mut l = *lambda;
        while let Some(i) = (0..self.rank).find(|&i| l.get(i) < 0) {
            l = self.reflect(i, &l);
        }
        l
    }

    pub fn weyl_group(&self) -> Result<WeylGroup> {
        WeylGroup::enumerate(self, DEFAULT_WEYL_CAP)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weight::grid;

    fn sys(t: &str, n: u32, k: u32) -> MetaRootSystem {
        MetaRootSystem::from_str_type(t, n, k, Lattice::Weight).unwrap()
    }

    #[test]
    fn root_counts() {
        assert_eq!(sys("A1", 1, 1).positive.len(), 1);
        assert_eq!(sys("A2", 1, 1).positive.len(), 3);
        assert_eq!(sys("B2", 1, 1).positive.len(), 4);
        assert_eq!(sys("C3", 1, 1).positive.len(), 9);
        assert_eq!(sys("G2", 1, 1).positive.len(), 6);
        assert_eq!(sys("F4", 1, 1).positive.len(), 24);
        assert_eq!(sys("D4", 1, 1).positive.len(), 12);
        assert!(matches!(MetaRootSystem::from_str_type("E6", 1, 1, Lattice::Weight), Err(Error::UnsupportedType(_))));
        assert!(matches!(MetaRootSystem::from_str_type("H3", 1, 1, Lattice::Weight), Err(Error::UnsupportedType(_))));
    }

    #[test]
    fn metaplectic_m() {
        let a2 = sys("A2", 1, 1);
        assert!(a2.positive.iter().all(|a| a.m == 1));
        let b2 = sys("B2", 2, 1);
        for a in &b2.positive {
            let expect = if a.norm2 == 2 { 2 } else { 1 };
            assert_eq!(a.m, expect);
        }
        let a2 = sys("A2", 3, 1);
        assert!(a2.positive.iter().all(|a| a.m == 3));
        assert!(a2.in_pm(&Weight::new(&[3, 0])));
        assert!(!a2.in_pm(&Weight::new(&[1, 0])));
    }

    #[test]
    fn bilinear_form() {
        let a2 = sys("A2", 1, 1);
        assert_eq!(a2.bilinear_b(&Weight::new(&[1, 0]), &a2.simple_root(0)), Rat::one());
        assert!(a2.bilinear_b(&Weight::zero(2), &Weight::new(&[1, 0])).is_zero());
        // B(λ, α^m) = lcm(n, 𝐐(α)) (λ, α^∨)
        for (n, k) in [(2u32, 1u32), (3, 1), (4, 2), (2, 2)] {
            let b2 = sys("B2", n, k);
            for lam in grid(2, -2, 2) {
                for a in &b2.positive {
                    let qa = k as i64 * a.norm2 as i64 / 2;
                    let lcm = (n as i64).lcm(&qa);
                    let am = a.weight.scale(a.m);
                    let lhs = b2.bilinear_b(&lam, &am);
                    let rhs = Rat::from_integer(BigInt::from(lcm * b2.pair_coroot(&lam, a)));
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn r_q_split() {
        let a1 = sys("A1", 2, 1);
        assert_eq!(a1.r_and_q(&Weight::new(&[3])), (Weight::new(&[1]), Weight::new(&[2])));
        assert_eq!(a1.r_and_q(&Weight::new(&[-1])), (Weight::new(&[1]), Weight::new(&[-2])));
        for t in ["A2", "B2", "G2"] {
            for n in 1..=4 {
                let s = sys(t, n, 1);
                for lam in grid(2, -2 * n as i32, 2 * n as i32) {
                    let (r, q) = s.r_and_q(&lam);
                    assert!(s.in_pm(&q));
                    assert_eq!(r.add(&q), lam);
                    assert_eq!(s.in_pm(&lam), s.in_pm_by_form(&lam), "{t} n={n} {lam}");
                }
            }
        }
    }

    #[test]
    fn membership_in_c() {
        let a2 = sys("A2", 1, 1);
        assert!(a2.in_c(&Weight::new(&[0, 0])));
        assert!(a2.in_c(&Weight::new(&[1, 0])));
        assert!(!a2.in_c(&a2.simple_root(0)));
    }

    #[test]
    fn rho_reflections() {
        for t in ["A2", "B2", "G2", "C3"] {
            for n in 1..=3 {
                let s = sys(t, n, 1);
                for i in 0..s.rank {
                    assert_eq!(s.reflect(i, &s.rho()), s.rho().sub(&s.simple_root(i)));
                    assert_eq!(s.reflect(i, &s.rho_m()), s.rho_m().sub(&s.simple_root_m(i)));
                }
            }
        }
    }

    #[test]
    fn orbit_descent_lands_in_c() {
        for t in ["A1", "A2", "B2"] {
            for n in 1..=3 {
                let s = sys(t, n, 1);
                let reps: Vec<Weight> = grid(s.rank, 0, 2 * n as i32)
                    .into_iter()
                    .filter(|l| s.in_c(l))
                    .collect();
                for lam in grid(s.rank, -2 * n as i32, 2 * n as i32) {
                    let rep = s.orbit_rep_in_c(&lam);
                    assert!(s.in_c(&rep) && s.is_dominant(&rep));
                    assert!(reps.contains(&rep));
                }
                // distinct points of C ∩ P⁺ lie in distinct W ⋉ Q^m orbits
                let w = s.weyl_group().unwrap();
                for (i, a) in reps.iter().enumerate() {
                    for b in &reps[i + 1..] {
                        assert!(w.elements.iter().all(|el| !s.in_qm(&a.sub(&el.act(b)))), "{t} {a} {b}");
                    }
                }
            }
        }
    }
}

//! Invariant suites over monomial grids: σ braid relations, 𝒯 Hecke relations,
//! localization coherence, the scaffolding identity d_i = p_i, and the DAHA relations.
//!
//! Each suite runs first at random rational specializations, then optionally symbolically.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::daha_gl::{check_daha_relations, GLMetaData, GlRep};
use crate::error::{Error, Result};
use crate::finite_hecke::Rep;
use crate::grouplalg::Laurent;
use crate::poly::Rat;
use crate::roots::{braid_order, MetaRootSystem};
use crate::scalars::{Coeff, GroundField, LengthClass, Params, Scalar, Specialization};
use crate::weight::{grid, Weight};
use crate::weyl_meta::Sign;

pub const DEFAULT_SEED: u64 = 0x5eed_2024;
pub const DEFAULT_TRIALS: usize = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    SigmaBraid,
    DlHecke,
    Localization,
    Scaffold,
    Daha,
}

impl Suite {
    pub const ALL: [Suite; 5] = [Suite::SigmaBraid, Suite::DlHecke, Suite::Localization, Suite::Scaffold, Suite::Daha];

    pub fn name(self) -> &'static str {
        match self {
            Suite::SigmaBraid => "sigma-braid",
            Suite::DlHecke => "dl-hecke",
            Suite::Localization => "localization",
            Suite::Scaffold => "scaffold",
            Suite::Daha => "daha",
        }
    }
}

impl std::str::FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::InvalidConfig(format!("unknown suite {s}")))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Failure {
    pub relation: String,
    pub basis: String,
    pub params: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    pub mode: String,
    pub params: String,
    pub checked: usize,
    pub passed: bool,
    pub failures: Vec<Failure>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckReport {
    pub suite: Suite,
    pub config: String,
    pub runs: Vec<RunReport>,
    pub passed: bool,
}

#[derive(Clone, Copy, Debug)]
pub struct CheckOptions {
    pub seed: u64,
    pub trials: usize,
    pub symbolic: bool,
    /// Total-degree bound for the GL_r grid.
    pub degree: i32,
}

impl Default for CheckOptions {
    fn default() -> Self {
        CheckOptions { seed: DEFAULT_SEED, trials: DEFAULT_TRIALS, symbolic: false, degree: 2 }
    }
}

/// Outcome of one pass: number of relations checked and failures (without parameter tags).
type Outcome = (usize, Vec<(String, String)>);

fn fail(rel: impl Into<String>, basis: impl ToString) -> (String, String) {
    (rel.into(), basis.to_string())
}

fn collect(items: Vec<Result<Outcome>>) -> Result<Outcome> {
    let mut n = 0;
    let mut out = Vec::new();
    for it in items {
        let (c, f) = it?;
        n += c;
        out.extend(f);
    }
    Ok((n, out))
}

/// Integer points with every coordinate in [−M, M], M the largest m(α_i), restricted to the lattice.
pub fn monomial_grid(sys: &MetaRootSystem) -> Vec<Weight> {
    let m = (0..sys.rank).map(|i| sys.m_simple(i)).max().unwrap_or(1);
    grid(sys.rank, -m, m).into_iter().filter(|w| sys.in_lattice(w)).collect()
}

/// Alternating words i j i … and j i j … of length m_ij.
fn braid_words(sys: &MetaRootSystem, i: usize, j: usize) -> (Vec<usize>, Vec<usize>) {
    let len = braid_order(sys, i, j);
    let a = (0..len).map(|t| if t % 2 == 0 { i } else { j }).collect();
    let b = (0..len).map(|t| if t % 2 == 0 { j } else { i }).collect();
    (a, b)
}

fn pairs(rank: usize) -> Vec<(usize, usize)> {
    (0..rank).flat_map(|i| (i + 1..rank).map(move |j| (i, j))).collect()
}

/// σ(s_i)² = 1 and the braid relations on every grid monomial.
pub fn sigma_braid<C: Coeff>(rep: &Rep<'_, C>, lambdas: &[Weight]) -> Result<Outcome> {
    let sys = rep.sys;
    let res = lambdas
        .par_iter()
        .map(|lam| {
            let f = rep.coset_monomial(lam);
            let mut n = 0;
            let mut bad = Vec::new();
            for i in 0..sys.rank {
                n += 1;
                if !rep.sigma_s(i, &rep.sigma_s(i, &f)).rational_eq(&f) {
                    bad.push(fail(format!("sigma(s{})^2 = 1", i + 1), lam));
                }
            }
            for (i, j) in pairs(sys.rank) {
                let (a, b) = braid_words(sys, i, j);
                n += 1;
                if !rep.sigma_word(&a, &f).rational_eq(&rep.sigma_word(&b, &f)) {
                    bad.push(fail(format!("sigma braid s{} s{}", i + 1, j + 1), lam));
                }
            }
            Ok((n, bad))
        })
        .collect();
    collect(res)
}

fn dl_word_poly<C: Coeff>(rep: &Rep<'_, C>, word: &[usize], f: &Laurent<C>) -> Result<Laurent<C>> {
    // rightmost letter acts first
    word.iter().rev().try_fold(f.clone(), |g, &i| rep.dl_t_poly(i, &g))
}

/// 𝒯 braid and quadratic relations, polynomiality, and preservation of K[Q].
pub fn dl_hecke<C: Coeff>(rep: &Rep<'_, C>, lambdas: &[Weight]) -> Result<Outcome> {
    let sys = rep.sys;
    let res = lambdas
        .par_iter()
        .map(|lam| {
            let f = Laurent::x(*lam);
            let mut n = 0;
            let mut bad = Vec::new();
            let in_q = sys.in_root_lattice(lam);
            for i in 0..sys.rank {
                n += 1;
                let t1 = match rep.dl_t_poly(i, &f) {
                    Ok(t) => t,
                    Err(_) => {
                        bad.push(fail(format!("T{} preserves polynomials", i + 1), lam));
                        continue;
                    }
                };
                if !t1.support_in(|w| sys.in_lattice(w)) || (in_q && !t1.support_in(|w| sys.in_root_lattice(w))) {
                    bad.push(fail(format!("T{} preserves the lattice", i + 1), lam));
                }
                n += 1;
                let k2 = rep.k(i).mul(rep.k(i));
                let t2 = rep.dl_t_poly(i, &t1)?;
                let rhs = t1.scale(&k2.sub(&C::one())).add(&f.scale(&k2));
                if t2 != rhs {
                    bad.push(fail(format!("T{0}^2 = (k^2-1)T{0} + k^2", i + 1), lam));
                }
            }
            for (i, j) in pairs(sys.rank) {
                let (a, b) = braid_words(sys, i, j);
                n += 1;
                let (x, y) = (dl_word_poly(rep, &a, &f), dl_word_poly(rep, &b, &f));
                match (x, y) {
                    (Ok(x), Ok(y)) if x == y => {}
                    _ => bad.push(fail(format!("T braid {} {}", i + 1, j + 1), lam)),
                }
            }
            Ok((n, bad))
        })
        .collect();
    collect(res)
}

/// τ(T_i) and 𝒯_i computed through σ agree with their conjugates of π.
pub fn localization<C: Coeff>(rep: &Rep<'_, C>, lambdas: &[Weight]) -> Result<Outcome> {
    let res = lambdas
        .par_iter()
        .map(|lam| {
            let f = Laurent::x(*lam);
            let mut n = 0;
            let mut bad = Vec::new();
            for i in 0..rep.rank() {
                n += 2;
                if rep.tau_t_poly(i, &f).ok() != Some(rep.tau_t_via_pi(i, &f)) {
                    bad.push(fail(format!("tau(T{}) = x^(rho-rho_m) pi(T{}) x^(rho_m-rho)", i + 1, i + 1), lam));
                }
                if rep.dl_t_poly(i, &f).ok() != Some(rep.dl_t_via_pi(i, &f)) {
                    bad.push(fail(format!("T{} = -k x^rho pi(T{}^-1) x^-rho", i + 1, i + 1), lam));
                }
            }
            Ok((n, bad))
        })
        .collect();
    collect(res)
}

/// The finite set C = {λ : |(λ, α^∨)| ≤ m(α) for all α > 0}.
pub fn fundamental_set(sys: &MetaRootSystem) -> Vec<Weight> {
    let m = sys.positive.iter().map(|a| a.m).max().unwrap_or(1);
    grid(sys.rank, -m, m).into_iter().filter(|w| sys.in_c(w)).collect()
}

/// d_i(λ) = p_i(λ̄) for every λ ∈ C.
pub fn scaffold<C: Coeff>(rep: &Rep<'_, C>) -> Result<Outcome> {
    let c = fundamental_set(rep.sys);
    let mut n = 0;
    let mut bad = Vec::new();
    for lam in &c {
        for i in 0..rep.rank() {
            n += 1;
            if rep.d_factor(i, lam)? != rep.p_factor(i, lam) {
                bad.push(fail(format!("d{0} = p{0}", i + 1), lam));
            }
        }
    }
    Ok((n, bad))
}

/// τ(T_i)τ(1_+) = k_i τ(1_+) and τ(1_+)² = W(k²) τ(1_+) on the given monomials.
pub fn symmetrizer_identities<C: Coeff>(rep: &Rep<'_, C>, lambdas: &[Weight]) -> Result<Outcome> {
    let group = rep.sys.weyl_group()?;
    let spec = rep.symmetrizer(&group, Sign::Plus)?;
    let mut n = 0;
    let mut bad = Vec::new();
    for lam in lambdas {
        let f = rep.coset_monomial(lam);
        let s = rep.symmetrizer_apply(&group, &spec, &f);
        for i in 0..rep.rank() {
            n += 1;
            if !rep.tau_t(i, &s).rational_eq(&s.scale(rep.k(i))) {
                bad.push(fail(format!("tau(T{}) 1_+ = k 1_+", i + 1), lam));
            }
        }
        n += 1;
        let s2 = rep.symmetrizer_apply(&group, &spec, &s);
        if !s2.rational_eq(&s.scale(&spec.normalizer)) {
            bad.push(fail("1_+^2 = W(k^2) 1_+", lam));
        }
    }
    Ok((n, bad))
}

fn rat_params_label(p: &Params<Rat>, two: bool) -> String {
    let mut s = format!("q={}, k={}", p.q, p.k(LengthClass::Lg));
    if two {
        s.push_str(&format!(", k_sh={}", p.k(LengthClass::Sh)));
    }
    for j in 1..p.n as i64 {
        s.push_str(&format!(", g{j}={}", p.g(j, LengthClass::Lg)));
        if two {
            s.push_str(&format!(", g{j}_sh={}", p.g(j, LengthClass::Sh)));
        }
    }
    s
}

fn to_run(mode: &str, params: String, out: Result<Outcome>) -> RunReport {
    let (checked, failures) = match out {
        Ok((n, f)) => (n, f),
        Err(e) => (0, vec![("evaluation".to_string(), e.to_string())]),
    };
    let failures: Vec<Failure> = failures
        .into_iter()
        .map(|(relation, basis)| Failure { relation, basis, params: params.clone() })
        .collect();
    RunReport { mode: mode.into(), params, checked, passed: failures.is_empty(), failures }
}

/// Draws specializations until one keeps every denominator of the suite nonzero.
fn random_runs<F>(field: &GroundField, opts: &CheckOptions, two: bool, run: F) -> Vec<RunReport>
where
    F: Fn(&Params<Rat>) -> Result<Outcome>,
{
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let sym = field.params();
    let mut out = Vec::new();
    for t in 0..opts.trials {
        let mut last = None;
        for _ in 0..16 {
            let spec = Specialization::random(&mut rng);
            let p = match spec.params(&sym) {
                Ok(p) => p,
                Err(_) => continue,
            };
            let label = format!("trial {}: {}", t + 1, rat_params_label(&p, two));
            match run(&p) {
                Err(Error::DivisionByZero) | Err(Error::DenominatorZero) => continue,
                r => {
                    last = Some(to_run("random", label, r));
                    break;
                }
            }
        }
        out.push(last.unwrap_or_else(|| {
            to_run("random", format!("trial {}", t + 1), Err(Error::InvalidConfig("no admissible specialization".into())))
        }));
    }
    out
}

fn root_suite<C: Coeff>(suite: Suite, rep: &Rep<'_, C>) -> Result<Outcome> {
    let lambdas = monomial_grid(rep.sys);
    match suite {
        Suite::SigmaBraid => sigma_braid(rep, &lambdas),
        Suite::DlHecke => dl_hecke(rep, &lambdas),
        Suite::Localization => localization(rep, &lambdas),
        Suite::Scaffold => scaffold(rep),
        Suite::Daha => Err(Error::InvalidConfig("daha runs on GL_r data".into())),
    }
}

fn finish(suite: Suite, config: String, runs: Vec<RunReport>) -> CheckReport {
    let passed = runs.iter().all(|r| r.passed);
    CheckReport { suite, config, runs, passed }
}

/// Runs a root-system suite: random pre-screen, then symbolic if requested.
pub fn run_root_suite(suite: Suite, sys: &MetaRootSystem, field: &GroundField, opts: &CheckOptions) -> CheckReport {
    let two = sys.two_classes();
    let config = format!(
        "type={} n={} kappa={} eps_sh={} eps_lg={}",
        sys.cartan_type,
        sys.n,
        sys.kappa,
        field.eps(LengthClass::Sh),
        field.eps(LengthClass::Lg)
    );
    let mut runs = random_runs(field, opts, two, |p| root_suite(suite, &Rep::new(sys, p)));
    if opts.symbolic && runs.iter().all(|r| r.passed) {
        let p: Params<Scalar> = field.params();
        runs.push(to_run("symbolic", "symbolic".into(), root_suite(suite, &Rep::new(sys, &p))));
    }
    finish(suite, config, runs)
}

fn daha_outcome<C: Coeff>(rep: &GlRep<'_, C>, degree: i32) -> Result<Outcome> {
    let r = check_daha_relations(rep, degree);
    let checked = r.monomials;
    Ok((checked, r.failures.into_iter().map(|f| ("daha".to_string(), f)).collect()))
}

/// DAHA relations and Y-commutativity for GL_r on monomials of total degree ≤ opts.degree.
pub fn run_daha_suite(data: &GLMetaData, opts: &CheckOptions) -> CheckReport {
    let config = format!("r={} n={} kappa={} eps={} degree={}", data.r, data.n, data.kappa, data.eps, opts.degree);
    let mut runs = random_runs(&data.field, opts, false, |p| daha_outcome(&GlRep::new(data, p), opts.degree));
    if opts.symbolic && runs.iter().all(|r| r.passed) {
        let p = data.params();
        runs.push(to_run("symbolic", "symbolic".into(), daha_outcome(&GlRep::new(data, &p), opts.degree)));
    }
    finish(Suite::Daha, config, runs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::roots::Lattice;

    fn sys(t: &str, n: u32, kappa: u32) -> (MetaRootSystem, GroundField) {
        let s = MetaRootSystem::from_str_type(t, n, kappa, Lattice::Weight).unwrap();
        let f = s.ground_field(1, -1).unwrap();
        (s, f)
    }

    #[test]
    fn grids() {
        let (s, _) = sys("A2", 3, 1);
        assert_eq!(monomial_grid(&s).len(), 49);
        let c = fundamental_set(&s);
        assert!(c.contains(&Weight::zero(2)));
        assert!(c.iter().all(|w| s.in_c(w)));
        let (s1, _) = sys("A1", 1, 1);
        assert_eq!(fundamental_set(&s1), vec![Weight::new(&[-1]), Weight::new(&[0]), Weight::new(&[1])]);
    }

    #[test]
    fn suites_pass_randomly() {
        let opts = CheckOptions { trials: 1, ..Default::default() };
        for (t, n) in [("A1", 2), ("A2", 2), ("B2", 2), ("B2", 3)] {
            let (s, f) = sys(t, n, 1);
            for suite in [Suite::SigmaBraid, Suite::DlHecke, Suite::Localization, Suite::Scaffold] {
                let r = run_root_suite(suite, &s, &f, &opts);
                assert!(r.passed, "{t} n={n} {suite:?}: {:?}", r.runs[0].failures.first());
                assert!(r.runs[0].checked > 0);
            }
        }
    }

    #[test]
    fn scaffold_symbolic_a2() {
        let (s, f) = sys("A2", 3, 1);
        let p = f.params();
        let (n, bad) = scaffold(&Rep::new(&s, &p)).unwrap();
        assert!(n > 0 && bad.is_empty(), "{bad:?}");
    }

    #[test]
    fn symmetrizer_identities_a2() {
        let (s, f) = sys("A2", 2, 1);
        let p = f.params();
        let lams = [Weight::new(&[1, 0]), Weight::new(&[0, 0]), Weight::new(&[1, -1])];
        let (n, bad) = symmetrizer_identities(&Rep::new(&s, &p), &lams).unwrap();
        assert_eq!(n, 9);
        assert!(bad.is_empty(), "{bad:?}");
    }

    #[test]
    fn daha_suite_random() {
        let data = GLMetaData::new(3, 3, 1, 1).unwrap();
        let r = run_daha_suite(&data, &CheckOptions { trials: 1, degree: 1, ..Default::default() });
        assert!(r.passed, "{:?}", r.runs);
        assert!(serde_json::to_string(&r).unwrap().contains("\"suite\":\"daha\""));
    }

    #[test]
    fn parse_suite_names() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert!("nope".parse::<Suite>().is_err());
    }
}

//! Self-check suites. Each suite runs an algebraic property or identity over small
//! exhaustive instances (p = 3, s ≤ 3 by default) plus seeded random
//! instances at a larger exponent, and compares the library against an
//! independent oracle: element enumeration for modules, Gaussian elimination
//! mod p for ranks, direct expansion for tensor identities.

use std::collections::{BTreeMap, HashSet};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::brute::{self, Element};
use crate::difflie::{homology, is_cycle_mod_p, sigma, tau, DifferentialSpec};
use crate::error::{Error, Result};
use crate::freelie::{embed_tensor, BracketTree, FreeNAElement, GeneratorSet, Letter, TensorElement};
use crate::limits::Limits;
use crate::zpmod::{
    cokernel_exponents, rank_mod_p, smith_normal_form_matrix, submodule_exponents, FactorTensorViolation, GradedModule,
    Matrix, ModuleMorphism, RingSpec,
};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub name: String,
    pub cases: u64,
    /// Cases where the hypothesis held, so its conclusion was actually exercised.
    pub nontrivial: u64,
    pub failures: u64,
    pub first_failure: Option<String>,
}

impl SuiteReport {
    pub fn new(name: &str) -> Self {
        SuiteReport {
            name: name.to_string(),
            cases: 0,
            nontrivial: 0,
            failures: 0,
            first_failure: None,
        }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.failures += 1;
            if self.first_failure.is_none() {
                self.first_failure = Some(what());
            }
        }
    }

    fn fail(&mut self, what: String) {
        self.check(false, || what);
    }

    pub fn passed(&self) -> bool {
        self.failures == 0 && self.cases > 0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SelftestConfig {
    pub seed: u64,
    pub p: u64,
    /// Exhaustive suites run for every s ≤ this.
    pub exhaustive_s: u32,
    /// Exponent for the randomized runs.
    pub random_s: u32,
    pub random_runs: u64,
}

impl Default for SelftestConfig {
    fn default() -> Self {
        SelftestConfig {
            seed: 0,
            p: 3,
            exhaustive_s: 3,
            random_s: 4,
            random_runs: 1000,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SelftestReport {
    pub config: SelftestConfig,
    pub suites: Vec<SuiteReport>,
}

impl SelftestReport {
    pub fn passed(&self) -> bool {
        self.suites.iter().all(SuiteReport::passed)
    }
}

pub fn run_selftest(cfg: &SelftestConfig) -> Result<SelftestReport> {
    let mut suites = module_suites(cfg)?;
    suites.extend(tensor_suites(cfg)?);
    suites.extend(lie_suites(cfg)?);
    suites.extend(differential_suites(cfg)?);
    Ok(SelftestReport { config: *cfg, suites })
}

fn rng_for(cfg: &SelftestConfig, salt: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(cfg.seed ^ salt.wrapping_mul(0x9e37_79b9_7f4a_7c15))
}

// ---------------------------------------------------------------------------
// module instances

/// All descending exponent lists of length ≤ max_len with entries in 1..=s.
fn shapes(s: u32, max_len: usize) -> Vec<Vec<u32>> {
    let mut out = vec![Vec::new()];
    let mut frontier = vec![Vec::new()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for e in &frontier {
            let top = e.last().copied().unwrap_or(s);
            for t in 1..=top {
                let mut e2: Vec<u32> = e.clone();
                e2.push(t);
                next.push(e2);
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

fn random_shape<R: Rng>(rng: &mut R, s: u32, max_len: usize, max_log: u32) -> Vec<u32> {
    loop {
        let len = rng.gen_range(0..=max_len);
        let mut e: Vec<u32> = (0..len).map(|_| rng.gen_range(1..=s)).collect();
        if e.iter().sum::<u32>() <= max_log {
            e.sort_unstable_by(|a, b| b.cmp(a));
            return e;
        }
    }
}

fn module(ring: &RingSpec, exps: &[u32]) -> GradedModule {
    GradedModule::concentrated(*ring, 0, exps.to_vec()).expect("valid exponents")
}

fn morphism(ring: &RingSpec, dom: &[u32], cod: &[u32], m: &Matrix) -> Result<ModuleMorphism> {
    let blocks = if dom.is_empty() || cod.is_empty() {
        BTreeMap::new()
    } else {
        BTreeMap::from([(0, m.clone())])
    };
    ModuleMorphism::new(module(ring, dom), module(ring, cod), 0, blocks)
}

/// (step, count): a well-defined map Z/p^from → Z/p^to sends 1 to a multiple
/// of p^{max(0, to−from)}, and there are p^{min(from, to)} of them.
fn entry_choices(ring: &RingSpec, from: u32, to: u32) -> (u64, u64) {
    (ring.pow_p(to.saturating_sub(from)), ring.pow_p(from.min(to)))
}

fn random_map<R: Rng>(rng: &mut R, ring: &RingSpec, dom: &[u32], cod: &[u32]) -> Matrix {
    let mut m = Matrix::zeros(cod.len(), dom.len());
    for (i, &ti) in cod.iter().enumerate() {
        for (j, &tj) in dom.iter().enumerate() {
            let (step, count) = entry_choices(ring, tj, ti);
            m[(i, j)] = step * rng.gen_range(0..count);
        }
    }
    m
}

/// Every well-defined map dom → cod if there are at most `cap`, else `cap` random ones.
fn maps<R: Rng>(rng: &mut R, ring: &RingSpec, dom: &[u32], cod: &[u32], cap: usize) -> Vec<Matrix> {
    let cells: Vec<(usize, usize, u64, u64)> = cod
        .iter()
        .enumerate()
        .flat_map(|(i, &ti)| {
            dom.iter().enumerate().map(move |(j, &tj)| {
                let (step, count) = entry_choices(ring, tj, ti);
                (i, j, step, count)
            })
        })
        .collect();
    let total = cells
        .iter()
        .try_fold(1usize, |acc, c| acc.checked_mul(c.3 as usize))
        .unwrap_or(usize::MAX);
    if total > cap {
        return (0..cap).map(|_| random_map(rng, ring, dom, cod)).collect();
    }
    let mut out = Vec::with_capacity(total);
    for mut idx in 0..total {
        let mut m = Matrix::zeros(cod.len(), dom.len());
        for &(i, j, step, count) in &cells {
            m[(i, j)] = step * (idx as u64 % count);
            idx /= count as usize;
        }
        out.push(m);
    }
    out
}

fn is_zero_vec(v: &[u64]) -> bool {
    v.iter().all(|&a| a == 0)
}

fn order(ring: &RingSpec, exps: &[u32]) -> usize {
    ring.p().pow(exps.iter().sum()) as usize
}

// ---------------------------------------------------------------------------
// module-theory cases

/// New generators (columns of `q`, in old coordinates) form a basis of the
/// same shape: the library's span structure is unchanged, and e_i ↦ q_i is
/// bijective by enumeration.
fn case_basis(ring: &RingSpec, exps: &[u32], q: &Matrix, rep: &mut SuiteReport) -> Result<()> {
    let lib = submodule_exponents(ring, exps, q);
    let bijective = brute::kernel_size(ring, exps, exps, q)? == 1;
    rep.nontrivial += 1;
    rep.check(lib == exps && bijective, || {
        format!("basis change {:?} on {exps:?}: library {lib:?}, bijective {bijective}", q.to_rows())
    });
    Ok(())
}

fn reduce_columns(ring: &RingSpec, exps: &[u32], q: &mut Matrix) {
    for (i, &t) in exps.iter().enumerate() {
        for j in 0..q.cols() {
            q[(i, j)] = ring.norm(q[(i, j)]) % ring.pow_p(t);
        }
    }
}

fn scale_generator(ring: &RingSpec, exps: &[u32], q: &Matrix, k: usize, u: u64) -> Matrix {
    let mut q = q.clone();
    for i in 0..q.rows() {
        q[(i, k)] = ring.mul(q[(i, k)], u);
    }
    reduce_columns(ring, exps, &mut q);
    q
}

fn add_generator(ring: &RingSpec, exps: &[u32], q: &Matrix, k: usize, j: usize, mu: u64) -> Matrix {
    let mut q = q.clone();
    for i in 0..q.rows() {
        q[(i, k)] = ring.add(q[(i, k)], ring.mul(mu, q[(i, j)]));
    }
    reduce_columns(ring, exps, &mut q);
    q
}

fn units(ring: &RingSpec, t: u32) -> impl Iterator<Item = u64> {
    let p = ring.p();
    (1..ring.pow_p(t)).filter(move |a| a % p != 0)
}

pub fn suite_basis_maneuvers(cfg: &SelftestConfig) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("basis_maneuvers");
    for s in 1..=cfg.exhaustive_s {
        let ring = RingSpec::new(cfg.p, s)?;
        for exps in shapes(s, 3).into_iter().filter(|e| !e.is_empty()) {
            let id = Matrix::identity(exps.len());
            for k in 0..exps.len() {
                for u in units(&ring, exps[k]) {
                    case_basis(&ring, &exps, &scale_generator(&ring, &exps, &id, k, u), &mut rep)?;
                }
                for j in (0..exps.len()).filter(|&j| j != k && exps[j] <= exps[k]) {
                    for mu in 1..ring.pow_p(exps[j]) {
                        case_basis(&ring, &exps, &add_generator(&ring, &exps, &id, k, j, mu), &mut rep)?;
                    }
                }
            }
        }
    }
    // random chains of maneuvers at the larger exponent
    let ring = RingSpec::new(cfg.p, cfg.random_s)?;
    for run in 0..cfg.random_runs {
        let mut rng = rng_for(cfg, 0x1000 + run);
        let exps = random_shape(&mut rng, ring.s(), 3, 9);
        if exps.is_empty() {
            continue;
        }
        let mut q = Matrix::identity(exps.len());
        for _ in 0..5 {
            let k = rng.gen_range(0..exps.len());
            let j = rng.gen_range(0..exps.len());
            if j != k && exps[j] <= exps[k] {
                q = add_generator(&ring, &exps, &q, k, j, rng.gen_range(0..ring.pow_p(exps[j])));
            } else {
                let us: Vec<u64> = units(&ring, exps[k]).collect();
                q = scale_generator(&ring, &exps, &q, k, *us.choose(&mut rng).expect("units exist"));
            }
        }
        case_basis(&ring, &exps, &q, &mut rep)?;
    }
    Ok(rep)
}

/// The basis change returned for an injection exhibits the image as the
/// first summands; a reported kernel witness really is one.
fn case_split(ring: &RingSpec, rank: usize, cod: &[u32], m: &Matrix, rep: &mut SuiteReport) -> Result<()> {
    let s = ring.s();
    let dom = vec![s; rank];
    let phi = morphism(ring, &dom, cod, m)?;
    let brute_injective = brute::kernel_size(ring, &dom, cod, m)? == 1;
    if phi.is_injective() != brute_injective {
        rep.fail(format!("injectivity disagrees for {:?} into {cod:?}", m.to_rows()));
        return Ok(());
    }
    match phi.split_injection_normalize() {
        Ok(bc) => {
            rep.nontrivial += 1;
            let q = &bc.blocks[&0];
            let mut ok = brute_injective && q.is_consistent(ring);
            for mat in [&q.matrix, &q.inverse] {
                for (i, &ti) in cod.iter().enumerate() {
                    for (j, &tj) in cod.iter().enumerate() {
                        let (step, _) = entry_choices(ring, tj, ti);
                        ok &= (mat[(i, j)] % ring.pow_p(ti)).is_multiple_of(step);
                    }
                }
            }
            for j in 0..rank {
                let mut y = q.inverse.apply(ring, &m.column(j));
                brute::reduce(ring, cod, &mut y);
                ok &= y.iter().enumerate().all(|(i, &a)| a == u64::from(i == j));
            }
            let (dim_cod, dim_dom) = (module(ring, cod).dim_total(s)?, module(ring, &dom).dim_total(s)?);
            ok &= dim_cod >= dim_dom;
            rep.check(ok, || format!("split of {:?} into {cod:?} is not a valid normalization", m.to_rows()));
        }
        Err(Error::NotInjective { witness, .. }) => {
            let image = brute::apply(ring, cod, m, &witness);
            let mut w = witness.clone();
            brute::reduce(ring, &dom, &mut w);
            rep.check(!brute_injective && !is_zero_vec(&w) && is_zero_vec(&image), || {
                format!("bad kernel witness {witness:?} for {:?} into {cod:?}", m.to_rows())
            });
        }
        Err(e) => rep.fail(format!("unexpected error {e} for {:?} into {cod:?}", m.to_rows())),
    }
    Ok(())
}

pub fn suite_split_injection(cfg: &SelftestConfig) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("split_injection");
    let mut rng = rng_for(cfg, 2);
    for s in 1..=cfg.exhaustive_s {
        let ring = RingSpec::new(cfg.p, s)?;
        for rank in 1..=2 {
            for cod in shapes(s, 3) {
                for m in maps(&mut rng, &ring, &vec![s; rank], &cod, 300) {
                    case_split(&ring, rank, &cod, &m, &mut rep)?;
                }
            }
        }
    }
    let ring = RingSpec::new(cfg.p, cfg.random_s)?;
    for run in 0..cfg.random_runs {
        let mut rng = rng_for(cfg, 0x2000 + run);
        let rank = rng.gen_range(1..=2);
        let cod = random_shape(&mut rng, ring.s(), 3, 12);
        let m = random_map(&mut rng, &ring, &vec![ring.s(); rank], &cod);
        case_split(&ring, rank, &cod, &m, &mut rep)?;
    }
    Ok(rep)
}

/// Middle module A ⊕ B in canonical order with the mask of A-summands.
fn split_middle(a: &[u32], b: &[u32]) -> (Vec<u32>, Vec<bool>) {
    let mut tagged: Vec<(u32, bool)> = a.iter().map(|&t| (t, true)).chain(b.iter().map(|&t| (t, false))).collect();
    tagged.sort_by_key(|x| std::cmp::Reverse(x.0));
    tagged.into_iter().unzip()
}

#[allow(clippy::too_many_arguments)]
fn case_factor_tensor(
    ring: &RingSpec,
    rank: usize,
    middle: &[u32],
    mask: &[bool],
    y: &[u32],
    f: &Matrix,
    g: &Matrix,
    rep: &mut SuiteReport,
) -> Result<()> {
    let s = ring.s();
    let x = vec![s; rank];
    let fm = morphism(ring, &x, middle, f)?;
    let gm = morphism(ring, middle, y, g)?;
    let got = fm.factor_tensor_check(&gm, &BTreeMap::from([(0, mask.to_vec())]))?;
    let complement_killed = middle.iter().zip(mask).all(|(&t, &a)| a || t < s);
    let gf = g.mul(ring, f);
    let composite_injective = brute::kernel_size(ring, &x, y, &gf)? == 1;
    let expected = if !complement_killed {
        Err(FactorTensorViolation::ComplementNotKilled)
    } else if !composite_injective {
        Err(FactorTensorViolation::CompositeNotInjective)
    } else {
        rep.nontrivial += 1;
        let mut proj = Matrix::zeros(middle.len(), middle.len());
        for (i, &keep) in mask.iter().enumerate() {
            proj[(i, i)] = u64::from(keep);
        }
        let through_a = g.mul(ring, &proj).mul(ring, f);
        Ok(brute::kernel_size(ring, &x, y, &through_a)? == 1)
    };
    rep.check(got == expected && expected != Ok(false), || {
        format!("factor through A: f {:?}, g {:?}, middle {middle:?} mask {mask:?}: {got:?}", f.to_rows(), g.to_rows())
    });
    Ok(())
}

pub fn suite_factor_tensor(cfg: &SelftestConfig) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("factor_tensor");
    let mut rng = rng_for(cfg, 3);
    for s in 1..=cfg.exhaustive_s {
        let ring = RingSpec::new(cfg.p, s)?;
        let mut bs: Vec<Vec<u32>> = shapes(s.saturating_sub(1), 1);
        bs.push(vec![s]);
        for rank in 1..=2 {
            let x = vec![s; rank];
            for a in shapes(s, 2) {
                for b in &bs {
                    let (middle, mask) = split_middle(&a, b);
                    if middle.is_empty() {
                        continue;
                    }
                    for y in shapes(s, 2).into_iter().filter(|y| !y.is_empty()) {
                        for f in maps(&mut rng, &ring, &x, &middle, 6) {
                            for g in maps(&mut rng, &ring, &middle, &y, 6) {
                                case_factor_tensor(&ring, rank, &middle, &mask, &y, &f, &g, &mut rep)?;
                            }
                        }
                    }
                }
            }
        }
    }
    let ring = RingSpec::new(cfg.p, cfg.random_s)?;
    let s = ring.s();
    for run in 0..cfg.random_runs {
        let mut rng = rng_for(cfg, 0x3000 + run);
        let rank = rng.gen_range(1..=2);
        let a = random_shape(&mut rng, s, 2, 8);
        let b = if s > 1 { random_shape(&mut rng, s - 1, 1, 8) } else { Vec::new() };
        let (middle, mask) = split_middle(&a, &b);
        if middle.is_empty() {
            continue;
        }
        let y = random_shape(&mut rng, s, 3, 12);
        let x = vec![s; rank];
        let f = random_map(&mut rng, &ring, &x, &middle);
        let g = random_map(&mut rng, &ring, &middle, &y);
        case_factor_tensor(&ring, rank, &middle, &mask, &y, &f, &g, &mut rep)?;
    }
    Ok(rep)
}

fn case_surjection(ring: &RingSpec, m_exps: &[u32], n_exps: &[u32], m: &Matrix, rep: &mut SuiteReport) -> Result<()> {
    let phi = morphism(ring, m_exps, n_exps, m)?;
    let brute_surjective = brute::image_set(ring, m_exps, n_exps, m)?.len() == order(ring, n_exps);
    let mut ok = phi.is_surjective() == brute_surjective;
    if brute_surjective {
        rep.nontrivial += 1;
        let s = ring.s();
        ok &= phi.domain().dim_total(s)? >= phi.codomain().dim_total(s)?;
    }
    rep.check(ok, || format!("surjection {:?}: {m_exps:?} -> {n_exps:?}", m.to_rows()));
    Ok(())
}

pub fn suite_surjection_monotone(cfg: &SelftestConfig) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("surjection_monotone");
    let mut rng = rng_for(cfg, 4);
    for s in 1..=cfg.exhaustive_s {
        let ring = RingSpec::new(cfg.p, s)?;
        for m_exps in shapes(s, 3) {
            for n_exps in shapes(s, 2) {
                for m in maps(&mut rng, &ring, &m_exps, &n_exps, 200) {
                    case_surjection(&ring, &m_exps, &n_exps, &m, &mut rep)?;
                }
            }
        }
    }
    let ring = RingSpec::new(cfg.p, cfg.random_s)?;
    for run in 0..cfg.random_runs {
        let mut rng = rng_for(cfg, 0x4000 + run);
        let m_exps = random_shape(&mut rng, ring.s(), 3, 10);
        let n_exps = random_shape(&mut rng, ring.s(), 2, 8);
        let m = random_map(&mut rng, &ring, &m_exps, &n_exps);
        case_surjection(&ring, &m_exps, &n_exps, &m, &mut rep)?;
    }
    Ok(rep)
}

fn case_image(ring: &RingSpec, dom: &[u32], rank: usize, m: &Matrix, rep: &mut SuiteReport) -> Result<()> {
    let cod = vec![ring.s(); rank];
    let phi = morphism(ring, dom, &cod, m)?;
    let dims = phi.image_dims()?;
    let lib = dims.exponents(0).to_vec();
    let oracle = brute::structure(ring, &cod, &brute::image_set(ring, dom, &cod, m)?);
    let top = dims.dim_total(ring.s())?;
    rep.nontrivial += u64::from(top > 0);
    rep.check(
        lib == oracle && top == phi.rank_mod_p() && phi.image() == dims,
        || format!("image of {:?}: {dom:?} -> free {rank}: library {lib:?}, oracle {oracle:?}", m.to_rows()),
    );
    Ok(())
}

pub fn suite_image_rank(cfg: &SelftestConfig) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("image_rank");
    let mut rng = rng_for(cfg, 5);
    for s in 1..=cfg.exhaustive_s {
        let ring = RingSpec::new(cfg.p, s)?;
        for dom in shapes(s, 2) {
            for rank in 1..=2 {
                for m in maps(&mut rng, &ring, &dom, &vec![s; rank], 200) {
                    case_image(&ring, &dom, rank, &m, &mut rep)?;
                }
            }
        }
    }
    let ring = RingSpec::new(cfg.p, cfg.random_s)?;
    for run in 0..cfg.random_runs {
        let mut rng = rng_for(cfg, 0x5000 + run);
        let dom = random_shape(&mut rng, ring.s(), 3, 12);
        let rank = rng.gen_range(1..=2);
        let m = random_map(&mut rng, &ring, &dom, &vec![ring.s(); rank]);
        case_image(&ring, &dom, rank, &m, &mut rep)?;
    }
    Ok(rep)
}

/// M → M′ → N with surjective composite, p^r M′ = 0 and p^{s′} N = 0:
/// Σ_{t ≥ s′} dim_{Z/p^t}(M′) ≥ dim_{Z/p^{s′}}(N).
#[allow(clippy::too_many_arguments)]
fn case_sandwich(
    ring: &RingSpec,
    m_exps: &[u32],
    mid: &[u32],
    n_exps: &[u32],
    s2: u32,
    g: &Matrix,
    h: &Matrix,
    rep: &mut SuiteReport,
) -> Result<()> {
    let gm = morphism(ring, m_exps, mid, g)?;
    let hm = morphism(ring, mid, n_exps, h)?;
    let composite = hm.compose(&gm)?;
    let hg = h.mul(ring, g);
    let brute_surjective = brute::image_set(ring, m_exps, n_exps, &hg)?.len() == order(ring, n_exps);
    let mut ok = composite.is_surjective() == brute_surjective;
    if brute_surjective {
        rep.nontrivial += 1;
        let middle = module(ring, mid);
        let lhs: usize = (s2..=ring.s()).map(|t| middle.dim_total(t)).sum::<Result<usize>>()?;
        let rhs = n_exps.iter().filter(|&&t| t == s2).count();
        ok &= lhs >= rhs;
    }
    rep.check(ok, || format!("sandwich {m_exps:?} -> {mid:?} -> {n_exps:?} at s' = {s2}"));
    Ok(())
}

pub fn suite_sandwich(cfg: &SelftestConfig) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("sandwich");
    let mut rng = rng_for(cfg, 6);
    for r in 1..=cfg.exhaustive_s {
        let ring = RingSpec::new(cfg.p, r)?;
        let m_exps = vec![r; 2];
        for mid in shapes(r, 2).into_iter().filter(|e| !e.is_empty()) {
            for s2 in 1..=r {
                for n_exps in shapes(s2, 2).into_iter().filter(|e| !e.is_empty()) {
                    for g in maps(&mut rng, &ring, &m_exps, &mid, 4) {
                        for h in maps(&mut rng, &ring, &mid, &n_exps, 8) {
                            case_sandwich(&ring, &m_exps, &mid, &n_exps, s2, &g, &h, &mut rep)?;
                        }
                    }
                }
            }
        }
    }
    let ring = RingSpec::new(cfg.p, cfg.random_s)?;
    for run in 0..cfg.random_runs {
        let mut rng = rng_for(cfg, 0x6000 + run);
        let s2 = rng.gen_range(1..=ring.s());
        let m_exps = random_shape(&mut rng, ring.s(), 3, 10);
        let mid = random_shape(&mut rng, ring.s(), 3, 10);
        let n_exps = random_shape(&mut rng, s2, 2, 8);
        let g = random_map(&mut rng, &ring, &m_exps, &mid);
        let h = random_map(&mut rng, &ring, &mid, &n_exps);
        case_sandwich(&ring, &m_exps, &mid, &n_exps, s2, &g, &h, &mut rep)?;
    }
    Ok(rep)
}

/// A = ⟨a, b⟩ ⊆ N: A + pN = N forces A = N; the library's structure of A
/// matches enumeration.
fn case_saturation(ring: &RingSpec, n: &[u32], a: &Element, b: &Element, rep: &mut SuiteReport) -> Result<()> {
    let span_a = brute::span(ring, n, &[a.clone(), b.clone()]);
    let mut gens = vec![a.clone(), b.clone()];
    for i in 0..n.len() {
        let mut e = vec![0; n.len()];
        e[i] = ring.p();
        gens.push(e);
    }
    let with_pn = brute::span(ring, n, &gens);
    let full = order(ring, n);
    let mut ok = true;
    if with_pn.len() == full {
        rep.nontrivial += 1;
        ok &= span_a.len() == full;
    }
    let lib = submodule_exponents(ring, n, &Matrix::from_columns(n.len(), &[a.clone(), b.clone()]));
    ok &= lib == brute::structure(ring, n, &span_a);
    rep.check(ok, || format!("submodule ⟨{a:?}, {b:?}⟩ of {n:?}"));
    Ok(())
}

pub fn suite_saturation(cfg: &SelftestConfig) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("saturation");
    let mut rng = rng_for(cfg, 7);
    for s in 1..=cfg.exhaustive_s {
        let ring = RingSpec::new(cfg.p, s)?;
        for n in shapes(s, 2).into_iter().filter(|e| !e.is_empty()) {
            let elems = brute::elements(&ring, &n)?;
            if elems.len() <= 81 {
                for (i, a) in elems.iter().enumerate() {
                    for b in &elems[i..] {
                        case_saturation(&ring, &n, a, b, &mut rep)?;
                    }
                }
            } else {
                for _ in 0..400 {
                    let a = elems.choose(&mut rng).expect("nonempty");
                    let b = elems.choose(&mut rng).expect("nonempty");
                    case_saturation(&ring, &n, a, b, &mut rep)?;
                }
            }
        }
    }
    let ring = RingSpec::new(cfg.p, cfg.random_s)?;
    for run in 0..cfg.random_runs {
        let mut rng = rng_for(cfg, 0x7000 + run);
        let n = random_shape(&mut rng, ring.s(), 2, 8);
        if n.is_empty() {
            continue;
        }
        let pick = |rng: &mut ChaCha8Rng| -> Element { n.iter().map(|&t| rng.gen_range(0..ring.pow_p(t))).collect() };
        let (a, b) = (pick(&mut rng), pick(&mut rng));
        case_saturation(&ring, &n, &a, &b, &mut rep)?;
    }
    Ok(rep)
}

fn case_tor(ring: &RingSpec, m: &[u32], n: &[u32], rep: &mut SuiteReport) -> Result<()> {
    let s = ring.s();
    let (mm, nm) = (module(ring, m), module(ring, n));
    let t = mm.tor(&nm)?;
    let mut oracle: Vec<u32> = Vec::new();
    for &a in m {
        oracle.extend(brute::tor_cyclic(ring, a, n)?);
    }
    oracle.sort_unstable_by(|a, b| b.cmp(a));
    let mut ok = t.exponents(0) == oracle.as_slice();
    ok &= t == nm.tor(&mm)?;
    ok &= t.killed_by(s - 1);
    if mm.is_free() || nm.is_free() {
        rep.nontrivial += 1;
        ok &= t.is_zero();
    }
    rep.check(ok, || format!("Tor({m:?}, {n:?}) over Z/{}^{s}: {:?} vs oracle {oracle:?}", ring.p(), t.exponents(0)));
    Ok(())
}

pub fn suite_tor(cfg: &SelftestConfig) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("tor");
    for s in 1..=cfg.exhaustive_s {
        let ring = RingSpec::new(cfg.p, s)?;
        for m in shapes(s, 2) {
            for n in shapes(s, 2) {
                case_tor(&ring, &m, &n, &mut rep)?;
            }
        }
    }
    let ring = RingSpec::new(cfg.p, cfg.random_s)?;
    for run in 0..cfg.random_runs {
        let mut rng = rng_for(cfg, 0x8000 + run);
        let m = random_shape(&mut rng, ring.s(), 3, 12);
        let n = random_shape(&mut rng, ring.s(), 2, 8);
        case_tor(&ring, &m, &n, &mut rep)?;
    }
    Ok(rep)
}

/// An injection from a free module stays injective after ⊗ Z/p^t.
fn case_persistence(ring: &RingSpec, rank: usize, cod: &[u32], m: &Matrix, rep: &mut SuiteReport) -> Result<()> {
    let dom = vec![ring.s(); rank];
    let phi = morphism(ring, &dom, cod, m)?;
    if !phi.is_injective() {
        return Ok(());
    }
    rep.nontrivial += 1;
    let mut ok = true;
    for t in 1..ring.s() {
        let red = phi.tensor_reduce(t)?;
        let r = *red.ring();
        let (d, c) = (red.domain().exponents(0).to_vec(), red.codomain().exponents(0).to_vec());
        let block = red.block(0).cloned().unwrap_or_else(|| Matrix::zeros(c.len(), d.len()));
        ok &= red.is_injective() && brute::kernel_size(&r, &d, &c, &block)? == 1;
    }
    rep.check(ok, || format!("injection {:?} into {cod:?} loses injectivity mod p^t", m.to_rows()));
    Ok(())
}

pub fn suite_injection_persistence(cfg: &SelftestConfig) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("injection_persistence");
    let mut rng = rng_for(cfg, 9);
    for s in 2..=cfg.exhaustive_s {
        let ring = RingSpec::new(cfg.p, s)?;
        for rank in 1..=2 {
            for cod in shapes(s, 3) {
                for m in maps(&mut rng, &ring, &vec![s; rank], &cod, 200) {
                    case_persistence(&ring, rank, &cod, &m, &mut rep)?;
                }
            }
        }
    }
    let ring = RingSpec::new(cfg.p, cfg.random_s)?;
    for run in 0..cfg.random_runs {
        let mut rng = rng_for(cfg, 0x9000 + run);
        let rank = rng.gen_range(1..=2);
        let cod = random_shape(&mut rng, ring.s(), 3, 12);
        let m = random_map(&mut rng, &ring, &vec![ring.s(); rank], &cod);
        case_persistence(&ring, rank, &cod, &m, &mut rep)?;
    }
    Ok(rep)
}

/// Smith normal form on square matrices: exhaustive 2×2 over Z/9 with the
/// cokernel checked by enumeration, then random 6×6 over Z/27.
pub fn suite_smith_normal_form(cfg: &SelftestConfig) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("smith_normal_form");
    let check = |ring: &RingSpec, a: &Matrix| {
        let snf = smith_normal_form_matrix(ring, a);
        let prod = snf.u.matrix.mul(ring, a).mul(ring, &snf.v.matrix);
        snf.u.is_consistent(ring)
            && snf.v.is_consistent(ring)
            && prod == snf.diagonal_matrix(ring)
            && snf.diagonal.windows(2).all(|w| w[0] <= w[1])
    };
    let ring = RingSpec::new(cfg.p, 2)?;
    let free = [2u32, 2];
    let all = brute::elements(&ring, &free)?;
    let all_set: HashSet<Element> = all.iter().cloned().collect();
    let q = ring.modulus();
    for idx in 0..q.pow(4) {
        let e = [idx % q, idx / q % q, idx / q / q % q, idx / q / q / q];
        let a = Matrix::from_columns(2, &[vec![e[0], e[1]], vec![e[2], e[3]]]);
        let cols = [a.column(0), a.column(1)];
        let oracle = brute::quotient_structure(&ring, &free, &all_set, &brute::span(&ring, &free, &cols));
        let ok = check(&ring, &a) && cokernel_exponents(&ring, &a) == oracle;
        rep.nontrivial += 1;
        rep.check(ok, || format!("SNF of {:?} over Z/9", a.to_rows()));
    }
    let ring = RingSpec::new(cfg.p, 3)?;
    for run in 0..cfg.random_runs {
        let mut rng = rng_for(cfg, 0xa000 + run);
        let rows: Vec<Vec<i64>> = (0..6)
            .map(|_| (0..6).map(|_| rng.gen_range(0..ring.modulus()) as i64).collect())
            .collect();
        let a = Matrix::from_rows(&ring, &rows);
        rep.check(check(&ring, &a), || format!("SNF of {rows:?} over Z/27"));
    }
    Ok(rep)
}

pub fn module_suites(cfg: &SelftestConfig) -> Result<Vec<SuiteReport>> {
    Ok(vec![
        suite_basis_maneuvers(cfg)?,
        suite_split_injection(cfg)?,
        suite_factor_tensor(cfg)?,
        suite_surjection_monotone(cfg)?,
        suite_image_rank(cfg)?,
        suite_sandwich(cfg)?,
        suite_saturation(cfg)?,
        suite_tor(cfg)?,
        suite_injection_persistence(cfg)?,
        suite_smith_normal_form(cfg)?,
    ])
}

// ---------------------------------------------------------------------------
// tensor algebra

fn random_tensor<R: Rng>(rng: &mut R, ring: RingSpec, n: usize, weights: std::ops::RangeInclusive<usize>) -> TensorElement {
    let mut e = TensorElement::zero(ring);
    for _ in 0..rng.gen_range(1..=4) {
        let len = rng.gen_range(weights.clone());
        let w: Vec<Letter> = (0..len).map(|_| rng.gen_range(0..n) as Letter).collect();
        e.add_term(w, rng.gen_range(1..ring.modulus().max(2)));
    }
    e
}

/// ζ_i of a product of k factors vanishes below weight k and equals the
/// product of the weight-1 parts at weight k.
pub fn suite_leading_trims(cfg: &SelftestConfig) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("leading_trims");
    for s in 1..=cfg.exhaustive_s {
        let ring = RingSpec::new(cfg.p, s)?;
        for run in 0..cfg.random_runs {
            let mut rng = rng_for(cfg, 0xb000 + run * 8 + s as u64);
            let k = rng.gen_range(1..=4);
            let factors: Vec<TensorElement> = (0..k).map(|_| random_tensor(&mut rng, ring, 3, 1..=3)).collect();
            let product = factors[1..].iter().fold(factors[0].clone(), |acc, f| acc.mul(f));
            let leading = factors[1..].iter().fold(factors[0].zeta(1), |acc, f| acc.mul(&f.zeta(1)));
            let below = (1..k).all(|i| product.zeta(i).is_zero());
            rep.nontrivial += u64::from(!leading.is_zero());
            rep.check(below && product.zeta(k) == leading, || format!("ζ on a product of {k} factors over Z/{}^{s}", cfg.p));
        }
    }
    Ok(rep)
}

/// Unit upper-triangular on the first `cols` rows, random below, rows shuffled:
/// injective over Z/p^s.
fn random_injective<R: Rng>(rng: &mut R, ring: &RingSpec, rows: usize, cols: usize) -> Matrix {
    let mut m = Matrix::zeros(rows, cols);
    for i in 0..rows {
        for j in 0..cols {
            m[(i, j)] = match i.cmp(&j) {
                std::cmp::Ordering::Less => rng.gen_range(0..ring.modulus()),
                std::cmp::Ordering::Equal => loop {
                    let u = rng.gen_range(1..ring.modulus().max(2));
                    if ring.is_unit(u) {
                        break u;
                    }
                },
                std::cmp::Ordering::Greater if i >= cols => rng.gen_range(0..ring.modulus()),
                std::cmp::Ordering::Greater => 0,
            };
        }
    }
    let mut order: Vec<usize> = (0..rows).collect();
    order.shuffle(rng);
    let mut out = Matrix::zeros(rows, cols);
    for (dst, &src) in order.iter().enumerate() {
        for j in 0..cols {
            out[(dst, j)] = m[(src, j)];
        }
    }
    out
}

/// A map T(A) → T(B) truncated at weight `top`, assembled from weight blocks
/// F_{jk}: A^{⊗k} → B^{⊗j} with F_{kk} injective and F_{jk} ≡ 0 mod p for
/// j < k. Such a map is injective.
pub fn leading_terms_map<R: Rng>(rng: &mut R, ring: &RingSpec, a: usize, b: usize, top: u32) -> Matrix {
    let dims_a: Vec<usize> = (1..=top).map(|k| a.pow(k)).collect();
    let dims_b: Vec<usize> = (1..=top).map(|k| b.pow(k)).collect();
    let (rows, cols) = (dims_b.iter().sum(), dims_a.iter().sum());
    let mut f = Matrix::zeros(rows, cols);
    let mut r0 = 0;
    for (j, &rj) in dims_b.iter().enumerate() {
        let mut c0 = 0;
        for (k, &ck) in dims_a.iter().enumerate() {
            let block = if j == k {
                random_injective(rng, ring, rj, ck)
            } else {
                let mut m = Matrix::zeros(rj, ck);
                let step = if j < k { ring.p() } else { 1 };
                for i in 0..rj {
                    for c in 0..ck {
                        m[(i, c)] = ring.mul(step, rng.gen_range(0..ring.modulus()));
                    }
                }
                m
            };
            for i in 0..rj {
                for c in 0..ck {
                    f[(r0 + i, c0 + c)] = block[(i, c)];
                }
            }
            c0 += ck;
        }
        r0 += rj;
    }
    f
}

pub fn suite_leading_terms(cfg: &SelftestConfig) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("leading_terms");
    let mut rng = rng_for(cfg, 0xc);
    for s in 1..=cfg.exhaustive_s {
        let ring = RingSpec::new(cfg.p, s)?;
        for a in 1..=3 {
            for b in a..=3 {
                for top in 1..=4 {
                    for _ in 0..3 {
                        let f = leading_terms_map(&mut rng, &ring, a, b, top);
                        let phi = ModuleMorphism::new(
                            GradedModule::free(ring, 0, f.cols()),
                            GradedModule::free(ring, 0, f.rows()),
                            0,
                            BTreeMap::from([(0, f.clone())]),
                        )?;
                        let injective = phi.is_injective();
                        let full_rank = rank_mod_p(&ring, &f) == f.cols();
                        rep.nontrivial += 1;
                        rep.check(injective && full_rank, || {
                            format!("truncated map dims {a}->{b}, weight ≤ {top}, s = {s}: injective {injective}, full rank mod p {full_rank}")
                        });
                    }
                }
            }
        }
    }
    Ok(rep)
}

pub fn tensor_suites(cfg: &SelftestConfig) -> Result<Vec<SuiteReport>> {
    Ok(vec![suite_leading_trims(cfg)?, suite_leading_terms(cfg)?])
}

// ---------------------------------------------------------------------------
// free Lie identities

pub fn random_tree<R: Rng>(rng: &mut R, n: usize, weight: usize) -> BracketTree {
    if weight == 1 {
        return BracketTree::leaf(rng.gen_range(0..n) as Letter);
    }
    let split = rng.gen_range(1..weight);
    BracketTree::node(random_tree(rng, n, split), random_tree(rng, n, weight - split))
}

fn tree_on_leaves<R: Rng>(rng: &mut R, leaves: &[Letter]) -> BracketTree {
    if leaves.len() == 1 {
        return BracketTree::leaf(leaves[0]);
    }
    let split = rng.gen_range(1..leaves.len());
    BracketTree::node(tree_on_leaves(rng, &leaves[..split]), tree_on_leaves(rng, &leaves[split..]))
}

/// A two-term homogeneous element: two random trees on the same leaf multiset.
fn random_homogeneous<R: Rng>(rng: &mut R, gens: &GeneratorSet, weight: usize) -> FreeNAElement {
    let ring = *gens.ring();
    let mut leaves: Vec<Letter> = (0..weight).map(|_| rng.gen_range(0..gens.len()) as Letter).collect();
    let mut e = FreeNAElement::zero(ring);
    for _ in 0..2 {
        leaves.shuffle(rng);
        e.add_term(tree_on_leaves(rng, &leaves), rng.gen_range(1..ring.modulus().max(2)));
    }
    e
}

fn mixed_generators(ring: RingSpec) -> Result<GeneratorSet> {
    GeneratorSet::from_pairs(ring, &[("a", 2), ("b", 1), ("c", 3)])
}

/// Antisymmetry, Jacobi and the commutator homomorphism property in the
/// tensor image, plus [x,[x,x]] = 0 for odd x.
pub fn suite_lie_identities(cfg: &SelftestConfig) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("lie_identities");
    for s in 1..=cfg.exhaustive_s {
        let gens = mixed_generators(RingSpec::new(cfg.p, s)?)?;
        let m = |e: &FreeNAElement| embed_tensor(e, &gens);
        for run in 0..cfg.random_runs {
            let mut rng = rng_for(cfg, 0xd000 + run * 8 + s as u64);
            let (wa, wb, wc) = (rng.gen_range(1..=2), rng.gen_range(1..=2), rng.gen_range(1..=2));
            let (a, b, c) = (
                random_homogeneous(&mut rng, &gens, wa),
                random_homogeneous(&mut rng, &gens, wb),
                random_homogeneous(&mut rng, &gens, wc),
            );
            let (da, db) = (a.degree(&gens).unwrap_or(0), b.degree(&gens).unwrap_or(0));
            let koszul = |x: i64, y: i64| gens.ring().sign(x % 2 != 0 && y % 2 != 0);
            let ab = m(&a.bracket(&b));
            let hom = ab == m(&a).bracket(&m(&b), &gens);
            let anti = ab.add(&m(&b.bracket(&a)).scale(koszul(da, db))).is_zero();
            let jacobi = m(&a.bracket(&b.bracket(&c)))
                .sub(&m(&a.bracket(&b).bracket(&c)))
                .sub(&m(&b.bracket(&a.bracket(&c))).scale(koszul(da, db)))
                .is_zero();
            let odd = [&a, &b, &c].into_iter().find(|x| x.degree(&gens).unwrap_or(0) % 2 != 0);
            let cube = odd.is_none_or(|x| m(&x.bracket(&x.bracket(x))).is_zero());
            rep.nontrivial += u64::from(odd.is_some());
            rep.check(hom && anti && jacobi && cube, || {
                format!(
                    "identities fail for a = {}, b = {}, c = {}: hom {hom}, anti {anti}, jacobi {jacobi}, cube {cube}",
                    a.display(&gens),
                    b.display(&gens),
                    c.display(&gens)
                )
            });
        }
    }
    Ok(rep)
}

/// ζ_j ∘ ι_i is the identity for j = i and zero otherwise.
pub fn suite_zeta_iota(cfg: &SelftestConfig) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("zeta_iota");
    let ring = RingSpec::new(cfg.p, cfg.exhaustive_s)?;
    for run in 0..cfg.random_runs {
        let mut rng = rng_for(cfg, 0xe000 + run);
        let i = rng.gen_range(1..=5);
        let e = random_tensor(&mut rng, ring, 3, i..=i);
        let included = e.iota(i)?;
        let ok = (1..=i + 2).all(|j| if j == i { included.zeta(j) == e } else { included.zeta(j).is_zero() })
            && (e.is_zero() || e.iota(i + 1).is_err());
        if !e.is_zero() {
            rep.nontrivial += 1;
        }
        rep.check(ok, || format!("ζ∘ι fails at weight {i}"));
    }
    Ok(rep)
}

pub fn lie_suites(cfg: &SelftestConfig) -> Result<Vec<SuiteReport>> {
    Ok(vec![suite_lie_identities(cfg)?, suite_zeta_iota(cfg)?])
}

// ---------------------------------------------------------------------------
// differentials

/// d a = 2b, d c = e with a, b, c, e of degrees 4, 3, 3, 2: both parities and
/// a non-unit-free coefficient.
pub fn mixed_differential(ring: RingSpec) -> Result<DifferentialSpec> {
    let gens = GeneratorSet::from_pairs(ring, &[("a", 4), ("b", 3), ("c", 3), ("e", 2)])?;
    let img = |i: Letter, c: u64| FreeNAElement::generator(&gens, i).scale(c);
    let images = vec![img(1, 2), FreeNAElement::zero(ring), img(3, 1), FreeNAElement::zero(ring)];
    DifferentialSpec::new(gens.clone(), images)
}

/// d² = 0 and embed ∘ d = d ∘ embed on random trees of weight ≤ 8.
pub fn suite_differential(cfg: &SelftestConfig) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("differential");
    let specs = [
        DifferentialSpec::acyclic_pair(RingSpec::new(cfg.p, 1)?, 2)?,
        DifferentialSpec::acyclic_pair(RingSpec::new(cfg.p, 2)?, 2)?,
        mixed_differential(RingSpec::new(cfg.p, 2)?)?,
    ];
    let mut rng = rng_for(cfg, 0xf);
    for run in 0..cfg.random_runs {
        let spec = &specs[run as usize % specs.len()];
        let gens = spec.gens();
        let w = rng.gen_range(1..=8);
        let t = FreeNAElement::from_tree(*spec.ring(), random_tree(&mut rng, gens.len(), w));
        let dt = spec.differentiate(&t);
        let weight_kept = dt.terms().keys().all(|tr| tr.weight() == w);
        let squared = embed_tensor(&spec.differentiate(&dt), gens).is_zero();
        let commutes = embed_tensor(&dt, gens) == spec.differentiate_tensor(&embed_tensor(&t, gens));
        rep.nontrivial += u64::from(!dt.is_zero());
        rep.check(weight_kept && squared && commutes, || {
            format!("d on {}: weight {weight_kept}, d² {squared}, commutes {commutes}", t.display(gens))
        });
    }
    Ok(rep)
}

/// τ_k and σ_k are cycles mod p, and homology of L(x, dx) ⊗ F_p vanishes in
/// weights w > 1 not divisible by p.
pub fn suite_cycles(_cfg: &SelftestConfig) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("cycles");
    let limits = Limits::default();
    for (p, ks, max_w) in [(3u64, vec![1u32, 2], 8usize), (5, vec![1], 5)] {
        let spec = DifferentialSpec::acyclic_pair(RingSpec::new(p, 1)?, 2)?;
        let x = FreeNAElement::generator(spec.gens(), 0);
        for k in ks {
            let t = tau(&spec, &x, k, &limits)?;
            let s = sigma(&spec, &x, k, &limits)?;
            rep.nontrivial += 1;
            rep.check(is_cycle_mod_p(&spec, &t) && is_cycle_mod_p(&spec, &s), || {
                format!("τ_{k} or σ_{k} is not a cycle at p = {p}")
            });
        }
        for w in (2..=max_w).filter(|w| !(*w as u64).is_multiple_of(p)) {
            let h = homology(&spec, w, 1, &limits)?;
            rep.check(h.h.is_zero(), || format!("homology at weight {w}, p = {p} is {}", h.h));
        }
    }
    Ok(rep)
}

pub fn differential_suites(cfg: &SelftestConfig) -> Result<Vec<SuiteReport>> {
    Ok(vec![suite_differential(cfg)?, suite_cycles(cfg)?])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quick() -> SelftestConfig {
        SelftestConfig {
            exhaustive_s: 2,
            random_s: 3,
            random_runs: 20,
            ..SelftestConfig::default()
        }
    }

    #[test]
    fn shapes_are_canonical() {
        let sh = shapes(2, 2);
        assert_eq!(sh.len(), 1 + 2 + 3);
        assert!(sh.iter().all(|e| e.windows(2).all(|w| w[0] >= w[1])));
    }

    #[test]
    fn exhaustive_map_count() {
        let ring = RingSpec::new(3, 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        // Z/9 ⊕ Z/3 → Z/3: 3·3 maps
        assert_eq!(maps(&mut rng, &ring, &[2, 1], &[1], 1000).len(), 9);
        assert_eq!(maps(&mut rng, &ring, &[2, 2], &[2, 2], 10).len(), 10);
    }

    #[test]
    fn quick_selftest_passes() {
        let rep = run_selftest(&quick()).unwrap();
        for s in &rep.suites {
            assert!(s.passed(), "{s:?}");
        }
    }
}

//! Deterministic, named verification checks covering the library end to end.
//!
//! Each check is a self-contained mathematical statement with an exact
//! pass/fail answer. The runner builds the per-type data once, evaluates
//! every check, and reports one line per check in a fixed order, so the
//! output is diffable across runs and machines. Types may be verified in
//! parallel; the report order never depends on scheduling.

use std::collections::BTreeMap;
use std::path::PathBuf;

use num_traits::{One, ToPrimitive, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::coeffs::{closed_form_reference, coeff_ratio, dedekind_check, CoeffTable};
use crate::cyclo::CycloNum;
use crate::golden::{self, GoldenTable};
use crate::hirota::{apply, generate, to_q_variables, HirotaSystem, HVar, Monomial, TauSeries};
use crate::linalg::invert_rational;
use crate::rational::{rat, rat_int, Rational};
use crate::roots::{AdeType, RootSystem};
use crate::spectral::CoxeterData;

/// Result of one named check.
#[derive(Clone, Debug)]
pub struct CheckOutcome {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl CheckOutcome {
    fn from(name: String, result: std::result::Result<String, String>) -> CheckOutcome {
        match result {
            Ok(detail) => CheckOutcome {
                name,
                passed: true,
                detail,
            },
            Err(detail) => CheckOutcome {
                name,
                passed: false,
                detail,
            },
        }
    }
}

/// Where the reference coefficient tables come from.
#[derive(Clone, Debug)]
pub enum GoldenSource {
    /// The tables compiled into the library.
    Embedded,
    /// One `{type}.json` file per type in a directory.
    Dir(PathBuf),
}

impl GoldenSource {
    fn table(&self, t: AdeType) -> std::result::Result<GoldenTable, String> {
        match self {
            GoldenSource::Embedded => golden::embedded(t).map_err(|e| e.to_string()),
            GoldenSource::Dir(dir) => golden::load_dir(dir, t).map_err(|e| e.to_string()),
        }
    }
}

/// Runs every check for the given types and appends the scope statement.
/// Types are processed in the given order; within a type the check order
/// is fixed.
pub fn run_checks(types: &[AdeType], golden: &GoldenSource) -> Vec<CheckOutcome> {
    let per_type: Vec<Vec<CheckOutcome>> = types
        .par_iter()
        .map(|&t| type_checks(t, golden))
        .collect();
    let mut out: Vec<CheckOutcome> = per_type.into_iter().flatten().collect();
    out.push(CheckOutcome {
        name: "scope-statement".into(),
        passed: true,
        detail: "analytic tau-function results are out of scope; \
                 this suite verifies the finite exact identities only"
            .into(),
    });
    out
}

pub fn all_passed(outcomes: &[CheckOutcome]) -> bool {
    outcomes.iter().all(|c| c.passed)
}

fn type_checks(t: AdeType, golden: &GoldenSource) -> Vec<CheckOutcome> {
    let name = |kind: &str| format!("{kind}-{t}");
    let rs = match RootSystem::build(t) {
        Ok(rs) => rs,
        Err(e) => {
            return vec![CheckOutcome::from(
                name("structure"),
                Err(format!("root system construction failed: {e}")),
            )]
        }
    };
    let cd = match CoxeterData::build(&rs) {
        Ok(cd) => cd,
        Err(e) => {
            return vec![CheckOutcome::from(
                name("structure"),
                Err(format!("spectral data construction failed: {e}")),
            )]
        }
    };
    let ct = match CoeffTable::build(&rs, &cd) {
        Ok(ct) => ct,
        Err(e) => {
            return vec![CheckOutcome::from(
                name("tables"),
                Err(format!("coefficient table construction failed: {e}")),
            )]
        }
    };
    let mut out = vec![
        CheckOutcome::from(name("structure"), check_structure(&rs)),
        CheckOutcome::from(name("bourbaki"), check_bourbaki(&rs)),
        CheckOutcome::from(name("hertling"), check_hertling(&cd)),
        CheckOutcome::from(name("tables"), check_tables(&ct, golden)),
        CheckOutcome::from(name("sums"), check_sums(&ct)),
        CheckOutcome::from(name("invariance"), check_invariance(&rs, &cd, &ct)),
        CheckOutcome::from(name("hirota"), check_hirota(&rs, &cd, &ct)),
    ];
    if matches!(
        t,
        AdeType::A(1) | AdeType::A(2) | AdeType::D(4) | AdeType::E(6)
    ) {
        out.push(CheckOutcome::from(name("tau"), check_tau(&rs, &cd, &ct)));
    }
    out
}

/// Root count, Coxeter element order, absence of eigenvalue 1, and the
/// orbit partition.
fn check_structure(rs: &RootSystem) -> std::result::Result<String, String> {
    let n = rs.ade().rank();
    let h = rs.ade().coxeter_number() as usize;
    let count = rs.num_roots();
    if count != n * h {
        return Err(format!("expected {} roots, found {count}", n * h));
    }
    let m = rs.coxeter_matrix_simple();
    let mut power = int_identity(n);
    let mut order = 0;
    for e in 1..=h {
        power = int_mul(&power, &m);
        if power == int_identity(n) {
            order = e;
            break;
        }
    }
    if order != h {
        return Err(format!("Coxeter element order is not {h}"));
    }
    let mut shifted: Vec<Vec<Rational>> = m
        .iter()
        .map(|row| row.iter().map(|&v| rat_int(v)).collect())
        .collect();
    for (i, row) in shifted.iter_mut().enumerate() {
        row[i] -= Rational::one();
    }
    if invert_rational(&shifted).is_none() {
        return Err("Coxeter element has eigenvalue 1".into());
    }
    let orbits = rs.coxeter_orbits().map_err(|e| e.to_string())?;
    if orbits.len() != n || orbits.iter().any(|o| o.len() != h) {
        return Err(format!(
            "expected {n} orbits of {h} roots, found sizes {:?}",
            orbits.iter().map(|o| o.len()).collect::<Vec<_>>()
        ));
    }
    Ok(format!("{count} roots, Coxeter order {h}, {n} orbits of {h}"))
}

fn int_identity(n: usize) -> Vec<Vec<i64>> {
    (0..n)
        .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
        .collect()
}

fn int_mul(a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = a.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| (0..n).map(|k| a[i][k] * b[k][j]).sum())
                .collect()
        })
        .collect()
}

/// sum_(gamma) <gamma,x>^2 = 2h <x,x> on random rational vectors, and the
/// all-pairs bilinear refinement on the two smallest multi-orbit types.
fn check_bourbaki(rs: &RootSystem) -> std::result::Result<String, String> {
    let t = rs.ade();
    let h = rat_int(2 * t.coxeter_number() as i64);
    let mut seed = [0u8; 32];
    for (i, b) in format!("bilinear-{t}").bytes().enumerate() {
        seed[i % 32] ^= b.wrapping_add(i as u8);
    }
    let mut rng = ChaCha8Rng::from_seed(seed);
    for trial in 0..100 {
        // random rational point of the reflection representation, drawn as
        // a combination of the simple roots so it lies in the root span
        let mut x = vec![Rational::zero(); rs.ambient_dim()];
        for i in 0..rs.rank() {
            let c = rat(rng.random_range(-12..=12), rng.random_range(1..=9));
            for (xi, ri) in x.iter_mut().zip(rs.root_rational(rs.simple_root(i))) {
                *xi += &c * &ri;
            }
        }
        let mut lhs = Rational::zero();
        for r in 0..rs.num_roots() {
            let p = rs.pair_vec_root(&x, r);
            lhs += &p * &p;
        }
        let rhs = &h * RootSystem::pair_vecs(&x, &x);
        if lhs != rhs {
            return Err(format!("norm identity failed on trial {trial}"));
        }
    }
    let mut pair_detail = String::new();
    if matches!(t, AdeType::A(3) | AdeType::D(4)) {
        let two_h = 2 * t.coxeter_number() as i64;
        for a in 0..rs.num_roots() {
            for b in 0..rs.num_roots() {
                let lhs: i64 = (0..rs.num_roots())
                    .map(|g| rs.pair_roots(a, g) * rs.pair_roots(b, g))
                    .sum();
                if lhs != two_h * rs.pair_roots(a, b) {
                    return Err(format!("bilinear identity failed on root pair ({a},{b})"));
                }
            }
        }
        pair_detail = format!(", all {} root pairs", rs.num_roots() * rs.num_roots());
    }
    Ok(format!("100 random vectors{pair_detail}"))
}

/// N(h+1)/(12h) equals sum_a m_a (h - m_a) / (2 h^2), plus the exponent
/// symmetry m <-> h - m.
fn check_hertling(cd: &CoxeterData) -> std::result::Result<String, String> {
    let (lhs, rhs) = cd.exponent_sum_identity();
    if lhs != rhs {
        return Err(format!("{lhs} != {rhs}"));
    }
    let h = cd.h();
    let mut ms: Vec<u32> = cd.exponents().to_vec();
    let mut reflected: Vec<u32> = cd.exponents().iter().map(|&m| h - m).collect();
    ms.sort_unstable();
    reflected.sort_unstable();
    if ms != reflected {
        return Err("exponents are not symmetric under m -> h - m".into());
    }
    let total: u32 = ms.iter().sum();
    if 2 * total != cd.rank() as u32 * h {
        return Err("exponent sum is not rank * h / 2".into());
    }
    Ok(format!("both sides equal {lhs}"))
}

/// Computed table equals the closed-form table and the golden file.
fn check_tables(ct: &CoeffTable, golden: &GoldenSource) -> std::result::Result<String, String> {
    let closed = closed_form_reference(ct.ade()).map_err(|e| e.to_string())?;
    for i in 0..ct.len() {
        if ct.g(i) != closed.g(i) {
            return Err(format!("g_{} differs from the closed form", i + 1));
        }
    }
    let table = golden.table(ct.ade())?;
    golden::compare(ct, &table)?;
    Ok(format!("{} coefficients match closed form and golden data", ct.len()))
}

/// sum g_i = N h (h+1) / 12 with the per-family specializations.
fn check_sums(ct: &CoeffTable) -> std::result::Result<String, String> {
    let (sum, family) = dedekind_check(ct).map_err(|e| e.to_string())?;
    if sum != family {
        return Err(format!("sum {sum} != family closed form {family}"));
    }
    let pinned = match ct.ade() {
        AdeType::E(6) => Some(rat_int(78)),
        AdeType::E(7) => Some(rat(399, 2)),
        AdeType::E(8) => Some(rat_int(620)),
        _ => None,
    };
    if let Some(p) = pinned {
        if sum != p {
            return Err(format!("sum {sum} != pinned value {p}"));
        }
    }
    Ok(format!("sum g = {sum}"))
}

/// a_(M alpha) = a_alpha for every representative, and independence of the
/// Weyl word on the three smallest types with nontrivial searches.
fn check_invariance(
    rs: &RootSystem,
    cd: &CoxeterData,
    ct: &CoeffTable,
) -> std::result::Result<String, String> {
    let word = rs.coxeter_word();
    let one = CycloNum::one(cd.h());
    for (i, &rep) in ct.reps().iter().enumerate() {
        let ratio = coeff_ratio(rs, cd, rep, &word).map_err(|e| e.to_string())?;
        if ratio != one {
            return Err(format!("a_(M alpha) / a_alpha != 1 for representative {}", i + 1));
        }
    }
    let mut word_detail = String::new();
    if matches!(rs.ade(), AdeType::A(3) | AdeType::D(4) | AdeType::E(6)) {
        let natural: Vec<usize> = (0..rs.ade().rank()).collect();
        let reversed: Vec<usize> = natural.iter().rev().copied().collect();
        let mut pairs = 0;
        for (i, &src) in ct.reps().iter().enumerate() {
            for &dst in ct.reps().iter().skip(i + 1) {
                let w1 = rs
                    .weyl_word_with_order(src, dst, &natural)
                    .map_err(|e| e.to_string())?;
                let w2 = rs
                    .weyl_word_with_order(src, dst, &reversed)
                    .map_err(|e| e.to_string())?;
                let r1 = coeff_ratio(rs, cd, src, &w1).map_err(|e| e.to_string())?;
                let r2 = coeff_ratio(rs, cd, src, &w2).map_err(|e| e.to_string())?;
                if r1 != r2 {
                    return Err(format!(
                        "ratio depends on the word choice for pair ({src},{dst})"
                    ));
                }
                pairs += 1;
            }
        }
        word_detail = format!(", word-independent on {pairs} pairs");
    }
    Ok(format!(
        "Coxeter invariance on {} representatives{word_detail}",
        ct.len()
    ))
}

/// Weight-0 equation vanishes; generation is weight-homogeneous; the rank-1
/// system matches an independently expanded series oracle.
fn check_hirota(
    rs: &RootSystem,
    cd: &CoxeterData,
    ct: &CoeffTable,
) -> std::result::Result<String, String> {
    let sys = generate(rs, cd, ct, 4).map_err(|e| e.to_string())?;
    let scalar = sys
        .equation(&Monomial::empty())
        .ok_or("missing weight-0 equation")?;
    if !scalar.is_zero() {
        return Err("weight-0 equation does not vanish".into());
    }
    if rs.ade() != AdeType::A(1) {
        return Ok(format!(
            "weight-0 identity and homogeneity up to weight {}",
            sys.max_weight()
        ));
    }
    // rank 1: pin the normalization with beta = 2 and compare against the
    // brute-force oracle up to weight 6
    let mut pinned = CoxeterData::build(rs).map_err(|e| e.to_string())?;
    pinned
        .rescale_slot(0, &CycloNum::from_rational(2, rat(1, 2)))
        .map_err(|e| e.to_string())?;
    let ct2 = CoeffTable::build(rs, &pinned).map_err(|e| e.to_string())?;
    let sys6 = generate(rs, &pinned, &ct2, 6).map_err(|e| e.to_string())?;
    a1_oracle_matches(&sys6)?;
    let w4 = Monomial::new(vec![(HVar::new(1, 0), 1), (HVar::new(3, 0), 1)]);
    match sys6.equation(&w4) {
        Some(p) if !p.is_zero() => {}
        _ => return Err("weight-4 equation is zero".into()),
    }
    let q = to_q_variables(&sys6);
    let factors: Vec<i64> = q.iter().filter_map(|e| e.factor.to_i64()).collect();
    if factors != vec![1, 3, 15] {
        return Err(format!("level rescaling factors {factors:?} != [1, 3, 15]"));
    }
    Ok("weight-0 identity, homogeneity, oracle match to weight 6".into())
}

/// Phi = 1 solves every equation up to weight 6; a perturbed series on the
/// rank-1 system does not.
fn check_tau(
    rs: &RootSystem,
    cd: &CoxeterData,
    ct: &CoeffTable,
) -> std::result::Result<String, String> {
    let sys = generate(rs, cd, ct, 6).map_err(|e| e.to_string())?;
    let tau = TauSeries::one(6);
    let residuals = apply(&sys, &tau).map_err(|e| e.to_string())?;
    if !residuals.is_empty() {
        return Err(format!(
            "Phi = 1 leaves {} nonzero residuals",
            residuals.len()
        ));
    }
    if rs.ade() != AdeType::A(1) {
        return Ok("Phi = 1 solves all equations to weight 6".into());
    }
    let mut perturbed = TauSeries::one(6);
    perturbed
        .insert(
            Monomial::new(vec![(HVar::new(1, 0), 4)]),
            0,
            rat(1, 24),
        )
        .map_err(|e| e.to_string())?;
    let residuals = apply(&sys, &perturbed).map_err(|e| e.to_string())?;
    if residuals.is_empty() {
        return Err("perturbed series produced no residual".into());
    }
    if !residuals.iter().any(|r| r.equation.weight() == 4) {
        return Err("perturbed series missed the weight-4 equations".into());
    }
    Ok("Phi = 1 solves all equations to weight 6; negative control fires".into())
}

/// Monomials for the rank-1 oracle: sorted (index, multiplicity) pairs.
type Om = Vec<(u32, u32)>;

fn om_weight(m: &Om) -> u64 {
    m.iter().map(|&(v, k)| v as u64 * k as u64).sum()
}

fn om_degree(m: &Om) -> i64 {
    m.iter().map(|&(_, k)| k as i64).sum()
}

fn om_mul(a: &Om, b: &Om) -> Om {
    let mut counts: BTreeMap<u32, u32> = BTreeMap::new();
    for &(v, k) in a.iter().chain(b) {
        *counts.entry(v).or_insert(0) += k;
    }
    counts.into_iter().collect()
}

fn om_sub(a: &Om, b: &Om) -> Option<Om> {
    let mut counts: BTreeMap<u32, u32> = a.iter().copied().collect();
    for &(v, k) in b {
        let c = counts.get_mut(&v)?;
        if *c < k {
            return None;
        }
        *c -= k;
    }
    Some(counts.into_iter().filter(|&(_, k)| k > 0).collect())
}

fn om_factorial(m: &Om) -> Rational {
    let mut acc = Rational::one();
    for &(_, k) in m {
        for j in 2..=k {
            acc *= rat_int(j as i64);
        }
    }
    acc
}

/// Polynomial in commuting y- and d-symbols with rational coefficients.
type OPoly = BTreeMap<(Om, Om), Rational>;

fn opoly_mul(a: &OPoly, b: &OPoly, wmax: u64) -> OPoly {
    let mut out = OPoly::new();
    for ((ya, da), ca) in a {
        for ((yb, db), cb) in b {
            let y = om_mul(ya, yb);
            let d = om_mul(da, db);
            if om_weight(&y) > wmax || om_weight(&d) > wmax {
                continue;
            }
            let c = out.entry((y, d)).or_insert_with(Rational::zero);
            *c += ca * cb;
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

/// exp of a polynomial with no constant term, truncated by weight.
fn opoly_exp(base: &OPoly, wmax: u64) -> OPoly {
    let mut out = OPoly::new();
    out.insert((vec![], vec![]), Rational::one());
    let mut term = out.clone();
    let mut n = 1i64;
    loop {
        term = opoly_mul(&term, base, wmax);
        for c in term.values_mut() {
            *c /= rat_int(n);
        }
        if term.is_empty() {
            return out;
        }
        for (k, c) in &term {
            let e = out.entry(k.clone()).or_insert_with(Rational::zero);
            *e += c;
        }
        n += 1;
    }
}

fn om_enumerate(vars: &[u32], wmax: u64) -> Vec<Om> {
    fn rec(vars: &[u32], idx: usize, budget: u64, cur: &mut Om, out: &mut Vec<Om>) {
        if idx == vars.len() {
            out.push(cur.iter().copied().filter(|&(_, k)| k > 0).collect());
            return;
        }
        let v = vars[idx];
        for k in 0..=(budget / v as u64) {
            cur.push((v, k as u32));
            rec(vars, idx + 1, budget - k * v as u64, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(vars, 0, wmax, &mut Om::new(), &mut out);
    out
}

/// Brute-force rank-1 hierarchy: multiplies out the two exponential series
/// directly with rational coefficients. Kept deliberately separate from the
/// production kernel expansion.
fn a1_oracle_equations(wmax: u32) -> BTreeMap<Om, BTreeMap<(Om, i32), Rational>> {
    let vars: Vec<u32> = (0..)
        .map(|k| 2 * k + 1)
        .take_while(|&m| m <= wmax)
        .collect();
    let wmax = wmax as u64;
    let mut a = OPoly::new();
    let mut b = OPoly::new();
    for &m in &vars {
        a.insert((vec![(m, 1)], vec![]), rat_int(4));
        b.insert((vec![], vec![(m, 1)]), rat(-2, m as i64));
    }
    let kernel = opoly_mul(
        &{
            let mut half = OPoly::new();
            half.insert((vec![], vec![]), rat(1, 2));
            half
        },
        &opoly_mul(&opoly_exp(&a, wmax), &opoly_exp(&b, wmax), wmax),
        wmax,
    );
    let mut out = BTreeMap::new();
    for mu in om_enumerate(&vars, wmax) {
        let mut eq: BTreeMap<(Om, i32), Rational> = BTreeMap::new();
        for ((ym, dm), c) in &kernel {
            if om_weight(ym) != om_weight(dm) {
                continue;
            }
            let rest = match om_sub(&mu, ym) {
                Some(r) => r,
                None => continue,
            };
            let d = om_mul(&rest, dm);
            let hb = (om_degree(dm) - om_degree(ym)) as i32;
            let e = eq.entry((d, hb)).or_insert_with(Rational::zero);
            *e += c / om_factorial(&rest);
        }
        let scalar = (rat_int(4) * rat_int(om_weight(&mu) as i64) + rat(1, 2))
            / om_factorial(&mu);
        let e = eq.entry((mu.clone(), 0)).or_insert_with(Rational::zero);
        *e -= scalar;
        eq.retain(|_, c| !c.is_zero());
        out.insert(mu, eq);
    }
    out
}

fn a1_oracle_matches(sys: &HirotaSystem) -> std::result::Result<String, String> {
    let oracle = a1_oracle_equations(sys.max_weight());
    if oracle.len() != sys.equations().len() {
        return Err(format!(
            "oracle produced {} equations, system has {}",
            oracle.len(),
            sys.equations().len()
        ));
    }
    for (mu, poly) in sys.equations() {
        let key: Om = mu.entries().iter().map(|&(v, k)| (v.m, k)).collect();
        let want = oracle
            .get(&key)
            .ok_or_else(|| format!("oracle is missing the equation for {key:?}"))?;
        let mut got: BTreeMap<(Om, i32), Rational> = BTreeMap::new();
        for t in poly.terms() {
            let d: Om = t.d.entries().iter().map(|&(v, k)| (v.m, k)).collect();
            let c = t
                .coeff
                .as_rational()
                .ok_or_else(|| format!("non-rational coefficient in equation {key:?}"))?;
            got.insert((d, t.hbar_half), c);
        }
        if got != *want {
            return Err(format!("equation for {key:?} differs from the oracle"));
        }
    }
    Ok(format!("all {} equations match the oracle", oracle.len()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn oracle_exponential_expands_correctly() {
        // exp(4 y_1) truncated at weight 3: coefficients 4^k / k!
        let mut base = OPoly::new();
        base.insert((vec![(1, 1)], vec![]), rat_int(4));
        let e = opoly_exp(&base, 3);
        assert_eq!(e[&(vec![], vec![])], rat_int(1));
        assert_eq!(e[&(vec![(1, 1)], vec![])], rat_int(4));
        assert_eq!(e[&(vec![(1, 2)], vec![])], rat_int(8));
        assert_eq!(e[&(vec![(1, 3)], vec![])], rat(32, 3));
        assert_eq!(e.len(), 4);
    }

    #[test]
    fn oracle_reproduces_frozen_equations() {
        let eqs = a1_oracle_equations(4);
        // E at y_1 y_3: (8/3) hbar d_1^4 - (32/3) d_1 d_3
        let e13 = &eqs[&vec![(1, 1), (3, 1)]];
        assert_eq!(e13[&(vec![(1, 4)], 2)], rat(8, 3));
        assert_eq!(e13[&(vec![(1, 1), (3, 1)], 0)], rat(-32, 3));
        assert_eq!(e13.len(), 2);
        // E at y_1^2 vanishes
        assert!(eqs[&vec![(1, 2)]].is_empty());
        // E at the empty monomial vanishes
        assert!(eqs[&vec![]].is_empty());
    }

    #[test]
    fn full_check_suite_passes_on_small_types() {
        let types = vec![AdeType::A(1), AdeType::A(3), AdeType::D(4)];
        let outcomes = run_checks(&types, &GoldenSource::Embedded);
        for c in &outcomes {
            assert!(c.passed, "{} failed: {}", c.name, c.detail);
        }
        // 7 named checks per type, tau for A_1 and D_4, plus the scope line
        assert_eq!(outcomes.len(), 3 * 7 + 2 + 1);
        assert_eq!(outcomes[0].name, "structure-A1");
        assert!(outcomes.last().unwrap().name == "scope-statement");
    }
}

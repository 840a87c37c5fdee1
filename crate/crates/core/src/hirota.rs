//! Symbolic generation and evaluation of the bilinear (Hirota) hierarchy.
//!
//! Variables y_m are indexed by the ladder E_+ = { m_a + k h } over the
//! exponents m_a; for the doubled exponent of even D types the variable
//! carries an eigenspace tag, so variables are (m, tag) pairs. The weight
//! of y_m is m.
//!
//! For each orbit representative the kernel is the normally ordered product
//!
//! ```text
//!     g_i * exp( sum_v 2 beta_(i,a(v)) hbar^(-1/2) y_v zeta^(m_v) )
//!         * exp( -sum_v beta_(i,conj a(v)) hbar^(1/2) zeta^(-m_v) d_v / m_v ),
//! ```
//!
//! a Laurent series in the formal parameter zeta. Summing over orbits,
//! extracting the zeta^0 coefficient, and equating coefficients of each
//! y-monomial mu against the right hand side (2h * weight + rank*h*(h+1)/12)
//! yields one pure-differential equation per mu:
//!
//! ```text
//!     E_mu = sum_i sum_(mu' <= mu, wt nu = wt mu')
//!               c_(i,mu',nu) / (mu - mu')! * d^((mu - mu') + nu)
//!          - (2h wt(mu) + rank*h*(h+1)/12) / mu! * d^mu,
//! ```
//!
//! with c_(i,mu',nu) the kernel coefficient. The weight-0 equation reduces
//! to the scalar sum_i g_i - rank*h*(h+1)/12, which vanishes identically by
//! the normalization of the coefficient table.
//!
//! A tau series is a truncated power series in the t-variables (same
//! indexing) with coefficients that are Laurent polynomials in hbar^(1/2);
//! `apply` expands Phi(x+y) Phi(x-y), differentiates, sets y = 0, and
//! reports every nonzero residual coefficient.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::ser::{SerializeSeq, SerializeStruct};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::coeffs::CoeffTable;
use crate::cyclo::CycloNum;
use crate::error::{CoreError, Result};
use crate::rational::{factorial, parse_rational, rat, Rational};
use crate::roots::{AdeType, RootSystem};
use crate::spectral::{CoxeterData, Slot};

/// One variable y_m (equivalently t_m): weight m, plus the eigenspace tag
/// distinguishing equal exponents.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HVar {
    pub m: u32,
    pub tag: u8,
}

impl HVar {
    pub fn new(m: u32, tag: u8) -> HVar {
        HVar { m, tag }
    }
}

/// A multiset of variables, canonically sorted.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial(Vec<(HVar, u32)>);

impl Monomial {
    pub fn empty() -> Monomial {
        Monomial(Vec::new())
    }

    pub fn new(mut entries: Vec<(HVar, u32)>) -> Monomial {
        entries.retain(|&(_, k)| k > 0);
        entries.sort_by_key(|&(v, _)| v);
        let mut merged: Vec<(HVar, u32)> = Vec::with_capacity(entries.len());
        for (v, k) in entries {
            match merged.last_mut() {
                Some((lv, lk)) if *lv == v => *lk += k,
                _ => merged.push((v, k)),
            }
        }
        Monomial(merged)
    }

    pub fn single(v: HVar, k: u32) -> Monomial {
        Monomial::new(vec![(v, k)])
    }

    pub fn entries(&self) -> &[(HVar, u32)] {
        &self.0
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn weight(&self) -> u64 {
        self.0.iter().map(|&(v, k)| v.m as u64 * k as u64).sum()
    }

    /// Total number of factors, counted with multiplicity.
    pub fn degree(&self) -> u64 {
        self.0.iter().map(|&(_, k)| k as u64).sum()
    }

    /// Product of the factorials of the multiplicities.
    pub fn factorial(&self) -> Rational {
        let mut acc = BigInt::one();
        for &(_, k) in &self.0 {
            acc *= factorial(k);
        }
        Rational::from_integer(acc)
    }

    pub fn multiplicity(&self, v: HVar) -> u32 {
        self.0
            .iter()
            .find(|&&(w, _)| w == v)
            .map_or(0, |&(_, k)| k)
    }

    pub fn contains(&self, other: &Monomial) -> bool {
        other
            .0
            .iter()
            .all(|&(v, k)| self.multiplicity(v) >= k)
    }

    /// Multiset difference; None unless other <= self.
    pub fn checked_sub(&self, other: &Monomial) -> Option<Monomial> {
        if !self.contains(other) {
            return None;
        }
        let entries = self
            .0
            .iter()
            .map(|&(v, k)| (v, k - other.multiplicity(v)))
            .collect();
        Some(Monomial::new(entries))
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut entries = self.0.clone();
        entries.extend_from_slice(&other.0);
        Monomial::new(entries)
    }

    /// All sub-multisets, in a deterministic order.
    pub fn submonomials(&self) -> Vec<Monomial> {
        let mut out = vec![Monomial::empty()];
        for &(v, k) in &self.0 {
            let mut next = Vec::with_capacity(out.len() * (k as usize + 1));
            for m in &out {
                for j in 0..=k {
                    let mut entries = m.0.clone();
                    if j > 0 {
                        entries.push((v, j));
                    }
                    next.push(Monomial::new(entries));
                }
            }
            out = next;
        }
        out
    }

    /// Product over variables of binomial(self_v, sub_v).
    pub fn binomial(&self, sub: &Monomial) -> BigInt {
        let mut acc = BigInt::one();
        for &(v, k) in &sub.0 {
            let n = self.multiplicity(v);
            acc *= num_integer::binomial(BigInt::from(n), BigInt::from(k));
        }
        acc
    }
}

impl Serialize for Monomial {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.0.len()))?;
        for &(v, k) in &self.0 {
            if v.tag == 0 {
                seq.serialize_element(&[v.m, k])?;
            } else {
                seq.serialize_element(&[v.m, k, v.tag as u32])?;
            }
        }
        seq.end()
    }
}

impl<'de> Deserialize<'de> for Monomial {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw: Vec<Vec<u32>> = Vec::deserialize(d)?;
        let mut entries = Vec::with_capacity(raw.len());
        for item in raw {
            let (m, k, tag) = match item.len() {
                2 => (item[0], item[1], 0u32),
                3 => (item[0], item[1], item[2]),
                n => {
                    return Err(D::Error::custom(format!(
                        "monomial entry must have 2 or 3 components, got {n}"
                    )))
                }
            };
            if m == 0 {
                return Err(D::Error::custom("variable index must be positive"));
            }
            if k == 0 {
                return Err(D::Error::custom("multiplicity must be positive"));
            }
            let tag: u8 = tag
                .try_into()
                .map_err(|_| D::Error::custom("tag out of range"))?;
            entries.push((HVar::new(m, tag), k));
        }
        Ok(Monomial::new(entries))
    }
}

/// One term of a differential polynomial.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Term {
    pub coeff: CycloNum,
    /// Exponent of hbar^(1/2).
    pub hbar_half: i32,
    pub y: Monomial,
    pub d: Monomial,
}

/// Canonically sorted, merged, zero-free list of terms.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct DiffPoly {
    terms: Vec<Term>,
}

impl DiffPoly {
    pub fn zero() -> DiffPoly {
        DiffPoly::default()
    }

    pub fn from_terms(terms: Vec<Term>) -> DiffPoly {
        let mut map: BTreeMap<(Monomial, Monomial, i32), CycloNum> = BTreeMap::new();
        for t in terms {
            let key = (t.y, t.d, t.hbar_half);
            match map.get_mut(&key) {
                Some(c) => *c = &*c + &t.coeff,
                None => {
                    map.insert(key, t.coeff);
                }
            }
        }
        let terms = map
            .into_iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|((y, d, hbar_half), coeff)| Term {
                coeff,
                hbar_half,
                y,
                d,
            })
            .collect();
        DiffPoly { terms }
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

/// The variable list for a type up to a weight bound, sorted by (m, tag).
pub fn variables(cd: &CoxeterData, max_weight: u64) -> Vec<HVar> {
    let h = cd.h() as u64;
    let mut out = Vec::new();
    for slot in cd.slots() {
        let mut m = slot.m as u64;
        while m <= max_weight {
            out.push(HVar::new(m as u32, slot.tag));
            m += h;
        }
    }
    out.sort();
    out
}

/// All monomials over `vars` of weight <= max_weight, sorted.
pub fn enumerate_monomials(vars: &[HVar], max_weight: u64) -> Vec<Monomial> {
    fn rec(
        vars: &[HVar],
        idx: usize,
        budget: u64,
        cur: &mut Vec<(HVar, u32)>,
        out: &mut Vec<Monomial>,
    ) {
        if idx == vars.len() {
            out.push(Monomial::new(cur.clone()));
            return;
        }
        let v = vars[idx];
        let max_k = budget / v.m as u64;
        for k in 0..=max_k {
            if k > 0 {
                cur.push((v, k as u32));
            }
            rec(vars, idx + 1, budget - k * v.m as u64, cur, out);
            if k > 0 {
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    rec(vars, 0, max_weight, &mut Vec::new(), &mut out);
    out.sort();
    out
}

/// One term of a kernel: a normally ordered y/d pair with its zeta degree.
#[derive(Clone, Debug, PartialEq)]
pub struct KernelTerm {
    pub coeff: CycloNum,
    pub hbar_half: i32,
    pub zeta_deg: i64,
    pub y: Monomial,
    pub d: Monomial,
}

/// Truncated kernel series: every y and d monomial has weight <= max_zeta,
/// so all zeta degrees lie in [-max_zeta, max_zeta].
#[derive(Clone, Debug)]
pub struct Kernel {
    pub max_zeta: u32,
    pub terms: Vec<KernelTerm>,
}

fn slot_of(cd: &CoxeterData, v: HVar) -> Result<usize> {
    let m = v.m % cd.h();
    cd.slot_index(Slot::new(m, v.tag)).ok_or_else(|| {
        CoreError::BadInput(format!(
            "variable ({}, tag {}) does not match any exponent slot",
            v.m, v.tag
        ))
    })
}

fn kernel_from_beta(
    cd: &CoxeterData,
    prefactor: &CycloNum,
    beta: &[CycloNum],
    max_zeta: u32,
) -> Result<Kernel> {
    let vars = variables(cd, max_zeta as u64);
    let mut y_coef = Vec::with_capacity(vars.len());
    let mut d_coef = Vec::with_capacity(vars.len());
    for &v in &vars {
        let a = slot_of(cd, v)?;
        y_coef.push(beta[a].scale(&rat(2, 1)));
        d_coef.push(beta[cd.conj_slot(a)].scale(&rat(-1, v.m as i64)));
    }
    // expand one exponential: monomial -> prod coef^k / k!
    let expand = |coefs: &[CycloNum]| -> Vec<(Monomial, CycloNum)> {
        enumerate_monomials(&vars, max_zeta as u64)
            .into_iter()
            .map(|mono| {
                let mut c = CycloNum::one(cd.h());
                for &(v, k) in mono.entries() {
                    let pos = vars.iter().position(|&w| w == v).unwrap();
                    for _ in 0..k {
                        c = &c * &coefs[pos];
                    }
                    c = c.scale(&Rational::from_integer(factorial(k)).recip());
                }
                (mono, c)
            })
            .collect()
    };
    let ys = expand(&y_coef);
    let ds = expand(&d_coef);
    let mut terms = Vec::with_capacity(ys.len() * ds.len());
    for (ym, yc) in &ys {
        for (dm, dc) in &ds {
            let coeff = &(yc * dc) * prefactor;
            if coeff.is_zero() {
                continue;
            }
            terms.push(KernelTerm {
                coeff,
                hbar_half: dm.degree() as i32 - ym.degree() as i32,
                zeta_deg: ym.weight() as i64 - dm.weight() as i64,
                y: ym.clone(),
                d: dm.clone(),
            });
        }
    }
    terms.sort_by(|a, b| (&a.y, &a.d).cmp(&(&b.y, &b.d)));
    Ok(Kernel { max_zeta, terms })
}

/// The kernel attached to the i-th orbit representative (0-based position
/// in the coefficient table), with prefactor g_i.
pub fn kw_kernel(
    rs: &RootSystem,
    cd: &CoxeterData,
    ct: &CoeffTable,
    i: usize,
    max_zeta: u32,
) -> Result<Kernel> {
    kw_kernel_for_root(rs, cd, ct.g(i), ct.rep(i), max_zeta)
}

/// The kernel attached to an arbitrary root with a caller-chosen prefactor.
pub fn kw_kernel_for_root(
    rs: &RootSystem,
    cd: &CoxeterData,
    prefactor: &CycloNum,
    root: usize,
    max_zeta: u32,
) -> Result<Kernel> {
    let beta = cd.beta_for_root(rs, root);
    kernel_from_beta(cd, prefactor, &beta, max_zeta)
}

/// The generated hierarchy up to a weight bound: one pure-differential
/// equation per y-monomial of weight <= max_weight.
#[derive(Clone, Debug)]
pub struct HirotaSystem {
    ade: AdeType,
    h: u32,
    max_weight: u32,
    rho_sq: Rational,
    variables: Vec<HVar>,
    equations: Vec<(Monomial, DiffPoly)>,
}

impl HirotaSystem {
    pub fn ade(&self) -> AdeType {
        self.ade
    }

    pub fn h(&self) -> u32 {
        self.h
    }

    pub fn max_weight(&self) -> u32 {
        self.max_weight
    }

    pub fn rho_squared(&self) -> &Rational {
        &self.rho_sq
    }

    pub fn variables(&self) -> &[HVar] {
        &self.variables
    }

    pub fn equations(&self) -> &[(Monomial, DiffPoly)] {
        &self.equations
    }

    pub fn equation(&self, mu: &Monomial) -> Option<&DiffPoly> {
        self.equations
            .iter()
            .find(|(m, _)| m == mu)
            .map(|(_, p)| p)
    }

    /// Number of equations with at least one term, per weight.
    pub fn nonzero_counts_by_weight(&self) -> BTreeMap<u64, usize> {
        let mut out = BTreeMap::new();
        for (mu, poly) in &self.equations {
            if !poly.is_zero() {
                *out.entry(mu.weight()).or_insert(0) += 1;
            }
        }
        out
    }
}

impl Serialize for HirotaSystem {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct EquationView<'a> {
            y_monomial: &'a Monomial,
            weight: u64,
            terms: &'a [Term],
        }
        let mut st = s.serialize_struct("HirotaSystem", 6)?;
        st.serialize_field("type", &self.ade)?;
        st.serialize_field("h", &self.h)?;
        st.serialize_field("max_weight", &self.max_weight)?;
        st.serialize_field("rho_sq", &self.rho_sq.to_string())?;
        let vars: Vec<[u32; 2]> = self
            .variables
            .iter()
            .map(|v| [v.m, v.tag as u32])
            .collect();
        st.serialize_field("variables", &vars)?;
        let eqs: Vec<EquationView> = self
            .equations
            .iter()
            .map(|(mu, poly)| EquationView {
                y_monomial: mu,
                weight: mu.weight(),
                terms: poly.terms(),
            })
            .collect();
        st.serialize_field("equations", &eqs)?;
        st.end()
    }
}

/// Generates the hierarchy: sums the kernels over all orbits, extracts the
/// zeta^0 coefficient, and subtracts the right hand side.
pub fn generate(
    rs: &RootSystem,
    cd: &CoxeterData,
    ct: &CoeffTable,
    max_weight: u32,
) -> Result<HirotaSystem> {
    let h = cd.h();
    let vars = variables(cd, max_weight as u64);
    let mus = enumerate_monomials(&vars, max_weight as u64);
    let mut acc: BTreeMap<Monomial, BTreeMap<(Monomial, i32), CycloNum>> = BTreeMap::new();
    for mu in &mus {
        acc.insert(mu.clone(), BTreeMap::new());
    }
    for i in 0..ct.len() {
        let kernel = kw_kernel(rs, cd, ct, i, max_weight)?;
        for term in kernel.terms.iter().filter(|t| t.zeta_deg == 0) {
            for mu in &mus {
                let rest = match mu.checked_sub(&term.y) {
                    Some(r) => r,
                    None => continue,
                };
                let coeff = term.coeff.scale(&rest.factorial().recip());
                let d = rest.mul(&term.d);
                let slot = acc
                    .get_mut(mu)
                    .expect("every mu preinserted")
                    .entry((d, term.hbar_half))
                    .or_insert_with(|| CycloNum::zero(h));
                *slot = &*slot + &coeff;
            }
        }
    }
    // right hand side: (2h * wt(mu) + rho_sq) / mu! at d^mu
    let rho_sq = cd.rho_squared();
    for mu in &mus {
        let scalar = (rat(2 * h as i64, 1) * rat(mu.weight() as i64, 1) + rho_sq.clone())
            * mu.factorial().recip();
        let slot = acc
            .get_mut(mu)
            .unwrap()
            .entry((mu.clone(), 0))
            .or_insert_with(|| CycloNum::zero(h));
        *slot = &*slot - &CycloNum::from_rational(h, scalar);
    }
    let mut equations = Vec::with_capacity(mus.len());
    for mu in mus {
        let map = acc.remove(&mu).unwrap();
        let terms: Vec<Term> = map
            .into_iter()
            .map(|((d, hbar_half), coeff)| Term {
                coeff,
                hbar_half,
                y: Monomial::empty(),
                d,
            })
            .collect();
        let poly = DiffPoly::from_terms(terms);
        for t in poly.terms() {
            if t.d.weight() != mu.weight() {
                return Err(CoreError::Invariant(format!(
                    "{}: inhomogeneous term in the weight-{} equation",
                    rs.ade(),
                    mu.weight()
                )));
            }
        }
        equations.push((mu, poly));
    }
    Ok(HirotaSystem {
        ade: rs.ade(),
        h,
        max_weight,
        rho_sq: rho_sq.clone(),
        variables: vars,
        equations,
    })
}

/// One entry of the t -> q variable dictionary.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct QEntry {
    /// The t-variable (m, tag).
    pub var: (u32, u8),
    /// Ladder level k with m = m_a + k h.
    pub level: u32,
    /// Base exponent m_a.
    pub exponent: u32,
    /// q_k^a = factor * t_m; factor = prod_(r=0..k) (m_a + r h).
    #[serde(serialize_with = "bigint_as_string")]
    pub factor: BigInt,
}

fn bigint_as_string<S: Serializer>(x: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

/// The exact rescaling dictionary between the t-variables and the leveled
/// q-variables, one entry per variable of the system. The accompanying
/// doubling split is x = (t' + t'')/2, y = (t' - t'')/2.
pub fn to_q_variables(sys: &HirotaSystem) -> Vec<QEntry> {
    sys.variables()
        .iter()
        .map(|v| {
            let h = sys.h();
            let exponent = v.m % h;
            let level = (v.m - exponent) / h;
            let mut factor = BigInt::one();
            for r in 0..=level {
                factor *= BigInt::from(exponent + r * h);
            }
            QEntry {
                var: (v.m, v.tag),
                level,
                exponent,
                factor,
            }
        })
        .collect()
}

/// Truncated tau series: x-monomial -> Laurent polynomial in hbar^(1/2).
#[derive(Clone, Debug, PartialEq)]
pub struct TauSeries {
    truncation_weight: u32,
    coeffs: BTreeMap<Monomial, BTreeMap<i32, Rational>>,
}

impl TauSeries {
    /// Phi = 1.
    pub fn one(truncation_weight: u32) -> TauSeries {
        let mut coeffs = BTreeMap::new();
        let mut unit = BTreeMap::new();
        unit.insert(0, Rational::one());
        coeffs.insert(Monomial::empty(), unit);
        TauSeries {
            truncation_weight,
            coeffs,
        }
    }

    pub fn new(
        truncation_weight: u32,
        coeffs: BTreeMap<Monomial, BTreeMap<i32, Rational>>,
    ) -> Result<TauSeries> {
        for (m, poly) in &coeffs {
            if m.weight() > truncation_weight as u64 {
                return Err(CoreError::BadInput(format!(
                    "tau monomial of weight {} exceeds the truncation weight {}",
                    m.weight(),
                    truncation_weight
                )));
            }
            if poly.is_empty() {
                return Err(CoreError::BadInput(
                    "tau coefficient with empty hbar polynomial".into(),
                ));
            }
        }
        Ok(TauSeries {
            truncation_weight,
            coeffs,
        })
    }

    pub fn truncation_weight(&self) -> u32 {
        self.truncation_weight
    }

    pub fn coeffs(&self) -> &BTreeMap<Monomial, BTreeMap<i32, Rational>> {
        &self.coeffs
    }

    /// Adds v * hbar^(halfpower/2) * x^mono to the series.
    pub fn insert(&mut self, mono: Monomial, halfpower: i32, v: Rational) -> Result<()> {
        if mono.weight() > self.truncation_weight as u64 {
            return Err(CoreError::BadInput(format!(
                "tau monomial of weight {} exceeds the truncation weight {}",
                mono.weight(),
                self.truncation_weight
            )));
        }
        let poly = self.coeffs.entry(mono).or_default();
        let entry = poly.entry(halfpower).or_insert_with(Rational::zero);
        *entry += v;
        if entry.is_zero() {
            poly.remove(&halfpower);
        }
        Ok(())
    }
}

impl Serialize for TauSeries {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Entry<'a> {
            monomial: &'a Monomial,
            hbar_poly: Vec<(String, i32)>,
        }
        let mut st = s.serialize_struct("TauSeries", 2)?;
        st.serialize_field("truncation_weight", &self.truncation_weight)?;
        let entries: Vec<Entry> = self
            .coeffs
            .iter()
            .map(|(m, poly)| Entry {
                monomial: m,
                hbar_poly: poly.iter().map(|(k, v)| (v.to_string(), *k)).collect(),
            })
            .collect();
        st.serialize_field("coeffs", &entries)?;
        st.end()
    }
}

impl<'de> Deserialize<'de> for TauSeries {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        #[derive(Deserialize)]
        struct Entry {
            monomial: Monomial,
            hbar_poly: Vec<(String, i32)>,
        }
        #[derive(Deserialize)]
        struct Raw {
            truncation_weight: u32,
            coeffs: Vec<Entry>,
        }
        let raw = Raw::deserialize(d)?;
        let mut coeffs: BTreeMap<Monomial, BTreeMap<i32, Rational>> = BTreeMap::new();
        for e in raw.coeffs {
            if coeffs.contains_key(&e.monomial) {
                return Err(D::Error::custom("duplicate tau monomial"));
            }
            let mut poly = BTreeMap::new();
            for (v, k) in e.hbar_poly {
                let v = parse_rational(&v).map_err(|err| D::Error::custom(err.to_string()))?;
                if poly.insert(k, v).is_some() {
                    return Err(D::Error::custom("duplicate hbar power"));
                }
            }
            coeffs.insert(e.monomial, poly);
        }
        TauSeries::new(raw.truncation_weight, coeffs)
            .map_err(|e| D::Error::custom(e.to_string()))
    }
}

/// A nonzero coefficient of an evaluated equation.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Residual {
    pub equation: Monomial,
    pub x_monomial: Monomial,
    pub hbar_half: i32,
    pub value: CycloNum,
}

type SeriesMap = BTreeMap<Monomial, BTreeMap<i32, Rational>>;

/// Coefficients of d^sigma Phi as a truncated series.
fn derivative_series(tau: &TauSeries, sigma: &Monomial) -> SeriesMap {
    let mut out: SeriesMap = BTreeMap::new();
    for (full, poly) in tau.coeffs() {
        let base = match full.checked_sub(sigma) {
            Some(b) => b,
            None => continue,
        };
        // (base + sigma)! / base!, variable by variable
        let mut factor = BigInt::one();
        for &(v, k) in sigma.entries() {
            let top = full.multiplicity(v);
            for j in (top - k + 1)..=top {
                factor *= BigInt::from(j);
            }
        }
        let factor = Rational::from_integer(factor);
        let target = out.entry(base).or_default();
        for (hp, v) in poly {
            let entry = target.entry(*hp).or_insert_with(Rational::zero);
            *entry += v * &factor;
        }
    }
    out
}

/// [d^sigma_y Phi(x+y) Phi(x-y)] at y = 0, truncated at x-weight `limit`.
fn bilinear_series(tau: &TauSeries, sigma: &Monomial, limit: u64) -> SeriesMap {
    let mut out: SeriesMap = BTreeMap::new();
    for sigma1 in sigma.submonomials() {
        let sigma2 = sigma
            .checked_sub(&sigma1)
            .expect("submonomial is contained");
        let comb = Rational::from_integer(sigma.binomial(&sigma1));
        let negate = sigma2.degree() % 2 == 1;
        let s1 = derivative_series(tau, &sigma1);
        let s2 = derivative_series(tau, &sigma2);
        for (m1, p1) in &s1 {
            let w1 = m1.weight();
            if w1 > limit {
                continue;
            }
            for (m2, p2) in &s2 {
                if w1 + m2.weight() > limit {
                    continue;
                }
                let mono = m1.mul(m2);
                let target = out.entry(mono).or_default();
                for (k1, v1) in p1 {
                    for (k2, v2) in p2 {
                        let mut v = v1 * v2 * &comb;
                        if negate {
                            v = -v;
                        }
                        let entry = target.entry(k1 + k2).or_insert_with(Rational::zero);
                        *entry += v;
                    }
                }
            }
        }
    }
    out.retain(|_, poly| {
        poly.retain(|_, v| !v.is_zero());
        !poly.is_empty()
    });
    out
}

/// Evaluates every equation of the system on a tau series and returns all
/// nonzero residual coefficients. Residuals are trustworthy only up to
/// x-weight (truncation - max_weight), so reporting stops there.
pub fn apply(sys: &HirotaSystem, tau: &TauSeries) -> Result<Vec<Residual>> {
    if tau.truncation_weight() < sys.max_weight() {
        return Err(CoreError::TruncationTooSmall {
            required: sys.max_weight(),
        });
    }
    let limit = (tau.truncation_weight() - sys.max_weight()) as u64;
    let mut bilinear_cache: BTreeMap<Monomial, SeriesMap> = BTreeMap::new();
    let mut out = Vec::new();
    for (mu, poly) in sys.equations() {
        let mut residual: BTreeMap<(Monomial, i32), CycloNum> = BTreeMap::new();
        for term in poly.terms() {
            if !bilinear_cache.contains_key(&term.d) {
                let series = bilinear_series(tau, &term.d, limit);
                bilinear_cache.insert(term.d.clone(), series);
            }
            let series = &bilinear_cache[&term.d];
            for (xm, hpoly) in series {
                for (k, v) in hpoly {
                    let add = term.coeff.scale(v);
                    let key = (xm.clone(), term.hbar_half + k);
                    let entry = residual
                        .entry(key)
                        .or_insert_with(|| CycloNum::zero(sys.h()));
                    *entry = &*entry + &add;
                }
            }
        }
        for ((xm, hp), value) in residual {
            if !value.is_zero() {
                out.push(Residual {
                    equation: mu.clone(),
                    x_monomial: xm,
                    hbar_half: hp,
                    value,
                });
            }
        }
    }
    Ok(out)
}

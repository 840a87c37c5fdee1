//! Vertex operator coefficients a_alpha and the derived tables g_i, b_alpha.
//!
//! The coefficients are constant on Coxeter orbits, so the table keeps one
//! value per orbit, attached to a fixed representative:
//!
//! * type A_n: representatives e_0 - e_i, i = 1..n;
//! * type D_n: e_(n-2) - e_(i-1) for i = 1..n-2, then e_(n-2) - e_(n-1)
//!   and e_(n-2) + e_(n-1) (0-based ambient indices);
//! * types E_6, E_7, E_8: the simple roots in diagram order.
//!
//! Ratios between orbits come from the positive-root product
//!
//! ```text
//!     a_(w alpha) / a_alpha = prod_(gamma > 0) (<kappa, gamma> / <kappa, w gamma>)^(<alpha, gamma>^2),
//! ```
//!
//! whose exponents are the integers 0, 1, 4, so no fractional powers or
//! branch choices appear. The overall scale is pinned by the consistency
//! condition h * sum_i a_i = rank*(h+1)/(12h), and g_i = h^3 a_i,
//! b_alpha = 16 a_alpha.

use num_traits::Signed;

use crate::cyclo::CycloNum;
use crate::error::{CoreError, Result};
use crate::rational::{rat, Rational};
use crate::roots::{AdeType, RootSystem};
use crate::spectral::CoxeterData;

/// Orbit representatives in the fixed table order (see module docs).
pub fn representatives(rs: &RootSystem) -> Result<Vec<usize>> {
    let find = |v: Vec<i64>| -> Result<usize> {
        rs.index_of(&v).ok_or_else(|| {
            CoreError::Invariant(format!("{}: representative is not a root", rs.ade()))
        })
    };
    match rs.ade() {
        AdeType::A(n) => (1..=n as usize)
            .map(|i| {
                let mut v = vec![0i64; rs.ambient_dim()];
                v[0] = 1;
                v[i] = -1;
                find(v)
            })
            .collect(),
        AdeType::D(n) => {
            let n = n as usize;
            let mut out = Vec::with_capacity(n);
            for i in 1..=(n - 2) {
                let mut v = vec![0i64; n];
                v[n - 2] = 1;
                v[i - 1] = -1;
                out.push(find(v)?);
            }
            for sign in [-1i64, 1] {
                let mut v = vec![0i64; n];
                v[n - 2] = 1;
                v[n - 1] = sign;
                out.push(find(v)?);
            }
            Ok(out)
        }
        AdeType::E(_) => Ok((0..rs.rank()).map(|i| rs.simple_root(i)).collect()),
    }
}

fn pow_small(x: &CycloNum, e: u32) -> CycloNum {
    let mut acc = CycloNum::one(x.order());
    for _ in 0..e {
        acc = &acc * x;
    }
    acc
}

/// a_(w alpha) / a_alpha for a root alpha and a Weyl word w, exact in
/// Q(zeta_h). Numerator and denominator products are accumulated separately
/// with a single division at the end.
pub fn coeff_ratio(
    rs: &RootSystem,
    cd: &CoxeterData,
    alpha: usize,
    word: &[usize],
) -> Result<CycloNum> {
    let perm = rs.word_permutation(word);
    let h = cd.h();
    let mut num = CycloNum::one(h);
    let mut den = CycloNum::one(h);
    for &gamma in rs.positive_roots() {
        let p = rs.pair_roots(alpha, gamma);
        let e = (p * p) as u32;
        if e == 0 {
            continue;
        }
        num = &num * &pow_small(cd.kappa_pair_root(gamma), e);
        den = &den * &pow_small(cd.kappa_pair_root(perm[gamma]), e);
    }
    num.checked_div(&den)
}

#[derive(Clone, Debug)]
pub struct CoeffTable {
    ade: AdeType,
    h: u32,
    /// Root index of the representative for each orbit, table order.
    reps: Vec<usize>,
    /// ratios[i] = a_(rep_i) / a_(rep_1).
    ratios: Vec<CycloNum>,
    a: Vec<CycloNum>,
    g: Vec<CycloNum>,
    /// root index -> orbit position in `reps`.
    root_rep: Vec<usize>,
}

impl CoeffTable {
    /// Computes the table from the ratio products plus the normalization
    /// h * sum a_i = rank*(h+1)/(12h).
    pub fn build(rs: &RootSystem, cd: &CoxeterData) -> Result<CoeffTable> {
        let reps = representatives(rs)?;
        let h = rs.h();
        let mut ratios = Vec::with_capacity(reps.len());
        for (i, &rep) in reps.iter().enumerate() {
            if i == 0 {
                ratios.push(CycloNum::one(h));
                continue;
            }
            let w = rs.weyl_word(reps[0], rep)?;
            ratios.push(coeff_ratio(rs, cd, reps[0], &w)?);
        }
        for (i, r) in ratios.iter().enumerate() {
            if !r.is_real() {
                return Err(CoreError::Invariant(format!(
                    "{}: ratio r_{} is not real",
                    rs.ade(),
                    i + 1
                )));
            }
            if !r.embed_rational(20).0.is_positive() {
                return Err(CoreError::Invariant(format!(
                    "{}: ratio r_{} is not positive",
                    rs.ade(),
                    i + 1
                )));
            }
        }
        let mut sum = CycloNum::zero(h);
        for r in &ratios {
            sum = &sum + r;
        }
        // sum_i a_i = rank*(h+1)/(12 h^2), distributed by the ratios
        let target = rat(
            rs.rank() as i64 * (h as i64 + 1),
            12 * h as i64 * h as i64,
        );
        let a1 = CycloNum::from_rational(h, target).checked_div(&sum)?;
        let a: Vec<CycloNum> = ratios.iter().map(|r| r * &a1).collect();
        Self::assemble(rs, reps, ratios, a)
    }

    /// Builds a table from externally supplied g values (g_i = h^3 a_i).
    pub fn from_g_values(rs: &RootSystem, g: Vec<CycloNum>) -> Result<CoeffTable> {
        if g.len() != rs.rank() {
            return Err(CoreError::BadInput(format!(
                "expected {} g-values, got {}",
                rs.rank(),
                g.len()
            )));
        }
        let reps = representatives(rs)?;
        let h = rs.h() as i64;
        let a: Vec<CycloNum> = g.iter().map(|x| x.scale(&rat(1, h * h * h))).collect();
        let ratios: Result<Vec<CycloNum>> =
            a.iter().map(|x| x.checked_div(&a[0])).collect();
        Self::assemble(rs, reps, ratios?, a)
    }

    fn assemble(
        rs: &RootSystem,
        reps: Vec<usize>,
        ratios: Vec<CycloNum>,
        a: Vec<CycloNum>,
    ) -> Result<CoeffTable> {
        let h = rs.h();
        let orbits = rs.coxeter_orbits()?;
        let mut root_rep = vec![usize::MAX; rs.num_roots()];
        for (pos, &rep) in reps.iter().enumerate() {
            let orbit = orbits
                .iter()
                .find(|o| o.contains(&rep))
                .expect("every root lies in an orbit");
            for &r in orbit {
                if root_rep[r] != usize::MAX {
                    return Err(CoreError::Invariant(format!(
                        "{}: representatives share a Coxeter orbit",
                        rs.ade()
                    )));
                }
                root_rep[r] = pos;
            }
        }
        if root_rep.iter().any(|&p| p == usize::MAX) {
            return Err(CoreError::Invariant(format!(
                "{}: representatives do not cover all orbits",
                rs.ade()
            )));
        }
        let hc = h as i64;
        let g: Vec<CycloNum> = a.iter().map(|x| x.scale(&rat(hc * hc * hc, 1))).collect();
        Ok(CoeffTable {
            ade: rs.ade(),
            h,
            reps,
            ratios,
            a,
            g,
            root_rep,
        })
    }

    pub fn ade(&self) -> AdeType {
        self.ade
    }

    pub fn h(&self) -> u32 {
        self.h
    }

    pub fn len(&self) -> usize {
        self.reps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }

    /// Root index of the i-th representative (0-based table position).
    pub fn rep(&self, i: usize) -> usize {
        self.reps[i]
    }

    pub fn reps(&self) -> &[usize] {
        &self.reps
    }

    pub fn ratios(&self) -> &[CycloNum] {
        &self.ratios
    }

    pub fn a_values(&self) -> &[CycloNum] {
        &self.a
    }

    pub fn g_values(&self) -> &[CycloNum] {
        &self.g
    }

    pub fn a(&self, i: usize) -> &CycloNum {
        &self.a[i]
    }

    pub fn g(&self, i: usize) -> &CycloNum {
        &self.g[i]
    }

    /// b_alpha = 16 a_alpha for the i-th representative.
    pub fn b(&self, i: usize) -> CycloNum {
        self.a[i].scale(&rat(16, 1))
    }

    /// Orbit position of an arbitrary root.
    pub fn orbit_of_root(&self, r: usize) -> usize {
        self.root_rep[r]
    }

    /// a_alpha for an arbitrary root, resolved through the orbit map.
    pub fn a_for_root(&self, r: usize) -> &CycloNum {
        &self.a[self.root_rep[r]]
    }

    /// Floating real parts of the g values.
    pub fn approx_g(&self) -> Vec<f64> {
        self.g.iter().map(|x| x.embed_f64().0).collect()
    }

    /// Exact sum of the g values, which is always rational.
    pub fn sum_g(&self) -> Result<Rational> {
        let mut s = CycloNum::zero(self.h);
        for x in &self.g {
            s = &s + x;
        }
        s.as_rational().ok_or_else(|| {
            CoreError::Invariant(format!("{}: sum of g values is irrational", self.ade))
        })
    }
}

/// Reference g tables built directly from the closed forms, exact in
/// Q(zeta_h): the golden oracle for `CoeffTable::build`.
pub fn closed_form_reference(t: AdeType) -> Result<CoeffTable> {
    let rs = RootSystem::build(t)?;
    let h = rs.h();
    let g: Vec<CycloNum> = match t {
        AdeType::A(n) => {
            // g_i = (n+1)/(2 - eta^i - eta^(-i)), eta = zeta_(n+1)
            (1..=n as i64)
                .map(|i| {
                    let two = CycloNum::from_int(h, 2);
                    let d = &(&two - &CycloNum::zeta_pow(h, i)) - &CycloNum::zeta_pow(h, -i);
                    CycloNum::from_int(h, n as i64 + 1).checked_div(&d)
                })
                .collect::<Result<_>>()?
        }
        AdeType::D(n) => {
            // g_i = (n-1)/2 * (2 - eta^i - eta^(-i)) / (2 + eta^i + eta^(-i))
            // for i <= n-2, then g_(n-1) = g_n = (n-1)^2/2; eta = zeta_(2n-2)
            let n = n as i64;
            let mut g = Vec::with_capacity(n as usize);
            let two = CycloNum::from_int(h, 2);
            for i in 1..=(n - 2) {
                let e = &CycloNum::zeta_pow(h, i) + &CycloNum::zeta_pow(h, -i);
                let numer = (&two - &e).scale(&rat(n - 1, 2));
                let denom = &two + &e;
                g.push(numer.checked_div(&denom)?);
            }
            let fork = CycloNum::from_rational(h, rat((n - 1) * (n - 1), 2));
            g.push(fork.clone());
            g.push(fork);
            g
        }
        AdeType::E(6) => {
            // s = sqrt(3) = zeta_12 + zeta_12^(-1)
            let s = &CycloNum::zeta_pow(12, 1) + &CycloNum::zeta_pow(12, -1);
            let val = |c: i64, k: i64| -> CycloNum {
                &CycloNum::from_int(12, c) + &s.scale(&rat(k, 1))
            };
            vec![
                val(16, 8),
                val(7, 4),
                val(16, -8),
                val(7, -4),
                val(16, -8),
                val(16, 8),
            ]
        }
        AdeType::E(7) => {
            // u = cos(pi/9) = (zeta_18 + zeta_18^(-1))/2
            let u = (&CycloNum::zeta_pow(18, 1) + &CycloNum::zeta_pow(18, -1))
                .scale(&rat(1, 2));
            let u2 = &u * &u;
            let val = |c: Rational, c1: i64, c2: i64| -> CycloNum {
                let mut x = CycloNum::from_rational(18, c);
                x = &x + &u.scale(&rat(c1, 1));
                &x + &u2.scale(&rat(c2, 1))
            };
            vec![
                val(rat(27, 2), 36, 24),
                val(rat(225, 2), 36, -144),
                val(rat(3, 2), 0, 0),
                val(rat(147, 2), 12, -96),
                val(rat(9, 2), -72, 72),
                val(rat(-21, 2), -48, 72),
                val(rat(9, 2), 36, 72),
            ]
        }
        AdeType::E(8) => {
            // u = cos(pi/15) = (zeta_30 + zeta_30^(-1))/2
            let u = (&CycloNum::zeta_pow(30, 1) + &CycloNum::zeta_pow(30, -1))
                .scale(&rat(1, 2));
            let u2 = &u * &u;
            let u3 = &u2 * &u;
            let val = |c: Rational, c1: i64, c2: i64, c3: i64| -> CycloNum {
                let mut x = CycloNum::from_rational(30, c);
                x = &x + &u.scale(&rat(c1, 1));
                x = &x + &u2.scale(&rat(c2, 1));
                &x + &u3.scale(&rat(c3, 1))
            };
            vec![
                val(rat(33, 2), 80, 72, -16),
                val(rat(273, 2), 132, -136, -128),
                val(rat(-123, 2), 568, 376, -912),
                val(rat(109, 2), -368, -72, 400),
                val(rat(745, 2), 584, -376, -624),
                val(rat(257, 2), -1220, -232, 1376),
                val(rat(-35, 2), 156, 136, -256),
                val(rat(-19, 2), 68, 232, 160),
            ]
        }
        AdeType::E(_) => unreachable!("constructor rejects other E ranks"),
    };
    CoeffTable::from_g_values(&rs, g)
}

/// (sum of g values, family closed form); the two must agree exactly.
/// The family forms are rank*(h+1)*h/12 specialized: n(n+1)(n+2)/12 for A_n
/// and (n-1)n(2n-1)/6 for D_n.
pub fn dedekind_check(table: &CoeffTable) -> Result<(Rational, Rational)> {
    let computed = table.sum_g()?;
    let family = match table.ade() {
        AdeType::A(n) => {
            let n = n as i64;
            rat(n * (n + 1) * (n + 2), 12)
        }
        AdeType::D(n) => {
            let n = n as i64;
            rat((n - 1) * n * (2 * n - 1), 6)
        }
        AdeType::E(n) => {
            let h = table.h() as i64;
            rat(n as i64 * h * (h + 1), 12)
        }
    };
    let general = rat(
        table.len() as i64 * table.h() as i64 * (table.h() as i64 + 1),
        12,
    );
    if family != general {
        return Err(CoreError::Invariant(format!(
            "{}: family sum form disagrees with rank*h*(h+1)/12",
            table.ade()
        )));
    }
    Ok((computed, family))
}

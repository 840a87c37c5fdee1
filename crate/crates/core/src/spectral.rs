//! Spectral data of a Coxeter element: projectors, exponents, a regular
//! eigenvector, and an eigenbasis with its dual coordinates.
//!
//! All computations happen in the simple root basis, where the Coxeter
//! element is an integer matrix and the bilinear form is the Cartan matrix.
//! Scalars live in Q(zeta_h). The projector onto the zeta_h^m eigenspace is
//!
//! ```text
//!     P_m = (1/h) sum_k zeta_h^(-mk) M^k,   k = 0..h-1,
//! ```
//!
//! whose trace is the multiplicity of the exponent m. Eigenvectors are
//! projector images of standard basis seeds, so conjugate slots hold
//! entrywise-conjugate vectors. The only multiplicity-2 case in the ADE
//! family is m = h/2 for D_n with n even; there the two eigenvectors are
//! orthogonalized against each other under the bilinear form.

use num_traits::Zero;

use crate::cyclo::CycloNum;
use crate::error::{CoreError, Result};
use crate::linalg::CMatrix;
use crate::rational::{rat, rat_int, Rational};
use crate::roots::{AdeType, RootSystem};

/// One eigenvector slot: an exponent plus a tag separating equal exponents.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Slot {
    pub m: u32,
    pub tag: u8,
}

impl Slot {
    pub fn new(m: u32, tag: u8) -> Slot {
        Slot { m, tag }
    }
}

#[derive(Clone, Debug)]
pub struct CoxeterData {
    ade: AdeType,
    h: u32,
    rank: usize,
    cartan: Vec<Vec<i64>>,
    m_matrix: Vec<Vec<i64>>,
    /// Exponents in increasing order, with multiplicity.
    exponents: Vec<u32>,
    slots: Vec<Slot>,
    /// conj[a] = slot index pairing with slot a under zeta -> zeta^(-1).
    conj: Vec<usize>,
    /// Regular eigenvector for exponent 1, simple root basis.
    kappa: Vec<CycloNum>,
    /// <kappa, gamma_r> for every root r.
    kappa_pair: Vec<CycloNum>,
    /// eigenbasis[a] = H_a, simple root basis.
    eigenbasis: Vec<Vec<CycloNum>>,
    /// Inverse of the matrix whose columns are the H_a.
    eigen_inv: CMatrix,
    /// beta[i][a]: coordinates of alpha_(i+1) in the eigenbasis.
    beta: Vec<Vec<CycloNum>>,
}

fn int_matrix_mul(a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = a.len();
    let mut out = vec![vec![0i64; n]; n];
    for i in 0..n {
        for k in 0..n {
            let v = a[i][k];
            if v == 0 {
                continue;
            }
            for j in 0..n {
                out[i][j] += v * b[k][j];
            }
        }
    }
    out
}

fn int_identity(n: usize) -> Vec<Vec<i64>> {
    let mut m = vec![vec![0i64; n]; n];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = 1;
    }
    m
}

impl CoxeterData {
    pub fn build(rs: &RootSystem) -> Result<CoxeterData> {
        let ade = rs.ade();
        let h = rs.h();
        let rank = rs.rank();
        let cartan: Vec<Vec<i64>> = rs.cartan().to_vec();
        let m_matrix = rs.coxeter_matrix_simple();

        // powers M^0 .. M^(h-1), and the order check M^h = I (minimally)
        let mut powers = Vec::with_capacity(h as usize);
        powers.push(int_identity(rank));
        for k in 1..h as usize {
            let next = int_matrix_mul(&powers[k - 1], &m_matrix);
            if next == powers[0] {
                return Err(CoreError::Invariant(format!(
                    "{ade}: Coxeter element has order {k} < h = {h}"
                )));
            }
            powers.push(next);
        }
        if int_matrix_mul(&powers[h as usize - 1], &m_matrix) != powers[0] {
            return Err(CoreError::Invariant(format!(
                "{ade}: Coxeter element does not have order h = {h}"
            )));
        }

        let projector = |m: u32| -> CMatrix {
            let mut rows = vec![vec![CycloNum::zero(h); rank]; rank];
            for (k, pk) in powers.iter().enumerate() {
                let w = CycloNum::zeta_pow(h, -((m as i64) * k as i64))
                    .scale(&rat(1, h as i64));
                for i in 0..rank {
                    for j in 0..rank {
                        if pk[i][j] != 0 {
                            let t = w.scale(&rat_int(pk[i][j]));
                            rows[i][j] = &rows[i][j] + &t;
                        }
                    }
                }
            }
            CMatrix::from_rows(h, rows).expect("projector is square by construction")
        };

        // exponents from projector traces
        let mut exponents = Vec::new();
        let mut slots = Vec::new();
        let mut projectors = Vec::new();
        for m in 0..h {
            let p = projector(m);
            let tr = p
                .trace()
                .as_rational()
                .ok_or_else(|| {
                    CoreError::Invariant(format!("{ade}: projector trace not rational"))
                })?;
            if !tr.is_integer() {
                return Err(CoreError::Invariant(format!(
                    "{ade}: projector trace not an integer"
                )));
            }
            let mult = tr.to_integer();
            let mult: i64 = i64::try_from(&mult)
                .map_err(|_| CoreError::Invariant(format!("{ade}: trace overflow")))?;
            if mult < 0 || mult > 2 {
                return Err(CoreError::Invariant(format!(
                    "{ade}: exponent multiplicity {mult} out of range"
                )));
            }
            if m == 0 && mult != 0 {
                return Err(CoreError::Invariant(format!(
                    "{ade}: Coxeter element fixes a nonzero vector"
                )));
            }
            for tag in 0..mult as u8 {
                exponents.push(m);
                slots.push(Slot::new(m, tag));
            }
            projectors.push(p);
        }
        if exponents.len() != rank {
            return Err(CoreError::Invariant(format!(
                "{ade}: found {} exponents, expected {rank}",
                exponents.len()
            )));
        }
        let sum: u64 = exponents.iter().map(|&m| m as u64).sum();
        if 2 * sum != rank as u64 * h as u64 {
            return Err(CoreError::Invariant(format!(
                "{ade}: exponents sum to {sum}, expected rank*h/2"
            )));
        }

        let pair = |u: &[CycloNum], v: &[CycloNum]| -> CycloNum {
            let mut acc = CycloNum::zero(h);
            for i in 0..rank {
                if u[i].is_zero() {
                    continue;
                }
                for j in 0..rank {
                    if cartan[i][j] == 0 || v[j].is_zero() {
                        continue;
                    }
                    let t = (&u[i] * &v[j]).scale(&rat_int(cartan[i][j]));
                    acc = &acc + &t;
                }
            }
            acc
        };

        // kappa: image of the first seed that gives a regular vector
        let mut kappa: Option<Vec<CycloNum>> = None;
        let mut kappa_pair = Vec::new();
        let p1 = &projectors[1];
        'seed: for s in 0..rank {
            let mut e = vec![CycloNum::zero(h); rank];
            e[s] = CycloNum::one(h);
            let cand = p1.mul_vec(&e);
            if cand.iter().all(|c| c.is_zero()) {
                continue;
            }
            let mut pairs = Vec::with_capacity(rs.num_roots());
            for r in 0..rs.num_roots() {
                let mut acc = CycloNum::zero(h);
                for (i, &q) in rs.simple_pairings(r).iter().enumerate() {
                    if q != 0 {
                        acc = &acc + &cand[i].scale(&rat_int(q));
                    }
                }
                if acc.is_zero() {
                    continue 'seed;
                }
                pairs.push(acc);
            }
            kappa = Some(cand);
            kappa_pair = pairs;
            break;
        }
        let kappa = kappa.ok_or_else(|| {
            CoreError::Invariant(format!("{ade}: no regular eigenvector found"))
        })?;

        // eigenbasis, one vector per slot
        let mut eigenbasis: Vec<Vec<CycloNum>> = Vec::with_capacity(rank);
        let mut a = 0;
        while a < rank {
            let m = slots[a].m;
            let mult = slots.iter().filter(|s| s.m == m).count();
            let p = &projectors[m as usize];
            let mut images = Vec::new();
            for s in 0..rank {
                let mut e = vec![CycloNum::zero(h); rank];
                e[s] = CycloNum::one(h);
                let img = p.mul_vec(&e);
                if !img.iter().all(|c| c.is_zero()) {
                    images.push(img);
                }
            }
            if mult == 1 {
                eigenbasis.push(images.into_iter().next().ok_or_else(|| {
                    CoreError::Invariant(format!("{ade}: empty projector image"))
                })?);
                a += 1;
                continue;
            }
            // multiplicity 2: find two independent images, orthogonalize
            let v1 = images[0].clone();
            let mut v2 = None;
            for cand in images.into_iter().skip(1) {
                let indep = (0..rank).any(|i| {
                    (0..rank).any(|j| &(&v1[i] * &cand[j]) != &(&v1[j] * &cand[i]))
                });
                if indep {
                    v2 = Some(cand);
                    break;
                }
            }
            let v2 = v2.ok_or_else(|| {
                CoreError::Invariant(format!(
                    "{ade}: multiplicity-2 eigenspace with rank-1 projector image"
                ))
            })?;
            let n1 = pair(&v1, &v1);
            let n2 = pair(&v2, &v2);
            let (u1, mut u2) = if !n1.is_zero() {
                (v1, v2)
            } else if !n2.is_zero() {
                (v2, v1)
            } else {
                let s: Vec<CycloNum> =
                    v1.iter().zip(&v2).map(|(x, y)| x + y).collect();
                (s, v2)
            };
            let nu = pair(&u1, &u1);
            if nu.is_zero() {
                return Err(CoreError::Invariant(format!(
                    "{ade}: degenerate pairing on doubled eigenspace"
                )));
            }
            let c = pair(&u1, &u2).checked_div(&nu)?;
            for (x, y) in u2.iter_mut().zip(&u1) {
                let t = &c * y;
                *x = &*x - &t;
            }
            if u2.iter().all(|c| c.is_zero()) {
                return Err(CoreError::Invariant(format!(
                    "{ade}: orthogonalization collapsed an eigenvector"
                )));
            }
            eigenbasis.push(u1);
            eigenbasis.push(u2);
            a += 2;
        }

        // eigenvector property M H_a = zeta^(m_a) H_a
        for (slot, hvec) in slots.iter().zip(&eigenbasis) {
            let lam = CycloNum::zeta_pow(h, slot.m as i64);
            for i in 0..rank {
                let mut acc = CycloNum::zero(h);
                for j in 0..rank {
                    if m_matrix[i][j] != 0 {
                        acc = &acc + &hvec[j].scale(&rat_int(m_matrix[i][j]));
                    }
                }
                if acc != &lam * &hvec[i] {
                    return Err(CoreError::Invariant(format!(
                        "{ade}: slot (m={}, tag={}) is not an eigenvector",
                        slot.m, slot.tag
                    )));
                }
            }
        }

        // conjugation structure and pairing orthogonality
        let mut conj = vec![usize::MAX; rank];
        for (a, sa) in slots.iter().enumerate() {
            let mc = h - sa.m;
            let b = slots
                .iter()
                .position(|sb| sb.m == mc % h && sb.tag == sa.tag)
                .ok_or_else(|| {
                    CoreError::Invariant(format!(
                        "{ade}: exponent set not symmetric under m -> h - m"
                    ))
                })?;
            conj[a] = b;
        }
        for a in 0..rank {
            if conj[conj[a]] != a {
                return Err(CoreError::Invariant(format!(
                    "{ade}: conjugation is not an involution"
                )));
            }
            for b in 0..rank {
                let p = pair(&eigenbasis[a], &eigenbasis[b]);
                if (b == conj[a]) == p.is_zero() {
                    return Err(CoreError::Invariant(format!(
                        "{ade}: eigenbasis pairing fails orthogonality at ({a}, {b})"
                    )));
                }
            }
        }

        // beta coordinates via the inverse of the eigenbasis matrix
        let mut cols = vec![vec![CycloNum::zero(h); rank]; rank];
        for (a, hvec) in eigenbasis.iter().enumerate() {
            for i in 0..rank {
                cols[i][a] = hvec[i].clone();
            }
        }
        let emat = CMatrix::from_rows(h, cols)?;
        let eigen_inv = emat.invert().map_err(|_| {
            CoreError::Invariant(format!("{ade}: eigenvectors are not independent"))
        })?;
        let mut beta = Vec::with_capacity(rank);
        for i in 0..rank {
            let mut e = vec![CycloNum::zero(h); rank];
            e[i] = CycloNum::one(h);
            beta.push(eigen_inv.mul_vec(&e));
        }

        Ok(CoxeterData {
            ade,
            h,
            rank,
            cartan,
            m_matrix,
            exponents,
            slots,
            conj,
            kappa,
            kappa_pair,
            eigenbasis,
            eigen_inv,
            beta,
        })
    }

    pub fn ade(&self) -> AdeType {
        self.ade
    }

    pub fn h(&self) -> u32 {
        self.h
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn coxeter_matrix(&self) -> &[Vec<i64>] {
        &self.m_matrix
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exponents
    }

    pub fn slots(&self) -> &[Slot] {
        &self.slots
    }

    pub fn slot_index(&self, slot: Slot) -> Option<usize> {
        self.slots.iter().position(|&s| s == slot)
    }

    pub fn conj_slot(&self, a: usize) -> usize {
        self.conj[a]
    }

    pub fn kappa(&self) -> &[CycloNum] {
        &self.kappa
    }

    /// <kappa, gamma_r>, guaranteed nonzero.
    pub fn kappa_pair_root(&self, r: usize) -> &CycloNum {
        &self.kappa_pair[r]
    }

    pub fn eigenvector(&self, a: usize) -> &[CycloNum] {
        &self.eigenbasis[a]
    }

    /// Coordinates of alpha_(i+1) in the eigenbasis.
    pub fn beta(&self, i: usize) -> &[CycloNum] {
        &self.beta[i]
    }

    /// Eigenbasis coordinates of an arbitrary root.
    pub fn beta_for_root(&self, rs: &RootSystem, r: usize) -> Vec<CycloNum> {
        let coords = rs.simple_coords(r);
        let v: Vec<CycloNum> = coords
            .iter()
            .map(|&c| CycloNum::from_int(self.h, c))
            .collect();
        self.eigen_inv.mul_vec(&v)
    }

    /// Bilinear pairing of two simple-basis vectors via the Cartan matrix.
    pub fn pair_simple(&self, u: &[CycloNum], v: &[CycloNum]) -> CycloNum {
        let mut acc = CycloNum::zero(self.h);
        for i in 0..self.rank {
            if u[i].is_zero() {
                continue;
            }
            for j in 0..self.rank {
                if self.cartan[i][j] == 0 || v[j].is_zero() {
                    continue;
                }
                let t = (&u[i] * &v[j]).scale(&rat_int(self.cartan[i][j]));
                acc = &acc + &t;
            }
        }
        acc
    }

    /// The eigenspace projector for exponent m (recomputed on demand).
    pub fn projector(&self, m: u32) -> CMatrix {
        let mut pow = int_identity(self.rank);
        let mut rows = vec![vec![CycloNum::zero(self.h); self.rank]; self.rank];
        for k in 0..self.h {
            let w = CycloNum::zeta_pow(self.h, -((m as i64) * k as i64))
                .scale(&rat(1, self.h as i64));
            for i in 0..self.rank {
                for j in 0..self.rank {
                    if pow[i][j] != 0 {
                        let t = w.scale(&rat_int(pow[i][j]));
                        rows[i][j] = &rows[i][j] + &t;
                    }
                }
            }
            if k + 1 < self.h {
                pow = int_matrix_mul(&pow, &self.m_matrix);
            }
        }
        CMatrix::from_rows(self.h, rows).expect("square by construction")
    }

    /// Rescales eigenvector H_a by a nonzero factor, adjusting the dual
    /// coordinate data to match.
    pub fn rescale_slot(&mut self, a: usize, factor: &CycloNum) -> Result<()> {
        if factor.is_zero() {
            return Err(CoreError::BadInput("rescale factor must be nonzero".into()));
        }
        if factor.order() != self.h {
            return Err(CoreError::OrderMismatch(self.h, factor.order()));
        }
        let inv = factor.inverse()?;
        for x in self.eigenbasis[a].iter_mut() {
            *x = &*x * factor;
        }
        for row in self.beta.iter_mut() {
            row[a] = &row[a] * &inv;
        }
        let n = self.rank;
        for j in 0..n {
            let v = self.eigen_inv.get(a, j) * &inv;
            self.eigen_inv.set(a, j, v);
        }
        Ok(())
    }

    /// Both sides of the exponent-sum identity
    /// rank*(h+1)/(12h) = sum_a m_a (h - m_a) / (2 h^2).
    pub fn exponent_sum_identity(&self) -> (Rational, Rational) {
        let lhs = rat(self.rank as i64 * (self.h as i64 + 1), 12 * self.h as i64);
        let mut rhs = Rational::zero();
        for &m in &self.exponents {
            rhs += rat(
                m as i64 * (self.h as i64 - m as i64),
                2 * (self.h as i64) * (self.h as i64),
            );
        }
        (lhs, rhs)
    }

    /// rank * h * (h+1) / 12, the scalar offset in the bilinear hierarchy.
    pub fn rho_squared(&self) -> Rational {
        rat(
            self.rank as i64 * self.h as i64 * (self.h as i64 + 1),
            12,
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn data(t: AdeType) -> (RootSystem, CoxeterData) {
        let rs = RootSystem::build(t).unwrap();
        let cd = CoxeterData::build(&rs).unwrap();
        (rs, cd)
    }

    #[test]
    fn exponent_lists() {
        let cases: Vec<(AdeType, Vec<u32>)> = vec![
            (AdeType::A(1), vec![1]),
            (AdeType::A(3), vec![1, 2, 3]),
            (AdeType::D(4), vec![1, 3, 3, 5]),
            (AdeType::D(5), vec![1, 3, 4, 5, 7]),
            (AdeType::E(6), vec![1, 4, 5, 7, 8, 11]),
            (AdeType::E(7), vec![1, 5, 7, 9, 11, 13, 17]),
            (AdeType::E(8), vec![1, 7, 11, 13, 17, 19, 23, 29]),
        ];
        for (t, expect) in cases {
            let (_, cd) = data(t);
            assert_eq!(cd.exponents(), &expect[..], "{t}");
        }
    }

    #[test]
    fn projector_algebra() {
        let (_, cd) = data(AdeType::A(3));
        let h = cd.h();
        let rank = cd.rank();
        let mut sum = CMatrix::zero(h, rank);
        for m in 0..h {
            let p = cd.projector(m);
            assert_eq!(p.mul(&p), p, "P_{m} idempotent");
            if m >= 1 {
                let q = cd.projector(m - 1);
                let z = p.mul(&q);
                assert_eq!(z, CMatrix::zero(h, rank), "P_{m} P_{} = 0", m - 1);
            }
            sum = sum.add(&p);
        }
        assert_eq!(sum, CMatrix::identity(h, rank), "projectors resolve identity");
    }

    #[test]
    fn kappa_is_regular_eigenvector() {
        for t in [AdeType::A(4), AdeType::D(5), AdeType::E(6)] {
            let (rs, cd) = data(t);
            for r in 0..rs.num_roots() {
                assert!(!cd.kappa_pair_root(r).is_zero(), "{t} root {r}");
            }
            // M kappa = zeta_h kappa
            let m = cd.coxeter_matrix();
            let lam = CycloNum::zeta(cd.h());
            for i in 0..cd.rank() {
                let mut acc = CycloNum::zero(cd.h());
                for j in 0..cd.rank() {
                    if m[i][j] != 0 {
                        acc = &acc + &cd.kappa()[j].scale(&rat_int(m[i][j]));
                    }
                }
                assert_eq!(acc, &lam * &cd.kappa()[i], "{t}");
            }
        }
    }

    #[test]
    fn beta_reconstructs_simple_roots() {
        for t in [AdeType::A(2), AdeType::D(4), AdeType::E(6)] {
            let (_, cd) = data(t);
            for i in 0..cd.rank() {
                let mut v = vec![CycloNum::zero(cd.h()); cd.rank()];
                for (a, b) in cd.beta(i).iter().enumerate() {
                    for (k, hv) in cd.eigenvector(a).iter().enumerate() {
                        v[k] = &v[k] + &(b * hv);
                    }
                }
                for (k, x) in v.iter().enumerate() {
                    let expect = if k == i {
                        CycloNum::one(cd.h())
                    } else {
                        CycloNum::zero(cd.h())
                    };
                    assert_eq!(*x, expect, "{t} alpha_{}", i + 1);
                }
            }
        }
    }

    #[test]
    fn doubled_exponent_slots_in_even_d() {
        let (_, cd) = data(AdeType::D(4));
        assert_eq!(cd.slots().len(), 4);
        assert_eq!(cd.slot_index(Slot::new(3, 0)), Some(1));
        assert_eq!(cd.slot_index(Slot::new(3, 1)), Some(2));
        // both h/2 slots are self-conjugate
        assert_eq!(cd.conj_slot(1), 1);
        assert_eq!(cd.conj_slot(2), 2);
        assert_eq!(cd.conj_slot(0), 3);
        // cross pairing vanishes, self pairing does not
        let p01 = cd.pair_simple(cd.eigenvector(1), cd.eigenvector(2));
        assert!(p01.is_zero());
        let p11 = cd.pair_simple(cd.eigenvector(1), cd.eigenvector(1));
        assert!(!p11.is_zero());
    }

    #[test]
    fn conjugate_slots_hold_conjugate_vectors() {
        let (_, cd) = data(AdeType::E(6));
        for a in 0..cd.rank() {
            let b = cd.conj_slot(a);
            for (x, y) in cd.eigenvector(a).iter().zip(cd.eigenvector(b)) {
                assert_eq!(x.conjugate(), *y);
            }
        }
    }

    #[test]
    fn rescale_updates_dual_data() {
        let (rs, mut cd) = data(AdeType::A(1));
        assert_eq!(cd.beta(0)[0], CycloNum::one(2));
        cd.rescale_slot(0, &CycloNum::from_rational(2, rat(1, 2))).unwrap();
        assert_eq!(cd.beta(0)[0], CycloNum::from_int(2, 2));
        let b = cd.beta_for_root(&rs, rs.simple_root(0));
        assert_eq!(b[0], CycloNum::from_int(2, 2));
    }

    #[test]
    fn exponent_sum_identity_holds() {
        for t in AdeType::verification_set() {
            let (_, cd) = data(t);
            let (lhs, rhs) = cd.exponent_sum_identity();
            assert_eq!(lhs, rhs, "{t}");
        }
    }
}

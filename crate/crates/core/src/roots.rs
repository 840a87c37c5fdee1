//! Simply laced (ADE) root systems in explicit coordinates.
//!
//! Coordinates are stored as integers equal to `scale` times the true
//! ambient coordinate, so every root vector is exact:
//!
//! * type A_n: ambient dimension n+1, scale 1, roots e_i - e_j inside the
//!   sum-zero hyperplane;
//! * type D_n: ambient dimension n, scale 1, roots +-e_i +- e_j (i < j);
//! * types E_6, E_7, E_8: ambient dimension 8, scale 2, the even coordinate
//!   model of E_8 (so half-integer entries become odd integers); E_7 and E_6
//!   are the subsets spanned by the first 7 resp. 6 simple roots.
//!
//! The bilinear form is <x, y> = dot(x, y) / scale^2, normalized so every
//! root has squared length 2. Simple roots follow the standard (Bourbaki)
//! numbering; in particular the E-series diagram is the chain 1-3-4-5-6-7-8
//! with node 2 attached to node 4.

use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::str::FromStr;

use num_traits::Zero;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{CoreError, Result};
use crate::rational::{rat, rat_int, Rational};

/// A simply laced Cartan type.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AdeType {
    A(u32),
    D(u32),
    E(u32),
}

impl AdeType {
    pub fn new(family: char, n: u32) -> Result<AdeType> {
        let t = match family.to_ascii_uppercase() {
            'A' if n >= 1 => AdeType::A(n),
            'D' if n >= 4 => AdeType::D(n),
            'E' if (6..=8).contains(&n) => AdeType::E(n),
            _ => {
                return Err(CoreError::UnsupportedType(format!(
                    "{}{}",
                    family.to_ascii_uppercase(),
                    n
                )))
            }
        };
        Ok(t)
    }

    pub fn rank(&self) -> usize {
        match *self {
            AdeType::A(n) | AdeType::D(n) | AdeType::E(n) => n as usize,
        }
    }

    /// Coxeter number of the type.
    pub fn coxeter_number(&self) -> u32 {
        match *self {
            AdeType::A(n) => n + 1,
            AdeType::D(n) => 2 * n - 2,
            AdeType::E(6) => 12,
            AdeType::E(7) => 18,
            AdeType::E(8) => 30,
            AdeType::E(_) => unreachable!("constructor rejects other E ranks"),
        }
    }

    pub fn root_count(&self) -> usize {
        match *self {
            AdeType::A(n) => (n * (n + 1)) as usize,
            AdeType::D(n) => (2 * n * (n - 1)) as usize,
            AdeType::E(6) => 72,
            AdeType::E(7) => 126,
            AdeType::E(8) => 240,
            AdeType::E(_) => unreachable!(),
        }
    }

    /// The fixed set of types exercised by the built-in verification suite.
    pub fn verification_set() -> Vec<AdeType> {
        let mut v: Vec<AdeType> = (1..=8).map(AdeType::A).collect();
        v.extend((4..=8).map(AdeType::D));
        v.extend((6..=8).map(AdeType::E));
        v
    }
}

impl fmt::Display for AdeType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            AdeType::A(n) => write!(f, "A{n}"),
            AdeType::D(n) => write!(f, "D{n}"),
            AdeType::E(n) => write!(f, "E{n}"),
        }
    }
}

impl FromStr for AdeType {
    type Err = CoreError;

    fn from_str(s: &str) -> Result<AdeType> {
        let t = s.trim();
        let mut chars = t.chars();
        let family = chars.next().ok_or_else(|| {
            CoreError::UnsupportedType(String::from("(empty)"))
        })?;
        let rest: &str = chars.as_str();
        let digits = rest.strip_prefix('_').unwrap_or(rest);
        let n: u32 = digits
            .parse()
            .map_err(|_| CoreError::UnsupportedType(t.to_string()))?;
        AdeType::new(family, n)
    }
}

impl Serialize for AdeType {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for AdeType {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A realized root system with precomputed reflection tables.
#[derive(Clone, Debug)]
pub struct RootSystem {
    ade: AdeType,
    ambient_dim: usize,
    scale: i64,
    /// All roots, lexicographically sorted scaled coordinate vectors.
    roots: Vec<Vec<i64>>,
    index_of: HashMap<Vec<i64>, usize>,
    /// Root index of each simple root, alpha_1 first.
    simple: Vec<usize>,
    /// Integer coordinates of each root in the simple root basis.
    simple_coords: Vec<Vec<i64>>,
    /// simple_pairings[r][i] = <alpha_(i+1), gamma_r>.
    simple_pairings: Vec<Vec<i64>>,
    positive: Vec<usize>,
    negation: Vec<usize>,
    cartan: Vec<Vec<i64>>,
    /// simple_perm[i][r] = index of s_(i+1)(gamma_r).
    simple_perm: Vec<Vec<usize>>,
    h: u32,
}

fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

impl RootSystem {
    /// Builds the root system for `ade`, with structural validation of the
    /// root count, closure under negation and reflection, squared lengths,
    /// and integrality of simple root coordinates.
    pub fn build(ade: AdeType) -> Result<RootSystem> {
        let (ambient_dim, scale, mut roots, simple_vecs) = match ade {
            AdeType::A(n) => Self::raw_a(n as usize),
            AdeType::D(n) => Self::raw_d(n as usize),
            AdeType::E(n) => Self::raw_e(n as usize)?,
        };
        roots.sort();
        roots.dedup();
        if roots.len() != ade.root_count() {
            return Err(CoreError::Invariant(format!(
                "{ade}: expected {} roots, built {}",
                ade.root_count(),
                roots.len()
            )));
        }
        let index_of: HashMap<Vec<i64>, usize> = roots
            .iter()
            .enumerate()
            .map(|(i, r)| (r.clone(), i))
            .collect();
        let scale2 = scale * scale;
        for r in &roots {
            if dot(r, r) != 2 * scale2 {
                return Err(CoreError::Invariant(format!(
                    "{ade}: root with squared length != 2"
                )));
            }
        }
        let simple: Vec<usize> = simple_vecs
            .iter()
            .map(|v| {
                index_of.get(v).copied().ok_or_else(|| {
                    CoreError::Invariant(format!("{ade}: simple root not in root set"))
                })
            })
            .collect::<Result<_>>()?;
        let rank = simple.len();

        let mut cartan = vec![vec![0i64; rank]; rank];
        for i in 0..rank {
            for j in 0..rank {
                let d = dot(&roots[simple[i]], &roots[simple[j]]);
                if d % scale2 != 0 {
                    return Err(CoreError::Invariant(format!(
                        "{ade}: non-integral Cartan pairing"
                    )));
                }
                cartan[i][j] = d / scale2;
            }
        }

        // simple-basis coordinates: solve cartan * c = (<alpha_i, gamma>)_i
        let cartan_rat: Vec<Vec<Rational>> = cartan
            .iter()
            .map(|row| row.iter().map(|&x| rat_int(x)).collect())
            .collect();
        let mut simple_coords = Vec::with_capacity(roots.len());
        let mut simple_pairings = Vec::with_capacity(roots.len());
        for r in &roots {
            let pair: Vec<i64> = simple
                .iter()
                .map(|&s| dot(r, &roots[s]) / scale2)
                .collect();
            let rhs: Vec<Rational> = pair.iter().map(|&x| rat_int(x)).collect();
            let sol = crate::linalg::solve_rational(&cartan_rat, &rhs).ok_or_else(|| {
                CoreError::Invariant(format!("{ade}: Cartan matrix is singular"))
            })?;
            let mut coords = Vec::with_capacity(rank);
            for c in &sol {
                if !c.is_integer() {
                    return Err(CoreError::Invariant(format!(
                        "{ade}: root has non-integral simple basis coordinates"
                    )));
                }
                let v = c.to_integer();
                let v: i64 = i64::try_from(&v).map_err(|_| {
                    CoreError::Invariant(format!("{ade}: coordinate overflow"))
                })?;
                coords.push(v);
            }
            let pos = coords.iter().any(|&c| c > 0);
            let neg = coords.iter().any(|&c| c < 0);
            if pos && neg {
                return Err(CoreError::Invariant(format!(
                    "{ade}: root with mixed-sign simple coordinates"
                )));
            }
            simple_coords.push(coords);
            simple_pairings.push(pair);
        }

        let positive: Vec<usize> = (0..roots.len())
            .filter(|&r| simple_coords[r].iter().sum::<i64>() > 0)
            .collect();
        if positive.len() * 2 != roots.len() {
            return Err(CoreError::Invariant(format!(
                "{ade}: positive roots are not half of all roots"
            )));
        }
        let negation: Vec<usize> = roots
            .iter()
            .map(|r| {
                let m: Vec<i64> = r.iter().map(|&x| -x).collect();
                index_of.get(&m).copied().ok_or_else(|| {
                    CoreError::Invariant(format!("{ade}: roots not closed under negation"))
                })
            })
            .collect::<Result<_>>()?;

        // reflection permutations; closure under reflection checked here
        let mut simple_perm = Vec::with_capacity(rank);
        for i in 0..rank {
            let alpha = roots[simple[i]].clone();
            let mut perm = Vec::with_capacity(roots.len());
            for r in &roots {
                let c = dot(r, &alpha) / scale2;
                let img: Vec<i64> = r
                    .iter()
                    .zip(&alpha)
                    .map(|(&x, &a)| x - c * a)
                    .collect();
                let idx = index_of.get(&img).copied().ok_or_else(|| {
                    CoreError::Invariant(format!(
                        "{ade}: roots not closed under simple reflection"
                    ))
                })?;
                perm.push(idx);
            }
            simple_perm.push(perm);
        }

        let h = ade.coxeter_number();
        if roots.len() != rank * h as usize {
            return Err(CoreError::Invariant(format!(
                "{ade}: root count does not equal rank times Coxeter number"
            )));
        }

        Ok(RootSystem {
            ade,
            ambient_dim,
            scale,
            roots,
            index_of,
            simple,
            simple_coords,
            simple_pairings,
            positive,
            negation,
            cartan,
            simple_perm,
            h,
        })
    }

    fn raw_a(n: usize) -> (usize, i64, Vec<Vec<i64>>, Vec<Vec<i64>>) {
        let dim = n + 1;
        let mut roots = Vec::new();
        for i in 0..dim {
            for j in 0..dim {
                if i == j {
                    continue;
                }
                let mut v = vec![0i64; dim];
                v[i] = 1;
                v[j] = -1;
                roots.push(v);
            }
        }
        let simple = (1..=n)
            .map(|i| {
                let mut v = vec![0i64; dim];
                v[i - 1] = 1;
                v[i] = -1;
                v
            })
            .collect();
        (dim, 1, roots, simple)
    }

    fn raw_d(n: usize) -> (usize, i64, Vec<Vec<i64>>, Vec<Vec<i64>>) {
        let mut roots = Vec::new();
        for i in 0..n {
            for j in (i + 1)..n {
                for (si, sj) in [(1, 1), (1, -1), (-1, 1), (-1, -1)] {
                    let mut v = vec![0i64; n];
                    v[i] = si;
                    v[j] = sj;
                    roots.push(v);
                }
            }
        }
        let mut simple = Vec::with_capacity(n);
        for i in 1..n {
            let mut v = vec![0i64; n];
            v[i - 1] = 1;
            v[i] = -1;
            simple.push(v);
        }
        let mut last = vec![0i64; n];
        last[n - 2] = 1;
        last[n - 1] = 1;
        simple.push(last);
        (n, 1, roots, simple)
    }

    fn raw_e(n: usize) -> Result<(usize, i64, Vec<Vec<i64>>, Vec<Vec<i64>>)> {
        // E_8 in scaled (x2) coordinates; integer roots +-2e_i +- 2e_j and
        // half roots (+-1)^8 with an even number of minus signs
        let mut e8_roots = Vec::new();
        for i in 0..8 {
            for j in (i + 1)..8 {
                for (si, sj) in [(2, 2), (2, -2), (-2, 2), (-2, -2)] {
                    let mut v = vec![0i64; 8];
                    v[i] = si;
                    v[j] = sj;
                    e8_roots.push(v);
                }
            }
        }
        for mask in 0u32..256 {
            if mask.count_ones() % 2 != 0 {
                continue;
            }
            let v: Vec<i64> = (0..8)
                .map(|b| if mask >> b & 1 == 1 { -1 } else { 1 })
                .collect();
            e8_roots.push(v);
        }

        let mut simple: Vec<Vec<i64>> = Vec::with_capacity(8);
        simple.push(vec![1, -1, -1, -1, -1, -1, -1, 1]);
        simple.push(vec![2, 2, 0, 0, 0, 0, 0, 0]);
        simple.push(vec![-2, 2, 0, 0, 0, 0, 0, 0]);
        for k in 4..=8 {
            let mut v = vec![0i64; 8];
            v[k - 2] = 2;
            v[k - 3] = -2;
            simple.push(v);
        }
        simple.truncate(n);

        if n == 8 {
            return Ok((8, 2, e8_roots, simple));
        }
        // keep the roots lying in the span of the first n simple roots:
        // solve against the full E_8 Cartan and require trailing zeros
        let full = RootSystem::build(AdeType::E(8))?;
        let kept: Vec<Vec<i64>> = (0..full.num_roots())
            .filter(|&r| full.simple_coords[r][n..].iter().all(|&c| c == 0))
            .map(|r| full.roots[r].clone())
            .collect();
        Ok((8, 2, kept, simple))
    }

    pub fn ade(&self) -> AdeType {
        self.ade
    }

    pub fn rank(&self) -> usize {
        self.simple.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    /// Coordinates are stored multiplied by this factor (1 or 2).
    pub fn scale(&self) -> i64 {
        self.scale
    }

    pub fn h(&self) -> u32 {
        self.h
    }

    pub fn num_roots(&self) -> usize {
        self.roots.len()
    }

    /// Scaled integer coordinates of a root.
    pub fn root(&self, idx: usize) -> &[i64] {
        &self.roots[idx]
    }

    /// True ambient coordinates of a root.
    pub fn root_rational(&self, idx: usize) -> Vec<Rational> {
        self.roots[idx]
            .iter()
            .map(|&x| rat(x, self.scale))
            .collect()
    }

    pub fn index_of(&self, scaled_coords: &[i64]) -> Option<usize> {
        self.index_of.get(scaled_coords).copied()
    }

    /// Root index of alpha_(i+1), i in 0..rank.
    pub fn simple_root(&self, i: usize) -> usize {
        self.simple[i]
    }

    pub fn simple_coords(&self, idx: usize) -> &[i64] {
        &self.simple_coords[idx]
    }

    /// <alpha_(i+1), gamma_idx> for all i.
    pub fn simple_pairings(&self, idx: usize) -> &[i64] {
        &self.simple_pairings[idx]
    }

    pub fn cartan(&self) -> &[Vec<i64>] {
        &self.cartan
    }

    pub fn positive_roots(&self) -> &[usize] {
        &self.positive
    }

    pub fn is_positive(&self, idx: usize) -> bool {
        self.simple_coords[idx].iter().sum::<i64>() > 0
    }

    pub fn negation(&self, idx: usize) -> usize {
        self.negation[idx]
    }

    /// Exact pairing of two roots.
    pub fn pair_roots(&self, i: usize, j: usize) -> i64 {
        dot(&self.roots[i], &self.roots[j]) / (self.scale * self.scale)
    }

    /// Pairing of an arbitrary rational ambient vector with a root.
    pub fn pair_vec_root(&self, x: &[Rational], idx: usize) -> Rational {
        let mut acc = Rational::zero();
        for (xi, &ri) in x.iter().zip(&self.roots[idx]) {
            if ri != 0 {
                acc += xi * rat(ri, self.scale);
            }
        }
        acc
    }

    pub fn pair_vecs(x: &[Rational], y: &[Rational]) -> Rational {
        x.iter().zip(y).map(|(a, b)| a * b).sum()
    }

    /// Image of root `idx` under the reflection in simple root i+1.
    pub fn reflect_root(&self, i: usize, idx: usize) -> usize {
        self.simple_perm[i][idx]
    }

    /// Reflection of an arbitrary rational ambient vector in simple root i+1.
    pub fn reflect_vec(&self, i: usize, x: &[Rational]) -> Vec<Rational> {
        let alpha = &self.roots[self.simple[i]];
        // <x, alpha> since <alpha, alpha> = 2 the reflection subtracts
        // <x, alpha> * alpha
        let c = self.pair_vec_root(x, self.simple[i]);
        x.iter()
            .zip(alpha)
            .map(|(xi, &ai)| xi - &c * rat(ai, self.scale))
            .collect()
    }

    /// The chosen reduced word for the Coxeter element, as 0-based simple
    /// root indices. The product is taken right to left: the last letter
    /// acts first.
    pub fn coxeter_word(&self) -> Vec<usize> {
        match self.ade {
            AdeType::A(n) => (0..n as usize).rev().collect(),
            AdeType::D(n) => (0..n as usize).collect(),
            AdeType::E(6) => vec![0, 3, 5, 1, 2, 4],
            AdeType::E(7) => vec![0, 3, 5, 1, 2, 4, 6],
            AdeType::E(8) => vec![0, 3, 5, 7, 1, 2, 4, 6],
            AdeType::E(_) => unreachable!(),
        }
    }

    /// Permutation of roots induced by a word (rightmost letter first).
    pub fn word_permutation(&self, word: &[usize]) -> Vec<usize> {
        let mut perm: Vec<usize> = (0..self.roots.len()).collect();
        for &i in word.iter().rev() {
            for p in perm.iter_mut() {
                *p = self.simple_perm[i][*p];
            }
        }
        perm
    }

    pub fn coxeter_permutation(&self) -> Vec<usize> {
        self.word_permutation(&self.coxeter_word())
    }

    /// Matrix of a word in the simple root basis (columns are images of the
    /// simple roots), rightmost letter acting first.
    pub fn word_matrix_simple(&self, word: &[usize]) -> Vec<Vec<i64>> {
        let rank = self.rank();
        let mut cols: Vec<Vec<i64>> = (0..rank)
            .map(|j| {
                let mut e = vec![0i64; rank];
                e[j] = 1;
                e
            })
            .collect();
        for &i in word.iter().rev() {
            for col in cols.iter_mut() {
                // s_i: c -> c - <alpha_i, v> e_i with <alpha_i, v> = (A c)_i
                let p: i64 = (0..rank).map(|j| self.cartan[i][j] * col[j]).sum();
                col[i] -= p;
            }
        }
        // transpose columns into a row-major matrix
        let mut m = vec![vec![0i64; rank]; rank];
        for (j, col) in cols.iter().enumerate() {
            for (i, &v) in col.iter().enumerate() {
                m[i][j] = v;
            }
        }
        m
    }

    pub fn coxeter_matrix_simple(&self) -> Vec<Vec<i64>> {
        self.word_matrix_simple(&self.coxeter_word())
    }

    /// Orbits of the Coxeter element on roots, each of length h, listed in
    /// orbit order starting from the lexicographically first unvisited root.
    pub fn coxeter_orbits(&self) -> Result<Vec<Vec<usize>>> {
        let perm = self.coxeter_permutation();
        let mut seen = vec![false; self.roots.len()];
        let mut orbits = Vec::new();
        for start in 0..self.roots.len() {
            if seen[start] {
                continue;
            }
            let mut orbit = vec![start];
            seen[start] = true;
            let mut cur = perm[start];
            while cur != start {
                if seen[cur] {
                    return Err(CoreError::Invariant(format!(
                        "{}: Coxeter orbits are not disjoint cycles",
                        self.ade
                    )));
                }
                seen[cur] = true;
                orbit.push(cur);
                cur = perm[cur];
            }
            if orbit.len() != self.h as usize {
                return Err(CoreError::Invariant(format!(
                    "{}: Coxeter orbit of length {} instead of h = {}",
                    self.ade,
                    orbit.len(),
                    self.h
                )));
            }
            orbits.push(orbit);
        }
        if orbits.len() != self.rank() {
            return Err(CoreError::Invariant(format!(
                "{}: expected {} Coxeter orbits, found {}",
                self.ade,
                self.rank(),
                orbits.len()
            )));
        }
        Ok(orbits)
    }

    /// Shortest word w (breadth-first, deterministic) with
    /// apply(w, source) = target; letters act right to left.
    pub fn weyl_word(&self, source: usize, target: usize) -> Result<Vec<usize>> {
        let order: Vec<usize> = (0..self.rank()).collect();
        self.weyl_word_with_order(source, target, &order)
    }

    /// Same search with a caller-chosen preference order on the simple
    /// reflections, which can produce a different (equally valid) word.
    pub fn weyl_word_with_order(
        &self,
        source: usize,
        target: usize,
        order: &[usize],
    ) -> Result<Vec<usize>> {
        if source == target {
            return Ok(vec![]);
        }
        let n = self.roots.len();
        let mut prev: Vec<Option<(usize, usize)>> = vec![None; n];
        let mut queue = VecDeque::new();
        queue.push_back(source);
        prev[source] = Some((source, usize::MAX));
        while let Some(cur) = queue.pop_front() {
            for &i in order {
                let next = self.simple_perm[i][cur];
                if prev[next].is_none() {
                    prev[next] = Some((cur, i));
                    if next == target {
                        // reconstruct; the step out of `source` ends up last
                        let mut word = Vec::new();
                        let mut at = target;
                        while at != source {
                            let (p, letter) = prev[at].unwrap();
                            word.push(letter);
                            at = p;
                        }
                        return Ok(word);
                    }
                    queue.push_back(next);
                }
            }
        }
        Err(CoreError::Invariant(format!(
            "{}: no Weyl word from root {source} to root {target}",
            self.ade
        )))
    }

    /// Applies a word to a root by index, rightmost letter first.
    pub fn apply_word_root(&self, word: &[usize], idx: usize) -> usize {
        let mut cur = idx;
        for &i in word.iter().rev() {
            cur = self.simple_perm[i][cur];
        }
        cur
    }

    /// Applies a word to a rational ambient vector, rightmost letter first.
    pub fn apply_word_vec(&self, word: &[usize], x: &[Rational]) -> Vec<Rational> {
        let mut cur = x.to_vec();
        for &i in word.iter().rev() {
            cur = self.reflect_vec(i, &cur);
        }
        cur
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn type_parsing() {
        assert_eq!("A3".parse::<AdeType>().unwrap(), AdeType::A(3));
        assert_eq!("a3".parse::<AdeType>().unwrap(), AdeType::A(3));
        assert_eq!("E_8".parse::<AdeType>().unwrap(), AdeType::E(8));
        assert_eq!("d12".parse::<AdeType>().unwrap(), AdeType::D(12));
        for bad in ["A0", "D3", "E5", "E9", "B2", "", "A", "Axy"] {
            assert!(bad.parse::<AdeType>().is_err(), "{bad} should fail");
        }
        assert_eq!(AdeType::E(7).to_string(), "E7");
        assert_eq!(AdeType::verification_set().len(), 16);
    }

    #[test]
    fn coxeter_numbers() {
        assert_eq!(AdeType::A(1).coxeter_number(), 2);
        assert_eq!(AdeType::A(7).coxeter_number(), 8);
        assert_eq!(AdeType::D(4).coxeter_number(), 6);
        assert_eq!(AdeType::D(8).coxeter_number(), 14);
        assert_eq!(AdeType::E(6).coxeter_number(), 12);
        assert_eq!(AdeType::E(7).coxeter_number(), 18);
        assert_eq!(AdeType::E(8).coxeter_number(), 30);
    }

    #[test]
    fn root_counts_and_lengths() {
        for t in AdeType::verification_set() {
            let rs = RootSystem::build(t).unwrap();
            assert_eq!(rs.num_roots(), t.root_count(), "{t}");
            assert_eq!(rs.positive_roots().len() * 2, rs.num_roots(), "{t}");
            for r in 0..rs.num_roots() {
                assert_eq!(rs.pair_roots(r, r), 2, "{t}");
                assert_eq!(rs.negation(rs.negation(r)), r);
            }
        }
    }

    #[test]
    fn e8_cartan_shape() {
        let rs = RootSystem::build(AdeType::E(8)).unwrap();
        let a = rs.cartan();
        let edges: Vec<(usize, usize)> = (0..8)
            .flat_map(|i| ((i + 1)..8).map(move |j| (i, j)))
            .filter(|&(i, j)| a[i][j] == -1)
            .collect();
        // chain 1-3-4-5-6-7-8 with 2 hanging off 4, in 0-based indices
        assert_eq!(
            edges,
            vec![(0, 2), (1, 3), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7)]
        );
        for i in 0..8 {
            assert_eq!(a[i][i], 2);
        }
    }

    #[test]
    fn e7_e6_subsystems() {
        let e7 = RootSystem::build(AdeType::E(7)).unwrap();
        assert_eq!(e7.num_roots(), 126);
        assert_eq!(e7.rank(), 7);
        let e6 = RootSystem::build(AdeType::E(6)).unwrap();
        assert_eq!(e6.num_roots(), 72);
        // E_6 diagram: chain 1-3-4-5-6 with 2 attached to 4
        let a = e6.cartan();
        let edges: Vec<(usize, usize)> = (0..6)
            .flat_map(|i| ((i + 1)..6).map(move |j| (i, j)))
            .filter(|&(i, j)| a[i][j] == -1)
            .collect();
        assert_eq!(edges, vec![(0, 2), (1, 3), (2, 3), (3, 4), (4, 5)]);
    }

    #[test]
    fn simple_coords_reconstruct_roots() {
        for t in [AdeType::A(4), AdeType::D(5), AdeType::E(6)] {
            let rs = RootSystem::build(t).unwrap();
            for r in 0..rs.num_roots() {
                let c = rs.simple_coords(r);
                let mut v = vec![0i64; rs.ambient_dim()];
                for (i, &ci) in c.iter().enumerate() {
                    for (k, &a) in rs.root(rs.simple_root(i)).iter().enumerate() {
                        v[k] += ci * a;
                    }
                }
                assert_eq!(&v[..], rs.root(r), "{t} root {r}");
            }
        }
    }

    #[test]
    fn reflection_is_involution_on_roots() {
        let rs = RootSystem::build(AdeType::D(5)).unwrap();
        for i in 0..rs.rank() {
            for r in 0..rs.num_roots() {
                assert_eq!(rs.reflect_root(i, rs.reflect_root(i, r)), r);
            }
        }
    }

    #[test]
    fn coxeter_element_properties() {
        for t in [
            AdeType::A(1),
            AdeType::A(5),
            AdeType::D(4),
            AdeType::D(7),
            AdeType::E(6),
            AdeType::E(7),
            AdeType::E(8),
        ] {
            let rs = RootSystem::build(t).unwrap();
            let perm = rs.coxeter_permutation();
            // order is exactly h
            let mut p: Vec<usize> = (0..rs.num_roots()).collect();
            let mut order = 0;
            loop {
                for q in p.iter_mut() {
                    *q = perm[*q];
                }
                order += 1;
                if p.iter().enumerate().all(|(i, &q)| q == i) {
                    break;
                }
                assert!(order <= rs.h(), "{t}: order exceeds h");
            }
            assert_eq!(order, rs.h(), "{t}");
            let orbits = rs.coxeter_orbits().unwrap();
            assert_eq!(orbits.len(), rs.rank(), "{t}");
        }
    }

    #[test]
    fn a2_coxeter_is_three_cycle_on_coordinates() {
        let rs = RootSystem::build(AdeType::A(2)).unwrap();
        let x = vec![rat_int(5), rat_int(-2), rat_int(-3)];
        let y = rs.apply_word_vec(&rs.coxeter_word(), &x);
        // coordinates shift left cyclically: (z0, z1, z2) -> (z1, z2, z0)
        assert_eq!(y, vec![rat_int(-2), rat_int(-3), rat_int(5)]);
    }

    #[test]
    fn weyl_word_connects_roots() {
        let rs = RootSystem::build(AdeType::A(2)).unwrap();
        for s in 0..rs.num_roots() {
            for t in 0..rs.num_roots() {
                let w = rs.weyl_word(s, t).unwrap();
                assert_eq!(rs.apply_word_root(&w, s), t);
            }
        }
        let rs = RootSystem::build(AdeType::E(6)).unwrap();
        let w = rs.weyl_word(0, 50).unwrap();
        assert_eq!(rs.apply_word_root(&w, 0), 50);
        let rev: Vec<usize> = (0..rs.rank()).rev().collect();
        let w2 = rs.weyl_word_with_order(0, 50, &rev).unwrap();
        assert_eq!(rs.apply_word_root(&w2, 0), 50);
    }

    #[test]
    fn word_matrix_agrees_with_ambient_action() {
        for t in [AdeType::A(3), AdeType::D(4), AdeType::E(6)] {
            let rs = RootSystem::build(t).unwrap();
            let m = rs.coxeter_matrix_simple();
            let perm = rs.coxeter_permutation();
            for i in 0..rs.rank() {
                let img = perm[rs.simple_root(i)];
                let coords = rs.simple_coords(img);
                for r in 0..rs.rank() {
                    assert_eq!(m[r][i], coords[r], "{t}");
                }
            }
        }
    }
}

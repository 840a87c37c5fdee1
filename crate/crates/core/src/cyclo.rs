//! Exact arithmetic in cyclotomic fields Q(zeta_n).
//!
//! An element is a rational-coefficient vector of length phi(n) in the
//! power basis 1, z, ..., z^(phi(n)-1), reduced modulo the n-th cyclotomic
//! polynomial. The representation is canonical, so equality is
//! coefficient-wise. Phi_n is irreducible over Q, hence every nonzero
//! element is invertible (extended Euclid on Q[x]).

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{CoreError, Result};
use crate::rational::{parse_rational, pow_i64, rat, rat_int, to_decimal_string, Rational};

pub fn euler_phi(n: u32) -> u32 {
    let mut m = n;
    let mut phi = n;
    let mut p = 2;
    while p * p <= m {
        if m % p == 0 {
            phi = phi / p * (p - 1);
            while m % p == 0 {
                m /= p;
            }
        }
        p += 1;
    }
    if m > 1 {
        phi = phi / m * (m - 1);
    }
    phi
}

fn divisors(n: u32) -> Vec<u32> {
    let mut out: Vec<u32> = (1..=n).filter(|d| n % d == 0).collect();
    out.sort_unstable();
    out
}

/// Exact division of integer polynomials, divisor monic, remainder must vanish.
/// Coefficient vectors are constant-term first.
fn div_exact_monic(mut a: Vec<BigInt>, b: &[BigInt]) -> Vec<BigInt> {
    let db = b.len() - 1;
    assert!(b[db].is_one(), "divisor must be monic");
    assert!(a.len() > db);
    let dq = a.len() - 1 - db;
    let mut q = vec![BigInt::zero(); dq + 1];
    for i in (0..=dq).rev() {
        let c = a[i + db].clone();
        if !c.is_zero() {
            for (j, bj) in b.iter().enumerate() {
                let t = bj * &c;
                a[i + j] -= t;
            }
        }
        q[i] = c;
    }
    assert!(a.iter().all(|c| c.is_zero()), "division must be exact");
    q
}

/// Coefficients of the n-th cyclotomic polynomial, constant term first, monic,
/// degree phi(n). Computed by dividing x^n - 1 by the product of all lower
/// cyclotomic polynomials at divisors of n.
pub fn cyclotomic_poly(n: u32) -> Vec<BigInt> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Arc<Vec<BigInt>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(hit) = cache.lock().unwrap().get(&n) {
        return hit.as_ref().clone();
    }
    assert!(n >= 1, "cyclotomic order must be positive");
    let mut poly = vec![BigInt::zero(); n as usize + 1];
    poly[0] = BigInt::from(-1);
    poly[n as usize] = BigInt::one();
    for d in divisors(n) {
        if d < n {
            let phi_d = cyclotomic_poly(d);
            poly = div_exact_monic(poly, &phi_d);
        }
    }
    assert_eq!(poly.len() as u32 - 1, euler_phi(n));
    cache
        .lock()
        .unwrap()
        .insert(n, Arc::new(poly.clone()));
    poly
}

/// Shared per-order data: Phi_n, reduction rows for z^j with j >= phi(n),
/// and the power basis expansion of every z^j for j < n.
struct OrderData {
    phi: usize,
    /// phi_n[j] as Rational, constant first, monic degree phi.
    modulus: Vec<Rational>,
    /// zeta_pow[j] = coefficients of z^j reduced, for j in 0..n.
    zeta_pow: Vec<Vec<Rational>>,
}

impl OrderData {
    fn build(n: u32) -> OrderData {
        let phi = euler_phi(n) as usize;
        let modulus: Vec<Rational> = cyclotomic_poly(n)
            .into_iter()
            .map(Rational::from_integer)
            .collect();
        // iteratively: z^(j+1) = shift(z^j), reduced when degree reaches phi
        let mut zeta_pow = Vec::with_capacity(n as usize);
        let mut cur = vec![Rational::zero(); phi];
        cur[0] = Rational::one();
        zeta_pow.push(cur.clone());
        for _ in 1..n {
            let mut next = vec![Rational::zero(); phi + 1];
            for (i, c) in cur.iter().enumerate() {
                next[i + 1] = c.clone();
            }
            let lead = next[phi].clone();
            if !lead.is_zero() {
                // z^phi = -(modulus minus leading term)
                for i in 0..phi {
                    let t = &modulus[i] * &lead;
                    next[i] -= t;
                }
            }
            next.truncate(phi);
            cur = next;
            zeta_pow.push(cur.clone());
        }
        OrderData {
            phi,
            modulus,
            zeta_pow,
        }
    }

    fn get(n: u32) -> Arc<OrderData> {
        static CACHE: OnceLock<Mutex<HashMap<u32, Arc<OrderData>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        let mut map = cache.lock().unwrap();
        map.entry(n)
            .or_insert_with(|| Arc::new(OrderData::build(n)))
            .clone()
    }

    /// Reduces a raw coefficient vector (any degree) modulo Phi_n.
    fn reduce(&self, mut raw: Vec<Rational>) -> Vec<Rational> {
        for j in (self.phi..raw.len()).rev() {
            let c = std::mem::replace(&mut raw[j], Rational::zero());
            if c.is_zero() {
                continue;
            }
            // z^j = z^(j - phi) * z^phi; fold in one monomial step
            let shift = j - self.phi;
            for i in 0..self.phi {
                let t = &self.modulus[i] * &c;
                raw[i + shift] -= t;
            }
        }
        raw.truncate(self.phi);
        raw.resize(self.phi, Rational::zero());
        raw
    }
}

/// An exact element of Q(zeta_n).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CycloNum {
    order: u32,
    coeffs: Vec<Rational>,
}

impl CycloNum {
    pub fn zero(order: u32) -> CycloNum {
        let phi = euler_phi(order) as usize;
        CycloNum {
            order,
            coeffs: vec![Rational::zero(); phi],
        }
    }

    pub fn one(order: u32) -> CycloNum {
        CycloNum::from_rational(order, Rational::one())
    }

    pub fn from_rational(order: u32, r: Rational) -> CycloNum {
        let mut x = CycloNum::zero(order);
        x.coeffs[0] = r;
        x
    }

    pub fn from_int(order: u32, k: i64) -> CycloNum {
        CycloNum::from_rational(order, rat_int(k))
    }

    /// zeta_n^k for any integer k (reduced mod n).
    pub fn zeta_pow(order: u32, k: i64) -> CycloNum {
        let od = OrderData::get(order);
        let idx = k.rem_euclid(order as i64) as usize;
        CycloNum {
            order,
            coeffs: od.zeta_pow[idx].clone(),
        }
    }

    pub fn zeta(order: u32) -> CycloNum {
        CycloNum::zeta_pow(order, 1)
    }

    pub fn from_coeffs(order: u32, coeffs: Vec<Rational>) -> Result<CycloNum> {
        let phi = euler_phi(order) as usize;
        if coeffs.len() != phi {
            return Err(CoreError::BadInput(format!(
                "coefficient vector for order {order} must have length {phi}, got {}",
                coeffs.len()
            )));
        }
        Ok(CycloNum { order, coeffs })
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// Some(r) iff the element lies in Q.
    pub fn as_rational(&self) -> Option<Rational> {
        if self.coeffs[1..].iter().all(|c| c.is_zero()) {
            Some(self.coeffs[0].clone())
        } else {
            None
        }
    }

    fn check_order(&self, other: &CycloNum) -> Result<()> {
        if self.order != other.order {
            Err(CoreError::OrderMismatch(self.order, other.order))
        } else {
            Ok(())
        }
    }

    pub fn checked_add(&self, other: &CycloNum) -> Result<CycloNum> {
        self.check_order(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a + b)
            .collect();
        Ok(CycloNum {
            order: self.order,
            coeffs,
        })
    }

    pub fn checked_sub(&self, other: &CycloNum) -> Result<CycloNum> {
        self.check_order(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a - b)
            .collect();
        Ok(CycloNum {
            order: self.order,
            coeffs,
        })
    }

    pub fn checked_mul(&self, other: &CycloNum) -> Result<CycloNum> {
        self.check_order(other)?;
        let od = OrderData::get(self.order);
        let mut raw = vec![Rational::zero(); 2 * od.phi];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                raw[i + j] += a * b;
            }
        }
        Ok(CycloNum {
            order: self.order,
            coeffs: od.reduce(raw),
        })
    }

    pub fn checked_div(&self, other: &CycloNum) -> Result<CycloNum> {
        self.check_order(other)?;
        self.checked_mul(&other.inverse()?)
    }

    /// Multiplicative inverse via the extended Euclidean algorithm on Q[x]
    /// against Phi_n; Phi_n is irreducible so the gcd is a nonzero constant.
    pub fn inverse(&self) -> Result<CycloNum> {
        if self.is_zero() {
            return Err(CoreError::DivisionByZero);
        }
        let od = OrderData::get(self.order);
        // r0 = Phi, r1 = self; track s with s*self = r (mod Phi)
        let mut r0 = od.modulus.clone();
        let mut r1 = self.coeffs.clone();
        poly_trim(&mut r1);
        let mut s0: Vec<Rational> = vec![];
        let mut s1: Vec<Rational> = vec![Rational::one()];
        while !r1.is_empty() {
            let (q, r) = poly_divmod(&r0, &r1);
            let qs1 = poly_mul(&q, &s1);
            let s2 = poly_sub(&s0, &qs1);
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s2;
        }
        // r0 is the gcd; must be a nonzero constant
        if r0.len() != 1 {
            return Err(CoreError::Invariant(format!(
                "gcd with Phi_{} has positive degree; Phi_n should be irreducible",
                self.order
            )));
        }
        let ginv = r0[0].recip();
        let mut inv = vec![Rational::zero(); od.phi];
        for (i, c) in s0.iter().enumerate() {
            inv[i] = c * &ginv;
        }
        Ok(CycloNum {
            order: self.order,
            coeffs: od.reduce(inv),
        })
    }

    pub fn pow(&self, e: i64) -> Result<CycloNum> {
        if e == 0 {
            return Ok(CycloNum::one(self.order));
        }
        let mut base = if e < 0 {
            self.inverse()?
        } else {
            self.clone()
        };
        let mut n = e.unsigned_abs();
        let mut acc = CycloNum::one(self.order);
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.checked_mul(&base)?;
            }
            if n > 1 {
                base = base.checked_mul(&base)?;
            }
            n >>= 1;
        }
        Ok(acc)
    }

    pub fn scale(&self, r: &Rational) -> CycloNum {
        CycloNum {
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| c * r).collect(),
        }
    }

    /// Galois automorphism zeta_n -> zeta_n^k; k must be coprime to n.
    pub fn galois(&self, k: i64) -> Result<CycloNum> {
        let n = self.order;
        let kk = k.rem_euclid(n as i64) as u32;
        if num_integer::gcd(kk as u64, n as u64) != 1 {
            return Err(CoreError::NotCoprime { k, n });
        }
        let od = OrderData::get(n);
        let mut raw = vec![Rational::zero(); od.phi.max(1)];
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let target = ((i as u64 * kk as u64) % n as u64) as usize;
            for (j, base) in od.zeta_pow[target].iter().enumerate() {
                if !base.is_zero() {
                    raw[j] += c * base;
                }
            }
        }
        Ok(CycloNum {
            order: n,
            coeffs: raw,
        })
    }

    /// Complex conjugation zeta -> zeta^(-1).
    pub fn conjugate(&self) -> CycloNum {
        self.galois(-1).expect("-1 is always coprime to n")
    }

    pub fn is_real(&self) -> bool {
        *self == self.conjugate()
    }

    /// Real and imaginary parts as rationals accurate to 10^(-digits),
    /// substituting zeta_n = cos(2 pi/n) + i sin(2 pi/n). The trig values are
    /// computed once per (order, digits) with guard digits covering the
    /// coefficient amplification sum(|c_k|).
    pub fn embed_rational(&self, digits: u32) -> (Rational, Rational) {
        let digits = digits.clamp(1, 50);
        let table = trig_table(self.order, digits + 10);
        let real = self.is_real();
        let mut re = Rational::zero();
        let mut im = Rational::zero();
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let (cos, sin) = &table[k];
            re += c * cos;
            if !real {
                im += c * sin;
            }
        }
        (re, im)
    }

    /// f64 embedding derived from the exact rational path, so output is
    /// deterministic and independent of libm.
    pub fn embed_f64(&self) -> (f64, f64) {
        let (re, im) = self.embed_rational(17);
        (
            re.to_f64().unwrap_or(f64::NAN),
            im.to_f64().unwrap_or(f64::NAN),
        )
    }

    /// Decimal rendering of the embedding with `digits` significant digits.
    pub fn embed_decimal(&self, digits: u32) -> (String, String) {
        let (re, im) = self.embed_rational(digits);
        (
            to_decimal_string(&re, digits as usize),
            to_decimal_string(&im, digits as usize),
        )
    }
}

// panicking operator sugar for internal use where orders are known equal

impl<'b> std::ops::Add<&'b CycloNum> for &CycloNum {
    type Output = CycloNum;
    fn add(self, rhs: &'b CycloNum) -> CycloNum {
        self.checked_add(rhs).expect("order mismatch")
    }
}

impl<'b> std::ops::Sub<&'b CycloNum> for &CycloNum {
    type Output = CycloNum;
    fn sub(self, rhs: &'b CycloNum) -> CycloNum {
        self.checked_sub(rhs).expect("order mismatch")
    }
}

impl<'b> std::ops::Mul<&'b CycloNum> for &CycloNum {
    type Output = CycloNum;
    fn mul(self, rhs: &'b CycloNum) -> CycloNum {
        self.checked_mul(rhs).expect("order mismatch")
    }
}

impl std::ops::Neg for &CycloNum {
    type Output = CycloNum;
    fn neg(self) -> CycloNum {
        CycloNum {
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl fmt::Debug for CycloNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CycloNum(n={}; {})", self.order, self)
    }
}

impl fmt::Display for CycloNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if first {
                first = false;
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let a = c.abs();
            if k == 0 {
                write!(f, "{a}")?;
            } else {
                if !a.is_one() {
                    write!(f, "{a}*")?;
                }
                if k == 1 {
                    write!(f, "z")?;
                } else {
                    write!(f, "z^{k}")?;
                }
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl Serialize for CycloNum {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut s = serializer.serialize_struct("CycloNum", 2)?;
        s.serialize_field("order", &self.order)?;
        let coeffs: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        s.serialize_field("coeffs", &coeffs)?;
        s.end()
    }
}

impl<'de> Deserialize<'de> for CycloNum {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            order: u32,
            coeffs: Vec<String>,
        }
        let raw = Raw::deserialize(deserializer)?;
        if raw.order == 0 {
            return Err(D::Error::custom("order must be positive"));
        }
        let coeffs: std::result::Result<Vec<Rational>, _> = raw
            .coeffs
            .iter()
            .map(|s| parse_rational(s).map_err(|e| D::Error::custom(e.to_string())))
            .collect();
        CycloNum::from_coeffs(raw.order, coeffs?).map_err(|e| D::Error::custom(e.to_string()))
    }
}

// dense polynomial helpers over Rational, constant term first, trimmed

fn poly_trim(p: &mut Vec<Rational>) {
    while p.last().map_or(false, |c| c.is_zero()) {
        p.pop();
    }
}

fn poly_sub(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); a.len().max(b.len())];
    for (i, c) in a.iter().enumerate() {
        out[i] += c;
    }
    for (i, c) in b.iter().enumerate() {
        out[i] -= c;
    }
    poly_trim(&mut out);
    out
}

fn poly_mul(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![Rational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if !y.is_zero() {
                out[i + j] += x * y;
            }
        }
    }
    poly_trim(&mut out);
    out
}

fn poly_divmod(a: &[Rational], b: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
    assert!(!b.is_empty(), "division by zero polynomial");
    let mut r = a.to_vec();
    poly_trim(&mut r);
    let db = b.len() - 1;
    if r.len() <= db {
        return (vec![], r);
    }
    let lead_inv = b[db].recip();
    let dq = r.len() - 1 - db;
    let mut q = vec![Rational::zero(); dq + 1];
    for i in (0..=dq).rev() {
        let c = &r[i + db] * &lead_inv;
        if !c.is_zero() {
            for (j, bj) in b.iter().enumerate() {
                let t = bj * &c;
                r[i + j] -= t;
            }
        }
        q[i] = c;
    }
    poly_trim(&mut r);
    poly_trim(&mut q);
    (q, r)
}

// high precision trig at rational multiples of 2 pi

/// First 64 decimal digits of pi; enough for the 50-digit cap plus guards.
const PI_DIGITS: &str = "3.1415926535897932384626433832795028841971693993751058209749445923";

fn pi_rational() -> Rational {
    static PI: OnceLock<Rational> = OnceLock::new();
    PI.get_or_init(|| {
        let digits = PI_DIGITS.replace('.', "");
        let num: BigInt = digits.parse().unwrap();
        let den = BigInt::from(10u32).pow(digits.len() as u32 - 1);
        Rational::new(num, den)
    })
    .clone()
}

/// (cos, sin)(2 pi k / n) for k in 0..n, each accurate to 10^(-digits).
fn trig_table(n: u32, digits: u32) -> Arc<Vec<(Rational, Rational)>> {
    static CACHE: OnceLock<Mutex<HashMap<(u32, u32), Arc<Vec<(Rational, Rational)>>>>> =
        OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut map = cache.lock().unwrap();
    map.entry((n, digits))
        .or_insert_with(|| {
            let eps = pow_i64(&rat_int(10), -(digits as i64 + 2));
            let mut table = Vec::with_capacity(n as usize);
            for k in 0..n {
                // reduce angle to [-pi, pi]
                let ks = if 2 * k > n { k as i64 - n as i64 } else { k as i64 };
                let theta = pi_rational() * rat(2 * ks, n as i64);
                table.push(cos_sin(&theta, &eps));
            }
            Arc::new(table)
        })
        .clone()
}

/// Taylor evaluation of (cos t, sin t) with |t| <= pi; terms added until the
/// next term is below eps, which bounds the alternating-series tail.
fn cos_sin(theta: &Rational, eps: &Rational) -> (Rational, Rational) {
    let t2 = theta * theta;
    let mut cos = Rational::zero();
    let mut term = Rational::one();
    let mut j: i64 = 0;
    loop {
        cos += &term;
        // next term: -term * t^2 / ((2j+1)(2j+2))
        term = -(&term * &t2) / rat_int((2 * j + 1) * (2 * j + 2));
        j += 1;
        if term.abs() < *eps {
            break;
        }
    }
    let mut sin = Rational::zero();
    let mut term = theta.clone();
    let mut j: i64 = 0;
    loop {
        sin += &term;
        term = -(&term * &t2) / rat_int((2 * j + 2) * (2 * j + 3));
        j += 1;
        if term.abs() < *eps {
            break;
        }
    }
    (cos, sin)
}

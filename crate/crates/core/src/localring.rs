//! Truncated complete discrete valuation rings.
//!
//! Two models are supported, both with residue field `F_p`:
//!
//! * characteristic zero: `Z/p^N`, a finite-precision model of `Z_p` with uniformizer `p`;
//! * positive characteristic: `F_p[t]/(t^N)`, a model of `F_p[[t]]` with uniformizer `t`.
//!
//! Every element is held in canonical reduced form, so equality is structural.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::{BigInt, BigUint, RandBigInt, Sign};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RingError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("precision must be at least 1")]
    ZeroPrecision,
    #[error("ring mismatch: {0} vs {1}")]
    Mismatch(String, String),
    #[error("element is not a unit")]
    NonUnit,
    #[error("generator list is empty")]
    EmptyGenerators,
    #[error("additive closure contains no ideal pi^k O with k below the precision")]
    NotFiniteIndex,
    #[error("malformed element: {0}")]
    Parse(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Characteristic {
    Zero,
    Positive,
}

/// Valuation of an element in a ring known modulo `pi^N`.
///
/// `AtLeastPrecision` is reported for the zero of the model, whose true valuation
/// cannot be observed at this precision. It orders above every finite value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Valuation {
    Finite(u32),
    AtLeastPrecision,
}

impl Valuation {
    pub fn finite(self) -> Option<u32> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::AtLeastPrecision => None,
        }
    }

    /// `true` when the valuation is known to be at least `k`.
    pub fn at_least(self, k: u32) -> bool {
        match self {
            Valuation::Finite(v) => v >= k,
            Valuation::AtLeastPrecision => true,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::AtLeastPrecision => f.write_str(">=N"),
        }
    }
}

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Wire form of a ring descriptor: `{"char": "zero"|"positive", "p": int, "precision": int}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RingSpec {
    #[serde(rename = "char")]
    pub characteristic: Characteristic,
    pub p: u32,
    pub precision: u32,
}

struct RingInner {
    characteristic: Characteristic,
    p: u32,
    precision: u32,
    // p^precision; only meaningful in characteristic zero
    modulus: BigUint,
}

/// A truncated DVR `O / pi^N O`. Cheap to clone.
#[derive(Clone, Serialize, Deserialize)]
#[serde(try_from = "RingSpec", into = "RingSpec")]
pub struct RingDescriptor {
    inner: Arc<RingInner>,
}

impl TryFrom<RingSpec> for RingDescriptor {
    type Error = RingError;

    fn try_from(spec: RingSpec) -> Result<Self, RingError> {
        make_ring(spec.characteristic, spec.p, spec.precision)
    }
}

impl From<RingDescriptor> for RingSpec {
    fn from(r: RingDescriptor) -> Self {
        r.spec()
    }
}

pub fn make_ring(
    characteristic: Characteristic,
    p: u32,
    precision: u32,
) -> Result<RingDescriptor, RingError> {
    if !is_prime(p as u64) {
        return Err(RingError::NotPrime(p as u64));
    }
    if precision == 0 {
        return Err(RingError::ZeroPrecision);
    }
    let modulus = match characteristic {
        Characteristic::Zero => BigUint::from(p).pow(precision),
        Characteristic::Positive => BigUint::zero(),
    };
    Ok(RingDescriptor {
        inner: Arc::new(RingInner {
            characteristic,
            p,
            precision,
            modulus,
        }),
    })
}

impl PartialEq for RingDescriptor {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner) || self.spec() == other.spec()
    }
}

impl Eq for RingDescriptor {}

impl std::hash::Hash for RingDescriptor {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.inner.characteristic.hash(state);
        self.inner.p.hash(state);
        self.inner.precision.hash(state);
    }
}

impl fmt::Debug for RingDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for RingDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.inner.characteristic {
            Characteristic::Zero => write!(f, "Z/{}^{}", self.inner.p, self.inner.precision),
            Characteristic::Positive => {
                write!(f, "F_{}[t]/(t^{})", self.inner.p, self.inner.precision)
            }
        }
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
enum Repr {
    Int(BigUint),
    // exactly `precision` coefficients, each < p
    Poly(Vec<u32>),
}

/// An element of a truncated DVR.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RingElem {
    ring: RingDescriptor,
    repr: Repr,
}

impl RingDescriptor {
    pub fn characteristic(&self) -> Characteristic {
        self.inner.characteristic
    }

    pub fn p(&self) -> u32 {
        self.inner.p
    }

    pub fn precision(&self) -> u32 {
        self.inner.precision
    }

    pub fn spec(&self) -> RingSpec {
        RingSpec {
            characteristic: self.inner.characteristic,
            p: self.inner.p,
            precision: self.inner.precision,
        }
    }

    /// `p^N` for characteristic zero rings, `None` otherwise.
    pub fn modulus(&self) -> Option<&BigUint> {
        match self.inner.characteristic {
            Characteristic::Zero => Some(&self.inner.modulus),
            Characteristic::Positive => None,
        }
    }

    /// Number of elements of the model, `p^N` in both characteristics.
    pub fn cardinality(&self) -> BigUint {
        BigUint::from(self.inner.p).pow(self.inner.precision)
    }

    fn elem(&self, repr: Repr) -> RingElem {
        RingElem {
            ring: self.clone(),
            repr,
        }
    }

    pub fn zero(&self) -> RingElem {
        match self.inner.characteristic {
            Characteristic::Zero => self.elem(Repr::Int(BigUint::zero())),
            Characteristic::Positive => {
                self.elem(Repr::Poly(vec![0; self.inner.precision as usize]))
            }
        }
    }

    pub fn one(&self) -> RingElem {
        self.from_i64(1)
    }

    /// Image of an integer under `Z -> O / pi^N`.
    pub fn from_i64(&self, x: i64) -> RingElem {
        self.from_bigint(&BigInt::from(x))
    }

    pub fn from_bigint(&self, x: &BigInt) -> RingElem {
        match self.inner.characteristic {
            Characteristic::Zero => {
                let m = BigInt::from_biguint(Sign::Plus, self.inner.modulus.clone());
                let r = x.mod_floor(&m);
                self.elem(Repr::Int(r.to_biguint().expect("nonnegative residue")))
            }
            Characteristic::Positive => {
                let p = BigInt::from(self.inner.p);
                let c = x.mod_floor(&p).to_u32().expect("residue below p");
                let mut coeffs = vec![0; self.inner.precision as usize];
                coeffs[0] = c;
                self.elem(Repr::Poly(coeffs))
            }
        }
    }

    pub fn from_biguint(&self, x: &BigUint) -> RingElem {
        self.from_bigint(&BigInt::from_biguint(Sign::Plus, x.clone()))
    }

    /// Truncated power series with the given coefficients (positive characteristic), or
    /// the `p`-adic digit expansion `sum c_i p^i` (characteristic zero).
    pub fn from_coeffs(&self, coeffs: &[i64]) -> RingElem {
        match self.inner.characteristic {
            Characteristic::Positive => {
                let p = self.inner.p as i64;
                let mut out = vec![0; self.inner.precision as usize];
                for (slot, &c) in out.iter_mut().zip(coeffs) {
                    *slot = c.rem_euclid(p) as u32;
                }
                self.elem(Repr::Poly(out))
            }
            Characteristic::Zero => {
                let mut acc = BigInt::zero();
                let p = BigInt::from(self.inner.p);
                for &c in coeffs.iter().rev() {
                    acc = acc * &p + BigInt::from(c);
                }
                self.from_bigint(&acc)
            }
        }
    }

    pub fn uniformizer(&self) -> RingElem {
        self.pi_pow(1)
    }

    /// `pi^k`, which is zero in the model once `k >= N`.
    pub fn pi_pow(&self, k: u32) -> RingElem {
        if k >= self.inner.precision {
            return self.zero();
        }
        match self.inner.characteristic {
            Characteristic::Zero => self.elem(Repr::Int(BigUint::from(self.inner.p).pow(k))),
            Characteristic::Positive => {
                let mut c = vec![0; self.inner.precision as usize];
                c[k as usize] = 1;
                self.elem(Repr::Poly(c))
            }
        }
    }

    /// Uniformly random element of the model.
    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> RingElem {
        match self.inner.characteristic {
            Characteristic::Zero => {
                let x = rng.gen_biguint_below(&self.inner.modulus);
                self.elem(Repr::Int(x))
            }
            Characteristic::Positive => {
                let p = self.inner.p;
                let c = (0..self.inner.precision)
                    .map(|_| rng.gen_range(0..p))
                    .collect();
                self.elem(Repr::Poly(c))
            }
        }
    }

    /// Uniformly random unit.
    pub fn random_unit<R: Rng + ?Sized>(&self, rng: &mut R) -> RingElem {
        loop {
            let x = self.random(rng);
            if x.is_unit() {
                return x;
            }
        }
    }

    /// Every element of the model, in increasing payload order. Only sensible for tiny rings.
    pub fn elements(&self) -> Vec<RingElem> {
        let count = self
            .cardinality()
            .to_u64()
            .expect("ring too large to enumerate");
        match self.inner.characteristic {
            Characteristic::Zero => (0..count)
                .map(|x| self.elem(Repr::Int(BigUint::from(x))))
                .collect(),
            Characteristic::Positive => {
                let p = self.inner.p as u64;
                (0..count)
                    .map(|mut x| {
                        let c = (0..self.inner.precision)
                            .map(|_| {
                                let d = (x % p) as u32;
                                x /= p;
                                d
                            })
                            .collect();
                        self.elem(Repr::Poly(c))
                    })
                    .collect()
            }
        }
    }

    /// Parses the wire form of an element: a decimal string or integer in characteristic
    /// zero, a coefficient array (lowest degree first) in positive characteristic.
    pub fn parse_elem(&self, v: &Value) -> Result<RingElem, RingError> {
        match (self.inner.characteristic, v) {
            (Characteristic::Zero, Value::String(s)) => {
                let x: BigInt = s
                    .trim()
                    .parse()
                    .map_err(|_| RingError::Parse(s.clone()))?;
                Ok(self.from_bigint(&x))
            }
            (Characteristic::Zero, Value::Number(n)) => n
                .as_i64()
                .map(|x| self.from_i64(x))
                .ok_or_else(|| RingError::Parse(n.to_string())),
            (Characteristic::Positive, Value::Array(items)) => {
                if items.len() > self.inner.precision as usize {
                    return Err(RingError::Parse(format!(
                        "{} coefficients exceed precision {}",
                        items.len(),
                        self.inner.precision
                    )));
                }
                let coeffs = items
                    .iter()
                    .map(|c| c.as_i64().ok_or_else(|| RingError::Parse(c.to_string())))
                    .collect::<Result<Vec<_>, _>>()?;
                Ok(self.from_coeffs(&coeffs))
            }
            (Characteristic::Positive, Value::Number(n)) => n
                .as_i64()
                .map(|x| self.from_i64(x))
                .ok_or_else(|| RingError::Parse(n.to_string())),
            (_, other) => Err(RingError::Parse(other.to_string())),
        }
    }

    fn check(&self, other: &RingDescriptor) -> Result<(), RingError> {
        if self == other {
            Ok(())
        } else {
            Err(RingError::Mismatch(self.to_string(), other.to_string()))
        }
    }
}

impl RingElem {
    pub fn ring(&self) -> &RingDescriptor {
        &self.ring
    }

    pub fn is_zero(&self) -> bool {
        match &self.repr {
            Repr::Int(x) => x.is_zero(),
            Repr::Poly(c) => c.iter().all(|&d| d == 0),
        }
    }

    pub fn is_one(&self) -> bool {
        match &self.repr {
            Repr::Int(x) => x.is_one(),
            Repr::Poly(c) => c[0] == 1 && c[1..].iter().all(|&d| d == 0),
        }
    }

    pub fn valuation(&self) -> Valuation {
        match &self.repr {
            Repr::Int(x) => {
                if x.is_zero() {
                    return Valuation::AtLeastPrecision;
                }
                let p = BigUint::from(self.ring.p());
                let mut v = 0;
                let mut y = x.clone();
                loop {
                    let (q, r) = y.div_rem(&p);
                    if !r.is_zero() {
                        break;
                    }
                    y = q;
                    v += 1;
                }
                Valuation::Finite(v)
            }
            Repr::Poly(c) => match c.iter().position(|&d| d != 0) {
                Some(i) => Valuation::Finite(i as u32),
                None => Valuation::AtLeastPrecision,
            },
        }
    }

    pub fn is_unit(&self) -> bool {
        self.valuation() == Valuation::Finite(0)
    }

    /// Residue class modulo `pi`, as an integer in `0..p`.
    pub fn residue(&self) -> u32 {
        match &self.repr {
            Repr::Int(x) => (x % self.ring.p()).to_u32().expect("residue below p"),
            Repr::Poly(c) => c[0],
        }
    }

    /// Canonical least nonnegative representative (characteristic zero only).
    pub fn to_biguint(&self) -> Option<&BigUint> {
        match &self.repr {
            Repr::Int(x) => Some(x),
            Repr::Poly(_) => None,
        }
    }

    /// Coefficient list, lowest degree first (positive characteristic only).
    pub fn coeffs(&self) -> Option<&[u32]> {
        match &self.repr {
            Repr::Poly(c) => Some(c),
            Repr::Int(_) => None,
        }
    }

    pub fn checked_add(&self, other: &RingElem) -> Result<RingElem, RingError> {
        self.ring.check(&other.ring)?;
        let repr = match (&self.repr, &other.repr) {
            (Repr::Int(a), Repr::Int(b)) => Repr::Int((a + b) % &self.ring.inner.modulus),
            (Repr::Poly(a), Repr::Poly(b)) => {
                let p = self.ring.p();
                Repr::Poly(a.iter().zip(b).map(|(x, y)| (x + y) % p).collect())
            }
            _ => unreachable!("payload kind follows the ring"),
        };
        Ok(self.ring.elem(repr))
    }

    pub fn checked_sub(&self, other: &RingElem) -> Result<RingElem, RingError> {
        self.ring.check(&other.ring)?;
        self.checked_add(&other.neg_ref())
    }

    pub fn checked_mul(&self, other: &RingElem) -> Result<RingElem, RingError> {
        self.ring.check(&other.ring)?;
        let repr = match (&self.repr, &other.repr) {
            (Repr::Int(a), Repr::Int(b)) => Repr::Int((a * b) % &self.ring.inner.modulus),
            (Repr::Poly(a), Repr::Poly(b)) => {
                let p = self.ring.p() as u64;
                let n = a.len();
                let mut out = vec![0u64; n];
                for (i, &x) in a.iter().enumerate() {
                    if x == 0 {
                        continue;
                    }
                    for (j, &y) in b[..n - i].iter().enumerate() {
                        out[i + j] = (out[i + j] + x as u64 * y as u64) % p;
                    }
                }
                Repr::Poly(out.into_iter().map(|d| d as u32).collect())
            }
            _ => unreachable!("payload kind follows the ring"),
        };
        Ok(self.ring.elem(repr))
    }

    fn neg_ref(&self) -> RingElem {
        let repr = match &self.repr {
            Repr::Int(a) => {
                if a.is_zero() {
                    Repr::Int(BigUint::zero())
                } else {
                    Repr::Int(&self.ring.inner.modulus - a)
                }
            }
            Repr::Poly(c) => {
                let p = self.ring.p();
                Repr::Poly(c.iter().map(|&d| (p - d) % p).collect())
            }
        };
        self.ring.elem(repr)
    }

    pub fn pow(&self, mut e: u64) -> RingElem {
        if let Repr::Int(a) = &self.repr {
            return self
                .ring
                .elem(Repr::Int(a.modpow(&BigUint::from(e), &self.ring.inner.modulus)));
        }
        let mut base = self.clone();
        let mut acc = self.ring.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse of a unit.
    pub fn invert(&self) -> Result<RingElem, RingError> {
        if !self.is_unit() {
            return Err(RingError::NonUnit);
        }
        let repr = match &self.repr {
            Repr::Int(a) => Repr::Int(
                a.modinv(&self.ring.inner.modulus)
                    .ok_or(RingError::NonUnit)?,
            ),
            Repr::Poly(a) => {
                let p = self.ring.p() as u64;
                let n = a.len();
                let a0_inv = mod_inverse_u64(a[0] as u64, p);
                let mut b = vec![0u64; n];
                b[0] = a0_inv;
                for k in 1..n {
                    let s: u64 = (1..=k).fold(0, |s, i| (s + a[i] as u64 * b[k - i]) % p);
                    b[k] = (p - s) % p * a0_inv % p;
                }
                Repr::Poly(b.into_iter().map(|d| d as u32).collect())
            }
        };
        Ok(self.ring.elem(repr))
    }

    /// Splits `self = pi^v * u`. The returned `u` is the representative obtained by
    /// shifting out `v` digits, so it is only meaningful modulo `pi^(N - v)`.
    /// Zero splits as `(AtLeastPrecision, 0)`.
    pub fn split_valuation(&self) -> (Valuation, RingElem) {
        let v = self.valuation();
        let Valuation::Finite(k) = v else {
            return (v, self.clone());
        };
        let repr = match &self.repr {
            Repr::Int(a) => Repr::Int(a / BigUint::from(self.ring.p()).pow(k)),
            Repr::Poly(c) => {
                let mut out = c[k as usize..].to_vec();
                out.resize(c.len(), 0);
                Repr::Poly(out)
            }
        };
        (v, self.ring.elem(repr))
    }

    /// Wire form: decimal string or coefficient array.
    pub fn to_json(&self) -> Value {
        match &self.repr {
            Repr::Int(a) => Value::String(a.to_string()),
            Repr::Poly(c) => Value::Array(c.iter().map(|&d| Value::from(d)).collect()),
        }
    }
}

fn mod_inverse_u64(a: u64, p: u64) -> u64 {
    // p is prime and a is nonzero mod p
    let mut acc = 1u64;
    let mut base = a % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    acc
}

impl fmt::Display for RingElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.repr {
            Repr::Int(a) => write!(f, "{a}"),
            Repr::Poly(c) => {
                let mut first = true;
                for (i, &d) in c.iter().enumerate().filter(|(_, &d)| d != 0) {
                    if !first {
                        f.write_str(" + ")?;
                    }
                    first = false;
                    match i {
                        0 => write!(f, "{d}")?,
                        1 if d == 1 => f.write_str("t")?,
                        1 => write!(f, "{d}t")?,
                        _ if d == 1 => write!(f, "t^{i}")?,
                        _ => write!(f, "{d}t^{i}")?,
                    }
                }
                if first {
                    f.write_str("0")?;
                }
                Ok(())
            }
        }
    }
}

impl fmt::Debug for RingElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} in {}", self, self.ring)
    }
}

// Operator forms panic on mismatched rings; the `checked_*` methods report it instead.
macro_rules! forward_binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl $trait<&RingElem> for &RingElem {
            type Output = RingElem;
            fn $method(self, rhs: &RingElem) -> RingElem {
                self.$checked(rhs).expect("operands from different rings")
            }
        }
        impl $trait<RingElem> for RingElem {
            type Output = RingElem;
            fn $method(self, rhs: RingElem) -> RingElem {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&RingElem> for RingElem {
            type Output = RingElem;
            fn $method(self, rhs: &RingElem) -> RingElem {
                (&self).$method(rhs)
            }
        }
    };
}

forward_binop!(Add, add, checked_add);
forward_binop!(Sub, sub, checked_sub);
forward_binop!(Mul, mul, checked_mul);

impl Neg for &RingElem {
    type Output = RingElem;
    fn neg(self) -> RingElem {
        self.neg_ref()
    }
}

impl Neg for RingElem {
    type Output = RingElem;
    fn neg(self) -> RingElem {
        self.neg_ref()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Neg,
}

/// Single entry point for the four ring operations. `Neg` ignores `b` beyond the ring check.
pub fn ring_arith(op: ArithOp, a: &RingElem, b: &RingElem) -> Result<RingElem, RingError> {
    match op {
        ArithOp::Add => a.checked_add(b),
        ArithOp::Sub => a.checked_sub(b),
        ArithOp::Mul => a.checked_mul(b),
        ArithOp::Neg => {
            a.ring.check(&b.ring)?;
            Ok(-a)
        }
    }
}

/// Smallest `k < N` with `pi^k O` contained in the additive subgroup generated by `gens`.
///
/// In characteristic zero the closure of a single `g` is `p^val(g) Z/p^N`, so the level is the
/// minimum valuation. In positive characteristic the additive closure is the `F_p`-span of the
/// coefficient vectors, and the level is read off a row echelon form.
pub fn additive_subgroup_level(gens: &[RingElem]) -> Result<u32, RingError> {
    let first = gens.first().ok_or(RingError::EmptyGenerators)?;
    let ring = first.ring();
    for g in gens {
        ring.check(g.ring())?;
    }
    match ring.characteristic() {
        Characteristic::Zero => gens
            .iter()
            .filter_map(|g| g.valuation().finite())
            .min()
            .ok_or(RingError::NotFiniteIndex),
        Characteristic::Positive => {
            let n = ring.precision() as usize;
            let p = ring.p() as u64;
            // echelon rows keyed by leading (lowest) index
            let mut pivots: Vec<Option<Vec<u64>>> = vec![None; n];
            for g in gens {
                let mut v: Vec<u64> = g.coeffs().unwrap().iter().map(|&d| d as u64).collect();
                while let Some(lead) = v.iter().position(|&d| d != 0) {
                    match &pivots[lead] {
                        Some(row) => {
                            let f = v[lead];
                            for (x, r) in v.iter_mut().zip(row) {
                                *x = (*x + p * p - f * r % p) % p;
                            }
                        }
                        None => {
                            let inv = mod_inverse_u64(v[lead], p);
                            for x in v.iter_mut() {
                                *x = *x * inv % p;
                            }
                            pivots[lead] = Some(v);
                            break;
                        }
                    }
                }
            }
            // The span contains t^j for all j >= k iff every index >= k is a pivot.
            let mut k = n;
            while k > 0 && pivots[k - 1].is_some() {
                k -= 1;
            }
            if k == n {
                Err(RingError::NotFiniteIndex)
            } else {
                Ok(k as u32)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::collections::HashSet;

    fn z(p: u32, n: u32) -> RingDescriptor {
        make_ring(Characteristic::Zero, p, n).unwrap()
    }

    fn fp(p: u32, n: u32) -> RingDescriptor {
        make_ring(Characteristic::Positive, p, n).unwrap()
    }

    #[test]
    fn make_ring_validates() {
        assert_eq!(z(2, 16).modulus().unwrap(), &BigUint::from(65536u32));
        assert_eq!(fp(3, 8).to_string(), "F_3[t]/(t^8)");
        assert_eq!(
            make_ring(Characteristic::Zero, 4, 8).unwrap_err(),
            RingError::NotPrime(4)
        );
        assert_eq!(
            make_ring(Characteristic::Positive, 3, 0).unwrap_err(),
            RingError::ZeroPrecision
        );
    }

    #[test]
    fn descriptor_json() {
        let r = fp(3, 8);
        let s = serde_json::to_string(&r).unwrap();
        assert_eq!(s, r#"{"char":"positive","p":3,"precision":8}"#);
        let back: RingDescriptor = serde_json::from_str(&s).unwrap();
        assert_eq!(back, r);
        assert!(serde_json::from_str::<RingDescriptor>(r#"{"char":"zero","p":9,"precision":2}"#)
            .is_err());
    }

    #[test]
    fn arithmetic_examples() {
        let r = z(2, 16);
        let a = r.from_i64(1);
        let b = r.from_i64(65535);
        assert!((&a + &b).is_zero());
        assert_eq!(&r.from_i64(2) * &r.from_i64(2), r.from_i64(4));

        let s = fp(3, 8);
        let t = s.uniformizer();
        assert!((&t * &s.pi_pow(7)).is_zero());
        assert_eq!(s.from_i64(-1), s.from_i64(2));
        assert!(ring_arith(ArithOp::Add, &a, &t).is_err());
        assert_eq!(ring_arith(ArithOp::Neg, &a, &a).unwrap(), r.from_i64(-1));
    }

    #[test]
    fn valuation_examples() {
        let r = z(2, 16);
        assert_eq!(r.from_i64(4).valuation(), Valuation::Finite(2));
        assert_eq!(r.zero().valuation(), Valuation::AtLeastPrecision);
        assert_eq!(r.from_i64(6).valuation(), Valuation::Finite(1));
        let s = fp(5, 6);
        assert_eq!(s.from_coeffs(&[0, 0, 3]).valuation(), Valuation::Finite(2));
        assert!(Valuation::Finite(100) < Valuation::AtLeastPrecision);
    }

    // extended Euclid, independent of BigUint::modinv
    fn egcd_inverse(a: i64, m: i64) -> i64 {
        let (mut r0, mut r1, mut s0, mut s1) = (a, m, 1i64, 0i64);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (s0, s1) = (s1, s0 - q * s1);
        }
        assert_eq!(r0, 1);
        s0.rem_euclid(m)
    }

    #[test]
    fn invert_examples() {
        let r = z(2, 4);
        assert_eq!(r.one().invert().unwrap(), r.one());
        assert_eq!(egcd_inverse(3, 16), 11);
        assert_eq!(r.from_i64(3).invert().unwrap(), r.from_i64(11));
        assert_eq!(r.from_i64(2).invert().unwrap_err(), RingError::NonUnit);
        let s = fp(3, 8);
        assert_eq!(s.uniformizer().invert().unwrap_err(), RingError::NonUnit);
        let u = s.from_coeffs(&[2, 1, 0, 2, 1]);
        assert!((&u * &u.invert().unwrap()).is_one());
    }

    #[test]
    fn level_examples() {
        let r = z(3, 6);
        assert_eq!(additive_subgroup_level(&[r.from_i64(9)]).unwrap(), 2);
        let r = z(2, 16);
        assert_eq!(additive_subgroup_level(&[r.from_i64(6)]).unwrap(), 1);
        assert_eq!(
            additive_subgroup_level(&[r.zero()]).unwrap_err(),
            RingError::NotFiniteIndex
        );
        assert_eq!(
            additive_subgroup_level(&[]).unwrap_err(),
            RingError::EmptyGenerators
        );
    }

    #[test]
    fn level_positive_characteristic_uses_span() {
        let s = fp(3, 4);
        // span{t^2, t^3} contains t^2 O
        let gens = [s.pi_pow(2), s.pi_pow(3)];
        assert_eq!(additive_subgroup_level(&gens).unwrap(), 2);
        // span{t} alone is {0, t, 2t}: no ideal below precision
        assert_eq!(
            additive_subgroup_level(&[s.uniformizer()]).unwrap_err(),
            RingError::NotFiniteIndex
        );
        let gens = [s.from_coeffs(&[0, 1, 1]), s.pi_pow(2), s.pi_pow(3)];
        assert_eq!(additive_subgroup_level(&gens).unwrap(), 1);
    }

    fn brute_force_level(gens: &[RingElem]) -> Option<u32> {
        let ring = gens[0].ring().clone();
        let mut seen: HashSet<RingElem> = HashSet::new();
        let mut frontier = vec![ring.zero()];
        seen.insert(ring.zero());
        while let Some(x) = frontier.pop() {
            for g in gens {
                let y = &x + g;
                if seen.insert(y.clone()) {
                    frontier.push(y);
                }
            }
        }
        (0..ring.precision()).find(|&k| {
            // pi^k O = multiples of pi^k; enough to test the whole ideal
            ring.elements()
                .iter()
                .all(|e| seen.contains(&(e * &ring.pi_pow(k))))
        })
    }

    #[test]
    fn level_matches_brute_force_closure() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for (ring, count) in [(z(2, 8), 3), (z(3, 5), 2), (z(5, 3), 2), (fp(2, 6), 3), (fp(3, 4), 4)] {
            for _ in 0..25 {
                let gens: Vec<_> = (0..count).map(|_| ring.random(&mut rng)).collect();
                let want = brute_force_level(&gens);
                assert_eq!(additive_subgroup_level(&gens).ok(), want, "{ring} {gens:?}");
            }
        }
    }

    #[test]
    fn positive_characteristic_torsion() {
        let s = fp(5, 7);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..50 {
            let a = s.random(&mut rng);
            assert!((&s.from_i64(5) * &a).is_zero());
        }
    }

    #[test]
    fn parse_and_render() {
        let r = z(5, 3);
        assert_eq!(r.parse_elem(&Value::from("-1")).unwrap(), r.from_i64(124));
        assert_eq!(r.from_i64(7).to_json(), Value::from("7"));
        let s = fp(3, 3);
        let e = s.parse_elem(&serde_json::json!([1, 0, 2])).unwrap();
        assert_eq!(e.to_json(), serde_json::json!([1, 0, 2]));
        assert_eq!(e.to_string(), "1 + 2t^2");
        assert!(s.parse_elem(&serde_json::json!([1, 0, 2, 1])).is_err());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn valuation_is_additive(a in 1u64..(1 << 16), b in 1u64..(1 << 16)) {
                let r = z(2, 16);
                let (x, y) = (r.from_i64(a as i64), r.from_i64(b as i64));
                let (vx, vy) = (x.valuation().finite().unwrap(), y.valuation().finite().unwrap());
                prop_assume!(vx + vy < 16);
                prop_assert_eq!((&x * &y).valuation(), Valuation::Finite(vx + vy));
            }

            #[test]
            fn valuation_is_additive_in_power_series(
                a in proptest::collection::vec(0u32..3, 6),
                b in proptest::collection::vec(0u32..3, 6),
            ) {
                let s = fp(3, 6);
                let to = |v: &Vec<u32>| s.from_coeffs(&v.iter().map(|&d| d as i64).collect::<Vec<_>>());
                let (x, y) = (to(&a), to(&b));
                if let (Some(vx), Some(vy)) = (x.valuation().finite(), y.valuation().finite()) {
                    prop_assume!(vx + vy < 6);
                    prop_assert_eq!((&x * &y).valuation(), Valuation::Finite(vx + vy));
                }
            }

            #[test]
            fn invert_is_an_involution(a in 0u64..(7u64.pow(6))) {
                let r = z(7, 6);
                let x = r.from_i64(a as i64);
                prop_assume!(x.is_unit());
                let y = x.invert().unwrap();
                prop_assert!((&x * &y).is_one());
                prop_assert_eq!(y.invert().unwrap(), x);
            }
        }
    }
}

//! Matrices over a truncated DVR, words in elementary unipotents, and the explicit
//! factorizations and commutator identities of `SL_n(O)`.
//!
//! Matrix indices passed to [`RMatrix::get`] are zero-based; elementary letters use the
//! one-based `(i, j)` labels of `E_{i,j}(x)`.

use std::fmt;

use rand::Rng;
use serde_json::{json, Value};
use thiserror::Error;

use crate::hensel::{unit_with_unit_square_minus_one, HenselError};
use crate::localring::{RingDescriptor, RingElem, RingError, Valuation};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MatError {
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("matrix is not invertible over the ring")]
    NonInvertible,
    #[error("determinant is {0}, not 1")]
    NotSL(String),
    #[error("no pivot of known unit status in column {0}")]
    PrecisionLoss(usize),
    #[error("invalid elementary letter E_{{{0},{1}}} in dimension {2}")]
    InvalidLetter(usize, usize, usize),
    #[error("{0}")]
    Precondition(String),
    #[error("residue field F_{0} has at most 3 elements")]
    ResidueFieldTooSmall(u32),
    #[error("malformed matrix: {0}")]
    Parse(String),
}

impl From<HenselError> for MatError {
    fn from(e: HenselError) -> Self {
        match e {
            HenselError::Ring(r) => MatError::Ring(r),
            HenselError::ResidueFieldTooSmall(p) => MatError::ResidueFieldTooSmall(p),
            other => MatError::Precondition(other.to_string()),
        }
    }
}

/// Square matrix over a truncated DVR, row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RMatrix {
    ring: RingDescriptor,
    n: usize,
    entries: Vec<RingElem>,
}

impl RMatrix {
    pub fn identity(ring: &RingDescriptor, n: usize) -> Self {
        let entries = (0..n * n)
            .map(|k| if k % (n + 1) == 0 { ring.one() } else { ring.zero() })
            .collect();
        Self {
            ring: ring.clone(),
            n,
            entries,
        }
    }

    pub fn from_rows(ring: &RingDescriptor, rows: Vec<Vec<RingElem>>) -> Result<Self, MatError> {
        let n = rows.len();
        let mut entries = Vec::with_capacity(n * n);
        for row in rows {
            if row.len() != n {
                return Err(MatError::DimensionMismatch(n, row.len()));
            }
            for e in row {
                if e.ring() != ring {
                    return Err(RingError::Mismatch(ring.to_string(), e.ring().to_string()).into());
                }
                entries.push(e);
            }
        }
        Ok(Self {
            ring: ring.clone(),
            n,
            entries,
        })
    }

    pub fn from_ints(ring: &RingDescriptor, rows: &[&[i64]]) -> Result<Self, MatError> {
        Self::from_rows(
            ring,
            rows.iter()
                .map(|r| r.iter().map(|&x| ring.from_i64(x)).collect())
                .collect(),
        )
    }

    pub fn diagonal(ring: &RingDescriptor, diag: &[RingElem]) -> Self {
        let mut m = Self::identity(ring, diag.len());
        for (k, d) in diag.iter().enumerate() {
            m.set(k, k, d.clone());
        }
        m
    }

    /// `E_{i,j}(x)`: identity plus `x` at one-based position `(i, j)`, `i != j`.
    pub fn elementary(n: usize, i: usize, j: usize, x: &RingElem) -> Result<Self, MatError> {
        if i == j || i == 0 || j == 0 || i > n || j > n {
            return Err(MatError::InvalidLetter(i, j, n));
        }
        let mut m = Self::identity(x.ring(), n);
        m.set(i - 1, j - 1, x.clone());
        Ok(m)
    }

    /// Uniformly random element of `SL_n` of the model: a random matrix with unit determinant,
    /// first row rescaled by the inverse determinant.
    pub fn random_sl<R: Rng + ?Sized>(ring: &RingDescriptor, n: usize, rng: &mut R) -> Self {
        loop {
            let entries = (0..n * n).map(|_| ring.random(rng)).collect();
            let mut m = Self {
                ring: ring.clone(),
                n,
                entries,
            };
            let d = m.det();
            if let Ok(inv) = d.invert() {
                for c in 0..n {
                    let v = m.get(0, c) * &inv;
                    m.set(0, c, v);
                }
                return m;
            }
        }
    }

    pub fn ring(&self) -> &RingDescriptor {
        &self.ring
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, r: usize, c: usize) -> &RingElem {
        &self.entries[r * self.n + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: RingElem) {
        self.entries[r * self.n + c] = v;
    }

    pub fn is_identity(&self) -> bool {
        (0..self.n).all(|r| {
            (0..self.n).all(|c| {
                let e = self.get(r, c);
                if r == c {
                    e.is_one()
                } else {
                    e.is_zero()
                }
            })
        })
    }

    fn check(&self, other: &RMatrix) -> Result<(), MatError> {
        if self.n != other.n {
            return Err(MatError::DimensionMismatch(self.n, other.n));
        }
        if self.ring != other.ring {
            return Err(RingError::Mismatch(self.ring.to_string(), other.ring.to_string()).into());
        }
        Ok(())
    }

    pub fn mul(&self, other: &RMatrix) -> Result<RMatrix, MatError> {
        self.check(other)?;
        let n = self.n;
        let mut entries = Vec::with_capacity(n * n);
        for r in 0..n {
            for c in 0..n {
                let mut acc = self.ring.zero();
                for k in 0..n {
                    let a = self.get(r, k);
                    if a.is_zero() {
                        continue;
                    }
                    acc = &acc + &(a * other.get(k, c));
                }
                entries.push(acc);
            }
        }
        Ok(RMatrix {
            ring: self.ring.clone(),
            n,
            entries,
        })
    }

    /// Determinant by cofactor expansion along the first row. Exponential in `n`; the
    /// matrices handled here are small.
    pub fn det(&self) -> RingElem {
        let idx: Vec<usize> = (0..self.n).collect();
        self.minor_det(&idx, 0)
    }

    fn minor_det(&self, cols: &[usize], row: usize) -> RingElem {
        match cols.len() {
            0 => self.ring.one(),
            1 => self.get(row, cols[0]).clone(),
            2 => {
                &(self.get(row, cols[0]) * self.get(row + 1, cols[1]))
                    - &(self.get(row, cols[1]) * self.get(row + 1, cols[0]))
            }
            _ => {
                let mut acc = self.ring.zero();
                for (k, &c) in cols.iter().enumerate() {
                    let a = self.get(row, c);
                    if a.is_zero() {
                        continue;
                    }
                    let rest: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
                    let term = a * &self.minor_det(&rest, row + 1);
                    acc = if k % 2 == 0 { &acc + &term } else { &acc - &term };
                }
                acc
            }
        }
    }

    /// Gauss-Jordan inverse. An invertible matrix over a local ring always has a unit pivot in
    /// each column among the remaining rows.
    pub fn inverse(&self) -> Result<RMatrix, MatError> {
        let n = self.n;
        let mut a = self.clone();
        let mut inv = RMatrix::identity(&self.ring, n);
        for col in 0..n {
            let pivot = (col..n)
                .find(|&r| a.get(r, col).is_unit())
                .ok_or(MatError::NonInvertible)?;
            if pivot != col {
                a.swap_rows(pivot, col);
                inv.swap_rows(pivot, col);
            }
            let s = a.get(col, col).invert()?;
            a.scale_row(col, &s);
            inv.scale_row(col, &s);
            for r in 0..n {
                if r == col || a.get(r, col).is_zero() {
                    continue;
                }
                let f = a.get(r, col).clone();
                a.add_row_multiple(r, col, &-&f);
                inv.add_row_multiple(r, col, &-&f);
            }
        }
        Ok(inv)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        for c in 0..self.n {
            self.entries.swap(a * self.n + c, b * self.n + c);
        }
    }

    fn scale_row(&mut self, r: usize, s: &RingElem) {
        for c in 0..self.n {
            let v = self.get(r, c) * s;
            self.set(r, c, v);
        }
    }

    /// row `dst` += f * row `src`
    fn add_row_multiple(&mut self, dst: usize, src: usize, f: &RingElem) {
        for c in 0..self.n {
            let v = self.get(dst, c) + &(f * self.get(src, c));
            self.set(dst, c, v);
        }
    }

    /// column `dst` += f * column `src`
    fn add_col_multiple(&mut self, dst: usize, src: usize, f: &RingElem) {
        for r in 0..self.n {
            let v = self.get(r, dst) + &(self.get(r, src) * f);
            self.set(r, dst, v);
        }
    }

    /// `A B A^-1 B^-1`.
    pub fn commutator(&self, other: &RMatrix) -> Result<RMatrix, MatError> {
        self.check(other)?;
        let ai = self.inverse()?;
        let bi = other.inverse()?;
        self.mul(other)?.mul(&ai)?.mul(&bi)
    }

    pub fn to_json(&self) -> Value {
        Value::Array(
            (0..self.n)
                .map(|r| Value::Array((0..self.n).map(|c| self.get(r, c).to_json()).collect()))
                .collect(),
        )
    }

    pub fn from_json(ring: &RingDescriptor, v: &Value) -> Result<Self, MatError> {
        let rows = v
            .as_array()
            .ok_or_else(|| MatError::Parse(format!("expected array of rows, got {v}")))?;
        let rows = rows
            .iter()
            .map(|row| {
                row.as_array()
                    .ok_or_else(|| MatError::Parse(format!("expected row array, got {row}")))?
                    .iter()
                    .map(|e| ring.parse_elem(e).map_err(MatError::from))
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::from_rows(ring, rows)
    }
}

impl fmt::Debug for RMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for r in 0..self.n {
            if r > 0 {
                write!(f, "; ")?;
            }
            for c in 0..self.n {
                if c > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.get(r, c))?;
            }
        }
        write!(f, "] over {}", self.ring)
    }
}

pub fn mat_mul(a: &RMatrix, b: &RMatrix) -> Result<RMatrix, MatError> {
    a.mul(b)
}

pub fn commutator(a: &RMatrix, b: &RMatrix) -> Result<RMatrix, MatError> {
    a.commutator(b)
}

pub fn det(a: &RMatrix) -> RingElem {
    a.det()
}

pub fn elementary(n: usize, i: usize, j: usize, x: &RingElem) -> Result<RMatrix, MatError> {
    RMatrix::elementary(n, i, j, x)
}

/// One letter `E_{i,j}(x)` with one-based indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Letter {
    pub i: usize,
    pub j: usize,
    pub x: RingElem,
}

impl Letter {
    pub fn new(i: usize, j: usize, x: RingElem) -> Self {
        Self { i, j, x }
    }
}

/// A product of elementary unipotents, evaluated left to right.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ElementaryWord {
    ring: RingDescriptor,
    n: usize,
    letters: Vec<Letter>,
}

impl ElementaryWord {
    pub fn empty(ring: &RingDescriptor, n: usize) -> Self {
        Self {
            ring: ring.clone(),
            n,
            letters: Vec::new(),
        }
    }

    pub fn new(ring: &RingDescriptor, n: usize, letters: Vec<Letter>) -> Result<Self, MatError> {
        for l in &letters {
            if l.i == l.j || l.i == 0 || l.j == 0 || l.i > n || l.j > n {
                return Err(MatError::InvalidLetter(l.i, l.j, n));
            }
            if l.x.ring() != ring {
                return Err(RingError::Mismatch(ring.to_string(), l.x.ring().to_string()).into());
            }
        }
        Ok(Self {
            ring: ring.clone(),
            n,
            letters,
        })
    }

    pub fn ring(&self) -> &RingDescriptor {
        &self.ring
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    fn push(&mut self, i: usize, j: usize, x: RingElem) {
        self.letters.push(Letter { i, j, x });
    }

    fn extend(&mut self, other: &ElementaryWord) {
        self.letters.extend(other.letters.iter().cloned());
    }

    pub fn evaluate(&self) -> RMatrix {
        let mut m = RMatrix::identity(&self.ring, self.n);
        for l in &self.letters {
            // right multiplication by E_{i,j}(x): column j += x * column i
            m.add_col_multiple(l.j - 1, l.i - 1, &l.x);
        }
        m
    }

    /// The group inverse: letters reversed with negated entries.
    pub fn inverse(&self) -> ElementaryWord {
        Self {
            ring: self.ring.clone(),
            n: self.n,
            letters: self
                .letters
                .iter()
                .rev()
                .map(|l| Letter::new(l.i, l.j, -&l.x))
                .collect(),
        }
    }

    /// Drops identity letters and merges neighbours on the same position, until stable.
    pub fn simplified(&self) -> ElementaryWord {
        let mut out: Vec<Letter> = Vec::with_capacity(self.letters.len());
        for l in &self.letters {
            if l.x.is_zero() {
                continue;
            }
            match out.last_mut() {
                Some(last) if last.i == l.i && last.j == l.j => {
                    let sum = &last.x + &l.x;
                    if sum.is_zero() {
                        out.pop();
                    } else {
                        last.x = sum;
                    }
                }
                _ => out.push(l.clone()),
            }
        }
        Self {
            ring: self.ring.clone(),
            n: self.n,
            letters: out,
        }
    }

    /// Relabels a 2x2 word into dimension `n`, sending indices 1, 2 to `a`, `b`.
    pub fn embed(&self, n: usize, a: usize, b: usize) -> ElementaryWord {
        assert_eq!(self.n, 2, "only 2x2 words embed");
        let map = |k: usize| if k == 1 { a } else { b };
        Self {
            ring: self.ring.clone(),
            n,
            letters: self
                .letters
                .iter()
                .map(|l| Letter::new(map(l.i), map(l.j), l.x.clone()))
                .collect(),
        }
    }

    pub fn to_json(&self) -> Value {
        Value::Array(
            self.letters
                .iter()
                .map(|l| json!({"i": l.i, "j": l.j, "x": l.x.to_json()}))
                .collect(),
        )
    }

    pub fn from_json(ring: &RingDescriptor, n: usize, v: &Value) -> Result<Self, MatError> {
        let items = v
            .as_array()
            .ok_or_else(|| MatError::Parse(format!("expected letter array, got {v}")))?;
        let letters = items
            .iter()
            .map(|item| {
                let idx = |key: &str| {
                    item.get(key)
                        .and_then(Value::as_u64)
                        .map(|k| k as usize)
                        .ok_or_else(|| MatError::Parse(format!("letter without {key}: {item}")))
                };
                let x = item
                    .get("x")
                    .ok_or_else(|| MatError::Parse(format!("letter without x: {item}")))?;
                Ok(Letter::new(idx("i")?, idx("j")?, ring.parse_elem(x)?))
            })
            .collect::<Result<Vec<_>, MatError>>()?;
        Self::new(ring, n, letters)
    }
}

pub fn evaluate_word(w: &ElementaryWord) -> RMatrix {
    w.evaluate()
}

/// `[[0,1],[-1,0]] = E21(-1) E12(1) E21(-1)`.
pub fn weyl_word(ring: &RingDescriptor) -> ElementaryWord {
    let one = ring.one();
    let mut w = ElementaryWord::empty(ring, 2);
    w.push(2, 1, -&one);
    w.push(1, 2, one.clone());
    w.push(2, 1, -&one);
    w
}

/// Five letters evaluating to `diag(a^-1, a)` for a unit `a`:
/// `E12(-a) E21(a-1) E12(1) E21(a^-1 - 1) E12(-a(1 - a^2))`.
pub fn diag_word(a: &RingElem) -> Result<ElementaryWord, MatError> {
    let ring = a.ring();
    let a_inv = a.invert()?;
    let one = ring.one();
    let mut w = ElementaryWord::empty(ring, 2);
    w.push(1, 2, -a);
    w.push(2, 1, a - &one);
    w.push(1, 2, one.clone());
    w.push(2, 1, &a_inv - &one);
    w.push(1, 2, -&(a * &(&one - &(a * a))));
    Ok(w)
}

fn require_sl(m: &RMatrix) -> Result<(), MatError> {
    let d = m.det();
    if d.is_one() {
        Ok(())
    } else {
        Err(MatError::NotSL(d.to_string()))
    }
}

/// Factors `M` in `SL_2` into at most 13 elementary letters.
///
/// With `a = M11` a unit, `M = E21(c/a) diag(a, a^-1) E12(b/a)`; otherwise a Weyl word is
/// split off on the right (if `b` is a unit) or the left (if `c` is).
pub fn decompose_sl2(m: &RMatrix) -> Result<ElementaryWord, MatError> {
    if m.n() != 2 {
        return Err(MatError::DimensionMismatch(2, m.n()));
    }
    require_sl(m)?;
    let ring = m.ring();
    let weyl = weyl_word(ring);
    let mut prefix = ElementaryWord::empty(ring, 2);
    let mut suffix = ElementaryWord::empty(ring, 2);
    let core = if m.get(0, 0).is_unit() {
        m.clone()
    } else if m.get(0, 1).is_unit() {
        // M = (M W) W^-1
        suffix = weyl.inverse();
        m.mul(&weyl.evaluate())?
    } else if m.get(1, 0).is_unit() {
        // M = W^-1 (W M)
        prefix = weyl.inverse();
        weyl.evaluate().mul(m)?
    } else {
        return Err(MatError::PrecisionLoss(0));
    };
    let a = core.get(0, 0);
    let a_inv = a.invert()?;
    let mut w = prefix;
    w.push(2, 1, core.get(1, 0) * &a_inv);
    w.extend(&diag_word(&a_inv)?);
    w.push(1, 2, &a_inv * core.get(0, 1));
    w.extend(&suffix);
    Ok(w.simplified())
}

/// Factors `M` in `SL_n` by Gaussian elimination with unit pivots.
///
/// The pivot in each column is the first row (at or below the diagonal) holding a unit; when
/// that is not the diagonal row it is added onto it. The residual diagonal is split into
/// `n - 1` two-by-two diagonal blocks, each factored with [`diag_word`].
pub fn decompose_sln(m: &RMatrix) -> Result<ElementaryWord, MatError> {
    let n = m.n();
    if n < 2 {
        return Err(MatError::DimensionMismatch(2, n));
    }
    require_sl(m)?;
    let ring = m.ring().clone();
    let mut a = m.clone();
    // a = L_k ... L_1 M R_1 ... R_m after elimination
    let mut left: Vec<Letter> = Vec::new();
    let mut right: Vec<Letter> = Vec::new();
    for col in 0..n {
        let pivot = (col..n)
            .find(|&r| a.get(r, col).is_unit())
            .ok_or(MatError::PrecisionLoss(col))?;
        if pivot != col {
            a.add_row_multiple(col, pivot, &ring.one());
            left.push(Letter::new(col + 1, pivot + 1, ring.one()));
        }
        let inv = a.get(col, col).invert()?;
        for r in col + 1..n {
            if a.get(r, col).is_zero() {
                continue;
            }
            let f = -&(a.get(r, col) * &inv);
            a.add_row_multiple(r, col, &f);
            left.push(Letter::new(r + 1, col + 1, f));
        }
        for c in col + 1..n {
            if a.get(col, c).is_zero() {
                continue;
            }
            let f = -&(&inv * a.get(col, c));
            a.add_col_multiple(c, col, &f);
            right.push(Letter::new(col + 1, c + 1, f));
        }
    }

    let mut w = ElementaryWord::empty(&ring, n);
    for l in &left {
        w.push(l.i, l.j, -&l.x);
    }
    // diag(d_1..d_n) = prod_i H_i(d_1 ... d_i), H_i(e) = e at i, e^-1 at i+1
    let mut e = ring.one();
    for i in 0..n - 1 {
        e = &e * a.get(i, i);
        if !e.is_one() {
            w.extend(&diag_word(&e.invert()?)?.embed(n, i + 1, i + 2));
        }
    }
    for l in right.iter().rev() {
        w.push(l.i, l.j, -&l.x);
    }
    Ok(w.simplified())
}

/// A word in letters of valuation at least `k` evaluating to
/// `diag(1 + pi^{2k} x, (1 + pi^{2k} x)^-1)`.
///
/// With `u = 1 + pi^{2k} x` and `P = pi^k`, the product `E12(P x) E21(P)` is cleared by one
/// letter on each side: `E21(-P/u) E12(P x) E21(P) E12(-P x/u)`.
pub fn el_diagonal_word(ring: &RingDescriptor, k: u32, x: &RingElem) -> Result<ElementaryWord, MatError> {
    if k == 0 || 2 * k >= ring.precision() {
        return Err(MatError::Precondition(format!(
            "need k >= 1 and 2k = {} below the precision {}",
            2 * k,
            ring.precision()
        )));
    }
    if x.ring() != ring {
        return Err(RingError::Mismatch(ring.to_string(), x.ring().to_string()).into());
    }
    let pk = ring.pi_pow(k);
    let u = &ring.one() + &(&ring.pi_pow(2 * k) * x);
    let u_inv = u.invert()?;
    let pkx = &pk * x;
    let mut w = ElementaryWord::empty(ring, 2);
    w.push(2, 1, -&(&pk * &u_inv));
    w.push(1, 2, pkx.clone());
    w.push(2, 1, pk.clone());
    w.push(1, 2, -&(&pkx * &u_inv));
    Ok(w.simplified())
}

/// Both sides of a matrix identity, evaluated exactly.
#[derive(Clone, Debug)]
pub struct IdentityReport {
    pub name: String,
    pub lhs: RMatrix,
    pub rhs: RMatrix,
}

impl IdentityReport {
    pub fn holds(&self) -> bool {
        self.lhs == self.rhs
    }

    pub fn to_json(&self) -> Value {
        json!({
            "identity": self.name,
            "lhs": self.lhs.to_json(),
            "rhs": self.rhs.to_json(),
            "holds": self.holds(),
        })
    }
}

/// `[E12(x), E23(y)] = E13(xy)` in `SL_n`, `n >= 3`.
pub fn steinberg_check(n: usize, x: &RingElem, y: &RingElem) -> Result<IdentityReport, MatError> {
    if n < 3 {
        return Err(MatError::Precondition(format!("Steinberg relation needs n >= 3, got {n}")));
    }
    let lhs = RMatrix::elementary(n, 1, 2, x)?.commutator(&RMatrix::elementary(n, 2, 3, y)?)?;
    let rhs = RMatrix::elementary(n, 1, 3, &x.checked_mul(y)?)?;
    Ok(IdentityReport {
        name: "steinberg".into(),
        lhs,
        rhs,
    })
}

#[derive(Clone, Debug)]
pub struct PerfectnessWitness {
    pub q: RingElem,
    pub t: RingElem,
    pub report: IdentityReport,
}

/// Writes `E12(x)` as the commutator `[diag(q, q^-1), E12(t)]` with `t = x / (q^2 - 1)`.
pub fn perfectness_witness(x: &RingElem) -> Result<PerfectnessWitness, MatError> {
    let ring = x.ring();
    let q = unit_with_unit_square_minus_one(ring)?;
    let t = &(&(&q * &q) - &ring.one()).invert()? * x;
    let d = RMatrix::diagonal(ring, &[q.clone(), q.invert()?]);
    let lhs = d.commutator(&RMatrix::elementary(2, 1, 2, &t)?)?;
    let rhs = RMatrix::elementary(2, 1, 2, x)?;
    Ok(PerfectnessWitness {
        q,
        t,
        report: IdentityReport {
            name: "perfectness".into(),
            lhs,
            rhs,
        },
    })
}

/// `[diag(1 + pi^k y, (1 + pi^k y)^-1), E12(pi^t x)] = E12(pi^{k+t} y x (2 + pi^k y))`.
pub fn dilation_commutator_check(
    k: u32,
    y: &RingElem,
    t: u32,
    x: &RingElem,
) -> Result<IdentityReport, MatError> {
    if !y.is_unit() {
        return Err(MatError::Precondition(format!("y = {y} must be a unit")));
    }
    let ring = y.ring();
    let pk_y = &ring.pi_pow(k) * y;
    let s = &ring.one() + &pk_y;
    let d = RMatrix::diagonal(ring, &[s.clone(), s.invert()?]);
    let lhs = d.commutator(&RMatrix::elementary(2, 1, 2, &(&ring.pi_pow(t) * x))?)?;
    let two = ring.from_i64(2);
    let entry = &(&(&ring.pi_pow(k) * &ring.pi_pow(t)) * &(y.checked_mul(x)?)) * &(&two + &pk_y);
    let rhs = RMatrix::elementary(2, 1, 2, &entry)?;
    Ok(IdentityReport {
        name: "dilation-commutator".into(),
        lhs,
        rhs,
    })
}

/// Weyl and diagonal factorizations evaluated against their closed forms.
pub fn weyl_check(ring: &RingDescriptor) -> IdentityReport {
    IdentityReport {
        name: "weyl".into(),
        lhs: weyl_word(ring).evaluate(),
        rhs: RMatrix::from_ints(ring, &[&[0, 1], &[-1, 0]]).expect("2x2"),
    }
}

pub fn diag_check(a: &RingElem) -> Result<IdentityReport, MatError> {
    Ok(IdentityReport {
        name: "diag-word".into(),
        lhs: diag_word(a)?.evaluate(),
        rhs: RMatrix::diagonal(a.ring(), &[a.invert()?, a.clone()]),
    })
}

/// `E_{i,col}(pi^k)` for every `i != col`; these generate an abelian group.
pub fn column_group_generators(
    ring: &RingDescriptor,
    n: usize,
    col: usize,
    k: u32,
) -> Result<Vec<RMatrix>, MatError> {
    if col == 0 || col > n {
        return Err(MatError::Precondition(format!("column {col} outside 1..={n}")));
    }
    let x = ring.pi_pow(k);
    (1..=n)
        .filter(|&i| i != col)
        .map(|i| RMatrix::elementary(n, i, col, &x))
        .collect()
}

pub fn pairwise_commute(mats: &[RMatrix]) -> Result<bool, MatError> {
    for (idx, a) in mats.iter().enumerate() {
        for b in &mats[idx + 1..] {
            if !a.commutator(b)?.is_identity() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Minimum valuation over the letters of a word.
pub fn min_letter_valuation(w: &ElementaryWord) -> Valuation {
    w.letters()
        .iter()
        .map(|l| l.x.valuation())
        .min()
        .unwrap_or(Valuation::AtLeastPrecision)
}

//! Exact rational linear algebra for flags fixed by sets of unipotent matrices.
//!
//! Matrices act on column vectors. A [`Subspace`] is stored as the nonzero rows of its reduced
//! row echelon form, so two subspaces are equal exactly when their bases are.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use serde_json::Value;
use thiserror::Error;

pub type Q = BigRational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FlagError {
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("matrix {0} is not unipotent")]
    NonUnipotentInput(usize),
    #[error("flag failed to grow past dimension {0}")]
    StalledFlag(usize),
    #[error("generator {0} is singular")]
    SingularGenerator(usize),
    #[error("subspace {index} has codimension {codim}, expected 1")]
    WrongCodimension { index: usize, codim: usize },
    #[error("malformed flag: {0}")]
    MalformedFlag(String),
    #[error("malformed input: {0}")]
    Parse(String),
}

fn q(x: i64) -> Q {
    Q::from_integer(BigInt::from(x))
}

/// Square rational matrix, row-major.
#[derive(Clone, PartialEq, Eq)]
pub struct QMatrix {
    d: usize,
    entries: Vec<Q>,
}

impl QMatrix {
    pub fn identity(d: usize) -> Self {
        Self {
            d,
            entries: (0..d * d)
                .map(|k| if k % (d + 1) == 0 { Q::one() } else { Q::zero() })
                .collect(),
        }
    }

    pub fn zero(d: usize) -> Self {
        Self {
            d,
            entries: vec![Q::zero(); d * d],
        }
    }

    pub fn from_rows(rows: Vec<Vec<Q>>) -> Result<Self, FlagError> {
        let d = rows.len();
        let mut entries = Vec::with_capacity(d * d);
        for row in rows {
            if row.len() != d {
                return Err(FlagError::DimensionMismatch(d, row.len()));
            }
            entries.extend(row);
        }
        Ok(Self { d, entries })
    }

    pub fn from_ints(rows: &[&[i64]]) -> Self {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect())
            .expect("square integer matrix")
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(cols: &[Vec<Q>]) -> Result<Self, FlagError> {
        let d = cols.len();
        let mut m = Self::zero(d);
        for (c, col) in cols.iter().enumerate() {
            if col.len() != d {
                return Err(FlagError::DimensionMismatch(d, col.len()));
            }
            for (r, x) in col.iter().enumerate() {
                m.entries[r * d + c] = x.clone();
            }
        }
        Ok(m)
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn get(&self, r: usize, c: usize) -> &Q {
        &self.entries[r * self.d + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Q) {
        self.entries[r * self.d + c] = v;
    }

    pub fn rows(&self) -> Vec<Vec<Q>> {
        self.entries.chunks(self.d).map(<[Q]>::to_vec).collect()
    }

    pub fn column(&self, c: usize) -> Vec<Q> {
        (0..self.d).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn mul(&self, other: &QMatrix) -> Result<QMatrix, FlagError> {
        if self.d != other.d {
            return Err(FlagError::DimensionMismatch(self.d, other.d));
        }
        let d = self.d;
        let mut out = QMatrix::zero(d);
        for r in 0..d {
            for k in 0..d {
                let a = self.get(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..d {
                    let v = out.get(r, c) + a * other.get(k, c);
                    out.set(r, c, v);
                }
            }
        }
        Ok(out)
    }

    pub fn apply(&self, v: &[Q]) -> Vec<Q> {
        (0..self.d)
            .map(|r| {
                (0..self.d)
                    .filter(|&c| !v[c].is_zero())
                    .fold(Q::zero(), |acc, c| acc + self.get(r, c) * &v[c])
            })
            .collect()
    }

    pub fn minus_identity(&self) -> QMatrix {
        let mut m = self.clone();
        for i in 0..self.d {
            let v = m.get(i, i) - Q::one();
            m.set(i, i, v);
        }
        m
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    /// `(M - I)^D = 0`.
    pub fn is_unipotent(&self) -> bool {
        let n = self.minus_identity();
        let mut acc = QMatrix::identity(self.d);
        for _ in 0..self.d {
            acc = acc.mul(&n).expect("same dimension");
            if acc.is_zero() {
                return true;
            }
        }
        acc.is_zero()
    }

    pub fn rank(&self) -> usize {
        rref(self.rows(), self.d).0.len()
    }

    pub fn inverse(&self) -> Option<QMatrix> {
        let d = self.d;
        let aug: Vec<Vec<Q>> = self
            .rows()
            .into_iter()
            .enumerate()
            .map(|(i, mut row)| {
                row.extend((0..d).map(|j| if i == j { Q::one() } else { Q::zero() }));
                row
            })
            .collect();
        let (rows, pivots) = rref(aug, 2 * d);
        if pivots.len() < d || pivots[d - 1] >= d {
            return None;
        }
        QMatrix::from_rows(rows.into_iter().map(|r| r[d..].to_vec()).collect()).ok()
    }

    pub fn to_json(&self) -> Value {
        Value::Array(
            self.rows()
                .into_iter()
                .map(|r| Value::Array(r.iter().map(|x| Value::String(x.to_string())).collect()))
                .collect(),
        )
    }

    pub fn from_json(v: &Value) -> Result<Self, FlagError> {
        let rows = v
            .as_array()
            .ok_or_else(|| FlagError::Parse(format!("expected array of rows, got {v}")))?;
        let rows = rows
            .iter()
            .map(|row| {
                row.as_array()
                    .ok_or_else(|| FlagError::Parse(format!("expected row array, got {row}")))?
                    .iter()
                    .map(parse_rational)
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()?;
        QMatrix::from_rows(rows)
    }
}

impl fmt::Debug for QMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .rows()
            .iter()
            .map(|r| r.iter().map(ToString::to_string).collect::<Vec<_>>().join(", "))
            .collect();
        write!(f, "[{}]", rows.join("; "))
    }
}

pub fn parse_rational(v: &Value) -> Result<Q, FlagError> {
    match v {
        Value::String(s) => s
            .trim()
            .parse::<Q>()
            .map_err(|_| FlagError::Parse(format!("not a rational: {s}"))),
        Value::Number(n) => n
            .as_i64()
            .map(q)
            .ok_or_else(|| FlagError::Parse(format!("not an integer: {n}"))),
        other => Err(FlagError::Parse(format!("not a rational: {other}"))),
    }
}

/// Reduced row echelon form; returns the nonzero rows and their pivot columns.
pub fn rref(mut rows: Vec<Vec<Q>>, cols: usize) -> (Vec<Vec<Q>>, Vec<usize>) {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].recip();
        for x in rows[r].iter_mut() {
            *x *= &inv;
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, y) in row.iter_mut().zip(&pivot_row) {
                *x -= &f * y;
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    (rows, pivots)
}

/// Basis of `{x : A x = 0}` for `A` given by its rows.
pub fn kernel(rows: Vec<Vec<Q>>, cols: usize) -> Vec<Vec<Q>> {
    let (rows, pivots) = rref(rows, cols);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Q::zero(); cols];
            v[f] = Q::one();
            for (row, &pc) in rows.iter().zip(&pivots) {
                v[pc] = -row[f].clone();
            }
            v
        })
        .collect()
}

/// A subspace of `Q^D`, held as its canonical RREF basis.
#[derive(Clone, PartialEq, Eq)]
pub struct Subspace {
    ambient: usize,
    basis: Vec<Vec<Q>>,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(ambient: usize) -> Self {
        Self {
            ambient,
            basis: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn full(ambient: usize) -> Self {
        Self::span(ambient, QMatrix::identity(ambient).rows()).expect("standard basis")
    }

    pub fn span(ambient: usize, vectors: Vec<Vec<Q>>) -> Result<Self, FlagError> {
        if let Some(v) = vectors.iter().find(|v| v.len() != ambient) {
            return Err(FlagError::DimensionMismatch(ambient, v.len()));
        }
        let (basis, pivots) = rref(vectors, ambient);
        Ok(Self {
            ambient,
            basis,
            pivots,
        })
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn codim(&self) -> usize {
        self.ambient - self.dim()
    }

    pub fn basis(&self) -> &[Vec<Q>] {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Reduces `v` against the basis; the result is zero iff `v` lies in the subspace. Its
    /// entries at non-pivot positions are the coordinates of `v` modulo the subspace.
    pub fn reduce(&self, v: &[Q]) -> Vec<Q> {
        let mut w = v.to_vec();
        for (row, &pc) in self.basis.iter().zip(&self.pivots) {
            if w[pc].is_zero() {
                continue;
            }
            let f = w[pc].clone();
            for (x, y) in w.iter_mut().zip(row) {
                *x -= &f * y;
            }
        }
        w
    }

    pub fn contains(&self, v: &[Q]) -> bool {
        self.reduce(v).iter().all(Zero::is_zero)
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        self.ambient == other.ambient && self.basis.iter().all(|b| other.contains(b))
    }

    /// Rows spanning the annihilator `{y : y . v = 0 for all v}`; the subspace is their kernel.
    pub fn annihilator(&self) -> Vec<Vec<Q>> {
        kernel(self.basis.clone(), self.ambient)
    }

    /// Standard basis indices completing the RREF basis to a basis of the ambient space,
    /// chosen greedily by lowest index: exactly the non-pivot columns.
    pub fn complement_indices(&self) -> Vec<usize> {
        (0..self.ambient).filter(|c| !self.pivots.contains(c)).collect()
    }

    pub fn image(&self, m: &QMatrix) -> Subspace {
        Subspace::span(self.ambient, self.basis.iter().map(|b| m.apply(b)).collect())
            .expect("same ambient")
    }

    pub fn to_json(&self) -> Value {
        Value::Array(
            self.basis
                .iter()
                .map(|r| Value::Array(r.iter().map(|x| Value::String(x.to_string())).collect()))
                .collect(),
        )
    }
}

impl fmt::Debug for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subspace(dim {} in Q^{}: ", self.dim(), self.ambient)?;
        let rows: Vec<String> = self
            .basis
            .iter()
            .map(|r| r.iter().map(ToString::to_string).collect::<Vec<_>>().join(" "))
            .collect();
        write!(f, "[{}])", rows.join("; "))
    }
}

/// `ker(M - I)`.
pub fn fixed_space(m: &QMatrix) -> Subspace {
    Subspace::span(m.dim(), kernel(m.minus_identity().rows(), m.dim())).expect("same ambient")
}

/// Intersection of subspaces as the kernel of their stacked annihilators.
pub fn intersect(spaces: &[Subspace]) -> Result<Subspace, FlagError> {
    let Some(first) = spaces.first() else {
        return Err(FlagError::MalformedFlag("nothing to intersect".into()));
    };
    let d = first.ambient;
    let mut rows = Vec::new();
    for s in spaces {
        if s.ambient != d {
            return Err(FlagError::DimensionMismatch(d, s.ambient));
        }
        rows.extend(s.annihilator());
    }
    Subspace::span(d, kernel(rows, d))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HyperplaneReport {
    pub ambient: usize,
    pub count: usize,
    pub dim: usize,
    /// `D - n`, possibly negative
    pub bound: i64,
}

impl HyperplaneReport {
    pub fn holds(&self) -> bool {
        self.dim as i64 >= self.bound
    }
}

/// Intersects `n` hyperplanes of `Q^D` and reports the dimension against `D - n`.
pub fn hyperplane_bound_check(hyperplanes: &[Subspace]) -> Result<HyperplaneReport, FlagError> {
    for (index, w) in hyperplanes.iter().enumerate() {
        if w.codim() != 1 {
            return Err(FlagError::WrongCodimension {
                index,
                codim: w.codim(),
            });
        }
    }
    let cap = intersect(hyperplanes)?;
    Ok(HyperplaneReport {
        ambient: cap.ambient,
        count: hyperplanes.len(),
        dim: cap.dim(),
        bound: cap.ambient as i64 - hyperplanes.len() as i64,
    })
}

/// A strictly increasing chain `{0} = V_0 < V_1 < ... < V_e`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Flag {
    ambient: usize,
    spaces: Vec<Subspace>,
}

impl Flag {
    pub fn new(ambient: usize, spaces: Vec<Subspace>) -> Result<Self, FlagError> {
        match spaces.first() {
            Some(v0) if v0.dim() == 0 => {}
            _ => return Err(FlagError::MalformedFlag("V_0 must be the zero space".into())),
        }
        for (j, w) in spaces.windows(2).enumerate() {
            if w[1].ambient != ambient || w[0].ambient != ambient {
                return Err(FlagError::DimensionMismatch(ambient, w[1].ambient));
            }
            if !w[0].is_subspace_of(&w[1]) || w[0].dim() >= w[1].dim() {
                return Err(FlagError::MalformedFlag(format!(
                    "V_{j} is not strictly contained in V_{}",
                    j + 1
                )));
            }
        }
        Ok(Self { ambient, spaces })
    }

    /// The standard flag `span(e_1) < span(e_1, e_2) < ...`.
    pub fn standard(ambient: usize) -> Self {
        let id = QMatrix::identity(ambient).rows();
        let spaces = (0..=ambient)
            .map(|k| Subspace::span(ambient, id[..k].to_vec()).expect("standard vectors"))
            .collect();
        Self { ambient, spaces }
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn spaces(&self) -> &[Subspace] {
        &self.spaces
    }

    /// Length `e` of the chain.
    pub fn length(&self) -> usize {
        self.spaces.len() - 1
    }

    pub fn dims(&self) -> Vec<usize> {
        self.spaces.iter().map(Subspace::dim).collect()
    }

    pub fn to_json(&self) -> Value {
        Value::Array(self.spaces.iter().map(Subspace::to_json).collect())
    }

    pub fn from_json(ambient: usize, v: &Value) -> Result<Self, FlagError> {
        let items = v
            .as_array()
            .ok_or_else(|| FlagError::Parse(format!("expected array of bases, got {v}")))?;
        let spaces = items
            .iter()
            .map(|basis| {
                let rows = basis
                    .as_array()
                    .ok_or_else(|| FlagError::Parse(format!("expected basis rows, got {basis}")))?
                    .iter()
                    .map(|row| {
                        row.as_array()
                            .ok_or_else(|| FlagError::Parse(format!("expected vector, got {row}")))?
                            .iter()
                            .map(parse_rational)
                            .collect::<Result<Vec<_>, _>>()
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                Subspace::span(ambient, rows)
            })
            .collect::<Result<Vec<_>, _>>()?;
        Flag::new(ambient, spaces)
    }
}

/// Matrix of the action induced by `m` on `Q^D / V`, in the coordinates given by the standard
/// vectors at [`Subspace::complement_indices`].
pub fn quotient_action(m: &QMatrix, v: &Subspace) -> QMatrix {
    let comp = v.complement_indices();
    let c = comp.len();
    let mut out = QMatrix::zero(c);
    for (t, &idx) in comp.iter().enumerate() {
        let image = v.reduce(&m.column(idx));
        for (s, &jdx) in comp.iter().enumerate() {
            out.set(s, t, image[jdx].clone());
        }
    }
    out
}

fn check_square_set(mats: &[QMatrix]) -> Result<Option<usize>, FlagError> {
    let Some(first) = mats.first() else {
        return Ok(None);
    };
    for m in mats {
        if m.dim() != first.dim() {
            return Err(FlagError::DimensionMismatch(first.dim(), m.dim()));
        }
    }
    Ok(Some(first.dim()))
}

/// The flag whose successive quotients are the maximal common 1-eigenspaces of the induced
/// actions: `V_j / V_{j-1}` is the common fixed space of `mats` acting on `Q^D / V_{j-1}`.
///
/// `ambient` is only consulted when `mats` is empty.
pub fn jh_series(mats: &[QMatrix], ambient: usize) -> Result<Flag, FlagError> {
    let d = check_square_set(mats)?.unwrap_or(ambient);
    for (i, m) in mats.iter().enumerate() {
        if !m.is_unipotent() {
            return Err(FlagError::NonUnipotentInput(i));
        }
    }
    let mut spaces = vec![Subspace::zero(d)];
    loop {
        let prev = spaces.last().expect("V_0 present");
        if prev.dim() == d {
            break;
        }
        let comp = prev.complement_indices();
        let c = comp.len();
        let fixed_rows: Vec<Vec<Q>> = mats
            .iter()
            .flat_map(|m| quotient_action(m, prev).minus_identity().rows())
            .collect();
        let fixed = kernel(fixed_rows, c);
        let mut vectors = prev.basis().to_vec();
        for f in fixed {
            let mut lift = vec![Q::zero(); d];
            for (t, &idx) in comp.iter().enumerate() {
                lift[idx] = f[t].clone();
            }
            vectors.push(lift);
        }
        let next = Subspace::span(d, vectors)?;
        if next.dim() <= prev.dim() {
            return Err(FlagError::StalledFlag(prev.dim()));
        }
        spaces.push(next);
    }
    Flag::new(d, spaces)
}

/// `g V_j = V_j` for every generator and every member of the flag.
pub fn flag_invariant_under(gens: &[QMatrix], flag: &Flag) -> Result<bool, FlagError> {
    for (i, g) in gens.iter().enumerate() {
        if g.dim() != flag.ambient {
            return Err(FlagError::DimensionMismatch(flag.ambient, g.dim()));
        }
        if g.rank() < g.dim() {
            return Err(FlagError::SingularGenerator(i));
        }
    }
    Ok(gens
        .iter()
        .all(|g| flag.spaces.iter().all(|v| &v.image(g) == v)))
}

/// Change of basis whose leading `dim V_j` columns span `V_j`, built by extending a basis of
/// each `V_{j-1}` with RREF rows of `V_j`, then with standard vectors if the flag stops short of
/// the whole space.
pub fn adapted_basis(flag: &Flag) -> Result<QMatrix, FlagError> {
    let d = flag.ambient;
    let mut chosen = Subspace::zero(d);
    let mut cols: Vec<Vec<Q>> = Vec::new();
    let candidates = flag
        .spaces
        .iter()
        .flat_map(|v| v.basis().iter().cloned())
        .chain(QMatrix::identity(d).rows());
    for v in candidates {
        if !chosen.contains(&v) {
            cols.push(v);
            chosen = Subspace::span(d, cols.clone())?;
        }
    }
    for (j, v) in flag.spaces.iter().enumerate() {
        let lead = Subspace::span(d, cols[..v.dim()].to_vec())?;
        if &lead != v {
            return Err(FlagError::MalformedFlag(format!(
                "leading columns do not span V_{j}"
            )));
        }
    }
    QMatrix::from_columns(&cols)
}

/// Splits a matrix into blocks along `sizes` and checks that blocks below the diagonal vanish
/// and (when `unitriangular`) diagonal blocks are identities.
pub fn is_block_triangular(m: &QMatrix, sizes: &[usize], unitriangular: bool) -> bool {
    let mut bounds = vec![0];
    for s in sizes {
        bounds.push(bounds.last().unwrap() + s);
    }
    if *bounds.last().unwrap() != m.dim() {
        return false;
    }
    let block_of = |i: usize| bounds.iter().rposition(|&b| b <= i).unwrap();
    for r in 0..m.dim() {
        for c in 0..m.dim() {
            let (br, bc) = (block_of(r), block_of(c));
            let x = m.get(r, c);
            if br > bc && !x.is_zero() {
                return false;
            }
            if unitriangular && br == bc {
                let want = if r == c { Q::one() } else { Q::zero() };
                if *x != want {
                    return false;
                }
            }
        }
    }
    true
}

/// Block sizes `dim V_j - dim V_{j-1}` of a flag.
pub fn block_sizes(flag: &Flag) -> Vec<usize> {
    let mut sizes: Vec<usize> = flag.dims().windows(2).map(|w| w[1] - w[0]).collect();
    let top = *flag.dims().last().unwrap();
    if top < flag.ambient {
        sizes.push(flag.ambient - top);
    }
    sizes
}

/// Results of checking a flag against the defining properties of a JH-series for `mats`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct JhVerification {
    pub strictly_growing: bool,
    pub reaches_full_space: bool,
    pub quotients_trivial: bool,
    pub maximal: bool,
}

impl JhVerification {
    pub fn all(&self) -> bool {
        self.strictly_growing && self.reaches_full_space && self.quotients_trivial && self.maximal
    }
}

/// Checks a flag without reusing the complement construction of [`jh_series`]:
/// triviality is `M v - v in V_{j-1}` for `v in V_j`, and maximality compares `V_j` with
/// `{v : (M - I) v in V_{j-1} for all M}`, computed as a kernel against the annihilator of
/// `V_{j-1}`.
pub fn verify_jh(mats: &[QMatrix], flag: &Flag) -> JhVerification {
    let d = flag.ambient;
    let dims = flag.dims();
    let strictly_growing = dims.windows(2).all(|w| w[0] < w[1]) && flag.length() <= d;
    let reaches_full_space = *dims.last().unwrap() == d;
    let mut quotients_trivial = true;
    let mut maximal = true;
    for w in flag.spaces.windows(2) {
        let (prev, cur) = (&w[0], &w[1]);
        for m in mats {
            let n = m.minus_identity();
            if !cur.basis().iter().all(|v| prev.contains(&n.apply(v))) {
                quotients_trivial = false;
            }
        }
        let ann = prev.annihilator();
        let mut rows = Vec::new();
        for m in mats {
            let n = m.minus_identity();
            for a in &ann {
                // row a^T (M - I)
                rows.push((0..d).map(|c| (0..d).fold(Q::zero(), |acc, r| acc + &a[r] * n.get(r, c))).collect());
            }
        }
        let common = Subspace::span(d, kernel(rows, d)).expect("same ambient");
        if &common != cur {
            maximal = false;
        }
    }
    JhVerification {
        strictly_growing,
        reaches_full_space,
        quotients_trivial,
        maximal,
    }
}

/// Random upper unitriangular integer matrix with entries in `-bound..=bound`; each
/// superdiagonal entry is zeroed with probability `sparsity`.
pub fn random_unitriangular<R: Rng + ?Sized>(d: usize, bound: i64, sparsity: f64, rng: &mut R) -> QMatrix {
    let mut m = QMatrix::identity(d);
    for r in 0..d {
        for c in r + 1..d {
            if !rng.gen_bool(sparsity) {
                m.set(r, c, q(rng.gen_range(-bound..=bound)));
            }
        }
    }
    m
}

/// Random invertible integer matrix with entries in `-bound..=bound`.
pub fn random_invertible<R: Rng + ?Sized>(d: usize, bound: i64, rng: &mut R) -> QMatrix {
    loop {
        let rows = (0..d)
            .map(|_| (0..d).map(|_| q(rng.gen_range(-bound..=bound))).collect())
            .collect();
        let m = QMatrix::from_rows(rows).expect("square");
        if m.rank() == d {
            return m;
        }
    }
}

/// A set of `count` unipotent matrices sharing a flag: random unitriangular matrices
/// conjugated by one random invertible matrix. Returns the set and the conjugator.
pub fn random_unipotent_set<R: Rng + ?Sized>(
    d: usize,
    count: usize,
    rng: &mut R,
) -> (Vec<QMatrix>, QMatrix) {
    let p = random_invertible(d, 2, rng);
    let p_inv = p.inverse().expect("invertible");
    let sparsity = rng.gen_range(0.0..0.8);
    let mats = (0..count)
        .map(|_| {
            let u = random_unitriangular(d, 3, sparsity, rng);
            p.mul(&u).unwrap().mul(&p_inv).unwrap()
        })
        .collect();
    (mats, p)
}

/// Random hyperplane `{x : a . x = 0}` with small nonzero integer normal `a`.
pub fn random_hyperplane<R: Rng + ?Sized>(d: usize, bound: i64, rng: &mut R) -> Subspace {
    loop {
        let a: Vec<Q> = (0..d).map(|_| q(rng.gen_range(-bound..=bound))).collect();
        if a.iter().any(|x| !x.is_zero()) {
            return Subspace::span(d, kernel(vec![a], d)).expect("same ambient");
        }
    }
}

/// Largest absolute numerator or denominator, a size measure for generated inputs.
pub fn height(m: &QMatrix) -> BigInt {
    m.entries
        .iter()
        .flat_map(|x| [x.numer().abs(), x.denom().abs()])
        .max()
        .unwrap_or_else(BigInt::zero)
}

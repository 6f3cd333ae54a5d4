//! Finite congruence quotients `SL_n(Z/p^m)`.
//!
//! Group elements are packed into `u128` keys (entries most significant first, so numeric
//! order of keys is lexicographic order of entries). Closures run breadth first and sort each
//! layer, which makes the enumeration order a pure function of the generator list.

use std::collections::HashMap;

use rand::Rng;
use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::localring::{is_prime, Characteristic};
use crate::matgroup::RMatrix;

/// Default cap on the number of group elements a closure may enumerate.
pub const DEFAULT_ELEMENT_CAP: usize = 1 << 22;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CongruenceError {
    #[error("closure exceeded the element cap of {0}")]
    ResourceCap(usize),
    #[error("generator is not invertible mod {0}")]
    NotInvertible(u64),
    #[error("matrices live in different quotients: {0} vs {1}")]
    Mismatch(String, String),
    #[error("subgroup is not contained in the group")]
    NotSubgroup,
    #[error("packed key needs {0} bits, more than 128")]
    KeyTooWide(u32),
    #[error("{0}")]
    Precondition(String),
    #[error("abelianization is trivial; no nontrivial abelian representation exists")]
    AbelianizationTrivial,
}

/// The space of `n x n` matrices over `Z/p^m`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct MatSpace {
    pub n: usize,
    pub p: u32,
    pub m: u32,
}

impl MatSpace {
    pub fn new(n: usize, p: u32, m: u32) -> Result<Self, CongruenceError> {
        if n == 0 || m == 0 || !is_prime(p as u64) {
            return Err(CongruenceError::Precondition(format!(
                "need n >= 1, m >= 1 and p prime; got n={n}, p={p}, m={m}"
            )));
        }
        let q = (p as u64).checked_pow(m).filter(|&q| q <= 1 << 31);
        if q.is_none() {
            return Err(CongruenceError::Precondition(format!("{p}^{m} exceeds 2^31")));
        }
        Ok(Self { n, p, m })
    }

    pub fn modulus(&self) -> u64 {
        (self.p as u64).pow(self.m)
    }

    fn entry_bits(&self) -> u32 {
        64 - (self.modulus() - 1).leading_zeros().min(63)
    }

    fn key_bits(&self) -> u32 {
        self.entry_bits() * (self.n * self.n) as u32
    }

    fn pack(&self, entries: &[u32]) -> u128 {
        let b = self.entry_bits();
        entries
            .iter()
            .fold(0u128, |acc, &e| (acc << b) | e as u128)
    }

    fn unpack(&self, mut key: u128, out: &mut [u32]) {
        let b = self.entry_bits();
        let mask = (1u128 << b) - 1;
        for slot in out.iter_mut().rev() {
            *slot = (key & mask) as u32;
            key >>= b;
        }
    }
}

impl std::fmt::Display for MatSpace {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "M_{}(Z/{}^{})", self.n, self.p, self.m)
    }
}

/// A matrix over `Z/p^m` with canonical residues.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FiniteMat {
    space: MatSpace,
    entries: Vec<u32>,
}

fn inv_mod(a: u64, q: u64) -> Option<u64> {
    let (mut r0, mut r1) = (a as i128, q as i128);
    let (mut s0, mut s1) = (1i128, 0i128);
    while r1 != 0 {
        let t = r0 / r1;
        (r0, r1) = (r1, r0 - t * r1);
        (s0, s1) = (s1, s0 - t * s1);
    }
    (r0 == 1).then(|| s0.rem_euclid(q as i128) as u64)
}

impl FiniteMat {
    pub fn identity(space: MatSpace) -> Self {
        let n = space.n;
        Self {
            space,
            entries: (0..n * n).map(|k| (k % (n + 1) == 0) as u32).collect(),
        }
    }

    pub fn from_entries(space: MatSpace, entries: &[i64]) -> Result<Self, CongruenceError> {
        if entries.len() != space.n * space.n {
            return Err(CongruenceError::Precondition(format!(
                "expected {} entries, got {}",
                space.n * space.n,
                entries.len()
            )));
        }
        let q = space.modulus() as i64;
        Ok(Self {
            space,
            entries: entries.iter().map(|&e| e.rem_euclid(q) as u32).collect(),
        })
    }

    /// `E_{i,j}(x)` with one-based indices.
    pub fn elementary(space: MatSpace, i: usize, j: usize, x: i64) -> Result<Self, CongruenceError> {
        let n = space.n;
        if i == j || i == 0 || j == 0 || i > n || j > n {
            return Err(CongruenceError::Precondition(format!("invalid E_{{{i},{j}}} for n = {n}")));
        }
        let mut m = Self::identity(space);
        m.entries[(i - 1) * n + (j - 1)] = x.rem_euclid(space.modulus() as i64) as u32;
        Ok(m)
    }

    pub fn space(&self) -> MatSpace {
        self.space
    }

    pub fn entries(&self) -> &[u32] {
        &self.entries
    }

    pub fn get(&self, r: usize, c: usize) -> u32 {
        self.entries[r * self.space.n + c]
    }

    fn key(&self) -> u128 {
        self.space.pack(&self.entries)
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.space)
    }

    pub fn mul(&self, other: &FiniteMat) -> Result<FiniteMat, CongruenceError> {
        if self.space != other.space {
            return Err(CongruenceError::Mismatch(
                self.space.to_string(),
                other.space.to_string(),
            ));
        }
        let mut out = vec![0; self.entries.len()];
        mul_into(self.space, &self.entries, &other.entries, &mut out);
        Ok(FiniteMat {
            space: self.space,
            entries: out,
        })
    }

    /// Gauss-Jordan inverse over the local ring `Z/p^m`.
    pub fn inverse(&self) -> Result<FiniteMat, CongruenceError> {
        let n = self.space.n;
        let q = self.space.modulus();
        let p = self.space.p as u64;
        let mut a: Vec<u64> = self.entries.iter().map(|&e| e as u64).collect();
        let mut inv: Vec<u64> = FiniteMat::identity(self.space)
            .entries
            .iter()
            .map(|&e| e as u64)
            .collect();
        for col in 0..n {
            let pivot = (col..n)
                .find(|&r| !a[r * n + col].is_multiple_of(p))
                .ok_or(CongruenceError::NotInvertible(q))?;
            for c in 0..n {
                a.swap(pivot * n + c, col * n + c);
                inv.swap(pivot * n + c, col * n + c);
            }
            let s = inv_mod(a[col * n + col], q).expect("unit pivot");
            for c in 0..n {
                a[col * n + c] = a[col * n + c] * s % q;
                inv[col * n + c] = inv[col * n + c] * s % q;
            }
            for r in 0..n {
                let f = a[r * n + col];
                if r == col || f == 0 {
                    continue;
                }
                for c in 0..n {
                    a[r * n + c] = (a[r * n + c] + (q - f) * a[col * n + c]) % q;
                    inv[r * n + c] = (inv[r * n + c] + (q - f) * inv[col * n + c]) % q;
                }
            }
        }
        Ok(FiniteMat {
            space: self.space,
            entries: inv.into_iter().map(|e| e as u32).collect(),
        })
    }

    /// `A B A^-1 B^-1`.
    pub fn commutator(&self, other: &FiniteMat) -> Result<FiniteMat, CongruenceError> {
        self.mul(other)?
            .mul(&self.inverse()?)?
            .mul(&other.inverse()?)
    }

    pub fn conjugate_by(&self, g: &FiniteMat) -> Result<FiniteMat, CongruenceError> {
        g.mul(self)?.mul(&g.inverse()?)
    }

    pub fn to_json(&self) -> Value {
        let n = self.space.n;
        Value::Array(
            self.entries
                .chunks(n)
                .map(|row| Value::Array(row.iter().map(|&e| Value::from(e)).collect()))
                .collect(),
        )
    }
}

fn mul_into(space: MatSpace, a: &[u32], b: &[u32], out: &mut [u32]) {
    let n = space.n;
    let q = space.modulus();
    for r in 0..n {
        for c in 0..n {
            let mut acc = 0u64;
            for k in 0..n {
                acc = (acc + a[r * n + k] as u64 * b[k * n + c] as u64) % q;
            }
            out[r * n + c] = acc as u32;
        }
    }
}

/// Entry-wise reduction `SL_n(Z/p^N) -> SL_n(Z/p^m)`.
pub fn project(mat: &RMatrix, m: u32) -> Result<FiniteMat, CongruenceError> {
    let ring = mat.ring();
    if ring.characteristic() != Characteristic::Zero {
        return Err(CongruenceError::Precondition(
            "reduction to Z/p^m needs a characteristic zero ring".into(),
        ));
    }
    if m > ring.precision() {
        return Err(CongruenceError::Precondition(format!(
            "m = {m} exceeds the ring precision {}",
            ring.precision()
        )));
    }
    let space = MatSpace::new(mat.n(), ring.p(), m)?;
    let q = num_bigint::BigUint::from(space.modulus());
    let n = mat.n();
    let entries = (0..n * n)
        .map(|k| {
            let v = mat.get(k / n, k % n).to_biguint().expect("characteristic zero");
            let r: u64 = (v % &q).try_into().expect("residue below modulus");
            r as u32
        })
        .collect();
    Ok(FiniteMat { space, entries })
}

/// A subgroup of `GL_n(Z/p^m)` enumerated by breadth-first closure.
///
/// Elements are stored in BFS order (layers by word length in the generators and their
/// inverses, each layer sorted lexicographically). For every element the BFS tree records the
/// predecessor and the letter used, which yields a shortest word for it.
#[derive(Clone, Debug)]
pub struct FiniteGroup {
    space: MatSpace,
    generators: Vec<FiniteMat>,
    // generators followed by their inverses
    letters: Vec<FiniteMat>,
    elements: Vec<u128>,
    index: HashMap<u128, u32>,
    // (predecessor index, letter index); the identity points at itself
    parent: Vec<(u32, u32)>,
}

/// Breadth-first closure of `gens` under left multiplication by the generators and their
/// inverses. An empty generator list requires `space` to be known, hence the argument.
pub fn group_closure(
    space: MatSpace,
    gens: &[FiniteMat],
    cap: usize,
) -> Result<FiniteGroup, CongruenceError> {
    let bits = space.key_bits();
    if bits > 128 {
        return Err(CongruenceError::KeyTooWide(bits));
    }
    let mut letters = Vec::with_capacity(2 * gens.len());
    for g in gens {
        if g.space != space {
            return Err(CongruenceError::Mismatch(space.to_string(), g.space.to_string()));
        }
        letters.push(g.clone());
    }
    for g in gens {
        letters.push(g.inverse()?);
    }
    let letter_entries: Vec<&[u32]> = letters.iter().map(|l| l.entries.as_slice()).collect();

    let id = FiniteMat::identity(space).key();
    let mut elements = vec![id];
    let mut parent = vec![(0u32, 0u32)];
    let mut index = HashMap::new();
    index.insert(id, 0u32);

    let nn = space.n * space.n;
    let mut x = vec![0u32; nn];
    let mut y = vec![0u32; nn];
    let mut layer_start = 0;
    while layer_start < elements.len() {
        let layer_end = elements.len();
        let mut next: Vec<(u128, u32, u32)> = Vec::new();
        for xi in layer_start..layer_end {
            space.unpack(elements[xi], &mut x);
            for (li, l) in letter_entries.iter().enumerate() {
                mul_into(space, l, &x, &mut y);
                let key = space.pack(&y);
                if let std::collections::hash_map::Entry::Vacant(e) = index.entry(key) {
                    e.insert(u32::MAX);
                    next.push((key, xi as u32, li as u32));
                }
            }
        }
        if elements.len() + next.len() > cap {
            return Err(CongruenceError::ResourceCap(cap));
        }
        next.sort_unstable_by_key(|&(k, _, _)| k);
        for (key, pred, letter) in next {
            index.insert(key, elements.len() as u32);
            elements.push(key);
            parent.push((pred, letter));
        }
        layer_start = layer_end;
    }
    Ok(FiniteGroup {
        space,
        generators: gens.to_vec(),
        letters,
        elements,
        index,
        parent,
    })
}

impl FiniteGroup {
    pub fn space(&self) -> MatSpace {
        self.space
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn generators(&self) -> &[FiniteMat] {
        &self.generators
    }

    /// Generators followed by their inverses; word letters index into this list.
    pub fn letters(&self) -> &[FiniteMat] {
        &self.letters
    }

    pub fn contains(&self, m: &FiniteMat) -> bool {
        m.space == self.space && self.index.contains_key(&m.key())
    }

    pub fn position(&self, m: &FiniteMat) -> Option<usize> {
        if m.space != self.space {
            return None;
        }
        self.index.get(&m.key()).map(|&i| i as usize)
    }

    pub fn element(&self, idx: usize) -> FiniteMat {
        let mut entries = vec![0; self.space.n * self.space.n];
        self.space.unpack(self.elements[idx], &mut entries);
        FiniteMat {
            space: self.space,
            entries,
        }
    }

    pub fn elements(&self) -> impl Iterator<Item = FiniteMat> + '_ {
        (0..self.order()).map(|i| self.element(i))
    }

    /// Shortest word (letter indices) whose product, read left to right, is element `idx`.
    pub fn word_for(&self, idx: usize) -> Vec<usize> {
        let mut word = Vec::new();
        let mut cur = idx;
        while cur != 0 {
            let (pred, letter) = self.parent[cur];
            word.push(letter as usize);
            cur = pred as usize;
        }
        // element = l_1 l_2 ... l_k, where l_1 was applied last
        word
    }

    pub fn evaluate_word(&self, word: &[usize]) -> FiniteMat {
        word.iter().fold(FiniteMat::identity(self.space), |acc, &l| {
            acc.mul(&self.letters[l]).expect("same space")
        })
    }

    /// Inverse letter index of letter `l`.
    pub fn inverse_letter(&self, l: usize) -> usize {
        let r = self.generators.len();
        if l < r {
            l + r
        } else {
            l - r
        }
    }
}

/// `|G| / |H|`, after checking `H <= G`.
pub fn subgroup_index(h: &FiniteGroup, g: &FiniteGroup) -> Result<u64, CongruenceError> {
    if h.space != g.space || !h.elements.iter().all(|k| g.index.contains_key(k)) {
        return Err(CongruenceError::NotSubgroup);
    }
    let (go, ho) = (g.order() as u64, h.order() as u64);
    assert_eq!(go % ho, 0, "Lagrange: |H| = {ho} does not divide |G| = {go}");
    Ok(go / ho)
}

/// Elementary generators `E_{i,j}(x)` for all `i != j`.
pub fn elementary_generators(space: MatSpace, x: i64) -> Vec<FiniteMat> {
    let n = space.n;
    let mut out = Vec::new();
    for i in 1..=n {
        for j in 1..=n {
            if i != j {
                out.push(FiniteMat::elementary(space, i, j, x).expect("valid indices"));
            }
        }
    }
    out
}

pub fn special_linear_group(
    n: usize,
    p: u32,
    m: u32,
    cap: usize,
) -> Result<FiniteGroup, CongruenceError> {
    let space = MatSpace::new(n, p, m)?;
    group_closure(space, &elementary_generators(space, 1), cap)
}

/// `|SL_n(Z/p^m)| = p^{(m-1)(n^2-1)} p^{n(n-1)/2} prod_{i=2}^n (p^i - 1)`.
pub fn sl_order_formula(n: u32, p: u32, m: u32) -> u128 {
    let p = p as u128;
    let mut order = p.pow((m - 1) * (n * n - 1)) * p.pow(n * (n - 1) / 2);
    for i in 2..=n {
        order *= p.pow(i) - 1;
    }
    order
}

/// Index in `SL_n(Z/p^m)` of the image of `EL_n(p^k Z_p)`, the group generated by all
/// `E_{i,j}(p^k u)`. Since `E_{i,j}(p^k u) = E_{i,j}(p^k)^u`, the `E_{i,j}(p^k)` suffice.
pub fn el_image_index(n: usize, p: u32, k: u32, m: u32, cap: usize) -> Result<u64, CongruenceError> {
    if k >= m {
        return Err(CongruenceError::Precondition(format!("need k < m, got k={k}, m={m}")));
    }
    let space = MatSpace::new(n, p, m)?;
    let g = group_closure(space, &elementary_generators(space, 1), cap)?;
    let h = group_closure(space, &elementary_generators(space, (p as i64).pow(k)), cap)?;
    subgroup_index(&h, &g)
}

/// Index in `G` of the congruence kernel `G ∩ Ker(SL_n(Z/p^m) -> SL_n(Z/p^k))`, computed as the
/// size of the image of `G` modulo `p^k`.
pub fn congruence_kernel_index(g: &FiniteGroup, k: u32) -> Result<u64, CongruenceError> {
    let space = g.space;
    if k > space.m {
        return Err(CongruenceError::Precondition(format!("need k <= m, got k={k}, m={}", space.m)));
    }
    let qk = space.p.pow(k);
    let image: std::collections::HashSet<Vec<u32>> = g
        .elements()
        .map(|x| x.entries.iter().map(|&e| e % qk).collect())
        .collect();
    Ok(image.len() as u64)
}

/// Normal closure of the commutators of generator pairs, i.e. `[G, G]`.
pub fn derived_subgroup(g: &FiniteGroup, cap: usize) -> Result<FiniteGroup, CongruenceError> {
    let gens = g.generators();
    let mut normal_gens = Vec::new();
    for (i, a) in gens.iter().enumerate() {
        for b in &gens[i + 1..] {
            let c = a.commutator(b)?;
            if !c.is_identity() && !normal_gens.contains(&c) {
                normal_gens.push(c);
            }
        }
    }
    loop {
        let n = group_closure(g.space, &normal_gens, cap)?;
        let mut added = Vec::new();
        for x in gens {
            for c in &normal_gens {
                let y = c.conjugate_by(x)?;
                if !n.contains(&y) && !added.contains(&y) {
                    added.push(y);
                }
            }
        }
        if added.is_empty() {
            return Ok(n);
        }
        normal_gens.extend(added);
    }
}

/// The quotient `G / N` for a normal subgroup `N`, with a coset label for every element of `G`.
#[derive(Clone, Debug)]
pub struct Quotient {
    /// coset label per element index of `G`
    pub coset_of: Vec<u32>,
    /// one representative (element index of `G`) per coset
    pub representatives: Vec<usize>,
    /// `table[a][b]` = label of coset `a * b`
    pub table: Vec<Vec<u32>>,
}

impl Quotient {
    pub fn order(&self) -> usize {
        self.representatives.len()
    }

    pub fn identity(&self) -> u32 {
        self.coset_of[0]
    }

    fn element_order(&self, a: u32) -> u64 {
        let e = self.identity();
        let mut x = a;
        let mut k = 1;
        while x != e {
            x = self.table[x as usize][a as usize];
            k += 1;
        }
        k
    }

    fn pow(&self, a: u32, mut e: u64) -> u32 {
        let mut acc = self.identity();
        let mut base = a;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.table[acc as usize][base as usize];
            }
            base = self.table[base as usize][base as usize];
            e >>= 1;
        }
        acc
    }

    /// Invariant factors `d_1 | d_2 | ... ` of the quotient, assuming it is abelian.
    /// The trivial group has no factors.
    pub fn invariant_factors(&self) -> Vec<u64> {
        let order = self.order() as u64;
        let mut per_prime: Vec<Vec<u64>> = Vec::new();
        for (ell, mult) in factorize(order) {
            // s_j = log_ell #{a : a^(ell^j) = 1}; #{cyclic factors of order >= ell^j} = s_j - s_{j-1}
            let mut s_prev = 0u32;
            let mut at_least = Vec::new();
            let mut j = 1;
            while s_prev < mult {
                let e = ell.pow(j);
                let count = (0..self.order() as u32)
                    .filter(|&a| self.pow(a, e) == self.identity())
                    .count() as u64;
                let s = count.ilog(ell);
                at_least.push((s - s_prev) as usize);
                s_prev = s;
                j += 1;
            }
            // exponents of the ell-primary cyclic factors, largest first
            let mut exps = Vec::new();
            for (idx, &cnt) in at_least.iter().enumerate() {
                let next = at_least.get(idx + 1).copied().unwrap_or(0);
                for _ in 0..cnt - next {
                    exps.push(ell.pow(idx as u32 + 1));
                }
            }
            exps.sort_unstable_by(|a, b| b.cmp(a));
            per_prime.push(exps);
        }
        let len = per_prime.iter().map(Vec::len).max().unwrap_or(0);
        let mut factors: Vec<u64> = (0..len)
            .map(|i| per_prime.iter().map(|v| v.get(i).copied().unwrap_or(1)).product())
            .collect();
        factors.reverse();
        factors
    }

    /// Largest element order, equal to the last invariant factor.
    pub fn exponent(&self) -> u64 {
        (0..self.order() as u32)
            .map(|a| self.element_order(a))
            .max()
            .unwrap_or(1)
    }
}

fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        let mut k = 0;
        while n.is_multiple_of(d) {
            n /= d;
            k += 1;
        }
        if k > 0 {
            out.push((d, k));
        }
        d += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Cosets of a normal subgroup `n` of `g`.
pub fn quotient(g: &FiniteGroup, n: &FiniteGroup) -> Result<Quotient, CongruenceError> {
    if n.space != g.space || !n.elements.iter().all(|k| g.index.contains_key(k)) {
        return Err(CongruenceError::NotSubgroup);
    }
    let nn = g.space.n * g.space.n;
    let mut coset_of = vec![u32::MAX; g.order()];
    let mut representatives = Vec::new();
    let mut x = vec![0u32; nn];
    let mut h = vec![0u32; nn];
    let mut y = vec![0u32; nn];
    for idx in 0..g.order() {
        if coset_of[idx] != u32::MAX {
            continue;
        }
        let label = representatives.len() as u32;
        representatives.push(idx);
        g.space.unpack(g.elements[idx], &mut x);
        for &hk in &n.elements {
            g.space.unpack(hk, &mut h);
            mul_into(g.space, &x, &h, &mut y);
            let j = g.index[&g.space.pack(&y)] as usize;
            coset_of[j] = label;
        }
    }
    let reps: Vec<FiniteMat> = representatives.iter().map(|&i| g.element(i)).collect();
    let table = reps
        .iter()
        .map(|a| {
            reps.iter()
                .map(|b| {
                    let ab = a.mul(b).expect("same space");
                    coset_of[g.position(&ab).expect("closed under products")]
                })
                .collect()
        })
        .collect();
    Ok(Quotient {
        coset_of,
        representatives,
        table,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Abelianization {
    pub group_order: usize,
    pub derived_order: usize,
    pub invariant_factors: Vec<u64>,
}

impl Abelianization {
    pub fn order(&self) -> u64 {
        self.invariant_factors.iter().product()
    }

    pub fn is_trivial(&self) -> bool {
        self.invariant_factors.is_empty()
    }
}

pub fn abelianization(g: &FiniteGroup, cap: usize) -> Result<Abelianization, CongruenceError> {
    let d = derived_subgroup(g, cap)?;
    let q = quotient(g, &d)?;
    Ok(Abelianization {
        group_order: g.order(),
        derived_order: d.order(),
        invariant_factors: q.invariant_factors(),
    })
}

/// Image of one generator of `SL_2(Z_p)` under the representation: the rotation by
/// `2 pi multiple / c` in the leading 2x2 block, identity elsewhere.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GeneratorImage {
    pub generator: String,
    pub multiple: u64,
}

/// A nontrivial homomorphism `SL_2(Z_p) -> GL_D(R)` factoring through a cyclic quotient of the
/// abelianization of `SL_2(Z/p^{2k})`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RepDescription {
    pub p: u32,
    pub k: u32,
    pub cyclic_order: u64,
    pub target_dim: usize,
    pub abelianization: Vec<u64>,
    pub generator_images: Vec<GeneratorImage>,
}

impl RepDescription {
    /// Rotation multiple (mod `c`) of a word in the generators and their inverses, with
    /// letters indexed as in [`FiniteGroup::letters`].
    pub fn word_multiple(&self, word: &[usize]) -> u64 {
        let c = self.cyclic_order;
        let r = self.generator_images.len();
        word.iter().fold(0, |acc, &l| {
            let m = if l < r {
                self.generator_images[l].multiple
            } else {
                (c - self.generator_images[l - r].multiple) % c
            };
            (acc + m) % c
        })
    }

    /// Floating point rendering of the image of a rotation multiple, for display only.
    pub fn render_matrix(&self, multiple: u64) -> Vec<Vec<f64>> {
        let d = self.target_dim;
        let theta = 2.0 * std::f64::consts::PI * multiple as f64 / self.cyclic_order as f64;
        let mut m = vec![vec![0.0; d]; d];
        for (i, row) in m.iter_mut().enumerate() {
            row[i] = 1.0;
        }
        m[0][0] = theta.cos();
        m[0][1] = -theta.sin();
        m[1][0] = theta.sin();
        m[1][1] = theta.cos();
        m
    }

    pub fn to_json(&self) -> Value {
        json!({
            "p": self.p,
            "k": self.k,
            "cyclic_order": self.cyclic_order,
            "target_dim": self.target_dim,
            "abelianization": self.abelianization,
            "generator_images": self.generator_images.iter().map(|g| json!({
                "generator": g.generator,
                "multiple": g.multiple,
                "angle": format!("2pi*{}/{}", g.multiple, self.cyclic_order),
                "matrix": self.render_matrix(g.multiple),
            })).collect::<Vec<_>>(),
        })
    }
}

/// The closure of `SL_2(Z/p^{2k})` used by [`nontrivial_rep`], with `k = 3` for `p = 2` and
/// `k = 1` for `p = 3`.
pub fn rep_level(p: u32) -> Result<(u32, MatSpace), CongruenceError> {
    let k = match p {
        2 => 3,
        3 => 1,
        _ => {
            return Err(CongruenceError::Precondition(format!(
                "nontrivial representations are constructed only for p = 2, 3; got {p}"
            )))
        }
    };
    Ok((k, MatSpace::new(2, p, 2 * k)?))
}

pub fn nontrivial_rep(p: u32, dim: usize, cap: usize) -> Result<(RepDescription, FiniteGroup), CongruenceError> {
    if dim < 2 {
        return Err(CongruenceError::Precondition(format!("target dimension {dim} < 2")));
    }
    let (k, space) = rep_level(p)?;
    let gens = vec![
        FiniteMat::elementary(space, 1, 2, 1)?,
        FiniteMat::elementary(space, 2, 1, 1)?,
    ];
    let g = group_closure(space, &gens, cap)?;
    let d = derived_subgroup(&g, cap)?;
    let q = quotient(&g, &d)?;
    let factors = q.invariant_factors();
    let c = *factors.last().ok_or(CongruenceError::AbelianizationTrivial)?;
    let images: Vec<u32> = gens
        .iter()
        .map(|x| q.coset_of[g.position(x).expect("generator in group")])
        .collect();
    let multiples = find_character(&q, &images, c).ok_or(CongruenceError::AbelianizationTrivial)?;
    let rep = RepDescription {
        p,
        k,
        cyclic_order: c,
        target_dim: dim,
        abelianization: factors,
        generator_images: ["E12(1)", "E21(1)"]
            .iter()
            .zip(multiples)
            .map(|(name, multiple)| GeneratorImage {
                generator: name.to_string(),
                multiple,
            })
            .collect(),
    };
    Ok((rep, g))
}

/// A surjective homomorphism from the abelian quotient onto `Z/c`, given by the values on the
/// generator images. Found by trying every assignment and checking consistency on the Cayley
/// graph of the quotient.
fn find_character(q: &Quotient, gens: &[u32], c: u64) -> Option<Vec<u64>> {
    let r = gens.len();
    let total = c.checked_pow(r as u32)?;
    'assign: for code in 0..total {
        let vals: Vec<u64> = (0..r).map(|i| code / c.pow(i as u32) % c).collect();
        if vals.iter().fold(c, |acc, &v| gcd(acc, v)) != 1 {
            continue;
        }
        let mut chi = vec![None; q.order()];
        chi[q.identity() as usize] = Some(0u64);
        let mut stack = vec![q.identity()];
        while let Some(a) = stack.pop() {
            let va = chi[a as usize].expect("visited");
            for (gi, &g) in gens.iter().enumerate() {
                let b = q.table[a as usize][g as usize];
                let vb = (va + vals[gi]) % c;
                match chi[b as usize] {
                    None => {
                        chi[b as usize] = Some(vb);
                        stack.push(b);
                    }
                    Some(x) if x != vb => continue 'assign,
                    Some(_) => {}
                }
            }
        }
        return Some(vals);
    }
    None
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Random words in the letters of `g` whose product is the identity: a random word followed by
/// the inverse of the BFS word of its product.
pub fn random_relators<R: Rng + ?Sized>(
    g: &FiniteGroup,
    count: usize,
    max_len: usize,
    rng: &mut R,
) -> Vec<Vec<usize>> {
    let letters = g.letters().len();
    (0..count)
        .map(|_| {
            let len = rng.gen_range(1..=max_len);
            let mut word: Vec<usize> = (0..len).map(|_| rng.gen_range(0..letters)).collect();
            let product = g.evaluate_word(&word);
            let idx = g.position(&product).expect("product lies in the group");
            let back = g.word_for(idx);
            word.extend(back.iter().rev().map(|&l| g.inverse_letter(l)));
            word
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::localring::make_ring;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::collections::BTreeSet;

    const CAP: usize = DEFAULT_ELEMENT_CAP;

    fn brute_sl_order(n: usize, q: u64) -> usize {
        // det via permutations of small matrices, independent of the closure code
        let nn = n * n;
        let total = q.pow(nn as u32);
        let mut count = 0;
        let mut m = vec![0u64; nn];
        for code in 0..total {
            let mut c = code;
            for slot in m.iter_mut() {
                *slot = c % q;
                c /= q;
            }
            let det = match n {
                2 => (m[0] * m[3] + q * q - m[1] * m[2] % q) % q,
                3 => {
                    let t = |a: usize, b: usize, cc: usize| m[a] * m[b] % q * m[cc] % q;
                    (t(0, 4, 8) + t(1, 5, 6) + t(2, 3, 7) + 3 * q
                        - t(2, 4, 6)
                        - t(0, 5, 7)
                        - t(1, 3, 8))
                        % q
                }
                _ => unreachable!(),
            };
            if det == 1 {
                count += 1;
            }
        }
        count
    }

    #[test]
    fn project_examples() {
        let r = make_ring(Characteristic::Zero, 2, 10).unwrap();
        let i = RMatrix::identity(&r, 2);
        assert!(project(&i, 3).unwrap().is_identity());
        let e = RMatrix::elementary(2, 1, 2, &r.from_i64(8)).unwrap();
        assert!(project(&e, 3).unwrap().is_identity());
        assert!(project(&i, 11).is_err());
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..30 {
            let a = RMatrix::random_sl(&r, 3, &mut rng);
            let b = RMatrix::random_sl(&r, 3, &mut rng);
            let ab = project(&a.mul(&b).unwrap(), 4).unwrap();
            assert_eq!(ab, project(&a, 4).unwrap().mul(&project(&b, 4).unwrap()).unwrap());
        }
    }

    #[test]
    fn closure_examples() {
        let s = MatSpace::new(2, 2, 1).unwrap();
        let trivial = group_closure(s, &[], CAP).unwrap();
        assert_eq!(trivial.order(), 1);
        let g = group_closure(s, &elementary_generators(s, 1), CAP).unwrap();
        assert_eq!(g.order(), brute_sl_order(2, 2));
        assert_eq!(g.order(), 6);
        let g3 = special_linear_group(2, 3, 1, CAP).unwrap();
        assert_eq!(g3.order(), brute_sl_order(2, 3));
        assert_eq!(g3.order(), 24);
        assert_eq!(
            special_linear_group(2, 5, 2, 100).unwrap_err(),
            CongruenceError::ResourceCap(100)
        );
    }

    #[test]
    fn orders_match_brute_force_and_formula() {
        for (n, p, m) in [(2usize, 2u32, 2u32), (2, 2, 3), (2, 3, 2), (2, 5, 1), (3, 2, 1)] {
            let g = special_linear_group(n, p, m, CAP).unwrap();
            assert_eq!(g.order() as u128, sl_order_formula(n as u32, p, m));
            if (p as u64).pow(m * (n * n) as u32) <= 1 << 16 {
                assert_eq!(g.order(), brute_sl_order(n, (p as u64).pow(m)));
            }
        }
    }

    #[test]
    fn enumeration_is_deterministic() {
        let a = special_linear_group(2, 3, 2, CAP).unwrap();
        let b = special_linear_group(2, 3, 2, CAP).unwrap();
        assert_eq!(a.elements, b.elements);
        assert_eq!(a.element(0), FiniteMat::identity(a.space()));
    }

    #[test]
    fn bfs_words_evaluate_to_their_elements() {
        let g = special_linear_group(2, 3, 2, CAP).unwrap();
        for idx in (0..g.order()).step_by(17) {
            assert_eq!(g.evaluate_word(&g.word_for(idx)), g.element(idx));
        }
    }

    #[test]
    fn index_examples() {
        let g = special_linear_group(2, 2, 1, CAP).unwrap();
        assert_eq!(subgroup_index(&g, &g).unwrap(), 1);
        let trivial = group_closure(g.space(), &[], CAP).unwrap();
        assert_eq!(subgroup_index(&trivial, &g).unwrap(), 6);
        let other = special_linear_group(2, 3, 1, CAP).unwrap();
        assert_eq!(subgroup_index(&other, &g).unwrap_err(), CongruenceError::NotSubgroup);
    }

    // values frozen from an independent Python enumeration (naive closure of tuples)
    #[test]
    fn el_index_values() {
        assert_eq!(el_image_index(2, 2, 0, 3, CAP).unwrap(), 1);
        assert_eq!(el_image_index(2, 3, 0, 2, CAP).unwrap(), 1);
        assert_eq!(el_image_index(3, 2, 0, 2, CAP).unwrap(), 1);
        assert_eq!(el_image_index(2, 2, 1, 2, CAP).unwrap(), 12);
        assert_eq!(el_image_index(2, 2, 1, 3, CAP).unwrap(), 12);
        assert_eq!(el_image_index(2, 2, 2, 3, CAP).unwrap(), 96);
        assert_eq!(el_image_index(2, 3, 1, 2, CAP).unwrap(), 72);
        assert_eq!(el_image_index(3, 2, 1, 2, CAP).unwrap(), 672);
        assert!(el_image_index(2, 2, 3, 3, CAP).is_err());
    }

    #[test]
    fn el_index_monotone() {
        let a = el_image_index(2, 2, 1, 4, CAP).unwrap();
        let b = el_image_index(2, 2, 2, 4, CAP).unwrap();
        let c = el_image_index(2, 2, 3, 4, CAP).unwrap();
        assert_eq!(b % a, 0);
        assert_eq!(c % b, 0);
    }

    #[test]
    fn kernel_index_is_order_of_reduction() {
        let g = special_linear_group(2, 2, 3, CAP).unwrap();
        assert_eq!(congruence_kernel_index(&g, 0).unwrap(), 1);
        assert_eq!(congruence_kernel_index(&g, 1).unwrap(), 6);
        assert_eq!(congruence_kernel_index(&g, 2).unwrap(), 48);
        assert_eq!(congruence_kernel_index(&g, 3).unwrap(), 384);
        assert!(congruence_kernel_index(&g, 4).is_err());
    }

    fn brute_derived_order(g: &FiniteGroup) -> usize {
        let elems: Vec<FiniteMat> = g.elements().collect();
        let comms: BTreeSet<FiniteMat> = elems
            .iter()
            .flat_map(|a| elems.iter().map(move |b| a.commutator(b).unwrap()))
            .collect();
        let mut set: BTreeSet<FiniteMat> = comms.clone();
        loop {
            let mut grew = false;
            let cur: Vec<FiniteMat> = set.iter().cloned().collect();
            for x in &cur {
                for c in &comms {
                    if set.insert(x.mul(c).unwrap()) {
                        grew = true;
                    }
                }
            }
            if !grew {
                return set.len();
            }
        }
    }

    #[test]
    fn abelianization_examples() {
        let cases = [
            ((2, 2, 1), vec![2u64]),
            ((2, 3, 1), vec![3]),
            ((2, 2, 2), vec![4]),
            ((2, 3, 2), vec![3]),
            ((2, 5, 1), vec![]),
            ((2, 7, 1), vec![]),
            ((3, 2, 1), vec![]),
        ];
        for ((n, p, m), want) in cases {
            let g = special_linear_group(n, p, m, CAP).unwrap();
            let ab = abelianization(&g, CAP).unwrap();
            assert_eq!(ab.invariant_factors, want, "SL_{n}(Z/{p}^{m})");
            assert_eq!(ab.order() as usize * ab.derived_order, g.order());
            if g.order() <= 200 {
                assert_eq!(ab.derived_order, brute_derived_order(&g));
            }
        }
    }

    #[test]
    fn abelian_group_is_its_own_abelianization() {
        let s = MatSpace::new(2, 2, 3).unwrap();
        let g = group_closure(s, &[FiniteMat::elementary(s, 1, 2, 1).unwrap()], CAP).unwrap();
        let ab = abelianization(&g, CAP).unwrap();
        assert_eq!(ab.derived_order, 1);
        assert_eq!(ab.invariant_factors, vec![8]);
        // Z/2 x Z/4 from two commuting unipotents in SL_3(Z/4)
        let s = MatSpace::new(3, 2, 2).unwrap();
        let gens = [
            FiniteMat::elementary(s, 1, 3, 1).unwrap(),
            FiniteMat::elementary(s, 2, 3, 2).unwrap(),
        ];
        let g = group_closure(s, &gens, CAP).unwrap();
        assert_eq!(abelianization(&g, CAP).unwrap().invariant_factors, vec![2, 4]);
    }

    #[test]
    fn nontrivial_rep_mod_9() {
        let (rep, g) = nontrivial_rep(3, 2, CAP).unwrap();
        assert_eq!(g.order(), 648);
        assert_eq!(rep.cyclic_order, 3);
        assert!(rep.generator_images.iter().any(|i| i.multiple != 0));
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for w in random_relators(&g, 100, 20, &mut rng) {
            assert!(g.evaluate_word(&w).is_identity());
            assert_eq!(rep.word_multiple(&w), 0);
        }
        assert!(nontrivial_rep(5, 2, CAP).is_err());
        assert!(nontrivial_rep(3, 1, CAP).is_err());
    }
}

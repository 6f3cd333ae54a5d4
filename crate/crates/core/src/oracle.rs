//! Brute-force reference computations with plain machine integers.
//!
//! Nothing here calls the ring, matrix or closure code of the other modules. These routines
//! exist to produce pinned fixture values and to cross-check the fast paths on small inputs.

use std::collections::{HashSet, VecDeque};

/// All `x mod q` with `f(x) = 0 mod q`, coefficients lowest degree first.
pub fn roots_mod(coeffs: &[i64], q: u64) -> Vec<u64> {
    (0..q).filter(|&x| eval_mod(coeffs, x, q) == 0).collect()
}

pub fn eval_mod(coeffs: &[i64], x: u64, q: u64) -> u64 {
    let q = q as i128;
    let mut acc = 0i128;
    for &c in coeffs.iter().rev() {
        acc = (acc * x as i128 + c as i128).rem_euclid(q);
    }
    acc as u64
}

/// `p`-adic valuation of `x mod p^n`, `n` for zero.
pub fn val_mod(x: u64, p: u64, n: u32) -> u32 {
    let q = p.pow(n);
    let mut x = x % q;
    if x == 0 {
        return n;
    }
    let mut v = 0;
    while x.is_multiple_of(p) {
        x /= p;
        v += 1;
    }
    v
}

/// Roots of `f` in the class `b = a mod p^{v+1}`, `v = val f'(a)`: the class in which a Newton
/// lift from `a` lands.
pub fn roots_in_lift_class(coeffs: &[i64], a: u64, p: u64, n: u32) -> Vec<u64> {
    let q = p.pow(n);
    let deriv: Vec<i64> = coeffs.iter().enumerate().skip(1).map(|(i, &c)| i as i64 * c).collect();
    let vd = val_mod(eval_mod(&deriv, a, q), p, n);
    let class = p.pow((vd + 1).min(n));
    roots_mod(coeffs, q)
        .into_iter()
        .filter(|&b| (b + q - a % q).is_multiple_of(class))
        .collect()
}

fn det_mod(m: &[u64], n: usize, q: u64) -> u64 {
    // permutation expansion
    let mut perm: Vec<usize> = (0..n).collect();
    let mut total = 0i128;
    permute(&mut perm, 0, &mut |p| {
        let mut inversions = 0;
        for i in 0..n {
            for j in i + 1..n {
                if p[i] > p[j] {
                    inversions += 1;
                }
            }
        }
        let mut term = 1i128;
        for (r, &c) in p.iter().enumerate() {
            term = term * m[r * n + c] as i128 % q as i128;
        }
        total += if inversions % 2 == 0 { term } else { -term };
    });
    total.rem_euclid(q as i128) as u64
}

fn permute(p: &mut Vec<usize>, k: usize, f: &mut impl FnMut(&[usize])) {
    if k == p.len() {
        f(p);
        return;
    }
    for i in k..p.len() {
        p.swap(k, i);
        permute(p, k + 1, f);
        p.swap(k, i);
    }
}

/// `|SL_n(Z/q)|` by counting all matrices of determinant one. Cost `q^{n^2}`.
pub fn sl_order_by_count(n: usize, q: u64) -> u64 {
    let nn = n * n;
    let mut m = vec![0u64; nn];
    let mut count = 0;
    for code in 0..q.pow(nn as u32) {
        let mut c = code;
        for slot in m.iter_mut() {
            *slot = c % q;
            c /= q;
        }
        if det_mod(&m, n, q) == 1 % q {
            count += 1;
        }
    }
    count
}

type Mat = Vec<u64>;

fn mat_mul(a: &Mat, b: &Mat, n: usize, q: u64) -> Mat {
    let mut out = vec![0; n * n];
    for r in 0..n {
        for c in 0..n {
            out[r * n + c] = (0..n).map(|k| a[r * n + k] * b[k * n + c] % q).sum::<u64>() % q;
        }
    }
    out
}

fn identity(n: usize) -> Mat {
    (0..n * n).map(|k| (k % (n + 1) == 0) as u64).collect()
}

fn mat_pow(a: &Mat, e: u64, n: usize, q: u64) -> Mat {
    let mut out = identity(n);
    for _ in 0..e {
        out = mat_mul(&out, a, n, q);
    }
    out
}

/// `E_{i,j}(x)` over `Z/q`, one-based.
pub fn elementary(n: usize, i: usize, j: usize, x: u64, q: u64) -> Mat {
    let mut m = identity(n);
    m[(i - 1) * n + (j - 1)] = x % q;
    m
}

pub fn elementary_set(n: usize, x: u64, q: u64) -> Vec<Mat> {
    let mut out = Vec::new();
    for i in 1..=n {
        for j in 1..=n {
            if i != j {
                out.push(elementary(n, i, j, x, q));
            }
        }
    }
    out
}

/// Closure of `gens` under right multiplication. In a finite group this is the generated
/// subgroup.
pub fn naive_closure(gens: &[Mat], n: usize, q: u64) -> HashSet<Mat> {
    let id = identity(n);
    let mut seen = HashSet::from([id.clone()]);
    let mut queue = VecDeque::from([id]);
    while let Some(g) = queue.pop_front() {
        for s in gens {
            let h = mat_mul(&g, s, n, q);
            if seen.insert(h.clone()) {
                queue.push_back(h);
            }
        }
    }
    seen
}

/// `[G, G]` as the subgroup generated by `[g, s]` for all `g` in `G` and generators `s`. Each
/// `s` is central modulo that subgroup, so the quotient is abelian.
pub fn naive_derived(group: &HashSet<Mat>, gens: &[Mat], n: usize, q: u64) -> HashSet<Mat> {
    let s_inv: Vec<Mat> = gens.iter().map(|s| inverse_of(s, n, q)).collect();
    let mut comms = HashSet::new();
    for g in group {
        let g_inv = inverse_of(g, n, q);
        for (s, si) in gens.iter().zip(&s_inv) {
            let c = mat_mul(&mat_mul(&mat_mul(g, s, n, q), &g_inv, n, q), si, n, q);
            comms.insert(c);
        }
    }
    // only commutators outside the current span become generators
    let mut kept: Vec<Mat> = Vec::new();
    let mut h = naive_closure(&kept, n, q);
    let mut comms: Vec<Mat> = comms.into_iter().collect();
    comms.sort();
    for c in comms {
        if !h.contains(&c) {
            kept.push(c);
            h = naive_closure(&kept, n, q);
        }
    }
    h
}

fn inverse_of(g: &Mat, n: usize, q: u64) -> Mat {
    // g has finite order; walk powers until the identity
    let id = identity(n);
    let mut prev = id.clone();
    let mut cur = g.clone();
    while cur != id {
        prev = cur.clone();
        cur = mat_mul(&cur, g, n, q);
    }
    prev
}

/// Invariant factors `d_1 | d_2 | ...` (ascending, all `> 1`) of `G / H` for a normal `H` with
/// abelian quotient, from the counts `#{g : g^{l^j} in H}`.
pub fn abelian_invariants(group: &HashSet<Mat>, h: &HashSet<Mat>, n: usize, q: u64) -> Vec<u64> {
    let order = (group.len() / h.len()) as u64;
    let mut factors: Vec<u64> = Vec::new();
    let mut rest = order;
    let mut l = 2;
    while rest > 1 {
        if !rest.is_multiple_of(l) {
            l += 1;
            continue;
        }
        while rest.is_multiple_of(l) {
            rest /= l;
        }
        // log_l of the size of the l^j-torsion, for j = 0, 1, ...
        let mut logs = vec![0u32];
        let mut j = 1;
        loop {
            let e = l.pow(j);
            let count = group.iter().filter(|g| h.contains(&mat_pow(g, e, n, q))).count() / h.len();
            let lg = (count as f64).log(l as f64).round() as u32;
            if lg == *logs.last().unwrap() {
                break;
            }
            logs.push(lg);
            j += 1;
        }
        // number of cyclic l-factors of order >= l^j is logs[j] - logs[j-1]
        let levels = logs.len() - 1;
        let mut exps = Vec::new();
        for j in 1..=levels {
            let at_least_j = logs[j] - logs[j - 1];
            let at_least_next = if j < levels { logs[j + 1] - logs[j] } else { 0 };
            for _ in 0..at_least_j - at_least_next {
                exps.push(j as u32);
            }
        }
        exps.sort_unstable_by(|a, b| b.cmp(a));
        // merge into the invariant factors, largest l-part with largest factor
        let mut fs = factors.clone();
        fs.sort_unstable_by(|a, b| b.cmp(a));
        while fs.len() < exps.len() {
            fs.push(1);
        }
        for (f, &e) in fs.iter_mut().zip(&exps) {
            *f *= l.pow(e);
        }
        factors = fs;
        l += 1;
    }
    factors.retain(|&f| f > 1);
    factors.sort_unstable();
    factors
}

/// Index of the group generated by the `E_{i,j}(p^k)` in `SL_n(Z/p^m)`.
pub fn el_index(n: usize, p: u64, k: u32, m: u32) -> u64 {
    let q = p.pow(m);
    let g = naive_closure(&elementary_set(n, 1, q), n, q);
    let h = naive_closure(&elementary_set(n, p.pow(k), q), n, q);
    assert!(h.iter().all(|x| g.contains(x)));
    (g.len() / h.len()) as u64
}

/// Invariant factors of the abelianization of `SL_n(Z/p^m)`.
pub fn sl_abelianization(n: usize, p: u64, m: u32) -> (u64, u64, Vec<u64>) {
    let q = p.pow(m);
    let gens = elementary_set(n, 1, q);
    let g = naive_closure(&gens, n, q);
    let d = naive_derived(&g, &gens, n, q);
    let factors = abelian_invariants(&g, &d, n, q);
    (g.len() as u64, d.len() as u64, factors)
}

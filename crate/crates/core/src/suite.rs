//! End-to-end checks of the constructive lemmas, one function per acceptance criterion.
//!
//! Every check is exact. A criterion passes when all of its instances hold and it finishes
//! within its time budget. Randomness is seeded from [`SuiteConfig::seed`] so a run is
//! reproducible.

use std::time::{Duration, Instant};

use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::congruence::{
    abelianization, el_image_index, nontrivial_rep, random_relators, sl_order_formula,
    special_linear_group,
};
use crate::flags::{
    adapted_basis, block_sizes, hyperplane_bound_check, is_block_triangular, jh_series,
    random_hyperplane, random_unipotent_set, verify_jh,
};
use crate::golden::{self, GoldenEntry};
use crate::hensel::{fourth_root_setup, fourth_root_witness, hensel_lift, Polynomial};
use crate::localring::{make_ring, Characteristic, RingDescriptor, RingElem};
use crate::matgroup::{
    decompose_sl2, decompose_sln, diag_check, dilation_commutator_check, el_diagonal_word,
    min_letter_valuation, perfectness_witness, steinberg_check, weyl_check, ElementaryWord,
    RMatrix,
};
use crate::oracle;

#[derive(Clone, Copy, Debug)]
pub struct SuiteConfig {
    pub seed: u64,
    pub element_cap: usize,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            seed: 0x5eed,
            element_cap: crate::congruence::DEFAULT_ELEMENT_CAP,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Outcome {
    pub id: u8,
    pub name: &'static str,
    /// every instance held
    pub checks_passed: bool,
    pub within_limit: bool,
    pub elapsed: Duration,
    pub limit: Option<Duration>,
    pub detail: Value,
}

impl Outcome {
    pub fn passed(&self) -> bool {
        self.checks_passed && self.within_limit
    }

    pub fn to_json(&self) -> Value {
        json!({
            "id": self.id,
            "name": self.name,
            "passed": self.passed(),
            "checks_passed": self.checks_passed,
            "within_limit": self.within_limit,
            "elapsed_ms": self.elapsed.as_millis() as u64,
            "limit_ms": self.limit.map(|l| l.as_millis() as u64),
            "detail": self.detail,
        })
    }

    /// One line `criterion N name: PASS|FAIL (...)`.
    pub fn summary_line(&self) -> String {
        let verdict = if self.passed() { "PASS" } else { "FAIL" };
        let mut line = format!(
            "criterion {:>2} {}: {} ({:.2}s",
            self.id,
            self.name,
            verdict,
            self.elapsed.as_secs_f64()
        );
        if let Some(l) = self.limit {
            line.push_str(&format!(", limit {}s", l.as_secs()));
        }
        line.push(')');
        if !self.checks_passed {
            if let Some(f) = self.detail.get("failures").and_then(|f| f.get(0)) {
                line.push_str(&format!(": {f}"));
            }
        } else if !self.within_limit {
            line.push_str(": time budget exceeded");
        }
        line
    }
}

pub const CRITERIA: [(u8, &str); 10] = [
    (1, "fourth-root witness"),
    (2, "hensel lift vs brute force"),
    (3, "SL2 decomposition round trip"),
    (4, "SL3/SL4 decomposition round trip"),
    (5, "identity suite"),
    (6, "congruence orders"),
    (7, "abelianization dichotomy"),
    (8, "EL image index"),
    (9, "nontrivial representation"),
    (10, "flags"),
];

fn limit_of(id: u8) -> Option<Duration> {
    let secs = match id {
        1 => 1,
        3 => 10,
        4 => 30,
        6 => 60,
        7 => 300,
        9 => 300,
        10 => 30,
        _ => return None,
    };
    Some(Duration::from_secs(secs))
}

/// Counts instances and keeps the first few failure messages.
#[derive(Default)]
struct Tally {
    instances: usize,
    failures: Vec<String>,
    failed: usize,
}

impl Tally {
    const KEEP: usize = 10;

    fn check(&mut self, ok: bool, msg: impl FnOnce() -> String) {
        self.instances += 1;
        if !ok {
            self.fail(msg());
        }
    }

    fn fail(&mut self, msg: String) {
        self.failed += 1;
        if self.failures.len() < Self::KEEP {
            self.failures.push(msg);
        }
    }

    fn ok(&self) -> bool {
        self.failed == 0 && self.instances > 0
    }

    fn detail(&self, extra: Value) -> Value {
        let mut v = json!({
            "instances": self.instances,
            "failed": self.failed,
            "failures": self.failures,
        });
        if let (Value::Object(m), Value::Object(e)) = (&mut v, extra) {
            m.extend(e);
        }
        v
    }
}

pub fn run(id: u8, cfg: &SuiteConfig) -> Outcome {
    let name = CRITERIA
        .iter()
        .find(|(i, _)| *i == id)
        .unwrap_or_else(|| panic!("no criterion {id}"))
        .1;
    let start = Instant::now();
    let (tally, extra) = match id {
        1 => fourth_roots(),
        2 => hensel_vs_brute_force(cfg),
        3 => sl2_round_trip(cfg),
        4 => sln_round_trip(cfg),
        5 => identities(cfg),
        6 => congruence_orders(cfg),
        7 => abelianization_dichotomy(cfg),
        8 => el_index(cfg),
        9 => nontrivial_reps(cfg),
        10 => flag_suite(cfg),
        _ => unreachable!(),
    };
    let elapsed = start.elapsed();
    let limit = limit_of(id);
    Outcome {
        id,
        name,
        checks_passed: tally.ok(),
        within_limit: limit.is_none_or(|l| elapsed <= l),
        elapsed,
        limit,
        detail: tally.detail(extra),
    }
}

pub fn run_all(cfg: &SuiteConfig) -> Vec<Outcome> {
    CRITERIA.iter().map(|&(id, _)| run(id, cfg)).collect()
}

fn rng_for(cfg: &SuiteConfig, id: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(cfg.seed ^ id.wrapping_mul(0x9e37_79b9_7f4a_7c15))
}

fn zp(p: u32, n: u32) -> RingDescriptor {
    make_ring(Characteristic::Zero, p, n).expect("valid ring")
}

fn fpt(p: u32, n: u32) -> RingDescriptor {
    make_ring(Characteristic::Positive, p, n).expect("valid ring")
}

fn as_u64(x: &RingElem) -> u64 {
    x.to_biguint().and_then(|b| b.to_u64()).expect("small characteristic-zero element")
}

/// Product of the letters as explicit matrices, independent of [`ElementaryWord::evaluate`].
fn word_product(w: &ElementaryWord) -> RMatrix {
    w.letters().iter().fold(RMatrix::identity(w.ring(), w.n()), |acc, l| {
        acc.mul(&RMatrix::elementary(w.n(), l.i, l.j, &l.x).expect("valid letter"))
            .expect("same ring")
    })
}

fn fourth_roots() -> (Tally, Value) {
    let mut t = Tally::default();
    let mut rows = Vec::new();
    for p in [2u32, 3, 5, 7] {
        let ring = zp(p, 32);
        match fourth_root_witness(&ring) {
            Ok(w) => {
                let expected_r = if p == 2 { 31 } else { p - 1 };
                t.check(w.holds(), || format!("p={p}: q^4 + r = {} != 0", w.certificate));
                t.check(w.r == expected_r, || format!("p={p}: r = {} != {expected_r}", w.r));
                let (f, start, _) = fourth_root_setup(&ring);
                let vd = f.derivative().eval(&start).expect("same ring").valuation();
                let class = vd.finite().map_or(32, |v| v + 1);
                t.check((&w.q - &start).valuation().at_least(class), || {
                    format!("p={p}: q = {} not congruent to {start} mod p^{class}", w.q)
                });
                rows.push(json!({"p": p, "q": w.q.to_string(), "r": w.r}));
            }
            Err(e) => t.fail(format!("p={p}: {e}")),
        }
    }
    (t, json!({"witnesses": rows}))
}

fn hensel_instance(t: &mut Tally, coeffs: &[i64], a: u64, p: u32, n: u32, brute: &[u64]) -> bool {
    let ring = zp(p, n);
    let f = Polynomial::from_ints(&ring, coeffs);
    let a_elem = ring.from_i64(a as i64);
    let unit_derivative = f.derivative().eval(&a_elem).expect("same ring").is_unit();
    match hensel_lift(&f, &a_elem) {
        Ok(root) => {
            let r = as_u64(&root);
            if unit_derivative {
                t.check(brute == [r], || {
                    format!("f={coeffs:?} a={a} mod {p}^{n}: lift {r}, brute force {brute:?}")
                });
            } else {
                t.check(brute.contains(&r), || {
                    format!("f={coeffs:?} a={a} mod {p}^{n}: lift {r} not among {brute:?}")
                });
            }
        }
        Err(e) => t.fail(format!("f={coeffs:?} a={a} mod {p}^{n}: {e}")),
    }
    unit_derivative
}

fn hensel_vs_brute_force(cfg: &SuiteConfig) -> (Tally, Value) {
    let mut t = Tally::default();
    let fixtures = golden::embedded("hensel");
    for GoldenEntry { query, value, .. } in &fixtures {
        let coeffs: Vec<i64> = serde_json::from_value(query["poly"].clone()).expect("fixture");
        let a = query["a"].as_u64().expect("fixture");
        let p = query["p"].as_u64().expect("fixture") as u32;
        let n = query["precision"].as_u64().expect("fixture") as u32;
        let brute: Vec<u64> = serde_json::from_value(value.clone()).expect("fixture");
        hensel_instance(&mut t, &coeffs, a, p, n, &brute);
    }

    let mut rng = rng_for(cfg, 2);
    let (mut unit_cases, mut other_cases) = (0, 0);
    while unit_cases < 30 || other_cases < 10 {
        let p = [2u32, 3, 5, 7, 11, 13][rng.gen_range(0..6)];
        let max_n = (16.0 / (p as f64).log2()).floor() as u32;
        let n = rng.gen_range(2..=max_n);
        let q = (p as u64).pow(n);
        let deg = rng.gen_range(1..=4);
        let mut coeffs: Vec<i64> = (0..=deg).map(|_| rng.gen_range(-20..=20)).collect();
        if coeffs[deg] == 0 {
            coeffs[deg] = 1;
        }
        let a = rng.gen_range(0..q);
        let deriv: Vec<i64> = coeffs.iter().enumerate().skip(1).map(|(i, &c)| i as i64 * c).collect();
        let vd = oracle::val_mod(oracle::eval_mod(&deriv, a, q), p as u64, n);
        if 2 * vd + 1 > n {
            continue;
        }
        // shift the constant term so that f(a) has valuation exactly j > 2 vd
        let j = rng.gen_range(2 * vd + 1..=n);
        let fa = oracle::eval_mod(&coeffs, a, q) as i64;
        let unit = rng.gen_range(1..p as i64);
        coeffs[0] = (coeffs[0] - fa + unit * (p as i64).pow(j)).rem_euclid(q as i64);
        if (vd == 0 && unit_cases >= 30) || (vd > 0 && other_cases >= 10) {
            continue;
        }
        let brute = oracle::roots_in_lift_class(&coeffs, a, p as u64, n);
        if hensel_instance(&mut t, &coeffs, a, p, n, &brute) {
            unit_cases += 1;
        } else {
            other_cases += 1;
        }
    }
    (
        t,
        json!({"fixtures": fixtures.len(), "unit_derivative": unit_cases, "nonunit_derivative": other_cases}),
    )
}

fn sl2_round_trip(cfg: &SuiteConfig) -> (Tally, Value) {
    let mut t = Tally::default();
    let mut rng = rng_for(cfg, 3);
    let mut longest = 0;
    for p in [2u32, 3, 5] {
        let ring = zp(p, 12);
        for _ in 0..1000 {
            let m = RMatrix::random_sl(&ring, 2, &mut rng);
            round_trip_sl2(&mut t, &m, &mut longest);
        }
    }
    let ring = zp(2, 2);
    let elems = ring.elements();
    let mut count = 0;
    for a in &elems {
        for b in &elems {
            for c in &elems {
                for d in &elems {
                    let m = RMatrix::from_rows(&ring, vec![vec![a.clone(), b.clone()], vec![c.clone(), d.clone()]])
                        .expect("2x2");
                    if m.det().is_one() {
                        count += 1;
                        round_trip_sl2(&mut t, &m, &mut longest);
                    }
                }
            }
        }
    }
    t.check(count == 48, || format!("SL2(Z/4) has {count} elements, expected 48"));
    (t, json!({"random_per_prime": 1000, "exhaustive_sl2_z4": count, "longest_word": longest}))
}

fn round_trip_sl2(t: &mut Tally, m: &RMatrix, longest: &mut usize) {
    match decompose_sl2(m) {
        Ok(w) => {
            *longest = (*longest).max(w.len());
            t.check(word_product(&w) == *m && w.len() <= 13, || {
                format!("{m:?}: word of length {} does not reproduce the matrix", w.len())
            });
        }
        Err(e) => t.fail(format!("{m:?}: {e}")),
    }
}

fn sln_round_trip(cfg: &SuiteConfig) -> (Tally, Value) {
    let mut t = Tally::default();
    let mut rng = rng_for(cfg, 4);
    for ring in [zp(2, 10), zp(5, 6)] {
        for n in [3, 4] {
            for _ in 0..200 {
                let m = RMatrix::random_sl(&ring, n, &mut rng);
                match decompose_sln(&m) {
                    Ok(w) => t.check(word_product(&w) == m, || format!("{m:?}: round trip failed")),
                    Err(e) => t.fail(format!("{m:?}: {e}")),
                }
            }
        }
    }
    (t, json!({"per_ring_and_dimension": 200}))
}

fn identities(cfg: &SuiteConfig) -> (Tally, Value) {
    const PER_FAMILY: usize = 2000;
    let mut t = Tally::default();
    let mut rng = rng_for(cfg, 5);
    let rings = [
        zp(2, 20),
        zp(3, 12),
        zp(5, 10),
        zp(7, 8),
        zp(13, 6),
        fpt(2, 12),
        fpt(3, 10),
        fpt(5, 8),
    ];
    let perfect_rings = [zp(5, 10), zp(7, 8), zp(13, 6), fpt(5, 8), fpt(7, 6), fpt(13, 5)];
    let mut counts = serde_json::Map::new();
    let mut bump = |name: &str| {
        let c = counts.entry(name.to_string()).or_insert(json!(0));
        *c = json!(c.as_u64().unwrap() + 1);
    };

    for ring in &rings {
        let r = weyl_check(ring);
        t.check(r.holds(), || format!("weyl over {ring}"));
        bump("weyl");
    }
    for _ in 0..PER_FAMILY {
        let ring = &rings[rng.gen_range(0..rings.len())];

        let n = rng.gen_range(3..=5);
        let (x, y) = (ring.random(&mut rng), ring.random(&mut rng));
        match steinberg_check(n, &x, &y) {
            Ok(r) => t.check(r.holds(), || format!("steinberg n={n} x={x} y={y} over {ring}")),
            Err(e) => t.fail(format!("steinberg: {e}")),
        }
        bump("steinberg");

        let a = ring.random_unit(&mut rng);
        match diag_check(&a) {
            Ok(r) => t.check(r.holds(), || format!("diag word a={a} over {ring}")),
            Err(e) => t.fail(format!("diag word: {e}")),
        }
        bump("diag_word");

        let big_n = ring.precision();
        let k = rng.gen_range(1..=big_n / 2);
        let tt = rng.gen_range(0..big_n);
        let y = ring.random_unit(&mut rng);
        let x = ring.random(&mut rng);
        match dilation_commutator_check(k, &y, tt, &x) {
            Ok(r) => t.check(r.holds(), || format!("dilation k={k} t={tt} y={y} x={x} over {ring}")),
            Err(e) => t.fail(format!("dilation: {e}")),
        }
        bump("dilation_commutator");

        let k = rng.gen_range(1..=(big_n - 1) / 2);
        let x = ring.random(&mut rng);
        match el_diagonal_word(ring, k, &x) {
            Ok(w) => {
                let u = &ring.one() + &(&ring.pi_pow(2 * k) * &x);
                let expected = RMatrix::diagonal(ring, &[u.clone(), u.invert().expect("unit")]);
                t.check(
                    word_product(&w) == expected && min_letter_valuation(&w).at_least(k),
                    || format!("el diagonal k={k} x={x} over {ring}"),
                );
            }
            Err(e) => t.fail(format!("el diagonal: {e}")),
        }
        bump("el_diagonal");

        let ring = &perfect_rings[rng.gen_range(0..perfect_rings.len())];
        let x = ring.random(&mut rng);
        match perfectness_witness(&x) {
            Ok(w) => {
                let q2 = &w.q * &w.q;
                let ok = w.report.holds()
                    && (&q2 - &ring.one()).is_unit()
                    && &(&q2 - &ring.one()) * &w.t == x;
                t.check(ok, || format!("perfectness x={x} over {ring}"));
            }
            Err(e) => t.fail(format!("perfectness: {e}")),
        }
        bump("perfectness");
    }
    (t, json!({"per_family": Value::Object(counts)}))
}

fn congruence_orders(cfg: &SuiteConfig) -> (Tally, Value) {
    let mut t = Tally::default();
    let fixtures = golden::embedded("sl_order");
    let mut rows = Vec::new();
    for (p, m) in [(2u32, 1u32), (2, 2), (2, 3), (3, 1), (3, 2), (5, 1), (5, 2)] {
        match special_linear_group(2, p, m, cfg.element_cap) {
            Ok(g) => {
                let pp = p as u128;
                let expected = pp.pow(3 * (m - 1)) * pp * (pp * pp - 1);
                let order = g.order() as u128;
                t.check(order == expected && sl_order_formula(2, p, m) == expected, || {
                    format!("SL2(Z/{p}^{m}): BFS order {order}, expected {expected}")
                });
                if let Some(e) = golden::lookup(&fixtures, &golden::group_query(2, p as u64, m)) {
                    t.check(e.value.as_u64() == Some(order as u64), || {
                        format!("SL2(Z/{p}^{m}): BFS order {order}, fixture {}", e.value)
                    });
                }
                rows.push(json!({"p": p, "m": m, "order": order as u64}));
            }
            Err(e) => t.fail(format!("SL2(Z/{p}^{m}): {e}")),
        }
    }
    (t, json!({"orders": rows}))
}

#[derive(Clone, Copy, Debug)]
enum Expect {
    Order(u64),
    Nontrivial,
    Trivial,
}

fn abelianization_dichotomy(cfg: &SuiteConfig) -> (Tally, Value) {
    let mut t = Tally::default();
    let fixtures = golden::embedded("abelianization");
    let cases = [
        (2usize, 2u32, 1u32, Expect::Order(2)),
        (2, 3, 1, Expect::Order(3)),
        (2, 2, 2, Expect::Nontrivial),
        (2, 3, 2, Expect::Nontrivial),
        (2, 5, 1, Expect::Trivial),
        (2, 5, 2, Expect::Trivial),
        (2, 7, 1, Expect::Trivial),
        (3, 2, 1, Expect::Trivial),
        (3, 3, 1, Expect::Trivial),
    ];
    let mut rows = Vec::new();
    for (n, p, m, expect) in cases {
        let label = format!("SL{n}(Z/{p}^{m})");
        let ab = special_linear_group(n, p, m, cfg.element_cap).and_then(|g| abelianization(&g, cfg.element_cap));
        match ab {
            Ok(ab) => {
                let ok = match expect {
                    Expect::Order(o) => ab.order() == o,
                    Expect::Nontrivial => !ab.is_trivial(),
                    Expect::Trivial => ab.is_trivial(),
                };
                t.check(ok, || format!("{label}: invariant factors {:?}, expected {expect:?}", ab.invariant_factors));
                match golden::lookup(&fixtures, &golden::group_query(n, p as u64, m)) {
                    Some(e) => {
                        let pinned: Vec<u64> =
                            serde_json::from_value(e.value["invariant_factors"].clone()).expect("fixture");
                        t.check(
                            pinned == ab.invariant_factors
                                && e.value["derived_order"].as_u64() == Some(ab.derived_order as u64),
                            || format!("{label}: {:?} disagrees with fixture {}", ab.invariant_factors, e.value),
                        );
                    }
                    None => t.fail(format!("{label}: no pinned oracle value")),
                }
                rows.push(json!({
                    "group": label,
                    "order": ab.group_order,
                    "derived_order": ab.derived_order,
                    "invariant_factors": ab.invariant_factors,
                }));
            }
            Err(e) => t.fail(format!("{label}: {e}")),
        }
    }
    (t, json!({"groups": rows}))
}

fn el_index(cfg: &SuiteConfig) -> (Tally, Value) {
    let mut t = Tally::default();
    let cap = cfg.element_cap;
    for (n, p, m) in [(2usize, 2u32, 1u32), (2, 2, 3), (2, 3, 2), (2, 5, 2), (3, 2, 2), (3, 3, 1)] {
        match el_image_index(n, p, 0, m, cap) {
            Ok(i) => t.check(i == 1, || format!("el_image_index({n},{p},0,{m}) = {i}, expected 1")),
            Err(e) => t.fail(format!("el_image_index({n},{p},0,{m}): {e}")),
        }
    }
    let fixtures = golden::embedded("el_index");
    let mut rows = Vec::new();
    for &(n, p, k, m) in &golden::EL_INDEX_QUERIES {
        let q = golden::el_index_query(n, p, k, m);
        let pinned = golden::lookup(&fixtures, &q).and_then(|e| e.value.as_u64());
        match el_image_index(n, p as u32, k, m, cap) {
            Ok(i) => {
                t.check(pinned == Some(i), || {
                    format!("el_image_index({n},{p},{k},{m}) = {i}, pinned {pinned:?}")
                });
                rows.push(json!({"query": q, "index": i}));
            }
            Err(e) => t.fail(format!("el_image_index({n},{p},{k},{m}): {e}")),
        }
    }
    (t, json!({"indices": rows}))
}

fn nontrivial_reps(cfg: &SuiteConfig) -> (Tally, Value) {
    const RELATORS: usize = 200;
    let mut t = Tally::default();
    let mut rng = rng_for(cfg, 9);
    let mut rows = Vec::new();
    for p in [3u32, 2] {
        match nontrivial_rep(p, 4, cfg.element_cap) {
            Ok((rep, g)) => {
                let c = rep.cyclic_order;
                t.check(c > 1, || format!("p={p}: cyclic order {c}"));
                t.check(rep.generator_images.iter().any(|i| i.multiple % c != 0), || {
                    format!("p={p}: every generator maps to the identity")
                });
                for w in random_relators(&g, RELATORS, 24, &mut rng) {
                    let closes = g.evaluate_word(&w).is_identity();
                    let m = rep.word_multiple(&w);
                    t.check(closes && m == 0, || {
                        format!("p={p}: relator of length {} has image multiple {m}", w.len())
                    });
                }
                rows.push(json!({
                    "p": p,
                    "k": rep.k,
                    "group_order": g.order(),
                    "cyclic_order": c,
                    "abelianization": rep.abelianization,
                    "generator_multiples": rep.generator_images.iter().map(|i| i.multiple).collect::<Vec<_>>(),
                }));
            }
            Err(e) => t.fail(format!("p={p}: {e}")),
        }
    }
    (t, json!({"relators_per_prime": RELATORS, "representations": rows}))
}

fn flag_suite(cfg: &SuiteConfig) -> (Tally, Value) {
    let mut t = Tally::default();
    let mut rng = rng_for(cfg, 10);
    let mut max_len = 0;
    for _ in 0..500 {
        let d = rng.gen_range(1..=8);
        let count = rng.gen_range(1..=4);
        let (mats, _) = random_unipotent_set(d, count, &mut rng);
        let flag = match jh_series(&mats, d) {
            Ok(f) => f,
            Err(e) => {
                t.fail(format!("jh_series d={d}: {e}"));
                continue;
            }
        };
        max_len = max_len.max(flag.length());
        let v = verify_jh(&mats, &flag);
        t.check(v.all(), || format!("jh_series d={d} count={count}: {v:?}"));
        match adapted_basis(&flag) {
            Ok(p) => {
                let p_inv = p.inverse().expect("basis is invertible");
                let sizes = block_sizes(&flag);
                let ok = mats.iter().all(|m| {
                    let conj = p_inv.mul(m).unwrap().mul(&p).unwrap();
                    is_block_triangular(&conj, &sizes, true)
                });
                t.check(ok, || format!("adapted basis d={d}: conjugates not block unitriangular"));
            }
            Err(e) => t.fail(format!("adapted basis d={d}: {e}")),
        }
    }
    for _ in 0..500 {
        let d = rng.gen_range(1..=8);
        let count = rng.gen_range(1..=d + 2);
        let hs: Vec<_> = (0..count).map(|_| random_hyperplane(d, 3, &mut rng)).collect();
        match hyperplane_bound_check(&hs) {
            Ok(r) => t.check(r.holds(), || format!("hyperplanes: {r:?}")),
            Err(e) => t.fail(format!("hyperplanes: {e}")),
        }
    }
    (t, json!({"unipotent_sets": 500, "hyperplane_families": 500, "longest_flag": max_len}))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quick_criteria_pass() {
        let cfg = SuiteConfig::default();
        for id in [1, 2, 8] {
            let o = run(id, &cfg);
            assert!(o.checks_passed, "{}", o.summary_line());
        }
    }

    #[test]
    fn failures_are_reported() {
        let mut t = Tally::default();
        t.check(true, || unreachable!());
        t.check(false, || "broken".into());
        assert!(!t.ok());
        assert_eq!(t.detail(json!({}))["failures"][0], "broken");
        assert!(!Tally::default().ok());
    }
}

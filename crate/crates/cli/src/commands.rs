use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use slo_core::congruence::{
    self, congruence_kernel_index, random_relators, sl_order_formula, special_linear_group,
};
use slo_core::flags::{self, verify_jh, Flag, QMatrix};
use slo_core::golden::{self, GoldenEntry};
use slo_core::hensel::{self, Polynomial};
use slo_core::localring::{self, ArithOp, Characteristic, RingDescriptor, RingSpec};
use slo_core::matgroup::{self, RMatrix};
use slo_core::suite::{self, SuiteConfig};

use crate::report::{Body, CommandError};
use crate::{CharArg, Cli, Command, CongruenceCommand, FlagsCommand, Opts, VerifyPaperArgs};

type Result<T> = std::result::Result<T, CommandError>;

fn usage<T>(msg: impl Into<String>) -> Result<T> {
    Err(CommandError::Usage(msg.into()))
}

pub fn dispatch(cli: &Cli) -> Result<Body> {
    let o = &cli.opts;
    match &cli.command {
        Command::Ring => ring(o),
        Command::Hensel => hensel_cmd(o),
        Command::FourthRoot => fourth_root(o),
        Command::Decompose => decompose(o),
        Command::ElDiagonal => el_diagonal(o),
        Command::VerifyIdentities => verify_identities(o),
        Command::Congruence(c) => congruence_cmd(*c, o),
        Command::Flags(f) => flags_cmd(*f, o),
        Command::NontrivialRep => nontrivial_rep(o),
        Command::VerifyPaper(v) => verify_paper(v, o),
    }
}

fn need<T: Copy>(v: Option<T>, flag: &str) -> Result<T> {
    match v {
        Some(x) => Ok(x),
        None => usage(format!("missing --{flag}")),
    }
}

fn ring_from_flags(o: &Opts) -> Result<RingDescriptor> {
    let characteristic = match o.characteristic {
        CharArg::Zero => Characteristic::Zero,
        CharArg::Positive => Characteristic::Positive,
    };
    Ok(localring::make_ring(
        characteristic,
        need(o.p, "p")?,
        need(o.precision, "precision")?,
    )?)
}

fn read_input(o: &Opts) -> Result<Value> {
    let path = match &o.input {
        Some(p) => p,
        None => return usage("missing --input"),
    };
    read_json(path)
}

fn read_json(path: &Path) -> Result<Value> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CommandError::Usage(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| CommandError::Usage(format!("{} is not JSON: {e}", path.display())))
}

/// Ring given inside the input as `{"ring": {...}}`, falling back to the flags.
fn ring_from_input_or_flags(input: &Value, o: &Opts) -> Result<RingDescriptor> {
    match input.get("ring") {
        Some(spec) => {
            let spec: RingSpec = serde_json::from_value(spec.clone())?;
            Ok(RingDescriptor::try_from(spec)?)
        }
        None => ring_from_flags(o),
    }
}

fn field<'a>(v: &'a Value, key: &str) -> Result<&'a Value> {
    match v.get(key) {
        Some(x) => Ok(x),
        None => usage(format!("input lacks \"{key}\"")),
    }
}

fn ring(o: &Opts) -> Result<Body> {
    let ring = ring_from_flags(o)?;
    let describe = json!({
        "ring": ring.spec(),
        "cardinality": ring.cardinality().to_string(),
        "uniformizer": ring.uniformizer().to_json(),
    });
    if o.input.is_none() {
        return Ok(Body::checked(describe, true));
    }
    let input = read_input(o)?;
    let op = field(&input, "op")?.as_str().unwrap_or_default().to_string();
    let elem = |key: &str| -> Result<_> { Ok(ring.parse_elem(field(&input, key)?)?) };
    let result = match op.as_str() {
        "add" | "sub" | "mul" | "neg" => {
            let a = elem("a")?;
            let b = if op == "neg" { ring.zero() } else { elem("b")? };
            let arith = match op.as_str() {
                "add" => ArithOp::Add,
                "sub" => ArithOp::Sub,
                "mul" => ArithOp::Mul,
                _ => ArithOp::Neg,
            };
            localring::ring_arith(arith, &a, &b)?.to_json()
        }
        "inv" => elem("a")?.invert()?.to_json(),
        "val" => json!(elem("a")?.valuation().to_string()),
        "level" => {
            let gens = field(&input, "gens")?
                .as_array()
                .ok_or_else(|| CommandError::Usage("\"gens\" must be an array".into()))?
                .iter()
                .map(|g| ring.parse_elem(g))
                .collect::<std::result::Result<Vec<_>, _>>()?;
            json!(localring::additive_subgroup_level(&gens)?)
        }
        other => return usage(format!("unknown op {other:?}; expected add, sub, mul, neg, inv, val or level")),
    };
    Ok(Body::checked(json!({"ring": ring.spec(), "op": op, "value": result}), true))
}

fn hensel_cmd(o: &Opts) -> Result<Body> {
    let input = read_input(o)?;
    let ring = ring_from_input_or_flags(&input, o)?;
    let f = Polynomial::from_json(&ring, field(&input, "poly")?)?;
    let a = ring.parse_elem(field(&input, "a")?)?;
    let lift = hensel::hensel_lift_traced(&f, &a)?;
    let value = f.eval(&lift.root)?;
    Ok(Body::checked(
        json!({
            "ring": ring.spec(),
            "root": lift.root.to_json(),
            "f_root": value.to_json(),
            "residual_valuations": lift.residuals.iter().map(|v| v.to_string()).collect::<Vec<_>>(),
        }),
        value.is_zero(),
    ))
}

fn fourth_root(o: &Opts) -> Result<Body> {
    if o.characteristic != CharArg::Zero {
        return usage("fourth-root works over Z_p only (--char zero)");
    }
    let ring = ring_from_flags(o)?;
    let w = hensel::fourth_root_witness(&ring)?;
    Ok(Body::checked(
        json!({
            "ring": ring.spec(),
            "q": w.q.to_json(),
            "r": w.r,
            "certificate": w.certificate.to_json(),
            "holds": w.holds(),
        }),
        w.holds(),
    ))
}

fn decompose(o: &Opts) -> Result<Body> {
    let input = read_input(o)?;
    let ring = ring_from_input_or_flags(&input, o)?;
    let mat_json = input.get("matrix").unwrap_or(&input);
    let m = RMatrix::from_json(&ring, mat_json)?;
    let word = if m.n() == 2 {
        matgroup::decompose_sl2(&m)?
    } else {
        matgroup::decompose_sln(&m)?
    };
    let round_trip = matgroup::evaluate_word(&word) == m;
    Ok(Body::checked(
        json!({
            "ring": ring.spec(),
            "n": m.n(),
            "word": word.to_json(),
            "length": word.len(),
            "round_trip": round_trip,
        }),
        round_trip,
    ))
}

fn el_diagonal(o: &Opts) -> Result<Body> {
    let ring = ring_from_flags(o)?;
    let k = need(o.k, "k")?;
    let x = match &o.input {
        Some(path) => ring.parse_elem(field(&read_json(path)?, "x")?)?,
        None => ring.one(),
    };
    let w = matgroup::el_diagonal_word(&ring, k, &x)?;
    let u = &ring.one() + &(&ring.pi_pow(2 * k) * &x);
    let expected = RMatrix::diagonal(&ring, &[u.clone(), u.invert()?]);
    let value = w.evaluate();
    let min_val = matgroup::min_letter_valuation(&w);
    let holds = value == expected && min_val.at_least(k);
    Ok(Body::checked(
        json!({
            "ring": ring.spec(),
            "k": k,
            "x": x.to_json(),
            "word": w.to_json(),
            "matrix": value.to_json(),
            "min_letter_valuation": min_val.to_string(),
            "holds": holds,
        }),
        holds,
    ))
}

fn verify_identities(o: &Opts) -> Result<Body> {
    const PER_FAMILY: usize = 100;
    let ring = ring_from_flags(o)?;
    let n = o.n.unwrap_or(3);
    let mut rng = ChaCha8Rng::seed_from_u64(o.seed);
    let big_n = ring.precision();
    let mut families = serde_json::Map::new();
    let mut all_ok = true;
    let mut record = |name: &str, results: Vec<std::result::Result<bool, String>>| {
        let failed: Vec<String> = results
            .iter()
            .filter_map(|r| match r {
                Ok(true) => None,
                Ok(false) => Some("identity does not hold".to_string()),
                Err(e) => Some(e.clone()),
            })
            .collect();
        all_ok &= failed.is_empty();
        families.insert(
            name.to_string(),
            json!({"instances": results.len(), "failed": failed.len(), "failures": failed.iter().take(5).collect::<Vec<_>>()}),
        );
    };

    record("weyl", vec![Ok(matgroup::weyl_check(&ring).holds())]);
    let steinberg = (0..PER_FAMILY)
        .map(|_| {
            let (x, y) = (ring.random(&mut rng), ring.random(&mut rng));
            matgroup::steinberg_check(n, &x, &y).map(|r| r.holds()).map_err(|e| e.to_string())
        })
        .collect();
    record("steinberg", steinberg);
    let diag = (0..PER_FAMILY)
        .map(|_| {
            let a = ring.random_unit(&mut rng);
            matgroup::diag_check(&a).map(|r| r.holds()).map_err(|e| e.to_string())
        })
        .collect();
    record("diag_word", diag);
    let dilation = (0..PER_FAMILY)
        .map(|_| {
            let k = rng.gen_range(1..big_n.max(2));
            let t = rng.gen_range(0..big_n);
            let (y, x) = (ring.random_unit(&mut rng), ring.random(&mut rng));
            matgroup::dilation_commutator_check(k, &y, t, &x)
                .map(|r| r.holds())
                .map_err(|e| e.to_string())
        })
        .collect();
    record("dilation_commutator", dilation);
    if ring.p() > 3 {
        let perfect = (0..PER_FAMILY)
            .map(|_| {
                let x = ring.random(&mut rng);
                matgroup::perfectness_witness(&x).map(|w| w.report.holds()).map_err(|e| e.to_string())
            })
            .collect();
        record("perfectness", perfect);
    }
    if big_n >= 3 {
        let eld = (0..PER_FAMILY)
            .map(|_| {
                let k = rng.gen_range(1..=(big_n - 1) / 2);
                let x = ring.random(&mut rng);
                let u = &ring.one() + &(&ring.pi_pow(2 * k) * &x);
                let expected = RMatrix::diagonal(&ring, &[u.clone(), u.invert().expect("unit")]);
                matgroup::el_diagonal_word(&ring, k, &x)
                    .map(|w| w.evaluate() == expected && matgroup::min_letter_valuation(&w).at_least(k))
                    .map_err(|e| e.to_string())
            })
            .collect();
        record("el_diagonal", eld);
    }
    Ok(Body::checked(json!({"ring": ring.spec(), "n": n, "families": families}), all_ok))
}

/// Compares a computed value with the pinned fixture for the same query, if any.
fn provenance(fixture: &str, query: &Value, computed: &Value) -> Vec<Value> {
    let entries = golden::embedded(fixture);
    match golden::lookup(&entries, query) {
        Some(GoldenEntry { value, oracle, .. }) => vec![json!({
            "fixture": fixture,
            "oracle": oracle,
            "pinned": value,
            "matches": value == computed,
        })],
        None => Vec::new(),
    }
}

fn congruence_cmd(c: CongruenceCommand, o: &Opts) -> Result<Body> {
    if c == CongruenceCommand::NontrivialRep {
        return nontrivial_rep(o);
    }
    let n = o.n.unwrap_or(2);
    let p = need(o.p, "p")?;
    let m = need(o.m, "m")?;
    let cap = o.element_cap;
    match c {
        CongruenceCommand::Order => {
            let g = special_linear_group(n, p, m, cap)?;
            let formula = sl_order_formula(n as u32, p, m);
            let order = g.order() as u128;
            let prov = provenance("sl_order", &golden::group_query(n, p as u64, m), &json!(order as u64));
            Ok(Body::checked(
                json!({"n": n, "p": p, "m": m, "order": order as u64, "formula": formula.to_string()}),
                order == formula,
            )
            .with_provenance(prov))
        }
        CongruenceCommand::Index => {
            let k = need(o.k, "k")?;
            let g = special_linear_group(n, p, m, cap)?;
            let index = congruence_kernel_index(&g, k)?;
            let expected = if k == 0 { 1 } else { sl_order_formula(n as u32, p, k) };
            Ok(Body::checked(
                json!({"n": n, "p": p, "m": m, "k": k, "group_order": g.order(), "kernel_index": index}),
                index as u128 == expected,
            ))
        }
        CongruenceCommand::Abelianization => {
            let g = special_linear_group(n, p, m, cap)?;
            let ab = congruence::abelianization(&g, cap)?;
            let pinned_form = json!({
                "group_order": ab.group_order,
                "derived_order": ab.derived_order,
                "invariant_factors": ab.invariant_factors,
            });
            let prov = provenance("abelianization", &golden::group_query(n, p as u64, m), &pinned_form);
            Ok(Body::checked(
                json!({
                    "n": n, "p": p, "m": m,
                    "group_order": ab.group_order,
                    "derived_order": ab.derived_order,
                    "invariant_factors": ab.invariant_factors,
                    "order": ab.order(),
                    "trivial": ab.is_trivial(),
                }),
                true,
            )
            .with_provenance(prov))
        }
        CongruenceCommand::ElIndex => {
            let k = need(o.k, "k")?;
            let index = congruence::el_image_index(n, p, k, m, cap)?;
            let prov = provenance("el_index", &golden::el_index_query(n, p as u64, k, m), &json!(index));
            Ok(Body::checked(
                json!({"n": n, "p": p, "k": k, "m": m, "index": index}),
                k != 0 || index == 1,
            )
            .with_provenance(prov))
        }
        CongruenceCommand::NontrivialRep => unreachable!(),
    }
}

fn nontrivial_rep(o: &Opts) -> Result<Body> {
    const RELATORS: usize = 200;
    let p = need(o.p, "p")?;
    let dim = o.dim.unwrap_or(2);
    let (rep, g) = congruence::nontrivial_rep(p, dim, o.element_cap)?;
    let mut rng = ChaCha8Rng::seed_from_u64(o.seed);
    let relators = random_relators(&g, RELATORS, 24, &mut rng);
    let killed = relators
        .iter()
        .filter(|w| g.evaluate_word(w).is_identity() && rep.word_multiple(w) == 0)
        .count();
    let ok = rep.cyclic_order > 1 && killed == relators.len();
    Ok(Body::checked(
        json!({
            "representation": rep.to_json(),
            "group_order": g.order(),
            "relators_checked": relators.len(),
            "relators_killed": killed,
        }),
        ok,
    ))
}

fn parse_matrices(v: &Value) -> Result<Vec<QMatrix>> {
    let items = v.get("matrices").unwrap_or(v);
    let items = match items.as_array() {
        Some(a) if !a.is_empty() => a,
        _ => return usage("expected a nonempty array of matrices"),
    };
    Ok(items.iter().map(QMatrix::from_json).collect::<std::result::Result<Vec<_>, _>>()?)
}

fn flags_cmd(f: FlagsCommand, o: &Opts) -> Result<Body> {
    let input = read_input(o)?;
    let mats = parse_matrices(&input)?;
    let d = mats[0].dim();
    match f {
        FlagsCommand::Jh => {
            let flag = flags::jh_series(&mats, d)?;
            let v = verify_jh(&mats, &flag);
            let basis = flags::adapted_basis(&flag)?;
            Ok(Body::checked(
                json!({
                    "ambient": d,
                    "dims": flag.dims(),
                    "flag": flag.to_json(),
                    "adapted_basis": basis.to_json(),
                    "verification": {
                        "strictly_growing": v.strictly_growing,
                        "reaches_full_space": v.reaches_full_space,
                        "quotients_trivial": v.quotients_trivial,
                        "maximal": v.maximal,
                    },
                }),
                v.all(),
            ))
        }
        FlagsCommand::CheckInvariance => {
            let flag = Flag::from_json(d, field(&input, "flag")?)?;
            let invariant = flags::flag_invariant_under(&mats, &flag)?;
            Ok(Body::checked(
                json!({"ambient": d, "dims": flag.dims(), "invariant": invariant}),
                invariant,
            ))
        }
    }
}

fn verify_paper(v: &VerifyPaperArgs, o: &Opts) -> Result<Body> {
    if v.regen_golden {
        let dir = o.out.clone().unwrap_or_else(golden::source_dir);
        let mut files = Vec::new();
        for name in golden::FIXTURES {
            let fresh = golden::regenerate_one(name);
            let changed = fresh != golden::embedded(name);
            files.push(json!({"fixture": name, "entries": fresh.len(), "changed": changed}));
        }
        let written = golden::write_all(&dir)?;
        // the report goes to stdout; --out named the fixture directory
        let body = Body::checked(
            json!({
                "directory": dir.display().to_string(),
                "written": written.iter().map(|p| p.display().to_string()).collect::<Vec<_>>(),
                "fixtures": files,
            }),
            true,
        );
        return Ok(body);
    }
    let cfg = SuiteConfig {
        seed: o.seed,
        element_cap: o.element_cap,
    };
    let ids: Vec<u8> = if v.only.is_empty() {
        suite::CRITERIA.iter().map(|(id, _)| *id).collect()
    } else {
        for id in &v.only {
            if !suite::CRITERIA.iter().any(|(i, _)| i == id) {
                return usage(format!("no criterion {id}; expected 1-10"));
            }
        }
        v.only.clone()
    };
    let mut outcomes = Vec::new();
    for id in ids {
        let outcome = suite::run(id, &cfg);
        eprintln!("{}", outcome.summary_line());
        outcomes.push(outcome);
    }
    let ok = outcomes.iter().all(|o| o.passed());
    let prov = golden::FIXTURES
        .iter()
        .map(|name| {
            let oracles: std::collections::BTreeSet<String> =
                golden::embedded(name).into_iter().map(|e| e.oracle).collect();
            json!({"fixture": name, "oracle": oracles.into_iter().collect::<Vec<_>>()})
        })
        .collect();
    let mut body = Body::checked(
        json!({
            "passed": outcomes.iter().filter(|o| o.passed()).count(),
            "total": outcomes.len(),
            "criteria": outcomes.iter().map(|o| o.to_json()).collect::<Vec<_>>(),
        }),
        ok,
    );
    body.provenance = prov;
    Ok(body)
}

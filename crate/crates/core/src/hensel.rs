//! Polynomial root lifting in a truncated DVR.

use serde_json::Value;
use thiserror::Error;

use crate::localring::{Characteristic, RingDescriptor, RingElem, RingError, Valuation};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HenselError {
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error("Hensel hypothesis fails: val f(a) = {residual}, val f'(a) = {derivative}")]
    HypothesisFailed {
        residual: Valuation,
        derivative: Valuation,
    },
    #[error("Newton residual stopped improving at step {step} (valuation {valuation})")]
    NoConvergence { step: usize, valuation: Valuation },
    #[error("fourth-root witness needs characteristic zero")]
    CharacteristicPositive,
    #[error("residue field F_{0} has at most 3 elements")]
    ResidueFieldTooSmall(u32),
    #[error("polynomial has no coefficients")]
    EmptyPolynomial,
}

/// Dense univariate polynomial, lowest degree first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polynomial {
    ring: RingDescriptor,
    coeffs: Vec<RingElem>,
}

impl Polynomial {
    pub fn new(ring: &RingDescriptor, coeffs: Vec<RingElem>) -> Result<Self, HenselError> {
        if coeffs.is_empty() {
            return Err(HenselError::EmptyPolynomial);
        }
        for c in &coeffs {
            if c.ring() != ring {
                return Err(RingError::Mismatch(ring.to_string(), c.ring().to_string()).into());
            }
        }
        Ok(Self {
            ring: ring.clone(),
            coeffs,
        })
    }

    /// Polynomial with integer coefficients mapped into the ring.
    pub fn from_ints(ring: &RingDescriptor, coeffs: &[i64]) -> Self {
        assert!(!coeffs.is_empty(), "polynomial needs a coefficient");
        Self {
            ring: ring.clone(),
            coeffs: coeffs.iter().map(|&c| ring.from_i64(c)).collect(),
        }
    }

    pub fn ring(&self) -> &RingDescriptor {
        &self.ring
    }

    pub fn coeffs(&self) -> &[RingElem] {
        &self.coeffs
    }

    /// Index of the last stored coefficient, even if that coefficient is zero.
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn eval(&self, a: &RingElem) -> Result<RingElem, HenselError> {
        if a.ring() != &self.ring {
            return Err(RingError::Mismatch(self.ring.to_string(), a.ring().to_string()).into());
        }
        let mut acc = self.ring.zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * a) + c;
        }
        Ok(acc)
    }

    pub fn derivative(&self) -> Polynomial {
        let coeffs: Vec<_> = if self.coeffs.len() == 1 {
            vec![self.ring.zero()]
        } else {
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| &self.ring.from_i64(i as i64) * c)
                .collect()
        };
        Polynomial {
            ring: self.ring.clone(),
            coeffs,
        }
    }

    pub fn to_json(&self) -> Value {
        Value::Array(self.coeffs.iter().map(RingElem::to_json).collect())
    }

    pub fn from_json(ring: &RingDescriptor, v: &Value) -> Result<Self, HenselError> {
        let items = v
            .as_array()
            .ok_or_else(|| RingError::Parse(format!("expected coefficient array, got {v}")))?;
        let coeffs = items
            .iter()
            .map(|c| ring.parse_elem(c))
            .collect::<Result<Vec<_>, _>>()?;
        Polynomial::new(ring, coeffs)
    }
}

/// Root returned by a Newton lift together with the residual valuation seen at each step.
#[derive(Clone, Debug)]
pub struct Lift {
    pub root: RingElem,
    pub residuals: Vec<Valuation>,
}

/// Lifts an approximate root `a` of `f` to a root in the model.
///
/// Requires `val f(a) >= 2 val f'(a) + 1`. The result `a0` satisfies `f(a0) = 0 mod pi^N` and
/// `a0 = a mod f'(a) pi`.
pub fn hensel_lift(f: &Polynomial, a: &RingElem) -> Result<RingElem, HenselError> {
    hensel_lift_traced(f, a).map(|l| l.root)
}

pub fn hensel_lift_traced(f: &Polynomial, a: &RingElem) -> Result<Lift, HenselError> {
    let df = f.derivative();
    let fa = f.eval(a)?;
    let mut residuals = vec![fa.valuation()];
    if fa.is_zero() {
        return Ok(Lift {
            root: a.clone(),
            residuals,
        });
    }
    let dfa = df.eval(a)?;
    let residual = fa.valuation();
    let derivative = dfa.valuation();
    let hypothesis = match (residual, derivative) {
        (Valuation::Finite(vf), Valuation::Finite(vd)) => vf > 2 * vd,
        _ => false,
    };
    if !hypothesis {
        return Err(HenselError::HypothesisFailed {
            residual,
            derivative,
        });
    }

    let ring = f.ring();
    let mut x = a.clone();
    let mut fx = fa;
    let mut step = 0;
    loop {
        let (vf, uf) = fx.split_valuation();
        let (vd, ud) = df.eval(&x)?.split_valuation();
        let (Valuation::Finite(vf), Valuation::Finite(vd)) = (vf, vd) else {
            return Err(HenselError::NoConvergence {
                step,
                valuation: vf,
            });
        };
        if vf <= vd {
            return Err(HenselError::NoConvergence {
                step,
                valuation: Valuation::Finite(vf),
            });
        }
        // f(x) / f'(x) with both unit parts separated from their pi-powers
        let delta = &ring.pi_pow(vf - vd) * &(&uf * &ud.invert()?);
        x = &x - &delta;
        fx = f.eval(&x)?;
        step += 1;
        let v = fx.valuation();
        residuals.push(v);
        if fx.is_zero() {
            return Ok(Lift { root: x, residuals });
        }
        if v <= Valuation::Finite(vf) {
            return Err(HenselError::NoConvergence { step, valuation: v });
        }
    }
}

/// A unit `q` with `q^4 = -r` in the model.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootWitness {
    pub q: RingElem,
    pub r: u32,
    /// `q^4 + r`, zero for a valid witness.
    pub certificate: RingElem,
}

impl RootWitness {
    pub fn holds(&self) -> bool {
        self.q.is_unit() && self.certificate.is_zero()
    }
}

/// The polynomial `t^4 + r` and starting point used for the fourth-root witness over `Z_p`:
/// `r = 31, a = 1` when `p = 2`, otherwise `r = p - 1, a = p - 1`.
pub fn fourth_root_setup(ring: &RingDescriptor) -> (Polynomial, RingElem, u32) {
    let p = ring.p();
    let (r, start) = if p == 2 { (31, 1) } else { (p - 1, p as i64 - 1) };
    let f = Polynomial::from_ints(ring, &[r as i64, 0, 0, 0, 1]);
    (f, ring.from_i64(start), r)
}

pub fn fourth_root_witness(ring: &RingDescriptor) -> Result<RootWitness, HenselError> {
    if ring.characteristic() == Characteristic::Positive {
        return Err(HenselError::CharacteristicPositive);
    }
    let (f, start, r) = fourth_root_setup(ring);
    let q = hensel_lift(&f, &start)?;
    let certificate = &q.pow(4) + &ring.from_i64(r as i64);
    Ok(RootWitness { q, r, certificate })
}

/// A unit `q` for which `q^2 - 1` is also a unit; exists once the residue field has more
/// than three elements. Any lift of a residue outside `{0, 1, -1}` works, so `q = 2`.
pub fn unit_with_unit_square_minus_one(ring: &RingDescriptor) -> Result<RingElem, HenselError> {
    if ring.p() <= 3 {
        return Err(HenselError::ResidueFieldTooSmall(ring.p()));
    }
    Ok(ring.from_i64(2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::localring::make_ring;

    fn z(p: u32, n: u32) -> RingDescriptor {
        make_ring(Characteristic::Zero, p, n).unwrap()
    }

    fn brute_roots(f: &Polynomial) -> Vec<RingElem> {
        f.ring()
            .elements()
            .into_iter()
            .filter(|x| f.eval(x).unwrap().is_zero())
            .collect()
    }

    #[test]
    fn eval_and_derivative() {
        let r = z(2, 16);
        let f = Polynomial::from_ints(&r, &[31, 0, 0, 0, 1]);
        assert_eq!(f.eval(&r.one()).unwrap(), r.from_i64(32));
        let c = r.from_i64(12345);
        let id = Polynomial::from_ints(&r, &[0, 1]);
        assert_eq!(id.eval(&c).unwrap(), c);
        let df = f.derivative();
        assert_eq!(df, Polynomial::from_ints(&r, &[0, 0, 0, 4]));
        assert_eq!(df.eval(&r.one()).unwrap(), r.from_i64(4));
        let other = z(3, 2);
        assert!(f.eval(&other.one()).is_err());
    }

    #[test]
    fn lifts_fourth_root_of_minus_31() {
        let r = z(2, 16);
        let f = Polynomial::from_ints(&r, &[31, 0, 0, 0, 1]);
        let root = hensel_lift(&f, &r.one()).unwrap();
        assert!(f.eval(&root).unwrap().is_zero());
        // congruent to the start modulo f'(1) * 2 = 8
        assert!((&root - &r.one()).valuation().at_least(3));
        let roots = brute_roots(&f);
        assert!(roots.contains(&root));
        // the class of 1 mod 8 holds four roots mod 2^16, all differing by multiples of 2^14
        let class: Vec<_> = roots
            .iter()
            .filter(|x| (*x - &r.one()).valuation().at_least(3))
            .collect();
        assert_eq!(class.len(), 4);
        for x in class {
            assert!((x - &root).valuation().at_least(14));
        }
    }

    #[test]
    fn linear_polynomial_lifts_to_its_root() {
        let r = z(5, 6);
        let c = r.from_i64(4321);
        let f = Polynomial::new(&r, vec![-&c, r.one()]).unwrap();
        // 4321 = 1 mod 5, so a = 6 meets the hypothesis
        assert_eq!(hensel_lift(&f, &r.from_i64(6)).unwrap(), c);
    }

    #[test]
    fn lifts_fourth_root_of_minus_four_mod_5_10() {
        let r = z(5, 10);
        let f = Polynomial::from_ints(&r, &[4, 0, 0, 0, 1]);
        let root = hensel_lift(&f, &r.from_i64(4)).unwrap();
        assert!(f.eval(&root).unwrap().is_zero());
        assert_eq!(root.residue(), 4);
        // brute force mod 5^4, then the lift is unique in its residue class
        let small = z(5, 4);
        let g = Polynomial::from_ints(&small, &[4, 0, 0, 0, 1]);
        let low: Vec<_> = brute_roots(&g)
            .into_iter()
            .filter(|x| x.residue() == 4)
            .collect();
        assert_eq!(low.len(), 1);
        let m = small.modulus().unwrap();
        assert_eq!(root.to_biguint().unwrap() % m, *low[0].to_biguint().unwrap());
    }

    #[test]
    fn residual_valuation_strictly_increases() {
        for (p, n) in [(2, 32), (3, 32), (5, 20), (7, 20)] {
            let ring = z(p, n);
            let (f, a, _) = fourth_root_setup(&ring);
            let lift = hensel_lift_traced(&f, &a).unwrap();
            for w in lift.residuals.windows(2) {
                assert!(w[1] > w[0], "{:?}", lift.residuals);
            }
            assert_eq!(*lift.residuals.last().unwrap(), Valuation::AtLeastPrecision);
        }
    }

    #[test]
    fn hypothesis_failure_is_reported() {
        let r = z(2, 16);
        let f = Polynomial::from_ints(&r, &[31, 0, 0, 0, 1]);
        // f(3) = 112 = 16 * 7 has valuation 4 < 2 * 2 + 1
        assert!(matches!(
            hensel_lift(&f, &r.from_i64(3)),
            Err(HenselError::HypothesisFailed { .. })
        ));
        let g = Polynomial::from_ints(&z(3, 5), &[1, 0, 1]);
        assert!(hensel_lift(&g, &z(3, 5).one()).is_err());
    }

    #[test]
    fn positive_characteristic_lift() {
        let s = make_ring(Characteristic::Positive, 5, 12).unwrap();
        // x^2 - (1 + t): root congruent to 1
        let f = Polynomial::new(&s, vec![-s.from_coeffs(&[1, 1]), s.zero(), s.one()]).unwrap();
        let root = hensel_lift(&f, &s.one()).unwrap();
        assert!(f.eval(&root).unwrap().is_zero());
        assert_eq!(root.residue(), 1);
    }

    #[test]
    fn fourth_root_witness_examples() {
        let w = fourth_root_witness(&z(2, 32)).unwrap();
        assert_eq!(w.r, 31);
        assert!(w.holds());
        let w = fourth_root_witness(&z(5, 16)).unwrap();
        assert_eq!(w.r, 4);
        assert!(w.holds());
        let s = make_ring(Characteristic::Positive, 3, 8).unwrap();
        assert_eq!(
            fourth_root_witness(&s).unwrap_err(),
            HenselError::CharacteristicPositive
        );
        // tiny precision: residual already vanishes at the start
        assert!(fourth_root_witness(&z(2, 3)).unwrap().holds());
    }

    #[test]
    fn unit_square_minus_one() {
        for p in [5, 7] {
            let r = z(p, 8);
            let q = unit_with_unit_square_minus_one(&r).unwrap();
            assert_eq!(q, r.from_i64(2));
            assert!((&(&q * &q) - &r.one()).is_unit());
        }
        assert_eq!(
            unit_with_unit_square_minus_one(&z(3, 8)).unwrap_err(),
            HenselError::ResidueFieldTooSmall(3)
        );
    }

    #[test]
    fn polynomial_json_round_trip() {
        let r = z(2, 16);
        let f = Polynomial::from_ints(&r, &[31, 0, 0, 0, 1]);
        let v = f.to_json();
        assert_eq!(v, serde_json::json!(["31", "0", "0", "0", "1"]));
        assert_eq!(Polynomial::from_json(&r, &v).unwrap(), f);
    }
}

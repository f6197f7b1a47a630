//! Exact arithmetic in cyclotomic fields Q(ζ_N).
//!
//! Elements are stored as coefficient vectors in Q[x]/(x^N − 1), which keeps
//! addition and multiplication cheap; the zero test reduces modulo the N-th
//! cyclotomic polynomial, the only place where canonical reduction matters.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rat::Rat;

/// Default ceiling for conductors; inputs whose phase denominators exceed it
/// are rejected instead of silently allocating huge coefficient vectors.
pub const DEFAULT_CONDUCTOR_BOUND: u64 = 1_000_000;

/// Element of Q(ζ_N) represented as Σ coeffs[i]·ζ_N^i in Q[x]/(x^N − 1).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CycloNum {
    conductor: u64,
    coeffs: Vec<Rat>,
}

impl CycloNum {
    pub fn zero(conductor: u64) -> Self {
        assert!(conductor >= 1);
        CycloNum {
            conductor,
            coeffs: vec![Rat::zero(); conductor as usize],
        }
    }

    pub fn one(conductor: u64) -> Self {
        let mut z = Self::zero(conductor);
        z.coeffs[0] = Rat::one();
        z
    }

    pub fn from_rat(conductor: u64, value: Rat) -> Self {
        let mut z = Self::zero(conductor);
        z.coeffs[0] = value;
        z
    }

    /// ζ_N^k, with k taken mod N (negative k allowed).
    pub fn root_power(conductor: u64, k: &BigInt) -> Self {
        let mut z = Self::zero(conductor);
        let idx = k
            .mod_floor(&BigInt::from(conductor))
            .to_u64()
            .expect("reduced exponent fits");
        z.coeffs[idx as usize] = Rat::one();
        z
    }

    /// e^{2πi·phase} for a rational phase; the conductor must be a multiple
    /// of the phase denominator.
    pub fn unit_phase(conductor: u64, phase: &Rat) -> Self {
        let n = BigInt::from(conductor);
        let scaled = phase.clone() * Rat::int(n);
        let k = scaled
            .to_integer()
            .expect("conductor must clear the phase denominator");
        Self::root_power(conductor, &k)
    }

    pub fn conductor(&self) -> u64 {
        self.conductor
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    /// Syntactic check: all coefficients zero. Sufficient but not necessary
    /// for the value to vanish; see [`CycloNum::is_zero`].
    pub fn is_syntactically_zero(&self) -> bool {
        self.coeffs.iter().all(Rat::is_zero)
    }

    /// The rational value when the element is syntactically rational.
    pub fn as_rational(&self) -> Option<Rat> {
        if self.coeffs[1..].iter().all(Rat::is_zero) {
            Some(self.coeffs[0].clone())
        } else {
            None
        }
    }

    /// Lift to a conductor that is a multiple of the current one.
    pub fn lift(&self, conductor: u64) -> Self {
        assert!(conductor % self.conductor == 0, "conductor must extend");
        let factor = (conductor / self.conductor) as usize;
        let mut z = Self::zero(conductor);
        for (i, c) in self.coeffs.iter().enumerate() {
            z.coeffs[i * factor] = c.clone();
        }
        z
    }

    fn align(a: &CycloNum, b: &CycloNum) -> (CycloNum, CycloNum) {
        if a.conductor == b.conductor {
            return (a.clone(), b.clone());
        }
        let n = a.conductor.lcm(&b.conductor);
        (a.lift(n), b.lift(n))
    }

    pub fn add(&self, other: &CycloNum) -> CycloNum {
        let (mut a, b) = Self::align(self, other);
        for (x, y) in a.coeffs.iter_mut().zip(&b.coeffs) {
            *x += y.clone();
        }
        a
    }

    pub fn sub(&self, other: &CycloNum) -> CycloNum {
        let (mut a, b) = Self::align(self, other);
        for (x, y) in a.coeffs.iter_mut().zip(&b.coeffs) {
            *x -= y.clone();
        }
        a
    }

    pub fn neg(&self) -> CycloNum {
        CycloNum {
            conductor: self.conductor,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn mul(&self, other: &CycloNum) -> CycloNum {
        let (a, b) = Self::align(self, other);
        let n = a.conductor as usize;
        let mut out = CycloNum::zero(a.conductor);
        for (i, ci) in a.coeffs.iter().enumerate() {
            if ci.is_zero() {
                continue;
            }
            for (j, cj) in b.coeffs.iter().enumerate() {
                if cj.is_zero() {
                    continue;
                }
                let k = (i + j) % n;
                let cur = out.coeffs[k].clone();
                out.coeffs[k] = cur + ci * cj;
            }
        }
        out
    }

    pub fn scale(&self, c: &Rat) -> CycloNum {
        CycloNum {
            conductor: self.conductor,
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
        }
    }

    /// Exact zero test: the value vanishes at ζ_N = e^{2πi/N} iff the
    /// coefficient polynomial is divisible by the N-th cyclotomic polynomial.
    pub fn is_zero(&self) -> bool {
        if self.is_syntactically_zero() {
            return true;
        }
        if self.conductor == 1 {
            return self.coeffs[0].is_zero();
        }
        let phi = cyclotomic_polynomial(self.conductor);
        poly_rem_is_zero(&self.coeffs, &phi)
    }

    /// Floating-point evaluation at ζ_N = e^{2πi/N}; sanity oracle only.
    pub fn approx(&self) -> (f64, f64) {
        let n = self.conductor as f64;
        let mut re = 0.0;
        let mut im = 0.0;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let angle = 2.0 * std::f64::consts::PI * (i as f64) / n;
            let v = c.to_f64();
            re += v * angle.cos();
            im += v * angle.sin();
        }
        (re, im)
    }
}

/// Coefficients of the N-th cyclotomic polynomial (ascending degree), by
/// dividing x^N − 1 by Φ_d for every proper divisor d of N.
pub fn cyclotomic_polynomial(n: u64) -> Vec<BigInt> {
    let mut memo: BTreeMap<u64, Vec<BigInt>> = BTreeMap::new();
    cyclotomic_rec(n, &mut memo)
}

fn cyclotomic_rec(n: u64, memo: &mut BTreeMap<u64, Vec<BigInt>>) -> Vec<BigInt> {
    if let Some(p) = memo.get(&n) {
        return p.clone();
    }
    let result = if n == 1 {
        vec![BigInt::from(-1), BigInt::one()]
    } else {
        // x^n − 1.
        let mut num = vec![BigInt::zero(); n as usize + 1];
        num[0] = BigInt::from(-1);
        num[n as usize] = BigInt::one();
        for d in 1..n {
            if n % d == 0 {
                let phi_d = cyclotomic_rec(d, memo);
                num = poly_div_exact(&num, &phi_d);
            }
        }
        num
    };
    memo.insert(n, result.clone());
    result
}

/// Exact division of integer polynomials (remainder known to be zero).
fn poly_div_exact(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let dn = num.len() - 1;
    let dd = den.len() - 1;
    assert!(dn >= dd);
    let lead = den[dd].clone();
    let mut rem = num.to_vec();
    let mut quot = vec![BigInt::zero(); dn - dd + 1];
    for k in (0..=dn - dd).rev() {
        let (q, r) = rem[k + dd].div_rem(&lead);
        debug_assert!(r.is_zero());
        if q.is_zero() {
            continue;
        }
        for i in 0..=dd {
            let d = &q * &den[i];
            rem[k + i] -= d;
        }
        quot[k] = q;
    }
    debug_assert!(rem.iter().all(Zero::is_zero));
    quot
}

/// True iff the rational polynomial is divisible by the monic integer
/// divisor (i.e. the remainder of the Euclidean division vanishes).
fn poly_rem_is_zero(poly: &[Rat], divisor: &[BigInt]) -> bool {
    let dd = divisor.len() - 1;
    debug_assert!(divisor[dd].is_one());
    let mut rem: Vec<Rat> = poly.to_vec();
    while rem.last().map_or(false, Rat::is_zero) {
        rem.pop();
    }
    while rem.len() > dd {
        let k = rem.len() - 1 - dd;
        let factor = rem.last().unwrap().clone();
        for i in 0..=dd {
            let d = &factor * &Rat::int(divisor[i].clone());
            rem[k + i] -= d;
        }
        while rem.last().map_or(false, Rat::is_zero) {
            rem.pop();
        }
    }
    rem.is_empty()
}

/// Guard a conductor against the configured bound.
pub fn check_conductor(n: &BigInt, bound: u64) -> Result<u64> {
    let n = n
        .to_u64()
        .ok_or_else(|| Error::ConductorOverflow(u64::MAX, bound))?;
    if n > bound {
        return Err(Error::ConductorOverflow(n, bound));
    }
    Ok(n.max(1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::rat;
    use num_traits::Signed;

    #[test]
    fn cyclotomic_polynomials() {
        let as_i64 =
            |v: Vec<BigInt>| -> Vec<i64> { v.into_iter().map(|c| c.to_i64().unwrap()).collect() };
        assert_eq!(as_i64(cyclotomic_polynomial(1)), vec![-1, 1]);
        assert_eq!(as_i64(cyclotomic_polynomial(2)), vec![1, 1]);
        assert_eq!(as_i64(cyclotomic_polynomial(3)), vec![1, 1, 1]);
        assert_eq!(as_i64(cyclotomic_polynomial(4)), vec![1, 0, 1]);
        assert_eq!(as_i64(cyclotomic_polynomial(6)), vec![1, -1, 1]);
        assert_eq!(as_i64(cyclotomic_polynomial(12)), vec![1, 0, -1, 0, 1]);
        // Φ_105 is the first with a coefficient of magnitude 2.
        let phi105 = cyclotomic_polynomial(105);
        assert!(phi105.iter().any(|c| c.abs() == BigInt::from(2)));
    }

    #[test]
    fn vanishing_sums_of_roots() {
        // 1 + ζ₃ + ζ₃² = 0.
        let z = CycloNum::one(3)
            .add(&CycloNum::root_power(3, &BigInt::from(1)))
            .add(&CycloNum::root_power(3, &BigInt::from(2)));
        assert!(z.is_zero());
        assert!(!z.is_syntactically_zero());

        // 1 + ζ₄² = 0.
        let z = CycloNum::one(4).add(&CycloNum::root_power(4, &BigInt::from(2)));
        assert!(z.is_zero());

        // 1 + ζ₅ ≠ 0 (float magnitude > 1.6 as sanity oracle).
        let z = CycloNum::one(5).add(&CycloNum::root_power(5, &BigInt::from(1)));
        assert!(!z.is_zero());
        let (re, im) = z.approx();
        assert!((re * re + im * im).sqrt() > 1.6);
    }

    #[test]
    fn arithmetic_across_conductors() {
        // ζ₂ + ζ₃ + ζ₆ lives in conductor 6.
        let z = CycloNum::root_power(2, &BigInt::from(1))
            .add(&CycloNum::root_power(3, &BigInt::from(1)))
            .add(&CycloNum::root_power(6, &BigInt::from(1)));
        assert_eq!(z.conductor(), 6);
        // ζ₆ = −ζ₃², so the sum is −1 − ζ₃² + ζ₃ + ζ₆ ... check against
        // direct float evaluation instead of hand algebra.
        let (re, im) = z.approx();
        let expect_re = (-1.0f64)
            + (2.0 * std::f64::consts::PI / 3.0).cos()
            + (std::f64::consts::PI / 3.0).cos();
        assert!((re - expect_re).abs() < 1e-12);
        let expect_im =
            (2.0 * std::f64::consts::PI / 3.0).sin() + (std::f64::consts::PI / 3.0).sin();
        assert!((im - expect_im).abs() < 1e-12);

        // (1 − ζ₄)(1 + ζ₄) = 1 − ζ₄² = 2.
        let one_minus = CycloNum::one(4).sub(&CycloNum::root_power(4, &BigInt::from(1)));
        let one_plus = CycloNum::one(4).add(&CycloNum::root_power(4, &BigInt::from(1)));
        let prod = one_minus.mul(&one_plus);
        assert!(prod.sub(&CycloNum::from_rat(4, rat(2, 1))).is_zero());
    }

    #[test]
    fn unit_phase_reduction() {
        // e^{2πi·(−1/4)} = ζ₄³ within conductor 4.
        let z = CycloNum::unit_phase(4, &rat(-1, 4));
        assert_eq!(z, CycloNum::root_power(4, &BigInt::from(3)));
        // Integer phases collapse to 1.
        let z = CycloNum::unit_phase(4, &rat(3, 1));
        assert!(z.sub(&CycloNum::one(4)).is_zero());
    }

    #[test]
    fn conductor_guard() {
        assert!(check_conductor(&BigInt::from(12), 100).is_ok());
        assert_eq!(
            check_conductor(&BigInt::from(101), 100),
            Err(Error::ConductorOverflow(101, 100))
        );
    }
}

//! Field elements: `F_p` residues and arbitrary-precision rationals.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Zero};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum FieldError {
    #[error("modulus {0} is not an odd prime")]
    BadModulus(u64),
    #[error("q must be invertible")]
    NonInvertibleQ,
    #[error("expected {expected} cyclotomic parameters, got {got}")]
    BadParameterCount { expected: usize, got: usize },
    #[error("cannot parse scalar from {0:?}")]
    Parse(String),
    #[error("denominator is zero")]
    ZeroDenominator,
}

/// Which exact field the computation runs over.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FieldKind {
    Prime(u64),
    Rational,
}

/// An exact field element. Arithmetic panics on a modulus mismatch, which
/// can only arise from mixing elements of two different [`FieldSpec`]s.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Scalar {
    Fp { v: u64, p: u64 },
    Rat(BigRational),
}

fn fp_add(a: u64, b: u64, p: u64) -> u64 {
    let s = a + b;
    if s >= p {
        s - p
    } else {
        s
    }
}

fn fp_mul(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn fp_pow(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    while e > 0 {
        if e & 1 == 1 {
            acc = fp_mul(acc, a, p);
        }
        a = fp_mul(a, a, p);
        e >>= 1;
    }
    acc
}

impl Scalar {
    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Fp { v, .. } => *v == 0,
            Scalar::Rat(r) => r.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Fp { v, .. } => *v == 1,
            Scalar::Rat(r) => r.is_one(),
        }
    }

    pub fn add(&self, other: &Scalar) -> Scalar {
        match (self, other) {
            (Scalar::Fp { v: a, p }, Scalar::Fp { v: b, p: p2 }) => {
                assert_eq!(p, p2, "field mismatch");
                Scalar::Fp { v: fp_add(*a, *b, *p), p: *p }
            }
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a + b),
            _ => panic!("field mismatch"),
        }
    }

    pub fn sub(&self, other: &Scalar) -> Scalar {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Scalar) -> Scalar {
        match (self, other) {
            (Scalar::Fp { v: a, p }, Scalar::Fp { v: b, p: p2 }) => {
                assert_eq!(p, p2, "field mismatch");
                Scalar::Fp { v: fp_mul(*a, *b, *p), p: *p }
            }
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a * b),
            _ => panic!("field mismatch"),
        }
    }

    pub fn neg(&self) -> Scalar {
        match self {
            Scalar::Fp { v, p } => Scalar::Fp { v: if *v == 0 { 0 } else { p - v }, p: *p },
            Scalar::Rat(r) => Scalar::Rat(-r),
        }
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self) -> Option<Scalar> {
        match self {
            Scalar::Fp { v, p } => {
                if *v == 0 {
                    None
                } else {
                    Some(Scalar::Fp { v: fp_pow(*v, p - 2, *p), p: *p })
                }
            }
            Scalar::Rat(r) => {
                if r.is_zero() {
                    None
                } else {
                    Some(Scalar::Rat(r.recip()))
                }
            }
        }
    }

    /// Integer power, negative exponents via the inverse.
    pub fn pow(&self, e: i64) -> Scalar {
        let base = if e < 0 {
            self.inv().expect("pow of non-invertible scalar")
        } else {
            self.clone()
        };
        let mut acc = match self {
            Scalar::Fp { p, .. } => Scalar::Fp { v: 1, p: *p },
            Scalar::Rat(_) => Scalar::Rat(BigRational::one()),
        };
        for _ in 0..e.unsigned_abs() {
            acc = acc.mul(&base);
        }
        acc
    }

    /// Canonical string form: a decimal residue for `F_p`, `a/b` for rationals.
    pub fn serialize(&self) -> String {
        match self {
            Scalar::Fp { v, .. } => format!("{v}"),
            Scalar::Rat(r) => format!("{}/{}", r.numer(), r.denom()),
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.serialize())
    }
}

fn is_odd_prime(p: u64) -> bool {
    if p < 3 || p % 2 == 0 {
        return false;
    }
    let mut d = 3u64;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// The coefficient field together with the algebra parameters `q` and
/// `Q_1..Q_r`. All scalar construction goes through this.
#[derive(Clone, Debug)]
pub struct FieldSpec {
    kind: FieldKind,
    q: Scalar,
    q_inv: Scalar,
    qq: Vec<Scalar>,
}

impl FieldSpec {
    pub fn prime(p: u64, q: i64, qq: &[i64]) -> Result<FieldSpec, FieldError> {
        if !is_odd_prime(p) {
            return Err(FieldError::BadModulus(p));
        }
        let mk = |x: i64| Scalar::Fp { v: x.rem_euclid(p as i64) as u64, p };
        let q = mk(q);
        let q_inv = q.inv().ok_or(FieldError::NonInvertibleQ)?;
        Ok(FieldSpec { kind: FieldKind::Prime(p), q, q_inv, qq: qq.iter().map(|&x| mk(x)).collect() })
    }

    /// Prime field with `Q_i = q^{s_i}`.
    pub fn prime_qpow(p: u64, q: i64, spows: &[i64]) -> Result<FieldSpec, FieldError> {
        let base = FieldSpec::prime(p, q, &[])?;
        let qq = spows.iter().map(|&s| base.q.pow(s)).collect();
        Ok(FieldSpec { qq, ..base })
    }

    pub fn rational(q: (i64, i64), qq: &[(i64, i64)]) -> Result<FieldSpec, FieldError> {
        let mk = |(a, b): (i64, i64)| -> Result<Scalar, FieldError> {
            if b == 0 {
                return Err(FieldError::ZeroDenominator);
            }
            Ok(Scalar::Rat(BigRational::new(BigInt::from(a), BigInt::from(b))))
        };
        let q = mk(q)?;
        let q_inv = q.inv().ok_or(FieldError::NonInvertibleQ)?;
        let qq = qq.iter().map(|&x| mk(x)).collect::<Result<_, _>>()?;
        Ok(FieldSpec { kind: FieldKind::Rational, q, q_inv, qq })
    }

    pub fn kind(&self) -> FieldKind {
        self.kind
    }

    /// Number of cyclotomic parameters (the level `r` the spec was built for).
    pub fn level(&self) -> usize {
        self.qq.len()
    }

    pub fn zero(&self) -> Scalar {
        match self.kind {
            FieldKind::Prime(p) => Scalar::Fp { v: 0, p },
            FieldKind::Rational => Scalar::Rat(BigRational::zero()),
        }
    }

    pub fn one(&self) -> Scalar {
        match self.kind {
            FieldKind::Prime(p) => Scalar::Fp { v: 1, p },
            FieldKind::Rational => Scalar::Rat(BigRational::one()),
        }
    }

    pub fn int(&self, x: i64) -> Scalar {
        match self.kind {
            FieldKind::Prime(p) => Scalar::Fp { v: x.rem_euclid(p as i64) as u64, p },
            FieldKind::Rational => Scalar::Rat(BigRational::from(BigInt::from(x))),
        }
    }

    pub fn q(&self) -> &Scalar {
        &self.q
    }

    pub fn q_inv(&self) -> &Scalar {
        &self.q_inv
    }

    pub fn q_pow(&self, e: i64) -> Scalar {
        if e >= 0 {
            self.q.pow(e)
        } else {
            self.q_inv.pow(-e)
        }
    }

    /// `q - q^{-1}`, the coefficient in the quadratic relation.
    pub fn q_diff(&self) -> Scalar {
        self.q.sub(&self.q_inv)
    }

    /// Cyclotomic parameter `Q_i`, 1-based.
    pub fn qq(&self, i: usize) -> &Scalar {
        &self.qq[i - 1]
    }

    pub fn qq_all(&self) -> &[Scalar] {
        &self.qq
    }

    /// True when all `Q_i - Q_j` (i != j) are invertible; the modified
    /// Ariki-Koike algebra needs this.
    pub fn separation_weak(&self) -> bool {
        let r = self.qq.len();
        for i in 0..r {
            for j in 0..i {
                if self.qq[i].sub(&self.qq[j]).is_zero() {
                    return false;
                }
            }
        }
        true
    }

    pub fn parse_scalar(&self, s: &str) -> Result<Scalar, FieldError> {
        let s = s.trim();
        let bad = || FieldError::Parse(s.to_string());
        if let Some(rest) = s.strip_prefix("q^") {
            let e: i64 = rest.parse().map_err(|_| bad())?;
            return Ok(self.q_pow(e));
        }
        match self.kind {
            FieldKind::Prime(_) => {
                let v: i64 = s.parse().map_err(|_| bad())?;
                Ok(self.int(v))
            }
            FieldKind::Rational => {
                let (num, den) = match s.split_once('/') {
                    Some((a, b)) => (a, b),
                    None => (s, "1"),
                };
                let a: i64 = num.parse().map_err(|_| bad())?;
                let b: i64 = den.parse().map_err(|_| bad())?;
                if b == 0 {
                    return Err(FieldError::ZeroDenominator);
                }
                Ok(Scalar::Rat(BigRational::new(BigInt::from(a), BigInt::from(b))))
            }
        }
    }

    /// Canonical description used in cache headers and reports.
    pub fn describe(&self) -> String {
        let qs: Vec<String> = self.qq.iter().map(|x| x.serialize()).collect();
        match self.kind {
            FieldKind::Prime(p) => format!("Fp p={} q={} Q=[{}]", p, self.q.serialize(), qs.join(",")),
            FieldKind::Rational => format!("Q q={} Q=[{}]", self.q.serialize(), qs.join(",")),
        }
    }
}

/// The semisimplicity scalar
/// `P_n = prod_{i<=n} (1 + q^2 + ... + q^{2(i-1)}) * prod_{j<r} prod_{|k|<n} (q^{2k} Q_j - Q_{j+1})`.
///
/// Returns the value and whether it is invertible. The Poincare factors are
/// evaluated in `q^2`, matching the quadratic relation `(T_i - q)(T_i + q^{-1})`
/// under which `m_lambda T_w = q^{l(w)} m_lambda` squares to `q^{2 l(w)}`.
pub fn pn_value(spec: &FieldSpec, n: usize) -> (Scalar, bool) {
    let mut acc = spec.one();
    for i in 1..=n {
        let mut s = spec.zero();
        for t in 0..i {
            s = s.add(&spec.q_pow(2 * t as i64));
        }
        acc = acc.mul(&s);
    }
    let r = spec.level();
    for j in 1..r {
        for k in -(n as i64 - 1)..=(n as i64 - 1) {
            let f = spec.q_pow(2 * k).mul(spec.qq(j)).sub(spec.qq(j + 1));
            acc = acc.mul(&f);
        }
    }
    let inv = !acc.is_zero();
    (acc, inv)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::repkit::SplitMix64;

    fn rand_fp(spec: &FieldSpec, rng: &mut SplitMix64) -> Scalar {
        match spec.kind() {
            FieldKind::Prime(p) => Scalar::Fp { v: rng.next_u64() % p, p },
            FieldKind::Rational => {
                let a = (rng.next_u64() % 19) as i64 - 9;
                let b = (rng.next_u64() % 7) as i64 + 1;
                Scalar::Rat(BigRational::new(BigInt::from(a), BigInt::from(b)))
            }
        }
    }

    #[test]
    fn field_axioms_random() {
        for spec in [
            FieldSpec::prime(101, 3, &[1, 5]).unwrap(),
            FieldSpec::rational((2, 1), &[(1, 1), (7, 1)]).unwrap(),
        ] {
            let mut rng = SplitMix64::new(7);
            for _ in 0..200 {
                let a = rand_fp(&spec, &mut rng);
                let b = rand_fp(&spec, &mut rng);
                let c = rand_fp(&spec, &mut rng);
                assert_eq!(a.add(&b).add(&c), a.add(&b.add(&c)));
                assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
                assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
                assert_eq!(a.add(&b), b.add(&a));
                assert_eq!(a.mul(&b), b.mul(&a));
                assert_eq!(a.sub(&a), spec.zero());
                if !a.is_zero() {
                    assert_eq!(a.mul(&a.inv().unwrap()), spec.one());
                }
            }
        }
    }

    #[test]
    fn prime_field_matches_rationals_mod_p() {
        let p = 13u64;
        let fp = FieldSpec::prime(p, 2, &[]).unwrap();
        let qq = FieldSpec::rational((2, 1), &[]).unwrap();
        let mut rng = SplitMix64::new(99);
        for _ in 0..100 {
            let a = (rng.next_u64() % 40) as i64 - 20;
            let b = (rng.next_u64() % 40) as i64 - 20;
            let xr = qq.int(a).mul(&qq.int(b)).add(&qq.int(a));
            let xf = fp.int(a).mul(&fp.int(b)).add(&fp.int(a));
            // reduce the rational (an integer here) mod p
            if let Scalar::Rat(r) = &xr {
                assert!(r.is_integer());
                let red = ((r.numer() % BigInt::from(p)) + BigInt::from(p)) % BigInt::from(p);
                assert_eq!(fp.int(i64::try_from(red).unwrap()), xf);
            }
        }
    }

    #[test]
    fn pn_examples() {
        // q = 1, r = 1, n = 2: single factor 1 * (1 + 1) = 2
        let s = FieldSpec::rational((1, 1), &[(1, 1)]).unwrap();
        let (v, inv) = pn_value(&s, 2);
        assert_eq!(v, s.int(2));
        assert!(inv);

        // Q_2 = q^2 Q_1 kills the k = 1 factor
        let s = FieldSpec::rational((3, 1), &[(2, 1), (18, 1)]).unwrap();
        let (v, inv) = pn_value(&s, 2);
        assert!(v.is_zero());
        assert!(!inv);

        // generic rational parameters, distinct primes
        let s = FieldSpec::rational((2, 1), &[(1, 1), (7, 1)]).unwrap();
        let (_, inv) = pn_value(&s, 3);
        assert!(inv);
    }

    #[test]
    fn pn_detects_preset_degeneracies() {
        // p = 5, q = 2: 1 + q^2 = 0, so P_n vanishes from n = 2 on
        let s = FieldSpec::prime(5, 2, &[1, 3]).unwrap();
        assert!(!pn_value(&s, 2).1);
        // p = 7, q = 2: q^{-2} Q_1 = Q_2 already kills the k = -1 factor,
        // and 1 + q^2 + q^4 = 21 = 0 (mod 7) on top of that at n = 3
        let s = FieldSpec::prime(7, 2, &[1, 2]).unwrap();
        assert!(!pn_value(&s, 2).1);
        assert!(!pn_value(&s, 3).1);
        // r = 1 leaves only the Poincare factors
        let s = FieldSpec::prime(7, 2, &[1]).unwrap();
        assert!(pn_value(&s, 2).1);
        assert!(!pn_value(&s, 3).1);
    }

    #[test]
    fn scalar_serialization_round_trip() {
        let fp = FieldSpec::prime(7, 2, &[1, 2]).unwrap();
        let x = fp.int(-3);
        assert_eq!(x.serialize(), "4");
        assert_eq!(fp.parse_scalar("4").unwrap(), x);
        assert_eq!(fp.parse_scalar("q^2").unwrap(), fp.int(4));
        let qq = FieldSpec::rational((2, 1), &[]).unwrap();
        let y = qq.parse_scalar("-3/6").unwrap();
        assert_eq!(y.serialize(), "-1/2");
        assert!(FieldSpec::prime(9, 2, &[]).is_err());
        assert!(FieldSpec::prime(5, 0, &[]).is_err());
    }
}

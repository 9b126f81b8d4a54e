//! Square classes and low-degree root questions over multiquadratic fields Q(√d1, ..., √dn).

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;
use thiserror::Error;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("zero has no square class")]
    Zero,
    #[error("cannot parse `{0}`")]
    Parse(String),
    #[error("integer {0} is too large to factor by trial division")]
    TooLarge(String),
    #[error("polynomial has a repeated root")]
    Inseparable,
    #[error("expected degree {expected}, got {got}")]
    Degree { expected: usize, got: usize },
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

pub fn parse_rational(s: &str) -> Result<BigRational, FieldError> {
    let t = s.trim();
    let bad = || FieldError::Parse(s.to_string());
    match t.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(n, d))
        }
        None => Ok(BigRational::from_integer(t.parse().map_err(|_| bad())?)),
    }
}

pub fn fmt_rational(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

const TRIAL_LIMIT: u64 = 10_000_000;

/// Prime factorisation of |n| by trial division; fails when a cofactor beyond the trial
/// bound cannot be certified prime by the bound itself.
fn factor(n: &BigInt) -> Result<Vec<(u64, u32)>, FieldError> {
    let mut m = n.abs().to_u128().ok_or_else(|| FieldError::TooLarge(n.to_string()))?;
    let mut out = Vec::new();
    let mut p: u128 = 2;
    while p * p <= m {
        if p as u64 > TRIAL_LIMIT {
            return Err(FieldError::TooLarge(n.to_string()));
        }
        if m % p == 0 {
            let mut e = 0;
            while m % p == 0 {
                m /= p;
                e += 1;
            }
            out.push((p as u64, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if m > 1 {
        let m64 = u64::try_from(m).map_err(|_| FieldError::TooLarge(n.to_string()))?;
        out.push((m64, 1));
    }
    Ok(out)
}

/// Signed squarefree s with r/s a rational square.
pub fn squarefree_part(r: &BigRational) -> Result<i64, FieldError> {
    if r.is_zero() {
        return Err(FieldError::Zero);
    }
    let prod = r.numer() * r.denom();
    let mut s: i64 = if prod.is_negative() { -1 } else { 1 };
    for (p, e) in factor(&prod)? {
        if e % 2 == 1 {
            s = s.checked_mul(p as i64).ok_or_else(|| FieldError::TooLarge(prod.to_string()))?;
        }
    }
    Ok(s)
}

pub fn is_rational_square(r: &BigRational) -> bool {
    rational_sqrt(r).is_some()
}

pub fn rational_sqrt(r: &BigRational) -> Option<BigRational> {
    if r.is_negative() {
        return None;
    }
    let n = r.numer().sqrt();
    let d = r.denom().sqrt();
    if &(&n * &n) == r.numer() && &(&d * &d) == r.denom() {
        Some(BigRational::new(n, d))
    } else {
        None
    }
}

/// Q(√d1, ..., √dn) with the d's independent modulo squares.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SquareClassField {
    pub adjoined: Vec<i64>,
}

impl SquareClassField {
    pub fn rationals() -> Self {
        SquareClassField { adjoined: Vec::new() }
    }

    /// Adjoin classes in order, dropping any already in the span of the earlier ones.
    pub fn new(ds: &[i64]) -> Result<Self, FieldError> {
        let mut k = SquareClassField::rationals();
        for &d in ds {
            if d == 0 {
                return Err(FieldError::Zero);
            }
            let s = squarefree_part(&BigRational::from_integer(d.into()))?;
            if !k.is_square(&BigRational::from_integer(s.into())) {
                k.adjoined.push(s);
            }
        }
        Ok(k)
    }

    /// Comma-separated signed integers, `w` standing for -3 (so Q(ω) = Q(√-3)).
    pub fn parse(s: &str) -> Result<Self, FieldError> {
        let mut ds = Vec::new();
        for tok in s.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            if tok == "w" || tok == "omega" {
                ds.push(-3);
            } else if tok == "i" {
                ds.push(-1);
            } else {
                ds.push(tok.parse().map_err(|_| FieldError::Parse(s.to_string()))?);
            }
        }
        Self::new(&ds)
    }

    pub fn degree(&self) -> usize {
        1 << self.adjoined.len()
    }

    /// True iff r times some product of adjoined generators is a rational square.
    pub fn is_square(&self, r: &BigRational) -> bool {
        assert!(!r.is_zero(), "zero has no square class");
        (0..self.degree()).any(|mask| {
            let mut x = r.clone();
            for (i, &d) in self.adjoined.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    x *= BigRational::from_integer(d.into());
                }
            }
            is_rational_square(&x)
        })
    }

    pub fn extend(&self, d: i64) -> Result<Self, FieldError> {
        let mut v = self.adjoined.clone();
        v.push(d);
        Self::new(&v)
    }
}

impl fmt::Display for SquareClassField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.adjoined.is_empty() {
            return write!(f, "Q");
        }
        let parts: Vec<String> = self.adjoined.iter().map(|d| format!("√{d}")).collect();
        write!(f, "Q({})", parts.join(","))
    }
}

pub fn is_square_in(r: &BigRational, k: &SquareClassField) -> bool {
    k.is_square(r)
}

/// Element of a multiquadratic field, coordinates on the products b_S = Π_{i∈S} √d_i.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MqElem {
    pub c: Vec<BigRational>,
}

impl MqElem {
    pub fn from_rational(k: &SquareClassField, r: BigRational) -> Self {
        let mut c = vec![BigRational::zero(); k.degree()];
        c[0] = r;
        MqElem { c }
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|x| x.is_zero())
    }

    pub fn as_rational(&self) -> Option<BigRational> {
        if self.c[1..].iter().all(|x| x.is_zero()) {
            Some(self.c[0].clone())
        } else {
            None
        }
    }

    pub fn add(&self, o: &MqElem) -> MqElem {
        MqElem { c: self.c.iter().zip(&o.c).map(|(a, b)| a + b).collect() }
    }

    pub fn sub(&self, o: &MqElem) -> MqElem {
        MqElem { c: self.c.iter().zip(&o.c).map(|(a, b)| a - b).collect() }
    }

    pub fn scale(&self, r: &BigRational) -> MqElem {
        MqElem { c: self.c.iter().map(|a| a * r).collect() }
    }

    pub fn mul(&self, o: &MqElem, k: &SquareClassField) -> MqElem {
        let n = self.c.len();
        let mut out = vec![BigRational::zero(); n];
        for s in 0..n {
            if self.c[s].is_zero() {
                continue;
            }
            for t in 0..n {
                if o.c[t].is_zero() {
                    continue;
                }
                let both = s & t;
                let mut f = &self.c[s] * &o.c[t];
                for (i, &d) in k.adjoined.iter().enumerate() {
                    if both >> i & 1 == 1 {
                        f *= BigRational::from_integer(d.into());
                    }
                }
                out[s ^ t] += f;
            }
        }
        MqElem { c: out }
    }
}

/// Square root inside k, if one exists. Works down the tower one generator at a time:
/// with x = a + b√d over F, a root u + v√d needs u^2 = (a ± √(a^2 - d b^2))/2 in F.
pub fn sqrt_in(x: &MqElem, k: &SquareClassField) -> Option<MqElem> {
    let n = k.adjoined.len();
    if n == 0 {
        return rational_sqrt(&x.c[0]).map(|r| MqElem { c: vec![r] });
    }
    if x.is_zero() {
        return Some(x.clone());
    }
    let top = n - 1;
    let half = 1usize << top;
    let sub = SquareClassField { adjoined: k.adjoined[..top].to_vec() };
    let a = MqElem { c: x.c[..half].to_vec() };
    let b = MqElem { c: x.c[half..].to_vec() };
    let d = MqElem::from_rational(&sub, BigRational::from_integer(k.adjoined[top].into()));
    let lift = |u: &MqElem, v: &MqElem| -> MqElem {
        let mut c = u.c.clone();
        c.extend(v.c.iter().cloned());
        MqElem { c }
    };
    let zero = MqElem::from_rational(&sub, BigRational::zero());
    if b.is_zero() {
        if let Some(u) = sqrt_in(&a, &sub) {
            return Some(lift(&u, &zero));
        }
        // a = d v^2
        let dinv = MqElem::from_rational(&sub, BigRational::one() / BigRational::from_integer(k.adjoined[top].into()));
        return sqrt_in(&a.mul(&dinv, &sub), &sub).map(|v| lift(&zero, &v));
    }
    let norm = a.mul(&a, &sub).sub(&d.mul(&b.mul(&b, &sub), &sub));
    let rn = sqrt_in(&norm, &sub)?;
    let half_r = rat(1, 2);
    for sign in [1i64, -1] {
        let u2 = a.add(&rn.scale(&BigRational::from_integer(sign.into()))).scale(&half_r);
        if u2.is_zero() {
            continue;
        }
        if let Some(u) = sqrt_in(&u2, &sub) {
            // v = b / (2u)
            let inv = invert(&u, &sub)?;
            let v = b.mul(&inv, &sub).scale(&half_r);
            let cand = lift(&u, &v);
            if cand.mul(&cand, k) == *x {
                return Some(cand);
            }
        }
    }
    None
}

/// Multiplicative inverse via repeated conjugation.
pub fn invert(x: &MqElem, k: &SquareClassField) -> Option<MqElem> {
    if x.is_zero() {
        return None;
    }
    // Product of all non-trivial conjugates lands in Q.
    let n = k.adjoined.len();
    let mut acc = MqElem::from_rational(k, BigRational::one());
    for chi in 1..(1usize << n) {
        let conj = MqElem {
            c: x.c
                .iter()
                .enumerate()
                .map(|(s, v)| if (s & chi).count_ones() % 2 == 1 { -v.clone() } else { v.clone() })
                .collect(),
        };
        acc = acc.mul(&conj, k);
    }
    let norm = x.mul(&acc, k).as_rational()?;
    Some(acc.scale(&(BigRational::one() / norm)))
}

/// Polynomial with exact rational coefficients, lowest degree first.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RationalPoly {
    #[serde(serialize_with = "ser_coeffs")]
    pub coeffs: Vec<BigRational>,
}

fn ser_coeffs<S: serde::Serializer>(c: &[BigRational], s: S) -> Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(c.len()))?;
    for x in c {
        seq.serialize_element(&fmt_rational(x))?;
    }
    seq.end()
}

impl RationalPoly {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.len() > 1 && coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        RationalPoly { coeffs }
    }

    /// From integer coefficients, highest degree first (reads like the printed polynomial).
    pub fn from_desc(c: &[i64]) -> Self {
        Self::new(c.iter().rev().map(|&x| BigRational::from_integer(x.into())).collect())
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn eval_mq(&self, x: &MqElem, k: &SquareClassField) -> MqElem {
        let mut acc = MqElem::from_rational(k, BigRational::zero());
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(x, k).add(&MqElem::from_rational(k, c.clone()));
        }
        acc
    }

    fn lead(&self) -> &BigRational {
        self.coeffs.last().expect("non-empty")
    }

    /// Synthetic division by (x - r); returns the quotient.
    pub fn deflate(&self, r: &BigRational) -> RationalPoly {
        let n = self.degree();
        let mut q = vec![BigRational::zero(); n];
        let mut carry = BigRational::zero();
        for i in (1..=n).rev() {
            carry = &carry * r + &self.coeffs[i];
            q[i - 1] = carry.clone();
        }
        RationalPoly::new(q)
    }

    /// All distinct rational roots, by the rational root theorem.
    pub fn rational_roots(&self) -> Result<Vec<BigRational>, FieldError> {
        let mut p = self.clone();
        let mut roots = Vec::new();
        while p.degree() > 0 && p.coeffs[0].is_zero() {
            if !roots.contains(&BigRational::zero()) {
                roots.push(BigRational::zero());
            }
            p = RationalPoly::new(p.coeffs[1..].to_vec());
        }
        if p.degree() == 0 {
            return Ok(roots);
        }
        let lcm = p.coeffs.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> = p.coeffs.iter().map(|c| (c * BigRational::from_integer(lcm.clone())).to_integer()).collect();
        let num_divs = divisors(&ints[0])?;
        let den_divs = divisors(ints.last().expect("non-empty"))?;
        for n in &num_divs {
            for d in &den_divs {
                for s in [1i64, -1] {
                    let cand = BigRational::new(BigInt::from(s) * n, d.clone());
                    if !roots.contains(&cand) && p.eval(&cand).is_zero() {
                        roots.push(cand);
                    }
                }
            }
        }
        roots.sort();
        Ok(roots)
    }
}

fn divisors(n: &BigInt) -> Result<Vec<BigInt>, FieldError> {
    let mut out = vec![BigInt::one()];
    for (p, e) in factor(n)? {
        let mut next = Vec::new();
        for d in &out {
            let mut pk = BigInt::one();
            for _ in 0..=e {
                next.push(d * &pk);
                pk *= p;
            }
        }
        out = next;
    }
    Ok(out)
}

pub fn cubic_discriminant(p: &RationalPoly) -> BigRational {
    let [d, c, b, a] = [&p.coeffs[0], &p.coeffs[1], &p.coeffs[2], &p.coeffs[3]];
    let k = |n: i64| BigRational::from_integer(n.into());
    k(18) * a * b * c * d - k(4) * b * b * b * d + b * b * c * c - k(4) * a * c * c * c - k(27) * a * a * d * d
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CubicAnalysis {
    pub has_root_in_k: bool,
    pub discriminant_class: i64,
    pub galois_order_even_over_k: bool,
}

/// A root in a multiquadratic field has degree 1, 2 or 4 over Q, so a rational cubic has a
/// root in k exactly when it has a rational root. Galois order over k is even exactly when
/// the discriminant is not a square in k.
pub fn cubic_analysis(p: &RationalPoly, k: &SquareClassField) -> Result<CubicAnalysis, FieldError> {
    if p.degree() != 3 {
        return Err(FieldError::Degree { expected: 3, got: p.degree() });
    }
    let disc = cubic_discriminant(p);
    if disc.is_zero() {
        return Err(FieldError::Inseparable);
    }
    Ok(CubicAnalysis {
        has_root_in_k: !p.rational_roots()?.is_empty(),
        discriminant_class: squarefree_part(&disc)?,
        galois_order_even_over_k: !k.is_square(&disc),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Transitivity {
    Transitive,
    NotTransitive,
    Inconclusive,
}

/// Whether the Galois group over k permutes the four roots transitively, i.e. whether the
/// quartic stays irreducible over k. Exact: reducible iff a rational root exists or the
/// depressed quartic y^4 + py^2 + qy + r splits as (y^2 + sy + t)(y^2 - sy + v) over k, where
/// s^2 is a root of z^3 + 2pz^2 + (p^2 - 4r)z - q^2.
pub fn quartic_transitive_over(p: &RationalPoly, k: &SquareClassField) -> Result<Transitivity, FieldError> {
    if p.degree() != 4 {
        return Err(FieldError::Degree { expected: 4, got: p.degree() });
    }
    match quartic_reducible(p, k) {
        Ok(true) => Ok(Transitivity::NotTransitive),
        Ok(false) => Ok(Transitivity::Transitive),
        Err(FieldError::TooLarge(_)) => Ok(Transitivity::Inconclusive),
        Err(e) => Err(e),
    }
}

fn quartic_reducible(p: &RationalPoly, k: &SquareClassField) -> Result<bool, FieldError> {
    if !p.rational_roots()?.is_empty() {
        return Ok(true);
    }
    let lead = p.lead().clone();
    let m: Vec<BigRational> = p.coeffs.iter().map(|c| c / &lead).collect();
    let (e, d, c, b) = (&m[0], &m[1], &m[2], &m[3]);
    let k_ = |n: i64, dd: i64| rat(n, dd);
    // x = y - b/4
    let pp = c - k_(3, 8) * b * b;
    let qq = d - b * c / k_(2, 1) + b * b * b / k_(8, 1);
    let rr = e - b * d / k_(4, 1) + b * b * c / k_(16, 1) - k_(3, 256) * b * b * b * b;
    let resolvent = RationalPoly::new(vec![
        -(&qq * &qq),
        &pp * &pp - k_(4, 1) * &rr,
        k_(2, 1) * &pp,
        BigRational::one(),
    ]);
    let mut cands: Vec<MqElem> = Vec::new();
    for z in resolvent.rational_roots()? {
        cands.push(MqElem::from_rational(k, z.clone()));
        // roots of the quadratic cofactor, if they lie in k
        let quad = resolvent.deflate(&z);
        let (c0, c1, c2) = (&quad.coeffs[0], &quad.coeffs[1], &quad.coeffs[2]);
        let disc = c1 * c1 - k_(4, 1) * c2 * c0;
        if disc.is_zero() {
            cands.push(MqElem::from_rational(k, -c1 / (k_(2, 1) * c2)));
        } else if let Some(sq) = sqrt_in(&MqElem::from_rational(k, disc), k) {
            for sign in [1i64, -1] {
                let num = MqElem::from_rational(k, -c1.clone()).add(&sq.scale(&k_(sign, 1)));
                cands.push(num.scale(&(BigRational::one() / (k_(2, 1) * c2))));
            }
        }
    }
    for z in cands {
        if z.is_zero() {
            // q = 0: y^4 + p y^2 + r = (y^2 + t)(y^2 + v) with t + v = p, tv = r
            let disc = &pp * &pp - k_(4, 1) * &rr;
            if disc.is_zero() || sqrt_in(&MqElem::from_rational(k, disc), k).is_some() {
                return Ok(true);
            }
            continue;
        }
        if sqrt_in(&z, k).is_some() {
            return Ok(true);
        }
    }
    Ok(false)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        rat(n, d)
    }

    #[test]
    fn squarefree_examples() {
        assert_eq!(squarefree_part(&q(4, 1)).unwrap(), 1);
        assert_eq!(squarefree_part(&q(-13, 4)).unwrap(), -13);
        assert_eq!(squarefree_part(&q(325, 4)).unwrap(), 13);
        assert_eq!(squarefree_part(&q(2, 9)).unwrap(), 2);
        assert_eq!(squarefree_part(&q(1, 8)).unwrap(), 2);
        assert!(squarefree_part(&q(0, 1)).is_err());
    }

    #[test]
    fn membership_examples() {
        let k = SquareClassField::parse("w,-13").unwrap();
        assert!(!is_square_in(&q(13, 1), &k));
        assert!(is_square_in(&q(39, 1), &k));
        assert!(is_square_in(&q(-13, 4), &k));
        assert!(!is_square_in(&q(-1, 1), &SquareClassField::rationals()));
        let dup = SquareClassField::parse("w,-3,-12,-13,39").unwrap();
        assert_eq!(dup.adjoined, vec![-3, -13]);
    }

    #[test]
    fn sqrt_in_tower() {
        let k = SquareClassField::parse("2,3").unwrap();
        // (1 + √2)^2 = 3 + 2√2
        let x = MqElem { c: vec![q(3, 1), q(2, 1), q(0, 1), q(0, 1)] };
        let r = sqrt_in(&x, &k).unwrap();
        assert_eq!(r.mul(&r, &k), x);
        // 6 = (√2 √3)^2
        assert!(sqrt_in(&MqElem::from_rational(&k, q(6, 1)), &k).is_some());
        assert!(sqrt_in(&MqElem::from_rational(&k, q(5, 1)), &k).is_none());
        // 1 + √2 is not a square (its norm -1 is not a square in Q(√3))
        let y = MqElem { c: vec![q(1, 1), q(1, 1), q(0, 1), q(0, 1)] };
        assert!(sqrt_in(&y, &k).is_none());
    }

    #[test]
    fn cubic_fixtures() {
        let k1 = SquareClassField::parse("w,-13").unwrap();
        let c1 = cubic_analysis(&RationalPoly::from_desc(&[-13, 13, 0, -1]), &k1).unwrap();
        assert!(!c1.has_root_in_k);
        let k2 = SquareClassField::parse("w,-22").unwrap();
        let c2 = cubic_analysis(&RationalPoly::from_desc(&[1, 2, 0, -2]), &k2).unwrap();
        assert!(!c2.has_root_in_k);
        // (x - 1)(x^2 + 1)
        let c3 = cubic_analysis(&RationalPoly::from_desc(&[1, -1, 1, -1]), &SquareClassField::rationals()).unwrap();
        assert!(c3.has_root_in_k);
        assert_eq!(c3.discriminant_class, -1);
        assert!(c3.galois_order_even_over_k);
    }

    #[test]
    fn quartic_fixtures() {
        let t = quartic_transitive_over(&RationalPoly::from_desc(&[9, 0, 0, 8, 4]), &SquareClassField::parse("w").unwrap());
        assert_eq!(t.unwrap(), Transitivity::Transitive);
        // z = -2 is a rational root: (z + 2)(z^3 - 2z^2 + 4z + 8)
        let p = RationalPoly::from_desc(&[1, 0, 0, 16, 16]);
        assert_eq!(p.rational_roots().unwrap(), vec![q(-2, 1)]);
        let t = quartic_transitive_over(&p, &SquareClassField::parse("w,-22").unwrap());
        assert_eq!(t.unwrap(), Transitivity::NotTransitive);
        let t = quartic_transitive_over(&RationalPoly::from_desc(&[1, 0, -5, 0, 6]), &SquareClassField::rationals());
        assert_eq!(t.unwrap(), Transitivity::NotTransitive);
        // x^4 - 10x^2 + 1 is irreducible over Q but splits over Q(√2, √3)
        let p = RationalPoly::from_desc(&[1, 0, -10, 0, 1]);
        assert_eq!(quartic_transitive_over(&p, &SquareClassField::rationals()).unwrap(), Transitivity::Transitive);
        assert_eq!(quartic_transitive_over(&p, &SquareClassField::parse("2").unwrap()).unwrap(), Transitivity::NotTransitive);
        // x^4 - 2 becomes reducible once √2 is adjoined: (x^2 - √2)(x^2 + √2)
        let p = RationalPoly::from_desc(&[1, 0, 0, 0, -2]);
        assert_eq!(quartic_transitive_over(&p, &SquareClassField::parse("-1").unwrap()).unwrap(), Transitivity::Transitive);
        assert_eq!(quartic_transitive_over(&p, &SquareClassField::parse("2").unwrap()).unwrap(), Transitivity::NotTransitive);
    }

    #[test]
    fn rational_roots_found() {
        // (x - 1)(2x - 1)(3x + 1)
        let p = RationalPoly::from_desc(&[6, -7, 0, 1]);
        assert_eq!(p.rational_roots().unwrap(), vec![q(-1, 3), q(1, 2), q(1, 1)]);
        let p = RationalPoly::from_desc(&[4, 0, -1]);
        assert_eq!(p.rational_roots().unwrap(), vec![q(-1, 2), q(1, 2)]);
    }
}

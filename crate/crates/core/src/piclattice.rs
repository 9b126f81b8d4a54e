//! Picard lattice of a degree-2 del Pezzo surface.
//!
//! Classes are stored as raw coordinates in the basis (L, E1..E7), so the
//! anticanonical class is `3L - E1 - ... - E7` and `K` itself is `(-3; 1, ..., 1)`.

use std::fmt;

use serde::Serialize;
use thiserror::Error;

pub const RANK: usize = 8;
pub const NUM_LINES: usize = 56;

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct DivisorClass(pub [i64; RANK]);

impl DivisorClass {
    pub const ZERO: DivisorClass = DivisorClass([0; RANK]);

    pub fn new(coeffs: [i64; RANK]) -> Self {
        DivisorClass(coeffs)
    }

    pub fn l() -> Self {
        let mut c = [0; RANK];
        c[0] = 1;
        DivisorClass(c)
    }

    /// Exceptional class `E_i`, `i` in 1..=7.
    pub fn e(i: usize) -> Self {
        assert!((1..=7).contains(&i), "exceptional index out of range: {i}");
        let mut c = [0; RANK];
        c[i] = 1;
        DivisorClass(c)
    }

    pub fn canonical() -> Self {
        DivisorClass([-3, 1, 1, 1, 1, 1, 1, 1])
    }

    pub fn dot(&self, other: &DivisorClass) -> i64 {
        let mut s = self.0[0] * other.0[0];
        for i in 1..RANK {
            s -= self.0[i] * other.0[i];
        }
        s
    }

    pub fn square(&self) -> i64 {
        self.dot(self)
    }

    pub fn scale(&self, k: i64) -> Self {
        let mut c = self.0;
        c.iter_mut().for_each(|x| *x *= k);
        DivisorClass(c)
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    /// Exact division by `k`, `None` if some coordinate is not divisible.
    pub fn div_exact(&self, k: i64) -> Option<Self> {
        let mut c = self.0;
        for x in c.iter_mut() {
            if *x % k != 0 {
                return None;
            }
            *x /= k;
        }
        Some(DivisorClass(c))
    }

    /// Parse `aL-b1E1-...` style text, e.g. `L-E1-E2-E3` or `-3L+E1+E2`.
    pub fn parse(s: &str) -> Result<Self, LatticeError> {
        let bad = || LatticeError::Parse(s.to_string());
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if t.is_empty() {
            return Err(bad());
        }
        if t == "0" {
            return Ok(DivisorClass::ZERO);
        }
        let mut out = [0i64; RANK];
        let bytes = t.as_bytes();
        let mut pos = 0;
        while pos < bytes.len() {
            let mut sign = 1;
            if bytes[pos] == b'+' || bytes[pos] == b'-' {
                if bytes[pos] == b'-' {
                    sign = -1;
                }
                pos += 1;
            }
            let start = pos;
            while pos < bytes.len() && bytes[pos].is_ascii_digit() {
                pos += 1;
            }
            let coef: i64 = if pos > start { t[start..pos].parse().map_err(|_| bad())? } else { 1 };
            if pos >= bytes.len() {
                return Err(bad());
            }
            match bytes[pos] {
                b'L' => {
                    out[0] += sign * coef;
                    pos += 1;
                }
                b'K' => {
                    let k = DivisorClass::canonical();
                    for i in 0..RANK {
                        out[i] += sign * coef * k.0[i];
                    }
                    pos += 1;
                }
                b'E' => {
                    pos += 1;
                    if pos >= bytes.len() || !(b'1'..=b'7').contains(&bytes[pos]) {
                        return Err(bad());
                    }
                    out[(bytes[pos] - b'0') as usize] += sign * coef;
                    pos += 1;
                }
                _ => return Err(bad()),
            }
        }
        Ok(DivisorClass(out))
    }
}

impl std::ops::Add for DivisorClass {
    type Output = DivisorClass;
    fn add(self, o: DivisorClass) -> DivisorClass {
        let mut c = self.0;
        for i in 0..RANK {
            c[i] += o.0[i];
        }
        DivisorClass(c)
    }
}

impl std::ops::Sub for DivisorClass {
    type Output = DivisorClass;
    fn sub(self, o: DivisorClass) -> DivisorClass {
        let mut c = self.0;
        for i in 0..RANK {
            c[i] -= o.0[i];
        }
        DivisorClass(c)
    }
}

impl std::ops::Neg for DivisorClass {
    type Output = DivisorClass;
    fn neg(self) -> DivisorClass {
        self.scale(-1)
    }
}

impl fmt::Display for DivisorClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        let mut term = |f: &mut fmt::Formatter<'_>, c: i64, name: &str| -> fmt::Result {
            if c == 0 {
                return Ok(());
            }
            let sign = if c < 0 { "-" } else if first { "" } else { "+" };
            first = false;
            if c.abs() == 1 {
                write!(f, "{sign}{name}")
            } else {
                write!(f, "{sign}{}{name}", c.abs())
            }
        };
        term(f, self.0[0], "L")?;
        for i in 1..RANK {
            term(f, self.0[i], &format!("E{i}"))?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize)]
pub enum LineLabel {
    E(u8),
    L(u8, u8),
    Q(u8, u8),
    C(u8),
}

impl LineLabel {
    pub fn class(&self) -> DivisorClass {
        let mut c = [0i64; RANK];
        match *self {
            LineLabel::E(i) => c[i as usize] = 1,
            LineLabel::L(i, j) => {
                c[0] = 1;
                c[i as usize] = -1;
                c[j as usize] = -1;
            }
            LineLabel::Q(i, j) => {
                c[0] = 2;
                for k in 1..RANK {
                    if k != i as usize && k != j as usize {
                        c[k] = -1;
                    }
                }
            }
            LineLabel::C(i) => {
                c[0] = 3;
                for k in 1..RANK {
                    c[k] = -1;
                }
                c[i as usize] = -2;
            }
        }
        DivisorClass(c)
    }

    /// Position in the fixed catalog order: E, then L_ij, then Q_ij, then C_i.
    pub fn index(&self) -> usize {
        match *self {
            LineLabel::E(i) => i as usize - 1,
            LineLabel::L(i, j) => 7 + pair_rank(i, j),
            LineLabel::Q(i, j) => 28 + pair_rank(i, j),
            LineLabel::C(i) => 49 + i as usize - 1,
        }
    }

    pub fn from_index(idx: usize) -> LineLabel {
        LINE_LABELS[idx]
    }

    pub fn parse(s: &str) -> Result<LineLabel, LatticeError> {
        let bad = || LatticeError::Parse(s.to_string());
        let b = s.trim().as_bytes();
        let digit = |c: u8| -> Result<u8, LatticeError> {
            if (b'1'..=b'7').contains(&c) {
                Ok(c - b'0')
            } else {
                Err(bad())
            }
        };
        let pair = |i: u8, j: u8| -> Result<(u8, u8), LatticeError> {
            if i == j {
                return Err(bad());
            }
            Ok((i.min(j), i.max(j)))
        };
        match b {
            [b'E', i] => Ok(LineLabel::E(digit(*i)?)),
            [b'C', i] => Ok(LineLabel::C(digit(*i)?)),
            [b'L', i, j] => {
                let (i, j) = pair(digit(*i)?, digit(*j)?)?;
                Ok(LineLabel::L(i, j))
            }
            [b'Q', i, j] => {
                let (i, j) = pair(digit(*i)?, digit(*j)?)?;
                Ok(LineLabel::Q(i, j))
            }
            _ => Err(bad()),
        }
    }
}

impl fmt::Display for LineLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LineLabel::E(i) => write!(f, "E{i}"),
            LineLabel::L(i, j) => write!(f, "L{i}{j}"),
            LineLabel::Q(i, j) => write!(f, "Q{i}{j}"),
            LineLabel::C(i) => write!(f, "C{i}"),
        }
    }
}

fn pair_rank(i: u8, j: u8) -> usize {
    debug_assert!(i < j);
    let (i, j) = (i as usize, j as usize);
    // pairs (1,2),(1,3),...,(1,7),(2,3),...
    let before: usize = (1..i).map(|a| 7 - a).sum();
    before + (j - i - 1)
}

const fn build_labels() -> [LineLabel; NUM_LINES] {
    let mut out = [LineLabel::E(1); NUM_LINES];
    let mut i = 0;
    while i < 7 {
        out[i] = LineLabel::E(i as u8 + 1);
        out[49 + i] = LineLabel::C(i as u8 + 1);
        i += 1;
    }
    let mut k = 0;
    let mut a = 1;
    while a <= 7 {
        let mut b = a + 1;
        while b <= 7 {
            out[7 + k] = LineLabel::L(a, b);
            out[28 + k] = LineLabel::Q(a, b);
            k += 1;
            b += 1;
        }
        a += 1;
    }
    out
}

pub static LINE_LABELS: [LineLabel; NUM_LINES] = build_labels();

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Line {
    pub label: LineLabel,
    pub class: DivisorClass,
}

/// All 56 lines in catalog order.
pub fn enumerate_lines() -> Vec<Line> {
    LINE_LABELS.iter().map(|&label| Line { label, class: label.class() }).collect()
}

/// Classes of all lines, indexed like [`LINE_LABELS`].
pub fn line_classes() -> [DivisorClass; NUM_LINES] {
    let mut out = [DivisorClass::ZERO; NUM_LINES];
    for (i, l) in LINE_LABELS.iter().enumerate() {
        out[i] = l.class();
    }
    out
}

/// Inverse of [`LineLabel::class`]: recognise a line from its raw coordinates.
pub fn line_index_of(d: &DivisorClass) -> Option<usize> {
    let c = &d.0;
    let label = match c[0] {
        0 => {
            let mut hit = None;
            for i in 1..RANK {
                match c[i] {
                    0 => {}
                    1 if hit.is_none() => hit = Some(i as u8),
                    _ => return None,
                }
            }
            LineLabel::E(hit?)
        }
        1 => {
            let minus: Vec<u8> = (1..RANK).filter(|&i| c[i] == -1).map(|i| i as u8).collect();
            if minus.len() != 2 || (1..RANK).any(|i| c[i] != 0 && c[i] != -1) {
                return None;
            }
            LineLabel::L(minus[0], minus[1])
        }
        2 => {
            let zero: Vec<u8> = (1..RANK).filter(|&i| c[i] == 0).map(|i| i as u8).collect();
            if zero.len() != 2 || (1..RANK).any(|i| c[i] != 0 && c[i] != -1) {
                return None;
            }
            LineLabel::Q(zero[0], zero[1])
        }
        3 => {
            let two: Vec<u8> = (1..RANK).filter(|&i| c[i] == -2).map(|i| i as u8).collect();
            if two.len() != 1 || (1..RANK).any(|i| c[i] != -1 && c[i] != -2) {
                return None;
            }
            LineLabel::C(two[0])
        }
        _ => return None,
    };
    Some(label.index())
}

/// Full 56x56 table of pairwise intersections.
pub fn intersection_table() -> [[i8; NUM_LINES]; NUM_LINES] {
    let cls = line_classes();
    let mut t = [[0i8; NUM_LINES]; NUM_LINES];
    for i in 0..NUM_LINES {
        for j in 0..NUM_LINES {
            t[i][j] = cls[i].dot(&cls[j]) as i8;
        }
    }
    t
}

/// The fixed-point-free involution pairing each line with the one it meets twice.
pub fn geiser_partner(idx: usize) -> usize {
    match LINE_LABELS[idx] {
        LineLabel::E(i) => LineLabel::C(i).index(),
        LineLabel::C(i) => LineLabel::E(i).index(),
        LineLabel::L(i, j) => LineLabel::Q(i, j).index(),
        LineLabel::Q(i, j) => LineLabel::L(i, j).index(),
    }
}

/// Value of the signature (1,7) form.
pub fn intersect(a: &DivisorClass, b: &DivisorClass) -> i64 {
    a.dot(b)
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum LatticeError {
    #[error("cannot parse `{0}`")]
    Parse(String),
    #[error("{class} has self-intersection {square} in the current model, expected -1")]
    NotExceptional { class: DivisorClass, square: i64 },
    #[error("{a} and {b} meet with multiplicity {product}")]
    NotDisjoint { a: DivisorClass, b: DivisorClass, product: i64 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContractedModel {
    pub contracted: Vec<DivisorClass>,
    pub current_k: DivisorClass,
}

impl Default for ContractedModel {
    fn default() -> Self {
        Self::fresh()
    }
}

impl ContractedModel {
    pub fn fresh() -> Self {
        ContractedModel { contracted: Vec::new(), current_k: DivisorClass::canonical() }
    }

    pub fn k_squared(&self) -> i64 {
        self.current_k.square()
    }

    /// Contract a set of pairwise disjoint (-1)-classes orthogonal to everything already contracted.
    pub fn contract(&self, sigma: &[DivisorClass]) -> Result<ContractedModel, LatticeError> {
        for &d in sigma {
            let sq = d.square();
            if sq != -1 {
                return Err(LatticeError::NotExceptional { class: d, square: sq });
            }
        }
        for (i, a) in sigma.iter().enumerate() {
            for b in sigma.iter().skip(i + 1).chain(self.contracted.iter()) {
                let p = a.dot(b);
                if p != 0 {
                    return Err(LatticeError::NotDisjoint { a: *a, b: *b, product: p });
                }
            }
        }
        let mut out = self.clone();
        for &d in sigma {
            out.current_k = out.current_k - d;
            out.contracted.push(d);
        }
        Ok(out)
    }

    /// Lines surviving on the contracted surface: the original lines orthogonal to every
    /// contracted class.
    pub fn residual_lines(&self) -> Vec<usize> {
        let cls = line_classes();
        (0..NUM_LINES)
            .filter(|&i| self.contracted.iter().all(|c| cls[i].dot(c) == 0))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    // Independent oracle: every vector in the box |a| <= 3, |b_i| <= 2 with D^2 = -1, D.K = -1.
    fn brute_force_lines() -> BTreeSet<DivisorClass> {
        let k = DivisorClass::canonical();
        let mut out = BTreeSet::new();
        for code in 0..5i64.pow(7) {
            let mut c = [0i64; RANK];
            let mut x = code;
            for i in 1..RANK {
                c[i] = x % 5 - 2;
                x /= 5;
            }
            for a in -3..=3 {
                c[0] = a;
                let d = DivisorClass(c);
                if d.square() == -1 && d.dot(&k) == -1 {
                    out.insert(d);
                }
            }
        }
        out
    }

    #[test]
    fn catalog_matches_bounded_search() {
        let found = brute_force_lines();
        let cat: BTreeSet<_> = enumerate_lines().into_iter().map(|l| l.class).collect();
        assert_eq!(found.len(), 56);
        assert_eq!(found, cat);
    }

    #[test]
    fn quoted_products() {
        let c = |s: &str| LineLabel::parse(s).unwrap().class();
        assert_eq!(intersect(&c("E1"), &c("C1")), 2);
        assert_eq!(intersect(&c("L12"), &c("Q13")), 1);
        assert_eq!(intersect(&c("E1"), &c("E2")), 0);
        let k = DivisorClass::canonical();
        assert_eq!(k.square(), 2);
    }

    #[test]
    fn labels_roundtrip() {
        for (i, l) in LINE_LABELS.iter().enumerate() {
            assert_eq!(l.index(), i);
            assert_eq!(line_index_of(&l.class()), Some(i));
            assert_eq!(LineLabel::parse(&l.to_string()).unwrap(), *l);
        }
        assert_eq!(line_index_of(&DivisorClass::l()), None);
    }

    #[test]
    fn sum_of_lines_is_multiple_of_k() {
        let s = enumerate_lines().iter().fold(DivisorClass::ZERO, |acc, l| acc + l.class);
        assert_eq!(s, DivisorClass::canonical().scale(-28));
    }

    #[test]
    fn partner_is_unique_double_meeting() {
        let t = intersection_table();
        for i in 0..NUM_LINES {
            let twos: Vec<usize> = (0..NUM_LINES).filter(|&j| t[i][j] == 2).collect();
            assert_eq!(twos, vec![geiser_partner(i)]);
            for j in 0..NUM_LINES {
                assert!((-1..=2).contains(&t[i][j]));
            }
        }
    }

    #[test]
    fn contraction_chain_line_counts() {
        let mut m = ContractedModel::fresh();
        let mut counts = vec![m.residual_lines().len()];
        for i in (1..=7).rev() {
            m = m.contract(&[DivisorClass::e(i)]).unwrap();
            counts.push(m.residual_lines().len());
        }
        assert_eq!(counts, vec![56, 27, 16, 10, 6, 3, 1, 0]);
        assert_eq!(m.k_squared(), 9);
    }

    #[test]
    fn contract_e7_leaves_cubic_surface() {
        let m = ContractedModel::fresh().contract(&[DivisorClass::e(7)]).unwrap();
        assert_eq!(m.k_squared(), 3);
        assert_eq!(m.residual_lines().len(), 27);
    }

    #[test]
    fn contract_rejects_meeting_pair() {
        let e1 = DivisorClass::e(1);
        let l12 = LineLabel::L(1, 2).class();
        let err = ContractedModel::fresh().contract(&[e1, l12]).unwrap_err();
        assert!(matches!(err, LatticeError::NotDisjoint { product: 1, .. }));
        let err = ContractedModel::fresh().contract(&[DivisorClass::l()]).unwrap_err();
        assert!(matches!(err, LatticeError::NotExceptional { .. }));
    }

    #[test]
    fn text_format() {
        assert_eq!(LineLabel::L(1, 2).class().to_string(), "L-E1-E2");
        let d = DivisorClass::parse("3L-E1-E2-E3-E4-E5-E6-E7").unwrap();
        assert_eq!(d, -DivisorClass::canonical());
        assert_eq!(DivisorClass::parse(&d.to_string()).unwrap(), d);
        assert!(DivisorClass::parse("L-E9").is_err());
    }
}

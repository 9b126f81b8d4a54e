//! W(E7) acting on the Picard lattice: named generators, closure, orbits,
//! invariant rank, centralizers, conjugacy and equivariant contraction search.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::piclattice::{
    line_classes, line_index_of, DivisorClass, LatticeError, LineLabel, LINE_LABELS, NUM_LINES, RANK,
};

pub const W_E7_ORDER: usize = 2_903_040;
pub const DEFAULT_CAP: usize = 3_000_000;

pub type Matrix = [[i64; RANK]; RANK];

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum WeylError {
    #[error("root {0} must have square -2 and be orthogonal to K")]
    BadRoot(DivisorClass),
    #[error("images do not extend to an isometry fixing K: {0}")]
    NotIsometry(String),
    #[error("group exceeds cap of {0} elements")]
    CapExceeded(usize),
    #[error("cannot parse generator `{0}`")]
    Parse(String),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

/// Element of W(E7), keyed by its permutation of the 56 lines.
#[derive(Clone, Copy)]
pub struct LatticeIsometry {
    pub perm: [u8; NUM_LINES],
    /// Column j is the image of basis vector j of (L, E1..E7).
    pub matrix: Matrix,
}

impl PartialEq for LatticeIsometry {
    fn eq(&self, o: &Self) -> bool {
        self.perm == o.perm
    }
}
impl Eq for LatticeIsometry {}

impl std::hash::Hash for LatticeIsometry {
    fn hash<H: std::hash::Hasher>(&self, h: &mut H) {
        self.perm.hash(h)
    }
}

impl fmt::Debug for LatticeIsometry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let imgs: Vec<String> =
            (0..7).map(|i| LINE_LABELS[self.perm[i] as usize].to_string()).collect();
        write!(f, "Isometry[E1..E7 -> {}]", imgs.join(","))
    }
}

fn basis_vec(j: usize) -> DivisorClass {
    let mut c = [0; RANK];
    c[j] = 1;
    DivisorClass(c)
}

impl LatticeIsometry {
    pub fn identity() -> Self {
        let mut perm = [0u8; NUM_LINES];
        for (i, p) in perm.iter_mut().enumerate() {
            *p = i as u8;
        }
        let mut m = [[0; RANK]; RANK];
        for (i, row) in m.iter_mut().enumerate() {
            row[i] = 1;
        }
        LatticeIsometry { perm, matrix: m }
    }

    /// Build from the images of L, E1..E7, checking the form, K and the line set.
    pub fn from_basis_images(img: [DivisorClass; RANK]) -> Result<Self, WeylError> {
        for i in 0..RANK {
            for j in 0..RANK {
                if img[i].dot(&img[j]) != basis_vec(i).dot(&basis_vec(j)) {
                    return Err(WeylError::NotIsometry(format!("form not preserved on ({i},{j})")));
                }
            }
        }
        let mut matrix = [[0; RANK]; RANK];
        for j in 0..RANK {
            for i in 0..RANK {
                matrix[i][j] = img[j].0[i];
            }
        }
        let mut iso = LatticeIsometry { perm: [0; NUM_LINES], matrix };
        let k = DivisorClass::canonical();
        if iso.apply(&k) != k {
            return Err(WeylError::NotIsometry("K is moved".into()));
        }
        let cls = line_classes();
        for (i, c) in cls.iter().enumerate() {
            let im = iso.apply(c);
            let j = line_index_of(&im)
                .ok_or_else(|| WeylError::NotIsometry(format!("{} maps to non-line {im}", LINE_LABELS[i])))?;
            iso.perm[i] = j as u8;
        }
        Ok(iso)
    }

    /// Build from images of E1..E7 alone; L is forced by fixing K.
    pub fn from_e_images(e: [DivisorClass; 7]) -> Result<Self, WeylError> {
        let sum = e.iter().fold(DivisorClass::ZERO, |a, &b| a + b);
        let l = (sum - DivisorClass::canonical())
            .div_exact(3)
            .ok_or_else(|| WeylError::NotIsometry("image of L is not integral".into()))?;
        let mut img = [DivisorClass::ZERO; RANK];
        img[0] = l;
        img[1..].copy_from_slice(&e);
        Self::from_basis_images(img)
    }

    pub fn from_key(key: u64) -> Self {
        let v = KeyView::new(key);
        let mut img = [DivisorClass::ZERO; RANK];
        img[0] = v.l_img;
        img[1..].copy_from_slice(&v.e_img);
        let mut matrix = [[0; RANK]; RANK];
        for j in 0..RANK {
            for i in 0..RANK {
                matrix[i][j] = img[j].0[i];
            }
        }
        let mut perm = [0u8; NUM_LINES];
        for (i, p) in perm.iter_mut().enumerate() {
            *p = v.image_of_line(i) as u8;
        }
        LatticeIsometry { perm, matrix }
    }

    /// Compact key: the line indices of the images of E1..E7. The E's span Pic together with K,
    /// so these seven bytes determine the element.
    pub fn key(&self) -> u64 {
        key_of(&self.perm)
    }

    pub fn apply(&self, d: &DivisorClass) -> DivisorClass {
        let mut out = [0; RANK];
        for (i, o) in out.iter_mut().enumerate() {
            *o = (0..RANK).map(|j| self.matrix[i][j] * d.0[j]).sum();
        }
        DivisorClass(out)
    }

    pub fn apply_line(&self, idx: usize) -> usize {
        self.perm[idx] as usize
    }

    /// `self ∘ other`, i.e. apply `other` first.
    pub fn compose(&self, other: &LatticeIsometry) -> LatticeIsometry {
        let mut perm = [0u8; NUM_LINES];
        for i in 0..NUM_LINES {
            perm[i] = self.perm[other.perm[i] as usize];
        }
        let mut m = [[0; RANK]; RANK];
        for i in 0..RANK {
            for j in 0..RANK {
                m[i][j] = (0..RANK).map(|k| self.matrix[i][k] * other.matrix[k][j]).sum();
            }
        }
        LatticeIsometry { perm, matrix: m }
    }

    pub fn inverse(&self) -> LatticeIsometry {
        let mut perm = [0u8; NUM_LINES];
        for i in 0..NUM_LINES {
            perm[self.perm[i] as usize] = i as u8;
        }
        // Inverse of an isometry: J M^T J with J = diag(1,-1,...,-1).
        let mut m = [[0; RANK]; RANK];
        for i in 0..RANK {
            for j in 0..RANK {
                let s = if (i == 0) == (j == 0) { 1 } else { -1 };
                m[i][j] = s * self.matrix[j][i];
            }
        }
        LatticeIsometry { perm, matrix: m }
    }

    pub fn pow(&self, n: u32) -> LatticeIsometry {
        let mut r = LatticeIsometry::identity();
        for _ in 0..n {
            r = r.compose(self);
        }
        r
    }

    pub fn is_identity(&self) -> bool {
        self.perm.iter().enumerate().all(|(i, &p)| p as usize == i)
    }

    pub fn order(&self) -> u32 {
        let mut g = *self;
        let mut n = 1;
        while !g.is_identity() {
            g = g.compose(self);
            n += 1;
        }
        n
    }

    pub fn trace(&self) -> i64 {
        (0..RANK).map(|i| self.matrix[i][i]).sum()
    }

    pub fn fixed_lines(&self) -> Vec<usize> {
        (0..NUM_LINES).filter(|&i| self.perm[i] as usize == i).collect()
    }

    /// Sorted cycle lengths of the line permutation.
    pub fn cycle_type(&self) -> Vec<usize> {
        let mut seen = [false; NUM_LINES];
        let mut out = Vec::new();
        for s in 0..NUM_LINES {
            if seen[s] {
                continue;
            }
            let mut len = 0;
            let mut x = s;
            while !seen[x] {
                seen[x] = true;
                x = self.perm[x] as usize;
                len += 1;
            }
            out.push(len);
        }
        out.sort_unstable();
        out
    }

    pub fn commutes_with(&self, other: &LatticeIsometry) -> bool {
        (0..NUM_LINES).all(|i| self.perm[other.perm[i] as usize] == other.perm[self.perm[i] as usize])
    }

    /// Reflection x -> x + (x.root) root.
    pub fn reflection(root: &DivisorClass) -> Result<Self, WeylError> {
        if root.square() != -2 || root.dot(&DivisorClass::canonical()) != 0 {
            return Err(WeylError::BadRoot(*root));
        }
        let mut img = [DivisorClass::ZERO; RANK];
        for (j, im) in img.iter_mut().enumerate() {
            let x = basis_vec(j);
            *im = x + root.scale(x.dot(root));
        }
        Self::from_basis_images(img)
    }

    /// Permutation of the indices 1..7; `sigma[i-1]` is the image of i.
    pub fn permutation(sigma: [u8; 7]) -> Result<Self, WeylError> {
        let mut e = [DivisorClass::ZERO; 7];
        for i in 0..7 {
            e[i] = DivisorClass::e(sigma[i] as usize);
        }
        Self::from_e_images(e)
    }

    pub fn geiser() -> Self {
        // -1 on K-perp, identity on K:  x -> -x + (x.K) K.
        let k = DivisorClass::canonical();
        let mut img = [DivisorClass::ZERO; RANK];
        for (j, im) in img.iter_mut().enumerate() {
            let x = basis_vec(j);
            *im = -x + k.scale(x.dot(&k));
        }
        Self::from_basis_images(img).expect("geiser is an isometry")
    }
}

pub(crate) fn key_of(perm: &[u8; NUM_LINES]) -> u64 {
    let mut k = 0u64;
    for i in 0..7 {
        k |= (perm[i] as u64) << (8 * i);
    }
    k
}

/// Lightweight evaluation of an element given only its key.
pub(crate) struct KeyView {
    pub e_img: [DivisorClass; 7],
    pub l_img: DivisorClass,
}

impl KeyView {
    pub fn new(key: u64) -> Self {
        let cls = line_classes_static();
        let mut e_img = [DivisorClass::ZERO; 7];
        let mut sum = DivisorClass::ZERO;
        for (i, e) in e_img.iter_mut().enumerate() {
            *e = cls[((key >> (8 * i)) & 0xff) as usize];
            sum = sum + *e;
        }
        let l_img = (sum - DivisorClass::canonical()).div_exact(3).expect("valid key");
        KeyView { e_img, l_img }
    }

    pub fn apply(&self, d: &DivisorClass) -> DivisorClass {
        let mut out = self.l_img.scale(d.0[0]);
        for i in 0..7 {
            if d.0[i + 1] != 0 {
                out = out + self.e_img[i].scale(d.0[i + 1]);
            }
        }
        out
    }

    pub fn image_of_line(&self, idx: usize) -> usize {
        let cls = line_classes_static();
        line_index_of(&self.apply(&cls[idx])).expect("isometry maps lines to lines")
    }
}

fn line_classes_static() -> &'static [DivisorClass; NUM_LINES] {
    use std::sync::OnceLock;
    static CLS: OnceLock<[DivisorClass; NUM_LINES]> = OnceLock::new();
    CLS.get_or_init(line_classes)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NamedGenerator {
    Perm([u8; 7]),
    Geiser,
    RootReflection(DivisorClass),
    A,
    B,
    C,
    R,
    S,
}

fn cycles_to_perm(cycles: &[&[u8]]) -> [u8; 7] {
    let mut p = [1, 2, 3, 4, 5, 6, 7];
    for cyc in cycles {
        for w in 0..cyc.len() {
            p[cyc[w] as usize - 1] = cyc[(w + 1) % cyc.len()];
        }
    }
    p
}

pub fn build(named: &NamedGenerator) -> Result<LatticeIsometry, WeylError> {
    use LineLabel::*;
    match named {
        NamedGenerator::Perm(p) => LatticeIsometry::permutation(*p),
        NamedGenerator::Geiser => Ok(LatticeIsometry::geiser()),
        NamedGenerator::RootReflection(r) => LatticeIsometry::reflection(r),
        NamedGenerator::A => LatticeIsometry::permutation(cycles_to_perm(&[&[1, 2, 3]])),
        NamedGenerator::B => LatticeIsometry::permutation(cycles_to_perm(&[&[4, 5, 6]])),
        NamedGenerator::C => {
            LatticeIsometry::permutation(cycles_to_perm(&[&[1, 4], &[2, 5], &[3, 6]]))
        }
        NamedGenerator::S => {
            let mut e = [DivisorClass::ZERO; 7];
            for i in 1..=6u8 {
                e[i as usize - 1] = Q(i, 7).class();
            }
            e[6] = E(7).class();
            let s = LatticeIsometry::from_e_images(e)?;
            for i in 1..=6u8 {
                for j in (i + 1)..=6 {
                    if s.apply_line(L(i, j).index()) != L(i, j).index() {
                        return Err(WeylError::NotIsometry(format!("s moves L{i}{j}")));
                    }
                }
                if s.apply_line(L(i, 7).index()) != C(i).index() {
                    return Err(WeylError::NotIsometry(format!("s(L{i}7) is not C{i}")));
                }
            }
            Ok(s)
        }
        NamedGenerator::R => {
            let mut e = [DivisorClass::ZERO; 7];
            for i in 1..=3u8 {
                e[i as usize - 1] = Q(i, 7).class();
            }
            for (i, j, k) in [(4u8, 5u8, 6u8), (5, 4, 6), (6, 4, 5)] {
                e[i as usize - 1] = L(j, k).class();
            }
            e[6] = E(7).class();
            let r = LatticeIsometry::from_e_images(e)?;
            let r2 = r.compose(&r);
            for (i, j, k) in [(1u8, 2u8, 3u8), (2, 1, 3), (3, 1, 2)] {
                if r2.apply_line(E(i).index()) != L(j, k).index() {
                    return Err(WeylError::NotIsometry(format!("r^2(E{i}) is not L{j}{k}")));
                }
            }
            for i in 4..=6u8 {
                if r2.apply_line(E(i).index()) != Q(i, 7).index() {
                    return Err(WeylError::NotIsometry(format!("r^2(E{i}) is not Q{i}7")));
                }
            }
            Ok(r)
        }
    }
}

/// Parse one factor of the generator language: `perm:(1 2 3)(4 5 6)`, `geiser`,
/// `refl:L-E1-E2-E3`, `named:a|b|c|r|s`.
pub fn parse_named(s: &str) -> Result<NamedGenerator, WeylError> {
    let t = s.trim();
    let bad = || WeylError::Parse(s.to_string());
    if t == "geiser" || t == "gamma" {
        return Ok(NamedGenerator::Geiser);
    }
    if let Some(rest) = t.strip_prefix("named:") {
        return match rest {
            "a" => Ok(NamedGenerator::A),
            "b" => Ok(NamedGenerator::B),
            "c" => Ok(NamedGenerator::C),
            "r" => Ok(NamedGenerator::R),
            "s" => Ok(NamedGenerator::S),
            "geiser" | "gamma" => Ok(NamedGenerator::Geiser),
            _ => Err(bad()),
        };
    }
    if let Some(rest) = t.strip_prefix("refl:") {
        return Ok(NamedGenerator::RootReflection(DivisorClass::parse(rest)?));
    }
    if let Some(rest) = t.strip_prefix("perm:") {
        let mut cycles: Vec<Vec<u8>> = Vec::new();
        let mut cur: Option<Vec<u8>> = None;
        for tok in rest.replace('(', " ( ").replace(')', " ) ").split_whitespace() {
            match tok {
                "(" => {
                    if cur.is_some() {
                        return Err(bad());
                    }
                    cur = Some(Vec::new())
                }
                ")" => cycles.push(cur.take().ok_or_else(bad)?),
                n => {
                    let v: u8 = n.parse().map_err(|_| bad())?;
                    if !(1..=7).contains(&v) {
                        return Err(bad());
                    }
                    cur.as_mut().ok_or_else(bad)?.push(v);
                }
            }
        }
        if cur.is_some() {
            return Err(bad());
        }
        let mut seen = HashSet::new();
        for c in &cycles {
            for v in c {
                if !seen.insert(*v) {
                    return Err(bad());
                }
            }
        }
        let refs: Vec<&[u8]> = cycles.iter().map(|c| c.as_slice()).collect();
        return Ok(NamedGenerator::Perm(cycles_to_perm(&refs)));
    }
    Err(bad())
}

/// A product like `named:c*named:s*geiser`, read left to right as composition.
pub fn parse_element(s: &str) -> Result<LatticeIsometry, WeylError> {
    let mut acc = LatticeIsometry::identity();
    for f in s.split('*') {
        acc = acc.compose(&build(&parse_named(f)?)?);
    }
    Ok(acc)
}

/// Comma-separated list of products.
pub fn parse_generators(s: &str) -> Result<Vec<LatticeIsometry>, WeylError> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',').map(parse_element).collect()
}

pub fn named(g: NamedGenerator) -> LatticeIsometry {
    build(&g).expect("named generators are valid")
}

/// Finite subgroup stored as element keys. Elements are rebuilt on demand, which keeps the
/// full 2.9M-element group within memory.
#[derive(Clone, Debug)]
pub struct SubgroupClosure {
    pub generators: Vec<LatticeIsometry>,
    keys: Vec<u64>,
    index: HashMap<u64, u32>,
}

impl SubgroupClosure {
    pub fn trivial() -> Self {
        Self::closure(&[], 1).expect("trivial group fits")
    }

    /// Breadth-first closure under left multiplication by the generators.
    pub fn closure(gens: &[LatticeIsometry], cap: usize) -> Result<Self, WeylError> {
        let id = LatticeIsometry::identity().key();
        let mut keys = vec![id];
        let mut index = HashMap::new();
        index.insert(id, 0u32);
        let mut head = 0;
        while head < keys.len() {
            let k = keys[head];
            head += 1;
            for g in gens {
                let mut nk = 0u64;
                for i in 0..7 {
                    let b = (k >> (8 * i)) & 0xff;
                    nk |= (g.perm[b as usize] as u64) << (8 * i);
                }
                if let std::collections::hash_map::Entry::Vacant(e) = index.entry(nk) {
                    if keys.len() >= cap {
                        return Err(WeylError::CapExceeded(cap));
                    }
                    e.insert(keys.len() as u32);
                    keys.push(nk);
                }
            }
        }
        Ok(SubgroupClosure { generators: gens.to_vec(), keys, index })
    }

    /// Wrap a list of elements already known to form a group; a small generating set is
    /// picked greedily.
    pub fn from_elements(elems: &[LatticeIsometry]) -> Self {
        let mut gens: Vec<LatticeIsometry> = Vec::new();
        let mut cur = SubgroupClosure::trivial();
        for e in elems {
            if !cur.contains(e) {
                gens.push(*e);
                cur = SubgroupClosure::closure(&gens, usize::MAX).expect("no cap");
            }
        }
        assert_eq!(cur.order(), elems.len(), "element list is not closed");
        cur
    }

    pub fn order(&self) -> usize {
        self.keys.len()
    }

    pub fn keys(&self) -> &[u64] {
        &self.keys
    }

    pub fn contains(&self, g: &LatticeIsometry) -> bool {
        self.index.contains_key(&g.key())
    }

    pub fn contains_key(&self, k: u64) -> bool {
        self.index.contains_key(&k)
    }

    pub fn element(&self, i: usize) -> LatticeIsometry {
        LatticeIsometry::from_key(self.keys[i])
    }

    pub fn elements(&self) -> impl Iterator<Item = LatticeIsometry> + '_ {
        self.keys.iter().map(|&k| LatticeIsometry::from_key(k))
    }

    /// Sorted key list; equal for equal subgroups.
    pub fn signature(&self) -> Vec<u64> {
        let mut v = self.keys.clone();
        v.sort_unstable();
        v
    }

    pub fn is_subgroup_of(&self, other: &SubgroupClosure) -> bool {
        self.keys.iter().all(|k| other.contains_key(*k))
    }

    pub fn join(&self, other: &SubgroupClosure) -> SubgroupClosure {
        let mut g = self.generators.clone();
        g.extend(other.generators.iter().copied());
        SubgroupClosure::closure(&g, usize::MAX).expect("no cap")
    }

    pub fn conjugate_by(&self, w: &LatticeIsometry) -> SubgroupClosure {
        let wi = w.inverse();
        let gens: Vec<_> = self.generators.iter().map(|g| w.compose(g).compose(&wi)).collect();
        SubgroupClosure::closure(&gens, usize::MAX).expect("no cap")
    }
}

/// Orbits of the group on the given lines, each sorted, listed by smallest member.
pub fn orbits(group: &SubgroupClosure, points: &[usize]) -> Vec<Vec<usize>> {
    orbits_under(&group.generators, points)
}

pub fn orbits_under(gens: &[LatticeIsometry], points: &[usize]) -> Vec<Vec<usize>> {
    let mut seen = [false; NUM_LINES];
    let mut out = Vec::new();
    let mut pts = points.to_vec();
    pts.sort_unstable();
    for &p in &pts {
        if seen[p] {
            continue;
        }
        let mut orb = vec![p];
        seen[p] = true;
        let mut q = VecDeque::from([p]);
        while let Some(x) = q.pop_front() {
            for g in gens {
                let y = g.perm[x] as usize;
                if !seen[y] {
                    seen[y] = true;
                    orb.push(y);
                    q.push_back(y);
                }
            }
        }
        orb.sort_unstable();
        out.push(orb);
    }
    out
}

/// Exact rank of an integer matrix by fraction-free (Bareiss) elimination.
pub fn integer_rank(rows: &[Vec<i64>]) -> usize {
    if rows.is_empty() {
        return 0;
    }
    let ncols = rows[0].len();
    let mut m: Vec<Vec<i128>> = rows.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let mut rank = 0;
    let mut prev: i128 = 1;
    for col in 0..ncols {
        let Some(p) = (rank..m.len()).find(|&r| m[r][col] != 0) else { continue };
        m.swap(rank, p);
        for r in (rank + 1)..m.len() {
            for c in (col + 1)..ncols {
                m[r][c] = (m[r][c] * m[rank][col] - m[r][col] * m[rank][c]) / prev;
            }
            m[r][col] = 0;
        }
        prev = m[rank][col];
        rank += 1;
        if rank == m.len() {
            break;
        }
    }
    rank
}

/// Integral basis of the rational kernel of the stacked rows.
pub fn kernel_basis(rows: &[Vec<i64>], ncols: usize) -> Vec<Vec<i64>> {
    let mut m: Vec<Vec<BigRational>> = rows
        .iter()
        .map(|r| r.iter().map(|&x| BigRational::from_integer(x.into())).collect())
        .collect();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..ncols {
        let Some(p) = (row..m.len()).find(|&r| !m[r][col].is_zero()) else { continue };
        m.swap(row, p);
        let inv = BigRational::one() / m[row][col].clone();
        for c in 0..ncols {
            m[row][c] = m[row][c].clone() * inv.clone();
        }
        for r in 0..m.len() {
            if r != row && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                for c in 0..ncols {
                    let v = m[row][c].clone() * f.clone();
                    m[r][c] = m[r][c].clone() - v;
                }
            }
        }
        pivots.push(col);
        row += 1;
        if row == m.len() {
            break;
        }
    }
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    let mut out = Vec::new();
    for &f in &free {
        let mut v = vec![BigRational::zero(); ncols];
        v[f] = BigRational::one();
        for (r, &pc) in pivots.iter().enumerate() {
            v[pc] = -m[r][f].clone();
        }
        let lcm = v.iter().fold(num_bigint::BigInt::one(), |acc, x| num_integer::Integer::lcm(&acc, x.denom()));
        let ints: Vec<i64> = v
            .iter()
            .map(|x| {
                let y = x.clone() * BigRational::from_integer(lcm.clone());
                i64::try_from(y.to_integer()).expect("small kernel entries")
            })
            .collect();
        out.push(ints);
    }
    out
}

fn fixed_space_rows(gens: &[LatticeIsometry]) -> Vec<Vec<i64>> {
    let mut rows = Vec::new();
    for g in gens {
        for i in 0..RANK {
            let mut r = g.matrix[i].to_vec();
            r[i] -= 1;
            rows.push(r);
        }
    }
    rows
}

/// Rank of the sublattice of Pic fixed by every generator.
pub fn invariant_rank_of(gens: &[LatticeIsometry]) -> usize {
    RANK - integer_rank(&fixed_space_rows(gens))
}

pub fn invariant_rank(group: &SubgroupClosure) -> usize {
    invariant_rank_of(&group.generators)
}

/// Same count restricted to K-perp, computed independently by adding the K-orthogonality row.
pub fn invariant_rank_k_perp(group: &SubgroupClosure) -> usize {
    let mut rows = fixed_space_rows(&group.generators);
    let k = DivisorClass::canonical();
    // v.K = v0*k0 - sum vi*ki
    let mut row = vec![k.0[0]];
    row.extend(k.0[1..].iter().map(|x| -x));
    rows.push(row);
    RANK - integer_rank(&rows)
}

/// Integral basis of the fixed space (a rational basis of Pic^H).
pub fn invariant_basis(group: &SubgroupClosure) -> Vec<DivisorClass> {
    kernel_basis(&fixed_space_rows(&group.generators), RANK)
        .into_iter()
        .map(|v| {
            let mut c = [0; RANK];
            c.copy_from_slice(&v);
            DivisorClass(c)
        })
        .collect()
}

/// Basis of the fixed vectors lying in K-perp.
pub fn invariant_basis_k_perp_of(gens: &[LatticeIsometry]) -> Vec<DivisorClass> {
    let mut rows = fixed_space_rows(gens);
    let k = DivisorClass::canonical();
    let mut row = vec![k.0[0]];
    row.extend(k.0[1..].iter().map(|x| -x));
    rows.push(row);
    kernel_basis(&rows, RANK)
        .into_iter()
        .map(|v| {
            let mut c = [0; RANK];
            c.copy_from_slice(&v);
            DivisorClass(c)
        })
        .collect()
}

/// Elements of `ambient` commuting with every generator of `g`.
pub fn centralizer(g: &SubgroupClosure, ambient: &SubgroupClosure) -> SubgroupClosure {
    let elems = centralizer_elements(&g.generators, ambient);
    SubgroupClosure::from_elements(&elems)
}

pub fn centralizer_elements(gens: &[LatticeIsometry], ambient: &SubgroupClosure) -> Vec<LatticeIsometry> {
    let cls = line_classes_static();
    let mut out = Vec::new();
    'outer: for &key in ambient.keys() {
        let v = KeyView::new(key);
        for k in gens {
            // h(k(E_i)) == k(h(E_i)) on all seven E's decides hk == kh.
            for i in 0..7 {
                let hk = line_index_of(&v.apply(&cls[k.perm[i] as usize])).expect("line");
                let kh = k.perm[((key >> (8 * i)) & 0xff) as usize] as usize;
                if hk != kh {
                    continue 'outer;
                }
            }
        }
        out.push(LatticeIsometry::from_key(key));
    }
    out
}

/// A witness w in `ambient` with w g w^-1 = h, found by scanning after cheap invariants agree.
pub fn conjugate_in(
    g: &LatticeIsometry,
    h: &LatticeIsometry,
    ambient: &SubgroupClosure,
) -> Option<LatticeIsometry> {
    if g.cycle_type() != h.cycle_type() || g.trace() != h.trace() {
        return None;
    }
    let cls = line_classes_static();
    'outer: for &key in ambient.keys() {
        let v = KeyView::new(key);
        for i in 0..7 {
            let wg = line_index_of(&v.apply(&cls[g.perm[i] as usize])).expect("line");
            let hw = h.perm[((key >> (8 * i)) & 0xff) as usize] as usize;
            if wg != hw {
                continue 'outer;
            }
        }
        return Some(LatticeIsometry::from_key(key));
    }
    None
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinModel {
    pub max_k2: i64,
    /// Orbits contracted in order; each is a set of pairwise disjoint lines.
    pub chain: Vec<Vec<usize>>,
}

impl MinModel {
    pub fn contracted_labels(&self) -> Vec<Vec<String>> {
        self.chain
            .iter()
            .map(|o| o.iter().map(|&i| LINE_LABELS[i].to_string()).collect())
            .collect()
    }
}

/// Exhaustive search over equivariant blow-downs: repeatedly contract an orbit of pairwise
/// disjoint lines orthogonal to everything contracted so far.
pub fn minimal_model_search(gal: &SubgroupClosure) -> MinModel {
    minimal_model_search_gens(&gal.generators)
}

pub fn minimal_model_search_gens(gens: &[LatticeIsometry]) -> MinModel {
    let cls = line_classes_static();
    let all: Vec<usize> = (0..NUM_LINES).collect();
    let orbs: Vec<(Vec<usize>, u64)> = orbits_under(gens, &all)
        .into_iter()
        .filter(|o| {
            o.iter().enumerate().all(|(a, &x)| o[a + 1..].iter().all(|&y| cls[x].dot(&cls[y]) == 0))
        })
        .map(|o| {
            let mask = o.iter().fold(0u64, |m, &i| m | (1 << i));
            (o, mask)
        })
        .collect();
    let mut meet = [0u64; NUM_LINES];
    for i in 0..NUM_LINES {
        for j in 0..NUM_LINES {
            if i != j && cls[i].dot(&cls[j]) != 0 {
                meet[i] |= 1 << j;
            }
        }
    }
    let mut best = MinModel { max_k2: 2, chain: Vec::new() };
    let mut visited = HashSet::new();
    let mut path = Vec::new();
    dfs(0, &orbs, &meet, &mut visited, &mut path, &mut best);
    best
}

fn dfs(
    state: u64,
    orbs: &[(Vec<usize>, u64)],
    meet: &[u64; NUM_LINES],
    visited: &mut HashSet<u64>,
    path: &mut Vec<usize>,
    best: &mut MinModel,
) {
    if !visited.insert(state) || best.max_k2 == 9 {
        return;
    }
    let k2 = 2 + state.count_ones() as i64;
    if k2 > best.max_k2 {
        best.max_k2 = k2;
        best.chain = path.iter().map(|&o| orbs[o].0.clone()).collect();
    }
    let blocked = (0..NUM_LINES).filter(|&i| state >> i & 1 == 1).fold(0u64, |m, i| m | meet[i]);
    for (oi, (_, mask)) in orbs.iter().enumerate() {
        if mask & state != 0 || mask & blocked != 0 {
            continue;
        }
        path.push(oi);
        dfs(state | mask, orbs, meet, visited, path, best);
        path.pop();
    }
}

/// Generators of W(E7): adjacent transpositions and the reflection in L-E1-E2-E3.
pub fn we7_generators() -> Vec<LatticeIsometry> {
    let mut g: Vec<LatticeIsometry> = (1..7u8)
        .map(|i| named(NamedGenerator::Perm(cycles_to_perm(&[&[i, i + 1]]))))
        .collect();
    g.push(named(NamedGenerator::RootReflection(LineLabel::L(1, 2).class() - DivisorClass::e(3))));
    g
}

pub fn full_weyl_group() -> SubgroupClosure {
    SubgroupClosure::closure(&we7_generators(), DEFAULT_CAP).expect("W(E7) fits in the default cap")
}

/// Shared instance; building it takes a few seconds.
pub fn full_weyl_group_cached() -> &'static SubgroupClosure {
    use std::sync::OnceLock;
    static W: OnceLock<SubgroupClosure> = OnceLock::new();
    W.get_or_init(full_weyl_group)
}

pub fn perm_from_cycles(cycles: &[&[u8]]) -> LatticeIsometry {
    named(NamedGenerator::Perm(cycles_to_perm(cycles)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use LineLabel::*;

    fn ab() -> LatticeIsometry {
        perm_from_cycles(&[&[1, 2, 3], &[4, 5, 6]])
    }

    #[test]
    fn geiser_shape() {
        let g = LatticeIsometry::geiser();
        assert!(g.fixed_lines().is_empty());
        assert_eq!(g.cycle_type(), vec![2; 28]);
        assert_eq!(g.apply_line(E(3).index()), C(3).index());
        assert_eq!(g.apply_line(L(2, 5).index()), Q(2, 5).index());
        assert_eq!(g.order(), 2);
    }

    #[test]
    fn reflection_formula() {
        let root = DivisorClass::parse("L-E1-E2-E3").unwrap();
        let r = LatticeIsometry::reflection(&root).unwrap();
        assert_eq!(r.apply(&DivisorClass::e(1)), DivisorClass::parse("L-E2-E3").unwrap());
        assert!(LatticeIsometry::reflection(&DivisorClass::parse("L-E1").unwrap()).is_err());
        assert!(LatticeIsometry::reflection(&DivisorClass::parse("E1-E2-E3").unwrap()).is_err());
    }

    #[test]
    fn r_and_s_images_of_l() {
        let r = named(NamedGenerator::R);
        let s = named(NamedGenerator::S);
        assert_eq!(r.apply(&DivisorClass::l()), DivisorClass::parse("4L-E1-E2-E3-2E4-2E5-2E6").unwrap());
        assert_eq!(s.apply(&DivisorClass::l()), DivisorClass::parse("5L-2E1-2E2-2E3-2E4-2E5-2E6").unwrap());
        assert_eq!(r.apply(&DivisorClass::l()).square(), 1);
        assert_eq!(r.order(), 3);
        assert_eq!(s.order(), 2);
    }

    #[test]
    fn identity_perm_is_identity() {
        assert!(named(NamedGenerator::Perm([1, 2, 3, 4, 5, 6, 7])).is_identity());
    }

    #[test]
    fn key_roundtrip_and_inverse() {
        for g in [named(NamedGenerator::R), named(NamedGenerator::S), ab(), LatticeIsometry::geiser()] {
            let back = LatticeIsometry::from_key(g.key());
            assert_eq!(back, g);
            assert_eq!(back.matrix, g.matrix);
            assert!(g.compose(&g.inverse()).is_identity());
        }
    }

    #[test]
    fn small_closures() {
        let s7: Vec<_> = (1..=7u8)
            .flat_map(|i| ((i + 1)..=7).map(move |j| (i, j)))
            .map(|(i, j)| perm_from_cycles(&[&[i, j]]))
            .collect();
        assert_eq!(SubgroupClosure::closure(&s7, DEFAULT_CAP).unwrap().order(), 5040);
        assert_eq!(SubgroupClosure::closure(&[ab()], 10).unwrap().order(), 3);
        assert!(matches!(SubgroupClosure::closure(&s7, 100), Err(WeylError::CapExceeded(100))));
    }

    #[test]
    fn invariant_ranks() {
        let r = named(NamedGenerator::R);
        let s = named(NamedGenerator::S);
        let gam = LatticeIsometry::geiser();
        let h = SubgroupClosure::closure(&[ab(), r], 1000).unwrap();
        assert_eq!(invariant_rank(&h), 2);
        let basis = invariant_basis(&h);
        // K and E7 both lie in the rational span of the fixed basis.
        for v in [DivisorClass::canonical(), DivisorClass::e(7)] {
            let mut rows: Vec<Vec<i64>> = basis.iter().map(|b| b.0.to_vec()).collect();
            let before = integer_rank(&rows);
            rows.push(v.0.to_vec());
            assert_eq!(integer_rank(&rows), before);
        }
        let sg = SubgroupClosure::closure(&[s.compose(&gam)], 10).unwrap();
        assert_eq!(invariant_rank(&sg), 2);
        assert_eq!(invariant_rank(&SubgroupClosure::trivial()), 8);
        assert_eq!(invariant_rank(&SubgroupClosure::closure(&[gam], 10).unwrap()), 1);
        for g in [&h, &sg] {
            assert_eq!(invariant_rank(g), 1 + invariant_rank_k_perp(g));
        }
    }

    #[test]
    fn orbit_shapes() {
        let all: Vec<usize> = (0..NUM_LINES).collect();
        let g = SubgroupClosure::closure(&[LatticeIsometry::geiser()], 10).unwrap();
        assert_eq!(orbits(&g, &all).len(), 28);
        let t = SubgroupClosure::trivial();
        assert_eq!(orbits(&t, &all).len(), 56);
        let a = SubgroupClosure::closure(&[ab()], 10).unwrap();
        let singles: Vec<_> = orbits(&a, &all).into_iter().filter(|o| o.len() == 1).collect();
        assert_eq!(singles, vec![vec![E(7).index()], vec![C(7).index()]]);
        assert_eq!(ab().fixed_lines(), vec![E(7).index(), C(7).index()]);
    }

    #[test]
    fn min_model_small_cases() {
        assert_eq!(minimal_model_search(&SubgroupClosure::trivial()).max_k2, 9);
        let sg = named(NamedGenerator::S).compose(&LatticeIsometry::geiser());
        assert_eq!(minimal_model_search_gens(&[sg]).max_k2, 2);
        let gens = [
            named(NamedGenerator::R),
            named(NamedGenerator::C).compose(&LatticeIsometry::geiser()),
            named(NamedGenerator::S),
        ];
        let m = minimal_model_search_gens(&gens);
        assert!(m.max_k2 >= 6, "{m:?}");
        // The quoted quadruple is an invariant set of disjoint lines.
        let quad: Vec<usize> = [L(1, 5), Q(2, 4), L(1, 6), Q(3, 4)].iter().map(|l| l.index()).collect();
        for g in &gens {
            let mut img: Vec<usize> = quad.iter().map(|&i| g.apply_line(i)).collect();
            img.sort_unstable();
            let mut q = quad.clone();
            q.sort_unstable();
            assert_eq!(img, q);
        }
        let cls = line_classes();
        for &a in &quad {
            for &b in &quad {
                if a != b {
                    assert_eq!(cls[a].dot(&cls[b]), 0);
                }
            }
        }
    }

    #[test]
    fn dsl_parses() {
        let g = parse_element("perm:(1 2 3)(4 5 6)").unwrap();
        assert_eq!(g, ab());
        let cs = parse_element("named:c*named:s").unwrap();
        assert_eq!(cs, named(NamedGenerator::C).compose(&named(NamedGenerator::S)));
        assert_eq!(parse_generators("geiser, refl:L-E1-E2-E3").unwrap().len(), 2);
        assert!(parse_element("perm:(1 1)").is_err());
        assert!(parse_element("named:z").is_err());
    }
}

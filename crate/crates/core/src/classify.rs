//! Decision procedures: which automorphism groups can give a non-rational quotient, the
//! involution certificate for non-rationality of X itself, and the lattice search for Galois
//! images that make a surface with a type-4 C3 action rational.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use crate::piclattice::DivisorClass;
use crate::weyl::{
    invariant_basis_k_perp_of, invariant_rank_of, minimal_model_search_gens, named, LatticeIsometry, NamedGenerator,
    SubgroupClosure,
};

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum ClassifyError {
    #[error("element of order {order} does not fit in group {group}")]
    Inconsistent { group: String, order: u32 },
    #[error("cannot parse `{0}`")]
    Parse(String),
    #[error("element is not an involution (order {0})")]
    NotInvolution(u32),
    #[error("combined invariant rank is {0}, expected 1")]
    RankPrecondition(usize),
    #[error("Galois-fixed part of K-perp is not fixed by g times the Geiser involution")]
    InclusionFails,
    #[error("eigenspace dimensions {0} + {1} on K-perp do not add up to 7")]
    Eigenspaces(usize, usize),
    #[error("candidate does not centralize the C3 subgroup")]
    NotInCentralizer,
    #[error("invalid root orbit pattern {0:?}")]
    Partition(Vec<usize>),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum AbstractType {
    Trivial,
    C2,
    C3,
    C4,
    C2xC2,
    S3,
    D8,
    Q8,
    Other(String),
}

impl AbstractType {
    /// Orders of non-trivial elements, or None when unknown.
    fn element_orders(&self) -> Option<&'static [u32]> {
        Some(match self {
            AbstractType::Trivial => &[],
            AbstractType::C2 | AbstractType::C2xC2 => &[2],
            AbstractType::C3 => &[3],
            AbstractType::C4 | AbstractType::D8 | AbstractType::Q8 => &[2, 4],
            AbstractType::S3 => &[2, 3],
            AbstractType::Other(_) => return None,
        })
    }

    pub fn order(&self) -> Option<u32> {
        match self {
            AbstractType::Trivial => Some(1),
            AbstractType::C2 => Some(2),
            AbstractType::C3 => Some(3),
            AbstractType::C4 | AbstractType::C2xC2 => Some(4),
            AbstractType::S3 => Some(6),
            AbstractType::D8 | AbstractType::Q8 => Some(8),
            AbstractType::Other(name) => match name.to_ascii_uppercase().as_str() {
                "C7" => Some(7),
                "PSL2F7" | "PSL2(F7)" => Some(168),
                _ => None,
            },
        }
    }
}

impl FromStr for AbstractType {
    type Err = ClassifyError;
    fn from_str(s: &str) -> Result<Self, ClassifyError> {
        Ok(match s.trim().to_ascii_uppercase().as_str() {
            "TRIVIAL" | "1" => AbstractType::Trivial,
            "C2" => AbstractType::C2,
            "C3" => AbstractType::C3,
            "C4" => AbstractType::C4,
            "C2XC2" | "V4" | "C2^2" => AbstractType::C2xC2,
            "S3" => AbstractType::S3,
            "D8" => AbstractType::D8,
            "Q8" => AbstractType::Q8,
            "" => return Err(ClassifyError::Parse(s.to_string())),
            _ => AbstractType::Other(s.trim().to_string()),
        })
    }
}

impl fmt::Display for AbstractType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AbstractType::C2xC2 => f.write_str("C2xC2"),
            AbstractType::Other(n) => f.write_str(n),
            t => write!(f, "{t:?}"),
        }
    }
}

/// Geometric label of a group element: the prime-order types 0..5 (0 is the Geiser
/// involution), or one of the two order-4 actions (ix:-iy:z:t) and (ix:-iy:z:-t).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum ElementLabel {
    Type(u8),
    Order4Plus,
    Order4Minus,
}

impl ElementLabel {
    pub fn order(&self) -> u32 {
        match self {
            ElementLabel::Type(0..=2) => 2,
            ElementLabel::Type(3 | 4) => 3,
            ElementLabel::Type(_) => 7,
            ElementLabel::Order4Plus | ElementLabel::Order4Minus => 4,
        }
    }
}

impl FromStr for ElementLabel {
    type Err = ClassifyError;
    fn from_str(s: &str) -> Result<Self, ClassifyError> {
        let t = s.trim();
        match t {
            "4+" | "(ix:-iy:z:t)" | "plus" => Ok(ElementLabel::Order4Plus),
            "4-" | "(ix:-iy:z:-t)" | "minus" => Ok(ElementLabel::Order4Minus),
            _ => match t.parse::<u8>() {
                Ok(k) if k <= 5 => Ok(ElementLabel::Type(k)),
                _ => Err(ClassifyError::Parse(s.to_string())),
            },
        }
    }
}

impl fmt::Display for ElementLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ElementLabel::Type(k) => write!(f, "{k}"),
            ElementLabel::Order4Plus => f.write_str("4+"),
            ElementLabel::Order4Minus => f.write_str("4-"),
        }
    }
}

/// Group with the labels of a generating set.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct GroupDescriptor {
    pub abstract_type: AbstractType,
    pub element_types: Vec<ElementLabel>,
    pub contains_geiser: bool,
}

impl GroupDescriptor {
    pub fn new(abstract_type: AbstractType, element_types: Vec<ElementLabel>) -> Self {
        let contains_geiser = element_types.contains(&ElementLabel::Type(0));
        GroupDescriptor { abstract_type, element_types, contains_geiser }
    }

    pub fn validate(&self) -> Result<(), ClassifyError> {
        let bad = |o| ClassifyError::Inconsistent { group: self.abstract_type.to_string(), order: o };
        if let Some(orders) = self.abstract_type.element_orders() {
            for l in &self.element_types {
                if !orders.contains(&l.order()) {
                    return Err(bad(l.order()));
                }
            }
            // Q8 has a single involution, which cannot help generate.
            if self.abstract_type == AbstractType::Q8 && self.element_types.iter().any(|l| l.order() == 2) {
                return Err(bad(2));
            }
        }
        Ok(())
    }

    fn all_labels(&self, l: ElementLabel) -> bool {
        !self.element_types.is_empty() && self.element_types.iter().all(|x| *x == l)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "caseIndex")]
pub enum VerdictKind {
    AlwaysRational,
    PotentiallyNonRational(u8),
    NonRationalCertified,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verdict {
    #[serde(flatten)]
    pub kind: VerdictKind,
    pub citations: Vec<String>,
}

impl Verdict {
    fn new(kind: VerdictKind, cites: &[&str]) -> Self {
        Verdict { kind, citations: cites.iter().map(|s| s.to_string()).collect() }
    }
}

/// The eleven groups that may leave a non-rational quotient, in their fixed order.
pub const CASES: [&str; 11] = [
    "trivial",
    "C2 of type 1",
    "C2 of type 2",
    "C3 of type 4",
    "C4 acting as (ix:-iy:z:t)",
    "C4 acting as (ix:-iy:z:-t)",
    "C2xC2 of type 2",
    "S3 generated by type 2",
    "D8 generated by type 2",
    "Q8 of (ix:-iy:z:t)",
    "Q8 of (ix:-iy:z:-t)",
];

pub fn proposition_dp2(g: &GroupDescriptor) -> Result<Verdict, ClassifyError> {
    use AbstractType as A;
    use ElementLabel::*;
    g.validate()?;
    if g.contains_geiser {
        return Ok(Verdict::new(VerdictKind::AlwaysRational, &["geiser: quotient dominated by the plane"]));
    }
    let t = &g.abstract_type;
    let case = match t {
        A::Trivial => Some(1),
        A::C2 if g.all_labels(Type(1)) => Some(2),
        A::C2 if g.all_labels(Type(2)) => Some(3),
        A::C3 if g.all_labels(Type(4)) => Some(4),
        A::C4 if g.all_labels(Order4Plus) => Some(5),
        A::C4 if g.all_labels(Order4Minus) => Some(6),
        A::C2xC2 if g.all_labels(Type(2)) => Some(7),
        A::S3 if g.all_labels(Type(2)) => Some(8),
        A::D8 if g.all_labels(Type(2)) => Some(9),
        A::Q8 if g.all_labels(Order4Plus) => Some(10),
        A::Q8 if g.all_labels(Order4Minus) => Some(11),
        _ => None,
    };
    if let Some(i) = case {
        return Ok(Verdict::new(VerdictKind::PotentiallyNonRational(i), &[CASES[i as usize - 1]]));
    }
    let has = |l: ElementLabel| g.element_types.contains(&l);
    let cite: &str = if matches!(t, A::Other(n) if n.eq_ignore_ascii_case("PSL2F7") || n.eq_ignore_ascii_case("PSL2(F7)")) {
        "PSL2(F7): resolved quotient has K^2 = 5"
    } else if has(Type(5)) {
        "normal C7 of type 5: blow-down to K^2 = 8"
    } else if has(Type(3)) {
        "normal C3 of type 3: quotient with one A2 point and K^2 = 6"
    } else if *t == A::S3 && g.all_labels(Type(1)) {
        "S3 generated by type 1: K^2 >= 5"
    } else if *t == A::C2xC2 && g.all_labels(Type(1)) {
        "C2xC2 of type 1: smooth quotient with K^2 = 8"
    } else if t.order().is_some_and(|n| n.is_power_of_two()) {
        "unlisted 2-group: K^2 >= 5"
    } else {
        "unlisted group of order 2^k 3^n: K^2 >= 5"
    };
    Ok(Verdict::new(VerdictKind::AlwaysRational, &[cite]))
}

/// Every descriptor built from the labels, one or two generators, over the named groups.
pub fn enumerate_descriptors() -> Vec<GroupDescriptor> {
    use AbstractType as A;
    let labels: Vec<ElementLabel> = (0..=5)
        .map(ElementLabel::Type)
        .chain([ElementLabel::Order4Plus, ElementLabel::Order4Minus])
        .collect();
    let types = [A::Trivial, A::C2, A::C3, A::C4, A::C2xC2, A::S3, A::D8, A::Q8, A::Other("C7".into()), A::Other("PSL2F7".into())];
    let mut out = Vec::new();
    for t in types {
        let gens = match t {
            A::Trivial => 0,
            A::C2 | A::C3 | A::C4 | A::Other(_) => 1,
            _ => 2,
        };
        if gens == 0 {
            out.push(GroupDescriptor::new(t.clone(), vec![]));
            continue;
        }
        for a in &labels {
            if gens == 1 {
                let d = GroupDescriptor::new(t.clone(), vec![*a]);
                if d.validate().is_ok() {
                    out.push(d);
                }
                continue;
            }
            for b in labels.iter().filter(|b| *b >= a) {
                let d = GroupDescriptor::new(t.clone(), vec![*a, *b]);
                if d.validate().is_ok() {
                    out.push(d);
                }
            }
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Type2Certificate {
    pub dim_fixed_g: usize,
    pub dim_fixed_g_geiser: usize,
    pub galois_fixed_dim: usize,
    pub verdict: Verdict,
}

/// Non-rationality of X from an involution g commuting with Galois, with ρ^{<g>×Γ} = 1:
/// the Galois-fixed part of K-perp must sit inside the fixed space of g·γ, whose fixed
/// locus is then an elliptic hyperplane section.
pub fn type2_nonrationality_certificate(g: &LatticeIsometry, gal: &SubgroupClosure) -> Result<Type2Certificate, ClassifyError> {
    let ord = g.order();
    if ord != 2 {
        return Err(ClassifyError::NotInvolution(ord));
    }
    let mut all = gal.generators.clone();
    all.push(*g);
    let rank = invariant_rank_of(&all);
    if rank != 1 {
        return Err(ClassifyError::RankPrecondition(rank));
    }
    let gg = g.compose(&LatticeIsometry::geiser());
    let d1 = invariant_basis_k_perp_of(&[*g]).len();
    let d2 = invariant_basis_k_perp_of(&[gg]).len();
    if d1 + d2 != 7 {
        return Err(ClassifyError::Eigenspaces(d1, d2));
    }
    let vg = invariant_basis_k_perp_of(&gal.generators);
    if !vg.iter().all(|v| gg.apply(v) == *v) {
        return Err(ClassifyError::InclusionFails);
    }
    Ok(Type2Certificate {
        dim_fixed_g: d1,
        dim_fixed_g_geiser: d2,
        galois_fixed_dim: vg.len(),
        verdict: Verdict::new(VerdictKind::NonRationalCertified, &["involution whose Geiser twist fixes an elliptic section"]),
    })
}

/// Dimension of the fixed space of an involution on K-perp and of its Geiser twist.
pub fn involution_pairing(g: &LatticeIsometry) -> (usize, usize) {
    let gg = g.compose(&LatticeIsometry::geiser());
    (invariant_basis_k_perp_of(&[*g]).len(), invariant_basis_k_perp_of(&[gg]).len())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Type2Model {
    PicardRankOne,
    MinimalConicBundle,
    MinimalCubic,
    MinimalDp4RankOne,
    MinimalDp4WithConicBundle,
}

impl fmt::Display for Type2Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Type2Model::PicardRankOne => "rho(Y) = 1",
            Type2Model::MinimalConicBundle => "rho(Y) = 2, minimal conic bundle",
            Type2Model::MinimalCubic => "minimal cubic surface",
            Type2Model::MinimalDp4RankOne => "minimal del Pezzo surface of degree 4, rho = 1",
            Type2Model::MinimalDp4WithConicBundle => "minimal del Pezzo surface of degree 4 with a minimal conic bundle structure",
        })
    }
}

/// Minimal model of the degree-2 quotient for a given Galois orbit pattern on the four roots
/// of the binary quartic. Orbits of size one are the rational roots.
pub fn remark_type2_models(orbit_sizes: &[usize]) -> Result<Type2Model, ClassifyError> {
    let mut p = orbit_sizes.to_vec();
    p.sort_unstable();
    Ok(match p.as_slice() {
        [4] => Type2Model::PicardRankOne,
        [2, 2] => Type2Model::MinimalConicBundle,
        [1, 3] => Type2Model::MinimalCubic,
        [1, 1, 2] => Type2Model::MinimalDp4RankOne,
        [1, 1, 1, 1] => Type2Model::MinimalDp4WithConicBundle,
        _ => return Err(ClassifyError::Partition(orbit_sizes.to_vec())),
    })
}

/// The C3 subgroup generated by (123)(456).
pub fn ab() -> LatticeIsometry {
    named(NamedGenerator::A).compose(&named(NamedGenerator::B))
}

/// Galois image Γ makes X rational, given a G-minimal type-4 action ⟨ab⟩: ⟨ab⟩∪Γ has
/// invariant rank 1 and Γ alone allows a blow-down to K² ≥ 5.
pub fn gamma_classification_for_type4(candidate: &SubgroupClosure) -> Result<bool, ClassifyError> {
    let g = ab();
    if !candidate.generators.iter().all(|c| c.commutes_with(&g)) {
        return Err(ClassifyError::NotInCentralizer);
    }
    Ok(gamma_conditions(&candidate.generators))
}

fn gamma_conditions(gens: &[LatticeIsometry]) -> bool {
    let mut all = gens.to_vec();
    all.push(ab());
    invariant_rank_of(&all) == 1 && minimal_model_search_gens(gens).max_k2 >= 5
}

/// Multiplication table of a small group, for subgroup enumeration.
pub struct GroupTable {
    pub elems: Vec<LatticeIsometry>,
    mul: Vec<Vec<u16>>,
    inv: Vec<u16>,
    words: usize,
}

pub type Bits = Vec<u64>;

impl GroupTable {
    pub fn new(group: &SubgroupClosure) -> Self {
        let elems: Vec<LatticeIsometry> = group.elements().collect();
        let pos: HashMap<u64, u16> = elems.iter().enumerate().map(|(i, e)| (e.key(), i as u16)).collect();
        let mul = elems
            .iter()
            .map(|a| elems.iter().map(|b| pos[&a.compose(b).key()]).collect())
            .collect();
        let inv = elems.iter().map(|a| pos[&a.inverse().key()]).collect();
        let words = elems.len().div_ceil(64);
        GroupTable { elems, mul, inv, words }
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    fn close(&self, gens: &[u16]) -> Bits {
        let mut bits = vec![0u64; self.words];
        let mut list = vec![0u16]; // identity is element 0 of any closure
        bits[0] |= 1;
        let mut head = 0;
        while head < list.len() {
            let x = list[head];
            head += 1;
            for &g in gens {
                let y = self.mul[g as usize][x as usize];
                if bits[y as usize / 64] >> (y % 64) & 1 == 0 {
                    bits[y as usize / 64] |= 1 << (y % 64);
                    list.push(y);
                }
            }
        }
        bits
    }

    /// All subgroups, each with a generating set, by repeated cyclic extension.
    pub fn subgroups(&self) -> Vec<(Bits, Vec<u16>)> {
        let mut seen: HashSet<Bits> = HashSet::new();
        let triv = self.close(&[]);
        seen.insert(triv.clone());
        let mut out = vec![(triv, Vec::new())];
        let mut head = 0;
        while head < out.len() {
            let (h, gens) = out[head].clone();
            head += 1;
            for x in 0..self.len() as u16 {
                if h[x as usize / 64] >> (x % 64) & 1 == 1 {
                    continue;
                }
                let mut g2 = gens.clone();
                g2.push(x);
                let k = self.close(&g2);
                if seen.insert(k.clone()) {
                    out.push((k, g2));
                }
            }
        }
        out
    }

    fn conjugate(&self, h: &Bits, c: u16) -> Bits {
        let ci = self.inv[c as usize] as usize;
        let mut out = vec![0u64; self.words];
        for x in 0..self.len() {
            if h[x / 64] >> (x % 64) & 1 == 1 {
                let y = self.mul[self.mul[c as usize][x] as usize][ci];
                out[y as usize / 64] |= 1 << (y % 64);
            }
        }
        out
    }

    /// Canonical form of a subgroup up to conjugation by the listed elements (which must
    /// form a group acting on this one by conjugation).
    fn canonical(&self, h: &Bits, by: &[u16]) -> Bits {
        by.iter().map(|&c| self.conjugate(h, c)).min().expect("non-empty conjugator set")
    }

    pub fn index_of(&self, g: &LatticeIsometry) -> Option<u16> {
        self.elems.iter().position(|x| x == g).map(|i| i as u16)
    }

    /// Subgroup generated by the given elements, all of which must lie in the table.
    pub fn subgroup(&self, gens: &[LatticeIsometry]) -> Option<Bits> {
        let idx: Option<Vec<u16>> = gens.iter().map(|g| self.index_of(g)).collect();
        Some(self.close(&idx?))
    }

    /// Key equal for subgroups conjugate inside this group.
    pub fn conjugacy_key(&self, h: &Bits) -> Bits {
        let all: Vec<u16> = (0..self.len() as u16).collect();
        self.canonical(h, &all)
    }

    pub fn members(&self, h: &Bits) -> Vec<LatticeIsometry> {
        (0..self.len()).filter(|&x| h[x / 64] >> (x % 64) & 1 == 1).map(|x| self.elems[x]).collect()
    }

    pub fn gens_of(&self, idx: &[u16]) -> Vec<LatticeIsometry> {
        idx.iter().map(|&i| self.elems[i as usize]).collect()
    }
}

fn bits_count(b: &Bits) -> usize {
    b.iter().map(|w| w.count_ones() as usize).sum()
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct GammaClass {
    pub order: usize,
    pub size: usize,
    pub representative: Vec<String>,
    pub max_k2: i64,
    pub matches: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct GammaScan {
    pub centralizer_order: usize,
    pub subgroup_count: usize,
    pub passing_subgroups: usize,
    pub conjugated_by: String,
    pub classes: Vec<GammaClass>,
}

/// The three Galois images expected to pass, by name.
pub fn expected_gammas() -> Vec<(&'static str, Vec<LatticeIsometry>)> {
    let r = named(NamedGenerator::R);
    let c = named(NamedGenerator::C);
    let s = named(NamedGenerator::S);
    let gm = LatticeIsometry::geiser();
    vec![
        ("<r, cs*gamma>", vec![r, c.compose(&s).compose(&gm)]),
        ("<r, c*gamma>", vec![r, c.compose(&gm)]),
        ("<r, c*gamma, s>", vec![r, c.compose(&gm), s]),
    ]
}

/// Centralizer of ⟨ab⟩ inside the full Weyl group.
pub fn ab_centralizer() -> SubgroupClosure {
    let w = crate::weyl::full_weyl_group_cached();
    let g = SubgroupClosure::closure(&[ab()], 3).expect("order 3");
    crate::weyl::centralizer(&g, w)
}

/// Exhaustive scan over subgroups of the centralizer of ⟨ab⟩, grouped by conjugacy under the
/// centralizer, and under the normalizer of ⟨ab⟩ if the finer grouping does not give three.
pub fn gamma_scan() -> GammaScan {
    let cent = ab_centralizer();
    let table = GroupTable::new(&cent);
    let subs = table.subgroups();
    let passing: Vec<&(Bits, Vec<u16>)> = subs.iter().filter(|(_, g)| gamma_conditions(&table.gens_of(g))).collect();
    let all: Vec<u16> = (0..table.len() as u16).collect();
    let mut classes = group_classes(&table, &passing, |h| table.canonical(h, &all));
    let mut by = "centralizer".to_string();
    if classes.len() != 3 {
        // Conjugation by the normalizer of <ab> preserves the centralizer.
        let norm = ab_normalizer_action(&table);
        classes = group_classes(&table, &passing, |h| norm.iter().map(|p| permute_bits(h, p, table.words)).min().unwrap());
        by = "normalizer".to_string();
    }
    let expected: Vec<(&str, Bits)> = expected_gammas()
        .into_iter()
        .map(|(n, g)| {
            let idx: Vec<u16> = g.iter().map(|e| table.elems.iter().position(|x| x == e).expect("in centralizer") as u16).collect();
            (n, table.close(&idx))
        })
        .collect();
    let out = classes
        .into_iter()
        .map(|members| {
            let (bits, gens) = members[0];
            let matches = expected
                .iter()
                .find(|(_, e)| members.iter().any(|(m, _)| m == e))
                .map(|(n, _)| n.to_string());
            let g = table.gens_of(gens);
            GammaClass {
                order: bits_count(bits),
                size: members.len(),
                representative: g.iter().map(|x| format!("{:016x}", x.key())).collect(),
                max_k2: minimal_model_search_gens(&g).max_k2,
                matches,
            }
        })
        .collect();
    GammaScan {
        centralizer_order: table.len(),
        subgroup_count: subs.len(),
        passing_subgroups: passing.len(),
        conjugated_by: by,
        classes: out,
    }
}

fn group_classes<'a, F: Fn(&Bits) -> Bits>(_table: &GroupTable, subs: &[&'a (Bits, Vec<u16>)], canon: F) -> Vec<Vec<&'a (Bits, Vec<u16>)>> {
    let mut map: BTreeMap<Bits, Vec<&'a (Bits, Vec<u16>)>> = BTreeMap::new();
    for s in subs {
        map.entry(canon(&s.0)).or_default().push(s);
    }
    let mut v: Vec<_> = map.into_values().collect();
    v.sort_by_key(|m| (bits_count(&m[0].0), m.len()));
    v
}

fn permute_bits(h: &Bits, p: &[u16], words: usize) -> Bits {
    let mut out = vec![0u64; words];
    for (x, &y) in p.iter().enumerate() {
        if h[x / 64] >> (x % 64) & 1 == 1 {
            out[y as usize / 64] |= 1 << (y % 64);
        }
    }
    out
}

/// Conjugation action on the centralizer's elements of every w in W(E7) normalizing ⟨ab⟩,
/// deduplicated.
fn ab_normalizer_action(table: &GroupTable) -> Vec<Vec<u16>> {
    let w = crate::weyl::full_weyl_group_cached();
    let g = ab();
    let g2 = g.compose(&g);
    let pos: HashMap<u64, u16> = table.elems.iter().enumerate().map(|(i, e)| (e.key(), i as u16)).collect();
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for x in w.elements() {
        let c = x.compose(&g).compose(&x.inverse());
        if c != g && c != g2 {
            continue;
        }
        let xi = x.inverse();
        let p: Vec<u16> = table.elems.iter().map(|e| pos[&x.compose(e).compose(&xi).key()]).collect();
        if seen.insert(p.clone()) {
            out.push(p);
        }
    }
    out
}

/// Fixed vectors of Γ in K-perp, for reporting.
pub fn galois_fixed_k_perp(gal: &SubgroupClosure) -> Vec<DivisorClass> {
    invariant_basis_k_perp_of(&gal.generators)
}

/// Automorphism type read off the lattice action: order plus trace on Pic, which is
/// 2 + (Euler characteristic of the fixed locus) minus 2 by Lefschetz.
pub fn element_label(g: &LatticeIsometry) -> Option<ElementLabel> {
    use ElementLabel::*;
    Some(match (g.order(), g.trace()) {
        (2, -6) => Type(0),
        (2, 0) => Type(1),
        (2, 2) => Type(2),
        (3, -1) => Type(3),
        (3, 2) => Type(4),
        (7, 1) => Type(5),
        (4, 0) => Order4Plus,
        (4, 2) => Order4Minus,
        _ => return None,
    })
}

/// Descriptor of a concrete group. When the elements of a single label generate the
/// group, that label is reported; otherwise every label present is listed.
pub fn describe_group(group: &SubgroupClosure) -> GroupDescriptor {
    use AbstractType as A;
    let elems: Vec<LatticeIsometry> = group.elements().filter(|g| !g.is_identity()).collect();
    let count = |o: u32| elems.iter().filter(|g| g.order() == o).count();
    let abelian = elems.iter().all(|x| elems.iter().all(|y| x.commutes_with(y)));
    let t = match group.order() {
        1 => A::Trivial,
        2 => A::C2,
        3 => A::C3,
        4 if count(4) > 0 => A::C4,
        4 => A::C2xC2,
        6 if !abelian => A::S3,
        8 if !abelian && count(2) == 5 => A::D8,
        8 if !abelian && count(2) == 1 => A::Q8,
        n => A::Other(format!("order {n}")),
    };
    let labels: Vec<Option<ElementLabel>> = elems.iter().map(element_label).collect();
    let mut present: Vec<ElementLabel> = labels.iter().flatten().copied().collect();
    present.sort();
    present.dedup();
    let ngens = match t {
        A::Trivial => 0,
        A::C2 | A::C3 | A::C4 => 1,
        _ => 2,
    };
    let mut element_types = present.clone();
    for l in &present {
        let of_l: Vec<LatticeIsometry> = elems.iter().zip(&labels).filter(|(_, x)| **x == Some(*l)).map(|(g, _)| *g).collect();
        if SubgroupClosure::closure(&of_l, group.order()).map(|h| h.order()) == Ok(group.order()) {
            element_types = vec![*l; ngens];
            break;
        }
    }
    let mut d = GroupDescriptor::new(t, element_types);
    d.contains_geiser = labels.contains(&Some(ElementLabel::Type(0)));
    d
}

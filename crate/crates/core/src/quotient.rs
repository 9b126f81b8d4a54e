//! K² bookkeeping for quotients of a degree-2 del Pezzo surface: Hurwitz step, cyclic
//! quotient singularity corrections, and contraction of (-1)-curves.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::numberfield::{fmt_rational, rat};

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum QuotientError {
    #[error("unknown scenario `{0}`")]
    UnknownScenario(String),
    #[error("group order must be positive")]
    EmptyGroup,
    #[error("inertia order {e} does not divide group order {order}")]
    Inertia { e: u64, order: u64 },
    #[error("ledger replay gave {replayed}, stored {stored}")]
    Replay { replayed: String, stored: String },
}

pub(crate) fn ser_q<S: Serializer>(q: &BigRational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&fmt_rational(q))
}

/// Cyclic quotient singularity 1/m(1,q) with its resolution numerics.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SingularityType {
    pub m: u32,
    pub q: u32,
    #[serde(serialize_with = "ser_q")]
    pub delta_k2: BigRational,
    #[serde(rename = "deltaC2", serialize_with = "ser_q")]
    pub delta_c2: BigRational,
    #[serde(rename = "deltaD2", serialize_with = "ser_q")]
    pub delta_d2: BigRational,
    pub chain: Vec<i32>,
}

impl SingularityType {
    /// A_{n-1} = 1/n(1, n-1).
    pub fn a(n: u32) -> Self {
        assert!(n >= 2);
        let d = -rat(n as i64 - 1, n as i64);
        SingularityType {
            m: n,
            q: n - 1,
            delta_k2: BigRational::zero(),
            delta_c2: d.clone(),
            delta_d2: d,
            chain: vec![-2; n as usize - 1],
        }
    }

    /// 1/3(1,1).
    pub fn third() -> Self {
        SingularityType {
            m: 3,
            q: 1,
            delta_k2: rat(-1, 3),
            delta_c2: rat(-1, 3),
            delta_d2: rat(-1, 3),
            chain: vec![-3],
        }
    }

    /// 1/7(1,3).
    pub fn seventh() -> Self {
        SingularityType {
            m: 7,
            q: 3,
            delta_k2: rat(-3, 7),
            delta_c2: rat(-3, 7),
            delta_d2: rat(-5, 7),
            chain: vec![-3, -2, -2],
        }
    }

    /// Only the three families that occur are catalogued.
    pub fn lookup(m: u32, q: u32) -> Option<Self> {
        match (m, q) {
            (m, q) if m >= 2 && q == m - 1 => Some(Self::a(m)),
            (3, 1) => Some(Self::third()),
            (7, 3) => Some(Self::seventh()),
            _ => None,
        }
    }

    pub fn catalog() -> Vec<Self> {
        vec![Self::a(2), Self::a(3), Self::third(), Self::seventh()]
    }

    pub fn is_du_val(&self) -> bool {
        self.q + 1 == self.m
    }
}

impl fmt::Display for SingularityType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_du_val() {
            write!(f, "A{}", self.m - 1)
        } else {
            write!(f, "1/{}(1,{})", self.m, self.q)
        }
    }
}

/// Pointwise fixed curve of class n·(-K) with pointwise stabilizer of order e.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct RamificationCurve {
    pub anticanonical_multiple: i64,
    pub inertia_order: u64,
}

impl RamificationCurve {
    pub fn anticanonical(e: u64) -> Self {
        RamificationCurve { anticanonical_multiple: 1, inertia_order: e }
    }
}

/// K² of X/G from K_X = f^*K_{X/G} + R, R = Σ(e-1)C. All curves are multiples of -K, so
/// f^*K_{X/G} = (1 + Σ(e-1)n)K_X.
pub fn hurwitz_k2(group_order: u64, kx2: &BigRational, ram: &[RamificationCurve]) -> Result<BigRational, QuotientError> {
    if group_order == 0 {
        return Err(QuotientError::EmptyGroup);
    }
    let mut mult = BigInt::one();
    for c in ram {
        if c.inertia_order < 2 || group_order % c.inertia_order != 0 {
            return Err(QuotientError::Inertia { e: c.inertia_order, order: group_order });
        }
        mult += BigInt::from(c.inertia_order - 1) * c.anticanonical_multiple;
    }
    Ok(BigRational::from_integer(&mult * &mult) * kx2 / BigRational::from_integer(group_order.into()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum LocalRole {
    C,
    D,
}

/// Self-intersection of the proper transform of a curve through the listed points.
pub fn proper_transform_self_int(c2: &BigRational, passes: &[(SingularityType, LocalRole)]) -> BigRational {
    passes.iter().fold(c2.clone(), |acc, (s, role)| {
        acc + match role {
            LocalRole::C => &s.delta_c2,
            LocalRole::D => &s.delta_d2,
        }
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "step", rename_all = "camelCase")]
pub enum LedgerStep {
    Hurwitz {
        #[serde(rename = "groupOrder")]
        group_order: u64,
        ramification: Vec<RamificationCurve>,
        #[serde(rename = "k2", serialize_with = "ser_q")]
        k2_after: BigRational,
    },
    Resolve {
        singularity: String,
        count: u32,
        #[serde(rename = "deltaK2", serialize_with = "ser_q")]
        delta_k2: BigRational,
        #[serde(rename = "k2", serialize_with = "ser_q")]
        k2_after: BigRational,
    },
    /// Checks a curve's proper transform; does not change K².
    Curve {
        curve: String,
        #[serde(rename = "imageSelfIntersection", serialize_with = "ser_q")]
        image_self_int: BigRational,
        #[serde(rename = "selfIntersection", serialize_with = "ser_q")]
        self_int: BigRational,
    },
    Contract {
        count: u32,
        #[serde(rename = "k2", serialize_with = "ser_q")]
        k2_after: BigRational,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct QuotientLedger {
    pub scenario: String,
    pub group_order: u64,
    #[serde(serialize_with = "ser_q")]
    pub kx_squared: BigRational,
    pub steps: Vec<LedgerStep>,
    #[serde(serialize_with = "ser_q")]
    pub result: BigRational,
    pub model: String,
}

impl QuotientLedger {
    fn start(scenario: ScenarioName, group_order: u64, ram: Vec<RamificationCurve>) -> Self {
        let kx2 = BigRational::from_integer(2.into());
        let k2 = hurwitz_k2(group_order, &kx2, &ram).expect("scenario data is consistent");
        QuotientLedger {
            scenario: scenario.to_string(),
            group_order,
            kx_squared: kx2,
            steps: vec![LedgerStep::Hurwitz { group_order, ramification: ram, k2_after: k2.clone() }],
            result: k2,
            model: String::new(),
        }
    }

    fn resolve(mut self, s: SingularityType, count: u32) -> Self {
        self.result += &s.delta_k2 * BigRational::from_integer(count.into());
        self.steps.push(LedgerStep::Resolve {
            singularity: s.to_string(),
            count,
            delta_k2: s.delta_k2.clone(),
            k2_after: self.result.clone(),
        });
        self
    }

    /// Record a curve of self-intersection c2 on X, invariant under the whole group.
    fn curve(mut self, name: &str, c2: i64, passes: &[(SingularityType, LocalRole)]) -> Self {
        let image = rat(c2, self.group_order as i64);
        let s = proper_transform_self_int(&image, passes);
        self.steps.push(LedgerStep::Curve { curve: name.into(), image_self_int: image, self_int: s });
        self
    }

    fn contract(mut self, count: u32) -> Self {
        self.result += BigRational::from_integer(count.into());
        self.steps.push(LedgerStep::Contract { count, k2_after: self.result.clone() });
        self
    }

    fn model(mut self, m: &str) -> Self {
        self.model = m.into();
        self
    }

    /// Recompute K² from the steps alone.
    pub fn replay(&self) -> Result<BigRational, QuotientError> {
        let mut k2 = self.kx_squared.clone();
        for st in &self.steps {
            match st {
                LedgerStep::Hurwitz { group_order, ramification, .. } => {
                    k2 = hurwitz_k2(*group_order, &k2, ramification)?;
                }
                LedgerStep::Resolve { delta_k2, count, .. } => {
                    k2 += delta_k2 * BigRational::from_integer((*count).into());
                }
                LedgerStep::Curve { .. } => {}
                LedgerStep::Contract { count, .. } => k2 += BigRational::from_integer((*count).into()),
            }
        }
        Ok(k2)
    }

    pub fn verify(&self) -> Result<(), QuotientError> {
        let r = self.replay()?;
        if r != self.result {
            return Err(QuotientError::Replay { replayed: fmt_rational(&r), stored: fmt_rational(&self.result) });
        }
        Ok(())
    }

    /// K² after each step that changes it.
    pub fn k2_trace(&self) -> Vec<BigRational> {
        self.steps
            .iter()
            .filter_map(|s| match s {
                LedgerStep::Hurwitz { k2_after, .. } | LedgerStep::Resolve { k2_after, .. } | LedgerStep::Contract { k2_after, .. } => {
                    Some(k2_after.clone())
                }
                LedgerStep::Curve { .. } => None,
            })
            .collect()
    }

    pub fn curve_self_ints(&self) -> Vec<(String, BigRational)> {
        self.steps
            .iter()
            .filter_map(|s| match s {
                LedgerStep::Curve { curve, self_int, .. } => Some((curve.clone(), self_int.clone())),
                _ => None,
            })
            .collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ScenarioName {
    Type0,
    Type1,
    Type2,
    Type3,
    Type4,
    V4,
    Type5,
    Psl2F7,
}

impl ScenarioName {
    pub const ALL: [ScenarioName; 8] = [
        ScenarioName::Type0,
        ScenarioName::Type1,
        ScenarioName::Type2,
        ScenarioName::Type3,
        ScenarioName::Type4,
        ScenarioName::V4,
        ScenarioName::Type5,
        ScenarioName::Psl2F7,
    ];
}

impl fmt::Display for ScenarioName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ScenarioName::Type0 => "type0",
            ScenarioName::Type1 => "type1",
            ScenarioName::Type2 => "type2",
            ScenarioName::Type3 => "type3",
            ScenarioName::Type4 => "type4",
            ScenarioName::V4 => "v4",
            ScenarioName::Type5 => "type5",
            ScenarioName::Psl2F7 => "psl2f7",
        };
        f.write_str(s)
    }
}

impl FromStr for ScenarioName {
    type Err = QuotientError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let l = s.to_ascii_lowercase();
        ScenarioName::ALL
            .into_iter()
            .find(|n| n.to_string() == l)
            .ok_or_else(|| QuotientError::UnknownScenario(s.to_string()))
    }
}

pub fn run_scenario(name: ScenarioName) -> QuotientLedger {
    use LocalRole::*;
    use ScenarioName::*;
    let e2 = RamificationCurve::anticanonical(2);
    match name {
        // Geiser involution: branch quartic, ramification curve of class -2K.
        Type0 => QuotientLedger::start(name, 2, vec![RamificationCurve { anticanonical_multiple: 2, inertia_order: 2 }])
            .model("projective plane"),
        Type1 => QuotientLedger::start(name, 2, vec![e2])
            .resolve(SingularityType::a(2), 2)
            .model("weak del Pezzo surface of degree 4 with two A1 points (Iskovskikh surface)"),
        Type2 => QuotientLedger::start(name, 2, vec![])
            .resolve(SingularityType::a(2), 4)
            .curve("z=0", 2, &[(SingularityType::a(2), C), (SingularityType::a(2), C), (SingularityType::a(2), C), (SingularityType::a(2), C)])
            .contract(1)
            .model("del Pezzo surface of degree 2"),
        Type3 => QuotientLedger::start(name, 3, vec![RamificationCurve::anticanonical(3)])
            .resolve(SingularityType::a(3), 1)
            .model("weak del Pezzo surface of degree 6"),
        Type4 => {
            let a2 = SingularityType::a(3);
            let t = SingularityType::third();
            let through_c = [(a2.clone(), C), (a2.clone(), C), (t.clone(), C)];
            let through_d = [(t.clone(), C), (t.clone(), C)];
            QuotientLedger::start(name, 3, vec![])
                .resolve(a2.clone(), 2)
                .resolve(t.clone(), 2)
                .curve("C1: y=0", 2, &through_c)
                .curve("C2: x=0", 2, &through_c)
                .curve("D1", -1, &through_d)
                .curve("D2", -1, &through_d)
                .contract(4)
                .model("surface with K^2 = 4")
        }
        V4 => QuotientLedger::start(name, 4, vec![e2.clone(), e2.clone(), e2]).model("smooth surface with K^2 = 8"),
        Type5 => QuotientLedger::start(name, 7, vec![])
            .resolve(SingularityType::seventh(), 3)
            .contract(9)
            .model("surface with K^2 = 8"),
        Psl2F7 => QuotientLedger::start(name, 168, vec![e2; 21])
            .resolve(SingularityType::third(), 1)
            .resolve(SingularityType::seventh(), 1)
            .model("surface with K^2 = 5"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        rat(n, d)
    }

    #[test]
    fn hurwitz_values() {
        let two = q(2, 1);
        assert_eq!(hurwitz_k2(2, &two, &[RamificationCurve::anticanonical(2)]).unwrap(), q(4, 1));
        let three = vec![RamificationCurve::anticanonical(2); 3];
        assert_eq!(hurwitz_k2(4, &two, &three).unwrap(), q(8, 1));
        assert_eq!(hurwitz_k2(3, &two, &[RamificationCurve::anticanonical(3)]).unwrap(), q(6, 1));
        assert_eq!(hurwitz_k2(1, &two, &[]).unwrap(), q(2, 1));
        assert_eq!(hurwitz_k2(7, &two, &[]).unwrap(), q(2, 7));
        assert!(hurwitz_k2(3, &two, &[RamificationCurve::anticanonical(2)]).is_err());
        assert!(hurwitz_k2(0, &two, &[]).is_err());
    }

    #[test]
    fn catalog_rows() {
        for n in 2..10 {
            let a = SingularityType::a(n);
            assert!(a.delta_k2.is_zero());
            assert_eq!(a.delta_c2, q(1 - n as i64, n as i64));
            assert_eq!(a.chain.len(), n as usize - 1);
        }
        assert_eq!(SingularityType::lookup(7, 3).unwrap().delta_d2, q(-5, 7));
        assert!(SingularityType::lookup(5, 2).is_none());
    }

    #[test]
    fn proper_transforms() {
        let a1 = SingularityType::a(2);
        let passes = vec![(a1, LocalRole::C); 4];
        assert_eq!(proper_transform_self_int(&q(1, 1), &passes), q(-1, 1));
        assert_eq!(proper_transform_self_int(&q(0, 1), &[]), q(0, 1));
        assert_eq!(proper_transform_self_int(&q(-1, 1), &[(SingularityType::seventh(), LocalRole::D)]), q(-12, 7));
    }

    #[test]
    fn scenario_traces() {
        let t = |n: ScenarioName| run_scenario(n).k2_trace();
        assert_eq!(t(ScenarioName::Type0), vec![q(9, 1)]);
        assert_eq!(t(ScenarioName::Type1), vec![q(4, 1), q(4, 1)]);
        assert_eq!(t(ScenarioName::Type2), vec![q(1, 1), q(1, 1), q(2, 1)]);
        assert_eq!(t(ScenarioName::Type3), vec![q(6, 1), q(6, 1)]);
        assert_eq!(t(ScenarioName::Type4), vec![q(2, 3), q(2, 3), q(0, 1), q(4, 1)]);
        assert_eq!(t(ScenarioName::V4), vec![q(8, 1)]);
        assert_eq!(t(ScenarioName::Type5), vec![q(2, 7), q(-1, 1), q(8, 1)]);
        assert_eq!(t(ScenarioName::Psl2F7), vec![q(121, 21), q(38, 7), q(5, 1)]);
    }

    #[test]
    fn curves_become_minus_one() {
        for n in [ScenarioName::Type2, ScenarioName::Type4] {
            let cs = run_scenario(n).curve_self_ints();
            assert!(!cs.is_empty());
            assert!(cs.iter().all(|(_, s)| *s == q(-1, 1)), "{n}: {cs:?}");
        }
    }

    #[test]
    fn ledgers_replay_and_end_integral() {
        for n in ScenarioName::ALL {
            let l = run_scenario(n);
            l.verify().unwrap();
            assert!(l.result.is_integer(), "{n}");
        }
    }

    #[test]
    fn names_roundtrip() {
        for n in ScenarioName::ALL {
            assert_eq!(n.to_string().parse::<ScenarioName>().unwrap(), n);
        }
        assert_eq!("PSL2F7".parse::<ScenarioName>().unwrap(), ScenarioName::Psl2F7);
        assert!("type9".parse::<ScenarioName>().is_err());
    }
}

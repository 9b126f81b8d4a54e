//! Quotients of an Iskovskikh surface (conic bundle, four singular fibres, two (-2)-sections)
//! decided from a descriptor of the acting group.
//!
//! The group splits as G0 (trivial on all (-1)-curves, cyclic), GB (trivial on the base
//! beyond G0, at most C2) and the image F acting on the base. Stages run in that order; once a
//! model with K² ≥ 5 is reached every further quotient stays there.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum IskError {
    #[error("G0 order must be at least 1")]
    ZeroOrder,
    #[error("base group of order {order} needs {expected} fibre records, got {got}")]
    FixCount { order: u32, expected: usize, got: usize },
    #[error("cannot parse `{0}`")]
    Parse(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum BaseGroup {
    Trivial,
    C2,
    C2xC2,
    Other(u32),
}

impl BaseGroup {
    pub fn order(&self) -> u32 {
        match self {
            BaseGroup::Trivial => 1,
            BaseGroup::C2 => 2,
            BaseGroup::C2xC2 => 4,
            BaseGroup::Other(n) => *n,
        }
    }
}

impl FromStr for BaseGroup {
    type Err = IskError;
    fn from_str(s: &str) -> Result<Self, IskError> {
        let l = s.trim().to_ascii_lowercase();
        Ok(match l.as_str() {
            "trivial" | "1" => BaseGroup::Trivial,
            "c2" => BaseGroup::C2,
            "c2xc2" | "c2^2" | "v4" => BaseGroup::C2xC2,
            other => {
                let n: u32 = other
                    .trim_start_matches("other:")
                    .trim_start_matches("order")
                    .parse()
                    .map_err(|_| IskError::Parse(s.to_string()))?;
                match n {
                    0 => return Err(IskError::Parse(s.to_string())),
                    1 => BaseGroup::Trivial,
                    2 => BaseGroup::C2,
                    _ => BaseGroup::Other(n),
                }
            }
        })
    }
}

impl fmt::Display for BaseGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BaseGroup::Trivial => f.write_str("trivial"),
            BaseGroup::C2 => f.write_str("C2"),
            BaseGroup::C2xC2 => f.write_str("C2xC2"),
            BaseGroup::Other(n) => write!(f, "order{n}"),
        }
    }
}

/// Fixed-point data of one non-trivial base element.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct FiberFix {
    /// Only isolated fixed points, no pointwise fixed curve.
    pub isolated_only: bool,
    /// Each pair of fixed points in an invariant fibre lies in one G×Gal orbit.
    pub pairs_fused: bool,
}

impl FiberFix {
    pub const GOOD: FiberFix = FiberFix { isolated_only: true, pairs_fused: true };

    pub fn all() -> [FiberFix; 4] {
        [
            FiberFix { isolated_only: true, pairs_fused: true },
            FiberFix { isolated_only: true, pairs_fused: false },
            FiberFix { isolated_only: false, pairs_fused: true },
            FiberFix { isolated_only: false, pairs_fused: false },
        ]
    }
}

impl FromStr for FiberFix {
    type Err = IskError;
    /// Comma list of flags: isolated|curve, fused|unfused.
    fn from_str(s: &str) -> Result<Self, IskError> {
        let mut f = FiberFix { isolated_only: false, pairs_fused: false };
        for t in s.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            match t {
                "isolated" => f.isolated_only = true,
                "curve" => f.isolated_only = false,
                "fused" => f.pairs_fused = true,
                "unfused" => f.pairs_fused = false,
                _ => return Err(IskError::Parse(s.to_string())),
            }
        }
        Ok(f)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct IskAction {
    pub g0_order: u32,
    pub gb_nontrivial: bool,
    pub base: BaseGroup,
    pub fiber_fix: Vec<FiberFix>,
}

impl IskAction {
    pub fn trivial() -> Self {
        IskAction { g0_order: 1, gb_nontrivial: false, base: BaseGroup::Trivial, fiber_fix: Vec::new() }
    }

    pub fn new(g0_order: u32, gb_nontrivial: bool, base: BaseGroup, fiber_fix: Vec<FiberFix>) -> Result<Self, IskError> {
        let a = IskAction { g0_order, gb_nontrivial, base, fiber_fix };
        a.validate()?;
        Ok(a)
    }

    pub fn validate(&self) -> Result<(), IskError> {
        if self.g0_order == 0 {
            return Err(IskError::ZeroOrder);
        }
        let expected = self.base.order() as usize - 1;
        if self.fiber_fix.len() != expected {
            return Err(IskError::FixCount { order: self.base.order(), expected, got: self.fiber_fix.len() });
        }
        Ok(())
    }

    pub fn group_order(&self) -> u32 {
        self.g0_order * if self.gb_nontrivial { 2 } else { 1 } * self.base.order()
    }

    pub fn is_two_group(&self) -> bool {
        self.group_order().is_power_of_two()
    }

    /// Some non-trivial element fixes a curve pointwise: an even-order G0 element, the GB
    /// involution, or a base element flagged as such.
    pub fn has_fixed_curve_element(&self) -> bool {
        self.g0_order % 2 == 0 || self.gb_nontrivial || self.fiber_fix.iter().any(|f| !f.isolated_only)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum ModelKind {
    #[serde(rename = "K2_8")]
    K2Eight,
    IskovskikhAgain,
    MinimalConicBundleK4,
    #[serde(rename = "K2_atLeast5")]
    K2AtLeast5,
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ModelKind::K2Eight => "K2_8",
            ModelKind::IskovskikhAgain => "IskovskikhAgain",
            ModelKind::MinimalConicBundleK4 => "MinimalConicBundleK4",
            ModelKind::K2AtLeast5 => "K2_atLeast5",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct IskVerdict {
    pub model_kind: ModelKind,
    pub k2_bound: u32,
    pub trail: Vec<String>,
}

impl IskVerdict {
    fn of(kind: ModelKind, why: &str) -> Self {
        let k2_bound = match kind {
            ModelKind::K2Eight => 8,
            ModelKind::IskovskikhAgain | ModelKind::MinimalConicBundleK4 => 4,
            ModelKind::K2AtLeast5 => 5,
        };
        IskVerdict { model_kind: kind, k2_bound, trail: vec![why.to_string()] }
    }

    fn then(mut self, next: IskVerdict) -> Self {
        self.model_kind = next.model_kind;
        self.k2_bound = next.k2_bound;
        self.trail.extend(next.trail);
        self
    }

    pub fn is_at_least_five(&self) -> bool {
        self.k2_bound >= 5
    }
}

/// None means the stage is trivial.
pub fn quotient_by_g0(d: u32) -> Option<IskVerdict> {
    match d {
        0 | 1 => None,
        d if d % 2 == 0 => Some(IskVerdict::of(ModelKind::K2Eight, "even G0: quotient is smooth with K^2 = 8")),
        _ => Some(IskVerdict::of(ModelKind::IskovskikhAgain, "odd G0: quotient is again an Iskovskikh surface")),
    }
}

pub fn quotient_by_gb() -> IskVerdict {
    IskVerdict::of(ModelKind::K2Eight, "GB = C2: quotient is smooth with K^2 = 8")
}

pub fn base_quotient(f: BaseGroup, fix: &[FiberFix]) -> Option<IskVerdict> {
    match f {
        BaseGroup::Trivial => None,
        BaseGroup::C2 | BaseGroup::C2xC2 => {
            if fix.iter().all(|x| *x == FiberFix::GOOD) {
                Some(IskVerdict::of(ModelKind::MinimalConicBundleK4, "base group C2 or C2^2 with isolated, fused fixed points: minimal conic bundle with K^2 = 4"))
            } else {
                Some(IskVerdict::of(ModelKind::K2AtLeast5, "a base element fixes a curve or leaves a fixed pair split: K^2 >= 5"))
            }
        }
        BaseGroup::Other(_) => Some(IskVerdict::of(ModelKind::K2AtLeast5, "base group is not C2 or C2^2: K^2 >= 5")),
    }
}

/// Non-trivial quotient of a model with K² ≥ 5 keeps K² ≥ 5.
fn absorb(state: IskVerdict) -> IskVerdict {
    state.then(IskVerdict::of(ModelKind::K2AtLeast5, "further quotient of a K^2 >= 5 model: K^2 >= 5"))
}

pub fn full_pipeline(action: &IskAction) -> Result<IskVerdict, IskError> {
    action.validate()?;
    let mut state = IskVerdict::of(ModelKind::IskovskikhAgain, "start: Iskovskikh surface");
    let mut stages: Vec<IskVerdict> = Vec::new();
    if let Some(v) = quotient_by_g0(action.g0_order) {
        stages.push(v);
    }
    if action.gb_nontrivial {
        stages.push(quotient_by_gb());
    }
    if let Some(v) = base_quotient(action.base, &action.fiber_fix) {
        stages.push(v);
    }
    for v in stages {
        state = if state.k2_bound >= 5 { absorb(state) } else { state.then(v) };
    }
    Ok(state)
}

/// Every valid descriptor with group order at most `max_order`. Base groups other than C2 and
/// C2^2 are listed by order only.
pub fn enumerate_actions(max_order: u32) -> Vec<IskAction> {
    let mut out = Vec::new();
    for g0 in 1..=max_order {
        for gb in [false, true] {
            let partial = g0 * if gb { 2 } else { 1 };
            if partial > max_order {
                continue;
            }
            for n in 1..=max_order / partial {
                let mut bases = vec![];
                match n {
                    1 => bases.push(BaseGroup::Trivial),
                    2 => bases.push(BaseGroup::C2),
                    4 => {
                        bases.push(BaseGroup::C2xC2);
                        bases.push(BaseGroup::Other(4));
                    }
                    _ => bases.push(BaseGroup::Other(n)),
                }
                for base in bases {
                    let k = n as usize - 1;
                    for combo in 0..4usize.pow(k as u32) {
                        let mut c = combo;
                        let fix: Vec<FiberFix> = (0..k)
                            .map(|_| {
                                let f = FiberFix::all()[c % 4];
                                c /= 4;
                                f
                            })
                            .collect();
                        out.push(IskAction { g0_order: g0, gb_nontrivial: gb, base, fiber_fix: fix });
                    }
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stage_examples() {
        assert_eq!(quotient_by_g0(2).unwrap().model_kind, ModelKind::K2Eight);
        assert_eq!(quotient_by_g0(3).unwrap().model_kind, ModelKind::IskovskikhAgain);
        assert!(quotient_by_g0(1).is_none());
        assert_eq!(quotient_by_gb().k2_bound, 8);
        assert_eq!(base_quotient(BaseGroup::C2, &[FiberFix::GOOD]).unwrap().model_kind, ModelKind::MinimalConicBundleK4);
        let curve = FiberFix { isolated_only: false, pairs_fused: true };
        assert_eq!(base_quotient(BaseGroup::C2, &[curve]).unwrap().model_kind, ModelKind::K2AtLeast5);
        assert_eq!(base_quotient(BaseGroup::Other(6), &[FiberFix::GOOD; 5]).unwrap().model_kind, ModelKind::K2AtLeast5);
    }

    #[test]
    fn pipeline_examples() {
        let v = full_pipeline(&IskAction::trivial()).unwrap();
        assert_eq!((v.model_kind, v.k2_bound), (ModelKind::IskovskikhAgain, 4));
        let a = IskAction::new(2, false, BaseGroup::C2, vec![FiberFix::GOOD]).unwrap();
        assert_eq!(full_pipeline(&a).unwrap().model_kind, ModelKind::K2AtLeast5);
        let a = IskAction::new(3, false, BaseGroup::C2, vec![FiberFix::GOOD]).unwrap();
        assert_eq!(full_pipeline(&a).unwrap().model_kind, ModelKind::MinimalConicBundleK4);
        let a = IskAction::new(1, true, BaseGroup::Trivial, vec![]).unwrap();
        assert_eq!(full_pipeline(&a).unwrap().model_kind, ModelKind::K2Eight);
        let a = IskAction::new(3, true, BaseGroup::Trivial, vec![]).unwrap();
        assert_eq!(full_pipeline(&a).unwrap().model_kind, ModelKind::K2Eight);
        assert!(IskAction::new(1, false, BaseGroup::C2xC2, vec![FiberFix::GOOD]).is_err());
    }

    #[test]
    fn parsing() {
        assert_eq!("c2".parse::<BaseGroup>().unwrap(), BaseGroup::C2);
        assert_eq!("6".parse::<BaseGroup>().unwrap(), BaseGroup::Other(6));
        assert_eq!("isolated,fused".parse::<FiberFix>().unwrap(), FiberFix::GOOD);
        assert!("isolated,maybe".parse::<FiberFix>().is_err());
    }

    #[test]
    fn never_below_four() {
        for a in enumerate_actions(8) {
            assert!(full_pipeline(&a).unwrap().k2_bound >= 4);
        }
    }
}

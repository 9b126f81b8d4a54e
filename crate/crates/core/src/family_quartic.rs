//! The family Ax⁴ + 2Bx²y² + Ay⁴ + Cz⁴ = t² over a field containing i, with
//! A = w²η = u²σ + v²τ, B = u²σ - v²τ, C = q²στη.
//!
//! Lines come in four families (θ: 8, η, σ, τ: 16 each) with explicit equations. Everything
//! here is derived by evaluating those equations at a fixed generic complex point of the
//! parameter space: intersections give a marking, automorphisms and sign changes of the
//! radicals √σ, √τ, √η give lattice isometries. The square classes of σ, τ, η are symbols
//! in {1, μ, ν, μν}, so Galois acts through sign changes of √μ and √ν.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use num_complex::Complex64 as Cx;
use serde::Serialize;
use thiserror::Error;

use crate::classify::{describe_group, element_label, proposition_dp2, ElementLabel, VerdictKind};
use crate::family_cubic::{self, Rationality};
use crate::piclattice::{line_index_of, ContractedModel, DivisorClass, LINE_LABELS, NUM_LINES};
use crate::weyl::{invariant_rank_of, minimal_model_search_gens, orbits_under, LatticeIsometry, SubgroupClosure};

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum QuarticError {
    #[error("invalid preset: {0}")]
    InvalidPreset(String),
    #[error("no example preset {0}")]
    UnknownExample(u8),
    #[error("cannot parse group word {0:?}")]
    Word(String),
    #[error("{0} is not an automorphism of the surface")]
    NotAutomorphism(String),
    #[error("numerical model degenerates: {0}")]
    Degenerate(String),
    #[error("group does not contain (-x:-y:z:t)")]
    MissingN,
    #[error("no fixed-point record for {0}")]
    UnsupportedElement(String),
    #[error("invariant Picard rank is {0}, not 1")]
    NotMinimal(usize),
    #[error("impossible cell: {0}")]
    Impossible(String),
    #[error("no cell ({0}, {1})")]
    NoCell(u8, u8),
}

// ---------------------------------------------------------------- presets

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum QChoice {
    #[serde(rename = "uvw")]
    Uvw,
    #[serde(rename = "uvw*sigma*tau*eta")]
    UvwSte,
    #[serde(rename = "uvw*sigma*tau")]
    UvwSt,
}

impl QChoice {
    pub const ALL: [QChoice; 3] = [QChoice::Uvw, QChoice::UvwSte, QChoice::UvwSt];

    /// Exponents of (σ, τ, η) in q / uvw.
    fn exps(self) -> [u8; 3] {
        match self {
            QChoice::Uvw => [0, 0, 0],
            QChoice::UvwSte => [1, 1, 1],
            QChoice::UvwSt => [1, 1, 0],
        }
    }
}

impl fmt::Display for QChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            QChoice::Uvw => "uvw",
            QChoice::UvwSte => "uvw*sigma*tau*eta",
            QChoice::UvwSt => "uvw*sigma*tau",
        })
    }
}

impl FromStr for QChoice {
    type Err = QuarticError;
    fn from_str(s: &str) -> Result<Self, QuarticError> {
        match s.replace(['·', ' '], "*").to_lowercase().as_str() {
            "uvw" => Ok(QChoice::Uvw),
            "uvw*sigma*tau*eta" | "uvwste" => Ok(QChoice::UvwSte),
            "uvw*sigma*tau" | "uvwst" => Ok(QChoice::UvwSt),
            _ => Err(QuarticError::InvalidPreset(format!("q = {s}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum SquareSymbol {
    #[serde(rename = "1")]
    One,
    #[serde(rename = "mu")]
    Mu,
    #[serde(rename = "nu")]
    Nu,
    #[serde(rename = "mu*nu")]
    MuNu,
}

impl SquareSymbol {
    fn mask(self) -> u8 {
        match self {
            SquareSymbol::One => 0,
            SquareSymbol::Mu => 1,
            SquareSymbol::Nu => 2,
            SquareSymbol::MuNu => 3,
        }
    }
}

impl FromStr for SquareSymbol {
    type Err = QuarticError;
    fn from_str(s: &str) -> Result<Self, QuarticError> {
        match s.trim().to_lowercase().as_str() {
            "1" => Ok(SquareSymbol::One),
            "mu" | "μ" => Ok(SquareSymbol::Mu),
            "nu" | "ν" => Ok(SquareSymbol::Nu),
            "mu*nu" | "munu" | "μν" => Ok(SquareSymbol::MuNu),
            _ => Err(QuarticError::InvalidPreset(format!("square class {s}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum GaloisType {
    Trivial,
    C2,
    C2xC2,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct QuarticPreset {
    pub q_choice: QChoice,
    pub sigma: SquareSymbol,
    pub tau: SquareSymbol,
    pub eta: SquareSymbol,
    /// Galois group of k(√μ, √ν)/k.
    pub galois: GaloisType,
    /// The conic w²η = u²σ + v²τ has a k-point.
    pub conic_point: bool,
}

impl QuarticPreset {
    pub fn validate(&self) -> Result<(), QuarticError> {
        let used = self.sigma.mask() | self.tau.mask() | self.eta.mask();
        let allowed = match self.galois {
            GaloisType::Trivial => 0,
            GaloisType::C2 => 1,
            GaloisType::C2xC2 => 3,
        };
        if used & !allowed != 0 {
            return Err(QuarticError::InvalidPreset(format!("square classes need a larger Galois group than {:?}", self.galois)));
        }
        let (s, t, e) = (self.sigma, self.tau, self.eta);
        if s != t && s != e && t != e && !self.conic_point {
            return Err(QuarticError::InvalidPreset("sigma, tau, eta distinct but the conic has no k-point".into()));
        }
        Ok(())
    }

    fn masks(&self) -> [u8; 3] {
        [self.sigma.mask(), self.tau.mask(), self.eta.mask()]
    }

    /// Sign vectors on (√μ, √ν) generating the Galois group.
    fn galois_generators(&self) -> Vec<[f64; 3]> {
        match self.galois {
            GaloisType::Trivial => vec![],
            GaloisType::C2 => vec![[-1.0, 1.0, 1.0]],
            GaloisType::C2xC2 => vec![[-1.0, 1.0, 1.0], [1.0, -1.0, 1.0]],
        }
    }
}

/// The nine worked presets, numbered 1 to 9.
pub fn example_preset(n: u8) -> Result<QuarticPreset, QuarticError> {
    use GaloisType::*;
    use QChoice::*;
    use SquareSymbol::*;
    let (q_choice, sigma, tau, eta, galois) = match n {
        1 => (Uvw, One, One, One, Trivial),
        2 => (Uvw, Mu, Mu, Mu, C2),
        3 => (Uvw, Mu, Mu, One, C2),
        4 => (Uvw, One, One, Mu, C2),
        5 => (Uvw, Mu, Nu, MuNu, C2xC2),
        6 => (UvwSte, Mu, Mu, Mu, C2),
        7 => (UvwSte, One, One, Mu, C2),
        8 => (UvwSte, Mu, Nu, One, C2xC2),
        9 => (UvwSt, Mu, Nu, MuNu, C2xC2),
        _ => return Err(QuarticError::UnknownExample(n)),
    };
    Ok(QuarticPreset { q_choice, sigma, tau, eta, galois, conic_point: true })
}

// ---------------------------------------------------------------- automorphisms

/// α^a β^b δ^d γ^g with α = (ix:y:z:t), β = (x:iy:z:t), δ = (y:x:z:t), γ = (x:y:z:-t),
/// acting as a matrix product (δ applied first). Only a ≡ b (mod 2) preserves the surface.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Auto {
    pub a: u8,
    pub b: u8,
    pub d: bool,
    pub g: bool,
}

impl Auto {
    pub const ID: Auto = Auto { a: 0, b: 0, d: false, g: false };
    pub const N: Auto = Auto { a: 2, b: 2, d: false, g: false };
    pub const GAMMA: Auto = Auto { a: 0, b: 0, d: false, g: true };
    pub const DELTA: Auto = Auto { a: 0, b: 0, d: true, g: false };
    pub const AB: Auto = Auto { a: 1, b: 1, d: false, g: false };
    pub const AB3: Auto = Auto { a: 1, b: 3, d: false, g: false };

    pub fn compose(&self, o: &Auto) -> Auto {
        let (a2, b2) = if self.d { (o.b, o.a) } else { (o.a, o.b) };
        Auto { a: (self.a + a2) % 4, b: (self.b + b2) % 4, d: self.d ^ o.d, g: self.g ^ o.g }
    }

    pub fn is_automorphism(&self) -> bool {
        self.a % 2 == self.b % 2
    }

    pub fn order(&self) -> u32 {
        let mut p = *self;
        let mut n = 1;
        while p != Auto::ID {
            p = p.compose(self);
            n += 1;
        }
        n
    }

    fn matrix(&self) -> [[Cx; 3]; 3] {
        let ip = |k: u8| Cx::i().powu(k as u32);
        let z = Cx::new(0.0, 0.0);
        let one = Cx::new(1.0, 0.0);
        if self.d {
            [[z, ip(self.a), z], [ip(self.b), z, z], [z, z, one]]
        } else {
            [[ip(self.a), z, z], [z, ip(self.b), z], [z, z, one]]
        }
    }

    fn apply(&self, p: &[Cx; 4]) -> [Cx; 4] {
        let m = self.matrix();
        let mut out = [Cx::new(0.0, 0.0); 4];
        for r in 0..3 {
            out[r] = (0..3).map(|c| m[r][c] * p[c]).sum();
        }
        out[3] = if self.g { -p[3] } else { p[3] };
        out
    }

    /// In terms of αβ, αβ³, δ, γ.
    fn generator_exponents(&self) -> [u8; 4] {
        let r = ((self.b + 4 - self.a) % 4) / 2;
        let p = (self.a + 4 - r) % 4;
        [p, r, self.d as u8, self.g as u8]
    }
}

impl fmt::Display for Auto {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if *self == Auto::ID {
            return f.write_str("1");
        }
        let mut s = String::new();
        for (ch, e) in [('a', self.a), ('b', self.b)] {
            match e {
                0 => {}
                1 => s.push(ch),
                k => s.push_str(&format!("{ch}{k}")),
            }
        }
        if self.d {
            s.push('d');
        }
        if self.g {
            s.push('g');
        }
        f.write_str(&s)
    }
}

impl FromStr for Auto {
    type Err = QuarticError;
    /// Words such as "a3b", "a^2 d g", "α³βγ"; "1" or "id" is the identity.
    fn from_str(s: &str) -> Result<Self, QuarticError> {
        let bad = || QuarticError::Word(s.to_string());
        let t = s.trim();
        if t == "1" || t.eq_ignore_ascii_case("id") {
            return Ok(Auto::ID);
        }
        let chars: Vec<char> = t.chars().filter(|c| !c.is_whitespace() && *c != '^' && *c != '*').collect();
        let mut out = Auto::ID;
        let mut i = 0;
        while i < chars.len() {
            let letter = match chars[i] {
                'a' | 'α' => Auto { a: 1, b: 0, d: false, g: false },
                'b' | 'β' => Auto { a: 0, b: 1, d: false, g: false },
                'd' | 'δ' => Auto::DELTA,
                'g' | 'γ' => Auto::GAMMA,
                _ => return Err(bad()),
            };
            i += 1;
            let mut exp = 0u32;
            let mut any = false;
            while i < chars.len() {
                let dgt = match chars[i] {
                    c @ '0'..='9' => c as u32 - '0' as u32,
                    '²' => 2,
                    '³' => 3,
                    _ => break,
                };
                exp = exp * 10 + dgt;
                any = true;
                i += 1;
            }
            for _ in 0..if any { exp } else { 1 } {
                out = out.compose(&letter);
            }
        }
        if !out.is_automorphism() {
            return Err(QuarticError::NotAutomorphism(s.to_string()));
        }
        Ok(out)
    }
}

impl Serialize for Auto {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

pub fn auto_closure(gens: &[Auto]) -> Vec<Auto> {
    let mut out = vec![Auto::ID];
    let mut i = 0;
    while i < out.len() {
        for g in gens {
            let h = out[i].compose(g);
            if !out.contains(&h) {
                out.push(h);
            }
        }
        i += 1;
    }
    out.sort();
    out
}

pub fn parse_group(words: &[&str]) -> Result<Vec<Auto>, QuarticError> {
    words.iter().map(|w| w.parse()).collect()
}

/// Representative groups by type name.
pub fn named_group(name: &str) -> Result<Vec<Auto>, QuarticError> {
    let w: &[&str] = match name.trim().to_lowercase().as_str() {
        "trivial" | "1" => &[],
        "n" | "c2" => &["a2b2"],
        "c2-type2" | "c2'" => &["a2g"],
        "c4" | "c4+" => &["a3b"],
        "c4-" => &["a3bg"],
        "c2xc2" | "v4" => &["a2g", "b2g"],
        "d8" => &["a3b", "dg"],
        "q8" | "q8+" => &["a3b", "a2d"],
        "q8-" => &["a3bg", "a2d"],
        _ => return parse_group(&name.split(',').collect::<Vec<_>>()),
    };
    parse_group(w)
}

// ---------------------------------------------------------------- numerics

const TOL: f64 = 1e-7;

fn c(re: f64, im: f64) -> Cx {
    Cx::new(re, im)
}

/// Base radicals: √μ, √ν and, for the generic reference model, a third independent one.
const BASE: [Cx; 3] = [Cx { re: 1.7, im: 0.45 }, Cx { re: -1.3, im: 0.9 }, Cx { re: 0.6, im: -1.35 }];
const U: Cx = Cx { re: 0.73, im: 0.21 };
const V: Cx = Cx { re: 1.07, im: -0.52 };

#[derive(Clone, Debug)]
struct Numeric {
    /// Bitmasks over BASE for σ, τ, η.
    masks: [u8; 3],
    q_exps: [u8; 3],
    u: Cx,
    v: Cx,
    w: Cx,
    q: Cx,
    a: Cx,
    b: Cx,
    cc: Cx,
}

#[derive(Clone, Debug)]
struct NumLine {
    plane: [Cx; 3],
    /// t as a quadric: xx, yy, zz, xy, xz, yz.
    quad: [Cx; 6],
}

fn quad_eval(q: &[Cx; 6], p: &[Cx; 3]) -> Cx {
    q[0] * p[0] * p[0] + q[1] * p[1] * p[1] + q[2] * p[2] * p[2] + q[3] * p[0] * p[1] + q[4] * p[0] * p[2] + q[5] * p[1] * p[2]
}

fn normalize(p: &[Cx; 4]) -> [Cx; 4] {
    let k = (0..3).max_by(|&i, &j| p[i].norm().total_cmp(&p[j].norm())).unwrap();
    let l = p[k].inv();
    [p[0] * l, p[1] * l, p[2] * l, p[3] * l * l]
}

fn same_point(a: &[Cx; 4], b: &[Cx; 4]) -> bool {
    let (a, b) = (normalize(a), normalize(b));
    let scale: f64 = 1.0 + a.iter().map(|x| x.norm()).sum::<f64>();
    a.iter().zip(&b).map(|(x, y)| (x - y).norm()).sum::<f64>() < TOL * scale
}

fn cross(a: &[Cx; 3], b: &[Cx; 3]) -> [Cx; 3] {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

fn norm3(a: &[Cx; 3]) -> f64 {
    a.iter().map(|x| x.norm()).sum()
}

impl Numeric {
    fn new(masks: [u8; 3], q: QChoice) -> Numeric {
        let val = |m: u8| (0..3).filter(|i| m >> i & 1 == 1).fold(c(1.0, 0.0), |acc, i| acc * BASE[i] * BASE[i]);
        let (s, t, e) = (val(masks[0]), val(masks[1]), val(masks[2]));
        let (u, v) = (U, V);
        let w = ((u * u * s + v * v * t) / e).sqrt();
        let ex = q.exps();
        let m = [s, t, e].iter().zip(ex).fold(c(1.0, 0.0), |acc, (x, k)| if k == 1 { acc * x } else { acc });
        let q = u * v * w * m;
        Numeric { masks, q_exps: ex, u, v, w, q, a: w * w * e, b: u * u * s - v * v * t, cc: q * q * s * t * e }
    }

    fn value(&self, which: usize) -> Cx {
        (0..3).filter(|i| self.masks[which] >> i & 1 == 1).fold(c(1.0, 0.0), |acc, i| acc * BASE[i] * BASE[i])
    }

    /// √(σ^e0 τ^e1 η^e2) with the radicals signed by `signs`.
    fn sqrt_monomial(&self, exps: [u8; 3], signs: &[f64; 3]) -> Cx {
        let mut out = c(1.0, 0.0);
        for (j, &e) in exps.iter().enumerate() {
            let v = self.value(j);
            out *= v.powu((e / 2) as u32);
            if e % 2 == 1 {
                out *= (0..3).filter(|i| self.masks[j] >> i & 1 == 1).fold(c(1.0, 0.0), |acc, i| acc * BASE[i] * signs[i]);
            }
        }
        out
    }

    fn q_times(&self, extra: [u8; 3]) -> [u8; 3] {
        [self.q_exps[0] + extra[0], self.q_exps[1] + extra[1], self.q_exps[2] + extra[2]]
    }

    fn surface(&self, p: &[Cx; 4]) -> Cx {
        let (x, y, z, t) = (p[0], p[1], p[2], p[3]);
        self.a * x.powu(4) + c(2.0, 0.0) * self.b * x * x * y * y + self.a * y.powu(4) + self.cc * z.powu(4) - t * t
    }

    /// The 56 lines in catalog order (θ, η, σ, τ), radicals signed by `signs`.
    fn lines(&self, signs: &[f64; 3]) -> Vec<NumLine> {
        let z = c(0.0, 0.0);
        let one = c(1.0, 0.0);
        let i = Cx::i();
        let pm = |bit: usize| if bit == 0 { 1.0 } else { -1.0 };
        let rs = self.sqrt_monomial([1, 0, 0], signs);
        let rt = self.sqrt_monomial([0, 1, 0], signs);
        let re = self.sqrt_monomial([0, 0, 1], signs);
        let rste = self.sqrt_monomial([1, 1, 1], signs);
        let (a, b, u, v, w, q) = (self.a, self.b, self.u, self.v, self.w, self.q);
        let mut out = Vec::with_capacity(NUM_LINES);
        for idx in 0..8 {
            let (st, s1, s2) = (pm(idx >> 2 & 1), pm(idx >> 1 & 1), pm(idx & 1));
            let k = (v * rt * s1 + i * u * rs * s2) / (w * re);
            out.push(NumLine { plane: [one, -k, z], quad: [z, z, q * rste * st, z, z, z] });
        }
        let ba = b / a;
        let eta_root = self.sqrt_monomial(self.q_times([0, 0, 1]), signs);
        for idx in 0..16 {
            let (ty, st, e, sk) = (idx >> 3, pm(idx >> 2 & 1), idx >> 1 & 1, pm(idx & 1));
            let k = (if e == 0 { one + i } else { one - i }) * sk / (w * eta_root);
            let tc = w * re * st;
            out.push(if ty == 0 {
                NumLine { plane: [z, -k, one], quad: [tc, tc * ba, z, z, z, z] }
            } else {
                NumLine { plane: [-k, z, one], quad: [tc * ba, tc, z, z, z, z] }
            });
        }
        let sig_root = self.sqrt_monomial(self.q_times([1, 0, 0]), signs);
        for idx in 0..16 {
            let (ty, st, e, sk) = (idx >> 3, pm(idx >> 2 & 1), idx >> 1 & 1, pm(idx & 1));
            let k = (if e == 0 { one } else { i }) * sk / (u * sig_root);
            let tc = st / (u * rs);
            out.push(if ty == 0 {
                NumLine { plane: [-k, -k, one], quad: [tc * a, tc * a, z, tc * (a - b), z, z] }
            } else {
                NumLine { plane: [-k, k, one], quad: [tc * a, tc * a, z, tc * (b - a), z, z] }
            });
        }
        let tau_root = self.sqrt_monomial(self.q_times([0, 1, 0]), signs);
        for idx in 0..16 {
            let (ty, st, e, sk) = (idx >> 3, pm(idx >> 2 & 1), idx >> 1 & 1, pm(idx & 1));
            let k = (if e == 0 { one } else { i }) * sk / (v * tau_root);
            let tc = st / (v * rt);
            out.push(if ty == 0 {
                NumLine { plane: [-k, -i * k, one], quad: [tc * a, -tc * a, z, tc * i * (a + b), z, z] }
            } else {
                NumLine { plane: [-k, i * k, one], quad: [tc * a, -tc * a, z, -tc * i * (a + b), z, z] }
            });
        }
        out
    }
}

impl NumLine {
    /// Three points on the line, as weighted points (x, y, z, t).
    fn samples(&self) -> [[Cx; 4]; 3] {
        let p = &self.plane;
        let k = (0..3).max_by(|&i, &j| p[i].norm().total_cmp(&p[j].norm())).unwrap();
        let (o1, o2) = ((k + 1) % 3, (k + 2) % 3);
        let mut b1 = [c(0.0, 0.0); 3];
        let mut b2 = [c(0.0, 0.0); 3];
        b1[o1] = c(1.0, 0.0);
        b1[k] = -p[o1] / p[k];
        b2[o2] = c(1.0, 0.0);
        b2[k] = -p[o2] / p[k];
        let mut out = [[c(0.0, 0.0); 4]; 3];
        for (n, s) in [c(0.37, 0.11), c(-1.21, 0.5), c(2.3, -0.7)].iter().enumerate() {
            let x = [b1[0] * s + b2[0], b1[1] * s + b2[1], b1[2] * s + b2[2]];
            out[n] = [x[0], x[1], x[2], quad_eval(&self.quad, &x)];
        }
        out
    }

    fn contains(&self, p: &[Cx; 4]) -> bool {
        let p = normalize(p);
        let x = [p[0], p[1], p[2]];
        let on_plane = (self.plane[0] * x[0] + self.plane[1] * x[1] + self.plane[2] * x[2]).norm() < TOL * norm3(&self.plane);
        on_plane && (quad_eval(&self.quad, &x) - p[3]).norm() < TOL * (1.0 + p[3].norm())
    }
}

fn intersection(l1: &NumLine, l2: &NumLine) -> Result<i64, QuarticError> {
    let x = cross(&l1.plane, &l2.plane);
    if norm3(&x) < TOL * norm3(&l1.plane) * norm3(&l2.plane) {
        let s = l1.samples();
        if s.iter().all(|p| l2.contains(p)) {
            return Ok(-1);
        }
        if s.iter().all(|p| l2.contains(&[p[0], p[1], p[2], -p[3]])) {
            return Ok(2);
        }
        return Err(QuarticError::Degenerate("coplanar lines that are neither equal nor partners".into()));
    }
    let (t1, t2) = (quad_eval(&l1.quad, &x), quad_eval(&l2.quad, &x));
    let scale = TOL * (1.0 + t1.norm() + t2.norm());
    match ((t1 - t2).norm() < scale, (t1 + t2).norm() < scale) {
        (true, false) => Ok(1),
        (false, true) => Ok(0),
        _ => Err(QuarticError::Degenerate("two lines meet on the branch curve".into())),
    }
}

fn match_line(lines: &[NumLine], pts: &[[Cx; 4]]) -> Result<usize, QuarticError> {
    let hits: Vec<usize> = (0..lines.len()).filter(|&j| pts.iter().all(|p| lines[j].contains(p))).collect();
    match hits.as_slice() {
        [j] => Ok(*j),
        _ => Err(QuarticError::Degenerate(format!("image line matched {} catalog lines", hits.len()))),
    }
}

// ---------------------------------------------------------------- catalog and marking

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum LineFamily {
    Theta,
    Eta,
    Sigma,
    Tau,
}

impl LineFamily {
    pub const ALL: [LineFamily; 4] = [LineFamily::Theta, LineFamily::Eta, LineFamily::Sigma, LineFamily::Tau];

    fn range(self) -> std::ops::Range<usize> {
        match self {
            LineFamily::Theta => 0..8,
            LineFamily::Eta => 8..24,
            LineFamily::Sigma => 24..40,
            LineFamily::Tau => 40..56,
        }
    }

    pub fn of(idx: usize) -> LineFamily {
        *LineFamily::ALL.iter().find(|f| f.range().contains(&idx)).expect("index below 56")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct LabeledLine {
    pub family: LineFamily,
    pub index: usize,
    pub name: String,
    /// Label in the lattice catalog under the fixed marking.
    pub underlying_line: String,
}

fn catalog_name(idx: usize) -> String {
    let f = LineFamily::of(idx);
    format!("{}{}", serde_json::to_value(f).unwrap().as_str().unwrap(), idx - f.range().start)
}

/// Marking and generator images for one choice of q.
#[derive(Clone, Debug)]
pub struct Dictionary {
    pub q_choice: QChoice,
    /// Catalog indices of the lines taken as E1..E7.
    pub marking: [usize; 7],
    /// Lattice line index of each catalog line.
    pub line_index: Vec<usize>,
    /// Images of αβ, αβ³, δ, γ.
    pub generators: [LatticeIsometry; 4],
    intersections: Vec<Vec<i64>>,
}

fn intersection_matrix(lines: &[NumLine]) -> Result<Vec<Vec<i64>>, QuarticError> {
    let n = lines.len();
    let mut m = vec![vec![0; n]; n];
    for i in 0..n {
        for j in 0..n {
            m[i][j] = if i == j { -1 } else { intersection(&lines[i], &lines[j])? };
        }
    }
    Ok(m)
}

fn first_disjoint_seven(m: &[Vec<i64>], chosen: &mut Vec<usize>, from: usize) -> bool {
    if chosen.len() == 7 {
        return true;
    }
    for j in from..m.len() {
        if chosen.iter().all(|&i| m[i][j] == 0) {
            chosen.push(j);
            if first_disjoint_seven(m, chosen, j + 1) {
                return true;
            }
            chosen.pop();
        }
    }
    false
}

fn isometry_from_perm(perm: &[usize], marking: &[usize; 7], line_index: &[usize]) -> Result<LatticeIsometry, QuarticError> {
    let cls = crate::piclattice::line_classes();
    let e = std::array::from_fn(|i| cls[line_index[perm[marking[i]]]]);
    let g = LatticeIsometry::from_e_images(e).map_err(|err| QuarticError::Degenerate(err.to_string()))?;
    for (j, &p) in perm.iter().enumerate() {
        if g.apply_line(line_index[j]) != line_index[p] {
            return Err(QuarticError::Degenerate("line permutation is not a lattice isometry".into()));
        }
    }
    Ok(g)
}

fn auto_perm(lines: &[NumLine], g: &Auto) -> Result<Vec<usize>, QuarticError> {
    lines
        .iter()
        .map(|l| {
            let img: Vec<[Cx; 4]> = l.samples().iter().map(|p| g.apply(p)).collect();
            match_line(lines, &img)
        })
        .collect()
}

fn build_dictionary(q: QChoice) -> Result<Dictionary, QuarticError> {
    let num = Numeric::new([1, 2, 4], q);
    let lines = num.lines(&[1.0; 3]);
    let m = intersection_matrix(&lines)?;
    let mut chosen = Vec::new();
    if !first_disjoint_seven(&m, &mut chosen, 0) {
        return Err(QuarticError::Degenerate("no seven disjoint lines".into()));
    }
    let marking: [usize; 7] = chosen.try_into().unwrap();
    let mut line_index = Vec::with_capacity(NUM_LINES);
    for row in &m {
        let c: Vec<i64> = marking.iter().map(|&e| row[e]).collect();
        let s: i64 = c.iter().sum();
        if (1 + s) % 3 != 0 {
            return Err(QuarticError::Degenerate("non-integral class".into()));
        }
        let mut coeffs = [0i64; 8];
        coeffs[0] = (1 + s) / 3;
        for i in 0..7 {
            coeffs[i + 1] = -c[i];
        }
        let idx = line_index_of(&DivisorClass(coeffs)).ok_or_else(|| QuarticError::Degenerate("class is not a line".into()))?;
        line_index.push(idx);
    }
    let cls = crate::piclattice::line_classes();
    for i in 0..NUM_LINES {
        for j in 0..NUM_LINES {
            if cls[line_index[i]].dot(&cls[line_index[j]]) != m[i][j] {
                return Err(QuarticError::Degenerate("marking disagrees with an intersection".into()));
            }
        }
    }
    let mut gens = [LatticeIsometry::identity(); 4];
    for (k, g) in [Auto::AB, Auto::AB3, Auto::DELTA, Auto::GAMMA].iter().enumerate() {
        gens[k] = isometry_from_perm(&auto_perm(&lines, g)?, &marking, &line_index)?;
    }
    Ok(Dictionary { q_choice: q, marking, line_index, generators: gens, intersections: m })
}

pub fn dictionary(q: QChoice) -> &'static Dictionary {
    static D: OnceLock<Vec<Dictionary>> = OnceLock::new();
    let all = D.get_or_init(|| QChoice::ALL.iter().map(|&q| build_dictionary(q).expect("generic model is nondegenerate")).collect());
    &all[QChoice::ALL.iter().position(|x| *x == q).unwrap()]
}

impl Dictionary {
    pub fn lattice(&self, g: &Auto) -> LatticeIsometry {
        let ex = g.generator_exponents();
        (0..4).fold(LatticeIsometry::identity(), |acc, k| acc.compose(&self.generators[k].pow(ex[k] as u32)))
    }

    pub fn lattice_group(&self, gens: &[Auto]) -> Vec<LatticeIsometry> {
        gens.iter().map(|g| self.lattice(g)).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct DictionaryCertificate {
    pub q_choice: QChoice,
    pub marking: Vec<String>,
    /// Images of E1..E7 under αβ, αβ³, δ, γ.
    pub generators: BTreeMap<String, Vec<String>>,
}

pub fn dictionary_certificate() -> Vec<DictionaryCertificate> {
    QChoice::ALL
        .iter()
        .map(|&q| {
            let d = dictionary(q);
            let names = ["ab", "ab3", "d", "g"];
            let generators = names
                .iter()
                .zip(&d.generators)
                .map(|(n, g)| (n.to_string(), (0..7).map(|i| LINE_LABELS[g.apply_line(i)].to_string()).collect()))
                .collect();
            DictionaryCertificate { q_choice: q, marking: d.marking.iter().map(|&i| catalog_name(i)).collect(), generators }
        })
        .collect()
}

pub const PINNED_DICTIONARY: &str = include_str!("../data/quartic_dictionary.json");

pub fn catalog() -> Vec<LabeledLine> {
    let d = dictionary(QChoice::Uvw);
    (0..NUM_LINES)
        .map(|i| {
            let f = LineFamily::of(i);
            LabeledLine { family: f, index: i - f.range().start, name: catalog_name(i), underlying_line: LINE_LABELS[d.line_index[i]].to_string() }
        })
        .collect()
}

// ---------------------------------------------------------------- preset models

pub struct PresetModel {
    pub preset: QuarticPreset,
    pub dict: &'static Dictionary,
    /// Galois generators as lattice isometries.
    pub galois: Vec<LatticeIsometry>,
    /// The same generators as catalog permutations.
    galois_perms: Vec<Vec<usize>>,
    num: Numeric,
}

pub fn model(preset: &QuarticPreset) -> Result<PresetModel, QuarticError> {
    preset.validate()?;
    let dict = dictionary(preset.q_choice);
    let num = Numeric::new(preset.masks(), preset.q_choice);
    let lines = num.lines(&[1.0; 3]);
    for (i, l) in lines.iter().enumerate() {
        if l.samples().iter().any(|p| num.surface(p).norm() > 1e-6 * (1.0 + p[3].norm_sqr())) {
            return Err(QuarticError::Degenerate(format!("{} is not on the surface", catalog_name(i))));
        }
    }
    if intersection_matrix(&lines)? != dict.intersections {
        return Err(QuarticError::Degenerate("preset specialises the intersection pattern".into()));
    }
    for (k, g) in [Auto::AB, Auto::AB3, Auto::DELTA, Auto::GAMMA].iter().enumerate() {
        if isometry_from_perm(&auto_perm(&lines, g)?, &dict.marking, &dict.line_index)? != dict.generators[k] {
            return Err(QuarticError::Degenerate("automorphism acts differently on this preset".into()));
        }
    }
    let mut galois = Vec::new();
    let mut galois_perms = Vec::new();
    for signs in preset.galois_generators() {
        let flipped = num.lines(&signs);
        let perm = flipped.iter().map(|l| match_line(&lines, &l.samples())).collect::<Result<Vec<_>, _>>()?;
        galois.push(isometry_from_perm(&perm, &dict.marking, &dict.line_index)?);
        galois_perms.push(perm);
    }
    Ok(PresetModel { preset: preset.clone(), dict, galois, galois_perms, num })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum FamilyAction {
    #[serde(rename = "id")]
    Id,
    #[serde(rename = "a2b2")]
    N,
    #[serde(rename = "a2b2g")]
    NGamma,
    #[serde(rename = "g")]
    Gamma,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct GaloisElementAction {
    /// Sign changes of (√μ, √ν).
    pub flips: [i8; 2],
    pub eta: FamilyAction,
    pub sigma: FamilyAction,
    pub tau: FamilyAction,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct GaloisActionModel {
    pub per_element: Vec<GaloisElementAction>,
    pub theta_orbits: Vec<Vec<String>>,
}

impl PresetModel {
    fn catalog_perm(&self, g: &LatticeIsometry) -> Vec<usize> {
        (0..NUM_LINES)
            .map(|j| {
                let img = g.apply_line(self.dict.line_index[j]);
                self.dict.line_index.iter().position(|&x| x == img).unwrap()
            })
            .collect()
    }

    fn galois_elements(&self) -> Vec<([i8; 2], Vec<usize>)> {
        let mut out: Vec<([i8; 2], Vec<usize>)> = vec![([1, 1], (0..NUM_LINES).collect())];
        let gens: Vec<([i8; 2], &Vec<usize>)> = self
            .preset
            .galois_generators()
            .iter()
            .map(|s| [s[0] as i8, s[1] as i8])
            .zip(&self.galois_perms)
            .collect();
        let mut i = 0;
        while i < out.len() {
            for (f, p) in &gens {
                let (f0, p0) = out[i].clone();
                let nf = [f0[0] * f[0], f0[1] * f[1]];
                if !out.iter().any(|(x, _)| *x == nf) {
                    out.push((nf, p0.iter().map(|&j| p[j]).collect()));
                }
            }
            i += 1;
        }
        out
    }

    pub fn galois_model(&self) -> Result<GaloisActionModel, QuarticError> {
        let cands = [
            (FamilyAction::Id, LatticeIsometry::identity()),
            (FamilyAction::N, self.dict.lattice(&Auto::N)),
            (FamilyAction::NGamma, self.dict.lattice(&Auto::N.compose(&Auto::GAMMA))),
            (FamilyAction::Gamma, self.dict.lattice(&Auto::GAMMA)),
        ];
        let cand_perms: Vec<(FamilyAction, Vec<usize>)> = cands.iter().map(|(a, g)| (*a, self.catalog_perm(g))).collect();
        let mut per_element = Vec::new();
        for (flips, perm) in self.galois_elements() {
            let act = |f: LineFamily| -> Result<FamilyAction, QuarticError> {
                cand_perms
                    .iter()
                    .find(|(_, p)| f.range().all(|j| p[j] == perm[j]))
                    .map(|(a, _)| *a)
                    .ok_or_else(|| QuarticError::Degenerate("Galois action outside <a2b2, g>".into()))
            };
            per_element.push(GaloisElementAction { flips, eta: act(LineFamily::Eta)?, sigma: act(LineFamily::Sigma)?, tau: act(LineFamily::Tau)? });
        }
        let theta: Vec<usize> = LineFamily::Theta.range().map(|j| self.dict.line_index[j]).collect();
        let theta_orbits = orbits_under(&self.galois, &theta)
            .into_iter()
            .map(|o| o.iter().map(|&l| catalog_name(self.dict.line_index.iter().position(|&x| x == l).unwrap())).collect())
            .collect();
        Ok(GaloisActionModel { per_element, theta_orbits })
    }
}

pub fn galois_model(preset: &QuarticPreset) -> Result<GaloisActionModel, QuarticError> {
    model(preset)?.galois_model()
}

// ---------------------------------------------------------------- minimality

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Minimality {
    pub rank: usize,
    pub minimal: bool,
    /// η, σ, τ families: every combined orbit is a multiple of -K.
    pub families_minimal: [bool; 3],
}

fn family_minimal(gens: &[LatticeIsometry], dict: &Dictionary, f: LineFamily) -> bool {
    let cls = crate::piclattice::line_classes();
    let pts: Vec<usize> = f.range().map(|j| dict.line_index[j]).collect();
    let minus_k = DivisorClass::canonical().scale(-1);
    orbits_under(gens, &pts).iter().all(|o| {
        let sum = o.iter().fold(DivisorClass([0; 8]), |acc, &l| acc + cls[l]);
        let n = sum.dot(&minus_k);
        n % 2 == 0 && sum == minus_k.scale(n / 2)
    })
}

impl PresetModel {
    fn combined(&self, g: &[Auto]) -> Vec<LatticeIsometry> {
        let mut gens = self.dict.lattice_group(g);
        gens.extend(self.galois.iter().copied());
        gens
    }

    pub fn g_minimality(&self, g: &[Auto]) -> Minimality {
        let gens = self.combined(g);
        let rank = invariant_rank_of(&gens);
        let fams = [LineFamily::Eta, LineFamily::Sigma, LineFamily::Tau].map(|f| family_minimal(&gens, self.dict, f));
        Minimality { rank, minimal: rank == 1, families_minimal: fams }
    }
}

pub fn g_minimality(g: &[Auto], preset: &QuarticPreset) -> Result<Minimality, QuarticError> {
    Ok(model(preset)?.g_minimality(g))
}

// ---------------------------------------------------------------- rationality of X

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct XVerdict {
    pub verdict: Rationality,
    pub rho: usize,
    pub max_k2: i64,
    pub chain: Vec<Vec<String>>,
    /// For q = uvw: the pairs {E, a2b2g(E)} contracted.
    pub pair_chain: Option<PairChain>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct PairChain {
    pub pairs: Vec<[String; 2]>,
    pub k2: i64,
}

impl PresetModel {
    /// Two Galois-stable pairs {E, a2b2g(E)} of disjoint η/σ/τ lines, contracted in turn.
    fn pair_chain(&self) -> Option<PairChain> {
        let cls = crate::piclattice::line_classes();
        let ng = self.dict.lattice(&Auto::N.compose(&Auto::GAMMA));
        let gal = SubgroupClosure::closure(&self.galois, 64).ok()?;
        let mut model = ContractedModel::fresh();
        let mut pairs = Vec::new();
        for f in [LineFamily::Sigma, LineFamily::Tau, LineFamily::Eta] {
            if pairs.len() == 2 {
                break;
            }
            for j in f.range() {
                let e = self.dict.line_index[j];
                let pe = ng.apply_line(e);
                let stable = gal.elements().all(|h| {
                    let x = h.apply_line(e);
                    x == e || x == pe
                });
                if !stable || cls[e].dot(&cls[pe]) != 0 {
                    continue;
                }
                if let Ok(next) = model.contract(&[cls[e], cls[pe]]) {
                    model = next;
                    let pj = self.dict.line_index.iter().position(|&x| x == pe).unwrap();
                    pairs.push([catalog_name(j), catalog_name(pj)]);
                    break;
                }
            }
        }
        (pairs.len() == 2).then(|| PairChain { pairs, k2: model.k_squared() })
    }

    pub fn x_rationality(&self) -> XVerdict {
        let mm = minimal_model_search_gens(&self.galois);
        let rho = invariant_rank_of(&self.galois);
        let pair_chain = if self.preset.q_choice == QChoice::Uvw { self.pair_chain() } else { None };
        let verdict = if mm.max_k2 >= 5 { Rationality::Rational } else { Rationality::NonRational };
        XVerdict { verdict, rho, max_k2: mm.max_k2, chain: mm.contracted_labels(), pair_chain }
    }
}

pub fn x_rationality(preset: &QuarticPreset) -> Result<XVerdict, QuarticError> {
    Ok(model(preset)?.x_rationality())
}

// ---------------------------------------------------------------- fixed points and quotients

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum FixedKind {
    /// (0:0:1:±q√(στη)), the isolated points of a2b2.
    NPoints,
    /// (0:1:0:±w√η), (1:0:0:±w√η).
    Axes,
    /// (±i:1:0:±2v√τ).
    DiagI,
    /// (±1:1:0:±2u√σ).
    Diag,
    /// (0:y:w:0) with y² = ±i wq√(στ).
    YBranch,
    /// (x:0:w:0) with x² = ±i wq√(στ).
    XBranch,
    /// (qτη : ±qτη : z : 0) with z² = ±2i uqτη√(τη).
    DiagBranch(i8),
    /// (qση : ±i qση : z : 0) with z² = ±2i vqση√(ση).
    DiagIBranch(i8),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct FixedPointRecord {
    pub elements: Vec<String>,
    pub order: u32,
    pub invariant_members: String,
    /// Product whose square root the coordinates need, modulo (-x:-y:z:t).
    pub field_condition: String,
    #[serde(skip)]
    kind: FixedKind,
}

pub fn fixed_point_records() -> Vec<FixedPointRecord> {
    use FixedKind::*;
    let r = |els: &[&str], order, members: &str, cond: &str, kind| FixedPointRecord {
        elements: els.iter().map(|s| s.to_string()).collect(),
        order,
        invariant_members: members.into(),
        field_condition: cond.into(),
        kind,
    };
    vec![
        r(&["a3b", "ab3"], 4, "x = 0, y = 0", "sigma*tau*eta", NPoints),
        r(&["a3bg", "ab3g"], 4, "x = 0, y = 0", "eta", Axes),
        r(&["a2d", "b2d"], 4, "x = iy, x = -iy", "sigma*tau*eta", NPoints),
        r(&["a2dg", "b2dg"], 4, "x = iy, x = -iy", "tau", DiagI),
        r(&["abd", "a3b3d"], 4, "x = y, x = -y", "sigma*tau*eta", NPoints),
        r(&["abdg", "a3b3dg"], 4, "x = y, x = -y", "sigma", Diag),
        r(&["a2g"], 2, "x = 0, y = 0", "sigma*tau", YBranch),
        r(&["b2g"], 2, "x = 0, y = 0", "sigma*tau", XBranch),
        r(&["dg"], 2, "x = y, x = -y", "tau*eta", DiagBranch(1)),
        r(&["a2b2dg"], 2, "x = y, x = -y", "tau*eta", DiagBranch(-1)),
        r(&["a3bdg"], 2, "x = iy, x = -iy", "sigma*eta", DiagIBranch(1)),
        r(&["ab3dg"], 2, "x = iy, x = -iy", "sigma*eta", DiagIBranch(-1)),
    ]
}

fn record_for(g: &Auto) -> Option<FixedPointRecord> {
    fixed_point_records().into_iter().find(|r| r.elements.iter().any(|w| w.parse::<Auto>().ok() == Some(*g)))
}

impl FixedKind {
    /// Positions (in `fixed_points` order) grouped by the invariant member of the pencil
    /// λx = μy containing them.
    fn member_groups(self) -> Vec<Vec<usize>> {
        match self {
            FixedKind::NPoints => vec![vec![0, 1]],
            FixedKind::Axes | FixedKind::DiagI | FixedKind::Diag => vec![vec![0, 1], vec![2, 3]],
            _ => vec![vec![0, 1, 2, 3]],
        }
    }
}

impl Numeric {
    fn fixed_points(&self, kind: FixedKind, signs: &[f64; 3]) -> Vec<[Cx; 4]> {
        use FixedKind::*;
        let z = c(0.0, 0.0);
        let one = c(1.0, 0.0);
        let i = Cx::i();
        let rs = self.sqrt_monomial([1, 0, 0], signs);
        let rt = self.sqrt_monomial([0, 1, 0], signs);
        let re = self.sqrt_monomial([0, 0, 1], signs);
        let (s, t, e) = (self.value(0), self.value(1), self.value(2));
        let (u, v, w, q) = (self.u, self.v, self.w, self.q);
        let both = |base: Cx| -> Vec<Cx> {
            let r1 = (i * base).sqrt();
            let r2 = (-i * base).sqrt();
            vec![r1, -r1, r2, -r2]
        };
        match kind {
            NPoints => {
                let t0 = q * self.sqrt_monomial([1, 1, 1], signs);
                vec![[z, z, one, t0], [z, z, one, -t0]]
            }
            Axes => {
                let t0 = w * re;
                vec![[z, one, z, t0], [z, one, z, -t0], [one, z, z, t0], [one, z, z, -t0]]
            }
            DiagI => {
                let t0 = c(2.0, 0.0) * v * rt;
                vec![[i, one, z, t0], [i, one, z, -t0], [-i, one, z, t0], [-i, one, z, -t0]]
            }
            Diag => {
                let t0 = c(2.0, 0.0) * u * rs;
                vec![[one, one, z, t0], [one, one, z, -t0], [-one, one, z, t0], [-one, one, z, -t0]]
            }
            YBranch => both(w * q * rs * rt).into_iter().map(|y| [z, y, w, z]).collect(),
            XBranch => both(w * q * rs * rt).into_iter().map(|x| [x, z, w, z]).collect(),
            DiagBranch(sg) => {
                let x = q * t * e;
                both(c(2.0, 0.0) * u * q * t * e * rt * re).into_iter().map(|zz| [x, x * sg as f64, zz, z]).collect()
            }
            DiagIBranch(sg) => {
                let x = q * s * e;
                both(c(2.0, 0.0) * v * q * s * e * rs * re).into_iter().map(|zz| [x, i * x * sg as f64, zz, z]).collect()
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct QuotientVerdict {
    pub verdict: Rationality,
    pub reason: String,
    pub n_points_swapped: Option<bool>,
    /// For each element outside a2b2: are its fixed points on each invariant member in one orbit.
    pub fused: Vec<ElementFusion>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ElementFusion {
    pub element: Auto,
    pub fused: bool,
}

struct Dsu(Vec<usize>);

impl Dsu {
    fn find(&mut self, x: usize) -> usize {
        let p = self.0[x];
        if p == x {
            return x;
        }
        let r = self.find(p);
        self.0[x] = r;
        r
    }
    fn union(&mut self, a: usize, b: usize) {
        let (a, b) = (self.find(a), self.find(b));
        self.0[a] = b;
    }
}

impl PresetModel {
    pub fn quotient_verdict(&self, gens: &[Auto]) -> Result<QuotientVerdict, QuarticError> {
        let g = auto_closure(gens);
        let verdict = |v, reason: &str| QuotientVerdict { verdict: v, reason: reason.into(), n_points_swapped: None, fused: vec![] };
        if g.len() == 1 {
            return Ok(verdict(self.x_rationality().verdict, "trivial group: the quotient is X"));
        }
        let lat = self.dict.lattice_group(gens);
        let m = self.g_minimality(gens);
        if !m.minimal {
            return Err(QuarticError::NotMinimal(m.rank));
        }
        if g.contains(&Auto::GAMMA) {
            return Ok(verdict(Rationality::Rational, "contains the Geiser involution"));
        }
        if !g.contains(&Auto::N) {
            if g.len() == 2 && element_label(&lat[0]) == Some(ElementLabel::Type(2)) {
                return Ok(verdict(Rationality::NonRational, "type-2 involution: minimal conic bundle quotient"));
            }
            return Err(QuarticError::MissingN);
        }
        // point pool: the N pair first, then each element's fixed points
        let base = [1.0; 3];
        let mut pool: Vec<[Cx; 4]> = self.num.fixed_points(FixedKind::NPoints, &base);
        let mut owners: Vec<(Auto, FixedKind, usize)> = Vec::new();
        for h in g.iter().filter(|h| **h != Auto::ID && **h != Auto::N) {
            let rec = record_for(h).ok_or_else(|| QuarticError::UnsupportedElement(h.to_string()))?;
            owners.push((*h, rec.kind, pool.len()));
            pool.extend(self.num.fixed_points(rec.kind, &base));
        }
        let find = |p: &[Cx; 4], pool: &[[Cx; 4]]| pool.iter().position(|x| same_point(x, p));
        let mut dsu = Dsu((0..pool.len()).collect());
        for h in &g {
            for j in 0..pool.len() {
                let img = h.apply(&pool[j]);
                let k = find(&img, &pool).ok_or_else(|| QuarticError::Degenerate("fixed-point pool not closed under G".into()))?;
                dsu.union(j, k);
            }
        }
        let mut spans: Vec<(FixedKind, usize)> = vec![(FixedKind::NPoints, 0)];
        spans.extend(owners.iter().map(|(_, k, s)| (*k, *s)));
        for signs in self.preset.galois_generators() {
            for (kind, start) in &spans {
                for (off, p) in self.num.fixed_points(*kind, &signs).iter().enumerate() {
                    let k = find(p, &pool).ok_or_else(|| QuarticError::Degenerate("Galois image outside the pool".into()))?;
                    dsu.union(start + off, k);
                }
            }
        }
        let swapped = dsu.find(0) == dsu.find(1);
        let mut fused = Vec::new();
        for (h, kind, start) in &owners {
            let ok = kind.member_groups().iter().all(|grp| {
                let r0 = dsu.find(start + grp[0]);
                grp.iter().all(|&j| dsu.find(start + j) == r0)
            });
            fused.push(ElementFusion { element: *h, fused: ok });
        }
        let all_fused = fused.iter().all(|f| f.fused);
        let (v, reason) = if swapped && all_fused {
            (Rationality::NonRational, "fixed points fused: minimal conic bundle with K^2 = 4")
        } else if !swapped {
            (Rationality::Rational, "isolated points of a2b2 not swapped: K^2 >= 5")
        } else {
            (Rationality::Rational, "fixed points on an invariant member split into several orbits: K^2 >= 5")
        };
        Ok(QuotientVerdict { verdict: v, reason: reason.into(), n_points_swapped: Some(swapped), fused })
    }
}

pub fn quotient_verdict(g: &[Auto], preset: &QuarticPreset) -> Result<QuotientVerdict, QuarticError> {
    model(preset)?.quotient_verdict(g)
}

// ---------------------------------------------------------------- the example matrix

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Table4Column {
    #[serde(rename = "X rat, X/G rat")]
    RatRat,
    #[serde(rename = "X rat, X/G not")]
    RatNot,
    #[serde(rename = "X not, X/G rat")]
    NotRat,
    #[serde(rename = "X not, X/G not")]
    NotNot,
}

impl Table4Column {
    pub const ALL: [Table4Column; 4] = [Table4Column::RatRat, Table4Column::RatNot, Table4Column::NotRat, Table4Column::NotNot];

    pub fn expected(self) -> (Rationality, Rationality) {
        use Rationality::*;
        match self {
            Table4Column::RatRat => (Rational, Rational),
            Table4Column::RatNot => (Rational, NonRational),
            Table4Column::NotRat => (NonRational, Rational),
            Table4Column::NotNot => (NonRational, NonRational),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "source", rename_all = "camelCase")]
pub enum CellSource {
    Quartic { example: u8, group: Vec<Auto> },
    Cubic { example: String, group: String },
}

pub fn row_name(row: u8) -> &'static str {
    crate::classify::CASES[row as usize - 1]
}

/// The cited example for a (row, column) cell, or why the cell cannot be filled.
pub fn table4(row: u8, col: Table4Column) -> Result<CellSource, QuarticError> {
    let ci = Table4Column::ALL.iter().position(|c| *c == col).unwrap();
    let q = |ex: u8, g: &[&str]| CellSource::Quartic { example: ex, group: parse_group(g).expect("valid words") };
    let cub = |ex: &str, g: &str| CellSource::Cubic { example: ex.into(), group: g.into() };
    let cubic_ex = ["6.17", "6.18", "6.16", "6.15"][ci];
    let cell = match row {
        1 if ci < 3 => return Err(QuarticError::Impossible("trivial group with invariant rank 1: X is a minimal surface of degree 2, never rational".into())),
        1 => q(6, &[]),
        2 => [q(5, &["a2b2"]), q(2, &["a2b2"]), q(9, &["a2b2"]), q(6, &["a2b2"])][ci].clone(),
        3 if ci < 3 => return Err(QuarticError::Impossible("type-2 involution: X and X/G are both non-rational".into())),
        3 => q(6, &["a2g"]),
        4 => cub(cubic_ex, "C3"),
        5 => [q(3, &["a2d"]), q(2, &["a3b"]), q(9, &["a3b"]), q(6, &["a3b"])][ci].clone(),
        6 => [q(3, &["a3bg"]), q(2, &["a3bg"]), q(8, &["a3bg"]), q(6, &["a3bg"])][ci].clone(),
        7 => {
            let ex = [2, 5, 6, 8][ci];
            q(ex, &["a2g", "b2g"])
        }
        8 => cub(cubic_ex, "S3"),
        9 => {
            let ex = [2, 4, 6, 7][ci];
            q(ex, &["a3b", "dg"])
        }
        10 => {
            let ex = [1, 2, 9, 6][ci];
            q(ex, &["a3b", "a2d"])
        }
        11 => [q(3, &["a3bg", "a2d"]), q(2, &["a3bg", "a2dg"]), q(7, &["a3b", "a2dg"]), q(6, &["a3bg", "a2d"])][ci].clone(),
        _ => return Err(QuarticError::NoCell(row, ci as u8)),
    };
    Ok(cell)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CellOutcome {
    pub row: u8,
    pub row_name: &'static str,
    pub column: Table4Column,
    pub source: Option<CellSource>,
    pub impossible: Option<String>,
    pub x: Option<Rationality>,
    pub quotient: Option<Rationality>,
    pub invariant_rank: Option<usize>,
    /// Case index of the group's descriptor, when the lattice image is available.
    pub case_index: Option<u8>,
    pub matches: bool,
    pub error: Option<String>,
}

pub fn evaluate_cell(row: u8, col: Table4Column) -> CellOutcome {
    let mut out = CellOutcome {
        row,
        row_name: row_name(row),
        column: col,
        source: None,
        impossible: None,
        x: None,
        quotient: None,
        invariant_rank: None,
        case_index: None,
        matches: false,
        error: None,
    };
    let src = match table4(row, col) {
        Ok(s) => s,
        Err(QuarticError::Impossible(r)) => {
            out.impossible = Some(r);
            out.matches = true;
            return out;
        }
        Err(e) => {
            out.error = Some(e.to_string());
            return out;
        }
    };
    out.source = Some(src.clone());
    let res: Result<(), String> = (|| {
        match &src {
            CellSource::Quartic { example, group } => {
                let m = model(&example_preset(*example).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
                let lat = m.dict.lattice_group(group);
                let closure = SubgroupClosure::closure(&lat, 64).map_err(|e| e.to_string())?;
                if let Ok(v) = proposition_dp2(&describe_group(&closure)) {
                    if let VerdictKind::PotentiallyNonRational(k) = v.kind {
                        out.case_index = Some(k);
                    }
                }
                out.invariant_rank = Some(m.g_minimality(group).rank);
                out.x = Some(m.x_rationality().verdict);
                out.quotient = Some(m.quotient_verdict(group).map_err(|e| e.to_string())?.verdict);
            }
            CellSource::Cubic { example, group } => {
                let p = family_cubic::example(example).map_err(|e| e.to_string())?;
                let r = family_cubic::report(&p).map_err(|e| e.to_string())?;
                out.invariant_rank = r.gamma.as_ref().map(|g| g.invariant_rank_with_ab);
                out.case_index = Some(if group == "C3" { 4 } else { 8 });
                out.x = Some(r.x_rational);
                out.quotient = Some(if group == "C3" { r.c3_quotient } else { r.s3_quotient });
            }
        }
        Ok(())
    })();
    if let Err(e) = res {
        out.error = Some(e);
        return out;
    }
    out.matches = (out.x, out.quotient) == {
        let (a, b) = col.expected();
        (Some(a), Some(b))
    } && out.invariant_rank == Some(1)
        && out.case_index == Some(row);
    out
}

pub fn table4_matrix() -> Vec<CellOutcome> {
    (1..=11u8).flat_map(|r| Table4Column::ALL.iter().map(move |&c| evaluate_cell(r, c))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn words_and_group() {
        let a3b: Auto = "a3b".parse().unwrap();
        assert_eq!(a3b.order(), 4);
        assert_eq!(a3b.compose(&a3b), Auto::N);
        assert_eq!("α³βγ".parse::<Auto>().unwrap().to_string(), "a3bg");
        assert!("a".parse::<Auto>().is_err());
        let all = auto_closure(&[Auto::AB, Auto::AB3, Auto::DELTA, Auto::GAMMA]);
        assert_eq!(all.len(), 32);
        for g in &all {
            let [p, r, d, gg] = g.generator_exponents();
            let back = [Auto::AB.pow_(p), Auto::AB3.pow_(r), Auto::DELTA.pow_(d), Auto::GAMMA.pow_(gg)]
                .iter()
                .fold(Auto::ID, |acc, x| acc.compose(x));
            assert_eq!(back, *g);
        }
    }

    impl Auto {
        fn pow_(&self, n: u8) -> Auto {
            (0..n).fold(Auto::ID, |acc, _| acc.compose(self))
        }
    }

    #[test]
    fn lines_lie_on_surface() {
        for q in QChoice::ALL {
            let num = Numeric::new([1, 2, 4], q);
            let lines = num.lines(&[1.0; 3]);
            for l in &lines {
                for p in l.samples() {
                    assert!(num.surface(&p).norm() < 1e-8 * (1.0 + p[3].norm_sqr()));
                }
            }
        }
    }

    #[test]
    fn family_sizes_and_catalog() {
        let cat = catalog();
        assert_eq!(cat.len(), 56);
        let count = |f| cat.iter().filter(|l| l.family == f).count();
        assert_eq!([LineFamily::Theta, LineFamily::Eta, LineFamily::Sigma, LineFamily::Tau].map(count), [8, 16, 16, 16]);
        let mut under: Vec<&String> = cat.iter().map(|l| &l.underlying_line).collect();
        under.sort();
        under.dedup();
        assert_eq!(under.len(), 56);
    }

    #[test]
    fn n_action_on_families() {
        let cls = crate::piclattice::line_classes();
        for q in QChoice::ALL {
            let d = dictionary(q);
            let n = d.lattice(&Auto::N);
            for j in 0..NUM_LINES {
                let l = d.line_index[j];
                if LineFamily::of(j) == LineFamily::Theta {
                    assert_eq!(n.apply_line(l), l);
                } else {
                    assert_eq!(cls[l].dot(&cls[n.apply_line(l)]), 1);
                }
            }
            assert_eq!(d.lattice(&Auto::GAMMA), LatticeIsometry::geiser());
            let all = SubgroupClosure::closure(&d.generators, 100).unwrap();
            assert_eq!(all.order(), 32);
        }
    }

    #[test]
    fn lattice_matches_group_words() {
        let d = dictionary(QChoice::Uvw);
        let all = auto_closure(&[Auto::AB, Auto::AB3, Auto::DELTA, Auto::GAMMA]);
        for g in &all {
            for h in &all {
                assert_eq!(d.lattice(&g.compose(h)), d.lattice(g).compose(&d.lattice(h)));
            }
        }
    }

    #[test]
    fn pinned_dictionary() {
        let pinned: serde_json::Value = serde_json::from_str(PINNED_DICTIONARY).unwrap();
        assert_eq!(serde_json::to_value(dictionary_certificate()).unwrap(), pinned);
    }

    #[test]
    #[ignore]
    fn regenerate_dictionary() {
        let s = serde_json::to_string_pretty(&dictionary_certificate()).unwrap();
        std::fs::write(concat!(env!("CARGO_MANIFEST_DIR"), "/data/quartic_dictionary.json"), s + "\n").unwrap();
    }

    #[test]
    fn fixed_point_records_are_fixed() {
        let num = Numeric::new([1, 2, 4], QChoice::Uvw);
        let d = dictionary(QChoice::Uvw);
        for rec in fixed_point_records() {
            let pts = num.fixed_points(rec.kind, &[1.0; 3]);
            for w in &rec.elements {
                let g: Auto = w.parse().unwrap();
                assert_eq!(g.order(), rec.order, "{w}");
                for p in &pts {
                    assert!(num.surface(p).norm() < 1e-8 * (1.0 + p[3].norm_sqr()), "{w} point off the surface");
                    assert!(same_point(&g.apply(p), p), "{w} does not fix its point");
                }
                for (a, p) in pts.iter().enumerate() {
                    assert!(pts[a + 1..].iter().all(|x| !same_point(x, p)));
                }
                // Lefschetz: isolated fixed points = 2 + trace on Pic
                assert_eq!(pts.len() as i64, 2 + d.lattice(&g).trace(), "{w}");
            }
        }
        // N: the same count plus a fixed elliptic curve
        assert_eq!(d.lattice(&Auto::N).trace(), 0);
    }

    #[test]
    fn galois_models() {
        use FamilyAction::*;
        let one = |n| galois_model(&example_preset(n).unwrap()).unwrap();
        let m = one(1);
        assert_eq!(m.per_element.len(), 1);
        assert_eq!(m.theta_orbits.len(), 8);
        // q = uvw, all classes mu: every family moved by a2b2g
        let m = one(2);
        let g = &m.per_element[1];
        assert_eq!((g.eta, g.sigma, g.tau), (NGamma, NGamma, NGamma));
        // sigma = tau = 1, eta = mu, q = uvw sigma tau eta
        let m = one(7);
        let g = &m.per_element[1];
        assert_eq!((g.eta, g.sigma, g.tau), (Gamma, N, N));
        // all three families: Galois inside <a2b2, g>
        for n in 1..=9 {
            assert!(!one(n).per_element.is_empty());
        }
    }

    #[test]
    fn minimality_examples() {
        let m = model(&example_preset(1).unwrap()).unwrap();
        let q8 = parse_group(&["a3b", "a2d"]).unwrap();
        assert_eq!(m.g_minimality(&q8).rank, 1);
        assert_eq!(m.g_minimality(&[]).rank, 8);
        let m = model(&example_preset(9).unwrap()).unwrap();
        for g in [vec!["a2b2"], vec!["a3b"], vec!["a3b", "a2d"]] {
            let g = parse_group(&g).unwrap();
            let r = m.g_minimality(&g);
            assert_eq!(r.rank, 1);
            assert!(r.families_minimal.iter().all(|x| *x));
        }
        assert_eq!(m.x_rationality().rho, 1);
    }

    #[test]
    fn x_verdicts() {
        for n in 1..=5 {
            let v = x_rationality(&example_preset(n).unwrap()).unwrap();
            assert_eq!(v.verdict, Rationality::Rational, "preset {n}");
            let c = v.pair_chain.unwrap();
            assert_eq!((c.pairs.len(), c.k2), (2, 6));
        }
        let v = x_rationality(&example_preset(7).unwrap()).unwrap();
        assert_eq!((v.verdict, v.max_k2), (Rationality::NonRational, 4));
        let v = x_rationality(&example_preset(6).unwrap()).unwrap();
        assert_eq!((v.verdict, v.rho), (Rationality::NonRational, 1));
    }

    #[test]
    fn quotient_examples() {
        let qv = |n, g: &[&str]| quotient_verdict(&parse_group(g).unwrap(), &example_preset(n).unwrap()).unwrap().verdict;
        assert_eq!(qv(2, &["a3b"]), Rationality::NonRational);
        assert_eq!(qv(2, &["a3b", "dg"]), Rationality::Rational);
        assert_eq!(qv(3, &["a3bg"]), Rationality::Rational);
    }

    #[test]
    fn impossible_cells() {
        assert!(matches!(table4(1, Table4Column::RatRat), Err(QuarticError::Impossible(_))));
        assert_eq!(table4(9, Table4Column::RatNot).unwrap(), CellSource::Quartic { example: 4, group: parse_group(&["a3b", "dg"]).unwrap() });
        assert_eq!(table4(10, Table4Column::RatRat).unwrap(), CellSource::Quartic { example: 1, group: parse_group(&["a3b", "a2d"]).unwrap() });
    }
}

//! Quadratic and symplectic spaces over local fields, and Witt towers.
//!
//! Real quadratic spaces are classified by their signature, complex ones by
//! dimension. Non-archimedean quadratic spaces are carried abstractly: the
//! parity of the dimension, the discriminant character (trivial or not), the
//! Witt tower within that class (`+` or `-`) and the Witt rank. The
//! anisotropic kernel of each tower has the dimension
//!
//! | parity | character  | `+` | `-` |
//! |--------|------------|-----|-----|
//! | even   | trivial    | 0   | 4   |
//! | even   | nontrivial | 2   | 2   |
//! | odd    | any        | 1   | 3   |
//!
//! The `+`/`-` labels are case dependent (split/quaternionic for even
//! dimension and trivial character, the two anisotropic planes otherwise), so
//! they are preserved as given rather than normalised to one invariant.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::ThetaError;
use crate::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Field {
    Real,
    Complex,
    NonArch,
}

impl Field {
    pub fn code(self) -> &'static str {
        match self {
            Field::Real => "R",
            Field::Complex => "C",
            Field::NonArch => "NA",
        }
    }

    pub fn from_code(code: &str) -> Result<Field> {
        match code {
            "R" => Ok(Field::Real),
            "C" => Ok(Field::Complex),
            "NA" => Ok(Field::NonArch),
            other => Err(ThetaError::InvalidInput(format!("unknown field '{other}' (expected R, C or NA)"))),
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

/// Parity ε of the dimension of a quadratic space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn of(n: i64) -> Parity {
        if n.rem_euclid(2) == 0 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn bit(self) -> u8 {
        match self {
            Parity::Even => 0,
            Parity::Odd => 1,
        }
    }

    pub fn from_bit(bit: u8) -> Result<Parity> {
        match bit {
            0 => Ok(Parity::Even),
            1 => Ok(Parity::Odd),
            other => Err(ThetaError::InvalidInput(format!("eps must be 0 or 1, got {other}"))),
        }
    }
}

/// Whether the discriminant character is the trivial character.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DiscChar {
    Trivial,
    Nontrivial,
}

impl DiscChar {
    pub fn code(self) -> &'static str {
        match self {
            DiscChar::Trivial => "triv",
            DiscChar::Nontrivial => "nontriv",
        }
    }

    pub fn from_code(code: &str) -> Result<DiscChar> {
        match code {
            "triv" => Ok(DiscChar::Trivial),
            "nontriv" => Ok(DiscChar::Nontrivial),
            other => Err(ThetaError::InvalidInput(format!("unknown character '{other}' (expected triv or nontriv)"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TowerSign {
    Plus,
    Minus,
}

impl TowerSign {
    pub fn code(self) -> &'static str {
        match self {
            TowerSign::Plus => "+",
            TowerSign::Minus => "-",
        }
    }

    pub fn from_code(code: &str) -> Result<TowerSign> {
        match code {
            "+" => Ok(TowerSign::Plus),
            "-" => Ok(TowerSign::Minus),
            other => Err(ThetaError::InvalidInput(format!("unknown tower sign '{other}' (expected + or -)"))),
        }
    }

    pub fn flip(self) -> TowerSign {
        match self {
            TowerSign::Plus => TowerSign::Minus,
            TowerSign::Minus => TowerSign::Plus,
        }
    }
}

/// Dimension of the anisotropic kernel of a non-archimedean Witt tower.
pub fn nonarch_kernel_dim(eps: Parity, chi: DiscChar, sign: TowerSign) -> u32 {
    match (eps, chi, sign) {
        (Parity::Even, DiscChar::Trivial, TowerSign::Plus) => 0,
        (Parity::Even, DiscChar::Trivial, TowerSign::Minus) => 4,
        (Parity::Even, DiscChar::Nontrivial, _) => 2,
        (Parity::Odd, _, TowerSign::Plus) => 1,
        (Parity::Odd, _, TowerSign::Minus) => 3,
    }
}

/// A non-degenerate formed space. Dimension zero is allowed everywhere.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FormedSpace {
    RealQuadratic { p: u32, q: u32 },
    ComplexQuadratic { dim: u32 },
    NonArchQuadratic { eps: Parity, chi: DiscChar, sign: TowerSign, witt_rank: u32 },
    Symplectic { field: Field, dim: u32 },
}

impl FormedSpace {
    pub fn real(p: u32, q: u32) -> FormedSpace {
        FormedSpace::RealQuadratic { p, q }
    }

    pub fn complex(dim: u32) -> FormedSpace {
        FormedSpace::ComplexQuadratic { dim }
    }

    pub fn nonarch(eps: Parity, chi: DiscChar, sign: TowerSign, witt_rank: u32) -> FormedSpace {
        FormedSpace::NonArchQuadratic { eps, chi, sign, witt_rank }
    }

    /// Symplectic space; the dimension must be even.
    pub fn symplectic(field: Field, dim: u32) -> Result<FormedSpace> {
        if !dim.is_multiple_of(2) {
            return Err(ThetaError::InvalidInput(format!("symplectic dimension must be even, got {dim}")));
        }
        Ok(FormedSpace::Symplectic { field, dim })
    }

    pub fn field(&self) -> Field {
        match self {
            FormedSpace::RealQuadratic { .. } => Field::Real,
            FormedSpace::ComplexQuadratic { .. } => Field::Complex,
            FormedSpace::NonArchQuadratic { .. } => Field::NonArch,
            FormedSpace::Symplectic { field, .. } => *field,
        }
    }

    pub fn is_quadratic(&self) -> bool {
        !matches!(self, FormedSpace::Symplectic { .. })
    }

    pub fn dim(&self) -> u32 {
        match *self {
            FormedSpace::RealQuadratic { p, q } => p + q,
            FormedSpace::ComplexQuadratic { dim } => dim,
            FormedSpace::NonArchQuadratic { eps, chi, sign, witt_rank } => {
                nonarch_kernel_dim(eps, chi, sign) + 2 * witt_rank
            }
            FormedSpace::Symplectic { dim, .. } => dim,
        }
    }

    /// Dimension of a maximal totally isotropic subspace.
    pub fn witt_index(&self) -> u32 {
        match *self {
            FormedSpace::RealQuadratic { p, q } => p.min(q),
            FormedSpace::ComplexQuadratic { dim } => dim / 2,
            FormedSpace::NonArchQuadratic { witt_rank, .. } => witt_rank,
            FormedSpace::Symplectic { dim, .. } => dim / 2,
        }
    }

    /// The space with its form scaled by -1 (real quadratic spaces only change).
    pub fn negated(&self) -> FormedSpace {
        match *self {
            FormedSpace::RealQuadratic { p, q } => FormedSpace::RealQuadratic { p: q, q: p },
            other => other,
        }
    }

    fn expect_real(&self) -> Result<(u32, u32)> {
        match *self {
            FormedSpace::RealQuadratic { p, q } => Ok((p, q)),
            other => {
                Err(ThetaError::KindMismatch { expected: "a real quadratic space".into(), got: other.to_string() })
            }
        }
    }

    /// `α ≡ p − q (mod 4)` and whether the discriminant character `χ_α` is
    /// trivial on `ℝ^×`.
    ///
    /// `χ_α(x) = (x, (−1)^{α(α−1)/2})_2`; over ℝ the Hilbert symbol `(x, y)_2`
    /// is `−1` exactly when `x < 0` and `y < 0`, so `χ_α` is the sign character
    /// iff `(−1)^{α(α−1)/2} = −1`.
    pub fn discriminant_alpha(&self) -> Result<Discriminant> {
        let (p, q) = self.expect_real()?;
        let alpha = (p as i64 - q as i64).rem_euclid(4) as u8;
        let exponent = (alpha as u32 * (alpha as u32).saturating_sub(1)) / 2;
        let y: i64 = if exponent.is_multiple_of(2) { 1 } else { -1 };
        let character = if real_hilbert_symbol(-1, y) == 1 { DiscChar::Trivial } else { DiscChar::Nontrivial };
        Ok(Discriminant { alpha, character })
    }

    /// The Witt tower containing a quadratic space.
    pub fn tower(&self) -> Result<WittTower> {
        match *self {
            FormedSpace::RealQuadratic { p, q } => Ok(WittTower::Real { k: p as i64 - q as i64 }),
            FormedSpace::ComplexQuadratic { dim } => Ok(WittTower::Complex { eps: Parity::of(dim as i64) }),
            FormedSpace::NonArchQuadratic { eps, chi, sign, .. } => Ok(WittTower::NonArch { eps, chi, sign }),
            FormedSpace::Symplectic { .. } => {
                Err(ThetaError::KindMismatch { expected: "a quadratic space".into(), got: self.to_string() })
            }
        }
    }

    /// `witt_index(V) ≥ (dim V − 2)/2`.
    pub fn quasi_split(&self) -> Result<bool> {
        if !self.is_quadratic() {
            return Err(ThetaError::KindMismatch { expected: "a quadratic space".into(), got: self.to_string() });
        }
        Ok(2 * self.witt_index() as i64 >= self.dim() as i64 - 2)
    }
}

impl fmt::Display for FormedSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            FormedSpace::RealQuadratic { p, q } => write!(f, "R^{{{p},{q}}}"),
            FormedSpace::ComplexQuadratic { dim } => write!(f, "C^{dim}"),
            FormedSpace::NonArchQuadratic { eps, chi, sign, witt_rank } => {
                write!(f, "NA(eps={}, chi={}, t{}, r={})", eps.bit(), chi.code(), sign.code(), witt_rank)
            }
            FormedSpace::Symplectic { field, dim } => write!(f, "Sp-space({field}, dim {dim})"),
        }
    }
}

/// The quadratic Hilbert symbol over ℝ.
pub fn real_hilbert_symbol(x: i64, y: i64) -> i8 {
    if x < 0 && y < 0 {
        -1
    } else {
        1
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Discriminant {
    pub alpha: u8,
    #[serde(with = "disc_char_code")]
    pub character: DiscChar,
}

mod disc_char_code {
    use super::DiscChar;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(c: &DiscChar, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(c.code())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<DiscChar, D::Error> {
        let code = String::deserialize(d)?;
        DiscChar::from_code(&code).map_err(serde::de::Error::custom)
    }
}

/// A Witt tower: the quadratic spaces `V₍₀₎ ⊕ V_{r,r}` sharing an anisotropic
/// kernel `V₍₀₎`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum WittTower {
    /// `t^{(k)} = { ℝ^{p,q} : p − q = k }`.
    Real {
        k: i64,
    },
    Complex {
        eps: Parity,
    },
    NonArch {
        eps: Parity,
        chi: DiscChar,
        sign: TowerSign,
    },
}

impl WittTower {
    pub fn field(&self) -> Field {
        match self {
            WittTower::Real { .. } => Field::Real,
            WittTower::Complex { .. } => Field::Complex,
            WittTower::NonArch { .. } => Field::NonArch,
        }
    }

    pub fn parity(&self) -> Parity {
        match *self {
            WittTower::Real { k } => Parity::of(k),
            WittTower::Complex { eps } | WittTower::NonArch { eps, .. } => eps,
        }
    }

    pub fn kernel_dim(&self) -> u32 {
        match *self {
            WittTower::Real { k } => k.unsigned_abs() as u32,
            WittTower::Complex { eps } => eps.bit() as u32,
            WittTower::NonArch { eps, chi, sign } => nonarch_kernel_dim(eps, chi, sign),
        }
    }

    /// `α ≡ k (mod 4)` for real towers.
    pub fn alpha(&self) -> Option<u8> {
        match *self {
            WittTower::Real { k } => Some(k.rem_euclid(4) as u8),
            _ => None,
        }
    }

    /// The member of Witt index `r` (anisotropic kernel ⊕ `r` hyperbolic planes).
    pub fn space_at(&self, r: i64) -> Result<FormedSpace> {
        if r < 0 {
            return Err(ThetaError::NegativeRank(r));
        }
        let r = r as u32;
        Ok(match *self {
            WittTower::Real { k } if k >= 0 => FormedSpace::real(k as u32 + r, r),
            WittTower::Real { k } => FormedSpace::real(r, (-k) as u32 + r),
            WittTower::Complex { eps } => FormedSpace::complex(eps.bit() as u32 + 2 * r),
            WittTower::NonArch { eps, chi, sign } => FormedSpace::nonarch(eps, chi, sign, r),
        })
    }

    /// Whether `dim` is the dimension of some member of the tower.
    pub fn on_progression(&self, dim: u32) -> bool {
        let kernel = self.kernel_dim();
        dim >= kernel && (dim - kernel).is_multiple_of(2)
    }

    fn family_key(&self) -> (Field, Parity, Option<u8>, Option<DiscChar>) {
        match *self {
            WittTower::Real { k } => (Field::Real, Parity::of(k), Some(k.rem_euclid(4) as u8), None),
            WittTower::Complex { eps } => (Field::Complex, eps, None, None),
            WittTower::NonArch { eps, chi, .. } => (Field::NonArch, eps, None, Some(chi)),
        }
    }

    /// Whether both towers lie in the same class `𝒯_{ε,χ}` (`𝒯_{ε,α}` over ℝ).
    pub fn same_family(&self, other: &WittTower) -> bool {
        self.family_key() == other.family_key()
    }
}

impl fmt::Display for WittTower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            WittTower::Real { k } => write!(f, "t^({k})"),
            WittTower::Complex { eps } => write!(f, "t_{}", eps.bit()),
            WittTower::NonArch { eps, chi, sign } => {
                write!(f, "t{}[eps={},chi={}]", sign.code(), eps.bit(), chi.code())
            }
        }
    }
}

/// Adjacency of two distinct towers in one class.
///
/// Over ℝ, `t^{(k)}` and `t^{(l)}` are adjacent iff `|k − l| = 4`; the two
/// non-archimedean towers of a class are always adjacent. A tower is never
/// adjacent to itself.
pub fn adjacent(t1: &WittTower, t2: &WittTower) -> Result<bool> {
    if !t1.same_family(t2) {
        return Err(ThetaError::FamilyMismatch(t1.to_string(), t2.to_string()));
    }
    if t1 == t2 {
        return Ok(false);
    }
    Ok(match (t1, t2) {
        (WittTower::Real { k }, WittTower::Real { k: l }) => (k - l).abs() == 4,
        (WittTower::NonArch { .. }, WittTower::NonArch { .. }) => true,
        _ => false,
    })
}

/// Selects one class `𝒯_{ε,χ}` of towers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TowerClass {
    /// Over ℝ the character is indexed by `α ∈ ℤ/4` with `α ≡ ε (mod 2)`.
    Real {
        alpha: u8,
    },
    Complex,
    NonArch {
        chi: DiscChar,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TowerCount {
    Finite(usize),
    Infinite,
}

/// The towers of one class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TowerFamily {
    Finite(Vec<WittTower>),
    Real(RealTowers),
}

impl TowerFamily {
    pub fn count(&self) -> TowerCount {
        match self {
            TowerFamily::Finite(v) => TowerCount::Finite(v.len()),
            TowerFamily::Real(_) => TowerCount::Infinite,
        }
    }
}

/// The real towers `t^{(k)}` with `k ≡ α (mod 4)`, ordered by `|k|` with the
/// positive index first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RealTowers {
    alpha: u8,
    next_abs: i64,
    pending_negative: Option<i64>,
}

impl RealTowers {
    pub fn new(alpha: u8) -> RealTowers {
        RealTowers { alpha: alpha % 4, next_abs: 0, pending_negative: None }
    }

    pub fn alpha(&self) -> u8 {
        self.alpha
    }

    /// All towers of the class with `|k| ≤ max_abs`.
    pub fn up_to(alpha: u8, max_abs: u32) -> Vec<WittTower> {
        RealTowers::new(alpha)
            .take_while(|t| matches!(t, WittTower::Real { k } if k.unsigned_abs() <= max_abs as u64))
            .collect()
    }
}

impl Iterator for RealTowers {
    type Item = WittTower;

    fn next(&mut self) -> Option<WittTower> {
        if let Some(k) = self.pending_negative.take() {
            return Some(WittTower::Real { k });
        }
        loop {
            let a = self.next_abs;
            self.next_abs += 1;
            let pos = a.rem_euclid(4) == self.alpha as i64;
            let neg = a != 0 && (-a).rem_euclid(4) == self.alpha as i64;
            match (pos, neg) {
                (true, true) => {
                    self.pending_negative = Some(-a);
                    return Some(WittTower::Real { k: a });
                }
                (true, false) => return Some(WittTower::Real { k: a }),
                (false, true) => return Some(WittTower::Real { k: -a }),
                (false, false) => continue,
            }
        }
    }
}

/// The towers of `𝒯_{ε,χ}`: two over a non-archimedean field, one over ℂ,
/// infinitely many over ℝ.
pub fn enumerate_towers(eps: Parity, class: TowerClass) -> Result<TowerFamily> {
    match class {
        TowerClass::Real { alpha } => {
            if alpha > 3 {
                return Err(ThetaError::InvalidInput(format!("alpha must lie in 0..4, got {alpha}")));
            }
            if Parity::of(alpha as i64) != eps {
                return Err(ThetaError::InvalidInput(format!(
                    "alpha = {alpha} does not have parity eps = {}",
                    eps.bit()
                )));
            }
            Ok(TowerFamily::Real(RealTowers::new(alpha)))
        }
        TowerClass::Complex => Ok(TowerFamily::Finite(vec![WittTower::Complex { eps }])),
        TowerClass::NonArch { chi } => Ok(TowerFamily::Finite(vec![
            WittTower::NonArch { eps, chi, sign: TowerSign::Plus },
            WittTower::NonArch { eps, chi, sign: TowerSign::Minus },
        ])),
    }
}

/// Witt index of `V₁ ⊕ V₂⁻` for real quadratic spaces, compared against the
/// bound `(dim V₁ + dim V₂ − 4)/2` that holds for distinct towers of one class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct DifferenceWitt {
    pub index: u32,
    /// `(dim V₁ + dim V₂ − 4)/2`, when non-negative and integral.
    pub srank_bound: Option<u32>,
    pub attains_bound: bool,
    pub same_tower: bool,
    /// Present when the towers differ but lie in one class.
    pub adjacent: Option<bool>,
}

pub fn difference_witt_index(v1: &FormedSpace, v2: &FormedSpace) -> Result<DifferenceWitt> {
    let (p1, q1) = v1.expect_real()?;
    let (p2, q2) = v2.expect_real()?;
    let index = (p1 + q2).min(q1 + p2);
    let total = p1 + q1 + p2 + q2;
    let srank_bound = (total >= 4 && total % 2 == 0).then(|| (total - 4) / 2);
    let t1 = v1.tower()?;
    let t2 = v2.tower()?;
    let same_tower = t1 == t2;
    let adjacent = (!same_tower && t1.same_family(&t2)).then(|| adjacent(&t1, &t2)).transpose()?;
    Ok(DifferenceWitt { index, srank_bound, attains_bound: srank_bound == Some(index), same_tower, adjacent })
}

/// Whether two quadratic spaces lie in the same Witt tower.
pub fn same_tower(v1: &FormedSpace, v2: &FormedSpace) -> Result<bool> {
    Ok(v1.tower()? == v2.tower()?)
}

// JSON encoding: {"field":"R|C|NA","kind":"quad|symp","p","q","dim","eps","chi","sign","r"}

#[derive(Serialize, Deserialize, Default)]
struct RawSpace {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    field: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    kind: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    p: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    q: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    dim: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    eps: Option<u8>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    chi: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    sign: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    r: Option<u32>,
}

impl TryFrom<RawSpace> for FormedSpace {
    type Error = ThetaError;

    fn try_from(raw: RawSpace) -> Result<FormedSpace> {
        let field = Field::from_code(raw.field.as_deref().unwrap_or("R"))?;
        let kind = raw.kind.as_deref().unwrap_or("quad");
        match kind {
            "symp" => FormedSpace::symplectic(field, raw.dim.unwrap_or(0)),
            "quad" => match field {
                Field::Real => {
                    let (p, q) = match (raw.p, raw.q, raw.dim) {
                        (None, None, Some(d)) => (d, 0),
                        (p, q, _) => (p.unwrap_or(0), q.unwrap_or(0)),
                    };
                    Ok(FormedSpace::real(p, q))
                }
                Field::Complex => Ok(FormedSpace::complex(raw.dim.unwrap_or(0))),
                Field::NonArch => Ok(FormedSpace::nonarch(
                    Parity::from_bit(raw.eps.unwrap_or(0))?,
                    DiscChar::from_code(raw.chi.as_deref().unwrap_or("triv"))?,
                    TowerSign::from_code(raw.sign.as_deref().unwrap_or("+"))?,
                    raw.r.unwrap_or(0),
                )),
            },
            other => Err(ThetaError::InvalidInput(format!("unknown kind '{other}' (expected quad or symp)"))),
        }
    }
}

impl From<&FormedSpace> for RawSpace {
    fn from(v: &FormedSpace) -> RawSpace {
        let mut raw = RawSpace {
            field: Some(v.field().code().to_string()),
            kind: Some(if v.is_quadratic() { "quad" } else { "symp" }.to_string()),
            ..RawSpace::default()
        };
        match *v {
            FormedSpace::RealQuadratic { p, q } => {
                raw.p = Some(p);
                raw.q = Some(q);
            }
            FormedSpace::ComplexQuadratic { dim } | FormedSpace::Symplectic { dim, .. } => raw.dim = Some(dim),
            FormedSpace::NonArchQuadratic { eps, chi, sign, witt_rank } => {
                raw.eps = Some(eps.bit());
                raw.chi = Some(chi.code().to_string());
                raw.sign = Some(sign.code().to_string());
                raw.r = Some(witt_rank);
            }
        }
        raw
    }
}

impl Serialize for FormedSpace {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        RawSpace::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for FormedSpace {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = RawSpace::deserialize(d)?;
        FormedSpace::try_from(raw).map_err(serde::de::Error::custom)
    }
}

#[derive(Serialize, Deserialize, Default)]
struct RawTower {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    field: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    k: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    eps: Option<u8>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    chi: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    sign: Option<String>,
}

impl Serialize for WittTower {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let raw = match *self {
            WittTower::Real { k } => RawTower { field: Some("R".into()), k: Some(k), ..RawTower::default() },
            WittTower::Complex { eps } => {
                RawTower { field: Some("C".into()), eps: Some(eps.bit()), ..RawTower::default() }
            }
            WittTower::NonArch { eps, chi, sign } => RawTower {
                field: Some("NA".into()),
                eps: Some(eps.bit()),
                chi: Some(chi.code().into()),
                sign: Some(sign.code().into()),
                k: None,
            },
        };
        raw.serialize(s)
    }
}

impl<'de> Deserialize<'de> for WittTower {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = RawTower::deserialize(d)?;
        let field = match (&raw.field, raw.k, &raw.sign) {
            (Some(f), _, _) => Field::from_code(f),
            (None, Some(_), _) => Ok(Field::Real),
            (None, None, Some(_)) => Ok(Field::NonArch),
            (None, None, None) => Ok(Field::Complex),
        }
        .map_err(serde::de::Error::custom)?;
        let eps = || Parity::from_bit(raw.eps.unwrap_or(0)).map_err(serde::de::Error::custom);
        Ok(match field {
            Field::Real => WittTower::Real { k: raw.k.ok_or_else(|| serde::de::Error::custom("real tower needs k"))? },
            Field::Complex => WittTower::Complex { eps: eps()? },
            Field::NonArch => WittTower::NonArch {
                eps: eps()?,
                chi: DiscChar::from_code(raw.chi.as_deref().unwrap_or("triv")).map_err(serde::de::Error::custom)?,
                sign: TowerSign::from_code(raw.sign.as_deref().unwrap_or("+")).map_err(serde::de::Error::custom)?,
            },
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn witt_indices() {
        assert_eq!(FormedSpace::real(3, 1).witt_index(), 1);
        assert_eq!(FormedSpace::real(0, 0).witt_index(), 0);
        let quat = FormedSpace::nonarch(Parity::Even, DiscChar::Trivial, TowerSign::Minus, 2);
        assert_eq!(quat.witt_index(), 2);
        assert_eq!(quat.dim(), 8);
        assert_eq!(FormedSpace::complex(7).witt_index(), 3);
        assert_eq!(FormedSpace::symplectic(Field::Real, 6).unwrap().witt_index(), 3);
    }

    #[test]
    fn odd_symplectic_dimension_rejected() {
        assert!(FormedSpace::symplectic(Field::Real, 3).is_err());
    }

    #[test]
    fn discriminant_characters() {
        let d = FormedSpace::real(3, 1).discriminant_alpha().unwrap();
        assert_eq!((d.alpha, d.character), (2, DiscChar::Nontrivial));
        let d = FormedSpace::real(0, 0).discriminant_alpha().unwrap();
        assert_eq!((d.alpha, d.character), (0, DiscChar::Trivial));
        let d = FormedSpace::real(2, 5).discriminant_alpha().unwrap();
        assert_eq!((d.alpha, d.character), (1, DiscChar::Trivial));
        let d = FormedSpace::real(3, 0).discriminant_alpha().unwrap();
        assert_eq!((d.alpha, d.character), (3, DiscChar::Nontrivial));
        assert!(FormedSpace::complex(3).discriminant_alpha().is_err());
    }

    #[test]
    fn towers_and_members() {
        assert_eq!(FormedSpace::real(4, 2).tower().unwrap(), WittTower::Real { k: 2 });
        assert_eq!(WittTower::Real { k: -2 }.space_at(1).unwrap(), FormedSpace::real(1, 3));
        let t = WittTower::NonArch { eps: Parity::Odd, chi: DiscChar::Trivial, sign: TowerSign::Minus };
        let v = t.space_at(0).unwrap();
        assert_eq!(v.dim(), 3);
        assert_eq!(v.witt_index(), 0);
        assert_eq!(WittTower::Real { k: 0 }.space_at(-1), Err(ThetaError::NegativeRank(-1)));
        assert!(FormedSpace::symplectic(Field::Real, 2).unwrap().tower().is_err());
    }

    #[test]
    fn tower_counts() {
        let na = enumerate_towers(Parity::Even, TowerClass::NonArch { chi: DiscChar::Trivial }).unwrap();
        assert_eq!(na.count(), TowerCount::Finite(2));
        if let TowerFamily::Finite(ts) = &na {
            let kernels: Vec<u32> = ts.iter().map(|t| t.kernel_dim()).collect();
            assert_eq!(kernels, vec![0, 4]);
        }
        for eps in [Parity::Even, Parity::Odd] {
            let c = enumerate_towers(eps, TowerClass::Complex).unwrap();
            assert_eq!(c.count(), TowerCount::Finite(1));
        }
        let r = enumerate_towers(Parity::Even, TowerClass::Real { alpha: 2 }).unwrap();
        assert_eq!(r.count(), TowerCount::Infinite);
        let TowerFamily::Real(gen) = r else { panic!() };
        let ks: Vec<i64> = gen
            .take(5)
            .map(|t| match t {
                WittTower::Real { k } => k,
                _ => unreachable!(),
            })
            .collect();
        assert_eq!(ks, vec![2, -2, 6, -6, 10]);
        assert!(enumerate_towers(Parity::Even, TowerClass::Real { alpha: 1 }).is_err());
    }

    #[test]
    fn real_tower_generator_alpha_zero() {
        let ks: Vec<i64> = RealTowers::up_to(0, 8)
            .into_iter()
            .map(|t| match t {
                WittTower::Real { k } => k,
                _ => unreachable!(),
            })
            .collect();
        assert_eq!(ks, vec![0, 4, -4, 8, -8]);
    }

    #[test]
    fn adjacency() {
        let t = |k| WittTower::Real { k };
        assert!(adjacent(&t(2), &t(-2)).unwrap());
        assert!(adjacent(&t(2), &t(6)).unwrap());
        assert!(!adjacent(&t(2), &t(10)).unwrap());
        assert!(!adjacent(&t(2), &t(2)).unwrap());
        assert!(adjacent(&t(2), &t(0)).is_err());
        let na = |sign| WittTower::NonArch { eps: Parity::Even, chi: DiscChar::Nontrivial, sign };
        assert!(adjacent(&na(TowerSign::Plus), &na(TowerSign::Minus)).unwrap());
    }

    #[test]
    fn quasi_split_examples() {
        for n in 0..6 {
            assert!(FormedSpace::real(n + 2, n).quasi_split().unwrap());
        }
        assert!(!FormedSpace::real(4, 0).quasi_split().unwrap());
        assert!(FormedSpace::real(1, 1).quasi_split().unwrap());
    }

    #[test]
    fn difference_index_examples() {
        let d = difference_witt_index(&FormedSpace::real(3, 1), &FormedSpace::real(1, 3)).unwrap();
        assert_eq!(d.index, 2);
        assert!(d.attains_bound);
        assert_eq!(d.adjacent, Some(true));

        let d = difference_witt_index(&FormedSpace::real(2, 0), &FormedSpace::real(2, 0)).unwrap();
        assert_eq!(d.index, 2);
        assert!(d.same_tower);

        let d = difference_witt_index(&FormedSpace::real(6, 0), &FormedSpace::real(1, 1)).unwrap();
        assert_eq!(d.index, 1);
        assert_eq!(d.srank_bound, Some(2));
        assert!(!d.attains_bound);
    }

    #[test]
    fn json_defaults_and_roundtrip() {
        let v: FormedSpace = serde_json::from_str(r#"{"field":"R","p":2,"q":1}"#).unwrap();
        assert_eq!(v, FormedSpace::real(2, 1));
        let v: FormedSpace = serde_json::from_str(r#"{"field":"NA","sign":"-","r":1}"#).unwrap();
        assert_eq!(v, FormedSpace::nonarch(Parity::Even, DiscChar::Trivial, TowerSign::Minus, 1));
        let v: FormedSpace = serde_json::from_str(r#"{"kind":"symp","dim":4}"#).unwrap();
        assert_eq!(v, FormedSpace::Symplectic { field: Field::Real, dim: 4 });
        assert!(serde_json::from_str::<FormedSpace>(r#"{"kind":"symp","dim":3}"#).is_err());
        let text = serde_json::to_string(&FormedSpace::real(3, 1)).unwrap();
        assert_eq!(text, r#"{"field":"R","kind":"quad","p":3,"q":1}"#);

        let t: WittTower = serde_json::from_str(r#"{"k":-2}"#).unwrap();
        assert_eq!(t, WittTower::Real { k: -2 });
        let back: WittTower = serde_json::from_str(&serde_json::to_string(&t).unwrap()).unwrap();
        assert_eq!(back, t);
    }
}

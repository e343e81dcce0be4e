//! Classical signatures `(⋆, p, q)` and reductive dual pairs at the level of
//! labels and dimensions.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::ThetaError;
use crate::formed_spaces::FormedSpace;
use crate::orbits::LieType;
use crate::Result;

/// The type label `⋆` of a classical signature.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Star {
    B,
    C,
    D,
    /// Metaplectic type `C̃`.
    CTilde,
    CStar,
    DStar,
}

impl Star {
    pub const ALL: [Star; 6] = [Star::B, Star::C, Star::D, Star::CTilde, Star::CStar, Star::DStar];

    pub fn code(self) -> &'static str {
        match self {
            Star::B => "B",
            Star::C => "C",
            Star::D => "D",
            Star::CTilde => "C~",
            Star::CStar => "C*",
            Star::DStar => "D*",
        }
    }

    /// The Howe dual label: `B ↔ C̃`, `C ↔ D`, `C* ↔ D*`.
    pub fn howe_dual(self) -> Star {
        match self {
            Star::B => Star::CTilde,
            Star::C => Star::D,
            Star::D => Star::C,
            Star::CTilde => Star::B,
            Star::CStar => Star::DStar,
            Star::DStar => Star::CStar,
        }
    }

    /// Type of the complexified group.
    pub fn lie_type(self) -> LieType {
        match self {
            Star::B | Star::D | Star::DStar => LieType::Orthogonal,
            Star::C | Star::CTilde | Star::CStar => LieType::Symplectic,
        }
    }
}

impl fmt::Display for Star {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

impl FromStr for Star {
    type Err = ThetaError;

    fn from_str(s: &str) -> Result<Star> {
        match s {
            "B" => Ok(Star::B),
            "C" => Ok(Star::C),
            "D" => Ok(Star::D),
            "C~" | "Ct" | "CTilde" | "C̃" => Ok(Star::CTilde),
            "C*" | "CStar" => Ok(Star::CStar),
            "D*" | "DStar" => Ok(Star::DStar),
            other => Err(ThetaError::InvalidInput(format!("unknown label '{other}'"))),
        }
    }
}

impl Serialize for Star {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.code())
    }
}

impl<'de> Deserialize<'de> for Star {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let code = String::deserialize(d)?;
        code.parse().map_err(serde::de::Error::custom)
    }
}

/// `s = (⋆, p, q)`; `|s| = p + q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ClassicalSignature {
    pub star: Star,
    pub p: u32,
    pub q: u32,
}

/// Which clause of the validity table a signature violates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SignatureViolation {
    /// `⋆ = B` needs `p + q` odd.
    OddDimensionRequired,
    /// `⋆ = D` needs `p + q` even.
    EvenDimensionRequired,
    /// `⋆ ∈ {C, C̃, D*}` needs `p = q`.
    EqualPartsRequired,
    /// `⋆ = C*` needs `p` and `q` even.
    EvenPartsRequired,
}

impl fmt::Display for SignatureViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SignatureViolation::OddDimensionRequired => "p+q odd required",
            SignatureViolation::EvenDimensionRequired => "p+q even required",
            SignatureViolation::EqualPartsRequired => "p=q required",
            SignatureViolation::EvenPartsRequired => "p and q even required",
        })
    }
}

impl ClassicalSignature {
    pub fn new(star: Star, p: u32, q: u32) -> ClassicalSignature {
        ClassicalSignature { star, p, q }
    }

    /// Builds and validates.
    pub fn checked(star: Star, p: u32, q: u32) -> Result<ClassicalSignature> {
        let s = ClassicalSignature { star, p, q };
        s.ensure_valid()?;
        Ok(s)
    }

    pub fn size(&self) -> u32 {
        self.p + self.q
    }

    pub fn validate(&self) -> std::result::Result<(), SignatureViolation> {
        let (p, q) = (self.p, self.q);
        match self.star {
            Star::B if (p + q) % 2 == 0 => Err(SignatureViolation::OddDimensionRequired),
            Star::D if (p + q) % 2 == 1 => Err(SignatureViolation::EvenDimensionRequired),
            Star::C | Star::CTilde | Star::DStar if p != q => Err(SignatureViolation::EqualPartsRequired),
            Star::CStar if p % 2 == 1 || q % 2 == 1 => Err(SignatureViolation::EvenPartsRequired),
            _ => Ok(()),
        }
    }

    pub fn ensure_valid(&self) -> Result<()> {
        self.validate().map_err(|v| ThetaError::InvalidSignature { signature: self.to_string(), clause: v.to_string() })
    }

    pub fn real_group(&self) -> Result<RealGroup> {
        self.ensure_valid()?;
        Ok(match self.star {
            Star::B | Star::D => RealGroup::Orthogonal { p: self.p, q: self.q },
            Star::C => RealGroup::Symplectic { n: self.p },
            Star::CTilde => RealGroup::Metaplectic { n: self.p },
            Star::DStar => RealGroup::OStar { n: self.p },
            Star::CStar => RealGroup::QuaternionicSymplectic { p: self.p / 2, q: self.q / 2 },
        })
    }
}

impl fmt::Display for ClassicalSignature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.star, self.p, self.q)
    }
}

/// The real classical group attached to a valid signature.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RealGroup {
    /// `O(p,q)`.
    Orthogonal { p: u32, q: u32 },
    /// `Sp_{2n}(ℝ)`.
    Symplectic { n: u32 },
    /// Metaplectic double cover of `Sp_{2n}(ℝ)`.
    Metaplectic { n: u32 },
    /// `O*(2n)`.
    OStar { n: u32 },
    /// `Sp(p,q)`.
    QuaternionicSymplectic { p: u32, q: u32 },
}

impl fmt::Display for RealGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            RealGroup::Orthogonal { p, q } => write!(f, "O({p},{q})"),
            RealGroup::Symplectic { n } => write!(f, "Sp_{}(R)", 2 * n),
            RealGroup::Metaplectic { n } => write!(f, "Mp_{}(R)", 2 * n),
            RealGroup::OStar { n } => write!(f, "O*({})", 2 * n),
            RealGroup::QuaternionicSymplectic { p, q } => write!(f, "Sp({p},{q})"),
        }
    }
}

/// Two signatures with Howe-dual labels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DualPairSpec {
    pub s: ClassicalSignature,
    pub s_prime: ClassicalSignature,
}

impl DualPairSpec {
    pub fn new(s: ClassicalSignature, s_prime: ClassicalSignature) -> Result<DualPairSpec> {
        ensure_dual(&s, &s_prime)?;
        Ok(DualPairSpec { s, s_prime })
    }
}

pub(crate) fn ensure_dual(s: &ClassicalSignature, s_prime: &ClassicalSignature) -> Result<()> {
    if s.star.howe_dual() != s_prime.star {
        return Err(ThetaError::LabelMismatch(s.star.to_string(), s_prime.star.to_string()));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DivisionAlgebra {
    #[serde(rename = "R")]
    Real,
    #[serde(rename = "C")]
    Complex,
    #[serde(rename = "H")]
    Quaternion,
}

/// The shapes of irreducible reductive dual pairs over ℝ.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "shape", rename_all = "snake_case")]
pub enum PairShape {
    /// `(O_{p,q}, Sp_{2n}(ℝ)) ⊆ Sp_{2(p+q)n}(ℝ)`.
    OrthSymp { p: u32, q: u32, n: u32 },
    /// `(O_p(ℂ), Sp_{2n}(ℂ)) ⊆ Sp_{4pn}(ℝ)`.
    ComplexOrthSymp { p: u32, n: u32 },
    /// `(U_{p,q}, U_{r,s}) ⊆ Sp_{2(p+q)(r+s)}(ℝ)`.
    Unitary { p: u32, q: u32, r: u32, s: u32 },
    /// `(Sp_{p,q}, O*_{2n}) ⊆ Sp_{4(p+q)n}(ℝ)`.
    QuaternionicSympOStar { p: u32, q: u32, n: u32 },
    /// `(GL_m(D), GL_n(D))`.
    GeneralLinear { algebra: DivisionAlgebra, m: u32, n: u32 },
}

impl PairShape {
    pub fn is_type_one(&self) -> bool {
        !matches!(self, PairShape::GeneralLinear { .. })
    }

    /// Dimension of the ambient real symplectic space `W`.
    pub fn ambient_symplectic_dim(&self) -> u64 {
        let u = |x: u32| x as u64;
        match *self {
            PairShape::OrthSymp { p, q, n } => 2 * (u(p) + u(q)) * u(n),
            PairShape::ComplexOrthSymp { p, n } => 4 * u(p) * u(n),
            PairShape::Unitary { p, q, r, s } => 2 * (u(p) + u(q)) * (u(r) + u(s)),
            PairShape::QuaternionicSympOStar { p, q, n } => 4 * (u(p) + u(q)) * u(n),
            PairShape::GeneralLinear { algebra, m, n } => {
                let scale = match algebra {
                    DivisionAlgebra::Real => 2,
                    DivisionAlgebra::Complex => 4,
                    DivisionAlgebra::Quaternion => 8,
                };
                scale * u(m) * u(n)
            }
        }
    }
}

/// Which member of an orthogonal–symplectic pair is the smaller one, if the
/// pair is in the stable range.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum StableRange {
    /// `dim V ≤ ½ dim V′`.
    OrthogonalSmaller,
    /// Witt index of `V` at least `dim V′`.
    SymplecticSmaller,
    NotStable,
}

/// `V` quadratic, `V′` symplectic (either argument order is accepted).
pub fn stable_range(v: &FormedSpace, v_prime: &FormedSpace) -> Result<StableRange> {
    let (quad, symp) = match (v.is_quadratic(), v_prime.is_quadratic()) {
        (true, false) => (v, v_prime),
        (false, true) => (v_prime, v),
        _ => return Err(ThetaError::PairMismatch(format!("{v} and {v_prime} are not an orthogonal-symplectic pair"))),
    };
    if 2 * quad.dim() <= symp.dim() {
        Ok(StableRange::OrthogonalSmaller)
    } else if quad.witt_index() >= symp.dim() {
        Ok(StableRange::SymplecticSmaller)
    } else {
        Ok(StableRange::NotStable)
    }
}

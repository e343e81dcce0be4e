//! Partitions, complex nilpotent orbits of classical Lie algebras, and
//! admissible ε-Hermitian Young tableaux for real nilpotent orbits.
//!
//! A tableau over ℝ lists, for each distinct row length `t`, a formed
//! multiplicity space. Its kind is fixed by `ε_t = (−1)^{t−1} ε`: an
//! `ε_t = +1` row carries a real quadratic space `Orth(a, b)`, an `ε_t = −1`
//! row a symplectic space `Symp(2m)`. The ambient space is recovered as
//! `⊕_t M_t ⊗ S_t`, where `S_t` is the `t`-dimensional irreducible `sl₂`-module
//! with its invariant form. For odd `t = 2k + 1` that form is fixed to have
//! signature `(k + 1, k)`.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::ThetaError;
use crate::formed_spaces::{Field, FormedSpace};
use crate::Result;

/// Default bound on enumeration sizes.
pub const DEFAULT_CAP: u32 = 12;

/// Weakly decreasing positive parts.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Partition(Vec<u32>);

impl Partition {
    /// Validates that `parts` is weakly decreasing and positive.
    pub fn new(parts: Vec<u32>) -> Result<Partition> {
        if parts.contains(&0) {
            return Err(ThetaError::InvalidOrbit(format!("partition {parts:?} has a zero part")));
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(ThetaError::InvalidOrbit(format!("partition {parts:?} is not weakly decreasing")));
        }
        Ok(Partition(parts))
    }

    /// Sorts and drops zeros.
    pub fn from_parts(mut parts: Vec<u32>) -> Partition {
        parts.retain(|&x| x > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition(parts)
    }

    pub fn empty() -> Partition {
        Partition(Vec::new())
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    pub fn size(&self) -> u32 {
        self.0.iter().sum()
    }

    /// Number of parts, i.e. the length of the first column.
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Column lengths `c₁ ≥ c₂ ≥ …`.
    pub fn transpose(&self) -> Partition {
        let width = self.0.first().copied().unwrap_or(0);
        Partition((1..=width).map(|j| self.count_at_least(j)).collect())
    }

    pub fn count_at_least(&self, j: u32) -> u32 {
        self.0.iter().filter(|&&x| x >= j).count() as u32
    }

    /// Part → multiplicity, longest part first.
    pub fn multiplicities(&self) -> Vec<(u32, u32)> {
        let mut m: BTreeMap<u32, u32> = BTreeMap::new();
        for &x in &self.0 {
            *m.entry(x).or_default() += 1;
        }
        m.into_iter().rev().collect()
    }

    /// Dominance order: every prefix sum of `self` is at most that of `other`.
    pub fn dominance_leq(&self, other: &Partition) -> Result<bool> {
        if self.size() != other.size() {
            return Err(ThetaError::SizeMismatch(self.size(), other.size()));
        }
        let n = self.len().max(other.len());
        let (mut a, mut b) = (0u32, 0u32);
        for i in 0..n {
            a += self.0.get(i).copied().unwrap_or(0);
            b += other.0.get(i).copied().unwrap_or(0);
            if a > b {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Remove the first column.
    pub fn strip_first_column(&self) -> Partition {
        Partition::from_parts(self.0.iter().map(|&x| x - 1).collect())
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|x| x.to_string()).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

impl Serialize for Partition {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.0.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Partition {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let parts = Vec::<u32>::deserialize(d)?;
        Partition::new(parts).map_err(serde::de::Error::custom)
    }
}

/// All partitions of `n`, largest first in reverse lexicographic order.
pub fn partitions(n: u32) -> Partitions {
    Partitions { current: if n == 0 { Some(Vec::new()) } else { Some(vec![n]) } }
}

pub struct Partitions {
    current: Option<Vec<u32>>,
}

impl Iterator for Partitions {
    type Item = Partition;

    fn next(&mut self) -> Option<Partition> {
        let out = self.current.take()?;
        let mut next = out.clone();
        // drop trailing 1s, decrement the last part > 1, refill greedily
        let mut ones = 0u32;
        while next.last() == Some(&1) {
            next.pop();
            ones += 1;
        }
        if let Some(last) = next.pop() {
            let k = last - 1;
            let mut rest = ones + 1;
            next.push(k);
            while rest > 0 {
                let piece = rest.min(k);
                next.push(piece);
                rest -= piece;
            }
            self.current = Some(next);
        }
        Some(Partition(out))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LieType {
    /// `ε = +1`.
    Orthogonal,
    /// `ε = −1`.
    Symplectic,
}

impl LieType {
    pub fn code(self) -> &'static str {
        match self {
            LieType::Orthogonal => "orth",
            LieType::Symplectic => "sp",
        }
    }

    pub fn dual(self) -> LieType {
        match self {
            LieType::Orthogonal => LieType::Symplectic,
            LieType::Symplectic => LieType::Orthogonal,
        }
    }

    pub fn epsilon(self) -> Epsilon {
        match self {
            LieType::Orthogonal => Epsilon::Plus,
            LieType::Symplectic => Epsilon::Minus,
        }
    }
}

impl Serialize for LieType {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.code())
    }
}

impl<'de> Deserialize<'de> for LieType {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let code = String::deserialize(d)?;
        match code.as_str() {
            "orth" | "o" => Ok(LieType::Orthogonal),
            "sp" | "symp" => Ok(LieType::Symplectic),
            other => Err(serde::de::Error::custom(format!("unknown Lie type '{other}'"))),
        }
    }
}

/// A nilpotent orbit of `o_N(ℂ)` or `sp_N(ℂ)`, labelled by its partition.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ComplexOrbit {
    #[serde(rename = "type")]
    pub lie_type: LieType,
    pub partition: Partition,
}

impl ComplexOrbit {
    pub fn new(lie_type: LieType, partition: Partition) -> ComplexOrbit {
        ComplexOrbit { lie_type, partition }
    }

    /// Builds and validates the parity rule.
    pub fn checked(lie_type: LieType, parts: Vec<u32>) -> Result<ComplexOrbit> {
        let o = ComplexOrbit { lie_type, partition: Partition::new(parts)? };
        o.validate()?;
        Ok(o)
    }

    pub fn zero(lie_type: LieType, dim: u32) -> ComplexOrbit {
        ComplexOrbit { lie_type, partition: Partition(vec![1; dim as usize]) }
    }

    pub fn size(&self) -> u32 {
        self.partition.size()
    }

    /// Orthogonal: even parts occur with even multiplicity. Symplectic: odd
    /// parts occur with even multiplicity.
    pub fn validate(&self) -> Result<()> {
        let bad_parity = match self.lie_type {
            LieType::Orthogonal => 0,
            LieType::Symplectic => 1,
        };
        for (part, mult) in self.partition.multiplicities() {
            if part % 2 == bad_parity && mult % 2 == 1 {
                return Err(ThetaError::InvalidOrbit(format!(
                    "{} orbit {}: part {part} has odd multiplicity {mult}",
                    self.lie_type.code(),
                    self.partition
                )));
            }
        }
        Ok(())
    }

    pub fn column_data(&self) -> ColumnData {
        column_data(&self.partition)
    }
}

impl fmt::Display for ComplexOrbit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.lie_type.code(), self.partition)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ColumnData {
    pub c1: u32,
    pub c2: u32,
    /// No parts equal to 1, equivalently `c₁ = c₂`.
    pub is_pure: bool,
}

pub fn column_data(p: &Partition) -> ColumnData {
    let c1 = p.len() as u32;
    let c2 = p.count_at_least(2);
    ColumnData { c1, c2, is_pure: c1 == c2 }
}

/// All valid complex orbits of the given type and size.
pub fn enumerate_complex_orbits(lie_type: LieType, size: u32, cap: u32) -> Result<Vec<ComplexOrbit>> {
    if size > cap {
        return Err(ThetaError::CapExceeded { requested: size, cap });
    }
    if lie_type == LieType::Symplectic && size % 2 == 1 {
        return Ok(Vec::new());
    }
    Ok(partitions(size).map(|p| ComplexOrbit::new(lie_type, p)).filter(|o| o.validate().is_ok()).collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Epsilon {
    Plus,
    Minus,
}

impl Epsilon {
    pub fn sign(self) -> i8 {
        match self {
            Epsilon::Plus => 1,
            Epsilon::Minus => -1,
        }
    }

    pub fn flip(self) -> Epsilon {
        match self {
            Epsilon::Plus => Epsilon::Minus,
            Epsilon::Minus => Epsilon::Plus,
        }
    }

    pub fn lie_type(self) -> LieType {
        match self {
            Epsilon::Plus => LieType::Orthogonal,
            Epsilon::Minus => LieType::Symplectic,
        }
    }

    /// `ε_t = (−1)^{t−1} ε`.
    pub fn for_row(self, t: u32) -> Epsilon {
        if t % 2 == 1 {
            self
        } else {
            self.flip()
        }
    }
}

impl Serialize for Epsilon {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_i8(self.sign())
    }
}

impl<'de> Deserialize<'de> for Epsilon {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        match i8::deserialize(d)? {
            1 => Ok(Epsilon::Plus),
            -1 => Ok(Epsilon::Minus),
            other => Err(serde::de::Error::custom(format!("eps must be 1 or -1, got {other}"))),
        }
    }
}

/// Formed multiplicity space of one row group.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MultForm {
    /// Real quadratic space of signature `(a, b)`.
    Orth(u32, u32),
    /// Real symplectic space of the given (even) dimension.
    Symp(u32),
}

impl MultForm {
    pub fn dim(&self) -> u32 {
        match *self {
            MultForm::Orth(a, b) => a + b,
            MultForm::Symp(d) => d,
        }
    }

    pub fn epsilon(&self) -> Epsilon {
        match self {
            MultForm::Orth(..) => Epsilon::Plus,
            MultForm::Symp(_) => Epsilon::Minus,
        }
    }

    /// Orthogonal direct sum of two forms of the same kind.
    pub fn direct_sum(&self, other: &MultForm) -> Option<MultForm> {
        match (*self, *other) {
            (MultForm::Orth(a, b), MultForm::Orth(c, d)) => Some(MultForm::Orth(a + c, b + d)),
            (MultForm::Symp(a), MultForm::Symp(b)) => Some(MultForm::Symp(a + b)),
            _ => None,
        }
    }

    /// Isometry group of the multiplicity space.
    pub fn isometry_group(&self) -> GroupLabel {
        match *self {
            MultForm::Orth(a, b) => GroupLabel::Orthogonal { p: a, q: b },
            MultForm::Symp(d) => GroupLabel::Symplectic { dim: d },
        }
    }

    pub fn zero(eps: Epsilon) -> MultForm {
        match eps {
            Epsilon::Plus => MultForm::Orth(0, 0),
            Epsilon::Minus => MultForm::Symp(0),
        }
    }
}

impl fmt::Display for MultForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MultForm::Orth(a, b) => write!(f, "Orth({a},{b})"),
            MultForm::Symp(d) => write!(f, "Symp({d})"),
        }
    }
}

/// A real classical group named by its defining formed space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GroupLabel {
    Orthogonal { p: u32, q: u32 },
    Symplectic { dim: u32 },
}

impl GroupLabel {
    pub fn is_trivial(&self) -> bool {
        match *self {
            GroupLabel::Orthogonal { p, q } => p + q == 0,
            GroupLabel::Symplectic { dim } => dim == 0,
        }
    }

    pub fn is_orthogonal(&self) -> bool {
        matches!(self, GroupLabel::Orthogonal { .. })
    }
}

impl fmt::Display for GroupLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            GroupLabel::Orthogonal { p, q } => write!(f, "O({p},{q})"),
            GroupLabel::Symplectic { dim } => write!(f, "Sp_{dim}(R)"),
        }
    }
}

impl Serialize for GroupLabel {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TableauRow {
    pub t: u32,
    pub form: MultForm,
}

impl TableauRow {
    pub fn new(t: u32, form: MultForm) -> TableauRow {
        TableauRow { t, form }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TableauViolation {
    ZeroLength,
    NotStrictlyDecreasing {
        previous: u32,
        next: u32,
    },
    /// A row of length `t` carries the wrong kind of form.
    WrongFormKind {
        t: u32,
        needs: Epsilon,
    },
    OddSymplecticDim {
        t: u32,
        dim: u32,
    },
    EmptyRow {
        t: u32,
    },
}

impl fmt::Display for TableauViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TableauViolation::ZeroLength => write!(f, "row of length 0"),
            TableauViolation::NotStrictlyDecreasing { previous, next } => {
                write!(f, "row lengths must strictly decrease ({previous} then {next})")
            }
            TableauViolation::WrongFormKind { t, needs } => {
                let kind = if *needs == Epsilon::Plus { "Orth" } else { "Symp" };
                write!(f, "length-{t} row needs {kind} form")
            }
            TableauViolation::OddSymplecticDim { t, dim } => {
                write!(f, "length-{t} row has symplectic form of odd dimension {dim}")
            }
            TableauViolation::EmptyRow { t } => write!(f, "length-{t} row has multiplicity 0"),
        }
    }
}

/// An admissible ε-Hermitian Young tableau over ℝ, with one row group per
/// distinct length.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct AdmissibleTableau {
    pub eps: Epsilon,
    pub rows: Vec<TableauRow>,
}

impl AdmissibleTableau {
    /// Sorts rows, merges equal lengths, drops empty rows and validates.
    pub fn from_rows(eps: Epsilon, rows: Vec<TableauRow>) -> Result<AdmissibleTableau> {
        let mut merged: BTreeMap<u32, MultForm> = BTreeMap::new();
        for row in rows {
            let entry = merged.entry(row.t).or_insert_with(|| MultForm::zero(row.form.epsilon()));
            *entry = entry.direct_sum(&row.form).ok_or_else(|| {
                ThetaError::InvalidTableau(format!("length-{} rows carry forms of different kinds", row.t))
            })?;
        }
        let rows = merged
            .into_iter()
            .rev()
            .filter(|(_, form)| form.dim() > 0)
            .map(|(t, form)| TableauRow { t, form })
            .collect();
        let tableau = AdmissibleTableau { eps, rows };
        tableau.ensure_valid()?;
        Ok(tableau)
    }

    /// Zero orbit of the isometry group of `form` (a single length-1 row).
    pub fn zero_orbit(form: MultForm) -> AdmissibleTableau {
        let eps = form.epsilon();
        let rows = if form.dim() > 0 { vec![TableauRow::new(1, form)] } else { Vec::new() };
        AdmissibleTableau { eps, rows }
    }

    pub fn validate(&self) -> std::result::Result<(), TableauViolation> {
        for (i, row) in self.rows.iter().enumerate() {
            if row.t == 0 {
                return Err(TableauViolation::ZeroLength);
            }
            if i > 0 && self.rows[i - 1].t <= row.t {
                return Err(TableauViolation::NotStrictlyDecreasing { previous: self.rows[i - 1].t, next: row.t });
            }
            let needs = self.eps.for_row(row.t);
            if row.form.epsilon() != needs {
                return Err(TableauViolation::WrongFormKind { t: row.t, needs });
            }
            if let MultForm::Symp(d) = row.form {
                if d % 2 == 1 {
                    return Err(TableauViolation::OddSymplecticDim { t: row.t, dim: d });
                }
            }
            if row.form.dim() == 0 {
                return Err(TableauViolation::EmptyRow { t: row.t });
            }
        }
        Ok(())
    }

    pub fn ensure_valid(&self) -> Result<()> {
        self.validate().map_err(|v| ThetaError::InvalidTableau(v.to_string()))
    }

    pub fn total_dim(&self) -> u32 {
        self.rows.iter().map(|r| r.t * r.form.dim()).sum()
    }

    /// Signature of the ambient quadratic space, `ε = +1` only.
    pub fn total_signature(&self) -> Result<(u32, u32)> {
        if self.eps != Epsilon::Plus {
            return Err(ThetaError::KindMismatch {
                expected: "an eps = +1 tableau".into(),
                got: "an eps = -1 tableau (symplectic ambient space has no signature)".into(),
            });
        }
        self.ensure_valid()?;
        Ok(self.rows.iter().fold((0, 0), |(p, q), row| {
            let (a, b) = row_signature(row.t, &row.form);
            (p + a, q + b)
        }))
    }

    /// The ambient formed space: `ℝ^{p,q}` for `ε = +1`, a real symplectic
    /// space for `ε = −1`.
    pub fn total_space(&self) -> Result<FormedSpace> {
        match self.eps {
            Epsilon::Plus => {
                let (p, q) = self.total_signature()?;
                Ok(FormedSpace::real(p, q))
            }
            Epsilon::Minus => {
                self.ensure_valid()?;
                FormedSpace::symplectic(Field::Real, self.total_dim())
            }
        }
    }

    /// Factors `G(M_t)` of the stabilizer `M_X`, one per row, in row order.
    pub fn stabilizer_factors(&self) -> Result<Vec<GroupLabel>> {
        self.ensure_valid()?;
        Ok(self.rows.iter().map(|r| r.form.isometry_group()).collect())
    }

    pub fn complexify(&self) -> ComplexOrbit {
        let mut parts = Vec::new();
        for row in &self.rows {
            parts.extend(std::iter::repeat_n(row.t, row.form.dim() as usize));
        }
        ComplexOrbit::new(self.eps.lie_type(), Partition::from_parts(parts))
    }

    pub fn form_of(&self, t: u32) -> Option<MultForm> {
        self.rows.iter().find(|r| r.t == t).map(|r| r.form)
    }
}

impl fmt::Display for AdmissibleTableau {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self.rows.iter().map(|r| format!("({}, {})", r.t, r.form)).collect();
        write!(f, "eps={} [{}]", self.eps.sign(), rows.join(", "))
    }
}

/// Signature of `M ⊗ S_t` for an `ε = +1` ambient space.
///
/// Odd `t = 2k + 1` with `Orth(a, b)`: `(a(k+1) + bk, ak + b(k+1))`.
/// Even `t` with `Symp(2m)`: split, `(mt, mt)`.
pub fn row_signature(t: u32, form: &MultForm) -> (u32, u32) {
    match *form {
        MultForm::Orth(a, b) => {
            let k = (t - 1) / 2;
            (a * (k + 1) + b * k, a * k + b * (k + 1))
        }
        MultForm::Symp(d) => {
            let half = d / 2 * t;
            (half, half)
        }
    }
}

/// All real tableaux whose complexification is `orbit`.
pub fn real_forms_of(orbit: &ComplexOrbit) -> Vec<AdmissibleTableau> {
    let eps = orbit.lie_type.epsilon();
    let mut acc: Vec<Vec<TableauRow>> = vec![Vec::new()];
    for (t, mult) in orbit.partition.multiplicities() {
        let options: Vec<MultForm> = match eps.for_row(t) {
            Epsilon::Plus => (0..=mult).rev().map(|a| MultForm::Orth(a, mult - a)).collect(),
            Epsilon::Minus if mult % 2 == 0 => vec![MultForm::Symp(mult)],
            Epsilon::Minus => Vec::new(),
        };
        acc = acc
            .into_iter()
            .flat_map(|prefix| {
                options.iter().map(move |form| {
                    let mut rows = prefix.clone();
                    rows.push(TableauRow::new(t, *form));
                    rows
                })
            })
            .collect();
    }
    acc.into_iter().map(|rows| AdmissibleTableau { eps, rows }).collect()
}

/// All admissible tableaux whose ambient space is `space` (a real quadratic
/// or a real symplectic space).
pub fn enumerate_tableaux(space: &FormedSpace, cap: u32) -> Result<Vec<AdmissibleTableau>> {
    let lie_type = match space {
        FormedSpace::RealQuadratic { .. } => LieType::Orthogonal,
        FormedSpace::Symplectic { field: Field::Real, .. } => LieType::Symplectic,
        other => {
            return Err(ThetaError::KindMismatch {
                expected: "a real quadratic or real symplectic space".into(),
                got: other.to_string(),
            })
        }
    };
    let mut out = Vec::new();
    for orbit in enumerate_complex_orbits(lie_type, space.dim(), cap)? {
        for tableau in real_forms_of(&orbit) {
            if tableau.total_space()? == *space {
                out.push(tableau);
            }
        }
    }
    Ok(out)
}

//! Moment-map descent of nilpotent orbits, and the searches built on it.
//!
//! Real orbits are admissible tableaux. Descent removes the first column of
//! the Young diagram: a row of length `L ≥ 2` with form `F` becomes a row of
//! length `L − 1` with the same form, rows of length 1 disappear, and the
//! orthogonal complement of the embedded part is appended as extra rows of
//! length 1.

use serde::Serialize;

use crate::dual_pairs::{ClassicalSignature, Star};
use crate::error::ThetaError;
use crate::formed_spaces::{Field, FormedSpace};
use crate::orbits::{
    enumerate_complex_orbits, real_forms_of, AdmissibleTableau, ComplexOrbit, Epsilon, GroupLabel, MultForm, Partition,
    TableauRow,
};
use crate::Result;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DescentResult {
    pub orbit: AdmissibleTableau,
    /// `dim Ker(T)`.
    pub b: u32,
    pub kernel_form: FormedSpace,
    pub l: GroupLabel,
    pub l_prime: GroupLabel,
    pub m_factors: Vec<GroupLabel>,
}

impl DescentResult {
    pub fn is_pure(&self) -> bool {
        self.b == 0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct DescentClass {
    pub pure: bool,
    pub regular: bool,
    pub good: bool,
}

/// The embedded part `⊕ M_L ⊗ S_{L−1}` over rows of length `L ≥ 2`, as a
/// tableau of the opposite sign.
fn shifted_rows(o_prime: &AdmissibleTableau) -> AdmissibleTableau {
    AdmissibleTableau {
        eps: o_prime.eps.flip(),
        rows: o_prime.rows.iter().filter(|r| r.t >= 2).map(|r| TableauRow::new(r.t - 1, r.form)).collect(),
    }
}

fn check_pair(o_prime: &AdmissibleTableau, v: &FormedSpace) -> Result<()> {
    o_prime.ensure_valid()?;
    let ok = matches!(
        (o_prime.eps, v),
        (Epsilon::Minus, FormedSpace::RealQuadratic { .. })
            | (Epsilon::Plus, FormedSpace::Symplectic { field: Field::Real, .. })
    );
    if ok {
        Ok(())
    } else {
        let side = if o_prime.eps == Epsilon::Minus { "a real quadratic space" } else { "a real symplectic space" };
        Err(ThetaError::PairMismatch(format!("eps={} tableau needs {side}, got {v}", o_prime.eps.sign())))
    }
}

/// Kernel of the embedding, if the embedded part fits into `v`.
fn kernel_of(embedded: &AdmissibleTableau, v: &FormedSpace) -> Result<Option<MultForm>> {
    match *v {
        FormedSpace::RealQuadratic { p, q } => {
            let (pp, qq) = embedded.total_signature()?;
            Ok((pp <= p && qq <= q).then(|| MultForm::Orth(p - pp, q - qq)))
        }
        _ => {
            let d = embedded.total_dim();
            Ok((d <= v.dim()).then(|| MultForm::Symp(v.dim() - d)))
        }
    }
}

/// Whether the nilpotent `K′`-orbit `o_prime` lies in the image of the
/// moment map from `Hom(V, V′)`.
pub fn in_moment_image(o_prime: &AdmissibleTableau, v: &FormedSpace) -> Result<bool> {
    check_pair(o_prime, v)?;
    Ok(kernel_of(&shifted_rows(o_prime), v)?.is_some())
}

pub fn descend(o_prime: &AdmissibleTableau, v: &FormedSpace) -> Result<DescentResult> {
    check_pair(o_prime, v)?;
    let embedded = shifted_rows(o_prime);
    let kernel = kernel_of(&embedded, v)?
        .ok_or_else(|| ThetaError::NotInMomentImage(format!("{o_prime} does not embed into {v}")))?;
    let mut rows = embedded.rows.clone();
    rows.push(TableauRow::new(1, kernel));
    let orbit = AdmissibleTableau::from_rows(embedded.eps, rows)?;
    let kernel_form = match kernel {
        MultForm::Orth(a, b) => FormedSpace::real(a, b),
        MultForm::Symp(d) => FormedSpace::symplectic(Field::Real, d)?,
    };
    let l_prime = o_prime.form_of(1).unwrap_or(MultForm::zero(o_prime.eps)).isometry_group();
    Ok(DescentResult {
        orbit,
        b: kernel.dim(),
        kernel_form,
        l: kernel.isometry_group(),
        l_prime,
        m_factors: o_prime.rows.iter().filter(|r| r.t >= 2).map(|r| r.form.isometry_group()).collect(),
    })
}

/// `(M_{X,X′} factors, L, L′)`.
pub fn descent_stabilizers(
    o_prime: &AdmissibleTableau,
    v: &FormedSpace,
) -> Result<(Vec<GroupLabel>, GroupLabel, GroupLabel)> {
    let d = descend(o_prime, v)?;
    Ok((d.m_factors, d.l, d.l_prime))
}

/// Descent of a `K′`-orbit in `p′`, read through the Kostant–Sekiguchi
/// correspondence as a tableau.
pub fn descend_k_orbit(o_prime: &AdmissibleTableau, v: &FormedSpace) -> Result<AdmissibleTableau> {
    Ok(descend(o_prime, v)?.orbit)
}

fn classify(partition: &Partition, dim_v: u32, star_prime: Star) -> Result<DescentClass> {
    let c1 = partition.len() as u32;
    let c2 = partition.count_at_least(2);
    let embedded = partition.size() - c1;
    if embedded > dim_v {
        return Err(ThetaError::NotInMomentImage(format!("{partition} needs dim V >= {embedded}, got {dim_v}")));
    }
    let pure = embedded == dim_v;
    let regular = pure || c1 == c2;
    let extra = match star_prime {
        Star::B | Star::D => c1 > c2,
        Star::C | Star::CTilde => dim_v - embedded <= 1,
        Star::CStar | Star::DStar => dim_v == embedded,
    };
    Ok(DescentClass { pure, regular, good: regular && extra })
}

/// Pure, regular and good flags of a real descent. The label `⋆′` of the
/// source is read off from the tableau's type.
pub fn classify_descent(o_prime: &AdmissibleTableau, v: &FormedSpace) -> Result<DescentClass> {
    if !in_moment_image(o_prime, v)? {
        return Err(ThetaError::NotInMomentImage(format!("{o_prime} does not embed into {v}")));
    }
    let star_prime = match o_prime.eps {
        Epsilon::Minus => Star::C,
        Epsilon::Plus if o_prime.total_dim() % 2 == 1 => Star::B,
        Epsilon::Plus => Star::D,
    };
    classify(&o_prime.complexify().partition, v.dim(), star_prime)
}

/// Complex-level classification with an explicit label `⋆′` for the source.
pub fn classify_complex_descent(o_prime: &ComplexOrbit, dim_v: u32, star_prime: Star) -> Result<DescentClass> {
    if star_prime.lie_type() != o_prime.lie_type {
        return Err(ThetaError::KindMismatch {
            expected: format!("an orbit of type {}", star_prime.lie_type().code()),
            got: o_prime.to_string(),
        });
    }
    classify(&o_prime.partition, dim_v, star_prime)
}

/// Complex descent: strip the first column and pad with length-1 rows up to
/// size `dim_v`.
pub fn complex_descend(o_prime: &ComplexOrbit, dim_v: u32) -> Result<ComplexOrbit> {
    o_prime.validate()?;
    let stripped = o_prime.partition.strip_first_column();
    if stripped.size() > dim_v {
        return Err(ThetaError::NotInMomentImage(format!("{o_prime} needs dim V >= {}, got {dim_v}", stripped.size())));
    }
    let mut parts = stripped.parts().to_vec();
    parts.extend(std::iter::repeat_n(1, (dim_v - stripped.size()) as usize));
    let out = ComplexOrbit::new(o_prime.lie_type.dual(), Partition::from_parts(parts));
    out.validate()
        .map_err(|_| ThetaError::NotInMomentImage(format!("{o_prime} has no descent to dimension {dim_v}")))?;
    Ok(out)
}

/// The unique dominance-maximal element of `candidates`.
fn unique_maximum(candidates: Vec<ComplexOrbit>, what: String) -> Result<ComplexOrbit> {
    let maximal: Vec<&ComplexOrbit> = candidates
        .iter()
        .filter(|a| !candidates.iter().any(|b| b != *a && a.partition.dominance_leq(&b.partition).unwrap_or(false)))
        .collect();
    match maximal.as_slice() {
        [] => Err(ThetaError::NoCandidate(what)),
        [only] => Ok((*only).clone()),
        many => {
            let mut names: Vec<String> = many.iter().map(|o| o.partition.to_string()).collect();
            names.sort();
            Err(ThetaError::AmbiguousMaximum(names))
        }
    }
}

/// Dominance-maximal orbit `O′` of the dual type on a space of dimension
/// `dim_v_prime` whose descent lies in the closure of `o`.
pub fn check_theta_lift(o: &ComplexOrbit, dim_v_prime: u32, cap: u32) -> Result<ComplexOrbit> {
    o.validate()?;
    let dim_v = o.size();
    let mut candidates = Vec::new();
    for cand in enumerate_complex_orbits(o.lie_type.dual(), dim_v_prime, cap)? {
        if let Ok(down) = complex_descend(&cand, dim_v) {
            if down.partition.dominance_leq(&o.partition)? {
                candidates.push(cand);
            }
        }
    }
    unique_maximum(candidates, format!("no orbit of size {dim_v_prime} descends below {o}"))
}

/// The `K′`-orbits of complex type `o_prime` on `v_prime` that descend
/// exactly to `orbit`.
pub fn lift_orbit_support(
    orbit: &AdmissibleTableau,
    o_prime: &ComplexOrbit,
    v_prime: &FormedSpace,
    cap: u32,
) -> Result<Vec<AdmissibleTableau>> {
    orbit.ensure_valid()?;
    o_prime.validate()?;
    if o_prime.size() > cap {
        return Err(ThetaError::CapExceeded { requested: o_prime.size(), cap });
    }
    if o_prime.lie_type != orbit.eps.lie_type().dual() {
        return Err(ThetaError::PairMismatch(format!("{o_prime} is not on the dual side of {orbit}")));
    }
    if o_prime.size() != v_prime.dim() {
        return Err(ThetaError::SizeMismatch(o_prime.size(), v_prime.dim()));
    }
    let v = orbit.total_space()?;
    let mut out = Vec::new();
    for cand in real_forms_of(o_prime) {
        if cand.total_space()? != *v_prime {
            continue;
        }
        match descend(&cand, &v) {
            Ok(d) if d.orbit == *orbit => out.push(cand),
            Ok(_) | Err(ThetaError::NotInMomentImage(_)) => {}
            Err(e) => return Err(e),
        }
    }
    Ok(out)
}

/// Dominance-maximal `O″` on `V_{s″}` that is good for descent to the space
/// of `o_prime` and descends to `o_prime`.
pub fn induce_orbit(o_prime: &ComplexOrbit, s2: &ClassicalSignature, cap: u32) -> Result<ComplexOrbit> {
    o_prime.validate()?;
    s2.ensure_valid()?;
    if s2.star.lie_type() != o_prime.lie_type.dual() {
        return Err(ThetaError::PairMismatch(format!("{s2} is not on the dual side of {o_prime}")));
    }
    let dim_v = o_prime.size();
    let mut candidates = Vec::new();
    for cand in enumerate_complex_orbits(s2.star.lie_type(), s2.size(), cap)? {
        let Ok(down) = complex_descend(&cand, dim_v) else { continue };
        if down == *o_prime && classify(&cand.partition, dim_v, s2.star)?.good {
            candidates.push(cand);
        }
    }
    unique_maximum(candidates, format!("no good preimage of {o_prime} in {s2}"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::orbits::{LieType, DEFAULT_CAP};

    fn sp(rows: &[(u32, MultForm)]) -> AdmissibleTableau {
        AdmissibleTableau { eps: Epsilon::Minus, rows: rows.iter().map(|&(t, f)| TableauRow::new(t, f)).collect() }
    }

    fn labels(v: &[GroupLabel]) -> Vec<String> {
        v.iter().map(|g| g.to_string()).collect()
    }

    fn orbit(t: LieType, parts: &[u32]) -> ComplexOrbit {
        ComplexOrbit::checked(t, parts.to_vec()).unwrap()
    }

    #[test]
    fn moment_image_examples() {
        let o = sp(&[(4, MultForm::Orth(1, 0))]);
        assert!(in_moment_image(&o, &FormedSpace::real(2, 1)).unwrap());
        assert!(!in_moment_image(&o, &FormedSpace::real(1, 2)).unwrap());
        let zero = AdmissibleTableau::zero_orbit(MultForm::Symp(4));
        assert!(in_moment_image(&zero, &FormedSpace::real(0, 0)).unwrap());
        assert!(in_moment_image(&zero, &FormedSpace::real(3, 5)).unwrap());
        assert!(matches!(
            in_moment_image(&o, &FormedSpace::symplectic(Field::Real, 4).unwrap()),
            Err(ThetaError::PairMismatch(_))
        ));
    }

    #[test]
    fn descend_pure() {
        let d = descend(&sp(&[(4, MultForm::Orth(1, 0))]), &FormedSpace::real(2, 1)).unwrap();
        assert_eq!(d.orbit.rows, vec![TableauRow::new(3, MultForm::Orth(1, 0))]);
        assert_eq!(d.b, 0);
        assert!(d.is_pure());
        assert_eq!(labels(&d.m_factors), vec!["O(1,0)"]);
        assert!(d.l.is_trivial() && d.l.is_orthogonal());
        assert!(d.l_prime.is_trivial() && !d.l_prime.is_orthogonal());
    }

    #[test]
    fn descend_with_kernel() {
        let d = descend(&sp(&[(2, MultForm::Orth(1, 0))]), &FormedSpace::real(1, 1)).unwrap();
        assert_eq!(d.orbit, AdmissibleTableau::zero_orbit(MultForm::Orth(1, 1)));
        assert_eq!(d.b, 1);
        assert_eq!(d.kernel_form, FormedSpace::real(0, 1));
        assert_eq!(labels(&d.m_factors), vec!["O(1,0)"]);
        assert_eq!(d.l.to_string(), "O(0,1)");
        assert!(d.l_prime.is_trivial());
    }

    #[test]
    fn descend_zero_orbit() {
        let zero = AdmissibleTableau::zero_orbit(MultForm::Symp(2));
        let d = descend(&zero, &FormedSpace::real(2, 0)).unwrap();
        assert_eq!(d.orbit, AdmissibleTableau::zero_orbit(MultForm::Orth(2, 0)));
        assert_eq!(d.b, 2);
        assert!(d.m_factors.is_empty());
        assert_eq!(d.l.to_string(), "O(2,0)");
        assert_eq!(d.l_prime.to_string(), "Sp_2(R)");
    }

    #[test]
    fn descend_rejects_outside_image() {
        let e = descend(&sp(&[(4, MultForm::Orth(1, 0))]), &FormedSpace::real(1, 2)).unwrap_err();
        assert!(matches!(e, ThetaError::NotInMomentImage(_)));
    }

    #[test]
    fn descend_orthogonal_source() {
        let o = AdmissibleTableau {
            eps: Epsilon::Plus,
            rows: vec![TableauRow::new(3, MultForm::Orth(1, 0)), TableauRow::new(1, MultForm::Orth(0, 1))],
        };
        let v = FormedSpace::symplectic(Field::Real, 4).unwrap();
        let d = descend(&o, &v).unwrap();
        assert_eq!(d.orbit.rows, vec![TableauRow::new(2, MultForm::Orth(1, 0)), TableauRow::new(1, MultForm::Symp(2))]);
        assert_eq!(d.b, 2);
        assert_eq!(d.l.to_string(), "Sp_2(R)");
        assert_eq!(d.l_prime.to_string(), "O(0,1)");
    }

    #[test]
    fn classification_examples() {
        let c = classify_descent(&sp(&[(4, MultForm::Orth(1, 0))]), &FormedSpace::real(2, 1)).unwrap();
        assert_eq!(c, DescentClass { pure: true, regular: true, good: true });

        let o = sp(&[(2, MultForm::Orth(1, 1))]);
        let c = classify_descent(&o, &FormedSpace::real(2, 2)).unwrap();
        assert!(!c.pure && c.regular);

        // [2] has no parts equal to 1, so it is a pure nilpotent
        let c = classify_descent(&sp(&[(2, MultForm::Orth(1, 0))]), &FormedSpace::real(3, 1)).unwrap();
        assert!(!c.pure && c.regular && !c.good);

        let c = classify_descent(&AdmissibleTableau::zero_orbit(MultForm::Symp(2)), &FormedSpace::real(2, 0)).unwrap();
        assert_eq!(c, DescentClass { pure: false, regular: false, good: false });
    }

    #[test]
    fn complex_descent_strips_first_column() {
        let d = complex_descend(&orbit(LieType::Symplectic, &[4]), 3).unwrap();
        assert_eq!(d, orbit(LieType::Orthogonal, &[3]));
        let d = complex_descend(&orbit(LieType::Symplectic, &[2]), 2).unwrap();
        assert_eq!(d, orbit(LieType::Orthogonal, &[1, 1]));
        assert!(complex_descend(&orbit(LieType::Symplectic, &[4]), 2).is_err());
    }

    #[test]
    fn check_lift_examples() {
        let lift = check_theta_lift(&orbit(LieType::Orthogonal, &[3]), 4, DEFAULT_CAP).unwrap();
        assert_eq!(lift, orbit(LieType::Symplectic, &[4]));
        let lift = check_theta_lift(&orbit(LieType::Orthogonal, &[1, 1]), 2, DEFAULT_CAP).unwrap();
        assert_eq!(lift, orbit(LieType::Symplectic, &[2]));
        let e = check_theta_lift(&orbit(LieType::Orthogonal, &[3]), 99, DEFAULT_CAP).unwrap_err();
        assert!(matches!(e, ThetaError::CapExceeded { .. }));
    }

    #[test]
    fn support_examples() {
        let o = AdmissibleTableau { eps: Epsilon::Plus, rows: vec![TableauRow::new(3, MultForm::Orth(1, 0))] };
        let sp4 = FormedSpace::symplectic(Field::Real, 4).unwrap();
        let s = lift_orbit_support(&o, &orbit(LieType::Symplectic, &[4]), &sp4, DEFAULT_CAP).unwrap();
        assert_eq!(s, vec![sp(&[(4, MultForm::Orth(1, 0))])]);

        let zero = AdmissibleTableau::zero_orbit(MultForm::Orth(1, 1));
        let sp2 = FormedSpace::symplectic(Field::Real, 2).unwrap();
        let s = lift_orbit_support(&zero, &orbit(LieType::Symplectic, &[2]), &sp2, DEFAULT_CAP).unwrap();
        assert_eq!(s, vec![sp(&[(2, MultForm::Orth(1, 0))]), sp(&[(2, MultForm::Orth(0, 1))])]);

        let small = AdmissibleTableau::zero_orbit(MultForm::Orth(1, 0));
        let s = lift_orbit_support(&small, &orbit(LieType::Symplectic, &[4]), &sp4, DEFAULT_CAP).unwrap();
        assert!(s.is_empty());
    }

    #[test]
    fn induce_examples() {
        let s2 = ClassicalSignature::new(Star::C, 4, 4);
        let o = induce_orbit(&orbit(LieType::Orthogonal, &[3, 1, 1, 1]), &s2, DEFAULT_CAP).unwrap();
        assert_eq!(o, orbit(LieType::Symplectic, &[4, 2, 2]));

        let s2 = ClassicalSignature::new(Star::D, 2, 2);
        let o = induce_orbit(&orbit(LieType::Symplectic, &[2]), &s2, DEFAULT_CAP).unwrap();
        assert_eq!(o, orbit(LieType::Orthogonal, &[3, 1]));

        let s2 = ClassicalSignature::new(Star::B, 2, 1);
        let e = induce_orbit(&orbit(LieType::Symplectic, &[2]), &s2, DEFAULT_CAP).unwrap_err();
        assert!(matches!(e, ThetaError::NoCandidate(_)));
    }
}

//! Growth exponents and the thresholds they feed.
//!
//! For a classical signature `s`, `ν_s` is the exponent with
//! `Ψ_s^{ν_s} ≲ Ξ_s`; `ν_s⁺` is the least even integer `≥ ν_s`. A
//! representation bound `ν` decides whether theta lifting by integration
//! converges, and the lift then carries a bound of its own.
//! Harish-Chandra's `Ξ` itself never appears: only the thresholds do.

use std::cmp::Ordering;
use std::fmt;

use serde::{Serialize, Serializer};

use crate::dual_pairs::{ensure_dual, ClassicalSignature, Star};
use crate::error::ThetaError;
use crate::scalar::{parse_scalar, Scalar};
use crate::Result;

/// A growth bound: a number, or `−∞` when nothing is known.
#[derive(Debug, Clone, PartialEq)]
pub enum Nu<T> {
    NegInfinity,
    Finite(T),
}

impl<T: Scalar> Nu<T> {
    pub fn int(n: i64) -> Nu<T> {
        Nu::Finite(T::from_int(n))
    }

    /// Strict comparison against an integer threshold.
    pub fn exceeds(&self, threshold: i64) -> bool {
        match self {
            Nu::NegInfinity => false,
            Nu::Finite(v) => *v > T::from_int(threshold),
        }
    }

    pub fn parse(text: &str) -> Option<Nu<T>> {
        match text.trim() {
            "-inf" | "-infinity" | "−∞" => Some(Nu::NegInfinity),
            other => parse_scalar(other).map(Nu::Finite),
        }
    }
}

impl<T: Scalar> PartialOrd for Nu<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match (self, other) {
            (Nu::NegInfinity, Nu::NegInfinity) => Some(Ordering::Equal),
            (Nu::NegInfinity, _) => Some(Ordering::Less),
            (_, Nu::NegInfinity) => Some(Ordering::Greater),
            (Nu::Finite(a), Nu::Finite(b)) => a.partial_cmp(b),
        }
    }
}

impl<T: Scalar> fmt::Display for Nu<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Nu::NegInfinity => f.write_str("-inf"),
            Nu::Finite(v) => write!(f, "{v}"),
        }
    }
}

impl<T: Scalar> Serialize for Nu<T> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct NuProfile {
    pub nu_s: i64,
    pub nu_s_plus: i64,
}

pub fn nu_profile(s: &ClassicalSignature) -> Result<NuProfile> {
    s.ensure_valid()?;
    let size = s.size() as i64;
    let nu_s = match s.star {
        Star::C | Star::CTilde => size,
        Star::CStar => size - 1,
        Star::B | Star::D => size - 2,
        Star::DStar => size - 3,
    };
    let nu_s_plus = match s.star {
        Star::C | Star::D | Star::CTilde => nu_s,
        Star::B | Star::CStar | Star::DStar => nu_s + 1,
    };
    Ok(NuProfile { nu_s, nu_s_plus })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PairConstants {
    pub kappa: i64,
    /// `ν_{s,s′} = −(κ + 1)`.
    pub nu_pair: i64,
    /// The same constant from the case table in terms of `ν_s` and `|s′|`.
    pub nu_pair_table: i64,
}

impl PairConstants {
    /// Negative `κ` lies outside the good-descent regime.
    pub fn in_good_regime(&self) -> bool {
        self.kappa >= 0
    }
}

pub fn kappa_and_nu_pair(s: &ClassicalSignature, s_prime: &ClassicalSignature) -> Result<PairConstants> {
    ensure_dual(s, s_prime)?;
    let nu_s = nu_profile(s)?.nu_s;
    s_prime.ensure_valid()?;
    let (a, a_prime) = (s.size() as i64, s_prime.size() as i64);
    let kappa = match s_prime.star {
        Star::B | Star::D => a_prime - a - 1,
        Star::C | Star::CTilde => a_prime - a + 1,
        Star::CStar | Star::DStar => a_prime - a,
    };
    let nu_pair_table = if s_prime.star == Star::CStar { nu_s - a_prime + 2 } else { nu_s - a_prime };
    Ok(PairConstants { kappa, nu_pair: -(kappa + 1), nu_pair_table })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ConvergenceFlags {
    /// `ν > ν_s − |s′|`.
    pub convergent: bool,
    /// `ν > ν_s⁺ − |s′|`.
    pub overconvergent: bool,
    /// `|s′| ≥ ν_s`: the oscillator restricted to `G_s` is weakly contained
    /// in the regular representation.
    pub weakly_tempered: bool,
    /// `|s′| ≥ ν_s⁺` and overconvergent: unitarity passes to the lift.
    pub unitarity_preserving: bool,
}

pub fn convergence_report<T: Scalar>(
    nu: &Nu<T>,
    s: &ClassicalSignature,
    s_prime: &ClassicalSignature,
) -> Result<ConvergenceFlags> {
    ensure_dual(s, s_prime)?;
    s_prime.ensure_valid()?;
    let prof = nu_profile(s)?;
    let a_prime = s_prime.size() as i64;
    let overconvergent = nu.exceeds(prof.nu_s_plus - a_prime);
    Ok(ConvergenceFlags {
        convergent: nu.exceeds(prof.nu_s - a_prime),
        overconvergent,
        weakly_tempered: a_prime >= prof.nu_s,
        unitarity_preserving: a_prime >= prof.nu_s_plus && overconvergent,
    })
}

/// Bound `|s| − ν_{s′}` of the lift by integration.
pub fn lift_bound(s: &ClassicalSignature, s_prime: &ClassicalSignature) -> Result<i64> {
    ensure_dual(s, s_prime)?;
    s.ensure_valid()?;
    Ok(s.size() as i64 - nu_profile(s_prime)?.nu_s)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(bound(serialize = "T: Scalar"))]
pub struct ChainStep<T> {
    pub from: ClassicalSignature,
    pub to: ClassicalSignature,
    pub kappa: i64,
    pub nu_pair: i64,
    pub nu_in: Nu<T>,
    pub flags: ConvergenceFlags,
    /// Bound of the lift, or `−∞` when the step does not converge.
    pub nu_out: Nu<T>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(bound(serialize = "T: Scalar"))]
pub struct ChainPlan<T> {
    pub start: ClassicalSignature,
    pub nu0: Nu<T>,
    pub steps: Vec<ChainStep<T>>,
    pub first_not_convergent: Option<usize>,
    pub first_not_unitarity_preserving: Option<usize>,
    pub note: &'static str,
}

const CHAIN_NOTE: &str = "sufficient conditions only; representation contents are not modelled";

/// Folds [`convergence_report`] and [`lift_bound`] along `start → targets`.
pub fn plan_chain<T: Scalar>(
    start: &ClassicalSignature,
    nu0: Nu<T>,
    targets: &[ClassicalSignature],
) -> Result<ChainPlan<T>> {
    start.ensure_valid()?;
    let mut steps = Vec::with_capacity(targets.len());
    let mut from = *start;
    let mut nu = nu0.clone();
    for to in targets {
        let pair = kappa_and_nu_pair(&from, to)?;
        let flags = convergence_report(&nu, &from, to)?;
        let nu_out = if flags.convergent { Nu::int(lift_bound(&from, to)?) } else { Nu::NegInfinity };
        steps.push(ChainStep {
            from,
            to: *to,
            kappa: pair.kappa,
            nu_pair: pair.nu_pair,
            nu_in: nu,
            flags,
            nu_out: nu_out.clone(),
        });
        from = *to;
        nu = nu_out;
    }
    Ok(ChainPlan {
        start: *start,
        nu0,
        first_not_convergent: steps.iter().position(|s| !s.flags.convergent),
        first_not_unitarity_preserving: steps.iter().position(|s| !s.flags.unitarity_preserving),
        steps,
        note: CHAIN_NOTE,
    })
}

/// `Ψ = ∏_a ((1 + a)/2)^{−1/2}`, kept as its exact square with the root
/// when the number system has it.
#[derive(Debug, Clone, PartialEq)]
pub struct PsiValue<T> {
    pub squared: T,
    pub value: Option<T>,
    pub approx: f64,
}

pub fn psi_eval<T: Scalar>(eigenvalues: &[T]) -> Result<PsiValue<T>> {
    if let Some(bad) = eigenvalues.iter().find(|a| !a.is_positive()) {
        return Err(ThetaError::NonPositiveEigenvalue(bad.to_string()));
    }
    let count = |x: &T| eigenvalues.iter().filter(|b| b.close_to(x)).count();
    for a in eigenvalues {
        let inv = T::one() / a.clone();
        if count(a) != count(&inv) {
            return Err(ThetaError::NotInversionClosed);
        }
    }
    let two = T::from_int(2);
    let squared = eigenvalues.iter().fold(T::one(), |acc, a| acc * two.clone() / (T::one() + a.clone()));
    let approx = squared.to_f64().unwrap_or(f64::NAN).sqrt();
    Ok(PsiValue { value: squared.sqrt_exact(), squared, approx })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct DoublingSignatures {
    pub kappa: i64,
    pub s0: ClassicalSignature,
    pub s_double_prime: ClassicalSignature,
    pub s_dot: ClassicalSignature,
    /// `|s| + κ`.
    pub split_rank: i64,
    /// `|s′| − 1`, `|s′| + 1` or `|s′|` by the label of `s′`.
    pub expected_split_rank: i64,
}

impl DoublingSignatures {
    pub fn split_rank_ok(&self) -> bool {
        self.split_rank == self.expected_split_rank
    }
}

/// `s₀ = (⋆̇, κ, κ)`, `s″ = (⋆, p+κ, q+κ)` and `ṡ = (⋆̇, |s|+κ, |s|+κ)`,
/// with `⋆̇ = D` for `⋆ = B` and `⋆̇ = ⋆` otherwise.
pub fn doubling_signatures(s: &ClassicalSignature, s_prime: &ClassicalSignature) -> Result<DoublingSignatures> {
    let pair = kappa_and_nu_pair(s, s_prime)?;
    if pair.kappa < 0 {
        return Err(ThetaError::NegativeKappa(pair.kappa));
    }
    let k = pair.kappa as u32;
    let star_dot = if s.star == Star::B { Star::D } else { s.star };
    let out = DoublingSignatures {
        kappa: pair.kappa,
        s0: ClassicalSignature::new(star_dot, k, k),
        s_double_prime: ClassicalSignature::new(s.star, s.p + k, s.q + k),
        s_dot: ClassicalSignature::new(star_dot, s.size() + k, s.size() + k),
        split_rank: s.size() as i64 + pair.kappa,
        expected_split_rank: match s_prime.star {
            Star::B | Star::D => s_prime.size() as i64 - 1,
            Star::C | Star::CTilde => s_prime.size() as i64 + 1,
            Star::CStar | Star::DStar => s_prime.size() as i64,
        },
    };
    for sig in [out.s0, out.s_double_prime, out.s_dot] {
        sig.ensure_valid()?;
    }
    Ok(out)
}

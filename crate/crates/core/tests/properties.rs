mod common;

use common::lifreg_failures;

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use proptest::prelude::*;
use theta_core::conservation::{Fact, IndexKey, Ledger};
use theta_core::dual_pairs::{ClassicalSignature, Star};
use theta_core::formed_spaces::{DiscChar, Field, FormedSpace, Parity, TowerSign, WittTower};
use theta_core::growth::{convergence_report, doubling_signatures, kappa_and_nu_pair, nu_profile, psi_eval, Nu};
use theta_core::moment_descent::{complex_descend, descend};
use theta_core::orbits::{
    enumerate_complex_orbits, partitions, real_forms_of, AdmissibleTableau, ComplexOrbit, LieType, Partition,
    DEFAULT_CAP,
};
use theta_core::{Rational, ThetaError};

fn partition_count(n: usize) -> usize {
    let mut ways = vec![0usize; n + 1];
    ways[0] = 1;
    for part in 1..=n {
        for total in part..=n {
            ways[total] += ways[total - part];
        }
    }
    ways[n]
}

fn all_partitions(n: u32) -> Vec<Partition> {
    partitions(n).collect()
}

fn valid_signature() -> impl Strategy<Value = ClassicalSignature> {
    (0usize..6, 0u32..8, 0u32..8)
        .prop_filter_map("invalid signature", |(i, p, q)| ClassicalSignature::checked(Star::ALL[i], p, q).ok())
}

fn dual_pair() -> impl Strategy<Value = (ClassicalSignature, ClassicalSignature)> {
    (valid_signature(), 0u32..8, 0u32..8).prop_filter_map("invalid dual", |(s, p, q)| {
        ClassicalSignature::checked(s.star.howe_dual(), p, q).ok().map(|t| (s, t))
    })
}

fn bounds(ledger: &Ledger) -> Result<BTreeMap<IndexKey, (i64, Option<i64>)>, ThetaError> {
    Ok(ledger.infer()?.intervals.iter().map(|(k, iv)| (k.clone(), iv.bounds())).collect())
}

fn contains(outer: &(i64, Option<i64>), inner: &(i64, Option<i64>)) -> bool {
    let hi_ok = match (outer.1, inner.1) {
        (None, _) => true,
        (Some(_), None) => false,
        (Some(a), Some(b)) => b <= a,
    };
    inner.0 >= outer.0 && hi_ok
}

fn orth_fact() -> impl Strategy<Value = Fact> {
    (prop::sample::select(vec!["pi", "sigma"]), any::<bool>(), 0u32..8, any::<bool>(), any::<bool>()).prop_map(
        |(label, twisted, dim, occurred, exact)| {
            let f = Fact::orth(label, twisted, dim, occurred);
            if exact {
                f.exact()
            } else {
                f
            }
        },
    )
}

fn real_symp_fact() -> impl Strategy<Value = Fact> {
    (prop::sample::select(vec![-6i64, -4, -2, 0, 2, 4, 6]), 0u32..5, any::<bool>(), 0u8..4).prop_map(
        |(k, j, occurred, exact)| {
            let f = Fact::symp("pi", WittTower::Real { k }, k.unsigned_abs() as u32 + 2 * j, occurred);
            if exact == 0 {
                f.exact()
            } else {
                f
            }
        },
    )
}

fn orth_ledger() -> impl Strategy<Value = Ledger> {
    (1u32..7, prop::collection::vec(orth_fact(), 0..6)).prop_map(|(dim_v, facts)| {
        let mut l = Ledger::orthogonal(dim_v).with_label("pi").with_label("sigma");
        l.apply_stable_range().unwrap();
        l.apply_conservation().unwrap();
        l.facts = facts;
        l
    })
}

fn real_symp_ledger() -> impl Strategy<Value = Ledger> {
    (0u32..3, prop::collection::vec(real_symp_fact(), 0..5)).prop_map(|(n, facts)| {
        let mut l = Ledger::symplectic(Field::Real, Parity::Even, 2 * n).unwrap().with_label("pi");
        l.apply_conservation().unwrap();
        l.facts = facts;
        l
    })
}

fn any_ledger() -> impl Strategy<Value = Ledger> {
    prop_oneof![orth_ledger(), real_symp_ledger()]
}

fn inversion_closed() -> impl Strategy<Value = Vec<BigRational>> {
    prop::collection::vec((1i64..20, 1i64..20), 0..5).prop_map(|pairs| {
        let mut out = Vec::new();
        for (n, d) in pairs {
            let a = BigRational::new(BigInt::from(n), BigInt::from(d));
            out.push(a.recip());
            out.push(a);
        }
        out
    })
}

#[test]
fn partition_counts_match_generating_function() {
    for n in 0..=16 {
        assert_eq!(partitions(n).count(), partition_count(n as usize), "n = {n}");
    }
}

#[test]
fn dominance_is_a_partial_order_reversed_by_transpose() {
    for n in 0..=8 {
        let ps = all_partitions(n);
        for a in &ps {
            assert!(a.dominance_leq(a).unwrap());
            for b in &ps {
                let ab = a.dominance_leq(b).unwrap();
                if ab && b.dominance_leq(a).unwrap() {
                    assert_eq!(a, b);
                }
                assert_eq!(ab, b.transpose().dominance_leq(&a.transpose()).unwrap(), "{a} {b}");
                for c in &ps {
                    if ab && b.dominance_leq(c).unwrap() {
                        assert!(a.dominance_leq(c).unwrap());
                    }
                }
            }
        }
    }
}

#[test]
fn real_forms_complexify_back() {
    for lie_type in [LieType::Orthogonal, LieType::Symplectic] {
        for size in 0..=9 {
            for orbit in enumerate_complex_orbits(lie_type, size, DEFAULT_CAP).unwrap() {
                let forms = real_forms_of(&orbit);
                assert!(!forms.is_empty(), "{orbit}");
                for tab in forms {
                    tab.ensure_valid().unwrap();
                    assert_eq!(tab.complexify(), orbit);
                }
            }
        }
    }
}

#[test]
fn complex_orbit_parity_rule() {
    for n in 0..=10 {
        let orth = enumerate_complex_orbits(LieType::Orthogonal, n, DEFAULT_CAP).unwrap();
        let brute = all_partitions(n)
            .into_iter()
            .filter(|p| p.multiplicities().iter().all(|&(t, m)| t % 2 == 1 || m % 2 == 0))
            .count();
        assert_eq!(orth.len(), brute);
        let symp = enumerate_complex_orbits(LieType::Symplectic, n, DEFAULT_CAP).unwrap();
        let brute = if n % 2 == 1 {
            0
        } else {
            all_partitions(n)
                .into_iter()
                .filter(|p| p.multiplicities().iter().all(|&(t, m)| t % 2 == 0 || m % 2 == 0))
                .count()
        };
        assert_eq!(symp.len(), brute);
    }
}

fn real_target(tab: &AdmissibleTableau, p: u32, q: u32) -> FormedSpace {
    match tab.eps.lie_type() {
        LieType::Symplectic => FormedSpace::real(p, q),
        LieType::Orthogonal => FormedSpace::symplectic(Field::Real, 2 * ((p + q) / 2)).unwrap(),
    }
}

#[test]
fn real_descent_commutes_with_complexification() {
    let mut checked = 0;
    for lie_type in [LieType::Orthogonal, LieType::Symplectic] {
        for size in 0..=6 {
            for orbit in enumerate_complex_orbits(lie_type, size, DEFAULT_CAP).unwrap() {
                for tab in real_forms_of(&orbit) {
                    for p in 0..=5 {
                        for q in 0..=5 {
                            let v = real_target(&tab, p, q);
                            let Ok(d) = descend(&tab, &v) else { continue };
                            checked += 1;
                            d.orbit.ensure_valid().unwrap();
                            assert_eq!(d.orbit.total_space().unwrap(), v, "{tab} -> {v}");
                            assert_eq!(d.orbit.eps, tab.eps.flip());
                            assert_eq!(d.orbit.complexify(), complex_descend(&orbit, v.dim()).unwrap(), "{tab} -> {v}");
                            assert_eq!(d.b, v.dim() - (orbit.size() - orbit.partition.len() as u32));
                        }
                    }
                }
            }
        }
    }
    assert!(checked > 100);
}

#[test]
fn check_lift_inverts_regular_descent() {
    let failures = lifreg_failures(8);
    assert!(failures.is_empty(), "{failures:#?}");
}

#[test]
fn real_towers_round_trip() {
    for k in -9i64..=9 {
        let t = WittTower::Real { k };
        for r in 0..5 {
            let v = t.space_at(r).unwrap();
            assert_eq!(v.tower().unwrap(), t);
            assert_eq!(v.witt_index() as i64, r);
        }
    }
    for eps in [Parity::Even, Parity::Odd] {
        for chi in [DiscChar::Trivial, DiscChar::Nontrivial] {
            for sign in [TowerSign::Plus, TowerSign::Minus] {
                let v = FormedSpace::nonarch(eps, chi, sign, 2);
                assert_eq!(v.tower().unwrap().space_at(2).unwrap(), v);
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig { failure_persistence: None, ..ProptestConfig::with_cases(256) })]

    #[test]
    fn infer_is_idempotent(ledger in any_ledger()) {
        if let Ok(inf) = ledger.infer() {
            let again = bounds(&inf.to_ledger()).unwrap();
            let first: BTreeMap<_, _> = inf.intervals.iter().map(|(k, iv)| (k.clone(), iv.bounds())).collect();
            prop_assert_eq!(again, first);
        }
    }

    #[test]
    fn infer_is_monotone(ledger in any_ledger(), extra in prop_oneof![orth_fact(), real_symp_fact()]) {
        let mut bigger = ledger.clone();
        let same_side = match ledger.side {
            theta_core::conservation::Side::Orthogonal => extra.tower.is_none(),
            theta_core::conservation::Side::Symplectic => extra.tower.is_some(),
        };
        prop_assume!(same_side);
        bigger.facts.push(extra);
        match (bounds(&ledger), bounds(&bigger)) {
            (Ok(small), Ok(big)) => {
                for (key, outer) in &small {
                    let inner = big.get(key).expect("index disappeared");
                    prop_assert!(contains(outer, inner), "{}: {:?} not inside {:?}", key, inner, outer);
                }
            }
            (Err(_), Ok(_)) => prop_assert!(false, "adding a fact resolved a contradiction"),
            _ => {}
        }
    }

    #[test]
    fn infer_ignores_fact_order(ledger in any_ledger(), seed in any::<u64>()) {
        use rand::seq::SliceRandom;
        use rand::SeedableRng;
        let mut shuffled = ledger.clone();
        shuffled.facts.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(seed));
        let (a, b) = (bounds(&ledger), bounds(&shuffled));
        prop_assert_eq!(a.is_ok(), b.is_ok());
        if let (Ok(a), Ok(b)) = (a, b) {
            prop_assert_eq!(a, b);
        }
    }

    #[test]
    fn contradictions_carry_minimal_traces(ledger in any_ledger()) {
        if let Err(ThetaError::Contradiction(c)) = ledger.infer() {
            let mut core = ledger.clone();
            core.facts = c.facts.clone();
            prop_assert!(core.infer().is_err(), "trace alone is consistent: {}", c);
            for i in 0..c.facts.len() {
                let mut fewer = core.clone();
                fewer.facts.remove(i);
                prop_assert!(fewer.infer().is_ok(), "trace is not minimal: {}", c);
            }
        }
    }

    #[test]
    fn ledger_json_round_trip(ledger in any_ledger()) {
        let text = serde_json::to_string(&ledger).unwrap();
        let back: Ledger = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(&back, &ledger);
    }

    #[test]
    fn psi_bounded_and_multiplicative(a in inversion_closed(), b in inversion_closed()) {
        let one = BigRational::from_integer(1.into());
        let pa = psi_eval(&a).unwrap();
        let pb = psi_eval(&b).unwrap();
        let joined: Vec<BigRational> = a.iter().chain(b.iter()).cloned().collect();
        let pab = psi_eval(&joined).unwrap();
        prop_assert!(pa.squared > BigRational::from_integer(0.into()) && pa.squared <= one);
        prop_assert_eq!(pab.squared, pa.squared * pb.squared);
    }

    #[test]
    fn nu_plus_is_least_even_upper_bound(s in valid_signature()) {
        let prof = nu_profile(&s).unwrap();
        prop_assert_eq!(prof.nu_s_plus.rem_euclid(2), 0);
        prop_assert!(prof.nu_s_plus == prof.nu_s || prof.nu_s_plus == prof.nu_s + 1);
    }

    #[test]
    fn convergence_flags_are_monotone((s, t) in dual_pair(), nu in -20i64..20) {
        let lo = convergence_report(&Nu::<Rational>::int(nu), &s, &t).unwrap();
        let hi = convergence_report(&Nu::<Rational>::Finite(Ratio::new(2 * nu + 1, 2)), &s, &t).unwrap();
        prop_assert!(!lo.convergent || hi.convergent);
        prop_assert!(!lo.overconvergent || hi.overconvergent);
        prop_assert!(!lo.overconvergent || lo.convergent);
        prop_assert!(!lo.unitarity_preserving || lo.weakly_tempered);
        let none = convergence_report(&Nu::<Rational>::NegInfinity, &s, &t).unwrap();
        prop_assert!(!none.convergent && !none.overconvergent);
    }

    #[test]
    fn pair_constant_identity((s, t) in dual_pair()) {
        let c = kappa_and_nu_pair(&s, &t).unwrap();
        prop_assert_eq!(c.nu_pair, -(c.kappa + 1));
        prop_assert_eq!(c.nu_pair, c.nu_pair_table);
    }

    #[test]
    fn doubling_outputs_are_valid((s, t) in dual_pair()) {
        match doubling_signatures(&s, &t) {
            Ok(d) => {
                for sig in [d.s0, d.s_double_prime, d.s_dot] {
                    prop_assert!(sig.validate().is_ok());
                }
                prop_assert!(d.split_rank_ok());
                prop_assert_eq!(d.s_dot.size() as i64, 2 * d.split_rank);
            }
            Err(ThetaError::NegativeKappa(k)) => prop_assert!(k < 0),
            Err(ThetaError::InvalidSignature { .. }) => prop_assert_eq!(s.star, Star::CStar),
            Err(e) => prop_assert!(false, "unexpected error {}", e),
        }
    }

    #[test]
    fn complex_orbit_sizes(lie in prop::sample::select(vec![LieType::Orthogonal, LieType::Symplectic]), n in 0u32..10) {
        for o in enumerate_complex_orbits(lie, n, DEFAULT_CAP).unwrap() {
            prop_assert_eq!(o.size(), n);
            prop_assert!(ComplexOrbit::checked(lie, o.partition.parts().to_vec()).is_ok());
        }
    }
}

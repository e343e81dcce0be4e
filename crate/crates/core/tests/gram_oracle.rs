mod common;

use common::{all_tableaux, inertia, is_skew, is_symmetric, rank, sl2_form, tableau_gram};
use theta_core::formed_spaces::FormedSpace;
use theta_core::moment_descent::descend;
use theta_core::orbits::{AdmissibleTableau, Epsilon, MultForm, TableauRow};

#[test]
fn sl2_module_forms() {
    assert_eq!(inertia(&sl2_form(1)), (1, 0, 0));
    assert_eq!(inertia(&sl2_form(3)), (2, 1, 0));
    assert_eq!(inertia(&sl2_form(5)), (3, 2, 0));
    assert!(is_skew(&sl2_form(2)));
    assert!(is_skew(&sl2_form(4)));
}

#[test]
fn total_signature_matches_gram_inertia() {
    let tableaux = all_tableaux(6);
    assert!(tableaux.len() > 50);
    for tab in tableaux {
        let gram = tableau_gram(&tab);
        assert_eq!(gram.len() as u32, tab.total_dim(), "{tab}");
        match tab.eps {
            Epsilon::Plus => {
                assert!(is_symmetric(&gram), "{tab}");
                let (p, q, z) = inertia(&gram);
                assert_eq!(z, 0, "{tab} degenerate");
                assert_eq!(tab.total_signature().unwrap(), (p, q), "{tab}");
            }
            Epsilon::Minus => {
                assert!(is_skew(&gram), "{tab}");
                assert_eq!(rank(&gram), gram.len(), "{tab}");
                assert!(tab.total_signature().is_err());
            }
        }
    }
}

#[test]
fn descent_kernels_match_gram_inertia() {
    let source = AdmissibleTableau::from_rows(Epsilon::Minus, vec![TableauRow::new(4, MultForm::Orth(1, 0))]).unwrap();
    let v = FormedSpace::real(2, 1);
    let d = descend(&source, &v).unwrap();
    let (p, q, _) = inertia(&tableau_gram(&d.orbit));
    assert_eq!((p, q), (2, 1));
    assert_eq!(d.b, 0);
    assert_eq!(d.orbit.rows, vec![TableauRow::new(3, MultForm::Orth(1, 0))]);

    let source = AdmissibleTableau::from_rows(Epsilon::Minus, vec![TableauRow::new(2, MultForm::Orth(1, 0))]).unwrap();
    let v = FormedSpace::real(1, 1);
    let d = descend(&source, &v).unwrap();
    let embedded: Vec<TableauRow> = source.rows.iter().map(|r| TableauRow::new(r.t - 1, r.form)).collect();
    let embedded = AdmissibleTableau { eps: Epsilon::Plus, rows: embedded };
    let (ep, eq, _) = inertia(&tableau_gram(&embedded));
    assert_eq!((1 - ep, 1 - eq), (0, 1));
    assert_eq!(d.kernel_form, FormedSpace::real(0, 1));
    assert_eq!(d.b, 1);
    let (p, q, _) = inertia(&tableau_gram(&d.orbit));
    assert_eq!((p, q), (1, 1));
}

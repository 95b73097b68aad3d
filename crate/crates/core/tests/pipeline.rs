use ttstar_core::birkhoff::{birkhoff_factorize, s_matrix, s_matrix_closed_form, Frame};
use ttstar_core::painleve::{oracle_fn, pde_residual, PainleveIII, OdeConfig, SSeries};
use ttstar_core::qde::j_coeffs;
use ttstar_core::ttstar::{curvature_from_laplacian, curvature_series, metric_h, tt_star_scalar_residual};

#[test]
fn s_matrix_two_routes() {
    let (j0, j1) = j_coeffs(5);
    assert_eq!(s_matrix(5).unwrap(), s_matrix_closed_form(&j0, &j1).unwrap());
}

#[test]
fn factorization_reproduces_s() {
    let s = s_matrix(4).unwrap();
    let f = birkhoff_factorize(&s).unwrap();
    assert_eq!(f.btilde.checked_mul(&f.ctilde).unwrap(), s);
    assert_eq!(f.btilde, Frame::compute(4).unwrap().factors.btilde);
}

#[test]
fn metric_solves_tt_star_and_matches_oracle() {
    let m = metric_h(5).unwrap();
    assert!(tt_star_scalar_residual(&m.h).unwrap().is_zero());
    assert_eq!(oracle_fn(5).unwrap(), m.f);
    let s = SSeries::from_coeffs(&m.f, 5);
    assert!(pde_residual(&s).coeffs().iter().all(|c| c.is_zero()));
}

#[test]
fn curvature_two_routes() {
    let m = metric_h(4).unwrap();
    assert_eq!(curvature_series(&m).unwrap(), curvature_from_laplacian(&m).unwrap());
}

#[test]
fn ode_agrees_with_exact_series() {
    let p = PainleveIII::solve(OdeConfig::default()).unwrap();
    for q in [0.002, 0.01, 0.04] {
        let exact = p.series().h(q);
        assert!(((p.h(q).unwrap() - exact) / exact).abs() < 1e-8);
    }
}

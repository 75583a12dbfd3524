use proptest::prelude::*;

use torus_layer::published::Column;
use torus_layer::spectra::QuadratureConfig;
use torus_layer::{
    BasisFunction, ModelOperator, SolveConfig, build_basis, gram_schmidt, solve, symmetric_eigen,
};

fn eigenvalues_via_gram_schmidt(cfg: &SolveConfig, basis: &[BasisFunction]) -> Vec<f64> {
    let geom = cfg.validate().unwrap();
    let grid = cfg.grid(&geom).unwrap();
    let op = ModelOperator::new(cfg.model(), geom, cfg.confinement, cfg.basis.m).unwrap();
    let a = op.assemble(basis, &grid).unwrap();
    let ortho = gram_schmidt(basis, &grid).unwrap();
    let projected = a.h.congruence(&ortho.coefficients).symmetrized();
    symmetric_eigen(&projected).unwrap().into_iter().map(|p| p.value).collect()
}

#[test]
fn spectrum_does_not_depend_on_basis_order() {
    for col in Column::ALL {
        let cfg = col.config().unwrap();
        let basis = build_basis(&cfg.basis, cfg.confinement.as_ref()).unwrap();
        let forward = eigenvalues_via_gram_schmidt(&cfg, &basis);
        let reversed: Vec<_> = basis.iter().rev().copied().collect();
        let mut interleaved: Vec<_> = basis.iter().step_by(2).copied().collect();
        interleaved.extend(basis.iter().skip(1).step_by(2).copied());
        for permuted in [reversed, interleaved] {
            let other = eigenvalues_via_gram_schmidt(&cfg, &permuted);
            for (x, y) in forward.iter().zip(&other) {
                assert!((x - y).abs() < 1e-10, "{}: {x} vs {y}", col.label());
            }
        }
    }
}

#[test]
fn quadrature_doubling_changes_beta_below_1e_minus_6() {
    for col in Column::ALL {
        let cfg = col.config().unwrap();
        let mut fine = cfg;
        fine.quadrature = QuadratureConfig {
            n_theta: 2 * cfg.quadrature.n_theta,
            n_q: 2 * cfg.quadrature.n_q,
            ..cfg.quadrature
        };
        let a = solve(&cfg).unwrap().betas();
        let b = solve(&fine).unwrap().betas();
        for (x, y) in a.iter().zip(&b) {
            assert!((x - y).abs() < 1e-6, "{}: {x} vs {y}", col.label());
        }
    }
}

#[test]
fn theta_growth_three_to_six_is_monotone_and_small() {
    let mut cfg = Column::HardwallL25.config().unwrap();
    cfg.table_reproduction = false;
    let mut ground = Vec::new();
    for n_theta in 3..=6 {
        cfg.basis.n_theta = n_theta;
        ground.push(solve(&cfg).unwrap().ground_sector_betas()[0]);
    }
    assert!(ground.windows(2).all(|w| w[1] <= w[0]), "{ground:?}");
    assert!(ground[0] - ground[3] < 5e-3, "{ground:?}");
}

#[test]
fn growing_either_ladder_lowers_every_level() {
    for col in [Column::HardwallL10, Column::OscillatorOmega005] {
        let mut base = col.config().unwrap();
        base.table_reproduction = false;
        let small = solve(&base).unwrap().betas();
        for (dt, dq) in [(1, 0), (0, 1), (2, 1)] {
            let mut grown = base;
            grown.basis.n_theta += dt;
            grown.basis.n_q += dq;
            let large = solve(&grown).unwrap().betas();
            for (s, l) in small.iter().zip(&large) {
                assert!(*l <= s + 1e-12, "{}: {s} -> {l}", col.label());
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rayleigh_quotient_bounds_ground_energy(c in prop::collection::vec(-1.0f64..1.0, 6)) {
        prop_assume!(c.iter().map(|x| x * x).sum::<f64>() > 1e-3);
        let cfg = Column::HardwallL25.config().unwrap();
        let geom = cfg.validate().unwrap();
        let grid = cfg.grid(&geom).unwrap();
        let basis = build_basis(&cfg.basis, cfg.confinement.as_ref()).unwrap();
        let op = ModelOperator::new(cfg.model(), geom, cfg.confinement, 0).unwrap();
        let a = op.assemble(&basis, &grid).unwrap();
        let quad = |m: &torus_layer::DenseMatrix| {
            c.iter().zip(m.matvec(&c)).map(|(x, y)| x * y).sum::<f64>()
        };
        let quotient = quad(&a.h) / quad(&a.s);
        let ground = solve(&cfg).unwrap().states[0].energy;
        prop_assert!(quotient >= ground - 1e-12 * ground.abs());
    }
}

use proptest::prelude::*;
use tonks_core::lattice::LatticeConfig;
use tonks_core::observables::{
    density_profile, fermi_momentum_distribution, pair_distribution, rspdm_fermi, total_momentum,
    Grid1D,
};
use tonks_core::ManyBodyState;

fn odd(range: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = usize> {
    range.prop_map(|k| 2 * k + 1)
}

fn state(m: usize, n: usize, q: f64) -> ManyBodyState {
    ManyBodyState::ground_state(&LatticeConfig::dimensionless(m, q).unwrap(), n, 1e-12).unwrap()
}

/// Smallest eigenvalue of a symmetric matrix by shifted power iteration.
fn min_eigenvalue(a: &[Vec<f64>]) -> f64 {
    let n = a.len();
    let norm: f64 = a
        .iter()
        .map(|r| r.iter().map(|v| v.abs()).sum::<f64>())
        .fold(0.0, f64::max);
    let mut x = vec![1.0 / (n as f64).sqrt(); n];
    for (i, v) in x.iter_mut().enumerate() {
        *v += 1e-3 * (i as f64).sin();
    }
    let mut mu = 0.0;
    for _ in 0..3000 {
        let y: Vec<f64> = (0..n)
            .map(|i| norm * x[i] - a[i].iter().zip(&x).map(|(p, q)| p * q).sum::<f64>())
            .collect();
        let len = y.iter().map(|v| v * v).sum::<f64>().sqrt();
        mu = len;
        x = y.iter().map(|v| v / len).collect();
    }
    norm - mu
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn fermi_observables_are_consistent(m in odd(0..=3), k in 0usize..=4, q in 0.0f64..3.0) {
        let n = (2 * k + 1).min(2 * m + 1);
        let s = state(m, n, q);
        let grid = Grid1D::symmetric(s.box_length(), 24 * m + 1).unwrap();
        let rho = density_profile(&s, &grid);
        prop_assert!((grid.integrate(&rho) - n as f64).abs() < 1e-8);
        prop_assert!(rho.iter().all(|&r| r >= 0.0));

        let dm = rspdm_fermi(&s, &grid);
        prop_assert!(dm.is_symmetric());
        let h = grid.spacing();
        let scaled: Vec<Vec<f64>> = dm.values.iter().map(|r| r.iter().map(|v| v * h).collect()).collect();
        prop_assert!(min_eigenvalue(&scaled) > -1e-10);

        let d = pair_distribution(&s, &grid);
        if n > 1 {
            prop_assert!((d.integral() / (n * (n - 1)) as f64 - 1.0).abs() < 1e-6);
        }

        let md = fermi_momentum_distribution(&s);
        prop_assert!((md.total() - n as f64).abs() < 1e-10);
        prop_assert!(md.occupations.iter().all(|&x| (-1e-12..=1.0 + 1e-12).contains(&x)));
        prop_assert!(total_momentum(&md).value.abs() <= 1e-12);
    }

    #[test]
    fn bose_wavefunction_is_modulus_of_fermi(
        m in odd(1..=4),
        k in 0usize..=2,
        q in 0.0f64..2.0,
        zs in prop::collection::vec(0.0f64..1.0, 5),
    ) {
        let n = (2 * k + 1).min(2 * m + 1);
        let s = state(m, n, q);
        let coords: Vec<f64> = zs[..n].iter().map(|u| u * s.box_length()).collect();
        let f = s.fermi_wavefunction(&coords);
        let b = s.bose_wavefunction(&coords);
        prop_assert!((b - f.abs()).abs() <= 1e-12 * (1.0 + f.abs()));
    }
}

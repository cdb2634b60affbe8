use proptest::prelude::*;

use orlicz_lab::forms::{DiscreteForm, Grid};
use orlicz_lab::group::GroupModel;
use orlicz_lab::orlicz::{luxemburg_norm, modular, MeasureSpace, YoungFunction};
use orlicz_lab::simplicial::{Cochain, ComplexSpec};

fn phi_strategy() -> impl Strategy<Value = YoungFunction> {
    prop_oneof![
        (1.1f64..4.0).prop_map(|p| YoungFunction::power(p).unwrap()),
        (1.5f64..3.0, 0.5f64..3.0).prop_map(|(p, k)| YoungFunction::log_damped(p, k).unwrap()),
    ]
}

fn space_and_values() -> impl Strategy<Value = (Vec<f64>, Vec<f64>, Vec<f64>)> {
    (1usize..32).prop_flat_map(|n| {
        (
            prop::collection::vec(0.01f64..5.0, n),
            prop::collection::vec(-100.0f64..100.0, n),
            prop::collection::vec(-100.0f64..100.0, n),
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn norm_is_homogeneous_and_subadditive(phi in phi_strategy(), (w, f, g) in space_and_values(), lambda in -10.0f64..10.0) {
        let space = MeasureSpace::from_weights(&w).unwrap();
        let norm = |v: &[f64]| luxemburg_norm(&phi, v, &space, 1e-13).unwrap().value();
        let nf = norm(&f);
        let lf: Vec<f64> = f.iter().map(|v| lambda * v).collect();
        let fg: Vec<f64> = f.iter().zip(&g).map(|(a, b)| a + b).collect();
        prop_assert!((norm(&lf) - lambda.abs() * nf).abs() <= 1e-9 * (lambda.abs() * nf).max(1e-300));
        prop_assert!(norm(&fg) <= (nf + norm(&g)) * (1.0 + 1e-9));
    }

    #[test]
    fn modular_is_at_most_one_at_the_norm(phi in phi_strategy(), (w, f, _) in space_and_values()) {
        let space = MeasureSpace::from_weights(&w).unwrap();
        let n = luxemburg_norm(&phi, &f, &space, 1e-12).unwrap().value();
        prop_assume!(n > 0.0);
        prop_assert!(modular(&phi, &f, &space, n).unwrap() <= 1.0 + 1e-12);
        prop_assert!(modular(&phi, &f, &space, n * (1.0 - 1e-9)).unwrap() > 1.0 - 1e-6);
    }

    #[test]
    fn quadratic_norm_is_euclidean((w, f, _) in space_and_values()) {
        let space = MeasureSpace::from_weights(&w).unwrap();
        let n = luxemburg_norm(&YoungFunction::power(2.0).unwrap(), &f, &space, 1e-13).unwrap().value();
        let e: f64 = f.iter().zip(&w).map(|(v, w)| w * v * v).sum::<f64>().sqrt();
        prop_assert!((n - e).abs() <= 1e-9 * e.max(1e-300));
    }

    #[test]
    fn young_inverse_round_trips(phi in phi_strategy(), s in 1e-6f64..1e6) {
        let t = phi.inverse(s);
        prop_assert!((phi.eval(t) - s).abs() <= 1e-8 * s);
    }

    #[test]
    fn coboundary_squares_to_zero(vertices in 6usize..40, deg in 2usize..6, seed in 0u64..1000, vals in prop::collection::vec(-50i32..50, 200)) {
        let x = ComplexSpec::RandomBounded { vertices, max_degree: deg, max_dim: 3, seed }.build().unwrap();
        for k in 0..x.dim().saturating_sub(1) {
            let theta = Cochain { degree: k, values: (0..x.count(k)).map(|i| vals[i % vals.len()] as f64).collect() };
            let dd = x.coboundary(&x.coboundary(&theta).unwrap()).unwrap();
            prop_assert!(dd.values.iter().all(|v| *v == 0.0));
        }
    }

    #[test]
    fn affine_group_laws(a in prop::array::uniform3((-2.0f64..2.0, 0.2f64..3.0)), lie in (-1.0f64..1.0, -1.0f64..1.0)) {
        let g = GroupModel::AffineHalfPlane;
        let [x, y, z] = a.map(|(p, q)| vec![p, q]);
        let mut xy = vec![0.0; 2];
        let mut xy_z = vec![0.0; 2];
        let mut yz = vec![0.0; 2];
        let mut x_yz = vec![0.0; 2];
        g.product(&x, &y, &mut xy);
        g.product(&xy, &z, &mut xy_z);
        g.product(&y, &z, &mut yz);
        g.product(&x, &yz, &mut x_yz);
        prop_assert!((xy_z[0] - x_yz[0]).abs() < 1e-12 && (xy_z[1] - x_yz[1]).abs() < 1e-12);
        let v = [lie.0, lie.1];
        let back = g.log(&g.exp(&v)).unwrap();
        prop_assert!((back[0] - v[0]).abs() < 1e-10 && (back[1] - v[1]).abs() < 1e-10);
    }

    #[test]
    fn discrete_exterior_derivative_squares_to_zero(data in prop::collection::vec(-1.0f64..1.0, 64), periodic in any::<bool>()) {
        let grid = Grid::new(vec![0.0, 0.0], vec![1.0, 2.0], vec![8, 8], vec![periodic, false]).unwrap();
        let f = DiscreteForm::from_data(&grid, 0, data).unwrap();
        let dd = f.exterior_derivative().exterior_derivative();
        prop_assert!(dd.sup_norm() < 1e-10);
    }
}

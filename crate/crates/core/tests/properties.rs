use kappa_core::casimir::{deformed_mass_squared, recover_m2};
use kappa_core::coproduct::{antipode, coassociativity_gap, deformed_add};
use kappa_core::deformation::{forward, inverse, solve_a, weyl_forward, witness, CFamily, DeformationParams};
use kappa_core::metric::PRESETS;
use kappa_core::realization::{
    check_closure, classical_field, field, jacobi_residual, lorentz_basis, Basis, Generator,
};
use kappa_core::{jet_eval, Metric};
use proptest::prelude::*;

fn preset() -> impl Strategy<Value = Metric> {
    prop::sample::select(PRESETS.to_vec()).prop_map(|name| Metric::preset(name).unwrap())
}

fn family() -> impl Strategy<Value = CFamily> {
    prop_oneof![
        Just(CFamily::Kappa),
        (0.5..3.0f64).prop_map(CFamily::Constant),
        (-0.5..0.5f64).prop_map(CFamily::Affine),
    ]
}

/// A metric, a point in the unit box of its dimension, and κ.
fn setting() -> impl Strategy<Value = (Metric, Vec<f64>, f64)> {
    preset().prop_flat_map(|m| {
        let n = m.dim();
        (Just(m), prop::collection::vec(-1.0..1.0f64, n), 0.5..5.0f64)
    })
}

fn momentum(n: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-2.0..2.0f64, n)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn constraint_and_denominator_identities((m, p, kappa) in setting(), fam in family()) {
        let params = DeformationParams::new(kappa, fam).unwrap();
        if let Ok(w) = witness(&p, &params, &m) {
            let g00 = m.g00();
            let scale = 1f64.max(w.m2.abs()).max(w.c * w.c);
            prop_assert!((g00 * w.a * w.a - 2.0 * w.a * w.c + w.m2).abs() <= 1e-12 * scale);
            let root = (w.c * w.c - g00 * w.m2).sqrt();
            prop_assert!((w.denominator - root).abs() <= 1e-12 * 1f64.max(root));
            prop_assert_eq!(solve_a(w.m2, w.c, g00).unwrap(), w.a);
        }
    }

    #[test]
    fn inverse_undoes_forward((m, p, kappa) in setting()) {
        let params = DeformationParams::kappa_family(kappa).unwrap();
        prop_assume!(witness(&p, &params, &m).is_ok());
        let m2 = m.mass_squared(&p).unwrap();
        let back = inverse(&forward(&p, &params, &m).unwrap(), &params, &m, m2).unwrap();
        for (x, y) in back.iter().zip(&p) {
            prop_assert!((x - y).abs() <= 1e-10 * 1f64.max(y.abs()));
        }
    }

    #[test]
    fn recovered_mass_matches((m, p, kappa) in setting()) {
        let params = DeformationParams::kappa_family(kappa).unwrap();
        let w = witness(&p, &params, &m);
        // Keep away from P0 + C = 0, where P̃ diverges.
        prop_assume!(w.is_ok_and(|w| w.shifted_energy > 0.05 * kappa));
        let m2 = m.mass_squared(&p).unwrap();
        let pt = forward(&p, &params, &m).unwrap();
        let recovered = recover_m2(&pt, &params, &m).unwrap();
        prop_assert!((recovered - m2).abs() < 1e-8, "{} vs {}", recovered, m2);
    }

    #[test]
    fn weyl_forward_is_the_general_map(p in prop::collection::vec(-1.0..1.0f64, 3), kappa in 0.5..5.0f64) {
        let m = Metric::preset("lightcone3").unwrap();
        let params = DeformationParams::kappa_family(kappa).unwrap();
        prop_assume!(witness(&p, &params, &m).is_ok());
        prop_assert_eq!(weyl_forward(&p, kappa, &m).unwrap(), forward(&p, &params, &m).unwrap());
    }

    #[test]
    fn rotation_antisymmetry((m, p, kappa) in setting(), basis in prop_oneof![Just(Basis::Classical), Just(Basis::Deformed)]) {
        let n = m.dim();
        for i in 1..n {
            for j in 1..n {
                let a = field(Generator::Rotation(i, j), basis, &m, kappa).unwrap().eval(&p).unwrap();
                let b = field(Generator::Rotation(j, i), basis, &m, kappa).unwrap().eval(&p).unwrap();
                for (x, y) in a.iter().zip(&b) {
                    prop_assert_eq!(*x, -*y);
                }
            }
        }
    }

    #[test]
    fn classical_fields_preserve_mass((m, p, _kappa) in setting()) {
        let mass = jet_eval(|x| m.mass_squared(x), &p).unwrap();
        for g in lorentz_basis(m.dim()) {
            let d = classical_field(g, &m).unwrap().directional_derivative(&mass, &p).unwrap();
            prop_assert!(d.abs() < 1e-12);
        }
    }

    #[test]
    fn closure_at_random_points((m, p, kappa) in setting()) {
        for basis in [Basis::Classical, Basis::Deformed] {
            let report = check_closure(basis, &m, kappa, std::slice::from_ref(&p)).unwrap();
            prop_assert!(report.max_residual < 1e-9, "{:?}", report);
        }
    }

    #[test]
    fn jacobi_for_deformed_fields((m, p, kappa) in setting()) {
        let basis = lorentz_basis(m.dim());
        let fields: Vec<_> = basis.iter().take(3).map(|&g| field(g, Basis::Deformed, &m, kappa).unwrap()).collect();
        if fields.len() == 3 {
            prop_assert!(jacobi_residual(&fields[0], &fields[1], &fields[2], &p).unwrap() < 1e-8);
        }
    }

    #[test]
    fn deformed_mass_tends_to_classical(p in momentum(4)) {
        let m = Metric::minkowski(4).unwrap();
        let classical = m.mass_squared(&p).unwrap();
        let far = deformed_mass_squared(&p, &m, 1e6).unwrap();
        prop_assert!((far - classical).abs() < 1e-4 * 1f64.max(classical.abs()));
    }

    #[test]
    fn composition_laws(p in momentum(4), q in momentum(4), r in momentum(4), kappa in 0.5..5.0f64) {
        let zero = vec![0.0; 4];
        prop_assert_eq!(deformed_add(&p, &zero, kappa).unwrap(), p.clone());
        prop_assert_eq!(deformed_add(&zero, &p, kappa).unwrap(), p.clone());
        prop_assert!(coassociativity_gap(&p, &q, &r, kappa).unwrap() < 1e-12 * 1f64.max((-(q[0] + r[0]) / kappa).exp() * 4.0));
        let sum = deformed_add(&p, &q, kappa).unwrap();
        prop_assert_eq!(sum[0], p[0] + q[0]);
        let s = antipode(&p, kappa).unwrap();
        for v in deformed_add(&p, &s, kappa).unwrap().iter().chain(&deformed_add(&s, &p, kappa).unwrap()) {
            prop_assert!(v.abs() < 1e-12 * 1f64.max(p.iter().fold(0.0, |a: f64, x| a.max(x.abs())) * (p[0] / kappa).exp()));
        }
        let twice = antipode(&s, kappa).unwrap();
        for (x, y) in twice.iter().zip(&p) {
            prop_assert!((x - y).abs() <= 1e-12 * 1f64.max(y.abs()));
        }
    }

    #[test]
    fn metric_inverse_for_random_symmetric(n in 2usize..6, entries in prop::collection::vec(-0.3..0.3f64, 36)) {
        let rows: Vec<Vec<f64>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let off = entries[i.min(j) * 6 + i.max(j)];
                        let diag = if i == 0 { 1.0 } else { -1.0 };
                        if i == j { diag + off } else { off }
                    })
                    .collect()
            })
            .collect();
        if let Ok(m) = Metric::new(&rows) {
            prop_assert!(m.inverse_defect() <= 1e-12);
            let p: Vec<f64> = (0..n).map(|i| 0.3 * i as f64 - 0.5).collect();
            let back = m.lower_index(&m.raise(&p));
            for (x, y) in back.iter().zip(&p) {
                prop_assert!((x - y).abs() < 1e-10);
            }
        }
    }
}

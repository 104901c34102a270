use netepi::dist::DegreeDistribution;
use proptest::prelude::*;

fn law() -> impl Strategy<Value = DegreeDistribution> {
    prop_oneof![
        (0usize..12).prop_map(DegreeDistribution::point_mass),
        (0.2f64..15.0).prop_map(|c| DegreeDistribution::poisson(c).unwrap()),
        prop::collection::vec(0.0f64..1.0, 2..15)
            .prop_filter("positive mass", |w| w.iter().sum::<f64>() > 1e-3)
            .prop_map(|w| DegreeDistribution::from_weights(&w).unwrap()),
    ]
}

proptest! {
    #[test]
    fn pmf_is_normalized(d in law()) {
        let total: f64 = d.probs().iter().sum();
        prop_assert!((total - 1.0).abs() < 1e-12);
        prop_assert!(d.probs().iter().all(|&p| p >= 0.0));
    }

    #[test]
    fn laplace_is_log_convex(d in law(), z1 in 0.0f64..20.0, z2 in 0.0f64..20.0) {
        let m = |z: f64| d.laplace(-z).unwrap();
        let mid = m(0.5 * (z1 + z2));
        prop_assert!(mid * mid <= m(z1) * m(z2) * (1.0 + 1e-12));
    }

    #[test]
    fn phi_is_nonincreasing(d in law(), z in 0.0f64..10.0, dz in 0.0f64..5.0) {
        prop_assume!(d.mean() > 0.0);
        let hat = d.size_biased().unwrap();
        prop_assert!(hat.phi(z + dz) <= hat.phi(z) + 1e-12);
        prop_assert!(hat.phi_derivative(z) <= 1e-12);
    }

    #[test]
    fn phi_limits(d in law()) {
        prop_assume!(d.mean() > 0.0);
        let hat = d.size_biased().unwrap();
        prop_assert!((hat.phi(0.0) - hat.mean()).abs() < 1e-12 * (1.0 + hat.mean()));
        prop_assert!((hat.phi(50.0) - hat.min_degree() as f64).abs() < 1e-6);
    }

    #[test]
    fn size_biased_matches_brute_force(d in law()) {
        prop_assume!(d.mean() > 0.0);
        let hat = d.size_biased().unwrap();
        for k in 0..=d.max_degree() {
            let brute = (k + 1) as f64 * d.pmf(k + 1) / d.mean();
            prop_assert!((hat.pmf(k) - brute).abs() < 1e-14);
        }
    }

    #[test]
    fn poisson_is_its_own_size_bias(c in 0.1f64..20.0) {
        let p = DegreeDistribution::poisson(c).unwrap();
        prop_assert!(p.tv_distance(&p.size_biased().unwrap()) < 1e-10);
    }
}

#[test]
fn poisson_transform_values() {
    let p = DegreeDistribution::poisson(2.0).unwrap();
    let m = (2.0 * ((-1.0f64).exp() - 1.0)).exp();
    assert!((p.laplace(-1.0).unwrap() - m).abs() < 1e-12);
    assert!((p.laplace_derivative(-1.0).unwrap() - 2.0 * (-1.0f64).exp() * m).abs() < 1e-12);
    let hat = p.size_biased().unwrap();
    assert!((hat.phi(1.0) - 2.0 * (-1.0f64).exp()).abs() < 1e-10);
}

#[test]
fn config_forms() {
    for (text, mean) in [
        (r#"{"kind":"poisson","mean":2.5}"#, 2.5),
        (r#"{"kind":"regular","k":4}"#, 4.0),
        (r#"{"kind":"pmf","probs":[0.0,0.5,0.5]}"#, 1.5),
    ] {
        let d: DegreeDistribution = serde_json::from_str(text).unwrap();
        assert!((d.mean() - mean).abs() < 1e-10, "{text}");
    }
    assert!(serde_json::from_str::<DegreeDistribution>(r#"{"kind":"pmf","probs":[0.3]}"#).is_err());
}

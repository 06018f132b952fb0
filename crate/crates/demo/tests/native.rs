use prehom_demo::{eq12_sides, heat_profile, symbol_decay};

#[test]
fn profile_matches_closed_form() {
    let xs = [0.5, 1.0, 2.0];
    for printed in [false, true] {
        let v = heat_profile(0.4, 1.0, 0.0, printed, &xs).unwrap();
        assert_eq!(v.len(), 6);
        for i in 0..3 {
            assert!((v[i] - v[i + 3]).abs() < 1e-8, "{v:?}");
        }
    }
    assert!(heat_profile(-1.0, 1.0, 0.0, false, &xs).is_err());
}

#[test]
fn symbol_decays_off_the_fixed_point() {
    let v = symbol_decay(0.1, 1.0, &[5.0, 50.0, 100.0]).unwrap();
    assert!(v[0] > v[1] && v[1] > v[2]);
    let z = symbol_decay(0.1, 0.0, &[5.0, 50.0]).unwrap();
    assert!(z.iter().all(|a| (a - 1.0).abs() < 1e-12));
}

#[test]
fn equation_sides_agree() {
    let v = eq12_sides(0.5, std::f64::consts::PI).unwrap();
    assert!((v[0] - v[1]).abs() < 1e-9 && v[2] < 1e-9);
    assert!(eq12_sides(0.0, 1.0).is_err());
}

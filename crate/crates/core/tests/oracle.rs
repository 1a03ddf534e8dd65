//! Analytic modules against brute-force enumeration of small models.

mod common;

use fgm_crm::dependence::{theta_to_pmf, ThetaSet};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const TOL: f64 = 1e-10;
const MODELS: usize = 60;

#[test]
fn analytic_modules_match_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(20240611);
    for i in 0..MODELS {
        let c = common::random_case(&mut rng);
        let gap = common::compare(&c);
        assert!(gap.worst <= TOL, "model {i}: {}", gap.what);
    }
}

#[test]
fn enumerated_indicator_pmf_matches_theta_conversion() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..100 {
        let c = common::random_case(&mut rng);
        let (t01, t12, t012) = c.theta;
        let set = ThetaSet::from_entries(3, &[(&[0, 1], t01), (&[0, 2], t01), (&[1, 2], t12), (&[0, 1, 2], t012)]).unwrap();
        let pmf = theta_to_pmf(&set).unwrap();
        let f = common::indicator_pmf(c.theta);
        for i0 in 0..2u8 {
            for i1 in 0..2u8 {
                for i2 in 0..2u8 {
                    let got = pmf.prob(&[i0, i1, i2]);
                    assert!((got - f[i0 as usize][i1 as usize][i2 as usize]).abs() < 1e-14);
                }
            }
        }
    }
}

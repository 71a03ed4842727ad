use std::f64::consts::FRAC_1_SQRT_2;

use entbounds_core::cloning::{clone_bound_combined, crossover, crossover_gap};
use entbounds_core::deleting::{delete_bound, local_delete_swap};
use entbounds_core::qstate::{dm_from_ket, relative_entropy, schmidt_ket};
use entbounds_core::SchmidtPair;

fn h2(p: f64) -> f64 {
    -(p * p.log2() + (1.0 - p) * (1.0 - p).log2())
}

#[test]
fn combined_bound_is_minimum_of_branches() {
    for i in 1..=30 {
        let a = FRAC_1_SQRT_2 * i as f64 / 30.0;
        let rec = clone_bound_combined(SchmidtPair::new(a).unwrap());
        assert!((rec.e_r - h2(a * a)).abs() < 1e-10);
        assert_eq!(rec.combined, rec.e_r.min(rec.s_clone));
        assert!(delete_bound(SchmidtPair::new(a).unwrap()) >= rec.combined);
    }
}

#[test]
fn crossover_separates_branches() {
    let x = crossover().unwrap();
    assert!(crossover_gap(x - 0.01).unwrap() < 0.0);
    assert!(crossover_gap(x + 0.01).unwrap() > 0.0);
}

#[test]
fn swap_terms_agree_with_relative_entropy() {
    for a in [0.2, 0.5, FRAC_1_SQRT_2] {
        let pair = SchmidtPair::new(a).unwrap();
        let out = local_delete_swap(pair).unwrap();
        let psi = dm_from_ket(&schmidt_ket(pair)).unwrap();
        let direct = relative_entropy(&psi, &out.out_ab).unwrap();
        assert!((direct - out.term_keep).abs() < 1e-9);
    }
}

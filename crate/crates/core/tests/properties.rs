mod common;

use proptest::prelude::*;

use common::*;
use skappa::analysis::{find_n, max_epsilon, verify_witness, witness_plan};
use skappa::model::{FunctionSpec, Jump, StandardFunction};
use skappa::pick::{kn_profile, Region, SearchBudget};
use skappa::seed;

fn small_budget() -> SearchBudget {
    SearchBudget::new(40, 4)
}

#[test]
fn added_jumps_raise_counts_by_at_most_their_number() {
    let mut rng = seed::rng(5, &[]);
    for k in 1..=2usize {
        let s = random_schur(&mut rng);
        let base = StandardFunction::schur(s.clone());
        let jumps: Vec<Jump> = separated_points(&mut rng, k, 0.7, 0.2, &[])
            .into_iter()
            .map(|z| Jump { at: pt(z), value: s.eval(z) + unit(&mut rng) * 0.5 })
            .collect();
        let g = StandardFunction::new(s, base.blaschke().clone(), jumps, vec![]).unwrap();
        let pf = kn_profile(&base, 5, &Region::WholeDisk, small_budget(), 1).unwrap();
        let pg = kn_profile(&g, 5, &Region::WholeDisk, small_budget(), 1).unwrap();
        for (a, b) in pf.counts().iter().zip(pg.counts()) {
            assert!(*a <= b && b <= a + k, "{:?} vs {:?}", pf.counts(), pg.counts());
        }
    }
}

#[test]
fn spec_documents_round_trip() {
    let mut rng = seed::rng(6, &[]);
    for i in 0..10u32 {
        let f = random_standard(&mut rng, i % 3, (i % 2) as usize, i % 4 == 1);
        let text = FunctionSpec::from_function(&f).to_json();
        let back = FunctionSpec::from_json(&text).unwrap().build().unwrap();
        for z in separated_points(&mut rng, 5, 0.9, 0.05, &[]) {
            match (f.eval(z), back.eval(z)) {
                (Ok(a), Ok(b)) => assert!((a - b).norm() <= 1e-14 * (1.0 + a.norm())),
                (a, b) => assert_eq!(a.is_err(), b.is_err()),
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn witness_never_exceeds_bound(s in any::<u64>(), q in 0u32..=3, l in 0usize..=2, coincide in any::<bool>()) {
        let mut rng = seed::rng(s, &[]);
        let f = random_standard(&mut rng, q, l, coincide);
        let eps = 1e-2f64.min(0.9 * max_epsilon(&f));
        let v = verify_witness(&f, &witness_plan(&f, eps, s).unwrap(), 6).unwrap();
        prop_assert_eq!(v.inertia.negative, q as usize + l);
    }

    #[test]
    fn find_n_within_theoretical_bounds(s in any::<u64>(), q in 0u32..=2, l in 0usize..=2) {
        let mut rng = seed::rng(s, &[]);
        let f = random_standard(&mut rng, q, l, false);
        let r = find_n(&f, small_budget(), s).unwrap();
        let kappa = q as usize + l;
        if kappa == 0 {
            prop_assert_eq!(r.n_hat, 0);
        } else {
            prop_assert!(kappa.max(1) <= r.n_hat && r.n_hat <= q as usize + 2 * l);
            prop_assert_eq!(r.exact, r.n_hat == kappa);
            prop_assert_eq!(r.witness.len(), r.n_hat);
        }
    }

    #[test]
    fn region_profiles_respect_local_bound(s in any::<u64>(), cx in -0.5f64..0.5, cy in -0.5f64..0.5, r in 0.05f64..0.4) {
        let mut rng = seed::rng(s, &[]);
        let f = random_standard(&mut rng, 1, 1, false);
        let region = Region::disk(c(cx, cy), r).unwrap();
        let p = kn_profile(&f, 4, &region, small_budget(), s).unwrap();
        prop_assert!(p.counts().iter().all(|&k| k <= p.upper_bound));
        prop_assert!(p.counts().windows(2).all(|w| w[0] <= w[1]));
    }
}

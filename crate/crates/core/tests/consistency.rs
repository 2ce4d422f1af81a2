//! Difference counting and exact character sums must reach the same verdict.

use dickson_shds::charsum::{lemma_sim_congruence, norm_check};
use dickson_shds::family::{BuildMode, FamilySpec};
use dickson_shds::sets::{difference_report, is_skew, ElementSet};
use dickson_shds::make_field;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn norm_test_agrees_with_difference_counting() {
    for m in [3, 5] {
        let f = make_field(m, None).unwrap();
        let mut sets: Vec<(String, ElementSet)> = ["paley", "dy1", "dy-1", "d7:1", "d7:-1", "d7:g", "dickson:11:1", "image:3"]
            .iter()
            .filter_map(|l| Some((l.to_string(), l.parse::<FamilySpec>().unwrap().build(&f, BuildMode::Pds).ok()?)))
            .collect();
        let mut rng = ChaCha8Rng::seed_from_u64(m as u64);
        for i in 0..4 {
            // random skew sets: one of each pair {x, -x}
            let mut s = ElementSet::empty(&f);
            for x in f.nonzero() {
                let nx = f.neg(x);
                if x.0 < nx.0 {
                    s.insert(if rng.gen_bool(0.5) { x } else { nx });
                }
            }
            sets.push((format!("random{i}"), s));
        }
        let mut checked = 0;
        for (label, d) in &sets {
            let ds = difference_report(&f, d).unwrap().is_difference_set();
            if d.len() as u32 == (f.q() - 1) / 2 {
                let norm = norm_check(&f, d, label).unwrap().all_pass;
                assert_eq!(ds, norm, "m={m} {label}");
            }
            let frobenius_fixed = d.iter().all(|x| d.contains(f.frobenius(x)));
            if is_skew(&f, d) && frobenius_fixed && lemma_sim_congruence(&f, d, label).unwrap().all_pass {
                assert!(ds, "m={m} {label}");
                checked += 1;
            }
        }
        assert!(checked >= 4, "m={m}: only {checked} sets reached the implication");
    }
}

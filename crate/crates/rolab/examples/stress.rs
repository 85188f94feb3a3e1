use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rolab::*;

fn main() {
    let tols = Tolerances::default();
    let mut rng = ChaCha8Rng::seed_from_u64(std::env::args().nth(1).map(|s| s.parse().unwrap()).unwrap_or(1));
    let mut closure_bad = 0;
    let mut twelve_bad = 0;
    let mut cls_bad = 0;
    let total = 2000;
    for trial in 0..total {
        let field = if trial % 2 == 0 { Field::Real } else { Field::Complex };
        let m = rng.gen_range(1..=12);
        let n = rng.gen_range(1..=12);
        let k = rng.gen_range(1..=12);
        let (a, b) = match trial % 5 {
            0 | 1 => {
                let a = random_matrix_with_rank(m, n, rng.gen_range(0..=m.min(n)), field, &mut rng);
                let b = random_matrix_with_rank(n, k, rng.gen_range(0..=n.min(k)), field, &mut rng);
                (a, b)
            }
            2 => {
                let r_a = rng.gen_range(1..=m.min(n));
                let a = random_matrix_with_rank(m, n, r_a, field, &mut rng);
                let s = rng.gen_range(0..=r_a.min(n.min(k)));
                let t = rng.gen_range(0..=(n - r_a).min(n.min(k) - s));
                if s + t == 0 {
                    (a.clone(), a.adjoint())
                } else {
                    let b = construct_partner(&a, &ConstructionPlan::new(s, t, k, trial as u64)).unwrap();
                    (a, b)
                }
            }
            3 => {
                if n < 2 { continue; }
                let r_a = rng.gen_range(1..=m.min(n - 1));
                let r_b = rng.gen_range(1..=k.min(n - r_a));
                let shared = rng.gen_range(0..=r_a.min(r_b));
                construct_pair_12((m, n, k), (r_a, r_b), shared, trial as u64, field).unwrap()
            }
            _ => {
                if n < 2 { continue; }
                let r_a = rng.gen_range(1..=m.min(n - 1));
                let r_b = rng.gen_range(1..=k.min(n - r_a));
                let shared = rng.gen_range(0..=r_a.min(r_b));
                if trial % 2 == 0 {
                    construct_pair_123((m, n, k), (r_a, r_b), shared, trial as u64, field).unwrap()
                } else {
                    construct_pair_124((m, n, k), (r_a, r_b), shared, trial as u64, field).unwrap()
                }
            }
        };
        let report = classify_pair(&a, &b, &tols).unwrap();
        if !report.consistent {
            closure_bad += 1;
            eprintln!("closure disagreement at trial {trial}: {:?}", report.equivalent_predicates());
        }
        let suite = twelve_way_suite(&a, &b, &tols).unwrap();
        if !suite.all_agree() {
            twelve_bad += 1;
            eprintln!("twelve-way disagreement at trial {trial}: {suite:?}");
        }
        let cls = classify_123_124(&a, &b, &tols).unwrap();
        if !cls.consistent {
            cls_bad += 1;
            eprintln!("cls disagreement at trial {trial}: {cls:?}");
        }
    }
    println!("{total} pairs: closure bad {closure_bad}, twelve bad {twelve_bad}, cls bad {cls_bad}");
}

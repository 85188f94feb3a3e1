use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rolab::*;

fn rotate_pair(cols: &mut [Vec<Complex64>], p: usize, q: usize, c: f64, s: f64, phase: Complex64) {
    let (head, tail) = cols.split_at_mut(q);
    let cp = &mut head[p];
    let cq = &mut tail[0];
    let phase_conj = phase.conj();
    for i in 0..cp.len() {
        let xp = cp[i];
        let xq = cq[i];
        cp[i] = c * xp - s * phase_conj * xq;
        cq[i] = s * phase * xp + c * xq;
    }
}

fn main() {
    // reproduce the stacked matrix from the failing trial
    let tols = Tolerances::default();
    let _ = tols;
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut stacked_opt = None;
    for trial in 0..=317 {
        let field = if trial % 2 == 0 { Field::Real } else { Field::Complex };
        let m = rng.gen_range(1..=12usize);
        let n = rng.gen_range(1..=12usize);
        let k = rng.gen_range(1..=12usize);
        match trial % 5 {
            0 | 1 => {
                let _ = random_matrix_with_rank(m, n, rng.gen_range(0..=m.min(n)), field, &mut rng);
                let _ = random_matrix_with_rank(n, k, rng.gen_range(0..=n.min(k)), field, &mut rng);
            }
            2 => {
                let r_a = rng.gen_range(1..=m.min(n));
                let a = random_matrix_with_rank(m, n, r_a, field, &mut rng);
                let s = rng.gen_range(0..=r_a.min(n.min(k)));
                let t = rng.gen_range(0..=(n - r_a).min(n.min(k) - s));
                if trial == 317 {
                    assert!(s + t == 0);
                    let ras = range_basis(&a.adjoint());
                    let c1 = complete_orthonormal(ras.basis()).unwrap();
                    let rb = range_basis(&a.adjoint());
                    let c2 = complete_orthonormal(rb.basis()).unwrap();
                    stacked_opt = Some(Matrix::vstack(&[&c1.adjoint(), &c2.adjoint()]));
                    break;
                }
                if s + t > 0 {
                    let _ = construct_partner(&a, &ConstructionPlan::new(s, t, k, trial as u64)).unwrap();
                }
            }
            3 | _ => {
                if n < 2 { continue; }
                let r_a = rng.gen_range(1..=m.min(n - 1));
                let r_b = rng.gen_range(1..=k.min(n - r_a));
                let shared = rng.gen_range(0..=r_a.min(r_b));
                let _ = if trial % 5 == 3 {
                    construct_pair_12((m, n, k), (r_a, r_b), shared, trial as u64, field)
                } else if trial % 2 == 0 {
                    construct_pair_123((m, n, k), (r_a, r_b), shared, trial as u64, field)
                } else {
                    construct_pair_124((m, n, k), (r_a, r_b), shared, trial as u64, field)
                };
            }
        }
    }
    let g = stacked_opt.expect("reached trial 317");
    let (m, n) = g.shape();
    println!("stacked {m}x{n}");

    let mut w: Vec<Vec<Complex64>> = (0..n).map(|j| (0..m).map(|i| g.get(i, j)).collect()).collect();
    let mut acc: Vec<Vec<Complex64>> = (0..n)
        .map(|j| (0..n).map(|i| Complex64::new(if i == j { 1.0 } else { 0.0 }, 0.0)).collect())
        .collect();
    let conv_tol = f64::EPSILON * (m as f64).sqrt().max(1.0);
    let mut total_rotations = 0u64;
    for sweep in 0..100 {
        let mut rotated = false;
        for p in 0..n - 1 {
            for q in p + 1..n {
                let (mut app, mut aqq, mut apq) = (0.0, 0.0, Complex64::new(0.0, 0.0));
                for i in 0..m {
                    app += w[p][i].norm_sqr();
                    aqq += w[q][i].norm_sqr();
                    apq += w[p][i].conj() * w[q][i];
                }
                if app == 0.0 || aqq == 0.0 { continue; }
                let abs_g = apq.norm();
                if abs_g <= conv_tol * (app * aqq).sqrt() { continue; }
                rotated = true;
                total_rotations += 1;
                let phase = apq / abs_g;
                let tau = (aqq - app) / (2.0 * abs_g);
                let t = if tau >= 0.0 { 1.0 / (tau + (1.0 + tau * tau).sqrt()) }
                        else { -1.0 / (-tau + (1.0 + tau * tau).sqrt()) };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                rotate_pair(&mut w, p, q, c, s, phase);
                rotate_pair(&mut acc, p, q, c, s, phase);
            }
        }
        if !rotated {
            println!("converged after sweep {sweep}, {total_rotations} rotations");
            break;
        }
        if sweep == 99 {
            println!("NOT converged after 100 sweeps, {total_rotations} rotations");
        }
    }
    // gram of acc
    let mut max_off = 0.0f64;
    for p in 0..n {
        for q in 0..n {
            let mut dot = Complex64::new(0.0, 0.0);
            for i in 0..n {
                dot += acc[p][i].conj() * acc[q][i];
            }
            let target = if p == q { 1.0 } else { 0.0 };
            max_off = max_off.max((dot - target).norm());
        }
    }
    println!("acc gram max deviation = {max_off:.3e}");
    let norms: Vec<f64> = w.iter().map(|c| c.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()).collect();
    println!("final column norms: {norms:?}");
}

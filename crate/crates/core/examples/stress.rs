use clat_core::clat::*;
use clat_core::dist::DistributionSpec;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xBEEF);
    let nulls = [DistributionSpec::StandardNormal, DistributionSpec::Uniform01];
    for trial in 0..4000 {
        let n = rng.random_range(1..=120);
        let mut v: Vec<f64> = Vec::with_capacity(n);
        for _ in 0..n {
            let k: f64 = rng.random();
            if k < 0.15 {
                v.push(0.0);
            } else if k < 0.25 {
                v.push(1.0);
            } else if k < 0.5 {
                v.push((rng.random::<f64>() * 0.02).min(1.0));
            } else if k < 0.6 {
                v.push((rng.random_range(0..20) as f64) / 20.0);
            } else {
                v.push(rng.random());
            }
        }
        let side = if trial % 2 == 0 { Side::Right } else { Side::Left };
        let p = PValueVector::new(v, side).unwrap();
        let qs = [0.05, 0.3, 0.7, 0.95];
        let cfg = ClatConfig::new(qs[trial % 4], nulls[(trial / 2) % 2].clone())
            .unwrap()
            .with_pi1([0.0, 0.3, 0.6][trial % 3])
            .unwrap()
            .with_length_constant([0.0, 2.0, 10.0][(trial / 3) % 3])
            .unwrap()
            .with_case_b_length_check(trial % 5 != 0);
        let fast = clat_search(&p, &cfg).unwrap();
        let slow = clat_brute_force(&p, &cfg).unwrap();
        if (fast.i_rank, fast.j_rank, fast.max_diff)
            != (slow.i_rank, slow.j_rank, slow.max_diff)
        {
            println!(
                "MISMATCH trial {trial}: n={n} side={:?} q={} pi1={} c={} caseb={} fast=({},{},{}) slow=({},{},{})",
                p.side(), cfg.q, cfg.pi1, cfg.length_constant, cfg.case_b_length_check,
                fast.i_rank, fast.j_rank, fast.max_diff,
                slow.i_rank, slow.j_rank, slow.max_diff
            );
            println!("p = {:?}", p.values());
            std::process::exit(1);
        }
        if fast.reject != slow.reject {
            println!("MASK MISMATCH trial {trial}");
            std::process::exit(1);
        }
    }
    println!("stress: 4000 adversarial instances, zero mismatches");
}

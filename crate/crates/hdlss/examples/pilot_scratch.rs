// temporary pilot for acceptance tolerances; removed before finishing
use hdlss::model::MixtureModel;
use hdlss::pca::estimate_squared_gap;
use hdlss::sampler::{MixtureSampler, SeedSpec};
use std::time::Instant;

fn main() {
    // criterion 11: two_class(d=200), n1=n2=10, replicate mean of the gap
    // estimate vs true gap 200
    let t0 = Instant::now();
    let m = MixtureModel::two_class(200).unwrap();
    let sampler = MixtureSampler::new(&m).unwrap();
    let mut estimates = Vec::new();
    for rep in 0..200u64 {
        let x = sampler.fixed_counts(&[10, 10], SeedSpec::replicate(13, rep)).unwrap();
        estimates.push(estimate_squared_gap(&x.class_columns(1), &x.class_columns(2)).unwrap());
    }
    let mean = estimates.iter().sum::<f64>() / estimates.len() as f64;
    let sd = (estimates.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>()
        / (estimates.len() - 1) as f64)
        .sqrt();
    println!(
        "gap estimate: mean {mean:.3} (true 200, rel err {:.4}), per-rep sd {sd:.2}, elapsed {:?}",
        (mean - 200.0).abs() / 200.0,
        t0.elapsed()
    );

    // theorem3 timing with cached factors, plus class-conditional scores
    let t0 = Instant::now();
    let model = MixtureModel::three_class(2000).unwrap();
    let sampler = MixtureSampler::new(&model).unwrap();
    println!("three_class(2000) factor: {:?}", t0.elapsed());
    let t0 = Instant::now();
    let mut cond = vec![(0.0, 0.0, 0usize); 3];
    for rep in 0..20u64 {
        let x = sampler.fixed_counts(&[10, 5, 5], SeedSpec::replicate(3, rep)).unwrap();
        let labels = x.labels().unwrap().to_vec();
        let mut p = hdlss::pca::dual_pca(&x, 2).unwrap();
        p.orient_with_labels(&labels, 3).unwrap();
        let rows = p.score_rows(2).unwrap();
        for j in 0..x.n() {
            let c = labels[j] - 1;
            cond[c].0 += rows[0][j];
            cond[c].1 += rows[1][j];
            cond[c].2 += 1;
        }
    }
    for (c, (s1, s2, n)) in cond.iter().enumerate() {
        println!(
            "class {}: mean scores ({:.4}, {:.4})",
            c + 1,
            s1 / *n as f64,
            s2 / *n as f64
        );
    }
    println!("theorem3 20 reps: {:?}", t0.elapsed());
}

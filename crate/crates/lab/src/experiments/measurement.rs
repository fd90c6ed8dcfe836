use std::time::Instant;

use quantalab_core::hilbert::{BornSampler, Observable, StateVector};
use quantalab_core::linalg::CMatrix;
use quantalab_core::rng::SeededRng;
use quantalab_core::spin::EprSampler;
use quantalab_core::Complex64;

use super::{Outcome, Relation};
use crate::config::Params;
use crate::{row, LabError, Table};

pub(super) fn validate_epr(p: &Params) -> Result<(), LabError> {
    if !(p.get("alpha").abs() <= 1.0) {
        return Err(LabError::config("alpha", "must lie in [-1, 1]"));
    }
    if !(2..=16).contains(&p.count("born_dim")) {
        return Err(LabError::config("born_dim", "must lie in 2..=16"));
    }
    Ok(())
}

/// `|count - n p|` in units of the binomial standard deviation.
fn z_score(count: u64, n: u64, p: f64) -> f64 {
    let diff = (count as f64 - n as f64 * p).abs();
    let sigma = (n as f64 * p * (1.0 - p)).sqrt();
    if sigma > 0.0 {
        diff / sigma
    } else if diff == 0.0 {
        0.0
    } else {
        f64::INFINITY
    }
}

fn random_state(dim: usize, rng: &mut SeededRng) -> Result<StateVector, LabError> {
    let amps: Vec<Complex64> = (0..dim)
        .map(|_| Complex64::new(rng.normal(), rng.normal()))
        .collect();
    let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    let amps: Vec<Complex64> = amps.iter().map(|a| a / norm).collect();
    Ok(StateVector::new(&amps)?)
}

fn random_observable(dim: usize, rng: &mut SeededRng) -> Result<Observable, LabError> {
    let m = CMatrix::from_fn(dim, dim, |_, _| Complex64::new(rng.normal(), rng.normal()));
    let h = (&m + m.adjoint()) * Complex64::new(0.5, 0.0);
    Ok(Observable::new(h)?)
}

pub(super) fn epr(p: &Params, seed: u64) -> Result<Outcome, LabError> {
    let hbar = p.get("hbar");
    let alpha = p.get("alpha");
    let beta = (1.0 - alpha * alpha).max(0.0).sqrt();
    let zero = Complex64::new(0.0, 0.0);
    let psi = StateVector::new(&[
        zero,
        Complex64::new(alpha, 0.0),
        Complex64::new(0.0, beta),
        zero,
    ])?;
    let mut out = Outcome::default();

    let n = p.count("samples") as u64;
    let start = Instant::now();
    let sampler = EprSampler::new(&psi, hbar)?;
    let mut rng = SeededRng::new(seed);
    let mut counts = [[0u64; 2]; 2];
    for _ in 0..n {
        let (s1, s2) = sampler.sample_with(&mut rng);
        counts[usize::from(s1 < 0.0)][usize::from(s2 < 0.0)] += 1;
    }
    let elapsed = start.elapsed().as_secs_f64();
    out.check(
        11,
        "(+,+) count",
        counts[0][0] as f64,
        Relation::AtMost,
        0.0,
    );
    out.check(
        11,
        "(+,-) frequency vs |alpha|^2, binomial sigmas",
        z_score(counts[0][1], n, alpha * alpha),
        Relation::AtMost,
        3.0,
    );
    out.check(
        11,
        "entangled-pair sampling time (s)",
        elapsed,
        Relation::Below,
        5.0,
    );
    let mut table = Table::new("epr", &["s1", "s2", "count", "probability"]);
    for (i1, s1) in [0.5 * hbar, -0.5 * hbar].into_iter().enumerate() {
        for (i2, s2) in [0.5 * hbar, -0.5 * hbar].into_iter().enumerate() {
            table.push(row![
                s1,
                s2,
                counts[i1][i2],
                psi.amplitudes()[2 * i1 + i2].norm_sqr()
            ]);
        }
    }
    out.tables.push(table);

    let dim = p.count("born_dim");
    let n = p.count("born_samples") as u64;
    let mut rng = SeededRng::with_stream(seed, 1);
    let mut table = Table::new(
        "born",
        &["pair", "outcome", "probability", "frequency", "z"],
    );
    let mut worst: f64 = 0.0;
    for pair in 0..p.count("born_pairs") {
        let psi = random_state(dim, &mut rng)?;
        let a = random_observable(dim, &mut rng)?;
        let sampler = BornSampler::new(&psi, &a)?;
        let mut hits = vec![0u64; sampler.records().len()];
        for _ in 0..n {
            hits[sampler.select(rng.uniform())] += 1;
        }
        for (rec, &count) in sampler.records().iter().zip(&hits) {
            let z = z_score(count, n, rec.probability);
            worst = worst.max(z);
            table.push(row![
                pair,
                rec.outcome,
                rec.probability,
                count as f64 / n as f64,
                z
            ]);
        }
    }
    out.check(
        12,
        "Born frequencies, worst binomial sigmas",
        worst,
        Relation::AtMost,
        3.0,
    );
    out.tables.push(table);
    Ok(out)
}

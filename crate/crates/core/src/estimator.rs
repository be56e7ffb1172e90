//! Quasi-probability estimation of Clifford+T expectation values.
//!
//! The circuit is transpiled to CS+H with one `|T>` catalyst, and the
//! catalyst is replaced by a signed mixture of four stabilizer states.
//! Expectations are then sums of signed stabilizer-circuit expectations.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::catalysis::{decompose_t_dm, transpile_t_to_cs, CatalysisError};
use crate::circuit::{expectation, simulate, Circuit, CircuitError, Observable};
use crate::ring::{RingElement, RingError, Tower};

/// Shots drawn from one RNG substream.
pub const SHARD_SHOTS: u64 = 4096;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EstimatorError {
    #[error("shots must be at least 1")]
    NoShots,
    #[error("ensemble has no terms")]
    Empty,
    #[error("term weight {0} is not real")]
    ComplexWeight(String),
    #[error(transparent)]
    Catalysis(#[from] CatalysisError),
    #[error(transparent)]
    Circuit(#[from] CircuitError),
    #[error(transparent)]
    Ring(#[from] RingError),
}

#[derive(Debug, Clone, PartialEq)]
pub struct EnsembleTerm {
    pub weight: RingElement,
    pub circuit: Circuit,
    pub observable: Observable,
}

/// `<O> = sum_j weight_j <O_j>_j`.
#[derive(Debug, Clone, PartialEq)]
pub struct Ensemble {
    pub terms: Vec<EnsembleTerm>,
    pub one_norm: f64,
}

impl Ensemble {
    pub fn new(terms: Vec<EnsembleTerm>) -> Result<Ensemble, EstimatorError> {
        if terms.is_empty() {
            return Err(EstimatorError::Empty);
        }
        for t in &terms {
            if !t.weight.is_real() {
                return Err(EstimatorError::ComplexWeight(t.weight.to_string()));
            }
        }
        let one_norm = terms.iter().map(|t| t.weight.embed_float().re.abs()).sum();
        Ok(Ensemble { terms, one_norm })
    }

    fn tower(&self) -> Tower {
        let mut tower = self.terms[0].weight.tower().clone();
        for t in &self.terms {
            if t.circuit.root_depth() > tower.max_root_log2() {
                tower = Tower::for_phase_depth(t.circuit.root_depth());
            }
        }
        tower
    }
}

/// Transpiles `c` and swaps the `|T>` catalyst for each stabilizer state of
/// the `|T><T|` decomposition. The observable gets `I` on the catalyst.
pub fn build_ensemble(c: &Circuit, obs: &Observable) -> Result<Ensemble, EstimatorError> {
    if obs.len() != c.width() {
        return Err(CircuitError::WidthMismatch {
            expected: c.width(),
            got: obs.len(),
        }
        .into());
    }
    let transpiled = transpile_t_to_cs(c)?;
    let cat = c.width();
    let observable = obs.extended(1);
    let terms = decompose_t_dm()
        .terms
        .into_iter()
        .map(|t| {
            let mut circuit = transpiled.clone();
            circuit.set_prep(cat, t.prep)?;
            Ok(EnsembleTerm {
                weight: t.weight,
                circuit,
                observable: observable.clone(),
            })
        })
        .collect::<Result<Vec<_>, CircuitError>>()?;
    Ensemble::new(terms)
}

/// Exact `<O_j>_j` for every term.
pub fn term_expectations(e: &Ensemble) -> Result<Vec<RingElement>, EstimatorError> {
    let tower = e.tower();
    e.terms
        .iter()
        .map(|t| {
            let psi = simulate(&t.circuit, &tower)?;
            Ok(expectation(&psi, &t.observable)?)
        })
        .collect()
}

/// `sum_j weight_j <O_j>_j`, exact.
pub fn exact_value(e: &Ensemble) -> Result<RingElement, EstimatorError> {
    let tower = e.tower();
    let mut acc = tower.zero();
    for (t, v) in e.terms.iter().zip(term_expectations(e)?) {
        acc += &(&t.weight.lift(&tower)? * &v);
    }
    Ok(acc)
}

/// `<psi|O|psi>` of the untranspiled circuit.
pub fn direct_expectation(c: &Circuit, obs: &Observable) -> Result<RingElement, EstimatorError> {
    let tower = Tower::for_phase_depth(c.root_depth());
    Ok(expectation(&simulate(c, &tower)?, obs)?)
}

/// Sampling overhead `sum_j |weight_j|`.
pub fn overhead(e: &Ensemble) -> f64 {
    e.one_norm
}

/// Overhead of decomposing each of `t_count` injected `|T>` states
/// separately instead of reusing one catalyst.
pub fn per_injection_overhead(t_count: u32) -> f64 {
    (2.0 * 2f64.sqrt() - 1.0).powi(t_count as i32)
}

/// How shots are spread over the terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Allocation {
    /// Each shot draws its term with probability `|weight_j| / one_norm`.
    #[default]
    Sampled,
    /// Fixed per-term counts by largest-remainder rounding.
    Proportional,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EstimateReport {
    pub estimate: f64,
    pub stderr: f64,
    pub shots: u64,
    pub per_term_shots: Vec<u64>,
    pub seed: u64,
    pub allocation: Allocation,
    pub exact_value: Option<f64>,
}

/// Per-term `(+1 count, -1 count)` of sampled eigenvalues.
type Tally = Vec<(u64, u64)>;

fn merge(mut a: Tally, b: Tally) -> Tally {
    for (x, y) in a.iter_mut().zip(b) {
        x.0 += y.0;
        x.1 += y.1;
    }
    a
}

struct Sampler {
    /// Cumulative term probabilities.
    cdf: Vec<f64>,
    /// `P(eigenvalue = +1)` per term.
    p_plus: Vec<f64>,
    seed: u64,
}

impl Sampler {
    fn new(e: &Ensemble) -> Result<Sampler, EstimatorError> {
        let mut acc = 0.0;
        let mut cdf: Vec<f64> = e
            .terms
            .iter()
            .map(|t| {
                acc += t.weight.embed_float().re.abs() / e.one_norm;
                acc
            })
            .collect();
        *cdf.last_mut().expect("ensembles are non-empty") = 1.0;
        let p_plus = term_expectations(e)?
            .iter()
            .map(|v| ((1.0 + v.embed_float().re) / 2.0).clamp(0.0, 1.0))
            .collect();
        Ok(Sampler {
            cdf,
            p_plus,
            seed: 0,
        })
    }

    fn rng(&self, stream: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(stream);
        rng
    }

    fn eigenvalue(&self, rng: &mut ChaCha8Rng, term: usize, tally: &mut Tally) {
        if rng.random::<f64>() < self.p_plus[term] {
            tally[term].0 += 1;
        } else {
            tally[term].1 += 1;
        }
    }

    /// The first `shots` draws of the shot stream; any prefix of the stream
    /// is the stream for fewer shots.
    fn sampled(&self, shots: u64) -> Tally {
        let shards = shots.div_ceil(SHARD_SHOTS);
        let blank = vec![(0, 0); self.cdf.len()];
        let tallies: Vec<Tally> = (0..shards)
            .into_par_iter()
            .map(|s| {
                let n = SHARD_SHOTS.min(shots - s * SHARD_SHOTS);
                let mut rng = self.rng(s);
                let mut tally = blank.clone();
                for _ in 0..n {
                    let r: f64 = rng.random();
                    let term = self
                        .cdf
                        .partition_point(|&c| c <= r)
                        .min(self.cdf.len() - 1);
                    self.eigenvalue(&mut rng, term, &mut tally);
                }
                tally
            })
            .collect();
        tallies.into_iter().fold(blank, merge)
    }

    fn proportional(&self, counts: &[u64]) -> Tally {
        // term j draws from its own substream family, offset past the sampled ones
        let blank = vec![(0, 0); self.cdf.len()];
        let tallies: Vec<Tally> = counts
            .par_iter()
            .enumerate()
            .map(|(j, &n)| {
                let mut tally = blank.clone();
                let mut rng = self.rng(u64::MAX - j as u64);
                for _ in 0..n {
                    self.eigenvalue(&mut rng, j, &mut tally);
                }
                tally
            })
            .collect();
        tallies.into_iter().fold(blank, merge)
    }
}

/// Largest-remainder split of `shots` proportional to `|weight_j|`.
pub fn allocate_shots(e: &Ensemble, shots: u64) -> Vec<u64> {
    let quotas: Vec<f64> = e
        .terms
        .iter()
        .map(|t| shots as f64 * t.weight.embed_float().re.abs() / e.one_norm)
        .collect();
    let mut counts: Vec<u64> = quotas.iter().map(|q| q.floor() as u64).collect();
    let mut order: Vec<usize> = (0..quotas.len()).collect();
    order.sort_by(|&a, &b| {
        let (ra, rb) = (quotas[a] - quotas[a].floor(), quotas[b] - quotas[b].floor());
        rb.total_cmp(&ra).then(a.cmp(&b))
    });
    let left = shots - counts.iter().sum::<u64>();
    for &j in order.iter().cycle().take(left as usize) {
        counts[j] += 1;
    }
    counts
}

fn summarize(e: &Ensemble, tally: &Tally, allocation: Allocation) -> (f64, f64) {
    let signs: Vec<f64> = e.terms.iter().map(|t| t.weight.embed_float().re).collect();
    match allocation {
        Allocation::Sampled => {
            // every shot contributes +-one_norm
            let shots: u64 = tally.iter().map(|(p, m)| p + m).sum();
            let net: f64 = tally
                .iter()
                .zip(&signs)
                .map(|((p, m), w)| w.signum() * (*p as f64 - *m as f64))
                .sum();
            let mean = net / shots as f64;
            let var = if shots > 1 {
                (1.0 - mean * mean).max(0.0) * shots as f64 / (shots - 1) as f64
            } else {
                0.0
            };
            (e.one_norm * mean, e.one_norm * (var / shots as f64).sqrt())
        }
        Allocation::Proportional => {
            let (mut est, mut var) = (0.0, 0.0);
            for ((p, m), w) in tally.iter().zip(&signs) {
                let n = p + m;
                if n == 0 {
                    continue;
                }
                let mean = (*p as f64 - *m as f64) / n as f64;
                est += w * mean;
                if n > 1 {
                    let v = (1.0 - mean * mean).max(0.0) * n as f64 / (n - 1) as f64;
                    var += w * w * v / n as f64;
                }
            }
            (est, var.sqrt())
        }
    }
}

/// Monte-Carlo estimate of `sum_j weight_j <O_j>_j`.
///
/// Per shot a term is drawn, then a `+-1` eigenvalue from the exact Born
/// distribution of that term's observable. The result depends only on
/// `(ensemble, shots, seed, allocation)`, not on the thread count.
pub fn qp_estimate(
    e: &Ensemble,
    shots: u64,
    seed: u64,
    allocation: Allocation,
) -> Result<EstimateReport, EstimatorError> {
    if shots == 0 {
        return Err(EstimatorError::NoShots);
    }
    let mut sampler = Sampler::new(e)?;
    sampler.seed = seed;
    let tally = match allocation {
        Allocation::Sampled => sampler.sampled(shots),
        Allocation::Proportional => sampler.proportional(&allocate_shots(e, shots)),
    };
    let (estimate, stderr) = summarize(e, &tally, allocation);
    Ok(EstimateReport {
        estimate,
        stderr,
        shots,
        per_term_shots: tally.iter().map(|(p, m)| p + m).collect(),
        seed,
        allocation,
        exact_value: None,
    })
}

/// `qp_estimate` with the exact value filled in.
pub fn qp_estimate_checked(
    e: &Ensemble,
    shots: u64,
    seed: u64,
    allocation: Allocation,
) -> Result<EstimateReport, EstimatorError> {
    let mut r = qp_estimate(e, shots, seed, allocation)?;
    r.exact_value = Some(exact_value(e)?.embed_float().re);
    Ok(r)
}

/// Three checkpoints per decade up to `shots`, always ending at `shots`.
pub fn checkpoints(shots: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut decade = 1u64;
    'outer: loop {
        for m in [1, 2, 5] {
            let s = decade.saturating_mul(m);
            if s >= shots {
                break 'outer;
            }
            out.push(s);
        }
        decade = decade.saturating_mul(10);
    }
    out.push(shots);
    out
}

/// Sampled-allocation estimates on prefixes of one shot stream.
pub fn convergence(
    e: &Ensemble,
    shots: u64,
    seed: u64,
) -> Result<Vec<EstimateReport>, EstimatorError> {
    if shots == 0 {
        return Err(EstimatorError::NoShots);
    }
    let exact = exact_value(e)?.embed_float().re;
    let mut sampler = Sampler::new(e)?;
    sampler.seed = seed;
    Ok(checkpoints(shots)
        .into_iter()
        .map(|s| {
            let tally = sampler.sampled(s);
            let (estimate, stderr) = summarize(e, &tally, Allocation::Sampled);
            EstimateReport {
                estimate,
                stderr,
                shots: s,
                per_term_shots: tally.iter().map(|(p, m)| p + m).collect(),
                seed,
                allocation: Allocation::Sampled,
                exact_value: Some(exact),
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{Gate, StatePrep};

    fn single_t() -> (Circuit, Observable) {
        let mut c = Circuit::new(1);
        c.set_prep(0, StatePrep::Plus).unwrap();
        c.push(Gate::t(0));
        (c, "X".parse().unwrap())
    }

    #[test]
    fn identity_circuit_sums_to_one() {
        let e = build_ensemble(&Circuit::new(1), &"Z".parse().unwrap()).unwrap();
        assert_eq!(e.terms.len(), 4);
        assert!(exact_value(&e).unwrap().is_one());
        assert!((overhead(&e) - 1.8284271247461903).abs() < 1e-12);
    }

    #[test]
    fn single_t_exact() {
        let (c, o) = single_t();
        let e = build_ensemble(&c, &o).unwrap();
        let v = exact_value(&e).unwrap();
        assert_eq!(v, direct_expectation(&c, &o).unwrap());
        let t = Tower::clifford_t();
        assert_eq!(v, t.inv_sqrt2().unwrap());
    }

    #[test]
    fn deterministic_one_term() {
        let t = Tower::clifford_t();
        let e = Ensemble::new(vec![EnsembleTerm {
            weight: t.one(),
            circuit: Circuit::new(1),
            observable: "Z".parse().unwrap(),
        }])
        .unwrap();
        let r = qp_estimate(&e, 1000, 7, Allocation::Sampled).unwrap();
        assert_eq!((r.estimate, r.stderr), (1.0, 0.0));
        assert_eq!(overhead(&e), 1.0);
    }

    #[test]
    fn reproducible_and_close() {
        let (c, o) = single_t();
        let e = build_ensemble(&c, &o).unwrap();
        let a = qp_estimate(&e, 100_000, 11, Allocation::Sampled).unwrap();
        let b = qp_estimate(&e, 100_000, 11, Allocation::Sampled).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.per_term_shots.iter().sum::<u64>(), 100_000);
        assert!((a.estimate - std::f64::consts::FRAC_1_SQRT_2).abs() < 4.0 * a.stderr);
        let p = qp_estimate(&e, 100_000, 11, Allocation::Proportional).unwrap();
        assert_eq!(p.per_term_shots, allocate_shots(&e, 100_000));
        assert!((p.estimate - std::f64::consts::FRAC_1_SQRT_2).abs() < 4.0 * p.stderr);
    }

    #[test]
    fn prefix_consistency() {
        let (c, o) = single_t();
        let e = build_ensemble(&c, &o).unwrap();
        let conv = convergence(&e, 10_000, 3).unwrap();
        let last = conv.last().unwrap();
        let direct = qp_estimate(&e, 10_000, 3, Allocation::Sampled).unwrap();
        assert_eq!(last.estimate, direct.estimate);
        let mid = conv.iter().find(|r| r.shots == 5000).unwrap();
        assert_eq!(
            mid.estimate,
            qp_estimate(&e, 5000, 3, Allocation::Sampled)
                .unwrap()
                .estimate
        );
    }

    #[test]
    fn checkpoint_spacing() {
        assert_eq!(checkpoints(100), vec![1, 2, 5, 10, 20, 50, 100]);
        assert_eq!(checkpoints(1), vec![1]);
        assert_eq!(checkpoints(7), vec![1, 2, 5, 7]);
    }

    #[test]
    fn allocation_rounding() {
        let (c, o) = single_t();
        let e = build_ensemble(&c, &o).unwrap();
        for shots in [1, 3, 10, 997] {
            let a = allocate_shots(&e, shots);
            assert_eq!(a.iter().sum::<u64>(), shots);
            for (t, n) in e.terms.iter().zip(&a) {
                let q = shots as f64 * t.weight.embed_float().re.abs() / e.one_norm;
                assert!((*n as f64 - q).abs() < 1.0);
            }
        }
        assert!((per_injection_overhead(2) - 1.8284271247461903f64.powi(2)).abs() < 1e-12);
    }

    #[test]
    fn zero_shots_rejected() {
        let (c, o) = single_t();
        let e = build_ensemble(&c, &o).unwrap();
        assert_eq!(
            qp_estimate(&e, 0, 1, Allocation::Sampled),
            Err(EstimatorError::NoShots)
        );
    }
}

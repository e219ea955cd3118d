//! Top-K recommendation mechanisms under a per-query privacy budget.
//!
//! DPLP and the exponential baseline are sequential samplers without
//! replacement: at each step a remaining candidate is drawn with probability
//! proportional to `exp(log_weight(score))`. Both are implemented with the
//! Gumbel-top-K construction on log-weights, which has exactly the same
//! output distribution as renormalizing after every draw and never overflows.
//! Laplace and Gaussian perturb every score once and keep the noisy top-K.

use std::fmt;
use std::str::FromStr;

use rand::Rng;

use crate::error::{invalid, Error, Result};
use crate::graph::NodeId;
use crate::heuristics::ScoredCandidates;
use crate::rng;
use crate::scalar::{log_sum_exp, Real};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Mechanism {
    Dplp,
    Laplace,
    Gaussian,
    Exponential,
    NonPrivate,
}

impl Mechanism {
    pub const ALL: [Mechanism; 5] = [
        Mechanism::Dplp,
        Mechanism::Laplace,
        Mechanism::Gaussian,
        Mechanism::Exponential,
        Mechanism::NonPrivate,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Mechanism::Dplp => "dplp",
            Mechanism::Laplace => "laplace",
            Mechanism::Gaussian => "gaussian",
            Mechanism::Exponential => "exponential",
            Mechanism::NonPrivate => "nonprivate",
        }
    }

    pub fn is_private(self) -> bool {
        self != Mechanism::NonPrivate
    }
}

impl fmt::Display for Mechanism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Mechanism {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "dplp" => Ok(Mechanism::Dplp),
            "laplace" => Ok(Mechanism::Laplace),
            "gaussian" => Ok(Mechanism::Gaussian),
            "exponential" | "exp" => Ok(Mechanism::Exponential),
            "nonprivate" | "non-private" | "none" => Ok(Mechanism::NonPrivate),
            other => Err(invalid(format!("unknown mechanism `{other}`"))),
        }
    }
}

pub const DEFAULT_DELTA_P: f64 = 1e-5;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DpConfig<F> {
    /// Total privacy budget for one query's K-list.
    pub epsilon_p: F,
    pub k: usize,
    pub mechanism: Mechanism,
    /// Only used by the Gaussian baseline.
    pub delta_p: F,
    pub seed: u64,
}

impl<F: Real> DpConfig<F> {
    pub fn new(mechanism: Mechanism, epsilon_p: F, k: usize) -> Result<Self> {
        let cfg = Self {
            epsilon_p,
            k,
            mechanism,
            delta_p: F::lit(DEFAULT_DELTA_P),
            seed: 0,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_delta_p(mut self, delta_p: F) -> Result<Self> {
        self.delta_p = delta_p;
        self.validate()?;
        Ok(self)
    }

    pub fn with_epsilon(mut self, epsilon_p: F) -> Result<Self> {
        self.epsilon_p = epsilon_p;
        self.validate()?;
        Ok(self)
    }

    pub fn with_mechanism(mut self, mechanism: Mechanism) -> Result<Self> {
        self.mechanism = mechanism;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        if self.k == 0 {
            return Err(invalid("k must be at least 1"));
        }
        if self.mechanism.is_private()
            && (!(self.epsilon_p > F::zero()) || !self.epsilon_p.is_finite())
        {
            return Err(invalid(format!(
                "epsilon_p must be positive, got {}",
                self.epsilon_p
            )));
        }
        if !(self.delta_p > F::zero() && self.delta_p < F::one()) {
            return Err(invalid(format!(
                "delta_p must lie in (0, 1), got {}",
                self.delta_p
            )));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Recommendation<F> {
    pub query: NodeId,
    pub items: Vec<NodeId>,
    /// Log-probability of each sequential draw (sampling mechanisms only).
    pub step_log_probs: Option<Vec<F>>,
}

impl<F: Real> Recommendation<F> {
    pub fn log_probability(&self) -> Option<F> {
        self.step_log_probs
            .as_ref()
            .map(|steps| steps.iter().copied().sum())
    }
}

/// Exponent of the DPLP weights `(s + Δ + 1)^σ` spending `epsilon_p` over `k` draws.
pub fn dplp_sigma<F: Real>(epsilon_p: F, k: usize, delta_a: F) -> Result<F> {
    if !(epsilon_p > F::zero()) {
        return Err(invalid("epsilon_p must be positive"));
    }
    if k == 0 {
        return Err(invalid("k must be at least 1"));
    }
    check_sensitivity(delta_a)?;
    Ok(epsilon_p / (F::lit(2.0) * F::from_count(k) * (delta_a + F::one()).ln()))
}

fn check_sensitivity<F: Real>(delta_a: F) -> Result<()> {
    if delta_a > F::zero() && delta_a.is_finite() {
        Ok(())
    } else {
        Err(invalid(format!(
            "sensitivity must be positive, got {delta_a}"
        )))
    }
}

/// A sequential without-replacement sampler defined by its per-candidate log-weight.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SequentialSampler<F> {
    /// `σ · ln(s + Δ + 1)`.
    Dplp { sigma: F, delta_a: F },
    /// `scale · s`, with `scale = ε_p / (2 K Δ)` for the exponential baseline.
    Exponential { scale: F },
}

impl<F: Real> SequentialSampler<F> {
    /// DPLP with an explicit exponent; `sigma = 0` is the uniform sampler.
    pub fn dplp(sigma: F, delta_a: F) -> Result<Self> {
        if !(sigma >= F::zero()) || !sigma.is_finite() {
            return Err(invalid(format!(
                "sigma must be finite and non-negative, got {sigma}"
            )));
        }
        check_sensitivity(delta_a)?;
        Ok(Self::Dplp { sigma, delta_a })
    }

    /// Exponential mechanism splitting `epsilon_p` evenly over `k` draws.
    pub fn exponential(epsilon_p: F, k: usize, delta_a: F) -> Result<Self> {
        if !(epsilon_p >= F::zero()) || k == 0 {
            return Err(invalid(
                "exponential sampler needs epsilon_p >= 0 and k >= 1",
            ));
        }
        check_sensitivity(delta_a)?;
        Ok(Self::Exponential {
            scale: epsilon_p / (F::lit(2.0) * F::from_count(k) * delta_a),
        })
    }

    pub fn from_config(cfg: &DpConfig<F>, delta_a: F) -> Result<Self> {
        match cfg.mechanism {
            Mechanism::Dplp => Self::dplp(dplp_sigma(cfg.epsilon_p, cfg.k, delta_a)?, delta_a),
            Mechanism::Exponential => Self::exponential(cfg.epsilon_p, cfg.k, delta_a),
            other => Err(Error::UnsupportedMechanism(other)),
        }
    }

    #[inline]
    pub fn log_weight(&self, score: F) -> F {
        match *self {
            Self::Dplp { sigma, delta_a } => sigma * (score + delta_a + F::one()).ln(),
            Self::Exponential { scale } => scale * score,
        }
    }

    pub fn log_weights(&self, sc: &ScoredCandidates<F>) -> Vec<F> {
        sc.entries
            .iter()
            .map(|&(_, s)| self.log_weight(s))
            .collect()
    }

    /// Draws `min(k, |pool|)` candidates in order.
    pub fn sample<R: Rng + ?Sized>(
        &self,
        sc: &ScoredCandidates<F>,
        k: usize,
        rng: &mut R,
    ) -> Result<Recommendation<F>> {
        if sc.is_empty() {
            return Err(Error::EmptyPool);
        }
        let lw = self.log_weights(sc);
        let mut keyed: Vec<(F, usize)> = lw
            .iter()
            .enumerate()
            .map(|(i, &w)| (w + F::lit(rng::standard_gumbel(rng)), i))
            .collect();
        let take = k.min(keyed.len());
        let by_key = |a: &(F, usize), b: &(F, usize)| {
            b.0.partial_cmp(&a.0)
                .unwrap_or(std::cmp::Ordering::Equal)
                .then(sc.entries[a.1].0.cmp(&sc.entries[b.1].0))
        };
        if take < keyed.len() {
            keyed.select_nth_unstable_by(take - 1, by_key);
            keyed.truncate(take);
        }
        keyed.sort_by(by_key);
        let order: Vec<usize> = keyed.into_iter().map(|(_, i)| i).collect();
        let step_log_probs = sequence_log_probs(&lw, &order);
        Ok(Recommendation {
            query: sc.query,
            items: order.iter().map(|&i| sc.entries[i].0).collect(),
            step_log_probs: Some(step_log_probs),
        })
    }

    /// Exact log-probability of emitting `items` (in order) as the first draws.
    pub fn log_probability(&self, sc: &ScoredCandidates<F>, items: &[NodeId]) -> Result<F> {
        let order = positions_of(sc, items)?;
        let lw = self.log_weights(sc);
        Ok(sequence_log_probs(&lw, &order).into_iter().sum())
    }

    /// Log-probability of each remaining candidate being the next draw after `taken`.
    pub fn step_log_probabilities(
        &self,
        sc: &ScoredCandidates<F>,
        taken: &[NodeId],
    ) -> Result<Vec<(NodeId, F)>> {
        let taken = positions_of(sc, taken)?;
        let lw = self.log_weights(sc);
        let mut used = vec![false; lw.len()];
        for &i in &taken {
            used[i] = true;
        }
        let remaining: Vec<usize> = (0..lw.len()).filter(|&i| !used[i]).collect();
        let norm = log_sum_exp(remaining.iter().map(|&i| lw[i]));
        Ok(remaining
            .into_iter()
            .map(|i| (sc.entries[i].0, lw[i] - norm))
            .collect())
    }
}

/// Per-step log-probabilities of drawing the pool indices `order` in sequence.
fn sequence_log_probs<F: Real>(lw: &[F], order: &[usize]) -> Vec<F> {
    let mut used = vec![false; lw.len()];
    let mut out = Vec::with_capacity(order.len());
    for &i in order {
        let norm = log_sum_exp(lw.iter().zip(&used).filter(|(_, &u)| !u).map(|(&w, _)| w));
        out.push(lw[i] - norm);
        used[i] = true;
    }
    out
}

fn positions_of<F: Real>(sc: &ScoredCandidates<F>, items: &[NodeId]) -> Result<Vec<usize>> {
    let mut seen = vec![false; sc.len()];
    items
        .iter()
        .map(|&v| {
            let pos = sc
                .entries
                .iter()
                .position(|&(w, _)| w == v)
                .ok_or_else(|| {
                    Error::InvalidPool(format!("item {v} is not in the candidate pool"))
                })?;
            if std::mem::replace(&mut seen[pos], true) {
                return Err(Error::InvalidPool(format!("item {v} listed twice")));
            }
            Ok(pos)
        })
        .collect()
}

fn expect_mechanism<F>(cfg: &DpConfig<F>, wanted: Mechanism) -> Result<()> {
    if cfg.mechanism == wanted {
        Ok(())
    } else {
        Err(invalid(format!(
            "config selects `{}`, expected `{wanted}`",
            cfg.mechanism
        )))
    }
}

pub fn dplp_sample<F: Real, R: Rng + ?Sized>(
    sc: &ScoredCandidates<F>,
    cfg: &DpConfig<F>,
    delta_a: F,
    rng: &mut R,
) -> Result<Recommendation<F>> {
    expect_mechanism(cfg, Mechanism::Dplp)?;
    SequentialSampler::from_config(cfg, delta_a)?.sample(sc, cfg.k, rng)
}

pub fn exponential_topk<F: Real, R: Rng + ?Sized>(
    sc: &ScoredCandidates<F>,
    cfg: &DpConfig<F>,
    delta_a: F,
    rng: &mut R,
) -> Result<Recommendation<F>> {
    expect_mechanism(cfg, Mechanism::Exponential)?;
    SequentialSampler::from_config(cfg, delta_a)?.sample(sc, cfg.k, rng)
}

/// Laplace scale `2 K Δ / ε_p`.
pub fn laplace_scale<F: Real>(cfg: &DpConfig<F>, delta_a: F) -> F {
    F::lit(2.0) * F::from_count(cfg.k) * delta_a / cfg.epsilon_p
}

/// Gaussian standard deviation `(2 K Δ / ε_p) · sqrt(2 ln(1.25 / δ_p))`.
pub fn gaussian_std<F: Real>(cfg: &DpConfig<F>, delta_a: F) -> F {
    laplace_scale(cfg, delta_a) * (F::lit(2.0) * (F::lit(1.25) / cfg.delta_p).ln()).sqrt()
}

pub fn laplace_topk<F: Real, R: Rng + ?Sized>(
    sc: &ScoredCandidates<F>,
    cfg: &DpConfig<F>,
    delta_a: F,
    rng: &mut R,
) -> Result<Recommendation<F>> {
    expect_mechanism(cfg, Mechanism::Laplace)?;
    check_sensitivity(delta_a)?;
    let scale = laplace_scale(cfg, delta_a).as_f64();
    noisy_top_k(sc, cfg.k, || F::lit(rng::laplace(rng, scale)))
}

pub fn gaussian_topk<F: Real, R: Rng + ?Sized>(
    sc: &ScoredCandidates<F>,
    cfg: &DpConfig<F>,
    delta_a: F,
    rng: &mut R,
) -> Result<Recommendation<F>> {
    expect_mechanism(cfg, Mechanism::Gaussian)?;
    check_sensitivity(delta_a)?;
    let std = gaussian_std(cfg, delta_a).as_f64();
    noisy_top_k(sc, cfg.k, || F::lit(rng::gaussian(rng, std)))
}

pub fn nonprivate_topk<F: Real>(sc: &ScoredCandidates<F>, k: usize) -> Result<Recommendation<F>> {
    if sc.is_empty() {
        return Err(Error::EmptyPool);
    }
    Ok(Recommendation {
        query: sc.query,
        items: sc.top_k(k),
        step_log_probs: None,
    })
}

fn noisy_top_k<F: Real>(
    sc: &ScoredCandidates<F>,
    k: usize,
    mut noise: impl FnMut() -> F,
) -> Result<Recommendation<F>> {
    if sc.is_empty() {
        return Err(Error::EmptyPool);
    }
    // noisy scores can be negative, so skip the validating constructor
    let noisy = ScoredCandidates {
        query: sc.query,
        entries: sc.entries.iter().map(|&(v, s)| (v, s + noise())).collect(),
    };
    Ok(Recommendation {
        query: sc.query,
        items: noisy.top_k(k),
        step_log_probs: None,
    })
}

/// Runs whichever mechanism `cfg` selects.
pub fn recommend<F: Real, R: Rng + ?Sized>(
    sc: &ScoredCandidates<F>,
    cfg: &DpConfig<F>,
    delta_a: F,
    rng: &mut R,
) -> Result<Recommendation<F>> {
    match cfg.mechanism {
        Mechanism::Dplp => dplp_sample(sc, cfg, delta_a, rng),
        Mechanism::Exponential => exponential_topk(sc, cfg, delta_a, rng),
        Mechanism::Laplace => laplace_topk(sc, cfg, delta_a, rng),
        Mechanism::Gaussian => gaussian_topk(sc, cfg, delta_a, rng),
        Mechanism::NonPrivate => nonprivate_topk(sc, cfg.k),
    }
}

/// Exact log-probability that the sampling mechanism in `cfg` outputs `items`.
pub fn exact_output_probability<F: Real>(
    sc: &ScoredCandidates<F>,
    cfg: &DpConfig<F>,
    delta_a: F,
    items: &[NodeId],
) -> Result<F> {
    SequentialSampler::from_config(cfg, delta_a)?.log_probability(sc, items)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::{task_rng, Purpose};

    fn pool(scores: &[f64]) -> ScoredCandidates<f64> {
        ScoredCandidates::new(
            0,
            scores
                .iter()
                .enumerate()
                .map(|(i, &s)| (i + 1, s))
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn sigma_examples() {
        let s = dplp_sigma(0.1, 10, 1.0).unwrap();
        assert!((s - 0.1 / (20.0 * 2.0_f64.ln())).abs() < 1e-15);
        assert!((s - 0.0072135).abs() < 1e-7);
        let aa = 1.0 / 2.0_f64.ln();
        let s_aa = dplp_sigma(0.1, 10, aa).unwrap();
        assert!((s_aa - 0.1 / (20.0 * (1.0 + aa).ln())).abs() < 1e-15);
        assert!((s_aa - 0.0055985).abs() < 1e-7);
        for &(k, d) in &[(1usize, 1.0), (7, 0.3), (10, aa)] {
            let eps = 2.0 * k as f64 * (d + 1.0_f64).ln();
            assert!((dplp_sigma(eps, k, d).unwrap() - 1.0).abs() < 1e-12);
        }
        assert!(dplp_sigma(0.0, 1, 1.0).is_err());
        assert!(dplp_sigma(1.0, 0, 1.0).is_err());
        assert!(dplp_sigma(1.0, 1, -1.0).is_err());
    }

    #[test]
    fn exact_probability_examples() {
        let sc = pool(&[1.0, 0.0]);
        let sampler = SequentialSampler::dplp(1.0, 1.0).unwrap();
        let lp = sampler.log_probability(&sc, &[1, 2]).unwrap();
        assert!((lp - 0.6_f64.ln()).abs() < 1e-12);
        let first = sampler.log_probability(&sc, &[1]).unwrap();
        assert!((first.exp() - 0.6).abs() < 1e-12);

        let uniform = SequentialSampler::dplp(0.0, 1.0).unwrap();
        let sc = pool(&[3.0, 1.0, 0.0, 2.0, 5.0]);
        let lp = uniform.log_probability(&sc, &[4, 2, 5]).unwrap();
        assert!((lp.exp() - 1.0 / (5.0 * 4.0 * 3.0)).abs() < 1e-12);

        let full = sampler
            .sample(&sc, 5, &mut task_rng(3, Purpose::Mechanism, 0, 0))
            .unwrap();
        let steps = full.step_log_probs.unwrap();
        assert!(steps.last().unwrap().abs() < 1e-12);
        assert!(steps.iter().sum::<f64>() <= 0.0);

        assert!(sampler.log_probability(&sc, &[9]).is_err());
        assert!(sampler.log_probability(&sc, &[1, 1]).is_err());
    }

    #[test]
    fn exponential_first_draw() {
        let cfg = DpConfig::new(Mechanism::Exponential, 2.0, 2).unwrap();
        let sc = pool(&[1.0, 0.0]);
        let p = exact_output_probability(&sc, &cfg, 1.0, &[1])
            .unwrap()
            .exp();
        let e = 0.5_f64.exp();
        assert!((p - e / (e + 1.0)).abs() < 1e-12);
        assert!((p - 0.6225).abs() < 1e-4);
    }

    #[test]
    fn step_distributions_are_normalized() {
        let sc = pool(&[0.0, 4.0, 2.5, 9.0, 1.0]);
        for sampler in [
            SequentialSampler::dplp(3.0, 1.0).unwrap(),
            SequentialSampler::exponential(5.0, 2, 1.0).unwrap(),
        ] {
            for taken in [&[][..], &[4][..], &[4, 2, 3][..]] {
                let steps = sampler.step_log_probabilities(&sc, taken).unwrap();
                let total: f64 = steps.iter().map(|&(_, lp)| lp.exp()).sum();
                assert!((total - 1.0).abs() < 1e-9);
                assert_eq!(steps.len(), sc.len() - taken.len());
            }
        }
    }

    #[test]
    fn sample_reports_its_own_probability() {
        let sc = pool(&[0.0, 4.0, 2.5, 9.0, 1.0]);
        let sampler = SequentialSampler::dplp(0.7, 1.0).unwrap();
        let mut rng = task_rng(11, Purpose::Mechanism, 0, 0);
        for _ in 0..20 {
            let rec = sampler.sample(&sc, 3, &mut rng).unwrap();
            let recomputed = sampler.log_probability(&sc, &rec.items).unwrap();
            assert!((rec.log_probability().unwrap() - recomputed).abs() < 1e-12);
        }
    }

    #[test]
    fn short_pools_return_everything() {
        let cfg = DpConfig::new(Mechanism::Dplp, 1.0, 10).unwrap();
        let sc = pool(&[1.0, 2.0, 3.0]);
        let rec = dplp_sample(&sc, &cfg, 1.0, &mut task_rng(0, Purpose::Mechanism, 0, 0)).unwrap();
        let mut items = rec.items.clone();
        items.sort_unstable();
        assert_eq!(items, vec![1, 2, 3]);
        for m in Mechanism::ALL {
            let cfg = cfg.with_mechanism(m).unwrap();
            let rec = recommend(&sc, &cfg, 1.0, &mut task_rng(0, Purpose::Mechanism, 0, 0));
            assert_eq!(rec.unwrap().items.len(), 3);
        }
    }

    #[test]
    fn empty_pool_is_an_error() {
        let sc = pool(&[]);
        for m in Mechanism::ALL {
            let cfg = DpConfig::new(m, 1.0, 2).unwrap();
            let res = recommend(&sc, &cfg, 1.0, &mut task_rng(0, Purpose::Mechanism, 0, 0));
            assert!(matches!(res, Err(Error::EmptyPool)), "{m}");
        }
    }

    #[test]
    fn singleton_pools() {
        let sc = pool(&[0.3]);
        for m in Mechanism::ALL {
            let cfg = DpConfig::new(m, 0.01, 3).unwrap();
            let rec = recommend(&sc, &cfg, 1.0, &mut task_rng(5, Purpose::Mechanism, 0, 0));
            assert_eq!(rec.unwrap().items, vec![1]);
        }
        let cfg = DpConfig::new(Mechanism::Exponential, 0.5, 1).unwrap();
        assert!(
            exact_output_probability(&sc, &cfg, 1.0, &[1])
                .unwrap()
                .abs()
                < 1e-15
        );
    }

    #[test]
    fn noisy_baselines_converge_to_deterministic_ranking() {
        let sc = pool(&[0.0, 4.0, 2.5, 9.0, 1.0, 4.5]);
        let expected = sc.top_k(4);
        assert_eq!(expected, vec![4, 6, 2, 3]);
        for m in [Mechanism::Laplace, Mechanism::Gaussian] {
            let cfg = DpConfig::new(m, 1e9, 4).unwrap().with_delta_p(0.1).unwrap();
            let mut rng = task_rng(2, Purpose::Mechanism, 0, 0);
            for _ in 0..100 {
                assert_eq!(recommend(&sc, &cfg, 1.0, &mut rng).unwrap().items, expected);
            }
        }
    }

    #[test]
    fn noisy_baselines_are_symmetric_on_ties() {
        let sc = pool(&[2.0, 2.0]);
        for m in [Mechanism::Laplace, Mechanism::Gaussian] {
            let cfg = DpConfig::new(m, 1.0, 1).unwrap();
            let mut rng = task_rng(9, Purpose::Mechanism, 1, 0);
            let runs = 10_000;
            let first = (0..runs)
                .filter(|_| recommend(&sc, &cfg, 1.0, &mut rng).unwrap().items[0] == 1)
                .count();
            let freq = first as f64 / runs as f64;
            assert!((freq - 0.5).abs() < 0.02, "{m}: {freq}");
        }
    }

    #[test]
    fn calibration_constants() {
        let cfg = DpConfig::new(Mechanism::Gaussian, 0.5, 3).unwrap();
        assert!((laplace_scale(&cfg, 1.0) - 12.0_f64).abs() < 1e-12);
        let expected = 12.0 * (2.0 * (1.25e5_f64).ln()).sqrt();
        assert!((gaussian_std(&cfg, 1.0) - expected).abs() < 1e-9);
    }

    #[test]
    fn config_validation() {
        assert!(DpConfig::new(Mechanism::Dplp, 0.0, 1).is_err());
        assert!(DpConfig::new(Mechanism::Dplp, 1.0, 0).is_err());
        assert!(DpConfig::new(Mechanism::NonPrivate, 0.0, 1).is_ok());
        assert!(DpConfig::new(Mechanism::Gaussian, 1.0, 1)
            .unwrap()
            .with_delta_p(1.0)
            .is_err());
        let cfg = DpConfig::new(Mechanism::Laplace, 1.0, 1).unwrap();
        let sc = pool(&[1.0]);
        assert!(dplp_sample(&sc, &cfg, 1.0, &mut task_rng(0, Purpose::Mechanism, 0, 0)).is_err());
        assert!(matches!(
            exact_output_probability(&sc, &cfg, 1.0, &[1]),
            Err(Error::UnsupportedMechanism(Mechanism::Laplace))
        ));
        assert_eq!("EXP".parse::<Mechanism>().unwrap(), Mechanism::Exponential);
        assert!("foo".parse::<Mechanism>().is_err());
    }
}

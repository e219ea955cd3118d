//! Exact privacy auditing of the sequential samplers on small graphs.
//!
//! For a query node, every admissible neighboring graph is built and the
//! exact probability of every ordered output list is compared between the
//! two graphs. Perturbations touching the query node change the candidate
//! set itself, so the log-ratio is undefined there; they are skipped and
//! counted.

use std::fmt;

use rand::Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::{EdgePerturbation, Graph, NodeId};
use crate::heuristics::{Heuristic, ScoreFunction};
use crate::mechanisms::{DpConfig, Mechanism, SequentialSampler};
use crate::scalar::{log_sum_exp, Real};

/// Largest number of ordered output lists enumerated for one query.
pub const ENUMERATION_LIMIT: u128 = 1_000_000;

/// Slack on log-ratio comparisons.
pub const LOG_RATIO_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoundKind {
    /// The general guarantee: log-ratio at most `epsilon_p`.
    Epsilon,
    /// Common neighbors and Jaccard under DPLP: at most `epsilon_p / 2`.
    HalfEpsilon,
    /// The mechanism is only (ε, δ)-DP; nothing was checked.
    NotPureDp,
}

impl BoundKind {
    pub fn name(self) -> &'static str {
        match self {
            BoundKind::Epsilon => "epsilon",
            BoundKind::HalfEpsilon => "half_epsilon",
            BoundKind::NotPureDp => "not_pure_dp",
        }
    }

    /// Bound claimed for `mechanism` run over `heuristic`.
    pub fn claimed_for(mechanism: Mechanism, heuristic: Heuristic) -> Result<Self> {
        match mechanism {
            Mechanism::Dplp if heuristic.has_halved_privacy_loss() => Ok(BoundKind::HalfEpsilon),
            Mechanism::Dplp | Mechanism::Exponential => Ok(BoundKind::Epsilon),
            Mechanism::Gaussian => Ok(BoundKind::NotPureDp),
            other => Err(Error::UnsupportedMechanism(other)),
        }
    }

    pub fn bound<F: Real>(self, epsilon_p: F) -> F {
        match self {
            BoundKind::Epsilon => epsilon_p,
            BoundKind::HalfEpsilon => epsilon_p / F::lit(2.0),
            BoundKind::NotPureDp => F::nan(),
        }
    }
}

impl fmt::Display for BoundKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// The instance achieving the largest log-ratio.
#[derive(Clone, Debug, PartialEq)]
pub struct AuditWitness {
    pub graph: Graph,
    pub perturbation: EdgePerturbation,
    pub query: NodeId,
    pub output: Vec<NodeId>,
}

#[derive(Clone, Debug)]
pub struct AuditReport<F> {
    pub bound_kind: BoundKind,
    pub epsilon_p: F,
    pub max_abs_log_ratio: F,
    pub claimed_bound: F,
    pub witness: Option<AuditWitness>,
    pub passed: bool,
    /// Neighboring (graph, graph') pairs audited, per query.
    pub pairs_checked: usize,
    /// Ordered output lists compared, summed over pairs.
    pub outputs_checked: usize,
    /// Perturbations incident to the query node, not audited.
    pub skipped_incident: usize,
}

impl<F: Real> AuditReport<F> {
    fn empty(bound_kind: BoundKind, epsilon_p: F) -> Self {
        Self {
            bound_kind,
            epsilon_p,
            max_abs_log_ratio: F::zero(),
            claimed_bound: bound_kind.bound(epsilon_p),
            witness: None,
            passed: bound_kind != BoundKind::NotPureDp,
            pairs_checked: 0,
            outputs_checked: 0,
            skipped_incident: 0,
        }
    }

    /// `max_abs_log_ratio / claimed_bound`; 0 when the bound is 0.
    pub fn tightness(&self) -> F {
        if self.claimed_bound > F::zero() {
            self.max_abs_log_ratio / self.claimed_bound
        } else {
            F::zero()
        }
    }

    fn refresh_passed(&mut self) {
        self.passed = self.bound_kind != BoundKind::NotPureDp
            && self.max_abs_log_ratio <= self.claimed_bound + F::lit(LOG_RATIO_TOLERANCE);
    }

    /// Folds another report for the same bound into this one.
    pub fn merge(mut self, other: AuditReport<F>) -> Self {
        if other.max_abs_log_ratio > self.max_abs_log_ratio {
            self.max_abs_log_ratio = other.max_abs_log_ratio;
            self.witness = other.witness;
        }
        self.pairs_checked += other.pairs_checked;
        self.outputs_checked += other.outputs_checked;
        self.skipped_incident += other.skipped_incident;
        self.refresh_passed();
        self
    }

    pub const CSV_HEADER: &'static str =
        "bound_kind,epsilon_p,max_abs_log_ratio,pairs_checked,outputs_checked,passed";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{}",
            self.bound_kind,
            self.epsilon_p,
            self.max_abs_log_ratio,
            self.pairs_checked,
            self.outputs_checked,
            self.passed
        )
    }

    pub fn to_csv(&self) -> String {
        format!("{}\n{}\n", Self::CSV_HEADER, self.csv_row())
    }
}

/// Number of ordered `k`-lists drawn without replacement from `m` items.
pub fn ordered_list_count(m: usize, k: usize) -> u128 {
    let k = k.min(m);
    ((m - k + 1)..=m).fold(1u128, |acc, x| acc.saturating_mul(x as u128))
}

/// Audits the mechanism selected by `cfg` at one query node.
pub fn audit_exact<F: Real>(
    g: &Graph,
    f: &ScoreFunction<F>,
    cfg: &DpConfig<F>,
    query: NodeId,
) -> Result<AuditReport<F>> {
    let kind = BoundKind::claimed_for(cfg.mechanism, f.heuristic())?;
    if kind == BoundKind::NotPureDp {
        g.check(query)?;
        return Ok(AuditReport::empty(kind, cfg.epsilon_p));
    }
    let sampler = SequentialSampler::from_config(cfg, f.sensitivity())?;
    audit_exact_with_sampler(g, f, &sampler, cfg.k, cfg.epsilon_p, kind, query)
}

/// Audits an explicitly constructed sampler (e.g. DPLP with a forced exponent).
pub fn audit_exact_with_sampler<F: Real>(
    g: &Graph,
    f: &ScoreFunction<F>,
    sampler: &SequentialSampler<F>,
    k: usize,
    epsilon_p: F,
    bound_kind: BoundKind,
    query: NodeId,
) -> Result<AuditReport<F>> {
    let pool = g.non_neighbors(query)?;
    if pool.is_empty() {
        return Err(Error::EmptyPool);
    }
    let count = ordered_list_count(pool.len(), k);
    if count > ENUMERATION_LIMIT {
        return Err(Error::EnumerationTooLarge {
            count,
            limit: ENUMERATION_LIMIT,
        });
    }
    let base = sampler.log_weights(&f.score_pool(g, query, &pool)?);
    let mut report = AuditReport::empty(bound_kind, epsilon_p);
    let depth = k.min(pool.len());

    for p in g.perturbations() {
        if p.is_incident_to(query) {
            report.skipped_incident += 1;
            continue;
        }
        let neighbor = g.apply_perturbation(&p)?;
        let perturbed = sampler.log_weights(&f.score_pool(&neighbor, query, &pool)?);
        let mut walk = ListWalk::new(&base, &perturbed, depth);
        walk.run();
        report.pairs_checked += 1;
        report.outputs_checked += walk.outputs;
        if walk.best > report.max_abs_log_ratio || report.witness.is_none() {
            report.max_abs_log_ratio = report.max_abs_log_ratio.max(walk.best);
            report.witness = Some(AuditWitness {
                graph: g.clone(),
                perturbation: p,
                query,
                output: walk.best_list.iter().map(|&i| pool[i]).collect(),
            });
        }
    }
    let ratio = report.tightness();
    log::debug!(
        "audit query {query}: max |log ratio| = {} ({ratio} of bound)",
        report.max_abs_log_ratio
    );
    report.refresh_passed();
    Ok(report)
}

/// Depth-first enumeration of ordered output lists, tracking the log
/// probability of the current prefix under both graphs.
struct ListWalk<'a, F> {
    base: &'a [F],
    perturbed: &'a [F],
    depth: usize,
    used: Vec<bool>,
    prefix: Vec<usize>,
    best: F,
    best_list: Vec<usize>,
    outputs: usize,
}

impl<'a, F: Real> ListWalk<'a, F> {
    fn new(base: &'a [F], perturbed: &'a [F], depth: usize) -> Self {
        Self {
            base,
            perturbed,
            depth,
            used: vec![false; base.len()],
            prefix: Vec::with_capacity(depth),
            best: F::neg_infinity(),
            best_list: Vec::new(),
            outputs: 0,
        }
    }

    fn run(&mut self) {
        self.descend(F::zero(), F::zero());
    }

    fn descend(&mut self, lp_base: F, lp_perturbed: F) {
        if self.prefix.len() == self.depth {
            self.outputs += 1;
            let gap = (lp_base - lp_perturbed).abs();
            if gap > self.best {
                self.best = gap;
                self.best_list = self.prefix.clone();
            }
            return;
        }
        let remaining = |weights: &[F], used: &[bool]| {
            log_sum_exp(
                weights
                    .iter()
                    .zip(used)
                    .filter(|(_, &u)| !u)
                    .map(|(&w, _)| w),
            )
        };
        let norm_base = remaining(self.base, &self.used);
        let norm_perturbed = remaining(self.perturbed, &self.used);
        for i in 0..self.base.len() {
            if self.used[i] {
                continue;
            }
            self.used[i] = true;
            self.prefix.push(i);
            self.descend(
                lp_base + self.base[i] - norm_base,
                lp_perturbed + self.perturbed[i] - norm_perturbed,
            );
            self.prefix.pop();
            self.used[i] = false;
        }
    }
}

/// Erdős–Rényi graph on `n` nodes with edge probability `p`.
pub fn random_graph<R: Rng + ?Sized>(n: usize, p: f64, rng: &mut R) -> Graph {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in (u + 1)..n {
            if rng.random_bool(p) {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(n, edges).expect("edges within range")
}

/// Audits random small graphs at every query node with a non-empty pool.
///
/// Each graph has `max_nodes` nodes and an edge probability drawn uniformly
/// from [0.2, 0.8]. Graphs are drawn sequentially from `rng`; audits run in
/// parallel and are merged in graph order.
pub fn audit_random_suite<F: Real, R: Rng + ?Sized>(
    n_graphs: usize,
    max_nodes: usize,
    f: &ScoreFunction<F>,
    cfg: &DpConfig<F>,
    rng: &mut R,
) -> Result<AuditReport<F>> {
    if max_nodes > 8 {
        return Err(crate::error::invalid(format!(
            "random audit suites are limited to 8 nodes, got {max_nodes}"
        )));
    }
    let kind = BoundKind::claimed_for(cfg.mechanism, f.heuristic())?;
    let graphs: Vec<Graph> = (0..n_graphs)
        .map(|_| {
            let p = rng.random_range(0.2..0.8);
            random_graph(max_nodes, p, rng)
        })
        .collect();
    let per_graph: Vec<AuditReport<F>> = graphs
        .par_iter()
        .map(|g| {
            let mut acc = AuditReport::empty(kind, cfg.epsilon_p);
            for q in 0..g.node_count() {
                if g.degree(q)? + 1 == g.node_count() {
                    continue;
                }
                acc = acc.merge(audit_exact(g, f, cfg, q)?);
            }
            Ok(acc)
        })
        .collect::<Result<_>>()?;
    Ok(per_graph
        .into_iter()
        .fold(AuditReport::empty(kind, cfg.epsilon_p), AuditReport::merge))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::{task_rng, Purpose};

    fn g0() -> Graph {
        Graph::from_edges(4, [(0, 1), (1, 2), (0, 2), (2, 3)]).unwrap()
    }

    /// Independent oracle: brute-force product of step probabilities with
    /// the weights computed in linear space.
    fn brute_force_max_ratio(
        g: &Graph,
        f: &ScoreFunction<f64>,
        sigma: f64,
        k: usize,
        q: NodeId,
    ) -> f64 {
        let delta = f.sensitivity();
        let pool = g.non_neighbors(q).unwrap();
        let weights = |h: &Graph| -> Vec<f64> {
            pool.iter()
                .map(|&v| (f.score(h, q, v).unwrap() + delta + 1.0).powf(sigma))
                .collect()
        };
        fn lists(m: usize, k: usize) -> Vec<Vec<usize>> {
            if k == 0 {
                return vec![vec![]];
            }
            let mut out = Vec::new();
            for prefix in lists(m, k - 1) {
                for i in 0..m {
                    if !prefix.contains(&i) {
                        let mut l = prefix.clone();
                        l.push(i);
                        out.push(l);
                    }
                }
            }
            out
        }
        let prob = |w: &[f64], list: &[usize]| {
            let mut p = 1.0;
            let mut left: f64 = w.iter().sum();
            for &i in list {
                p *= w[i] / left;
                left -= w[i];
            }
            p
        };
        let w0 = weights(g);
        let mut best: f64 = 0.0;
        for p in g.perturbations().filter(|p| !p.is_incident_to(q)) {
            let w1 = weights(&g.apply_perturbation(&p).unwrap());
            for list in lists(pool.len(), k.min(pool.len())) {
                best = best.max((prob(&w0, &list) / prob(&w1, &list)).ln().abs());
            }
        }
        best
    }

    #[test]
    fn cn_on_small_graph_meets_half_budget() {
        let g = g0();
        let f = ScoreFunction::common_neighbors();
        let cfg = DpConfig::new(Mechanism::Dplp, 0.5, 1).unwrap();
        let report = audit_exact(&g, &f, &cfg, 3).unwrap();
        assert_eq!(report.bound_kind, BoundKind::HalfEpsilon);
        assert!((report.claimed_bound - 0.25_f64).abs() < 1e-15);
        assert!(report.passed);
        // three pairs avoid node 3: (0,1), (0,2), (1,2)
        assert_eq!(report.pairs_checked, 3);
        assert_eq!(report.skipped_incident, 3);
        assert_eq!(report.outputs_checked, 6);
        let sigma = 0.5 / (2.0 * 2.0_f64.ln());
        let oracle = brute_force_max_ratio(&g, &f, sigma, 1, 3);
        assert!((report.max_abs_log_ratio - oracle).abs() < 1e-12);
        assert!(report.max_abs_log_ratio > 0.0);
    }

    #[test]
    fn matches_brute_force_on_random_graphs() {
        let mut rng = task_rng(4, Purpose::Audit, 0, 0);
        for (i, f) in [
            ScoreFunction::common_neighbors(),
            ScoreFunction::jaccard(),
            ScoreFunction::adamic_adar(),
        ]
        .iter()
        .enumerate()
        {
            for trial in 0..5 {
                let g = random_graph(6, 0.5, &mut rng);
                let cfg = DpConfig::new(Mechanism::Dplp, 0.8, 2).unwrap();
                let sigma = crate::mechanisms::dplp_sigma(0.8, 2, f.sensitivity()).unwrap();
                for q in 0..6 {
                    if g.non_neighbors(q).unwrap().is_empty() {
                        continue;
                    }
                    let report = audit_exact(&g, f, &cfg, q).unwrap();
                    let oracle = brute_force_max_ratio(&g, f, sigma, 2, q);
                    assert!(
                        (report.max_abs_log_ratio - oracle).abs() < 1e-10,
                        "heuristic {i} trial {trial} query {q}"
                    );
                    assert!(report.passed);
                }
            }
        }
    }

    #[test]
    fn uniform_sampler_leaks_nothing() {
        let g = g0();
        let f = ScoreFunction::common_neighbors();
        let sampler = SequentialSampler::dplp(0.0, 1.0).unwrap();
        let report =
            audit_exact_with_sampler(&g, &f, &sampler, 1, 0.5, BoundKind::HalfEpsilon, 0).unwrap();
        assert_eq!(report.max_abs_log_ratio, 0.0);
        assert!(report.passed);
    }

    #[test]
    fn score_invariant_perturbations_leak_nothing() {
        // node 3 is isolated, so no perturbation avoiding it changes CN(3, ·)
        let g = Graph::from_edges(5, [(0, 1), (0, 2)]).unwrap();
        let f = ScoreFunction::common_neighbors();
        let cfg = DpConfig::new(Mechanism::Dplp, 1.0, 1).unwrap();
        let report = audit_exact(&g, &f, &cfg, 3).unwrap();
        assert_eq!(report.max_abs_log_ratio, 0.0);

        let ext = ScoreFunction::external([((0, 3), 2.0)], 1.0).unwrap();
        let report = audit_exact(&g, &ext, &cfg, 0).unwrap();
        assert_eq!(report.max_abs_log_ratio, 0.0);
        assert_eq!(report.bound_kind, BoundKind::Epsilon);
    }

    #[test]
    fn gaussian_is_reported_not_passed() {
        let cfg = DpConfig::new(Mechanism::Gaussian, 1.0, 1).unwrap();
        let report = audit_exact(&g0(), &ScoreFunction::jaccard(), &cfg, 0).unwrap();
        assert_eq!(report.bound_kind, BoundKind::NotPureDp);
        assert!(!report.passed);
        assert!(report.to_csv().contains("not_pure_dp"));
        let cfg = DpConfig::new(Mechanism::Laplace, 1.0, 1).unwrap();
        assert!(audit_exact(&g0(), &ScoreFunction::jaccard(), &cfg, 0).is_err());
    }

    #[test]
    fn refuses_huge_enumerations() {
        let g = Graph::empty(40);
        let cfg = DpConfig::new(Mechanism::Dplp, 1.0, 5).unwrap();
        let err = audit_exact(&g, &ScoreFunction::<f64>::common_neighbors(), &cfg, 0).unwrap_err();
        match err {
            Error::EnumerationTooLarge { count, .. } => assert_eq!(count, 39 * 38 * 37 * 36 * 35),
            other => panic!("unexpected {other:?}"),
        }
        let complete = Graph::from_edges(2, [(0, 1)]).unwrap();
        assert!(matches!(
            audit_exact(&complete, &ScoreFunction::<f64>::jaccard(), &cfg, 0),
            Err(Error::EmptyPool)
        ));
    }

    #[test]
    fn empty_suite_is_vacuous() {
        let cfg = DpConfig::new(Mechanism::Dplp, 0.3, 2).unwrap();
        let mut rng = task_rng(0, Purpose::Audit, 0, 0);
        let report =
            audit_random_suite(0, 7, &ScoreFunction::<f64>::adamic_adar(), &cfg, &mut rng).unwrap();
        assert!(report.passed);
        assert_eq!(report.pairs_checked, 0);
        assert!(
            audit_random_suite(1, 9, &ScoreFunction::<f64>::adamic_adar(), &cfg, &mut rng).is_err()
        );
    }

    #[test]
    fn ordered_counts() {
        assert_eq!(ordered_list_count(6, 2), 30);
        assert_eq!(ordered_list_count(3, 5), 6);
        assert_eq!(ordered_list_count(0, 2), 1);
    }
}

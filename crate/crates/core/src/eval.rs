//! Held-out link prediction evaluation: query selection, per-query splits,
//! AP@K, and expected MAP over repeated randomized trials.

use rand::seq::index;
use rayon::prelude::*;

use crate::error::{invalid, Error, Result};
use crate::graph::{Graph, NodeId};
use crate::heuristics::{Heuristic, ScoreFunction, ScoredCandidates};
use crate::mechanisms::{recommend, DpConfig, Mechanism};
use crate::metrics::score_gap;
use crate::rng::{task_rng, Purpose};
use crate::scalar::Real;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SplitSpec {
    /// Fraction of the query's neighbors kept in the training graph.
    pub keep_fraction: f64,
    pub k: usize,
    pub trials: usize,
    pub seed: u64,
}

impl Default for SplitSpec {
    fn default() -> Self {
        Self {
            keep_fraction: 0.85,
            k: 10,
            trials: 10,
            seed: 0,
        }
    }
}

impl SplitSpec {
    pub fn new(keep_fraction: f64, k: usize, trials: usize, seed: u64) -> Result<Self> {
        let spec = Self {
            keep_fraction,
            k,
            trials,
            seed,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.keep_fraction > 0.0 && self.keep_fraction <= 1.0) {
            return Err(invalid(format!(
                "keep_fraction must lie in (0, 1], got {}",
                self.keep_fraction
            )));
        }
        if self.k == 0 || self.trials == 0 {
            return Err(invalid("k and trials must be at least 1"));
        }
        Ok(())
    }

    /// Number of items hidden out of `available`.
    pub fn hidden_count(&self, available: usize) -> usize {
        // the epsilon keeps e.g. 0.15 * 20 from flooring to 2
        (((1.0 - self.keep_fraction) * available as f64) + 1e-9).floor() as usize
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuerySplit {
    pub query: NodeId,
    /// The input graph without the hidden edges at the query.
    pub train: Graph,
    /// Hidden neighbors and held non-neighbors, ascending.
    pub held_pool: Vec<NodeId>,
    /// Hidden neighbors, ascending.
    pub held_positives: Vec<NodeId>,
}

/// Nodes that lie on at least one triangle, ascending.
pub fn select_queries(g: &Graph) -> Vec<NodeId> {
    (0..g.node_count())
        .filter(|&u| g.has_triangle(u).unwrap_or(false))
        .collect()
}

fn sample_sorted<R: rand::Rng + ?Sized>(
    rng: &mut R,
    from: &[NodeId],
    amount: usize,
) -> Vec<NodeId> {
    let mut picked: Vec<NodeId> = index::sample(rng, from.len(), amount)
        .into_iter()
        .map(|i| from[i])
        .collect();
    picked.sort_unstable();
    picked
}

/// Random split for `query` in `trial`, or `None` when the query is isolated.
pub fn split_for_query(
    g: &Graph,
    query: NodeId,
    spec: &SplitSpec,
    trial: usize,
) -> Result<Option<QuerySplit>> {
    spec.validate()?;
    let neighbors = g.neighbors(query)?;
    if neighbors.is_empty() {
        return Ok(None);
    }
    let non_neighbors = g.non_neighbors(query)?;
    let mut rng = task_rng(spec.seed, Purpose::Split, query as u64, trial as u64);
    let held_positives = sample_sorted(&mut rng, neighbors, spec.hidden_count(neighbors.len()));
    let held_negatives = sample_sorted(
        &mut rng,
        &non_neighbors,
        spec.hidden_count(non_neighbors.len()),
    );
    let mut held_pool: Vec<NodeId> = held_positives
        .iter()
        .chain(&held_negatives)
        .copied()
        .collect();
    held_pool.sort_unstable();
    let train = g.without_edges_at(query, &held_positives);
    Ok(Some(QuerySplit {
        query,
        train,
        held_pool,
        held_positives,
    }))
}

/// AP@K normalized by `min(K, |positives|)`; `None` when there are no positives.
pub fn average_precision(ranked: &[NodeId], positives: &[NodeId], k: usize) -> Option<f64> {
    if positives.is_empty() || k == 0 {
        return None;
    }
    let mut hits = 0usize;
    let mut total = 0.0;
    for (i, v) in ranked.iter().take(k).enumerate() {
        if positives.contains(v) {
            hits += 1;
            total += hits as f64 / (i + 1) as f64;
        }
    }
    Some(total / k.min(positives.len()) as f64)
}

#[derive(Clone, Debug, PartialEq)]
pub struct EvalRow<F> {
    pub mechanism: Mechanism,
    pub heuristic: Heuristic,
    pub epsilon_p: F,
    pub expected_map: f64,
    pub stderr: f64,
    /// Queries with at least one hidden positive.
    pub n_queries: usize,
    pub trials: usize,
    /// Eligible queries dropped because nothing was hidden.
    pub skipped_queries: usize,
    /// Mean top-K score gap between the deterministic ranking and the mechanism.
    pub gamma_bar: F,
    /// Largest candidate score seen in any held pool.
    pub s_max: F,
}

impl<F: Real> EvalRow<F> {
    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{}",
            self.mechanism,
            self.heuristic,
            self.epsilon_p,
            self.expected_map,
            self.stderr,
            self.n_queries,
            self.trials
        )
    }
}

#[derive(Clone, Debug, PartialEq, Default)]
pub struct EvalReport<F> {
    pub rows: Vec<EvalRow<F>>,
}

impl<F: Real> EvalReport<F> {
    pub const CSV_HEADER: &'static str =
        "mechanism,heuristic,epsilon_p,expected_map,stderr,n_queries,trials";

    pub fn to_csv(&self) -> String {
        let mut out = String::from(Self::CSV_HEADER);
        out.push('\n');
        for row in &self.rows {
            out.push_str(&row.csv_row());
            out.push('\n');
        }
        out
    }
}

/// A scored held pool for one (trial, query) cell.
struct Cell<F> {
    trial: usize,
    candidates: ScoredCandidates<F>,
    positives: Vec<NodeId>,
}

struct Prepared<F> {
    cells: Vec<Cell<F>>,
    n_queries: usize,
    skipped: usize,
}

fn prepare<F: Real>(g: &Graph, f: &ScoreFunction<F>, spec: &SplitSpec) -> Result<Prepared<F>> {
    spec.validate()?;
    let queries = select_queries(g);
    if queries.is_empty() {
        return Err(Error::NoEligibleQueries);
    }
    let hidden: Vec<NodeId> = queries
        .iter()
        .copied()
        .filter(|&q| spec.hidden_count(g.row(q).len()) > 0)
        .collect();
    if hidden.is_empty() {
        return Err(Error::NoEligibleQueries);
    }
    let tasks: Vec<(usize, NodeId)> = (0..spec.trials)
        .flat_map(|t| hidden.iter().map(move |&q| (t, q)))
        .collect();
    let cells = tasks
        .par_iter()
        .map(|&(trial, q)| {
            let split =
                split_for_query(g, q, spec, trial)?.expect("queries on a triangle have neighbors");
            let candidates = f.score_all(&split.train, q, &split.held_pool)?;
            Ok(Cell {
                trial,
                candidates,
                positives: split.held_positives,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Prepared {
        cells,
        n_queries: hidden.len(),
        skipped: queries.len() - hidden.len(),
    })
}

fn run_cells<F: Real>(
    prepared: &Prepared<F>,
    heuristic: Heuristic,
    delta_a: F,
    cfg: &DpConfig<F>,
    spec: &SplitSpec,
) -> Result<EvalRow<F>> {
    cfg.validate()?;
    if cfg.k != spec.k {
        return Err(invalid(format!(
            "config K={} differs from split K={}",
            cfg.k, spec.k
        )));
    }
    let outcomes = prepared
        .cells
        .par_iter()
        .map(|cell| {
            let q = cell.candidates.query;
            let mut rng = task_rng(cfg.seed, Purpose::Mechanism, q as u64, cell.trial as u64);
            let rec = recommend(&cell.candidates, cfg, delta_a, &mut rng)?;
            let ap = average_precision(&rec.items, &cell.positives, cfg.k)
                .expect("cells always have positives");
            let gap = score_gap(&cell.candidates, &rec.items)?;
            let top = cell
                .candidates
                .entries
                .iter()
                .map(|e| e.1)
                .fold(F::zero(), F::max);
            Ok((ap, gap, top))
        })
        .collect::<Result<Vec<_>>>()?;

    let mut per_trial = vec![0.0; spec.trials];
    let mut gap_total = F::zero();
    let mut s_max = F::zero();
    for (cell, &(ap, gap, top)) in prepared.cells.iter().zip(&outcomes) {
        per_trial[cell.trial] += ap;
        gap_total = gap_total + gap;
        s_max = s_max.max(top);
    }
    let n = prepared.n_queries as f64;
    let maps: Vec<f64> = per_trial.iter().map(|s| s / n).collect();
    let mean = maps.iter().sum::<f64>() / maps.len() as f64;
    let stderr = if maps.len() > 1 {
        let var = maps.iter().map(|m| (m - mean).powi(2)).sum::<f64>() / (maps.len() - 1) as f64;
        (var / maps.len() as f64).sqrt()
    } else {
        0.0
    };
    Ok(EvalRow {
        mechanism: cfg.mechanism,
        heuristic,
        epsilon_p: cfg.epsilon_p,
        expected_map: mean,
        stderr,
        n_queries: prepared.n_queries,
        trials: spec.trials,
        skipped_queries: prepared.skipped,
        gamma_bar: gap_total / F::from_count(outcomes.len()),
        s_max,
    })
}

/// Expected MAP@K of one mechanism and heuristic over `spec.trials` trials.
pub fn evaluate<F: Real>(
    g: &Graph,
    f: &ScoreFunction<F>,
    cfg: &DpConfig<F>,
    spec: &SplitSpec,
) -> Result<EvalRow<F>> {
    let prepared = prepare(g, f, spec)?;
    run_cells(&prepared, f.heuristic(), f.sensitivity(), cfg, spec)
}

/// Every heuristic × mechanism × epsilon combination on shared splits and
/// shared mechanism streams. Rows are ordered heuristic-major, then
/// mechanism, then epsilon.
pub fn sweep<F: Real>(
    g: &Graph,
    functions: &[ScoreFunction<F>],
    template: &DpConfig<F>,
    mechanisms: &[Mechanism],
    epsilons: &[F],
    spec: &SplitSpec,
) -> Result<EvalReport<F>> {
    if epsilons.is_empty() || mechanisms.is_empty() || functions.is_empty() {
        return Err(invalid(
            "sweep needs at least one heuristic, mechanism and epsilon",
        ));
    }
    let mut rows = Vec::with_capacity(functions.len() * mechanisms.len() * epsilons.len());
    for f in functions {
        let prepared = prepare(g, f, spec)?;
        for &mechanism in mechanisms {
            for &eps in epsilons {
                let cfg = template.with_mechanism(mechanism)?.with_epsilon(eps)?;
                let row = run_cells(&prepared, f.heuristic(), f.sensitivity(), &cfg, spec)?;
                log::debug!("{}", row.csv_row());
                rows.push(row);
            }
        }
    }
    Ok(EvalReport { rows })
}

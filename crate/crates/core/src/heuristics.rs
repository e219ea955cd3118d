//! Triad link-prediction scores and their single-edge sensitivities.

use std::collections::HashMap;
use std::fmt;
use std::io::BufRead;
use std::str::FromStr;

use crate::error::{invalid, Error, Result};
use crate::graph::{for_each_common, sorted_intersection_count, Graph, NodeId};
use crate::scalar::Real;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Heuristic {
    CommonNeighbors,
    Jaccard,
    AdamicAdar,
    /// Scores computed elsewhere (e.g. by an embedding method) and read from a file.
    External,
}

impl Heuristic {
    pub fn name(self) -> &'static str {
        match self {
            Heuristic::CommonNeighbors => "cn",
            Heuristic::Jaccard => "jc",
            Heuristic::AdamicAdar => "aa",
            Heuristic::External => "external",
        }
    }

    /// Sensitivity constant of the built-in heuristics; `None` for external scores.
    pub fn sensitivity<F: Real>(self) -> Option<F> {
        match self {
            Heuristic::CommonNeighbors | Heuristic::Jaccard => Some(F::one()),
            Heuristic::AdamicAdar => Some(F::one() / F::lit(2.0).ln()),
            Heuristic::External => None,
        }
    }

    /// Whether one edge flip can move the score of at most one candidate in
    /// the same direction, which halves the privacy loss of the sampler.
    pub fn has_halved_privacy_loss(self) -> bool {
        matches!(self, Heuristic::CommonNeighbors | Heuristic::Jaccard)
    }
}

impl fmt::Display for Heuristic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Heuristic {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "cn" | "common-neighbors" => Ok(Heuristic::CommonNeighbors),
            "jc" | "jaccard" => Ok(Heuristic::Jaccard),
            "aa" | "adamic-adar" => Ok(Heuristic::AdamicAdar),
            "external" => Ok(Heuristic::External),
            other => Err(invalid(format!("unknown heuristic `{other}`"))),
        }
    }
}

pub fn score_cn<F: Real>(g: &Graph, u: NodeId, v: NodeId) -> Result<F> {
    check_pair(g, u, v)?;
    Ok(F::from_count(sorted_intersection_count(g.row(u), g.row(v))))
}

/// Jaccard coefficient; 0 when both neighborhoods are empty.
pub fn score_jc<F: Real>(g: &Graph, u: NodeId, v: NodeId) -> Result<F> {
    check_pair(g, u, v)?;
    let (a, b) = (g.row(u), g.row(v));
    let common = sorted_intersection_count(a, b);
    let union = a.len() + b.len() - common;
    if union == 0 {
        return Ok(F::zero());
    }
    Ok(F::from_count(common) / F::from_count(union))
}

/// Adamic-Adar: sum of `1 / ln deg(w)` over common neighbors `w`.
pub fn score_aa<F: Real>(g: &Graph, u: NodeId, v: NodeId) -> Result<F> {
    check_pair(g, u, v)?;
    let mut total = F::zero();
    // a common neighbor of two distinct nodes has degree >= 2
    for_each_common(g.row(u), g.row(v), |w| {
        total = total + F::one() / F::from_count(g.row(w).len()).ln();
    });
    Ok(total)
}

fn check_pair(g: &Graph, u: NodeId, v: NodeId) -> Result<()> {
    g.check(u)?;
    g.check(v)?;
    if u == v {
        return Err(invalid(format!("score requested for identical nodes {u}")));
    }
    Ok(())
}

/// Scores of the candidates offered to one query node.
#[derive(Clone, Debug, PartialEq)]
pub struct ScoredCandidates<F> {
    pub query: NodeId,
    pub entries: Vec<(NodeId, F)>,
}

impl<F: Real> ScoredCandidates<F> {
    /// Validates distinctness and non-negativity of a hand-built candidate list.
    pub fn new(query: NodeId, entries: Vec<(NodeId, F)>) -> Result<Self> {
        let mut ids: Vec<NodeId> = entries.iter().map(|&(v, _)| v).collect();
        ids.sort_unstable();
        if ids.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidPool("duplicate candidate".into()));
        }
        if ids.binary_search(&query).is_ok() {
            return Err(Error::InvalidPool(format!(
                "query {query} listed as its own candidate"
            )));
        }
        if entries
            .iter()
            .any(|&(_, s)| !(s >= F::zero()) || !s.is_finite())
        {
            return Err(Error::InvalidPool(
                "scores must be finite and non-negative".into(),
            ));
        }
        Ok(Self { query, entries })
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn ids(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.entries.iter().map(|&(v, _)| v)
    }

    pub fn score_of(&self, v: NodeId) -> Option<F> {
        self.entries.iter().find(|&&(w, _)| w == v).map(|&(_, s)| s)
    }

    /// Indices into `entries` ordered by score descending, node id ascending.
    pub fn ranked_indices(&self) -> Vec<usize> {
        let mut idx: Vec<usize> = (0..self.entries.len()).collect();
        idx.sort_by(|&a, &b| {
            let (va, sa) = self.entries[a];
            let (vb, sb) = self.entries[b];
            sb.partial_cmp(&sa)
                .unwrap_or(std::cmp::Ordering::Equal)
                .then(va.cmp(&vb))
        });
        idx
    }

    /// Deterministic top-`k` (fewer if the pool is smaller).
    pub fn top_k(&self, k: usize) -> Vec<NodeId> {
        self.ranked_indices()
            .into_iter()
            .take(k)
            .map(|i| self.entries[i].0)
            .collect()
    }

    /// Score sum of the deterministic top-`k`.
    pub fn top_k_score_sum(&self, k: usize) -> F {
        self.ranked_indices()
            .into_iter()
            .take(k)
            .map(|i| self.entries[i].1)
            .sum()
    }
}

/// A heuristic bundled with the sensitivity constant used to calibrate privacy.
#[derive(Clone, Debug)]
pub struct ScoreFunction<F> {
    heuristic: Heuristic,
    sensitivity: F,
    /// External scores keyed by unordered original-label pair `(min, max)`.
    table: HashMap<(u64, u64), F>,
}

impl<F: Real> ScoreFunction<F> {
    pub fn common_neighbors() -> Self {
        Self::builtin(Heuristic::CommonNeighbors)
    }

    pub fn jaccard() -> Self {
        Self::builtin(Heuristic::Jaccard)
    }

    pub fn adamic_adar() -> Self {
        Self::builtin(Heuristic::AdamicAdar)
    }

    fn builtin(heuristic: Heuristic) -> Self {
        let sensitivity = heuristic.sensitivity().expect("built-in heuristic");
        Self {
            heuristic,
            sensitivity,
            table: HashMap::new(),
        }
    }

    /// Built-in heuristic by kind; external scores must come from [`ScoreFunction::external`].
    pub fn from_heuristic(heuristic: Heuristic) -> Result<Self> {
        match heuristic {
            Heuristic::External => Err(invalid(
                "external scores need a score table and a sensitivity",
            )),
            h => Ok(Self::builtin(h)),
        }
    }

    /// External score table over original node labels. Pairs are unordered.
    pub fn external(
        scores: impl IntoIterator<Item = ((u64, u64), F)>,
        sensitivity: F,
    ) -> Result<Self> {
        if !(sensitivity > F::zero()) || !sensitivity.is_finite() {
            return Err(invalid(format!(
                "sensitivity must be positive, got {sensitivity}"
            )));
        }
        let mut table = HashMap::new();
        for ((a, b), s) in scores {
            if !(s >= F::zero()) || !s.is_finite() {
                return Err(invalid(format!(
                    "negative or non-finite score {s} for pair ({a}, {b})"
                )));
            }
            let key = (a.min(b), a.max(b));
            if let Some(prev) = table.insert(key, s) {
                if prev != s {
                    return Err(invalid(format!(
                        "conflicting scores {prev} and {s} for pair ({a}, {b})"
                    )));
                }
            }
        }
        Ok(Self {
            heuristic: Heuristic::External,
            sensitivity,
            table,
        })
    }

    pub fn heuristic(&self) -> Heuristic {
        self.heuristic
    }

    pub fn sensitivity(&self) -> F {
        self.sensitivity
    }

    pub fn score(&self, g: &Graph, u: NodeId, v: NodeId) -> Result<F> {
        match self.heuristic {
            Heuristic::CommonNeighbors => score_cn(g, u, v),
            Heuristic::Jaccard => score_jc(g, u, v),
            Heuristic::AdamicAdar => score_aa(g, u, v),
            Heuristic::External => {
                check_pair(g, u, v)?;
                let (a, b) = (g.label(u), g.label(v));
                Ok(self
                    .table
                    .get(&(a.min(b), a.max(b)))
                    .copied()
                    .unwrap_or_else(F::zero))
            }
        }
    }

    /// Scores a pool of current non-neighbors of `u`.
    pub fn score_all(&self, g: &Graph, u: NodeId, pool: &[NodeId]) -> Result<ScoredCandidates<F>> {
        g.check(u)?;
        for &v in pool {
            g.check(v)?;
            if g.row(u).binary_search(&v).is_ok() {
                return Err(Error::InvalidPool(format!(
                    "candidate {v} is a neighbor of {u}"
                )));
            }
        }
        self.score_pool(g, u, pool)
    }

    /// Scores an explicit pool without requiring candidates to be non-neighbors.
    pub fn score_pool(&self, g: &Graph, u: NodeId, pool: &[NodeId]) -> Result<ScoredCandidates<F>> {
        let entries = pool
            .iter()
            .map(|&v| Ok((v, self.score(g, u, v)?)))
            .collect::<Result<Vec<_>>>()?;
        ScoredCandidates::new(u, entries)
    }

    /// Scores the full non-neighbor set of `u`.
    pub fn score_non_neighbors(&self, g: &Graph, u: NodeId) -> Result<ScoredCandidates<F>> {
        let pool = g.non_neighbors(u)?;
        self.score_pool(g, u, &pool)
    }
}

/// Reads `u v score` lines (labels in the original id space, `#` comments).
pub fn load_external_scores<F: Real, R: BufRead>(
    reader: R,
    sensitivity: F,
) -> Result<ScoreFunction<F>> {
    let mut rows = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = trimmed.split_ascii_whitespace().collect();
        if fields.len() != 3 {
            return Err(Error::Parse {
                line: idx + 1,
                message: format!("expected `u v score`, found {} fields", fields.len()),
            });
        }
        let parse_err = |what: &str, e: &dyn fmt::Display| Error::Parse {
            line: idx + 1,
            message: format!("bad {what}: {e}"),
        };
        let a: u64 = fields[0].parse().map_err(|e| parse_err("node id", &e))?;
        let b: u64 = fields[1].parse().map_err(|e| parse_err("node id", &e))?;
        let s: f64 = fields[2].parse().map_err(|e| parse_err("score", &e))?;
        if s < 0.0 {
            return Err(Error::Parse {
                line: idx + 1,
                message: format!("negative score {s}"),
            });
        }
        rows.push(((a, b), F::lit(s)));
    }
    ScoreFunction::external(rows, sensitivity)
}

//! Immutable undirected simple graph in compressed-row layout.
//!
//! Node ids are dense (`0..node_count`). Graphs loaded from edge-list files
//! keep the original integer labels in ascending order, so `label(u)` and
//! `node_of(label)` are O(1) and O(log n).

use std::io::{BufRead, Write};

use crate::error::{Error, Result};

pub type NodeId = usize;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Graph {
    offsets: Vec<usize>,
    targets: Vec<NodeId>,
    /// Original labels, strictly ascending. `None` means identity labels.
    labels: Option<Vec<u64>>,
}

/// Counts of noisy input lines dropped while building a graph.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct LoadReport {
    pub self_loops: usize,
    pub duplicates: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PerturbationKind {
    Add,
    Remove,
}

/// A single-edge change turning a graph into one of its neighbors.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct EdgePerturbation {
    pub u: NodeId,
    pub v: NodeId,
    pub kind: PerturbationKind,
}

impl EdgePerturbation {
    pub fn add(u: NodeId, v: NodeId) -> Self {
        Self {
            u,
            v,
            kind: PerturbationKind::Add,
        }
    }

    pub fn remove(u: NodeId, v: NodeId) -> Self {
        Self {
            u,
            v,
            kind: PerturbationKind::Remove,
        }
    }

    pub fn is_incident_to(&self, node: NodeId) -> bool {
        self.u == node || self.v == node
    }

    pub fn inverse(&self) -> Self {
        let kind = match self.kind {
            PerturbationKind::Add => PerturbationKind::Remove,
            PerturbationKind::Remove => PerturbationKind::Add,
        };
        Self { kind, ..*self }
    }
}

impl Graph {
    /// Graph with `node_count` isolated nodes.
    pub fn empty(node_count: usize) -> Self {
        Self {
            offsets: vec![0; node_count + 1],
            targets: Vec::new(),
            labels: None,
        }
    }

    /// Builds a graph from an edge iterator. Self-loops and repeated edges
    /// (in either orientation) are dropped and counted.
    pub fn from_edges<I>(node_count: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (NodeId, NodeId)>,
    {
        Self::build(node_count, edges).map(|(g, _)| g)
    }

    fn build<I>(node_count: usize, edges: I) -> Result<(Self, LoadReport)>
    where
        I: IntoIterator<Item = (NodeId, NodeId)>,
    {
        let mut report = LoadReport::default();
        let mut rows: Vec<Vec<NodeId>> = vec![Vec::new(); node_count];
        for (u, v) in edges {
            for node in [u, v] {
                if node >= node_count {
                    return Err(Error::NodeOutOfRange { node, node_count });
                }
            }
            if u == v {
                report.self_loops += 1;
                continue;
            }
            rows[u].push(v);
            rows[v].push(u);
        }
        let mut offsets = Vec::with_capacity(node_count + 1);
        let mut targets = Vec::new();
        offsets.push(0);
        let mut removed = 0;
        for row in &mut rows {
            row.sort_unstable();
            let before = row.len();
            row.dedup();
            removed += before - row.len();
            targets.extend_from_slice(row);
            offsets.push(targets.len());
        }
        // each duplicate edge was removed once from each endpoint row
        report.duplicates = removed / 2;
        Ok((
            Self {
                offsets,
                targets,
                labels: None,
            },
            report,
        ))
    }

    /// Reads a whitespace-separated edge list. Lines starting with `#` and
    /// blank lines are ignored; extra columns after the first two are ignored.
    /// Labels are compacted to `0..node_count` in ascending label order.
    pub fn load_edge_list<R: BufRead>(reader: R) -> Result<(Self, LoadReport)> {
        let mut raw = Vec::new();
        for (idx, line) in reader.lines().enumerate() {
            let line = line?;
            let trimmed = line.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let mut fields = trimmed.split_ascii_whitespace();
            let parse = |field: Option<&str>| -> Result<u64> {
                let field = field.ok_or_else(|| Error::Parse {
                    line: idx + 1,
                    message: "expected two node ids".into(),
                })?;
                field.parse::<u64>().map_err(|e| Error::Parse {
                    line: idx + 1,
                    message: format!("bad node id `{field}`: {e}"),
                })
            };
            let a = parse(fields.next())?;
            let b = parse(fields.next())?;
            raw.push((a, b));
        }

        let mut labels: Vec<u64> = raw.iter().flat_map(|&(a, b)| [a, b]).collect();
        labels.sort_unstable();
        labels.dedup();
        let index = |label: u64| labels.binary_search(&label).expect("label collected above");
        let edges: Vec<(NodeId, NodeId)> = raw.iter().map(|&(a, b)| (index(a), index(b))).collect();
        let (mut graph, report) = Self::build(labels.len(), edges)?;
        if report.self_loops > 0 || report.duplicates > 0 {
            log::warn!(
                "edge list: dropped {} self-loops and {} duplicate edges",
                report.self_loops,
                report.duplicates
            );
        }
        graph.labels = Some(labels);
        Ok((graph, report))
    }

    /// Writes `label_u label_v` per edge with `u < v`.
    pub fn write_edge_list<W: Write>(&self, mut out: W) -> Result<()> {
        for (u, v) in self.edges() {
            writeln!(out, "{} {}", self.label(u), self.label(v))?;
        }
        Ok(())
    }

    pub fn node_count(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn edge_count(&self) -> usize {
        self.targets.len() / 2
    }

    /// Original label of a node (the node id itself for graphs not read from a file).
    pub fn label(&self, u: NodeId) -> u64 {
        match &self.labels {
            Some(labels) => labels[u],
            None => u as u64,
        }
    }

    pub fn node_of(&self, label: u64) -> Result<NodeId> {
        match &self.labels {
            Some(labels) => labels
                .binary_search(&label)
                .map_err(|_| Error::UnknownLabel(label)),
            None if (label as usize) < self.node_count() => Ok(label as usize),
            None => Err(Error::UnknownLabel(label)),
        }
    }

    pub(crate) fn check(&self, u: NodeId) -> Result<()> {
        if u < self.node_count() {
            Ok(())
        } else {
            Err(Error::NodeOutOfRange {
                node: u,
                node_count: self.node_count(),
            })
        }
    }

    /// Unchecked neighbor slice; callers validate `u`.
    #[inline]
    pub(crate) fn row(&self, u: NodeId) -> &[NodeId] {
        &self.targets[self.offsets[u]..self.offsets[u + 1]]
    }

    pub fn neighbors(&self, u: NodeId) -> Result<&[NodeId]> {
        self.check(u)?;
        Ok(self.row(u))
    }

    pub fn degree(&self, u: NodeId) -> Result<usize> {
        self.neighbors(u).map(<[NodeId]>::len)
    }

    pub fn has_edge(&self, u: NodeId, v: NodeId) -> Result<bool> {
        self.check(u)?;
        self.check(v)?;
        Ok(self.row(u).binary_search(&v).is_ok())
    }

    /// `V \ ({u} ∪ N(u))`, ascending.
    pub fn non_neighbors(&self, u: NodeId) -> Result<Vec<NodeId>> {
        let row = self.neighbors(u)?;
        let mut out = Vec::with_capacity(self.node_count().saturating_sub(row.len() + 1));
        let mut it = row.iter().peekable();
        for v in 0..self.node_count() {
            if it.peek() == Some(&&v) {
                it.next();
                continue;
            }
            if v != u {
                out.push(v);
            }
        }
        Ok(out)
    }

    /// True iff `u` lies on at least one triangle.
    pub fn has_triangle(&self, u: NodeId) -> Result<bool> {
        let row = self.neighbors(u)?;
        Ok(row
            .iter()
            .any(|&v| sorted_intersection_count(row, self.row(v)) > 0))
    }

    /// Edges as `(u, v)` with `u < v`, in row order.
    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
        (0..self.node_count()).flat_map(move |u| {
            self.row(u)
                .iter()
                .filter(move |&&v| v > u)
                .map(move |&v| (u, v))
        })
    }

    /// Every single-edge perturbation: one per unordered node pair.
    pub fn perturbations(&self) -> impl Iterator<Item = EdgePerturbation> + '_ {
        let n = self.node_count();
        (0..n).flat_map(move |u| {
            (u + 1..n).map(move |v| {
                if self.row(u).binary_search(&v).is_ok() {
                    EdgePerturbation::remove(u, v)
                } else {
                    EdgePerturbation::add(u, v)
                }
            })
        })
    }

    /// Returns the neighboring graph; `self` is left untouched.
    pub fn apply_perturbation(&self, p: &EdgePerturbation) -> Result<Graph> {
        self.check(p.u)?;
        self.check(p.v)?;
        if p.u == p.v {
            return Err(Error::InvalidPerturbation(format!(
                "self-loop at node {}",
                p.u
            )));
        }
        let present = self.row(p.u).binary_search(&p.v).is_ok();
        match (p.kind, present) {
            (PerturbationKind::Add, true) => {
                return Err(Error::InvalidPerturbation(format!(
                    "edge ({}, {}) already present",
                    p.u, p.v
                )))
            }
            (PerturbationKind::Remove, false) => {
                return Err(Error::InvalidPerturbation(format!(
                    "edge ({}, {}) not present",
                    p.u, p.v
                )))
            }
            _ => {}
        }
        Ok(self.with_rows_edited(&[(p.u, p.v), (p.v, p.u)], p.kind))
    }

    /// Removes a set of edges incident to `center` in one rebuild.
    pub(crate) fn without_edges_at(&self, center: NodeId, others: &[NodeId]) -> Graph {
        let mut edits: Vec<(NodeId, NodeId)> = Vec::with_capacity(2 * others.len());
        for &o in others {
            edits.push((center, o));
            edits.push((o, center));
        }
        self.with_rows_edited(&edits, PerturbationKind::Remove)
    }

    /// Copies the adjacency, inserting or removing `target` in the row of
    /// `node` for every `(node, target)` edit. Edits must be valid.
    fn with_rows_edited(&self, edits: &[(NodeId, NodeId)], kind: PerturbationKind) -> Graph {
        let n = self.node_count();
        let mut by_row: Vec<(NodeId, NodeId)> = edits.to_vec();
        by_row.sort_unstable();
        let delta_len = by_row.len();
        let new_len = match kind {
            PerturbationKind::Add => self.targets.len() + delta_len,
            PerturbationKind::Remove => self.targets.len() - delta_len,
        };
        let mut offsets = Vec::with_capacity(n + 1);
        let mut targets = Vec::with_capacity(new_len);
        offsets.push(0);
        let mut cursor = 0;
        for u in 0..n {
            let start = cursor;
            while cursor < by_row.len() && by_row[cursor].0 == u {
                cursor += 1;
            }
            let row_edits = &by_row[start..cursor];
            if row_edits.is_empty() {
                targets.extend_from_slice(self.row(u));
            } else {
                let mut row: Vec<NodeId> = self.row(u).to_vec();
                for &(_, t) in row_edits {
                    match (kind, row.binary_search(&t)) {
                        (PerturbationKind::Add, Err(pos)) => row.insert(pos, t),
                        (PerturbationKind::Remove, Ok(pos)) => {
                            row.remove(pos);
                        }
                        _ => unreachable!("edit validated by caller"),
                    }
                }
                targets.extend_from_slice(&row);
            }
            offsets.push(targets.len());
        }
        Graph {
            offsets,
            targets,
            labels: self.labels.clone(),
        }
    }
}

/// Size of the intersection of two ascending slices.
pub(crate) fn sorted_intersection_count(a: &[NodeId], b: &[NodeId]) -> usize {
    let mut count = 0;
    for_each_common(a, b, |_| count += 1);
    count
}

/// Calls `f` on every element common to two ascending slices.
pub(crate) fn for_each_common(a: &[NodeId], b: &[NodeId], mut f: impl FnMut(NodeId)) {
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                f(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
}

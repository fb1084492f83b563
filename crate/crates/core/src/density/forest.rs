//! Covering forests over a finite window.
//!
//! Level 0 is the whole window with the Cayley graph restricted to it.
//! `A_{n+1}` is a greedy maximal 2-separating subset of `A_n` in `Γ_n`, each
//! point of `A_n` is attached to a centre of `A_{n+1}` within distance 2, and
//! `Γ_{n+1}` joins two centres when their clusters contain Cayley-adjacent
//! elements.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::group::{Ball, GroupModel};

/// Breadth-first search limited to a small radius, reusing its mark array.
struct LocalSearch {
    mark: Vec<u32>,
    stamp: u32,
    queue: Vec<(usize, usize)>,
}

impl LocalSearch {
    fn new(n: usize) -> Self {
        LocalSearch {
            mark: vec![0; n],
            stamp: 0,
            queue: Vec::new(),
        }
    }

    /// Nodes within distance `r` of `source`, with their distances, in BFS order.
    fn around(&mut self, graph: &Graph, source: usize, r: usize) -> &[(usize, usize)] {
        self.stamp += 1;
        self.queue.clear();
        self.queue.push((source, 0));
        self.mark[source] = self.stamp;
        let mut head = 0;
        while head < self.queue.len() {
            let (u, d) = self.queue[head];
            head += 1;
            if d == r {
                continue;
            }
            for &v in graph.neighbors(u) {
                if self.mark[v] != self.stamp {
                    self.mark[v] = self.stamp;
                    self.queue.push((v, d + 1));
                }
            }
        }
        &self.queue
    }
}

/// Greedy maximal `r`-separating subset of `points`, scanned in the given order.
///
/// Maximality makes it `r`-covering: any point farther than `r` from every
/// chosen point would have been chosen.
pub fn greedy_rnet(graph: &Graph, points: &[usize], r: usize) -> Vec<usize> {
    let mut search = LocalSearch::new(graph.len());
    let mut blocked = vec![false; graph.len()];
    let mut net = Vec::new();
    for &p in points {
        if blocked[p] {
            continue;
        }
        net.push(p);
        for &(v, _) in search.around(graph, p, r) {
            blocked[v] = true;
        }
    }
    net
}

#[derive(Clone, Debug)]
pub struct CoveringForest {
    group: GroupModel,
    window: Ball,
    /// `centers[n]` is `A_n` as ascending window indices.
    centers: Vec<Vec<usize>>,
    /// `parent[n][g]` for `g ∈ A_n`, `n < levels`.
    parent: Vec<Vec<Option<usize>>>,
    /// `owner[n][h]` is the level-`n` centre whose cluster contains leaf `h`.
    owner: Vec<Vec<usize>>,
    /// `Γ_n` on window indices; points outside `A_n` are isolated.
    graphs: Vec<Graph>,
}

/// `(5^n − 1)/2`, the radius bounding an `n`-cluster.
pub fn cluster_radius(n: usize) -> u64 {
    (5u64.pow(n as u32) - 1) / 2
}

impl CoveringForest {
    pub fn build(group: &GroupModel, radius: u32, levels: usize) -> Result<Self> {
        let window = group.identity_ball(radius)?;
        let g0 = Graph::from_adjacency(window.adjacency(group));
        let size = window.len();
        let mut forest = CoveringForest {
            group: group.clone(),
            window,
            centers: vec![(0..size).collect()],
            parent: Vec::new(),
            owner: vec![(0..size).collect()],
            graphs: vec![g0],
        };
        let mut search = LocalSearch::new(size);
        for n in 0..levels {
            let gamma = &forest.graphs[n];
            let net = greedy_rnet(gamma, &forest.centers[n], 2);
            if net.is_empty() {
                return Err(Error::LevelExhausted(n + 1));
            }
            let mut is_center = vec![false; size];
            for &c in &net {
                is_center[c] = true;
            }
            let mut parent = vec![None; size];
            for &g in &forest.centers[n] {
                let near = search.around(gamma, g, 2);
                // BFS order lists the node itself first, then distance 1, then 2.
                let best = near
                    .iter()
                    .filter(|&&(v, _)| is_center[v])
                    .min_by_key(|&&(v, d)| (d, v))
                    .map(|&(v, _)| v);
                parent[g] = best;
            }
            forest.parent.push(parent);
            forest.push_level(net)?;
        }
        Ok(forest)
    }

    /// Derives ownership and `Γ_{n+1}` once `parent[n]` is in place.
    fn push_level(&mut self, net: Vec<usize>) -> Result<()> {
        let n = self.centers.len() - 1;
        let parent = &self.parent[n];
        let owner: Vec<usize> = self.owner[n]
            .iter()
            .map(|&c| {
                parent[c]
                    .ok_or_else(|| Error::Malformed(format!("level-{n} centre without a parent")))
            })
            .collect::<Result<_>>()?;
        let mut gamma = Graph::new(self.window.len());
        for (u, v) in self.graphs[0].edges() {
            if owner[u] != owner[v] {
                gamma.add_edge(owner[u], owner[v]);
            }
        }
        self.centers.push(net);
        self.owner.push(owner);
        self.graphs.push(gamma);
        Ok(())
    }

    pub fn group(&self) -> &GroupModel {
        &self.group
    }

    pub fn window(&self) -> &Ball {
        &self.window
    }

    pub fn levels(&self) -> usize {
        self.centers.len() - 1
    }

    pub fn centers(&self, n: usize) -> &[usize] {
        &self.centers[n]
    }

    pub fn parent(&self, n: usize, g: usize) -> Option<usize> {
        self.parent.get(n)?[g]
    }

    pub fn owner(&self, n: usize, leaf: usize) -> usize {
        self.owner[n][leaf]
    }

    pub fn quotient_graph(&self, n: usize) -> &Graph {
        &self.graphs[n]
    }

    /// Leaves of `C_n(g)`, ascending.
    pub fn cluster(&self, n: usize, g: usize) -> Vec<usize> {
        (0..self.window.len())
            .filter(|&h| self.owner[n][h] == g)
            .collect()
    }

    /// All level-`n` clusters keyed by centre.
    pub fn clusters(&self, n: usize) -> BTreeMap<usize, Vec<usize>> {
        let mut out: BTreeMap<usize, Vec<usize>> =
            self.centers[n].iter().map(|&c| (c, Vec::new())).collect();
        for (h, &c) in self.owner[n].iter().enumerate() {
            out.get_mut(&c).expect("owner is a centre").push(h);
        }
        out
    }

    /// `B(g, n)` lies inside the window, so the cluster around `g` is built
    /// from complete local data.
    pub fn is_interior(&self, n: usize, g: usize) -> bool {
        self.window.depth(g) + n as u32 <= self.window.radius()
    }

    /// Children of `g ∈ A_n` in `A_{n-1}`, ascending.
    pub fn children(&self, n: usize, g: usize) -> Vec<usize> {
        self.centers[n - 1]
            .iter()
            .copied()
            .filter(|&h| self.parent[n - 1][h] == Some(g))
            .collect()
    }

    /// Brute-force check of nestedness, 2-separation, 2-covering, parent
    /// distances and the cluster partition.
    pub fn check_invariants(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::Malformed(msg));
        let size = self.window.len();
        for n in 0..self.levels() {
            let gamma = &self.graphs[n];
            let mut in_level = vec![false; size];
            for &g in &self.centers[n] {
                in_level[g] = true;
            }
            let mut is_center = vec![false; size];
            for &c in &self.centers[n + 1] {
                if !in_level[c] {
                    return fail(format!("A_{} is not contained in A_{n}", n + 1));
                }
                is_center[c] = true;
            }
            for &c in &self.centers[n + 1] {
                let d = gamma.distances_within(c, 2);
                if let Some(other) = self.centers[n + 1]
                    .iter()
                    .find(|&&o| o != c && d[o].is_some())
                {
                    return fail(format!(
                        "A_{} centres {c} and {other} are within distance 2",
                        n + 1
                    ));
                }
            }
            for &g in &self.centers[n] {
                let d = gamma.distances_within(g, 2);
                let Some(p) = self.parent[n][g] else {
                    return fail(format!("{g} in A_{n} has no parent"));
                };
                if !is_center[p] || d[p].is_none() {
                    return fail(format!(
                        "parent of {g} in A_{n} is not a centre within distance 2"
                    ));
                }
                let nearest = self.centers[n + 1].iter().filter_map(|&c| d[c]).min();
                if nearest != d[p] {
                    return fail(format!("parent of {g} in A_{n} is not a nearest centre"));
                }
            }
            for h in 0..size {
                if self.owner[n + 1][h] != self.parent[n][self.owner[n][h]].unwrap() {
                    return fail(format!(
                        "leaf {h} is in inconsistent clusters at level {}",
                        n + 1
                    ));
                }
            }
        }
        Ok(())
    }

    /// Checks `B(g,n) ⊆ C_n(g) ⊆ B(g, (5^n−1)/2)` for every interior centre.
    pub fn check_sandwich(&self) -> Result<SandwichReport> {
        let mut report = SandwichReport::default();
        for n in 1..=self.levels() {
            let outer = cluster_radius(n);
            for (c, leaves) in self.clusters(n) {
                if !self.is_interior(n, c) {
                    continue;
                }
                report.checked += 1;
                let g = self.window.get(c);
                let inner = self.group.ball(g, n as u32)?;
                if let Some(h) = inner.members().iter().find(|h| {
                    self.window
                        .index_of(h)
                        .is_none_or(|i| self.owner[n][i] != c)
                }) {
                    report.failures.push(format!(
                        "level {n} centre {}: {} ∈ B(g,{n}) is outside the cluster",
                        self.group.format(g),
                        self.group.format(h)
                    ));
                }
                for &h in &leaves {
                    if self.group.distance(g, self.window.get(h))? as u64 > outer {
                        report.failures.push(format!(
                            "level {n} centre {}: {} is farther than {outer}",
                            self.group.format(g),
                            self.group.format(self.window.get(h))
                        ));
                        break;
                    }
                }
            }
        }
        Ok(report)
    }

    pub fn to_record(&self) -> ForestRecord {
        let fmt = |i: usize| self.group.format(self.window.get(i));
        ForestRecord {
            group: self.group.spec(),
            radius: self.window.radius(),
            levels: (1..=self.levels())
                .map(|n| LevelRecord {
                    centers: self.centers[n].iter().map(|&c| fmt(c)).collect(),
                    parents: self.centers[n - 1]
                        .iter()
                        .map(|&g| (fmt(g), fmt(self.parent[n - 1][g].unwrap())))
                        .collect(),
                    edges: self.graphs[n]
                        .edges()
                        .map(|(u, v)| (fmt(u), fmt(v)))
                        .collect(),
                })
                .collect(),
        }
    }

    /// Rebuilds a forest from its record, re-deriving clusters and checking
    /// the stored quotient edges.
    pub fn from_record(record: &ForestRecord) -> Result<Self> {
        let group: GroupModel = record.group.parse()?;
        let window = group.identity_ball(record.radius)?;
        let size = window.len();
        let index = |text: &str| -> Result<usize> {
            let g = group.canonicalize(text)?;
            window.index_of(&g).ok_or_else(|| {
                Error::WindowMismatch(format!(
                    "{text} is outside the radius-{} window",
                    record.radius
                ))
            })
        };
        let g0 = Graph::from_adjacency(window.adjacency(&group));
        let mut forest = CoveringForest {
            group: group.clone(),
            window: window.clone(),
            centers: vec![(0..size).collect()],
            parent: Vec::new(),
            owner: vec![(0..size).collect()],
            graphs: vec![g0],
        };
        for level in &record.levels {
            let mut centers = level
                .centers
                .iter()
                .map(|c| index(c))
                .collect::<Result<Vec<_>>>()?;
            centers.sort_unstable();
            let mut parent = vec![None; size];
            for (g, p) in &level.parents {
                parent[index(g)?] = Some(index(p)?);
            }
            forest.parent.push(parent);
            forest.push_level(centers)?;
            let n = forest.levels();
            let mut stored = Graph::new(size);
            for (u, v) in &level.edges {
                stored.add_edge(index(u)?, index(v)?);
            }
            if stored.edges().ne(forest.graphs[n].edges()) {
                return Err(Error::Malformed(format!(
                    "level {n} quotient edges do not match the clusters"
                )));
            }
        }
        Ok(forest)
    }

    /// Graphviz rendering: one rank per level, edges from child to parent,
    /// each centre annotated with its cluster size and interior flag.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph forest {\n  rankdir=BT;\n");
        let sizes: Vec<HashMap<usize, usize>> = (0..=self.levels())
            .map(|n| {
                self.clusters(n)
                    .into_iter()
                    .map(|(c, l)| (c, l.len()))
                    .collect()
            })
            .collect();
        for (n, sizes) in sizes.iter().enumerate() {
            let _ = writeln!(out, "  subgraph level{n} {{\n    rank=same;");
            for &c in &self.centers[n] {
                let word = self.group.format(self.window.get(c));
                let word = if word.is_empty() {
                    "1".to_string()
                } else {
                    word
                };
                let _ = writeln!(
                    out,
                    "    \"{n}:{c}\" [label=\"{word}\\n|C|={}{}\"];",
                    sizes[&c],
                    if self.is_interior(n, c) { "" } else { " ext" }
                );
            }
            out.push_str("  }\n");
        }
        for n in 0..self.levels() {
            for &g in &self.centers[n] {
                let p = self.parent[n][g].unwrap();
                let _ = writeln!(out, "  \"{n}:{g}\" -> \"{}:{p}\";", n + 1);
            }
        }
        out.push_str("}\n");
        out
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SandwichReport {
    pub checked: usize,
    pub failures: Vec<String>,
}

impl SandwichReport {
    pub fn holds(&self) -> bool {
        self.failures.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelRecord {
    pub centers: Vec<String>,
    /// `(g, p_n(g))` for every `g` of the level below.
    pub parents: Vec<(String, String)>,
    pub edges: Vec<(String, String)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ForestRecord {
    pub group: String,
    pub radius: u32,
    pub levels: Vec<LevelRecord>,
}

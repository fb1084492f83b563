//! Odd paths and square-free vertex colorings of Cayley graphs.
//!
//! A path `v_1 … v_{2n}` is a vertex-square under a coloring `x` when
//! `x(v_i) = x(v_{i+n})` for `1 ≤ i ≤ n`. A coloring is square-free up to
//! `L` when no path with at most `2L` vertices is a vertex-square.

use num_bigint::BigInt;
use num_traits::One;

use crate::error::{Error, Result};
use crate::exact::Rational;
use crate::graph::Graph;
use crate::group::{Ball, GroupModel};
use crate::lll::{LLLInstance, Predicate, Variable, Weight};
use crate::shift::Symbol;

/// Default bound on the number of paths collected into an instance.
pub const DEFAULT_PATH_BUDGET: usize = 5_000_000;

/// A Cayley ball with its induced graph.
#[derive(Clone, Debug)]
pub struct PathWindow {
    group: GroupModel,
    ball: Ball,
    graph: Graph,
}

impl PathWindow {
    pub fn new(group: &GroupModel, radius: u32) -> Result<Self> {
        let ball = group.identity_ball(radius)?;
        let graph = Graph::from_adjacency(ball.adjacency(group));
        Ok(PathWindow {
            group: group.clone(),
            ball,
            graph,
        })
    }

    pub fn group(&self) -> &GroupModel {
        &self.group
    }

    pub fn ball(&self) -> &Ball {
        &self.ball
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }
}

/// Simple paths with an even number of vertices (odd edge length), each
/// reported once, oriented so that the first vertex is smaller than the last.
///
/// Paths come out grouped by first vertex, in depth-first order.
pub struct OddPaths<'g> {
    graph: &'g Graph,
    max_vertices: usize,
    next_start: usize,
    path: Vec<usize>,
    cursors: Vec<usize>,
    on_path: Vec<bool>,
}

impl<'g> OddPaths<'g> {
    /// Paths of edge length `2n − 1` for `1 ≤ n ≤ max_half`.
    pub fn new(graph: &'g Graph, max_half: usize) -> Self {
        OddPaths {
            graph,
            max_vertices: 2 * max_half,
            next_start: 0,
            path: Vec::new(),
            cursors: Vec::new(),
            on_path: vec![false; graph.len()],
        }
    }
}

impl Iterator for OddPaths<'_> {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        loop {
            let Some(&top) = self.path.last() else {
                if self.next_start >= self.graph.len() || self.max_vertices < 2 {
                    return None;
                }
                let s = self.next_start;
                self.next_start += 1;
                self.path.push(s);
                self.cursors.push(0);
                self.on_path[s] = true;
                continue;
            };
            let cursor = self.cursors.last_mut().unwrap();
            let nbrs = self.graph.neighbors(top);
            if self.path.len() < self.max_vertices && *cursor < nbrs.len() {
                let v = nbrs[*cursor];
                *cursor += 1;
                if self.on_path[v] {
                    continue;
                }
                self.path.push(v);
                self.cursors.push(0);
                self.on_path[v] = true;
                if self.path.len().is_multiple_of(2) && self.path[0] < v {
                    return Some(self.path.clone());
                }
            } else {
                self.on_path[top] = false;
                self.path.pop();
                self.cursors.pop();
            }
        }
    }
}

/// Collects [`OddPaths`], failing once more than `budget` paths exist.
pub fn enumerate_odd_paths(
    graph: &Graph,
    max_half: usize,
    budget: usize,
) -> Result<Vec<Vec<usize>>> {
    let mut out = Vec::new();
    for p in OddPaths::new(graph, max_half) {
        if out.len() == budget {
            return Err(Error::resource(
                format!("odd path enumeration (more than {} paths found)", out.len()),
                budget,
            ));
        }
        out.push(p);
    }
    Ok(out)
}

pub fn is_vertex_square(coloring: &[Symbol], path: &[usize]) -> bool {
    let n = path.len() / 2;
    path.len().is_multiple_of(2) && (0..n).all(|i| coloring[path[i]] == coloring[path[i + n]])
}

/// The first enumerated vertex-square path with at most `2L` vertices.
pub fn find_vertex_square(
    coloring: &[Symbol],
    graph: &Graph,
    max_half: usize,
) -> Option<Vec<usize>> {
    OddPaths::new(graph, max_half).find(|p| is_vertex_square(coloring, p))
}

/// Whether `alphabet ≥ 2^19·|S|²`, the size for which the local lemma
/// guarantees square-free colorings of the whole Cayley graph.
pub fn alphabet_is_sufficient(alphabet: u64, generators: usize) -> bool {
    BigInt::from(alphabet) >= crate::lll::squarefree_alphabet_bound(generators as u64)
}

/// One event per odd path of edge length `2n − 1`, `n ≤ L`:
/// `μ = |A|^{-n}`, `x = (8|S|²)^{-n}`.
pub fn build_squarefree_instance(
    w: &PathWindow,
    alphabet: u32,
    max_half: usize,
    budget: usize,
) -> Result<LLLInstance> {
    if alphabet < 2 {
        return Err(Error::Malformed(
            "square-free colorings need at least two colors".into(),
        ));
    }
    let s = w.group.num_generators() as i64;
    let base = BigInt::from(8 * s * s);
    let a = BigInt::from(alphabet);
    let variables = w
        .ball
        .members()
        .iter()
        .map(|g| Variable {
            label: w.group.format(g),
            alphabet,
        })
        .collect();
    let mut inst = LLLInstance::new(variables);
    for path in enumerate_odd_paths(&w.graph, max_half, budget)? {
        let n = path.len() / 2;
        let pairs: Vec<(usize, usize)> = (0..n).map(|i| (path[i], path[i + n])).collect();
        let label = path
            .iter()
            .map(|&v| w.group.format(w.ball.get(v)))
            .collect::<Vec<_>>()
            .join("-");
        inst.push_event(
            format!("path {label}"),
            n,
            path,
            Rational::new(BigInt::one(), a.pow(n as u32)),
            Weight::Rational(Rational::new(BigInt::one(), base.pow(n as u32))),
            Predicate::PairsEqual(pairs),
        )?;
    }
    Ok(inst)
}

/// First event breaking `|Γ(A_p) ∩ 𝒜_j| ≤ 4nj(2|S|)^{2j}`, as `(id, n, j, count)`.
pub fn squarefree_dependency_excess(
    inst: &LLLInstance,
    generators: usize,
) -> Option<(usize, usize, usize, usize)> {
    let events = inst.events();
    super::tsets::dependency_counts_by_level(inst)
        .iter()
        .enumerate()
        .flat_map(|(id, counts)| {
            let n = events[id].level;
            counts.iter().map(move |(&j, &count)| (id, n, j, count))
        })
        .find(|&(_, n, j, count)| {
            let bound = BigInt::from(4 * n * j) * BigInt::from(2 * generators).pow(2 * j as u32);
            BigInt::from(count) > bound
        })
}

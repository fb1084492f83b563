//! Paths that witness non-square-freeness of periodic colorings.
//!
//! If `x` is fixed by a nontrivial `g`, conjugate `g` to a shortest
//! `w = u⁻¹gu` and walk `1, w_1, w_1w_2, …, w, ww_1, …` — the `2|w|`
//! vertices form a simple path, and its translate by `u` is a vertex-square
//! in `x`.

use std::collections::HashSet;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{inverse_word, Element, GroupModel, Word};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WitnessPath {
    /// Conjugator `u`.
    pub conjugator: Word,
    /// Geodesic word for `w = u⁻¹gu`.
    pub core: Word,
    /// `v_0, …, v_{2n-1}`.
    pub vertices: Vec<Element>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witness {
    /// `g = 1_G`: every configuration is fixed, nothing to witness.
    Trivial,
    Path(WitnessPath),
}

impl WitnessPath {
    /// The path `u·v_0, …, u·v_{2n-1}`, a vertex-square for any coloring
    /// fixed by `g`.
    pub fn translated(&self, group: &GroupModel) -> Vec<Element> {
        let u = group.evaluate(&self.conjugator);
        self.vertices
            .iter()
            .map(|v| group.multiply(&u, v))
            .collect()
    }

    pub fn to_record(&self, group: &GroupModel) -> WitnessRecord {
        WitnessRecord {
            group: group.spec(),
            conjugator: group.format_word(&self.conjugator),
            core: group.format_word(&self.core),
            vertices: self.vertices.iter().map(|v| group.format(v)).collect(),
        }
    }

    pub fn to_dot(&self, group: &GroupModel) -> String {
        let mut out = String::from("graph witness {\n");
        for (i, v) in self.vertices.iter().enumerate() {
            let _ = writeln!(out, "  v{i} [label=\"{}\"];", dot_label(&group.format(v)));
        }
        for (i, letter) in self
            .core
            .iter()
            .chain(self.core.iter().take(self.core.len() - 1))
            .enumerate()
        {
            let _ = writeln!(
                out,
                "  v{i} -- v{} [label=\"{}\"];",
                i + 1,
                dot_label(&group.format_word(&[*letter]))
            );
        }
        out.push_str("}\n");
        out
    }
}

fn dot_label(s: &str) -> String {
    if s.is_empty() {
        "1".into()
    } else {
        s.replace('"', "\\\"")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessRecord {
    pub group: String,
    pub conjugator: String,
    pub core: String,
    pub vertices: Vec<String>,
}

/// Searches conjugators `u` in `B(1, |word|)` for the shortest `u⁻¹gu`,
/// ties broken by ball order, and builds the walk.
///
/// The search radius covers every factorisation `g = uwu⁻¹` with
/// `2|u| + |w| ≤ 2|word| + 2`. Fails with [`Error::Inconclusive`] if the
/// conjugator ball is too large or the walk is not simple.
pub fn witness_path(group: &GroupModel, word: &str) -> Result<Witness> {
    let letters = group.parse_word(word)?;
    let g = group.evaluate(&letters);
    if g.is_identity() {
        return Ok(Witness::Trivial);
    }
    let bound = 2 * letters.len() as u32 + 2;
    let ball = group
        .identity_ball(letters.len() as u32)
        .map_err(|e| match e {
            Error::Resource { what, limit } => {
                Error::Inconclusive(format!("conjugator search exceeded {what} limit {limit}"))
            }
            other => other,
        })?;
    let mut best: Option<(u32, usize)> = None;
    for (i, u) in ball.members().iter().enumerate() {
        let du = ball.depth(i);
        let h = group.multiply(&group.inverse(u), &group.multiply(&g, u));
        let len = group.length(&h)?;
        if 2 * du + len > bound {
            continue;
        }
        if best.is_none_or(|(l, _)| len < l) {
            best = Some((len, i));
        }
    }
    let (_, i) = best.expect("u = 1 always qualifies");
    let u = ball.get(i);
    let conjugator = group.geodesic_word(u)?;
    let h = group.multiply(&group.inverse(u), &group.multiply(&g, u));
    let core = group.geodesic_word(&h)?;

    let mut vertices = Vec::with_capacity(2 * core.len());
    let mut v = group.identity();
    vertices.push(v.clone());
    for &l in &core {
        group.push_letter(&mut v, l);
        vertices.push(v.clone());
    }
    for &l in &core[..core.len() - 1] {
        group.push_letter(&mut v, l);
        vertices.push(v.clone());
    }
    let distinct: HashSet<&Element> = vertices.iter().collect();
    if distinct.len() != vertices.len() {
        return Err(Error::Inconclusive(format!(
            "walk along {} revisits a vertex",
            group.format_word(&core)
        )));
    }
    debug_assert_eq!(group.evaluate(&inverse_word(&conjugator)), group.inverse(u));
    Ok(Witness::Path(WitnessPath {
        conjugator,
        core,
        vertices,
    }))
}

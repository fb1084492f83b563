//! Distinct-neighbourhood 2-colorings.
//!
//! For an enumeration `s_1, s_2, …` of the non-identity elements, pick sets
//! `T_i` with `|T_i| = C·i` and `T_i ∩ s_i T_i = ∅`. The bad event `A_{n,g}`
//! says the restrictions of a coloring to `gT_n` and `gs_nT_n` agree; a
//! coloring avoiding every such event distinguishes each shift from the
//! identity.

use std::collections::{BTreeMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::dyadic;
use crate::group::{Ball, Element, GroupModel};
use crate::lll::{LLLInstance, Predicate, Variable, Weight};
use crate::shift::WindowConfig;

/// One level of a T-set family: the shift `s_i` and the set `T_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TSet {
    pub shift: Element,
    /// Members in admission order.
    pub members: Vec<Element>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TSets {
    constant: u32,
    levels: Vec<TSet>,
}

impl TSets {
    pub fn constant(&self) -> u32 {
        self.constant
    }

    /// Highest level `i` present.
    pub fn max_level(&self) -> usize {
        self.levels.len()
    }

    /// Level `i ≥ 1`.
    pub fn level(&self, i: usize) -> Option<&TSet> {
        i.checked_sub(1).and_then(|k| self.levels.get(k))
    }

    /// Checks `|T_i| = C·i` and `T_i ∩ s_iT_i = ∅` for every level.
    pub fn check(&self, group: &GroupModel) -> Result<()> {
        for (k, t) in self.levels.iter().enumerate() {
            let i = k + 1;
            let set: HashSet<&Element> = t.members.iter().collect();
            if set.len() != t.members.len() || set.len() != self.constant as usize * i {
                return Err(Error::Malformed(format!(
                    "T_{i} has {} distinct members",
                    set.len()
                )));
            }
            if t.members
                .iter()
                .any(|m| set.contains(&group.multiply(&t.shift, m)))
            {
                return Err(Error::Malformed(format!("T_{i} meets s_{i}T_{i}")));
            }
        }
        Ok(())
    }

    /// Largest word length of a member of `T_i ∪ s_iT_i`, per level.
    pub fn radii(&self, group: &GroupModel) -> Result<Vec<u32>> {
        self.levels
            .iter()
            .map(|t| {
                let mut r = 0;
                for m in &t.members {
                    r = r
                        .max(group.length(m)?)
                        .max(group.length(&group.multiply(&t.shift, m))?);
                }
                Ok(r)
            })
            .collect()
    }
}

/// Greedy T-sets along the breadth-first enumeration.
///
/// `s_i` is the `i`-th element of the enumeration (`s_0 = 1_G` is skipped).
/// `T_i` scans the same enumeration and admits `t` when `t ∉ s_iT_i` and
/// `s_it ∉ T_i`, until it holds `C·i` elements.
pub fn build_t_sets(group: &GroupModel, constant: u32, max_level: usize) -> Result<TSets> {
    let mut layers = group.layers(group.identity());
    let mut order: Vec<Element> = layers.current().to_vec();
    let mut grow = |order: &mut Vec<Element>, needed: usize, level: usize| -> Result<()> {
        while order.len() <= needed {
            layers.advance().map_err(|e| match e {
                Error::Resource { limit, .. } => Error::resource(
                    format!("enumeration exhausted while building T_{level}"),
                    limit,
                ),
                other => other,
            })?;
            order.extend(layers.current().iter().cloned());
        }
        Ok(())
    };

    let mut levels = Vec::with_capacity(max_level);
    for i in 1..=max_level {
        grow(&mut order, i, i)?;
        let shift = order[i].clone();
        let target = constant as usize * i;
        let mut members: Vec<Element> = Vec::with_capacity(target);
        let mut member_set: HashSet<Element> = HashSet::new();
        let mut shifted: HashSet<Element> = HashSet::new();
        let mut pos = 0;
        while members.len() < target {
            grow(&mut order, pos, i)?;
            let t = &order[pos];
            pos += 1;
            let st = group.multiply(&shift, t);
            if shifted.contains(t) || member_set.contains(&st) {
                continue;
            }
            members.push(t.clone());
            member_set.insert(t.clone());
            shifted.insert(st);
        }
        levels.push(TSet { shift, members });
    }
    Ok(TSets { constant, levels })
}

/// The truncated 2-coloring event family on a window.
#[derive(Clone, Debug)]
pub struct TwoColoringInstance {
    pub window: Ball,
    pub instance: LLLInstance,
    /// `(n, g)` for every event, indexed by event id.
    pub anchors: Vec<(usize, Element)>,
}

/// Pairs `(gt, gs_nt)` for `t ∈ T_n`, as window indices, if both translates fit.
fn translate_pairs(
    group: &GroupModel,
    window: &Ball,
    t: &TSet,
    g: &Element,
) -> Option<Vec<(usize, usize)>> {
    t.members
        .iter()
        .map(|m| {
            let a = window.index_of(&group.multiply(g, m))?;
            let b = window.index_of(&group.multiply(g, &group.multiply(&t.shift, m)))?;
            Some((a, b))
        })
        .collect()
}

/// One binary variable per element of `B(1_G, R)` and one event `A_{n,g}`
/// per `n ≤ n_max` and `g` with `gT_n ∪ gs_nT_n` inside the window.
///
/// `μ(A_{n,g}) = 2^{-Cn}` and `x(A_{n,g}) = 2^{-Cn/2}`.
pub fn build_2coloring_instance(
    group: &GroupModel,
    radius: u32,
    tsets: &TSets,
    n_max: usize,
) -> Result<TwoColoringInstance> {
    if n_max > tsets.max_level() {
        return Err(Error::Malformed(format!(
            "{n_max} levels requested but only {} T-sets built",
            tsets.max_level()
        )));
    }
    let window = group.identity_ball(radius)?;
    let variables = window
        .members()
        .iter()
        .map(|g| Variable {
            label: group.format(g),
            alphabet: 2,
        })
        .collect();
    let mut instance = LLLInstance::new(variables);
    let mut anchors = Vec::new();
    let c = tsets.constant();
    for n in 1..=n_max {
        let t = tsets.level(n).expect("level checked above");
        let exponent = c * n as u32;
        for g in window.members() {
            let Some(pairs) = translate_pairs(group, &window, t, g) else {
                continue;
            };
            let support: Vec<usize> = pairs.iter().flat_map(|&(a, b)| [a, b]).collect();
            instance.push_event(
                format!("n={n} g={}", group.format(g)),
                n,
                support,
                dyadic(exponent),
                Weight::DyadicRoot(exponent),
                Predicate::PairsEqual(pairs),
            )?;
            anchors.push((n, g.clone()));
        }
    }
    Ok(TwoColoringInstance {
        window,
        instance,
        anchors,
    })
}

/// For each event, the number of dependent events per level.
pub fn dependency_counts_by_level(instance: &LLLInstance) -> Vec<BTreeMap<usize, usize>> {
    let events = instance.events();
    instance
        .dependency_graph()
        .iter()
        .map(|nbrs| {
            let mut counts = BTreeMap::new();
            for &f in nbrs {
                *counts.entry(events[f].level).or_insert(0) += 1;
            }
            counts
        })
        .collect()
}

/// First event breaking `|Γ(A_{n,g}) ∩ 𝒜_m| ≤ 4C²nm`, as `(id, n, m, count)`.
pub fn two_coloring_dependency_excess(
    instance: &LLLInstance,
    constant: u32,
) -> Option<(usize, usize, usize, usize)> {
    let c = constant as usize;
    let events = instance.events();
    dependency_counts_by_level(instance)
        .iter()
        .enumerate()
        .flat_map(|(id, counts)| {
            let n = events[id].level;
            counts.iter().map(move |(&m, &count)| (id, n, m, count))
        })
        .find(|&(_, n, m, count)| count > 4 * c * c * n * m)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DistinctReport {
    /// Number of `(n, g)` whose translates fit the window.
    pub checked: usize,
    /// `(n, g)` with `x|_{gT_n} = x|_{gs_nT_n}`, `g` as a canonical word.
    pub violations: Vec<(usize, String)>,
}

impl DistinctReport {
    pub fn nothing_checked(&self) -> bool {
        self.checked == 0
    }
}

/// Exhaustive check of the distinct-neighbourhood condition up to level `n_max`.
pub fn verify_distinct_neighborhood(
    x: &WindowConfig,
    tsets: &TSets,
    n_max: usize,
) -> DistinctReport {
    let group = x.group();
    let window = x.ball();
    let symbols = x.symbols();
    let mut report = DistinctReport {
        checked: 0,
        violations: Vec::new(),
    };
    for n in 1..=n_max.min(tsets.max_level()) {
        let t = tsets.level(n).unwrap();
        for g in window.members() {
            let Some(pairs) = translate_pairs(group, window, t, g) else {
                continue;
            };
            report.checked += 1;
            if pairs.iter().all(|&(a, b)| symbols[a] == symbols[b]) {
                report.violations.push((n, group.format(g)));
            }
        }
    }
    report
}

/// Distinct-neighbourhood coloring: builds the instance, resamples, and
/// returns the resulting window together with the resample trace.
pub fn sample_two_coloring(
    group: &GroupModel,
    radius: u32,
    tsets: &TSets,
    n_max: usize,
    seed: u64,
    cap: usize,
) -> Result<(WindowConfig, TwoColoringInstance, Vec<usize>)> {
    let inst = build_2coloring_instance(group, radius, tsets, n_max)?;
    let run = crate::lll::resample(&inst.instance, seed, cap)?;
    let config = WindowConfig::new(group.clone(), inst.window.clone(), 2, run.assignment)?;
    Ok((config, inst, run.trace))
}

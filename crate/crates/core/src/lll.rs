//! The asymmetric Lovász local lemma on finite event families.
//!
//! [`verify_condition`] evaluates `μ(A) ≤ x(A)·∏_{B∈Γ(A)}(1−x(B))` exactly,
//! where `Γ(A)` is every other event sharing a variable with `A`.
//! [`resample`] is the constructive counterpart: resample the variables of a
//! violated event until no event is violated.

use std::collections::{BTreeSet, HashMap};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{self, format_rational, parse_rational, Rational, RootTwo, RootTwoRecord};
use crate::shift::Symbol;

/// Default bound on the number of resampling steps.
pub const DEFAULT_RESAMPLE_CAP: usize = 1_000_000;

/// Audits of event probabilities run when the support has at most this many
/// bits of assignments.
pub const AUDIT_BITS: u32 = 24;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Variable {
    pub label: String,
    pub alphabet: u32,
}

/// The weight `x(A)` of an event.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Weight {
    #[serde(with = "rational_text")]
    Rational(Rational),
    /// `2^{-k/2}`, stored by `k`.
    DyadicRoot(u32),
}

impl Weight {
    pub fn value(&self) -> RootTwo {
        match self {
            Weight::Rational(r) => RootTwo::from_rational(r.clone()),
            Weight::DyadicRoot(k) => RootTwo::dyadic_root(*k),
        }
    }

    fn in_open_unit_interval(&self) -> bool {
        match self {
            Weight::Rational(r) => *r > Rational::zero() && *r < Rational::one(),
            Weight::DyadicRoot(k) => *k > 0,
        }
    }

    pub fn describe(&self) -> String {
        match self {
            Weight::Rational(r) => format_rational(r),
            Weight::DyadicRoot(k) if k % 2 == 0 => format!("2^-{}", k / 2),
            Weight::DyadicRoot(k) => format!("2^-{k}/2"),
        }
    }
}

/// When an event is violated, given the symbols on its support.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Predicate {
    /// Every listed pair of variables carries equal symbols.
    PairsEqual(Vec<(usize, usize)>),
    /// The support, read in order, spells one of the listed tuples.
    Forbidden(Vec<Vec<Symbol>>),
}

impl Predicate {
    pub fn violated(&self, support: &[usize], value: impl Fn(usize) -> Symbol) -> bool {
        match self {
            Predicate::PairsEqual(pairs) => pairs.iter().all(|&(a, b)| value(a) == value(b)),
            Predicate::Forbidden(tuples) => tuples.iter().any(|t| {
                t.len() == support.len() && support.iter().zip(t).all(|(&v, &s)| value(v) == s)
            }),
        }
    }

    fn variables(&self) -> Vec<usize> {
        match self {
            Predicate::PairsEqual(pairs) => pairs.iter().flat_map(|&(a, b)| [a, b]).collect(),
            Predicate::Forbidden(_) => Vec::new(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BadEvent {
    pub id: usize,
    pub label: String,
    /// Family index (`n` of `A_{n,g}`, or the half-length of a path).
    pub level: usize,
    /// Sorted variable indices.
    pub support: Vec<usize>,
    pub probability: Rational,
    pub weight: Weight,
    pub predicate: Predicate,
}

impl BadEvent {
    pub fn violated_by(&self, assignment: &[Symbol]) -> bool {
        self.predicate.violated(&self.support, |v| assignment[v])
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LLLInstance {
    variables: Vec<Variable>,
    events: Vec<BadEvent>,
}

impl LLLInstance {
    pub fn new(variables: Vec<Variable>) -> Self {
        LLLInstance {
            variables,
            events: Vec::new(),
        }
    }

    /// Adds an event and returns its id. Ids increase in insertion order.
    pub fn push_event(
        &mut self,
        label: impl Into<String>,
        level: usize,
        support: impl IntoIterator<Item = usize>,
        probability: Rational,
        weight: Weight,
        predicate: Predicate,
    ) -> Result<usize> {
        let mut support: Vec<usize> = support.into_iter().collect();
        support.sort_unstable();
        support.dedup();
        let id = self.events.len();
        if let Some(&v) = support.iter().find(|&&v| v >= self.variables.len()) {
            return Err(Error::Malformed(format!(
                "event {id} uses unknown variable {v}"
            )));
        }
        if predicate
            .variables()
            .iter()
            .any(|v| support.binary_search(v).is_err())
        {
            return Err(Error::Malformed(format!(
                "event {id} predicate reads outside its support"
            )));
        }
        self.events.push(BadEvent {
            id,
            label: label.into(),
            level,
            support,
            probability,
            weight,
            predicate,
        });
        Ok(id)
    }

    pub fn variables(&self) -> &[Variable] {
        &self.variables
    }

    pub fn events(&self) -> &[BadEvent] {
        &self.events
    }

    /// Events incident to each variable.
    pub fn events_by_variable(&self) -> Vec<Vec<usize>> {
        let mut by_var = vec![Vec::new(); self.variables.len()];
        for e in &self.events {
            for &v in &e.support {
                by_var[v].push(e.id);
            }
        }
        by_var
    }

    /// `Γ(A)` for every event: the other events sharing at least one variable.
    pub fn dependency_graph(&self) -> Vec<Vec<usize>> {
        let by_var = self.events_by_variable();
        let mut stamp = vec![usize::MAX; self.events.len()];
        self.events
            .iter()
            .map(|e| {
                stamp[e.id] = e.id;
                let mut nbrs = Vec::new();
                for &v in &e.support {
                    for &f in &by_var[v] {
                        if stamp[f] != e.id {
                            stamp[f] = e.id;
                            nbrs.push(f);
                        }
                    }
                }
                nbrs.sort_unstable();
                nbrs
            })
            .collect()
    }

    /// Exact probability of an event under the uniform measure, by
    /// enumerating every assignment of its support. `None` when the support
    /// carries more than [`AUDIT_BITS`] bits.
    pub fn audit_probability(&self, event: &BadEvent) -> Option<Rational> {
        let sizes: Vec<u64> = event
            .support
            .iter()
            .map(|&v| self.variables[v].alphabet as u64)
            .collect();
        let total = sizes.iter().try_fold(1u64, |acc, &s| acc.checked_mul(s))?;
        if total > 1 << AUDIT_BITS {
            return None;
        }
        let mut local = vec![0 as Symbol; self.variables.len()];
        let mut hits = 0u64;
        for mut code in 0..total {
            for (&v, &s) in event.support.iter().zip(&sizes) {
                local[v] = (code % s) as Symbol;
                code /= s;
            }
            if event.violated_by(&local) {
                hits += 1;
            }
        }
        Some(Rational::new(BigInt::from(hits), BigInt::from(total)))
    }

    pub fn to_record(&self) -> InstanceRecord {
        InstanceRecord {
            variables: self.variables.clone(),
            events: self
                .events
                .iter()
                .map(|e| EventRecord {
                    id: e.id,
                    label: e.label.clone(),
                    level: e.level,
                    support: e.support.clone(),
                    probability: format_rational(&e.probability),
                    weight: e.weight.clone(),
                    predicate: e.predicate.clone(),
                })
                .collect(),
        }
    }

    pub fn from_record(record: &InstanceRecord) -> Result<Self> {
        let mut inst = LLLInstance::new(record.variables.clone());
        for (i, e) in record.events.iter().enumerate() {
            if e.id != i {
                return Err(Error::Malformed(format!(
                    "event ids must be 0..n in order, found {} at {i}",
                    e.id
                )));
            }
            let probability = parse_rational(&e.probability)
                .ok_or_else(|| Error::Malformed(format!("bad probability `{}`", e.probability)))?;
            inst.push_event(
                e.label.clone(),
                e.level,
                e.support.clone(),
                probability,
                e.weight.clone(),
                e.predicate.clone(),
            )?;
        }
        Ok(inst)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceRecord {
    pub variables: Vec<Variable>,
    pub events: Vec<EventRecord>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EventRecord {
    pub id: usize,
    pub label: String,
    pub level: usize,
    pub support: Vec<usize>,
    pub probability: String,
    pub weight: Weight,
    pub predicate: Predicate,
}

#[derive(Clone, Debug, PartialEq)]
pub struct EventMargin {
    pub id: usize,
    pub probability: Rational,
    pub weight: Weight,
    pub dependencies: usize,
    /// `x(A)·∏_{B∈Γ(A)}(1−x(B))`.
    pub bound: RootTwo,
    /// `bound − μ(A)`.
    pub margin: RootTwo,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Verdict {
    pub holds: bool,
    pub margins: Vec<EventMargin>,
}

impl Verdict {
    pub fn failing(&self) -> impl Iterator<Item = &EventMargin> {
        self.margins.iter().filter(|m| m.margin.signum().is_lt())
    }

    pub fn to_record(&self) -> VerdictRecord {
        VerdictRecord {
            holds: self.holds,
            events: self
                .margins
                .iter()
                .map(|m| MarginRecord {
                    id: m.id,
                    probability: format_rational(&m.probability),
                    weight: m.weight.describe(),
                    dependencies: m.dependencies,
                    margin: RootTwoRecord::from(&m.margin),
                })
                .collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerdictRecord {
    pub holds: bool,
    pub events: Vec<MarginRecord>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MarginRecord {
    pub id: usize,
    pub probability: String,
    pub weight: String,
    pub dependencies: usize,
    pub margin: RootTwoRecord,
}

/// Evaluates the local lemma condition for every event, exactly.
pub fn verify_condition(inst: &LLLInstance) -> Result<Verdict> {
    // Weights are grouped into classes so each product is a handful of powers.
    let mut classes: HashMap<&Weight, usize> = HashMap::new();
    let mut factors: Vec<RootTwo> = Vec::new();
    let mut class_of = Vec::with_capacity(inst.events.len());
    for e in &inst.events {
        if !e.weight.in_open_unit_interval() {
            return Err(Error::InvalidWeight {
                id: e.id,
                weight: e.weight.describe(),
            });
        }
        let next = classes.len();
        let c = *classes.entry(&e.weight).or_insert_with(|| {
            factors.push(&RootTwo::one() - &e.weight.value());
            next
        });
        class_of.push(c);
    }

    let graph = inst.dependency_graph();
    let mut cache: HashMap<Vec<u64>, RootTwo> = HashMap::new();
    let mut margins = Vec::with_capacity(inst.events.len());
    let mut holds = true;
    for e in &inst.events {
        let mut counts = vec![0u64; factors.len()];
        for &f in &graph[e.id] {
            counts[class_of[f]] += 1;
        }
        let product = cache
            .entry(counts)
            .or_insert_with_key(|counts| {
                counts
                    .iter()
                    .zip(&factors)
                    .filter(|(&n, _)| n > 0)
                    .fold(RootTwo::one(), |acc, (&n, f)| &acc * &f.pow(n))
            })
            .clone();
        let bound = &e.weight.value() * &product;
        let margin = &bound - &RootTwo::from_rational(e.probability.clone());
        holds &= !margin.signum().is_lt();
        margins.push(EventMargin {
            id: e.id,
            probability: e.probability.clone(),
            weight: e.weight.clone(),
            dependencies: graph[e.id].len(),
            bound,
            margin,
        });
    }
    Ok(Verdict { holds, margins })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Resampling {
    pub assignment: Vec<Symbol>,
    /// Ids of the resampled events, in order.
    pub trace: Vec<usize>,
}

/// Samples every variable uniformly, then repeatedly resamples the support
/// of the violated event with the least id until no event is violated.
///
/// Deterministic for a given seed. Fails once more than `cap` resamples
/// would be needed.
pub fn resample(inst: &LLLInstance, seed: u64, cap: usize) -> Result<Resampling> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut assignment: Vec<Symbol> = inst
        .variables
        .iter()
        .map(|v| rng.random_range(0..v.alphabet))
        .collect();
    let by_var = inst.events_by_variable();
    let mut violated: BTreeSet<usize> = inst
        .events
        .iter()
        .filter(|e| e.violated_by(&assignment))
        .map(|e| e.id)
        .collect();
    let mut trace = Vec::new();
    while let Some(&id) = violated.first() {
        if trace.len() == cap {
            return Err(Error::NonTerminating { cap, log: trace });
        }
        trace.push(id);
        let event = &inst.events[id];
        for &v in &event.support {
            assignment[v] = rng.random_range(0..inst.variables[v].alphabet);
        }
        for &v in &event.support {
            for &f in &by_var[v] {
                if inst.events[f].violated_by(&assignment) {
                    violated.insert(f);
                } else {
                    violated.remove(&f);
                }
            }
        }
    }
    Ok(Resampling { assignment, trace })
}

/// Whether `16C·2^{C/2}/(2^{C/2}−1)² ≤ 1`, decided exactly.
///
/// With `s = 2^{C/2}` the inequality is `s² + 1 ≥ (2 + 16C)·s`; both sides
/// are positive, so it is equivalent to `(2^C + 1)² ≥ (2 + 16C)²·2^C`, which
/// involves integers only.
pub fn aperiodic_constant_holds(c: u32) -> bool {
    let two_c = BigInt::one() << c as usize;
    let lhs = (&two_c + 1u32).pow(2);
    let rhs = BigInt::from(2 + 16 * c as u64).pow(2) * two_c;
    lhs >= rhs
}

/// Floating-point value of `16C·2^{C/2}/(2^{C/2}−1)²`, for reporting.
pub fn aperiodic_constant_value(c: u32) -> f64 {
    let s = 2f64.powf(c as f64 / 2.0);
    16.0 * c as f64 * s / ((s - 1.0) * (s - 1.0))
}

/// The least `C ≤ c_max` satisfying [`aperiodic_constant_holds`].
pub fn aperiodic_constant_scan(c_max: u32) -> Result<u32> {
    (1..=c_max)
        .find(|&c| aperiodic_constant_holds(c))
        .ok_or(Error::NotFound(c_max))
}

/// `Σ_{j≥1} j·2^{-j}`, from `Σ j·q^j = q/(1−q)²` at `q = 1/2`.
pub fn weighted_geometric_series() -> Rational {
    let q = exact::rational(1, 2);
    let one_minus = Rational::one() - &q;
    &q / (&one_minus * &one_minus)
}

/// Partial sum `Σ_{j=1}^{n} j·2^{-j}`.
pub fn weighted_geometric_partial_sum(n: u32) -> Rational {
    (1..=n).fold(Rational::zero(), |acc, j| {
        acc + Rational::from_integer(BigInt::from(j)) * exact::dyadic(j)
    })
}

/// Least alphabet size `8s²·2^{8·Σ j2^{-j}}` for square-free colorings with `s` generators.
pub fn squarefree_alphabet_bound(s: u64) -> BigInt {
    let series = weighted_geometric_series();
    let exponent = series * Rational::from_integer(BigInt::from(8));
    debug_assert!(exponent.is_integer());
    let exponent: usize = exponent.to_integer().try_into().unwrap_or(0);
    BigInt::from(8u64) * BigInt::from(s) * BigInt::from(s) * (BigInt::one() << exponent)
}

mod rational_text {
    use super::{format_rational, parse_rational, Rational};
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let text = String::deserialize(d)?;
        parse_rational(&text).ok_or_else(|| D::Error::custom(format!("bad rational `{text}`")))
    }
}

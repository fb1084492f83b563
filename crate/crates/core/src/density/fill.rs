//! Sturmian fillings of covering forests and density certificates.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::Signed;
use serde::{Deserialize, Serialize};

use super::forest::CoveringForest;
use super::slope::{sturmian, Slope};
use crate::error::{Error, Result};
use crate::exact::{format_rational, to_f64, Rational};
use crate::group::{Element, GroupModel};
use crate::shift::{ball_interior, ones_on, WindowConfig};

/// Leaves of the top-level component `component`, depth first with children
/// in canonical order. Every cluster below it occupies a contiguous block.
pub fn convex_enumeration(f: &CoveringForest, component: usize) -> Result<Vec<usize>> {
    let top = f.levels();
    if f.centers(top).binary_search(&component).is_err() {
        return Err(Error::Malformed(format!(
            "{} is not a level-{top} centre",
            f.group().format(f.window().get(component))
        )));
    }
    let mut out = Vec::new();
    let mut stack = vec![(top, component)];
    while let Some((n, g)) = stack.pop() {
        if n == 0 {
            out.push(g);
            continue;
        }
        for c in f.children(n, g).into_iter().rev() {
            stack.push((n - 1, c));
        }
    }
    Ok(out)
}

/// Whether every cluster at every level occupies a contiguous interval of `order`.
pub fn is_convex(f: &CoveringForest, order: &[usize]) -> bool {
    let mut pos = vec![usize::MAX; f.window().len()];
    for (i, &h) in order.iter().enumerate() {
        pos[h] = i;
    }
    (1..=f.levels()).all(|n| {
        f.clusters(n).values().all(|leaves| {
            let p: Vec<usize> = leaves
                .iter()
                .map(|&h| pos[h])
                .filter(|&p| p != usize::MAX)
                .collect();
            if p.is_empty() {
                return true;
            }
            let (lo, hi) = (p.iter().min().unwrap(), p.iter().max().unwrap());
            // Either the whole cluster is in `order` as one block, or none of it is.
            p.len() == leaves.len() && hi - lo + 1 == p.len()
        })
    })
}

/// Lays the Sturmian word of slope `alpha` along the convex enumeration of
/// each top-level component in canonical order, restarting at `k = 0` for
/// every component.
pub fn fill_density(f: &CoveringForest, alpha: &Slope) -> Result<WindowConfig> {
    let mut symbols = vec![0u32; f.window().len()];
    if alpha.is_constant() {
        symbols.fill(alpha.numer().min(1) as u32);
    } else {
        for &c in f.centers(f.levels()) {
            let order = convex_enumeration(f, c)?;
            let word = sturmian(alpha, 0..order.len() as u64);
            for (&h, &b) in order.iter().zip(&word) {
                symbols[h] = b as u32;
            }
        }
    }
    WindowConfig::new(f.group().clone(), f.window().clone(), 2, symbols)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClusterCheck {
    pub level: usize,
    pub center: String,
    pub size: usize,
    /// `⌊α|C|⌋`.
    pub floor: u64,
    pub ones: usize,
    pub pass: bool,
}

/// `|dens(1,U) − α| ≤ |V|/|U|` for `U` the union of the interior level-`n`
/// clusters and `V` their centres.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AggregateCheck {
    pub level: usize,
    pub centers: usize,
    pub size: usize,
    pub ones: usize,
    pub density: String,
    pub deviation: String,
    pub bound: String,
    pub deviation_approx: f64,
    pub bound_approx: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Condition1Report {
    pub alpha: String,
    pub clusters: Vec<ClusterCheck>,
    pub aggregates: Vec<AggregateCheck>,
}

impl Condition1Report {
    pub fn holds(&self) -> bool {
        self.clusters.iter().all(|c| c.pass) && self.aggregates.iter().all(|a| a.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &ClusterCheck> {
        self.clusters.iter().filter(|c| !c.pass)
    }
}

fn frac(n: usize, d: usize) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

fn same_window(x: &WindowConfig, f: &CoveringForest) -> Result<()> {
    if x.group().spec() != f.group().spec() || x.radius() != f.window().radius() {
        return Err(Error::WindowMismatch(format!(
            "configuration on {} radius {} but forest on {} radius {}",
            x.group().spec(),
            x.radius(),
            f.group().spec(),
            f.window().radius()
        )));
    }
    Ok(())
}

/// Checks `⌊α|C|⌋ ≤ ones(C) ≤ ⌊α|C|⌋ + 1` on every interior cluster at
/// every level, and the aggregate deviation bound per level.
pub fn verify_condition1(
    x: &WindowConfig,
    f: &CoveringForest,
    alpha: &Slope,
) -> Result<Condition1Report> {
    same_window(x, f)?;
    let symbols = x.symbols();
    let a = alpha.value();
    let mut report = Condition1Report {
        alpha: alpha.to_string(),
        clusters: Vec::new(),
        aggregates: Vec::new(),
    };
    for n in 1..=f.levels() {
        let (mut v, mut u, mut ones_u) = (0, 0, 0);
        for (c, leaves) in f.clusters(n) {
            if !f.is_interior(n, c) {
                continue;
            }
            let ones = leaves.iter().filter(|&&h| symbols[h] == 1).count();
            let floor = alpha.floor_mul(leaves.len() as u64);
            let pass = floor <= ones as u64 && ones as u64 <= floor + 1;
            report.clusters.push(ClusterCheck {
                level: n,
                center: f.group().format(f.window().get(c)),
                size: leaves.len(),
                floor,
                ones,
                pass,
            });
            v += 1;
            u += leaves.len();
            ones_u += ones;
        }
        if v == 0 {
            continue;
        }
        let density = frac(ones_u, u);
        let deviation = (&density - &a).abs();
        let bound = frac(v, u);
        report.aggregates.push(AggregateCheck {
            level: n,
            centers: v,
            size: u,
            ones: ones_u,
            density: format_rational(&density),
            deviation_approx: to_f64(&deviation),
            bound_approx: to_f64(&bound),
            pass: deviation <= bound,
            deviation: format_rational(&deviation),
            bound: format_rational(&bound),
        });
    }
    Ok(report)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "lowercase")]
pub enum ForbiddenVerdict {
    /// `2n|∂_{K_n}F| ≥ |F|`: the rule does not apply to `F`.
    Vacuous {
        boundary: usize,
        size: usize,
    },
    Allowed {
        deviation: String,
    },
    Forbidden {
        deviation: String,
    },
}

impl ForbiddenVerdict {
    pub fn is_forbidden(&self) -> bool {
        matches!(self, ForbiddenVerdict::Forbidden { .. })
    }
}

/// The finite rule behind the density subshift: if `2n|∂_{K_n}F| < |F|`
/// with `K_n = B(1_G, 5^n)`, the ones-density of `x` on `F` must be within
/// `1/n` of `α`.
pub fn forbidden_check(
    x: &WindowConfig,
    set: &BTreeSet<Element>,
    alpha: &Slope,
    n: u32,
) -> Result<ForbiddenVerdict> {
    if n == 0 {
        return Err(Error::Malformed(
            "forbidden-pattern level must be positive".into(),
        ));
    }
    let group = x.group();
    let ones =
        ones_on(x, set).ok_or_else(|| Error::WindowMismatch("set leaves the window".into()))?;
    if set.is_empty() {
        return Err(Error::EmptySupport);
    }
    let r = 5u32
        .checked_pow(n)
        .ok_or_else(|| Error::resource(format!("K_{n} = B(1, 5^{n})"), group.ball_cap()))?;
    // Only the size matters here, but building it enforces the ball cap.
    group.identity_ball(r)?;
    let boundary = set.len() - ball_interior(group, set, r).len();
    if 2 * n as usize * boundary >= set.len() {
        return Ok(ForbiddenVerdict::Vacuous {
            boundary,
            size: set.len(),
        });
    }
    let deviation = (frac(ones, set.len()) - alpha.value()).abs();
    let text = format_rational(&deviation);
    Ok(if deviation <= frac(1, n as usize) {
        ForbiddenVerdict::Allowed { deviation: text }
    } else {
        ForbiddenVerdict::Forbidden { deviation: text }
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DensityRow {
    pub set: String,
    pub size: usize,
    pub ones: usize,
    pub density: String,
    pub approx: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub deviation: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DensityReport {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<Slope>,
    pub rows: Vec<DensityRow>,
}

impl DensityReport {
    pub fn max_deviation(&self) -> Option<f64> {
        self.rows
            .iter()
            .filter_map(|r| r.deviation)
            .reduce(f64::max)
    }
}

/// `B(1_G, r)` for each `r`, labelled, as the default averaging sequence.
pub fn ball_sequence(
    group: &GroupModel,
    radii: impl IntoIterator<Item = u32>,
) -> Result<Vec<(String, BTreeSet<Element>)>> {
    radii
        .into_iter()
        .map(|r| {
            Ok((
                format!("B(1,{r})"),
                group.identity_ball(r)?.members().iter().cloned().collect(),
            ))
        })
        .collect()
}

/// Exact ones-density of `x` on each set; deviations from `alpha` when given.
pub fn measure_density(
    x: &WindowConfig,
    sets: &[(String, BTreeSet<Element>)],
    alpha: Option<&Slope>,
) -> Result<DensityReport> {
    let rows = sets
        .iter()
        .map(|(label, set)| {
            let ones = ones_on(x, set)
                .ok_or_else(|| Error::WindowMismatch(format!("{label} leaves the window")))?;
            if set.is_empty() {
                return Err(Error::EmptySupport);
            }
            let d = frac(ones, set.len());
            Ok(DensityRow {
                set: label.clone(),
                size: set.len(),
                ones,
                density: format_rational(&d),
                approx: to_f64(&d),
                deviation: alpha.map(|a| to_f64(&(&d - a.value()).abs())),
            })
        })
        .collect::<Result<_>>()?;
    Ok(DensityReport {
        alpha: alpha.cloned(),
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn integer_forest() -> CoveringForest {
        CoveringForest::build(&GroupModel::lattice(1).unwrap(), 10, 1).unwrap()
    }

    #[test]
    fn single_cluster_enumeration() {
        let f = integer_forest();
        let zero = f.window().index_of(&Element::Vector(vec![0])).unwrap();
        let order = convex_enumeration(&f, zero).unwrap();
        assert_eq!(order.len(), 3);
        assert!(is_convex(&f, &order));
        assert!(
            convex_enumeration(&f, f.window().index_of(&Element::Vector(vec![1])).unwrap())
                .is_err()
        );
        // a leaf with its own single-leaf cluster chain at level 0 is trivially convex
        let f0 = CoveringForest::build(&GroupModel::lattice(1).unwrap(), 0, 1).unwrap();
        assert_eq!(convex_enumeration(&f0, 0).unwrap(), vec![0]);
    }

    #[test]
    fn enumerations_are_convex() {
        for (g, r) in [
            (GroupModel::lattice(2).unwrap(), 15),
            (GroupModel::free(2).unwrap(), 4),
            (GroupModel::z2_z3(), 6),
        ] {
            let f = CoveringForest::build(&g, r, 2).unwrap();
            let mut all = Vec::new();
            for &c in f.centers(2) {
                let order = convex_enumeration(&f, c).unwrap();
                assert!(is_convex(&f, &order));
                all.extend(order);
            }
            assert!(is_convex(&f, &all));
            all.sort();
            assert_eq!(all, (0..f.window().len()).collect::<Vec<_>>());
        }
    }

    #[test]
    fn shuffled_order_is_not_convex() {
        let f = integer_forest();
        let mut order: Vec<usize> = f
            .centers(1)
            .iter()
            .flat_map(|&c| convex_enumeration(&f, c).unwrap())
            .collect();
        order.swap(1, 4);
        assert!(!is_convex(&f, &order));
    }

    #[test]
    fn constant_fills() {
        let f = integer_forest();
        let x = fill_density(&f, &Slope::new(0, 1).unwrap()).unwrap();
        assert!(x.symbols().iter().all(|&s| s == 0));
        let x = fill_density(&f, &Slope::new(1, 1).unwrap()).unwrap();
        assert!(x.symbols().iter().all(|&s| s == 1));
    }

    #[test]
    fn two_fifths_on_integers() {
        let f = integer_forest();
        let alpha = Slope::new(2, 5).unwrap();
        let x = fill_density(&f, &alpha).unwrap();
        let zero = f.window().index_of(&Element::Vector(vec![0])).unwrap();
        let ones = f
            .cluster(1, zero)
            .iter()
            .filter(|&&h| x.symbols()[h] == 1)
            .count();
        assert!((1..=2).contains(&ones));
        let report = verify_condition1(&x, &f, &alpha).unwrap();
        assert!(report.holds());
    }

    #[test]
    fn pipeline_on_planar_window() {
        let f = CoveringForest::build(&GroupModel::lattice(2).unwrap(), 14, 2).unwrap();
        let alpha: Slope = "377/610".parse().unwrap();
        let x = fill_density(&f, &alpha).unwrap();
        let report = verify_condition1(&x, &f, &alpha).unwrap();
        assert!(report.holds(), "{:?}", report.failures().next());
        let agg = report.aggregates.iter().find(|a| a.level == 2).unwrap();
        assert!(agg.bound_approx <= 1.0 / 13.0);
    }

    #[test]
    fn all_ones_fails_condition1() {
        let g = GroupModel::lattice(2).unwrap();
        let f = CoveringForest::build(&g, 8, 1).unwrap();
        let x = WindowConfig::constant(&g, 8, 2, 1).unwrap();
        let report = verify_condition1(&x, &f, &Slope::new(1, 2).unwrap()).unwrap();
        assert!(report.clusters.iter().all(|c| !c.pass));
        let other = WindowConfig::constant(&g, 7, 2, 1).unwrap();
        assert!(matches!(
            verify_condition1(&other, &f, &Slope::new(1, 2).unwrap()),
            Err(Error::WindowMismatch(_))
        ));
    }

    #[test]
    fn forbidden_rule() {
        let z = GroupModel::lattice(1).unwrap();
        let x = WindowConfig::constant(&z, 120, 2, 1).unwrap();
        let third = Slope::new(1, 3).unwrap();
        let big: BTreeSet<Element> = (-100..=100).map(|i| Element::Vector(vec![i])).collect();
        assert!(!forbidden_check(&x, &big, &third, 1).unwrap().is_forbidden());
        assert_eq!(
            forbidden_check(&x, &big, &third, 2).unwrap(),
            ForbiddenVerdict::Forbidden {
                deviation: "2/3".into()
            }
        );
        let small: BTreeSet<Element> = (-10..=10).map(|i| Element::Vector(vec![i])).collect();
        assert!(matches!(
            forbidden_check(&x, &small, &third, 2).unwrap(),
            ForbiddenVerdict::Vacuous { .. }
        ));
        let outside: BTreeSet<Element> = [Element::Vector(vec![500])].into();
        assert!(forbidden_check(&x, &outside, &third, 1).is_err());
        let capped = WindowConfig::constant(&z.clone().with_ball_cap(300), 120, 2, 1).unwrap();
        assert!(forbidden_check(&capped, &big, &third, 4)
            .unwrap_err()
            .is_resource());
    }

    #[test]
    fn filled_window_passes_forbidden_rule() {
        let z = GroupModel::lattice(1).unwrap();
        let f = CoveringForest::build(&z, 150, 2).unwrap();
        let alpha = Slope::new(2, 5).unwrap();
        let x = fill_density(&f, &alpha).unwrap();
        let set: BTreeSet<Element> = (-140..=140).map(|i| Element::Vector(vec![i])).collect();
        assert!(matches!(
            forbidden_check(&x, &set, &alpha, 2).unwrap(),
            ForbiddenVerdict::Allowed { .. }
        ));
    }

    #[test]
    fn checkerboard_densities() {
        let z2 = GroupModel::lattice(2).unwrap();
        let x = WindowConfig::from_fn(&z2, 10, 2, |g| match g {
            Element::Vector(v) => (v[0] + v[1]).rem_euclid(2) as u32,
            _ => unreachable!(),
        })
        .unwrap();
        let report = measure_density(
            &x,
            &ball_sequence(&z2, 1..=10).unwrap(),
            Some(&Slope::new(1, 2).unwrap()),
        )
        .unwrap();
        // B(1,1) has 4 odd points out of 5; from r = 5 on the density sits in [2/5, 3/5].
        assert_eq!(report.rows[0].density, "4/5");
        for row in &report.rows[4..] {
            assert!((0.4..=0.6).contains(&row.approx), "{row:?}");
        }
        let devs: Vec<f64> = report.rows.iter().map(|r| r.deviation.unwrap()).collect();
        assert!(devs[9] < devs[0]);
        let ones = WindowConfig::constant(&z2, 5, 2, 1).unwrap();
        let all = measure_density(&ones, &ball_sequence(&z2, 0..=5).unwrap(), None).unwrap();
        assert!(all.rows.iter().all(|r| r.density == "1"));
        assert!(measure_density(&ones, &ball_sequence(&z2, [6]).unwrap(), None).is_err());
    }
}

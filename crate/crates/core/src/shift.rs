//! Patterns, finite window configurations and pattern codings.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::Rational;
use crate::group::{Ball, Element, GroupKind, GroupModel};

pub type Symbol = u32;

/// A finite map from group elements to symbols, anchored at the identity.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Pattern {
    cells: BTreeMap<Element, Symbol>,
}

impl Pattern {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_cells(cells: impl IntoIterator<Item = (Element, Symbol)>) -> Self {
        Pattern {
            cells: cells.into_iter().collect(),
        }
    }

    pub fn insert(&mut self, g: Element, symbol: Symbol) {
        self.cells.insert(g, symbol);
    }

    pub fn get(&self, g: &Element) -> Option<Symbol> {
        self.cells.get(g).copied()
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn support(&self) -> impl Iterator<Item = &Element> {
        self.cells.keys()
    }

    pub fn cells(&self) -> impl Iterator<Item = (&Element, Symbol)> {
        self.cells.iter().map(|(g, &s)| (g, s))
    }

    /// Exchanges symbols 0 and 1.
    pub fn complement(&self) -> Pattern {
        Pattern::from_cells(self.cells.iter().map(|(g, &s)| (g.clone(), 1 - s.min(1))))
    }

    /// Re-encodes the pattern as a coding with canonical words.
    pub fn to_coding(&self, group: &GroupModel) -> PatternCoding {
        PatternCoding {
            tuples: self
                .cells
                .iter()
                .map(|(g, &s)| (group.format(g), s))
                .collect(),
        }
    }
}

/// Fraction of cells carrying symbol 1.
pub fn pattern_density(p: &Pattern) -> Result<Rational> {
    if p.is_empty() {
        return Err(Error::EmptySupport);
    }
    let ones = p.cells.values().filter(|&&s| s == 1).count();
    Ok(Rational::new(BigInt::from(ones), BigInt::from(p.len())))
}

/// Splits `f` into `Int(F,K) = {g ∈ F : gK ⊆ F}` and `∂_K F = F \ Int(F,K)`.
pub fn interior_and_boundary(
    group: &GroupModel,
    f: &BTreeSet<Element>,
    k: &BTreeSet<Element>,
) -> (BTreeSet<Element>, BTreeSet<Element>) {
    f.iter()
        .cloned()
        .partition(|g| k.iter().all(|kk| f.contains(&group.multiply(g, kk))))
}

/// `Int(F, B(1_G, r))` computed from distances to the complement of `F`.
///
/// For balls, `gB(1,r) ⊆ F` exactly when every element within distance `r`
/// of `g` lies in `F`; a multi-source search from the outer boundary of `F`
/// finds those distances without enumerating `B(1,r)`.
pub fn ball_interior(group: &GroupModel, f: &BTreeSet<Element>, r: u32) -> BTreeSet<Element> {
    let members: Vec<&Element> = f.iter().collect();
    let index: HashMap<&Element, usize> =
        members.iter().enumerate().map(|(i, g)| (*g, i)).collect();
    let mut dist: Vec<Option<u32>> = vec![None; members.len()];
    let mut queue = VecDeque::new();
    for (i, g) in members.iter().enumerate() {
        if group.neighbors(g).iter().any(|h| !index.contains_key(h)) {
            dist[i] = Some(1);
            queue.push_back(i);
        }
    }
    while let Some(i) = queue.pop_front() {
        let d = dist[i].unwrap();
        for h in group.neighbors(members[i]) {
            if let Some(&j) = index.get(&h) {
                if dist[j].is_none() {
                    dist[j] = Some(d + 1);
                    queue.push_back(j);
                }
            }
        }
    }
    members
        .iter()
        .zip(&dist)
        .filter(|(_, d)| d.is_none_or(|d| d > r))
        .map(|(g, _)| (*g).clone())
        .collect()
}

/// A list of `(word, symbol)` pairs describing a pattern up to the word problem.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PatternCoding {
    pub tuples: Vec<(String, Symbol)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CodingVerdict {
    Consistent(Pattern),
    /// Indices of two tuples naming the same element with different symbols.
    Inconsistent(usize, usize),
}

pub fn coding_check(group: &GroupModel, coding: &PatternCoding) -> Result<CodingVerdict> {
    let mut seen: BTreeMap<Element, (usize, Symbol)> = BTreeMap::new();
    for (j, (word, symbol)) in coding.tuples.iter().enumerate() {
        let g = group.canonicalize(word)?;
        match seen.get(&g) {
            Some(&(i, s)) if s != *symbol => return Ok(CodingVerdict::Inconsistent(i, j)),
            Some(_) => {}
            None => {
                seen.insert(g, (j, *symbol));
            }
        }
    }
    Ok(CodingVerdict::Consistent(Pattern::from_cells(
        seen.into_iter().map(|(g, (_, s))| (g, s)),
    )))
}

/// Symbols on every element of `B(1_G, R)`.
#[derive(Clone, Debug)]
pub struct WindowConfig {
    group: GroupModel,
    ball: Ball,
    alphabet_size: u32,
    symbols: Vec<Symbol>,
}

impl WindowConfig {
    pub fn constant(
        group: &GroupModel,
        radius: u32,
        alphabet_size: u32,
        symbol: Symbol,
    ) -> Result<Self> {
        let ball = group.identity_ball(radius)?;
        let symbols = vec![symbol; ball.len()];
        Self::new(group.clone(), ball, alphabet_size, symbols)
    }

    /// Builds a configuration on an identity-centred ball; `symbols` follows ball order.
    pub fn new(
        group: GroupModel,
        ball: Ball,
        alphabet_size: u32,
        symbols: Vec<Symbol>,
    ) -> Result<Self> {
        if !ball.center().is_identity() {
            return Err(Error::WindowMismatch(
                "window balls are centred at the identity".into(),
            ));
        }
        if symbols.len() != ball.len() {
            return Err(Error::WindowMismatch(format!(
                "{} symbols for a window of {} cells",
                symbols.len(),
                ball.len()
            )));
        }
        if alphabet_size == 0 || symbols.iter().any(|&s| s >= alphabet_size) {
            return Err(Error::Malformed(format!(
                "symbol outside alphabet of size {alphabet_size}"
            )));
        }
        Ok(WindowConfig {
            group,
            ball,
            alphabet_size,
            symbols,
        })
    }

    pub fn from_fn(
        group: &GroupModel,
        radius: u32,
        alphabet_size: u32,
        f: impl Fn(&Element) -> Symbol,
    ) -> Result<Self> {
        let ball = group.identity_ball(radius)?;
        let symbols = ball.members().iter().map(f).collect();
        Self::new(group.clone(), ball, alphabet_size, symbols)
    }

    pub fn group(&self) -> &GroupModel {
        &self.group
    }

    pub fn ball(&self) -> &Ball {
        &self.ball
    }

    pub fn radius(&self) -> u32 {
        self.ball.radius()
    }

    pub fn alphabet_size(&self) -> u32 {
        self.alphabet_size
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.symbols
    }

    pub fn symbol_at(&self, g: &Element) -> Option<Symbol> {
        self.ball.index_of(g).map(|i| self.symbols[i])
    }

    /// The restriction of the configuration to `support`, if it lies in the window.
    pub fn restrict<'a>(&self, support: impl IntoIterator<Item = &'a Element>) -> Option<Pattern> {
        let mut p = Pattern::new();
        for g in support {
            p.insert(g.clone(), self.symbol_at(g)?);
        }
        Some(p)
    }

    pub fn to_record(&self) -> ConfigRecord {
        ConfigRecord {
            group: self.group.spec(),
            radius: self.radius(),
            alphabet: Some(self.alphabet_size),
            cells: self
                .ball
                .members()
                .iter()
                .zip(&self.symbols)
                .map(|(g, &s)| (self.group.format(g), s))
                .collect(),
        }
    }

    pub fn from_record(record: &ConfigRecord) -> Result<Self> {
        let group: GroupModel = record.group.parse()?;
        let ball = group.identity_ball(record.radius)?;
        let mut symbols: Vec<Option<Symbol>> = vec![None; ball.len()];
        for (word, s) in &record.cells {
            let g = group.canonicalize(word)?;
            let i = ball.index_of(&g).ok_or_else(|| {
                Error::WindowMismatch(format!("cell `{word}` outside radius {}", record.radius))
            })?;
            symbols[i] = Some(*s);
        }
        let symbols: Vec<Symbol> = symbols
            .into_iter()
            .enumerate()
            .map(|(i, s)| {
                s.ok_or_else(|| {
                    Error::WindowMismatch(format!("missing cell `{}`", group.format(ball.get(i))))
                })
            })
            .collect::<Result<_>>()?;
        let alphabet = record
            .alphabet
            .unwrap_or_else(|| symbols.iter().copied().max().unwrap_or(0).max(1) + 1);
        Self::new(group, ball, alphabet, symbols)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&self.to_record())?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Self::from_record(&serde_json::from_str(text)?)
    }

    fn plane_extent(&self) -> Result<i64> {
        match self.group.kind() {
            GroupKind::IntegerLattice(2) => Ok(self.radius() as i64),
            _ => Err(Error::Malformed("grid export needs a z^2 window".into())),
        }
    }

    /// Rows from `y = R` down to `y = -R`, columns `x = -R..=R`; cells outside the ball are empty.
    pub fn to_csv(&self) -> Result<String> {
        let r = self.plane_extent()?;
        let mut out = String::new();
        for y in (-r..=r).rev() {
            let row: Vec<String> = (-r..=r)
                .map(|x| {
                    self.symbol_at(&Element::Vector(vec![x, y]))
                        .map(|s| s.to_string())
                        .unwrap_or_default()
                })
                .collect();
            out.push_str(&row.join(","));
            out.push('\n');
        }
        Ok(out)
    }

    /// Binary PGM (`P5`): symbol 1 black, symbol 0 white, outside the ball grey.
    pub fn to_pgm(&self) -> Result<Vec<u8>> {
        let r = self.plane_extent()?;
        if self.alphabet_size > 2 {
            return Err(Error::Malformed(
                "PGM export needs a binary alphabet".into(),
            ));
        }
        let side = 2 * r + 1;
        let mut out = format!("P5\n{side} {side}\n255\n").into_bytes();
        for y in (-r..=r).rev() {
            for x in -r..=r {
                out.push(match self.symbol_at(&Element::Vector(vec![x, y])) {
                    Some(1) => 0,
                    Some(_) => 255,
                    None => 128,
                });
            }
        }
        Ok(out)
    }
}

/// On-disk form of patterns and window configurations.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfigRecord {
    pub group: String,
    pub radius: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alphabet: Option<u32>,
    pub cells: Vec<(String, Symbol)>,
}

impl ConfigRecord {
    pub fn from_pattern(group: &GroupModel, p: &Pattern) -> Result<Self> {
        let mut radius = 0;
        for g in p.support() {
            radius = radius.max(group.length(g)?);
        }
        Ok(ConfigRecord {
            group: group.spec(),
            radius,
            alphabet: None,
            cells: p.to_coding(group).tuples,
        })
    }

    pub fn to_pattern(&self) -> Result<(GroupModel, Pattern)> {
        let group: GroupModel = self.group.parse()?;
        let coding = PatternCoding {
            tuples: self.cells.clone(),
        };
        match coding_check(&group, &coding)? {
            CodingVerdict::Consistent(p) => Ok((group, p)),
            CodingVerdict::Inconsistent(i, j) => {
                Err(Error::Malformed(format!("cells {i} and {j} conflict")))
            }
        }
    }
}

/// Every `g` in the window with `g·supp(p)` inside the window and matching `p`.
pub fn pattern_occurrences(x: &WindowConfig, p: &Pattern) -> Vec<Element> {
    let group = x.group();
    x.ball()
        .members()
        .iter()
        .filter(|g| {
            p.cells()
                .all(|(h, s)| x.symbol_at(&group.multiply(g, h)) == Some(s))
        })
        .cloned()
        .collect()
}

/// Set of elements as a sorted set, convenient for the boundary operations.
pub fn element_set<'a>(it: impl IntoIterator<Item = &'a Element>) -> BTreeSet<Element> {
    it.into_iter().cloned().collect()
}

/// Number of symbol-1 cells of `x` on `set`; `None` if the set leaves the window.
pub fn ones_on(x: &WindowConfig, set: &BTreeSet<Element>) -> Option<usize> {
    let mut ones = 0;
    for g in set {
        if x.symbol_at(g)? == 1 {
            ones += 1;
        }
    }
    Some(ones)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational;

    fn z(n: i64) -> Element {
        Element::Vector(vec![n])
    }

    #[test]
    fn density_examples() {
        let p = Pattern::from_cells((0..5).map(z).zip([1, 0, 1, 0, 0]));
        assert_eq!(pattern_density(&p).unwrap(), rational(2, 5));
        let ones = Pattern::from_cells((0..7).map(|i| (z(i), 1)));
        assert_eq!(pattern_density(&ones).unwrap(), rational(1, 1));
        assert!(matches!(
            pattern_density(&Pattern::new()),
            Err(Error::EmptySupport)
        ));

        let z2 = GroupModel::lattice(2).unwrap();
        let ball = z2.identity_ball(2).unwrap();
        let p = Pattern::from_cells(
            ball.members()
                .iter()
                .enumerate()
                .map(|(i, g)| (g.clone(), (ball.depth(i) == 1) as u32)),
        );
        assert_eq!(p.len(), 13);
        assert_eq!(pattern_density(&p).unwrap(), rational(4, 13));
    }

    #[test]
    fn boundary_examples() {
        let z2 = GroupModel::lattice(2).unwrap();
        let square: BTreeSet<Element> = (-1..=1)
            .flat_map(|x| (-1..=1).map(move |y| Element::Vector(vec![x, y])))
            .collect();
        let k = element_set(z2.identity_ball(1).unwrap().members());
        let (int, bd) = interior_and_boundary(&z2, &square, &k);
        assert_eq!(int, BTreeSet::from([z2.identity()]));
        assert_eq!(bd.len(), 8);

        let (int, bd) = interior_and_boundary(&z2, &square, &BTreeSet::from([z2.identity()]));
        assert_eq!(int, square);
        assert!(bd.is_empty());

        let zz = GroupModel::lattice(1).unwrap();
        let f: BTreeSet<Element> = (0..=9).map(z).collect();
        let k = element_set(zz.identity_ball(2).unwrap().members());
        let (int, bd) = interior_and_boundary(&zz, &f, &k);
        assert_eq!(int, (2..=7).map(z).collect());
        assert_eq!(bd.len(), 4);
    }

    #[test]
    fn ball_interior_matches_definition() {
        let groups = [
            GroupModel::lattice(2).unwrap(),
            GroupModel::free(2).unwrap(),
            GroupModel::z2_z3(),
            GroupModel::heisenberg(),
        ];
        for g in &groups {
            let window = g.identity_ball(4).unwrap();
            // an irregular set: the ball minus every fifth element
            let f: BTreeSet<Element> = window
                .members()
                .iter()
                .enumerate()
                .filter(|(i, _)| i % 5 != 3)
                .map(|(_, e)| e.clone())
                .collect();
            for r in 0..3 {
                let k = element_set(g.identity_ball(r).unwrap().members());
                let (int, _) = interior_and_boundary(g, &f, &k);
                assert_eq!(ball_interior(g, &f, r), int, "{g} r={r}");
            }
        }
    }

    #[test]
    fn coding_examples() {
        let f2 = GroupModel::free(2).unwrap();
        let c = PatternCoding {
            tuples: vec![("a".into(), 1), ("aa⁻¹a".into(), 1)],
        };
        let CodingVerdict::Consistent(p) = coding_check(&f2, &c).unwrap() else {
            panic!()
        };
        assert_eq!(p, Pattern::from_cells([(f2.canonicalize("a").unwrap(), 1)]));

        let z2 = GroupModel::lattice(2).unwrap();
        let c = PatternCoding {
            tuples: vec![("xy".into(), 0), ("yx".into(), 1)],
        };
        assert_eq!(
            coding_check(&z2, &c).unwrap(),
            CodingVerdict::Inconsistent(0, 1)
        );

        let pz = GroupModel::z2_z3();
        let c = PatternCoding {
            tuples: vec![("aa".into(), 0), ("".into(), 0), ("b".into(), 1)],
        };
        let CodingVerdict::Consistent(p) = coding_check(&pz, &c).unwrap() else {
            panic!()
        };
        let support: Vec<String> = p.support().map(|g| pz.format(g)).collect();
        assert_eq!(support, ["", "b"]);

        let bad = PatternCoding {
            tuples: vec![("q".into(), 0)],
        };
        assert!(coding_check(&f2, &bad).is_err());
    }

    #[test]
    fn occurrence_examples() {
        let zz = GroupModel::lattice(1).unwrap();
        let zero = WindowConfig::constant(&zz, 3, 2, 0).unwrap();
        let cell0 = Pattern::from_cells([(zz.identity(), 0)]);
        assert_eq!(pattern_occurrences(&zero, &cell0).len(), zero.ball().len());
        let cell1 = Pattern::from_cells([(zz.identity(), 1)]);
        assert!(pattern_occurrences(&zero, &cell1).is_empty());

        let bits = "00100100100";
        let x = WindowConfig::from_fn(&zz, 5, 2, |g| {
            let Element::Vector(v) = g else {
                unreachable!()
            };
            bits.as_bytes()[(v[0] + 5) as usize] as u32 - b'0' as u32
        })
        .unwrap();
        let p = Pattern::from_cells((0..4).map(z).zip([1, 0, 0, 1]));
        let mut occ = pattern_occurrences(&x, &p);
        occ.sort_by_key(|g| match g {
            Element::Vector(v) => v[0],
            _ => 0,
        });
        assert_eq!(occ, vec![z(-3), z(0)]);
    }

    #[test]
    fn config_json_round_trip() {
        let f2 = GroupModel::free(2).unwrap();
        let x = WindowConfig::from_fn(&f2, 2, 3, |g| (f2.format(g).len() % 3) as u32).unwrap();
        let back = WindowConfig::from_json(&x.to_json().unwrap()).unwrap();
        assert_eq!(back.symbols(), x.symbols());
        assert_eq!(back.alphabet_size(), 3);
        assert_eq!(back.group(), x.group());
    }

    #[test]
    fn grid_exports() {
        let z2 = GroupModel::lattice(2).unwrap();
        let x = WindowConfig::from_fn(&z2, 1, 2, |g| g.is_identity() as u32).unwrap();
        assert_eq!(x.to_csv().unwrap(), ",0,\n0,1,0\n,0,\n");
        let pgm = x.to_pgm().unwrap();
        assert!(pgm.starts_with(b"P5\n3 3\n255\n"));
        assert_eq!(
            &pgm[pgm.len() - 9..],
            &[128, 255, 128, 255, 0, 255, 128, 255, 128]
        );
        let f2 = GroupModel::free(2).unwrap();
        assert!(WindowConfig::constant(&f2, 1, 2, 0)
            .unwrap()
            .to_csv()
            .is_err());
    }

    #[test]
    fn window_validation() {
        let z2 = GroupModel::lattice(2).unwrap();
        let ball = z2.identity_ball(1).unwrap();
        assert!(WindowConfig::new(z2.clone(), ball.clone(), 2, vec![0; 4]).is_err());
        assert!(WindowConfig::new(z2.clone(), ball, 2, vec![2; 5]).is_err());
    }
}

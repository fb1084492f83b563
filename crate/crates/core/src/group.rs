//! Finitely generated groups with a decidable word problem.
//!
//! Every group is presented by an ordered generator list `S`; words are
//! sequences of [`Letter`]s over `S ∪ S⁻¹` and elements are stored in a
//! normal form, so the word problem reduces to comparing normal forms.
//! Balls of the word metric are computed by breadth-first search in the
//! right Cayley graph, one sphere at a time.

use std::cmp::Ordering;
use std::collections::{HashMap, HashSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default bound on the number of elements a single ball may hold.
pub const DEFAULT_BALL_CAP: usize = 1_000_000;

/// A generator or the inverse of a generator.
///
/// Letters order as `s₀ < s₀⁻¹ < s₁ < s₁⁻¹ < …`; this is the letter order
/// behind the shortlex comparison of canonical words.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Letter(u16);

impl Letter {
    pub fn new(generator: usize, inverse: bool) -> Self {
        Letter((generator as u16) << 1 | inverse as u16)
    }

    pub fn generator(self) -> usize {
        (self.0 >> 1) as usize
    }

    pub fn is_inverse(self) -> bool {
        self.0 & 1 == 1
    }

    pub fn inverse(self) -> Self {
        Letter(self.0 ^ 1)
    }
}

pub type Word = Vec<Letter>;

pub fn inverse_word(word: &[Letter]) -> Word {
    word.iter().rev().map(|l| l.inverse()).collect()
}

/// A group element in normal form.
///
/// The variant is determined by the group the element came from; mixing
/// elements of different groups is a logic error that the group operations
/// do not try to detect.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Element {
    /// Integer vector of a free abelian group.
    Vector(Vec<i64>),
    /// Freely reduced word (free groups) or alternating syllable word (Z/2 ∗ Z/3).
    Word(Vec<Letter>),
    /// Exponents `(a, b, c)` of the normal form `x^a y^b z^c`, `z = [x, y]`.
    Heisenberg([i64; 3]),
}

impl Element {
    pub fn is_identity(&self) -> bool {
        match self {
            Element::Vector(v) => v.iter().all(|&c| c == 0),
            Element::Word(w) => w.is_empty(),
            Element::Heisenberg(t) => *t == [0, 0, 0],
        }
    }

    /// The canonical word spelling this element.
    ///
    /// Geodesic for every built-in group except the Heisenberg group, where
    /// it spells `x^a y^b [x,y]^c` literally.
    pub fn canonical_word(&self) -> Word {
        match self {
            Element::Vector(v) => v
                .iter()
                .enumerate()
                .flat_map(|(i, &c)| {
                    std::iter::repeat_n(Letter::new(i, c < 0), c.unsigned_abs() as usize)
                })
                .collect(),
            Element::Word(w) => w.clone(),
            Element::Heisenberg([a, b, c]) => {
                let x = Letter::new(0, false);
                let y = Letter::new(1, false);
                let mut word = Vec::new();
                word.extend(std::iter::repeat_n(
                    Letter::new(0, *a < 0),
                    a.unsigned_abs() as usize,
                ));
                word.extend(std::iter::repeat_n(
                    Letter::new(1, *b < 0),
                    b.unsigned_abs() as usize,
                ));
                // z = x y x⁻¹ y⁻¹ and z⁻¹ = y x y⁻¹ x⁻¹
                let block = if *c >= 0 {
                    [x, y, x.inverse(), y.inverse()]
                } else {
                    [y, x, y.inverse(), x.inverse()]
                };
                for _ in 0..c.unsigned_abs() {
                    word.extend_from_slice(&block);
                }
                word
            }
        }
    }
}

impl Ord for Element {
    /// Shortlex order on canonical words.
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Element::Word(a), Element::Word(b)) => a.len().cmp(&b.len()).then_with(|| a.cmp(b)),
            (Element::Vector(a), Element::Vector(b)) => {
                let na: u64 = a.iter().map(|c| c.unsigned_abs()).sum();
                let nb: u64 = b.iter().map(|c| c.unsigned_abs()).sum();
                na.cmp(&nb)
                    .then_with(|| self.canonical_word().cmp(&other.canonical_word()))
            }
            _ => {
                let a = self.canonical_word();
                let b = other.canonical_word();
                a.len().cmp(&b.len()).then_with(|| a.cmp(&b))
            }
        }
    }
}

impl PartialOrd for Element {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GroupKind {
    IntegerLattice(usize),
    FreeGroup(usize),
    FreeProductZ2Z3,
    DiscreteHeisenberg,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupModel {
    kind: GroupKind,
    labels: Vec<char>,
    ball_cap: usize,
}

impl GroupModel {
    pub fn lattice(dim: usize) -> Result<Self> {
        if dim == 0 || dim > 26 {
            return Err(Error::UnknownGroup(format!("z^{dim}")));
        }
        let labels = if dim <= 3 {
            "xyz".chars().take(dim).collect()
        } else {
            ('a'..='z').take(dim).collect()
        };
        Ok(Self::with_labels(GroupKind::IntegerLattice(dim), labels))
    }

    pub fn free(rank: usize) -> Result<Self> {
        if rank == 0 || rank > 26 {
            return Err(Error::UnknownGroup(format!("free:{rank}")));
        }
        Ok(Self::with_labels(
            GroupKind::FreeGroup(rank),
            ('a'..='z').take(rank).collect(),
        ))
    }

    /// `Z/2 ∗ Z/3 ≅ PSL(2,Z)` with `S = {a, b}`, `a² = b³ = 1`.
    pub fn z2_z3() -> Self {
        Self::with_labels(GroupKind::FreeProductZ2Z3, vec!['a', 'b'])
    }

    /// The discrete Heisenberg group with `S = {x, y}`.
    pub fn heisenberg() -> Self {
        Self::with_labels(GroupKind::DiscreteHeisenberg, vec!['x', 'y'])
    }

    fn with_labels(kind: GroupKind, labels: Vec<char>) -> Self {
        GroupModel {
            kind,
            labels,
            ball_cap: DEFAULT_BALL_CAP,
        }
    }

    pub fn with_ball_cap(mut self, cap: usize) -> Self {
        self.ball_cap = cap;
        self
    }

    pub fn kind(&self) -> GroupKind {
        self.kind
    }

    pub fn ball_cap(&self) -> usize {
        self.ball_cap
    }

    pub fn generator_labels(&self) -> &[char] {
        &self.labels
    }

    /// `|S|`.
    pub fn num_generators(&self) -> usize {
        self.labels.len()
    }

    /// The group name accepted by [`GroupModel::from_str`].
    pub fn spec(&self) -> String {
        match self.kind {
            GroupKind::IntegerLattice(d) => format!("z^{d}"),
            GroupKind::FreeGroup(k) => format!("free:{k}"),
            GroupKind::FreeProductZ2Z3 => "z2*z3".to_string(),
            GroupKind::DiscreteHeisenberg => "heisenberg".to_string(),
        }
    }

    pub fn identity(&self) -> Element {
        match self.kind {
            GroupKind::IntegerLattice(d) => Element::Vector(vec![0; d]),
            GroupKind::FreeGroup(_) | GroupKind::FreeProductZ2Z3 => Element::Word(Vec::new()),
            GroupKind::DiscreteHeisenberg => Element::Heisenberg([0; 3]),
        }
    }

    /// All letters of `S ∪ S⁻¹` in letter order.
    pub fn letters(&self) -> impl Iterator<Item = Letter> + '_ {
        (0..self.labels.len()).flat_map(|i| [Letter::new(i, false), Letter::new(i, true)])
    }

    /// Right-multiplies `g` by a single letter in place.
    pub fn push_letter(&self, g: &mut Element, letter: Letter) {
        let gen = letter.generator();
        let sign: i64 = if letter.is_inverse() { -1 } else { 1 };
        match (self.kind, g) {
            (GroupKind::IntegerLattice(_), Element::Vector(v)) => v[gen] += sign,
            (GroupKind::FreeGroup(_), Element::Word(w)) => {
                if w.last() == Some(&letter.inverse()) {
                    w.pop();
                } else {
                    w.push(letter);
                }
            }
            (GroupKind::FreeProductZ2Z3, Element::Word(w)) => {
                if gen == 0 {
                    // a = a⁻¹
                    let a = Letter::new(0, false);
                    if w.last() == Some(&a) {
                        w.pop();
                    } else {
                        w.push(a);
                    }
                } else {
                    let exp = if letter.is_inverse() { 2 } else { 1 };
                    let merged = match w.last() {
                        Some(l) if l.generator() == 1 => {
                            let prev = if l.is_inverse() { 2 } else { 1 };
                            w.pop();
                            (prev + exp) % 3
                        }
                        _ => exp,
                    };
                    match merged {
                        1 => w.push(Letter::new(1, false)),
                        2 => w.push(Letter::new(1, true)),
                        _ => {}
                    }
                }
            }
            (GroupKind::DiscreteHeisenberg, Element::Heisenberg(t)) => {
                if gen == 0 {
                    // y^b x = x y^b z^{-b}
                    t[0] += sign;
                    t[2] -= sign * t[1];
                } else {
                    t[1] += sign;
                }
            }
            (kind, g) => panic!("element {g:?} does not belong to group {kind:?}"),
        }
    }

    /// Evaluates a word to its normal form.
    pub fn evaluate(&self, word: &[Letter]) -> Element {
        let mut g = self.identity();
        for &l in word {
            self.push_letter(&mut g, l);
        }
        g
    }

    pub fn letter_element(&self, letter: Letter) -> Element {
        self.evaluate(&[letter])
    }

    pub fn multiply(&self, g: &Element, h: &Element) -> Element {
        match (g, h) {
            (Element::Vector(a), Element::Vector(b)) => {
                Element::Vector(a.iter().zip(b).map(|(x, y)| x + y).collect())
            }
            (Element::Heisenberg([a, b, c]), Element::Heisenberg([a2, b2, c2])) => {
                Element::Heisenberg([a + a2, b + b2, c + c2 - b * a2])
            }
            (g, Element::Word(w)) => {
                let mut out = g.clone();
                for &l in w {
                    self.push_letter(&mut out, l);
                }
                out
            }
            (g, h) => panic!("cannot multiply {g:?} by {h:?}"),
        }
    }

    pub fn inverse(&self, g: &Element) -> Element {
        match g {
            Element::Vector(v) => Element::Vector(v.iter().map(|c| -c).collect()),
            Element::Heisenberg([a, b, c]) => Element::Heisenberg([-a, -b, -c - a * b]),
            Element::Word(w) => self.evaluate(&inverse_word(w)),
        }
    }

    /// `g⁻¹ h`, the element carrying `g` to `h` by right multiplication.
    pub fn quotient(&self, g: &Element, h: &Element) -> Element {
        self.multiply(&self.inverse(g), h)
    }

    /// Parses a word over the generator labels.
    ///
    /// Lowercase labels are generators, uppercase labels their inverses.
    /// A letter may be followed by `⁻¹`, `^-1` or `^n`/`^{n}` for powers.
    /// Whitespace, `.`, `*` and `·` are ignored; `1` and `ε` denote the empty word.
    pub fn parse_word(&self, text: &str) -> Result<Word> {
        let unknown = |label: String| Error::UnknownGenerator {
            label,
            word: text.to_string(),
        };
        let chars: Vec<char> = text.chars().collect();
        let mut word = Vec::new();
        let mut i = 0;
        while i < chars.len() {
            let ch = chars[i];
            i += 1;
            if ch.is_whitespace() || matches!(ch, '.' | '*' | '·' | '1' | 'ε') {
                continue;
            }
            let (lower, inverse) = if ch.is_ascii_uppercase() {
                (ch.to_ascii_lowercase(), true)
            } else {
                (ch, false)
            };
            let gen = self
                .labels
                .iter()
                .position(|&l| l == lower)
                .ok_or_else(|| unknown(ch.to_string()))?;
            let mut exponent: i64 = 1;
            if chars.get(i) == Some(&'⁻') && chars.get(i + 1) == Some(&'¹') {
                exponent = -1;
                i += 2;
            } else if chars.get(i) == Some(&'^') {
                i += 1;
                let braced = chars.get(i) == Some(&'{');
                if braced {
                    i += 1;
                }
                let start = i;
                if chars.get(i) == Some(&'-') {
                    i += 1;
                }
                while chars.get(i).is_some_and(|c| c.is_ascii_digit()) {
                    i += 1;
                }
                let digits: String = chars[start..i].iter().collect();
                exponent = digits
                    .parse()
                    .map_err(|_| Error::Malformed(format!("bad exponent in word `{text}`")))?;
                if braced {
                    if chars.get(i) != Some(&'}') {
                        return Err(Error::Malformed(format!(
                            "unclosed exponent in word `{text}`"
                        )));
                    }
                    i += 1;
                }
            }
            let letter = Letter::new(gen, inverse ^ (exponent < 0));
            word.extend(std::iter::repeat_n(
                letter,
                exponent.unsigned_abs() as usize,
            ));
        }
        Ok(word)
    }

    /// Parses and evaluates a word: the word problem as normal-form computation.
    pub fn canonicalize(&self, text: &str) -> Result<Element> {
        Ok(self.evaluate(&self.parse_word(text)?))
    }

    pub fn format_word(&self, word: &[Letter]) -> String {
        word.iter()
            .map(|l| {
                let c = self.labels[l.generator()];
                if l.is_inverse() {
                    c.to_ascii_uppercase()
                } else {
                    c
                }
            })
            .collect()
    }

    /// The canonical word of `g` as text; the identity is the empty string.
    pub fn format(&self, g: &Element) -> String {
        self.format_word(&g.canonical_word())
    }

    /// Whether `g` is a fixed point of canonicalization.
    pub fn is_canonical(&self, g: &Element) -> bool {
        self.evaluate(&g.canonical_word()) == *g
    }

    /// `{g s, g s⁻¹ : s ∈ S}` without repetitions or `g` itself, in letter order.
    pub fn neighbors(&self, g: &Element) -> Vec<Element> {
        let mut out: Vec<Element> = Vec::with_capacity(2 * self.labels.len());
        for l in self.letters() {
            let mut h = g.clone();
            self.push_letter(&mut h, l);
            if h != *g && !out.contains(&h) {
                out.push(h);
            }
        }
        out
    }

    /// Word length `|g|`.
    ///
    /// Closed form except for the Heisenberg group, which runs a
    /// breadth-first search bounded by the ball cap.
    pub fn length(&self, g: &Element) -> Result<u32> {
        match g {
            Element::Vector(v) => Ok(v.iter().map(|c| c.unsigned_abs()).sum::<u64>() as u32),
            Element::Word(w) => Ok(w.len() as u32),
            Element::Heisenberg(_) => {
                let mut layers = self.layers(self.identity());
                loop {
                    let r = layers.radius();
                    if layers.current().contains(g) {
                        return Ok(r);
                    }
                    layers.advance()?;
                }
            }
        }
    }

    pub fn distance(&self, g: &Element, h: &Element) -> Result<u32> {
        self.length(&self.quotient(g, h))
    }

    /// A geodesic word for `g`.
    pub fn geodesic_word(&self, g: &Element) -> Result<Word> {
        if !matches!(g, Element::Heisenberg(_)) {
            return Ok(g.canonical_word());
        }
        let mut parent: HashMap<Element, Letter> = HashMap::new();
        let mut frontier = vec![self.identity()];
        let mut seen: HashSet<Element> = HashSet::from([self.identity()]);
        while !seen.contains(g) {
            let mut next = Vec::new();
            for h in &frontier {
                for l in self.letters() {
                    let mut k = h.clone();
                    self.push_letter(&mut k, l);
                    if seen.insert(k.clone()) {
                        parent.insert(k.clone(), l);
                        next.push(k);
                    }
                }
            }
            if seen.len() > self.ball_cap {
                return Err(Error::resource("geodesic search", self.ball_cap));
            }
            frontier = next;
        }
        let mut word = Vec::new();
        let mut cur = g.clone();
        while let Some(&l) = parent.get(&cur) {
            word.push(l);
            self.push_letter(&mut cur, l.inverse());
        }
        word.reverse();
        Ok(word)
    }

    pub fn layers(&self, center: Element) -> Layers<'_> {
        Layers {
            group: self,
            previous: Vec::new(),
            current: vec![center],
            radius: 0,
            total: 1,
        }
    }

    /// The ball `B(center, radius)` under the word metric.
    pub fn ball(&self, center: &Element, radius: u32) -> Result<Ball> {
        let mut layers = self.layers(center.clone());
        let mut members = Vec::new();
        let mut distances = Vec::new();
        loop {
            let r = layers.radius();
            members.extend(layers.current().iter().cloned());
            distances.extend(std::iter::repeat_n(r, layers.current().len()));
            if r == radius {
                break;
            }
            layers.advance()?;
        }
        let index = members
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, g)| (g, i))
            .collect();
        Ok(Ball {
            center: center.clone(),
            radius,
            members,
            distances,
            index,
        })
    }

    /// `B(1_G, radius)`.
    pub fn identity_ball(&self, radius: u32) -> Result<Ball> {
        self.ball(&self.identity(), radius)
    }
}

impl FromStr for GroupModel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim().to_ascii_lowercase();
        let bad = || Error::UnknownGroup(s.to_string());
        if t == "z" {
            return GroupModel::lattice(1);
        }
        if let Some(d) = t.strip_prefix("z^") {
            return GroupModel::lattice(d.parse().map_err(|_| bad())?);
        }
        if let Some(k) = t.strip_prefix("free:") {
            return GroupModel::free(k.parse().map_err(|_| bad())?);
        }
        match t.as_str() {
            "z2*z3" | "psl2z" => Ok(GroupModel::z2_z3()),
            "heisenberg" => Ok(GroupModel::heisenberg()),
            _ => Err(bad()),
        }
    }
}

impl fmt::Display for GroupModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.spec())
    }
}

/// Spheres of a Cayley graph around a center, produced one at a time.
///
/// Each sphere is sorted in shortlex order, so concatenating spheres yields
/// the breadth-first enumeration used throughout the crate.
pub struct Layers<'g> {
    group: &'g GroupModel,
    previous: Vec<Element>,
    current: Vec<Element>,
    radius: u32,
    total: usize,
}

impl Layers<'_> {
    pub fn radius(&self) -> u32 {
        self.radius
    }

    pub fn current(&self) -> &[Element] {
        &self.current
    }

    /// Number of elements in all spheres produced so far.
    pub fn total(&self) -> usize {
        self.total
    }

    /// Moves to the next sphere. Fails when the ball would exceed the cap.
    pub fn advance(&mut self) -> Result<()> {
        // Neighbours of sphere r lie in spheres r-1, r and r+1.
        let known: HashSet<&Element> = self.previous.iter().chain(&self.current).collect();
        let mut fresh: HashSet<Element> = HashSet::new();
        for g in &self.current {
            for l in self.group.letters() {
                let mut h = g.clone();
                self.group.push_letter(&mut h, l);
                if !known.contains(&h) {
                    fresh.insert(h);
                }
            }
        }
        drop(known);
        let mut next: Vec<Element> = fresh.into_iter().collect();
        next.sort();
        self.total += next.len();
        if self.total > self.group.ball_cap {
            return Err(Error::resource(
                format!(
                    "ball of radius {} in {}",
                    self.radius + 1,
                    self.group.spec()
                ),
                self.group.ball_cap,
            ));
        }
        self.previous = std::mem::replace(&mut self.current, next);
        self.radius += 1;
        Ok(())
    }
}

/// A ball of the word metric with its members in breadth-first order.
#[derive(Clone, Debug)]
pub struct Ball {
    center: Element,
    radius: u32,
    members: Vec<Element>,
    distances: Vec<u32>,
    index: HashMap<Element, usize>,
}

impl Ball {
    pub fn center(&self) -> &Element {
        &self.center
    }

    pub fn radius(&self) -> u32 {
        self.radius
    }

    pub fn members(&self) -> &[Element] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn get(&self, i: usize) -> &Element {
        &self.members[i]
    }

    /// Distance from the center to the `i`-th member.
    pub fn depth(&self, i: usize) -> u32 {
        self.distances[i]
    }

    pub fn index_of(&self, g: &Element) -> Option<usize> {
        self.index.get(g).copied()
    }

    pub fn contains(&self, g: &Element) -> bool {
        self.index.contains_key(g)
    }

    /// Distance from the center when `g` is a member.
    pub fn depth_of(&self, g: &Element) -> Option<u32> {
        self.index_of(g).map(|i| self.distances[i])
    }

    /// Cayley graph restricted to the ball, as sorted adjacency lists.
    pub fn adjacency(&self, group: &GroupModel) -> Vec<Vec<usize>> {
        self.members
            .iter()
            .map(|g| {
                let mut adj: Vec<usize> = group
                    .neighbors(g)
                    .iter()
                    .filter_map(|h| self.index_of(h))
                    .collect();
                adj.sort_unstable();
                adj
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn all_words(group: &GroupModel, max_len: usize) -> Vec<Word> {
        let mut words = vec![Vec::new()];
        let mut frontier = vec![Vec::new()];
        for _ in 0..max_len {
            let mut next = Vec::new();
            for w in &frontier {
                for l in group.letters() {
                    let mut w2: Word = w.clone();
                    w2.push(l);
                    next.push(w2);
                }
            }
            words.extend(next.iter().cloned());
            frontier = next;
        }
        words
    }

    fn groups() -> Vec<GroupModel> {
        vec![
            GroupModel::lattice(1).unwrap(),
            GroupModel::lattice(2).unwrap(),
            GroupModel::free(2).unwrap(),
            GroupModel::z2_z3(),
            GroupModel::heisenberg(),
        ]
    }

    /// 3×3 upper unitriangular matrices, independent of the normal-form code.
    fn matrix_of(word: &[Letter]) -> [[i64; 3]; 3] {
        let mut m = [[1, 0, 0], [0, 1, 0], [0, 0, 1]];
        for l in word {
            let s = if l.is_inverse() { -1 } else { 1 };
            let mut g = [[1, 0, 0], [0, 1, 0], [0, 0, 1]];
            if l.generator() == 0 {
                g[0][1] = s;
            } else {
                g[1][2] = s;
            }
            let mut p = [[0i64; 3]; 3];
            for (i, row) in p.iter_mut().enumerate() {
                for (j, cell) in row.iter_mut().enumerate() {
                    *cell = (0..3).map(|k| m[i][k] * g[k][j]).sum();
                }
            }
            m = p;
        }
        m
    }

    #[test]
    fn canonicalize_examples() {
        let f2 = GroupModel::free(2).unwrap();
        assert_eq!(
            f2.canonicalize("a a⁻¹ b").unwrap(),
            f2.canonicalize("b").unwrap()
        );
        let z2 = GroupModel::lattice(2).unwrap();
        assert_eq!(
            z2.canonicalize("x y x⁻¹").unwrap(),
            Element::Vector(vec![0, 1])
        );
        let h = GroupModel::heisenberg();
        assert_eq!(
            h.canonicalize("x y x⁻¹ y⁻¹").unwrap(),
            Element::Heisenberg([0, 0, 1])
        );
        assert!(matches!(
            f2.canonicalize("a q"),
            Err(Error::UnknownGenerator { .. })
        ));
        assert!(matches!(
            z2.canonicalize("xw"),
            Err(Error::UnknownGenerator { .. })
        ));
    }

    #[test]
    fn word_syntax() {
        let f2 = GroupModel::free(2).unwrap();
        let a = Letter::new(0, false);
        let b = Letter::new(1, false);
        assert_eq!(f2.parse_word("a^3").unwrap(), vec![a, a, a]);
        assert_eq!(
            f2.parse_word("b^{-2}").unwrap(),
            vec![b.inverse(), b.inverse()]
        );
        assert_eq!(
            f2.parse_word("a^-1 B").unwrap(),
            vec![a.inverse(), b.inverse()]
        );
        assert_eq!(f2.parse_word("1").unwrap(), vec![]);
        assert_eq!(f2.format_word(&[a, b.inverse()]), "aB");
        assert!(f2.parse_word("a^").is_err());
    }

    #[test]
    fn heisenberg_matches_matrices() {
        let h = GroupModel::heisenberg();
        for w in all_words(&h, 6) {
            let m = matrix_of(&w);
            let Element::Heisenberg([a, b, c]) = h.evaluate(&w) else {
                unreachable!()
            };
            // x^a y^b z^c as a matrix: top-right entry is a·b + c.
            assert_eq!((m[0][1], m[1][2], m[0][2]), (a, b, a * b + c), "{w:?}");
        }
    }

    #[test]
    fn normal_form_separates_classes() {
        // Equal normal forms iff equal as group elements. For the Heisenberg
        // group the matrix representation is the oracle; for the others the
        // classes are checked against idempotence plus product consistency.
        for g in groups() {
            let words = all_words(&g, 6);
            for w in &words {
                let e = g.evaluate(w);
                assert!(g.is_canonical(&e), "{} {:?}", g, e);
            }
        }
        let h = GroupModel::heisenberg();
        let mut by_matrix: HashMap<[[i64; 3]; 3], Element> = HashMap::new();
        for w in all_words(&h, 6) {
            let e = h.evaluate(&w);
            let prev = by_matrix.entry(matrix_of(&w)).or_insert_with(|| e.clone());
            assert_eq!(*prev, e);
        }
    }

    #[test]
    fn ball_examples() {
        let z2 = GroupModel::lattice(2).unwrap();
        assert_eq!(z2.identity_ball(1).unwrap().len(), 5);
        let f2 = GroupModel::free(2).unwrap();
        assert_eq!(f2.identity_ball(2).unwrap().len(), 17);
        let pz = GroupModel::z2_z3();
        let b = pz.identity_ball(1).unwrap();
        let expected: HashSet<Element> = ["", "a", "b", "bb"]
            .iter()
            .map(|w| pz.canonicalize(w).unwrap())
            .collect();
        assert_eq!(
            b.members().iter().cloned().collect::<HashSet<_>>(),
            expected
        );
    }

    #[test]
    fn ball_matches_word_enumeration() {
        for g in groups() {
            for r in 0..=4u32 {
                let ball = g.identity_ball(r).unwrap();
                let brute: HashSet<Element> = all_words(&g, r as usize)
                    .iter()
                    .map(|w| g.evaluate(w))
                    .collect();
                let members: HashSet<Element> = ball.members().iter().cloned().collect();
                assert_eq!(members.len(), ball.len(), "duplicates in {g} ball {r}");
                assert_eq!(members, brute, "{g} radius {r}");
            }
        }
    }

    #[test]
    fn ball_order_is_deterministic_and_sorted() {
        let f2 = GroupModel::free(2).unwrap();
        let a = f2.identity_ball(3).unwrap();
        let b = f2.identity_ball(3).unwrap();
        assert_eq!(a.members(), b.members());
        for w in a.members().windows(2) {
            assert!(w[0] < w[1]);
        }
        let z = GroupModel::lattice(1).unwrap();
        let ball = z.identity_ball(2).unwrap();
        let order: Vec<String> = ball.members().iter().map(|g| z.format(g)).collect();
        assert_eq!(order, ["", "x", "X", "xx", "XX"]);
    }

    #[test]
    fn neighbor_examples() {
        let z = GroupModel::lattice(1).unwrap();
        assert_eq!(
            z.neighbors(&z.identity()),
            vec![Element::Vector(vec![1]), Element::Vector(vec![-1])]
        );
        let pz = GroupModel::z2_z3();
        let n: HashSet<String> = pz
            .neighbors(&pz.identity())
            .iter()
            .map(|g| pz.format(g))
            .collect();
        assert_eq!(n, HashSet::from(["a".into(), "b".into(), "B".into()]));
        let f2 = GroupModel::free(2).unwrap();
        let a = f2.canonicalize("a").unwrap();
        let n: HashSet<String> = f2.neighbors(&a).iter().map(|g| f2.format(g)).collect();
        assert_eq!(
            n,
            HashSet::from(["".into(), "aa".into(), "ab".into(), "aB".into()])
        );
    }

    #[test]
    fn metric_axioms_on_small_balls() {
        for g in groups() {
            let ball = g.identity_ball(4).unwrap();
            let big = g.identity_ball(8).unwrap();
            let d = |x: &Element, y: &Element| big.depth_of(&g.quotient(x, y)).unwrap();
            let members = ball.members();
            for x in members {
                assert_eq!(big.depth_of(x), big.depth_of(&g.inverse(x)));
            }
            // Triangle inequality through the identity-centred ball only
            // needs distances up to 8, which `big` covers.
            for x in members.iter().step_by(3) {
                for y in members {
                    assert_eq!(d(x, y), d(y, x));
                    for z in members.iter().step_by(7) {
                        assert!(d(x, z) <= d(x, y) + d(y, z));
                    }
                }
            }
        }
    }

    #[test]
    fn balls_strictly_grow() {
        for g in groups() {
            let mut layers = g.layers(g.identity());
            for _ in 0..6 {
                let before = layers.total();
                layers.advance().unwrap();
                assert!(layers.total() > before);
            }
        }
    }

    #[test]
    fn lattice_growth_closed_form() {
        let z2 = GroupModel::lattice(2).unwrap();
        let mut layers = z2.layers(z2.identity());
        for r in 0..=20usize {
            assert_eq!(layers.total(), 2 * r * r + 2 * r + 1);
            layers.advance().unwrap();
        }
    }

    #[test]
    fn homomorphism_on_short_words() {
        for g in groups() {
            let words = all_words(&g, 3);
            for u in &words {
                for v in words.iter().step_by(2) {
                    let uv: Word = u.iter().chain(v).copied().collect();
                    assert_eq!(g.evaluate(&uv), g.multiply(&g.evaluate(u), &g.evaluate(v)));
                }
            }
        }
    }

    #[test]
    fn heisenberg_lengths_and_geodesics() {
        let h = GroupModel::heisenberg();
        let ball = h.identity_ball(5).unwrap();
        for (i, g) in ball.members().iter().enumerate().step_by(11) {
            assert_eq!(h.length(g).unwrap(), ball.depth(i));
            let w = h.geodesic_word(g).unwrap();
            assert_eq!(w.len() as u32, ball.depth(i));
            assert_eq!(h.evaluate(&w), *g);
        }
        // [x,y] needs four letters.
        assert_eq!(h.length(&Element::Heisenberg([0, 0, 1])).unwrap(), 4);
    }

    #[test]
    fn cap_is_enforced() {
        let f2 = GroupModel::free(2).unwrap().with_ball_cap(100);
        assert!(f2.identity_ball(3).is_ok());
        let err = f2.identity_ball(4).unwrap_err();
        assert!(err.is_resource());
    }

    #[test]
    fn group_specs_round_trip() {
        for spec in ["z^2", "z^5", "free:3", "z2*z3", "heisenberg"] {
            let g: GroupModel = spec.parse().unwrap();
            assert_eq!(g.spec(), spec);
        }
        assert!("free:0".parse::<GroupModel>().is_err());
        assert!("sl3z".parse::<GroupModel>().is_err());
    }
}

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// Index of a mark symbol within its alphabet.
pub type Mark = u16;

/// File token for the placeholder marks of either domain.
pub const PLACEHOLDER: &str = "_";

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Side {
    First,
    Second,
}

impl Side {
    pub const BOTH: [Side; 2] = [Side::First, Side::Second];

    pub fn from_index(i: u8) -> Result<Side> {
        match i {
            1 => Ok(Side::First),
            2 => Ok(Side::Second),
            other => invalid(format!("domain index must be 1 or 2, got {other}")),
        }
    }

    pub fn index(self) -> u8 {
        match self {
            Side::First => 1,
            Side::Second => 2,
        }
    }

    pub fn other(self) -> Side {
        match self {
            Side::First => Side::Second,
            Side::Second => Side::First,
        }
    }
}

/// Joint edge mark `(x1, x2)`; `None` stands for the placeholder of that domain.
/// The pair `(None, None)` is not representable through [`EdgePair::new`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct EdgePair {
    first: Option<Mark>,
    second: Option<Mark>,
}

impl EdgePair {
    pub fn new(first: Option<Mark>, second: Option<Mark>) -> Option<Self> {
        if first.is_none() && second.is_none() {
            None
        } else {
            Some(Self { first, second })
        }
    }

    pub fn first(self) -> Option<Mark> {
        self.first
    }

    pub fn second(self) -> Option<Mark> {
        self.second
    }

    pub fn get(self, side: Side) -> Option<Mark> {
        match side {
            Side::First => self.first,
            Side::Second => self.second,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct VertexPair {
    pub first: Mark,
    pub second: Mark,
}

impl VertexPair {
    pub fn new(first: Mark, second: Mark) -> Self {
        Self { first, second }
    }

    pub fn get(self, side: Side) -> Mark {
        match side {
            Side::First => self.first,
            Side::Second => self.second,
        }
    }
}

/// The four mark alphabets Ξ₁, Ξ₂, Θ₁, Θ₂ and the joint alphabets derived from them.
///
/// Joint edge marks are indexed densely: with `a = |Ξ₁| + 1` and `b = |Ξ₂| + 1`,
/// the pair `(x1, x2)` maps to `i1 * b + i2`, where the placeholder takes the
/// last slot of each coordinate. The excluded pair `(∘₁, ∘₂)` would be the final
/// index `a * b - 1`, so the valid indices are exactly `0..a * b - 1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MarkSpaces {
    xi1: Vec<String>,
    xi2: Vec<String>,
    theta1: Vec<String>,
    theta2: Vec<String>,
}

fn check_alphabet(name: &str, symbols: &[String]) -> Result<()> {
    if symbols.is_empty() {
        return invalid(format!("alphabet {name} must be nonempty"));
    }
    if symbols.len() > Mark::MAX as usize {
        return invalid(format!("alphabet {name} is too large"));
    }
    for (i, s) in symbols.iter().enumerate() {
        if s.is_empty()
            || s == PLACEHOLDER
            || s.chars().any(|c| c.is_whitespace() || c == ':' || c == ',' || c == '=')
        {
            return invalid(format!("alphabet {name}: illegal symbol {s:?}"));
        }
        if symbols[..i].contains(s) {
            return invalid(format!("alphabet {name}: duplicate symbol {s:?}"));
        }
    }
    Ok(())
}

impl MarkSpaces {
    pub fn new(
        xi1: Vec<String>,
        xi2: Vec<String>,
        theta1: Vec<String>,
        theta2: Vec<String>,
    ) -> Result<Self> {
        check_alphabet("xi1", &xi1)?;
        check_alphabet("xi2", &xi2)?;
        check_alphabet("theta1", &theta1)?;
        check_alphabet("theta2", &theta2)?;
        Ok(Self { xi1, xi2, theta1, theta2 })
    }

    /// Convenience constructor from string slices.
    pub fn from_symbols(xi1: &[&str], xi2: &[&str], theta1: &[&str], theta2: &[&str]) -> Result<Self> {
        let own = |v: &[&str]| v.iter().map(|s| s.to_string()).collect();
        Self::new(own(xi1), own(xi2), own(theta1), own(theta2))
    }

    pub fn edge_alphabet(&self, side: Side) -> &[String] {
        match side {
            Side::First => &self.xi1,
            Side::Second => &self.xi2,
        }
    }

    pub fn vertex_alphabet(&self, side: Side) -> &[String] {
        match side {
            Side::First => &self.theta1,
            Side::Second => &self.theta2,
        }
    }

    pub fn joint_edge_count(&self) -> usize {
        (self.xi1.len() + 1) * (self.xi2.len() + 1) - 1
    }

    pub fn joint_vertex_count(&self) -> usize {
        self.theta1.len() * self.theta2.len()
    }

    pub fn joint_edge_index(&self, x: EdgePair) -> usize {
        let i1 = x.first.map_or(self.xi1.len(), usize::from);
        let i2 = x.second.map_or(self.xi2.len(), usize::from);
        i1 * (self.xi2.len() + 1) + i2
    }

    pub fn joint_edge_mark(&self, index: usize) -> Option<EdgePair> {
        if index >= self.joint_edge_count() {
            return None;
        }
        let b = self.xi2.len() + 1;
        let (i1, i2) = (index / b, index % b);
        let coord = |i: usize, len: usize| (i < len).then_some(i as Mark);
        EdgePair::new(coord(i1, self.xi1.len()), coord(i2, self.xi2.len()))
    }

    pub fn joint_edge_marks(&self) -> Vec<EdgePair> {
        (0..self.joint_edge_count())
            .map(|i| self.joint_edge_mark(i).expect("index in range"))
            .collect()
    }

    pub fn joint_vertex_index(&self, t: VertexPair) -> usize {
        usize::from(t.first) * self.theta2.len() + usize::from(t.second)
    }

    pub fn joint_vertex_mark(&self, index: usize) -> Option<VertexPair> {
        (index < self.joint_vertex_count()).then(|| {
            VertexPair::new(
                (index / self.theta2.len()) as Mark,
                (index % self.theta2.len()) as Mark,
            )
        })
    }

    pub fn joint_vertex_marks(&self) -> Vec<VertexPair> {
        (0..self.joint_vertex_count())
            .map(|i| self.joint_vertex_mark(i).expect("index in range"))
            .collect()
    }

    pub fn contains_edge_pair(&self, x: EdgePair) -> bool {
        x.first.is_none_or(|m| usize::from(m) < self.xi1.len())
            && x.second.is_none_or(|m| usize::from(m) < self.xi2.len())
    }

    pub fn contains_vertex_pair(&self, t: VertexPair) -> bool {
        usize::from(t.first) < self.theta1.len() && usize::from(t.second) < self.theta2.len()
    }

    pub fn edge_symbol(&self, side: Side, mark: Option<Mark>) -> &str {
        match mark {
            None => PLACEHOLDER,
            Some(m) => &self.edge_alphabet(side)[usize::from(m)],
        }
    }

    pub fn vertex_symbol(&self, side: Side, mark: Mark) -> &str {
        &self.vertex_alphabet(side)[usize::from(mark)]
    }

    pub fn edge_mark_of(&self, side: Side, symbol: &str) -> Option<Mark> {
        self.edge_alphabet(side).iter().position(|s| s == symbol).map(|i| i as Mark)
    }

    pub fn vertex_mark_of(&self, side: Side, symbol: &str) -> Option<Mark> {
        self.vertex_alphabet(side).iter().position(|s| s == symbol).map(|i| i as Mark)
    }

    pub fn format_edge_pair(&self, x: EdgePair) -> String {
        format!(
            "{}:{}",
            self.edge_symbol(Side::First, x.first),
            self.edge_symbol(Side::Second, x.second)
        )
    }

    pub fn format_vertex_pair(&self, t: VertexPair) -> String {
        format!(
            "{}:{}",
            self.vertex_symbol(Side::First, t.first),
            self.vertex_symbol(Side::Second, t.second)
        )
    }

    /// Parses `x1:x2`, with `_` for a placeholder coordinate.
    pub fn parse_edge_pair(&self, token: &str) -> Option<EdgePair> {
        let (a, b) = token.split_once(':')?;
        let coord = |side, s: &str| -> Option<Option<Mark>> {
            if s == PLACEHOLDER {
                Some(None)
            } else {
                self.edge_mark_of(side, s).map(Some)
            }
        };
        EdgePair::new(coord(Side::First, a)?, coord(Side::Second, b)?)
    }

    pub fn parse_vertex_pair(&self, token: &str) -> Option<VertexPair> {
        let (a, b) = token.split_once(':')?;
        Some(VertexPair::new(
            self.vertex_mark_of(Side::First, a)?,
            self.vertex_mark_of(Side::Second, b)?,
        ))
    }
}

//! Shape descriptions: the ordered increasing / decreasing / flat pieces a
//! density is made of, the critical points they imply, and the height-ratio
//! vector that fixes the relative heights of those critical points.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::{Error, Result, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Piece {
    Increasing,
    Decreasing,
    Flat,
}

impl FromStr for Piece {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "inc" | "increasing" | "up" => Ok(Piece::Increasing),
            "dec" | "decreasing" | "down" => Ok(Piece::Decreasing),
            "flat" | "const" => Ok(Piece::Flat),
            other => Err(Error::Config(format!("unknown shape piece {other:?}"))),
        }
    }
}

impl fmt::Display for Piece {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Piece::Increasing => "inc",
            Piece::Decreasing => "dec",
            Piece::Flat => "flat",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum ShapeKind {
    Modes(usize),
    Sequence(Vec<Piece>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CriticalKind {
    Max,
    Min,
}

/// How the height of a critical point is determined.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HeightRole {
    /// Leftmost maximum; its height is the unit all ratios refer to.
    FirstMode,
    /// Boundary minimum held at the template floor.
    Pinned,
    /// Entry of the height-ratio vector.
    Free,
}

/// A critical point of the template: the knots `first_knot..=last_knot`
/// share its height (more than one knot means a flat piece).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CriticalPoint {
    pub kind: CriticalKind,
    pub role: HeightRole,
    pub first_knot: usize,
    pub last_knot: usize,
}

/// Ratios of critical-point heights to the first mode, for the free critical
/// points from left to right.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct HeightRatioVector<T> {
    values: Vec<T>,
}

impl<T: Scalar> HeightRatioVector<T> {
    pub fn new(values: Vec<T>) -> Self {
        Self { values }
    }

    pub fn empty() -> Self {
        Self { values: Vec::new() }
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Modality constraint: `M` interior modes with zero-ish boundaries, or an
/// explicit piece sequence.
#[derive(Debug, Clone, PartialEq)]
pub struct ShapeSpec {
    kind: ShapeKind,
    free_boundaries: bool,
    pieces: Vec<Piece>,
    critical: Vec<CriticalPoint>,
    first_mode: usize,
}

impl ShapeSpec {
    pub fn modes(m: usize) -> Result<Self> {
        Self::build(ShapeKind::Modes(m), false)
    }

    pub fn sequence(pieces: Vec<Piece>, free_boundaries: bool) -> Result<Self> {
        Self::build(ShapeKind::Sequence(pieces), free_boundaries)
    }

    pub fn new(kind: ShapeKind, free_boundaries: bool) -> Result<Self> {
        Self::build(kind, free_boundaries)
    }

    /// Parses a comma separated list such as `"inc,flat,dec"`.
    pub fn parse_sequence(text: &str, free_boundaries: bool) -> Result<Self> {
        let pieces = text
            .split(',')
            .filter(|s| !s.trim().is_empty())
            .map(str::parse)
            .collect::<Result<Vec<Piece>>>()?;
        Self::sequence(pieces, free_boundaries)
    }

    fn build(kind: ShapeKind, free_boundaries: bool) -> Result<Self> {
        let pieces = match &kind {
            ShapeKind::Modes(0) => return Err(Error::Config("number of modes must be positive".into())),
            ShapeKind::Modes(m) => [Piece::Increasing, Piece::Decreasing].repeat(*m),
            ShapeKind::Sequence(p) => p.clone(),
        };
        let directions: Vec<Piece> = pieces.iter().copied().filter(|&p| p != Piece::Flat).collect();
        if directions.is_empty() {
            return Err(Error::Config("shape needs at least one increasing or decreasing piece".into()));
        }
        if directions.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Config(format!(
                "shape {} repeats a direction without a turn",
                join(&pieces)
            )));
        }

        // Each non-flat piece ends at a new critical point; flat pieces extend
        // the current one.
        let mut spans: Vec<(usize, usize)> = vec![(0, 0)];
        for (k, piece) in pieces.iter().enumerate() {
            if *piece == Piece::Flat {
                spans.last_mut().unwrap().1 = k + 1;
            } else {
                spans.push((k + 1, k + 1));
            }
        }
        let last = spans.len() - 1;
        let kinds: Vec<CriticalKind> = (0..=last)
            .map(|i| {
                let rising_into = i > 0 && directions[i - 1] == Piece::Increasing;
                let falling_out = i < last && directions[i] == Piece::Decreasing;
                let is_max = if i == 0 { falling_out } else { rising_into };
                if is_max {
                    CriticalKind::Max
                } else {
                    CriticalKind::Min
                }
            })
            .collect();
        let first_mode = kinds.iter().position(|&k| k == CriticalKind::Max).unwrap();
        let critical = spans
            .iter()
            .zip(&kinds)
            .enumerate()
            .map(|(i, (&(first_knot, last_knot), &kind))| {
                let boundary = i == 0 || i == last;
                let role = if i == first_mode {
                    HeightRole::FirstMode
                } else if boundary && kind == CriticalKind::Min && !free_boundaries {
                    HeightRole::Pinned
                } else {
                    HeightRole::Free
                };
                CriticalPoint {
                    kind,
                    role,
                    first_knot,
                    last_knot,
                }
            })
            .collect();
        Ok(Self {
            kind,
            free_boundaries,
            pieces,
            critical,
            first_mode,
        })
    }

    pub fn kind(&self) -> &ShapeKind {
        &self.kind
    }

    pub fn free_boundaries(&self) -> bool {
        self.free_boundaries
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    pub fn critical_points(&self) -> &[CriticalPoint] {
        &self.critical
    }

    pub fn critical_kinds(&self) -> Vec<CriticalKind> {
        self.critical.iter().map(|c| c.kind).collect()
    }

    pub fn first_mode(&self) -> usize {
        self.first_mode
    }

    /// Number of maxima, boundary maxima included.
    pub fn mode_count(&self) -> usize {
        self.critical.iter().filter(|c| c.kind == CriticalKind::Max).count()
    }

    pub fn lambda_dim(&self) -> usize {
        self.critical.iter().filter(|c| c.role == HeightRole::Free).count()
    }

    /// Critical heights from a height-ratio vector; pinned boundaries take `omega`.
    pub fn critical_heights<T: Scalar>(&self, lambda: &HeightRatioVector<T>, omega: T) -> Result<Vec<T>> {
        if lambda.len() != self.lambda_dim() {
            return Err(Error::Constraint(format!(
                "shape {} needs {} height ratios, got {}",
                self,
                self.lambda_dim(),
                lambda.len()
            )));
        }
        let mut free = lambda.values().iter();
        let heights: Vec<T> = self
            .critical
            .iter()
            .map(|c| match c.role {
                HeightRole::FirstMode => T::one(),
                HeightRole::Pinned => omega,
                HeightRole::Free => *free.next().unwrap(),
            })
            .collect();
        self.check_heights(&heights)?;
        Ok(heights)
    }

    /// Strict alternation of the critical heights and positivity of free entries.
    pub fn check_heights<T: Scalar>(&self, heights: &[T]) -> Result<()> {
        for (c, &h) in self.critical.iter().zip(heights) {
            let ok = match c.role {
                HeightRole::Pinned => h >= T::zero() && h.is_finite(),
                _ => h > T::zero() && h.is_finite(),
            };
            if !ok {
                return Err(Error::Constraint(format!("critical height {h} is not positive")));
            }
        }
        for (i, w) in heights.windows(2).enumerate() {
            let rising = self.critical[i + 1].kind == CriticalKind::Max;
            if (rising && !(w[1] > w[0])) || (!rising && !(w[1] < w[0])) {
                return Err(Error::Constraint(format!(
                    "critical heights {} -> {} break the {} shape",
                    w[0], w[1], self
                )));
            }
        }
        Ok(())
    }

    pub fn lambda_from_heights<T: Scalar>(&self, heights: &[T]) -> HeightRatioVector<T> {
        let unit = heights[self.first_mode];
        HeightRatioVector::new(
            self.critical
                .iter()
                .zip(heights)
                .filter(|(c, _)| c.role == HeightRole::Free)
                .map(|(_, &h)| h / unit)
                .collect(),
        )
    }

    /// Knot heights of the template from critical heights.
    pub fn knot_heights<T: Scalar>(&self, heights: &[T]) -> Vec<T> {
        let mut knots = vec![T::zero(); self.pieces.len() + 1];
        for (c, &h) in self.critical.iter().zip(heights) {
            for k in c.first_knot..=c.last_knot {
                knots[k] = h;
            }
        }
        knots
    }

    /// Maps unconstrained coordinates to critical heights. Each free height is
    /// reached from its neighbour nearer the first mode by a multiplicative
    /// step `exp(±exp(u))`, so every coordinate vector is feasible as far as the
    /// ratio constraints are concerned.
    pub fn heights_from_unconstrained<T: Scalar>(&self, u: &[T], omega: T) -> Vec<T> {
        debug_assert_eq!(u.len(), self.lambda_dim());
        let mut heights = vec![T::zero(); self.critical.len()];
        let slot = self.free_slots();
        heights[self.first_mode] = T::one();
        for i in (0..self.first_mode).rev() {
            heights[i] = match self.critical[i].role {
                HeightRole::Pinned => omega,
                _ => heights[i + 1] * (-u[slot[i]].exp()).exp(),
            };
        }
        for i in self.first_mode + 1..self.critical.len() {
            heights[i] = match self.critical[i].role {
                HeightRole::Pinned => omega,
                _ => {
                    let step = u[slot[i]].exp();
                    let sign = if self.critical[i].kind == CriticalKind::Max { step } else { -step };
                    heights[i - 1] * sign.exp()
                }
            };
        }
        heights
    }

    /// Inverse of [`Self::heights_from_unconstrained`] for feasible ratios.
    pub fn unconstrained_from_lambda<T: Scalar>(&self, lambda: &HeightRatioVector<T>) -> Result<Vec<T>> {
        // The floor does not enter the free coordinates; any admissible value works.
        let heights = self.critical_heights(lambda, T::zero())?;
        let slot = self.free_slots();
        let mut u = vec![T::zero(); self.lambda_dim()];
        for (i, c) in self.critical.iter().enumerate() {
            if c.role != HeightRole::Free {
                continue;
            }
            let neighbour = if i < self.first_mode { heights[i + 1] } else { heights[i - 1] };
            u[slot[i]] = (heights[i] / neighbour).ln().abs().ln();
        }
        Ok(u)
    }

    /// Unconstrained coordinates of the start where every step is `ln 2`: minima
    /// at half the neighbouring maximum, maxima back at the previous maximum.
    pub fn midpoint_unconstrained<T: Scalar>(&self) -> Vec<T> {
        vec![T::lit(2f64.ln().ln()); self.lambda_dim()]
    }

    fn free_slots(&self) -> Vec<usize> {
        let mut next = 0;
        self.critical
            .iter()
            .map(|c| {
                if c.role == HeightRole::Free {
                    next += 1;
                    next - 1
                } else {
                    usize::MAX
                }
            })
            .collect()
    }
}

fn join(pieces: &[Piece]) -> String {
    pieces.iter().map(Piece::to_string).collect::<Vec<_>>().join(",")
}

impl fmt::Display for ShapeSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            ShapeKind::Modes(m) => write!(f, "modes={m}")?,
            ShapeKind::Sequence(p) => write!(f, "{}", join(p))?,
        }
        if self.free_boundaries {
            write!(f, " (free boundaries)")?;
        }
        Ok(())
    }
}

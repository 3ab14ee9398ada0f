//! Finite measure spaces underlying the vector-lattice model `ℚ^S`.

use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec::Vec;

use num_traits::Signed;

use crate::error::{Error, Result};
use crate::rat::Rat;

#[derive(Debug, PartialEq, Eq)]
struct SpaceData {
    name: String,
    points: Vec<String>,
    /// Measure ν, strictly positive on every point.
    weight: Vec<Rat>,
    /// Equivalent finite measure λ (same null sets: none), used by the
    /// convergence-in-measure metric.
    finite_weight: Vec<Rat>,
}

/// A finite point set with two equivalent strictly positive measures.
///
/// Cloning is cheap (shared data). Two spaces are equal when their point
/// lists and weights coincide; all cross-space operations insist on equality.
#[derive(Debug, Clone)]
pub struct Space(Arc<SpaceData>);

impl PartialEq for Space {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0 == other.0
    }
}

impl Eq for Space {}

impl Space {
    /// Builds a space with per-point weights ν and λ.
    ///
    /// Fails if the point set is empty, a point name repeats, or any weight
    /// is not strictly positive.
    pub fn new(
        name: &str,
        points: Vec<String>,
        weight: Vec<Rat>,
        finite_weight: Vec<Rat>,
    ) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::InvalidSpace {
                name: name.to_string(),
                reason: "point set is empty".to_string(),
            });
        }
        if weight.len() != points.len() || finite_weight.len() != points.len() {
            return Err(Error::InvalidSpace {
                name: name.to_string(),
                reason: "weight vectors must cover every point".to_string(),
            });
        }
        for (i, p) in points.iter().enumerate() {
            if points[..i].contains(p) {
                return Err(Error::InvalidSpace {
                    name: name.to_string(),
                    reason: alloc::format!("duplicate point `{p}`"),
                });
            }
        }
        for w in weight.iter().chain(finite_weight.iter()) {
            if !w.is_positive() {
                return Err(Error::InvalidSpace {
                    name: name.to_string(),
                    reason: alloc::format!("weight {w} is not strictly positive"),
                });
            }
        }
        Ok(Space(Arc::new(SpaceData {
            name: name.to_string(),
            points,
            weight,
            finite_weight,
        })))
    }

    /// Space with unit weights on `n` points named `p0..p(n-1)`.
    pub fn unit(name: &str, n: usize) -> Result<Self> {
        let points: Vec<String> = (0..n).map(|i| alloc::format!("p{i}")).collect();
        let ones: Vec<Rat> = (0..n).map(|_| crate::rat::one()).collect();
        Space::new(name, points, ones.clone(), ones)
    }

    pub fn name(&self) -> &str {
        &self.0.name
    }

    pub fn len(&self) -> usize {
        self.0.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.points.is_empty()
    }

    pub fn point_name(&self, index: usize) -> &str {
        &self.0.points[index]
    }

    pub fn point_names(&self) -> &[String] {
        &self.0.points
    }

    pub fn index_of(&self, point: &str) -> Option<usize> {
        self.0.points.iter().position(|p| p == point)
    }

    /// Measure ν of a point.
    pub fn weight(&self, index: usize) -> &Rat {
        &self.0.weight[index]
    }

    /// Equivalent finite measure λ of a point.
    pub fn finite_weight(&self, index: usize) -> &Rat {
        &self.0.finite_weight[index]
    }

    /// Error helper: structural mismatch between two spaces.
    pub(crate) fn mismatch(&self, other: &Space) -> Error {
        Error::SpaceMismatch {
            left: self.name().to_string(),
            right: other.name().to_string(),
        }
    }

    /// Checks an index against the point set.
    pub(crate) fn check_index(&self, index: usize) -> Result<()> {
        if index < self.len() {
            Ok(())
        } else {
            Err(Error::UnknownPoint {
                space: self.name().to_string(),
                index,
                points: self.len(),
            })
        }
    }
}

impl core::fmt::Display for Space {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(f, "{}({} points)", self.name(), self.len())
    }
}

//! Order projections and Boolean homomorphisms between projection algebras.
//!
//! On `ℚ^S` every order projection is multiplication by the characteristic
//! function of a carrier set, so the Boolean algebra of order projections is
//! the powerset of `S`. Homomorphisms between two such algebras are
//! represented intensionally by a point map `φ : target → source` acting by
//! preimage, `Φ(A) = φ⁻¹(A)`; for finite powerset algebras every
//! homomorphism arises this way, so nothing is lost. Hand-written set-map
//! tables are accepted only through [`check_set_map`], which verifies the
//! homomorphism axioms pair by pair.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::ToString;
use alloc::vec::Vec;

use crate::element::Element;
use crate::error::{Error, Result};
use crate::sample::SplitMix64;
use crate::space::Space;
use crate::DEFAULT_ALGEBRA_CAP;

/// An order projection `0 ≤ π ≤ Id`: coordinate masking by a carrier set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrderProjection {
    space: Space,
    carrier: BTreeSet<usize>,
}

impl OrderProjection {
    pub fn new(space: &Space, carrier: BTreeSet<usize>) -> Result<Self> {
        for &i in &carrier {
            space.check_index(i)?;
        }
        Ok(OrderProjection {
            space: space.clone(),
            carrier,
        })
    }

    pub fn identity(space: &Space) -> Self {
        OrderProjection {
            space: space.clone(),
            carrier: (0..space.len()).collect(),
        }
    }

    pub fn zero(space: &Space) -> Self {
        OrderProjection {
            space: space.clone(),
            carrier: BTreeSet::new(),
        }
    }

    /// The projection onto a single coordinate.
    pub fn singleton(space: &Space, point: usize) -> Result<Self> {
        space.check_index(point)?;
        Ok(OrderProjection {
            space: space.clone(),
            carrier: [point].into_iter().collect(),
        })
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    pub fn carrier(&self) -> &BTreeSet<usize> {
        &self.carrier
    }

    /// `πx`: `x` restricted to the carrier, zero elsewhere.
    pub fn apply(&self, x: &Element) -> Result<Element> {
        if self.space != *x.space() {
            return Err(self.space.mismatch(x.space()));
        }
        x.restrict(&self.carrier)
    }

    /// Complementary projection `Id − π`.
    pub fn complement(&self) -> OrderProjection {
        OrderProjection {
            space: self.space.clone(),
            carrier: (0..self.space.len())
                .filter(|i| !self.carrier.contains(i))
                .collect(),
        }
    }
}

/// `π_x`: the projection onto the band generated by `x` (carrier = support).
pub fn support_projection(x: &Element) -> OrderProjection {
    OrderProjection {
        space: x.space().clone(),
        carrier: x.support(),
    }
}

/// A Boolean homomorphism `Φ : 𝔅(source) → 𝔅(target)` given by a point map
/// `φ : target points → source points`; `Φ(A) = {t : φ(t) ∈ A}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BooleanHom {
    source: Space,
    target: Space,
    point_map: Vec<usize>,
}

impl BooleanHom {
    /// `point_map[t]` is the source point `φ(t)`; it must be total on the
    /// target and land inside the source.
    pub fn new(source: &Space, target: &Space, point_map: Vec<usize>) -> Result<Self> {
        if point_map.len() != target.len() {
            return Err(Error::InvalidSpace {
                name: target.name().to_string(),
                reason: alloc::format!(
                    "point map has {} entries for {} target points",
                    point_map.len(),
                    target.len()
                ),
            });
        }
        for &s in &point_map {
            source.check_index(s)?;
        }
        Ok(BooleanHom {
            source: source.clone(),
            target: target.clone(),
            point_map,
        })
    }

    pub fn identity(space: &Space) -> Self {
        BooleanHom {
            source: space.clone(),
            target: space.clone(),
            point_map: (0..space.len()).collect(),
        }
    }

    pub fn source(&self) -> &Space {
        &self.source
    }

    pub fn target(&self) -> &Space {
        &self.target
    }

    pub fn point_map(&self) -> &[usize] {
        &self.point_map
    }

    /// `φ(t)` for a target point `t`.
    pub fn preimage_point(&self, target_point: usize) -> usize {
        self.point_map[target_point]
    }

    /// `Φ(A) = φ⁻¹(A)` for a set of source points.
    pub fn apply_set(&self, a: &BTreeSet<usize>) -> Result<BTreeSet<usize>> {
        for &s in a {
            self.source.check_index(s)?;
        }
        Ok((0..self.target.len())
            .filter(|&t| a.contains(&self.point_map[t]))
            .collect())
    }

    /// `Φ(π)` as a projection on the target space.
    pub fn apply_projection(&self, p: &OrderProjection) -> Result<OrderProjection> {
        if *p.space() != self.source {
            return Err(p.space().mismatch(&self.source));
        }
        Ok(OrderProjection {
            space: self.target.clone(),
            carrier: self.apply_set(p.carrier())?,
        })
    }

    /// `Φ({s})`: the target points mapped onto a single source point.
    pub fn image_of_point(&self, source_point: usize) -> BTreeSet<usize> {
        (0..self.target.len())
            .filter(|&t| self.point_map[t] == source_point)
            .collect()
    }

    /// A preimage hom is an isomorphism exactly when the point map is a
    /// bijection.
    pub fn is_isomorphism(&self) -> bool {
        if self.source.len() != self.target.len() {
            return false;
        }
        let mut seen = alloc::vec![false; self.source.len()];
        for &s in &self.point_map {
            if seen[s] {
                return false;
            }
            seen[s] = true;
        }
        true
    }

    /// Inverse homomorphism, when the point map is a bijection.
    pub fn inverse(&self) -> Option<BooleanHom> {
        if !self.is_isomorphism() {
            return None;
        }
        let mut inv = alloc::vec![0usize; self.target.len()];
        for (t, &s) in self.point_map.iter().enumerate() {
            inv[s] = t;
        }
        Some(BooleanHom {
            source: self.target.clone(),
            target: self.source.clone(),
            point_map: inv,
        })
    }

    /// Runs the homomorphism axioms against this hom's own action.
    ///
    /// Preimage maps always pass (preimage preserves unions, intersections,
    /// and complements); the check exists for documentation and symmetry
    /// with [`check_set_map`].
    pub fn check(&self, rng: &mut SplitMix64) -> HomCheckReport {
        let source = self.source.clone();
        let target = self.target.clone();
        let map = |a: &BTreeSet<usize>| self.apply_set(a).expect("in-range subset");
        check_hom_action(&source, &target, map, rng)
    }
}

/// Which homomorphism axiom a failure refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HomAxiom {
    /// `Φ(A ∪ B) = Φ(A) ∪ Φ(B)`
    Union,
    /// `Φ(A ∩ B) = Φ(A) ∩ Φ(B)`
    Intersection,
    /// `Φ(Ā) = Φ(A)̄`
    Complement,
    /// table lookup failed for some subset
    Totality,
}

impl core::fmt::Display for HomAxiom {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(match self {
            HomAxiom::Union => "union",
            HomAxiom::Intersection => "intersection",
            HomAxiom::Complement => "complement",
            HomAxiom::Totality => "totality",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomAxiomFailure {
    pub axiom: HomAxiom,
    pub a: BTreeSet<usize>,
    pub b: Option<BTreeSet<usize>>,
    pub left: BTreeSet<usize>,
    pub right: BTreeSet<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomCheckReport {
    /// True when every subset pair was enumerated (source within the cap).
    pub exhaustive: bool,
    pub pairs_checked: usize,
    pub failures: Vec<HomAxiomFailure>,
}

impl HomCheckReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

fn subsets_of(n: usize) -> impl Iterator<Item = BTreeSet<usize>> {
    (0..(1usize << n)).map(move |mask| (0..n).filter(|i| mask & (1 << i) != 0).collect())
}

fn random_subset(n: usize, rng: &mut SplitMix64) -> BTreeSet<usize> {
    (0..n).filter(|_| rng.next_u64() & 1 == 1).collect()
}

fn check_hom_action(
    source: &Space,
    target: &Space,
    map: impl Fn(&BTreeSet<usize>) -> BTreeSet<usize>,
    rng: &mut SplitMix64,
) -> HomCheckReport {
    let n = source.len();
    let full_target: BTreeSet<usize> = (0..target.len()).collect();
    let complement_s = |a: &BTreeSet<usize>| -> BTreeSet<usize> {
        (0..n).filter(|i| !a.contains(i)).collect()
    };
    let complement_t = |a: &BTreeSet<usize>| -> BTreeSet<usize> {
        full_target.iter().copied().filter(|t| !a.contains(t)).collect()
    };

    let exhaustive = n <= DEFAULT_ALGEBRA_CAP;
    let pairs: Vec<(BTreeSet<usize>, BTreeSet<usize>)> = if exhaustive {
        let subs: Vec<BTreeSet<usize>> = subsets_of(n).collect();
        subs.iter()
            .flat_map(|a| subs.iter().map(move |b| (a.clone(), b.clone())))
            .collect()
    } else {
        (0..256)
            .map(|_| (random_subset(n, rng), random_subset(n, rng)))
            .collect()
    };

    let mut failures = Vec::new();
    let mut push = |axiom: HomAxiom,
                    a: &BTreeSet<usize>,
                    b: Option<&BTreeSet<usize>>,
                    left: BTreeSet<usize>,
                    right: BTreeSet<usize>| {
        if left != right {
            failures.push(HomAxiomFailure {
                axiom,
                a: a.clone(),
                b: b.cloned(),
                left,
                right,
            });
        }
    };

    let pairs_checked = pairs.len();
    for (a, b) in &pairs {
        let union: BTreeSet<usize> = a.union(b).copied().collect();
        let inter: BTreeSet<usize> = a.intersection(b).copied().collect();
        push(
            HomAxiom::Union,
            a,
            Some(b),
            map(&union),
            map(a).union(&map(b)).copied().collect(),
        );
        push(
            HomAxiom::Intersection,
            a,
            Some(b),
            map(&inter),
            map(a).intersection(&map(b)).copied().collect(),
        );
        push(
            HomAxiom::Complement,
            a,
            None,
            map(&complement_s(a)),
            complement_t(&map(a)),
        );
    }

    HomCheckReport {
        exhaustive,
        pairs_checked,
        failures,
    }
}

/// Checks a hand-written set-map table against the homomorphism axioms.
///
/// The table must assign a target subset to every source subset; missing
/// rows are reported as totality failures.
pub fn check_set_map(
    source: &Space,
    target: &Space,
    table: &BTreeMap<BTreeSet<usize>, BTreeSet<usize>>,
    rng: &mut SplitMix64,
) -> HomCheckReport {
    let mut totality_failures = Vec::new();
    if source.len() <= DEFAULT_ALGEBRA_CAP {
        for s in subsets_of(source.len()) {
            if !table.contains_key(&s) {
                totality_failures.push(HomAxiomFailure {
                    axiom: HomAxiom::Totality,
                    a: s,
                    b: None,
                    left: BTreeSet::new(),
                    right: BTreeSet::new(),
                });
            }
        }
    }
    if !totality_failures.is_empty() {
        return HomCheckReport {
            exhaustive: true,
            pairs_checked: 0,
            failures: totality_failures,
        };
    }
    let map = |a: &BTreeSet<usize>| table.get(a).cloned().unwrap_or_default();
    check_hom_action(source, target, map, rng)
}

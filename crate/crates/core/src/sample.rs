//! Deterministic sampling: a small PRNG, the standard evaluation grid, and
//! random generators for spaces, elements, homomorphisms, and kernels.
//!
//! Everything here is seeded and reproducible; reports that depend on
//! sampling are byte-identical across runs with the same seed.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use num_traits::Zero;

use crate::element::Element;
use crate::expr::Expr;
use crate::operator::KernelOperator;
use crate::proj::BooleanHom;
use crate::rat::{rat, Rat};
use crate::space::Space;

/// Default seed for sampling-backed checks.
pub const DEFAULT_SEED: u64 = 0x5EED_1A77;

/// SplitMix64 PRNG; tiny, deterministic, and `no_std`-friendly.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform-ish value in `0..n` (n > 0).
    pub fn below(&mut self, n: usize) -> usize {
        (self.next_u64() % n as u64) as usize
    }

    pub fn chance(&mut self, num: u32, den: u32) -> bool {
        (self.next_u64() % den as u64) < num as u64
    }
}

/// The rational sampling grid used for kernel comparisons and positivity:
/// by default the 201 points `k/10` for `k = −100..=100`, extendable with
/// case-relevant points.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SampleGrid {
    points: Vec<Rat>,
}

impl SampleGrid {
    /// 201 points `k/10`, `k = −100 ..= 100`.
    pub fn standard() -> Self {
        SampleGrid {
            points: (-100..=100).map(|k| rat(k, 10)).collect(),
        }
    }

    pub fn from_points(points: Vec<Rat>) -> Self {
        SampleGrid { points }
    }

    pub fn with_extra(mut self, extra: impl IntoIterator<Item = Rat>) -> Self {
        for p in extra {
            if !self.points.contains(&p) {
                self.points.push(p);
            }
        }
        self
    }

    pub fn points(&self) -> &[Rat] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

impl Default for SampleGrid {
    fn default() -> Self {
        SampleGrid::standard()
    }
}

const DENOMINATORS: [i64; 6] = [1, 1, 2, 3, 4, 10];

/// Random rational with small numerator and denominator (may be zero).
pub fn random_rat(rng: &mut SplitMix64) -> Rat {
    let numer = rng.below(21) as i64 - 10;
    let denom = DENOMINATORS[rng.below(DENOMINATORS.len())];
    rat(numer, denom)
}

/// Random nonzero rational.
pub fn random_nonzero_rat(rng: &mut SplitMix64) -> Rat {
    loop {
        let q = random_rat(rng);
        if !q.is_zero() {
            return q;
        }
    }
}

/// Random nonnegative rational (may be zero).
pub fn random_nonneg_rat(rng: &mut SplitMix64) -> Rat {
    let numer = rng.below(11) as i64;
    let denom = DENOMINATORS[rng.below(DENOMINATORS.len())];
    rat(numer, denom)
}

/// Random element; roughly a quarter of the coordinates are zero.
pub fn random_element(rng: &mut SplitMix64, space: &Space) -> Element {
    let values = (0..space.len())
        .map(|_| {
            if rng.chance(1, 4) {
                Rat::zero()
            } else {
                random_rat(rng)
            }
        })
        .collect();
    Element::new(space, values).expect("value count matches")
}

/// Random pair of disjoint elements (supports never overlap).
pub fn random_disjoint_pair(rng: &mut SplitMix64, space: &Space) -> (Element, Element) {
    let mut y = Vec::with_capacity(space.len());
    let mut z = Vec::with_capacity(space.len());
    for _ in 0..space.len() {
        match rng.below(3) {
            0 => {
                y.push(random_nonzero_rat(rng));
                z.push(Rat::zero());
            }
            1 => {
                y.push(Rat::zero());
                z.push(random_nonzero_rat(rng));
            }
            _ => {
                y.push(Rat::zero());
                z.push(Rat::zero());
            }
        }
    }
    (
        Element::new(space, y).expect("value count matches"),
        Element::new(space, z).expect("value count matches"),
    )
}

/// Random space with `1..=max_points` points and small positive weights.
pub fn random_space(rng: &mut SplitMix64, name: &str, max_points: usize) -> Space {
    let n = 1 + rng.below(max_points);
    let points: Vec<String> = (0..n).map(|i| alloc::format!("p{i}")).collect();
    let pick = |rng: &mut SplitMix64| -> Rat {
        const POSITIVE: [(i64, i64); 4] = [(1, 1), (1, 2), (2, 1), (3, 1)];
        let (n, d) = POSITIVE[rng.below(POSITIVE.len())];
        rat(n, d)
    };
    let weight: Vec<Rat> = (0..n).map(|_| pick(rng)).collect();
    let finite: Vec<Rat> = (0..n).map(|_| pick(rng)).collect();
    Space::new(name, points, weight, finite).expect("valid random space")
}

/// Random Boolean homomorphism `𝔅(source) → 𝔅(target)` (arbitrary total
/// point map `target → source`).
pub fn random_hom(rng: &mut SplitMix64, source: &Space, target: &Space) -> BooleanHom {
    let map = (0..target.len()).map(|_| rng.below(source.len())).collect();
    BooleanHom::new(source, target, map).expect("in-range point map")
}

/// Random isomorphism between equal-sized spaces (point map a random
/// permutation).
pub fn random_iso_hom(rng: &mut SplitMix64, source: &Space, target: &Space) -> Option<BooleanHom> {
    if source.len() != target.len() {
        return None;
    }
    let mut perm: Vec<usize> = (0..source.len()).collect();
    for i in (1..perm.len()).rev() {
        perm.swap(i, rng.below(i + 1));
    }
    Some(BooleanHom::new(source, target, perm).expect("permutation"))
}

/// Random expression vanishing at `r = 0`.
pub fn random_vanishing_expr(rng: &mut SplitMix64, depth: usize) -> Expr {
    if depth == 0 {
        return match rng.below(4) {
            0 => Expr::mul(Expr::lit(random_nonzero_rat(rng)), Expr::var()),
            1 => Expr::mul(
                Expr::lit(random_nonzero_rat(rng)),
                Expr::pow_of(Expr::var(), 1 + rng.below(3) as u32),
            ),
            2 => Expr::max_of(Expr::var(), Expr::zero()),
            _ => Expr::min_of(Expr::var(), Expr::zero()),
        };
    }
    let a = random_vanishing_expr(rng, depth - 1);
    match rng.below(8) {
        0 => Expr::add(a, random_vanishing_expr(rng, depth - 1)),
        1 => Expr::sub(a, random_vanishing_expr(rng, depth - 1)),
        2 => Expr::min_of(a, random_vanishing_expr(rng, depth - 1)),
        3 => Expr::max_of(a, random_vanishing_expr(rng, depth - 1)),
        4 => Expr::abs_of(a),
        5 => Expr::neg(a),
        // guarded division: the branch only runs for r ≠ 0
        6 => Expr::ifzero(
            Expr::var(),
            Expr::zero(),
            Expr::div_of(Expr::mul(a, Expr::var()), Expr::var()),
        ),
        _ => a,
    }
}

/// Random expression that vanishes at `0` and is nonnegative everywhere
/// (built from abs, even powers, positive-part leaves, and positivity-
/// preserving combinators).
pub fn random_nonneg_expr(rng: &mut SplitMix64, depth: usize) -> Expr {
    if depth == 0 {
        let c = Expr::lit(random_nonneg_rat(rng) + rat(1, 2));
        return match rng.below(3) {
            0 => Expr::mul(c, Expr::abs_of(Expr::var())),
            1 => Expr::mul(c, Expr::pow_of(Expr::var(), 2 * (1 + rng.below(2) as u32))),
            _ => Expr::max_of(Expr::mul(c, Expr::var()), Expr::zero()),
        };
    }
    let a = random_nonneg_expr(rng, depth - 1);
    match rng.below(4) {
        0 => Expr::add(a, random_nonneg_expr(rng, depth - 1)),
        1 => Expr::max_of(a, random_nonneg_expr(rng, depth - 1)),
        2 => Expr::min_of(a, random_nonneg_expr(rng, depth - 1)),
        _ => a,
    }
}

/// Random operator atomic subordinate to `hom`, built structurally: the
/// kernel is supported exactly on the pairs `(φ(t), t)`.
pub fn random_atomic_operator(rng: &mut SplitMix64, hom: &BooleanHom, depth: usize) -> KernelOperator {
    let mut kernel = BTreeMap::new();
    for t in 0..hom.target().len() {
        if rng.chance(7, 8) {
            kernel.insert(
                (hom.preimage_point(t), t),
                random_vanishing_expr(rng, depth),
            );
        }
    }
    KernelOperator::new(hom.source(), hom.target(), kernel).expect("vanishing kernels")
}

/// Random positive atomic operator subordinate to `hom` (nonnegative
/// kernels on the atomic pattern).
pub fn random_positive_atomic_operator(
    rng: &mut SplitMix64,
    hom: &BooleanHom,
    depth: usize,
) -> KernelOperator {
    let mut kernel = BTreeMap::new();
    for t in 0..hom.target().len() {
        if rng.chance(7, 8) {
            kernel.insert((hom.preimage_point(t), t), random_nonneg_expr(rng, depth));
        }
    }
    KernelOperator::new(hom.source(), hom.target(), kernel).expect("vanishing kernels")
}

/// Random operator with a dense signed kernel table (not atomic in
/// general).
pub fn random_operator(
    rng: &mut SplitMix64,
    source: &Space,
    target: &Space,
    depth: usize,
) -> KernelOperator {
    let mut kernel = BTreeMap::new();
    for s in 0..source.len() {
        for t in 0..target.len() {
            if rng.chance(3, 5) {
                kernel.insert((s, t), random_vanishing_expr(rng, depth));
            }
        }
    }
    KernelOperator::new(source, target, kernel).expect("vanishing kernels")
}

/// Random positive operator with a dense kernel table (not atomic in
/// general).
pub fn random_positive_operator(
    rng: &mut SplitMix64,
    source: &Space,
    target: &Space,
    depth: usize,
) -> KernelOperator {
    let mut kernel = BTreeMap::new();
    for s in 0..source.len() {
        for t in 0..target.len() {
            if rng.chance(3, 5) {
                kernel.insert((s, t), random_nonneg_expr(rng, depth));
            }
        }
    }
    KernelOperator::new(source, target, kernel).expect("vanishing kernels")
}

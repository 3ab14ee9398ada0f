//! The brute-force decomposition oracle against the pointwise formulas for
//! atomic operators, and the order-theoretic consequences of atomicity.

use latop_core::atomic::{
    atomic_consequences_check, is_atomic, pointwise_lattice_op, AtomicityMode,
};
use latop_core::element::Element;
use latop_core::expr::Expr;
use latop_core::operator::{
    brute_lattice_op, check_oa, KernelOperator, OpLatticeKind,
};
use latop_core::rat::rat;
use latop_core::sample::{self, SampleGrid, SplitMix64};
use latop_core::space::Space;
use num_traits::Zero;

const KINDS: [OpLatticeKind; 5] = [
    OpLatticeKind::Join,
    OpLatticeKind::Meet,
    OpLatticeKind::Pos,
    OpLatticeKind::Neg,
    OpLatticeKind::Modulus,
];

#[test]
fn random_kernel_operators_are_orthogonally_additive() {
    let mut rng = SplitMix64::new(101);
    for _ in 0..20 {
        let s = sample::random_space(&mut rng, "S", 5);
        let f = sample::random_space(&mut rng, "F", 5);
        let t = sample::random_operator(&mut rng, &s, &f, 2);
        let report = check_oa(&s, |x| t.apply(x), 40, &mut rng).unwrap();
        assert!(report.passed(), "OA failed: {:?}", report.failures.first());
    }
}

#[test]
fn modulus_dominates_the_image() {
    // |Tx| ≤ |T|(x), with |T| evaluated by the decomposition oracle
    let mut rng = SplitMix64::new(103);
    for _ in 0..30 {
        let s = sample::random_space(&mut rng, "S", 5);
        let f = sample::random_space(&mut rng, "F", 4);
        let t = sample::random_operator(&mut rng, &s, &f, 2);
        let x = sample::random_element(&mut rng, &s);
        let tx = t.apply(&x).unwrap();
        let modulus = brute_lattice_op(OpLatticeKind::Modulus, &t, None, &x).unwrap();
        assert!(
            tx.abs().le(&modulus).unwrap(),
            "|Tx| = {} exceeds |T|(x) = {modulus}",
            tx.abs()
        );
    }
}

#[test]
fn positive_operators_reduce_against_zero() {
    let mut rng = SplitMix64::new(105);
    for _ in 0..20 {
        let s = sample::random_space(&mut rng, "S", 4);
        let f = sample::random_space(&mut rng, "F", 4);
        let t = sample::random_positive_operator(&mut rng, &s, &f, 1);
        let zero_op = KernelOperator::zero(&s, &f);
        let x = sample::random_element(&mut rng, &s);
        let join = brute_lattice_op(OpLatticeKind::Join, &t, Some(&zero_op), &x).unwrap();
        let meet = brute_lattice_op(OpLatticeKind::Meet, &t, Some(&zero_op), &x).unwrap();
        assert_eq!(join, t.apply(&x).unwrap(), "T ∨ 0 = T at {x}");
        assert!(meet.is_zero(), "T ∧ 0 = 0 at {x}");
    }
}

#[test]
fn brute_join_dominates_trivial_decompositions() {
    let mut rng = SplitMix64::new(107);
    for _ in 0..20 {
        let s = sample::random_space(&mut rng, "S", 4);
        let f = sample::random_space(&mut rng, "F", 3);
        let t = sample::random_operator(&mut rng, &s, &f, 1);
        let u = sample::random_operator(&mut rng, &s, &f, 1);
        let x = sample::random_element(&mut rng, &s);
        let join = brute_lattice_op(OpLatticeKind::Join, &t, Some(&u), &x).unwrap();
        let pointwise_max = t.apply(&x).unwrap().join(&u.apply(&x).unwrap()).unwrap();
        assert!(pointwise_max.le(&join).unwrap());
    }
}

#[test]
fn pointwise_formulas_match_the_oracle_for_atomic_pairs() {
    let grid = SampleGrid::standard();
    let mut rng = SplitMix64::new(109);
    for round in 0..60 {
        let s = sample::random_space(&mut rng, "S", 5);
        let f = sample::random_space(&mut rng, "F", 5);
        let h = sample::random_hom(&mut rng, &s, &f);
        let t = sample::random_atomic_operator(&mut rng, &h, 2);
        let u = sample::random_atomic_operator(&mut rng, &h, 2);
        for _ in 0..3 {
            let x = sample::random_element(&mut rng, &s);
            for kind in KINDS {
                let binary = matches!(kind, OpLatticeKind::Join | OpLatticeKind::Meet);
                let second = binary.then_some(&u);
                let pw = pointwise_lattice_op(kind, &t, second, &h, &grid).unwrap();
                let lhs = pw.apply(&x).unwrap();
                let rhs = brute_lattice_op(kind, &t, second, &x).unwrap();
                assert_eq!(
                    lhs, rhs,
                    "round {round}: {} disagreed at {x}",
                    kind.name()
                );
            }
        }
    }
}

#[test]
fn pointwise_modulus_is_atomic_and_matches_values() {
    let grid = SampleGrid::standard();
    let mut rng = SplitMix64::new(111);
    for _ in 0..20 {
        let s = sample::random_space(&mut rng, "S", 4);
        let f = sample::random_space(&mut rng, "F", 4);
        let h = sample::random_hom(&mut rng, &s, &f);
        let t = sample::random_atomic_operator(&mut rng, &h, 2);
        let modulus = pointwise_lattice_op(OpLatticeKind::Modulus, &t, None, &h, &grid).unwrap();
        assert!(is_atomic(&modulus, &h, AtomicityMode::Singleton, &grid)
            .unwrap()
            .atomic);
        for _ in 0..4 {
            let x = sample::random_element(&mut rng, &s);
            assert_eq!(modulus.apply(&x).unwrap(), t.apply(&x).unwrap().abs());
        }
    }
}

#[test]
fn atomic_operators_preserve_disjointness_and_fragments() {
    let mut rng = SplitMix64::new(113);
    for _ in 0..20 {
        let s = sample::random_space(&mut rng, "S", 5);
        let f = sample::random_space(&mut rng, "F", 5);
        let h = sample::random_hom(&mut rng, &s, &f);
        let t = sample::random_atomic_operator(&mut rng, &h, 2);
        let report = atomic_consequences_check(&t, 50, &mut rng).unwrap();
        assert!(report.passed(), "{:?}", report.failures.first());
    }
}

#[test]
fn dominated_sub_kernels_of_atomic_operators_are_atomic() {
    // the atomic operators form an ideal: 0 ≤ S ≤ T with T atomic forces S
    // atomic; S is built as a masked, scaled sub-kernel of T
    let grid = SampleGrid::standard();
    let mut rng = SplitMix64::new(115);
    for _ in 0..20 {
        let s = sample::random_space(&mut rng, "S", 5);
        let f = sample::random_space(&mut rng, "F", 5);
        let h = sample::random_hom(&mut rng, &s, &f);
        let t = sample::random_positive_atomic_operator(&mut rng, &h, 2);
        let kernel: std::collections::BTreeMap<(usize, usize), Expr> = t
            .entries()
            .filter(|_| rng.chance(2, 3))
            .map(|(sp, tp, e)| {
                ((sp, tp), Expr::mul(Expr::lit(rat(1, 2)), e.clone()))
            })
            .collect();
        let sub = KernelOperator::new(t.source(), t.target(), kernel).unwrap();
        // dominated on samples
        for _ in 0..4 {
            let x = sample::random_element(&mut rng, &s);
            let sx = sub.apply(&x).unwrap();
            assert!(Element::zero(&f).le(&sx).unwrap());
            assert!(sx.le(&t.apply(&x).unwrap()).unwrap());
        }
        assert!(is_atomic(&sub, &h, AtomicityMode::Singleton, &grid)
            .unwrap()
            .atomic);
    }
}

#[test]
fn lattice_identities_on_one_point_spaces() {
    // join of slopes 1 and 2 at x = 3 is 6, matching the oracle over the
    // two decompositions of [3]
    let s = Space::unit("E", 1).unwrap();
    let grid = SampleGrid::standard();
    let h = latop_core::proj::BooleanHom::identity(&s);
    let t = KernelOperator::diagonal(&s, vec![Expr::var()]).unwrap();
    let u = KernelOperator::diagonal(
        &s,
        vec![Expr::mul(Expr::int(2), Expr::var())],
    )
    .unwrap();
    let x = Element::new(&s, vec![rat(3, 1)]).unwrap();
    let pw = pointwise_lattice_op(OpLatticeKind::Join, &t, Some(&u), &h, &grid).unwrap();
    let brute = brute_lattice_op(OpLatticeKind::Join, &t, Some(&u), &x).unwrap();
    assert_eq!(pw.apply(&x).unwrap(), brute);
    assert_eq!(brute, Element::new(&s, vec![rat(6, 1)]).unwrap());
}

#[test]
fn stabilizing_sequences_stabilize_images() {
    // finite-model surrogate for lateral-to-order continuity: along a chain
    // of fragments growing to x, operator values and the measure metric
    // stabilize
    let mut rng = SplitMix64::new(117);
    for _ in 0..10 {
        let s = sample::random_space(&mut rng, "S", 5);
        let f = sample::random_space(&mut rng, "F", 5);
        let h = sample::random_hom(&mut rng, &s, &f);
        let t = sample::random_atomic_operator(&mut rng, &h, 2);
        let x = sample::random_element(&mut rng, &s);
        let support: Vec<usize> = x.support().into_iter().collect();
        let mut carrier = std::collections::BTreeSet::new();
        let mut chain = vec![x.restrict(&carrier).unwrap()];
        for p in support {
            carrier.insert(p);
            chain.push(x.restrict(&carrier).unwrap());
        }
        let tx = t.apply(&x).unwrap();
        let last = chain.last().unwrap();
        assert_eq!(last, &x);
        assert_eq!(t.apply(last).unwrap(), tx);
        assert!(latop_core::superposition::rho_metric(&t.apply(last).unwrap(), &tx)
            .unwrap()
            .is_zero());
        // the chain is a chain of fragments
        for w in chain.windows(2) {
            assert!(latop_core::fragments::is_fragment(&w[0], &w[1]).unwrap());
        }
    }
}

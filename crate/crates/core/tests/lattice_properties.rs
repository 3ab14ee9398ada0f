//! Property tests for the coordinatewise lattice structure and the fragment
//! Boolean algebra.

use proptest::prelude::*;

use latop_core::element::Element;
use latop_core::fragments::{
    fragment_complement, fragment_intersect, fragment_union, fragments, is_fragment,
};
use latop_core::rat::{rat, Rat};
use latop_core::space::Space;

fn rat_strategy() -> impl Strategy<Value = Rat> {
    (-20i64..=20, 1i64..=10).prop_map(|(n, d)| rat(n, d))
}

fn element_strategy(n: usize) -> impl Strategy<Value = (Space, Element)> {
    prop::collection::vec(
        prop_oneof![3 => rat_strategy(), 1 => Just(Rat::from_integer(0.into()))],
        n..=n,
    )
    .prop_map(move |vals| {
        let space = Space::unit("E", vals.len()).unwrap();
        let e = Element::new(&space, vals).unwrap();
        (space, e)
    })
}

proptest! {
    #[test]
    fn pos_neg_decomposition((_s, x) in element_strategy(4)) {
        // x = x⁺ − x⁻ and |x| = x⁺ + x⁻, with x⁺ ⊥ x⁻
        prop_assert_eq!(&(&x.pos() - &x.neg_part()), &x);
        prop_assert_eq!(&x.pos() + &x.neg_part(), x.abs());
        prop_assert!(x.pos().is_disjoint(&x.neg_part()).unwrap());
    }

    #[test]
    fn join_meet_relations((s, x) in element_strategy(3), vals in prop::collection::vec(rat_strategy(), 3)) {
        let y = Element::new(&s, vals).unwrap();
        let join = x.join(&y).unwrap();
        let meet = x.meet(&y).unwrap();
        // x + y = x∨y + x∧y
        prop_assert_eq!(&x.checked_add(&y).unwrap(), &(&join + &meet));
        prop_assert!(meet.le(&x).unwrap() && meet.le(&y).unwrap());
        prop_assert!(x.le(&join).unwrap() && y.le(&join).unwrap());
    }

    #[test]
    fn zero_is_disjoint_from_everything((s, x) in element_strategy(4)) {
        prop_assert!(Element::zero(&s).is_disjoint(&x).unwrap());
    }

    #[test]
    fn fragment_decompositions((_s, x) in element_strategy(4)) {
        let frs = fragments(&x).unwrap();
        prop_assert_eq!(frs.len(), 1usize << x.support().len());
        for y in &frs {
            prop_assert!(is_fragment(y, &x).unwrap());
            let rest = &x - y;
            prop_assert!(y.is_disjoint(&rest).unwrap());
            prop_assert_eq!(&(y + &rest), &x);
        }
    }

    #[test]
    fn fragment_order_is_a_partial_order((_s, x) in element_strategy(3)) {
        let frs = fragments(&x).unwrap();
        for a in &frs {
            prop_assert!(is_fragment(a, a).unwrap());
            for b in &frs {
                if is_fragment(a, b).unwrap() && is_fragment(b, a).unwrap() {
                    prop_assert_eq!(a, b);
                }
                for c in &frs {
                    if is_fragment(a, b).unwrap() && is_fragment(b, c).unwrap() {
                        prop_assert!(is_fragment(a, c).unwrap());
                    }
                }
            }
        }
    }

    #[test]
    fn fragment_algebra_is_boolean((_s, x) in element_strategy(3)) {
        let frs = fragments(&x).unwrap();
        let zero = &frs[0];
        let full = &frs[frs.len() - 1];
        prop_assert!(zero.is_zero());
        prop_assert_eq!(full, &x);
        for z in &frs {
            // complement laws
            let zc = fragment_complement(&x, z).unwrap();
            prop_assert_eq!(&fragment_union(&x, z, &zc).unwrap(), &x);
            prop_assert!(fragment_intersect(&x, z, &zc).unwrap().is_zero());
            // identity elements
            prop_assert_eq!(&fragment_union(&x, z, zero).unwrap(), z);
            prop_assert_eq!(&fragment_intersect(&x, z, full).unwrap(), z);
            for y in &frs {
                // commutativity
                prop_assert_eq!(
                    fragment_union(&x, z, y).unwrap(),
                    fragment_union(&x, y, z).unwrap()
                );
                prop_assert_eq!(
                    fragment_intersect(&x, z, y).unwrap(),
                    fragment_intersect(&x, y, z).unwrap()
                );
                // absorption
                let u = fragment_union(&x, z, y).unwrap();
                prop_assert_eq!(&fragment_intersect(&x, z, &u).unwrap(), z);
            }
        }
    }

    #[test]
    fn fragment_ops_agree_with_support_masks((_s, x) in element_strategy(3)) {
        // the map A ↦ x|_A is a Boolean isomorphism: operations computed by
        // the lattice formulas must equal mask union/intersection/complement
        let frs = fragments(&x).unwrap();
        let full = frs.len() - 1;
        for (i, z) in frs.iter().enumerate() {
            prop_assert_eq!(&fragment_complement(&x, z).unwrap(), &frs[full ^ i]);
            for (j, y) in frs.iter().enumerate() {
                prop_assert_eq!(&fragment_union(&x, z, y).unwrap(), &frs[i | j]);
                prop_assert_eq!(&fragment_intersect(&x, z, y).unwrap(), &frs[i & j]);
            }
        }
    }
}

//! Print/parse round trip and lattice closure of the kernel expression
//! language.

use proptest::prelude::*;

use latop_core::expr::{parse, Expr};
use latop_core::rat::{rat, Rat};

fn lit_strategy() -> impl Strategy<Value = Expr> {
    (-30i64..=30, 1i64..=12).prop_map(|(n, d)| Expr::lit(rat(n, d)))
}

/// Canonical ASTs: everything the parser can produce. A negation applied
/// directly to a literal folds into the literal at parse time, so the
/// generator folds it too.
fn expr_strategy() -> impl Strategy<Value = Expr> {
    let leaf = prop_oneof![lit_strategy(), Just(Expr::var())];
    leaf.prop_recursive(4, 48, 3, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::add(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::sub(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::mul(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::min_of(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::max_of(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::div_of(a, b)),
            inner.clone().prop_map(Expr::abs_of),
            inner.clone().prop_map(|e| match e {
                Expr::Lit(q) => Expr::lit(-q),
                other => Expr::neg(other),
            }),
            (inner.clone(), 0u32..5).prop_map(|(e, k)| Expr::pow_of(e, k)),
            (inner.clone(), inner.clone(), inner).prop_map(|(c, a, b)| Expr::ifzero(c, a, b)),
        ]
    })
}

/// Division-free expressions, total everywhere.
fn total_expr_strategy() -> impl Strategy<Value = Expr> {
    let leaf = prop_oneof![lit_strategy(), Just(Expr::var())];
    leaf.prop_recursive(3, 24, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::add(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::sub(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::mul(a, b)),
            inner.clone().prop_map(Expr::abs_of),
            (inner.clone(), 0u32..4).prop_map(|(e, k)| Expr::pow_of(e, k)),
        ]
    })
}

proptest! {
    #[test]
    fn print_parse_round_trip(e in expr_strategy()) {
        let printed = format!("{e}");
        let reparsed = parse(&printed).unwrap();
        prop_assert_eq!(e, reparsed, "printed as `{}`", printed);
    }

    #[test]
    fn eval_is_deterministic(e in total_expr_strategy(), n in -15i64..=15, d in 1i64..=6) {
        let r = rat(n, d);
        prop_assert_eq!(e.eval(&r).unwrap(), e.eval(&r).unwrap());
    }

    #[test]
    fn lattice_closure(a in total_expr_strategy(), b in total_expr_strategy(), n in -15i64..=15, d in 1i64..=6) {
        // max/min/abs of expressions evaluate to pointwise lattice operations
        let r = rat(n, d);
        let va = a.eval(&r).unwrap();
        let vb = b.eval(&r).unwrap();
        prop_assert_eq!(
            Expr::max_of(a.clone(), b.clone()).eval(&r).unwrap(),
            latop_core::rat::max(&va, &vb)
        );
        prop_assert_eq!(
            Expr::min_of(a.clone(), b.clone()).eval(&r).unwrap(),
            latop_core::rat::min(&va, &vb)
        );
        prop_assert_eq!(Expr::abs_of(a).eval(&r).unwrap(), num_traits::Signed::abs(&va));
        let _ = Rat::from_integer(0.into());
    }
}

use clonebench::clones::{generate, CloneCaps, TableOp};
use clonebench::equations::{collapse_in_projections, satisfiable_in_clone, satisfiable_in_projections, EquationSystem};
use clonebench::lifting::find_equalizers;
use clonebench::operation::LexRealizer;
use clonebench::plmap::PLMap;
use clonebench::qclone::{compose_members, make_member, xi, QFunction};
use clonebench::rational::{frac, int, Rational};
use clonebench::structures::{automorphisms, orbits, pattern_of, FiniteStructure, StructureCaps, SymbolicStructure};
use clonebench::term::Term;
use proptest::prelude::*;

fn rational() -> impl Strategy<Value = Rational> {
    (-20i64..20, 1i64..5).prop_map(|(n, d)| frac(n, d))
}

/// Increasing map through sorted breakpoints with positive slopes.
fn plmap() -> impl Strategy<Value = PLMap> {
    prop::collection::vec((1i64..4, 1i64..4), 1..5).prop_map(|steps| {
        let mut points = vec![(int(0), int(0))];
        for (dx, dy) in steps {
            let (x, y) = points.last().unwrap().clone();
            points.push((x + int(dx), y + frac(dy, 2)));
        }
        PLMap::interpolate(&points).unwrap()
    })
}

fn term(symbols: usize, vars: usize) -> impl Strategy<Value = Term> {
    let leaf = (0..vars).prop_map(Term::var);
    leaf.prop_recursive(3, 12, 2, move |inner| {
        (0..symbols, inner.clone(), inner).prop_map(|(f, a, b)| Term::app(f, vec![a, b]))
    })
}

fn kind() -> impl Strategy<Value = SymbolicStructure> {
    prop_oneof![Just(SymbolicStructure::DenseLinearOrder), Just(SymbolicStructure::PureSet)]
}

fn all_tuples(n: usize, k: usize) -> Vec<Vec<usize>> {
    (0..n.pow(k as u32))
        .map(|mut code| {
            (0..k)
                .map(|_| {
                    let d = code % n;
                    code /= n;
                    d
                })
                .collect()
        })
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn collapse_commutes_with_substitution(
        t in term(2, 2), a in term(2, 3), b in term(2, 3), sigma in prop::collection::vec(0usize..2, 2)
    ) {
        let args = [a, b];
        let s = t.substitute(&args);
        prop_assert_eq!(s.collapse(&sigma), args[t.collapse(&sigma)].collapse(&sigma));
    }

    #[test]
    fn projections_match_selector_clone(
        eqs in prop::collection::vec((term(2, 3), term(2, 3)), 1..3)
    ) {
        let symbols = vec![("f".to_string(), 2), ("g".to_string(), 2)];
        let sys = EquationSystem::new(symbols, eqs).unwrap();
        let verdict = satisfiable_in_projections(&sys).unwrap();
        if let clonebench::equations::ProjectionVerdict::Satisfiable(sigma) = &verdict {
            prop_assert!(collapse_in_projections(&sys, sigma).iter().all(|&b| b));
        }
        let projections = generate(2, vec![("x1".into(), TableOp::selector(2, 2, 0))],
            CloneCaps { max_arity: 3, max_depth: 2, max_catalog: 100 }).unwrap();
        let in_clone = satisfiable_in_clone(&sys, &projections).unwrap();
        prop_assert_eq!(verdict.is_satisfiable(), in_clone.assignment().is_some());
    }

    #[test]
    fn equalizers_exist_iff_patterns_agree(
        kind in kind(), s in prop::collection::vec(-3i64..3, 1..6), shift in prop::collection::vec(-3i64..3, 6)
    ) {
        let s: Vec<Rational> = s.into_iter().map(int).collect();
        let t: Vec<Rational> = s.iter().zip(&shift).map(|(x, d)| x + int(*d)).collect();
        let eq = find_equalizers(&s, &t, kind);
        prop_assert_eq!(eq.is_some(), pattern_of(kind, &s) == pattern_of(kind, &t));
        if let Some((a, b)) = eq {
            prop_assert_eq!(a.apply_all(&s), b.apply_all(&t));
        }
    }

    #[test]
    fn plmap_compose_and_inverse(f in plmap(), g in plmap(), x in rational()) {
        prop_assert_eq!(f.compose(&g).eval(&x), f.eval(&g.eval(&x)));
        let inv = f.inverse().unwrap();
        prop_assert_eq!(inv.eval(&f.eval(&x)), x.clone());
        prop_assert_eq!(f.eval(&inv.eval(&x)), x);
    }

    #[test]
    fn patterns_survive_increasing_maps(f in plmap(), xs in prop::collection::vec(rational(), 0..6)) {
        let ys = f.eval_all(&xs);
        prop_assert_eq!(pattern_of(SymbolicStructure::DenseLinearOrder, &xs),
                        pattern_of(SymbolicStructure::DenseLinearOrder, &ys));
    }

    #[test]
    fn lex_realizer_is_order_preserving(pairs in prop::collection::vec((rational(), rational()), 1..12)) {
        let mut session = LexRealizer::default();
        let (head, tail) = pairs.split_at(pairs.len() / 2);
        let mut values = session.realize(head);
        values.extend(session.realize(tail));
        for (i, p) in pairs.iter().enumerate() {
            for (j, q) in pairs.iter().enumerate() {
                prop_assert_eq!(p.cmp(q), values[i].cmp(&values[j]));
            }
        }
    }

    #[test]
    fn member_composites_are_increasing_and_eventually_selective(
        a in -3i64..3, b in -3i64..3, i in 0usize..2, j in 0usize..2, u in prop::collection::vec(rational(), 2), d in 1i64..6
    ) {
        let f = make_member("f", 2, i, int(a), PLMap::translation(int(1)), &[]).unwrap();
        let g = make_member("g", 2, j, int(b), PLMap::affine(int(2), int(0)), &[]).unwrap();
        let c = compose_members(&f, &[g, QFunction::selector(2, 1).unwrap()]).unwrap();
        let v: Vec<Rational> = u.iter().map(|x| x + frac(d, 3)).collect();
        prop_assert!(c.eval(&u) < c.eval(&v));
        let expected = if i == 0 { j } else { 1 };
        prop_assert_eq!(xi(&c).unwrap(), expected);
        // beyond the threshold only the eventual coordinate matters
        let far = c.threshold() + int(1);
        let mut w = vec![far.clone(); 2];
        let base = c.eval(&w);
        w[expected] = far.clone() + int(1);
        w[1 - expected] = far + int(5);
        prop_assert_eq!(c.eval(&w), c.eventual_map().eval(&(c.threshold() + int(2))));
        prop_assert!(c.eval(&w) > base);
    }

    #[test]
    fn orbit_types_are_automorphism_invariant(
        n in 2usize..5, edges in prop::collection::vec((0usize..5, 0usize..5), 0..6), k in 1usize..3
    ) {
        let edges: Vec<Vec<usize>> = edges.into_iter().filter(|&(a, b)| a < n && b < n).map(|(a, b)| vec![a, b]).collect();
        let s = FiniteStructure::new(n).unwrap().with_relation("E", 2, edges).unwrap();
        let types = orbits(&s, k, &StructureCaps::default()).unwrap();
        let autos = automorphisms(&s);
        for tuple in all_tuples(n, k) {
            let t = types.classify(&tuple);
            for p in &autos {
                prop_assert_eq!(types.classify(&p.apply_tuple(&tuple)), t);
            }
        }
    }
}

//! Satisfiability in the projection clone, in a finite clone, and modulo outside maps.
use clonebench::clones::{generate, CloneCaps, TableOp};
use clonebench::equations::{
    parse_equations, satisfiable_in_clone, satisfiable_in_projections, satisfiable_modulo_outside, verify_in_clone, verify_modulo_outside,
};

fn main() -> clonebench::Result<()> {
    for (name, text) in [
        ("siggers", include_str!("../data/siggers.eqs")),
        ("swap", include_str!("../data/swap.eqs")),
        ("symmetric", include_str!("../data/symmetric.eqs")),
    ] {
        let sys = parse_equations(text)?;
        println!("{name}: in projections {:?}", satisfiable_in_projections(&sys)?);
    }
    let min = TableOp::from_fn(2, 2, |a| a[0].min(a[1]))?;
    let clone = generate(2, vec![("min".into(), min)], CloneCaps { max_arity: 3, max_depth: 4, max_catalog: 1000 })?;
    let sys = parse_equations(include_str!("../data/symmetric.eqs"))?;
    if let Some(a) = satisfiable_in_clone(&sys, &clone)?.assignment() {
        println!("symmetric in <min>: f -> {}", a.terms[0].display(&clone.generator_names()));
    }
    // f(x) = x and f(x) = n(x) fail as tables but hold after a swap on one side
    let swap = TableOp::from_fn(2, 1, |a| 1 - a[0])?;
    let unary = generate(2, vec![("n".into(), swap.clone())], CloneCaps { max_arity: 1, max_depth: 2, max_catalog: 10 })?;
    let sys = parse_equations("sig f 1\nsig g 1\neq f(x1) = x1\neq f(x1) = g(x1)\n")?;
    let outside = [TableOp::selector(2, 1, 0), swap];
    let ops = [outside[0].clone(), outside[1].clone()];
    println!("f = id, g = swap as tables: {}", verify_in_clone(&sys, &ops, 2)?);
    println!(
        "f = id, g = swap modulo {{id, swap}}: {}",
        verify_modulo_outside(&sys, &ops, &outside, &[(0, 0), (1, 0)], 2)?
    );
    let found = satisfiable_modulo_outside(&sys, &unary, &outside)?;
    println!("first solution found: {:?}", found.assignment().map(|a| (&a.terms, &a.outside)));
    Ok(())
}

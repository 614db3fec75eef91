//! Canonicity checks: lex is canonical over (Q,<), min is not.
use clonebench::canonical::{is_canonical_finite, is_canonical_symbolic, CanonCaps, Verdict};
use clonebench::clones::TableOp;
use clonebench::operation::Operation;
use clonebench::structures::{parse_structure, pattern_of, StructureCaps, SymbolicStructure};

fn main() -> clonebench::Result<()> {
    let dlo = SymbolicStructure::DenseLinearOrder;
    let caps = CanonCaps::default();
    let lex = Operation::lex();
    let v = is_canonical_symbolic(lex.as_term().unwrap(), 2, dlo, 3, &caps)?;
    println!("lex over (Q,<), k <= 3: canonical = {}", v.is_canonical());

    let min = Operation::min();
    let term = min.as_term().unwrap();
    if let Verdict::NotCanonical(c) = is_canonical_symbolic(term, 2, dlo, 3, &caps)? {
        println!("min: {c}");
        // the counterexample re-checks by direct evaluation
        let first = pattern_of(dlo, &term.eval_tuples(&c.first));
        let second = pattern_of(dlo, &term.eval_tuples(&c.second));
        println!("  re-evaluated images: {first} vs {second}");
        for (i, a) in c.alphas.iter().enumerate() {
            println!("  alpha{}: {}", i + 1, a.to_lines().join("; "));
        }
    }

    let cycle = parse_structure(include_str!("../data/cycle3.struct"))?;
    let plus = TableOp::from_fn(3, 2, |a| (a[0] + a[1]) % 3)?;
    let max = TableOp::from_fn(3, 2, |a| a[0].max(a[1]))?;
    for (name, op) in [("x+y mod 3", &plus), ("max", &max)] {
        let v = is_canonical_finite(op, &cycle, 3, &StructureCaps::default())?;
        println!("{name} on the 3-cycle: canonical = {}", v.is_canonical());
    }
    Ok(())
}

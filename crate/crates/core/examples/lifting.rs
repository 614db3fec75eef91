//! Lifting associativity of lex to automorphism witnesses over A_j = {0..j}.
use clonebench::canonical::CanonCaps;
use clonebench::equations::parse_equations;
use clonebench::lifting::{approximate_accumulation, default_sets, lift, lift_unchecked, LiftInstance};
use clonebench::operation::Operation;
use clonebench::structures::SymbolicStructure;
use clonebench::term::Term;

fn main() -> clonebench::Result<()> {
    let kind = SymbolicStructure::DenseLinearOrder;
    let system = parse_equations(include_str!("../data/assoc.eqs"))?;
    let instance = LiftInstance {
        kind,
        generators: vec![Operation::lex()],
        system,
        assignment: vec![Term::basic(0, 2)],
    };
    let witnesses = lift(&instance, &default_sets(4), &CanonCaps::default())?;
    for (j, w) in witnesses.iter().enumerate() {
        let (a, b) = &w.maps[0];
        println!("A_{}: {} columns, alpha_s has {} pieces, alpha_t has {}", j + 1, w.columns, a.to_lines().len(), b.to_lines().len());
    }
    let acc = approximate_accumulation(&witnesses, 2, kind)?;
    println!("stable pattern {} on {:?}", acc.pattern, acc.indices);

    // commutativity does not hold in the type clone, so no equalizers exist
    let comm = LiftInstance {
        system: parse_equations(include_str!("../data/comm.eqs"))?,
        ..instance
    };
    println!("{}", lift_unchecked(&comm, &default_sets(1)).unwrap_err());
    Ok(())
}

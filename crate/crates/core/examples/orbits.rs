//! Orbits of tuples under the automorphism group, finite and symbolic.
use clonebench::structures::{
    automorphisms, enumerate_patterns, orbits, parse_structure, StructureCaps, SymbolicStructure,
};

fn main() -> clonebench::Result<()> {
    let caps = StructureCaps::default();
    let cycle = parse_structure(include_str!("../data/cycle3.struct"))?;
    println!("directed 3-cycle: {} automorphisms", automorphisms(&cycle).len());
    for k in 1..=3 {
        let types = orbits(&cycle, k, &caps)?;
        let labels: Vec<String> = types.ids().map(|t| types.label(t)).collect();
        println!("  k={k}: {} orbits {}", types.len(), labels.join(" "));
    }
    for kind in [SymbolicStructure::DenseLinearOrder, SymbolicStructure::PureSet] {
        for k in 1..=3 {
            let types = enumerate_patterns(kind, k, &caps)?;
            println!("{} k={k}: {} types", kind.name(), types.len());
        }
    }
    let dlo = enumerate_patterns(SymbolicStructure::DenseLinearOrder, 2, &caps)?;
    for t in dlo.ids() {
        println!("  {t}: {}", dlo.label(t));
    }
    Ok(())
}

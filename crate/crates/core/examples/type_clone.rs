//! Type images of lex, the homomorphism law, and the factor map between k = 2 and k = 3.
use clonebench::canonical::{
    check_factor_isomorphism, check_homomorphism_law, type_image, xi_infty, CanonCaps,
};
use clonebench::clones::CloneCaps;
use clonebench::operation::Operation;
use clonebench::structures::{Structure, SymbolicStructure};

fn main() -> clonebench::Result<()> {
    let caps = CanonCaps::default();
    let s = Structure::Symbolic(SymbolicStructure::DenseLinearOrder);
    let gens = [Operation::lex()];
    let types = s.type_space(2, &caps.structure)?;
    let img = type_image(&gens[0], &s, 2, &caps)?;
    println!("lex on 2-types:");
    for a in types.ids() {
        let row: Vec<String> = types
            .ids()
            .map(|b| types.label(clonebench::structures::TypeId(img.op.eval(&[a.0, b.0]))))
            .collect();
        println!("  {:>8} | {}", types.label(a), row.join(" | "));
    }
    let law = check_homomorphism_law(&gens, &s, 2, 2, 3, &caps)?;
    println!("homomorphism law: {} binary terms up to depth 3, mismatch = {:?}", law.terms_checked, law.mismatch);
    let clone_caps = CloneCaps { max_arity: 2, max_depth: 4, max_catalog: 10_000 };
    let f = check_factor_isomorphism(&gens, &s, 2, 3, &caps, clone_caps)?;
    println!("factor map k'=3 -> k=2: {} entries, consistent = {}", f.entries_checked, f.is_consistent());
    for (name, t) in xi_infty(&gens, &s, &caps)? {
        println!("xi_infty({name}) = [{}]", t.op.render_table());
    }
    Ok(())
}

//! Projective homomorphisms: refuted for <min>, found for the type clone of lex over (Q,<).
use clonebench::canonical::{xi_infty, CanonCaps};
use clonebench::clones::{generate, CloneCaps, TableOp};
use clonebench::equations::{has_projective_homomorphism, satisfiable_in_clone, satisfiable_in_projections, ProjHomOutcome};
use clonebench::operation::Operation;
use clonebench::structures::{Structure, SymbolicStructure};

fn main() -> clonebench::Result<()> {
    let caps = CloneCaps { max_arity: 3, max_depth: 4, max_catalog: 10_000 };
    let min = TableOp::from_fn(2, 2, |a| a[0].min(a[1]))?;
    let clone = generate(2, vec![("min".into(), min)], caps)?;
    if let ProjHomOutcome::Refuted { witness } = has_projective_homomorphism(&clone)? {
        print!("<min> refuted by\n{witness}");
        println!(
            "  in clone: {}, in projections: {}",
            satisfiable_in_clone(&witness, &clone)?.assignment().is_some(),
            satisfiable_in_projections(&witness)?.is_satisfiable()
        );
    }
    for kind in [SymbolicStructure::DenseLinearOrder, SymbolicStructure::PureSet] {
        let s = Structure::Symbolic(kind);
        let images = xi_infty(&[Operation::lex()], &s, &CanonCaps::default())?;
        let base = images[0].1.op.base();
        let clone = generate(base, images.into_iter().map(|(n, t)| (n, t.op)).collect(), caps)?;
        println!("type clone of lex over {}: {:?}", kind.name(), has_projective_homomorphism(&clone)?);
    }
    Ok(())
}

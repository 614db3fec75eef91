//! Command-line front end. `run` returns an exit code and the report text.
//!
//! Exit codes: 0 success, 1 a negative mathematical answer, 2 bad input,
//! 3 a cap was hit before an answer was reached.

use std::fmt::Write as _;
use std::fs;

use clap::{Args, Parser, Subcommand};

use crate::canonical::{
    is_canonical_finite, is_canonical_symbolic, type_image, xi_infty, CanonCaps, Verdict,
};
use crate::clones::{generate, CloneCaps, FiniteClone, TableOp};
use crate::equations::{
    has_projective_homomorphism, parse_equations, satisfiable_in_clone, satisfiable_in_projections,
    satisfiable_modulo_outside, CloneVerdict, EquationSystem, ProjHomOutcome, ProjectionVerdict,
};
use crate::error::{Error, Result};
use crate::lifting::{
    analyze_transfer, approximate_accumulation, default_sets, lift, LiftInstance, TransferConfig,
};
use crate::operation::{parse_operations, Operation, OperationBody};
use crate::qclone::{noncontinuity_demo, uniqueness_witnesses, xi};
use crate::rational::{self, Rational};
use crate::structures::{
    automorphisms, parse_structure, Structure, StructureCaps, SymbolicStructure,
};

#[derive(Parser, Debug)]
#[command(name = "clonebench", about = "Canonical clones, type clones and equation satisfiability")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    opts: Opts,
}

#[derive(Args, Debug, Clone)]
struct Opts {
    /// Tuple length for orbits and type images.
    #[arg(long, global = true, default_value_t = 2)]
    k: usize,
    /// Largest k for canonicity checks (default: max(m, 3)).
    #[arg(long, global = true)]
    kmax: Option<usize>,
    #[arg(long = "arity-cap", global = true, default_value_t = 3)]
    arity_cap: usize,
    #[arg(long = "depth-cap", global = true, default_value_t = 4)]
    depth_cap: usize,
    #[arg(long = "catalog-cap", global = true, default_value_t = 100_000)]
    catalog_cap: usize,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Also write the report to this file.
    #[arg(long, global = true)]
    out: Option<String>,
    /// Number of sets A_1..A_J for lifting.
    #[arg(long, global = true, default_value_t = 3)]
    depth: usize,
    #[arg(long, global = true, default_value_t = 5)]
    samples: usize,
    /// Arity for the non-continuity demonstration.
    #[arg(long, global = true, default_value_t = 2)]
    n: usize,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Orbits of k-tuples of a structure.
    Orbits { structure: String },
    /// Canonicity of every operation in a file.
    Canonical { structure: String, ops: String },
    /// Tables of the operations on k-types.
    TypeImage { structure: String, ops: String },
    /// Satisfiability of an equation system in the clone of the operations.
    Sat { equations: String, structure: String, ops: String },
    /// Satisfiability of an equation system in the projection clone.
    Sat1 { equations: String },
    /// Satisfiability modulo unary maps applied from the outside.
    SatMod {
        equations: String,
        structure: String,
        ops: String,
        /// Unary concrete maps (default: automorphisms, or the identity on types).
        #[arg(long)]
        outside: Option<String>,
    },
    /// Projective-homomorphism analysis of the generated clone.
    ProjHom { structure: String, ops: String },
    /// Lift a type-clone solution of Σ to witnesses over A_1..A_J.
    Lift { equations: String, structure: String, ops: String },
    /// Type images, projective homomorphism and lifting in one run.
    Analyze { structure: String, ops: String },
    /// Non-continuity and uniqueness demonstration on the rationals.
    Qdemo,
}

/// Runs one command line (including the program name).
pub fn run<I, S>(argv: I) -> (i32, String)
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            return (code, e.render().to_string());
        }
    };
    let mut report = header(&cli);
    let code = match execute(&cli, &mut report) {
        Ok(code) => code,
        Err(e) => {
            writeln!(report, "error: {e}").unwrap();
            exit_code(&e)
        }
    };
    if let Some(path) = &cli.opts.out {
        if let Err(e) = fs::write(path, &report) {
            writeln!(report, "error: cannot write {path}: {e}").unwrap();
            return (2, report);
        }
    }
    (code, report)
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::CapExceeded { .. } => 3,
        Error::NotCanonical { .. } | Error::Equalizer(_) => 1,
        _ => 2,
    }
}

fn header(cli: &Cli) -> String {
    let o = &cli.opts;
    let kmax = o.kmax.map_or_else(|| "default".to_string(), |k| k.to_string());
    format!(
        "# command: {:?}\n# config: k={} kmax={} arity-cap={} depth-cap={} catalog-cap={} seed={} depth={} samples={} n={}\n",
        cli.command, o.k, kmax, o.arity_cap, o.depth_cap, o.catalog_cap, o.seed, o.depth, o.samples, o.n
    )
}

fn read(path: &str) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::syntax(0, format!("cannot read {path}: {e}")))
}

/// `dlo` and `pureset` name the symbolic structures; anything else is a file.
fn load_structure(arg: &str) -> Result<Structure> {
    match arg {
        "dlo" => Ok(Structure::Symbolic(SymbolicStructure::DenseLinearOrder)),
        "pureset" => Ok(Structure::Symbolic(SymbolicStructure::PureSet)),
        path => Ok(Structure::Finite(parse_structure(&read(path)?)?)),
    }
}

fn load_ops(path: &str, s: &Structure) -> Result<Vec<Operation>> {
    let domain = match s {
        Structure::Finite(f) => Some(f.domain_size()),
        Structure::Symbolic(_) => None,
    };
    Ok(parse_operations(&read(path)?, domain)?.operations)
}

fn canon_caps(o: &Opts) -> CanonCaps {
    CanonCaps {
        k_max: o.kmax,
        ..CanonCaps::default()
    }
}

fn clone_caps(o: &Opts) -> Result<CloneCaps> {
    if o.arity_cap == 0 || o.depth_cap == 0 || o.catalog_cap == 0 {
        return Err(Error::Arity("caps must be positive".into()));
    }
    Ok(CloneCaps {
        max_arity: o.arity_cap,
        max_depth: o.depth_cap,
        max_catalog: o.catalog_cap,
    })
}

/// The clone the equation commands work in: concrete tables over a finite
/// structure, the type clone at `k = m` over a symbolic one.
fn working_clone(s: &Structure, ops: &[Operation], o: &Opts, out: &mut String) -> Result<FiniteClone> {
    let caps = clone_caps(o)?;
    match s {
        Structure::Finite(f) => {
            let gens = ops
                .iter()
                .map(|op| {
                    op.as_table()
                        .cloned()
                        .map(|t| (op.name.clone(), t))
                        .ok_or_else(|| Error::Unsupported(format!("`{}` is not a table", op.name)))
                })
                .collect::<Result<Vec<_>>>()?;
            writeln!(out, "clone: generated by {} table(s) on {} elements", gens.len(), f.domain_size()).unwrap();
            generate(f.domain_size(), gens, caps)
        }
        Structure::Symbolic(_) => {
            let images = xi_infty(ops, s, &canon_caps(o))?;
            let base = s.type_space(s.stable_arity(), &StructureCaps::default())?.len();
            writeln!(
                out,
                "clone: type clone at k={} ({} types), generated by {} image(s)",
                s.stable_arity(),
                base,
                images.len()
            )
            .unwrap();
            generate(base, images.into_iter().map(|(n, t)| (n, t.op)).collect(), caps)
        }
    }
}

fn saturation_line(clone: &FiniteClone) -> String {
    let flags: Vec<String> = clone
        .catalogs()
        .iter()
        .map(|c| format!("{}:{}{}", c.arity, c.entries.len(), if c.saturated { "" } else { "+" }))
        .collect();
    format!(
        "catalogs (arity:size, + = not saturated): {}\nsaturated: {}",
        flags.join(" "),
        clone.is_saturated()
    )
}

fn execute(cli: &Cli, out: &mut String) -> Result<i32> {
    let o = &cli.opts;
    match &cli.command {
        Command::Orbits { structure } => cmd_orbits(structure, o, out),
        Command::Canonical { structure, ops } => cmd_canonical(structure, ops, o, out),
        Command::TypeImage { structure, ops } => cmd_type_image(structure, ops, o, out),
        Command::Sat { equations, structure, ops } => cmd_sat(equations, structure, ops, None, false, o, out),
        Command::SatMod { equations, structure, ops, outside } => {
            cmd_sat(equations, structure, ops, outside.as_deref(), true, o, out)
        }
        Command::Sat1 { equations } => cmd_sat1(equations, out),
        Command::ProjHom { structure, ops } => cmd_proj_hom(structure, ops, o, out),
        Command::Lift { equations, structure, ops } => cmd_lift(equations, structure, ops, o, out),
        Command::Analyze { structure, ops } => cmd_analyze(structure, ops, o, out),
        Command::Qdemo => cmd_qdemo(o, out),
    }
}

fn cmd_orbits(structure: &str, o: &Opts, out: &mut String) -> Result<i32> {
    let s = load_structure(structure)?;
    let types = s.type_space(o.k, &StructureCaps::default())?;
    writeln!(out, "structure: {}", s.describe()).unwrap();
    if let Structure::Finite(f) = &s {
        writeln!(out, "automorphisms: {}", automorphisms(f).len()).unwrap();
    }
    writeln!(out, "orbits of {}-tuples: {}", o.k, types.len()).unwrap();
    for t in types.ids() {
        writeln!(out, "{t} {}", types.label(t)).unwrap();
    }
    Ok(0)
}

fn cmd_canonical(structure: &str, ops: &str, o: &Opts, out: &mut String) -> Result<i32> {
    let s = load_structure(structure)?;
    let ops = load_ops(ops, &s)?;
    let caps = canon_caps(o);
    let k_max = caps.k_max_for(&s);
    writeln!(out, "structure: {}\nchecked k = 1..={k_max}", s.describe()).unwrap();
    let mut code = 0;
    for op in &ops {
        match (&op.body, &s) {
            (OperationBody::Concrete(t), Structure::Finite(f)) => {
                match is_canonical_finite(t, f, k_max, &caps.structure)? {
                    Verdict::Canonical => writeln!(out, "{}: canonical", op.name).unwrap(),
                    Verdict::NotCanonical(c) => {
                        code = 1;
                        writeln!(out, "{}: not canonical, {c}", op.name).unwrap();
                        for (i, a) in c.alphas.iter().enumerate() {
                            writeln!(out, "  alpha{} = {:?}", i + 1, a.images()).unwrap();
                        }
                    }
                }
            }
            (OperationBody::Term(t), Structure::Symbolic(kind)) => {
                match is_canonical_symbolic(t, op.arity, *kind, k_max, &caps)? {
                    Verdict::Canonical => writeln!(out, "{}: canonical", op.name).unwrap(),
                    Verdict::NotCanonical(c) => {
                        code = 1;
                        writeln!(out, "{}: not canonical, {c}", op.name).unwrap();
                        for (i, a) in c.alphas.iter().enumerate() {
                            writeln!(out, "  alpha{}: {}", i + 1, a.to_lines().join("; ")).unwrap();
                        }
                    }
                }
            }
            _ => {
                return Err(Error::Unsupported(format!(
                    "operation `{}` does not act on {}",
                    op.name,
                    s.describe()
                )))
            }
        }
    }
    Ok(code)
}

fn cmd_type_image(structure: &str, ops: &str, o: &Opts, out: &mut String) -> Result<i32> {
    let s = load_structure(structure)?;
    let ops = load_ops(ops, &s)?;
    let caps = canon_caps(o);
    let types = s.type_space(o.k, &caps.structure)?;
    writeln!(out, "structure: {}\n{}-types: {}", s.describe(), o.k, types.len()).unwrap();
    for t in types.ids() {
        writeln!(out, "{t} {}", types.label(t)).unwrap();
    }
    for op in &ops {
        let img = type_image(op, &s, o.k, &caps)?;
        writeln!(out, "image of {} (arity {}):", op.name, op.arity).unwrap();
        write_table(out, &img.op);
    }
    Ok(0)
}

fn write_table(out: &mut String, t: &TableOp) {
    let mut args = vec![0usize; t.arity()];
    loop {
        let ins: Vec<String> = args.iter().map(|a| format!("t{a}")).collect();
        writeln!(out, "  {} -> t{}", ins.join(" "), t.eval(&args)).unwrap();
        if !crate::clones::advance(&mut args, t.base()) {
            break;
        }
    }
}

fn write_assignment(out: &mut String, sys: &EquationSystem, clone: &FiniteClone, ops: &[TableOp], terms: &[crate::term::Term]) {
    let names = clone.generator_names();
    for ((name, op), term) in sys.names.iter().zip(ops).zip(terms) {
        writeln!(out, "  {name} -> {} [table {}]", term.display(&names), op.render_table()).unwrap();
    }
}

fn default_outside(s: &Structure, clone: &FiniteClone) -> Vec<TableOp> {
    match s {
        Structure::Finite(f) => automorphisms(f)
            .iter()
            .map(|p| TableOp::new(f.domain_size(), 1, p.images().to_vec()).unwrap())
            .collect(),
        Structure::Symbolic(_) => vec![TableOp::selector(clone.base(), 1, 0)],
    }
}

fn cmd_sat(
    equations: &str,
    structure: &str,
    ops: &str,
    outside: Option<&str>,
    modulo: bool,
    o: &Opts,
    out: &mut String,
) -> Result<i32> {
    let sys = parse_equations(&read(equations)?)?;
    let s = load_structure(structure)?;
    let ops = load_ops(ops, &s)?;
    writeln!(out, "structure: {}\nsystem ({} equation(s), common arity {}):", s.describe(), sys.len(), sys.arity).unwrap();
    for i in 0..sys.len() {
        writeln!(out, "  {}", sys.display_equation(i)).unwrap();
    }
    let clone = working_clone(&s, &ops, o, out)?;
    writeln!(out, "{}", saturation_line(&clone)).unwrap();
    let verdict = if modulo {
        let outside_ops = match outside {
            Some(path) => {
                let Structure::Finite(f) = &s else {
                    return Err(Error::Unsupported("--outside needs a finite structure".into()));
                };
                parse_operations(&read(path)?, Some(f.domain_size()))?
                    .operations
                    .iter()
                    .map(|op| {
                        op.as_table()
                            .cloned()
                            .ok_or_else(|| Error::Unsupported(format!("`{}` is not a table", op.name)))
                    })
                    .collect::<Result<Vec<_>>>()?
            }
            None => default_outside(&s, &clone),
        };
        writeln!(out, "outside maps: {}", outside_ops.len()).unwrap();
        satisfiable_modulo_outside(&sys, &clone, &outside_ops)?
    } else {
        satisfiable_in_clone(&sys, &clone)?
    };
    Ok(match verdict {
        CloneVerdict::Satisfiable(a) => {
            writeln!(out, "satisfiable{}", if modulo { " modulo the outside maps" } else { "" }).unwrap();
            write_assignment(out, &sys, &clone, &a.ops, &a.terms);
            for (i, (bs, bt)) in a.outside.iter().enumerate() {
                writeln!(out, "  equation {}: beta_s = #{bs}, beta_t = #{bt}", i + 1).unwrap();
            }
            0
        }
        CloneVerdict::NotFound { saturated: true } => {
            writeln!(out, "unsatisfiable (all catalogs used are saturated)").unwrap();
            1
        }
        CloneVerdict::NotFound { saturated: false } => {
            writeln!(out, "not found within caps (catalogs not saturated)").unwrap();
            3
        }
    })
}

fn cmd_sat1(equations: &str, out: &mut String) -> Result<i32> {
    let sys = parse_equations(&read(equations)?)?;
    writeln!(out, "system ({} equation(s), common arity {}):", sys.len(), sys.arity).unwrap();
    for i in 0..sys.len() {
        writeln!(out, "  {}", sys.display_equation(i)).unwrap();
    }
    Ok(match satisfiable_in_projections(&sys)? {
        ProjectionVerdict::Satisfiable(sigma) => {
            writeln!(out, "satisfiable in projections").unwrap();
            for (name, i) in sys.names.iter().zip(&sigma) {
                writeln!(out, "  {name} -> x{}", i + 1).unwrap();
            }
            0
        }
        ProjectionVerdict::Unsatisfiable(failures) => {
            writeln!(
                out,
                "unsatisfiable in projections, {}/{} assignments fail",
                failures.len(),
                failures.len()
            )
            .unwrap();
            for (sigma, eq) in &failures {
                let shown: Vec<String> = sys
                    .names
                    .iter()
                    .zip(sigma)
                    .map(|(n, i)| format!("{n}->x{}", i + 1))
                    .collect();
                writeln!(out, "  {} fails `{}`", shown.join(" "), sys.display_equation(*eq)).unwrap();
            }
            1
        }
    })
}

fn write_outcome(out: &mut String, clone: &FiniteClone, outcome: &ProjHomOutcome) -> i32 {
    match outcome {
        ProjHomOutcome::Found { sigma, survivors, saturated } => {
            let names = clone.generator_names();
            let shown: Vec<String> = names
                .iter()
                .zip(sigma)
                .map(|(n, i)| format!("{n} -> x{}", i + 1))
                .collect();
            writeln!(
                out,
                "projective homomorphism: found{} [{}], {survivors} surviving assignment(s)",
                if *saturated { "" } else { " (verified up to caps)" },
                shown.join(", ")
            )
            .unwrap();
            0
        }
        ProjHomOutcome::Refuted { witness } => {
            writeln!(out, "projective homomorphism: refuted; witness system:").unwrap();
            for i in 0..witness.len() {
                writeln!(out, "  {}", witness.display_equation(i)).unwrap();
            }
            1
        }
    }
}

fn cmd_proj_hom(structure: &str, ops: &str, o: &Opts, out: &mut String) -> Result<i32> {
    let s = load_structure(structure)?;
    let ops = load_ops(ops, &s)?;
    writeln!(out, "structure: {}", s.describe()).unwrap();
    let clone = working_clone(&s, &ops, o, out)?;
    writeln!(out, "{}", saturation_line(&clone)).unwrap();
    let outcome = has_projective_homomorphism(&clone)?;
    let code = write_outcome(out, &clone, &outcome);
    if let ProjHomOutcome::Refuted { witness } = &outcome {
        let in_clone = satisfiable_in_clone(witness, &clone)?.assignment().is_some();
        let in_projections = satisfiable_in_projections(witness)?.is_satisfiable();
        writeln!(
            out,
            "witness check: satisfiable in clone = {in_clone}, satisfiable in projections = {in_projections}"
        )
        .unwrap();
    }
    Ok(code)
}

fn render_points(xs: &[Rational]) -> String {
    rational::render_all(xs).replace(' ', ",")
}

fn write_witnesses(out: &mut String, sys: &EquationSystem, w: &[crate::lifting::WitnessTuple]) {
    for (j, t) in w.iter().enumerate() {
        writeln!(out, "A_{} = {{{}}}: {} columns verified", j + 1, render_points(&t.set), t.columns).unwrap();
        for (i, (a, b)) in t.maps.iter().enumerate() {
            writeln!(out, "  equation {}: {}", i + 1, sys.display_equation(i)).unwrap();
            writeln!(out, "    alpha_s: {}", a.to_lines().join("; ")).unwrap();
            writeln!(out, "    alpha_t: {}", b.to_lines().join("; ")).unwrap();
        }
    }
}

fn cmd_lift(equations: &str, structure: &str, ops: &str, o: &Opts, out: &mut String) -> Result<i32> {
    let sys = parse_equations(&read(equations)?)?;
    let s = load_structure(structure)?;
    let Structure::Symbolic(kind) = s else {
        return Err(Error::Unsupported("lifting needs `dlo` or `pureset`".into()));
    };
    let ops = load_ops(ops, &s)?;
    writeln!(out, "structure: {}", s.describe()).unwrap();
    let clone = working_clone(&s, &ops, o, out)?;
    let CloneVerdict::Satisfiable(a) = satisfiable_in_clone(&sys, &clone)? else {
        writeln!(out, "the system has no solution in the type clone within caps").unwrap();
        return Ok(1);
    };
    writeln!(out, "type-clone solution:").unwrap();
    write_assignment(out, &sys, &clone, &a.ops, &a.terms);
    let instance = LiftInstance {
        kind,
        generators: ops,
        system: sys.clone(),
        assignment: a.terms,
    };
    let witnesses = lift(&instance, &default_sets(o.depth), &canon_caps(o))?;
    write_witnesses(out, &sys, &witnesses);
    match approximate_accumulation(&witnesses, 2.min(o.depth + 1), kind) {
        Ok(acc) => writeln!(
            out,
            "stable joint pattern on {} point(s): {} at indices {:?}",
            acc.depth,
            acc.pattern,
            acc.indices.iter().map(|i| i + 1).collect::<Vec<_>>()
        )
        .unwrap(),
        Err(e) => writeln!(out, "accumulation: {e}").unwrap(),
    }
    Ok(0)
}

fn cmd_analyze(structure: &str, ops: &str, o: &Opts, out: &mut String) -> Result<i32> {
    let s = load_structure(structure)?;
    let ops = load_ops(ops, &s)?;
    let config = TransferConfig {
        canon: canon_caps(o),
        clone: clone_caps(o)?,
        lift_depth: o.depth,
        accumulation_depth: 2,
    };
    writeln!(out, "structure: {}", s.describe()).unwrap();
    let report = analyze_transfer(&s, &ops, &config)?;
    for (name, img) in &report.images {
        writeln!(out, "image of {name} on {}-types: [{}]", img.k, img.op.render_table()).unwrap();
    }
    writeln!(out, "{}", saturation_line(&report.clone)).unwrap();
    let code = write_outcome(out, &report.clone, &report.outcome);
    if let Some(l) = &report.lifted {
        writeln!(out, "lifted witness system over A_1..A_{}:", o.depth).unwrap();
        let names = report.clone.generator_names();
        for (name, t) in l.instance.system.names.iter().zip(&l.instance.assignment) {
            writeln!(out, "  {name} -> {}", t.display(&names)).unwrap();
        }
        write_witnesses(out, &l.instance.system, &l.witnesses);
        if let Some(acc) = &l.accumulation {
            writeln!(
                out,
                "stable joint pattern on {} point(s): {} at indices {:?}",
                acc.depth,
                acc.pattern,
                acc.indices.iter().map(|i| i + 1).collect::<Vec<_>>()
            )
            .unwrap();
        }
        writeln!(out, "satisfiable modulo the closure of the automorphisms on every A_j: yes").unwrap();
    }
    Ok(code)
}

fn cmd_qdemo(o: &Opts, out: &mut String) -> Result<i32> {
    let r = noncontinuity_demo(o.n, o.samples, o.seed)?;
    writeln!(out, "base member (eventual coordinate {}):", xi(&r.base)? + 1).unwrap();
    out.push_str(&r.base.describe());
    writeln!(out, "restriction to {} point(s):", r.restriction.len()).unwrap();
    for (p, y) in &r.restriction {
        writeln!(out, "  ({}) -> {}", render_points(p), rational::render(y)).unwrap();
    }
    writeln!(out, "extensions: {}", r.extensions.len()).unwrap();
    for (e, c) in r.extensions.iter().zip(&r.coordinates) {
        writeln!(
            out,
            "  {}: eventual coordinate {}, threshold {}, agrees on restriction: {}",
            e.name,
            c + 1,
            rational::render(e.threshold()),
            r.restriction.iter().all(|(p, y)| e.eval(p) == *y)
        )
        .unwrap();
    }
    writeln!(out, "all extensions agree: {}", r.agreement).unwrap();
    let grid: Vec<Rational> = (-5..5).map(rational::int).collect();
    let u = uniqueness_witnesses(&r.base, &grid)?;
    writeln!(
        out,
        "uniqueness witnesses: range floor {} (above threshold: {}), grid {} points, depends on coordinate {} only: {}",
        rational::render(&u.range_floors[0]),
        u.range_ok,
        u.grid_points,
        r.base.coordinate() + 1,
        u.grid_ok
    )
    .unwrap();
    Ok(if r.agreement && u.range_ok && u.grid_ok { 0 } else { 1 })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn usage_errors_exit_two() {
        let (code, text) = run(["clonebench", "frobnicate"]);
        assert_eq!(code, 2);
        assert!(text.contains("Usage"));
        let (code, _) = run(["clonebench", "orbits", "/nonexistent/file"]);
        assert_eq!(code, 2);
    }

    #[test]
    fn symbolic_orbits_and_qdemo() {
        let (code, text) = run(["clonebench", "orbits", "dlo", "--k", "3"]);
        assert_eq!(code, 0);
        assert!(text.contains("orbits of 3-tuples: 13"));
        let (code, text) = run(["clonebench", "qdemo", "--n", "2", "--samples", "5"]);
        assert_eq!(code, 0, "{text}");
        assert!(text.contains("extensions: 2"));
        assert_eq!(run(["clonebench", "qdemo"]).1, text);
    }
}

//! Acceptance suite: one PASS/FAIL line per criterion, exit status 1 on any failure.
//!
//! All comparisons are exact. Each line names the runtime limit it was held to.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::process::Command;
use std::time::{Duration, Instant};

use clonebench::canonical::{check_homomorphism_law, is_canonical_symbolic, CanonCaps, Verdict};
use clonebench::clones::{generate, CloneCaps, TableOp};
use clonebench::equations::{
    has_projective_homomorphism, parse_equations, satisfiable_in_clone, satisfiable_in_projections,
    satisfiable_modulo_outside, collapse_in_projections, CloneVerdict, EquationSystem, ProjHomOutcome,
    ProjectionVerdict,
};
use clonebench::lifting::{approximate_accumulation, default_sets, enumerate_argument_matrix, joint_pattern, lift, LiftInstance};
use clonebench::operation::{LexRealizer, Operation};
use clonebench::plmap::PLMap;
use clonebench::qclone::{
    compose_members, extend_restriction, make_member, noncontinuity_demo, random_rational,
    uniqueness_witnesses, xi, QFunction,
};
use clonebench::rational::{frac, int, Rational};
use clonebench::structures::{
    enumerate_patterns, orbits, pattern_of, FiniteStructure, Structure, StructureCaps, SymbolicStructure,
};
use clonebench::term::Term;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const DLO: SymbolicStructure = SymbolicStructure::DenseLinearOrder;
const PURE: SymbolicStructure = SymbolicStructure::PureSet;

type Check = Result<String, String>;
type Criterion = (usize, &'static str, u64, fn() -> Check);

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn err(e: clonebench::Error) -> String {
    e.to_string()
}

// ---------- criterion 1 ----------

/// Distinct comparison matrices of all maps [k] -> [k].
fn brute_types(k: usize, order: bool) -> usize {
    let mut seen = HashSet::new();
    let mut f = vec![0usize; k];
    loop {
        let matrix: Vec<std::cmp::Ordering> = (0..k)
            .flat_map(|i| (0..k).map(move |j| (i, j)))
            .map(|(i, j)| {
                let c = f[i].cmp(&f[j]);
                if order || c == std::cmp::Ordering::Equal {
                    c
                } else {
                    std::cmp::Ordering::Less
                }
            })
            .collect();
        seen.insert(matrix);
        let mut pos = k;
        loop {
            if pos == 0 {
                return seen.len();
            }
            pos -= 1;
            f[pos] += 1;
            if f[pos] < k {
                break;
            }
            f[pos] = 0;
        }
    }
}

fn criterion_1() -> Check {
    let caps = StructureCaps::default();
    let mut got = Vec::new();
    for (kind, expected, order) in [(DLO, [1, 3, 13], true), (PURE, [1, 2, 5], false)] {
        for k in 1..=3 {
            let n = enumerate_patterns(kind, k, &caps).map_err(err)?.len();
            let oracle = brute_types(k, order);
            ensure(
                n == expected[k - 1] && n == oracle,
                format!("{} k={k}: got {n}, oracle {oracle}", kind.name()),
            )?;
            got.push(n);
        }
    }
    Ok(format!("counts {got:?}"))
}

// ---------- criterion 2 ----------

fn graph(n: usize, edges: &[(usize, usize)], symmetric: bool) -> FiniteStructure {
    let mut tuples: Vec<Vec<usize>> = edges.iter().map(|&(a, b)| vec![a, b]).collect();
    if symmetric {
        tuples.extend(edges.iter().map(|&(a, b)| vec![b, a]));
    }
    FiniteStructure::new(n).unwrap().with_relation("E", 2, tuples).unwrap()
}

fn corpus() -> Vec<(&'static str, FiniteStructure)> {
    let petersen_edges: Vec<(usize, usize)> = (0..5)
        .flat_map(|i| [(i, (i + 1) % 5), (i, i + 5), (i + 5, (i + 2) % 5 + 5)])
        .collect();
    let betweenness: Vec<Vec<usize>> = (0..4).map(|i| vec![i, (i + 1) % 4, (i + 2) % 4]).collect();
    vec![
        ("directed 3-cycle", graph(3, &[(0, 1), (1, 2), (2, 0)], false)),
        ("path P4", graph(4, &[(0, 1), (1, 2), (2, 3)], true)),
        ("K_{2,3}", graph(5, &[(0, 2), (0, 3), (0, 4), (1, 2), (1, 3), (1, 4)], true)),
        ("Petersen", graph(10, &petersen_edges, true)),
        ("4-cycle", graph(4, &[(0, 1), (1, 2), (2, 3), (3, 0)], true)),
        ("directed path", graph(4, &[(0, 1), (1, 2), (2, 3)], false)),
        ("star K_{1,3}", graph(4, &[(0, 1), (0, 2), (0, 3)], true)),
        ("empty on 4", FiniteStructure::new(4).unwrap()),
        ("linear order on 3", graph(3, &[(0, 1), (0, 2), (1, 2)], false)),
        (
            "ternary cyclic relation on 4",
            FiniteStructure::new(4).unwrap().with_relation("R", 3, betweenness).unwrap(),
        ),
    ]
}

/// Every permutation of the domain, filtered by preservation of every relation.
fn brute_automorphisms(s: &FiniteStructure) -> Vec<Vec<usize>> {
    fn rec(n: usize, perm: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
        if perm.len() == n {
            out.push(perm.clone());
            return;
        }
        for v in 0..n {
            if !used[v] {
                used[v] = true;
                perm.push(v);
                rec(n, perm, used, out);
                perm.pop();
                used[v] = false;
            }
        }
    }
    let n = s.domain_size();
    let mut all = Vec::new();
    rec(n, &mut Vec::new(), &mut vec![false; n], &mut all);
    all.into_iter()
        .filter(|p| {
            s.relations().iter().all(|r| {
                let set: BTreeSet<&Vec<usize>> = r.tuples.iter().collect();
                r.tuples
                    .iter()
                    .all(|t| set.contains(&t.iter().map(|&x| p[x]).collect::<Vec<_>>()))
            })
        })
        .collect()
}

fn criterion_2() -> Check {
    let caps = StructureCaps::default();
    let mut total = 0;
    for (name, s) in corpus() {
        let autos = brute_automorphisms(&s);
        let n = s.domain_size();
        for k in 1..=3 {
            let types = orbits(&s, k, &caps).map_err(err)?;
            // orbit closure: class = smallest image of the tuple
            let mut classes: BTreeMap<Vec<usize>, Vec<usize>> = BTreeMap::new();
            let mut tuple = vec![0usize; k];
            loop {
                let least = autos
                    .iter()
                    .map(|p| tuple.iter().map(|&x| p[x]).collect::<Vec<_>>())
                    .min()
                    .unwrap();
                let t = types.classify(&tuple).ok_or(format!("{name}: tuple without type"))?;
                let rep = types.representative(t).to_vec();
                ensure(rep == least, format!("{name} k={k}: {tuple:?} typed {rep:?}, oracle {least:?}"))?;
                classes.entry(least).or_default();
                let mut pos = k;
                let mut done = true;
                while pos > 0 {
                    pos -= 1;
                    tuple[pos] += 1;
                    if tuple[pos] < n {
                        done = false;
                        break;
                    }
                    tuple[pos] = 0;
                }
                if done {
                    break;
                }
            }
            ensure(
                classes.len() == types.len(),
                format!("{name} k={k}: {} orbits, oracle {}", types.len(), classes.len()),
            )?;
            total += types.len();
        }
    }
    Ok(format!("10 structures, k <= 3, {total} orbits agree"))
}

// ---------- criterion 3 ----------

fn criterion_3() -> Check {
    let caps = CanonCaps::default();
    let lex = Operation::lex();
    let v = is_canonical_symbolic(lex.as_term().unwrap(), 2, DLO, 3, &caps).map_err(err)?;
    ensure(v.is_canonical(), "lex reported non-canonical")?;
    let min = Operation::min();
    let m = min.as_term().unwrap();
    let Verdict::NotCanonical(c) = is_canonical_symbolic(m, 2, DLO, 3, &caps).map_err(err)? else {
        return Err("min reported canonical".into());
    };
    for ((a, b), alpha) in c.first.iter().zip(&c.second).zip(&c.alphas) {
        ensure(pattern_of(DLO, a) == pattern_of(DLO, b), "argument patterns differ")?;
        ensure(alpha.apply_all(a) == *b, "alpha does not map the arguments")?;
    }
    let first = pattern_of(DLO, &m.eval_tuples(&c.first));
    let second = pattern_of(DLO, &m.eval_tuples(&c.second));
    ensure(first != second, "image patterns agree on re-evaluation")?;
    Ok(format!("lex canonical (k<=3); min: {c}"))
}

// ---------- criterion 4 ----------

fn criterion_4() -> Check {
    let caps = CanonCaps::default();
    let s = Structure::Symbolic(DLO);
    let gens = [Operation::lex()];
    let mut counts = Vec::new();
    for (k, arity, depth) in [(2, 1, 3), (2, 2, 3), (3, 2, 2)] {
        let r = check_homomorphism_law(&gens, &s, k, arity, depth, &caps).map_err(err)?;
        ensure(r.mismatch.is_none(), format!("k={k}: mismatch at {:?}", r.mismatch))?;
        counts.push(format!("k={k} arity={arity} depth<={depth}: {} terms", r.terms_checked));
    }
    Ok(counts.join(", "))
}

// ---------- criterion 5 ----------

fn criterion_5() -> Check {
    let siggers = parse_equations(include_str!("../data/siggers.eqs")).map_err(err)?;
    let ProjectionVerdict::Unsatisfiable(f) = satisfiable_in_projections(&siggers).map_err(err)? else {
        return Err("Siggers system satisfiable".into());
    };
    ensure(f.len() == 6, format!("{} failures, expected 6", f.len()))?;
    let comm = parse_equations(include_str!("../data/comm.eqs")).map_err(err)?;
    ensure(
        !satisfiable_in_projections(&comm).map_err(err)?.is_satisfiable(),
        "symmetry satisfiable",
    )?;
    let swap = parse_equations(include_str!("../data/swap.eqs")).map_err(err)?;
    let ProjectionVerdict::Satisfiable(sigma) = satisfiable_in_projections(&swap).map_err(err)? else {
        return Err("f(x,y,z)=g(y,x,z) rejected".into());
    };
    ensure(
        collapse_in_projections(&swap, &sigma).iter().all(|&b| b),
        "returned assignment does not verify",
    )?;
    Ok(format!("Siggers 6/6 fail, symmetry rejected, swap accepted with {sigma:?}"))
}

// ---------- criterion 6 ----------

fn criterion_6() -> Check {
    let min = TableOp::from_fn(2, 2, |a| a[0].min(a[1])).map_err(err)?;
    let clone = generate(2, vec![("min".into(), min)], CloneCaps { max_arity: 3, max_depth: 4, max_catalog: 10_000 })
        .map_err(err)?;
    let ProjHomOutcome::Refuted { witness } = has_projective_homomorphism(&clone).map_err(err)? else {
        return Err("no refutation".into());
    };
    let CloneVerdict::Satisfiable(a) = satisfiable_in_clone(&witness, &clone).map_err(err)? else {
        return Err("witness not satisfiable in the clone".into());
    };
    // re-evaluate the satisfying assignment directly on tables
    for e in &witness.equations {
        let eval = |t: &Term| {
            let ops: Vec<&TableOp> = a.ops.iter().collect();
            clonebench::clones::evaluate_term(t, &ops, 2, witness.arity).unwrap()
        };
        ensure(eval(&e.lhs) == eval(&e.rhs), "witness equation fails in the clone")?;
    }
    ensure(
        !satisfiable_in_projections(&witness).map_err(err)?.is_satisfiable(),
        "witness satisfiable in projections",
    )?;
    Ok(format!("witness: {}", (0..witness.len()).map(|i| witness.display_equation(i)).collect::<Vec<_>>().join("; ")))
}

// ---------- criterion 7 ----------

fn criterion_7() -> Check {
    let system = parse_equations(include_str!("../data/assoc.eqs")).map_err(err)?;
    let instance = LiftInstance {
        kind: DLO,
        generators: vec![Operation::lex()],
        system: system.clone(),
        assignment: vec![Term::basic(0, 2)],
    };
    let sets = default_sets(4);
    let witnesses = lift(&instance, &sets, &CanonCaps::default()).map_err(err)?;
    ensure(witnesses.len() == 4, "expected four witness tuples")?;
    // independent re-check: assoc sides built by hand from lex
    let lex = Operation::lex();
    let l = lex.as_term().unwrap();
    let x = |i| clonebench::operation::OrderTerm::var(i);
    let lhs = l.substitute(&[x(0), l.substitute(&[x(1), x(2)])]);
    let rhs = l.substitute(&[l.substitute(&[x(0), x(1)]), x(2)]);
    let mut columns = 0;
    for (set, w) in sets.iter().zip(&witnesses) {
        let rows = enumerate_argument_matrix(set, 3).map_err(err)?;
        let points: Vec<Vec<Rational>> = (0..rows[0].len())
            .map(|c| rows.iter().map(|r| r[c].clone()).collect())
            .collect();
        ensure(points.len() == set.len().pow(3), "column count")?;
        let mut session = LexRealizer::default();
        let s_val = lhs.eval_batch(&points, &mut session);
        let t_val = rhs.eval_batch(&points, &mut session);
        let (a_s, a_t) = &w.maps[0];
        for (u, v) in s_val.iter().zip(&t_val) {
            ensure(a_s.apply(u) == a_t.apply(v), "alpha_s(s) != alpha_t(t)")?;
        }
        columns += points.len();
    }
    let acc = approximate_accumulation(&witnesses, 2, DLO).map_err(err)?;
    ensure(acc.indices.len() >= 2, "no stable subsequence")?;
    for &i in &acc.indices {
        ensure(joint_pattern(&witnesses[i], &acc.points, DLO) == acc.pattern, "pattern not stable")?;
    }
    Ok(format!(
        "{columns} columns verified over A_1..A_4; stable pattern {} on witnesses {:?}",
        acc.pattern, acc.indices
    ))
}

// ---------- criterion 8 ----------

fn random_term(rng: &mut ChaCha8Rng, arities: &[usize], vars: usize, depth: usize) -> Term {
    if depth == 0 || rng.gen_bool(0.3) {
        return Term::var(rng.gen_range(0..vars));
    }
    let f = rng.gen_range(0..arities.len());
    Term::app(f, (0..arities[f]).map(|_| random_term(rng, arities, vars, depth - 1)).collect())
}

fn criterion_8() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut agree_sat = 0;
    for _ in 0..50 {
        let base: usize = rng.gen_range(2..=3);
        let gens: Vec<(String, TableOp)> = (0..rng.gen_range(1..=2))
            .map(|g| {
                let arity = rng.gen_range(1..=2);
                let len = base.pow(arity as u32);
                let table = (0..len).map(|_| rng.gen_range(0..base)).collect();
                (format!("g{g}"), TableOp::new(base, arity, table).unwrap())
            })
            .collect();
        let clone = generate(base, gens, CloneCaps { max_arity: 2, max_depth: 3, max_catalog: 5_000 }).map_err(err)?;
        let arities: Vec<usize> = (0..rng.gen_range(1..=2)).map(|_| rng.gen_range(1..=2)).collect();
        let symbols: Vec<(String, usize)> = arities.iter().enumerate().map(|(i, &r)| (format!("f{i}"), r)).collect();
        let eqs: Vec<(Term, Term)> = (0..rng.gen_range(1..=2))
            .map(|_| (random_term(&mut rng, &arities, 2, 2), random_term(&mut rng, &arities, 2, 2)))
            .collect();
        let sys = EquationSystem::new(symbols, eqs).map_err(err)?;
        let plain = satisfiable_in_clone(&sys, &clone).map_err(err)?;
        let modulo = satisfiable_modulo_outside(&sys, &clone, &[TableOp::selector(base, 1, 0)]).map_err(err)?;
        let same = match (&plain, &modulo) {
            (CloneVerdict::Satisfiable(a), CloneVerdict::Satisfiable(b)) => a.entries == b.entries,
            (a, b) => a == b,
        };
        ensure(same, format!("disagreement on\n{sys}"))?;
        if plain.assignment().is_some() {
            agree_sat += 1;
        }
    }
    Ok(format!("50 instances agree ({agree_sat} satisfiable)"))
}

// ---------- criterion 9 ----------

fn random_member(rng: &mut ChaCha8Rng, n: usize, id: usize) -> QFunction {
    let slopes = [int(1), int(2), frac(1, 2), int(3)];
    let alpha = PLMap::affine(slopes[rng.gen_range(0..4)].clone(), int(rng.gen_range(-4..=4)));
    let a = int(rng.gen_range(-3..=3));
    let i = rng.gen_range(0..n);
    let bound = alpha.eval(&a);
    let data = if rng.gen_bool(0.5) {
        vec![(vec![&a - int(1); n], bound - int(2))]
    } else {
        Vec::new()
    };
    make_member(&format!("m{id}"), n, i, a, alpha, &data).unwrap()
}

fn random_composite(rng: &mut ChaCha8Rng, n: usize, depth: usize, id: &mut usize) -> QFunction {
    *id += 1;
    if depth == 0 || rng.gen_bool(0.25) {
        if rng.gen_bool(0.2) {
            return QFunction::selector(n, rng.gen_range(0..n)).unwrap();
        }
        return random_member(rng, n, *id);
    }
    let m = rng.gen_range(1..=3);
    let f = random_member(rng, m, *id);
    let gs: Vec<QFunction> = (0..m).map(|_| random_composite(rng, n, depth - 1, id)).collect();
    compose_members(&f, &gs).unwrap()
}

fn criterion_9() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    // (a) homomorphism law on random compositions
    let mut id = 0;
    for _ in 0..1000 {
        let n = rng.gen_range(1..=3);
        let m = rng.gen_range(1..=3);
        let f = random_member(&mut rng, m, 0);
        let gs: Vec<QFunction> = (0..m).map(|_| random_composite(&mut rng, n, 2, &mut id)).collect();
        let c = compose_members(&f, &gs).map_err(err)?;
        let lhs = xi(&c).map_err(err)?;
        let rhs = xi(&gs[xi(&f).map_err(err)?]).map_err(err)?;
        ensure(lhs == rhs, format!("xi({}) = {lhs}, expected {rhs}", c.name))?;
        // polymorphism spot check
        let u: Vec<Rational> = (0..n).map(|_| random_rational(&mut rng, 6)).collect();
        let v: Vec<Rational> = u.iter().map(|x| x + frac(rng.gen_range(1..=8), 3)).collect();
        ensure(c.eval(&u) < c.eval(&v), "composite not increasing")?;
    }
    // (b) extensions with every coordinate
    for n in 2..=4 {
        for samples in [0, 1, 5] {
            let r = noncontinuity_demo(n, samples, 0).map_err(err)?;
            ensure(r.agreement, format!("n={n}: extension disagrees on the restriction"))?;
            ensure(r.coordinates == (0..n).collect::<Vec<_>>(), format!("n={n}: coordinates {:?}", r.coordinates))?;
            for e in &r.extensions {
                for (p, y) in &r.restriction {
                    ensure(e.eval(p) == *y, "restriction not reproduced")?;
                }
            }
        }
    }
    // (c) uniqueness witnesses
    let f = make_member("f", 2, 0, int(0), PLMap::translation(int(2)), &[]).map_err(err)?;
    let grid: Vec<Rational> = (-5..5).map(int).collect();
    let u = uniqueness_witnesses(&f, &grid).map_err(err)?;
    ensure(u.range_ok && u.grid_ok && u.grid_points == 100, "uniqueness witnesses failed")?;
    // (d) restrictions of min
    let pts = [(-1, 2), (3, 4), (0, 0), (-2, -5), (1, -1)];
    let data: Vec<(Vec<Rational>, Rational)> =
        pts.iter().map(|&(x, y)| (vec![int(x), int(y)], int(x.min(y)))).collect();
    for t in 0..2 {
        let e = extend_restriction(&data, t, 2).map_err(err)?;
        ensure(data.iter().all(|(p, y)| e.eval(p) == *y), "min restriction not reproduced")?;
        ensure(xi(&e).map_err(err)? == t, "wrong eventual coordinate")?;
    }
    Ok("1000 composites, n=2..4 extensions, 10x10 grid, min restriction".into())
}

// ---------- criterion 10 ----------

fn criterion_10() -> Check {
    let bin = env!("CARGO_BIN_EXE_clonebench");
    let data = concat!(env!("CARGO_MANIFEST_DIR"), "/data/");
    let runs: Vec<Vec<String>> = [
        "orbits {d}cycle3.struct --k 2",
        "canonical dlo {d}dlo_mixed.ops",
        "type-image dlo {d}lex.ops --k 2",
        "sat {d}symmetric.eqs {d}bool2.struct {d}min2.ops",
        "sat1 {d}siggers.eqs",
        "sat-mod {d}comm.eqs {d}cycle3.struct {d}cycle3.ops",
        "proj-hom {d}bool2.struct {d}min2.ops",
        "lift {d}assoc.eqs dlo {d}lex.ops --depth 2",
        "analyze pureset {d}lex.ops --depth 2",
        "qdemo --n 3 --samples 5 --seed 7",
    ]
    .iter()
    .map(|c| c.replace("{d}", data).split_whitespace().map(String::from).collect())
    .collect();
    for args in &runs {
        let a = Command::new(bin).args(args).output().map_err(|e| e.to_string())?;
        let b = Command::new(bin).args(args).output().map_err(|e| e.to_string())?;
        ensure(a.stdout == b.stdout && a.stderr == b.stderr && a.status == b.status, format!("{} differs", args[0]))?;
        ensure(
            a.status.code().is_some_and(|c| c <= 1),
            format!("{} exited with {:?}", args[0], a.status.code()),
        )?;
    }
    Ok(format!("{} CLI runs byte-identical", runs.len()))
}

fn main() {
    let criteria: [Criterion; 10] = [
        (1, "type-space counts (exact)", 1, criterion_1),
        (2, "orbit oracle equivalence (exact)", 30, criterion_2),
        (3, "canonicity of lex, counterexample for min (exact)", 5, criterion_3),
        (4, "homomorphism law of type images (table-exact)", 10, criterion_4),
        (5, "projection-clone decisions (exact)", 1, criterion_5),
        (6, "projective-homomorphism refutation (exact)", 5, criterion_6),
        (7, "lifting associativity of lex (exact rationals)", 60, criterion_7),
        (8, "modulo-outside reduction (exact)", 60, criterion_8),
        (9, "counterexample clone (exact)", 60, criterion_9),
        (10, "CLI determinism (byte-identical)", 120, criterion_10),
    ];
    let mut failed = 0;
    for (n, name, limit, check) in criteria {
        let start = Instant::now();
        let result = check();
        let elapsed = start.elapsed();
        let within = elapsed <= Duration::from_secs(limit);
        match (&result, within) {
            (Ok(detail), true) => println!(
                "criterion {n:>2}: PASS  {name} [{:.2}s <= {limit}s] {detail}",
                elapsed.as_secs_f64()
            ),
            (Ok(detail), false) => {
                failed += 1;
                println!(
                    "criterion {n:>2}: FAIL  {name} [{:.2}s > {limit}s] {detail}",
                    elapsed.as_secs_f64()
                )
            }
            (Err(e), _) => {
                failed += 1;
                println!("criterion {n:>2}: FAIL  {name} [{:.2}s] {e}", elapsed.as_secs_f64())
            }
        }
    }
    if failed > 0 {
        println!("{failed} criterion/criteria failed");
        std::process::exit(1);
    }
}

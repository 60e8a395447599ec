//! End-to-end acceptance checks. Each criterion prints one PASS/FAIL line;
//! the process exits non-zero if any hard criterion fails.

use std::time::Instant;

use minannih_cli::bench::{self, family};
use minannih_cli::compute::{compute, ComputeOptions};
use minannih_cli::files::{FieldSpec, MatrixFile, ReportFile};
use minannih_cli::format::{parse_poly, render_factored};
use minannih_core::annihilators::{ExponentTable, TableKind, PHASE_COFACTORS};
use minannih_core::generators::{random_block_spec, RandomSpecParams};
use minannih_core::{
    assemble, build_split_tree, char_poly, matrix_vector_horner, naive_unit_annihilators, random_projection,
    unit_pseudo_annih, verify_minimal_polynomial, Assembled, Bounds, ColVector, DenseMatrix, Field, GroundTruth,
    Mode, PrimeField, Rationals, Residue, Similarity,
};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const P: u64 = 32003;
const INSTANCES: usize = 200;

struct Instance {
    asm: Assembled<Residue>,
    bytes: Vec<u8>,
    conjugated: bool,
}

type Criterion<'a> = (usize, &'static str, bool, Box<dyn Fn() -> Outcome + 'a>);

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn instances(k: &PrimeField) -> Vec<Instance> {
    (0..INSTANCES)
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(1000 + i as u64);
            let conjugated = i % 2 == 1;
            let params = RandomSpecParams {
                q: 1 + i % 8,
                max_mult: 4,
                max_degree: 3,
                max_n: 32,
                similarity: if conjugated { Similarity::RandomUnimodular(i as u64) } else { Similarity::None },
            };
            let spec = random_block_spec(k, &params, &mut rng).expect("feasible spec");
            let asm = assemble(k, &spec).expect("valid spec");
            let bytes = MatrixFile::from_matrix(FieldSpec::Prime { prime: P }, k, &asm.matrix).to_json().into_bytes();
            Instance { asm, bytes, conjugated }
        })
        .collect()
}

fn run(inst: &Instance, opts: &ComputeOptions) -> ReportFile {
    compute(&inst.bytes, opts).expect("compute succeeds")
}

struct Runs {
    fast: Vec<ReportFile>,
    naive: Vec<ReportFile>,
    sequential: Vec<ReportFile>,
}

fn all_runs(insts: &[Instance]) -> Runs {
    let base = ComputeOptions::default();
    Runs {
        fast: insts.iter().map(|i| run(i, &base)).collect(),
        naive: insts.iter().map(|i| run(i, &ComputeOptions { naive: true, ..base.clone() })).collect(),
        sequential: insts.iter().map(|i| run(i, &ComputeOptions { mode: Mode::Sequential, ..base.clone() })).collect(),
    }
}

fn oracle_equivalence(insts: &[Instance], runs: &Runs) -> Outcome {
    let bad = runs.fast.iter().zip(&runs.naive).filter(|(a, b)| a.true_exps != b.true_exps).count();
    let n_max = insts.iter().map(|i| i.asm.matrix.dim()).max().unwrap_or(0);
    let conj = insts.iter().filter(|i| i.conjugated).count();
    outcome(bad == 0, format!("{} instances (n <= {n_max}, {conj} conjugated), {bad} mismatches", insts.len()))
}

fn divisibility(k: &PrimeField, insts: &[Instance]) -> Outcome {
    const PAIRS: usize = 500;
    let truths: Vec<ExponentTable> = insts
        .iter()
        .map(|i| naive_unit_annihilators(k, &i.asm.matrix, &i.asm.factors, 1).expect("naive").true_exps)
        .collect();
    let mut violations = 0;
    let mut sparse = 0;
    for p in 0..PAIRS {
        let idx = p % insts.len();
        let inst = &insts[idx];
        let n = inst.asm.matrix.dim();
        let mut u = random_projection(k, n, 7 * p as u64 + 3);
        if p % 2 == 1 && n > 1 {
            let mut rng = ChaCha8Rng::seed_from_u64(p as u64);
            let mut idxs: Vec<usize> = (0..n).collect();
            idxs.shuffle(&mut rng);
            let zeros = n.div_ceil(2).min(n - 1);
            for &j in &idxs[..zeros] {
                u.0[j] = k.zero();
            }
            if u.is_zero(k) {
                u.0[idxs[n - 1]] = k.one();
            }
            sparse += 1;
        }
        let mode = if p % 3 == 0 { Mode::Sequential } else { Mode::BinarySplit };
        let pseudo = unit_pseudo_annih(k, &inst.asm.matrix, &inst.asm.factors, &u, mode, &Bounds::CharPoly)
            .expect("pseudo table");
        if !pseudo.dominated_by(&truths[idx]) {
            violations += 1;
        }
    }
    outcome(violations == 0, format!("{PAIRS} pairs ({sparse} with at least half of u zero), {violations} violations"))
}

fn mode_equivalence(runs: &Runs) -> Outcome {
    let bad = runs.fast.iter().zip(&runs.sequential).filter(|(a, b)| a.pseudo != b.pseudo).count();
    outcome(bad == 0, format!("{} instances, {bad} pseudo-table mismatches", runs.fast.len()))
}

fn ceil_log2(q: u64) -> u64 {
    q.next_power_of_two().trailing_zeros() as u64
}

fn splitting_cost(k: &PrimeField) -> Outcome {
    let mut failures = Vec::new();
    for q in 2..=16usize {
        let n = 2 * q;
        let fam = family(k, n, q, q as u64).expect("family");
        let bytes = MatrixFile::from_matrix(FieldSpec::Prime { prime: P }, k, &fam.matrix).to_json().into_bytes();
        let qq = q as u64;
        let u = random_projection(k, n, 0);
        let tree = build_split_tree(k, &fam.matrix, &fam.factors, &u).expect("tree").block_applications();
        let split = compute(&bytes, &ComputeOptions::default()).expect("compute");
        let seq = compute(&bytes, &ComputeOptions { mode: Mode::Sequential, ..ComputeOptions::default() }).expect("compute");
        let split_apps = split.cost.phase(PHASE_COFACTORS).block_apps;
        let seq_apps = seq.cost.phase(PHASE_COFACTORS).block_apps;
        let bound = qq * ceil_log2(qq);
        if tree > bound || split_apps > bound || seq_apps != qq * (qq - 1) {
            failures.push(format!("q={q}: tree {tree}, split {split_apps}, sequential {seq_apps}"));
        }
    }
    outcome(failures.is_empty(), if failures.is_empty() { "q = 2..16 within q*ceil(log2 q); sequential = q(q-1)".into() } else { failures.join("; ") })
}

fn complexity_scaling() -> Outcome {
    let out = bench::bench(&[16, 32], &[8], P, 11).expect("bench");
    let ops = |algo: &str, n: usize| out.rows.iter().find(|r| r.algo == algo && r.n == n).expect("row").field_ops as f64;
    let naive = ops("naive", 32) / ops("naive", 16);
    let split = ops("pseudo-binary-split", 32) / ops("pseudo-binary-split", 16);
    let within = |r: f64, target: f64| (r - target).abs() <= 0.3 * target;
    outcome(
        within(naive, 16.0) && within(split, 8.0),
        format!("q=8, n 16->32: naive x{naive:.2} (target 16 +/-30%), binary-split x{split:.2} (target 8 +/-30%)"),
    )
}

fn repair_rate(runs: &Runs) -> Outcome {
    let repairs: usize = runs.fast.iter().map(|r| r.repairs).sum();
    let columns: usize = runs.fast.iter().map(|r| r.n).sum();
    let rate = repairs as f64 / columns.max(1) as f64;
    outcome(rate <= 0.05, format!("{repairs} of {columns} columns repaired ({:.3}%), threshold 5%", 100.0 * rate))
}

fn minimal_polynomial_consistency(k: &PrimeField, insts: &[Instance], runs: &Runs) -> Outcome {
    let mut bad = 0;
    for (inst, r) in insts.iter().zip(&runs.fast) {
        let table = ExponentTable { kind: TableKind::True, q: r.true_exps.len(), n: r.n, entries: r.true_exps.clone() };
        let ok_poly = verify_minimal_polynomial(k, &inst.asm.matrix, &inst.asm.factors, &table.row_max());
        let ok_truth = r.minimal_polynomial == render_factored(k, &inst.asm.minimal_poly())
            && table.row_max() == inst.asm.minpoly_exponents;
        let ok_columns = match &inst.asm.truth {
            GroundTruth::Columns(t) => t.entries == r.true_exps,
            GroundTruth::MinPolyOnly => true,
        };
        if !(ok_poly && ok_truth && ok_columns) {
            bad += 1;
        }
    }
    outcome(bad == 0, format!("{} instances, {bad} inconsistent", insts.len()))
}

fn cayley_hamilton_in<F: Field>(k: &F, rng: &mut ChaCha8Rng, small: bool) -> bool {
    let n = rng.random_range(1..=16);
    let elem = |rng: &mut ChaCha8Rng| if small { k.from_i64(rng.random_range(-9..=9)) } else { k.random_element(rng) };
    let a = DenseMatrix::from_fn(k, n, |_, _| elem(rng));
    let v = ColVector((0..n).map(|_| elem(rng)).collect());
    matrix_vector_horner(k, &char_poly(k, &a), &a, &v).expect("dims agree").is_zero(k)
}

fn cayley_hamilton() -> Outcome {
    let q = Rationals::new();
    let p = PrimeField::new(P).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let bad = (0..100)
        .filter(|i| !if i % 2 == 0 { cayley_hamilton_in(&q, &mut rng, true) } else { cayley_hamilton_in(&p, &mut rng, false) })
        .count();
    outcome(bad == 0, format!("100 pairs over Q and GF({P}), {bad} failures"))
}

/// Small-entry integer matrices: dense random ones, and permuted
/// triangular ones whose repeated eigenvalues give nontrivial tables.
fn integer_matrix(rng: &mut ChaCha8Rng, i: usize) -> (usize, Vec<i64>) {
    let n = rng.random_range(1..=12);
    let mut e = vec![0i64; n * n];
    if i.is_multiple_of(2) {
        e.iter_mut().for_each(|x| *x = rng.random_range(-5..=5));
    } else {
        for r in 0..n {
            e[r * n + r] = rng.random_range(-1..=2);
            for c in r + 1..n {
                if rng.random_bool(0.3) {
                    e[r * n + c] = rng.random_range(-5..=5);
                }
            }
        }
        let mut perm: Vec<usize> = (0..n).collect();
        perm.shuffle(rng);
        let t = e.clone();
        for r in 0..n {
            for c in 0..n {
                e[perm[r] * n + perm[c]] = t[r * n + c];
            }
        }
    }
    (n, e)
}

fn rational_parity() -> Outcome {
    const PRIME: u64 = 1_000_003;
    let q = Rationals::new();
    let p = PrimeField::new(PRIME).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let (mut compared, mut skipped, mut bad) = (0, 0, 0);
    for i in 0..50 {
        let (n, e) = integer_matrix(&mut rng, i);
        let entries: Vec<String> = e.iter().map(|x| x.to_string()).collect();
        let file = |field| MatrixFile { field, n, entries: entries.clone(), factorization: None, minpoly_bounds: None };
        let rq = compute(file(FieldSpec::rationals()).to_json().as_bytes(), &ComputeOptions::default()).expect("Q");
        let rp = compute(file(FieldSpec::Prime { prime: PRIME }).to_json().as_bytes(), &ComputeOptions::default())
            .expect("GF(p)");
        let pattern = |r: &ReportFile| {
            let mut v: Vec<(usize, usize)> = r
                .factors
                .iter()
                .map(|f| (parse_poly(&q, &f.factor).expect("factor").degree().unwrap_or(0), f.multiplicity))
                .collect();
            v.sort();
            v
        };
        if pattern(&rq) != pattern(&rp) {
            skipped += 1;
            continue;
        }
        compared += 1;
        let reduced: Vec<_> = rq.factors.iter().map(|f| parse_poly(&p, &f.factor).expect("reduces")).collect();
        let modp: Vec<_> = rp.factors.iter().map(|f| parse_poly(&p, &f.factor).expect("factor")).collect();
        let agree = reduced.iter().enumerate().all(|(iq, f)| {
            modp.iter().position(|g| g == f).is_some_and(|ip| rq.true_exps[iq] == rp.true_exps[ip])
        });
        if !agree {
            bad += 1;
        }
    }
    outcome(bad == 0 && compared > 0, format!("{compared} compared, {skipped} skipped on pattern mismatch, {bad} disagreements"))
}

fn thread_determinism(insts: &[Instance], runs: &Runs) -> Outcome {
    let opts = ComputeOptions { threads: 4, ..ComputeOptions::default() };
    let bad = insts
        .iter()
        .zip(&runs.fast)
        .filter(|(inst, one)| {
            let four = run(inst, &opts);
            four.without_timing().to_json() != one.without_timing().to_json()
        })
        .count();
    outcome(bad == 0, format!("{} instances at 4 threads, {bad} differ from 1 thread", insts.len()))
}

fn main() {
    if std::env::args().any(|a| a == "--list") {
        return;
    }
    let k = PrimeField::new(P).unwrap();
    let start = Instant::now();
    let insts = instances(&k);
    let runs = all_runs(&insts);
    println!("acceptance: {} instances prepared in {:.1}s", insts.len(), start.elapsed().as_secs_f64());

    let criteria: Vec<Criterion> = vec![
        (1, "oracle equivalence", true, Box::new(|| oracle_equivalence(&insts, &runs))),
        (2, "divisibility", true, Box::new(|| divisibility(&k, &insts))),
        (3, "mode equivalence", true, Box::new(|| mode_equivalence(&runs))),
        (4, "binary-splitting cost", true, Box::new(|| splitting_cost(&k))),
        (5, "complexity scaling", true, Box::new(complexity_scaling)),
        (6, "pseudo success rate", false, Box::new(|| repair_rate(&runs))),
        (7, "minimal polynomial consistency", true, Box::new(|| minimal_polynomial_consistency(&k, &insts, &runs))),
        (8, "Cayley-Hamilton", true, Box::new(cayley_hamilton)),
        (9, "rational backend parity", true, Box::new(rational_parity)),
        (10, "thread determinism", true, Box::new(|| thread_determinism(&insts, &runs))),
    ];

    let mut hard_failures = 0;
    for (id, name, hard, check) in &criteria {
        let t = Instant::now();
        let o = check();
        let status = match (o.pass, hard) {
            (true, _) => "PASS",
            (false, true) => "FAIL",
            (false, false) => "WARN",
        };
        if !o.pass && *hard {
            hard_failures += 1;
        }
        println!("criterion {id:>2} {status} {name}: {} [{:.1}s]", o.detail, t.elapsed().as_secs_f64());
    }
    println!("acceptance: {} hard failures, total {:.1}s", hard_failures, start.elapsed().as_secs_f64());
    if hard_failures > 0 {
        std::process::exit(1);
    }
}

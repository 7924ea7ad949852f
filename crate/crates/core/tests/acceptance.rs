//! Acceptance run: one PASS/FAIL line per criterion, every tolerance pinned
//! below. Built without the test harness so the lines always print; the
//! process exits nonzero if any criterion fails.

use std::collections::BTreeSet;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use pflab::det::{bareiss_det, laplace_det};
use pflab::field::MERSENNE_61;
use pflab::matrix::Matrix;
use pflab::partition::{enumerate_special, BlockShape};
use pflab::pencil::{check_valuation, embed_and_restrict, Mode};
use pflab::poly::{q, DegreeBounds, Monomial, Poly, VarId, Q};
use pflab::somatrix::{antisymmetrize, generic_g, partner, shape_block};
use pflab::witness::{hook_choices, verify, verify_all, Route, WitnessReport};
use pflab::Partition;

const NILPOTENT_LIMIT: Duration = Duration::from_secs(1);
const CLASSICAL_LIMIT: Duration = Duration::from_secs(120);
const EXACT_SWEEP_LIMIT: Duration = Duration::from_secs(600);
const NUMERIC_PER_PARTITION_LIMIT: Duration = Duration::from_secs(60);
const NUMERIC_TRIALS: usize = 20;
const NUMERIC_SEED: u64 = 0;
/// Numeric mode must run over a prime of at least this many bits.
const MIN_PRIME_BITS: u32 = 61;
const AUGMENT_MAX_SIZE: usize = 10;
const SINGLE_BLOCK_MAX_R: usize = 5;
const HOOK_CHOICE_MAX_R: usize = 4;
const SQRT_CASES: usize = 1000;
const EVAL_CASES: usize = 200;
const DET_CASES: usize = 100;
const DET_SIZE: usize = 6;
const DET_ENTRY_BOUND: i64 = 9;

/// Reference 12x12 nilpotent for `[4,4,3,1]`.
const REFERENCE_4431: [[i64; 12]; 12] = [
    [0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0],
    [0, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0],
    [0, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0],
    [0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0],
    [0, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0, 1],
    [0, 0, 0, 0, 0, 0, 0, 0, 0, 0, -1, 0],
    [0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0],
    [0, 0, 0, 0, 0, 0, -1, 0, 0, 0, 0, 0],
    [0, 0, 0, 0, 0, 0, 0, -1, 0, 0, 0, 0],
    [0, 0, 0, 0, 0, 0, 0, 0, -1, 0, 0, 0],
    [0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0],
    [0, 0, 0, 0, 0, 0, 0, 0, 0, 0, -1, 0],
];

struct Outcome {
    ok: bool,
    detail: String,
}

impl Outcome {
    fn new(ok: bool, detail: impl Into<String>) -> Self {
        Outcome {
            ok,
            detail: detail.into(),
        }
    }
}

fn pflab(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_pflab"))
        .args(args)
        .output()
        .expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).expect("utf-8 output"),
    )
}

fn secs(d: Duration) -> String {
    format!("{:.2}s", d.as_secs_f64())
}

fn worked_example() -> Outcome {
    let start = Instant::now();
    let (code, out) = pflab(&["nilpotent", "--partition", "4,4,3,1"]);
    let elapsed = start.elapsed();
    let rows: Vec<Vec<i64>> = out
        .lines()
        .map(|l| l.split_whitespace().map(|v| v.parse().unwrap()).collect())
        .collect();
    let expected: Vec<Vec<i64>> = REFERENCE_4431.iter().map(|r| r.to_vec()).collect();
    let ok = code == 0 && rows == expected && elapsed < NILPOTENT_LIMIT;
    Outcome::new(ok, format!("12x12 entry-for-entry match: {}, {} < {}", rows == expected, secs(elapsed), secs(NILPOTENT_LIMIT)))
}

fn lego_fidelity() -> Outcome {
    let (code, out) = pflab(&["lego", "--partition", "7,5,2,2"]);
    let expected = "blocks: (7,1) (5,1) (2,+) (2,-)\naugmented: [7,5,2,2,1,1]\n";
    Outcome::new(code == 0 && out == expected, format!("output {:?}", out.trim_end()))
}

fn classical() -> Outcome {
    let start = Instant::now();
    let mut ok = true;
    for n in 1..=4 {
        let g = generic_g(n);
        let det = laplace_det(g.matrix(), &DegreeBounds::none());
        let (a, _) = antisymmetrize(&g).unwrap();
        let pf = a.pfaffian().unwrap();
        let sign = if n % 2 == 0 { 1 } else { -1 };
        ok &= det == (&pf * &pf).scale(&q(sign));
    }
    let mut count = 0;
    for two_n in [2, 4, 6, 8] {
        for p in enumerate_special(two_n).unwrap() {
            let r = verify(&p, p.len(), &Mode::Exact).unwrap();
            ok &= r.passed();
            count += 1;
        }
    }
    let elapsed = start.elapsed();
    ok &= elapsed < CLASSICAL_LIMIT;
    Outcome::new(
        ok,
        format!("det(g) = (-1)^N Pf(gJ)^2 for N = 1..4, {count} partitions at j = 2m, {} < {}", secs(elapsed), secs(CLASSICAL_LIMIT)),
    )
}

/// Re-derives the identities from the report's own fields.
fn report_consistent(r: &WitnessReport) -> bool {
    let (Some(c), Some(w), Some(sign)) = (&r.observed_c, &r.witness, r.sign) else {
        return false;
    };
    let mut ok = r.passed() && r.b_j % 2 == 0;
    ok &= *c == (w * w).scale(&q(sign as i64));
    ok &= c.scale(&q(sign as i64)).sqrt().map(|s| s.normalized()) == Ok(w.normalized());
    if r.route == Route::Lego {
        let (Some(d), Some(ds)) = (&r.det_z, r.det_sign) else {
            return false;
        };
        ok &= *c == d.scale(&(q(ds as i64) * q(1 << r.b_j)));
    }
    ok
}

/// Surviving rows and columns of every Lego-route run pair up under
/// `i <-> i +- N`.
fn paired(r: &WitnessReport) -> bool {
    if r.route != Route::Lego {
        return true;
    }
    let half = r.size / 2;
    let rows: BTreeSet<usize> = r.rows.iter().map(|&i| partner(i - 1, half) + 1).collect();
    let cols: BTreeSet<usize> = r.cols.iter().copied().collect();
    rows == cols && r.rows.len() == r.cols.len()
}

fn exact_sweep(reports: &mut Vec<WitnessReport>) -> Outcome {
    let start = Instant::now();
    let mut ok = true;
    let mut failures = 0;
    for two_n in [4, 6, 8] {
        for p in enumerate_special(two_n).unwrap() {
            for r in verify_all(&p, &Mode::Exact).unwrap() {
                if !report_consistent(&r) {
                    ok = false;
                    failures += 1;
                }
                reports.push(r);
            }
        }
    }
    let elapsed = start.elapsed();
    ok &= elapsed < EXACT_SWEEP_LIMIT;
    Outcome::new(
        ok,
        format!("{} (P, j) pairs, {failures} failures, {} < {}", reports.len(), secs(elapsed), secs(EXACT_SWEEP_LIMIT)),
    )
}

fn numeric_sweep() -> Outcome {
    let mode = Mode::numeric(NUMERIC_TRIALS, NUMERIC_SEED);
    let Mode::Numeric { field, .. } = mode else {
        unreachable!()
    };
    let mut ok = field.modulus() >= 1 << (MIN_PRIME_BITS - 1) && field.modulus() == MERSENNE_61;
    let mut pairs = 0;
    let mut slowest = Duration::ZERO;
    let mut saw_4431 = false;
    for two_n in [10, 12] {
        for p in enumerate_special(two_n).unwrap() {
            let start = Instant::now();
            for r in verify_all(&p, &mode).unwrap() {
                ok &= r.passed() && r.sign.is_some() && r.trials == NUMERIC_TRIALS;
                if p.parts() == [4, 4, 3, 1] && r.j == 2 {
                    saw_4431 = r.k_j == 8 && r.passed();
                }
                pairs += 1;
            }
            slowest = slowest.max(start.elapsed());
        }
    }
    ok &= saw_4431 && slowest < NUMERIC_PER_PARTITION_LIMIT;
    Outcome::new(
        ok,
        format!(
            "{pairs} (P, j) pairs, {NUMERIC_TRIALS} trials mod 2^61-1, [4,4,3,1] j=2 k_j=8 pass: {saw_4431}, slowest {} < {}",
            secs(slowest),
            secs(NUMERIC_PER_PARTITION_LIMIT)
        ),
    )
}

fn chi_recipe() -> Outcome {
    let mut ok = true;
    let mut count = 0;
    for two_n in (2..=12).step_by(2) {
        let mode = if two_n <= 8 {
            Mode::Exact
        } else {
            Mode::numeric(NUMERIC_TRIALS, NUMERIC_SEED)
        };
        for p in enumerate_special(two_n).unwrap() {
            match check_valuation(&p, &mode) {
                Ok(r) => ok &= r.all_attained(),
                Err(_) => ok = false,
            }
            count += 1;
        }
    }
    Outcome::new(ok, format!("{count} partitions, valuation >= chi and attained (exact to 8, numeric to 12)"))
}

fn augmentation() -> Outcome {
    let mut ok = true;
    let mut cases = Vec::new();
    for parts in [vec![3, 1], vec![2, 2], vec![2, 2, 1, 1]] {
        let p = Partition::new(parts).unwrap();
        let mut extra = 1;
        while p.total() + 2 * extra <= AUGMENT_MAX_SIZE {
            let c = embed_and_restrict(&p, extra, AUGMENT_MAX_SIZE).unwrap();
            ok &= c.passed() && !c.restricted_agree.is_empty();
            cases.push(c.augmented.to_string());
            extra += 1;
        }
    }
    Outcome::new(ok, format!("restricted coefficients agree for {}", cases.join(" ")))
}

fn single_block_nilpotent(shape: BlockShape) -> bool {
    let x = shape_block(shape);
    let w = x.rows();
    let s = Poly::var(VarId::S);
    let l = Poly::var(VarId::Lambda);
    let m = Matrix::from_fn(w, w, |i, j| {
        let mut e = s.scale(&q(x[(i, j)]));
        if i == j {
            e = &e + &l;
        }
        e
    });
    laplace_det(&m, &DegreeBounds::none()) == l.pow(w as u32)
}

fn block_properties(reports: &[WitnessReport]) -> Outcome {
    let mut l1 = true;
    for r in 1..=SINGLE_BLOCK_MAX_R {
        l1 &= single_block_nilpotent(BlockShape::Chain(r)) && single_block_nilpotent(BlockShape::Hook(r));
    }
    let mut l2 = true;
    for r in 2..=HOOK_CHOICE_MAX_R {
        let choices = hook_choices(r);
        l2 &= choices.len() == 2;
        let consumed = |c: &pflab::witness::HookChoice| {
            let mut rows: BTreeSet<usize> = c.s_entries.iter().map(|e| e.0).collect();
            let mut cols: BTreeSet<usize> = c.s_entries.iter().map(|e| e.1).collect();
            rows.insert(c.lambda);
            cols.insert(c.lambda);
            (rows, cols, c.survivor_row, c.survivor_col)
        };
        l2 &= choices.windows(2).all(|w| consumed(&w[0]) == consumed(&w[1]));
    }
    let lego_runs = reports.iter().filter(|r| r.route == Route::Lego).count();
    let l3 = lego_runs > 0 && reports.iter().all(paired);
    Outcome::new(
        l1 && l2 && l3,
        format!("single blocks nilpotent for r <= {SINGLE_BLOCK_MAX_R}: {l1}; Type II choices agree for r <= {HOOK_CHOICE_MAX_R}: {l2}; pairing in {lego_runs} exact runs: {l3}"),
    )
}

fn random_poly(rng: &mut ChaCha8Rng) -> Poly {
    let vars = [VarId::a(1, 1), VarId::a(2, 1), VarId::b(1, 2), VarId::c(1, 2), VarId::T];
    let terms = rng.gen_range(1..=4);
    Poly::from_terms((0..terms).map(|_| {
        let m = Monomial::from_pairs(vars.iter().map(|&v| (v, rng.gen_range(0..=2))));
        (m, q(rng.gen_range(-5..=5)))
    }))
}

fn polyalg() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let mut sqrt_ok = 0;
    for _ in 0..SQRT_CASES {
        let p = loop {
            let p = random_poly(&mut rng);
            if !p.is_zero() {
                break p;
            }
        };
        let sq = &p * &p;
        if sq.sqrt().map(|r| r.normalized()) == Ok(p.normalized()) {
            sqrt_ok += 1;
        }
    }
    let mut eval_ok = true;
    for _ in 0..EVAL_CASES {
        let a = random_poly(&mut rng);
        let b = random_poly(&mut rng);
        let point: Vec<Q> = (0..5).map(|_| q(rng.gen_range(-7..=7))).collect();
        let at = |v: VarId| -> Option<Q> {
            let k = [VarId::a(1, 1), VarId::a(2, 1), VarId::b(1, 2), VarId::c(1, 2), VarId::T]
                .iter()
                .position(|&w| w == v)?;
            Some(point[k].clone())
        };
        let (ea, eb) = (a.eval(at).unwrap(), b.eval(at).unwrap());
        eval_ok &= (&a * &b).eval(at).unwrap() == &ea * &eb;
        eval_ok &= (&a + &b).eval(at).unwrap() == &ea + &eb;
    }
    let mut det_ok = 0;
    for _ in 0..DET_CASES {
        let m = Matrix::from_fn(DET_SIZE, DET_SIZE, |_, _| Poly::int(rng.gen_range(-DET_ENTRY_BOUND..=DET_ENTRY_BOUND)));
        if laplace_det(&m, &DegreeBounds::none()) == bareiss_det(&m) {
            det_ok += 1;
        }
    }
    Outcome::new(
        sqrt_ok == SQRT_CASES && eval_ok && det_ok == DET_CASES,
        format!("sqrt round trips {sqrt_ok}/{SQRT_CASES}, evaluation homomorphism {eval_ok}, Laplace = Bareiss {det_ok}/{DET_CASES}"),
    )
}

fn main() -> ExitCode {
    let mut exact_reports = Vec::new();
    let results = [
        ("worked example fidelity", worked_example()),
        ("Lego fidelity", lego_fidelity()),
        ("classical base case", classical()),
        ("exhaustive exact sweep", exact_sweep(&mut exact_reports)),
        ("numeric sweep", numeric_sweep()),
        ("chi recipe", chi_recipe()),
        ("augmentation", augmentation()),
        ("block-level properties", block_properties(&exact_reports)),
        ("polynomial algebra", polyalg()),
    ];
    for (i, (name, o)) in results.iter().enumerate() {
        println!("criterion {} {} {name}: {}", i + 1, if o.ok { "PASS" } else { "FAIL" }, o.detail);
    }
    let failed: Vec<usize> = results
        .iter()
        .enumerate()
        .filter(|(_, (_, o))| !o.ok)
        .map(|(i, _)| i + 1)
        .collect();
    if failed.is_empty() {
        println!("acceptance: all {} criteria passed", results.len());
        ExitCode::SUCCESS
    } else {
        println!("acceptance: failed criteria {failed:?}");
        ExitCode::FAILURE
    }
}

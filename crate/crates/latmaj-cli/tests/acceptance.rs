//! Acceptance suite: one test per criterion, each printing a verdict line.
//!
//! Criterion 1 carries a known-failing assertion: the published Power(pi)
//! value for the {A,D,E,F} projection (1790.4) is unattainable by any
//! balanced 27-run design — no coincidence multiset with the forced pair
//! count and sum matches that value together with the published Variance and
//! Exponential values (the attainable value is 1780.4; see README). The
//! assertion is kept as stated so the discrepancy stays visible.

use std::path::{Path, PathBuf};
use std::process::Command;

use latmaj::classical::{
    aberration_order, ave_chi2, ave_chi2_oracle, categorical_discrepancy,
    categorical_discrepancy_oracle, deviation_pattern, distance_distribution, gwp, l2_discrepancy,
    pattern_benchmarks, psi_combinatorial, psi_combinatorial_oracle, AberrationOrder,
    DiscrepancyParams, L2Kind, WordLengthPattern,
};
use latmaj::construction::{apply_swap, restarted_search, robin_hood_step, TiePolicy};
use latmaj::design::{
    coincidence_matrix, parse_design, pc_vector, project, random_balanced, Design,
};
use latmaj::kernel::{ConvexKernel, GOLDEN_RATIO};
use latmaj::krawtchouk::krawtchouk;
use latmaj::majorization::{benchmark_pc, classify_pool, compare_pc, MajorizationRelation};
use latmaj::schur::{benchmark_bound, benchmark_bound_exact, schur_psi};
use num::{BigInt, BigRational, One, ToPrimitive, Zero};

fn table1_path() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data/table1.txt")
}

fn table1() -> Design {
    let text = std::fs::read_to_string(table1_path()).expect("bundled data present");
    parse_design(&text, None)
        .expect("bundled design parses")
        .design
}

/// Projections X1..X4 of the worked example: {A,C,G,H}, {B,C,G,H},
/// {A,B,D,F}, {A,D,E,F} as 0-based columns of the bundled file.
fn example_projections() -> [Design; 4] {
    let t = table1();
    let proj = |cols: &[usize]| project(&t, cols).unwrap();
    [
        proj(&[0, 2, 6, 7]),
        proj(&[1, 2, 6, 7]),
        proj(&[0, 1, 3, 5]),
        proj(&[0, 3, 4, 5]),
    ]
}

fn big(n: i64) -> BigRational {
    BigRational::from(BigInt::from(n))
}

const SWAP_FIXTURE: &str = "\
0 0 0 1 1 0
1 0 0 1 1 0
0 0 1 0 1 1
1 1 0 0 0 1
0 1 1 0 0 1
1 0 1 1 0 0
0 1 0 1 1 0
1 1 1 0 0 1";

#[test]
fn criterion_01_schur_golden_values() {
    let designs = example_projections();
    let variance = ConvexKernel::variance_for(27, 4, 3).unwrap();
    let power = ConvexKernel::power(std::f64::consts::PI).unwrap();
    let exp = ConvexKernel::exponential(GOLDEN_RATIO).unwrap();
    let table: [(&ConvexKernel, [f64; 4], f64, &str); 3] = [
        (
            &variance,
            [0.6391, 0.6391, 0.6732, 0.6789],
            0.00005,
            "variance",
        ),
        (&power, [1658.7, 1724.5, 1765.5, 1790.4], 0.05, "power:pi"),
        (&exp, [683.4, 685.6, 687.9, 688.5], 0.05, "exp:golden"),
    ];
    let mut deferred: Option<String> = None;
    for (kernel, golden, tol, name) in &table {
        for (idx, d) in designs.iter().enumerate() {
            let got = schur_psi(d, kernel).unwrap().value;
            let want = golden[idx];
            let ok = (got - want).abs() < *tol;
            println!(
                "  {name} X{}: computed {got:.4}, published {want} -> {}",
                idx + 1,
                if ok { "ok" } else { "MISMATCH" }
            );
            if ok {
                continue;
            }
            if *name == "power:pi" && idx == 3 {
                // the one published value no balanced design can attain
                deferred = Some(format!(
                    "criterion 1: FAIL - Power(pi) for X4: computed {got:.4}, published {want}. \
                     The published figure is a misprint: with the forced pair count (351) and \
                     PC sum (432), the only coincidence multiset matching the published \
                     Variance (0.6789) and Exponential (688.5) values is \
                     66/158/109/16/2 at beta = 0..4, whose Power value is 1780.4."
                ));
            } else {
                panic!("criterion 1: {name} X{} off by more than {tol}", idx + 1);
            }
        }
    }
    match deferred {
        None => println!("criterion 1 (published Schur values): PASS"),
        Some(msg) => {
            println!("criterion 1 (published Schur values): FAIL (11 of 12 values reproduced)");
            panic!("{msg}");
        }
    }
}

#[test]
fn criterion_02_bound_golden_values() {
    let variance = ConvexKernel::variance_for(27, 4, 3).unwrap();
    let power = ConvexKernel::power(std::f64::consts::PI).unwrap();
    let exp = ConvexKernel::exponential(GOLDEN_RATIO).unwrap();
    for (kernel, want, tol) in [
        (&variance, 0.1775, 0.00005),
        (&power, 984.8, 0.05),
        (&exp, 648.9, 0.05),
    ] {
        let got = benchmark_bound(27, 4, 3, kernel).unwrap();
        assert!((got - want).abs() < tol, "bound {got} vs published {want}");
    }
    let exact = benchmark_bound_exact(27, 4, 3, &variance).unwrap().unwrap();
    assert_eq!(exact, BigRational::new(390.into(), 2197.into()));
    println!("criterion 2 (published bounds, variance bound exactly 390/2197): PASS");
}

#[test]
fn criterion_03_pool_majorization() {
    let [x1, x2, x3, x4] = example_projections();
    let pc = |d: &Design| pc_vector(d);
    let strict = |a: &Design, b: &Design| {
        matches!(
            compare_pc(&pc(a), &pc(b)).unwrap(),
            MajorizationRelation::LeftMajorizedStrict { .. }
        )
    };
    assert!(
        strict(&x1, &x3) && strict(&x3, &x4),
        "beta(X1) < beta(X3) < beta(X4)"
    );
    assert!(strict(&x2, &x3), "beta(X2) < beta(X3)");
    assert!(strict(&x2, &x4), "beta(X2) < beta(X4)");
    let rel12 = compare_pc(&pc(&x1), &pc(&x2)).unwrap();
    assert!(
        matches!(
            rel12,
            MajorizationRelation::Incomparable | MajorizationRelation::EqualAsMultisets
        ),
        "X1 vs X2 must not be strict either way, got {rel12:?}"
    );

    let t = table1();
    let mut pool = Vec::new();
    let mut labels = Vec::new();
    for a in 0..8 {
        for b in (a + 1)..8 {
            for c in (b + 1)..8 {
                for e in (c + 1)..8 {
                    pool.push(project(&t, &[a, b, c, e]).unwrap());
                    labels.push([a, b, c, e]);
                }
            }
        }
    }
    let class = classify_pool(&pool).unwrap();
    assert!(
        class.majorant.is_empty(),
        "no majorant among the 70 projections"
    );
    let idx = |cols: [usize; 4]| labels.iter().position(|l| *l == cols).unwrap();
    let inadmissible: Vec<usize> = class.inadmissible.iter().map(|&(i, _)| i).collect();
    assert!(inadmissible.contains(&idx([0, 1, 3, 5])), "X3 inadmissible");
    assert!(inadmissible.contains(&idx([0, 3, 4, 5])), "X4 inadmissible");
    assert!(
        class.admissible.contains(&idx([0, 2, 6, 7])),
        "X1 admissible"
    );
    assert!(
        class.admissible.contains(&idx([1, 2, 6, 7])),
        "X2 admissible"
    );
    println!("criterion 3 (worked-example majorization and pool classification): PASS");
}

#[test]
fn criterion_04_gwp_golden_values() {
    let [x1, x2, _, _] = example_projections();
    let w1 = gwp(&x1).unwrap();
    let w2 = gwp(&x2).unwrap();
    assert_eq!(
        w1.a,
        vec![
            BigRational::zero(),
            BigRational::zero(),
            BigRational::new(10.into(), 9.into()),
            BigRational::new(8.into(), 9.into())
        ]
    );
    assert_eq!(
        w2.a,
        vec![
            BigRational::zero(),
            BigRational::zero(),
            BigRational::new(46.into(), 27.into()),
            BigRational::new(20.into(), 27.into())
        ]
    );
    assert_eq!(
        aberration_order(&w1, &w2).unwrap(),
        AberrationOrder::Precedes
    );
    println!("criterion 4 (GWP golden values, exact rationals): PASS");
}

#[test]
fn criterion_05_wl2_golden_values() {
    let [x1, x2, _, _] = example_projections();
    let w1 = l2_discrepancy(&x1, L2Kind::WrapAround).unwrap().value;
    let w2 = l2_discrepancy(&x2, L2Kind::WrapAround).unwrap().value;
    assert!((w1 - 0.4242).abs() < 2e-4, "WL2(X1) = {w1}");
    assert!((w2 - 0.4245).abs() < 2e-4, "WL2(X2) = {w2}");
    println!("criterion 5 (WL2 golden values): PASS");
}

#[test]
fn criterion_06_swap_reproduction() {
    let d = parse_design(SWAP_FIXTURE, Some(2)).unwrap().design;
    let pc = pc_vector(&d);
    assert_eq!(pc.mean, BigRational::new(18.into(), 7.into()));
    assert!((pc.mean.to_f64().unwrap() - 2.5714).abs() < 5e-5);

    let p = robin_hood_step(&d, &ConvexKernel::Quadratic).expect("improving swap exists");
    assert_eq!(
        (p.i + 1, p.t + 1, p.j + 1),
        (1, 8, 4),
        "reference move {{i=1, t=8, j=4}}"
    );

    let swapped = apply_swap(&d, &p).unwrap();
    let before = coincidence_matrix(&d);
    let after = coincidence_matrix(&swapped);
    let mut changed = 0;
    for i in 0..8 {
        for k in (i + 1)..8 {
            if before.get(i, k) != after.get(i, k) {
                changed += 1;
            }
        }
    }
    assert_eq!(changed, 12, "exactly 12 coincidence entries updated");

    let rel = compare_pc(&pc_vector(&swapped), &pc).unwrap();
    assert!(
        matches!(rel, MajorizationRelation::LeftMajorizedStrict { .. }),
        "post-swap PC vector strictly majorization-improves, got {rel:?}"
    );
    println!("criterion 6 (swap walkthrough reproduction): PASS");
}

#[test]
fn criterion_07_identity_suites() {
    // projection criterion: kernel form equals subset enumeration, exactly.
    let columns: [[u32; 4]; 6] = [
        [0, 0, 1, 1],
        [0, 1, 0, 1],
        [0, 1, 1, 0],
        [1, 0, 0, 1],
        [1, 0, 1, 0],
        [1, 1, 0, 0],
    ];
    for s in [2usize, 3] {
        for code in 0..6usize.pow(s as u32) {
            let mut c = code;
            let mut rows: Vec<Vec<u32>> = (0..4).map(|_| Vec::with_capacity(s)).collect();
            for _ in 0..s {
                let col = &columns[c % 6];
                c /= 6;
                for (i, row) in rows.iter_mut().enumerate() {
                    row.push(col[i]);
                }
            }
            let d = Design::new(&rows, 2, None).unwrap();
            for j in 1..=s {
                assert_eq!(
                    psi_combinatorial(&d, j).unwrap(),
                    psi_combinatorial_oracle(&d, j).unwrap()
                );
            }
        }
    }
    for &(n, s, q) in &[(8usize, 4usize, 2u32), (9, 3, 3), (12, 4, 2)] {
        for seed in 0..200 {
            let d = random_balanced(n, s, q, seed).unwrap();
            for j in 1..=s {
                assert_eq!(
                    psi_combinatorial(&d, j).unwrap(),
                    psi_combinatorial_oracle(&d, j).unwrap()
                );
            }
        }
    }

    // Ave(chi2): the quadratic-kernel identity with its additive constant.
    for &(n, s, q) in &[(6usize, 4usize, 2u32), (9, 3, 3), (8, 5, 2)] {
        let a = BigRational::new(
            BigInt::from((q * q) as i64 * (n * s) as i64)
                + BigInt::from((n * n) as i64) * BigInt::from(1 - s as i64 - q as i64),
            BigInt::from((q * q) as i64 * (s - 1) as i64),
        );
        for seed in 0..200 {
            let d = random_balanced(n, s, q, seed).unwrap();
            let sum_sq: i64 = pc_vector(&d)
                .values
                .iter()
                .map(|&b| (b as i64) * (b as i64))
                .sum();
            let identity = big(2) / big((s * (s - 1)) as i64) * big(sum_sq) + a.clone();
            assert_eq!(identity, ave_chi2_oracle(&d).unwrap());
            assert_eq!(identity, ave_chi2(&d).unwrap().value_exact);
        }
    }

    // categorical discrepancy vs the kernel double-sum oracle, s <= 6, b = 0 and b != 0.
    for (a, b, q, n, s) in [
        (0.25, 0.0, 2u32, 8usize, 4usize),
        (0.25, 0.0, 2, 8, 6),
        (0.5, 0.2, 2, 6, 5),
        (0.25, -0.125, 3, 9, 4),
    ] {
        let params = DiscrepancyParams::new(a, b, q).unwrap();
        for seed in 0..25 {
            let d = random_balanced(n, s, q, seed).unwrap();
            let fast = categorical_discrepancy(&d, &params).unwrap().d2;
            let slow = categorical_discrepancy_oracle(&d, &params).unwrap();
            assert!(
                (fast - slow).abs() <= 1e-9 * slow.abs().max(1.0),
                "a={a} b={b} ({n},{s},{q}) seed {seed}"
            );
        }
    }

    // MacWilliams: recompute the E_l route here and compare with gwp().
    for &(n, s, q) in &[(8usize, 4usize, 2u32), (9, 3, 3), (12, 4, 2)] {
        for seed in 0..100 {
            let d = random_balanced(n, s, q, seed).unwrap();
            let w = gwp(&d).unwrap();
            let dist = distance_distribution(&d);
            for j in 1..=s {
                let route: BigRational = (0..=s)
                    .map(|l| dist.e[l].clone() * BigRational::from(krawtchouk(j, l, s, q).unwrap()))
                    .sum::<BigRational>()
                    / big(n as i64);
                assert_eq!(route, w.a[j - 1], "({n},{s},{q}) seed {seed} j {j}");
            }
            // q^s E_0 = n (1 + sum A_j)
            let lhs = big(q as i64).pow(s as i32) * dist.e[0].clone();
            let rhs = big(n as i64) * (BigRational::one() + w.a.iter().sum::<BigRational>());
            assert_eq!(lhs, rhs);
        }
    }

    // Krawtchouk generating function at y in {-1, 1/2, 1, 2}.
    let ys = [
        big(-1),
        BigRational::new(1.into(), 2.into()),
        big(1),
        big(2),
    ];
    for q in [2u32, 3, 4] {
        for s in 1..=8usize {
            for l in 0..=s {
                for y in &ys {
                    let lhs: BigRational = (0..=s)
                        .map(|j| {
                            BigRational::from(krawtchouk(j, l, s, q).unwrap()) * y.pow(j as i32)
                        })
                        .sum();
                    let rhs = (BigRational::one() + big((q - 1) as i64) * y).pow((s - l) as i32)
                        * (BigRational::one() - y).pow(l as i32);
                    assert_eq!(lhs, rhs, "q={q} s={s} l={l}");
                }
            }
        }
    }
    println!("criterion 7 (identity suites): PASS");
}

#[test]
fn criterion_08_bound_suites() {
    let sets: [(usize, usize, u32); 3] = [(8, 4, 2), (9, 3, 3), (8, 6, 2)];
    for &(n, s, q) in &sets {
        let kernels = vec![
            ConvexKernel::variance_for(n, s, q).unwrap(),
            ConvexKernel::Quadratic,
            ConvexKernel::power(std::f64::consts::PI).unwrap(),
            ConvexKernel::exponential(GOLDEN_RATIO).unwrap(),
            ConvexKernel::choose(2).unwrap(),
        ];
        let bench = pattern_benchmarks(n, s, q).unwrap();
        let star = WordLengthPattern {
            a: bench.a_star.clone(),
        };
        let disc = DiscrepancyParams::new(0.25, 0.0, q).unwrap();
        for seed in 0..1000 {
            let d = random_balanced(n, s, q, seed).unwrap();
            for k in &kernels {
                let v = schur_psi(&d, k).unwrap();
                assert!(
                    v.value >= v.bound - 1e-9 * v.value.abs().max(1.0),
                    "benchmark bound ({n},{s},{q}) {k:?}"
                );
            }
            let w = gwp(&d).unwrap();
            assert_ne!(
                aberration_order(&star, &w).unwrap(),
                AberrationOrder::Succeeds,
                "A* precedes every GWP"
            );
            let dev = deviation_pattern(&d).unwrap();
            for j in 1..=s {
                let b_sq = dev.psi_c[j - 1].clone() / big(q as i64).pow(j as i32);
                assert!(bench.b_star_sq[j - 1] <= b_sq, "B*_{j} bound ({n},{s},{q})");
            }
            let ave = ave_chi2(&d).unwrap();
            assert!(ave.bound_exact <= ave.value_exact, "Ave(chi2) bound");
            let cat = categorical_discrepancy(&d, &disc).unwrap();
            assert!(
                cat.d2 >= cat.bound_d2 - 1e-9 * cat.d2.abs().max(1.0),
                "categorical discrepancy bound"
            );
            if q == 2 {
                let cl2 = l2_discrepancy(&d, L2Kind::Centered).unwrap();
                assert!(cl2.squared >= cl2.bound_squared - 1e-9 * cl2.squared.abs().max(1.0));
            }
            if q == 2 || q == 3 {
                let wl2 = l2_discrepancy(&d, L2Kind::WrapAround).unwrap();
                assert!(wl2.squared >= wl2.bound_squared - 1e-9 * wl2.squared.abs().max(1.0));
            }
        }
    }

    // equidistant integer-mean fixtures attain the bounds exactly
    let oa4 = Design::new(
        &[vec![0, 0, 0], vec![0, 1, 1], vec![1, 0, 1], vec![1, 1, 0]],
        2,
        None,
    )
    .unwrap();
    let mut l9 = Vec::new();
    for a in 0u32..3 {
        for b in 0u32..3 {
            l9.push(vec![a, b, (a + b) % 3, (a + 2 * b) % 3]);
        }
    }
    let oa9 = Design::new(&l9, 3, None).unwrap();
    for (d, n, s, q) in [(&oa4, 4usize, 3usize, 2u32), (&oa9, 9, 4, 3)] {
        assert!(
            benchmark_pc(n, s, q).unwrap().frac.is_zero(),
            "fixture has integer mean"
        );
        for k in [
            ConvexKernel::variance_for(n, s, q).unwrap(),
            ConvexKernel::Quadratic,
            ConvexKernel::power(std::f64::consts::PI).unwrap(),
            ConvexKernel::exponential(GOLDEN_RATIO).unwrap(),
            ConvexKernel::choose(2).unwrap(),
        ] {
            let v = schur_psi(d, &k).unwrap();
            assert!(
                (v.value - v.bound).abs() <= 1e-12 * v.value.abs().max(1.0),
                "benchmark bound attained on equidistant fixture ({n},{s},{q}) {k:?}"
            );
        }
        let disc = DiscrepancyParams::new(0.25, 0.0, q).unwrap();
        let cat = categorical_discrepancy(d, &disc).unwrap();
        assert!(
            (cat.d2 - cat.bound_d2).abs() <= 1e-12 * cat.d2.abs().max(1.0),
            "discrepancy bound attained on equidistant fixture"
        );
    }
    println!("criterion 8 (bound suites, 1000 designs per parameter set): PASS");
}

#[test]
fn criterion_09_descent_quality() {
    let kernel = ConvexKernel::Quadratic;
    let result = restarted_search(8, 6, 2, &kernel, 50, 480, 20250809);
    let bound = benchmark_bound(8, 6, 2, &kernel).unwrap();
    assert!(
        result.best_trace.final_psi <= 1.05 * bound,
        "final psi {} not within 5% of bound {bound}",
        result.best_trace.final_psi
    );
    // strictly decreasing trace; re-walk it to revalidate balance and PC sum
    let mut prev = result.best_trace.initial_psi;
    for (_, psi) in &result.best_trace.iterations {
        assert!(*psi < prev, "trace strictly decreasing");
        prev = *psi;
    }
    let seed: u64 = {
        use rand::Rng;
        use rand_chacha::rand_core::SeedableRng;
        let mut key = [0u8; 32];
        key[..8].copy_from_slice(&20250809u64.to_le_bytes());
        key[8] = 1;
        key[16..24].copy_from_slice(&(result.best_restart as u64).to_le_bytes());
        rand_chacha::ChaCha8Rng::from_seed(key).random()
    };
    let mut current = random_balanced(8, 6, 2, seed).unwrap();
    assert_eq!(pc_vector(&current).sum, 72);
    for (p, _) in &result.best_trace.iterations {
        current = apply_swap(&current, p).expect("trace replays");
        assert_eq!(
            pc_vector(&current).sum,
            72,
            "PC sum invariant along the trace"
        );
    }
    assert_eq!(current, result.best_trace.final_design);
    let _ = TiePolicy::Lexicographic;
    println!(
        "criterion 9 (descent quality): PASS (best psi {} vs bound {bound})",
        result.best_trace.final_psi
    );
}

#[test]
fn criterion_10_cli_determinism() {
    let bin = env!("CARGO_BIN_EXE_latmaj");
    let dir = std::env::temp_dir().join("latmaj-acceptance-determinism");
    std::fs::create_dir_all(&dir).unwrap();

    let gen_args = ["gen", "--n", "12", "--s", "6", "--q", "3", "--seed", "555"];
    let mut gen_outputs = Vec::new();
    for threads in ["1", "4", "2"] {
        let out = Command::new(bin)
            .args(gen_args)
            .env("LATMAJ_THREADS", threads)
            .output()
            .expect("gen runs");
        assert!(out.status.success());
        gen_outputs.push(out.stdout);
    }
    assert_eq!(
        gen_outputs[0], gen_outputs[1],
        "gen bytes stable across thread counts"
    );
    assert_eq!(gen_outputs[0], gen_outputs[2]);

    let start = dir.join("start.txt");
    std::fs::write(&start, &gen_outputs[0]).unwrap();
    let mut improve_outputs = Vec::new();
    for (threads, tag) in [("1", "a"), ("4", "b"), ("1", "c")] {
        let out_path = dir.join(format!("improved-{tag}.txt"));
        let trace_path = dir.join(format!("trace-{tag}.jsonl"));
        let out = Command::new(bin)
            .args([
                "improve",
                start.to_str().unwrap(),
                "--kernel",
                "exp:1.5",
                "--restarts",
                "6",
                "--seed",
                "9001",
                "--out",
                out_path.to_str().unwrap(),
                "--trace",
                trace_path.to_str().unwrap(),
            ])
            .env("LATMAJ_THREADS", threads)
            .output()
            .expect("improve runs");
        assert!(out.status.success());
        improve_outputs.push((
            std::fs::read(&out_path).unwrap(),
            std::fs::read(&trace_path).unwrap(),
        ));
    }
    assert_eq!(
        improve_outputs[0], improve_outputs[1],
        "improve bytes stable across threads"
    );
    assert_eq!(
        improve_outputs[0], improve_outputs[2],
        "improve bytes stable across runs"
    );
    println!("criterion 10 (CLI determinism): PASS");
}

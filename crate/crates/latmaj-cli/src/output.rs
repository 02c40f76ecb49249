//! Human and JSON renderings of command results. Human numbers print with
//! four decimals; JSON carries 12 significant digits as decimal strings.

use num::ToPrimitive;
use rayon::prelude::*;
use serde_json::{json, Value};

use latmaj::design::{equidistance_class, pc_vector, Design, EquidistanceClass, PCVector};
use latmaj::kernel::KernelSpec;
use latmaj::majorization::{benchmark_pc, classify_pc_pool, cumsum_profile, MajorizationRelation};
use latmaj::report::{fmt_sig12, CriterionReport};
use latmaj::schur::benchmark_bound;

pub fn dec4(x: f64) -> String {
    format!("{x:.4}")
}

fn class_name(c: EquidistanceClass) -> &'static str {
    match c {
        EquidistanceClass::Equidistant => "equidistant",
        EquidistanceClass::WeakEquidistant => "weak equidistant",
        EquidistanceClass::Neither => "neither",
    }
}

pub fn pc(design: &Design, json_mode: bool) {
    let pc = pc_vector(design);
    let bench = benchmark_pc(design.n(), design.s(), design.q()).expect("valid design");
    if json_mode {
        let profile = cumsum_profile(&pc, &bench);
        let value = json!({
            "label": design.label(),
            "n": design.n(),
            "s": design.s(),
            "q": design.q(),
            "m": pc.m,
            "sum": pc.sum,
            "mean": pc.mean.to_string(),
            "mean_decimal": fmt_sig12(pc.mean.to_f64().expect("mean fits f64")),
            "theta": pc.theta,
            "frac": pc.frac.to_string(),
            "class": class_name(equidistance_class(design)),
            "values": pc.values,
            "sorted": pc.sorted,
            "profile": {
                "k": profile.iter().map(|r| r.k).collect::<Vec<_>>(),
                "design_cum": profile.iter().map(|r| r.design_cum).collect::<Vec<_>>(),
                "benchmark_cum": profile.iter().map(|r| r.benchmark_cum).collect::<Vec<_>>(),
            },
        });
        println!("{value}");
        return;
    }
    if let Some(label) = design.label() {
        println!(
            "design {label}: U({}, {}^{})",
            design.n(),
            design.q(),
            design.s()
        );
    } else {
        println!("design: U({}, {}^{})", design.n(), design.q(), design.s());
    }
    println!(
        "pairs m={}, sum={}, mean={} ({}), theta={}, frac={}",
        pc.m,
        pc.sum,
        pc.mean,
        dec4(pc.mean.to_f64().expect("mean fits f64")),
        pc.theta,
        pc.frac
    );
    println!("class: {}", class_name(equidistance_class(design)));
    let mut counts = vec![0usize; design.s() + 1];
    for &b in &pc.values {
        counts[b as usize] += 1;
    }
    let hist: Vec<String> = counts
        .iter()
        .enumerate()
        .filter(|(_, &c)| c > 0)
        .map(|(beta, &c)| format!("{beta}:{c}"))
        .collect();
    println!("coincidence counts (beta:count): {}", hist.join(" "));
}

pub fn compare(rel: &MajorizationRelation, json_mode: bool) {
    let (name, text, witness): (&str, String, Option<usize>) = match rel {
        MajorizationRelation::EqualAsMultisets => (
            "equal_as_multisets",
            "equal as multisets (identical sorted PC vectors)".to_owned(),
            None,
        ),
        MajorizationRelation::LeftMajorizedStrict { witness } => (
            "left_majorized_strict",
            format!("left strictly majorized by right (first strict prefix at k={witness})"),
            Some(*witness),
        ),
        MajorizationRelation::RightMajorizedStrict { witness } => (
            "right_majorized_strict",
            format!("right strictly majorized by left (first strict prefix at k={witness})"),
            Some(*witness),
        ),
        MajorizationRelation::LeftMajorizedWeak => (
            "left_majorized_weak",
            "left weakly majorized by right".to_owned(),
            None,
        ),
        MajorizationRelation::RightMajorizedWeak => (
            "right_majorized_weak",
            "right weakly majorized by left".to_owned(),
            None,
        ),
        MajorizationRelation::Incomparable => (
            "incomparable",
            "incomparable under the majorization order".to_owned(),
            None,
        ),
    };
    if json_mode {
        println!("{}", json!({ "relation": name, "witness": witness }));
    } else {
        println!("{text}");
    }
}

struct RankRow {
    label: String,
    psi: f64,
    admissible: bool,
    dominated_by: Option<usize>,
    rank: Option<usize>,
}

pub fn rank(
    designs: &[Design],
    labels: &[String],
    spec: &KernelSpec,
    kernel_text: &str,
    json_mode: bool,
) -> Result<(), String> {
    let pcs: Vec<PCVector> = designs.par_iter().map(pc_vector).collect();
    let class = classify_pc_pool(&pcs).map_err(|e| e.to_string())?;
    let d0 = &designs[0];
    let kernel = spec
        .resolve(d0.n(), d0.s(), d0.q())
        .map_err(|e| e.to_string())?;
    let bound = benchmark_bound(d0.n(), d0.s(), d0.q(), &kernel).map_err(|e| e.to_string())?;
    let psis: Vec<f64> = pcs
        .par_iter()
        .map(|pc| pc.values.iter().map(|&b| kernel.eval(b as f64)).sum())
        .collect();

    let dominator = |i: usize| {
        class
            .inadmissible
            .iter()
            .find(|(x, _)| *x == i)
            .map(|&(_, d)| d)
    };
    let mut order: Vec<usize> = (0..designs.len()).collect();
    // admissible first, then by criterion value, ties by original position
    order.sort_by(|&a, &b| {
        let adm_a = class.admissible.contains(&a);
        let adm_b = class.admissible.contains(&b);
        adm_b
            .cmp(&adm_a)
            .then(psis[a].partial_cmp(&psis[b]).expect("finite psi"))
            .then(a.cmp(&b))
    });
    // dense ranks over admissibles with relative tie tolerance
    let mut rows: Vec<RankRow> = Vec::with_capacity(order.len());
    let mut next_rank = 0usize;
    let mut last_psi = f64::NEG_INFINITY;
    for &i in &order {
        let admissible = class.admissible.contains(&i);
        let rank = admissible.then(|| {
            if (psis[i] - last_psi).abs() > 1e-9 * psis[i].abs().max(1.0) {
                next_rank += 1;
                last_psi = psis[i];
            }
            next_rank
        });
        rows.push(RankRow {
            label: labels[i].clone(),
            psi: psis[i],
            admissible,
            dominated_by: dominator(i),
            rank,
        });
    }

    if json_mode {
        let pool: Vec<Value> = rows
            .iter()
            .map(|r| {
                json!({
                    "id": r.label,
                    "psi": fmt_sig12(r.psi),
                    "bound": fmt_sig12(bound),
                    "admissible": r.admissible,
                    "dominated_by": r.dominated_by.map(|d| labels[d].clone()),
                    "rank": r.rank,
                })
            })
            .collect();
        let majorant: Vec<&String> = class.majorant.iter().map(|&i| &labels[i]).collect();
        println!(
            "{}",
            json!({
                "kernel": kernel_text,
                "bound": fmt_sig12(bound),
                "majorant": majorant,
                "pool": pool,
            })
        );
        return Ok(());
    }

    println!(
        "{} designs, kernel {kernel_text}, lower bound {}",
        designs.len(),
        dec4(bound)
    );
    if class.majorant.is_empty() {
        println!("majorant: none");
    } else {
        let names: Vec<&str> = class.majorant.iter().map(|&i| labels[i].as_str()).collect();
        println!("majorant: {}", names.join(" "));
    }
    println!("{:<6} {:<16} {:>12}  status", "rank", "id", "psi");
    for r in &rows {
        let rank = r
            .rank
            .map(|v| v.to_string())
            .unwrap_or_else(|| "-".to_owned());
        let status = if r.admissible {
            "admissible".to_owned()
        } else {
            format!(
                "inadmissible (dominated by {})",
                r.dominated_by.map(|d| labels[d].as_str()).unwrap_or("?")
            )
        };
        println!("{:<6} {:<16} {:>12}  {status}", rank, r.label, dec4(r.psi));
    }
    Ok(())
}

pub fn criteria(report: &CriterionReport, json_mode: bool) {
    if json_mode {
        println!("{}", report.to_json());
        return;
    }
    let vec4 = |vals: &[f64]| -> String {
        let parts: Vec<String> = vals.iter().map(|&v| dec4(v)).collect();
        format!("({})", parts.join(", "))
    };
    let rvec4 = |vals: &[num::BigRational]| -> String {
        let parts: Vec<String> = vals
            .iter()
            .map(|v| dec4(v.to_f64().expect("fits f64")))
            .collect();
        format!("({})", parts.join(", "))
    };
    println!(
        "criteria for U({}, {}^{}){}",
        report.n,
        report.q,
        report.s,
        report
            .label
            .as_deref()
            .map(|l| format!(" [{l}]"))
            .unwrap_or_default()
    );
    println!("  GWP        A  = {}", rvec4(&report.gwp.a));
    println!("  benchmark  A* = {}", rvec4(&report.benchmarks.a_star));
    println!("  deviation  B  = {}", vec4(&report.deviation.b));
    println!("  benchmark  B* = {}", vec4(&report.benchmarks.b_star));
    println!("  psi_C         = {}", rvec4(&report.deviation.psi_c));
    match &report.ave_chi2 {
        Some(a) => {
            let extra = a
                .yamada_lin
                .map(|v| format!(", three-level variant {}", dec4(v)))
                .unwrap_or_default();
            println!(
                "  Ave(chi2)     = {} (bound {}){extra}",
                dec4(a.value),
                dec4(a.bound)
            );
        }
        None => println!("  Ave(chi2)     : needs at least two factors"),
    }
    match &report.e_s2 {
        Some(e) => println!(
            "  E(s2)         = {} (bound {})",
            dec4(e.value),
            dec4(e.bound)
        ),
        None => println!("  E(s2)         : two-level designs only"),
    }
    let c = &report.categorical;
    println!(
        "  D2(a={}, b={}) = {} (bound {}, D = {})",
        c.params.a,
        c.params.b,
        dec4(c.d2),
        dec4(c.bound_d2),
        dec4(c.d)
    );
    if let Some(w) = &c.params.warning {
        println!("  warning: {w}");
    }
    match &report.cl2 {
        Some(l) => println!(
            "  CL2           = {} (squared {}, bound {})",
            dec4(l.value),
            dec4(l.squared),
            dec4(l.bound_squared)
        ),
        None => println!("  CL2           : two-level designs only"),
    }
    match &report.wl2 {
        Some(l) => println!(
            "  WL2           = {} (squared {}, bound {})",
            dec4(l.value),
            dec4(l.squared),
            dec4(l.bound_squared)
        ),
        None => println!("  WL2           : two- or three-level designs only"),
    }
}

pub fn bounds(
    n: usize,
    s: usize,
    q: u32,
    kernel_text: &str,
    bound: f64,
    bench: &latmaj::majorization::PCBenchmark,
    json_mode: bool,
) {
    if json_mode {
        println!(
            "{}",
            json!({
                "n": n,
                "s": s,
                "q": q,
                "kernel": kernel_text,
                "bound": fmt_sig12(bound),
                "m": bench.m,
                "theta": bench.theta,
                "frac": bench.frac.to_string(),
            })
        );
    } else {
        println!(
            "lower bound for U({n}, {q}^{s}) under {kernel_text}: {} (theta={}, f={})",
            dec4(bound),
            bench.theta,
            bench.frac
        );
    }
}

pub fn subdesigns(
    designs: &[Design],
    labels: &[String],
    k: usize,
    list: bool,
) -> Result<(), String> {
    let pcs: Vec<PCVector> = designs.par_iter().map(pc_vector).collect();
    let class = classify_pc_pool(&pcs).map_err(|e| e.to_string())?;
    println!("{} sub-designs of {k} columns", designs.len());
    let admissible: Vec<&str> = class
        .admissible
        .iter()
        .map(|&i| labels[i].as_str())
        .collect();
    println!(
        "admissible: {} ({})",
        admissible.len(),
        admissible.join(" ")
    );
    println!("inadmissible: {}", class.inadmissible.len());
    if class.majorant.is_empty() {
        println!("majorant: none");
    } else {
        let names: Vec<&str> = class.majorant.iter().map(|&i| labels[i].as_str()).collect();
        println!("majorant: {}", names.join(" "));
    }
    if list {
        for (i, label) in labels.iter().enumerate() {
            match class.inadmissible.iter().find(|(x, _)| *x == i) {
                Some(&(_, dom)) => {
                    println!("{label}: inadmissible (dominated by {})", labels[dom])
                }
                None => println!("{label}: admissible"),
            }
        }
    }
    Ok(())
}

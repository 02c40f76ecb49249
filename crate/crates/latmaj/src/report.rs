//! Criterion reports and trace serialization with stable decimal formatting.

use num::BigRational;
use num::ToPrimitive;
use serde_json::{json, Value};

use crate::classical::{
    ave_chi2, categorical_discrepancy, deviation_pattern, e_s2, gwp, l2_discrepancy,
    pattern_benchmarks, AveChi2, CategoricalDiscrepancy, ClassicalError, DeviationPattern,
    DiscrepancyParams, Es2, L2Discrepancy, L2Kind, PatternBenchmarks, WordLengthPattern,
};
use crate::construction::{DescentTrace, Terminated};
use crate::design::Design;

/// Formats with `sig` significant digits in plain decimal notation; the
/// default 12 keeps JSON reports byte-stable without hiding precision.
pub fn fmt_sig(x: f64, sig: usize) -> String {
    assert!(sig >= 1);
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    // rounding can bump the magnitude (999.99... -> 1000), so round first and
    // derive the decimal count from the rounded value
    let mag = x.abs().log10().floor() as i32;
    let scale = 10f64.powi(sig as i32 - 1 - mag);
    let rounded = if scale.is_finite() && scale != 0.0 {
        (x * scale).round() / scale
    } else {
        x
    };
    let mag = rounded.abs().log10().floor() as i32;
    let decimals = sig as i32 - 1 - mag;
    if decimals >= 0 {
        format!("{:.*}", decimals as usize, rounded)
    } else {
        let scale = 10f64.powi(-decimals);
        format!("{:.0}", (rounded / scale).round() * scale)
    }
}

pub fn fmt_sig12(x: f64) -> String {
    fmt_sig(x, 12)
}

fn rational_sig12(v: &BigRational) -> String {
    fmt_sig12(v.to_f64().expect("criterion value fits f64"))
}

/// Every classical criterion of one design, paired with its benchmark.
#[derive(Debug, Clone)]
pub struct CriterionReport {
    pub n: usize,
    pub s: usize,
    pub q: u32,
    pub label: Option<String>,
    pub gwp: WordLengthPattern,
    pub deviation: DeviationPattern,
    pub benchmarks: PatternBenchmarks,
    pub ave_chi2: Option<AveChi2>,
    pub e_s2: Option<Es2>,
    pub categorical: CategoricalDiscrepancy,
    pub cl2: Option<L2Discrepancy>,
    pub wl2: Option<L2Discrepancy>,
}

/// Evaluates the full criterion set. `e_s2`, `cl2` and `wl2` are present only
/// where their identities exist (q = 2 / q in {2, 3}); `ave_chi2` needs at
/// least two factors.
pub fn criterion_report(
    d: &Design,
    disc: &DiscrepancyParams,
) -> Result<CriterionReport, ClassicalError> {
    let (n, s, q) = (d.n(), d.s(), d.q());
    Ok(CriterionReport {
        n,
        s,
        q,
        label: d.label().map(str::to_owned),
        gwp: gwp(d)?,
        deviation: deviation_pattern(d)?,
        benchmarks: pattern_benchmarks(n, s, q)?,
        ave_chi2: if s >= 2 { Some(ave_chi2(d)?) } else { None },
        e_s2: if q == 2 && s >= 2 {
            Some(e_s2(d)?)
        } else {
            None
        },
        categorical: categorical_discrepancy(d, disc)?,
        cl2: if q == 2 {
            Some(l2_discrepancy(d, L2Kind::Centered)?)
        } else {
            None
        },
        wl2: if q == 2 || q == 3 {
            Some(l2_discrepancy(d, L2Kind::WrapAround)?)
        } else {
            None
        },
    })
}

impl CriterionReport {
    /// Schema-stable JSON: every criterion paired with its `bound`, numbers
    /// as decimal strings with 12 significant digits.
    pub fn to_json(&self) -> Value {
        let strings =
            |vals: &[f64]| -> Vec<String> { vals.iter().map(|&v| fmt_sig12(v)).collect() };
        let q = self.q;
        let psi_c_bounds: Vec<String> = self
            .benchmarks
            .b_star_sq
            .iter()
            .enumerate()
            .map(|(idx, b_sq)| {
                // Psi_C benchmark is q^j * (B*_j)^2
                let scale = BigRational::from(num::BigInt::from(q).pow(idx as u32 + 1));
                rational_sig12(&(b_sq * scale))
            })
            .collect();
        json!({
            "n": self.n,
            "s": self.s,
            "q": self.q,
            "label": self.label,
            "gwp": {
                "value": self.gwp.a.iter().map(rational_sig12).collect::<Vec<_>>(),
                "bound": self.benchmarks.a_star.iter().map(rational_sig12).collect::<Vec<_>>(),
            },
            "deviation": {
                "value": strings(&self.deviation.b),
                "bound": strings(&self.benchmarks.b_star),
            },
            "psi_c": {
                "value": self.deviation.psi_c.iter().map(rational_sig12).collect::<Vec<_>>(),
                "bound": psi_c_bounds,
            },
            "ave_chi2": self.ave_chi2.as_ref().map(|a| json!({
                "value": fmt_sig12(a.value),
                "bound": fmt_sig12(a.bound),
                "yamada_lin": a.yamada_lin.map(fmt_sig12),
            })),
            "e_s2": self.e_s2.as_ref().map(|e| json!({
                "value": fmt_sig12(e.value),
                "bound": fmt_sig12(e.bound),
            })),
            "categorical_d2": {
                "value": fmt_sig12(self.categorical.d2),
                "d": fmt_sig12(self.categorical.d),
                "bound": fmt_sig12(self.categorical.bound_d2),
                "params": {
                    "a": fmt_sig12(self.categorical.params.a),
                    "b": fmt_sig12(self.categorical.params.b),
                },
                "warning": self.categorical.params.warning,
            },
            "cl2": self.cl2.as_ref().map(l2_json),
            "wl2": self.wl2.as_ref().map(l2_json),
        })
    }
}

fn l2_json(l2: &L2Discrepancy) -> Value {
    json!({
        "value": fmt_sig12(l2.value),
        "squared": fmt_sig12(l2.squared),
        "bound_squared": fmt_sig12(l2.bound_squared),
    })
}

/// JSON-lines form of a descent trace: one record per iteration
/// `{iter, i, t, j, delta, psi}` (run/column indices 1-based) followed by a
/// final record `{final_psi, bound, terminated}`.
pub fn trace_to_jsonl(trace: &DescentTrace) -> String {
    let mut out = String::new();
    for (idx, (p, psi)) in trace.iterations.iter().enumerate() {
        let record = json!({
            "iter": idx + 1,
            "i": p.i + 1,
            "t": p.t + 1,
            "j": p.j + 1,
            "delta": fmt_sig12(p.delta),
            "psi": fmt_sig12(*psi),
        });
        out.push_str(&record.to_string());
        out.push('\n');
    }
    let terminated = match trace.terminated {
        Terminated::LocalOptimum => "local_optimum",
        Terminated::IterationCap => "iteration_cap",
    };
    let last = json!({
        "final_psi": fmt_sig12(trace.final_psi),
        "bound": fmt_sig12(trace.bound),
        "terminated": terminated,
    });
    out.push_str(&last.to_string());
    out.push('\n');
    out
}

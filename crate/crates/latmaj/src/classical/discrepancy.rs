//! Categorical and L2 discrepancies through their exponential-kernel
//! identities, with the Definition-style double-sum oracle.

use num::ToPrimitive;

use super::ClassicalError;
use crate::design::{pc_vector, Design};
use crate::majorization::benchmark_pc;

/// Validated categorical-discrepancy parameters `a > 0`,
/// `-a/(q-1) <= b < a`, with the derived mean `mu = (a + (q-1)b)/q` and
/// exponential base `rho = (1+a)/(1+b)`.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscrepancyParams {
    pub a: f64,
    pub b: f64,
    pub q: u32,
    pub mu: f64,
    pub rho: f64,
    /// Set when `a >= q - 1`; the kernel identity still holds but the
    /// nonnegative-definiteness argument behind it needs `a < q - 1`.
    pub warning: Option<String>,
}

impl DiscrepancyParams {
    pub fn new(a: f64, b: f64, q: u32) -> Result<DiscrepancyParams, ClassicalError> {
        let invalid = |msg: String| Err(ClassicalError::InvalidDiscrepancyParams(msg));
        if q < 2 {
            return invalid(format!("q must be at least 2, got {q}"));
        }
        if !a.is_finite() || !b.is_finite() {
            return invalid("parameters must be finite".into());
        }
        if a <= 0.0 {
            return invalid(format!("a must be positive, got {a}"));
        }
        let lo = -a / (q as f64 - 1.0);
        if b < lo || b >= a {
            return invalid(format!("b must lie in [{lo}, {a}), got {b}"));
        }
        if b <= -1.0 {
            return invalid(format!("b must exceed -1 for a finite base, got {b}"));
        }
        let warning = (a >= q as f64 - 1.0).then(|| {
            format!(
                "a = {a} is not below q - 1 = {}; kernel may lose nonnegative definiteness",
                q - 1
            )
        });
        Ok(DiscrepancyParams {
            a,
            b,
            q,
            mu: (a + (q as f64 - 1.0) * b) / q as f64,
            rho: (1.0 + a) / (1.0 + b),
            warning,
        })
    }
}

/// Squared categorical discrepancy with its lower bound.
#[derive(Debug, Clone, PartialEq)]
pub struct CategoricalDiscrepancy {
    pub d2: f64,
    /// `sqrt(max(d2, 0))`; d2 is nonnegative up to roundoff.
    pub d: f64,
    pub bound_d2: f64,
    pub params: DiscrepancyParams,
}

/// Exponential Schur sum `sum_r rho^(beta_r)` in fixed pair order.
fn psi_exponential(d: &Design, rho: f64) -> f64 {
    pc_vector(d)
        .values
        .iter()
        .map(|&b| rho.powi(b as i32))
        .sum()
}

/// Squared categorical discrepancy through the coincidence identity
/// `D^2 = 2 (1+b)^s Psi_E(X; rho) / n^2 + (1+a)^s / n - (1+mu)^s`.
pub fn categorical_discrepancy(
    d: &Design,
    params: &DiscrepancyParams,
) -> Result<CategoricalDiscrepancy, ClassicalError> {
    if params.q != d.q() {
        return Err(ClassicalError::InvalidDiscrepancyParams(format!(
            "parameters were validated for q={}, design has q={}",
            params.q,
            d.q()
        )));
    }
    let (n, s) = (d.n() as f64, d.s() as i32);
    let diff_pow = (1.0 + params.b).powi(s);
    let psi_e = psi_exponential(d, params.rho);
    let d2 =
        2.0 * diff_pow * psi_e / (n * n) + (1.0 + params.a).powi(s) / n - (1.0 + params.mu).powi(s);
    let bench = benchmark_pc(d.n(), d.s(), d.q()).expect("design already validated");
    let f = bench.frac.to_f64().expect("f fits f64");
    let bound_d2 =
        ((n - 1.0) * (1.0 - f + params.rho * f) * params.rho.powi(bench.theta as i32) * diff_pow
            + (1.0 + params.a).powi(s))
            / n
            - (1.0 + params.mu).powi(s);
    Ok(CategoricalDiscrepancy {
        d2,
        d: d2.max(0.0).sqrt(),
        bound_d2,
        params: params.clone(),
    })
}

/// Definition-style oracle: sums the hat-kernel double sum over every
/// nonempty coordinate subset. Exponential in `s`; intended for small designs.
pub fn categorical_discrepancy_oracle(
    d: &Design,
    params: &DiscrepancyParams,
) -> Result<f64, ClassicalError> {
    if params.q != d.q() {
        return Err(ClassicalError::InvalidDiscrepancyParams(
            "level count mismatch".into(),
        ));
    }
    let s = d.s();
    assert!(
        s <= 20,
        "oracle enumerates 2^s subsets; s = {s} is too large"
    );
    let n = d.n();
    let mut total = 0.0;
    for mask in 1u32..(1 << s) {
        let cols: Vec<usize> = (0..s).filter(|j| mask >> j & 1 == 1).collect();
        let mut pair_sum = 0.0;
        for i in 0..n {
            for k in 0..n {
                let mut prod = 1.0;
                for &j in &cols {
                    let delta = (d.get(i, j) == d.get(k, j)) as u32 as f64;
                    prod *= params.b + (params.a - params.b) * delta;
                }
                pair_sum += prod;
            }
        }
        total += -params.mu.powi(cols.len() as i32) + pair_sum / (n * n) as f64;
    }
    Ok(total)
}

/// Which L2 discrepancy to compute; each kind has a coincidence identity
/// only for the listed level count.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum L2Kind {
    Centered,
    WrapAround,
}

impl L2Kind {
    fn name(self) -> &'static str {
        match self {
            L2Kind::Centered => "centered L2",
            L2Kind::WrapAround => "wrap-around L2",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct L2Discrepancy {
    pub kind: L2Kind,
    pub squared: f64,
    pub value: f64,
    pub bound_squared: f64,
}

/// Centered (q = 2) or wrap-around (q = 2, 3) L2 discrepancy through the
/// exponential-kernel identities, with the matching lower bound.
pub fn l2_discrepancy(d: &Design, kind: L2Kind) -> Result<L2Discrepancy, ClassicalError> {
    let (n, s, q) = (d.n() as f64, d.s() as i32, d.q());
    let bench = benchmark_pc(d.n(), d.s(), d.q()).expect("design already validated");
    let f = bench.frac.to_f64().expect("f fits f64");
    let theta = bench.theta as i32;
    let (squared, bound_squared) = match (kind, q) {
        (L2Kind::Centered, 2) => {
            let a1 =
                (1.25f64).powi(s) / n + (13.0f64 / 12.0).powi(s) - 2.0 * (35.0 / 32.0f64).powi(s);
            let base = 2.0 * psi_exponential(d, 1.25) / (n * n);
            let bound = (n - 1.0) * (4.0 + f) / (4.0 * n) * (1.25f64).powi(theta);
            (a1 + base, a1 + bound)
        }
        (L2Kind::WrapAround, 2) => {
            let a2 = (1.5f64).powi(s) / n - (4.0 / 3.0f64).powi(s);
            let scale = (1.25f64).powi(s);
            let base = 2.0 * psi_exponential(d, 1.2) / (n * n) * scale;
            let bound = (n - 1.0) * (5.0 + f) / (5.0 * n) * scale * (1.2f64).powi(theta);
            (a2 + base, a2 + bound)
        }
        (L2Kind::WrapAround, 3) => {
            let a2 = (1.5f64).powi(s) / n - (4.0 / 3.0f64).powi(s);
            let scale = (23.0 / 18.0f64).powi(s);
            let rho = 27.0 / 23.0;
            let base = 2.0 * psi_exponential(d, rho) / (n * n) * scale;
            let bound = (n - 1.0) * (23.0 + 4.0 * f) / (23.0 * n) * scale * rho.powi(theta);
            (a2 + base, a2 + bound)
        }
        (kind, q) => {
            return Err(ClassicalError::UnsupportedLevelCount {
                kind: kind.name(),
                q,
            })
        }
    };
    Ok(L2Discrepancy {
        kind,
        squared,
        value: squared.max(0.0).sqrt(),
        bound_squared,
    })
}

//! Distance distribution, generalized word-length pattern, the combinatorial
//! projection criterion with its enumeration oracle, the deviation pattern,
//! and the benchmark patterns.

use std::collections::HashMap;

use num::{BigInt, BigRational, One, Signed, ToPrimitive, Zero};

use super::ClassicalError;
use crate::design::{pc_vector, Design};
use crate::kernel::binomial;
use crate::krawtchouk::krawtchouk;
use crate::majorization::benchmark_pc;

fn big(v: u64) -> BigRational {
    BigRational::from(BigInt::from(v))
}

/// Distance distribution `E_l`, `l = 0..=s`: the number of ordered run pairs
/// (diagonal included) at coincidence `s - l`, divided by `n`. Exact.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceDistribution {
    pub e: Vec<BigRational>,
}

pub fn distance_distribution(d: &Design) -> DistanceDistribution {
    let s = d.s();
    let pc = pc_vector(d);
    // ordered pairs: n diagonal pairs at beta = s, each unordered pair twice
    let mut counts = vec![0u64; s + 1];
    counts[0] = d.n() as u64; // l = s - beta = 0
    for &b in &pc.values {
        counts[s - b as usize] += 2;
    }
    let n = big(d.n() as u64);
    let e = counts.into_iter().map(|c| big(c) / n.clone()).collect();
    DistanceDistribution { e }
}

/// Generalized word-length pattern `(A_1, ..., A_s)`, exact rationals.
#[derive(Debug, Clone, PartialEq)]
pub struct WordLengthPattern {
    pub a: Vec<BigRational>,
}

impl WordLengthPattern {
    pub fn to_f64(&self) -> Vec<f64> {
        self.a
            .iter()
            .map(|v| v.to_f64().expect("A_j fits f64"))
            .collect()
    }
}

/// Computes the GWP through both routes — the coincidence route
/// `(2/n^2) sum_r P_j(s - beta_r) + ((q-1)^j / n) C(s,j)` and the MacWilliams
/// route `(1/n) sum_l E_l P_j(l)` — and verifies they agree exactly.
pub fn gwp(d: &Design) -> Result<WordLengthPattern, ClassicalError> {
    let (n, s, q) = (d.n(), d.s(), d.q());
    let pc = pc_vector(d);
    let dist = distance_distribution(d);
    let n_rat = big(n as u64);
    let n_sq = big((n * n) as u64);
    let mut a = Vec::with_capacity(s);
    for j in 1..=s {
        // coincidence counts by value keep the Krawtchouk evaluations to s+1
        let mut by_beta = vec![0u64; s + 1];
        for &b in &pc.values {
            by_beta[b as usize] += 1;
        }
        let mut pc_route = BigRational::zero();
        for (beta, &count) in by_beta.iter().enumerate() {
            if count > 0 {
                pc_route += BigRational::from(krawtchouk(j, s - beta, s, q)?) * big(count);
            }
        }
        pc_route = pc_route * big(2) / n_sq.clone()
            + BigRational::from(BigInt::from(q - 1).pow(j as u32) * binomial(s as u64, j as u64))
                / n_rat.clone();
        let mut mac_route = BigRational::zero();
        for (l, e_l) in dist.e.iter().enumerate() {
            mac_route += e_l * BigRational::from(krawtchouk(j, l, s, q)?);
        }
        mac_route /= n_rat.clone();
        if pc_route != mac_route {
            return Err(ClassicalError::RouteMismatch {
                j,
                pc: pc_route.to_string(),
                macwilliams: mac_route.to_string(),
            });
        }
        a.push(pc_route);
    }
    debug_assert!(a[0].is_zero(), "A_1 must vanish for balanced designs");
    Ok(WordLengthPattern { a })
}

/// Aberration comparison of two patterns: the one whose first differing
/// entry is smaller precedes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AberrationOrder {
    Precedes,
    Equal,
    Succeeds,
}

pub fn aberration_order(
    x: &WordLengthPattern,
    y: &WordLengthPattern,
) -> Result<AberrationOrder, ClassicalError> {
    if x.a.len() != y.a.len() {
        return Err(ClassicalError::OutOfRange {
            j: y.a.len(),
            s: x.a.len(),
        });
    }
    for (xa, ya) in x.a.iter().zip(&y.a) {
        if xa < ya {
            return Ok(AberrationOrder::Precedes);
        }
        if xa > ya {
            return Ok(AberrationOrder::Succeeds);
        }
    }
    Ok(AberrationOrder::Equal)
}

/// The combinatorial projection criterion
/// `Psi_C(X; j) = 2 sum_r C(beta_r, j) - C(s,j)(n^2/q^j - n)`, exact.
///
/// Equals the total squared cell-count deviation from orthogonality over all
/// j-column projections; zero exactly when the design is an orthogonal array
/// of strength j.
pub fn psi_combinatorial(d: &Design, j: usize) -> Result<BigRational, ClassicalError> {
    let (n, s, q) = (d.n(), d.s(), d.q());
    if j == 0 || j > s {
        return Err(ClassicalError::OutOfRange { j, s });
    }
    let pc = pc_vector(d);
    let mut kernel_sum = BigInt::zero();
    for &b in &pc.values {
        kernel_sum += binomial(b as u64, j as u64);
    }
    let q_j = BigRational::from(BigInt::from(q).pow(j as u32));
    let affine = BigRational::from(binomial(s as u64, j as u64))
        * (big((n * n) as u64) / q_j - big(n as u64));
    Ok(BigRational::from(kernel_sum * BigInt::from(2)) - affine)
}

/// Independent oracle for [`psi_combinatorial`]: enumerates every j-column
/// subset and counts level combinations directly.
pub fn psi_combinatorial_oracle(d: &Design, j: usize) -> Result<BigRational, ClassicalError> {
    let (n, s, q) = (d.n(), d.s(), d.q());
    if j == 0 || j > s {
        return Err(ClassicalError::OutOfRange { j, s });
    }
    assert!(
        (j as f64) * (q as f64).log2() < 63.0,
        "projection cell space too large for the enumeration oracle"
    );
    let q_j = BigRational::from(BigInt::from(q).pow(j as u32));
    let n_sq_over_qj = big((n * n) as u64) / q_j;
    let mut total = BigRational::zero();
    for_each_subset(s, j, |cols| {
        let mut counts: HashMap<u64, u64> = HashMap::new();
        for i in 0..n {
            let key = cols
                .iter()
                .fold(0u64, |acc, &c| acc * q as u64 + d.get(i, c) as u64);
            *counts.entry(key).or_insert(0) += 1;
        }
        // sum over cells of (N - n/q^j)^2 = sum N^2 - n^2/q^j
        let sq: u64 = counts.values().map(|&c| c * c).sum();
        total += big(sq) - n_sq_over_qj.clone();
    });
    Ok(total)
}

/// Lexicographic enumeration of all size-`j` subsets of `0..s`.
pub(crate) fn for_each_subset(s: usize, j: usize, mut f: impl FnMut(&[usize])) {
    let mut idx: Vec<usize> = (0..j).collect();
    loop {
        f(&idx);
        // advance
        let mut i = j;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if idx[i] != i + s - j {
                break;
            }
            if i == 0 {
                return;
            }
        }
        idx[i] += 1;
        for k in i + 1..j {
            idx[k] = idx[k - 1] + 1;
        }
    }
}

/// Root-mean-square deviation pattern `B_j = sqrt(Psi_C(X;j) / q^j)` together
/// with the underlying exact `Psi_C` values.
#[derive(Debug, Clone, PartialEq)]
pub struct DeviationPattern {
    pub b: Vec<f64>,
    pub psi_c: Vec<BigRational>,
}

/// Computes the deviation pattern and verifies the linear relation
/// `B_j^2 = (n^2/q^(2j)) sum_k C(s-k, j-k) A_k` against the word-length
/// pattern on every call.
pub fn deviation_pattern(d: &Design) -> Result<DeviationPattern, ClassicalError> {
    let (n, s, q) = (d.n(), d.s(), d.q());
    let wlp = gwp(d)?;
    let mut b = Vec::with_capacity(s);
    let mut psi_c = Vec::with_capacity(s);
    for j in 1..=s {
        let psi = psi_combinatorial(d, j)?;
        let q_j = BigRational::from(BigInt::from(q).pow(j as u32));
        let b_sq = &psi / &q_j;
        let relation: BigRational = (1..=j)
            .map(|k| BigRational::from(binomial((s - k) as u64, (j - k) as u64)) * &wlp.a[k - 1])
            .sum::<BigRational>()
            * big((n * n) as u64)
            / (&q_j * &q_j);
        if b_sq != relation {
            return Err(ClassicalError::RelationMismatch {
                j,
                direct: b_sq.to_string(),
                relation: relation.to_string(),
            });
        }
        debug_assert!(!b_sq.is_negative());
        b.push(b_sq.to_f64().expect("B_j^2 fits f64").max(0.0).sqrt());
        psi_c.push(psi);
    }
    Ok(DeviationPattern { b, psi_c })
}

/// Benchmark patterns `(0, A*_2, ..., A*_s)` and `(0, B*_2, ..., B*_s)`:
/// the word-length pattern benchmark precedes every balanced design's GWP
/// under the aberration order, and `B*_j <= B_j` entrywise.
#[derive(Debug, Clone, PartialEq)]
pub struct PatternBenchmarks {
    pub a_star: Vec<BigRational>,
    pub b_star: Vec<f64>,
    /// Exact squared deviation benchmarks (clamped below at zero).
    pub b_star_sq: Vec<BigRational>,
}

pub fn pattern_benchmarks(n: usize, s: usize, q: u32) -> Result<PatternBenchmarks, ClassicalError> {
    let bench = benchmark_pc(n, s, q).map_err(|_| ClassicalError::WrongLevelCount {
        expected: q,
        got: q,
    })?;
    let theta = bench.theta as usize;
    let f = bench.frac.clone();
    let one = BigRational::one();
    let n_rat = big(n as u64);
    let mut a_star = Vec::with_capacity(s);
    let mut b_star = Vec::with_capacity(s);
    let mut b_star_sq = Vec::with_capacity(s);
    for j in 1..=s {
        let mut kterm = (&one - &f) * BigRational::from(krawtchouk(j, s - theta, s, q)?);
        if !f.is_zero() {
            kterm += &f * BigRational::from(krawtchouk(j, s - theta - 1, s, q)?);
        }
        let a = (&one - &one / &n_rat) * kterm
            + BigRational::from(BigInt::from(q - 1).pow(j as u32) * binomial(s as u64, j as u64))
                / &n_rat;
        a_star.push(a);

        let q_j = BigRational::from(BigInt::from(q).pow(j as u32));
        let radicand = big((n * (n - 1)) as u64) / &q_j
            * (BigRational::from(binomial(theta as u64, j as u64))
                + &f * BigRational::from(binomial(theta as u64, j as u64 - 1)))
            - BigRational::from(binomial(s as u64, j as u64))
                * (big((n * n) as u64) / (&q_j * &q_j) - big(n as u64) / &q_j);
        // B_j^2 >= 0 always, so the bound can be tightened to zero when the
        // benchmark expression dips negative.
        let clamped = if radicand.is_negative() {
            BigRational::zero()
        } else {
            radicand
        };
        b_star.push(clamped.to_f64().expect("B*_j^2 fits f64").sqrt());
        b_star_sq.push(clamped);
    }
    debug_assert!(a_star[0].is_zero());
    Ok(PatternBenchmarks {
        a_star,
        b_star,
        b_star_sq,
    })
}

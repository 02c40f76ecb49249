//! Majorization ordering on PC vectors, admissibility classification of
//! design pools and the flattest-integer benchmark vector.

use num::{BigInt, BigRational, ToPrimitive};
use rayon::prelude::*;
use thiserror::Error;

use crate::design::{pc_mean, pc_vector, Design, PCVector};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MajError {
    #[error("PC vectors have different lengths ({left} vs {right})")]
    LengthMismatch { left: usize, right: usize },
    #[error("PC sums differ ({left} vs {right}): designs come from different U(n, q^s) classes")]
    SumMismatch { left: u64, right: u64 },
    #[error("pool mixes design parameters: ({0}, {1}, {2}) vs ({3}, {4}, {5})")]
    MixedParameters(usize, usize, u32, usize, usize, u32),
    #[error("level count {q} does not divide run count {n}")]
    QNotDividingN { n: usize, q: u32 },
    #[error("benchmark multiplicity m*f is not integral")]
    MfNotIntegral,
    #[error("pool is empty")]
    EmptyPool,
}

/// Outcome of comparing two equal-sum vectors under the majorization order.
///
/// "Left majorized by right" means the left vector is flatter: its increasing
/// prefix sums dominate the right's. With exact integer entries and equal
/// totals, a non-strict relation between distinct multisets cannot occur, so
/// the `*Weak` tags are never produced here; they are kept so callers can
/// match the full relation vocabulary.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MajorizationRelation {
    EqualAsMultisets,
    /// left < right strictly; `witness` is the smallest prefix length with a
    /// strict inequality (1-based).
    LeftMajorizedStrict {
        witness: usize,
    },
    RightMajorizedStrict {
        witness: usize,
    },
    LeftMajorizedWeak,
    RightMajorizedWeak,
    Incomparable,
}

impl MajorizationRelation {
    /// Left vector is majorized by (no worse than) the right one.
    pub fn left_weakly_majorized(self) -> bool {
        matches!(
            self,
            MajorizationRelation::EqualAsMultisets
                | MajorizationRelation::LeftMajorizedStrict { .. }
                | MajorizationRelation::LeftMajorizedWeak
        )
    }
}

/// Majorization comparison of two increasing-sorted integer vectors with
/// equal length and sum (both are checked).
///
/// ```
/// use latmaj::majorization::{compare_sorted, MajorizationRelation};
///
/// // [2,2] is flatter than [1,3]
/// let rel = compare_sorted(&[2, 2], &[1, 3]).unwrap();
/// assert_eq!(rel, MajorizationRelation::LeftMajorizedStrict { witness: 1 });
/// ```
pub fn compare_sorted(xs: &[u32], ys: &[u32]) -> Result<MajorizationRelation, MajError> {
    if xs.len() != ys.len() {
        return Err(MajError::LengthMismatch {
            left: xs.len(),
            right: ys.len(),
        });
    }
    let sx: u64 = xs.iter().map(|&v| v as u64).sum();
    let sy: u64 = ys.iter().map(|&v| v as u64).sum();
    if sx != sy {
        return Err(MajError::SumMismatch {
            left: sx,
            right: sy,
        });
    }
    debug_assert!(xs.windows(2).all(|w| w[0] <= w[1]));
    debug_assert!(ys.windows(2).all(|w| w[0] <= w[1]));
    let m = xs.len();
    let (mut cx, mut cy) = (0u64, 0u64);
    let mut left_witness = None; // first k with prefix(x) > prefix(y)
    let mut right_witness = None;
    for k in 0..m.saturating_sub(1) {
        cx += xs[k] as u64;
        cy += ys[k] as u64;
        if cx > cy && left_witness.is_none() {
            left_witness = Some(k + 1);
        }
        if cx < cy && right_witness.is_none() {
            right_witness = Some(k + 1);
        }
    }
    match (left_witness, right_witness) {
        (None, None) => Ok(MajorizationRelation::EqualAsMultisets),
        (Some(w), None) => Ok(MajorizationRelation::LeftMajorizedStrict { witness: w }),
        (None, Some(w)) => Ok(MajorizationRelation::RightMajorizedStrict { witness: w }),
        (Some(_), Some(_)) => Ok(MajorizationRelation::Incomparable),
    }
}

/// Majorization comparison of two PC vectors from the same U(n, q^s) class.
pub fn compare_pc(x: &PCVector, y: &PCVector) -> Result<MajorizationRelation, MajError> {
    compare_sorted(&x.sorted, &y.sorted)
}

/// The benchmark vector: `m(1-f)` copies of `theta` followed by `mf` copies
/// of `theta + 1`, the flattest integer vector with the balanced PC sum.
#[derive(Debug, Clone, PartialEq)]
pub struct PCBenchmark {
    pub theta: u32,
    pub frac: BigRational,
    /// Increasing benchmark vector of length `m`.
    pub tilde: Vec<u32>,
    /// Constant PC mean (the `bar` vector's common entry).
    pub mean: BigRational,
    pub m: usize,
}

impl PCBenchmark {
    /// The constant vector of PC means.
    pub fn bar(&self) -> Vec<BigRational> {
        vec![self.mean.clone(); self.m]
    }

    /// Number of `theta + 1` entries, `m * f`.
    pub fn high_count(&self) -> usize {
        self.tilde.iter().filter(|&&v| v == self.theta + 1).count()
    }
}

pub fn benchmark_pc(n: usize, s: usize, q: u32) -> Result<PCBenchmark, MajError> {
    if n < 2 || q < 2 || !n.is_multiple_of(q as usize) {
        return Err(MajError::QNotDividingN { n, q });
    }
    let m = n * (n - 1) / 2;
    let mean = pc_mean(n, s, q);
    let theta = mean.floor().to_integer().to_u32().expect("theta fits u32");
    let frac = mean.fract();
    let mf = &frac * BigRational::from(BigInt::from(m));
    if !mf.is_integer() {
        // Cannot happen for integer PC entries: m * mean is the integral
        // balanced PC sum and m * theta is integral.
        return Err(MajError::MfNotIntegral);
    }
    let high = mf.to_integer().to_usize().expect("m*f fits usize");
    let mut tilde = vec![theta; m - high];
    tilde.extend(std::iter::repeat_n(theta + 1, high));
    Ok(PCBenchmark {
        theta,
        frac,
        tilde,
        mean,
        m,
    })
}

/// Admissibility split of a design pool.
///
/// `inadmissible` pairs each losing index with the smallest pool index whose
/// PC vector strictly majorizes into it. `majorant` lists every index whose
/// PC vector is weakly majorized by all others (isomorphic copies of the
/// minimum are all reported).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PoolClassification {
    pub admissible: Vec<usize>,
    pub inadmissible: Vec<(usize, usize)>,
    pub majorant: Vec<usize>,
}

pub fn classify_pool(pool: &[Design]) -> Result<PoolClassification, MajError> {
    if pool.is_empty() {
        return Err(MajError::EmptyPool);
    }
    let first = &pool[0];
    for d in &pool[1..] {
        if d.n() != first.n() || d.s() != first.s() || d.q() != first.q() {
            return Err(MajError::MixedParameters(
                first.n(),
                first.s(),
                first.q(),
                d.n(),
                d.s(),
                d.q(),
            ));
        }
    }
    let pcs: Vec<PCVector> = pool.par_iter().map(pc_vector).collect();
    classify_pc_pool(&pcs)
}

/// Same classification on precomputed PC vectors.
pub fn classify_pc_pool(pcs: &[PCVector]) -> Result<PoolClassification, MajError> {
    if pcs.is_empty() {
        return Err(MajError::EmptyPool);
    }
    let verdicts: Vec<(Option<usize>, bool)> = (0..pcs.len())
        .into_par_iter()
        .map(|i| {
            let mut dominator = None;
            let mut is_majorant = true;
            for j in 0..pcs.len() {
                if i == j {
                    continue;
                }
                let rel = compare_pc(&pcs[j], &pcs[i]).expect("pool pre-checked");
                if dominator.is_none() {
                    if let MajorizationRelation::LeftMajorizedStrict { .. } = rel {
                        dominator = Some(j);
                    }
                }
                // majorant needs pc[i] weakly majorized by pc[j], i.e. the
                // reverse comparison favors the right side.
                if !matches!(
                    rel,
                    MajorizationRelation::EqualAsMultisets
                        | MajorizationRelation::RightMajorizedStrict { .. }
                ) {
                    is_majorant = false;
                }
            }
            (dominator, is_majorant)
        })
        .collect();
    let mut out = PoolClassification {
        admissible: Vec::new(),
        inadmissible: Vec::new(),
        majorant: Vec::new(),
    };
    for (i, (dominator, is_majorant)) in verdicts.into_iter().enumerate() {
        match dominator {
            Some(j) => out.inadmissible.push((i, j)),
            None => out.admissible.push(i),
        }
        if is_majorant {
            out.majorant.push(i);
        }
    }
    Ok(out)
}

/// One row of the cumulative sorted-PC profile.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ProfileRow {
    /// Prefix length, 1-based.
    pub k: usize,
    /// Cumulative sum of the design's sorted PC vector.
    pub design_cum: u64,
    /// Cumulative sum of the benchmark vector (slope `theta`, then `theta+1`).
    pub benchmark_cum: u64,
}

/// Cumulative profile of a PC vector against its benchmark, suitable for
/// external plotting of the majorization ordering.
pub fn cumsum_profile(pc: &PCVector, bench: &PCBenchmark) -> Vec<ProfileRow> {
    assert_eq!(pc.m, bench.m, "profile needs matching pair counts");
    let mut rows = Vec::with_capacity(pc.m);
    let (mut dc, mut bc) = (0u64, 0u64);
    for k in 0..pc.m {
        dc += pc.sorted[k] as u64;
        bc += bench.tilde[k] as u64;
        rows.push(ProfileRow {
            k: k + 1,
            design_cum: dc,
            benchmark_cum: bc,
        });
    }
    rows
}

//! The separable Schur criterion `Psi(X; psi) = sum_r psi(beta_r)` and its
//! universal benchmark lower bound `m(1-f) psi(theta) + m f psi(theta+1)`.

use num::{BigInt, BigRational, ToPrimitive};

use crate::design::{pc_vector, Design};
use crate::kernel::{ConvexKernel, KernelError};
use crate::majorization::benchmark_pc;

/// A Schur criterion value together with its lower bound for the same
/// design class and kernel.
#[derive(Debug, Clone, PartialEq)]
pub struct SchurValue {
    pub value: f64,
    pub kernel: ConvexKernel,
    /// Lower bound from the benchmark vector; depends only on (n, s, q, psi).
    pub bound: f64,
    /// `value - bound`, nonnegative up to roundoff.
    pub gap: f64,
}

/// Sums the kernel over the design's PC vector and attaches the bound.
///
/// ```
/// use latmaj::design::random_balanced;
/// use latmaj::kernel::ConvexKernel;
/// use latmaj::schur::schur_psi;
///
/// let d = random_balanced(8, 6, 2, 42).unwrap();
/// let v = schur_psi(&d, &ConvexKernel::Quadratic).unwrap();
/// assert_eq!(v.bound, 192.0); // flattest vector: 12 twos and 16 threes
/// assert!(v.value >= v.bound);
/// ```
pub fn schur_psi(d: &Design, kernel: &ConvexKernel) -> Result<SchurValue, KernelError> {
    kernel.check_domain(d.s())?;
    let pc = pc_vector(d);
    let value: f64 = pc.values.iter().map(|&b| kernel.eval(b as f64)).sum();
    let bound = benchmark_bound(d.n(), d.s(), d.q(), kernel)?;
    Ok(SchurValue {
        value,
        kernel: kernel.clone(),
        bound,
        gap: value - bound,
    })
}

/// Lower bound `m(1-f) psi(theta) + m f psi(theta+1)` for any convex kernel,
/// attained exactly by (weak) equidistant designs.
pub fn benchmark_bound(
    n: usize,
    s: usize,
    q: u32,
    kernel: &ConvexKernel,
) -> Result<f64, KernelError> {
    let bench = benchmark_pc(n, s, q).map_err(|_| KernelError::QNotDividingN { n, q })?;
    kernel.check_domain(s)?;
    let m = bench.m as f64;
    let f = bench.frac.to_f64().expect("fraction fits f64");
    let lo = kernel.eval(bench.theta as f64);
    if f == 0.0 {
        return Ok(m * lo);
    }
    let hi = kernel.eval((bench.theta + 1) as f64);
    Ok(m * (1.0 - f) * lo + m * f * hi)
}

/// Exact-rational form of the bound for kernels with rational values at
/// integers (quadratic, variance, choose); `None` otherwise.
pub fn benchmark_bound_exact(
    n: usize,
    s: usize,
    q: u32,
    kernel: &ConvexKernel,
) -> Result<Option<BigRational>, KernelError> {
    let bench = benchmark_pc(n, s, q).map_err(|_| KernelError::QNotDividingN { n, q })?;
    kernel.check_domain(s)?;
    let theta = BigRational::from(BigInt::from(bench.theta));
    let theta1 = BigRational::from(BigInt::from(bench.theta + 1));
    let (lo, hi) = match (kernel.eval_rational(&theta), kernel.eval_rational(&theta1)) {
        (Some(lo), Some(hi)) => (lo, hi),
        _ => return Ok(None),
    };
    let m = BigRational::from(BigInt::from(bench.m));
    let f = bench.frac;
    let one = BigRational::from(BigInt::from(1));
    Ok(Some(&m * (&one - &f) * lo + &m * &f * hi))
}

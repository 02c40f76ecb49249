//! Convex kernel functions evaluated at pairwise coincidences, and the
//! kernel-spec mini-language used by the CLI.

use num::{BigInt, BigRational, One, ToPrimitive, Zero};
use thiserror::Error;

use crate::design::{pc_mean, Design};

/// Golden ratio, base of the `exp:golden` exponential kernel.
pub const GOLDEN_RATIO: f64 = 1.618033988749894848204586834365638118_f64;

#[derive(Debug, Error, PartialEq)]
pub enum KernelError {
    #[error("power kernel needs exponent p >= 1, got {0}")]
    PowerExponentTooSmall(f64),
    #[error("exponential kernel needs base rho > 1, got {0}")]
    ExponentialBaseTooSmall(f64),
    #[error("choose kernel needs order j >= 1")]
    ChooseOrderZero,
    #[error("table kernel needs at least two values")]
    TableTooShort,
    #[error("table kernel is not convex: second difference at index {index} is {value}")]
    TableNotConvex { index: usize, value: f64 },
    #[error("table kernel has {got} values but the design needs {expected} (levels 0..s)")]
    TableLengthMismatch { got: usize, expected: usize },
    #[error("kernel parameter is not finite")]
    NonFiniteParameter,
    #[error("level count {q} does not divide run count {n}")]
    QNotDividingN { n: usize, q: u32 },
}

/// A convex function on the nonnegative reals, evaluated at integer
/// coincidences `0..=s` (and, for bounds, at `theta` and `theta + 1`).
#[derive(Debug, Clone, PartialEq)]
pub enum ConvexKernel {
    /// `x^2`
    Quadratic,
    /// `x^p`, `p >= 1`
    Power { p: f64 },
    /// `rho^x`, `rho > 1`
    Exponential { rho: f64 },
    /// `(x - mean)^2 / m`, the variance criterion; carries the PC
    /// mean and pair count of the design class it was resolved against.
    Variance { mean: BigRational, m: usize },
    /// Binomial coefficient `C(x, j)`, zero below `j`.
    Choose { j: u32 },
    /// Explicit values at integer arguments `0..values.len()-1`, convexity
    /// checked at construction; piecewise linear in between.
    Table { values: Vec<f64> },
}

impl ConvexKernel {
    pub fn power(p: f64) -> Result<ConvexKernel, KernelError> {
        if !p.is_finite() {
            return Err(KernelError::NonFiniteParameter);
        }
        if p < 1.0 {
            return Err(KernelError::PowerExponentTooSmall(p));
        }
        Ok(ConvexKernel::Power { p })
    }

    pub fn exponential(rho: f64) -> Result<ConvexKernel, KernelError> {
        if !rho.is_finite() {
            return Err(KernelError::NonFiniteParameter);
        }
        if rho <= 1.0 {
            return Err(KernelError::ExponentialBaseTooSmall(rho));
        }
        Ok(ConvexKernel::Exponential { rho })
    }

    pub fn choose(j: u32) -> Result<ConvexKernel, KernelError> {
        if j == 0 {
            return Err(KernelError::ChooseOrderZero);
        }
        Ok(ConvexKernel::Choose { j })
    }

    /// Variance kernel for the U(n, q^s) class.
    pub fn variance_for(n: usize, s: usize, q: u32) -> Result<ConvexKernel, KernelError> {
        if n < 2 || q < 2 || !n.is_multiple_of(q as usize) {
            return Err(KernelError::QNotDividingN { n, q });
        }
        Ok(ConvexKernel::Variance {
            mean: pc_mean(n, s, q),
            m: n * (n - 1) / 2,
        })
    }

    pub fn table(values: Vec<f64>) -> Result<ConvexKernel, KernelError> {
        if values.len() < 2 {
            return Err(KernelError::TableTooShort);
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(KernelError::NonFiniteParameter);
        }
        for i in 1..values.len() - 1 {
            let second = values[i + 1] - 2.0 * values[i] + values[i - 1];
            if second < -1e-12 {
                return Err(KernelError::TableNotConvex {
                    index: i,
                    value: second,
                });
            }
        }
        Ok(ConvexKernel::Table { values })
    }

    /// Evaluates the kernel at a nonnegative real argument.
    pub fn eval(&self, x: f64) -> f64 {
        debug_assert!(x >= 0.0);
        match self {
            ConvexKernel::Quadratic => x * x,
            ConvexKernel::Power { p } => x.powf(*p),
            ConvexKernel::Exponential { rho } => rho.powf(x),
            ConvexKernel::Variance { mean, m } => {
                let d = x - mean.to_f64().expect("mean fits f64");
                d * d / *m as f64
            }
            ConvexKernel::Choose { j } => choose_real(x, *j),
            ConvexKernel::Table { values } => {
                let last = values.len() - 1;
                if x <= 0.0 {
                    // extrapolate with the first segment's slope
                    values[0] + x * (values[1] - values[0])
                } else if x >= last as f64 {
                    values[last] + (x - last as f64) * (values[last] - values[last - 1])
                } else {
                    let i = x.floor() as usize;
                    let t = x - i as f64;
                    values[i] * (1.0 - t) + values[i + 1] * t
                }
            }
        }
    }

    /// Exact evaluation at a rational argument, for the kernels whose values
    /// there are rational (quadratic, variance, choose).
    pub fn eval_rational(&self, x: &BigRational) -> Option<BigRational> {
        match self {
            ConvexKernel::Quadratic => Some(x * x),
            ConvexKernel::Variance { mean, m } => {
                let d = x - mean;
                Some(&d * &d / BigRational::from(BigInt::from(*m)))
            }
            ConvexKernel::Choose { j } => Some(choose_rational(x, *j)),
            _ => None,
        }
    }

    /// Validates the kernel against a design's column count (table kernels
    /// must cover levels 0..=s).
    pub fn check_domain(&self, s: usize) -> Result<(), KernelError> {
        if let ConvexKernel::Table { values } = self {
            if values.len() != s + 1 {
                return Err(KernelError::TableLengthMismatch {
                    got: values.len(),
                    expected: s + 1,
                });
            }
        }
        Ok(())
    }
}

/// `C(x, j)` for real `x`: zero when `x < j`, else `x(x-1)...(x-j+1)/j!`.
fn choose_real(x: f64, j: u32) -> f64 {
    if x < j as f64 {
        return 0.0;
    }
    let mut num = 1.0;
    let mut den = 1.0;
    for i in 0..j {
        num *= x - i as f64;
        den *= (i + 1) as f64;
    }
    num / den
}

fn choose_rational(x: &BigRational, j: u32) -> BigRational {
    if x < &BigRational::from(BigInt::from(j)) {
        return BigRational::zero();
    }
    let mut out = BigRational::one();
    for i in 0..j {
        out *= x - BigRational::from(BigInt::from(i));
        out /= BigRational::from(BigInt::from(i + 1));
    }
    out
}

/// Exact binomial coefficient on nonnegative integers, `C(n, k) = 0` for `k > n`.
pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let mut out = BigInt::one();
    for i in 0..k.min(n - k) {
        out = out * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    out
}

/// A parsed but unresolved kernel description. `variance` needs the design
/// class (its mean and pair count) before it can be evaluated; the others
/// resolve to themselves.
#[derive(Debug, Clone, PartialEq)]
pub enum KernelSpec {
    Variance,
    Quadratic,
    Power(f64),
    Exponential(f64),
    Choose(u32),
    Table(Vec<f64>),
}

impl KernelSpec {
    /// Instantiates the kernel for the U(n, q^s) design class.
    pub fn resolve(&self, n: usize, s: usize, q: u32) -> Result<ConvexKernel, KernelError> {
        let kernel = match self {
            KernelSpec::Variance => ConvexKernel::variance_for(n, s, q)?,
            KernelSpec::Quadratic => ConvexKernel::Quadratic,
            KernelSpec::Power(p) => ConvexKernel::power(*p)?,
            KernelSpec::Exponential(rho) => ConvexKernel::exponential(*rho)?,
            KernelSpec::Choose(j) => ConvexKernel::choose(*j)?,
            KernelSpec::Table(values) => ConvexKernel::table(values.clone())?,
        };
        kernel.check_domain(s)?;
        Ok(kernel)
    }

    pub fn resolve_for(&self, d: &Design) -> Result<ConvexKernel, KernelError> {
        self.resolve(d.n(), d.s(), d.q())
    }
}

/// Kernel-spec syntax error with the byte position of the offending token.
#[derive(Debug, Error, PartialEq, Eq)]
#[error("kernel spec error at position {pos}: {msg}")]
pub struct KernelParseError {
    pub pos: usize,
    pub msg: String,
}

/// Parses the kernel mini-language: `variance`, `quadratic`, `power:<p>`,
/// `exp:<rho>`, `exp:golden`, `choose:<j>`, `table:<v0,v1,...,vs>`.
pub fn parse_kernel_spec(text: &str) -> Result<KernelSpec, KernelParseError> {
    let (name, args) = match text.find(':') {
        Some(i) => (&text[..i], Some((&text[i + 1..], i + 1))),
        None => (text, None),
    };
    let err = |pos: usize, msg: &str| {
        Err(KernelParseError {
            pos,
            msg: msg.to_owned(),
        })
    };
    match name {
        "variance" | "quadratic" => {
            if args.is_some() {
                return err(name.len(), "kernel takes no parameters");
            }
            Ok(if name == "variance" {
                KernelSpec::Variance
            } else {
                KernelSpec::Quadratic
            })
        }
        "power" => {
            let (arg, pos) = match args {
                Some(a) => a,
                None => return err(text.len(), "expected ':<p>' with p >= 1"),
            };
            match arg.parse::<f64>() {
                Ok(p) if p.is_finite() && p >= 1.0 => Ok(KernelSpec::Power(p)),
                Ok(_) => err(pos, "power exponent must be a finite number >= 1"),
                Err(_) => err(pos, "power exponent is not a decimal number"),
            }
        }
        "exp" => {
            let (arg, pos) = match args {
                Some(a) => a,
                None => return err(text.len(), "expected ':<rho>' with rho > 1, or ':golden'"),
            };
            if arg == "golden" {
                return Ok(KernelSpec::Exponential(GOLDEN_RATIO));
            }
            match arg.parse::<f64>() {
                Ok(rho) if rho.is_finite() && rho > 1.0 => Ok(KernelSpec::Exponential(rho)),
                Ok(_) => err(pos, "exponential base must be a finite number > 1"),
                Err(_) => err(
                    pos,
                    "exponential base is not a decimal number (or 'golden')",
                ),
            }
        }
        "choose" => {
            let (arg, pos) = match args {
                Some(a) => a,
                None => return err(text.len(), "expected ':<j>' with integer j >= 1"),
            };
            match arg.parse::<u32>() {
                Ok(j) if j >= 1 => Ok(KernelSpec::Choose(j)),
                _ => err(pos, "choose order must be an integer >= 1"),
            }
        }
        "table" => {
            let (arg, base) = match args {
                Some(a) => a,
                None => return err(text.len(), "expected ':<v0,v1,...,vs>'"),
            };
            let mut values = Vec::new();
            let mut offset = 0usize;
            for piece in arg.split(',') {
                match piece.trim().parse::<f64>() {
                    Ok(v) if v.is_finite() => values.push(v),
                    _ => return err(base + offset, "table entry is not a decimal number"),
                }
                offset += piece.len() + 1;
            }
            if values.len() < 2 {
                return err(base, "table needs at least two values");
            }
            Ok(KernelSpec::Table(values))
        }
        _ => err(
            0,
            "unknown kernel (expected variance, quadratic, power, exp, choose or table)",
        ),
    }
}

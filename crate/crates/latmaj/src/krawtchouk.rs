//! Krawtchouk polynomials `P_j(x; s, q)`, the kernel of the MacWilliams
//! transform between distance distributions and word-length patterns.

use num::{BigInt, Zero};
use thiserror::Error;

use crate::kernel::binomial;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum KrawtchoukError {
    #[error("index j={j} out of range 0..={s}")]
    OrderOutOfRange { j: usize, s: usize },
    #[error("argument x={x} out of range 0..={s}")]
    ArgumentOutOfRange { x: usize, s: usize },
}

/// `P_j(x; s, q) = sum_w (-1)^w (q-1)^(j-w) C(x, w) C(s-x, j-w)`, exact.
pub fn krawtchouk(j: usize, x: usize, s: usize, q: u32) -> Result<BigInt, KrawtchoukError> {
    if j > s {
        return Err(KrawtchoukError::OrderOutOfRange { j, s });
    }
    if x > s {
        return Err(KrawtchoukError::ArgumentOutOfRange { x, s });
    }
    let qm1 = BigInt::from(q - 1);
    let mut acc = BigInt::zero();
    for w in 0..=j {
        let mut term = qm1.pow((j - w) as u32)
            * binomial(x as u64, w as u64)
            * binomial((s - x) as u64, (j - w) as u64);
        if w % 2 == 1 {
            term = -term;
        }
        acc += term;
    }
    Ok(acc)
}

//! Two-factor nonorthogonality averages for supersaturated designs:
//! `Ave(chi^2)` for general q and `E(s^2)` for two levels.

use num::{BigInt, BigRational, ToPrimitive, Zero};

use super::ClassicalError;
use crate::design::{pc_vector, Design};
use crate::majorization::benchmark_pc;

fn big(v: i64) -> BigRational {
    BigRational::from(BigInt::from(v))
}

/// `Ave(chi^2)` with its universal lower bound. `yamada_lin` carries the
/// three-level variant (the same average times `9/n`) when q = 3.
#[derive(Debug, Clone, PartialEq)]
pub struct AveChi2 {
    pub value: f64,
    pub value_exact: BigRational,
    pub bound: f64,
    pub bound_exact: BigRational,
    pub yamada_lin: Option<f64>,
}

/// Average squared cell-count deviation over all column pairs, computed
/// through the quadratic-kernel identity
/// `(2/(s(s-1))) sum_r beta_r^2 + a`, `a = (q^2 n s + n^2 (1-s-q)) / (q^2 (s-1))`.
pub fn ave_chi2(d: &Design) -> Result<AveChi2, ClassicalError> {
    let (n, s, q) = (d.n(), d.s(), d.q());
    if s < 2 {
        return Err(ClassicalError::TooFewFactors { s });
    }
    let pc = pc_vector(d);
    let sum_sq: u64 = pc.values.iter().map(|&b| (b as u64) * (b as u64)).sum();
    let coeff = big(2) / big((s * (s - 1)) as i64);
    let a = additive_constant(n, s, q);
    let value_exact = &coeff * big(sum_sq as i64) + &a;
    // benchmark bound of sum beta^2 is m(theta^2 + 2 theta f + f)
    let bench = benchmark_pc(n, s, q).expect("design parameters already validated");
    let theta = big(bench.theta as i64);
    let psi_bound = big(bench.m as i64)
        * (&theta * &theta + big(2) * &theta * &bench.frac + bench.frac.clone());
    let bound_exact = &coeff * psi_bound + &a;
    let value = value_exact.to_f64().expect("value fits f64");
    Ok(AveChi2 {
        value,
        bound: bound_exact.to_f64().expect("bound fits f64"),
        yamada_lin: (q == 3).then(|| value * 9.0 / n as f64),
        value_exact,
        bound_exact,
    })
}

fn additive_constant(n: usize, s: usize, q: u32) -> BigRational {
    let (n, s, q) = (n as i64, s as i64, q as i64);
    BigRational::new(
        BigInt::from(q * q * n * s + n * n * (1 - s - q)),
        BigInt::from(q * q * (s - 1)),
    )
}

/// Direct enumeration oracle: counts all `q^2` cells of every column pair.
pub fn ave_chi2_oracle(d: &Design) -> Result<BigRational, ClassicalError> {
    let (n, s, q) = (d.n(), d.s(), d.q());
    if s < 2 {
        return Err(ClassicalError::TooFewFactors { s });
    }
    let target = big(n as i64) / big((q * q) as i64);
    let mut total = BigRational::zero();
    for j in 0..s {
        for l in (j + 1)..s {
            let mut counts = vec![0u64; (q * q) as usize];
            for i in 0..n {
                counts[(d.get(i, j) * q + d.get(i, l)) as usize] += 1;
            }
            for &c in &counts {
                let dev = big(c as i64) - &target;
                total += &dev * &dev;
            }
        }
    }
    Ok(total * big(2) / big((s * (s - 1)) as i64))
}

/// Closed-form integer-mean lower bound `n^2 (q-1)(s(q-1) - n + 1) / (q^2 (s-1)(n-1))`.
///
/// This is the general bound specialized to `f = 0`; at q = 2 it reproduces
/// the classical `E(s^2)` bound after multiplying by 4.
pub fn ave_chi2_bound_integer_mean(n: usize, s: usize, q: u32) -> BigRational {
    let (ni, si, qi) = (n as i64, s as i64, q as i64);
    BigRational::new(
        BigInt::from(ni * ni * (qi - 1) * (si * (qi - 1) - ni + 1)),
        BigInt::from(qi * qi * (si - 1) * (ni - 1)),
    )
}

/// `E(s^2)` for two-level designs with its lower bound (4x the Ave(chi^2) bound).
#[derive(Debug, Clone, PartialEq)]
pub struct Es2 {
    pub value: f64,
    pub value_exact: BigRational,
    pub bound: f64,
}

/// Mean squared column inner product `(2/(s(s-1))) sum_{j<l} (x_j' x_l)^2`
/// with levels coded to -1/+1; an independent route that must equal four
/// times [`ave_chi2`].
pub fn e_s2(d: &Design) -> Result<Es2, ClassicalError> {
    let (n, s, q) = (d.n(), d.s(), d.q());
    if q != 2 {
        return Err(ClassicalError::WrongLevelCount {
            expected: 2,
            got: q,
        });
    }
    if s < 2 {
        return Err(ClassicalError::TooFewFactors { s });
    }
    let signed = |v: u32| if v == 0 { -1i64 } else { 1i64 };
    let mut total = 0i64;
    for j in 0..s {
        for l in (j + 1)..s {
            let ip: i64 = (0..n)
                .map(|i| signed(d.get(i, j)) * signed(d.get(i, l)))
                .sum();
            total += ip * ip;
        }
    }
    let value_exact = big(2) * big(total) / big((s * (s - 1)) as i64);
    let ave = ave_chi2(d)?;
    Ok(Es2 {
        value: value_exact.to_f64().expect("value fits f64"),
        value_exact,
        bound: 4.0 * ave.bound,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::design::{random_balanced, Design};

    fn oa_4_3_2() -> Design {
        Design::new(
            &[vec![0, 0, 0], vec![0, 1, 1], vec![1, 0, 1], vec![1, 1, 0]],
            2,
            None,
        )
        .unwrap()
    }

    #[test]
    fn strength_two_fixture_is_orthogonal() {
        let d = oa_4_3_2();
        let ave = ave_chi2(&d).unwrap();
        assert!(ave.value_exact.is_zero());
        let es2 = e_s2(&d).unwrap();
        assert!(es2.value_exact.is_zero());
        // the bound is tight here (integer mean, equidistant attainable)
        assert_eq!(ave.bound_exact, BigRational::zero());
    }

    #[test]
    fn identity_matches_oracle() {
        for seed in 0..20 {
            let d = random_balanced(6, 4, 2, seed).unwrap();
            let ave = ave_chi2(&d).unwrap();
            assert_eq!(ave.value_exact, ave_chi2_oracle(&d).unwrap(), "seed {seed}");
        }
        for seed in 0..10 {
            let d = random_balanced(9, 4, 3, seed).unwrap();
            let ave = ave_chi2(&d).unwrap();
            assert_eq!(ave.value_exact, ave_chi2_oracle(&d).unwrap(), "seed {seed}");
        }
    }

    #[test]
    fn es2_is_four_times_ave_chi2() {
        for seed in 0..20 {
            let d = random_balanced(6, 8, 2, 50 + seed).unwrap();
            let ave = ave_chi2(&d).unwrap();
            let es2 = e_s2(&d).unwrap();
            assert_eq!(es2.value_exact, ave.value_exact * big(4), "seed {seed}");
        }
    }

    #[test]
    fn integer_mean_closed_form_matches_general_bound() {
        // (6,10,2) has mean 4; (9,4,3) has mean 1
        for (n, s, q) in [(6usize, 10usize, 2u32), (9, 4, 3), (4, 3, 2)] {
            let d = random_balanced(n, s, q, 1).unwrap();
            let ave = ave_chi2(&d).unwrap();
            assert_eq!(
                ave.bound_exact,
                ave_chi2_bound_integer_mean(n, s, q),
                "({n},{s},{q})"
            );
        }
    }

    #[test]
    fn es2_closed_form_bound_integer_mean() {
        // E(s^2) >= n^2 (s-n+1) / ((s-1)(n-1)) at q=2 and integer mean
        let (n, s) = (6usize, 10usize);
        let d = random_balanced(n, s, 2, 3).unwrap();
        let es2 = e_s2(&d).unwrap();
        let closed =
            (n * n) as f64 * (s as f64 - n as f64 + 1.0) / ((s as f64 - 1.0) * (n as f64 - 1.0));
        assert!((es2.bound - closed).abs() < 1e-9);
        assert!(es2.value >= es2.bound - 1e-9);
    }

    #[test]
    fn rejects_wrong_shapes() {
        let d = random_balanced(9, 4, 3, 0).unwrap();
        assert!(matches!(
            e_s2(&d),
            Err(ClassicalError::WrongLevelCount { got: 3, .. })
        ));
        let one_col = random_balanced(4, 1, 2, 0).unwrap();
        assert!(matches!(
            ave_chi2(&one_col),
            Err(ClassicalError::TooFewFactors { s: 1 })
        ));
    }

    #[test]
    fn yamada_lin_variant_only_for_q3() {
        let d2 = random_balanced(6, 4, 2, 0).unwrap();
        assert!(ave_chi2(&d2).unwrap().yamada_lin.is_none());
        let d3 = random_balanced(9, 4, 3, 0).unwrap();
        let ave = ave_chi2(&d3).unwrap();
        assert!((ave.yamada_lin.unwrap() - ave.value * 9.0 / 9.0).abs() < 1e-12);
    }
}

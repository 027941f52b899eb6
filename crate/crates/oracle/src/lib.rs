//! Reference OLS computed in exact rational arithmetic.
//!
//! Every `f64` input is converted exactly to a `BigRational`; the normal
//! equations `XᵀX b = Xᵀy` are then solved by Gauss–Jordan elimination with
//! no rounding. Only the final conversion to `f64` and square roots round.
//! This is deliberately the textbook route that the library avoids, so the
//! two implementations share no numerical code. Tail probabilities come from
//! `statrs`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Float, One, Signed, ToPrimitive, Zero};
use statrs::distribution::{ContinuousCDF, FisherSnedecor, StudentsT};

type Q = BigRational;

fn q(x: f64) -> Q {
    Q::from_float(x).expect("finite input")
}

fn f(x: &Q) -> f64 {
    x.to_f64().expect("representable")
}

#[derive(Debug, Clone)]
pub struct ExactFit {
    /// Intercept first when present.
    pub coefficients: Vec<f64>,
    pub std_errors: Vec<f64>,
    pub t_stats: Vec<f64>,
    pub p_values: Vec<f64>,
    /// Standardized slopes (sample standard deviations); empty without an
    /// intercept.
    pub standardized: Vec<f64>,
    pub residuals: Vec<f64>,
    pub fitted: Vec<f64>,
    pub sse: f64,
    pub sst: f64,
    pub r2: f64,
    pub adjusted_r2: f64,
    pub f: f64,
    pub p_f: f64,
    pub df_model: usize,
    pub df_resid: usize,
    pub std_error_estimate: f64,
    pub durbin_watson: f64,
    pub serial_correlation: f64,
}

/// Integers `ints` with a common binary exponent: `value_i = ints_i · 2^exp`.
struct Dyadic {
    ints: Vec<BigInt>,
    exp: i64,
}

fn dyadic(values: &[f64]) -> Dyadic {
    let parts: Vec<(u64, i16, i8)> = values.iter().map(|v| v.integer_decode()).collect();
    let exp = parts
        .iter()
        .filter(|p| p.0 != 0)
        .map(|p| i64::from(p.1))
        .min()
        .unwrap_or(0);
    let ints = parts
        .iter()
        .map(|&(mant, e, sign)| {
            if mant == 0 {
                return BigInt::zero();
            }
            let m = BigInt::from(mant) << (i64::from(e) - exp) as usize;
            if sign < 0 {
                -m
            } else {
                m
            }
        })
        .collect();
    Dyadic { ints, exp }
}

fn pow2(e: i64) -> Q {
    let one = BigInt::one();
    if e >= 0 {
        Q::from_integer(one << e as usize)
    } else {
        Q::new(one.clone(), one << (-e) as usize)
    }
}

fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Row `i` of the reduced system reads `diag_i · x_i = numerators_i`.
struct Solved {
    diag: Vec<BigInt>,
    /// `diag_i · (A⁻¹c)_i`.
    numerators: Vec<BigInt>,
    /// `diag_i · (A⁻¹)_ii`.
    inverse_diag: Vec<BigInt>,
}

/// Fraction-free Gauss–Jordan elimination (Bareiss) on `[A | c | I]`. Every
/// division is exact and the left block ends diagonal. `None` when `A` is
/// singular.
fn bareiss_solve(a: Vec<Vec<BigInt>>, c: Vec<BigInt>) -> Option<Solved> {
    let k = a.len();
    let mut m: Vec<Vec<BigInt>> = a
        .into_iter()
        .zip(c)
        .enumerate()
        .map(|(i, (mut row, ci))| {
            row.push(ci);
            row.extend((0..k).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }));
            row
        })
        .collect();
    let width = 2 * k + 1;
    let mut prev = BigInt::one();
    for p in 0..k {
        let pivot = (p..k).find(|&r| !m[r][p].is_zero())?;
        m.swap(p, pivot);
        for i in 0..k {
            if i == p {
                continue;
            }
            for j in 0..width {
                if j == p {
                    continue;
                }
                let v = &m[p][p] * &m[i][j] - &m[i][p] * &m[p][j];
                debug_assert!((&v % &prev).is_zero());
                m[i][j] = v / &prev;
            }
            m[i][p] = BigInt::zero();
        }
        prev = m[p][p].clone();
    }
    Some(Solved {
        diag: (0..k).map(|i| m[i][i].clone()).collect(),
        numerators: (0..k).map(|i| m[i][k].clone()).collect(),
        inverse_diag: (0..k).map(|i| m[i][k + 1 + i].clone()).collect(),
    })
}

fn sum(it: impl Iterator<Item = Q>) -> Q {
    it.fold(Q::zero(), |acc, x| acc + x)
}

fn mean(v: &[Q]) -> Q {
    sum(v.iter().cloned()) / Q::from_integer(BigInt::from(v.len()))
}

fn centered_ss(v: &[Q]) -> Q {
    let m = mean(v);
    sum(v.iter().map(|x| (x - &m) * (x - &m)))
}

/// Two-sided Student-t p-value from `statrs`.
pub fn t_two_sided(t: f64, df: usize) -> f64 {
    if t.is_infinite() {
        return 0.0;
    }
    let dist = StudentsT::new(0.0, 1.0, df as f64).expect("df > 0");
    2.0 * dist.cdf(-t.abs())
}

/// Upper tail of F(d1, d2) from `statrs`.
pub fn f_upper_tail(x: f64, d1: usize, d2: usize) -> f64 {
    let dist = FisherSnedecor::new(d1 as f64, d2 as f64).expect("df > 0");
    dist.sf(x)
}

/// Exact OLS of `y` on `rows` (one `Vec` per observation). Returns `None` if
/// `XᵀX` is singular or there are no residual degrees of freedom.
pub fn exact_ols(rows: &[Vec<f64>], y: &[f64], intercept: bool) -> Option<ExactFit> {
    let n = y.len();
    let p = rows.first().map_or(0, Vec::len);
    let k = p + usize::from(intercept);
    if n <= k || k == 0 {
        return None;
    }
    let mut scaled_columns: Vec<Dyadic> = Vec::with_capacity(k);
    if intercept {
        scaled_columns.push(dyadic(&vec![1.0; n]));
    }
    for j in 0..p {
        scaled_columns.push(dyadic(&rows.iter().map(|r| r[j]).collect::<Vec<_>>()));
    }
    let ys = dyadic(y);

    // Solve the integer system X̃ᵀX̃ b̃ = X̃ᵀỹ, where X = X̃·diag(2^e_j) and
    // y = ỹ·2^e_y, so b_j = b̃_j·2^(e_y − e_j).
    let xtx: Vec<Vec<BigInt>> = (0..k)
        .map(|a| (0..k).map(|c| dot(&scaled_columns[a].ints, &scaled_columns[c].ints)).collect())
        .collect();
    let xty: Vec<BigInt> = (0..k).map(|a| dot(&scaled_columns[a].ints, &ys.ints)).collect();
    let solved = bareiss_solve(xtx, xty)?;

    let b: Vec<Q> = (0..k)
        .map(|j| pow2(ys.exp - scaled_columns[j].exp) * Q::new(solved.numerators[j].clone(), solved.diag[j].clone()))
        .collect();
    let inv_diag: Vec<Q> = (0..k)
        .map(|j| pow2(-2 * scaled_columns[j].exp) * Q::new(solved.inverse_diag[j].clone(), solved.diag[j].clone()))
        .collect();

    // Over the common denominator D = Π diag_j, D·(ỹ − X̃ b̃) is integral.
    let common: BigInt = solved.diag.iter().product();
    let scaled_b: Vec<BigInt> = (0..k)
        .map(|j| &solved.numerators[j] * (&common / &solved.diag[j]))
        .collect();
    let resid: Vec<Q> = (0..n)
        .map(|i| {
            let mut r = &ys.ints[i] * &common;
            for j in 0..k {
                r -= &scaled_columns[j].ints[i] * &scaled_b[j];
            }
            pow2(ys.exp) * Q::new(r, common.clone())
        })
        .collect();
    let yq: Vec<Q> = y.iter().map(|&v| q(v)).collect();
    let fitted: Vec<Q> = yq.iter().zip(&resid).map(|(a, e)| a - e).collect();
    let sse = sum(resid.iter().map(|e| e * e));
    let sst = if intercept {
        centered_ss(&yq)
    } else {
        sum(yq.iter().map(|v| v * v))
    };

    let df_model = p;
    let df_resid = n - k;
    let nq = |v: usize| Q::from_integer(BigInt::from(v));
    let s2 = &sse / nq(df_resid);

    let (r2, adjusted_r2, fstat) = if sst.is_zero() {
        (0.0, 0.0, 0.0)
    } else {
        let r2 = Q::one() - &sse / &sst;
        let dof_total = if intercept { n - 1 } else { n };
        let adj = Q::one() - (&sse / nq(df_resid)) / (&sst / nq(dof_total));
        let fstat = if df_model == 0 {
            f64::NAN
        } else if sse.is_zero() {
            f64::INFINITY
        } else {
            f(&(((&sst - &sse) / nq(df_model)) / &s2))
        };
        (f(&r2), f(&adj), fstat)
    };
    let p_f = if sst.is_zero() {
        1.0
    } else if fstat.is_infinite() {
        0.0
    } else if fstat.is_nan() {
        f64::NAN
    } else {
        f_upper_tail(fstat, df_model, df_resid)
    };

    let std_errors: Vec<f64> = (0..k).map(|j| f(&(&s2 * &inv_diag[j])).sqrt()).collect();
    let coefficients: Vec<f64> = b.iter().map(f).collect();
    let t_stats: Vec<f64> = coefficients
        .iter()
        .zip(&std_errors)
        .map(|(c, s)| c / s)
        .collect();
    let p_values = t_stats.iter().map(|&t| t_two_sided(t, df_resid)).collect();

    let standardized = if intercept && !sst.is_zero() {
        let sy = f(&(centered_ss(&yq) / nq(n - 1))).sqrt();
        (0..p)
            .map(|j| {
                let col: Vec<Q> = rows.iter().map(|r| q(r[j])).collect();
                let sx = f(&(centered_ss(&col) / nq(n - 1))).sqrt();
                coefficients[j + 1] * sx / sy
            })
            .collect()
    } else {
        Vec::new()
    };

    let durbin_watson = if sse.is_zero() {
        f64::NAN
    } else {
        let d = sum(resid.windows(2).map(|w| (&w[1] - &w[0]) * (&w[1] - &w[0])));
        f(&(d / &sse))
    };
    let serial_correlation = {
        let a = &resid[..n - 1];
        let c = &resid[1..];
        let (ma, mc) = (mean(a), mean(c));
        let sac = sum(a.iter().zip(c).map(|(x, z)| (x - &ma) * (z - &mc)));
        let saa = centered_ss(a);
        let scc = centered_ss(c);
        if saa.is_zero() || scc.is_zero() {
            f64::NAN
        } else {
            // sign(sac) · sqrt(sac² / (saa·scc)), one rounding before the root.
            let sign = if sac.is_negative() { -1.0 } else { 1.0 };
            sign * f(&(&sac * &sac / (saa * scc))).sqrt()
        }
    };

    Some(ExactFit {
        coefficients,
        std_errors,
        t_stats,
        p_values,
        standardized,
        residuals: resid.iter().map(f).collect(),
        fitted: fitted.iter().map(f).collect(),
        sse: f(&sse),
        sst: f(&sst),
        r2,
        adjusted_r2,
        f: fstat,
        p_f,
        df_model,
        df_resid,
        std_error_estimate: f(&s2).sqrt(),
        durbin_watson,
        serial_correlation,
    })
}

//! Matrix exponential by scaling and squaring around a diagonal Padé core.
//!
//! Degree selection follows the backward-error thresholds of Higham (2005):
//! degrees 3, 5, 7, 9, 13 in double precision, and 3, 5, 7 for types with a
//! coarser epsilon.

use crate::error::{dim_err, Result};
use crate::operators::CMatrix;
use crate::scalar::{re, Real};

const B3: [f64; 4] = [120.0, 60.0, 12.0, 1.0];
const B5: [f64; 6] = [30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0];
const B7: [f64; 8] = [
    17297280.0, 8648640.0, 1995840.0, 277200.0, 25200.0, 1512.0, 56.0, 1.0,
];
const B9: [f64; 10] = [
    17643225600.0,
    8821612800.0,
    2075673600.0,
    302702400.0,
    30270240.0,
    2162160.0,
    110880.0,
    3960.0,
    90.0,
    1.0,
];
const B13: [f64; 14] = [
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
];

const THETA_DOUBLE: [(usize, f64); 5] = [
    (3, 1.495585217958292e-2),
    (5, 2.53939833006323e-1),
    (7, 9.504178996162932e-1),
    (9, 2.097847961257068e0),
    (13, 5.371920351148152e0),
];

const THETA_SINGLE: [(usize, f64); 3] = [
    (3, 4.258730016922831e-1),
    (5, 1.880152677804762e0),
    (7, 3.92572478313866e0),
];

/// `exp(A)` for square `A`.
pub fn expm<T: Real>(a: &CMatrix<T>) -> Result<CMatrix<T>> {
    if !a.is_square() {
        return dim_err(format!("expm of non-square {:?}", a.shape()));
    }
    let n = a.rows();
    let norm = a.norm_one().to_f64_lossy();
    if norm == 0.0 {
        return Ok(CMatrix::identity(n));
    }
    let table: &[(usize, f64)] = if T::epsilon().to_f64_lossy() < 1e-10 {
        &THETA_DOUBLE
    } else {
        &THETA_SINGLE
    };

    if let Some(&(m, _)) = table.iter().find(|&&(_, theta)| norm <= theta) {
        return pade(a, m);
    }
    let &(m, theta) = table.last().expect("non-empty table");
    let squarings = (norm / theta).log2().ceil().max(0.0) as u32;
    let scaled = a.scale_real(T::lit(0.5f64.powi(squarings as i32)));
    let mut r = pade(&scaled, m)?;
    for _ in 0..squarings {
        r = r.matmul(&r);
    }
    Ok(r)
}

fn pade<T: Real>(a: &CMatrix<T>, m: usize) -> Result<CMatrix<T>> {
    let n = a.rows();
    let eye = CMatrix::identity(n);
    let a2 = a.matmul(a);
    let (u, v) = if m == 13 {
        let b = |k: usize| re(T::lit(B13[k]));
        let a4 = a2.matmul(&a2);
        let a6 = a4.matmul(&a2);
        let mut inner_u = a6.scale(b(13));
        inner_u.axpy(b(11), &a4);
        inner_u.axpy(b(9), &a2);
        let mut u = a6.matmul(&inner_u);
        u.axpy(b(7), &a6);
        u.axpy(b(5), &a4);
        u.axpy(b(3), &a2);
        u.axpy(b(1), &eye);
        let u = a.matmul(&u);

        let mut inner_v = a6.scale(b(12));
        inner_v.axpy(b(10), &a4);
        inner_v.axpy(b(8), &a2);
        let mut v = a6.matmul(&inner_v);
        v.axpy(b(6), &a6);
        v.axpy(b(4), &a4);
        v.axpy(b(2), &a2);
        v.axpy(b(0), &eye);
        (u, v)
    } else {
        let coeffs: &[f64] = match m {
            3 => &B3,
            5 => &B5,
            7 => &B7,
            9 => &B9,
            _ => unreachable!("unsupported Padé degree {m}"),
        };
        // even powers A^0, A^2, ..., A^(m-1)
        let mut powers = vec![eye];
        for _ in 0..m / 2 {
            let next = powers.last().expect("seeded").matmul(&a2);
            powers.push(next);
        }
        let mut u = CMatrix::zeros(n, n);
        let mut v = CMatrix::zeros(n, n);
        for (k, p) in powers.iter().enumerate() {
            v.axpy(re(T::lit(coeffs[2 * k])), p);
            if 2 * k + 1 < coeffs.len() {
                u.axpy(re(T::lit(coeffs[2 * k + 1])), p);
            }
        }
        (a.matmul(&u), v)
    };
    let num = &v + &u;
    let den = &v - &u;
    den.solve(&num)
}

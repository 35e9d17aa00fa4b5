//! Residue varieties `R_j = q_j·R_0` and their pivot-last matrix form.

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::strata::{residues, DiffConfig};

fn check_q(q: &[BigRational]) -> Result<()> {
    match q.iter().position(|x| x.is_zero()) {
        Some(i) => Err(Error::ZeroQ(i + 1)),
        None => Ok(()),
    }
}

/// Whether `R_j = q_j·R_0` for `j = 1..n`, exactly over exact fields.
pub fn residue_variety_membership<S: Scalar>(cfg: &DiffConfig<S>, q: &[BigRational]) -> Result<bool> {
    check_q(q)?;
    let r = residues(cfg)?.finite;
    if r.len() != q.len() + 1 {
        return Err(Error::ShapeMismatch(format!("{} finite poles need {} ratios, got {}", r.len(), r.len() - 1, q.len())));
    }
    let r0 = r[0].clone();
    Ok(q.iter().zip(&r[1..]).all(|(qj, rj)| {
        let target = S::from_gauss(&num_complex::Complex::new(qj.clone(), BigRational::zero())) * r0.clone();
        rj.approx_eq(&target)
    }))
}

/// Linear forms on `(R_0..R_n)` cutting out the residue variety: row `j`
/// is `R_j − q_j R_0`.
pub fn residue_relations(q: &[BigRational]) -> Result<Vec<Vec<BigRational>>> {
    check_q(q)?;
    let n = q.len();
    Ok((1..=n)
        .map(|j| {
            let mut row = vec![BigRational::zero(); n + 1];
            row[0] = -q[j - 1].clone();
            row[j] = BigRational::one();
            row
        })
        .collect())
}

/// Converts the last column `q'` of `C = [I | q']` (rows `R_{j−1} + q'_j R_n = 0`)
/// into ratios `q_j = R_j/R_0`.
pub fn ratios_from_pivot_last(qp: &[BigRational]) -> Result<Vec<BigRational>> {
    check_q(qp)?;
    let n = qp.len();
    let first = qp[0].clone();
    let mut q: Vec<BigRational> = (2..=n).map(|j| qp[j - 1].clone() / first.clone()).collect();
    q.push(-BigRational::one() / first);
    Ok(q)
}

/// Inverse of [`ratios_from_pivot_last`].
pub fn pivot_last_from_ratios(q: &[BigRational]) -> Result<Vec<BigRational>> {
    check_q(q)?;
    let n = q.len();
    let first = -BigRational::one() / q[n - 1].clone();
    let mut qp = vec![first.clone()];
    qp.extend(q[..n - 1].iter().map(|x| x.clone() * first.clone()));
    Ok(qp)
}

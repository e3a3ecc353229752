//! The operators `x`, `d_1`, `d_-1`, `d` and `sigma` on `K[x]` truncated to
//! degree at most `N`, with the relations among them checked on the
//! monomials of degree at most `N - 1`, where truncation cannot interfere.

use super::{RelationReport, Violation};
use crate::coeffs::{Elem, FieldCtx};
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::poly::Field;

/// Matrices in the monomial basis `1, x, ..., x^N` (column `n` is the image
/// of `x^n`).
#[derive(Clone, Debug)]
pub struct Realization {
    pub n: usize,
    pub x: Matrix,
    pub d1: Matrix,
    pub dm1: Matrix,
    pub d: Matrix,
    pub sigma: Matrix,
    pub sigma_inv: Matrix,
    /// `tau = d x`, diagonal with entries `n + 1`.
    pub tau: Matrix,
    pub report: RelationReport,
}

fn q_number(ctx: &FieldCtx, a: i64, n: i64) -> Result<Elem> {
    let den = ctx.sub(&ctx.q_pow(a), &ctx.one());
    let num = ctx.sub(&ctx.q_pow(a * n), &ctx.one());
    ctx.div(&num, &den)
        .map_err(|_| Error::VanishingDenominator { formula: format!("(q^({a}n)-1)/(q^{a}-1)"), offset: n })
}

/// Builds the truncated realization and checks its relations.
pub fn polynomial_realization(ctx: &FieldCtx, n: usize) -> Result<Realization> {
    if n < 2 {
        return Err(Error::InvalidArgument("degree bound N must be at least 2".into()));
    }
    let dim = n + 1;
    let mut x = Matrix::zeros(ctx, dim, dim);
    let mut d1 = Matrix::zeros(ctx, dim, dim);
    let mut dm1 = Matrix::zeros(ctx, dim, dim);
    let mut d = Matrix::zeros(ctx, dim, dim);
    let mut sigma = Matrix::zeros(ctx, dim, dim);
    let mut sigma_inv = Matrix::zeros(ctx, dim, dim);
    let mut tau = Matrix::zeros(ctx, dim, dim);
    for k in 0..dim {
        let ki = k as i64;
        if k + 1 < dim {
            x.set(k + 1, k, ctx.one());
        }
        if k >= 1 {
            d1.set(k - 1, k, q_number(ctx, 1, ki)?);
            dm1.set(k - 1, k, q_number(ctx, -1, ki)?);
            d.set(k - 1, k, ctx.from_int(ki));
        }
        sigma.set(k, k, ctx.q_pow(ki));
        sigma_inv.set(k, k, ctx.q_pow(-ki));
        tau.set(k, k, ctx.from_int(ki + 1));
    }

    let id = Matrix::identity(ctx, dim);
    let q = ctx.q();
    let qm1 = ctx.sub(&q, &ctx.one());
    let qinvm1 = ctx.sub(&ctx.inv(&q).unwrap(), &ctx.one());
    let inv_qm1 = ctx.inv(&qm1).ok_or(Error::VanishingDenominator { formula: "1/(q-1)".into(), offset: 0 })?;
    let m = |a: &Matrix, b: &Matrix| a.mul(ctx, b);
    let sc = |a: &Matrix, c: &Elem| a.scale(ctx, c);
    let ds = [("d_1", &d1, q.clone()), ("d_-1", &dm1, ctx.inv(&q).unwrap()), ("d", &d, ctx.one())];

    let mut checks: Vec<(String, Matrix, Matrix)> = Vec::new();
    for (name, da, qa) in &ds {
        // d_a x - q^a x d_a = 1
        checks.push((format!("{name} x - q^a x {name} = 1"), m(da, &x).sub(ctx, &sc(&m(&x, da), qa)), id.clone()));
    }
    for (na, da, _) in &ds {
        for (nb, db, _) in &ds {
            if na < nb {
                checks.push((format!("{na} x {nb} = {nb} x {na}"), m(&m(da, &x), db), m(&m(db, &x), da)));
            }
        }
    }
    checks.push(("d_-1 d_1 = q d_1 d_-1".into(), m(&dm1, &d1), sc(&m(&d1, &dm1), &q)));
    checks.push(("d_1 x - x d_1 = sigma".into(), m(&d1, &x).sub(ctx, &m(&x, &d1)), sigma.clone()));
    checks.push(("sigma = (q-1) x d_1 + 1".into(), sigma.clone(), sc(&m(&x, &d1), &qm1).add(ctx, &id)));
    checks.push(("d_-1 x - x d_-1 = sigma^-1".into(), m(&dm1, &x).sub(ctx, &m(&x, &dm1)), sigma_inv.clone()));
    checks.push(("sigma^-1 = (q^-1-1) x d_-1 + 1".into(), sigma_inv.clone(), sc(&m(&x, &dm1), &qinvm1).add(ctx, &id)));
    checks.push(("d_-1 = sigma^-1 d_1".into(), dm1.clone(), m(&sigma_inv, &d1)));
    // The presentation over K[tau, sigma, sigma^-1].
    let tm1 = tau.sub(ctx, &id);
    let tp1 = tau.add(ctx, &id);
    checks.push(("tau = d x".into(), tau.clone(), m(&d, &x)));
    checks.push(("x d = tau - 1".into(), m(&x, &d), tm1.clone()));
    checks.push(("d_1 x = (q sigma - 1)/(q-1)".into(), m(&d1, &x), sc(&sc(&sigma, &q).sub(ctx, &id), &inv_qm1)));
    checks.push(("x d_1 = (sigma - 1)/(q-1)".into(), m(&x, &d1), sc(&sigma.sub(ctx, &id), &inv_qm1)));
    checks.push((
        "d_1 (tau - 1) = d (sigma - 1)/(q-1)".into(),
        m(&d1, &tm1),
        sc(&m(&d, &sigma.sub(ctx, &id)), &inv_qm1),
    ));
    checks.push(("x tau = (tau - 1) x".into(), m(&x, &tau), m(&tm1, &x)));
    checks.push(("x sigma = (sigma/q) x".into(), m(&x, &sigma), sc(&m(&sigma, &x), &ctx.inv(&q).unwrap())));
    checks.push(("d tau = (tau + 1) d".into(), m(&d, &tau), m(&tp1, &d)));
    checks.push(("d sigma = q sigma d".into(), m(&d, &sigma), sc(&m(&sigma, &d), &q)));
    checks.push(("d_1 tau = (tau + 1) d_1".into(), m(&d1, &tau), m(&tp1, &d1)));
    checks.push(("d_1 sigma = q sigma d_1".into(), m(&d1, &sigma), sc(&m(&sigma, &d1), &q)));

    let labels: Vec<String> = (0..dim).map(|k| format!("x^{k}")).collect();
    let mut report = RelationReport { algebra: "polynomial realization".into(), ..Default::default() };
    for (id, lhs, rhs) in &checks {
        for col in 0..n {
            report.checked += 1;
            let l = lhs.column(col);
            let r = rhs.column(col);
            if l != r {
                report.violations.push(Violation {
                    relation: id.clone(),
                    offset: col as i64,
                    label: labels[col].clone(),
                    computed: l,
                    expected: r,
                    target_labels: labels.clone(),
                });
            }
        }
    }
    report.sort();
    Ok(Realization { n, x, d1, dm1, d, sigma, sigma_inv, tau, report })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffs::FieldSpec;

    #[test]
    fn function_field_spot_values() {
        let f = FieldCtx::new(FieldSpec::FunctionField).unwrap();
        let r = polynomial_realization(&f, 4).unwrap();
        assert!(r.report.passed(), "{:?}", r.report.violations);
        assert_eq!(r.d1.get(1, 2), &f.parse("[1,1]").unwrap());
        assert_eq!(r.d.get(2, 3), &f.from_int(3));
        assert!(f.is_zero(r.d1.get(0, 0)));
    }

    #[test]
    fn degenerate_q_rejected() {
        let f = FieldCtx::new(FieldSpec::PrimeField { p: 5, q: 1 }).unwrap();
        assert!(matches!(polynomial_realization(&f, 3), Err(Error::VanishingDenominator { .. })));
    }
}

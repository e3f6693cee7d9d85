//! The polynomials `Qhat_n` and `Q_n` orthogonal with respect to the pair
//! `(L, mu)`, and the identity checks that certify them: differential
//! orthogonality, the eigen-identity `L[Q_n] = lambda_n P_n`,
//! quasi-orthogonality of `P_n` under `w`, and coefficient growth.

use crate::error::{Error, Result};
use crate::measures::{inner_mu, inner_w, mu_moments, pn_construct, MeasureSpec};
use crate::polycore::{apply_operator, BasisPoly};
use crate::scalar::{c_to_dec, cabs, CScalar, Prec, Scalar};
use rug::ops::Pow;

/// `Qhat_n` (and, when a root `zeta` is prescribed, `Q_n = Qhat_n - q_const`).
#[derive(Clone, Debug)]
pub struct DiffOrthoPoly {
    pub qhat: BasisPoly,
    pub spec: MeasureSpec,
    pub n: usize,
    pub zeta: Option<CScalar>,
    /// `Qhat_n(zeta)`; zero when no root is prescribed.
    pub q_const: CScalar,
}

/// `Qhat_n = sum_{k=0}^m (n/(n-k)) b_{n,n-k} L_{n-k}`: the `P_n` expansion
/// with each coefficient scaled by the exact eigenvalue ratio.
pub fn qhat(spec: &MeasureSpec, n: usize) -> Result<DiffOrthoPoly> {
    let p = spec.prec();
    let m = spec.m();
    if n <= m {
        return Err(Error::Shape(format!("qhat requires n > m (n = {n}, m = {m})")));
    }
    let pn = pn_construct(spec, n)?;
    let mut coeffs = pn.coeffs;
    for k in 1..=m {
        let r = p.ratio(n as i64, (n - k) as i64);
        coeffs[n - k] *= r;
    }
    Ok(DiffOrthoPoly {
        qhat: BasisPoly::new(spec.case.clone(), coeffs),
        spec: spec.clone(),
        n,
        zeta: None,
        q_const: p.c_zero(),
    })
}

/// `Q_n` vanishing at `zeta`: `Q_n = Qhat_n - Qhat_n(zeta)`.
pub fn q_with_root(spec: &MeasureSpec, n: usize, zeta: &CScalar) -> Result<DiffOrthoPoly> {
    let mut d = qhat(spec, n)?;
    d.q_const = d.qhat.eval_clenshaw(zeta)?;
    d.zeta = Some(zeta.clone());
    Ok(d)
}

impl DiffOrthoPoly {
    /// Evaluate `Q_n` (or `Qhat_n` when no root is prescribed).
    pub fn eval_q(&self, z: &CScalar) -> Result<CScalar> {
        Ok(self.qhat.eval_clenshaw(z)? - &self.q_const)
    }

    /// `Q_n` as a real-coefficient polynomial; requires a real (or absent)
    /// prescribed root.
    pub fn q_real(&self) -> Result<BasisPoly> {
        let p = self.qhat.prec();
        let im = self.q_const.imag().clone().abs();
        if im > p.tol(24) * (cabs(&self.q_const) + p.one()) {
            return Err(Error::Shape(
                "Q_n has a genuinely complex constant term; no real form".into(),
            ));
        }
        let mut q = self.qhat.clone();
        q.coeffs[0] -= self.q_const.real();
        Ok(q)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let mut v = self.spec.to_json();
        let obj = v.as_object_mut().unwrap();
        obj.insert("n".into(), serde_json::json!(self.n));
        obj.insert(
            "zeta".into(),
            match &self.zeta {
                Some(z) => serde_json::json!(c_to_dec(z)),
                None => serde_json::Value::Null,
            },
        );
        obj.insert(
            "coeffs_basis".into(),
            serde_json::json!(self
                .qhat
                .coeffs
                .iter()
                .map(crate::scalar::to_dec)
                .collect::<Vec<_>>()),
        );
        obj.insert("q_const".into(), serde_json::json!(c_to_dec(&self.q_const)));
        v
    }

    pub fn from_json(v: &serde_json::Value, p: Prec) -> Result<Self> {
        let spec = MeasureSpec::from_json(v, p)?;
        let n = v["n"]
            .as_u64()
            .ok_or_else(|| Error::Parse("missing \"n\"".into()))? as usize;
        let coeffs = v["coeffs_basis"]
            .as_array()
            .ok_or_else(|| Error::Parse("missing \"coeffs_basis\"".into()))?
            .iter()
            .map(|c| {
                c.as_str()
                    .ok_or_else(|| Error::Parse("coefficients must be strings".into()))
                    .and_then(|s| p.parse(s))
            })
            .collect::<Result<Vec<_>>>()?;
        if coeffs.len() != n + 1 {
            return Err(Error::Shape("coefficient count does not match degree".into()));
        }
        let zeta = match v["zeta"].as_str() {
            Some(s) => Some(p.parse_complex(s)?),
            None => None,
        };
        let q_const = match v["q_const"].as_str() {
            Some(s) => p.parse_complex(s)?,
            None => p.c_zero(),
        };
        Ok(DiffOrthoPoly {
            qhat: BasisPoly::new(spec.case.clone(), coeffs),
            spec,
            n,
            zeta,
            q_const,
        })
    }
}

/// Residuals `<L[Q_n], x^k>_mu / (||L[Q_n]||_mu ||x^k||_mu)` for
/// `k = 0..=kmax`; all vanish for `kmax <= n-1`.
pub fn diff_orthogonality_residuals(d: &DiffOrthoPoly, kmax: usize) -> Result<Vec<Scalar>> {
    let p = d.qhat.prec();
    let lq = apply_operator(&d.spec.case, &d.qhat)?;
    let moments = mu_moments(&lq, &d.spec, kmax)?;
    let lq_norm = inner_mu(&lq, &lq, &d.spec)?.sqrt();
    let mut out = Vec::with_capacity(kmax + 1);
    let mut xk = BasisPoly::constant(d.spec.case.clone(), p.one());
    for (k, mk) in moments.into_iter().enumerate() {
        let xk_norm = inner_mu(&xk, &xk, &d.spec)?.sqrt();
        out.push(mk / (lq_norm.clone() * xk_norm));
        if k < kmax {
            xk = xk.mul_x();
        }
    }
    Ok(out)
}

/// Max coefficient-wise deviation of `L[Qhat_n]` from `lambda_n P_n`,
/// relative to the coefficient scale of `lambda_n P_n`.
pub fn eigen_residual(d: &DiffOrthoPoly) -> Result<Scalar> {
    let p = d.qhat.prec();
    let lq = apply_operator(&d.spec.case, &d.qhat)?;
    let lam = d.spec.case.lambda(d.n as u64);
    let target = pn_construct(&d.spec, d.n)?.scale(&p.int(lam));
    let diff = lq.sub(&target)?;
    Ok(diff.coeff_inf_norm() / target.coeff_inf_norm())
}

/// Normalized residuals `<P_n, x^k>_w` for `k = 0..n-m-1` — the verifiable
/// quasi-orthogonality range (the `k = n-m` moment equals
/// `rho_m ||P_n||_mu^2` and is nonzero).
pub fn quasi_orthogonality_residuals(spec: &MeasureSpec, n: usize) -> Result<Vec<Scalar>> {
    let p = spec.prec();
    let m = spec.m();
    if n <= m {
        return Err(Error::Shape(format!(
            "quasi-orthogonality requires n > m (n = {n}, m = {m})"
        )));
    }
    let pn = pn_construct(spec, n)?;
    let pn_norm = inner_w(&pn, &pn)?.sqrt();
    let mut out = Vec::with_capacity(n - m);
    let mut xk = BasisPoly::constant(spec.case.clone(), p.one());
    for k in 0..n - m {
        let v = inner_w(&pn, &xk)?;
        let xk_norm = inner_w(&xk, &xk)?.sqrt();
        out.push(v / (pn_norm.clone() * xk_norm));
        if k + 1 < n - m {
            xk = xk.mul_x();
        }
    }
    Ok(out)
}

/// One row of the coefficient-growth table (boundedness of the scaled
/// connection coefficients).
#[derive(Clone, Debug)]
pub struct GrowthRow {
    pub n: usize,
    pub k: usize,
    pub coeff_abs: Scalar,
    /// `|b_{n,n-k}| / n^k` (Laguerre) or `|b_{n,n-k}| / n^{k/2}` (Hermite).
    pub ratio: Scalar,
}

pub fn coeff_growth_report(spec: &MeasureSpec, n_list: &[usize]) -> Result<Vec<GrowthRow>> {
    let p = spec.prec();
    let m = spec.m();
    let mut rows = Vec::new();
    for &n in n_list {
        let pn = pn_construct(spec, n)?;
        for k in 1..=m {
            let coeff_abs = pn.coeffs[n - k].clone().abs();
            let power = if spec.case.is_laguerre() {
                p.int(n as i64).pow(k as u32)
            } else {
                p.int(n as i64).pow(k as u32).sqrt()
            };
            rows.push(GrowthRow {
                n,
                k,
                ratio: coeff_abs.clone() / power,
                coeff_abs,
            });
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polycore::Case;

    fn p() -> Prec {
        Prec::new(192)
    }

    fn lag0() -> Case {
        Case::laguerre(p().f(0.0)).unwrap()
    }

    fn spec_lag() -> MeasureSpec {
        MeasureSpec::new(lag0(), vec![p().one(), p().one()]).unwrap()
    }

    fn spec_herm() -> MeasureSpec {
        MeasureSpec::new(Case::Hermite, vec![p().one(), p().zero(), p().one()]).unwrap()
    }

    #[test]
    fn qhat_trivial_and_scaled() {
        // rho = 1: Qhat_7 = L_7
        let spec = MeasureSpec::new(Case::Hermite, vec![p().one()]).unwrap();
        let d = qhat(&spec, 7).unwrap();
        assert_eq!(d.qhat.degree(), 7);
        for j in 0..7 {
            assert!(d.qhat.coeffs[j].is_zero());
        }
        // coefficient on L_2 in Qhat_3 is (3/2) b_{3,2}
        let spec = spec_lag();
        let d = qhat(&spec, 3).unwrap();
        let pn = pn_construct(&spec, 3).unwrap();
        let expect = pn.coeffs[2].clone() * p().ratio(3, 2);
        assert!((d.qhat.coeffs[2].clone() - expect).abs() <= p().tol(30));
        assert!(d.qhat.is_monic());
    }

    #[test]
    fn q_with_root_examples() {
        // rho = 1 Hermite, n = 2, zeta = 0: Q_2 = H_2 + 1/2 = x^2
        let spec = MeasureSpec::new(Case::Hermite, vec![p().one()]).unwrap();
        let d = q_with_root(&spec, 2, &p().c(0.0, 0.0)).unwrap();
        assert!((d.q_const.real().clone() + p().ratio(1, 2)).abs() <= p().tol(30));
        let v = d.eval_q(&p().c(3.0, 0.0)).unwrap();
        assert!((v.real().clone() - 9u32).abs() <= p().tol(30));
        // defining property at zeta = 5
        let d = q_with_root(&spec_lag(), 3, &p().c(5.0, 0.0)).unwrap();
        let v = d.eval_q(&p().c(5.0, 0.0)).unwrap();
        assert!(cabs(&v) <= p().tol(24) * cabs(&d.q_const));
        // q_real subtracts the constant
        let q = d.q_real().unwrap();
        let v = q.eval_real(&p().f(5.0));
        assert!(v.abs() <= p().tol(24) * d.q_const.real().clone().abs());
    }

    #[test]
    fn eigen_residual_small() {
        for spec in [spec_lag(), spec_herm()] {
            let d = qhat(&spec, 8).unwrap();
            let r = eigen_residual(&d).unwrap();
            assert!(r <= p().tol(40), "residual {r}");
        }
    }

    #[test]
    fn diff_orthogonality_and_constant_degeneracy() {
        let spec = spec_lag();
        let n = 6;
        let d = qhat(&spec, n).unwrap();
        let r = diff_orthogonality_residuals(&d, n - 1).unwrap();
        for (k, v) in r.iter().enumerate() {
            assert!(v.clone().abs() <= p().tol(40), "k = {k}, r = {v}");
        }
        // adding a constant changes nothing (the operator kills it)
        let mut shifted = d.clone();
        shifted.qhat.coeffs[0] += 17u32;
        let r2 = diff_orthogonality_residuals(&shifted, n - 1).unwrap();
        for (a, b) in r.iter().zip(&r2) {
            assert!((a.clone() - b).abs() <= p().tol(36));
        }
    }

    #[test]
    fn diff_orthogonality_breaks_at_n() {
        // k = n picks up lambda_n <P_n, x^n>_mu != 0
        let spec = spec_lag();
        let n = 5;
        let d = qhat(&spec, n).unwrap();
        let r = diff_orthogonality_residuals(&d, n).unwrap();
        assert!(r[n].clone().abs() > p().f(1e-6));
    }

    #[test]
    fn quasi_orthogonality_and_first_nonzero_moment() {
        let spec = spec_lag();
        let n = 6;
        let r = quasi_orthogonality_residuals(&spec, n).unwrap();
        assert_eq!(r.len(), n - spec.m());
        for v in &r {
            assert!(v.clone().abs() <= p().tol(40), "r = {v}");
        }
        // <P_n, x^{n-m}>_w = rho_m ||P_n||_mu^2
        let pn = pn_construct(&spec, n).unwrap();
        let xk = BasisPoly::monomial(spec.case.clone(), n - spec.m(), p());
        let lhs = inner_w(&pn, &xk).unwrap();
        let rhs = inner_mu(&pn, &pn, &spec).unwrap() * &spec.rho[spec.m()];
        assert!((lhs.clone() - &rhs).abs() <= p().tol(36) * rhs.abs(), "lhs {lhs}");
    }

    #[test]
    fn hermite_parity() {
        // even rho: Qhat_n inherits the parity of n
        let spec = spec_herm();
        for n in [5usize, 8] {
            let d = qhat(&spec, n).unwrap();
            for j in (0..=n).filter(|j| (n - j) % 2 == 1) {
                assert!(
                    d.qhat.coeffs[j].clone().abs()
                        <= p().tol(30) * d.qhat.coeff_inf_norm(),
                    "n {n} j {j}"
                );
            }
        }
    }

    #[test]
    fn json_round_trip() {
        let d = q_with_root(&spec_herm(), 5, &p().c(1.5, -0.25)).unwrap();
        let j = d.to_json();
        let back = DiffOrthoPoly::from_json(&j, p()).unwrap();
        assert_eq!(back.n, 5);
        let diff = d.qhat.sub(&back.qhat).unwrap();
        assert!(diff.coeff_inf_norm() <= p().tol(8) * d.qhat.coeff_inf_norm());
        let dz = cabs(&(d.q_const.clone() - &back.q_const));
        assert!(dz <= p().tol(8) * (cabs(&d.q_const) + p().one()));
        assert!(back.zeta.is_some());
    }
}

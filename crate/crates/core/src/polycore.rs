//! Classical monic Laguerre/Hermite machinery.
//!
//! Polynomials are kept as coefficient vectors in the monic classical basis
//! `{L_0, ..., L_n}` of their case. Monomial expansions are never used beyond
//! trivial degrees: monic Laguerre/Hermite monomial coefficients grow
//! factorially and the comrade-matrix root solver needs the orthogonal basis.

use crate::error::{Error, Result};
use crate::scalar::{CScalar, Prec, Scalar};
use rug::Float;

/// Which classical family: `Laguerre(alpha)` on `R+` or `Hermite` on `R`.
#[derive(Clone, Debug)]
pub enum Case {
    Laguerre { alpha: Scalar },
    Hermite,
}

impl Case {
    pub fn laguerre(alpha: Scalar) -> Result<Self> {
        if !(alpha.clone() > -1f64) || !alpha.is_finite() {
            return Err(Error::Measure(format!(
                "Laguerre parameter must satisfy alpha > -1, got {alpha}"
            )));
        }
        Ok(Case::Laguerre { alpha })
    }

    pub fn is_laguerre(&self) -> bool {
        matches!(self, Case::Laguerre { .. })
    }

    pub fn alpha(&self) -> Option<&Scalar> {
        match self {
            Case::Laguerre { alpha } => Some(alpha),
            Case::Hermite => None,
        }
    }

    /// Same operator and same basis parameter.
    pub fn same_basis(&self, other: &Case) -> bool {
        match (self, other) {
            (Case::Laguerre { alpha: a }, Case::Laguerre { alpha: b }) => a == b,
            (Case::Hermite, Case::Hermite) => true,
            _ => false,
        }
    }

    /// Monic three-term recurrence coefficients:
    /// `L_{k+1} = (x - a_k) L_k - b_k L_{k-1}`.
    pub fn recurrence(&self, k: u64, p: Prec) -> (Scalar, Scalar) {
        match self {
            Case::Laguerre { alpha } => {
                // a_k = 2k + alpha + 1, b_k = k (k + alpha)
                let a = p.int(2 * k as i64 + 1) + alpha;
                let b = p.int(k as i64) * (p.int(k as i64) + alpha);
                (a, b)
            }
            Case::Hermite => (p.zero(), p.ratio(k as i64, 2)),
        }
    }

    /// Total mass of the classical weight: `Gamma(alpha+1)` or `sqrt(pi)`.
    pub fn weight_mass(&self, p: Prec) -> Scalar {
        match self {
            Case::Laguerre { alpha } => {
                let x = Float::with_val(p.bits(), alpha + 1u32);
                x.gamma()
            }
            Case::Hermite => p.sqrt_pi(),
        }
    }

    /// Squared norm of the monic classical polynomial:
    /// `n! Gamma(n+alpha+1)` or `n! sqrt(pi) 2^-n`.
    pub fn tau(&self, n: u64, p: Prec) -> Scalar {
        let nf = p.int(n as i64 + 1).gamma();
        match self {
            Case::Laguerre { alpha } => {
                let g = (p.int(n as i64 + 1) + alpha).gamma();
                nf * g
            }
            Case::Hermite => {
                let mut t = nf * p.sqrt_pi();
                t >>= n as u32;
                t
            }
        }
    }

    /// Mhaskar-Rakhmanov-Saff constant: `4n` (Laguerre) or `sqrt(2n)` (Hermite).
    pub fn mrs_constant(&self, n: u64, p: Prec) -> Scalar {
        match self {
            Case::Laguerre { .. } => p.int(4 * n as i64),
            Case::Hermite => p.int(2 * n as i64).sqrt(),
        }
    }

    /// Operator eigenvalue on `L_n`: `lambda_n = -n` in both cases.
    pub fn lambda(&self, n: u64) -> i64 {
        -(n as i64)
    }

    /// Contracted support of the limit zero distribution.
    pub fn delta_c(&self) -> (f64, f64) {
        if self.is_laguerre() {
            (0.0, 1.0)
        } else {
            (-1.0, 1.0)
        }
    }

    /// Membership in `Delta` (`R+` or `R`) with a nonnegative slack for
    /// boundary ties.
    pub fn in_delta(&self, x: &Scalar, slack: &Scalar) -> bool {
        match self {
            Case::Laguerre { .. } => x.clone() + slack >= 0,
            Case::Hermite => true,
        }
    }

    /// Shift the basis parameter (`alpha -> alpha + 1`); identity for Hermite.
    fn raised(&self) -> Case {
        match self {
            Case::Laguerre { alpha } => Case::Laguerre {
                alpha: alpha.clone() + 1u32,
            },
            Case::Hermite => Case::Hermite,
        }
    }
}

/// Spec-level operation: recurrence coefficients for the classical family.
pub fn classical_recurrence(case: &Case, k: u64, p: Prec) -> (Scalar, Scalar) {
    case.recurrence(k, p)
}

/// Closed-form constants of the classical family at degree `n`.
pub struct ClassicalConstants {
    pub tau: Scalar,
    pub lambda: i64,
    pub c_n: Scalar,
}

pub fn classical_constants(case: &Case, n: u64, p: Prec) -> ClassicalConstants {
    ClassicalConstants {
        tau: case.tau(n, p),
        lambda: case.lambda(n),
        c_n: if n >= 1 { case.mrs_constant(n, p) } else { p.zero() },
    }
}

/// Polynomial in the monic classical basis of `case`:
/// `p = sum_j coeffs[j] * L_j`.
#[derive(Clone, Debug)]
pub struct BasisPoly {
    pub case: Case,
    pub coeffs: Vec<Scalar>,
}

impl BasisPoly {
    pub fn new(case: Case, coeffs: Vec<Scalar>) -> Self {
        assert!(!coeffs.is_empty());
        BasisPoly { case, coeffs }
    }

    pub fn constant(case: Case, v: Scalar) -> Self {
        BasisPoly { case, coeffs: vec![v] }
    }

    /// The classical `L_n` itself.
    pub fn classical(case: Case, n: usize, p: Prec) -> Self {
        let mut coeffs = vec![p.zero(); n + 1];
        coeffs[n] = p.one();
        BasisPoly { case, coeffs }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn prec(&self) -> Prec {
        Prec::new(self.coeffs[0].prec())
    }

    pub fn is_monic(&self) -> bool {
        *self.coeffs.last().unwrap() == 1u32
    }

    /// Stable evaluation by backward (Clenshaw) recurrence in the basis.
    pub fn eval_clenshaw(&self, z: &CScalar) -> Result<CScalar> {
        let v = self.eval(z);
        if !v.real().is_finite() || !v.imag().is_finite() {
            return Err(Error::Range("polynomial evaluation overflowed".into()));
        }
        Ok(v)
    }

    pub fn eval(&self, z: &CScalar) -> CScalar {
        let p = self.prec();
        let n = self.degree();
        let mut y1 = p.c_zero(); // y_{k+1}
        let mut y2 = p.c_zero(); // y_{k+2}
        for k in (0..=n).rev() {
            let (a, _) = self.case.recurrence(k as u64, p);
            let (_, b1) = self.case.recurrence(k as u64 + 1, p);
            // y_k = d_k + (z - a_k) y_{k+1} - b_{k+1} y_{k+2}
            let mut y = z.clone() - a;
            y *= &y1;
            y -= y2.clone() * b1;
            y += &self.coeffs[k];
            y2 = y1;
            y1 = y;
        }
        y1
    }

    pub fn eval_real(&self, x: &Scalar) -> Scalar {
        let p = self.prec();
        let n = self.degree();
        let mut y1 = p.zero();
        let mut y2 = p.zero();
        for k in (0..=n).rev() {
            let (a, _) = self.case.recurrence(k as u64, p);
            let (_, b1) = self.case.recurrence(k as u64 + 1, p);
            let mut y = x.clone() - a;
            y *= &y1;
            y -= y2.clone() * b1;
            y += &self.coeffs[k];
            y2 = y1;
            y1 = y;
        }
        y1
    }

    /// Value, derivative, and the cancellation scale
    /// `sum_k |d_k| * max_{j<=k} |L_j(z)|` — rounding injected while
    /// accumulating term `k` is amplified by at most the largest basis
    /// magnitude seen so far, so this bounds the achievable residual of the
    /// forward recurrence without being dominated by one huge low-order
    /// coefficient paired with a huge high-order basis value.
    pub fn eval_full(&self, z: &CScalar) -> (CScalar, CScalar, Scalar) {
        let p = self.prec();
        let n = self.degree();
        let mut lk: CScalar = p.c(1.0, 0.0); // L_0
        let mut lkm1 = p.c_zero();
        let mut dk = p.c_zero(); // L_0'
        let mut dkm1 = p.c_zero();
        let mut v = p.c_real(&self.coeffs[0]);
        let mut dv = p.c_zero();
        let mut lmax = p.one();
        let mut scale = self.coeffs[0].clone().abs();
        for k in 0..n {
            let (a, b) = self.case.recurrence(k as u64, p);
            let zma = z.clone() - a;
            let lk1 = zma.clone() * &lk - lkm1.clone() * &b;
            let dk1 = zma * &dk - dkm1.clone() * &b + &lk;
            lkm1 = lk;
            lk = lk1;
            dkm1 = dk;
            dk = dk1;
            let d = &self.coeffs[k + 1];
            v += lk.clone() * d;
            dv += dk.clone() * d;
            let a = crate::scalar::cabs(&lk);
            if a > lmax {
                lmax = a;
            }
            scale += d.clone().abs() * &lmax;
        }
        (v, dv, scale)
    }

    /// Derivative expressed in the natural basis of the result. The Laguerre
    /// derivative lives in the `alpha+1` basis; the leading coefficient is
    /// `n` (an `n`-times-monic polynomial), carried explicitly.
    pub fn derivative_in_basis(&self) -> BasisPoly {
        let p = self.prec();
        let n = self.degree();
        if n == 0 {
            return BasisPoly::constant(self.case.raised(), p.zero());
        }
        let coeffs: Vec<Scalar> = (1..=n)
            .map(|j| self.coeffs[j].clone() * p.int(j as i64))
            .collect();
        BasisPoly { case: self.case.raised(), coeffs }
    }

    /// Multiplication by `x`, staying in the same basis via the three-term
    /// recurrence `x L_j = L_{j+1} + a_j L_j + b_j L_{j-1}`.
    pub fn mul_x(&self) -> BasisPoly {
        let p = self.prec();
        let n = self.degree();
        let mut r = vec![p.zero(); n + 2];
        for (j, d) in self.coeffs.iter().enumerate() {
            if d.is_zero() {
                continue;
            }
            let (a, b) = self.case.recurrence(j as u64, p);
            r[j + 1] += d;
            r[j] += d.clone() * a;
            if j >= 1 {
                r[j - 1] += d.clone() * b;
            }
        }
        BasisPoly { case: self.case.clone(), coeffs: r }
    }

    /// Convert a polynomial written in the `alpha` basis to the `alpha+1`
    /// basis using `L_j^(a) = L_j^(a+1) + j L_{j-1}^(a+1)`.
    pub fn raise_alpha(&self) -> BasisPoly {
        if !self.case.is_laguerre() {
            return self.clone();
        }
        let p = self.prec();
        let n = self.degree();
        let mut f = vec![p.zero(); n + 1];
        for (j, d) in self.coeffs.iter().enumerate() {
            f[j] += d;
            if j >= 1 {
                f[j - 1] += d.clone() * p.int(j as i64);
            }
        }
        BasisPoly { case: self.case.raised(), coeffs: f }
    }

    /// Convert from the `alpha+1` basis down to the `alpha` basis
    /// (`L_j^(a+1) = L_j^(a) - j L_{j-1}^(a+1)`, eliminated top down).
    pub fn lower_alpha(&self) -> Result<BasisPoly> {
        let alpha = match &self.case {
            Case::Laguerre { alpha } => alpha.clone() - 1u32,
            Case::Hermite => return Ok(self.clone()),
        };
        let target = Case::laguerre(alpha)?;
        let p = self.prec();
        let n = self.degree();
        let mut e = self.coeffs.clone();
        let mut f = vec![p.zero(); n + 1];
        for j in (0..=n).rev() {
            f[j] += &e[j];
            if j >= 1 {
                let t = e[j].clone() * p.int(j as i64);
                e[j - 1] -= t;
            }
        }
        Ok(BasisPoly { case: target, coeffs: f })
    }

    /// `x^k` expressed in the basis.
    pub fn monomial(case: Case, k: usize, p: Prec) -> BasisPoly {
        let mut q = BasisPoly::constant(case, p.one());
        for _ in 0..k {
            q = q.mul_x();
        }
        q
    }

    pub fn scale(&self, s: &Scalar) -> BasisPoly {
        BasisPoly {
            case: self.case.clone(),
            coeffs: self.coeffs.iter().map(|d| d.clone() * s).collect(),
        }
    }

    pub fn add(&self, other: &BasisPoly) -> Result<BasisPoly> {
        if !self.case.same_basis(&other.case) {
            return Err(Error::Basis("cannot add polynomials in different bases".into()));
        }
        let p = self.prec();
        let n = self.degree().max(other.degree());
        let mut r = vec![p.zero(); n + 1];
        for (j, d) in self.coeffs.iter().enumerate() {
            r[j] += d;
        }
        for (j, d) in other.coeffs.iter().enumerate() {
            r[j] += d;
        }
        Ok(BasisPoly { case: self.case.clone(), coeffs: r })
    }

    pub fn sub(&self, other: &BasisPoly) -> Result<BasisPoly> {
        Ok(self.add(&other.scale(&self.prec().int(-1)))?)
    }

    /// Largest coefficient magnitude.
    pub fn coeff_inf_norm(&self) -> Scalar {
        let mut m = self.prec().zero();
        for d in &self.coeffs {
            let a = d.clone().abs();
            if a > m {
                m = a;
            }
        }
        m
    }
}

/// Apply the case's differential operator:
/// `L_L[p] = x p'' + (1 + alpha - x) p'` or `L_H[p] = p''/2 - x p'`.
///
/// The basis polynomials are eigenfunctions (`L[L_k] = -k L_k`), so by
/// linearity the operator acts diagonally on basis coefficients. This is
/// exact and keeps full precision at any degree;
/// [`apply_operator_via_derivatives`] validates the eigen property itself.
pub fn apply_operator(case: &Case, poly: &BasisPoly) -> Result<BasisPoly> {
    if !case.same_basis(&poly.case) {
        return Err(Error::Basis("operator/polynomial basis mismatch".into()));
    }
    let p = poly.prec();
    let coeffs = poly
        .coeffs
        .iter()
        .enumerate()
        .map(|(k, d)| d.clone() * p.int(case.lambda(k as u64)))
        .collect();
    Ok(BasisPoly::new(poly.case.clone(), coeffs))
}

/// Reference implementation of the operator from genuine derivative and
/// recurrence algebra. The Laguerre branch converts back from the raised
/// basis through a triangular solve whose cancellation grows factorially
/// with the degree, so this is only suitable for moderate degrees; it
/// exists to certify that [`apply_operator`]'s diagonal action agrees with
/// the actual differential operator.
pub fn apply_operator_via_derivatives(case: &Case, poly: &BasisPoly) -> Result<BasisPoly> {
    if !case.same_basis(&poly.case) {
        return Err(Error::Basis("operator/polynomial basis mismatch".into()));
    }
    let p = poly.prec();
    match case {
        Case::Hermite => {
            let d1 = poly.derivative_in_basis();
            let d2 = d1.derivative_in_basis();
            let half = p.ratio(1, 2);
            let res = d2.scale(&half).sub(&d1.mul_x())?;
            pad_to(res, poly.degree())
        }
        Case::Laguerre { alpha } => {
            // work in the alpha+1 basis, then convert down once
            let d1 = poly.derivative_in_basis(); // alpha+1 basis
            let d2 = d1.derivative_in_basis().lower_alpha()?; // back to alpha+1
            let ap1 = p.one() + alpha;
            let t = d2.mul_x().add(&d1.scale(&ap1))?.sub(&d1.mul_x())?;
            pad_to(t.lower_alpha()?, poly.degree())
        }
    }
}

fn pad_to(mut poly: BasisPoly, degree: usize) -> Result<BasisPoly> {
    let p = poly.prec();
    while poly.degree() < degree {
        poly.coeffs.push(p.zero());
    }
    while poly.degree() > degree {
        let top = poly.coeffs.pop().unwrap();
        if top.clone().abs() > p.tol(24) * poly.coeff_inf_norm() {
            return Err(Error::Range("operator result exceeded expected degree".into()));
        }
    }
    Ok(poly)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p() -> Prec {
        Prec::new(256)
    }

    fn hermite() -> Case {
        Case::Hermite
    }

    fn laguerre(alpha: f64) -> Case {
        Case::laguerre(p().f(alpha)).unwrap()
    }

    #[test]
    fn recurrence_examples() {
        let (a, b) = classical_recurrence(&hermite(), 3, p());
        assert_eq!(a, 0u32);
        assert_eq!(b, p().ratio(3, 2));
        let (a, b) = classical_recurrence(&laguerre(0.0), 0, p());
        assert_eq!(a, 1u32);
        assert_eq!(b, 0u32);
        let (a, b) = classical_recurrence(&laguerre(0.5), 2, p());
        assert_eq!(a, 5.5f64);
        assert_eq!(b, 5u32);
    }

    #[test]
    fn clenshaw_examples() {
        // L_1 = x for monic Hermite
        let h1 = BasisPoly::classical(hermite(), 1, p());
        let v = h1.eval_clenshaw(&p().c(2.0, 0.0)).unwrap();
        assert_eq!(*v.real(), 2u32);
        // H_2 monic = x^2 - 1/2 at 0
        let h2 = BasisPoly::classical(hermite(), 2, p());
        let v = h2.eval_clenshaw(&p().c(0.0, 0.0)).unwrap();
        assert_eq!(*v.real(), p().ratio(-1, 2));
        // L_1 = x - (alpha+1) at 0 for alpha = 0
        let l1 = BasisPoly::classical(laguerre(0.0), 1, p());
        let v = l1.eval_clenshaw(&p().c(0.0, 0.0)).unwrap();
        assert_eq!(*v.real(), -1f64);
    }

    #[test]
    fn derivative_examples() {
        // d/dx H_2 = 2 H_1
        let h2 = BasisPoly::classical(hermite(), 2, p());
        let d = h2.derivative_in_basis();
        assert_eq!(d.coeffs.len(), 2);
        assert_eq!(d.coeffs[0], 0u32);
        assert_eq!(d.coeffs[1], 2u32);
        // d/dx L_1 = 1, expressed in the alpha+1 basis
        let l1 = BasisPoly::classical(laguerre(0.0), 1, p());
        let d = l1.derivative_in_basis();
        assert_eq!(d.degree(), 0);
        assert_eq!(d.coeffs[0], 1u32);
        assert_eq!(d.case.alpha().unwrap(), &1u32);
        // H_4' is odd, so it vanishes at 0
        let h4 = BasisPoly::classical(hermite(), 4, p());
        let v = h4.derivative_in_basis().eval_real(&p().zero());
        assert!(v.is_zero());
        // degree 0 -> zero polynomial
        let c = BasisPoly::constant(hermite(), p().one());
        assert!(c.derivative_in_basis().coeffs[0].is_zero());
    }

    #[test]
    fn operator_eigen_examples() {
        let tol = p().tol(20);
        // L[L_3] = -3 L_3 for Laguerre alpha = 0
        let l3 = BasisPoly::classical(laguerre(0.0), 3, p());
        let r = apply_operator_via_derivatives(&laguerre(0.0), &l3).unwrap();
        let resid = r.add(&l3.scale(&p().int(3))).unwrap();
        assert!(resid.coeff_inf_norm() <= tol);
        // L[1] = 0 for Hermite
        let one = BasisPoly::constant(hermite(), p().one());
        let r = apply_operator_via_derivatives(&hermite(), &one).unwrap();
        assert!(r.coeff_inf_norm() <= tol);
        // L[H_2] = -2 H_2
        let h2 = BasisPoly::classical(hermite(), 2, p());
        let r = apply_operator_via_derivatives(&hermite(), &h2).unwrap();
        let resid = r.add(&h2.scale(&p().int(2))).unwrap();
        assert!(resid.coeff_inf_norm() <= tol);
    }

    #[test]
    fn eigen_identity_sweep() {
        // the derivative route loses roughly factorial(n) in the Laguerre
        // basis lowering, so the tolerance carries that factor
        let tol = p().tol(20);
        for case in [hermite(), laguerre(0.0), laguerre(0.5), laguerre(-0.25)] {
            for n in [1usize, 2, 5, 17, 30] {
                let ln = BasisPoly::classical(case.clone(), n, p());
                let r = apply_operator_via_derivatives(&case, &ln).unwrap();
                let resid = r.add(&ln.scale(&p().int(n as i64))).unwrap();
                let mut scale = p().int(n as i64);
                for j in 1..=n {
                    scale *= j as u32;
                }
                assert!(
                    resid.coeff_inf_norm() <= tol.clone() * scale,
                    "case {case:?} n {n}"
                );
            }
        }
    }

    #[test]
    fn diagonal_operator_matches_derivative_route() {
        // dense coefficients, moderate degree: both implementations agree
        for case in [hermite(), laguerre(0.0), laguerre(0.5)] {
            let n = 12usize;
            let coeffs: Vec<Scalar> = (0..=n).map(|k| p().ratio(k as i64 + 1, 3)).collect();
            let poly = BasisPoly::new(case.clone(), coeffs);
            let a = apply_operator(&case, &poly).unwrap();
            let b = apply_operator_via_derivatives(&case, &poly).unwrap();
            let resid = a.sub(&b).unwrap();
            let scale = b.coeff_inf_norm() + p().one();
            assert!(
                resid.coeff_inf_norm() <= p().tol(60) * scale,
                "case {case:?}: dev {}",
                resid.coeff_inf_norm()
            );
        }
    }

    #[test]
    fn clenshaw_matches_forward_recurrence() {
        let tol = p().tol(20);
        for case in [hermite(), laguerre(0.5)] {
            for n in [1usize, 7, 23] {
                let ln = BasisPoly::classical(case.clone(), n, p());
                let z = p().c(1.7, -0.3);
                let c = ln.eval(&z);
                let (f, _, s) = ln.eval_full(&z);
                let diff = crate::scalar::cabs(&(c - &f));
                assert!(diff <= tol.clone() * s);
            }
        }
    }

    #[test]
    fn constants_examples() {
        let c = classical_constants(&hermite(), 0, p());
        assert_eq!(c.tau, p().sqrt_pi());
        let c = classical_constants(&laguerre(0.0), 1, p());
        assert_eq!(c.tau, 1u32);
        assert_eq!(c.lambda, -1);
        assert_eq!(c.c_n, 4u32);
        let c = classical_constants(&hermite(), 8, p());
        assert_eq!(c.c_n, 4u32);
        // tau_2 = 2! sqrt(pi) / 4 for Hermite
        let c = classical_constants(&hermite(), 2, p());
        assert_eq!(c.tau, p().sqrt_pi() / 2u32);
    }

    #[test]
    fn derivative_matches_finite_difference() {
        // central difference with h = 2^-(B/3)
        let pr = p();
        let h = pr.tol_div(3);
        for case in [hermite(), laguerre(0.25)] {
            let poly = BasisPoly::classical(case, 6, pr);
            let x = pr.f(1.3);
            let d = poly.derivative_in_basis().eval_real(&x);
            let fp = poly.eval_real(&(x.clone() + &h));
            let fm = poly.eval_real(&(x.clone() - &h));
            let fd = (fp - fm) / (h.clone() * 2u32);
            let err = (d.clone() - fd).abs();
            // O(h^2) truncation
            let bound = h.clone() * &h * 1e4f64;
            assert!(err <= bound, "err {err} bound {bound}");
        }
    }

    #[test]
    fn alpha_round_trip() {
        let pr = p();
        let poly = BasisPoly::classical(laguerre(0.5), 9, pr);
        let rt = poly.raise_alpha().lower_alpha().unwrap();
        let diff = poly.sub(&rt).unwrap();
        assert!(diff.coeff_inf_norm() <= pr.tol(16));
    }
}

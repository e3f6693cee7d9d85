//! Zeros of basis polynomials: comrade-matrix seeds, full-precision
//! refinement, Aberth-Ehrlich simultaneous iteration, zero statistics,
//! empirical-vs-limit (KS) distances, and interlacing checks.

use crate::error::{Error, Result};
use crate::polycore::{BasisPoly, Case};
use crate::scalar::{cabs, CScalar, Prec, Scalar};
use nalgebra::DMatrix;
use rug::Assign;

/// The zero set of one polynomial, sorted by `(re, im)`.
#[derive(Clone, Debug)]
pub struct ZeroCloud {
    pub zeros: Vec<CScalar>,
    pub n: usize,
    pub c_n: Scalar,
    /// True when the zeros have been divided by `c_n`.
    pub normalized: bool,
}

fn sort_zeros(zeros: &mut [CScalar]) {
    zeros.sort_by(|a, b| {
        a.real()
            .partial_cmp(b.real())
            .unwrap()
            .then(a.imag().partial_cmp(b.imag()).unwrap())
    });
}

impl ZeroCloud {
    /// Divide all zeros by the MRS constant `c_n`.
    pub fn normalize(&self) -> ZeroCloud {
        let mut zeros: Vec<CScalar> = self.zeros.iter().map(|z| z.clone() / &self.c_n).collect();
        sort_zeros(&mut zeros);
        ZeroCloud {
            zeros,
            n: self.n,
            c_n: self.c_n.clone(),
            normalized: true,
        }
    }

    /// Real parts, sorted ascending.
    pub fn real_parts(&self) -> Vec<Scalar> {
        let mut xs: Vec<Scalar> = self.zeros.iter().map(|z| z.real().clone()).collect();
        xs.sort_by(|a, b| a.partial_cmp(b).unwrap());
        xs
    }

    /// CSV with columns `n,index,re,im,normalized,c_n`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,index,re,im,normalized,c_n\n");
        let cn = crate::scalar::to_dec(&self.c_n);
        for (i, z) in self.zeros.iter().enumerate() {
            out.push_str(&format!(
                "{},{},{},{},{},{}\n",
                self.n,
                i,
                crate::scalar::to_dec(z.real()),
                crate::scalar::to_dec(z.imag()),
                if self.normalized { 1 } else { 0 },
                cn
            ));
        }
        out
    }
}

/// Comrade matrix of `p` in the orthonormal scaling of its basis: the
/// symmetric Jacobi matrix with the last column modified by the (scaled)
/// coefficient row. Double precision; used only for eigenvalue seeds.
fn comrade_seeds(p: &BasisPoly) -> Result<Vec<(f64, f64)>> {
    let pr = p.prec();
    let n = p.degree();
    let lead = p.coeffs[n].clone();
    // orthonormal-scaled coefficients dt_j = d_j sqrt(tau_j / tau_{n-1});
    // computed in rug and rounded once so extreme tau ratios just underflow
    let tau_nm1 = p.case.tau(n as u64 - 1, pr);
    let mut a = DMatrix::<f64>::zeros(n, n);
    for j in 0..n {
        let (aj, bj) = p.case.recurrence(j as u64, pr);
        a[(j, j)] = aj.to_f64();
        if j >= 1 {
            let s = bj.sqrt().to_f64();
            a[(j, j - 1)] = s;
            a[(j - 1, j)] = s;
        }
    }
    for i in 0..n {
        let dt = (p.coeffs[i].clone() / &lead)
            * (p.case.tau(i as u64, pr) / &tau_nm1).sqrt();
        let v = dt.to_f64();
        if !v.is_finite() {
            return Err(Error::Eig(
                "comrade matrix entries overflow double precision; use seeded roots".into(),
            ));
        }
        a[(i, n - 1)] -= v;
    }
    let eigs = a.complex_eigenvalues();
    Ok(eigs.iter().map(|e| (e.re, e.im)).collect())
}

/// Newton-polish one seed at full precision. Returns `None` when the
/// iteration fails to reach the residual floor.
fn polish(p: &BasisPoly, seed: &CScalar) -> Option<CScalar> {
    let pr = p.prec();
    let tol = pr.tol(8);
    let floor = pr.tol(16);
    let mut z = seed.clone();
    let mut best: Option<Scalar> = None;
    for _ in 0..48 {
        let (v, dv, s) = p.eval_full(&z);
        if cabs(&v) <= floor.clone() * &s {
            return Some(z);
        }
        if cabs(&dv).is_zero() {
            return None;
        }
        let step = v / &dv;
        z -= &step;
        let dz = cabs(&step);
        let za = cabs(&z) + pr.one();
        if dz <= tol.clone() * &za {
            return Some(z);
        }
        match &best {
            Some(b) if dz >= *b => {
                // stalled; accept only if already tiny
                if dz <= pr.tol_div(2).clone() * za {
                    return Some(z);
                }
                return None;
            }
            _ => best = Some(dz),
        }
    }
    None
}

/// Aberth-Ehrlich simultaneous refinement of a full set of root
/// approximations. Works entirely at full precision.
pub fn aberth(p: &BasisPoly, seeds: &[CScalar]) -> Result<Vec<CScalar>> {
    let pr = p.prec();
    let n = p.degree();
    if seeds.len() != n {
        return Err(Error::Shape(format!(
            "aberth needs {n} seeds, got {}",
            seeds.len()
        )));
    }
    let mut z: Vec<CScalar> = seeds.to_vec();
    let tol = pr.tol(10);
    for _ in 0..200 {
        let mut moved = pr.zero();
        let mut scale = pr.zero();
        for i in 0..n {
            let (v, dv, s) = p.eval_full(&z[i]);
            if cabs(&v) <= pr.tol(16).clone() * &s {
                continue;
            }
            let ratio = v / &dv; // p/p'
            let mut sum = pr.c_zero();
            for j in 0..n {
                if j != i {
                    let d = z[i].clone() - &z[j];
                    if cabs(&d).is_zero() {
                        return Err(Error::Eig("coincident Aberth iterates".into()));
                    }
                    sum += d.recip();
                }
            }
            let denom = pr.c(1.0, 0.0) - ratio.clone() * sum;
            let w = ratio / denom;
            z[i] -= &w;
            let dz = cabs(&w);
            if dz > moved {
                moved = dz;
            }
        }
        for zi in &z {
            let a = cabs(zi) + pr.one();
            if a > scale {
                scale = a;
            }
        }
        if moved <= tol.clone() * scale {
            return Ok(z);
        }
    }
    Err(Error::NoConv("Aberth iteration did not converge".into()))
}

/// Force exact conjugate pairing on a refined zero set of a
/// real-coefficient polynomial: zeros within the pairing tolerance of the
/// real axis are projected onto it; the rest are re-paired with their
/// conjugates.
fn enforce_conjugacy(zeros: &mut [CScalar], pr: Prec) {
    let eps = pr.tol_div(4);
    for z in zeros.iter_mut() {
        let im = z.imag().clone().abs();
        if im <= eps.clone() * (cabs(z) + pr.one()) {
            *z = pr.c_real(z.real());
        }
    }
}

/// All zeros of `p`: comrade-matrix eigenvalue seeds polished by Newton,
/// with Aberth-Ehrlich as the fallback for clustered or stubborn seeds.
pub fn roots(p: &BasisPoly) -> Result<ZeroCloud> {
    let pr = p.prec();
    let n = p.degree();
    if n < 1 {
        return Err(Error::Shape("root-finding needs degree >= 1".into()));
    }
    if p.coeffs[n].is_zero() {
        return Err(Error::Shape("leading coefficient must be nonzero".into()));
    }
    let seeds = comrade_seeds(p)?;
    let mut zeros: Vec<CScalar> = Vec::with_capacity(n);
    let mut all_ok = true;
    for &(re, im) in &seeds {
        // real-axis seeds of real polynomials stay exactly real under Newton
        let near_real = im.abs() <= 1e-8 * (1.0 + re.abs());
        let seed = if near_real { pr.c(re, 0.0) } else { pr.c(re, im) };
        match polish(p, &seed) {
            Some(z) => zeros.push(z),
            None => {
                all_ok = false;
                zeros.push(seed);
            }
        }
    }
    if !all_ok {
        zeros = aberth(p, &zeros)?;
    }
    enforce_conjugacy(&mut zeros, pr);
    sort_zeros(&mut zeros);
    Ok(ZeroCloud {
        zeros,
        n,
        c_n: p.case.mrs_constant(n as u64, pr),
        normalized: false,
    })
}

/// Zeros of `p` starting from caller-provided seeds (used when the comrade
/// route is unusable, e.g. constant terms beyond double-precision range).
/// Seeds are refined together by Aberth-Ehrlich.
pub fn roots_with_seeds(p: &BasisPoly, seeds: &[CScalar]) -> Result<ZeroCloud> {
    let pr = p.prec();
    let n = p.degree();
    if n < 1 {
        return Err(Error::Shape("root-finding needs degree >= 1".into()));
    }
    let mut zeros = aberth(p, seeds)?;
    enforce_conjugacy(&mut zeros, pr);
    sort_zeros(&mut zeros);
    Ok(ZeroCloud {
        zeros,
        n,
        c_n: p.case.mrs_constant(n as u64, pr),
        normalized: false,
    })
}

/// Summary statistics for reality, support membership, and gap checks.
#[derive(Clone, Debug)]
pub struct ZeroStats {
    /// Count of zeros with `|Im z| <= eps_real` lying in `Delta` (boundary
    /// ties count as inside).
    pub real_in_delta: usize,
    pub max_imag: Scalar,
    /// Minimum gap among the real zeros; infinity when fewer than two.
    pub min_real_gap: Scalar,
    pub max_abs: Scalar,
}

pub fn zero_stats(zc: &ZeroCloud, case: &Case) -> ZeroStats {
    let pr = Prec::new(zc.c_n.prec());
    let eps = pr.tol_div(4);
    let mut real_xs: Vec<Scalar> = Vec::new();
    let mut max_imag = pr.zero();
    let mut max_abs = pr.zero();
    for z in &zc.zeros {
        let a = cabs(z);
        let im = z.imag().clone().abs();
        let slack = eps.clone() * (a.clone() + pr.one());
        if im <= slack {
            if case.in_delta(z.real(), &slack) {
                real_xs.push(z.real().clone());
            }
        }
        if im > max_imag {
            max_imag = im;
        }
        if a > max_abs {
            max_abs = a;
        }
    }
    real_xs.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut min_gap = pr.zero();
    min_gap.assign(rug::float::Special::Infinity);
    for w in real_xs.windows(2) {
        let g = w[1].clone() - &w[0];
        if g < min_gap {
            min_gap = g;
        }
    }
    ZeroStats {
        real_in_delta: real_xs.len(),
        max_imag,
        min_real_gap: min_gap,
        max_abs,
    }
}

/// The limit distribution `nu_w` of the contracted zeros on `Delta_c`.
#[derive(Clone, Debug)]
pub struct LimitDensity {
    pub case: Case,
}

impl LimitDensity {
    pub fn new(case: Case) -> Self {
        LimitDensity { case }
    }

    /// Closed-form CDF, clamped outside `Delta_c`.
    pub fn cdf(&self, t: &Scalar, pr: Prec) -> Scalar {
        let (lo, hi) = self.case.delta_c();
        if *t <= lo {
            return pr.zero();
        }
        if *t >= hi {
            return pr.one();
        }
        match &self.case {
            Case::Laguerre { .. } => {
                // (2/pi)(theta + sin theta cos theta), theta = asin(sqrt t)
                let theta = t.clone().sqrt().asin();
                let s = theta.clone().sin();
                let c = theta.clone().cos();
                (theta + s * c) * 2u32 / pr.pi()
            }
            Case::Hermite => {
                // semicircle: 1/2 + (t sqrt(1-t^2) + asin t)/pi
                let root = (pr.one() - t.clone() * t).sqrt();
                pr.ratio(1, 2) + (t.clone() * root + t.clone().asin()) / pr.pi()
            }
        }
    }
}

/// One-sample Kolmogorov-Smirnov distance between the empirical CDF of the
/// (real parts of the) normalized zeros and the limit CDF.
pub fn ks_distance(zc: &ZeroCloud, ld: &LimitDensity) -> Result<Scalar> {
    if !zc.normalized {
        return Err(Error::Shape("ks_distance expects a normalized cloud".into()));
    }
    let pr = Prec::new(zc.c_n.prec());
    let xs = zc.real_parts();
    let n = xs.len();
    if n == 0 {
        return Err(Error::Shape("empty zero cloud".into()));
    }
    let mut d = pr.zero();
    for (i, x) in xs.iter().enumerate() {
        let f = ld.cdf(x, pr);
        let lo = (f.clone() - pr.ratio(i as i64, n as i64)).abs();
        let hi = (f - pr.ratio(i as i64 + 1, n as i64)).abs();
        if lo > d {
            d = lo;
        }
        if hi > d {
            d = hi;
        }
    }
    Ok(d)
}

/// `true` iff `zeros[i] < crit[i] < zeros[i+1]` for all `i`.
pub fn interlace_check(crit: &[Scalar], zeros: &[Scalar]) -> Result<bool> {
    if crit.len() + 1 != zeros.len() {
        return Err(Error::Shape(format!(
            "interlacing needs |crit| = |zeros| - 1 (got {} and {})",
            crit.len(),
            zeros.len()
        )));
    }
    for i in 0..crit.len() {
        if !(zeros[i] < crit[i] && crit[i] < zeros[i + 1]) {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::MeasureSpec;

    fn p() -> Prec {
        Prec::new(192)
    }

    fn lag0() -> Case {
        Case::laguerre(p().f(0.0)).unwrap()
    }

    #[test]
    fn classical_root_examples() {
        // H_2 monic: x^2 - 1/2
        let h2 = BasisPoly::classical(Case::Hermite, 2, p());
        let zc = roots(&h2).unwrap();
        let expect = (p().ratio(1, 2)).sqrt();
        assert!((zc.zeros[1].real().clone() - &expect).abs() <= p().tol(24));
        assert!((zc.zeros[0].real().clone() + &expect).abs() <= p().tol(24));
        assert!(zc.zeros[0].imag().is_zero());
        // L_1: {1}
        let l1 = BasisPoly::classical(lag0(), 1, p());
        let zc = roots(&l1).unwrap();
        assert!((zc.zeros[0].real().clone() - 1u32).abs() <= p().tol(24));
        // L_2: {2 +- sqrt 2}
        let l2 = BasisPoly::classical(lag0(), 2, p());
        let zc = roots(&l2).unwrap();
        let r2 = p().f(2.0).sqrt();
        assert!((zc.zeros[0].real().clone() - (p().f(2.0) - &r2)).abs() <= p().tol(24));
        assert!((zc.zeros[1].real().clone() - (p().f(2.0) + &r2)).abs() <= p().tol(24));
    }

    #[test]
    fn residual_postcondition() {
        for n in [6usize, 19, 40] {
            let h = BasisPoly::classical(Case::Hermite, n, p());
            let zc = roots(&h).unwrap();
            assert_eq!(zc.zeros.len(), n);
            for z in &zc.zeros {
                let (v, _, s) = h.eval_full(z);
                assert!(
                    cabs(&v) <= p().tol_div(2) * s.clone(),
                    "n {n} z {:.6e} resid {:.6e}",
                    z.real().to_f64(),
                    (cabs(&v) / s).to_f64()
                );
            }
        }
    }

    #[test]
    fn root_sum_matches_trace() {
        // sum of roots = sum a_k - d_{n-1} for monic input
        let spec = MeasureSpec::new(lag0(), vec![p().one(), p().one()]).unwrap();
        let pn = crate::measures::pn_construct(&spec, 7).unwrap();
        let zc = roots(&pn).unwrap();
        let mut sum = p().zero();
        for z in &zc.zeros {
            sum += z.real();
        }
        let mut expect = -pn.coeffs[6].clone();
        for k in 0..7u64 {
            let (a, _) = lag0().recurrence(k, p());
            expect += a;
        }
        assert!((sum.clone() - &expect).abs() <= p().tol(20) * (expect.abs() + p().one()));
    }

    #[test]
    fn stats_examples() {
        let h6 = BasisPoly::classical(Case::Hermite, 6, p());
        let zc = roots(&h6).unwrap();
        let st = zero_stats(&zc, &Case::Hermite);
        assert_eq!(st.real_in_delta, 6);
        assert!(st.max_imag.is_zero());
        // degree-1 normalized cloud {0.5}
        let zc = ZeroCloud {
            zeros: vec![p().c(0.5, 0.0)],
            n: 1,
            c_n: p().one(),
            normalized: true,
        };
        let st = zero_stats(&zc, &lag0());
        assert_eq!(st.max_abs, 0.5f64);
        assert!(st.min_real_gap.is_infinite());
    }

    #[test]
    fn cdf_normalization_and_median() {
        for case in [lag0(), Case::Hermite] {
            let ld = LimitDensity::new(case);
            let (lo, hi) = ld.case.delta_c();
            assert!(ld.cdf(&p().f(lo), p()).is_zero());
            assert_eq!(ld.cdf(&p().f(hi), p()), 1u32);
            // CDF is monotone on a coarse grid
            let mut prev = p().zero();
            for i in 0..=20 {
                let t = p().f(lo + (hi - lo) * (i as f64) / 20.0);
                let c = ld.cdf(&t, p());
                assert!(c >= prev);
                prev = c;
            }
        }
        // Hermite median is 0
        let ld = LimitDensity::new(Case::Hermite);
        assert!((ld.cdf(&p().zero(), p()) - p().ratio(1, 2)).abs() <= p().tol(24));
    }

    #[test]
    fn single_point_ks() {
        // a lone sample at the median gives KS distance 1/2
        let ld = LimitDensity::new(Case::Hermite);
        let zc = ZeroCloud {
            zeros: vec![p().c(0.0, 0.0)],
            n: 1,
            c_n: p().one(),
            normalized: true,
        };
        let d = ks_distance(&zc, &ld).unwrap();
        assert!((d - p().ratio(1, 2)).abs() <= p().tol(24));
    }

    #[test]
    fn hermite_classical_ks_small() {
        let n = 60;
        let h = BasisPoly::classical(Case::Hermite, n, p());
        let zc = roots(&h).unwrap().normalize();
        let ld = LimitDensity::new(Case::Hermite);
        let d = ks_distance(&zc, &ld).unwrap();
        assert!(d < 0.1f64, "ks = {d}");
    }

    #[test]
    fn interlace_examples() {
        let c = [p().f(1.0), p().f(3.0)];
        let z = [p().f(0.0), p().f(2.0), p().f(4.0)];
        assert!(interlace_check(&c, &z).unwrap());
        // two critical points crowded into one gap
        let c = [p().f(1.0), p().f(1.1)];
        let z = [p().f(0.0), p().f(1.2), p().f(4.0)];
        assert!(!interlace_check(&c, &z).unwrap());
        assert!(matches!(
            interlace_check(&z, &z),
            Err(Error::Shape(_))
        ));
    }

    #[test]
    fn csv_shape() {
        let h2 = BasisPoly::classical(Case::Hermite, 2, p());
        let zc = roots(&h2).unwrap();
        let csv = zc.to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines.len(), 3);
        assert_eq!(lines[0], "n,index,re,im,normalized,c_n");
        assert!(lines[1].starts_with("2,0,"));
    }

    #[test]
    fn conjugate_pairs_on_complex_zeros() {
        // x^2 + 1/2 in the Hermite basis: H_2 + 1 has zeros +- i/sqrt 2
        let mut q = BasisPoly::classical(Case::Hermite, 2, p());
        q.coeffs[0] += 1u32;
        let zc = roots(&q).unwrap();
        let a = &zc.zeros[0];
        let b = &zc.zeros[1];
        assert!((a.real().clone() - b.real()).abs() <= p().tol(24));
        assert!((a.imag().clone() + b.imag()).abs() <= p().tol(24));
        let expect = p().ratio(1, 2).sqrt();
        assert!((b.imag().clone().abs() - expect).abs() <= p().tol(24));
    }
}

//! Measures `mu = w / rho` in the class `P_m(Delta)` and the monic
//! orthogonal polynomials `P_n` of `mu`.
//!
//! `P_n` is found from the m-dimensional linear system implied by the finite
//! expansion `P_n = sum_{k<=m} b_{n,n-k} L_{n-k}`; the Stieltjes procedure is
//! kept as an independent cross-oracle route.

use crate::error::{Error, Result};
use crate::polycore::{BasisPoly, Case};
use crate::scalar::{Prec, Scalar};
use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

/// Maximum node count for the node-doubling quadrature contract.
pub const MAX_QUAD_NODES: usize = 1 << 15;

/// A measure `mu = w / rho` with `rho` a polynomial positive on `Delta`,
/// stored by monomial coefficients `rho_0..rho_m` (low to high).
#[derive(Clone, Debug)]
pub struct MeasureSpec {
    pub case: Case,
    pub rho: Vec<Scalar>,
}

impl MeasureSpec {
    /// Build and validate: trims the leading zero tail, normalizes the sign
    /// so `rho_m > 0`, and verifies positivity of `rho` on `Delta`.
    pub fn new(case: Case, mut rho: Vec<Scalar>) -> Result<Self> {
        while rho.len() > 1 && rho.last().unwrap().is_zero() {
            rho.pop();
        }
        if rho.is_empty() || rho.last().unwrap().is_zero() {
            return Err(Error::Measure("rho must be a nonzero polynomial".into()));
        }
        if rho.last().unwrap().is_sign_negative() {
            for c in rho.iter_mut() {
                *c = -c.clone();
            }
        }
        let spec = MeasureSpec { case, rho };
        spec.validate()?;
        Ok(spec)
    }

    pub fn m(&self) -> usize {
        self.rho.len() - 1
    }

    pub fn prec(&self) -> Prec {
        Prec::new(self.rho[0].prec())
    }

    pub fn rho_eval(&self, x: &Scalar) -> Scalar {
        let p = self.prec();
        let mut v = p.zero();
        for c in self.rho.iter().rev() {
            v *= x;
            v += c;
        }
        v
    }

    fn rho_eval_f64(&self, x: f64) -> f64 {
        self.rho.iter().rev().fold(0.0, |v, c| v * x + c.to_f64())
    }

    /// Positivity of `rho` on `Delta`, by root isolation (companion matrix at
    /// double precision for the low-degree `rho`) plus sign sampling.
    fn validate(&self) -> Result<()> {
        let m = self.m();
        let lag = self.case.is_laguerre();
        // sample sign on Delta
        let samples: &[f64] = if lag {
            &[0.0, 0.5, 1.0, 3.0, 10.0, 100.0]
        } else {
            &[-100.0, -3.0, -0.5, 0.0, 0.5, 3.0, 100.0]
        };
        for &x in samples {
            if self.rho_eval_f64(x) <= 0.0 {
                return Err(Error::Measure(format!(
                    "rho is not positive on Delta (rho({x}) <= 0)"
                )));
            }
        }
        if m == 0 {
            return Ok(());
        }
        // real roots of rho must avoid Delta
        let lead = self.rho[m].to_f64();
        let mut comp = nalgebra::DMatrix::<f64>::zeros(m, m);
        for j in 0..m {
            comp[(j, m - 1)] = -self.rho[j].to_f64() / lead;
            if j + 1 < m {
                comp[(j + 1, j)] = 1.0;
            }
        }
        let eigs = comp.complex_eigenvalues();
        for e in eigs.iter() {
            let near_real = e.im.abs() <= 1e-8 * (1.0 + e.re.abs());
            if near_real {
                let on_delta = if lag { e.re >= -1e-9 } else { true };
                if on_delta {
                    // confirm at working precision with a local Newton step
                    let p = self.prec();
                    let v = self.rho_eval(&p.f(e.re)).abs();
                    if v <= p.f(1e-6) {
                        return Err(Error::Measure(format!(
                            "rho has a zero on Delta near x = {:.6}",
                            e.re
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// Stable cache key (case, alpha, rho digits, precision).
    pub fn key(&self) -> String {
        let mut k = String::new();
        match &self.case {
            Case::Laguerre { alpha } => {
                k.push_str("L:");
                k.push_str(&alpha.to_string_radix(16, None));
            }
            Case::Hermite => k.push_str("H:"),
        }
        for c in &self.rho {
            k.push(';');
            k.push_str(&c.to_string_radix(16, None));
        }
        k
    }

    pub fn to_json(&self) -> serde_json::Value {
        let alpha = match &self.case {
            Case::Laguerre { alpha } => crate::scalar::to_dec(alpha),
            Case::Hermite => "0".to_string(),
        };
        serde_json::json!({
            "case": if self.case.is_laguerre() { "laguerre" } else { "hermite" },
            "alpha": alpha,
            "rho": self.rho.iter().map(crate::scalar::to_dec).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(v: &serde_json::Value, p: Prec) -> Result<Self> {
        let case_s = v["case"]
            .as_str()
            .ok_or_else(|| Error::Parse("missing \"case\"".into()))?;
        let case = match case_s {
            "laguerre" => {
                let a = v["alpha"]
                    .as_str()
                    .ok_or_else(|| Error::Parse("missing \"alpha\"".into()))?;
                Case::laguerre(p.parse(a)?)?
            }
            "hermite" => Case::Hermite,
            other => return Err(Error::Parse(format!("unknown case {other:?}"))),
        };
        let rho_v = v["rho"]
            .as_array()
            .ok_or_else(|| Error::Parse("missing \"rho\"".into()))?;
        let rho = rho_v
            .iter()
            .map(|c| {
                c.as_str()
                    .ok_or_else(|| Error::Parse("rho entries must be strings".into()))
                    .and_then(|s| p.parse(s))
            })
            .collect::<Result<Vec<_>>>()?;
        MeasureSpec::new(case, rho)
    }
}

/// Spec-level operation: validation entry point.
pub fn validate_spec(spec: &MeasureSpec) -> Result<()> {
    spec.validate()
}

/// Gauss rule for the classical weight `w`, exact through degree `2N-1`.
#[derive(Clone, Debug)]
pub struct QuadRule {
    pub case: Case,
    pub nodes: Vec<Scalar>,
    pub weights: Vec<Scalar>,
}

impl QuadRule {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn integrate(&self, f: impl Fn(&Scalar) -> Scalar) -> Scalar {
        let p = Prec::new(self.nodes[0].prec());
        let mut s = p.zero();
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            s += f(x) * w;
        }
        s
    }
}

/// Eigenvalues of a symmetric tridiagonal matrix by Sturm-count bisection.
/// `off_sq[k]` is the squared off-diagonal entry between rows k and k+1.
fn tridiag_eigs_f64(diag: &[f64], off_sq: &[f64], lo_idx: usize) -> Vec<f64> {
    let n = diag.len();
    let count_below = |x: f64| -> usize {
        let mut c = 0usize;
        let mut q = diag[0] - x;
        if q < 0.0 {
            c += 1;
        }
        for k in 1..n {
            if q == 0.0 {
                q = 1e-300;
            }
            q = diag[k] - x - off_sq[k - 1] / q;
            if q < 0.0 {
                c += 1;
            }
        }
        c
    };
    // Gershgorin bounds
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for k in 0..n {
        let r = if k > 0 { off_sq[k - 1].sqrt() } else { 0.0 }
            + if k < n - 1 { off_sq[k].sqrt() } else { 0.0 };
        lo = lo.min(diag[k] - r);
        hi = hi.max(diag[k] + r);
    }
    let mut out = Vec::with_capacity(n - lo_idx);
    for i in lo_idx..n {
        let (mut a, mut b) = (lo, hi);
        for _ in 0..64 {
            let mid = 0.5 * (a + b);
            if count_below(mid) >= i + 1 {
                b = mid;
            } else {
                a = mid;
            }
        }
        out.push(0.5 * (a + b));
    }
    out
}

/// `(L_N(x), L_N'(x), L_{N-1}(x), scale)` by forward recurrence with a
/// precomputed coefficient table; `scale` is the largest intermediate
/// magnitude, the natural cancellation floor for residuals at `x`.
fn classical_eval_deriv(
    table: &[(Scalar, Scalar)],
    n: usize,
    x: &Scalar,
    p: Prec,
) -> (Scalar, Scalar, Scalar, Scalar) {
    let mut lkm1 = p.zero();
    let mut lk = p.one();
    let mut dkm1 = p.zero();
    let mut dk = p.zero();
    let mut scale = p.one();
    for k in 0..n {
        let (a, b) = &table[k];
        let xma = x.clone() - a;
        let lk1 = xma.clone() * &lk - lkm1.clone() * b;
        let dk1 = xma * &dk - dkm1.clone() * b + &lk;
        lkm1 = lk;
        lk = lk1;
        dkm1 = dk;
        dk = dk1;
        let a = lk.clone().abs();
        if a > scale {
            scale = a;
        }
    }
    (lk, dk, lkm1, scale)
}

pub(crate) fn recurrence_table(case: &Case, len: usize, p: Prec) -> Vec<(Scalar, Scalar)> {
    (0..len).map(|k| case.recurrence(k as u64, p)).collect()
}

type RuleKey = (String, u32, usize);

fn rule_cache() -> &'static Mutex<HashMap<RuleKey, Arc<QuadRule>>> {
    static CACHE: OnceLock<Mutex<HashMap<RuleKey, Arc<QuadRule>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

fn case_key(case: &Case) -> String {
    match case {
        Case::Laguerre { alpha } => format!("L:{}", alpha.to_string_radix(16, None)),
        Case::Hermite => "H".to_string(),
    }
}

/// Gauss rule for `w` from the symmetric Jacobi matrix: double-precision
/// Sturm bisection supplies eigenvalue seeds, full-precision Newton on the
/// recurrence polishes nodes, and weights come from
/// `tau_{N-1} / (L_{N-1}(x_i) L_N'(x_i))`.
pub fn gauss_rule(case: &Case, n_nodes: usize, p: Prec) -> Result<Arc<QuadRule>> {
    assert!(n_nodes >= 1);
    let key = (case_key(case), p.bits(), n_nodes);
    if let Some(r) = rule_cache().lock().unwrap().get(&key) {
        return Ok(r.clone());
    }
    let rule = Arc::new(build_rule(case, n_nodes, p)?);
    rule_cache().lock().unwrap().insert(key, rule.clone());
    Ok(rule)
}

fn build_rule(case: &Case, n_nodes: usize, p: Prec) -> Result<QuadRule> {
    let n = n_nodes;
    let table = recurrence_table(case, n + 1, p);
    let diag: Vec<f64> = (0..n).map(|k| table[k].0.to_f64()).collect();
    let off_sq: Vec<f64> = (1..n).map(|k| table[k].1.to_f64()).collect();
    // Hermite nodes are symmetric; only solve the upper half.
    let hermite = !case.is_laguerre();
    let lo_idx = if hermite { n / 2 } else { 0 };
    let seeds = tridiag_eigs_f64(&diag, &off_sq, lo_idx);

    let tau_nm1 = case.tau(n as u64 - 1, p);
    let newton_tol = p.tol(4);
    let mut nodes = Vec::with_capacity(n);
    let mut weights = Vec::with_capacity(n);
    for (idx, &seed) in seeds.iter().enumerate() {
        let exact_center = hermite && n % 2 == 1 && lo_idx + idx == n / 2;
        let mut x = if exact_center { p.zero() } else { p.f(seed) };
        let mut converged = exact_center;
        let mut best_dx: Option<Scalar> = None;
        for _ in 0..16 {
            if converged {
                break;
            }
            let (v, dv, _, _) = classical_eval_deriv(&table, n, &x, p);
            let step = v / &dv;
            x -= &step;
            let dx = step.abs();
            let xa = x.clone().abs();
            if dx <= newton_tol.clone() * &xa {
                converged = true;
            } else if let Some(b) = &best_dx {
                // quadratic progress has stalled at the cancellation floor;
                // accept if the step is already far below sqrt(eps)*|x|
                if dx >= *b && dx <= p.tol_div(2).clone() * p.tol_div(4) * &xa {
                    converged = true;
                }
            }
            if best_dx.as_ref().map_or(true, |b| dx < *b) {
                best_dx = Some(dx);
            }
        }
        if !converged {
            return Err(Error::Eig(format!(
                "node refinement failed to converge (N = {n}, seed = {seed})"
            )));
        }
        // recompute at the converged node for the weight
        let (_, dv, vm1, _) = classical_eval_deriv(&table, n, &x, p);
        let w = tau_nm1.clone() / (vm1 * &dv);
        if !w.is_finite() || w.is_sign_negative() {
            return Err(Error::Eig(format!("nonpositive Gauss weight at N = {n}")));
        }
        nodes.push(x);
        weights.push(w);
    }
    if hermite {
        // mirror the strictly positive half (and keep the center node once)
        let skip = if n % 2 == 1 { 1 } else { 0 };
        let mirrored: Vec<(Scalar, Scalar)> = nodes
            .iter()
            .zip(&weights)
            .skip(skip)
            .map(|(x, w)| (-x.clone(), w.clone()))
            .collect();
        for (x, w) in mirrored.into_iter().rev() {
            nodes.insert(0, x);
            weights.insert(0, w);
        }
    }
    // sanity: total mass
    let mass = case.weight_mass(p);
    let mut s = p.zero();
    for w in &weights {
        s += w;
    }
    if (s.clone() - &mass).abs() > p.tol(24) * mass.clone() {
        return Err(Error::Eig(format!(
            "Gauss rule mass check failed at N = {n}: sum = {s}, expected {mass}"
        )));
    }
    Ok(QuadRule {
        case: case.clone(),
        nodes,
        weights,
    })
}

/// Exact inner product under the classical weight `w`, using basis
/// orthogonality: `<p, q>_w = sum_j d_j e_j tau_j`.
pub fn inner_w(p: &BasisPoly, q: &BasisPoly) -> Result<Scalar> {
    if !p.case.same_basis(&q.case) {
        return Err(Error::Basis("inner_w requires matching case and alpha".into()));
    }
    let pr = p.prec();
    let mut s = pr.zero();
    for j in 0..=p.degree().min(q.degree()) {
        if p.coeffs[j].is_zero() || q.coeffs[j].is_zero() {
            continue;
        }
        s += p.coeffs[j].clone() * &q.coeffs[j] * p.case.tau(j as u64, pr);
    }
    Ok(s)
}

fn next_pow2(x: usize) -> usize {
    x.next_power_of_two()
}

/// `int p q / rho dw` by Gauss-`w` quadrature with node doubling until two
/// successive levels agree to relative `2^-(B-30)` (scaled by the absolute
/// mass of the integrand, so orthogonal pairs converge to a clean zero).
pub fn inner_mu(p: &BasisPoly, q: &BasisPoly, spec: &MeasureSpec) -> Result<Scalar> {
    if !p.case.same_basis(&spec.case) || !q.case.same_basis(&spec.case) {
        return Err(Error::Basis("inner_mu requires matching case and alpha".into()));
    }
    let pr = p.prec();
    let tol = pr.tol(30);
    let mut n = next_pow2(((p.degree() + q.degree()) / 2 + 2).max(16));
    let mut prev: Option<(Scalar, Scalar)> = None;
    loop {
        let rule = gauss_rule(&spec.case, n, pr)?;
        let mut v = pr.zero();
        let mut s = pr.zero();
        for (x, w) in rule.nodes.iter().zip(&rule.weights) {
            let t = p.eval_real(x) * q.eval_real(x) / spec.rho_eval(x) * w;
            s += t.clone().abs();
            v += t;
        }
        if let Some((pv, _)) = &prev {
            if (v.clone() - pv).abs() <= tol.clone() * &s {
                return Ok(v);
            }
        }
        prev = Some((v, s));
        n *= 2;
        if n > MAX_QUAD_NODES {
            return Err(Error::NoConv(format!(
                "inner_mu did not stabilize by N = {MAX_QUAD_NODES}"
            )));
        }
    }
}

/// Batched Gram matrix `G[j][k] = <L_{n-k}, L_{n-j}>_mu` for `j,k = 0..m`,
/// with the same node-doubling contract as `inner_mu` but a single
/// recurrence pass per node.
pub fn mu_gram(spec: &MeasureSpec, n: usize, p: Prec) -> Result<Vec<Vec<Scalar>>> {
    let m = spec.m();
    if n < m {
        return Err(Error::Shape(format!("mu_gram requires n >= m (n = {n}, m = {m})")));
    }
    let tol = p.tol(30);
    let dim = m + 1;
    let mut nn = next_pow2((n + 2).max(16));
    let mut prev: Option<(Vec<Vec<Scalar>>, Vec<Vec<Scalar>>)> = None;
    loop {
        let rule = gauss_rule(&spec.case, nn, p)?;
        let table = recurrence_table(&spec.case, n + 1, p);
        let mut g = vec![vec![p.zero(); dim]; dim];
        let mut gabs = vec![vec![p.zero(); dim]; dim];
        let mut window = vec![p.zero(); dim];
        for (x, w) in rule.nodes.iter().zip(&rule.weights) {
            // forward recurrence up to degree n, keeping L_{n-m}..L_n
            let mut lkm1 = p.zero();
            let mut lk = p.one();
            if n >= m {
                if n == m {
                    window[m] = lk.clone();
                }
                for k in 0..n {
                    let (a, b) = &table[k];
                    let lk1 = (x.clone() - a) * &lk - lkm1.clone() * b;
                    lkm1 = lk;
                    lk = lk1;
                    let deg = k + 1;
                    if deg + m >= n {
                        window[m - (n - deg)] = lk.clone();
                    }
                }
            }
            let wr = w.clone() / spec.rho_eval(x);
            for j in 0..dim {
                for k in j..dim {
                    let t = window[m - j].clone() * &window[m - k] * &wr;
                    gabs[j][k] += t.clone().abs();
                    g[j][k] += t;
                }
            }
        }
        for j in 0..dim {
            for k in 0..j {
                g[j][k] = g[k][j].clone();
                gabs[j][k] = gabs[k][j].clone();
            }
        }
        if let Some((pg, _)) = &prev {
            let mut ok = true;
            for j in 0..dim {
                for k in 0..dim {
                    if (g[j][k].clone() - &pg[j][k]).abs() > tol.clone() * &gabs[j][k] {
                        ok = false;
                    }
                }
            }
            if ok {
                return Ok(g);
            }
        }
        prev = Some((g, gabs));
        nn *= 2;
        if nn > MAX_QUAD_NODES {
            return Err(Error::NoConv(format!(
                "mu Gram matrix did not stabilize by N = {MAX_QUAD_NODES}"
            )));
        }
    }
}

/// Batched moments `<p, x^k>_mu` for `k = 0..=kmax`, node-doubled like
/// `inner_mu`.
pub fn mu_moments(p: &BasisPoly, spec: &MeasureSpec, kmax: usize) -> Result<Vec<Scalar>> {
    if !p.case.same_basis(&spec.case) {
        return Err(Error::Basis("mu_moments requires matching case and alpha".into()));
    }
    let pr = p.prec();
    let tol = pr.tol(30);
    let mut n = next_pow2(((p.degree() + kmax) / 2 + 2).max(16));
    let mut prev: Option<(Vec<Scalar>, Vec<Scalar>)> = None;
    loop {
        let rule = gauss_rule(&spec.case, n, pr)?;
        let mut v = vec![pr.zero(); kmax + 1];
        let mut s = vec![pr.zero(); kmax + 1];
        for (x, w) in rule.nodes.iter().zip(&rule.weights) {
            let base = p.eval_real(x) * w / spec.rho_eval(x);
            let mut xk = pr.one();
            for k in 0..=kmax {
                let t = base.clone() * &xk;
                s[k] += t.clone().abs();
                v[k] += t;
                xk *= x;
            }
        }
        if let Some((pv, _)) = &prev {
            let ok = (0..=kmax).all(|k| (v[k].clone() - &pv[k]).abs() <= tol.clone() * &s[k]);
            if ok {
                return Ok(v);
            }
        }
        prev = Some((v, s));
        n *= 2;
        if n > MAX_QUAD_NODES {
            return Err(Error::NoConv(format!(
                "mu moments did not stabilize by N = {MAX_QUAD_NODES}"
            )));
        }
    }
}

fn pn_cache() -> &'static Mutex<HashMap<(String, u32, usize), BasisPoly>> {
    static CACHE: OnceLock<Mutex<HashMap<(String, u32, usize), BasisPoly>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Monic `P_n` of `mu` from the finite expansion: solve the `m x m` Gram
/// system for `b_{n,n-1}..b_{n,n-m}` with `b_{n,n} = 1`.
pub fn pn_construct(spec: &MeasureSpec, n: usize) -> Result<BasisPoly> {
    let p = spec.prec();
    let m = spec.m();
    if m == 0 {
        return Ok(BasisPoly::classical(spec.case.clone(), n, p));
    }
    if n <= m {
        return Err(Error::Shape(format!(
            "pn_construct requires n > m (n = {n}, m = {m})"
        )));
    }
    let key = (spec.key(), p.bits(), n);
    if let Some(q) = pn_cache().lock().unwrap().get(&key) {
        return Ok(q.clone());
    }
    let g = mu_gram(spec, n, p)?;
    // unknowns b_k (k = 1..m): sum_k G[j][k] b_k = -G[j][0], j = 1..m
    let mut a = vec![vec![p.zero(); m + 1]; m];
    for j in 1..=m {
        for k in 1..=m {
            a[j - 1][k - 1] = g[j][k].clone();
        }
        a[j - 1][m] = -g[j][0].clone();
    }
    let b = solve_dense(&mut a, p)?;
    let mut coeffs = vec![p.zero(); n + 1];
    coeffs[n] = p.one();
    for k in 1..=m {
        coeffs[n - k] = b[k - 1].clone();
    }
    let poly = BasisPoly::new(spec.case.clone(), coeffs);
    pn_cache().lock().unwrap().insert(key, poly.clone());
    Ok(poly)
}

/// Gaussian elimination with partial pivoting on an augmented `r x (r+1)`
/// system; small `r` only.
fn solve_dense(a: &mut [Vec<Scalar>], p: Prec) -> Result<Vec<Scalar>> {
    let r = a.len();
    let mut scale = p.zero();
    for row in a.iter() {
        for v in row.iter().take(r) {
            let av = v.clone().abs();
            if av > scale {
                scale = av;
            }
        }
    }
    for col in 0..r {
        let mut piv = col;
        for row in col + 1..r {
            if a[row][col].clone().abs() > a[piv][col].clone().abs() {
                piv = row;
            }
        }
        a.swap(col, piv);
        if a[col][col].clone().abs() <= p.tol_div(2).clone() * &scale {
            return Err(Error::Singular(
                "Gram system is numerically singular (precision exhausted)".into(),
            ));
        }
        for row in col + 1..r {
            let f = a[row][col].clone() / &a[col][col];
            for k in col..=r {
                let t = f.clone() * &a[col][k];
                a[row][k] -= t;
            }
        }
    }
    let mut x = vec![p.zero(); r];
    for col in (0..r).rev() {
        let mut s = a[col][r].clone();
        for k in col + 1..r {
            s -= a[col][k].clone() * &x[k];
        }
        x[col] = s / &a[col][col];
    }
    Ok(x)
}

/// Cross-oracle route: recurrence coefficients of `mu` by the discretized
/// Stieltjes procedure on the node-doubled Gauss-`w` rule (with `1/rho`
/// folded into the weights), then the three-term recurrence is unrolled in
/// the classical basis.
pub fn pn_stieltjes(spec: &MeasureSpec, n: usize) -> Result<BasisPoly> {
    let p = spec.prec();
    if n == 0 {
        return Ok(BasisPoly::constant(spec.case.clone(), p.one()));
    }
    let tol = p.tol(30);
    let mut nn = next_pow2((2 * n + 2).max(32));
    let mut prev: Option<(Vec<Scalar>, Vec<Scalar>)> = None;
    loop {
        let rule = gauss_rule(&spec.case, nn, p)?;
        let wmod: Vec<Scalar> = rule
            .nodes
            .iter()
            .zip(&rule.weights)
            .map(|(x, w)| w.clone() / spec.rho_eval(x))
            .collect();
        let (beta, alpha_sq) = discrete_stieltjes(&rule.nodes, &wmod, n, p);
        if let Some((pb, pa)) = &prev {
            let mut ok = true;
            for k in 0..n {
                let scale = beta[k].clone().abs()
                    + alpha_sq[k.max(1)].clone().abs().sqrt()
                    + p.tol(0);
                if (beta[k].clone() - &pb[k]).abs() > tol.clone() * &scale {
                    ok = false;
                }
                if k >= 1 {
                    let ascale = alpha_sq[k].clone().abs() + p.tol(0);
                    if (alpha_sq[k].clone() - &pa[k]).abs() > tol.clone() * ascale {
                        ok = false;
                    }
                }
            }
            if ok {
                // unroll the recurrence in the classical basis
                let mut pkm1 = BasisPoly::constant(spec.case.clone(), p.one());
                let mut pk = pkm1.mul_x().sub(&pkm1.scale(&beta[0]))?;
                for k in 1..n {
                    let next = pk
                        .mul_x()
                        .sub(&pk.scale(&beta[k]))?
                        .sub(&pkm1.scale(&alpha_sq[k]))?;
                    pkm1 = pk;
                    pk = next;
                }
                return Ok(pk);
            }
        }
        prev = Some((beta, alpha_sq));
        nn *= 2;
        if nn > MAX_QUAD_NODES {
            return Err(Error::NoConv(format!(
                "Stieltjes procedure did not stabilize by N = {MAX_QUAD_NODES}"
            )));
        }
    }
}

/// One pass of the Stieltjes procedure on a discrete measure
/// `sum_i w_i delta_{x_i}`: returns `beta_0..beta_{n-1}` and
/// `alpha_1^2..alpha_{n-1}^2` (index 0 unused).
fn discrete_stieltjes(
    nodes: &[Scalar],
    weights: &[Scalar],
    n: usize,
    p: Prec,
) -> (Vec<Scalar>, Vec<Scalar>) {
    let nn = nodes.len();
    let mut pkm1 = vec![p.zero(); nn];
    let mut pk = vec![p.one(); nn];
    let mut beta = Vec::with_capacity(n);
    let mut alpha_sq = vec![p.zero(); n.max(1)];
    let mut norm_prev = p.zero();
    for k in 0..n {
        let mut norm = p.zero();
        let mut xnorm = p.zero();
        for i in 0..nn {
            let t = pk[i].clone() * &pk[i] * &weights[i];
            xnorm += t.clone() * &nodes[i];
            norm += t;
        }
        let b = xnorm / &norm;
        if k >= 1 {
            alpha_sq[k] = norm.clone() / &norm_prev;
        }
        // p_{k+1} = (x - beta_k) p_k - alpha_k^2 p_{k-1}
        for i in 0..nn {
            let mut t = (nodes[i].clone() - &b) * &pk[i];
            if k >= 1 {
                t -= alpha_sq[k].clone() * &pkm1[i];
            }
            pkm1[i] = pk[i].clone();
            pk[i] = t;
        }
        norm_prev = norm;
        beta.push(b);
    }
    (beta, alpha_sq)
}

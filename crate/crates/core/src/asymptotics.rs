//! Conformal maps off the contracted support, nth-root and ratio
//! asymptotics of the normalized families, the level curve
//! `E(zeta) = {Psi(z) = Psi(zeta)}`, and zero-localization distances.
//!
//! All large-degree magnitudes are handled through logarithms of
//! arbitrary-precision values; only the grid work for curve tracing runs in
//! double precision.

use crate::construct::{q_with_root, qhat};
use crate::error::{Error, Result};
use crate::measures::MeasureSpec;
use crate::polycore::Case;
use crate::scalar::{cabs, CScalar, Prec, Scalar};
use crate::spectra::{roots_with_seeds, ZeroCloud};
use num_complex::Complex64;

/// `phi`, `psi`, the comparison function `Psi`, and the nth-root limit at
/// one point off `Delta_c`.
#[derive(Clone, Debug)]
pub struct MapValues {
    pub phi: CScalar,
    pub psi: CScalar,
    pub capital_psi: Scalar,
    pub nth_root_limit: Scalar,
}

fn on_delta_c(case: &Case, z: &CScalar, pr: Prec) -> bool {
    let (lo, hi) = case.delta_c();
    let pad = pr.tol_div(4);
    z.imag().clone().abs() <= pad
        && *z.real() >= pr.f(lo) - &pad
        && *z.real() <= pr.f(hi) + &pad
}

/// `phi(z) = z + sqrt(z-1) sqrt(z+1)` and
/// `psi(z) = 2z - 1 + 2 sqrt(z) sqrt(z-1)`, principal square roots (this
/// factorization realizes the branch with `phi(inf) = inf`, `psi(inf) = inf`);
/// `Psi` and the nth-root limit per case.
pub fn conformal_maps(case: &Case, z: &CScalar) -> Result<MapValues> {
    let pr = Prec::new(z.prec().0);
    if on_delta_c(case, z, pr) {
        return Err(Error::Branch(format!(
            "maps are undefined on the contracted support (z = {z})"
        )));
    }
    let phi = z.clone() + (z.clone() - 1u32).sqrt() * (z.clone() + 1u32).sqrt();
    let psi = z.clone() * 2u32 - 1u32 + z.clone().sqrt() * (z.clone() - 1u32).sqrt() * 2u32;
    let (capital_psi, nth_root_limit) = match case {
        Case::Hermite => {
            // Psi_H = |phi| e^{Re(z/phi)}; limit = Psi_H / (2 sqrt e)
            let cp = cabs(&phi) * (z.clone() / &phi).real().clone().exp();
            let lim = cp.clone() / (pr.f(1.0).exp().sqrt() * 2u32);
            (cp, lim)
        }
        Case::Laguerre { .. } => {
            // Psi_L = |psi| e^{Re(1/psi)}; limit = Psi_L / 4
            let cp = cabs(&psi) * psi.clone().recip().real().clone().exp();
            let lim = cp.clone() / 4u32;
            (cp, lim)
        }
    };
    Ok(MapValues {
        phi,
        psi,
        capital_psi,
        nth_root_limit,
    })
}

/// `log Psi` in double precision, for grid work.
pub fn log_capital_psi_f64(case: &Case, x: f64, y: f64) -> f64 {
    let z = Complex64::new(x, y);
    if case.is_laguerre() {
        let psi = 2.0 * z - 1.0 + 2.0 * z.sqrt() * (z - 1.0).sqrt();
        psi.norm().ln() + (1.0 / psi).re
    } else {
        let phi = z + (z - 1.0).sqrt() * (z + 1.0).sqrt();
        phi.norm().ln() + (z / phi).re
    }
}

/// Distance from a point to the segment `Delta_c`.
pub fn dist_to_delta_c(case: &Case, x: f64, y: f64) -> f64 {
    let (lo, hi) = case.delta_c();
    let cx = x.clamp(lo, hi);
    ((x - cx).powi(2) + y * y).sqrt()
}

/// `frak d(zeta) = inf_{x in Delta_c} |zeta - x|`.
pub fn frak_d(case: &Case, zeta: &CScalar) -> f64 {
    dist_to_delta_c(case, zeta.real().to_f64(), zeta.imag().to_f64())
}

/// `frak D(zeta) = sup_{x in Delta_c} |zeta - x|`, attained at an endpoint.
pub fn frak_dd(case: &Case, zeta: &CScalar) -> f64 {
    let (lo, hi) = case.delta_c();
    let x = zeta.real().to_f64();
    let y = zeta.imag().to_f64();
    let a = ((x - lo).powi(2) + y * y).sqrt();
    let b = ((x - hi).powi(2) + y * y).sqrt();
    a.max(b)
}

#[derive(Clone, Debug)]
pub struct NthRootRow {
    pub z: CScalar,
    pub n: usize,
    pub measured: Scalar,
    pub limit: Scalar,
    pub rel_err: Scalar,
}

/// `|Qhat_frak_n(z)|^{1/n}` against the closed-form limit, where
/// `Qhat_frak_n(z) = c_n^{-n} Qhat_n(c_n z)`. Magnitudes are reduced in log
/// space before exponentiation.
pub fn nth_root_report(
    spec: &MeasureSpec,
    z_set: &[CScalar],
    n_set: &[usize],
) -> Result<Vec<NthRootRow>> {
    let pr = spec.prec();
    let mut rows = Vec::new();
    for z in z_set {
        let maps = conformal_maps(&spec.case, z)?;
        for &n in n_set {
            let d = qhat(spec, n)?;
            let cn = spec.case.mrs_constant(n as u64, pr);
            let arg = pr.c_real(&cn) * z;
            let v = d.qhat.eval_clenshaw(&arg)?;
            let lv = cabs(&v).ln();
            if !lv.is_finite() {
                return Err(Error::Range(
                    "log-magnitude accumulation left the representable range".into(),
                ));
            }
            let measured = (lv / pr.int(n as i64) - cn.clone().ln()).exp();
            let rel_err = (measured.clone() - &maps.nth_root_limit).abs() / &maps.nth_root_limit;
            rows.push(NthRootRow {
                z: z.clone(),
                n,
                measured,
                limit: maps.nth_root_limit.clone(),
                rel_err,
            });
        }
    }
    Ok(rows)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Region {
    Outer,
    Inner,
}

#[derive(Clone, Debug)]
pub struct RatioRow {
    pub z: CScalar,
    pub n: usize,
    pub region: Region,
    pub ratio: CScalar,
    pub err: Scalar,
}

/// Ratio asymptotics. Without `zeta`: `P_frak_n / Qhat_frak_n -> 1`
/// everywhere off `Delta_c`. With `zeta`: `Q_frak_n / P_frak_n -> 1` on the
/// outer region `Psi(z) > Psi(zeta)` and
/// `Q_frak_n(z) / P_frak_n(zeta_n) -> -1` on the inner region.
pub fn ratio_report(
    spec: &MeasureSpec,
    z_set: &[CScalar],
    n_set: &[usize],
    zeta: Option<&CScalar>,
) -> Result<Vec<RatioRow>> {
    let pr = spec.prec();
    let mut rows = Vec::new();
    let zeta_log_psi = match zeta {
        Some(zt) => Some(conformal_maps(&spec.case, zt)?.capital_psi.ln()),
        None => None,
    };
    for z in z_set {
        let maps = conformal_maps(&spec.case, z)?;
        let region = match &zeta_log_psi {
            None => Region::Outer,
            Some(lz) => {
                let g = maps.capital_psi.clone().ln() - lz;
                let curve_tol = lz.clone().abs() / 1000u32;
                if g.clone().abs() <= curve_tol {
                    return Err(Error::Region(format!(
                        "z = {z} lies within curve tolerance of E(zeta)"
                    )));
                }
                if g.is_sign_positive() {
                    Region::Outer
                } else {
                    Region::Inner
                }
            }
        };
        for &n in n_set {
            let cn = spec.case.mrs_constant(n as u64, pr);
            let arg = pr.c_real(&cn) * z;
            let pn = crate::measures::pn_construct(spec, n)?;
            let (ratio, target): (CScalar, CScalar) = match zeta {
                None => {
                    let d = qhat(spec, n)?;
                    let r = pn.eval_clenshaw(&arg)? / d.qhat.eval_clenshaw(&arg)?;
                    (r, pr.c(1.0, 0.0))
                }
                Some(zt) => {
                    let zeta_n = pr.c_real(&cn) * zt;
                    let d = q_with_root(spec, n, &zeta_n)?;
                    let qv = d.eval_q(&arg)?;
                    match region {
                        Region::Outer => (qv / pn.eval_clenshaw(&arg)?, pr.c(1.0, 0.0)),
                        Region::Inner => (qv / pn.eval_clenshaw(&zeta_n)?, pr.c(-1.0, 0.0)),
                    }
                }
            };
            let err = cabs(&(ratio.clone() - &target));
            rows.push(RatioRow {
                z: z.clone(),
                n,
                region,
                ratio,
                err,
            });
        }
    }
    Ok(rows)
}

/// Traced approximation of `E(zeta)`, in double precision.
#[derive(Clone, Debug)]
pub struct LevelCurve {
    pub polylines: Vec<Vec<(f64, f64)>>,
    pub zeta: CScalar,
    pub case: Case,
    pub resolution: f64,
}

impl LevelCurve {
    pub fn vertices(&self) -> impl Iterator<Item = &(f64, f64)> {
        self.polylines.iter().flatten()
    }

    pub fn dist_to(&self, x: f64, y: f64) -> f64 {
        let mut best = f64::INFINITY;
        for &(vx, vy) in self.vertices() {
            let d = ((x - vx).powi(2) + (y - vy).powi(2)).sqrt();
            if d < best {
                best = d;
            }
        }
        best
    }

    /// CSV with columns `polyline_id,vertex_index,re,im`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("polyline_id,vertex_index,re,im\n");
        for (pid, line) in self.polylines.iter().enumerate() {
            for (vi, (x, y)) in line.iter().enumerate() {
                out.push_str(&format!("{pid},{vi},{x:.17e},{y:.17e}\n"));
            }
        }
        out
    }
}

// edge identifier in the marching-squares grid: (i, j, horizontal?)
type EdgeKey = (usize, usize, bool);

/// Marching squares on `G(z) = log Psi(z) - log Psi(zeta)`: cell-edge
/// crossings refined by bisection to `|G| <= 1e-3 |log Psi(zeta)|`, saddle
/// cells split by the sign of `G` at the center, segments chained into
/// polylines.
pub fn trace_level_curve(
    case: &Case,
    zeta: &CScalar,
    window: (f64, f64, f64, f64),
    step: f64,
) -> Result<LevelCurve> {
    let (x0, x1, y0, y1) = window;
    if !(x1 > x0 && y1 > y0 && step > 0.0) {
        return Err(Error::Shape("empty window or nonpositive step".into()));
    }
    let g_zeta = log_capital_psi_f64(case, zeta.real().to_f64(), zeta.imag().to_f64());
    if !g_zeta.is_finite() {
        return Err(Error::Branch("log Psi(zeta) is not finite".into()));
    }
    let tol = 1e-3 * g_zeta.abs();
    let nx = ((x1 - x0) / step).ceil() as usize + 1;
    let ny = ((y1 - y0) / step).ceil() as usize + 1;
    let gx = |i: usize| x0 + step * i as f64;
    let gy = |j: usize| y0 + step * j as f64;
    // grid of G values; points inside the Delta_c tube are masked with NaN
    let mut g = vec![f64::NAN; nx * ny];
    for j in 0..ny {
        for i in 0..nx {
            let (x, y) = (gx(i), gy(j));
            if dist_to_delta_c(case, x, y) > step {
                g[j * nx + i] = log_capital_psi_f64(case, x, y) - g_zeta;
            }
        }
    }
    let gval = |i: usize, j: usize| g[j * nx + i];

    let refine = |xa: f64, ya: f64, ga: f64, xb: f64, yb: f64, gb: f64| -> (f64, f64) {
        let (mut xa, mut ya, mut ga) = (xa, ya, ga);
        let (mut xb, mut yb) = (xb, yb);
        let mut gb = gb;
        for _ in 0..60 {
            let xm = 0.5 * (xa + xb);
            let ym = 0.5 * (ya + yb);
            let gm = log_capital_psi_f64(case, xm, ym) - g_zeta;
            if gm.abs() <= tol {
                return (xm, ym);
            }
            if (gm > 0.0) == (ga > 0.0) {
                xa = xm;
                ya = ym;
                ga = gm;
            } else {
                xb = xm;
                yb = ym;
                gb = gm;
            }
        }
        let _ = (ga, gb);
        (0.5 * (xa + xb), 0.5 * (ya + yb))
    };

    use std::collections::HashMap;
    let mut points: HashMap<EdgeKey, (f64, f64)> = HashMap::new();
    let mut links: HashMap<EdgeKey, Vec<EdgeKey>> = HashMap::new();
    let crossing = |i: usize, j: usize, horizontal: bool, points: &mut HashMap<EdgeKey, (f64, f64)>| -> Option<EdgeKey> {
        let (ia, ja) = (i, j);
        let (ib, jb) = if horizontal { (i + 1, j) } else { (i, j + 1) };
        let (ga, gb) = (gval(ia, ja), gval(ib, jb));
        if !ga.is_finite() || !gb.is_finite() || (ga > 0.0) == (gb > 0.0) {
            return None;
        }
        let key = (i, j, horizontal);
        if !points.contains_key(&key) {
            let p = refine(gx(ia), gy(ja), ga, gx(ib), gy(jb), gb);
            points.insert(key, p);
        }
        Some(key)
    };

    for j in 0..ny - 1 {
        for i in 0..nx - 1 {
            let corners = [
                gval(i, j),
                gval(i + 1, j),
                gval(i + 1, j + 1),
                gval(i, j + 1),
            ];
            if corners.iter().any(|c| !c.is_finite()) {
                continue;
            }
            let bottom = crossing(i, j, true, &mut points);
            let right = crossing(i + 1, j, false, &mut points);
            let top = crossing(i, j + 1, true, &mut points);
            let left = crossing(i, j, false, &mut points);
            let hits: Vec<EdgeKey> = [bottom, right, top, left].into_iter().flatten().collect();
            let mut connect = |a: EdgeKey, b: EdgeKey| {
                links.entry(a).or_default().push(b);
                links.entry(b).or_default().push(a);
            };
            match hits.len() {
                2 => connect(hits[0], hits[1]),
                4 => {
                    // saddle: decide the pairing by the center sign
                    let cx = gx(i) + 0.5 * step;
                    let cy = gy(j) + 0.5 * step;
                    let gc = log_capital_psi_f64(case, cx, cy) - g_zeta;
                    // corners alternate in sign; pair each positive-to-negative
                    // edge crossing with the neighbor sharing the center's side
                    let (b, r, t, l) = (
                        bottom.unwrap(),
                        right.unwrap(),
                        top.unwrap(),
                        left.unwrap(),
                    );
                    if (gc > 0.0) == (corners[0] > 0.0) {
                        connect(b, r);
                        connect(t, l);
                    } else {
                        connect(b, l);
                        connect(t, r);
                    }
                }
                _ => {}
            }
        }
    }
    if points.is_empty() {
        return Err(Error::Empty("no level-curve crossing in the window".into()));
    }

    // chain the segments into polylines
    let mut visited: std::collections::HashSet<EdgeKey> = std::collections::HashSet::new();
    let mut polylines = Vec::new();
    let mut keys: Vec<EdgeKey> = points.keys().cloned().collect();
    keys.sort();
    for start in keys {
        if visited.contains(&start) {
            continue;
        }
        // walk to one end of the chain (or once around a loop)
        let mut head = start;
        let mut prev: Option<EdgeKey> = None;
        loop {
            let nexts = links.get(&head).cloned().unwrap_or_default();
            let step_to = nexts.iter().find(|k| Some(**k) != prev && **k != start);
            match step_to {
                Some(&k) => {
                    prev = Some(head);
                    head = k;
                }
                None => break,
            }
            if head == start {
                break;
            }
        }
        // walk forward from the end collecting vertices
        let mut line = Vec::new();
        let mut cur = head;
        let mut prev: Option<EdgeKey> = None;
        loop {
            visited.insert(cur);
            line.push(points[&cur]);
            let nexts = links.get(&cur).cloned().unwrap_or_default();
            let nxt = nexts
                .iter()
                .find(|k| Some(**k) != prev && !visited.contains(*k));
            match nxt {
                Some(&k) => {
                    prev = Some(cur);
                    cur = k;
                }
                None => break,
            }
        }
        if line.len() >= 2 {
            polylines.push(line);
        }
    }
    if polylines.is_empty() {
        return Err(Error::Empty("level-curve crossings did not chain".into()));
    }
    Ok(LevelCurve {
        polylines,
        zeta: zeta.clone(),
        case: case.clone(),
        resolution: step,
    })
}

/// Window that comfortably contains `E(zeta)` and `Delta_c`, from the
/// bound `|z| <= frak D(zeta) + 2` on the zeros.
pub fn default_window(case: &Case, zeta: &CScalar) -> (f64, f64, f64, f64) {
    let (lo, hi) = case.delta_c();
    let r = frak_dd(case, zeta) + 1.5;
    let cx = 0.5 * (lo + hi);
    (cx - r, cx + r, -r, r)
}

/// Per-zero localization distances against the level curve and the
/// contracted support.
#[derive(Clone, Debug)]
pub struct ZeroLocusReport {
    /// Contracted zeros of `Q_frak_n`.
    pub zeros: Vec<CScalar>,
    pub dist_curve: Vec<f64>,
    pub dist_delta: Vec<f64>,
    /// `max_k min(dist_curve[k], dist_delta[k])`.
    pub summary: f64,
    pub frak_d: f64,
    pub frak_dd: f64,
    /// All zeros satisfy `|z| <= frak D(zeta) + 2`.
    pub all_bounded: bool,
    /// When `frak d(zeta) > 2`: the `Delta_c` tube of radius
    /// `(frak d - 2)/2` contains no zero.
    pub tube_zero_free: Option<bool>,
    /// When `frak d(zeta) > 2`: all zeros simple (pairwise separated).
    pub all_simple: Option<bool>,
}

/// Zeros of `Q_frak_n` with the prescribed contracted root `zeta`, against
/// the traced curve `E(zeta)` and `Delta_c`. The comrade route is unusable
/// here (the constant term of `Q_n` dwarfs double-precision range), so the
/// zeros come from Aberth iteration seeded on an enclosing circle.
pub fn zero_locus_distances(
    spec: &MeasureSpec,
    zeta: &CScalar,
    n: usize,
) -> Result<ZeroLocusReport> {
    let pr = spec.prec();
    let case = &spec.case;
    let fd = frak_d(case, zeta);
    let fdd = frak_dd(case, zeta);
    let window = default_window(case, zeta);
    let step = (window.1 - window.0) / 240.0;
    let curve = trace_level_curve(case, zeta, window, step)?;

    let cn = case.mrs_constant(n as u64, pr);
    let zeta_n = pr.c_real(&cn) * zeta;
    let d = q_with_root(spec, n, &zeta_n)?;
    let q = d.q_real().or_else(|_| -> Result<_> {
        // complex zeta: fall back to treating Q via its real/imag split is
        // not needed; Aberth works directly on qhat shifted at evaluation
        Err(Error::Shape("zero_locus_distances expects real zeta".into()))
    })?;
    let (lo, hi) = case.delta_c();
    let cx = 0.5 * (lo + hi);
    let radius = (fdd + 1.5).max(2.0);
    let seeds: Vec<CScalar> = (0..n)
        .map(|k| {
            let th = 2.0 * std::f64::consts::PI * (k as f64 + 0.37) / n as f64;
            let re = (cx + radius * th.cos()) * cn.to_f64();
            let im = radius * th.sin() * cn.to_f64();
            pr.c(re, im)
        })
        .collect();
    let cloud: ZeroCloud = roots_with_seeds(&q, &seeds)?.normalize();

    let mut dist_curve = Vec::with_capacity(n);
    let mut dist_delta = Vec::with_capacity(n);
    let mut summary: f64 = 0.0;
    let mut all_bounded = true;
    for z in &cloud.zeros {
        let (x, y) = (z.real().to_f64(), z.imag().to_f64());
        let dc = curve.dist_to(x, y);
        let dd = dist_to_delta_c(case, x, y);
        summary = summary.max(dc.min(dd));
        if (x * x + y * y).sqrt() > fdd + 2.0 {
            all_bounded = false;
        }
        dist_curve.push(dc);
        dist_delta.push(dd);
    }
    let (tube_zero_free, all_simple) = if fd > 2.0 {
        let tube = (fd - 2.0) / 2.0;
        let free = dist_delta.iter().all(|&d| d > tube);
        let mut simple = true;
        for i in 0..cloud.zeros.len() {
            for j in 0..i {
                let g = cabs(&(cloud.zeros[i].clone() - &cloud.zeros[j]));
                if g <= pr.tol_div(4) {
                    simple = false;
                }
            }
        }
        (Some(free), Some(simple))
    } else {
        (None, None)
    };
    Ok(ZeroLocusReport {
        zeros: cloud.zeros,
        dist_curve,
        dist_delta,
        summary,
        frak_d: fd,
        frak_dd: fdd,
        all_bounded,
        tube_zero_free,
        all_simple,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p() -> Prec {
        Prec::new(128)
    }

    fn lag0() -> Case {
        Case::laguerre(p().f(0.0)).unwrap()
    }

    #[test]
    fn map_values_at_two() {
        let z = p().c(2.0, 0.0);
        let m = conformal_maps(&Case::Hermite, &z).unwrap();
        let r3 = p().f(3.0).sqrt();
        assert!((m.phi.real().clone() - (p().f(2.0) + &r3)).abs() <= p().tol(16));
        let r8 = p().f(8.0).sqrt();
        assert!((m.psi.real().clone() - (p().f(3.0) + &r8)).abs() <= p().tol(16));
        // nth-root limit: (2+sqrt3)/(2 sqrt e) * e^{4 - 2 sqrt3}
        let expect = (p().f(2.0) + &r3) / (p().f(1.0).exp().sqrt() * 2u32)
            * (p().f(4.0) - r3 * 2u32).exp();
        assert!(
            (m.nth_root_limit.clone() - &expect).abs() <= p().tol(16) * expect,
            "limit {}",
            m.nth_root_limit
        );
    }

    #[test]
    fn branch_condition() {
        // |phi| > 1 off [-1,1], phi(conj z) = conj phi(z)
        for (re, im) in [(-2.0, 0.0), (0.3, 0.8), (-0.7, -0.2), (5.0, 3.0)] {
            let z = p().c(re, im);
            let m = conformal_maps(&Case::Hermite, &z).unwrap();
            assert!(cabs(&m.phi) > 1u32, "phi {} at {re}+{im}i", m.phi);
            let mc = conformal_maps(&Case::Hermite, &p().c(re, -im)).unwrap();
            assert!((mc.phi.real().clone() - m.phi.real()).abs() <= p().tol(16));
            assert!((mc.phi.imag().clone() + m.phi.imag()).abs() <= p().tol(16));
        }
        // |psi| > 1 off [0,1]
        for (re, im) in [(-0.5, 0.0), (2.0, 0.0), (0.5, 0.7)] {
            let m = conformal_maps(&lag0(), &p().c(re, im)).unwrap();
            assert!(cabs(&m.psi) > 1u32);
        }
        // E_BRANCH on the support
        assert!(matches!(
            conformal_maps(&Case::Hermite, &p().c(0.5, 0.0)),
            Err(Error::Branch(_))
        ));
        assert!(matches!(
            conformal_maps(&lag0(), &p().c(0.5, 0.0)),
            Err(Error::Branch(_))
        ));
    }

    #[test]
    fn f64_log_psi_matches_full_precision() {
        for case in [Case::Hermite, lag0()] {
            for (re, im) in [(2.0, 0.5), (-1.5, 0.25), (0.5, 1.5)] {
                let m = conformal_maps(&case, &p().c(re, im)).unwrap();
                let full = m.capital_psi.clone().ln().to_f64();
                let fast = log_capital_psi_f64(&case, re, im);
                assert!((full - fast).abs() <= 1e-16 + 1e-12 * full.abs());
            }
        }
    }

    #[test]
    fn classical_nth_root_small_degree_trend() {
        // rho = 1: Qhat_n = L_n; the measured nth root should approach the
        // limit as n grows
        let spec = MeasureSpec::new(Case::Hermite, vec![p().one()]).unwrap();
        let z = [p().c(2.0, 0.0)];
        let rows = nth_root_report(&spec, &z, &[25, 50]).unwrap();
        assert!(rows[1].rel_err < rows[0].rel_err);
        assert!(rows[1].rel_err < 0.1f64, "err {}", rows[1].rel_err);
    }

    #[test]
    fn ratio_trivial_is_one() {
        let spec = MeasureSpec::new(lag0(), vec![p().one()]).unwrap();
        let rows = ratio_report(&spec, &[p().c(3.0, 1.0)], &[12], None).unwrap();
        assert!(rows[0].err <= p().tol(24));
    }

    #[test]
    fn region_classification_and_error() {
        let spec = MeasureSpec::new(lag0(), vec![p().one(), p().one()]).unwrap();
        let zeta = p().c(8.0, 0.0);
        // Psi is increasing along the real ray, so z = 3 is inner, z = 20 outer
        let rows = ratio_report(
            &spec,
            &[p().c(3.0, 0.0), p().c(20.0, 0.0)],
            &[15],
            Some(&zeta),
        )
        .unwrap();
        assert_eq!(rows[0].region, Region::Inner);
        assert_eq!(rows[1].region, Region::Outer);
        // z = zeta is on the curve
        assert!(matches!(
            ratio_report(&spec, &[zeta.clone()], &[15], Some(&zeta)),
            Err(Error::Region(_))
        ));
    }

    #[test]
    fn level_curve_through_zeta() {
        let zeta = p().c(4.0, 0.0);
        let curve = trace_level_curve(
            &Case::Hermite,
            &zeta,
            default_window(&Case::Hermite, &zeta),
            0.05,
        )
        .unwrap();
        // zeta is on the curve
        assert!(curve.dist_to(4.0, 0.0) <= 0.08, "d = {}", curve.dist_to(4.0, 0.0));
        // every vertex satisfies the G tolerance or sits at the bisection floor
        let g_zeta = log_capital_psi_f64(&Case::Hermite, 4.0, 0.0);
        for &(x, y) in curve.vertices() {
            let g = log_capital_psi_f64(&Case::Hermite, x, y) - g_zeta;
            assert!(g.abs() <= 1e-3 * g_zeta.abs(), "G = {g} at ({x},{y})");
        }
        // conjugate-reflection symmetry of the vertex set
        for &(x, y) in curve.vertices() {
            assert!(curve.dist_to(x, -y) <= 2.0 * 0.05);
        }
    }

    #[test]
    fn level_curve_real_crossings_laguerre() {
        let zeta = p().c(3.0, 0.0);
        let curve = trace_level_curve(
            &lag0(),
            &zeta,
            default_window(&lag0(), &zeta),
            0.04,
        )
        .unwrap();
        // crosses the real axis at zeta and left of 0
        assert!(curve.dist_to(3.0, 0.0) <= 0.08);
        let left = curve
            .vertices()
            .filter(|(x, y)| *x < 0.0 && y.abs() < 0.05)
            .count();
        assert!(left > 0, "no crossing left of the origin");
    }

    #[test]
    fn empty_window_errors() {
        let zeta = p().c(4.0, 0.0);
        let r = trace_level_curve(&Case::Hermite, &zeta, (10.0, 11.0, 10.0, 11.0), 0.05);
        assert!(matches!(r, Err(Error::Empty(_))));
    }

    #[test]
    fn csv_format() {
        let zeta = p().c(4.0, 0.0);
        let curve = trace_level_curve(
            &Case::Hermite,
            &zeta,
            default_window(&Case::Hermite, &zeta),
            0.1,
        )
        .unwrap();
        let csv = curve.to_csv();
        assert!(csv.starts_with("polyline_id,vertex_index,re,im\n"));
        assert!(csv.lines().count() > 10);
    }
}

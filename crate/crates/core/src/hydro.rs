//! Stagnation-point flow model: superposed sources/streams anchored at the
//! zeros of `Qhat_n`, whose stagnation points are the zeros of `P_n`.

use crate::error::{Error, Result};
use crate::measures::{pn_construct, MeasureSpec};
use crate::polycore::Case;
use crate::scalar::{cabs, CScalar, Prec, Scalar};
use crate::spectra::roots;

/// An n-point singularity system with pair-sum strengths
/// `f_i = 2 sum_{j != i} 1/(w_i - w_j)`.
#[derive(Clone, Debug)]
pub struct FlowSystem {
    pub case: Case,
    pub points: Vec<CScalar>,
    pub strengths: Vec<CScalar>,
}

fn gap_floor(points: &[CScalar], pr: Prec) -> Scalar {
    let mut scale = pr.one();
    for w in points {
        let a = cabs(w);
        if a > scale {
            scale = a;
        }
    }
    pr.tol_div(2) * scale
}

/// `f_i = R''(w_i)/R'(w_i)` for `R = prod (z - w_i)`, via the exact
/// pair-sum formula.
pub fn f_values(points: &[CScalar]) -> Result<Vec<CScalar>> {
    if points.is_empty() {
        return Err(Error::Shape("flow system needs at least one point".into()));
    }
    let pr = Prec::new(points[0].prec().0);
    let floor = gap_floor(points, pr);
    let mut out = Vec::with_capacity(points.len());
    for (i, wi) in points.iter().enumerate() {
        let mut s = pr.c_zero();
        for (j, wj) in points.iter().enumerate() {
            if i == j {
                continue;
            }
            let d = wi.clone() - wj;
            if cabs(&d) <= floor {
                return Err(Error::Collide(format!(
                    "points {i} and {j} are closer than the gap floor"
                )));
            }
            s += d.recip();
        }
        out.push(s * 2u32);
    }
    Ok(out)
}

impl FlowSystem {
    pub fn new(case: Case, points: Vec<CScalar>) -> Result<Self> {
        let strengths = f_values(&points)?;
        Ok(FlowSystem {
            case,
            points,
            strengths,
        })
    }

    pub fn prec(&self) -> Prec {
        Prec::new(self.points[0].prec().0)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let pair = |z: &CScalar| {
            serde_json::json!([
                crate::scalar::to_dec(z.real()),
                crate::scalar::to_dec(z.imag())
            ])
        };
        serde_json::json!({
            "case": if self.case.is_laguerre() { "laguerre" } else { "hermite" },
            "alpha": match self.case.alpha() {
                Some(a) => crate::scalar::to_dec(a),
                None => "0".to_string(),
            },
            "points": self.points.iter().map(pair).collect::<Vec<_>>(),
            "strengths": self.strengths.iter().map(pair).collect::<Vec<_>>(),
        })
    }
}

/// Complex potential and velocity. `V` uses principal logs (and is
/// discontinuous across their cuts); `Vprime` is the closed-form
/// derivative and is single-valued.
pub fn potential_and_velocity(sys: &FlowSystem, z: &CScalar) -> Result<(CScalar, CScalar)> {
    let pr = sys.prec();
    let floor = gap_floor(&sys.points, pr);
    let mut v = pr.c_zero();
    let mut dv = pr.c_zero();
    match &sys.case {
        Case::Laguerre { alpha } => {
            let ap1 = pr.one() + alpha;
            for (w, f) in sys.points.iter().zip(&sys.strengths) {
                let d = z.clone() - w;
                if cabs(&d) <= floor {
                    return Err(Error::Pole(format!("z is within the gap floor of {w}")));
                }
                let lg = d.clone().ln();
                let c = pr.c_real(&ap1) - w;
                v += -z.clone() + c.clone() * &lg + (z.clone() + w.clone() * &lg) * f;
                dv += -pr.c(1.0, 0.0) + c / &d + (pr.c(1.0, 0.0) + w.clone() / &d) * f;
            }
        }
        Case::Hermite => {
            for (w, f) in sys.points.iter().zip(&sys.strengths) {
                let d = z.clone() - w;
                if cabs(&d) <= floor {
                    return Err(Error::Pole(format!("z is within the gap floor of {w}")));
                }
                let c = f.clone() / 2u32 - w;
                v += -z.clone() + c.clone() * d.clone().ln();
                dv += -pr.c(1.0, 0.0) + c / &d;
            }
        }
    }
    Ok((v, dv))
}

/// Closed-form `V''`, for Newton on the velocity.
fn velocity_derivative(sys: &FlowSystem, z: &CScalar) -> Result<CScalar> {
    let pr = sys.prec();
    let floor = gap_floor(&sys.points, pr);
    let mut out = pr.c_zero();
    match &sys.case {
        Case::Laguerre { alpha } => {
            let ap1 = pr.one() + alpha;
            for (w, f) in sys.points.iter().zip(&sys.strengths) {
                let d = z.clone() - w;
                if cabs(&d) <= floor {
                    return Err(Error::Pole(format!("z is within the gap floor of {w}")));
                }
                let d2 = d.clone() * &d;
                out -= (pr.c_real(&ap1) - w + w.clone() * f) / d2;
            }
        }
        Case::Hermite => {
            for (w, f) in sys.points.iter().zip(&sys.strengths) {
                let d = z.clone() - w;
                if cabs(&d) <= floor {
                    return Err(Error::Pole(format!("z is within the gap floor of {w}")));
                }
                let d2 = d.clone() * &d;
                out -= (f.clone() / 2u32 - w) / d2;
            }
        }
    }
    Ok(out)
}

/// Like `potential_and_velocity` but also returns the absolute sum of the
/// velocity terms, the natural residual scale at a stagnation point.
fn velocity_with_scale(sys: &FlowSystem, z: &CScalar) -> Result<(CScalar, Scalar)> {
    let pr = sys.prec();
    let floor = gap_floor(&sys.points, pr);
    let mut dv = pr.c_zero();
    let mut s = pr.zero();
    for (w, f) in sys.points.iter().zip(&sys.strengths) {
        let d = z.clone() - w;
        if cabs(&d) <= floor {
            return Err(Error::Pole(format!("z is within the gap floor of {w}")));
        }
        let term = match &sys.case {
            Case::Laguerre { alpha } => {
                let c = pr.c_real(&(pr.one() + alpha)) - w;
                -pr.c(1.0, 0.0) + c / &d + (pr.c(1.0, 0.0) + w.clone() / &d) * f
            }
            Case::Hermite => -pr.c(1.0, 0.0) + (f.clone() / 2u32 - w) / &d,
        };
        s += cabs(&term);
        dv += term;
    }
    Ok((dv, s))
}

/// Stagnation report: residuals of the velocity at the zeros of `P_n` and
/// the Newton recovery of those zeros from perturbed seeds.
#[derive(Clone, Debug)]
pub struct StagnationReport {
    pub n: usize,
    /// Max over the zeros of `P_n` of `|Vprime| / sum |terms|`.
    pub max_residual: Scalar,
    /// Max distance from a Newton-recovered stagnation point to its seed's
    /// zero, relative to the zero scale.
    pub newton_max_dist: Scalar,
    pub unrecovered: usize,
}

/// Build the system at the zeros of `Qhat_n` and certify that the velocity
/// vanishes exactly at the zeros of `P_n`.
pub fn stagnation_verify(spec: &MeasureSpec, n: usize) -> Result<StagnationReport> {
    let pr = spec.prec();
    if spec.m() == 0 {
        return Err(Error::Shape(
            "stagnation model needs m >= 1 (P_n and Qhat_n zeros must differ)".into(),
        ));
    }
    let d = crate::construct::qhat(spec, n)?;
    let qz = roots(&d.qhat)?;
    let sys = FlowSystem::new(spec.case.clone(), qz.zeros)?;
    let pn = pn_construct(spec, n)?;
    let pz = roots(&pn)?;
    let floor = gap_floor(&sys.points, pr);
    for x in &pz.zeros {
        for w in &sys.points {
            if cabs(&(x.clone() - w)) <= floor {
                return Err(Error::Degenerate(
                    "a zero of P_n collides with a zero of Qhat_n".into(),
                ));
            }
        }
    }
    let mut max_residual = pr.zero();
    let mut newton_max_dist = pr.zero();
    let mut unrecovered = 0usize;
    for x in &pz.zeros {
        let (dv, s) = velocity_with_scale(&sys, x)?;
        let r = cabs(&dv) / s;
        if r > max_residual {
            max_residual = r;
        }
        // Newton from a perturbed seed; the offset stays well inside the
        // basin by not crossing the nearest pole (a zero of Qhat_n can sit
        // within ~1e-3 of a zero of P_n at larger degrees)
        let mut pole_gap = pr.f(f64::INFINITY);
        for w in &sys.points {
            let g = cabs(&(x.clone() - w));
            if g < pole_gap {
                pole_gap = g;
            }
        }
        let mut off = (cabs(x) + pr.one()) * pr.f(1e-3);
        let quarter_gap = pole_gap / 4u32;
        if quarter_gap < off {
            off = quarter_gap;
        }
        let z0 = x.clone() + pr.c_real(&off);
        let mut z = z0;
        let mut ok = false;
        for _ in 0..60 {
            let (_, dv) = potential_and_velocity(&sys, &z)?;
            let d2 = velocity_derivative(&sys, &z)?;
            if cabs(&d2).is_zero() {
                break;
            }
            let step = dv / d2;
            z -= &step;
            if cabs(&step) <= pr.tol(16) * (cabs(&z) + pr.one()) {
                ok = true;
                break;
            }
        }
        if ok {
            let dist = cabs(&(z - x)) / (cabs(x) + pr.one());
            if dist > newton_max_dist {
                newton_max_dist = dist;
            }
        } else {
            unrecovered += 1;
        }
    }
    Ok(StagnationReport {
        n,
        max_residual,
        newton_max_dist,
        unrecovered,
    })
}

/// CSV field sample: `(u, v) = (Re conj Vprime, Im conj Vprime)`,
/// `psi_stream = Im V`. Poles are masked, not errored.
pub fn sample_field(
    sys: &FlowSystem,
    window: (f64, f64, f64, f64),
    step: f64,
) -> Result<String> {
    if step <= 0.0 {
        return Err(Error::Shape("nonpositive grid step".into()));
    }
    let pr = sys.prec();
    let (x0, x1, y0, y1) = window;
    let mut out =
        String::from("# u+iv = conj(Vprime); psi_stream = Im V\nre,im,u,v,psi_stream,mask\n");
    let nx = ((x1 - x0) / step).round() as usize + 1;
    let ny = ((y1 - y0) / step).round() as usize + 1;
    for j in 0..ny {
        for i in 0..nx {
            let x = x0 + step * i as f64;
            let y = y0 + step * j as f64;
            let z = pr.c(x, y);
            match potential_and_velocity(sys, &z) {
                Ok((v, dv)) => {
                    out.push_str(&format!(
                        "{x:.17e},{y:.17e},{},{},{},0\n",
                        crate::scalar::to_dec(dv.real()),
                        crate::scalar::to_dec(&(-dv.imag().clone())),
                        crate::scalar::to_dec(v.imag()),
                    ));
                }
                Err(Error::Pole(_)) => {
                    out.push_str(&format!("{x:.17e},{y:.17e},,,,1\n"));
                }
                Err(e) => return Err(e),
            }
        }
    }
    Ok(out)
}

//! Orbit sampling and growth-window estimation: empirical reproduction of
//! the mu(H) growth laws attached to each structural type.
//!
//! A window [p, q] means the wedge-square norm of mu(h) is squeezed between
//! |h|^p and |h|^q up to bounded factors; in chamber coordinates that is
//! p <= (u1+u2)/u1 <= q on the sampled orbit. Log factors attach to one
//! bound and decay like log(u1)/u1 in the ratio, which is what the fitter
//! extrapolates away.

use crate::cartan::{mu_so2n_lenient, ChamberPoint};
use crate::catalog::Subalgebra;
use crate::classify::{TypeLabel, TypeVerdict};
use crate::error::{Error, Result};
use crate::lie::{expm, Ambient, Root};
use crate::rat::rat_to_f64;
use nalgebra::DMatrix;
use num_traits::Signed;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Log-type correction attached to a window bound.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Correction {
    None,
    Log,
    Log2,
    PerLog,
    PerLog2,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Confidence {
    ExactFromTheorem,
    Fitted,
    Inconclusive,
}

/// Exponent window [p, q] with per-bound log annotations.
#[derive(Clone, Copy, Debug, serde::Serialize)]
pub struct GrowthWindow {
    pub p: f64,
    pub q: f64,
    pub lower_correction: Correction,
    pub upper_correction: Correction,
    pub confidence: Confidence,
}

impl GrowthWindow {
    pub fn exact(p: f64, q: f64) -> Self {
        GrowthWindow {
            p,
            q,
            lower_correction: Correction::None,
            upper_correction: Correction::None,
            confidence: Confidence::ExactFromTheorem,
        }
    }

    fn with_lower(mut self, c: Correction) -> Self {
        self.lower_correction = c;
        self
    }

    fn with_upper(mut self, c: Correction) -> Self {
        self.upper_correction = c;
        self
    }
}

/// One sampled chamber point along a direction curve.
#[derive(Clone, Copy, Debug, serde::Serialize)]
pub struct SampleRow {
    pub direction_id: u32,
    pub t: f64,
    pub u1: f64,
    pub u2: f64,
}

/// Reproducible orbit sample of a subgroup under the Cartan projection.
#[derive(Clone, Debug, serde::Serialize)]
pub struct OrbitSample {
    pub label: String,
    pub seed: u64,
    pub rows: Vec<SampleRow>,
}

impl OrbitSample {
    pub fn points(&self) -> Vec<ChamberPoint> {
        self.rows.iter().map(|r| ChamberPoint { u1: r.u1, u2: r.u2 }).collect()
    }

    /// CSV with the fixed column order (direction_id, t, u1, u2).
    pub fn to_csv(&self) -> String {
        let mut out = String::from("direction_id,t,u1,u2\n");
        for r in &self.rows {
            out.push_str(&format!("{},{},{},{}\n", r.direction_id, r.t, r.u1, r.u2));
        }
        out
    }
}

/// Default geometric grid from 1 to t_max.
pub fn default_t_grid(t_max: f64, steps: usize) -> Vec<f64> {
    (0..steps).map(|k| t_max.powf(k as f64 / (steps - 1) as f64)).collect()
}

/// Sample mu over exp(t X) for basis directions, random unit directions in
/// the span, and two-exponential products (products reach the parts of the
/// image that one-parameter rays miss).
pub fn sample_orbit(
    h: &Subalgebra,
    t_grid: &[f64],
    n_dirs: usize,
    seed: u64,
) -> Result<OrbitSample> {
    let n = match h.ambient {
        Ambient::So2n { n } => n,
        Ambient::Sl3 => {
            return Err(Error::UnsupportedInput("orbit sampling targets so(2,n)".to_string()))
        }
    };
    if t_grid.is_empty() || t_grid.windows(2).any(|w| w[1] <= w[0]) || t_grid[0] <= 0.0 {
        return Err(Error::InvalidParams("t_grid must be positive increasing".to_string()));
    }
    let label = h.label.clone().unwrap_or_else(|| "subalgebra".to_string());
    let mut rows = Vec::new();
    let basis_f: Vec<DMatrix<f64>> = h
        .basis
        .iter()
        .map(|e| {
            let m = e.mat.to_f64();
            let norm = m.norm();
            m / norm
        })
        .collect();
    if basis_f.is_empty() {
        for &t in t_grid {
            rows.push(SampleRow { direction_id: 0, t, u1: 0.0, u2: 0.0 });
        }
        return Ok(OrbitSample { label, seed, rows });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let k = basis_f.len();
    // Direction list: basis directions, then random unit combinations. Each
    // direction is rescaled towards unit chamber speed (u1 advances like t)
    // so the horizon t_max is used in full; s1^2 <= e^(2 t_max) stays within
    // double range. The rescale factor is capped: past that, the absolute
    // error eps * s1 in the small singular values would swamp a bounded u2.
    // Directions with negligible split part stay at unit Frobenius norm and
    // grow logarithmically.
    let chamber_normalize = |d: DMatrix<f64>| -> DMatrix<f64> {
        let speed = d[(0, 0)].abs().max(d[(1, 1)].abs());
        if speed > 0.05 {
            let scale = (1.0 / speed).min(2.5);
            d * scale
        } else {
            d
        }
    };
    let mut dirs: Vec<DMatrix<f64>> = basis_f.iter().cloned().map(&chamber_normalize).collect();
    for _ in 0..n_dirs {
        let mut d = DMatrix::<f64>::zeros(n + 2, n + 2);
        for b in &basis_f {
            d += b * gaussian(&mut rng);
        }
        let norm = d.norm();
        if norm > 1e-12 {
            dirs.push(chamber_normalize(d / norm));
        }
    }
    let mut id: u32 = 0;
    for d in &dirs {
        for &t in t_grid {
            let g = expm(&(d * t));
            let c = mu_so2n_lenient(n, &g)?;
            rows.push(SampleRow { direction_id: id, t, u1: c.u1, u2: c.u2 });
        }
        id += 1;
    }
    // Product curves exp(t X_i) exp(rho t X_j) over direction pairs.
    let mut pairs: Vec<(usize, usize)> = (0..k.saturating_sub(1)).map(|i| (i, i + 1)).collect();
    for _ in 0..n_dirs / 2 {
        let i = rng.gen_range(0..dirs.len());
        let j = rng.gen_range(0..dirs.len());
        if i != j {
            pairs.push((i, j));
        }
    }
    // Product curves run at half parameter per factor, keeping the combined
    // radius inside the numerically trustworthy range.
    for (i, j) in pairs {
        for rho in [1.0, 0.5] {
            for &t in t_grid {
                let g = expm(&(&dirs[i] * (0.5 * t))) * expm(&(&dirs[j] * (0.5 * rho * t)));
                let c = mu_so2n_lenient(n, &g)?;
                rows.push(SampleRow { direction_id: id, t, u1: c.u1, u2: c.u2 });
            }
            id += 1;
        }
    }
    Ok(OrbitSample { label, seed, rows })
}

fn gaussian(rng: &mut impl Rng) -> f64 {
    // Box-Muller; deterministic given the seeded stream.
    let u1: f64 = rng.gen_range(f64::MIN_POSITIVE..1.0);
    let u2: f64 = rng.gen_range(0.0..1.0);
    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
}

/// Fit the exponent window from a sample: along each direction curve the
/// relation u2 = s u1 + k log(u1) + c is fitted by least squares (the exact
/// asymptotic shape produced by power laws with constant and log factors)
/// and the limit ratio is 1 + s; the window is the range of the limits over
/// directions. Log corrections are detected on the envelope of the top two
/// dyadic annuli.
pub fn fit_window(sample: &OrbitSample, t_min: f64) -> Result<GrowthWindow> {
    // Group rows per direction.
    let mut per_dir: std::collections::BTreeMap<u32, Vec<(f64, f64)>> = Default::default();
    let mut horizon: f64 = 0.0;
    for r in &sample.rows {
        horizon = horizon.max(r.u1);
        if r.u1 >= t_min.max(1.0) {
            per_dir.entry(r.direction_id).or_default().push((r.u1, r.u2));
        }
    }
    if per_dir.is_empty() {
        return Err(Error::InsufficientData(format!(
            "no points beyond t_min = {t_min} (horizon {horizon:.3})"
        )));
    }
    // A direction only carries asymptotic information when its radial range
    // is wide enough to separate the linear and log regressors.
    let mut qualified = Vec::new();
    let mut all = Vec::new();
    for pts in per_dir.values() {
        let lo = pts.iter().map(|p| p.0).fold(f64::INFINITY, f64::min);
        let hi = pts.iter().map(|p| p.0).fold(0.0f64, f64::max);
        let limit = extrapolate_ratio(pts);
        all.push(limit);
        if hi - lo >= 8.0 && pts.len() >= 8 {
            qualified.push(limit);
        }
    }
    let limits = if qualified.is_empty() { &all } else { &qualified };
    let p = limits.iter().cloned().fold(f64::INFINITY, f64::min).clamp(1.0, 2.0);
    let q = limits.iter().cloned().fold(0.0f64, f64::max).clamp(1.0, 2.0);
    // Envelope drift over the top two dyadic annuli decides log corrections.
    let lo_cut = horizon / 4.0;
    let env: Vec<(f64, f64)> = sample
        .rows
        .iter()
        .filter(|r| r.u1 >= lo_cut.max(t_min).max(1.0))
        .map(|r| (r.u1, (r.u1 + r.u2) / r.u1))
        .collect();
    let mut win = GrowthWindow {
        p,
        q,
        lower_correction: Correction::None,
        upper_correction: Correction::None,
        confidence: Confidence::Fitted,
    };
    if env.len() >= 8 {
        let upper_env: Vec<(f64, f64)> = envelope(&env, true);
        let lower_env: Vec<(f64, f64)> = envelope(&env, false);
        apply_correction(&mut win, &upper_env, true);
        apply_correction(&mut win, &lower_env, false);
    }
    Ok(win)
}

/// Max/min of r per sub-bin of u1.
fn envelope(points: &[(f64, f64)], upper: bool) -> Vec<(f64, f64)> {
    let lo = points.iter().map(|p| p.0).fold(f64::INFINITY, f64::min);
    let hi = points.iter().map(|p| p.0).fold(0.0f64, f64::max);
    if hi <= lo {
        return vec![];
    }
    let bins = 8;
    let mut best: Vec<Option<(f64, f64)>> = vec![None; bins];
    for &(u, r) in points {
        let b = (((u - lo) / (hi - lo) * bins as f64).floor() as usize).min(bins - 1);
        let replace = match best[b] {
            None => true,
            Some((_, br)) => {
                if upper {
                    r > br
                } else {
                    r < br
                }
            }
        };
        if replace {
            best[b] = Some((u, r));
        }
    }
    best.into_iter().flatten().collect()
}

/// Contest the constant-factor model r = q0 + c/u1 against the log-family
/// model r = q0 + k log(u1)/u1 on an envelope; a winning log model with
/// |k| >= 1/2 attaches a correction to the matching bound.
fn apply_correction(win: &mut GrowthWindow, env: &[(f64, f64)], upper: bool) {
    if env.len() < 4 {
        return;
    }
    let fit2 = |f: &dyn Fn(f64) -> f64| -> (f64, f64, f64) {
        // least squares r ~ a + b f(u)
        let m = env.len() as f64;
        let sx: f64 = env.iter().map(|(u, _)| f(*u)).sum();
        let sy: f64 = env.iter().map(|(_, r)| *r).sum();
        let sxx: f64 = env.iter().map(|(u, _)| f(*u) * f(*u)).sum();
        let sxy: f64 = env.iter().map(|(u, r)| f(*u) * r).sum();
        let det = m * sxx - sx * sx;
        if det.abs() < 1e-12 {
            return (sy / m, 0.0, f64::INFINITY);
        }
        let b = (m * sxy - sx * sy) / det;
        let a = (sy - b * sx) / m;
        let res: f64 =
            env.iter().map(|(u, r)| (r - a - b * f(*u)).powi(2)).sum::<f64>() / m;
        (a, b, res)
    };
    let (_, _, res_const) = fit2(&|u: f64| 1.0 / u);
    let (_, k, res_log) = fit2(&|u: f64| u.ln() / u);
    let drift = env.iter().map(|(_, r)| *r).fold(f64::NEG_INFINITY, f64::max)
        - env.iter().map(|(_, r)| *r).fold(f64::INFINITY, f64::min);
    if drift < 0.02 {
        return; // flat envelope: no correction detectable
    }
    if res_log < 0.8 * res_const && k.abs() >= 0.5 {
        let mag = k.abs().round().clamp(1.0, 2.0) as u32;
        let corr = if k > 0.0 {
            if mag == 1 {
                Correction::Log
            } else {
                Correction::Log2
            }
        } else if mag == 1 {
            Correction::PerLog
        } else {
            Correction::PerLog2
        };
        if upper {
            win.upper_correction = corr;
        } else {
            win.lower_correction = corr;
        }
    } else if res_log >= res_const && drift > 0.1 {
        // Large drift that neither shape explains: be honest about it.
        win.confidence = Confidence::Inconclusive;
    }
}

/// Least-squares extrapolation of the ratio limit along one direction curve:
/// fit u2 = s u1 + k log(u1) + c over the outer part of the radial range
/// (the inner third carries the non-asymptotic transient) and return 1 + s.
fn extrapolate_ratio(pts: &[(f64, f64)]) -> f64 {
    if pts.len() < 4 {
        return pts.last().map(|&(u1, u2)| (u1 + u2) / u1).unwrap_or(1.0);
    }
    let lo = pts.iter().map(|p| p.0).fold(f64::INFINITY, f64::min);
    let hi = pts.iter().map(|p| p.0).fold(0.0f64, f64::max);
    let cut = lo + (hi - lo) / 3.0;
    let outer: Vec<(f64, f64)> = pts.iter().copied().filter(|p| p.0 >= cut).collect();
    let pts = if outer.len() >= 4 { &outer[..] } else { pts };
    let m = pts.len();
    let a = DMatrix::from_fn(m, 3, |i, j| {
        let u = pts[i].0;
        match j {
            0 => u,
            1 => u.ln(),
            _ => 1.0,
        }
    });
    let b = DMatrix::from_fn(m, 1, |i, _| pts[i].1);
    match a.svd(true, true).solve(&b, 1e-12) {
        Ok(x) => 1.0 + x[(0, 0)],
        Err(_) => {
            let (u1, u2) = *pts.last().unwrap();
            (u1 + u2) / u1
        }
    }
}

/// The window a theorem assigns to a classified type. Exact-from-theorem.
pub fn predicted_window(v: &TypeVerdict) -> Result<GrowthWindow> {
    use TypeLabel::*;
    let w = match v.label {
        T25_1 => {
            let p = v.params.p.as_ref().map(rat_to_f64).unwrap_or(0.0);
            GrowthWindow::exact(p, p)
        }
        T25_2 | T26_2 => GrowthWindow::exact(2.0, 2.0),
        T25_3 | T25_4 | T26_3 | T26_4 | T26_5 | T26_7 => GrowthWindow::exact(1.0, 1.0),
        T26_1 => {
            let (t1, t2) = v
                .params
                .torus
                .as_ref()
                .ok_or_else(|| Error::NoPrediction("torus direction missing".to_string()))?;
            let a = rat_to_f64(&t1.abs());
            let b = rat_to_f64(&t2.abs());
            let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
            let r = if hi == 0.0 { 1.0 } else { 1.0 + lo / hi };
            GrowthWindow::exact(r, r)
        }
        T26_6 => GrowthWindow::exact(1.5, 1.5),
        T29_1 | T29_4 => GrowthWindow::exact(1.0, 2.0).with_upper(Correction::PerLog),
        T29_2 | T29_3 => GrowthWindow::exact(2.0, 2.0).with_lower(Correction::PerLog2),
        T29_5 => GrowthWindow::exact(1.0, 1.5),
        T29_6 => GrowthWindow::exact(1.0, 1.0).with_upper(Correction::Log2),
        T29_7 | T29_8 => GrowthWindow::exact(1.0, 2.0).with_lower(Correction::Log),
        P210 => {
            let p = v
                .params
                .p
                .as_ref()
                .map(|p| rat_to_f64(&p.abs()))
                .ok_or_else(|| Error::NoPrediction("parameter p missing".to_string()))?;
            match v.params.omega {
                Some(Root::Alpha) | Some(Root::Alpha2Beta) => {
                    GrowthWindow::exact(2.0 / (1.0 + p), 2.0)
                }
                Some(Root::Beta) | Some(Root::AlphaBeta) => GrowthWindow::exact(1.0, 1.0 + p),
                None => return Err(Error::NoPrediction("root omega missing".to_string())),
            }
        }
        Cds => GrowthWindow::exact(1.0, 2.0),
        IncompatibleUnresolved => {
            return Err(Error::NoPrediction("unresolved classification".to_string()))
        }
    };
    Ok(w)
}

/// Containment of the fitted exponents in the predicted window, ignoring log
/// corrections, with the stated slack.
pub fn window_consistent(fitted: &GrowthWindow, predicted: &GrowthWindow, slack: f64) -> bool {
    fitted.p >= predicted.p - slack && fitted.q <= predicted.q + slack
}

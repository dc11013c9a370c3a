//! Empirical properness testing: window-based predictions, cone-separation
//! slopes between sampled mu-images, the SL(3,R) fixed-ray crossing
//! demonstration, and the displacement-bound constant.
//!
//! Properness of the H1-action on G/H2 is governed by whether the mu-images
//! eventually separate: disjoint exponent windows force linear divergence of
//! the chamber cones, nested windows force overlap. The slope of the set
//! distance against the annulus radius is the desk-scale statistic.

use crate::cartan::{
    bplus_distance, chamber_matrix_so2n, mu_sl3_lenient, mu_so2n_lenient, random_compact_sl3,
    random_compact_so2n, ChamberPoint,
};
use crate::catalog::Subalgebra;
use crate::error::{Error, Result};
use crate::growth::{GrowthWindow, OrbitSample, SampleRow};
use crate::lie::{expm, Ambient};
use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Window-level properness prediction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Properness {
    Proper,
    NotProper,
    Unknown,
}

/// Predict properness of the pair from theorem-exact windows: disjoint
/// exponent intervals separate the cones, interior overlap forces
/// recurrence, and a shared endpoint is left to the log corrections, which
/// desk-scale sampling cannot certify.
pub fn proper_pair_predicted(w1: &GrowthWindow, w2: &GrowthWindow) -> Properness {
    use crate::growth::Confidence;
    if w1.confidence != Confidence::ExactFromTheorem || w2.confidence != Confidence::ExactFromTheorem
    {
        return Properness::Unknown;
    }
    let lo = w1.p.max(w2.p);
    let hi = w1.q.min(w2.q);
    if lo > hi {
        return Properness::Proper;
    }
    if hi > lo {
        return Properness::NotProper;
    }
    // Single shared exponent t = lo = hi.
    let t = lo;
    let interior1 = w1.p < t && t < w1.q;
    let interior2 = w2.p < t && t < w2.q;
    let degenerate1 = w1.p == w1.q;
    let degenerate2 = w2.p == w2.q;
    if interior1 || interior2 || (degenerate1 && degenerate2) {
        Properness::NotProper
    } else {
        Properness::Unknown
    }
}

/// Per-annulus set distance between two sampled mu-images.
#[derive(Clone, Debug, serde::Serialize)]
pub struct AnnulusDistance {
    pub radius: f64,
    pub distance: f64,
    pub left_count: usize,
    pub right_count: usize,
}

/// Report of an empirical properness test between two subgroups.
#[derive(Clone, Debug, serde::Serialize)]
pub struct PropernessReport {
    pub left: String,
    pub right: String,
    pub predicted: Properness,
    /// Fitted slope of distance(R) ~ s R + c.
    pub slope: f64,
    pub intercept: f64,
    pub per_annulus: Vec<AnnulusDistance>,
    pub left_points: usize,
    pub right_points: usize,
    pub seed: u64,
}

/// Distance between the two chamber point sets restricted to the annulus
/// [R, 2R] for each radius, with the least-squares slope over radii.
pub fn cone_separation(
    left: &OrbitSample,
    right: &OrbitSample,
    radii: &[f64],
    predicted: Properness,
) -> Result<PropernessReport> {
    let lp = left.points();
    let rp = right.points();
    let mut per_annulus = Vec::new();
    for &r in radii {
        let sel = |pts: &[ChamberPoint]| -> Vec<ChamberPoint> {
            pts.iter().filter(|p| p.norm() >= r && p.norm() < 2.0 * r).cloned().collect()
        };
        let a = sel(&lp);
        let b = sel(&rp);
        if a.is_empty() || b.is_empty() {
            continue;
        }
        let mut dist = f64::INFINITY;
        for x in &a {
            for y in &b {
                dist = dist.min(x.dist(y));
            }
        }
        per_annulus.push(AnnulusDistance {
            radius: r,
            distance: dist,
            left_count: a.len(),
            right_count: b.len(),
        });
    }
    if per_annulus.len() < 2 {
        return Err(Error::InsufficientData(format!(
            "only {} annuli had points from both samples",
            per_annulus.len()
        )));
    }
    // Least squares distance = slope * R + intercept.
    let m = per_annulus.len() as f64;
    let sx: f64 = per_annulus.iter().map(|a| a.radius).sum();
    let sy: f64 = per_annulus.iter().map(|a| a.distance).sum();
    let sxx: f64 = per_annulus.iter().map(|a| a.radius * a.radius).sum();
    let sxy: f64 = per_annulus.iter().map(|a| a.radius * a.distance).sum();
    let det = m * sxx - sx * sx;
    let slope = (m * sxy - sx * sy) / det;
    let intercept = (sy - slope * sx) / m;
    Ok(PropernessReport {
        left: left.label.clone(),
        right: right.label.clone(),
        predicted,
        slope,
        intercept,
        per_annulus,
        left_points: lp.len(),
        right_points: rp.len(),
        seed: left.seed,
    })
}

/// Reductive groups sampled through their split torus: mu(L) tracks mu(A_L),
/// so K exp(t a_L) K products sample the image without an Iwasawa
/// decomposition of L itself.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReductiveTag {
    /// Split-vector stabilizer: torus ray (1, 0).
    So1n,
    /// Unitary-type subgroup: torus ray (1, 1).
    Su1m,
}

impl ReductiveTag {
    pub fn label(&self) -> &'static str {
        match self {
            ReductiveTag::So1n => "so1n_full",
            ReductiveTag::Su1m => "su1m_full",
        }
    }

    fn ray(&self) -> (f64, f64) {
        match self {
            ReductiveTag::So1n => (1.0, 0.0),
            ReductiveTag::Su1m => (1.0, 1.0),
        }
    }
}

/// Sample mu over k exp(t a_L) k' for the named reductive subgroup.
pub fn sample_reductive_orbit(
    tag: ReductiveTag,
    n: usize,
    t_grid: &[f64],
    n_dirs: usize,
    seed: u64,
) -> Result<OrbitSample> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (r1, r2) = tag.ray();
    let mut rows = Vec::new();
    for dir in 0..n_dirs.max(1) as u32 {
        let k1 = random_compact_so2n(n, &mut rng, 1.0);
        let k2 = random_compact_so2n(n, &mut rng, 1.0);
        for &t in t_grid {
            let a = chamber_matrix_so2n(n, r1 * t, r2 * t);
            let g = &k1 * a * &k2;
            let c = mu_so2n_lenient(n, &g)?;
            rows.push(SampleRow { direction_id: dir, t, u1: c.u1, u2: c.u2 });
        }
    }
    Ok(OrbitSample { label: tag.label().to_string(), seed, rows })
}

/// Per-t minima of the distance from mu of the interpolation arc to the
/// fixed ray of the opposition involution.
#[derive(Clone, Debug, serde::Serialize)]
pub struct CrossingEvidence {
    pub t_values: Vec<f64>,
    pub min_distance: Vec<f64>,
}

/// The fixed-ray crossing demonstration in SL(3,R): between a curve h_t and
/// its inverse inside H there is an arc, and the Cartan image of the arc
/// must meet the fixed ray of the opposition involution. The arc used is
/// Phi(s, t) = exp(t cos(pi s) X0) exp(t sin(pi s) Y0) with X0, Y0 the first
/// two basis directions.
pub fn sl3_bplus_crossing(
    h: &Subalgebra,
    t_max: f64,
    steps: usize,
) -> Result<CrossingEvidence> {
    if h.ambient != Ambient::Sl3 {
        return Err(Error::UnsupportedInput("fixed-ray crossing targets sl(3,R)".to_string()));
    }
    let d = if h.info().in_an {
        h.dim()
    } else if h.label.as_deref() == Some("sl2-top-left") {
        2
    } else {
        return Err(Error::UnsupportedInput(
            "characteristic index is only computed for upper-triangular subalgebras and named \
             entries"
                .to_string(),
        ));
    };
    if d < 2 {
        return Err(Error::HypothesisViolated(format!(
            "need characteristic index >= 2, got {d}"
        )));
    }
    if h.dim() < 2 {
        return Err(Error::HypothesisViolated("need at least two directions".to_string()));
    }
    let x0 = h.basis[0].mat.to_f64();
    let x0 = &x0 / x0.norm();
    let y0 = h.basis[1].mat.to_f64();
    let y0 = &y0 / y0.norm();
    let t_values: Vec<f64> = (1..=steps).map(|k| t_max * k as f64 / steps as f64).collect();
    let s_steps = 64;
    let mut min_distance = Vec::new();
    for &t in &t_values {
        let mut best = f64::INFINITY;
        for si in 0..=s_steps {
            let s = si as f64 / s_steps as f64;
            let a = (std::f64::consts::PI * s).cos() * t;
            let b = (std::f64::consts::PI * s).sin() * t;
            let g = expm(&(&x0 * a)) * expm(&(&y0 * b));
            let c = mu_sl3_lenient(&g);
            best = best.min(bplus_distance(&c));
        }
        min_distance.push(best);
    }
    Ok(CrossingEvidence { t_values, min_distance })
}

/// Fitted displacement-bound constant: the max over samples of
/// |mu(g)^{-1} mu(gh)| and |mu(g)^{-1} mu(hg)| divided by max(|h|, |h^-1|).
#[derive(Clone, Debug, serde::Serialize)]
pub struct DisplacementFit {
    pub scale: f64,
    pub constant: f64,
    pub samples: usize,
}

pub fn appendix_constant(
    ambient: Ambient,
    n_samples: usize,
    g_scale: f64,
    seed: u64,
) -> Result<DisplacementFit> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best: f64 = 0.0;
    for _ in 0..n_samples {
        match ambient {
            Ambient::So2n { n } => {
                let u1 = rng.gen_range(0.5..1.0) * g_scale.ln();
                let u2 = rng.gen_range(0.0..1.0) * u1;
                let k1 = random_compact_so2n(n, &mut rng, 1.0);
                let k2 = random_compact_so2n(n, &mut rng, 1.0);
                let g = &k1 * chamber_matrix_so2n(n, u1, u2) * &k2;
                let v1 = rng.gen_range(0.1..1.5);
                let v2 = rng.gen_range(0.0..1.0) * v1;
                let k3 = random_compact_so2n(n, &mut rng, 1.0);
                let k4 = random_compact_so2n(n, &mut rng, 1.0);
                let h = &k3 * chamber_matrix_so2n(n, v1, v2) * &k4;
                let mu_g = mu_so2n_lenient(n, &g)?;
                let mu_gh = mu_so2n_lenient(n, &(&g * &h))?;
                let mu_hg = mu_so2n_lenient(n, &(&h * &g))?;
                let h_norm = op_norm(&h);
                let h_inv_norm = op_norm(&h.clone().try_inverse().expect("group element"));
                let denom = h_norm.max(h_inv_norm);
                let num = displacement_so2n(&mu_g, &mu_gh).max(displacement_so2n(&mu_g, &mu_hg));
                best = best.max(num / denom);
            }
            Ambient::Sl3 => {
                let v1 = rng.gen_range(0.5..1.0) * g_scale.ln();
                let v2 = rng.gen_range(-0.5..0.5) * v1;
                let k1 = random_compact_sl3(&mut rng, 1.0);
                let k2 = random_compact_sl3(&mut rng, 1.0);
                let g = &k1 * sl3_diag(v1, v2) * &k2;
                let w1 = rng.gen_range(0.1..1.5);
                let w2 = rng.gen_range(-0.5..0.5) * w1;
                let k3 = random_compact_sl3(&mut rng, 1.0);
                let k4 = random_compact_sl3(&mut rng, 1.0);
                let h = &k3 * sl3_diag(w1, w2) * &k4;
                let mu_g = mu_sl3_lenient(&g);
                let mu_gh = mu_sl3_lenient(&(&g * &h));
                let mu_hg = mu_sl3_lenient(&(&h * &g));
                let h_norm = op_norm(&h);
                let h_inv_norm = op_norm(&h.clone().try_inverse().expect("group element"));
                let denom = h_norm.max(h_inv_norm);
                let d1 = ((mu_gh.v1 - mu_g.v1).abs())
                    .max((mu_gh.v2 - mu_g.v2).abs())
                    .max((mu_gh.v3 - mu_g.v3).abs());
                let d2 = ((mu_hg.v1 - mu_g.v1).abs())
                    .max((mu_hg.v2 - mu_g.v2).abs())
                    .max((mu_hg.v3 - mu_g.v3).abs());
                best = best.max(d1.exp().max(d2.exp()) / denom);
            }
        }
    }
    Ok(DisplacementFit { scale: g_scale, constant: best, samples: n_samples })
}

/// Operator norm of the diagonal ratio mu(g)^{-1} mu(gh) for SO(2,n): the
/// largest entrywise log gap exponentiated.
fn displacement_so2n(a: &ChamberPoint, b: &ChamberPoint) -> f64 {
    let d1 = (b.u1 - a.u1).abs();
    let d2 = (b.u2 - a.u2).abs();
    d1.max(d2).exp()
}

fn sl3_diag(v1: f64, v2: f64) -> DMatrix<f64> {
    DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![
        v1.exp(),
        v2.exp(),
        (-v1 - v2).exp(),
    ]))
}

fn op_norm(m: &DMatrix<f64>) -> f64 {
    m.clone().svd(false, false).singular_values[0]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{h_b, sl3_subgroup, standard_j, DeformationMatrix, Sl3Subgroup};
    use crate::growth::{default_t_grid, sample_orbit, GrowthWindow};

    #[test]
    fn predicted_pairs() {
        let lin = GrowthWindow::exact(1.0, 1.0);
        let quad = GrowthWindow::exact(2.0, 2.0);
        let oblique = GrowthWindow::exact(1.0, 1.5);
        // Linear against quadratic: separated.
        assert_eq!(proper_pair_predicted(&lin, &quad), Properness::Proper);
        // Quadratic against a window with the same upper rate: overlapping.
        assert_eq!(proper_pair_predicted(&quad, &quad), Properness::NotProper);
        // Shared endpoint 1: the log corrections decide, unknown at desk scale.
        assert_eq!(proper_pair_predicted(&lin, &oblique), Properness::Unknown);
        // Interior containment: the 3/2 ray sits inside [1, 2].
        let mid = GrowthWindow::exact(1.5, 1.5);
        let wide = GrowthWindow::exact(1.0, 2.0);
        assert_eq!(proper_pair_predicted(&mid, &wide), Properness::NotProper);
        // Fitted windows stay unknown.
        let mut fitted = GrowthWindow::exact(1.0, 1.0);
        fitted.confidence = crate::growth::Confidence::Fitted;
        assert_eq!(proper_pair_predicted(&fitted, &quad), Properness::Unknown);
    }

    #[test]
    fn cone_separation_so_vs_hb() {
        let n = 4;
        let grid = default_t_grid(24.0, 40);
        let so = sample_reductive_orbit(ReductiveTag::So1n, n, &grid, 6, 3).unwrap();
        let j = DeformationMatrix::new(standard_j(2)).unwrap();
        let hb = h_b(2, &j).unwrap();
        let hb_s = sample_orbit(&hb, &grid, 10, 3).unwrap();
        let radii = [3.0, 6.0, 12.0, 24.0];
        let rep = cone_separation(&so, &hb_s, &radii, Properness::Proper).unwrap();
        assert!(rep.slope >= 0.4, "slope = {}", rep.slope);
        // Identical samples: slope 0.
        let rep = cone_separation(&hb_s, &hb_s, &radii, Properness::NotProper).unwrap();
        assert!(rep.slope.abs() < 1e-12);
        // Two deformation families share the diagonal ray: slope near 0.
        let b2 = DeformationMatrix::from_f64(&DMatrix::from_row_slice(2, 2, &[
            0.0, 2.0, -0.5, 0.0,
        ]))
        .unwrap();
        let hb2 = h_b(2, &b2).unwrap();
        let hb2_s = sample_orbit(&hb2, &grid, 10, 4).unwrap();
        let rep = cone_separation(&hb_s, &hb2_s, &radii, Properness::NotProper).unwrap();
        assert!(rep.slope <= 0.05, "slope = {}", rep.slope);
    }

    #[test]
    fn insufficient_annuli_error() {
        let n = 3;
        let grid = [1.0, 2.0];
        let a = sample_reductive_orbit(ReductiveTag::So1n, n, &grid, 2, 1).unwrap();
        let b = sample_reductive_orbit(ReductiveTag::Su1m, n, &grid, 2, 2).unwrap();
        assert!(cone_separation(&a, &b, &[50.0, 100.0], Properness::Unknown).is_err());
    }

    #[test]
    fn bplus_crossing_cases() {
        // The diagonal torus contains the fixed ray: exact hits.
        let torus = sl3_subgroup(Sl3Subgroup::FullDiagonalTorus).unwrap();
        let ev = sl3_bplus_crossing(&torus, 8.0, 6).unwrap();
        for (t, d) in ev.t_values.iter().zip(&ev.min_distance) {
            assert!(*d < 0.2, "torus arc at t={t} has min distance {d}");
        }
        // sl(2,R) top-left: the arc through the compact direction crosses.
        let sl2 = sl3_subgroup(Sl3Subgroup::Sl2TopLeft).unwrap();
        let ev = sl3_bplus_crossing(&sl2, 10.0, 8).unwrap();
        for (t, d) in ev.t_values.iter().zip(&ev.min_distance) {
            if *t >= 5.0 {
                assert!(*d <= 0.05, "sl2 arc at t={t} has min distance {d}");
            }
        }
        // Solvable 2-dimensional subalgebra: minima decay as well.
        let ut = sl3_subgroup(Sl3Subgroup::UpperTriangular2d).unwrap();
        let ev = sl3_bplus_crossing(&ut, 10.0, 8).unwrap();
        let last = *ev.min_distance.last().unwrap();
        assert!(last <= 0.05, "upper-triangular arc min distance {last}");
        // One-dimensional subgroups violate the hypothesis.
        let one = Subalgebra::new(
            Ambient::Sl3,
            vec![crate::lie::sl3_an_basis()[0].clone()],
        )
        .unwrap();
        assert!(sl3_bplus_crossing(&one, 5.0, 4).is_err());
    }

    #[test]
    fn appendix_constant_examples() {
        // h = identity limit: the ratio stays at most about 1.
        let fit = appendix_constant(Ambient::Sl3, 60, 1e2, 5).unwrap();
        assert!(fit.constant > 0.0);
        // Stability across scales within a factor of 2.
        let c2 = appendix_constant(Ambient::Sl3, 60, 1e2, 6).unwrap().constant;
        let c4 = appendix_constant(Ambient::Sl3, 60, 1e4, 6).unwrap().constant;
        let c6 = appendix_constant(Ambient::Sl3, 60, 1e6, 6).unwrap().constant;
        let max = c2.max(c4).max(c6);
        let min = c2.min(c4).min(c6);
        assert!(max / min < 2.0, "constants {c2:.3} {c4:.3} {c6:.3}");
    }
}

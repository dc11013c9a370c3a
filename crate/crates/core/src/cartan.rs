//! The Cartan projection mu, Weyl-chamber coordinates, the wedge-square norm,
//! the chamber-filling test, and the SL(3,R) opposition-involution geometry.
//!
//! In the signature-diagonal basis the Cartan involution of SO(2,n) is
//! transpose-inverse, so K mu(g) K is numerically a singular value
//! decomposition: the singular values of a group element occur as
//! {s1, s2, 1, ..., 1, 1/s2, 1/s1} with s1 >= s2 >= 1, and
//! mu(g) = (log s1, log s2).

use crate::error::{Error, Result};
use crate::lie::{form_matrix, Ambient, GroupElement};
use nalgebra::DMatrix;
use rand::Rng;

/// Slack allowed at the chamber walls (u1 >= u2 >= 0 up to this).
pub const WALL_SLACK: f64 = 1e-9;
/// Relative tolerance for the singular-value pairing pattern.
pub const PATTERN_TOL: f64 = 1e-7;

/// Chamber coordinates (log s1, log s2) for SO(2,n).
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct ChamberPoint {
    pub u1: f64,
    pub u2: f64,
}

impl ChamberPoint {
    /// Clamps wall violations within `WALL_SLACK`; panics beyond it.
    pub fn new(u1: f64, u2: f64) -> Self {
        assert!(u2 >= -WALL_SLACK && u2 <= u1 + WALL_SLACK, "chamber violation: ({u1}, {u2})");
        let u2 = u2.clamp(0.0, u1.max(0.0));
        let u1 = u1.max(0.0);
        ChamberPoint { u1, u2 }
    }

    pub fn norm(&self) -> f64 {
        (self.u1 * self.u1 + self.u2 * self.u2).sqrt()
    }

    pub fn dist(&self, other: &ChamberPoint) -> f64 {
        ((self.u1 - other.u1).powi(2) + (self.u2 - other.u2).powi(2)).sqrt()
    }
}

/// Chamber coordinates (log s1, log s2, log s3) for SL(3,R), descending,
/// summing to zero.
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct SL3ChamberPoint {
    pub v1: f64,
    pub v2: f64,
    pub v3: f64,
}

impl SL3ChamberPoint {
    pub fn new(v1: f64, v2: f64, v3: f64) -> Self {
        assert!(v1 >= v2 - WALL_SLACK && v2 >= v3 - WALL_SLACK, "not descending");
        assert!((v1 + v2 + v3).abs() < 1e-6, "coordinates must sum to zero");
        SL3ChamberPoint { v1, v2, v3 }
    }

    pub fn norm(&self) -> f64 {
        (self.v1 * self.v1 + self.v2 * self.v2 + self.v3 * self.v3).sqrt()
    }
}

/// Result of the Cartan projection for either ambient group.
#[derive(Clone, Copy, Debug, serde::Serialize)]
pub enum MuPoint {
    So2n(ChamberPoint),
    Sl3(SL3ChamberPoint),
}

impl MuPoint {
    pub fn as_so2n(&self) -> Option<ChamberPoint> {
        match self {
            MuPoint::So2n(c) => Some(*c),
            _ => None,
        }
    }

    pub fn as_sl3(&self) -> Option<SL3ChamberPoint> {
        match self {
            MuPoint::Sl3(c) => Some(*c),
            _ => None,
        }
    }
}

/// Cartan projection with the default pattern tolerance.
pub fn mu(g: &GroupElement) -> Result<MuPoint> {
    mu_with_tol(g, PATTERN_TOL)
}

/// Cartan projection with an explicit singular-value-pattern tolerance.
pub fn mu_with_tol(g: &GroupElement, tol: f64) -> Result<MuPoint> {
    match g.ambient {
        Ambient::So2n { n } => Ok(MuPoint::So2n(mu_so2n_mat(n, &g.g, tol)?)),
        Ambient::Sl3 => Ok(MuPoint::Sl3(mu_sl3_mat(&g.g, tol)?)),
    }
}

/// mu for an SO(2,n) matrix in the defining basis.
pub fn mu_so2n_mat(n: usize, g: &DMatrix<f64>, tol: f64) -> Result<ChamberPoint> {
    let space = form_matrix(n)?;
    let tilde = &space.p * g * space.p.transpose();
    let sv = tilde.svd(false, false).singular_values;
    let size = n + 2;
    // Pairing pattern: s_i * s_{N-1-i} = 1, middle values 1.
    for i in 0..size {
        let prod = sv[i] * sv[size - 1 - i];
        if (prod - 1.0).abs() > tol * (1.0 + prod) {
            return Err(Error::NotInGroup(format!(
                "singular values do not pair: s[{i}] * s[{}] = {prod}",
                size - 1 - i
            )));
        }
    }
    for i in 2..size - 2 {
        if (sv[i] - 1.0).abs() > tol {
            return Err(Error::NotInGroup(format!("middle singular value s[{i}] = {} != 1", sv[i])));
        }
    }
    let u1 = sv[0].ln();
    let u2 = sv[1].ln();
    if u2 < -WALL_SLACK || u2 > u1 + WALL_SLACK {
        return Err(Error::NotInGroup(format!("chamber ordering violated: ({u1}, {u2})")));
    }
    Ok(ChamberPoint::new(u1, u2))
}

/// mu for SO(2,n) with a pattern tolerance that widens with the conditioning
/// of the problem (the inverse singular values carry an absolute error of
/// order eps * s1, so the pairing defect grows like eps * s1^2). Wall
/// violations within the same bound are clamped instead of rejected. Orbit
/// sampling at large radius uses this entry point.
pub fn mu_so2n_lenient(n: usize, g: &DMatrix<f64>) -> Result<ChamberPoint> {
    let space = form_matrix(n)?;
    let tilde = &space.p * g * space.p.transpose();
    let sv = tilde.svd(false, false).singular_values;
    let size = n + 2;
    let s1 = sv[0];
    let tol = PATTERN_TOL + 1e-13 * s1 * s1;
    for i in 0..size {
        let prod = sv[i] * sv[size - 1 - i];
        if (prod - 1.0).abs() > tol * (1.0 + prod) {
            return Err(Error::NotInGroup(format!(
                "singular values do not pair: s[{i}] * s[{}] = {prod}",
                size - 1 - i
            )));
        }
    }
    let u1 = sv[0].ln().max(0.0);
    let u2 = sv[1].ln().clamp(0.0, u1);
    Ok(ChamberPoint { u1, u2 })
}

/// mu for an SL(3,R) matrix.
pub fn mu_sl3_mat(g: &DMatrix<f64>, tol: f64) -> Result<SL3ChamberPoint> {
    let sv = g.clone().svd(false, false).singular_values;
    let det = g.determinant();
    if (det - 1.0).abs() > tol * (1.0 + det.abs()) {
        return Err(Error::NotInGroup(format!("det = {det} != 1")));
    }
    let (v1, v2, v3) = (sv[0].ln(), sv[1].ln(), sv[2].ln());
    let sum = v1 + v2 + v3;
    if sum.abs() > 1e-6 {
        return Err(Error::NotInGroup(format!("log singular values sum to {sum}")));
    }
    // Re-center to kill rounding in the sum.
    let c = sum / 3.0;
    Ok(SL3ChamberPoint::new(v1 - c, v2 - c, v3 - c))
}

/// log of the operator norm of the wedge square at a chamber point:
/// the two largest singular values of a in A+ multiply.
pub fn rho_norm(c: &ChamberPoint) -> f64 {
    c.u1 + c.u2
}

/// Outcome of the chamber-filling test.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CdsOutcome {
    Fills,
    Thin,
    Inconclusive,
}

#[derive(Clone, Copy, Debug)]
pub struct CdsConfig {
    pub bins: usize,
    pub min_points: usize,
    /// Points with u1 below this are ignored as bounded noise.
    pub min_radius: f64,
}

impl Default for CdsConfig {
    fn default() -> Self {
        CdsConfig { bins: 8, min_points: 16, min_radius: 1.0 }
    }
}

/// Sector-coverage test on chamber points sampled from one subgroup: the
/// direction u2/u1 in the unit interval is binned, radii are split into dyadic annuli by
/// u1, and the verdict depends on which bins are hit at which scales.
pub fn cds_criterion(points: &[ChamberPoint], config: &CdsConfig) -> Result<CdsOutcome> {
    if points.len() < config.min_points {
        return Err(Error::InsufficientData(format!(
            "need at least {} points, got {}",
            config.min_points,
            points.len()
        )));
    }
    let horizon = points.iter().map(|p| p.u1).fold(0.0f64, f64::max);
    if horizon <= config.min_radius * 2.0 {
        return Err(Error::InsufficientData("sampling horizon too small".to_string()));
    }
    // Only annuli the sample covers in full count; the partial outermost one
    // cannot fairly be demanded.
    let n_annuli = ((horizon / config.min_radius).log2().floor() as usize).max(1);
    let mut hits = vec![vec![false; n_annuli]; config.bins];
    for p in points {
        if p.u1 < config.min_radius {
            continue;
        }
        let annulus = (p.u1 / config.min_radius).log2().floor() as usize;
        if annulus >= n_annuli {
            continue;
        }
        let frac = (p.u2 / p.u1).clamp(0.0, 1.0);
        let bin = ((frac * config.bins as f64).floor() as usize).min(config.bins - 1);
        hits[bin][annulus] = true;
    }
    let all_hit = hits.iter().all(|row| row.iter().all(|&h| h));
    if all_hit && n_annuli >= 2 {
        return Ok(CdsOutcome::Fills);
    }
    // Thin: some direction bin is missed in every annulus of the outer half.
    let outer_start = n_annuli / 2;
    let thin = hits.iter().any(|row| row[outer_start..].iter().all(|&h| !h));
    if thin {
        return Ok(CdsOutcome::Thin);
    }
    Ok(CdsOutcome::Inconclusive)
}

/// mu for SL(3,R) without the determinant gate: the determinant residual of
/// a well-conditioned product is eps-small, but it scales with the square of
/// the condition number, so large-radius sampling clamps instead. The log
/// singular values themselves stay accurate (backward-stable SVD).
pub fn mu_sl3_lenient(g: &DMatrix<f64>) -> SL3ChamberPoint {
    let sv = g.clone().svd(false, false).singular_values;
    let (v1, v2, v3) = (sv[0].ln(), sv[1].ln(), sv[2].ln());
    let c = (v1 + v2 + v3) / 3.0;
    SL3ChamberPoint { v1: v1 - c, v2: v2 - c, v3: v3 - c }
}

/// Opposition involution of SL(3,R) on chamber coordinates: the A+
/// representative of a^{-1}.
pub fn opposition_involution(c: &SL3ChamberPoint) -> SL3ChamberPoint {
    SL3ChamberPoint::new(-c.v3, -c.v2, -c.v1)
}

/// Euclidean distance from a chamber point to the fixed ray
/// B+ = {(s, 0, -s) : s >= 0} of the opposition involution.
pub fn bplus_distance(c: &SL3ChamberPoint) -> f64 {
    let s = ((c.v1 - c.v3) / 2.0).max(0.0);
    let d1 = c.v1 - s;
    let d2 = c.v2;
    let d3 = c.v3 + s;
    (d1 * d1 + d2 * d2 + d3 * d3).sqrt()
}

/// Random element of the maximal compact subgroup of SO(2,n) in the defining
/// basis: block rotations in the signature basis pulled back through P.
pub fn random_compact_so2n(n: usize, rng: &mut impl Rng, scale: f64) -> DMatrix<f64> {
    let space = form_matrix(n).expect("valid n");
    let size = n + 2;
    let mut skew = DMatrix::<f64>::zeros(size, size);
    // so(n) block on the positive part, so(2) block on the negative part.
    for i in 0..n {
        for j in (i + 1)..n {
            let v = rng.gen_range(-scale..scale);
            skew[(i, j)] = v;
            skew[(j, i)] = -v;
        }
    }
    let v = rng.gen_range(-scale..scale);
    skew[(n, n + 1)] = v;
    skew[(n + 1, n)] = -v;
    let k_tilde = crate::lie::expm(&skew);
    space.p.transpose() * k_tilde * &space.p
}

/// Random element of SO(3), the maximal compact subgroup of SL(3,R).
pub fn random_compact_sl3(rng: &mut impl Rng, scale: f64) -> DMatrix<f64> {
    let mut skew = DMatrix::<f64>::zeros(3, 3);
    for i in 0..3 {
        for j in (i + 1)..3 {
            let v = rng.gen_range(-scale..scale);
            skew[(i, j)] = v;
            skew[(j, i)] = -v;
        }
    }
    crate::lie::expm(&skew)
}

/// The diagonal chamber element diag(e^u1, e^u2, 1, ..., 1, e^-u2, e^-u1).
pub fn chamber_matrix_so2n(n: usize, u1: f64, u2: f64) -> DMatrix<f64> {
    let size = n + 2;
    let mut m = DMatrix::<f64>::identity(size, size);
    m[(0, 0)] = u1.exp();
    m[(1, 1)] = u2.exp();
    m[(size - 2, size - 2)] = (-u2).exp();
    m[(size - 1, size - 1)] = (-u1).exp();
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::{an_element, exp_element, ANCoords};
    use crate::rat::rat_i;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn mu_identity_and_diagonal() {
        let n = 4;
        let id = GroupElement::identity(Ambient::So2n { n });
        let c = mu(&id).unwrap().as_so2n().unwrap();
        assert!(c.u1.abs() < 1e-12 && c.u2.abs() < 1e-12);

        let mut co = ANCoords::zero(n);
        co.t1 = rat_i(2);
        co.t2 = rat_i(1);
        let a = an_element(n, &co).unwrap();
        let g = exp_element(&a, 1.0);
        let c = mu(&g).unwrap().as_so2n().unwrap();
        assert!((c.u1 - 2.0).abs() < 1e-10);
        assert!((c.u2 - 1.0).abs() < 1e-10);
    }

    #[test]
    fn mu_recovers_kak() {
        let n = 5;
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let k1 = random_compact_so2n(n, &mut rng, 1.0);
            let k2 = random_compact_so2n(n, &mut rng, 1.0);
            let a = chamber_matrix_so2n(n, 2.0, 1.0);
            let g = GroupElement { ambient: Ambient::So2n { n }, g: &k1 * a * &k2 };
            assert!(g.invariant_defect() < 1e-9);
            let c = mu(&g).unwrap().as_so2n().unwrap();
            assert!((c.u1 - 2.0).abs() < 1e-8, "u1 = {}", c.u1);
            assert!((c.u2 - 1.0).abs() < 1e-8, "u2 = {}", c.u2);
        }
    }

    #[test]
    fn mu_rejects_non_group_matrix() {
        let n = 3;
        let g = GroupElement { ambient: Ambient::So2n { n }, g: DMatrix::identity(5, 5) * 2.0 };
        assert!(mu(&g).is_err());
    }

    #[test]
    fn rho_norm_examples() {
        assert_eq!(rho_norm(&ChamberPoint::new(0.0, 0.0)), 0.0);
        // Independent oracle: operator norm of the wedge square of
        // diag(2, 1.5, 1, ..., 1/1.5, 1/2) is the max pairwise product.
        let diag: Vec<f64> = vec![2.0, 1.5, 1.0, 1.0, 1.0 / 1.5, 0.5];
        let mut best: f64 = 0.0;
        for i in 0..diag.len() {
            for j in (i + 1)..diag.len() {
                best = best.max(diag[i] * diag[j]);
            }
        }
        let c = ChamberPoint::new(2.0f64.ln(), 1.5f64.ln());
        assert!((rho_norm(&c) - best.ln()).abs() < 1e-15);
        assert!((best - 3.0).abs() < 1e-15);
        // Monotone in each coordinate.
        assert!(rho_norm(&ChamberPoint::new(2.0, 1.0)) > rho_norm(&ChamberPoint::new(1.5, 1.0)));
        assert!(rho_norm(&ChamberPoint::new(2.0, 1.0)) > rho_norm(&ChamberPoint::new(2.0, 0.5)));
    }

    #[test]
    fn cds_criterion_cases() {
        // Points on the wall u2 = 0 only: thin.
        let wall: Vec<ChamberPoint> =
            (1..40).map(|i| ChamberPoint::new(i as f64, 0.0)).collect();
        assert_eq!(cds_criterion(&wall, &CdsConfig::default()).unwrap(), CdsOutcome::Thin);
        // All bins hit in all annuli: fills.
        let mut full = Vec::new();
        for a in 0..6 {
            let r = 1.5 * 2f64.powi(a);
            for b in 0..8 {
                let frac = (b as f64 + 0.5) / 8.0;
                full.push(ChamberPoint::new(r, r * frac));
            }
        }
        assert_eq!(cds_criterion(&full, &CdsConfig::default()).unwrap(), CdsOutcome::Fills);
        // Too few points: insufficient data.
        let few = vec![ChamberPoint::new(1.0, 0.5); 3];
        assert!(cds_criterion(&few, &CdsConfig::default()).is_err());
    }

    #[test]
    fn opposition_involution_examples() {
        let fixed = SL3ChamberPoint::new(2.0, 0.0, -2.0);
        let i = opposition_involution(&fixed);
        assert_eq!((i.v1, i.v2, i.v3), (2.0, 0.0, -2.0));

        let c = SL3ChamberPoint::new(4f64.ln(), 2f64.ln(), (1.0 / 8.0f64).ln());
        let i = opposition_involution(&c);
        assert!((i.v1 - 8f64.ln()).abs() < 1e-15);
        assert!((i.v2 + 2f64.ln()).abs() < 1e-15);
        assert!((i.v3 + 4f64.ln()).abs() < 1e-15);

        let ii = opposition_involution(&i);
        assert_eq!((ii.v1, ii.v2, ii.v3), (c.v1, c.v2, c.v3));
    }

    #[test]
    fn bplus_distance_examples() {
        assert!(bplus_distance(&SL3ChamberPoint::new(3.0, 0.0, -3.0)) < 1e-15);
        let c = SL3ChamberPoint::new(4f64.ln(), 2f64.ln(), (1.0 / 8.0f64).ln());
        // Independent oracle: grid search over the ray parameter.
        let mut best = f64::INFINITY;
        let mut s = 0.0;
        while s < 10.0 {
            let d = ((c.v1 - s).powi(2) + c.v2 * c.v2 + (c.v3 + s).powi(2)).sqrt();
            best = best.min(d);
            s += 1e-5;
        }
        assert!((bplus_distance(&c) - best).abs() < 1e-4);
        // i(c) is equidistant from the fixed ray.
        let i = opposition_involution(&c);
        assert!((bplus_distance(&c) - bplus_distance(&i)).abs() < 1e-12);
    }

    #[test]
    fn mu_sl3_basics() {
        let id = GroupElement::identity(Ambient::Sl3);
        let c = mu(&id).unwrap().as_sl3().unwrap();
        assert!(c.norm() < 1e-12);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let k1 = random_compact_sl3(&mut rng, 1.0);
        let k2 = random_compact_sl3(&mut rng, 1.0);
        let a = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![
            2.0f64.exp(),
            1.0,
            (-2.0f64).exp(),
        ]));
        let g = GroupElement { ambient: Ambient::Sl3, g: k1 * a * k2 };
        let c = mu(&g).unwrap().as_sl3().unwrap();
        assert!((c.v1 - 2.0).abs() < 1e-9);
        assert!(c.v2.abs() < 1e-9);
        assert!((c.v3 + 2.0).abs() < 1e-9);
    }
}

//! The executable case analysis: structural type of a subalgebra of a+n,
//! stabilizer-type recognition, block-conjugacy of deformation matrices,
//! the characteristic index, and the compact-quotient verdict.
//!
//! All structural decisions here are exact: kernels, spans, and the
//! quantified rank conditions are settled in rational arithmetic (Sturm
//! sequences for spectral questions), so a verdict never flips with a
//! tolerance change.

use crate::catalog::{nil_coords, root_space_basis, Subalgebra};
use crate::error::{Error, Result};
use crate::lie::{
    an_element, exp_nilpotent_exact, AlgElement, Ambient, ANCoords, Root, POSITIVE_ROOTS,
};
use crate::rat::{
    coords_in_span, in_span, independent_subset, lagrange_interpolate, rat, rat_i, rat_to_f64,
    Rat, RatMat, RatPoly,
};
use nalgebra::DMatrix;
use num_traits::{One, Signed, Zero};

/// Stable taxonomy codes for the structural types.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TypeLabel {
    T25_1,
    T25_2,
    T25_3,
    T25_4,
    T26_1,
    T26_2,
    T26_3,
    T26_4,
    T26_5,
    T26_6,
    T26_7,
    T29_1,
    T29_2,
    T29_3,
    T29_4,
    T29_5,
    T29_6,
    T29_7,
    T29_8,
    P210,
    Cds,
    IncompatibleUnresolved,
}

impl TypeLabel {
    pub fn as_str(&self) -> &'static str {
        match self {
            TypeLabel::T25_1 => "T2.5-1",
            TypeLabel::T25_2 => "T2.5-2",
            TypeLabel::T25_3 => "T2.5-3",
            TypeLabel::T25_4 => "T2.5-4",
            TypeLabel::T26_1 => "T2.6-1",
            TypeLabel::T26_2 => "T2.6-2",
            TypeLabel::T26_3 => "T2.6-3",
            TypeLabel::T26_4 => "T2.6-4",
            TypeLabel::T26_5 => "T2.6-5",
            TypeLabel::T26_6 => "T2.6-6",
            TypeLabel::T26_7 => "T2.6-7",
            TypeLabel::T29_1 => "T2.9-1",
            TypeLabel::T29_2 => "T2.9-2",
            TypeLabel::T29_3 => "T2.9-3",
            TypeLabel::T29_4 => "T2.9-4",
            TypeLabel::T29_5 => "T2.9-5",
            TypeLabel::T29_6 => "T2.9-6",
            TypeLabel::T29_7 => "T2.9-7",
            TypeLabel::T29_8 => "T2.9-8",
            TypeLabel::P210 => "P2.10",
            TypeLabel::Cds => "CDS",
            TypeLabel::IncompatibleUnresolved => "incompatible-unresolved",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        use TypeLabel::*;
        Ok(match s {
            "T2.5-1" => T25_1,
            "T2.5-2" => T25_2,
            "T2.5-3" => T25_3,
            "T2.5-4" => T25_4,
            "T2.6-1" => T26_1,
            "T2.6-2" => T26_2,
            "T2.6-3" => T26_3,
            "T2.6-4" => T26_4,
            "T2.6-5" => T26_5,
            "T2.6-6" => T26_6,
            "T2.6-7" => T26_7,
            "T2.9-1" => T29_1,
            "T2.9-2" => T29_2,
            "T2.9-3" => T29_3,
            "T2.9-4" => T29_4,
            "T2.9-5" => T29_5,
            "T2.9-6" => T29_6,
            "T2.9-7" => T29_7,
            "T2.9-8" => T29_8,
            "P2.10" | "T2.6-8" => P210,
            "CDS" => Cds,
            "incompatible-unresolved" => IncompatibleUnresolved,
            other => return Err(Error::UnknownLabel(other.to_string())),
        })
    }
}

impl std::fmt::Display for TypeLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Extracted parameters accompanying a type verdict.
#[derive(Clone, Debug, Default)]
pub struct VerdictParams {
    /// Growth rate (T2.5-1) or the kernel parameter p (P2.10, stabilizer p).
    pub p: Option<Rat>,
    pub omega: Option<Root>,
    pub gamma: Option<Root>,
    /// One-dimensional torus direction when the type carries one.
    pub torus: Option<(Rat, Rat)>,
    /// Basis of X0 for the stabilizer types.
    pub x0: Option<Vec<Vec<Rat>>>,
    pub b_vec: Option<Vec<Rat>>,
    pub c_vec: Option<Vec<Rat>>,
}

#[derive(Clone, Debug)]
pub struct TypeVerdict {
    pub label: TypeLabel,
    pub params: VerdictParams,
    pub flags: Vec<String>,
}

impl TypeVerdict {
    fn plain(label: TypeLabel) -> Self {
        TypeVerdict { label, params: VerdictParams::default(), flags: vec![] }
    }

    /// JSON with the stable field names `label` and `params`.
    pub fn to_json(&self) -> serde_json::Value {
        let mut params = serde_json::Map::new();
        if let Some(p) = &self.params.p {
            params.insert("p".into(), json_rat(p));
        }
        if let Some(o) = self.params.omega {
            params.insert("omega".into(), serde_json::Value::String(o.name().into()));
        }
        if let Some(g) = self.params.gamma {
            params.insert("gamma".into(), serde_json::Value::String(g.name().into()));
        }
        if let Some((t1, t2)) = &self.params.torus {
            params.insert(
                "torus".into(),
                serde_json::Value::Array(vec![json_rat(t1), json_rat(t2)]),
            );
        }
        if let Some(x0) = &self.params.x0 {
            params.insert(
                "x0_basis".into(),
                serde_json::Value::Array(
                    x0.iter()
                        .map(|v| serde_json::Value::Array(v.iter().map(json_rat).collect()))
                        .collect(),
                ),
            );
        }
        if let Some(b) = &self.params.b_vec {
            params.insert(
                "b".into(),
                serde_json::Value::Array(b.iter().map(json_rat).collect()),
            );
        }
        if let Some(c) = &self.params.c_vec {
            params.insert(
                "c".into(),
                serde_json::Value::Array(c.iter().map(json_rat).collect()),
            );
        }
        serde_json::json!({
            "label": self.label.as_str(),
            "params": serde_json::Value::Object(params),
            "flags": self.flags,
        })
    }
}

fn json_rat(r: &Rat) -> serde_json::Value {
    serde_json::json!({ "exact": r.to_string(), "value": rat_to_f64(r) })
}

/// Rule tags used in verdict justifications; the README documents the table.
pub mod rules {
    pub const TRIVIAL: &str = "trivial-subgroup";
    pub const FULL_BOREL: &str = "full-borel";
    pub const CDS_NO_FORM: &str = "cds-calabi-markus";
    pub const UNIPOTENT: &str = "unipotent-excluded";
    pub const ONE_PARAM: &str = "one-parameter-excluded";
    pub const LINEAR_BOUND: &str = "linear-window-dim-bound";
    pub const QUADRATIC_BOUND: &str = "quadratic-window-dim-bound";
    pub const STAB_EVEN: &str = "stabilizer-form-even";
    pub const STAB_ODD: &str = "stabilizer-form-odd";
    pub const DEFORM_EVEN: &str = "deformation-family-even";
    pub const SU_CONJ: &str = "su-deformation-conjectural";
    pub const SU_ASSUMED: &str = "su-deformation-assumed";
    pub const L5_EXCLUDED: &str = "five-dim-rep-excluded";
    pub const NESTING: &str = "window-nesting-three-halves";
    pub const BPLUS: &str = "bplus-filling";
    pub const RANK_GUARD: &str = "full-torus-rank-guard";
}

/// Compact-quotient verdicts.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub enum CkOutcome {
    HasCompactForm,
    NoCompactForm,
    #[serde(rename = "ConjecturalNo-SU1m")]
    ConjecturalNoSu1m,
    HCompact,
    GmodHCompact,
    Inconclusive,
}

#[derive(Clone, Debug, serde::Serialize)]
pub struct CKVerdict {
    pub verdict: CkOutcome,
    pub justification: Vec<String>,
}

impl CKVerdict {
    fn new(verdict: CkOutcome, justification: Vec<&str>) -> Self {
        CKVerdict { verdict, justification: justification.iter().map(|s| s.to_string()).collect() }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "verdict": serde_json::to_value(self.verdict).unwrap(),
            "justification": self.justification,
        })
    }
}

/// Result of splitting h against the torus: the a-projection, h cap n, and
/// the compatibility flag.
#[derive(Clone, Debug)]
pub struct SplitInfo {
    pub torus: Vec<(Rat, Rat)>,
    pub h_cap_n: Vec<AlgElement>,
    pub h_cap_a: Vec<(Rat, Rat)>,
    pub semidirect: bool,
    pub compatible: bool,
}

/// Exact splitting and compatibility data for a subalgebra of a+n.
pub fn split_and_compatibility(h: &Subalgebra) -> Result<SplitInfo> {
    match h.ambient {
        Ambient::So2n { .. } => {}
        Ambient::Sl3 => {
            return Err(Error::UnsupportedInput("splitting applies to so(2,n) only".to_string()))
        }
    }
    if !h.info().in_an {
        return Err(Error::UnsupportedInput("subalgebra is not inside a+n".to_string()));
    }
    let info = h.info();
    Ok(SplitInfo {
        torus: info.a_proj.clone(),
        h_cap_n: info.h_cap_n.clone(),
        h_cap_a: info.h_cap_a.clone(),
        semidirect: info.semidirect,
        compatible: info.compatible,
    })
}

/// Outcome of normalization towards a representative compatible with A.
#[derive(Clone, Debug)]
pub struct NormalizeResult {
    pub subalgebra: Subalgebra,
    /// Exact conjugator in N (identity when unchanged).
    pub conjugator: RatMat,
    /// False when the input could not be normalized (it is then flagged
    /// rather than classified).
    pub resolved: bool,
    pub changed: bool,
}

/// Search for Z in n with Ad(exp Z) h compatible with A. The solve runs
/// root-by-root in increasing height and is exact; already-compatible input
/// is returned unchanged.
pub fn normalize_compatible(h: &Subalgebra) -> NormalizeResult {
    let n = match h.ambient {
        Ambient::So2n { n } => n,
        Ambient::Sl3 => {
            return NormalizeResult {
                subalgebra: h.clone(),
                conjugator: RatMat::identity(3),
                resolved: false,
                changed: false,
            }
        }
    };
    let size = n + 2;
    let identity = RatMat::identity(size);
    if !h.info().in_an || !h.info().closed {
        return NormalizeResult {
            subalgebra: h.clone(),
            conjugator: identity,
            resolved: false,
            changed: false,
        };
    }
    if h.info().compatible {
        return NormalizeResult {
            subalgebra: h.clone(),
            conjugator: identity,
            resolved: true,
            changed: false,
        };
    }
    // Heights order alpha, beta < alpha+beta < alpha+2beta.
    let height_order = [Root::Alpha, Root::Beta, Root::AlphaBeta, Root::Alpha2Beta];
    let mut current = h.clone();
    let mut conj = identity.clone();
    for root in height_order {
        // Representatives of h mod (h cap n) with their a-parts.
        let reps = torus_complement(&current);
        if reps.is_empty() {
            break; // h inside n: already compatible
        }
        // Unknown Z_root: solve  root(tau_j) * z = defect_j  for all reps.
        let dim_u = root_space_basis(n, root).len();
        let mut z = vec![Rat::zero(); dim_u];
        let mut consistent = true;
        let mut have = false;
        for (tau, rep) in &reps {
            let c = root.eval(&tau.0, &tau.1);
            let defect = root_component_vec(rep, root);
            if c.is_zero() {
                // This root lies in the centralizer of tau: defect is allowed.
                continue;
            }
            let cand: Vec<Rat> = defect.iter().map(|d| d / &c).collect();
            if have {
                if cand != z {
                    consistent = false;
                    break;
                }
            } else {
                z = cand;
                have = true;
            }
        }
        if !consistent {
            return NormalizeResult {
                subalgebra: current,
                conjugator: conj,
                resolved: false,
                changed: true,
            };
        }
        if !have || z.iter().all(|v| v.is_zero()) {
            continue;
        }
        // Conjugate by exp(Z_root).
        let mut zc = ANCoords::zero(n);
        match root {
            Root::Alpha => zc.phi = z[0].clone(),
            Root::Alpha2Beta => zc.eta = z[0].clone(),
            Root::Beta => zc.y = z,
            Root::AlphaBeta => zc.x = z,
        }
        let zel = an_element(n, &zc).expect("valid coords");
        let g = exp_nilpotent_exact(&zel.mat).expect("nilpotent");
        let g_inv = exp_nilpotent_exact(&zel.mat.neg()).expect("nilpotent");
        current = match current.conjugate(&g, &g_inv) {
            Ok(c) => c,
            Err(_) => {
                return NormalizeResult {
                    subalgebra: current,
                    conjugator: conj,
                    resolved: false,
                    changed: true,
                }
            }
        };
        conj = g.mul(&conj);
    }
    let resolved = current.info().compatible;
    let changed = !conj.sub(&identity).is_zero();
    NormalizeResult { subalgebra: current, conjugator: conj, resolved, changed }
}

/// One representative of h per torus-projection direction, paired with its
/// a-part, after reducing nilpotent parts mod (h cap n).
fn torus_complement(h: &Subalgebra) -> Vec<((Rat, Rat), AlgElement)> {
    let info = h.info();
    if info.a_proj.is_empty() {
        return vec![];
    }
    let mut out = Vec::new();
    let mut seen: Vec<Vec<Rat>> = Vec::new();
    for e in &h.basis {
        let c = e.coords.as_ref().unwrap();
        let a = vec![c.t1.clone(), c.t2.clone()];
        if a.iter().all(|v| v.is_zero()) {
            continue;
        }
        if in_span(&seen, &a) {
            continue;
        }
        seen.push(a);
        out.push(((c.t1.clone(), c.t2.clone()), e.clone()));
        if out.len() == info.a_proj.len() {
            break;
        }
    }
    out
}

fn root_component_vec(e: &AlgElement, root: Root) -> Vec<Rat> {
    let c = e.coords.as_ref().unwrap();
    match root {
        Root::Alpha => vec![c.phi.clone()],
        Root::Beta => c.y.clone(),
        Root::AlphaBeta => c.x.clone(),
        Root::Alpha2Beta => vec![c.eta.clone()],
    }
}

/// Decision of the quantified rank-one condition on a pair space.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum RankOne {
    Exists,
    None,
    Undecided,
}

/// The (x, y) pair data of a nilpotent-part basis.
struct PairSpace {
    /// Basis (x_i, y_i) of the projection to pair space.
    xs: Vec<Vec<Rat>>,
    ys: Vec<Vec<Rat>>,
    /// Dimension of the kernel of the pair projection on the input span.
    kernel_dim: usize,
}

fn pair_space(u_basis: &[AlgElement]) -> PairSpace {
    let rows: Vec<Vec<Rat>> = u_basis
        .iter()
        .map(|e| {
            let c = e.coords.as_ref().unwrap();
            let mut v = c.x.clone();
            v.extend(c.y.iter().cloned());
            v
        })
        .collect();
    let indep = independent_subset(&rows);
    let kernel_dim = u_basis.len() - indep.len();
    let half = rows.first().map(|r| r.len() / 2).unwrap_or(0);
    let xs = indep.iter().map(|r| r[..half].to_vec()).collect();
    let ys = indep.iter().map(|r| r[half..].to_vec()).collect();
    PairSpace { xs, ys, kernel_dim }
}

/// Does the pair span contain a nonzero (x, y) with dim<x, y> = 1?
///
/// Exact in the graph cases (real-eigenvalue absence by Sturm; generalized
/// pencils by minor interpolation). Falls back to sphere sampling with exact
/// verification only when the pencil is too large, reporting Undecided rather
/// than guessing.
fn rank_one_status(ps: &PairSpace) -> RankOne {
    let k = ps.xs.len();
    if k == 0 {
        return RankOne::None;
    }
    // A pair with x = 0 but y != 0 (or vice versa) is already rank one.
    let xmat = RatMat::from_rows(ps.xs.clone()).transpose(); // (n-2) x k
    let ymat = RatMat::from_rows(ps.ys.clone()).transpose();
    // Kernel of c -> x(c): if nontrivial, some nonzero pair has x = 0; its y
    // is nonzero because pair basis vectors are independent.
    if !xmat.nullspace().is_empty() {
        return RankOne::Exists;
    }
    if !ymat.nullspace().is_empty() {
        return RankOne::Exists;
    }
    // Graph case: x-coordinates are an independent family; look for c != 0 and
    // lambda real with  Y c = lambda X c.
    // W = { c : Y c in col(X) }.
    let left_null = xmat.transpose().nullspace(); // rows r with r^T X = 0
    let w_basis: Vec<Vec<Rat>> = if left_null.is_empty() {
        (0..k)
            .map(|i| (0..k).map(|j| if i == j { Rat::one() } else { Rat::zero() }).collect())
            .collect()
    } else {
        let r = RatMat::from_rows(left_null); // m x (n-2)
        let ry = r.mul(&ymat); // m x k
        ry.nullspace()
    };
    let w = w_basis.len();
    if w == 0 {
        return RankOne::None;
    }
    // M_W: coordinates of Y z_j in the column space of X.
    let xcols: Vec<Vec<Rat>> = (0..k).map(|j| xmat.col(j)).collect();
    let mut mw_cols = Vec::new();
    for zb in &w_basis {
        let yz = ymat.matvec(zb);
        let coords = coords_in_span(&xcols, &yz).expect("Y z in col(X) by construction");
        mw_cols.push(coords);
    }
    let mw = RatMat::from_rows(mw_cols).transpose(); // k x w
    let zmat = RatMat::from_rows(w_basis.clone()).transpose(); // k x w
    // Pencil P(lambda) = M_W - lambda Z: rank drop at a real lambda gives a
    // rank-one pair.
    let comb = binomial(k, w);
    if comb > 3000 {
        return rank_one_sampling(ps, &w_basis, &xmat, &ymat);
    }
    // All w x w minors as polynomials in lambda, by interpolation.
    let subsets = k_subsets(k, w);
    let mut g: Option<RatPoly> = None;
    let mut all_zero = true;
    for rows in &subsets {
        let poly = pencil_minor_poly(&mw, &zmat, rows);
        if poly.is_zero() {
            continue;
        }
        all_zero = false;
        g = Some(match g {
            None => poly,
            Some(prev) => prev.gcd(&poly),
        });
        if let Some(p) = &g {
            if p.degree() == 0 {
                return RankOne::None; // minors have no common root at all
            }
        }
    }
    if all_zero {
        // rank < w for every lambda: a kernel vector exists for lambda = 0.
        return RankOne::Exists;
    }
    let g = g.unwrap();
    if g.count_real_roots() > 0 {
        RankOne::Exists
    } else {
        RankOne::None
    }
}

fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let mut r: usize = 1;
    for i in 0..k.min(n - k) {
        r = r.saturating_mul(n - i) / (i + 1);
    }
    r
}

fn k_subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.clone());
        // advance
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if idx[i] != i + n - k {
                break;
            }
            if i == 0 {
                return out;
            }
        }
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// det of (M - lambda Z) restricted to the given rows, as a polynomial in
/// lambda, computed by interpolation at w+1 integer nodes.
fn pencil_minor_poly(m: &RatMat, z: &RatMat, rows: &[usize]) -> RatPoly {
    let w = z.ncols();
    let mut points = Vec::with_capacity(w + 1);
    for node in 0..=w {
        let lam = rat_i(node as i64);
        let sub = RatMat::from_fn(w, w, |i, j| m.get(rows[i], j) - &lam * z.get(rows[i], j));
        points.push((lam, sub.det()));
    }
    lagrange_interpolate(&points)
}

/// Sphere-sampling fallback for oversized pencils: certify existence exactly
/// when a candidate is found, otherwise stay undecided.
fn rank_one_sampling(
    ps: &PairSpace,
    w_basis: &[Vec<Rat>],
    xmat: &RatMat,
    ymat: &RatMat,
) -> RankOne {
    use rand::Rng;
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x5eed);
    let xf = xmat.to_f64();
    let yf = ymat.to_f64();
    let w = w_basis.len();
    let k = ps.xs.len();
    let wb = RatMat::from_rows(w_basis.to_vec()).transpose().to_f64();
    for _ in 0..10_000 {
        let d: Vec<f64> = (0..w).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let c = &wb * DMatrix::from_vec(w, 1, d);
        let x = &xf * &c;
        let y = &yf * &c;
        // wedge norm between x and y
        let nx = x.norm();
        let ny = y.norm();
        if nx < 1e-9 {
            continue;
        }
        let dot = (x.transpose() * &y)[(0, 0)];
        let wedge2 = (nx * ny).powi(2) - dot * dot;
        if wedge2.abs() < 1e-18 * (1.0 + (nx * ny).powi(2)) && ny > 1e-9 {
            // Candidate lambda = |y|/|x| signed; verify exactly on a
            // rationalized direction.
            let lam = dot / (nx * nx);
            if let Some(lam_rat) = rational_reconstruct(lam, 1_000_000) {
                let _ = k;
                let test = ymat.sub(&xmat.scale(&lam_rat));
                if !test.nullspace().is_empty() {
                    return RankOne::Exists;
                }
            }
        }
    }
    RankOne::Undecided
}

/// Small-denominator rational reconstruction of a float (continued fractions).
fn rational_reconstruct(x: f64, max_den: i64) -> Option<Rat> {
    if !x.is_finite() {
        return None;
    }
    let (mut p0, mut q0, mut p1, mut q1) = (1i64, 0i64, x.floor() as i64, 1i64);
    let mut frac = x - x.floor();
    for _ in 0..40 {
        if (x - p1 as f64 / q1 as f64).abs() < 1e-12 {
            return Some(rat(p1, q1));
        }
        if frac.abs() < 1e-15 {
            break;
        }
        let r = 1.0 / frac;
        let a = r.floor() as i64;
        frac = r - r.floor();
        let p2 = a.checked_mul(p1)?.checked_add(p0)?;
        let q2 = a.checked_mul(q1)?.checked_add(q0)?;
        if q2 > max_den {
            break;
        }
        p0 = p1;
        q0 = q1;
        p1 = p2;
        q1 = q2;
    }
    if (x - p1 as f64 / q1 as f64).abs() < 1e-12 {
        Some(rat(p1, q1))
    } else {
        None
    }
}

/// Every nonzero pair has dim<x,y> = 1: the wedge quadrics vanish on the
/// span and the pair projection is injective.
fn all_rank_one(ps: &PairSpace) -> bool {
    if ps.kernel_dim > 0 || ps.xs.is_empty() {
        return false;
    }
    let k = ps.xs.len();
    let wedge_vanishes = |x: &[Rat], y: &[Rat]| -> bool {
        for i in 0..x.len() {
            for j in (i + 1)..x.len() {
                if !(&x[i] * &y[j] - &x[j] * &y[i]).is_zero() {
                    return false;
                }
            }
        }
        true
    };
    for i in 0..k {
        if !wedge_vanishes(&ps.xs[i], &ps.ys[i]) {
            return false;
        }
        for j in (i + 1)..k {
            let xs: Vec<Rat> = ps.xs[i].iter().zip(&ps.xs[j]).map(|(a, b)| a + b).collect();
            let ys: Vec<Rat> = ps.ys[i].iter().zip(&ps.ys[j]).map(|(a, b)| a + b).collect();
            if !wedge_vanishes(&xs, &ys) {
                return false;
            }
        }
    }
    true
}

/// Stabilizer-type data (X0, b, c, p) solving y = 0, x in phi c + X0,
/// eta = p phi + b.x exactly on a nilpotent span.
#[derive(Clone, Debug)]
pub struct StabilizerData {
    pub x0: Vec<Vec<Rat>>,
    pub b: Vec<Rat>,
    pub c: Vec<Rat>,
    pub p: Rat,
    /// True when no element carries phi, leaving p unconstrained.
    pub p_free: bool,
}

impl StabilizerData {
    pub fn sign_value(&self) -> Rat {
        let b2: Rat = self.b.iter().map(|v| v * v).sum();
        let c2: Rat = self.c.iter().map(|v| v * v).sum();
        b2 - c2 - rat_i(2) * &self.p
    }
}

/// Solve for the stabilizer-type data on a nilpotent basis; exact, None when
/// the linear system has no solution (or y does not vanish).
fn stabilizer_data(u_basis: &[AlgElement]) -> Option<StabilizerData> {
    if u_basis.is_empty() {
        return Some(StabilizerData {
            x0: vec![],
            b: vec![],
            c: vec![],
            p: rat_i(1),
            p_free: true,
        });
    }
    let coords: Vec<&ANCoords> = u_basis.iter().map(|e| e.coords.as_ref().unwrap()).collect();
    let dim_x = coords[0].x.len();
    if coords.iter().any(|c| c.y.iter().any(|v| !v.is_zero())) {
        return None;
    }
    // U0 = elements with phi = 0, as combinations of the basis.
    let phi_row = RatMat::from_rows(vec![coords.iter().map(|c| c.phi.clone()).collect()]);
    let u0_combos = phi_row.nullspace();
    let u0: Vec<(Vec<Rat>, Rat)> = u0_combos
        .iter()
        .map(|combo| {
            let mut x = vec![Rat::zero(); dim_x];
            let mut eta = Rat::zero();
            for (ci, c) in combo.iter().zip(&coords) {
                for (xi, v) in x.iter_mut().zip(&c.x) {
                    *xi = xi.clone() + ci * v;
                }
                eta += ci * &c.eta;
            }
            (x, eta)
        })
        .collect();
    let x0_basis = independent_subset(&u0.iter().map(|(x, _)| x.clone()).collect::<Vec<_>>());
    // Solve b in span(X0) with b . x_h = eta_h over U0.
    let kx = x0_basis.len();
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    for (x, eta) in &u0 {
        let row: Vec<Rat> =
            x0_basis.iter().map(|xi| xi.iter().zip(x).map(|(a, b)| a * b).sum()).collect();
        rows.push(row);
        rhs.push(eta.clone());
    }
    let b_coeffs: Vec<Rat> = if kx == 0 {
        // eta must vanish identically on U0.
        if rhs.iter().any(|e| !e.is_zero()) {
            return None;
        }
        vec![]
    } else {
        RatMat::from_rows(rows).solve(&rhs)?
    };
    let mut b = vec![Rat::zero(); dim_x];
    for (ci, xi) in b_coeffs.iter().zip(&x0_basis) {
        for (bv, xv) in b.iter_mut().zip(xi) {
            *bv = bv.clone() + ci * xv;
        }
    }
    // Verify the solve on every U0 element (solve() already guarantees it,
    // but a consistency recheck keeps the contract explicit).
    for (x, eta) in &u0 {
        let dot: Rat = b.iter().zip(x).map(|(a, v)| a * v).sum();
        if &dot != eta {
            return None;
        }
    }
    // An element with phi != 0 pins c and p.
    let phi_elt = coords.iter().find(|c| !c.phi.is_zero());
    match phi_elt {
        None => {
            // p is free; pick it large enough that the sign condition holds.
            let b2: Rat = b.iter().map(|v| v * v).sum();
            let p = b2 / rat_i(2) + rat_i(1);
            Some(StabilizerData { x0: x0_basis, b, c: vec![Rat::zero(); dim_x], p, p_free: true })
        }
        Some(c0) => {
            let inv = Rat::one() / c0.phi.clone();
            let x_star: Vec<Rat> = c0.x.iter().map(|v| v * &inv).collect();
            let eta_star = &c0.eta * &inv;
            // Orthogonal projection of x_star onto X0, exactly.
            let proj = project_onto(&x0_basis, &x_star)?;
            let c_vec: Vec<Rat> = x_star.iter().zip(&proj).map(|(a, b)| a - b).collect();
            let bx: Rat = b.iter().zip(&x_star).map(|(a, v)| a * v).sum();
            let p = eta_star - bx;
            Some(StabilizerData { x0: x0_basis, b, c: c_vec, p, p_free: false })
        }
    }
}

/// Exact orthogonal projection of v onto the span of the (independent) basis.
fn project_onto(basis: &[Vec<Rat>], v: &[Rat]) -> Option<Vec<Rat>> {
    if basis.is_empty() {
        return Some(vec![Rat::zero(); v.len()]);
    }
    let k = basis.len();
    let gram = RatMat::from_fn(k, k, |i, j| {
        basis[i].iter().zip(&basis[j]).map(|(a, b)| a * b).sum()
    });
    let rhs: Vec<Rat> =
        basis.iter().map(|bi| bi.iter().zip(v).map(|(a, b)| a * b).sum()).collect();
    let coef = gram.solve(&rhs)?;
    let mut out = vec![Rat::zero(); v.len()];
    for (ci, bi) in coef.iter().zip(basis) {
        for (o, bv) in out.iter_mut().zip(bi) {
            *o = o.clone() + ci * bv;
        }
    }
    Some(out)
}

/// Recognize the stabilizer type on h cap n (which must have y identically
/// zero): returns the exact data iff the linear system solves with zero
/// residual and the sign condition |b|^2 - |c|^2 - 2p < 0 holds.
pub fn recognize_so1n(h: &Subalgebra) -> Option<StabilizerData> {
    if !h.info().in_an {
        return None;
    }
    let data = stabilizer_data(&h.info().h_cap_n)?;
    if data.sign_value().is_negative() {
        Some(data)
    } else {
        None
    }
}

/// Growth rate of a one-parameter unipotent subgroup from the Jordan type of
/// its generator: the two largest singular-value exponents of exp(tX) are
/// k1 - 1 and max(k1 - 3, k2 - 1) for block sizes k1 >= k2.
fn one_param_rate(x: &AlgElement) -> Rat {
    if x.is_zero() {
        return rat_i(0);
    }
    let sizes = x.mat.nilpotent_block_sizes();
    let k1 = sizes[0];
    let k2 = sizes.get(1).copied().unwrap_or(1);
    if k1 < 2 {
        return rat_i(0);
    }
    let e1 = (k1 - 1) as i64;
    let e2 = (k1 as i64 - 3).max(k2 as i64 - 1).max(0);
    rat(e1 + e2, e1)
}

/// The structural type of a bracket-closed subalgebra of a+n.
pub fn classify_type(h: &Subalgebra) -> Result<TypeVerdict> {
    let n = match h.ambient {
        Ambient::So2n { n } => n,
        Ambient::Sl3 => {
            return Err(Error::UnsupportedInput(
                "type classification applies to so(2,n) subalgebras of a+n".to_string(),
            ))
        }
    };
    if !h.info().in_an {
        return Err(Error::UnsupportedInput("subalgebra is not inside a+n".to_string()));
    }
    if !h.info().closed {
        return Ok(TypeVerdict::plain(TypeLabel::IncompatibleUnresolved));
    }
    let info = h.info();
    // Rank guard: a full torus projection forces a Cartan-decomposition
    // subgroup (dim h - dim(h cap n) >= real rank).
    if info.a_proj.len() >= 2 {
        let mut v = TypeVerdict::plain(TypeLabel::Cds);
        v.flags.push(rules::RANK_GUARD.to_string());
        return Ok(v);
    }
    if info.a_proj.is_empty() {
        return classify_in_n(n, h);
    }
    let tau = info.a_proj[0].clone();
    if info.semidirect {
        classify_semidirect(n, h, &tau)
    } else {
        if !info.compatible {
            return Ok(TypeVerdict::plain(TypeLabel::IncompatibleUnresolved));
        }
        classify_mixed(n, h, &tau)
    }
}

/// Subalgebras of n.
fn classify_in_n(_n: usize, h: &Subalgebra) -> Result<TypeVerdict> {
    let dim = h.dim();
    if dim <= 1 {
        let mut v = TypeVerdict::plain(TypeLabel::T25_1);
        v.params.p = Some(if dim == 0 { rat_i(0) } else { one_param_rate(&h.basis[0]) });
        return Ok(v);
    }
    let phi_zero = h
        .basis
        .iter()
        .all(|e| e.coords.as_ref().unwrap().phi.is_zero());
    let ps = pair_space(&h.basis);
    if phi_zero {
        match rank_one_status(&ps) {
            RankOne::None => return Ok(TypeVerdict::plain(TypeLabel::T25_2)),
            RankOne::Exists => {
                if all_rank_one(&ps) {
                    return Ok(TypeVerdict::plain(TypeLabel::T25_3));
                }
            }
            RankOne::Undecided => {
                let mut v = TypeVerdict::plain(TypeLabel::Cds);
                v.flags.push("rank-one-test-inconclusive".to_string());
                return Ok(v);
            }
        }
    }
    if let Some(data) = stabilizer_data(&h.basis) {
        if data.sign_value().is_negative() {
            let mut v = TypeVerdict::plain(TypeLabel::T25_4);
            v.params.p = Some(data.p.clone());
            v.params.b_vec = Some(data.b.clone());
            v.params.c_vec = Some(data.c.clone());
            v.params.x0 = Some(data.x0.clone());
            if data.p_free {
                v.flags.push("p-free".to_string());
            }
            return Ok(v);
        }
    }
    Ok(TypeVerdict::plain(TypeLabel::Cds))
}

/// Semidirect h = (h cap a) + (h cap n) with one torus direction.
fn classify_semidirect(_n: usize, h: &Subalgebra, tau: &(Rat, Rat)) -> Result<TypeVerdict> {
    let info = h.info();
    let u = &info.h_cap_n;
    if u.is_empty() {
        let mut v = TypeVerdict::plain(TypeLabel::T26_1);
        v.params.torus = Some(tau.clone());
        return Ok(v);
    }
    let alpha_val = Root::Alpha.eval(&tau.0, &tau.1);
    let beta_val = Root::Beta.eval(&tau.0, &tau.1);
    let ab_val = Root::AlphaBeta.eval(&tau.0, &tau.1);
    let amb_val = &tau.0 - rat_i(2) * &tau.1; // alpha - beta
    let phi_zero = u.iter().all(|e| e.coords.as_ref().unwrap().phi.is_zero());
    let y_zero = u
        .iter()
        .all(|e| e.coords.as_ref().unwrap().y.iter().all(|v| v.is_zero()));
    let x_zero = u
        .iter()
        .all(|e| e.coords.as_ref().unwrap().x.iter().all(|v| v.is_zero()));
    let ps = pair_space(u);

    if alpha_val.is_zero() && phi_zero {
        match rank_one_status(&ps) {
            RankOne::None => {
                let mut v = TypeVerdict::plain(TypeLabel::T26_2);
                v.params.torus = Some(tau.clone());
                return Ok(v);
            }
            RankOne::Undecided => {
                let mut v = TypeVerdict::plain(TypeLabel::Cds);
                v.flags.push("rank-one-test-inconclusive".to_string());
                return Ok(v);
            }
            RankOne::Exists => {}
        }
    }
    if beta_val.is_zero() {
        // ker(beta) family: the aligned x-space type, the stabilizer type,
        // then the dim-2 nondegenerate-quadratic type.
        if phi_zero && y_zero {
            // x must be nonzero on every nonzero element: no eta-only kernel.
            let x_rows: Vec<Vec<Rat>> =
                u.iter().map(|e| e.coords.as_ref().unwrap().x.clone()).collect();
            let x_rank = crate::rat::span_rank(&x_rows);
            if x_rank == u.len() {
                let mut v = TypeVerdict::plain(TypeLabel::T26_3);
                v.params.torus = Some(tau.clone());
                return Ok(v);
            }
        }
        if let Some(data) = stabilizer_data(u) {
            if data.sign_value().is_negative() {
                let mut v = TypeVerdict::plain(TypeLabel::T26_5);
                v.params.torus = Some(tau.clone());
                v.params.p = Some(data.p.clone());
                v.params.b_vec = Some(data.b.clone());
                v.params.c_vec = Some(data.c.clone());
                v.params.x0 = Some(data.x0.clone());
                if data.p_free {
                    v.flags.push("p-free".to_string());
                }
                return Ok(v);
            }
        }
        if h.dim() == 2 && y_zero {
            let c = u[0].coords.as_ref().unwrap();
            let norm_x: Rat = c.x.iter().map(|v| v * v).sum();
            let quad = norm_x + rat_i(2) * &c.phi * &c.eta;
            if !quad.is_zero() {
                let mut v = TypeVerdict::plain(TypeLabel::T26_7);
                v.params.torus = Some(tau.clone());
                // The group-level and algebra-level statements of the
                // quadratic condition agree on a 2-dimensional span, but the
                // equivalence is only checked at the algebra level here.
                v.flags.push("quadratic-checked-on-algebra".to_string());
                return Ok(v);
            }
        }
    }
    if ab_val.is_zero() && phi_zero && x_zero {
        // ker(alpha+beta) over a y-space; y nonzero on every nonzero element.
        let y_rows: Vec<Vec<Rat>> =
            u.iter().map(|e| e.coords.as_ref().unwrap().y.clone()).collect();
        let y_rank = crate::rat::span_rank(&y_rows);
        if y_rank == u.len() {
            let mut v = TypeVerdict::plain(TypeLabel::T26_4);
            v.params.torus = Some(tau.clone());
            return Ok(v);
        }
    }
    if amb_val.is_zero() && h.dim() == 2 {
        let c = u[0].coords.as_ref().unwrap();
        let phi_nonzero = !c.phi.is_zero();
        let y_nonzero = c.y.iter().any(|v| !v.is_zero());
        let x_zero0 = c.x.iter().all(|v| v.is_zero());
        let eta_zero = c.eta.is_zero();
        if phi_nonzero && y_nonzero && x_zero0 && eta_zero {
            let mut v = TypeVerdict::plain(TypeLabel::T26_6);
            v.params.torus = Some(tau.clone());
            return Ok(v);
        }
    }
    // Single-root-space case: Prop-2.10 keying.
    if let Some(omega) = single_root_support(u) {
        let omega_val = omega.eval(&tau.0, &tau.1);
        if omega_val.is_zero() {
            // t = ker(omega): Cartan-decomposition subgroup.
            let mut v = TypeVerdict::plain(TypeLabel::Cds);
            v.params.omega = Some(omega);
            v.flags.push("kernel-of-omega".to_string());
            return Ok(v);
        }
        let gamma = omega.perpendicular();
        let p = -(gamma.eval(&tau.0, &tau.1) / omega_val);
        if p.abs() >= rat_i(1) {
            let mut v = TypeVerdict::plain(TypeLabel::Cds);
            v.params.omega = Some(omega);
            v.params.gamma = Some(gamma);
            v.params.p = Some(p);
            v.flags.push("p-at-least-one".to_string());
            return Ok(v);
        }
        let mut v = TypeVerdict::plain(TypeLabel::P210);
        v.params.omega = Some(omega);
        v.params.gamma = Some(gamma);
        v.params.p = Some(p);
        v.params.torus = Some(tau.clone());
        return Ok(v);
    }
    Ok(TypeVerdict::plain(TypeLabel::Cds))
}

/// The root space containing u, when u is supported on exactly one.
fn single_root_support(u: &[AlgElement]) -> Option<Root> {
    let mut support = Vec::new();
    for root in POSITIVE_ROOTS {
        let nonzero = u.iter().any(|e| {
            root_component_vec(e, root).iter().any(|v| !v.is_zero())
        });
        if nonzero {
            support.push(root);
        }
    }
    if support.len() == 1 {
        Some(support[0])
    } else {
        None
    }
}

/// Non-semidirect (but compatible) case: h = x + (h cap n) with the line x
/// inside ker(omega) + u_omega.
fn classify_mixed(n: usize, h: &Subalgebra, tau: &(Rat, Rat)) -> Result<TypeVerdict> {
    let info = h.info();
    let u = &info.h_cap_n;
    // The unique positive root vanishing on tau.
    let omega = POSITIVE_ROOTS.iter().copied().find(|r| r.eval(&tau.0, &tau.1).is_zero());
    let Some(omega) = omega else {
        // No root vanishes on tau, so a compatible h would be semidirect.
        return Ok(TypeVerdict::plain(TypeLabel::IncompatibleUnresolved));
    };
    // The mixed generator must reduce into u_omega modulo h cap n.
    let reps = torus_complement(h);
    let (_, h0) = &reps[0];
    let c0 = h0.coords.as_ref().unwrap();
    let mut nil = c0.clone();
    nil.t1 = Rat::zero();
    nil.t2 = Rat::zero();
    let nil_el = an_element(n, &nil)?;
    let mut span: Vec<Vec<Rat>> = u.iter().map(|e| nil_coords(e, n)).collect();
    for g in root_space_basis(n, omega) {
        span.push(nil_coords(&g, n));
    }
    if !in_span(&span, &nil_coords(&nil_el, n)) {
        return Ok(TypeVerdict::plain(TypeLabel::IncompatibleUnresolved));
    }
    let gamma_pair = omega.perpendicular();
    let verdict = |label: TypeLabel, flags: Vec<String>| {
        let mut v = TypeVerdict::plain(label);
        v.params.omega = Some(omega);
        v.params.torus = Some(tau.clone());
        v.flags = flags;
        v
    };
    if u.is_empty() {
        // One-parameter mixed line: single-rate growth along the curve;
        // keyed with the matching two-sided item and flagged.
        let label = match omega {
            Root::Alpha => TypeLabel::T29_2,
            Root::Alpha2Beta => TypeLabel::T29_3,
            Root::Beta | Root::AlphaBeta => TypeLabel::T29_6,
        };
        return Ok(verdict(label, vec!["one-parameter-mixed".to_string()]));
    }
    let in_root = |root: Root| -> bool {
        u.iter().all(|e| {
            POSITIVE_ROOTS
                .iter()
                .filter(|r| **r != root)
                .all(|r| root_component_vec(e, *r).iter().all(|v| v.is_zero()))
        })
    };
    let in_two_roots = |r1: Root, r2: Root| -> bool {
        u.iter().all(|e| {
            POSITIVE_ROOTS
                .iter()
                .filter(|r| **r != r1 && **r != r2)
                .all(|r| root_component_vec(e, *r).iter().all(|v| v.is_zero()))
        })
    };
    /// dim of the intersection of span(u) with a root space.
    fn dim_in_root(u: &[AlgElement], root: Root) -> usize {
        // coefficients c with all off-root components of sum c_i u_i zero
        let rows: Vec<Vec<Rat>> = u
            .iter()
            .map(|e| {
                let mut v = Vec::new();
                for r in POSITIVE_ROOTS {
                    if r != root {
                        v.extend(root_component_vec(e, r));
                    }
                }
                v
            })
            .collect();
        RatMat::from_rows(rows).transpose().nullspace().len()
    }
    match omega {
        Root::Alpha => {
            if in_root(Root::AlphaBeta) {
                return Ok(verdict(TypeLabel::T29_1, vec![]));
            }
            if in_root(Root::Alpha2Beta) {
                return Ok(verdict(TypeLabel::T29_2, vec![]));
            }
        }
        Root::Alpha2Beta => {
            if in_root(Root::Alpha) {
                return Ok(verdict(TypeLabel::T29_3, vec![]));
            }
            if in_root(Root::Beta) || in_root(Root::AlphaBeta) {
                return Ok(verdict(TypeLabel::T29_4, vec![]));
            }
        }
        Root::Beta | Root::AlphaBeta => {
            // Item 7: h cap n is exactly the eta axis.
            if u.len() == 1 && in_root(Root::Alpha2Beta) {
                return Ok(verdict(TypeLabel::T29_7, vec![]));
            }
            // Item 8: omega = alpha+beta and h cap n = u_alpha.
            if omega == Root::AlphaBeta && u.len() == 1 && in_root(Root::Alpha) {
                return Ok(verdict(TypeLabel::T29_8, vec![]));
            }
            // Item 5: oblique inside u_omega + u_(alpha+2beta).
            if in_two_roots(omega, Root::Alpha2Beta)
                && dim_in_root(u, omega) == 0
                && dim_in_root(u, Root::Alpha2Beta) == 0
            {
                return Ok(verdict(
                    TypeLabel::T29_5,
                    vec!["oblique-normal-form-unspecified".to_string()],
                ));
            }
            // Item 6: inside u_gamma + u_(alpha+2beta) missing the eta axis.
            if in_two_roots(gamma_pair, Root::Alpha2Beta) && dim_in_root(u, Root::Alpha2Beta) == 0
            {
                let oblique = !in_root(gamma_pair);
                let flags = if oblique {
                    vec!["oblique-normal-form-unspecified".to_string()]
                } else {
                    vec![]
                };
                let mut v = verdict(TypeLabel::T29_6, flags);
                v.params.gamma = Some(gamma_pair);
                return Ok(v);
            }
        }
    }
    Ok(TypeVerdict::plain(TypeLabel::Cds))
}

/// Decision of block-diagonal conjugacy: yes iff the symmetric part of B is
/// scalar and the skew part S0 satisfies S0^T S0 = b^2 I with b != 0. The
/// witness is an orthonormal basis in which B takes the block form.
#[derive(Clone, Debug)]
pub enum SuDecision {
    Yes(SuWitness),
    No,
}

#[derive(Clone, Debug)]
pub struct SuWitness {
    pub a: Rat,
    pub b_squared: Rat,
    /// Orthonormal basis (columns) achieving the block form; floating.
    pub basis: DMatrix<f64>,
}

pub fn su_conjugacy(b: &RatMat) -> Result<SuDecision> {
    if !b.is_square() {
        return Err(Error::InvalidParams("matrix must be square".to_string()));
    }
    let k = b.nrows();
    if !k.is_multiple_of(2) || k == 0 {
        return Err(Error::InvalidParams(format!("size must be even and positive, got {k}")));
    }
    let half = rat(1, 2);
    let bt = b.transpose();
    let sym = b.add(&bt).scale(&half);
    let a = sym.get(0, 0).clone();
    let scalar_sym = sym.sub(&RatMat::identity(k).scale(&a)).is_zero();
    if !scalar_sym {
        return Ok(SuDecision::No);
    }
    let skew = b.sub(&bt).scale(&half);
    let gram = skew.transpose().mul(&skew);
    let b2 = gram.get(0, 0).clone();
    if b2.is_zero() {
        return Ok(SuDecision::No); // b must be nonzero
    }
    if !gram.sub(&RatMat::identity(k).scale(&b2)).is_zero() {
        return Ok(SuDecision::No);
    }
    // Witness: orthonormal basis v1, J v1, v3, J v3, ... for J = S0 / b.
    let bval = rat_to_f64(&b2).sqrt();
    let j = skew.to_f64() / bval;
    let mut cols: Vec<DMatrix<f64>> = Vec::new();
    while cols.len() < k {
        // Pick the coordinate direction with the largest residual.
        let mut best: Option<(f64, DMatrix<f64>)> = None;
        for i in 0..k {
            let mut v = DMatrix::<f64>::zeros(k, 1);
            v[(i, 0)] = 1.0;
            for c in &cols {
                let coef = (c.transpose() * &v)[(0, 0)];
                v -= c * coef;
            }
            let norm = v.norm();
            if best.as_ref().map(|(bn, _)| norm > *bn).unwrap_or(true) {
                best = Some((norm, v));
            }
        }
        let (norm, v) = best.unwrap();
        assert!(norm > 1e-8, "Gram-Schmidt degenerate");
        let v = v / norm;
        let jv = &j * &v;
        cols.push(v);
        cols.push(jv);
    }
    let mut basis = DMatrix::<f64>::zeros(k, k);
    for (i, c) in cols.iter().enumerate() {
        basis.set_column(i, &c.column(0));
    }
    Ok(SuDecision::Yes(SuWitness { a, b_squared: b2, basis }))
}

/// Structural invariants of the deformation family: center dimension of the
/// nilradical, the Heisenberg-times-abelian structure, and the isomorphism
/// criterion det(B^T - B) != 0.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub struct HbInvariants {
    pub center_dim: usize,
    pub heisenberg_x_abelian: bool,
    pub iso_to_hsu: bool,
}

pub fn hb_iso_invariants(b: &RatMat) -> HbInvariants {
    let diff = b.transpose().sub(b);
    let ker = diff.nullspace().len();
    HbInvariants { center_dim: 1 + ker, heisenberg_x_abelian: true, iso_to_hsu: ker == 0 }
}

/// Group tags for the characteristic index d(H) = dim H - dim K_H.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GroupTag {
    So2n { n: usize },
    So1n { n: usize },
    Su1m { m: usize },
    AnSubalgebra { dim: usize },
    L5,
    Sl3,
}

pub fn d_of(tag: GroupTag) -> usize {
    match tag {
        GroupTag::So2n { n } => 2 * n,
        GroupTag::So1n { n } => n,
        GroupTag::Su1m { m } => 2 * m,
        // AN has no nontrivial compact subgroups.
        GroupTag::AnSubalgebra { dim } => dim,
        GroupTag::L5 => 2,
        GroupTag::Sl3 => 5,
    }
}

/// Window class of a type label, used by the dimension bounds.
fn lower_linear(label: TypeLabel, params: &VerdictParams) -> bool {
    use TypeLabel::*;
    match label {
        T25_3 | T25_4 | T26_3 | T26_4 | T26_5 | T26_7 | T29_1 | T29_4 | T29_5 | T29_6 => true,
        P210 => matches!(params.omega, Some(Root::Beta) | Some(Root::AlphaBeta)),
        _ => false,
    }
}

fn upper_quadratic(label: TypeLabel, params: &VerdictParams) -> bool {
    use TypeLabel::*;
    match label {
        T25_2 | T26_2 | T29_2 | T29_3 | T29_7 | T29_8 => true,
        P210 => matches!(params.omega, Some(Root::Alpha) | Some(Root::Alpha2Beta)),
        _ => false,
    }
}

/// The compact-Clifford-Klein-form verdict for a subalgebra (so(2,n) inputs
/// must lie in a+n; sl(3,R) inputs must be upper triangular or a named
/// catalog entry).
pub fn ck_verdict(h: &Subalgebra, assume_su_conjecture: bool) -> Result<CKVerdict> {
    match h.ambient {
        Ambient::So2n { n } => ck_verdict_so2n(n, h, assume_su_conjecture),
        Ambient::Sl3 => ck_verdict_sl3(h),
    }
}

fn ck_verdict_so2n(n: usize, h: &Subalgebra, assume_su: bool) -> Result<CKVerdict> {
    if !h.info().in_an {
        return Err(Error::UnsupportedInput(
            "verdicts require a subalgebra of a+n (or a named catalog entry)".to_string(),
        ));
    }
    let dim = h.dim();
    if dim == 0 {
        return Ok(CKVerdict::new(CkOutcome::HCompact, vec![rules::TRIVIAL]));
    }
    if dim == 2 * n {
        return Ok(CKVerdict::new(CkOutcome::GmodHCompact, vec!["CDS", rules::FULL_BOREL]));
    }
    let v = classify_type(h)?;
    let label = v.label;
    let tag = label.as_str();
    if label == TypeLabel::IncompatibleUnresolved {
        return Ok(CKVerdict::new(CkOutcome::Inconclusive, vec![tag]));
    }
    if label == TypeLabel::Cds {
        return Ok(CKVerdict::new(CkOutcome::NoCompactForm, vec![tag, rules::CDS_NO_FORM]));
    }
    // Unipotent subgroups never admit a compact form.
    if h.info().a_proj.is_empty() {
        return Ok(CKVerdict::new(CkOutcome::NoCompactForm, vec![tag, rules::UNIPOTENT]));
    }
    if dim == 1 {
        return Ok(CKVerdict::new(CkOutcome::NoCompactForm, vec![tag, rules::ONE_PARAM]));
    }
    if label == TypeLabel::T26_6 {
        return Ok(CKVerdict::new(CkOutcome::NoCompactForm, vec![tag, rules::L5_EXCLUDED]));
    }
    let even = n.is_multiple_of(2);
    let quad_threshold = 2 * (n / 2);
    if lower_linear(label, &v.params) {
        if label == TypeLabel::T26_5 && dim == n {
            // Conjugate to the split-vector stabilizer intersected with AN.
            return if even {
                Ok(CKVerdict::new(CkOutcome::HasCompactForm, vec![tag, rules::STAB_EVEN]))
            } else {
                Ok(CKVerdict::new(CkOutcome::NoCompactForm, vec![tag, rules::STAB_ODD]))
            };
        }
        if dim < n {
            return Ok(CKVerdict::new(CkOutcome::NoCompactForm, vec![tag, rules::LINEAR_BOUND]));
        }
        return Ok(CKVerdict::new(CkOutcome::Inconclusive, vec![tag]));
    }
    if upper_quadratic(label, &v.params) {
        if dim < quad_threshold {
            return Ok(CKVerdict::new(
                CkOutcome::NoCompactForm,
                vec![tag, rules::QUADRATIC_BOUND],
            ));
        }
        match label {
            TypeLabel::T26_2 => {
                if even && dim == n {
                    return Ok(CKVerdict::new(
                        CkOutcome::HasCompactForm,
                        vec![tag, rules::DEFORM_EVEN],
                    ));
                }
                if !even && dim == n - 1 {
                    return Ok(conjectural(assume_su, tag));
                }
                return Ok(CKVerdict::new(CkOutcome::Inconclusive, vec![tag]));
            }
            TypeLabel::T29_2 | TypeLabel::T29_3 => {
                // dim 2 and the quadratic threshold not exceeded: only n = 3.
                return Ok(conjectural(assume_su, tag));
            }
            TypeLabel::T29_7 | TypeLabel::T29_8 => {
                // Nested inside the 3/2-rate window subgroup at n = 3.
                return Ok(CKVerdict::new(CkOutcome::NoCompactForm, vec![tag, rules::NESTING]));
            }
            TypeLabel::P210 => {
                let p = v.params.p.clone().unwrap_or_else(|| rat_i(0)).abs();
                return if p < rat(1, 3) {
                    Ok(conjectural(assume_su, tag))
                } else {
                    Ok(CKVerdict::new(CkOutcome::NoCompactForm, vec![tag, rules::NESTING]))
                };
            }
            _ => return Ok(CKVerdict::new(CkOutcome::Inconclusive, vec![tag])),
        }
    }
    Ok(CKVerdict::new(CkOutcome::Inconclusive, vec![tag]))
}

fn conjectural(assume_su: bool, tag: &str) -> CKVerdict {
    if assume_su {
        CKVerdict::new(CkOutcome::NoCompactForm, vec![tag, rules::SU_ASSUMED])
    } else {
        CKVerdict::new(CkOutcome::ConjecturalNoSu1m, vec![tag, rules::SU_CONJ])
    }
}

fn ck_verdict_sl3(h: &Subalgebra) -> Result<CKVerdict> {
    let d = if h.info().in_an {
        d_of(GroupTag::AnSubalgebra { dim: h.dim() })
    } else if h.label.as_deref() == Some("sl2-top-left") {
        d_of(GroupTag::L5)
    } else {
        return Err(Error::UnsupportedInput(
            "sl(3,R) verdicts require an upper-triangular subalgebra or a named entry"
                .to_string(),
        ));
    };
    if d == 0 {
        return Ok(CKVerdict::new(CkOutcome::HCompact, vec![rules::TRIVIAL]));
    }
    if d == 1 {
        return Ok(CKVerdict::new(CkOutcome::NoCompactForm, vec![rules::ONE_PARAM]));
    }
    if h.info().in_an && h.dim() == 5 {
        return Ok(CKVerdict::new(CkOutcome::GmodHCompact, vec![rules::FULL_BOREL]));
    }
    Ok(CKVerdict::new(CkOutcome::NoCompactForm, vec![rules::BPLUS, rules::CDS_NO_FORM]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{
        emit, exemplar, h_b, so1n_an, standard_j, DeformationMatrix, ExemplarParams,
    };

    fn classify_label(label: &str, n: usize, params: &ExemplarParams) -> TypeLabel {
        let h = exemplar(label, n, params).unwrap();
        classify_type(&h).unwrap().label
    }

    #[test]
    fn split_examples() {
        // h_B splits as the diagonal ray over a (2m-1)-dimensional nilpotent.
        let j = DeformationMatrix::new(standard_j(2)).unwrap();
        let h = h_b(2, &j).unwrap();
        let s = split_and_compatibility(&h).unwrap();
        assert_eq!(s.torus.len(), 1);
        let tau = &s.torus[0];
        assert_eq!(tau.0, tau.1, "diagonal torus direction");
        assert_eq!(s.h_cap_n.len(), 3);
        assert!(s.semidirect && s.compatible);
        // T2.9-1 mixes a and u_alpha: not semidirect.
        let h = exemplar("T2.9-1", 3, &ExemplarParams::default()).unwrap();
        let s = split_and_compatibility(&h).unwrap();
        assert!(!s.semidirect);
        assert!(s.compatible);
        // The zero subalgebra splits trivially.
        let z = Subalgebra::new(Ambient::So2n { n: 3 }, vec![]).unwrap();
        let s = split_and_compatibility(&z).unwrap();
        assert!(s.torus.is_empty() && s.h_cap_n.is_empty() && s.semidirect);
    }

    #[test]
    fn classify_named_families() {
        // The split-vector stabilizer slice is the stabilizer type with
        // X0 = R^{n-2}, b = 0, c = 0, p = 1.
        for n in [3usize, 4, 5] {
            let h = so1n_an(n).unwrap();
            let v = classify_type(&h).unwrap();
            assert_eq!(v.label, TypeLabel::T26_5, "n={n}");
            assert_eq!(v.params.p, Some(rat_i(1)));
            assert!(v.params.b_vec.unwrap().iter().all(|b| b.is_zero()));
            assert!(v.params.c_vec.unwrap().iter().all(|c| c.is_zero()));
            assert_eq!(v.params.x0.unwrap().len(), n - 2);
        }
        // h_B is the quadratic graph type over ker(alpha).
        for m in [2usize, 3] {
            let j = DeformationMatrix::new(standard_j(2 * m - 2)).unwrap();
            let h = h_b(m, &j).unwrap();
            assert_eq!(classify_type(&h).unwrap().label, TypeLabel::T26_2);
        }
        // The full a+n is a Cartan-decomposition subgroup.
        let full = crate::catalog::an_full(4).unwrap();
        assert_eq!(classify_type(&full).unwrap().label, TypeLabel::Cds);
        // l5_an has the 3/2 rate.
        let h = crate::catalog::l5_an(3).unwrap();
        assert_eq!(classify_type(&h).unwrap().label, TypeLabel::T26_6);
    }

    #[test]
    fn classify_exemplar_round_trip_defaults() {
        let d = ExemplarParams::default();
        assert_eq!(classify_label("T2.5-1", 3, &d), TypeLabel::T25_1);
        assert_eq!(classify_label("T2.5-2", 4, &d), TypeLabel::T25_2);
        assert_eq!(classify_label("T2.5-3", 4, &d), TypeLabel::T25_3);
        assert_eq!(classify_label("T2.5-4", 3, &d), TypeLabel::T25_4);
        assert_eq!(classify_label("T2.6-1", 3, &d), TypeLabel::T26_1);
        assert_eq!(classify_label("T2.6-2", 4, &d), TypeLabel::T26_2);
        assert_eq!(classify_label("T2.6-3", 3, &d), TypeLabel::T26_3);
        assert_eq!(classify_label("T2.6-4", 3, &d), TypeLabel::T26_4);
        assert_eq!(classify_label("T2.6-5", 3, &d), TypeLabel::T26_5);
        assert_eq!(classify_label("T2.6-6", 3, &d), TypeLabel::T26_6);
        assert_eq!(classify_label("T2.6-7", 3, &d), TypeLabel::T26_7);
        assert_eq!(classify_label("T2.9-1", 3, &d), TypeLabel::T29_1);
        assert_eq!(classify_label("T2.9-2", 3, &d), TypeLabel::T29_2);
        assert_eq!(classify_label("T2.9-3", 3, &d), TypeLabel::T29_3);
        assert_eq!(classify_label("T2.9-4", 3, &d), TypeLabel::T29_4);
        assert_eq!(classify_label("T2.9-6", 4, &d), TypeLabel::T29_6);
        assert_eq!(classify_label("T2.9-7", 3, &d), TypeLabel::T29_7);
        assert_eq!(classify_label("T2.9-8", 3, &d), TypeLabel::T29_8);
        assert_eq!(classify_label("P2.10", 3, &d), TypeLabel::P210);
    }

    #[test]
    fn p210_parameter_extraction() {
        for (p_in, omega) in [
            (rat(1, 2), Root::Alpha),
            (rat(-1, 2), Root::Alpha),
            (rat(1, 2), Root::Beta),
            (rat(-1, 2), Root::AlphaBeta),
            (rat(1, 2), Root::Alpha2Beta),
        ] {
            let h = exemplar(
                "P2.10",
                3,
                &ExemplarParams { p: Some(p_in.clone()), omega: Some(omega), ..Default::default() },
            )
            .unwrap();
            let v = classify_type(&h).unwrap();
            assert_eq!(v.label, TypeLabel::P210);
            assert_eq!(v.params.omega, Some(omega));
            assert_eq!(v.params.p, Some(p_in));
        }
        // |p| >= 1 is a Cartan-decomposition subgroup.
        for p_in in [rat_i(1), rat(3, 2)] {
            let h = exemplar(
                "P2.10",
                3,
                &ExemplarParams { p: Some(p_in), omega: Some(Root::Alpha), ..Default::default() },
            )
            .unwrap();
            assert_eq!(classify_type(&h).unwrap().label, TypeLabel::Cds);
        }
        // p = 0 coincides with the named kernel families.
        for (omega, want) in [
            (Root::Alpha2Beta, TypeLabel::T26_2),
            (Root::Beta, TypeLabel::T26_4),
            (Root::AlphaBeta, TypeLabel::T26_3),
            (Root::Alpha, TypeLabel::P210),
        ] {
            let h = exemplar(
                "P2.10",
                3,
                &ExemplarParams { p: Some(rat_i(0)), omega: Some(omega), ..Default::default() },
            )
            .unwrap();
            assert_eq!(classify_type(&h).unwrap().label, want, "omega = {}", omega.name());
        }
    }

    #[test]
    fn recognize_so1n_examples() {
        let h = so1n_an(4).unwrap();
        let d = recognize_so1n(&h).unwrap();
        assert_eq!(d.p, rat_i(1));
        assert!(d.b.iter().all(|v| v.is_zero()));
        assert!(d.c.iter().all(|v| v.is_zero()));
        assert_eq!(d.x0.len(), 2);
        assert_eq!(d.sign_value(), rat_i(-2));
        // Same slice with eta = -phi has p = -1 and fails the sign condition.
        let n = 4;
        let mut els = vec![];
        let mut c = ANCoords::zero(n);
        c.t1 = rat_i(1);
        els.push(an_element(n, &c).unwrap());
        let mut c = ANCoords::zero(n);
        c.phi = rat_i(1);
        c.eta = rat_i(-1);
        els.push(an_element(n, &c).unwrap());
        let mut c = ANCoords::zero(n);
        c.x[0] = rat_i(1);
        els.push(an_element(n, &c).unwrap());
        let h = Subalgebra::new(Ambient::So2n { n }, els).unwrap();
        assert!(recognize_so1n(&h).is_none());
        // Nonzero y in h cap n: precondition fails, absent.
        let h = exemplar("T2.6-4", 3, &ExemplarParams::default()).unwrap();
        assert!(recognize_so1n(&h).is_none());
    }

    #[test]
    fn su_conjugacy_examples() {
        // Two standard blocks: yes with a = 0, b^2 = 1.
        let j4 = standard_j(4);
        match su_conjugacy(&j4).unwrap() {
            SuDecision::Yes(w) => {
                assert_eq!(w.a, rat_i(0));
                assert_eq!(w.b_squared, rat_i(1));
            }
            SuDecision::No => panic!("standard complex structure must pass"),
        }
        // [[0,2],[-1,0]]: symmetric part is not scalar.
        let b = RatMat::from_rows(vec![vec![rat_i(0), rat_i(2)], vec![rat_i(-1), rat_i(0)]]);
        assert!(matches!(su_conjugacy(&b).unwrap(), SuDecision::No));
        // 3I + J: yes with a = 3, b^2 = 1.
        let b = RatMat::from_rows(vec![vec![rat_i(3), rat_i(1)], vec![rat_i(-1), rat_i(3)]]);
        match su_conjugacy(&b).unwrap() {
            SuDecision::Yes(w) => {
                assert_eq!(w.a, rat_i(3));
                assert_eq!(w.b_squared, rat_i(1));
            }
            SuDecision::No => panic!("block form must pass"),
        }
        // Odd size errors.
        assert!(su_conjugacy(&RatMat::identity(3)).is_err());
    }

    #[test]
    fn su_witness_achieves_block_form() {
        // A rational orthogonal conjugate of a block matrix must pass, and
        // the witness basis must restore the block shape.
        let k = 4;
        // Rational rotation from the 3-4-5 triple in two planes.
        let mut s = RatMat::identity(k);
        s.set(0, 0, rat(3, 5));
        s.set(0, 2, rat(4, 5));
        s.set(2, 0, rat(-4, 5));
        s.set(2, 2, rat(3, 5));
        let block = {
            let mut m = standard_j(k).scale(&rat_i(2));
            for i in 0..k {
                m.set(i, i, rat_i(3));
            }
            m
        };
        let b = s.transpose().mul(&block).mul(&s);
        match su_conjugacy(&b).unwrap() {
            SuDecision::Yes(w) => {
                assert_eq!(w.a, rat_i(3));
                assert_eq!(w.b_squared, rat_i(4));
                let bf = w.basis.transpose() * b.to_f64() * &w.basis;
                let bval = 2.0;
                for blk in 0..k / 2 {
                    let i = 2 * blk;
                    assert!((bf[(i, i)] - 3.0).abs() < 1e-9);
                    assert!((bf[(i + 1, i + 1)] - 3.0).abs() < 1e-9);
                    assert!((bf[(i, i + 1)].abs() - bval).abs() < 1e-9);
                    assert!((bf[(i + 1, i)] + bf[(i, i + 1)]).abs() < 1e-9);
                }
            }
            SuDecision::No => panic!("conjugated block form must pass"),
        }
    }

    #[test]
    fn hb_invariants_examples() {
        // The 4x4 example matrix has a 2-dimensional kernel of B^T - B.
        let b = RatMat::from_rows(vec![
            vec![rat_i(0), rat_i(1), rat_i(0), rat_i(1)],
            vec![rat_i(-1), rat_i(0), rat_i(1), rat_i(0)],
            vec![rat_i(0), rat_i(1), rat_i(0), rat_i(0)],
            vec![rat_i(1), rat_i(0), rat_i(0), rat_i(0)],
        ]);
        let inv = hb_iso_invariants(&b);
        assert_eq!(inv.center_dim, 3);
        assert!(!inv.iso_to_hsu);
        // The standard complex structure has trivial kernel.
        let inv = hb_iso_invariants(&standard_j(4));
        assert_eq!(inv.center_dim, 1);
        assert!(inv.iso_to_hsu);
    }

    #[test]
    fn d_of_examples() {
        assert_eq!(d_of(GroupTag::So2n { n: 4 }), 8); // 4m at m = 2
        assert_eq!(d_of(GroupTag::So2n { n: 6 }), 12);
        assert_eq!(d_of(GroupTag::Su1m { m: 3 }), 6);
        assert_eq!(d_of(GroupTag::So1n { n: 5 }), 5);
        assert_eq!(d_of(GroupTag::AnSubalgebra { dim: 5 }), 5);
        assert_eq!(d_of(GroupTag::L5), 2);
        assert_eq!(d_of(GroupTag::Sl3), 5);
    }

    #[test]
    fn ck_verdict_examples() {
        // h_B with n = 2m even: has a compact form.
        let j = DeformationMatrix::new(standard_j(2)).unwrap();
        let h = h_b(2, &j).unwrap();
        let v = ck_verdict(&h, false).unwrap();
        assert_eq!(v.verdict, CkOutcome::HasCompactForm);
        assert!(v.justification.contains(&"T2.6-2".to_string()));
        // The split-vector stabilizer at odd n: no compact form.
        let h = so1n_an(5).unwrap();
        assert_eq!(ck_verdict(&h, false).unwrap().verdict, CkOutcome::NoCompactForm);
        // Even n: has one.
        let h = so1n_an(4).unwrap();
        assert_eq!(ck_verdict(&h, false).unwrap().verdict, CkOutcome::HasCompactForm);
        // Dimension-one tori are excluded by the one-parameter rule.
        let t = exemplar("T2.6-1", 3, &ExemplarParams::default()).unwrap();
        let v = ck_verdict(&t, false).unwrap();
        assert_eq!(v.verdict, CkOutcome::NoCompactForm);
        assert!(v.justification.contains(&rules::ONE_PARAM.to_string()));
        // l5_an: excluded through the rate-3/2 subgroup.
        let h = crate::catalog::l5_an(3).unwrap();
        assert_eq!(ck_verdict(&h, false).unwrap().verdict, CkOutcome::NoCompactForm);
        // sl3 entries: never a compact form.
        for label in ["sl2-top-left", "full-diagonal-torus", "upper-triangular-2d"] {
            let h = emit(label, 3, &ExemplarParams::default()).unwrap();
            assert_eq!(ck_verdict(&h, false).unwrap().verdict, CkOutcome::NoCompactForm, "{label}");
        }
        // Full a+n: G/H compact.
        let full = crate::catalog::an_full(3).unwrap();
        assert_eq!(ck_verdict(&full, false).unwrap().verdict, CkOutcome::GmodHCompact);
        // Zero subalgebra: H compact.
        let z = Subalgebra::new(Ambient::So2n { n: 3 }, vec![]).unwrap();
        assert_eq!(ck_verdict(&z, false).unwrap().verdict, CkOutcome::HCompact);
    }

    #[test]
    fn ck_verdict_conjectural_branch() {
        // Odd n, quadratic graph type at dim n-1: conjectural unless the
        // flag is set.
        let h = exemplar(
            "T2.6-2",
            5,
            &ExemplarParams { x0_dim: Some(2), ..Default::default() },
        )
        .unwrap();
        assert_eq!(h.dim(), 4);
        let v = ck_verdict(&h, false).unwrap();
        assert_eq!(v.verdict, CkOutcome::ConjecturalNoSu1m);
        let v = ck_verdict(&h, true).unwrap();
        assert_eq!(v.verdict, CkOutcome::NoCompactForm);
        // n = 3 mixed types T2.9-2/3: conjectural.
        for label in ["T2.9-2", "T2.9-3"] {
            let h = exemplar(label, 3, &ExemplarParams::default()).unwrap();
            assert_eq!(
                ck_verdict(&h, false).unwrap().verdict,
                CkOutcome::ConjecturalNoSu1m,
                "{label}"
            );
            // At n >= 4 the quadratic dimension bound applies instead.
            let h = exemplar(label, 4, &ExemplarParams::default()).unwrap();
            assert_eq!(ck_verdict(&h, false).unwrap().verdict, CkOutcome::NoCompactForm);
        }
        // T2.9-7/8 at n = 3: excluded by window nesting.
        for label in ["T2.9-7", "T2.9-8"] {
            let h = exemplar(label, 3, &ExemplarParams::default()).unwrap();
            let v = ck_verdict(&h, false).unwrap();
            assert_eq!(v.verdict, CkOutcome::NoCompactForm, "{label}");
            assert!(v.justification.contains(&rules::NESTING.to_string()));
        }
        // P2.10 at n = 3: conjectural inside |p| < 1/3, nesting beyond.
        let h = exemplar(
            "P2.10",
            3,
            &ExemplarParams { p: Some(rat(1, 4)), omega: Some(Root::Alpha), ..Default::default() },
        )
        .unwrap();
        assert_eq!(ck_verdict(&h, false).unwrap().verdict, CkOutcome::ConjecturalNoSu1m);
        let h = exemplar(
            "P2.10",
            3,
            &ExemplarParams { p: Some(rat(1, 2)), omega: Some(Root::Alpha), ..Default::default() },
        )
        .unwrap();
        assert_eq!(ck_verdict(&h, false).unwrap().verdict, CkOutcome::NoCompactForm);
    }

    #[test]
    fn normalize_compatible_basics() {
        // Already-compatible input comes back unchanged.
        let h = so1n_an(3).unwrap();
        let r = normalize_compatible(&h);
        assert!(r.resolved && !r.changed);
        // A conjugated exemplar is restored to a compatible representative
        // with the same label.
        let h = exemplar("T2.6-3", 3, &ExemplarParams::default()).unwrap();
        let mut zc = ANCoords::zero(3);
        zc.y[0] = rat_i(1);
        zc.eta = rat(1, 2);
        let z = an_element(3, &zc).unwrap();
        let g = exp_nilpotent_exact(&z.mat).unwrap();
        let g_inv = exp_nilpotent_exact(&z.mat.neg()).unwrap();
        let conj = h.conjugate(&g, &g_inv).unwrap();
        assert!(!conj.info().compatible, "conjugation breaks compatibility");
        let r = normalize_compatible(&conj);
        assert!(r.resolved);
        assert_eq!(classify_type(&r.subalgebra).unwrap().label, TypeLabel::T26_3);
        // A non-closed span is flagged, not classified.
        let n = 3;
        let mut c1 = ANCoords::zero(n);
        c1.x[0] = rat_i(1);
        let mut c2 = ANCoords::zero(n);
        c2.y[0] = rat_i(1);
        let bad = Subalgebra::from_basis_unchecked(
            Ambient::So2n { n },
            vec![an_element(n, &c1).unwrap(), an_element(n, &c2).unwrap()],
        )
        .unwrap();
        let r = normalize_compatible(&bad);
        assert!(!r.resolved);
        assert_eq!(
            classify_type(&bad).unwrap().label,
            TypeLabel::IncompatibleUnresolved
        );
    }
}

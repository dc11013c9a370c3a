//! Constructors for the named subalgebra families and one exemplar per
//! classification item: the classifier's ground-truth corpus.
//!
//! Every constructor produces an exact rational basis that is closed under
//! the bracket, so membership and structure questions downstream never
//! depend on a floating tolerance.

use crate::error::{Error, Result};
use crate::lie::{
    an_basis, an_element, bracket, AlgElement, Ambient, ANCoords, Root,
};
use crate::rat::{
    coords_in_span, has_real_eigenvalue, in_span, independent_subset, rat, rat_i, Rat, RatMat,
};
use nalgebra::DMatrix;
use num_traits::{One, Signed, Zero};

/// A finite-dimensional subalgebra given by an exact basis, with cached
/// structure used throughout classification.
#[derive(Clone, Debug)]
pub struct Subalgebra {
    pub ambient: Ambient,
    pub basis: Vec<AlgElement>,
    pub label: Option<String>,
    info: SubalgebraInfo,
}

#[derive(Clone, Debug)]
pub struct SubalgebraInfo {
    pub dim: usize,
    /// Does every basis element lie in the upper-triangular slice a+n?
    pub in_an: bool,
    /// Exact basis of h intersect n (elements with zero a-part).
    pub h_cap_n: Vec<AlgElement>,
    /// Exact basis of h intersect a (pure a-elements of h).
    pub h_cap_a: Vec<(Rat, Rat)>,
    /// Basis of the projection of h to a.
    pub a_proj: Vec<(Rat, Rat)>,
    /// h = (h cap a) + (h cap n)?
    pub semidirect: bool,
    /// Is h compatible with A (h inside t + (h cap n) + centralizer of t)?
    pub compatible: bool,
    /// Is the basis closed under the bracket? Constructors enforce this;
    /// `from_basis_unchecked` may record a failure here instead.
    pub closed: bool,
}

impl Subalgebra {
    /// Validating constructor: reduces to an independent basis and requires
    /// exact bracket closure.
    pub fn new(ambient: Ambient, elements: Vec<AlgElement>) -> Result<Self> {
        let s = Self::from_basis_unchecked(ambient, elements)?;
        if !s.info.closed {
            return Err(Error::NotClosed);
        }
        Ok(s)
    }

    /// Construct without requiring closure (the closure status is recorded in
    /// the cached info). Used by normalization flows and tests.
    pub fn from_basis_unchecked(ambient: Ambient, elements: Vec<AlgElement>) -> Result<Self> {
        for e in &elements {
            if e.ambient != ambient {
                return Err(Error::AmbientMismatch {
                    left: ambient.describe(),
                    right: e.ambient.describe(),
                });
            }
        }
        let flat: Vec<Vec<Rat>> = elements.iter().map(|e| e.mat.flatten()).collect();
        let indep = independent_subset(&flat);
        let basis: Vec<AlgElement> = indep
            .iter()
            .map(|v| {
                let d = ambient.matrix_dim();
                let m = RatMat::from_fn(d, d, |i, j| v[i * d + j].clone());
                crate::lie::alg_from_matrix(ambient, m).expect("span of valid elements")
            })
            .collect();
        let info = compute_info(ambient, &basis);
        Ok(Subalgebra { ambient, basis, label: None, info })
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    pub fn dim(&self) -> usize {
        self.info.dim
    }

    pub fn info(&self) -> &SubalgebraInfo {
        &self.info
    }

    /// Flattened basis vectors, for span arithmetic.
    pub fn flat_basis(&self) -> Vec<Vec<Rat>> {
        self.basis.iter().map(|e| e.mat.flatten()).collect()
    }

    /// Exact membership of a matrix in the span of the basis.
    pub fn contains(&self, m: &RatMat) -> bool {
        in_span(&self.flat_basis(), &m.flatten())
    }

    /// Conjugate the subalgebra by an exact group element g: h -> g h g^{-1},
    /// where g_inv must be supplied (exact).
    pub fn conjugate(&self, g: &RatMat, g_inv: &RatMat) -> Result<Self> {
        let elements: Vec<AlgElement> = self
            .basis
            .iter()
            .map(|e| {
                let m = g.mul(&e.mat).mul(g_inv);
                crate::lie::alg_from_matrix(self.ambient, m)
            })
            .collect::<Result<_>>()?;
        let mut s = Self::from_basis_unchecked(self.ambient, elements)?;
        s.label = self.label.clone();
        Ok(s)
    }
}

fn compute_info(ambient: Ambient, basis: &[AlgElement]) -> SubalgebraInfo {
    let dim = basis.len();
    let flat: Vec<Vec<Rat>> = basis.iter().map(|e| e.mat.flatten()).collect();
    let mut closed = true;
    'outer: for i in 0..dim {
        for j in (i + 1)..dim {
            let b = bracket(&basis[i], &basis[j]).expect("same ambient");
            if !in_span(&flat, &b.mat.flatten()) {
                closed = false;
                break 'outer;
            }
        }
    }
    match ambient {
        Ambient::So2n { .. } => {
            let in_an = basis.iter().all(|e| e.coords.is_some());
            if !in_an {
                return SubalgebraInfo {
                    dim,
                    in_an,
                    h_cap_n: vec![],
                    h_cap_a: vec![],
                    a_proj: vec![],
                    semidirect: false,
                    compatible: false,
                    closed,
                };
            }
            // a-projection of the basis.
            let a_rows: Vec<Vec<Rat>> = basis
                .iter()
                .map(|e| {
                    let c = e.coords.as_ref().unwrap();
                    vec![c.t1.clone(), c.t2.clone()]
                })
                .collect();
            let a_proj_rows = independent_subset(&a_rows);
            let a_proj: Vec<(Rat, Rat)> =
                a_proj_rows.iter().map(|r| (r[0].clone(), r[1].clone())).collect();
            // h cap n: kernel of the a-part functional on h.
            let amat = RatMat::from_rows(a_rows.clone()).transpose(); // 2 x dim
            let h_cap_n: Vec<AlgElement> = amat
                .nullspace()
                .into_iter()
                .map(|coef| combine(basis, &coef))
                .collect();
            // h cap a: elements of h with zero nilpotent part.
            let nil_rows: Vec<Vec<Rat>> = basis
                .iter()
                .map(|e| {
                    let c = e.coords.as_ref().unwrap();
                    let mut v = vec![c.phi.clone()];
                    v.extend(c.x.iter().cloned());
                    v.extend(c.y.iter().cloned());
                    v.push(c.eta.clone());
                    v
                })
                .collect();
            let nmat = RatMat::from_rows(nil_rows).transpose();
            let h_cap_a: Vec<(Rat, Rat)> = nmat
                .nullspace()
                .into_iter()
                .map(|coef| {
                    let e = combine(basis, &coef);
                    let c = e.coords.as_ref().unwrap();
                    (c.t1.clone(), c.t2.clone())
                })
                .collect();
            let semidirect = h_cap_a.len() == a_proj.len();
            let compatible = compatibility(basis, &a_proj, &h_cap_n);
            SubalgebraInfo {
                dim,
                in_an: true,
                h_cap_n,
                h_cap_a,
                a_proj,
                semidirect,
                compatible,
                closed,
            }
        }
        Ambient::Sl3 => {
            let in_an = basis.iter().all(|e| {
                let m = &e.mat;
                m.get(1, 0).is_zero() && m.get(2, 0).is_zero() && m.get(2, 1).is_zero()
            });
            SubalgebraInfo {
                dim,
                in_an,
                h_cap_n: vec![],
                h_cap_a: vec![],
                a_proj: vec![],
                semidirect: false,
                compatible: false,
                closed,
            }
        }
    }
}

fn combine(basis: &[AlgElement], coef: &[Rat]) -> AlgElement {
    let mut acc = AlgElement::zero(basis[0].ambient);
    for (e, c) in basis.iter().zip(coef) {
        if c.is_zero() {
            continue;
        }
        acc = acc.add(&e.scale(c)).expect("same ambient");
    }
    acc
}

/// Compatibility with A: every basis element's nilpotent part must lie in
/// (h cap n) + centralizer of the a-projection in n.
fn compatibility(
    basis: &[AlgElement],
    a_proj: &[(Rat, Rat)],
    h_cap_n: &[AlgElement],
) -> bool {
    let n = match basis.first().map(|e| e.ambient) {
        Some(Ambient::So2n { n }) => n,
        _ => return true,
    };
    match a_proj.len() {
        0 => true,                      // h inside n
        2 => h_cap_n.len() + 2 == basis.len(), // full torus projection: need semidirect
        1 => {
            let tau = &a_proj[0];
            // The at-most-one positive root vanishing on tau.
            let omega = crate::lie::POSITIVE_ROOTS
                .iter()
                .copied()
                .find(|r| r.eval(&tau.0, &tau.1).is_zero());
            // Span to test membership against: (h cap n) + u_omega.
            let mut span: Vec<Vec<Rat>> = h_cap_n.iter().map(|e| nil_coords(e, n)).collect();
            if let Some(w) = omega {
                for g in root_space_basis(n, w) {
                    span.push(nil_coords(&g, n));
                }
            }
            basis.iter().all(|e| {
                let c = e.coords.as_ref().unwrap();
                let mut nil = c.clone();
                nil.t1 = Rat::zero();
                nil.t2 = Rat::zero();
                let v = an_element(n, &nil).unwrap();
                in_span(&span, &nil_coords(&v, n))
            })
        }
        _ => unreachable!("a is 2-dimensional"),
    }
}

/// Coordinates of the nilpotent part as a vector (phi, x, y, eta).
pub(crate) fn nil_coords(e: &AlgElement, _n: usize) -> Vec<Rat> {
    let c = e.coords.as_ref().expect("a+n element");
    let mut v = vec![c.phi.clone()];
    v.extend(c.x.iter().cloned());
    v.extend(c.y.iter().cloned());
    v.push(c.eta.clone());
    v
}

/// Basis of a single root space of n.
pub fn root_space_basis(n: usize, root: Root) -> Vec<AlgElement> {
    let mut out = Vec::new();
    match root {
        Root::Alpha => {
            let mut c = ANCoords::zero(n);
            c.phi = rat_i(1);
            out.push(an_element(n, &c).unwrap());
        }
        Root::Alpha2Beta => {
            let mut c = ANCoords::zero(n);
            c.eta = rat_i(1);
            out.push(an_element(n, &c).unwrap());
        }
        Root::Beta => {
            for i in 0..n - 2 {
                let mut c = ANCoords::zero(n);
                c.y[i] = rat_i(1);
                out.push(an_element(n, &c).unwrap());
            }
        }
        Root::AlphaBeta => {
            for i in 0..n - 2 {
                let mut c = ANCoords::zero(n);
                c.x[i] = rat_i(1);
                out.push(an_element(n, &c).unwrap());
            }
        }
    }
    out
}

/// A square matrix without real eigenvalues, the deformation datum of the
/// h_B family. The constructor enforces the spectral condition exactly.
#[derive(Clone, Debug)]
pub struct DeformationMatrix {
    b: RatMat,
}

impl DeformationMatrix {
    pub fn new(b: RatMat) -> Result<Self> {
        if !b.is_square() {
            return Err(Error::InvalidParams("deformation matrix must be square".to_string()));
        }
        if has_real_eigenvalue(&b) {
            return Err(Error::RealEigenvalue);
        }
        Ok(DeformationMatrix { b })
    }

    /// Exact conversion from floating entries, then the exact spectral test.
    pub fn from_f64(m: &DMatrix<f64>) -> Result<Self> {
        let b = RatMat::from_f64_exact(m)
            .ok_or_else(|| Error::InvalidParams("non-finite entry".to_string()))?;
        Self::new(b)
    }

    pub fn matrix(&self) -> &RatMat {
        &self.b
    }

    pub fn size(&self) -> usize {
        self.b.nrows()
    }
}

/// Numerical real-eigenvalue detector (imaginary-part threshold), used as a
/// cross-check oracle against the exact Sturm test.
pub fn has_real_eigenvalue_numeric(m: &DMatrix<f64>, imag_tol: f64) -> bool {
    m.clone().complex_eigenvalues().iter().any(|ev| ev.im.abs() <= imag_tol)
}

/// The standard block complex structure J on R^{2k}.
pub fn standard_j(size: usize) -> RatMat {
    assert!(size.is_multiple_of(2));
    let mut j = RatMat::zeros(size, size);
    for b in 0..size / 2 {
        j.set(2 * b, 2 * b + 1, rat_i(1));
        j.set(2 * b + 1, 2 * b, rat_i(-1));
    }
    j
}

/// The deformation family: the 2m-dimensional subalgebra of so(2,2m) spanned
/// by the diagonal torus direction t1 = t2, the eta axis, and the graph
/// elements x = e_i, y = B(e_i).
pub fn h_b(m: usize, b: &DeformationMatrix) -> Result<Subalgebra> {
    if m < 2 {
        return Err(Error::InvalidDimension(format!("need m >= 2, got {m}")));
    }
    let n = 2 * m;
    if b.size() != 2 * m - 2 {
        return Err(Error::DimensionMismatch(format!(
            "deformation matrix must be {0}x{0} for m = {m}",
            2 * m - 2
        )));
    }
    let mut elements = Vec::new();
    let mut c = ANCoords::zero(n);
    c.t1 = rat_i(1);
    c.t2 = rat_i(1);
    elements.push(an_element(n, &c)?);
    let mut c = ANCoords::zero(n);
    c.eta = rat_i(1);
    elements.push(an_element(n, &c)?);
    for i in 0..n - 2 {
        let mut c = ANCoords::zero(n);
        c.x[i] = rat_i(1);
        c.y = b.matrix().col(i);
        elements.push(an_element(n, &c)?);
    }
    Ok(Subalgebra::new(Ambient::So2n { n }, elements)?.with_label("h_B"))
}

/// The intersection of the stabilizer of the split vector (0,1,0,...,0,-1,0)
/// with a+n: the slice t2 = 0, y = 0, eta = phi.
pub fn so1n_an(n: usize) -> Result<Subalgebra> {
    let mut elements = Vec::new();
    let mut c = ANCoords::zero(n);
    c.t1 = rat_i(1);
    elements.push(an_element(n, &c)?);
    let mut c = ANCoords::zero(n);
    c.phi = rat_i(1);
    c.eta = rat_i(1);
    elements.push(an_element(n, &c)?);
    for i in 0..n - 2 {
        let mut c = ANCoords::zero(n);
        c.x[i] = rat_i(1);
        elements.push(an_element(n, &c)?);
    }
    Ok(Subalgebra::new(Ambient::So2n { n }, elements)?.with_label("so1n_an"))
}

/// The principal three-dimensional subalgebra of so(2,n): image of sl(2,R)
/// under the irreducible five-dimensional representation, embedded through
/// the coordinates (1,2,3) and (n+1,n+2), in an exactly rational realization.
pub fn l5(n: usize) -> Result<Subalgebra> {
    if n < 3 {
        return Err(Error::InvalidDimension(format!("need n >= 3, got {n}")));
    }
    let size = n + 2;
    // Split generator: diag(4, 2, 0, ..., 0, -2, -4).
    let mut c = ANCoords::zero(n);
    c.t1 = rat_i(4);
    c.t2 = rat_i(2);
    let h = an_element(n, &c)?;
    // Raising generator: phi = 2, y = 2 e_1.
    let mut c = ANCoords::zero(n);
    c.phi = rat_i(2);
    c.y[0] = rat_i(2);
    let e = an_element(n, &c)?;
    // Lowering generator, the transpose chain with weights (2, 3, 3, 2).
    let mut f = RatMat::zeros(size, size);
    f.set(1, 0, rat_i(2));
    f.set(2, 1, rat_i(3));
    f.set(size - 2, 2, rat_i(-3));
    f.set(size - 1, size - 2, rat_i(-2));
    let f = crate::lie::alg_from_matrix(Ambient::So2n { n }, f)?;
    Ok(Subalgebra::new(Ambient::So2n { n }, vec![h, e, f])?.with_label("l5"))
}

/// The intersection of l5 with a+n: the split direction (4,2) and the mixed
/// nilpotent with nonzero components on both the phi axis and the y space.
pub fn l5_an(n: usize) -> Result<Subalgebra> {
    let full = l5(n)?;
    let h = full.basis[0].clone();
    let e = full.basis[1].clone();
    Ok(Subalgebra::new(Ambient::So2n { n }, vec![h, e])?.with_label("l5_an"))
}

/// The full a+n subalgebra, the maximal (Cartan-decomposition) case.
pub fn an_full(n: usize) -> Result<Subalgebra> {
    Ok(Subalgebra::new(Ambient::So2n { n }, an_basis(n)?)?.with_label("an_full"))
}

/// Named subgroups of SL(3,R) used in the rank-two demonstrations.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sl3Subgroup {
    Sl2TopLeft,
    FullDiagonalTorus,
    UpperTriangular2d,
}

impl Sl3Subgroup {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "sl2-top-left" => Ok(Sl3Subgroup::Sl2TopLeft),
            "full-diagonal-torus" => Ok(Sl3Subgroup::FullDiagonalTorus),
            "upper-triangular-2d" => Ok(Sl3Subgroup::UpperTriangular2d),
            _ => Err(Error::UnknownLabel(s.to_string())),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Sl3Subgroup::Sl2TopLeft => "sl2-top-left",
            Sl3Subgroup::FullDiagonalTorus => "full-diagonal-torus",
            Sl3Subgroup::UpperTriangular2d => "upper-triangular-2d",
        }
    }
}

pub fn sl3_subgroup(which: Sl3Subgroup) -> Result<Subalgebra> {
    let e = |i: usize, j: usize, v: i64| {
        let mut m = RatMat::zeros(3, 3);
        m.set(i, j, rat_i(v));
        m
    };
    let elements = match which {
        Sl3Subgroup::Sl2TopLeft => {
            let mut h = RatMat::zeros(3, 3);
            h.set(0, 0, rat_i(1));
            h.set(1, 1, rat_i(-1));
            vec![h, e(0, 1, 1), e(1, 0, 1)]
        }
        Sl3Subgroup::FullDiagonalTorus => {
            let mut d1 = RatMat::zeros(3, 3);
            d1.set(0, 0, rat_i(1));
            d1.set(1, 1, rat_i(-1));
            let mut d2 = RatMat::zeros(3, 3);
            d2.set(1, 1, rat_i(1));
            d2.set(2, 2, rat_i(-1));
            vec![d1, d2]
        }
        Sl3Subgroup::UpperTriangular2d => {
            let mut d = RatMat::zeros(3, 3);
            d.set(0, 0, rat_i(1));
            d.set(2, 2, rat_i(-1));
            vec![d, e(0, 1, 1)]
        }
    };
    let elements = elements
        .into_iter()
        .map(|m| crate::lie::alg_from_matrix(Ambient::Sl3, m))
        .collect::<Result<Vec<_>>>()?;
    Ok(Subalgebra::new(Ambient::Sl3, elements)?.with_label(which.name()))
}

/// Free parameters accepted by [`exemplar`]. Every field has a sensible
/// default; labels reject parameters that violate their side conditions.
#[derive(Clone, Debug, Default)]
pub struct ExemplarParams {
    /// Exponent-type parameter (T2.5-1 growth rate, T2.5-4/T2.6-5 p, P2.10 p).
    pub p: Option<Rat>,
    /// Root choice where an item allows one (T2.9-4/6/7, P2.10).
    pub omega: Option<Root>,
    /// Graph/deformation matrix for the quadratic-window items.
    pub b_matrix: Option<RatMat>,
    /// Dimension of the subspace X0 for the stabilizer-type items.
    pub x0_dim: Option<usize>,
    /// Vector b of the stabilizer-type items (inside X0).
    pub b_vec: Option<Vec<Rat>>,
    /// Vector c of the stabilizer-type items (inside X0-perp).
    pub c_vec: Option<Vec<Rat>>,
    /// Include the eta axis in the quadratic-window items (default true).
    pub include_eta: Option<bool>,
    /// Torus direction for T2.6-1.
    pub torus: Option<(Rat, Rat)>,
}

fn x_hat(n: usize, i: usize) -> AlgElement {
    let mut c = ANCoords::zero(n);
    c.x[i] = rat_i(1);
    an_element(n, &c).unwrap()
}

fn y_hat(n: usize, i: usize) -> AlgElement {
    let mut c = ANCoords::zero(n);
    c.y[i] = rat_i(1);
    an_element(n, &c).unwrap()
}

fn phi_hat(n: usize) -> AlgElement {
    let mut c = ANCoords::zero(n);
    c.phi = rat_i(1);
    an_element(n, &c).unwrap()
}

fn eta_hat(n: usize) -> AlgElement {
    let mut c = ANCoords::zero(n);
    c.eta = rat_i(1);
    an_element(n, &c).unwrap()
}

fn torus(n: usize, t1: Rat, t2: Rat) -> AlgElement {
    let mut c = ANCoords::zero(n);
    c.t1 = t1;
    c.t2 = t2;
    an_element(n, &c).unwrap()
}

/// Construct a minimal subalgebra realizing one classification item.
///
/// `label` uses the stable taxonomy strings ("T2.5-1" .. "T2.9-8", "P2.10",
/// with "T2.6-8" accepted as an alias for "P2.10"). Items whose hypotheses
/// cannot be realized by any bracket-closed subalgebra (T2.9-5) are reported
/// as unrealizable rather than approximated.
pub fn exemplar(label: &str, n: usize, params: &ExemplarParams) -> Result<Subalgebra> {
    if n < 3 {
        return Err(Error::InvalidDimension(format!("need n >= 3, got {n}")));
    }
    let amb = Ambient::So2n { n };
    let built = match label {
        "T2.5-1" => {
            let p = params.p.clone().unwrap_or_else(|| rat_i(2));
            let elements: Vec<AlgElement> = if p == rat_i(0) {
                vec![]
            } else if p == rat_i(1) {
                vec![x_hat(n, 0)]
            } else if p == rat(3, 2) {
                let mut c = ANCoords::zero(n);
                c.phi = rat_i(1);
                c.y[0] = rat_i(1);
                vec![an_element(n, &c)?]
            } else if p == rat_i(2) {
                vec![phi_hat(n)]
            } else {
                return Err(Error::InvalidParams(format!(
                    "one-dimensional unipotent rates are 0, 1, 3/2, 2; got {p}"
                )));
            };
            Subalgebra::new(amb, elements)?
        }
        "T2.5-2" => {
            let (graph, include_eta) = graph_elements(n, params)?;
            let mut elements = graph;
            if include_eta {
                elements.push(eta_hat(n));
            }
            Subalgebra::new(amb, elements)?
        }
        "T2.5-3" => {
            if n < 4 {
                return Err(Error::Unrealizable(
                    "T2.5-3 needs dim >= 2, hence n >= 4 (dim 1 falls under T2.5-1)".to_string(),
                ));
            }
            let k = params.x0_dim.unwrap_or(2).min(n - 2);
            if k < 2 {
                return Err(Error::InvalidParams("x0_dim must be >= 2".to_string()));
            }
            let b = params.b_vec.clone().unwrap_or_else(|| vec![Rat::zero(); k]);
            if b.len() != k {
                return Err(Error::InvalidParams("b must have length x0_dim".to_string()));
            }
            let elements: Vec<AlgElement> = (0..k)
                .map(|i| {
                    let mut c = ANCoords::zero(n);
                    c.x[i] = rat_i(1);
                    c.eta = b[i].clone();
                    an_element(n, &c).unwrap()
                })
                .collect();
            Subalgebra::new(amb, elements)?
        }
        "T2.5-4" => {
            let elements = stabilizer_type_nilpotents(n, params)?;
            Subalgebra::new(amb, elements)?
        }
        "T2.6-1" => {
            let (t1, t2) = params.torus.clone().unwrap_or((rat_i(2), rat_i(1)));
            if t1.is_zero() && t2.is_zero() {
                return Err(Error::InvalidParams("torus direction must be nonzero".to_string()));
            }
            Subalgebra::new(amb, vec![torus(n, t1, t2)])?
        }
        "T2.6-2" => {
            let (graph, include_eta) = graph_elements(n, params)?;
            let mut elements = vec![torus(n, rat_i(1), rat_i(1))];
            elements.extend(graph);
            if include_eta {
                elements.push(eta_hat(n));
            }
            Subalgebra::new(amb, elements)?
        }
        "T2.6-3" => {
            let k = params.x0_dim.unwrap_or(n - 2).min(n - 2).max(1);
            let b = params.b_vec.clone().unwrap_or_else(|| vec![Rat::zero(); k]);
            if b.len() != k {
                return Err(Error::InvalidParams("b must have length x0_dim".to_string()));
            }
            let mut elements = vec![torus(n, rat_i(1), rat_i(0))];
            for (i, bv) in b.iter().enumerate() {
                let mut c = ANCoords::zero(n);
                c.x[i] = rat_i(1);
                c.eta = bv.clone();
                elements.push(an_element(n, &c)?);
            }
            Subalgebra::new(amb, elements)?
        }
        "T2.6-4" => {
            let k = params.x0_dim.unwrap_or(n - 2).min(n - 2).max(1);
            let mut elements = vec![torus(n, rat_i(0), rat_i(1))];
            for i in 0..k {
                elements.push(y_hat(n, i));
            }
            Subalgebra::new(amb, elements)?
        }
        "T2.6-5" => {
            let mut elements = vec![torus(n, rat_i(1), rat_i(0))];
            elements.extend(stabilizer_type_nilpotents(n, params)?);
            Subalgebra::new(amb, elements)?
        }
        "T2.6-6" => {
            let mut c = ANCoords::zero(n);
            c.phi = rat_i(1);
            c.y[0] = rat_i(1);
            let u = an_element(n, &c)?;
            Subalgebra::new(amb, vec![torus(n, rat_i(2), rat_i(1)), u])?
        }
        "T2.6-7" => {
            // phi = 1, x = e_1, eta = -1: the quadratic |x|^2 + 2 phi eta = -1
            // is nonzero and the stabilizer-type sign condition fails, which
            // keeps the item distinct from T2.6-5.
            let mut c = ANCoords::zero(n);
            c.phi = rat_i(1);
            c.x[0] = rat_i(1);
            c.eta = rat_i(-1);
            let u = an_element(n, &c)?;
            Subalgebra::new(amb, vec![torus(n, rat_i(1), rat_i(0)), u])?
        }
        "T2.6-8" | "P2.10" => {
            let omega = params.omega.unwrap_or(Root::Alpha);
            let p = params.p.clone().unwrap_or_else(|| rat(1, 2));
            let tau = p210_torus(omega, &p);
            let gen = match omega {
                Root::Alpha => phi_hat(n),
                Root::Beta => y_hat(n, 0),
                Root::AlphaBeta => x_hat(n, 0),
                Root::Alpha2Beta => eta_hat(n),
            };
            Subalgebra::new(amb, vec![torus(n, tau.0, tau.1), gen])?
        }
        "T2.9-1" => {
            let mixed = torus(n, rat_i(1), rat_i(1)).add(&phi_hat(n))?;
            Subalgebra::new(amb, vec![mixed, x_hat(n, 0)])?
        }
        "T2.9-2" => {
            let mixed = torus(n, rat_i(1), rat_i(1)).add(&phi_hat(n))?;
            Subalgebra::new(amb, vec![mixed, eta_hat(n)])?
        }
        "T2.9-3" => {
            let mixed = torus(n, rat_i(1), rat_i(-1)).add(&eta_hat(n))?;
            Subalgebra::new(amb, vec![mixed, phi_hat(n)])?
        }
        "T2.9-4" => {
            let mixed = torus(n, rat_i(1), rat_i(-1)).add(&eta_hat(n))?;
            let u = match params.omega.unwrap_or(Root::Beta) {
                Root::Beta => y_hat(n, 0),
                Root::AlphaBeta => x_hat(n, 0),
                r => {
                    return Err(Error::InvalidParams(format!(
                        "T2.9-4 takes the nilpotent in u_beta or u_(alpha+beta), got {}",
                        r.name()
                    )))
                }
            };
            Subalgebra::new(amb, vec![mixed, u])?
        }
        "T2.9-5" => {
            // For any tau in ker omega with omega in {beta, alpha+beta}, the
            // bracket of the mixed generator with an oblique element of
            // u_omega + u_(alpha+2beta) lands on the pure eta axis, which the
            // item excludes from h cap n. No closed subalgebra satisfies the
            // hypotheses; callers should use the predicted window only.
            return Err(Error::Unrealizable(
                "T2.9-5: bracket closure forces the eta axis into h cap n".to_string(),
            ));
        }
        "T2.9-6" => {
            if n < 4 {
                return Err(Error::Unrealizable(
                    "T2.9-6 needs a second x direction, hence n >= 4".to_string(),
                ));
            }
            let omega = params.omega.unwrap_or(Root::Beta);
            let (mixed, u) = match omega {
                Root::Beta => {
                    // x-part of u must be orthogonal to the y-direction of the
                    // mixed generator, else the bracket leaves the span.
                    let mixed = torus(n, rat_i(1), rat_i(0)).add(&y_hat(n, 0))?;
                    let u = x_hat(n, 1).add(&eta_hat(n))?;
                    (mixed, u)
                }
                Root::AlphaBeta => {
                    let mixed = torus(n, rat_i(0), rat_i(1)).add(&x_hat(n, 0))?;
                    let u = y_hat(n, 1).add(&eta_hat(n))?;
                    (mixed, u)
                }
                r => {
                    return Err(Error::InvalidParams(format!(
                        "T2.9-6 takes omega in {{beta, alpha+beta}}, got {}",
                        r.name()
                    )))
                }
            };
            Subalgebra::new(amb, vec![mixed, u])?
        }
        "T2.9-7" => {
            let omega = params.omega.unwrap_or(Root::Beta);
            let mixed = match omega {
                Root::Beta => torus(n, rat_i(1), rat_i(0)).add(&y_hat(n, 0))?,
                Root::AlphaBeta => torus(n, rat_i(0), rat_i(1)).add(&x_hat(n, 0))?,
                r => {
                    return Err(Error::InvalidParams(format!(
                        "T2.9-7 takes omega in {{beta, alpha+beta}}, got {}",
                        r.name()
                    )))
                }
            };
            Subalgebra::new(amb, vec![mixed, eta_hat(n)])?
        }
        "T2.9-8" => {
            let mixed = torus(n, rat_i(0), rat_i(1)).add(&x_hat(n, 0))?;
            Subalgebra::new(amb, vec![mixed, phi_hat(n)])?
        }
        _ => return Err(Error::UnknownLabel(label.to_string())),
    };
    Ok(built.with_label(label))
}

/// Torus direction of ker(p omega + gamma) where gamma is the root
/// perpendicular to omega.
pub fn p210_torus(omega: Root, p: &Rat) -> (Rat, Rat) {
    match omega {
        // ker(p alpha + (alpha+2beta)): (p+1) t1 + (1-p) t2 = 0.
        Root::Alpha => (Rat::one() - p, -(Rat::one() + p)),
        // ker(p beta + (alpha+beta)): t1 + p t2 = 0.
        Root::Beta => (-p.clone(), Rat::one()),
        // ker(p (alpha+beta) + beta): p t1 + t2 = 0.
        Root::AlphaBeta => (Rat::one(), -p.clone()),
        // ker(p (alpha+2beta) + alpha): (p+1) t1 + (p-1) t2 = 0.
        Root::Alpha2Beta => (Rat::one() - p, Rat::one() + p),
    }
}

/// Graph-of-B elements (x = e_i, y = B e_i) over an even-dimensional X0,
/// shared by T2.5-2 and T2.6-2. Returns the elements and the include_eta flag.
fn graph_elements(n: usize, params: &ExemplarParams) -> Result<(Vec<AlgElement>, bool)> {
    if n < 4 {
        return Err(Error::Unrealizable(
            "graph items need an even-dimensional X0, hence n >= 4".to_string(),
        ));
    }
    let include_eta = params.include_eta.unwrap_or(true);
    let b = match &params.b_matrix {
        Some(b) => {
            if b.nrows() > n - 2 {
                return Err(Error::DimensionMismatch(format!(
                    "graph matrix of size {} does not fit in x-space of dim {}",
                    b.nrows(),
                    n - 2
                )));
            }
            DeformationMatrix::new(b.clone())?
        }
        None => {
            let k = params.x0_dim.unwrap_or(2 * ((n - 2) / 2));
            if !k.is_multiple_of(2) || k == 0 || k > n - 2 {
                return Err(Error::InvalidParams(format!(
                    "x0_dim must be a nonzero even number at most {}, got {k}",
                    n - 2
                )));
            }
            DeformationMatrix::new(standard_j(k))?
        }
    };
    let k = b.size();
    let elements = (0..k)
        .map(|i| {
            let mut c = ANCoords::zero(n);
            c.x[i] = rat_i(1);
            let col = b.matrix().col(i);
            c.y[..k].clone_from_slice(&col);
            an_element(n, &c).unwrap()
        })
        .collect();
    Ok((elements, include_eta))
}

/// Nilpotent part of the stabilizer-type items (T2.5-4 body, T2.6-5 body):
/// y = 0, x in phi c + X0, eta = p phi + b . x, with the sign condition
/// |b|^2 - |c|^2 - 2p < 0 enforced.
fn stabilizer_type_nilpotents(n: usize, params: &ExemplarParams) -> Result<Vec<AlgElement>> {
    let k = params.x0_dim.unwrap_or(n - 2).min(n - 2);
    let p = params.p.clone().unwrap_or_else(|| rat_i(1));
    let b = params.b_vec.clone().unwrap_or_else(|| vec![Rat::zero(); k]);
    if b.len() != k {
        return Err(Error::InvalidParams("b must have length x0_dim".to_string()));
    }
    let c_vec = params.c_vec.clone().unwrap_or_else(|| vec![Rat::zero(); n - 2 - k]);
    if c_vec.len() != n - 2 - k {
        return Err(Error::InvalidParams("c must have length (n-2) - x0_dim".to_string()));
    }
    let b_norm2: Rat = b.iter().map(|v| v * v).sum();
    let c_norm2: Rat = c_vec.iter().map(|v| v * v).sum();
    let sign = b_norm2 - c_norm2 - rat_i(2) * &p;
    if !sign.is_negative() {
        return Err(Error::InvalidParams(format!(
            "sign condition |b|^2 - |c|^2 - 2p < 0 fails: {sign}"
        )));
    }
    let mut elements = Vec::new();
    // The phi-carrying generator: phi = 1, x = c (in X0-perp), eta = p + b.c.
    let mut co = ANCoords::zero(n);
    co.phi = rat_i(1);
    for (i, cv) in c_vec.iter().enumerate() {
        co.x[k + i] = cv.clone();
    }
    co.eta = p.clone(); // b . c = 0 because b lives in X0
    elements.push(an_element(n, &co)?);
    for (i, bv) in b.iter().enumerate() {
        let mut co = ANCoords::zero(n);
        co.x[i] = rat_i(1);
        co.eta = bv.clone();
        elements.push(an_element(n, &co)?);
    }
    Ok(elements)
}

/// All catalog labels, with the default ambient dimension at which each item
/// is nonvacuous and a short description.
pub fn list_labels(n: usize) -> Vec<(String, String, bool)> {
    let realizable = |l: &str| exemplar(l, n.max(4), &ExemplarParams::default()).is_ok();
    let mut out: Vec<(String, String, bool)> = Vec::new();
    let mut push = |label: &str, desc: &str, ok: bool| {
        out.push((label.to_string(), desc.to_string(), ok));
    };
    push("T2.5-1", "unipotent, dim <= 1; single rate in {0, 1, 3/2, 2}", true);
    push("T2.5-2", "unipotent graph family, quadratic window", n >= 4 || realizable("T2.5-2"));
    push("T2.5-3", "unipotent, all pairs aligned, linear window", n >= 4);
    push("T2.5-4", "unipotent stabilizer type, linear window", true);
    push("T2.6-1", "one-dimensional torus", true);
    push("T2.6-2", "ker(alpha) torus over the graph family, quadratic window", n >= 4);
    push("T2.6-3", "ker(beta) torus over an x-space, linear window", true);
    push("T2.6-4", "ker(alpha+beta) torus over a y-space, linear window", true);
    push("T2.6-5", "ker(beta) stabilizer type, linear window", true);
    push("T2.6-6", "ker(alpha-beta) torus over phi+y, rate 3/2", true);
    push("T2.6-7", "ker(beta), dim 2, nondegenerate quadratic, linear window", true);
    push("T2.6-8", "alias of P2.10", true);
    push("T2.9-1", "mixed alpha line over u_(alpha+beta)", true);
    push("T2.9-2", "mixed alpha line over the eta axis", true);
    push("T2.9-3", "mixed alpha+2beta line over the phi axis", true);
    push("T2.9-4", "mixed alpha+2beta line over u_beta or u_(alpha+beta)", true);
    push("T2.9-5", "oblique window [1, 3/2] (not realizable as a closed algebra)", false);
    push("T2.9-6", "mixed short-root line over the opposite root space", n >= 4);
    push("T2.9-7", "mixed short-root line over the eta axis", true);
    push("T2.9-8", "mixed alpha+beta line over the phi axis", true);
    push("P2.10", "torus ker(p omega + gamma) over a single root space", true);
    push("h_B", "deformation family in so(2,2m), even n only", n.is_multiple_of(2) && n >= 4);
    push("h_SU", "h_B at the standard block complex structure", n.is_multiple_of(2) && n >= 4);
    push("so1n_an", "split-vector stabilizer intersected with a+n", true);
    push("l5", "principal three-dimensional subalgebra", true);
    push("l5_an", "l5 intersected with a+n", true);
    push("an_full", "all of a+n (Cartan-decomposition subgroup)", true);
    push("sl2-top-left", "sl(2,R) in the top-left block of sl(3,R)", true);
    push("full-diagonal-torus", "diagonal torus of sl(3,R)", true);
    push("upper-triangular-2d", "solvable 2-dim subalgebra of sl(3,R)", true);
    out
}

/// Build any catalog entry by label.
pub fn emit(label: &str, n: usize, params: &ExemplarParams) -> Result<Subalgebra> {
    match label {
        "h_B" => {
            if !n.is_multiple_of(2) || n < 4 {
                return Err(Error::InvalidDimension(format!(
                    "h_B lives in so(2,2m); n = {n} is not even and >= 4"
                )));
            }
            let m = n / 2;
            let b = match &params.b_matrix {
                Some(b) => DeformationMatrix::new(b.clone())?,
                None => DeformationMatrix::new(standard_j(2 * m - 2))?,
            };
            h_b(m, &b)
        }
        "h_SU" => {
            if !n.is_multiple_of(2) || n < 4 {
                return Err(Error::InvalidDimension(format!(
                    "h_SU lives in so(2,2m); n = {n} is not even and >= 4"
                )));
            }
            let m = n / 2;
            let b = DeformationMatrix::new(standard_j(2 * m - 2))?;
            Ok(h_b(m, &b)?.with_label("h_SU"))
        }
        "so1n_an" => so1n_an(n),
        "l5" => l5(n),
        "l5_an" => l5_an(n),
        "an_full" => an_full(n),
        "sl2-top-left" | "full-diagonal-torus" | "upper-triangular-2d" => {
            sl3_subgroup(Sl3Subgroup::parse(label)?)
        }
        other => exemplar(other, n, params),
    }
}

/// Membership probe used by tests: are the coordinates of m expressible in
/// the subalgebra basis?
pub fn coords_in_subalgebra(h: &Subalgebra, m: &RatMat) -> Option<Vec<Rat>> {
    coords_in_span(&h.flat_basis(), &m.flatten())
}

//! Ambient groups and algebras: the indefinite form on R^{n+2}, the a+n
//! matrix slice, brackets, exponentials, and the root-space decomposition.
//!
//! For so(2,n) we fix the basis in which the preserved symmetric form Q has
//! ones at positions (1,n+2) and (2,n+1) (and mirrors) and on the middle
//! diagonal. In this basis the upper-triangular slice a+n consists exactly of
//! the matrices
//!
//! ```text
//!   ( t1   phi  x^T    eta   0    )
//!   (      t2   y^T    0    -eta  )
//!   (           0      -y   -x   )
//!   (                  -t2  -phi  )
//!   (                        -t1  )
//! ```
//!
//! and the first two rows determine the whole matrix. The orthogonal change
//! of basis P diagonalizes Q to n entries +1 followed by 2 entries -1, which
//! makes the Cartan involution transpose-inverse and the Cartan projection a
//! singular value computation.

use crate::error::{Error, Result};
use crate::rat::{rat_from_f64, rat_i, Rat, RatMat};
use nalgebra::DMatrix;
use num_traits::{One, Zero};

/// Max-entry tolerance for the group-element invariant g^T Q g = Q.
pub const GROUP_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum Ambient {
    #[serde(rename = "so2n")]
    So2n { n: usize },
    #[serde(rename = "sl3")]
    Sl3,
}

impl Ambient {
    pub fn matrix_dim(&self) -> usize {
        match self {
            Ambient::So2n { n } => n + 2,
            Ambient::Sl3 => 3,
        }
    }

    pub fn describe(&self) -> String {
        match self {
            Ambient::So2n { n } => format!("so(2,{n})"),
            Ambient::Sl3 => "sl(3,R)".to_string(),
        }
    }
}

/// The bilinear space for so(2,n): exact form matrix Q and the orthogonal
/// change of basis P into the signature-diagonal basis.
#[derive(Clone, Debug)]
pub struct BilinearSpace {
    pub n: usize,
    /// Symmetric (n+2)x(n+2) form matrix, exact.
    pub q: RatMat,
    /// Orthogonal matrix with P Q P^T = diag(+1 x n, -1 x 2).
    pub p: DMatrix<f64>,
}

impl BilinearSpace {
    /// Value of the quadratic form v^T Q v.
    pub fn eval(&self, v: &[Rat]) -> Rat {
        assert_eq!(v.len(), self.n + 2);
        let qv = self.q.matvec(v);
        v.iter().zip(qv.iter()).map(|(a, b)| a * b).sum()
    }
}

/// Build the bilinear space for so(2,n).
pub fn form_matrix(n: usize) -> Result<BilinearSpace> {
    if n < 3 {
        return Err(Error::InvalidDimension(format!("need n >= 3, got {n}")));
    }
    let size = n + 2;
    let mut q = RatMat::zeros(size, size);
    q.set(0, size - 1, rat_i(1));
    q.set(size - 1, 0, rat_i(1));
    q.set(1, size - 2, rat_i(1));
    q.set(size - 2, 1, rat_i(1));
    for i in 2..size - 2 {
        q.set(i, i, rat_i(1));
    }
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let mut p = DMatrix::zeros(size, size);
    // Positive directions: (e1 + e_{n+2})/sqrt2, (e2 + e_{n+1})/sqrt2, middle e_i.
    p[(0, 0)] = s;
    p[(0, size - 1)] = s;
    p[(1, 1)] = s;
    p[(1, size - 2)] = s;
    for i in 2..size - 2 {
        p[(i, i)] = 1.0;
    }
    // Negative directions: (e2 - e_{n+1})/sqrt2, (e1 - e_{n+2})/sqrt2.
    p[(size - 2, 1)] = s;
    p[(size - 2, size - 2)] = -s;
    p[(size - 1, 0)] = s;
    p[(size - 1, size - 1)] = -s;
    Ok(BilinearSpace { n, q, p })
}

/// Coordinates (t1, t2, phi, x, y, eta) on the a+n slice of so(2,n).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ANCoords {
    pub t1: Rat,
    pub t2: Rat,
    pub phi: Rat,
    pub x: Vec<Rat>,
    pub y: Vec<Rat>,
    pub eta: Rat,
}

impl ANCoords {
    pub fn zero(n: usize) -> Self {
        ANCoords {
            t1: Rat::zero(),
            t2: Rat::zero(),
            phi: Rat::zero(),
            x: vec![Rat::zero(); n - 2],
            y: vec![Rat::zero(); n - 2],
            eta: Rat::zero(),
        }
    }

    /// Exact conversion from floating input (finite doubles only).
    pub fn from_f64(t1: f64, t2: f64, phi: f64, x: &[f64], y: &[f64], eta: f64) -> Result<Self> {
        let conv = |v: f64| -> Result<Rat> {
            rat_from_f64(v).ok_or_else(|| Error::InvalidParams(format!("non-finite value {v}")))
        };
        Ok(ANCoords {
            t1: conv(t1)?,
            t2: conv(t2)?,
            phi: conv(phi)?,
            x: x.iter().map(|&v| conv(v)).collect::<Result<_>>()?,
            y: y.iter().map(|&v| conv(v)).collect::<Result<_>>()?,
            eta: conv(eta)?,
        })
    }

    pub fn is_zero(&self) -> bool {
        self.t1.is_zero()
            && self.t2.is_zero()
            && self.phi.is_zero()
            && self.eta.is_zero()
            && self.x.iter().all(|v| v.is_zero())
            && self.y.iter().all(|v| v.is_zero())
    }

    /// Is the a-part zero (element of n)?
    pub fn is_nilpotent(&self) -> bool {
        self.t1.is_zero() && self.t2.is_zero()
    }
}

/// An element of so(2,n) or sl(3,R): exact matrix plus a+n coordinates when
/// the element lies in the upper-triangular slice.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgElement {
    pub ambient: Ambient,
    pub mat: RatMat,
    pub coords: Option<ANCoords>,
}

impl AlgElement {
    pub fn zero(ambient: Ambient) -> Self {
        let d = ambient.matrix_dim();
        let mat = RatMat::zeros(d, d);
        let coords = match ambient {
            Ambient::So2n { n } => Some(ANCoords::zero(n)),
            Ambient::Sl3 => None,
        };
        AlgElement { ambient, mat, coords }
    }

    pub fn is_zero(&self) -> bool {
        self.mat.is_zero()
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_ambient(other)?;
        let mat = self.mat.add(&other.mat);
        Ok(from_matrix_unchecked(self.ambient, mat))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_ambient(other)?;
        let mat = self.mat.sub(&other.mat);
        Ok(from_matrix_unchecked(self.ambient, mat))
    }

    pub fn scale(&self, c: &Rat) -> Self {
        from_matrix_unchecked(self.ambient, self.mat.scale(c))
    }

    fn check_ambient(&self, other: &Self) -> Result<()> {
        if self.ambient != other.ambient {
            return Err(Error::AmbientMismatch {
                left: self.ambient.describe(),
                right: other.ambient.describe(),
            });
        }
        Ok(())
    }

    /// Frobenius norm of the float image, used for direction normalization.
    pub fn fro_norm_f64(&self) -> f64 {
        self.mat.to_f64().norm()
    }
}

/// Construct the a+n matrix of so(2,n) from coordinates.
pub fn an_element(n: usize, c: &ANCoords) -> Result<AlgElement> {
    if n < 3 {
        return Err(Error::InvalidDimension(format!("need n >= 3, got {n}")));
    }
    if c.x.len() != n - 2 || c.y.len() != n - 2 {
        return Err(Error::DimensionMismatch(format!(
            "x and y must have length n-2 = {}, got {} and {}",
            n - 2,
            c.x.len(),
            c.y.len()
        )));
    }
    let size = n + 2;
    let mut m = RatMat::zeros(size, size);
    m.set(0, 0, c.t1.clone());
    m.set(0, 1, c.phi.clone());
    m.set(0, size - 2, c.eta.clone());
    m.set(1, 1, c.t2.clone());
    m.set(1, size - 1, -c.eta.clone());
    for i in 0..n - 2 {
        m.set(0, 2 + i, c.x[i].clone());
        m.set(1, 2 + i, c.y[i].clone());
        m.set(2 + i, size - 2, -c.y[i].clone());
        m.set(2 + i, size - 1, -c.x[i].clone());
    }
    m.set(size - 2, size - 2, -c.t2.clone());
    m.set(size - 2, size - 1, -c.phi.clone());
    m.set(size - 1, size - 1, -c.t1.clone());
    Ok(AlgElement { ambient: Ambient::So2n { n }, mat: m, coords: Some(c.clone()) })
}

/// Read a+n coordinates off a matrix if it matches the slice pattern exactly.
pub fn detect_an_coords(n: usize, m: &RatMat) -> Option<ANCoords> {
    let size = n + 2;
    if m.nrows() != size || m.ncols() != size {
        return None;
    }
    let c = ANCoords {
        t1: m.get(0, 0).clone(),
        t2: m.get(1, 1).clone(),
        phi: m.get(0, 1).clone(),
        x: (0..n - 2).map(|i| m.get(0, 2 + i).clone()).collect(),
        y: (0..n - 2).map(|i| m.get(1, 2 + i).clone()).collect(),
        eta: m.get(0, size - 2).clone(),
    };
    let rebuilt = an_element(n, &c).ok()?;
    if rebuilt.mat == *m {
        Some(c)
    } else {
        None
    }
}

fn from_matrix_unchecked(ambient: Ambient, mat: RatMat) -> AlgElement {
    let coords = match ambient {
        Ambient::So2n { n } => detect_an_coords(n, &mat),
        Ambient::Sl3 => None,
    };
    AlgElement { ambient, mat, coords }
}

/// Validate a matrix as an element of the ambient algebra and wrap it.
pub fn alg_from_matrix(ambient: Ambient, mat: RatMat) -> Result<AlgElement> {
    let d = ambient.matrix_dim();
    if mat.nrows() != d || mat.ncols() != d {
        return Err(Error::DimensionMismatch(format!(
            "expected {d}x{d} matrix for {}",
            ambient.describe()
        )));
    }
    match ambient {
        Ambient::So2n { n } => {
            let space = form_matrix(n)?;
            let lhs = mat.transpose().mul(&space.q).add(&space.q.mul(&mat));
            if !lhs.is_zero() {
                return Err(Error::NotInAlgebra(
                    "M^T Q + Q M != 0: matrix does not preserve the form".to_string(),
                ));
            }
        }
        Ambient::Sl3 => {
            if !mat.trace().is_zero() {
                return Err(Error::NotInAlgebra("nonzero trace".to_string()));
            }
        }
    }
    Ok(from_matrix_unchecked(ambient, mat))
}

/// Commutator [X, Y] = XY - YX. Carries a+n coordinates when the result lies
/// in the slice.
pub fn bracket(x: &AlgElement, y: &AlgElement) -> Result<AlgElement> {
    x.check_ambient(y)?;
    let m = x.mat.mul(&y.mat).sub(&y.mat.mul(&x.mat));
    Ok(from_matrix_unchecked(x.ambient, m))
}

/// A group element: float matrix satisfying the ambient invariant.
#[derive(Clone, Debug)]
pub struct GroupElement {
    pub ambient: Ambient,
    pub g: DMatrix<f64>,
}

impl GroupElement {
    pub fn identity(ambient: Ambient) -> Self {
        let d = ambient.matrix_dim();
        GroupElement { ambient, g: DMatrix::identity(d, d) }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.ambient != other.ambient {
            return Err(Error::AmbientMismatch {
                left: self.ambient.describe(),
                right: other.ambient.describe(),
            });
        }
        Ok(GroupElement { ambient: self.ambient, g: &self.g * &other.g })
    }

    /// Invariant defect: max-entry residual of g^T Q g - Q (so(2,n)) or
    /// |det g - 1| (sl3).
    pub fn invariant_defect(&self) -> f64 {
        match self.ambient {
            Ambient::So2n { n } => {
                let q = form_matrix(n).expect("valid n").q.to_f64();
                let r = self.g.transpose() * &q * &self.g - &q;
                r.amax()
            }
            Ambient::Sl3 => (self.g.determinant() - 1.0).abs(),
        }
    }
}

/// Matrix exponential of t*X via Pade-13 scaling and squaring.
pub fn exp_element(x: &AlgElement, t: f64) -> GroupElement {
    let m = x.mat.to_f64() * t;
    GroupElement { ambient: x.ambient, g: expm(&m) }
}

/// Product exp(t1 X1) exp(t2 X2).
pub fn exp_product(x1: &AlgElement, t1: f64, x2: &AlgElement, t2: f64) -> Result<GroupElement> {
    exp_element(x1, t1).mul(&exp_element(x2, t2))
}

/// Dense matrix exponential, Pade order 13 with scaling and squaring.
pub fn expm(a: &DMatrix<f64>) -> DMatrix<f64> {
    const B: [f64; 14] = [
        64764752532480000.0,
        32382376266240000.0,
        7771770303897600.0,
        1187353796428800.0,
        129060195264000.0,
        10559470521600.0,
        670442572800.0,
        33522128640.0,
        1323241920.0,
        40840800.0,
        960960.0,
        16380.0,
        182.0,
        1.0,
    ];
    const THETA_13: f64 = 5.371920351148152;
    let n = a.nrows();
    let norm = a.iter().map(|v| v.abs()).fold(0.0f64, f64::max) * n as f64; // crude 1-norm bound
    let s = if norm > THETA_13 { (norm / THETA_13).log2().ceil().max(0.0) as u32 } else { 0 };
    let a = a / 2f64.powi(s as i32);
    let id = DMatrix::<f64>::identity(n, n);
    let a2 = &a * &a;
    let a4 = &a2 * &a2;
    let a6 = &a2 * &a4;
    let u_inner = &a6 * (B[13] * &a6 + B[11] * &a4 + B[9] * &a2)
        + B[7] * &a6
        + B[5] * &a4
        + B[3] * &a2
        + B[1] * &id;
    let u = &a * u_inner;
    let v = &a6 * (B[12] * &a6 + B[10] * &a4 + B[8] * &a2)
        + B[6] * &a6
        + B[4] * &a4
        + B[2] * &a2
        + B[0] * &id;
    let num = &v + &u;
    let den = &v - &u;
    let mut r = den.lu().solve(&num).expect("Pade denominator is invertible");
    for _ in 0..s {
        r = &r * &r;
    }
    r
}

/// Exact exponential of a nilpotent rational matrix (series truncates).
pub fn exp_nilpotent_exact(m: &RatMat) -> Result<RatMat> {
    let n = m.nrows();
    let mut acc = RatMat::identity(n);
    let mut pw = RatMat::identity(n);
    let mut fact = Rat::one();
    for k in 1..=n {
        pw = pw.mul(m);
        if pw.is_zero() {
            return Ok(acc);
        }
        fact *= rat_i(k as i64);
        acc = acc.add(&pw.scale(&(Rat::one() / fact.clone())));
    }
    if pw.is_zero() {
        Ok(acc)
    } else {
        Err(Error::InvalidParams("matrix is not nilpotent".to_string()))
    }
}

/// The four positive roots of so(2,n), as linear functionals on (t1, t2).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum Root {
    #[serde(rename = "alpha")]
    Alpha,
    #[serde(rename = "beta")]
    Beta,
    #[serde(rename = "alpha+beta")]
    AlphaBeta,
    #[serde(rename = "alpha+2beta")]
    Alpha2Beta,
}

pub const POSITIVE_ROOTS: [Root; 4] = [Root::Alpha, Root::Beta, Root::AlphaBeta, Root::Alpha2Beta];

impl Root {
    /// Value on the a-element (t1, t2).
    pub fn eval(&self, t1: &Rat, t2: &Rat) -> Rat {
        match self {
            Root::Alpha => t1 - t2,
            Root::Beta => t2.clone(),
            Root::AlphaBeta => t1.clone(),
            Root::Alpha2Beta => t1 + t2,
        }
    }

    /// The positive root perpendicular to this one; {alpha, alpha+2beta} and
    /// {beta, alpha+beta} are the perpendicular pairs.
    pub fn perpendicular(&self) -> Root {
        match self {
            Root::Alpha => Root::Alpha2Beta,
            Root::Alpha2Beta => Root::Alpha,
            Root::Beta => Root::AlphaBeta,
            Root::AlphaBeta => Root::Beta,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Root::Alpha => "alpha",
            Root::Beta => "beta",
            Root::AlphaBeta => "alpha+beta",
            Root::Alpha2Beta => "alpha+2beta",
        }
    }
}

/// Root-space components of an a+n element: the a-part and one block per
/// positive root (alpha: phi, beta: y, alpha+beta: x, alpha+2beta: eta).
#[derive(Clone, Debug)]
pub struct RootComponents {
    pub a: (Rat, Rat),
    pub alpha: Rat,
    pub beta: Vec<Rat>,
    pub alpha_beta: Vec<Rat>,
    pub alpha_2beta: Rat,
}

impl RootComponents {
    pub fn component_is_zero(&self, root: Root) -> bool {
        match root {
            Root::Alpha => self.alpha.is_zero(),
            Root::Beta => self.beta.iter().all(|v| v.is_zero()),
            Root::AlphaBeta => self.alpha_beta.iter().all(|v| v.is_zero()),
            Root::Alpha2Beta => self.alpha_2beta.is_zero(),
        }
    }
}

/// Decompose an a+n element into root components.
pub fn root_components(x: &AlgElement) -> Result<RootComponents> {
    let coords = x
        .coords
        .as_ref()
        .ok_or_else(|| Error::NotTriangular("element has no a+n coordinates".to_string()))?;
    Ok(RootComponents {
        a: (coords.t1.clone(), coords.t2.clone()),
        alpha: coords.phi.clone(),
        beta: coords.y.clone(),
        alpha_beta: coords.x.clone(),
        alpha_2beta: coords.eta.clone(),
    })
}

/// Basis of the full a+n subalgebra of so(2,n), torus generators first.
pub fn an_basis(n: usize) -> Result<Vec<AlgElement>> {
    let mut out = Vec::new();
    let mut c = ANCoords::zero(n);
    c.t1 = rat_i(1);
    out.push(an_element(n, &c)?);
    let mut c = ANCoords::zero(n);
    c.t2 = rat_i(1);
    out.push(an_element(n, &c)?);
    let mut c = ANCoords::zero(n);
    c.phi = rat_i(1);
    out.push(an_element(n, &c)?);
    for i in 0..n - 2 {
        let mut c = ANCoords::zero(n);
        c.x[i] = rat_i(1);
        out.push(an_element(n, &c)?);
    }
    for i in 0..n - 2 {
        let mut c = ANCoords::zero(n);
        c.y[i] = rat_i(1);
        out.push(an_element(n, &c)?);
    }
    let mut c = ANCoords::zero(n);
    c.eta = rat_i(1);
    out.push(an_element(n, &c)?);
    Ok(out)
}

/// Basis of the a+n subalgebra of sl(3,R): two torus directions, three
/// upper-triangular nilpotents.
pub fn sl3_an_basis() -> Vec<AlgElement> {
    let e = |i: usize, j: usize| {
        let mut m = RatMat::zeros(3, 3);
        m.set(i, j, rat_i(1));
        m
    };
    let mut d1 = RatMat::zeros(3, 3);
    d1.set(0, 0, rat_i(1));
    d1.set(1, 1, rat_i(-1));
    let mut d2 = RatMat::zeros(3, 3);
    d2.set(1, 1, rat_i(1));
    d2.set(2, 2, rat_i(-1));
    [d1, d2, e(0, 1), e(1, 2), e(0, 2)]
        .into_iter()
        .map(|m| alg_from_matrix(Ambient::Sl3, m).expect("traceless"))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::rat;

    #[test]
    fn form_matrix_examples() {
        let sp = form_matrix(3).unwrap();
        // Middle basis vector has norm 1.
        let e3: Vec<Rat> = (0..5).map(|i| if i == 2 { rat_i(1) } else { rat_i(0) }).collect();
        assert_eq!(sp.eval(&e3), rat_i(1));
        // Isotropic first basis vector.
        let e1: Vec<Rat> = (0..5).map(|i| if i == 0 { rat_i(1) } else { rat_i(0) }).collect();
        assert_eq!(sp.eval(&e1), rat_i(0));
        // Split vector e1 + e5 pairs with itself through the corner entry.
        let v: Vec<Rat> =
            (0..5).map(|i| if i == 0 || i == 4 { rat_i(1) } else { rat_i(0) }).collect();
        assert_eq!(sp.eval(&v), rat_i(2));
        assert!(form_matrix(2).is_err());
    }

    #[test]
    fn p_is_orthogonal_and_diagonalizes_q() {
        for n in [3usize, 4, 6] {
            let sp = form_matrix(n).unwrap();
            let p = &sp.p;
            let id = DMatrix::<f64>::identity(n + 2, n + 2);
            assert!((p.transpose() * p - &id).amax() < 1e-14);
            let d = p * sp.q.to_f64() * p.transpose();
            for i in 0..n + 2 {
                for j in 0..n + 2 {
                    let want = if i != j {
                        0.0
                    } else if i < n {
                        1.0
                    } else {
                        -1.0
                    };
                    assert!((d[(i, j)] - want).abs() < 1e-14, "n={n} ({i},{j})");
                }
            }
        }
    }

    #[test]
    fn an_element_examples() {
        let n = 4;
        // Zero coords give the zero matrix.
        let z = an_element(n, &ANCoords::zero(n)).unwrap();
        assert!(z.mat.is_zero());
        // t1 = 1 alone gives diag(1, 0, ..., 0, -1).
        let mut c = ANCoords::zero(n);
        c.t1 = rat_i(1);
        let e = an_element(n, &c).unwrap();
        for i in 0..n + 2 {
            for j in 0..n + 2 {
                let want = if (i, j) == (0, 0) {
                    rat_i(1)
                } else if (i, j) == (n + 1, n + 1) {
                    rat_i(-1)
                } else {
                    rat_i(0)
                };
                assert_eq!(*e.mat.get(i, j), want);
            }
        }
        // Wrong vector length errors.
        let bad = ANCoords { x: vec![rat_i(1)], ..ANCoords::zero(n) };
        assert!(an_element(n, &bad).is_err());
    }

    #[test]
    fn generic_element_is_in_algebra() {
        let n = 5;
        let sp = form_matrix(n).unwrap();
        let c = ANCoords {
            t1: rat(3, 2),
            t2: rat(-1, 3),
            phi: rat(2, 7),
            x: vec![rat_i(1), rat(1, 2), rat_i(-2)],
            y: vec![rat(5, 3), rat_i(0), rat_i(4)],
            eta: rat(-7, 4),
        };
        let e = an_element(n, &c).unwrap();
        let lhs = e.mat.transpose().mul(&sp.q).add(&sp.q.mul(&e.mat));
        assert!(lhs.is_zero(), "M^T Q + Q M must vanish exactly");
        // Round-trip through coordinate detection.
        assert_eq!(detect_an_coords(n, &e.mat).unwrap(), c);
        // And through the validating constructor.
        let e2 = alg_from_matrix(Ambient::So2n { n }, e.mat.clone()).unwrap();
        assert_eq!(e2.coords.unwrap(), c);
    }

    #[test]
    fn bracket_examples() {
        let n = 4;
        // [X, X] = 0.
        let mut c = ANCoords::zero(n);
        c.phi = rat_i(1);
        c.x[0] = rat_i(2);
        let x = an_element(n, &c).unwrap();
        assert!(bracket(&x, &x).unwrap().is_zero());
        // u_beta against u_{alpha+beta} with matching unit vectors lands on
        // the eta axis.
        let mut cy = ANCoords::zero(n);
        cy.y[0] = rat_i(1);
        let mut cx = ANCoords::zero(n);
        cx.x[0] = rat_i(1);
        let b = bracket(&an_element(n, &cy).unwrap(), &an_element(n, &cx).unwrap()).unwrap();
        let bc = b.coords.expect("bracket stays in a+n");
        assert!(bc.t1.is_zero() && bc.t2.is_zero() && bc.phi.is_zero());
        assert!(bc.x.iter().all(|v| v.is_zero()) && bc.y.iter().all(|v| v.is_zero()));
        assert_eq!(bc.eta, rat_i(1));
    }

    #[test]
    fn exp_examples() {
        let n = 3;
        // exp(0) is the identity.
        let z = AlgElement::zero(Ambient::So2n { n });
        let g = exp_element(&z, 1.0);
        assert!((&g.g - DMatrix::<f64>::identity(5, 5)).amax() < 1e-15);
        // Diagonal a-element exponentiates entrywise.
        let mut c = ANCoords::zero(n);
        c.t1 = rat_i(2);
        c.t2 = rat_i(1);
        let a = an_element(n, &c).unwrap();
        let g = exp_element(&a, 1.0);
        let want = [2.0f64.exp(), 1.0f64.exp(), 1.0, (-1.0f64).exp(), (-2.0f64).exp()];
        for (i, w) in want.iter().enumerate() {
            assert!((g.g[(i, i)] - w).abs() < 1e-12 * w);
        }
        assert!(g.invariant_defect() < GROUP_TOL);
        // Nilpotent exponential truncates at degree <= 4 and matches expm.
        let mut cn = ANCoords::zero(n);
        cn.phi = rat(1, 2);
        cn.y[0] = rat_i(1);
        cn.eta = rat(-1, 3);
        let x = an_element(n, &cn).unwrap();
        let exact = exp_nilpotent_exact(&x.mat).unwrap().to_f64();
        let pade = exp_element(&x, 1.0).g;
        assert!((exact - pade).amax() < 1e-12);
    }

    #[test]
    fn root_component_examples() {
        let n = 4;
        let z = AlgElement::zero(Ambient::So2n { n });
        let rc = root_components(&z).unwrap();
        assert!(rc.component_is_zero(Root::Alpha) && rc.component_is_zero(Root::Beta));
        // h_SU-style generator x=(1,0), y=(0,1): alpha-component vanishes.
        let mut c = ANCoords::zero(n);
        c.x[0] = rat_i(1);
        c.y[1] = rat_i(1);
        let e = an_element(n, &c).unwrap();
        let rc = root_components(&e).unwrap();
        assert!(rc.alpha.is_zero());
        // Stabilizer-slice element: eta equals phi.
        let mut c = ANCoords::zero(n);
        c.t1 = rat_i(1);
        c.phi = rat(3, 5);
        c.x[0] = rat_i(2);
        c.eta = rat(3, 5);
        let e = an_element(n, &c).unwrap();
        let rc = root_components(&e).unwrap();
        assert_eq!(rc.alpha, rc.alpha_2beta);
        // Non-triangular input errors.
        let mut low = RatMat::zeros(n + 2, n + 2);
        low.set(1, 0, rat_i(1));
        low.set(n + 1, n, rat_i(-1));
        let el = alg_from_matrix(Ambient::So2n { n }, low).unwrap();
        assert!(root_components(&el).is_err());
    }

    #[test]
    fn ambient_mismatch_and_dimension_errors() {
        let x = AlgElement::zero(Ambient::So2n { n: 3 });
        let y = AlgElement::zero(Ambient::Sl3);
        assert!(matches!(bracket(&x, &y), Err(crate::error::Error::AmbientMismatch { .. })));
        assert!(matches!(
            an_element(2, &ANCoords::zero(3)),
            Err(crate::error::Error::InvalidDimension(_))
        ));
        // A non-finite coordinate is rejected at conversion.
        assert!(ANCoords::from_f64(f64::NAN, 0.0, 0.0, &[0.0], &[0.0], 0.0).is_err());
    }

    #[test]
    fn roots_eval_and_perp() {
        let t1 = rat_i(4);
        let t2 = rat_i(2);
        assert_eq!(Root::Alpha.eval(&t1, &t2), rat_i(2));
        assert_eq!(Root::Beta.eval(&t1, &t2), rat_i(2));
        assert_eq!(Root::AlphaBeta.eval(&t1, &t2), rat_i(4));
        assert_eq!(Root::Alpha2Beta.eval(&t1, &t2), rat_i(6));
        assert_eq!(Root::Alpha.perpendicular(), Root::Alpha2Beta);
        assert_eq!(Root::Beta.perpendicular(), Root::AlphaBeta);
    }
}

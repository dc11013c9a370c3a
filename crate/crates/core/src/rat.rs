//! Exact rational scalars, dense matrices, and polynomial utilities.
//!
//! Construction and membership questions in this crate are decided in exact
//! arithmetic so that classification never depends on a floating tolerance.
//! Floating point enters only through [`RatMat::to_f64`] on the way to the
//! numerical layer (exponentials, singular values).

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Rat = BigRational;

/// Integer-valued rational.
pub fn rat_i(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// n/d as a rational. Panics if d == 0.
pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Exact conversion of a finite f64 (every finite double is a dyadic rational).
pub fn rat_from_f64(x: f64) -> Option<Rat> {
    Rat::from_float(x)
}

pub fn rat_to_f64(x: &Rat) -> f64 {
    // Good enough for the magnitudes in this crate; numer/denom stay small.
    let n = x.numer();
    let d = x.denom();
    bigint_to_f64(n) / bigint_to_f64(d)
}

fn bigint_to_f64(n: &BigInt) -> f64 {
    use num_traits::ToPrimitive;
    n.to_f64().unwrap_or(f64::NAN)
}

/// Dense row-major matrix over the rationals.
#[derive(Clone, PartialEq, Eq)]
pub struct RatMat {
    nrows: usize,
    ncols: usize,
    data: Vec<Rat>,
}

impl std::fmt::Debug for RatMat {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "RatMat {}x{} [", self.nrows, self.ncols)?;
        for i in 0..self.nrows {
            let row: Vec<String> = (0..self.ncols).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl RatMat {
    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        RatMat { nrows, ncols, data: vec![Rat::zero(); nrows * ncols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rat::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rat>>) -> Self {
        let nrows = rows.len();
        let ncols = rows.first().map(|r| r.len()).unwrap_or(0);
        let mut data = Vec::with_capacity(nrows * ncols);
        for r in rows {
            assert_eq!(r.len(), ncols, "ragged rows");
            data.extend(r);
        }
        RatMat { nrows, ncols, data }
    }

    pub fn from_fn(nrows: usize, ncols: usize, mut f: impl FnMut(usize, usize) -> Rat) -> Self {
        let mut m = Self::zeros(nrows, ncols);
        for i in 0..nrows {
            for j in 0..ncols {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn is_square(&self) -> bool {
        self.nrows == self.ncols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> &Rat {
        &self.data[i * self.ncols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Rat) {
        self.data[i * self.ncols + j] = v;
    }

    pub fn row(&self, i: usize) -> Vec<Rat> {
        (0..self.ncols).map(|j| self.get(i, j).clone()).collect()
    }

    pub fn col(&self, j: usize) -> Vec<Rat> {
        (0..self.nrows).map(|i| self.get(i, j).clone()).collect()
    }

    /// Flattened entries in row-major order.
    pub fn flatten(&self) -> Vec<Rat> {
        self.data.clone()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.ncols, self.nrows, |i, j| self.get(j, i).clone())
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.nrows, self.ncols), (other.nrows, other.ncols));
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect();
        RatMat { nrows: self.nrows, ncols: self.ncols, data }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.nrows, self.ncols), (other.nrows, other.ncols));
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect();
        RatMat { nrows: self.nrows, ncols: self.ncols, data }
    }

    pub fn neg(&self) -> Self {
        let data = self.data.iter().map(|a| -a.clone()).collect();
        RatMat { nrows: self.nrows, ncols: self.ncols, data }
    }

    pub fn scale(&self, c: &Rat) -> Self {
        let data = self.data.iter().map(|a| a * c).collect();
        RatMat { nrows: self.nrows, ncols: self.ncols, data }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.ncols, other.nrows, "inner dimension mismatch");
        let mut out = Self::zeros(self.nrows, other.ncols);
        for i in 0..self.nrows {
            for k in 0..self.ncols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.ncols {
                    let b = other.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let cur = out.get(i, j) + a * b;
                    out.set(i, j, cur);
                }
            }
        }
        out
    }

    pub fn matvec(&self, v: &[Rat]) -> Vec<Rat> {
        assert_eq!(self.ncols, v.len());
        (0..self.nrows)
            .map(|i| (0..self.ncols).map(|j| self.get(i, j) * &v[j]).sum())
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn trace(&self) -> Rat {
        assert!(self.is_square());
        (0..self.nrows).map(|i| self.get(i, i).clone()).sum()
    }

    pub fn to_f64(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.nrows, self.ncols, |i, j| rat_to_f64(self.get(i, j)))
    }

    pub fn from_f64_exact(m: &DMatrix<f64>) -> Option<Self> {
        let mut out = Self::zeros(m.nrows(), m.ncols());
        for i in 0..m.nrows() {
            for j in 0..m.ncols() {
                out.set(i, j, rat_from_f64(m[(i, j)])?);
            }
        }
        Some(out)
    }

    /// Reduced row echelon form in place; returns the pivot columns.
    pub fn rref_in_place(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.ncols {
            if r == self.nrows {
                break;
            }
            // Find a nonzero pivot in column c at or below row r.
            let mut piv = None;
            for i in r..self.nrows {
                if !self.get(i, c).is_zero() {
                    piv = Some(i);
                    break;
                }
            }
            let Some(p) = piv else { continue };
            if p != r {
                for j in 0..self.ncols {
                    self.data.swap(r * self.ncols + j, p * self.ncols + j);
                }
            }
            let inv = {
                let pv = self.get(r, c).clone();
                Rat::one() / pv
            };
            for j in c..self.ncols {
                let v = self.get(r, j) * &inv;
                self.set(r, j, v);
            }
            for i in 0..self.nrows {
                if i == r || self.get(i, c).is_zero() {
                    continue;
                }
                let f = self.get(i, c).clone();
                for j in c..self.ncols {
                    let v = self.get(i, j) - &f * self.get(r, j);
                    self.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.rref_in_place().len()
    }

    /// Basis of { v : self * v = 0 }.
    pub fn nullspace(&self) -> Vec<Vec<Rat>> {
        let mut m = self.clone();
        let pivots = m.rref_in_place();
        let mut free: Vec<usize> = (0..self.ncols).filter(|c| !pivots.contains(c)).collect();
        free.sort_unstable();
        let mut basis = Vec::new();
        for &fc in &free {
            let mut v = vec![Rat::zero(); self.ncols];
            v[fc] = Rat::one();
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = -m.get(r, fc).clone();
            }
            basis.push(v);
        }
        basis
    }

    /// One exact solution of self * x = b, if consistent.
    pub fn solve(&self, b: &[Rat]) -> Option<Vec<Rat>> {
        assert_eq!(self.nrows, b.len());
        let mut aug = RatMat::zeros(self.nrows, self.ncols + 1);
        for (i, bv) in b.iter().enumerate() {
            for j in 0..self.ncols {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, self.ncols, bv.clone());
        }
        let pivots = aug.rref_in_place();
        if pivots.contains(&self.ncols) {
            return None; // inconsistent
        }
        let mut x = vec![Rat::zero(); self.ncols];
        for (r, &pc) in pivots.iter().enumerate() {
            x[pc] = aug.get(r, self.ncols).clone();
        }
        Some(x)
    }

    /// Exact determinant by Gaussian elimination.
    pub fn det(&self) -> Rat {
        assert!(self.is_square());
        let n = self.nrows;
        let mut m = self.clone();
        let mut det = Rat::one();
        for c in 0..n {
            let mut piv = None;
            for i in c..n {
                if !m.get(i, c).is_zero() {
                    piv = Some(i);
                    break;
                }
            }
            let Some(p) = piv else { return Rat::zero() };
            if p != c {
                for j in 0..n {
                    m.data.swap(c * n + j, p * n + j);
                }
                det = -det;
            }
            let pivot = m.get(c, c).clone();
            det *= &pivot;
            for i in (c + 1)..n {
                if m.get(i, c).is_zero() {
                    continue;
                }
                let f = m.get(i, c) / &pivot;
                for j in c..n {
                    let v = m.get(i, j) - &f * m.get(c, j);
                    m.set(i, j, v);
                }
            }
        }
        det
    }

    /// Characteristic polynomial (monic, ascending coefficients) by the
    /// Faddeev-LeVerrier recursion.
    pub fn char_poly(&self) -> RatPoly {
        assert!(self.is_square());
        let n = self.nrows;
        let mut coeffs = vec![Rat::zero(); n + 1];
        coeffs[n] = Rat::one();
        let mut m = RatMat::identity(n);
        for k in 1..=n {
            m = self.mul(&m);
            let c = -(m.trace() / rat_i(k as i64));
            coeffs[n - k] = c.clone();
            for i in 0..n {
                let v = m.get(i, i) + &c;
                m.set(i, i, v);
            }
        }
        RatPoly::new(coeffs)
    }

    /// Jordan block sizes of a nilpotent matrix, descending. Rank-based, exact.
    /// Panics if the matrix is not nilpotent within nrows steps.
    pub fn nilpotent_block_sizes(&self) -> Vec<usize> {
        assert!(self.is_square());
        let n = self.nrows;
        let mut ranks = vec![n]; // rank of self^0
        let mut pw = self.clone();
        for _ in 0..n {
            let r = pw.rank();
            ranks.push(r);
            if r == 0 {
                break;
            }
            pw = pw.mul(self);
        }
        assert_eq!(*ranks.last().unwrap(), 0, "matrix is not nilpotent");
        // blocks of size >= k: rank(N^{k-1}) - rank(N^k)
        let mut sizes = Vec::new();
        for k in 1..ranks.len() {
            let at_least_k = ranks[k - 1] - ranks[k];
            let at_least_k1 = if k + 1 < ranks.len() { ranks[k] - ranks[k + 1] } else { 0 };
            let exactly_k = at_least_k - at_least_k1;
            for _ in 0..exactly_k {
                sizes.push(k);
            }
        }
        sizes.sort_unstable_by(|a, b| b.cmp(a));
        sizes
    }
}

/// Rank of the row span of a set of vectors.
pub fn span_rank(vectors: &[Vec<Rat>]) -> usize {
    if vectors.is_empty() {
        return 0;
    }
    RatMat::from_rows(vectors.to_vec()).rank()
}

/// Is v in the span of the given vectors? Exact.
pub fn in_span(vectors: &[Vec<Rat>], v: &[Rat]) -> bool {
    if v.iter().all(|x| x.is_zero()) {
        return true;
    }
    if vectors.is_empty() {
        return false;
    }
    // Solve basis^T c = v.
    let cols = RatMat::from_rows(vectors.to_vec()).transpose();
    cols.solve(v).is_some()
}

/// Coordinates of v in the given (independent) spanning set, if it lies there.
pub fn coords_in_span(vectors: &[Vec<Rat>], v: &[Rat]) -> Option<Vec<Rat>> {
    if vectors.is_empty() {
        return if v.iter().all(|x| x.is_zero()) { Some(vec![]) } else { None };
    }
    let cols = RatMat::from_rows(vectors.to_vec()).transpose();
    cols.solve(v)
}

/// Reduce a spanning set to an independent basis (keeps first occurrences).
pub fn independent_subset(vectors: &[Vec<Rat>]) -> Vec<Vec<Rat>> {
    let mut basis: Vec<Vec<Rat>> = Vec::new();
    for v in vectors {
        if v.iter().all(|x| x.is_zero()) {
            continue;
        }
        if !in_span(&basis, v) {
            basis.push(v.clone());
        }
    }
    basis
}

/// Polynomial with rational coefficients, ascending order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatPoly {
    coeffs: Vec<Rat>,
}

impl RatPoly {
    pub fn new(mut coeffs: Vec<Rat>) -> Self {
        while coeffs.len() > 1 && coeffs.last().map(|c| c.is_zero()).unwrap_or(false) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(Rat::zero());
        }
        RatPoly { coeffs }
    }

    pub fn zero() -> Self {
        RatPoly { coeffs: vec![Rat::zero()] }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn leading(&self) -> &Rat {
        self.coeffs.last().unwrap()
    }

    pub fn eval(&self, x: &Rat) -> Rat {
        let mut acc = Rat::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() <= 1 {
            return Self::zero();
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c * rat_i(i as i64))
            .collect();
        Self::new(coeffs)
    }

    /// Euclidean division: self = q * d + r with deg r < deg d.
    pub fn divrem(&self, d: &Self) -> (Self, Self) {
        assert!(!d.is_zero(), "division by zero polynomial");
        let mut r = self.coeffs.clone();
        let dd = d.degree();
        let lead = d.leading().clone();
        if self.degree() < dd || self.is_zero() {
            return (Self::zero(), self.clone());
        }
        let mut q = vec![Rat::zero(); self.degree() - dd + 1];
        for k in (0..q.len()).rev() {
            let c = &r[k + dd] / &lead;
            q[k] = c.clone();
            if c.is_zero() {
                continue;
            }
            for (i, dc) in d.coeffs.iter().enumerate() {
                let v = &r[k + i] - &c * dc;
                r[k + i] = v;
            }
        }
        (Self::new(q), Self::new(r))
    }

    pub fn gcd(&self, other: &Self) -> Self {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.divrem(&b);
            a = b;
            b = r;
        }
        if a.is_zero() {
            return a;
        }
        // Normalize monic.
        let lead = a.leading().clone();
        Self::new(a.coeffs.iter().map(|c| c / &lead).collect())
    }

    /// Squarefree part self / gcd(self, self').
    pub fn squarefree(&self) -> Self {
        if self.degree() == 0 {
            return self.clone();
        }
        let g = self.gcd(&self.derivative());
        if g.degree() == 0 {
            return self.clone();
        }
        let (q, _) = self.divrem(&g);
        q
    }

    /// Number of distinct real roots, by a Sturm chain. Exact.
    pub fn count_real_roots(&self) -> usize {
        if self.is_zero() {
            panic!("zero polynomial has infinitely many roots");
        }
        let p = self.squarefree();
        if p.degree() == 0 {
            return 0;
        }
        let mut chain = vec![p.clone(), p.derivative()];
        loop {
            let n = chain.len();
            if chain[n - 1].is_zero() {
                chain.pop();
                break;
            }
            let (_, r) = chain[n - 2].divrem(&chain[n - 1]);
            if r.is_zero() {
                break;
            }
            chain.push(RatPoly::new(r.coeffs.iter().map(|c| -c.clone()).collect()));
        }
        let sign_at_inf = |p: &RatPoly, positive: bool| -> i32 {
            let lead = p.leading();
            if lead.is_zero() {
                return 0;
            }
            let mut s = if lead.is_positive() { 1 } else { -1 };
            if !positive && p.degree() % 2 == 1 {
                s = -s;
            }
            s
        };
        let variations = |positive: bool| -> usize {
            let mut count = 0;
            let mut last = 0i32;
            for p in &chain {
                let s = sign_at_inf(p, positive);
                if s == 0 {
                    continue;
                }
                if last != 0 && s != last {
                    count += 1;
                }
                last = s;
            }
            count
        };
        variations(false) - variations(true)
    }
}

impl RatPoly {
    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut coeffs = vec![Rat::zero(); n];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[i] = coeffs[i].clone() + c;
        }
        for (i, c) in other.coeffs.iter().enumerate() {
            coeffs[i] = coeffs[i].clone() + c;
        }
        Self::new(coeffs)
    }

    pub fn scale(&self, c: &Rat) -> Self {
        Self::new(self.coeffs.iter().map(|v| v * c).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![Rat::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] = coeffs[i + j].clone() + a * b;
            }
        }
        Self::new(coeffs)
    }
}

/// Lagrange interpolation through distinct nodes; exact.
pub fn lagrange_interpolate(points: &[(Rat, Rat)]) -> RatPoly {
    let mut acc = RatPoly::zero();
    for (i, (xi, yi)) in points.iter().enumerate() {
        if yi.is_zero() {
            continue;
        }
        let mut term = RatPoly::new(vec![Rat::one()]);
        let mut denom = Rat::one();
        for (j, (xj, _)) in points.iter().enumerate() {
            if i == j {
                continue;
            }
            term = term.mul(&RatPoly::new(vec![-xj.clone(), Rat::one()]));
            denom *= xi - xj;
        }
        acc = acc.add(&term.scale(&(yi / &denom)));
    }
    acc
}

/// Does the square rational matrix have a real eigenvalue? Exact Sturm test.
pub fn has_real_eigenvalue(m: &RatMat) -> bool {
    m.char_poly().count_real_roots() > 0
}

//! Exact rational and integer linear algebra, and lattice operations.
//!
//! Everything downstream (cone decompositions, generating functions, the
//! Ehrhart pipeline, the brute-force oracle) runs on the types defined here.
//! There is no floating point anywhere: scalars are [`Rat`] =
//! arbitrary-precision rationals, lattices are handled through Hermite normal
//! forms of integer matrices.

use num::{BigInt, BigRational, Integer, One, Signed, Zero};

use crate::error::{Error, Result};

pub type Int = BigInt;
pub type Rat = BigRational;
pub type IntVec = Vec<Int>;
pub type RatVec = Vec<Rat>;

pub fn int(n: i64) -> Int {
    Int::from(n)
}

pub fn rat(n: i64) -> Rat {
    Rat::from_integer(Int::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rat {
    Rat::new(Int::from(n), Int::from(d))
}

pub fn int_vec(entries: &[i64]) -> IntVec {
    entries.iter().map(|&n| int(n)).collect()
}

pub fn rat_vec(entries: &[i64]) -> RatVec {
    entries.iter().map(|&n| rat(n)).collect()
}

/// Parses `"p/q"` or `"p"` into a rational. Used for all numeric I/O.
pub fn parse_rat(s: &str) -> Result<Rat> {
    let s = s.trim();
    let make = |part: &str| -> Result<Int> {
        part.trim()
            .parse::<Int>()
            .map_err(|_| Error::Domain(format!("cannot parse '{s}' as a rational")))
    };
    match s.split_once('/') {
        None => Ok(Rat::from_integer(make(s)?)),
        Some((p, q)) => {
            let denom = make(q)?;
            if denom.is_zero() {
                return Err(Error::Domain(format!("zero denominator in '{s}'")));
            }
            Ok(Rat::new(make(p)?, denom))
        }
    }
}

/// Renders a rational as `"p/q"`, or just `"p"` when the denominator is 1.
pub fn format_rat(x: &Rat) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn int_to_rat_vec(v: &[Int]) -> RatVec {
    v.iter().map(|n| Rat::from_integer(n.clone())).collect()
}

pub fn dot(a: &[Rat], b: &[Rat]) -> Rat {
    debug_assert_eq!(a.len(), b.len(), "dot product dimension mismatch");
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn dot_int(a: &[Int], b: &[Int]) -> Int {
    debug_assert_eq!(a.len(), b.len(), "dot product dimension mismatch");
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// ⟨a, b⟩ with an integer left factor and rational right factor.
pub fn dot_ir(a: &[Int], b: &[Rat]) -> Rat {
    debug_assert_eq!(a.len(), b.len(), "dot product dimension mismatch");
    a.iter()
        .zip(b)
        .map(|(x, y)| Rat::from_integer(x.clone()) * y)
        .sum()
}

pub fn vec_add(a: &[Rat], b: &[Rat]) -> RatVec {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn vec_sub(a: &[Rat], b: &[Rat]) -> RatVec {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn vec_scale(c: &Rat, a: &[Rat]) -> RatVec {
    a.iter().map(|x| c * x).collect()
}

pub fn vec_neg_int(a: &[Int]) -> IntVec {
    a.iter().map(|x| -x).collect()
}

pub fn is_zero_vec(a: &[Rat]) -> bool {
    a.iter().all(|x| x.is_zero())
}

/// Fractional part `{x}_q = x − q⌊x/q⌋ ∈ [0, q)` for `q > 0`.
pub fn frac_part(x: &Rat, q: &Int) -> Rat {
    debug_assert!(q.is_positive(), "period must be positive");
    let qr = Rat::from_integer(q.clone());
    x - &qr * (x / &qr).floor()
}

// ---------------------------------------------------------------------------
// Matrices
// ---------------------------------------------------------------------------

/// Dense rational matrix, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatMat {
    rows: usize,
    cols: usize,
    data: Vec<Rat>,
}

impl RatMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RatMat {
            rows,
            cols,
            data: vec![Rat::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Rat::one();
        }
        m
    }

    pub fn from_rows(rows: &[RatVec]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        RatMat {
            rows: rows.len(),
            cols,
            data: rows.concat(),
        }
    }

    /// Builds the matrix whose j-th column is `cols[j]`.
    pub fn from_cols(cols: &[RatVec]) -> Self {
        let rows = cols.first().map_or(0, |c| c.len());
        assert!(cols.iter().all(|c| c.len() == rows), "ragged columns");
        let mut m = Self::zeros(rows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            for (i, x) in c.iter().enumerate() {
                m[(i, j)] = x.clone();
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[Rat] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> RatVec {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn col_vecs(&self) -> Vec<RatVec> {
        (0..self.cols).map(|j| self.col(j)).collect()
    }

    pub fn transpose(&self) -> RatMat {
        let mut t = RatMat::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &RatMat) -> RatMat {
        assert_eq!(self.cols, other.rows, "matrix product shape mismatch");
        let mut out = RatMat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = Rat::zero();
                for k in 0..self.cols {
                    acc += &self[(i, k)] * &other[(k, j)];
                }
                out[(i, j)] = acc;
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Rat]) -> RatVec {
        assert_eq!(self.cols, v.len(), "matrix-vector shape mismatch");
        (0..self.rows).map(|i| dot(self.row(i), v)).collect()
    }

    /// Gaussian elimination into reduced row echelon form; returns the rank
    /// and applies the same operations to `rhs` (when given).
    fn rref(&self, rhs: Option<&RatMat>) -> (RatMat, Option<RatMat>, usize, Vec<usize>) {
        let mut a = self.clone();
        let mut b = rhs.cloned();
        let mut pivot_cols = Vec::new();
        let mut r = 0;
        for c in 0..a.cols {
            let Some(p) = (r..a.rows).find(|&i| !a[(i, c)].is_zero()) else {
                continue;
            };
            a.swap_rows(r, p);
            if let Some(b) = b.as_mut() {
                b.swap_rows(r, p);
            }
            let inv = a[(r, c)].recip();
            a.scale_row(r, &inv);
            if let Some(b) = b.as_mut() {
                b.scale_row(r, &inv);
            }
            for i in 0..a.rows {
                if i != r && !a[(i, c)].is_zero() {
                    let f = a[(i, c)].clone();
                    a.row_sub_mul(i, r, &f);
                    if let Some(b) = b.as_mut() {
                        b.row_sub_mul(i, r, &f);
                    }
                }
            }
            pivot_cols.push(c);
            r += 1;
            if r == a.rows {
                break;
            }
        }
        (a, b, r, pivot_cols)
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for c in 0..self.cols {
            let x = self[(i, c)].clone();
            self[(i, c)] = self[(j, c)].clone();
            self[(j, c)] = x;
        }
    }

    fn scale_row(&mut self, i: usize, f: &Rat) {
        for c in 0..self.cols {
            self[(i, c)] = &self[(i, c)] * f;
        }
    }

    /// row_i -= f · row_j
    fn row_sub_mul(&mut self, i: usize, j: usize, f: &Rat) {
        for c in 0..self.cols {
            self[(i, c)] = &self[(i, c)] - f * &self[(j, c)];
        }
    }

    pub fn rank(&self) -> usize {
        self.rref(None).2
    }

    pub fn det(&self) -> Rat {
        assert_eq!(self.rows, self.cols, "determinant of non-square matrix");
        let mut a = self.clone();
        let mut det = Rat::one();
        for c in 0..a.cols {
            let Some(p) = (c..a.rows).find(|&i| !a[(i, c)].is_zero()) else {
                return Rat::zero();
            };
            if p != c {
                a.swap_rows(c, p);
                det = -det;
            }
            det *= a[(c, c)].clone();
            let inv = a[(c, c)].recip();
            for i in c + 1..a.rows {
                if !a[(i, c)].is_zero() {
                    let f = &a[(i, c)] * &inv;
                    a.row_sub_mul(i, c, &f);
                }
            }
        }
        det
    }

    pub fn inverse(&self) -> Option<RatMat> {
        assert_eq!(self.rows, self.cols, "inverse of non-square matrix");
        let (_, inv, rank, _) = self.rref(Some(&RatMat::identity(self.rows)));
        (rank == self.rows).then(|| inv.unwrap())
    }

    /// Solves `self · x = v`. Returns `None` when inconsistent; for
    /// underdetermined systems an arbitrary solution (free variables 0).
    pub fn solve(&self, v: &[Rat]) -> Option<RatVec> {
        assert_eq!(self.rows, v.len(), "solve shape mismatch");
        let rhs = RatMat::from_cols(&[v.to_vec()]);
        let (a, b, rank, pivot_cols) = self.rref(Some(&rhs));
        let b = b.unwrap();
        // Rows below the rank must have zero right-hand side.
        for i in rank..a.rows {
            if !b[(i, 0)].is_zero() {
                return None;
            }
        }
        let mut x = vec![Rat::zero(); self.cols];
        for (r, &c) in pivot_cols.iter().enumerate() {
            x[c] = b[(r, 0)].clone();
        }
        Some(x)
    }
}

impl std::ops::Index<(usize, usize)> for RatMat {
    type Output = Rat;
    fn index(&self, (i, j): (usize, usize)) -> &Rat {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for RatMat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rat {
        &mut self.data[i * self.cols + j]
    }
}

/// Dense integer matrix, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntMat {
    rows: usize,
    cols: usize,
    data: Vec<Int>,
}

impl IntMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMat {
            rows,
            cols,
            data: vec![Int::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Int::one();
        }
        m
    }

    pub fn from_rows(rows: &[IntVec]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        IntMat {
            rows: rows.len(),
            cols,
            data: rows.concat(),
        }
    }

    pub fn from_cols(cols: &[IntVec]) -> Self {
        let rows = cols.first().map_or(0, |c| c.len());
        assert!(cols.iter().all(|c| c.len() == rows), "ragged columns");
        let mut m = Self::zeros(rows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            for (i, x) in c.iter().enumerate() {
                m[(i, j)] = x.clone();
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[Int] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> IntVec {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn col_vecs(&self) -> Vec<IntVec> {
        (0..self.cols).map(|j| self.col(j)).collect()
    }

    pub fn to_rat(&self) -> RatMat {
        let mut m = RatMat::zeros(self.rows, self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m[(i, j)] = Rat::from_integer(self[(i, j)].clone());
            }
        }
        m
    }

    pub fn mul(&self, other: &IntMat) -> IntMat {
        assert_eq!(self.cols, other.rows, "matrix product shape mismatch");
        let mut out = IntMat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = Int::zero();
                for k in 0..self.cols {
                    acc += &self[(i, k)] * &other[(k, j)];
                }
                out[(i, j)] = acc;
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Int]) -> IntVec {
        assert_eq!(self.cols, v.len(), "matrix-vector shape mismatch");
        (0..self.rows).map(|i| dot_int(self.row(i), v)).collect()
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> Int {
        assert_eq!(self.rows, self.cols, "determinant of non-square matrix");
        let n = self.rows;
        if n == 0 {
            return Int::one();
        }
        let mut a = self.clone();
        let mut sign = Int::one();
        let mut prev = Int::one();
        for k in 0..n - 1 {
            if a[(k, k)].is_zero() {
                let Some(p) = (k + 1..n).find(|&i| !a[(i, k)].is_zero()) else {
                    return Int::zero();
                };
                a.swap_rows_int(k, p);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = &a[(i, j)] * &a[(k, k)] - &a[(i, k)] * &a[(k, j)];
                    a[(i, j)] = num.div_floor(&prev);
                }
                a[(i, k)] = Int::zero();
            }
            prev = a[(k, k)].clone();
        }
        sign * a[(n - 1, n - 1)].clone()
    }

    fn swap_rows_int(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for c in 0..self.cols {
            let x = self[(i, c)].clone();
            self[(i, c)] = self[(j, c)].clone();
            self[(j, c)] = x;
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for r in 0..self.rows {
            let x = self[(r, i)].clone();
            self[(r, i)] = self[(r, j)].clone();
            self[(r, j)] = x;
        }
    }

    /// col_i -= f · col_j
    fn col_sub_mul(&mut self, i: usize, j: usize, f: &Int) {
        for r in 0..self.rows {
            self[(r, i)] = &self[(r, i)] - f * &self[(r, j)];
        }
    }

    fn negate_col(&mut self, j: usize) {
        for r in 0..self.rows {
            self[(r, j)] = -self[(r, j)].clone();
        }
    }
}

impl std::ops::Index<(usize, usize)> for IntMat {
    type Output = Int;
    fn index(&self, (i, j): (usize, usize)) -> &Int {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Int {
        &mut self.data[i * self.cols + j]
    }
}

// ---------------------------------------------------------------------------
// Hermite normal form and kernels
// ---------------------------------------------------------------------------

/// Column echelon reduction by unimodular column operations.
///
/// Returns `(h, u, pivots)` with `a·u = h`, `u` unimodular, the first
/// `pivots.len()` columns of `h` in lower-triangular Hermite form (positive
/// pivots, entries to the left of a pivot reduced into `[0, pivot)`), and all
/// later columns zero. `pivots[k]` is the row of the k-th pivot.
fn column_echelon(a: &IntMat) -> (IntMat, IntMat, Vec<usize>) {
    let mut h = a.clone();
    let mut u = IntMat::identity(a.cols());
    let mut pivots = Vec::new();
    let mut c = 0;
    for row in 0..h.rows() {
        if c == h.cols() {
            break;
        }
        if (c..h.cols()).all(|j| h[(row, j)].is_zero()) {
            continue;
        }
        // Euclid across columns c.. until a single nonzero remains in this row.
        loop {
            let mut best: Option<usize> = None;
            for j in c..h.cols() {
                if !h[(row, j)].is_zero()
                    && best.map_or(true, |b| h[(row, j)].abs() < h[(row, b)].abs())
                {
                    best = Some(j);
                }
            }
            let b = best.expect("nonzero entry exists in this row");
            h.swap_cols(c, b);
            u.swap_cols(c, b);
            let mut done = true;
            for j in c + 1..h.cols() {
                if !h[(row, j)].is_zero() {
                    let q = h[(row, j)].div_floor(&h[(row, c)]);
                    if !q.is_zero() {
                        h.col_sub_mul(j, c, &q);
                        u.col_sub_mul(j, c, &q);
                    }
                    if !h[(row, j)].is_zero() {
                        done = false;
                    }
                }
            }
            if done {
                break;
            }
        }
        if h[(row, c)].is_negative() {
            h.negate_col(c);
            u.negate_col(c);
        }
        // Reduce earlier columns in this row into [0, pivot).
        for j in 0..c {
            let q = h[(row, j)].div_floor(&h[(row, c)]);
            if !q.is_zero() {
                h.col_sub_mul(j, c, &q);
                u.col_sub_mul(j, c, &q);
            }
        }
        pivots.push(row);
        c += 1;
    }
    (h, u, pivots)
}

/// Column-style Hermite normal form of a full-row-rank integer matrix.
///
/// `a·u = h` with `u` unimodular, `h` lower-triangular with positive diagonal
/// and off-diagonal entries reduced into `[0, diagonal)`.
pub fn hnf(a: &IntMat) -> Result<(IntMat, IntMat)> {
    let (h, u, pivots) = column_echelon(a);
    if pivots.len() < a.rows() {
        return Err(Error::Rank(format!(
            "{}×{} matrix has rank {}",
            a.rows(),
            a.cols(),
            pivots.len()
        )));
    }
    Ok((h, u))
}

/// Basis (as columns) of the integer kernel `{x ∈ ℤ^n : a·x = 0}`.
pub fn integer_kernel(a: &IntMat) -> IntMat {
    let (_, u, pivots) = column_echelon(a);
    let free = u.cols() - pivots.len();
    let mut out = IntMat::zeros(u.rows(), free);
    for (k, j) in (u.cols() - free..u.cols()).enumerate() {
        for i in 0..u.rows() {
            out[(i, k)] = u[(i, j)].clone();
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Lattices
// ---------------------------------------------------------------------------

/// A full-rank-in-its-span lattice given by an independent basis.
///
/// Stored as an integer matrix over a common positive denominator because a
/// lattice living in a rational subspace, or a projected lattice, need not be
/// integral in ambient coordinates. Columns of `mat / denom` are the basis
/// vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeBasis {
    mat: IntMat,
    denom: Int,
}

impl LatticeBasis {
    /// The standard lattice ℤ^d.
    pub fn standard(d: usize) -> Self {
        LatticeBasis {
            mat: IntMat::identity(d),
            denom: Int::one(),
        }
    }

    /// Builds a lattice from independent rational basis vectors.
    pub fn from_columns(basis: &[RatVec]) -> Result<Self> {
        let m = RatMat::from_cols(basis);
        if m.rank() < basis.len() {
            return Err(Error::Rank("lattice basis vectors are dependent".into()));
        }
        let mut denom = Int::one();
        for j in 0..m.cols() {
            for i in 0..m.rows() {
                denom = denom.lcm(m[(i, j)].denom());
            }
        }
        let mut mat = IntMat::zeros(m.rows(), m.cols());
        for i in 0..m.rows() {
            for j in 0..m.cols() {
                let scaled = &m[(i, j)] * Rat::from_integer(denom.clone());
                debug_assert!(scaled.is_integer());
                mat[(i, j)] = scaled.to_integer();
            }
        }
        Ok(LatticeBasis { mat, denom }.normalized())
    }

    fn normalized(mut self) -> Self {
        let mut g = self.denom.clone();
        for x in &self.mat.data {
            g = g.gcd(x);
            if g.is_one() {
                return self;
            }
        }
        if !g.is_one() && !g.is_zero() {
            for x in &mut self.mat.data {
                *x = x.div_floor(&g);
            }
            self.denom = self.denom.div_floor(&g);
        }
        self
    }

    pub fn ambient_dim(&self) -> usize {
        self.mat.rows()
    }

    pub fn rank(&self) -> usize {
        self.mat.cols()
    }

    pub fn basis_vector(&self, j: usize) -> RatVec {
        self.mat
            .col(j)
            .into_iter()
            .map(|n| Rat::new(n, self.denom.clone()))
            .collect()
    }

    pub fn basis_vectors(&self) -> Vec<RatVec> {
        (0..self.rank()).map(|j| self.basis_vector(j)).collect()
    }

    pub fn to_rat_mat(&self) -> RatMat {
        RatMat::from_cols(&self.basis_vectors())
    }

    /// Coordinates of `v` in this basis, or `None` if `v` is outside the span.
    pub fn coordinates_of(&self, v: &[Rat]) -> Option<RatVec> {
        let m = self.to_rat_mat();
        let x = m.solve(v)?;
        // solve() may return a least-structure solution even when v is outside
        // the span of a non-square system; verify.
        if m.mul_vec(&x) == v.to_vec() {
            Some(x)
        } else {
            None
        }
    }

    /// Whether `v` is a lattice point.
    pub fn contains(&self, v: &[Rat]) -> bool {
        self.coordinates_of(v)
            .is_some_and(|x| x.iter().all(|c| c.is_integer()))
    }

    /// The lattice point with the given integer coordinates.
    pub fn point_at(&self, coords: &[Int]) -> RatVec {
        let m = self.to_rat_mat();
        m.mul_vec(&int_to_rat_vec(coords))
    }
}

/// Basis of the image of `lattice` under projection onto the span of
/// `complement_basis` along the span of `l_basis`, in complement coordinates.
///
/// The two spans must be complementary subspaces of the ambient space. The
/// result lives in ℝ^k, k = number of complement columns: coordinate `j`
/// measures the `complement_basis[j]` component. Projected lattices are
/// usually *not* integral — projecting ℤ² along (1,2) onto the first axis
/// gives ℤ·(1/2).
pub fn projected_lattice(
    lattice: &LatticeBasis,
    l_basis: &RatMat,
    complement_basis: &RatMat,
) -> Result<LatticeBasis> {
    let d = lattice.ambient_dim();
    if l_basis.cols() + complement_basis.cols() != d
        || l_basis.rows() != d
        || complement_basis.rows() != d
    {
        return Err(Error::Dimension(format!(
            "subspace ({} cols) and complement ({} cols) do not split ℝ^{d}",
            l_basis.cols(),
            complement_basis.cols()
        )));
    }
    let k = complement_basis.cols();
    let mut cols = complement_basis.col_vecs();
    cols.extend(l_basis.col_vecs());
    let chart = RatMat::from_cols(&cols);
    let Some(chart_inv) = chart.inverse() else {
        return Err(Error::Dimension(
            "subspace and complement overlap (not a direct sum)".into(),
        ));
    };
    // Projection of each lattice basis vector, as complement coordinates.
    let projected: Vec<RatVec> = lattice
        .basis_vectors()
        .iter()
        .map(|v| chart_inv.mul_vec(v)[..k].to_vec())
        .collect();
    lattice_hull(&projected, k)
}

/// Basis of the lattice generated by arbitrary rational vectors in ℝ^k.
pub fn lattice_hull(generators: &[RatVec], ambient_dim: usize) -> Result<LatticeBasis> {
    let mut denom = Int::one();
    for g in generators {
        for x in g {
            denom = denom.lcm(x.denom());
        }
    }
    let mut m = IntMat::zeros(ambient_dim, generators.len());
    for (j, g) in generators.iter().enumerate() {
        assert_eq!(g.len(), ambient_dim, "generator dimension mismatch");
        for (i, x) in g.iter().enumerate() {
            let scaled = x * Rat::from_integer(denom.clone());
            debug_assert!(scaled.is_integer());
            m[(i, j)] = scaled.to_integer();
        }
    }
    let (h, _, pivots) = column_echelon(&m);
    let basis: Vec<IntVec> = (0..pivots.len()).map(|j| h.col(j)).collect();
    Ok(LatticeBasis {
        mat: IntMat::from_cols(&basis),
        denom,
    }
    .normalized())
}

/// Basis of `L ∩ ℤ^d` for the subspace `L` spanned by the given columns.
///
/// Computed as the integer kernel of a matrix of covectors vanishing on `L`,
/// so the result is saturated (primitive as a sublattice).
pub fn subspace_lattice(l_basis: &RatMat) -> Result<LatticeBasis> {
    let d = l_basis.rows();
    let k = l_basis.cols();
    if k == 0 {
        return Ok(LatticeBasis {
            mat: IntMat::zeros(d, 0),
            denom: Int::one(),
        });
    }
    if l_basis.to_owned().rank() < k {
        return Err(Error::Rank("subspace basis is dependent".into()));
    }
    // Covectors vanishing on L = kernel of L^T, cleared to integers.
    let lt = l_basis.transpose();
    let (a, _, _, pivot_cols) = lt.rref(None);
    let rank = pivot_cols.len();
    let mut covectors: Vec<RatVec> = Vec::new();
    let pivot_set: Vec<usize> = pivot_cols;
    for free in 0..d {
        if pivot_set.contains(&free) {
            continue;
        }
        let mut v = vec![Rat::zero(); d];
        v[free] = Rat::one();
        for (r, &pc) in pivot_set.iter().enumerate() {
            v[pc] = -a[(r, free)].clone();
        }
        covectors.push(v);
    }
    debug_assert_eq!(covectors.len(), d - rank);
    let mut denom = Int::one();
    for c in &covectors {
        for x in c {
            denom = denom.lcm(x.denom());
        }
    }
    let mut rows = Vec::new();
    for c in &covectors {
        rows.push(
            c.iter()
                .map(|x| (x * Rat::from_integer(denom.clone())).to_integer())
                .collect::<IntVec>(),
        );
    }
    // A full-dimensional subspace has no vanishing covectors; keep the
    // ambient width so the kernel is all of ℤ^d.
    let m = if rows.is_empty() {
        IntMat::zeros(0, d)
    } else {
        IntMat::from_rows(&rows)
    };
    let kernel = integer_kernel(&m);
    Ok(LatticeBasis {
        mat: kernel,
        denom: Int::one(),
    })
}

/// Indices of standard basis vectors completing the columns of `l_basis` to a
/// basis of ℝ^d, chosen greedily in ascending order.
///
/// The returned axes fix a chart on the quotient ℝ^d / L once and for all;
/// every caller that needs quotient coordinates goes through this choice so
/// that results are reproducible.
pub fn complement_axes(l_basis: &RatMat) -> Result<Vec<usize>> {
    let d = l_basis.rows();
    let m = l_basis.cols();
    if l_basis.rank() < m {
        return Err(Error::Rank("subspace basis is dependent".into()));
    }
    let mut cols = l_basis.col_vecs();
    let mut axes = Vec::with_capacity(d - m);
    let mut rank = m;
    for j in 0..d {
        if rank == d {
            break;
        }
        let mut e = vec![Rat::zero(); d];
        e[j] = Rat::one();
        cols.push(e);
        if RatMat::from_cols(&cols).rank() == rank + 1 {
            axes.push(j);
            rank += 1;
        } else {
            cols.pop();
        }
    }
    debug_assert_eq!(rank, d, "standard axes always complete a basis");
    Ok(axes)
}

/// Smallest positive integer `q` with `q·s` integral (lcm of denominators).
pub fn smallest_dilation(s: &[Rat]) -> Int {
    s.iter().fold(Int::one(), |acc, x| acc.lcm(x.denom()))
}

/// The primitive integer vector on the ray ℝ₊·v.
pub fn primitive(v: &[Rat]) -> Result<IntVec> {
    if is_zero_vec(v) {
        return Err(Error::ZeroVector);
    }
    let denom = v.iter().fold(Int::one(), |acc, x| acc.lcm(x.denom()));
    let ints: IntVec = v
        .iter()
        .map(|x| (x * Rat::from_integer(denom.clone())).to_integer())
        .collect();
    let g = ints.iter().fold(Int::zero(), |acc, x| acc.gcd(x));
    Ok(ints.iter().map(|x| x.div_floor(&g)).collect())
}

/// Rows of the result are the covectors η_i with ⟨η_i, w_j⟩ = δ_ij, i.e. the
/// inverse of the matrix whose columns are the w_j.
pub fn dual_basis(w: &RatMat) -> Result<RatMat> {
    w.inverse().ok_or(Error::SingularMatrix)
}

// ---------------------------------------------------------------------------
// LLL
// ---------------------------------------------------------------------------

/// LLL reduction (δ = 3/4) of the lattice basis given by the columns of `b`.
///
/// Exact rational Gram–Schmidt; returns a basis of the same lattice whose
/// first vector is within the usual 2^((n−1)/2) factor of the shortest.
pub fn lll_reduce(b: &IntMat) -> Result<IntMat> {
    let n = b.cols();
    let mut basis = b.col_vecs();
    let delta = ratio(3, 4);

    // Gram–Schmidt data for the current basis: squared norms of the
    // orthogonalized vectors and the μ coefficients.
    let gso = |basis: &[IntVec]| -> Result<(Vec<Rat>, Vec<RatVec>)> {
        let m = basis.len();
        let mut star: Vec<RatVec> = Vec::with_capacity(m);
        let mut norms = Vec::with_capacity(m);
        let mut mu = vec![vec![Rat::zero(); m]; m];
        for i in 0..m {
            let mut v = int_to_rat_vec(&basis[i]);
            for j in 0..i {
                let num = dot_ir(&basis[i], &star[j]);
                mu[i][j] = num / &norms[j];
                let mj = mu[i][j].clone();
                v = vec_sub(&v, &vec_scale(&mj, &star[j]));
            }
            let n2 = dot(&v, &v);
            if n2.is_zero() {
                return Err(Error::Rank("basis vectors are dependent".into()));
            }
            norms.push(n2);
            star.push(v);
        }
        Ok((norms, mu))
    };

    let (mut norms, mut mu) = gso(&basis)?;
    let mut k = 1;
    while k < n {
        // Size reduction of b_k against earlier vectors.
        for j in (0..k).rev() {
            let r = mu[k][j].round().to_integer();
            if !r.is_zero() {
                let bj = basis[j].clone();
                for (x, y) in basis[k].iter_mut().zip(&bj) {
                    *x -= &r * y; // b_k -= r·b_j
                }
                (norms, mu) = gso(&basis)?;
            }
        }
        // Lovász condition.
        let lhs = &norms[k];
        let rhs = (&delta - &mu[k][k - 1] * &mu[k][k - 1]) * &norms[k - 1];
        if *lhs >= rhs {
            k += 1;
        } else {
            basis.swap(k, k - 1);
            (norms, mu) = gso(&basis)?;
            k = k.max(2) - 1;
        }
    }
    Ok(IntMat::from_cols(&basis))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn imat(rows: &[&[i64]]) -> IntMat {
        IntMat::from_rows(&rows.iter().map(|r| int_vec(r)).collect::<Vec<_>>())
    }

    fn rmat(rows: &[&[i64]]) -> RatMat {
        RatMat::from_rows(&rows.iter().map(|r| rat_vec(r)).collect::<Vec<_>>())
    }

    #[test]
    fn rat_roundtrip() {
        for s in ["3", "-7/2", "0", "22/7"] {
            let x = parse_rat(s).unwrap();
            assert_eq!(format_rat(&x), s);
        }
        assert_eq!(parse_rat("4/2").unwrap(), rat(2));
        assert_eq!(format_rat(&parse_rat("4/2").unwrap()), "2");
        assert!(parse_rat("1/0").is_err());
        assert!(parse_rat("a").is_err());
    }

    #[test]
    fn frac_part_in_range() {
        assert_eq!(frac_part(&ratio(7, 2), &int(1)), ratio(1, 2));
        assert_eq!(frac_part(&ratio(-1, 3), &int(1)), ratio(2, 3));
        assert_eq!(frac_part(&rat(7), &int(2)), rat(1));
        assert_eq!(frac_part(&ratio(-5, 2), &int(2)), ratio(3, 2));
    }

    #[test]
    fn hnf_identity() {
        let (h, u) = hnf(&IntMat::identity(3)).unwrap();
        assert_eq!(h, IntMat::identity(3));
        assert_eq!(u, IntMat::identity(3));
    }

    #[test]
    fn hnf_single_entry() {
        let (h, u) = hnf(&imat(&[&[2]])).unwrap();
        assert_eq!(h, imat(&[&[2]]));
        assert_eq!(u, imat(&[&[1]]));
    }

    #[test]
    fn hnf_defining_equations() {
        let a = imat(&[&[1, 1], &[0, 2]]);
        let (h, u) = hnf(&a).unwrap();
        assert_eq!(a.mul(&u), h);
        assert_eq!(u.det().abs(), int(1));
        // Lower-triangular, positive pivots, reduced off-diagonal.
        assert!(h[(0, 1)].is_zero());
        assert!(h[(0, 0)].is_positive() && h[(1, 1)].is_positive());
        assert!(!h[(1, 0)].is_negative() && h[(1, 0)] < h[(1, 1)]);
    }

    #[test]
    fn hnf_rejects_rank_deficient() {
        assert!(matches!(
            hnf(&imat(&[&[1, 2], &[2, 4]])),
            Err(Error::Rank(_))
        ));
    }

    #[test]
    fn kernel_of_projection() {
        // Kernel of [1 2] is ℤ·(2,−1) (up to sign).
        let k = integer_kernel(&imat(&[&[1, 2]]));
        assert_eq!(k.cols(), 1);
        let v = k.col(0);
        assert_eq!(dot_int(&int_vec(&[1, 2]), &v), int(0));
        assert_eq!(v[0].abs().gcd(&v[1].abs()), int(1));
    }

    #[test]
    fn projected_lattice_skew_line() {
        // ℤ² projected onto the first axis along the line through (1,2):
        // the image is ℤ·(1/2), finer than the intersection lattice ℤ·1.
        let lat = LatticeBasis::standard(2);
        let l = RatMat::from_cols(&[rat_vec(&[1, 2])]);
        let c = RatMat::from_cols(&[rat_vec(&[1, 0])]);
        let p = projected_lattice(&lat, &l, &c).unwrap();
        assert_eq!(p.rank(), 1);
        assert_eq!(p.basis_vector(0), vec![ratio(1, 2)]);
    }

    #[test]
    fn projected_lattice_axis() {
        let lat = LatticeBasis::standard(2);
        let l = RatMat::from_cols(&[rat_vec(&[0, 1])]);
        let c = RatMat::from_cols(&[rat_vec(&[1, 0])]);
        let p = projected_lattice(&lat, &l, &c).unwrap();
        assert_eq!(p.basis_vector(0), vec![rat(1)]);
    }

    #[test]
    fn projected_lattice_3d_against_brute_force() {
        // Project ℤ³ along span{(0,1,1)} onto span{e₁,e₂}; check the result
        // against projections of all lattice points in a box.
        let lat = LatticeBasis::standard(3);
        let l = RatMat::from_cols(&[rat_vec(&[0, 1, 1])]);
        let c = RatMat::from_cols(&[rat_vec(&[1, 0, 0]), rat_vec(&[0, 1, 0])]);
        let p = projected_lattice(&lat, &l, &c).unwrap();
        // x = (a,b,c) ↦ x − c·(0,1,1) = (a, b−c, 0): chart coords (a, b−c).
        for a in -2i64..3 {
            for b in -2i64..3 {
                for cc in -2i64..3 {
                    let proj = rat_vec(&[a, b - cc]);
                    assert!(p.contains(&proj), "({a},{b},{cc}) projection missing");
                }
            }
        }
        // Conversely each basis vector is the projection of a lattice point:
        // here the projection map is onto ℤ², so the index is 1.
        for v in p.basis_vectors() {
            assert!(v.iter().all(|x| x.is_integer()));
        }
    }

    #[test]
    fn subspace_lattice_saturated() {
        // L = span{(1,2)}: L ∩ ℤ² = ℤ·(1,2) — and for span{(2,4)} the same.
        for gen in [&[1i64, 2], &[2, 4]] {
            let l = RatMat::from_cols(&[rat_vec(gen)]);
            let s = subspace_lattice(&l).unwrap();
            assert_eq!(s.rank(), 1);
            let v = s.basis_vector(0);
            assert!(v == rat_vec(&[1, 2]) || v == rat_vec(&[-1, -2]));
        }
    }

    #[test]
    fn complement_axes_skips_spanned_directions() {
        // L = span{(1,0,0),(0,1,1)}: e₁ is inside L, so the chart axis is e₂.
        let l = RatMat::from_cols(&[rat_vec(&[1, 0, 0]), rat_vec(&[0, 1, 1])]);
        assert_eq!(complement_axes(&l).unwrap(), vec![1]);
        // L = span{(0,1,1)}: e₁ and e₂ both extend it.
        let l = RatMat::from_cols(&[rat_vec(&[0, 1, 1])]);
        assert_eq!(complement_axes(&l).unwrap(), vec![0, 1]);
        // L = {0}: every axis is kept.
        assert_eq!(complement_axes(&RatMat::zeros(2, 0)).unwrap(), vec![0, 1]);
    }

    #[test]
    fn smallest_dilation_examples() {
        assert_eq!(smallest_dilation(&rat_vec(&[0, 0])), int(1));
        assert_eq!(smallest_dilation(&[ratio(5, 2), rat(4)]), int(2));
        assert_eq!(smallest_dilation(&[rat(0), ratio(11, 3)]), int(3));
    }

    #[test]
    fn primitive_examples() {
        assert_eq!(primitive(&rat_vec(&[2, 4])).unwrap(), int_vec(&[1, 2]));
        assert_eq!(
            primitive(&[ratio(-1, 3), rat(0), rat(1)]).unwrap(),
            int_vec(&[-1, 0, 3])
        );
        assert_eq!(primitive(&rat_vec(&[0, -2, 0])).unwrap(), int_vec(&[0, -1, 0]));
        assert!(matches!(primitive(&rat_vec(&[0, 0])), Err(Error::ZeroVector)));
    }

    #[test]
    fn dual_basis_examples() {
        assert_eq!(dual_basis(&RatMat::identity(2)).unwrap(), RatMat::identity(2));
        let w = rmat(&[&[1, 1], &[0, 1]]);
        let h = dual_basis(&w).unwrap();
        assert_eq!(h.mul(&w), RatMat::identity(2));
        let w2 = rmat(&[&[2, 0], &[0, 2]]);
        let h2 = dual_basis(&w2).unwrap();
        assert_eq!(h2[(0, 0)], ratio(1, 2));
        assert!(matches!(
            dual_basis(&rmat(&[&[1, 2], &[2, 4]])),
            Err(Error::SingularMatrix)
        ));
    }

    #[test]
    fn lll_keeps_lattice_and_shortens() {
        let b = imat(&[&[1, 10], &[0, 1]]); // columns (1,0), (10,1)
        let r = lll_reduce(&b).unwrap();
        // Same lattice: both change-of-basis determinants are ±1.
        assert_eq!(r.det().abs(), b.det().abs());
        // Brute-force shortest vector in a coefficient box, compare norms.
        let mut best = int(1) << 30;
        for x in -12i64..=12 {
            for y in -12i64..=12 {
                if x == 0 && y == 0 {
                    continue;
                }
                let v = [
                    &b[(0, 0)] * int(x) + &b[(0, 1)] * int(y),
                    &b[(1, 0)] * int(x) + &b[(1, 1)] * int(y),
                ];
                let n = dot_int(&v, &v);
                if n < best {
                    best = n;
                }
            }
        }
        let c0 = r.col(0);
        assert_eq!(dot_int(&c0, &c0), best, "LLL should find the shortest here");
        assert!(best <= int(2));
    }

    #[test]
    fn lll_identity_fixed() {
        assert_eq!(lll_reduce(&IntMat::identity(4)).unwrap(), IntMat::identity(4));
    }

    #[test]
    fn solve_and_inverse() {
        let m = rmat(&[&[2, 1], &[1, 1]]);
        let x = m.solve(&rat_vec(&[3, 2])).unwrap();
        assert_eq!(x, rat_vec(&[1, 1]));
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), RatMat::identity(2));
        assert_eq!(rmat(&[&[1, 2], &[2, 4]]).inverse(), None);
        // Inconsistent system.
        let wide = rmat(&[&[1, 1], &[2, 2]]);
        assert_eq!(wide.solve(&rat_vec(&[1, 3])), None);
    }

    #[test]
    fn bareiss_det_matches_rational_det() {
        let a = imat(&[&[3, 1, 4], &[1, 5, 9], &[2, 6, 5]]);
        assert_eq!(Rat::from_integer(a.det()), a.to_rat().det());
        assert_eq!(a.det(), int(-90));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn hnf_random(entries in proptest::collection::vec(-9i64..10, 9)) {
            let a = IntMat::from_rows(&[
                int_vec(&entries[0..3]),
                int_vec(&entries[3..6]),
                int_vec(&entries[6..9]),
            ]);
            match hnf(&a) {
                Ok((h, u)) => {
                    prop_assert_eq!(a.mul(&u), h.clone());
                    prop_assert_eq!(u.det().abs(), int(1));
                    for i in 0..3 {
                        for j in i + 1..3 {
                            prop_assert!(h[(i, j)].is_zero());
                        }
                        prop_assert!(h[(i, i)].is_positive());
                        for j in 0..i {
                            prop_assert!(!h[(i, j)].is_negative() && h[(i, j)] < h[(i, i)]);
                        }
                    }
                }
                Err(Error::Rank(_)) => prop_assert_eq!(a.det(), int(0)),
                Err(e) => prop_assert!(false, "unexpected error {e}"),
            }
        }

        #[test]
        fn primitive_scale_invariant(
            x in -20i64..21, y in -20i64..21, z in -20i64..21,
            num in 1i64..7, den in 1i64..7,
        ) {
            let v = rat_vec(&[x, y, z]);
            prop_assume!(!is_zero_vec(&v));
            let scaled = vec_scale(&ratio(num, den), &v);
            prop_assert_eq!(primitive(&v).unwrap(), primitive(&scaled).unwrap());
        }

        #[test]
        fn smallest_dilation_minimal(n1 in -9i64..10, d1 in 1i64..7, n2 in -9i64..10, d2 in 1i64..7) {
            let s = vec![ratio(n1, d1), ratio(n2, d2)];
            let q = smallest_dilation(&s);
            let qs = vec_scale(&Rat::from_integer(q.clone()), &s);
            prop_assert!(qs.iter().all(|x| x.is_integer()));
            let mut smaller = Int::one();
            while smaller < q {
                let ss = vec_scale(&Rat::from_integer(smaller.clone()), &s);
                prop_assert!(!ss.iter().all(|x| x.is_integer()));
                smaller += 1;
            }
        }

        #[test]
        fn dual_basis_product(entries in proptest::collection::vec(-5i64..6, 9)) {
            let m = RatMat::from_rows(&[
                rat_vec(&entries[0..3]),
                rat_vec(&entries[3..6]),
                rat_vec(&entries[6..9]),
            ]);
            match dual_basis(&m) {
                Ok(h) => prop_assert_eq!(h.mul(&m), RatMat::identity(3)),
                Err(_) => prop_assert_eq!(m.det(), Rat::zero()),
            }
        }

        #[test]
        fn projected_lattice_contains_projections(
            lx in -6i64..7, ly in -6i64..7,
            px in -8i64..9, py in -8i64..9,
        ) {
            prop_assume!(lx != 0 || ly != 0);
            // Project ℤ² along (lx,ly) onto a complement axis.
            let l = RatMat::from_cols(&[rat_vec(&[lx, ly])]);
            let axis: &[i64] = if lx != 0 { &[0, 1] } else { &[1, 0] };
            let c = RatMat::from_cols(&[rat_vec(axis)]);
            let p = projected_lattice(&LatticeBasis::standard(2), &l, &c).unwrap();
            // Chart coordinate of the projection of (px,py).
            let chart = {
                let mut cols = c.col_vecs();
                cols.extend(l.col_vecs());
                RatMat::from_cols(&cols)
            };
            let coords = chart.inverse().unwrap().mul_vec(&rat_vec(&[px, py]));
            prop_assert!(p.contains(&coords[..1]));
        }
    }
}

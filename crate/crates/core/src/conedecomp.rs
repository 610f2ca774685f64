//! Signed decompositions of simplicial cones: semi-open partitions of space,
//! stellar splits, unimodularization, and subspace-adapted decompositions.
//!
//! All decompositions return flat lists of [`SignedAffineCone`]; validity is
//! always modulo cones that contain lines (or lower-dimensional cones, where
//! noted), which is exactly what the generating-function layer quotients out.

use num::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exactlin::{
    complement_axes, dot, int_to_rat_vec, is_zero_vec, lll_reduce, primitive, vec_neg_int, Int,
    IntMat, IntVec, Rat, RatMat, RatVec,
};

/// A pointed cone spanned by linearly independent primitive integer vectors.
///
/// The generator count may be less than `dim`; the decomposition operations
/// below require a full-dimensional cone and say so when given less.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicialCone {
    generators: Vec<IntVec>,
    dim: usize,
}

impl SimplicialCone {
    /// Builds a cone in ℝ^`dim`, rescaling each generator to the primitive
    /// vector on its ray.
    pub fn new(generators: Vec<IntVec>, dim: usize) -> Result<Self> {
        if generators.len() > dim {
            return Err(Error::Rank(format!(
                "{} generators cannot be independent in dimension {}",
                generators.len(),
                dim
            )));
        }
        let mut prim = Vec::with_capacity(generators.len());
        for g in &generators {
            if g.len() != dim {
                return Err(Error::Dimension(format!(
                    "generator has {} coordinates, expected {}",
                    g.len(),
                    dim
                )));
            }
            prim.push(primitive(&int_to_rat_vec(g))?);
        }
        if !prim.is_empty() {
            let cols: Vec<RatVec> = prim.iter().map(|g| int_to_rat_vec(g)).collect();
            if RatMat::from_cols(&cols).rank() < prim.len() {
                return Err(Error::Rank("cone generators are dependent".into()));
            }
        }
        Ok(SimplicialCone {
            generators: prim,
            dim,
        })
    }

    pub fn generators(&self) -> &[IntVec] {
        &self.generators
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Index ∣det(w₁ … w_d)∣ of the generator sublattice inside ℤ^d.
    pub fn index(&self) -> Result<Int> {
        if self.generators.len() != self.dim {
            return Err(Error::Dimension(
                "index requires a full-dimensional cone".into(),
            ));
        }
        if self.dim == 0 {
            return Ok(Int::one());
        }
        Ok(IntMat::from_cols(&self.generators).det().abs())
    }

    pub fn is_unimodular(&self) -> Result<bool> {
        Ok(self.index()? == Int::one())
    }
}

/// One signed piece of a cone decomposition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignedAffineCone {
    pub sign: i32,
    pub vertex: RatVec,
    pub cone: SimplicialCone,
    /// For subspace decompositions: the generator indices of the original
    /// cone kept by this piece (ascending, 0-based).
    pub basis_subset: Option<Vec<usize>>,
}

/// A cone with some facets removed: nonnegative combinations of the closed
/// generators plus strictly positive combinations of the open ones.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SemiOpenCone {
    pub closed_generators: Vec<IntVec>,
    pub open_generators: Vec<IntVec>,
}

/// Splits ℝ^d into d+1 pairwise disjoint semi-open cones on a given basis.
///
/// With u_{d+1} = −(u₁+…+u_d), the i-th piece is closed on u₁…u_{i−1} and
/// open on u_{i+1}…u_{d+1}; the last piece is the closed cone on the basis
/// itself. Every point of ℝ^d lies in exactly one piece.
pub fn semiopen_partition(basis: &[IntVec]) -> Result<Vec<SemiOpenCone>> {
    let d = basis.len();
    if d == 0 {
        return Err(Error::Dimension("partition needs a nonempty basis".into()));
    }
    for u in basis {
        if u.len() != d {
            return Err(Error::Dimension(format!(
                "basis vector has {} coordinates, expected {}",
                u.len(),
                d
            )));
        }
    }
    let cols: Vec<RatVec> = basis.iter().map(|u| int_to_rat_vec(u)).collect();
    if RatMat::from_cols(&cols).rank() < d {
        return Err(Error::Rank(
            "partition needs a basis of the ambient space".into(),
        ));
    }
    let mut ext = basis.to_vec();
    let mut last = vec![Int::zero(); d];
    for u in basis {
        for (x, y) in last.iter_mut().zip(u) {
            *x -= y;
        }
    }
    ext.push(last);
    let mut pieces = Vec::with_capacity(d + 1);
    for i in 0..=d {
        pieces.push(SemiOpenCone {
            closed_generators: ext[..i].to_vec(),
            open_generators: ext[i + 1..].to_vec(),
        });
    }
    Ok(pieces)
}

/// Membership in a semi-open cone: x = Σ tᵢ gᵢ with tᵢ ≥ 0 on the closed
/// generators and tᵢ > 0 on the open ones. Points outside the span of the
/// generators are never members.
pub fn contains(k: &SemiOpenCone, x: &[Rat]) -> bool {
    let gens: Vec<RatVec> = k
        .closed_generators
        .iter()
        .chain(&k.open_generators)
        .map(|g| int_to_rat_vec(g))
        .collect();
    if gens.is_empty() {
        return is_zero_vec(x);
    }
    let Some(t) = RatMat::from_cols(&gens).solve(x) else {
        return false;
    };
    let nc = k.closed_generators.len();
    t[..nc].iter().all(|c| !c.is_negative()) && t[nc..].iter().all(|c| c.is_positive())
}

/// Writes a full-dimensional cone as a signed combination of unimodular
/// cones, valid modulo cones that contain lines.
///
/// Each step picks a short vector of the generator-coordinate lattice
/// W⁻¹ℤ^d (LLL on the cleared inverse, with a bounded search over small
/// combinations as fallback — the reduced columns themselves need not have
/// all coordinates < 1 at small index), splits the cone along it, and
/// recurses. A child's index is the parent's scaled by the corresponding
/// coefficient, all of which are < 1, so the recursion terminates.
pub fn barvinok_decompose(c: &SimplicialCone) -> Result<Vec<SignedAffineCone>> {
    let d = c.dim();
    if c.generators().len() != d {
        return Err(Error::Dimension(
            "unimodular decomposition requires a full-dimensional cone".into(),
        ));
    }
    let mut out = Vec::new();
    let mut stack = vec![(1i32, c.clone())];
    while let Some((sign, cone)) = stack.pop() {
        if cone.index()? == Int::one() {
            out.push(SignedAffineCone {
                sign,
                vertex: vec![Rat::zero(); d],
                cone,
                basis_subset: None,
            });
            continue;
        }
        let w = IntMat::from_cols(cone.generators());
        let lambda = short_coefficient_vector(&w)?;
        // The splitting ray: W·λ is integral by construction of the lattice,
        // so the primitive vector only divides out a gcd and the recomputed
        // coefficients keep every |λᵢ| < 1.
        let v = orient(primitive(&w.to_rat().mul_vec(&lambda))?);
        let winv = w.to_rat().inverse().ok_or(Error::SingularMatrix)?;
        let lambda = winv.mul_vec(&int_to_rat_vec(&v));
        // Reorder: positive coefficients, then zeros, then negatives, each
        // group by descending original position.
        let mut pos = Vec::new();
        let mut zero = Vec::new();
        let mut neg = Vec::new();
        for j in (0..d).rev() {
            if lambda[j].is_positive() {
                pos.push(j);
            } else if lambda[j].is_negative() {
                neg.push(j);
            } else {
                zero.push(j);
            }
        }
        let r = pos.len();
        let s = r + zero.len();
        let order: Vec<usize> = pos.into_iter().chain(zero).chain(neg).collect();
        let g: Vec<IntVec> = order
            .iter()
            .map(|&j| cone.generators()[j].clone())
            .collect();
        let mut children = Vec::new();
        // Positive group: drop the i-th generator, negate the prefix, close
        // with v; alternating signs.
        for i in 0..r {
            let mut gens = Vec::with_capacity(d);
            for (j, gj) in g.iter().enumerate() {
                if j == i {
                    continue;
                }
                gens.push(if j < i { vec_neg_int(gj) } else { gj.clone() });
            }
            gens.push(v.clone());
            let child_sign = if i % 2 == 0 { sign } else { -sign };
            children.push((child_sign, SimplicialCone::new(gens, d)?));
        }
        // Negative group: keep the prefix, negate the suffix, close with −v.
        for i in s..d {
            let mut gens = Vec::with_capacity(d);
            for (j, gj) in g.iter().enumerate() {
                if j == i {
                    continue;
                }
                gens.push(if j < i { gj.clone() } else { vec_neg_int(gj) });
            }
            gens.push(vec_neg_int(&v));
            let child_sign = if (d - 1 - i) % 2 == 0 { sign } else { -sign };
            children.push((child_sign, SimplicialCone::new(gens, d)?));
        }
        for ch in children.into_iter().rev() {
            stack.push(ch);
        }
    }
    Ok(out)
}

/// Orients a primitive vector so its first nonzero coordinate is positive.
fn orient(v: IntVec) -> IntVec {
    match v.iter().find(|x| !x.is_zero()) {
        Some(first) if first.is_negative() => vec_neg_int(&v),
        _ => v,
    }
}

fn sup_norm_lt_one(v: &[Rat]) -> bool {
    v.iter().all(|x| x.abs() < Rat::one())
}

/// Keeps the shorter candidate (Euclidean norm, ties broken lexicographically).
fn better(cand: RatVec, best: &mut Option<RatVec>) {
    if is_zero_vec(&cand) {
        return;
    }
    match best {
        None => *best = Some(cand),
        Some(b) => {
            let nc = dot(&cand, &cand);
            let nb = dot(b, b);
            if nc < nb || (nc == nb && cand < *b) {
                *best = Some(cand);
            }
        }
    }
}

/// A nonzero λ with W·λ ∈ ℤ^d and all |λᵢ| < 1; exists whenever ∣det W∣ ≥ 2.
fn short_coefficient_vector(w: &IntMat) -> Result<RatVec> {
    let d = w.rows();
    let det = w.det();
    let det_rat = Rat::from_integer(det.clone());
    // The lattice is spanned by the columns of W⁻¹; clear by det to stay in
    // integer arithmetic for the reduction.
    let winv = w.to_rat().inverse().ok_or(Error::SingularMatrix)?;
    let mut a = IntMat::zeros(d, d);
    for i in 0..d {
        for j in 0..d {
            let x = &winv[(i, j)] * &det_rat;
            debug_assert!(x.is_integer(), "det·W⁻¹ clears all denominators");
            a[(i, j)] = x.to_integer();
        }
    }
    let red = lll_reduce(&a)?;
    let mut best: Option<RatVec> = None;
    for j in 0..d {
        let col: RatVec = red
            .col(j)
            .iter()
            .map(|x| Rat::from_integer(x.clone()) / &det_rat)
            .collect();
        better(col, &mut best);
    }
    match best {
        Some(b) if sup_norm_lt_one(&b) => return Ok(b),
        _ => {}
    }
    let mut k: i64 = 1;
    loop {
        let width = 2 * k + 1;
        if (width as f64).powi(d as i32) > 2.0e6 {
            return Err(Error::Internal(
                "short-vector search exhausted its budget".into(),
            ));
        }
        let width = width as usize;
        let total = width.pow(d as u32);
        let mut best_box: Option<RatVec> = None;
        for idx in 0..total {
            let mut rem = idx;
            let mut cand = vec![Rat::zero(); d];
            let mut nonzero = false;
            for j in 0..d {
                let cj = (rem % width) as i64 - k;
                rem /= width;
                if cj == 0 {
                    continue;
                }
                nonzero = true;
                let cj = Rat::from_integer(Int::from(cj));
                for (i, x) in cand.iter_mut().enumerate() {
                    *x += &cj * Rat::from_integer(red[(i, j)].clone());
                }
            }
            if !nonzero {
                continue;
            }
            for x in cand.iter_mut() {
                *x = &*x / &det_rat;
            }
            if sup_norm_lt_one(&cand) {
                better(cand, &mut best_box);
            }
        }
        if let Some(b) = best_box {
            return Ok(b);
        }
        k *= 2;
    }
}

/// All subsets σ of generator indices, of size codim L, with
/// span{w_j : j ∈ σ} ⊕ L = ℝ^d. Subsets are returned in lexicographic order.
pub fn enumerate_bases(c: &SimplicialCone, l_basis: &RatMat) -> Result<Vec<Vec<usize>>> {
    let d = c.dim();
    if c.generators().len() != d {
        return Err(Error::Dimension(
            "subspace decomposition requires a full-dimensional cone".into(),
        ));
    }
    if l_basis.rows() != d {
        return Err(Error::Dimension(
            "subspace basis lives in the wrong ambient space".into(),
        ));
    }
    let m = l_basis.cols();
    if l_basis.rank() < m {
        return Err(Error::Rank("subspace basis is dependent".into()));
    }
    let k0 = d - m;
    let l_cols = l_basis.col_vecs();
    let mut out = Vec::new();
    let mut acc = Vec::new();
    enumerate_subsets(d, k0, 0, &mut acc, &mut |sigma| {
        let mut cols: Vec<RatVec> = sigma
            .iter()
            .map(|&j| int_to_rat_vec(&c.generators()[j]))
            .collect();
        cols.extend(l_cols.iter().cloned());
        if RatMat::from_cols(&cols).rank() == d {
            out.push(sigma.to_vec());
        }
    });
    Ok(out)
}

fn enumerate_subsets(
    n: usize,
    k: usize,
    start: usize,
    acc: &mut Vec<usize>,
    f: &mut impl FnMut(&[usize]),
) {
    if acc.len() == k {
        f(acc);
        return;
    }
    let remaining = k - acc.len();
    for j in start..=(n - remaining) {
        acc.push(j);
        enumerate_subsets(n, k, j + 1, acc, f);
        acc.pop();
    }
}

/// The chart [e_{c₁} … e_{c_k₀} | L] used for quotient coordinates; the
/// axes come from [`complement_axes`], so the chart is a fixed function of L.
fn chart_matrix(l_basis: &RatMat, d: usize) -> Result<RatMat> {
    let axes = complement_axes(l_basis)?;
    let mut cols = Vec::with_capacity(d);
    for &j in &axes {
        let mut e = vec![Rat::zero(); d];
        e[j] = Rat::one();
        cols.push(e);
    }
    cols.extend(l_basis.col_vecs());
    Ok(RatMat::from_cols(&cols))
}

/// Chart coordinates of `w` modulo L: the first k₀ coefficients of `w` in
/// the chart basis.
fn project(chart: &RatMat, k0: usize, w: &[Rat]) -> Result<RatVec> {
    let y = chart
        .solve(w)
        .ok_or_else(|| Error::Internal("chart matrix is singular".into()))?;
    Ok(y[..k0].to_vec())
}

/// Coefficients expressing `a` over the projected generators indexed by σ.
fn cramer(wbar: &[RatVec], sigma: &[usize], a: &[Rat]) -> Result<RatVec> {
    if sigma.is_empty() {
        return Ok(Vec::new());
    }
    let cols: Vec<RatVec> = sigma.iter().map(|&j| wbar[j].clone()).collect();
    RatMat::from_cols(&cols)
        .solve(a)
        .ok_or_else(|| Error::Internal("admissible subset matrix is singular".into()))
}

/// A vector in the quotient chart of ℝ^d/L that is generic for (cone, L):
/// its coefficients over every admissible subset are all nonzero.
///
/// The candidates run along the moment curve through the projected
/// generators of the first admissible subset, at t = 0, 1, 2, …; the first
/// success wins, which makes the result deterministic, nonnegative on that
/// subset, and hence inside the projection of the cone.
pub fn generic_vector(c: &SimplicialCone, l_basis: &RatMat) -> Result<RatVec> {
    let bases = enumerate_bases(c, l_basis)?;
    let d = c.dim();
    let k0 = d - l_basis.cols();
    if k0 == 0 {
        return Ok(Vec::new());
    }
    let chart = chart_matrix(l_basis, d)?;
    let wbar: Vec<RatVec> = c
        .generators()
        .iter()
        .map(|g| project(&chart, k0, &int_to_rat_vec(g)))
        .collect::<Result<_>>()?;
    let first = bases
        .first()
        .ok_or_else(|| Error::Internal("no admissible subsets found".into()))?;
    // Every coefficient is a nonzero polynomial in t of degree < k₀, so the
    // number of bad t values is bounded and the scan below terminates.
    let budget = k0 * k0 * bases.len() + 2;
    'search: for t in 0..budget {
        let t = Rat::from_integer(Int::from(t as i64));
        let mut a = vec![Rat::zero(); k0];
        let mut power = Rat::one();
        for &j in first {
            for (x, y) in a.iter_mut().zip(&wbar[j]) {
                *x += &power * y;
            }
            power *= &t;
        }
        for sigma in &bases {
            if cramer(&wbar, sigma, &a)?.iter().any(|x| x.is_zero()) {
                continue 'search;
            }
        }
        return Ok(a);
    }
    Err(Error::Internal(
        "generic vector search exhausted its budget".into(),
    ))
}

/// Signed decomposition of a full-dimensional cone into cones whose last
/// d−k₀ generators span L.
///
/// For each admissible subset σ the piece keeps the generators w_j, j ∈ σ,
/// flipped to match the sign of the coefficient of `a` over σ, and projects
/// the remaining generators onto L along span{w_σ} (rescaled to primitive
/// integer vectors). The piece's sign is the product of the coefficient
/// signs. `a` must be generic in the quotient chart (see [`generic_vector`]);
/// a vanishing coefficient is an error, never silently perturbed.
pub fn brion_vergne_decompose(
    c: &SimplicialCone,
    l_basis: &RatMat,
    a: &[Rat],
) -> Result<Vec<SignedAffineCone>> {
    let bases = enumerate_bases(c, l_basis)?;
    let d = c.dim();
    let k0 = d - l_basis.cols();
    if a.len() != k0 {
        return Err(Error::Dimension(format!(
            "generic vector has {} coordinates, expected {}",
            a.len(),
            k0
        )));
    }
    let chart = chart_matrix(l_basis, d)?;
    let wbar: Vec<RatVec> = c
        .generators()
        .iter()
        .map(|g| project(&chart, k0, &int_to_rat_vec(g)))
        .collect::<Result<_>>()?;
    let mut out = Vec::new();
    for sigma in &bases {
        let coeffs = cramer(&wbar, sigma, a)?;
        let mut sign = 1i32;
        for (pos, x) in coeffs.iter().enumerate() {
            if x.is_zero() {
                return Err(Error::Genericity(format!(
                    "coefficient {} over subset {:?} vanishes",
                    pos, sigma
                )));
            }
            if x.is_negative() {
                sign = -sign;
            }
        }
        let mut gens: Vec<IntVec> = Vec::with_capacity(d);
        for (pos, &j) in sigma.iter().enumerate() {
            let gj = &c.generators()[j];
            gens.push(if coeffs[pos].is_negative() {
                vec_neg_int(gj)
            } else {
                gj.clone()
            });
        }
        // Projection onto L along span{w_σ}: subtract the w_σ component of
        // the mixed-basis coordinates; the remainder lies in L.
        let wsig: Vec<RatVec> = sigma
            .iter()
            .map(|&j| int_to_rat_vec(&c.generators()[j]))
            .collect();
        let mut cols = wsig.clone();
        cols.extend(l_basis.col_vecs());
        let msig = RatMat::from_cols(&cols);
        for kidx in 0..d {
            if sigma.contains(&kidx) {
                continue;
            }
            let wk = int_to_rat_vec(&c.generators()[kidx]);
            let y = msig
                .solve(&wk)
                .ok_or_else(|| Error::Internal("mixed chart matrix is singular".into()))?;
            let mut rho = wk;
            for (pos, wj) in wsig.iter().enumerate() {
                for (x, z) in rho.iter_mut().zip(wj) {
                    *x -= &y[pos] * z;
                }
            }
            gens.push(primitive(&rho)?);
        }
        out.push(SignedAffineCone {
            sign,
            vertex: vec![Rat::zero(); d],
            cone: SimplicialCone::new(gens, d)?,
            basis_subset: Some(sigma.clone()),
        });
    }
    Ok(out)
}

/// Splits a full-dimensional cone along the ray through `v`, which must be a
/// {0, ±1}-combination of the generators.
///
/// With cᵢ the cone where the i-th generator is replaced by v, the identity
/// [c] = Σ_{λᵢ=+1} [cᵢ] − Σ_{λᵢ=−1} [cᵢ] holds modulo lower-dimensional
/// cones; pieces are emitted positives first, by ascending generator index.
pub fn stellar_decompose(c: &SimplicialCone, v: &IntVec) -> Result<Vec<SignedAffineCone>> {
    let d = c.dim();
    if c.generators().len() != d {
        return Err(Error::Dimension(
            "stellar decomposition requires a full-dimensional cone".into(),
        ));
    }
    if v.len() != d {
        return Err(Error::Dimension(format!(
            "splitting vector has {} coordinates, expected {}",
            v.len(),
            d
        )));
    }
    if v.iter().all(|x| x.is_zero()) {
        return Err(Error::ZeroVector);
    }
    let winv = IntMat::from_cols(c.generators())
        .to_rat()
        .inverse()
        .ok_or(Error::SingularMatrix)?;
    let lambda = winv.mul_vec(&int_to_rat_vec(v));
    for x in &lambda {
        if !x.is_zero() && x.abs() != Rat::one() {
            return Err(Error::Pattern(format!(
                "splitting vector has generator coefficient {}, expected 0 or ±1",
                x
            )));
        }
    }
    let vprim = primitive(&int_to_rat_vec(v))?;
    let mut out = Vec::new();
    for (sign, wanted) in [(1i32, Rat::one()), (-1i32, -Rat::one())] {
        for i in 0..d {
            if lambda[i] != wanted {
                continue;
            }
            let mut gens = c.generators().to_vec();
            gens[i] = vprim.clone();
            out.push(SignedAffineCone {
                sign,
                vertex: vec![Rat::zero(); d],
                cone: SimplicialCone::new(gens, d)?,
                basis_subset: None,
            });
        }
    }
    Ok(out)
}

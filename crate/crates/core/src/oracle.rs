//! Brute-force evaluation of sliced sums over polytopes: project to the
//! quotient lattice, enumerate the lattice points under the projection,
//! slice, triangulate, integrate.
//!
//! This is the ground-truth engine the fast machinery is checked against,
//! so it is deliberately naive and shares nothing with the decomposition
//! pipeline beyond the underlying linear algebra: facets come from
//! cofactor normals of point subsets, slice vertices from tight-constraint
//! enumeration, volumes from determinants of fan simplices.

use num::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exactlin::{
    complement_axes, dot, projected_lattice, subspace_lattice, vec_add, vec_scale, vec_sub, Int,
    LatticeBasis, Rat, RatMat, RatVec,
};
use crate::genfun::Polytope;

fn rat_pow(x: &Rat, m: usize) -> Rat {
    let mut out = Rat::one();
    for _ in 0..m {
        out *= x;
    }
    out
}

/// Normal with ⟨n, diff⟩ = 0 for all rows, via cofactor expansion: the j-th
/// component is (−1)^j times the minor with column j deleted.
fn cofactor_normal(diffs: &[RatVec], k: usize) -> RatVec {
    (0..k)
        .map(|j| {
            let minor: Vec<RatVec> = diffs
                .iter()
                .map(|r| {
                    r.iter()
                        .enumerate()
                        .filter(|(c, _)| *c != j)
                        .map(|(_, x)| x.clone())
                        .collect()
                })
                .collect();
            let det = if minor.is_empty() {
                Rat::one()
            } else {
                RatMat::from_rows(&minor).det()
            };
            if j % 2 == 0 {
                det
            } else {
                -det
            }
        })
        .collect()
}

/// Scales a normal so its first nonzero component is ±1, keeping direction.
fn canonical_normal(n: &[Rat]) -> Option<RatVec> {
    let scale = n.iter().find(|x| !x.is_zero())?.abs();
    Some(n.iter().map(|x| x / &scale).collect())
}

/// Facet inequalities ⟨n, x⟩ ≤ c of the convex hull, by orienting every
/// hyperplane through a k-subset that supports the point set.
fn facets_of(points: &[RatVec], k: usize) -> Vec<(RatVec, Rat)> {
    let mut facets: Vec<(RatVec, Rat)> = Vec::new();
    let mut idx = vec![0usize; k];
    enumerate_subsets(points.len(), k, 0, &mut idx, 0, &mut |sigma| {
        let base = &points[sigma[0]];
        let diffs: Vec<RatVec> = sigma[1..].iter().map(|&i| vec_sub(&points[i], base)).collect();
        let raw = cofactor_normal(&diffs, k);
        let Some(n) = canonical_normal(&raw) else {
            return;
        };
        let c = dot(&n, base);
        let cand = if points.iter().all(|p| dot(&n, p) <= c) {
            Some((n, c))
        } else if points.iter().all(|p| dot(&n, p) >= c) {
            let neg: RatVec = n.iter().map(|x| -x.clone()).collect();
            Some((neg, -c))
        } else {
            None
        };
        if let Some(f) = cand {
            if !facets.contains(&f) {
                facets.push(f);
            }
        }
    });
    facets.sort();
    facets
}

fn enumerate_subsets(
    n: usize,
    k: usize,
    start: usize,
    acc: &mut [usize],
    depth: usize,
    f: &mut impl FnMut(&[usize]),
) {
    if depth == k {
        f(acc);
        return;
    }
    let remaining = k - depth;
    if n < remaining + start {
        return;
    }
    for j in start..=(n - remaining) {
        acc[depth] = j;
        enumerate_subsets(n, k, j + 1, acc, depth + 1, f);
    }
}

/// Vertices of {y : ⟨aᵢ, y⟩ ≤ bᵢ} by solving every k-subset of tight
/// constraints, sorted and deduplicated.
fn hrep_vertices(constraints: &[(RatVec, Rat)], k: usize) -> Vec<RatVec> {
    let mut out: Vec<RatVec> = Vec::new();
    let mut idx = vec![0usize; k];
    enumerate_subsets(constraints.len(), k, 0, &mut idx, 0, &mut |sigma| {
        let rows: Vec<RatVec> = sigma.iter().map(|&i| constraints[i].0.clone()).collect();
        let rhs: RatVec = sigma.iter().map(|&i| constraints[i].1.clone()).collect();
        let Some(inv) = RatMat::from_rows(&rows).inverse() else {
            return;
        };
        let y = inv.mul_vec(&rhs);
        if constraints.iter().all(|(a, b)| dot(a, &y) <= *b) && !out.contains(&y) {
            out.push(y);
        }
    });
    out.sort();
    out
}

/// Complete homogeneous symmetric polynomial h_m of the given values.
fn complete_homogeneous(values: &[Rat], m: usize) -> Rat {
    let mut h = vec![Rat::zero(); m + 1];
    h[0] = Rat::one();
    for u in values {
        for j in 1..=m {
            let add = &h[j - 1] * u;
            h[j] += add;
        }
    }
    h[m].clone()
}

fn simplex_integral_values(vertices: &[RatVec], values: &[Rat], m: usize) -> Result<Rat> {
    let k = vertices[0].len();
    if vertices.len() != k + 1 {
        return Err(Error::Dimension(format!(
            "simplex in ℝ^{k} needs {} vertices, got {}",
            k + 1,
            vertices.len()
        )));
    }
    let diffs: Vec<RatVec> = vertices[1..].iter().map(|v| vec_sub(v, &vertices[0])).collect();
    let det = if k == 0 {
        Rat::one()
    } else {
        RatMat::from_rows(&diffs).det()
    };
    if det.is_zero() {
        return Err(Error::Degenerate);
    }
    // |det| = vol·k!, and ∫_Δ ℓ^m = vol·k!·m!/(m+k)!·h_m(vertex values).
    let mut out = det.abs() * complete_homogeneous(values, m);
    for i in 1..=k {
        out /= Rat::from_integer(Int::from((m + i) as i64));
    }
    Ok(out)
}

/// ∫_Δ ⟨ℓ,x⟩^m dx over the simplex spanned by k+1 affinely independent
/// vertices in ℝ^k, as volume times the complete homogeneous symmetric
/// polynomial of the vertex values.
pub fn simplex_integral(vertices: &[RatVec], ell: &[Rat], m: usize) -> Result<Rat> {
    let values: Vec<Rat> = vertices.iter().map(|v| dot(ell, v)).collect();
    simplex_integral_values(vertices, &values, m)
}

/// Fan triangulation from the lexicographically least vertex, recursing
/// into the facets that do not contain it.
fn triangulate(vertices: &[RatVec], k: usize) -> Result<Vec<Vec<RatVec>>> {
    let mut verts: Vec<RatVec> = Vec::new();
    for v in vertices {
        if !verts.contains(v) {
            verts.push(v.clone());
        }
    }
    verts.sort();
    if k == 0 || verts.len() == k + 1 {
        return Ok(vec![verts]);
    }
    let apex = verts[0].clone();
    let mut out = Vec::new();
    for (n, c) in facets_of(&verts, k) {
        if dot(&n, &apex) == c {
            continue;
        }
        let face: Vec<RatVec> = verts.iter().filter(|v| dot(&n, v) == c).cloned().collect();
        // Chart on the facet: independent difference directions from its
        // first vertex.
        let base = face[0].clone();
        let mut dirs: Vec<RatVec> = Vec::new();
        for v in &face[1..] {
            let mut trial = dirs.clone();
            trial.push(vec_sub(v, &base));
            if RatMat::from_cols(&trial).rank() == trial.len() {
                dirs = trial;
                if dirs.len() == k - 1 {
                    break;
                }
            }
        }
        if dirs.len() < k - 1 {
            continue; // lower-dimensional face: no volume to add
        }
        let chart = RatMat::from_cols(&dirs);
        let mut face_coords = Vec::with_capacity(face.len());
        for v in &face {
            let y = chart
                .solve(&vec_sub(v, &base))
                .ok_or_else(|| Error::Internal("facet point outside its own chart".into()))?;
            face_coords.push(y);
        }
        for sub in triangulate(&face_coords, k - 1)? {
            let mut simplex = vec![apex.clone()];
            for y in sub {
                simplex.push(vec_add(&base, &chart.mul_vec(&y)));
            }
            out.push(simplex);
        }
    }
    Ok(out)
}

/// ∫_p ⟨ℓ,x⟩^m dx by direct fan triangulation of the full-dimensional hull
/// of the given points; zero for lower-dimensional hulls.
pub fn polytope_integral(points: &[RatVec], ell: &[Rat], m: usize) -> Result<Rat> {
    let d = points
        .first()
        .ok_or_else(|| Error::Dimension("no points".into()))?
        .len();
    let diffs: Vec<RatVec> = points[1..].iter().map(|p| vec_sub(p, &points[0])).collect();
    if RatMat::from_rows(&diffs).rank() < d {
        return Ok(Rat::zero());
    }
    let mut total = Rat::zero();
    for simplex in triangulate(points, d)? {
        total += simplex_integral(&simplex, ell, m)?;
    }
    Ok(total)
}

/// Chart data for slicing along a subspace: the saturated lattice basis of
/// the subspace, the complementary coordinate axes, and the projected
/// lattice in those axes.
struct SliceChart {
    d: usize,
    k: usize,
    b_l: RatMat,
    axes_mat: RatMat,
    b_bar: RatMat,
    chart_inv: RatMat,
}

impl SliceChart {
    fn new(d: usize, l_basis: &RatMat) -> Result<Self> {
        if l_basis.rows() != d {
            return Err(Error::Dimension(format!(
                "subspace lives in ℝ^{}, polytope in ℝ^{d}",
                l_basis.rows()
            )));
        }
        let k = l_basis.cols();
        let b_l = subspace_lattice(l_basis)?.to_rat_mat();
        let axes = complement_axes(l_basis)?;
        let mut axes_mat = RatMat::zeros(d, axes.len());
        for (j, &a) in axes.iter().enumerate() {
            axes_mat[(a, j)] = Rat::one();
        }
        let lam_bar = projected_lattice(&LatticeBasis::standard(d), l_basis, &axes_mat)?;
        let b_bar = lam_bar.to_rat_mat();
        let mut cols = (0..axes_mat.cols()).map(|j| axes_mat.col(j)).collect::<Vec<_>>();
        cols.extend((0..k).map(|j| l_basis.col(j)));
        let chart = RatMat::from_cols(&cols);
        let chart_inv = chart.inverse().ok_or(Error::SingularMatrix)?;
        Ok(SliceChart {
            d,
            k,
            b_l,
            axes_mat,
            b_bar,
            chart_inv,
        })
    }

    /// Projection of an ambient point, in projected-lattice coordinates.
    fn project(&self, v: &[Rat]) -> RatVec {
        if self.d == self.k {
            return Vec::new();
        }
        let z = self.chart_inv.mul_vec(v)[..self.d - self.k].to_vec();
        self.b_bar
            .inverse()
            .expect("projected lattice basis is invertible")
            .mul_vec(&z)
    }

    /// Ambient representative of the fiber over the projected lattice point.
    fn fiber_point(&self, x: &[Int]) -> RatVec {
        let xr: RatVec = x.iter().map(|i| Rat::from_integer(i.clone())).collect();
        self.axes_mat.mul_vec(&self.b_bar.mul_vec(&xr))
    }

    /// Slice constraints in subspace-lattice coordinates: the facet
    /// ⟨n,·⟩ ≤ c meets the fiber through p₀ in ⟨Bᵀn, y⟩ ≤ c − ⟨n,p₀⟩.
    fn slice_constraints(
        &self,
        facets: &[(RatVec, Rat)],
        p0: &[Rat],
    ) -> Vec<(RatVec, Rat)> {
        facets
            .iter()
            .map(|(n, c)| {
                let a: RatVec = (0..self.k).map(|j| dot(&self.b_l.col(j), n)).collect();
                (a, c - dot(n, p0))
            })
            .collect()
    }
}

/// Vertices of p ∩ (x + L) in subspace-lattice coordinates, where `x` is a
/// point of the projected lattice; empty when the fiber misses the
/// polytope. Facets are recovered from the vertex set here, independently
/// of whatever the polytope carries.
pub fn slice_polytope(p: &Polytope, l_basis: &RatMat, x: &[Int]) -> Result<Vec<RatVec>> {
    let d = p.dim();
    let chart = SliceChart::new(d, l_basis)?;
    if x.len() != d - chart.k {
        return Err(Error::Dimension(format!(
            "projected point has {} coordinates, expected {}",
            x.len(),
            d - chart.k
        )));
    }
    let facets = facets_of(p.vertices(), d);
    let p0 = chart.fiber_point(x);
    let constraints = chart.slice_constraints(&facets, &p0);
    if chart.k == 0 {
        // Zero-dimensional slice: the fiber is the point itself.
        if constraints.iter().all(|(_, b)| !b.is_negative()) {
            return Ok(vec![Vec::new()]);
        }
        return Ok(Vec::new());
    }
    Ok(hrep_vertices(&constraints, chart.k))
}

/// Σ_x ∫_{t·p ∩ (x+L)} ⟨ℓ,y⟩^m dm over the points x of the projected
/// lattice, computed slice by slice; the measure on each slice is
/// normalized by the lattice L ∩ ℤ^d.
pub fn brute_intermediate_sum(
    p: &Polytope,
    l_basis: &RatMat,
    ell: &[Rat],
    m: usize,
    t: &Rat,
) -> Result<Rat> {
    if !t.is_positive() {
        return Err(Error::Domain("dilation factor must be positive".into()));
    }
    let d = p.dim();
    let chart = SliceChart::new(d, l_basis)?;
    let scaled: Vec<RatVec> = p.vertices().iter().map(|v| vec_scale(t, v)).collect();
    let facets = facets_of(&scaled, d);
    let lv: RatVec = (0..chart.k).map(|j| dot(&chart.b_l.col(j), ell)).collect();

    // Bounding box of the projected vertices, in projected-lattice
    // coordinates; every fiber meeting t·p projects inside it.
    let q = d - chart.k;
    let projections: Vec<RatVec> = scaled.iter().map(|v| chart.project(v)).collect();
    let mut lo = Vec::with_capacity(q);
    let mut hi = Vec::with_capacity(q);
    for i in 0..q {
        let mut min = projections[0][i].clone();
        let mut max = min.clone();
        for pr in &projections[1..] {
            if pr[i] < min {
                min = pr[i].clone();
            }
            if pr[i] > max {
                max = pr[i].clone();
            }
        }
        lo.push(min.ceil().to_integer());
        hi.push(max.floor().to_integer());
    }

    let mut total = Rat::zero();
    let mut x: Vec<Int> = lo.clone();
    loop {
        if x.iter().zip(&hi).all(|(a, b)| a <= b) {
            let p0 = chart.fiber_point(&x);
            let constraints = chart.slice_constraints(&facets, &p0);
            if chart.k == 0 {
                if constraints.iter().all(|(_, b)| !b.is_negative()) {
                    total += rat_pow(&dot(ell, &p0), m);
                }
            } else {
                let verts = hrep_vertices(&constraints, chart.k);
                if verts.len() > chart.k {
                    let diffs: Vec<RatVec> =
                        verts[1..].iter().map(|v| vec_sub(v, &verts[0])).collect();
                    if RatMat::from_rows(&diffs).rank() == chart.k {
                        let base = dot(ell, &p0);
                        for simplex in triangulate(&verts, chart.k)? {
                            let values: Vec<Rat> =
                                simplex.iter().map(|v| &base + dot(&lv, v)).collect();
                            total += simplex_integral_values(&simplex, &values, m)?;
                        }
                    }
                }
            }
        }
        // Odometer over the box; a zero-dimensional box is the single
        // empty tuple.
        if q == 0 {
            break;
        }
        let mut i = q;
        loop {
            i -= 1;
            x[i] += Int::one();
            if x[i] <= hi[i] {
                break;
            }
            x[i] = lo[i].clone();
            if i == 0 {
                return Ok(total);
            }
        }
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::{int_vec, rat, rat_vec, ratio};

    fn square4() -> Polytope {
        Polytope::new(vec![
            rat_vec(&[0, 0]),
            rat_vec(&[4, 0]),
            rat_vec(&[0, 4]),
            rat_vec(&[4, 4]),
        ])
        .unwrap()
    }

    fn t2() -> Polytope {
        Polytope::new(vec![
            rat_vec(&[0, 0]),
            rat_vec(&[4, 0]),
            vec![rat(0), ratio(11, 3)],
        ])
        .unwrap()
    }

    fn vertical() -> RatMat {
        RatMat::from_cols(&[rat_vec(&[0, 1])])
    }

    #[test]
    fn simplex_integrals_match_hand_values() {
        let tri = vec![rat_vec(&[0, 0]), rat_vec(&[1, 0]), rat_vec(&[0, 1])];
        assert_eq!(simplex_integral(&tri, &rat_vec(&[0, 0]), 0).unwrap(), ratio(1, 2));
        assert_eq!(simplex_integral(&tri, &rat_vec(&[1, 0]), 1).unwrap(), ratio(1, 6));
        let seg = vec![rat_vec(&[0]), rat_vec(&[1])];
        assert_eq!(simplex_integral(&seg, &rat_vec(&[1]), 1).unwrap(), ratio(1, 2));
        let flat = vec![rat_vec(&[0, 0]), rat_vec(&[1, 1]), rat_vec(&[2, 2])];
        assert!(matches!(
            simplex_integral(&flat, &rat_vec(&[1, 0]), 0),
            Err(Error::Degenerate)
        ));
    }

    #[test]
    fn slices_are_segments_of_known_length() {
        let square = Polytope::new(vec![
            rat_vec(&[0, 0]),
            rat_vec(&[1, 0]),
            rat_vec(&[0, 1]),
            rat_vec(&[1, 1]),
        ])
        .unwrap();
        let s = slice_polytope(&square, &vertical(), &int_vec(&[0])).unwrap();
        assert_eq!(s, vec![rat_vec(&[0]), rat_vec(&[1])]);
        // Slice of the 11/3-triangle at x = 1: the hypotenuse sits at
        // y = (11/3)(1 − x/4), so the segment runs up to 11/4.
        let s = slice_polytope(&t2(), &vertical(), &int_vec(&[1])).unwrap();
        assert_eq!(s, vec![rat_vec(&[0]), vec![ratio(11, 4)]]);
        let s = slice_polytope(&t2(), &vertical(), &int_vec(&[9])).unwrap();
        assert!(s.is_empty());
    }

    #[test]
    fn sliced_sums_over_the_square() {
        let one = rat(1);
        let ell = rat_vec(&[0, 0]);
        assert_eq!(
            brute_intermediate_sum(&square4(), &vertical(), &ell, 0, &one).unwrap(),
            rat(20)
        );
        assert_eq!(
            brute_intermediate_sum(&square4(), &vertical(), &ell, 0, &ratio(1, 4)).unwrap(),
            rat(2)
        );
        assert_eq!(
            brute_intermediate_sum(&square4(), &vertical(), &ell, 0, &ratio(5, 2)).unwrap(),
            rat(110)
        );
        assert_eq!(
            brute_intermediate_sum(&square4(), &vertical(), &ell, 0, &ratio(1, 3)).unwrap(),
            ratio(8, 3)
        );
    }

    #[test]
    fn sliced_sum_over_the_skew_triangle() {
        // Slice lengths 11/3, 11/4, 11/6, 11/12, 0 at x = 0..4.
        let v = brute_intermediate_sum(&t2(), &vertical(), &rat_vec(&[0, 0]), 0, &rat(1)).unwrap();
        assert_eq!(v, ratio(55, 6));
    }

    #[test]
    fn zero_subspace_counts_lattice_points() {
        let l = RatMat::zeros(2, 0);
        let ell = rat_vec(&[0, 0]);
        assert_eq!(
            brute_intermediate_sum(&square4(), &l, &ell, 0, &rat(1)).unwrap(),
            rat(25)
        );
        assert_eq!(
            brute_intermediate_sum(&square4(), &l, &ell, 0, &ratio(1, 2)).unwrap(),
            rat(9)
        );
    }

    #[test]
    fn full_subspace_is_the_plain_integral() {
        let l = RatMat::from_cols(&[rat_vec(&[1, 0]), rat_vec(&[0, 1])]);
        let ell = rat_vec(&[0, 0]);
        let sliced = brute_intermediate_sum(&square4(), &l, &ell, 0, &rat(1)).unwrap();
        let direct = polytope_integral(square4().vertices(), &ell, 0).unwrap();
        assert_eq!(sliced, rat(16));
        assert_eq!(sliced, direct);
        // Weighted, in dimension three: ∫(x+y+z) over the unit cube.
        let cube: Vec<RatVec> = (0..8i64)
            .map(|i| rat_vec(&[i & 1, (i >> 1) & 1, (i >> 2) & 1]))
            .collect();
        let p = Polytope::new(cube).unwrap();
        let l3 = RatMat::from_cols(&[rat_vec(&[1, 0, 0]), rat_vec(&[0, 1, 0]), rat_vec(&[0, 0, 1])]);
        let ell3 = rat_vec(&[1, 1, 1]);
        let sliced = brute_intermediate_sum(&p, &l3, &ell3, 1, &rat(1)).unwrap();
        let direct = polytope_integral(p.vertices(), &ell3, 1).unwrap();
        assert_eq!(sliced, ratio(3, 2));
        assert_eq!(sliced, direct);
    }

    #[test]
    fn halves_of_the_square_add_up() {
        let lower = Polytope::new(vec![rat_vec(&[0, 0]), rat_vec(&[4, 0]), rat_vec(&[4, 4])]).unwrap();
        let upper = Polytope::new(vec![rat_vec(&[0, 0]), rat_vec(&[4, 4]), rat_vec(&[0, 4])]).unwrap();
        let ell = rat_vec(&[0, 0]);
        for t in [rat(1), ratio(1, 2), ratio(7, 3)] {
            let a = brute_intermediate_sum(&lower, &vertical(), &ell, 0, &t).unwrap();
            let b = brute_intermediate_sum(&upper, &vertical(), &ell, 0, &t).unwrap();
            let whole = brute_intermediate_sum(&square4(), &vertical(), &ell, 0, &t).unwrap();
            assert_eq!(&a + &b, whole, "t = {t}");
        }
    }

    #[test]
    fn bigger_polytope_bigger_sum() {
        let small = Polytope::new(vec![
            rat_vec(&[0, 0]),
            rat_vec(&[1, 0]),
            rat_vec(&[0, 1]),
            rat_vec(&[1, 1]),
        ])
        .unwrap();
        let ell = rat_vec(&[0, 0]);
        let a = brute_intermediate_sum(&small, &vertical(), &ell, 0, &rat(1)).unwrap();
        let b = brute_intermediate_sum(&square4(), &vertical(), &ell, 0, &rat(1)).unwrap();
        assert!(a <= b);
        assert!(matches!(
            brute_intermediate_sum(&small, &vertical(), &ell, 0, &rat(0)),
            Err(Error::Domain(_))
        ));
    }
}

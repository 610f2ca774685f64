//! Generating functions of cones and polytopes: discrete sums, integrals,
//! the factorization over a face-parallel subspace, the vertex-free short
//! formula, Brion summation over polytope vertices, and exact Taylor/Laurent
//! expansion along a line.
//!
//! A [`GenFun`] is a flat list of meromorphic terms
//! `coeff · e^{⟨ξ,a⟩} / ∏(1−e^{⟨ξ,w⟩}) / ∏⟨ξ,w⟩`; all identities stated in
//! this module are equalities of such meromorphic functions, which is what
//! the expansion routines at the bottom verify term list against term list.

use num::{One, Signed, Zero};

use crate::conedecomp::{barvinok_decompose, brion_vergne_decompose, generic_vector, SimplicialCone};
use crate::error::{Error, Result};
use crate::exactlin::{
    dot, dot_ir, format_rat, frac_part, int_to_rat_vec, parse_rat, primitive, projected_lattice,
    subspace_lattice, Int, IntVec, LatticeBasis, Rat, RatMat, RatVec,
};

/// One meromorphic term `coeff · e^{⟨ξ,exponent⟩}` divided by
/// `(1−e^{⟨ξ,w⟩})` for each discrete edge and by `⟨ξ,w⟩` for each
/// continuous one.
///
/// Discrete edges are rational vectors: lifting a projected generator back
/// from a quotient chart scales it by the projected-lattice mesh, as in the
/// factor `1/(1−e^{−x+(11/12)y})`. Exponents may be rational for the same
/// reason.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MeroTerm {
    pub coeff: Rat,
    pub exponent: RatVec,
    pub discrete: Vec<RatVec>,
    pub continuous: Vec<RatVec>,
}

/// A finite sum of meromorphic terms in dimension `dim`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenFun {
    pub dim: usize,
    pub terms: Vec<MeroTerm>,
}

/// Vertex-independent datum of one short-formula summand: the value at
/// vertex s is `alpha · e^{⟨ξ, s + Σᵢ {−⟨ηᵢ,s⟩} wᵢ⟩}` over the usual edge
/// products (see [`instantiate`]).
///
/// The first `k0` edges are discrete and rational; the remaining edges are
/// integral and span the subspace the formula was built for. The covectors
/// η are integral and dual to the edges: ⟨ηᵢ, w_j⟩ = δ_ij.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShortFormulaTerm {
    pub alpha: Int,
    pub w: Vec<RatVec>,
    pub eta: Vec<IntVec>,
    pub k0: usize,
}

/// Short-formula terms paired with the vertex they are to be instantiated
/// at; the symbolic counterpart of [`GenFun`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymbolicGenFun {
    pub dim: usize,
    pub terms: Vec<(RatVec, ShortFormulaTerm)>,
}

// ---------------------------------------------------------------------------
// serde: rationals travel as "p/q" strings
// ---------------------------------------------------------------------------

#[derive(serde::Serialize, serde::Deserialize)]
struct MeroTermRepr {
    coeff: String,
    exponent: Vec<String>,
    discrete: Vec<Vec<String>>,
    continuous: Vec<Vec<String>>,
}

#[derive(serde::Serialize, serde::Deserialize)]
struct GenFunRepr {
    dim: usize,
    terms: Vec<MeroTermRepr>,
}

fn fmt_vec(v: &[Rat]) -> Vec<String> {
    v.iter().map(format_rat).collect()
}

fn parse_vec(v: &[String]) -> Result<RatVec> {
    v.iter().map(|s| parse_rat(s)).collect()
}

impl serde::Serialize for GenFun {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        let repr = GenFunRepr {
            dim: self.dim,
            terms: self
                .terms
                .iter()
                .map(|t| MeroTermRepr {
                    coeff: format_rat(&t.coeff),
                    exponent: fmt_vec(&t.exponent),
                    discrete: t.discrete.iter().map(|w| fmt_vec(w)).collect(),
                    continuous: t.continuous.iter().map(|w| fmt_vec(w)).collect(),
                })
                .collect(),
        };
        repr.serialize(ser)
    }
}

impl<'de> serde::Deserialize<'de> for GenFun {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let repr = GenFunRepr::deserialize(de)?;
        let mut terms = Vec::with_capacity(repr.terms.len());
        for t in &repr.terms {
            let term = (|| -> Result<MeroTerm> {
                Ok(MeroTerm {
                    coeff: parse_rat(&t.coeff)?,
                    exponent: parse_vec(&t.exponent)?,
                    discrete: t.discrete.iter().map(|w| parse_vec(w)).collect::<Result<_>>()?,
                    continuous: t
                        .continuous
                        .iter()
                        .map(|w| parse_vec(w))
                        .collect::<Result<_>>()?,
                })
            })()
            .map_err(serde::de::Error::custom)?;
            terms.push(term);
        }
        Ok(GenFun {
            dim: repr.dim,
            terms,
        })
    }
}

// ---------------------------------------------------------------------------
// Polytopes
// ---------------------------------------------------------------------------

/// A full-dimensional polytope, stored by its extreme points together with
/// the recovered facet description ⟨n, x⟩ ≤ c.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polytope {
    vertices: Vec<RatVec>,
    facets: Vec<(IntVec, Rat)>,
}

fn fmt_point(v: &[Rat]) -> String {
    let coords: Vec<String> = v.iter().map(format_rat).collect();
    format!("({})", coords.join(", "))
}

impl Polytope {
    /// Builds a polytope from any generating point set: facets are recovered
    /// by enumerating hyperplanes through d-subsets, and only the extreme
    /// points are kept. Points that are not full-dimensional are rejected.
    pub fn new(points: Vec<RatVec>) -> Result<Self> {
        let first = points
            .first()
            .ok_or_else(|| Error::Dimension("a polytope needs at least one point".into()))?;
        let d = first.len();
        if d == 0 {
            return Err(Error::Dimension("ambient dimension must be positive".into()));
        }
        for p in &points {
            if p.len() != d {
                return Err(Error::Dimension(format!(
                    "point has {} coordinates, expected {}",
                    p.len(),
                    d
                )));
            }
        }
        let mut pts: Vec<RatVec> = Vec::new();
        for p in points {
            if !pts.contains(&p) {
                pts.push(p);
            }
        }
        let diffs: Vec<RatVec> = pts[1..].iter().map(|p| crate::exactlin::vec_sub(p, &pts[0])).collect();
        if RatMat::from_rows(&diffs).rank() < d {
            return Err(Error::Degenerate);
        }

        let mut facets: Vec<(IntVec, Rat)> = Vec::new();
        let mut subset = Vec::new();
        let mut record = |sigma: &[usize]| -> Result<()> {
            if let Some((n, c)) = supporting_hyperplane(&pts, sigma)? {
                if !facets.contains(&(n.clone(), c.clone())) {
                    facets.push((n, c));
                }
            }
            Ok(())
        };
        subsets_of(pts.len(), d, 0, &mut subset, &mut record)?;
        facets.sort();

        let mut vertices: Vec<RatVec> = pts
            .into_iter()
            .filter(|p| {
                let tight: Vec<RatVec> = facets
                    .iter()
                    .filter(|(n, c)| dot_ir(n, p) == *c)
                    .map(|(n, _)| int_to_rat_vec(n))
                    .collect();
                tight.len() >= d && RatMat::from_rows(&tight).rank() == d
            })
            .collect();
        vertices.sort();
        if vertices.is_empty() {
            return Err(Error::Degenerate);
        }
        Ok(Polytope { vertices, facets })
    }

    pub fn dim(&self) -> usize {
        self.vertices[0].len()
    }

    pub fn vertices(&self) -> &[RatVec] {
        &self.vertices
    }

    pub fn facets(&self) -> &[(IntVec, Rat)] {
        &self.facets
    }

    /// The cone of feasible directions at a vertex, generated by the edge
    /// directions cut out by the facets tight there. Requires the vertex to
    /// be simple: exactly d tight facets with independent normals.
    pub fn vertex_cone(&self, vertex: usize) -> Result<SimplicialCone> {
        let d = self.dim();
        let v = &self.vertices[vertex];
        let tight: Vec<RatVec> = self
            .facets
            .iter()
            .filter(|(n, c)| dot_ir(n, v) == *c)
            .map(|(n, _)| int_to_rat_vec(n))
            .collect();
        if tight.len() != d {
            return Err(Error::NonSimple(format!(
                "vertex {} has {} tight facets, expected {}",
                fmt_point(v),
                tight.len(),
                d
            )));
        }
        let n = RatMat::from_rows(&tight);
        let ninv = n.inverse().ok_or_else(|| {
            Error::NonSimple(format!(
                "vertex {} has dependent tight facet normals",
                fmt_point(v)
            ))
        })?;
        // Columns of −N⁻¹ satisfy ⟨nᵢ, g_j⟩ = −δ_ij ≤ 0: edge directions.
        let mut gens = Vec::with_capacity(d);
        for j in 0..d {
            let col: RatVec = ninv.col(j).iter().map(|x| -x.clone()).collect();
            gens.push(primitive(&col)?);
        }
        SimplicialCone::new(gens, d)
    }
}

/// The supporting hyperplane through the points indexed by `sigma`, oriented
/// so all points satisfy ⟨n, x⟩ ≤ c; None when the subset is affinely
/// degenerate or the hyperplane separates.
fn supporting_hyperplane(pts: &[RatVec], sigma: &[usize]) -> Result<Option<(IntVec, Rat)>> {
    let d = pts[0].len();
    let base = &pts[sigma[0]];
    let mut rows: Vec<IntVec> = Vec::with_capacity(d - 1);
    for &i in &sigma[1..] {
        let diff = crate::exactlin::vec_sub(&pts[i], base);
        if crate::exactlin::is_zero_vec(&diff) {
            return Ok(None);
        }
        rows.push(primitive(&diff)?);
    }
    // In dimension one the row list is empty; keep the column count.
    let m = if rows.is_empty() {
        crate::exactlin::IntMat::zeros(0, d)
    } else {
        crate::exactlin::IntMat::from_rows(&rows)
    };
    let kernel = crate::exactlin::integer_kernel(&m);
    if kernel.cols() != 1 {
        return Ok(None);
    }
    let n = primitive(&int_to_rat_vec(&kernel.col(0)))?;
    let c = dot_ir(&n, base);
    if pts.iter().all(|p| dot_ir(&n, p) <= c) {
        return Ok(Some((n, c)));
    }
    if pts.iter().all(|p| dot_ir(&n, p) >= c) {
        let neg: IntVec = n.iter().map(|x| -x.clone()).collect();
        return Ok(Some((neg, -c)));
    }
    Ok(None)
}

fn subsets_of(
    n: usize,
    k: usize,
    start: usize,
    acc: &mut Vec<usize>,
    f: &mut impl FnMut(&[usize]) -> Result<()>,
) -> Result<()> {
    if acc.len() == k {
        return f(acc);
    }
    let remaining = k - acc.len();
    if n < remaining {
        return Ok(());
    }
    for j in start..=(n - remaining) {
        acc.push(j);
        subsets_of(n, k, j + 1, acc, f)?;
        acc.pop();
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Cone generating functions
// ---------------------------------------------------------------------------

/// The integral ∫ e^{⟨ξ,x⟩} over the affine cone s + 𝔠(generators), with
/// respect to the Lebesgue measure normalized by the given lattice: a single
/// term `(−1)^k · vol · e^{⟨ξ,s⟩} / ∏⟨ξ,v⟩` where vol is the volume of the
/// generator parallelepiped in lattice units.
pub fn integral_genfun(s: &[Rat], generators: &[IntVec], lattice: &LatticeBasis) -> Result<MeroTerm> {
    let k = generators.len();
    let mut coords = Vec::with_capacity(k);
    for g in generators {
        let c = lattice.coordinates_of(&int_to_rat_vec(g)).ok_or_else(|| {
            Error::Dimension("integral generator is outside the lattice span".into())
        })?;
        coords.push(c);
    }
    let vol = if k == 0 {
        Rat::one()
    } else {
        let m = RatMat::from_cols(&coords);
        if m.rank() < k {
            return Err(Error::Rank("integral cone generators are dependent".into()));
        }
        m.det().abs()
    };
    let sign = if k % 2 == 0 { Rat::one() } else { -Rat::one() };
    Ok(MeroTerm {
        coeff: sign * vol,
        exponent: s.to_vec(),
        discrete: Vec::new(),
        continuous: generators.iter().map(|g| int_to_rat_vec(g)).collect(),
    })
}

/// The sum Σ e^{⟨ξ,x⟩} over lattice points of the affine cone s + c, as a
/// short signed sum of unimodular-cone terms.
///
/// Works in lattice coordinates, so any full-rank lattice is accepted; the
/// vertex may be any rational point (the exponent picks up the ceilings of
/// its coordinates piece by piece).
pub fn discrete_genfun(s: &[Rat], c: &SimplicialCone, lattice: &LatticeBasis) -> Result<GenFun> {
    let d = c.dim();
    if lattice.ambient_dim() != d || lattice.rank() != d || c.generators().len() != d {
        return Err(Error::Dimension(
            "discrete sum requires a full-dimensional cone and full-rank lattice".into(),
        ));
    }
    let b = lattice.to_rat_mat();
    let binv = b.inverse().ok_or(Error::SingularMatrix)?;
    let mut gens = Vec::with_capacity(d);
    for g in c.generators() {
        gens.push(primitive(&binv.mul_vec(&int_to_rat_vec(g)))?);
    }
    let cone_b = SimplicialCone::new(gens, d)?;
    let s_b = binv.mul_vec(s);
    let mut terms = Vec::new();
    for piece in barvinok_decompose(&cone_b)? {
        let u = RatMat::from_cols(
            &piece
                .cone
                .generators()
                .iter()
                .map(|g| int_to_rat_vec(g))
                .collect::<Vec<_>>(),
        );
        let tau = u
            .inverse()
            .ok_or(Error::SingularMatrix)?
            .mul_vec(&s_b);
        // Lattice points are Σ mᵢuᵢ with mᵢ ≥ ⌈τᵢ⌉; the exponent is the
        // corner Σ⌈τᵢ⌉uᵢ = s + Σ{−τᵢ}uᵢ, mapped back through the lattice.
        let mut exponent = s.to_vec();
        let mut edges = Vec::with_capacity(d);
        for (i, g) in piece.cone.generators().iter().enumerate() {
            let edge = b.mul_vec(&int_to_rat_vec(g));
            let beta = frac_part(&-tau[i].clone(), &Int::one());
            for (x, y) in exponent.iter_mut().zip(&edge) {
                *x += &beta * y;
            }
            edges.push(edge);
        }
        terms.push(MeroTerm {
            coeff: Rat::from_integer(Int::from(piece.sign)),
            exponent,
            discrete: edges,
            continuous: Vec::new(),
        });
    }
    Ok(GenFun { dim: d, terms })
}

/// Short-formula terms for a cone whose generators split into a transversal
/// head and a tail spanning the subspace: the discrete sum over the
/// projected cone times the integral over the tail face, merged term by
/// term. `base_sign` multiplies every α.
fn split_terms(
    head: &[IntVec],
    tail: &[IntVec],
    d: usize,
    base_sign: i32,
) -> Result<Vec<ShortFormulaTerm>> {
    let k0 = head.len();
    // Tail cell volume in the induced lattice of its span.
    let tail_cols: Vec<RatVec> = tail.iter().map(|g| int_to_rat_vec(g)).collect();
    let l_mat = RatMat::from_cols(&tail_cols);
    let vol = if tail.is_empty() {
        Int::one()
    } else {
        let l_lat = subspace_lattice(&l_mat)?;
        let mut coords = Vec::with_capacity(tail.len());
        for g in tail {
            let c = l_lat
                .coordinates_of(&int_to_rat_vec(g))
                .ok_or_else(|| Error::Internal("tail generator left its own span".into()))?;
            coords.push(c);
        }
        let det = RatMat::from_cols(&coords).det().abs();
        debug_assert!(det.is_integer(), "saturated lattice gives integer coords");
        det.to_integer()
    };
    let face_sign = if (d - k0) % 2 == 0 { 1i32 } else { -1 };
    let alpha_base = Int::from(base_sign * face_sign) * &vol;

    if k0 == 0 {
        return Ok(vec![ShortFormulaTerm {
            alpha: alpha_base,
            w: tail_cols,
            eta: Vec::new(),
            k0: 0,
        }]);
    }
    if tail.is_empty() {
        // Nothing to integrate over: plain signed unimodular decomposition,
        // with covectors read off the (integral) inverses.
        let head_cone = SimplicialCone::new(head.to_vec(), d)?;
        let mut out = Vec::new();
        for piece in barvinok_decompose(&head_cone)? {
            let cols: Vec<RatVec> = piece
                .cone
                .generators()
                .iter()
                .map(|g| int_to_rat_vec(g))
                .collect();
            let winv = RatMat::from_cols(&cols)
                .inverse()
                .ok_or(Error::SingularMatrix)?;
            let mut eta = Vec::with_capacity(d);
            for i in 0..d {
                let mut cov = Vec::with_capacity(d);
                for x in winv.row(i) {
                    if !x.is_integer() {
                        return Err(Error::Internal(
                            "unimodular cone with non-integral inverse".into(),
                        ));
                    }
                    cov.push(x.to_integer());
                }
                eta.push(cov);
            }
            out.push(ShortFormulaTerm {
                alpha: Int::from(piece.sign) * &alpha_base,
                w: cols,
                eta,
                k0,
            });
        }
        return Ok(out);
    }

    // Quotient chart: coordinates over the head generators; the projected
    // lattice in that chart need not be ℤ^k₀, so rescale to make it so.
    let head_cols: Vec<RatVec> = head.iter().map(|g| int_to_rat_vec(g)).collect();
    let head_mat = RatMat::from_cols(&head_cols);
    let lam_bar = projected_lattice(&LatticeBasis::standard(d), &l_mat, &head_mat)?;
    if lam_bar.rank() != k0 {
        return Err(Error::Internal("projected lattice lost rank".into()));
    }
    let bbar = lam_bar.to_rat_mat();
    let bbar_inv = bbar.inverse().ok_or(Error::SingularMatrix)?;
    let mut zgens = Vec::with_capacity(k0);
    for j in 0..k0 {
        let mut e = vec![Rat::zero(); k0];
        e[j] = Rat::one();
        // Projected head generators are the chart unit vectors; primitive in
        // the projected lattice after the basis change.
        zgens.push(primitive(&bbar_inv.mul_vec(&e))?);
    }
    let zcone = SimplicialCone::new(zgens, k0)?;

    let mut out = Vec::new();
    for piece in barvinok_decompose(&zcone)? {
        let mut w: Vec<RatVec> = Vec::with_capacity(d);
        for u in piece.cone.generators() {
            let zu = bbar.mul_vec(&int_to_rat_vec(u));
            w.push(head_mat.mul_vec(&zu));
        }
        w.extend(tail_cols.iter().cloned());
        let wm = RatMat::from_cols(&w);
        let winv = wm.inverse().ok_or(Error::SingularMatrix)?;
        let mut eta = Vec::with_capacity(k0);
        for i in 0..k0 {
            let mut cov = Vec::with_capacity(d);
            for x in winv.row(i) {
                if !x.is_integer() {
                    return Err(Error::Internal(
                        "dual covector of a discrete edge is not integral".into(),
                    ));
                }
                cov.push(x.to_integer());
            }
            eta.push(cov);
        }
        out.push(ShortFormulaTerm {
            alpha: Int::from(piece.sign) * &alpha_base,
            w: w.clone(),
            eta,
            k0,
        });
    }
    Ok(out)
}

/// Numeric value of a short-formula term at vertex s.
pub fn instantiate(s: &[Rat], t: &ShortFormulaTerm) -> MeroTerm {
    let mut exponent = s.to_vec();
    for i in 0..t.k0 {
        let beta = frac_part(&-dot_ir(&t.eta[i], s), &Int::one());
        for (x, y) in exponent.iter_mut().zip(&t.w[i]) {
            *x += &beta * y;
        }
    }
    MeroTerm {
        coeff: Rat::from_integer(t.alpha.clone()),
        exponent,
        discrete: t.w[..t.k0].to_vec(),
        continuous: t.w[t.k0..].to_vec(),
    }
}

/// Generating function of s + c for a cone with a face spanning the
/// subspace: discrete along the quotient, integral along the face indexed by
/// `face` (positions into the generator list).
pub fn parallel_face_genfun(
    s: &[Rat],
    c: &SimplicialCone,
    face: &[usize],
    lattice: &LatticeBasis,
) -> Result<GenFun> {
    let d = c.dim();
    if c.generators().len() != d {
        return Err(Error::Dimension(
            "face factorization requires a full-dimensional cone".into(),
        ));
    }
    let mut seen = vec![false; d];
    for &i in face {
        if i >= d || seen[i] {
            return Err(Error::Dimension(format!(
                "face index {} is out of range or repeated",
                i
            )));
        }
        seen[i] = true;
    }
    if face.len() == d {
        let term = integral_genfun(s, c.generators(), lattice)?;
        return Ok(GenFun {
            dim: d,
            terms: vec![term],
        });
    }
    if face.is_empty() {
        return discrete_genfun(s, c, lattice);
    }
    if lattice.ambient_dim() != d || lattice.rank() != d {
        return Err(Error::Dimension(
            "face factorization requires a full-rank lattice".into(),
        ));
    }
    if *lattice != LatticeBasis::standard(d) {
        return Err(Error::Domain(
            "face factorization is implemented for the standard lattice".into(),
        ));
    }
    let head: Vec<IntVec> = (0..d)
        .filter(|i| !seen[*i])
        .map(|i| c.generators()[i].clone())
        .collect();
    let tail: Vec<IntVec> = (0..d)
        .filter(|i| seen[*i])
        .map(|i| c.generators()[i].clone())
        .collect();
    let terms = split_terms(&head, &tail, d, 1)?
        .iter()
        .map(|t| instantiate(s, t))
        .collect();
    Ok(GenFun { dim: d, terms })
}

/// Vertex-free short formula for the intermediate sum of a cone with
/// respect to the subspace spanned by the columns of `l_basis`: decompose
/// into cones with a face parallel to the subspace, then factor each piece.
pub fn short_formula_terms(c: &SimplicialCone, l_basis: &RatMat) -> Result<Vec<ShortFormulaTerm>> {
    let d = c.dim();
    let a = generic_vector(c, l_basis)?;
    let pieces = brion_vergne_decompose(c, l_basis, &a)?;
    let k0 = d - l_basis.cols();
    let mut out = Vec::new();
    for piece in &pieces {
        let gens = piece.cone.generators();
        let terms = split_terms(&gens[..k0], &gens[k0..], d, piece.sign)?;
        for t in &terms {
            debug_assert!(duality_holds(t), "edge–covector duality");
        }
        out.extend(terms);
    }
    Ok(out)
}

fn duality_holds(t: &ShortFormulaTerm) -> bool {
    for (i, eta) in t.eta.iter().enumerate() {
        for (j, w) in t.w.iter().enumerate() {
            let x = dot_ir(eta, w);
            let want = if i == j { Rat::one() } else { Rat::zero() };
            if x != want {
                return false;
            }
        }
    }
    true
}

/// Intermediate generating function of s + c: short formula instantiated at
/// the vertex.
pub fn intermediate_genfun(s: &[Rat], c: &SimplicialCone, l_basis: &RatMat) -> Result<GenFun> {
    let terms = short_formula_terms(c, l_basis)?
        .iter()
        .map(|t| instantiate(s, t))
        .collect();
    Ok(GenFun {
        dim: c.dim(),
        terms,
    })
}

/// Symbolic generating function of a simple polytope: short-formula terms of
/// every vertex cone, paired with their vertices.
pub fn polytope_symbolic(p: &Polytope, l_basis: &RatMat) -> Result<SymbolicGenFun> {
    let mut terms = Vec::new();
    for (i, v) in p.vertices().iter().enumerate() {
        let cone = p.vertex_cone(i)?;
        for t in short_formula_terms(&cone, l_basis)? {
            terms.push((v.clone(), t));
        }
    }
    Ok(SymbolicGenFun {
        dim: p.dim(),
        terms,
    })
}

/// Generating function of a simple polytope: the sum of the vertex-cone
/// functions.
pub fn polytope_genfun(p: &Polytope, l_basis: &RatMat) -> Result<GenFun> {
    let sym = polytope_symbolic(p, l_basis)?;
    Ok(GenFun {
        dim: sym.dim,
        terms: sym
            .terms
            .iter()
            .map(|(v, t)| instantiate(v, t))
            .collect(),
    })
}

// ---------------------------------------------------------------------------
// Expansion along a line
// ---------------------------------------------------------------------------

/// A truncated Laurent expansion: `coeffs[k]` is the coefficient of
/// τ^(min_deg + k).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaurentSeries {
    pub min_deg: i64,
    pub coeffs: Vec<Rat>,
}

impl LaurentSeries {
    /// Highest exponent covered by the expansion.
    pub fn max_deg(&self) -> i64 {
        self.min_deg + self.coeffs.len() as i64 - 1
    }

    /// Coefficient of τ^deg; zero below `min_deg`, panics above the
    /// computed order.
    pub fn coeff(&self, deg: i64) -> Rat {
        assert!(deg <= self.max_deg(), "coefficient beyond computed order");
        if deg < self.min_deg {
            Rat::zero()
        } else {
            self.coeffs[(deg - self.min_deg) as usize].clone()
        }
    }
}

pub(crate) fn series_mul(a: &[Rat], b: &[Rat], n: usize) -> Vec<Rat> {
    let mut out = vec![Rat::zero(); n + 1];
    for (i, x) in a.iter().enumerate().take(n + 1) {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(n + 1 - i) {
            out[i + j] += x * y;
        }
    }
    out
}

/// Multiplicative inverse of a power series with unit constant term.
pub(crate) fn series_recip(u: &[Rat], n: usize) -> Result<Vec<Rat>> {
    if u.is_empty() || u[0].is_zero() {
        return Err(Error::Internal("series reciprocal needs a unit".into()));
    }
    let mut v = vec![Rat::zero(); n + 1];
    v[0] = Rat::one() / &u[0];
    for m in 1..=n {
        let mut acc = Rat::zero();
        for k in 1..=m.min(u.len() - 1) {
            acc += &u[k] * &v[m - k];
        }
        v[m] = -acc / &u[0];
    }
    Ok(v)
}

fn exp_series(a: &Rat, n: usize) -> Vec<Rat> {
    let mut out = Vec::with_capacity(n + 1);
    let mut cur = Rat::one();
    out.push(cur.clone());
    for j in 1..=n {
        cur = cur * a / Rat::from_integer(Int::from(j as i64));
        out.push(cur.clone());
    }
    out
}

/// Laurent data of one term along ξ = τ·ξ₀: pole order p and numerator
/// coefficients c_0..c_{order+p}, so the term contributes c_j·τ^(j−p).
fn term_laurent(t: &MeroTerm, xi0: &[Rat], order: usize) -> Result<(usize, Vec<Rat>)> {
    let p = t.discrete.len() + t.continuous.len();
    let n = order + p;
    let mut num = exp_series(&dot(xi0, &t.exponent), n);
    for w in &t.discrete {
        let b = dot(xi0, w);
        if b.is_zero() {
            return Err(Error::SingularDirection);
        }
        // τ/(1−e^{bτ}) as the reciprocal of (1−e^{bτ})/τ, whose m-th
        // coefficient is −b^{m+1}/(m+1)!.
        let mut den = Vec::with_capacity(n + 1);
        let mut pw = b.clone();
        let mut fact = Rat::one();
        for m in 0..=n {
            fact *= Rat::from_integer(Int::from((m + 1) as i64));
            den.push(-(&pw / &fact));
            pw *= &b;
        }
        num = series_mul(&num, &series_recip(&den, n)?, n);
    }
    for w in &t.continuous {
        let b = dot(xi0, w);
        if b.is_zero() {
            return Err(Error::SingularDirection);
        }
        for x in num.iter_mut() {
            *x = &*x / &b;
        }
    }
    for x in num.iter_mut() {
        *x = &t.coeff * &*x;
    }
    Ok((p, num))
}

/// Exact Laurent expansion of the summed terms along the line τ ↦ τ·ξ₀,
/// covering exponents from the deepest pole through τ^order. The direction
/// must pair nonzero with every edge of every term.
pub fn laurent_along(f: &GenFun, xi0: &[Rat], order: usize) -> Result<LaurentSeries> {
    let mut pieces = Vec::with_capacity(f.terms.len());
    let mut max_p = 0usize;
    for t in &f.terms {
        let piece = term_laurent(t, xi0, order)?;
        max_p = max_p.max(piece.0);
        pieces.push(piece);
    }
    let min_deg = -(max_p as i64);
    let mut coeffs = vec![Rat::zero(); max_p + order + 1];
    for (p, num) in &pieces {
        let shift = max_p - p;
        for (j, x) in num.iter().enumerate() {
            coeffs[shift + j] += x;
        }
    }
    Ok(LaurentSeries { min_deg, coeffs })
}

/// Taylor coefficients of τ^0..τ^order along ξ = τ·ξ₀; the poles of
/// individual terms must cancel in the sum for this to be the whole story,
/// which holds for polytope generating functions.
pub fn taylor_along(f: &GenFun, xi0: &[Rat], order: usize) -> Result<Vec<Rat>> {
    let ls = laurent_along(f, xi0, order)?;
    Ok((0..=order as i64).map(|d| ls.coeff(d)).collect())
}

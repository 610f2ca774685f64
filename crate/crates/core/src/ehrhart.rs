//! Quasi-polynomials counting weighted slices of dilated polytopes.
//!
//! For a rational polytope 𝔭 and an admissible subspace L, the sliced sum of
//! ⟨ℓ,x⟩^M over t𝔭 is a quasi-polynomial in the dilation t > 0: a polynomial
//! whose coefficients are themselves polynomials in fractional-part functions
//! {ζt}_q. This module builds that quasi-polynomial exactly from the
//! per-vertex short-formula terms, and represents the coefficients as step
//! polynomials with a decidable zero test, so two representations can be
//! compared even though the fractional-part algebra has no canonical form.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num::{Integer, One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exactlin::{
    dot, dot_ir, format_rat, frac_part, parse_rat, smallest_dilation, Int, Rat, RatMat, RatVec,
};
use crate::genfun::{polytope_symbolic, series_mul, series_recip, Polytope, SymbolicGenFun};

// ---------------------------------------------------------------------------
// Bernoulli polynomials
// ---------------------------------------------------------------------------

fn factorial(n: usize) -> Int {
    (1..=n).fold(Int::one(), |acc, j| acc * Int::from(j as i64))
}

fn binomial(n: usize, k: usize) -> Int {
    if k > n {
        return Int::zero();
    }
    let k = k.min(n - k);
    let mut num = Int::one();
    for j in 0..k {
        num *= Int::from((n - j) as i64);
    }
    num / factorial(k)
}

fn rat_pow(x: &Rat, m: usize) -> Rat {
    let mut out = Rat::one();
    for _ in 0..m {
        out *= x;
    }
    out
}

/// Coefficient table of B_0(t), …, B_n(t), constant term first in each row.
///
/// The numbers B_k come from the defining recurrence Σ_{j≤k} C(k+1,j)B_j = 0,
/// so B_1 = -1/2 and the generating identity e^{ut}·t/(1 - e^t) =
/// -Σ B_k(u)·t^k/k! holds with this sign convention.
fn bernoulli_table(n_max: usize) -> Vec<Vec<Rat>> {
    let mut numbers: Vec<Rat> = vec![Rat::one()];
    for n in 1..=n_max {
        let mut acc = Rat::zero();
        for (j, b) in numbers.iter().enumerate() {
            acc += Rat::from_integer(binomial(n + 1, j)) * b;
        }
        numbers.push(-acc / Rat::from_integer(Int::from((n + 1) as i64)));
    }
    (0..=n_max)
        .map(|n| {
            let mut coeffs = vec![Rat::zero(); n + 1];
            for (k, b) in numbers.iter().enumerate().take(n + 1) {
                coeffs[n - k] = Rat::from_integer(binomial(n, k)) * b;
            }
            coeffs
        })
        .collect()
}

/// Coefficients of the n-th Bernoulli polynomial, constant term first.
pub fn bernoulli_polynomial(n: usize) -> Vec<Rat> {
    bernoulli_table(n).pop().unwrap()
}

// ---------------------------------------------------------------------------
// Step polynomials
// ---------------------------------------------------------------------------

/// Writes the function t ↦ {-z·t/q} (fractional part in [0,1)) in lowest
/// terms: returns (ζ, q') with the gcd of z and q removed, so that the
/// function equals (1/q')·{ζt}_{q'}. A zero multiplier collapses to the
/// constant zero, reported as (0, 1).
pub fn frac_reduce(z: &Int, q: &Int) -> (Int, Int) {
    assert!(q.is_positive(), "period must be positive");
    if z.is_zero() {
        return (Int::zero(), Int::one());
    }
    let g = z.gcd(q);
    (-(z / &g), q / &g)
}

/// One factor {ζt}_q^exp, where {x}_q = x - q·⌊x/q⌋ lies in [0, q).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct StepAtom {
    pub zeta: Int,
    pub q: Int,
    pub exp: u32,
}

impl StepAtom {
    pub fn eval(&self, t: &Rat) -> Rat {
        let base = frac_part(&(Rat::from_integer(self.zeta.clone()) * t), &self.q);
        rat_pow(&base, self.exp as usize)
    }
}

impl fmt::Display for StepAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exp == 1 {
            write!(f, "{{{}t}}_{}", self.zeta, self.q)
        } else {
            write!(f, "({{{}t}}_{})^{}", self.zeta, self.q, self.exp)
        }
    }
}

/// A product of fractional-part factors with a rational coefficient.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StepMonomial {
    pub coeff: Rat,
    pub atoms: Vec<StepAtom>,
}

impl StepMonomial {
    pub fn eval(&self, t: &Rat) -> Rat {
        self.atoms
            .iter()
            .fold(self.coeff.clone(), |acc, a| acc * a.eval(t))
    }
}

/// Sum of step monomials, kept merged: atoms sorted within each monomial,
/// monomials sorted by their atom lists, no zero coefficients, no {0t}_q.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct StepPolynomial {
    pub monomials: Vec<StepMonomial>,
}

impl StepPolynomial {
    pub fn zero() -> Self {
        StepPolynomial { monomials: vec![] }
    }

    pub fn constant(c: Rat) -> Self {
        Self::normalize(vec![StepMonomial {
            coeff: c,
            atoms: vec![],
        }])
    }

    /// The single monomial coeff·{ζt}_q.
    pub fn fractional(coeff: Rat, zeta: Int, q: Int) -> Self {
        Self::normalize(vec![StepMonomial {
            coeff,
            atoms: vec![StepAtom { zeta, q, exp: 1 }],
        }])
    }

    fn normalize(monomials: Vec<StepMonomial>) -> Self {
        let mut merged: BTreeMap<Vec<StepAtom>, Rat> = BTreeMap::new();
        for m in monomials {
            if m.coeff.is_zero() {
                continue;
            }
            // combine repeated bases and drop the identically-zero {0t}_q
            let mut by_base: BTreeMap<(Int, Int), u32> = BTreeMap::new();
            for a in m.atoms {
                if a.zeta.is_zero() {
                    continue;
                }
                *by_base.entry((a.zeta, a.q)).or_insert(0) += a.exp;
            }
            let atoms: Vec<StepAtom> = by_base
                .into_iter()
                .map(|((zeta, q), exp)| StepAtom { zeta, q, exp })
                .collect();
            *merged.entry(atoms).or_insert_with(Rat::zero) += m.coeff;
        }
        let monomials = merged
            .into_iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|(atoms, coeff)| StepMonomial { coeff, atoms })
            .collect();
        StepPolynomial { monomials }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut all = self.monomials.clone();
        all.extend(other.monomials.iter().cloned());
        Self::normalize(all)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-Rat::one()))
    }

    pub fn scale(&self, c: &Rat) -> Self {
        Self::normalize(
            self.monomials
                .iter()
                .map(|m| StepMonomial {
                    coeff: &m.coeff * c,
                    atoms: m.atoms.clone(),
                })
                .collect(),
        )
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Vec::new();
        for a in &self.monomials {
            for b in &other.monomials {
                let mut atoms = a.atoms.clone();
                atoms.extend(b.atoms.iter().cloned());
                out.push(StepMonomial {
                    coeff: &a.coeff * &b.coeff,
                    atoms,
                });
            }
        }
        Self::normalize(out)
    }

    pub fn eval(&self, t: &Rat) -> Rat {
        self.monomials.iter().map(|m| m.eval(t)).sum()
    }

    fn atom_bases(&self) -> BTreeSet<(Int, Int)> {
        self.monomials
            .iter()
            .flat_map(|m| m.atoms.iter())
            .map(|a| (a.zeta.clone(), a.q.clone()))
            .collect()
    }

    fn atom_degree(&self) -> usize {
        self.monomials
            .iter()
            .map(|m| m.atoms.iter().map(|a| a.exp as usize).sum())
            .max()
            .unwrap_or(0)
    }

    /// Decides whether the function vanishes identically on t > 0.
    ///
    /// On each interval between consecutive jump points of the fractional
    /// parts the function is a polynomial in t of degree at most the largest
    /// atom total, so vanishing at the jump points of one full period plus
    /// degree+1 interior points of every gap forces the zero function.
    pub fn is_zero(&self) -> bool {
        if self.monomials.is_empty() {
            return true;
        }
        let bases = self.atom_bases();
        if bases.is_empty() {
            // merged constant; normalize drops zeros, so this is nonzero
            return false;
        }
        let period = bases.iter().fold(Int::one(), |acc, (_, q)| acc.lcm(q));
        let mut jumps: BTreeSet<Rat> = BTreeSet::new();
        for (zeta, q) in &bases {
            let count = (&period * zeta.abs()) / q;
            let count = count.to_i64().expect("jump count fits in i64");
            for k in 1..=count {
                jumps.insert(Rat::new(Int::from(k) * q, zeta.abs()));
            }
        }
        let interior = self.atom_degree() + 1;
        let mut samples: Vec<Rat> = jumps.iter().cloned().collect();
        let mut lower = Rat::zero();
        for b in &jumps {
            let width = b - &lower;
            for j in 1..=interior {
                let frac = Rat::new(Int::from(j as i64), Int::from((interior + 1) as i64));
                samples.push(&lower + &width * frac);
            }
            lower = b.clone();
        }
        samples.iter().all(|t| self.eval(t).is_zero())
    }
}

impl fmt::Display for StepPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.monomials.is_empty() {
            return write!(f, "0");
        }
        for (i, m) in self.monomials.iter().enumerate() {
            let neg = m.coeff.is_negative();
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            let mag = m.coeff.abs();
            if m.atoms.is_empty() {
                write!(f, "{}", format_rat(&mag))?;
            } else {
                if !mag.is_one() {
                    write!(f, "{} ", format_rat(&mag))?;
                }
                for (j, a) in m.atoms.iter().enumerate() {
                    if j > 0 {
                        write!(f, " ")?;
                    }
                    write!(f, "{a}")?;
                }
            }
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Quasi-polynomials
// ---------------------------------------------------------------------------

/// Σ_m E_m(t)·t^m with step-polynomial coefficients E_m, valid for t > 0.
///
/// `degree` is the a-priori bound on the t-degree (ambient dimension plus
/// weight degree); `period` is the least common multiple of the atom periods
/// appearing in the coefficients, so E_m(t + period) = E_m(t).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuasiPolynomial {
    pub degree: usize,
    pub period: Int,
    pub coeffs: BTreeMap<usize, StepPolynomial>,
}

impl QuasiPolynomial {
    pub fn zero() -> Self {
        QuasiPolynomial {
            degree: 0,
            period: Int::one(),
            coeffs: BTreeMap::new(),
        }
    }

    fn period_of(coeffs: &BTreeMap<usize, StepPolynomial>) -> Int {
        coeffs
            .values()
            .flat_map(|sp| sp.atom_bases())
            .fold(Int::one(), |acc, (_, q)| acc.lcm(&q))
    }

    /// Value at a positive dilation. Negative and zero t are outside the
    /// domain of the counting function and are rejected.
    pub fn eval(&self, t: &Rat) -> Result<Rat> {
        if !t.is_positive() {
            return Err(Error::Domain(format!(
                "dilation must be positive, got {}",
                format_rat(t)
            )));
        }
        let mut total = Rat::zero();
        for (m, sp) in &self.coeffs {
            total += sp.eval(t) * rat_pow(t, *m);
        }
        Ok(total)
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut coeffs = self.coeffs.clone();
        for (m, sp) in &other.coeffs {
            let merged = match coeffs.get(m) {
                Some(cur) => cur.add(sp),
                None => sp.clone(),
            };
            if merged.monomials.is_empty() {
                coeffs.remove(m);
            } else {
                coeffs.insert(*m, merged);
            }
        }
        QuasiPolynomial {
            degree: self.degree.max(other.degree),
            period: Self::period_of(&coeffs),
            coeffs,
        }
    }

    pub fn sum(parts: &[QuasiPolynomial]) -> Self {
        parts.iter().fold(Self::zero(), |acc, p| acc.add(p))
    }
}

impl fmt::Display for QuasiPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, sp) in self.coeffs.iter().rev() {
            let head = if sp.monomials.len() == 1 {
                format!("{sp}")
            } else {
                format!("({sp})")
            };
            let part = match m {
                0 => head,
                1 => format!("{head} t"),
                _ => format!("{head} t^{m}"),
            };
            if first {
                write!(f, "{part}")?;
                first = false;
            } else if let Some(rest) = part.strip_prefix('-') {
                write!(f, " - {rest}")?;
            } else {
                write!(f, " + {part}")?;
            }
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Serialization
// ---------------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
struct AtomRepr {
    zeta: i64,
    q: u64,
    exp: u32,
}

#[derive(Serialize, Deserialize)]
struct MonomialRepr {
    coeff: String,
    atoms: Vec<AtomRepr>,
}

#[derive(Serialize, Deserialize)]
struct QpRepr {
    degree: usize,
    period: u64,
    coeffs: BTreeMap<String, Vec<MonomialRepr>>,
}

impl QpRepr {
    fn from_qp(qp: &QuasiPolynomial) -> std::result::Result<Self, String> {
        let period = qp
            .period
            .to_u64()
            .ok_or_else(|| "period does not fit in 64 bits".to_string())?;
        let mut coeffs = BTreeMap::new();
        for (m, sp) in &qp.coeffs {
            let mut monomials = Vec::with_capacity(sp.monomials.len());
            for mono in &sp.monomials {
                let atoms = mono
                    .atoms
                    .iter()
                    .map(|a| {
                        Ok(AtomRepr {
                            zeta: a
                                .zeta
                                .to_i64()
                                .ok_or_else(|| "step multiplier does not fit in 64 bits")?,
                            q: a.q
                                .to_u64()
                                .ok_or_else(|| "step period does not fit in 64 bits")?,
                            exp: a.exp,
                        })
                    })
                    .collect::<std::result::Result<Vec<_>, &str>>()
                    .map_err(|e| e.to_string())?;
                monomials.push(MonomialRepr {
                    coeff: format_rat(&mono.coeff),
                    atoms,
                });
            }
            coeffs.insert(m.to_string(), monomials);
        }
        Ok(QpRepr {
            degree: qp.degree,
            period,
            coeffs,
        })
    }

    fn into_qp(self) -> std::result::Result<QuasiPolynomial, String> {
        let mut coeffs = BTreeMap::new();
        for (key, monomials) in self.coeffs {
            let m: usize = key
                .parse()
                .map_err(|_| format!("coefficient key {key:?} is not an index"))?;
            if m > self.degree {
                return Err(format!("coefficient index {m} exceeds degree {}", self.degree));
            }
            let mut list = Vec::with_capacity(monomials.len());
            for mono in monomials {
                let coeff = parse_rat(&mono.coeff).map_err(|e| e.to_string())?;
                let mut atoms = Vec::with_capacity(mono.atoms.len());
                for a in mono.atoms {
                    if a.q == 0 {
                        return Err("step period must be positive".to_string());
                    }
                    if a.zeta == 0 {
                        return Err("step multiplier must be nonzero".to_string());
                    }
                    if a.exp == 0 {
                        return Err("step exponent must be positive".to_string());
                    }
                    atoms.push(StepAtom {
                        zeta: Int::from(a.zeta),
                        q: Int::from(a.q),
                        exp: a.exp,
                    });
                }
                list.push(StepMonomial { coeff, atoms });
            }
            let sp = StepPolynomial::normalize(list);
            if !sp.monomials.is_empty() {
                coeffs.insert(m, sp);
            }
        }
        let period = QuasiPolynomial::period_of(&coeffs);
        if period != Int::from(self.period) {
            return Err(format!(
                "declared period {} does not match the atoms (expected {period})",
                self.period
            ));
        }
        Ok(QuasiPolynomial {
            degree: self.degree,
            period,
            coeffs,
        })
    }
}

impl Serialize for QuasiPolynomial {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        QpRepr::from_qp(self)
            .map_err(serde::ser::Error::custom)?
            .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for QuasiPolynomial {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        QpRepr::deserialize(deserializer)?
            .into_qp()
            .map_err(serde::de::Error::custom)
    }
}

// ---------------------------------------------------------------------------
// The dilation pipeline
// ---------------------------------------------------------------------------

/// All length-`parts` vectors of nonnegative integers summing to `total`.
fn compositions(total: usize, parts: usize) -> Vec<Vec<usize>> {
    if parts == 0 {
        return if total == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    for first in 0..=total {
        for mut rest in compositions(total - first, parts - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Coefficients of (a + εc)^n as a series in ε, truncated at ε^trunc.
fn lin_pow(a: &Rat, c: &Rat, n: usize, trunc: usize) -> Vec<Rat> {
    let mut out = vec![Rat::zero(); trunc + 1];
    for (j, slot) in out.iter_mut().enumerate().take(n + 1) {
        *slot = Rat::from_integer(binomial(n, j)) * rat_pow(a, n - j) * rat_pow(c, j);
    }
    out
}

/// A deformation direction η such that no edge of any term pairs to zero
/// with both ℓ and η. Walks the moment curve (1, u, u², …) for u = 1, 2, …;
/// each nonzero edge kills at most dim-1 candidate values, so the walk is
/// short.
fn dilation_probe(sym: &SymbolicGenFun, ell: &[Rat]) -> Result<RatVec> {
    let d = sym.dim;
    let edges: Vec<&RatVec> = sym.terms.iter().flat_map(|(_, t)| t.w.iter()).collect();
    let budget = d * (edges.len() + 1) + 2;
    for step in 1..=budget {
        let u = Rat::from_integer(Int::from(step as i64));
        let mut probe = Vec::with_capacity(d);
        let mut cur = Rat::one();
        for _ in 0..d {
            probe.push(cur.clone());
            cur *= &u;
        }
        let ok = edges
            .iter()
            .all(|w| !dot(ell, w).is_zero() || !dot(&probe, w).is_zero());
        if ok {
            return Ok(probe);
        }
    }
    Err(Error::Internal(
        "no usable deformation direction within budget".into(),
    ))
}

/// Quasi-polynomial in t > 0 equal to the sliced sum of ⟨ell,x⟩^weight over
/// the dilated polytope t·p, slicing along the subspace spanned by the
/// columns of `l_basis`.
///
/// Each vertex term contributes Bernoulli-polynomial factors evaluated at
/// step functions of t together with an ε-deformed rational function of the
/// edge pairings; the poles in ε cancel across vertices and the ε-constant
/// parts assemble the coefficients. The cancellation is asserted with the
/// rigorous step-polynomial zero test rather than assumed.
pub fn ehrhart_qp(
    p: &Polytope,
    l_basis: &RatMat,
    ell: &[Rat],
    weight: usize,
) -> Result<QuasiPolynomial> {
    let d = p.dim();
    if ell.len() != d {
        return Err(Error::Dimension(format!(
            "weight form has {} entries, ambient dimension is {d}",
            ell.len()
        )));
    }
    let sym = polytope_symbolic(p, l_basis)?;
    let total = d + weight;
    let bern = bernoulli_table(total);
    let probe = dilation_probe(&sym, ell)?;

    // acc[m][k] multiplies t^m·ε^{-k}; only k = 0 survives the final sum.
    let mut acc = vec![vec![StepPolynomial::zero(); d + 1]; total + 1];
    for (s, term) in &sym.terms {
        let q_s = smallest_dilation(s);
        // Bernoulli polynomials evaluated at the step argument of each
        // discrete generator: bern_at[i][n] = B_n({-⟨η_i,s⟩·t}).
        let mut bern_at: Vec<Vec<StepPolynomial>> = Vec::with_capacity(term.k0);
        for eta in &term.eta {
            let z_rat = dot_ir(eta, s) * Rat::from_integer(q_s.clone());
            if !z_rat.is_integer() {
                return Err(Error::Integrality(format!(
                    "pairing {} of a dual generator with its vertex is not a multiple of 1/{q_s}",
                    format_rat(&(&z_rat / Rat::from_integer(q_s.clone())))
                )));
            }
            let (zeta, q) = frac_reduce(&z_rat.to_integer(), &q_s);
            let beta = if zeta.is_zero() {
                StepPolynomial::zero()
            } else {
                StepPolynomial::fractional(Rat::new(Int::one(), q.clone()), zeta, q)
            };
            let mut pows = Vec::with_capacity(total + 1);
            pows.push(StepPolynomial::constant(Rat::one()));
            for j in 1..=total {
                pows.push(pows[j - 1].mul(&beta));
            }
            bern_at.push(
                bern.iter()
                    .map(|poly| {
                        let mut out = StepPolynomial::zero();
                        for (k, c) in poly.iter().enumerate() {
                            if !c.is_zero() {
                                out = out.add(&pows[k].scale(c));
                            }
                        }
                        out
                    })
                    .collect(),
            );
        }

        // ε-linear pairings a + εc of ℓ+εη with the generators and vertex.
        let pairs: Vec<(Rat, Rat)> = term.w.iter().map(|w| (dot(ell, w), dot(&probe, w))).collect();
        let vanish = pairs.iter().filter(|(a, _)| a.is_zero()).count();
        let mut den = vec![Rat::one()];
        for (a, c) in &pairs {
            if a.is_zero() {
                // the ε factor is pulled out and counted by `vanish`
                den = den.iter().map(|x| x * c).collect();
            } else {
                den = series_mul(&den, &[a.clone(), c.clone()], vanish);
            }
        }
        let recip = series_recip(&den, vanish)?;
        let s_pair = (dot(ell, s), dot(&probe, s));
        let mut base = Rat::from_integer(term.alpha.clone());
        if term.k0 % 2 == 1 {
            base = -base;
        }

        for m in 0..=total {
            for combo in compositions(total - m, term.k0) {
                let mut num = lin_pow(&s_pair.0, &s_pair.1, m, vanish);
                for (i, &n_i) in combo.iter().enumerate() {
                    if n_i > 0 {
                        num = series_mul(&num, &lin_pow(&pairs[i].0, &pairs[i].1, n_i, vanish), vanish);
                    }
                }
                let lau = series_mul(&num, &recip, vanish);
                if lau.iter().all(|x| x.is_zero()) {
                    continue;
                }
                let mut steps =
                    StepPolynomial::constant(&base / Rat::from_integer(factorial(m)));
                for (i, &n_i) in combo.iter().enumerate() {
                    steps = steps.mul(&bern_at[i][n_i]);
                    if n_i > 1 {
                        steps = steps.scale(&Rat::new(Int::one(), factorial(n_i)));
                    }
                }
                for (j, c) in lau.iter().enumerate() {
                    if !c.is_zero() {
                        acc[m][vanish - j] = acc[m][vanish - j].add(&steps.scale(c));
                    }
                }
            }
        }
    }

    for (m, row) in acc.iter().enumerate() {
        for (k, sp) in row.iter().enumerate().skip(1) {
            if !sp.is_zero() {
                return Err(Error::Internal(format!(
                    "deformation pole ε^-{k} of the t^{m} coefficient did not cancel"
                )));
            }
        }
    }

    let scale = Rat::from_integer(factorial(weight));
    let mut coeffs = BTreeMap::new();
    for (m, row) in acc.into_iter().enumerate() {
        let sp = row.into_iter().next().unwrap().scale(&scale);
        if !sp.monomials.is_empty() && !sp.is_zero() {
            coeffs.insert(m, sp);
        }
    }
    let period = QuasiPolynomial::period_of(&coeffs);
    Ok(QuasiPolynomial {
        degree: total,
        period,
        coeffs,
    })
}

//! Tail-symmetric orbitals and the backflow determinant.
//!
//! An orbital `φ(x; y_2, …, y_N)` is a polynomial in one "own" particle and
//! `N-1` tail particles, invariant under permutations of the tail. Row `i` of
//! the backflow matrix evaluates every orbital with particle `i` as the own
//! particle and the remaining particles, in increasing order, as the tail.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::combinat::DegreeProfile;
use crate::error::{Error, Result};
use crate::polyalg::{Exponent, Field, Polynomial, Scalar, COORDS};

/// Largest particle count accepted by the determinant expansion.
pub const MAX_DET_PARTICLES: usize = 8;

/// Exponent triple of a monomial in the three coordinates of one particle.
pub type Monomial3 = [u16; COORDS];

/// Three-variable monomials of degree `d`, `x^d` first.
pub fn monomials_of_degree(d: u32) -> Vec<Monomial3> {
    let d = d as u16;
    let mut out = Vec::with_capacity(((d as usize + 1) * (d as usize + 2)) / 2);
    for a in (0..=d).rev() {
        for b in (0..=d - a).rev() {
            out.push([a, b, d - a - b]);
        }
    }
    out
}

fn monomial_degree(m: &Monomial3) -> u32 {
    m.iter().map(|&e| e as u32).sum()
}

/// Identifies a basis orbital: own monomial of degree `z` times the orbit sum
/// of the tail monomial multiset (sorted by degree, then content).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct BasisLabel {
    pub z: u32,
    pub own: Monomial3,
    pub tail: Vec<Monomial3>,
}

impl BasisLabel {
    /// Degrees of the tail monomials, nondecreasing.
    pub fn tail_degrees(&self) -> Vec<u32> {
        self.tail.iter().map(monomial_degree).collect()
    }

    pub fn depends_only_on_own(&self) -> bool {
        self.tail.iter().all(|m| monomial_degree(m) == 0)
    }
}

/// One orbit-sum basis orbital; every monomial carries coefficient one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasisElement {
    pub label: BasisLabel,
    monomials: Vec<Exponent>,
}

impl BasisElement {
    pub fn monomials(&self) -> &[Exponent] {
        &self.monomials
    }

    pub fn to_polynomial(&self, n: usize, field: Field) -> Polynomial {
        Polynomial::from_terms(
            n,
            field,
            self.monomials.iter().map(|e| (e.clone(), Scalar::one(field))),
        )
        .expect("basis monomials match particle count")
    }
}

/// Basis of the degree-`d` tail-symmetric polynomials in `N` slots.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TailSymBasis {
    n: usize,
    degree: u32,
    elements: Vec<BasisElement>,
}

impl TailSymBasis {
    pub fn new(n: usize, degree: u32) -> Result<TailSymBasis> {
        if n == 0 {
            return Err(Error::InvalidArgument("tail_sym_basis needs N >= 1".into()));
        }
        let tail_len = n - 1;
        let mut labels = Vec::new();
        for z in 0..=degree {
            let rest = degree - z;
            let tails = tail_multisets(tail_len, rest);
            for own in monomials_of_degree(z) {
                for tail in &tails {
                    labels.push(BasisLabel {
                        z,
                        own,
                        tail: tail.clone(),
                    });
                }
            }
        }
        let rank = monomial_rank_map(degree);
        labels.sort_by_key(|l| {
            (
                l.z,
                l.tail_degrees(),
                rank[&l.own],
                l.tail.iter().map(|m| rank[m]).collect::<Vec<_>>(),
            )
        });
        let elements = labels
            .into_iter()
            .map(|label| {
                let monomials = orbit_monomials(n, &label);
                BasisElement { label, monomials }
            })
            .collect();
        Ok(TailSymBasis {
            n,
            degree,
            elements,
        })
    }

    /// Orbitals that depend on the own particle only (Slater orbitals).
    pub fn own_only(&self) -> TailSymBasis {
        TailSymBasis {
            n: self.n,
            degree: self.degree,
            elements: self
                .elements
                .iter()
                .filter(|e| e.label.depends_only_on_own())
                .cloned()
                .collect(),
        }
    }

    pub fn particles(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[BasisElement] {
        &self.elements
    }

    pub fn polynomials(&self, field: Field) -> Vec<Polynomial> {
        self.elements
            .iter()
            .map(|e| e.to_polynomial(self.n, field))
            .collect()
    }

    /// `Σ_b c_b · b` as an orbital.
    pub fn assemble(&self, coeffs: &[Scalar]) -> Result<PhiFunction> {
        if coeffs.len() != self.elements.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} coefficients for a basis of size {}",
                coeffs.len(),
                self.elements.len()
            )));
        }
        let field = coeffs.first().map_or(Field::Rational, Scalar::field);
        if let Some(bad) = coeffs.iter().find(|c| c.field() != field) {
            return Err(Error::FieldMismatch {
                left: field.to_string(),
                right: bad.field().to_string(),
            });
        }
        let mut poly = Polynomial::zero(self.n, field);
        for (el, c) in self.elements.iter().zip(coeffs) {
            for e in &el.monomials {
                poly.add_term(e.clone(), c);
            }
        }
        Ok(PhiFunction {
            poly,
            degree: self.degree,
        })
    }
}

/// Position of each monomial of degree ≤ `d` in graded order.
fn monomial_rank_map(d: u32) -> HashMap<Monomial3, usize> {
    (0..=d)
        .flat_map(monomials_of_degree)
        .enumerate()
        .map(|(k, m)| (m, k))
        .collect()
}

/// Multisets of `len` monomials with total degree `total`, each listed as a
/// nondecreasing sequence in graded monomial order.
fn tail_multisets(len: usize, total: u32) -> Vec<Vec<Monomial3>> {
    let pool: Vec<Monomial3> = (0..=total).flat_map(monomials_of_degree).collect();
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(len);
    fn rec(
        pool: &[Monomial3],
        start: usize,
        slots: usize,
        remaining: u32,
        current: &mut Vec<Monomial3>,
        out: &mut Vec<Vec<Monomial3>>,
    ) {
        if slots == 0 {
            if remaining == 0 {
                out.push(current.clone());
            }
            return;
        }
        for k in start..pool.len() {
            let deg = monomial_degree(&pool[k]);
            // Pool is sorted by degree, and later slots repeat at least `deg`.
            if deg as u64 * slots as u64 > remaining as u64 {
                break;
            }
            current.push(pool[k]);
            rec(pool, k, slots - 1, remaining - deg, current, out);
            current.pop();
        }
    }
    rec(&pool, 0, len, total, &mut current, &mut out);
    out
}

/// Distinct monomials of `own(slot 1) · Π tail[σ(k)](slot k)` over the tail orbit.
fn orbit_monomials(n: usize, label: &BasisLabel) -> Vec<Exponent> {
    // Index by first occurrence so equal monomials share an index.
    let mut arrangement: Vec<usize> = label
        .tail
        .iter()
        .map(|t| label.tail.iter().position(|m| m == t).unwrap())
        .collect();
    let mut out = Vec::new();
    loop {
        let mut dense = Vec::with_capacity(n * COORDS);
        dense.extend_from_slice(&label.own);
        for &k in &arrangement {
            dense.extend_from_slice(&label.tail[k]);
        }
        out.push(Exponent::from_dense(dense));
        if !next_permutation(&mut arrangement) {
            break;
        }
    }
    out
}

/// Advance to the next lexicographic arrangement; false after the last one.
fn next_permutation(v: &mut [usize]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let Some(i) = (0..v.len() - 1).rev().find(|&i| v[i] < v[i + 1]) else {
        return false;
    };
    let j = (i + 1..v.len()).rev().find(|&j| v[j] > v[i]).expect("pivot exists");
    v.swap(i, j);
    v[i + 1..].reverse();
    true
}

/// A homogeneous tail-symmetric orbital.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PhiFunction {
    poly: Polynomial,
    degree: u32,
}

impl PhiFunction {
    /// Validates tail symmetry and homogeneity of degree `degree`.
    pub fn new(poly: Polynomial, degree: u32) -> Result<PhiFunction> {
        if !poly.is_tail_symmetric() {
            return Err(Error::InvalidArgument(
                "orbital is not symmetric in its tail particles".into(),
            ));
        }
        if poly.terms().any(|(e, _)| e.degree() != degree) {
            return Err(Error::InvalidArgument(format!(
                "orbital is not homogeneous of degree {degree}"
            )));
        }
        Ok(PhiFunction { poly, degree })
    }

    pub fn polynomial(&self) -> &Polynomial {
        &self.poly
    }

    pub fn into_polynomial(self) -> Polynomial {
        self.poly
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }
}

/// Slot-to-particle map for row `i` (0-based): slot 0 ↦ `i`, tail slots ↦ the
/// other particles in increasing order.
pub fn row_slot_map(n: usize, i: usize) -> Vec<usize> {
    std::iter::once(i).chain((0..n).filter(|&k| k != i)).collect()
}

fn check_columns(phis: &[Polynomial]) -> Result<(usize, Field)> {
    let n = phis.len();
    if n == 0 {
        return Err(Error::InvalidArgument("no orbitals given".into()));
    }
    let field = phis[0].field();
    for (j, phi) in phis.iter().enumerate() {
        if phi.particles() != n {
            return Err(Error::ParticleCountMismatch {
                left: n,
                right: phi.particles(),
            });
        }
        if phi.field() != field {
            return Err(Error::FieldMismatch {
                left: field.to_string(),
                right: phi.field().to_string(),
            });
        }
        if !phi.is_tail_symmetric() {
            return Err(Error::NotTailSymmetric { column: j + 1 });
        }
    }
    Ok((n, field))
}

/// Entry `(i, j)` is `φ_j(x_i; x_1, …, x̂_i, …, x_N)`.
pub fn backflow_matrix(phis: &[Polynomial]) -> Result<Vec<Vec<Polynomial>>> {
    let (n, _) = check_columns(phis)?;
    Ok(backflow_matrix_unchecked(phis, n))
}

pub(crate) fn backflow_matrix_unchecked(phis: &[Polynomial], n: usize) -> Vec<Vec<Polynomial>> {
    (0..n)
        .map(|i| {
            let map = row_slot_map(n, i);
            phis.iter().map(|phi| phi.relabel_unchecked(&map)).collect()
        })
        .collect()
}

/// The backflow determinant `det[φ_j(x_i; x̄_{-i})]`.
pub fn backflow_det(phis: &[Polynomial]) -> Result<Polynomial> {
    let (n, field) = check_columns(phis)?;
    if n > MAX_DET_PARTICLES {
        return Err(Error::ResourceGuard(format!(
            "determinant expansion limited to N <= {MAX_DET_PARTICLES}, got {n}"
        )));
    }
    let m = backflow_matrix_unchecked(phis, n);
    Ok(determinant(&m, n, field))
}

/// Determinant of a square polynomial matrix by Laplace expansion along rows,
/// memoized on the set of remaining columns.
pub fn determinant(m: &[Vec<Polynomial>], particles: usize, field: Field) -> Polynomial {
    let size = m.len();
    if size == 0 {
        return Polynomial::constant(particles, Scalar::one(field));
    }
    let mut memo: HashMap<u32, Polynomial> = HashMap::new();
    let all = (1u32 << size) - 1;
    minor_det(m, 0, all, particles, field, &mut memo)
}

fn minor_det(
    m: &[Vec<Polynomial>],
    row: usize,
    cols: u32,
    particles: usize,
    field: Field,
    memo: &mut HashMap<u32, Polynomial>,
) -> Polynomial {
    if row == m.len() {
        return Polynomial::constant(particles, Scalar::one(field));
    }
    if let Some(p) = memo.get(&cols) {
        return p.clone();
    }
    let mut acc = Polynomial::zero(particles, field);
    let one = Scalar::one(field);
    let minus = one.neg();
    let mut position = 0;
    for c in 0..m.len() {
        if cols & (1 << c) == 0 {
            continue;
        }
        let entry = &m[row][c];
        if !entry.is_zero() {
            let sub = minor_det(m, row + 1, cols & !(1 << c), particles, field, memo);
            if !sub.is_zero() {
                let sign = if position % 2 == 0 { &one } else { &minus };
                acc.add_scaled_unchecked(&entry.mul_unchecked(&sub), sign);
            }
        }
        position += 1;
    }
    memo.insert(cols, acc.clone());
    acc
}

/// Classical special cases of the backflow ansatz.
#[derive(Clone, Debug)]
pub enum SpecialAnsatz {
    /// Orbitals depending on the own particle only.
    Slater(Vec<Polynomial>),
    /// `φ_j(x; ȳ) = x[1]^(j-1)` in the first coordinate.
    Vandermonde,
}

pub fn special_ansatz(kind: SpecialAnsatz, n: usize, field: Field) -> Result<Vec<Polynomial>> {
    match kind {
        SpecialAnsatz::Slater(orbitals) => {
            if orbitals.len() != n {
                return Err(Error::DimensionMismatch(format!(
                    "{} Slater orbitals for {n} particles",
                    orbitals.len()
                )));
            }
            for (j, phi) in orbitals.iter().enumerate() {
                if phi.particles() != n {
                    return Err(Error::ParticleCountMismatch {
                        left: n,
                        right: phi.particles(),
                    });
                }
                if !phi.depends_only_on_first() {
                    return Err(Error::InvalidArgument(format!(
                        "Slater orbital {} depends on tail particles",
                        j + 1
                    )));
                }
            }
            Ok(orbitals)
        }
        SpecialAnsatz::Vandermonde => (0..n)
            .map(|j| {
                let e = Exponent::from_triples(n, &[(1, 1, j as u32)])?;
                Ok(Polynomial::monomial(e, Scalar::one(field)))
            })
            .collect(),
    }
}

/// Profile plus one basis per column: the domain of the ansatz map.
#[derive(Clone, Debug)]
pub struct AnsatzConfig {
    n: usize,
    profile: DegreeProfile,
    bases: Vec<TailSymBasis>,
}

impl AnsatzConfig {
    pub fn new(profile: DegreeProfile) -> Result<AnsatzConfig> {
        let n = profile.particles();
        let mut cache: HashMap<u32, TailSymBasis> = HashMap::new();
        let mut bases = Vec::with_capacity(n);
        for &d in profile.degrees() {
            if let std::collections::hash_map::Entry::Vacant(e) = cache.entry(d) {
                e.insert(TailSymBasis::new(n, d)?);
            }
            bases.push(cache[&d].clone());
        }
        Ok(AnsatzConfig { n, profile, bases })
    }

    /// Every column restricted to own-particle orbitals.
    pub fn slater(profile: DegreeProfile) -> Result<AnsatzConfig> {
        let full = AnsatzConfig::new(profile)?;
        Ok(AnsatzConfig {
            bases: full.bases.iter().map(TailSymBasis::own_only).collect(),
            ..full
        })
    }

    pub fn particles(&self) -> usize {
        self.n
    }

    pub fn profile(&self) -> &DegreeProfile {
        &self.profile
    }

    pub fn bases(&self) -> &[TailSymBasis] {
        &self.bases
    }

    /// Total parameter count `P = Σ_j |basis_j|`.
    pub fn param_count(&self) -> usize {
        self.bases.iter().map(TailSymBasis::len).sum()
    }

    /// Orbitals for a flat coefficient vector laid out column by column.
    pub fn orbitals(&self, coeffs: &[Scalar]) -> Result<Vec<Polynomial>> {
        if coeffs.len() != self.param_count() {
            return Err(Error::DimensionMismatch(format!(
                "{} coefficients for {} parameters",
                coeffs.len(),
                self.param_count()
            )));
        }
        let mut offset = 0;
        self.bases
            .iter()
            .map(|b| {
                let slice = &coeffs[offset..offset + b.len()];
                offset += b.len();
                let field = slice
                    .first()
                    .or(coeffs.first())
                    .map_or(Field::Rational, Scalar::field);
                if slice.is_empty() {
                    Ok(Polynomial::zero(self.n, field))
                } else {
                    b.assemble(slice).map(PhiFunction::into_polynomial)
                }
            })
            .collect()
    }
}

/// Ansatz description file: `{"n": N, "profile": [..], "columns": [{"coeffs": [..]}]}`.
///
/// Coefficients follow the canonical basis order of [`TailSymBasis`] and may
/// be JSON integers or strings such as `"-3/4"`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnsatzSpec {
    pub n: usize,
    pub profile: Vec<u32>,
    pub columns: Vec<ColumnSpec>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ColumnSpec {
    pub coeffs: Vec<serde_json::Value>,
}

impl AnsatzSpec {
    pub fn from_json_str(text: &str) -> Result<AnsatzSpec> {
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("ansatz spec: {e}")))
    }

    /// Rational orbitals described by the file.
    pub fn orbitals(&self) -> Result<Vec<Polynomial>> {
        if self.profile.len() != self.n || self.columns.len() != self.n {
            return Err(Error::DimensionMismatch(format!(
                "n = {} but {} profile entries and {} columns",
                self.n,
                self.profile.len(),
                self.columns.len()
            )));
        }
        let config = AnsatzConfig::new(DegreeProfile::new(self.profile.clone())?)?;
        config
            .bases()
            .iter()
            .zip(&self.columns)
            .enumerate()
            .map(|(j, (basis, col))| {
                let coeffs = col
                    .coeffs
                    .iter()
                    .map(json_scalar)
                    .collect::<Result<Vec<_>>>()?;
                if coeffs.len() != basis.len() {
                    return Err(Error::DimensionMismatch(format!(
                        "column {} has {} coefficients, basis has {}",
                        j + 1,
                        coeffs.len(),
                        basis.len()
                    )));
                }
                if coeffs.is_empty() {
                    return Ok(Polynomial::zero(self.n, Field::Rational));
                }
                Ok(basis.assemble(&coeffs)?.into_polynomial())
            })
            .collect()
    }

    pub fn evaluate(&self) -> Result<Polynomial> {
        backflow_det(&self.orbitals()?)
    }
}

fn json_scalar(v: &serde_json::Value) -> Result<Scalar> {
    let s = match v {
        serde_json::Value::String(s) => s.clone(),
        serde_json::Value::Number(n) => n.to_string(),
        other => return Err(Error::Parse(format!("coefficient {other} is not a number"))),
    };
    let c = Scalar::parse(&s)?;
    if c.field() != Field::Rational {
        return Err(Error::Parse(format!("ansatz coefficients must be rational, got {s}")));
    }
    Ok(c)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(n: usize, i: usize, a: usize) -> Polynomial {
        Polynomial::variable(n, Field::Rational, i, a).unwrap()
    }

    #[test]
    fn monomial_lists() {
        assert_eq!(monomials_of_degree(0), vec![[0, 0, 0]]);
        assert_eq!(monomials_of_degree(1), vec![[1, 0, 0], [0, 1, 0], [0, 0, 1]]);
        assert_eq!(monomials_of_degree(2).len(), 6);
    }

    #[test]
    fn next_permutation_distinct_arrangements() {
        let mut v = vec![0, 0, 2];
        let mut seen = vec![v.clone()];
        while next_permutation(&mut v) {
            seen.push(v.clone());
        }
        assert_eq!(seen, vec![vec![0, 0, 2], vec![0, 2, 0], vec![2, 0, 0]]);
    }

    #[test]
    fn two_particle_linear_basis() {
        let b = TailSymBasis::new(2, 1).unwrap();
        assert_eq!(b.len(), 6);
        let polys = b.polynomials(Field::Rational);
        for a in 1..=3 {
            assert!(polys.contains(&x(2, 1, a)));
            assert!(polys.contains(&x(2, 2, a)));
        }
    }

    #[test]
    fn vandermonde_column_order() {
        let b = TailSymBasis::new(2, 1).unwrap();
        assert_eq!(b.polynomials(Field::Rational)[3], x(2, 1, 1));
    }

    #[test]
    fn unsymmetric_column_named() {
        let good = Polynomial::constant(3, Scalar::one(Field::Rational));
        let bad = x(3, 2, 1);
        let err = backflow_det(&[good.clone(), bad, good]).unwrap_err();
        assert_eq!(err, Error::NotTailSymmetric { column: 2 });
    }

    #[test]
    fn phi_function_validation() {
        assert!(PhiFunction::new(x(3, 2, 1), 1).is_err());
        let sym = x(3, 2, 1).add(&x(3, 3, 1)).unwrap();
        assert!(PhiFunction::new(sym.clone(), 2).is_err());
        assert_eq!(PhiFunction::new(sym, 1).unwrap().degree(), 1);
    }

    #[test]
    fn slater_rejects_tail_dependence() {
        let r = special_ansatz(SpecialAnsatz::Slater(vec![x(2, 1, 1), x(2, 2, 1)]), 2, Field::Rational);
        assert!(r.is_err());
    }
}

use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use super::exponent::{Exponent, COORDS};
use super::perm::ParticlePermutation;
use super::scalar::{Field, Scalar};
use crate::error::{Error, Result};

/// Total degree of a polynomial. The zero polynomial has no finite degree.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Degree {
    NegInfinity,
    Finite(u32),
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Degree::NegInfinity => write!(f, "-inf"),
            Degree::Finite(d) => write!(f, "{d}"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SymmetryKind {
    /// `σ·p = sgn(σ)·p` for every particle permutation.
    AntisymmetricAll,
    /// Invariant under permutations of particles `2..N`.
    SymmetricTail,
}

/// Homogeneous decomposition of a polynomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Grading {
    pub degree: Degree,
    pub components: BTreeMap<u32, Polynomial>,
    /// Distinct per-particle multidegrees occurring in the support.
    pub multidegree_support: BTreeSet<Vec<u32>>,
}

/// Sparse multivariate polynomial in `x[i][a]`, `i ∈ 1..=N`, `a ∈ 1..=3`.
///
/// Terms are kept in graded-lex order and never hold a zero coefficient.
#[derive(Clone, PartialEq, Eq)]
pub struct Polynomial {
    n: usize,
    field: Field,
    terms: BTreeMap<Exponent, Scalar>,
}

impl Polynomial {
    pub fn zero(n: usize, field: Field) -> Self {
        Polynomial {
            n,
            field,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(n: usize, c: Scalar) -> Self {
        Polynomial::monomial(Exponent::one(n), c)
    }

    pub fn monomial(exp: Exponent, c: Scalar) -> Self {
        let mut p = Polynomial::zero(exp.particles(), c.field());
        if !c.is_zero() {
            p.terms.insert(exp, c);
        }
        p
    }

    /// The variable `x[i][a]` (1-based) with coefficient one.
    pub fn variable(n: usize, field: Field, i: usize, a: usize) -> Result<Self> {
        Ok(Polynomial::monomial(
            Exponent::variable(n, i, a)?,
            Scalar::one(field),
        ))
    }

    /// Build from `(exponent, coefficient)` pairs, merging duplicates.
    pub fn from_terms(
        n: usize,
        field: Field,
        terms: impl IntoIterator<Item = (Exponent, Scalar)>,
    ) -> Result<Self> {
        let mut p = Polynomial::zero(n, field);
        for (e, c) in terms {
            if e.particles() != n {
                return Err(Error::ParticleCountMismatch {
                    left: n,
                    right: e.particles(),
                });
            }
            if c.field() != field {
                return Err(field_mismatch(field, c.field()));
            }
            p.add_term(e, &c);
        }
        Ok(p)
    }

    pub fn particles(&self) -> usize {
        self.n
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Exponent, &Scalar)> + ExactSizeIterator {
        self.terms.iter()
    }

    pub fn coefficient(&self, e: &Exponent) -> Scalar {
        self.terms
            .get(e)
            .cloned()
            .unwrap_or_else(|| Scalar::zero(self.field))
    }

    pub fn degree(&self) -> Degree {
        self.terms
            .keys()
            .next_back()
            .map_or(Degree::NegInfinity, |e| Degree::Finite(e.degree()))
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degrees = self.terms.keys().map(Exponent::degree);
        match degrees.next() {
            None => true,
            Some(d) => degrees.all(|e| e == d),
        }
    }

    /// Adds `c·x^e` in place, pruning cancellation.
    pub(crate) fn add_term(&mut self, e: Exponent, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            Entry::Vacant(v) => {
                v.insert(c.clone());
            }
            Entry::Occupied(mut o) => {
                let s = o.get().add(c);
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    /// `self += c·other` without compatibility checks.
    pub(crate) fn add_scaled_unchecked(&mut self, other: &Polynomial, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        let unit = c.is_one();
        for (e, v) in &other.terms {
            if unit {
                self.add_term(e.clone(), v);
            } else {
                self.add_term(e.clone(), &v.mul(c));
            }
        }
    }

    fn check_compatible(&self, other: &Polynomial) -> Result<()> {
        if self.n != other.n {
            return Err(Error::ParticleCountMismatch {
                left: self.n,
                right: other.n,
            });
        }
        if self.field != other.field {
            return Err(field_mismatch(self.field, other.field));
        }
        Ok(())
    }

    pub fn add(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        out.add_scaled_unchecked(other, &Scalar::one(self.field));
        Ok(out)
    }

    pub fn sub(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        out.add_scaled_unchecked(other, &Scalar::one(self.field).neg());
        Ok(out)
    }

    pub fn mul(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_compatible(other)?;
        Ok(self.mul_unchecked(other))
    }

    pub(crate) fn mul_unchecked(&self, other: &Polynomial) -> Polynomial {
        let mut acc: HashMap<Exponent, Scalar> =
            HashMap::with_capacity(self.terms.len() * other.terms.len());
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let prod = ca.mul(cb);
                match acc.entry(ea.mul(eb)) {
                    std::collections::hash_map::Entry::Vacant(v) => {
                        v.insert(prod);
                    }
                    std::collections::hash_map::Entry::Occupied(mut o) => {
                        let s = o.get().add(&prod);
                        *o.get_mut() = s;
                    }
                }
            }
        }
        Polynomial {
            n: self.n,
            field: self.field,
            terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }

    pub fn arith(&self, other: &Polynomial, op: ArithOp) -> Result<Polynomial> {
        match op {
            ArithOp::Add => self.add(other),
            ArithOp::Sub => self.sub(other),
            ArithOp::Mul => self.mul(other),
        }
    }

    pub fn scale(&self, c: &Scalar) -> Result<Polynomial> {
        if c.field() != self.field {
            return Err(field_mismatch(self.field, c.field()));
        }
        let mut out = Polynomial::zero(self.n, self.field);
        out.add_scaled_unchecked(self, c);
        Ok(out)
    }

    pub fn neg(&self) -> Polynomial {
        Polynomial {
            n: self.n,
            field: self.field,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c.neg())).collect(),
        }
    }

    /// Value at `point[i][a]` (0-based particle rows), by summing terms.
    pub fn evaluate(&self, point: &[[Scalar; COORDS]]) -> Result<Scalar> {
        if point.len() != self.n {
            return Err(Error::DimensionMismatch(format!(
                "point has {} particles, polynomial has {}",
                point.len(),
                self.n
            )));
        }
        if let Some(bad) = point.iter().flatten().find(|s| s.field() != self.field) {
            return Err(field_mismatch(self.field, bad.field()));
        }
        let mut total = Scalar::zero(self.field);
        for (e, c) in &self.terms {
            let mut term = c.clone();
            for (i, a, k) in e.iter_sparse() {
                term = term.mul(&point[i - 1][a - 1].pow(k));
            }
            total = total.add(&term);
        }
        Ok(total)
    }

    /// `σ·p`: the exponents of particle `k` move to particle `σ(k)`.
    pub fn permute_particles(&self, sigma: &ParticlePermutation) -> Result<Polynomial> {
        if sigma.len() != self.n {
            return Err(Error::DimensionMismatch(format!(
                "permutation on {} labels applied to {} particles",
                sigma.len(),
                self.n
            )));
        }
        Ok(self.relabel_unchecked(sigma.images()))
    }

    pub(crate) fn relabel_unchecked(&self, target: &[usize]) -> Polynomial {
        Polynomial {
            n: self.n,
            field: self.field,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.relabel(target), c.clone()))
                .collect(),
        }
    }

    /// Signed averaging projector `(1/N!) Σ sgn(σ) σ·p`.
    pub fn antisymmetrize(&self) -> Result<Polynomial> {
        if !self.field.factorial_invertible(self.n) {
            return Err(Error::Domain(format!(
                "{}! is not invertible in {}",
                self.n, self.field
            )));
        }
        let mut out = Polynomial::zero(self.n, self.field);
        let mut count: i64 = 0;
        for sigma in ParticlePermutation::all(self.n) {
            let image = self.relabel_unchecked(sigma.images());
            let sign = Scalar::from_i64(self.field, sigma.sign() as i64);
            out.add_scaled_unchecked(&image, &sign);
            count += 1;
        }
        let inv = Scalar::from_i64(self.field, count).inv()?;
        out.scale(&inv)
    }

    /// Checks the symmetry on adjacent transpositions, which generate the group.
    pub fn symmetry_check(&self, kind: SymmetryKind) -> bool {
        match kind {
            SymmetryKind::AntisymmetricAll => (1..self.n).all(|i| {
                let t = ParticlePermutation::transposition(self.n, i, i + 1).expect("in range");
                self.relabel_unchecked(t.images()) == self.neg()
            }),
            SymmetryKind::SymmetricTail => (2..self.n).all(|i| {
                let t = ParticlePermutation::transposition(self.n, i, i + 1).expect("in range");
                self.relabel_unchecked(t.images()) == *self
            }),
        }
    }

    pub fn is_antisymmetric(&self) -> bool {
        self.symmetry_check(SymmetryKind::AntisymmetricAll)
    }

    pub fn is_tail_symmetric(&self) -> bool {
        self.symmetry_check(SymmetryKind::SymmetricTail)
    }

    /// Whether only the variables of particle 1 occur.
    pub fn depends_only_on_first(&self) -> bool {
        self.terms
            .keys()
            .all(|e| (1..self.n).all(|i| e.particle_degree(i) == 0))
    }

    pub fn grading(&self) -> Grading {
        let mut components: BTreeMap<u32, Polynomial> = BTreeMap::new();
        let mut multidegree_support = BTreeSet::new();
        for (e, c) in &self.terms {
            components
                .entry(e.degree())
                .or_insert_with(|| Polynomial::zero(self.n, self.field))
                .terms
                .insert(e.clone(), c.clone());
            multidegree_support.insert(e.multidegree());
        }
        Grading {
            degree: self.degree(),
            components,
            multidegree_support,
        }
    }

    /// Map coefficients into another field (e.g. reduce rationals mod p).
    pub fn to_field(&self, field: Field) -> Result<Polynomial> {
        let mut out = Polynomial::zero(self.n, field);
        for (e, c) in &self.terms {
            let mapped = match c {
                Scalar::Rational(q) => Scalar::from_rational(field, q)?,
                Scalar::Mod { .. } if c.field() == field => c.clone(),
                Scalar::Mod { .. } => return Err(field_mismatch(field, c.field())),
            };
            out.add_term(e.clone(), &mapped);
        }
        Ok(out)
    }

    pub fn to_json(&self) -> PolynomialJson {
        PolynomialJson {
            n: self.n,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| TermJson {
                    exp: e.iter_sparse().map(|(i, a, k)| [i, a, k as usize]).collect(),
                    coef: c.to_string(),
                })
                .collect(),
        }
    }

    /// Parse the JSON exchange form. The field is read from the coefficients;
    /// a polynomial without terms is taken over `Q`.
    pub fn from_json(json: &PolynomialJson) -> Result<Polynomial> {
        let mut field = None;
        let mut terms = Vec::with_capacity(json.terms.len());
        for t in &json.terms {
            let c = Scalar::parse(&t.coef)?;
            match field {
                None => field = Some(c.field()),
                Some(f) if f != c.field() => return Err(field_mismatch(f, c.field())),
                _ => {}
            }
            let triples = t
                .exp
                .iter()
                .map(|&[i, a, k]| {
                    u32::try_from(k)
                        .map(|k| (i, a, k))
                        .map_err(|_| Error::Parse(format!("exponent {k} too large")))
                })
                .collect::<Result<Vec<_>>>()?;
            terms.push((Exponent::from_triples(json.n, &triples)?, c));
        }
        Polynomial::from_terms(json.n, field.unwrap_or(Field::Rational), terms)
    }
}

fn field_mismatch(a: Field, b: Field) -> Error {
    Error::FieldMismatch {
        left: a.to_string(),
        right: b.to_string(),
    }
}

/// JSON exchange form: `{"n": N, "terms": [{"exp": [[i,a,e],…], "coef": "…"}]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolynomialJson {
    pub n: usize,
    pub terms: Vec<TermJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub exp: Vec<[usize; 3]>,
    pub coef: String,
}

/// Plain text: `c * x[i][a]^e * …` terms joined by `" + "`.
impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (e, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            if e.degree() == 0 {
                write!(f, "{c}")?;
            } else {
                write!(f, "{c} * {e}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polynomial[n={}, {}]({})", self.n, self.field, self)
    }
}

//! Generic rank of the ansatz map and of its secant joins over `F_p`.
//!
//! The backflow determinant is linear in each column orbital, so the partial
//! derivative along basis element `b` of column `j` is the determinant with
//! column `j` replaced by `b`. Expanding that determinant along column `j`
//! gives `Σ_i C_ij · b(x_i; x̄_{-i})` with cofactors `C_ij` of the matrix at
//! the sampled point. Ranks at random points lower-bound the generic rank and
//! equal it with high probability.

mod echelon;

use std::collections::HashMap;
use std::time::Instant;

use num_bigint::BigUint;
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;
use serde::Serialize;

pub use echelon::{rank_mod_p, Echelon};

use crate::ansatz::{backflow_det, backflow_matrix_unchecked, determinant, row_slot_map, AnsatzConfig};
use crate::combinat::{enumerate_profiles, DegreeProfile};
use crate::dimension::{
    big_to_u64, determinant_count_bound, min_degree, ser_big, source_dim_exact, target_dim_exact,
};
use crate::error::{Error, Result};
use crate::polyalg::{Exponent, Field, Polynomial, Scalar, DEFAULT_PRIME};

/// Default number of random points per rank estimate.
pub const DEFAULT_TRIALS: usize = 3;

/// Default cap on the row count (target dimension) of a rank computation.
pub const DEFAULT_ROW_LIMIT: u64 = 250_000;

/// Environment variable overriding [`DEFAULT_ROW_LIMIT`].
pub const ROW_LIMIT_ENV: &str = "BACKFLOW_ROW_LIMIT";

/// Row limit from the environment, falling back to the default.
pub fn row_limit_from_env() -> u64 {
    std::env::var(ROW_LIMIT_ENV)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_ROW_LIMIT)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ProbeOptions {
    pub trials: usize,
    pub prime: u64,
    pub seed: u64,
}

impl Default for ProbeOptions {
    fn default() -> Self {
        ProbeOptions {
            trials: DEFAULT_TRIALS,
            prime: DEFAULT_PRIME,
            seed: 0,
        }
    }
}

impl ProbeOptions {
    fn field(&self) -> Result<Field> {
        if self.trials == 0 {
            return Err(Error::InvalidArgument("trials must be at least 1".into()));
        }
        Field::prime(self.prime)
    }
}

/// A sampled point of the parameter space.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CoeffVector {
    pub prime: u64,
    pub seed: u64,
    pub values: Vec<u64>,
}

impl CoeffVector {
    pub fn scalars(&self) -> Vec<Scalar> {
        self.values
            .iter()
            .map(|&v| Scalar::from_residue(v, self.prime))
            .collect()
    }
}

/// Uniform residues from a ChaCha20 stream keyed by `seed`.
pub fn random_point(config: &AnsatzConfig, field: Field, seed: u64) -> Result<CoeffVector> {
    let Field::Prime(prime) = field else {
        return Err(Error::InvalidArgument(
            "random points are sampled in prime-field mode only".into(),
        ));
    };
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let values = (0..config.param_count())
        .map(|_| rng.gen_range(0..prime))
        .collect();
    Ok(CoeffVector { prime, seed, values })
}

/// Per-trial seeds derived from a base seed.
fn trial_seeds(seed: u64, count: usize) -> Vec<u64> {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    (0..count).map(|_| rng.next_u64()).collect()
}

/// Which rows to keep when expanding Jacobian columns.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RowSet {
    /// Every monomial in the support.
    Full,
    /// One representative per orbit of an antisymmetric polynomial: the
    /// monomials whose particle exponent triples strictly decrease. Because
    /// every column is antisymmetric, this projection preserves rank.
    SortedRepresentatives,
}

/// Assigns dense ids to monomials as they are encountered.
#[derive(Clone, Debug, Default)]
pub struct RowIndex {
    ids: HashMap<Exponent, u32>,
    rows: Vec<Exponent>,
}

impl RowIndex {
    pub fn id(&mut self, e: &Exponent) -> u32 {
        if let Some(&k) = self.ids.get(e) {
            return k;
        }
        let k = self.rows.len() as u32;
        self.ids.insert(e.clone(), k);
        self.rows.push(e.clone());
        k
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }
}

/// Derivative columns of the ansatz map at one point.
struct PointColumns {
    columns: Vec<Vec<(u32, u64)>>,
    labels: Vec<(usize, usize)>,
}

fn expand_columns(
    config: &AnsatzConfig,
    point: &CoeffVector,
    rows: RowSet,
    index: &mut RowIndex,
) -> Result<PointColumns> {
    if point.values.len() != config.param_count() {
        return Err(Error::DimensionMismatch(format!(
            "point has {} coordinates, configuration has {} parameters",
            point.values.len(),
            config.param_count()
        )));
    }
    let n = config.particles();
    let field = Field::prime(point.prime)?;
    let p = point.prime;
    let orbitals = config.orbitals(&point.scalars())?;
    let matrix = backflow_matrix_unchecked(&orbitals, n);
    let slot_maps: Vec<Vec<usize>> = (0..n).map(|i| row_slot_map(n, i)).collect();

    let mut columns = Vec::with_capacity(config.param_count());
    let mut labels = Vec::with_capacity(config.param_count());
    for (j, basis) in config.bases().iter().enumerate() {
        let cofactors: Vec<Polynomial> = (0..n).map(|i| cofactor(&matrix, i, j, n, field)).collect();
        let cofactor_terms: Vec<Vec<(Exponent, u64)>> = cofactors
            .iter()
            .map(|c| {
                c.terms()
                    .map(|(e, s)| (e.clone(), s.residue().expect("prime field")))
                    .collect()
            })
            .collect();
        for (b, element) in basis.elements().iter().enumerate() {
            let mut acc: HashMap<Exponent, u64> = HashMap::new();
            for (i, terms) in cofactor_terms.iter().enumerate() {
                if terms.is_empty() {
                    continue;
                }
                for mono in element.monomials() {
                    let placed = mono.relabel(&slot_maps[i]);
                    for (e, c) in terms {
                        let prod = placed.mul(e);
                        if rows == RowSet::SortedRepresentatives && !prod.is_particle_sorted() {
                            continue;
                        }
                        let slot = acc.entry(prod).or_insert(0);
                        *slot = (*slot + c) % p;
                    }
                }
            }
            let mut col: Vec<(u32, u64)> = acc
                .into_iter()
                .filter(|(_, v)| *v != 0)
                .map(|(e, v)| (index.id(&e), v))
                .collect();
            col.sort_unstable();
            columns.push(col);
            labels.push((j, b));
        }
    }
    Ok(PointColumns { columns, labels })
}

/// Signed cofactor `(-1)^(i+j) det(M without row i, column j)`.
fn cofactor(m: &[Vec<Polynomial>], i: usize, j: usize, n: usize, field: Field) -> Polynomial {
    let minor: Vec<Vec<Polynomial>> = m
        .iter()
        .enumerate()
        .filter(|(r, _)| *r != i)
        .map(|(_, row)| {
            row.iter()
                .enumerate()
                .filter(|(c, _)| *c != j)
                .map(|(_, e)| e.clone())
                .collect()
        })
        .collect();
    let d = determinant(&minor, n, field);
    if (i + j).is_multiple_of(2) {
        d
    } else {
        d.neg()
    }
}

/// Sparse Jacobian of the ansatz map at a point, over `F_p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JacobianMatrix {
    pub particles: usize,
    pub prime: u64,
    /// Monomials indexing the rows, in graded order.
    pub rows: Vec<Exponent>,
    /// Column-major entries `(row, value)`, sorted by row.
    pub columns: Vec<Vec<(u32, u64)>>,
    /// `(column j, basis element b)` for each column, 0-based.
    pub labels: Vec<(usize, usize)>,
}

impl JacobianMatrix {
    pub fn nonzeros(&self) -> usize {
        self.columns.iter().map(Vec::len).sum()
    }

    pub fn rank(&self) -> usize {
        rank_mod_p(&self.columns, self.prime)
    }

    /// Column `k` as a polynomial over `F_p`.
    pub fn column_polynomial(&self, k: usize) -> Polynomial {
        Polynomial::from_terms(
            self.particles,
            Field::Prime(self.prime),
            self.columns[k]
                .iter()
                .map(|&(r, v)| (self.rows[r as usize].clone(), Scalar::from_residue(v, self.prime))),
        )
        .expect("rows share particle count")
    }
}

/// Jacobian with every support monomial as a row.
pub fn jacobian(config: &AnsatzConfig, point: &CoeffVector) -> Result<JacobianMatrix> {
    jacobian_rows(config, point, RowSet::Full)
}

pub fn jacobian_rows(config: &AnsatzConfig, point: &CoeffVector, rows: RowSet) -> Result<JacobianMatrix> {
    let mut index = RowIndex::default();
    let pc = expand_columns(config, point, rows, &mut index)?;
    // Renumber rows into graded order.
    let mut order: Vec<u32> = (0..index.rows.len() as u32).collect();
    order.sort_by(|&a, &b| index.rows[a as usize].cmp(&index.rows[b as usize]));
    let mut new_id = vec![0u32; order.len()];
    for (k, &old) in order.iter().enumerate() {
        new_id[old as usize] = k as u32;
    }
    let rows_sorted = order.iter().map(|&k| index.rows[k as usize].clone()).collect();
    let columns = pc
        .columns
        .into_iter()
        .map(|col| {
            let mut c: Vec<(u32, u64)> = col.into_iter().map(|(r, v)| (new_id[r as usize], v)).collect();
            c.sort_unstable();
            c
        })
        .collect();
    Ok(JacobianMatrix {
        particles: config.particles(),
        prime: point.prime,
        rows: rows_sorted,
        columns,
        labels: pc.labels,
    })
}

/// The determinant with column `j` replaced by basis element `b` and every
/// other column taken at the point. Independent of the cofactor expansion.
pub fn one_hot_determinant(config: &AnsatzConfig, point: &CoeffVector, j: usize, b: usize) -> Result<Polynomial> {
    let field = Field::prime(point.prime)?;
    let mut orbitals = config.orbitals(&point.scalars())?;
    let basis = config
        .bases()
        .get(j)
        .ok_or_else(|| Error::InvalidArgument(format!("no column {j}")))?;
    let element = basis
        .elements()
        .get(b)
        .ok_or_else(|| Error::InvalidArgument(format!("no basis element {b} in column {j}")))?;
    orbitals[j] = element.to_polynomial(config.particles(), field);
    backflow_det(&orbitals)
}

/// The ansatz map itself at a point.
pub fn ansatz_value(config: &AnsatzConfig, point: &CoeffVector) -> Result<Polynomial> {
    backflow_det(&config.orbitals(&point.scalars())?)
}

fn check_row_limit(n: usize, degree: u32, limit: u64) -> Result<BigUint> {
    let target = target_dim_exact(n, degree);
    if big_to_u64(&target) > limit {
        return Err(Error::ResourceGuard(format!(
            "target dimension {target} exceeds the row limit {limit} (set {ROW_LIMIT_ENV} to raise it)"
        )));
    }
    Ok(target)
}

/// Secant ranks `r = 1..=r_max` from stacked Jacobians at independent points.
///
/// Within a trial the points are added one at a time, so the sequence is
/// nondecreasing; across trials the maximum is taken per `r`. Stops early once
/// the rank reaches `cap`.
fn secant_sequence(config: &AnsatzConfig, r_max: usize, opts: &ProbeOptions, cap: usize) -> Result<SecantRun> {
    let field = opts.field()?;
    let mut best = vec![0usize; r_max];
    let mut rows_seen = 0;
    let mut nonzeros = 0;
    for trial_seed in trial_seeds(opts.seed, opts.trials) {
        let point_seeds = trial_seeds(trial_seed, r_max);
        let mut index = RowIndex::default();
        let mut echelon = Echelon::new(opts.prime);
        let mut reached = 0;
        for (k, s) in point_seeds.into_iter().enumerate() {
            let point = random_point(config, field, s)?;
            let pc = expand_columns(config, &point, RowSet::SortedRepresentatives, &mut index)?;
            nonzeros = nonzeros.max(pc.columns.iter().map(Vec::len).sum::<usize>());
            for col in &pc.columns {
                if echelon.rank() >= cap {
                    break;
                }
                echelon.insert(col);
            }
            best[k] = best[k].max(echelon.rank());
            reached = k + 1;
            if echelon.rank() >= cap {
                break;
            }
        }
        // Saturated prefixes stay saturated for larger r.
        for b in &mut best[reached..r_max] {
            *b = (*b).max(echelon.rank());
        }
        rows_seen = rows_seen.max(index.len());
        if best[r_max - 1] >= cap && best[0] >= cap.min(config.param_count()) {
            break;
        }
    }
    Ok(SecantRun {
        ranks: best,
        rows: rows_seen,
        nonzeros,
    })
}

struct SecantRun {
    ranks: Vec<usize>,
    rows: usize,
    nonzeros: usize,
}

/// Maximum Jacobian rank over `opts.trials` random points.
pub fn generic_rank(config: &AnsatzConfig, opts: &ProbeOptions) -> Result<usize> {
    let target = big_to_u64(&target_dim_exact(config.particles(), config.profile().total()));
    let cap = (target as usize).min(config.param_count());
    Ok(secant_sequence(config, 1, opts, cap)?.ranks[0])
}

/// Rank of `r` stacked Jacobians: the tangent-span dimension of the
/// `r`-secant of the image cone.
pub fn secant_rank(config: &AnsatzConfig, r: usize, opts: &ProbeOptions) -> Result<usize> {
    if r == 0 {
        return Err(Error::InvalidArgument("r must be at least 1".into()));
    }
    Ok(*secant_ranks(config, r, opts)?.last().expect("r >= 1"))
}

/// Secant ranks for `r = 1..=r_max`.
pub fn secant_ranks(config: &AnsatzConfig, r_max: usize, opts: &ProbeOptions) -> Result<Vec<usize>> {
    if r_max == 0 {
        return Err(Error::InvalidArgument("r must be at least 1".into()));
    }
    let target = big_to_u64(&target_dim_exact(config.particles(), config.profile().total()));
    Ok(secant_sequence(config, r_max, opts, target as usize)?.ranks)
}

/// `P - generic_rank`: dimension of a generic fiber of the parametrization.
pub fn fiber_dimension(config: &AnsatzConfig, opts: &ProbeOptions) -> Result<usize> {
    Ok(config.param_count() - generic_rank(config, opts)?)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    SurjectiveEvidence,
    NotSurjective,
    Inconclusive,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Strength {
    /// Pure parameter counting: `r·P + r < target` for every profile.
    Proof,
    /// Observed ranks at sampled points.
    Evidence,
    None,
}

/// Rank data for one degree profile.
#[derive(Clone, Debug, Serialize)]
pub struct ProfileRank {
    pub profile: DegreeProfile,
    pub parameter_count: usize,
    pub generic_rank: usize,
    pub fiber_dimension: usize,
    /// Column-rescaling directions `λ_j` with `Π λ_j = 1`; present in every
    /// fiber over a nonzero value.
    pub scaling_directions: usize,
    /// Secant ranks for `r = 1, 2, …`.
    pub secant_ranks: Vec<usize>,
    /// Column-count bound `r·rank` for each `r`.
    pub cone_secant_bounds: Vec<usize>,
    /// Affine dimension count `r·rank + r` for each `r`.
    pub affine_secant_bounds: Vec<usize>,
    /// First `r` at which the secant rank reaches the target dimension.
    pub saturated_at: Option<usize>,
    /// First `r` whose rank equals that of `r - 1` below the target.
    pub stalled_at: Option<usize>,
    /// `r·P + r < target`: the profile's `r`-fold sums are not dense.
    pub counting_certificate: bool,
    pub rows: usize,
    pub nonzeros: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct Timings {
    pub wall_clock_ms: u128,
}

/// Rank probe outcome for one `(N, D)`.
#[derive(Clone, Debug, Serialize)]
pub struct RankReport {
    pub n: usize,
    pub degree: u32,
    pub r: usize,
    pub prime: u64,
    pub seed: u64,
    pub trials: usize,
    #[serde(serialize_with = "ser_big")]
    pub target_dim_exact: BigUint,
    #[serde(serialize_with = "ser_big")]
    pub determinant_count_bound: BigUint,
    /// `C(D + 3N - 1, 3N - 1)`: all degree-`D` monomials in `3N` variables.
    #[serde(serialize_with = "ser_big")]
    pub monomial_row_bound: BigUint,
    /// Largest exact parameter count over all profiles of `(N, D)`.
    #[serde(serialize_with = "ser_big")]
    pub max_profile_source_dim: BigUint,
    /// `r·max_profile_source_dim + r < target_dim_exact`.
    pub counting_certificate: bool,
    /// Whether every degree profile of `(N, D)` was probed.
    pub all_profiles: bool,
    pub profiles: Vec<ProfileRank>,
    pub verdict: Verdict,
    pub strength: Strength,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timings: Option<Timings>,
}

/// Which profiles to probe.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ProfileSelection {
    /// Profile with the largest exact parameter count.
    Best,
    All,
    Given(DegreeProfile),
}

#[derive(Clone, Debug)]
pub struct VerdictOptions {
    pub probe: ProbeOptions,
    pub profiles: ProfileSelection,
    pub row_limit: u64,
    pub timings: bool,
}

impl Default for VerdictOptions {
    fn default() -> Self {
        VerdictOptions {
            probe: ProbeOptions::default(),
            profiles: ProfileSelection::All,
            row_limit: DEFAULT_ROW_LIMIT,
            timings: false,
        }
    }
}

/// Probe one profile for secant ranks up to `r`.
pub fn probe_profile(config: &AnsatzConfig, r: usize, target: usize, opts: &ProbeOptions) -> Result<ProfileRank> {
    let run = secant_sequence(config, r, opts, target)?;
    let p = config.param_count();
    let n = config.particles();
    let generic = run.ranks[0];
    let saturated_at = run.ranks.iter().position(|&k| k >= target).map(|k| k + 1);
    let stalled_at = (1..run.ranks.len())
        .find(|&k| run.ranks[k] == run.ranks[k - 1] && run.ranks[k] < target)
        .map(|k| k + 1);
    Ok(ProfileRank {
        profile: config.profile().clone(),
        parameter_count: p,
        generic_rank: generic,
        fiber_dimension: p - generic,
        scaling_directions: if generic > 0 { n - 1 } else { 0 },
        cone_secant_bounds: (1..=r).map(|k| k * generic).collect(),
        affine_secant_bounds: (1..=r).map(|k| k * generic + k).collect(),
        secant_ranks: run.ranks,
        saturated_at,
        stalled_at,
        counting_certificate: (r as u128) * (p as u128) + (r as u128) < target as u128,
        rows: run.rows,
        nonzeros: run.nonzeros,
    })
}

/// Secant-rank verdict on whether sums of `r` backflow determinants of
/// degree `D` fill the `(N, D)` target space.
pub fn surjectivity_verdict(n: usize, degree: u32, r: usize, opts: &VerdictOptions) -> Result<RankReport> {
    let started = Instant::now();
    if n < 2 {
        return Err(Error::InvalidArgument("verdict needs N >= 2".into()));
    }
    if r == 0 {
        return Err(Error::InvalidArgument("r must be at least 1".into()));
    }
    if (degree as u64) < min_degree(n) {
        return Err(Error::InvalidArgument(format!(
            "D = {degree} is below the minimal degree {} for N = {n}",
            min_degree(n)
        )));
    }
    opts.probe.field()?;
    let target_big = check_row_limit(n, degree, opts.row_limit)?;
    let target = big_to_u64(&target_big) as usize;

    let profiles: Vec<DegreeProfile> = match &opts.profiles {
        ProfileSelection::All => enumerate_profiles(n, degree).collect(),
        ProfileSelection::Best => vec![crate::dimension::best_profile(n, degree).0],
        ProfileSelection::Given(p) => {
            if p.particles() != n || p.total() != degree {
                return Err(Error::InvalidArgument(format!(
                    "profile {p} does not match N = {n}, D = {degree}"
                )));
            }
            vec![p.clone()]
        }
    };
    let all_profiles = matches!(opts.profiles, ProfileSelection::All);

    let mut probed = Vec::with_capacity(profiles.len());
    for profile in profiles {
        // Parameter count is cheap; refuse before building huge bases.
        let p = source_dim_exact(&profile);
        if big_to_u64(&p) > opts.row_limit.saturating_mul(64) {
            return Err(Error::ResourceGuard(format!(
                "profile {profile} has {p} parameters, beyond the probing limit"
            )));
        }
        let config = AnsatzConfig::new(profile)?;
        probed.push(probe_profile(&config, r, target, &opts.probe)?);
    }

    let (_, max_source) = crate::dimension::best_profile(n, degree);
    let certificate = BigUint::from(r) * &max_source + BigUint::from(r) < target_big;
    let reaches = probed.iter().any(|pr| pr.secant_ranks[r - 1] >= target);
    let (verdict, strength) = if certificate {
        (Verdict::NotSurjective, Strength::Proof)
    } else if reaches {
        (Verdict::SurjectiveEvidence, Strength::Evidence)
    } else if all_profiles {
        (Verdict::NotSurjective, Strength::Evidence)
    } else {
        (Verdict::Inconclusive, Strength::None)
    };

    Ok(RankReport {
        n,
        degree,
        r,
        prime: opts.probe.prime,
        seed: opts.probe.seed,
        trials: opts.probe.trials,
        target_dim_exact: target_big,
        monomial_row_bound: crate::combinat::binomial(degree as u64 + 3 * n as u64 - 1, 3 * n as u64 - 1),
        max_profile_source_dim: max_source,
        counting_certificate: certificate,
        determinant_count_bound: determinant_count_bound(n)?,
        all_profiles,
        profiles: probed,
        verdict,
        strength,
        timings: opts.timings.then(|| Timings {
            wall_clock_ms: started.elapsed().as_millis(),
        }),
    })
}

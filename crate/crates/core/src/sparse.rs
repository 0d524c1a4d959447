//! Sparse supports: curves with prescribed zero coefficients, sparse types
//! of point groups, sparsest interpolants and minimal residual tables.

use std::collections::{BTreeMap, BTreeSet};
use std::ops::RangeInclusive;

use itertools::Itertools;
use num_traits::Zero;
use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::exactnum::rat::{fmt_rat, lcm_denoms};
use crate::exactnum::{nullspace_integer, Int, Ival, Matrix, Rat};
use crate::gram::{
    build_gram, eval_matrix, min_eigen, unit_sphere_min, Direction, Point, EIGEN_BITS,
};
use crate::polybasis::{graded_support, Monomial, Poly, Support};

/// Sorted, duplicate-free coefficient indices.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct ZeroSet(Vec<usize>);

impl ZeroSet {
    pub fn new(mut idx: Vec<usize>) -> Self {
        idx.sort_unstable();
        idx.dedup();
        ZeroSet(idx)
    }

    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.0.binary_search(&i).is_ok()
    }

    pub fn is_subset(&self, o: &ZeroSet) -> bool {
        self.0.iter().all(|&i| o.contains(i))
    }

    /// Indices in 0..p outside the set.
    pub fn complement(&self, p: usize) -> Vec<usize> {
        (0..p).filter(|&i| !self.contains(i)).collect()
    }
}

/// Integer curves over `support` through every point with the coefficients
/// in `zeros` pinned to zero.
pub fn solve_with_zeros(
    points: &[Point<Rat>],
    support: &Support,
    zeros: &ZeroSet,
) -> Result<Vec<Poly<Int>>> {
    let p = support.len();
    if let Some(&bad) = zeros.indices().iter().find(|&&i| i >= p) {
        return Err(Error::Invalid(format!("zero index {bad} out of range")));
    }
    let free = zeros.complement(p);
    if free.is_empty() {
        return Ok(Vec::new());
    }
    let m = eval_matrix(points, support).select_cols(&free);
    nullspace_integer(&m)
        .into_iter()
        .map(|v| {
            let mut full = vec![Int::zero(); p];
            for (k, &j) in free.iter().enumerate() {
                full[j] = v[k].clone();
            }
            let poly = Poly::new(support.clone(), full)?;
            let fr = poly.to_rat();
            if points.iter().any(|(x, y)| !fr.eval(x, y).is_zero()) {
                return Err(Error::Invalid("pinned solution fails to vanish".into()));
            }
            Ok(poly)
        })
        .collect()
}

/// Indices i with 10000 p c_i^2 < sum_j c_j^2, i.e. |c_i| < |c| / (100 sqrt p).
pub fn psi_set(coeffs: &[Rat]) -> Result<ZeroSet> {
    let norm2: Rat = coeffs.iter().map(|c| c * c).sum();
    if norm2.is_zero() {
        return Err(Error::AllZero);
    }
    let k = Rat::from_integer(Int::from(10000 * coeffs.len()));
    Ok(ZeroSet(
        (0..coeffs.len())
            .filter(|&i| &k * &coeffs[i] * &coeffs[i] < norm2)
            .collect(),
    ))
}

/// Support signature of a sparse curve, coefficients discarded.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SparseType {
    pub monomials: Vec<Monomial>,
}

impl SparseType {
    pub fn new(mut monomials: Vec<Monomial>) -> Self {
        monomials.sort();
        monomials.dedup();
        SparseType { monomials }
    }

    /// Every term shares a factor x or a factor y.
    pub fn is_reducible(&self) -> bool {
        self.monomials.iter().all(|m| m.kx > 0) || self.monomials.iter().all(|m| m.ky > 0)
    }

    pub fn render(&self, vars: (&str, &str)) -> String {
        self.monomials.iter().map(|m| m.render(vars)).join(" + ")
    }
}

#[derive(Clone, Debug)]
pub struct ScanReport {
    pub support: Support,
    pub all_zero_sets: usize,
    /// Zero sets J whose solution has further small coefficients (J strictly inside psi(J)).
    pub s_prime: Vec<ZeroSet>,
    /// Distinct psi(J) for J in `s_prime`.
    pub s_double_prime: Vec<ZeroSet>,
    /// `s_double_prime` keyed by the number of zeros.
    pub partition: BTreeMap<usize, Vec<ZeroSet>>,
    /// Signatures of all `s_double_prime` members, reducible ones included.
    pub chi_all: Vec<SparseType>,
    /// Zero sets whose pinned system had a solution space of dimension > 1.
    pub multi_dimensional: usize,
}

impl ScanReport {
    /// Irreducible signatures: the sparse type of the group.
    pub fn chi(&self) -> BTreeSet<SparseType> {
        self.chi_all
            .iter()
            .filter(|t| !t.is_reducible())
            .cloned()
            .collect()
    }

    pub fn to_json(&self, vars: (&str, &str)) -> Value {
        json!({
            "all_zero_sets": self.all_zero_sets,
            "s_prime": self.s_prime,
            "s_double_prime": self.s_double_prime,
            "partition": self.partition.iter().map(|(k, v)| (k.to_string(), json!(v))).collect::<serde_json::Map<_, _>>(),
            "chi": self.chi().iter().map(|t| t.render(vars)).collect::<Vec<_>>(),
            "chi_reducible": self.chi_all.iter().filter(|t| t.is_reducible()).map(|t| t.render(vars)).collect::<Vec<_>>(),
            "multi_dimensional": self.multi_dimensional,
        })
    }
}

/// Indices of the degree-d block of the graded support.
pub fn top_block(d: u32) -> Vec<usize> {
    let s = graded_support(d);
    (0..s.len())
        .filter(|&i| s.monomials()[i].degree() == d)
        .collect()
}

/// Enumerates zero sets of size p - N - 1 avoiding supersets of `forbidden`,
/// solves each pinned system and collects the psi images.
pub fn sparse_type_scan(group: &[Point<Rat>], d: u32, forbidden: &[usize]) -> Result<ScanReport> {
    let support = graded_support(d);
    let p = support.len();
    for (i, a) in group.iter().enumerate() {
        if group[..i].contains(a) {
            return Err(Error::Invalid(format!("group point {i} is repeated")));
        }
    }
    let k = p
        .checked_sub(group.len() + 1)
        .filter(|&k| k > 0)
        .ok_or_else(|| {
            Error::Invalid(format!(
                "{} points leave no zero set for {p} coefficients",
                group.len()
            ))
        })?;
    let forbidden = ZeroSet::new(forbidden.to_vec());
    let sets: Vec<ZeroSet> = (0..p)
        .combinations(k)
        .map(ZeroSet)
        .filter(|j| forbidden.is_empty() || !forbidden.is_subset(j))
        .collect();
    let results: Vec<(ZeroSet, Vec<ZeroSet>, bool)> = sets
        .par_iter()
        .map(|j| {
            let sols = solve_with_zeros(group, &support, j)?;
            let psis = sols
                .iter()
                .map(|s| psi_set(s.to_rat().coeffs()))
                .collect::<Result<Vec<_>>>()?;
            Ok((j.clone(), psis, sols.len() > 1))
        })
        .collect::<Result<_>>()?;
    let mut s_prime = Vec::new();
    let mut images = BTreeSet::new();
    let mut multi = 0;
    for (j, psis, is_multi) in results {
        multi += usize::from(is_multi);
        let grows: Vec<ZeroSet> = psis
            .into_iter()
            .filter(|s| j.is_subset(s) && s.len() > j.len())
            .collect();
        if !grows.is_empty() {
            s_prime.push(j);
            images.extend(grows);
        }
    }
    let s_double_prime: Vec<ZeroSet> = images.into_iter().collect();
    let mut partition: BTreeMap<usize, Vec<ZeroSet>> = BTreeMap::new();
    for s in &s_double_prime {
        partition.entry(s.len()).or_default().push(s.clone());
    }
    let chi_all: BTreeSet<SparseType> = s_double_prime
        .iter()
        .map(|s| {
            SparseType::new(
                s.complement(p)
                    .into_iter()
                    .map(|i| support.monomials()[i])
                    .collect(),
            )
        })
        .collect();
    Ok(ScanReport {
        support,
        all_zero_sets: sets.len(),
        s_prime,
        s_double_prime,
        partition,
        chi_all: chi_all.into_iter().collect(),
        multi_dimensional: multi,
    })
}

/// Sparse types shared by every group.
pub fn chi_common(reports: &[ScanReport]) -> BTreeSet<SparseType> {
    let mut it = reports.iter().map(ScanReport::chi);
    let first = it.next().unwrap_or_default();
    it.fold(first, |acc, c| acc.intersection(&c).cloned().collect())
}

#[derive(Clone, Debug, Serialize)]
pub struct MonteCarloReport {
    pub trials: usize,
    pub seed: u64,
    pub consistent: bool,
    /// Sorted 0-based point indices of groups whose sparse type differs.
    pub divergent_groups: Vec<Vec<usize>>,
}

/// Random 4-subset for a trial: ChaCha8 keyed by `seed`, stream = trial.
pub fn trial_quadruple(n: usize, seed: u64, trial: u64) -> Vec<usize> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    let mut idx = sample(&mut rng, n, 4).into_vec();
    idx.sort_unstable();
    idx
}

/// Compares the sparse cubic type of random 4-point groups with `reference`.
pub fn random_quadruples(
    points: &[Point<Rat>],
    trials: usize,
    seed: u64,
    reference: &BTreeSet<SparseType>,
) -> Result<MonteCarloReport> {
    if points.len() < 4 {
        return Err(Error::Invalid("need at least 4 points".into()));
    }
    let forbidden = top_block(3);
    let outcomes: Vec<Option<Vec<usize>>> = (0..trials as u64)
        .into_par_iter()
        .map(|t| {
            let idx = trial_quadruple(points.len(), seed, t);
            let group: Vec<Point<Rat>> = idx.iter().map(|&i| points[i].clone()).collect();
            let chi = sparse_type_scan(&group, 3, &forbidden)?.chi();
            Ok((&chi != reference).then_some(idx))
        })
        .collect::<Result<_>>()?;
    let divergent_groups: Vec<Vec<usize>> = outcomes.into_iter().flatten().collect();
    Ok(MonteCarloReport {
        trials,
        seed,
        consistent: divergent_groups.is_empty(),
        divergent_groups,
    })
}

#[derive(Clone, Debug)]
pub struct SparsestCurve {
    pub zero_set: ZeroSet,
    pub curve: Poly<Int>,
}

/// Largest support size accepted by the subset enumerations.
pub const SUBSET_GATE: usize = 15;
/// Subsets isolated per round; fixed so results do not depend on the pool size.
const EXACT_BATCH: usize = 8;

/// All maximal zero sets admitting a nonzero curve, by descending size.
pub fn sparsest_curves(points: &[Point<Rat>], d: u32) -> Result<Vec<SparsestCurve>> {
    let support = graded_support(d);
    let p = support.len();
    if p > SUBSET_GATE {
        return Err(Error::Gate(format!(
            "support of size {p} exceeds {SUBSET_GATE}"
        )));
    }
    let m = eval_matrix(points, &support);
    for k in (0..p).rev() {
        let found: Vec<SparsestCurve> = (0..p)
            .combinations(k)
            .collect::<Vec<_>>()
            .into_par_iter()
            .map(|zeros| {
                let zs = ZeroSet(zeros);
                let free = zs.complement(p);
                // Cheap rank test before the full solve.
                if nullspace_integer(&m.select_cols(&free)).is_empty() {
                    return Ok(Vec::new());
                }
                Ok(solve_with_zeros(points, &support, &zs)?
                    .into_iter()
                    .map(|curve| SparsestCurve {
                        zero_set: zs.clone(),
                        curve,
                    })
                    .collect())
            })
            .collect::<Result<Vec<Vec<_>>>>()?
            .into_iter()
            .flatten()
            .collect();
        if !found.is_empty() {
            return Ok(found);
        }
    }
    Ok(Vec::new())
}

#[derive(Clone, Debug)]
pub struct ResidualEntry {
    pub q: usize,
    /// Minimum over q-subsets of the smallest eigenvalue (unit 2-norm).
    pub r: Ival,
    pub best: Vec<usize>,
    pub direction: Direction,
    /// Minimum of lambda / max_j v_j^2 (eigenvector scaled to max |c_j| = 1).
    pub r_maxnorm: Option<Ival>,
    pub maxnorm_best: Vec<usize>,
    /// Lower bound on every other subset's 2-norm value.
    pub runner_up: Option<Rat>,
    /// Subsets whose eigenvalue was isolated exactly.
    pub exact_checks: usize,
    /// Direct recomputation of the winner from the points overlaps `r`.
    pub verified: bool,
}

impl ResidualEntry {
    pub fn to_json(&self, basis: &Support, vars: (&str, &str)) -> Value {
        let names = |idx: &[usize]| {
            idx.iter()
                .map(|&i| basis.monomials()[i].render(vars))
                .collect::<Vec<_>>()
        };
        let coeffs = self.direction.maxnorm_coeffs().map(|c| {
            c.iter()
                .map(|i| [fmt_rat(i.lo()), fmt_rat(i.hi())])
                .collect::<Vec<_>>()
        });
        json!({
            "q": self.q,
            "r": [fmt_rat(self.r.lo()), fmt_rat(self.r.hi())],
            "r_approx": self.r.to_f64_pair().1,
            "support": names(&self.best),
            "coeffs": coeffs,
            "r_maxnorm": self.r_maxnorm.as_ref().map(|r| [fmt_rat(r.lo()), fmt_rat(r.hi())]),
            "r_maxnorm_approx": self.r_maxnorm.as_ref().map(|r| r.to_f64_pair().1),
            "maxnorm_support": names(&self.maxnorm_best),
            "runner_up_lower": self.runner_up.as_ref().map(fmt_rat),
            "exact_checks": self.exact_checks,
            "verified": self.verified,
        })
    }
}

#[derive(Clone, Debug)]
pub struct ResidualTable {
    pub basis: Support,
    pub entries: BTreeMap<usize, ResidualEntry>,
}

/// det of every principal submatrix of size <= max_size, indexed by bit
/// mask. Fraction-free elimination along ascending index chains; each
/// diagonal entry after eliminating S is det of the S + {j} minor. Masks
/// never reached have a singular prefix and, the matrix being PSD, det 0.
fn principal_minors(g: &[Vec<Int>], max_size: usize) -> Vec<Int> {
    let n = g.len();
    let mut out: Vec<Option<Int>> = vec![None; 1 << n];
    out[0] = Some(Int::from(1));
    fn dfs(
        a: &[Vec<Int>],
        prev: &Int,
        mask: usize,
        start: usize,
        depth: usize,
        max: usize,
        out: &mut Vec<Option<Int>>,
    ) {
        if depth == max {
            return;
        }
        let n = a.len();
        for j in start..n {
            let piv = a[j][j].clone();
            let m = mask | (1 << j);
            if piv.is_zero() {
                out[m] = Some(Int::zero());
                continue;
            }
            out[m] = Some(piv.clone());
            if depth + 1 == max || j + 1 == n {
                continue;
            }
            let mut b = a.to_vec();
            for r in j + 1..n {
                for c in j + 1..n {
                    b[r][c] = (&piv * &a[r][c] - &a[r][j] * &a[j][c]) / prev;
                }
            }
            dfs(&b, &piv, m, j + 1, depth + 1, max, out);
        }
    }
    dfs(g, &Int::from(1), 0, 0, 0, max_size, &mut out);
    out.into_iter()
        .map(|v| v.unwrap_or_else(Int::zero))
        .collect()
}

fn mask_of(idx: &[usize]) -> usize {
    idx.iter().fold(0, |m, &i| m | (1 << i))
}

struct Checked {
    subset: Vec<usize>,
    lambda: Ival,
    direction: Direction,
}

/// Minimal unit-sphere residual over all q-subsets of `basis` for each q.
///
/// Candidates are screened exactly: for a PSD matrix,
/// det(G_S) / sum_i det(G_{S-i}) <= lambda_min(G_S) <= q times that value,
/// so only subsets whose lower bound does not exceed the best upper bound
/// need an exact eigenvalue isolation.
pub fn min_residual_table(
    points: &[Point<Rat>],
    basis: &Support,
    q_range: RangeInclusive<usize>,
) -> Result<ResidualTable> {
    let p = basis.len();
    if p > SUBSET_GATE {
        return Err(Error::Gate(format!(
            "basis of size {p} exceeds {SUBSET_GATE}"
        )));
    }
    let (q_lo, q_hi) = (*q_range.start().max(&1), (*q_range.end()).min(p));
    let g = build_gram(points, basis)?.aggregate;
    let (gi, scale) = integer_gram(&g);
    let minors = principal_minors(&gi, q_hi);
    let scale_r = Rat::from_integer(scale);
    let mut entries = BTreeMap::new();
    for q in q_lo..=q_hi {
        let subsets: Vec<Vec<usize>> = (0..p).combinations(q).collect();
        // Harmonic lower bound h_S on lambda_min(G_S).
        let mut bounds: Vec<(Rat, usize)> = subsets
            .par_iter()
            .enumerate()
            .map(|(k, s)| {
                let m = mask_of(s);
                let num = &minors[m];
                let den: Int = s.iter().map(|&i| &minors[m & !(1 << i)]).sum();
                let h = if num.is_zero() {
                    Rat::zero()
                } else {
                    Rat::new(num.clone(), den) / &scale_r
                };
                (h, k)
            })
            .collect();
        bounds.sort();
        let qr = Rat::from_integer(Int::from(q));
        let mut upper = &bounds[0].0 * &qr;
        let mut checked: Vec<Checked> = Vec::new();
        // Exact isolation in batches of increasing lower bound.
        let mut pos = 0;
        while pos < bounds.len() && bounds[pos].0 <= upper {
            let end = (pos + EXACT_BATCH).min(bounds.len());
            let batch: Vec<usize> = (pos..end)
                .filter(|&i| bounds[i].0 <= upper)
                .map(|i| bounds[i].1)
                .collect();
            let done: Vec<Checked> = batch
                .par_iter()
                .map(|&k| {
                    let e = min_eigen(&g.principal(&subsets[k]), EIGEN_BITS)?;
                    Ok(Checked {
                        subset: subsets[k].clone(),
                        lambda: e.lambda,
                        direction: e.direction,
                    })
                })
                .collect::<Result<_>>()?;
            for c in &done {
                if c.lambda.hi() < &upper {
                    upper = c.lambda.hi().clone();
                }
            }
            checked.extend(done);
            pos = end;
        }
        let best = checked
            .iter()
            .min_by(|a, b| {
                a.lambda
                    .hi()
                    .cmp(b.lambda.hi())
                    .then(a.lambda.lo().cmp(b.lambda.lo()))
            })
            .ok_or_else(|| Error::Invalid("no candidate subset".into()))?;
        let runner_up = checked
            .iter()
            .filter(|c| c.subset != best.subset)
            .map(|c| c.lambda.lo().clone())
            .chain(
                bounds
                    .iter()
                    .filter(|(_, k)| !checked.iter().any(|c| c.subset == subsets[*k]))
                    .map(|(h, _)| h.clone())
                    .take(1),
            )
            .min();
        // Max-norm scaling: lambda <= r_max(S) <= q lambda, screened the same way.
        let r_max = |c: &Checked| -> Option<Ival> {
            let m = c.direction.max_component_sq()?;
            c.lambda.checked_div(&m)
        };
        let mut max_pool: Vec<(Ival, Vec<usize>)> = checked
            .iter()
            .filter_map(|c| Some((r_max(c)?, c.subset.clone())))
            .collect();
        let mut max_upper = max_pool.iter().map(|(r, _)| r.hi().clone()).min();
        if let Some(mu) = max_upper.clone() {
            let extra: Vec<usize> = bounds
                .iter()
                .take_while(|(h, _)| h <= &mu)
                .map(|(_, k)| *k)
                .filter(|k| !checked.iter().any(|c| c.subset == subsets[*k]))
                .collect();
            let more: Vec<Checked> = extra
                .par_iter()
                .map(|&k| {
                    let e = min_eigen(&g.principal(&subsets[k]), EIGEN_BITS)?;
                    Ok(Checked {
                        subset: subsets[k].clone(),
                        lambda: e.lambda,
                        direction: e.direction,
                    })
                })
                .collect::<Result<_>>()?;
            max_pool.extend(
                more.iter()
                    .filter_map(|c| Some((r_max(c)?, c.subset.clone()))),
            );
            max_upper = max_pool.iter().map(|(r, _)| r.hi().clone()).min();
            checked.extend(more);
        }
        let maxnorm = max_upper.and_then(|mu| max_pool.into_iter().find(|(r, _)| r.hi() == &mu));
        let best = checked
            .iter()
            .min_by(|a, b| {
                a.lambda
                    .hi()
                    .cmp(b.lambda.hi())
                    .then(a.lambda.lo().cmp(b.lambda.lo()))
            })
            .expect("nonempty");
        let direct = unit_sphere_min(points, &basis.subset(&best.subset))?;
        entries.insert(
            q,
            ResidualEntry {
                q,
                r: best.lambda.clone(),
                best: best.subset.clone(),
                direction: best.direction.clone(),
                r_maxnorm: maxnorm.as_ref().map(|m| m.0.clone()),
                maxnorm_best: maxnorm.map(|m| m.1).unwrap_or_default(),
                runner_up,
                exact_checks: checked.len(),
                verified: direct.lambda_min.overlaps(&best.lambda),
            },
        );
    }
    // The minimum over q-subsets can only drop as q grows.
    for (a, b) in entries.values().tuple_windows() {
        if b.r.lo() > a.r.hi() {
            return Err(Error::Invalid(format!(
                "residual increased from q = {} to q = {}",
                a.q, b.q
            )));
        }
    }
    Ok(ResidualTable {
        basis: basis.clone(),
        entries,
    })
}

impl ResidualTable {
    pub fn to_json(&self, vars: (&str, &str)) -> Value {
        json!({
            "basis": self.basis.monomials().iter().map(|m| m.render(vars)).collect::<Vec<_>>(),
            "entries": self.entries.values().map(|e| e.to_json(&self.basis, vars)).collect::<Vec<_>>(),
        })
    }
}

/// Integer matrix L g with L the lcm of all denominators, and L.
fn integer_gram(g: &Matrix<Rat>) -> (Vec<Vec<Int>>, Int) {
    let n = g.rows();
    let scale = lcm_denoms(
        (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .map(|ij| &g[ij]),
    );
    let gi = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| (&g[(i, j)] * Rat::from_integer(scale.clone())).to_integer())
                .collect()
        })
        .collect();
    (gi, scale)
}

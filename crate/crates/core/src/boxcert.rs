//! Degree lower bounds over rectangular neighborhoods.
//!
//! Two engines prove that det M_d stays away from zero for every choice of
//! one point per box: a radius bound from the perturbation expansion of the
//! determinant around the box centers, and recursive interval subdivision.

use num_traits::{One, Signed, Zero};
use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::exactnum::matrix::bareiss_det;
use crate::exactnum::rat::{fmt_rat, lcm_denoms, pow10};
use crate::exactnum::{
    det_exact, det_interval, isolate_real_roots, Int, Ival, Matrix, Rat, UniPoly,
};
use crate::gram::Point;
use crate::polybasis::{graded_support, mono_vector, support_size, Monomial, Support};

/// Closed axis-aligned rectangle.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Box {
    pub x_lo: Rat,
    pub x_hi: Rat,
    pub y_lo: Rat,
    pub y_hi: Rat,
}

impl Box {
    pub fn new(x_lo: Rat, x_hi: Rat, y_lo: Rat, y_hi: Rat) -> Result<Self> {
        if x_lo > x_hi || y_lo > y_hi {
            return Err(Error::Invalid("box with lo > hi".into()));
        }
        Ok(Box {
            x_lo,
            x_hi,
            y_lo,
            y_hi,
        })
    }

    /// Box of half-widths (hx, hy) around a center.
    pub fn around(c: &Point<Rat>, hx: &Rat, hy: &Rat) -> Self {
        Box {
            x_lo: &c.0 - hx,
            x_hi: &c.0 + hx,
            y_lo: &c.1 - hy,
            y_hi: &c.1 + hy,
        }
    }

    pub fn center(&self) -> Point<Rat> {
        let two = Rat::from_integer(2.into());
        (
            (&self.x_lo + &self.x_hi) / &two,
            (&self.y_lo + &self.y_hi) / two,
        )
    }

    /// Largest half-width over both axes.
    pub fn half_width(&self) -> Rat {
        let two = Rat::from_integer(2.into());
        (&self.x_hi - &self.x_lo).max(&self.y_hi - &self.y_lo) / two
    }

    pub fn area(&self) -> Rat {
        (&self.x_hi - &self.x_lo) * (&self.y_hi - &self.y_lo)
    }

    pub fn is_degenerate(&self) -> bool {
        self.x_lo == self.x_hi && self.y_lo == self.y_hi
    }

    pub fn x(&self) -> Ival {
        Ival::new(self.x_lo.clone(), self.x_hi.clone())
    }

    pub fn y(&self) -> Ival {
        Ival::new(self.y_lo.clone(), self.y_hi.clone())
    }

    pub fn contains(&self, p: &Point<Rat>) -> bool {
        self.x().contains(&p.0) && self.y().contains(&p.1)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ExpansionMethod {
    /// Every coefficient of the expansion computed exactly.
    Exact,
    /// Coefficient sums bounded by a permanent of absolute values.
    PermanentBound,
}

#[derive(Clone, Debug)]
pub struct RadiusCertificate {
    pub centers: Vec<Point<Rat>>,
    pub perturbed: Vec<bool>,
    pub degree: u32,
    /// det M_d at the centers.
    pub constant_term: Rat,
    /// C_k, k = 0..: bound on the k-th homogeneous part (C_0 = |det|).
    pub coefficient_sums: Vec<Rat>,
    /// k_d(delta) = |det| - sum_k C_k delta^k.
    pub bound_poly: UniPoly,
    /// Smallest positive root of `bound_poly`.
    pub pd_radius: Option<Ival>,
    pub method: ExpansionMethod,
    /// Nonzero perturbation monomials seen (exact method only).
    pub expansion_terms: usize,
}

impl RadiusCertificate {
    /// Number of Leibniz terms of a p x p determinant.
    pub fn leibniz_terms(&self) -> u128 {
        (1..=self.centers.len() as u128).product()
    }

    /// Highest k with C_k != 0.
    pub fn expansion_degree(&self) -> usize {
        self.coefficient_sums
            .iter()
            .rposition(|c| !c.is_zero())
            .unwrap_or(0)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "degree": self.degree,
            "constant_term": fmt_rat(&self.constant_term),
            "coefficient_sums": self.coefficient_sums.iter().map(fmt_rat).collect::<Vec<_>>(),
            "bound_poly": self.bound_poly.coeffs().iter().map(fmt_rat).collect::<Vec<_>>(),
            "pd_radius": self.pd_radius.as_ref().map(|r| [fmt_rat(r.lo()), fmt_rat(r.hi())]),
            "method": self.method,
        })
    }
}

/// Largest p for which the perturbation expansion is attempted.
pub const EXPANSION_GATE: usize = 10;
/// Above this many coefficient determinants the permanent bound is used.
pub const EXACT_TERM_LIMIT: u64 = 500_000;

fn binom(n: u32, k: u32) -> Int {
    (0..k).fold(Int::one(), |acc, i| {
        acc * Int::from(n - i) / Int::from(i + 1)
    })
}

/// Perturbation monomials u^i v^j that can appear in a column, with the
/// coefficient column of each: C(a,i) C(b,j) x^(a-i) y^(b-j) for row x^a y^b.
fn column_terms(support: &Support, c: &Point<Rat>, perturbed: bool) -> Vec<(u32, Vec<Rat>)> {
    let monos = support.monomials();
    let mut shifts: Vec<Monomial> = Vec::new();
    if perturbed {
        for m in monos {
            for i in 0..=m.kx {
                for j in 0..=m.ky {
                    let s = Monomial::new(i, j);
                    if !shifts.contains(&s) {
                        shifts.push(s);
                    }
                }
            }
        }
        shifts.sort();
    } else {
        shifts.push(Monomial::new(0, 0));
    }
    shifts
        .into_iter()
        .map(|s| {
            let col = monos
                .iter()
                .map(|m| {
                    if s.kx > m.kx || s.ky > m.ky {
                        return Rat::zero();
                    }
                    let k = binom(m.kx, s.kx) * binom(m.ky, s.ky);
                    Rat::from_integer(k) * Monomial::new(m.kx - s.kx, m.ky - s.ky).eval(&c.0, &c.1)
                })
                .collect();
            (s.degree(), col)
        })
        .filter(|(_, col): &(u32, Vec<Rat>)| col.iter().any(|v| !v.is_zero()))
        .collect()
}

/// Integer column and its positive scale: col = ints / scale.
fn clear_column(col: &[Rat]) -> (Vec<Int>, Int) {
    let l = lcm_denoms(col);
    let ints = col
        .iter()
        .map(|v| (v * Rat::from_integer(l.clone())).to_integer())
        .collect();
    (ints, l)
}

struct ColumnChoices {
    terms: Vec<(u32, Vec<Int>)>,
    scale: Int,
}

fn exact_sums(cols: &[ColumnChoices], max_k: usize) -> (Vec<Rat>, usize) {
    let p = cols.len();
    let scale: Int = cols.iter().map(|c| &c.scale).product();
    // Split on the first column's choice for parallelism.
    let partial: Vec<(Vec<Int>, usize)> = (0..cols[0].terms.len())
        .into_par_iter()
        .map(|first| {
            let mut sums = vec![Int::zero(); max_k + 1];
            let mut count = 0usize;
            let mut choice = vec![0usize; p];
            choice[0] = first;
            loop {
                let k: u32 = (0..p).map(|c| cols[c].terms[choice[c]].0).sum();
                let rows: Vec<Vec<Int>> = (0..p)
                    .map(|r| {
                        (0..p)
                            .map(|c| cols[c].terms[choice[c]].1[r].clone())
                            .collect()
                    })
                    .collect();
                let det = bareiss_det(rows);
                if !det.is_zero() {
                    sums[k as usize] += det.abs();
                    count += 1;
                }
                // Odometer over columns 1..p.
                let mut c = p;
                loop {
                    if c == 1 {
                        return (sums, count);
                    }
                    c -= 1;
                    choice[c] += 1;
                    if choice[c] < cols[c].terms.len() {
                        break;
                    }
                    choice[c] = 0;
                }
            }
        })
        .collect();
    let mut sums = vec![Int::zero(); max_k + 1];
    let mut count = 0;
    for (s, n) in partial {
        for (a, b) in sums.iter_mut().zip(s) {
            *a += b;
        }
        count += n;
    }
    (
        sums.into_iter()
            .map(|s| Rat::new(s, scale.clone()))
            .collect(),
        count,
    )
}

/// Permanent of the matrix of polynomials sum_m |coef| t^deg(m): dominates
/// the absolute coefficient sums of every homogeneous part.
fn permanent_sums(cols: &[ColumnChoices], max_k: usize) -> Vec<Rat> {
    let p = cols.len();
    let scale: Int = cols.iter().map(|c| &c.scale).product();
    let entry = |r: usize, c: usize| -> Vec<Int> {
        let mut poly = vec![Int::zero(); max_k + 1];
        for (k, col) in &cols[c].terms {
            poly[*k as usize] += col[r].abs();
        }
        poly
    };
    let mut dp: Vec<Option<Vec<Int>>> = vec![None; 1 << p];
    let mut unit = vec![Int::zero(); max_k + 1];
    unit[0] = Int::one();
    dp[0] = Some(unit);
    for c in 0..p {
        let mut next: Vec<Option<Vec<Int>>> = vec![None; 1 << p];
        for (mask, val) in dp.iter().enumerate() {
            let Some(val) = val else { continue };
            for r in (0..p).filter(|r| mask & (1 << r) == 0) {
                let e = entry(r, c);
                let slot =
                    next[mask | (1 << r)].get_or_insert_with(|| vec![Int::zero(); max_k + 1]);
                for (i, a) in val.iter().enumerate().filter(|(_, a)| !a.is_zero()) {
                    for (j, b) in e.iter().enumerate().filter(|(_, b)| !b.is_zero()) {
                        if i + j <= max_k {
                            slot[i + j] += a * b;
                        }
                    }
                }
            }
        }
        dp = next;
    }
    let full = dp[(1 << p) - 1]
        .take()
        .unwrap_or_else(|| vec![Int::zero(); max_k + 1]);
    full.into_iter()
        .map(|s| Rat::new(s, scale.clone()))
        .collect()
}

/// Default width for the radius root enclosure.
pub fn default_radius_width() -> Rat {
    Rat::new(Int::one(), pow10(12))
}

/// Radius bound for det M_d with every perturbed center moved by at most
/// delta in each coordinate. Unperturbed centers stay fixed.
pub fn delta_bound_poly(
    centers: &[Point<Rat>],
    d: u32,
    perturbed: &[bool],
    width: &Rat,
) -> Result<RadiusCertificate> {
    let support = graded_support(d);
    let p = support.len();
    if centers.len() != p {
        return Err(Error::Dimension(format!(
            "need {p} centers for degree {d}, got {}",
            centers.len()
        )));
    }
    if perturbed.len() != p {
        return Err(Error::Dimension("perturbation mask length".into()));
    }
    if p > EXPANSION_GATE {
        return Err(Error::Gate(format!(
            "expansion needs p <= {EXPANSION_GATE}, got {p}"
        )));
    }
    let cols: Vec<ColumnChoices> = centers
        .iter()
        .zip(perturbed)
        .map(|(c, &pert)| {
            let raw = column_terms(&support, c, pert);
            let all: Vec<Rat> = raw
                .iter()
                .flat_map(|(_, col)| col.iter().cloned())
                .collect();
            let (_, scale) = clear_column(&all);
            let terms = raw
                .into_iter()
                .map(|(k, col)| {
                    (
                        k,
                        col.iter()
                            .map(|v| (v * Rat::from_integer(scale.clone())).to_integer())
                            .collect(),
                    )
                })
                .collect();
            ColumnChoices { terms, scale }
        })
        .collect();
    let max_k: usize = cols
        .iter()
        .map(|c| c.terms.iter().map(|t| t.0).max().unwrap_or(0) as usize)
        .sum();
    let combos: u64 = cols
        .iter()
        .map(|c| c.terms.len() as u64)
        .try_fold(1u64, |a, b| a.checked_mul(b))
        .unwrap_or(u64::MAX);
    let (mut sums, terms, method) = if combos <= EXACT_TERM_LIMIT {
        let (s, n) = exact_sums(&cols, max_k);
        (s, n, ExpansionMethod::Exact)
    } else {
        (
            permanent_sums(&cols, max_k),
            0,
            ExpansionMethod::PermanentBound,
        )
    };
    let m = Matrix::from_fn(p, p, |i, j| {
        mono_vector(&support, &centers[j].0, &centers[j].1)[i].clone()
    });
    let det0 = det_exact(&m)?;
    sums[0] = det0.abs();
    let mut coeffs: Vec<Rat> = sums.iter().map(|c| -c).collect();
    coeffs[0] = det0.abs();
    let bound_poly = UniPoly::new(coeffs);
    let pd_radius = if det0.is_zero() || bound_poly.degree() == Some(0) {
        None
    } else {
        let b = bound_poly.root_bound();
        isolate_real_roots(&bound_poly, &Ival::new(Rat::zero(), b), width)?
            .into_iter()
            .find(|r| r.lo().is_positive() || r.hi().is_positive() && !r.contains(&Rat::zero()))
    };
    Ok(RadiusCertificate {
        centers: centers.to_vec(),
        perturbed: perturbed.to_vec(),
        degree: d,
        constant_term: det0,
        coefficient_sums: sums,
        bound_poly,
        pd_radius,
        method,
        expansion_terms: terms,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CertStatus {
    Proved,
    Unknown,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CertMethod {
    Radius,
    IntervalSubdivision,
}

#[derive(Clone, Debug)]
pub struct SubdivisionWitness {
    pub leaves: usize,
    /// Hull of the determinant enclosures over all leaves.
    pub det_hull: Ival,
}

#[derive(Clone, Debug)]
pub struct PdCertificate {
    pub status: CertStatus,
    pub method: Option<CertMethod>,
    pub degree: u32,
    pub subset: Vec<usize>,
    pub reason: Option<String>,
    pub radius: Option<RadiusCertificate>,
    /// Largest half-width among perturbed boxes of the subset.
    pub max_half_width: Option<Rat>,
    pub subdivision: Option<SubdivisionWitness>,
}

impl PdCertificate {
    fn unknown(degree: u32, subset: Vec<usize>, reason: String) -> Self {
        PdCertificate {
            status: CertStatus::Unknown,
            method: None,
            degree,
            subset,
            reason: Some(reason),
            radius: None,
            max_half_width: None,
            subdivision: None,
        }
    }

    pub fn is_proved(&self) -> bool {
        self.status == CertStatus::Proved
    }

    pub fn to_json(&self) -> Value {
        json!({
            "status": self.status,
            "method": self.method,
            "degree": self.degree,
            "subset": self.subset,
            "reason": self.reason,
            "max_half_width": self.max_half_width.as_ref().map(fmt_rat),
            "radius": self.radius.as_ref().map(RadiusCertificate::to_json),
            "subdivision": self.subdivision.as_ref().map(|w| json!({
                "leaves": w.leaves,
                "det_hull": [fmt_rat(w.det_hull.lo()), fmt_rat(w.det_hull.hi())],
            })),
        })
    }
}

#[derive(Clone, Debug)]
pub struct BoxCertOptions {
    pub max_depth: u32,
    pub random_subsets: usize,
    pub seed: u64,
    pub radius_width: Rat,
}

impl Default for BoxCertOptions {
    fn default() -> Self {
        BoxCertOptions {
            max_depth: 12,
            random_subsets: 16,
            seed: 0,
            radius_width: default_radius_width(),
        }
    }
}

fn basis_ival(support: &Support, region: &[(Ival, Ival)]) -> Matrix<Ival> {
    let cols: Vec<Vec<Ival>> = region
        .iter()
        .map(|(x, y)| mono_vector(support, x, y))
        .collect();
    Matrix::from_fn(support.len(), region.len(), |i, j| cols[j][i].clone())
}

fn split(iv: &Ival) -> (Ival, Ival) {
    let m = iv.mid();
    (
        Ival::new(iv.lo().clone(), m.clone()),
        Ival::new(m, iv.hi().clone()),
    )
}

/// Returns the leaf count and determinant hull when every leaf excludes
/// zero, `None` once a leaf at `depth_left == 0` still contains zero.
fn subdivide(
    support: &Support,
    region: Vec<(Ival, Ival)>,
    depth_left: u32,
) -> Option<(usize, Ival)> {
    let det = det_interval(&basis_ival(support, &region)).ok()?;
    if det.excludes_zero() {
        return Some((1, det));
    }
    if depth_left == 0 {
        return None;
    }
    // Bisect the widest coordinate.
    let (idx, axis) = region
        .iter()
        .enumerate()
        .flat_map(|(i, (x, y))| [(i, 0usize, x.width()), (i, 1, y.width())])
        .max_by(|a, b| a.2.cmp(&b.2))
        .map(|(i, ax, _)| (i, ax))?;
    let coord = if axis == 0 {
        &region[idx].0
    } else {
        &region[idx].1
    };
    if coord.is_point() {
        return None;
    }
    let (a, b) = split(coord);
    let mut left = region.clone();
    let mut right = region;
    if axis == 0 {
        left[idx].0 = a;
        right[idx].0 = b;
    } else {
        left[idx].1 = a;
        right[idx].1 = b;
    }
    let (l, r) = rayon::join(
        || subdivide(support, left, depth_left - 1),
        || subdivide(support, right, depth_left - 1),
    );
    let (l, r) = (l?, r?);
    // Continuity forbids a sign change without a zero, but check anyway.
    if l.1.sign() != r.1.sign() {
        return None;
    }
    Some((l.0 + r.0, l.1.hull(&r.1)))
}

fn certify_subset(
    boxes: &[Box],
    d: u32,
    subset: &[usize],
    opts: &BoxCertOptions,
) -> Result<PdCertificate> {
    let support = graded_support(d);
    let p = support.len();
    let chosen: Vec<&Box> = subset.iter().map(|&i| &boxes[i]).collect();
    let perturbed: Vec<bool> = chosen.iter().map(|b| !b.is_degenerate()).collect();
    let h = chosen
        .iter()
        .filter(|b| !b.is_degenerate())
        .map(|b| b.half_width())
        .max()
        .unwrap_or_else(Rat::zero);
    let mut cert = PdCertificate::unknown(d, subset.to_vec(), "no engine excluded zero".into());
    cert.max_half_width = Some(h.clone());
    if p <= EXPANSION_GATE {
        let centers: Vec<Point<Rat>> = chosen.iter().map(|b| b.center()).collect();
        let rc = delta_bound_poly(&centers, d, &perturbed, &opts.radius_width)?;
        let ok = !rc.constant_term.is_zero()
            && (h.is_zero() || rc.pd_radius.as_ref().is_some_and(|r| r.lo() > &h));
        cert.radius = Some(rc);
        if ok {
            cert.status = CertStatus::Proved;
            cert.method = Some(CertMethod::Radius);
            cert.reason = None;
            return Ok(cert);
        }
    }
    let region: Vec<(Ival, Ival)> = chosen.iter().map(|b| (b.x(), b.y())).collect();
    if let Some((leaves, det_hull)) = subdivide(&support, region, opts.max_depth) {
        cert.status = CertStatus::Proved;
        cert.method = Some(CertMethod::IntervalSubdivision);
        cert.reason = None;
        cert.subdivision = Some(SubdivisionWitness { leaves, det_hull });
    } else {
        cert.reason = Some(format!("zero not excluded within depth {}", opts.max_depth));
    }
    Ok(cert)
}

/// Candidate subsets: smallest-area boxes first, then seeded random draws.
fn candidate_subsets(boxes: &[Box], p: usize, opts: &BoxCertOptions) -> Vec<Vec<usize>> {
    let mut order: Vec<usize> = (0..boxes.len()).collect();
    order.sort_by(|&a, &b| boxes[a].area().cmp(&boxes[b].area()).then(a.cmp(&b)));
    let mut first: Vec<usize> = order[..p].to_vec();
    first.sort_unstable();
    let mut out = vec![first];
    if boxes.len() > p {
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
        for _ in 0..opts.random_subsets {
            let mut s = sample(&mut rng, boxes.len(), p).into_vec();
            s.sort_unstable();
            if !out.contains(&s) {
                out.push(s);
            }
        }
    }
    out
}

/// Proves that no curve of degree <= d meets every box, or reports unknown.
pub fn box_pd_certificate(
    boxes: &[Box],
    d: u32,
    subset: Option<&[usize]>,
    opts: &BoxCertOptions,
) -> Result<PdCertificate> {
    let p = support_size(d);
    if let Some(s) = subset {
        if s.len() != p {
            return Err(Error::Dimension(format!("subset must have {p} indices")));
        }
        if let Some(&bad) = s.iter().find(|&&i| i >= boxes.len()) {
            return Err(Error::Invalid(format!("box index {bad} out of range")));
        }
        return certify_subset(boxes, d, s, opts);
    }
    if boxes.len() < p {
        return Ok(PdCertificate::unknown(d, Vec::new(), "N < p".into()));
    }
    let candidates = candidate_subsets(boxes, p, opts);
    let results: Vec<Result<PdCertificate>> = candidates
        .par_iter()
        .map(|s| certify_subset(boxes, d, s, opts))
        .collect();
    let mut first_unknown = None;
    for r in results {
        let c = r?;
        if c.is_proved() {
            return Ok(c);
        }
        first_unknown.get_or_insert(c);
    }
    Ok(first_unknown.expect("at least one candidate"))
}

/// d + 1 when the certificate is proved.
pub fn min_degree_lower_bound(boxes: &[Box], d: u32, opts: &BoxCertOptions) -> Result<Option<u32>> {
    Ok(box_pd_certificate(boxes, d, None, opts)?
        .is_proved()
        .then_some(d + 1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rat::{rat, ri, to_f64};
    use crate::gram::{degree_degenerate, Verdict};
    use rand::Rng;

    fn planet_centers() -> Vec<Point<Rat>> {
        [
            (3871, 2408),
            (7233, 6152),
            (10000, 10000),
            (15237, 18808),
            (52044, 118620),
            (95826, 294571),
        ]
        .iter()
        .map(|&(x, y)| (rat(x, 10000), rat(y, 10000)))
        .collect()
    }

    fn planet_boxes() -> Vec<Box> {
        let h = rat(3, 10000);
        planet_centers()
            .iter()
            .enumerate()
            .map(|(i, c)| {
                if i == 2 {
                    Box::around(c, &ri(0), &ri(0))
                } else {
                    Box::around(c, &h, &h)
                }
            })
            .collect()
    }

    fn mask() -> Vec<bool> {
        vec![true, true, false, true, true, true]
    }

    #[test]
    fn planet_radius_polynomial() {
        let rc = delta_bound_poly(&planet_centers(), 2, &mask(), &rat(1, 1_000_000_000)).unwrap();
        assert_eq!(rc.method, ExpansionMethod::Exact);
        assert_eq!(
            rc.constant_term,
            Rat::new(
                "728327184304772538780278933931".parse().unwrap(),
                "781250000000000000000000000000".parse().unwrap()
            )
        );
        assert_eq!(rc.coefficient_sums[8], ri(120));
        assert_eq!(rc.expansion_degree(), 8);
        assert_eq!(rc.leibniz_terms(), 720);
        let r = rc.pd_radius.unwrap();
        assert!(r.lo() > &rat(370, 1_000_000) && r.hi() < &rat(378, 1_000_000));
        let neg = isolate_real_roots(
            &rc.bound_poly,
            &Ival::new(ri(-2), ri(0)),
            &rat(1, 1_000_000),
        )
        .unwrap();
        assert_eq!(neg.len(), 2);
        assert!((to_f64(&neg[0].mid()) + 1.024959).abs() < 2e-6);
    }

    #[test]
    fn expansion_degree_matches_formula() {
        for d in 1..=2u32 {
            let p = support_size(d);
            let centers: Vec<Point<Rat>> = (0..p as i64)
                .map(|i| (rat(i + 2, 3), rat(i * i + 1, 5)))
                .collect();
            let rc = delta_bound_poly(&centers, d, &vec![true; p], &rat(1, 1000)).unwrap();
            assert_eq!(rc.expansion_degree() as u32, d * (d + 1) * (d + 2) / 3);
        }
    }

    #[test]
    fn permanent_bound_dominates_exact() {
        let centers = planet_centers();
        let support = graded_support(2);
        let cols: Vec<ColumnChoices> = centers
            .iter()
            .zip(mask())
            .map(|(c, pert)| {
                let raw = column_terms(&support, c, pert);
                let all: Vec<Rat> = raw
                    .iter()
                    .flat_map(|(_, col)| col.iter().cloned())
                    .collect();
                let (_, scale) = clear_column(&all);
                let terms = raw
                    .into_iter()
                    .map(|(k, col)| {
                        (
                            k,
                            col.iter()
                                .map(|v| (v * Rat::from_integer(scale.clone())).to_integer())
                                .collect(),
                        )
                    })
                    .collect();
                ColumnChoices { terms, scale }
            })
            .collect();
        let (exact, _) = exact_sums(&cols, 8);
        let perm = permanent_sums(&cols, 8);
        for k in 1..=8 {
            assert!(perm[k] >= exact[k], "k = {k}");
        }
    }

    #[test]
    fn repeated_center_has_no_radius() {
        let mut c = planet_centers();
        c[1] = c[0].clone();
        let rc = delta_bound_poly(&c, 2, &[true; 6], &rat(1, 1000)).unwrap();
        assert!(rc.constant_term.is_zero());
        assert!(rc.pd_radius.is_none());
    }

    #[test]
    fn wrong_center_count_is_error() {
        assert!(delta_bound_poly(&planet_centers()[..5], 2, &[true; 5], &rat(1, 1000)).is_err());
    }

    #[test]
    fn planets_prove_cubic_lower_bound() {
        let opts = BoxCertOptions::default();
        let cert = box_pd_certificate(&planet_boxes(), 2, None, &opts).unwrap();
        assert!(cert.is_proved());
        assert_eq!(cert.method, Some(CertMethod::Radius));
        assert_eq!(
            min_degree_lower_bound(&planet_boxes(), 2, &opts).unwrap(),
            Some(3)
        );
        let v = cert.to_json();
        assert_eq!(v["status"], "proved");
    }

    #[test]
    fn too_few_boxes_is_unknown() {
        let boxes = &planet_boxes()[..5];
        let cert = box_pd_certificate(boxes, 2, None, &BoxCertOptions::default()).unwrap();
        assert_eq!(cert.status, CertStatus::Unknown);
        assert_eq!(cert.reason.as_deref(), Some("N < p"));
        assert_eq!(
            min_degree_lower_bound(boxes, 3, &BoxCertOptions::default()).unwrap(),
            None
        );
    }

    #[test]
    fn conic_centers_stay_unknown() {
        let h = rat(1, 1000);
        let boxes: Vec<Box> = [0i64, 1, -1, 2, -2, 3]
            .iter()
            .map(|&t| {
                let t = ri(t);
                let den = ri(1) + &t * &t;
                Box::around(&((ri(1) - &t * &t) / &den, ri(2) * &t / &den), &h, &h)
            })
            .collect();
        let opts = BoxCertOptions {
            max_depth: 6,
            ..Default::default()
        };
        let cert = box_pd_certificate(&boxes, 2, None, &opts).unwrap();
        assert_eq!(cert.status, CertStatus::Unknown);
    }

    #[test]
    fn subdivision_proves_separated_line_boxes() {
        // Three well-separated small boxes off any common line.
        let h = rat(1, 100);
        let boxes = [
            Box::around(&(ri(0), ri(0)), &h, &h),
            Box::around(&(ri(1), ri(0)), &h, &h),
            Box::around(&(ri(0), ri(1)), &h, &h),
        ];
        let region: Vec<(Ival, Ival)> = boxes.iter().map(|b| (b.x(), b.y())).collect();
        let (leaves, hull) = subdivide(&graded_support(1), region, 4).unwrap();
        assert!(leaves >= 1 && hull.excludes_zero());
    }

    #[test]
    fn proved_boxes_reject_sampled_conics() {
        let boxes = planet_boxes();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..100 {
            let pts: Vec<Point<Rat>> = boxes
                .iter()
                .map(|b| {
                    let tx = rat(rng.gen_range(0..=1000), 1000);
                    let ty = rat(rng.gen_range(0..=1000), 1000);
                    (
                        &b.x_lo + (&b.x_hi - &b.x_lo) * tx,
                        &b.y_lo + (&b.y_hi - &b.y_lo) * ty,
                    )
                })
                .collect();
            assert_eq!(
                degree_degenerate(&pts, 2).unwrap().degenerate,
                Verdict::ProvedNo
            );
        }
    }

    #[test]
    fn radius_is_conservative_on_random_perturbations() {
        let rc = delta_bound_poly(&planet_centers(), 2, &mask(), &rat(1, 1_000_000_000)).unwrap();
        let delta = rc.pd_radius.unwrap().lo().clone();
        let support = graded_support(2);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..50 {
            let mut shift = || &delta * rat(rng.gen_range(-1000..=1000), 1000);
            let pts: Vec<(Ival, Ival)> = planet_centers()
                .iter()
                .zip(mask())
                .map(|(c, m)| {
                    let (u, v) = if m {
                        (shift(), shift())
                    } else {
                        (ri(0), ri(0))
                    };
                    (Ival::point(&c.0 + u), Ival::point(&c.1 + v))
                })
                .collect();
            let det = det_interval(&basis_ival(&support, &pts)).unwrap();
            assert!(det.excludes_zero() && det.sign() == Some(1));
        }
    }
}

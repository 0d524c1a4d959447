//! Aggregate matrices A = M Mᵀ, degree decisions, interpolating curves and
//! the unit-sphere least-squares minimum.

use std::collections::HashMap;

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactnum::matrix::{adjugate_integer, berkowitz, sign_normalize, Scalar};
use crate::exactnum::rat::{fmt_rat, lcm_denoms, pow2, primitive_part, sqrt_bounds};
use crate::exactnum::{
    det_exact, det_interval, nullspace_integer, Int, Ival, Matrix, Rat, RealRooted, Sturm, UniPoly,
};
use crate::polybasis::{
    graded_support, mono_vector, normalize_integer, support_size, Poly, Support,
};

pub type Point<T> = (T, T);

/// Points and support with the basis matrix (p x N) and aggregate (p x p).
#[derive(Clone, Debug)]
pub struct GramSystem<T> {
    pub points: Vec<Point<T>>,
    pub support: Support,
    pub basis: Matrix<T>,
    pub aggregate: Matrix<T>,
}

pub fn build_gram<T: Scalar>(points: &[Point<T>], support: &Support) -> Result<GramSystem<T>> {
    if points.is_empty() {
        return Err(Error::EmptyPoints);
    }
    let cols: Vec<Vec<T>> = points
        .iter()
        .map(|(x, y)| mono_vector(support, x, y))
        .collect();
    let p = support.len();
    let basis = Matrix::from_fn(p, points.len(), |i, j| cols[j][i].clone());
    let aggregate = Matrix::from_fn(p, p, |i, j| {
        cols.iter()
            .fold(T::zero_elem(), |acc, v| acc.add(&v[i].mul(&v[j])))
    });
    Ok(GramSystem {
        points: points.to_vec(),
        support: support.clone(),
        basis,
        aggregate,
    })
}

/// Evaluation matrix (N x p): row i is the monomial vector at point i.
pub fn eval_matrix(points: &[Point<Rat>], support: &Support) -> Matrix<Rat> {
    let rows: Vec<Vec<Rat>> = points
        .iter()
        .map(|(x, y)| mono_vector(support, x, y))
        .collect();
    Matrix::from_fn(points.len(), support.len(), |i, j| rows[i][j].clone())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    ProvedYes,
    ProvedNo,
    Unknown,
}

#[derive(Clone, Debug)]
pub struct DegeneracyReport {
    /// det of the aggregate; a point interval for exact input.
    pub det: Ival,
    pub degenerate: Verdict,
}

/// Exact degeneracy test: det = 0 iff a curve of degree <= d passes through
/// all points.
pub fn degree_degenerate(points: &[Point<Rat>], d: u32) -> Result<DegeneracyReport> {
    let g = build_gram(points, &graded_support(d))?;
    let det = det_exact(&g.aggregate)?;
    let degenerate = if det.is_zero() {
        Verdict::ProvedYes
    } else {
        Verdict::ProvedNo
    };
    Ok(DegeneracyReport {
        det: Ival::point(det),
        degenerate,
    })
}

/// Interval version: only a nonsingularity proof is possible.
pub fn degree_degenerate_ival(points: &[Point<Ival>], d: u32) -> Result<DegeneracyReport> {
    let g = build_gram(points, &graded_support(d))?;
    if points.len() < support_size(d) {
        return Ok(DegeneracyReport {
            det: Ival::zero(),
            degenerate: Verdict::ProvedYes,
        });
    }
    let det = det_interval(&g.aggregate)?;
    let degenerate = if det.excludes_zero() {
        Verdict::ProvedNo
    } else {
        Verdict::Unknown
    };
    Ok(DegeneracyReport { det, degenerate })
}

fn sparsity_key(p: &Poly<Int>) -> (usize, Vec<Int>) {
    (p.weight(), p.coeffs().to_vec())
}

/// Integer-normalised nullspace basis of the system restricted to `support`,
/// each curve checked to vanish on every point.
pub fn curves_on_support(points: &[Point<Rat>], support: &Support) -> Result<Vec<Poly<Int>>> {
    let m = eval_matrix(points, support);
    let mut out = Vec::new();
    for v in nullspace_integer(&m) {
        let poly = Poly::new(support.clone(), v)?;
        let fr = poly.to_rat();
        if let Some(i) = points.iter().position(|(x, y)| !fr.eval(x, y).is_zero()) {
            return Err(Error::Invalid(format!(
                "curve fails to vanish at point {i}"
            )));
        }
        out.push(poly);
    }
    out.sort_by_key(sparsity_key);
    Ok(out)
}

pub fn curves_through(points: &[Point<Rat>], d: u32) -> Result<Vec<Poly<Int>>> {
    curves_on_support(points, &graded_support(d))
}

/// Largest d with d(d+1)/2 <= n.
pub fn existence_bound(n: usize) -> u32 {
    let mut d = 0u32;
    while ((d + 1) * (d + 2) / 2) as usize <= n {
        d += 1;
    }
    d
}

#[derive(Clone, Debug)]
pub struct MinDegree {
    pub d_star: u32,
    pub curves: Vec<Poly<Int>>,
}

/// Ascends d = 1, 2, ... up to `d_max` (default u(N) + 1).
pub fn min_degree_curve(points: &[Point<Rat>], d_max: Option<u32>) -> Result<MinDegree> {
    if points.is_empty() {
        return Err(Error::EmptyPoints);
    }
    let limit = d_max.unwrap_or_else(|| existence_bound(points.len()) + 1);
    for d in 1..=limit {
        let curves = curves_through(points, d)?;
        if !curves.is_empty() {
            return Ok(MinDegree { d_star: d, curves });
        }
    }
    Err(Error::Invalid(format!("no curve of degree <= {limit}")))
}

/// Primitive integer direction of the line through two exact points.
fn line_key(a: &Point<Rat>, b: &Point<Rat>) -> (Int, Int, Int) {
    // (y2 - y1) x - (x2 - x1) y + c = 0, scaled to coprime integers.
    let u = &b.1 - &a.1;
    let v = &a.0 - &b.0;
    let c = -(&u * &a.0 + &v * &a.1);
    let ints = sign_normalize(primitive_part(&[u, v, c]));
    (ints[0].clone(), ints[1].clone(), ints[2].clone())
}

fn bezout_from_q(q: usize, n: usize) -> u32 {
    if q >= n || q < 3 {
        1
    } else {
        q.max(2) as u32
    }
}

/// Largest exactly collinear subset, found by hashing normalised lines.
pub fn max_collinear(points: &[Point<Rat>]) -> usize {
    let mut lines: HashMap<(Int, Int, Int), usize> = HashMap::new();
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            if points[i] != points[j] {
                *lines.entry(line_key(&points[i], &points[j])).or_default() += 1;
            }
        }
    }
    // A line with k points contributes k(k-1)/2 pairs.
    lines
        .values()
        .map(|&pairs| ((1.0 + (1.0 + 8.0 * pairs as f64).sqrt()) / 2.0).round() as usize)
        .max()
        .unwrap_or(points.len().min(1))
}

/// Degree lower bound from the largest collinear subset (line case of the
/// Bezout argument): max(2, q) when 3 <= q < N, otherwise 1.
pub fn collinear_bezout_bound(points: &[Point<Rat>]) -> u32 {
    bezout_from_q(max_collinear(points), points.len())
}

fn orientation(a: &Point<Ival>, b: &Point<Ival>, c: &Point<Ival>) -> Ival {
    &(&(&b.0 - &a.0) * &(&c.1 - &a.1)) - &(&(&b.1 - &a.1) * &(&c.0 - &a.0))
}

/// Interval version: a triple counts only when its orientation enclosure is
/// exactly zero, so the bound stays sound for irrational data.
pub fn collinear_bezout_bound_ival(points: &[Point<Ival>]) -> u32 {
    let n = points.len();
    let mut best = n.min(2);
    for i in 0..n {
        for j in i + 1..n {
            let on_line = (0..n)
                .filter(|&k| {
                    k == i
                        || k == j
                        || orientation(&points[i], &points[j], &points[k]).is_point()
                            && orientation(&points[i], &points[j], &points[k])
                                .lo()
                                .is_zero()
                })
                .count();
            best = best.max(on_line);
        }
    }
    bezout_from_q(best, n)
}

/// Smallest eigenpair of a symmetric positive semidefinite rational matrix.
#[derive(Clone, Debug)]
pub struct EigenMin {
    pub lambda: Ival,
    /// Lower bound on the second smallest distinct eigenvalue, if any.
    pub next_lower: Option<Rat>,
    pub direction: Direction,
}

#[derive(Clone, Debug)]
pub enum Direction {
    /// Exact eigenvector (eigenvalue rational).
    Exact(Vec<Int>),
    /// Unit eigenvector rescaled so the largest component is exactly 1:
    /// componentwise enclosures, the pivot index, and the squared
    /// unit-norm magnitude of the pivot component.
    Enclosed {
        coeffs: Vec<Ival>,
        pivot: usize,
        pivot_sq: Ival,
    },
    /// Repeated smallest eigenvalue; no unique direction.
    Ambiguous,
}

impl Direction {
    /// Enclosure of max_j v_j^2 for the unit eigenvector.
    pub fn max_component_sq(&self) -> Option<Ival> {
        match self {
            Direction::Exact(v) => {
                let n2: Int = v.iter().map(|x| x * x).sum();
                let m = v.iter().map(|x| x * x).max()?;
                Some(Ival::point(Rat::new(m, n2)))
            }
            Direction::Enclosed { pivot_sq, .. } => Some(pivot_sq.clone()),
            Direction::Ambiguous => None,
        }
    }

    /// Coefficients scaled so that the largest magnitude is 1.
    pub fn maxnorm_coeffs(&self) -> Option<Vec<Ival>> {
        match self {
            Direction::Exact(v) => {
                let k = v.iter().enumerate().max_by_key(|(_, x)| x.abs())?.0;
                Some(
                    v.iter()
                        .map(|x| Ival::point(Rat::new(x.clone(), v[k].clone())))
                        .collect(),
                )
            }
            Direction::Enclosed { coeffs, .. } => Some(coeffs.clone()),
            Direction::Ambiguous => None,
        }
    }
}

/// Integer form `l g` of a rational matrix, with `l` the common denominator.
fn integer_form(g: &Matrix<Rat>) -> (Int, Vec<Vec<Int>>) {
    let n = g.rows();
    let l = lcm_denoms((0..n).flat_map(|i| g.row(i).iter()));
    let lr = Rat::from_integer(l.clone());
    let rows = (0..n)
        .map(|i| g.row(i).iter().map(|x| (x * &lr).to_integer()).collect())
        .collect();
    (l, rows)
}

fn half(a: &Rat, b: &Rat) -> Rat {
    (a + b) / Rat::from_integer(2.into())
}

/// Relative width below 2^-bits, or absolute when the interval straddles 0.
fn narrow(lo: &Rat, hi: &Rat, bits: u32) -> bool {
    let scale = lo
        .abs()
        .max(hi.abs())
        .max(Rat::new(Int::one(), pow2(4 * bits as u64)));
    (hi - lo) * Rat::from_integer(pow2(bits as u64)) <= scale
}

/// Isolates the smallest eigenvalue of `g` (symmetric) to relative width
/// 2^-bits, then encloses its eigenvector.
pub fn min_eigen(g: &Matrix<Rat>, bits: u32) -> Result<EigenMin> {
    g.require_square()?;
    let n = g.rows();
    if n == 0 {
        return Err(Error::Invalid("empty matrix".into()));
    }
    let (l, gi) = integer_form(g);
    let chi = RealRooted::new(berkowitz(&gi));
    let le = |t: &Rat| {
        let (below, at) = chi.count_below(t);
        below + at
    };
    let bound: Int = gi
        .iter()
        .map(|r| r.iter().map(|x| x.abs()).sum::<Int>())
        .max()
        .unwrap()
        + 1;
    let top = Rat::from_integer(bound);
    let (mut lo, mut hi) = (-top.clone(), top.clone());
    let to_g = |t: &Rat| t / Rat::from_integer(l.clone());
    // Invariants: no root at or below lo, at least one at or below hi.
    let mut exact: Option<(Rat, usize)> = None;
    let mut repeated_checked = false;
    while le(&hi) > 1 {
        let mid = half(&lo, &hi);
        match chi.count_below(&mid) {
            (0, 0) => lo = mid,
            (0, m) => {
                exact = Some((mid, m));
                break;
            }
            _ => hi = mid,
        }
        if !repeated_checked && narrow(&lo, &hi, bits) {
            repeated_checked = true;
            let cp = UniPoly::new(
                chi.coeffs()
                    .iter()
                    .cloned()
                    .map(Rat::from_integer)
                    .collect(),
            );
            let rep = cp.gcd(&cp.derivative());
            if rep.degree().unwrap_or(0) > 0 && Sturm::new(&rep).count_closed(&lo, &hi) > 0 {
                let lambda = Ival::new(to_g(&lo), to_g(&hi));
                let next_lower = Some(lambda.lo().clone());
                return Ok(EigenMin {
                    lambda,
                    next_lower,
                    direction: Direction::Ambiguous,
                });
            }
        }
    }
    if let Some((t, mult)) = exact {
        let lambda = Ival::point(to_g(&t));
        if mult > 1 {
            let next_lower = Some(lambda.lo().clone());
            return Ok(EigenMin {
                lambda,
                next_lower,
                direction: Direction::Ambiguous,
            });
        }
        let next_lower = second_lower(&chi, &t, &top, n).map(|v| to_g(&v));
        let lam = lambda.lo().clone();
        let shifted = Matrix::from_fn(n, n, |i, j| {
            if i == j {
                &g[(i, j)] - &lam
            } else {
                g[(i, j)].clone()
            }
        });
        let ns = nullspace_integer(&shifted);
        let direction = match ns.len() {
            1 => Direction::Exact(ns.into_iter().next().unwrap()),
            _ => Direction::Ambiguous,
        };
        return Ok(EigenMin {
            lambda,
            next_lower,
            direction,
        });
    }
    let next_lower = second_lower(&chi, &hi, &top, n).map(|v| to_g(&v));
    // Sign bisection on the isolating interval (lo, hi].
    let s_hi = chi.sign_at(&hi);
    let mut point = None;
    while !narrow(&lo, &hi, bits) {
        let mid = half(&lo, &hi);
        match chi.sign_at(&mid) {
            0 => {
                point = Some(mid);
                break;
            }
            s if s == s_hi => hi = mid,
            _ => lo = mid,
        }
    }
    let lambda = match point {
        Some(t) => Ival::point(to_g(&t)),
        None => Ival::new(to_g(&lo), to_g(&hi)),
    };
    if lambda.is_point() {
        let lam = lambda.lo().clone();
        let shifted = Matrix::from_fn(n, n, |i, j| {
            if i == j {
                &g[(i, j)] - &lam
            } else {
                g[(i, j)].clone()
            }
        });
        let ns = nullspace_integer(&shifted);
        let direction = match ns.len() {
            1 => Direction::Exact(ns.into_iter().next().unwrap()),
            _ => Direction::Ambiguous,
        };
        return Ok(EigenMin {
            lambda,
            next_lower,
            direction,
        });
    }
    let direction = enclose_direction(g, &l, &gi, &lambda, next_lower.as_ref(), bits)?;
    Ok(EigenMin {
        lambda,
        next_lower,
        direction,
    })
}

/// Lower bound within 1/8 relative for the second root, given `from` with
/// exactly one root at or below it.
fn second_lower(chi: &RealRooted, from: &Rat, top: &Rat, n: usize) -> Option<Rat> {
    if n < 2 {
        return None;
    }
    let (mut lo, mut hi) = (from.clone(), top.clone());
    let eighth = Rat::new(Int::one(), Int::from(8));
    for _ in 0..4096 {
        if (&hi - &lo) <= lo.abs() * &eighth {
            break;
        }
        let mid = half(&lo, &hi);
        let (below, at) = chi.count_below(&mid);
        if below <= 1 && below + at >= 2 {
            return Some(mid);
        }
        if below + at <= 1 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Some(lo)
}

/// One step of shifted inverse iteration with an a-posteriori bound:
/// sin(angle) <= |G x - rho x| / (|x| gap).
fn enclose_direction(
    g: &Matrix<Rat>,
    l: &Int,
    gi: &[Vec<Int>],
    lambda: &Ival,
    next_lower: Option<&Rat>,
    bits: u32,
) -> Result<Direction> {
    let n = g.rows();
    if n == 1 {
        return Ok(Direction::Enclosed {
            coeffs: vec![Ival::one()],
            pivot: 0,
            pivot_sq: Ival::one(),
        });
    }
    let Some(next) = next_lower else {
        return Ok(Direction::Ambiguous);
    };
    // (g - s I) scaled to integers: den l g - num l I with s = num / den.
    let shift = lambda.mid();
    let (num, den) = (shift.numer() * l, shift.denom());
    let shifted: Vec<Vec<Int>> = gi
        .iter()
        .enumerate()
        .map(|(i, r)| {
            r.iter()
                .enumerate()
                .map(|(j, x)| if i == j { x * den - &num } else { x * den })
                .collect()
        })
        .collect();
    let Some((_, adj)) = adjugate_integer(&shifted) else {
        return Ok(Direction::Ambiguous);
    };
    let mut best: Option<Direction> = None;
    for k in 0..n {
        // The residual bound holds for any x, so a truncated column is as good.
        let top = adj.iter().map(|row| row[k].bits()).max().unwrap_or(0);
        let drop = top.saturating_sub(bits as u64 + 64);
        let x: Vec<Rat> = adj
            .iter()
            .map(|row| Rat::from_integer(&row[k] >> drop))
            .collect();
        let xx: Rat = x.iter().map(|t| t * t).sum();
        if xx.is_zero() {
            continue;
        }
        let gx = g.mul_vec(&x);
        let rho = x.iter().zip(&gx).map(|(a, b)| a * b).sum::<Rat>() / &xx;
        let gap = next - &rho;
        if !gap.is_positive() {
            continue;
        }
        let r2: Rat = gx
            .iter()
            .zip(&x)
            .map(|(a, b)| {
                let t = a - &rho * b;
                &t * &t
            })
            .sum::<Rat>()
            / &xx;
        // s^2 = r^2 / gap^2
        let s = sqrt_bounds(&(r2 / (&gap * &gap)), bits).1;
        if s >= Rat::new(Int::one(), Int::from(8)) {
            continue;
        }
        let norm = Ival::point(xx.clone()).sqrt(bits + 16);
        let pivot = (0..n).max_by(|&a, &b| x[a].abs().cmp(&x[b].abs())).unwrap();
        // v = +-(u + err) with |err| <= 2 s, u = x / |x|.
        let two_s = &s * Rat::from_integer(2.into());
        let err = Ival::new(-two_s.clone(), two_s.clone());
        let comps: Vec<Ival> = x
            .iter()
            .map(|xi| (&(&Ival::point(xi.clone()) / &norm) + &err).round_out(bits + 32))
            .collect();
        let Some(coeffs) = comps
            .iter()
            .map(|c| Some(c.checked_div(&comps[pivot])?.round_out(bits + 32)))
            .collect::<Option<Vec<_>>>()
        else {
            continue;
        };
        let u2 = &x[pivot] * &x[pivot] / &xx;
        let three_s = &s * Rat::from_integer(3.into());
        let lo = (&u2 - &three_s).max(Rat::zero());
        let hi = (&u2 + &three_s).min(Rat::one());
        // The largest component of v could sit elsewhere only if it beats the
        // pivot by more than the error; widen to cover that case.
        let other_hi = (0..n)
            .filter(|&j| j != pivot)
            .map(|j| &x[j] * &x[j] / &xx + &three_s)
            .max()
            .unwrap_or_else(Rat::zero);
        let pivot_sq = Ival::new(lo, hi.max(other_hi.min(Rat::one()))).round_out(bits + 32);
        let better = match &best {
            None => true,
            Some(Direction::Enclosed { coeffs: bc, .. }) => {
                coeffs.iter().map(Ival::width).max() < bc.iter().map(Ival::width).max()
            }
            _ => true,
        };
        if better {
            best = Some(Direction::Enclosed {
                coeffs,
                pivot,
                pivot_sq,
            });
        }
        if s < Rat::new(Int::one(), pow2(bits as u64 / 2)) {
            break;
        }
    }
    Ok(best.unwrap_or(Direction::Ambiguous))
}

/// Quadratic form data for two-term supports: sum (c1 m1 + c2 m2)^2 =
/// alpha c1^2 + beta c1 c2 + gamma c2^2.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadraticForm {
    pub alpha: Rat,
    pub beta: Rat,
    pub gamma: Rat,
    /// -c1/c2 at the minimum over c1 for fixed c2: beta / (2 alpha).
    pub ratio: Rat,
}

#[derive(Clone, Debug)]
pub struct UnitSphereMin {
    pub lambda_min: Ival,
    pub direction: Direction,
    /// Minimum of sum f(P_i)^2 over unit-norm coefficient vectors.
    pub residual: Ival,
    pub quadratic: Option<QuadraticForm>,
}

pub const EIGEN_BITS: u32 = 160;

pub fn unit_sphere_min(points: &[Point<Rat>], support: &Support) -> Result<UnitSphereMin> {
    let g = build_gram(points, support)?;
    let e = min_eigen(&g.aggregate, EIGEN_BITS)?;
    let quadratic = (support.len() == 2).then(|| {
        let a = &g.aggregate;
        let alpha = a[(0, 0)].clone();
        let beta = &a[(0, 1)] * Rat::from_integer(2.into());
        let gamma = a[(1, 1)].clone();
        let ratio = if alpha.is_zero() {
            Rat::zero()
        } else {
            &beta / (&alpha * Rat::from_integer(2.into()))
        };
        QuadraticForm {
            alpha,
            beta,
            gamma,
            ratio,
        }
    });
    Ok(UnitSphereMin {
        residual: e.lambda.clone(),
        lambda_min: e.lambda,
        direction: e.direction,
        quadratic,
    })
}

/// Human-readable summary of an exact direction as a polynomial.
pub fn direction_poly(d: &Direction, support: &Support) -> Option<Poly<Int>> {
    match d {
        Direction::Exact(v) => {
            let r: Vec<Rat> = v.iter().map(|x| Rat::from_integer(x.clone())).collect();
            normalize_integer(&r, support).ok()
        }
        _ => None,
    }
}

/// Formats an interval as `[lo, hi]` decimal approximations.
pub fn ival_decimal(i: &Ival) -> String {
    let (a, b) = i.to_f64_pair();
    format!("[{a:.10e}, {b:.10e}]")
}

/// Fraction-string pair for JSON output.
pub fn ival_strings(i: &Ival) -> [String; 2] {
    [fmt_rat(i.lo()), fmt_rat(i.hi())]
}

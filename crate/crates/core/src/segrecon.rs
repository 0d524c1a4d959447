//! Curves through vertical segments: residual bounds, infeasibility,
//! exact crossing tests, integer reconstruction and uniqueness radii.

use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::boxcert::Box;
use crate::error::{Error, Result};
use crate::exactnum::rat::fmt_rat;
use crate::exactnum::{continued_fraction, Int, Ival, Rat, Sturm, UniPoly};
use crate::gram::Point;
use crate::polybasis::{dy_square_sum, normalize_integer, Poly, Support};
use crate::sparse::{min_residual_table, ResidualEntry};

/// Vertical segment {x} x [y - delta, y + delta].
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Segment {
    pub x: Rat,
    pub y: Rat,
    pub delta: Rat,
}

impl Segment {
    pub fn new(x: Rat, y: Rat, delta: Rat) -> Result<Self> {
        if !delta.is_positive() {
            return Err(Error::Invalid("segment half-width must be positive".into()));
        }
        Ok(Segment { x, y, delta })
    }

    pub fn y_lo(&self) -> Rat {
        &self.y - &self.delta
    }

    pub fn y_hi(&self) -> Rat {
        &self.y + &self.delta
    }

    pub fn center(&self) -> Point<Rat> {
        (self.x.clone(), self.y.clone())
    }

    /// x > 0 and y - delta > 0, where h is increasing along the segment.
    fn check_positive(&self) -> Result<()> {
        if !self.x.is_positive() || !self.y_lo().is_positive() {
            return Err(Error::Invalid(format!(
                "segment at x = {} leaves the positive quadrant",
                fmt_rat(&self.x)
            )));
        }
        Ok(())
    }
}

/// q sum_i delta_i^2 h(x_i, y_i + delta_i), h = sum_j (d m_j / dy)^2: any
/// curve over `support` with all |c_j| <= 1 meeting every segment has
/// sum_i f(x_i, y_i)^2 at most this value.
pub fn residual_bound(segments: &[Segment], support: &Support) -> Result<Rat> {
    let h = dy_square_sum(support);
    let q = Rat::from_integer(Int::from(support.len()));
    segments
        .iter()
        .try_fold(Rat::zero(), |acc, s| {
            s.check_positive()?;
            Ok(acc + &s.delta * &s.delta * h.eval(&s.x, &s.y_hi()))
        })
        .map(|sum| sum * q)
}

#[derive(Clone, Debug)]
pub struct Infeasibility {
    pub q: usize,
    pub infeasible: bool,
    /// Smallest residual over q-subsets at the segment centers.
    pub r: Ival,
    /// Residual bound scaled to q terms: (q / p) times the full-basis bound.
    pub bound: Rat,
    pub margin: Ival,
    pub entry: ResidualEntry,
}

impl Infeasibility {
    pub fn to_json(&self) -> Value {
        json!({
            "q": self.q,
            "infeasible": self.infeasible,
            "r": [fmt_rat(self.r.lo()), fmt_rat(self.r.hi())],
            "r_approx": self.r.to_f64_pair().1,
            "bound": fmt_rat(&self.bound),
            "bound_approx": crate::exactnum::rat::to_f64(&self.bound),
            "margin_lower": fmt_rat(self.margin.lo()),
        })
    }
}

/// No curve with q terms from `basis` and |c_j| <= 1 meets every segment
/// when r(q) exceeds the scaled bound. Any such c has |c|_2 >= 1, so the
/// unit-sphere minimum is a valid lower bound on its residual.
pub fn infeasibility_certificate(
    segments: &[Segment],
    basis: &Support,
    q: usize,
) -> Result<Infeasibility> {
    if q == 0 || q > basis.len() {
        return Err(Error::Invalid(format!(
            "q = {q} outside 1..={}",
            basis.len()
        )));
    }
    let full = residual_bound(segments, basis)?;
    let bound = full * Rat::new(Int::from(q), Int::from(basis.len()));
    let centers: Vec<Point<Rat>> = segments.iter().map(Segment::center).collect();
    let table = min_residual_table(&centers, basis, q..=q)?;
    let entry = table
        .entries
        .get(&q)
        .cloned()
        .ok_or_else(|| Error::Invalid("missing table entry".into()))?;
    let r = entry.r.clone();
    let margin = &r - &Ival::point(bound.clone());
    Ok(Infeasibility {
        q,
        infeasible: r.lo() > &bound,
        r,
        bound,
        margin,
        entry,
    })
}

/// Whether f(x, .) has a root on the closed segment, by exact root counting.
pub fn segment_crossing(f: &Poly<Rat>, s: &Segment) -> bool {
    let u = f.restrict_x(&s.x);
    if u.is_zero() {
        return true;
    }
    root_on_closed(&u, &s.y_lo(), &s.y_hi())
}

fn root_on_closed(u: &UniPoly, a: &Rat, b: &Rat) -> bool {
    if u.is_zero() {
        return true;
    }
    if u.degree() == Some(0) {
        return false;
    }
    Sturm::new(u).count_closed(a, b) > 0
}

/// Crossing verdict for every segment, in input order.
pub fn passes_all(f: &Poly<Rat>, segments: &[Segment]) -> Vec<bool> {
    segments
        .par_iter()
        .map(|s| segment_crossing(f, s))
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Meets {
    Yes,
    No,
    Unknown,
}

const GRID: i64 = 5;

/// Semi-decision of whether f = 0 meets the closed box.
pub fn curve_meets_box(f: &Poly<Rat>, b: &Box, max_depth: u32) -> Meets {
    // Boundary: four exact univariate root counts.
    let edges = [
        (f.restrict_y(&b.y_lo), &b.x_lo, &b.x_hi),
        (f.restrict_y(&b.y_hi), &b.x_lo, &b.x_hi),
        (f.restrict_x(&b.x_lo), &b.y_lo, &b.y_hi),
        (f.restrict_x(&b.x_hi), &b.y_lo, &b.y_hi),
    ];
    if edges.iter().any(|(u, a, c)| root_on_closed(u, a, c)) {
        return Meets::Yes;
    }
    if f.eval_ival(&b.x(), &b.y()).excludes_zero() {
        return Meets::No;
    }
    // Interior grid: a sign change between two points of a convex set
    // forces a zero between them.
    let n = Rat::from_integer(Int::from(GRID + 1));
    let mut signs = std::collections::BTreeSet::new();
    for i in 1..=GRID {
        for j in 1..=GRID {
            let x = &b.x_lo + (&b.x_hi - &b.x_lo) * Rat::from_integer(Int::from(i)) / &n;
            let y = &b.y_lo + (&b.y_hi - &b.y_lo) * Rat::from_integer(Int::from(j)) / &n;
            let v = f.eval(&x, &y);
            if v.is_zero() {
                return Meets::Yes;
            }
            signs.insert(v.is_positive());
        }
    }
    if signs.len() > 1 {
        return Meets::Yes;
    }
    if max_depth == 0 || (b.x_lo == b.x_hi && b.y_lo == b.y_hi) {
        return Meets::Unknown;
    }
    let (xm, ym) = (
        (&b.x_lo + &b.x_hi) / Rat::from_integer(2.into()),
        (&b.y_lo + &b.y_hi) / Rat::from_integer(2.into()),
    );
    let quads = [
        Box {
            x_lo: b.x_lo.clone(),
            x_hi: xm.clone(),
            y_lo: b.y_lo.clone(),
            y_hi: ym.clone(),
        },
        Box {
            x_lo: xm.clone(),
            x_hi: b.x_hi.clone(),
            y_lo: b.y_lo.clone(),
            y_hi: ym.clone(),
        },
        Box {
            x_lo: b.x_lo.clone(),
            x_hi: xm.clone(),
            y_lo: ym.clone(),
            y_hi: b.y_hi.clone(),
        },
        Box {
            x_lo: xm,
            x_hi: b.x_hi.clone(),
            y_lo: ym,
            y_hi: b.y_hi.clone(),
        },
    ];
    let sub: Vec<Meets> = quads
        .par_iter()
        .map(|q| curve_meets_box(f, q, max_depth - 1))
        .collect();
    if sub.contains(&Meets::Yes) {
        Meets::Yes
    } else if sub.iter().all(|m| *m == Meets::No) {
        Meets::No
    } else {
        Meets::Unknown
    }
}

#[derive(Clone, Debug)]
pub struct CoefficientRadius {
    pub index: usize,
    pub accepted: Rat,
    /// Next convergent after `accepted` in the observed expansion.
    pub next: Option<Rat>,
    /// None when the observation is exactly the accepted value.
    pub radius: Option<Rat>,
}

#[derive(Clone, Debug)]
pub struct ReconstructionReport {
    pub observed: Vec<Ival>,
    /// Index of the coefficient scaled to +-1.
    pub scale_index: usize,
    pub scaled: Vec<Ival>,
    pub accepted: Poly<Int>,
    pub per_coefficient: Vec<CoefficientRadius>,
    /// Largest per-coefficient radius.
    pub uniqueness_radius: Option<Rat>,
    /// Smallest per-coefficient radius.
    pub guaranteed_radius: Option<Rat>,
}

impl ReconstructionReport {
    pub fn to_json(&self, vars: (&str, &str)) -> Value {
        let pair = |i: &Ival| [fmt_rat(i.lo()), fmt_rat(i.hi())];
        json!({
            "curve": self.accepted.render(vars),
            "coefficients": self.accepted.coeffs().iter().map(|c| c.to_string()).collect::<Vec<_>>(),
            "support": self.accepted.support().monomials().iter().map(|m| m.render(vars)).collect::<Vec<_>>(),
            "observed": self.observed.iter().map(pair).collect::<Vec<_>>(),
            "scale_index": self.scale_index,
            "per_coefficient": self.per_coefficient.iter().map(|c| json!({
                "index": c.index,
                "accepted": fmt_rat(&c.accepted),
                "next": c.next.as_ref().map(fmt_rat),
                "radius": c.radius.as_ref().map(fmt_rat),
            })).collect::<Vec<_>>(),
            "uniqueness_radius": self.uniqueness_radius.as_ref().map(fmt_rat),
            "guaranteed_radius": self.guaranteed_radius.as_ref().map(fmt_rat),
        })
    }
}

/// First convergent of the midpoint lying in `window` while the window is
/// narrower than 1/n^2, so no other fraction of denominator <= n fits.
fn accept_convergent(window: &Ival, index: usize) -> Result<Rat> {
    let cf = continued_fraction(&window.mid(), 64);
    let w = window.width();
    cf.convergents
        .iter()
        .find(|c| {
            let n = Rat::from_integer(c.denom().clone());
            window.contains(c) && &w * &n * &n < Rat::one()
        })
        .cloned()
        .ok_or_else(|| Error::NoConvergent {
            index,
            detail: format!("window {window} admits no unique simple fraction"),
        })
}

/// Recovers an integer curve from coefficient windows. Each window is first
/// widened by `rel_tol` times its magnitude; the smallest-magnitude window
/// excluding zero is scaled to +-1.
pub fn reconstruct_integer(
    observed: &[Ival],
    support: &Support,
    rel_tol: &Rat,
) -> Result<ReconstructionReport> {
    if observed.len() != support.len() {
        return Err(Error::Dimension(format!(
            "{} windows for {} monomials",
            observed.len(),
            support.len()
        )));
    }
    let widened: Vec<Ival> = observed
        .iter()
        .map(|o| {
            let pad = o.mag() * rel_tol;
            Ival::new(o.lo() - &pad, o.hi() + &pad)
        })
        .collect();
    let scale_index = (0..widened.len())
        .filter(|&i| widened[i].excludes_zero())
        .min_by(|&a, &b| widened[a].mag().cmp(&widened[b].mag()).then(a.cmp(&b)))
        .ok_or(Error::AllZero)?;
    let pivot = &widened[scale_index];
    let scaled: Vec<Ival> = widened
        .iter()
        .enumerate()
        .map(|(i, w)| {
            if i == scale_index {
                Ival::one()
            } else {
                w / pivot
            }
        })
        .collect();
    let values: Vec<Rat> = scaled
        .iter()
        .enumerate()
        .map(|(i, w)| {
            if w.is_point() {
                Ok(w.lo().clone())
            } else {
                accept_convergent(w, i)
            }
        })
        .collect::<Result<_>>()?;
    let accepted = normalize_integer(&values, support)?;
    Ok(ReconstructionReport {
        observed: observed.to_vec(),
        scale_index,
        scaled,
        accepted,
        per_coefficient: Vec::new(),
        uniqueness_radius: None,
        guaranteed_radius: None,
    })
}

/// Per-coefficient radii from full-precision observed ratios c_j / c_ref.
///
/// For accepted ratio a/n the observation window runs to the next convergent
/// h/k of the observed expansion; a fraction distinct from a/n with
/// denominator at most R differs from it by at least 1/(nR), so
/// R_j = 1/(n |h/k - a/n|).
pub fn uniqueness_radius(
    observed_ratios: &[Ival],
    accepted: &Poly<Int>,
    reference: usize,
) -> Result<Vec<CoefficientRadius>> {
    let c = accepted.coeffs();
    if observed_ratios.len() != c.len() || reference >= c.len() || c[reference].is_zero() {
        return Err(Error::Dimension(
            "ratio list does not match the accepted curve".into(),
        ));
    }
    let base = Rat::from_integer(c[reference].clone());
    (0..c.len())
        .filter(|&j| j != reference)
        .map(|j| {
            let a = Rat::from_integer(c[j].clone()) / &base;
            let obs = &observed_ratios[j];
            if obs.is_point() && obs.lo() == &a {
                return Ok(CoefficientRadius {
                    index: j,
                    accepted: a,
                    next: None,
                    radius: None,
                });
            }
            if !obs.is_point() && !obs.contains(&a) && obs.width() > (obs.mid() - &a).abs() {
                return Err(Error::NoConvergent {
                    index: j,
                    detail: "observation window too wide".into(),
                });
            }
            let cf = continued_fraction(&obs.mid(), 200);
            let k =
                cf.convergents
                    .iter()
                    .position(|v| v == &a)
                    .ok_or_else(|| Error::NoConvergent {
                        index: j,
                        detail: format!(
                            "{} is not a convergent of the observed ratio",
                            fmt_rat(&a)
                        ),
                    })?;
            let Some(next) = cf.convergents.get(k + 1).cloned() else {
                return Ok(CoefficientRadius {
                    index: j,
                    accepted: a,
                    next: None,
                    radius: None,
                });
            };
            let n = Rat::from_integer(a.denom().clone());
            let radius = (&next - &a).abs().recip() / n;
            Ok(CoefficientRadius {
                index: j,
                accepted: a,
                next: Some(next),
                radius: Some(radius),
            })
        })
        .collect()
}

/// Fills the radius fields of a report.
pub fn attach_radii(report: &mut ReconstructionReport, radii: Vec<CoefficientRadius>) {
    let finite: Vec<&Rat> = radii.iter().filter_map(|r| r.radius.as_ref()).collect();
    report.uniqueness_radius = finite.iter().max().map(|r| (*r).clone());
    report.guaranteed_radius = finite.iter().min().map(|r| (*r).clone());
    report.per_coefficient = radii;
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rat::{parse_number, rat, ri};
    use crate::polybasis::{even_support, parse_poly, Monomial};

    fn seg(x: Rat, lo: Rat, hi: Rat) -> Segment {
        let two = ri(2);
        Segment::new(x, (&lo + &hi) / &two, (hi - lo) / two).unwrap()
    }

    #[test]
    fn crossing_examples() {
        let f = parse_poly("y - 1", &[]).unwrap();
        assert!(segment_crossing(&f, &seg(ri(0), rat(1, 2), rat(3, 2))));
        assert!(!segment_crossing(&f, &seg(ri(0), ri(2), ri(3))));
        // Tangential contact: (y - 1)^2 touches without a sign change.
        let t = parse_poly("y^2 - 2*y + 1", &[]).unwrap();
        assert!(segment_crossing(&t, &seg(ri(0), rat(1, 2), rat(3, 2))));
        // Endpoint root counts.
        assert!(segment_crossing(&f, &seg(ri(0), ri(1), ri(2))));
    }

    #[test]
    fn bound_examples() {
        let s = vec![Segment::new(ri(1), ri(2), rat(1, 10)).unwrap()];
        let only_x = Support::new(vec![Monomial::new(1, 0)]).unwrap();
        assert_eq!(residual_bound(&s, &only_x).unwrap(), ri(0));
        let y = Support::new(vec![Monomial::new(0, 1)]).unwrap();
        assert_eq!(residual_bound(&s, &y).unwrap(), rat(1, 100));
        let bad = vec![Segment::new(ri(0), ri(2), rat(1, 10)).unwrap()];
        assert!(residual_bound(&bad, &y).is_err());
        assert!(Segment::new(ri(1), ri(1), ri(0)).is_err());
    }

    #[test]
    fn bound_is_monotone() {
        let s = vec![
            Segment::new(rat(1, 2), ri(3), rat(1, 100)).unwrap(),
            Segment::new(ri(2), ri(4), rat(1, 100)).unwrap(),
        ];
        let wider: Vec<Segment> = s
            .iter()
            .map(|t| Segment::new(t.x.clone(), t.y.clone(), rat(1, 50)).unwrap())
            .collect();
        for d in 1..=3 {
            assert!(
                residual_bound(&s, &even_support(d)).unwrap()
                    <= residual_bound(&wider, &even_support(d)).unwrap()
            );
            assert!(
                residual_bound(&s, &even_support(d)).unwrap()
                    <= residual_bound(&s, &even_support(d + 1)).unwrap()
            );
        }
    }

    #[test]
    fn constant_basis_is_infeasible() {
        let s: Vec<Segment> = (1..=3)
            .map(|i| Segment::new(ri(i), ri(i + 1), rat(1, 1000)).unwrap())
            .collect();
        let one = Support::new(vec![Monomial::new(0, 0)]).unwrap();
        let cert = infeasibility_certificate(&s, &one, 1).unwrap();
        assert!(cert.infeasible);
        assert_eq!(cert.r, Ival::point(ri(3)));
    }

    #[test]
    fn box_examples() {
        let f = parse_poly("x^2 + y^2 + 1", &[]).unwrap();
        let b = Box::new(ri(-1), ri(1), ri(-1), ri(1)).unwrap();
        assert_eq!(curve_meets_box(&f, &b, 4), Meets::No);
        let k = parse_poly("p^2 - r^3", &[("r", "p")]).unwrap();
        let near = Box::around(&(ri(1), ri(1)), &rat(1, 1000), &rat(1, 100));
        assert_eq!(curve_meets_box(&k, &near, 4), Meets::Yes);
        // Closed oval strictly inside, touching no edge.
        let oval = parse_poly("x^2 + y^2 - 1/4", &[]).unwrap();
        assert_eq!(curve_meets_box(&oval, &b, 3), Meets::Yes);
    }

    #[test]
    fn reconstruct_fixed_point() {
        let s = Support::new(vec![
            Monomial::new(0, 0),
            Monomial::new(1, 0),
            Monomial::new(0, 1),
        ])
        .unwrap();
        let obs: Vec<Ival> = [1, -3, 2].iter().map(|&v| Ival::point(ri(v))).collect();
        let r = reconstruct_integer(&obs, &s, &ri(0)).unwrap();
        assert_eq!(
            r.accepted.coeffs(),
            &[Int::from(1), Int::from(-3), Int::from(2)]
        );
    }

    #[test]
    fn reconstruct_rejects_wide_windows() {
        let s = Support::new(vec![Monomial::new(0, 0), Monomial::new(1, 0)]).unwrap();
        let obs = vec![Ival::point(ri(1)), Ival::new(ri(0), ri(10))];
        assert!(matches!(
            reconstruct_integer(&obs, &s, &ri(0)),
            Err(Error::NoConvergent { .. })
        ));
    }

    #[test]
    fn reconstruct_from_truncated_decimals() {
        let s = Support::new(vec![
            Monomial::new(0, 0),
            Monomial::new(1, 0),
            Monomial::new(0, 1),
        ])
        .unwrap();
        let ulp = rat(1, 10_000_000);
        let obs = vec![
            Ival::new(
                parse_number("0.9999999").unwrap(),
                parse_number("0.9999999").unwrap() + &ulp,
            ),
            Ival::new(
                parse_number("-3.0000002").unwrap() - &ulp,
                parse_number("-3.0000002").unwrap(),
            ),
            Ival::new(
                parse_number("2.0000001").unwrap(),
                parse_number("2.0000001").unwrap() + &ulp,
            ),
        ];
        let r = reconstruct_integer(&obs, &s, &rat(1, 1_000_000)).unwrap();
        assert_eq!(r.accepted.to_string(), "1 - 3*x + 2*y");
    }

    #[test]
    fn radius_examples() {
        let s = Support::new(vec![Monomial::new(1, 0), Monomial::new(0, 1)]).unwrap();
        let acc = Poly::new(s.clone(), vec![Int::from(2), Int::from(1)]).unwrap();
        let exact =
            uniqueness_radius(&[Ival::point(ri(1)), Ival::point(rat(1, 2))], &acc, 0).unwrap();
        assert!(exact[0].radius.is_none());
        // 1/27 followed by 89898660/2427263793 in the expansion.
        let acc = Poly::new(s, vec![Int::from(27), Int::from(1)]).unwrap();
        let obs = Ival::point(rat(1, 27) + rat(1, 10i64.pow(18)));
        let r = uniqueness_radius(&[Ival::point(ri(1)), obs], &acc, 0).unwrap();
        assert_eq!(r[0].accepted, rat(1, 27));
        assert!(r[0].radius.is_some());
    }
}

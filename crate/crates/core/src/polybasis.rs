//! Monomials, supports in graded order, and sparse bivariate polynomials.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exactnum::matrix::{sign_normalize, Scalar};
use crate::exactnum::rat::{fmt_rat, parse_number, primitive_part};
use crate::exactnum::{Int, Ival, Rat, UniPoly};

/// x^kx y^ky.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub struct Monomial {
    pub kx: u32,
    pub ky: u32,
}

impl Monomial {
    pub const fn new(kx: u32, ky: u32) -> Self {
        Monomial { kx, ky }
    }

    pub fn degree(&self) -> u32 {
        self.kx + self.ky
    }

    pub fn eval<T: Scalar>(&self, x: &T, y: &T) -> T {
        x.pow(self.kx).mul(&y.pow(self.ky))
    }

    /// Rendering with the given variable names, `1` for the constant.
    pub fn render(&self, vars: (&str, &str)) -> String {
        let part = |v: &str, k: u32| match k {
            0 => None,
            1 => Some(v.to_string()),
            _ => Some(format!("{v}^{k}")),
        };
        let parts: Vec<String> = [part(vars.0, self.kx), part(vars.1, self.ky)]
            .into_iter()
            .flatten()
            .collect();
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("*")
        }
    }
}

/// Graded order: ascending total degree, then descending x exponent.
impl Ord for Monomial {
    fn cmp(&self, o: &Self) -> Ordering {
        self.degree().cmp(&o.degree()).then(o.kx.cmp(&self.kx))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(("x", "y")))
    }
}

/// Strictly graded-ordered monomial list.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Support(Vec<Monomial>);

impl Support {
    /// Sorts into graded order; rejects duplicates.
    pub fn new(mut monos: Vec<Monomial>) -> Result<Self> {
        monos.sort();
        if monos.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Invalid("duplicate monomial in support".into()));
        }
        Ok(Support(monos))
    }

    pub fn monomials(&self) -> &[Monomial] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn index_of(&self, m: &Monomial) -> Option<usize> {
        self.0.binary_search(m).ok()
    }

    pub fn subset(&self, idx: &[usize]) -> Support {
        Support(idx.iter().map(|&i| self.0[i]).collect())
    }

    pub fn max_degree(&self) -> u32 {
        self.0.iter().map(Monomial::degree).max().unwrap_or(0)
    }
}

/// All monomials of total degree at most d.
pub fn graded_support(d: u32) -> Support {
    Support(
        (0..=d)
            .flat_map(|k| (0..=k).rev().map(move |a| Monomial::new(a, k - a)))
            .collect(),
    )
}

/// Monomials x^{2a} y^{2b} with a + b <= d.
pub fn even_support(d: u32) -> Support {
    Support(
        graded_support(d)
            .0
            .into_iter()
            .map(|m| Monomial::new(2 * m.kx, 2 * m.ky))
            .collect(),
    )
}

/// Number of monomials of degree at most d.
pub fn support_size(d: u32) -> usize {
    ((d + 1) * (d + 2) / 2) as usize
}

pub fn mono_vector<T: Scalar>(s: &Support, x: &T, y: &T) -> Vec<T> {
    s.0.iter().map(|m| m.eval(x, y)).collect()
}

/// Coefficient vector over a support.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly<T> {
    support: Support,
    coeffs: Vec<T>,
}

impl<T: Clone> Poly<T> {
    pub fn new(support: Support, coeffs: Vec<T>) -> Result<Self> {
        if support.len() != coeffs.len() {
            return Err(Error::Dimension(format!(
                "{} coefficients for {} monomials",
                coeffs.len(),
                support.len()
            )));
        }
        Ok(Poly { support, coeffs })
    }

    pub fn support(&self) -> &Support {
        &self.support
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &T)> {
        self.support.0.iter().zip(&self.coeffs)
    }
}

/// Builds a polynomial from (monomial, coefficient) pairs, merging repeats
/// and dropping zeros.
pub fn poly_from_terms(terms: impl IntoIterator<Item = (Monomial, Rat)>) -> Poly<Rat> {
    let mut acc: BTreeMap<Monomial, Rat> = BTreeMap::new();
    for (m, c) in terms {
        *acc.entry(m).or_insert_with(Rat::zero) += c;
    }
    acc.retain(|_, c| !c.is_zero());
    let (monos, coeffs): (Vec<_>, Vec<_>) = acc.into_iter().unzip();
    Poly {
        support: Support(monos),
        coeffs,
    }
}

impl Poly<Int> {
    pub fn to_rat(&self) -> Poly<Rat> {
        Poly {
            support: self.support.clone(),
            coeffs: self
                .coeffs
                .iter()
                .map(|c| Rat::from_integer(c.clone()))
                .collect(),
        }
    }

    /// Number of nonzero coefficients.
    pub fn weight(&self) -> usize {
        self.coeffs.iter().filter(|c| !c.is_zero()).count()
    }

    /// Drops zero coefficients from the support.
    pub fn compact(&self) -> Poly<Int> {
        let (m, c): (Vec<_>, Vec<_>) = self
            .terms()
            .filter(|(_, c)| !c.is_zero())
            .map(|(m, c)| (*m, c.clone()))
            .unzip();
        Poly {
            support: Support(m),
            coeffs: c,
        }
    }
}

impl Poly<Rat> {
    pub fn eval(&self, x: &Rat, y: &Rat) -> Rat {
        self.terms().map(|(m, c)| c * m.eval(x, y)).sum()
    }

    pub fn eval_ival(&self, x: &Ival, y: &Ival) -> Ival {
        self.terms()
            .fold(Ival::zero(), |acc, (m, c)| &acc + &m.eval(x, y).scale(c))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// Univariate restriction y -> f(a, y).
    pub fn restrict_x(&self, a: &Rat) -> UniPoly {
        let deg = self.support.0.iter().map(|m| m.ky).max().unwrap_or(0) as usize;
        let mut c = vec![Rat::zero(); deg + 1];
        for (m, k) in self.terms() {
            c[m.ky as usize] += k * num_traits::pow(a.clone(), m.kx as usize);
        }
        UniPoly::new(c)
    }

    /// Univariate restriction x -> f(x, b).
    pub fn restrict_y(&self, b: &Rat) -> UniPoly {
        let deg = self.support.0.iter().map(|m| m.kx).max().unwrap_or(0) as usize;
        let mut c = vec![Rat::zero(); deg + 1];
        for (m, k) in self.terms() {
            c[m.kx as usize] += k * num_traits::pow(b.clone(), m.ky as usize);
        }
        UniPoly::new(c)
    }

    pub fn dy(&self) -> Poly<Rat> {
        poly_from_terms(self.terms().filter(|(m, _)| m.ky > 0).map(|(m, c)| {
            (
                Monomial::new(m.kx, m.ky - 1),
                c * Rat::from_integer(m.ky.into()),
            )
        }))
    }
}

/// Generic evaluation through the scalar tower.
pub fn poly_eval<T: Scalar>(f: &Poly<Rat>, x: &T, y: &T) -> T {
    f.terms().fold(T::zero_elem(), |acc, (m, c)| {
        acc.add(&T::from_rat(c).mul(&m.eval(x, y)))
    })
}

/// sum over the support of (d m / d y)^2.
pub fn dy_square_sum(s: &Support) -> Poly<Rat> {
    poly_from_terms(s.0.iter().filter(|m| m.ky > 0).map(|m| {
        let k = Rat::from_integer((m.ky * m.ky).into());
        (Monomial::new(2 * m.kx, 2 * (m.ky - 1)), k)
    }))
}

/// Clears denominators, removes the content and makes the first nonzero
/// coefficient (graded order) positive.
pub fn normalize_integer(coeffs: &[Rat], s: &Support) -> Result<Poly<Int>> {
    if coeffs.iter().all(Zero::is_zero) {
        return Err(Error::AllZero);
    }
    Poly::new(s.clone(), sign_normalize(primitive_part(coeffs)))
}

fn render_terms<'a>(
    terms: impl Iterator<Item = (&'a Monomial, Rat)>,
    vars: (&str, &str),
) -> String {
    let mut out = String::new();
    for (m, c) in terms {
        if c.is_zero() {
            continue;
        }
        let neg = c.is_negative();
        let a = c.abs();
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let mono = m.render(vars);
        if m.degree() == 0 {
            out.push_str(&fmt_rat(&a));
        } else if a.is_one() {
            out.push_str(&mono);
        } else {
            out.push_str(&format!("{}*{}", fmt_rat(&a), mono));
        }
    }
    if out.is_empty() {
        "0".into()
    } else {
        out
    }
}

impl Poly<Rat> {
    pub fn render(&self, vars: (&str, &str)) -> String {
        render_terms(self.terms().map(|(m, c)| (m, c.clone())), vars)
    }
}

impl Poly<Int> {
    pub fn render(&self, vars: (&str, &str)) -> String {
        render_terms(
            self.terms().map(|(m, c)| (m, Rat::from_integer(c.clone()))),
            vars,
        )
    }
}

impl fmt::Display for Poly<Rat> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(("x", "y")))
    }
}

impl fmt::Display for Poly<Int> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(("x", "y")))
    }
}

/// Parses `432*x^4 + 16*y^2 - y^4 ...`. The first variable name of each
/// pair in `aliases` maps to x, the second to y; `x`/`y` always work.
pub fn parse_poly(text: &str, aliases: &[(&str, &str)]) -> Result<Poly<Rat>> {
    let err = |msg: String| Error::Parse {
        location: format!("polynomial {text:?}"),
        message: msg,
    };
    let cleaned: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if cleaned.is_empty() {
        return Err(err("empty polynomial".into()));
    }
    let mut terms = Vec::new();
    let mut start = 0;
    let bytes = cleaned.as_bytes();
    let mut pieces = Vec::new();
    for i in 1..=bytes.len() {
        let boundary = i == bytes.len()
            || (matches!(bytes[i], b'+' | b'-')
                && !matches!(bytes[i - 1], b'e' | b'E' | b'^' | b'*' | b'/'));
        if boundary {
            pieces.push(&cleaned[start..i]);
            start = i;
        }
    }
    for piece in pieces {
        let (neg, body) = match piece.as_bytes()[0] {
            b'-' => (true, &piece[1..]),
            b'+' => (false, &piece[1..]),
            _ => (false, piece),
        };
        if body.is_empty() {
            return Err(err(format!("dangling sign in {piece:?}")));
        }
        let mut coeff = Rat::one();
        let mut mono = Monomial::new(0, 0);
        for factor in body.split('*') {
            if factor.is_empty() {
                return Err(err(format!("empty factor in {piece:?}")));
            }
            let (base, exp) = match factor.split_once('^') {
                Some((b, e)) => (
                    b,
                    e.parse::<u32>()
                        .map_err(|_| err(format!("bad exponent {e:?}")))?,
                ),
                None => (factor, 1),
            };
            let var = if base == "x" || aliases.iter().any(|a| a.0 == base) {
                Some(0)
            } else if base == "y" || aliases.iter().any(|a| a.1 == base) {
                Some(1)
            } else {
                None
            };
            match var {
                Some(0) => mono.kx += exp,
                Some(_) => mono.ky += exp,
                None => {
                    let v = parse_number(base).map_err(|e| err(e.to_string()))?;
                    coeff *= num_traits::pow(v, exp as usize);
                }
            }
        }
        terms.push((mono, if neg { -coeff } else { coeff }));
    }
    Ok(poly_from_terms(terms))
}

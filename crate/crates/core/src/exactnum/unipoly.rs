use std::fmt;

use num_traits::{One, Signed, Zero};

use super::ival::Ival;
use super::rat::{fmt_rat, sign_of, Int, Rat};
use crate::error::{Error, Result};

/// Dense univariate polynomial, ascending coefficients, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct UniPoly {
    coeffs: Vec<Rat>,
}

impl UniPoly {
    pub fn new(mut coeffs: Vec<Rat>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn zero() -> Self {
        UniPoly { coeffs: Vec::new() }
    }

    pub fn constant(c: Rat) -> Self {
        UniPoly::new(vec![c])
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lead(&self) -> Rat {
        self.coeffs.last().cloned().unwrap_or_else(Rat::zero)
    }

    pub fn coeff(&self, k: usize) -> Rat {
        self.coeffs.get(k).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn eval(&self, x: &Rat) -> Rat {
        self.coeffs
            .iter()
            .rev()
            .fold(Rat::zero(), |acc, c| acc * x + c)
    }

    /// Interval Horner evaluation.
    pub fn eval_ival(&self, x: &Ival) -> Ival {
        self.coeffs
            .iter()
            .rev()
            .fold(Ival::zero(), |acc, c| &(&acc * x) + &Ival::point(c.clone()))
    }

    pub fn derivative(&self) -> UniPoly {
        UniPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * Rat::from_integer((k as i64).into()))
                .collect(),
        )
    }

    pub fn neg(&self) -> UniPoly {
        UniPoly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn scale(&self, r: &Rat) -> UniPoly {
        UniPoly::new(self.coeffs.iter().map(|c| c * r).collect())
    }

    /// Polynomial long division; panics on a zero divisor.
    pub fn div_rem(&self, d: &UniPoly) -> (UniPoly, UniPoly) {
        let dd = d.degree().expect("division by zero polynomial");
        let lead = d.lead();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (UniPoly::zero(), self.clone());
        }
        let mut quot = vec![Rat::zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = &rem[k + dd] / &lead;
            if !c.is_zero() {
                for (i, dc) in d.coeffs.iter().enumerate() {
                    rem[k + i] -= &c * dc;
                }
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        (UniPoly::new(quot), UniPoly::new(rem))
    }

    pub fn monic(&self) -> UniPoly {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(&self.lead().recip())
    }

    pub fn gcd(&self, o: &UniPoly) -> UniPoly {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r.monic();
        }
        a.monic()
    }

    /// p / gcd(p, p').
    pub fn square_free(&self) -> UniPoly {
        if self.degree().unwrap_or(0) == 0 {
            return self.clone();
        }
        let g = self.gcd(&self.derivative());
        if g.degree() == Some(0) {
            self.clone()
        } else {
            self.div_rem(&g).0
        }
    }

    pub fn mul(&self, o: &UniPoly) -> UniPoly {
        if self.is_zero() || o.is_zero() {
            return UniPoly::zero();
        }
        let mut c = vec![Rat::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in o.coeffs.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        UniPoly::new(c)
    }

    /// Cauchy bound: every real root lies in [-B, B].
    pub fn root_bound(&self) -> Rat {
        let lead = self.lead().abs();
        let m = self
            .coeffs
            .iter()
            .map(|c| c.abs())
            .max()
            .unwrap_or_else(Rat::zero);
        Rat::one() + m / lead
    }
}

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let a = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            match (k, a.is_one()) {
                (0, _) => write!(f, "{}", fmt_rat(&a))?,
                (_, true) => {}
                _ => write!(f, "{}*", fmt_rat(&a))?,
            }
            match k {
                0 => {}
                1 => write!(f, "t")?,
                _ => write!(f, "t^{k}")?,
            }
        }
        Ok(())
    }
}

/// Sturm chain of a square-free polynomial.
pub struct Sturm {
    chain: Vec<UniPoly>,
}

impl Sturm {
    pub fn new(p: &UniPoly) -> Self {
        let p0 = p.square_free();
        let mut chain = vec![p0.clone(), p0.derivative()];
        loop {
            let n = chain.len();
            if chain[n - 1].is_zero() {
                chain.pop();
                break;
            }
            if chain[n - 1].degree() == Some(0) {
                break;
            }
            let r = chain[n - 2].div_rem(&chain[n - 1]).1;
            // Positive rescaling keeps the sign pattern and tames growth.
            let r = if r.is_zero() {
                r
            } else {
                r.neg().scale(&r.lead().abs().recip())
            };
            chain.push(r);
        }
        Sturm { chain }
    }

    pub fn base(&self) -> &UniPoly {
        &self.chain[0]
    }

    pub fn variations(&self, x: &Rat) -> usize {
        let signs: Vec<i8> = self
            .chain
            .iter()
            .map(|p| sign_of(&p.eval(x)))
            .filter(|&s| s != 0)
            .collect();
        signs.windows(2).filter(|w| w[0] != w[1]).count()
    }

    /// Number of distinct real roots in the half-open interval (a, b].
    pub fn count(&self, a: &Rat, b: &Rat) -> usize {
        self.variations(a).saturating_sub(self.variations(b))
    }

    /// Distinct real roots in the closed interval [a, b].
    pub fn count_closed(&self, a: &Rat, b: &Rat) -> usize {
        self.count(a, b) + usize::from(self.chain[0].eval(a).is_zero())
    }
}

/// Isolating intervals, ascending, each of width at most `max_width` and
/// containing exactly one distinct real root of `p` inside `window`.
pub fn isolate_real_roots(p: &UniPoly, window: &Ival, max_width: &Rat) -> Result<Vec<Ival>> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if !max_width.is_positive() {
        return Err(Error::Invalid("max_width must be positive".into()));
    }
    let sturm = Sturm::new(p);
    let q = sturm.base().clone();
    let mut out = Vec::new();
    let (a, b) = (window.lo().clone(), window.hi().clone());
    if q.eval(&a).is_zero() {
        out.push(Ival::point(a.clone()));
    }
    let mut stack = vec![(a, b)];
    let mut found = Vec::new();
    while let Some((lo, hi)) = stack.pop() {
        let n = sturm.count(&lo, &hi);
        if n == 0 {
            continue;
        }
        if n == 1 {
            found.push(refine(&q, lo, hi, max_width));
            continue;
        }
        let mid = (&lo + &hi) / Rat::from_integer(2.into());
        stack.push((mid.clone(), hi));
        stack.push((lo, mid));
    }
    found.sort_by(|x, y| x.lo().cmp(y.lo()));
    out.extend(found);
    Ok(out)
}

/// Shrinks (lo, hi] holding exactly one root of the square-free `q`.
pub fn refine(q: &UniPoly, mut lo: Rat, mut hi: Rat, max_width: &Rat) -> Ival {
    let two = Rat::from_integer(2.into());
    let mut s_hi = sign_of(&q.eval(&hi));
    if s_hi == 0 {
        return Ival::point(hi);
    }
    while &(&hi - &lo) > max_width {
        let mid = (&lo + &hi) / &two;
        let s = sign_of(&q.eval(&mid));
        if s == 0 {
            return Ival::point(mid);
        }
        if s == s_hi {
            hi = mid;
            s_hi = s;
        } else {
            lo = mid;
        }
    }
    Ival::new(lo, hi)
}

/// Integer polynomial with only real roots, such as the characteristic
/// polynomial of a symmetric matrix. Descartes' rule of signs is exact for
/// these, so root counts need no Sturm chain.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RealRooted {
    coeffs: Vec<Int>,
}

impl RealRooted {
    /// Ascending coefficients; the caller vouches that all roots are real.
    pub fn new(mut coeffs: Vec<Int>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        RealRooted { coeffs }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn coeffs(&self) -> &[Int] {
        &self.coeffs
    }

    /// Roots strictly below `t` and the multiplicity of `t` itself, both
    /// counted with multiplicity.
    pub fn count_below(&self, t: &Rat) -> (usize, usize) {
        let (a, b) = (t.numer(), t.denom());
        // P(z) = b^n p((a - z) / b); its positive roots are the roots of p below t.
        let n = self.degree();
        let mut acc: Vec<Int> = Vec::with_capacity(n + 1);
        let mut bk = Int::one();
        for c in self.coeffs.iter().rev() {
            // acc <- acc * (a - z) + c b^k
            let mut next = vec![Int::zero(); acc.len() + 1];
            for (i, v) in acc.iter().enumerate() {
                next[i] += v * a;
                next[i + 1] -= v;
            }
            next[0] += c * &bk;
            acc = next;
            bk *= b;
        }
        let zeros = acc.iter().take_while(|c| c.is_zero()).count();
        let signs: Vec<bool> = acc
            .iter()
            .filter(|c| !c.is_zero())
            .map(|c| c.is_positive())
            .collect();
        (signs.windows(2).filter(|w| w[0] != w[1]).count(), zeros)
    }

    pub fn sign_at(&self, t: &Rat) -> i8 {
        let (a, b) = (t.numer(), t.denom());
        let mut acc = Int::zero();
        let mut bk = Int::one();
        for c in self.coeffs.iter().rev() {
            acc = acc * a + c * &bk;
            bk *= b;
        }
        match acc.sign() {
            num_bigint::Sign::Minus => -1,
            num_bigint::Sign::NoSign => 0,
            num_bigint::Sign::Plus => 1,
        }
    }
}

/// Convenience: all real roots of `p` to the given width.
pub fn all_real_roots(p: &UniPoly, max_width: &Rat) -> Result<Vec<Ival>> {
    let b = p.root_bound();
    isolate_real_roots(p, &Ival::new(-b.clone(), b), max_width)
}

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use super::rat::{fmt_rat, round_down, round_up, sqrt_bounds, to_f64, Rat};

/// Closed interval with exact rational endpoints.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Ival {
    lo: Rat,
    hi: Rat,
}

impl Ival {
    pub fn new(lo: Rat, hi: Rat) -> Self {
        assert!(lo <= hi, "interval endpoints out of order");
        Ival { lo, hi }
    }

    pub fn try_new(lo: Rat, hi: Rat) -> Option<Self> {
        (lo <= hi).then_some(Ival { lo, hi })
    }

    pub fn point(r: Rat) -> Self {
        Ival {
            lo: r.clone(),
            hi: r,
        }
    }

    /// Smallest interval containing both arguments.
    pub fn hull_of(a: Rat, b: Rat) -> Self {
        if a <= b {
            Ival { lo: a, hi: b }
        } else {
            Ival { lo: b, hi: a }
        }
    }

    pub fn zero() -> Self {
        Self::point(Rat::zero())
    }

    pub fn one() -> Self {
        Self::point(Rat::one())
    }

    pub fn lo(&self) -> &Rat {
        &self.lo
    }

    pub fn hi(&self) -> &Rat {
        &self.hi
    }

    pub fn width(&self) -> Rat {
        &self.hi - &self.lo
    }

    pub fn mid(&self) -> Rat {
        (&self.lo + &self.hi) / Rat::from_integer(2.into())
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains(&self, r: &Rat) -> bool {
        &self.lo <= r && r <= &self.hi
    }

    pub fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }

    pub fn excludes_zero(&self) -> bool {
        !self.contains_zero()
    }

    /// +1 / -1 when the interval lies strictly on one side of zero, 0 for the
    /// point zero, `None` otherwise.
    pub fn sign(&self) -> Option<i8> {
        if self.lo.is_positive() {
            Some(1)
        } else if self.hi.is_negative() {
            Some(-1)
        } else if self.lo.is_zero() && self.hi.is_zero() {
            Some(0)
        } else {
            None
        }
    }

    /// Largest absolute value over the interval.
    pub fn mag(&self) -> Rat {
        let a = self.lo.abs();
        let b = self.hi.abs();
        if a > b {
            a
        } else {
            b
        }
    }

    /// Smallest absolute value over the interval.
    pub fn mig(&self) -> Rat {
        if self.contains_zero() {
            Rat::zero()
        } else if self.lo.is_positive() {
            self.lo.clone()
        } else {
            -self.hi.clone()
        }
    }

    pub fn abs(&self) -> Ival {
        if !self.lo.is_negative() {
            self.clone()
        } else if !self.hi.is_positive() {
            -self
        } else {
            Ival::new(Rat::zero(), self.mag())
        }
    }

    pub fn hull(&self, other: &Ival) -> Ival {
        Ival {
            lo: self.lo.clone().min(other.lo.clone()),
            hi: self.hi.clone().max(other.hi.clone()),
        }
    }

    pub fn intersect(&self, other: &Ival) -> Option<Ival> {
        Ival::try_new(
            self.lo.clone().max(other.lo.clone()),
            self.hi.clone().min(other.hi.clone()),
        )
    }

    pub fn overlaps(&self, other: &Ival) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    pub fn subset_of(&self, other: &Ival) -> bool {
        other.lo <= self.lo && self.hi <= other.hi
    }

    pub fn sqr(&self) -> Ival {
        let a = &self.lo * &self.lo;
        let b = &self.hi * &self.hi;
        if self.contains_zero() {
            Ival::new(Rat::zero(), a.max(b))
        } else {
            Ival::hull_of(a, b)
        }
    }

    pub fn powi(&self, k: u32) -> Ival {
        match k {
            0 => Ival::one(),
            1 => self.clone(),
            _ if k.is_multiple_of(2) => self.powi(k / 2).sqr(),
            _ => {
                // Odd powers are monotone.
                Ival::new(
                    num_traits::pow(self.lo.clone(), k as usize),
                    num_traits::pow(self.hi.clone(), k as usize),
                )
            }
        }
    }

    /// Reciprocal; `None` when the interval meets zero.
    pub fn recip(&self) -> Option<Ival> {
        if self.contains_zero() {
            return None;
        }
        Some(Ival::new(self.hi.recip(), self.lo.recip()))
    }

    pub fn checked_div(&self, other: &Ival) -> Option<Ival> {
        other.recip().map(|r| self * &r)
    }

    /// Outward enclosure of the square root of the nonnegative part.
    pub fn sqrt(&self, bits: u32) -> Ival {
        let lo = if self.lo.is_positive() {
            sqrt_bounds(&self.lo, bits).0
        } else {
            Rat::zero()
        };
        let hi = if self.hi.is_positive() {
            sqrt_bounds(&self.hi, bits).1
        } else {
            Rat::zero()
        };
        Ival::new(lo, hi)
    }

    /// Rounds both endpoints outward to `bits` significant binary digits.
    pub fn round_out(&self, bits: u32) -> Ival {
        Ival {
            lo: round_down(&self.lo, bits),
            hi: round_up(&self.hi, bits),
        }
    }

    pub fn scale(&self, r: &Rat) -> Ival {
        Ival::hull_of(&self.lo * r, &self.hi * r)
    }

    pub fn to_f64_pair(&self) -> (f64, f64) {
        (to_f64(&self.lo), to_f64(&self.hi))
    }
}

impl From<Rat> for Ival {
    fn from(r: Rat) -> Self {
        Ival::point(r)
    }
}

impl fmt::Display for Ival {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_point() {
            write!(f, "[{}]", fmt_rat(&self.lo))
        } else {
            write!(f, "[{}, {}]", fmt_rat(&self.lo), fmt_rat(&self.hi))
        }
    }
}

impl Add<&Ival> for &Ival {
    type Output = Ival;
    fn add(self, o: &Ival) -> Ival {
        Ival {
            lo: &self.lo + &o.lo,
            hi: &self.hi + &o.hi,
        }
    }
}

impl Sub<&Ival> for &Ival {
    type Output = Ival;
    fn sub(self, o: &Ival) -> Ival {
        Ival {
            lo: &self.lo - &o.hi,
            hi: &self.hi - &o.lo,
        }
    }
}

impl Mul<&Ival> for &Ival {
    type Output = Ival;
    fn mul(self, o: &Ival) -> Ival {
        if self.is_point() && o.is_point() {
            return Ival::point(&self.lo * &o.lo);
        }
        let c = [
            &self.lo * &o.lo,
            &self.lo * &o.hi,
            &self.hi * &o.lo,
            &self.hi * &o.hi,
        ];
        let lo = c.iter().min().cloned().unwrap();
        let hi = c.iter().max().cloned().unwrap();
        Ival { lo, hi }
    }
}

impl Div<&Ival> for &Ival {
    type Output = Ival;
    /// Panics when the divisor meets zero; use [`Ival::checked_div`] otherwise.
    fn div(self, o: &Ival) -> Ival {
        self.checked_div(o)
            .expect("interval division by an interval containing zero")
    }
}

impl Neg for &Ival {
    type Output = Ival;
    fn neg(self) -> Ival {
        Ival {
            lo: -self.hi.clone(),
            hi: -self.lo.clone(),
        }
    }
}

impl Neg for Ival {
    type Output = Ival;
    fn neg(self) -> Ival {
        -&self
    }
}

macro_rules! owned_binop {
    ($tr:ident, $m:ident) => {
        impl $tr<Ival> for Ival {
            type Output = Ival;
            fn $m(self, o: Ival) -> Ival {
                (&self).$m(&o)
            }
        }
        impl $tr<&Ival> for Ival {
            type Output = Ival;
            fn $m(self, o: &Ival) -> Ival {
                (&self).$m(o)
            }
        }
    };
}
owned_binop!(Add, add);
owned_binop!(Sub, sub);
owned_binop!(Mul, mul);
owned_binop!(Div, div);

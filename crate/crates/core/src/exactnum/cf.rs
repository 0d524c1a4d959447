use num_integer::Integer;
use num_traits::{One, Zero};

use super::rat::{Int, Rat};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContinuedFraction {
    pub quotients: Vec<Int>,
    pub convergents: Vec<Rat>,
}

/// Canonical expansion of `r` truncated to `max_terms` partial quotients,
/// with all convergents.
pub fn continued_fraction(r: &Rat, max_terms: usize) -> ContinuedFraction {
    let mut quotients = Vec::new();
    let (mut num, mut den) = (r.numer().clone(), r.denom().clone());
    while quotients.len() < max_terms.max(1) && !den.is_zero() {
        let (q, rem) = num.div_mod_floor(&den);
        quotients.push(q);
        num = std::mem::replace(&mut den, rem);
    }
    let convergents = convergents_of(&quotients);
    ContinuedFraction {
        quotients,
        convergents,
    }
}

pub fn convergents_of(quotients: &[Int]) -> Vec<Rat> {
    let (mut h0, mut h1) = (Int::zero(), Int::one());
    let (mut k0, mut k1) = (Int::one(), Int::zero());
    quotients
        .iter()
        .map(|a| {
            let h = a * &h1 + &h0;
            let k = a * &k1 + &k0;
            h0 = std::mem::replace(&mut h1, h.clone());
            k0 = std::mem::replace(&mut k1, k.clone());
            Rat::new(h, k)
        })
        .collect()
}

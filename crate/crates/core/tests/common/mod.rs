#![allow(dead_code)]

use algcurve::{Int, Rat};
use num_traits::{One, Zero};
use proptest::prelude::*;

pub fn small_rat() -> impl Strategy<Value = Rat> {
    (-40i64..=40, 1i64..=12).prop_map(|(n, d)| Rat::new(n.into(), d.into()))
}

pub fn nonzero_rat() -> impl Strategy<Value = Rat> {
    small_rat().prop_filter("nonzero", |r| !r.is_zero())
}

pub fn rat_matrix(max: usize) -> impl Strategy<Value = Vec<Vec<Rat>>> {
    (1..=max).prop_flat_map(|n| prop::collection::vec(prop::collection::vec(small_rat(), n), n))
}

pub fn points(n: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = Vec<(Rat, Rat)>> {
    prop::collection::vec((small_rat(), small_rat()), n)
}

/// Laplace expansion along the first row.
pub fn cofactor_det(m: &[Vec<Rat>]) -> Rat {
    let n = m.len();
    if n == 0 {
        return Rat::one();
    }
    (0..n)
        .map(|j| {
            let minor: Vec<Vec<Rat>> = m[1..]
                .iter()
                .map(|r| {
                    r.iter()
                        .enumerate()
                        .filter(|(k, _)| *k != j)
                        .map(|(_, v)| v.clone())
                        .collect()
                })
                .collect();
            let t = &m[0][j] * cofactor_det(&minor);
            if j % 2 == 0 {
                t
            } else {
                -t
            }
        })
        .sum()
}

/// Rank by plain Gaussian elimination over the rationals.
pub fn rank_oracle(rows: &[Vec<Rat>]) -> usize {
    let mut a = rows.to_vec();
    let cols = a.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..a.len()).find(|&r| !a[r][c].is_zero()) else {
            continue;
        };
        a.swap(rank, p);
        let pivot_row = a[rank].clone();
        for (r, row) in a.iter_mut().enumerate() {
            if r != rank && !row[c].is_zero() {
                let f = &row[c] / &pivot_row[c];
                for (x, p) in row[c..].iter_mut().zip(&pivot_row[c..]) {
                    *x -= &f * p;
                }
            }
        }
        rank += 1;
    }
    rank
}

pub fn int(v: i64) -> Int {
    Int::from(v)
}

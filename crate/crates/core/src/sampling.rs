//! Seeded pseudo-random inputs: rational points, integer forms, invertible
//! matrices.
//!
//! Every draw comes from a ChaCha stream selected by `(seed, index)`, so a
//! sample depends only on its index and results do not change with the order
//! in which independent draws are evaluated.

use std::collections::BTreeSet;

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::poly::{monomials_of_degree, Monomial};
use crate::scalar::{int, rat, Rational};
use crate::{Form, RationalMatrix};

/// Generator for stream `stream` of `seed`.
pub fn seeded_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Rational points `p/q` with `1 <= q <= max_den` and `lo <= p/q <= hi`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PointSampler {
    pub seed: u64,
    pub arity: usize,
    pub lo: i64,
    pub hi: i64,
    pub max_den: i64,
}

impl PointSampler {
    /// Default box `[-4, 4]` with denominators up to 5 (numerators up to 20).
    pub fn new(seed: u64, arity: usize) -> Self {
        PointSampler {
            seed,
            arity,
            lo: -4,
            hi: 4,
            max_den: 5,
        }
    }

    pub fn with_box(mut self, lo: i64, hi: i64) -> Self {
        assert!(lo <= hi, "empty sampling box");
        self.lo = lo;
        self.hi = hi;
        self
    }

    pub fn with_max_den(mut self, max_den: i64) -> Self {
        assert!(max_den >= 1);
        self.max_den = max_den;
        self
    }

    /// The `index`-th point of this sampler.
    pub fn point(&self, index: u64) -> Vec<Rational> {
        let mut rng = seeded_rng(self.seed, index);
        (0..self.arity)
            .map(|_| {
                let den = rng.gen_range(1..=self.max_den);
                let num = rng.gen_range(self.lo * den..=self.hi * den);
                rat(num, den)
            })
            .collect()
    }

    /// Number of distinct coordinate values this sampler can produce.
    pub fn coordinate_support(&self) -> usize {
        let mut values = BTreeSet::new();
        for den in 1..=self.max_den {
            for num in self.lo * den..=self.hi * den {
                values.insert(rat(num, den));
            }
        }
        values.len()
    }
}

/// Homogeneous form with integer coefficients in `[-bound, bound]`, each
/// monomial present with probability `density`. Never returns zero.
pub fn random_form(rng: &mut impl Rng, arity: usize, degree: u32, bound: i64, density: f64) -> Form {
    let basis = monomials_of_degree(arity, degree);
    loop {
        let mut terms: Vec<(Monomial, Rational)> = Vec::new();
        for m in &basis {
            if rng.gen_bool(density) {
                terms.push((m.clone(), int(rng.gen_range(-bound..=bound))));
            }
        }
        let f = Form::from_terms(arity, terms);
        if !f.is_zero() {
            return f;
        }
    }
}

/// Dense random form (every coefficient drawn, zeros allowed).
pub fn random_dense_form(rng: &mut impl Rng, arity: usize, degree: u32, bound: i64) -> Form {
    random_form(rng, arity, degree, bound, 1.0)
}

/// Invertible `n x n` integer matrix with entries in `[-bound, bound]`.
pub fn random_invertible_matrix(rng: &mut impl Rng, n: usize, bound: i64) -> RationalMatrix {
    loop {
        let m = RationalMatrix::from_fn(n, n, |_, _| int(rng.gen_range(-bound..=bound)));
        if !m.determinant().expect("square").is_zero() {
            return m;
        }
    }
}

/// Small nonzero rational with numerator in `[-bound, bound]` and
/// denominator in `1..=max_den`.
pub fn random_nonzero_rational(rng: &mut impl Rng, bound: i64, max_den: i64) -> Rational {
    loop {
        let r = rat(rng.gen_range(-bound..=bound), rng.gen_range(1..=max_den));
        if !r.is_zero() {
            return r;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn points_are_reproducible_and_bounded() {
        let s = PointSampler::new(7, 3);
        assert_eq!(s.point(12), s.point(12));
        assert_ne!(s.point(12), s.point(13));
        for i in 0..200 {
            for c in s.point(i) {
                assert!(c >= int(-4) && c <= int(4));
                assert!(c.denom() <= &5.into());
            }
        }
    }

    #[test]
    fn coordinate_support_counts_distinct_values() {
        let s = PointSampler::new(0, 1).with_box(0, 1).with_max_den(2);
        // 0, 1/2, 1
        assert_eq!(s.coordinate_support(), 3);
    }

    #[test]
    fn random_forms_are_homogeneous() {
        let mut rng = seeded_rng(1, 0);
        for d in 2..6 {
            let f = random_form(&mut rng, 3, d, 5, 0.6);
            assert_eq!(f.homogeneous_degree(), Some(d));
        }
    }
}

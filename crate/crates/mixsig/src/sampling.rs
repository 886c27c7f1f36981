//! Seeded generation of random test lattices and the exhaustive brute-force
//! oracle for successive minima.
//!
//! The oracle searches the full coordinate box `|c_i| <= bound` and applies
//! the same ordering and greedy independent selection as the enumeration
//! path, so agreement is exact, not approximate.

use rand::Rng;
use rug::Integer;

use crate::real::Precision;
use crate::reduction::{candidate_order, IndependentPicker, MinimaProfile, Witness};
use crate::space::{lattice_from_integer_cols, Lattice, Signature};

/// Exhaustive successive minima over the coordinate box `|c_i| <= bound`.
pub fn brute_force_minima(lattice: &Lattice, bound: i64) -> MinimaProfile {
    let n = lattice.dim();
    let mut candidates: Vec<(Vec<Integer>, crate::real::Real)> = Vec::new();
    let mut c = vec![-bound; n];
    'outer: loop {
        // keep only canonical representatives: first nonzero coordinate > 0
        if let Some(first) = c.iter().find(|&&v| v != 0) {
            if *first > 0 {
                let coords: Vec<Integer> = c.iter().map(|&v| Integer::from(v)).collect();
                let len2 = lattice.len2_of_coords(&coords);
                candidates.push((coords, len2));
            }
        }
        for i in 0..n {
            if c[i] < bound {
                c[i] += 1;
                continue 'outer;
            }
            c[i] = -bound;
        }
        break;
    }
    candidates.sort_by(candidate_order);
    let mut picker = IndependentPicker::new();
    let mut witnesses = Vec::with_capacity(n);
    for (coords, len2) in &candidates {
        if picker.try_add(coords) {
            witnesses.push(Witness {
                coords: coords.clone(),
                vector: lattice.vector_from_coords(coords).unwrap(),
                len: len2.sqrt(),
            });
            if witnesses.len() == n {
                break;
            }
        }
    }
    assert_eq!(witnesses.len(), n, "box bound too small for independent witnesses");
    let mu = witnesses.iter().map(|w| w.len.clone()).collect();
    MinimaProfile { mu, witnesses }
}

/// Uniform signature with `r + 2s = n`.
pub fn random_signature(rng: &mut impl Rng, n: usize) -> Signature {
    let s = rng.gen_range(0..=n / 2);
    Signature::new(n - 2 * s, s).unwrap()
}

/// Random full-rank lattice with integer chart entries in `[-bound, bound]`.
pub fn random_integer_lattice(
    rng: &mut impl Rng,
    sig: Signature,
    bound: i64,
    prec: &Precision,
) -> Lattice {
    let n = sig.n();
    loop {
        let cols: Vec<Vec<i64>> = (0..n)
            .map(|_| (0..n).map(|_| rng.gen_range(-bound..=bound)).collect())
            .collect();
        let rows: Vec<Vec<Integer>> = (0..n)
            .map(|i| (0..n).map(|j| Integer::from(cols[j][i])).collect())
            .collect();
        if crate::mat::integer_det(&rows).is_zero() {
            continue;
        }
        if let Ok(l) = lattice_from_integer_cols(sig, &cols, prec) {
            return l;
        }
    }
}

use mixsig::real::Precision;
use mixsig::reduction::successive_minima;
use mixsig::sampling::{brute_force_minima, random_integer_lattice, random_signature};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::time::Instant;

fn main() {
    let prec = Precision::default();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    // 200 random 4-dim lattices: successive minima
    let t0 = Instant::now();
    let mut lattices = Vec::new();
    for _ in 0..200 {
        let sig = random_signature(&mut rng, 4);
        lattices.push(random_integer_lattice(&mut rng, sig, 5, &prec));
    }
    println!("gen: {:?}", t0.elapsed());
    let t0 = Instant::now();
    for l in &lattices {
        successive_minima(l, 10_000_000).unwrap();
    }
    println!("200x dim-4 successive_minima: {:?}", t0.elapsed());
    // brute force 3-dim
    let t0 = Instant::now();
    let sig = random_signature(&mut rng, 3);
    let l3 = random_integer_lattice(&mut rng, sig, 5, &prec);
    let prof = brute_force_minima(&l3, 10);
    println!("1x dim-3 brute force box 10: {:?} mu1={}", t0.elapsed(), prof.mu[0]);
}

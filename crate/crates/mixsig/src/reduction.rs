//! Lattice-basis reduction and enumeration: floating-point LLL with an exact
//! integer change-of-basis certificate, Fincke-Pohst enumeration with
//! Schnorr-Euchner zig-zag ordering, successive minima with witness vectors,
//! and the Hermite-constant data used by the bound machinery.

use rug::{Integer, Rational};

use crate::error::{Error, Result};
use crate::mat::integer_det;
use crate::real::{Precision, Real};
use crate::space::{Lattice, Vector};

/// Gram-Schmidt data of an ordered basis: squared orthogonal norms and the
/// `mu[i][j]` coefficients for `j < i`.
pub(crate) struct Gso {
    pub bstar2: Vec<Real>,
    pub mu: Vec<Vec<Real>>,
}

pub(crate) fn gso_of_cols(cols: &[Vec<Real>], prec: &Precision) -> Result<Gso> {
    let n = cols.len();
    let dim = cols.first().map_or(0, Vec::len);
    let mut bstar: Vec<Vec<Real>> = Vec::with_capacity(n);
    let mut bstar2 = Vec::with_capacity(n);
    let mut mu = vec![Vec::new(); n];
    for i in 0..n {
        let mut v = cols[i].clone();
        let mut row = Vec::with_capacity(i);
        for j in 0..i {
            let mut dot = prec.zero();
            for k in 0..dim {
                dot += &cols[i][k] * &bstar[j][k];
            }
            let m = &dot / &bstar2[j];
            for k in 0..dim {
                v[k] = &v[k] - &m * &bstar[j][k];
            }
            row.push(m);
        }
        let mut n2 = prec.zero();
        for k in 0..dim {
            n2 += v[k].square();
        }
        if !n2.is_positive() {
            return Err(Error::PrecisionExhausted);
        }
        mu[i] = row;
        bstar.push(v);
        bstar2.push(n2);
    }
    Ok(Gso { bstar2, mu })
}

/// An LLL-reduced basis of the same lattice, together with the unimodular
/// transformation: column `j` of `transform` holds the coordinates of the
/// new basis vector `j` in the original basis.
pub struct ReducedBasis {
    pub lattice: Lattice,
    pub transform: Vec<Vec<Integer>>,
}

impl ReducedBasis {
    /// Original-basis coordinates of a vector given in reduced-basis
    /// coordinates.
    pub fn to_original_coords(&self, x: &[i64]) -> Vec<Integer> {
        let n = self.transform.len();
        let mut out = vec![Integer::new(); n];
        for (j, col) in self.transform.iter().enumerate() {
            if x[j] == 0 {
                continue;
            }
            for (i, c) in col.iter().enumerate() {
                out[i] += c * Integer::from(x[j]);
            }
        }
        out
    }
}

/// Floating LLL with parameter `delta` in (1/4, 1). The change of basis is
/// tracked in exact integers and certified unimodular.
pub fn lll_reduce(lattice: &Lattice, delta: f64) -> Result<ReducedBasis> {
    if !(delta > 0.25 && delta < 1.0) {
        return Err(Error::NotApplicable("LLL delta must lie in (1/4, 1)".into()));
    }
    let prec = lattice.precision().clone();
    let n = lattice.dim();
    let mut cols: Vec<Vec<Real>> =
        lattice.basis().iter().map(|b| b.chart().to_vec()).collect();
    // transform columns: u[j] = original coordinates of current basis vector j
    let mut u: Vec<Vec<Integer>> = (0..n)
        .map(|j| (0..n).map(|i| Integer::from((i == j) as u32)).collect())
        .collect();
    let delta_r = prec.real(delta);
    let dim = n;

    let mut gso = gso_of_cols(&cols, &prec)?;
    let mut k = 1usize;
    let mut steps = 0u64;
    let max_steps = 100_000u64 * (n as u64 + 1);
    while k < n {
        steps += 1;
        if steps > max_steps {
            return Err(Error::PrecisionExhausted);
        }
        // size-reduce column k against previous columns
        let mut changed = false;
        for j in (0..k).rev() {
            let q = gso.mu[k][j].round_to_integer();
            if q.is_zero() {
                continue;
            }
            changed = true;
            let qr = prec.integer(&q);
            for t in 0..dim {
                cols[k][t] = &cols[k][t] - &qr * &cols[j][t];
            }
            let (uj, uk) = borrow_two(&mut u, j, k);
            for t in 0..n {
                uk[t] -= (&q * &uj[t]).complete();
            }
            gso = gso_of_cols(&cols, &prec)?;
        }
        if changed {
            gso = gso_of_cols(&cols, &prec)?;
        }
        // Lovasz condition
        let lhs = &gso.bstar2[k];
        let rhs = (&delta_r - gso.mu[k][k - 1].square()) * &gso.bstar2[k - 1];
        if *lhs >= rhs {
            k += 1;
        } else {
            cols.swap(k, k - 1);
            u.swap(k, k - 1);
            gso = gso_of_cols(&cols, &prec)?;
            k = k.max(2) - 1;
        }
    }

    // certify unimodularity exactly
    let rows: Vec<Vec<Integer>> =
        (0..n).map(|i| (0..n).map(|j| u[j][i].clone()).collect()).collect();
    let det = integer_det(&rows);
    if det.clone().abs() != 1 {
        return Err(Error::Inconsistent(format!("LLL transform has determinant {det}")));
    }

    let basis: Vec<Vector> = cols
        .into_iter()
        .map(|c| Vector::from_chart(lattice.signature(), c))
        .collect::<Result<_>>()?;
    let reduced = lattice.with_basis(basis)?;
    Ok(ReducedBasis { lattice: reduced, transform: u })
}

use rug::Complete;

fn borrow_two<T>(v: &mut [T], a: usize, b: usize) -> (&T, &mut T) {
    assert!(a < b);
    let (lo, hi) = v.split_at_mut(b);
    (&lo[a], &mut hi[0])
}

/// Enumerate all lattice points with `||B x - t|| <= radius` by the
/// Schnorr-Euchner zig-zag tree search; `target_tau` holds the GSO
/// coordinates of `t` (absent for the homogeneous problem, where the zero
/// vector is skipped). Emits reduced-basis coordinates with the accumulated
/// squared length; node count is charged against `budget`.
pub(crate) fn enumerate_ball(
    gso: &Gso,
    radius2: &Real,
    target_tau: Option<&[Real]>,
    budget: u64,
    prec: &Precision,
    emit: &mut dyn FnMut(&[i64], &Real),
) -> Result<u64> {
    let n = gso.bstar2.len();
    let mut x = vec![0i64; n];
    let mut nodes = 0u64;
    // slight inflation so boundary vectors survive rounding
    let bound = radius2 * &(prec.one() + prec.exp2(-40));
    rec_enumerate(gso, &bound, target_tau, budget, prec, &mut nodes, &mut x, n - 1, &prec.zero(), emit)?;
    Ok(nodes)
}

#[allow(clippy::too_many_arguments)]
fn rec_enumerate(
    gso: &Gso,
    bound: &Real,
    tau: Option<&[Real]>,
    budget: u64,
    prec: &Precision,
    nodes: &mut u64,
    x: &mut Vec<i64>,
    k: usize,
    partial: &Real,
    emit: &mut dyn FnMut(&[i64], &Real),
) -> Result<()> {
    let n = gso.bstar2.len();
    // center of the admissible interval at this level
    let mut center = match tau {
        Some(t) => t[k].clone(),
        None => prec.zero(),
    };
    for i in k + 1..n {
        if x[i] != 0 {
            center -= &gso.mu[i][k] * &prec.real(x[i]);
        }
    }
    let x0 = center.round_to_integer().to_i64().ok_or(Error::PrecisionExhausted)?;
    let go_up_first = center >= prec.real(x0);

    let mut lo_alive = true;
    let mut hi_alive = true;
    let mut step = 0i64;
    while lo_alive || hi_alive {
        for side in 0..2 {
            let (want_hi, cand) = if (side == 0) == go_up_first {
                (true, x0 + step)
            } else {
                (false, x0 - step)
            };
            if step == 0 && side == 1 {
                continue; // x0 visited once
            }
            if want_hi && !hi_alive {
                continue;
            }
            if !want_hi && !lo_alive {
                continue;
            }
            *nodes += 1;
            if *nodes > budget {
                return Err(Error::EnumerationBudget { budget });
            }
            let diff = prec.real(cand) - &center;
            let contrib = &gso.bstar2[k] * &diff.square();
            let total = partial + &contrib;
            if total > *bound {
                if want_hi {
                    hi_alive = false;
                } else {
                    lo_alive = false;
                }
                if step == 0 {
                    // the center itself fails: both directions are dead
                    return Ok(());
                }
                continue;
            }
            x[k] = cand;
            if k == 0 {
                let all_zero = tau.is_none() && x.iter().all(|&c| c == 0);
                if !all_zero {
                    emit(x, &total);
                }
            } else {
                rec_enumerate(gso, bound, tau, budget, prec, nodes, x, k - 1, &total, emit)?;
            }
        }
        step += 1;
    }
    x[k] = 0;
    Ok(())
}

/// A successive-minimum witness: integer coordinates in the lattice basis,
/// the embedded vector, and its length.
#[derive(Clone, Debug)]
pub struct Witness {
    pub coords: Vec<Integer>,
    pub vector: Vector,
    pub len: Real,
}

/// The successive minima `mu_1 <= ... <= mu_n` with independent witnesses.
#[derive(Clone, Debug)]
pub struct MinimaProfile {
    pub mu: Vec<Real>,
    pub witnesses: Vec<Witness>,
}

impl MinimaProfile {
    pub fn mu_first(&self) -> &Real {
        &self.mu[0]
    }

    pub fn mu_last(&self) -> &Real {
        self.mu.last().unwrap()
    }
}

/// Candidate ordering shared with the exhaustive test oracle: by squared
/// length, ties broken lexicographically on the integer coordinates.
pub fn candidate_order(a: &(Vec<Integer>, Real), b: &(Vec<Integer>, Real)) -> std::cmp::Ordering {
    a.1.cmp_total(&b.1).then_with(|| a.0.cmp(&b.0))
}

/// Canonical sign: the first nonzero coordinate is positive.
pub fn canonicalize_sign(coords: &mut [Integer]) {
    for c in coords.iter() {
        match c.cmp0() {
            std::cmp::Ordering::Greater => return,
            std::cmp::Ordering::Less => break,
            std::cmp::Ordering::Equal => continue,
        }
    }
    for c in coords.iter_mut() {
        *c = (-&*c).complete();
    }
}

/// Greedy selection of independent vectors from a length-sorted candidate
/// list; exact rank bookkeeping over the rationals.
pub(crate) struct IndependentPicker {
    echelon: Vec<Vec<Rational>>,
}

impl IndependentPicker {
    pub fn new() -> Self {
        IndependentPicker { echelon: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.echelon.len()
    }

    /// Try to add a vector; returns true when it is independent of the
    /// current span.
    pub fn try_add(&mut self, coords: &[Integer]) -> bool {
        let mut row: Vec<Rational> = coords.iter().map(Rational::from).collect();
        for e in &self.echelon {
            let lead = e.iter().position(|q| *q != 0).unwrap();
            if row[lead] != 0 {
                let f = (&row[lead] / &e[lead]).complete();
                for (r, ev) in row.iter_mut().zip(e) {
                    *r -= (&f * ev).complete();
                }
            }
        }
        if row.iter().all(|q| *q == 0) {
            return false;
        }
        self.echelon.push(row);
        true
    }
}

/// Exact successive minima by Fincke-Pohst enumeration with the radius grown
/// from the first LLL vector, doubling only when fewer than `n` independent
/// vectors are found.
pub fn successive_minima(lattice: &Lattice, enum_budget: u64) -> Result<MinimaProfile> {
    let prec = lattice.precision().clone();
    let n = lattice.dim();
    let red = lll_reduce(lattice, 0.99)?;
    let gso = gso_of_cols(
        &(0..n).map(|j| red.lattice.chart_matrix().col(j)).collect::<Vec<_>>(),
        &prec,
    )?;
    let mut radius2 = red.lattice.gram().at(0, 0).clone();

    for _attempt in 0..64 {
        let mut found: Vec<(Vec<Integer>, Real)> = Vec::new();
        let mut seen = std::collections::BTreeSet::new();
        enumerate_ball(&gso, &radius2, None, enum_budget, &prec, &mut |x, _len2| {
            let mut coords = red.to_original_coords(x);
            canonicalize_sign(&mut coords);
            if seen.insert(coords.clone()) {
                let len2 = lattice.len2_of_coords(&coords);
                found.push((coords, len2));
            }
        })?;
        found.sort_by(candidate_order);
        let mut picker = IndependentPicker::new();
        let mut witnesses = Vec::with_capacity(n);
        for (coords, len2) in &found {
            if picker.try_add(coords) {
                witnesses.push(Witness {
                    coords: coords.clone(),
                    vector: lattice.vector_from_coords(coords)?,
                    len: len2.sqrt(),
                });
                if witnesses.len() == n {
                    break;
                }
            }
        }
        if witnesses.len() == n {
            let mu = witnesses.iter().map(|w| w.len.clone()).collect();
            return Ok(MinimaProfile { mu, witnesses });
        }
        radius2 = radius2 * prec.real(4);
    }
    Err(Error::PrecisionExhausted)
}

/// Exact values of `gamma_n^n` for dimensions 1 through 8.
const GAMMA_POW_N: [(u32, u32); 8] =
    [(1, 1), (4, 3), (2, 1), (4, 1), (8, 1), (64, 3), (64, 1), (256, 1)];

/// `gamma_n^n` as an exact rational, known for `n <= 8`.
pub fn hermite_gamma_pow_n(n: usize) -> Option<Rational> {
    GAMMA_POW_N.get(n - 1).map(|&(p, q)| Rational::from((p, q)))
}

/// The Hermite constant `gamma_n`: exact for `n <= 8`, the proven upper
/// estimate `n/2` (valid for `n >= 4`) beyond that.
pub fn hermite_gamma(n: usize, prec: &Precision) -> Result<(Real, bool)> {
    if n == 0 {
        return Err(Error::NotApplicable("Hermite constant needs n >= 1".into()));
    }
    match hermite_gamma_pow_n(n) {
        Some(g) => Ok((prec.rational(&g).root(n as u32), true)),
        None => Ok((prec.real(n) / prec.real(2), false)),
    }
}

/// Evaluation of the Minkowski successive-minima inequality
/// `mu_1 ... mu_t <= gamma_n^{t/2} det^{t/n}` at one `t`.
#[derive(Clone, Debug)]
pub struct MinkowskiCheck {
    pub t: usize,
    pub lhs: Real,
    pub rhs: Real,
    pub gamma_exact: bool,
    pub holds: bool,
}

pub fn verify_minkowski_bound(
    lattice: &Lattice,
    profile: &MinimaProfile,
    t: usize,
) -> Result<MinkowskiCheck> {
    let n = lattice.dim();
    if t == 0 || t > n {
        return Err(Error::NotApplicable(format!("t = {t} out of range 1..={n}")));
    }
    let prec = lattice.precision();
    let mut lhs = prec.one();
    for m in &profile.mu[..t] {
        lhs = &lhs * m;
    }
    let (gamma, gamma_exact) = hermite_gamma(n, prec)?;
    let rhs = gamma.pow_rational(&Rational::from((t as u32, 2)))
        * lattice.det().pow_rational(&Rational::from((t as u32, n as u32)));
    let holds = lhs <= &rhs * &(prec.one() + prec.tol());
    Ok(MinkowskiCheck { t, lhs, rhs, gamma_exact, holds })
}

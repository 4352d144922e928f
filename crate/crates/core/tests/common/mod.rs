//! Random instance generators and independent oracles shared by the
//! integration tests.

#![allow(dead_code)]

use hybzono::lp::LinearProgram;
use hybzono::oracle::CzSupport;
use hybzono::{ConstrainedZonotope, FactorForm, HybridZonotope, LeafOptions, Mat, Vector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn uniform_mat(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> Mat {
    Mat::from_fn(rows, cols, |_, _| rng.gen_range(-1.0..1.0))
}

pub fn uniform_vec(rng: &mut ChaCha8Rng, len: usize, scale: f64) -> Vector {
    Vector::from_fn(len, |_, _| rng.gen_range(-scale..scale))
}

pub fn random_form(rng: &mut ChaCha8Rng) -> FactorForm {
    if rng.gen_bool(0.5) {
        FactorForm::Pm1
    } else {
        FactorForm::Zo
    }
}

/// Random hybrid zonotope that is nonempty by construction: the right-hand
/// side is `A ξ0` for a factor point `ξ0` drawn from the factor domain.
pub fn random_hz(
    rng: &mut ChaCha8Rng,
    n: usize,
    n_g: usize,
    n_b: usize,
    n_c: usize,
    form: FactorForm,
) -> HybridZonotope {
    let (lo, hi) = form.bounds();
    let gc = uniform_mat(rng, n, n_g);
    let gb = uniform_mat(rng, n, n_b);
    let c = uniform_vec(rng, n, 1.0);
    let ac = uniform_mat(rng, n_c, n_g);
    let ab = uniform_mat(rng, n_c, n_b);
    let xc = Vector::from_fn(n_g, |_, _| rng.gen_range(lo..hi));
    let xb = Vector::from_fn(n_b, |_, _| if rng.gen_bool(0.5) { lo } else { hi });
    let b = &ac * xc + &ab * xb;
    HybridZonotope::new(gc, gb, c, ac, ab, b, form).unwrap()
}

pub fn random_cz(rng: &mut ChaCha8Rng, n: usize, n_g: usize, n_c: usize, form: FactorForm) -> HybridZonotope {
    random_hz(rng, n, n_g, 0, n_c, form)
}

pub fn random_zonotope(rng: &mut ChaCha8Rng, n: usize, n_g: usize, form: FactorForm) -> HybridZonotope {
    random_hz(rng, n, n_g, 0, 0, form)
}

/// Draws points of a set as convex combinations of support points of one
/// feasible leaf at a time.
pub struct MemberSampler {
    leaves: Vec<CzSupport>,
    dim: usize,
}

impl MemberSampler {
    pub fn new(h: &HybridZonotope) -> Self {
        let leaves = h
            .leaves(&LeafOptions {
                prune_infeasible: true,
                ..LeafOptions::default()
            })
            .unwrap()
            .into_iter()
            .map(|(_, leaf)| CzSupport::new(&leaf).unwrap())
            .collect();
        Self { leaves, dim: h.dim() }
    }

    pub fn is_empty(&self) -> bool {
        self.leaves.is_empty()
    }

    pub fn sample(&mut self, rng: &mut ChaCha8Rng) -> Vec<f64> {
        let k = rng.gen_range(0..self.leaves.len());
        let mut acc = vec![0.0; self.dim];
        let mut weights: Vec<f64> = (0..3).map(|_| rng.gen_range(0.05..1.0)).collect();
        let total: f64 = weights.iter().sum();
        weights.iter_mut().for_each(|w| *w /= total);
        for w in weights {
            let u: Vec<f64> = (0..self.dim).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let (_, p) = self.leaves[k].support_point(&u).unwrap().unwrap();
            for (a, v) in acc.iter_mut().zip(p) {
                *a += w * v;
            }
        }
        acc
    }
}

/// Uniform point in the box `[lo - pad, hi + pad]`.
pub fn box_point(rng: &mut ChaCha8Rng, lo: &[f64], hi: &[f64], pad: f64) -> Vec<f64> {
    lo.iter()
        .zip(hi)
        .map(|(l, h)| rng.gen_range(l - pad..=h + pad))
        .collect()
}

/// Membership by linear algebra alone: for every leaf, solve
/// `[Gc; Ac] ξ = [p - c'; b']` in the least-squares sense and accept when the
/// residual vanishes and `ξ` lies in the box. Requires `[Gc; Ac]` to have full
/// column rank so the solution is unique.
pub fn algebraic_member(h: &HybridZonotope, p: &[f64], tol: f64) -> bool {
    let n = h.dim();
    let n_g = h.n_g();
    let stacked = hybzono::linalg::vstack(n_g, &[h.gc(), h.ac()]);
    let svd = stacked.clone().svd(true, true);
    let smallest = svd.singular_values.iter().copied().fold(f64::INFINITY, f64::min);
    assert!(n_g == 0 || smallest > 1e-6, "algebraic oracle needs full column rank");
    let (lo, hi) = h.form().bounds();
    h.leaves(&LeafOptions::default()).unwrap().into_iter().any(|(_, leaf)| {
        let mut rhs = Vector::zeros(n + h.n_c());
        for i in 0..n {
            rhs[i] = p[i] - leaf.c()[i];
        }
        for i in 0..h.n_c() {
            rhs[n + i] = leaf.b()[i];
        }
        let xi = if n_g == 0 {
            Vector::zeros(0)
        } else {
            svd.solve(&rhs, 1e-12).unwrap()
        };
        let residual = (&stacked * &xi - &rhs).amax();
        residual <= tol && xi.iter().all(|v| *v >= lo - tol && *v <= hi + tol)
    })
}

/// Exact LP optimum by enumerating basic solutions: every choice of `m`
/// basic columns with the others at a bound. `None` when infeasible.
/// Requires `A` to have full row rank.
pub fn vertex_enumeration(p: &LinearProgram) -> Option<f64> {
    let (m, n) = p.a_eq.shape();
    let mut best: Option<f64> = None;
    for basic in combinations(n, m) {
        let bmat = Mat::from_fn(m, m, |i, k| p.a_eq[(i, basic[k])]);
        let lu = bmat.lu();
        if m > 0 && lu.determinant().abs() < 1e-10 {
            continue;
        }
        let free: Vec<usize> = (0..n).filter(|j| !basic.contains(j)).collect();
        for mask in 0u64..(1u64 << free.len()) {
            let mut x = vec![0.0; n];
            for (t, &j) in free.iter().enumerate() {
                x[j] = if mask >> t & 1 == 1 { p.upper[j] } else { p.lower[j] };
            }
            let mut rhs = Vector::from_column_slice(&p.b_eq);
            for &j in &free {
                for i in 0..m {
                    rhs[i] -= p.a_eq[(i, j)] * x[j];
                }
            }
            if m > 0 {
                let xb = lu.solve(&rhs).unwrap();
                for (k, &j) in basic.iter().enumerate() {
                    x[j] = xb[k];
                }
            }
            let inside = (0..n).all(|j| x[j] >= p.lower[j] - 1e-9 && x[j] <= p.upper[j] + 1e-9);
            if inside {
                let v: f64 = x.iter().zip(&p.objective).map(|(a, b)| a * b).sum();
                best = Some(best.map_or(v, |b: f64| b.min(v)));
            }
        }
    }
    best
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for j in start..n {
            cur.push(j);
            rec(j + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// Rejection sampling on the affine slice: the last `n - m` variables are
/// drawn uniformly from their box, the first `m` are solved for, and the
/// sample is kept when it lands in the box. Returns the best objective seen.
pub fn rejection_sample(p: &LinearProgram, samples: usize, rng: &mut ChaCha8Rng) -> Option<f64> {
    let (m, n) = p.a_eq.shape();
    let lead = Mat::from_fn(m, m, |i, k| p.a_eq[(i, k)]);
    let lu = lead.lu();
    let mut best: Option<f64> = None;
    for _ in 0..samples {
        let mut x = vec![0.0; n];
        for j in m..n {
            x[j] = rng.gen_range(p.lower[j]..=p.upper[j]);
        }
        let mut rhs = Vector::from_column_slice(&p.b_eq);
        for j in m..n {
            for i in 0..m {
                rhs[i] -= p.a_eq[(i, j)] * x[j];
            }
        }
        if m > 0 {
            let Some(xb) = lu.solve(&rhs) else { return None };
            for k in 0..m {
                x[k] = xb[k];
            }
        }
        if (0..m).all(|j| x[j] >= p.lower[j] && x[j] <= p.upper[j]) {
            let v: f64 = x.iter().zip(&p.objective).map(|(a, b)| a * b).sum();
            best = Some(best.map_or(v, |b: f64| b.min(v)));
        }
    }
    best
}

/// Random bounded LP with full-row-rank equalities. The right-hand side is
/// `A x` for `x` drawn from a box enlarged by half its width, so roughly
/// half of the instances are infeasible.
pub fn random_lp(rng: &mut ChaCha8Rng, n: usize, m: usize) -> LinearProgram {
    let lower: Vec<f64> = (0..n).map(|_| rng.gen_range(-2.0..0.0)).collect();
    let upper: Vec<f64> = lower.iter().map(|l| l + rng.gen_range(0.5..2.0)).collect();
    let a_eq = uniform_mat(rng, m, n);
    let x: Vec<f64> = lower
        .iter()
        .zip(&upper)
        .map(|(l, u)| {
            let w = u - l;
            rng.gen_range(l - 0.5 * w..u + 0.5 * w)
        })
        .collect();
    let b_eq = (&a_eq * Vector::from_vec(x)).iter().copied().collect();
    let objective = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
    LinearProgram {
        objective,
        a_eq,
        b_eq,
        lower,
        upper,
    }
}

/// Largest support gap between two sets over the given directions.
pub fn max_abs_gap(a: &[Option<f64>], b: &[Option<f64>]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| match (x, y) {
            (Some(x), Some(y)) => (x - y).abs(),
            (None, None) => 0.0,
            _ => f64::INFINITY,
        })
        .fold(0.0, f64::max)
}

/// Support of `conv(S)` as the maximum of per-leaf supports over all leaves.
pub fn leafwise_support(h: &HybridZonotope, dirs: &[Vec<f64>]) -> Vec<Option<f64>> {
    let mut out = vec![None; dirs.len()];
    for (_, leaf) in h.leaves(&LeafOptions::default()).unwrap() {
        let vals = hybzono::oracle::cz_support_many(&leaf, dirs).unwrap();
        for (slot, v) in out.iter_mut().zip(vals) {
            if let Some(v) = v {
                *slot = Some(slot.map_or(v, |s: f64| s.max(v)));
            }
        }
    }
    out
}

pub fn as_cz(h: &HybridZonotope) -> ConstrainedZonotope {
    h.to_constrained().expect("no binary factors")
}

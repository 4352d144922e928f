//! Set operations on hybrid zonotopes with exact complexity bookkeeping.
//!
//! Minkowski sum, affine map, Cartesian product and the point/N-ary unions
//! below preserve sharpness: if every input's relaxation equals its convex
//! hull, so does the output's. Generalized intersection does not in general,
//! but relaxation commutes with it at the matrix level.

use crate::error::{check_dim, Error, Result};
use crate::linalg::{block_diag, hstack, vcat, vstack, Mat, Vector};
use crate::oracle::CzSupport;
use crate::set::{ConstrainedZonotope, FactorForm, HybridZonotope};

/// Safety margin added to the computed upper bound in
/// [`halfspace_intersection`].
pub const HALFSPACE_MARGIN: f64 = 1e-6;

fn same_form(a: &HybridZonotope, b: &HybridZonotope) -> Result<()> {
    if a.form() == b.form() {
        Ok(())
    } else {
        Err(Error::FormMismatch {
            left: a.form(),
            right: b.form(),
        })
    }
}

fn build(
    gc: Mat,
    gb: Mat,
    c: Vector,
    ac: Mat,
    ab: Mat,
    b: Vector,
    form: FactorForm,
) -> HybridZonotope {
    HybridZonotope::new(gc, gb, c, ac, ab, b, form).expect("block shapes agree by construction")
}

/// `Z1 ⊕ Z2`: generators side by side, centers added, constraints block-diagonal.
pub fn minkowski_sum(z1: &HybridZonotope, z2: &HybridZonotope) -> Result<HybridZonotope> {
    check_dim("minkowski_sum ambient dimension", z1.dim(), z2.dim())?;
    same_form(z1, z2)?;
    let n = z1.dim();
    Ok(build(
        hstack(n, &[z1.gc(), z2.gc()]),
        hstack(n, &[z1.gb(), z2.gb()]),
        z1.c() + z2.c(),
        block_diag(z1.ac(), z2.ac()),
        block_diag(z1.ab(), z2.ab()),
        vcat(z1.b(), z2.b()),
        z1.form(),
    ))
}

/// `R Z + s`; constraints are untouched.
pub fn affine_map(h: &HybridZonotope, r: &Mat, s: &Vector) -> Result<HybridZonotope> {
    check_dim("affine_map: columns of R vs ambient dimension", h.dim(), r.ncols())?;
    check_dim("affine_map: length of s vs rows of R", r.nrows(), s.len())?;
    Ok(build(
        r * h.gc(),
        r * h.gb(),
        r * h.c() + s,
        h.ac().clone(),
        h.ab().clone(),
        h.b().clone(),
        h.form(),
    ))
}

/// `R Z` without an offset.
pub fn linear_map(h: &HybridZonotope, r: &Mat) -> Result<HybridZonotope> {
    affine_map(h, r, &Vector::zeros(r.nrows()))
}

/// `Z1 × Z2` with every block placed block-diagonally.
pub fn cartesian_product(z1: &HybridZonotope, z2: &HybridZonotope) -> Result<HybridZonotope> {
    same_form(z1, z2)?;
    Ok(build(
        block_diag(z1.gc(), z2.gc()),
        block_diag(z1.gb(), z2.gb()),
        vcat(z1.c(), z2.c()),
        block_diag(z1.ac(), z2.ac()),
        block_diag(z1.ab(), z2.ab()),
        vcat(z1.b(), z2.b()),
        z1.form(),
    ))
}

/// `{x ∈ X | R x ∈ Z}`.
///
/// Keeps X's generators, appends Z's factors with zero generators, stacks
/// both constraint systems and adds the coupling rows
/// `R (Gx ξx + cx) = Gz ξz + cz`.
pub fn generalized_intersection(
    x: &HybridZonotope,
    z: &HybridZonotope,
    r: &Mat,
) -> Result<HybridZonotope> {
    check_dim("generalized_intersection: columns of R vs dim of X", x.dim(), r.ncols())?;
    check_dim("generalized_intersection: rows of R vs dim of Z", z.dim(), r.nrows())?;
    same_form(x, z)?;
    let n = x.dim();
    let nz = z.dim();
    let gc = hstack(n, &[x.gc(), &Mat::zeros(n, z.n_g())]);
    let gb = hstack(n, &[x.gb(), &Mat::zeros(n, z.n_b())]);
    let ac_pair = block_diag(x.ac(), z.ac());
    let ab_pair = block_diag(x.ab(), z.ab());
    let ac_couple = hstack(nz, &[&(r * x.gc()), &(-z.gc())]);
    let ab_couple = hstack(nz, &[&(r * x.gb()), &(-z.gb())]);
    let ac = vstack(x.n_g() + z.n_g(), &[&ac_pair, &ac_couple]);
    let ab = vstack(x.n_b() + z.n_b(), &[&ab_pair, &ab_couple]);
    let b = vcat(&vcat(x.b(), z.b()), &(z.c() - r * x.c()));
    Ok(build(gc, gb, x.c().clone(), ac, ab, b, x.form()))
}

/// `H ∩ {x | aᵀx ≥ k}`, as a generalized intersection with the interval
/// `[k, max(k, M + margin)]` where `M` bounds `aᵀx` over the relaxation.
pub fn halfspace_intersection(h: &HybridZonotope, a: &[f64], k: f64) -> Result<HybridZonotope> {
    check_dim("halfspace normal length", h.dim(), a.len())?;
    if !k.is_finite() || a.iter().any(|v| !v.is_finite()) {
        return Err(Error::UnboundedDirection);
    }
    let relax = convex_relaxation(h);
    let upper = match CzSupport::new(&relax)?.support(a)? {
        Some(m) if !m.is_finite() => return Err(Error::UnboundedDirection),
        Some(m) => (m + HALFSPACE_MARGIN).max(k),
        // Empty input: any interval keeps the result empty.
        None => k,
    };
    let interval = ConstrainedZonotope::interval_box(&[k], &[upper], h.form())?.to_hybrid();
    let r = Mat::from_row_slice(1, a.len(), a);
    generalized_intersection(h, &interval, &r)
}

/// `Z ∪ {x}` for a set in 01 form (other forms are converted first).
///
/// With `G = [Gc Gb]` and `A = [Ac Ab]` the new factors are slacks
/// `s ∈ [0,1]^(n_g+n_b)` and one binary `σ`:
/// `z = G ξ + (c - x) σ + x`, `A ξ = σ b`, `ξ + s = σ`.
/// Complexity `(2n_g + n_b, n_b + 1, n_g + n_b + n_c)`.
pub fn union_with_point(z: &HybridZonotope, x: &[f64]) -> Result<HybridZonotope> {
    check_dim("union_with_point: point length", z.dim(), x.len())?;
    let z = z.convert_form(FactorForm::Zo);
    let n = z.dim();
    let (n_g, n_b, n_c) = (z.n_g(), z.n_b(), z.n_c());
    let nf = n_g + n_b;
    let xv = Vector::from_column_slice(x);

    let gc = hstack(n, &[z.gc(), &Mat::zeros(n, nf)]);
    let shift = Mat::from_column_slice(n, 1, (z.c() - &xv).as_slice());
    let gb = hstack(n, &[z.gb(), &shift]);

    let mut selector_c = Mat::zeros(nf, n_g);
    for i in 0..n_g {
        selector_c[(i, i)] = 1.0;
    }
    let ac = vstack(
        2 * n_g + n_b,
        &[
            &hstack(n_c, &[z.ac(), &Mat::zeros(n_c, nf)]),
            &hstack(nf, &[&selector_c, &Mat::identity(nf, nf)]),
        ],
    );

    let mut selector_b = Mat::zeros(nf, n_b);
    for i in 0..n_b {
        selector_b[(n_g + i, i)] = 1.0;
    }
    let neg_b = Mat::from_column_slice(n_c, 1, (-z.b()).as_slice());
    let ab = vstack(
        n_b + 1,
        &[
            &hstack(n_c, &[z.ab(), &neg_b]),
            &hstack(nf, &[&selector_b, &Mat::from_element(nf, 1, -1.0)]),
        ],
    );
    let b = Vector::zeros(n_c + nf);
    Ok(build(gc, gb, xv, ac, ab, b, FactorForm::Zo))
}

/// `⋃ Z_i = [I 0]((⊕ U_i) ∩_[0 1] {1})` with `U_i = (Z_i × {1}) ∪ {0}`.
///
/// Inputs are converted to 01 form and the result is in 01 form. Complexity
/// `(Σ(2n_g,i + n_b,i), N + Σ n_b,i, 1 + Σ(n_g,i + n_b,i + n_c,i))`.
/// Empty inputs are accepted; they contribute a branch with no feasible leaf.
pub fn union(sets: &[HybridZonotope]) -> Result<HybridZonotope> {
    let first = sets.first().ok_or(Error::EmptyList)?;
    let n = first.dim();
    for z in sets {
        check_dim("union ambient dimension", n, z.dim())?;
    }
    let one = ConstrainedZonotope::point(&[1.0], FactorForm::Zo).to_hybrid();
    let origin = vec![0.0; n + 1];
    let mut sum: Option<HybridZonotope> = None;
    for z in sets {
        let lifted = cartesian_product(&z.convert_form(FactorForm::Zo), &one)?;
        let u = union_with_point(&lifted, &origin)?;
        sum = Some(match sum {
            None => u,
            Some(acc) => minkowski_sum(&acc, &u)?,
        });
    }
    let sum = sum.expect("nonempty list");
    let mut last = Mat::zeros(1, n + 1);
    last[(0, n)] = 1.0;
    let cut = generalized_intersection(&sum, &one, &last)?;
    let project = hstack(n, &[&Mat::identity(n, n), &Mat::zeros(n, 1)]);
    linear_map(&cut, &project)
}

/// `relax(Z) = ⟨[Gc Gb], c, [Ac Ab], b⟩`; binary factors range over the
/// continuous box of the same form.
pub fn convex_relaxation(h: &HybridZonotope) -> ConstrainedZonotope {
    ConstrainedZonotope::new(
        h.generators(),
        h.c().clone(),
        h.constraints(),
        h.b().clone(),
        h.form(),
    )
    .expect("shapes agree by construction")
}

//! Constrained and hybrid zonotope representations.
//!
//! A constrained zonotope is `{G ξ + c | A ξ = b, ξ ∈ box}` and a hybrid
//! zonotope is `{Gc ξc + Gb ξb + c | Ac ξc + Ab ξb = b}` with continuous
//! factors `ξc` in a box and binary factors `ξb`. The box and the binary
//! domain depend on the [`FactorForm`]: `[-1, 1]` / `{-1, 1}` for
//! [`FactorForm::Pm1`] and `[0, 1]` / `{0, 1}` for [`FactorForm::Zo`].

use serde::{Deserialize, Serialize};

use crate::error::{check_dim, Error, Result};
use crate::linalg::{hstack, Mat, Vector};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FactorForm {
    /// Continuous factors in `[-1, 1]`, binary factors in `{-1, 1}`.
    #[serde(rename = "pm1")]
    Pm1,
    /// Continuous factors in `[0, 1]`, binary factors in `{0, 1}`.
    #[serde(rename = "01")]
    Zo,
}

impl FactorForm {
    /// Interval of a continuous factor.
    pub fn bounds(self) -> (f64, f64) {
        match self {
            FactorForm::Pm1 => (-1.0, 1.0),
            FactorForm::Zo => (0.0, 1.0),
        }
    }

    pub fn low(self) -> f64 {
        self.bounds().0
    }

    pub fn high(self) -> f64 {
        self.bounds().1
    }

    pub fn name(self) -> &'static str {
        match self {
            FactorForm::Pm1 => "pm1",
            FactorForm::Zo => "01",
        }
    }
}

/// `(n_g, n_b, n_c)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct ComplexityTuple {
    pub n_g: usize,
    pub n_b: usize,
    pub n_c: usize,
}

impl ComplexityTuple {
    pub const fn new(n_g: usize, n_b: usize, n_c: usize) -> Self {
        Self { n_g, n_b, n_c }
    }
}

impl std::fmt::Display for ComplexityTuple {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {}, {})", self.n_g, self.n_b, self.n_c)
    }
}

/// One value of the binary factor vector, taken from the active binary domain.
#[derive(Debug, Clone, PartialEq)]
pub struct BinaryAssignment {
    pub bits: Vec<f64>,
}

impl BinaryAssignment {
    /// Assignment number `index` in counting order: bit `i` of `index`
    /// selects the high value of factor `i`.
    pub fn from_index(index: u64, n_b: usize, form: FactorForm) -> Self {
        let bits = (0..n_b)
            .map(|i| {
                if (index >> i) & 1 == 1 {
                    form.high()
                } else {
                    form.low()
                }
            })
            .collect();
        Self { bits }
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn as_vector(&self) -> Vector {
        Vector::from_column_slice(&self.bits)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConstrainedZonotope {
    g: Mat,
    c: Vector,
    a: Mat,
    b: Vector,
    form: FactorForm,
}

impl ConstrainedZonotope {
    pub fn new(g: Mat, c: Vector, a: Mat, b: Vector, form: FactorForm) -> Result<Self> {
        check_dim("constrained zonotope: rows of G vs length of c", c.len(), g.nrows())?;
        check_dim("constrained zonotope: columns of A vs columns of G", g.ncols(), a.ncols())?;
        check_dim("constrained zonotope: rows of A vs length of b", b.len(), a.nrows())?;
        Ok(Self { g, c, a, b, form })
    }

    /// Zonotope `{G ξ + c}` without constraints.
    pub fn zonotope(g: Mat, c: Vector, form: FactorForm) -> Result<Self> {
        let n_g = g.ncols();
        Self::new(g, c, Mat::zeros(0, n_g), Vector::zeros(0), form)
    }

    /// Axis-aligned box `[lo, hi]`.
    pub fn interval_box(lo: &[f64], hi: &[f64], form: FactorForm) -> Result<Self> {
        check_dim("box bounds", lo.len(), hi.len())?;
        let n = lo.len();
        let mut g = Mat::zeros(n, n);
        let mut c = Vector::zeros(n);
        for i in 0..n {
            if lo[i] > hi[i] {
                return Err(Error::EmptyInterval { lo: lo[i], hi: hi[i] });
            }
            match form {
                FactorForm::Pm1 => {
                    g[(i, i)] = 0.5 * (hi[i] - lo[i]);
                    c[i] = 0.5 * (hi[i] + lo[i]);
                }
                FactorForm::Zo => {
                    g[(i, i)] = hi[i] - lo[i];
                    c[i] = lo[i];
                }
            }
        }
        Self::zonotope(g, c, form)
    }

    /// The singleton `{p}`.
    pub fn point(p: &[f64], form: FactorForm) -> Self {
        Self::zonotope(Mat::zeros(p.len(), 0), Vector::from_column_slice(p), form)
            .expect("shapes agree by construction")
    }

    pub fn g(&self) -> &Mat {
        &self.g
    }
    pub fn c(&self) -> &Vector {
        &self.c
    }
    pub fn a(&self) -> &Mat {
        &self.a
    }
    pub fn b(&self) -> &Vector {
        &self.b
    }
    pub fn form(&self) -> FactorForm {
        self.form
    }
    pub fn dim(&self) -> usize {
        self.c.len()
    }
    pub fn n_g(&self) -> usize {
        self.g.ncols()
    }
    pub fn n_c(&self) -> usize {
        self.a.nrows()
    }

    pub fn complexity(&self) -> ComplexityTuple {
        ComplexityTuple::new(self.n_g(), 0, self.n_c())
    }

    pub fn to_hybrid(&self) -> HybridZonotope {
        HybridZonotope::from(self.clone())
    }

    pub fn convert_form(&self, target: FactorForm) -> Self {
        self.to_hybrid()
            .convert_form(target)
            .to_constrained()
            .expect("no binary factors")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct HybridZonotope {
    gc: Mat,
    gb: Mat,
    c: Vector,
    ac: Mat,
    ab: Mat,
    b: Vector,
    form: FactorForm,
}

impl HybridZonotope {
    pub fn new(
        gc: Mat,
        gb: Mat,
        c: Vector,
        ac: Mat,
        ab: Mat,
        b: Vector,
        form: FactorForm,
    ) -> Result<Self> {
        check_dim("hybrid zonotope: rows of Gc vs length of c", c.len(), gc.nrows())?;
        check_dim("hybrid zonotope: rows of Gb vs length of c", c.len(), gb.nrows())?;
        check_dim("hybrid zonotope: rows of Ac vs length of b", b.len(), ac.nrows())?;
        check_dim("hybrid zonotope: rows of Ab vs length of b", b.len(), ab.nrows())?;
        check_dim("hybrid zonotope: columns of Ac vs columns of Gc", gc.ncols(), ac.ncols())?;
        check_dim("hybrid zonotope: columns of Ab vs columns of Gb", gb.ncols(), ab.ncols())?;
        Ok(Self {
            gc,
            gb,
            c,
            ac,
            ab,
            b,
            form,
        })
    }

    pub fn gc(&self) -> &Mat {
        &self.gc
    }
    pub fn gb(&self) -> &Mat {
        &self.gb
    }
    pub fn c(&self) -> &Vector {
        &self.c
    }
    pub fn ac(&self) -> &Mat {
        &self.ac
    }
    pub fn ab(&self) -> &Mat {
        &self.ab
    }
    pub fn b(&self) -> &Vector {
        &self.b
    }
    pub fn form(&self) -> FactorForm {
        self.form
    }
    pub fn dim(&self) -> usize {
        self.c.len()
    }
    pub fn n_g(&self) -> usize {
        self.gc.ncols()
    }
    pub fn n_b(&self) -> usize {
        self.gb.ncols()
    }
    pub fn n_c(&self) -> usize {
        self.b.len()
    }

    pub fn complexity(&self) -> ComplexityTuple {
        ComplexityTuple::new(self.n_g(), self.n_b(), self.n_c())
    }

    /// `[Gc Gb]`.
    pub fn generators(&self) -> Mat {
        hstack(self.dim(), &[&self.gc, &self.gb])
    }

    /// `[Ac Ab]`.
    pub fn constraints(&self) -> Mat {
        hstack(self.n_c(), &[&self.ac, &self.ab])
    }

    /// Lossless view as a constrained zonotope; `None` when binary factors exist.
    pub fn to_constrained(&self) -> Option<ConstrainedZonotope> {
        (self.n_b() == 0).then(|| ConstrainedZonotope {
            g: self.gc.clone(),
            c: self.c.clone(),
            a: self.ac.clone(),
            b: self.b.clone(),
            form: self.form,
        })
    }

    /// Rewrites the set with factors in `target` form.
    ///
    /// With `ξ = 2ξ' - 1` going from `Pm1` to `Zo`, generators double, the
    /// center shifts by `-G·1` and the constraint right-hand side by `A·1`.
    pub fn convert_form(&self, target: FactorForm) -> Self {
        if target == self.form {
            return self.clone();
        }
        let g_sum = self.gc.column_sum() + self.gb.column_sum();
        let a_sum = self.ac.column_sum() + self.ab.column_sum();
        match target {
            FactorForm::Zo => Self {
                gc: &self.gc * 2.0,
                gb: &self.gb * 2.0,
                c: &self.c - g_sum,
                ac: &self.ac * 2.0,
                ab: &self.ab * 2.0,
                b: &self.b + a_sum,
                form: target,
            },
            FactorForm::Pm1 => Self {
                gc: &self.gc * 0.5,
                gb: &self.gb * 0.5,
                c: &self.c + g_sum * 0.5,
                ac: &self.ac * 0.5,
                ab: &self.ab * 0.5,
                b: &self.b - a_sum * 0.5,
                form: target,
            },
        }
    }

    /// The constrained zonotope selected by one binary assignment: `Gb ξb`
    /// folds into the center and `Ab ξb` into the right-hand side.
    pub fn leaf(&self, assignment: &BinaryAssignment) -> Result<ConstrainedZonotope> {
        check_dim("binary assignment length", self.n_b(), assignment.len())?;
        let xb = assignment.as_vector();
        Ok(ConstrainedZonotope {
            g: self.gc.clone(),
            c: &self.c + &self.gb * &xb,
            a: self.ac.clone(),
            b: &self.b - &self.ab * &xb,
            form: self.form,
        })
    }

    /// All `2^n_b` leaves in counting order (bit 0 = first binary factor).
    pub fn leaves(&self, opts: &LeafOptions) -> Result<Vec<(BinaryAssignment, ConstrainedZonotope)>> {
        let count = leaf_count(self.n_b());
        if count > opts.cap as u128 {
            return Err(Error::EnumerationCapExceeded {
                needed: count,
                cap: opts.cap,
            });
        }
        let mut out = Vec::new();
        for index in 0..count as u64 {
            let assignment = BinaryAssignment::from_index(index, self.n_b(), self.form);
            let leaf = self.leaf(&assignment)?;
            if opts.prune_infeasible && crate::oracle::cz_is_empty(&leaf)? {
                continue;
            }
            out.push((assignment, leaf));
        }
        Ok(out)
    }
}

impl From<ConstrainedZonotope> for HybridZonotope {
    fn from(cz: ConstrainedZonotope) -> Self {
        let n = cz.dim();
        let n_c = cz.n_c();
        Self {
            gc: cz.g,
            gb: Mat::zeros(n, 0),
            c: cz.c,
            ac: cz.a,
            ab: Mat::zeros(n_c, 0),
            b: cz.b,
            form: cz.form,
        }
    }
}

pub(crate) fn leaf_count(n_b: usize) -> u128 {
    if n_b >= 127 {
        u128::MAX
    } else {
        1u128 << n_b
    }
}

/// Default cap on the number of leaves (or search nodes) an oracle may visit.
pub const DEFAULT_ENUMERATION_CAP: u64 = 1 << 20;

#[derive(Debug, Clone, Copy)]
pub struct LeafOptions {
    pub cap: u64,
    /// Drop leaves whose constraint system is infeasible.
    pub prune_infeasible: bool,
}

impl Default for LeafOptions {
    fn default() -> Self {
        Self {
            cap: DEFAULT_ENUMERATION_CAP,
            prune_infeasible: false,
        }
    }
}

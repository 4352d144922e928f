//! Reformulation-linearization technique on the factor space of a hybrid
//! zonotope.
//!
//! In 01 form the factor space of `⟨Gc, Gb, c, Ac, Ab, b⟩` is
//! `X = {(x, y) | A x + B y = β, x ∈ {0,1}^n, y ∈ [0,1]^m}` with `x = ξb`,
//! `y = ξc`, `A = Ab`, `B = Ac`, `β = b`. Level `d` of the hierarchy
//! multiplies the equalities by the products `w_J = Π_{j∈J} x_j` for
//! `|J| ≤ d`, linearizes with `v_{J,k} = y_k w_J`, and adds the bound-factor
//! inequalities for `Π_{J1} x_j Π_{J2} (1 - x_j) ≥ 0`. Every inequality
//! becomes an equality with a fresh slack in `[0, 1]`, so the lifted system
//! is again a 01 hybrid zonotope with the original binaries. Mapping it back
//! through `[Gc Gb]` with zero generators on every new factor gives a
//! representation of the same set whose relaxation shrinks as `d` grows and
//! equals the convex hull at `d = n_b`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{hstack, Mat, Vector};
use crate::ops::{affine_map, convex_relaxation};
use crate::set::{ComplexityTuple, ConstrainedZonotope, FactorForm, HybridZonotope};

/// A subset of the binary factor indices `{0, .., n_b - 1}` as a bit mask.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
pub struct IndexSet(pub u64);

impl IndexSet {
    pub const EMPTY: IndexSet = IndexSet(0);

    pub fn singleton(i: usize) -> Self {
        IndexSet(1 << i)
    }

    pub fn from_indices(indices: &[usize]) -> Self {
        IndexSet(indices.iter().fold(0, |m, &i| m | (1 << i)))
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, i: usize) -> bool {
        (self.0 >> i) & 1 == 1
    }

    pub fn union(self, other: IndexSet) -> Self {
        IndexSet(self.0 | other.0)
    }

    pub fn is_disjoint(self, other: IndexSet) -> bool {
        self.0 & other.0 == 0
    }

    pub fn with(self, i: usize) -> Self {
        IndexSet(self.0 | (1 << i))
    }

    pub fn indices(self) -> impl Iterator<Item = usize> {
        (0..64).filter(move |i| self.contains(*i))
    }

    /// All subsets in increasing mask order, `∅` first.
    pub fn subsets(self) -> impl Iterator<Item = IndexSet> {
        let full = self.0;
        let mut next = Some(0u64);
        std::iter::from_fn(move || {
            let cur = next?;
            next = if cur == full {
                None
            } else {
                // Next submask in increasing order.
                Some(((cur | !full).wrapping_add(1)) & full)
            };
            Some(IndexSet(cur))
        })
    }

    /// All subsets of `{0..n}` with exactly `size` elements, in mask order.
    pub fn all_of_size(n: usize, size: usize) -> impl Iterator<Item = IndexSet> {
        (0..1u64 << n)
            .filter(move |m| m.count_ones() as usize == size)
            .map(IndexSet)
    }
}

impl std::fmt::Display for IndexSet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let items: Vec<String> = self.indices().map(|i| i.to_string()).collect();
        write!(f, "{{{}}}", items.join(","))
    }
}

/// Linearized bound-factor product
/// `f(J1, J2) = Σ_{I ⊆ J2} (-1)^|I| w_{J1 ∪ I}` as coefficients on `w`.
pub fn f_coefficients(j1: IndexSet, j2: IndexSet) -> Result<BTreeMap<IndexSet, i8>> {
    if !j1.is_disjoint(j2) {
        return Err(Error::OverlappingIndexSets(j1.0 & j2.0));
    }
    Ok(j2
        .subsets()
        .map(|i| (j1.union(i), if i.len() % 2 == 0 { 1 } else { -1 }))
        .collect())
}

/// Where a lifted variable lives in the output hybrid zonotope.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Term {
    /// `w_∅ = 1`.
    Constant,
    /// Binary factor column (`w_{i} = x_i`).
    Binary(usize),
    /// Continuous factor column.
    Continuous(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SlackKind {
    /// `f_D(J1, J2) ≥ 0` for an order-`min(d+1, n)` pair.
    BoundFactor { j1: IndexSet, j2: IndexSet },
    /// `f_d^k(J1, J2) ≥ 0`.
    Product { j1: IndexSet, j2: IndexSet, k: usize },
    /// `f_d(J1, J2) - f_d^k(J1, J2) ≥ 0`.
    ProductGap { j1: IndexSet, j2: IndexSet, k: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Slack {
    pub column: usize,
    pub kind: SlackKind,
}

/// Column assignment of the lifted variables.
///
/// Continuous columns are laid out as `y_1..y_m`, then `w_J` for
/// `|J| ≥ 2` in mask order, then `v_{J,k}` for `J ≠ ∅` in mask order
/// (and `k` inside), then slacks in row order. Binary columns are the
/// original `x`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RltVariableTable {
    pub n_b: usize,
    pub n_g: usize,
    pub w_index: BTreeMap<IndexSet, usize>,
    pub v_index: BTreeMap<(IndexSet, usize), usize>,
    pub slacks: Vec<Slack>,
}

impl RltVariableTable {
    fn new(n_b: usize, n_g: usize) -> Self {
        let mut col = n_g;
        let mut w_index = BTreeMap::new();
        for mask in 0..1u64 << n_b {
            if mask.count_ones() >= 2 {
                w_index.insert(IndexSet(mask), col);
                col += 1;
            }
        }
        let mut v_index = BTreeMap::new();
        for mask in 1..1u64 << n_b {
            for k in 0..n_g {
                v_index.insert((IndexSet(mask), k), col);
                col += 1;
            }
        }
        Self {
            n_b,
            n_g,
            w_index,
            v_index,
            slacks: Vec::new(),
        }
    }

    pub fn w(&self, j: IndexSet) -> Term {
        match j.len() {
            0 => Term::Constant,
            1 => Term::Binary(j.0.trailing_zeros() as usize),
            _ => Term::Continuous(self.w_index[&j]),
        }
    }

    pub fn v(&self, j: IndexSet, k: usize) -> Term {
        if j.is_empty() {
            Term::Continuous(k)
        } else {
            Term::Continuous(self.v_index[&(j, k)])
        }
    }

    /// Continuous columns before slacks.
    pub fn num_product_columns(&self) -> usize {
        self.n_g + self.w_index.len() + self.v_index.len()
    }

    pub fn num_continuous(&self) -> usize {
        self.num_product_columns() + self.slacks.len()
    }

    fn push_slack(&mut self, kind: SlackKind) -> usize {
        let column = self.num_continuous();
        self.slacks.push(Slack { column, kind });
        column
    }

    /// Slacks of the order-`min(d+1, n)` rows, which the nominal count omits.
    pub fn bound_factor_slacks(&self) -> usize {
        self.slacks
            .iter()
            .filter(|s| matches!(s.kind, SlackKind::BoundFactor { .. }))
            .count()
    }
}

#[derive(Default)]
struct Rows {
    cont: Vec<Vec<(usize, f64)>>,
    bin: Vec<Vec<(usize, f64)>>,
    rhs: Vec<f64>,
}

impl Rows {
    fn push(&mut self, terms: &[(Term, f64)]) {
        let mut cont = Vec::new();
        let mut bin = Vec::new();
        let mut rhs = 0.0;
        for &(t, a) in terms {
            if a == 0.0 {
                continue;
            }
            match t {
                Term::Constant => rhs -= a,
                Term::Binary(i) => bin.push((i, a)),
                Term::Continuous(j) => cont.push((j, a)),
            }
        }
        self.cont.push(cont);
        self.bin.push(bin);
        self.rhs.push(rhs);
    }

    fn len(&self) -> usize {
        self.rhs.len()
    }
}

fn f_terms(table: &RltVariableTable, j1: IndexSet, j2: IndexSet, sign: f64) -> Vec<(Term, f64)> {
    j2.subsets()
        .map(|i| {
            let s = if i.len() % 2 == 0 { 1.0 } else { -1.0 };
            (table.w(j1.union(i)), sign * s)
        })
        .collect()
}

fn fk_terms(
    table: &RltVariableTable,
    j1: IndexSet,
    j2: IndexSet,
    k: usize,
    sign: f64,
) -> Vec<(Term, f64)> {
    j2.subsets()
        .map(|i| {
            let s = if i.len() % 2 == 0 { 1.0 } else { -1.0 };
            (table.v(j1.union(i), k), sign * s)
        })
        .collect()
}

fn check_level(n_b: usize, d: usize) -> Result<()> {
    if n_b == 0 || d == 0 || d > n_b {
        Err(Error::LevelOutOfRange { level: d, max: n_b })
    } else {
        Ok(())
    }
}

/// Level-`d` lifted system as a 01 hybrid zonotope over the original factor
/// space `(ξc, ξb)`: its ambient coordinates are `(y, x)` and every lifted
/// variable other than `y` and `x` carries a zero generator. Its relaxation
/// is the projected relaxation `X_{P,d}`.
pub fn build_xd(h: &HybridZonotope, d: usize) -> Result<(HybridZonotope, RltVariableTable)> {
    let n = h.n_b();
    check_level(n, d)?;
    let z = h.convert_form(FactorForm::Zo);
    let m = z.n_g();
    let r = z.n_c();
    let (a, bmat, beta) = (z.ab(), z.ac(), z.b());

    let mut table = RltVariableTable::new(n, m);
    let mut rows = Rows::default();

    // Products of the equality system with w_J, |J| ≤ d.
    for size in 0..=d {
        for j in IndexSet::all_of_size(n, size) {
            for i in 0..r {
                let mut terms = Vec::with_capacity(n + m + 1);
                let lead: f64 = j.indices().map(|jj| a[(i, jj)]).sum::<f64>() - beta[i];
                terms.push((table.w(j), lead));
                for jj in (0..n).filter(|jj| !j.contains(*jj)) {
                    terms.push((table.w(j.with(jj)), a[(i, jj)]));
                }
                for k in 0..m {
                    terms.push((table.v(j, k), bmat[(i, k)]));
                }
                rows.push(&terms);
            }
        }
    }

    // f_D(J1, J2) = s for every pair of order D = min(d + 1, n).
    let big_d = (d + 1).min(n);
    for s in IndexSet::all_of_size(n, big_d) {
        for j1 in s.subsets() {
            let j2 = IndexSet(s.0 ^ j1.0);
            let col = table.push_slack(SlackKind::BoundFactor { j1, j2 });
            let mut terms = f_terms(&table, j1, j2, 1.0);
            terms.push((Term::Continuous(col), -1.0));
            rows.push(&terms);
        }
    }

    // f_d ≥ f_d^k ≥ 0 for every pair of order d and every k.
    for s in IndexSet::all_of_size(n, d) {
        for j1 in s.subsets() {
            let j2 = IndexSet(s.0 ^ j1.0);
            for k in 0..m {
                let s1 = table.push_slack(SlackKind::Product { j1, j2, k });
                let mut terms = fk_terms(&table, j1, j2, k, 1.0);
                terms.push((Term::Continuous(s1), -1.0));
                rows.push(&terms);

                let s2 = table.push_slack(SlackKind::ProductGap { j1, j2, k });
                let mut terms = f_terms(&table, j1, j2, 1.0);
                terms.extend(fk_terms(&table, j1, j2, k, -1.0));
                terms.push((Term::Continuous(s2), -1.0));
                rows.push(&terms);
            }
        }
    }

    let n_cont = table.num_continuous();
    let n_rows = rows.len();
    let mut ac = Mat::zeros(n_rows, n_cont);
    let mut ab = Mat::zeros(n_rows, n);
    for (i, (cont, bin)) in rows.cont.iter().zip(&rows.bin).enumerate() {
        for &(j, v) in cont {
            ac[(i, j)] += v;
        }
        for &(j, v) in bin {
            ab[(i, j)] += v;
        }
    }
    let dim = m + n;
    let mut gc = Mat::zeros(dim, n_cont);
    for k in 0..m {
        gc[(k, k)] = 1.0;
    }
    let mut gb = Mat::zeros(dim, n);
    for i in 0..n {
        gb[(m + i, i)] = 1.0;
    }
    let xd = HybridZonotope::new(
        gc,
        gb,
        Vector::zeros(dim),
        ac,
        ab,
        Vector::from_vec(rows.rhs),
        FactorForm::Zo,
    )?;
    Ok((xd, table))
}

/// Same set as `h`, represented through the level-`d` lifted system (01
/// form). At `d = n_b` the relaxation is the convex hull. Sets without
/// binary factors are returned unchanged.
pub fn rlt_sharpen(h: &HybridZonotope, d: usize) -> Result<HybridZonotope> {
    Ok(rlt_sharpen_with_table(h, d)?.0)
}

pub fn rlt_sharpen_with_table(
    h: &HybridZonotope,
    d: usize,
) -> Result<(HybridZonotope, Option<RltVariableTable>)> {
    if h.n_b() == 0 {
        return Ok((h.clone(), None));
    }
    let (xd, table) = build_xd(h, d)?;
    let z = h.convert_form(FactorForm::Zo);
    let map = hstack(z.dim(), &[z.gc(), z.gb()]);
    Ok((affine_map(&xd, &map, z.c())?, Some(table)))
}

/// `conv(H)` as a constrained zonotope: the relaxation of the level-`n_b`
/// representation.
pub fn rlt_convex_hull(h: &HybridZonotope) -> Result<ConstrainedZonotope> {
    if let Some(cz) = h.to_constrained() {
        return Ok(cz);
    }
    Ok(convex_relaxation(&rlt_sharpen(h, h.n_b())?))
}

fn binomial(n: u128, k: u128) -> u128 {
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) / (i + 1))
}

fn to_count(v: u128) -> Result<usize> {
    usize::try_from(v).map_err(|_| Error::InvalidInput("complexity overflows usize".into()))
}

/// Closed-form complexity of the level-`d` representation, counting slacks
/// for the `f_d ≥ f_d^k ≥ 0` rows only.
pub fn rlt_complexity(t: ComplexityTuple, d: usize) -> Result<ComplexityTuple> {
    check_level(t.n_b, d)?;
    if t.n_b >= 100 {
        return Err(Error::InvalidInput("too many binary factors".into()));
    }
    let (ng, nb, nc, d) = (t.n_g as u128, t.n_b as u128, t.n_c as u128, d as u128);
    let pow_nb = 1u128 << nb;
    let product_rows = (1u128 << (d + 1)) * binomial(nb, d) * ng;
    let n_g = pow_nb * (ng + 1) + product_rows - nb - 1;
    let n_c = nc * (0..=d).map(|i| binomial(nb, i)).sum::<u128>() + product_rows;
    Ok(ComplexityTuple::new(to_count(n_g)?, t.n_b, to_count(n_c)?))
}

/// Complexity actually produced by [`rlt_sharpen`]: the closed form plus one
/// row and one slack per bound-factor pair of order `min(d+1, n_b)`.
pub fn rlt_complexity_actual(t: ComplexityTuple, d: usize) -> Result<ComplexityTuple> {
    let nominal = rlt_complexity(t, d)?;
    let big_d = (d + 1).min(t.n_b) as u128;
    let extra = to_count((1u128 << big_d) * binomial(t.n_b as u128, big_d))?;
    Ok(ComplexityTuple::new(nominal.n_g + extra, nominal.n_b, nominal.n_c + extra))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexityReport {
    pub nominal: ComplexityTuple,
    pub actual: ComplexityTuple,
    pub level: usize,
}

pub fn complexity_report(t: ComplexityTuple, d: usize) -> Result<ComplexityReport> {
    Ok(ComplexityReport {
        nominal: rlt_complexity(t, d)?,
        actual: rlt_complexity_actual(t, d)?,
        level: d,
    })
}

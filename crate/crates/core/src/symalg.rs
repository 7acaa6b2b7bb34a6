//! Reduced symmetric algebras over the rationals, verified at desk scale.
//!
//! The model category is ungraded finite-dimensional rational vector
//! spaces: semisimple, so homotopy orbits of a symmetric-group action are
//! computed by the image of the symmetrizer `(1/n!) sum_sigma sigma` on
//! the tensor power (invariants and coinvariants coincide, the Maschke
//! identification). Signs from a Z-grading are a straightforward extension
//! left out on purpose. In a non-rational setting the sequential formula
//! genuinely fails, which is why the symmetrizer model is the right place
//! to test it.

use num::{BigRational, One};
use serde::Serialize;

use crate::fincat::builders;
use crate::homotopy::matrix::{ColumnReducer, SparseCol, SparseQMatrix};
use crate::homotopy::{acyclicity_certificate, AcyclicityCertificate, HomotopyBudget};
use crate::constructions::lax_fiber;
use crate::{Error, Result};

/// Budget for tensor-power computations.
#[derive(Debug, Clone, Copy)]
pub struct SymBudget {
    pub max_tensor_dim: usize,
}

impl Default for SymBudget {
    fn default() -> Self {
        SymBudget {
            max_tensor_dim: 4096,
        }
    }
}

/// A pointed rational vector space: total dimension `dim`, with the
/// distinguished basis vector `unit_index` as the point. In vector spaces
/// a nonzero pointing is split injective, so a pointed object is a choice
/// of basis up to isomorphism.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PointedSpaceQ {
    pub dim: usize,
    pub unit_index: usize,
}

impl PointedSpaceQ {
    pub fn new(dim: usize, unit_index: usize) -> Result<Self> {
        if dim == 0 || unit_index >= dim {
            return Err(Error::TypingMismatch {
                item: "pointed space".into(),
                detail: format!("dim {dim} with unit index {unit_index}"),
            });
        }
        Ok(PointedSpaceQ { dim, unit_index })
    }

    /// Dimension of the complement of the unit line.
    pub fn complement_dim(&self) -> usize {
        self.dim - 1
    }

    /// The standard model with the unit in slot 0 and `m` extra
    /// dimensions.
    pub fn with_complement_dim(m: usize) -> Self {
        PointedSpaceQ {
            dim: m + 1,
            unit_index: 0,
        }
    }
}

fn check_budget(dim: usize, n: usize, budget: &SymBudget) -> Result<usize> {
    let mut total: usize = 1;
    for _ in 0..n {
        total = total.saturating_mul(dim);
        if total > budget.max_tensor_dim {
            return Err(Error::BudgetExceeded(format!(
                "tensor power {dim}^{n} exceeds {}",
                budget.max_tensor_dim
            )));
        }
    }
    Ok(total)
}

/// The symmetrizer column for the basis vector with the given
/// multi-index: the orbit of the index under coordinate permutations,
/// each rearrangement weighted by `(prod of multiplicities!) / n!`.
fn symmetrizer_column(index: &[usize], dim: usize) -> SparseCol {
    let n = index.len();
    let mut sorted = index.to_vec();
    sorted.sort_unstable();
    // Stabilizer order: product of factorials of value multiplicities.
    let mut stab = BigRational::one();
    let mut run = 1u64;
    for i in 1..=n {
        if i < n && sorted[i] == sorted[i - 1] {
            run += 1;
        } else {
            for k in 2..=run {
                stab *= BigRational::from_integer(k.into());
            }
            run = 1;
        }
    }
    let mut n_fact = BigRational::one();
    for k in 2..=n as u64 {
        n_fact *= BigRational::from_integer(k.into());
    }
    let coeff = stab / n_fact;

    // Enumerate distinct rearrangements of the sorted multiset.
    let mut col: SparseCol = Vec::new();
    let mut current = sorted;
    loop {
        let flat = current.iter().fold(0usize, |acc, &v| acc * dim + v);
        col.push((flat, coeff.clone()));
        if !next_permutation(&mut current) {
            break;
        }
    }
    col.sort_by_key(|&(r, _)| r);
    col
}

fn next_permutation(v: &mut [usize]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

fn all_multi_indices(dim: usize, n: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|p| {
                (0..dim).map(move |v| {
                    let mut q = p.clone();
                    q.push(v);
                    q
                })
            })
            .collect();
    }
    out
}

/// The symmetrizer on the `n`-th tensor power of a `dim`-dimensional
/// space as a sparse matrix.
fn symmetrizer_matrix(dim: usize, n: usize, budget: &SymBudget) -> Result<SparseQMatrix> {
    let total = check_budget(dim, n, budget)?;
    let mut m = SparseQMatrix::zero(total, total);
    for (j, index) in all_multi_indices(dim, n).iter().enumerate() {
        m.cols[j] = symmetrizer_column(index, dim);
    }
    Ok(m)
}

/// Rank of the symmetrizer acting on the `n`-th tensor power: the
/// dimension of the space of symmetric tensors, computed by exact
/// elimination. Equals the stars-and-bars count `C(dim + n - 1, n)`.
pub fn sym_orbit_dim(dim: usize, n: usize, budget: &SymBudget) -> Result<usize> {
    if dim == 0 {
        return Ok(if n == 0 { 1 } else { 0 });
    }
    Ok(symmetrizer_matrix(dim, n, budget)?.rank())
}

/// Stage data for the reduced symmetric algebra computed sequentially.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SymStageReport {
    /// `dim(X^{(x)n}_{Sigma_n})` for `n = 0 ..= N`.
    pub stage_dims: Vec<usize>,
    /// Rank of each transition map `stage n-1 -> stage n`.
    pub map_ranks: Vec<usize>,
    /// Colimit dimension after each stage; with injective transitions this
    /// is the running stage dimension.
    pub colimit_dims: Vec<usize>,
    pub maps_injective: bool,
}

/// Computes the sequential stages: stage `n` is the symmetrizer image in
/// the `n`-th tensor power, and the transition inserts the unit vector in
/// the last slot and re-symmetrizes.
pub fn reduced_sym_sequential(
    x: &PointedSpaceQ,
    stages: usize,
    budget: &SymBudget,
) -> Result<SymStageReport> {
    let dim = x.dim;
    let mut stage_dims = Vec::with_capacity(stages + 1);
    let mut map_ranks = Vec::with_capacity(stages);
    let mut colimit_dims = Vec::with_capacity(stages + 1);
    let mut maps_injective = true;

    // Stage 0: the unit Q, with basis the empty tensor.
    let mut basis: Vec<SparseCol> = vec![vec![(0, BigRational::one())]];
    stage_dims.push(1);
    colimit_dims.push(1);

    for n in 1..=stages {
        check_budget(dim, n, budget)?;
        // Transition: v |-> Sym_n(v (x) e_unit), where inserting the unit
        // appends it to each multi-index.
        let images: Vec<SparseCol> = basis
            .iter()
            .map(|v| {
                let mut out: SparseCol = Vec::new();
                for (flat, coef) in v {
                    let appended_flat = flat * dim + x.unit_index;
                    let index = unflatten(appended_flat, dim, n);
                    let sym = symmetrizer_column(&index, dim);
                    crate::homotopy::matrix::add_scaled(&mut out, coef, &sym);
                }
                out
            })
            .collect();
        let mut red = ColumnReducer::new();
        let mut rank = 0;
        for col in &images {
            if red.insert(col.clone()) {
                rank += 1;
            }
        }
        map_ranks.push(rank);
        if rank != basis.len() {
            maps_injective = false;
        }

        // Stage n basis: independent symmetrizer columns.
        let mut stage_red = ColumnReducer::new();
        let mut stage_basis = Vec::new();
        for index in all_multi_indices(dim, n) {
            let col = symmetrizer_column(&index, dim);
            if stage_red.insert(col.clone()) {
                stage_basis.push(col);
            }
        }
        stage_dims.push(stage_basis.len());
        colimit_dims.push(stage_basis.len());
        basis = stage_basis;
    }

    Ok(SymStageReport {
        stage_dims,
        map_ranks,
        colimit_dims,
        maps_injective,
    })
}

fn unflatten(mut flat: usize, dim: usize, n: usize) -> Vec<usize> {
    let mut out = vec![0; n];
    for slot in (0..n).rev() {
        out[slot] = flat % dim;
        flat /= dim;
    }
    out
}

/// Independent oracle: in the split model `X = 1 (+) Xbar`, stage `n` of
/// the sequential colimit is the sum of the symmetric powers of `Xbar` up
/// to `n`, so its dimension is `sum_{k<=n} C(m+k-1, k)` with
/// `m = dim Xbar`. Pure binomial arithmetic, no linear algebra.
pub fn reduced_sym_oracle(x: &PointedSpaceQ, stages: usize) -> Vec<usize> {
    let m = x.complement_dim();
    let mut out = Vec::with_capacity(stages + 1);
    let mut total = 0usize;
    for n in 0..=stages {
        total += sym_power_dim(m, n);
        out.push(total);
    }
    out
}

fn sym_power_dim(m: usize, k: usize) -> usize {
    if k == 0 {
        return 1;
    }
    if m == 0 {
        return 0;
    }
    binomial(m + k - 1, k)
}

fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc as usize
}

/// Per-object outcome of the fiber check for the inclusion
/// `B(Sigma_n) -> fin_inj_leq(n)`.
#[derive(Debug, Clone, Serialize)]
pub struct FinInjFiberObjectReport {
    pub object: String,
    pub fiber_objects: usize,
    pub fiber_components: usize,
    pub fiber_certificate: AcyclicityCertificate,
    pub reference_certificate: AcyclicityCertificate,
    pub matches: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct FinInjFiberReport {
    pub n: usize,
    pub degree: usize,
    pub per_object: Vec<FinInjFiberObjectReport>,
    pub pass: bool,
}

/// For every cardinality `c <= n`, the lax fiber of
/// `B(Sigma_n) -> fin_inj_leq(n)` over the `c`-element set must be
/// connected with the same truncated rational homology as
/// `B(Sigma_{n-c})`.
pub fn fin_inj_fiber_check(n: usize, d: usize, budget: &HomotopyBudget) -> Result<FinInjFiberReport> {
    let f = builders::symmetric_group_into_fin_inj(n)?;
    let i = f.target().clone();
    let mut per_object = Vec::with_capacity(i.n_objects());
    let mut pass = true;
    for a in 0..i.n_objects() {
        let cardinality: usize = i.object_id(a).parse().expect("objects are cardinalities");
        let fiber = lax_fiber(&f, a)?;
        let components = fiber.category.pi0().count();
        let fiber_certificate = acyclicity_certificate(&fiber.category, d, budget)?;
        let reference = builders::symmetric_group(n - cardinality);
        let reference_certificate = acyclicity_certificate(&reference, d, budget)?;
        let matches = components == 1
            && fiber_certificate.nonempty == reference_certificate.nonempty
            && fiber_certificate.connected == reference_certificate.connected
            && fiber_certificate.reduced_betti == reference_certificate.reduced_betti;
        pass &= matches;
        per_object.push(FinInjFiberObjectReport {
            object: i.object_id(a).to_string(),
            fiber_objects: fiber.category.n_objects(),
            fiber_components: components,
            fiber_certificate,
            reference_certificate,
            matches,
        });
    }
    Ok(FinInjFiberReport {
        n,
        degree: d,
        per_object,
        pass,
    })
}

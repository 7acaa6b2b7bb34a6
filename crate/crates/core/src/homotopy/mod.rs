//! The nerve of a finite category as a truncated normalized chain complex
//! over the rationals, with exact homology, acyclicity certificates, and
//! induced chain maps of functors.
//!
//! Certificates are truncated by design: whether a nerve is weakly
//! contractible is undecidable from a finite table, so the crate certifies
//! connectivity and vanishing reduced rational homology up to a chosen
//! degree, and reports `complete = true` when the category is loop-free
//! and the nondegenerate nerve stops inside the computed range, in which
//! case the certificate covers all degrees.
//!
//! Normalized chains (tuples of non-identity morphisms, faces whose inner
//! composite is an identity dropped) have the same homology as the full
//! simplicial chains with far smaller matrices.
//!
//! On connectivity conventions: a sharp classical criterion asks the fiber
//! categories to be connected and nonempty, while stronger homotopical
//! criteria ask for contractibility; whether "n-connected" means trivial
//! homotopy in degrees below n or up to n varies by author. This module
//! only implements the two unambiguous checks: graph connectivity and
//! vanishing reduced rational homology through a degree bound.

pub mod matrix;

use std::collections::HashMap;

use serde::Serialize;

use crate::fincat::{FinCategory, FinFunctor, MorIx, ObIx};
use crate::{Error, Result};

use matrix::{added_rank, q_int, rank_and_kernel, SparseCol, SparseQMatrix};

/// Cap on the number of nondegenerate simplices produced per degree.
#[derive(Debug, Clone, Copy)]
pub struct HomotopyBudget {
    pub max_simplices_per_degree: usize,
}

impl Default for HomotopyBudget {
    fn default() -> Self {
        HomotopyBudget {
            max_simplices_per_degree: 200_000,
        }
    }
}

/// Default degree bound for certificates.
pub const DEFAULT_DEGREE: usize = 3;

/// A nondegenerate simplex of the nerve: a composable chain of
/// non-identity morphisms starting at `start`. Degree 0 simplices are
/// objects (empty chain).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Simplex {
    pub start: ObIx,
    pub mors: Vec<MorIx>,
}

/// Normalized rational chains of the nerve, with bases through degree
/// `degree_bound + 1` and boundary matrices linking them.
#[derive(Debug, Clone)]
pub struct ChainComplexQ {
    pub degree_bound: usize,
    /// `simplices[k]` for `0 <= k <= degree_bound + 1`.
    pub simplices: Vec<Vec<Simplex>>,
    /// `boundaries[k - 1]` is the matrix of `d_k: C_k -> C_{k-1}` for
    /// `1 <= k <= degree_bound + 1`.
    pub boundaries: Vec<SparseQMatrix>,
}

impl ChainComplexQ {
    pub fn basis_size(&self, k: usize) -> usize {
        self.simplices.get(k).map_or(0, Vec::len)
    }

    pub fn boundary(&self, k: usize) -> Option<&SparseQMatrix> {
        if k == 0 {
            None
        } else {
            self.boundaries.get(k - 1)
        }
    }
}

/// Builds the normalized nerve chains of `c` up to degree `d + 1`.
pub fn nerve_chains(c: &FinCategory, d: usize, budget: &HomotopyBudget) -> Result<ChainComplexQ> {
    let non_identity_out: Vec<Vec<MorIx>> = (0..c.n_objects())
        .map(|a| {
            c.morphisms_from(a)
                .iter()
                .copied()
                .filter(|&m| !c.is_identity(m))
                .collect()
        })
        .collect();

    let mut simplices: Vec<Vec<Simplex>> = Vec::with_capacity(d + 2);
    simplices.push(
        (0..c.n_objects())
            .map(|a| Simplex {
                start: a,
                mors: Vec::new(),
            })
            .collect(),
    );
    for k in 1..=d + 1 {
        let mut next = Vec::new();
        for s in &simplices[k - 1] {
            let end = s.mors.last().map_or(s.start, |&m| c.tgt(m));
            for &m in &non_identity_out[end] {
                if next.len() >= budget.max_simplices_per_degree {
                    return Err(Error::SimplexBudgetExceeded {
                        degree: k,
                        count: next.len() + 1,
                        budget: budget.max_simplices_per_degree,
                    });
                }
                let mut mors = s.mors.clone();
                mors.push(m);
                next.push(Simplex {
                    start: s.start,
                    mors,
                });
            }
        }
        simplices.push(next);
    }

    let index: Vec<HashMap<&Simplex, usize>> = simplices
        .iter()
        .map(|level| level.iter().enumerate().map(|(i, s)| (s, i)).collect())
        .collect();

    let mut boundaries = Vec::with_capacity(d + 1);
    for k in 1..=d + 1 {
        let mut m = SparseQMatrix::zero(simplices[k - 1].len(), simplices[k].len());
        for (j, s) in simplices[k].iter().enumerate() {
            let mut acc: HashMap<usize, i64> = HashMap::new();
            for (face_ix, face) in simplex_faces(c, s) {
                let sign = if face_ix % 2 == 0 { 1 } else { -1 };
                let row = index[k - 1][&face];
                *acc.entry(row).or_insert(0) += sign;
            }
            let mut col: SparseCol = acc
                .into_iter()
                .filter(|&(_, v)| v != 0)
                .map(|(r, v)| (r, q_int(v)))
                .collect();
            col.sort_by_key(|&(r, _)| r);
            m.cols[j] = col;
        }
        boundaries.push(m);
    }

    let complex = ChainComplexQ {
        degree_bound: d,
        simplices,
        boundaries,
    };
    assert_boundary_squares_to_zero(&complex);
    Ok(complex)
}

/// Nondegenerate faces of a simplex, tagged with their face index.
fn simplex_faces(c: &FinCategory, s: &Simplex) -> Vec<(usize, Simplex)> {
    let k = s.mors.len();
    debug_assert!(k >= 1);
    let mut faces = Vec::with_capacity(k + 1);
    if k == 1 {
        faces.push((
            0,
            Simplex {
                start: c.tgt(s.mors[0]),
                mors: Vec::new(),
            },
        ));
        faces.push((
            1,
            Simplex {
                start: s.start,
                mors: Vec::new(),
            },
        ));
        return faces;
    }
    // Outer faces drop the first or last morphism; inner faces compose.
    faces.push((
        0,
        Simplex {
            start: c.tgt(s.mors[0]),
            mors: s.mors[1..].to_vec(),
        },
    ));
    for i in 1..k {
        let composite = c
            .compose(s.mors[i], s.mors[i - 1])
            .expect("chains are composable");
        if c.is_identity(composite) {
            continue; // degenerate in normalized chains
        }
        let mut mors = Vec::with_capacity(k - 1);
        mors.extend_from_slice(&s.mors[..i - 1]);
        mors.push(composite);
        mors.extend_from_slice(&s.mors[i + 1..]);
        faces.push((i, Simplex { start: s.start, mors }));
    }
    faces.push((
        k,
        Simplex {
            start: s.start,
            mors: s.mors[..k - 1].to_vec(),
        },
    ));
    faces
}

fn assert_boundary_squares_to_zero(k: &ChainComplexQ) {
    for deg in 2..=k.degree_bound + 1 {
        let upper = k.boundary(deg).unwrap();
        let lower = k.boundary(deg - 1).unwrap();
        for col in &upper.cols {
            assert!(
                lower.apply(col).is_empty(),
                "boundary does not square to zero in degree {deg}"
            );
        }
    }
}

/// Betti numbers `b_0 .. b_d` by exact rank computation:
/// `b_k = dim ker d_k - rank d_{k+1}`.
pub fn rational_homology(k: &ChainComplexQ) -> Vec<usize> {
    let ranks: Vec<usize> = (1..=k.degree_bound + 1)
        .map(|deg| k.boundary(deg).map_or(0, SparseQMatrix::rank))
        .collect();
    (0..=k.degree_bound)
        .map(|deg| {
            let dim = k.basis_size(deg);
            let rank_in = if deg == 0 { 0 } else { ranks[deg - 1] };
            let rank_out = ranks[deg];
            dim - rank_in - rank_out
        })
        .collect()
}

/// A truncated acyclicity certificate for a category's nerve.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AcyclicityCertificate {
    pub nonempty: bool,
    pub connected: bool,
    /// Reduced Betti numbers `b~_0 .. b~_d`.
    pub reduced_betti: Vec<usize>,
    /// True when the category is loop-free and the nondegenerate nerve
    /// stops within the computed range, so the certificate covers all
    /// degrees.
    pub complete: bool,
}

impl AcyclicityCertificate {
    /// Nonempty, connected, and rationally acyclic through the computed
    /// range.
    pub fn is_acyclic(&self) -> bool {
        self.nonempty && self.connected && self.reduced_betti.iter().all(|&b| b == 0)
    }
}

/// True when no directed cycle of non-identity morphisms exists (this
/// includes non-identity endomorphisms and isomorphism cycles).
pub fn is_loop_free(c: &FinCategory) -> bool {
    let mut state = vec![0u8; c.n_objects()]; // 0 new, 1 open, 2 done
    for root in 0..c.n_objects() {
        if state[root] != 0 {
            continue;
        }
        let mut stack = vec![(root, 0usize)];
        state[root] = 1;
        while let Some(frame) = stack.last_mut() {
            let (a, next) = (frame.0, &mut frame.1);
            let out = c.morphisms_from(a);
            let mut advanced = false;
            while *next < out.len() {
                let m = out[*next];
                *next += 1;
                if c.is_identity(m) {
                    continue;
                }
                let b = c.tgt(m);
                match state[b] {
                    1 => return false,
                    0 => {
                        state[b] = 1;
                        stack.push((b, 0));
                        advanced = true;
                        break;
                    }
                    _ => {}
                }
            }
            if !advanced {
                if let Some(done) = stack.pop() {
                    state[done.0] = 2;
                }
            }
        }
    }
    true
}

/// Builds the nerve up to degree `d` and certifies connectivity and
/// reduced rational homology.
pub fn acyclicity_certificate(
    c: &FinCategory,
    d: usize,
    budget: &HomotopyBudget,
) -> Result<AcyclicityCertificate> {
    let complex = nerve_chains(c, d, budget)?;
    let betti = rational_homology(&complex);
    let nonempty = c.n_objects() > 0;
    let connected = nonempty && c.pi0().count() == 1;
    let mut reduced = betti;
    if nonempty {
        reduced[0] -= 1;
    }
    let complete = is_loop_free(c) && complex.basis_size(d + 1) == 0;
    Ok(AcyclicityCertificate {
        nonempty,
        connected,
        reduced_betti: reduced,
        complete,
    })
}

/// Outcome of comparing homology in one degree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum DegreeVerdict {
    Isomorphism,
    NotIsomorphism,
    /// Top-degree report: the ranks are exact but the verdict is withheld.
    RankOnly,
}

#[derive(Debug, Clone, Serialize)]
pub struct DegreeComparison {
    pub degree: usize,
    pub source_betti: usize,
    pub target_betti: usize,
    pub induced_rank: usize,
    pub verdict: DegreeVerdict,
}

#[derive(Debug, Clone, Serialize)]
pub struct HomologyComparisonReport {
    pub degrees: Vec<DegreeComparison>,
}

impl HomologyComparisonReport {
    /// True when no conclusive degree reports a failure.
    pub fn all_isomorphisms(&self) -> bool {
        self.degrees
            .iter()
            .all(|d| d.verdict != DegreeVerdict::NotIsomorphism)
    }
}

/// The chain map induced by a functor on normalized nerves: a chain maps
/// entrywise; if any entry lands on an identity the image is degenerate
/// and the simplex maps to zero.
fn induced_chain_map(
    f: &FinFunctor,
    source: &ChainComplexQ,
    target: &ChainComplexQ,
) -> Vec<Vec<Option<usize>>> {
    let tc = f.target();
    let index: Vec<HashMap<&Simplex, usize>> = target
        .simplices
        .iter()
        .map(|level| level.iter().enumerate().map(|(i, s)| (s, i)).collect())
        .collect();
    let maps: Vec<Vec<Option<usize>>> = source
        .simplices
        .iter()
        .enumerate()
        .map(|(k, level)| {
            level
                .iter()
                .map(|s| {
                    let image_mors: Vec<MorIx> =
                        s.mors.iter().map(|&m| f.on_morphism(m)).collect();
                    if image_mors.iter().any(|&m| tc.is_identity(m)) {
                        return None;
                    }
                    let image = Simplex {
                        start: f.on_object(s.start),
                        mors: image_mors,
                    };
                    Some(*index[k].get(&image).expect("image simplex is in the basis"))
                })
                .collect()
        })
        .collect();

    // The map must commute with the boundaries on every basis element.
    let one = [(0usize, matrix::q_one())];
    for k in 1..=source.degree_bound + 1 {
        let db = source.boundary(k).unwrap();
        let db_t = target.boundary(k).unwrap();
        for (j, img) in maps[k].iter().enumerate() {
            let mut lhs: SparseCol = Vec::new();
            for (row, coef) in &db.cols[j] {
                if let Some(r) = maps[k - 1][*row] {
                    matrix::add_scaled(&mut lhs, coef, &vec![(r, one[0].1.clone())]);
                }
            }
            let rhs: SparseCol = match img {
                None => Vec::new(),
                Some(r) => db_t.cols[*r].clone(),
            };
            assert_eq!(
                lhs, rhs,
                "induced chain map fails to commute with the boundary in degree {k}"
            );
        }
    }
    maps
}

/// Compares `H_k(N(source); Q) -> H_k(N(target); Q)` for `k <= d`. Degrees
/// up to `d - 1` get a conclusive verdict; the top degree is reported
/// rank-only.
pub fn functor_homology_comparison(
    f: &FinFunctor,
    d: usize,
    budget: &HomotopyBudget,
) -> Result<HomologyComparisonReport> {
    let source = nerve_chains(f.source(), d, budget)?;
    let target = nerve_chains(f.target(), d, budget)?;
    let maps = induced_chain_map(f, &source, &target);

    let source_betti = rational_homology(&source);
    let target_betti = rational_homology(&target);

    let mut degrees = Vec::with_capacity(d + 1);
    for k in 0..=d {
        let cycles: Vec<SparseCol> = match k {
            0 => (0..source.basis_size(0))
                .map(|j| vec![(j, matrix::q_one())])
                .collect(),
            _ => rank_and_kernel(source.boundary(k).unwrap()).1,
        };
        let images: Vec<SparseCol> = cycles
            .iter()
            .map(|z| {
                let mut out: SparseCol = Vec::new();
                for (j, coef) in z {
                    if let Some(r) = maps[k][*j] {
                        matrix::add_scaled(&mut out, coef, &vec![(r, matrix::q_one())]);
                    }
                }
                out
            })
            .collect();
        let boundaries = &target.boundary(k + 1).unwrap().cols;
        let induced_rank = added_rank(boundaries, &images);
        let verdict = if k == d {
            DegreeVerdict::RankOnly
        } else if induced_rank == source_betti[k] && induced_rank == target_betti[k] {
            DegreeVerdict::Isomorphism
        } else {
            DegreeVerdict::NotIsomorphism
        };
        degrees.push(DegreeComparison {
            degree: k,
            source_betti: source_betti[k],
            target_betti: target_betti[k],
            induced_rank,
            verdict,
        });
    }
    Ok(HomologyComparisonReport { degrees })
}

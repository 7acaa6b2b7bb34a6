//! Builders for the standard categories used throughout the crate.
//!
//! `fin_inj_leq(n)` is the skeleton of finite sets of cardinality at most
//! `n` and injections: one set per cardinality. All quantities computed
//! downstream (colimits, homology) are invariant under equivalence, so the
//! skeleton is the economical presentation.

use std::collections::HashMap;
use std::sync::Arc;

use crate::{Error, Result};

use super::{FinCategory, FinFunctor};

/// The terminal category: one object `*`, one morphism.
pub fn point() -> FinCategory {
    FinCategory::from_tables(
        vec!["*".into()],
        vec![("id:*".into(), 0, 0)],
        vec![0],
        |_, _| Some(0),
    )
    .expect("point is valid")
}

/// Two objects `0`, `1` and a single non-identity morphism `f: 0 -> 1`.
pub fn walking_arrow() -> FinCategory {
    FinCategory::from_tables(
        vec!["0".into(), "1".into()],
        vec![("id:0".into(), 0, 0), ("id:1".into(), 1, 1), ("f".into(), 0, 1)],
        vec![0, 1],
        |g, f| match (g, f) {
            (0, 0) => Some(0),
            (1, 1) => Some(1),
            (1, 2) | (2, 0) => Some(2),
            _ => None,
        },
    )
    .expect("walking arrow is valid")
}

/// The discrete category on `n` objects `0 .. n-1`.
pub fn discrete(n: usize) -> FinCategory {
    let objects: Vec<String> = (0..n).map(|i| i.to_string()).collect();
    let morphisms = (0..n).map(|i| (format!("id:{i}"), i, i)).collect();
    FinCategory::from_tables(objects, morphisms, (0..n).collect(), |g, f| {
        if g == f {
            Some(g)
        } else {
            None
        }
    })
    .expect("discrete category is valid")
}

/// The chain poset with `n` objects `0 < 1 < ... < n-1`. Non-identity
/// morphisms are named `le:i>j`.
pub fn chain_poset(n: usize) -> FinCategory {
    poset_from_leq(
        (0..n).map(|i| i.to_string()).collect(),
        |i, j| i <= j,
    )
}

/// The span `1 <- 0 -> 2` with legs `f: 0 -> 1` and `g: 0 -> 2`.
pub fn span() -> FinCategory {
    poset_from_named(
        vec!["0".into(), "1".into(), "2".into()],
        vec![("f", 0, 1), ("g", 0, 2)],
    )
}

/// The cospan `1 -> 0 <- 2` with legs `f: 1 -> 0` and `g: 2 -> 0`.
pub fn cospan() -> FinCategory {
    poset_from_named(
        vec!["0".into(), "1".into(), "2".into()],
        vec![("f", 1, 0), ("g", 2, 0)],
    )
}

/// A thin category from a reflexive-transitive relation given as a
/// predicate on object indices. Non-identity morphisms are named
/// `le:<src>><tgt>`.
pub fn poset_from_leq(objects: Vec<String>, leq: impl Fn(usize, usize) -> bool) -> FinCategory {
    let n = objects.len();
    let mut morphisms = Vec::new();
    let mut identity = vec![0; n];
    let mut pair_to_mor = HashMap::new();
    for i in 0..n {
        identity[i] = morphisms.len();
        pair_to_mor.insert((i, i), morphisms.len());
        morphisms.push((format!("id:{}", objects[i]), i, i));
    }
    for i in 0..n {
        for j in 0..n {
            if i != j && leq(i, j) {
                pair_to_mor.insert((i, j), morphisms.len());
                morphisms.push((format!("le:{}>{}", objects[i], objects[j]), i, j));
            }
        }
    }
    let srcs: Vec<usize> = morphisms.iter().map(|m| m.1).collect();
    let tgts: Vec<usize> = morphisms.iter().map(|m| m.2).collect();
    FinCategory::from_tables(objects, morphisms, identity, |g, f| {
        pair_to_mor.get(&(srcs[f], tgts[g])).copied()
    })
    .expect("thin categories are valid when the relation is transitive")
}

/// A thin category with explicitly named non-identity arrows and no
/// non-trivial composites (the arrow set must be composition-free).
fn poset_from_named(objects: Vec<String>, arrows: Vec<(&str, usize, usize)>) -> FinCategory {
    let n = objects.len();
    let mut morphisms = Vec::new();
    let mut identity = vec![0; n];
    for i in 0..n {
        identity[i] = morphisms.len();
        morphisms.push((format!("id:{}", objects[i]), i, i));
    }
    for (name, s, t) in &arrows {
        morphisms.push((name.to_string(), *s, *t));
    }
    FinCategory::from_tables(objects, morphisms, identity, |g, f| {
        // Identities occupy indices 0..n; the named arrows never compose.
        if f < n {
            Some(g)
        } else if g < n {
            Some(f)
        } else {
            None
        }
    })
    .expect("span-shaped categories are valid")
}

/// A permutation of `0..letters` in one-line notation.
pub(crate) type Perm = Vec<usize>;

pub(crate) fn perm_identity(letters: usize) -> Perm {
    (0..letters).collect()
}

pub(crate) fn perm_compose(g: &Perm, f: &Perm) -> Perm {
    // g after f
    f.iter().map(|&i| g[i]).collect()
}

pub(crate) fn perm_label(p: &Perm) -> String {
    if p.iter().enumerate().all(|(i, &v)| i == v) {
        "id:*".to_string()
    } else {
        let images: Vec<String> = p.iter().map(|&v| (v + 1).to_string()).collect();
        format!("g:[{}]", images.join(","))
    }
}

/// One-object category on the permutation group generated by `generators`
/// (one-line images over `0..letters`). Fails with
/// [`Error::GeneratorClosureTooLarge`] once the closure passes `cap`.
pub fn group_category(letters: usize, generators: &[Perm], cap: usize) -> Result<FinCategory> {
    for g in generators {
        let mut seen = vec![false; letters];
        if g.len() != letters || g.iter().any(|&v| v >= letters || std::mem::replace(&mut seen[v], true)) {
            return Err(Error::TypingMismatch {
                item: format!("{g:?}"),
                detail: format!("not a permutation of {letters} letters"),
            });
        }
    }
    let mut elements = vec![perm_identity(letters)];
    let mut seen: HashMap<Perm, usize> = HashMap::new();
    seen.insert(elements[0].clone(), 0);
    let mut frontier = 0;
    while frontier < elements.len() {
        let current = elements[frontier].clone();
        frontier += 1;
        for g in generators {
            let next = perm_compose(g, &current);
            if !seen.contains_key(&next) {
                if elements.len() >= cap {
                    return Err(Error::GeneratorClosureTooLarge { cap });
                }
                seen.insert(next.clone(), elements.len());
                elements.push(next);
            }
        }
    }
    elements.sort();
    let index: HashMap<Perm, usize> = elements
        .iter()
        .enumerate()
        .map(|(i, p)| (p.clone(), i))
        .collect();
    let identity_ix = index[&perm_identity(letters)];
    let morphisms: Vec<(String, usize, usize)> =
        elements.iter().map(|p| (perm_label(p), 0, 0)).collect();
    FinCategory::from_tables(vec!["*".into()], morphisms, vec![identity_ix], |g, f| {
        index.get(&perm_compose(&elements[g], &elements[f])).copied()
    })
}

/// `B(Sigma_n)`: the symmetric group on `n` letters as a one-object
/// category, generated by adjacent transpositions.
pub fn symmetric_group(n: usize) -> FinCategory {
    let gens: Vec<Perm> = (0..n.saturating_sub(1))
        .map(|i| {
            let mut p = perm_identity(n);
            p.swap(i, i + 1);
            p
        })
        .collect();
    // Order n! is at most 5040 for the n that fit in a composition table.
    group_category(n, &gens, 10_000).expect("symmetric group closure fits the cap")
}

pub(crate) fn inj_label(k: usize, m: usize, images: &[usize]) -> String {
    if k == m && images.iter().enumerate().all(|(i, &v)| i == v) {
        format!("id:{k}")
    } else {
        let imgs: Vec<String> = images.iter().map(|&v| (v + 1).to_string()).collect();
        format!("inj:{k}>{m}:[{}]", imgs.join(","))
    }
}

fn injections(k: usize, m: usize) -> Vec<Vec<usize>> {
    // All injective maps {0..k} -> {0..m}, lexicographic by image tuple.
    let mut out = Vec::new();
    let mut stack: Vec<Vec<usize>> = vec![Vec::new()];
    while let Some(partial) = stack.pop() {
        if partial.len() == k {
            out.push(partial);
            continue;
        }
        for v in (0..m).rev() {
            if !partial.contains(&v) {
                let mut next = partial.clone();
                next.push(v);
                stack.push(next);
            }
        }
    }
    out
}

/// The skeleton of finite sets of cardinality at most `n` with injections:
/// objects `0 ..= n` (cardinalities), morphisms all injective maps between
/// the standard sets.
pub fn fin_inj_leq(n: usize) -> FinCategory {
    let objects: Vec<String> = (0..=n).map(|k| k.to_string()).collect();
    let mut morphisms = Vec::new();
    let mut data: Vec<(usize, usize, Vec<usize>)> = Vec::new();
    let mut index: HashMap<(usize, usize, Vec<usize>), usize> = HashMap::new();
    let mut identity = vec![0; n + 1];
    for k in 0..=n {
        for m in k..=n {
            for images in injections(k, m) {
                let ix = morphisms.len();
                if k == m && images.iter().enumerate().all(|(i, &v)| i == v) {
                    identity[k] = ix;
                }
                index.insert((k, m, images.clone()), ix);
                morphisms.push((inj_label(k, m, &images), k, m));
                data.push((k, m, images));
            }
        }
    }
    FinCategory::from_tables(objects, morphisms, identity, |g, f| {
        let (fk, fm, fi) = &data[f];
        let (gk, gm, gi) = &data[g];
        debug_assert_eq!(fm, gk);
        let composed: Vec<usize> = fi.iter().map(|&v| gi[v]).collect();
        index.get(&(*fk, *gm, composed)).copied()
    })
    .expect("fin_inj skeleton is valid")
}

/// The full inclusion of `B(Sigma_n)` into `fin_inj_leq(n)` on the
/// `n`-element set.
pub fn symmetric_group_into_fin_inj(n: usize) -> Result<FinFunctor> {
    let source = Arc::new(symmetric_group(n));
    let target = Arc::new(fin_inj_leq(n));
    // symmetric_group lists its elements sorted by one-line images, so the
    // sorted permutation list below matches its morphism order.
    let mut elements: Vec<Perm> = permutations(n);
    elements.sort();
    let mor_map = elements
        .iter()
        .map(|p| target.morphism_index(&inj_label(n, n, p)))
        .collect::<Result<Vec<_>>>()?;
    let ob_map = vec![target.object_index(&n.to_string())?];
    FinFunctor::new(source, target, ob_map, mor_map)
}

pub(crate) fn permutations(n: usize) -> Vec<Perm> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|p| {
                (0..n).filter_map(move |v| {
                    if p.contains(&v) {
                        None
                    } else {
                        let mut q = p.clone();
                        q.push(v);
                        Some(q)
                    }
                })
            })
            .collect();
    }
    out
}

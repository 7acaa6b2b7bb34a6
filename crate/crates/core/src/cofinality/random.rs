//! Seed-deterministic random instances for the verification harness.
//!
//! Raw composition tables sampled at random essentially never satisfy
//! associativity, so categories are assembled from blocks that are
//! associative by construction: random preorders (reflexive-transitive
//! closures, so isomorphism cycles do occur), permutation-group
//! one-object categories, their products, and disjoint unions. Diagrams
//! are sampled as quotients of coproducts of representables, which is a
//! presentation every Set-valued diagram admits, so the sampler's range
//! is not artificially thin.

use std::collections::HashMap;
use std::sync::Arc;

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use crate::fincat::{builders, FinCategory, FinFunctor, SetDiagram, UnionFind};
use crate::setfun::Weight;
use crate::{Error, Result};

/// Caps for generated instances.
#[derive(Debug, Clone, Copy)]
pub struct SizeConfig {
    pub max_objects: usize,
    pub max_morphisms: usize,
    pub max_carrier: usize,
    pub max_retries: usize,
}

impl Default for SizeConfig {
    fn default() -> Self {
        SizeConfig {
            max_objects: 4,
            max_morphisms: 14,
            max_carrier: 4,
            max_retries: 64,
        }
    }
}

/// A generated harness instance: a functor `f: J -> I`, a weight on `J`
/// and a diagram on `I`.
#[derive(Debug, Clone)]
pub struct RandomInstance {
    pub j: Arc<FinCategory>,
    pub i: Arc<FinCategory>,
    pub f: FinFunctor,
    pub w: Weight,
    pub x: SetDiagram,
    pub seed: u64,
}

/// Splits a root seed into independent per-instance seeds.
pub fn instance_seed(root: u64, index: u64) -> u64 {
    let mut z = root ^ index.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn random_instance(seed: u64, cfg: &SizeConfig) -> Result<RandomInstance> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..cfg.max_retries {
        let j = Arc::new(random_category(&mut rng, cfg));
        let i = Arc::new(random_category(&mut rng, cfg));
        let Some(f) = random_functor(&mut rng, &j, &i) else {
            continue;
        };
        let w = Weight::from_diagram(random_diagram(
            &mut rng,
            &Arc::new(j.opposite()),
            cfg.max_carrier,
        ));
        let x = random_diagram(&mut rng, &i, cfg.max_carrier);
        return Ok(RandomInstance { j, i, f, w, x, seed });
    }
    Err(Error::GenerationRetryExceeded {
        retries: cfg.max_retries,
    })
}

/// A random category within the caps.
pub fn random_category(rng: &mut ChaCha8Rng, cfg: &SizeConfig) -> FinCategory {
    for _ in 0..cfg.max_retries {
        let flavor = rng.gen_range(0..10u32);
        let c = match flavor {
            0 => builders::discrete(rng.gen_range(0..=2)),
            1..=4 => random_preorder(rng, cfg.max_objects),
            5 | 6 => random_group(rng),
            7 | 8 => {
                let p = random_preorder(rng, cfg.max_objects.saturating_sub(1).max(1));
                let g = random_group(rng);
                p.product(&g)
            }
            _ => {
                let a = random_preorder(rng, 2);
                let b = random_preorder(rng, 2);
                disjoint_union(&a, &b)
            }
        };
        if c.n_objects() <= cfg.max_objects && c.n_morphisms() <= cfg.max_morphisms {
            return c;
        }
    }
    if cfg.max_objects == 0 || cfg.max_morphisms == 0 {
        builders::discrete(0)
    } else {
        builders::point()
    }
}

fn random_preorder(rng: &mut ChaCha8Rng, max_objects: usize) -> FinCategory {
    let n = rng.gen_range(1..=max_objects.max(1));
    let p = match rng.gen_range(0..3) {
        0 => 0.2,
        1 => 0.4,
        _ => 0.6,
    };
    let mut leq = vec![vec![false; n]; n];
    for (i, row) in leq.iter_mut().enumerate() {
        row[i] = true;
    }
    for i in 0..n {
        for j in 0..n {
            if i != j && rng.gen_bool(p) {
                leq[i][j] = true;
            }
        }
    }
    // Transitive closure; cycles survive as isomorphism classes.
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if leq[i][k] && leq[k][j] {
                    leq[i][j] = true;
                }
            }
        }
    }
    let objects = (0..n).map(|i| format!("o{i}")).collect();
    builders::poset_from_leq(objects, move |i, j| leq[i][j])
}

fn random_group(rng: &mut ChaCha8Rng) -> FinCategory {
    match rng.gen_range(0..4) {
        0 => builders::point(),
        1 => builders::symmetric_group(2),
        2 => builders::group_category(3, &[vec![1, 2, 0]], 10).expect("Z/3 fits"),
        _ => builders::symmetric_group(3),
    }
}

fn disjoint_union(a: &FinCategory, b: &FinCategory) -> FinCategory {
    let objects: Vec<String> = a
        .object_ids()
        .iter()
        .map(|o| format!("l.{o}"))
        .chain(b.object_ids().iter().map(|o| format!("r.{o}")))
        .collect();
    let mut morphisms = Vec::new();
    for m in 0..a.n_morphisms() {
        morphisms.push((format!("l.{}", a.morphism_id(m)), a.src(m), a.tgt(m)));
    }
    for m in 0..b.n_morphisms() {
        morphisms.push((
            format!("r.{}", b.morphism_id(m)),
            a.n_objects() + b.src(m),
            a.n_objects() + b.tgt(m),
        ));
    }
    let identity = (0..a.n_objects())
        .map(|o| a.identity_of(o))
        .chain((0..b.n_objects()).map(|o| a.n_morphisms() + b.identity_of(o)))
        .collect();
    let na = a.n_morphisms();
    FinCategory::from_tables(objects, morphisms, identity, |g, f| {
        if g < na && f < na {
            a.compose(g, f)
        } else if g >= na && f >= na {
            b.compose(g - na, f - na).map(|m| m + na)
        } else {
            None
        }
    })
    .expect("disjoint union of valid categories is valid")
}

/// A random functor `J -> I`, found by randomized backtracking over object
/// images and then morphism images constrained by typing and the full
/// composition table. Returns `None` only when no functor exists (i.e.
/// `I` is empty and `J` is not).
pub fn random_functor(
    rng: &mut ChaCha8Rng,
    j: &Arc<FinCategory>,
    i: &Arc<FinCategory>,
) -> Option<FinFunctor> {
    if j.n_objects() == 0 {
        return FinFunctor::new(j.clone(), i.clone(), Vec::new(), Vec::new()).ok();
    }
    if i.n_objects() == 0 {
        return None;
    }
    // Try a handful of random object maps, then fall back to a constant.
    for attempt in 0..12 {
        let ob_map: Vec<usize> = if attempt < 8 {
            (0..j.n_objects())
                .map(|_| rng.gen_range(0..i.n_objects()))
                .collect()
        } else {
            let c = rng.gen_range(0..i.n_objects());
            vec![c; j.n_objects()]
        };
        if let Some(mor_map) = search_morphism_map(rng, j, i, &ob_map) {
            if let Ok(f) = FinFunctor::new(j.clone(), i.clone(), ob_map, mor_map) {
                return Some(f);
            }
        }
    }
    None
}

fn search_morphism_map(
    rng: &mut ChaCha8Rng,
    j: &FinCategory,
    i: &FinCategory,
    ob_map: &[usize],
) -> Option<Vec<usize>> {
    let mut assignment: Vec<Option<usize>> = vec![None; j.n_morphisms()];
    for a in 0..j.n_objects() {
        assignment[j.identity_of(a)] = Some(i.identity_of(ob_map[a]));
    }
    let mut todo: Vec<usize> = (0..j.n_morphisms())
        .filter(|&m| assignment[m].is_none())
        .collect();
    todo.shuffle(rng);
    backtrack(j, i, ob_map, &mut assignment, &todo, 0, rng).then(|| {
        assignment
            .into_iter()
            .map(|v| v.expect("search assigned every morphism"))
            .collect()
    })
}

fn consistent(j: &FinCategory, i: &FinCategory, assignment: &[Option<usize>]) -> bool {
    for f in 0..j.n_morphisms() {
        let Some(fi) = assignment[f] else { continue };
        for &g in j.morphisms_from(j.tgt(f)) {
            let Some(gi) = assignment[g] else { continue };
            let gf = j.compose(g, f).expect("closed");
            if let Some(gfi) = assignment[gf] {
                if i.compose(gi, fi) != Some(gfi) {
                    return false;
                }
            }
        }
    }
    true
}

fn backtrack(
    j: &FinCategory,
    i: &FinCategory,
    ob_map: &[usize],
    assignment: &mut Vec<Option<usize>>,
    todo: &[usize],
    pos: usize,
    rng: &mut ChaCha8Rng,
) -> bool {
    if pos == todo.len() {
        return consistent(j, i, assignment);
    }
    let m = todo[pos];
    if assignment[m].is_some() {
        return backtrack(j, i, ob_map, assignment, todo, pos + 1, rng);
    }
    let mut candidates = i.hom(ob_map[j.src(m)], ob_map[j.tgt(m)]);
    candidates.shuffle(rng);
    for c in candidates {
        assignment[m] = Some(c);
        if consistent(j, i, assignment) && backtrack(j, i, ob_map, assignment, todo, pos + 1, rng) {
            return true;
        }
        assignment[m] = None;
    }
    false
}

/// A random Set-valued diagram: a coproduct of representables quotiented
/// by a congruence generated from random element identifications, trimmed
/// until every carrier fits `max_carrier`.
pub fn random_diagram(
    rng: &mut ChaCha8Rng,
    shape: &Arc<FinCategory>,
    max_carrier: usize,
) -> SetDiagram {
    let reps = if shape.n_objects() == 0 {
        0
    } else {
        // Keep the empty diagram in range but rare enough that the
        // harness mostly sees nontrivial instances.
        match rng.gen_range(0..8u32) {
            0 => 0,
            1..=4 => 1,
            _ => 2,
        }
    };
    let anchors: Vec<usize> = (0..reps)
        .map(|_| rng.gen_range(0..shape.n_objects()))
        .collect();

    // Carriers: element (r, u) at b, for u in Hom(anchor_r, b).
    let mut carriers: Vec<Vec<(usize, usize)>> = vec![Vec::new(); shape.n_objects()];
    for b in 0..shape.n_objects() {
        for (r, &a) in anchors.iter().enumerate() {
            for u in shape.hom(a, b) {
                carriers[b].push((r, u));
            }
        }
    }
    let positions: Vec<HashMap<(usize, usize), usize>> = carriers
        .iter()
        .map(|c| c.iter().enumerate().map(|(p, &e)| (e, p)).collect())
        .collect();
    let actions: Vec<Vec<usize>> = (0..shape.n_morphisms())
        .map(|v| {
            carriers[shape.src(v)]
                .iter()
                .map(|&(r, u)| positions[shape.tgt(v)][&(r, shape.compose(v, u).expect("composable"))])
                .collect()
        })
        .collect();
    let labels: Vec<Vec<String>> = carriers
        .iter()
        .map(|c| {
            c.iter()
                .map(|&(r, u)| format!("y{r}.{}", shape.morphism_id(u)))
                .collect()
        })
        .collect();
    let base = SetDiagram::new(shape.clone(), labels, actions)
        .expect("coproducts of representables are functorial");
    if shape.n_objects() == 0 {
        return base;
    }

    // Random identifications, then forced merges until the caps hold.
    let mut extra = rng.gen_range(0..=3usize);
    let mut diagram = base;
    loop {
        let oversized: Vec<usize> = (0..shape.n_objects())
            .filter(|&b| diagram.carrier(b).len() > max_carrier)
            .collect();
        if oversized.is_empty() && extra == 0 {
            return diagram;
        }
        let b = *oversized
            .first()
            .unwrap_or(&rng.gen_range(0..shape.n_objects().max(1)));
        if diagram.carrier(b).len() < 2 {
            if extra > 0 {
                extra -= 1;
                continue;
            }
            return diagram;
        }
        let x = rng.gen_range(0..diagram.carrier(b).len());
        let y = rng.gen_range(0..diagram.carrier(b).len());
        if x != y {
            diagram = quotient_diagram(&diagram, &[(b, x, y)]);
            extra = extra.saturating_sub(1);
        }
    }
}

/// Quotients a diagram by the congruence generated by the given element
/// identifications.
pub fn quotient_diagram(x: &SetDiagram, pairs: &[(usize, usize, usize)]) -> SetDiagram {
    quotient_diagram_with_maps(x, pairs).0
}

/// As [`quotient_diagram`], also returning the per-object map from old
/// elements to quotient elements. The partition per object is closed
/// under every action map, so the induced diagram is functorial by
/// construction (and is validated again on assembly).
pub fn quotient_diagram_with_maps(
    x: &SetDiagram,
    pairs: &[(usize, usize, usize)],
) -> (SetDiagram, Vec<Vec<usize>>) {
    let shape = x.shape();
    let mut uf: Vec<UnionFind> = (0..shape.n_objects())
        .map(|b| UnionFind::new(x.carrier(b).len()))
        .collect();
    let mut worklist: Vec<(usize, usize, usize)> = pairs.to_vec();
    while let Some((b, p, q)) = worklist.pop() {
        let (rp, rq) = (uf[b].find(p), uf[b].find(q));
        if rp == rq {
            continue;
        }
        uf[b].union(rp, rq);
        // Each pairwise merge pushes its image merges, which closes the
        // congruence: images of an already-merged class sit in one class
        // by induction, so merging one image pair merges them all.
        for &m in shape.morphisms_from(b) {
            let t = shape.tgt(m);
            worklist.push((t, x.apply(m, p), x.apply(m, q)));
        }
    }

    let mut carriers = Vec::with_capacity(shape.n_objects());
    let mut class_index: Vec<HashMap<usize, usize>> = Vec::with_capacity(shape.n_objects());
    for b in 0..shape.n_objects() {
        let mut reps: Vec<usize> = Vec::new();
        let mut index = HashMap::new();
        for e in 0..x.carrier(b).len() {
            let r = uf[b].find(e);
            index.entry(r).or_insert_with(|| {
                reps.push(e);
                reps.len() - 1
            });
        }
        carriers.push(
            reps.iter()
                .map(|&e| x.carrier(b)[e].clone())
                .collect::<Vec<_>>(),
        );
        class_index.push(index);
    }
    let actions = (0..shape.n_morphisms())
        .map(|m| {
            let (s, t) = (shape.src(m), shape.tgt(m));
            let mut action = vec![usize::MAX; carriers[s].len()];
            for e in 0..x.carrier(s).len() {
                let c = class_index[s][&uf[s].find(e)];
                let image = class_index[t][&uf[t].find(x.apply(m, e))];
                if action[c] == usize::MAX {
                    action[c] = image;
                } else {
                    debug_assert_eq!(action[c], image, "congruence closure incomplete");
                }
            }
            action
        })
        .collect();
    let element_maps = (0..shape.n_objects())
        .map(|b| {
            (0..x.carrier(b).len())
                .map(|e| class_index[b][&uf[b].find(e)])
                .collect()
        })
        .collect();
    let quotient = SetDiagram::new(shape.clone(), carriers, actions)
        .expect("quotient by a congruence is functorial");
    (quotient, element_maps)
}

/// A random monotone functor between random loop-free thin categories.
/// Flavors rotate through identities, top-element inclusions (always
/// cofinal with contractible fibers), and arbitrary monotone maps.
pub fn random_poset_functor(seed: u64, max_objects: usize) -> FinFunctor {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match seed % 3 {
        0 => {
            let i = Arc::new(random_poset(&mut rng, max_objects));
            FinFunctor::identity(i)
        }
        1 => {
            let base = random_poset(&mut rng, max_objects.saturating_sub(1).max(1));
            let i = Arc::new(adjoin_top(&base));
            let pt = Arc::new(builders::point());
            let top = i.n_objects() - 1;
            FinFunctor::new(pt, i.clone(), vec![top], vec![i.identity_of(top)])
                .expect("top inclusion is a functor")
        }
        _ => loop {
            let j = Arc::new(random_poset(&mut rng, max_objects));
            let i = Arc::new(random_poset(&mut rng, max_objects));
            if let Some(f) = random_functor(&mut rng, &j, &i) {
                break f;
            }
        },
    }
}

fn random_poset(rng: &mut ChaCha8Rng, max_objects: usize) -> FinCategory {
    let n = rng.gen_range(1..=max_objects.max(1));
    // Strict order compatible with the index order keeps it loop-free.
    let mut leq = vec![vec![false; n]; n];
    for (i, row) in leq.iter_mut().enumerate() {
        row[i] = true;
    }
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen_bool(0.5) {
                leq[i][j] = true;
            }
        }
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if leq[i][k] && leq[k][j] {
                    leq[i][j] = true;
                }
            }
        }
    }
    let objects = (0..n).map(|i| format!("p{i}")).collect();
    builders::poset_from_leq(objects, move |i, j| leq[i][j])
}

fn adjoin_top(base: &FinCategory) -> FinCategory {
    // Assumes a thin base built by poset_from_leq; rebuilds with a new
    // terminal object.
    let n = base.n_objects();
    let objects: Vec<String> = base
        .object_ids()
        .iter()
        .cloned()
        .chain(std::iter::once("top".to_string()))
        .collect();
    builders::poset_from_leq(objects, move |i, j| {
        if j == n {
            true
        } else if i == n {
            false
        } else {
            !base.hom(i, j).is_empty()
        }
    })
}

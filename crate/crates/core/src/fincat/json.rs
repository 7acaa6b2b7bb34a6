//! The on-disk JSON schemas for categories, functors and diagrams, and the
//! validators that turn raw files into checked values.
//!
//! Category files omit identities (they are forced and auto-named
//! `id:<object>`) and list composites only for non-identity composable
//! pairs; a triple `["g","f","gf"]` means "`g` after `f` equals `gf`".

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

use super::{FinCategory, FinFunctor, SetDiagram};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RawMorphism {
    pub id: String,
    pub src: String,
    pub tgt: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RawCategory {
    pub objects: Vec<String>,
    #[serde(default)]
    pub morphisms: Vec<RawMorphism>,
    #[serde(default)]
    pub compose: Vec<(String, String, String)>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RawFunctor {
    pub on_objects: BTreeMap<String, String>,
    #[serde(default)]
    pub on_morphisms: BTreeMap<String, String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RawDiagram {
    pub sets: BTreeMap<String, Vec<String>>,
    #[serde(default)]
    pub functions: BTreeMap<String, BTreeMap<String, String>>,
}

/// Materializes identities and the full composition table from a raw
/// description, then checks closure, units and associativity.
pub fn validate_category(raw: &RawCategory) -> Result<FinCategory> {
    let objects = raw.objects.clone();
    let mut obj_ix = HashMap::new();
    for (i, o) in objects.iter().enumerate() {
        if obj_ix.insert(o.clone(), i).is_some() {
            return Err(Error::DuplicateId(o.clone()));
        }
    }

    let mut morphisms: Vec<(String, usize, usize)> = Vec::new();
    let mut identity = Vec::with_capacity(objects.len());
    for (i, o) in objects.iter().enumerate() {
        identity.push(morphisms.len());
        morphisms.push((format!("id:{o}"), i, i));
    }
    for m in &raw.morphisms {
        let src = *obj_ix
            .get(&m.src)
            .ok_or_else(|| Error::UnknownObject(m.src.clone()))?;
        let tgt = *obj_ix
            .get(&m.tgt)
            .ok_or_else(|| Error::UnknownObject(m.tgt.clone()))?;
        morphisms.push((m.id.clone(), src, tgt));
    }
    let mut mor_ix = HashMap::new();
    for (i, (id, _, _)) in morphisms.iter().enumerate() {
        if mor_ix.insert(id.clone(), i).is_some() {
            return Err(Error::DuplicateId(id.clone()));
        }
    }

    let srcs: Vec<usize> = morphisms.iter().map(|m| m.1).collect();
    let tgts: Vec<usize> = morphisms.iter().map(|m| m.2).collect();
    let mut table: HashMap<(usize, usize), usize> = HashMap::new();
    for (g_id, f_id, gf_id) in &raw.compose {
        let g = *mor_ix
            .get(g_id)
            .ok_or_else(|| Error::UnknownMorphism(g_id.clone()))?;
        let f = *mor_ix
            .get(f_id)
            .ok_or_else(|| Error::UnknownMorphism(f_id.clone()))?;
        let gf = *mor_ix
            .get(gf_id)
            .ok_or_else(|| Error::UnknownMorphism(gf_id.clone()))?;
        if tgts[f] != srcs[g] {
            return Err(Error::NotComposable {
                g: g_id.clone(),
                f: f_id.clone(),
            });
        }
        if table.insert((g, f), gf).is_some() {
            return Err(Error::DuplicateId(format!("composite of ({g_id}, {f_id})")));
        }
    }
    // Unit composites are implied.
    for f in 0..morphisms.len() {
        table.insert((identity[tgts[f]], f), f);
        table.insert((f, identity[srcs[f]]), f);
    }

    FinCategory::from_tables(objects, morphisms, identity, |g, f| {
        table.get(&(g, f)).copied()
    })
}

/// The name a morphism carries in the file schema: identities are always
/// written with their forced name `id:<object>`, whatever the in-memory
/// category called them.
fn schema_morphism_id(c: &FinCategory, m: usize) -> String {
    if c.is_identity(m) {
        format!("id:{}", c.object_id(c.src(m)))
    } else {
        c.morphism_id(m).to_string()
    }
}

/// Serializes a category in the file schema (identities and unit
/// composites omitted). Composites of non-identity pairs may still land
/// on an identity; those are written with the forced `id:<object>` name.
pub fn category_to_raw(c: &FinCategory) -> RawCategory {
    let morphisms = (0..c.n_morphisms())
        .filter(|&m| !c.is_identity(m))
        .map(|m| RawMorphism {
            id: c.morphism_id(m).to_string(),
            src: c.object_id(c.src(m)).to_string(),
            tgt: c.object_id(c.tgt(m)).to_string(),
        })
        .collect();
    let mut compose = Vec::new();
    for f in 0..c.n_morphisms() {
        if c.is_identity(f) {
            continue;
        }
        for &g in c.morphisms_from(c.tgt(f)) {
            if c.is_identity(g) {
                continue;
            }
            let gf = c.compose(g, f).expect("valid category is closed");
            compose.push((
                c.morphism_id(g).to_string(),
                c.morphism_id(f).to_string(),
                schema_morphism_id(c, gf),
            ));
        }
    }
    RawCategory {
        objects: c.object_ids().to_vec(),
        morphisms,
        compose,
    }
}

/// Checks a raw functor against validated source and target categories.
/// Images of identities are forced and may be omitted from the file.
pub fn validate_functor(
    raw: &RawFunctor,
    source: Arc<FinCategory>,
    target: Arc<FinCategory>,
) -> Result<FinFunctor> {
    let mut ob_map = vec![usize::MAX; source.n_objects()];
    for (a, fa) in &raw.on_objects {
        ob_map[source.object_index(a)?] = target.object_index(fa)?;
    }
    if let Some(a) = ob_map.iter().position(|&v| v == usize::MAX) {
        return Err(Error::TypingMismatch {
            item: source.object_id(a).to_string(),
            detail: "no image object assigned".into(),
        });
    }
    let mut mor_map = vec![usize::MAX; source.n_morphisms()];
    for a in 0..source.n_objects() {
        mor_map[source.identity_of(a)] = target.identity_of(ob_map[a]);
    }
    for (m, fm) in &raw.on_morphisms {
        let m_ix = source.morphism_index(m)?;
        let fm_ix = target.morphism_index(fm)?;
        if source.is_identity(m_ix) && fm_ix != mor_map[m_ix] {
            return Err(Error::IdentityNotPreserved {
                object: source.object_id(source.src(m_ix)).to_string(),
            });
        }
        mor_map[m_ix] = fm_ix;
    }
    if let Some(m) = mor_map.iter().position(|&v| v == usize::MAX) {
        return Err(Error::TypingMismatch {
            item: source.morphism_id(m).to_string(),
            detail: "no image morphism assigned".into(),
        });
    }
    FinFunctor::new(source, target, ob_map, mor_map)
}

pub fn functor_to_raw(f: &FinFunctor) -> RawFunctor {
    let on_objects = (0..f.source().n_objects())
        .map(|a| {
            (
                f.source().object_id(a).to_string(),
                f.target().object_id(f.on_object(a)).to_string(),
            )
        })
        .collect();
    let on_morphisms = (0..f.source().n_morphisms())
        .filter(|&m| !f.source().is_identity(m))
        .map(|m| {
            (
                f.source().morphism_id(m).to_string(),
                schema_morphism_id(f.target(), f.on_morphism(m)),
            )
        })
        .collect();
    RawFunctor {
        on_objects,
        on_morphisms,
    }
}

/// Checks a raw diagram against a validated shape. Actions of identities
/// are forced and may be omitted.
pub fn validate_diagram(raw: &RawDiagram, shape: Arc<FinCategory>) -> Result<SetDiagram> {
    let mut carriers = vec![Vec::new(); shape.n_objects()];
    for (o, labels) in &raw.sets {
        carriers[shape.object_index(o)?] = labels.clone();
    }
    let mut actions: Vec<Option<Vec<usize>>> = vec![None; shape.n_morphisms()];
    for a in 0..shape.n_objects() {
        actions[shape.identity_of(a)] = Some((0..carriers[a].len()).collect());
    }
    for (m, func) in &raw.functions {
        let m_ix = shape.morphism_index(m)?;
        let (src, tgt) = (shape.src(m_ix), shape.tgt(m_ix));
        let mut action = vec![usize::MAX; carriers[src].len()];
        for (x, fx) in func {
            let x_ix = carriers[src].iter().position(|l| l == x).ok_or_else(|| {
                Error::UnknownLabel {
                    object: shape.object_id(src).to_string(),
                    label: x.clone(),
                }
            })?;
            let fx_ix = carriers[tgt].iter().position(|l| l == fx).ok_or_else(|| {
                Error::UnknownLabel {
                    object: shape.object_id(tgt).to_string(),
                    label: fx.clone(),
                }
            })?;
            action[x_ix] = fx_ix;
        }
        if let Some(x) = action.iter().position(|&v| v == usize::MAX) {
            return Err(Error::TypingMismatch {
                item: m.clone(),
                detail: format!("label `{}` has no image", carriers[src][x]),
            });
        }
        actions[m_ix] = Some(action);
    }
    let actions = actions
        .into_iter()
        .enumerate()
        .map(|(m, a)| {
            a.ok_or_else(|| Error::TypingMismatch {
                item: shape.morphism_id(m).to_string(),
                detail: "no function assigned".into(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    SetDiagram::new(shape, carriers, actions)
}

pub fn diagram_to_raw(d: &SetDiagram) -> RawDiagram {
    let shape = d.shape();
    let sets = (0..shape.n_objects())
        .map(|a| (shape.object_id(a).to_string(), d.carrier(a).to_vec()))
        .collect();
    let functions = (0..shape.n_morphisms())
        .filter(|&m| !shape.is_identity(m))
        .map(|m| {
            let func = d
                .action(m)
                .iter()
                .enumerate()
                .map(|(x, &fx)| {
                    (
                        d.carrier(shape.src(m))[x].clone(),
                        d.carrier(shape.tgt(m))[fx].clone(),
                    )
                })
                .collect();
            (shape.morphism_id(m).to_string(), func)
        })
        .collect();
    RawDiagram { sets, functions }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn arrow_raw() -> RawCategory {
        serde_json::from_str(
            r#"{"objects":["0","1"],
                "morphisms":[{"id":"f","src":"0","tgt":"1"}],
                "compose":[]}"#,
        )
        .unwrap()
    }

    #[test]
    fn walking_arrow_from_file_matches_builder() {
        let c = validate_category(&arrow_raw()).unwrap();
        assert_eq!(c, super::super::builders::walking_arrow());
    }

    #[test]
    fn chain_from_file_requires_its_composite() {
        let mut raw: RawCategory = serde_json::from_str(
            r#"{"objects":["0","1","2"],
                "morphisms":[{"id":"f","src":"0","tgt":"1"},
                             {"id":"g","src":"1","tgt":"2"},
                             {"id":"h","src":"0","tgt":"2"}],
                "compose":[["g","f","h"]]}"#,
        )
        .unwrap();
        let c = validate_category(&raw).unwrap();
        assert_eq!(c.n_morphisms(), 6);
        raw.compose.clear();
        let err = validate_category(&raw).unwrap_err();
        assert!(matches!(err, Error::MissingComposite { .. }));
    }

    #[test]
    fn mistyped_composite_is_rejected() {
        let raw: RawCategory = serde_json::from_str(
            r#"{"objects":["0","1","2"],
                "morphisms":[{"id":"f","src":"0","tgt":"1"},
                             {"id":"g","src":"1","tgt":"2"}],
                "compose":[["g","f","g"]]}"#,
        )
        .unwrap();
        let err = validate_category(&raw).unwrap_err();
        assert!(matches!(err, Error::CompositeTypeMismatch { .. }));
    }

    /// Same category up to the reindexing the file schema performs
    /// (identities are listed first after a roundtrip).
    fn assert_same_by_ids(a: &FinCategory, b: &FinCategory) {
        assert_eq!(a.object_ids(), b.object_ids());
        let mut a_ids = a.morphism_ids().to_vec();
        let mut b_ids = b.morphism_ids().to_vec();
        a_ids.sort();
        b_ids.sort();
        assert_eq!(a_ids, b_ids);
        for g_id in &a_ids {
            for f_id in &a_ids {
                let (ga, fa) = (a.morphism_index(g_id).unwrap(), a.morphism_index(f_id).unwrap());
                let (gb, fb) = (b.morphism_index(g_id).unwrap(), b.morphism_index(f_id).unwrap());
                let ca = a.compose(ga, fa).map(|m| a.morphism_id(m));
                let cb = b.compose(gb, fb).map(|m| b.morphism_id(m));
                assert_eq!(ca, cb, "composites of ({g_id}, {f_id}) differ");
            }
        }
    }

    #[test]
    fn category_roundtrips_through_the_file_schema() {
        for c in [
            super::super::builders::span(),
            super::super::builders::symmetric_group(3),
            super::super::builders::fin_inj_leq(2),
        ] {
            let raw = category_to_raw(&c);
            let text = serde_json::to_string(&raw).unwrap();
            let back = validate_category(&serde_json::from_str(&text).unwrap()).unwrap();
            assert_same_by_ids(&back, &c);
        }
    }

    #[test]
    fn functor_identity_images_are_forced() {
        let arrow = Arc::new(super::super::builders::walking_arrow());
        let pt = Arc::new(super::super::builders::point());
        let raw: RawFunctor = serde_json::from_str(r#"{"on_objects":{"*":"1"}}"#).unwrap();
        let f = validate_functor(&raw, pt, arrow.clone()).unwrap();
        assert_eq!(f.on_morphism(0), arrow.identity_of(1));
    }

    #[test]
    fn diagram_functoriality_violation_is_rejected() {
        let chain = Arc::new(super::super::builders::chain_poset(3));
        let raw: RawDiagram = serde_json::from_str(
            r#"{"sets":{"0":["x","y"],"1":["x"],"2":["u","v"]},
                "functions":{"le:0>1":{"x":"x","y":"x"},
                             "le:1>2":{"x":"u"},
                             "le:0>2":{"x":"u","y":"v"}}}"#,
        )
        .unwrap();
        let err = validate_diagram(&raw, chain.clone()).unwrap_err();
        assert!(matches!(err, Error::FunctorialityViolation { .. }));

        let raw_ok: RawDiagram = serde_json::from_str(
            r#"{"sets":{"0":["x","y"],"1":["x"],"2":["u","v"]},
                "functions":{"le:0>1":{"x":"x","y":"x"},
                             "le:1>2":{"x":"u"},
                             "le:0>2":{"x":"u","y":"u"}}}"#,
        )
        .unwrap();
        let d = validate_diagram(&raw_ok, chain).unwrap();
        assert_eq!(d.total_size(), 5);
    }
}

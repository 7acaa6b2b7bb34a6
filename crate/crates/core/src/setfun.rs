//! The calculus of Set-valued diagrams: restriction, colimits, comparison
//! maps, pointwise left Kan extensions, and weighted colimits computed by
//! two independent routes (twisted-arrow composite and coend coequalizer).
//!
//! Weights here are Set-valued where the general theory takes space-valued
//! ones. This truncation is sound for everything the crate certifies:
//! taking connected components preserves colimits, the Set-level left Kan
//! extension computes the components of the space-level one, and a
//! Set-valued weighted colimit only ever sees the components of its weight
//! (tensoring a set with a space is tensoring with its component set).
//! Homotopical content beyond components is handled separately by
//! [`crate::homotopy`].

use std::collections::HashMap;
use std::sync::Arc;

use crate::constructions::{
    lax_fiber, lax_fiber_transition, oplax_fiber, oplax_fiber_transition, twisted_arrow,
};
use crate::fincat::{FinCategory, FinFunctor, FinSetQuotient, MorIx, ObIx, SetDiagram};
use crate::{Error, Result};

/// The value of a colimit in Set: a quotient of the disjoint union of the
/// carriers, plus the cocone assigning each carrier element its class.
///
/// Generators are enumerated object-major; `locations[g]` recovers the
/// `(object, element)` pair of generator `g`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColimitValue {
    pub quotient: FinSetQuotient,
    pub cocone: Vec<Vec<usize>>,
    pub offsets: Vec<usize>,
    pub locations: Vec<(ObIx, usize)>,
}

impl ColimitValue {
    pub fn n_classes(&self) -> usize {
        self.quotient.n_classes()
    }

    pub fn class_of_element(&self, object: ObIx, element: usize) -> usize {
        self.quotient.class_of(self.offsets[object] + element)
    }
}

/// A function between the class sets of two colimits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassMap {
    pub map: Vec<usize>,
    pub source_classes: usize,
    pub target_classes: usize,
}

impl ClassMap {
    pub fn is_injective(&self) -> bool {
        let mut seen = vec![false; self.target_classes];
        self.map.iter().all(|&c| !std::mem::replace(&mut seen[c], true))
    }

    pub fn is_surjective(&self) -> bool {
        let mut seen = vec![false; self.target_classes];
        for &c in &self.map {
            seen[c] = true;
        }
        seen.into_iter().all(|b| b)
    }

    pub fn is_bijective(&self) -> bool {
        self.source_classes == self.target_classes && self.is_injective() && self.is_surjective()
    }
}

/// Builds a class map from a per-generator assignment, panicking with a
/// witness if the assignment is not constant on classes. Callers use this
/// for canonical maps whose well-definedness is a theorem; a failure here
/// is a bug (or a counterexample) and must stop the run loudly.
pub fn class_map_from_generators(
    from: &ColimitValue,
    to_classes: usize,
    mut assign: impl FnMut(usize) -> usize,
) -> ClassMap {
    let mut map = vec![usize::MAX; from.n_classes()];
    for g in 0..from.quotient.n_generators() {
        let class = from.quotient.class_of(g);
        let image = assign(g);
        if map[class] == usize::MAX {
            map[class] = image;
        } else {
            assert_eq!(
                map[class],
                image,
                "canonical map is not constant on the class of generator `{}`",
                from.quotient.generator_label(g)
            );
        }
    }
    assert!(
        map.iter().all(|&c| c != usize::MAX),
        "every class has a generator"
    );
    ClassMap {
        map,
        source_classes: from.n_classes(),
        target_classes: to_classes,
    }
}

/// Restriction of `x` on `I` along `f: J -> I`: the diagram
/// `b -> x(f(b))` with identical labels.
pub fn restrict(x: &SetDiagram, f: &FinFunctor) -> Result<SetDiagram> {
    if **f.target() != **x.shape() {
        return Err(Error::ShapeMismatch(
            "restriction: functor target differs from the diagram shape".into(),
        ));
    }
    let j = f.source().clone();
    let carriers = (0..j.n_objects())
        .map(|b| x.carrier(f.on_object(b)).to_vec())
        .collect();
    let actions = (0..j.n_morphisms())
        .map(|w| x.action(f.on_morphism(w)).to_vec())
        .collect();
    SetDiagram::new(j, carriers, actions)
}

/// The colimit of a Set-valued diagram: the disjoint union of the carriers
/// modulo the witnesses `x ~ action(f)(x)` over every morphism `f`.
pub fn colimit(x: &SetDiagram) -> ColimitValue {
    let shape = x.shape();
    let mut offsets = Vec::with_capacity(shape.n_objects());
    let mut generators = Vec::new();
    let mut locations = Vec::new();
    for a in 0..shape.n_objects() {
        offsets.push(generators.len());
        for (e, label) in x.carrier(a).iter().enumerate() {
            generators.push(format!("{}:{}", shape.object_id(a), label));
            locations.push((a, e));
        }
    }
    let mut witnesses = Vec::new();
    for m in 0..shape.n_morphisms() {
        let (s, t) = (shape.src(m), shape.tgt(m));
        for (e, &fe) in x.action(m).iter().enumerate() {
            witnesses.push((offsets[s] + e, offsets[t] + fe));
        }
    }
    let quotient = FinSetQuotient::new(generators, witnesses);
    let cocone: Vec<Vec<usize>> = (0..shape.n_objects())
        .map(|a| {
            (0..x.carrier(a).len())
                .map(|e| quotient.class_of(offsets[a] + e))
                .collect()
        })
        .collect();
    // The cocone commutes with every action by construction; assert it.
    for m in 0..shape.n_morphisms() {
        let (s, t) = (shape.src(m), shape.tgt(m));
        for (e, &fe) in x.action(m).iter().enumerate() {
            debug_assert_eq!(cocone[s][e], cocone[t][fe]);
        }
        let _ = (s, t);
    }
    ColimitValue {
        quotient,
        cocone,
        offsets,
        locations,
    }
}

/// The canonical map `colim_J (x . f) -> colim_I x` sending the class of
/// `x` at `b` to its class at `f(b)`.
pub fn comparison_map(f: &FinFunctor, x: &SetDiagram) -> Result<ComparisonResult> {
    let restricted = restrict(x, f)?;
    let lhs = colimit(&restricted);
    let rhs = colimit(x);
    let map = class_map_from_generators(&lhs, rhs.n_classes(), |g| {
        let (b, e) = lhs.locations[g];
        rhs.class_of_element(f.on_object(b), e)
    });
    Ok(ComparisonResult { lhs, rhs, map })
}

#[derive(Debug, Clone)]
pub struct ComparisonResult {
    pub lhs: ColimitValue,
    pub rhs: ColimitValue,
    pub map: ClassMap,
}

/// A pointwise left Kan extension `f_! x` along `f: J -> I`.
///
/// The value at `a` is the colimit of `x` over the oplax fiber `J_{/a}`;
/// carrier labels are the canonical class labels of that colimit. The unit
/// sends an element of `x(b)` to its class at the tautological fiber
/// object `(b, id)`.
#[derive(Debug, Clone)]
pub struct LanResult {
    pub diagram: SetDiagram,
    pub unit: Vec<Vec<usize>>,
}

pub fn lan(f: &FinFunctor, x: &SetDiagram) -> Result<LanResult> {
    if **f.source() != **x.shape() {
        return Err(Error::ShapeMismatch(
            "lan: functor source differs from the diagram shape".into(),
        ));
    }
    let j = f.source();
    let i = f.target().clone();

    let mut fibers = Vec::with_capacity(i.n_objects());
    let mut colimits = Vec::with_capacity(i.n_objects());
    for a in 0..i.n_objects() {
        let fiber = oplax_fiber(f, a)?;
        let carriers = fiber
            .anchors
            .iter()
            .map(|&(b, _)| x.carrier(b).to_vec())
            .collect();
        let actions = fiber
            .arrows
            .iter()
            .map(|&(w, _)| x.action(w).to_vec())
            .collect();
        let restricted = SetDiagram::new(fiber.category.clone(), carriers, actions)?;
        colimits.push(colimit(&restricted));
        fibers.push(fiber);
    }

    let carriers: Vec<Vec<String>> = colimits
        .iter()
        .map(|c| c.quotient.class_labels().to_vec())
        .collect();
    let mut actions = Vec::with_capacity(i.n_morphisms());
    for v in 0..i.n_morphisms() {
        let (s, t) = (i.src(v), i.tgt(v));
        let transition = oplax_fiber_transition(f, v, &fibers[s], &fibers[t])?;
        let mut action = vec![usize::MAX; carriers[s].len()];
        for g in 0..colimits[s].quotient.n_generators() {
            let (fib_ob, e) = colimits[s].locations[g];
            let class = colimits[s].quotient.class_of(g);
            let image = colimits[t].class_of_element(transition.on_object(fib_ob), e);
            if action[class] == usize::MAX {
                action[class] = image;
            } else {
                assert_eq!(
                    action[class], image,
                    "Kan extension action is not constant on classes"
                );
            }
        }
        actions.push(action);
    }
    let diagram = SetDiagram::new(Arc::new((*i).clone()), carriers, actions)?;

    let unit: Vec<Vec<usize>> = (0..j.n_objects())
        .map(|b| {
            let a = f.on_object(b);
            let taut = fibers[a]
                .object_of_anchor(b, i.identity_of(a))
                .expect("tautological fiber object exists");
            (0..x.carrier(b).len())
                .map(|e| colimits[a].class_of_element(taut, e))
                .collect()
        })
        .collect();

    // Naturality of the unit in b, checked exhaustively.
    for w in 0..j.n_morphisms() {
        let (b, b2) = (j.src(w), j.tgt(w));
        let fw = f.on_morphism(w);
        for e in 0..x.carrier(b).len() {
            assert_eq!(
                diagram.apply(fw, unit[b][e]),
                unit[b2][x.apply(w, e)],
                "Kan extension unit fails naturality at `{}`",
                j.morphism_id(w)
            );
        }
    }

    Ok(LanResult { diagram, unit })
}

/// A weight on `I`: a Set-valued diagram on `opposite(I)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Weight {
    diagram: SetDiagram,
}

impl Weight {
    /// Wraps a diagram after checking its shape is the opposite of `base`.
    pub fn over(base: &FinCategory, diagram: SetDiagram) -> Result<Weight> {
        if !base.is_opposite_of(diagram.shape()) {
            return Err(Error::ShapeMismatch(
                "weight shape is not the opposite of the base category".into(),
            ));
        }
        Ok(Weight { diagram })
    }

    /// Wraps a diagram already known to live on an opposite category.
    pub fn from_diagram(diagram: SetDiagram) -> Weight {
        Weight { diagram }
    }

    pub fn diagram(&self) -> &SetDiagram {
        &self.diagram
    }

    pub fn value(&self, a: ObIx) -> &[String] {
        self.diagram.carrier(a)
    }
}

/// The representable weight at `a`: `W(b) = Hom_I(b, a)` with
/// precomposition as the action.
pub fn representable_weight(base: &Arc<FinCategory>, a: ObIx) -> Result<Weight> {
    if a >= base.n_objects() {
        return Err(Error::UnknownObject(format!("#{a}")));
    }
    let op = Arc::new(base.opposite());
    let carriers: Vec<Vec<String>> = (0..base.n_objects())
        .map(|b| {
            base.hom(b, a)
                .into_iter()
                .map(|m| base.morphism_id(m).to_string())
                .collect()
        })
        .collect();
    let homs: Vec<Vec<MorIx>> = (0..base.n_objects()).map(|b| base.hom(b, a)).collect();
    let positions: Vec<HashMap<MorIx, usize>> = homs
        .iter()
        .map(|h| h.iter().enumerate().map(|(p, &m)| (m, p)).collect())
        .collect();
    let actions = (0..base.n_morphisms())
        .map(|v| {
            // v: b -> b' in the base acts by precomposition
            // Hom(b', a) -> Hom(b, a).
            let (b, b2) = (base.src(v), base.tgt(v));
            homs[b2]
                .iter()
                .map(|&u| positions[b][&base.compose(u, v).expect("composable")])
                .collect()
        })
        .collect();
    Ok(Weight {
        diagram: SetDiagram::new(op, carriers, actions)?,
    })
}

/// The constant singleton weight.
pub fn constant_weight(base: &Arc<FinCategory>) -> Weight {
    Weight {
        diagram: SetDiagram::constant_singleton(Arc::new(base.opposite())),
    }
}

fn check_weight_shape(w: &Weight, x: &SetDiagram) -> Result<()> {
    if !x.shape().is_opposite_of(w.diagram.shape()) {
        return Err(Error::ShapeMismatch(
            "weight does not live on the opposite of the diagram shape".into(),
        ));
    }
    Ok(())
}

pub(crate) fn pair_label(w: &str, x: &str) -> String {
    format!("({w},{x})")
}

/// The weighted colimit computed through the twisted-arrow category: the
/// plain colimit of `u |-> W(t u) x X(s u)` over `Tw(I)`. Pairs are indexed
/// row-major: `(wi, xi) -> wi * |X(s u)| + xi`.
pub fn weighted_colimit_tw(w: &Weight, x: &SetDiagram) -> Result<ColimitValue> {
    check_weight_shape(w, x)?;
    let i = x.shape().clone();
    let tw = twisted_arrow(i.clone());

    let carriers: Vec<Vec<String>> = (0..i.n_morphisms())
        .map(|u| {
            let mut labels = Vec::new();
            for wl in w.diagram.carrier(i.tgt(u)) {
                for xl in x.carrier(i.src(u)) {
                    labels.push(pair_label(wl, xl));
                }
            }
            labels
        })
        .collect();
    let actions: Vec<Vec<usize>> = (0..tw.category.n_morphisms())
        .map(|m| {
            let (g, _v, h) = tw.factorizations[m];
            let u = tw.category.src(m);
            let v_ob = tw.category.tgt(m);
            let x_size_u = x.carrier(i.src(u)).len();
            let x_size_v = x.carrier(i.src(v_ob)).len();
            let mut action = Vec::with_capacity(w.diagram.carrier(i.tgt(u)).len() * x_size_u);
            for wi in 0..w.diagram.carrier(i.tgt(u)).len() {
                for xi in 0..x_size_u {
                    let w_im = w.diagram.apply(h, wi);
                    let x_im = x.apply(g, xi);
                    action.push(w_im * x_size_v + x_im);
                }
            }
            action
        })
        .collect();
    let composite = SetDiagram::new(tw.category.clone(), carriers, actions)?;
    Ok(colimit(&composite))
}

/// The weighted colimit computed as the coend coequalizer: the quotient of
/// the pairs `(w, x)` over each object by `(W(u)w', x) ~ (w', X(u)x)` for
/// every morphism `u`. Independent of the twisted-arrow route; the two
/// must agree and the tests insist on it.
pub fn weighted_colimit_coend(w: &Weight, x: &SetDiagram) -> Result<ColimitValue> {
    check_weight_shape(w, x)?;
    let i = x.shape();
    let mut offsets = Vec::with_capacity(i.n_objects());
    let mut generators = Vec::new();
    let mut locations = Vec::new();
    for b in 0..i.n_objects() {
        offsets.push(generators.len());
        for (wi, wl) in w.diagram.carrier(b).iter().enumerate() {
            for (xi, xl) in x.carrier(b).iter().enumerate() {
                generators.push(format!("{}:{}", i.object_id(b), pair_label(wl, xl)));
                locations.push((b, wi * x.carrier(b).len() + xi));
            }
        }
    }
    let mut witnesses = Vec::new();
    for u in 0..i.n_morphisms() {
        let (b, b2) = (i.src(u), i.tgt(u));
        let (xb, xb2) = (x.carrier(b).len(), x.carrier(b2).len());
        for wi in 0..w.diagram.carrier(b2).len() {
            let w_im = w.diagram.apply(u, wi);
            for xi in 0..xb {
                let left = offsets[b] + w_im * xb + xi;
                let right = offsets[b2] + wi * xb2 + x.apply(u, xi);
                witnesses.push((left, right));
            }
        }
    }
    let quotient = FinSetQuotient::new(generators, witnesses);
    let cocone = (0..i.n_objects())
        .map(|b| {
            let size = w.diagram.carrier(b).len() * x.carrier(b).len();
            (0..size).map(|p| quotient.class_of(offsets[b] + p)).collect()
        })
        .collect();
    Ok(ColimitValue {
        quotient,
        cocone,
        offsets,
        locations,
    })
}

/// Result of cross-checking the two weighted-colimit routes.
#[derive(Debug, Clone)]
pub struct OracleAgreement {
    pub tw: ColimitValue,
    pub coend: ColimitValue,
    pub map: ClassMap,
}

/// Computes both routes and the canonical map between them, which sends
/// the class of `(u: b -> b', (w, x))` to the class of `(b, (W(u)w, x))`.
pub fn weighted_colimit_both(w: &Weight, x: &SetDiagram) -> Result<OracleAgreement> {
    let tw_value = weighted_colimit_tw(w, x)?;
    let coend_value = weighted_colimit_coend(w, x)?;
    let i = x.shape();
    let map = class_map_from_generators(&tw_value, coend_value.n_classes(), |g| {
        let (u, pair) = tw_value.locations[g];
        let xb = x.carrier(i.src(u)).len();
        let (wi, xi) = (pair / xb, pair % xb);
        let w_im = w.diagram.apply(u, wi);
        coend_value.class_of_element(i.src(u), w_im * xb + xi)
    });
    Ok(OracleAgreement {
        tw: tw_value,
        coend: coend_value,
        map,
    })
}

/// The component weight of `f: J -> I`: `W(a)` is the set of connected
/// components of the lax fiber `J_{a/}`, acted on by precomposition.
#[derive(Debug, Clone)]
pub struct Pi0FiberWeight {
    pub weight: Weight,
    pub fibers: Vec<crate::constructions::CommaResult>,
    /// Per base object: fiber object index -> carrier (component) index.
    pub component_of: Vec<Vec<usize>>,
}

pub fn pi0_fiber_weight(f: &FinFunctor) -> Result<Pi0FiberWeight> {
    let i = f.target().clone();
    let mut fibers = Vec::with_capacity(i.n_objects());
    let mut component_of = Vec::with_capacity(i.n_objects());
    let mut carriers = Vec::with_capacity(i.n_objects());
    for a in 0..i.n_objects() {
        let fiber = lax_fiber(f, a)?;
        let pi0 = fiber.category.pi0();
        carriers.push(pi0.labels.clone());
        component_of.push(pi0.component_of.clone());
        fibers.push(fiber);
    }
    let actions = (0..i.n_morphisms())
        .map(|v| {
            // v: a -> a' acts contravariantly: components over a' map to
            // components over a through the precomposition functor.
            let (a, a2) = (i.src(v), i.tgt(v));
            let transition = lax_fiber_transition(f, v, &fibers[a2], &fibers[a])?;
            let mut action = vec![usize::MAX; carriers[a2].len()];
            for ob in 0..fibers[a2].category.n_objects() {
                let c = component_of[a2][ob];
                let image = component_of[a][transition.on_object(ob)];
                if action[c] == usize::MAX {
                    action[c] = image;
                } else {
                    assert_eq!(action[c], image, "component map is not well-defined");
                }
            }
            Ok(action)
        })
        .collect::<Result<Vec<_>>>()?;
    let weight = Weight {
        diagram: SetDiagram::new(Arc::new(i.opposite()), carriers, actions)?,
    };
    Ok(Pi0FiberWeight {
        weight,
        fibers,
        component_of,
    })
}

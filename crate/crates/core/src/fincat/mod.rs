//! Finite categories as total composition tables, with validated functors,
//! Set-valued diagrams and quotients of finite sets.
//!
//! Ids of objects and morphisms are opaque UTF-8 strings; all structure
//! lives in the tables. Identities are implicit in input files and
//! auto-named `id:<object>`.

use std::collections::HashMap;
use std::sync::Arc;

use crate::{Error, Result};

pub mod builders;
pub mod json;

/// Index of an object in its category's object list.
pub type ObIx = usize;
/// Index of a morphism in its category's morphism list.
pub type MorIx = usize;

/// A finite category presented by a total composition table.
///
/// Construction through [`FinCategory::from_tables`] checks closure, the
/// unit laws and associativity exhaustively, so values of this type are
/// categories on the nose. All values are immutable after validation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinCategory {
    objects: Vec<String>,
    mor_ids: Vec<String>,
    mor_src: Vec<ObIx>,
    mor_tgt: Vec<ObIx>,
    identity: Vec<MorIx>,
    is_identity: Vec<bool>,
    /// Row-major `[g * n_mor + f]`; `Some` exactly on composable pairs.
    compose: Vec<Option<MorIx>>,
    obj_index: HashMap<String, ObIx>,
    mor_index: HashMap<String, MorIx>,
    mor_out: Vec<Vec<MorIx>>,
    mor_in: Vec<Vec<MorIx>>,
}

impl FinCategory {
    /// Assembles a category from explicit tables and checks every law.
    ///
    /// `morphisms` lists `(id, src, tgt)` including identities, `identity`
    /// maps each object to its identity morphism, and `compose_of(g, f)`
    /// must return the composite index for every composable pair.
    pub fn from_tables(
        objects: Vec<String>,
        morphisms: Vec<(String, ObIx, ObIx)>,
        identity: Vec<MorIx>,
        mut compose_of: impl FnMut(MorIx, MorIx) -> Option<MorIx>,
    ) -> Result<Self> {
        let n_obj = objects.len();
        let n_mor = morphisms.len();

        let mut obj_index = HashMap::with_capacity(n_obj);
        for (i, id) in objects.iter().enumerate() {
            if obj_index.insert(id.clone(), i).is_some() {
                return Err(Error::DuplicateId(id.clone()));
            }
        }
        let mut mor_index = HashMap::with_capacity(n_mor);
        let mut mor_ids = Vec::with_capacity(n_mor);
        let mut mor_src = Vec::with_capacity(n_mor);
        let mut mor_tgt = Vec::with_capacity(n_mor);
        for (i, (id, src, tgt)) in morphisms.iter().enumerate() {
            if mor_index.insert(id.clone(), i).is_some() {
                return Err(Error::DuplicateId(id.clone()));
            }
            if *src >= n_obj || *tgt >= n_obj {
                return Err(Error::TypingMismatch {
                    item: id.clone(),
                    detail: "src/tgt out of range".into(),
                });
            }
            mor_ids.push(id.clone());
            mor_src.push(*src);
            mor_tgt.push(*tgt);
        }

        if identity.len() != n_obj {
            return Err(Error::TypingMismatch {
                item: "identity table".into(),
                detail: format!("expected {} entries, got {}", n_obj, identity.len()),
            });
        }
        let mut is_identity = vec![false; n_mor];
        for (a, &e) in identity.iter().enumerate() {
            if e >= n_mor || mor_src[e] != a || mor_tgt[e] != a {
                return Err(Error::TypingMismatch {
                    item: objects[a].clone(),
                    detail: "identity morphism has the wrong endpoints".into(),
                });
            }
            is_identity[e] = true;
        }

        let mut mor_out = vec![Vec::new(); n_obj];
        let mut mor_in = vec![Vec::new(); n_obj];
        for m in 0..n_mor {
            mor_out[mor_src[m]].push(m);
            mor_in[mor_tgt[m]].push(m);
        }

        // Closure: materialize the table on every composable pair.
        let mut compose = vec![None; n_mor * n_mor];
        for f in 0..n_mor {
            for &g in &mor_out[mor_tgt[f]] {
                match compose_of(g, f) {
                    None => {
                        return Err(Error::MissingComposite {
                            g: mor_ids[g].clone(),
                            f: mor_ids[f].clone(),
                        })
                    }
                    Some(gf) => {
                        if gf >= n_mor || mor_src[gf] != mor_src[f] || mor_tgt[gf] != mor_tgt[g] {
                            return Err(Error::CompositeTypeMismatch {
                                g: mor_ids[g].clone(),
                                f: mor_ids[f].clone(),
                                gf: mor_ids.get(gf).cloned().unwrap_or_else(|| format!("#{gf}")),
                            });
                        }
                        compose[g * n_mor + f] = Some(gf);
                    }
                }
            }
        }

        let cat = FinCategory {
            objects,
            mor_ids,
            mor_src,
            mor_tgt,
            identity,
            is_identity,
            compose,
            obj_index,
            mor_index,
            mor_out,
            mor_in,
        };
        cat.check_units()?;
        cat.check_associativity()?;
        Ok(cat)
    }

    fn check_units(&self) -> Result<()> {
        for f in 0..self.n_morphisms() {
            let left = self.compose(self.identity[self.mor_tgt[f]], f);
            let right = self.compose(f, self.identity[self.mor_src[f]]);
            if left != Some(f) || right != Some(f) {
                return Err(Error::UnitViolation {
                    f: self.mor_ids[f].clone(),
                });
            }
        }
        Ok(())
    }

    fn check_associativity(&self) -> Result<()> {
        for f in 0..self.n_morphisms() {
            for &g in &self.mor_out[self.mor_tgt[f]] {
                let gf = self.compose(g, f).expect("closure checked");
                for &h in &self.mor_out[self.mor_tgt[g]] {
                    let hg = self.compose(h, g).expect("closure checked");
                    if self.compose(h, gf) != self.compose(hg, f) {
                        return Err(Error::AssociativityViolation {
                            h: self.mor_ids[h].clone(),
                            g: self.mor_ids[g].clone(),
                            f: self.mor_ids[f].clone(),
                        });
                    }
                }
            }
        }
        Ok(())
    }

    /// Re-runs the exhaustive closure, unit and associativity checks.
    pub fn validate(&self) -> Result<()> {
        for f in 0..self.n_morphisms() {
            for &g in &self.mor_out[self.mor_tgt[f]] {
                let gf = self.compose(g, f).ok_or_else(|| Error::MissingComposite {
                    g: self.mor_ids[g].clone(),
                    f: self.mor_ids[f].clone(),
                })?;
                if self.mor_src[gf] != self.mor_src[f] || self.mor_tgt[gf] != self.mor_tgt[g] {
                    return Err(Error::CompositeTypeMismatch {
                        g: self.mor_ids[g].clone(),
                        f: self.mor_ids[f].clone(),
                        gf: self.mor_ids[gf].clone(),
                    });
                }
            }
        }
        self.check_units()?;
        self.check_associativity()
    }

    pub fn n_objects(&self) -> usize {
        self.objects.len()
    }

    pub fn n_morphisms(&self) -> usize {
        self.mor_ids.len()
    }

    pub fn object_id(&self, a: ObIx) -> &str {
        &self.objects[a]
    }

    pub fn morphism_id(&self, m: MorIx) -> &str {
        &self.mor_ids[m]
    }

    pub fn object_ids(&self) -> &[String] {
        &self.objects
    }

    pub fn morphism_ids(&self) -> &[String] {
        &self.mor_ids
    }

    pub fn object_index(&self, id: &str) -> Result<ObIx> {
        self.obj_index
            .get(id)
            .copied()
            .ok_or_else(|| Error::UnknownObject(id.into()))
    }

    pub fn morphism_index(&self, id: &str) -> Result<MorIx> {
        self.mor_index
            .get(id)
            .copied()
            .ok_or_else(|| Error::UnknownMorphism(id.into()))
    }

    pub fn src(&self, m: MorIx) -> ObIx {
        self.mor_src[m]
    }

    pub fn tgt(&self, m: MorIx) -> ObIx {
        self.mor_tgt[m]
    }

    pub fn identity_of(&self, a: ObIx) -> MorIx {
        self.identity[a]
    }

    pub fn is_identity(&self, m: MorIx) -> bool {
        self.is_identity[m]
    }

    /// `g` after `f`, or `None` when the pair is not composable.
    pub fn compose(&self, g: MorIx, f: MorIx) -> Option<MorIx> {
        self.compose[g * self.n_morphisms() + f]
    }

    /// Morphisms with source `a`, in morphism order.
    pub fn morphisms_from(&self, a: ObIx) -> &[MorIx] {
        &self.mor_out[a]
    }

    /// Morphisms with target `a`, in morphism order.
    pub fn morphisms_to(&self, a: ObIx) -> &[MorIx] {
        &self.mor_in[a]
    }

    /// The hom set `a -> b`, in morphism order.
    pub fn hom(&self, a: ObIx, b: ObIx) -> Vec<MorIx> {
        self.mor_out[a]
            .iter()
            .copied()
            .filter(|&m| self.mor_tgt[m] == b)
            .collect()
    }

    /// The opposite category: same ids, sources and targets swapped,
    /// composition transposed. Involutive on the nose.
    pub fn opposite(&self) -> FinCategory {
        let morphisms = self
            .mor_ids
            .iter()
            .enumerate()
            .map(|(m, id)| (id.clone(), self.mor_tgt[m], self.mor_src[m]))
            .collect();
        FinCategory::from_tables(self.objects.clone(), morphisms, self.identity.clone(), |g, f| {
            self.compose(f, g)
        })
        .expect("opposite of a valid category is valid")
    }

    /// Structural test for `other == self.opposite()` without building it.
    pub fn is_opposite_of(&self, other: &FinCategory) -> bool {
        self.objects == other.objects
            && self.mor_ids == other.mor_ids
            && self.mor_src == other.mor_tgt
            && self.mor_tgt == other.mor_src
            && self.identity == other.identity
            && (0..self.n_morphisms()).all(|g| {
                (0..self.n_morphisms()).all(|f| self.compose(g, f) == other.compose(f, g))
            })
    }

    /// The product category. Objects and morphisms are pairs
    /// `(<left>,<right>)`, enumerated left-major; composition is
    /// componentwise.
    pub fn product(&self, other: &FinCategory) -> FinCategory {
        let mut objects = Vec::with_capacity(self.n_objects() * other.n_objects());
        for a in &self.objects {
            for b in &other.objects {
                objects.push(format!("({a},{b})"));
            }
        }
        let n2 = other.n_morphisms();
        let mut morphisms = Vec::with_capacity(self.n_morphisms() * n2);
        for m1 in 0..self.n_morphisms() {
            for m2 in 0..other.n_morphisms() {
                morphisms.push((
                    format!("({},{})", self.mor_ids[m1], other.mor_ids[m2]),
                    self.mor_src[m1] * other.n_objects() + other.mor_src[m2],
                    self.mor_tgt[m1] * other.n_objects() + other.mor_tgt[m2],
                ));
            }
        }
        let identity = (0..self.n_objects())
            .flat_map(|a| {
                (0..other.n_objects()).map(move |b| (a, b))
            })
            .map(|(a, b)| self.identity[a] * n2 + other.identity[b])
            .collect();
        FinCategory::from_tables(objects, morphisms, identity, |g, f| {
            let gf1 = self.compose(g / n2, f / n2)?;
            let gf2 = other.compose(g % n2, f % n2)?;
            Some(gf1 * n2 + gf2)
        })
        .expect("product of valid categories is valid")
    }

    /// Connected components of the underlying graph.
    pub fn pi0(&self) -> Pi0 {
        let mut uf = UnionFind::new(self.n_objects());
        for m in 0..self.n_morphisms() {
            uf.union(self.mor_src[m], self.mor_tgt[m]);
        }
        let mut rep_label: HashMap<usize, String> = HashMap::new();
        for a in 0..self.n_objects() {
            let r = uf.find(a);
            let label = rep_label.entry(r).or_insert_with(|| self.objects[a].clone());
            if self.objects[a] < *label {
                *label = self.objects[a].clone();
            }
        }
        let mut labels: Vec<(String, usize)> =
            rep_label.into_iter().map(|(r, l)| (l, r)).collect();
        labels.sort();
        let index_of_root: HashMap<usize, usize> =
            labels.iter().enumerate().map(|(i, (_, r))| (*r, i)).collect();
        Pi0 {
            component_of: (0..self.n_objects())
                .map(|a| index_of_root[&uf.find(a)])
                .collect(),
            labels: labels.into_iter().map(|(l, _)| l).collect(),
        }
    }
}

/// Connected components of a category's underlying graph, canonically
/// labeled by the least object id in each component and sorted by label.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pi0 {
    pub component_of: Vec<usize>,
    pub labels: Vec<String>,
}

impl Pi0 {
    pub fn count(&self) -> usize {
        self.labels.len()
    }
}

/// A functor between finite categories, validated exhaustively on
/// construction: it preserves endpoints, identities and all composites.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinFunctor {
    source: Arc<FinCategory>,
    target: Arc<FinCategory>,
    ob_map: Vec<ObIx>,
    mor_map: Vec<MorIx>,
}

impl FinFunctor {
    pub fn new(
        source: Arc<FinCategory>,
        target: Arc<FinCategory>,
        ob_map: Vec<ObIx>,
        mor_map: Vec<MorIx>,
    ) -> Result<Self> {
        if ob_map.len() != source.n_objects() || mor_map.len() != source.n_morphisms() {
            return Err(Error::TypingMismatch {
                item: "functor".into(),
                detail: "object or morphism map has the wrong length".into(),
            });
        }
        for (a, &fa) in ob_map.iter().enumerate() {
            if fa >= target.n_objects() {
                return Err(Error::UnknownObject(format!("#{fa} (image of {})", source.object_id(a))));
            }
        }
        for (m, &fm) in mor_map.iter().enumerate() {
            if fm >= target.n_morphisms() {
                return Err(Error::UnknownMorphism(format!(
                    "#{fm} (image of {})",
                    source.morphism_id(m)
                )));
            }
            if target.src(fm) != ob_map[source.src(m)] || target.tgt(fm) != ob_map[source.tgt(m)] {
                return Err(Error::TypingMismatch {
                    item: source.morphism_id(m).into(),
                    detail: format!("image `{}` has the wrong endpoints", target.morphism_id(fm)),
                });
            }
        }
        for a in 0..source.n_objects() {
            if mor_map[source.identity_of(a)] != target.identity_of(ob_map[a]) {
                return Err(Error::IdentityNotPreserved {
                    object: source.object_id(a).into(),
                });
            }
        }
        for f in 0..source.n_morphisms() {
            for &g in source.morphisms_from(source.tgt(f)) {
                let gf = source.compose(g, f).expect("source is closed");
                if target.compose(mor_map[g], mor_map[f]) != Some(mor_map[gf]) {
                    return Err(Error::CompositionNotPreserved {
                        g: source.morphism_id(g).into(),
                        f: source.morphism_id(f).into(),
                    });
                }
            }
        }
        Ok(FinFunctor {
            source,
            target,
            ob_map,
            mor_map,
        })
    }

    pub fn identity(c: Arc<FinCategory>) -> Self {
        let ob_map = (0..c.n_objects()).collect();
        let mor_map = (0..c.n_morphisms()).collect();
        FinFunctor {
            source: c.clone(),
            target: c,
            ob_map,
            mor_map,
        }
    }

    pub fn source(&self) -> &Arc<FinCategory> {
        &self.source
    }

    pub fn target(&self) -> &Arc<FinCategory> {
        &self.target
    }

    pub fn on_object(&self, a: ObIx) -> ObIx {
        self.ob_map[a]
    }

    pub fn on_morphism(&self, m: MorIx) -> MorIx {
        self.mor_map[m]
    }

    pub fn object_map(&self) -> &[ObIx] {
        &self.ob_map
    }

    pub fn morphism_map(&self) -> &[MorIx] {
        &self.mor_map
    }

    /// The same maps read as a functor between the opposite categories.
    pub fn opposite(&self) -> FinFunctor {
        FinFunctor {
            source: Arc::new(self.source.opposite()),
            target: Arc::new(self.target.opposite()),
            ob_map: self.ob_map.clone(),
            mor_map: self.mor_map.clone(),
        }
    }

    /// Composition `other . self` (first `self`, then `other`).
    pub fn then(&self, other: &FinFunctor) -> Result<FinFunctor> {
        if *self.target != *other.source {
            return Err(Error::ShapeMismatch(
                "functor composition: target and source categories differ".into(),
            ));
        }
        Ok(FinFunctor {
            source: self.source.clone(),
            target: other.target.clone(),
            ob_map: self.ob_map.iter().map(|&a| other.ob_map[a]).collect(),
            mor_map: self.mor_map.iter().map(|&m| other.mor_map[m]).collect(),
        })
    }

    pub fn summary(&self) -> String {
        format!(
            "{} objects / {} morphisms -> {} objects / {} morphisms",
            self.source.n_objects(),
            self.source.n_morphisms(),
            self.target.n_objects(),
            self.target.n_morphisms()
        )
    }
}

/// A Set-valued functor on a finite category: a finite labeled set per
/// object and a function per morphism, functorial on the nose.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SetDiagram {
    shape: Arc<FinCategory>,
    carriers: Vec<Vec<String>>,
    actions: Vec<Vec<usize>>,
}

impl SetDiagram {
    pub fn new(
        shape: Arc<FinCategory>,
        carriers: Vec<Vec<String>>,
        actions: Vec<Vec<usize>>,
    ) -> Result<Self> {
        if carriers.len() != shape.n_objects() || actions.len() != shape.n_morphisms() {
            return Err(Error::ShapeMismatch(
                "diagram tables do not match the shape category".into(),
            ));
        }
        for (a, carrier) in carriers.iter().enumerate() {
            let mut seen = HashMap::new();
            for label in carrier {
                if seen.insert(label, ()).is_some() {
                    return Err(Error::DuplicateId(format!(
                        "{}:{}",
                        shape.object_id(a),
                        label
                    )));
                }
            }
        }
        for (m, action) in actions.iter().enumerate() {
            if action.len() != carriers[shape.src(m)].len() {
                return Err(Error::TypingMismatch {
                    item: shape.morphism_id(m).into(),
                    detail: "action length does not match the source carrier".into(),
                });
            }
            let tgt_len = carriers[shape.tgt(m)].len();
            if action.iter().any(|&v| v >= tgt_len) {
                return Err(Error::TypingMismatch {
                    item: shape.morphism_id(m).into(),
                    detail: "action value outside the target carrier".into(),
                });
            }
        }
        let diagram = SetDiagram {
            shape,
            carriers,
            actions,
        };
        diagram.check_functorial()?;
        Ok(diagram)
    }

    fn check_functorial(&self) -> Result<()> {
        let shape = &self.shape;
        for a in 0..shape.n_objects() {
            let id = shape.identity_of(a);
            if self.actions[id].iter().enumerate().any(|(i, &v)| i != v) {
                return Err(Error::FunctorialityViolation {
                    g: shape.morphism_id(id).into(),
                    f: shape.morphism_id(id).into(),
                });
            }
        }
        for f in 0..shape.n_morphisms() {
            for &g in shape.morphisms_from(shape.tgt(f)) {
                let gf = shape.compose(g, f).expect("shape is closed");
                let ok = self.actions[f]
                    .iter()
                    .enumerate()
                    .all(|(x, &fx)| self.actions[gf][x] == self.actions[g][fx]);
                if !ok {
                    return Err(Error::FunctorialityViolation {
                        g: shape.morphism_id(g).into(),
                        f: shape.morphism_id(f).into(),
                    });
                }
            }
        }
        Ok(())
    }

    /// The constant diagram whose value everywhere is the one-point set.
    pub fn constant_singleton(shape: Arc<FinCategory>) -> SetDiagram {
        let carriers = vec![vec!["*".to_string()]; shape.n_objects()];
        let actions = (0..shape.n_morphisms()).map(|_| vec![0]).collect();
        SetDiagram {
            shape,
            carriers,
            actions,
        }
    }

    pub fn shape(&self) -> &Arc<FinCategory> {
        &self.shape
    }

    pub fn carrier(&self, a: ObIx) -> &[String] {
        &self.carriers[a]
    }

    pub fn action(&self, m: MorIx) -> &[usize] {
        &self.actions[m]
    }

    pub fn apply(&self, m: MorIx, x: usize) -> usize {
        self.actions[m][x]
    }

    pub fn total_size(&self) -> usize {
        self.carriers.iter().map(Vec::len).sum()
    }

    pub fn label_index(&self, a: ObIx, label: &str) -> Option<usize> {
        self.carriers[a].iter().position(|l| l == label)
    }
}

/// A quotient of a finite labeled set by the finest partition containing
/// the witnessed pairs. Classes are canonically labeled by their
/// lexicographically least generator and listed in label order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinSetQuotient {
    generators: Vec<String>,
    witnesses: Vec<(usize, usize)>,
    class_of: Vec<usize>,
    classes: Vec<Vec<usize>>,
    class_labels: Vec<String>,
}

impl FinSetQuotient {
    pub fn new(generators: Vec<String>, witnesses: Vec<(usize, usize)>) -> Self {
        let mut uf = UnionFind::new(generators.len());
        for &(x, y) in &witnesses {
            uf.union(x, y);
        }
        let mut members: HashMap<usize, Vec<usize>> = HashMap::new();
        for g in 0..generators.len() {
            members.entry(uf.find(g)).or_default().push(g);
        }
        let mut classes: Vec<Vec<usize>> = members.into_values().collect();
        for class in &mut classes {
            class.sort_unstable();
        }
        classes.sort_by(|x, y| min_label(&generators, x).cmp(min_label(&generators, y)));
        let class_labels = classes
            .iter()
            .map(|c| min_label(&generators, c).clone())
            .collect();
        let mut class_of = vec![0; generators.len()];
        for (i, class) in classes.iter().enumerate() {
            for &g in class {
                class_of[g] = i;
            }
        }
        FinSetQuotient {
            generators,
            witnesses,
            class_of,
            classes,
            class_labels,
        }
    }

    pub fn n_generators(&self) -> usize {
        self.generators.len()
    }

    pub fn n_classes(&self) -> usize {
        self.classes.len()
    }

    pub fn class_of(&self, generator: usize) -> usize {
        self.class_of[generator]
    }

    pub fn classes(&self) -> &[Vec<usize>] {
        &self.classes
    }

    pub fn class_label(&self, class: usize) -> &str {
        &self.class_labels[class]
    }

    pub fn class_labels(&self) -> &[String] {
        &self.class_labels
    }

    pub fn generator_label(&self, g: usize) -> &str {
        &self.generators[g]
    }

    pub fn generators(&self) -> &[String] {
        &self.generators
    }

    pub fn witnesses(&self) -> &[(usize, usize)] {
        &self.witnesses
    }
}

fn min_label<'a>(labels: &'a [String], class: &[usize]) -> &'a String {
    class
        .iter()
        .map(|&g| &labels[g])
        .min()
        .expect("classes are nonempty")
}

/// Union-find with path halving.
#[derive(Debug, Clone)]
pub(crate) struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    pub fn union(&mut self, x: usize, y: usize) -> bool {
        let (rx, ry) = (self.find(x), self.find(y));
        self.parent[rx] = ry;
        rx != ry
    }
}

#[cfg(test)]
mod tests {
    use super::builders;
    use super::*;

    fn walking_arrow() -> FinCategory {
        builders::walking_arrow()
    }

    #[test]
    fn walking_arrow_has_forced_identities() {
        let c = walking_arrow();
        assert_eq!(c.n_objects(), 2);
        assert_eq!(c.n_morphisms(), 3);
        c.validate().unwrap();
    }

    #[test]
    fn chain_poset_counts_match_order_pair_oracle() {
        // Oracle: morphisms of a chain poset are exactly the pairs i <= j.
        for n in 0..5 {
            let pairs = (0..n).map(|i| n - i).sum::<usize>();
            let c = builders::chain_poset(n);
            assert_eq!(c.n_objects(), n);
            assert_eq!(c.n_morphisms(), pairs);
            c.validate().unwrap();
        }
        // The 3-chain has exactly one composite that is forced and not a unit.
        let c = builders::chain_poset(3);
        assert_eq!(c.n_morphisms(), 6);
        let f = c.morphism_index("le:0>1").unwrap();
        let g = c.morphism_index("le:1>2").unwrap();
        assert_eq!(c.compose(g, f), Some(c.morphism_index("le:0>2").unwrap()));
    }

    #[test]
    fn opposite_is_an_involution_on_the_nose() {
        for c in [
            builders::point(),
            walking_arrow(),
            builders::chain_poset(3),
            builders::span(),
            builders::symmetric_group(3),
        ] {
            assert_eq!(c.opposite().opposite(), c);
            assert!(c.is_opposite_of(&c.opposite()));
        }
    }

    #[test]
    fn opposite_of_symmetric_group_is_isomorphic_via_inversion() {
        let c = builders::symmetric_group(3);
        let op = Arc::new(c.opposite());
        assert_eq!(op.n_objects(), 1);
        assert_eq!(op.n_morphisms(), 6);
        // g -> g^{-1} is a functor op(BG) -> BG; find inverses by search.
        let c = Arc::new(c);
        let mor_map: Vec<MorIx> = (0..c.n_morphisms())
            .map(|g| {
                (0..c.n_morphisms())
                    .find(|&h| c.compose(h, g) == Some(c.identity_of(0)))
                    .unwrap()
            })
            .collect();
        FinFunctor::new(op, c, vec![0], mor_map).unwrap();
    }

    #[test]
    fn product_counts_multiply() {
        let arrow = walking_arrow();
        let p = arrow.opposite().product(&arrow);
        assert_eq!(p.n_objects(), 4);
        assert_eq!(p.n_morphisms(), 9);
        p.validate().unwrap();

        let pt = builders::point();
        let q = pt.product(&arrow);
        assert_eq!(q.n_objects(), arrow.n_objects());
        assert_eq!(q.n_morphisms(), arrow.n_morphisms());

        let empty = builders::discrete(0);
        assert_eq!(arrow.product(&empty).n_objects(), 0);
        assert_eq!(arrow.product(&empty).n_morphisms(), 0);
    }

    #[test]
    fn from_tables_rejects_a_mistyped_composite() {
        // g.f should land at 0 -> 2 but is assigned the morphism 1 -> 2.
        let err = FinCategory::from_tables(
            vec!["0".into(), "1".into(), "2".into()],
            vec![
                ("id:0".into(), 0, 0),
                ("id:1".into(), 1, 1),
                ("id:2".into(), 2, 2),
                ("f".into(), 0, 1),
                ("g".into(), 1, 2),
            ],
            vec![0, 1, 2],
            |g, f| match (g, f) {
                (4, 3) => Some(4),
                (g, f) if g <= 2 => Some(f),
                (g, f) if f <= 2 => Some(g),
                _ => None,
            },
        )
        .map(|_| ())
        .unwrap_err();
        assert!(matches!(err, Error::CompositeTypeMismatch { .. }));
    }

    fn z3_like_table(corrupt: bool) -> std::result::Result<FinCategory, Error> {
        // One object with endomorphisms {id, a, b, c} multiplying as Z/4
        // generated by a; corrupting one cell breaks associativity.
        FinCategory::from_tables(
            vec!["x".into()],
            vec![
                ("id:x".into(), 0, 0),
                ("a".into(), 0, 0),
                ("b".into(), 0, 0),
                ("c".into(), 0, 0),
            ],
            vec![0],
            |g, f| {
                if corrupt && g == 3 && f == 3 {
                    return Some(3); // c.c = c instead of b
                }
                Some((g + f) % 4)
            },
        )
    }

    #[test]
    fn associativity_violation_is_reported_with_its_triple() {
        assert!(z3_like_table(false).is_ok());
        let err = z3_like_table(true).map(|_| ()).unwrap_err();
        assert!(matches!(err, Error::AssociativityViolation { .. }));
    }

    #[test]
    fn quotient_classes_are_canonically_labeled() {
        let q = FinSetQuotient::new(
            vec!["d".into(), "b".into(), "a".into(), "c".into()],
            vec![(0, 1), (2, 3)],
        );
        assert_eq!(q.n_classes(), 2);
        assert_eq!(q.class_labels(), &["a".to_string(), "b".to_string()]);
        assert_eq!(q.class_of(0), q.class_of(1));
        assert_eq!(q.class_of(2), q.class_of(3));
        assert_ne!(q.class_of(0), q.class_of(2));
    }

    #[test]
    fn pi0_of_span_is_connected() {
        let span = builders::span();
        assert_eq!(span.pi0().count(), 1);
        let d3 = builders::discrete(3);
        assert_eq!(d3.pi0().count(), 3);
        assert_eq!(d3.pi0().labels, vec!["0", "1", "2"]);
    }
}

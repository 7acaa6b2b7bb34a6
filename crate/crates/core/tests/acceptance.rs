//! Acceptance suite: one test per headline property, each printing a
//! single PASS/FAIL line (run with `--nocapture` to see them). Every
//! comparison is exact; there are no tolerances anywhere.

use std::sync::Arc;

use cofinal_core::cofinality::random::{
    instance_seed, random_instance, random_poset_functor, SizeConfig,
};
use cofinal_core::cofinality::{
    all_functors, classical_cofinal, cof_quant_check, converse_witness, duality_check,
    rational_cofinal, CofinalityVerdict, FiberStatus,
};
use cofinal_core::fincat::{builders, FinCategory, FinFunctor, SetDiagram};
use cofinal_core::homotopy::{
    acyclicity_certificate, functor_homology_comparison, DegreeVerdict, HomotopyBudget,
};
use cofinal_core::setfun::{
    class_map_from_generators, colimit, comparison_map, lan, representable_weight, restrict,
    weighted_colimit_both, weighted_colimit_tw,
};
use cofinal_core::symalg::{
    fin_inj_fiber_check, reduced_sym_oracle, reduced_sym_sequential, PointedSpaceQ, SymBudget,
};

const ROOT_SEED: u64 = 20260810;
const TRIALS: u64 = 500;

fn criterion(number: usize, description: &str, pass: bool) {
    println!(
        "criterion {number:2}: {} - {description}",
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(pass, "criterion {number} failed: {description}");
}

fn harness_config() -> SizeConfig {
    SizeConfig {
        max_objects: 4,
        max_morphisms: 14,
        max_carrier: 4,
        max_retries: 64,
    }
}

#[test]
fn criterion_01_duality_theorem_suite() {
    let cfg = harness_config();
    let mut bijections = 0;
    for k in 0..TRIALS {
        let inst = random_instance(instance_seed(ROOT_SEED, k), &cfg).unwrap();
        let report = duality_check(&inst.f, &inst.w, &inst.x).unwrap();
        if report.bijection {
            bijections += 1;
        } else {
            eprintln!("duality failed on seed {}", inst.seed);
        }
    }
    criterion(
        1,
        &format!("duality bijection on {bijections}/{TRIALS} random instances"),
        bijections == TRIALS,
    );
}

#[test]
fn criterion_02_co_yoneda_with_natural_bijections() {
    let cfg = harness_config();
    let mut checked = 0;
    let mut ok = true;
    for k in 0..20u64 {
        let inst = random_instance(instance_seed(ROOT_SEED ^ 0x00C0_FFEE, k), &cfg).unwrap();
        let i = inst.i.clone();
        let x = &inst.x;
        // The canonical evaluation: the class of (u: b -> b', (w, x)) in
        // the weighted colimit at the representable weight of a is the
        // element X(w . u)(x) of X(a); representable carriers list
        // hom(b', a) in morphism order.
        let eval = |a: usize, value: &cofinal_core::setfun::ColimitValue| {
            class_map_from_generators(value, x.carrier(a).len().max(1), |g| {
                let (u, pair) = value.locations[g];
                let x_size = x.carrier(i.src(u)).len();
                let (wi, xi) = (pair / x_size, pair % x_size);
                let w_mor = i.hom(i.tgt(u), a)[wi];
                x.apply(i.compose(w_mor, u).unwrap(), xi)
            })
        };
        for a in 0..i.n_objects() {
            let w = representable_weight(&i, a).unwrap();
            let value = weighted_colimit_tw(&w, x).unwrap();
            checked += 1;
            if value.n_classes() != x.carrier(a).len() {
                ok = false;
                continue;
            }
            let phi = eval(a, &value);
            if !x.carrier(a).is_empty() {
                ok &= phi.is_bijective();
            }
            // Naturality in a: pushing the weight forward along v and
            // evaluating equals evaluating and applying X(v).
            for v in 0..i.n_morphisms() {
                if i.src(v) != a {
                    continue;
                }
                let a2 = i.tgt(v);
                let w2 = representable_weight(&i, a2).unwrap();
                let value2 = weighted_colimit_tw(&w2, x).unwrap();
                let phi2 = eval(a2, &value2);
                let push = class_map_from_generators(&value, value2.n_classes().max(1), |g| {
                    let (u, pair) = value.locations[g];
                    let x_size = x.carrier(i.src(u)).len();
                    let (wi, xi) = (pair / x_size, pair % x_size);
                    let vw = i.compose(v, i.hom(i.tgt(u), a)[wi]).unwrap();
                    let w2_pos = i
                        .hom(i.tgt(u), a2)
                        .iter()
                        .position(|&m| m == vw)
                        .unwrap();
                    value2.class_of_element(u, w2_pos * x_size + xi)
                });
                for class in 0..value.n_classes() {
                    ok &= x.apply(v, phi.map[class]) == phi2.map[push.map[class]];
                }
            }
        }
    }
    criterion(
        2,
        &format!("co-Yoneda natural bijections at {checked} objects of 20 random categories"),
        ok,
    );
}

#[test]
fn criterion_03_oracle_equivalence_tw_vs_coend() {
    let cfg = harness_config();
    let mut ok = true;
    for k in 0..TRIALS {
        let inst = random_instance(instance_seed(ROOT_SEED, k), &cfg).unwrap();
        // Left side of the duality: weight on J against the restricted
        // diagram; right side: pushed weight on I against the diagram.
        let fx = restrict(&inst.x, &inst.f).unwrap();
        let left = weighted_colimit_both(&inst.w, &fx).unwrap();
        ok &= left.map.is_bijective();
        let pushed = cofinal_core::setfun::Weight::from_diagram(
            lan(&inst.f.opposite(), inst.w.diagram()).unwrap().diagram,
        );
        let right = weighted_colimit_both(&pushed, &inst.x).unwrap();
        ok &= right.map.is_bijective();
        if !ok {
            eprintln!("oracle disagreement on seed {}", inst.seed);
            break;
        }
    }
    criterion(
        3,
        &format!("twisted-arrow and coend routes agree on {TRIALS} instances (both sides)"),
        ok,
    );
}

#[test]
fn criterion_04_quantitative_cofinality() {
    let cfg = harness_config();
    let mut ok = true;
    for k in 0..TRIALS {
        let inst = random_instance(instance_seed(ROOT_SEED, k), &cfg).unwrap();
        let report = cof_quant_check(&inst.f, &inst.x).unwrap();
        if !report.bijection {
            eprintln!("quantitative check failed on seed {}", inst.seed);
            ok = false;
            break;
        }
    }
    criterion(
        4,
        &format!("component-weight formula is a bijection on {TRIALS} instances"),
        ok,
    );
}

fn small_corpus() -> Vec<Arc<FinCategory>> {
    vec![
        Arc::new(builders::discrete(0)),
        Arc::new(builders::point()),
        Arc::new(builders::walking_arrow()),
        Arc::new(builders::discrete(2)),
        Arc::new(builders::chain_poset(3)),
        Arc::new(builders::span()),
        Arc::new(builders::cospan()),
        Arc::new(builders::symmetric_group(2)),
        Arc::new(builders::symmetric_group(3)),
        Arc::new(builders::group_category(3, &[vec![1, 2, 0]], 10).unwrap()),
        Arc::new(builders::poset_from_leq(
            vec!["a".into(), "b".into()],
            |_, _| true,
        )),
        Arc::new(builders::walking_arrow().product(&builders::symmetric_group(2))),
    ]
}

#[test]
fn criterion_05_classical_criterion_both_directions() {
    let corpus = small_corpus();
    for c in &corpus {
        assert!(c.n_objects() <= 3 && c.n_morphisms() <= 8);
    }
    let mut total = 0usize;
    let mut ok = true;
    for j in &corpus {
        for i in &corpus {
            for f in all_functors(j, i, 100_000) {
                total += 1;
                let verdict = classical_cofinal(&f).unwrap().is_cofinal();
                let mut probes_bijective = true;
                for a in 0..i.n_objects() {
                    for s in [1usize, 2] {
                        let probe = converse_witness(&f, a, s).unwrap();
                        probes_bijective &= probe.comparison_bijective;
                    }
                }
                if verdict != probes_bijective {
                    eprintln!("iff fails for a functor {}", f.summary());
                    ok = false;
                }
            }
        }
    }
    criterion(
        5,
        &format!("classical verdict iff probe bijectivity on {total} exhaustively enumerated functors"),
        ok && total > 500,
    );
}

#[test]
fn criterion_06_rational_acyclicity_of_symmetric_groups() {
    let budget = HomotopyBudget::default();
    let mut ok = true;
    for n in [2usize, 3] {
        let cert = acyclicity_certificate(&builders::symmetric_group(n), 4, &budget).unwrap();
        ok &= cert.nonempty && cert.connected;
        ok &= cert.reduced_betti == vec![0, 0, 0, 0, 0];
    }
    criterion(
        6,
        "B(Sigma_2) and B(Sigma_3) have vanishing reduced rational Betti numbers through degree 4",
        ok,
    );
}

#[test]
fn criterion_07_fin_inj_fiber_claim() {
    let budget = HomotopyBudget::default();
    let mut ok = true;
    for n in 1..=3usize {
        let report = fin_inj_fiber_check(n, 3, &budget).unwrap();
        ok &= report.pass;
        for object in &report.per_object {
            ok &= object.fiber_components == 1 && object.matches;
        }
    }
    criterion(
        7,
        "lax fibers over fin_inj objects match the symmetric-group certificates for n = 1, 2, 3",
        ok,
    );
}

#[test]
fn criterion_08_reduced_sym_formula() {
    let budget = SymBudget::default();
    let mut ok = true;
    for m in 0..=3usize {
        let x = PointedSpaceQ::with_complement_dim(m);
        let sequential = reduced_sym_sequential(&x, 4, &budget).unwrap();
        let oracle = reduced_sym_oracle(&x, 4);
        ok &= sequential.stage_dims == oracle;
        ok &= sequential.maps_injective;
    }
    let m2 = reduced_sym_sequential(&PointedSpaceQ::with_complement_dim(2), 3, &budget).unwrap();
    ok &= m2.stage_dims == vec![1, 3, 6, 10];
    criterion(
        8,
        "sequential stages equal the binomial oracle for m = 0..3, N = 4 (m = 2 gives 1,3,6,10)",
        ok,
    );
}

#[test]
fn criterion_09_theorem_a_coherence() {
    let budget = HomotopyBudget::default();
    let mut certified: Vec<FinFunctor> = Vec::new();
    let mut stream = 0u64;
    while certified.len() < 20 && stream < 1000 {
        let f = random_poset_functor(stream, 4);
        stream += 1;
        let report = rational_cofinal(&f, 3, &budget).unwrap();
        let complete = report
            .fibers
            .iter()
            .all(|(_, s)| matches!(s, FiberStatus::Certified(c) if c.complete));
        if matches!(
            report.verdict,
            CofinalityVerdict::RationallyCofinalUpToDegree(_)
        ) && complete
        {
            certified.push(f);
        }
    }
    let mut ok = certified.len() == 20;
    for f in &certified {
        let report = functor_homology_comparison(f, 3, &budget).unwrap();
        for d in &report.degrees {
            match d.verdict {
                DegreeVerdict::Isomorphism => {}
                DegreeVerdict::RankOnly => {}
                DegreeVerdict::NotIsomorphism => ok = false,
            }
        }
        // Conclusive degrees must be isomorphisms, not merely non-failures.
        ok &= report.degrees[..report.degrees.len() - 1]
            .iter()
            .all(|d| d.verdict == DegreeVerdict::Isomorphism);
    }
    criterion(
        9,
        "20 rationally certified functors induce homology isomorphisms in all conclusive degrees",
        ok,
    );
}

#[test]
fn criterion_10_negative_controls() {
    let arrow = Arc::new(builders::walking_arrow());
    let pt = Arc::new(builders::point());
    let at0 = FinFunctor::new(pt.clone(), arrow.clone(), vec![0], vec![arrow.identity_of(0)])
        .unwrap();

    let report = classical_cofinal(&at0).unwrap();
    let mut ok = matches!(
        &report.verdict,
        CofinalityVerdict::NotCofinal { witness } if witness == "1"
    );

    // The probe diagram at the witness object: comparison is not
    // surjective.
    let at1 = FinFunctor::new(pt.clone(), arrow.clone(), vec![1], vec![arrow.identity_of(1)])
        .unwrap();
    let s = SetDiagram::new(
        pt,
        vec![vec!["s0".into(), "s1".into()]],
        vec![vec![0, 1]],
    )
    .unwrap();
    let probe = lan(&at1, &s).unwrap().diagram;
    let cmp = comparison_map(&at0, &probe).unwrap();
    ok &= !cmp.map.is_surjective();
    ok &= cmp.lhs.n_classes() == 0 && cmp.rhs.n_classes() == 2;
    ok &= colimit(&probe).n_classes() == 2;

    criterion(
        10,
        "initial-object inclusion fails with witness object 1 and a non-surjective comparison",
        ok,
    );
}

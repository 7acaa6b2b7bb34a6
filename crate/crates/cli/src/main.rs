//! `cofinal`: colimit computations and cofinality checks over finite
//! categories given by composition-table JSON files.
//!
//! Machine output is a single JSON report on stdout; a human summary goes
//! to stderr unless `--quiet`. Exit code 0 means every asserted check
//! passed, 1 means a check failed (the witness is in the report), 2 means
//! a usage error. Reports are deterministic for fixed inputs, seed and
//! version; timing is kept out of the report for that reason.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;
use std::time::Instant;

use anyhow::{anyhow, Context};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use cofinal_core::cofinality::random::{instance_seed, random_instance, SizeConfig};
use cofinal_core::cofinality::{
    classical_cofinal, cof_quant_check, converse_witness, duality_check, rational_cofinal,
};
use cofinal_core::constructions::{lax_fiber, oplax_fiber, twisted_arrow, Variance};
use cofinal_core::fincat::json::{
    category_to_raw, diagram_to_raw, functor_to_raw, validate_category, validate_diagram,
    validate_functor, RawCategory, RawDiagram, RawFunctor,
};
use cofinal_core::fincat::{builders, FinCategory, FinFunctor, SetDiagram};
use cofinal_core::homotopy::{
    acyclicity_certificate, functor_homology_comparison, nerve_chains, rational_homology,
    HomotopyBudget,
};
use cofinal_core::setfun::{
    colimit, lan, weighted_colimit_both, weighted_colimit_coend, weighted_colimit_tw,
    ColimitValue, Weight,
};
use cofinal_core::symalg::{
    fin_inj_fiber_check, reduced_sym_oracle, reduced_sym_sequential, PointedSpaceQ, SymBudget,
};

#[derive(Parser)]
#[command(name = "cofinal", version, about = "Finite-category colimit calculus")]
struct Cli {
    /// Output format: `json` (report on stdout) or `summary` (human text).
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    /// Suppress the human summary on stderr.
    #[arg(long, global = true, default_value_t = false)]
    quiet: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Summary,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum VarianceArg {
    Lax,
    Oplax,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum WcolimMethod {
    Tw,
    Coend,
    Both,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CofinalMode {
    Classical,
    Rational,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum BuildKind {
    Point,
    WalkingArrow,
    Discrete,
    ChainPoset,
    Span,
    Cospan,
    SymmetricGroup,
    FinInjLeq,
}

#[derive(Subcommand)]
enum Command {
    /// Construct a comma fiber of a functor over an object.
    Comma {
        #[arg(long)]
        functor: PathBuf,
        #[arg(long)]
        source: PathBuf,
        #[arg(long)]
        target: PathBuf,
        #[arg(long)]
        object: String,
        #[arg(long, value_enum)]
        variance: VarianceArg,
    },
    /// Construct the twisted-arrow category and its projection.
    Tw {
        #[arg(long)]
        category: PathBuf,
    },
    /// Colimit of a Set-valued diagram.
    Colim {
        #[arg(long)]
        category: PathBuf,
        #[arg(long)]
        diagram: PathBuf,
    },
    /// Weighted colimit by the twisted-arrow route, the coend route, or
    /// both with the canonical comparison.
    Wcolim {
        #[arg(long)]
        category: PathBuf,
        #[arg(long)]
        weight: PathBuf,
        #[arg(long)]
        diagram: PathBuf,
        #[arg(long, value_enum, default_value_t = WcolimMethod::Both)]
        method: WcolimMethod,
    },
    /// Pointwise left Kan extension of a diagram along a functor.
    Lan {
        #[arg(long)]
        functor: PathBuf,
        #[arg(long)]
        source: PathBuf,
        #[arg(long)]
        target: PathBuf,
        #[arg(long)]
        diagram: PathBuf,
    },
    /// Rational Betti numbers of the nerve.
    Homology {
        #[arg(long)]
        category: PathBuf,
        #[arg(long, default_value_t = 3)]
        degree: usize,
    },
    /// Truncated acyclicity certificate.
    Acyclic {
        #[arg(long)]
        category: PathBuf,
        #[arg(long, default_value_t = 3)]
        degree: usize,
    },
    /// Induced map on rational nerve homology.
    TheoremA {
        #[arg(long)]
        functor: PathBuf,
        #[arg(long)]
        source: PathBuf,
        #[arg(long)]
        target: PathBuf,
        #[arg(long, default_value_t = 3)]
        degree: usize,
    },
    /// Cofinality decision for a functor.
    Cofinal {
        #[arg(long)]
        functor: PathBuf,
        #[arg(long)]
        source: PathBuf,
        #[arg(long)]
        target: PathBuf,
        #[arg(long, value_enum, default_value_t = CofinalMode::Classical)]
        mode: CofinalMode,
        #[arg(long, default_value_t = 3)]
        degree: usize,
    },
    /// Randomized duality harness: weighted-colimit duality, oracle
    /// agreement and the quantitative formula per instance.
    DualityTest {
        #[arg(long, default_value_t = 100)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 4)]
        max_objects: usize,
        #[arg(long, default_value_t = 14)]
        max_morphisms: usize,
        #[arg(long, default_value_t = 4)]
        max_carrier: usize,
    },
    /// Quantitative cofinality check for one functor and diagram.
    QuantCheck {
        #[arg(long)]
        functor: PathBuf,
        #[arg(long)]
        source: PathBuf,
        #[arg(long)]
        target: PathBuf,
        #[arg(long)]
        diagram: PathBuf,
    },
    /// Reduced symmetric algebra stages against the binomial oracle.
    Symalg {
        #[arg(long)]
        complement_dim: usize,
        #[arg(long, default_value_t = 4)]
        stages: usize,
        #[arg(long, default_value_t = false)]
        oracle_only: bool,
    },
    /// Fibers of the symmetric-group inclusion into the injections
    /// category, against the symmetric-group certificates.
    FinInjCheck {
        #[arg(long, default_value_t = 3)]
        n: usize,
        #[arg(long, default_value_t = 3)]
        degree: usize,
    },
    /// Probe one object with the point-extension diagrams.
    ConverseWitness {
        #[arg(long)]
        functor: PathBuf,
        #[arg(long)]
        source: PathBuf,
        #[arg(long)]
        target: PathBuf,
        #[arg(long)]
        object: String,
        #[arg(long, default_value_t = 2)]
        set_size: usize,
    },
    /// Emit a standard category as a JSON file on stdout.
    Build {
        #[arg(long, value_enum)]
        kind: BuildKind,
        #[arg(long, default_value_t = 2)]
        n: usize,
    },
}

#[derive(Serialize)]
struct RunReport {
    subcommand: String,
    version: String,
    inputs: BTreeMap<String, String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    seed: Option<u64>,
    verdicts: Value,
    pass: bool,
    #[serde(skip)]
    elapsed_ms: u128,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    // `build` is a generator, not a check: it prints the bare category
    // file so the output can be fed straight back in as `--category`.
    if let Command::Build { kind, n } = &cli.command {
        let category = build_standard(*kind, *n);
        println!(
            "{}",
            serde_json::to_string_pretty(&category_to_raw(&category)).expect("serializable")
        );
        return ExitCode::SUCCESS;
    }
    let started = Instant::now();
    match run(&cli.command) {
        Ok(mut report) => {
            report.elapsed_ms = started.elapsed().as_millis();
            match cli.format {
                Format::Json => {
                    println!("{}", serde_json::to_string_pretty(&report).expect("serializable"));
                }
                Format::Summary => {
                    println!(
                        "{}: {}",
                        report.subcommand,
                        if report.pass { "pass" } else { "FAIL" }
                    );
                    println!("{}", summarize(&report.verdicts));
                }
            }
            if !cli.quiet {
                eprintln!(
                    "{} {} in {} ms",
                    report.subcommand,
                    if report.pass { "passed" } else { "FAILED" },
                    report.elapsed_ms
                );
            }
            if report.pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(err) => {
            let payload = json!({ "error": err.to_string() });
            match cli.format {
                Format::Json => println!("{}", serde_json::to_string_pretty(&payload).unwrap()),
                Format::Summary => println!("error: {err}"),
            }
            if !cli.quiet {
                eprintln!("error: {err:#}");
            }
            ExitCode::from(1)
        }
    }
}

fn summarize(verdicts: &Value) -> String {
    serde_json::to_string_pretty(verdicts).unwrap_or_else(|_| verdicts.to_string())
}

fn homotopy_budget() -> HomotopyBudget {
    let mut budget = HomotopyBudget::default();
    if let Some(v) = budget_override() {
        budget.max_simplices_per_degree = v;
    }
    budget
}

fn sym_budget() -> SymBudget {
    let mut budget = SymBudget::default();
    if let Some(v) = budget_override() {
        budget.max_tensor_dim = v;
    }
    budget
}

fn budget_override() -> Option<usize> {
    std::env::var("COFINAL_BUDGET").ok()?.parse().ok()
}

struct Inputs {
    digests: BTreeMap<String, String>,
}

impl Inputs {
    fn new() -> Self {
        Inputs {
            digests: BTreeMap::new(),
        }
    }

    fn read(&mut self, path: &Path) -> anyhow::Result<String> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading {}", path.display()))?;
        let mut hasher = Sha256::new();
        hasher.update(text.as_bytes());
        self.digests.insert(
            path.display().to_string(),
            hex::encode(hasher.finalize()),
        );
        Ok(text)
    }

    fn category(&mut self, path: &Path) -> anyhow::Result<Arc<FinCategory>> {
        let raw: RawCategory = serde_json::from_str(&self.read(path)?)
            .with_context(|| format!("parsing {}", path.display()))?;
        Ok(Arc::new(validate_category(&raw)?))
    }

    fn functor(
        &mut self,
        functor: &Path,
        source: &Path,
        target: &Path,
    ) -> anyhow::Result<FinFunctor> {
        let src = self.category(source)?;
        let tgt = self.category(target)?;
        let raw: RawFunctor = serde_json::from_str(&self.read(functor)?)
            .with_context(|| format!("parsing {}", functor.display()))?;
        Ok(validate_functor(&raw, src, tgt)?)
    }

    fn diagram(&mut self, path: &Path, shape: Arc<FinCategory>) -> anyhow::Result<SetDiagram> {
        let raw: RawDiagram = serde_json::from_str(&self.read(path)?)
            .with_context(|| format!("parsing {}", path.display()))?;
        Ok(validate_diagram(&raw, shape)?)
    }
}

fn colimit_value_json(value: &ColimitValue) -> Value {
    let classes: Vec<Vec<String>> = value
        .quotient
        .classes()
        .iter()
        .map(|class| {
            class
                .iter()
                .map(|&g| value.quotient.generator_label(g).to_string())
                .collect()
        })
        .collect();
    json!({
        "classes": classes,
        "class_labels": value.quotient.class_labels(),
        "size": value.n_classes(),
    })
}

fn report(
    subcommand: &str,
    inputs: Inputs,
    seed: Option<u64>,
    verdicts: Value,
    pass: bool,
) -> RunReport {
    RunReport {
        subcommand: subcommand.to_string(),
        version: env!("CARGO_PKG_VERSION").to_string(),
        inputs: inputs.digests,
        seed,
        verdicts,
        pass,
        elapsed_ms: 0,
    }
}

fn run(command: &Command) -> anyhow::Result<RunReport> {
    match command {
        Command::Comma {
            functor,
            source,
            target,
            object,
            variance,
        } => {
            let mut inputs = Inputs::new();
            let f = inputs.functor(functor, source, target)?;
            let a = f.target().object_index(object)?;
            let result = match variance {
                VarianceArg::Lax => lax_fiber(&f, a)?,
                VarianceArg::Oplax => oplax_fiber(&f, a)?,
            };
            let verdicts = json!({
                "variance": match result.variance { Variance::Lax => "lax", Variance::Oplax => "oplax" },
                "objects": result.category.n_objects(),
                "morphisms": result.category.n_morphisms(),
                "components": result.category.pi0().count(),
                "category": category_to_raw(&result.category),
                "projection": functor_to_raw(&result.projection),
            });
            Ok(report("comma", inputs, None, verdicts, true))
        }
        Command::Tw { category } => {
            let mut inputs = Inputs::new();
            let c = inputs.category(category)?;
            let tw = twisted_arrow(c);
            let verdicts = json!({
                "objects": tw.category.n_objects(),
                "morphisms": tw.category.n_morphisms(),
                "category": category_to_raw(&tw.category),
                "projection_ts": functor_to_raw(&tw.projection_ts),
                "projection_target": category_to_raw(tw.projection_ts.target()),
            });
            Ok(report("tw", inputs, None, verdicts, true))
        }
        Command::Colim { category, diagram } => {
            let mut inputs = Inputs::new();
            let shape = inputs.category(category)?;
            let x = inputs.diagram(diagram, shape.clone())?;
            let value = colimit(&x);
            let cocone: BTreeMap<String, BTreeMap<String, String>> = (0..shape.n_objects())
                .map(|a| {
                    let assignments = x
                        .carrier(a)
                        .iter()
                        .enumerate()
                        .map(|(e, label)| {
                            (
                                label.clone(),
                                value
                                    .quotient
                                    .class_label(value.class_of_element(a, e))
                                    .to_string(),
                            )
                        })
                        .collect();
                    (shape.object_id(a).to_string(), assignments)
                })
                .collect();
            let mut verdicts = colimit_value_json(&value);
            verdicts["cocone"] = serde_json::to_value(cocone)?;
            Ok(report("colim", inputs, None, verdicts, true))
        }
        Command::Wcolim {
            category,
            weight,
            diagram,
            method,
        } => {
            let mut inputs = Inputs::new();
            let shape = inputs.category(category)?;
            let w = Weight::from_diagram(
                inputs.diagram(weight, Arc::new(shape.opposite()))?,
            );
            let x = inputs.diagram(diagram, shape.clone())?;
            let (verdicts, pass) = match method {
                WcolimMethod::Tw => {
                    let v = weighted_colimit_tw(&w, &x)?;
                    (json!({ "method": "tw", "value": colimit_value_json(&v) }), true)
                }
                WcolimMethod::Coend => {
                    let v = weighted_colimit_coend(&w, &x)?;
                    (json!({ "method": "coend", "value": colimit_value_json(&v) }), true)
                }
                WcolimMethod::Both => {
                    let both = weighted_colimit_both(&w, &x)?;
                    let agree = both.map.is_bijective();
                    (
                        json!({
                            "method": "both",
                            "tw": colimit_value_json(&both.tw),
                            "coend": colimit_value_json(&both.coend),
                            "routes_agree": agree,
                        }),
                        agree,
                    )
                }
            };
            Ok(report("wcolim", inputs, None, verdicts, pass))
        }
        Command::Lan {
            functor,
            source,
            target,
            diagram,
        } => {
            let mut inputs = Inputs::new();
            let f = inputs.functor(functor, source, target)?;
            let x = inputs.diagram(diagram, f.source().clone())?;
            let result = lan(&f, &x)?;
            let verdicts = json!({
                "diagram": diagram_to_raw(&result.diagram),
                "unit_sizes": result.unit.iter().map(Vec::len).collect::<Vec<_>>(),
            });
            Ok(report("lan", inputs, None, verdicts, true))
        }
        Command::Homology { category, degree } => {
            let mut inputs = Inputs::new();
            let c = inputs.category(category)?;
            let complex = nerve_chains(&c, *degree, &homotopy_budget())?;
            let betti = rational_homology(&complex);
            let sizes: Vec<usize> = (0..=degree + 1).map(|k| complex.basis_size(k)).collect();
            let verdicts = json!({ "betti": betti, "basis_sizes": sizes });
            Ok(report("homology", inputs, None, verdicts, true))
        }
        Command::Acyclic { category, degree } => {
            let mut inputs = Inputs::new();
            let c = inputs.category(category)?;
            let cert = acyclicity_certificate(&c, *degree, &homotopy_budget())?;
            let pass = cert.is_acyclic();
            let verdicts = serde_json::to_value(&cert)?;
            Ok(report("acyclic", inputs, None, verdicts, pass))
        }
        Command::TheoremA {
            functor,
            source,
            target,
            degree,
        } => {
            let mut inputs = Inputs::new();
            let f = inputs.functor(functor, source, target)?;
            let rep = functor_homology_comparison(&f, *degree, &homotopy_budget())?;
            let pass = rep.all_isomorphisms();
            Ok(report("theorem-a", inputs, None, serde_json::to_value(&rep)?, pass))
        }
        Command::Cofinal {
            functor,
            source,
            target,
            mode,
            degree,
        } => {
            let mut inputs = Inputs::new();
            let f = inputs.functor(functor, source, target)?;
            let rep = match mode {
                CofinalMode::Classical => classical_cofinal(&f)?,
                CofinalMode::Rational => rational_cofinal(&f, *degree, &homotopy_budget())?,
            };
            let pass = rep.is_cofinal();
            Ok(report("cofinal", inputs, None, serde_json::to_value(&rep)?, pass))
        }
        Command::DualityTest {
            trials,
            seed,
            max_objects,
            max_morphisms,
            max_carrier,
        } => {
            let cfg = SizeConfig {
                max_objects: *max_objects,
                max_morphisms: *max_morphisms,
                max_carrier: *max_carrier,
                max_retries: 64,
            };
            let mut instances = Vec::with_capacity(*trials as usize);
            let mut pass = true;
            for k in 0..*trials {
                let inst = random_instance(instance_seed(*seed, k), &cfg)
                    .map_err(|e| anyhow!("instance {k}: {e}"))?;
                let duality = duality_check(&inst.f, &inst.w, &inst.x)?;
                let quant = cof_quant_check(&inst.f, &inst.x)?;
                let restricted = cofinal_core::setfun::restrict(&inst.x, &inst.f)?;
                let oracle = weighted_colimit_both(&inst.w, &restricted)?;
                let all = duality.bijection && quant.bijection && oracle.map.is_bijective();
                pass &= all;
                instances.push(json!({
                    "seed": inst.seed,
                    "duality_bijection": duality.bijection,
                    "quant_bijection": quant.bijection,
                    "oracle_agree": oracle.map.is_bijective(),
                    "lhs": duality.lhs.n_classes(),
                    "rhs": duality.rhs.n_classes(),
                }));
            }
            let verdicts = json!({
                "trials": trials,
                "all_pass": pass,
                "instances": instances,
            });
            Ok(report("duality-test", Inputs::new(), Some(*seed), verdicts, pass))
        }
        Command::QuantCheck {
            functor,
            source,
            target,
            diagram,
        } => {
            let mut inputs = Inputs::new();
            let f = inputs.functor(functor, source, target)?;
            let x = inputs.diagram(diagram, f.target().clone())?;
            let rep = cof_quant_check(&f, &x)?;
            let verdicts = json!({
                "lhs": rep.lhs.n_classes(),
                "rhs": rep.rhs.n_classes(),
                "bijection": rep.bijection,
            });
            Ok(report("quant-check", inputs, None, verdicts, rep.bijection))
        }
        Command::Symalg {
            complement_dim,
            stages,
            oracle_only,
        } => {
            let x = PointedSpaceQ::with_complement_dim(*complement_dim);
            let oracle = reduced_sym_oracle(&x, *stages);
            let (verdicts, pass) = if *oracle_only {
                (json!({ "oracle_dims": oracle }), true)
            } else {
                let seq = reduced_sym_sequential(&x, *stages, &sym_budget())?;
                let agree = seq.stage_dims == oracle;
                (
                    json!({
                        "stage_dims": seq.stage_dims,
                        "map_ranks": seq.map_ranks,
                        "colimit_dims": seq.colimit_dims,
                        "maps_injective": seq.maps_injective,
                        "oracle_dims": oracle,
                        "oracle_agrees": agree,
                    }),
                    agree && seq.maps_injective,
                )
            };
            Ok(report("symalg", Inputs::new(), None, verdicts, pass))
        }
        Command::FinInjCheck { n, degree } => {
            let rep = fin_inj_fiber_check(*n, *degree, &homotopy_budget())?;
            let pass = rep.pass;
            Ok(report("fin-inj-check", Inputs::new(), None, serde_json::to_value(&rep)?, pass))
        }
        Command::ConverseWitness {
            functor,
            source,
            target,
            object,
            set_size,
        } => {
            let mut inputs = Inputs::new();
            let f = inputs.functor(functor, source, target)?;
            let a = f.target().object_index(object)?;
            let rep = converse_witness(&f, a, *set_size)?;
            let pass = rep.comparison_bijective;
            Ok(report("converse-witness", inputs, None, serde_json::to_value(&rep)?, pass))
        }
        Command::Build { kind, n } => {
            let category = build_standard(*kind, *n);
            let verdicts = serde_json::to_value(category_to_raw(&category))?;
            Ok(report("build", Inputs::new(), None, verdicts, true))
        }
    }
}

fn build_standard(kind: BuildKind, n: usize) -> FinCategory {
    match kind {
        BuildKind::Point => builders::point(),
        BuildKind::WalkingArrow => builders::walking_arrow(),
        BuildKind::Discrete => builders::discrete(n),
        BuildKind::ChainPoset => builders::chain_poset(n),
        BuildKind::Span => builders::span(),
        BuildKind::Cospan => builders::cospan(),
        BuildKind::SymmetricGroup => builders::symmetric_group(n),
        BuildKind::FinInjLeq => builders::fin_inj_leq(n),
    }
}

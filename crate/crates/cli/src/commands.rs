use log::warn;
use steerlab::bound::{closed_form_bound, eigenvalue_bound, BoundMethod, BruteForce, BruteForceResult};
use steerlab::fidelity::{build_hyper_state, multidof_fidelity_verdict, multidof_kernel, sandwich, DofSystem};
use steerlab::fullstate::{
    brute_force_diagnostic, decompose, evaluate_fullstate_kernel, ghz_state, w_state, wstate_verdict, W_STATE_THRESHOLD,
};
use steerlab::graph::{build_graph_state, g4_prime_local_unitaries, ColoredGraph, GraphDocument, Preset};
use steerlab::noise::{affine_threshold, sweep, threshold, SweepConfig, ThresholdMethod};
use steerlab::oneway::{
    computation_fidelity, fcomp_window, feed_forward_fidelity, process_and_average_bounds, run_branching, wcz_kernel,
    AngleSetting, Cluster,
};
use steerlab::tensor::{random_mixed, random_pure};
use steerlab::witness::{apply_local_conjugation, spec_from_graph, LocalBasis, SteeringReport, WitnessSpec};
use steerlab::{DensityOperator, Error, Execution, QuditRegister, StateVector};

use crate::config::{Format, RunConfig};
use crate::output::{Cell, Report, Table};
use crate::CliError;

pub enum Output {
    Report(Report),
    /// Text emitted as is, whatever the format.
    Raw(String),
}

impl Output {
    pub fn render(&self, format: Format) -> String {
        match self {
            Output::Report(r) => r.render(format),
            Output::Raw(s) => s.clone(),
        }
    }
}

struct Target {
    label: String,
    graph: ColoredGraph,
    state: StateVector,
    spec: WitnessSpec,
}

fn parse_preset(name: &str, cfg: &RunConfig) -> Result<Preset, CliError> {
    if name.contains('(') {
        if cfg.n.is_some() || cfg.d.is_some() {
            return Err(CliError::Usage(format!("`{name}` already fixes n and d; drop --n/--d")));
        }
        return Ok(name.parse()?);
    }
    let n = cfg.n.as_ref().map(|g| g.single("n")).transpose()?;
    let d = cfg.d.as_ref().map(|g| g.single("d")).transpose()?;
    Ok(Preset::from_name(name, n, d)?)
}

fn target(cfg: &RunConfig) -> Result<Option<Target>, CliError> {
    let (label, graph, state, preset) = if let Some(path) = &cfg.graph_file {
        if cfg.n.is_some() || cfg.d.is_some() {
            return Err(CliError::Usage("the graph file fixes n and d; drop --n/--d".into()));
        }
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        let graph = GraphDocument::parse(&text)?.into_graph()?;
        let state = build_graph_state(&graph)?;
        (path.display().to_string(), graph, state, None)
    } else if let Some(name) = &cfg.preset {
        let preset = parse_preset(name, cfg)?;
        let (graph, state) = preset.build()?;
        (preset.to_string(), graph, state, Some(preset))
    } else {
        return Ok(None);
    };
    let mut spec = spec_from_graph(&graph)?;
    if matches!(preset, Some(Preset::G4Prime)) {
        spec = apply_local_conjugation(&spec, &g4_prime_local_unitaries())?;
    }
    Ok(Some(Target { label, graph, state, spec }))
}

fn with_noise(rho: DensityOperator, noise: Option<f64>) -> Result<DensityOperator, CliError> {
    match noise {
        Some(p) if p > 0.0 => {
            let white = DensityOperator::maximally_mixed(rho.register().clone())?;
            Ok(rho.mix(&white, 1.0 - p)?)
        }
        _ => Ok(rho),
    }
}

fn source(cfg: &RunConfig, reg: &QuditRegister, ideal: &StateVector) -> Result<DensityOperator, CliError> {
    let seed = cfg.seed.unwrap_or(0);
    let rho = match cfg.state.as_deref().unwrap_or("ideal") {
        "ideal" => DensityOperator::from_pure(ideal)?,
        "random-pure" => DensityOperator::from_pure(&random_pure(reg, seed)?)?,
        "random-mixed" => random_mixed(reg, seed)?,
        s => {
            return Err(CliError::Usage(format!("unknown state `{s}` (expected ideal, random-pure or random-mixed)")))
        }
    };
    with_noise(rho, cfg.noise)
}

fn single_d(cfg: &RunConfig) -> Result<usize, CliError> {
    Ok(cfg.d.as_ref().map(|g| g.single("d")).transpose()?.unwrap_or(2))
}

fn bound_value(
    method: BoundMethod,
    q: usize,
    d: usize,
    spec: Option<&WitnessSpec>,
    exec: Execution,
) -> Result<(f64, Option<BruteForceResult>), CliError> {
    Ok(match method {
        BoundMethod::ClosedForm => (closed_form_bound(q, d)?, None),
        BoundMethod::Eigenvalue => (eigenvalue_bound(q, d)?, None),
        BoundMethod::BruteForce => {
            let spec = spec.ok_or_else(|| CliError::Usage("brute force needs --preset or --graph-file".into()))?;
            let r = BruteForce::new().exec(exec).run_spec(spec)?;
            (r.value, Some(r))
        }
    })
}

fn settings_label(spec: &WitnessSpec, term: usize) -> String {
    spec.terms()[term]
        .settings()
        .iter()
        .map(|b| match b {
            LocalBasis::Computational => '1',
            LocalBasis::Fourier => '2',
            LocalBasis::Custom(_) => 'c',
        })
        .collect()
}

fn verdict_fields(rep: &SteeringReport, method: BoundMethod) -> Vec<(&'static str, Cell)> {
    vec![
        ("kernel", rep.kernel_value.into()),
        ("bound", rep.classical_bound.into()),
        ("bound_method", method.to_string().into()),
        ("steerable", rep.steerable.into()),
        ("margin", rep.margin.into()),
        ("fidelity_lower", rep.fidelity_window.lower.into()),
        ("fidelity_upper", rep.fidelity_window.upper.into()),
    ]
}

pub fn witness(cfg: &RunConfig) -> Result<Output, CliError> {
    let method: BoundMethod = cfg.method.as_deref().unwrap_or("closed-form").parse()?;
    let exec = cfg.exec();
    let target = target(cfg)?;
    let mut report = Report::default();
    if let Some(w) = cfg.kernel {
        if cfg.noise.is_some() || cfg.state.is_some() {
            return Err(CliError::Usage("--kernel replaces the simulation; drop --noise and --state".into()));
        }
        let (q, d) = match &target {
            Some(t) => (t.spec.q(), t.graph.d()),
            None => (cfg.q.unwrap_or(2), single_d(cfg)?),
        };
        let (bound, bf) = bound_value(method, q, d, target.as_ref().map(|t| &t.spec), exec)?;
        let rep = SteeringReport::from_value(w, bound, q)?;
        let mut fields = vec![("source", Cell::from("measured")), ("q", q.into()), ("d", d.into())];
        fields.extend(verdict_fields(&rep, method));
        if let Some(bf) = bf {
            fields.push(("strategy", bf.strategy.to_string().into()));
        }
        report.add(Table::record("summary", fields));
        return Ok(Output::Report(report));
    }
    let t = target.ok_or_else(|| CliError::Usage("give --preset, --graph-file or --kernel".into()))?;
    let rho = source(cfg, t.spec.register(), &t.state)?;
    let terms = t.spec.term_values(&rho, exec)?;
    let w: f64 = terms.iter().sum();
    let (q, d) = (t.spec.q(), t.graph.d());
    let (bound, bf) = bound_value(method, q, d, Some(&t.spec), exec)?;
    let rep = SteeringReport::from_value(w, bound, q)?;
    let mut fields = vec![
        ("source", Cell::from(t.label.clone())),
        ("n", t.graph.n_vertices().into()),
        ("d", d.into()),
        ("q", q.into()),
        ("state", cfg.state.clone().unwrap_or_else(|| "ideal".into()).into()),
        ("noise", cfg.noise.unwrap_or(0.0).into()),
    ];
    fields.extend(verdict_fields(&rep, method));
    fields.push(("fidelity", rho.fidelity_with_pure(&t.state)?.into()));
    if let Some(bf) = bf {
        fields.push(("strategy", bf.strategy.to_string().into()));
    }
    report.add(Table::record("summary", fields));
    let mut table = Table::new("terms", &["term", "settings", "value"]);
    for (k, v) in terms.iter().enumerate() {
        table.push(vec![(k + 1).into(), settings_label(&t.spec, k).into(), (*v).into()]);
    }
    report.add(table);
    Ok(Output::Report(report))
}

pub fn robustness(cfg: &RunConfig) -> Result<Output, CliError> {
    let kind = cfg.preset.clone().unwrap_or_else(|| "chain".into());
    if kind.contains('(') {
        return Err(CliError::Usage("robustness takes a preset family; give sizes with --n and --d".into()));
    }
    let takes_n = matches!(kind.as_str(), "chain" | "star");
    let n_values = match (&cfg.n, takes_n) {
        (Some(g), true) => g.0.clone(),
        (None, true) => vec![4],
        (Some(_), false) => return Err(CliError::Usage(format!("preset `{kind}` has a fixed size; drop --n"))),
        (None, false) => vec![0],
    };
    let d_values = cfg.d.as_ref().map_or(vec![2], |g| g.0.clone());
    let method: ThresholdMethod = cfg.method.as_deref().unwrap_or("affine").parse()?;
    let exec = cfg.exec();
    let config = SweepConfig { kind: kind.clone(), n_values, d_values };
    let mut result = sweep(&config, exec)?;
    if method == ThresholdMethod::Bisection {
        let redone = exec.map(&result.points, |p| -> steerlab::Result<f64> {
            let (graph, psi) = Preset::from_name(&kind, Some(p.n), Some(p.d))?.build()?;
            threshold(&spec_from_graph(&graph)?, &psi, p.bound, ThresholdMethod::Bisection)
        });
        let mut kept = 0;
        for (point, r) in result.points.iter_mut().zip(redone) {
            match r {
                Ok(v) => point.p_threshold = v,
                Err(e) if e.is_cap() => {
                    result.truncated = Some(format!("{kind} n={} d={}: {e}", point.n, point.d));
                    break;
                }
                Err(e) => return Err(e.into()),
            }
            kept += 1;
        }
        result.points.truncate(kept);
    }
    let mut table = Table::new("robustness", &steerlab::noise::Sweep::CSV_HEADER.split(',').collect::<Vec<_>>());
    for p in &result.points {
        table.push(vec![
            p.graph_kind.clone().into(),
            p.n.into(),
            p.d.into(),
            p.q.into(),
            p.bound.into(),
            p.kernel_pure.into(),
            p.kernel_mixed.into(),
            p.p_threshold.into(),
        ]);
    }
    let mut report = Report::default();
    report.add(table);
    if let Some(t) = result.truncated {
        warn!("sweep stopped early: {t}");
        report.note(format!("truncated: {t}"));
    }
    Ok(Output::Report(report))
}

fn window_fields(w4: f64) -> Result<Vec<(&'static str, Cell)>, CliError> {
    let bound = closed_form_bound(2, 2)?;
    let fs = sandwich(w4, 2)?;
    let fc = fcomp_window(w4)?;
    let (fp, fav) = process_and_average_bounds(w4)?;
    Ok(vec![
        ("kernel_w4", w4.into()),
        ("bound", bound.into()),
        ("steerable", (w4 > bound).into()),
        ("fidelity_lower", fs.lower.into()),
        ("fidelity_upper", fs.upper.into()),
        ("f_comp_lower", fc.lower.into()),
        ("f_comp_upper", fc.upper.into()),
        ("f_process_lower", fp.into()),
        ("f_av_lower", fav.into()),
    ])
}

pub fn oneway(cfg: &RunConfig) -> Result<Output, CliError> {
    let cluster: Cluster = cfg.preset.as_deref().unwrap_or("horseshoe").parse()?;
    let name = match cluster {
        Cluster::Horseshoe => "horseshoe",
        Cluster::Box => "box",
    };
    let mut report = Report::default();
    if let Some(w) = cfg.kernel {
        if cfg.noise.is_some() || cfg.state.is_some() {
            return Err(CliError::Usage("--kernel replaces the simulation; drop --noise and --state".into()));
        }
        let mut fields = vec![("cluster", Cell::from(name)), ("source", "measured".into())];
        fields.extend(window_fields(w)?);
        report.add(Table::record("summary", fields));
        return Ok(Output::Report(report));
    }
    let ideal = cluster.state()?;
    let rho = source(cfg, ideal.register(), &ideal)?;
    let settings = AngleSetting::standard();
    let mut branches = Table::new("branches", &["alpha", "beta", "s2", "s3", "probability", "fidelity"]);
    for s in &settings {
        for b in run_branching(&rho, cluster, *s)? {
            let f = b.corrected_fidelity.map_or(Cell::from("zero-probability"), Cell::from);
            branches.push(vec![s.alpha.into(), s.beta.into(), b.s2.into(), b.s3.into(), b.probability.into(), f]);
        }
    }
    let f_comp = match computation_fidelity(&rho, cluster) {
        Ok(v) => Cell::from(v),
        Err(Error::ZeroProbabilityBranch { .. }) => Cell::from("zero-probability"),
        Err(e) => return Err(e.into()),
    };
    let w4 = cluster.witness()?.evaluate(&rho)?;
    let mut fields = vec![
        ("cluster", Cell::from(name)),
        ("state", cfg.state.clone().unwrap_or_else(|| "ideal".into()).into()),
        ("noise", cfg.noise.unwrap_or(0.0).into()),
        ("fidelity", rho.fidelity_with_pure(&ideal)?.into()),
        ("f_comp", f_comp),
        ("wcz_kernel", wcz_kernel(&rho, cluster)?.into()),
        ("f_feed_forward", feed_forward_fidelity(&rho, cluster, &settings)?.into()),
    ];
    fields.extend(window_fields(w4)?);
    report.add(Table::record("summary", fields));
    report.add(branches);
    Ok(Output::Report(report))
}

pub fn bound(cfg: &RunConfig) -> Result<Output, CliError> {
    let target = target(cfg)?;
    let (q, d) = match &target {
        Some(t) => {
            if cfg.q.is_some_and(|q| q != t.spec.q()) {
                return Err(CliError::Usage(format!("the graph has q = {}; drop --q", t.spec.q())));
            }
            (t.spec.q(), t.graph.d())
        }
        None => (cfg.q.unwrap_or(2), single_d(cfg)?),
    };
    let methods = match cfg.method.as_deref() {
        None if target.is_some() => vec![BoundMethod::ClosedForm, BoundMethod::Eigenvalue, BoundMethod::BruteForce],
        None => vec![BoundMethod::ClosedForm, BoundMethod::Eigenvalue],
        Some("all") => vec![BoundMethod::ClosedForm, BoundMethod::Eigenvalue, BoundMethod::BruteForce],
        Some(m) => vec![m.parse()?],
    };
    let mut table = Table::new("bound", &["method", "q", "d", "value", "strategy", "strategies"]);
    for m in &methods {
        let (v, bf) = bound_value(*m, q, d, target.as_ref().map(|t| &t.spec), cfg.exec())?;
        let (strategy, count) = match bf {
            Some(r) => (r.strategy.to_string(), Cell::from(r.strategies)),
            None => (String::new(), Cell::from("")),
        };
        table.push(vec![m.to_string().into(), q.into(), d.into(), v.into(), strategy.into(), count]);
    }
    let mut report = Report::default();
    report.add(table);
    if q >= 3 && methods.contains(&BoundMethod::Eigenvalue) {
        report.note("for q >= 3 the eigenvalue expression differs from the closed form; the closed form is the bound used by the other commands");
    }
    Ok(Output::Report(report))
}

pub fn multidof(cfg: &RunConfig) -> Result<Output, CliError> {
    let dims = cfg.d.as_ref().map_or(vec![2, 2], |g| g.0.clone());
    let dofs = DofSystem::new(dims.clone())?;
    let mut report = Report::default();
    let dims_label = cfg.d.as_ref().map_or("2,2".into(), |g| g.to_string());
    let f_threshold = 1.0 / (dofs.d_min() as f64).sqrt();
    if let Some(f) = cfg.fidelity {
        report.add(Table::record(
            "summary",
            vec![
                ("dims", dims_label.into()),
                ("fidelity", f.into()),
                ("fidelity_threshold", f_threshold.into()),
                ("steerable", multidof_fidelity_verdict(f, dofs.d_min()).into()),
            ],
        ));
        return Ok(Output::Report(report));
    }
    let ideal = build_hyper_state(&dofs)?;
    let mut rho = match cfg.mixed_dof {
        None => DensityOperator::from_pure(&ideal)?,
        Some(k) if k >= 1 && k <= dims.len() => {
            let mut acc: Option<DensityOperator> = None;
            for (j, &dj) in dims.iter().enumerate() {
                let part = if j + 1 == k {
                    DensityOperator::maximally_mixed(QuditRegister::uniform(2, dj)?)?
                } else {
                    DensityOperator::from_pure(&build_hyper_state(&DofSystem::new(vec![dj])?)?)?
                };
                acc = Some(match acc {
                    None => part,
                    Some(a) => a.kron(&part)?,
                });
            }
            acc.expect("at least one DOF")
        }
        Some(k) => return Err(CliError::Usage(format!("--mixed-dof {k} is out of range 1..={}", dims.len()))),
    };
    rho = with_noise(rho, cfg.noise)?;
    let rep = multidof_kernel(&rho, &dofs)?;
    let fidelity = rho.fidelity_with_pure(&ideal)?;
    let mut factors = Table::new("dofs", &["dof", "d", "factor"]);
    for (k, (&dk, &fk)) in dims.iter().zip(&rep.factors).enumerate() {
        factors.push(vec![(k + 1).into(), dk.into(), fk.into()]);
    }
    report.add(Table::record(
        "summary",
        vec![
            ("dims", dims_label.into()),
            ("noise", cfg.noise.unwrap_or(0.0).into()),
            ("mixed_dof", cfg.mixed_dof.map_or(Cell::from(""), Cell::from)),
            ("product", rep.product.into()),
            ("threshold", rep.threshold.into()),
            ("steerable", rep.steerable.into()),
            ("fidelity", fidelity.into()),
            ("fidelity_threshold", f_threshold.into()),
            ("fidelity_steerable", multidof_fidelity_verdict(fidelity, dofs.d_min()).into()),
        ],
    ));
    report.add(factors);
    Ok(Output::Report(report))
}

pub fn fullstate(cfg: &RunConfig) -> Result<Output, CliError> {
    let n = cfg.n.as_ref().map(|g| g.single("n")).transpose()?.unwrap_or(3);
    let kind = cfg.state.as_deref().unwrap_or("w");
    let psi = match kind {
        "w" => w_state(n)?,
        "ghz" => ghz_state(n)?,
        s => return Err(CliError::Usage(format!("unknown full-state target `{s}` (expected w or ghz)"))),
    };
    let terms = decompose(&psi)?;
    let rho = with_noise(DensityOperator::from_pure(&psi)?, cfg.noise)?;
    let kernel = evaluate_fullstate_kernel(&terms, &rho)?;
    let mut fields = vec![
        ("target", Cell::from(kind)),
        ("n", n.into()),
        ("noise", cfg.noise.unwrap_or(0.0).into()),
        ("terms", terms.len().into()),
        ("kernel", kernel.into()),
        ("fidelity", rho.fidelity_with_pure(&psi)?.into()),
    ];
    if kind == "w" && n == 3 {
        let white = DensityOperator::maximally_mixed(psi.register().clone())?;
        let mixed = evaluate_fullstate_kernel(&terms, &white)?;
        fields.push(("threshold", W_STATE_THRESHOLD.into()));
        fields.push(("steerable", wstate_verdict(kernel).into()));
        fields.push(("p_threshold", affine_threshold(1.0, mixed, W_STATE_THRESHOLD)?.into()));
    }
    let mut report = Report::default();
    report.add(Table::record("summary", fields));
    if cfg.terms {
        let mut table = Table::new("decomposition", &["observables", "outcomes", "coefficient"]);
        for t in &terms {
            let obs: String = t.observables.iter().map(|p| p.symbol()).collect();
            let out: String = t.outcomes.iter().map(|v| char::from(b'0' + v)).collect();
            table.push(vec![obs.into(), out.into(), t.coefficient.into()]);
        }
        report.add(table);
    }
    if cfg.brute_force {
        let r = brute_force_diagnostic(&terms, n)?;
        report.add(Table::record(
            "brute_force",
            vec![
                ("value", r.value.into()),
                ("strategy", r.strategy.to_string().into()),
                ("strategies", r.strategies.into()),
            ],
        ));
        report.note("the exhaustive value depends on how the projector is decomposed and is reported as a diagnostic");
    }
    if kind != "w" || n != 3 {
        report.note("no certified threshold for this target; kernel and fidelity only");
    }
    Ok(Output::Report(report))
}

pub fn build_graph(cfg: &RunConfig) -> Result<Output, CliError> {
    let t = target(cfg)?.ok_or_else(|| CliError::Usage("give --preset or --graph-file".into()))?;
    match cfg.emit.as_deref().unwrap_or("graph") {
        "graph" => Ok(Output::Raw(t.graph.to_document().to_toml())),
        "spec" => {
            let mut s = t.spec.to_json();
            s.push('\n');
            Ok(Output::Raw(s))
        }
        "state" => {
            let reg = t.state.register();
            let mut table = Table::new("state", &["index", "digits", "re", "im"]);
            for i in 0..reg.total_dim() {
                let a = t.state.amplitude(i);
                let digits: Vec<String> = reg.digits(i).iter().map(|v| v.to_string()).collect();
                table.push(vec![i.into(), digits.join(" ").into(), a.re.into(), a.im.into()]);
            }
            let mut report = Report::default();
            report.add(table);
            Ok(Output::Report(report))
        }
        e => Err(CliError::Usage(format!("unknown artifact `{e}` (expected graph, spec or state)"))),
    }
}

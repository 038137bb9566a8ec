use std::collections::HashSet;

use growthlab::blocking::{
    is_successful, protection_certificate, AxisScenario, CertificateConfig, CertificateMode, Engine, ScaffoldParams,
};
use growthlab::continuum::{breakthrough, canonical_obstacles, eigenvalues, layer_table, ContinuumConfig, Segment};
use growthlab::dynamics::{default_horizon, run_to_fixation};
use growthlab::harness::{
    empty_components, fit_exponent, geometric_grid, monotonicity_flags, phase_scan_with, planted_logistic_rows,
    red_wins_certificate, three_color_experiment, FateConfig, RedWinsParams, ScanRow, ThreeColorParams,
};
use growthlab::io::{append_sim_summary, write_scan_rows, Config, Image, ScanAppender};
use growthlab::lattice::rng::replicate_seed;
use growthlab::lattice::{sample_initial, Period};
use growthlab::{Error, Result};

use crate::{BlockingArgs, Command, ContinuumArgs, Outcome, PhaseScanArgs, RedCertArgs, SimulateArgs, ThreeColorArgs};

const OUTLINE_BOX: [u8; 3] = [0, 0, 0];
const OUTLINE_ACTIVATION: [u8; 3] = [128, 128, 128];

pub fn run(command: Command) -> Result<Outcome> {
    match command {
        Command::Simulate(a) => simulate(a),
        Command::PhaseScan(a) => phase_scan(a),
        Command::BlockingVerify(a) => blocking_verify(a),
        Command::Continuum(a) => continuum(a),
        Command::RedCert(a) => red_cert(a),
        Command::ThreeColor(a) => three_color(a),
    }
}

fn simulate(args: SimulateArgs) -> Result<Outcome> {
    let config = Config::load(&args.config)?;
    let mut model = config.model_spec()?;
    if let Some(seed) = args.seed {
        model.seed = seed;
    }
    let horizon = match args.horizon {
        Some(h) => h,
        None => default_horizon(&model)?,
    };
    let lattice = sample_initial(model.clone())?;
    let res = run_to_fixation(lattice, horizon)?;
    println!("fixation_time {}", res.fixation_time());
    println!("horizon_capped {}", res.horizon_capped);
    for (i, s) in model.species.iter().enumerate() {
        println!("frac_{} {:.6}", s.label, res.fraction(i));
    }
    println!("frac_empty {:.6}", res.empty_fraction());
    if let Some(out) = &args.out {
        Image::from_lattice(&res.lattice, args.scale.unwrap_or(config.render.scale))?.write_ppm(out)?;
    }
    if let Some(csv) = &args.csv {
        let run_id = args.config.file_stem().map_or("run".into(), |s| s.to_string_lossy().into_owned());
        append_sim_summary(csv, &run_id, &res)?;
    }
    Ok(Outcome::Pass)
}

fn phase_scan(args: PhaseScanArgs) -> Result<Outcome> {
    if args.self_test {
        return self_test(&args);
    }
    let (Some(config), Some(out)) = (&args.config, &args.out) else {
        return Err(Error::invalid("phase-scan needs a config and --out"));
    };
    let params = Config::load(config)?.scan_params()?;
    let (mut appender, existing) = ScanAppender::open(out)?;
    let done: HashSet<(u64, u64)> = existing.iter().map(ScanRow::key).collect();
    if !done.is_empty() {
        println!("resuming: {} cells already in {}", done.len(), out.display());
    }
    let fresh =
        phase_scan_with(&params, &|p, a| done.contains(&(p.to_bits(), a.to_bits())), &mut |row| appender.push(row))?;
    println!("computed {} cells", fresh.len());
    let rows: Vec<ScanRow> = existing.into_iter().chain(fresh).collect();
    for f in monotonicity_flags(&rows) {
        println!(
            "monotonicity flag: p = {}, P_blue rises from {:.3} at a = {} to {:.3} at a = {}",
            f.p, f.p_blue_at_lo, f.a_lo, f.p_blue_at_hi, f.a_hi
        );
    }
    if args.no_fit {
        return Ok(Outcome::Pass);
    }
    let fit = fit_exponent(&rows)?;
    println!("gamma_hat {:.4} +- {:.4} (predicted {:.4})", fit.gamma_hat, fit.stderr, params.setting.gamma());
    for p in &fit.omitted {
        println!("no crossing bracketed at p = {p}");
    }
    Ok(Outcome::Pass)
}

/// Planted `P(blue) = 1 / (1 + (q / p^1.5)^2)` on a grid built for exponent
/// 1.4; the fit has to find 1.5 from the data.
fn self_test(args: &PhaseScanArgs) -> Result<Outcome> {
    let rows = planted_logistic_rows(&[0.02, 0.01, 0.005, 0.0025], &geometric_grid(0.05, 20.0, 25), 1.4, 1.5);
    if let Some(out) = &args.out {
        write_scan_rows(out, &rows)?;
    }
    let fit = fit_exponent(&rows)?;
    println!("gamma_hat {:.4} +- {:.4} (planted 1.5)", fit.gamma_hat, fit.stderr);
    if (fit.gamma_hat - 1.5).abs() > 0.01 {
        return Err(Error::Fit(format!("self-test recovered {} instead of 1.5", fit.gamma_hat)));
    }
    println!("self-test passed");
    Ok(Outcome::Pass)
}

fn parse_box(s: &str) -> Result<(usize, usize)> {
    let bad = || Error::invalid(format!("--sabotage expects LAYER:INDEX, got {s:?}"));
    let (l, k) = s.split_once(':').ok_or_else(bad)?;
    Ok((l.trim().parse().map_err(|_| bad())?, k.trim().parse().map_err(|_| bad())?))
}

fn blocking_verify(args: BlockingArgs) -> Result<Outcome> {
    let r: Period = args.r.parse()?;
    let params = ScaffoldParams {
        p: args.p,
        alpha: args.alpha,
        alpha_bar: args.alpha_bar,
        m: args.m,
        rho: args.rho,
        ell_max: args.ell_max,
    };
    let mut scenario = AxisScenario::build(params, args.c, args.seed)?;
    if let Some(s) = &args.sabotage {
        let (layer, index) = parse_box(s)?;
        let removed = scenario
            .sabotage(layer, index)
            .ok_or_else(|| Error::invalid(format!("the scaffold has no box {layer}:{index}")))?;
        println!("sabotage: removed {removed} blue sites from the activation region of box {layer}:{index}");
    }
    let sc = &scenario.scaffold;
    println!(
        "scaffold: ell_max {}, {} boxes, height {}, center {:?}, apex {:?}, blue sites {}",
        sc.ell_max,
        sc.boxes.len(),
        sc.total_height(),
        sc.center,
        scenario.apex,
        scenario.field.len()
    );
    let success = is_successful(sc, &scenario.field, args.rho);
    if let Some((layer, index)) = success.first_failure {
        println!("FAIL: scaffold not successful; activation region of box {layer}:{index} has no usable blue");
    }
    let mode = if args.static_blue { CertificateMode::Static } else { CertificateMode::Dynamic };
    let mut cfg = CertificateConfig::new(mode, r, args.rho);
    cfg.engine = if args.reference { Engine::Reference } else { Engine::Frontier };
    cfg.axis = Some(scenario.axis);
    cfg.require_success = false;
    let rep = protection_certificate(std::slice::from_ref(sc), &[scenario.apex], &scenario.field, &cfg)?;
    println!(
        "certificate: mode {:?}, domain {}x{}, horizon {} ticks, min margin {:.3}",
        rep.mode, rep.domain.width, rep.domain.height, rep.horizon_ticks, rep.min_margin
    );
    if let Some(path) = &args.image {
        let mut img = Image::from_lattice(&rep.result.lattice, args.scale)?;
        let (ox, oy) = rep.origin();
        for b in &sc.boxes {
            img.outline(&b.activation.translated(-ox, -oy), OUTLINE_ACTIVATION);
            img.outline(&b.rect.translated(-ox, -oy), OUTLINE_BOX);
        }
        img.write_ppm(path)?;
    }
    if let Some(axis) = rep.axis_clear {
        println!(
            "axis [{}, {}] x {{{}}} red-free through time {}: {}",
            scenario.axis.x_lo, scenario.axis.x_hi, scenario.axis.y, scenario.axis.time, axis
        );
    }
    if rep.passed && success.success {
        println!("PASS");
        return Ok(Outcome::Pass);
    }
    if let Some((_, layer, index)) = rep.first_violation {
        match mode {
            CertificateMode::Dynamic => {
                let b = rep.boxes.iter().find(|b| b.layer == layer && b.index == index).expect("box reported");
                println!(
                    "FAIL: box {layer}:{index} crossed at tick {:?}, red entered its rows at tick {:?}",
                    b.crossing_tick, b.red_entry_tick
                );
            }
            CertificateMode::Static => {
                let l = rep.layers.iter().find(|l| l.layer == layer).expect("layer reported");
                println!(
                    "FAIL: red entered layer {layer} at tick {:?}, before its threshold time {:.3}",
                    l.red_entry_tick, l.threshold
                );
            }
        }
    } else if rep.axis_clear == Some(false) {
        println!("FAIL: red reached the axis segment before time {}", scenario.axis.time);
    }
    Ok(Outcome::CertificateFailed)
}

fn continuum(args: ContinuumArgs) -> Result<Outcome> {
    let cfg = ContinuumConfig::new(args.alpha, args.alpha_bar, args.m)?;
    let (e1, e2) = eigenvalues(cfg.matrix())?;
    println!("lambda {:.9}", cfg.lambda());
    println!("sigma {:.9}", cfg.sigma());
    println!("eigenvalues {:.9} {:.9}", e1, e2);
    println!("{:>5} {:>14} {:>14} {:>14} {:>14} {:>14}", "layer", "f", "g", "h", "S", "alpha h / bt");
    for row in layer_table(&cfg, args.layers)? {
        let t = row.triple;
        let bt = breakthrough(&canonical_obstacles(t.g, t.h, cfg.m), Segment::new(0.0, 0.0, t.f)?, cfg.alpha)?;
        println!(
            "{:>5} {:>14.6} {:>14.6} {:>14.6} {:>14.6} {:>14.9}",
            row.layer,
            t.f,
            t.g,
            t.h,
            row.s,
            cfg.alpha * t.h / bt.time
        );
    }
    Ok(Outcome::Pass)
}

fn red_cert(args: RedCertArgs) -> Result<Outcome> {
    let rho = args.rho as f64;
    let q = args.q.unwrap_or(args.a * args.p.powf(1.0 + rho / (rho + 1.0)));
    let params =
        RedWinsParams { p: args.p, q, epsilon: args.epsilon, r: args.r.parse()?, tau: args.tau, rho: args.rho };
    let geom = params.geometry()?;
    println!(
        "q {q:.6e}; G covers |x| <= {}, red box [0, {}] x [0, {}], guard half width {}, window side {}",
        geom.g_half,
        geom.red_x,
        geom.red_y,
        geom.guard_half,
        2 * geom.half + 1
    );
    let (mut g, mut gh, mut red, mut wrong) = (0u64, 0u64, 0u64, 0u64);
    for i in 0..args.samples {
        let seed = replicate_seed(args.seed, i);
        let rep = red_wins_certificate(&params, seed)?;
        g += rep.g as u64;
        match rep.verified {
            Some(true) => {
                gh += 1;
                red += 1;
            }
            Some(false) => {
                gh += 1;
                wrong += 1;
                println!("counterexample: sample {i} (seed {seed}), origin color {:?}", rep.origin_color);
            }
            None => {}
        }
    }
    println!("samples {}, G {g}, G and H {gh}, origin red {red}", args.samples);
    if wrong > 0 {
        println!("FAIL: {wrong} samples with G and H did not end red");
        return Ok(Outcome::CertificateFailed);
    }
    Ok(Outcome::Pass)
}

fn three_color(args: ThreeColorArgs) -> Result<Outcome> {
    let params = ThreeColorParams { p_blue: args.pb, p_red: args.pr, p_green: args.pg, directed: args.directed };
    let est = three_color_experiment(&params, &FateConfig::new(args.l, args.replicates, args.seed))?;
    println!("replicates {}, side {}", est.replicates, args.l);
    for (label, (p, f)) in est.labels.iter().zip(est.species.iter().zip(&est.mean_fraction)) {
        println!("{label}: origin {:.3} [{:.3}, {:.3}], mean fraction {:.4}", p.estimate, p.lo, p.hi, f);
    }
    let e = est.empty;
    println!(
        "empty: origin {:.3} [{:.3}, {:.3}], mean fraction {:.4}",
        e.estimate, e.lo, e.hi, est.mean_empty_fraction
    );
    if args.image.is_none() && !args.rectangles {
        return Ok(Outcome::Pass);
    }
    let mut bad = 0usize;
    let mut total = 0usize;
    let n = if args.rectangles { args.replicates } else { 1 };
    for i in 0..n {
        let mut model = params.model(args.l)?;
        model.seed = replicate_seed(args.seed, i);
        let res = run_to_fixation(sample_initial(model.clone())?, default_horizon(&model)?)?;
        if i == 0 {
            if let Some(path) = &args.image {
                Image::from_lattice(&res.lattice, 1)?.write_ppm(path)?;
            }
        }
        if args.rectangles {
            let comps = empty_components(&res.lattice);
            total += comps.len();
            bad += comps.iter().filter(|c| !c.rectangular).count();
        }
    }
    if args.rectangles {
        println!("empty components {total}, not rectangular {bad}");
        if bad > 0 {
            return Ok(Outcome::CertificateFailed);
        }
    }
    Ok(Outcome::Pass)
}

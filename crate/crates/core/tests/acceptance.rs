//! Acceptance criteria 1-9. Prints one PASS/FAIL line per criterion. With
//! `ACCEPTANCE_STRICT` set, exits nonzero if any fails.

use std::f64::consts::PI;
use std::time::Instant;

use cavitation::analysis::{estimate_suite, injectivity_check_curved, EstimateSuite, SuiteOptions};
use cavitation::config::RunKnobs;
use cavitation::fields::build_velocity_field;
use cavitation::flow::integrate_flow;
use cavitation::geometry::{
    eleven_disk_lambda_bound, eleven_disk_packing_density, lambda_from_volumes, sigma, straight_line_admissible,
    Configuration,
};
use cavitation::pipeline::{
    analyze, deformed_nodes, flow_options, hole_tracking_error, outer_tracking_error, prepare, seed_set,
    solver_options, RunOutput,
};
use cavitation::{Mat2, Vec2};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: String) -> Verdict {
    Verdict { pass, detail }
}

fn centered() -> Configuration {
    Configuration::new(1.0, vec![Vec2::zeros()], vec![3.0 * PI]).unwrap()
}

fn pair() -> Configuration {
    let v = 0.25 * PI;
    Configuration::new(1.0, vec![Vec2::new(-0.5, 0.0), Vec2::new(0.5, 0.0)], vec![v, v]).unwrap()
}

struct Runs {
    centered: RunOutput,
    centered_seconds: f64,
    centered_fine_det: f64,
    pair: RunOutput,
}

fn grid_det(run: &RunOutput) -> f64 {
    run.history.states.iter().map(|s| s.max_det_residual(0..run.seeds.boundary_start)).fold(0.0, f64::max)
}

fn run(config: &Configuration, knobs: &RunKnobs) -> RunOutput {
    let p = prepare(config, knobs).unwrap();
    let seeds = seed_set(&p, knobs).unwrap();
    let history = integrate_flow(&p.evolution, &p.pads, &seeds.points, &flow_options(knobs)).unwrap();
    analyze(p, seeds, history, knobs).unwrap()
}

fn criterion_1(r: &Runs) -> Verdict {
    let coarse = grid_det(&r.centered);
    let ratio = coarse / r.centered_fine_det;
    verdict(
        coarse <= 1e-3 && ratio >= 8.0 && r.centered_seconds <= 120.0,
        format!(
            "max|det F - 1| = {coarse:.3e} (128 steps), {:.3e} (256 steps), ratio {ratio:.1}, {:.1} s",
            r.centered_fine_det, r.centered_seconds
        ),
    )
}

fn criterion_2(r: &Runs) -> Verdict {
    let mut pass = true;
    let mut detail = Vec::new();
    for (name, run) in [("centered", &r.centered), ("pair", &r.pair)] {
        let hole = hole_tracking_error(&run.prepared, &run.seeds, &run.history);
        let outer = outer_tracking_error(&run.seeds, &run.history);
        let r0 = run.prepared.evolution.r0();
        pass &= run.history.states.len() == 9 && hole <= 1e-5 * r0 && outer <= 1e-6 * r0;
        detail.push(format!("{name}: hole {hole:.2e}, outer {outer:.2e}"));
    }
    verdict(pass, detail.join("; "))
}

fn criterion_3(r: &Runs) -> Verdict {
    let mut pass = true;
    let mut detail = Vec::new();
    for (name, run) in [("centered", &r.centered), ("pair", &r.pair)] {
        let e = &run.energy;
        let spread = e.spread / e.total_volume;
        pass &= e.slope_rel_error() <= 0.02 && spread <= 0.05;
        detail.push(format!(
            "{name}: slope {:.6} vs {:.6} ({:.1e}), spread {spread:.1e}",
            e.slope,
            e.total_volume,
            e.slope_rel_error()
        ));
    }
    verdict(pass, detail.join("; "))
}

fn criterion_4(r: &Runs) -> Verdict {
    let mut pass = true;
    let (mut area, mut round) = (0.0f64, 0.0f64);
    for run in [&r.centered, &r.pair] {
        for i in &run.images {
            area = area.max(i.rel_area_error());
            round = round.max(i.radial_std / i.cavity_radius);
            pass &= i.winding == 1;
        }
    }
    pass &= area <= 5e-3 && round <= 1e-3;
    verdict(pass, format!("worst area error {area:.2e}, worst radial std / L {round:.2e}"))
}

fn criterion_5() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let knobs = RunKnobs::default();
    let (mut div, mut normal, mut tangential) = (0.0f64, 0.0f64, 0.0f64);
    for config in [centered(), pair()] {
        let p = prepare(&config, &knobs).unwrap();
        let lambda = p.evolution.lambda();
        for t in [1.0, 0.5 * (1.0 + lambda), lambda] {
            let f = build_velocity_field(&p.evolution, &p.pads, t, &solver_options(&knobs)).unwrap();
            let res = f.boundary_residuals(256);
            normal = normal.max(res.normal / res.scale);
            tangential = tangential.max(res.tangential / res.scale);
            let r0 = t * p.evolution.r0();
            let mut n = 0;
            while n < 1000 {
                let x = Vec2::new(rng.gen_range(-r0..r0), rng.gen_range(-r0..r0));
                if f.domain.signed_distance(&x) <= 0.0 {
                    continue;
                }
                div = div.max(f.jacobian(&x).trace().abs() / res.scale);
                n += 1;
            }
        }
    }
    verdict(
        div <= 1e-6 && normal <= 1e-6 && tangential <= 1e-6,
        format!("|div|/scale {div:.2e}, normal {normal:.2e}, tangential {tangential:.2e} (relative to |g|)"),
    )
}

fn suite_line(suite: &EstimateSuite, checks: &[&str]) -> Verdict {
    let mut pass = true;
    let mut detail = Vec::new();
    for c in checks {
        let s = suite.summary(c).expect("check present");
        pass &= s.pass;
        detail.push(format!("{c} [{:.3e}, {:.3e}]", s.min, s.max));
    }
    verdict(pass, detail.join("; "))
}

fn criterion_8() -> Verdict {
    let sym = |x: f64| Configuration::new(1.0, vec![Vec2::new(-x, 0.0), Vec2::new(x, 0.0)], vec![1.0, 1.0]).unwrap();
    let s1 = sigma(&Configuration::new(1.0, vec![Vec2::zeros()], vec![2.0]).unwrap()).unwrap();
    let s2 = sigma(&sym(0.5)).unwrap();
    let s3 = sigma(&sym(0.9)).unwrap();
    let lambdas = [
        lambda_from_volumes(1.0, &[3.0 * PI]).unwrap(),
        lambda_from_volumes(1.0, &[]).unwrap(),
        lambda_from_volumes(2.0, &[PI, 3.0 * PI]).unwrap(),
    ];
    let accept = straight_line_admissible(&pair()).unwrap();
    let v3 = 0.5 * 2.0 * PI;
    let reject = !straight_line_admissible(
        &Configuration::new(1.0, vec![Vec2::new(-0.5, 0.0), Vec2::new(0.5, 0.0)], vec![v3, v3]).unwrap(),
    )
    .unwrap();
    let density = eleven_disk_packing_density();
    let bound = eleven_disk_lambda_bound();
    let pass = s1 == 1.0
        && (s2 - 0.5).abs() <= 1e-15
        && (s3 - 0.02).abs() <= 1e-15
        && (lambdas[0] - 2.0).abs() <= 1e-15
        && lambdas[1] == 1.0
        && (lambdas[2] - 2f64.sqrt()).abs() <= 1e-15
        && accept
        && reject
        && format!("{density:.4}") == "0.7145"
        && format!("{bound:.4}") == "1.8714";
    verdict(pass, format!("sigma {s1}, {s2:.16}, {s3:.16}; eleven disks: density {density:.4}, lambda {bound:.4}"))
}

fn criterion_9(r: &Runs) -> Verdict {
    let mut pass = true;
    let mut detail = Vec::new();
    for (name, run) in [("centered", &r.centered), ("pair", &r.pair)] {
        let v = run.injectivity.violations();
        pass &= v == 0;
        detail.push(format!("{name}: {v} violations in {} quads", run.injectivity.quads_checked));
    }
    // negative control: reflect one interior node of the centered map
    let run = &r.centered;
    let mut nodes = deformed_nodes(&run.seeds, &run.history);
    let last = run.history.final_state();
    let grads: Vec<Mat2> =
        run.seeds.node_seed.iter().map(|s| s.map_or(Mat2::identity(), |k| last.particles[k].gradient)).collect();
    let quads = run.seeds.grid.quads();
    let g = &run.seeds.grid;
    let k = g.node_index(g.n / 2 + g.n / 4, g.n / 2);
    let right = g.node_index(g.n / 2 + g.n / 4 + 1, g.n / 2);
    nodes[k] = 2.0 * nodes[right] - nodes[k];
    let folded = injectivity_check_curved(&nodes, &grads, &g.nodes, &quads, 8).violations();
    pass &= folded >= 1;
    detail.push(format!("folded control: {folded} violations"));
    verdict(pass, detail.join("; "))
}

fn main() {
    let knobs = RunKnobs::default();
    let start = Instant::now();
    let centered_run = run(&centered(), &knobs);
    let centered_seconds = start.elapsed().as_secs_f64();
    let fine = run(&centered(), &RunKnobs { steps: 256, ..knobs.clone() });
    let runs = Runs {
        centered: centered_run,
        centered_seconds,
        centered_fine_det: grid_det(&fine),
        pair: run(&pair(), &knobs),
    };
    let suite = estimate_suite(&SuiteOptions::default()).unwrap();

    let results = [
        ("incompressibility", criterion_1(&runs)),
        ("boundary tracking", criterion_2(&runs)),
        ("renormalized energy", criterion_3(&runs)),
        ("cavity shape and size", criterion_4(&runs)),
        ("field correctness", criterion_5()),
        ("kernel identities", suite_line(&suite, &["poisson", "green_neumann", "reflection"])),
        ("estimate suite", suite_line(&suite, &["trace", "poincare_disk", "prop12", "thm1"])),
        ("attainability logic", criterion_8()),
        ("injectivity", criterion_9(&runs)),
    ];
    let mut failed = 0;
    for (k, (name, v)) in results.iter().enumerate() {
        println!("criterion {} {name}: {} - {}", k + 1, if v.pass { "PASS" } else { "FAIL" }, v.detail);
        failed += usize::from(!v.pass);
    }
    println!("acceptance: {} passed, {failed} failed", results.len() - failed);
    if std::env::var_os("ACCEPTANCE_STRICT").is_some() && failed > 0 {
        std::process::exit(1);
    }
}

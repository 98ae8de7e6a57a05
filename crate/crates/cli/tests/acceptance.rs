//! Acceptance criteria, one PASS/FAIL line each. Exits nonzero on any FAIL.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use staircase::complex::staircase_from_steps;
use staircase::laurent::{lspace_gaps, torus_alexander};
use staircase::StepSequence;
use staircase_cli::verify::{self, Grid, InstanceOutcome, VerifyReport};

type Check = Result<String, String>;

fn report(check: &str, grid: Grid) -> Result<VerifyReport, String> {
    let r = verify::run(check, &grid).ok_or_else(|| format!("no check named {check}"))?;
    let bad: Vec<String> = r
        .instances
        .iter()
        .filter(|i| matches!(i.outcome, InstanceOutcome::Fail { .. } | InstanceOutcome::Undecided { .. }))
        .map(|i| format!("{:?}: {:?}", i.params, i.outcome))
        .collect();
    if bad.is_empty() {
        Ok(r)
    } else {
        Err(format!("{check}: {}", bad.join("; ")))
    }
}

fn summary(r: &VerifyReport) -> String {
    let excluded = r.count(|o| matches!(o, InstanceOutcome::Excluded { .. }));
    format!("{} instances, {} excluded", r.instances.len(), excluded)
}

fn grid_check(check: &str, grid: Grid, min_run: usize) -> Check {
    let r = report(check, grid)?;
    let run = r.count(|o| matches!(o, InstanceOutcome::Pass { .. }));
    if run < min_run {
        return Err(format!("{check}: only {run} instances ran, expected at least {min_run}"));
    }
    Ok(summary(&r))
}

fn cable_poly() -> Check {
    grid_check("cable-poly", Grid { p_max: Some(5), m_max: Some(4), ..Grid::default() }, 31)
}

fn torus_three_four() -> Check {
    let delta = torus_alexander(3, 4).map_err(|e| e.to_string())?;
    let gaps = lspace_gaps(&delta).map_err(|e| e.to_string())?;
    let c = staircase_from_steps(&StepSequence::new(gaps.gaps)).map_err(|e| e.to_string())?;
    let levels: Vec<(i64, i64)> = c.generators().iter().map(|g| g.fl()).collect();
    let want = vec![(0, 3), (1, 3), (1, 1), (3, 1), (3, 0)];
    if levels != want {
        return Err(format!("levels {levels:?}, expected {want:?}"));
    }
    let arrows = c.arrows();
    if arrows != vec![(1, 0), (1, 2), (3, 2), (3, 4)] {
        return Err(format!("arrows {arrows:?}"));
    }
    Ok("d x1 = x0 + x2, d x3 = x2 + x4".into())
}

fn box_lemma() -> Check {
    let golden = report("box", Grid { a: Some(vec![1, 3]), b: Some(vec![2]), ..Grid::default() })?;
    let want = InstanceOutcome::Pass { detail: "core [1, 3, 2], 2 box summands".into() };
    if golden.instances.first().map(|i| &i.outcome) != Some(&want) {
        return Err(format!("golden case gave {:?}", golden.instances));
    }
    let r = grid_check("box", Grid::default(), 20)?;
    Ok(format!("golden [1,3] [2] ok; {r}"))
}

fn polygon_lemma() -> Check {
    grid_check("polygon", Grid::default(), 30)
}

fn ordering_lemmas() -> Check {
    let i = grid_check("order-i", Grid::default(), 12)?;
    let j = grid_check("order-j", Grid::default(), 1)?;
    Ok(format!("order-i {i}; order-j {j}"))
}

fn cable_stairs() -> Check {
    grid_check("cable-stairs", Grid { p_max: Some(4), m_max: Some(3), ..Grid::default() }, 17)
}

fn kij_classes() -> Check {
    grid_check("kij-classes", Grid::default(), 8)
}

fn family_order() -> Check {
    let g = Grid { i_max: Some(2), j_range: Some((-1, 1)), max_n: Some(3), ..Grid::default() };
    grid_check("theorem-order", g, 28)
}

fn properties() -> Check {
    grid_check("properties", Grid { cases: Some(200), seed: 0, ..Grid::default() }, 200)
}

fn main() -> ExitCode {
    let criteria: [(&str, u64, fn() -> Check); 9] = [
        ("closed-form cable polynomials", 5, cable_poly),
        ("T(3,4) staircase", 1, torus_three_four),
        ("box lemma", 30, box_lemma),
        ("polygon lemma", 120, polygon_lemma),
        ("ordering lemmas", 180, ordering_lemmas),
        ("cable staircases", 10, cable_stairs),
        ("K(i,j) classes", 300, kij_classes),
        ("desk-scale ordering", 600, family_order),
        ("property suite", 120, properties),
    ];
    let mut failed = 0;
    for (n, (name, budget, f)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let mut outcome = f();
        let took = start.elapsed();
        if outcome.is_ok() && took > Duration::from_secs(budget) {
            outcome = Err(format!("took {took:.1?}, budget {budget} s"));
        }
        match outcome {
            Ok(detail) => println!("PASS criterion {}: {name} ({detail}, {took:.2?})", n + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL criterion {}: {name}: {detail}", n + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

//! Named verification suites: each check re-derives a quantitative claim
//! from scratch and reports one pass/fail line.

use anyhow::{bail, ensure, Result};
use hardy_tree::{
    automorphism_norm, compose, counting_function, extremal_fw, growth_bound_check,
    lower_bound_fw, opnorm_infinity, random_dense_function, random_total_map, sufficiency_series,
    truncated_opnorm, weight, PExponent, PartialAutomorphism, SelfMap, TreeFunction, TreeParams,
};
use num_complex::Complex64;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::report::{close, Check, TOL};
use crate::table;

#[derive(Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub qs: Vec<u32>,
    pub depth: usize,
    pub seed: u64,
    pub checks: Vec<Check>,
    pub comparison: Option<table::Comparison>,
}

pub fn run_suite(suite: &str, qs: &[u32], depth: usize, seed: u64) -> Result<SuiteReport> {
    ensure!(
        (2..=10).contains(&depth),
        "verification suites need --depth between 2 and 10"
    );
    let mut checks = Vec::new();
    let mut comparison = None;
    match suite {
        "norms" => {
            for &q in qs {
                checks.extend(norm_checks(q, depth, seed)?);
            }
        }
        "operators" => {
            for &q in qs {
                checks.extend(operator_checks(q, depth, seed)?);
            }
        }
        "q1-bound" => checks.extend(line_checks(depth, seed)?),
        "table" => {
            let cmp = table::build(depth, seed)?;
            checks.extend(cmp.rows.iter().map(|r| r.check.clone()));
            comparison = Some(cmp);
        }
        "all" => {
            for &q in qs {
                checks.extend(norm_checks(q, depth, seed)?);
                checks.extend(operator_checks(q, depth, seed)?);
            }
            checks.extend(line_checks(depth, seed)?);
        }
        other => bail!("unknown suite {other:?}; expected norms | operators | q1-bound | table | all"),
    }
    Ok(SuiteReport {
        suite: suite.to_string(),
        qs: qs.to_vec(),
        depth,
        seed,
        checks,
        comparison,
    })
}

pub fn render_text(rep: &SuiteReport) -> String {
    let mut s = format!(
        "suite {}: q in {:?}, depth {}, seed {}\n",
        rep.suite, rep.qs, rep.depth, rep.seed
    );
    if let Some(cmp) = &rep.comparison {
        s.push('\n');
        s.push_str(&table::render(cmp));
        s.push('\n');
    }
    for check in &rep.checks {
        s.push_str(&check.line());
        s.push('\n');
    }
    let passed = rep.checks.iter().filter(|c| c.passed).count();
    s.push_str(&format!("result: {passed}/{} checks passed\n", rep.checks.len()));
    s
}

pub fn render_csv(rep: &SuiteReport) -> String {
    let rows: Vec<(String, usize, f64)> = rep
        .checks
        .iter()
        .enumerate()
        .map(|(i, c)| (c.name.clone(), i, if c.passed { 1.0 } else { 0.0 }))
        .collect();
    crate::report::csv_table(&rows)
}

fn ps() -> [PExponent; 2] {
    [PExponent::Finite(1.0), PExponent::Finite(2.0)]
}

fn norm_checks(q: u32, depth: usize, seed: u64) -> Result<Vec<Check>> {
    let params = TreeParams::new(q)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(q as u64));
    let mut checks = Vec::new();

    let zero = TreeFunction::zero(params, depth);
    let mut ok = true;
    for _ in 0..20 {
        let f = random_dense_function(&params, depth, &mut rng)?;
        let g = random_dense_function(&params, depth, &mut rng)?;
        for p in ps() {
            let nf = f.tp_norm(p)?.sup;
            let ng = g.tp_norm(p)?.sup;
            ok &= nf > 0.0;
            ok &= zero.tp_norm(p)?.sup == 0.0;
            let sum = f.add(&g)?.tp_norm(p)?.sup;
            ok &= sum <= nf + ng + TOL * (1.0 + nf + ng);
            let c = Complex64::new(0.75, -1.5);
            ok &= close(f.scale(c).tp_norm(p)?.sup, c.norm() * nf);
        }
    }
    checks.push(Check::new(
        format!("norm-axioms[q={q}]"),
        ok,
        "20 random pairs: positivity, zero norm, homogeneity, triangle inequality",
    ));

    let mut ok = true;
    let mut worst: f64 = 0.0;
    for _ in 0..20 {
        let f = random_dense_function(&params, depth, &mut rng)?;
        for p in ps() {
            let g = growth_bound_check(&f, p)?;
            worst = worst.max(g.max_ratio);
            ok &= g.max_ratio <= 1.0 + TOL;
        }
    }
    let w = params.vertex_at(2.min(depth), 0)?;
    for p in ps() {
        let g = growth_bound_check(&extremal_fw(&params, &w, p)?, p)?;
        ok &= close(g.max_ratio, 1.0) && g.witness == w;
    }
    checks.push(Check::new(
        format!("growth-ceiling[q={q}]"),
        ok,
        format!("|f(v)| <= W(v)^(1/p) ||f|| on 20 random functions (worst ratio {worst}); the extremal atom attains it"),
    ));

    let mut ok = true;
    let vertices = params.ball_vertices(depth)?;
    for _ in 0..8 {
        let f = random_dense_function(&params, depth, &mut rng)?;
        let g = random_dense_function(&params, depth, &mut rng)?;
        let diff = f.sub(&g)?;
        for p in ps() {
            let gap_norm = diff.tp_norm(p)?.sup;
            let pv = p.finite_value()?;
            for v in &vertices {
                let gap = (f.value(v)? - g.value(v)?).norm();
                let ceiling = (weight(&params, v)? as f64).powf(1.0 / pv) * gap_norm;
                ok &= gap <= ceiling * (1.0 + TOL) + TOL;
            }
        }
    }
    checks.push(Check::new(
        format!("pointwise-bound[q={q}]"),
        ok,
        "8 random pairs obey |f(v) - g(v)| <= W(v)^(1/p) ||f - g|| at every ball vertex",
    ));

    let mut ok = true;
    let mut atoms = 0usize;
    for w in &vertices {
        for pv in [1.0, 2.0, 3.0] {
            let p = PExponent::finite(pv)?;
            ok &= close(extremal_fw(&params, w, p)?.tp_norm(p)?.sup, 1.0);
            atoms += 1;
        }
    }
    checks.push(Check::new(
        format!("extremal-unit-norms[q={q}]"),
        ok,
        format!("{atoms} extremal atoms have unit norm"),
    ));

    Ok(checks)
}

fn operator_checks(q: u32, depth: usize, seed: u64) -> Result<Vec<Check>> {
    let params = TreeParams::new(q)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(100 + q as u64));
    let mut checks = Vec::new();

    let mut maps = vec![
        SelfMap::identity(params),
        SelfMap::parent(params),
        SelfMap::child(params, 0)?,
        SelfMap::collapse_default(params, depth)?,
        SelfMap::halving_default(params, depth)?,
    ];
    for _ in 0..5 {
        maps.push(random_total_map(&params, depth, &mut rng)?);
    }

    let mut ok = true;
    let mut cases = 0usize;
    for map in &maps {
        for p in ps() {
            let lower = lower_bound_fw(map, p, depth, None)?;
            let oracle = truncated_opnorm(map, p, None, depth)?;
            let series = sufficiency_series(map, depth)?;
            ok &= lower.value_pth_power <= oracle.value_pth_power + TOL;
            ok &= oracle.value_pth_power
                <= series.upper_estimate_pth_power * (1.0 + TOL) + TOL;
            cases += 1;
        }
    }
    checks.push(Check::new(
        format!("oracle-sandwich[q={q}]"),
        ok,
        format!("atom bound <= truncated oracle <= sufficiency estimate in {cases} cases"),
    ));

    let parent = SelfMap::parent(params);
    let mut ok = true;
    for _ in 0..10 {
        let f = random_dense_function(&params, depth, &mut rng)?;
        let image = compose(&parent, &f, depth)?;
        for p in ps() {
            let fr = f.tp_norm(p)?;
            let ir = image.tp_norm(p)?;
            for n in 2..=depth {
                ok &= close(ir.per_level[n], fr.per_level[n - 1]);
            }
            ok &= close(ir.sup.max(fr.per_level[depth]), fr.sup);
        }
    }
    checks.push(Check::new(
        format!("parent-level-shift[q={q}]"),
        ok,
        "composing 10 random functions with the parent map shifts every level mean down one level",
    ));

    let mut ok = true;
    for k in [1usize, 2] {
        let u = params.vertex_at(k, 0)?;
        let aut = PartialAutomorphism::shift(params, &u, depth)?;
        let expected = params.level_size(k)? as f64;
        for p in ps() {
            let oracle = truncated_opnorm(aut.as_map(), p, None, depth)?;
            ok &= close(oracle.value_pth_power, expected);
            ok &= close(automorphism_norm(&aut, p)?, oracle.value);
        }
    }
    checks.push(Check::new(
        format!("shift-norm-formula[q={q}]"),
        ok,
        "shift norms match ((q+1) q^(k-1))^(1/p) for k = 1, 2",
    ));

    let inf = PExponent::Infinity;
    let mut ok = true;
    for _ in 0..10 {
        let map = random_total_map(&params, depth, &mut rng)?;
        let f = random_dense_function(&params, depth, &mut rng)?;
        let image = compose(&map, &f, depth)?;
        ok &= image.tp_norm(inf)?.sup <= f.tp_norm(inf)?.sup * (1.0 + TOL);
        let witness = opnorm_infinity(&map)?;
        let radius = counting_function(&map, depth)?.image_radius();
        let attained = compose(&map, &witness.witness.extended(radius)?, depth)?;
        ok &= witness.value == 1.0 && attained.tp_norm(inf)?.sup == 1.0;
    }
    checks.push(Check::new(
        format!("sup-contraction[q={q}]"),
        ok,
        "10 random pairs contract in the sup norm and the root-image indicator attains norm one",
    ));

    let mut ok = true;
    let mut rows = 0usize;
    for map in &maps {
        let series = sufficiency_series(map, depth)?;
        for entry in &series.entries {
            ok &= entry.numerator >= params.level_size(entry.level)?;
            rows += 1;
        }
    }
    checks.push(Check::new(
        format!("series-floor[q={q}]"),
        ok,
        format!("S(n) q^n >= |D_n| held exactly in {rows} rows"),
    ));

    Ok(checks)
}

fn line_checks(depth: usize, seed: u64) -> Result<Vec<Check>> {
    let params = TreeParams::new(1)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(9000));
    let mut checks = Vec::new();

    let mut ok = true;
    let mut exact = true;
    let mut moved = 0usize;
    for _ in 0..30 {
        let map = random_total_map(&params, depth, &mut rng)?;
        let root_moved = !map.root_image()?.is_root();
        for p in ps() {
            let oracle = truncated_opnorm(&map, p, None, depth)?;
            ok &= oracle.value_pth_power <= 2.0 + TOL;
            if root_moved {
                exact &= oracle.value_pth_power == 2.0;
            }
        }
        if root_moved {
            moved += 1;
        }
    }
    checks.push(Check::new(
        "doubled-line-ceiling",
        ok,
        "30 random self-maps of the doubled line keep ||C||^p <= 2",
    ));
    checks.push(Check::new(
        "doubled-line-exactness",
        exact,
        format!("all {moved} sampled maps that move the root attain ||C||^p = 2 to the last bit"),
    ));

    let u = params.vertex_at(1, 0)?;
    let aut = PartialAutomorphism::shift(params, &u, depth)?;
    let mut ok = true;
    for p in ps() {
        let oracle = truncated_opnorm(aut.as_map(), p, None, depth)?;
        ok &= close(oracle.value_pth_power, 2.0);
        ok &= close(automorphism_norm(&aut, p)?, oracle.value);
    }
    checks.push(Check::new(
        "line-shift-matches-the-ceiling",
        ok,
        "the depth-1 shift reaches the universal bound ||C||^p = 2",
    ));

    Ok(checks)
}

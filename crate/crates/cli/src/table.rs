//! Side-by-side evidence table: the doubled line (q = 1) against a genuinely
//! branching tree (q = 2). Every cell is computed on the spot and each row
//! carries the check that its claim actually holds.

use anyhow::{ensure, Result};
use hardy_tree::{
    compactness_diagnostics, lower_bound_fw, random_total_map, sufficiency_series,
    truncated_opnorm, PExponent, PartialAutomorphism, SelfMap, TreeParams,
};
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::report::{close, Check, TOL};

#[derive(Clone, Debug, Serialize)]
pub struct Row {
    pub aspect: String,
    pub doubled_line: String,
    pub branching: String,
    pub check: Check,
}

#[derive(Clone, Debug, Serialize)]
pub struct Comparison {
    pub depth: usize,
    pub rows: Vec<Row>,
}

pub fn build(depth: usize, seed: u64) -> Result<Comparison> {
    ensure!(depth >= 4, "the comparison table needs --depth >= 4");
    let p = PExponent::finite(2.0)?;
    let line = TreeParams::new(1)?;
    let tree = TreeParams::new(2)?;
    let mut rows = Vec::new();

    let worst_sampled = |params: TreeParams, salt: u64| -> Result<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(salt));
        let mut worst = 0f64;
        for _ in 0..15 {
            let map = random_total_map(&params, depth, &mut rng)?;
            worst = worst.max(truncated_opnorm(&map, p, None, depth)?.value_pth_power);
        }
        Ok(worst)
    };
    let w1 = worst_sampled(line, 1)?;
    let w2 = worst_sampled(tree, 2)?;
    rows.push(Row {
        aspect: "largest sampled ||C||^p".to_string(),
        doubled_line: format!("{w1} over 15 random maps (ceiling 2)"),
        branching: format!("{w2} over 15 random maps (no ceiling)"),
        check: Check::new(
            "sampled-operators-respect-the-line-ceiling",
            w1 <= 2.0 + TOL,
            format!("worst sampled pth power on the line is {w1}"),
        ),
    });

    let c1 = lower_bound_fw(&SelfMap::collapse_default(line, depth)?, p, depth, None)?;
    let c2 = lower_bound_fw(&SelfMap::collapse_default(tree, depth)?, p, depth, None)?;
    let tail2 = &c2.per_radius_pth_power[c2.per_radius_pth_power.len() - 3..];
    rows.push(Row {
        aspect: "collapse-map atom certificates".to_string(),
        doubled_line: format!("flatten at {}", c1.value_pth_power),
        branching: format!("still growing at the boundary: {tail2:?}"),
        check: Check::new(
            "collapse-certificates-grow-only-with-branching",
            !c1.growing_at_boundary() && c2.growing_at_boundary(),
            format!(
                "line certificates stop at {} while the branching tail reads {tail2:?}",
                c1.value_pth_power
            ),
        ),
    });

    let p1 = truncated_opnorm(&SelfMap::parent(line), p, None, depth)?.value_pth_power;
    let p2 = truncated_opnorm(&SelfMap::parent(tree), p, None, depth)?.value_pth_power;
    rows.push(Row {
        aspect: "parent map".to_string(),
        doubled_line: format!("||C||^p = {p1} (isometry)"),
        branching: format!("||C||^p = {p2} (isometry)"),
        check: Check::new(
            "parent-isometry-on-both-trees",
            close(p1, 1.0) && close(p2, 1.0),
            format!("truncated pth powers are {p1} and {p2}"),
        ),
    });

    let shift_power = |params: TreeParams| -> Result<f64> {
        let u = params.vertex_at(1, 0)?;
        let aut = PartialAutomorphism::shift(params, &u, depth)?;
        Ok(truncated_opnorm(aut.as_map(), p, None, depth)?.value_pth_power)
    };
    let s1 = shift_power(line)?;
    let s2 = shift_power(tree)?;
    rows.push(Row {
        aspect: "shift by a depth-1 vertex".to_string(),
        doubled_line: format!("||C||^p = {s1} = q + 1"),
        branching: format!("||C||^p = {s2} = q + 1"),
        check: Check::new(
            "shift-norms-scale-with-branching",
            close(s1, 2.0) && close(s2, 3.0),
            format!("computed pth powers {s1} and {s2} match q + 1"),
        ),
    });

    let s1 = sufficiency_series(&SelfMap::parent(line), depth)?;
    let s2 = sufficiency_series(&SelfMap::parent(tree), depth)?;
    let (e1, e2) = (s1.upper_estimate_pth_power, s2.upper_estimate_pth_power);
    rows.push(Row {
        aspect: "parent-map sufficiency estimate".to_string(),
        doubled_line: format!("stays at {e1} <= 2 (true norm 1)"),
        branching: format!("diverges: {e2} and climbing (true norm 1)"),
        check: Check::new(
            "parent-sufficiency-bounded-only-on-the-line",
            e1 <= 2.0 + TOL
                && !s1.growing_at_boundary()
                && s2.growing_at_boundary()
                && close(p2, 1.0),
            format!("estimates are {e1} on the line and {e2} on the branching tree"),
        ),
    });

    let decay = |params: TreeParams| -> Result<Vec<(u64, i64, f64)>> {
        let map = SelfMap::halving_default(params, depth)?;
        let report = compactness_diagnostics(&map, depth)?;
        Ok(report
            .decay
            .iter()
            .skip(1)
            .map(|e| (e.count, e.exponent, e.value))
            .collect())
    };
    let d1 = decay(line)?;
    let d2 = decay(tree)?;
    let flat = d1.iter().all(|&(c, _, v)| c == 1 && v == 1.0);
    let halves = d2
        .iter()
        .enumerate()
        .all(|(i, &(c, e, _))| c == 1 && e == -(i as i64 + 1));
    rows.push(Row {
        aspect: "halving-map preimage decay".to_string(),
        doubled_line: format!(
            "flat at 1 for every radius ({} entries)",
            d1.len()
        ),
        branching: format!(
            "halves with each radius: {:?}",
            d2.iter().map(|&(_, _, v)| v).collect::<Vec<_>>()
        ),
        check: Check::new(
            "halving-decay-needs-branching",
            flat && halves,
            "one preimage weight per radius: q^-k is flat on the line and geometric once q >= 2",
        ),
    });

    Ok(Comparison { depth, rows })
}

pub fn render(cmp: &Comparison) -> String {
    let headers = ("aspect", "doubled line (q = 1)", "branching tree (q = 2)");
    let w0 = cmp
        .rows
        .iter()
        .map(|r| r.aspect.len())
        .chain([headers.0.len()])
        .max()
        .unwrap_or(0);
    let w1 = cmp
        .rows
        .iter()
        .map(|r| r.doubled_line.len())
        .chain([headers.1.len()])
        .max()
        .unwrap_or(0);
    let w2 = cmp
        .rows
        .iter()
        .map(|r| r.branching.len())
        .chain([headers.2.len()])
        .max()
        .unwrap_or(0);
    let mut s = String::new();
    s.push_str(&format!(
        "{:<w0$} | {:<w1$} | {:<w2$}\n",
        headers.0, headers.1, headers.2
    ));
    s.push_str(&format!("{:-<w0$}-+-{:-<w1$}-+-{:-<w2$}\n", "", "", ""));
    for row in &cmp.rows {
        s.push_str(&format!(
            "{:<w0$} | {:<w1$} | {:<w2$}\n",
            row.aspect, row.doubled_line, row.branching
        ));
    }
    s
}

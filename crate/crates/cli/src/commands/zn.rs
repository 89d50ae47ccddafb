use num_rational::BigRational;
use serde_json::json;

use crate::args::{ZnBoundArgs, ZnCommand, ZnRatioArgs};
use crate::docs::load;
use crate::error::CliError;
use crate::report::Report;
use ghom_core::zn_lab::{
    assign_markers, boundary_ratio, bound_applies, grid_row, paper_bound, ratio_to_f64, separation_syndeticity_sq, ConfigDocument,
    MarkerConfiguration, RatioRow,
};

use super::Outcome;

pub fn run(cmd: &ZnCommand) -> Result<Outcome, CliError> {
    match cmd {
        ZnCommand::Ratio(a) => ratio(a),
        ZnCommand::Bound(a) => bound(a),
    }
}

struct Row {
    row: RatioRow,
    ratio: BigRational,
    bound: Option<BigRational>,
}

fn csv_text(rows: &[Row]) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let fail = |e: csv::Error| CliError::Failed(e.to_string());
    w.write_record(["m", "n", "N", "ratio", "bound"]).map_err(fail)?;
    for r in rows {
        let bound = r.bound.as_ref().map_or_else(|| "NA".to_string(), |b| ratio_to_f64(b).to_string());
        w.write_record([r.row.m.to_string(), r.row.n.to_string(), r.row.dim.to_string(), ratio_to_f64(&r.ratio).to_string(), bound])
            .map_err(fail)?;
    }
    String::from_utf8(w.into_inner().map_err(|e| CliError::Failed(e.to_string()))?).map_err(|e| CliError::Failed(e.to_string()))
}

/// Row for an explicit configuration; `m` is the largest integer separation.
fn explicit_row(cfg: &MarkerConfiguration) -> Result<Row, CliError> {
    let a = assign_markers(cfg);
    let ratio = boundary_ratio(cfg, &a, cfg.n);
    let (sep_sq, _) = separation_syndeticity_sq(cfg, &a);
    let m = (sep_sq as f64).sqrt() as i64;
    let m = (m - 1..=m + 1).filter(|x| x * x <= sep_sq).max().unwrap_or(0);
    let m = u32::try_from(m).map_err(|_| CliError::Invalid("separation out of range".into()))?;
    let bound = if bound_applies(cfg, &a, m, cfg.n) { Some(paper_bound(m, cfg.n, cfg.dim() as u32)?) } else { None };
    let row = RatioRow {
        m,
        n: cfg.n,
        dim: cfg.dim(),
        ratio: ratio.to_string(),
        bound: bound.as_ref().map_or_else(|| "NA".into(), ToString::to_string),
    };
    Ok(Row { row, ratio, bound })
}

fn ratio(a: &ZnRatioArgs) -> Result<Outcome, CliError> {
    let rows: Vec<Row> = match &a.config {
        Some(p) => {
            let cfg = MarkerConfiguration::from_document(&load::<ConfigDocument>(p)?)?;
            vec![explicit_row(&cfg)?]
        }
        None => {
            if a.m.is_empty() {
                return Err(CliError::Invalid("give --m or --config".into()));
            }
            a.m.iter()
                .map(|&m| grid_row(a.dim, m, a.n, a.window).map(|(row, ratio, bound)| Row { row, ratio, bound }))
                .collect::<Result<_, _>>()?
        }
    };
    let text = csv_text(&rows)?;
    let result = json!({
        "rows": rows.iter().map(|r| &r.row).collect::<Vec<_>>(),
        "ratio_decimal": rows.iter().map(|r| ratio_to_f64(&r.ratio)).collect::<Vec<_>>(),
    });
    let inputs = json!({
        "N": a.dim,
        "m": a.m,
        "n": a.n,
        "window": a.window,
        "config": a.config.as_ref().map(|p| p.display().to_string()),
    });
    Ok(Outcome { report: Report::new("zn ratio", inputs, result), exit: 0, text: Some(text) })
}

fn bound(a: &ZnBoundArgs) -> Result<Outcome, CliError> {
    let mut rows = Vec::new();
    let mut text = String::from("m,n,N,bound\n");
    for &m in &a.m {
        let b = paper_bound(m, a.n, a.dim)?;
        text.push_str(&format!("{m},{},{},{}\n", a.n, a.dim, ratio_to_f64(&b)));
        rows.push(json!({ "m": m, "bound": b.to_string(), "bound_decimal": ratio_to_f64(&b) }));
    }
    let inputs = json!({ "N": a.dim, "m": a.m, "n": a.n });
    Ok(Outcome { report: Report::new("zn bound", inputs, json!({ "rows": rows })), exit: 0, text: Some(text) })
}

use serde_json::json;

use crate::args::{AfClassArgs, AfCommand, AfH1Args, AfRieszArgs, AfTransportArgs};
use crate::docs::{check_element, element_json, load, PathSetDocument, PathTableauDocument, RieszDocument};
use crate::error::{CliError, EXIT_UNDECIDED};
use crate::report::Report;
use ghom_core::af::{af_h1_check, class_of_clopen, classes_equal, riesz_interpolate, transport_hopf2, BratteliDiagram, Decision, DiagramDocument};

use super::Outcome;

pub fn run(cmd: &AfCommand) -> Result<Outcome, CliError> {
    match cmd {
        AfCommand::Class(a) => class(a),
        AfCommand::Transport(a) => transport(a),
        AfCommand::Riesz(a) => riesz(a),
        AfCommand::H1check(a) => h1check(a),
    }
}

fn diagram(path: &std::path::Path) -> Result<BratteliDiagram, CliError> {
    Ok(BratteliDiagram::from_document(&load::<DiagramDocument>(path)?)?)
}

fn class(a: &AfClassArgs) -> Result<Outcome, CliError> {
    let b = diagram(&a.diagram)?;
    let u = class_of_clopen(&b, &load::<PathSetDocument>(&a.clopen)?.to_paths()?)?;
    let mut result = json!({ "class": element_json(&u) });
    let mut exit = 0;
    if let Some(to) = &a.to {
        let v = class_of_clopen(&b, &load::<PathSetDocument>(to)?.to_paths()?)?;
        let decision = classes_equal(&b, &u, &v, a.budget)?;
        if matches!(decision, Decision::Undecided { .. }) {
            exit = EXIT_UNDECIDED;
        }
        result["other"] = element_json(&v);
        result["equal"] = serde_json::to_value(&decision).expect("decisions serialize");
    }
    let inputs = json!({
        "diagram": a.diagram.display().to_string(),
        "clopen": a.clopen.display().to_string(),
        "to": a.to.as_ref().map(|p| p.display().to_string()),
        "budget": a.budget,
    });
    Ok(Outcome { report: Report::new("af class", inputs, result), exit, text: None })
}

fn transport(a: &AfTransportArgs) -> Result<Outcome, CliError> {
    let b = diagram(&a.diagram)?;
    let u = load::<PathSetDocument>(&a.from)?.to_paths()?;
    let v = load::<PathSetDocument>(&a.to)?.to_paths()?;
    let t = transport_hopf2(&b, &u, &v, a.budget)?;
    let result = json!({ "tableau": PathTableauDocument::from(&t) });
    let inputs = json!({
        "diagram": a.diagram.display().to_string(),
        "from": a.from.display().to_string(),
        "to": a.to.display().to_string(),
        "budget": a.budget,
    });
    Ok(Outcome::ok(Report::new("af transport", inputs, result)))
}

fn riesz(a: &AfRieszArgs) -> Result<Outcome, CliError> {
    let b = diagram(&a.diagram)?;
    let doc = load::<RieszDocument>(&a.elements)?;
    let f = [doc.f[0].to_element(), doc.f[1].to_element()];
    let g = [doc.g[0].to_element(), doc.g[1].to_element()];
    for e in f.iter().chain(&g) {
        check_element(e, &b)?;
    }
    let h = riesz_interpolate(&b, [&f[0], &f[1]], [&g[0], &g[1]], a.budget)?;
    let inputs = json!({ "diagram": a.diagram.display().to_string(), "elements": a.elements.display().to_string(), "budget": a.budget });
    Ok(Outcome::ok(Report::new("af riesz", inputs, json!({ "h": element_json(&h) }))))
}

fn h1check(a: &AfH1Args) -> Result<Outcome, CliError> {
    let b = diagram(&a.diagram)?;
    let r = af_h1_check(&b, a.depth)?;
    let result = json!({ "all_trivial": r.all_trivial(), "levels": r.levels });
    let inputs = json!({ "diagram": a.diagram.display().to_string(), "depth": a.depth });
    Ok(Outcome::ok(Report::new("af h1check", inputs, result)))
}

use num_bigint::BigInt;
use serde_json::{json, Value};

use crate::args::{Method, SftCommand, SftFindArgs, SftHomologyArgs, SftIndexArgs};
use crate::docs::{load, ClopenDocument};
use crate::error::CliError;
use crate::report::{bigs, Report};
use ghom_core::sft::{find_with_index, MatrixDocument, SearchBounds, SftSystem, StableHomology, Tableau, TableauDocument};
use ghom_core::AbelianGroupPresentation;

use super::Outcome;

pub fn run(cmd: &SftCommand) -> Result<Outcome, CliError> {
    match cmd {
        SftCommand::Homology(a) => homology(a),
        SftCommand::Index(a) => index(a),
        SftCommand::FindIndex(a) => find(a),
    }
}

fn system(path: &std::path::Path) -> Result<SftSystem, CliError> {
    Ok(SftSystem::from_document(&load::<MatrixDocument>(path)?)?)
}

fn group_json(g: &AbelianGroupPresentation) -> Value {
    json!({ "group": g.to_string(), "torsion": bigs(g.torsion()), "free_rank": g.free_rank() })
}

fn homology(a: &SftHomologyArgs) -> Result<Outcome, CliError> {
    let sys = system(&a.matrix)?;
    let words = match &a.clopen {
        Some(p) => {
            if a.degree != 0 {
                return Err(CliError::Invalid("--clopen needs --degree 0".into()));
            }
            Some(load::<ClopenDocument>(p)?.to_words()?)
        }
        None => None,
    };
    let mut result = serde_json::Map::new();
    let mut groups = Vec::new();
    if matches!(a.method, Method::Matrix | Method::Both) {
        let g = if a.degree == 0 { sys.h0_group() } else { sys.h1_group() };
        let mut entry = group_json(&g);
        if let Some(w) = &words {
            entry["class"] = bigs(&sys.h0_class(w)?);
        }
        result.insert("matrix".into(), entry);
        groups.push(g);
    }
    if matches!(a.method, Method::Truncation | Method::Both) {
        let mut h = StableHomology::new(&sys, a.degree, a.depth)?;
        let g = h.group().clone();
        let mut entry = group_json(&g);
        entry["stable_depth"] = json!(h.stable_depth());
        if let Some(w) = &words {
            entry["class"] = bigs(&h.clopen_class(w)?);
        }
        result.insert("truncation".into(), entry);
        groups.push(g);
    }
    if let [x, y] = groups.as_slice() {
        result.insert("match".into(), json!(x.same_type(y)));
    }
    let inputs = json!({
        "matrix": a.matrix.display().to_string(),
        "degree": a.degree,
        "depth": a.depth,
        "clopen": a.clopen.as_ref().map(|p| p.display().to_string()),
    });
    let method = match a.method {
        Method::Matrix => "matrix",
        Method::Truncation => "truncation",
        Method::Both => "both",
    };
    Ok(Outcome::ok(Report::new("sft homology", inputs, Value::Object(result)).with_method(method)))
}

fn index(a: &SftIndexArgs) -> Result<Outcome, CliError> {
    let sys = system(&a.matrix)?;
    let tab = Tableau::from_document(&load::<TableauDocument>(&a.tableau)?)?;
    let mut h = StableHomology::new(&sys, 1, a.depth)?;
    let idx = h.index_of(&tab)?;
    let result = json!({
        "group": h.group().to_string(),
        "index": bigs(&idx),
        "zero": h.is_zero(&idx),
        "lag_zero": tab.is_lag_zero(),
        "stable_depth": h.stable_depth(),
    });
    let inputs = json!({ "matrix": a.matrix.display().to_string(), "tableau": a.tableau.display().to_string(), "depth": a.depth });
    Ok(Outcome::ok(Report::new("sft index", inputs, result).with_method("truncation")))
}

fn find(a: &SftFindArgs) -> Result<Outcome, CliError> {
    let sys = system(&a.matrix)?;
    let mut h = StableHomology::new(&sys, 1, a.depth)?;
    if a.target.len() != h.group().num_coords() {
        return Err(CliError::Invalid(format!("target needs {} coordinates for {}", h.group().num_coords(), h.group())));
    }
    let target: Vec<BigInt> = a.target.iter().map(|&x| BigInt::from(x)).collect();
    let bounds = SearchBounds { max_word_len: a.max_word_len, max_pairs: a.max_pairs };
    let tab = find_with_index(&mut h, &target, a.budget, bounds)?;
    let verified = h.index_of(&tab)?;
    let result = json!({
        "group": h.group().to_string(),
        "tableau": tab.to_document(),
        "index": bigs(&verified),
    });
    let inputs = json!({
        "matrix": a.matrix.display().to_string(),
        "target": a.target,
        "budget": a.budget,
        "depth": a.depth,
        "max_word_len": a.max_word_len,
        "max_pairs": a.max_pairs,
    });
    Ok(Outcome::ok(Report::new("sft find-index", inputs, result).with_method("truncation")))
}

use std::collections::BTreeMap;

use serde::Deserialize;
use serde_json::json;

use crate::args::{TowersCommand, TowersExtendArgs, TowersMatchArgs, TowersReduceArgs};
use crate::docs::load;
use crate::error::CliError;
use crate::report::Report;
use ghom_core::towers::{
    involution_from_bisection, match_equal, match_subsets, reduce_full_clopen, tower_extend, tower_extend_floors, ClassId,
    FloorSet, TowerClass, TowerPartition,
};

use super::Outcome;

pub fn run(cmd: &TowersCommand) -> Result<Outcome, CliError> {
    match cmd {
        TowersCommand::Match(a) => matching(a),
        TowersCommand::Extend(a) => extend(a),
        TowersCommand::Reduce(a) => reduce(a),
    }
}

fn partition(path: &std::path::Path) -> Result<TowerPartition, CliError> {
    Ok(TowerPartition::new(load::<Vec<TowerClass>>(path)?)?)
}

fn shown(p: &std::path::Path) -> String {
    p.display().to_string()
}

fn matching(a: &TowersMatchArgs) -> Result<Outcome, CliError> {
    let t = partition(&a.towers)?;
    let us: Vec<FloorSet> = a.ranges.iter().map(|p| load(p)).collect::<Result<_, _>>()?;
    let ranges: Vec<String> = a.ranges.iter().map(|p| shown(p)).collect();
    match (&a.source, &a.within) {
        (Some(source), None) => {
            let [u] = us.as_slice() else {
                return Err(CliError::Invalid("--source pairs with exactly one --range".into()));
            };
            let v: FloorSet = load(source)?;
            let c = match_equal(&t, u, &v)?;
            let mut result = json!({ "bisection": c });
            if let Ok(g) = involution_from_bisection(&t, &c) {
                result["involution"] = json!(g);
            }
            let inputs = json!({ "towers": shown(&a.towers), "range": ranges, "source": shown(source) });
            Ok(Outcome::ok(Report::new("towers match", inputs, result).with_method("match_equal")))
        }
        (None, Some(within)) => {
            let o: FloorSet = load(within)?;
            let cs = match_subsets(&t, &us, &o)?;
            let inputs = json!({ "towers": shown(&a.towers), "range": ranges, "within": shown(within) });
            Ok(Outcome::ok(Report::new("towers match", inputs, json!({ "bisections": cs })).with_method("match_subsets")))
        }
        _ => Err(CliError::Invalid("give either --source or --within".into())),
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum Heights {
    PerClass(BTreeMap<ClassId, i64>),
    PerFloor(BTreeMap<ClassId, Vec<i64>>),
}

fn extend(a: &TowersExtendArgs) -> Result<Outcome, CliError> {
    let t = partition(&a.towers)?;
    let extended = match load::<Heights>(&a.heights)? {
        Heights::PerClass(h) => tower_extend(&t, &h)?,
        Heights::PerFloor(h) => tower_extend_floors(&t, &h)?,
    };
    let inputs = json!({ "towers": shown(&a.towers), "heights": shown(&a.heights) });
    Ok(Outcome::ok(Report::new("towers extend", inputs, json!({ "towers": extended }))))
}

fn reduce(a: &TowersReduceArgs) -> Result<Outcome, CliError> {
    let t = partition(&a.towers)?;
    let y: FloorSet = load(&a.clopen)?;
    let (reduced, heights) = reduce_full_clopen(&t, &y)?;
    let inputs = json!({ "towers": shown(&a.towers), "clopen": shown(&a.clopen) });
    Ok(Outcome::ok(Report::new("towers reduce", inputs, json!({ "towers": reduced, "heights": heights }))))
}

//! Plain-text model files: a version header, `key=value` settings, then one
//! line per clause `<polarity> <class> <state>,<state>,...`.

use std::collections::BTreeMap;
use std::path::Path;

use crate::automata::{ClauseTeam, HyperParams, Polarity, TsetlinMachine};
use crate::encoder::{AtomIndex, Mode, Schema};
use crate::error::{Error, Result};
use crate::experiment::Trained;
use crate::herbrand::parse_atom;
use crate::multiclass::{ClassBank, MultiClassMachine};
use crate::qa::{TaskEncoder, TaskSettings};

pub const HEADER: &str = "rtm-model v1";

fn flag(b: bool) -> &'static str {
    if b {
        "on"
    } else {
        "off"
    }
}

pub fn to_model_string(t: &Trained) -> String {
    let p = t.machine.params();
    let s = t.encoder.settings();
    let mut out = format!("{HEADER}\n");
    let mut kv = |k: &str, v: String| {
        out.push_str(k);
        out.push('=');
        out.push_str(&v);
        out.push('\n');
    };
    kv("clauses", p.clauses.to_string());
    kv("threshold", p.threshold.to_string());
    kv("specificity", p.specificity.to_string());
    kv("states", p.states_per_action.to_string());
    kv("epochs", p.epochs.to_string());
    kv("boost", flag(p.boost_true_positive).into());
    kv("negative_literals", flag(p.negative_literals).into());
    kv("seed", p.seed.to_string());
    kv("task", s.task.to_string());
    kv("mode", s.mode.to_string());
    kv("conv", flag(s.conv).into());
    kv("order_tags", flag(s.order_tags).into());
    kv("slots", s.slots.to_string());
    kv("classes", t.encoder.classes().join(","));
    let schema: Vec<String> = t.encoder.schema().to_string().lines().map(str::to_string).collect();
    kv("schema", schema.join(";"));
    let features: Vec<String> = t.encoder.index().atoms().iter().map(|a| a.to_string()).collect();
    kv("features", features.join(";"));
    for (c, bank) in t.machine.banks().iter().enumerate() {
        for team in bank.machine.positive().iter().chain(bank.machine.negative()) {
            let states: Vec<String> = team.states().iter().map(|s| s.to_string()).collect();
            out.push_str(&format!("{} {} {}\n", team.polarity().symbol(), c, states.join(",")));
        }
    }
    out
}

fn parse_flag(v: &str) -> Result<bool> {
    match v {
        "on" | "true" => Ok(true),
        "off" | "false" => Ok(false),
        other => Err(Error::Model(format!("expected on/off, got `{other}`"))),
    }
}

fn num<T: std::str::FromStr>(kv: &BTreeMap<String, String>, key: &str) -> Result<T> {
    let v = kv
        .get(key)
        .ok_or_else(|| Error::Model(format!("missing `{key}`")))?;
    v.parse()
        .map_err(|_| Error::Model(format!("bad value `{v}` for `{key}`")))
}

fn get<'a>(kv: &'a BTreeMap<String, String>, key: &str) -> Result<&'a str> {
    kv.get(key)
        .map(String::as_str)
        .ok_or_else(|| Error::Model(format!("missing `{key}`")))
}

pub fn parse_model(text: &str) -> Result<Trained> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, h)) if h.trim() == HEADER => {}
        _ => return Err(Error::Model(format!("missing `{HEADER}` header"))),
    }
    let mut kv = BTreeMap::new();
    let mut clause_lines = Vec::new();
    for (i, line) in lines {
        let n = i + 1;
        if line.trim().is_empty() {
            continue;
        }
        if line.starts_with("+ ") || line.starts_with("- ") {
            clause_lines.push((n, line));
        } else if !clause_lines.is_empty() {
            return Err(Error::parse(n, "setting after clause lines"));
        } else {
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::parse(n, "expected key=value"))?;
            if kv.insert(k.trim().to_string(), v.trim().to_string()).is_some() {
                return Err(Error::parse(n, format!("duplicate key `{}`", k.trim())));
            }
        }
    }
    let params = HyperParams {
        clauses: num(&kv, "clauses")?,
        threshold: num(&kv, "threshold")?,
        specificity: num(&kv, "specificity")?,
        states_per_action: num(&kv, "states")?,
        epochs: num(&kv, "epochs")?,
        boost_true_positive: parse_flag(get(&kv, "boost")?)?,
        negative_literals: parse_flag(get(&kv, "negative_literals")?)?,
        seed: num(&kv, "seed")?,
    };
    params.validate()?;
    let settings = TaskSettings {
        task: get(&kv, "task")?.parse()?,
        mode: get(&kv, "mode")?.parse::<Mode>()?,
        conv: parse_flag(get(&kv, "conv")?)?,
        order_tags: parse_flag(get(&kv, "order_tags")?)?,
        slots: num(&kv, "slots")?,
    };
    let classes: Vec<String> = get(&kv, "classes")?.split(',').map(str::to_string).collect();
    let schema = Schema::parse(&get(&kv, "schema")?.replace(';', "\n"))?;
    let atoms = get(&kv, "features")?
        .split(';')
        .map(parse_atom)
        .collect::<Result<Vec<_>>>()?;
    let features = atoms.len();
    let index = AtomIndex::new(atoms);
    if index.len() != features {
        return Err(Error::Model("repeated feature atoms".into()));
    }

    let mut teams: Vec<(Vec<ClauseTeam>, Vec<ClauseTeam>)> = vec![(vec![], vec![]); classes.len()];
    for (n, line) in clause_lines {
        let mut parts = line.splitn(3, ' ');
        let polarity = parts
            .next()
            .and_then(|s| s.chars().next())
            .and_then(Polarity::from_symbol)
            .ok_or_else(|| Error::parse(n, "bad polarity"))?;
        let class: usize = parts
            .next()
            .and_then(|s| s.parse().ok())
            .filter(|&c| c < classes.len())
            .ok_or_else(|| Error::parse(n, "bad class id"))?;
        let states = parts
            .next()
            .unwrap_or("")
            .split(',')
            .map(|s| s.trim().parse::<u16>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|_| Error::parse(n, "bad automaton state"))?;
        if states.len() != 2 * features {
            return Err(Error::parse(
                n,
                format!("expected {} states, got {}", 2 * features, states.len()),
            ));
        }
        let team = ClauseTeam::from_states(polarity, params.states_per_action, states)?;
        match polarity {
            Polarity::Positive => teams[class].0.push(team),
            Polarity::Negative => teams[class].1.push(team),
        }
    }
    let banks = classes
        .iter()
        .zip(teams)
        .map(|(label, (pos, neg))| {
            Ok(ClassBank {
                label: label.clone(),
                machine: TsetlinMachine::from_clauses(params.clone(), pos, neg)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let machine = MultiClassMachine::from_banks(banks)?;
    let encoder = TaskEncoder::from_parts(settings, schema, index, classes);
    Ok(Trained { encoder, machine })
}

pub fn write_model(t: &Trained, path: &Path) -> Result<()> {
    std::fs::write(path, to_model_string(t))?;
    Ok(())
}

pub fn read_model(path: &Path) -> Result<Trained> {
    parse_model(&std::fs::read_to_string(path)?)
}

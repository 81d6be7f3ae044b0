//! bAbI-style story files. Statements are `ID sentence`; a question line is
//! `ID question\tanswer\tsupport ids`. IDs restart at 1 for every story and
//! each story ends with its single question.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::qa::QAInstance;

use super::Dataset;

pub fn to_babi_string(data: &Dataset) -> String {
    let mut out = String::new();
    for inst in &data.instances {
        for (i, s) in inst.statements.iter().enumerate() {
            let _ = writeln!(out, "{} {}", i + 1, s);
        }
        let support: Vec<String> = inst.support.iter().map(ToString::to_string).collect();
        let _ = writeln!(
            out,
            "{} {}\t{}\t{}",
            inst.statements.len() + 1,
            inst.question,
            inst.answer,
            support.join(" ")
        );
    }
    out
}

pub fn parse_babi(text: &str) -> Result<Dataset> {
    let mut instances = Vec::new();
    let mut statements: Vec<String> = Vec::new();
    let mut expected = 1usize;
    for (i, line) in text.lines().enumerate() {
        let n = i + 1;
        if line.trim().is_empty() {
            continue;
        }
        let (id, rest) = line
            .split_once(' ')
            .ok_or_else(|| Error::parse(n, "expected `ID text`"))?;
        let id: usize = id
            .parse()
            .map_err(|_| Error::parse(n, format!("bad line id `{id}`")))?;
        if id == 1 && expected != 1 {
            return Err(Error::parse(n, "story ended without a question"));
        }
        if id != expected {
            return Err(Error::parse(n, format!("line id {id} where {expected} was expected")));
        }
        if rest.contains('\t') {
            let mut fields = rest.split('\t');
            let question = fields.next().unwrap_or("").trim().to_string();
            let answer = fields
                .next()
                .ok_or_else(|| Error::parse(n, "question without answer"))?
                .trim()
                .to_string();
            let support = fields
                .next()
                .unwrap_or("")
                .split_whitespace()
                .map(|s| s.parse::<usize>().map_err(|_| Error::parse(n, format!("bad support id `{s}`"))))
                .collect::<Result<Vec<_>>>()?;
            if statements.is_empty() {
                return Err(Error::parse(n, "question before any statement"));
            }
            instances.push(QAInstance {
                id: instances.len(),
                statements: std::mem::take(&mut statements),
                question,
                answer,
                support,
            });
            expected = 1;
        } else {
            statements.push(rest.to_string());
            expected += 1;
        }
    }
    if !statements.is_empty() {
        return Err(Error::MalformedInstance("last story has no question".into()));
    }
    Ok(Dataset { instances })
}

pub fn write_babi(data: &Dataset, path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, to_babi_string(data))?;
    Ok(())
}

pub fn read_babi(path: impl AsRef<Path>) -> Result<Dataset> {
    parse_babi(&std::fs::read_to_string(path)?)
}

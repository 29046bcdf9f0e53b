//! Plain key = value scenario files, organized in [sections]. Rationals are
//! written "p/q"; point lists separate entries with ';'.
//!
//! ```text
//! [geometry]
//! model = blowup-p2
//! blown_up = 1,0,0 ; 1,1,1
//!
//! [divisor]
//! degree = 2
//! mults = 1, 1
//!
//! [valuation]
//! kind = point
//! point = 0,0,1
//!
//! [budgets]
//! max_level = 6
//!
//! [expected]
//! body_vertices = 0,0 ; 1,0 ; 0,2
//! ```

use std::collections::BTreeMap;

use anyhow::{anyhow, bail, Context, Result};
use okounkov::exact::parse_rat;
use okounkov::poly::Poly;
use okounkov::{DivisorClass, GeometrySpec, Rat, SeriesFamily, ValuationSpec};

#[derive(Debug)]
pub struct ConfigScenario {
    pub family: SeriesFamily,
    pub valuation: ValuationSpec,
    pub max_level: Option<usize>,
    pub expected_body: Option<Vec<Vec<Rat>>>,
}

fn parse_rat_list(s: &str) -> Result<Vec<Rat>> {
    s.split(',')
        .map(|t| parse_rat(t).map_err(|e| anyhow!("{e}")))
        .collect()
}

fn parse_point_list(s: &str) -> Result<Vec<Vec<Rat>>> {
    s.split(';').map(parse_rat_list).collect()
}

type Sections = BTreeMap<String, BTreeMap<String, String>>;

fn parse_sections(text: &str) -> Result<Sections> {
    let mut out: Sections = BTreeMap::new();
    let mut current = String::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some(name) = line.strip_prefix('[').and_then(|l| l.strip_suffix(']')) {
            current = name.trim().to_string();
            out.entry(current.clone()).or_default();
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .with_context(|| format!("line {}: expected key = value", lineno + 1))?;
        if current.is_empty() {
            bail!("line {}: key outside any [section]", lineno + 1);
        }
        out.get_mut(&current)
            .unwrap()
            .insert(k.trim().to_string(), v.trim().to_string());
    }
    Ok(out)
}

pub fn parse_config(text: &str) -> Result<ConfigScenario> {
    let sections = parse_sections(text)?;
    let geom = sections
        .get("geometry")
        .context("missing [geometry] section")?;
    let model = geom.get("model").context("geometry.model required")?.as_str();
    let geometry = match model {
        "p1" => {
            let p = geom
                .get("flag_point")
                .map(|s| parse_rat_list(s))
                .transpose()?
                .unwrap_or_else(|| vec![okounkov::rat(0), okounkov::rat(1)]);
            GeometrySpec::P1 { flag_point: p }
        }
        "p2" | "blowup-p2" => {
            let line = geom
                .get("flag_line")
                .map(|s| parse_rat_list(s))
                .transpose()?
                .unwrap_or_else(|| vec![okounkov::rat(1), okounkov::rat(0), okounkov::rat(0)]);
            let point = geom
                .get("flag_point")
                .map(|s| parse_rat_list(s))
                .transpose()?
                .unwrap_or_else(|| vec![okounkov::rat(0), okounkov::rat(0), okounkov::rat(1)]);
            if model == "p2" {
                GeometrySpec::P2 { flag_line: line, flag_point: point }
            } else {
                let blown = geom
                    .get("blown_up")
                    .context("blowup-p2 needs geometry.blown_up")?;
                GeometrySpec::BlowupP2 {
                    flag_line: line,
                    flag_point: point,
                    blown_up: parse_point_list(blown)?,
                }
            }
        }
        other => bail!("unknown model `{other}`"),
    };
    let div = sections.get("divisor").context("missing [divisor] section")?;
    let degree = parse_rat(div.get("degree").context("divisor.degree required")?)
        .map_err(|e| anyhow!("{e}"))?;
    let mults = div
        .get("mults")
        .map(|s| parse_rat_list(s))
        .transpose()?
        .unwrap_or_default();
    let family = SeriesFamily::new(geometry, DivisorClass::with_mults(degree, mults))
        .map_err(|e| anyhow!("{e}"))?;

    let val = sections
        .get("valuation")
        .context("missing [valuation] section")?;
    let valuation = match val.get("kind").map(String::as_str) {
        Some("point") => {
            let p = parse_rat_list(val.get("point").context("valuation.point required")?)?;
            ValuationSpec::OrderAtPoint(p)
        }
        Some("curve") => {
            let c = parse_rat_list(val.get("curve").context("valuation.curve required")?)?;
            ValuationSpec::OrderAlongCurve(Poly::linear_form(&c))
        }
        Some("exceptional") => {
            let i: usize = val
                .get("index")
                .context("valuation.index required")?
                .parse()
                .context("valuation.index must be an integer")?;
            ValuationSpec::OrderAlongExceptional(i)
        }
        other => bail!("valuation.kind must be point | curve | exceptional, got {other:?}"),
    };

    let max_level = sections
        .get("budgets")
        .and_then(|b| b.get("max_level"))
        .map(|s| s.parse::<usize>().context("budgets.max_level must be an integer"))
        .transpose()?;
    let expected_body = sections
        .get("expected")
        .and_then(|e| e.get("body_vertices"))
        .map(|s| parse_point_list(s))
        .transpose()?;
    Ok(ConfigScenario {
        family,
        valuation,
        max_level,
        expected_body,
    })
}

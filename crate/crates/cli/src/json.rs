//! Page and stems JSON, schema version 1.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use mwstems_core::algebra::Element;
use mwstems_core::fields::CoefficientClass;
use mwstems_core::stems::StemPresentation;
use mwstems_core::{Bidegree, FieldSpec, Page, PageIndex, SsKind};

use crate::CliError;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PageLabel {
    Finite(u32),
    Text(String),
}

impl From<PageIndex> for PageLabel {
    fn from(p: PageIndex) -> Self {
        match p {
            PageIndex::Finite(r) => PageLabel::Finite(r),
            PageIndex::Infinity => PageLabel::Text("inf".into()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WindowJson {
    pub t_max: i32,
    pub c_max: i32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassJson {
    pub t: i32,
    pub c: i32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eps: Option<u32>,
    pub repr: String,
    pub color: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeJson {
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r: Option<u32>,
    pub from: usize,
    pub to: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PageJson {
    pub v: u32,
    pub field: String,
    pub ss: String,
    pub page: PageLabel,
    pub window: WindowJson,
    pub classes: Vec<ClassJson>,
    pub edges: Vec<EdgeJson>,
}

pub fn color_name(c: CoefficientClass) -> &'static str {
    match c {
        CoefficientClass::Unit => "black",
        CoefficientClass::Blue => "blue",
        CoefficientClass::Red => "red",
        CoefficientClass::Green => "green",
    }
}

fn color_of(page: &Page, x: &Element) -> &'static str {
    let m = x.leading().expect("classes are nonzero");
    color_name(page.table.kmilnor().coefficient_class(page.table.field_part(m)))
}

/// Edges for multiplication by a monomial generator, between reported classes.
fn product_edges(
    page: &Page,
    kind: &str,
    gen: Option<usize>,
    index: &HashMap<(Bidegree, usize), usize>,
    out: &mut Vec<EdgeJson>,
) {
    let Some(g) = gen else { return };
    let g = Element::from_monomial(page.table.gen_monomial(g));
    for class in page.classes() {
        let Ok(Some((b, hits))) = page.product(&class.element, &g) else { continue };
        for j in hits {
            if let Some(&to) = index.get(&(b, j)) {
                let from = index[&(class.bidegree, class.index)];
                out.push(EdgeJson { kind: kind.into(), r: None, from, to });
            }
        }
    }
}

pub fn page_json(page: &Page) -> PageJson {
    let classes = page.classes();
    let index: HashMap<(Bidegree, usize), usize> =
        classes.iter().enumerate().map(|(k, c)| ((c.bidegree, c.index), k)).collect();
    let mut edges = Vec::new();
    product_edges(page, "rho", Some(0), &index, &mut edges);
    product_edges(page, "v2", page.table.v_index(2), &index, &mut edges);
    if page.index != PageIndex::Infinity {
        for d in &page.differentials {
            let Some(&from) = index.get(&(d.source, d.source_index)) else { continue };
            for &j in &d.target_indices {
                if let Some(&to) = index.get(&(d.target, j)) {
                    edges.push(EdgeJson { kind: "d".into(), r: Some(d.r), from, to });
                }
            }
        }
    }
    PageJson {
        v: SCHEMA_VERSION,
        field: page.field.spec.to_string(),
        ss: page.ss.name().into(),
        page: page.index.into(),
        window: WindowJson { t_max: page.window.t_max, c_max: page.window.c_max },
        classes: classes
            .iter()
            .map(|c| ClassJson {
                t: c.bidegree.t,
                c: c.bidegree.c,
                eps: c.eps,
                repr: page.table.format(&c.element),
                color: color_of(page, &c.element).into(),
            })
            .collect(),
        edges,
    }
}

fn schema(msg: impl Into<String>) -> CliError {
    CliError::Schema(msg.into())
}

impl PageJson {
    pub fn validate(&self) -> Result<(), CliError> {
        if self.v != SCHEMA_VERSION {
            return Err(schema(format!("unsupported version {}", self.v)));
        }
        FieldSpec::parse(&self.field).map_err(|e| schema(e.to_string()))?;
        let ss = match self.ss.as_str() {
            "bockstein" => SsKind::Bockstein,
            "adams" => SsKind::Adams,
            other => return Err(schema(format!("unknown spectral sequence `{other}`"))),
        };
        match &self.page {
            PageLabel::Finite(r) if *r >= ss.first_page() => {}
            PageLabel::Text(s) if s == "inf" => {}
            other => return Err(schema(format!("bad page {other:?}"))),
        }
        let w = &self.window;
        if w.t_max < 0 || w.c_max < 0 {
            return Err(schema("negative window"));
        }
        for (i, c) in self.classes.iter().enumerate() {
            if c.t < 0 || c.c < 0 || c.t > w.t_max || c.c > w.c_max {
                return Err(schema(format!("class {i} at ({}, {}) lies outside the window", c.t, c.c)));
            }
            if !["black", "blue", "red", "green"].contains(&c.color.as_str()) {
                return Err(schema(format!("class {i} has unknown colour `{}`", c.color)));
            }
        }
        for (i, e) in self.edges.iter().enumerate() {
            if e.from >= self.classes.len() || e.to >= self.classes.len() {
                return Err(schema(format!("edge {i} points past the class list")));
            }
            match (e.kind.as_str(), e.r) {
                ("rho" | "v2", None) | ("d", Some(_)) => {}
                _ => return Err(schema(format!("edge {i} has kind `{}` and r {:?}", e.kind, e.r))),
            }
        }
        Ok(())
    }
}

pub fn parse_page(text: &str) -> Result<PageJson, CliError> {
    let p: PageJson = serde_json::from_str(text).map_err(|e| schema(e.to_string()))?;
    p.validate()?;
    Ok(p)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SummandJson {
    pub order: String,
    pub gen: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StemJson {
    pub t: i32,
    pub summands: Vec<SummandJson>,
    pub module: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StemsJson {
    pub v: u32,
    pub field: String,
    pub stems: Vec<StemJson>,
}

pub fn stems_json(field: FieldSpec, stems: &[StemPresentation]) -> StemsJson {
    StemsJson {
        v: SCHEMA_VERSION,
        field: field.to_string(),
        stems: stems
            .iter()
            .map(|s| StemJson {
                t: s.t,
                summands: s
                    .summands
                    .iter()
                    .map(|x| SummandJson { order: x.order.to_string(), gen: x.gen.clone() })
                    .collect(),
                module: s.module.clone(),
                note: s.note.map(str::to_string),
            })
            .collect(),
    }
}

pub fn parse_stems(text: &str) -> Result<StemsJson, CliError> {
    let s: StemsJson = serde_json::from_str(text).map_err(|e| schema(e.to_string()))?;
    if s.v != SCHEMA_VERSION {
        return Err(schema(format!("unsupported version {}", s.v)));
    }
    for st in &s.stems {
        for x in &st.summands {
            let ok = x.order == "inf" || x.order.strip_prefix("2^").is_some_and(|k| k.parse::<u32>().is_ok());
            if !ok {
                return Err(schema(format!("stem {}: bad order `{}`", st.t, x.order)));
            }
        }
    }
    Ok(s)
}

/// Plain-text table of stems.
pub fn stems_table(stems: &[StemPresentation]) -> String {
    let mut out = String::from("  t  module   group\n");
    for s in stems {
        let group = if s.summands.is_empty() {
            "0".to_string()
        } else {
            s.summands
                .iter()
                .map(|x| match x.order {
                    mwstems_core::fields::Order::Infinite => format!("Z_2<{}>", x.gen),
                    mwstems_core::fields::Order::Finite(k) => format!("Z/{}<{}>", 1u64 << k, x.gen),
                })
                .collect::<Vec<_>>()
                .join(" + ")
        };
        out.push_str(&format!("{:>3}  {:<7}  {group}", s.t, s.module));
        if let Some(n) = s.note {
            out.push_str(&format!("  ({n})"));
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> PageJson {
        PageJson {
            v: 1,
            field: "Fq:5".into(),
            ss: "adams".into(),
            page: PageLabel::Text("inf".into()),
            window: WindowJson { t_max: 4, c_max: 6 },
            classes: vec![
                ClassJson { t: 3, c: 1, eps: None, repr: "v_2".into(), color: "black".into() },
                ClassJson { t: 3, c: 2, eps: None, repr: "u*v_2".into(), color: "blue".into() },
            ],
            edges: vec![],
        }
    }

    #[test]
    fn round_trip() {
        let p = sample();
        let text = serde_json::to_string(&p).unwrap();
        assert!(text.contains(r#""page":"inf""#));
        assert_eq!(parse_page(&text).unwrap(), p);
    }

    #[test]
    fn schema_errors() {
        let mut p = sample();
        p.v = 2;
        assert!(p.validate().is_err());
        let mut p = sample();
        p.page = PageLabel::Finite(1);
        assert!(p.validate().is_err(), "adams has no E1");
        let mut p = sample();
        p.edges.push(EdgeJson { kind: "d".into(), r: None, from: 0, to: 1 });
        assert!(p.validate().is_err());
        let mut p = sample();
        p.classes[0].t = 9;
        assert!(p.validate().is_err());
        assert!(matches!(parse_page("{"), Err(CliError::Schema(_))));
        assert!(parse_stems(r#"{"v":1,"field":"R","stems":[{"t":3,"summands":[{"order":"8","gen":"x"}],"module":"?"}]}"#).is_err());
    }
}

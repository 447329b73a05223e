//! Versioned JSON documents exchanged by the command-line tool.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::caps::{CapReport, CapTrace, MixingCheck};
use crate::constructions::{IncidencePlane, RestrictionResult};
use crate::hypergraph::{CherryExperiment, Cherry, CliqueSystem, DegreeReport, EllValidation, KGraph};
use crate::process::{ProcessStats, ProcessTrace};
use crate::solvers::{Coloring, ColoringCheck, SolveResult, SplitColoring};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Document {
    CliqueSystem(CliqueSystem),
    Kgraph(KGraph),
    Plane(IncidencePlane),
    Restriction(RestrictionResult),
    Coloring(Coloring),
    SplitColoring(SplitColoring),
    ColoringCheck(ColoringCheck),
    Validation(EllValidation),
    SolveResult(SolveResult),
    ProcessTrace(ProcessTrace),
    ProcessStats(ProcessStats),
    DegreeReport(DegreeReport),
    Cherries { count: usize, cherries: Vec<Cherry> },
    CherryExperiment(CherryExperiment),
    CapReport(CapReport),
    CapTrace(CapTrace),
    Spectrum { q: usize, singular_values: Vec<f64>, second: f64 },
    Mixing { q: usize, samples: usize, all_hold: bool, checks: Vec<MixingCheck> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Envelope {
    pub version: u32,
    #[serde(flatten)]
    pub document: Document,
}

impl Envelope {
    pub fn new(document: Document) -> Self {
        Envelope { version: FORMAT_VERSION, document }
    }

    pub fn type_name(&self) -> &'static str {
        match &self.document {
            Document::CliqueSystem(_) => "clique_system",
            Document::Kgraph(_) => "kgraph",
            Document::Plane(_) => "plane",
            Document::Restriction(_) => "restriction",
            Document::Coloring(_) => "coloring",
            Document::SplitColoring(_) => "split_coloring",
            Document::ColoringCheck(_) => "coloring_check",
            Document::Validation(_) => "validation",
            Document::SolveResult(_) => "solve_result",
            Document::ProcessTrace(_) => "process_trace",
            Document::ProcessStats(_) => "process_stats",
            Document::DegreeReport(_) => "degree_report",
            Document::Cherries { .. } => "cherries",
            Document::CherryExperiment(_) => "cherry_experiment",
            Document::CapReport(_) => "cap_report",
            Document::CapTrace(_) => "cap_trace",
            Document::Spectrum { .. } => "spectrum",
            Document::Mixing { .. } => "mixing",
        }
    }

    /// JSON value with `extra` merged into the top-level `provenance` object.
    pub fn to_value_with(&self, extra: &serde_json::Map<String, Value>) -> serde_json::Result<Value> {
        let mut value = serde_json::to_value(self)?;
        let obj = value.as_object_mut().expect("documents serialize to objects");
        let prov = obj.entry("provenance").or_insert_with(|| Value::Object(Default::default()));
        if let Value::Object(p) = prov {
            for (k, v) in extra {
                p.insert(k.clone(), v.clone());
            }
        }
        Ok(value)
    }
}

pub fn parse_document(text: &str) -> serde_json::Result<Envelope> {
    serde_json::from_str(text)
}

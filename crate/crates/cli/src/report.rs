use infmln_core::Weight;
use serde::Serialize;

pub const TOOL: &str = "infmln";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Serialize, Debug)]
pub struct Report {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: &'static str,
    pub config: Config,
    pub result: Payload,
}

#[derive(Serialize, Debug)]
pub struct Config {
    /// Arguments that regenerate this report, defaults included.
    pub args: Vec<String>,
}

#[derive(Serialize, Debug)]
#[serde(untagged)]
pub enum Payload {
    Analyze(Analysis),
    Uniqueness(Uniqueness),
    Query(Query),
    Limit(Limit),
    Sample(Sample),
    Sensitivity(Sensitivity),
    Sat(Sat),
}

/// Finite weights as numbers, infinite ones as the string "inf".
#[derive(Serialize, Debug, Clone, Copy)]
#[serde(untagged)]
pub enum WeightValue {
    Finite(f64),
    Infinite(&'static str),
}

impl From<Weight> for WeightValue {
    fn from(w: Weight) -> Self {
        match w {
            Weight::Finite(x) => WeightValue::Finite(x),
            Weight::Infinite => WeightValue::Infinite("inf"),
        }
    }
}

#[derive(Serialize, Debug)]
pub struct FormulaEntry {
    pub index: usize,
    pub weight: WeightValue,
    pub text: String,
}

#[derive(Serialize, Debug)]
pub struct ClauseEntry {
    pub index: usize,
    pub origin: usize,
    pub weight: WeightValue,
    pub text: String,
    pub determinate: bool,
    pub violating: Vec<String>,
}

#[derive(Serialize, Debug)]
pub struct Analysis {
    pub formulas: Vec<FormulaEntry>,
    pub clauses: Vec<ClauseEntry>,
    pub warnings: Vec<String>,
    pub sigma_determinate: bool,
    pub ground_clause_bound: usize,
    pub neighbor_bound: usize,
}

#[derive(Serialize, Debug)]
pub struct DepthEntry {
    pub depth: usize,
    pub atoms: usize,
    pub running_max: f64,
    pub witness: Option<String>,
}

#[derive(Serialize, Debug)]
pub struct Uniqueness {
    pub max_depth: usize,
    pub window: usize,
    pub depths: Vec<DepthEntry>,
    pub supremum: f64,
    pub stabilized: bool,
    pub verdict: &'static str,
    pub note: &'static str,
}

#[derive(Serialize, Debug)]
pub struct Assignment {
    pub atom: String,
    pub value: bool,
}

#[derive(Serialize, Debug)]
pub struct Marginal {
    pub atom: String,
    pub probability: f64,
}

#[derive(Serialize, Debug)]
pub struct Query {
    pub atoms: Vec<String>,
    pub policy: &'static str,
    pub boundary: Vec<Assignment>,
    pub clauses: usize,
    pub log_partition: f64,
    pub marginals: Vec<Marginal>,
    /// Row `k` has atom `i` true when bit `i` of `k` is set.
    pub table: Vec<f64>,
}

#[derive(Serialize, Debug)]
pub struct Limit {
    pub atoms: Vec<String>,
    pub policy: &'static str,
    pub boundary: Vec<Assignment>,
    pub clauses: usize,
    pub max_satisfied: usize,
    pub maximizers: usize,
    pub marginals: Vec<Marginal>,
    pub table: Vec<f64>,
}

#[derive(Serialize, Debug)]
pub struct Estimate {
    pub atom: String,
    pub distance: usize,
    pub probability: f64,
    pub std_error: f64,
    pub effective_samples: f64,
}

#[derive(Serialize, Debug)]
pub struct Sample {
    pub queries: Vec<String>,
    pub radius: usize,
    pub policy: &'static str,
    pub boundary_atoms: usize,
    pub clauses: usize,
    pub sweeps: usize,
    pub burnin: usize,
    pub seed: u64,
    /// Every volume atom in scan order, queries first.
    pub atoms: Vec<Estimate>,
}

#[derive(Serialize, Debug)]
pub struct PolicyEstimate {
    pub policy: &'static str,
    pub probability: f64,
    pub std_error: f64,
}

#[derive(Serialize, Debug)]
pub struct QuerySensitivity {
    pub atom: String,
    pub estimates: Vec<PolicyEstimate>,
    pub spread: f64,
    pub combined_se: f64,
}

#[derive(Serialize, Debug)]
pub struct Sensitivity {
    pub radius: usize,
    pub weights: Vec<f64>,
    pub sweeps: usize,
    pub burnin: usize,
    pub seed: u64,
    pub queries: Vec<QuerySensitivity>,
}

#[derive(Serialize, Debug)]
pub struct SatDepth {
    pub depth: usize,
    pub atoms: usize,
    pub clauses: usize,
    pub satisfiable: bool,
    pub model: Option<Vec<Assignment>>,
}

#[derive(Serialize, Debug)]
pub struct SatVerdict {
    pub kind: &'static str,
    pub depth: usize,
}

#[derive(Serialize, Debug)]
pub struct Sat {
    /// Present for entailment checks.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub query: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub entailed: Option<bool>,
    pub max_depth: usize,
    pub verdict: SatVerdict,
    pub depths: Vec<SatDepth>,
}

impl Report {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }
}

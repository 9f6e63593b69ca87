//! Instance files: a JSON object notation with a `kind` tag, canonical
//! emission (struct field order, sorted name entries, two-space indent,
//! trailing newline) so that parse/emit round trips are byte-identical on
//! canonical files.

use crate::blo::Blo;
use crate::formula::{parse_formula, Formula};
use crate::lattice::FiniteLattice;
use crate::mv::{MvAlgebra, MvError};
use crate::mvset::MvName;
use crate::site::{build_site, FiniteSite};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("parse error at {line}:{column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormatError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("invalid instance: {0}")]
    Invalid(String),
}

/// An MV-algebra specification: either a Łukasiewicz chain by subdivision
/// count, or explicit `⊕`/`¬` tables (the strong operations are derived).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MvSpec {
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub lukasiewicz: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub oplus: Option<Vec<Vec<usize>>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub neg: Option<Vec<usize>>,
}

/// A nested name: entries pair a sub-name with a value index into the
/// algebra carrier.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct NameNode {
    pub entries: Vec<(NameNode, usize)>,
}

impl NameNode {
    fn canonicalize(&mut self) {
        for (n, _) in &mut self.entries {
            n.canonicalize();
        }
        self.entries.sort();
        self.entries.dedup();
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum InstanceFile {
    Lattice {
        size: usize,
        leq: Vec<Vec<u8>>,
        #[serde(skip_serializing_if = "Option::is_none", default)]
        labels: Option<Vec<String>>,
    },
    Blo {
        size: usize,
        leq: Vec<Vec<u8>>,
        #[serde(skip_serializing_if = "Option::is_none", default)]
        labels: Option<Vec<String>>,
        operators: Vec<Vec<usize>>,
    },
    Mv {
        #[serde(flatten)]
        spec: MvSpec,
    },
    Site {
        order: Vec<Vec<u8>>,
        #[serde(skip_serializing_if = "Option::is_none", default)]
        tensor: Option<Vec<Vec<usize>>>,
    },
    Name {
        algebra: MvSpec,
        name: NameNode,
    },
    FormulaSuite {
        formulas: Vec<String>,
    },
}

/// Parse an instance file, annotating syntax errors with their position.
pub fn parse(text: &str) -> Result<InstanceFile, ParseError> {
    serde_json::from_str(text).map_err(|e| ParseError {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })
}

/// Canonical emission: normalize (sorted name entries) and pretty-print.
pub fn emit(file: &InstanceFile) -> String {
    let mut canonical = file.clone();
    if let InstanceFile::Name { name, .. } = &mut canonical {
        name.canonicalize();
    }
    let mut out = serde_json::to_string_pretty(&canonical).expect("instance files serialize");
    out.push('\n');
    out
}

fn bool_table(rows: &[Vec<u8>]) -> Vec<Vec<bool>> {
    rows.iter()
        .map(|r| r.iter().map(|&b| b != 0).collect())
        .collect()
}

impl InstanceFile {
    pub fn kind(&self) -> &'static str {
        match self {
            InstanceFile::Lattice { .. } => "lattice",
            InstanceFile::Blo { .. } => "blo",
            InstanceFile::Mv { .. } => "mv",
            InstanceFile::Site { .. } => "site",
            InstanceFile::Name { .. } => "name",
            InstanceFile::FormulaSuite { .. } => "formula-suite",
        }
    }

    pub fn to_lattice(&self) -> Result<FiniteLattice, FormatError> {
        match self {
            InstanceFile::Lattice { size, leq, labels }
            | InstanceFile::Blo {
                size, leq, labels, ..
            } => {
                if leq.len() != *size {
                    return Err(FormatError::Invalid(format!(
                        "size field is {size} but the table has {} rows",
                        leq.len()
                    )));
                }
                FiniteLattice::from_leq_limited(bool_table(leq), labels.clone(), 64)
                    .map_err(|e| FormatError::Invalid(e.to_string()))
            }
            other => Err(FormatError::Invalid(format!(
                "expected a lattice or blo file, got {}",
                other.kind()
            ))),
        }
    }

    pub fn to_blo(&self) -> Result<Blo, FormatError> {
        let lattice = self.to_lattice()?;
        let operators = match self {
            InstanceFile::Blo { operators, .. } => operators.clone(),
            InstanceFile::Lattice { .. } => Vec::new(),
            other => {
                return Err(FormatError::Invalid(format!(
                    "expected a lattice or blo file, got {}",
                    other.kind()
                )))
            }
        };
        Blo::new(lattice, operators).map_err(|e| FormatError::Invalid(e.to_string()))
    }

    pub fn to_mv(&self) -> Result<MvAlgebra, FormatError> {
        let spec = match self {
            InstanceFile::Mv { spec } => spec,
            InstanceFile::Name { algebra, .. } => algebra,
            other => {
                return Err(FormatError::Invalid(format!(
                    "expected an mv or name file, got {}",
                    other.kind()
                )))
            }
        };
        mv_from_spec(spec)
    }

    pub fn to_site(&self) -> Result<FiniteSite, FormatError> {
        match self {
            InstanceFile::Site { order, tensor } => build_site(bool_table(order), tensor.clone())
                .map_err(|e| FormatError::Invalid(e.to_string())),
            other => Err(FormatError::Invalid(format!(
                "expected a site file, got {}",
                other.kind()
            ))),
        }
    }

    pub fn to_name(&self) -> Result<(MvAlgebra, MvName), FormatError> {
        match self {
            InstanceFile::Name { algebra, name } => {
                let alg = mv_from_spec(algebra)?;
                let name = name_from_node(name, alg.size())?;
                Ok((alg, name))
            }
            other => Err(FormatError::Invalid(format!(
                "expected a name file, got {}",
                other.kind()
            ))),
        }
    }

    pub fn to_formulas(&self) -> Result<Vec<Formula>, FormatError> {
        match self {
            InstanceFile::FormulaSuite { formulas } => formulas
                .iter()
                .map(|s| parse_formula(s).map_err(|e| FormatError::Invalid(e.to_string())))
                .collect(),
            other => Err(FormatError::Invalid(format!(
                "expected a formula-suite file, got {}",
                other.kind()
            ))),
        }
    }
}

fn mv_from_spec(spec: &MvSpec) -> Result<MvAlgebra, FormatError> {
    match (&spec.lukasiewicz, &spec.oplus, &spec.neg) {
        (Some(n), None, None) => {
            if *n == 0 {
                return Err(FormatError::Invalid(
                    "lukasiewicz subdivision must be ≥ 1".into(),
                ));
            }
            Ok(MvAlgebra::lukasiewicz(*n))
        }
        (None, Some(oplus), Some(neg)) => MvAlgebra::derived_from(oplus.clone(), neg.clone())
            .map_err(|e: MvError| FormatError::Invalid(e.to_string())),
        _ => Err(FormatError::Invalid(
            "an mv spec needs either `lukasiewicz` or both `oplus` and `neg`".into(),
        )),
    }
}

fn name_from_node(node: &NameNode, carrier: usize) -> Result<MvName, FormatError> {
    let mut entries = Vec::with_capacity(node.entries.len());
    for (sub, value) in &node.entries {
        if *value >= carrier {
            return Err(FormatError::Invalid(format!(
                "name value {value} out of range for carrier size {carrier}"
            )));
        }
        entries.push((name_from_node(sub, carrier)?, *value));
    }
    Ok(MvName::new(entries))
}

pub fn name_to_node(name: &MvName) -> NameNode {
    NameNode {
        entries: name
            .entries()
            .iter()
            .map(|(n, v)| (name_to_node(n), *v))
            .collect(),
    }
}

pub fn lattice_to_file(l: &FiniteLattice) -> InstanceFile {
    InstanceFile::Lattice {
        size: l.size(),
        leq: l
            .leq_table()
            .iter()
            .map(|r| r.iter().map(|&b| b as u8).collect())
            .collect(),
        labels: l.labels().map(|ls| ls.to_vec()),
    }
}

pub fn blo_to_file(a: &Blo) -> InstanceFile {
    InstanceFile::Blo {
        size: a.size(),
        leq: a
            .lattice()
            .leq_table()
            .iter()
            .map(|r| r.iter().map(|&b| b as u8).collect())
            .collect(),
        labels: a.lattice().labels().map(|ls| ls.to_vec()),
        operators: a.operators().to_vec(),
    }
}

pub fn site_to_file(s: &FiniteSite) -> InstanceFile {
    InstanceFile::Site {
        order: s
            .leq_table()
            .iter()
            .map(|r| r.iter().map(|&b| b as u8).collect())
            .collect(),
        tensor: s.tensor_table().cloned(),
    }
}

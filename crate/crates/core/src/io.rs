//! JSON tensor files: `{"name", "psi", "phi", "notes"?, "paper_discrepancy"?}`,
//! written with two-space indentation and a trailing newline.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::expr::parse;
use crate::multivec::MV2;
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TensorFile {
    pub name: String,
    pub psi: [String; 3],
    pub phi: [String; 3],
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub notes: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub paper_discrepancy: Option<bool>,
}

impl TensorFile {
    pub fn new(name: &str, psi: [&str; 3], phi: [&str; 3]) -> Self {
        TensorFile {
            name: name.to_string(),
            psi: psi.map(String::from),
            phi: phi.map(String::from),
            notes: None,
            paper_discrepancy: None,
        }
    }

    pub fn from_tensor(name: &str, l: &MV2) -> Self {
        TensorFile {
            name: name.to_string(),
            psi: l.psi.to_strings(),
            phi: l.phi.to_strings(),
            notes: None,
            paper_discrepancy: None,
        }
    }

    /// Parse the six component strings.
    pub fn tensor(&self) -> Result<MV2> {
        let field = |label: &str, i: usize, s: &str| {
            parse(s).map_err(|e| Error::InvalidFile(format!("{}: {label}[{i}] = {s:?}: {e}", self.name)))
        };
        let mut psi = Vec::with_capacity(3);
        let mut phi = Vec::with_capacity(3);
        for i in 0..3 {
            psi.push(field("psi", i, &self.psi[i])?);
            phi.push(field("phi", i, &self.phi[i])?);
        }
        let v = |c: Vec<crate::ScalarExpr>| {
            let [a, b, c]: [crate::ScalarExpr; 3] = c.try_into().expect("three components");
            crate::Vec3Expr::new(a, b, c)
        };
        Ok(MV2::new(v(psi), v(phi)))
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("tensor file serializes");
        s.push('\n');
        s
    }

    /// Parse and validate a tensor file; every component must parse.
    pub fn from_json(text: &str) -> Result<Self> {
        let file: TensorFile = serde_json::from_str(text).map_err(|e| Error::InvalidFile(e.to_string()))?;
        file.tensor()?;
        Ok(file)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::InvalidFile(format!("{}: {e}", path.display())))?;
        TensorFile::from_json(&text)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        std::fs::write(path, self.to_json()).map_err(|e| Error::InvalidFile(format!("{}: {e}", path.display())))
    }
}

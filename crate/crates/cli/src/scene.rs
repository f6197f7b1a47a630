//! JSON scene files: a window (box union or convex polygon), a lattice with
//! an optional block split, and/or named matrices, depending on the command.
//! Rationals are strings throughout, so parsing is lossless.

use std::path::Path;

use serde::{Deserialize, Serialize};

use gabortile::{BoxSet, ConvexPolygon, RatMatrix};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SceneLattice {
    pub generator: RatMatrix,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub block_split: Option<usize>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scene {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window: Option<BoxSet>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub polygon: Option<ConvexPolygon>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lattice: Option<SceneLattice>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix_a: Option<RatMatrix>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix_d: Option<RatMatrix>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix_b: Option<RatMatrix>,
}

/// Parse failure with the position serde_json reported.
#[derive(Debug)]
pub struct ParseError {
    pub message: String,
    pub line: usize,
    pub column: usize,
}

impl Scene {
    pub fn from_str(text: &str) -> Result<Scene, ParseError> {
        serde_json::from_str(text).map_err(|e| ParseError {
            message: e.to_string(),
            line: e.line(),
            column: e.column(),
        })
    }

    pub fn from_file(path: &Path) -> Result<Scene, ParseError> {
        let text = std::fs::read_to_string(path).map_err(|e| ParseError {
            message: format!("cannot read {}: {e}", path.display()),
            line: 0,
            column: 0,
        })?;
        Scene::from_str(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("scenes serialize")
    }
}

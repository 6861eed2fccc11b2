// SPDX-License-Identifier: Apache-2.0

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;

/// Source language a module was compiled from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum LanguageTag {
    C,
    #[serde(rename = "C++")]
    Cpp,
    Julia,
    Rust,
    Swift,
    #[serde(rename = "other")]
    Other,
}

impl LanguageTag {
    pub const ALL: [LanguageTag; 6] = [
        LanguageTag::C,
        LanguageTag::Cpp,
        LanguageTag::Julia,
        LanguageTag::Rust,
        LanguageTag::Swift,
        LanguageTag::Other,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            LanguageTag::C => "C",
            LanguageTag::Cpp => "C++",
            LanguageTag::Julia => "Julia",
            LanguageTag::Rust => "Rust",
            LanguageTag::Swift => "Swift",
            LanguageTag::Other => "other",
        }
    }
}

impl fmt::Display for LanguageTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for LanguageTag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let tag = match s.trim().to_ascii_lowercase().as_str() {
            "c" => LanguageTag::C,
            "c++" | "cpp" | "cxx" => LanguageTag::Cpp,
            "julia" => LanguageTag::Julia,
            "rust" => LanguageTag::Rust,
            "swift" => LanguageTag::Swift,
            "other" => LanguageTag::Other,
            _ => return Err(Error::Validation(format!("unknown language tag {s:?}"))),
        };
        Ok(tag)
    }
}

// SPDX-License-Identifier: Apache-2.0

use std::collections::HashSet;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, IoContext, Result};
use crate::language::LanguageTag;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Ecosystem {
    Cargo,
    Swiftpm,
    SpackLike,
    Cmake,
    Autotools,
    RawShell,
    Prebuilt,
}

impl Ecosystem {
    pub const ALL: [Ecosystem; 7] = [
        Ecosystem::Cargo,
        Ecosystem::Swiftpm,
        Ecosystem::SpackLike,
        Ecosystem::Cmake,
        Ecosystem::Autotools,
        Ecosystem::RawShell,
        Ecosystem::Prebuilt,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Ecosystem::Cargo => "cargo",
            Ecosystem::Swiftpm => "swiftpm",
            Ecosystem::SpackLike => "spack-like",
            Ecosystem::Cmake => "cmake",
            Ecosystem::Autotools => "autotools",
            Ecosystem::RawShell => "raw-shell",
            Ecosystem::Prebuilt => "prebuilt",
        }
    }

    /// Ecosystems built by a C/C++ compiler driver.
    pub fn is_c_family(self) -> bool {
        matches!(
            self,
            Ecosystem::SpackLike | Ecosystem::Cmake | Ecosystem::Autotools | Ecosystem::RawShell
        )
    }
}

impl fmt::Display for Ecosystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Ecosystem {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ecosystem::ALL
            .into_iter()
            .find(|e| e.as_str() == s)
            .ok_or_else(|| Error::Validation(format!("unknown ecosystem {s:?}")))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Source {
    Git {
        url: String,
        #[serde(rename = "ref", default, skip_serializing_if = "Option::is_none")]
        reference: Option<String>,
    },
    /// `location` is a URL or a filesystem path.
    Tarball {
        #[serde(alias = "url", alias = "path")]
        location: String,
    },
    Local {
        path: PathBuf,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PackageDescriptor {
    pub name: String,
    pub ecosystem: Ecosystem,
    pub source: Source,
    /// Tried when fetching `source` fails.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fallback_source: Option<Source>,
    #[serde(default)]
    pub build_commands: Vec<String>,
    #[serde(default)]
    pub dependencies: Vec<String>,
    #[serde(default)]
    pub extra_flags: Vec<String>,
    pub language_tag: LanguageTag,
}

// Wire format: `source` may carry a nested `fallback` object, and
// `ecosystem`/`language_tag` are plain strings validated per entry so errors
// can name the offending package.
#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawEntry {
    name: String,
    ecosystem: String,
    source: RawSource,
    #[serde(default)]
    build_commands: Vec<String>,
    #[serde(default)]
    dependencies: Vec<String>,
    #[serde(default)]
    extra_flags: Vec<String>,
    language_tag: String,
}

#[derive(Deserialize)]
struct RawSource {
    #[serde(flatten)]
    primary: Source,
    #[serde(default)]
    fallback: Option<Source>,
}

/// Parse a JSON package list.
pub fn parse_package_list(document: &str) -> Result<Vec<PackageDescriptor>> {
    let raw: Vec<RawEntry> = serde_json::from_str(document).map_err(|e| Error::Parse {
        line: e.line(),
        message: e.to_string(),
    })?;
    let mut out = Vec::with_capacity(raw.len());
    let mut names = HashSet::new();
    for entry in raw {
        if entry.name.trim().is_empty() {
            return Err(Error::Validation("package with an empty name".into()));
        }
        if !names.insert(entry.name.clone()) {
            return Err(Error::Validation(format!("duplicate package name {:?}", entry.name)));
        }
        let ecosystem = entry
            .ecosystem
            .parse::<Ecosystem>()
            .map_err(|_| Error::Validation(format!("package {:?}: unknown ecosystem {:?}", entry.name, entry.ecosystem)))?;
        let language_tag = entry.language_tag.parse::<LanguageTag>().map_err(|_| {
            Error::Validation(format!("package {:?}: unknown language tag {:?}", entry.name, entry.language_tag))
        })?;
        out.push(PackageDescriptor {
            name: entry.name,
            ecosystem,
            source: entry.source.primary,
            fallback_source: entry.source.fallback,
            build_commands: entry.build_commands,
            dependencies: entry.dependencies,
            extra_flags: entry.extra_flags,
            language_tag,
        });
    }
    for p in &out {
        for dep in &p.dependencies {
            if !names.contains(dep) {
                return Err(Error::Validation(format!(
                    "package {:?} depends on {dep:?}, which is not in the list",
                    p.name
                )));
            }
        }
    }
    Ok(out)
}

/// Read a package list file; relative local paths resolve against the
/// file's directory.
pub fn load_package_list(path: &Path) -> Result<Vec<PackageDescriptor>> {
    let text = std::fs::read_to_string(path).at(path)?;
    let mut packages = parse_package_list(&text)?;
    let base = path.parent().unwrap_or(Path::new("."));
    for p in &mut packages {
        for src in std::iter::once(&mut p.source).chain(p.fallback_source.as_mut()) {
            match src {
                Source::Local { path } if path.is_relative() => *path = base.join(&*path),
                Source::Tarball { location } if !location.contains("://") && Path::new(location).is_relative() => {
                    *location = base.join(&*location).to_string_lossy().into_owned();
                }
                _ => {}
            }
        }
    }
    Ok(packages)
}

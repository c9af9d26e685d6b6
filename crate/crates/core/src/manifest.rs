// Licensed under the Apache License, Version 2.0 (the "License"); you may
// not use this file except in compliance with the License. You may obtain
// a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
// WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
// License for the specific language governing permissions and limitations
// under the License.

//! Flat `key<TAB>value` run manifests.

use std::fmt::Display;
use std::io::{self, BufRead, Write};
use std::time::Duration;

use crate::solve::PhaseTimings;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Ordered key-value record of a run. Keys may repeat (e.g. `warning`).
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Manifest {
    entries: Vec<(String, String)>,
}

/// Tabs and line breaks would break the format; they become spaces.
fn flatten(s: &str) -> String {
    s.chars()
        .map(|c| if matches!(c, '\t' | '\n' | '\r') { ' ' } else { c })
        .collect()
}

impl Manifest {
    /// Starts a manifest with `command` and `version`.
    pub fn new(command: &str) -> Self {
        let mut m = Manifest::default();
        m.push("command", command);
        m.push("version", VERSION);
        m
    }

    pub fn push(&mut self, key: &str, value: impl Display) {
        self.entries.push((flatten(key), flatten(&value.to_string())));
    }

    /// Replaces the first entry with `key`, or appends.
    pub fn set(&mut self, key: &str, value: impl Display) {
        let value = flatten(&value.to_string());
        match self.entries.iter_mut().find(|(k, _)| k == key) {
            Some(e) => e.1 = value,
            None => self.entries.push((flatten(key), value)),
        }
    }

    pub fn push_seconds(&mut self, key: &str, d: Duration) {
        self.push(key, format!("{:.6}", d.as_secs_f64()));
    }

    pub fn push_timings(&mut self, t: &PhaseTimings) {
        self.push_seconds("time_enumeration_s", t.enumeration);
        self.push_seconds("time_rhs_s", t.rhs);
        self.push_seconds("time_solve_s", t.solve);
        self.push_seconds("time_a3_s", t.a3);
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    pub fn get_all<'a>(&'a self, key: &'a str) -> impl Iterator<Item = &'a str> + 'a {
        self.entries
            .iter()
            .filter(move |(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    pub fn entries(&self) -> &[(String, String)] {
        &self.entries
    }

    pub fn write_to<W: Write>(&self, mut w: W) -> io::Result<()> {
        for (k, v) in &self.entries {
            writeln!(w, "{k}\t{v}")?;
        }
        w.flush()
    }

    /// Lines without a tab are kept as keys with an empty value.
    pub fn read_from<R: BufRead>(r: R) -> io::Result<Self> {
        let mut entries = Vec::new();
        for line in r.lines() {
            let line = line?;
            if line.is_empty() {
                continue;
            }
            let (k, v) = line.split_once('\t').unwrap_or((&line, ""));
            entries.push((k.to_string(), v.to_string()));
        }
        Ok(Manifest { entries })
    }
}

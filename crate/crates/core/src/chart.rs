//! Coordinate charts: dimension, coordinate names, sampling domain.

use crate::error::{Error, Result};
use crate::expr::RESERVED_NAMES;

/// A coordinate chart with per-coordinate sampling intervals.
#[derive(Debug, Clone, PartialEq)]
pub struct Chart {
    names: Vec<String>,
    domain: Vec<(f64, f64)>,
}

impl Chart {
    /// Build a chart; names must be distinct identifiers, intervals nondegenerate.
    pub fn new(names: Vec<String>, domain: Vec<(f64, f64)>) -> Result<Self> {
        if names.is_empty() {
            return Err(Error::spec("chart needs at least one coordinate"));
        }
        if names.len() != domain.len() {
            return Err(Error::spec(format!(
                "{} coordinates but {} sampling intervals",
                names.len(),
                domain.len()
            )));
        }
        for name in &names {
            if !is_identifier(name) {
                return Err(Error::spec(format!("`{name}` is not a valid coordinate name")));
            }
            if RESERVED_NAMES.contains(&name.as_str()) {
                return Err(Error::spec(format!("coordinate name `{name}` is reserved")));
            }
            if names.iter().filter(|m| *m == name).count() > 1 {
                return Err(Error::spec(format!("duplicate coordinate name `{name}`")));
            }
        }
        for (i, (lo, hi)) in domain.iter().enumerate() {
            if !(lo < hi) {
                return Err(Error::spec(format!(
                    "degenerate interval [{lo}, {hi}] for coordinate `{}`",
                    names[i]
                )));
            }
        }
        Ok(Chart { names, domain })
    }

    /// Chart with the default sampling box `[-1, 1]^n`.
    pub fn with_default_domain(names: Vec<String>) -> Result<Self> {
        let domain = vec![(-1.0, 1.0); names.len()];
        Chart::new(names, domain)
    }

    pub fn dimension(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn interval(&self, i: usize) -> (f64, f64) {
        self.domain[i]
    }

    /// Replace the sampling interval of one coordinate.
    pub fn set_interval(&mut self, i: usize, lo: f64, hi: f64) -> Result<()> {
        if !(lo < hi) {
            return Err(Error::spec(format!(
                "degenerate interval [{lo}, {hi}] for coordinate `{}`",
                self.names[i]
            )));
        }
        self.domain[i] = (lo, hi);
        Ok(())
    }
}

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

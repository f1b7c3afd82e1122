//! Manifold specification files.
//!
//! Flat sectioned key-value text, chosen for hand-editability. Sections:
//! `[manifold]`, `[metric]`, `[structure]`, `[soliton]`, `[sampling]`.
//! Matrix and array values are bracketed expression lists; expressions
//! follow the grammar of the [`crate::expr`] module. `#` starts a comment.
//!
//! ```text
//! format_version = 1
//!
//! [manifold]
//! name = example2-r3
//! dimension = 3
//! coordinates = x, y, z
//! epsilon = -1
//!
//! [metric]
//! row 0 = [exp(-2*z), 0, 0]
//! row 1 = [0, exp(2*x - 2*z), 0]
//! row 2 = [0, 0, -1]
//!
//! [structure]
//! phi row 0 = [-1, 0, 0]     # mixed components phi^i_j, row i = output
//! phi row 1 = [0, -1, 0]
//! phi row 2 = [0, 0, 0]
//! xi = [0, 0, 1]
//! eta = [0, 0, 1]
//!
//! [soliton]
//! lambda = exp(2*z) - 1      # expression or the keyword `solve`
//! mu = exp(2*z) + 1
//! potential = z              # optional potential function f
//! v = [0, 0, 1]              # optional potential field, defaults to xi
//!
//! [sampling]
//! mode = random              # random | grid
//! count = 50
//! seed = 42
//! range z = [-1, 1]          # default range is [-1, 1] per coordinate
//! ```

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::path::Path;

use crate::chart::Chart;
use crate::error::{Error, Result};
use crate::expr::{parse, Expr};
use crate::sampling::{Sampling, SamplingMode};
use crate::structures::{Epsilon, ParacontactStructure};
use crate::tensor::MetricField;

/// Declared soliton function: closed form or "recover by fitting".
#[derive(Debug, Clone, PartialEq)]
pub enum SolveOrExpr {
    Solve,
    Given(Expr),
}

/// The soliton block of a spec file.
#[derive(Debug, Clone, PartialEq)]
pub struct SolitonSpec {
    pub lambda: SolveOrExpr,
    pub mu: SolveOrExpr,
    /// Optional potential function `f` for the gradient suites.
    pub potential: Option<Expr>,
    /// Optional potential vector field; defaults to the structure's `xi`.
    pub v_field: Option<Vec<Expr>>,
}

/// A fully parsed manifold specification.
#[derive(Debug, Clone, PartialEq)]
pub struct ManifoldSpec {
    pub name: String,
    pub chart: Chart,
    pub epsilon: Option<Epsilon>,
    pub metric: MetricField,
    pub structure: Option<ParacontactStructure>,
    pub soliton: Option<SolitonSpec>,
    pub sampling: Sampling,
}

impl ManifoldSpec {
    pub fn dimension(&self) -> usize {
        self.chart.dimension()
    }

    /// The potential vector field for soliton suites: the declared `v`,
    /// else the structure's `xi`.
    pub fn potential_field(&self) -> Option<&[Expr]> {
        if let Some(sol) = &self.soliton {
            if let Some(v) = &sol.v_field {
                return Some(v);
            }
        }
        self.structure.as_ref().map(|s| s.xi.as_slice())
    }
}

/// Read and parse a spec file from disk.
pub fn load_manifold_spec(path: &Path) -> Result<ManifoldSpec> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::File {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    parse_manifold_spec(&text)
}

struct RawEntry {
    section: String,
    key: String,
    value: String,
    line: usize,
}

fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(i) => &line[..i],
        None => line,
    }
}

fn raw_entries(text: &str) -> Result<Vec<RawEntry>> {
    let mut entries = Vec::new();
    let mut section = String::new();
    for (idx, raw_line) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = strip_comment(raw_line).trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix('[') {
            let name = rest.strip_suffix(']').ok_or_else(|| {
                Error::spec_at("malformed section header", line_no)
            })?;
            section = name.trim().to_string();
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            Error::spec_at(format!("expected `key = value`, got `{line}`"), line_no)
        })?;
        entries.push(RawEntry {
            section: section.clone(),
            key: key.trim().to_string(),
            value: value.trim().to_string(),
            line: line_no,
        });
    }
    Ok(entries)
}

fn find<'a>(entries: &'a [RawEntry], section: &str, key: &str) -> Option<&'a RawEntry> {
    entries
        .iter()
        .find(|e| e.section == section && e.key == key)
}

fn require<'a>(entries: &'a [RawEntry], section: &str, key: &str) -> Result<&'a RawEntry> {
    find(entries, section, key)
        .ok_or_else(|| Error::spec(format!("missing `{key}` in [{section}]")))
}

fn has_section(entries: &[RawEntry], section: &str) -> bool {
    entries.iter().any(|e| e.section == section)
}

/// Split a bracketed list `[a, b, c]` at top-level commas.
fn split_list(value: &str, line: usize) -> Result<Vec<String>> {
    let inner = value
        .strip_prefix('[')
        .and_then(|v| v.strip_suffix(']'))
        .ok_or_else(|| Error::spec_at(format!("expected a bracketed list, got `{value}`"), line))?;
    let mut items = Vec::new();
    let mut depth = 0usize;
    let mut current = String::new();
    for c in inner.chars() {
        match c {
            '[' | '(' => {
                depth += 1;
                current.push(c);
            }
            ']' | ')' => {
                depth = depth.checked_sub(1).ok_or_else(|| {
                    Error::spec_at("unbalanced brackets in list", line)
                })?;
                current.push(c);
            }
            ',' if depth == 0 => {
                items.push(current.trim().to_string());
                current.clear();
            }
            _ => current.push(c),
        }
    }
    if depth != 0 {
        return Err(Error::spec_at("unbalanced brackets in list", line));
    }
    if !current.trim().is_empty() || !items.is_empty() {
        items.push(current.trim().to_string());
    }
    Ok(items)
}

fn parse_expr_at(source: &str, chart: &Chart, line: usize) -> Result<Expr> {
    parse(source, chart).map_err(|e| Error::spec_at(format!("in `{source}`: {e}"), line))
}

fn parse_vector(entry: &RawEntry, chart: &Chart, n: usize) -> Result<Vec<Expr>> {
    let items = split_list(&entry.value, entry.line)?;
    if items.len() != n {
        return Err(Error::spec_at(
            format!("`{}` has {} entries, dimension is {n}", entry.key, items.len()),
            entry.line,
        ));
    }
    items
        .iter()
        .map(|s| parse_expr_at(s, chart, entry.line))
        .collect()
}

fn parse_matrix_rows(
    entries: &[RawEntry],
    section: &str,
    prefix: &str,
    chart: &Chart,
    n: usize,
) -> Result<Vec<Vec<Expr>>> {
    let mut rows = Vec::with_capacity(n);
    for i in 0..n {
        let key = if prefix.is_empty() {
            format!("row {i}")
        } else {
            format!("{prefix} row {i}")
        };
        let entry = require(entries, section, &key)?;
        rows.push(parse_vector(entry, chart, n)?);
    }
    Ok(rows)
}

/// Parse a complete spec from text.
pub fn parse_manifold_spec(text: &str) -> Result<ManifoldSpec> {
    let entries = raw_entries(text)?;

    let version = require(&entries, "", "format_version")?;
    if version.value != "1" {
        return Err(Error::spec_at(
            format!("unsupported format_version `{}`", version.value),
            version.line,
        ));
    }

    let name = require(&entries, "manifold", "name")?.value.clone();
    let dim_entry = require(&entries, "manifold", "dimension")?;
    let n: usize = dim_entry.value.parse().map_err(|_| {
        Error::spec_at(format!("bad dimension `{}`", dim_entry.value), dim_entry.line)
    })?;
    let coords_entry = require(&entries, "manifold", "coordinates")?;
    let names: Vec<String> = coords_entry
        .value
        .split(',')
        .map(|s| s.trim().to_string())
        .filter(|s| !s.is_empty())
        .collect();
    if names.len() != n {
        return Err(Error::spec_at(
            format!("declared dimension {n} but {} coordinates", names.len()),
            coords_entry.line,
        ));
    }

    // sampling block (defaults allowed)
    let mut sampling = Sampling::default();
    if let Some(e) = find(&entries, "sampling", "mode") {
        sampling.mode = SamplingMode::parse(&e.value)
            .ok_or_else(|| Error::spec_at(format!("unknown sampling mode `{}`", e.value), e.line))?;
    }
    if let Some(e) = find(&entries, "sampling", "count") {
        sampling.count = e
            .value
            .parse()
            .map_err(|_| Error::spec_at(format!("bad count `{}`", e.value), e.line))?;
    }
    if let Some(e) = find(&entries, "sampling", "seed") {
        sampling.seed = e
            .value
            .parse()
            .map_err(|_| Error::spec_at(format!("bad seed `{}`", e.value), e.line))?;
    }

    let mut chart = Chart::with_default_domain(names.clone())?;
    let known_keys: BTreeSet<&str> = ["mode", "count", "seed"].into();
    for e in entries.iter().filter(|e| e.section == "sampling") {
        if known_keys.contains(e.key.as_str()) {
            continue;
        }
        let coord = e.key.strip_prefix("range ").ok_or_else(|| {
            Error::spec_at(format!("unknown sampling key `{}`", e.key), e.line)
        })?;
        let i = chart.index_of(coord.trim()).ok_or_else(|| {
            Error::spec_at(format!("range for undeclared coordinate `{coord}`"), e.line)
        })?;
        let bounds = split_list(&e.value, e.line)?;
        if bounds.len() != 2 {
            return Err(Error::spec_at("range needs exactly [lo, hi]", e.line));
        }
        let lo: f64 = bounds[0]
            .parse()
            .map_err(|_| Error::spec_at(format!("bad range bound `{}`", bounds[0]), e.line))?;
        let hi: f64 = bounds[1]
            .parse()
            .map_err(|_| Error::spec_at(format!("bad range bound `{}`", bounds[1]), e.line))?;
        chart.set_interval(i, lo, hi)?;
    }

    if !has_section(&entries, "metric") {
        return Err(Error::spec("missing [metric] section"));
    }
    let metric = MetricField::from_rows(parse_matrix_rows(&entries, "metric", "", &chart, n)?)?;

    let epsilon = match find(&entries, "manifold", "epsilon") {
        Some(e) => {
            let v: i8 = e
                .value
                .parse()
                .map_err(|_| Error::spec_at(format!("bad epsilon `{}`", e.value), e.line))?;
            Some(Epsilon::from_i8(v)?)
        }
        None => None,
    };

    let structure = if has_section(&entries, "structure") {
        if epsilon.is_none() {
            return Err(Error::spec(
                "[structure] requires `epsilon` in [manifold]",
            ));
        }
        let phi = parse_matrix_rows(&entries, "structure", "phi", &chart, n)?;
        let xi = parse_vector(require(&entries, "structure", "xi")?, &chart, n)?;
        let eta = parse_vector(require(&entries, "structure", "eta")?, &chart, n)?;
        Some(ParacontactStructure { phi, xi, eta, epsilon: epsilon.unwrap() })
    } else {
        None
    };

    let soliton = if has_section(&entries, "soliton") {
        let parse_solve_or = |key: &str| -> Result<SolveOrExpr> {
            let e = require(&entries, "soliton", key)?;
            if e.value == "solve" {
                Ok(SolveOrExpr::Solve)
            } else {
                Ok(SolveOrExpr::Given(parse_expr_at(&e.value, &chart, e.line)?))
            }
        };
        let lambda = parse_solve_or("lambda")?;
        let mu = parse_solve_or("mu")?;
        let potential = match find(&entries, "soliton", "potential") {
            Some(e) => Some(parse_expr_at(&e.value, &chart, e.line)?),
            None => None,
        };
        let v_field = match find(&entries, "soliton", "v") {
            Some(e) => Some(parse_vector(e, &chart, n)?),
            None => None,
        };
        Some(SolitonSpec { lambda, mu, potential, v_field })
    } else {
        None
    };

    Ok(ManifoldSpec { name, chart, epsilon, metric, structure, soliton, sampling })
}

/// Canonical text rendering; `parse_manifold_spec` of the output yields an
/// equal spec.
pub fn serialize_manifold_spec(spec: &ManifoldSpec) -> String {
    let chart = &spec.chart;
    let n = spec.dimension();
    let mut out = String::new();
    out.push_str("format_version = 1\n\n[manifold]\n");
    let _ = writeln!(out, "name = {}", spec.name);
    let _ = writeln!(out, "dimension = {n}");
    let _ = writeln!(out, "coordinates = {}", chart.names().join(", "));
    if let Some(eps) = spec.epsilon {
        let _ = writeln!(out, "epsilon = {}", eps.as_i8());
    }
    out.push_str("\n[metric]\n");
    for i in 0..n {
        let row: Vec<String> = (0..n)
            .map(|j| spec.metric.entry(i, j).to_text(chart))
            .collect();
        let _ = writeln!(out, "row {i} = [{}]", row.join(", "));
    }
    if let Some(s) = &spec.structure {
        out.push_str("\n[structure]\n");
        for i in 0..n {
            let row: Vec<String> = s.phi[i].iter().map(|e| e.to_text(chart)).collect();
            let _ = writeln!(out, "phi row {i} = [{}]", row.join(", "));
        }
        let xi: Vec<String> = s.xi.iter().map(|e| e.to_text(chart)).collect();
        let _ = writeln!(out, "xi = [{}]", xi.join(", "));
        let eta: Vec<String> = s.eta.iter().map(|e| e.to_text(chart)).collect();
        let _ = writeln!(out, "eta = [{}]", eta.join(", "));
    }
    if let Some(sol) = &spec.soliton {
        out.push_str("\n[soliton]\n");
        let fmt = |v: &SolveOrExpr| match v {
            SolveOrExpr::Solve => "solve".to_string(),
            SolveOrExpr::Given(e) => e.to_text(chart),
        };
        let _ = writeln!(out, "lambda = {}", fmt(&sol.lambda));
        let _ = writeln!(out, "mu = {}", fmt(&sol.mu));
        if let Some(f) = &sol.potential {
            let _ = writeln!(out, "potential = {}", f.to_text(chart));
        }
        if let Some(v) = &sol.v_field {
            let vs: Vec<String> = v.iter().map(|e| e.to_text(chart)).collect();
            let _ = writeln!(out, "v = [{}]", vs.join(", "));
        }
    }
    out.push_str("\n[sampling]\n");
    let _ = writeln!(out, "mode = {}", spec.sampling.mode.label());
    let _ = writeln!(out, "count = {}", spec.sampling.count);
    let _ = writeln!(out, "seed = {}", spec.sampling.seed);
    for i in 0..n {
        let (lo, hi) = chart.interval(i);
        let _ = writeln!(out, "range {} = [{lo}, {hi}]", chart.name(i));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINI: &str = "\
format_version = 1
[manifold]
name = mini
dimension = 2
coordinates = x, y
[metric]
row 0 = [1, 0]
row 1 = [0, x^2 + 1]
[sampling]
mode = grid
count = 9
seed = 7
range y = [0, 2]
";

    #[test]
    fn parses_minimal_spec() {
        let spec = parse_manifold_spec(MINI).unwrap();
        assert_eq!(spec.name, "mini");
        assert_eq!(spec.dimension(), 2);
        assert_eq!(spec.sampling.mode, SamplingMode::Grid);
        assert_eq!(spec.sampling.count, 9);
        assert_eq!(spec.sampling.seed, 7);
        assert_eq!(spec.chart.interval(0), (-1.0, 1.0));
        assert_eq!(spec.chart.interval(1), (0.0, 2.0));
        assert!(spec.structure.is_none());
        assert!(spec.soliton.is_none());
    }

    #[test]
    fn round_trip_is_identity_on_parsed_specs() {
        let spec = parse_manifold_spec(MINI).unwrap();
        let text = serialize_manifold_spec(&spec);
        let again = parse_manifold_spec(&text).unwrap();
        assert_eq!(spec, again);
    }

    #[test]
    fn dimension_mismatch_is_a_spec_error() {
        let bad = "\
format_version = 1
[manifold]
name = bad
dimension = 3
coordinates = x, y, z
[metric]
row 0 = [1, 0]
row 1 = [0, 1]
row 2 = [0, 0]
";
        match parse_manifold_spec(bad) {
            Err(Error::Spec { message, .. }) => {
                assert!(message.contains("entries"), "{message}");
            }
            other => panic!("expected SpecError, got {other:?}"),
        }
    }

    #[test]
    fn missing_metric_rejected() {
        let bad = "\
format_version = 1
[manifold]
name = bad
dimension = 1
coordinates = t
";
        assert!(matches!(parse_manifold_spec(bad), Err(Error::Spec { .. })));
    }

    #[test]
    fn structure_without_epsilon_rejected() {
        let bad = "\
format_version = 1
[manifold]
name = bad
dimension = 1
coordinates = t
[metric]
row 0 = [1]
[structure]
phi row 0 = [0]
xi = [1]
eta = [1]
";
        assert!(matches!(parse_manifold_spec(bad), Err(Error::Spec { .. })));
    }

    #[test]
    fn expression_errors_carry_line_numbers() {
        let bad = "\
format_version = 1
[manifold]
name = bad
dimension = 1
coordinates = t
[metric]
row 0 = [exp(2*w)]
";
        match parse_manifold_spec(bad) {
            Err(Error::Spec { message, line }) => {
                assert_eq!(line, Some(7));
                assert!(message.contains('w'), "{message}");
            }
            other => panic!("expected SpecError, got {other:?}"),
        }
    }

    #[test]
    fn asymmetric_metric_rejected() {
        let bad = "\
format_version = 1
[manifold]
name = bad
dimension = 2
coordinates = x, y
[metric]
row 0 = [1, x]
row 1 = [y, 1]
";
        assert!(matches!(parse_manifold_spec(bad), Err(Error::Spec { .. })));
    }
}

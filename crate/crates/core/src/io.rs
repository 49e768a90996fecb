//! Text file formats for complexes and group actions.
//!
//! A complex file lists vertex labels (order significant) and maximal
//! simplices by label. An action file references a complex file and gives
//! the group by element names, multiplication table, and identity, plus one
//! vertex permutation per element. Lines starting with `#` are comments.

use crate::complex::{ComplexError, SimplicialComplex};
use crate::gaction::{ActionError, FiniteGroup, SimplicialAction};
use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum IoError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error(transparent)]
    Action(#[from] ActionError),
    #[error("{0}")]
    File(#[from] std::io::Error),
}

fn parse_error(line: usize, message: impl Into<String>) -> IoError {
    IoError::Parse { line, message: message.into() }
}

/// Lines with content: 1-based line number and trimmed text, with blank
/// lines and `#` comments removed.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

/// Parses a complex file: a `vertices:` line followed by a
/// `maximal_simplices:` section with one simplex per line.
pub fn parse_complex(text: &str) -> Result<SimplicialComplex, IoError> {
    let mut labels: Option<(usize, Vec<String>)> = None;
    let mut in_simplices = false;
    let mut maximal: Vec<Vec<usize>> = Vec::new();
    let mut index: BTreeMap<String, usize> = BTreeMap::new();
    for (line, content) in content_lines(text) {
        if let Some(rest) = content.strip_prefix("vertices:") {
            if labels.is_some() {
                return Err(parse_error(line, "repeated vertices line"));
            }
            let names: Vec<String> = rest.split_whitespace().map(str::to_string).collect();
            for (i, name) in names.iter().enumerate() {
                if index.insert(name.clone(), i).is_some() {
                    return Err(parse_error(line, format!("duplicate vertex label {name}")));
                }
            }
            labels = Some((line, names));
        } else if content == "maximal_simplices:" {
            if labels.is_none() {
                return Err(parse_error(line, "maximal_simplices before vertices"));
            }
            in_simplices = true;
        } else if in_simplices {
            let mut simplex = Vec::new();
            for name in content.split_whitespace() {
                match index.get(name) {
                    Some(&v) => simplex.push(v),
                    None => {
                        return Err(parse_error(line, format!("unknown vertex label {name}")))
                    }
                }
            }
            let mut sorted = simplex.clone();
            sorted.sort_unstable();
            sorted.dedup();
            if sorted.len() != simplex.len() {
                return Err(parse_error(line, "repeated vertex within one simplex"));
            }
            maximal.push(simplex);
        } else {
            return Err(parse_error(line, format!("unexpected content {content}")));
        }
    }
    let Some((_, names)) = labels else {
        return Err(parse_error(0, "missing vertices line"));
    };
    Ok(SimplicialComplex::from_maximal(names, &maximal)?)
}

/// Canonical text form: vertices in stored order, then the maximal
/// simplices by dimension. parse(serialize(c)) reproduces c, and serialize
/// is idempotent across the round trip.
pub fn serialize_complex(c: &SimplicialComplex) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "vertices: {}", c.labels().join(" "));
    let _ = writeln!(out, "maximal_simplices:");
    for simplex in c.maximal_simplices() {
        let names: Vec<&str> = simplex.iter().map(|&v| c.label(v)).collect();
        let _ = writeln!(out, "  {}", names.join(" "));
    }
    out
}

/// Unresolved contents of an action file.
#[derive(Debug, Clone)]
pub struct ActionFile {
    pub complex_ref: String,
    pub group_names: Vec<String>,
    pub identity: String,
    pub table: Vec<Vec<String>>,
    pub vertex_maps: Vec<(String, Vec<String>)>,
}

enum ActionSection {
    Top,
    Table,
    VertexMaps,
}

/// Parses an action file into its unresolved form: `complex:`, `group:`,
/// `identity:` lines and `table:` / `vertex_maps:` sections.
pub fn parse_action_text(text: &str) -> Result<ActionFile, IoError> {
    let mut complex_ref: Option<String> = None;
    let mut group_names: Option<Vec<String>> = None;
    let mut identity: Option<String> = None;
    let mut table: Vec<Vec<String>> = Vec::new();
    let mut vertex_maps: Vec<(String, Vec<String>)> = Vec::new();
    let mut section = ActionSection::Top;
    for (line, content) in content_lines(text) {
        if let Some(rest) = content.strip_prefix("complex:") {
            complex_ref = Some(rest.trim().to_string());
            section = ActionSection::Top;
        } else if let Some(rest) = content.strip_prefix("group:") {
            group_names = Some(rest.split_whitespace().map(str::to_string).collect());
            section = ActionSection::Top;
        } else if let Some(rest) = content.strip_prefix("identity:") {
            identity = Some(rest.trim().to_string());
            section = ActionSection::Top;
        } else if content == "table:" {
            section = ActionSection::Table;
        } else if content == "vertex_maps:" {
            section = ActionSection::VertexMaps;
        } else {
            match section {
                ActionSection::Top => {
                    return Err(parse_error(line, format!("unexpected content {content}")))
                }
                ActionSection::Table => {
                    table.push(content.split_whitespace().map(str::to_string).collect());
                }
                ActionSection::VertexMaps => {
                    let Some((name, rest)) = content.split_once(':') else {
                        return Err(parse_error(
                            line,
                            "vertex map lines have the form `element: labels...`",
                        ));
                    };
                    vertex_maps.push((
                        name.trim().to_string(),
                        rest.split_whitespace().map(str::to_string).collect(),
                    ));
                }
            }
        }
    }
    let complex_ref =
        complex_ref.ok_or_else(|| parse_error(0, "missing complex reference"))?;
    let group_names = group_names.ok_or_else(|| parse_error(0, "missing group line"))?;
    let identity = identity.ok_or_else(|| parse_error(0, "missing identity line"))?;
    Ok(ActionFile { complex_ref, group_names, identity, table, vertex_maps })
}

/// Resolves a parsed action file against its complex: validates the group
/// table, the identity convention, and that every vertex map is a
/// permutation of the vertex labels.
pub fn resolve_action(
    file: &ActionFile,
    complex: SimplicialComplex,
) -> Result<SimplicialAction, IoError> {
    let n = file.group_names.len();
    let mut name_index: BTreeMap<&str, usize> = BTreeMap::new();
    for (i, name) in file.group_names.iter().enumerate() {
        if name_index.insert(name, i).is_some() {
            return Err(parse_error(0, format!("duplicate group element name {name}")));
        }
    }
    if !name_index.contains_key(file.identity.as_str()) {
        return Err(parse_error(
            0,
            format!("identity {} is not a listed group element", file.identity),
        ));
    }
    if file.group_names[0] != file.identity {
        return Err(parse_error(
            0,
            format!("the identity {} must be listed first in group:", file.identity),
        ));
    }
    if file.table.len() != n {
        return Err(parse_error(0, format!("table has {} rows, expected {n}", file.table.len())));
    }
    let mut table = Vec::with_capacity(n);
    for row in &file.table {
        if row.len() != n {
            return Err(parse_error(0, format!("table row has {} entries, expected {n}", row.len())));
        }
        let mut indices = Vec::with_capacity(n);
        for name in row {
            match name_index.get(name.as_str()) {
                Some(&i) => indices.push(i),
                None => {
                    return Err(parse_error(0, format!("unknown group element {name} in table")))
                }
            }
        }
        table.push(indices);
    }
    let group = FiniteGroup::new(file.group_names.clone(), table)?;
    let mut vertex_index: BTreeMap<&str, usize> = BTreeMap::new();
    for (v, label) in complex.labels().iter().enumerate() {
        vertex_index.insert(label.as_str(), v);
    }
    let mut maps: Vec<Option<Vec<usize>>> = vec![None; n];
    for (name, labels) in &file.vertex_maps {
        let Some(&g) = name_index.get(name.as_str()) else {
            return Err(parse_error(0, format!("vertex map for unknown element {name}")));
        };
        if maps[g].is_some() {
            return Err(parse_error(0, format!("repeated vertex map for element {name}")));
        }
        if labels.len() != complex.vertex_count() {
            return Err(parse_error(
                0,
                format!(
                    "vertex map for {name} lists {} labels, expected {}",
                    labels.len(),
                    complex.vertex_count()
                ),
            ));
        }
        let mut seen = vec![false; complex.vertex_count()];
        let mut map = Vec::with_capacity(labels.len());
        for label in labels {
            let Some(&v) = vertex_index.get(label.as_str()) else {
                return Err(parse_error(
                    0,
                    format!("vertex map for {name} uses unknown vertex label {label}"),
                ));
            };
            if seen[v] {
                return Err(parse_error(
                    0,
                    format!("vertex map for {name} is not a permutation: {label} repeats"),
                ));
            }
            seen[v] = true;
            map.push(v);
        }
        maps[g] = Some(map);
    }
    let mut vertex_maps = Vec::with_capacity(n);
    for (g, map) in maps.into_iter().enumerate() {
        match map {
            Some(m) => vertex_maps.push(m),
            None => {
                return Err(parse_error(
                    0,
                    format!("missing vertex map for element {}", file.group_names[g]),
                ))
            }
        }
    }
    Ok(SimplicialAction::new(complex, group, vertex_maps)?)
}

/// Parses an action file whose complex is already in hand.
pub fn parse_action(text: &str, complex: SimplicialComplex) -> Result<SimplicialAction, IoError> {
    let file = parse_action_text(text)?;
    resolve_action(&file, complex)
}

/// Canonical text form of an action, with the given complex reference.
pub fn serialize_action(a: &SimplicialAction, complex_ref: &str) -> String {
    let group = a.group();
    let mut out = String::new();
    let _ = writeln!(out, "complex: {complex_ref}");
    let _ = writeln!(out, "group: {}", group.names().join(" "));
    let _ = writeln!(out, "identity: {}", group.name(0));
    let _ = writeln!(out, "table:");
    for g in 0..group.order() {
        let row: Vec<&str> = (0..group.order()).map(|h| group.name(group.mul(g, h))).collect();
        let _ = writeln!(out, "  {}", row.join(" "));
    }
    let _ = writeln!(out, "vertex_maps:");
    for g in 0..group.order() {
        let images: Vec<&str> = (0..a.complex().vertex_count())
            .map(|v| a.complex().label(a.apply_vertex(g, v)))
            .collect();
        let _ = writeln!(out, "  {}: {}", group.name(g), images.join(" "));
    }
    out
}

pub fn read_complex_file(path: &Path) -> Result<SimplicialComplex, IoError> {
    parse_complex(&std::fs::read_to_string(path)?)
}

/// Reads an action file, loading its complex reference relative to the
/// action file's directory.
pub fn read_action_file(path: &Path) -> Result<SimplicialAction, IoError> {
    let text = std::fs::read_to_string(path)?;
    let file = parse_action_text(&text)?;
    let complex_path = match path.parent() {
        Some(dir) => dir.join(&file.complex_ref),
        None => Path::new(&file.complex_ref).to_path_buf(),
    };
    let complex = read_complex_file(&complex_path)?;
    resolve_action(&file, complex)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models;

    #[test]
    fn complex_round_trip_is_exact() {
        for complex in [
            models::triangle_circle(),
            models::hexagon(),
            models::octahedron(),
            models::rp2_six(),
            models::hexagon_torus(),
        ] {
            let text = serialize_complex(&complex);
            let parsed = parse_complex(&text).unwrap();
            assert_eq!(parsed.labels(), complex.labels());
            for d in 0..=complex.dim() {
                assert_eq!(parsed.simplices(d), complex.simplices(d));
            }
            let text2 = serialize_complex(&parsed);
            assert_eq!(text, text2);
            let reparsed = parse_complex(&text2).unwrap();
            assert_eq!(reparsed.labels(), parsed.labels());
        }
    }

    #[test]
    fn complex_parser_reads_comments_and_blank_lines() {
        let text = "# a hollow triangle\n\nvertices: a b c\n\nmaximal_simplices:\n  # edges\n  a b\n  b c\n  a c\n";
        let c = parse_complex(text).unwrap();
        assert_eq!(c.vertex_count(), 3);
        assert_eq!(c.dim(), 1);
        assert_eq!(c.simplex_count(1), 3);
        assert_eq!(c.euler_characteristic(), 0);
    }

    #[test]
    fn complex_parser_rejects_malformed_input() {
        assert!(matches!(
            parse_complex("vertices: a b\nmaximal_simplices:\n  a z\n"),
            Err(IoError::Parse { line: 3, .. })
        ));
        assert!(matches!(
            parse_complex("vertices: a a\n"),
            Err(IoError::Parse { line: 1, .. })
        ));
        assert!(matches!(
            parse_complex("maximal_simplices:\n  a b\n"),
            Err(IoError::Parse { line: 1, .. })
        ));
        assert!(matches!(
            parse_complex("vertices: a b c\nmaximal_simplices:\n  a a b\n"),
            Err(IoError::Parse { line: 3, .. })
        ));
        assert!(parse_complex("").is_err());
    }

    #[test]
    fn action_round_trip_preserves_the_action() {
        for action in [
            models::hexagon_reflection(),
            models::hexagon_rotation3(),
            models::octahedron_antipodal(),
            models::suspension_rotation3(),
        ] {
            let text = serialize_action(&action, "model.complex");
            let parsed = parse_action(&text, action.complex().clone()).unwrap();
            assert_eq!(parsed.group().order(), action.group().order());
            for g in 0..action.group().order() {
                for v in 0..action.complex().vertex_count() {
                    assert_eq!(parsed.apply_vertex(g, v), action.apply_vertex(g, v));
                }
            }
            assert_eq!(serialize_action(&parsed, "model.complex"), text);
        }
    }

    #[test]
    fn action_parser_rejects_non_permutations() {
        let complex = models::triangle_circle();
        let header = "complex: t.complex\ngroup: e g\nidentity: e\ntable:\n  e g\n  g e\nvertex_maps:\n  e: a b c\n";
        let repeated = format!("{header}  g: a a c\n");
        let err = parse_action(&repeated, complex.clone()).unwrap_err();
        assert!(err.to_string().contains("not a permutation"));
        let unknown = format!("{header}  g: a b z\n");
        let err = parse_action(&unknown, complex.clone()).unwrap_err();
        assert!(err.to_string().contains("unknown vertex label"));
        let short = format!("{header}  g: a b\n");
        let err = parse_action(&short, complex.clone()).unwrap_err();
        assert!(err.to_string().contains("expected 3"));
        let missing = header.to_string();
        let err = parse_action(&missing, complex).unwrap_err();
        assert!(err.to_string().contains("missing vertex map"));
    }

    #[test]
    fn action_parser_enforces_group_shape() {
        let complex = models::triangle_circle();
        let bad_identity = "complex: t.complex\ngroup: g e\nidentity: e\ntable:\n  e g\n  g e\nvertex_maps:\n  e: a b c\n  g: a c b\n";
        assert!(parse_action(bad_identity, complex.clone())
            .unwrap_err()
            .to_string()
            .contains("listed first"));
        let bad_table = "complex: t.complex\ngroup: e g\nidentity: e\ntable:\n  e g\n  g g\nvertex_maps:\n  e: a b c\n  g: a c b\n";
        assert!(matches!(
            parse_action(bad_table, complex.clone()),
            Err(IoError::Action(ActionError::BadGroup(_)))
        ));
        let not_simplicial = "complex: t.complex\ngroup: e g\nidentity: e\ntable:\n  e g\n  g e\nvertex_maps:\n  e: a b c\n  g: b a c\n";
        // Swapping two vertices of a triangle boundary is simplicial, so
        // this one resolves; a sanity check that valid input passes.
        assert!(parse_action(not_simplicial, complex).is_ok());
    }

    #[test]
    fn action_file_reports_identity_not_homomorphism() {
        let complex = models::triangle_circle();
        let broken = "complex: t.complex\ngroup: e g\nidentity: e\ntable:\n  e g\n  g e\nvertex_maps:\n  e: b a c\n  g: a b c\n";
        assert!(matches!(
            parse_action(broken, complex),
            Err(IoError::Action(_))
        ));
    }

    #[test]
    fn files_round_trip_through_disk() {
        let dir = std::env::temp_dir().join(format!("efftc-io-test-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let complex_path = dir.join("hexagon.complex");
        let action_path = dir.join("reflection.action");
        let action = models::hexagon_reflection();
        std::fs::write(&complex_path, serialize_complex(action.complex())).unwrap();
        std::fs::write(&action_path, serialize_action(&action, "hexagon.complex")).unwrap();
        let complex = read_complex_file(&complex_path).unwrap();
        assert_eq!(complex.labels(), action.complex().labels());
        let loaded = read_action_file(&action_path).unwrap();
        assert_eq!(loaded.group().order(), 2);
        assert_eq!(loaded.apply_vertex(1, 1), action.apply_vertex(1, 1));
        std::fs::remove_dir_all(&dir).unwrap();
    }
}

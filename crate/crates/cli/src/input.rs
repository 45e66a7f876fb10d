//! The `[variety]` / `[group]` / `[task]` key-value input format.
//!
//! See `docs/input-format.md` for the grammar.

use std::path::Path;

use nashforge_core::algebra::{parse_poly, Field, MonomialOrder, Poly, Ring, Scalar};
use nashforge_core::{Error, Ideal, Result};
use num_bigint::BigInt;
use sha2::{Digest, Sha256};

/// Group block: matrices given as rows separated by `;`, entries by `,`.
#[derive(Clone, Debug)]
pub struct GroupInput {
    pub elements: Vec<Vec<Vec<Scalar>>>,
    /// `true` when the list should be closed under products first.
    pub generators: bool,
}

#[derive(Clone, Debug, Default)]
pub struct TaskInput {
    pub kind: Option<String>,
    pub order: Option<u32>,
}

#[derive(Clone, Debug)]
pub struct VarietyInput {
    pub characteristic: u64,
    pub variables: Vec<String>,
    /// Generators as written, before translation.
    pub generators: Vec<Poly>,
    pub point: Option<Vec<Scalar>>,
    pub group: Option<GroupInput>,
    pub task: TaskInput,
    /// The ideal with the distinguished point moved to the origin.
    pub ideal: Ideal,
}

impl VarietyInput {
    pub fn ring(&self) -> &Ring {
        self.ideal.ring()
    }

    /// Normalized rendering of everything that affects a computation.
    pub fn canonical_text(&self) -> String {
        let field = self.ring().field();
        let mut out = String::new();
        out.push_str("[variety]\n");
        out.push_str(&format!("characteristic = {}\n", self.characteristic));
        out.push_str(&format!("variables = {}\n", self.variables.join(", ")));
        let gens: Vec<String> = self.generators.iter().map(|g| g.to_string()).collect();
        out.push_str(&format!("ideal = {}\n", gens.join(", ")));
        if let Some(p) = &self.point {
            let coords: Vec<String> = p.iter().map(|c| field.format(c)).collect();
            out.push_str(&format!("point = {}\n", coords.join(", ")));
        }
        if let Some(g) = &self.group {
            out.push_str("[group]\n");
            out.push_str(&format!(
                "kind = {}\n",
                if g.generators { "generators" } else { "elements" }
            ));
            for m in &g.elements {
                out.push_str(&format!("element = {}\n", format_matrix(field, m)));
            }
        }
        if self.task.kind.is_some() || self.task.order.is_some() {
            out.push_str("[task]\n");
            if let Some(k) = &self.task.kind {
                out.push_str(&format!("kind = {k}\n"));
            }
            if let Some(n) = self.task.order {
                out.push_str(&format!("order = {n}\n"));
            }
        }
        out
    }

    pub fn input_hash(&self) -> String {
        hex::encode(Sha256::digest(self.canonical_text().as_bytes()))
    }
}

pub fn format_matrix(field: &Field, m: &[Vec<Scalar>]) -> String {
    m.iter()
        .map(|r| r.iter().map(|c| field.format(c)).collect::<Vec<_>>().join(","))
        .collect::<Vec<_>>()
        .join("; ")
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Section {
    None,
    Variety,
    Group,
    Task,
}

struct Entry {
    line: usize,
    /// 1-based column where the value starts.
    col: usize,
    value: String,
}

fn shift(e: Error, line: usize, col: usize) -> Error {
    match e {
        Error::Parse { column, message, .. } => Error::parse(line, col + column - 1, message),
        other => other,
    }
}

pub fn parse_variety_file(path: &Path) -> Result<VarietyInput> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::InvalidInput(format!("cannot read {}: {e}", path.display())))?;
    parse_variety_str(&text)
}

pub fn parse_variety_str(text: &str) -> Result<VarietyInput> {
    let mut section = Section::None;
    let mut seen = Vec::new();
    let mut characteristic: Option<Entry> = None;
    let mut variables: Option<Entry> = None;
    let mut ideal: Vec<Entry> = Vec::new();
    let mut point: Option<Entry> = None;
    let mut elements: Vec<Entry> = Vec::new();
    let mut group_kind: Option<Entry> = None;
    let mut task_kind: Option<Entry> = None;
    let mut order: Option<Entry> = None;

    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let content = raw.split('#').next().unwrap_or("");
        let trimmed = content.trim();
        if trimmed.is_empty() {
            continue;
        }
        let indent = content.len() - content.trim_start().len();
        if let Some(rest) = trimmed.strip_prefix('[') {
            let name = rest
                .strip_suffix(']')
                .ok_or_else(|| Error::parse(line, indent + trimmed.len() + 1, "expected ']'"))?;
            section = match name.trim() {
                "variety" => Section::Variety,
                "group" => Section::Group,
                "task" => Section::Task,
                other => return Err(Error::parse(line, indent + 2, format!("unknown section [{other}]"))),
            };
            if seen.contains(&section) {
                return Err(Error::parse(
                    line,
                    indent + 1,
                    format!("section [{}] appears twice", name.trim()),
                ));
            }
            seen.push(section);
            continue;
        }
        let eq = content
            .find('=')
            .ok_or_else(|| Error::parse(line, indent + 1, "expected 'key = value'"))?;
        let key = content[..eq].trim();
        let after = &content[eq + 1..];
        let value = after.trim();
        let col = eq + 2 + (after.len() - after.trim_start().len());
        let entry = Entry {
            line,
            col,
            value: value.to_string(),
        };
        let slot = match (section, key) {
            (Section::None, _) => return Err(Error::parse(line, indent + 1, "key outside of a section")),
            (Section::Variety, "characteristic") => &mut characteristic,
            (Section::Variety, "variables") => &mut variables,
            (Section::Variety, "point") => &mut point,
            (Section::Variety, "ideal") => {
                ideal.push(entry);
                continue;
            }
            (Section::Group, "element") => {
                elements.push(entry);
                continue;
            }
            (Section::Group, "kind") => &mut group_kind,
            (Section::Task, "kind") => &mut task_kind,
            (Section::Task, "order") => &mut order,
            _ => return Err(Error::parse(line, indent + 1, format!("unknown key '{key}'"))),
        };
        if slot.is_some() {
            return Err(Error::parse(line, indent + 1, format!("duplicate key '{key}'")));
        }
        *slot = Some(entry);
    }

    if !seen.contains(&Section::Variety) {
        return Err(Error::parse(1, 1, "missing [variety] section"));
    }
    let characteristic = match characteristic {
        None => 0,
        Some(e) => e
            .value
            .parse::<u64>()
            .map_err(|_| Error::parse(e.line, e.col, "characteristic must be 0 or a prime"))?,
    };
    let field = Field::from_characteristic(characteristic)?;

    let variables_entry = variables.ok_or_else(|| Error::parse(1, 1, "missing key 'variables'"))?;
    let names = parse_names(&variables_entry)?;
    let ring = Ring::new(field, &names, MonomialOrder::GRevLex);

    let mut generators = Vec::new();
    for e in &ideal {
        for (offset, piece) in split_with_offsets(&e.value, ',') {
            if piece.trim().is_empty() {
                continue;
            }
            let g = parse_poly(&ring, piece).map_err(|err| shift(err, e.line, e.col + offset))?;
            generators.push(g);
        }
    }

    let point = match &point {
        None => None,
        Some(e) => {
            let coords = parse_scalars(&field, e, ',')?;
            if coords.len() != names.len() {
                return Err(Error::parse(
                    e.line,
                    e.col,
                    format!("point has {} coordinates for {} variables", coords.len(), names.len()),
                ));
            }
            Some(coords)
        }
    };

    let translated = translate(&ring, &generators, point.as_deref())?;
    let ideal = Ideal::new(&ring, translated);

    let group = if seen.contains(&Section::Group) {
        let mut mats = Vec::new();
        for e in &elements {
            mats.push(parse_matrix(&field, e, names.len())?);
        }
        let generators = match &group_kind {
            None => false,
            Some(e) => match e.value.as_str() {
                "elements" => false,
                "generators" => true,
                _ => return Err(Error::parse(e.line, e.col, "group kind is 'elements' or 'generators'")),
            },
        };
        if mats.is_empty() {
            return Err(Error::InvalidInput("the [group] section lists no elements".into()));
        }
        Some(GroupInput {
            elements: mats,
            generators,
        })
    } else {
        None
    };

    let task = TaskInput {
        kind: task_kind.map(|e| e.value),
        order: match order {
            None => None,
            Some(e) => Some(
                e.value
                    .parse::<u32>()
                    .map_err(|_| Error::parse(e.line, e.col, "order must be a non-negative integer"))?,
            ),
        },
    };

    Ok(VarietyInput {
        characteristic,
        variables: names,
        generators,
        point,
        group,
        task,
        ideal,
    })
}

fn split_with_offsets(s: &str, sep: char) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = 0;
    for (k, c) in s.char_indices() {
        if c == sep {
            out.push((start, &s[start..k]));
            start = k + 1;
        }
    }
    out.push((start, &s[start..]));
    out
}

fn parse_names(e: &Entry) -> Result<Vec<String>> {
    let mut names: Vec<String> = Vec::new();
    for (offset, piece) in split_with_offsets(&e.value, ',') {
        let name = piece.trim();
        let col = e.col + offset + (piece.len() - piece.trim_start().len());
        let valid = name.chars().next().is_some_and(|c| c.is_alphabetic() || c == '_')
            && name.chars().all(|c| c.is_alphanumeric() || c == '_');
        if !valid {
            return Err(Error::parse(e.line, col, format!("'{name}' is not a variable name")));
        }
        if names.iter().any(|n| n == name) {
            return Err(Error::parse(
                e.line,
                col,
                format!("variable '{name}' is declared twice"),
            ));
        }
        names.push(name.to_string());
    }
    Ok(names)
}

fn parse_scalar(field: &Field, text: &str, line: usize, col: usize) -> Result<Scalar> {
    let t = text.trim();
    let bad = || Error::parse(line, col, format!("'{t}' is not an integer or fraction"));
    let (num, den) = match t.split_once('/') {
        Some((a, b)) => (a.trim(), b.trim()),
        None => (t, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    field.from_ratio(&num, &den)
}

fn parse_scalars(field: &Field, e: &Entry, sep: char) -> Result<Vec<Scalar>> {
    split_with_offsets(&e.value, sep)
        .into_iter()
        .map(|(offset, piece)| parse_scalar(field, piece, e.line, e.col + offset))
        .collect()
}

fn parse_matrix(field: &Field, e: &Entry, n: usize) -> Result<Vec<Vec<Scalar>>> {
    let mut rows = Vec::new();
    for (offset, row) in split_with_offsets(&e.value, ';') {
        let sub = Entry {
            line: e.line,
            col: e.col + offset,
            value: row.to_string(),
        };
        let r = parse_scalars(field, &sub, ',')?;
        if r.len() != n {
            return Err(Error::parse(e.line, sub.col, format!("matrix rows need {n} entries")));
        }
        rows.push(r);
    }
    if rows.len() != n {
        return Err(Error::parse(e.line, e.col, format!("matrices must be {n}x{n}")));
    }
    Ok(rows)
}

/// Substitutes `x_i -> x_i + a_i` after checking that `a` is on the variety.
fn translate(ring: &Ring, gens: &[Poly], point: Option<&[Scalar]>) -> Result<Vec<Poly>> {
    let field = ring.field();
    let origin = vec![field.zero(); ring.nvars()];
    let a = point.unwrap_or(&origin);
    for g in gens {
        if !g.eval(a).is_zero() {
            let coords: Vec<String> = a.iter().map(|c| field.format(c)).collect();
            return Err(Error::PointNotOnVariety(format!(
                "{g} is nonzero at ({})",
                coords.join(", ")
            )));
        }
    }
    if point.is_none() {
        return Ok(gens.to_vec());
    }
    let images: Vec<Poly> = (0..ring.nvars())
        .map(|i| &ring.var(i) + &ring.constant(a[i].clone()))
        .collect();
    Ok(gens.iter().map(|g| g.substitute(&images)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_the_char_two_cusp() {
        let v = parse_variety_str("[variety]\ncharacteristic = 2\nvariables = x, y\nideal = x^3 + y^2\n").unwrap();
        assert_eq!(v.characteristic, 2);
        assert_eq!(v.variables, vec!["x", "y"]);
        assert_eq!(v.ideal.canonical_generators().unwrap(), vec!["x^3 + y^2"]);
    }

    #[test]
    fn half_is_undefined_in_char_two() {
        let e = parse_variety_str("[variety]\ncharacteristic = 2\nvariables = x, y\nideal = x^3 - 1/2 y^2\n");
        assert!(matches!(e, Err(Error::FieldMismatch(_))), "{e:?}");
    }

    #[test]
    fn points_are_translated() {
        let v = parse_variety_str("[variety]\nvariables = x, y\nideal = x^3 - y^2\npoint = 1, 1\n").unwrap();
        let g = &v.ideal.generators()[0];
        assert!(g.constant_term().is_zero());
        assert_eq!(g.to_string(), "x^3 + 3*x^2 - y^2 + 3*x - 2*y");
        let off = parse_variety_str("[variety]\nvariables = x, y\nideal = x^3 - y^2\npoint = 1, 2\n");
        assert!(matches!(off, Err(Error::PointNotOnVariety(_))));
    }

    #[test]
    fn parse_errors_carry_positions() {
        let e = parse_variety_str("[variety]\nvariables = x, y\nideal = x^3 - y^^2\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 3, .. }), "{e:?}");
        let e = parse_variety_str("[variety]\nvariables = x, x\n").unwrap_err();
        assert!(
            matches!(
                e,
                Error::Parse {
                    line: 2,
                    column: 16,
                    ..
                }
            ),
            "{e:?}"
        );
        let e = parse_variety_str("[variety]\nvariables = x\n[bogus]\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 3, .. }), "{e:?}");
    }

    #[test]
    fn group_and_task_blocks() {
        let text = "[variety]\ncharacteristic = 5\nvariables = x, y\n[group]\nkind = generators\nelement = -1,0; 0,-1\n[task]\nkind = quotient\norder = 2\n";
        let v = parse_variety_str(text).unwrap();
        let g = v.group.as_ref().unwrap();
        assert!(g.generators);
        assert_eq!(g.elements[0][0][0], Field::Prime(5).from_i64(4));
        assert_eq!(v.task.kind.as_deref(), Some("quotient"));
        assert_eq!(v.task.order, Some(2));
    }

    #[test]
    fn hash_ignores_formatting() {
        let a = parse_variety_str("[variety]\nvariables = x,y\nideal = x^3-y^2\n").unwrap();
        let b = parse_variety_str("# cusp\n[variety]\n  variables = x, y\nideal = x^3 - y^2   # comment\n").unwrap();
        assert_eq!(a.input_hash(), b.input_hash());
        assert_eq!(a.input_hash().len(), 64);
    }
}

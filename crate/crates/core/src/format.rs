//! Line-oriented text formats for cones, polytopes and tensors.
//!
//! Every file is a sequence of `key: value` lines. Blank lines and lines starting
//! with `#` are ignored. Numbers are rationals written `p` or `p/q`, separated by
//! whitespace. Serializing a parsed file gives its canonical form, which parses back
//! to the same value.
//!
//! ```text
//! name: square
//! dim: 3
//! gen: 1 1 0
//! gen: 1 -1 0
//! gen: 1 0 1
//! gen: 1 0 -1
//! phi: 1 0 0
//! ```

use std::fmt::Write as _;

use crate::cone::{make_based, make_cone, BasedCone, Cone};
use crate::error::{Error, Result};
use crate::linalg::Vector;
use crate::polytope::Polytope;
use crate::scalar::Rational;
use crate::tensor::{DenseTensor, Slot};

fn parse_error(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

/// `(line number, key, value)` for every content line.
fn entries(text: &str) -> Result<Vec<(usize, &str, &str)>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line
            .split_once(':')
            .ok_or_else(|| parse_error(i + 1, format!("expected `key: value`, found {line:?}")))?;
        out.push((i + 1, key.trim(), value.trim()));
    }
    Ok(out)
}

/// Parses whitespace-separated rationals, reporting `line` on failure.
pub fn parse_vector(value: &str, line: usize) -> Result<Vector> {
    value
        .split_whitespace()
        .map(|tok| {
            tok.parse::<Rational>().map_err(|e| match e {
                Error::Parse { message, .. } => parse_error(line, message),
                other => parse_error(line, format!("{tok:?}: {other}")),
            })
        })
        .collect()
}

fn parse_usize(value: &str, line: usize) -> Result<usize> {
    value.parse().map_err(|_| {
        parse_error(
            line,
            format!("expected a nonnegative integer, found {value:?}"),
        )
    })
}

pub fn format_vector(v: &[Rational]) -> String {
    v.iter()
        .map(Rational::to_string)
        .collect::<Vec<_>>()
        .join(" ")
}

fn set_once<T>(slot: &mut Option<T>, value: T, key: &str, line: usize) -> Result<()> {
    if slot.is_some() {
        return Err(parse_error(line, format!("duplicate `{key}`")));
    }
    *slot = Some(value);
    Ok(())
}

fn check_len(v: &[Rational], dim: usize, line: usize) -> Result<()> {
    if v.len() != dim {
        return Err(parse_error(
            line,
            format!("expected {dim} entries, found {}", v.len()),
        ));
    }
    Ok(())
}

fn parse_name(value: &str, line: usize) -> Result<String> {
    if value.is_empty() {
        return Err(parse_error(line, "empty name"));
    }
    Ok(value.to_string())
}

/// A cone given by generators, optionally with a base functional.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConeFile {
    pub name: String,
    pub dim: usize,
    pub generators: Vec<Vector>,
    pub phi: Option<Vector>,
}

impl ConeFile {
    pub fn parse(text: &str) -> Result<Self> {
        let mut name = None;
        let mut dim = None;
        let mut gens: Vec<(usize, Vector)> = Vec::new();
        let mut phi = None;
        for (line, key, value) in entries(text)? {
            match key {
                "name" => set_once(&mut name, parse_name(value, line)?, key, line)?,
                "dim" => set_once(&mut dim, (line, parse_usize(value, line)?), key, line)?,
                "gen" => gens.push((line, parse_vector(value, line)?)),
                "phi" => set_once(&mut phi, (line, parse_vector(value, line)?), key, line)?,
                other => {
                    return Err(parse_error(
                        line,
                        format!("unknown key `{other}` in cone file"),
                    ))
                }
            }
        }
        let last = text.lines().count().max(1);
        let name = name.ok_or_else(|| parse_error(last, "missing `name`"))?;
        let (_, dim) = dim.ok_or_else(|| parse_error(last, "missing `dim`"))?;
        for (line, g) in &gens {
            check_len(g, dim, *line)?;
        }
        if let Some((line, p)) = &phi {
            check_len(p, dim, *line)?;
        }
        Ok(ConeFile {
            name,
            dim,
            generators: gens.into_iter().map(|(_, g)| g).collect(),
            phi: phi.map(|(_, p)| p),
        })
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        writeln!(s, "name: {}", self.name).unwrap();
        writeln!(s, "dim: {}", self.dim).unwrap();
        for g in &self.generators {
            writeln!(s, "gen: {}", format_vector(g)).unwrap();
        }
        if let Some(p) = &self.phi {
            writeln!(s, "phi: {}", format_vector(p)).unwrap();
        }
        s
    }

    /// File listing the extreme rays of `cone`.
    pub fn from_cone(name: &str, cone: &Cone, phi: Option<&[Rational]>) -> Self {
        ConeFile {
            name: name.to_string(),
            dim: cone.ambient_dim(),
            generators: cone.rays().to_vec(),
            phi: phi.map(<[Rational]>::to_vec),
        }
    }

    pub fn cone(&self) -> Result<Cone> {
        make_cone(&self.generators)
    }

    /// The based cone, with `phi_override` taking precedence over the file's functional.
    pub fn based(&self, phi_override: Option<&[Rational]>) -> Result<BasedCone> {
        let phi = match (phi_override, &self.phi) {
            (Some(p), _) => p.to_vec(),
            (None, Some(p)) => p.clone(),
            (None, None) => {
                return Err(Error::DimensionMismatch(format!(
                    "cone `{}` has no base functional",
                    self.name
                )))
            }
        };
        make_based(&self.cone()?, &phi)
    }
}

/// A polytope given by points whose convex hull it is.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolytopeFile {
    pub name: String,
    pub dim: usize,
    pub vertices: Vec<Vector>,
}

impl PolytopeFile {
    pub fn parse(text: &str) -> Result<Self> {
        let mut name = None;
        let mut dim = None;
        let mut verts: Vec<(usize, Vector)> = Vec::new();
        for (line, key, value) in entries(text)? {
            match key {
                "name" => set_once(&mut name, parse_name(value, line)?, key, line)?,
                "dim" => set_once(&mut dim, parse_usize(value, line)?, key, line)?,
                "vertex" => verts.push((line, parse_vector(value, line)?)),
                other => {
                    return Err(parse_error(
                        line,
                        format!("unknown key `{other}` in polytope file"),
                    ))
                }
            }
        }
        let last = text.lines().count().max(1);
        let name = name.ok_or_else(|| parse_error(last, "missing `name`"))?;
        let dim = dim.ok_or_else(|| parse_error(last, "missing `dim`"))?;
        for (line, v) in &verts {
            check_len(v, dim, *line)?;
        }
        Ok(PolytopeFile {
            name,
            dim,
            vertices: verts.into_iter().map(|(_, v)| v).collect(),
        })
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        writeln!(s, "name: {}", self.name).unwrap();
        writeln!(s, "dim: {}", self.dim).unwrap();
        for v in &self.vertices {
            writeln!(s, "vertex: {}", format_vector(v)).unwrap();
        }
        s
    }

    pub fn polytope(&self) -> Result<Polytope> {
        Polytope::from_vertices(&self.vertices)
    }
}

/// A tensor with primal slots, entries listed row by row along the last slot.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TensorFile {
    pub name: String,
    pub shape: Vec<usize>,
    pub entries: Vec<Rational>,
}

impl TensorFile {
    pub fn parse(text: &str) -> Result<Self> {
        let mut name = None;
        let mut shape: Option<(usize, Vec<usize>)> = None;
        let mut rows: Vec<(usize, Vector)> = Vec::new();
        for (line, key, value) in entries(text)? {
            match key {
                "name" => set_once(&mut name, parse_name(value, line)?, key, line)?,
                "shape" => {
                    let dims = value
                        .split_whitespace()
                        .map(|t| parse_usize(t, line))
                        .collect::<Result<Vec<_>>>()?;
                    if dims.is_empty() || dims.contains(&0) {
                        return Err(parse_error(line, "shape needs positive dimensions"));
                    }
                    set_once(&mut shape, (line, dims), key, line)?
                }
                "row" => rows.push((line, parse_vector(value, line)?)),
                other => {
                    return Err(parse_error(
                        line,
                        format!("unknown key `{other}` in tensor file"),
                    ))
                }
            }
        }
        let last = text.lines().count().max(1);
        let name = name.ok_or_else(|| parse_error(last, "missing `name`"))?;
        let (shape_line, shape) = shape.ok_or_else(|| parse_error(last, "missing `shape`"))?;
        let width = *shape.last().expect("nonempty shape");
        let height: usize = shape[..shape.len() - 1].iter().product();
        for (line, r) in &rows {
            check_len(r, width, *line)?;
        }
        if rows.len() != height {
            return Err(parse_error(
                shape_line,
                format!("shape needs {height} rows, found {}", rows.len()),
            ));
        }
        Ok(TensorFile {
            name,
            shape,
            entries: rows.into_iter().flat_map(|(_, r)| r).collect(),
        })
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        writeln!(s, "name: {}", self.name).unwrap();
        let dims: Vec<String> = self.shape.iter().map(usize::to_string).collect();
        writeln!(s, "shape: {}", dims.join(" ")).unwrap();
        let width = *self.shape.last().expect("nonempty shape");
        for row in self.entries.chunks(width) {
            writeln!(s, "row: {}", format_vector(row)).unwrap();
        }
        s
    }

    pub fn from_tensor(name: &str, t: &DenseTensor) -> Self {
        TensorFile {
            name: name.to_string(),
            shape: t.dims(),
            entries: t.entries().to_vec(),
        }
    }

    pub fn tensor(&self) -> Result<DenseTensor> {
        DenseTensor::new(
            self.shape.iter().map(|&d| Slot::primal(d)).collect(),
            self.entries.clone(),
        )
    }
}

/// A file given to commands that accept either a polytope or a based cone.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ShapeFile {
    Polytope(PolytopeFile),
    Cone(ConeFile),
}

impl ShapeFile {
    /// Chooses the format by the presence of `vertex` lines.
    pub fn parse(text: &str) -> Result<Self> {
        let has_vertex = entries(text)?.iter().any(|(_, k, _)| *k == "vertex");
        if has_vertex {
            PolytopeFile::parse(text).map(ShapeFile::Polytope)
        } else {
            ConeFile::parse(text).map(ShapeFile::Cone)
        }
    }

    pub fn name(&self) -> &str {
        match self {
            ShapeFile::Polytope(p) => &p.name,
            ShapeFile::Cone(c) => &c.name,
        }
    }

    /// The polytope itself, or the base of the cone at its functional.
    pub fn polytope(&self, phi_override: Option<&[Rational]>) -> Result<Polytope> {
        match self {
            ShapeFile::Polytope(p) => p.polytope(),
            ShapeFile::Cone(c) => Ok(c.based(phi_override)?.base().clone()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::linalg::vector;
    use proptest::prelude::*;

    const SQUARE: &str = "# cone over a square\nname: square\ndim: 3\n\ngen: 1 1 0\ngen: 1 -1 0\ngen: 1 0 1\ngen: 1 0 -1\nphi: 1 0 0\n";

    #[test]
    fn cone_file_round_trip() {
        let f = ConeFile::parse(SQUARE).unwrap();
        assert_eq!(f.generators.len(), 4);
        assert_eq!(f.phi, Some(vector(&[1, 0, 0])));
        let text = f.to_text();
        assert!(!text.contains('#'));
        assert_eq!(ConeFile::parse(&text).unwrap(), f);
        assert_eq!(f.cone().unwrap(), fixtures::square_cone());
        assert_eq!(f.based(None).unwrap().base().vertices().len(), 4);
    }

    #[test]
    fn rationals_are_canonicalized() {
        let f = ConeFile::parse("name: c\ndim: 2\ngen: 2/4  0\ngen: -0 3/1\n").unwrap();
        assert_eq!(f.to_text(), "name: c\ndim: 2\ngen: 1/2 0\ngen: 0 3\n");
    }

    #[test]
    fn parse_errors_carry_lines() {
        let err = ConeFile::parse("name: c\ndim: 2\ngen: 1 0\ngen: 1//2 1\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 4, .. }), "{err:?}");
        let err = ConeFile::parse("name: c\ndim: 2\ngen: 1 0 0\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }));
        let err = ConeFile::parse("name: c\ngen: 1 0\n").unwrap_err();
        assert!(matches!(err, Error::Parse { .. }));
        let err = ConeFile::parse("name: c\ndim: 2\nray 1 0\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }));
        let err = ConeFile::parse("name: c\ndim: 2\ngen: 1/0 1\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }));
        let err = TensorFile::parse("name: t\nshape: 2 2\nrow: 1 0\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
    }

    #[test]
    fn missing_functional() {
        let f = ConeFile::parse("name: o\ndim: 2\ngen: 1 0\ngen: 0 1\n").unwrap();
        assert!(f.based(None).is_err());
        assert!(f.based(Some(&vector(&[1, 1]))).is_ok());
    }

    #[test]
    fn shape_dispatch() {
        let p =
            ShapeFile::parse("name: t\ndim: 2\nvertex: 0 0\nvertex: 1 0\nvertex: 0 1\n").unwrap();
        assert!(matches!(p, ShapeFile::Polytope(_)));
        assert_eq!(p.polytope(None).unwrap().dim(), 2);
        let c = ShapeFile::parse(SQUARE).unwrap();
        assert_eq!(c.polytope(None).unwrap().facets().len(), 4);
    }

    fn small() -> impl Strategy<Value = Rational> {
        (-20i64..20, 1i64..9).prop_map(|(n, d)| Rational::ratio(n, d))
    }

    proptest! {
        #[test]
        fn tensor_round_trip(shape in prop::collection::vec(1usize..4, 1..4), seed in prop::collection::vec(small(), 64)) {
            let n: usize = shape.iter().product();
            let f = TensorFile { name: "t".into(), shape, entries: seed[..n].to_vec() };
            let text = f.to_text();
            let back = TensorFile::parse(&text).unwrap();
            prop_assert_eq!(back.to_text(), text);
            prop_assert_eq!(back, f);
        }

        #[test]
        fn cone_round_trip(gens in prop::collection::vec(prop::collection::vec(small(), 3), 1..6), phi in prop::option::of(prop::collection::vec(small(), 3))) {
            let f = ConeFile { name: "c".into(), dim: 3, generators: gens, phi };
            let text = f.to_text();
            let back = ConeFile::parse(&text).unwrap();
            prop_assert_eq!(back.to_text(), text);
            prop_assert_eq!(back, f);
        }
    }
}

use std::fs;
use std::path::Path;

use extcone::extend::eb::EbObstruction;
use extcone::extend::{
    dual_hierarchy_k, ext_k_membership, find_extension_gap, is_entanglement_breaking,
    min_membership, min_tensor_generators, EbVerdict, ExtVerdict, HierarchyOutcome,
};
use extcone::format::{format_vector, parse_vector, ConeFile, ShapeFile, TensorFile};
use extcone::lp::ConicMembership;
use extcone::quantum::verify_appendix;
use extcone::{dualize, BasedCone, Cone, DenseTensor, Error, HullCommutation, Vector};

use crate::report::{index_set, Report};
use crate::{Command, PairArgs};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    Affirmative = 0,
    Negative = 1,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ErrorCode {
    Usage = 2,
    Semantic = 3,
}

#[derive(Debug)]
pub struct CliError {
    pub code: ErrorCode,
    pub message: String,
}

type CliResult<T> = Result<T, CliError>;

fn semantic(e: Error) -> CliError {
    let code = match e {
        Error::Parse { .. } => ErrorCode::Usage,
        _ => ErrorCode::Semantic,
    };
    CliError {
        code,
        message: e.to_string(),
    }
}

/// Attaches the file name to parse errors.
fn in_file(path: &Path) -> impl Fn(Error) -> CliError + '_ {
    move |e| match e {
        Error::Parse { line, message } => CliError {
            code: ErrorCode::Usage,
            message: format!("{}:{line}: {message}", path.display()),
        },
        other => CliError {
            code: ErrorCode::Semantic,
            message: format!("{}: {other}", path.display()),
        },
    }
}

fn read(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| CliError {
        code: ErrorCode::Usage,
        message: format!("{}: {e}", path.display()),
    })
}

fn load_cone_file(path: &Path) -> CliResult<ConeFile> {
    ConeFile::parse(&read(path)?).map_err(in_file(path))
}

fn load_cone(path: &Path) -> CliResult<(ConeFile, Cone)> {
    let f = load_cone_file(path)?;
    let c = f.cone().map_err(in_file(path))?;
    Ok((f, c))
}

fn parse_phi(phi: Option<&String>) -> CliResult<Option<Vector>> {
    phi.map(|s| {
        parse_vector(s, 1).map_err(|e| CliError {
            code: ErrorCode::Usage,
            message: format!("--phi: {e}"),
        })
    })
    .transpose()
}

fn load_based(path: &Path, phi: Option<&String>) -> CliResult<(ConeFile, BasedCone)> {
    let phi = parse_phi(phi)?;
    let f = load_cone_file(path)?;
    let b = f.based(phi.as_deref()).map_err(in_file(path))?;
    Ok((f, b))
}

fn load_point(path: &Path) -> CliResult<DenseTensor> {
    TensorFile::parse(&read(path)?)
        .and_then(|t| t.tensor())
        .map_err(in_file(path))
}

fn load_pair(pair: &PairArgs) -> CliResult<(ConeFile, Cone, ConeFile, BasedCone)> {
    let (fa, a) = load_cone(&pair.cone_a)?;
    let (fb, b) = load_based(&pair.cone_b, pair.phi.as_ref())?;
    Ok((fa, a, fb, b))
}

fn verdict(flag: bool) -> Outcome {
    if flag {
        Outcome::Affirmative
    } else {
        Outcome::Negative
    }
}

fn push_tensor(r: &mut Report, t: &DenseTensor) {
    r.extend_from_text(&TensorFile::from_tensor("certificate", t).to_text());
}

pub fn run(command: &Command) -> CliResult<(Report, Outcome)> {
    let mut r = Report::new();
    let outcome = match command {
        Command::Dualize { file } => {
            let (f, c) = load_cone(file)?;
            let dual = ConeFile::from_cone(&format!("{}-dual", f.name), &dualize(&c), None);
            r.extend_from_text(&dual.to_text());
            Outcome::Affirmative
        }
        Command::ExtCheck { pair, k, point } => {
            let (fa, a, fb, b) = load_pair(pair)?;
            let x = load_point(point)?;
            let v = ext_k_membership(&x, &a, &b, *k as usize).map_err(semantic)?;
            r.push("cone-a", &fa.name).push("cone-b", &fb.name);
            r.push("phi", format_vector(b.phi())).push("level", k);
            match &v {
                ExtVerdict::Member { extension } => {
                    r.push("verdict", "MEMBER").push("certificate", "extension");
                    push_tensor(&mut r, extension);
                }
                ExtVerdict::NonMember { witness } => {
                    r.push("verdict", "NON-MEMBER")
                        .push("certificate", "witness");
                    push_tensor(&mut r, witness);
                }
            }
            verdict(v.is_member())
        }
        Command::MinCheck {
            cone_a,
            cone_b,
            point,
        } => {
            let (fa, a) = load_cone(cone_a)?;
            let (fb, b) = load_cone(cone_b)?;
            let x = load_point(point)?;
            if x.dims() != [a.ambient_dim(), b.ambient_dim()] {
                return Err(semantic(Error::DimensionMismatch(format!(
                    "point of shape {:?} for cones of dimensions {} and {}",
                    x.dims(),
                    a.ambient_dim(),
                    b.ambient_dim()
                ))));
            }
            let m = min_membership(x.entries(), &a, &b).map_err(semantic)?;
            m.verify(x.entries(), &min_tensor_generators(&a, &b))
                .map_err(semantic)?;
            r.push("cone-a", &fa.name).push("cone-b", &fb.name);
            match &m {
                ConicMembership::Member { .. } => {
                    r.push("verdict", "MEMBER");
                    for ray in a.rays() {
                        r.push("a-ray", format_vector(ray));
                    }
                    for ray in b.rays() {
                        r.push("b-ray", format_vector(ray));
                    }
                    let nb = b.rays().len();
                    for (g, w) in m.support() {
                        r.push(
                            "term",
                            format!("weight={w} a={} b={}", g / nb + 1, g % nb + 1),
                        );
                    }
                }
                ConicMembership::Separated { functional } => {
                    r.push("verdict", "NON-MEMBER")
                        .push("certificate", "separator");
                    for row in functional.chunks(b.ambient_dim()) {
                        r.push("row", format_vector(row));
                    }
                }
            }
            verdict(m.is_member())
        }
        Command::EbCheck { cone_b, phi, k } => {
            let (fb, b) = load_based(cone_b, phi.as_ref())?;
            let v = is_entanglement_breaking(&b, *k as usize).map_err(semantic)?;
            r.push("cone-b", &fb.name)
                .push("phi", format_vector(b.phi()))
                .push("level", k);
            match &v {
                EbVerdict::Breaking {
                    decomposition,
                    factorization,
                } => {
                    r.push("verdict", "BREAKING");
                    r.push("factors", format!("{:?}", factorization.factor_dims));
                    r.push("terms", decomposition.terms.len());
                    for t in &decomposition.terms {
                        r.push(
                            "term",
                            format!(
                                "weight={} facets={} vertex={}",
                                t.weight,
                                index_set(&t.facets),
                                t.vertex + 1
                            ),
                        );
                    }
                }
                EbVerdict::NotBreaking { separator, reason } => {
                    r.push("verdict", "NOT-BREAKING");
                    let why = match reason {
                        EbObstruction::NotAProduct(f) => {
                            format!("base is not a product of simplices ({f})")
                        }
                        EbObstruction::TooManyFactors(n) => {
                            format!("base has {n} simplex factors, more than {k}")
                        }
                    };
                    r.push("reason", why)
                        .push("separator", format_vector(separator));
                }
            }
            verdict(v.is_breaking())
        }
        Command::Factor { file, phi } => {
            let p = load_shape(file, phi.as_ref())?;
            match p.1.factor_as_simplices() {
                Ok(f) => {
                    r.push("name", &p.0)
                        .push("factors", format!("{:?}", f.factor_dims));
                    for class in &f.facet_classes {
                        r.push("facet-class", index_set(class));
                    }
                    Outcome::Affirmative
                }
                Err(e) => {
                    r.push("name", &p.0)
                        .push("factors", "none")
                        .push("failure", e);
                    Outcome::Negative
                }
            }
        }
        Command::Theorem3 { file, phi } => {
            let (name, p) = load_shape(file, phi.as_ref())?;
            let h = p.affine_hull_commutes().map_err(semantic)?;
            r.push("name", name).push("dim", p.dim());
            let out = match &h {
                HullCommutation::Commutes => {
                    r.push("verdict", "COMMUTES");
                    Outcome::Affirmative
                }
                HullCommutation::Violated {
                    facets,
                    face_dim,
                    hull_dim,
                } => {
                    let kind = if p.dim() == 2 { "edges" } else { "facets" };
                    let dim = |d: &Option<usize>| d.map_or("empty".to_string(), |d| d.to_string());
                    r.push("verdict", "VIOLATED");
                    r.push("violated", format!("{kind} {}", index_set(facets)));
                    r.push("face-dim", dim(face_dim))
                        .push("hull-dim", dim(hull_dim));
                    Outcome::Negative
                }
            };
            r.push("simple", p.is_simple())
                .push("two-level", p.is_two_level());
            r.push("factorizable", p.factor_as_simplices().is_ok());
            out
        }
        Command::Hierarchy {
            pair,
            point,
            max_level,
        } => {
            let (fa, a, fb, b) = load_pair(pair)?;
            let x = load_point(point)?;
            if x.dims() != [a.ambient_dim(), b.dim()] {
                return Err(semantic(Error::DimensionMismatch(format!(
                    "point of shape {:?}",
                    x.dims()
                ))));
            }
            let h = dual_hierarchy_k(x.entries(), &a, &b, *max_level as usize).map_err(semantic)?;
            r.push("cone-a", &fa.name)
                .push("cone-b", &fb.name)
                .push("phi", format_vector(b.phi()));
            match &h {
                HierarchyOutcome::Found { level, terms } => {
                    r.push("verdict", "FOUND").push("level", level);
                    for t in terms {
                        r.push(
                            "term",
                            format!(
                                "weight={} a={} b={}",
                                t.weight,
                                t.a_ray + 1,
                                index_set(&t.b_rays)
                            ),
                        );
                    }
                    Outcome::Affirmative
                }
                HierarchyOutcome::Exhausted { max_level } => {
                    r.push("verdict", "EXHAUSTED").push("max-level", max_level);
                    Outcome::Negative
                }
            }
        }
        Command::QuantumDemo => match verify_appendix() {
            Ok(report) => {
                for c in &report.claims {
                    r.push(
                        "claim",
                        format!("{} {}", c.label, if c.passed { "PASS" } else { "FAIL" }),
                    );
                    for (k, v) in &c.values {
                        r.push("value", format!("{k} = {v}"));
                    }
                }
                r.push("transpose-scale", &report.transpose_scale);
                r.push(
                    "verdict",
                    if report.all_passed() {
                        "ALL PASS"
                    } else {
                        "FAIL"
                    },
                );
                verdict(report.all_passed())
            }
            Err(Error::ClaimFailed(m)) => {
                r.push("verdict", "FAIL").push("failure", m);
                Outcome::Negative
            }
            Err(e) => return Err(semantic(e)),
        },
        Command::GapSearch { pair, k } => {
            let (fa, a, fb, b) = load_pair(pair)?;
            let k = *k as usize;
            match find_extension_gap(&a, &b, k).map_err(semantic)? {
                Some(g) => {
                    let name = format!("gap-{}-{}-k{k}", fa.name, fb.name);
                    r.comment(format!("in Ext_{k} at phi = {}", format_vector(b.phi())));
                    r.comment(format!(
                        "min-product facet: {}",
                        format_vector(&g.functional)
                    ));
                    r.extend_from_text(&TensorFile::from_tensor(&name, &g.point).to_text());
                    Outcome::Affirmative
                }
                None => {
                    r.push("verdict", "NO-GAP").push("level", k);
                    Outcome::Negative
                }
            }
        }
    };
    Ok((r, outcome))
}

fn load_shape(path: &Path, phi: Option<&String>) -> CliResult<(String, extcone::Polytope)> {
    let phi = parse_phi(phi)?;
    let f = ShapeFile::parse(&read(path)?).map_err(in_file(path))?;
    let p = f.polytope(phi.as_deref()).map_err(in_file(path))?;
    Ok((f.name().to_string(), p))
}

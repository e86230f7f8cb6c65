//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.
//!
//! Run with `cargo test -p extcone-core --test acceptance`.

use std::path::PathBuf;
use std::time::{Duration, Instant};

use extcone::extend::membership::ExtProblem;
use extcone::extend::products::{in_max_product, min_tensor_generators_multi};
use extcone::extend::{
    compare_min_max, dual_hierarchy_k, eb::lp_decomposition, ext_k_membership,
    is_entanglement_breaking, max_product_vertex, max_tensor_halfspaces, min_membership,
    min_tensor_generators, omega_interior_test, EbVerdict, ExtVerdict, HierarchyOutcome,
    ProductComparison, ReductionMap,
};
use extcone::format::TensorFile;
use extcone::linalg;
use extcone::lp::{conic_membership, ConicMembership};
use extcone::quantum::{
    build_x, extension_vectors, psd_check_exact, reduce_b_factors, symmetric_lift, verify_appendix,
    ExactOperator,
};
use extcone::tensor::Slot;
use extcone::{
    dualize, fixtures, make_based, make_cone, BasedCone, Cone, DenseTensor, HullCommutation,
    QuadScalar, Rational, Vector,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn ok<T>(r: extcone::Result<T>, what: &str) -> Result<T, String> {
    r.map_err(|e| format!("{what}: {e}"))
}

fn int(n: i64) -> Rational {
    Rational::int(n)
}

fn fixture_tensor(name: &str) -> Result<DenseTensor, String> {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name);
    let text = std::fs::read_to_string(&path).map_err(|e| format!("{}: {e}", path.display()))?;
    ok(TensorFile::parse(&text).and_then(|t| t.tensor()), name)
}

fn combine(weights: &[Rational], vectors: &[Vector]) -> Vector {
    let mut acc = vec![Rational::from(0); vectors[0].len()];
    for (w, v) in weights.iter().zip(vectors) {
        acc = linalg::add(&acc, &linalg::scale(v, w));
    }
    acc
}

fn random_objective(rng: &mut ChaCha8Rng, n: usize) -> Vector {
    (0..n).map(|_| int(rng.gen_range(-9..10))).collect()
}

fn primal(dims: &[usize], entries: Vector) -> DenseTensor {
    DenseTensor::new(dims.iter().map(|&d| Slot::primal(d)).collect(), entries).expect("shape")
}

/// Extension check written against full tensors: symmetric in the B slots, inside
/// `A ⊗max B^{⊗max k}`, and reducing to `x`.
fn check_extension(
    x: &DenseTensor,
    y: &DenseTensor,
    a: &Cone,
    b: &BasedCone,
    k: usize,
) -> Result<(), String> {
    let group: Vec<usize> = (1..=k).collect();
    ensure(y.is_symmetric_in(&group), || {
        "extension not symmetric".into()
    })?;
    let bs: Vec<&Cone> = vec![b.cone(); k];
    let inside = max_tensor_halfspaces(a, &bs)
        .iter()
        .all(|h| !linalg::dot(h, y.entries()).is_negative());
    ensure(inside, || "extension leaves the max product".into())?;
    let reduced = ok(
        ReductionMap::for_base(b, k).and_then(|g| g.apply(y)),
        "reduce",
    )?;
    ensure(reduced.entries() == x.entries(), || {
        "extension does not reduce to x".into()
    })
}

/// Witness check through the dual description: `ζ(x) < 0` and the pulled-back functional
/// is a nonnegative combination of products of dual extreme rays.
fn check_witness(
    x: &DenseTensor,
    zeta: &DenseTensor,
    a: &Cone,
    b: &BasedCone,
    k: usize,
) -> Result<(), String> {
    ensure(
        linalg::dot(zeta.entries(), x.entries()).is_negative(),
        || "witness not negative on x".into(),
    )?;
    if k <= 2 {
        let pulled = ok(
            ReductionMap::for_base(b, k).and_then(|g| g.apply_adjoint(zeta)),
            "adjoint",
        )?;
        let (ad, bd) = (dualize(a), dualize(b.cone()));
        let mut factors: Vec<&Cone> = vec![&ad];
        factors.extend(std::iter::repeat(&bd).take(k));
        let gens = min_tensor_generators_multi(&factors);
        let m = ok(conic_membership(pulled.entries(), &gens), "dual membership")?;
        ensure(m.is_member(), || {
            "pulled-back witness outside the min product of duals".into()
        })
    } else {
        let prob = ok(ExtProblem::new(a, b, k), "problem")?;
        ok(prob.verify_witness(x, zeta), "witness")
    }
}

fn criterion_1() -> Check {
    let s = fixtures::square_cone();
    let b = ok(make_based(&s, &fixtures::centered_phi()), "base")?;
    let gamma = ok(ReductionMap::for_base(&b, 2), "reduction")?;
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut pool: Vec<Vector> = Vec::new();
    for _ in 0..40 {
        let v = ok(
            max_product_vertex(&[&s, &s, &s], &random_objective(&mut rng, 27)),
            "vertex",
        )?;
        if !pool.contains(&v) {
            pool.push(v);
        }
    }
    let triple = max_tensor_halfspaces(&s, &[&s, &s]);
    let gens = min_tensor_generators(&s, &s);
    let mut passed = 0;
    for _ in 0..200 {
        let weights: Vec<Rational> = pool
            .iter()
            .map(|_| {
                if rng.gen_bool(0.3) {
                    Rational::ratio(rng.gen_range(1..7), rng.gen_range(1..4))
                } else {
                    int(0)
                }
            })
            .collect();
        let z = combine(&weights, &pool);
        ensure(
            triple.iter().all(|h| !linalg::dot(h, &z).is_negative()),
            || "sample outside max".into(),
        )?;
        let x = ok(gamma.apply(&primal(&[3, 3, 3], z)), "apply")?;
        let m = ok(min_membership(x.entries(), &s, &s), "min membership")?;
        ok(m.verify(x.entries(), &gens), "decomposition")?;
        if m.is_member() {
            passed += 1;
        }
    }
    ensure(passed == 200, || format!("{passed}/200 in min"))?;
    Ok(format!(
        "200/200 images in min from {} max-product vertices",
        pool.len()
    ))
}

fn criterion_2() -> Check {
    let mut agree = 0;
    let mut breaking = 0;
    let corpus = fixtures::based_corpus();
    for (name, b) in &corpus {
        for k in 1..=3 {
            let v = ok(is_entanglement_breaking(b, k), name)?;
            let lp = ok(lp_decomposition(b, k), name)?;
            if let Some(d) = &lp {
                ok(d.verify(b), "lp decomposition")?;
            }
            let factors = b.base().factor_as_simplices().ok().map(|f| f.num_factors());
            let expected = factors.is_some_and(|n| n <= k);
            match &v {
                EbVerdict::Breaking { decomposition, .. } => {
                    ok(decomposition.verify(b), "decomposition")?
                }
                EbVerdict::NotBreaking { .. } => {}
            }
            ensure(
                v.is_breaking() == lp.is_some() && v.is_breaking() == expected,
                || format!("{name} at k={k}: routes disagree"),
            )?;
            agree += 1;
            breaking += usize::from(v.is_breaking());
        }
    }
    Ok(format!(
        "{agree}/{} cases agree, {breaking} breaking",
        corpus.len() * 3
    ))
}

fn criterion_3() -> Check {
    let s = fixtures::square_cone();
    let b = ok(make_based(&s, &fixtures::skewed_phi()), "base")?;
    let gens = min_tensor_generators(&s, b.cone());
    let mut out = Vec::new();
    for (file, k) in [("gap-k2.tensor", 2), ("gap-k3.tensor", 3)] {
        let x = fixture_tensor(file)?;
        match ok(ext_k_membership(&x, &s, &b, k), file)? {
            ExtVerdict::Member { extension } => check_extension(&x, &extension, &s, &b, k)?,
            ExtVerdict::NonMember { .. } => return Err(format!("{file} not in Ext_{k}")),
        }
        match ok(min_membership(x.entries(), &s, b.cone()), file)? {
            m @ ConicMembership::Separated { .. } => ok(m.verify(x.entries(), &gens), "separator")?,
            ConicMembership::Member { .. } => {
                return Err(format!("{file} lies in the min product"))
            }
        }
        out.push(format!("k={k}"));
    }
    Ok(format!("gap points certified at {}", out.join(", ")))
}

fn random_cone(rng: &mut ChaCha8Rng, n: usize, count: usize) -> Option<Cone> {
    let gens: Vec<Vector> = (0..count)
        .map(|_| {
            let mut v = vec![int(rng.gen_range(2..5))];
            v.extend((1..n).map(|_| int(rng.gen_range(-3..4))));
            v
        })
        .collect();
    make_cone(&gens).ok()
}

fn criterion_4() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut simplicial = Vec::new();
    while simplicial.len() < 3 {
        if let Some(c) = random_cone(&mut rng, 3, 3) {
            simplicial.push(c);
        }
    }
    let mut general = Vec::new();
    while general.len() < 2 {
        if let Some(c) = random_cone(&mut rng, 3, 6).filter(|c| !c.is_simplicial()) {
            general.push(c);
        }
    }
    for a in &general {
        for b in &simplicial {
            let cmp = ok(compare_min_max(a, b), "compare")?;
            ensure(cmp == ProductComparison::Equal, || {
                "min and max differ for simplicial B".into()
            })?;
        }
    }
    let s = fixtures::square_cone();
    match ok(compare_min_max(&s, &s), "square")? {
        ProductComparison::Gap { point, functional } => {
            ensure(in_max_product(&point, &s, &s), || {
                "gap point outside max".into()
            })?;
            let m = ConicMembership::Separated { functional };
            ok(
                m.verify(&point, &min_tensor_generators(&s, &s)),
                "separator",
            )?;
        }
        ProductComparison::Equal => return Err("square pair reported min = max".into()),
    }
    Ok("6 simplicial pairs have min = max; square pair separated".into())
}

fn criterion_5() -> Check {
    let commuting = ["triangle", "square", "cube", "prism"];
    let mut lines = Vec::new();
    for (name, p) in fixtures::polytope_corpus() {
        let h = ok(p.affine_hull_commutes(), name)?;
        let fact = p.factor_as_simplices().is_ok();
        let combo = p.is_simple() && p.is_two_level();
        ensure(h.commutes() == fact && fact == combo, || {
            format!("{name}: predicates disagree")
        })?;
        ensure(h.commutes() == commuting.contains(&name), || {
            format!("{name}: wrong verdict")
        })?;
        if let HullCommutation::Violated {
            facets,
            face_dim,
            hull_dim,
        } = &h
        {
            ensure(
                p.face_dim(facets) == *face_dim
                    && p.hull_intersection_dim(facets) == *hull_dim
                    && face_dim != hull_dim,
                || format!("{name}: witness does not re-check"),
            )?;
            let ids: Vec<String> = facets.iter().map(|f| (f + 1).to_string()).collect();
            lines.push(format!("{name} {{{}}}", ids.join(",")));
        }
    }
    Ok(format!("7/7 consistent; witnesses {}", lines.join(", ")))
}

fn criterion_6() -> Check {
    let mut n = 0;
    for (name, b) in fixtures::based_corpus() {
        for k in 1..=3 {
            let r = ok(omega_interior_test(&b, k), name)?;
            ensure(r.pairing_positive == r.avoiding_sets_large, || {
                format!("{name} k={k}: sides disagree")
            })?;
            if name == "square" {
                ensure(r.min_avoiding == 2 && r.interior() == (k == 1), || {
                    format!("square k={k}: wrong flip")
                })?;
            }
            n += 1;
        }
    }
    Ok(format!("{n} cases agree; square interior only at k=1"))
}

fn criterion_7() -> Check {
    let report = ok(verify_appendix(), "claims")?;
    ensure(report.all_passed() && report.claims.len() == 4, || {
        "claims failed".into()
    })?;
    let one = QuadScalar::from(1);
    let eta = QuadScalar::new(int(1), Rational::ratio(-1, 2));
    let r2 = QuadScalar::sqrt2();
    let y = build_x(&one, &eta, &one);
    let w = build_x(&one, &eta, &(-(&eta * &QuadScalar::from(2))));
    ensure(
        ok(y.trace_product(&w), "trace")? == QuadScalar::from(0),
        || "tr(YW) != 0".into(),
    )?;
    let strong = build_x(
        &QuadScalar::from(4),
        &one,
        &(&(&r2 * &QuadScalar::from(2)) + &one),
    );
    let weak = build_x(&QuadScalar::from(0), &one, &one);
    let w2 = &(&QuadScalar::from(3) - &(&r2 * &QuadScalar::from(2)))
        * &QuadScalar::from(Rational::ratio(1, 4));
    let combo = strong
        .scale(&QuadScalar::from(Rational::ratio(1, 4)))
        .add(&weak.scale(&w2));
    ensure(combo.as_ref() == Ok(&y), || "Y decomposition".into())?;
    let sigma = extension_vectors()
        .iter()
        .map(|v| ExactOperator::outer(v))
        .try_fold(ExactOperator::zeros(27), |acc, m| acc.add(&m));
    let sigma = ok(sigma, "sum")?;
    ensure(ok(reduce_b_factors(&sigma), "reduce")? == strong, || {
        "extension does not reduce".into()
    })?;
    let lifted = ok(symmetric_lift(&w), "lift")?;
    let psd = ok(psd_check_exact(&lifted), "pivots")?;
    ensure(psd.positive_definite(27), || {
        "W2 not positive definite".into()
    })?;
    Ok(format!(
        "4/4 claims; W2 has 27 positive pivots; scale {}",
        report.transpose_scale
    ))
}

fn simplicial_interior_point(rng: &mut ChaCha8Rng, a: &Cone, b: &Cone) -> Vector {
    let gens = min_tensor_generators(a, b);
    let weights: Vec<Rational> = gens.iter().map(|_| int(rng.gen_range(1..6))).collect();
    combine(&weights, &gens)
}

fn resum_hierarchy(
    x: &[Rational],
    a: &Cone,
    b: &BasedCone,
    level: usize,
    terms: &[extcone::extend::hierarchy::MinTerm],
) -> Result<(), String> {
    let (na, nb) = (a.ambient_dim(), b.dim());
    let y = b.base_point();
    let group: Vec<usize> = (1..=level).collect();
    let mut lift = primal(&[na, nb], x.to_vec());
    for _ in 1..level {
        lift = lift.kron(&primal(&[nb], y.clone()));
    }
    let target = ok(lift.symmetrize_slots(&group), "symmetrize")?;
    let mut acc = DenseTensor::zeros(target.slots().to_vec());
    for t in terms {
        ensure(!t.weight.is_negative() && t.b_rays.len() == level, || {
            "malformed term".into()
        })?;
        let mut pure = primal(&[na], a.rays()[t.a_ray].clone());
        for &j in &t.b_rays {
            pure = pure.kron(&primal(&[nb], b.cone().rays()[j].clone()));
        }
        let sym = ok(pure.symmetrize_slots(&group), "symmetrize")?;
        acc = ok(acc.add(&sym.scale(&t.weight)), "add")?;
    }
    ensure(acc == target, || "hierarchy terms do not re-sum".into())
}

fn criterion_8() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut found = 0;
    while found < 20 {
        let (Some(a), Some(bc)) = (random_cone(&mut rng, 3, 3), random_cone(&mut rng, 3, 3)) else {
            continue;
        };
        let phi = bc
            .facets()
            .iter()
            .fold(vec![int(0); 3], |acc, f| linalg::add(&acc, f));
        let b = ok(make_based(&bc, &phi), "base")?;
        let x = simplicial_interior_point(&mut rng, &a, &bc);
        match ok(dual_hierarchy_k(&x, &a, &b, 6), "hierarchy")? {
            HierarchyOutcome::Found { level: 1, terms } => resum_hierarchy(&x, &a, &b, 1, &terms)?,
            other => return Err(format!("simplicial pair gave {other:?}")),
        }
        found += 1;
    }
    let s = fixtures::square_cone();
    let b = ok(make_based(&s, &fixtures::centered_phi()), "base")?;
    let mut x: Vector = [2, 0, 0, 0, 1, 1, 0, 1, -1]
        .iter()
        .map(|&v| int(v))
        .collect();
    x[0] = &x[0] + &Rational::ratio(1, 8);
    let level = match ok(dual_hierarchy_k(&x, &s, &b, 6), "square")? {
        HierarchyOutcome::Found { level, terms } => {
            resum_hierarchy(&x, &s, &b, level, &terms)?;
            level
        }
        HierarchyOutcome::Exhausted { .. } => return Err("square point exhausted k <= 6".into()),
    };
    ensure(level > 1, || "square max-point should not be in min".into())?;
    Ok(format!(
        "20/20 simplicial points at k=1; square point at k={level}"
    ))
}

fn criterion_9() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let a_side = [
        ("square", fixtures::square_cone()),
        ("orthant3", Cone::orthant(3)),
        ("orthant2", Cone::orthant(2)),
    ];
    let b_side: Vec<(&str, BasedCone)> = fixtures::based_corpus()
        .into_iter()
        .filter(|(n, _)| {
            [
                "segment",
                "triangle",
                "square",
                "square-skewed",
                "pentagon",
                "quadrilateral",
                "prism",
            ]
            .contains(n)
        })
        .collect();
    let (mut members, mut non_members) = (0, 0);
    for q in 0..500 {
        let (_, a) = &a_side[q % a_side.len()];
        let (bname, b) = &b_side[rng.gen_range(0..b_side.len())];
        let k = if b.dim() > 3 {
            rng.gen_range(1..=2)
        } else {
            rng.gen_range(1..=3)
        };
        let (na, nb) = (a.ambient_dim(), b.dim());
        let x: Vector = match q % 4 {
            0 => (0..na * nb)
                .map(|_| Rational::ratio(rng.gen_range(-4..9), rng.gen_range(1..4)))
                .collect(),
            1 => simplicial_interior_point(&mut rng, a, b.cone()),
            _ => {
                let v = ok(
                    max_product_vertex(&[a, b.cone()], &random_objective(&mut rng, na * nb)),
                    "vertex",
                )?;
                let m = simplicial_interior_point(&mut rng, a, b.cone());
                let t = Rational::ratio(rng.gen_range(0..3), 40);
                linalg::add(&linalg::primitive(&v), &linalg::scale(&m, &t))
            }
        };
        let x = primal(&[na, nb], x);
        match ok(ext_k_membership(&x, a, b, k), bname)? {
            ExtVerdict::Member { extension } => {
                check_extension(&x, &extension, a, b, k).map_err(|e| format!("query {q}: {e}"))?;
                members += 1;
            }
            ExtVerdict::NonMember { witness } => {
                check_witness(&x, &witness, a, b, k).map_err(|e| format!("query {q}: {e}"))?;
                non_members += 1;
            }
        }
    }
    Ok(format!(
        "500/500 certificates re-verified ({members} extensions, {non_members} witnesses)"
    ))
}

fn main() {
    let criteria: [(&str, fn() -> Check, Option<Duration>); 9] = [
        (
            "square-cone collapse",
            criterion_1,
            Some(Duration::from_secs(60)),
        ),
        ("EB equivalence", criterion_2, None),
        ("non-termination for skewed phi", criterion_3, None),
        ("k=1 collapse", criterion_4, None),
        (
            "facet hull commutation corpus",
            criterion_5,
            Some(Duration::from_secs(10)),
        ),
        ("omega interiority", criterion_6, None),
        (
            "qutrit counterexample",
            criterion_7,
            Some(Duration::from_secs(30)),
        ),
        ("dual hierarchy", criterion_8, None),
        ("certificate soundness", criterion_9, None),
    ];
    let mut failures = 0;
    for (i, (name, run, limit)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let mut result = run();
        let elapsed = start.elapsed();
        if let (Ok(msg), Some(limit)) = (&result, limit) {
            if elapsed > *limit {
                result = Err(format!("{msg}, but took {elapsed:.1?} (limit {limit:?})"));
            }
        }
        match result {
            Ok(msg) => println!("PASS criterion {} {name}: {msg} [{elapsed:.1?}]", i + 1),
            Err(msg) => {
                failures += 1;
                println!("FAIL criterion {} {name}: {msg} [{elapsed:.1?}]", i + 1);
            }
        }
    }
    println!("acceptance: {}/9 criteria passed", 9 - failures);
    if failures > 0 {
        std::process::exit(1);
    }
}

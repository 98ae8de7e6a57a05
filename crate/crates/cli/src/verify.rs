//! Verification checks over parameter grids.

use std::collections::BTreeMap;
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use staircase::complex::{realize, staircase_from_steps};
use staircase::falg::{class_add, class_sum, epsilon_of, factors, order_i, order_j, polygon_lemma, ClassExpr, Mode};
use staircase::knots::{cable_class, cable_seq, k_ij, kij_proof, knot_class, torus_seq};
use staircase::laurent::{
    cable_alexander, cable_closed_form, check_cable_family, lspace_gaps, torus_alexander, CableSign,
};
use staircase::seq::seq_normalize;
use staircase::simplify::{
    change_basis, decompose_complex, epsilon, reduced_representative, tau, BasisChange, Outcome, SummandKind,
};
use staircase::{BifilteredComplex, StepSequence};

use crate::Status;

pub const CHECKS: [&str; 9] =
    ["cable-poly", "cable-stairs", "box", "polygon", "order-i", "order-j", "kij-classes", "theorem-order", "properties"];

/// Grid flags; unset fields take per-check defaults.
#[derive(Clone, Debug, Default)]
pub struct Grid {
    pub p_max: Option<i64>,
    pub m_max: Option<i64>,
    pub a: Option<Vec<i64>>,
    pub b: Option<Vec<i64>>,
    pub max_entry: Option<i64>,
    pub i_max: Option<i64>,
    pub j_range: Option<(i64, i64)>,
    pub max_n: Option<u32>,
    pub cases: Option<usize>,
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "lowercase")]
pub enum InstanceOutcome {
    Pass { detail: String },
    Fail { detail: String },
    Undecided { reason: String },
    /// Outside the family the check applies to; listed, not run.
    Excluded { reason: String },
}

#[derive(Clone, Debug, Serialize)]
pub struct Instance {
    pub params: BTreeMap<String, Value>,
    #[serde(flatten)]
    pub outcome: InstanceOutcome,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub check: String,
    pub grid: BTreeMap<String, Value>,
    pub instances: Vec<Instance>,
    /// Left out of JSON unless requested, so that reports are reproducible.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_ms: Option<u128>,
    #[serde(skip)]
    pub elapsed_ms: u128,
}

impl VerifyReport {
    pub fn count(&self, f: impl Fn(&InstanceOutcome) -> bool) -> usize {
        self.instances.iter().filter(|i| f(&i.outcome)).count()
    }

    pub fn status(&self) -> Status {
        if self.count(|o| matches!(o, InstanceOutcome::Fail { .. })) > 0 {
            Status::Fail
        } else if self.count(|o| matches!(o, InstanceOutcome::Undecided { .. })) > 0 {
            Status::Undecided
        } else {
            Status::Pass
        }
    }

    pub fn summary(&self) -> String {
        format!(
            "{}: {} instances, {} pass, {} fail, {} undecided, {} excluded ({:.2} s)",
            self.check,
            self.instances.len(),
            self.count(|o| matches!(o, InstanceOutcome::Pass { .. })),
            self.count(|o| matches!(o, InstanceOutcome::Fail { .. })),
            self.count(|o| matches!(o, InstanceOutcome::Undecided { .. })),
            self.count(|o| matches!(o, InstanceOutcome::Excluded { .. })),
            self.elapsed_ms as f64 / 1000.0
        )
    }

    pub fn text(&self) -> String {
        let mut out = self.summary();
        for inst in &self.instances {
            let params: Vec<String> = inst.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
            let (tag, msg) = match &inst.outcome {
                InstanceOutcome::Pass { detail } => ("pass", detail),
                InstanceOutcome::Fail { detail } => ("FAIL", detail),
                InstanceOutcome::Undecided { reason } => ("undecided", reason),
                InstanceOutcome::Excluded { reason } => ("excluded", reason),
            };
            out.push_str(&format!("\n  {tag:<9} {}  {msg}", params.join(" ")));
        }
        out
    }
}

type Params = BTreeMap<String, Value>;

fn params(pairs: &[(&str, Value)]) -> Params {
    pairs.iter().map(|(k, v)| (k.to_string(), v.clone())).collect()
}

fn seq(v: &[i64]) -> StepSequence {
    StepSequence::new(v.to_vec())
}

fn pass(detail: impl Into<String>) -> InstanceOutcome {
    InstanceOutcome::Pass { detail: detail.into() }
}

fn fail(detail: impl Into<String>) -> InstanceOutcome {
    InstanceOutcome::Fail { detail: detail.into() }
}

fn undecided(reason: impl Into<String>) -> InstanceOutcome {
    InstanceOutcome::Undecided { reason: reason.into() }
}

/// Errors from the engine count as failures of the instance.
fn guard(f: impl FnOnce() -> staircase::Result<InstanceOutcome>) -> InstanceOutcome {
    f().unwrap_or_else(|e| fail(format!("error: {e}")))
}

fn run_grid<P: Sync>(points: Vec<P>, label: impl Fn(&P) -> Params + Sync, f: impl Fn(&P) -> InstanceOutcome + Sync) -> Vec<Instance> {
    points.par_iter().map(|p| Instance { params: label(p), outcome: f(p) }).collect()
}

/// `[(1, a)^p, 1, a + c]`.
pub fn ladder(a: i64, p: i64, c: i64) -> StepSequence {
    let mut v: Vec<i64> = (0..p).flat_map(|_| [1, a]).collect();
    v.extend([1, a + c]);
    StepSequence::new(v)
}

fn signs() -> [CableSign; 2] {
    [CableSign::Plus, CableSign::Minus]
}

fn cable_points(p_max: i64, m_max: i64) -> Vec<(i64, i64, CableSign)> {
    (2..=p_max).flat_map(|p| (1..=m_max).flat_map(move |m| signs().map(|s| (p, m, s)))).collect()
}

fn cable_label(&(p, m, s): &(i64, i64, CableSign)) -> Params {
    params(&[("p", json!(p)), ("m", json!(m)), ("sign", json!(s.to_string()))])
}

fn cable_poly(g: &Grid) -> (Params, Vec<Instance>) {
    let (p_max, m_max) = (g.p_max.unwrap_or(5), g.m_max.unwrap_or(4));
    let grid = params(&[("p", json!([2, p_max])), ("m", json!([1, m_max])), ("sign", json!(["+", "-"]))]);
    let run = |&(p, m, s): &(i64, i64, CableSign)| {
        guard(|| {
            let l = match check_cable_family(p, m, s) {
                Ok(l) => l,
                Err(e) => return Ok(InstanceOutcome::Excluded { reason: e.to_string() }),
            };
            let closed = cable_closed_form(p, m, s)?.normalized();
            let product = cable_alexander(&torus_alexander(p, p + 1)?, m, l)?.normalized();
            Ok(if closed == product {
                pass(format!("{} terms, degree {}", closed.term_count(), closed.max_exponent().unwrap_or(0)))
            } else {
                fail(format!("closed form {closed} differs from product {product}"))
            })
        })
    };
    (grid, run_grid(cable_points(p_max, m_max), cable_label, run))
}

fn cable_stairs(g: &Grid) -> (Params, Vec<Instance>) {
    let (p_max, m_max) = (g.p_max.unwrap_or(4), g.m_max.unwrap_or(3));
    let grid = params(&[("p", json!([2, p_max])), ("m", json!([1, m_max])), ("sign", json!(["+", "-"]))]);
    let run = |&(p, m, s): &(i64, i64, CableSign)| {
        guard(|| {
            if let Err(e) = check_cable_family(p, m, s) {
                return Ok(InstanceOutcome::Excluded { reason: e.to_string() });
            }
            let x = cable_seq(p, m, s);
            let from_seq = cable_class(p, m, s)?;
            let gaps = lspace_gaps(&cable_closed_form(p, m, s)?)?;
            let from_poly = StepSequence::new(gaps.gaps);
            if from_seq != from_poly {
                return Ok(fail(format!("sequence route {from_seq} but polynomial route {from_poly}")));
            }
            if m == 1 && s == CableSign::Plus {
                let t = torus_seq(p);
                let torus = seq_normalize(&t[..t.len() / 2]);
                if torus != from_seq {
                    return Ok(fail(format!("m = 1 gives {from_seq}, torus sequence gives {torus}")));
                }
            }
            Ok(pass(format!("{from_seq} from {} raw entries", x.len())))
        })
    };
    (grid, run_grid(cable_points(p_max, m_max), cable_label, run))
}

fn box_instance(a: &StepSequence, b: &StepSequence) -> InstanceOutcome {
    guard(|| {
        let expect = a.concat(b);
        let t = realize(a)?.tensor(&realize(b)?);
        let d = match decompose_complex(&t)? {
            Outcome::Decided(d) => d,
            Outcome::Undecided(r) => return Ok(undecided(r)),
        };
        let boxes = d.count(SummandKind::Box);
        let want = a.len() * b.len();
        if boxes != want || d.acyclics.len() != want || d.acyclics.iter().any(|(c, _)| c.len() != 4) {
            return Ok(fail(format!("summands {:?}, expected {want} boxes", d.kinds())));
        }
        let core_steps = match reduced_representative(&d.core)? {
            Outcome::Decided(s) => s,
            Outcome::Undecided(r) => return Ok(undecided(r)),
        };
        let stair = staircase_from_steps(&expect)?;
        if core_steps != expect || d.core.filtration_multiset() != stair.filtration_multiset() {
            return Ok(fail(format!("core is {core_steps}, expected staircase {expect}")));
        }
        match reduced_representative(&t)? {
            Outcome::Decided(r) if r == expect => {}
            Outcome::Decided(r) => return Ok(fail(format!("reduced representative {r}, expected {expect}"))),
            Outcome::Undecided(r) => return Ok(undecided(r)),
        }
        Ok(pass(format!("core {expect}, {boxes} box summands")))
    })
}

fn box_check(g: &Grid) -> (Params, Vec<Instance>) {
    let label = |(a, b): &(StepSequence, StepSequence)| {
        params(&[("a", json!(a.entries())), ("b", json!(b.entries()))])
    };
    if let (Some(a), Some(b)) = (&g.a, &g.b) {
        let grid = params(&[("a", json!(a)), ("b", json!(b))]);
        let points = vec![(seq(a), seq(b))];
        return (grid, run_grid(points, label, |(a, b)| box_instance(a, b)));
    }
    let e = g.max_entry.unwrap_or(4);
    let grid = params(&[("a_len", json!(2)), ("b_len", json!(1)), ("max_entry", json!(e))]);
    let mut points = Vec::new();
    for a1 in 1..=e {
        for a2 in 1..=e {
            for b1 in a1..=a2 {
                points.push((seq(&[a1, a2]), seq(&[b1])));
            }
        }
    }
    (grid, run_grid(points, label, |(a, b)| box_instance(a, b)))
}

fn polygon_check(g: &Grid) -> (Params, Vec<Instance>) {
    let p_max = g.p_max.unwrap_or(2);
    let grid = params(&[
        ("a", json!([1, 2])),
        ("r", json!(1)),
        ("p1", json!([1, p_max])),
        ("q", json!(["p1", 2])),
        ("c1", json!([1, 2])),
        ("d", json!([0, "c1"])),
    ]);
    let mut points = Vec::new();
    for a in 1..=2 {
        for p in 1..=p_max {
            for q in p..=p.max(2) {
                for c in 1..=2 {
                    for d in 0..=c {
                        points.push((a, p, q, c, d));
                    }
                }
            }
        }
    }
    let label = |&(a, p, q, c, d): &(i64, i64, i64, i64, i64)| {
        params(&[("a", json!(a)), ("p1", json!(p)), ("q", json!(q)), ("c1", json!(c)), ("d", json!(d))])
    };
    let run = |&(a, p, q, c, d): &(i64, i64, i64, i64, i64)| {
        guard(|| {
            let (x, y) = (ladder(a, p, c), ladder(a, q, d));
            let expect = x.concat(&y);
            if polygon_lemma(&x, &y).is_none() {
                return Ok(fail(format!("lemma matcher rejects {x} + {y}")));
            }
            let (cx, cy) = (ClassExpr::single(x.clone()), ClassExpr::single(y.clone()));
            let fast = class_add(&cx, &cy)?;
            let general = class_sum(&cx.plus(&cy), Mode::Pipeline)?;
            match (fast, general) {
                (Outcome::Decided(f), Outcome::Decided(s)) if f == expect && s == expect => {}
                (Outcome::Decided(f), Outcome::Decided(s)) => {
                    return Ok(fail(format!("fast path {f}, general path {s}, expected {expect}")))
                }
                (_, Outcome::Undecided(r)) | (Outcome::Undecided(r), _) => return Ok(undecided(r)),
            }
            let t = realize(&x)?.tensor(&realize(&y)?);
            let dec = match decompose_complex(&t)? {
                Outcome::Decided(d) => d,
                Outcome::Undecided(r) => return Ok(undecided(r)),
            };
            // the two outer blocks become polygons once d > 0; d = 0 is a box case
            let sides = 4 * (p as usize + 1);
            let want_polygons = if d > 0 { 2 } else { 0 };
            let polygons = dec.count(SummandKind::Polygon(sides));
            let boxes = dec.count(SummandKind::Box);
            let core_ok = dec.core.len() == 2 * expect.len() + 1;
            if polygons != want_polygons || boxes + polygons != dec.acyclics.len() || !core_ok {
                return Ok(fail(format!(
                    "core of {} generators, summands {:?}; expected {want_polygons} polygons on {sides} generators",
                    dec.core.len(),
                    dec.kinds()
                )));
            }
            Ok(pass(format!("{expect}; {polygons} polygons on {sides} generators, {boxes} boxes")))
        })
    };
    (grid, run_grid(points, label, run))
}

/// `ε(x - n·y)` for `n = 1..=max_n`, each required to be 1.
fn epsilon_ladder(x: &ClassExpr, y: &ClassExpr, max_n: u32, mode: Mode) -> staircase::Result<InstanceOutcome> {
    let mut vias = Vec::new();
    for n in 1..=max_n {
        let e = x.minus(&y.scaled(n as i64));
        match epsilon_of(&e, mode)? {
            Outcome::Decided(v) if v.epsilon == 1 => vias.push(via_name(&v.via)),
            Outcome::Decided(v) => return Ok(fail(format!("epsilon = {} at n = {n}", v.epsilon))),
            Outcome::Undecided(r) => return Ok(undecided(format!("n = {n}: {r}"))),
        }
    }
    vias.dedup();
    Ok(pass(format!("epsilon = 1 for n <= {max_n} via {}", vias.join(", "))))
}

fn via_name(v: &staircase::falg::EpsilonVia) -> String {
    serde_json::to_value(v).ok().and_then(|j| j["via"].as_str().map(str::to_string)).unwrap_or_default()
}

fn random_positive(rng: &mut ChaCha8Rng, max_len: usize, max_entry: i64) -> StepSequence {
    let len = rng.gen_range(1..=max_len);
    StepSequence::new((0..len).map(|_| rng.gen_range(1..=max_entry)).collect::<Vec<_>>())
}

fn order_i_check(g: &Grid) -> (Params, Vec<Instance>) {
    let (e, cases, max_n) = (g.max_entry.unwrap_or(4), g.cases.unwrap_or(12), g.max_n.unwrap_or(3));
    let grid = params(&[
        ("max_entry", json!(e)),
        ("cases", json!(cases)),
        ("max_n", json!(max_n)),
        ("seed", json!(g.seed)),
    ]);
    let mut rng = ChaCha8Rng::seed_from_u64(g.seed);
    let mut points = Vec::new();
    while points.len() < cases {
        let (a, b) = (random_positive(&mut rng, 2, e), random_positive(&mut rng, 2, e));
        if order_i(&a, &b) && !points.contains(&(a.clone(), b.clone())) {
            points.push((a, b));
        }
    }
    let label = |(a, b): &(StepSequence, StepSequence)| {
        params(&[("a", json!(a.entries())), ("b", json!(b.entries()))])
    };
    let run = |(a, b): &(StepSequence, StepSequence)| {
        guard(|| epsilon_ladder(&ClassExpr::single(a.clone()), &ClassExpr::single(b.clone()), max_n, Mode::Pipeline))
    };
    (grid, run_grid(points, label, run))
}

fn order_j_check(g: &Grid) -> (Params, Vec<Instance>) {
    let max_n = g.max_n.unwrap_or(3);
    let grid = params(&[
        ("a", json!([1, 2])),
        ("p", json!([0, 1])),
        ("q", json!(["p", 2])),
        ("c", json!([1, 2])),
        ("d", json!([0, "c"])),
        ("max_r", json!(max_n)),
    ]);
    let mut points = Vec::new();
    for a in 1..=2 {
        for p in 0..=1 {
            for q in p..=2 {
                for c in 1..=2 {
                    for d in 0..=c {
                        points.push((a, p, q, c, d));
                    }
                }
            }
        }
    }
    let label = |&(a, p, q, c, d): &(i64, i64, i64, i64, i64)| {
        params(&[("a", json!(a)), ("p", json!(p)), ("q", json!(q)), ("c", json!(c)), ("d", json!(d))])
    };
    let run = |&(a, p, q, c, d): &(i64, i64, i64, i64, i64)| {
        if !(q > p || (q == p && d < c)) {
            return InstanceOutcome::Excluded { reason: "ordering hypothesis fails".into() };
        }
        guard(|| {
            let (x, y) = (ladder(a, p, c), ladder(a, q, d));
            if order_j(&x, &y).is_none() {
                return Ok(fail(format!("lemma matcher rejects {x} >> {y}")));
            }
            epsilon_ladder(&ClassExpr::single(x), &ClassExpr::single(y), max_n, Mode::Pipeline)
        })
    };
    (grid, run_grid(points, label, run))
}

fn j_points(g: &Grid) -> (i64, (i64, i64), Vec<(i64, i64)>) {
    let i_max = g.i_max.unwrap_or(2);
    let (lo, hi) = g.j_range.unwrap_or((-1, 1));
    let pts = (0..=i_max).flat_map(|i| (lo..=hi).map(move |j| (i, j))).collect();
    (i_max, (lo, hi), pts)
}

fn kij_classes(g: &Grid) -> (Params, Vec<Instance>) {
    let (i_max, (lo, hi), pts) = j_points(g);
    let grid = params(&[("i", json!([0, i_max])), ("j", json!([lo, hi]))]);
    let label = |&(i, j): &(i64, i64)| params(&[("i", json!(i)), ("j", json!(j))]);
    let run = |&(i, j): &(i64, i64)| {
        if k_ij(i, j).is_err() {
            return InstanceOutcome::Excluded { reason: "outside the family".into() };
        }
        guard(|| {
            let proof = kij_proof(i, j)?;
            let class = knot_class(&k_ij(i, j)?)?;
            let summary = format!(
                "case {}: cancelled {}, remaining {}, dominant {}",
                proof.case,
                proof.cancelled.len(),
                proof.remaining,
                proof.dominant
            );
            if i == 0 && j <= 1 {
                let want = if j == 0 { StepSequence::empty() } else { seq(&[2]) };
                return Ok(match class_sum(&class, Mode::Pipeline)? {
                    Outcome::Decided(s) if s == want => pass(format!("{summary}; pipeline class {want}")),
                    Outcome::Decided(s) => fail(format!("pipeline class {s}, expected {want}")),
                    Outcome::Undecided(r) => undecided(r),
                });
            }
            Ok(pass(summary))
        })
    };
    (grid, run_grid(pts, label, run))
}

/// Largest two-factor tensor product used to cross-check a lemma verdict.
const CROSS_CHECK_LIMIT: usize = 200;

fn family_order(g: &Grid) -> (Params, Vec<Instance>) {
    let (i_max, (lo, hi), pts) = j_points(g);
    let max_n = g.max_n.unwrap_or(3);
    let grid = params(&[
        ("i", json!([0, i_max])),
        ("j", json!([lo, hi])),
        ("max_n", json!(max_n)),
        ("cross_check_limit", json!(CROSS_CHECK_LIMIT)),
    ]);
    let valid: Vec<(i64, i64)> = pts.into_iter().filter(|&(i, j)| k_ij(i, j).is_ok()).collect();
    let mut pairs = Vec::new();
    for (k, &lo) in valid.iter().enumerate() {
        for &hi in &valid[k + 1..] {
            pairs.push((lo, hi));
        }
    }
    let label = |&((i, j), (i2, j2)): &((i64, i64), (i64, i64))| {
        params(&[("lower", json!([i, j])), ("upper", json!([i2, j2]))])
    };
    let run = |&((i, j), (i2, j2)): &((i64, i64), (i64, i64))| {
        guard(|| {
            let lower = knot_class(&k_ij(i, j)?)?;
            let upper = knot_class(&k_ij(i2, j2)?)?;
            let verdict = epsilon_ladder(&upper, &lower, max_n, Mode::Auto)?;
            let InstanceOutcome::Pass { detail } = verdict else { return Ok(verdict) };
            let mut checked = Vec::new();
            for n in 1..=max_n {
                let e = upper.minus(&lower.scaled(n as i64));
                let f = factors(&e)?;
                if let [x, y] = &f[..] {
                    if x.len() * y.len() <= CROSS_CHECK_LIMIT {
                        match epsilon(&x.tensor(y))? {
                            Outcome::Decided(1) => checked.push(n),
                            Outcome::Decided(v) => return Ok(fail(format!("tensor product gives epsilon {v} at n = {n}"))),
                            Outcome::Undecided(r) => return Ok(undecided(format!("tensor cross-check at n = {n}: {r}"))),
                        }
                    }
                }
            }
            Ok(match checked.as_slice() {
                [] => pass(detail),
                ns => pass(format!("{detail}; tensor product agrees at n = {ns:?}")),
            })
        })
    };
    (grid, run_grid(pairs, label, run))
}

fn check_all(cs: &[&BifilteredComplex]) -> staircase::Result<()> {
    cs.iter().try_for_each(|c| c.check())
}

fn decided<T>(o: Outcome<T>, what: &str) -> Result<T, InstanceOutcome> {
    match o {
        Outcome::Decided(v) => Ok(v),
        Outcome::Undecided(r) => Err(undecided(format!("{what}: {r}"))),
    }
}

fn property_case(seed: u64, case: u64) -> InstanceOutcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_mul(0x9e37_79b9_7f4a_7c15).wrapping_add(case));
    let a = random_positive(&mut rng, 3, 4);
    let b = random_positive(&mut rng, 2, 4);
    let raw: Vec<i64> = (0..rng.gen_range(0..8)).map(|_| rng.gen_range(-3..=3)).collect();
    let mut body = || -> staircase::Result<Result<String, InstanceOutcome>> {
        let ca = staircase_from_steps(&a)?;
        let cb = staircase_from_steps(&b)?;
        let t = ca.tensor(&cb);
        let dual = ca.dual();
        let mut changed = t.clone();
        let ids: Vec<String> = t.generators().iter().map(|g| g.id.clone()).collect();
        let mut applied = 0;
        for _ in 0..64 {
            let pick: Vec<&String> = ids.choose_multiple(&mut rng, 2).collect();
            let bc = BasisChange { n: pick[0].clone(), l: pick[1].clone() };
            if let Ok(next) = change_basis(&changed, &bc) {
                changed = next;
                applied += 1;
                if applied == 4 {
                    break;
                }
            }
        }
        check_all(&[&ca, &cb, &t, &dual, &changed])?;
        let ea = match decided(epsilon(&ca)?, "epsilon") {
            Ok(v) => v,
            Err(o) => return Ok(Err(o)),
        };
        let ed = match decided(epsilon(&dual)?, "epsilon of dual") {
            Ok(v) => v,
            Err(o) => return Ok(Err(o)),
        };
        if ed != -ea {
            return Ok(Err(fail(format!("epsilon {ea} but dual {ed}"))));
        }
        match decided(epsilon(&ca.tensor(&dual))?, "epsilon of C ⊗ C*") {
            Ok(0) => {}
            Ok(v) => return Ok(Err(fail(format!("epsilon of C ⊗ C* is {v}")))),
            Err(o) => return Ok(Err(o)),
        }
        let (ta, tb) = (tau(&ca)?, tau(&cb)?);
        if tau(&t)? != ta + tb || tau(&dual)? != -ta || tau(&changed)? != ta + tb {
            return Ok(Err(fail("tau is not additive or not negated by the dual")));
        }
        match decided(reduced_representative(&ca)?, "reduced representative") {
            Ok(r) if r == a => {}
            Ok(r) => return Ok(Err(fail(format!("reduced representative {r} of staircase {a}")))),
            Err(o) => return Ok(Err(o)),
        }
        let once = seq_normalize(&raw);
        if seq_normalize(once.entries()) != once {
            return Ok(Err(fail(format!("normalizing {raw:?} is not idempotent"))));
        }
        for c in [&t, &changed, &dual] {
            let s = c.to_json();
            if BifilteredComplex::from_json(&s)?.to_json() != s {
                return Ok(Err(fail("serialization does not round-trip")));
            }
        }
        Ok(Ok(format!("{applied} basis changes")))
    };
    match body() {
        Ok(Ok(detail)) => pass(detail),
        Ok(Err(o)) => o,
        Err(e) => fail(format!("error: {e}")),
    }
}

fn properties(g: &Grid) -> (Params, Vec<Instance>) {
    let cases = g.cases.unwrap_or(200);
    let grid = params(&[("cases", json!(cases)), ("seed", json!(g.seed))]);
    let points: Vec<u64> = (0..cases as u64).collect();
    let seed = g.seed;
    (grid, run_grid(points, |&k| params(&[("case", json!(k))]), |&k| property_case(seed, k)))
}

/// Runs a named check. Unknown names are `None`.
pub fn run(check: &str, grid: &Grid) -> Option<VerifyReport> {
    let start = Instant::now();
    let (g, instances) = match check {
        "cable-poly" => cable_poly(grid),
        "cable-stairs" => cable_stairs(grid),
        "box" => box_check(grid),
        "polygon" => polygon_check(grid),
        "order-i" => order_i_check(grid),
        "order-j" => order_j_check(grid),
        "kij-classes" => kij_classes(grid),
        "theorem-order" => family_order(grid),
        "properties" => properties(grid),
        _ => return None,
    };
    Some(VerifyReport {
        check: check.to_string(),
        grid: g,
        instances,
        wall_ms: None,
        elapsed_ms: start.elapsed().as_millis(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_three_against_two_box() {
        let g = Grid { a: Some(vec![1, 3]), b: Some(vec![2]), ..Grid::default() };
        let r = run("box", &g).unwrap();
        assert_eq!(r.instances.len(), 1);
        assert_eq!(r.instances[0].outcome, pass("core [1, 3, 2], 2 box summands"));
    }

    #[test]
    fn unknown_check() {
        assert!(run("nope", &Grid::default()).is_none());
    }

    #[test]
    fn excluded_points_are_listed() {
        let g = Grid { i_max: Some(1), j_range: Some((-1, 0)), ..Grid::default() };
        let r = run("kij-classes", &g).unwrap();
        assert_eq!(r.instances.len(), 4);
        assert!(matches!(r.instances[0].outcome, InstanceOutcome::Excluded { .. }));
        assert_eq!(r.status(), Status::Pass);
    }

    #[test]
    fn degenerate_cable_is_listed() {
        let g = Grid { p_max: Some(2), m_max: Some(1), ..Grid::default() };
        let r = run("cable-poly", &g).unwrap();
        assert_eq!(r.instances.len(), 2);
        assert!(matches!(r.instances[1].outcome, InstanceOutcome::Excluded { .. }));
        assert_eq!(r.status(), Status::Pass);
    }

    #[test]
    fn reports_are_reproducible() {
        let g = Grid { cases: Some(6), ..Grid::default() };
        let a = serde_json::to_string(&run("properties", &g).unwrap()).unwrap();
        let b = serde_json::to_string(&run("properties", &g).unwrap()).unwrap();
        assert_eq!(a, b);
    }
}

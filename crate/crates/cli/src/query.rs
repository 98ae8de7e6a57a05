//! One-shot queries on knot expressions.

use std::cmp::Ordering;

use anyhow::Result;
use serde_json::{json, Value};

use staircase::falg::{
    arch_compare, class_compare, class_sum, epsilon_of, factors, pipeline_reduce, ArchCertificate, ClassExpr, Mode,
    Relation,
};
use staircase::knots::{knot_alexander, knot_class, KnotExpr};
use staircase::simplify::{LocalInvariants, Outcome};
use staircase::BifilteredComplex;

use crate::Status;

/// A query result in both renderings.
#[derive(Clone, Debug)]
pub struct Answer {
    pub status: Status,
    pub text: String,
    pub json: Value,
}

fn doc(command: &str, exprs: &[&KnotExpr], fields: Value) -> Value {
    let mut v = json!({ "command": command });
    let names: Vec<String> = exprs.iter().map(|e| e.to_string()).collect();
    match names.as_slice() {
        [one] => v["expr"] = json!(one),
        many => v["exprs"] = json!(many),
    }
    if let (Value::Object(out), Value::Object(add)) = (&mut v, fields) {
        out.extend(add);
    }
    v
}

fn decided(command: &str, exprs: &[&KnotExpr], text: String, fields: Value) -> Answer {
    Answer { status: Status::Pass, text, json: doc(command, exprs, fields) }
}

fn open(command: &str, exprs: &[&KnotExpr], reason: String) -> Answer {
    Answer {
        status: Status::Undecided,
        text: format!("undecided: {reason}"),
        json: doc(command, exprs, json!({ "undecided": reason })),
    }
}

pub fn alex(e: &KnotExpr) -> Result<Answer> {
    let d = knot_alexander(e)?;
    let terms: Vec<Value> = d.terms().map(|(k, c)| json!([k, c.to_string()])).collect();
    Ok(decided("alex", &[e], d.to_string(), json!({ "alexander": d.to_string(), "terms": terms })))
}

pub fn steps(e: &KnotExpr) -> Result<Answer> {
    let class = knot_class(e)?;
    Ok(match class_sum(&class, Mode::Auto)? {
        Outcome::Decided(s) => decided(
            "steps",
            &[e],
            s.to_string(),
            json!({ "class": class.to_string(), "steps": s.entries() }),
        ),
        Outcome::Undecided(r) => open("steps", &[e], r),
    })
}

pub fn tau(e: &KnotExpr) -> Result<Answer> {
    let class = knot_class(e)?;
    let t = class.tau();
    Ok(decided("tau", &[e], t.to_string(), json!({ "class": class.to_string(), "tau": t })))
}

pub fn epsilon(e: &KnotExpr) -> Result<Answer> {
    let class = knot_class(e)?;
    Ok(match epsilon_of(&class, Mode::Auto)? {
        Outcome::Decided(v) => {
            let mut fields = serde_json::to_value(&v)?;
            fields["class"] = json!(class.to_string());
            decided("epsilon", &[e], v.epsilon.to_string(), fields)
        }
        Outcome::Undecided(r) => open("epsilon", &[e], r),
    })
}

pub fn a12(e: &KnotExpr) -> Result<Answer> {
    let class = knot_class(e)?;
    Ok(match class_sum(&class, Mode::Auto)? {
        Outcome::Decided(s) => {
            let inv = LocalInvariants::of_steps(&s);
            let show = |x: Option<i64>| x.map(|v| v.to_string()).unwrap_or_else(|| "undefined".into());
            let text = format!("epsilon = {}\na1 = {}\na2 = {}", inv.epsilon, show(inv.a1), show(inv.a2));
            let mut fields = serde_json::to_value(inv)?;
            fields["steps"] = json!(s.entries());
            decided("a12", &[e], text, fields)
        }
        Outcome::Undecided(r) => open("a12", &[e], r),
    })
}

pub fn compare(a: &KnotExpr, b: &KnotExpr) -> Result<Answer> {
    let (ca, cb) = (knot_class(a)?, knot_class(b)?);
    Ok(match class_compare(&ca, &cb)? {
        Outcome::Decided(o) => {
            let (word, sym) = match o {
                Ordering::Less => ("less", "<"),
                Ordering::Equal => ("equal", "="),
                Ordering::Greater => ("greater", ">"),
            };
            decided("compare", &[a, b], format!("{a} {sym} {b}"), json!({ "relation": word }))
        }
        Outcome::Undecided(r) => open("compare", &[a, b], r),
    })
}

pub fn arch(a: &KnotExpr, b: &KnotExpr, max_n: u32) -> Result<Answer> {
    let v = arch_compare(&knot_class(a)?, &knot_class(b)?, max_n)?;
    let relation = serde_json::to_value(v.relation)?.as_str().unwrap_or_default().to_string();
    let basis = match &v.certificate {
        Some(ArchCertificate::LemmaOrderI) => "lemma order-i".to_string(),
        Some(ArchCertificate::LemmaOrderJ(_)) => "lemma order-j".to_string(),
        Some(ArchCertificate::EpsilonSample { n_max }) => format!("sampled, n <= {n_max}"),
        Some(ArchCertificate::ExactCancellation) => "exact cancellation".to_string(),
        None => "no certificate".to_string(),
    };
    let status = if v.relation == Relation::Undecided { Status::Undecided } else { Status::Pass };
    Ok(Answer {
        status,
        text: format!("{relation} ({basis})"),
        json: doc("arch", &[a, b], serde_json::to_value(&v)?),
    })
}

/// The tensor product of the factors of `e`, or with `reduced` its reduced
/// representative.
pub fn dump(e: &KnotExpr, reduced: bool) -> Result<Answer> {
    let class: ClassExpr = knot_class(e)?;
    let complex = if reduced {
        match pipeline_reduce(&class)? {
            Outcome::Decided((_, core)) => core,
            Outcome::Undecided(r) => return Ok(open("dump", &[e], r)),
        }
    } else {
        factors(&class)?.iter().fold(BifilteredComplex::unknot(), |acc, c| acc.tensor(c))
    };
    Ok(Answer { status: Status::Pass, text: complex.to_json(), json: complex.to_json_value() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_expr;

    fn q(text: &str) -> KnotExpr {
        parse_expr(text).unwrap()
    }

    #[test]
    fn spec_queries() {
        assert_eq!(epsilon(&q("S[1,2]")).unwrap().text, "1");
        assert_eq!(tau(&q("T(3,4) + T(3,4)")).unwrap().text, "6");
        let a = arch(&q("K(0,1)"), &q("S[2,2]"), 3).unwrap();
        assert_eq!(a.text, "equivalent (sampled, n <= 3)");
        assert_eq!(a.status, Status::Pass);
        assert_eq!(a.json["relation"], "equivalent");
    }

    #[test]
    fn steps_and_locals() {
        assert_eq!(steps(&q("T(3,4) - C(T(2,3);2,3)")).unwrap().text, "[]");
        assert_eq!(steps(&q("S[1,3] + S[2]")).unwrap().text, "[1, 3, 2]");
        let r = a12(&q("S[3,-1,-2,2]")).unwrap();
        assert_eq!(r.json["a1"], 3);
        assert!(r.json["a2"].is_null());
        assert_eq!(alex(&q("T(3,4)")).unwrap().text, "1 - t + t^3 - t^5 + t^6");
    }

    #[test]
    fn comparisons() {
        assert_eq!(compare(&q("T(3,4)"), &q("S[2]")).unwrap().json["relation"], "greater");
        assert_eq!(compare(&q("T(2,3)"), &q("S[1]")).unwrap().json["relation"], "equal");
    }

    #[test]
    fn dumps_are_canonical() {
        let d = dump(&q("T(3,4)"), false).unwrap();
        assert_eq!(BifilteredComplex::from_json(&d.text).unwrap().to_json(), d.text);
        assert_eq!(dump(&q("T(3,4) - T(3,4)"), true).unwrap().json["generators"].as_array().unwrap().len(), 1);
    }
}

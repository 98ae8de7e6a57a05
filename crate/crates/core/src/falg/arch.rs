use serde::Serialize;

use super::{epsilon_of, order_i, order_j, ClassExpr, Mode, OrderJMatch};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Relation {
    MuchLess,
    MuchGreater,
    Equivalent,
    Equal,
    Undecided,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ArchCertificate {
    LemmaOrderI,
    LemmaOrderJ(OrderJMatch),
    /// Bounded evidence from epsilon samples; never a proof.
    EpsilonSample { n_max: u32 },
    ExactCancellation,
}

/// One sampled `ε(X - n·Y)`; `lhs` names X.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub lhs: &'static str,
    pub n: u32,
    pub epsilon: Option<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ArchVerdict {
    pub relation: Relation,
    pub certificate: Option<ArchCertificate>,
    pub n_max: u32,
    pub witnesses: Vec<Witness>,
}

fn sample(x: &ClassExpr, y: &ClassExpr, n: u32, lhs: &'static str, mode: Mode) -> Result<Witness> {
    let e = x.minus(&y.scaled(n as i64));
    let epsilon = epsilon_of(&e, mode)?.decided().map(|v| v.epsilon);
    Ok(Witness { lhs, n, epsilon })
}

fn sign(e: &ClassExpr) -> Result<Option<i64>> {
    Ok(epsilon_of(e, Mode::Auto)?.decided().map(|v| v.epsilon))
}

/// Archimedean comparison of `|a|` and `|b|`. Lemma certificates are exact
/// and are cross-checked against tensor-product samples up to `n_max`;
/// otherwise the verdict rests on the samples alone.
pub fn arch_compare(a: &ClassExpr, b: &ClassExpr, n_max: u32) -> Result<ArchVerdict> {
    let verdict = |relation, certificate, witnesses| ArchVerdict { relation, certificate, n_max, witnesses };
    if a.minus(b).is_zero() {
        return Ok(verdict(Relation::Equal, Some(ArchCertificate::ExactCancellation), vec![]));
    }
    if let (Some(x), Some(y)) = (a.as_single(), b.as_single()) {
        let lemma = |x, y| match order_j(x, y) {
            Some(m) => Some(ArchCertificate::LemmaOrderJ(m)),
            None => order_i(x, y).then_some(ArchCertificate::LemmaOrderI),
        };
        let found = match (lemma(x, y), lemma(y, x)) {
            (Some(c), _) => Some((Relation::MuchGreater, c, a, b, "a")),
            (None, Some(c)) => Some((Relation::MuchLess, c, b, a, "b")),
            _ => None,
        };
        if let Some((relation, cert, big, small, lhs)) = found {
            let mut witnesses = Vec::new();
            for n in 1..=n_max {
                let w = sample(big, small, n, lhs, Mode::Pipeline)?;
                if w.epsilon.is_some_and(|e| e != 1) {
                    return Err(Error::Invariant(format!(
                        "{cert:?} claims {big} >> {small} but epsilon({big} - {n}*({small})) = {:?}",
                        w.epsilon
                    )));
                }
                witnesses.push(w);
            }
            return Ok(verdict(relation, Some(cert), witnesses));
        }
    }

    let (sa, sb) = match (sign(a)?, sign(b)?) {
        (Some(x), Some(y)) => (x, y),
        _ => return Ok(verdict(Relation::Undecided, None, vec![])),
    };
    match (sa, sb) {
        (0, 0) => return Ok(verdict(Relation::Equal, Some(ArchCertificate::ExactCancellation), vec![])),
        (0, _) => return Ok(verdict(Relation::MuchLess, Some(ArchCertificate::ExactCancellation), vec![])),
        (_, 0) => return Ok(verdict(Relation::MuchGreater, Some(ArchCertificate::ExactCancellation), vec![])),
        _ => {}
    }
    let (pa, pb) = (a.scaled(sa), b.scaled(sb));
    let mut witnesses = Vec::new();
    for n in 1..=n_max {
        witnesses.push(sample(&pa, &pb, n, "a", Mode::Auto)?);
        witnesses.push(sample(&pb, &pa, n, "b", Mode::Auto)?);
    }
    let all_pos = |lhs: &str| witnesses.iter().filter(|w| w.lhs == lhs).all(|w| w.epsilon == Some(1));
    let some_neg = |lhs: &str| witnesses.iter().any(|w| w.lhs == lhs && w.epsilon == Some(-1));
    let relation = if some_neg("a") && some_neg("b") {
        Relation::Equivalent
    } else if all_pos("a") {
        Relation::MuchGreater
    } else if all_pos("b") {
        Relation::MuchLess
    } else {
        Relation::Undecided
    };
    let cert = (relation != Relation::Undecided).then_some(ArchCertificate::EpsilonSample { n_max });
    Ok(verdict(relation, cert, witnesses))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seq::StepSequence;

    fn c(v: &[i64]) -> ClassExpr {
        ClassExpr::single(StepSequence::new(v.to_vec()))
    }

    #[test]
    fn lemma_certificates() {
        let v = arch_compare(&c(&[1, 1, 1, 2]), &c(&[1, 1, 1, 1, 1, 2]), 2).unwrap();
        assert_eq!(v.relation, Relation::MuchGreater);
        assert!(matches!(v.certificate, Some(ArchCertificate::LemmaOrderJ(OrderJMatch { a: 1, p: 1, q: 2, .. }))));
        let v = arch_compare(&c(&[1, 2]), &c(&[2, 2]), 3).unwrap();
        assert_eq!((v.relation, v.certificate), (Relation::MuchGreater, Some(ArchCertificate::LemmaOrderI)));
        assert_eq!(v.witnesses.len(), 3);
        let v = arch_compare(&c(&[2, 2]), &c(&[1, 2]), 1).unwrap();
        assert_eq!(v.relation, Relation::MuchLess);
    }

    #[test]
    fn equal_and_sampled() {
        assert_eq!(arch_compare(&c(&[1, 2]), &c(&[1, 2]), 3).unwrap().relation, Relation::Equal);
        let v = arch_compare(&c(&[2]), &c(&[2, 2]), 3).unwrap();
        assert_eq!(v.relation, Relation::Equivalent);
        assert_eq!(v.certificate, Some(ArchCertificate::EpsilonSample { n_max: 3 }));
    }

    #[test]
    fn serializes() {
        let v = arch_compare(&c(&[1, 2]), &c(&[2, 2]), 1).unwrap();
        let j = serde_json::to_value(&v).unwrap();
        assert_eq!(j["relation"], "much-greater");
        assert_eq!(j["certificate"]["kind"], "lemma-order-i");
        assert_eq!(j["n_max"], 1);
    }
}

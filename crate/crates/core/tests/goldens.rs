use staircase::complex::{realize, staircase_from_steps};
use staircase::knots::{k_ij, torus_seq};
use staircase::laurent::{lspace_gaps, torus_alexander};
use staircase::simplify::{decompose_complex, epsilon, reduced_representative, tau, Outcome, SummandKind};
use staircase::StepSequence;

fn seq(v: &[i64]) -> StepSequence {
    StepSequence::new(v.to_vec())
}

fn decided<T: std::fmt::Debug>(o: Outcome<T>) -> T {
    match o {
        Outcome::Decided(v) => v,
        Outcome::Undecided(r) => panic!("undecided: {r}"),
    }
}

#[test]
fn torus_three_four() {
    let gaps = lspace_gaps(&torus_alexander(3, 4).unwrap()).unwrap();
    assert_eq!(gaps.gaps, torus_seq(3)[..2].to_vec());
    let c = staircase_from_steps(&seq(&gaps.gaps)).unwrap();
    let levels: Vec<_> = c.generators().iter().map(|g| g.fl()).collect();
    assert_eq!(levels, [(0, 3), (1, 3), (1, 1), (3, 1), (3, 0)]);
    assert_eq!(c.arrows(), [(1, 0), (1, 2), (3, 2), (3, 4)]);
    assert_eq!(tau(&c).unwrap(), 3);
    assert_eq!(decided(epsilon(&c).unwrap()), 1);
}

#[test]
fn box_summands_of_a_three_step_tensor() {
    let t = staircase_from_steps(&seq(&[1, 3])).unwrap().tensor(&staircase_from_steps(&seq(&[2])).unwrap());
    assert_eq!(t.len(), 15);
    let d = decided(decompose_complex(&t).unwrap());
    assert_eq!(d.count(SummandKind::Box), 2);
    assert_eq!(d.acyclics.len(), 2);
    assert!(d.acyclics.iter().all(|(b, _)| b.len() == 4));
    assert_eq!(decided(reduced_representative(&d.core).unwrap()), seq(&[1, 3, 2]));
    assert_eq!(decided(reduced_representative(&t).unwrap()), seq(&[1, 3, 2]));
}

#[test]
fn polygon_summands() {
    let (x, y) = (seq(&[1, 1, 1, 1, 1, 3]), seq(&[1, 1, 1, 1, 1, 2]));
    let t = realize(&x).unwrap().tensor(&realize(&y).unwrap());
    let d = decided(decompose_complex(&t).unwrap());
    assert_eq!(d.count(SummandKind::Polygon(12)), 2);
    assert_eq!(d.count(SummandKind::Other), 0);
    assert_eq!(d.core.len(), 25);
    assert_eq!(decided(reduced_representative(&d.core).unwrap()), x.concat(&y));
}

#[test]
fn mixed_classes_realize() {
    for v in [&[3, -1, -2, 2][..], &[-3, 1, 2, -2]] {
        let c = realize(&seq(v)).unwrap();
        c.check().unwrap();
        assert_eq!(decided(reduced_representative(&c).unwrap()), seq(v), "{v:?}");
        assert_eq!(decided(epsilon(&c).unwrap()), v[0].signum());
    }
    assert!(realize(&seq(&[1, -1, 2])).is_err());
}

#[test]
fn first_family_members() {
    assert!(k_ij(0, 0).is_ok());
    assert!(k_ij(0, -1).is_err());
}

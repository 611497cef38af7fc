use super::*;
use crate::algebra::maps::fixed_point_expectation;
use crate::algebra::{CycNumber, MonomialMap};
use crate::cohomology::{class_equal, standard_cyclic_cocycle};
use crate::groups::{make_named_group, GroupTable};
use num_rational::Rational64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use smallvec::SmallVec;

type E = Element<CycNumber>;
type M = AlgebraMap<CycNumber>;

/// `C(G)` with translation and `u(g,h)(k) = ω(k⁻¹, g, h)`.
fn translation_action(w: &Cochain) -> AnomalousAction<CycNumber> {
    let g = w.group().clone();
    let n = g.order();
    let alg = multi_matrix(MultiMatrixAlgebra::from_dims(&vec![1; n]).unwrap());
    let alpha = g
        .elements()
        .map(|x| {
            M::from_phased(&alg, &alg, (0..n).map(|k| SmallVec::from_elem((g.mul(x, k), Phase::ZERO), 1)).collect())
                .unwrap()
        })
        .collect();
    let mut u = vec![];
    for x in g.elements() {
        for y in g.elements() {
            u.push(E::from_phases(&alg, (0..n).map(|k| (k, w.get(&[g.inv(k), x, y])))));
        }
    }
    AnomalousAction::new(g, alg, alpha, u).unwrap()
}

fn regular_conjugation(g: &Group) -> AnomalousAction<CycNumber> {
    let n = g.order();
    let mm = MultiMatrixAlgebra::full_matrix(n);
    let alg = multi_matrix(mm.clone());
    let alpha = g
        .elements()
        .map(|x| {
            let imgs = (0..alg.dim())
                .map(|l| {
                    let (_, i, j) = mm.entry(l);
                    SmallVec::from_elem((mm.index(0, g.mul(x, i), g.mul(x, j)), Phase::ZERO), 1)
                })
                .collect();
            M::from_phased(&alg, &alg, imgs).unwrap()
        })
        .collect();
    AnomalousAction::genuine(g.clone(), alg, alpha).unwrap()
}

#[test]
fn genuine_action_has_zero_anomaly() {
    let a = regular_conjugation(&make_named_group("S3").unwrap());
    assert!(validate_action(&a).unwrap().is_valid());
    assert!(extract_anomaly(&a).unwrap().is_zero());
}

#[test]
fn translation_action_reproduces_the_cocycle() {
    for (n, j) in [(2, 1), (3, 2), (4, 1)] {
        let w = standard_cyclic_cocycle(n, j).unwrap();
        let a = translation_action(&w);
        let r = validate_action(&a).unwrap();
        assert!(r.is_valid(), "{r:?}");
        assert_eq!(extract_anomaly(&a).unwrap(), w);
    }
}

#[test]
fn corrupted_unitary_breaks_composition() {
    let g = make_named_group("C2").unwrap();
    let mut a = regular_conjugation(&g);
    let swap = E::from_phases(&a.algebra, [(1, Phase::ZERO), (2, Phase::ZERO)]);
    a.u[3] = swap;
    let r = validate_action(&a).unwrap();
    assert_eq!(r.composition_failures, vec![(1, 1)]);
    assert!(r.non_unitaries.is_empty());
}

#[test]
fn perturbation_keeps_the_anomaly() {
    let w = standard_cyclic_cocycle(3, 1).unwrap();
    let a = translation_action(&w);
    let f = [Phase::ZERO, Phase::new(1, 5), Phase::new(2, 7)];
    let v = scalar_unitaries(&a.algebra, &f);
    let b = unitary_perturbation(&a, &v).unwrap();
    assert!(validate_action(&b).unwrap().is_valid());
    assert_eq!(extract_anomaly(&b).unwrap(), w);
    assert!(!b.u(1, 1).equals(a.u(1, 1)));
    let trivial = unitary_perturbation(&a, &vec![E::one(&a.algebra); 3]).unwrap();
    assert!(trivial.equals(&a));
}

#[test]
fn tensor_with_the_opposite_cocycle_cancels() {
    let w = standard_cyclic_cocycle(2, 1).unwrap();
    let a = translation_action(&w);
    let t = tensor_actions(&a, &translation_action(&w.negated())).unwrap();
    assert!(extract_anomaly(&t).unwrap().is_zero());
    let t2 = tensor_actions(&a, &a).unwrap();
    assert_eq!(extract_anomaly(&t2).unwrap(), w.scale(2));
    let g = make_named_group("C2").unwrap();
    let c = tensor_actions(&a, &regular_conjugation(&g)).unwrap();
    assert_eq!(extract_anomaly(&c).unwrap(), w);
    assert!(validate_action(&c).unwrap().is_valid());
}

#[test]
fn conjugation_by_a_block_swap() {
    let w = standard_cyclic_cocycle(2, 1).unwrap();
    let a = translation_action(&w);
    let swap: M =
        MonomialMap::from_single(&a.algebra, &a.algebra, vec![(1, Phase::ZERO), (0, Phase::ZERO)]).unwrap().into();
    let b = conjugate_action(&a, &swap).unwrap();
    assert!(validate_action(&b).unwrap().is_valid());
    assert_eq!(extract_anomaly(&b).unwrap(), w);
    let back = conjugate_action(&b, &swap.inverse().unwrap()).unwrap();
    assert!(back.equals(&a));
    let witness = ConjugacyWitness { s: vec![E::one(&a.algebra); 2], theta: swap };
    assert!(verify_cocycle_conjugacy(&a, &b, &witness).unwrap());
    assert!(!verify_cocycle_conjugacy(&a, &a, &witness).unwrap());
    let id = ConjugacyWitness { s: vec![E::one(&a.algebra); 2], theta: M::identity(&a.algebra) };
    assert!(verify_cocycle_conjugacy(&a, &a, &id).unwrap());
    let zero = translation_action(&Cochain::zero(a.group.clone(), 3));
    assert!(!verify_cocycle_conjugacy(&a, &zero, &id).unwrap());
    assert!(!class_equal(&extract_anomaly(&a).unwrap(), &extract_anomaly(&zero).unwrap()).unwrap());
}

#[test]
fn alpha_cocycles() {
    let g = make_named_group("C3").unwrap();
    let a = regular_conjugation(&g);
    let mm = a.algebra.as_multi_matrix().unwrap().clone();
    assert!(is_alpha_cocycle(&a, &vec![E::one(&a.algebra); 3]).unwrap());
    let w = E::from_phases(&a.algebra, (0..3).map(|i| (mm.index(0, i, i), Phase::new(i as i64, 4))));
    assert!(is_alpha_cocycle(&a, &coboundary_cocycle(&a, &w).unwrap()).unwrap());
    assert!(!is_alpha_cocycle(&a, &vec![w; 3]).unwrap());
}

fn corner_partition(a: &AnomalousAction<CycNumber>) -> RokhlinPartition<CycNumber> {
    let mm = a.algebra.as_multi_matrix().unwrap().clone();
    let n = a.group.order();
    RokhlinPartition { p: (0..n).map(|g| E::basis(&a.algebra, mm.index(0, g, g))).collect(), context: vec![] }
}

#[test]
fn rokhlin_checks_and_corruption() {
    let g = make_named_group("C3").unwrap();
    let a = regular_conjugation(&g);
    let p = corner_partition(&a);
    assert!(verify_rokhlin_partition(&a, &p).unwrap().passed());
    let mut bad = p.clone();
    bad.p.swap(1, 2);
    let r = verify_rokhlin_partition(&a, &bad).unwrap();
    assert!(!r.passed());
    assert!(!r.equivariance_failures.is_empty());
    let ctx = RokhlinPartition { p: p.p.clone(), context: vec![E::basis(&a.algebra, 1)] };
    assert_eq!(verify_rokhlin_partition(&a, &ctx).unwrap().commutation_failures.len(), 2);
}

#[test]
fn average_of_a_genuine_action_is_equivariant() {
    let g = make_named_group("C2").unwrap();
    let a = tensor_actions(&regular_conjugation(&g), &regular_conjugation(&g)).unwrap();
    let mm = a.algebra.as_multi_matrix().unwrap().clone();
    let first = MultiMatrixAlgebra::full_matrix(2);
    let p = RokhlinPartition {
        p: (0..2)
            .map(|x| E::from_phases(&a.algebra, (0..2).map(|y| (mm.index(0, 2 * x + y, 2 * x + y), Phase::ZERO))))
            .collect(),
        context: vec![],
    };
    assert!(verify_rokhlin_partition(&a, &p).unwrap().passed());
    // 1 ⊗ M_2 commutes with the partition but is moved by the action
    let first_ref = multi_matrix(first.clone());
    let imgs = (0..4)
        .map(|l| {
            let (_, i, j) = first.entry(l);
            (0..2).map(|x| (mm.index(0, 2 * x + i, 2 * x + j), Phase::ZERO)).collect()
        })
        .collect();
    let psi = M::from_phased(&first_ref, &a.algebra, imgs).unwrap();
    assert!(!a.alpha[1].compose(&psi).unwrap().equals(&psi));
    let (phi, rep) = rokhlin_average(&a, &p, &psi).unwrap();
    assert!(rep.commutation_hypothesis);
    assert!(rep.homomorphism.is_homomorphism());
    assert!(rep.equivariant());
    assert_eq!(phi.domain().dim(), first.dim());

    // a scrambled embedding breaks the commutation hypothesis, which the report records
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let scrambled: M = random_unital_embedding(&mm, &a.algebra, 1, 2, 4, &mut rng).unwrap();
    let (_, rep) = rokhlin_average(&a, &p, &scrambled).unwrap();
    assert!(!rep.commutation_hypothesis);
}

#[test]
fn trivialization_and_twisted_units() {
    let g = make_named_group("C3").unwrap();
    let a = tensor_actions(&regular_conjugation(&g), &regular_conjugation(&g)).unwrap();
    let n = 3;
    let mm = a.algebra.as_multi_matrix().unwrap().clone();
    let e_at = |x: usize, y: usize, i: usize, j: usize| mm.index(0, x * n + y, i * n + j);
    let p = RokhlinPartition {
        p: (0..n).map(|x| E::from_phases(&a.algebra, (0..n).map(|y| (e_at(x, y, x, y), Phase::ZERO)))).collect(),
        context: vec![],
    };
    assert!(verify_rokhlin_partition(&a, &p).unwrap().passed());
    let exp = AlgebraMap::General(fixed_point_expectation(&g, &a.alpha).unwrap());
    let scale = CycNumber::rational(Rational64::from_integer(n as i64));
    let mut units = vec![];
    for d in 0..n {
        for d2 in 0..n {
            units.push(exp.image(e_at(0, d, 0, d2)).scale(&scale));
        }
    }
    let v = permutation_unitary_from_units(&g, &units).unwrap();
    let u = trivialize_cocycle(&a, &p, &v).unwrap();
    let f = twist_matrix_units(&a, &units, &u).unwrap();
    assert_eq!(f.len(), 9);
    let corrupted = u.mul_phase(Phase::ZERO).mul(&E::basis(&a.algebra, 0).add(&E::one(&a.algebra)).unwrap()).unwrap();
    assert!(twist_matrix_units(&a, &units, &corrupted).is_err());
    assert!(trivialize_cocycle(&a, &p, &[v[1].clone(), v[1].clone(), v[1].clone()]).is_err());
}

#[test]
fn permutation_unitary_of_standard_units_is_regular() {
    let g = make_named_group("C2").unwrap();
    let mm = MultiMatrixAlgebra::full_matrix(2);
    let alg = multi_matrix(mm.clone());
    let units: Vec<E> = (0..4).map(|i| E::basis(&alg, mm.index(0, i / 2, i % 2))).collect();
    let v = permutation_unitary_from_units(&g, &units).unwrap();
    assert!(v[1].equals(&E::from_phases(&alg, [(1, Phase::ZERO), (2, Phase::ZERO)])));
    let mut broken = units.clone();
    broken[1] = broken[0].clone();
    assert!(permutation_unitary_from_units(&g, &broken).is_err());
}

#[test]
fn trivial_group_twist_is_identity() {
    let g: Group = std::sync::Arc::new(GroupTable::cyclic(1));
    let alg = multi_matrix(MultiMatrixAlgebra::full_matrix(1));
    let a = AnomalousAction::genuine(g.clone(), alg.clone(), vec![M::identity(&alg)]).unwrap();
    let one = E::one(&alg);
    let f = twist_matrix_units(&a, std::slice::from_ref(&one), &one).unwrap();
    assert!(f[0].equals(&one));
}

#[test]
fn block_relabeling_is_an_automorphism_preserving_the_anomaly() {
    let w = standard_cyclic_cocycle(3, 1).unwrap();
    let a = translation_action(&w);
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..5 {
        let (iso, perm) = random_block_relabeling::<CycNumber, _>(&a.algebra, 6, &mut rng).unwrap();
        assert!(iso.is_star_homomorphism().is_automorphism());
        let mut sorted = perm.clone();
        sorted.sort_unstable();
        assert_eq!(sorted, vec![0, 1, 2]);
        let b = conjugate_action(&a, &iso).unwrap();
        assert!(validate_action(&b).unwrap().is_valid());
        assert_eq!(extract_anomaly(&b).unwrap(), w);
    }
}

//! Acceptance suite: the exit gate for the whole crate.
//!
//! Each criterion prints one `criterion N: PASS/FAIL — description` line
//! (visible with `cargo test --test acceptance -- --nocapture`) and asserts
//! its stated tolerance. Everything upstream of an assert is computed with
//! exact arithmetic unless the criterion itself is about dense states.

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use setlab_core::algebra::{random_op, SiteId, XdOperator};
use setlab_core::cohomology::{
    cocycle2_check, cohomologous, eta_from_omega, h2_trivial_action, ClassComparison, Cochain1,
    Cochain2, FiniteGroup, Phase,
};
use setlab_core::lattice::{
    EdgeKind, EdgePath, HoneycombLattice, PlaquetteId, RegionPartition, Sublattice, VertexId,
};
use setlab_core::model::{AnyonLabel, GroupElem, OmegaTable, SetModel};
use setlab_core::oracle::{
    apply_xd, boundary_excitation_check, ground_state, random_local_observable,
    symmetry_invariance_check, StateVector,
};

const VACUUM_TOL: f64 = 1e-10;
const CROSS_TOL: f64 = 1e-12;
const SEARCH_BOUND: u64 = 1 << 16;

fn criterion(n: u32, description: &str, pass: bool) {
    let status = if pass { "PASS" } else { "FAIL" };
    println!("criterion {n}: {status} — {description}");
    assert!(pass, "criterion {n} failed: {description}");
}

fn torus_model(l1: u32, l2: u32) -> SetModel {
    SetModel::new(HoneycombLattice::torus(l1, l2).unwrap())
}

fn standard_path(model: &SetModel) -> EdgePath {
    EdgePath::from_steps(
        model.lattice(),
        VertexId(1),
        &[EdgeKind::K1, EdgeKind::K3, EdgeKind::K1, EdgeKind::K2],
        true,
    )
    .unwrap()
}

/// Both sides of the restricted-flip identity `u·U = W·U·u`, as operator
/// products (left factor applied last).
fn flip_identity_sides(model: &SetModel, part: &RegionPartition) -> (XdOperator, XdOperator) {
    let u = model.u_restriction(GroupElem::FLIP_A, part).operator;
    let w = model.boundary_w(part).w;
    let circ = model.full_entangler();
    let lhs = u.multiply(circ.operator());
    let rhs = w.multiply(circ.operator()).multiply(&u);
    (lhs, rhs)
}

#[test]
fn criterion_01_conjugation_identities() {
    let (a, e, b) = (SiteId(0), SiteId(1), SiteId(2));
    let ccz = XdOperator::pauli_x(a).conjugate(&XdOperator::ccz(a, e, b))
        == XdOperator::ccz(a, e, b).multiply(&XdOperator::cz(e, b));
    let cz = XdOperator::pauli_x(a).conjugate(&XdOperator::cz(b, a))
        == XdOperator::cz(b, a).multiply(&XdOperator::pauli_z(b));
    criterion(
        1,
        "endpoint-flip conjugation identities for CCZ and CZ hold exactly",
        ccz && cz,
    );
}

#[test]
fn criterion_02_loop_flip_identity() {
    let mut pass = true;
    for (l1, l2) in [(2, 2), (3, 3)] {
        let model = torus_model(l1, l2);
        let full = model.full_entangler();
        for plaqs in [vec![PlaquetteId(0)], vec![PlaquetteId(0), PlaquetteId(1)]] {
            let part = RegionPartition::from_plaquettes(model.lattice(), &plaqs).unwrap();
            let residual = model.verify_loop_flip(Sublattice::A, &part, &full).unwrap();
            pass &= residual.is_identity();
        }
    }
    criterion(
        2,
        "restricted flip commutes through the entangler up to the boundary operator \
         (hexagon and two-hexagon regions, 2x2 and 3x3 tori, exact)",
        pass,
    );
}

#[test]
fn criterion_03_vacuum_boundary_identity() {
    let model = torus_model(2, 2);
    let bundle = ground_state(&model).unwrap();
    let part = RegionPartition::from_plaquettes(model.lattice(), &[PlaquetteId(0)]).unwrap();
    let d = boundary_excitation_check(&model, &bundle, &part, Sublattice::A).unwrap();
    criterion(
        3,
        "half-space flip and boundary operator agree on the vacuum (20 qubits, < 1e-10)",
        d < VACUUM_TOL,
    );
}

#[test]
fn criterion_04_symmetry_invariance() {
    let model = torus_model(2, 2);
    let bundle = ground_state(&model).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let observables: Vec<XdOperator> = (0..100)
        .map(|_| random_local_observable(model.lattice(), &mut rng))
        .collect();
    let mut worst: f64 = 0.0;
    for g in [GroupElem::FLIP_A, GroupElem::FLIP_B] {
        worst = worst.max(symmetry_invariance_check(&model, &bundle, g, &observables).unwrap());
    }
    criterion(
        4,
        "vacuum is invariant under both symmetry generators on 100 random local \
         observables (< 1e-10)",
        worst < VACUUM_TOL,
    );
}

#[test]
fn criterion_05_omega_matrix() {
    let model = torus_model(2, 2);
    let path = standard_path(&model);
    let w = model.w_table(&path).unwrap();
    let omega = model.omega_table(&w).unwrap();
    criterion(
        5,
        "dressed X-string fractionalization table equals \
         [[1,1,1,1],[1,1,-1,-1],[1,1,1,1],[1,1,-1,-1]] exactly",
        omega.table(AnyonLabel::EX) == &OmegaTable::x_string_expected(),
    );
}

#[test]
fn criterion_06_fusion_compatibility() {
    let model = torus_model(2, 2);
    let path = standard_path(&model);
    let w = model.w_table(&path).unwrap();
    let omega = model.omega_table(&w).unwrap();

    let mut pass = true;
    for g in GroupElem::ALL {
        for h in GroupElem::ALL {
            pass &= omega.get(AnyonLabel::EX, g, h) + omega.get(AnyonLabel::EZ, g, h)
                == omega.get(AnyonLabel::F, g, h);
        }
    }
    // The symmetry fixes every label: each string's defect is an inner
    // endpoint operator, so the twisted sector coincides with the original.
    for a in AnyonLabel::ALL {
        let s = model.anyon_string(a, &path);
        for g in GroupElem::ALL {
            pass &= model.symmetry_endpoint_action(g, &s, &path).is_ok();
        }
    }
    criterion(
        6,
        "fusion compatibility: ω(eX)·ω(eZ) = ω(f) entrywise and every label is fixed",
        pass,
    );
}

#[test]
fn criterion_07_cocycle_suite() {
    let model = torus_model(2, 2);
    let path = standard_path(&model);
    let w = model.w_table(&path).unwrap();
    let omega = model.omega_table(&w).unwrap();
    let module = model.trivial_module();
    let eta = eta_from_omega(&omega.as_label_major(), &module).unwrap();

    let mut pass = cocycle2_check(&eta, &module).is_ok();

    // W-rephasings: one pinned example plus seeded random sign patterns.
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let mut lambdas: Vec<Cochain1> = Vec::new();
    let mut pinned = Cochain1::constant_one(&module);
    pinned.values[GroupElem::FLIP_A.index()][AnyonLabel::EX.index()] = Phase::minus_one();
    lambdas.push(pinned);
    for _ in 0..8 {
        let mut lambda = Cochain1::constant_one(&module);
        for row in lambda.values.iter_mut() {
            for v in row.iter_mut() {
                if rng.gen_bool(0.5) {
                    *v = Phase::minus_one();
                }
            }
        }
        lambdas.push(lambda);
    }
    for lambda in &lambdas {
        let shift = model.rephasing_coboundary(&w, lambda).unwrap();
        let eta_prime = eta.mul(&shift);
        pass &= cocycle2_check(&eta_prime, &module).is_ok();
        pass &= cohomologous(&eta, &eta_prime, &module, SEARCH_BOUND).is_yes();
    }

    // Class nontriviality, established by the exhaustive search itself.
    let trivial = Cochain2::constant_one(&module);
    pass &= cohomologous(&eta, &trivial, &module, SEARCH_BOUND) == ClassComparison::No;

    criterion(
        7,
        "η is an exact 2-cocycle, W-rephasings shift it by coboundaries, and its class \
         is nontrivial under the full 2^16 rephasing search",
        pass,
    );
}

#[test]
fn criterion_08_h2_oracle_agreement() {
    let cases = [
        (FiniteGroup::cyclic(2), 2u64, 2u128),
        (FiniteGroup::klein(), 2, 8),
        (FiniteGroup::cyclic(3), 3, 3),
    ];
    let mut pass = true;
    for (group, coeff, expected_order) in cases {
        let result = h2_trivial_action(&group, coeff).unwrap();
        pass &= result.order == expected_order;
        pass &= result.brute_force_order == Some(expected_order);
    }
    criterion(
        8,
        "H² invariants from Smith normal form match brute-force cochain enumeration \
         for (Z2,2), (Z2xZ2,2), (Z3,3)",
        pass,
    );
}

#[test]
fn criterion_09_symbolic_oracle_cross_validation() {
    let model = torus_model(2, 2);
    let n = model.lattice().n_sites();
    assert_eq!(n, 20);

    // The identity pairs from criteria 1 and 2, all embedded in the
    // 20-qubit register of the 2x2 torus.
    let (a, e, b) = (SiteId(0), SiteId(1), SiteId(2));
    let mut identity_pairs: Vec<(XdOperator, XdOperator)> = vec![
        (
            XdOperator::pauli_x(a).conjugate(&XdOperator::ccz(a, e, b)),
            XdOperator::ccz(a, e, b).multiply(&XdOperator::cz(e, b)),
        ),
        (
            XdOperator::pauli_x(a).conjugate(&XdOperator::cz(b, a)),
            XdOperator::cz(b, a).multiply(&XdOperator::pauli_z(b)),
        ),
    ];
    for plaqs in [vec![PlaquetteId(0)], vec![PlaquetteId(0), PlaquetteId(1)]] {
        let part = RegionPartition::from_plaquettes(model.lattice(), &plaqs).unwrap();
        identity_pairs.push(flip_identity_sides(&model, &part));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let mut worst: f64 = 0.0;
    for _ in 0..20 {
        let state = StateVector::random(n, &mut rng).unwrap();
        for (lhs, rhs) in &identity_pairs {
            let left = apply_xd(lhs, &state).unwrap();
            let right = apply_xd(rhs, &state).unwrap();
            worst = worst.max(left.distance(&right));
        }
    }
    criterion(
        9,
        "each exact symbolic identity acts identically on 20 random 20-qubit states \
         (< 1e-12)",
        worst < CROSS_TOL,
    );
}

#[test]
fn criterion_10_property_suites() {
    let mut pass = true;
    let mut rng = ChaCha8Rng::seed_from_u64(0);

    // Group laws on 1000 fuzzed triples.
    for _ in 0..1000 {
        let x = random_op(&mut rng, 16, 3);
        let y = random_op(&mut rng, 16, 3);
        let z = random_op(&mut rng, 16, 3);
        pass &= x.multiply(&y).multiply(&z) == x.multiply(&y.multiply(&z));
        pass &= x.multiply(&x.inverse()).is_identity();
    }

    // Substitution composition law.
    for _ in 0..300 {
        let p = random_op(&mut rng, 10, 4).poly().clone();
        let mut x = BTreeSet::new();
        let mut y = BTreeSet::new();
        for v in 0..10u32 {
            if rng.gen_bool(0.4) {
                x.insert(SiteId(v));
            }
            if rng.gen_bool(0.4) {
                y.insert(SiteId(v));
            }
        }
        let xy: BTreeSet<SiteId> = x.symmetric_difference(&y).copied().collect();
        pass &= p.substitute(&xy) == p.substitute(&x).substitute(&y);
    }

    // Stabilizer commutation, exhaustive on the 3x3 torus.
    let model = torus_model(3, 3);
    let verts: Vec<XdOperator> = model
        .lattice()
        .vertex_ids()
        .map(|v| model.vertex_op(v))
        .collect();
    let plaqs: Vec<XdOperator> = model
        .lattice()
        .plaquette_ids()
        .map(|p| model.plaquette_op(p))
        .collect();
    for x in verts.iter().chain(&plaqs) {
        for y in verts.iter().chain(&plaqs) {
            pass &= x.commutator_phase(y) == Ok(1);
        }
    }

    // Endpoint-defect locality for every group element on ten paths.
    let starts = [1u32, 3, 5, 7, 9];
    let step_sets: [&[EdgeKind]; 2] = [
        &[EdgeKind::K1, EdgeKind::K3, EdgeKind::K1, EdgeKind::K2],
        &[EdgeKind::K2, EdgeKind::K3, EdgeKind::K1, EdgeKind::K3],
    ];
    let mut paths = 0;
    for &v in &starts {
        for steps in step_sets {
            let path = EdgePath::from_steps(model.lattice(), VertexId(v), steps, true).unwrap();
            let s = model.dressed_x_string(&path).operator;
            for g in GroupElem::ALL {
                pass &= model.symmetry_endpoint_action(g, &s, &path).is_ok();
            }
            paths += 1;
        }
    }
    pass &= paths == 10;

    criterion(
        10,
        "group-law fuzz (1000 triples), substitution law, exhaustive 3x3 stabilizer \
         commutation, endpoint-defect locality on 10 paths",
        pass,
    );
}

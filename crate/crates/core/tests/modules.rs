use krcore::cartan::AffineType;
use krcore::fusion::{
    compose_r, default_route, fuse, kr1, kr_recursive, solve_r, staircase_word, verify_tensor_expansion, Expansion, Route,
    MAX_R_UNKNOWNS,
};
use krcore::linalg::{nullspace, SVec};
use krcore::polarverify::{check_polarization_positive, monomial_gram};
use krcore::qfield::RatQ;
use krcore::repcore::{admissibility_failures, verify_relations, Gram, Rep};

const G2: AffineType = AffineType::G2_1;

#[test]
fn w1_g2_gram_table() {
    let w = kr1(G2).unwrap();
    assert!(verify_relations(&w.rep).pass());
    let diag: Vec<String> = (0..7).map(|k| w.gram.entry(k, k).to_string()).collect();
    assert_eq!(diag.iter().filter(|s| *s == "(1)/(1)").count(), 6);
    assert_eq!(diag.iter().filter(|s| *s == "(1+q^2)/(1)").count(), 1);
    assert!(admissibility_failures(&w.rep, &w.rep, &w.gram).is_empty());
}

#[test]
fn intertwiner_is_unique_up_to_scalar() {
    let w = kr1(G2).unwrap();
    let r = solve_r(&w.rep, 1, -1, MAX_R_UNKNOWNS).unwrap();
    assert_eq!(r.solution_dim, 1);
    assert!(r.unknowns > 0 && r.equations > 0);
}

fn square_weights(rep: &Rep) -> Vec<krcore::cartan::Weight> {
    rep.wt.iter().flat_map(|a| rep.wt.iter().map(move |b| *a + *b)).collect()
}

#[test]
fn pairing_through_r2_ignores_the_kernel() {
    let w = kr1(G2).unwrap();
    let d = w.rep.dim();
    let r = compose_r(&w.rep, 2, &staircase_word(2), MAX_R_UNKNOWNS).unwrap();
    let mut rows = vec![Vec::new(); d * d];
    for (j, col) in r.cols.iter().enumerate() {
        for (i, x) in &col.0 {
            rows[*i].push((j, x.clone()));
        }
    }
    let rows: Vec<SVec> = rows.into_iter().map(SVec::from_terms).collect();
    let kernel = nullspace(&rows, d * d);
    assert!(!kernel.is_empty());
    let pairing = Gram::kron(&w.gram, &w.gram, &square_weights(&w.rep));
    for u in &kernel {
        let u = SVec::from_dense(u);
        assert!(r.apply(&u).is_zero());
        for j in (0..d * d).step_by(5) {
            let rv = r.apply(&SVec::unit(j));
            assert!(pairing.pair(&u, &rv).is_zero(), "kernel vector pairs nontrivially with column {j}");
        }
        let mixed = SVec::from_terms((0..d * d).map(|j| (j, RatQ::q_int(j as i64 % 4 + 1, 1))).collect());
        assert!(pairing.pair(&u, &r.apply(&mixed)).is_zero());
    }
}

#[test]
fn w2_is_admissible_symmetric_and_positive() {
    let w = kr1(G2).unwrap();
    let m = fuse(&w, 2, default_route(G2)).unwrap();
    assert_eq!(m.rep.dim(), 34);
    assert!(verify_relations(&m.rep).pass());
    assert!(m.gram.is_symmetric());
    assert!(admissibility_failures(&m.rep, &m.rep, &m.gram).is_empty());
    assert!(check_polarization_positive(&m.gram));
}

#[test]
fn both_routes_and_the_recursive_model_agree_at_level_two() {
    let w = kr1(G2).unwrap();
    let a = fuse(&w, 2, Route::Composition).unwrap();
    let b = fuse(&w, 2, Route::Closure).unwrap();
    let c = kr_recursive(&w, &w).unwrap();
    let ga = monomial_gram(&a, 3, 5, 3);
    assert!(!ga.is_empty());
    assert_eq!(ga, monomial_gram(&b, 3, 5, 3));
    assert_eq!(ga, monomial_gram(&c, 3, 5, 3));
    assert_eq!(a.rep.dim(), c.rep.dim());
}

#[test]
fn lemma_expansion_g2_level_two() {
    let w = kr1(G2).unwrap();
    let fails = verify_tensor_expansion(&w, &w, Expansion::G, (3, 3, 3), &[-2, 2]);
    assert!(fails.is_empty(), "{fails:?}");
}

#[test]
fn d4_fundamental_module() {
    let w = kr1(AffineType::D4_3).unwrap();
    assert_eq!(w.rep.dim(), 29);
    assert!(verify_relations(&w.rep).pass());
    assert!(admissibility_failures(&w.rep, &w.rep, &w.gram).is_empty());
    assert!(check_polarization_positive(&w.gram));
}

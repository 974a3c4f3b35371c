use krcore::cartan::AffineType;
use krcore::crystal::{crystal_lattice, extract_pseudobase, kashiwara, CrystalGraph, Dir};
use krcore::fusion::{default_route, fuse, kr1};
use std::collections::BTreeMap;

#[test]
fn w2_g2_pseudobase() {
    let w = kr1(AffineType::G2_1).unwrap();
    let m = fuse(&w, 2, default_route(AffineType::G2_1)).unwrap();
    let p = extract_pseudobase(&m).unwrap();
    assert!(p.report.pass, "{:?}", p.report);
    assert_eq!(p.graph.nodes.len(), 34);
    assert_eq!(p.lattice.rank(), 34);
    assert!(p.lattice.contains(&m.rep, &m.v));

    // each node has at most one outgoing i-arrow and at most one incoming one
    let mut out = BTreeMap::new();
    let mut inc = BTreeMap::new();
    for e in &p.graph.edges {
        *out.entry((e.from, e.i)).or_insert(0) += 1;
        *inc.entry((e.to, e.i)).or_insert(0) += 1;
        let (a, b) = (p.graph.nodes[e.from].weight, p.graph.nodes[e.to].weight);
        assert_eq!(a, b + m.rep.cartan().alpha(e.i));
    }
    assert!(out.values().chain(inc.values()).all(|&k| k == 1));

    let back = CrystalGraph::from_json(&p.graph.to_json()).unwrap();
    assert_eq!(back, p.graph);
    let dot = p.graph.to_dot();
    assert_eq!(dot.matches(" -> ").count(), p.graph.edges.len());
}

#[test]
fn d4_fundamental_crystal() {
    let w = kr1(AffineType::D4_3).unwrap();
    let p = extract_pseudobase(&w).unwrap();
    assert!(p.report.pass);
    assert_eq!(p.graph.nodes.len(), 29);
    assert!(p.graph.nodes.iter().all(|n| n.sign == 1));
}

#[test]
fn operators_preserve_the_lattice_on_w1() {
    let w = kr1(AffineType::G2_1).unwrap();
    let lat = crystal_lattice(&w).unwrap();
    for v in lat.vectors() {
        for i in 0..3 {
            for dir in [Dir::Raise, Dir::Lower] {
                assert!(lat.contains(&w.rep, &kashiwara(&w.rep, i, dir, &v.b)));
            }
        }
    }
}

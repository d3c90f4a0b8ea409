//! Small worked examples with values fixed by hand or by brute force.

use lofs_core::adjunction::{find_left_adjoint, laxcolimit_awfs, laxlimit_awfs};
use lofs_core::awfs::{
    algebra_structure, canonical_diag, check_mixed_square, coalgebra_structure, factorise, k_on_square, mult, Strictness,
};
use lofs_core::downset_monad::{check_monad_laws, downsets, unit};
use lofs_core::kan::{embedding_family, kan_injectivity_failure, lan_extension};
use lofs_core::lifting::{
    canonical_map, compose_structures, fillers, kz_orthogonal, lifting_structure, GeneratorFamily,
};
use lofs_core::oracle;
use lofs_core::order::{hom_poset, is_isomorphic, sq_hom_poset, Square};
use lofs_core::topology::{
    f_lower_star, filter_algebra, filter_space, is_top_coalgebra, open_lattice, way_below, FiniteSpace,
};
use lofs_core::{FinPreorder, Limits, MonotoneMap};

fn lim() -> Limits {
    Limits::default()
}

fn map(src: &FinPreorder, tgt: &FinPreorder, assign: &[usize]) -> MonotoneMap {
    MonotoneMap::new(src.clone(), tgt.clone(), assign.to_vec()).unwrap()
}

fn a2() -> FinPreorder {
    FinPreorder::antichain(2)
}

fn diamond() -> FinPreorder {
    FinPreorder::diamond()
}

fn a2_in_diamond() -> MonotoneMap {
    map(&a2(), &diamond(), &[1, 2])
}

fn bang(x: &FinPreorder) -> MonotoneMap {
    MonotoneMap::terminal(x)
}

#[test]
fn hom_of_two_chain() {
    let c2 = FinPreorder::chain(2);
    let hom = hom_poset(&c2, &c2, &lim()).unwrap();
    let assigns: Vec<&[usize]> = hom.maps().iter().map(MonotoneMap::assign).collect();
    assert_eq!(assigns, vec![&[0, 0][..], &[0, 1], &[1, 1]]);
    assert!(is_isomorphic(hom.poset(), &FinPreorder::chain(3)));
}

#[test]
fn square_into_vee_is_a_member() {
    let vee = FinPreorder::vee();
    let sq = Square::new(a2_in_diamond(), bang(&vee), map(&a2(), &vee, &[0, 1]), bang(&diamond()));
    assert!(sq.is_ok());
    let squares = sq_hom_poset(&a2_in_diamond(), &bang(&vee), &lim()).unwrap();
    assert!(squares.index_of(&[0, 1], &[0, 0, 0, 0]).is_some());
}

#[test]
fn downsets_of_antichain_are_the_diamond() {
    assert!(is_isomorphic(downsets(&a2(), &lim()).unwrap().carrier(), &diamond()));
}

#[test]
fn left_adjoint_of_bang_on_chain() {
    let l = find_left_adjoint(&bang(&FinPreorder::chain(2))).unwrap();
    assert_eq!(l.assign(), &[0]);
    assert!(find_left_adjoint(&bang(&a2())).is_none());
}

#[test]
fn lax_limit_and_colimit_factorisations() {
    let ll = laxlimit_awfs(&bang(&a2()), &lim()).unwrap();
    assert_eq!(ll.left_lari.right_adjoint().assign(), &[0, 1]);
    let c2 = FinPreorder::chain(2);
    let ll = laxlimit_awfs(&MonotoneMap::identity(&c2), &lim()).unwrap();
    assert!(is_isomorphic(ll.comma.carrier(), &FinPreorder::chain(3)));
    for x in 0..2 {
        let p = ll.left.apply(x);
        assert_eq!(ll.comma.pairs()[p], (x, x));
        assert_eq!(ll.left_lari.right_adjoint().apply(p), x);
    }
    let lc = laxcolimit_awfs(&bang(&a2()), &lim()).unwrap();
    assert_eq!(lc.collage.carrier().len(), 3);
    let section = lc.right_rali.left_adjoint().apply(0);
    assert!(lc.collage.carrier().le(section, 0) && lc.collage.carrier().le(section, 1));
}

#[test]
fn collage_left_parts_are_full_up_to_three() {
    let mut objects = Vec::new();
    for n in 0..=3 {
        objects.extend(lofs_core::order::enumerate_preorders(n, true, &lim()).unwrap());
    }
    for x in &objects {
        for y in &objects {
            for f in hom_poset(x, y, &lim()).unwrap().maps() {
                assert!(laxcolimit_awfs(f, &lim()).unwrap().left.is_full());
            }
        }
    }
}

#[test]
fn units_are_full_up_to_five() {
    for n in 0..=5 {
        for x in lofs_core::order::enumerate_preorders(n, true, &lim()).unwrap() {
            assert!(unit(&downsets(&x, &lim()).unwrap()).is_full());
        }
    }
}

#[test]
fn downset_monad_associative_on_chain() {
    assert_eq!(check_monad_laws(&FinPreorder::chain(2), &lim()).unwrap().associativity, Some(true));
}

#[test]
fn small_factorisations() {
    let one = FinPreorder::one();
    let ff = factorise(&MonotoneMap::identity(&one), &lim()).unwrap();
    assert_eq!(ff.k(), &FinPreorder::chain(2).with_labels(["({},*)", "({*},*)"]).unwrap());
    let f = map(&one, &FinPreorder::chain(2), &[1]);
    let ff = factorise(&f, &lim()).unwrap();
    assert_eq!(ff.len(), 3);
    assert_eq!(ff.len(), oracle::kf_elements(&f).len());
    let (phi, b) = ff.element(ff.lambda().apply(0));
    assert_eq!((phi.ones().collect::<Vec<_>>(), b), (vec![0], 1));
}

#[test]
fn k_is_functorial_and_natural() {
    let c2 = FinPreorder::chain(2);
    let f = map(&a2(), &c2, &[0, 1]);
    let g = map(&c2, &c2, &[0, 1]);
    let (ff, fg) = (factorise(&f, &lim()).unwrap(), factorise(&g, &lim()).unwrap());
    for sq in sq_hom_poset(&f, &g, &lim()).unwrap().squares() {
        let kk = k_on_square(sq, &ff, &fg).unwrap();
        assert_eq!(ff.rho().then(sq.k()).unwrap(), kk.then(fg.rho()).unwrap());
        assert_eq!(ff.lambda().then(&kk).unwrap(), sq.h().then(fg.lambda()).unwrap());
    }
    let id = k_on_square(&Square::identity(&f), &ff, &ff).unwrap();
    assert_eq!(id, MonotoneMap::identity(ff.k()));
}

#[test]
fn unit_law_and_mixed_square() {
    let f = map(&FinPreorder::one(), &FinPreorder::chain(2), &[1]);
    let ff = factorise(&f, &lim()).unwrap();
    let fr = factorise(ff.rho(), &lim()).unwrap();
    let pi = mult(&ff, &fr).unwrap();
    assert_eq!(fr.lambda().then(&pi).unwrap(), MonotoneMap::identity(ff.k()));
    let g = bang(&FinPreorder::chain(2));
    let fg = factorise(&g, &lim()).unwrap();
    let fl = factorise(fg.lambda(), &lim()).unwrap();
    let fr = factorise(fg.rho(), &lim()).unwrap();
    assert!(check_mixed_square(&fg, &fl, &fr).unwrap());
}

#[test]
fn coalgebra_and_algebra_examples() {
    let c2 = FinPreorder::chain(2);
    let c3 = FinPreorder::chain(3);
    assert!(coalgebra_structure(&factorise(&map(&c2, &c3, &[0, 2]), &lim()).unwrap()).is_some());
    assert!(coalgebra_structure(&factorise(&map(&a2(), &c2, &[0, 1]), &lim()).unwrap()).is_none());
    let fd = factorise(&bang(&diamond()), &lim()).unwrap();
    assert!(algebra_structure(&fd, Strictness::Exact, &lim()).unwrap().is_some());
    let fa = factorise(&bang(&a2()), &lim()).unwrap();
    assert!(algebra_structure(&fa, Strictness::UpToEquivalence, &lim()).unwrap().is_none());
}

#[test]
fn canonical_diagonal_for_diamond() {
    let j = a2_in_diamond();
    let g = bang(&diamond());
    let (fj, fg) = (factorise(&j, &lim()).unwrap(), factorise(&g, &lim()).unwrap());
    let s = coalgebra_structure(&fj).unwrap();
    let p = algebra_structure(&fg, Strictness::Exact, &lim()).unwrap().unwrap();
    let sq = Square::new(j.clone(), g.clone(), j.clone(), bang(&diamond())).unwrap();
    let d = canonical_diag(&sq, &fj, &s, &fg, &p).unwrap();
    let all = fillers(&sq, &lim()).unwrap();
    assert!(sq.is_filler(&d));
    assert!(all.iter().all(|w| d.le(w)));
    assert_eq!(d.assign(), &[0, 1, 2, 3]);
}

#[test]
fn comparison_map_against_chain() {
    let g = bang(&FinPreorder::chain(2));
    let cm = canonical_map(&a2_in_diamond(), &g, &lim()).unwrap();
    let upsets = oracle::downsets_brute(&diamond().op()).len();
    assert_eq!(cm.hom.len(), upsets);
    assert_eq!(cm.hom.len(), 6);
    assert_eq!(cm.squares.len(), 4);
}

#[test]
fn lifting_examples() {
    let fam = GeneratorFamily::from_members(vec![a2_in_diamond()]);
    let vee = FinPreorder::vee();
    assert!(lifting_structure(&fam, &bang(&vee), &lim()).unwrap().is_none());
    assert!(lifting_structure(&fam, &bang(&diamond()), &lim()).unwrap().is_some());
    let kz = kz_orthogonal(&a2_in_diamond(), &bang(&diamond()), &lim()).unwrap().unwrap();
    let d = kz.filler_for(&[1, 2], &[0, 0, 0, 0]).unwrap();
    assert_eq!((d.apply(0), d.apply(3)), (0, 3));
    assert!(kz_orthogonal(&a2_in_diamond(), &bang(&vee), &lim()).unwrap().is_none());
}

#[test]
fn composite_structure_matches_direct_search() {
    let c2 = FinPreorder::chain(2);
    let fam = GeneratorFamily::from_members(vec![a2_in_diamond()]);
    let f = map(&diamond(), &c2, &[0, 0, 1, 1]);
    let g = bang(&c2);
    let sf = lifting_structure(&fam, &f, &lim()).unwrap().unwrap();
    let sg = lifting_structure(&fam, &g, &lim()).unwrap().unwrap();
    let composite = compose_structures(&sf, &sg, &lim()).unwrap();
    assert!(composite.is_valid());
    let direct = lifting_structure(&fam, &f.then(&g).unwrap(), &lim()).unwrap().unwrap();
    assert_eq!(composite.squares(0).len(), direct.squares(0).len());
}

#[test]
fn kan_extension_examples() {
    let c2 = FinPreorder::chain(2);
    let w = lan_extension(&a2_in_diamond(), &map(&a2(), &c2, &[0, 1]), &lim()).unwrap().unwrap();
    assert_eq!((w.ext.apply(0), w.ext.apply(3)), (0, 1));
    assert!(lan_extension(&a2_in_diamond(), &MonotoneMap::identity(&a2()), &lim()).unwrap().is_none());
    let fam = embedding_family(3, false, &lim()).unwrap();
    assert!(kan_injectivity_failure(&diamond(), &fam, &lim()).unwrap().is_none());
    assert!(kan_injectivity_failure(&a2(), &fam, &lim()).unwrap().is_some());
}

#[test]
fn way_below_on_small_lattices() {
    let wb = way_below(&FinPreorder::chain(3), &lim()).unwrap();
    assert!(wb[0].contains(2));
    let wb = way_below(&diamond(), &lim()).unwrap();
    assert!(wb[1].contains(3) && wb[3].contains(3));
}

#[test]
fn filter_spaces() {
    let fx = filter_space(&FiniteSpace::new(FinPreorder::one()), &lim()).unwrap();
    assert!(is_isomorphic(fx.carrier(), &FinPreorder::chain(2)));
    let fx = filter_space(&FiniteSpace::new(FinPreorder::chain(2)), &lim()).unwrap();
    assert!(is_isomorphic(fx.carrier(), &FinPreorder::chain(3)));
    assert!(filter_algebra(&FiniteSpace::new(diamond()), &lim()).unwrap().is_some());
    assert!(filter_algebra(&FiniteSpace::new(a2()), &lim()).unwrap().is_none());
}

fn set(n: usize, members: &[usize]) -> fixedbitset::FixedBitSet {
    let mut s = fixedbitset::FixedBitSet::with_capacity(n);
    s.extend(members.iter().copied());
    s
}

#[test]
fn direct_images_of_opens() {
    let j = a2_in_diamond();
    let ox = open_lattice(&FiniteSpace::new(a2()), &lim()).unwrap();
    let oy = open_lattice(&FiniteSpace::new(diamond()), &lim()).unwrap();
    let star = f_lower_star(&j, &ox, &oy).unwrap();
    let u = ox.index_of(&set(2, &[0])).unwrap();
    assert_eq!(oy.open(star.apply(u)), &set(4, &[1, 3]));
    let top = map(&a2(), &diamond(), &[3, 3]);
    let star = f_lower_star(&top, &ox, &oy).unwrap();
    let empty = ox.index_of(&set(2, &[])).unwrap();
    assert_eq!(oy.open(star.apply(empty)), &set(4, &[]));
    assert!(is_top_coalgebra(&j, &lim()).unwrap());
    let collapse = map(&diamond(), &FinPreorder::chain(2), &[0, 0, 1, 1]);
    assert!(!is_top_coalgebra(&collapse, &lim()).unwrap());
}

#[test]
fn five_point_counts_match_brute_force() {
    let pre = lofs_core::order::enumerate_preorders(5, true, &lim()).unwrap().len();
    let pos = lofs_core::order::enumerate_posets(5, &lim()).unwrap().len();
    assert_eq!((pre, pos), (139, 63));
    assert_eq!(oracle::count_up_to_iso(5), (139, 63));
}

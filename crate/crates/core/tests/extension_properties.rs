use mrbad_core::cohomology::{CochainMrbad, Complex, Differentials};
use mrbad_core::extension::{
    build_extension, classify, cocycles_cohomologous, extensions_equivalent, extract_cocycle, match_class,
    section_actions, AbelianExtension, CocycleTriple,
};
use mrbad_core::fuzz::{random_cocycle, random_instance, random_invertible};
use mrbad_core::structures::{adjoint_bimodule, check_bimodule, check_homomorphism, fixtures::fixd};
use mrbad_core::{Error, Field, Matrix, MultiTensor};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn f5() -> Field {
    Field::prime(5).unwrap()
}

fn random_matrix(rng: &mut ChaCha8Rng, f: Field, rows: usize, cols: usize) -> Matrix {
    let q = f.order().unwrap() as i64;
    let entries = (0..rows * cols).map(|_| f.int(rng.gen_range(0..q))).collect();
    Matrix::from_entries(f, rows, cols, entries).unwrap()
}

/// The same extension presented in a random basis of the total space.
fn rebased(rng: &mut ChaCha8Rng, ext: &AbelianExtension) -> AbelianExtension {
    let f = ext.base.field();
    let g = random_invertible(rng, f, ext.total.dim());
    let g_inv = g.inverse().unwrap();
    let total = ext.total.conjugate(&g).unwrap();
    AbelianExtension::new(&ext.base, &total, &g_inv.mul(&ext.inclusion), &ext.projection.mul(&g)).unwrap()
}

#[test]
fn build_extract_round_trip() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let mut nonzero = 0;
    for _ in 0..100 {
        let (a, m) = (rng.gen_range(1..=2), rng.gen_range(1..=2));
        let inst = random_instance(&mut rng, f5(), a, m).unwrap();
        let complex = Complex::new(&inst.pair, &inst.bim).unwrap();
        let c = CocycleTriple::from_cochain(&random_cocycle(&mut rng, &complex, 2).unwrap()).unwrap();
        let ext = build_extension(&inst.pair, &inst.bim, &c).unwrap();
        let s = ext.canonical_section();
        assert_eq!(extract_cocycle(&ext, &s).unwrap(), c, "{}", inst.label);
        assert_eq!(section_actions(&ext, &s).unwrap(), inst.bim, "{}", inst.label);
        if !c.to_cochain().is_zero() {
            nonzero += 1;
        }
    }
    assert!(nonzero >= 50, "{nonzero}");
}

#[test]
fn sections_give_cohomologous_cocycles() {
    let mut rng = ChaCha8Rng::seed_from_u64(32);
    let mut checked = 0;
    while checked < 20 {
        let m = rng.gen_range(1..=2);
        let inst = random_instance(&mut rng, f5(), 2, m).unwrap();
        let complex = Complex::new(&inst.pair, &inst.bim).unwrap();
        let c = CocycleTriple::from_cochain(&random_cocycle(&mut rng, &complex, 2).unwrap()).unwrap();
        let ext = rebased(&mut rng, &build_extension(&inst.pair, &inst.bim, &c).unwrap());
        let n = inst.pair.dim();
        let s0 = ext.canonical_section();
        let s1 = s0.add(&ext.inclusion.mul(&random_matrix(&mut rng, f5(), m, n)));
        let s2 = s0.add(&ext.inclusion.mul(&random_matrix(&mut rng, f5(), m, n)));
        let bim1 = section_actions(&ext, &s1).unwrap();
        assert_eq!(bim1, section_actions(&ext, &s2).unwrap());
        assert!(check_bimodule(&inst.pair, &bim1).unwrap().passed());
        let c1 = extract_cocycle(&ext, &s1).unwrap();
        let c2 = extract_cocycle(&ext, &s2).unwrap();
        let h = cocycles_cohomologous(&inst.pair, &bim1, &c1, &c2).unwrap().expect("cohomologous");
        let diff = s1.sub(&s2);
        let sections = Matrix::from_columns(
            f5(),
            m,
            &(0..n).map(|j| ext.inclusion.solve(&diff.column(j)).unwrap().unwrap()).collect::<Vec<_>>(),
        );
        let complex = Complex::new(&inst.pair, &bim1).unwrap();
        let shift = complex.big_d(&CochainMrbad::single(MultiTensor::from_matrix(&sections))).unwrap();
        assert_eq!(shift, c1.to_cochain().sub(&c2.to_cochain()));
        let gap = CochainMrbad::single(h.sub(&MultiTensor::from_matrix(&sections)));
        assert!(complex.big_d(&gap).unwrap().is_zero());
        if complex.cohomology(1).unwrap().dim_h == 0 {
            assert_eq!(h.to_matrix(), sections);
        }
        checked += 1;
    }
}

#[test]
fn build_requires_closedness() {
    let mut rng = ChaCha8Rng::seed_from_u64(33);
    let mut rejected = 0;
    for _ in 0..40 {
        let inst = random_instance(&mut rng, f5(), 2, 2).unwrap();
        let complex = Complex::new(&inst.pair, &inst.bim).unwrap();
        let c = random_cocycle(&mut rng, &complex, 2).unwrap();
        assert!(build_extension(&inst.pair, &inst.bim, &CocycleTriple::from_cochain(&c).unwrap()).is_ok());
        let mut v = c.flatten();
        let k = rng.gen_range(0..v.len());
        v[k] += &f5().one();
        let bad = CochainMrbad::from_flat(f5(), 2, 2, 2, &v).unwrap();
        let closed = complex.big_d(&bad).unwrap().is_zero();
        match build_extension(&inst.pair, &inst.bim, &CocycleTriple::from_cochain(&bad).unwrap()) {
            Ok(_) => assert!(closed),
            Err(Error::NotClosed(msg)) => {
                assert!(!closed && msg.starts_with("ext"), "{msg}");
                rejected += 1;
            }
            Err(e) => panic!("{e}"),
        }
    }
    assert!(rejected > 0);
}

#[test]
fn equivalence_is_an_equivalence_relation() {
    let mut rng = ChaCha8Rng::seed_from_u64(34);
    for _ in 0..10 {
        let inst = random_instance(&mut rng, f5(), 2, 2).unwrap();
        let complex = Complex::new(&inst.pair, &inst.bim).unwrap();
        let c = random_cocycle(&mut rng, &complex, 2).unwrap();
        let exts: Vec<AbelianExtension> = (0..3)
            .map(|_| {
                let h = MultiTensor::from_matrix(&random_matrix(&mut rng, f5(), 2, 2));
                let shifted = c.add(&complex.big_d(&CochainMrbad::single(h)).unwrap());
                let e = build_extension(&inst.pair, &inst.bim, &CocycleTriple::from_cochain(&shifted).unwrap()).unwrap();
                rebased(&mut rng, &e)
            })
            .collect();
        for e in &exts {
            assert!(extensions_equivalent(e, e).unwrap().is_some());
        }
        let g01 = extensions_equivalent(&exts[0], &exts[1]).unwrap().unwrap();
        let g12 = extensions_equivalent(&exts[1], &exts[2]).unwrap().unwrap();
        let back = g01.inverse().unwrap();
        assert!(check_homomorphism(&back, &exts[1].total, &exts[0].total).unwrap().passed());
        assert_eq!(back.mul(&exts[1].inclusion), exts[0].inclusion);
        let g02 = g12.mul(&g01);
        assert!(check_homomorphism(&g02, &exts[0].total, &exts[2].total).unwrap().passed());
        assert_eq!(g02.mul(&exts[0].inclusion), exts[2].inclusion);
        assert_eq!(exts[2].projection.mul(&g02), exts[0].projection);
        assert!(extensions_equivalent(&exts[0], &exts[2]).unwrap().is_some());
    }
}

#[test]
fn classification_over_f2() {
    let f2 = Field::prime(2).unwrap();
    let pair = fixd(f2);
    let bim = adjoint_bimodule(&pair);
    let complex = Complex::adjoint(&pair);
    let h2 = complex.cohomology(2).unwrap();
    assert!(h2.dim_h >= 1);
    let classes = classify(&pair, &bim, &h2).unwrap();
    assert_eq!(classes.len(), 1 << h2.dim_h);
    for (i, a) in classes.iter().enumerate() {
        for b in &classes[i + 1..] {
            assert!(extensions_equivalent(a, b).unwrap().is_none());
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(35);
    for _ in 0..30 {
        let c = CocycleTriple::from_cochain(&random_cocycle(&mut rng, &complex, 2).unwrap()).unwrap();
        let ext = rebased(&mut rng, &build_extension(&pair, &bim, &c).unwrap());
        assert!(match_class(&classes, &ext).unwrap().is_some());
    }
}

#[test]
fn split_extension_when_h2_vanishes() {
    let mut rng = ChaCha8Rng::seed_from_u64(36);
    for _ in 0..50 {
        let inst = random_instance(&mut rng, Field::prime(3).unwrap(), 1, 1).unwrap();
        let complex = Complex::new(&inst.pair, &inst.bim).unwrap();
        let h2 = complex.cohomology(2).unwrap();
        let classes = classify(&inst.pair, &inst.bim, &h2).unwrap();
        assert_eq!(classes.len() as u64, 3u64.pow(h2.dim_h as u32));
        if h2.dim_h == 0 {
            let zero = CocycleTriple::zero(&inst.pair, 1);
            assert_eq!(extract_cocycle(&classes[0], &classes[0].canonical_section()).unwrap(), zero);
        }
    }
}

#[test]
fn trivial_coefficients_round_trip() {
    let mut rng = ChaCha8Rng::seed_from_u64(37);
    for _ in 0..20 {
        let inst = random_instance(&mut rng, f5(), 2, 1).unwrap();
        let trivial = mrbad_core::structures::Bimodule::zero(f5(), 2, 1);
        let complex = Complex::new(&inst.pair, &trivial).unwrap();
        let c = CocycleTriple::from_cochain(&random_cocycle(&mut rng, &complex, 2).unwrap()).unwrap();
        let ext = build_extension(&inst.pair, &trivial, &c).unwrap();
        let s = ext.canonical_section();
        assert_eq!(section_actions(&ext, &s).unwrap(), trivial);
        assert_eq!(extract_cocycle(&ext, &s).unwrap(), c);
    }
}

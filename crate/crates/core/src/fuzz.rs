//! Random search for valid pairs and bimodules over small prime fields,
//! and a fixed list of rational instances.
//!
//! Pairs start from a catalog of associative algebras of dimension at most
//! two, rewritten in a random basis. Operators `R` and weights `κ` are
//! found by exhaustive enumeration, derivations by solving the linear
//! system they satisfy.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use rand::Rng;

use crate::cohomology::{mrbad_dim, CochainMrbad, Complex, Differentials, Operator};
use crate::deformation::{next_order_solutions, order_one_solutions, TruncatedDeformation};
use crate::error::{Error, Result};
use crate::linalg::{basis_vector, sub_vectors, Matrix};
use crate::scalar::{Field, Scalar};
use crate::structures::{
    adjoint_bimodule, check_bimodule, check_mrb, fixtures, verify_pair, Algebra, Bimodule, MrbPair,
};
use crate::tensor::{flatten_linear_operator, BasisTuples, MultiTensor};

/// Enumeration budget for `(R, κ)` candidates.
pub const ENUMERATION_CAP: u64 = 1_000_000;

#[derive(Clone, Debug)]
pub struct Instance {
    pub label: String,
    pub pair: MrbPair,
    pub bim: Bimodule,
}

/// Associative algebras of dimension 1 and 2 with integer structure constants.
pub fn catalog(field: Field, dim: usize) -> Vec<(&'static str, Algebra)> {
    match dim {
        1 => alloc::vec![
            ("zero", Algebra::zero(field, 1)),
            ("unital", Algebra::from_table(field, 1, &[(0, 0, &[1])])),
        ],
        2 => alloc::vec![
            ("zero", Algebra::zero(field, 2)),
            ("product", Algebra::from_table(field, 2, &[(0, 0, &[1, 0]), (1, 1, &[0, 1])])),
            ("dual", fixtures::dual_numbers(field)),
            ("nilpotent", Algebra::from_table(field, 2, &[(0, 0, &[0, 1])])),
            ("unit-plus-zero", Algebra::from_table(field, 2, &[(0, 0, &[1, 0])])),
            ("left-unit", Algebra::from_table(field, 2, &[(0, 0, &[1, 0]), (0, 1, &[0, 1])])),
            ("right-unit", Algebra::from_table(field, 2, &[(0, 0, &[1, 0]), (1, 0, &[0, 1])])),
            (
                "quadratic",
                Algebra::from_table(field, 2, &[(0, 0, &[1, 0]), (0, 1, &[0, 1]), (1, 0, &[0, 1]), (1, 1, &[2, 0])]),
            ),
        ],
        _ => alloc::vec![("zero", Algebra::zero(field, dim))],
    }
}

fn random_scalar<R: Rng + ?Sized>(rng: &mut R, field: Field) -> Scalar {
    match field {
        Field::Prime(p) => field.int(rng.gen_range(0..p) as i64),
        Field::Rationals => field.int(rng.gen_range(-3..=3)),
    }
}

fn random_matrix<R: Rng + ?Sized>(rng: &mut R, field: Field, rows: usize, cols: usize) -> Matrix {
    let entries = (0..rows * cols).map(|_| random_scalar(rng, field)).collect();
    Matrix::from_entries(field, rows, cols, entries).expect("sized")
}

pub fn random_invertible<R: Rng + ?Sized>(rng: &mut R, field: Field, n: usize) -> Matrix {
    loop {
        let g = random_matrix(rng, field, n, n);
        if g.rank() == n {
            return g;
        }
    }
}

/// Random combination of basis vectors; zero when the list is empty.
fn random_combination<R: Rng + ?Sized>(rng: &mut R, field: Field, len: usize, basis: &[Vec<Scalar>]) -> Vec<Scalar> {
    let mut v = crate::linalg::zero_vector(field, len);
    for b in basis {
        crate::linalg::axpy(&mut v, &random_scalar(rng, field), b);
    }
    v
}

fn matrices_of(field: Field, n: usize) -> Result<Vec<Matrix>> {
    let p = match field.order() {
        Some(q) => q,
        None => return Err(Error::Enumeration("operators over Q cannot be enumerated".into())),
    };
    let count = (0..n * n).try_fold(1u64, |acc, _| acc.checked_mul(p)).unwrap_or(u64::MAX);
    if count.saturating_mul(p) > ENUMERATION_CAP {
        return Err(Error::Enumeration(format!("{count} matrices of size {n}")));
    }
    let elems: Vec<Scalar> = field.elements().expect("finite").collect();
    let mut out = Vec::with_capacity(count as usize);
    for t in BasisTuples::uniform(elems.len(), n * n) {
        let entries = t.iter().map(|&i| elems[i].clone()).collect();
        out.push(Matrix::from_entries(field, n, n, entries)?);
    }
    Ok(out)
}

/// Every `(R, κ)` satisfying the modified Rota-Baxter identity on `alg`.
pub fn enumerate_operators(alg: &Algebra) -> Result<Vec<(Matrix, Scalar)>> {
    let field = alg.field();
    let kappas: Vec<Scalar> = field
        .elements()
        .ok_or_else(|| Error::Enumeration("weights over Q cannot be enumerated".into()))?
        .collect();
    let mut out = Vec::new();
    for r in matrices_of(field, alg.dim())? {
        for k in &kappas {
            if check_mrb(alg, &r, k).passed() {
                out.push((r.clone(), k.clone()));
            }
        }
    }
    Ok(out)
}

fn matrix_from_flat(field: Field, n: usize, v: &[Scalar]) -> Matrix {
    Matrix::from_entries(field, n, n, v.to_vec()).expect("sized")
}

/// Basis of the derivations of `alg` commuting with `r`.
pub fn derivations_commuting_with(alg: &Algebra, r: &Matrix) -> Result<Vec<Matrix>> {
    let field = alg.field();
    let n = alg.dim();
    let cod = n * n * n + n * n;
    let op = flatten_linear_operator(field, n * n, cod, |v| {
        let d = matrix_from_flat(field, n, v);
        let mut out = Vec::with_capacity(cod);
        for t in BasisTuples::uniform(n, 2) {
            let (a, b) = (alg.basis(t[0]), alg.basis(t[1]));
            let mut rhs = alg.mul(&d.apply(&a), &b);
            crate::linalg::add_into(&mut rhs, &alg.mul(&a, &d.apply(&b)));
            out.extend(sub_vectors(&d.apply(&alg.mul(&a, &b)), &rhs));
        }
        out.extend(r.mul(&d).sub(&d.mul(r)).entries().iter().cloned());
        Ok(out)
    })?;
    Ok(op.kernel().iter().map(|v| matrix_from_flat(field, n, v)).collect())
}

/// Solutions `d_M` of both derivation compatibilities together with
/// `R_M∘d_M = d_M∘R_M`, for fixed actions: a particular solution and a
/// basis of the homogeneous solutions, or `None` when there is none.
pub fn module_derivations(
    pair: &MrbPair,
    left: &MultiTensor,
    right: &MultiTensor,
    r_m: &Matrix,
) -> Result<Option<(Matrix, Vec<Matrix>)>> {
    let field = pair.field();
    let (n, m) = (pair.dim(), r_m.cols());
    let cod = 2 * n * m * m + m * m;
    let e = |i| basis_vector(field, n, i);
    let x = |i| basis_vector(field, m, i);
    // Residuals are affine in d_M: the l(da, m) and r(m, da) terms are constant.
    let residual = |dm: &Matrix| -> Vec<Scalar> {
        let mut out = Vec::with_capacity(cod);
        for t in BasisTuples::new(&[n, m]) {
            let (a, u) = (e(t[0]), x(t[1]));
            let mut rhs = left.apply(&[&pair.d.apply(&a), &u]);
            crate::linalg::add_into(&mut rhs, &left.apply(&[&a, &dm.apply(&u)]));
            out.extend(sub_vectors(&dm.apply(&left.apply(&[&a, &u])), &rhs));
            let mut rhs = right.apply(&[&dm.apply(&u), &a]);
            crate::linalg::add_into(&mut rhs, &right.apply(&[&u, &pair.d.apply(&a)]));
            out.extend(sub_vectors(&dm.apply(&right.apply(&[&u, &a])), &rhs));
        }
        out.extend(r_m.mul(dm).sub(&dm.mul(r_m)).entries().iter().cloned());
        out
    };
    let constant = residual(&Matrix::zeros(field, m, m));
    let op = flatten_linear_operator(field, m * m, cod, |v| {
        Ok(sub_vectors(&residual(&matrix_from_flat(field, m, v)), &constant))
    })?;
    let target: Vec<Scalar> = constant.iter().map(|c| -c).collect();
    Ok(op.solve(&target)?.map(|x0| {
        let kernel = op.kernel().iter().map(|v| matrix_from_flat(field, m, v)).collect();
        (matrix_from_flat(field, m, &x0), kernel)
    }))
}

fn random_module_derivation<R: Rng + ?Sized>(
    rng: &mut R,
    pair: &MrbPair,
    bim: &Bimodule,
) -> Result<Option<Matrix>> {
    let m = bim.dim();
    let field = pair.field();
    Ok(module_derivations(pair, &bim.left, &bim.right, &bim.r_m)?.map(|(x0, kernel)| {
        x0.add(&matrix_from_flat(field, m, &random_combination(rng, field, m * m, &flat(&kernel))))
    }))
}

/// A random valid pair of the given dimension over a prime field.
pub fn random_pair<R: Rng + ?Sized>(rng: &mut R, field: Field, dim: usize) -> Result<(String, MrbPair)> {
    let cat = catalog(field, dim);
    let (name, base) = &cat[rng.gen_range(0..cat.len())];
    let g = random_invertible(rng, field, dim);
    let g_inv = g.inverse().expect("invertible");
    let alg = base.conjugate(&g, &g_inv);
    let ops = enumerate_operators(&alg)?;
    let interesting: Vec<&(Matrix, Scalar)> = ops
        .iter()
        .filter(|(r, k)| !k.is_zero() && !is_scalar_matrix(r))
        .collect();
    let (r, kappa) = if !interesting.is_empty() && rng.gen_bool(0.7) {
        interesting[rng.gen_range(0..interesting.len())].clone()
    } else {
        ops[rng.gen_range(0..ops.len())].clone()
    };
    let ds = derivations_commuting_with(&alg, &r)?;
    let d = matrix_from_flat(field, dim, &random_combination(rng, field, dim * dim, &flat(&ds)));
    let pair = MrbPair::new(alg, r, d, kappa)?;
    debug_assert!(verify_pair(&pair).passed());
    Ok((String::from(*name), pair))
}

fn flat(ms: &[Matrix]) -> Vec<Vec<Scalar>> {
    ms.iter().map(|m| m.entries().to_vec()).collect()
}

fn is_scalar_matrix(r: &Matrix) -> bool {
    let n = r.rows();
    (0..n).all(|i| (0..n).all(|j| if i == j { r.get(i, j) == r.get(0, 0) } else { r.get(i, j).is_zero() }))
}

/// One of several constructions of a valid bimodule of dimension `dim_m`.
pub fn random_bimodule<R: Rng + ?Sized>(
    rng: &mut R,
    pair: &MrbPair,
    dim_m: usize,
) -> Result<(&'static str, Bimodule)> {
    let field = pair.field();
    let n = pair.dim();
    let choice = if dim_m == n { rng.gen_range(0..5) } else { rng.gen_range(3..5) };
    let (name, bim) = match choice {
        0 => ("adjoint", adjoint_bimodule(pair)),
        1 | 2 => {
            let mut b = adjoint_bimodule(pair);
            if choice == 1 {
                b.right = MultiTensor::zeros(field, &[n, n], n)?;
                ("left-regular", b)
            } else {
                b.left = MultiTensor::zeros(field, &[n, n], n)?;
                ("right-regular", b)
            }
        }
        3 => {
            let mut b = Bimodule::zero(field, n, dim_m);
            b.r_m = random_matrix(rng, field, dim_m, dim_m);
            b.d_m = random_module_derivation(rng, pair, &b)?.expect("zero solves the trivial case");
            ("trivial", b)
        }
        _ => match random_actions(rng, pair, dim_m)? {
            Some(b) => ("random-actions", b),
            None => {
                let mut b = Bimodule::zero(field, n, dim_m);
                b.r_m = random_matrix(rng, field, dim_m, dim_m);
                ("trivial", b)
            }
        },
    };
    let h = random_invertible(rng, field, dim_m);
    let bim = bim.conjugate(&Matrix::identity(field, n), &h).expect("invertible");
    debug_assert!(check_bimodule(pair, &bim)?.passed(), "{name}: {}", check_bimodule(pair, &bim)?);
    Ok((name, bim))
}

/// Sparse random actions satisfying the three associativity axioms, then a
/// compatible `R_M` by enumeration and `d_M` from the linear system.
fn random_actions<R: Rng + ?Sized>(rng: &mut R, pair: &MrbPair, m: usize) -> Result<Option<Bimodule>> {
    let field = pair.field();
    let n = pair.dim();
    for _ in 0..64 {
        let mut sparse = |shape: &[usize]| -> Result<MultiTensor> {
            MultiTensor::from_fn(field, shape, m, |_| {
                (0..m)
                    .map(|_| if rng.gen_bool(0.3) { random_scalar(rng, field) } else { field.zero() })
                    .collect()
            })
        };
        let left = sparse(&[n, m])?;
        let right = sparse(&[m, n])?;
        if left.is_zero() && right.is_zero() {
            continue;
        }
        let mut bim = Bimodule {
            left,
            right,
            r_m: Matrix::zeros(field, m, m),
            d_m: Matrix::zeros(field, m, m),
        };
        let assoc = check_bimodule(pair, &bim)?;
        let structural = [
            crate::structures::identity::LEFT_ASSOC,
            crate::structures::identity::MIDDLE_ASSOC,
            crate::structures::identity::RIGHT_ASSOC,
        ];
        if assoc.violations.iter().any(|v| structural.contains(&v.identity.as_str())) {
            continue;
        }
        let mut operators = Vec::new();
        for r_m in matrices_of(field, m)? {
            bim.r_m = r_m;
            let report = check_bimodule(pair, &bim)?;
            let bad = report.violations.iter().any(|v| {
                v.identity == crate::structures::identity::LEFT_OPERATOR
                    || v.identity == crate::structures::identity::RIGHT_OPERATOR
            });
            if !bad {
                operators.push(bim.r_m.clone());
            }
        }
        while !operators.is_empty() {
            bim.r_m = operators.swap_remove(rng.gen_range(0..operators.len()));
            if let Some(d_m) = random_module_derivation(rng, pair, &bim)? {
                bim.d_m = d_m;
                return Ok(Some(bim));
            }
        }
    }
    Ok(None)
}

/// A random valid `(pair, bimodule)` with `dim A = dim_a`, `dim M = dim_m`.
pub fn random_instance<R: Rng + ?Sized>(rng: &mut R, field: Field, dim_a: usize, dim_m: usize) -> Result<Instance> {
    let (alg_name, pair) = random_pair(rng, field, dim_a)?;
    let (bim_name, bim) = random_bimodule(rng, &pair, dim_m)?;
    Ok(Instance {
        label: format!("{alg_name}/{bim_name}"),
        pair,
        bim,
    })
}

/// `count` instances with both dimensions drawn from `1..=max_dim`.
pub fn random_instances<R: Rng + ?Sized>(rng: &mut R, field: Field, max_dim: usize, count: usize) -> Result<Vec<Instance>> {
    (0..count)
        .map(|_| {
            let a = rng.gen_range(1..=max_dim);
            let m = rng.gen_range(1..=max_dim);
            random_instance(rng, field, a, m)
        })
        .collect()
}

/// A uniformly random element of `Zⁿ`.
pub fn random_cocycle<R: Rng + ?Sized>(rng: &mut R, complex: &Complex, n: usize) -> Result<CochainMrbad> {
    let (a, m) = complex.dims();
    let kernel = complex.matrix(Operator::BigD, n)?.kernel();
    let v = random_combination(rng, complex.field(), mrbad_dim(n, a, m), &kernel);
    CochainMrbad::from_flat(complex.field(), n, a, m, &v)
}

/// A random order-1 deformation `(μ + tμ₁, R + tR₁, d + td₁)` found by
/// solving the order-1 equations directly.
pub fn random_order_one<R: Rng + ?Sized>(rng: &mut R, pair: &MrbPair) -> Result<TruncatedDeformation> {
    let (f, n) = (pair.field(), pair.dim());
    let basis: Vec<Vec<Scalar>> = order_one_solutions(pair)?.iter().map(CochainMrbad::flatten).collect();
    let v = random_combination(rng, f, mrbad_dim(2, n, n), &basis);
    TruncatedDeformation::from_cochain(pair, &CochainMrbad::from_flat(f, 2, n, n, &v)?)
}

/// Extends a random order-1 solution order by order with random choices
/// from each affine solution set; `None` when an obstruction is met.
pub fn random_deformation<R: Rng + ?Sized>(rng: &mut R, pair: &MrbPair, order: usize) -> Result<Option<TruncatedDeformation>> {
    let (f, n) = (pair.field(), pair.dim());
    let mut def = random_order_one(rng, pair)?;
    while def.order() < order {
        let (particular, kernel) = match next_order_solutions(&def)? {
            Some(s) => s,
            None => return Ok(None),
        };
        let basis: Vec<Vec<Scalar>> = kernel.iter().map(CochainMrbad::flatten).collect();
        let mut v = random_combination(rng, f, mrbad_dim(2, n, n), &basis);
        crate::linalg::add_into(&mut v, &particular.flatten());
        def = def.with_next(&CochainMrbad::from_flat(f, 2, n, n, &v)?)?;
    }
    Ok(Some(def))
}

/// Searches random pairs for one whose adjoint `H²` has dimension `dim_h2`.
pub fn find_pair_with_h2<R: Rng + ?Sized>(
    rng: &mut R,
    field: Field,
    dim: usize,
    dim_h2: usize,
    tries: usize,
) -> Result<Option<(String, MrbPair)>> {
    for _ in 0..tries {
        let (name, pair) = random_pair(rng, field, dim)?;
        if Complex::adjoint(&pair).cohomology(2)?.dim_h == dim_h2 {
            return Ok(Some((name, pair)));
        }
    }
    Ok(None)
}

fn rational_instance(label: &str, pair: MrbPair, bim: Bimodule) -> Instance {
    Instance {
        label: label.into(),
        pair,
        bim,
    }
}

/// A fixed list of valid instances over Q with `dim A, dim M ≤ 2`.
pub fn rational_instances() -> Vec<Instance> {
    let q = Field::Rationals;
    let fixd = fixtures::fixd(q);
    let mut out = Vec::new();
    out.push(rational_instance("dual/adjoint", fixd.clone(), adjoint_bimodule(&fixd)));
    let mut left = adjoint_bimodule(&fixd);
    left.right = MultiTensor::zeros(q, &[2, 2], 2).expect("small");
    out.push(rational_instance("dual/left-regular", fixd.clone(), left));
    let mut right = adjoint_bimodule(&fixd);
    right.left = MultiTensor::zeros(q, &[2, 2], 2).expect("small");
    out.push(rational_instance("dual/right-regular", fixd.clone(), right));
    let mut triv = Bimodule::zero(q, 2, 2);
    triv.r_m = Matrix::from_ints(q, &[&[2, 1], &[0, 3]]);
    triv.d_m = Matrix::from_ints(q, &[&[1, 1], &[0, 2]]);
    out.push(rational_instance("dual/trivial", fixd.clone(), triv));

    let g = Matrix::from_ints(q, &[&[1, 2], &[1, 3]]);
    let conj = fixd.conjugate(&g).expect("invertible");
    out.push(rational_instance("dual-rebased/adjoint", conj.clone(), adjoint_bimodule(&conj)));

    let lam = fixtures::fix_lambda(fixtures::dual_numbers(q), &q.int(2));
    out.push(rational_instance("dual-scalar/adjoint", lam.clone(), adjoint_bimodule(&lam)));

    let prod = MrbPair::new(
        Algebra::from_table(q, 2, &[(0, 0, &[1, 0]), (1, 1, &[0, 1])]),
        Matrix::diagonal(q, &[1, -1]),
        Matrix::zeros(q, 2, 2),
        q.int(-1),
    )
    .expect("shapes");
    out.push(rational_instance("product/adjoint", prod.clone(), adjoint_bimodule(&prod)));

    let nil = MrbPair::new(
        Algebra::from_table(q, 2, &[(0, 0, &[0, 1])]),
        Matrix::scalar(q, 2, &q.int(2)),
        Matrix::from_ints(q, &[&[1, 0], &[1, 2]]),
        q.int(-4),
    )
    .expect("shapes");
    out.push(rational_instance("nilpotent/adjoint", nil.clone(), adjoint_bimodule(&nil)));

    let zero = MrbPair::new(
        Algebra::zero(q, 2),
        Matrix::from_ints(q, &[&[1, 1], &[0, 1]]),
        Matrix::from_ints(q, &[&[0, 1], &[0, 0]]),
        q.int(3),
    )
    .expect("shapes");
    let mut zb = Bimodule::zero(q, 2, 1);
    zb.r_m = Matrix::from_ints(q, &[&[5]]);
    zb.d_m = Matrix::from_ints(q, &[&[2]]);
    out.push(rational_instance("zero/trivial", zero, zb));

    let unit = MrbPair::new(
        Algebra::from_table(q, 1, &[(0, 0, &[1])]),
        Matrix::from_ints(q, &[&[3]]),
        Matrix::zeros(q, 1, 1),
        q.int(-9),
    )
    .expect("shapes");
    let ub = Bimodule {
        left: MultiTensor::from_flat(q, &[1, 1], 1, alloc::vec![q.one()]).expect("sized"),
        right: MultiTensor::zeros(q, &[1, 1], 1).expect("sized"),
        r_m: Matrix::from_ints(q, &[&[-3]]),
        d_m: Matrix::from_ints(q, &[&[1]]),
    };
    out.push(rational_instance("unital/left-sign", unit.clone(), ub));
    out.push(rational_instance("unital/adjoint", unit.clone(), adjoint_bimodule(&unit)));

    let left_unit = fixtures::fix_lambda(
        Algebra::from_table(q, 2, &[(0, 0, &[1, 0]), (0, 1, &[0, 1])]),
        &q.int(-1),
    );
    out.push(rational_instance("left-unit/adjoint", left_unit.clone(), adjoint_bimodule(&left_unit)));
    out
}

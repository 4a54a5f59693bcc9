//! Named instance files shipped under `data/`.

use mrbad_core::deformation::TruncatedDeformation;
use mrbad_core::extension::{AbelianExtension, CocycleTriple};
use mrbad_core::structures::{adjoint_bimodule, fixtures, Algebra, MrbPair};
use mrbad_core::{Field, Matrix, MultiTensor};

use crate::format::{instance_to_file, ExtensionData, Instance, InstanceFile};

pub const NAMES: &[&str] = &[
    "fix0",
    "fix-lambda-0",
    "fix-lambda-1",
    "fix-lambda-2",
    "fixd",
    "fixd-adjoint",
    "fixd-deform",
    "fixd-extension",
    "fixd-cocycle",
    "fixd-f2",
    "upper-triangular",
];

fn q() -> Field {
    Field::Rationals
}

/// FIXD as an extension of the line `span(e₁)` by `span(e₂)`.
pub fn fixd_extension() -> AbelianExtension {
    let line = MrbPair::new(
        Algebra::from_table(q(), 1, &[(0, 0, &[1])]),
        Matrix::identity(q(), 1),
        Matrix::zeros(q(), 1, 1),
        q().int(-1),
    )
    .expect("shapes agree");
    AbelianExtension::new(
        &line,
        &fixtures::fixd(q()),
        &Matrix::from_ints(q(), &[&[0], &[1]]),
        &Matrix::from_ints(q(), &[&[1, 0]]),
    )
    .expect("FIXD is an extension of the line")
}

/// `d_t = (1 + t) d` on FIXD, to order 4.
pub fn fixd_deformation() -> TruncatedDeformation {
    let base = fixtures::fixd(q());
    let zero = Matrix::zeros(q(), 2, 2);
    TruncatedDeformation::new(
        &base,
        vec![MultiTensor::cochain(q(), 2, 2, 2).expect("small"); 4],
        vec![zero.clone(); 4],
        vec![base.d.clone(), zero.clone(), zero.clone(), zero],
    )
    .expect("shapes agree")
}

pub fn instance(name: &str) -> Option<Instance> {
    let inst = match name {
        "fix0" => Instance::new(fixtures::fix0(q())),
        "fix-lambda-0" | "fix-lambda-1" | "fix-lambda-2" => {
            let lambda: i64 = name[name.len() - 1..].parse().expect("digit");
            Instance::new(fixtures::fix_lambda(fixtures::dual_numbers(q()), &q().int(lambda)))
        }
        "fixd" => Instance::new(fixtures::fixd(q())),
        "fixd-adjoint" => {
            let pair = fixtures::fixd(q());
            let mut inst = Instance::new(pair.clone());
            inst.bimodule = Some(adjoint_bimodule(&pair));
            inst
        }
        "fixd-deform" => {
            let def = fixd_deformation();
            let mut inst = Instance::new(def.base.clone());
            inst.deformation = Some(def);
            inst
        }
        "fixd-extension" => {
            let ext = fixd_extension();
            let mut inst = Instance::new(ext.total.clone());
            inst.extension = Some(ExtensionData {
                inclusion: ext.inclusion.clone(),
                projection: ext.projection.clone(),
                section: Some(Matrix::from_ints(q(), &[&[1], &[1]])),
            });
            inst
        }
        "fixd-cocycle" => {
            let pair = fixtures::fixd(q());
            let mut inst = Instance::new(pair.clone());
            inst.bimodule = Some(adjoint_bimodule(&pair));
            let mut c = CocycleTriple::zero(&pair, 2);
            c.chi = MultiTensor::from_matrix(&Matrix::from_ints(q(), &[&[0, 0], &[0, 1]]));
            inst.cocycle = Some(c);
            inst
        }
        "fixd-f2" => {
            let f2 = Field::prime(2).expect("prime");
            let pair = fixtures::fixd(f2);
            let mut inst = Instance::new(pair.clone());
            inst.bimodule = Some(adjoint_bimodule(&pair));
            inst
        }
        "upper-triangular" => Instance::new(fixtures::upper_triangular_pair(q(), 1)),
        _ => return None,
    };
    Some(inst)
}

pub fn file(name: &str) -> Option<InstanceFile> {
    instance(name).map(|i| instance_to_file(&i))
}

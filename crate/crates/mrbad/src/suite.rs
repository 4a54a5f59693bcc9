//! The property suite run by `fuzz` on every instance.

use mrbad_core::cohomology::calibration::chain_map_holds;
use mrbad_core::cohomology::lie::symmetrization_squares;
use mrbad_core::cohomology::{Complex, Differentials, Operator};
use mrbad_core::structures::{check_bimodule, verify_pair, Bimodule, MrbPair};
use mrbad_core::Matrix;

use crate::report::{Report, Status};

pub const PROPERTIES: &[&str] = &[
    "pair axioms",
    "bimodule axioms",
    "𝔇∘𝔇 = 0",
    "∂∘∂ = 0",
    "δ_Hoch∘δ_Hoch = 0",
    "δ_mHoch∘δ_mHoch = 0",
    "φ is a chain map",
    "φΔ = Δφ",
    "δΔ = Δδ",
    "∂Δ = Δ∂",
    "symmetrization squares",
];

/// Records the first entry where `lhs` and `rhs` differ.
fn compare(report: &mut Report, check: &str, identity: &str, degree: usize, lhs: &Matrix, rhs: &Matrix) {
    for r in 0..lhs.rows() {
        for c in 0..lhs.cols() {
            if lhs.get(r, c) != rhs.get(r, c) {
                let diff = lhs.get(r, c).clone() - rhs.get(r, c);
                report.witness(check, identity, &[degree, r, c], &[diff]);
                return;
            }
        }
    }
}

fn zero_product(report: &mut Report, check: &str, identity: &str, degree: usize, op: Operator, c: &Complex) -> mrbad_core::Result<()> {
    let prod = c.matrix(op, degree + 1)?.mul(&c.matrix(op, degree)?);
    let zero = Matrix::zeros(c.field(), prod.rows(), prod.cols());
    compare(report, check, identity, degree, &prod, &zero);
    Ok(())
}

/// Runs every property on one instance. `check` labels the witnesses.
/// Symmetrization is skipped, and listed under `skipped`, when the
/// characteristic is too small.
pub fn run(check: &str, pair: &MrbPair, bim: &Bimodule) -> mrbad_core::Result<Report> {
    let mut report = Report::new("suite", Status::Pass);
    report.add_check(check, &verify_pair(pair));
    report.add_check(check, &check_bimodule(pair, bim)?);
    if !report.passed() {
        return Ok(report);
    }
    let c = Complex::new(pair, bim)?;
    for n in 1..=3 {
        zero_product(&mut report, check, PROPERTIES[2], n, Operator::BigD, &c)?;
        zero_product(&mut report, check, PROPERTIES[3], n, Operator::Partial, &c)?;
        zero_product(&mut report, check, PROPERTIES[4], n, Operator::Hoch, &c)?;
        zero_product(&mut report, check, PROPERTIES[5], n, Operator::MHoch, &c)?;
    }
    let mut skipped = Vec::new();
    for n in 1..=2 {
        if !chain_map_holds(&c, n)? {
            let lhs = c.matrix(Operator::Phi, n + 1)?.mul(&c.matrix(Operator::Hoch, n)?);
            let rhs = c.matrix(Operator::MHoch, n)?.mul(&c.matrix(Operator::Phi, n)?);
            compare(&mut report, check, PROPERTIES[6], n, &lhs, &rhs);
        }
        let (phi, delta) = (c.matrix(Operator::Phi, n)?, c.matrix(Operator::DeltaOp, n)?);
        compare(&mut report, check, PROPERTIES[7], n, &phi.mul(&delta), &delta.mul(&phi));
        let hoch = c.matrix(Operator::Hoch, n)?;
        let delta_next = c.matrix(Operator::DeltaOp, n + 1)?;
        compare(&mut report, check, PROPERTIES[8], n, &hoch.mul(&delta), &delta_next.mul(&hoch));
        let partial = c.matrix(Operator::Partial, n)?;
        let pair_op = c.matrix(Operator::DeltaPair, n)?;
        let pair_next = c.matrix(Operator::DeltaPair, n + 1)?;
        compare(&mut report, check, PROPERTIES[9], n, &partial.mul(&pair_op), &pair_next.mul(&partial));
        match symmetrization_squares(&c, n) {
            Ok(out) if out.all() => {}
            Ok(out) => {
                let failed: Vec<usize> = [out.hochschild, out.operator_pairs, out.full]
                    .iter()
                    .enumerate()
                    .filter(|(_, ok)| !**ok)
                    .map(|(k, _)| k)
                    .collect();
                for k in failed {
                    report.witness(check, PROPERTIES[10], &[n, k], &[c.field().one()]);
                }
            }
            Err(mrbad_core::Error::Characteristic { .. }) => skipped.push(serde_json::Value::from(n as u64)),
            Err(e) => return Err(e),
        }
    }
    if !skipped.is_empty() {
        report.set("symmetrization_skipped_degrees", skipped);
    }
    Ok(report)
}

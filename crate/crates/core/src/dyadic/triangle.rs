use super::{meet, rho, DyadicError, DyadicParams, DyadicPoint};
use crate::qcore::Rational;

/// Three points `left < apex < right` where `left` lies on the left path of
/// `apex` and `right` lies on the right paths of both.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct SpecialTriangle {
    pub left: DyadicPoint,
    pub apex: DyadicPoint,
    pub right: DyadicPoint,
}

pub fn is_special_triangle(left: DyadicPoint, apex: DyadicPoint, right: DyadicPoint) -> bool {
    left != apex
        && apex != right
        && apex.left_path().contains(&left)
        && apex.right_path().contains(&right)
        && left.right_path().contains(&right)
}

/// Every special triangle whose apex has level at most `depth`, ascending by
/// `(left, apex, right)`.
pub fn special_triangles(depth: u32) -> Result<Vec<SpecialTriangle>, DyadicError> {
    let mut out = Vec::new();
    for apex in DyadicPoint::up_to_depth(depth)? {
        let rights = apex.right_path();
        for &left in apex.left_path().iter().skip(1) {
            let left_rights = left.right_path();
            for &right in rights.iter().skip(1) {
                if left_rights.contains(&right) {
                    out.push(SpecialTriangle { left, apex, right });
                }
            }
        }
    }
    out.sort();
    Ok(out)
}

/// `ρ(left, apex) + ρ(apex, right) − ρ(left, right)`, which equals
/// `τ_n − τ_m` for `n = level(apex)`, `m = level(left)`.
pub fn special_defect(t: &SpecialTriangle, params: &DyadicParams) -> Result<Rational, DyadicError> {
    Ok(
        rho(t.left, t.apex, params)? + rho(t.apex, t.right, params)?
            - rho(t.left, t.right, params)?,
    )
}

/// Reduce a triangle `z1 < z0 < z2` with `z0` at or left of the meet of
/// `z1` and `z2` to the special triangle `(z1', z0, z2')`:
///
/// * `z1'` is where the left path of `z0` crosses the right path of `z1`;
/// * `z2'` is the first point of the right path of `z0` that lies on the
///   right path of `z1`.
///
/// Then `ρ(z1,z0) = ρ(z1,z1') + ρ(z1',z0)`, `ρ(z0,z2) = ρ(z0,z2') + ρ(z2',z2)`
/// and `ρ(z1,z2) = ρ(z1,z1') + ρ(z1',z2') + ρ(z2',z2)`. When `z0` is on the
/// right path of `z1` both new points collapse onto `z0`. The case where
/// `z0` lies right of the meet is the mirror image of this one.
pub fn reduce_triangle(
    z1: DyadicPoint,
    z0: DyadicPoint,
    z2: DyadicPoint,
) -> Result<(DyadicPoint, DyadicPoint), DyadicError> {
    if !(z1 < z0 && z0 < z2) {
        return Err(DyadicError::PrecondViolation(format!(
            "reduce_triangle needs z1 < z0 < z2, got {z1}, {z0}, {z2}"
        )));
    }
    let lowest = meet(z1, z2)?;
    if z0 > lowest {
        return Err(DyadicError::PrecondViolation(format!(
            "{z0} lies right of the meet {lowest}; mirror the triangle first"
        )));
    }
    let z1_prime = meet(z1, z0)?;
    let z1_rights = z1.right_path();
    let z2_prime = z0
        .right_path()
        .into_iter()
        .find(|p| z1_rights.contains(p))
        .ok_or_else(|| DyadicError::NoIntersection(z0.to_string(), z1.to_string()))?;
    Ok((z1_prime, z2_prime))
}

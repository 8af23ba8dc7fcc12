use super::enumerate::{set_partitions, Closure};
use super::{
    cover_components, is_finer, is_periodic_partition, orbit, step, wedge, Partition, SubsetFamily,
};
use crate::error::{Error, Result};
use crate::graph::is_ergodic;
use crate::limits::Limits;
use crate::op::BinaryOperation;
use serde::Serialize;

/// `<A>`: the finest periodic partition coarser than `A`.
///
/// Up to `limits.enumeration_cap` this is the wedge of every periodic
/// partition coarser than `A`; above it the phase closure is used.
pub fn generated_partition(
    op: &BinaryOperation,
    a: &SubsetFamily,
    limits: &Limits,
) -> Result<Partition> {
    if !op.is_uniformity_preserving() {
        return Err(Error::NotUniformityPreserving);
    }
    if limits.check_enumeration(op.q()).is_err() {
        limits.check_q(op.q())?;
        return generated_partition_closure(op, a);
    }
    let mut acc = Partition::trivial(op.q());
    for h in set_partitions(op.q()) {
        if is_finer(a, &h.to_family()) && is_periodic_partition(op, &h).0 {
            acc = wedge(&acc, &h);
        }
    }
    Ok(acc)
}

/// `<A>` by closing the members of `A` under the periodicity rules.
pub fn generated_partition_closure(op: &BinaryOperation, a: &SubsetFamily) -> Result<Partition> {
    if !op.is_uniformity_preserving() {
        return Err(Error::NotUniformityPreserving);
    }
    let h = Closure::new(op).close(a.members().iter().copied());
    if !is_periodic_partition(op, &h).0 || !is_finer(a, &h.to_family()) {
        return Err(Error::VerificationFailed(format!(
            "closure of {a:?} produced {h}, which is not a periodic partition above it"
        )));
    }
    Ok(h)
}

/// The finest stable partition coarser than `A`; only defined for ergodic
/// operations, where periodic partitions are stable.
pub fn generated_stable_partition(
    op: &BinaryOperation,
    a: &SubsetFamily,
    limits: &Limits,
) -> Result<Partition> {
    if !op.is_uniformity_preserving() {
        return Err(Error::NotUniformityPreserving);
    }
    if !is_ergodic(op) {
        return Err(Error::NotErgodic);
    }
    generated_partition(op, a, limits)
}

/// Outcome of iterating a cover towards its generated partition.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CoverOrbitReport {
    pub generated: Vec<Vec<usize>>,
    pub generated_period: usize,
    /// Least `n` with `A^{n*} = <A>` and `per(<A>) | n`, if any exists.
    pub witness: Option<usize>,
    pub preperiod: usize,
    pub cycle_length: usize,
    /// `P(P(A)^{n*}) = P(A^{n*})` held for every `n` in the orbit.
    pub components_commute: bool,
    /// Every iterate on the cycle (a periodic cover) is a stable partition.
    pub periodic_iterates_are_partitions: bool,
}

/// Iterates `A^{n*}` to its cycle and looks for `n` with `A^{n*} = <A>` and
/// `per(<A>) | n`. No hypothesis on the operation beyond uniformity
/// preservation is checked.
pub fn cover_orbit_search(
    op: &BinaryOperation,
    a: &SubsetFamily,
    limits: &Limits,
) -> Result<CoverOrbitReport> {
    if !a.is_cover() {
        return Err(Error::NotACover);
    }
    let gen = generated_partition(op, a, limits)?;
    let gen_period = is_periodic_partition(op, &gen).1.unwrap();
    let orb = orbit(op, a, limits.orbit_budget)?;
    let target = gen.to_family();

    let total = orb.preperiod + orb.cycle_length;
    let mut witness: Option<usize> = None;
    for (j, fam) in orb.iterates.iter().enumerate() {
        if *fam != target {
            continue;
        }
        // every n = j + k*c with n >= j hits the same iterate once j is on the cycle
        let step_len = if j >= orb.preperiod { orb.cycle_length } else { 0 };
        let candidates = if step_len == 0 { 1 } else { gen_period };
        for k in 0..candidates {
            let n = j + k * step_len;
            if n % gen_period == 0 {
                witness = Some(witness.map_or(n, |w: usize| w.min(n)));
                break;
            }
        }
    }

    let p = cover_components(a)?;
    let mut pf = p.to_family();
    let mut components_commute = true;
    for n in 0..total {
        let lhs = cover_components(&pf)?;
        let rhs = cover_components(orb.iterate(n))?;
        components_commute &= lhs == rhs;
        pf = step(op, &pf);
    }

    let periodic_iterates_are_partitions = (orb.preperiod..total).all(|n| {
        orb.iterate(n)
            .as_partition()
            .is_some_and(|h| h.is_balanced())
    });

    Ok(CoverOrbitReport {
        generated: gen.to_vecs(),
        generated_period: gen_period,
        witness,
        preperiod: orb.preperiod,
        cycle_length: orb.cycle_length,
        components_commute,
        periodic_iterates_are_partitions,
    })
}

/// [`cover_orbit_search`] for strongly ergodic operations.
pub fn cover_orbit_analysis(
    op: &BinaryOperation,
    a: &SubsetFamily,
    limits: &Limits,
) -> Result<CoverOrbitReport> {
    if !a.is_cover() {
        return Err(Error::NotACover);
    }
    if !crate::residue::is_strongly_ergodic(op, limits)? {
        return Err(Error::NotStronglyErgodic);
    }
    cover_orbit_search(op, a, limits)
}

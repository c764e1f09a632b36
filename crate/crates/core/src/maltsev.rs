//! Decomposition of finite algebras into semilattice sums and the
//! membership tests for products V∘S and relative products V∘_W S,
//! plus the partition-operation audit against (P1)-(P5).

use std::collections::BTreeMap;
use std::fmt;

use itertools::Itertools;

use crate::algebra::{format_assignment, AlgebraError, FiniteAlgebra, Verdict, DEFAULT_BUDGET};
use crate::congruence::{
    compose, is_congruence, join, semilattice_replica, CongruenceError, Partition, Relation,
};
use crate::equation::{plonka_axioms_labeled, AxiomSet};
use crate::term::Term;

/// A finite algebra split over its semilattice replica: the quotient
/// semilattice and one subalgebra per replica block.
#[derive(Debug, Clone)]
pub struct Decomposition {
    pub replica: Partition,
    pub quotient: FiniteAlgebra,
    /// element -> block index
    pub block_map: Vec<usize>,
    pub blocks: Vec<DecomposedBlock>,
}

#[derive(Debug, Clone)]
pub struct DecomposedBlock {
    pub algebra: FiniteAlgebra,
    /// local index -> original element
    pub elements: Vec<usize>,
}

/// Splits an algebra over its semilattice replica. Always succeeds for
/// a plural signature; whether the blocks land in a particular variety
/// is a separate question.
pub fn decompose(alg: &FiniteAlgebra) -> Result<Decomposition, CongruenceError> {
    let replica = semilattice_replica(alg)?;
    let (quotient, block_map) = alg.quotient(&replica)?;
    let blocks = replica
        .blocks()
        .into_iter()
        .map(|b| {
            let (algebra, elements) = alg.restrict(&b)?;
            Ok(DecomposedBlock { algebra, elements })
        })
        .collect::<Result<Vec<_>, CongruenceError>>()?;
    Ok(Decomposition {
        replica,
        quotient,
        block_map,
        blocks,
    })
}

/// Failure evidence from a block check, reported in the labels of the
/// original algebra.
#[derive(Debug, Clone)]
pub struct BlockFailure {
    pub block: Vec<usize>,
    pub formula: String,
    pub witness: BTreeMap<String, usize>,
}

#[derive(Debug, Clone)]
pub struct MembershipReport {
    pub member: bool,
    pub replica: Partition,
    pub failure: Option<BlockFailure>,
    /// Set when the constraint set contains quasi-identities: blocks are
    /// still checked against them, but the verdict relies on the same
    /// replica reduction as the equational case.
    pub quasi_caveat: bool,
}

impl fmt::Display for MembershipReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "replica: {}", self.replica)?;
        if let Some(fail) = &self.failure {
            writeln!(
                f,
                "block {{{}}}: FAIL {} at {}",
                fail.block.iter().map(|e| e.to_string()).join(","),
                fail.formula,
                format_assignment(&fail.witness)
            )?;
        }
        if self.quasi_caveat {
            writeln!(f, "note: constraints include quasi-identities; verdict is replica-based")?;
        }
        write!(f, "verdict: {}", if self.member { "MEMBER" } else { "NON-MEMBER" })
    }
}

fn formula_display(v: &AxiomSet, index: usize) -> String {
    if index < v.identities.len() {
        v.identities[index].to_string()
    } else {
        v.quasi_identities[index - v.identities.len()].to_string()
    }
}

/// Membership of `alg` in the semilattice sums of models of `v`: every
/// block of the replica decomposition must satisfy `v`. The replica
/// suffices because replica blocks are subalgebras of the blocks of any
/// other decomposition congruence.
pub fn in_product_with_s(alg: &FiniteAlgebra, v: &AxiomSet) -> Result<MembershipReport, CongruenceError> {
    in_product_with_s_budget(alg, v, DEFAULT_BUDGET)
}

pub fn in_product_with_s_budget(
    alg: &FiniteAlgebra,
    v: &AxiomSet,
    budget: u64,
) -> Result<MembershipReport, CongruenceError> {
    if &v.signature != alg.signature() {
        return Err(AlgebraError::SignatureMismatch.into());
    }
    let dec = decompose(alg)?;
    let quasi_caveat = !v.quasi_identities.is_empty();
    for block in &dec.blocks {
        if let Verdict::Fails { formula, witness } =
            block.algebra.satisfies_all_budget(v, budget)?
        {
            let witness = witness
                .into_iter()
                .map(|(var, local)| (var, block.elements[local]))
                .collect();
            return Ok(MembershipReport {
                member: false,
                replica: dec.replica,
                failure: Some(BlockFailure {
                    block: block.elements.clone(),
                    formula: formula_display(v, formula),
                    witness,
                }),
                quasi_caveat,
            });
        }
    }
    Ok(MembershipReport {
        member: true,
        replica: dec.replica,
        failure: None,
        quasi_caveat,
    })
}

#[derive(Debug, Clone)]
pub struct RelativeMembershipReport {
    pub member: bool,
    /// Failure of the ambient axioms `w` on the whole algebra, if any.
    pub ambient_failure: Option<(String, BTreeMap<String, usize>)>,
    pub product: Option<MembershipReport>,
}

impl fmt::Display for RelativeMembershipReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some((formula, witness)) = &self.ambient_failure {
            writeln!(f, "ambient: FAIL {} at {}", formula, format_assignment(witness))?;
        } else {
            writeln!(f, "ambient: OK")?;
        }
        if let Some(p) = &self.product {
            writeln!(f, "{p}")?;
        }
        write!(f, "verdict: {}", if self.member { "MEMBER" } else { "NON-MEMBER" })
    }
}

/// Membership in the product relative to an ambient variety `w`:
/// the algebra must satisfy `w` and lie in the semilattice sums of
/// models of `v`.
pub fn in_relative_product(
    alg: &FiniteAlgebra,
    v: &AxiomSet,
    w: &AxiomSet,
) -> Result<RelativeMembershipReport, CongruenceError> {
    in_relative_product_budget(alg, v, w, DEFAULT_BUDGET)
}

pub fn in_relative_product_budget(
    alg: &FiniteAlgebra,
    v: &AxiomSet,
    w: &AxiomSet,
    budget: u64,
) -> Result<RelativeMembershipReport, CongruenceError> {
    if &w.signature != alg.signature() {
        return Err(AlgebraError::SignatureMismatch.into());
    }
    if let Verdict::Fails { formula, witness } = alg.satisfies_all_budget(w, budget)? {
        return Ok(RelativeMembershipReport {
            member: false,
            ambient_failure: Some((formula_display(w, formula), witness)),
            product: None,
        });
    }
    let product = in_product_with_s_budget(alg, v, budget)?;
    Ok(RelativeMembershipReport {
        member: product.member,
        ambient_failure: None,
        product: Some(product),
    })
}

/// Audit of a binary term as a (pseudo)partition operation.
#[derive(Debug, Clone)]
pub struct PartitionOpReport {
    /// One entry per instantiated axiom, in the order P1, P2, P3,
    /// then P4 and P5 expanded per symbol.
    pub axioms: Vec<(String, Verdict)>,
    pub pseudo_holds: bool,
    pub partition_holds: bool,
    /// Present when P1-P4 all hold.
    pub relation: Option<PartitionRelationReport>,
    pub replica: Partition,
}

/// The decomposition relation `{(a,b) : a.b = a and b.a = b}` induced
/// by the candidate operation.
#[derive(Debug, Clone)]
pub struct PartitionRelationReport {
    pub is_equivalence: bool,
    pub partition: Option<Partition>,
    pub is_congruence: bool,
    pub equals_replica: bool,
}

impl fmt::Display for PartitionOpReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (label, verdict) in &self.axioms {
            match verdict {
                Verdict::Holds => writeln!(f, "{label}: OK")?,
                Verdict::Fails { witness, .. } => {
                    writeln!(f, "{label}: FAIL at {}", format_assignment(witness))?
                }
            }
        }
        if let Some(rel) = &self.relation {
            match &rel.partition {
                Some(p) => writeln!(
                    f,
                    "decomposition relation: {} (congruence: {}, equals replica: {})",
                    p,
                    if rel.is_congruence { "yes" } else { "no" },
                    if rel.equals_replica { "yes" } else { "no" },
                )?,
                None => writeln!(f, "decomposition relation: not an equivalence")?,
            }
        }
        writeln!(f, "replica: {}", self.replica)?;
        let verdict = if self.partition_holds {
            "PARTITION"
        } else if self.pseudo_holds {
            "PSEUDO-PARTITION"
        } else {
            "NEITHER"
        };
        write!(f, "verdict: {verdict}")
    }
}

/// Checks which of (P1)-(P5) hold for `x.y := t(x,y)` and, when the
/// pseudopartition laws all hold, compares the induced decomposition
/// relation with the semilattice replica.
pub fn partition_operation_report(
    alg: &FiniteAlgebra,
    t: &Term,
) -> Result<PartitionOpReport, CongruenceError> {
    let labeled = plonka_axioms_labeled(alg.signature(), t)?;
    let mut axioms = Vec::with_capacity(labeled.len());
    let mut pseudo_holds = true;
    let mut partition_holds = true;
    for (label, id) in labeled {
        let verdict = alg.satisfies_identity(&id)?;
        if !verdict.holds() {
            partition_holds = false;
            if !label.starts_with("P5") {
                pseudo_holds = false;
            }
        }
        axioms.push((label, verdict));
    }
    let replica = semilattice_replica(alg)?;
    let relation = if pseudo_holds {
        Some(decomposition_relation_report(alg, t, &replica)?)
    } else {
        None
    };
    Ok(PartitionOpReport {
        axioms,
        pseudo_holds,
        partition_holds,
        relation,
        replica,
    })
}

fn decomposition_relation_report(
    alg: &FiniteAlgebra,
    t: &Term,
    replica: &Partition,
) -> Result<PartitionRelationReport, CongruenceError> {
    let n = alg.size();
    let vars = t.variables();
    debug_assert_eq!(vars.len(), 2);
    let mut product = vec![0usize; n * n];
    for a in 0..n {
        for b in 0..n {
            let asg: BTreeMap<String, usize> =
                [(vars[0].clone(), a), (vars[1].clone(), b)].into();
            product[a * n + b] = alg.eval(t, &asg)?;
        }
    }
    let related = |a: usize, b: usize| product[a * n + b] == a && product[b * n + a] == b;
    // Reflexivity follows from P1 and symmetry from the shape of the
    // relation; transitivity still needs a check.
    let mut is_equivalence = true;
    'out: for a in 0..n {
        for b in 0..n {
            if !related(a, b) {
                continue;
            }
            for c in 0..n {
                if related(b, c) && !related(a, c) {
                    is_equivalence = false;
                    break 'out;
                }
            }
        }
    }
    if !is_equivalence {
        return Ok(PartitionRelationReport {
            is_equivalence,
            partition: None,
            is_congruence: false,
            equals_replica: false,
        });
    }
    let pairs: Vec<(usize, usize)> = (0..n)
        .cartesian_product(0..n)
        .filter(|&(a, b)| related(a, b))
        .collect();
    let partition = Partition::from_pairs(n, &pairs);
    let is_cong = is_congruence(alg, &partition);
    let equals_replica = &partition == replica;
    Ok(PartitionRelationReport {
        is_equivalence,
        partition: Some(partition),
        is_congruence: is_cong,
        equals_replica,
    })
}

/// Does `theta v replica = theta o replica o theta` as relations?
pub fn check_three_permutability(
    alg: &FiniteAlgebra,
    theta: &Partition,
) -> Result<bool, CongruenceError> {
    if !is_congruence(alg, theta) {
        return Err(AlgebraError::NotACongruence.into());
    }
    let rho = semilattice_replica(alg)?;
    let joined = Relation::from_partition(&join(alg, theta, &rho)?);
    let composed = compose(theta, &rho).compose(&Relation::from_partition(theta));
    Ok(joined == composed)
}

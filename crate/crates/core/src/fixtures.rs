//! Shipped fixtures (embedded copies of the `data/` files) and the
//! scripted verification suite asserting the documented facts about
//! them.

use std::fmt;

use crate::algebra::{parse_ualg_file, FiniteAlgebra, Verdict};
use crate::congruence::{congruence_generated, semilattice_replica};
use crate::equation::{AxiomSet, Identity, QuasiIdentity};
use crate::maltsev::{in_product_with_s, partition_operation_report};
use crate::search::{band_census, enumerate_lz_sums, find_separating_model};
use crate::signature::Signature;
use crate::term::Term;

pub const EXSS_UALG: &str = include_str!("../data/exss.ualg");
pub const BICHAIN_3M_UALG: &str = include_str!("../data/bichain_3m.ualg");
pub const BICHAIN_3J_UALG: &str = include_str!("../data/bichain_3j.ualg");
pub const BICHAIN_3N_UALG: &str = include_str!("../data/bichain_3n.ualg");
pub const A_INF_2_UALG: &str = include_str!("../data/a_inf_2.ualg");
pub const SQUAG3_UALG: &str = include_str!("../data/squag3.ualg");
pub const BANDS_UALG: &str = include_str!("../data/bands.ualg");
pub const CHAIN2_UALG: &str = include_str!("../data/chain2.ualg");
pub const SEMILATTICE_EQ: &str = include_str!("../data/semilattice.eq");
pub const LZ_EQ: &str = include_str!("../data/lz.eq");
pub const CG_EQ: &str = include_str!("../data/cg.eq");
pub const BAND_EQ: &str = include_str!("../data/band.eq");
pub const QCG_EQ: &str = include_str!("../data/qcg.eq");
pub const LATTICE_EQ: &str = include_str!("../data/lattice.eq");
pub const SQUAG_EQ: &str = include_str!("../data/squag.eq");
pub const SQUAG_REGULARIZATION_EQ: &str = include_str!("../data/squag_regularization.eq");
pub const PLONKA_LZ4_SUM: &str = include_str!("../data/plonka_lz4.sum");
pub const LALLEMENT_3N_SUM: &str = include_str!("../data/lallement_3n.sum");

/// Every shipped data file, by name, for round-trip tests and the CLI.
pub fn data_files() -> Vec<(&'static str, &'static str)> {
    vec![
        ("exss.ualg", EXSS_UALG),
        ("bichain_3m.ualg", BICHAIN_3M_UALG),
        ("bichain_3j.ualg", BICHAIN_3J_UALG),
        ("bichain_3n.ualg", BICHAIN_3N_UALG),
        ("a_inf_2.ualg", A_INF_2_UALG),
        ("squag3.ualg", SQUAG3_UALG),
        ("bands.ualg", BANDS_UALG),
        ("chain2.ualg", CHAIN2_UALG),
        ("semilattice.eq", SEMILATTICE_EQ),
        ("lz.eq", LZ_EQ),
        ("cg.eq", CG_EQ),
        ("band.eq", BAND_EQ),
        ("qcg.eq", QCG_EQ),
        ("lattice.eq", LATTICE_EQ),
        ("squag.eq", SQUAG_EQ),
        ("squag_regularization.eq", SQUAG_REGULARIZATION_EQ),
        ("plonka_lz4.sum", PLONKA_LZ4_SUM),
        ("lallement_3n.sum", LALLEMENT_3N_SUM),
    ]
}

fn first_algebra(text: &str) -> FiniteAlgebra {
    let (_, algebras) = parse_ualg_file(text).expect("embedded fixture parses");
    algebras.into_iter().next().expect("fixture has an algebra")
}

fn named_algebra(text: &str, name: &str) -> FiniteAlgebra {
    let (_, algebras) = parse_ualg_file(text).expect("embedded fixture parses");
    algebras
        .into_iter()
        .find(|a| a.name() == name)
        .expect("fixture name exists")
}

pub fn exss() -> FiniteAlgebra {
    first_algebra(EXSS_UALG)
}

pub fn bichain_3m() -> FiniteAlgebra {
    first_algebra(BICHAIN_3M_UALG)
}

pub fn bichain_3j() -> FiniteAlgebra {
    first_algebra(BICHAIN_3J_UALG)
}

pub fn bichain_3n() -> FiniteAlgebra {
    first_algebra(BICHAIN_3N_UALG)
}

pub fn a_inf_2() -> FiniteAlgebra {
    first_algebra(A_INF_2_UALG)
}

pub fn squag3() -> FiniteAlgebra {
    first_algebra(SQUAG3_UALG)
}

pub fn band_fixture(name: &str) -> FiniteAlgebra {
    named_algebra(BANDS_UALG, name)
}

/// The 2-element chain semilattice.
pub fn two_chain() -> FiniteAlgebra {
    first_algebra(CHAIN2_UALG)
}

pub fn groupoid_signature() -> Signature {
    Signature::parse("mul 2").expect("valid signature")
}

pub fn bisemilattice_signature() -> Signature {
    Signature::parse("meet 2\njoin 2").expect("valid signature")
}

pub fn semilattice_axioms() -> AxiomSet {
    AxiomSet::parse(SEMILATTICE_EQ, "semilattice", None).expect("embedded axioms parse")
}

pub fn left_zero_axioms() -> AxiomSet {
    AxiomSet::parse(LZ_EQ, "lz", None).expect("embedded axioms parse")
}

pub fn commutative_axioms() -> AxiomSet {
    AxiomSet::parse(CG_EQ, "cg", None).expect("embedded axioms parse")
}

pub fn band_axioms() -> AxiomSet {
    AxiomSet::parse(BAND_EQ, "band", None).expect("embedded axioms parse")
}

pub fn lattice_axioms() -> AxiomSet {
    AxiomSet::parse(LATTICE_EQ, "lattice", None).expect("embedded axioms parse")
}

pub fn squag_axioms() -> AxiomSet {
    AxiomSet::parse(SQUAG_EQ, "squag", None).expect("embedded axioms parse")
}

pub fn squag_regularization_axioms() -> AxiomSet {
    AxiomSet::parse(SQUAG_REGULARIZATION_EQ, "squag-regularization", None)
        .expect("embedded axioms parse")
}

/// The quasi-identity `(zx=x & zy=y & xz=yz) -> xy=yx`.
pub fn cg_quasi_identity() -> QuasiIdentity {
    let ax = AxiomSet::parse(QCG_EQ, "qcg", None).expect("embedded axioms parse");
    ax.quasi_identities.into_iter().next().expect("one quasi-identity")
}

/// `t(x,y) = x + xy` over the bisemilattice signature.
pub fn birkhoff_partition_term() -> Term {
    Term::parse("(join x (meet x y))", &bisemilattice_signature()).expect("valid term")
}

#[derive(Debug, Clone)]
pub struct SuiteCheck {
    pub label: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone)]
pub struct SuiteReport {
    pub checks: Vec<SuiteCheck>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for check in &self.checks {
            writeln!(
                f,
                "{} {}: {}",
                if check.passed { "PASS" } else { "FAIL" },
                check.label,
                check.detail
            )?;
        }
        let passed = self.checks.iter().filter(|c| c.passed).count();
        write!(f, "result: {passed}/{} checks passed", self.checks.len())
    }
}

/// Runs every scripted assertion about the shipped fixtures. Failures
/// are reported, not panicked, so a corrupted fixture shows up as a
/// FAIL line.
pub fn run_paper_suite() -> SuiteReport {
    let mut checks = Vec::new();
    let mut push = |label: &str, passed: bool, detail: String| {
        checks.push(SuiteCheck { label: label.to_string(), passed, detail });
    };

    // (a) replica of the 7-element fixture
    let a = exss();
    let replica = semilattice_replica(&a).expect("plural signature");
    push(
        "(a) exss replica",
        replica.to_string() == "{0,1|2,3|4,5|6}",
        format!("computed {replica}"),
    );

    // (b) congruence generated by (2,4)
    let theta = congruence_generated(&a, &[(2, 4)]);
    push(
        "(b) exss congruence generated by (2,4)",
        theta.to_string() == "{0,2,4|1|3|5|6}",
        format!("computed {theta}"),
    );

    // (c) membership of exss and failure of its quotient
    let sl = semilattice_axioms();
    let in_ss = in_product_with_s(&a, &sl).expect("same signature");
    push(
        "(c1) exss is a semilattice of semilattices",
        in_ss.member,
        format!("verdict {}", if in_ss.member { "MEMBER" } else { "NON-MEMBER" }),
    );
    let (b, block_map) = a.quotient(&theta).expect("theta is a congruence");
    let q = cg_quasi_identity();
    let expected_witness: Vec<(String, usize)> = [("x", 3usize), ("y", 5), ("z", 6)]
        .iter()
        .map(|&(v, e)| (v.to_string(), block_map[e]))
        .collect();
    let (qc_pass, qc_detail) = match b.satisfies_quasi(&q).expect("budget") {
        Verdict::Holds => (false, "quasi-identity unexpectedly holds".to_string()),
        Verdict::Fails { witness, .. } => {
            let expected: std::collections::BTreeMap<String, usize> =
                expected_witness.into_iter().collect();
            (
                witness == expected,
                format!("witness {}", crate::algebra::format_assignment(&witness)),
            )
        }
    };
    push("(c2) quotient by (2,4) fails the commutativity quasi-identity", qc_pass, qc_detail);
    let cg = commutative_axioms();
    let b_in_cg = in_product_with_s(&b, &cg).expect("same signature");
    let b_in_ss = in_product_with_s(&b, &sl).expect("same signature");
    push(
        "(c3) the quotient is in neither product",
        !b_in_cg.member && !b_in_ss.member,
        format!(
            "cg verdict {}, semilattice verdict {}",
            if b_in_cg.member { "MEMBER" } else { "NON-MEMBER" },
            if b_in_ss.member { "MEMBER" } else { "NON-MEMBER" }
        ),
    );

    // (d) bichain membership with the lattice axiom set
    let lat = lattice_axioms();
    let n3 = in_product_with_s(&bichain_3n(), &lat).expect("same signature");
    let m3 = in_product_with_s(&bichain_3m(), &lat).expect("same signature");
    let j3 = in_product_with_s(&bichain_3j(), &lat).expect("same signature");
    push(
        "(d) only the third bichain is a semilattice sum of lattices",
        n3.member && !m3.member && !j3.member,
        format!(
            "3n {}, 3m {}, 3j {}",
            if n3.member { "MEMBER" } else { "NON-MEMBER" },
            if m3.member { "MEMBER" } else { "NON-MEMBER" },
            if j3.member { "MEMBER" } else { "NON-MEMBER" }
        ),
    );

    // (e) the Birkhoff partition term fails a pseudopartition law on 3n
    let t = birkhoff_partition_term();
    let report = partition_operation_report(&bichain_3n(), &t).expect("t is binary");
    let p3 = report
        .axioms
        .iter()
        .find(|(label, _)| label == "P3")
        .map(|(_, v)| v.holds());
    push(
        "(e) pseudopartition audit fails on the third bichain",
        !report.pseudo_holds && p3 == Some(false),
        format!(
            "pseudo {}, P3 {}",
            if report.pseudo_holds { "holds" } else { "fails" },
            if p3 == Some(false) { "fails" } else { "holds" }
        ),
    );

    // (f) pseudopartition but not partition on the extended lattice
    let report = partition_operation_report(&a_inf_2(), &t).expect("t is binary");
    push(
        "(f) extended lattice: pseudopartition but not partition",
        report.pseudo_holds && !report.partition_holds,
        format!(
            "P1-P4 {}, P5 {}",
            if report.pseudo_holds { "hold" } else { "fail" },
            if report.partition_holds { "holds" } else { "fails" }
        ),
    );

    // (g) the Steiner quasigroup fixture
    let sq = squag3();
    let sq_ok = sq.satisfies_all(&squag_axioms()).expect("budget").holds();
    let reg_ok = sq
        .satisfies_all(&squag_regularization_axioms())
        .expect("budget")
        .holds();
    push(
        "(g) squag3 satisfies the squag laws and the regularization identity",
        sq_ok && reg_ok,
        format!(
            "squag laws {}, regularization {}",
            if sq_ok { "hold" } else { "fail" },
            if reg_ok { "holds" } else { "fails" }
        ),
    );

    // (h) separating model for x(yx) = (xy)x among sums of left-zero bands
    let sig = groupoid_signature();
    let chain2 = FiniteAlgebra::new("chain2", sig.clone(), 2, vec![vec![0, 0, 0, 1]])
        .expect("valid tables");
    let id = Identity::parse("(mul x (mul y x)) = (mul (mul x y) x)", &sig).expect("valid");
    let found = enumerate_lz_sums(&chain2, &[2, 2])
        .map_err(|_| ())
        .ok()
        .and_then(|gen| find_separating_model(gen, &id).expect("budget"));
    let (h_pass, h_detail) = match &found {
        Some((alg, witness)) => (
            alg.size() == 4,
            format!(
                "found size {} witness at {}",
                alg.size(),
                crate::algebra::format_assignment(witness)
            ),
        ),
        None => (false, "no separating model found".to_string()),
    };
    push("(h) size-4 separating model for associativity-style identity", h_pass, h_detail);

    // (i) the band census finds no violations
    let (i_pass, i_detail) = match band_census(4) {
        Ok(report) => (
            report.equivalence_violations == 0 && report.rectangular_violations == 0,
            format!(
                "mismatches {}, non-rectangular blocks {}",
                report.equivalence_violations, report.rectangular_violations
            ),
        ),
        Err(e) => (false, format!("census failed: {e}")),
    };
    push("(i) band census up to size 4 is clean", i_pass, i_detail);

    SuiteReport { checks }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::write_ualg;
    use crate::congruence::Partition;
    use crate::equation::semilattice_base;

    #[test]
    fn fixture_files_round_trip() {
        for (name, text) in data_files() {
            if name.ends_with(".ualg") {
                let (sig, algebras) = parse_ualg_file(text).expect(name);
                let rewritten = write_ualg(&sig, &algebras);
                let (sig2, algebras2) = parse_ualg_file(&rewritten).expect(name);
                assert_eq!(sig, sig2, "{name}");
                assert_eq!(algebras, algebras2, "{name}");
            } else if name.ends_with(".eq") {
                AxiomSet::parse(text, name, None).expect(name);
            } else if name.ends_with(".sum") {
                crate::sums::parse_sum_file(text).expect(name);
            }
        }
    }

    #[test]
    fn eval_matches_the_documented_products() {
        let a = exss();
        assert_eq!(a.op_by_name("mul", &[3, 5]).unwrap(), 1);
        assert_eq!(a.op_by_name("mul", &[5, 3]).unwrap(), 0);
    }

    #[test]
    fn bichains_are_birkhoff_systems() {
        let sig = bisemilattice_signature();
        let bisemilattice = AxiomSet::parse(
            "(meet x x) = x\n(meet x y) = (meet y x)\n(meet x (meet y z)) = (meet (meet x y) z)\n\
             (join x x) = x\n(join x y) = (join y x)\n(join x (join y z)) = (join (join x y) z)",
            "bisemilattice",
            Some(&sig),
        )
        .unwrap();
        let birkhoff =
            Identity::parse("(join x (meet x y)) = (meet x (join x y))", &sig).unwrap();
        for alg in [bichain_3m(), bichain_3j(), bichain_3n(), a_inf_2()] {
            assert!(
                alg.satisfies_all(&bisemilattice).unwrap().holds(),
                "{} is not a bisemilattice",
                alg.name()
            );
        }
        for alg in [bichain_3m(), bichain_3j(), bichain_3n()] {
            assert!(
                alg.satisfies_identity(&birkhoff).unwrap().holds(),
                "{} is not a Birkhoff system",
                alg.name()
            );
        }
        // the extended lattice is a bisemilattice but fails the
        // Birkhoff identity at x = the absorbing point
        assert!(!a_inf_2().satisfies_identity(&birkhoff).unwrap().holds());
    }

    #[test]
    fn squag3_is_a_squag() {
        assert!(squag3().satisfies_all(&squag_axioms()).unwrap().holds());
    }

    #[test]
    fn lattice_fixture_blocks() {
        // the 2-element lattice inside bichain_3n satisfies the lattice axioms
        let (lattice2, _) = bichain_3n().restrict(&[0, 1]).unwrap();
        assert!(lattice2.satisfies_all(&lattice_axioms()).unwrap().holds());
    }

    #[test]
    fn band_fixtures_are_bands() {
        for name in ["lz2", "rz2", "sl2", "chain3", "lrb3", "lz3"] {
            let alg = band_fixture(name);
            assert!(alg.satisfies_all(&band_axioms()).unwrap().holds(), "{name}");
        }
    }

    #[test]
    fn semilattice_fixtures_satisfy_the_base() {
        for name in ["sl2", "chain3"] {
            let alg = band_fixture(name);
            let base = semilattice_base(alg.signature()).unwrap();
            assert!(alg.satisfies_all(&base).unwrap().holds(), "{name}");
        }
    }

    #[test]
    fn birkhoff_term_association_failure_on_the_bichain() {
        // the exact instance behind the P3 failure: t(2, t(0,1)) = 0
        // while t(2, t(1,0)) = 1
        let b = bichain_3n();
        let t = birkhoff_partition_term();
        let eval2 = |a: usize, bb: usize| {
            let asg: std::collections::BTreeMap<String, usize> =
                [("x".to_string(), a), ("y".to_string(), bb)].into();
            b.eval(&t, &asg).unwrap()
        };
        assert_eq!(eval2(0, 1), 0);
        assert_eq!(eval2(1, 0), 1);
        assert_eq!(eval2(2, eval2(0, 1)), 0);
        assert_eq!(eval2(2, eval2(1, 0)), 1);
    }

    #[test]
    fn extended_lattice_is_a_strict_lallement_sum_by_units() {
        use crate::sums::{find_right_units, strict_lallement_from_units, UnitData};
        let a = a_inf_2();
        let dec = crate::maltsev::decompose(&a).unwrap();
        assert_eq!(dec.replica.to_string(), "{0,1|2}");
        let mut units = UnitData::default();
        for (s, block) in dec.blocks.iter().enumerate() {
            let candidates = find_right_units(&block.algebra);
            units.units.insert((0, s), candidates["meet"][0]);
            units.units.insert((1, s), candidates["join"][0]);
        }
        // the audit verifies the composition law for both operations
        let (rebuilt, _) = strict_lallement_from_units(&a, &units).unwrap();
        assert!(rebuilt.same_tables(&a));
    }

    #[test]
    fn lallement_fixture_rebuilds_the_bichain() {
        let file = crate::sums::parse_sum_file(LALLEMENT_3N_SUM).unwrap();
        let data = file.into_lallement().unwrap();
        let (sum, _, strict) = crate::sums::lallement_sum(&data).unwrap();
        assert!(strict);
        assert!(sum.same_tables(&bichain_3n()));
    }

    #[test]
    fn suite_passes_on_fresh_fixtures() {
        let report = run_paper_suite();
        assert!(report.passed(), "{report}");
    }

    #[test]
    fn suite_catches_a_corrupted_table() {
        // negative control: corrupt one entry so the expected partition
        // stops being a congruence; the replica assertion must then fail
        let a = exss();
        let mut table = a.table(0).to_vec();
        table[2 * 7 + 2] = 0; // 2*2 becomes 0
        let corrupted =
            FiniteAlgebra::new("exss", a.signature().clone(), a.size(), vec![table]).unwrap();
        let expected = Partition::parse("{0,1|2,3|4,5|6}").unwrap();
        assert!(!crate::congruence::is_congruence(&corrupted, &expected));
        let replica = semilattice_replica(&corrupted).unwrap();
        assert_ne!(replica, expected);
    }

    #[test]
    fn suite_report_is_deterministic() {
        assert_eq!(run_paper_suite().to_string(), run_paper_suite().to_string());
    }
}

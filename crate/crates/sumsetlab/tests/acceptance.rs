//! Acceptance suite: one test per claim, each printing a single PASS/FAIL
//! line. Every comparison is exact (integers or rationals); there are no
//! tolerance knobs anywhere.

use std::sync::Arc;

use sumsetlab::abgroup::{ChowlaMode, FiniteAbelianGroup};
use sumsetlab::harness::{
    exhaustive_families, run_suite, GenMode, SuiteId, SuiteOptions, WitnessLog,
};
use sumsetlab::ranksum::{check_dyson_bound, check_mann, check_shnirelman_prefix};

fn conclude(label: &str, ok: bool, detail: String) {
    println!(
        "acceptance {label}: {} ({detail})",
        if ok { "PASS" } else { "FAIL" }
    );
    assert!(ok, "acceptance {label} failed: {detail}");
}

fn sweep(suite: SuiteId, opts: SuiteOptions) -> (u64, u64, u64) {
    let mut log = WitnessLog::disabled();
    let report = run_suite(suite, &opts, &mut log).expect("suite runs");
    (report.pass, report.fail, report.not_applicable)
}

fn exhaustive(g: usize, n: usize) -> SuiteOptions {
    SuiteOptions {
        mode: GenMode::Exhaustive,
        g,
        n,
        ..SuiteOptions::default()
    }
}

fn random(seed: u64, count: u64, g: usize, n: usize) -> SuiteOptions {
    SuiteOptions {
        mode: GenMode::Random { seed, count },
        g,
        n,
        ..SuiteOptions::default()
    }
}

fn with_group(mut opts: SuiteOptions, group: Arc<FiniteAbelianGroup>) -> SuiteOptions {
    opts.group = Some(group);
    opts
}

/// phi_r(m) >= C(n-1, r-1) * min(1, gamma*) * m, exhaustively for n=2, g=6
/// and n=3, g=4, then on 10^5 seeded random families with n <= 5, g <= 16.
#[test]
fn criterion_1_rank_sum_bound() {
    let mut pass = 0;
    let mut fail = 0;
    for (g, n) in [(6, 2), (4, 3)] {
        let (p, f, _) = sweep(SuiteId::DysonBound, exhaustive(g, n));
        pass += p;
        fail += f;
    }
    let (p, f, _) = sweep(SuiteId::DysonBound, random(1, 100_000, 16, 5));
    pass += p;
    fail += f;
    conclude(
        "1 rank-sum lower bound",
        fail == 0 && pass == 4096 + 4096 + 100_000,
        format!("{pass} pass, {fail} fail"),
    );
}

/// Both prefix-counting inequalities for every pair (A, B) over [1,8] and
/// every n <= 8: 65 536 pairs, zero violations.
#[test]
fn criterion_2_prefix_counting() {
    let (pass, fail, _) = sweep(SuiteId::Mann, exhaustive(8, 2));
    conclude(
        "2 prefix counting",
        fail == 0 && pass == 65_536,
        format!("{pass} pass, {fail} fail"),
    );
}

/// Every transform step on 10^4 random families (n <= 4, g <= 12) and
/// exhaustively for n=2, g <= 5 satisfies all three step lemmas, and every
/// trace terminates within the initial top-set cardinality.
#[test]
fn criterion_3_transform_lemmas() {
    let mut pass = 0;
    let mut fail = 0;
    for g in 1..=5 {
        let (p, f, _) = sweep(SuiteId::TransformLemmas, exhaustive(g, 2));
        pass += p;
        fail += f;
    }
    let (p, f, _) = sweep(SuiteId::TransformLemmas, random(3, 10_000, 12, 4));
    pass += p;
    fail += f;
    conclude(
        "3 transform lemmas",
        fail == 0 && pass == 4 + 16 + 64 + 256 + 1024 + 10_000,
        format!("{pass} pass, {fail} fail"),
    );
}

/// Every A <= [1,12] with A(n) >= n/2 for all n has 2A covering [1,12].
#[test]
fn criterion_4_half_density_basis() {
    let (pass, fail, na) = sweep(SuiteId::Basis2, exhaustive(12, 1));
    conclude(
        "4 half-density basis",
        fail == 0 && pass > 0 && pass + na == 4096,
        format!("{pass} pass, {fail} fail, {na} not applicable"),
    );
}

/// The three e-transform identities, exhaustively over Z/m for m <= 6
/// (all nonempty A, B, all e in A) and on 10^5 random instances over
/// groups of order <= 24.
#[test]
fn criterion_5_etransform_identities() {
    let mut pass = 0;
    let mut fail = 0;
    for m in 2..=6 {
        let group = FiniteAbelianGroup::cyclic(m).expect("small order");
        let (p, f, _) = sweep(SuiteId::Etransform, with_group(exhaustive(0, 0), group));
        pass += p;
        fail += f;
    }
    let (p, f, _) = sweep(SuiteId::Etransform, random(5, 100_000, 0, 0));
    pass += p;
    fail += f;
    conclude(
        "5 e-transform identities",
        fail == 0 && pass > 100_000,
        format!("{pass} pass, {fail} fail"),
    );
}

/// |A+B| >= min(m, |A|+|B|-1): the congruence-free case exhaustively over
/// Z/m for m <= 8, and the prime case exhaustively for p in {2,3,5,7} plus
/// 10^5 sampled pairs for p = 11.
#[test]
fn criterion_6_cyclic_sumset_bounds() {
    let mut pass = 0;
    let mut fail = 0;
    let mut na = 0;
    for m in 2..=8 {
        let group = FiniteAbelianGroup::cyclic(m).expect("small order");
        let (p, f, n) = sweep(SuiteId::ChowlaCd, with_group(exhaustive(0, 0), group));
        pass += p;
        fail += f;
        na += n;
    }
    for p in [2usize, 3, 5, 7] {
        let group = FiniteAbelianGroup::cyclic(p).expect("small order");
        let mut opts = with_group(exhaustive(0, 0), group);
        opts.chowla_mode = ChowlaMode::CauchyDavenport;
        let (pp, f, n) = sweep(SuiteId::ChowlaCd, opts);
        pass += pp;
        fail += f;
        na += n;
    }
    let group = FiniteAbelianGroup::cyclic(11).expect("small order");
    let mut opts = with_group(random(11, 100_000, 0, 0), group);
    opts.chowla_mode = ChowlaMode::CauchyDavenport;
    let (p, f, n) = sweep(SuiteId::ChowlaCd, opts);
    pass += p;
    fail += f;
    na += n;
    conclude(
        "6 cyclic sumset bounds",
        fail == 0 && pass > 100_000,
        format!("{pass} pass, {fail} fail, {na} not applicable"),
    );
}

/// Existence of a subgroup witness for |A+B| >= |A|+|B|-|H| (audited
/// against the full subgroup lattice) and the exact stabilizer identity
/// whenever |A+B| < |A|+|B|, over Z/m (m <= 8) and three product groups.
#[test]
fn criterion_7_stabilizer_theorems() {
    let mut pass = 0;
    let mut fail = 0;
    let mut na = 0;
    let mut groups: Vec<Arc<FiniteAbelianGroup>> = (2..=8)
        .map(|m| FiniteAbelianGroup::cyclic(m).expect("small order"))
        .collect();
    for moduli in [[2, 2], [2, 4], [3, 3]] {
        groups.push(FiniteAbelianGroup::new(moduli.to_vec()).expect("small order"));
    }
    for group in groups {
        let (p, f, n) = sweep(SuiteId::Kneser, with_group(exhaustive(0, 0), group));
        pass += p;
        fail += f;
        na += n;
    }
    conclude(
        "7 stabilizer theorems",
        fail == 0 && pass > 0,
        format!("{pass} pass, {fail} fail, {na} not applicable"),
    );
}

/// Closed-form densities against brute-force prefix counting for 10^4
/// random eventually periodic sets, and the congruence construction's
/// exact densities k/m, l/m, (k+l-1)/m for every k+l <= m <= 12.
#[test]
fn criterion_8_density_closed_forms() {
    let (mut pass, mut fail, _) = sweep(SuiteId::DensityOracle, random(8, 10_000, 0, 0));
    let (p, f, _) = sweep(SuiteId::CongruenceExample, SuiteOptions::default());
    pass += p;
    fail += f;
    conclude(
        "8 density closed forms",
        fail == 0 && pass > 10_000,
        format!("{pass} pass, {fail} fail"),
    );
}

/// Cross-checks on the criterion-2 corpus: the rank-sum bound at n=r=2
/// agrees verdict-for-verdict with the finite counting corollary, and the
/// prefix-density inequality never fails where the counting check passes.
#[test]
fn criterion_9_cross_checks() {
    let mut checked = 0u64;
    let mut agree_fail = 0u64;
    let mut prefix_fail = 0u64;
    for family in exhaustive_families(8, 2) {
        let (a, b) = (family.set(1), family.set(2));
        let bound = check_dyson_bound(&family).expect("well-formed family");
        let rank2_holds = bound.violations.iter().all(|v| v.r != 2);
        let mut corollary_holds = true;
        let mut mann_holds = true;
        for n in 1..=family.bound() {
            let report = check_mann(a, b, n).expect("n in range");
            corollary_holds &= report.corollary_holds;
            mann_holds &= report.holds();
        }
        if rank2_holds != corollary_holds {
            agree_fail += 1;
        }
        if mann_holds && !check_shnirelman_prefix(a, b).expect("well-formed pair").holds {
            prefix_fail += 1;
        }
        checked += 1;
    }
    conclude(
        "9 cross-checks",
        agree_fail == 0 && prefix_fail == 0 && checked == 65_536,
        format!("{checked} pairs, {agree_fail} verdict disagreements, {prefix_fail} prefix regressions"),
    );
}

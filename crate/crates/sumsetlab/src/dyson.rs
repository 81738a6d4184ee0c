//! The Dyson transform: triples, minimal-a0 selection, the set T, single
//! transform steps, iterated reduction, and extensional lemma checkers.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::error::{Error, Result};
use crate::intset::{rat, shnirelman_sumset, translate, BoundedIntSet, Rational};
use crate::ranksum::{rank_subsets, RankProfile, SetFamily};

/// One application of the transform, with enough context to audit it.
#[derive(Clone, Debug)]
pub struct TransformStep {
    pub a0: usize,
    pub ell: usize,
    pub t: BoundedIntSet,
    pub before: SetFamily,
    pub after: SetFamily,
}

#[derive(Debug)]
pub struct TransformTrace {
    pub steps: Vec<TransformStep>,
    pub terminal: SetFamily,
}

/// Conditions (i)-(iv) for (a, ell, c) to be a Dyson triple against the
/// family's last set A_n and bound g.
pub fn is_dyson_triple(family: &SetFamily, a: usize, ell: usize, c: usize) -> bool {
    let n = family.len();
    let g = family.bound();
    if n < 2 {
        return false;
    }
    let last = family.set(n);
    // (i) c in A_n and 1 <= c <= g
    if !last.contains(c) {
        return false;
    }
    // (ii) 1 <= ell <= n-1
    if ell == 0 || ell > n - 1 {
        return false;
    }
    let a_ell = family.set(ell);
    // (iii) a in A_ell ∪ {0} or a > g
    if !(a == 0 || a > g || a_ell.contains(a)) {
        return false;
    }
    // (iv) a + c not in A_ell or a + c > g
    a + c > g || !a_ell.contains(a + c)
}

/// The smallest a admitting any Dyson triple, and the smallest ell that
/// works with it. a = g+1 always works, so the scan terminates.
pub fn find_minimal_triple(family: &SetFamily) -> Result<(usize, usize)> {
    let n = family.len();
    let g = family.bound();
    if n < 2 {
        return Err(Error::Precondition("transform needs n >= 2".into()));
    }
    if family.set(n).is_empty() {
        return Err(Error::Precondition("A_n has no elements in [1,g]".into()));
    }
    for a in 0..=g + 1 {
        for ell in 1..n {
            if family
                .set(n)
                .members()
                .any(|c| is_dyson_triple(family, a, ell, c))
            {
                return Ok((a, ell));
            }
        }
    }
    unreachable!("a = g+1 admits a triple for any nonempty A_n")
}

/// T = {c in A_n ∩ [1,g] : c + a0 not in A_ell or c + a0 > g}.
pub fn build_t(family: &SetFamily, a0: usize, ell: usize) -> BoundedIntSet {
    let g = family.bound();
    let n = family.len();
    let a_ell = family.set(ell);
    let mut t = BoundedIntSet::empty(g);
    for c in family.set(n).members() {
        if c + a0 > g || !a_ell.contains(c + a0) {
            t.insert(c).expect("c <= g");
        }
    }
    t
}

/// One transform step: A'_n = A_n \ T, A'_ell = A_ell ∪ (T+a0) ∩ [1,g].
pub fn apply_transform(family: &SetFamily) -> Result<TransformStep> {
    let (a0, ell) = find_minimal_triple(family)?;
    let n = family.len();
    let g = family.bound();
    let t = build_t(family, a0, ell);
    debug_assert!(!t.is_empty(), "T is nonempty by minimality of a0");
    let after = family
        .replace(n, family.set(n).difference(&t))?
        .replace(ell, family.set(ell).union(&translate(&t, a0 as i64, g)))?;
    Ok(TransformStep {
        a0,
        ell,
        t,
        before: family.clone(),
        after,
    })
}

/// Apply the transform until A_n is empty on [1,g]; each step strictly
/// lowers A_n(g), so at most A_n(g) steps run.
pub fn iterate_transform(family: &SetFamily) -> Result<TransformTrace> {
    let n = family.len();
    if n < 2 {
        return Err(Error::Precondition("transform needs n >= 2".into()));
    }
    let mut current = family.clone();
    let mut steps = Vec::new();
    while !current.set(n).is_empty() {
        let step = apply_transform(&current)?;
        let before_count = step.before.set(n).cardinality();
        let after_count = step.after.set(n).cardinality();
        assert!(after_count < before_count, "A_n(g) must strictly decrease");
        current = step.after.clone();
        steps.push(step);
    }
    Ok(TransformTrace {
        steps,
        terminal: current,
    })
}

impl TransformStep {
    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "a0": self.a0,
            "ell": self.ell,
            "T": self.t.members().collect::<Vec<_>>(),
            "before": self.before.to_string(),
            "after": self.after.to_string(),
        })
    }
}

#[derive(Debug, Clone)]
pub enum LemmaWitness {
    /// Lemma 1 failure at (S, h): which of the two implications broke.
    L1 {
        s: String,
        h: usize,
        first_implication: bool,
    },
    /// φ'_r(m) > φ_r(m).
    L2 { r: usize, m: usize, before: usize, after: usize },
    /// φ'_1(m) < min(1,γ)·m.
    L3 { m: usize, phi1: usize, rhs: Rational },
}

#[derive(Debug, Default)]
pub struct LemmaReport {
    pub witnesses: Vec<LemmaWitness>,
}

impl LemmaReport {
    pub fn holds(&self) -> bool {
        self.witnesses.is_empty()
    }
}

/// The S collection for Lemma 1: all subsets of [1,g] when g <= 6,
/// otherwise every rank sum S_I of the `before` family plus seeded random
/// subsets.
pub fn default_s_collection(step: &TransformStep, seed: u64) -> Vec<BoundedIntSet> {
    let g = step.before.bound();
    if g <= 6 {
        return (0u64..1 << g)
            .map(|mask| BoundedIntSet::from_mask(g, mask))
            .collect();
    }
    let mut out = Vec::new();
    let n = step.before.len();
    for r in 1..=n {
        for index_set in rank_subsets(n, r).expect("1 <= r <= n") {
            let summands: Vec<BoundedIntSet> = index_set
                .iter()
                .map(|&i| step.before.set(i).clone())
                .collect();
            if let Ok(s) = shnirelman_sumset(&summands, g) {
                out.push(s);
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..16 {
        let mask: u64 = rng.gen::<u64>() & ((1u64 << g.min(63)) - 1);
        out.push(BoundedIntSet::from_mask(g, mask));
    }
    out
}

/// Extensional checks of Lemmas 1-3 for one transform step.
/// `gamma` must satisfy φ_1(m) >= γm for the `before` family.
pub fn check_lemmas(
    step: &TransformStep,
    gamma: Rational,
    s_collection: &[BoundedIntSet],
) -> Result<LemmaReport> {
    let g = step.before.bound();
    let n = step.before.len();
    let ell = step.ell;
    let a0 = step.a0;
    let a_ell = step.before.set(ell);
    let a_ell_new = step.after.set(ell);
    let a_n = step.before.set(n);
    let a_n_new = step.after.set(n);
    let mut report = LemmaReport::default();

    // Lemma 1, with all sums in the 0-adjoined convention.
    for s in s_collection {
        let sum = |x: &BoundedIntSet, y: &BoundedIntSet| {
            shnirelman_sumset(&[x.clone(), y.clone()], g)
        };
        let s_al = sum(s, a_ell)?;
        let s_al_new = sum(s, a_ell_new)?;
        let s_an = sum(s, a_n)?;
        let s_an_new = sum(s, a_n_new)?;
        let s_al_an = shnirelman_sumset(&[s.clone(), a_ell.clone(), a_n.clone()], g)?;
        let s_al_an_new =
            shnirelman_sumset(&[s.clone(), a_ell_new.clone(), a_n_new.clone()], g)?;
        for h in 1..=g {
            if s_al_new.contains(h) && !s_al.contains(h) {
                let ok = h > a0
                    && s_an.contains(h - a0)
                    && !s_an_new.contains(h - a0);
                if !ok {
                    report.witnesses.push(LemmaWitness::L1 {
                        s: s.to_string(),
                        h,
                        first_implication: true,
                    });
                }
            }
            if s_al_an_new.contains(h) && !s_al_an.contains(h) {
                report.witnesses.push(LemmaWitness::L1 {
                    s: s.to_string(),
                    h,
                    first_implication: false,
                });
            }
        }
    }

    // Lemma 2: φ'_r(m) <= φ_r(m).
    let before = RankProfile::compute(&step.before)?;
    let after = RankProfile::compute(&step.after)?;
    for r in 1..=n {
        for m in 1..=g {
            let b = before.phi(r, m)?;
            let a = after.phi(r, m)?;
            if a > b {
                report
                    .witnesses
                    .push(LemmaWitness::L2 { r, m, before: b, after: a });
            }
        }
    }

    // Lemma 3: φ'_1(m) >= min(1,γ)·m.
    let delta = gamma.min(rat(1, 1));
    for m in 1..=g {
        let phi1 = after.phi(1, m)?;
        let rhs = delta * rat(m as i64, 1);
        if rat(phi1 as i64, 1) < rhs {
            report.witnesses.push(LemmaWitness::L3 { m, phi1, rhs });
        }
    }

    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ranksum::gamma_star;

    fn family(s: &str) -> SetFamily {
        s.parse().unwrap()
    }

    #[test]
    fn triple_examples() {
        let f = family("g=3;{1};{1,2}");
        assert!(is_dyson_triple(&f, 0, 1, 2)); // 2+0 not in A_1
        assert!(!is_dyson_triple(&f, 0, 1, 1)); // 1+0 in A_1 and <= g
        assert!(is_dyson_triple(&f, 4, 1, 1)); // a > g always works
        assert!(is_dyson_triple(&f, 4, 1, 2));
    }

    #[test]
    fn minimal_triple_examples() {
        assert_eq!(find_minimal_triple(&family("g=3;{1};{1,2}")).unwrap(), (0, 1));
        assert_eq!(find_minimal_triple(&family("g=3;{1,2,3};{1}")).unwrap(), (3, 1));
        assert_eq!(find_minimal_triple(&family("g=2;{};{1}")).unwrap(), (0, 1));
        assert!(find_minimal_triple(&family("g=3;{1}")).is_err());
        assert!(find_minimal_triple(&family("g=3;{1};{}")).is_err());
    }

    #[test]
    fn minimality_by_exhaustive_scan() {
        for fam in ["g=4;{1,3};{2,4}", "g=5;{1,2,3,4,5};{5}", "g=3;{2};{1,3}"] {
            let f = family(fam);
            let (a0, _) = find_minimal_triple(&f).unwrap();
            let n = f.len();
            for a in 0..a0 {
                for ell in 1..n {
                    for c in 1..=f.bound() {
                        assert!(
                            !is_dyson_triple(&f, a, ell, c),
                            "triple ({a},{ell},{c}) below a0 = {a0} in {fam}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn build_t_examples() {
        let t = build_t(&family("g=3;{1};{1,2}"), 0, 1);
        assert_eq!(t.to_string(), "3:{2}");
        let t = build_t(&family("g=3;{1,2,3};{1}"), 3, 1);
        assert_eq!(t.to_string(), "3:{1}");
        let t = build_t(&family("g=2;{};{1,2}"), 0, 1);
        assert_eq!(t.to_string(), "2:{1,2}");
    }

    #[test]
    fn transform_examples() {
        let step = apply_transform(&family("g=3;{1};{1,2}")).unwrap();
        assert_eq!(step.a0, 0);
        assert_eq!(step.t.to_string(), "3:{2}");
        assert_eq!(step.after.to_string(), "g=3;{1,2};{1}");

        let step = apply_transform(&family("g=3;{1,2,3};{1}")).unwrap();
        assert_eq!(step.a0, 3);
        assert_eq!(step.after.to_string(), "g=3;{1,2,3};{}"); // image 4 truncated

        let step = apply_transform(&family("g=2;{};{1}")).unwrap();
        assert_eq!(step.after.to_string(), "g=2;{1};{}");
    }

    #[test]
    fn iterate_example() {
        let trace = iterate_transform(&family("g=3;{1};{1,2}")).unwrap();
        assert_eq!(trace.steps.len(), 2);
        assert!(trace.terminal.set(2).is_empty());
        assert_eq!(trace.terminal.to_string(), "g=3;{1,2,3};{}");
    }

    #[test]
    fn iterate_empty_last_set() {
        let trace = iterate_transform(&family("g=3;{1,2};{}")).unwrap();
        assert!(trace.steps.is_empty());
    }

    #[test]
    fn cardinality_exchange() {
        for fam in ["g=4;{1,3};{2,4}", "g=6;{2,5};{1,3,6}", "g=3;{1};{1,2}"] {
            let f = family(fam);
            let step = apply_transform(&f).unwrap();
            let n = f.len();
            let gained =
                step.after.set(step.ell).cardinality() - step.before.set(step.ell).cardinality();
            let lost = step.before.set(n).cardinality() - step.after.set(n).cardinality();
            let surviving = step
                .t
                .members()
                .filter(|&t| t + step.a0 <= f.bound())
                .count();
            assert_eq!(gained, surviving);
            assert_eq!(lost, step.t.cardinality());
            assert!(gained <= lost);
        }
    }

    #[test]
    fn lemmas_on_worked_example() {
        let f = family("g=3;{1};{1,2}");
        let gamma = gamma_star(&f).unwrap();
        assert_eq!(gamma, rat(1, 1));
        let step = apply_transform(&f).unwrap();
        let coll = default_s_collection(&step, 7);
        let report = check_lemmas(&step, gamma, &coll).unwrap();
        assert!(report.holds(), "witnesses: {:?}", report.witnesses);

        // L2 holds with equality at every (r, m) for this instance
        let before = RankProfile::compute(&step.before).unwrap();
        let after = RankProfile::compute(&step.after).unwrap();
        for r in 1..=2 {
            for m in 1..=3 {
                assert_eq!(before.phi(r, m).unwrap(), after.phi(r, m).unwrap());
            }
        }
    }

    #[test]
    fn step_json_shape() {
        let step = apply_transform(&family("g=3;{1};{1,2}")).unwrap();
        let v = step.to_json();
        assert_eq!(v["a0"], 0);
        assert_eq!(v["ell"], 1);
        assert_eq!(v["T"].as_array().unwrap().len(), 1);
        assert_eq!(v["before"], "g=3;{1};{1,2}");
    }
}

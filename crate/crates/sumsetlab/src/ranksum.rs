//! Rank-r sums, the counting functions φ_r, and statement-level checkers
//! for Mann's Fundamental Theorem, its finite corollary, and Dyson's bound.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::intset::{rat, shnirelman_sumset, truncated_density, BoundedIntSet, Rational};

/// An ordered tuple (A_1,..,A_n) of bounded sets sharing one bound.
/// Sets may be empty or duplicated.
#[derive(Clone, PartialEq, Eq)]
pub struct SetFamily {
    bound: usize,
    sets: Vec<BoundedIntSet>,
}

impl SetFamily {
    pub fn new(sets: Vec<BoundedIntSet>) -> Result<Self> {
        let bound = sets
            .first()
            .ok_or_else(|| Error::Precondition("family must have n >= 1 sets".into()))?
            .bound();
        for s in &sets {
            if s.bound() != bound {
                return Err(Error::Precondition(format!(
                    "family bound mismatch: {} vs {bound}",
                    s.bound()
                )));
            }
        }
        Ok(SetFamily { bound, sets })
    }

    pub fn bound(&self) -> usize {
        self.bound
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        false // n >= 1 by construction
    }

    pub fn set(&self, i: usize) -> &BoundedIntSet {
        &self.sets[i - 1] // 1-based, matching index sets
    }

    pub fn sets(&self) -> &[BoundedIntSet] {
        &self.sets
    }

    pub fn replace(&self, i: usize, with: BoundedIntSet) -> Result<Self> {
        let mut sets = self.sets.clone();
        sets[i - 1] = with;
        SetFamily::new(sets)
    }

    /// The family (A_1,..,A_{n-1}).
    pub fn drop_last(&self) -> Result<Self> {
        SetFamily::new(self.sets[..self.sets.len() - 1].to_vec())
    }
}

/// All r-element subsets of {1,..,n} in lexicographic order (1-based).
pub fn rank_subsets(n: usize, r: usize) -> Result<Vec<Vec<usize>>> {
    if r == 0 || r > n {
        return Err(Error::Precondition(format!(
            "rank r = {r} outside [1, {n}]"
        )));
    }
    let mut out = Vec::new();
    let mut current: Vec<usize> = (1..=r).collect();
    loop {
        out.push(current.clone());
        // advance to the lexicographic successor
        let mut i = r;
        while i > 0 && current[i - 1] == n - (r - i) {
            i -= 1;
        }
        if i == 0 {
            break;
        }
        current[i - 1] += 1;
        for j in i..r {
            current[j] = current[j - 1] + 1;
        }
    }
    Ok(out)
}

/// The full table φ_r(m) for 1 <= r <= n, 1 <= m <= g, with every rank sum
/// S_I materialized once.
pub struct RankProfile {
    bound: usize,
    n: usize,
    // phi[r-1][m-1]
    table: Vec<Vec<usize>>,
}

impl RankProfile {
    pub fn compute(family: &SetFamily) -> Result<Self> {
        let n = family.len();
        let g = family.bound();
        let mut table = Vec::with_capacity(n);
        for r in 1..=n {
            let mut row = vec![0usize; g];
            for index_set in rank_subsets(n, r)? {
                let summands: Vec<BoundedIntSet> =
                    index_set.iter().map(|&i| family.set(i).clone()).collect();
                let s_i = shnirelman_sumset(&summands, g)?;
                for m in 1..=g {
                    row[m - 1] += s_i.count(m)?;
                }
            }
            table.push(row);
        }
        Ok(RankProfile { bound: g, n, table })
    }

    pub fn phi(&self, r: usize, m: usize) -> Result<usize> {
        if r == 0 || r > self.n {
            return Err(Error::Range(format!("rank {r} outside [1, {}]", self.n)));
        }
        if m == 0 || m > self.bound {
            return Err(Error::Range(format!("m = {m} outside [1, {}]", self.bound)));
        }
        Ok(self.table[r - 1][m - 1])
    }
}

/// φ_r(m) = Σ over |I| = r of S_I(m).
pub fn phi(family: &SetFamily, r: usize, m: usize) -> Result<usize> {
    RankProfile::compute(family)?.phi(r, m)
}

/// The largest γ with φ_1(m) >= γm for all m <= g: min over m of φ_1(m)/m.
pub fn gamma_star(family: &SetFamily) -> Result<Rational> {
    let profile = RankProfile::compute(family)?;
    gamma_star_of_profile(&profile)
}

fn gamma_star_of_profile(profile: &RankProfile) -> Result<Rational> {
    let mut best: Option<Rational> = None;
    for m in 1..=profile.bound {
        let q = rat(profile.phi(1, m)? as i64, m as i64);
        if best.map_or(true, |b| q < b) {
            best = Some(q);
        }
    }
    Ok(best.expect("bound >= 1"))
}

pub fn binomial(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u64 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u64 / (i + 1) as u64;
    }
    acc
}

/// One Dyson-bound violation: φ_r(m) fell below C(n-1,r-1)·min(1,γ)·m.
#[derive(Debug, Clone)]
pub struct BoundViolation {
    pub r: usize,
    pub m: usize,
    pub lhs: usize,
    pub rhs: Rational,
}

#[derive(Debug)]
pub struct BoundReport {
    pub gamma_star: Rational,
    pub holds: bool,
    pub violations: Vec<BoundViolation>,
}

/// Check φ_r(m) >= C(n-1,r-1)·min(1,γ*)·m for all r <= n, m <= g.
pub fn check_dyson_bound(family: &SetFamily) -> Result<BoundReport> {
    let profile = RankProfile::compute(family)?;
    let gamma = gamma_star_of_profile(&profile)?;
    let delta = gamma.min(rat(1, 1));
    let n = family.len();
    let mut violations = Vec::new();
    for r in 1..=n {
        let coeff = rat(binomial(n - 1, r - 1) as i64, 1);
        for m in 1..=family.bound() {
            let lhs = profile.phi(r, m)?;
            let rhs = coeff * delta * rat(m as i64, 1);
            if rat(lhs as i64, 1) < rhs {
                violations.push(BoundViolation { r, m, lhs, rhs });
            }
        }
    }
    Ok(BoundReport {
        gamma_star: gamma,
        holds: violations.is_empty(),
        violations,
    })
}

#[derive(Debug)]
pub struct MannReport {
    /// C(n)/n = 1, the first branch of the Fundamental Theorem.
    pub saturated: bool,
    /// C(n)/n >= min over m <= n, m ∉ C of (A(m)+B(m))/m.
    pub fundamental_holds: bool,
    /// C(n) >= min(1,γ)·n with γ = min_{m<=n} (A(m)+B(m))/m.
    pub corollary_holds: bool,
    pub gamma: Rational,
}

impl MannReport {
    pub fn holds(&self) -> bool {
        self.fundamental_holds && self.corollary_holds
    }
}

/// Verify Mann's Fundamental Theorem and its finite corollary at a single n.
pub fn check_mann(a: &BoundedIntSet, b: &BoundedIntSet, n: usize) -> Result<MannReport> {
    let g = a.bound();
    if b.bound() != g {
        return Err(Error::Precondition("A and B must share a bound".into()));
    }
    if n == 0 || n > g {
        return Err(Error::Range(format!("n = {n} outside [1, {g}]")));
    }
    let c = shnirelman_sumset(&[a.clone(), b.clone()], g)?;
    let cn = rat(c.count(n)? as i64, n as i64);
    let saturated = cn == rat(1, 1);

    // min over 1 <= m <= n with m ∉ C; an empty min only happens when C
    // covers [1,n], i.e. the saturated branch fired.
    let fundamental_holds = if saturated {
        true
    } else {
        let min_quotient = (1..=n)
            .filter(|&m| !c.contains(m))
            .map(|m| rat((a.count(m).unwrap() + b.count(m).unwrap()) as i64, m as i64))
            .min();
        match min_quotient {
            Some(q) => cn >= q,
            None => true,
        }
    };

    let gamma = (1..=n)
        .map(|m| rat((a.count(m).unwrap() + b.count(m).unwrap()) as i64, m as i64))
        .min()
        .expect("n >= 1");
    let corollary_holds = cn >= gamma.min(rat(1, 1));

    Ok(MannReport {
        saturated,
        fundamental_holds,
        corollary_holds,
        gamma,
    })
}

#[derive(Debug)]
pub struct PrefixReport {
    pub alpha: Rational,
    pub beta: Rational,
    pub holds: bool,
    pub violations: Vec<(usize, usize, Rational)>,
}

/// Finite-prefix form of σ(A+B) >= α + β - αβ: with α, β the truncated
/// densities, check (A+B)(m) >= (α+β-αβ)·m for all m <= g.
pub fn check_shnirelman_prefix(a: &BoundedIntSet, b: &BoundedIntSet) -> Result<PrefixReport> {
    let g = a.bound();
    if b.bound() != g {
        return Err(Error::Precondition("A and B must share a bound".into()));
    }
    let alpha = truncated_density(a);
    let beta = truncated_density(b);
    let rate = alpha + beta - alpha * beta;
    let c = shnirelman_sumset(&[a.clone(), b.clone()], g)?;
    let mut violations = Vec::new();
    for m in 1..=g {
        let lhs = c.count(m)?;
        let rhs = rate * rat(m as i64, 1);
        if rat(lhs as i64, 1) < rhs {
            violations.push((m, lhs, rhs));
        }
    }
    Ok(PrefixReport {
        alpha,
        beta,
        holds: violations.is_empty(),
        violations,
    })
}

impl fmt::Display for SetFamily {
    /// Text form `g=5;{1,2};{1};{2,5}`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "g={}", self.bound)?;
        for s in &self.sets {
            write!(f, ";{{")?;
            let mut first = true;
            for x in s.members() {
                if !first {
                    write!(f, ",")?;
                }
                write!(f, "{x}")?;
                first = false;
            }
            write!(f, "}}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for SetFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for SetFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut parts = s.split(';');
        let head = parts.next().unwrap_or("");
        let bound: usize = head
            .strip_prefix("g=")
            .and_then(|v| v.parse().ok())
            .ok_or_else(|| Error::Parse(format!("expected g=<bound>, got `{head}`")))?;
        if bound == 0 {
            return Err(Error::Parse("bound must be positive".into()));
        }
        let mut sets = Vec::new();
        for part in parts {
            let elems = crate::intset::parse_brace_list(part)?;
            sets.push(BoundedIntSet::from_elems(bound, elems)?);
        }
        SetFamily::new(sets)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::intset::hfold_sumset;

    fn set(bound: usize, elems: &[usize]) -> BoundedIntSet {
        BoundedIntSet::from_elems(bound, elems.iter().copied()).unwrap()
    }

    fn family(s: &str) -> SetFamily {
        s.parse().unwrap()
    }

    #[test]
    fn rank_subsets_examples() {
        assert_eq!(
            rank_subsets(3, 2).unwrap(),
            vec![vec![1, 2], vec![1, 3], vec![2, 3]]
        );
        assert_eq!(rank_subsets(4, 4).unwrap(), vec![vec![1, 2, 3, 4]]);
        assert_eq!(rank_subsets(4, 2).unwrap().len(), 6);
        assert!(rank_subsets(3, 0).is_err());
        assert!(rank_subsets(3, 4).is_err());
    }

    #[test]
    fn phi_closed_forms() {
        // φ_1 is the sum of individual counts, φ_n the count of the full sumset
        let f = family("g=6;{1,4};{2,3,6};{5}");
        for m in 1..=6 {
            let direct: usize = f.sets().iter().map(|s| s.count(m).unwrap()).sum();
            assert_eq!(phi(&f, 1, m).unwrap(), direct);
            let full = shnirelman_sumset(f.sets(), 6).unwrap();
            assert_eq!(phi(&f, f.len(), m).unwrap(), full.count(m).unwrap());
        }
    }

    #[test]
    fn phi_example() {
        let f = family("g=3;{1};{1,2}");
        assert_eq!(phi(&f, 2, 3).unwrap(), 3); // S_{1,2} = {1,2,3}
    }

    #[test]
    fn gamma_star_examples() {
        // phi_1 = (2, 3, 3), so the minimum quotient is 3/3 = 1
        assert_eq!(gamma_star(&family("g=3;{1};{1,2}")).unwrap(), rat(1, 1));
        let full3 = SetFamily::new(vec![BoundedIntSet::full(5); 3]).unwrap();
        assert_eq!(gamma_star(&full3).unwrap(), rat(3, 1));
        assert_eq!(gamma_star(&family("g=4;{};{}")).unwrap(), rat(0, 1));
    }

    #[test]
    fn dyson_bound_examples() {
        assert!(check_dyson_bound(&family("g=3;{1,3}")).unwrap().holds);
        let report = check_dyson_bound(&family("g=3;{1};{1,2}")).unwrap();
        assert!(report.holds);
        assert_eq!(report.gamma_star, rat(1, 1));
    }

    #[test]
    fn pascal_consistency_with_empty_last_set() {
        // A_n empty on [1,g]: φ_r = φ^(n-1)_r + φ^(n-1)_{r-1}
        let f = family("g=5;{1,2};{3};{}");
        let sub = f.drop_last().unwrap();
        let profile = RankProfile::compute(&f).unwrap();
        let sub_profile = RankProfile::compute(&sub).unwrap();
        for r in 1..=f.len() {
            for m in 1..=5 {
                let lower = if r <= sub.len() {
                    sub_profile.phi(r, m).unwrap()
                } else {
                    0
                };
                let lower_prev = if r >= 2 { sub_profile.phi(r - 1, m).unwrap() } else { 0 };
                assert_eq!(profile.phi(r, m).unwrap(), lower + lower_prev);
            }
        }
    }

    #[test]
    fn phi_permutation_invariant() {
        let f = family("g=5;{1,2};{3,5};{2}");
        let p = family("g=5;{2};{1,2};{3,5}");
        for r in 1..=3 {
            for m in 1..=5 {
                assert_eq!(phi(&f, r, m).unwrap(), phi(&p, r, m).unwrap());
            }
        }
    }

    #[test]
    fn mann_examples() {
        let r = check_mann(&set(2, &[1]), &set(2, &[1]), 2).unwrap();
        assert!(r.saturated && r.holds());

        let r = check_mann(&set(4, &[2]), &set(4, &[2]), 3).unwrap();
        assert!(!r.saturated);
        assert!(r.holds());

        assert!(check_mann(&set(4, &[1]), &set(4, &[1]), 5).is_err());
    }

    #[test]
    fn shnirelman_prefix_examples() {
        let odds = set(10, &[1, 3, 5, 7, 9]);
        let r = check_shnirelman_prefix(&odds, &odds).unwrap();
        assert_eq!(r.alpha, rat(1, 2));
        assert!(r.holds);

        let r = check_shnirelman_prefix(&set(6, &[1, 4]), &BoundedIntSet::empty(6)).unwrap();
        assert_eq!(r.beta, rat(0, 1));
        assert!(r.holds);
    }

    #[test]
    fn basis_shape_through_hfold() {
        // the σ >= 1/2 argument shape: A(n) >= n/2 for n <= 4 forces 2A ⊇ [1,4]
        let a = set(4, &[1, 2]);
        let two_a = hfold_sumset(&a, 2, 4).unwrap();
        assert_eq!(two_a.count(4).unwrap(), 4);
    }

    #[test]
    fn family_text_roundtrip() {
        for s in ["g=5;{1,2};{1};{2,5}", "g=3;{}", "g=1;{1};{}"] {
            assert_eq!(family(s).to_string(), s);
        }
        assert!("g=0;{}".parse::<SetFamily>().is_err());
        assert!("g=3".parse::<SetFamily>().is_err());
    }
}

//! Finite abelian groups as explicit products of cyclic groups, with
//! Minkowski sumsets, the e-transform, stabilizers, subgroup enumeration,
//! and checkers for the pigeonhole lemma, Chowla, Cauchy-Davenport, and
//! both Kneser theorems.
//!
//! Elements are mixed-radix indices in `[0, order)`, first modulus least
//! significant; subsets are 64-bit masks, so carriers are capped at 64
//! elements.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::Verdict;

pub const MAX_ORDER: usize = 64;
pub const DEFAULT_SUBGROUP_CAP: usize = 64;

#[derive(Debug, PartialEq, Eq)]
pub struct FiniteAbelianGroup {
    moduli: Vec<usize>,
    order: usize,
    add: Vec<u8>, // add[x * order + y]
    neg: Vec<u8>,
}

impl FiniteAbelianGroup {
    pub fn new(moduli: Vec<usize>) -> Result<Arc<Self>> {
        if moduli.iter().any(|&m| m < 2) {
            return Err(Error::Precondition("moduli must be >= 2".into()));
        }
        let order = moduli.iter().product::<usize>().max(1);
        if order > MAX_ORDER {
            return Err(Error::Resource(format!(
                "group order {order} exceeds the carrier cap {MAX_ORDER}"
            )));
        }
        let decode = |mut x: usize| -> Vec<usize> {
            moduli
                .iter()
                .map(|&m| {
                    let c = x % m;
                    x /= m;
                    c
                })
                .collect()
        };
        let encode = |coords: &[usize]| -> usize {
            moduli
                .iter()
                .zip(coords)
                .rev()
                .fold(0, |acc, (&m, &c)| acc * m + c)
        };
        let mut add = vec![0u8; order * order];
        let mut neg = vec![0u8; order];
        for x in 0..order {
            let xc = decode(x);
            neg[x] = encode(
                &xc.iter()
                    .zip(&moduli)
                    .map(|(&c, &m)| (m - c) % m)
                    .collect::<Vec<_>>(),
            ) as u8;
            for y in 0..order {
                let yc = decode(y);
                let sum: Vec<usize> = xc
                    .iter()
                    .zip(&yc)
                    .zip(&moduli)
                    .map(|((&a, &b), &m)| (a + b) % m)
                    .collect();
                add[x * order + y] = encode(&sum) as u8;
            }
        }
        Ok(Arc::new(FiniteAbelianGroup {
            moduli,
            order,
            add,
            neg,
        }))
    }

    pub fn cyclic(m: usize) -> Result<Arc<Self>> {
        Self::new(vec![m])
    }

    pub fn trivial() -> Arc<Self> {
        Arc::new(FiniteAbelianGroup {
            moduli: Vec::new(),
            order: 1,
            add: vec![0],
            neg: vec![0],
        })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn moduli(&self) -> &[usize] {
        &self.moduli
    }

    pub fn add(&self, x: usize, y: usize) -> usize {
        self.add[x * self.order + y] as usize
    }

    pub fn neg(&self, x: usize) -> usize {
        self.neg[x] as usize
    }

    pub fn is_cyclic_presentation(&self) -> Option<usize> {
        if self.moduli.len() == 1 {
            Some(self.moduli[0])
        } else {
            None
        }
    }
}

#[derive(Clone)]
pub struct GroupSubset {
    group: Arc<FiniteAbelianGroup>,
    mask: u64,
}

impl PartialEq for GroupSubset {
    fn eq(&self, other: &Self) -> bool {
        self.group.moduli == other.group.moduli && self.mask == other.mask
    }
}
impl Eq for GroupSubset {}

impl GroupSubset {
    pub fn empty(group: Arc<FiniteAbelianGroup>) -> Self {
        GroupSubset { group, mask: 0 }
    }

    pub fn full(group: Arc<FiniteAbelianGroup>) -> Self {
        let mask = full_mask(group.order());
        GroupSubset { group, mask }
    }

    pub fn from_elems(
        group: Arc<FiniteAbelianGroup>,
        elems: impl IntoIterator<Item = usize>,
    ) -> Result<Self> {
        let mut mask = 0u64;
        for e in elems {
            if e >= group.order() {
                return Err(Error::Range(format!(
                    "element {e} outside [0, {})",
                    group.order()
                )));
            }
            mask |= 1 << e;
        }
        Ok(GroupSubset { group, mask })
    }

    pub fn from_mask(group: Arc<FiniteAbelianGroup>, mask: u64) -> Self {
        debug_assert_eq!(mask & !full_mask(group.order()), 0);
        GroupSubset { group, mask }
    }

    pub fn group(&self) -> &Arc<FiniteAbelianGroup> {
        &self.group
    }

    pub fn mask(&self) -> u64 {
        self.mask
    }

    pub fn contains(&self, e: usize) -> bool {
        e < self.group.order() && self.mask & (1 << e) != 0
    }

    pub fn cardinality(&self) -> usize {
        self.mask.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.mask == 0
    }

    pub fn is_full(&self) -> bool {
        self.mask == full_mask(self.group.order())
    }

    pub fn elements(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.group.order()).filter(move |&e| self.contains(e))
    }

    pub fn union(&self, other: &GroupSubset) -> Result<Self> {
        self.same_group(other)?;
        Ok(GroupSubset {
            group: self.group.clone(),
            mask: self.mask | other.mask,
        })
    }

    pub fn intersection(&self, other: &GroupSubset) -> Result<Self> {
        self.same_group(other)?;
        Ok(GroupSubset {
            group: self.group.clone(),
            mask: self.mask & other.mask,
        })
    }

    pub fn difference(&self, other: &GroupSubset) -> Result<Self> {
        self.same_group(other)?;
        Ok(GroupSubset {
            group: self.group.clone(),
            mask: self.mask & !other.mask,
        })
    }

    pub fn is_subset_of(&self, other: &GroupSubset) -> bool {
        self.mask & !other.mask == 0
    }

    fn same_group(&self, other: &GroupSubset) -> Result<()> {
        if self.group.moduli != other.group.moduli {
            return Err(Error::Precondition(format!(
                "group mismatch: {:?} vs {:?}",
                self.group.moduli, other.group.moduli
            )));
        }
        Ok(())
    }
}

fn full_mask(order: usize) -> u64 {
    if order >= 64 {
        u64::MAX
    } else {
        (1u64 << order) - 1
    }
}

/// `{x+e : x in X}`.
pub fn translate_set(x: &GroupSubset, e: usize) -> GroupSubset {
    let g = x.group();
    let mut mask = 0u64;
    for el in x.elements() {
        mask |= 1 << g.add(el, e);
    }
    GroupSubset::from_mask(g.clone(), mask)
}

/// `{a+b : a in A, b in B}`; empty when either side is empty.
pub fn minkowski_sum(a: &GroupSubset, b: &GroupSubset) -> Result<GroupSubset> {
    a.same_group(b)?;
    let mut out = GroupSubset::empty(a.group().clone());
    for e in a.elements() {
        out.mask |= translate_set(b, e).mask;
    }
    Ok(out)
}

/// (A(e), B(e)) = (A ∪ (B+e), B ∩ (A-e)) for e in A.
pub fn e_transform(
    a: &GroupSubset,
    b: &GroupSubset,
    e: usize,
) -> Result<(GroupSubset, GroupSubset)> {
    a.same_group(b)?;
    if a.is_empty() || b.is_empty() {
        return Err(Error::Precondition("A and B must be nonempty".into()));
    }
    if !a.contains(e) {
        return Err(Error::Precondition(format!("e = {e} is not in A")));
    }
    let ae = a.union(&translate_set(b, e))?;
    let be = b.intersection(&translate_set(a, a.group().neg(e)))?;
    Ok((ae, be))
}

#[derive(Debug)]
pub struct EtransformReport {
    pub holds: bool,
    pub failures: Vec<String>,
}

/// The three e-transform identities: (1) A(e)+B(e) ⊆ A+B,
/// (2) A(e) \ A = e + (B \ B(e)), (3) |A|+|B| = |A(e)|+|B(e)|.
pub fn check_etransform_identities(
    a: &GroupSubset,
    b: &GroupSubset,
    e: usize,
) -> Result<EtransformReport> {
    let (ae, be) = e_transform(a, b, e)?;
    let mut failures = Vec::new();

    if !(a.is_subset_of(&ae) && be.is_subset_of(b)) {
        failures.push("A ⊆ A(e) or B(e) ⊆ B failed".into());
    }
    if !be.is_empty() {
        let lhs = minkowski_sum(&ae, &be)?;
        let rhs = minkowski_sum(a, b)?;
        if !lhs.is_subset_of(&rhs) {
            failures.push("A(e)+B(e) ⊄ A+B".into());
        }
    }
    let gained = ae.difference(a)?;
    let lost = b.difference(&be)?;
    if gained != translate_set(&lost, e) {
        failures.push("A(e) \\ A ≠ e + (B \\ B(e))".into());
    }
    if a.cardinality() + b.cardinality() != ae.cardinality() + be.cardinality() {
        failures.push("|A| + |B| ≠ |A(e)| + |B(e)|".into());
    }
    if b.contains(0) && !(ae.contains(e) && be.contains(0)) {
        failures.push("0 ∈ B but e ∉ A(e) or 0 ∉ B(e)".into());
    }
    Ok(EtransformReport {
        holds: failures.is_empty(),
        failures,
    })
}

/// A subgroup, with closure under addition and negation verified at
/// construction.
#[derive(Clone, PartialEq, Eq)]
pub struct Subgroup {
    carrier: GroupSubset,
}

impl Subgroup {
    pub fn new(carrier: GroupSubset) -> Result<Self> {
        if !carrier.contains(0) {
            return Err(Error::Precondition("subgroup must contain 0".into()));
        }
        let g = carrier.group();
        for x in carrier.elements() {
            if !carrier.contains(g.neg(x)) {
                return Err(Error::Precondition(format!("not closed under negation at {x}")));
            }
            for y in carrier.elements() {
                if !carrier.contains(g.add(x, y)) {
                    return Err(Error::Precondition(format!(
                        "not closed under addition at {x}+{y}"
                    )));
                }
            }
        }
        Ok(Subgroup { carrier })
    }

    pub fn trivial(group: Arc<FiniteAbelianGroup>) -> Self {
        let carrier = GroupSubset::from_elems(group, [0]).expect("identity in range");
        Subgroup { carrier }
    }

    pub fn carrier(&self) -> &GroupSubset {
        &self.carrier
    }

    pub fn order(&self) -> usize {
        self.carrier.cardinality()
    }

    pub fn is_proper(&self) -> bool {
        !self.carrier.is_full()
    }
}

impl fmt::Debug for Subgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subgroup({})", self.carrier)
    }
}

/// H(X) = {g in G : X+g = X}. Rejected for empty X.
pub fn stabilizer(x: &GroupSubset) -> Result<Subgroup> {
    if x.is_empty() {
        return Err(Error::Precondition(
            "stabilizer of the empty set is rejected".into(),
        ));
    }
    let g = x.group();
    let elems = (0..g.order()).filter(|&e| translate_set(x, e) == *x);
    let carrier = GroupSubset::from_elems(g.clone(), elems)?;
    Subgroup::new(carrier)
}

/// The complete subgroup lattice, as the join-closure of all cyclic
/// subgroups. Every subgroup of a finite abelian group is a join of cyclic
/// subgroups, so the closure is complete.
pub fn enumerate_subgroups_capped(
    group: &Arc<FiniteAbelianGroup>,
    cap: usize,
) -> Result<Vec<Subgroup>> {
    if group.order() > cap {
        return Err(Error::Resource(format!(
            "group order {} exceeds subgroup enumeration cap {cap}",
            group.order()
        )));
    }
    // masks of all cyclic subgroups <x>
    let mut cyclic: Vec<u64> = Vec::new();
    for x in 0..group.order() {
        let mut mask = 1u64; // identity
        let mut cur = x;
        while mask & (1 << cur) == 0 {
            mask |= 1 << cur;
            cur = group.add(cur, x);
        }
        if !cyclic.contains(&mask) {
            cyclic.push(mask);
        }
    }
    // close under pairwise join (subgroup generated by the union)
    let join = |a: u64, b: u64| -> u64 {
        let mut mask = a | b;
        loop {
            let mut grew = false;
            let elems: Vec<usize> = (0..group.order()).filter(|&e| mask & (1 << e) != 0).collect();
            for &x in &elems {
                for &y in &elems {
                    let s = group.add(x, y);
                    if mask & (1 << s) == 0 {
                        mask |= 1 << s;
                        grew = true;
                    }
                }
            }
            if !grew {
                return mask;
            }
        }
    };
    let mut masks: Vec<u64> = cyclic.clone();
    let mut frontier = masks.clone();
    while let Some(m) = frontier.pop() {
        for c in cyclic.clone() {
            let j = join(m, c);
            if !masks.contains(&j) {
                masks.push(j);
                frontier.push(j);
            }
        }
    }
    masks.sort_by_key(|m| (m.count_ones(), *m));
    masks
        .into_iter()
        .map(|m| Subgroup::new(GroupSubset::from_mask(group.clone(), m)))
        .collect()
}

pub fn enumerate_subgroups(group: &Arc<FiniteAbelianGroup>) -> Result<Vec<Subgroup>> {
    enumerate_subgroups_capped(group, DEFAULT_SUBGROUP_CAP)
}

/// Additive pigeonhole: |A| + |B| > |G| forces A + B = G.
pub fn check_pigeonhole_cover(a: &GroupSubset, b: &GroupSubset) -> Result<Verdict> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::Precondition("A and B must be nonempty".into()));
    }
    if a.cardinality() + b.cardinality() <= a.group().order() {
        return Ok(Verdict::NotApplicable);
    }
    let sum = minkowski_sum(a, b)?;
    Ok(if sum.is_full() {
        Verdict::Pass
    } else {
        Verdict::Fail
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChowlaMode {
    Chowla,
    CauchyDavenport,
}

fn is_prime(n: usize) -> bool {
    n >= 2 && (2..n).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// |A+B| >= min(m, |A|+|B|-1) over Z/m, under Chowla's divisibility
/// hypotheses or Cauchy-Davenport's primality hypothesis.
pub fn check_chowla_cd(a: &GroupSubset, b: &GroupSubset, mode: ChowlaMode) -> Result<Verdict> {
    let m = a
        .group()
        .is_cyclic_presentation()
        .ok_or_else(|| Error::Precondition("Chowla/Cauchy-Davenport needs a cyclic group".into()))?;
    if a.group().moduli() != b.group().moduli() {
        return Err(Error::Precondition("group mismatch".into()));
    }
    if a.is_empty() || b.is_empty() {
        return Err(Error::Precondition("A and B must be nonempty".into()));
    }
    match mode {
        ChowlaMode::Chowla => {
            let applicable =
                b.contains(0) && b.elements().all(|x| x == 0 || gcd(x, m) == 1);
            if !applicable {
                return Ok(Verdict::NotApplicable);
            }
        }
        ChowlaMode::CauchyDavenport => {
            if !is_prime(m) {
                return Err(Error::Precondition(format!("{m} is not prime")));
            }
        }
    }
    let sum = minkowski_sum(a, b)?;
    let bound = m.min(a.cardinality() + b.cardinality() - 1);
    Ok(if sum.cardinality() >= bound {
        Verdict::Pass
    } else {
        Verdict::Fail
    })
}

/// Descent step from Chowla's proof: for an applicable pair with
/// |A|, |B| >= 2 and A != G, some e in A and b* in B \ {0} have
/// e + b* not in A.
pub fn chowla_descent_witness(a: &GroupSubset, b: &GroupSubset) -> Result<Verdict> {
    let m = a
        .group()
        .is_cyclic_presentation()
        .ok_or_else(|| Error::Precondition("needs a cyclic group".into()))?;
    let applicable = a.cardinality() >= 2
        && b.cardinality() >= 2
        && !a.is_full()
        && b.contains(0)
        && b.elements().all(|x| x == 0 || gcd(x, m) == 1);
    if !applicable {
        return Ok(Verdict::NotApplicable);
    }
    let grp = a.group();
    let found = a.elements().any(|e| {
        b.elements()
            .any(|bstar| bstar != 0 && !a.contains(grp.add(e, bstar)))
    });
    Ok(if found { Verdict::Pass } else { Verdict::Fail })
}

#[derive(Debug)]
pub struct KneserReport {
    /// Kneser's existence inequality, |A|+|B| <= |G| hypothesis.
    pub existence: Verdict,
    pub witness: Option<Subgroup>,
    /// Audit: some proper subgroup in the full lattice satisfies the bound.
    pub lattice_audit: Verdict,
    /// Exact identity |A+B| = |A+H| + |B+H| - |H|, |A+B| < |A|+|B| hypothesis.
    pub stabilizer_identity: Verdict,
}

impl KneserReport {
    pub fn holds(&self) -> bool {
        self.existence != Verdict::Fail
            && self.lattice_audit != Verdict::Fail
            && self.stabilizer_identity != Verdict::Fail
    }
}

/// Check both Kneser theorems on one pair.
pub fn check_kneser(a: &GroupSubset, b: &GroupSubset) -> Result<KneserReport> {
    a.same_group(b)?;
    if a.is_empty() || b.is_empty() {
        return Err(Error::Precondition("A and B must be nonempty".into()));
    }
    let group = a.group();
    let order = group.order();
    let sum = minkowski_sum(a, b)?;
    let (ka, kb, ks) = (a.cardinality(), b.cardinality(), sum.cardinality());

    let mut witness = None;
    let existence = if ka + kb > order {
        Verdict::NotApplicable
    } else if ks >= ka + kb - 1 {
        witness = Some(Subgroup::trivial(group.clone()));
        Verdict::Pass
    } else {
        let h = stabilizer(&sum)?;
        let ok = h.is_proper() && ks >= ka + kb - h.order();
        if ok {
            witness = Some(h);
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    };

    let lattice_audit = if ka + kb > order {
        Verdict::NotApplicable
    } else {
        let found = enumerate_subgroups(group)?
            .iter()
            .any(|h| h.is_proper() && ks >= ka + kb - h.order());
        if found {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    };

    let stabilizer_identity = if ks < ka + kb {
        let h = stabilizer(&sum)?;
        let ah = minkowski_sum(a, h.carrier())?.cardinality();
        let bh = minkowski_sum(b, h.carrier())?.cardinality();
        if ks + h.order() == ah + bh {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    } else {
        Verdict::NotApplicable
    };

    Ok(KneserReport {
        existence,
        witness,
        lattice_audit,
        stabilizer_identity,
    })
}

impl fmt::Display for FiniteAbelianGroup {
    /// Text form `Z6`, `Z2xZ2`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.moduli.is_empty() {
            return write!(f, "Z1");
        }
        for (i, m) in self.moduli.iter().enumerate() {
            if i > 0 {
                write!(f, "x")?;
            }
            write!(f, "Z{m}")?;
        }
        Ok(())
    }
}

pub fn parse_group(s: &str) -> Result<Arc<FiniteAbelianGroup>> {
    let moduli: Vec<usize> = s
        .split('x')
        .map(|part| {
            part.strip_prefix('Z')
                .and_then(|v| v.parse::<usize>().ok())
                .ok_or_else(|| Error::Parse(format!("bad group component `{part}` in `{s}`")))
        })
        .collect::<Result<_>>()?;
    FiniteAbelianGroup::new(moduli)
}

impl fmt::Display for GroupSubset {
    /// Text form `Z6:{0,3}`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{{", self.group)?;
        for (i, e) in self.elements().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, "}}")
    }
}

impl fmt::Debug for GroupSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for GroupSubset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (grp, rest) = s
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("expected G:{{..}}, got `{s}`")))?;
        let group = parse_group(grp)?;
        GroupSubset::from_elems(group, crate::intset::parse_brace_list(rest)?)
    }
}

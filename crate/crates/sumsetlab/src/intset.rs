//! Bounded sets of positive integers and Shnirel'man-convention sumsets.
//!
//! A `BoundedIntSet` is a subset of `{1,..,g}` stored as a dense bitset.
//! Sumsets adjoin 0 to every summand and truncate results to `[1,g]`;
//! truncation is harmless because all elements are positive and every
//! downstream quantity is evaluated only on `[1,g]`.

use std::fmt;
use std::str::FromStr;

use crate::bits::BitSet;
use crate::error::{Error, Result};

pub type Rational = num_rational::Ratio<i64>;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(n, d)
}

/// A finite set of positive integers with an explicit bound `g`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BoundedIntSet {
    bound: usize,
    // bit i <=> integer i is a member; bit 0 is always clear
    bits: BitSet,
}

impl BoundedIntSet {
    pub fn empty(bound: usize) -> Self {
        assert!(bound >= 1, "bound must be positive");
        BoundedIntSet {
            bound,
            bits: BitSet::new(bound + 1),
        }
    }

    pub fn from_elems(bound: usize, elems: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut set = Self::empty(bound);
        for x in elems {
            if x < 1 || x > bound {
                return Err(Error::Range(format!(
                    "element {x} outside [1, {bound}]"
                )));
            }
            set.bits.set(x);
        }
        Ok(set)
    }

    /// All of `{1,..,g}`.
    pub fn full(bound: usize) -> Self {
        Self::from_elems(bound, 1..=bound).expect("in range")
    }

    /// Decode a membership mask: bit `i` of `mask` <=> `i+1` is a member.
    /// Used by exhaustive generators.
    pub fn from_mask(bound: usize, mask: u64) -> Self {
        assert!(bound <= 64);
        let mut set = Self::empty(bound);
        for i in 0..bound {
            if mask & (1 << i) != 0 {
                set.bits.set(i + 1);
            }
        }
        set
    }

    pub fn bound(&self) -> usize {
        self.bound
    }

    pub fn contains(&self, x: usize) -> bool {
        x >= 1 && x <= self.bound && self.bits.test(x)
    }

    pub fn cardinality(&self) -> usize {
        self.bits.count()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn members(&self) -> impl Iterator<Item = usize> + '_ {
        self.bits.iter().filter(|&i| i > 0)
    }

    /// A(x): members in `[1,x]`.
    pub fn count(&self, x: usize) -> Result<usize> {
        if x > self.bound {
            return Err(Error::Range(format!(
                "count argument {x} exceeds bound {}",
                self.bound
            )));
        }
        if x == 0 {
            return Ok(0);
        }
        Ok(self.bits.count_upto(x))
    }

    /// Same set viewed under a new bound; members above it are dropped.
    pub fn restrict(&self, bound: usize) -> Self {
        let mut out = Self::empty(bound);
        for x in self.members() {
            if x <= bound {
                out.bits.set(x);
            }
        }
        out
    }

    pub fn union(&self, other: &BoundedIntSet) -> Self {
        assert_eq!(self.bound, other.bound, "bound mismatch");
        let mut out = self.clone();
        out.bits.union_with(&other.bits);
        out
    }

    pub fn difference(&self, other: &BoundedIntSet) -> Self {
        assert_eq!(self.bound, other.bound, "bound mismatch");
        let mut out = self.clone();
        out.bits.difference_with(&other.bits);
        out
    }

    pub fn is_subset_of(&self, other: &BoundedIntSet) -> bool {
        assert_eq!(self.bound, other.bound, "bound mismatch");
        self.bits.is_subset_of(&other.bits)
    }

    pub fn insert(&mut self, x: usize) -> Result<()> {
        if x < 1 || x > self.bound {
            return Err(Error::Range(format!("element {x} outside [1, {}]", self.bound)));
        }
        self.bits.set(x);
        Ok(())
    }
}

/// `{a_1+..+a_h : a_i in A_i ∪ {0}} ∩ [1,g]`.
///
/// Computed by shifted-or convolution: the accumulator starts at `{0}` and
/// each summand folds in `acc | ⋃_a (acc << a)`.
pub fn shnirelman_sumset(sets: &[BoundedIntSet], bound: usize) -> Result<BoundedIntSet> {
    if sets.is_empty() {
        return Err(Error::Precondition("sumset of an empty family".into()));
    }
    for s in sets {
        if s.bound() != bound {
            return Err(Error::Precondition(format!(
                "summand bound {} does not match {bound}",
                s.bound()
            )));
        }
    }
    let mut acc = BitSet::new(bound + 1);
    acc.set(0);
    for s in sets {
        let prev = acc.clone();
        for a in s.members() {
            acc.or_shifted(&prev, a);
        }
    }
    acc.clear(0);
    Ok(BoundedIntSet { bound, bits: acc })
}

/// `hA` under the 0-adjoined convention, truncated to `[1,g]`.
pub fn hfold_sumset(a: &BoundedIntSet, h: usize, bound: usize) -> Result<BoundedIntSet> {
    if h == 0 {
        return Err(Error::Precondition("h-fold sumset needs h >= 1".into()));
    }
    let copies = vec![a.restrict(bound); h];
    shnirelman_sumset(&copies, bound)
}

/// `{a+t : a in A} ∩ [1,g]`; out-of-range images are dropped.
pub fn translate(a: &BoundedIntSet, t: i64, bound: usize) -> BoundedIntSet {
    let mut out = BoundedIntSet::empty(bound);
    for x in a.members() {
        let y = x as i64 + t;
        if y >= 1 && y <= bound as i64 {
            out.bits.set(y as usize);
        }
    }
    out
}

/// σ_g(A) = min over 1 <= n <= g of A(n)/n, exactly.
pub fn truncated_density(a: &BoundedIntSet) -> Rational {
    let mut best = rat(1, 1);
    for n in 1..=a.bound() {
        let q = rat(a.count(n).expect("n <= bound") as i64, n as i64);
        if q < best {
            best = q;
        }
    }
    best
}

/// True iff the h-fold sumset of A covers `{1,..,g}`.
pub fn is_basis_up_to(a: &BoundedIntSet, h: usize, g: usize) -> Result<bool> {
    if h == 0 {
        return Err(Error::Precondition("basis order must be >= 1".into()));
    }
    if g == 0 || g > a.bound() {
        return Err(Error::Range(format!(
            "g = {g} outside [1, {}]",
            a.bound()
        )));
    }
    let sum = hfold_sumset(a, h, g)?;
    Ok(sum.count(g)? == g)
}

impl fmt::Display for BoundedIntSet {
    /// Canonical text form `g:{a,b,c}`, ascending, no whitespace.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{{", self.bound)?;
        let mut first = true;
        for x in self.members() {
            if !first {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
            first = false;
        }
        write!(f, "}}")
    }
}

impl fmt::Debug for BoundedIntSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

pub(crate) fn parse_brace_list(s: &str) -> Result<Vec<usize>> {
    let inner = s
        .strip_prefix('{')
        .and_then(|s| s.strip_suffix('}'))
        .ok_or_else(|| Error::Parse(format!("expected {{..}}, got `{s}`")))?;
    if inner.is_empty() {
        return Ok(Vec::new());
    }
    inner
        .split(',')
        .map(|tok| {
            tok.parse::<usize>()
                .map_err(|_| Error::Parse(format!("bad integer `{tok}` in `{s}`")))
        })
        .collect()
}

impl FromStr for BoundedIntSet {
    type Err = Error;

    /// Parse `g:{a,b,c}`.
    fn from_str(s: &str) -> Result<Self> {
        let (g, rest) = s
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("expected g:{{..}}, got `{s}`")))?;
        let bound: usize = g
            .parse()
            .map_err(|_| Error::Parse(format!("bad bound `{g}`")))?;
        if bound == 0 {
            return Err(Error::Parse("bound must be positive".into()));
        }
        BoundedIntSet::from_elems(bound, parse_brace_list(rest)?)
    }
}

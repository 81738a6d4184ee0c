//! Eventually periodic sets of nonnegative integers and their exact densities.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::intset::{parse_brace_list, rat, Rational};

/// A set of nonnegative integers given by a finite head up to `threshold`
/// and a residue pattern mod `period` beyond it.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct EventuallyPeriodicSet {
    threshold: usize,
    head: Vec<bool>, // indices 0..=threshold
    period: usize,
    residues: Vec<bool>, // indices 0..period
}

impl EventuallyPeriodicSet {
    pub fn new(
        threshold: usize,
        head: impl IntoIterator<Item = usize>,
        period: usize,
        residues: impl IntoIterator<Item = usize>,
    ) -> Result<Self> {
        if period == 0 {
            return Err(Error::Precondition("period must be >= 1".into()));
        }
        let mut h = vec![false; threshold + 1];
        for x in head {
            if x > threshold {
                return Err(Error::Range(format!(
                    "head element {x} above threshold {threshold}"
                )));
            }
            h[x] = true;
        }
        let mut r = vec![false; period];
        for x in residues {
            if x >= period {
                return Err(Error::Range(format!(
                    "residue {x} outside [0, {period})"
                )));
            }
            r[x] = true;
        }
        let mut set = EventuallyPeriodicSet {
            threshold,
            head: h,
            period,
            residues: r,
        };
        set.normalize();
        Ok(set)
    }

    // Peel head entries that already agree with the periodic tail, so equal
    // sets built from different thresholds compare equal.
    fn normalize(&mut self) {
        while self.threshold >= 1 && self.head[self.threshold] == self.tail_member(self.threshold)
        {
            self.head.pop();
            self.threshold -= 1;
        }
    }

    fn tail_member(&self, n: usize) -> bool {
        self.residues[n % self.period]
    }

    pub fn contains(&self, n: usize) -> bool {
        if n <= self.threshold {
            self.head[n]
        } else {
            self.tail_member(n)
        }
    }

    pub fn threshold(&self) -> usize {
        self.threshold
    }

    pub fn period(&self) -> usize {
        self.period
    }

    pub fn residue_count(&self) -> usize {
        self.residues.iter().filter(|&&b| b).count()
    }

    pub fn residues(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.period).filter(move |&r| self.residues[r])
    }

    /// S(n): members in `[1,n]`. 0 is never counted even when `0 ∈ S`.
    pub fn count(&self, n: usize) -> usize {
        let head_top = n.min(self.threshold);
        let mut total = (1..=head_top).filter(|&i| self.head[i]).count();
        if n > self.threshold {
            // tail covers [threshold+1, n]
            let lo = self.threshold + 1;
            for r in 0..self.period {
                if self.residues[r] {
                    // #{x in [lo, n] : x ≡ r (mod period)}
                    total += multiples_in(lo, n, self.period, r);
                }
            }
        }
        total
    }

    /// σ(S) = inf over n >= 1 of S(n)/n, exactly.
    ///
    /// For n > N the deficiency S(n) - (|R|/m)·n is periodic in n with
    /// period m, so within each residue class of n the quotient S(n)/n
    /// either attains its minimum at the first candidate in (N, N+m] or
    /// decreases toward the limit |R|/m. The infimum over all n is therefore
    /// min( min_{1<=n<=N+m} S(n)/n , |R|/m ).
    pub fn shnirelman_density(&self) -> Rational {
        let mut best = rat(self.residue_count() as i64, self.period as i64);
        for n in 1..=(self.threshold + self.period) {
            let q = rat(self.count(n) as i64, n as i64);
            if q < best {
                best = q;
            }
        }
        best
    }

    /// d_L(S); for eventually periodic sets the liminf is the limit |R|/m.
    pub fn lower_density(&self) -> Rational {
        rat(self.residue_count() as i64, self.period as i64)
    }
}

/// #{x in [lo, hi] : x ≡ r (mod m)}, empty when lo > hi.
fn multiples_in(lo: usize, hi: usize, m: usize, r: usize) -> usize {
    if lo > hi {
        return 0;
    }
    let count_upto = |x: usize| {
        // #{y in [0, x] : y ≡ r (mod m)}
        if x < r {
            0
        } else {
            (x - r) / m + 1
        }
    };
    count_upto(hi) - if lo == 0 { 0 } else { count_upto(lo - 1) }
}

/// The classical counterexample to superadditivity of lower density:
/// A = residues 0..k-1 mod m, B = residues 0..l-1 mod m.
pub struct CongruenceExample {
    pub a: EventuallyPeriodicSet,
    pub b: EventuallyPeriodicSet,
    pub a_plus_b: EventuallyPeriodicSet,
    pub predicted: Rational,
}

pub fn congruence_example(k: usize, l: usize, m: usize) -> Result<CongruenceExample> {
    if k == 0 || l == 0 || m == 0 {
        return Err(Error::Precondition("k, l, m must be positive".into()));
    }
    if k + l > m {
        return Err(Error::Precondition(format!(
            "requires k + l <= m, got {k} + {l} > {m}"
        )));
    }
    let ep = |upper: usize| EventuallyPeriodicSet::new(0, [0], m, 0..upper);
    Ok(CongruenceExample {
        a: ep(k)?,
        b: ep(l)?,
        a_plus_b: ep(k + l - 1)?,
        predicted: rat((k + l - 1) as i64, m as i64),
    })
}

impl fmt::Display for EventuallyPeriodicSet {
    /// Text form `N:{head}|m:{residues}`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |f: &mut fmt::Formatter<'_>, items: Vec<usize>| -> fmt::Result {
            write!(f, "{{")?;
            for (i, x) in items.iter().enumerate() {
                if i > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{x}")?;
            }
            write!(f, "}}")
        };
        write!(f, "{}:", self.threshold)?;
        list(f, (0..=self.threshold).filter(|&i| self.head[i]).collect())?;
        write!(f, "|{}:", self.period)?;
        list(f, self.residues().collect())
    }
}

impl fmt::Debug for EventuallyPeriodicSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for EventuallyPeriodicSet {
    type Err = Error;

    /// Parse `N:{head}|m:{residues}`.
    fn from_str(s: &str) -> Result<Self> {
        let (head_part, tail_part) = s
            .split_once('|')
            .ok_or_else(|| Error::Parse(format!("expected N:{{..}}|m:{{..}}, got `{s}`")))?;
        let parse_half = |part: &str| -> Result<(usize, Vec<usize>)> {
            let (num, rest) = part
                .split_once(':')
                .ok_or_else(|| Error::Parse(format!("expected num:{{..}} in `{part}`")))?;
            let n: usize = num
                .parse()
                .map_err(|_| Error::Parse(format!("bad integer `{num}`")))?;
            Ok((n, parse_brace_list(rest)?))
        };
        let (threshold, head) = parse_half(head_part)?;
        let (period, residues) = parse_half(tail_part)?;
        EventuallyPeriodicSet::new(threshold, head, period, residues)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn odds() -> EventuallyPeriodicSet {
        EventuallyPeriodicSet::new(0, [], 2, [1]).unwrap()
    }

    #[test]
    fn count_examples() {
        assert_eq!(odds().count(7), 4);
        let evens = EventuallyPeriodicSet::new(0, [0], 2, [0]).unwrap();
        assert_eq!(evens.count(7), 3);
        let a = EventuallyPeriodicSet::new(0, [0], 5, [0, 1]).unwrap();
        assert_eq!(a.count(11), 5); // 1,5,6,10,11
    }

    #[test]
    fn count_matches_membership_scan() {
        let s = EventuallyPeriodicSet::new(9, [0, 2, 3, 7], 6, [1, 4, 5]).unwrap();
        let mut running = 0;
        for n in 1..200 {
            if s.contains(n) {
                running += 1;
            }
            assert_eq!(s.count(n), running, "n = {n}");
        }
    }

    #[test]
    fn density_examples() {
        assert_eq!(odds().shnirelman_density(), rat(1, 2));
        let evens = EventuallyPeriodicSet::new(0, [0], 2, [0]).unwrap();
        assert_eq!(evens.shnirelman_density(), rat(0, 1));
        let all = EventuallyPeriodicSet::new(0, [0], 1, [0]).unwrap();
        assert_eq!(all.shnirelman_density(), rat(1, 1));
    }

    #[test]
    fn lower_density_examples() {
        let a = EventuallyPeriodicSet::new(0, [0], 5, [0, 1]).unwrap();
        assert_eq!(a.lower_density(), rat(2, 5));
        let empty_tail = EventuallyPeriodicSet::new(2, [1], 3, []).unwrap();
        assert_eq!(empty_tail.lower_density(), rat(0, 1));
    }

    #[test]
    fn congruence_examples() {
        let ex = congruence_example(2, 3, 7).unwrap();
        assert_eq!(ex.predicted, rat(4, 7));
        assert_eq!(ex.a.lower_density(), rat(2, 7));
        assert_eq!(ex.b.lower_density(), rat(3, 7));
        assert_eq!(ex.a_plus_b.lower_density(), rat(4, 7));
        assert!(ex.predicted < ex.a.lower_density() + ex.b.lower_density());

        let ex = congruence_example(1, 1, 2).unwrap();
        assert_eq!(ex.predicted, rat(1, 2));

        let ex = congruence_example(3, 3, 6).unwrap();
        assert_eq!(ex.predicted, rat(5, 6));

        assert!(congruence_example(4, 4, 6).is_err());
    }

    #[test]
    fn normalization_gives_equality() {
        // same set, one built with a redundant long head
        let direct = EventuallyPeriodicSet::new(0, [], 2, [1]).unwrap();
        let padded = EventuallyPeriodicSet::new(5, [1, 3, 5], 2, [1]).unwrap();
        assert_eq!(direct, padded);
        assert_eq!(padded.threshold(), 0);
    }

    #[test]
    fn text_roundtrip() {
        for s in ["0:{}|5:{0,1}", "3:{0,2}|4:{1,3}", "0:{0}|1:{}"] {
            let parsed: EventuallyPeriodicSet = s.parse().unwrap();
            let again: EventuallyPeriodicSet = parsed.to_string().parse().unwrap();
            assert_eq!(parsed, again);
        }
        assert!("0:{}|0:{}".parse::<EventuallyPeriodicSet>().is_err());
    }
}

//! Fixed-width bitsets over index ranges `0..len`.
//!
//! This is the kernel shared by integer sets and group subsets: sumsets are
//! computed by shifted-or convolution over whole words, so everything stays
//! exact and word-parallel.

const WORD: usize = 64;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitSet {
    len: usize,
    words: Vec<u64>,
}

impl BitSet {
    pub fn new(len: usize) -> Self {
        BitSet {
            len,
            words: vec![0; len.div_ceil(WORD)],
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn test(&self, idx: usize) -> bool {
        idx < self.len && self.words[idx / WORD] & (1u64 << (idx % WORD)) != 0
    }

    pub fn set(&mut self, idx: usize) {
        assert!(idx < self.len, "bit index {idx} out of range {}", self.len);
        self.words[idx / WORD] |= 1u64 << (idx % WORD);
    }

    pub fn clear(&mut self, idx: usize) {
        assert!(idx < self.len);
        self.words[idx / WORD] &= !(1u64 << (idx % WORD));
    }

    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Number of set bits with index `<= upto`.
    pub fn count_upto(&self, upto: usize) -> usize {
        let mut total = 0;
        let full = (upto + 1) / WORD;
        for w in &self.words[..full.min(self.words.len())] {
            total += w.count_ones() as usize;
        }
        let rem = (upto + 1) % WORD;
        if rem != 0 && full < self.words.len() {
            let mask = (1u64 << rem) - 1;
            total += (self.words[full] & mask).count_ones() as usize;
        }
        total
    }

    pub fn union_with(&mut self, other: &BitSet) {
        debug_assert_eq!(self.len, other.len);
        for (w, o) in self.words.iter_mut().zip(&other.words) {
            *w |= o;
        }
    }

    pub fn intersect_with(&mut self, other: &BitSet) {
        debug_assert_eq!(self.len, other.len);
        for (w, o) in self.words.iter_mut().zip(&other.words) {
            *w &= o;
        }
    }

    pub fn difference_with(&mut self, other: &BitSet) {
        debug_assert_eq!(self.len, other.len);
        for (w, o) in self.words.iter_mut().zip(&other.words) {
            *w &= !o;
        }
    }

    pub fn is_subset_of(&self, other: &BitSet) -> bool {
        debug_assert_eq!(self.len, other.len);
        self.words.iter().zip(&other.words).all(|(w, o)| w & !o == 0)
    }

    /// `self |= other << shift`, with bits shifted past `len` discarded.
    pub fn or_shifted(&mut self, other: &BitSet, shift: usize) {
        debug_assert_eq!(self.len, other.len);
        if shift >= self.len {
            return;
        }
        let word_shift = shift / WORD;
        let bit_shift = shift % WORD;
        let n = self.words.len();
        if bit_shift == 0 {
            for i in (word_shift..n).rev() {
                self.words[i] |= other.words[i - word_shift];
            }
        } else {
            for i in (word_shift..n).rev() {
                let lo = other.words[i - word_shift] << bit_shift;
                let hi = if i > word_shift {
                    other.words[i - word_shift - 1] >> (WORD - bit_shift)
                } else {
                    0
                };
                self.words[i] |= lo | hi;
            }
        }
        self.trim();
    }

    fn trim(&mut self) {
        let rem = self.len % WORD;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len).filter(move |&i| self.test(i))
    }
}

impl std::fmt::Debug for BitSet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

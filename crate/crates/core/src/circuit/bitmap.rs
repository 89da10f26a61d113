use crate::error::{Error, Result};

/// Bit-packed truth table; bit `idx` belongs to the assignment with
/// `x_{i+1} = (idx >> i) & 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TruthTableBitmap {
    n: usize,
    words: Vec<u64>,
}

fn word_count(n: usize) -> usize {
    ((1usize << n) + 63) / 64
}

impl TruthTableBitmap {
    pub fn zeros(n: usize) -> Self {
        TruthTableBitmap { n, words: vec![0; word_count(n)] }
    }

    pub fn from_words(n: usize, mut words: Vec<u64>) -> Self {
        words.resize(word_count(n), 0);
        if n < 6 {
            words[0] &= (1u64 << (1 << n)) - 1;
        }
        TruthTableBitmap { n, words }
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize) -> bool) -> Self {
        let mut t = Self::zeros(n);
        for idx in 0..1usize << n {
            if f(idx) {
                t.set(idx, true);
            }
        }
        t
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        1 << self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    #[inline]
    pub fn get(&self, idx: usize) -> bool {
        self.words[idx >> 6] >> (idx & 63) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, idx: usize, v: bool) {
        let m = 1u64 << (idx & 63);
        if v {
            self.words[idx >> 6] |= m;
        } else {
            self.words[idx >> 6] &= !m;
        }
    }

    pub fn count_ones(&self) -> u64 {
        self.words.iter().map(|w| w.count_ones() as u64).sum()
    }

    /// `0`/`1` characters in index order.
    pub fn to_bit_string(&self) -> String {
        (0..self.len()).map(|i| if self.get(i) { '1' } else { '0' }).collect()
    }

    /// Raw file layout: bit idx at byte idx>>3, position idx&7.
    pub fn to_bytes(&self) -> Vec<u8> {
        let nbytes = ((1usize << self.n) + 7) / 8;
        let mut out = Vec::with_capacity(nbytes);
        for w in &self.words {
            out.extend_from_slice(&w.to_le_bytes());
        }
        out.truncate(nbytes);
        out
    }

    pub fn from_bytes(n: usize, bytes: &[u8]) -> Result<Self> {
        let nbytes = ((1usize << n) + 7) / 8;
        if bytes.len() != nbytes {
            return Err(Error::Argument(format!("bitmap for n={n} needs {nbytes} bytes, got {}", bytes.len())));
        }
        let mut words = vec![0u64; word_count(n)];
        for (i, b) in bytes.iter().enumerate() {
            words[i / 8] |= (*b as u64) << (8 * (i % 8));
        }
        Ok(Self::from_words(n, words))
    }
}

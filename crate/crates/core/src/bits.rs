//! Fixed-width bit rows used by the subset-sum reachability tables.

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct BitRow {
    words: Vec<u64>,
    len: usize,
}

impl BitRow {
    /// A zeroed row holding bits `0..len`.
    pub(crate) fn zeros(len: usize) -> Self {
        BitRow {
            words: vec![0; len.div_ceil(64)],
            len,
        }
    }

    #[inline]
    pub(crate) fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub(crate) fn get(&self, i: usize) -> bool {
        i < self.len && self.words[i / 64] >> (i % 64) & 1 == 1
    }

    #[inline]
    pub(crate) fn set(&mut self, i: usize) {
        if i < self.len {
            self.words[i / 64] |= 1 << (i % 64);
        }
    }

    pub(crate) fn copy_from(&mut self, other: &BitRow) {
        debug_assert_eq!(self.len, other.len);
        self.words.copy_from_slice(&other.words);
    }

    /// `self |= src << shift`, truncated to the row width.
    pub(crate) fn or_shifted(&mut self, src: &BitRow, shift: usize) {
        debug_assert_eq!(self.len, src.len);
        let n = self.words.len();
        let word_shift = shift / 64;
        let bit_shift = shift % 64;
        if word_shift >= n {
            return;
        }
        for i in (word_shift..n).rev() {
            let j = i - word_shift;
            let mut w = src.words[j] << bit_shift;
            if bit_shift != 0 && j > 0 {
                w |= src.words[j - 1] >> (64 - bit_shift);
            }
            self.words[i] |= w;
        }
        self.mask_tail();
    }

    pub(crate) fn intersects(&self, other: &BitRow) -> bool {
        self.words
            .iter()
            .zip(&other.words)
            .any(|(a, b)| a & b != 0)
    }

    #[cfg(test)]
    fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    fn mask_tail(&mut self) {
        let rem = self.len % 64;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }
}

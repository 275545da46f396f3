/// A dense boolean matrix stored row-major in 64-bit words.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BitMatrix {
    cols: usize,
    words: usize,
    data: Vec<u64>,
}

impl BitMatrix {
    pub fn new(rows: usize, cols: usize) -> Self {
        let words = cols.div_ceil(64).max(1);
        BitMatrix {
            cols,
            words,
            data: vec![0; rows * words],
        }
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> bool {
        debug_assert!(col < self.cols);
        self.data[row * self.words + col / 64] >> (col % 64) & 1 == 1
    }

    /// Sets the bit and reports whether it was previously clear.
    #[inline]
    pub fn set(&mut self, row: usize, col: usize) -> bool {
        debug_assert!(col < self.cols);
        let w = &mut self.data[row * self.words + col / 64];
        let mask = 1u64 << (col % 64);
        let fresh = *w & mask == 0;
        *w |= mask;
        fresh
    }

    pub fn row(&self, row: usize) -> Ones<'_> {
        let start = row * self.words;
        Ones {
            words: &self.data[start..start + self.words],
            index: 0,
            current: self.data.get(start).copied().unwrap_or(0),
        }
    }

    /// Set columns of `row` within `range`.
    pub fn row_range(&self, row: usize, range: std::ops::Range<usize>) -> impl Iterator<Item = usize> + '_ {
        self.row(row)
            .skip_while(move |c| *c < range.start)
            .take_while(move |c| *c < range.end)
    }

    pub fn row_is_empty(&self, row: usize) -> bool {
        let start = row * self.words;
        self.data[start..start + self.words].iter().all(|w| *w == 0)
    }
}

pub struct Ones<'a> {
    words: &'a [u64],
    index: usize,
    current: u64,
}

impl Iterator for Ones<'_> {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        loop {
            if self.current != 0 {
                let bit = self.current.trailing_zeros() as usize;
                self.current &= self.current - 1;
                return Some(self.index * 64 + bit);
            }
            self.index += 1;
            if self.index >= self.words.len() {
                return None;
            }
            self.current = self.words[self.index];
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn set_get_iterate() {
        let mut m = BitMatrix::new(3, 130);
        assert!(m.set(1, 0));
        assert!(m.set(1, 64));
        assert!(m.set(1, 129));
        assert!(!m.set(1, 64));
        assert!(m.get(1, 129));
        assert!(!m.get(0, 129));
        assert_eq!(m.row(1).collect::<Vec<_>>(), vec![0, 64, 129]);
        assert_eq!(m.row_range(1, 1..130).collect::<Vec<_>>(), vec![64, 129]);
        assert!(m.row_is_empty(2));
        assert_eq!(m.row(2).count(), 0);
    }
}

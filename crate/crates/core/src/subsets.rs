use alloc::vec::Vec;

/// Size-`k` subsets of `items` in lexicographic order of positions.
pub(crate) struct Combinations<'a, T> {
    items: &'a [T],
    idx: Vec<usize>,
    done: bool,
}

impl<'a, T: Copy> Combinations<'a, T> {
    pub(crate) fn new(items: &'a [T], k: usize) -> Self {
        Self {
            items,
            idx: (0..k).collect(),
            done: k > items.len(),
        }
    }
}

impl<T: Copy> Iterator for Combinations<'_, T> {
    type Item = Vec<T>;

    fn next(&mut self) -> Option<Vec<T>> {
        if self.done {
            return None;
        }
        let out = self.idx.iter().map(|&i| self.items[i]).collect();
        let n = self.items.len();
        let k = self.idx.len();
        // advance to the next position vector
        let mut i = k;
        loop {
            if i == 0 {
                self.done = true;
                break;
            }
            i -= 1;
            if self.idx[i] < n - k + i {
                self.idx[i] += 1;
                for j in i + 1..k {
                    self.idx[j] = self.idx[j - 1] + 1;
                }
                break;
            }
        }
        Some(out)
    }
}

/// All subsets of `items`, smallest first and lexicographic within a size.
pub(crate) fn size_then_lex<T: Copy>(items: &[T]) -> impl Iterator<Item = Vec<T>> + '_ {
    (0..=items.len()).flat_map(move |k| Combinations::new(items, k))
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn lexicographic_pairs() {
        let got: Vec<_> = Combinations::new(&[1, 2, 3, 4], 2).collect();
        assert_eq!(
            got,
            vec![
                vec![1, 2],
                vec![1, 3],
                vec![1, 4],
                vec![2, 3],
                vec![2, 4],
                vec![3, 4]
            ]
        );
    }

    #[test]
    fn empty_and_oversized() {
        assert_eq!(
            Combinations::new(&[7, 8], 0).collect::<Vec<_>>(),
            vec![Vec::<i32>::new()]
        );
        assert_eq!(Combinations::new(&[7, 8], 3).count(), 0);
        assert_eq!(size_then_lex(&[1, 2, 3]).count(), 8);
    }
}

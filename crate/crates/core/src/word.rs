//! Words over a finite alphabet of letter indices.

use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Word(pub Vec<usize>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn letter(i: usize) -> Self {
        Word(vec![i])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[usize] {
        &self.0
    }

    pub fn reversed(&self) -> Word {
        Word(self.0.iter().rev().copied().collect())
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    /// `(prefix, suffix)` with `prefix.len() == k`.
    pub fn split_at(&self, k: usize) -> (Word, Word) {
        (Word(self.0[..k].to_vec()), Word(self.0[k..].to_vec()))
    }

    /// Renders the word with letter names, e.g. `[w0|w1]`; `[]` is empty.
    pub fn display_with<'a>(&'a self, names: &'a [String]) -> impl fmt::Display + 'a {
        struct D<'a>(&'a Word, &'a [String]);
        impl fmt::Display for D<'_> {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("[")?;
                for (k, &i) in self.0 .0.iter().enumerate() {
                    if k > 0 {
                        f.write_str("|")?;
                    }
                    match self.1.get(i) {
                        Some(n) => f.write_str(n)?,
                        None => write!(f, "#{i}")?,
                    }
                }
                f.write_str("]")
            }
        }
        D(self, names)
    }
}

impl From<Vec<usize>> for Word {
    fn from(v: Vec<usize>) -> Self {
        Word(v)
    }
}

impl<const N: usize> From<[usize; N]> for Word {
    fn from(v: [usize; N]) -> Self {
        Word(v.to_vec())
    }
}

/// All words of length `<= max_len` over `alphabet` letters, ordered by
/// length and then lexicographically.
pub fn all_words(alphabet: usize, max_len: usize) -> Vec<Word> {
    let mut out = vec![Word::empty()];
    let mut layer = vec![Word::empty()];
    for _ in 0..max_len {
        let mut next = Vec::with_capacity(layer.len() * alphabet);
        for w in &layer {
            for a in 0..alphabet {
                let mut v = w.0.clone();
                v.push(a);
                next.push(Word(v));
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

/// `Σ_{n <= max_len} alphabet^n`, saturating.
pub fn word_count(alphabet: usize, max_len: usize) -> usize {
    let mut total = 0usize;
    let mut layer = 1usize;
    for _ in 0..=max_len {
        total = total.saturating_add(layer);
        layer = layer.saturating_mul(alphabet);
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn enumeration_counts() {
        assert_eq!(all_words(2, 3).len(), 15);
        assert_eq!(word_count(2, 3), 15);
        assert_eq!(word_count(0, 5), 1);
        assert_eq!(all_words(0, 5), vec![Word::empty()]);
        assert_eq!(word_count(10, 40), usize::MAX);
    }

    #[test]
    fn display_uses_names() {
        let names = vec!["a".to_string(), "b".to_string()];
        assert_eq!(Word::from([0, 1, 0]).display_with(&names).to_string(), "[a|b|a]");
        assert_eq!(Word::empty().display_with(&names).to_string(), "[]");
    }
}

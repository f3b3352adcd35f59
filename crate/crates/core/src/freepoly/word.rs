use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

/// A word in the free monoid on `d` letters, stored as zero-based generator indices.
///
/// Ordered by length first, then lexicographically; this is the canonical
/// order used for serialization and for indexing Fock-space bases.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Word(Vec<usize>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn new(letters: Vec<usize>) -> Self {
        Word(letters)
    }

    pub fn letter(i: usize) -> Self {
        Word(vec![i])
    }

    pub fn letters(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn max_letter(&self) -> Option<usize> {
        self.0.iter().copied().max()
    }

    /// `self` followed by `other`.
    pub fn concat(&self, other: &Word) -> Word {
        let mut v = Vec::with_capacity(self.len() + other.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&other.0);
        Word(v)
    }

    /// Word without its last letter; `None` for the empty word.
    pub fn prefix(&self) -> Option<Word> {
        if self.0.is_empty() {
            None
        } else {
            Some(Word(self.0[..self.0.len() - 1].to_vec()))
        }
    }

    /// All words of length exactly `len` over `d` letters, in canonical order.
    pub fn all_of_length(d: usize, len: usize) -> Vec<Word> {
        let mut out = vec![Word::empty()];
        for _ in 0..len {
            let mut next = Vec::with_capacity(out.len() * d);
            for w in &out {
                for i in 0..d {
                    let mut v = w.0.clone();
                    v.push(i);
                    next.push(Word(v));
                }
            }
            out = next;
        }
        out
    }

    /// All words of length at most `max_len`, in canonical order.
    pub fn all_up_to(d: usize, max_len: usize) -> Vec<Word> {
        (0..=max_len).flat_map(|l| Word::all_of_length(d, l)).collect()
    }

    /// Position of the word among words of the same length (base-`d` value).
    pub fn lex_rank(&self, d: usize) -> usize {
        self.0.iter().fold(0, |acc, &i| acc * d + i)
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self.0.iter().map(|i| format!("z{}", i + 1)).collect();
        write!(f, "{}", parts.join("*"))
    }
}

impl From<Vec<usize>> for Word {
    fn from(v: Vec<usize>) -> Self {
        Word(v)
    }
}

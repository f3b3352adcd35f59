//! Polynomials in `d` noncommuting variables with complex coefficients.

mod parse;
mod word;

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{c, CMat, C64};
use crate::mattuple::MatrixTuple;

pub use parse::parse;
pub use word::Word;

/// Above this many terms, evaluation caches prefix products.
const MEMO_THRESHOLD: usize = 32;

/// A finitely supported map from words to nonzero complex coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct FreePolynomial {
    d: usize,
    terms: BTreeMap<Word, C64>,
}

impl FreePolynomial {
    pub fn zero(d: usize) -> Self {
        FreePolynomial { d, terms: BTreeMap::new() }
    }

    pub fn constant(d: usize, value: C64) -> Self {
        Self::monomial(d, Word::empty(), value).expect("empty word is always valid")
    }

    pub fn one(d: usize) -> Self {
        Self::constant(d, c(1.0, 0.0))
    }

    /// The variable `z_{i+1}` (zero-based index `i`).
    pub fn var(d: usize, i: usize) -> Result<Self> {
        Self::monomial(d, Word::letter(i), c(1.0, 0.0))
    }

    pub fn monomial(d: usize, word: Word, coeff: C64) -> Result<Self> {
        Self::from_terms(d, [(word, coeff)])
    }

    /// Builds a polynomial, summing repeated words and dropping zeros.
    pub fn from_terms<I>(d: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Word, C64)>,
    {
        let mut map = BTreeMap::new();
        for (w, a) in terms {
            if let Some(m) = w.max_letter() {
                if m >= d {
                    return Err(Error::VariableOutOfRange { index: m, d });
                }
            }
            if !a.re.is_finite() || !a.im.is_finite() {
                return Err(Error::InvalidInput(format!("non-finite coefficient {a}")));
            }
            *map.entry(w).or_insert(c(0.0, 0.0)) += a;
        }
        map.retain(|_, a| *a != c(0.0, 0.0));
        Ok(FreePolynomial { d, terms: map })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in canonical word order.
    pub fn terms(&self) -> impl Iterator<Item = (&Word, &C64)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, w: &Word) -> C64 {
        self.terms.get(w).copied().unwrap_or(c(0.0, 0.0))
    }

    /// Maximum word length in the support; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.terms.keys().map(Word::len).max()
    }

    /// Square root of the sum of squared coefficient moduli.
    pub fn coeff_norm(&self) -> f64 {
        self.terms.values().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `sum_k |a_k|`.
    pub fn coeff_l1(&self) -> f64 {
        self.terms.values().map(|a| a.norm()).sum()
    }

    pub fn homogeneous_component(&self, n: usize) -> Self {
        FreePolynomial {
            d: self.d,
            terms: self
                .terms
                .iter()
                .filter(|(w, _)| w.len() == n)
                .map(|(w, a)| (w.clone(), *a))
                .collect(),
        }
    }

    /// Nonzero homogeneous components, keyed by degree.
    pub fn homogeneous_parts(&self) -> BTreeMap<usize, FreePolynomial> {
        let mut out: BTreeMap<usize, FreePolynomial> = BTreeMap::new();
        for (w, a) in &self.terms {
            out.entry(w.len())
                .or_insert_with(|| FreePolynomial::zero(self.d))
                .terms
                .insert(w.clone(), *a);
        }
        out
    }

    /// True when all terms share one degree (the zero polynomial counts).
    pub fn is_homogeneous(&self) -> bool {
        let mut lens = self.terms.keys().map(Word::len);
        match lens.next() {
            None => true,
            Some(first) => lens.all(|l| l == first),
        }
    }

    fn check_d(&self, other: &Self) -> Result<()> {
        if self.d != other.d {
            return Err(Error::DimensionMismatch(format!(
                "polynomials in {} and {} variables",
                self.d, other.d
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_d(other)?;
        let mut terms = self.terms.clone();
        for (w, a) in &other.terms {
            *terms.entry(w.clone()).or_insert(c(0.0, 0.0)) += a;
        }
        terms.retain(|_, a| *a != c(0.0, 0.0));
        Ok(FreePolynomial { d: self.d, terms })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(c(-1.0, 0.0)))
    }

    pub fn scale(&self, s: C64) -> Self {
        let mut terms: BTreeMap<Word, C64> =
            self.terms.iter().map(|(w, a)| (w.clone(), a * s)).collect();
        terms.retain(|_, a| *a != c(0.0, 0.0));
        FreePolynomial { d: self.d, terms }
    }

    /// Product in the free algebra: words concatenate, `self` on the left.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_d(other)?;
        let mut terms: BTreeMap<Word, C64> = BTreeMap::new();
        for (u, a) in &self.terms {
            for (v, b) in &other.terms {
                *terms.entry(u.concat(v)).or_insert(c(0.0, 0.0)) += a * b;
            }
        }
        terms.retain(|_, a| *a != c(0.0, 0.0));
        Ok(FreePolynomial { d: self.d, terms })
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = FreePolynomial::one(self.d);
        for _ in 0..k {
            acc = acc.mul(self).expect("same d");
        }
        acc
    }

    /// `sum_k a_k X^k`, with `X^k = X_{k_1} ... X_{k_m}` and the empty word giving `I`.
    pub fn evaluate(&self, x: &MatrixTuple) -> Result<CMat> {
        if x.d() != self.d {
            return Err(Error::DimensionMismatch(format!(
                "polynomial in {} variables evaluated on a {}-tuple",
                self.d,
                x.d()
            )));
        }
        let n = x.n();
        let mut out = CMat::zeros(n, n);
        if self.terms.len() > MEMO_THRESHOLD {
            let mut cache: HashMap<Word, CMat> = HashMap::new();
            for (w, a) in &self.terms {
                let m = word_product_cached(w, x, &mut cache);
                out += m * *a;
            }
        } else {
            for (w, a) in &self.terms {
                out += x.word_product(w.letters()) * *a;
            }
        }
        Ok(out)
    }

    pub fn to_json(&self) -> PolyJson {
        PolyJson {
            d: self.d,
            terms: self
                .terms
                .iter()
                .map(|(w, a)| TermJson { word: w.letters().to_vec(), re: a.re, im: a.im })
                .collect(),
        }
    }

    pub fn from_json(j: &PolyJson) -> Result<Self> {
        Self::from_terms(j.d, j.terms.iter().map(|t| (Word::new(t.word.clone()), c(t.re, t.im))))
    }
}

fn word_product_cached(w: &Word, x: &MatrixTuple, cache: &mut HashMap<Word, CMat>) -> CMat {
    if let Some(m) = cache.get(w) {
        return m.clone();
    }
    let m = match w.prefix() {
        None => CMat::identity(x.n(), x.n()),
        Some(p) => {
            let last = *w.letters().last().expect("non-empty");
            word_product_cached(&p, x, cache) * x.get(last)
        }
    };
    cache.insert(w.clone(), m.clone());
    m
}

/// Serialized form: `{"d": .., "terms": [{"word": [..], "re": .., "im": ..}, ..]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolyJson {
    pub d: usize,
    pub terms: Vec<TermJson>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TermJson {
    pub word: Vec<usize>,
    pub re: f64,
    pub im: f64,
}

fn fmt_float(x: f64) -> String {
    // `{:?}` gives the shortest string that parses back to the same f64
    format!("{x:?}")
}

/// Canonical text: `(re+imi)*z1*z2 + ...`, terms in canonical word order.
impl fmt::Display for FreePolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(w, a)| {
                let sign = if a.im.is_sign_negative() { '-' } else { '+' };
                let coeff = format!("({}{}{}i)", fmt_float(a.re), sign, fmt_float(a.im.abs()));
                if w.is_empty() {
                    coeff
                } else {
                    format!("{coeff}*{w}")
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

//! The `(d, s)`-random map and the weighted distances it induces.
//!
//! Coordinates are stored bit-packed per vertex (`0` encodes `x`, `1`
//! encodes `y`), so every distance reduces to popcounts of XORed words
//! scaled by `s^2` (squared Euclidean) or `s` (l1).

use std::fmt::Write as _;
use std::path::Path;

use rand::RngCore;

use crate::error::{invalid, Error, Result};
use crate::rng::rng_from_seed;

const WORD: usize = 64;

fn words_for(d: usize) -> usize {
    d.div_ceil(WORD)
}

/// Vertices mapped into `{x, y}^d`.
#[derive(Debug, Clone, PartialEq)]
pub struct Embedding {
    n: usize,
    d: usize,
    x: f64,
    y: f64,
    seed: Option<u64>,
    words: usize,
    bits: Vec<u64>,
}

impl Embedding {
    /// Builds an embedding from explicit columns; `cols[v][i]` is true when
    /// vertex `v` takes value `y` at coordinate `i`.
    pub fn from_columns(x: f64, y: f64, cols: &[Vec<bool>]) -> Result<Self> {
        let n = cols.len();
        if n == 0 {
            return invalid("embedding needs at least one vertex");
        }
        let d = cols[0].len();
        if d == 0 {
            return invalid("embedding needs at least one coordinate");
        }
        let words = words_for(d);
        let mut bits = vec![0u64; n * words];
        for (v, col) in cols.iter().enumerate() {
            if col.len() != d {
                return Err(Error::DimensionMismatch { expected: d, actual: col.len() });
            }
            for (i, &b) in col.iter().enumerate() {
                if b {
                    bits[v * words + i / WORD] |= 1 << (i % WORD);
                }
            }
        }
        Ok(Embedding { n, d, x, y, seed: None, words, bits })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn alphabet(&self) -> (f64, f64) {
        (self.x, self.y)
    }

    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    /// `s = |x - y|`.
    pub fn span(&self) -> f64 {
        (self.x - self.y).abs()
    }

    /// True when vertex `v` takes value `y` at coordinate `i`.
    pub fn bit(&self, v: usize, i: usize) -> bool {
        self.bits[v * self.words + i / WORD] >> (i % WORD) & 1 == 1
    }

    pub fn value(&self, v: usize, i: usize) -> f64 {
        if self.bit(v, i) {
            self.y
        } else {
            self.x
        }
    }

    pub fn agrees(&self, u: usize, v: usize, i: usize) -> bool {
        self.bit(u, i) == self.bit(v, i)
    }

    /// Packed coordinates of vertex `v`; bits past `d` are zero.
    pub fn column_words(&self, v: usize) -> &[u64] {
        &self.bits[v * self.words..(v + 1) * self.words]
    }

    /// Same coordinates over a different alphabet.
    pub fn relabeled(&self, x: f64, y: f64) -> Embedding {
        Embedding { x, y, ..self.clone() }
    }

    /// Number of coordinates where `u` and `v` differ.
    pub fn disagreements(&self, u: usize, v: usize) -> u64 {
        self.column_words(u)
            .iter()
            .zip(self.column_words(v))
            .map(|(a, b)| (a ^ b).count_ones() as u64)
            .sum()
    }

    /// Number of coordinates selected by `mask` where `u` and `v` differ.
    pub fn disagreements_masked(&self, u: usize, v: usize, mask: &[u64]) -> u64 {
        self.column_words(u)
            .iter()
            .zip(self.column_words(v))
            .zip(mask)
            .map(|((a, b), m)| ((a ^ b) & m).count_ones() as u64)
            .sum()
    }

    /// Packed `0/1` feature vector of the pair: bit `i` set iff the two
    /// vertices differ at coordinate `i`.
    pub fn feature_bits(&self, u: usize, v: usize) -> Vec<u64> {
        self.column_words(u).iter().zip(self.column_words(v)).map(|(a, b)| a ^ b).collect()
    }

    pub fn is_injective(&self) -> bool {
        let mut cols: Vec<&[u64]> = (0..self.n).map(|v| self.column_words(v)).collect();
        cols.sort_unstable();
        cols.windows(2).all(|w| w[0] != w[1])
    }

    fn check_vertex(&self, v: usize) -> Result<()> {
        if v >= self.n {
            return invalid(format!("vertex {v} out of range for n={}", self.n));
        }
        Ok(())
    }

    /// Dump format: header `n d x y seed` (seed `-` when unknown), then `d`
    /// rows of `n` characters `0`/`1`, row `i` holding coordinate `i`.
    pub fn to_dump(&self) -> String {
        let seed = self.seed.map_or("-".to_string(), |s| s.to_string());
        let mut out = String::with_capacity((self.n + 1) * self.d + 64);
        writeln!(out, "{} {} {} {} {}", self.n, self.d, self.x, self.y, seed).unwrap();
        for i in 0..self.d {
            for v in 0..self.n {
                out.push(if self.bit(v, i) { '1' } else { '0' });
            }
            out.push('\n');
        }
        out
    }

    pub fn from_dump(text: &str) -> Result<Embedding> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let parse_err = |line: usize, msg: &str| Error::Parse { line: line + 1, msg: msg.into() };
        let (hl, header) = lines.next().ok_or_else(|| parse_err(0, "empty dump"))?;
        let toks: Vec<&str> = header.split_whitespace().collect();
        if toks.len() != 5 {
            return Err(parse_err(hl, "header must be `n d x y seed`"));
        }
        let n: usize = toks[0].parse().map_err(|_| parse_err(hl, "bad n"))?;
        let d: usize = toks[1].parse().map_err(|_| parse_err(hl, "bad d"))?;
        let x: f64 = toks[2].parse().map_err(|_| parse_err(hl, "bad x"))?;
        let y: f64 = toks[3].parse().map_err(|_| parse_err(hl, "bad y"))?;
        let seed = match toks[4] {
            "-" => None,
            s => Some(s.parse().map_err(|_| parse_err(hl, "bad seed"))?),
        };
        let mut cols = vec![vec![false; d]; n];
        let mut rows = 0;
        for (ln, line) in lines {
            let line = line.trim();
            if rows == d || line.len() != n {
                return Err(parse_err(ln, "row length or count does not match header"));
            }
            for (v, c) in line.chars().enumerate() {
                cols[v][rows] = match c {
                    '0' => false,
                    '1' => true,
                    _ => return Err(parse_err(ln, "cells must be 0 or 1")),
                };
            }
            rows += 1;
        }
        if rows != d {
            return Err(parse_err(hl, "fewer rows than declared"));
        }
        let mut emb = Embedding::from_columns(x, y, &cols)?;
        emb.seed = seed;
        Ok(emb)
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Embedding> {
        Embedding::from_dump(&std::fs::read_to_string(path)?)
    }
}

/// Each of the `n * d` cells independently uniform over `{x, y}`.
pub fn sample_embedding(n: usize, d: usize, x: f64, y: f64, seed: u64) -> Result<Embedding> {
    if n == 0 || d == 0 {
        return invalid("embedding needs n >= 1 and d >= 1");
    }
    let words = words_for(d);
    let mut rng = rng_from_seed(seed);
    let tail = if d.is_multiple_of(WORD) { u64::MAX } else { (1u64 << (d % WORD)) - 1 };
    let mut bits = vec![0u64; n * words];
    for v in 0..n {
        for w in 0..words {
            let mut word = rng.next_u64();
            if w == words - 1 {
                word &= tail;
            }
            bits[v * words + w] = word;
        }
    }
    Ok(Embedding { n, d, x, y, seed: Some(seed), words, bits })
}

/// How a weight vector may be used.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WeightMode {
    /// Every weight is 0 or 1.
    Boolean,
    /// Nonnegative reals.
    Nonnegative,
    /// Unrestricted reals (lower-bound experiments only).
    Free,
}

/// Per-coordinate weights `w`.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightVector {
    values: Vec<f64>,
    mode: WeightMode,
}

impl WeightVector {
    pub fn boolean(selected: &[bool]) -> Self {
        WeightVector {
            values: selected.iter().map(|&b| if b { 1.0 } else { 0.0 }).collect(),
            mode: WeightMode::Boolean,
        }
    }

    pub fn ones(d: usize) -> Self {
        Self::boolean(&vec![true; d])
    }

    pub fn zeros(d: usize) -> Self {
        Self::boolean(&vec![false; d])
    }

    pub fn nonnegative(values: Vec<f64>) -> Result<Self> {
        if let Some(w) = values.iter().find(|w| !(**w >= 0.0) || !w.is_finite()) {
            return invalid(format!("weight {w} is not a finite nonnegative real"));
        }
        Ok(WeightVector { values, mode: WeightMode::Nonnegative })
    }

    pub fn free(values: Vec<f64>) -> Self {
        WeightVector { values, mode: WeightMode::Free }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn mode(&self) -> WeightMode {
        self.mode
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn selected_count(&self) -> usize {
        self.values.iter().filter(|&&w| w != 0.0).count()
    }

    /// `c * w`. Boolean vectors become nonnegative unless `c == 1`; a
    /// negative `c` makes the result free.
    pub fn scaled(&self, c: f64) -> WeightVector {
        let mode = match self.mode {
            WeightMode::Boolean if c == 1.0 => WeightMode::Boolean,
            WeightMode::Free => WeightMode::Free,
            _ if c < 0.0 => WeightMode::Free,
            _ => WeightMode::Nonnegative,
        };
        WeightVector { values: self.values.iter().map(|w| w * c).collect(), mode }
    }

    /// Packed selection mask, available for Boolean weights.
    pub fn mask(&self) -> Option<Vec<u64>> {
        if self.mode != WeightMode::Boolean {
            return None;
        }
        let mut mask = vec![0u64; words_for(self.values.len())];
        for (i, &w) in self.values.iter().enumerate() {
            if w != 0.0 {
                mask[i / WORD] |= 1 << (i % WORD);
            }
        }
        Some(mask)
    }

    /// Reads one weight per line (blank lines and `#` comments ignored).
    /// All-0/1 input yields a Boolean vector.
    pub fn parse(text: &str) -> Result<WeightVector> {
        let mut values = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            values.push(line.parse::<f64>().map_err(|_| Error::Parse {
                line: i + 1,
                msg: format!("not a number: `{line}`"),
            })?);
        }
        if values.iter().all(|&w| w == 0.0 || w == 1.0) {
            Ok(WeightVector { values, mode: WeightMode::Boolean })
        } else if values.iter().all(|&w| w >= 0.0) {
            WeightVector::nonnegative(values)
        } else {
            Ok(WeightVector::free(values))
        }
    }
}

fn check_dims(f: &Embedding, u: usize, v: usize, w: &WeightVector) -> Result<()> {
    if w.len() != f.d() {
        return Err(Error::DimensionMismatch { expected: f.d(), actual: w.len() });
    }
    f.check_vertex(u)?;
    f.check_vertex(v)
}

/// Sum of weights over the coordinates where `u` and `v` differ.
pub(crate) fn weighted_disagreement(f: &Embedding, u: usize, v: usize, w: &WeightVector) -> f64 {
    let mut total = 0.0;
    for (k, (a, b)) in f.column_words(u).iter().zip(f.column_words(v)).enumerate() {
        let mut diff = a ^ b;
        while diff != 0 {
            let i = k * WORD + diff.trailing_zeros() as usize;
            total += w.values[i];
            diff &= diff - 1;
        }
    }
    total
}

/// `sum_i w_i (f(u)_i - f(v)_i)^2`.
pub fn weighted_sq_distance(f: &Embedding, u: usize, v: usize, w: &WeightVector) -> Result<f64> {
    check_dims(f, u, v, w)?;
    let s2 = f.span() * f.span();
    Ok(match w.mask() {
        Some(mask) => s2 * f.disagreements_masked(u, v, &mask) as f64,
        None => s2 * weighted_disagreement(f, u, v, w),
    })
}

/// `sum_i w_i |f(u)_i - f(v)_i|`.
pub fn weighted_l1_distance(f: &Embedding, u: usize, v: usize, w: &WeightVector) -> Result<f64> {
    check_dims(f, u, v, w)?;
    let s = f.span();
    Ok(match w.mask() {
        Some(mask) => s * f.disagreements_masked(u, v, &mask) as f64,
        None => s * weighted_disagreement(f, u, v, w),
    })
}

/// `g(u, v)`: the squared coordinate differences, each `0` or `s^2`.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureVector(pub Vec<f64>);

impl FeatureVector {
    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn dot(&self, w: &WeightVector) -> f64 {
        self.0.iter().zip(w.values()).map(|(g, w)| g * w).sum()
    }
}

pub fn feature_vector(f: &Embedding, u: usize, v: usize) -> Result<FeatureVector> {
    f.check_vertex(u)?;
    f.check_vertex(v)?;
    let s2 = f.span() * f.span();
    Ok(FeatureVector(
        (0..f.d()).map(|i| if f.agrees(u, v, i) { 0.0 } else { s2 }).collect(),
    ))
}

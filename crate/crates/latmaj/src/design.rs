//! Design representation, validation, projection, coincidence computation and
//! random generation.

use num::{BigInt, BigRational, ToPrimitive};
use rand::Rng;
use thiserror::Error;

use crate::rng::{stream, TAG_COLUMN};

/// Errors raised while constructing or manipulating designs.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum DesignError {
    #[error("file contains no runs")]
    EmptyFile,
    #[error("design has no columns")]
    NoColumns,
    #[error("row {line} has {got} entries, expected {expected}")]
    RaggedRows {
        line: usize,
        got: usize,
        expected: usize,
    },
    #[error("row {line}: '{token}' is not a nonnegative integer")]
    InvalidToken { line: usize, token: String },
    #[error("entry {value} out of range {{0..{}}} at row {row}, column {col}", q - 1)]
    LevelOutOfRange {
        row: usize,
        col: usize,
        value: u32,
        q: u32,
    },
    #[error(
        "column {column} is unbalanced: level {level} appears {count} times, expected {expected}"
    )]
    Unbalanced {
        column: usize,
        level: u32,
        count: usize,
        expected: usize,
    },
    #[error("level count {q} does not divide run count {n}")]
    QNotDividingN { n: usize, q: u32 },
    #[error("level count must be at least 2, got {q}")]
    QTooSmall { q: u32 },
    #[error("need at least 2 runs, got {n}")]
    TooFewRuns { n: usize },
    #[error("projection column set is empty")]
    EmptySubset,
    #[error("projection column {col} out of range (design has {s} columns)")]
    ColumnOutOfRange { col: usize, s: usize },
    #[error("projection columns must be strictly increasing")]
    ColumnsNotIncreasing,
    #[error("conflicting level counts: argument says q={arg}, file directive says q={directive}")]
    QDirectiveConflict { arg: u32, directive: u32 },
}

/// A balanced (U-type) lattice design: an `n x s` matrix of levels in
/// `{0..q-1}` in which every level appears exactly `n/q` times per column.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Design {
    n: usize,
    s: usize,
    q: u32,
    matrix: Vec<u32>, // row-major n*s
    label: Option<String>,
}

impl Design {
    /// Validates rows into a design. Rejects ragged input, out-of-range
    /// levels and any column in which some level does not appear exactly
    /// `n/q` times.
    pub fn new(rows: &[Vec<u32>], q: u32, label: Option<String>) -> Result<Design, DesignError> {
        if rows.is_empty() {
            return Err(DesignError::EmptyFile);
        }
        let n = rows.len();
        let s = rows[0].len();
        if s == 0 {
            return Err(DesignError::NoColumns);
        }
        for (idx, row) in rows.iter().enumerate() {
            if row.len() != s {
                return Err(DesignError::RaggedRows {
                    line: idx + 1,
                    got: row.len(),
                    expected: s,
                });
            }
        }
        if q < 2 {
            return Err(DesignError::QTooSmall { q });
        }
        if n < 2 {
            return Err(DesignError::TooFewRuns { n });
        }
        if !n.is_multiple_of(q as usize) {
            return Err(DesignError::QNotDividingN { n, q });
        }
        for (i, row) in rows.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                if v >= q {
                    return Err(DesignError::LevelOutOfRange {
                        row: i + 1,
                        col: j + 1,
                        value: v,
                        q,
                    });
                }
            }
        }
        let per_level = n / q as usize;
        for j in 0..s {
            let mut counts = vec![0usize; q as usize];
            for row in rows {
                counts[row[j] as usize] += 1;
            }
            for (level, &count) in counts.iter().enumerate() {
                if count != per_level {
                    return Err(DesignError::Unbalanced {
                        column: j + 1,
                        level: level as u32,
                        count,
                        expected: per_level,
                    });
                }
            }
        }
        let mut matrix = Vec::with_capacity(n * s);
        for row in rows {
            matrix.extend_from_slice(row);
        }
        Ok(Design {
            n,
            s,
            q,
            matrix,
            label,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn s(&self) -> usize {
        self.s
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Design {
        self.label = Some(label.into());
        self
    }

    /// Level of run `i` at column `j` (both 0-based).
    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.matrix[i * self.s + j]
    }

    /// Run `i` as a slice of levels.
    #[inline]
    pub fn row(&self, i: usize) -> &[u32] {
        &self.matrix[i * self.s..(i + 1) * self.s]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[u32]> {
        self.matrix.chunks_exact(self.s)
    }

    /// Number of unordered run pairs, `n(n-1)/2`.
    pub fn pair_count(&self) -> usize {
        self.n * (self.n - 1) / 2
    }

    /// Coincidence of runs `i` and `k`: the number of columns where they agree.
    pub fn coincidence(&self, i: usize, k: usize) -> u32 {
        self.row(i)
            .iter()
            .zip(self.row(k))
            .filter(|(a, b)| a == b)
            .count() as u32
    }

    /// PC mean `s(n-q) / (q(n-1))` as an exact rational.
    pub fn pc_mean(&self) -> BigRational {
        pc_mean(self.n, self.s, self.q)
    }

    pub(crate) fn swap_entries(&mut self, i: usize, t: usize, j: usize) {
        self.matrix.swap(i * self.s + j, t * self.s + j);
    }
}

pub(crate) fn pc_mean(n: usize, s: usize, q: u32) -> BigRational {
    BigRational::new(
        BigInt::from(s) * BigInt::from(n as u64 - q as u64),
        BigInt::from(q) * BigInt::from(n as u64 - 1),
    )
}

/// Index of pair `(i, k)` with `0 <= i < k < n` in the fixed PC order.
///
/// Pairs are enumerated row-major over the upper triangle: (0,1), (0,2), ...,
/// (0,n-1), (1,2), ...; with 1-based indices this is the classical
/// `n(i-1) + k - i(i+1)/2` position.
#[inline]
pub fn pair_index(i: usize, k: usize, n: usize) -> usize {
    debug_assert!(i < k && k < n);
    i * n - i * (i + 1) / 2 + (k - i - 1)
}

/// The pairwise coincidence vector of a design plus its summary statistics.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PCVector {
    /// `beta_r` in the fixed pair order (see [`pair_index`]).
    pub values: Vec<u32>,
    /// Increasing order statistic of `values`.
    pub sorted: Vec<u32>,
    /// Pair count `n(n-1)/2`.
    pub m: usize,
    /// `sum(beta_r)`; equals `(ns/2)(n/q - 1)` for balanced designs.
    pub sum: u64,
    /// PC mean `s(n-q)/(q(n-1))`, exact.
    pub mean: BigRational,
    /// Integral part of the mean.
    pub theta: u32,
    /// Fractional part of the mean, exact.
    pub frac: BigRational,
}

/// Computes the PC vector of a design.
///
/// The balanced-design sum `(ns/2)(n/q - 1)` is asserted: it holds for every balanced
/// design and [`Design`] cannot be constructed unbalanced.
///
/// ```
/// use latmaj::design::{parse_design, pc_vector};
///
/// let d = parse_design("0 0 0\n0 1 1\n1 0 1\n1 1 0", Some(2)).unwrap().design;
/// let pc = pc_vector(&d);
/// assert_eq!(pc.values, vec![1, 1, 1, 1, 1, 1]); // saturated: all pairs agree once
/// assert_eq!(pc.sum, 6);
/// ```
pub fn pc_vector(d: &Design) -> PCVector {
    let n = d.n();
    let mut values = Vec::with_capacity(d.pair_count());
    for i in 0..n {
        for k in (i + 1)..n {
            values.push(d.coincidence(i, k));
        }
    }
    let sum: u64 = values.iter().map(|&b| b as u64).sum();
    // (ns/2)(n/q - 1), kept doubled so odd n*s stays in integers
    let doubled = n as u64 * d.s() as u64 * (n as u64 / d.q() as u64 - 1);
    assert_eq!(
        2 * sum,
        doubled,
        "PC-sum violates the balanced-design identity"
    );
    let mut sorted = values.clone();
    sorted.sort_unstable();
    let mean = d.pc_mean();
    let theta = mean.floor().to_integer().to_u32().expect("theta fits u32");
    let frac = mean.fract();
    PCVector {
        m: values.len(),
        sum,
        values,
        sorted,
        mean,
        theta,
        frac,
    }
}

/// Symmetric `n x n` coincidence matrix with `M[i][i] = s`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoincidenceMatrix {
    n: usize,
    data: Vec<u32>,
}

impl CoincidenceMatrix {
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, k: usize) -> u32 {
        self.data[i * self.n + k]
    }

    /// Upper triangle in the fixed pair order; equals `pc_vector(d).values`.
    pub fn upper_triangle(&self) -> Vec<u32> {
        let mut out = Vec::with_capacity(self.n * (self.n - 1) / 2);
        for i in 0..self.n {
            for k in (i + 1)..self.n {
                out.push(self.get(i, k));
            }
        }
        out
    }
}

pub fn coincidence_matrix(d: &Design) -> CoincidenceMatrix {
    let n = d.n();
    let mut data = vec![0u32; n * n];
    for i in 0..n {
        data[i * n + i] = d.s() as u32;
        for k in (i + 1)..n {
            let b = d.coincidence(i, k);
            data[i * n + k] = b;
            data[k * n + i] = b;
        }
    }
    CoincidenceMatrix { n, data }
}

/// Keeps only the chosen columns (0-based, strictly increasing). Balance is
/// inherited because each kept column is unchanged.
pub fn project(d: &Design, cols: &[usize]) -> Result<Design, DesignError> {
    if cols.is_empty() {
        return Err(DesignError::EmptySubset);
    }
    for w in cols.windows(2) {
        if w[0] >= w[1] {
            return Err(DesignError::ColumnsNotIncreasing);
        }
    }
    if let Some(&c) = cols.iter().find(|&&c| c >= d.s()) {
        return Err(DesignError::ColumnOutOfRange {
            col: c + 1,
            s: d.s(),
        });
    }
    let mut matrix = Vec::with_capacity(d.n() * cols.len());
    for i in 0..d.n() {
        for &c in cols {
            matrix.push(d.get(i, c));
        }
    }
    Ok(Design {
        n: d.n(),
        s: cols.len(),
        q: d.q(),
        matrix,
        label: None,
    })
}

/// Whether all pairwise coincidences are equal, differ by at most one, or
/// spread further.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EquidistanceClass {
    Equidistant,
    WeakEquidistant,
    Neither,
}

pub fn equidistance_class(d: &Design) -> EquidistanceClass {
    let pc = pc_vector(d);
    let min = *pc.sorted.first().expect("n >= 2 gives at least one pair");
    let max = *pc.sorted.last().unwrap();
    match max - min {
        0 => EquidistanceClass::Equidistant,
        1 => EquidistanceClass::WeakEquidistant,
        _ => EquidistanceClass::Neither,
    }
}

/// Uniformly random balanced design, one independent Fisher-Yates shuffle per
/// column on a ChaCha8 stream keyed by `(seed, column index)`. Deterministic
/// for a fixed seed, independent of evaluation order.
pub fn random_balanced(n: usize, s: usize, q: u32, seed: u64) -> Result<Design, DesignError> {
    if q < 2 {
        return Err(DesignError::QTooSmall { q });
    }
    if n < 2 {
        return Err(DesignError::TooFewRuns { n });
    }
    if !n.is_multiple_of(q as usize) {
        return Err(DesignError::QNotDividingN { n, q });
    }
    let per_level = n / q as usize;
    let mut matrix = vec![0u32; n * s];
    for j in 0..s {
        let mut col: Vec<u32> = (0..q)
            .flat_map(|l| std::iter::repeat_n(l, per_level))
            .collect();
        let mut rng = stream(seed, TAG_COLUMN, j as u64);
        for i in (1..n).rev() {
            let k = rng.random_range(0..=i);
            col.swap(i, k);
        }
        for i in 0..n {
            matrix[i * s + j] = col[i];
        }
    }
    Ok(Design {
        n,
        s,
        q,
        matrix,
        label: None,
    })
}

/// A parsed design file: the design plus any column labels from the header.
#[derive(Debug, Clone)]
pub struct DesignFile {
    pub design: Design,
    pub column_labels: Option<Vec<String>>,
}

/// Parses the text design format: one run per line, base-10 levels separated
/// by spaces or tabs; blank lines and `#` lines ignored; optional directives
/// `#q=<int>` and `#labels=<names>` in the header. When neither the `q`
/// argument nor a directive gives the level count it is inferred as
/// `max entry + 1`.
pub fn parse_design(text: &str, q: Option<u32>) -> Result<DesignFile, DesignError> {
    let mut rows: Vec<Vec<u32>> = Vec::new();
    let mut directive_q: Option<u32> = None;
    let mut labels: Option<Vec<String>> = None;
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix('#') {
            let rest = rest.trim();
            if let Some(v) = rest.strip_prefix("q=") {
                directive_q = v.trim().parse::<u32>().ok().or(directive_q);
            } else if let Some(v) = rest.strip_prefix("labels=") {
                let parsed: Vec<String> = v
                    .split([' ', '\t', ','])
                    .filter(|t| !t.is_empty())
                    .map(str::to_owned)
                    .collect();
                if !parsed.is_empty() {
                    labels = Some(parsed);
                }
            }
            continue;
        }
        let mut row = Vec::new();
        for token in line.split_whitespace() {
            let v = token
                .parse::<u32>()
                .map_err(|_| DesignError::InvalidToken {
                    line: lineno + 1,
                    token: token.to_owned(),
                })?;
            row.push(v);
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(DesignError::EmptyFile);
    }
    if let (Some(arg), Some(dir)) = (q, directive_q) {
        if arg != dir {
            return Err(DesignError::QDirectiveConflict {
                arg,
                directive: dir,
            });
        }
    }
    let q = q
        .or(directive_q)
        .unwrap_or_else(|| rows.iter().flatten().copied().max().unwrap_or(0) + 1);
    let design = Design::new(&rows, q, None)?;
    if let Some(ref l) = labels {
        if l.len() != design.s() {
            // Header labels that do not cover the columns are dropped rather
            // than rejected; the data rows are authoritative.
            return Ok(DesignFile {
                design,
                column_labels: None,
            });
        }
    }
    Ok(DesignFile {
        design,
        column_labels: labels,
    })
}

/// Writes a design in the text format accepted by [`parse_design`].
pub fn write_design(d: &Design, column_labels: Option<&[String]>) -> String {
    let mut out = String::new();
    out.push_str(&format!("#q={}\n", d.q()));
    if let Some(labels) = column_labels {
        out.push_str(&format!("#labels={}\n", labels.join(" ")));
    }
    for row in d.rows() {
        let line: Vec<String> = row.iter().map(|v| v.to_string()).collect();
        out.push_str(&line.join(" "));
        out.push('\n');
    }
    out
}

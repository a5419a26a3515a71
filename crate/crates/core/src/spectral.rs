//! Signals, periodic autocorrelation, power spectrum, and the exact integer
//! quadratic form behind the autocorrelation of a finite-alphabet signal.
//!
//! For a partition `A_1, …, A_K` and letters `α_1, …, α_K`,
//! `a_x[ℓ] = Σ_{i≤j} C_ℓ[i][j] α_i α_j` where `C_ℓ` counts index pairs
//! `(u, u+ℓ)` by the blocks they fall in. [`AutocorrForm`] stores those
//! counts, which makes "equal for generic letters" a finite comparison.

use std::collections::BTreeMap;
use std::f64::consts::TAU;
use std::fmt;

use num_complex::Complex64;
use rand::Rng;
use serde::de::{self, Deserializer};
use serde::ser::{SerializeMap, SerializeSeq, Serializer};
use serde::{Deserialize, Serialize};

use crate::diffsets::directed_count;
use crate::domain::{same_ring, Alphabet, DistanceMultiset, OrderedPartition, RingSize, Signal};
use crate::error::{Error, Result};

/// `a_x[ℓ] = Σ_n x[n] x[n+ℓ]`, indices mod `N`, by direct summation.
pub fn autocorrelation(x: &Signal) -> Vec<f64> {
    let v = x.values();
    let n = v.len();
    (0..n)
        .map(|lag| (0..n).map(|i| v[i] * v[(i + lag) % n]).sum())
        .collect()
}

/// Naive DFT `X[k] = Σ_n x[n] e^{-2πikn/N}`.
pub fn dft(values: &[f64]) -> Vec<Complex64> {
    let n = values.len();
    (0..n)
        .map(|k| {
            values
                .iter()
                .enumerate()
                .map(|(t, &v)| {
                    // reduce the phase index first so the angle stays in [0, 2π)
                    let angle = -TAU * ((k * t) % n) as f64 / n as f64;
                    Complex64::from_polar(v, angle)
                })
                .sum()
        })
        .collect()
}

/// `|x̂|²`, componentwise.
pub fn power_spectrum(x: &Signal) -> Vec<f64> {
    dft(x.values()).into_iter().map(|c| c.norm_sqr()).collect()
}

/// Minimum distance between two letters of [`random_alphabet`], and from 0.
///
/// Two forms that differ by `(α_i - α_j)²` evaluate within `1e-9` of each
/// other once the letters are within `3e-5`, so closer draws cannot be told
/// apart at that tolerance.
pub const LETTER_GAP: f64 = 1e-3;

/// `k ≤ 500` letters drawn uniformly from `(0, 1)`, each redrawn until it is
/// at least [`LETTER_GAP`] from 0 and from every earlier letter.
pub fn random_alphabet<R: Rng + ?Sized>(k: usize, rng: &mut R) -> Alphabet {
    assert!(
        k <= 500,
        "cannot space {k} letters {LETTER_GAP} apart in (0, 1)"
    );
    let mut letters: Vec<f64> = Vec::with_capacity(k);
    while letters.len() < k {
        let a: f64 = rng.gen();
        if a >= LETTER_GAP && letters.iter().all(|b| (a - b).abs() >= LETTER_GAP) {
            letters.push(a);
        }
    }
    Alphabet::new(letters).expect("letters are distinct")
}

/// Per-lag symmetric `K×K` integer coefficient matrices of the autocorrelation.
///
/// `C_ℓ[i][i]` counts `(u, v) ∈ A_i × A_i` with `v - u ≡ ℓ`; for `i ≠ j`,
/// `C_ℓ[i][j]` counts such pairs in `A_i × A_j` and `A_j × A_i` together.
/// Only the upper triangle is stored, lag-major.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AutocorrForm {
    ring: RingSize,
    k: usize,
    coeffs: Vec<u32>,
}

#[inline]
fn pair_count(k: usize) -> usize {
    k * (k + 1) / 2
}

/// Position of `(i, j)`, `i ≤ j`, in the row-major upper triangle.
#[inline]
fn pair_index(k: usize, i: usize, j: usize) -> usize {
    debug_assert!(i <= j && j < k);
    i * k - i * (i + 1) / 2 + j
}

impl AutocorrForm {
    #[inline]
    pub fn ring(&self) -> RingSize {
        self.ring
    }

    /// Number of letters.
    #[inline]
    pub fn k(&self) -> usize {
        self.k
    }

    /// `C_lag[i][j]` with 0-based letter indices; symmetric in `i, j`.
    pub fn coefficient(&self, lag: usize, i: usize, j: usize) -> u32 {
        let (i, j) = if i <= j { (i, j) } else { (j, i) };
        self.coeffs[lag * pair_count(self.k) + pair_index(self.k, i, j)]
    }

    /// Raw upper-triangle coefficients, lag-major.
    pub fn coefficients(&self) -> &[u32] {
        &self.coeffs
    }

    fn lag_row(&self, lag: usize) -> &[u32] {
        let w = pair_count(self.k);
        &self.coeffs[lag * w..(lag + 1) * w]
    }

    /// Coefficients with letter 1 dropped, i.e. the form at `α_1 = 0`.
    pub fn sparse_coefficients(&self) -> Vec<u32> {
        let k = self.k;
        let mut out = Vec::with_capacity(self.ring.get() * pair_count(k.saturating_sub(1)));
        for lag in 0..self.ring.get() {
            let row = self.lag_row(lag);
            for i in 1..k {
                for j in i..k {
                    out.push(row[pair_index(k, i, j)]);
                }
            }
        }
        out
    }

    /// Sum of every stored coefficient; always `N²`.
    pub fn total_mass(&self) -> u64 {
        self.coeffs.iter().map(|&c| c as u64).sum()
    }

    /// Evaluate the form at the given letters, giving the autocorrelation.
    pub fn evaluate(&self, alphabet: &Alphabet) -> Result<Vec<f64>> {
        if alphabet.k() != self.k {
            return Err(Error::ArityMismatch {
                left: self.k,
                right: alphabet.k(),
            });
        }
        let a = alphabet.letters();
        Ok((0..self.ring.get())
            .map(|lag| {
                let row = self.lag_row(lag);
                let mut acc = 0.0;
                for i in 0..self.k {
                    for j in i..self.k {
                        acc += row[pair_index(self.k, i, j)] as f64 * a[i] * a[j];
                    }
                }
                acc
            })
            .collect())
    }

    /// Fold the directed lag counts of letters `(i, j)` into the cyclic
    /// distance multiset `A_i - A_j` (`A_i - A_i` when `i == j`).
    pub fn fold(&self, i: usize, j: usize) -> Result<DistanceMultiset> {
        if i >= self.k || j >= self.k {
            return Err(Error::ArityMismatch {
                left: i.max(j) + 1,
                right: self.k,
            });
        }
        let n = self.ring.get();
        let mut mult = vec![0u32; n / 2 + 1];
        for (d, m) in mult.iter_mut().enumerate() {
            let c = self.coefficient(d, i, j);
            // off the diagonal C[i][j] holds both orientations; on it, an
            // unordered pair at distance d shows up once at lag d and once at
            // N - d. Either way only lag 0 and the antipode double count.
            let doubled = if i == j {
                2 * d == n && d > 0
            } else {
                d == 0 || 2 * d == n
            };
            *m = if doubled { c / 2 } else { c };
        }
        DistanceMultiset::from_multiplicities(self.ring, mult)
    }
}

/// Exact coefficient form of the autocorrelation of any signal realizing `p`.
pub fn autocorr_form(p: &OrderedPartition) -> AutocorrForm {
    let ring = p.ring();
    let k = p.k();
    let blocks: Vec<u64> = p.blocks().iter().map(|b| b.bits()).collect();
    let mut coeffs = Vec::with_capacity(ring.get() * pair_count(k));
    for lag in 0..ring.get() {
        for i in 0..k {
            coeffs.push(directed_count(ring, blocks[i], blocks[i], lag));
            for j in i + 1..k {
                coeffs.push(
                    directed_count(ring, blocks[i], blocks[j], lag)
                        + directed_count(ring, blocks[j], blocks[i], lag),
                );
            }
        }
    }
    AutocorrForm { ring, k, coeffs }
}

fn check_comparable(f: &AutocorrForm, g: &AutocorrForm) -> Result<()> {
    same_ring(f.ring, g.ring)?;
    if f.k != g.k {
        return Err(Error::ArityMismatch {
            left: f.k,
            right: g.k,
        });
    }
    Ok(())
}

/// Coefficient-wise equality: the autocorrelations agree for generic letters.
pub fn forms_equal(f: &AutocorrForm, g: &AutocorrForm) -> Result<bool> {
    check_comparable(f, g)?;
    Ok(f.coeffs == g.coeffs)
}

/// Equality after setting `α_1 = 0`. Needs at least one further letter.
pub fn forms_equal_sparse(f: &AutocorrForm, g: &AutocorrForm) -> Result<bool> {
    check_comparable(f, g)?;
    if f.k < 2 {
        return Err(Error::ArityMismatch {
            left: f.k,
            right: 2,
        });
    }
    Ok((0..f.ring.get()).all(|lag| {
        let (a, b) = (f.lag_row(lag), g.lag_row(lag));
        (1..f.k).all(|i| (i..f.k).all(|j| a[pair_index(f.k, i, j)] == b[pair_index(f.k, i, j)]))
    }))
}

/// Do the realized signals of `p` and `q` over `alphabet` have autocorrelations
/// within `tol` of each other in max-norm?
pub fn numeric_collision_check(
    p: &OrderedPartition,
    q: &OrderedPartition,
    alphabet: &Alphabet,
    tol: f64,
) -> Result<bool> {
    same_ring(p.ring(), q.ring())?;
    let a = autocorrelation(&Signal::from_partition(p, alphabet)?);
    let b = autocorrelation(&Signal::from_partition(q, alphabet)?);
    let gap = a
        .iter()
        .zip(&b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max);
    Ok(gap < tol)
}

struct LagTerms<'a>(&'a AutocorrForm, usize);

impl Serialize for LagTerms<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let (form, lag) = (self.0, self.1);
        let mut map = s.serialize_map(Some(pair_count(form.k)))?;
        for i in 0..form.k {
            for j in i..form.k {
                map.serialize_entry(
                    &format!("({},{})", i + 1, j + 1),
                    &form.coefficient(lag, i, j),
                )?;
            }
        }
        map.end()
    }
}

/// Array over lags of `{"(i,j)": coeff}` maps, `i ≤ j`, letters numbered from 1.
impl Serialize for AutocorrForm {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.ring.get()))?;
        for lag in 0..self.ring.get() {
            seq.serialize_element(&LagTerms(self, lag))?;
        }
        seq.end()
    }
}

fn parse_pair_key(key: &str) -> Option<(usize, usize)> {
    let inner = key.strip_prefix('(')?.strip_suffix(')')?;
    let (i, j) = inner.split_once(',')?;
    Some((i.trim().parse().ok()?, j.trim().parse().ok()?))
}

impl<'de> Deserialize<'de> for AutocorrForm {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let lags: Vec<BTreeMap<String, u32>> = Vec::deserialize(d)?;
        let ring = RingSize::new(lags.len()).map_err(de::Error::custom)?;
        let width = lags[0].len();
        let k = (1..=width)
            .find(|&k| pair_count(k) == width)
            .ok_or_else(|| {
                de::Error::custom(format!("{width} terms is not a triangular number"))
            })?;
        let mut coeffs = vec![0u32; ring.get() * width];
        for (lag, terms) in lags.iter().enumerate() {
            if terms.len() != width {
                return Err(de::Error::custom(format!(
                    "lag {lag} has {} terms",
                    terms.len()
                )));
            }
            for (key, &c) in terms {
                let (i, j) = parse_pair_key(key)
                    .filter(|&(i, j)| 1 <= i && i <= j && j <= k)
                    .ok_or_else(|| de::Error::custom(format!("bad term key {key:?}")))?;
                coeffs[lag * width + pair_index(k, i - 1, j - 1)] = c;
            }
        }
        Ok(AutocorrForm { ring, k, coeffs })
    }
}

/// One line per lag: `ℓ: c11·α1² + c12·α1α2 + …`, zero terms dropped.
impl fmt::Display for AutocorrForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for lag in 0..self.ring.get() {
            write!(f, "{lag}:")?;
            let mut first = true;
            for i in 0..self.k {
                for j in i..self.k {
                    let c = self.coefficient(lag, i, j);
                    if c == 0 {
                        continue;
                    }
                    let sep = if first { " " } else { " + " };
                    first = false;
                    if i == j {
                        write!(f, "{sep}{c}·α{}²", i + 1)?;
                    } else {
                        write!(f, "{sep}{c}·α{}α{}", i + 1, j + 1)?;
                    }
                }
            }
            if first {
                write!(f, " 0")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

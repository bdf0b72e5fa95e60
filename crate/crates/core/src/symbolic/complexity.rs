use std::collections::HashSet;
use std::f64::consts::TAU;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::{SymbolicError, Word};
use crate::billiard::{fast_code, PhasePoint};
use crate::geometry::{FaceId, Polyhedron};
use crate::sampling::{hemisphere_direction, point_on_face};

/// Direction strata per face: bins of `cos(angle to normal)` times azimuth
/// bins. Both are uniform, so each tile has the same solid angle.
pub const DIRECTION_TILES: (usize, usize) = (16, 32);

/// Distinct words of each length `1..=n_max`, packed into `u128` keys.
#[derive(Clone, Debug)]
pub struct Language {
    n_max: usize,
    bits: u32,
    sets: Vec<HashSet<u128>>,
}

fn bits_for(alphabet: usize) -> u32 {
    usize::BITS - alphabet.leading_zeros()
}

impl Language {
    pub fn new(alphabet: usize, n_max: usize) -> Result<Self, SymbolicError> {
        let bits = bits_for(alphabet);
        if n_max == 0 || n_max as u32 * bits > 128 {
            return Err(SymbolicError::InvalidParameter(format!(
                "words of length {n_max} over {alphabet} letters do not fit in 128 bits"
            )));
        }
        Ok(Self {
            n_max,
            bits,
            sets: vec![HashSet::new(); n_max],
        })
    }

    fn encode(&self, letters: &[FaceId]) -> u128 {
        letters
            .iter()
            .fold(0u128, |acc, &l| (acc << self.bits) | (l as u128 + 1))
    }

    fn decode(&self, mut code: u128) -> Vec<FaceId> {
        let mask = (1u128 << self.bits) - 1;
        let mut out = Vec::new();
        while code != 0 {
            out.push(((code & mask) - 1) as FaceId);
            code >>= self.bits;
        }
        out.reverse();
        out
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    /// Adds every factor of `letters` up to length `n_max`.
    pub fn insert_factors(&mut self, letters: &[FaceId]) {
        for start in 0..letters.len() {
            let mut code = 0u128;
            for (k, &l) in letters[start..].iter().take(self.n_max).enumerate() {
                code = (code << self.bits) | (l as u128 + 1);
                self.sets[k].insert(code);
            }
        }
    }

    pub fn count(&self, n: usize) -> usize {
        if n == 0 || n > self.n_max {
            0
        } else {
            self.sets[n - 1].len()
        }
    }

    pub fn contains(&self, letters: &[FaceId]) -> bool {
        let n = letters.len();
        n >= 1 && n <= self.n_max && self.sets[n - 1].contains(&self.encode(letters))
    }

    /// Words of length `n`, sorted.
    pub fn words(&self, n: usize) -> Vec<Word> {
        if n == 0 || n > self.n_max {
            return Vec::new();
        }
        let mut out: Vec<Word> = self.sets[n - 1].iter().map(|&c| Word::new(self.decode(c))).collect();
        out.sort();
        out
    }

    /// Every counted word's prefix and suffix one letter shorter are counted.
    pub fn is_factor_closed(&self) -> bool {
        (2..=self.n_max).all(|n| {
            self.sets[n - 1].iter().all(|&c| {
                let w = self.decode(c);
                self.contains(&w[1..]) && self.contains(&w[..n - 1])
            })
        })
    }
}

/// Bookkeeping of a sampling run.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SampleStats {
    pub budget: u64,
    pub seed: u64,
    pub n_max: usize,
    /// Samples whose word was cut short by a singular or near-singular bounce;
    /// only the letters before that bounce are counted.
    pub discarded: u64,
    /// Distinct (possibly truncated) sampled words.
    pub distinct_samples: usize,
}

/// Sample `i` of a run. It depends only on `(seed, i)`, so a larger budget
/// extends the sample set of a smaller one.
pub fn stratified_phase_point(poly: &Polyhedron, seed: u64, i: u64) -> PhasePoint {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(i);
    let faces = poly.faces().len() as u64;
    let face = (i % faces) as FaceId;
    let (wb, pb) = DIRECTION_TILES;
    let tile = ((i / faces) % (wb * pb) as u64) as usize;
    let w = ((tile % wb) as f64 + rng.gen::<f64>()) / wb as f64;
    let phi = TAU * ((tile / wb) as f64 + rng.gen::<f64>()) / pb as f64;
    let plane = &poly.face(face).plane;
    let m = plane.project(&point_on_face(poly, face, &mut rng));
    PhasePoint::from_parts(face, m, hemisphere_direction(&plane.normal, w, phi))
}

/// Codes `budget` stratified orbits of length `n_max` and collects all their
/// factors.
pub fn sample_language(
    poly: &Polyhedron,
    n_max: usize,
    budget: u64,
    seed: u64,
) -> Result<(Language, SampleStats), SymbolicError> {
    if n_max < 2 {
        return Err(SymbolicError::InvalidParameter("n_max must be at least 2".into()));
    }
    if budget < 1 {
        return Err(SymbolicError::InvalidParameter("budget must be at least 1".into()));
    }
    let mut language = Language::new(poly.faces().len(), n_max)?;
    let (codes, discarded) = (0..budget)
        .into_par_iter()
        .fold(
            || (HashSet::<u128>::new(), 0u64, Vec::with_capacity(n_max)),
            |(mut set, mut cut, mut buf), i| {
                let x = stratified_phase_point(poly, seed, i);
                if fast_code(&x, n_max, poly, &mut buf).is_some() {
                    cut += 1;
                }
                set.insert(language.encode(&buf));
                (set, cut, buf)
            },
        )
        .map(|(set, cut, _)| (set, cut))
        .reduce(
            || (HashSet::new(), 0),
            |(mut a, ca), (mut b, cb)| {
                if a.len() < b.len() {
                    std::mem::swap(&mut a, &mut b);
                }
                a.extend(b);
                (a, ca + cb)
            },
        );
    let mut sorted: Vec<u128> = codes.iter().copied().collect();
    sorted.sort_unstable();
    for code in &sorted {
        let letters = language.decode(*code);
        language.insert_factors(&letters);
    }
    let stats = SampleStats {
        budget,
        seed,
        n_max,
        discarded,
        distinct_samples: sorted.len(),
    };
    Ok((language, stats))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ComplexityRow {
    pub n: usize,
    pub p_hat: usize,
    /// `ln p_hat / n`; `None` when no word of length `n` was seen.
    pub log_p_over_n: Option<f64>,
}

/// Lower bounds `p_hat(n)` for the number of words of length `n`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ComplexityTable {
    pub rows: Vec<ComplexityRow>,
    #[serde(flatten)]
    pub stats: SampleStats,
    /// `p_hat(n + 1) >= p_hat(n)` for all rows.
    pub nondecreasing: bool,
    pub sampling: String,
}

impl ComplexityTable {
    pub fn from_language(language: &Language, stats: SampleStats) -> Self {
        let rows: Vec<ComplexityRow> = (1..=language.n_max())
            .map(|n| {
                let p = language.count(n);
                ComplexityRow {
                    n,
                    p_hat: p,
                    log_p_over_n: (p > 0).then(|| (p as f64).ln() / n as f64),
                }
            })
            .collect();
        let nondecreasing = rows.windows(2).all(|w| w[1].p_hat >= w[0].p_hat);
        let (wb, pb) = DIRECTION_TILES;
        ComplexityTable {
            rows,
            stats,
            nondecreasing,
            sampling: format!(
                "face = i mod F; direction stratified over {wb} cos-bins x {pb} azimuth bins per face; base point uniform"
            ),
        }
    }

    pub fn p_hat(&self, n: usize) -> usize {
        self.rows.get(n.wrapping_sub(1)).map_or(0, |r| r.p_hat)
    }

    pub fn log_ratio(&self, n: usize) -> Option<f64> {
        self.rows.get(n.wrapping_sub(1)).and_then(|r| r.log_p_over_n)
    }
}

pub fn estimate_complexity(
    poly: &Polyhedron,
    n_max: usize,
    budget: u64,
    seed: u64,
) -> Result<ComplexityTable, SymbolicError> {
    let (language, stats) = sample_language(poly, n_max, budget, seed)?;
    Ok(ComplexityTable::from_language(&language, stats))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::billiard::orbit;
    use crate::geometry::solids;

    #[test]
    fn encoding_round_trips() {
        let lang = Language::new(6, 12).unwrap();
        let w = vec![0, 5, 3, 1, 5];
        assert_eq!(lang.decode(lang.encode(&w)), w);
        assert!(Language::new(6, 43).is_err());
        assert!(Language::new(6, 42).is_ok());
    }

    #[test]
    fn cube_letters_and_pairs() {
        let cube = solids::cube();
        let (lang, stats) = sample_language(&cube, 4, 20_000, 7).unwrap();
        assert_eq!(lang.count(1), 6);
        assert_eq!(lang.count(2), 30);
        for w in lang.words(2) {
            assert_ne!(w.letters()[0], w.letters()[1]);
        }
        assert!(lang.is_factor_closed());
        assert_eq!(stats.budget, 20_000);
    }

    #[test]
    fn samples_are_reproducible_and_nested() {
        let cube = solids::cube();
        let a = estimate_complexity(&cube, 8, 3_000, 1).unwrap();
        let b = estimate_complexity(&cube, 8, 3_000, 1).unwrap();
        assert_eq!(a, b);
        let c = estimate_complexity(&cube, 8, 6_000, 1).unwrap();
        for n in 1..=8 {
            assert!(c.p_hat(n) >= a.p_hat(n));
        }
        assert_eq!(stratified_phase_point(&cube, 1, 17), stratified_phase_point(&cube, 1, 17));
    }

    #[test]
    fn sampled_words_match_full_orbits() {
        let t = solids::regular_tetrahedron();
        let mut buf = Vec::new();
        for i in 0..500 {
            let x = stratified_phase_point(&t, 3, i);
            let cut = fast_code(&x, 10, &t, &mut buf);
            let rec = orbit(&x, 10, &t);
            assert_eq!(&rec.word.letters()[..buf.len()], &buf[..]);
            if cut.is_none() {
                assert_eq!(rec.word.letters(), &buf[..]);
            }
        }
    }

    #[test]
    fn bad_parameters() {
        let cube = solids::cube();
        assert!(estimate_complexity(&cube, 1, 10, 0).is_err());
        assert!(estimate_complexity(&cube, 4, 0, 0).is_err());
    }
}

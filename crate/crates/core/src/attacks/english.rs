use crate::error::{Error, Result};

/// Character frequencies of English prose: case-folded letters plus space,
/// as fractions of all characters.
pub const ENGLISH_REFERENCE: [(u8, f64); 27] = [
    (b' ', 0.1800),
    (b'e', 0.1042),
    (b't', 0.0743),
    (b'a', 0.0670),
    (b'o', 0.0616),
    (b'i', 0.0571),
    (b'n', 0.0553),
    (b's', 0.0519),
    (b'r', 0.0491),
    (b'h', 0.0500),
    (b'd', 0.0349),
    (b'l', 0.0330),
    (b'c', 0.0228),
    (b'u', 0.0226),
    (b'm', 0.0197),
    (b'w', 0.0194),
    (b'f', 0.0183),
    (b'g', 0.0165),
    (b'y', 0.0162),
    (b'p', 0.0158),
    (b'b', 0.0122),
    (b'v', 0.0080),
    (b'k', 0.0063),
    (b'j', 0.0013),
    (b'x', 0.0012),
    (b'q', 0.0008),
    (b'z', 0.0006),
];

/// Letters, space, newline and common punctuation.
pub fn is_printable_english(b: u8) -> bool {
    b.is_ascii_alphabetic() || b" \n.,;:'\"!?-()".contains(&b)
}

/// Blend of the printable fraction and a cosine similarity between the
/// case-folded byte histogram and [`ENGLISH_REFERENCE`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EnglishModel {
    /// Text passes when its score reaches this value.
    pub pass_threshold: f64,
    /// Weight of the printable fraction; the similarity gets the rest.
    pub printable_weight: f64,
}

impl Default for EnglishModel {
    fn default() -> Self {
        EnglishModel {
            pass_threshold: 0.8,
            printable_weight: 0.5,
        }
    }
}

fn reference_table() -> ([f64; 256], f64) {
    let mut table = [0.0; 256];
    for (b, f) in ENGLISH_REFERENCE {
        table[b as usize] = f;
    }
    let norm = table.iter().map(|x| x * x).sum::<f64>().sqrt();
    (table, norm)
}

impl EnglishModel {
    pub fn validate(&self) -> Result<()> {
        if !(self.pass_threshold > 0.0 && self.pass_threshold <= 1.0) {
            return Err(Error::Config(format!(
                "english pass threshold must lie in (0, 1], got {}",
                self.pass_threshold
            )));
        }
        if !(0.0..=1.0).contains(&self.printable_weight) {
            return Err(Error::Config(format!(
                "english printable weight must lie in [0, 1], got {}",
                self.printable_weight
            )));
        }
        Ok(())
    }

    pub fn score(&self, bytes: &[u8]) -> Result<f64> {
        if bytes.is_empty() {
            return Err(Error::EmptyInput);
        }
        let printable =
            bytes.iter().filter(|&&b| is_printable_english(b)).count() as f64 / bytes.len() as f64;

        let mut hist = [0u32; 256];
        for &b in bytes {
            hist[b.to_ascii_lowercase() as usize] += 1;
        }
        let (reference, ref_norm) = reference_table();
        let dot: f64 = hist
            .iter()
            .zip(reference.iter())
            .map(|(&h, &r)| h as f64 * r)
            .sum();
        let hist_norm = hist.iter().map(|&h| (h as f64).powi(2)).sum::<f64>().sqrt();
        let similarity = dot / (hist_norm * ref_norm);

        Ok(self.printable_weight * printable + (1.0 - self.printable_weight) * similarity)
    }

    pub fn passes(&self, bytes: &[u8]) -> Result<bool> {
        Ok(self.score(bytes)? >= self.pass_threshold)
    }
}

pub fn english_score(bytes: &[u8]) -> Result<f64> {
    EnglishModel::default().score(bytes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn reference_is_a_distribution() {
        let total: f64 = ENGLISH_REFERENCE.iter().map(|(_, f)| f).sum();
        assert!((total - 1.0).abs() < 1e-3, "total = {total}");
    }

    #[test]
    fn empty_is_an_error() {
        assert!(matches!(english_score(&[]), Err(Error::EmptyInput)));
    }

    #[test]
    fn sentence_scores_high() {
        let s =
            english_score(b"A quiet harbour town wakes slowly, and the boats drift out.").unwrap();
        assert!(s >= 0.9, "score = {s}");
    }

    #[test]
    fn score_ignores_length() {
        let a = english_score(&[b' '; 40]).unwrap();
        let b = english_score(&[b' '; 3]).unwrap();
        assert!((a - b).abs() < 1e-15);
        // printable fraction 1, similarity = space share / |reference|
        let (_, norm) = reference_table();
        assert!((a - (0.5 + 0.5 * 0.18 / norm)).abs() < 1e-15);
    }

    #[test]
    fn case_is_folded() {
        assert_eq!(
            english_score(b"HELLO THERE").unwrap(),
            english_score(b"hello there").unwrap()
        );
    }

    #[test]
    fn random_bytes_score_low() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut buf = [0u8; 32];
        let trials = 20_000;
        let mut high = 0;
        for _ in 0..trials {
            rng.fill(&mut buf);
            if english_score(&buf).unwrap() > 0.45 {
                high += 1;
            }
        }
        assert!(
            high as f64 / trials as f64 <= 1e-3,
            "{high} of {trials} above 0.45"
        );
    }
}

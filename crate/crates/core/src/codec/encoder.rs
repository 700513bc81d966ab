use rand::Rng;

use super::degree::DegreeDistribution;
use crate::error::{Error, Result};

/// One LT-coded bit together with the message bits it covers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CodedSymbol {
    /// Position `j` of the symbol in the coded stream, starting at 0.
    pub index: usize,
    pub degree: usize,
    /// Sorted, distinct input indices in `[0, k)`.
    pub neighbors: Vec<usize>,
    pub bit: u8,
}

impl CodedSymbol {
    /// Builds a symbol from an explicit neighbor set (sorted and deduplicated
    /// here), computing its bit from `message`.
    pub fn from_neighbors(index: usize, mut neighbors: Vec<usize>, message: &[u8]) -> Result<Self> {
        neighbors.sort_unstable();
        neighbors.dedup();
        if neighbors.is_empty() {
            return Err(Error::param("neighbors", "a coded symbol needs at least one neighbor"));
        }
        if let Some(&bad) = neighbors.iter().find(|&&i| i >= message.len()) {
            return Err(Error::param(
                "neighbors",
                format!("index {bad} out of range for k = {}", message.len()),
            ));
        }
        let bit = xor_of(message, &neighbors);
        Ok(Self {
            index,
            degree: neighbors.len(),
            neighbors,
            bit,
        })
    }

    /// `bit ⊕ XOR(message[neighbors])`; zero for a correctly encoded symbol.
    pub fn parity_residual(&self, message: &[u8]) -> u8 {
        self.bit ^ xor_of(message, &self.neighbors)
    }
}

fn xor_of(message: &[u8], indices: &[usize]) -> u8 {
    indices.iter().fold(0u8, |acc, &i| acc ^ (message[i] & 1))
}

/// Rateless LT encoder over one `k`-bit block.
///
/// Each call to [`LtEncoder::next_symbol`] draws a degree, then that many
/// distinct inputs by a partial Fisher-Yates shuffle of a persistent index
/// permutation, and emits their XOR. All randomness comes from the caller's
/// generator, so a seeded stream reproduces the symbol sequence.
#[derive(Debug, Clone)]
pub struct LtEncoder<'m> {
    message: &'m [u8],
    dist: DegreeDistribution,
    perm: Vec<usize>,
    next_index: usize,
}

impl<'m> LtEncoder<'m> {
    pub fn new(message: &'m [u8], dist: &DegreeDistribution) -> Result<Self> {
        let k = message.len();
        if k == 0 {
            return Err(Error::param("message", "block must contain at least one bit"));
        }
        if message.iter().any(|&b| b > 1) {
            return Err(Error::param("message", "bits must be 0 or 1"));
        }
        Ok(Self {
            message,
            dist: dist.truncated(k)?,
            perm: (0..k).collect(),
            next_index: 0,
        })
    }

    pub fn k(&self) -> usize {
        self.message.len()
    }

    /// The degree law actually sampled, after truncation at `k`.
    pub fn distribution(&self) -> &DegreeDistribution {
        &self.dist
    }

    pub fn emitted(&self) -> usize {
        self.next_index
    }

    pub fn next_symbol<R: Rng + ?Sized>(&mut self, rng: &mut R) -> CodedSymbol {
        let degree = self.dist.sample(rng);
        let k = self.k();
        for i in 0..degree {
            let j = rng.random_range(i..k);
            self.perm.swap(i, j);
        }
        let mut neighbors = self.perm[..degree].to_vec();
        neighbors.sort_unstable();
        let bit = xor_of(self.message, &neighbors);
        let symbol = CodedSymbol {
            index: self.next_index,
            degree,
            neighbors,
            bit,
        };
        self.next_index += 1;
        symbol
    }
}

/// Passes `bit` through a binary symmetric channel with flip probability `p`.
pub fn bsc<R: Rng + ?Sized>(bit: u8, p: f64, rng: &mut R) -> u8 {
    let u: f64 = rng.random();
    if u < p {
        bit ^ 1
    } else {
        bit
    }
}

/// Maps a bit to its sign-domain value: 0 → +1, 1 → −1.
pub fn bit_to_sign(bit: u8) -> i8 {
    if bit & 1 == 0 {
        1
    } else {
        -1
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn forced_symbol_xors_its_neighbors() {
        let sym = CodedSymbol::from_neighbors(0, vec![2, 0], &[1, 0, 1]).unwrap();
        assert_eq!(sym.neighbors, vec![0, 2]);
        assert_eq!(sym.degree, 2);
        assert_eq!(sym.bit, 0);
    }

    #[test]
    fn all_zero_message_encodes_to_zero() {
        let message = vec![0u8; 64];
        let dist = DegreeDistribution::implant();
        let mut enc = LtEncoder::new(&message, &dist).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..500 {
            assert_eq!(enc.next_symbol(&mut rng).bit, 0);
        }
    }

    #[test]
    fn neighbors_are_distinct_sorted_and_in_range() {
        let message: Vec<u8> = (0..50).map(|i| (i % 3 == 0) as u8).collect();
        let dist = DegreeDistribution::implant();
        let mut enc = LtEncoder::new(&message, &dist).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for j in 0..1000 {
            let s = enc.next_symbol(&mut rng);
            assert_eq!(s.index, j);
            assert_eq!(s.neighbors.len(), s.degree);
            assert!(s.degree >= 1 && s.degree <= 50);
            assert!(s.neighbors.windows(2).all(|w| w[0] < w[1]));
            assert!(*s.neighbors.last().unwrap() < 50);
            assert_eq!(s.parity_residual(&message), 0);
        }
    }

    #[test]
    fn rejects_empty_or_non_binary_messages() {
        let dist = DegreeDistribution::implant();
        assert!(LtEncoder::new(&[], &dist).is_err());
        assert!(LtEncoder::new(&[0, 2], &dist).is_err());
        assert!(CodedSymbol::from_neighbors(0, vec![], &[1]).is_err());
        assert!(CodedSymbol::from_neighbors(0, vec![3], &[1]).is_err());
    }

    #[test]
    fn bsc_extremes() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert!((0..100).all(|_| bsc(1, 0.0, &mut rng) == 1));
        assert!((0..100).all(|_| bsc(1, 1.0, &mut rng) == 0));
    }
}

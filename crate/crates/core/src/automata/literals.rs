//! Packed literal vectors `[x_1..x_f, ¬x_1..¬x_f]`.

/// Dense bit vector of `2f` literals. Bit `k` holds `x_k`, bit `f + k` its
/// negation, so the negated half is always the complement of the first.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LiteralVector {
    features: usize,
    words: Vec<u64>,
}

pub(crate) fn word_count(literals: usize) -> usize {
    literals.div_ceil(64)
}

impl LiteralVector {
    pub fn from_features(features: &[bool]) -> Self {
        let f = features.len();
        let mut words = vec![0u64; word_count(2 * f)];
        for (k, &x) in features.iter().enumerate() {
            let bit = if x { k } else { f + k };
            words[bit / 64] |= 1 << (bit % 64);
        }
        Self { features: f, words }
    }

    /// All features false: positive half zero, negated half one.
    pub fn zeros(features: usize) -> Self {
        Self::from_features(&vec![false; features])
    }

    pub fn from_active(features: usize, active: impl IntoIterator<Item = usize>) -> Self {
        let mut bits = vec![false; features];
        for k in active {
            bits[k] = true;
        }
        Self::from_features(&bits)
    }

    /// Number of features `f` (half the literal count).
    pub fn features(&self) -> usize {
        self.features
    }

    pub fn literals(&self) -> usize {
        2 * self.features
    }

    #[inline]
    pub fn literal(&self, k: usize) -> bool {
        self.words[k / 64] >> (k % 64) & 1 == 1
    }

    pub fn feature(&self, k: usize) -> bool {
        self.literal(k)
    }

    pub fn active_features(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.features).filter(|&k| self.literal(k))
    }

    pub fn to_features(&self) -> Vec<bool> {
        (0..self.features).map(|k| self.literal(k)).collect()
    }

    #[inline]
    pub(crate) fn words(&self) -> &[u64] {
        &self.words
    }
}

/// Photon numbers of up to eight modes packed one byte per mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub(crate) struct Occupation(u64);

pub(crate) const MAX_MODES: usize = 8;
pub(crate) const MAX_CUTOFF: usize = u8::MAX as usize;

impl Occupation {
    pub(crate) fn from_slice(counts: &[usize]) -> Self {
        debug_assert!(counts.len() <= MAX_MODES);
        let mut bits = 0u64;
        for (i, &n) in counts.iter().enumerate() {
            debug_assert!(n <= MAX_CUTOFF);
            bits |= (n as u64) << (8 * i);
        }
        Occupation(bits)
    }

    #[inline]
    pub(crate) fn get(self, mode: usize) -> usize {
        ((self.0 >> (8 * mode)) & 0xff) as usize
    }

    #[inline]
    pub(crate) fn with(self, mode: usize, n: usize) -> Self {
        debug_assert!(n <= MAX_CUTOFF);
        let shift = 8 * mode;
        Occupation((self.0 & !(0xff << shift)) | ((n as u64) << shift))
    }

    pub(crate) fn total(self) -> usize {
        self.0.to_le_bytes().iter().map(|&b| b as usize).sum()
    }

    pub(crate) fn max_count(self) -> usize {
        self.0.to_le_bytes().iter().copied().max().unwrap_or(0) as usize
    }

    pub(crate) fn to_vec(self, num_modes: usize) -> Vec<usize> {
        (0..num_modes).map(|i| self.get(i)).collect()
    }

    /// Picks the listed modes, in order, into a fresh occupation.
    pub(crate) fn select(self, modes: &[usize]) -> Self {
        let mut out = Occupation::default();
        for (j, &i) in modes.iter().enumerate() {
            out = out.with(j, self.get(i));
        }
        out
    }
}

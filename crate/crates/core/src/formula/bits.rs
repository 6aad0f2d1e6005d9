/// Positions of the ones in the binary representation of `i`.
pub fn ones(i: u64) -> Vec<usize> {
    (0..64).filter(|&k| (i >> k) & 1 == 1).collect()
}

/// Bit `k` of `i`.
pub fn bit(k: usize, i: u64) -> u8 {
    if k >= 64 {
        0
    } else {
        ((i >> k) & 1) as u8
    }
}

/// Binary representation of length `l`, most significant bit first.
/// `None` unless `i < 2^l`.
pub fn bin(l: usize, i: u64) -> Option<Vec<u8>> {
    if l < 64 && i >> l != 0 {
        return None;
    }
    Some((0..l).rev().map(|k| bit(k, i)).collect())
}

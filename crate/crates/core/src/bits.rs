//! Conversion between amplitude indices and outcome strings.
//!
//! Qubit 0 is the least-significant bit of an amplitude index, and it is
//! printed as the leftmost character of an outcome string, so `|01110⟩`
//! reads qubit 0 = 0, qubit 1 = 1, and so on. Every other module renders
//! and parses bit strings through these two functions only.

/// Renders the low `width` bits of `index`, qubit 0 first.
pub fn index_to_label(index: usize, width: usize) -> String {
    (0..width)
        .map(|q| if (index >> q) & 1 == 1 { '1' } else { '0' })
        .collect()
}

/// Inverse of [`index_to_label`]. Returns `None` on any character other
/// than `0`/`1` or when the string is wider than a `usize`.
pub fn label_to_index(label: &str) -> Option<usize> {
    if label.len() > usize::BITS as usize {
        return None;
    }
    label
        .bytes()
        .enumerate()
        .try_fold(0usize, |acc, (q, b)| match b {
            b'0' => Some(acc),
            b'1' => Some(acc | (1 << q)),
            _ => None,
        })
}

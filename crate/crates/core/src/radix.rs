//! Mixed-radix encoding of multi-indices, most significant digit first.

pub fn encode(digits: &[usize], radices: &[usize]) -> usize {
    debug_assert_eq!(digits.len(), radices.len());
    digits
        .iter()
        .zip(radices)
        .fold(0, |acc, (&d, &r)| acc * r + d)
}

pub fn decode(mut flat: usize, radices: &[usize]) -> Vec<usize> {
    let mut digits = vec![0; radices.len()];
    for (slot, &r) in digits.iter_mut().zip(radices).rev() {
        *slot = flat % r;
        flat /= r;
    }
    digits
}

pub fn volume(radices: &[usize]) -> usize {
    radices.iter().product()
}

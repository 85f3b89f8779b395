//! Built-in point prefixes.

use crate::error::{Error, Result};

use super::{PointPrefix, Word};

/// `pattern` repeated and cut to length `h`.
pub fn periodic(pattern: &Word, h: usize) -> Result<PointPrefix> {
    if pattern.is_empty() {
        return Err(Error::Precondition("periodic pattern is empty".into()));
    }
    let mut w = pattern.repeat(h.div_ceil(pattern.len()));
    w = w.prefix(h);
    PointPrefix::new(w, format!("periodic({pattern})"))
}

/// Thue–Morse: symbol `i` is the parity of the binary digit sum of `i`.
pub fn thue_morse(h: usize) -> Result<PointPrefix> {
    let symbols = (0..h).map(|i| (i.count_ones() % 2) as u8).collect();
    PointPrefix::new(Word::new(symbols)?, "thue-morse")
}

/// Binary de Bruijn cycle of the given order (length `2^order`), via the
/// Lyndon-word concatenation.
pub fn de_bruijn_cycle(order: usize) -> Word {
    fn rec(t: usize, p: usize, n: usize, a: &mut Vec<u8>, out: &mut Vec<u8>) {
        if t > n {
            if n.is_multiple_of(p) {
                out.extend_from_slice(&a[1..=p]);
            }
        } else {
            a[t] = a[t - p];
            rec(t + 1, p, n, a, out);
            if a[t - p] == 0 {
                a[t] = 1;
                rec(t + 1, t, n, a, out);
            }
        }
    }
    if order == 0 {
        return Word::zeros(1);
    }
    let mut a = vec![0u8; order + 1];
    let mut out = Vec::with_capacity(1 << order);
    rec(1, 1, order, &mut a, &mut out);
    Word::new(out).expect("binary")
}

/// The de Bruijn cycle of `order` repeated to length `h`. Contains every
/// block of length `order` once `h >= 2^order + order - 1`.
pub fn de_bruijn_prefix(order: usize, h: usize) -> Result<PointPrefix> {
    let cycle = de_bruijn_cycle(order);
    let mut p = periodic(&cycle, h)?;
    p = PointPrefix::new(p.word().clone(), format!("de-bruijn({order})"))?;
    Ok(p)
}

/// Indicator of `{0} ∪ {2^j : j >= 0}`. Position 0 is included so that the
/// cylinder `[1]` is a neighbourhood of the point.
pub fn powers_of_two(h: usize) -> Result<PointPrefix> {
    let symbols = (0..h).map(|i| (i == 0 || i.is_power_of_two()) as u8).collect();
    PointPrefix::new(Word::new(symbols)?, "powers-of-two")
}

/// Indicator of `{0} ∪ {j! : j >= 1}`, with 0 included as for
/// [`powers_of_two`].
pub fn factorials(h: usize) -> Result<PointPrefix> {
    let mut symbols = vec![0u8; h];
    if h > 0 {
        symbols[0] = 1;
    }
    let mut f: usize = 1;
    let mut j = 1;
    while f < h {
        symbols[f] = 1;
        j += 1;
        match f.checked_mul(j) {
            Some(next) => f = next,
            None => break,
        }
    }
    PointPrefix::new(Word::new(symbols)?, "factorials")
}

/// `1 0^{h-1}`.
pub fn single_one(h: usize) -> Result<PointPrefix> {
    let mut w = Word::zeros(h);
    if h > 0 {
        w = Word::new(std::iter::once(1).chain(std::iter::repeat_n(0, h - 1)).collect())?;
    }
    PointPrefix::new(w, "single-one")
}

pub fn zeros(h: usize) -> Result<PointPrefix> {
    PointPrefix::new(Word::zeros(h), "zeros")
}

pub fn ones(h: usize) -> Result<PointPrefix> {
    PointPrefix::new(Word::ones(h), "ones")
}

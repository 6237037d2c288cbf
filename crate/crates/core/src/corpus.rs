//! Deterministic test corpora.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::slp::Slp;
use crate::symbol::Symbol;

pub const MAX_FIB_TEXT: u32 = 40;
pub const MAX_FIB_SLP: u32 = 90;
pub const MAX_THUE_MORSE: u32 = 31;
pub const MAX_LEN: u64 = 1 << 30;
pub const MAX_COPIES: u64 = 100_000;

fn check(cond: bool, msg: impl Into<String>) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::Param(msg.into()))
    }
}

/// Fibonacci word: `F(1) = b`, `F(2) = a`, `F(k) = F(k-1) F(k-2)`.
pub fn fibonacci(k: u32) -> Result<Vec<u8>> {
    check((1..=MAX_FIB_TEXT).contains(&k), format!("fib k must be in 1..={MAX_FIB_TEXT}"))?;
    let (mut prev, mut cur) = (b"b".to_vec(), b"a".to_vec());
    if k == 1 {
        return Ok(prev);
    }
    for _ in 2..k {
        let next = [cur.as_slice(), prev.as_slice()].concat();
        prev = std::mem::replace(&mut cur, next);
    }
    Ok(cur)
}

/// The recursive SLP of `F(k)` over bytes: rule `i` derives `F(i + 3)`.
pub fn fibonacci_slp(k: u32) -> Result<Slp> {
    check((3..=MAX_FIB_SLP).contains(&k), format!("fib SLP k must be in 3..={MAX_FIB_SLP}"))?;
    let sigma = 256;
    let sym = |j: u32| match j {
        1 => Symbol::from(b'b'),
        2 => Symbol::from(b'a'),
        _ => Symbol(sigma + j - 3),
    };
    let rules = (3..=k).map(|j| (sym(j - 1), sym(j - 2))).collect();
    let slp = Slp { sigma, rules };
    slp.validate()?;
    Ok(slp)
}

/// Thue–Morse prefix of length `2^(k-1)`: letter `i` is `a` or `b` by the
/// parity of the bits of `i`.
pub fn thue_morse(k: u32) -> Result<Vec<u8>> {
    check((1..=MAX_THUE_MORSE).contains(&k), format!("thue-morse k must be in 1..={MAX_THUE_MORSE}"))?;
    Ok((0u64..1 << (k - 1)).map(|i| if i.count_ones() % 2 == 0 { b'a' } else { b'b' }).collect())
}

pub fn unary(n: u64) -> Result<Vec<u8>> {
    check((1..=MAX_LEN).contains(&n), "unary n out of range")?;
    Ok(vec![b'a'; n as usize])
}

/// Uniform letters from the first `sigma` lowercase letters.
pub fn random(len: u64, sigma: u32, seed: u64) -> Result<Vec<u8>> {
    check((1..=MAX_LEN).contains(&len), "random length out of range")?;
    check((1..=26).contains(&sigma), "random sigma must be in 1..=26")?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok((0..len).map(|_| b'a' + rng.gen_range(0..sigma) as u8).collect())
}

/// `copies` concatenated copies of a base string, each letter mutated to a
/// random letter with probability 1%. Without a base, 256 random letters
/// are used.
pub fn copy_mutate(copies: u64, sigma: u32, seed: u64, base: Option<&[u8]>) -> Result<Vec<u8>> {
    check((1..=MAX_COPIES).contains(&copies), format!("copy count must be in 1..={MAX_COPIES}"))?;
    check((1..=26).contains(&sigma), "sigma must be in 1..=26")?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let base = match base {
        Some(b) if !b.is_empty() => b.to_vec(),
        Some(_) => return Err(Error::Param("empty base file".into())),
        None => (0..256).map(|_| b'a' + rng.gen_range(0..sigma) as u8).collect(),
    };
    let mut out = Vec::with_capacity(base.len() * copies as usize);
    for _ in 0..copies {
        for &c in &base {
            if rng.gen_bool(0.01) {
                out.push(b'a' + rng.gen_range(0..sigma) as u8);
            } else {
                out.push(c);
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::slp::expand_slp_to_writer;

    #[test]
    fn families() {
        assert_eq!(fibonacci(6).unwrap(), b"abaababa");
        assert_eq!(fibonacci(1).unwrap(), b"b");
        assert_eq!(fibonacci(10).unwrap().len(), 55);
        assert_eq!(thue_morse(4).unwrap(), b"abbabaab");
        assert_eq!(unary(5).unwrap(), b"aaaaa");
        assert_eq!(random(100, 4, 7).unwrap(), random(100, 4, 7).unwrap());
        assert!(random(100, 4, 7).unwrap().iter().all(|c| (b'a'..b'e').contains(c)));
        assert!(fibonacci(0).is_err());
        let cm = copy_mutate(4, 4, 1, None).unwrap();
        assert_eq!(cm.len(), 1024);
    }

    #[test]
    fn recursive_fibonacci_slp() {
        for k in 3..=20 {
            let slp = fibonacci_slp(k).unwrap();
            assert_eq!(slp.n(), k as usize - 2);
            let mut out = Vec::new();
            expand_slp_to_writer(&slp, &mut out).unwrap();
            assert_eq!(out, fibonacci(k).unwrap());
        }
    }
}

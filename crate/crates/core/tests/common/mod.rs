#![allow(dead_code)]

use grc_core::corpus;
use grc_core::{Slp, Symbol};

pub struct Case {
    pub name: String,
    pub text: Vec<u8>,
}

/// Random strings over sigma in {2, 4, 16} with lengths in 2..=512, plus
/// Fibonacci words (k <= 20), Thue-Morse prefixes (k <= 12) and unary
/// strings (n <= 64); every member has length at least 2.
pub fn oracle_corpus(random_count: u64) -> Vec<Case> {
    let mut cases = Vec::new();
    for i in 0..random_count {
        let sigma = [2, 4, 16][(i % 3) as usize];
        let len = 2 + (i * 7919 + 13) % 511;
        cases.push(Case {
            name: format!("random#{i}(sigma={sigma},N={len})"),
            text: corpus::random(len, sigma, i).unwrap(),
        });
    }
    for k in 3..=20 {
        cases.push(Case { name: format!("fib{k}"), text: corpus::fibonacci(k).unwrap() });
    }
    for k in 2..=12 {
        cases.push(Case { name: format!("thue-morse{k}"), text: corpus::thue_morse(k).unwrap() });
    }
    for n in 2..=64 {
        cases.push(Case { name: format!("unary{n}"), text: corpus::unary(n).unwrap() });
    }
    cases
}

pub fn sym(c: u8) -> Symbol {
    Symbol::from(c)
}

/// The example grammar with ab = 5, ba = 5 and aa = 3:
/// 1 -> aa, 2 -> ba, 3 -> 1 2, 4 -> 3 2, 5 -> b 3, 6 -> 5 3, 7 -> 4 6,
/// 8 -> a 7, deriving `aaabababaabaaaba`.
pub fn example_grammar() -> Slp {
    let v = |i: u32| Symbol(256 + i - 1);
    let (a, b) = (sym(b'a'), sym(b'b'));
    Slp {
        sigma: 256,
        rules: vec![(a, a), (b, a), (v(1), v(2)), (v(3), v(2)), (b, v(3)), (v(5), v(3)), (v(4), v(6)), (a, v(7))],
    }
}

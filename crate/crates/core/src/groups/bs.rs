//! Baumslag–Solitar groups `BS(m,n) = ⟨a, b | b a^m b⁻¹ = a^n⟩`.
//!
//! Elements are kept in right normal form
//! `a^{e0} b^{ε1} a^{e1} ⋯ b^{εk} a^{ek}` where every exponent following `b`
//! lies in `[0, |m|)`, every exponent following `b⁻¹` lies in `[0, |n|)`, and
//! no `b^ε b^{-ε}` occurs. The form is stored flat as
//! `[e0, ε1, e1, …, εk, ek]`.

use super::Gen;

pub const A: Gen = 0;
pub const A_INV: Gen = 1;
pub const B: Gen = 2;
pub const B_INV: Gen = 3;

fn syllables(nf: &[i64]) -> usize {
    (nf.len() - 1) / 2
}

/// Right-multiplies a normal form by one generator, restoring normal form.
pub fn apply(m: i64, n: i64, nf: &mut Vec<i64>, g: Gen) {
    match g {
        A | A_INV => {
            let last = nf.len() - 1;
            nf[last] += if g == A { 1 } else { -1 };
            let k = syllables(nf);
            carry_left(m, n, nf, k);
        }
        B | B_INV => {
            let eps = if g == B { 1 } else { -1 };
            let k = syllables(nf);
            if k >= 1 && nf[2 * k - 1] == -eps && nf[2 * k] == 0 {
                nf.truncate(nf.len() - 2);
            } else {
                nf.push(eps);
                nf.push(0);
            }
        }
        _ => panic!("generator {g} is not a BS generator"),
    }
}

/// Pushes excess a-powers leftwards starting at syllable `i`.
fn carry_left(m: i64, n: i64, nf: &mut [i64], mut i: usize) {
    while i >= 1 {
        let eps = nf[2 * i - 1];
        let e = nf[2 * i];
        // b a^{qm} = a^{qn} b   and   b⁻¹ a^{qn} = a^{qm} b⁻¹
        let (modulus, carry) = if eps == 1 { (m, n) } else { (n, m) };
        let r = e.rem_euclid(modulus.abs());
        let q = (e - r) / modulus;
        nf[2 * i] = r;
        if q == 0 {
            return;
        }
        let moved = q.checked_mul(carry).expect("BS exponent overflow");
        nf[2 * i - 2] = nf[2 * i - 2].checked_add(moved).expect("BS exponent overflow");
        i -= 1;
    }
}

/// Expands a normal form into a generator word.
pub fn expand(nf: &[i64]) -> Vec<Gen> {
    let mut out = Vec::new();
    push_power(&mut out, nf[0]);
    for s in 0..syllables(nf) {
        out.push(if nf[2 * s + 1] == 1 { B } else { B_INV });
        push_power(&mut out, nf[2 * s + 2]);
    }
    out
}

fn push_power(out: &mut Vec<Gen>, e: i64) {
    let g = if e >= 0 { A } else { A_INV };
    out.extend(std::iter::repeat_n(g, e.unsigned_abs() as usize));
}

pub fn is_normal(m: i64, n: i64, nf: &[i64]) -> bool {
    if nf.is_empty() || nf.len().is_multiple_of(2) {
        return false;
    }
    for s in 1..=syllables(nf) {
        let eps = nf[2 * s - 1];
        let e = nf[2 * s];
        let bound = match eps {
            1 => m.abs(),
            -1 => n.abs(),
            _ => return false,
        };
        if !(0..bound).contains(&e) {
            return false;
        }
        if s < syllables(nf) && e == 0 && nf[2 * s + 1] == -eps {
            return false;
        }
    }
    true
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Syl {
    A(i64),
    B(i64),
}

fn to_syllables(word: &[Gen]) -> Vec<Syl> {
    let mut out: Vec<Syl> = Vec::new();
    for &g in word {
        match g {
            A | A_INV => push_a(&mut out, if g == A { 1 } else { -1 }),
            B => out.push(Syl::B(1)),
            B_INV => out.push(Syl::B(-1)),
            _ => panic!("generator {g} is not a BS generator"),
        }
    }
    out
}

fn push_a(out: &mut Vec<Syl>, e: i64) {
    if e == 0 {
        return;
    }
    if let Some(Syl::A(prev)) = out.last_mut() {
        *prev += e;
        if *prev == 0 {
            out.pop();
        }
    } else {
        out.push(Syl::A(e));
    }
}

/// Finds the leftmost pinch and returns `(start, end_exclusive, replacement exponent)`.
fn leftmost_pinch(m: i64, n: i64, syls: &[Syl]) -> Option<(usize, usize, i64)> {
    for i in 0..syls.len() {
        let Syl::B(eps) = syls[i] else { continue };
        let (e, close) = match syls.get(i + 1) {
            Some(Syl::A(e)) => (*e, i + 2),
            Some(Syl::B(_)) => (0, i + 1),
            None => continue,
        };
        if syls.get(close) != Some(&Syl::B(-eps)) {
            continue;
        }
        // b a^{jm} b⁻¹ → a^{jn},  b⁻¹ a^{jn} b → a^{jm}
        let (div, mul) = if eps == 1 { (m, n) } else { (n, m) };
        if e % div == 0 {
            return Some((i, close + 1, (e / div) * mul));
        }
    }
    None
}

/// Britton reduction: repeatedly rewrites the leftmost pinch until none remains.
///
/// A word represents the identity iff the result is empty.
pub fn britton_reduce(m: i64, n: i64, word: &[Gen]) -> Vec<Gen> {
    let mut syls = to_syllables(word);
    while let Some((start, end, e)) = leftmost_pinch(m, n, &syls) {
        let mut next: Vec<Syl> = Vec::with_capacity(syls.len());
        for &s in &syls[..start] {
            match s {
                Syl::A(x) => push_a(&mut next, x),
                b => next.push(b),
            }
        }
        push_a(&mut next, e);
        for &s in &syls[end..] {
            match s {
                Syl::A(x) => push_a(&mut next, x),
                b => next.push(b),
            }
        }
        syls = next;
    }
    let mut out = Vec::new();
    for s in syls {
        match s {
            Syl::A(e) => push_power(&mut out, e),
            Syl::B(1) => out.push(B),
            Syl::B(_) => out.push(B_INV),
        }
    }
    out
}

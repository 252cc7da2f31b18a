//! Brute-force free-word rewriter for corner skew Laurent rings.
//!
//! Words over the alphabet {t₊, t₋, coefficients} are reduced by
//! applying the defining relations one local step at a time, choosing
//! among the applicable positions at random.  Every reduction order
//! terminates — each rule strictly decreases the measure
//! (t-symbol count, Σ per-coefficient crossings, coefficient count) in
//! lexicographic order — and lands on a single normal-form term, which
//! makes the rewriter an independent oracle for the engine's structured
//! multiplication.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

use super::{CoefRing, CslpElement, CslpHandle};

/// One letter of a free word: t₊, t₋, or a coefficient.
#[derive(Debug, Clone)]
pub enum Symbol<E> {
    Plus,
    Minus,
    Coef(E),
}

const STEP_CAP: usize = 20_000;

/// Local rewrite opportunities, identified by rule number and position.
fn applicable<E: Clone + PartialEq + std::fmt::Debug>(word: &[Symbol<E>]) -> Vec<(u8, usize)> {
    let mut out = Vec::new();
    for i in 0..word.len().saturating_sub(1) {
        match (&word[i], &word[i + 1]) {
            (Symbol::Minus, Symbol::Plus) => out.push((1, i)),
            (Symbol::Plus, Symbol::Minus) => out.push((2, i)),
            (Symbol::Coef(_), Symbol::Coef(_)) => out.push((3, i)),
            (Symbol::Coef(_), Symbol::Minus) => out.push((4, i)),
            (Symbol::Plus, Symbol::Coef(_)) => out.push((5, i)),
            _ => {}
        }
    }
    for i in 0..word.len().saturating_sub(2) {
        if let (Symbol::Minus, Symbol::Coef(_), Symbol::Plus) =
            (&word[i], &word[i + 1], &word[i + 2])
        {
            out.push((6, i));
        }
    }
    out
}

/// Reduces a free word to its normal form by randomized application of
/// the relations:
///
/// 1. t₋t₊ → 1          2. t₊t₋ → e          3. a·b → ab
/// 4. r·t₋ → t₋·α(r)    5. t₊·r → α(r)·t₊    6. t₋·c·t₊ → α⁻¹(e·c·e)
///
/// Rule 6 is derived from the others; every application is re-checked
/// through α before it is trusted.
pub fn reduce_word<R: CoefRing>(
    h: &CslpHandle<R>,
    word: &[Symbol<R::Elem>],
    rng: &mut ChaCha8Rng,
) -> Result<CslpElement<R::Elem>> {
    let ring = &h.ring;
    let e = ring.idempotent();
    let mut w: Vec<Symbol<R::Elem>> = word.to_vec();
    for _ in 0..STEP_CAP {
        let moves = applicable(&w);
        if moves.is_empty() {
            break;
        }
        let (rule, i) = moves[rng.gen_range(0..moves.len())];
        match rule {
            1 => {
                w.drain(i..i + 2);
            }
            2 => {
                w.splice(i..i + 2, [Symbol::Coef(e.clone())]);
            }
            3 => {
                let (Symbol::Coef(a), Symbol::Coef(b)) = (&w[i], &w[i + 1]) else {
                    unreachable!()
                };
                let ab = ring.multiply(a, b);
                w.splice(i..i + 2, [Symbol::Coef(ab)]);
            }
            4 => {
                let Symbol::Coef(r) = &w[i] else { unreachable!() };
                let fr = ring.corner_map(r);
                w.splice(i..i + 2, [Symbol::Minus, Symbol::Coef(fr)]);
            }
            5 => {
                let Symbol::Coef(r) = &w[i + 1] else { unreachable!() };
                let fr = ring.corner_map(r);
                w.splice(i..i + 2, [Symbol::Coef(fr), Symbol::Plus]);
            }
            6 => {
                let Symbol::Coef(c) = &w[i + 1] else { unreachable!() };
                let ece = ring.multiply(&ring.multiply(&e, c), &e);
                let inv = ring.corner_inverse(&ece)?;
                if ring.corner_map(&inv) != ece {
                    return Err(Error::internal(
                        "free-word rule t₋·c·t₊ failed its inverse-map check",
                    ));
                }
                w.splice(i..i + 3, [Symbol::Coef(inv)]);
            }
            _ => unreachable!(),
        }
    }
    if !applicable(&w).is_empty() {
        return Err(Error::internal("free-word reduction exceeded its step budget"));
    }
    parse_normal(h, &w)
}

/// A fully reduced word has the shape t₋^a [coef] t₊^b with a = 0 or
/// b = 0; anything else means the rewriter or rule table is broken.
fn parse_normal<R: CoefRing>(
    h: &CslpHandle<R>,
    w: &[Symbol<R::Elem>],
) -> Result<CslpElement<R::Elem>> {
    let mut idx = 0;
    let mut minus = 0usize;
    while idx < w.len() && matches!(w[idx], Symbol::Minus) {
        minus += 1;
        idx += 1;
    }
    let mut coef = None;
    if idx < w.len() {
        if let Symbol::Coef(c) = &w[idx] {
            coef = Some(c.clone());
            idx += 1;
        }
    }
    let mut plus = 0usize;
    while idx < w.len() && matches!(w[idx], Symbol::Plus) {
        plus += 1;
        idx += 1;
    }
    if idx != w.len() || (minus > 0 && plus > 0) {
        return Err(Error::internal(
            "free-word reduction stalled in a non-canonical shape",
        ));
    }
    let c = coef.unwrap_or_else(|| h.ring.one());
    if minus > 0 {
        Ok(h.el_term(minus as i64, &c))
    } else if plus > 0 {
        Ok(h.el_term(-(plus as i64), &c))
    } else {
        Ok(h.el_coef(&c))
    }
}

/// Evaluates a free word with the engine's structured multiplication.
pub fn engine_eval<R: CoefRing>(
    h: &CslpHandle<R>,
    word: &[Symbol<R::Elem>],
) -> Result<CslpElement<R::Elem>> {
    let mut acc = h.el_one();
    for s in word {
        let next = match s {
            Symbol::Plus => h.el_t_plus(1),
            Symbol::Minus => h.el_t_minus(1),
            Symbol::Coef(c) => h.el_coef(c),
        };
        acc = h.el_multiply(&acc, &next)?;
    }
    Ok(acc)
}

/// Reduces seeded random words with both the rewriter and the engine
/// and insists the normal forms agree.  Returns the number of words
/// checked; any disagreement is an internal error carrying both sides.
pub fn agreement_test<R: CoefRing>(
    h: &CslpHandle<R>,
    words: usize,
    max_len: usize,
    seed: u64,
) -> Result<usize> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let samples = h.ring.sample_elements();
    for n in 0..words {
        let len = rng.gen_range(1..=max_len.max(1));
        let mut word = Vec::with_capacity(len);
        for _ in 0..len {
            word.push(match rng.gen_range(0..4u8) {
                0 => Symbol::Minus,
                1 => Symbol::Plus,
                2 => Symbol::Coef(samples[rng.gen_range(0..samples.len())].clone()),
                _ => Symbol::Coef(h.ring.random_element(&mut rng)),
            });
        }
        let oracle = reduce_word(h, &word, &mut rng)?;
        let engine = engine_eval(h, &word)?;
        if oracle != engine {
            return Err(Error::internal(format!(
                "free-word oracle disagrees with the engine on word {n}: {} vs {}",
                h.el_render(&oracle),
                h.el_render(&engine)
            )));
        }
    }
    Ok(words)
}

/// Construction-time check that the reductions the engine relies on
/// agree with the rewriter: the two defining products, the shifted
/// idempotent t₊^2·t₋^2 = α(e), per-sample commutation moves, the
/// derived rule 6, and a batch of random words.
pub fn verify_derived_identities<R: CoefRing>(h: &CslpHandle<R>) -> Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(0xfeed_beef);
    let ring = &h.ring;
    let e = ring.idempotent();
    let checks: Vec<(Vec<Symbol<R::Elem>>, CslpElement<R::Elem>)> = vec![
        (vec![Symbol::Minus, Symbol::Plus], h.el_one()),
        (vec![Symbol::Plus, Symbol::Minus], h.el_coef(&e)),
        (
            vec![Symbol::Plus, Symbol::Plus, Symbol::Minus, Symbol::Minus],
            h.el_coef(&ring.corner_map(&e)),
        ),
    ];
    for (word, expected) in &checks {
        if reduce_word(h, word, &mut rng)? != *expected || engine_eval(h, word)? != *expected {
            return Err(Error::input(
                "coefficient ring violates a defining product identity",
            ));
        }
    }
    for r in ring.sample_elements().iter().take(4) {
        for word in [
            vec![Symbol::Coef(r.clone()), Symbol::Minus],
            vec![Symbol::Plus, Symbol::Coef(r.clone())],
            vec![Symbol::Minus, Symbol::Coef(r.clone()), Symbol::Plus],
        ] {
            if reduce_word(h, &word, &mut rng)? != engine_eval(h, &word)? {
                return Err(Error::input(
                    "coefficient ring violates a commutation identity",
                ));
            }
        }
    }
    agreement_test(h, 30, 5, 0x51ab_5eed)?;
    Ok(())
}

//! Browser bindings for the demo page in `www/`.
//!
//! Every export takes plain numbers or strings and returns a JSON string, so
//! the page only needs `JSON.parse`. The `*_json` functions are the same
//! operations on the host side.

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

use nonloose_core::calculus::ClassicalPair;
use nonloose_core::certify::{self, Side, TensionQuery};
use nonloose_core::diagram::{parse_front, Direction, FrontWord};
use nonloose_core::rational;
use nonloose_core::surgery::dual_invariants;

#[derive(Debug, Serialize)]
pub struct FrontSummary {
    pub word: String,
    pub tb: i64,
    pub rot: i64,
    pub writhe: i64,
    pub cusps: usize,
    pub zigzag: Option<(usize, usize)>,
}

fn error(message: impl ToString) -> Value {
    json!({ "error": message.to_string() })
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("serializable")
}

fn summarize(word: &FrontWord, leftward: bool) -> FrontSummary {
    let base = if leftward { Direction::Leftward } else { Direction::Rightward };
    let f = word.orient(base);
    FrontSummary {
        word: word.events().iter().map(ToString::to_string).collect::<Vec<_>>().join(" ; "),
        tb: f.tb(),
        rot: f.rot(),
        writhe: f.writhe(),
        cusps: f.cusps(),
        zigzag: word.find_zigzag(),
    }
}

pub fn front_json(text: &str, leftward: bool) -> Value {
    match parse_front(text) {
        Ok(w) => to_value(&summarize(&w, leftward)),
        Err(e) => error(e),
    }
}

/// A random single-component front with at most `max_events` events.
pub fn random_front_json(seed: u64, max_events: usize) -> Value {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let choices: Vec<u32> = (0..4 * max_events).map(|_| rng.next_u32()).collect();
    to_value(&summarize(&FrontWord::from_choices(&choices, max_events), false))
}

/// Invariants of the (+1)-surgery dual after `a` positive and `b` negative
/// stabilizations, with the rational Bennequin check on the result.
pub fn dual_json(tb: i64, rot: i64, chi: i64, a: u32, b: u32) -> Value {
    let d = match dual_invariants(tb, rot, a.into(), b.into(), chi) {
        Ok(d) => d,
        Err(e) => return error(e),
    };
    let cert = certify::certify_bennequin_rational(&d);
    json!({
        "tb_q": rational::format(&d.tb_q),
        "rot_q": rational::format(&d.rot_q),
        "r": d.r,
        "chi": chi,
        "certificate": to_value(&cert),
    })
}

pub fn tension_json(tb: i64, rot: i64, chi: i64, max_n: u32, side: &str) -> Value {
    let side: Side = match side.parse() {
        Ok(s) => s,
        Err(e) => return error(e),
    };
    let pair = match ClassicalPair::new(tb, rot).with_chi(chi) {
        Ok(p) => p,
        Err(e) => return error(e),
    };
    match certify::tension_certificate(&TensionQuery::Classical(pair), max_n.into(), side) {
        Ok(c) => to_value(&c),
        Err(e) => error(e),
    }
}

#[wasm_bindgen]
pub fn front_invariants(text: &str, leftward: bool) -> String {
    front_json(text, leftward).to_string()
}

#[wasm_bindgen]
pub fn random_front(seed: u32, max_events: u32) -> String {
    random_front_json(seed.into(), max_events as usize).to_string()
}

#[wasm_bindgen]
pub fn dual_bennequin(tb: i32, rot: i32, chi: i32, a: u32, b: u32) -> String {
    dual_json(tb.into(), rot.into(), chi.into(), a, b).to_string()
}

#[wasm_bindgen]
pub fn tension_search(tb: i32, rot: i32, chi: i32, max_n: u32, side: &str) -> String {
    tension_json(tb.into(), rot.into(), chi.into(), max_n, side).to_string()
}

//! Combinatorial front diagrams of Legendrian knots.
//!
//! A front is read left to right as a sequence of events acting on a stack of
//! strands numbered from the bottom (height 1). A left cusp opens two strands
//! in the gap below height `i`, a right cusp closes strands `i` and `i + 1`,
//! and a crossing swaps them. Strands keep their identity through crossings,
//! so every strand segment ("arc") runs from one left cusp to one right cusp.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::calculus::Sign;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FrontError {
    #[error("unknown token `{token}`")]
    UnknownToken { token: String },
    #[error("event {index} has no position")]
    MissingPosition { index: usize },
    #[error("event {index}: position {position} out of range with {strands} strands")]
    PositionOutOfRange { index: usize, position: usize, strands: usize },
    #[error("word ends with {strands} open strands")]
    NonzeroFinalStrands { strands: usize },
    #[error("front closes into {count} components; only knots are supported")]
    MultipleComponents { count: usize },
    #[error("empty front word")]
    EmptyWord,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum EventKind {
    LeftCusp,
    RightCusp,
    Crossing,
}

impl EventKind {
    fn token(self) -> &'static str {
        match self {
            EventKind::LeftCusp => "l",
            EventKind::RightCusp => "r",
            EventKind::Crossing => "x",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FrontEvent {
    pub kind: EventKind,
    pub position: usize,
}

impl FrontEvent {
    pub fn left(position: usize) -> Self {
        FrontEvent { kind: EventKind::LeftCusp, position }
    }

    pub fn right(position: usize) -> Self {
        FrontEvent { kind: EventKind::RightCusp, position }
    }

    pub fn cross(position: usize) -> Self {
        FrontEvent { kind: EventKind::Crossing, position }
    }
}

impl fmt::Display for FrontEvent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.kind.token(), self.position)
    }
}

/// Direction in which an arc is traversed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Rightward,
    Leftward,
}

impl Direction {
    pub fn flip(self) -> Self {
        match self {
            Direction::Rightward => Direction::Leftward,
            Direction::Leftward => Direction::Rightward,
        }
    }
}

/// Arc bookkeeping for a word that passed the strand-count checks.
#[derive(Debug, Clone)]
struct Trace {
    /// For every event, the (lower, upper) arcs it acts on.
    touched: Vec<(usize, usize)>,
    /// Arcs present after each event, bottom to top.
    stacks: Vec<Vec<usize>>,
    /// Each arc's left cusp event and right cusp event.
    ends: Vec<(usize, usize)>,
}

impl Trace {
    fn build(events: &[FrontEvent]) -> Result<Trace, FrontError> {
        if events.is_empty() {
            return Err(FrontError::EmptyWord);
        }
        let mut stack: Vec<usize> = Vec::new();
        let mut touched = Vec::with_capacity(events.len());
        let mut stacks = Vec::with_capacity(events.len());
        let mut ends: Vec<(usize, usize)> = Vec::new();
        for (index, ev) in events.iter().enumerate() {
            let n = stack.len();
            let i = ev.position;
            let out_of_range = FrontError::PositionOutOfRange { index, position: i, strands: n };
            match ev.kind {
                EventKind::LeftCusp => {
                    if i == 0 || i > n + 1 {
                        return Err(out_of_range);
                    }
                    let lower = ends.len();
                    ends.push((index, usize::MAX));
                    ends.push((index, usize::MAX));
                    stack.splice(i - 1..i - 1, [lower, lower + 1]);
                    touched.push((lower, lower + 1));
                }
                EventKind::RightCusp => {
                    if i == 0 || i + 1 > n {
                        return Err(out_of_range);
                    }
                    let (lower, upper) = (stack[i - 1], stack[i]);
                    ends[lower].1 = index;
                    ends[upper].1 = index;
                    stack.drain(i - 1..=i);
                    touched.push((lower, upper));
                }
                EventKind::Crossing => {
                    if i == 0 || i + 1 > n {
                        return Err(out_of_range);
                    }
                    touched.push((stack[i - 1], stack[i]));
                    stack.swap(i - 1, i);
                }
            }
            stacks.push(stack.clone());
        }
        if !stack.is_empty() {
            return Err(FrontError::NonzeroFinalStrands { strands: stack.len() });
        }
        Ok(Trace { touched, stacks, ends })
    }

    fn arc_count(&self) -> usize {
        self.ends.len()
    }

    /// The arc sharing a cusp with `arc` at the given end.
    fn partner(&self, arc: usize, at_right: bool) -> usize {
        let (l, r) = self.ends[arc];
        let (a, b) = self.touched[if at_right { r } else { l }];
        if a == arc {
            b
        } else {
            a
        }
    }

    /// Component label of every arc, numbered in order of first appearance.
    fn components(&self) -> (usize, Vec<usize>) {
        let mut label = vec![usize::MAX; self.arc_count()];
        let mut count = 0;
        for start in 0..self.arc_count() {
            if label[start] != usize::MAX {
                continue;
            }
            let mut arc = start;
            let mut at_right = true;
            loop {
                label[arc] = count;
                arc = self.partner(arc, at_right);
                at_right = !at_right;
                if arc == start {
                    break;
                }
            }
            count += 1;
        }
        (count, label)
    }
}

/// A validated front word describing a single Legendrian knot.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct FrontWord {
    events: Vec<FrontEvent>,
}

impl FrontWord {
    pub fn new(events: Vec<FrontEvent>) -> Result<Self, FrontError> {
        let trace = Trace::build(&events)?;
        let (count, _) = trace.components();
        if count != 1 {
            return Err(FrontError::MultipleComponents { count });
        }
        Ok(FrontWord { events })
    }

    /// The standard front of the unknot with `tb = -1`.
    pub fn unknot() -> Self {
        FrontWord { events: vec![FrontEvent::left(1), FrontEvent::right(1)] }
    }

    pub fn events(&self) -> &[FrontEvent] {
        &self.events
    }

    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    fn trace(&self) -> Trace {
        Trace::build(&self.events).expect("validated word")
    }

    pub fn orient(&self, base: Direction) -> OrientedFront {
        OrientedFront::resolve(self.clone(), base)
    }

    /// First adjacent left/right cusp pair forming a zigzag on a single strand.
    ///
    /// Such a pair can be deleted without changing the knot type, raising `tb`
    /// by one. A `None` result does not mean the knot is not a stabilization.
    pub fn find_zigzag(&self) -> Option<(usize, usize)> {
        self.events.windows(2).position(|w| {
            w[0].kind == EventKind::LeftCusp
                && w[1].kind == EventKind::RightCusp
                && (w[1].position + 1 == w[0].position || w[1].position == w[0].position + 1)
        })
        .map(|i| (i, i + 1))
    }

    /// Deletes the zigzag at `(i, i + 1)` as returned by [`FrontWord::find_zigzag`].
    pub fn remove_zigzag(&self, at: (usize, usize)) -> Result<FrontWord, FrontError> {
        let mut events = self.events.clone();
        events.drain(at.0..=at.1);
        FrontWord::new(events)
    }

    /// Builds a single-component word from an arbitrary stream of choices.
    ///
    /// The result is deterministic in `choices`, has between 2 and
    /// `max_events.max(2)` events, and never returns to zero strands before
    /// its last event. Extra crossings are inserted where needed to join
    /// separate components into one knot.
    pub fn from_choices(choices: &[u32], max_events: usize) -> FrontWord {
        let max_events = max_events.max(2);
        let budget = (2 * max_events / 3).max(2);
        let mut stream = choices.iter().copied().chain(std::iter::repeat(0));
        let target = 2 + stream.next().unwrap() as usize % (budget - 1);

        let mut events = vec![FrontEvent::left(1)];
        let mut n = 2usize;
        while n > 0 {
            let remaining = target.saturating_sub(events.len());
            let mut options: Vec<EventKind> = Vec::with_capacity(3);
            if remaining > n / 2 + 1 {
                options.push(EventKind::LeftCusp);
                options.push(EventKind::Crossing);
            }
            if n > 2 || remaining <= n / 2 {
                options.push(EventKind::RightCusp);
            }
            if options.is_empty() {
                options.push(EventKind::RightCusp);
            }
            let kind = options[stream.next().unwrap() as usize % options.len()];
            let span = match kind {
                EventKind::LeftCusp => n + 1,
                _ => n - 1,
            };
            let position = 1 + stream.next().unwrap() as usize % span;
            events.push(FrontEvent { kind, position });
            match kind {
                EventKind::LeftCusp => n += 2,
                EventKind::RightCusp => n -= 2,
                EventKind::Crossing => {}
            }
        }

        loop {
            let trace = Trace::build(&events).expect("generator keeps strand counts valid");
            let (count, label) = trace.components();
            if count == 1 {
                break;
            }
            let (t, i) = trace
                .stacks
                .iter()
                .enumerate()
                .find_map(|(t, stack)| {
                    stack
                        .windows(2)
                        .position(|w| label[w[0]] != label[w[1]])
                        .map(|i| (t, i + 1))
                })
                .expect("strand count stays positive, so components overlap");
            events.insert(t + 1, FrontEvent::cross(i));
        }
        FrontWord { events }
    }
}

impl fmt::Display for FrontWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for ev in &self.events {
            writeln!(f, "{ev}")?;
        }
        Ok(())
    }
}

impl FromStr for FrontWord {
    type Err = FrontError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_front(s)
    }
}

/// Parses the textual front grammar: `l <i>`, `r <i>`, `x <i>` separated by
/// whitespace or `;`, with `#` comments running to end of line.
pub fn parse_front(text: &str) -> Result<FrontWord, FrontError> {
    let mut tokens = text
        .lines()
        .map(|line| line.split('#').next().unwrap_or(""))
        .flat_map(|line| line.split(|c: char| c.is_whitespace() || c == ';'))
        .filter(|t| !t.is_empty());
    let mut events = Vec::new();
    while let Some(tok) = tokens.next() {
        let kind = match tok {
            "l" | "L" => EventKind::LeftCusp,
            "r" | "R" => EventKind::RightCusp,
            "x" | "X" => EventKind::Crossing,
            _ => return Err(FrontError::UnknownToken { token: tok.to_string() }),
        };
        let index = events.len();
        let pos = tokens.next().ok_or(FrontError::MissingPosition { index })?;
        if !pos.bytes().all(|b| b.is_ascii_digit()) {
            return Err(FrontError::UnknownToken { token: pos.to_string() });
        }
        let position = pos.parse::<usize>().map_err(|_| FrontError::UnknownToken {
            token: pos.to_string(),
        })?;
        events.push(FrontEvent { kind, position });
    }
    FrontWord::new(events)
}

/// A front word together with a traversal direction on every arc.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OrientedFront {
    word: FrontWord,
    base: Direction,
    arcs: Vec<Direction>,
    writhe: i64,
    up_cusps: usize,
    down_cusps: usize,
}

impl OrientedFront {
    /// Orients the knot so that the lower arc of the first left cusp runs in
    /// direction `base`.
    pub fn resolve(word: FrontWord, base: Direction) -> Self {
        let trace = word.trace();
        let mut arcs = vec![base; trace.arc_count()];
        let start = trace.touched[0].0;
        let mut arc = start;
        let mut at_right = base == Direction::Rightward;
        let mut dir = base;
        loop {
            arcs[arc] = dir;
            arc = trace.partner(arc, at_right);
            at_right = !at_right;
            dir = dir.flip();
            if arc == start {
                break;
            }
        }

        let mut writhe = 0i64;
        let (mut up, mut down) = (0usize, 0usize);
        for (ev, &(lower, upper)) in word.events.iter().zip(&trace.touched) {
            match ev.kind {
                EventKind::Crossing => {
                    writhe += if arcs[lower] == arcs[upper] { 1 } else { -1 };
                }
                EventKind::LeftCusp => {
                    if arcs[upper] == Direction::Leftward {
                        down += 1;
                    } else {
                        up += 1;
                    }
                }
                EventKind::RightCusp => {
                    if arcs[upper] == Direction::Rightward {
                        down += 1;
                    } else {
                        up += 1;
                    }
                }
            }
        }
        OrientedFront { word, base, arcs, writhe, up_cusps: up, down_cusps: down }
    }

    pub fn word(&self) -> &FrontWord {
        &self.word
    }

    pub fn base(&self) -> Direction {
        self.base
    }

    /// Direction of each arc, indexed in order of creation by left cusps
    /// (lower arc first).
    pub fn arc_directions(&self) -> &[Direction] {
        &self.arcs
    }

    pub fn writhe(&self) -> i64 {
        self.writhe
    }

    pub fn up_cusps(&self) -> usize {
        self.up_cusps
    }

    pub fn down_cusps(&self) -> usize {
        self.down_cusps
    }

    pub fn cusps(&self) -> usize {
        self.up_cusps + self.down_cusps
    }

    /// Thurston-Bennequin number: writhe minus half the number of cusps.
    pub fn tb(&self) -> i64 {
        self.writhe - (self.cusps() / 2) as i64
    }

    /// Rotation number: half of (down cusps - up cusps).
    pub fn rot(&self) -> i64 {
        (self.down_cusps as i64 - self.up_cusps as i64) / 2
    }

    pub fn reverse(&self) -> OrientedFront {
        OrientedFront::resolve(self.word.clone(), self.base.flip())
    }

    /// Adds a zigzag on the lower arc of the first left cusp.
    ///
    /// `tb` drops by one and `rot` moves by one in the direction of `sign`.
    pub fn stabilize(&self, sign: Sign) -> OrientedFront {
        // The first event is always `l 1`; its lower arc sits at height 1.
        // A zigzag stepping down on a rightward arc has two down cusps.
        let step_down = (self.base == Direction::Rightward) == (sign == Sign::Positive);
        let zigzag = if step_down {
            [FrontEvent::left(1), FrontEvent::right(2)]
        } else {
            [FrontEvent::left(2), FrontEvent::right(1)]
        };
        let mut events = self.word.events.clone();
        events.splice(1..1, zigzag);
        OrientedFront::resolve(FrontWord { events }, self.base)
    }

    pub fn stabilize_many(&self, positive: usize, negative: usize) -> OrientedFront {
        let mut f = self.clone();
        for _ in 0..positive {
            f = f.stabilize(Sign::Positive);
        }
        for _ in 0..negative {
            f = f.stabilize(Sign::Negative);
        }
        f
    }
}

/// Convenience wrapper over [`FrontWord::find_zigzag`].
pub fn detect_syntactic_destabilization(word: &FrontWord) -> Option<(usize, usize)> {
    word.find_zigzag()
}

#[cfg(test)]
mod tests {
    use super::*;

    const TREFOIL: &str = "l 1 ; l 3 ; x 2 ; x 2 ; x 2 ; r 3 ; r 1";

    fn invariants(text: &str, base: Direction) -> (i64, i64) {
        let f = parse_front(text).unwrap().orient(base);
        (f.tb(), f.rot())
    }

    #[test]
    fn parses_unknot() {
        let w = parse_front("l 1 ; r 1").unwrap();
        assert_eq!(w.len(), 2);
        assert_eq!(w, FrontWord::unknot());
    }

    #[test]
    fn rejects_bad_positions() {
        assert_eq!(
            parse_front("l 1 ; r 2"),
            Err(FrontError::PositionOutOfRange { index: 1, position: 2, strands: 2 })
        );
        assert!(matches!(parse_front("l 0 ; r 1"), Err(FrontError::PositionOutOfRange { .. })));
        assert!(matches!(parse_front("x 1"), Err(FrontError::PositionOutOfRange { .. })));
    }

    #[test]
    fn parse_errors() {
        assert_eq!(parse_front(""), Err(FrontError::EmptyWord));
        assert_eq!(parse_front("  # nothing\n"), Err(FrontError::EmptyWord));
        assert_eq!(
            parse_front("l 1 ; q 1"),
            Err(FrontError::UnknownToken { token: "q".into() })
        );
        assert_eq!(
            parse_front("l 1 ; r -1"),
            Err(FrontError::UnknownToken { token: "-1".into() })
        );
        assert_eq!(parse_front("l 1 ; r"), Err(FrontError::MissingPosition { index: 1 }));
        assert_eq!(parse_front("l 1"), Err(FrontError::NonzeroFinalStrands { strands: 2 }));
        assert_eq!(
            parse_front("l 1 ; l 1 ; r 1 ; r 1"),
            Err(FrontError::MultipleComponents { count: 2 })
        );
    }

    #[test]
    fn twisted_pair_is_a_link() {
        // Three crossings between the two strands of the inner cusp close it
        // off on its own, so this word is a two-component link.
        assert_eq!(
            parse_front("l 1 ; l 2 ; x 2 ; x 2 ; x 2 ; r 2 ; r 1"),
            Err(FrontError::MultipleComponents { count: 2 })
        );
    }

    #[test]
    fn comments_and_separators() {
        let w = parse_front("# unknot\nl 1 # open\n;;r 1\n").unwrap();
        assert_eq!(w, FrontWord::unknot());
    }

    #[test]
    fn serializer_emits_one_event_per_line() {
        let w = parse_front(TREFOIL).unwrap();
        let s = w.to_string();
        assert_eq!(s, "l 1\nl 3\nx 2\nx 2\nx 2\nr 3\nr 1\n");
        assert_eq!(parse_front(&s).unwrap(), w);
    }

    #[test]
    fn unknot_invariants() {
        let f = FrontWord::unknot().orient(Direction::Rightward);
        assert_eq!(f.writhe(), 0);
        assert_eq!(f.cusps(), 2);
        assert_eq!((f.tb(), f.rot()), (-1, 0));
    }

    #[test]
    fn trefoil_invariants() {
        let f = parse_front(TREFOIL).unwrap().orient(Direction::Rightward);
        assert_eq!(f.writhe(), 3);
        assert_eq!(f.cusps(), 4);
        assert_eq!((f.up_cusps(), f.down_cusps()), (2, 2));
        assert_eq!((f.tb(), f.rot()), (1, 0));
    }

    #[test]
    fn reversal_swaps_cusp_types() {
        for text in [TREFOIL, "l 1 ; l 1 ; r 2 ; r 1", "l 1 ; l 2 ; r 1 ; r 1"] {
            let a = parse_front(text).unwrap().orient(Direction::Rightward);
            let b = a.reverse();
            assert_eq!(a.writhe(), b.writhe());
            assert_eq!((a.up_cusps(), a.down_cusps()), (b.down_cusps(), b.up_cusps()));
            assert_eq!(b.reverse(), a);
        }
    }

    #[test]
    fn stabilization_shifts_invariants() {
        let u = FrontWord::unknot().orient(Direction::Rightward);
        let plus = u.stabilize(Sign::Positive);
        assert_eq!((plus.tb(), plus.rot()), (-2, 1));
        assert_eq!(plus.word().to_string(), "l 1\nl 1\nr 2\nr 1\n");
        let both = u.stabilize(Sign::Negative).stabilize(Sign::Positive);
        assert_eq!((both.tb(), both.rot()), (-3, 0));
        let both = u.stabilize(Sign::Positive).stabilize(Sign::Negative);
        assert_eq!((both.tb(), both.rot()), (-3, 0));

        let t = parse_front(TREFOIL).unwrap().orient(Direction::Leftward);
        let minus = t.stabilize(Sign::Negative);
        assert_eq!((minus.tb(), minus.rot()), (0, -1));
    }

    #[test]
    fn reverse_then_stabilize_matches_mirror_sign() {
        let u = FrontWord::unknot().orient(Direction::Rightward);
        let a = u.reverse().stabilize(Sign::Positive);
        let b = u.stabilize(Sign::Negative).reverse();
        assert_eq!((a.tb(), a.rot()), (-2, 1));
        assert_eq!((b.tb(), b.rot()), (-2, 1));
        let r = u.stabilize(Sign::Positive).reverse();
        assert_eq!((r.tb(), r.rot()), (-2, -1));
    }

    #[test]
    fn zigzag_detection() {
        assert_eq!(detect_syntactic_destabilization(&FrontWord::unknot()), None);
        assert_eq!(detect_syntactic_destabilization(&parse_front(TREFOIL).unwrap()), None);
        let s = FrontWord::unknot().orient(Direction::Rightward).stabilize(Sign::Negative);
        let at = detect_syntactic_destabilization(s.word()).unwrap();
        assert_eq!(at, (1, 2));
        assert_eq!(s.word().remove_zigzag(at).unwrap(), FrontWord::unknot());
    }

    #[test]
    fn invariants_independent_of_base_for_tb() {
        assert_eq!(invariants(TREFOIL, Direction::Rightward).0, invariants(TREFOIL, Direction::Leftward).0);
    }

    #[test]
    fn generated_words_are_knots() {
        for seed in 0u32..200 {
            let choices: Vec<u32> =
                (0..64).map(|k| seed.wrapping_mul(2654435761).wrapping_add(k * 40503) >> 7).collect();
            let w = FrontWord::from_choices(&choices, 40);
            assert!(w.len() <= 40 && w.len() >= 2);
            assert_eq!(FrontWord::new(w.events().to_vec()).unwrap(), w);
        }
    }
}

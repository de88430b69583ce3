//! The reduced bivariate objectives `g`, `g1` (class R) and `h`, `h1`
//! (class R1) in `s = |t1|`, `u = |t2|`.
//!
//! For each class, `normalizer · |H3(1)(f^{-1})|` is bounded by one of two
//! objectives depending on the sign of the branch condition; the envelope is
//! their pointwise maximum. The objectives are expanded exactly from their
//! factored form with integer arithmetic.

mod parse;
mod poly;

use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::classes::FunctionClass;

pub use parse::{parse_poly, ParseError};
pub use poly::{BivariatePoly, UniPoly, MAX_COEFF};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Objective {
    G,
    G1,
    H,
    H1,
}

impl Objective {
    pub const ALL: [Objective; 4] = [Objective::G, Objective::G1, Objective::H, Objective::H1];

    pub fn name(self) -> &'static str {
        match self {
            Objective::G => "g",
            Objective::G1 => "g1",
            Objective::H => "h",
            Objective::H1 => "h1",
        }
    }

    pub fn class(self) -> FunctionClass {
        match self {
            Objective::G | Objective::G1 => FunctionClass::R,
            Objective::H | Objective::H1 => FunctionClass::R1,
        }
    }

    /// The two branch objectives of a class, branch A first.
    pub fn for_class(class: FunctionClass) -> [Objective; 2] {
        match class {
            FunctionClass::R => [Objective::G, Objective::G1],
            FunctionClass::R1 => [Objective::H, Objective::H1],
        }
    }

    /// Cached expansion of the objective.
    pub fn poly(self) -> &'static BivariatePoly {
        static CACHE: [OnceLock<BivariatePoly>; 4] =
            [OnceLock::new(), OnceLock::new(), OnceLock::new(), OnceLock::new()];
        CACHE[self as usize].get_or_init(|| build(self))
    }
}

impl std::fmt::Display for Objective {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Objective {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "g" => Ok(Self::G),
            "g1" => Ok(Self::G1),
            "h" => Ok(Self::H),
            "h1" => Ok(Self::H1),
            other => Err(format!("unknown objective `{other}` (expected g, g1, h or h1)")),
        }
    }
}

/// Expands the factored objective into monomials.
pub fn build(which: Objective) -> BivariatePoly {
    let s = BivariatePoly::s;
    let u = BivariatePoly::u;
    let s2 = || s().pow(2);
    let w = || 1 - s2();
    let v = || 1 - u().pow(2);

    let p = match which {
        Objective::G | Objective::G1 => {
            let bracket = 132 * s().pow(4)
                + 6 * s2() * (50 - 41 * s2()) * u()
                + 4 * (35 * s().pow(4) - 61 * s2() + 44) * u().pow(2)
                + 9 * s2() * w() * u().pow(3);
            let head = 208 * s().pow(6)
                + 16 * u() * w() * bracket
                + 288 * s() * w() * v() * (w() * u().pow(2) + 2 * (3 + s2()) * u() + 3 * s2());
            let tail = if which == Objective::G {
                144 * w() * v() * (w() * (15 + u().pow(2)) + 8 * s2() * u())
            } else {
                1152 * w() * v() * (2 * w() * u() + s2())
            };
            head + tail
        }
        Objective::H | Objective::H1 => {
            let bracket = 1740 * s().pow(4)
                + 6 * s2() * (2986 - 1447 * s2()) * u()
                + 4 * (1621 * s().pow(4) - 2189 * s2() + 1216) * u().pow(2)
                + 2511 * s2() * w() * u().pow(3);
            let head = 76288 * s().pow(6)
                + 64 * u() * w() * bracket
                + 10368 * w() * v() * (31 * w() * s() * u().pow(2) + 2 * (3 + 13 * s2()) * s() * u() + 57 * s().pow(3));
            let tail = if which == Objective::H {
                5184 * w() * v() * (w() * (31 * u().pow(2) + 225) + 32 * s2() * u())
            } else {
                165888 * w() * v() * (8 * w() * u() + s2())
            };
            head + tail
        }
    };
    assert!(p.max_abs_coeff() < MAX_COEFF, "objective coefficients exceed the exact-integer budget");
    p
}

pub fn eval(p: &BivariatePoly, s: f64, u: f64) -> f64 {
    p.eval(s, u)
}

pub fn grad(p: &BivariatePoly) -> (BivariatePoly, BivariatePoly) {
    p.grad()
}

/// A side of the unit square.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Edge {
    /// `s = 0`, free variable `u`.
    S0,
    /// `s = 1`, free variable `u`.
    S1,
    /// `u = 0`, free variable `s`.
    U0,
    /// `u = 1`, free variable `s`.
    U1,
}

impl Edge {
    pub const ALL: [Edge; 4] = [Edge::S0, Edge::S1, Edge::U0, Edge::U1];

    /// Maps the free coordinate back to a point `(s, u)`.
    pub fn point(self, x: f64) -> (f64, f64) {
        match self {
            Edge::S0 => (0.0, x),
            Edge::S1 => (1.0, x),
            Edge::U0 => (x, 0.0),
            Edge::U1 => (x, 1.0),
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Edge::S0 => "s=0",
            Edge::S1 => "s=1",
            Edge::U0 => "u=0",
            Edge::U1 => "u=1",
        }
    }
}

pub fn edge_restrict(p: &BivariatePoly, edge: Edge) -> UniPoly {
    match edge {
        Edge::S0 => p.at_s(0),
        Edge::S1 => p.at_s(1),
        Edge::U0 => p.at_u(0),
        Edge::U1 => p.at_u(1),
    }
}

/// Larger of the two branch objectives of `class` at `(s, u)`.
pub fn envelope(class: FunctionClass, s: f64, u: f64) -> f64 {
    let [a, b] = Objective::for_class(class);
    a.poly().eval(s, u).max(b.poly().eval(s, u))
}

/// Monomials as CSV rows `i,j,coeff` with a header line.
pub fn monomials_csv(p: &BivariatePoly) -> String {
    let mut out = String::from("i,j,coeff\n");
    for (i, j, c) in p.terms() {
        out.push_str(&format!("{i},{j},{c}\n"));
    }
    out
}

/// Hand-transcribed partial derivatives of the objectives, kept as an
/// independent cross-check of the formal gradients. Transcription notes: the
/// third line of `∂h1/∂s` carries no sign and is read as `+`; an unbalanced
/// `)` in the last line of `∂h1/∂u` is dropped.
pub const TRANSCRIBED_PARTIALS: [(Objective, char, &str); 8] = [
    (
        Objective::G,
        's',
        "288(1-s^2)(-3s^3+5s^2+3s-1)u^4 - 192(70s^5-15s^4-152s^3-18s^2+82s+9)u^3 \
         + 96(s-1)(246s^4+306s^3-142s^2-187s-3)u^2 - 192(66s^5+15s^4-20s^3+18s^2-12s-9)u \
         + 96s(13s^4-45s^3+90s^2+27s-90)",
    ),
    (
        Objective::G,
        'u',
        "576(s-1)^2(s+1)^2(s^2-2s-1)u^3 + 192(1-s^2)(35s^4-9s^3-79s^2-27s+44)u^2 \
         + 192(s-1)^2(s+1)(41s^3+53s^2-18s-21)u + 192s(1-s^2)(11s^3+3s^2+6s+9)",
    ),
    (
        Objective::G1,
        's',
        "288(s^2-1)(3s^3-5s^2-s+1)u^4 - 192(70s^5-15s^4-80s^3-18s^2+22s+9)u^3 \
         + 96(246s^5+60s^4-316s^3-45s^2+76s+3)u^2 - 192(66s^5+15s^4-92s^3+18s^2+48s-9)u \
         + 96s(13s^4-45s^3-48s^2+27s+24)",
    ),
    (
        Objective::G1,
        'u',
        "576s(s+1)^2(s-1)^2(s-2)u^3 + 192(1-s^2)(35s^4-9s^3-25s^2-27s+8)u^2 \
         - 192s(1-s^2)(41s^3+12s^2-38s-3)u + 192(1-s^2)(11s^4+3s^3-12s^2+9s+12)",
    ),
    (
        Objective::H,
        's',
        "321408(s^2-1)(3s^3-5s^2-3s+1)u^4 - 768(3242s^5-1755s^4-5944s^3+810s^2+2702s+81)u^3 \
         + 384(s-1)(8682s^4+20562s^3-7646s^2-17285s-837)u^2 \
         - 768(+870s^5+1755s^4+284s^3-810s^2-432s-81)u \
         + 384s(1192s^4-7695s^3+12150s^2+4617s-12150)",
    ),
    (
        Objective::H,
        'u',
        "642816(s+1)^2(s-1)^2(s^2-2s-1)u^3 + 768(1-s^2)(1621s^4-1053s^3-2837s^2-243s+1216)u^2 \
         + 768(1+s)(s-1)^2(1447s^3+3823s^2-1782s-2619)u + 768s(1-s^2)(145s^3+351s^2+216s+81)",
    ),
    (
        Objective::H1,
        's',
        "321408(s^2-1)(3s^3-5s^2-s+1)u^4 - 768(3242s^5-1755s^4+1832s^3+810s^2-4642s+81)u^3 \
         + 384(8682s^5+11880s^4-16004s^3-9639s^2+5108s+837)u^2 \
         - 768(870s^5+1755s^4-7492s^3-810s^2+6912s-81)u \
         + 384s(1192s^4-7695s^3-1728s^2+4617s+864)",
    ),
    (
        Objective::H1,
        'u',
        "642816(s+1)^2(s-1)^2s(s-2)u^3 + 768(1-s^2)(1621s^4-1053s^3+2995s^2-243s-3968)u^2 \
         + 768s(1-s^2)(1447s^3+2376s^2-2554s-837)u + 768(1-s^2)(145s^4+351s^3-1728s^2+81s+1728)",
    ),
];

/// Outcome of comparing one transcribed partial against the formal gradient.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PartialComparison {
    pub objective: Objective,
    pub variable: char,
    /// `(i, j, formal, transcribed)` for every differing monomial.
    pub mismatches: Vec<(usize, usize, i64, i64)>,
}

impl PartialComparison {
    pub fn matches(&self) -> bool {
        self.mismatches.is_empty()
    }
}

pub fn compare_transcribed_partials() -> Vec<PartialComparison> {
    TRANSCRIBED_PARTIALS
        .iter()
        .map(|&(objective, variable, src)| {
            let transcribed = parse_poly(src).expect("transcribed partials are well formed");
            let (ps, pu) = objective.poly().grad();
            let formal = if variable == 's' { ps } else { pu };
            let (fs, fu) = formal.degrees();
            let (ts, tu) = transcribed.degrees();
            let mut mismatches = Vec::new();
            for i in 0..=fs.max(ts) {
                for j in 0..=fu.max(tu) {
                    let (a, b) = (formal.coeff(i, j), transcribed.coeff(i, j));
                    if a != b {
                        mismatches.push((i, j, a, b));
                    }
                }
            }
            PartialComparison { objective, variable, mismatches }
        })
        .collect()
}

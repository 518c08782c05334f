//! Curve growth by stroke rewriting.
//!
//! A curve of order `n + 1` is spelled from four transformed copies of the
//! order-`n` base string joined by the connecting strokes `u`, `r`, `d`:
//!
//! ```text
//! ₀h_{n+1} = δo(₀h_n) u ₀h_n r ₀h_n d δa(₀h_n)
//! ```
//!
//! Each slot applies an optional letter morphism and, when barred, reverses
//! the letter order of the result. Since every morphism commutes with the
//! opposite-stroke flip, a barred `δ(h)` is the reversed walk of the image
//! under the negated morphism, which is how the affine rule sets express
//! the same copy. The morphism tables below are written out letter by
//! letter and do not depend on the affine engine.

use std::fmt;

use crate::stroke::{Stroke, StrokeString};

use Stroke::{
    Alpha as A, Beta as B, Down as D, Gamma as G, Left as L, Right as R, Theta as T, Up as U,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Morphism {
    O,
    A,
    G,
    X,
    F,
    M,
    Y,
}

impl Morphism {
    pub const ALL: [Morphism; 7] = [
        Morphism::O,
        Morphism::A,
        Morphism::G,
        Morphism::X,
        Morphism::F,
        Morphism::M,
        Morphism::Y,
    ];

    /// Images of `u r d l α β γ θ`, in that order.
    pub const fn table(self) -> [Stroke; 8] {
        match self {
            Morphism::O => [R, U, L, D, A, T, G, B],
            Morphism::A => [L, D, R, U, G, B, A, T],
            Morphism::G => [L, U, R, D, T, A, B, G],
            Morphism::X => [R, D, L, U, B, G, T, A],
            Morphism::F => [D, L, U, R, G, T, A, B],
            Morphism::M => [D, R, U, L, B, A, T, G],
            Morphism::Y => [U, L, D, R, T, G, B, A],
        }
    }

    pub fn apply(self, s: Stroke) -> Stroke {
        let i = Stroke::ALL.iter().position(|&x| x == s).unwrap();
        self.table()[i]
    }

    pub fn name(self) -> &'static str {
        match self {
            Morphism::O => "δo",
            Morphism::A => "δa",
            Morphism::G => "δg",
            Morphism::X => "δx",
            Morphism::F => "δf",
            Morphism::M => "δm",
            Morphism::Y => "δy",
        }
    }
}

impl fmt::Display for Morphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Letterwise image of a stroke sequence.
pub fn apply_morphism(m: Morphism, strokes: &[Stroke]) -> Vec<Stroke> {
    strokes.iter().map(|&s| m.apply(s)).collect()
}

/// One of the four copies in a template.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Slot {
    pub morphism: Option<Morphism>,
    pub overbar: bool,
}

impl Slot {
    const fn plain(m: Morphism) -> Slot {
        Slot {
            morphism: Some(m),
            overbar: false,
        }
    }

    const fn bar(m: Morphism) -> Slot {
        Slot {
            morphism: Some(m),
            overbar: true,
        }
    }

    const ID: Slot = Slot {
        morphism: None,
        overbar: false,
    };

    const ID_BAR: Slot = Slot {
        morphism: None,
        overbar: true,
    };

    fn render(&self, base: &[Stroke], out: &mut Vec<Stroke>) {
        let image = match self.morphism {
            Some(m) => apply_morphism(m, base),
            None => base.to_vec(),
        };
        if self.overbar {
            out.extend(image.iter().rev());
        } else {
            out.extend(image);
        }
    }
}

impl fmt::Display for Slot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let inner = match self.morphism {
            Some(m) => format!("{m}(h)"),
            None => "h".to_string(),
        };
        if self.overbar {
            write!(f, "~{inner}")
        } else {
            f.write_str(&inner)
        }
    }
}

pub const CONNECTORS: [Stroke; 3] = [U, R, D];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TagRule {
    pub nu: u8,
    pub slots: [Slot; 4],
    /// Curve index of the base string: 0 or 5.
    pub base: u8,
}

use Morphism as Mo;

pub const TAG_RULES: [TagRule; 12] = [
    TagRule {
        nu: 0,
        base: 0,
        slots: [Slot::plain(Mo::O), Slot::ID, Slot::ID, Slot::plain(Mo::A)],
    },
    TagRule {
        nu: 1,
        base: 0,
        slots: [
            Slot::plain(Mo::G),
            Slot::plain(Mo::G),
            Slot::plain(Mo::X),
            Slot::plain(Mo::X),
        ],
    },
    TagRule {
        nu: 2,
        base: 0,
        slots: [Slot::plain(Mo::F), Slot::ID, Slot::ID, Slot::plain(Mo::F)],
    },
    TagRule {
        nu: 3,
        base: 0,
        slots: [
            Slot::plain(Mo::M),
            Slot::plain(Mo::G),
            Slot::plain(Mo::X),
            Slot::plain(Mo::M),
        ],
    },
    TagRule {
        nu: 4,
        base: 0,
        slots: [Slot::plain(Mo::O), Slot::ID, Slot::ID, Slot::plain(Mo::F)],
    },
    TagRule {
        nu: 5,
        base: 0,
        slots: [
            Slot::plain(Mo::M),
            Slot::plain(Mo::G),
            Slot::plain(Mo::X),
            Slot::plain(Mo::X),
        ],
    },
    TagRule {
        nu: 6,
        base: 5,
        slots: [
            Slot::plain(Mo::F),
            Slot::bar(Mo::M),
            Slot::ID,
            Slot::bar(Mo::Y),
        ],
    },
    TagRule {
        nu: 7,
        base: 5,
        slots: [
            Slot::plain(Mo::F),
            Slot::bar(Mo::M),
            Slot::ID,
            Slot::plain(Mo::A),
        ],
    },
    TagRule {
        nu: 8,
        base: 5,
        slots: [
            Slot::bar(Mo::G),
            Slot::bar(Mo::M),
            Slot::ID,
            Slot::plain(Mo::A),
        ],
    },
    TagRule {
        nu: 9,
        base: 5,
        slots: [
            Slot::bar(Mo::O),
            Slot::plain(Mo::G),
            Slot::bar(Mo::A),
            Slot::plain(Mo::X),
        ],
    },
    TagRule {
        nu: 10,
        base: 5,
        slots: [
            Slot::plain(Mo::M),
            Slot::plain(Mo::G),
            Slot::bar(Mo::A),
            Slot::ID_BAR,
        ],
    },
    TagRule {
        nu: 11,
        base: 5,
        slots: [
            Slot::plain(Mo::M),
            Slot::plain(Mo::G),
            Slot::bar(Mo::A),
            Slot::plain(Mo::X),
        ],
    },
];

impl TagRule {
    /// Instantiates the template on a base string; the result has
    /// `4·len(base) + 3` strokes.
    pub fn instantiate(&self, base: &[Stroke]) -> Vec<Stroke> {
        let mut out = Vec::with_capacity(4 * base.len() + 3);
        for (i, slot) in self.slots.iter().enumerate() {
            if i > 0 {
                out.push(CONNECTORS[i - 1]);
            }
            slot.render(base, &mut out);
        }
        out
    }
}

impl fmt::Display for TagRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d] = &self.slots;
        write!(f, "{a} u {b} r {c} d {d}")
    }
}

/// The order-`n` string of rule `nu` grown from the kernel's strokes.
///
/// Returns `None` for `nu > 11` or `n == 0`. Improper rules coincide with
/// rule 5 at order 2. The result is anchored so that its walk starts inside
/// the grid (the bounding box of the walk begins at `(0, 0)`).
pub fn expand(nu: u8, n: u32, kernel: &StrokeString) -> Option<StrokeString> {
    let rule = TAG_RULES.get(usize::from(nu))?;
    if n == 0 {
        return None;
    }
    if n == 1 {
        return Some(kernel.clone());
    }
    let mut hilbert = kernel.strokes.clone();
    let strokes = if rule.base == 0 {
        for _ in 2..n {
            hilbert = TAG_RULES[0].instantiate(&hilbert);
        }
        rule.instantiate(&hilbert)
    } else {
        for _ in 3..n {
            hilbert = TAG_RULES[0].instantiate(&hilbert);
        }
        let liu4 = TAG_RULES[5].instantiate(&hilbert);
        if n == 2 {
            liu4
        } else {
            rule.instantiate(&liu4)
        }
    };
    Some(StrokeString::anchored(strokes))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn first_table_entries() {
        assert_eq!(apply_morphism(Mo::O, &[U, R, D]), vec![R, U, L]);
        assert_eq!(Mo::O.apply(A), A);
        assert_eq!(Mo::A.apply(B), B);
        assert_eq!(Mo::Y.apply(L), R);
        assert_eq!(Mo::Y.apply(T), A);
    }

    #[test]
    fn morphisms_are_bijections() {
        for m in Mo::ALL {
            let image: HashSet<_> = Stroke::ALL.iter().map(|&s| m.apply(s)).collect();
            assert_eq!(image.len(), 8, "{m}");
        }
    }

    #[test]
    fn half_turn_is_an_involution() {
        for s in Stroke::ALL {
            assert_eq!(Mo::F.apply(Mo::F.apply(s)), s);
        }
    }

    #[test]
    fn empty_string() {
        for m in Mo::ALL {
            assert!(apply_morphism(m, &[]).is_empty());
        }
    }

    #[test]
    fn base_case_and_length() {
        let k: StrokeString = "u r d".parse().unwrap();
        for nu in 0..12 {
            assert_eq!(expand(nu, 1, &k).unwrap(), k);
            let mut len = 3;
            for n in 2..6 {
                len = 4 * len + 3;
                assert_eq!(expand(nu, n, &k).unwrap().len(), len);
            }
        }
        assert!(expand(12, 2, &k).is_none());
        assert!(expand(0, 0, &k).is_none());
    }

    #[test]
    fn order_two_hilbert_string() {
        let k: StrokeString = "u r d".parse().unwrap();
        let h = expand(0, 2, &k).unwrap();
        assert_eq!(h.letters(), "r u l u u r d r u r d d l d r");
    }
}

//! Two-valued interpretations over a finite universe, consistent pairs and
//! the subset / precision orders on them.

use std::fmt;

use crate::error::{Error, Result};
use crate::syntax::Atom;

/// A set of true atoms over a universe of `width` atoms.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Interpretation {
    bits: u64,
    width: u8,
}

fn mask_for(width: usize) -> u64 {
    assert!(width <= crate::MAX_UNIVERSE, "universe wider than 64 atoms");
    if width == 64 {
        u64::MAX
    } else {
        (1u64 << width) - 1
    }
}

impl Interpretation {
    pub fn empty(width: usize) -> Self {
        mask_for(width);
        Interpretation {
            bits: 0,
            width: width as u8,
        }
    }

    pub fn full(width: usize) -> Self {
        Interpretation {
            bits: mask_for(width),
            width: width as u8,
        }
    }

    /// Builds an interpretation from a bit mask; bits beyond `width` are dropped.
    pub fn from_bits(width: usize, bits: u64) -> Self {
        Interpretation {
            bits: bits & mask_for(width),
            width: width as u8,
        }
    }

    pub fn from_atoms(width: usize, atoms: impl IntoIterator<Item = Atom>) -> Self {
        let mut i = Self::empty(width);
        for a in atoms {
            i.insert(a);
        }
        i
    }

    pub fn bits(&self) -> u64 {
        self.bits
    }

    pub fn width(&self) -> usize {
        self.width as usize
    }

    pub fn len(&self) -> usize {
        self.bits.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.bits == 0
    }

    pub fn contains(&self, atom: Atom) -> bool {
        self.bits & atom.bit() != 0
    }

    pub fn insert(&mut self, atom: Atom) {
        assert!(atom.0 < self.width(), "atom outside universe");
        self.bits |= atom.bit();
    }

    pub fn remove(&mut self, atom: Atom) {
        self.bits &= !atom.bit();
    }

    pub fn atoms(&self) -> impl Iterator<Item = Atom> + '_ {
        let bits = self.bits;
        (0..self.width()).filter(move |i| bits >> i & 1 == 1).map(Atom)
    }

    pub fn union(&self, other: &Self) -> Self {
        debug_assert_eq!(self.width, other.width);
        Interpretation {
            bits: self.bits | other.bits,
            width: self.width,
        }
    }

    pub fn intersection(&self, other: &Self) -> Self {
        debug_assert_eq!(self.width, other.width);
        Interpretation {
            bits: self.bits & other.bits,
            width: self.width,
        }
    }

    pub fn difference(&self, other: &Self) -> Self {
        Interpretation {
            bits: self.bits & !other.bits,
            width: self.width,
        }
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.bits & !other.bits == 0
    }

    fn check_universe(&self, other: &Self) -> Result<()> {
        if self.width == other.width {
            Ok(())
        } else {
            Err(Error::UniverseMismatch(self.width(), other.width()))
        }
    }
}

impl fmt::Debug for Interpretation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.atoms().map(|a| a.0)).finish()
    }
}

/// `a ⊆ b`.
pub fn leq_subset(a: &Interpretation, b: &Interpretation) -> Result<bool> {
    a.check_universe(b)?;
    Ok(a.is_subset(b))
}

/// A pair `(lower, upper)` standing for every interpretation in between.
/// Atoms in `lower` are true, atoms outside `upper` false, the rest undefined.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Pair {
    pub lower: Interpretation,
    pub upper: Interpretation,
}

impl Pair {
    pub fn new(lower: Interpretation, upper: Interpretation) -> Result<Self> {
        lower.check_universe(&upper)?;
        Ok(Pair { lower, upper })
    }

    /// Like [`Pair::new`] but rejects inconsistent pairs.
    pub fn consistent(lower: Interpretation, upper: Interpretation) -> Result<Self> {
        let pair = Self::new(lower, upper)?;
        if pair.is_consistent() {
            Ok(pair)
        } else {
            Err(Error::InconsistentPair)
        }
    }

    pub fn exact(i: Interpretation) -> Self {
        Pair { lower: i, upper: i }
    }

    /// The least precise pair `(∅, universe)`.
    pub fn bottom(width: usize) -> Self {
        Pair {
            lower: Interpretation::empty(width),
            upper: Interpretation::full(width),
        }
    }

    pub fn width(&self) -> usize {
        self.lower.width()
    }

    pub fn is_consistent(&self) -> bool {
        self.lower.is_subset(&self.upper)
    }

    pub fn is_exact(&self) -> bool {
        self.lower == self.upper
    }

    /// Bit mask of atoms in `upper ∖ lower`.
    pub fn undefined_bits(&self) -> u64 {
        self.upper.bits & !self.lower.bits
    }

    pub(crate) fn ensure_consistent(&self) -> Result<()> {
        if self.is_consistent() {
            Ok(())
        } else {
            Err(Error::InconsistentPair)
        }
    }

    /// Precision order without the universe check.
    pub fn precision_leq(&self, other: &Pair) -> bool {
        self.lower.is_subset(&other.lower) && other.upper.is_subset(&self.upper)
    }
}

impl fmt::Debug for Pair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?}, {:?})", self.lower, self.upper)
    }
}

/// `a ≤p b`: `b` is at least as precise as `a`.
pub fn leq_precision(a: &Pair, b: &Pair) -> Result<bool> {
    a.lower.check_universe(&b.lower)?;
    a.upper.check_universe(&b.upper)?;
    a.lower.check_universe(&a.upper)?;
    Ok(a.precision_leq(b))
}

/// Iterator over an interval `[x, y]`, produced by binary counting over the
/// varying atoms with the first universe atom as least significant bit.
#[derive(Debug, Clone)]
pub struct IntervalIter {
    base: u64,
    free: u64,
    width: usize,
    /// Next subset of `free` to emit; `None` once exhausted.
    next: Option<u64>,
}

impl Iterator for IntervalIter {
    type Item = Interpretation;

    fn next(&mut self) -> Option<Interpretation> {
        let sub = self.next?;
        // Carry-propagating increment restricted to the bits of `free`.
        let succ = sub.wrapping_sub(self.free) & self.free;
        self.next = if succ == 0 { None } else { Some(succ) };
        Some(Interpretation::from_bits(self.width, self.base | sub))
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        if self.next.is_none() {
            return (0, Some(0));
        }
        let n = self.free.count_ones();
        if n >= usize::BITS {
            (usize::MAX, None)
        } else {
            (1, Some(1usize << n))
        }
    }
}

/// Enumerates every `Z` with `x ⊆ Z ⊆ y`. With `restrict`, only atoms in the
/// mask vary; all others keep their value in `x`.
pub fn enumerate_interval(
    x: &Interpretation,
    y: &Interpretation,
    restrict: Option<u64>,
) -> Result<IntervalIter> {
    x.check_universe(y)?;
    if !x.is_subset(y) {
        return Err(Error::InconsistentPair);
    }
    let free = (y.bits & !x.bits) & restrict.unwrap_or(u64::MAX);
    Ok(IntervalIter {
        base: x.bits,
        free,
        width: x.width(),
        next: Some(0),
    })
}

/// Enumerates all interpretations over `width` atoms in counting order.
pub fn all_interpretations(width: usize) -> IntervalIter {
    IntervalIter {
        base: 0,
        free: mask_for(width),
        width,
        next: Some(0),
    }
}

/// Enumerates all consistent pairs over `width` atoms.
pub fn all_consistent_pairs(width: usize) -> impl Iterator<Item = Pair> {
    all_interpretations(width).flat_map(move |upper| {
        enumerate_interval(&Interpretation::empty(width), &upper, None)
            .expect("subset")
            .map(move |lower| Pair { lower, upper })
    })
}

//! The powerset BI algebra of a finite PCM. Subsets are bit masks.

use super::pcm::FinitePcm;
use super::BiAlgebra;

/// Subset of the PCM carrier as a bit mask.
pub type Mask = u64;

#[derive(Clone, Debug)]
pub struct PowersetAlgebra {
    pcm: FinitePcm,
    full: Mask,
}

impl PowersetAlgebra {
    pub fn new(pcm: FinitePcm) -> PowersetAlgebra {
        assert!(pcm.size() <= Mask::BITS as usize, "carrier too large");
        let full = if pcm.size() == Mask::BITS as usize {
            Mask::MAX
        } else {
            (1 << pcm.size()) - 1
        };
        PowersetAlgebra { pcm, full }
    }

    pub fn pcm(&self) -> &FinitePcm {
        &self.pcm
    }

    pub fn full(&self) -> Mask {
        self.full
    }

    /// `0 = {e}`.
    pub fn zero(&self) -> Mask {
        1 << self.pcm.unit()
    }

    /// `X • Y = { x·y | x ∈ X, y ∈ Y, x·y ≠ ⊥ }`.
    pub fn bullet(&self, x: Mask, y: Mask) -> Mask {
        let mut out = 0;
        for i in 0..self.pcm.size() {
            if x & (1 << i) == 0 {
                continue;
            }
            for j in 0..self.pcm.size() {
                if y & (1 << j) == 0 {
                    continue;
                }
                if let Some(k) = self.pcm.compose(i, j) {
                    out |= 1 << k;
                }
            }
        }
        out
    }

    /// `X −• Y = { z | ∀x ∈ X. z·x ≠ ⊥ ⟹ z·x ∈ Y }`.
    pub fn wand_bullet(&self, x: Mask, y: Mask) -> Mask {
        let mut out = 0;
        'z: for z in 0..self.pcm.size() {
            for i in 0..self.pcm.size() {
                if x & (1 << i) == 0 {
                    continue;
                }
                if let Some(k) = self.pcm.compose(z, i) {
                    if y & (1 << k) == 0 {
                        continue 'z;
                    }
                }
            }
            out |= 1 << z;
        }
        out
    }

    /// Renders a mask as `{a, b}` using the PCM's element names.
    pub fn describe(&self, m: Mask) -> String {
        let names: Vec<&str> = (0..self.pcm.size())
            .filter(|i| m & (1 << i) != 0)
            .map(|i| self.pcm.name(i))
            .collect();
        format!("{{{}}}", names.join(", "))
    }

    /// Parses a subset given as whitespace- or comma-separated element
    /// names, e.g. `e m` or `e, m`. An empty string is the empty set.
    pub fn parse_subset(&self, text: &str) -> Result<Mask, String> {
        let mut mask = 0;
        for name in text.split(|c: char| c.is_whitespace() || c == ',') {
            if name.is_empty() {
                continue;
            }
            let i = self
                .pcm
                .element_index(name)
                .ok_or_else(|| format!("{name:?} is not a PCM element"))?;
            mask |= 1 << i;
        }
        Ok(mask)
    }
}

impl BiAlgebra for PowersetAlgebra {
    type Elem = Mask;

    fn elements(&self) -> Vec<Mask> {
        (0..=self.full).collect()
    }

    fn leq(&self, a: &Mask, b: &Mask) -> bool {
        a & !b == 0
    }

    fn bot(&self) -> Mask {
        0
    }

    fn top(&self) -> Mask {
        self.full
    }

    fn meet(&self, a: &Mask, b: &Mask) -> Mask {
        a & b
    }

    fn join(&self, a: &Mask, b: &Mask) -> Mask {
        a | b
    }

    // The largest Z with Z ∩ X ⊆ Y, computed element by element.
    fn heyting(&self, a: &Mask, b: &Mask) -> Mask {
        let mut out = 0;
        for i in 0..self.pcm.size() {
            let singleton = 1 << i;
            if singleton & a & !b == 0 {
                out |= singleton;
            }
        }
        out
    }

    fn emp(&self) -> Mask {
        self.zero()
    }

    fn sep(&self, a: &Mask, b: &Mask) -> Mask {
        self.bullet(*a, *b)
    }

    fn wand(&self, a: &Mask, b: &Mask) -> Mask {
        self.wand_bullet(*a, *b)
    }

    fn name(&self, a: &Mask) -> String {
        self.describe(*a)
    }
}

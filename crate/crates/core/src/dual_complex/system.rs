use std::sync::Arc;

use crate::wallspace::{geometries_intersect, Side, Wallspace, WallspaceError};

use super::{Bits, DualError, MAX_WALLS};

/// Finite set of walls with the pairwise "closed sides meet" table. This is
/// all the dual construction needs; concrete wallspaces, window patterns and
/// products all reduce to it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WallSystem {
    labels: Vec<String>,
    // meets[i * n + j] bit (2 * si + sj) set iff side si of i meets side sj of j
    meets: Vec<u8>,
    // forbid[i][si][sj]: walls j whose side sj misses side si of i
    forbid: Vec<[[Bits; 2]; 2]>,
}

impl WallSystem {
    /// Builds a system from a side-meeting predicate. The predicate is only
    /// queried for `i != j` and must be symmetric.
    pub fn from_fn(
        labels: Vec<String>,
        mut meets: impl FnMut(usize, Side, usize, Side) -> bool,
    ) -> Result<Self, DualError> {
        let n = labels.len();
        if n > MAX_WALLS {
            return Err(DualError::TooManyWalls { count: n, max: MAX_WALLS });
        }
        let mut table = vec![0b1111u8; n * n];
        for i in 0..n {
            for j in (i + 1)..n {
                let mut bits = 0u8;
                let mut mirrored = 0u8;
                for si in [Side::S0, Side::S1] {
                    for sj in [Side::S0, Side::S1] {
                        if meets(i, si, j, sj) {
                            bits |= 1 << (2 * si.index() + sj.index());
                            mirrored |= 1 << (2 * sj.index() + si.index());
                        }
                    }
                }
                table[i * n + j] = bits;
                table[j * n + i] = mirrored;
            }
        }
        Ok(Self::from_table(labels, table))
    }

    fn from_table(labels: Vec<String>, meets: Vec<u8>) -> Self {
        let n = labels.len();
        let mut forbid = vec![[[0 as Bits; 2]; 2]; n];
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    continue;
                }
                let bits = meets[i * n + j];
                for si in 0..2 {
                    for sj in 0..2 {
                        if bits & (1 << (2 * si + sj)) == 0 {
                            forbid[i][si][sj] |= 1 << j;
                        }
                    }
                }
            }
        }
        WallSystem { labels, meets, forbid }
    }

    /// Wall instances of a finite wallspace, multiplicities expanded.
    pub fn from_wallspace(ws: &Wallspace) -> Result<Self, DualError> {
        if !ws.is_finite() {
            return Err(DualError::Wallspace(WallspaceError::InvalidInput(
                "dual construction needs a finite wallspace".into(),
            )));
        }
        let instances = ws.instances();
        let walls = ws.walls();
        Self::from_fn(ws.instance_labels(), |i, si, j, sj| {
            let (gi, gj) = (&walls[instances[i].0].geometry, &walls[instances[j].0].geometry);
            geometries_intersect(gi, si, gj, sj).expect("single-kind wallspace")
        })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, wall: usize) -> &str {
        &self.labels[wall]
    }

    pub fn sides_meet(&self, i: usize, si: Side, j: usize, sj: Side) -> bool {
        if i == j {
            return si == sj;
        }
        self.meets[i * self.len() + j] & (1 << (2 * si.index() + sj.index())) != 0
    }

    pub fn crosses(&self, i: usize, j: usize) -> bool {
        i != j && self.meets[i * self.len() + j] == 0b1111
    }

    /// Mask of all walls.
    pub fn full_mask(&self) -> Bits {
        mask_of_len(self.len())
    }

    /// Whether wall `i` on side `s` is compatible with every other wall of
    /// the orientation `bits`.
    pub fn side_compatible(&self, bits: Bits, i: usize, s: Side) -> bool {
        let f = &self.forbid[i][s.index()];
        let ones = bits & self.full_mask();
        let zeros = !bits & self.full_mask();
        f[1] & ones == 0 && f[0] & zeros == 0
    }

    /// Pairwise consistency of a full orientation.
    pub fn is_consistent(&self, bits: Bits) -> bool {
        (0..self.len()).all(|i| self.side_compatible(bits, i, side_of(bits, i)))
    }

    /// Sub-system on the listed walls (in the given order).
    pub fn restrict(&self, walls: &[usize]) -> WallSystem {
        let n = self.len();
        let m = walls.len();
        let labels = walls.iter().map(|&w| self.labels[w].clone()).collect();
        let mut meets = vec![0b1111u8; m * m];
        for (a, &i) in walls.iter().enumerate() {
            for (b, &j) in walls.iter().enumerate() {
                if a != b {
                    meets[a * m + b] = self.meets[i * n + j];
                }
            }
        }
        Self::from_table(labels, meets)
    }

    /// Disjoint union in which every wall of `self` crosses every wall of
    /// `other`; its dual is the product of the two duals.
    pub fn join(&self, other: &WallSystem) -> Result<WallSystem, DualError> {
        let (n, m) = (self.len(), other.len());
        let total = n + m;
        if total > MAX_WALLS {
            return Err(DualError::TooManyWalls { count: total, max: MAX_WALLS });
        }
        let mut labels = self.labels.clone();
        labels.extend(other.labels.iter().cloned());
        let mut meets = vec![0b1111u8; total * total];
        for i in 0..n {
            for j in 0..n {
                meets[i * total + j] = self.meets[i * n + j];
            }
        }
        for i in 0..m {
            for j in 0..m {
                meets[(n + i) * total + n + j] = other.meets[i * m + j];
            }
        }
        Ok(Self::from_table(labels, meets))
    }

    pub fn into_arc(self) -> Arc<WallSystem> {
        Arc::new(self)
    }
}

pub fn mask_of_len(n: usize) -> Bits {
    if n >= MAX_WALLS {
        Bits::MAX
    } else {
        ((1 as Bits) << n) - 1
    }
}

pub fn side_of(bits: Bits, wall: usize) -> Side {
    Side::from_index(((bits >> wall) & 1) as usize)
}

/// Compresses the listed bit positions of `bits` into the low bits.
pub fn restrict_bits(bits: Bits, walls: &[usize]) -> Bits {
    walls.iter().enumerate().fold(0, |acc, (k, &w)| acc | (((bits >> w) & 1) << k))
}

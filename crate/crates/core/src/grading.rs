//! Diagonal sign flips preserving a cubic tensor.
//!
//! A flip `a_i -> (-1)^{x_i} a_i` fixes a tensor iff `x_i + x_j + x_k = 0`
//! over F_2 for every nonzero entry `(i, j, k)`.  The solutions form a group
//! `G`; a basis `g_1..g_r` labels each coordinate `i` with the bitmask
//! `chi(i) = sum_t g_t(i) << t`, and a tensor basis element with the XOR of
//! its indices' labels.  Equivariant maps preserve labels, which is what
//! makes the block-wise linear algebra in this crate small.

/// Character labels of the coordinates of R^n.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignGrading {
    chars: Vec<u32>,
    rank: usize,
}

impl SignGrading {
    /// Every coordinate in the trivial class.
    pub fn trivial(n: usize) -> Self {
        SignGrading {
            chars: vec![0; n],
            rank: 0,
        }
    }

    /// The maximal sign group fixing every triple in `support`.
    pub fn from_support<I: IntoIterator<Item = [usize; 3]>>(n: usize, support: I) -> Self {
        assert!(n <= 32);
        // reduced constraint rows, one pivot bit each
        let mut rows: Vec<u32> = Vec::new();
        for t in support {
            let mut r = (1u32 << t[0]) ^ (1u32 << t[1]) ^ (1u32 << t[2]);
            for &p in &rows {
                if r & (1 << p.trailing_zeros()) != 0 {
                    r ^= p;
                }
            }
            if r != 0 {
                let bit = 1u32 << r.trailing_zeros();
                for p in rows.iter_mut() {
                    if *p & bit != 0 {
                        *p ^= r;
                    }
                }
                rows.push(r);
            }
        }
        let pivot_mask = rows.iter().fold(0u32, |m, r| m | (1 << r.trailing_zeros()));
        let mut chars = vec![0u32; n];
        let mut rank = 0;
        for free in (0..n).filter(|&i| pivot_mask & (1 << i) == 0) {
            // solution with x_free = 1, other free vars 0
            chars[free] |= 1 << rank;
            for r in &rows {
                if r & (1 << free) != 0 {
                    chars[r.trailing_zeros() as usize] |= 1 << rank;
                }
            }
            rank += 1;
        }
        SignGrading { chars, rank }
    }

    pub fn n(&self) -> usize {
        self.chars.len()
    }

    /// Dimension of the sign group over F_2.
    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn char_of(&self, i: usize) -> u32 {
        self.chars[i]
    }

    pub fn char_of_set(&self, idx: &[usize]) -> u32 {
        idx.iter().fold(0, |acc, &i| acc ^ self.chars[i])
    }

    pub fn chars(&self) -> &[u32] {
        &self.chars
    }

    pub fn fixes(&self, t: [usize; 3]) -> bool {
        self.char_of_set(&t) == 0
    }
}

/// Partition `0..len` by label, classes ordered by first member.
pub fn classes(labels: &[u32]) -> Vec<Vec<usize>> {
    let mut order: Vec<u32> = Vec::new();
    let mut map = std::collections::HashMap::new();
    let mut out: Vec<Vec<usize>> = Vec::new();
    for (i, &c) in labels.iter().enumerate() {
        let id = *map.entry(c).or_insert_with(|| {
            order.push(c);
            out.push(Vec::new());
            out.len() - 1
        });
        out[id].push(i);
    }
    out
}

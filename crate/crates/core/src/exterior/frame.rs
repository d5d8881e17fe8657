use std::fmt;
use std::sync::Arc;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Flavor {
    /// `n` real generators `e1..en`.
    Real,
    /// Generators `w1..wn` followed by their conjugates `cw1..cwn`.
    Complex,
}

/// The coframe the forms of a Lie algebra are written in.
///
/// Generator indices are 0-based. On a complex frame of rank `n`, index `k < n`
/// is `ω^{k+1}` and index `n + k` is its conjugate.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Frame {
    flavor: Flavor,
    rank: usize,
}

pub type FrameRef = Arc<Frame>;

impl Frame {
    pub fn real(n: usize) -> FrameRef {
        assert!(n <= 64, "at most 64 generators");
        Arc::new(Frame { flavor: Flavor::Real, rank: n })
    }

    pub fn complex(n: usize) -> FrameRef {
        assert!(2 * n <= 64, "at most 64 generators");
        Arc::new(Frame { flavor: Flavor::Complex, rank: n })
    }

    pub fn flavor(&self) -> Flavor {
        self.flavor
    }

    pub fn is_complex(&self) -> bool {
        self.flavor == Flavor::Complex
    }

    /// `n`: real dimension for real frames, complex rank for complex frames.
    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Number of degree-1 generators.
    pub fn len(&self) -> usize {
        match self.flavor {
            Flavor::Real => self.rank,
            Flavor::Complex => 2 * self.rank,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Index of the conjugate generator (complex frames only).
    pub fn conj_index(&self, k: usize) -> usize {
        debug_assert!(self.is_complex());
        if k < self.rank {
            k + self.rank
        } else {
            k - self.rank
        }
    }

    pub fn is_holomorphic(&self, k: usize) -> bool {
        k < self.rank
    }

    pub fn generator_name(&self, k: usize) -> String {
        match self.flavor {
            Flavor::Real => format!("e{}", k + 1),
            Flavor::Complex if k < self.rank => format!("w{}", k + 1),
            Flavor::Complex => format!("cw{}", k - self.rank + 1),
        }
    }

    pub fn generator_index(&self, name: &str) -> Option<usize> {
        let (prefix, rest) = match self.flavor {
            Flavor::Real => {
                let p = if name.starts_with('e') || name.starts_with('v') { 1 } else { return None };
                (0, &name[p..])
            }
            Flavor::Complex => {
                if let Some(r) = name.strip_prefix("cw") {
                    (self.rank, r)
                } else {
                    (0, name.strip_prefix('w')?)
                }
            }
        };
        let k: usize = rest.parse().ok()?;
        (k >= 1 && k <= self.rank).then_some(prefix + k - 1)
    }
}

impl fmt::Display for Frame {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.flavor {
            Flavor::Real => write!(f, "real {}", self.rank),
            Flavor::Complex => write!(f, "complex {}", self.rank),
        }
    }
}

pub fn same_frame(a: &FrameRef, b: &FrameRef) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

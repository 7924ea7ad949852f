use std::fmt;

/// Which quadrant of the `[[A, B], [C, -A^T]]` block form a g-coordinate
/// lives in. Only `A`, `B` and `C` carry independent coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Quadrant {
    A,
    B,
    C,
}

/// An independent coordinate of a generic element of so(2N).
///
/// Ordering is row-major over the ambient `2N x 2N` grid, which does not
/// depend on `N`: top-half rows come first, and within a row the `A` column
/// block precedes the `B` block.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Coord {
    pub quadrant: Quadrant,
    /// 1-based.
    pub row: u16,
    /// 1-based.
    pub col: u16,
}

impl Coord {
    fn sort_key(&self) -> (u8, u16, u8, u16) {
        match self.quadrant {
            Quadrant::A => (0, self.row, 0, self.col),
            Quadrant::B => (0, self.row, 1, self.col),
            Quadrant::C => (1, self.row, 0, self.col),
        }
    }

    /// Largest 1-based block index this coordinate touches.
    pub fn max_index(&self) -> usize {
        self.row.max(self.col) as usize
    }
}

impl PartialOrd for Coord {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Coord {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.sort_key().cmp(&other.sort_key())
    }
}

/// Variable identifiers. The derived order `S < T < Lambda < G(..)` is the
/// variable order used by the graded-lex monomial order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum VarId {
    S,
    T,
    Lambda,
    G(Coord),
}

impl VarId {
    /// `A[i, j]`, any `i, j >= 1`.
    pub fn a(row: usize, col: usize) -> Self {
        VarId::G(Coord {
            quadrant: Quadrant::A,
            row: row as u16,
            col: col as u16,
        })
    }

    /// `B[i, j]` with `i < j`.
    pub fn b(row: usize, col: usize) -> Self {
        debug_assert!(row < col, "B[{row},{col}] is not canonical");
        VarId::G(Coord {
            quadrant: Quadrant::B,
            row: row as u16,
            col: col as u16,
        })
    }

    /// `C[i, j]` with `i < j`.
    pub fn c(row: usize, col: usize) -> Self {
        debug_assert!(row < col, "C[{row},{col}] is not canonical");
        VarId::G(Coord {
            quadrant: Quadrant::C,
            row: row as u16,
            col: col as u16,
        })
    }

    pub fn is_pencil_var(&self) -> bool {
        matches!(self, VarId::S | VarId::T | VarId::Lambda)
    }

    pub fn coord(&self) -> Option<Coord> {
        match self {
            VarId::G(c) => Some(*c),
            _ => None,
        }
    }
}

impl fmt::Display for VarId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VarId::S => f.write_str("s"),
            VarId::T => f.write_str("t"),
            VarId::Lambda => f.write_str("l"),
            VarId::G(c) => {
                let q = match c.quadrant {
                    Quadrant::A => 'A',
                    Quadrant::B => 'B',
                    Quadrant::C => 'C',
                };
                write!(f, "{q}[{},{}]", c.row, c.col)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_is_row_major() {
        // row 1: A[1,*] then B[1,*]; row 2 after; C rows last.
        let mut v = vec![
            VarId::c(1, 2),
            VarId::a(2, 1),
            VarId::b(1, 2),
            VarId::a(1, 2),
            VarId::Lambda,
            VarId::S,
            VarId::T,
        ];
        v.sort();
        assert_eq!(
            v,
            vec![
                VarId::S,
                VarId::T,
                VarId::Lambda,
                VarId::a(1, 2),
                VarId::b(1, 2),
                VarId::a(2, 1),
                VarId::c(1, 2),
            ]
        );
    }

    #[test]
    fn display() {
        assert_eq!(VarId::a(2, 1).to_string(), "A[2,1]");
        assert_eq!(VarId::b(1, 3).to_string(), "B[1,3]");
        assert_eq!(VarId::Lambda.to_string(), "l");
    }
}

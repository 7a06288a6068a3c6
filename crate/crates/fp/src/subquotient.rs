use crate::PrimeField;

/// A subquotient span(cycles)/span(boundaries) of an ambient F_p^n.
///
/// `reps` are cycle vectors completing a basis of span(boundaries) to a basis
/// of span(cycles); their classes form a basis of the subquotient. They are
/// chosen deterministically by scanning the given cycles in order and keeping
/// each one that enlarges the span.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subquotient {
    pub dim: usize,
    pub reps: Vec<Vec<u32>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SubquotientError {
    /// A boundary vector (by index into the input list) lies outside the
    /// span of the cycles.
    BoundaryOutsideCycles { index: usize },
    /// Input vectors disagree on ambient dimension.
    DimensionMismatch { expected: usize, got: usize },
}

impl std::fmt::Display for SubquotientError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SubquotientError::BoundaryOutsideCycles { index } => {
                write!(f, "boundary vector #{index} is not in the span of the cycles")
            }
            SubquotientError::DimensionMismatch { expected, got } => {
                write!(f, "ambient dimension mismatch: expected {expected}, got {got}")
            }
        }
    }
}

impl std::error::Error for SubquotientError {}

/// Incrementally maintained echelon basis: rows normalized to pivot 1,
/// sorted by pivot column. Insertion reduces against existing rows first, so
/// each insertion costs one pass over the current basis.
pub struct Echelon {
    field: PrimeField,
    /// (pivot column, row) pairs sorted by pivot column.
    rows: Vec<(usize, Vec<u32>)>,
}

impl Echelon {
    pub fn new(field: PrimeField) -> Self {
        Echelon { field, rows: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduce `v` against the basis in place; the result is zero iff `v` was
    /// in the span.
    pub fn reduce(&self, v: &mut [u32]) {
        let f = self.field;
        for (pivot, row) in &self.rows {
            let factor = v[*pivot];
            if factor != 0 {
                for (x, &r) in v.iter_mut().zip(row.iter()) {
                    *x = f.sub(*x, f.mul(factor, r));
                }
            }
        }
    }

    pub fn contains(&self, v: &[u32]) -> bool {
        let mut v = v.to_vec();
        self.reduce(&mut v);
        v.iter().all(|&x| x == 0)
    }

    /// Insert a vector; returns true when the rank grew.
    pub fn insert(&mut self, v: &[u32]) -> bool {
        let f = self.field;
        let mut v = v.to_vec();
        self.reduce(&mut v);
        match v.iter().position(|&x| x != 0) {
            None => false,
            Some(pivot) => {
                let inv = f.inv(v[pivot]);
                if inv != 1 {
                    for x in v.iter_mut() {
                        *x = f.mul(*x, inv);
                    }
                }
                let at = self.rows.partition_point(|(p, _)| *p < pivot);
                self.rows.insert(at, (pivot, v));
                true
            }
        }
    }
}

/// Dimension and representatives of span(cycles)/span(boundaries).
///
/// Precondition (checked): every boundary lies in the span of the cycles.
pub fn subquotient(
    field: PrimeField,
    cycles: &[Vec<u32>],
    boundaries: &[Vec<u32>],
    ambient: usize,
) -> Result<Subquotient, SubquotientError> {
    for v in cycles.iter().chain(boundaries) {
        if v.len() != ambient {
            return Err(SubquotientError::DimensionMismatch { expected: ambient, got: v.len() });
        }
    }
    let mut cycle_span = Echelon::new(field);
    for c in cycles {
        cycle_span.insert(c);
    }
    for (i, b) in boundaries.iter().enumerate() {
        if !cycle_span.contains(b) {
            return Err(SubquotientError::BoundaryOutsideCycles { index: i });
        }
    }
    let mut span = Echelon::new(field);
    for b in boundaries {
        span.insert(b);
    }
    let boundary_rank = span.rank();

    // Extend the boundary span by cycles, in input order, keeping each cycle
    // that enlarges it.
    let mut reps = Vec::new();
    for c in cycles {
        if span.insert(c) {
            reps.push(c.clone());
        }
    }
    debug_assert_eq!(span.rank(), cycle_span.rank());
    Ok(Subquotient { dim: cycle_span.rank() - boundary_rank, reps })
}

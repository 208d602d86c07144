//! Exact rational linear algebra: canonical subspaces and a small
//! Fourier-Motzkin solver for Chebyshev distances and cone feasibility.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::vector::IntVector;

/// Arbitrary-precision rational, always in reduced form with positive
/// denominator.
pub type Rational = num_rational::BigRational;

#[cfg(test)]
pub(crate) fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// A linear subspace of `Q^d`, stored as the reduced row echelon basis.
/// Pivot columns are strictly increasing, every pivot entry is 1 and is the
/// only nonzero entry of its column, so equal subspaces compare equal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subspace {
    ambient: usize,
    rows: Vec<Vec<Rational>>,
}

impl Subspace {
    pub fn zero(ambient: usize) -> Self {
        Subspace { ambient, rows: Vec::new() }
    }

    pub fn from_rational_rows(ambient: usize, rows: Vec<Vec<Rational>>) -> Self {
        for r in &rows {
            assert_eq!(r.len(), ambient, "row length mismatch");
        }
        Subspace { ambient, rows: rref(rows) }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// The canonical reduced-row-echelon basis.
    pub fn basis(&self) -> &[Vec<Rational>] {
        &self.rows
    }

    /// The basis rows scaled to primitive integer vectors.
    pub fn basis_integer(&self) -> Vec<IntVector> {
        self.rows.iter().map(|r| integerize(r)).collect()
    }

    /// Union of the supports of all basis rows: the coordinates on which the
    /// subspace is nonzero.
    pub fn support(&self) -> Vec<usize> {
        let mut in_support = alloc::vec![false; self.ambient];
        for r in &self.rows {
            for (i, x) in r.iter().enumerate() {
                if !x.is_zero() {
                    in_support[i] = true;
                }
            }
        }
        (0..self.ambient).filter(|&i| in_support[i]).collect()
    }
}

/// Scales a rational vector to the smallest integer vector on the same ray,
/// keeping the sign of the leading nonzero entry.
pub fn integerize(row: &[Rational]) -> IntVector {
    let mut denom_lcm = BigInt::one();
    for x in row {
        denom_lcm = denom_lcm.lcm(x.denom());
    }
    let ints: Vec<BigInt> = row
        .iter()
        .map(|x| x.numer() * (&denom_lcm / x.denom()))
        .collect();
    IntVector::new(ints).primitive()
}

fn rref(mut rows: Vec<Vec<Rational>>) -> Vec<Vec<Rational>> {
    let ambient = rows.first().map_or(0, Vec::len);
    let mut pivot_row = 0;
    for col in 0..ambient {
        let Some(found) = (pivot_row..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(pivot_row, found);
        let inv = rows[pivot_row][col].clone();
        for x in rows[pivot_row].iter_mut() {
            *x = &*x / &inv;
        }
        for r in 0..rows.len() {
            if r != pivot_row && !rows[r][col].is_zero() {
                let factor = rows[r][col].clone();
                for c in 0..ambient {
                    let delta = &rows[pivot_row][c] * &factor;
                    rows[r][c] = &rows[r][c] - delta;
                }
            }
        }
        pivot_row += 1;
        if pivot_row == rows.len() {
            break;
        }
    }
    rows.truncate(pivot_row);
    rows
}

pub(crate) fn to_rational_row(v: &IntVector) -> Vec<Rational> {
    v.entries().iter().cloned().map(Rational::from_integer).collect()
}

/// The span of a set of integer vectors, as a canonical subspace of
/// `Q^ambient`. All vectors must have dimension `ambient`.
pub fn span_basis(ambient: usize, vectors: &[IntVector]) -> Subspace {
    let rows = vectors
        .iter()
        .inspect(|v| assert_eq!(v.dim(), ambient, "dimension mismatch"))
        .map(to_rational_row)
        .collect();
    Subspace { ambient, rows: rref(rows) }
}

fn reduce_against_basis(v: &IntVector, s: &Subspace) -> (Vec<Rational>, Vec<Rational>) {
    assert_eq!(v.dim(), s.ambient, "dimension mismatch");
    let mut residual = to_rational_row(v);
    let mut coeffs = Vec::with_capacity(s.rows.len());
    for row in &s.rows {
        let pivot = row.iter().position(|x| x.is_one()).expect("rref row has a pivot");
        let c = residual[pivot].clone();
        if !c.is_zero() {
            for i in 0..residual.len() {
                let delta = &row[i] * &c;
                residual[i] = &residual[i] - delta;
            }
        }
        coeffs.push(c);
    }
    (coeffs, residual)
}

/// Whether `v` lies in the subspace.
pub fn in_span(v: &IntVector, s: &Subspace) -> bool {
    let (_, residual) = reduce_against_basis(v, s);
    residual.iter().all(Zero::is_zero)
}

/// The coordinates of `v` in the canonical basis of `s`, if `v` lies in `s`.
pub fn coordinates(v: &IntVector, s: &Subspace) -> Option<Vec<Rational>> {
    let (coeffs, residual) = reduce_against_basis(v, s);
    residual.iter().all(Zero::is_zero).then_some(coeffs)
}

/// The exact Chebyshev (maximum-norm) distance from `v` to the subspace:
/// `min { ||v - w||_inf : w in s }`, solved by Fourier-Motzkin elimination.
pub fn chebyshev_distance_to_span(v: &IntVector, s: &Subspace) -> Rational {
    assert_eq!(v.dim(), s.ambient, "dimension mismatch");
    // Variables: lambda_1..lambda_r, then t. Constraints per coordinate i:
    //   sum_j lambda_j b_j(i) + t >= v(i)
    //  -sum_j lambda_j b_j(i) + t >= -v(i)
    let r = s.rank();
    let mut sys = LinearSystem::new(r + 1);
    for i in 0..s.ambient {
        let vi = Rational::from_integer(v[i].clone());
        let mut plus = alloc::vec![Rational::zero(); r + 1];
        let mut minus = alloc::vec![Rational::zero(); r + 1];
        for (j, row) in s.rows.iter().enumerate() {
            plus[j] = row[i].clone();
            minus[j] = -row[i].clone();
        }
        plus[r] = Rational::one();
        minus[r] = Rational::one();
        sys.add_ge(plus, vi.clone());
        sys.add_ge(minus, -vi);
    }
    for j in 0..r {
        sys = sys.eliminate(j);
    }
    // Only t remains; the projection is an interval [dist, inf).
    let mut best = Rational::zero();
    for (coeffs, rhs) in &sys.constraints {
        let a = &coeffs[r];
        if a.is_positive() {
            let bound = rhs / a;
            if bound > best {
                best = bound;
            }
        }
    }
    best
}

/// A conjunction of linear constraints `coeffs . x >= rhs` over rationals,
/// with Fourier-Motzkin variable elimination. Exact and complete, intended
/// for the small systems this crate produces.
pub(crate) struct LinearSystem {
    num_vars: usize,
    constraints: Vec<(Vec<Rational>, Rational)>,
    infeasible: bool,
}

impl LinearSystem {
    pub(crate) fn new(num_vars: usize) -> Self {
        LinearSystem { num_vars, constraints: Vec::new(), infeasible: false }
    }

    pub(crate) fn add_ge(&mut self, coeffs: Vec<Rational>, rhs: Rational) {
        assert_eq!(coeffs.len(), self.num_vars);
        self.push_normalized(coeffs, rhs);
    }

    fn push_normalized(&mut self, mut coeffs: Vec<Rational>, mut rhs: Rational) {
        if let Some(lead) = coeffs.iter().find(|c| !c.is_zero()).cloned() {
            let scale = lead.abs();
            for c in coeffs.iter_mut() {
                *c = &*c / &scale;
            }
            rhs = rhs / scale;
            self.constraints.push((coeffs, rhs));
        } else if rhs.is_positive() {
            // 0 >= rhs > 0: contradiction.
            self.infeasible = true;
        }
        // All-zero rows with rhs <= 0 are vacuous and dropped.
    }

    /// Projects the variable away, keeping the feasible region of the rest.
    pub(crate) fn eliminate(self, var: usize) -> LinearSystem {
        let mut out = LinearSystem {
            num_vars: self.num_vars,
            constraints: Vec::new(),
            infeasible: self.infeasible,
        };
        let mut lower = Vec::new(); // coeff > 0: bounds var from below
        let mut upper = Vec::new(); // coeff < 0: bounds var from above
        for (coeffs, rhs) in self.constraints {
            if coeffs[var].is_positive() {
                lower.push((coeffs, rhs));
            } else if coeffs[var].is_negative() {
                upper.push((coeffs, rhs));
            } else {
                out.push_normalized(coeffs, rhs);
            }
        }
        for (lc, lb) in &lower {
            for (uc, ub) in &upper {
                // lc[var] > 0 > uc[var]; the combination cancels var.
                let lscale = -uc[var].clone();
                let uscale = lc[var].clone();
                let coeffs: Vec<Rational> = (0..self.num_vars)
                    .map(|i| &lc[i] * &lscale + &uc[i] * &uscale)
                    .collect();
                let rhs = lb * &lscale + ub * &uscale;
                out.push_normalized(coeffs, rhs);
            }
        }
        out.dedup();
        out
    }

    fn dedup(&mut self) {
        let mut seen = BTreeSet::new();
        self.constraints.retain(|c| seen.insert(c.clone()));
    }

    /// Whether the system has a rational solution, decided by eliminating
    /// every variable. Variables with fewer bound pairs go first to keep the
    /// intermediate systems small.
    pub(crate) fn is_feasible(mut self) -> bool {
        let mut remaining: Vec<usize> = (0..self.num_vars).collect();
        while !remaining.is_empty() {
            if self.infeasible {
                return false;
            }
            let (pos, &var) = remaining
                .iter()
                .enumerate()
                .min_by_key(|(_, &v)| {
                    let lows = self.constraints.iter().filter(|(c, _)| c[v].is_positive()).count();
                    let highs = self.constraints.iter().filter(|(c, _)| c[v].is_negative()).count();
                    lows * highs
                })
                .unwrap();
            remaining.swap_remove(pos);
            self = self.eliminate(var);
        }
        !self.infeasible
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn span_is_canonical_and_order_independent() {
        let a = IntVector::from_i64(&[1, 0, 1]);
        let b = IntVector::from_i64(&[0, 1, 1]);
        let c = IntVector::from_i64(&[1, 1, 2]); // a + b
        let s1 = span_basis(3, &[a.clone(), b.clone(), c.clone()]);
        let s2 = span_basis(3, &[c, b.clone(), a.clone()]);
        assert_eq!(s1, s2);
        assert_eq!(s1.rank(), 2);
        assert!(in_span(&IntVector::from_i64(&[2, -1, 1]), &s1));
        assert!(!in_span(&IntVector::from_i64(&[0, 0, 1]), &s1));
    }

    #[test]
    fn coordinates_recompose() {
        let s = span_basis(3, &[IntVector::from_i64(&[2, 0, 2]), IntVector::from_i64(&[0, 3, 3])]);
        let v = IntVector::from_i64(&[4, -3, 1]);
        let coeffs = coordinates(&v, &s).unwrap();
        // Recompose sum coeffs_j * basis_j and compare.
        let mut recomposed = alloc::vec![Rational::zero(); 3];
        for (c, row) in coeffs.iter().zip(s.basis()) {
            for i in 0..3 {
                recomposed[i] = &recomposed[i] + c * &row[i];
            }
        }
        let target = to_rational_row(&v);
        assert_eq!(recomposed, target);
        assert_eq!(coordinates(&IntVector::from_i64(&[0, 0, 1]), &s), None);
    }

    #[test]
    fn chebyshev_distance_examples() {
        // span{(1,0,1),(0,1,1)}; v=(5,5,9): residual sum r1+r2-r3 = 1 is
        // invariant, so the distance is 1/3, attained at lambda=(14/3,14/3).
        let s = span_basis(3, &[IntVector::from_i64(&[1, 0, 1]), IntVector::from_i64(&[0, 1, 1])]);
        let d = chebyshev_distance_to_span(&IntVector::from_i64(&[5, 5, 9]), &s);
        assert_eq!(d, Rational::new(BigInt::from(1), BigInt::from(3)));

        // Points in the span have distance zero.
        assert_eq!(
            chebyshev_distance_to_span(&IntVector::from_i64(&[3, 4, 7]), &s),
            Rational::zero()
        );

        // Zero subspace: distance is the norm.
        let z = Subspace::zero(2);
        assert_eq!(
            chebyshev_distance_to_span(&IntVector::from_i64(&[-7, 4]), &z),
            rat(7)
        );
    }

    #[test]
    fn feasibility_solver() {
        // x >= 1, y >= 1, x + y <= 1 is infeasible.
        let mut sys = LinearSystem::new(2);
        sys.add_ge(vec![rat(1), rat(0)], rat(1));
        sys.add_ge(vec![rat(0), rat(1)], rat(1));
        sys.add_ge(vec![rat(-1), rat(-1)], rat(-1));
        assert!(!sys.is_feasible());

        // Loosening the cap makes it feasible.
        let mut sys = LinearSystem::new(2);
        sys.add_ge(vec![rat(1), rat(0)], rat(1));
        sys.add_ge(vec![rat(0), rat(1)], rat(1));
        sys.add_ge(vec![rat(-1), rat(-1)], rat(-2));
        assert!(sys.is_feasible());
    }

    #[test]
    fn integerize_scales_to_primitive() {
        let row = vec![Rational::new(BigInt::from(1), BigInt::from(2)), rat(0), Rational::new(BigInt::from(3), BigInt::from(4))];
        assert_eq!(integerize(&row), IntVector::from_i64(&[2, 0, 3]));
    }
}

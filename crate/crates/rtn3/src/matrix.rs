//! Dense complex matrices for few-qubit density operators.
//!
//! Everything here is sized for dimensions 2, 4 and 8; no attempt is made at
//! sparse storage or large-n scaling. Eigenvalues come from a cyclic Jacobi
//! iteration with complex (phase-carrying) rotations, which at these sizes is
//! simple, robust and more than fast enough for dense parameter sweeps.

use num_complex::Complex64;

use crate::{Error, Result};

/// Hermiticity tolerance for density matrices: max entry of |M - M†|.
pub const HERMITICITY_TOL: f64 = 1e-12;
/// Unit-trace tolerance for density matrices.
pub const TRACE_TOL: f64 = 1e-12;
/// Eigenvalues of a density matrix in [-PSD_CLAMP, 0) are treated as harmless
/// rounding and clamped to 0 for entropies; anything below is a hard error.
pub const PSD_CLAMP: f64 = 1e-10;
/// Off-diagonal Frobenius norm at which the Jacobi iteration stops.
const JACOBI_TOL: f64 = 1e-13;

/// One qubit of the three-qubit register. A is the most significant basis
/// bit: basis index i corresponds to |a b c⟩ with i = 4a + 2b + c.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Qubit {
    A,
    B,
    C,
}

impl Qubit {
    pub const ALL: [Qubit; 3] = [Qubit::A, Qubit::B, Qubit::C];

    /// Position from the most significant end: A → 0, B → 1, C → 2.
    pub fn position(self) -> usize {
        match self {
            Qubit::A => 0,
            Qubit::B => 1,
            Qubit::C => 2,
        }
    }

    /// The two other qubits, in ascending order.
    pub fn others(self) -> [Qubit; 2] {
        match self {
            Qubit::A => [Qubit::B, Qubit::C],
            Qubit::B => [Qubit::A, Qubit::C],
            Qubit::C => [Qubit::A, Qubit::B],
        }
    }
}

/// Square complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    entries: Vec<Complex64>,
}

impl ComplexMatrix {
    /// Zero matrix of the given dimension.
    pub fn zeros(dim: usize) -> Self {
        ComplexMatrix {
            dim,
            entries: vec![Complex64::ZERO; dim * dim],
        }
    }

    /// Identity matrix.
    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = Complex64::ONE;
        }
        m
    }

    /// Build from a row-major slice of entries (length must be dim²).
    pub fn from_rows(dim: usize, entries: &[Complex64]) -> Self {
        assert_eq!(entries.len(), dim * dim, "entry count must be dim^2");
        ComplexMatrix {
            dim,
            entries: entries.to_vec(),
        }
    }

    /// Rank-1 projector |v⟩⟨v| from a state vector.
    pub fn projector(v: &[Complex64]) -> Self {
        let dim = v.len();
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            for j in 0..dim {
                m[(i, j)] = v[i] * v[j].conj();
            }
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    /// Conjugate transpose.
    pub fn dagger(&self) -> Self {
        let mut m = Self::zeros(self.dim);
        for i in 0..self.dim {
            for j in 0..self.dim {
                m[(i, j)] = self[(j, i)].conj();
            }
        }
        m
    }

    /// Plain transpose (no conjugation).
    pub fn transpose(&self) -> Self {
        let mut m = Self::zeros(self.dim);
        for i in 0..self.dim {
            for j in 0..self.dim {
                m[(i, j)] = self[(j, i)];
            }
        }
        m
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim, "dimension mismatch in mul");
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                if a == Complex64::ZERO {
                    continue;
                }
                for j in 0..n {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim, "dimension mismatch in add");
        let mut out = self.clone();
        for (x, y) in out.entries.iter_mut().zip(&other.entries) {
            *x += y;
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim, "dimension mismatch in sub");
        let mut out = self.clone();
        for (x, y) in out.entries.iter_mut().zip(&other.entries) {
            *x -= y;
        }
        out
    }

    pub fn scale(&self, s: f64) -> Self {
        let mut out = self.clone();
        for x in out.entries.iter_mut() {
            *x *= s;
        }
        out
    }

    /// Largest entrywise |self - other|.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.dim, other.dim, "dimension mismatch in max_abs_diff");
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(x, y)| (x - y).norm())
            .fold(0.0, f64::max)
    }

    /// Largest entry of |M - M†|; zero for exactly Hermitian matrices.
    pub fn hermiticity_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.dim {
            for j in i..self.dim {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }

    /// ⟨v|M|v⟩ for a state vector of matching length.
    pub fn expectation(&self, v: &[Complex64]) -> Complex64 {
        assert_eq!(v.len(), self.dim, "vector length mismatch in expectation");
        let mut acc = Complex64::ZERO;
        for i in 0..self.dim {
            for j in 0..self.dim {
                acc += v[i].conj() * self[(i, j)] * v[j];
            }
        }
        acc
    }

    /// Relabel qubits of an 8×8 operator: the qubit at position k moves to
    /// position `perm[k]`, so `perm = [1, 0, 2]` swaps A and B and
    /// `perm = [2, 0, 1]` sends A to the least significant slot.
    pub fn permute_qubits(&self, perm: [usize; 3]) -> Self {
        assert_eq!(self.dim, 8, "qubit permutation needs an 8x8 matrix");
        let map = |i: usize| -> usize {
            let bits = [(i >> 2) & 1, (i >> 1) & 1, i & 1];
            (bits[perm[0]] << 2) | (bits[perm[1]] << 1) | bits[perm[2]]
        };
        let mut out = Self::zeros(8);
        for i in 0..8 {
            for j in 0..8 {
                out[(i, j)] = self[(map(i), map(j))];
            }
        }
        out
    }
}

impl std::ops::Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.entries[i * self.dim + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.entries[i * self.dim + j]
    }
}

/// Tensor product with `a` on the most significant factor.
pub fn kronecker(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let (da, db) = (a.dim(), b.dim());
    let mut out = ComplexMatrix::zeros(da * db);
    for ia in 0..da {
        for ja in 0..da {
            let f = a[(ia, ja)];
            if f == Complex64::ZERO {
                continue;
            }
            for ib in 0..db {
                for jb in 0..db {
                    out[(ia * db + ib, ja * db + jb)] = f * b[(ib, jb)];
                }
            }
        }
    }
    out
}

/// A state operator: Hermitian, unit trace, positive semidefinite up to the
/// clamping tolerance. Positivity is enforced where it matters (entropies)
/// rather than at construction, so Monte Carlo means and exact formula output
/// go through the same cheap validation.
#[derive(Debug, Clone)]
pub struct DensityMatrix {
    m: ComplexMatrix,
}

impl DensityMatrix {
    /// Validate Hermiticity (1e-12 entrywise) and unit trace (1e-12).
    pub fn new(m: ComplexMatrix) -> Result<Self> {
        if !matches!(m.dim(), 2 | 4 | 8) {
            return Err(Error::InvalidArgument(format!(
                "density matrix dimension must be 2, 4 or 8, got {}",
                m.dim()
            )));
        }
        let herm = m.hermiticity_defect();
        if herm > HERMITICITY_TOL {
            return Err(Error::InvalidArgument(format!(
                "matrix is not Hermitian: max |M - M†| = {herm:.3e}"
            )));
        }
        let tr = m.trace();
        if (tr.re - 1.0).abs() > TRACE_TOL || tr.im.abs() > TRACE_TOL {
            return Err(Error::InvalidArgument(format!(
                "matrix trace is {tr}, expected 1"
            )));
        }
        Ok(DensityMatrix { m })
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.m
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.m
    }

    pub fn dim(&self) -> usize {
        self.m.dim()
    }

    /// Number of qubits (1, 2 or 3).
    pub fn n_qubits(&self) -> usize {
        match self.m.dim() {
            2 => 1,
            4 => 2,
            _ => 3,
        }
    }
}

/// Trace out every qubit not named in `keep` (ascending, nonempty, proper).
///
/// For an 8×8 state `keep` may name one or two qubits; for a 4×4 state the
/// labels A and B address its first and second qubit and only one may be
/// kept. The result keeps the surviving qubits in their original order.
pub fn partial_trace(rho: &DensityMatrix, keep: &[Qubit]) -> Result<DensityMatrix> {
    let n = rho.n_qubits();
    if n == 1 {
        return Err(Error::InvalidArgument(
            "cannot partially trace a single-qubit state".into(),
        ));
    }
    let mut positions: Vec<usize> = keep.iter().map(|q| q.position()).collect();
    positions.dedup();
    if positions.is_empty() || positions.len() >= n {
        return Err(Error::InvalidArgument(format!(
            "keep set must name between 1 and {} qubits",
            n - 1
        )));
    }
    if positions.windows(2).any(|w| w[0] >= w[1]) || positions.iter().any(|&p| p >= n) {
        return Err(Error::InvalidArgument(
            "keep set must be ascending and within the register".into(),
        ));
    }
    let traced: Vec<usize> = (0..n).filter(|p| !positions.contains(p)).collect();
    let out_dim = 1 << positions.len();
    let bit = |i: usize, p: usize| (i >> (n - 1 - p)) & 1;
    let mut out = ComplexMatrix::zeros(out_dim);
    let dim = rho.dim();
    for i in 0..dim {
        for j in 0..dim {
            if traced.iter().any(|&p| bit(i, p) != bit(j, p)) {
                continue;
            }
            let mut ki = 0usize;
            let mut kj = 0usize;
            for (s, &p) in positions.iter().enumerate() {
                let shift = positions.len() - 1 - s;
                ki |= bit(i, p) << shift;
                kj |= bit(j, p) << shift;
            }
            out[(ki, kj)] += rho.matrix()[(i, j)];
        }
    }
    DensityMatrix::new(out)
}

/// Transpose the indices of a single qubit of an 8×8 state.
///
/// The result is Hermitian with unchanged trace but need not be positive,
/// which is exactly the point: its negative eigenvalues certify entanglement
/// across the `sub` | rest cut.
pub fn partial_transpose(rho: &DensityMatrix, sub: Qubit) -> Result<ComplexMatrix> {
    if rho.dim() != 8 {
        return Err(Error::InvalidArgument(
            "partial transpose is defined here for 8x8 states".into(),
        ));
    }
    let bit = 2 - sub.position(); // shift count of the transposed bit
    let mut out = ComplexMatrix::zeros(8);
    for i in 0..8 {
        for j in 0..8 {
            let ib = (i >> bit) & 1;
            let jb = (j >> bit) & 1;
            let i2 = (i & !(1 << bit)) | (jb << bit);
            let j2 = (j & !(1 << bit)) | (ib << bit);
            out[(i2, j2)] = rho.matrix()[(i, j)];
        }
    }
    Ok(out)
}

/// Eigenvalues of a Hermitian matrix, ascending.
///
/// Cyclic Jacobi with complex rotations: each sweep zeroes every off-diagonal
/// pair (p, q) with a unitary that differs from the identity only in rows and
/// columns p, q; the iteration stops once the off-diagonal Frobenius norm
/// drops below 1e-13. Inputs whose Hermiticity defect exceeds 1e-10 are
/// rejected.
pub fn hermitian_eigenvalues(m: &ComplexMatrix) -> Result<Vec<f64>> {
    let defect = m.hermiticity_defect();
    if defect > 1e-10 {
        return Err(Error::InvalidArgument(format!(
            "eigensolver needs a Hermitian matrix: max |M - M†| = {defect:.3e}"
        )));
    }
    let n = m.dim();
    // Work on an exactly Hermitian copy so rounding asymmetry cannot drift.
    let mut a = m.clone();
    for i in 0..n {
        a[(i, i)] = Complex64::new(a[(i, i)].re, 0.0);
        for j in (i + 1)..n {
            let avg = 0.5 * (a[(i, j)] + a[(j, i)].conj());
            a[(i, j)] = avg;
            a[(j, i)] = avg.conj();
        }
    }

    let off = |a: &ComplexMatrix| -> f64 {
        let mut s = 0.0;
        for i in 0..n {
            for j in (i + 1)..n {
                s += a[(i, j)].norm_sqr();
            }
        }
        (2.0 * s).sqrt()
    };

    let mut sweeps = 0;
    while off(&a) > JACOBI_TOL {
        sweeps += 1;
        if sweeps > 100 {
            return Err(Error::Internal(
                "Jacobi eigensolver failed to converge in 100 sweeps".into(),
            ));
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let g = a[(p, q)];
                let gn = g.norm();
                if gn < 1e-300 {
                    a[(p, q)] = Complex64::ZERO;
                    a[(q, p)] = Complex64::ZERO;
                    continue;
                }
                let alpha = a[(p, p)].re;
                let beta = a[(q, q)].re;
                let tau = (beta - alpha) / (2.0 * gn);
                // Smaller-magnitude root of t² - 2τt - 1 = 0 for stability.
                let t = if tau >= 0.0 {
                    -1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                let phase = g / gn; // e^{iφ} of the pivot entry
                // Columns p, q of A·J, rows by Hermiticity.
                for k in 0..n {
                    if k == p || k == q {
                        continue;
                    }
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    let new_kp = c * akp + s * phase.conj() * akq;
                    let new_kq = -s * phase * akp + c * akq;
                    a[(k, p)] = new_kp;
                    a[(p, k)] = new_kp.conj();
                    a[(k, q)] = new_kq;
                    a[(q, k)] = new_kq.conj();
                }
                a[(p, p)] = Complex64::new(alpha + t * gn, 0.0);
                a[(q, q)] = Complex64::new(beta - t * gn, 0.0);
                a[(p, q)] = Complex64::ZERO;
                a[(q, p)] = Complex64::ZERO;
            }
        }
    }

    let mut eigs: Vec<f64> = (0..n).map(|i| a[(i, i)].re).collect();
    eigs.sort_by(|x, y| x.partial_cmp(y).unwrap());
    Ok(eigs)
}

/// Von Neumann entropy S(ρ) = -Σ λ log₂ λ in bits.
///
/// Eigenvalues in [-1e-10, 0) are rounding debris and clamped to zero; any
/// eigenvalue below that window means the input was not a state and is
/// reported as an internal error instead of being silently hidden.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> Result<f64> {
    let eigs = hermitian_eigenvalues(rho.matrix())?;
    entropy_from_eigenvalues(&eigs)
}

/// Entropy of a probability-like eigenvalue list, with the clamping window.
pub(crate) fn entropy_from_eigenvalues(eigs: &[f64]) -> Result<f64> {
    let mut s = 0.0;
    for &lam in eigs {
        if lam < -PSD_CLAMP {
            return Err(Error::Internal(format!(
                "eigenvalue {lam:.3e} below the -1e-10 positivity window"
            )));
        }
        if lam > 0.0 {
            s -= lam * lam.log2();
        }
    }
    // An eigenvalue a hair above 1 (balancing clamped negatives) makes the
    // sum marginally negative; that is rounding, not a real entropy.
    if s < 0.0 {
        if s < -1e-8 {
            return Err(Error::Internal(format!(
                "entropy {s:.3e} is negative beyond rounding tolerance"
            )));
        }
        s = 0.0;
    }
    Ok(s)
}

//! Small dense complex linear algebra: Hermitian eigensolver and helpers.

use ndarray::{Array1, Array2, ArrayView1, ArrayView2};
use num_complex::Complex64 as C64;
use rand::Rng;
use rand_distr::StandardNormal;

pub const ZERO: C64 = C64 { re: 0.0, im: 0.0 };
pub const ONE: C64 = C64 { re: 1.0, im: 0.0 };

/// Off-diagonal Frobenius norm at which Jacobi sweeps stop, relative to ‖A‖_F.
pub const JACOBI_TOL: f64 = 1e-13;
const JACOBI_MAX_SWEEPS: usize = 100;

pub fn adjoint(m: &ArrayView2<C64>) -> Array2<C64> {
    m.t().mapv(|z| z.conj())
}

/// Largest entry of |M − M†|.
pub fn hermitian_deviation(m: &ArrayView2<C64>) -> f64 {
    let n = m.nrows();
    let mut dev: f64 = 0.0;
    for i in 0..n {
        for j in i..n {
            dev = dev.max((m[[i, j]] - m[[j, i]].conj()).norm());
        }
    }
    dev
}

pub fn frobenius(m: &ArrayView2<C64>) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn vec_norm(v: &ArrayView1<C64>) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// ⟨u|v⟩, antilinear in the first argument.
pub fn inner(u: &ArrayView1<C64>, v: &ArrayView1<C64>) -> C64 {
    u.iter().zip(v.iter()).map(|(a, b)| a.conj() * b).sum()
}

/// ⟨v|M|v⟩ without allocating M·v.
pub fn quadratic_form(m: &ArrayView2<C64>, v: &ArrayView1<C64>) -> C64 {
    let n = v.len();
    let mut acc = ZERO;
    for i in 0..n {
        let mut row = ZERO;
        for j in 0..n {
            row += m[[i, j]] * v[j];
        }
        acc += v[i].conj() * row;
    }
    acc
}

/// Eigen-decomposition of a Hermitian matrix.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    /// Ascending.
    pub values: Vec<f64>,
    /// Column `k` is the eigenvector for `values[k]`.
    pub vectors: Array2<C64>,
    pub sweeps: usize,
    pub converged: bool,
}

impl HermitianEigen {
    pub fn vector(&self, k: usize) -> Array1<C64> {
        self.vectors.column(k).to_owned()
    }
}

/// Cyclic Jacobi diagonalization of a Hermitian matrix.
///
/// Each rotation first removes the phase of the pivot `a_pq` and then applies
/// the real symmetric Jacobi rotation, so the composite 2×2 unitary is
/// `[[c, s·e], [−s·ē, c]]` with `e = a_pq/|a_pq|`. Only the Hermitian part of
/// the input is used.
pub fn eigh(m: &ArrayView2<C64>) -> HermitianEigen {
    let n = m.nrows();
    assert_eq!(n, m.ncols(), "eigh needs a square matrix");
    let mut a = Array2::from_shape_fn((n, n), |(i, j)| 0.5 * (m[[i, j]] + m[[j, i]].conj()));
    let mut v = Array2::<C64>::eye(n);
    let scale = frobenius(&a.view()).max(f64::MIN_POSITIVE);

    let off = |a: &Array2<C64>| -> f64 {
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    s += a[[i, j]].norm_sqr();
                }
            }
        }
        s.sqrt()
    };

    let mut sweeps = 0;
    let mut converged = false;
    // one extra sweep after reaching the tolerance
    let mut polish = 1;
    loop {
        let o = off(&a);
        if o <= JACOBI_TOL * scale {
            converged = true;
            if polish == 0 || o == 0.0 {
                break;
            }
            polish -= 1;
        }
        if sweeps >= JACOBI_MAX_SWEEPS {
            break;
        }
        sweeps += 1;
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[[p, q]];
                let mag = apq.norm();
                if mag <= f64::EPSILON * 1e-3 * scale {
                    a[[p, q]] = ZERO;
                    a[[q, p]] = ZERO;
                    continue;
                }
                let e = apq / mag;
                let app = a[[p, p]].re;
                let aqq = a[[q, q]].re;
                let theta = (aqq - app) / (2.0 * mag);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                let jpq = e * s;
                let jqp = -e.conj() * s;

                // A ← A·J
                for k in 0..n {
                    let akp = a[[k, p]];
                    let akq = a[[k, q]];
                    a[[k, p]] = akp * c + akq * jqp;
                    a[[k, q]] = akp * jpq + akq * c;
                }
                // A ← J†·A
                for k in 0..n {
                    let apk = a[[p, k]];
                    let aqk = a[[q, k]];
                    a[[p, k]] = apk * c + aqk * jqp.conj();
                    a[[q, k]] = apk * jpq.conj() + aqk * c;
                }
                a[[p, q]] = ZERO;
                a[[q, p]] = ZERO;
                a[[p, p]] = C64::new(a[[p, p]].re, 0.0);
                a[[q, q]] = C64::new(a[[q, q]].re, 0.0);
                // V ← V·J
                for k in 0..n {
                    let vkp = v[[k, p]];
                    let vkq = v[[k, q]];
                    v[[k, p]] = vkp * c + vkq * jqp;
                    v[[k, q]] = vkp * jpq + vkq * c;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[[i, i]].re.total_cmp(&a[[j, j]].re));
    let values = order.iter().map(|&i| a[[i, i]].re).collect();
    let vectors = Array2::from_shape_fn((n, n), |(r, k)| v[[r, order[k]]]);
    HermitianEigen {
        values,
        vectors,
        sweeps,
        converged,
    }
}

/// Multiplies by a global phase so the largest-magnitude entry is real and
/// positive. Ties go to the lowest index.
pub fn fix_phase(v: &mut Array1<C64>) {
    let mut best = 0;
    let mut best_mag = -1.0;
    for (i, z) in v.iter().enumerate() {
        // tolerance keeps the choice stable against rounding between equal entries
        if z.norm() > best_mag + 1e-12 {
            best = i;
            best_mag = z.norm();
        }
    }
    if best_mag > 0.0 {
        let phase = v[best].conj() / best_mag;
        v.mapv_inplace(|z| z * phase);
    }
}

pub fn random_complex_vector<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Array1<C64> {
    Array1::from_shape_fn(n, |_| {
        C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    })
}

/// Unit vector drawn uniformly from the complex sphere.
pub fn random_unit_vector<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Array1<C64> {
    let v = random_complex_vector(rng, n);
    let norm = vec_norm(&v.view());
    v / C64::from(norm)
}

pub fn random_hermitian<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Array2<C64> {
    let g = Array2::from_shape_fn((n, n), |_| {
        C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    });
    let h = &g + &adjoint(&g.view());
    h.mapv(|z| z * 0.5)
}

/// Haar-ish random unitary from Gram–Schmidt on a complex Gaussian matrix.
pub fn random_unitary<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Array2<C64> {
    let mut u = Array2::from_shape_fn((n, n), |_| {
        C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    });
    for k in 0..n {
        for j in 0..k {
            let proj = inner(&u.column(j), &u.column(k));
            let col_j = u.column(j).to_owned();
            let mut col_k = u.column_mut(k);
            col_k.zip_mut_with(&col_j, |x, y| *x -= proj * y);
        }
        let norm = vec_norm(&u.column(k));
        u.column_mut(k).mapv_inplace(|z| z / norm);
    }
    u
}

#![allow(clippy::excessive_precision)]

use opscale::linalg::{hermitian_eig, unitary_function_of_hermitian, Complex64, ComplexMatrix};
use proptest::prelude::*;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Hermitian 6×6 test matrix defined by a closed formula.
fn formula_matrix(n: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(n, n, |j, k| {
        let (jf, kf) = (j as f64, k as f64);
        let diag = if j == k { jf } else { 0.0 };
        c(
            (jf + 1.0) * (kf + 1.0) / 7.0 + (jf - kf).cos() + diag,
            (0.3 * (jf - kf)).sin() * (jf + kf + 1.0) / 5.0,
        )
    })
}

/// Eigenvalues of `formula_matrix(6)` from a LAPACK Hermitian solver,
/// cross-checked against the roots of the characteristic polynomial.
const FORMULA_EIGENVALUES: [f64; 6] = [
    4.48970139465838969e-01,
    1.76390798968441520e+00,
    3.10231539801642597e+00,
    4.43566361593603009e+00,
    5.91582527022674043e+00,
    1.83333175866705460e+01,
];

#[test]
fn eigenvalues_match_external_solver() {
    let e = hermitian_eig(&formula_matrix(6), 1e-14).unwrap();
    for (got, want) in e.eigenvalues.iter().zip(FORMULA_EIGENVALUES) {
        assert!((got - want).abs() < 1e-8, "{got} vs {want}");
    }
}

/// Cofactor expansion along the first row.
fn determinant(a: &ComplexMatrix) -> Complex64 {
    let n = a.rows();
    if n == 1 {
        return a[(0, 0)];
    }
    let mut total = c(0.0, 0.0);
    for col in 0..n {
        let minor = ComplexMatrix::from_fn(n - 1, n - 1, |i, j| a[(i + 1, if j < col { j } else { j + 1 })]);
        let sign = if col % 2 == 0 { 1.0 } else { -1.0 };
        total += a[(0, col)] * determinant(&minor) * sign;
    }
    total
}

#[test]
fn eigenvalue_product_is_determinant() {
    for n in 1..=4 {
        let a = formula_matrix(6);
        let sub = ComplexMatrix::from_fn(n, n, |i, j| a[(i, j)]);
        let e = hermitian_eig(&sub, 1e-14).unwrap();
        let product: f64 = e.eigenvalues.iter().product();
        let det = determinant(&sub);
        assert!(det.im.abs() < 1e-12);
        assert!((product - det.re).abs() < 1e-9 * det.re.abs().max(1.0), "n={n}");
    }
}

/// Σ_{k≤terms} (−iθG)^k / k!
fn taylor_exponential(g: &ComplexMatrix, theta: f64, terms: usize) -> ComplexMatrix {
    let n = g.rows();
    let step = g.scale(c(0.0, -theta));
    let mut term = ComplexMatrix::identity(n);
    let mut sum = ComplexMatrix::identity(n);
    for k in 1..=terms {
        term = term.matmul(&step).unwrap().scale(c(1.0 / k as f64, 0.0));
        sum = sum.add(&term).unwrap();
    }
    sum
}

#[test]
fn spectral_exponential_matches_taylor_series() {
    let g = ComplexMatrix::from_fn(4, 4, |j, k| {
        let (jf, kf) = (j as f64, k as f64);
        c(0.25 * (jf + kf).cos(), 0.2 * (jf - kf))
    });
    let oracle = taylor_exponential(&g, 0.7, 30);
    let spectral = unitary_function_of_hermitian(&g, 0.7).unwrap();
    assert!(spectral.max_abs_diff(&oracle) < 1e-10);
}

#[test]
fn degenerate_generator_still_matches_taylor_series() {
    // eigenvalues {1, 1, 1, −2}
    let ones = ComplexMatrix::from_fn(4, 4, |_, _| c(0.25, 0.0));
    let g = ComplexMatrix::identity(4).sub(&ones.scale(c(3.0, 0.0))).unwrap();
    let e = hermitian_eig(&g, 1e-14).unwrap();
    assert!((e.eigenvalues[0] + 2.0).abs() < 1e-12);
    let spectral = unitary_function_of_hermitian(&g, 1.3).unwrap();
    assert!(spectral.max_abs_diff(&taylor_exponential(&g, 1.3, 40)) < 1e-10);
}

fn hermitian_strategy(n: usize) -> impl Strategy<Value = ComplexMatrix> {
    prop::collection::vec(-1.0f64..1.0, 2 * n * n).prop_map(move |v| {
        let raw = ComplexMatrix::from_fn(n, n, |i, j| c(v[2 * (i * n + j)], v[2 * (i * n + j) + 1]));
        raw.hermitian_part().unwrap()
    })
}

fn matrix_strategy(n: usize) -> impl Strategy<Value = ComplexMatrix> {
    prop::collection::vec(-1.0f64..1.0, 2 * n * n)
        .prop_map(move |v| ComplexMatrix::from_fn(n, n, |i, j| c(v[2 * (i * n + j)], v[2 * (i * n + j) + 1])))
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn exponential_is_unitary(g in hermitian_strategy(7), theta in -10.0f64..10.0) {
        let m = unitary_function_of_hermitian(&g, theta).unwrap();
        prop_assert!(m.unitarity_residual() < 1e-10);
    }

    #[test]
    fn exponentials_compose(g in hermitian_strategy(6), t1 in -3.0f64..3.0, t2 in -3.0f64..3.0) {
        let a = unitary_function_of_hermitian(&g, t1).unwrap();
        let b = unitary_function_of_hermitian(&g, t2).unwrap();
        let ab = unitary_function_of_hermitian(&g, t1 + t2).unwrap();
        prop_assert!(a.matmul(&b).unwrap().max_abs_diff(&ab) < 1e-9);
    }

    #[test]
    fn decomposition_invariants(a in hermitian_strategy(9)) {
        let e = hermitian_eig(&a, 1e-14).unwrap();
        let v = &e.eigenvectors;
        prop_assert!(v.adjoint().matmul(v).unwrap().max_abs_diff(&ComplexMatrix::identity(9)) < 1e-10);
        let scale = a.max_abs().max(1e-300);
        prop_assert!(a.matmul(v).unwrap().max_abs_diff(&ComplexMatrix::from_fn(9, 9, |i, j| v[(i, j)] * e.eigenvalues[j])) < 1e-9 * scale.max(1.0));
        let sum: f64 = e.eigenvalues.iter().sum();
        prop_assert!((sum - a.trace().re).abs() < 1e-9 * (1.0 + a.trace().re.abs()));
    }

    #[test]
    fn matmul_is_associative(a in matrix_strategy(5), b in matrix_strategy(5), m in matrix_strategy(5)) {
        let left = a.matmul(&b).unwrap().matmul(&m).unwrap();
        let right = a.matmul(&b.matmul(&m).unwrap()).unwrap();
        prop_assert!(left.max_abs_diff(&right) < 1e-10 * left.max_abs().max(1.0));
    }
}

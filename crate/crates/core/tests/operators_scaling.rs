#![allow(clippy::excessive_precision)]

use opscale::bench::{interp_scale, scale_with_method, Method};
use opscale::dft::{dft_matrix, index_grid, IndexScheme};
use opscale::linalg::{hermitian_eig, Complex64, ComplexMatrix, ComplexVector};
use opscale::operators::{coord_matrix, naive_coord_matrix, OperatorSet};
use opscale::scaling::{scaling_matrix, ScalingSpec};
use opscale::signals::TestFunction;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

// Differentiation matrix at N = 4, evaluated by direct summation over the
// frequency labels.
const D4_CENTERED: [[f64; 4]; 4] = [
    [0.0, -2.94079988841201456e-01, 1.72268069040647370e-01, -2.94079988841201401e-01],
    [2.94079988841201456e-01, 0.0, -2.94079988841201456e-01, 1.72268069040647370e-01],
    [-1.72268069040647370e-01, 2.94079988841201456e-01, 0.0, -2.94079988841201456e-01],
    [2.94079988841201401e-01, -1.72268069040647370e-01, 2.94079988841201456e-01, 0.0],
];

const D4_ORDINARY_A: f64 = 1.59154943091895346e-01;
const D4_ORDINARY_B: f64 = 2.25079079039276542e-01;

#[test]
fn d4_centered_is_purely_imaginary() {
    let ops = OperatorSet::build(4, IndexScheme::Centered).unwrap();
    for (i, row) in D4_CENTERED.iter().enumerate() {
        for (j, &im) in row.iter().enumerate() {
            let want = c(0.0, im);
            assert!((ops.d[(i, j)] - want).norm() < 1e-12, "({i},{j})");
        }
    }
}

#[test]
fn d4_ordinary() {
    let (a, b) = (D4_ORDINARY_A, D4_ORDINARY_B);
    // circulant in i − j
    let by_offset = [c(-a, 0.0), c(a, b), c(-a, 0.0), c(a, -b)];
    let ops = OperatorSet::build(4, IndexScheme::Ordinary).unwrap();
    for i in 0..4 {
        for j in 0..4 {
            let want = by_offset[(i + 4 - j) % 4];
            assert!((ops.d[(i, j)] - want).norm() < 1e-12, "({i},{j})");
        }
    }
}

#[test]
fn d_acts_as_derivative_on_gaussian() {
    // g = exp(−πu²), (1/i2π)·g' = i·u·g
    for scheme in IndexScheme::ALL {
        let ops = OperatorSet::build(256, scheme).unwrap();
        let grid = index_grid(256, scheme).unwrap();
        let g: Vec<f64> = grid.coordinates().iter().map(|u| (-std::f64::consts::PI * u * u).exp()).collect();
        let dg = ops.d.mul_vec(&ComplexVector::from_real(&g).unwrap()).unwrap();
        for (k, u) in grid.coordinates().iter().enumerate() {
            let want = c(0.0, u * g[k]);
            assert!((dg[k] - want).norm() < 1e-3, "{scheme} u={u}");
        }
    }
}

#[test]
fn duality_holds_for_every_size() {
    for scheme in IndexScheme::ALL {
        for n in 2..=128 {
            let ops = OperatorSet::build(n, scheme).unwrap();
            assert!(ops.duality_residual() < 1e-10, "{scheme} N={n}");
        }
    }
}

#[test]
fn naive_coordinate_breaks_duality() {
    let grid = index_grid(16, IndexScheme::Ordinary).unwrap();
    let f = dft_matrix(16, IndexScheme::Ordinary).unwrap();
    let d = OperatorSet::build(16, IndexScheme::Ordinary).unwrap().d;
    let fdf = f.matmul(&d).unwrap().matmul(&f.adjoint()).unwrap();
    assert!(naive_coord_matrix(&grid).max_abs_diff(&fdf) > 0.5);
    assert!(coord_matrix(&grid).max_abs_diff(&fdf) < 1e-10);
}

fn matrix(m: f64, n: usize, scheme: IndexScheme) -> ComplexMatrix {
    let ops = OperatorSet::build(n, scheme).unwrap();
    scaling_matrix(&ScalingSpec::new(m, n, scheme).unwrap(), &ops).unwrap()
}

#[test]
fn group_law_and_inverse() {
    for scheme in IndexScheme::ALL {
        for n in [5, 16, 33] {
            let m2 = matrix(2.0, n, scheme);
            let m3 = matrix(3.0, n, scheme);
            let m6 = matrix(6.0, n, scheme);
            assert!(m2.matmul(&m3).unwrap().max_abs_diff(&m6) < 1e-10);
            assert!(m3.matmul(&m2).unwrap().max_abs_diff(&m6) < 1e-10);
            let half = matrix(0.5, n, scheme);
            assert!(half.max_abs_diff(&m2.adjoint()) < 1e-10);
            assert!(m2.matmul(&half).unwrap().max_abs_diff(&ComplexMatrix::identity(n)) < 1e-10);
            assert!(matrix(1.0, n, scheme).max_abs_diff(&ComplexMatrix::identity(n)) < 1e-12);
        }
    }
}

#[test]
fn scaling_spectrum_lies_on_unit_circle() {
    for scheme in IndexScheme::ALL {
        let m = matrix(3.0, 24, scheme);
        assert!(m.unitarity_residual() < 1e-10);
        // M = V·diag(λ)·V† with λ on the unit circle: the Hermitian part
        // (M + M†)/2 has spectrum cos(θ_k) ⊂ [−1, 1].
        let e = hermitian_eig(&m.hermitian_part().unwrap(), 1e-14).unwrap();
        assert!(e.eigenvalues.iter().all(|x| x.abs() <= 1.0 + 1e-10));
    }
}

// Column at position 32 of the N = 64, M = 2 scaling matrix, positions
// 28..=36, from a Padé matrix exponential of the generator.
const DELTA64_CENTERED: [(f64, f64); 9] = [
    (8.27561491857594783e-02, 0.0),
    (-5.55078119074986932e-03, 0.0),
    (-1.58702342159616122e-01, 0.0),
    (1.70662041515944413e-01, 0.0),
    (7.06649182097699335e-01, 0.0),
    (6.30399939815035282e-01, 0.0),
    (8.70449752157899520e-02, 0.0),
    (-1.11827751658535840e-01, 0.0),
    (4.68331152087582345e-02, 0.0),
];

const DELTA64_ORDINARY: [(f64, f64); 9] = [
    (8.08277988504284145e-02, 1.32025687771915035e-02),
    (-7.60581484202876162e-02, -8.48061670837274920e-03),
    (-7.87950029266165780e-02, -8.02557714752979989e-03),
    (4.16231397746357423e-01, 1.33780545623052236e-02),
    (7.73462882249622230e-01, -2.81314126801521398e-07),
    (4.15908663157087410e-01, -1.33662821601662866e-02),
    (-7.85863882906044225e-02, 8.01281602775588860e-03),
    (-7.58717383692675829e-02, 8.45396378764125440e-03),
    (8.04956036256172652e-02, -1.31473687414982790e-02),
];

#[test]
fn kronecker_delta_scaled_by_two() {
    for (scheme, fixture) in [(IndexScheme::Centered, DELTA64_CENTERED), (IndexScheme::Ordinary, DELTA64_ORDINARY)] {
        let grid = index_grid(64, scheme).unwrap();
        let delta = ComplexVector::basis(64, 32).unwrap();
        let out = scale_with_method(Method::Operator, &delta, &grid, 2.0).unwrap();
        for (k, (re, im)) in fixture.iter().enumerate() {
            assert!((out[28 + k] - c(*re, *im)).norm() < 1e-10, "{scheme} position {}", 28 + k);
        }
        assert!((out.norm() - 1.0).abs() < 1e-12);
    }
}

// Band-limited interpolation of a Kronecker delta at position 4, N = 8, M = 2.
const INTERP8_CENTERED: [(f64, f64); 8] = [
    (8.08527229199987596e-02, 0.0),
    (-9.85193279314063863e-02, 0.0),
    (-1.32584710748793411e-01, 0.0),
    (2.15305887279791719e-01, 0.0),
    (6.37643577336145406e-01, 0.0),
    (6.37643577336145406e-01, 0.0),
    (2.15305887279791719e-01, 0.0),
    (-1.32584710748793411e-01, 0.0),
];

const INTERP8_ORDINARY: [(f64, f64); 8] = [
    (0.0, 0.0),
    (-1.32282510442953999e-01, -8.83883476483184327e-02),
    (0.0, 0.0),
    (4.44358230776140173e-01, 8.83883476483184188e-02),
    (7.07106781186547462e-01, 0.0),
    (4.44358230776140173e-01, -8.83883476483184188e-02),
    (0.0, 0.0),
    (-1.32282510442953999e-01, 8.83883476483184327e-02),
];

#[test]
fn interpolated_delta_matches_direct_sum() {
    for (scheme, fixture) in [(IndexScheme::Centered, INTERP8_CENTERED), (IndexScheme::Ordinary, INTERP8_ORDINARY)] {
        let grid = index_grid(8, scheme).unwrap();
        let out = interp_scale(&ComplexVector::basis(8, 4).unwrap(), &grid, 2.0).unwrap();
        for (k, (re, im)) in fixture.iter().enumerate() {
            assert!((out[k] - c(*re, *im)).norm() < 1e-12, "{scheme} position {k}");
        }
    }
}

#[test]
fn interp_identity_at_unit_factor() {
    for scheme in IndexScheme::ALL {
        let grid = index_grid(16, scheme).unwrap();
        let x = TestFunction::ChirpedPulse.sample(&grid);
        let out = interp_scale(&x, &grid, 1.0).unwrap();
        assert!(out.max_abs_diff(&x) < 1e-12);
    }
}

#[test]
fn operator_error_falls_with_n() {
    let function = TestFunction::ChirpedPulse;
    {
        for m in [0.5, 2.0, 3.0] {
            let mut last = f64::INFINITY;
            for n in [64usize, 128, 256] {
                let grid = index_grid(n, IndexScheme::Centered).unwrap();
                let out = scale_with_method(Method::Operator, &function.sample(&grid), &grid, m).unwrap();
                let reference = function.scaled_reference(&grid, m).unwrap();
                let err = opscale::bench::nmse_percent(&reference, &out).unwrap();
                assert!(err < last, "{function:?} M={m} N={n}: {err} after {last}");
                last = err;
            }
        }
    }
}

#[test]
fn invalid_factors_are_rejected() {
    for m in [0.0, -1.0, f64::NAN, f64::INFINITY] {
        assert!(ScalingSpec::new(m, 8, IndexScheme::Centered).is_err());
    }
}

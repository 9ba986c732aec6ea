mod common;

use agp_tensor::rng::{stream_rng, uniform_vec};
use agp_tensor::{Side, Tensor, TensorError};
use common::{assert_all_close, rand_tensor, rng};

#[test]
fn matmul_identity_preserves_input() {
    let mut r = rng(1);
    let x = rand_tensor(&mut r, &[3, 4], -2.0, 2.0);
    let y = Tensor::eye(3).matmul(&x).unwrap();
    assert_all_close(y.data(), x.data(), 0.0, "I·X = X");
}

#[test]
fn matmul_hand_example() {
    let a = Tensor::from_vec(&[2, 2], vec![1.0, 2.0, 3.0, 4.0]).unwrap();
    let b = Tensor::from_vec(&[2, 1], vec![1.0, 1.0]).unwrap();
    let c = a.matmul(&b).unwrap();
    assert_eq!(c.shape(), &[2, 1]);
    assert_all_close(c.data(), &[3.0, 7.0], 0.0, "[[1,2],[3,4]]·[1,1]ᵀ");
}

#[test]
fn matmul_shape_mismatch_names_both_shapes() {
    let a = Tensor::zeros(&[2, 3]);
    let b = Tensor::zeros(&[4, 2]);
    let err = a.matmul(&b).unwrap_err();
    let msg = err.to_string();
    assert!(msg.contains("[2, 3]") && msg.contains("[4, 2]"), "message: {msg}");
}

#[test]
fn matmul_matches_naive_loop() {
    let mut r = rng(2);
    let a = rand_tensor(&mut r, &[4, 5], -1.0, 1.0);
    let b = rand_tensor(&mut r, &[5, 3], -1.0, 1.0);
    let c = a.matmul(&b).unwrap();
    for i in 0..4 {
        for j in 0..3 {
            let mut want = 0.0;
            for k in 0..5 {
                want += a.at2(i, k) * b.at2(k, j);
            }
            assert!((c.at2(i, j) - want).abs() < 1e-12);
        }
    }
}

#[test]
fn conv2d_all_ones_sums_window() {
    let x = Tensor::from_vec(&[1, 1, 3, 3], vec![1.0; 9]).unwrap();
    let w = Tensor::from_vec(&[1, 1, 3, 3], vec![1.0; 9]).unwrap();
    let y = x.conv2d(&w).unwrap();
    assert_eq!(y.shape(), &[1, 1, 1, 1]);
    assert!((y.item() - 9.0).abs() < 1e-15);
}

#[test]
fn conv2d_zero_input_zero_output() {
    let mut r = rng(3);
    let x = Tensor::zeros(&[2, 3, 6, 6]);
    let w = rand_tensor(&mut r, &[4, 3, 3, 3], -1.0, 1.0);
    let y = x.conv2d(&w).unwrap();
    assert_eq!(y.shape(), &[2, 4, 4, 4]);
    assert!(y.data().iter().all(|&v| v == 0.0));
}

#[test]
fn conv2d_channel_mismatch_rejected() {
    let x = Tensor::zeros(&[1, 2, 5, 5]);
    let w = Tensor::zeros(&[1, 3, 3, 3]);
    assert!(matches!(
        x.conv2d(&w),
        Err(TensorError::ShapeMismatch { op: "conv2d", .. })
    ));
}

#[test]
fn conv2d_matches_direct_window_sum() {
    let mut r = rng(4);
    let x = rand_tensor(&mut r, &[2, 2, 5, 6], -1.0, 1.0);
    let w = rand_tensor(&mut r, &[3, 2, 3, 3], -1.0, 1.0);
    let y = x.conv2d(&w).unwrap();
    assert_eq!(y.shape(), &[2, 3, 3, 4]);
    // Independent scalar re-computation of one arbitrary output cell.
    let (b, f, oy, ox) = (1, 2, 1, 3);
    let mut want = 0.0;
    for c in 0..2 {
        for ky in 0..3 {
            for kx in 0..3 {
                let xv = x.data()[((b * 2 + c) * 5 + oy + ky) * 6 + ox + kx];
                let wv = w.data()[((f * 2 + c) * 3 + ky) * 3 + kx];
                want += xv * wv;
            }
        }
    }
    let got = y.data()[((b * 3 + f) * 3 + oy) * 4 + ox];
    assert!((got - want).abs() < 1e-12);
}

#[test]
fn max_pool_rounds_up_and_picks_maxima() {
    // 1×1×3×3: output 2×2 with partial windows on the right/bottom edges.
    let x = Tensor::from_vec(
        &[1, 1, 3, 3],
        vec![1.0, 5.0, 2.0, 0.0, 3.0, 4.0, 9.0, 8.0, 7.0],
    )
    .unwrap();
    let y = x.max_pool2d().unwrap();
    assert_eq!(y.shape(), &[1, 1, 2, 2]);
    assert_all_close(y.data(), &[5.0, 4.0, 9.0, 7.0], 0.0, "pool maxima");

    // 1×1 input survives pooling (single partial window).
    let one = Tensor::from_vec(&[1, 1, 1, 1], vec![42.0]).unwrap();
    assert_all_close(one.max_pool2d().unwrap().data(), &[42.0], 0.0, "1×1 pool");
}

#[test]
fn elementwise_trivial_values() {
    let x = Tensor::from_vec(&[3], vec![-1.0, 0.0, 2.0]).unwrap();
    assert_all_close(x.relu().data(), &[0.0, 0.0, 2.0], 0.0, "relu");
    assert!((Tensor::scalar(0.0).sigmoid().item() - 0.5).abs() < 1e-15);
    assert!((Tensor::scalar(0.0).tanh().item()).abs() < 1e-15);
    assert!((Tensor::scalar(1.0).exp().item() - std::f64::consts::E).abs() < 1e-15);
    assert!((Tensor::scalar(std::f64::consts::E).ln().item() - 1.0).abs() < 1e-15);
    // softplus(0) = ln 2; softplus stays finite and exact for huge inputs.
    assert!((Tensor::scalar(0.0).softplus().item() - std::f64::consts::LN_2).abs() < 1e-15);
    assert!((Tensor::scalar(800.0).softplus().item() - 800.0).abs() < 1e-12);
}

#[test]
fn elementwise_shape_mismatch_rejected() {
    let a = Tensor::zeros(&[2, 2]);
    let b = Tensor::zeros(&[4]);
    assert!(a.add(&b).is_err());
    assert!(a.sub(&b).is_err());
    assert!(a.mul(&b).is_err());
}

#[test]
fn softmax_uniform_on_equal_logits() {
    let x = Tensor::from_vec(&[3], vec![0.0, 0.0, 0.0]).unwrap();
    let y = x.softmax().unwrap();
    assert_all_close(y.data(), &[1.0 / 3.0; 3], 1e-15, "softmax([0,0,0])");
}

#[test]
fn softmax_survives_huge_logits() {
    let x = Tensor::from_vec(&[2], vec![1000.0, 1000.0]).unwrap();
    let y = x.softmax().unwrap();
    assert!(y.data().iter().all(|v| v.is_finite()));
    assert_all_close(y.data(), &[0.5, 0.5], 1e-15, "softmax([1000,1000])");
}

#[test]
fn softmax_rows_sum_to_one() {
    let mut r = rng(5);
    let x = rand_tensor(&mut r, &[6, 7], -30.0, 30.0);
    let y = x.softmax_rows().unwrap();
    for row in y.data().chunks(7) {
        let s: f64 = row.iter().sum();
        assert!((s - 1.0).abs() < 1e-12, "row sum {s}");
        assert!(row.iter().all(|&v| v > 0.0));
    }
}

#[test]
fn log_softmax_agrees_with_log_of_softmax() {
    let mut r = rng(6);
    let x = rand_tensor(&mut r, &[4, 5], -5.0, 5.0);
    let a = x.log_softmax_rows().unwrap();
    let b = x.softmax_rows().unwrap();
    for (la, pb) in a.data().iter().zip(b.data()) {
        assert!((la - pb.ln()).abs() < 1e-12);
    }
}

#[test]
fn softmax_rejects_empty() {
    let x = Tensor::zeros(&[0]);
    assert!(matches!(x.softmax(), Err(TensorError::EmptyInput(_))));
}

#[test]
fn cholesky_identity() {
    let l = Tensor::eye(4).cholesky().unwrap();
    assert_all_close(l.data(), Tensor::eye(4).data(), 0.0, "chol(I) = I");
}

#[test]
fn cholesky_hand_example() {
    let a = Tensor::from_vec(&[2, 2], vec![4.0, 2.0, 2.0, 5.0]).unwrap();
    let l = a.cholesky().unwrap();
    assert_all_close(l.data(), &[2.0, 0.0, 1.0, 2.0], 1e-15, "chol([[4,2],[2,5]])");
}

#[test]
fn cholesky_reports_bad_pivot() {
    let a = Tensor::from_vec(&[2, 2], vec![1.0, 2.0, 2.0, 1.0]).unwrap();
    match a.cholesky() {
        Err(TensorError::NotPositiveDefinite { index, value }) => {
            assert_eq!(index, 1);
            assert!(value <= 0.0);
        }
        other => panic!("expected NotPositiveDefinite, got {other:?}"),
    }
}

#[test]
fn cholesky_reconstructs_spd_matrix() {
    let mut r = rng(7);
    // A = B·Bᵀ + 5I is comfortably positive definite.
    let b = rand_tensor(&mut r, &[5, 5], -1.0, 1.0);
    let a = b
        .matmul(&b.transpose().unwrap())
        .unwrap()
        .add(&Tensor::eye(5).scale(5.0))
        .unwrap();
    let l = a.cholesky().unwrap();
    let back = l.matmul(&l.transpose().unwrap()).unwrap();
    let scale: f64 = a.data().iter().map(|v| v.abs()).fold(0.0, f64::max);
    for (x, y) in back.data().iter().zip(a.data()) {
        assert!((x - y).abs() / scale < 1e-10, "L·Lᵀ ≠ A: {x} vs {y}");
    }
}

#[test]
fn tri_solve_identity_returns_rhs() {
    let mut r = rng(8);
    let b = rand_tensor(&mut r, &[4, 2], -3.0, 3.0);
    let x = Tensor::eye(4).tri_solve(&b, Side::Lower).unwrap();
    assert_all_close(x.data(), b.data(), 0.0, "I·x = b");
}

#[test]
fn tri_solve_hand_example() {
    let l = Tensor::from_vec(&[2, 2], vec![2.0, 0.0, 1.0, 1.0]).unwrap();
    let b = Tensor::from_vec(&[2, 1], vec![2.0, 3.0]).unwrap();
    let x = l.tri_solve(&b, Side::Lower).unwrap();
    assert_all_close(x.data(), &[1.0, 2.0], 1e-15, "forward substitution");
}

#[test]
fn tri_solve_round_trip_both_sides() {
    let mut r = rng(9);
    let mut ld = uniform_vec::<f64>(&mut r, 25, -1.0, 1.0);
    for i in 0..5 {
        for j in i + 1..5 {
            ld[i * 5 + j] = 0.0;
        }
        ld[i * 5 + i] = 1.0 + ld[i * 5 + i].abs();
    }
    let l = Tensor::from_vec(&[5, 5], ld).unwrap();
    let b = rand_tensor(&mut r, &[5, 3], -2.0, 2.0);

    let x = l.tri_solve(&b, Side::Lower).unwrap();
    let back = l.matmul(&x).unwrap();
    assert_all_close(back.data(), b.data(), 1e-10, "L·(L⁻¹b) = b");

    let y = l.tri_solve(&b, Side::Upper).unwrap();
    let back_t = l.transpose().unwrap().matmul(&y).unwrap();
    assert_all_close(back_t.data(), b.data(), 1e-10, "Lᵀ·(L⁻ᵀb) = b");
}

#[test]
fn tri_solve_rejects_zero_diagonal() {
    let l = Tensor::from_vec(&[2, 2], vec![1.0, 0.0, 3.0, 0.0]).unwrap();
    let b = Tensor::zeros(&[2, 1]);
    assert!(matches!(
        l.tri_solve(&b, Side::Lower),
        Err(TensorError::SingularTriangular { index: 1 })
    ));
}

#[test]
fn tri_solve_ignores_upper_storage() {
    // Junk above the diagonal must not affect either side's solution.
    let clean = Tensor::from_vec(&[2, 2], vec![2.0, 0.0, 1.0, 3.0]).unwrap();
    let dirty = Tensor::from_vec(&[2, 2], vec![2.0, 77.0, 1.0, 3.0]).unwrap();
    let b = Tensor::from_vec(&[2, 1], vec![4.0, 5.0]).unwrap();
    for side in [Side::Lower, Side::Upper] {
        let a = clean.tri_solve(&b, side).unwrap();
        let c = dirty.tri_solve(&b, side).unwrap();
        assert_all_close(a.data(), c.data(), 0.0, "upper storage ignored");
    }
}

#[test]
fn reshape_and_gathers() {
    let x = Tensor::from_vec(&[2, 3], vec![1.0, 2.0, 3.0, 4.0, 5.0, 6.0]).unwrap();
    let r = x.reshape(&[3, 2]).unwrap();
    assert_eq!(r.shape(), &[3, 2]);
    assert_all_close(r.data(), x.data(), 0.0, "reshape shares data");
    assert!(x.reshape(&[4, 2]).is_err());

    let g = x.gather_rows(&[1, 0, 1]).unwrap();
    assert_eq!(g.shape(), &[3, 3]);
    assert_all_close(
        g.data(),
        &[4.0, 5.0, 6.0, 1.0, 2.0, 3.0, 4.0, 5.0, 6.0],
        0.0,
        "gather_rows",
    );
    assert!(matches!(
        x.gather_rows(&[2]),
        Err(TensorError::IndexOutOfBounds { .. })
    ));

    let c = x.gather_cols(&[2, 0]).unwrap();
    assert_eq!(c.shape(), &[2, 2]);
    assert_all_close(c.data(), &[3.0, 1.0, 6.0, 4.0], 0.0, "gather_cols");

    let col = x.col(1).unwrap();
    assert_eq!(col.shape(), &[2, 1]);
    assert_all_close(col.data(), &[2.0, 5.0], 0.0, "col");
}

#[test]
fn triangular_and_diag_helpers() {
    let x = Tensor::from_vec(&[2, 2], vec![1.0, 2.0, 3.0, 4.0]).unwrap();
    assert_all_close(
        x.tril_strict().unwrap().data(),
        &[0.0, 0.0, 3.0, 0.0],
        0.0,
        "tril_strict",
    );
    assert_all_close(x.diag_part().unwrap().data(), &[1.0, 4.0], 0.0, "diag_part");
    let v = Tensor::from_vec(&[2], vec![7.0, 8.0]).unwrap();
    assert_all_close(
        v.diag_embed().unwrap().data(),
        &[7.0, 0.0, 0.0, 8.0],
        0.0,
        "diag_embed",
    );
}

#[test]
fn broadcast_helpers() {
    let x = Tensor::from_vec(&[2, 3], vec![0.0; 6]).unwrap();
    let row = Tensor::from_vec(&[3], vec![1.0, 2.0, 3.0]).unwrap();
    let col = Tensor::from_vec(&[2], vec![10.0, 20.0]).unwrap();
    let y = x.add_row(&row).unwrap().add_col(&col).unwrap();
    assert_all_close(
        y.data(),
        &[11.0, 12.0, 13.0, 21.0, 22.0, 23.0],
        0.0,
        "row+col broadcast",
    );

    let img = Tensor::zeros(&[1, 2, 2, 2]);
    let bias = Tensor::from_vec(&[2], vec![1.0, -1.0]).unwrap();
    let z = img.add_chan_bias(&bias).unwrap();
    assert_all_close(
        z.data(),
        &[1.0, 1.0, 1.0, 1.0, -1.0, -1.0, -1.0, -1.0],
        0.0,
        "channel bias",
    );

    let s = Tensor::scalar(2.5);
    let m = x.add_const(2.0).mul_scalar(&s).unwrap();
    assert!(m.data().iter().all(|&v| (v - 5.0).abs() < 1e-15));
}

#[test]
fn reductions() {
    let x = Tensor::from_vec(&[2, 2], vec![1.0, 2.0, 3.0, 4.0]).unwrap();
    assert!((x.sum().item() - 10.0).abs() < 1e-15);
    assert!((x.mean().unwrap().item() - 2.5).abs() < 1e-15);
    let rs = x.row_sums().unwrap();
    assert_eq!(rs.shape(), &[2, 1]);
    assert_all_close(rs.data(), &[3.0, 7.0], 0.0, "row_sums");
    assert!(Tensor::zeros(&[0]).mean().is_err());
}

#[test]
fn rng_streams_are_deterministic_and_disjoint() {
    let a = uniform_vec::<f64>(&mut stream_rng(11, 1), 8, 0.0, 1.0);
    let b = uniform_vec::<f64>(&mut stream_rng(11, 1), 8, 0.0, 1.0);
    let c = uniform_vec::<f64>(&mut stream_rng(11, 2), 8, 0.0, 1.0);
    assert_eq!(a, b, "same (seed, stream) must repeat exactly");
    assert_ne!(a, c, "different streams must diverge");
}

//! Finite-difference verification of every backward pass.

mod common;

use agp_tensor::rng::uniform_vec;
use agp_tensor::{Side, Tensor};
use common::{assert_grad_close, rng, weighted_sum};

fn rand_data(seed: u64, n: usize, lo: f64, hi: f64) -> Vec<f64> {
    uniform_vec(&mut rng(seed), n, lo, hi)
}

#[test]
fn matmul_grad_wrt_both_operands() {
    let a0 = rand_data(21, 20, -1.0, 1.0);
    let b0 = rand_data(22, 15, -1.0, 1.0);
    let b_const = Tensor::from_vec(&[5, 3], b0.clone()).unwrap();
    assert_grad_close(
        &[4, 5],
        a0.clone(),
        |a| a.matmul(&b_const).unwrap().sum(),
        1e-5,
        "matmul dA",
    );
    let a_const = Tensor::from_vec(&[4, 5], a0).unwrap();
    assert_grad_close(
        &[5, 3],
        b0,
        |b| weighted_sum(&a_const.matmul(b).unwrap(), 1),
        1e-5,
        "matmul dB",
    );
}

#[test]
fn transpose_grad() {
    assert_grad_close(
        &[3, 4],
        rand_data(23, 12, -1.0, 1.0),
        |x| weighted_sum(&x.transpose().unwrap(), 2),
        1e-5,
        "transpose",
    );
}

#[test]
fn conv2d_grad_wrt_input_and_filters() {
    let x0 = rand_data(24, 2 * 1 * 6 * 6, -1.0, 1.0);
    let w0 = rand_data(25, 3 * 1 * 3 * 3, -1.0, 1.0);
    let w_const = Tensor::from_vec(&[3, 1, 3, 3], w0.clone()).unwrap();
    assert_grad_close(
        &[2, 1, 6, 6],
        x0.clone(),
        |x| weighted_sum(&x.conv2d(&w_const).unwrap(), 3),
        1e-4,
        "conv2d dX",
    );
    let x_const = Tensor::from_vec(&[2, 1, 6, 6], x0).unwrap();
    assert_grad_close(
        &[3, 1, 3, 3],
        w0,
        |w| weighted_sum(&x_const.conv2d(w).unwrap(), 4),
        1e-4,
        "conv2d dW",
    );
}

#[test]
fn max_pool_grad() {
    assert_grad_close(
        &[1, 2, 5, 5],
        rand_data(26, 50, -1.0, 1.0),
        |x| weighted_sum(&x.max_pool2d().unwrap(), 5),
        1e-5,
        "max_pool2d",
    );
}

#[test]
fn unary_grads() {
    let cases: Vec<(&str, fn(&Tensor) -> Tensor)> = vec![
        ("relu", |x| x.relu()),
        ("sigmoid", |x| x.sigmoid()),
        ("tanh", |x| x.tanh()),
        ("exp", |x| x.exp()),
        ("softplus", |x| x.softplus()),
        ("neg", |x| x.neg()),
        ("scale", |x| x.scale(-1.7)),
        ("add_const", |x| x.add_const(0.3)),
    ];
    for (i, (name, op)) in cases.into_iter().enumerate() {
        assert_grad_close(
            &[7],
            rand_data(30 + i as u64, 7, -2.0, 2.0),
            move |x| weighted_sum(&op(x), 6),
            1e-5,
            name,
        );
    }
    // ln needs positive inputs.
    assert_grad_close(
        &[7],
        rand_data(40, 7, 0.2, 3.0),
        |x| weighted_sum(&x.ln(), 7),
        1e-5,
        "ln",
    );
}

#[test]
fn binary_grads() {
    let b0 = rand_data(41, 12, -1.0, 1.0);
    let b = Tensor::from_vec(&[3, 4], b0).unwrap();
    let cases: Vec<(&str, Box<dyn Fn(&Tensor) -> Tensor>)> = vec![
        ("add lhs", {
            let b = b.clone();
            Box::new(move |x: &Tensor| weighted_sum(&x.add(&b).unwrap(), 8))
        }),
        ("sub lhs", {
            let b = b.clone();
            Box::new(move |x: &Tensor| weighted_sum(&x.sub(&b).unwrap(), 8))
        }),
        ("sub rhs", {
            let b = b.clone();
            Box::new(move |x: &Tensor| weighted_sum(&b.sub(x).unwrap(), 8))
        }),
        ("mul lhs", {
            let b = b.clone();
            Box::new(move |x: &Tensor| weighted_sum(&x.mul(&b).unwrap(), 8))
        }),
    ];
    for (i, (name, f)) in cases.into_iter().enumerate() {
        assert_grad_close(&[3, 4], rand_data(42 + i as u64, 12, -1.0, 1.0), f, 1e-5, name);
    }
}

#[test]
fn softmax_grad() {
    assert_grad_close(
        &[7],
        rand_data(50, 7, -3.0, 3.0),
        |x| weighted_sum(&x.softmax().unwrap(), 9),
        1e-5,
        "softmax 7-vector",
    );
    assert_grad_close(
        &[3, 4],
        rand_data(51, 12, -3.0, 3.0),
        |x| weighted_sum(&x.softmax_rows().unwrap(), 10),
        1e-5,
        "softmax_rows",
    );
    assert_grad_close(
        &[3, 4],
        rand_data(52, 12, -3.0, 3.0),
        |x| weighted_sum(&x.log_softmax_rows().unwrap(), 11),
        1e-5,
        "log_softmax_rows",
    );
}

#[test]
fn reduce_and_broadcast_grads() {
    assert_grad_close(
        &[3, 4],
        rand_data(53, 12, -1.0, 1.0),
        |x| x.mean().unwrap(),
        1e-5,
        "mean",
    );
    assert_grad_close(
        &[3, 4],
        rand_data(54, 12, -1.0, 1.0),
        |x| weighted_sum(&x.row_sums().unwrap(), 12),
        1e-5,
        "row_sums",
    );

    let m0 = rand_data(55, 12, -1.0, 1.0);
    let m = Tensor::from_vec(&[3, 4], m0.clone()).unwrap();
    assert_grad_close(
        &[4],
        rand_data(56, 4, -1.0, 1.0),
        {
            let m = m.clone();
            move |r| weighted_sum(&m.add_row(r).unwrap(), 13)
        },
        1e-5,
        "add_row d(row)",
    );
    assert_grad_close(
        &[3],
        rand_data(57, 3, -1.0, 1.0),
        {
            let m = m.clone();
            move |c| weighted_sum(&m.add_col(c).unwrap(), 14)
        },
        1e-5,
        "add_col d(col)",
    );
    assert_grad_close(
        &[3, 4],
        m0,
        |x| {
            let r = Tensor::from_vec(&[4], vec![0.1, -0.2, 0.3, 0.4]).unwrap();
            weighted_sum(&x.add_row(&r).unwrap(), 15)
        },
        1e-5,
        "add_row d(matrix)",
    );

    let img0 = rand_data(58, 2 * 3 * 2 * 2, -1.0, 1.0);
    let img = Tensor::from_vec(&[2, 3, 2, 2], img0).unwrap();
    assert_grad_close(
        &[3],
        rand_data(59, 3, -1.0, 1.0),
        move |b| weighted_sum(&img.add_chan_bias(b).unwrap(), 16),
        1e-5,
        "add_chan_bias",
    );

    let x_const = Tensor::from_vec(&[5], rand_data(60, 5, -1.0, 1.0)).unwrap();
    assert_grad_close(
        &[1],
        vec![0.7],
        move |s| weighted_sum(&x_const.mul_scalar(s).unwrap(), 17),
        1e-5,
        "mul_scalar d(scalar)",
    );
}

#[test]
fn shape_op_grads() {
    assert_grad_close(
        &[2, 6],
        rand_data(61, 12, -1.0, 1.0),
        |x| weighted_sum(&x.reshape(&[3, 4]).unwrap(), 18),
        1e-5,
        "reshape",
    );
    assert_grad_close(
        &[4, 3],
        rand_data(62, 12, -1.0, 1.0),
        |x| weighted_sum(&x.gather_rows(&[2, 0, 2, 3]).unwrap(), 19),
        1e-5,
        "gather_rows (with repeat)",
    );
    assert_grad_close(
        &[3, 4],
        rand_data(63, 12, -1.0, 1.0),
        |x| weighted_sum(&x.gather_cols(&[3, 1, 1]).unwrap(), 20),
        1e-5,
        "gather_cols (with repeat)",
    );
}

#[test]
fn linalg_helper_grads() {
    assert_grad_close(
        &[4, 4],
        rand_data(64, 16, -1.0, 1.0),
        |x| weighted_sum(&x.tril_strict().unwrap(), 21),
        1e-5,
        "tril_strict",
    );
    assert_grad_close(
        &[4, 4],
        rand_data(65, 16, -1.0, 1.0),
        |x| weighted_sum(&x.diag_part().unwrap(), 22),
        1e-5,
        "diag_part",
    );
    assert_grad_close(
        &[4],
        rand_data(66, 4, -1.0, 1.0),
        |x| weighted_sum(&x.diag_embed().unwrap(), 23),
        1e-5,
        "diag_embed",
    );
}

/// SPD test matrix A = B·Bᵀ + c·I built from a raw parameter square B, so
/// finite differences can perturb every coordinate freely.
fn spd_from(x: &Tensor, c: f64) -> Tensor {
    let n = x.shape()[0];
    x.matmul(&x.transpose().unwrap())
        .unwrap()
        .add(&Tensor::eye(n).scale(c))
        .unwrap()
}

#[test]
fn cholesky_grad_sum_of_factor() {
    // Gradient of sum(L) w.r.t. the SPD input, via the chain through A = f(X).
    assert_grad_close(
        &[5, 5],
        rand_data(67, 25, -1.0, 1.0),
        |x| spd_from(x, 3.0).cholesky().unwrap().sum(),
        1e-4,
        "cholesky sum(L)",
    );
    // A non-symmetric weighting catches errors the plain sum would cancel.
    assert_grad_close(
        &[5, 5],
        rand_data(68, 25, -1.0, 1.0),
        |x| weighted_sum(&spd_from(x, 3.0).cholesky().unwrap(), 24),
        1e-4,
        "cholesky weighted",
    );
}

#[test]
fn cholesky_grad_direct_lower_read() {
    // Perturbing the raw matrix entries directly: the upper triangle is never
    // read, so its gradient must be exactly zero and finite differences must
    // agree on the lower triangle.
    let mut a0 = vec![0.0; 16];
    let b = rand_data(69, 16, -1.0, 1.0);
    for i in 0..4 {
        for j in 0..4 {
            let mut s = 0.0;
            for k in 0..4 {
                s += b[i * 4 + k] * b[j * 4 + k];
            }
            a0[i * 4 + j] = s + if i == j { 3.0 } else { 0.0 };
        }
    }
    assert_grad_close(
        &[4, 4],
        a0.clone(),
        |a| weighted_sum(&a.cholesky().unwrap(), 25),
        1e-4,
        "cholesky raw input",
    );

    let leaf = Tensor::leaf_from_vec(&[4, 4], a0).unwrap();
    weighted_sum(&leaf.cholesky().unwrap(), 25)
        .backward()
        .unwrap();
    let g = leaf.leaf_grad().unwrap();
    for i in 0..4 {
        for j in i + 1..4 {
            assert_eq!(g.at2(i, j), 0.0, "unread upper entry must have zero grad");
        }
    }
}

#[test]
fn tri_solve_grads_both_sides() {
    let mut l0 = rand_data(70, 25, -1.0, 1.0);
    for i in 0..5 {
        l0[i * 5 + i] = 1.5 + l0[i * 5 + i].abs();
    }
    let b0 = rand_data(71, 15, -1.0, 1.0);
    let l_const = Tensor::from_vec(&[5, 5], l0.clone()).unwrap();
    let b_const = Tensor::from_vec(&[5, 3], b0.clone()).unwrap();

    for (side, tag) in [(Side::Lower, "lower"), (Side::Upper, "upper")] {
        assert_grad_close(
            &[5, 5],
            l0.clone(),
            {
                let b = b_const.clone();
                move |l| weighted_sum(&l.tri_solve(&b, side).unwrap(), 26)
            },
            1e-4,
            &format!("tri_solve {tag} dL"),
        );
        assert_grad_close(
            &[5, 3],
            b0.clone(),
            {
                let l = l_const.clone();
                move |b| weighted_sum(&l.tri_solve(b, side).unwrap(), 27)
            },
            1e-4,
            &format!("tri_solve {tag} dB"),
        );
    }
}

#[test]
fn composed_chain_grad() {
    // A miniature model-shaped composition: conv → relu → reshape → matmul →
    // softmax → weighted log-likelihood. Checks that chained backward passes
    // compose correctly.
    let w_conv = Tensor::from_vec(&[2, 1, 3, 3], rand_data(72, 18, -0.5, 0.5)).unwrap();
    let w_fc = Tensor::from_vec(&[8, 3], rand_data(73, 24, -0.5, 0.5)).unwrap();
    assert_grad_close(
        &[1, 1, 4, 4],
        rand_data(74, 16, -1.0, 1.0),
        move |x| {
            let h = x.conv2d(&w_conv).unwrap().relu().reshape(&[1, 8]).unwrap();
            let p = h.matmul(&w_fc).unwrap().log_softmax_rows().unwrap();
            p.col(1).unwrap().sum().neg()
        },
        1e-4,
        "composed chain",
    );
}

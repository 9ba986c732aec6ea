//! Semantics of the gradient graph: accumulation, zeroing, scoping.

mod common;

use agp_tensor::{no_grad, Tensor, TensorError};
use common::assert_all_close;

#[test]
fn sum_backward_gives_ones() {
    let p = Tensor::leaf_from_vec(&[2, 3], vec![1.0, -2.0, 3.0, 4.0, -5.0, 6.0]).unwrap();
    p.sum().backward().unwrap();
    assert_all_close(p.leaf_grad().unwrap().data(), &[1.0; 6], 0.0, "d sum = 1");
}

#[test]
fn square_sum_backward_gives_two_p() {
    let data = vec![1.0, -2.0, 0.5, 4.0];
    let p = Tensor::leaf_from_vec(&[4], data.clone()).unwrap();
    p.mul(&p).unwrap().sum().backward().unwrap();
    let want: Vec<f64> = data.iter().map(|v| 2.0 * v).collect();
    assert_all_close(p.leaf_grad().unwrap().data(), &want, 1e-15, "d sum(p²) = 2p");
}

#[test]
fn gradients_accumulate_across_backward_calls() {
    let p = Tensor::leaf_from_vec(&[3], vec![1.0, 2.0, 3.0]).unwrap();
    p.sum().backward().unwrap();
    p.scale(2.0).sum().backward().unwrap();
    assert_all_close(p.leaf_grad().unwrap().data(), &[3.0; 3], 1e-15, "1 + 2");
}

#[test]
fn zero_grad_then_backward_is_idempotent() {
    let p = Tensor::leaf_from_vec(&[3], vec![0.3, -0.7, 1.1]).unwrap();
    let run = || {
        p.zero_leaf_grad();
        p.mul(&p).unwrap().mul(&p).unwrap().sum().backward().unwrap();
        p.leaf_grad().unwrap().data().to_vec()
    };
    let first = run();
    let second = run();
    assert_eq!(first, second, "identical grads after zero_grad + backward");
}

#[test]
fn diamond_graph_accumulates_both_paths() {
    // y = sum(p + p²): both uses of p must contribute (1 + 2p).
    let p = Tensor::leaf_from_vec(&[2], vec![0.5, -1.5]).unwrap();
    let y = p.add(&p.mul(&p).unwrap()).unwrap().sum();
    y.backward().unwrap();
    assert_all_close(
        p.leaf_grad().unwrap().data(),
        &[2.0, -2.0],
        1e-15,
        "diamond: 1 + 2p",
    );
}

#[test]
fn shared_subgraph_visited_once() {
    // z = h + h where h = p·2 — the tape must not double-free or double-run
    // h's backward; the correct gradient is 4.
    let p = Tensor::leaf_from_vec(&[1], vec![3.0]).unwrap();
    let h = p.scale(2.0);
    h.add(&h).unwrap().sum().backward().unwrap();
    assert_all_close(p.leaf_grad().unwrap().data(), &[4.0], 1e-15, "2 + 2");
}

#[test]
fn non_scalar_root_rejected() {
    let p = Tensor::leaf_from_vec(&[2], vec![1.0, 2.0]).unwrap();
    let y = p.scale(2.0);
    assert!(matches!(
        y.backward(),
        Err(TensorError::NonScalarRoot { .. })
    ));
}

#[test]
fn constant_root_rejected() {
    let c = Tensor::scalar(1.0);
    assert!(matches!(c.backward(), Err(TensorError::DetachedRoot)));
}

#[test]
fn no_grad_suppresses_recording() {
    let p = Tensor::leaf_from_vec(&[2], vec![1.0, 2.0]).unwrap();
    let y = no_grad(|| p.mul(&p).unwrap().sum());
    assert!(!y.is_tracked(), "ops under no_grad must be constants");
    assert!(y.backward().is_err());

    // Recording resumes after the scope ends.
    let z = p.sum();
    assert!(z.is_tracked());
}

#[test]
fn detach_cuts_the_graph() {
    let p = Tensor::leaf_from_vec(&[2], vec![1.0, 2.0]).unwrap();
    let d = p.mul(&p).unwrap().detach();
    assert!(!d.is_tracked());
    // Upstream of the detach point still records.
    let y = p.sum();
    assert!(y.is_tracked());
}

#[test]
fn mixed_tracked_and_constant_parents() {
    let p = Tensor::leaf_from_vec(&[2], vec![1.0, 2.0]).unwrap();
    let c = Tensor::from_vec(&[2], vec![10.0, 20.0]).unwrap();
    let y = p.mul(&c).unwrap().sum();
    y.backward().unwrap();
    assert_all_close(p.leaf_grad().unwrap().data(), &[10.0, 20.0], 0.0, "d(p·c)");
}

#[test]
fn backward_on_leaf_root() {
    let p = Tensor::leaf_from_vec(&[1], vec![5.0]).unwrap();
    p.backward().unwrap();
    assert_all_close(p.leaf_grad().unwrap().data(), &[1.0], 0.0, "d p/d p = 1");
}

#[test]
fn deep_chain_backward_is_stack_safe() {
    // 20k chained ops: traversal and drop must both be iterative-safe.
    let p = Tensor::leaf_from_vec(&[1], vec![1.0]).unwrap();
    let mut x = p.scale(1.0);
    for _ in 0..20_000 {
        x = x.add_const(0.0);
    }
    x.sum().backward().unwrap();
    assert_all_close(p.leaf_grad().unwrap().data(), &[1.0], 0.0, "deep chain");
}

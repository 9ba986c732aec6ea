use std::cell::Cell;
use std::fmt;
use std::rc::Rc;

use crate::error::{Result, TensorError};
use crate::scalar::Scalar;
use crate::tape::{BackwardFn, Node};

thread_local! {
    static NO_GRAD: Cell<bool> = const { Cell::new(false) };
}

/// Runs `f` with gradient recording disabled on the current thread.
///
/// Ops executed inside the closure produce plain constant tensors even when
/// their inputs carry graph nodes. Used for inference passes.
pub fn no_grad<R>(f: impl FnOnce() -> R) -> R {
    let prev = NO_GRAD.with(|c| c.replace(true));
    let out = f();
    NO_GRAD.with(|c| c.set(prev));
    out
}

pub(crate) fn grad_enabled() -> bool {
    !NO_GRAD.with(|c| c.get())
}

pub(crate) struct Inner<F: Scalar> {
    pub(crate) shape: Vec<usize>,
    pub(crate) data: Rc<Vec<F>>,
    pub(crate) node: Option<Rc<Node<F>>>,
}

/// Dense row-major tensor, immutable after construction.
///
/// Cloning is cheap (reference-counted). A tensor optionally carries a node in
/// the gradient graph; tensors built outside any op, or inside [`no_grad`],
/// are constants.
pub struct TensorBase<F: Scalar> {
    pub(crate) inner: Rc<Inner<F>>,
}

impl<F: Scalar> Clone for TensorBase<F> {
    fn clone(&self) -> Self {
        Self {
            inner: Rc::clone(&self.inner),
        }
    }
}

impl<F: Scalar> fmt::Debug for TensorBase<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.numel().min(8);
        write!(
            f,
            "Tensor{:?}{}{:?}{}",
            self.shape(),
            if self.inner.node.is_some() { "*" } else { "" },
            &self.data()[..n],
            if self.numel() > n { "…" } else { "" }
        )
    }
}

pub(crate) fn check_len<F>(shape: &[usize], data: &[F]) -> Result<()> {
    let expected: usize = shape.iter().product();
    if expected != data.len() {
        return Err(TensorError::DataLength {
            shape: shape.to_vec(),
            expected,
            got: data.len(),
        });
    }
    Ok(())
}

impl<F: Scalar> TensorBase<F> {
    /// Constant tensor from row-major data.
    pub fn from_vec(shape: &[usize], data: Vec<F>) -> Result<Self> {
        check_len(shape, &data)?;
        Ok(Self {
            inner: Rc::new(Inner {
                shape: shape.to_vec(),
                data: Rc::new(data),
                node: None,
            }),
        })
    }

    /// Leaf tensor: participates in the graph and accumulates a gradient.
    pub fn leaf_from_vec(shape: &[usize], data: Vec<F>) -> Result<Self> {
        check_len(shape, &data)?;
        let numel = data.len();
        Ok(Self {
            inner: Rc::new(Inner {
                shape: shape.to_vec(),
                data: Rc::new(data),
                node: Some(Rc::new(Node::leaf(shape.to_vec(), numel))),
            }),
        })
    }

    pub fn zeros(shape: &[usize]) -> Self {
        let n: usize = shape.iter().product();
        Self::from_vec(shape, vec![F::zero(); n]).expect("consistent shape")
    }

    pub fn full(shape: &[usize], value: F) -> Self {
        let n: usize = shape.iter().product();
        Self::from_vec(shape, vec![value; n]).expect("consistent shape")
    }

    pub fn scalar(value: F) -> Self {
        Self::from_vec(&[1], vec![value]).expect("consistent shape")
    }

    pub fn eye(n: usize) -> Self {
        let mut d = vec![F::zero(); n * n];
        for i in 0..n {
            d[i * n + i] = F::one();
        }
        Self::from_vec(&[n, n], d).expect("consistent shape")
    }

    pub fn shape(&self) -> &[usize] {
        &self.inner.shape
    }

    pub fn numel(&self) -> usize {
        self.inner.data.len()
    }

    pub fn data(&self) -> &[F] {
        &self.inner.data
    }

    /// Extracts the single element of a scalar tensor.
    pub fn item(&self) -> F {
        assert_eq!(self.numel(), 1, "item() on non-scalar tensor");
        self.inner.data[0]
    }

    /// Row-major element access for 2-D tensors (tests and small linalg).
    pub fn at2(&self, i: usize, j: usize) -> F {
        let cols = self.inner.shape[1];
        self.inner.data[i * cols + j]
    }

    pub fn is_tracked(&self) -> bool {
        self.inner.node.is_some()
    }

    /// Same values, no graph node.
    pub fn detach(&self) -> Self {
        Self {
            inner: Rc::new(Inner {
                shape: self.inner.shape.clone(),
                data: Rc::clone(&self.inner.data),
                node: None,
            }),
        }
    }

    /// True if any value is NaN or infinite.
    pub fn has_non_finite(&self) -> bool {
        self.data().iter().any(|v| !v.is_finite())
    }

    pub(crate) fn node(&self) -> Option<&Rc<Node<F>>> {
        self.inner.node.as_ref()
    }

    /// Shared handle to the raw data, for backward closures. Closures capture
    /// data handles rather than tensors so the graph stays acyclic.
    pub(crate) fn data_rc(&self) -> Rc<Vec<F>> {
        Rc::clone(&self.inner.data)
    }

    /// Builds an op output: records a graph node when grads are enabled and at
    /// least one parent is tracked, otherwise yields a constant.
    pub(crate) fn from_op(
        shape: Vec<usize>,
        data: Rc<Vec<F>>,
        parents: Vec<TensorBase<F>>,
        backward: BackwardFn<F>,
    ) -> Self {
        let tracked = grad_enabled() && parents.iter().any(|p| p.inner.node.is_some());
        let node = if tracked {
            let numel = data.len();
            Some(Rc::new(Node::interior(
                shape.clone(),
                numel,
                parents,
                backward,
            )))
        } else {
            None
        };
        Self {
            inner: Rc::new(Inner { shape, data, node }),
        }
    }

    /// Accumulated gradient of a leaf tensor, as a constant tensor.
    pub fn leaf_grad(&self) -> Option<Self> {
        let node = self.inner.node.as_ref()?;
        if !node.is_leaf() {
            return None;
        }
        let g = node.grad.borrow().clone();
        Some(Self::from_vec(&self.inner.shape, g).expect("grad shape"))
    }

    /// Zero-fills the accumulated gradient of a leaf tensor.
    pub fn zero_leaf_grad(&self) {
        if let Some(node) = self.inner.node.as_ref() {
            if node.is_leaf() {
                node.grad.borrow_mut().iter_mut().for_each(|g| *g = F::zero());
            }
        }
    }

    /// Reverse-mode sweep from a scalar root. Gradients of every reachable
    /// leaf accumulate additively into the leaf's buffer.
    pub fn backward(&self) -> Result<()> {
        crate::tape::run_backward(self)
    }
}

use std::cell::RefCell;
use std::collections::HashSet;
use std::rc::Rc;

use crate::error::{Result, TensorError};
use crate::scalar::Scalar;
use crate::tensor::TensorBase;

/// Per-parent gradient contributions for one node. `None` marks a parent that
/// does not need a gradient (constant input).
pub(crate) type BackwardFn<F> = Box<dyn Fn(&[F]) -> Vec<Option<Vec<F>>>>;

/// One recorded operation (or leaf) in the gradient graph.
pub(crate) struct Node<F: Scalar> {
    #[allow(dead_code)]
    pub(crate) shape: Vec<usize>,
    pub(crate) grad: RefCell<Vec<F>>,
    pub(crate) parents: Vec<TensorBase<F>>,
    pub(crate) backward: Option<BackwardFn<F>>,
}

impl<F: Scalar> Node<F> {
    pub(crate) fn leaf(shape: Vec<usize>, numel: usize) -> Self {
        Node {
            shape,
            grad: RefCell::new(vec![F::zero(); numel]),
            parents: Vec::new(),
            backward: None,
        }
    }

    pub(crate) fn interior(
        shape: Vec<usize>,
        numel: usize,
        parents: Vec<TensorBase<F>>,
        backward: BackwardFn<F>,
    ) -> Self {
        Node {
            shape,
            grad: RefCell::new(vec![F::zero(); numel]),
            parents,
            backward: Some(backward),
        }
    }

    pub(crate) fn is_leaf(&self) -> bool {
        self.backward.is_none()
    }
}

/// Graphs can be thousands of ops deep; the default recursive drop of the
/// parent chain would overflow the stack, so ownership is unwound with an
/// explicit worklist instead.
impl<F: Scalar> Drop for Node<F> {
    fn drop(&mut self) {
        let mut stack = std::mem::take(&mut self.parents);
        while let Some(tensor) = stack.pop() {
            let TensorBase { mut inner } = tensor;
            if let Some(inner) = Rc::get_mut(&mut inner) {
                if let Some(mut node) = inner.node.take() {
                    if let Some(node) = Rc::get_mut(&mut node) {
                        stack.append(&mut node.parents);
                    }
                }
            }
        }
    }
}

/// Iterative DFS post-order over the graph. Reversed, this is a valid
/// topological order with every consumer visited before its producers.
fn topo_order<F: Scalar>(root: &Rc<Node<F>>) -> Vec<Rc<Node<F>>> {
    let mut order: Vec<Rc<Node<F>>> = Vec::new();
    let mut visited: HashSet<*const Node<F>> = HashSet::new();
    // Stack of (node, next-parent-index to explore).
    let mut stack: Vec<(Rc<Node<F>>, usize)> = vec![(Rc::clone(root), 0)];
    visited.insert(Rc::as_ptr(root));
    while let Some((node, idx)) = stack.pop() {
        let mut pushed = false;
        let mut i = idx;
        while i < node.parents.len() {
            let parent = &node.parents[i];
            i += 1;
            if let Some(pnode) = parent.node() {
                if visited.insert(Rc::as_ptr(pnode)) {
                    stack.push((node.clone(), i));
                    stack.push((Rc::clone(pnode), 0));
                    pushed = true;
                    break;
                }
            }
        }
        if !pushed {
            order.push(node);
        }
    }
    order
}

pub(crate) fn run_backward<F: Scalar>(root: &TensorBase<F>) -> Result<()> {
    if root.numel() != 1 {
        return Err(TensorError::NonScalarRoot {
            shape: root.shape().to_vec(),
        });
    }
    let root_node = root.node().ok_or(TensorError::DetachedRoot)?;

    let order = topo_order(root_node);

    // Interior grads are scratch space for this sweep; leaf grads accumulate
    // across sweeps until explicitly zeroed.
    for node in &order {
        if !node.is_leaf() {
            node.grad.borrow_mut().iter_mut().for_each(|g| *g = F::zero());
        }
    }
    {
        let mut g = root_node.grad.borrow_mut();
        g[0] += F::one();
    }

    for node in order.iter().rev() {
        let Some(backward) = &node.backward else {
            continue;
        };
        let contributions = {
            let g = node.grad.borrow();
            backward(&g)
        };
        debug_assert_eq!(contributions.len(), node.parents.len());
        for (parent, contrib) in node.parents.iter().zip(contributions) {
            let (Some(pnode), Some(c)) = (parent.node(), contrib) else {
                continue;
            };
            let mut pg = pnode.grad.borrow_mut();
            debug_assert_eq!(pg.len(), c.len());
            for (dst, src) in pg.iter_mut().zip(&c) {
                *dst += *src;
            }
        }
    }

    Ok(())
}

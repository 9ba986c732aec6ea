pub mod conv;
pub mod elementwise;
pub mod linalg;
pub mod matmul;
pub mod reduce;
pub mod shape;

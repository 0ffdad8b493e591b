pub mod error;
pub mod forward;
pub mod inverse;
pub mod linalg;
pub mod operators;
pub mod oracle;
pub mod poly;
pub mod ratfun;
pub mod scalar;
pub mod solvers;
pub mod syntax;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/operators.md")]
    mod operators {}
    #[doc = include_str!("../../../book/src/forward.md")]
    mod forward {}
    #[doc = include_str!("../../../book/src/inverse.md")]
    mod inverse {}
    #[doc = include_str!("../../../book/src/oracle.md")]
    mod oracle {}
    #[doc = include_str!("../../../book/src/solvers.md")]
    mod solvers {}
}

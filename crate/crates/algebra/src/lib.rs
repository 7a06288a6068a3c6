//! Presented bigraded-commutative F_p-algebras, differentials with Leibniz
//! extension and homology, and a bar-complex Hochschild homology oracle.

pub mod bar;
pub mod dga;
pub mod presentation;

pub use presentation::{
    expand_divided_powers, Bidegree, Element, Generator, GeneratorSpec, Hom, HomError, Kind,
    Monomial, Presentation, PresentationBuilder, PresentationError, Window,
};

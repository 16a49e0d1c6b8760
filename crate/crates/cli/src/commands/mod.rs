pub mod check;
pub mod field;
pub mod oscillate;
pub mod shapes;

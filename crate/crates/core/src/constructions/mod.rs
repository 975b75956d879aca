pub mod examples;
pub mod iso;
pub mod kan;
pub mod poset;
pub mod random;
pub mod subgrid;

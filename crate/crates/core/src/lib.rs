pub mod cli;
pub mod fock;
pub mod identities;
pub mod normal_order;
pub mod params;

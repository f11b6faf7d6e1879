pub mod derivability;
pub mod duality;
pub mod formula;
pub mod generate;
pub mod hierarchy;
pub mod ipc;
pub mod principles;

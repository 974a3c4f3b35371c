pub mod branching;
pub mod cache;
pub mod cartan;
pub mod crystal;
pub mod fundamental;
pub mod fusion;
pub mod linalg;
pub mod polarverify;
pub mod qfield;
pub mod repcore;

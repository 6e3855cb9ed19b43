pub mod exec;
pub mod linalg;
pub mod monodromy;
pub mod intertwine;
pub mod zigzag;
pub mod extension;
pub mod report;
pub mod assembly;
pub mod skeleton;
pub mod tables;
pub mod zzl;

pub mod bogomolov;
pub mod demo;
pub mod error;
pub mod exterior;
pub mod hrcheck;
pub mod linalg;
pub mod parallel;
pub mod ring;
pub mod scalar;
pub mod symfunc;
pub mod verdict;

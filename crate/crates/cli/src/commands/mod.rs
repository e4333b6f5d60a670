pub mod audit;
pub mod build;
pub mod catalog;
pub mod mass;
pub mod tov;
pub mod verify;

pub mod cartan;
pub mod catalog;
pub mod lweight;
pub mod report;
pub mod series_engine;
pub mod truncation;
pub mod sl2;

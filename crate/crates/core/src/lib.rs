pub mod error;
pub mod order;
pub mod population;
pub mod profile;
pub mod rng;
pub mod scoring;
pub mod space;
pub mod mechanisms;
pub mod privilege;
pub mod axioms;
pub mod report;
pub mod runner;

//! The two model constructions: the AF tower and induction through a twisted crossed product.

pub mod af_tower;
pub mod crossed_product;
pub mod jones;

pub use af_tower::{
    build_af_tower, build_af_tower_with_budget, d_n_phase, verify_tower, AfStage, AfTower, StageReport, TowerReport,
};
pub use crossed_product::{AxiomReport, TwistedCrossedProduct};
pub use jones::{
    jones_induce, regular_conjugation, rokhlin_from_ek, verify_jones, JonesInduced, JonesReport, PrefactorConvention,
};

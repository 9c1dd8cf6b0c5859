pub mod error;
pub mod ordinal;
pub mod space;
pub mod element;
pub mod presets;
pub mod hnf;
pub mod coords;
pub mod group;
pub mod freeness;
pub mod ddmodel;
pub mod schema;

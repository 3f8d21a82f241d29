pub mod curve;
pub mod exactfield;
pub mod moebius;
pub mod picard;
pub mod rr_oracle;
pub mod torsion;
pub mod upoly;
pub mod zeta;

pub mod audit;
pub mod gabcodes;
pub mod gabkron;
pub mod gf2m;
pub mod par;
pub mod ranklinalg;

//! Function-class quantities of symbols and operator-norm estimates.

mod constants;
mod hardy;
mod opnorm;
mod oscillation;
mod symbol;

pub use constants::{distance_to_constants_lr, LrDistance};
pub use hardy::{h1_proxy, h1_scales};
pub use opnorm::{
    beurling_norm_estimate, opnorm_lower, opnorm_upper_split, ascent, OpNormEstimate, SearchBudget,
    UpperEnvelope,
};
pub use oscillation::{bmo_norm, cube_family, holder_osc, oscillation_sup, OscillationSup};
pub use symbol::{generate_symbol, standard_corpus, BumpShape, SymbolClass, SymbolSpec};

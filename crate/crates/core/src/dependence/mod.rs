//! FGM dependence as consistent families of symmetric Bernoulli pmfs.

mod family;
mod theta;

pub use family::{BernoulliDependence, KnLaw};
pub use theta::{check_admissible, pmf_to_theta, theta_to_pmf, Admissibility, BernoulliPmf, ThetaSet, MAX_DIM};

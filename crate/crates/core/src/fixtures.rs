//! Small hand-made scenarios shared by unit and integration tests.

use crate::channel::Scenario;

/// K = N = 2. Gains chosen so that the identity matching is feasible and the
/// crossed matching is not (gamma = 10, gamma0 = 5, beta = 2, beta0 = 1).
pub fn two_by_two() -> Scenario {
    #[rustfmt::skip]
    let g = vec![
        0.9,  0.02, 0.05,
        0.01, 0.5,  0.04,
        0.02, 0.03, 0.6,
    ];
    Scenario::from_gains(2, 2, g, 10.0, 5.0, 2.0, 1.0).expect("valid fixture")
}

/// K = N = 3 with gamma = gamma0 = 10, beta = beta0 = 2.
///
/// Seven of the 34 associations are feasible and the unique maximum is
/// {SU0 -> SBS0, SU2 -> SBS2}. SBS1 and SBS2 can never be active together
/// because of the macro user.
pub fn three_by_three() -> Scenario {
    #[rustfmt::skip]
    let g = vec![
        1.0,  0.1,  0.15, 0.3,
        0.02, 0.8,  0.3,  0.05,
        0.01, 0.6,  0.5,  0.2,
        0.03, 0.05, 0.1,  0.4,
    ];
    Scenario::from_gains(3, 3, g, 10.0, 10.0, 2.0, 2.0).expect("valid fixture")
}

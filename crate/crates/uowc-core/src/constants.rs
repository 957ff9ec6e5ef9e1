//! Physical constants (2019 SI exact values, CODATA).

/// Elementary charge `q` [C].
pub const ELEMENTARY_CHARGE: f64 = 1.602_176_634e-19;

/// Planck constant `h` [J·s].
pub const PLANCK: f64 = 6.626_070_15e-34;

/// Speed of light in vacuum [m/s].
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Boltzmann constant `κ` [J/K].
pub const BOLTZMANN: f64 = 1.380_649e-23;

//! Physical constants in Hartree atomic units.

/// Fine-structure constant.
pub const FINE_STRUCTURE: f64 = 1.0 / 137.035999;

/// Speed of light in atomic units.
pub const SPEED_OF_LIGHT: f64 = 137.035999;

/// One atomic unit of time, in seconds.
pub const TIME_AU_IN_SECONDS: f64 = 2.418_884_326_585_7e-17;

/// One Hartree, in electronvolts.
pub const HARTREE_IN_EV: f64 = 27.211_386_245_988;

/// One Hartree, in joules.
pub const HARTREE_IN_JOULES: f64 = 4.359_744_722_2071e-18;

/// Bohr radius, in meters.
pub const BOHR_IN_METERS: f64 = 5.291_772_109_03e-11;

/// Proton/electron mass ratio, the default heavy-species mass.
pub const PROTON_ELECTRON_MASS_RATIO: f64 = 1836.152_673_43;

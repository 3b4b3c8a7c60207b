//! Color temperature to RGB.

pub const MIN_KELVIN: f64 = 1000.0;
pub const MAX_KELVIN: f64 = 12000.0;

/// Approximate blackbody color for a temperature in Kelvin, as linear RGB in
/// `[0, 1]`. Uses Tanner Helland's curve fit; inputs are clamped to
/// `[1000, 12000]` K.
pub fn kelvin_to_rgb(temperature: f64) -> [f64; 3] {
    let t = temperature.clamp(MIN_KELVIN, MAX_KELVIN) / 100.0;
    let red = if t <= 66.0 {
        255.0
    } else {
        329.698_727_446 * (t - 60.0).powf(-0.133_204_759_2)
    };
    let green = if t <= 66.0 {
        99.470_802_586_1 * t.ln() - 161.119_568_166_1
    } else {
        288.122_169_528_3 * (t - 60.0).powf(-0.075_514_849_2)
    };
    let blue = if t >= 66.0 {
        255.0
    } else if t <= 19.0 {
        0.0
    } else {
        138.517_731_223_1 * (t - 10.0).ln() - 305.044_792_730_7
    };
    [red, green, blue].map(|c| (c / 255.0).clamp(0.0, 1.0))
}

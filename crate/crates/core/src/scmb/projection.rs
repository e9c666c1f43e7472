use crate::geom::check_elevation;
use crate::{Error, Result, SPEED_OF_LIGHT};

fn check(value: f64, elevation: f64, frequency: f64) -> Result<()> {
    check_elevation(elevation)?;
    if !value.is_finite() || !(frequency.is_finite() && frequency > 0.0) {
        return Err(Error::InvalidInput(
            "bias must be finite and frequency positive".into(),
        ));
    }
    Ok(())
}

/// Range bias of a code-delay bias: `δρ = (c / f_c) · δτ · sec φ`.
pub fn project_to_range(delay_chips: f64, elevation: f64, code_rate: f64) -> Result<f64> {
    check(delay_chips, elevation, code_rate)?;
    Ok(SPEED_OF_LIGHT / code_rate * delay_chips / elevation.cos())
}

/// Range-rate bias of a Doppler bias: `δρ̇ = (c / f_L) · δf_d · sec φ`.
pub fn project_to_range_rate(
    doppler_hz: f64,
    elevation: f64,
    carrier_frequency: f64,
) -> Result<f64> {
    check(doppler_hz, elevation, carrier_frequency)?;
    Ok(SPEED_OF_LIGHT / carrier_frequency * doppler_hz / elevation.cos())
}

/// Inverse of [`project_to_range`].
pub fn range_to_delay(range_bias: f64, elevation: f64, code_rate: f64) -> Result<f64> {
    check(range_bias, elevation, code_rate)?;
    Ok(range_bias * elevation.cos() * code_rate / SPEED_OF_LIGHT)
}

/// Inverse of [`project_to_range_rate`].
pub fn range_rate_to_doppler(
    range_rate_bias: f64,
    elevation: f64,
    carrier_frequency: f64,
) -> Result<f64> {
    check(range_rate_bias, elevation, carrier_frequency)?;
    Ok(range_rate_bias * elevation.cos() * carrier_frequency / SPEED_OF_LIGHT)
}

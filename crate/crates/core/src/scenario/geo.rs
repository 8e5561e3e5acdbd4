//! Spherical-Earth geometry helpers. Angles in degrees unless noted.

pub const EARTH_RADIUS_KM: f64 = 6378.137;
/// Earth gravitational parameter, km^3/s^2.
pub const EARTH_MU: f64 = 398_600.441_8;

/// Geocentric great-circle angle between two surface points.
pub fn central_angle_deg(lat1: f64, lon1: f64, lat2: f64, lon2: f64) -> f64 {
    let (p1, p2) = (lat1.to_radians(), lat2.to_radians());
    let dp = p2 - p1;
    let dl = (lon2 - lon1).to_radians();
    // Haversine form; stable for small separations.
    let h = (dp / 2.0).sin().powi(2) + p1.cos() * p2.cos() * (dl / 2.0).sin().powi(2);
    (2.0 * h.sqrt().min(1.0).asin()).to_degrees()
}

/// Elevation of a satellite at `altitude_km` seen from a ground point whose
/// central angle to the sub-satellite point is `gamma_deg`.
pub fn elevation_deg(gamma_deg: f64, altitude_km: f64) -> f64 {
    let r = EARTH_RADIUS_KM + altitude_km;
    let g = gamma_deg.to_radians();
    (r * g.cos() - EARTH_RADIUS_KM).atan2(r * g.sin()).to_degrees()
}

/// Circular orbit period in minutes.
pub fn orbital_period_min(altitude_km: f64) -> f64 {
    let a = EARTH_RADIUS_KM + altitude_km;
    2.0 * std::f64::consts::PI * (a.powi(3) / EARTH_MU).sqrt() / 60.0
}

/// Wraps a longitude into `[-180, 180)`.
pub fn wrap_lon(lon: f64) -> f64 {
    (lon + 180.0).rem_euclid(360.0) - 180.0
}

pub fn to_unit(lat: f64, lon: f64) -> [f64; 3] {
    let (p, l) = (lat.to_radians(), lon.to_radians());
    [p.cos() * l.cos(), p.cos() * l.sin(), p.sin()]
}

pub fn from_vector(v: [f64; 3]) -> (f64, f64) {
    let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
    let lat = (v[2] / n).clamp(-1.0, 1.0).asin().to_degrees();
    let lon = v[1].atan2(v[0]).to_degrees();
    (lat, lon)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn central_angle_basics() {
        assert!(central_angle_deg(0.0, 0.0, 0.0, 90.0) - 90.0 < 1e-12);
        assert!((central_angle_deg(0.0, 0.0, 90.0, 0.0) - 90.0).abs() < 1e-9);
        assert!((central_angle_deg(10.0, 170.0, 10.0, -170.0) - central_angle_deg(10.0, 0.0, 10.0, 20.0)).abs() < 1e-9);
        assert_eq!(central_angle_deg(12.0, 34.0, 12.0, 34.0), 0.0);
    }

    #[test]
    fn elevation_at_nadir_and_horizon() {
        assert!((elevation_deg(0.0, 8062.0) - 90.0).abs() < 1e-9);
        let r = EARTH_RADIUS_KM + 8062.0;
        let horizon = (EARTH_RADIUS_KM / r).acos().to_degrees();
        assert!(elevation_deg(horizon, 8062.0).abs() < 1e-9);
    }

    #[test]
    fn meo_period() {
        // O3b-like MEO at 8062 km: about 288 minutes.
        let t = orbital_period_min(8062.0);
        assert!((t - 287.9).abs() < 0.5, "{t}");
    }

    #[test]
    fn vector_round_trip() {
        let (lat, lon) = from_vector(to_unit(-33.5, 151.2));
        assert!((lat + 33.5).abs() < 1e-12 && (lon - 151.2).abs() < 1e-12);
        assert_eq!(wrap_lon(190.0), -170.0);
    }
}

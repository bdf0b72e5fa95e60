use serde::{Deserialize, Serialize};

/// Numeric tolerances shared by every geometric predicate in the crate.
///
/// All values are absolute and assume coordinates of order one.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Distance of a point from a plane still counted as "on" it.
    pub plane: f64,
    /// Allowed deviation of a direction's norm from 1.
    pub norm: f64,
    /// Minimum travel length of a ray before it may hit the boundary again.
    pub step: f64,
    /// `|<theta, n>|` below which a direction is treated as tangent to a face.
    pub angle: f64,
    /// Hits closer than this to an edge are flagged near-singular.
    pub sing: f64,
    /// Denominators of rational transversal constraints below this are undefined.
    pub den: f64,
    /// Residual threshold for membership in a transversal surface.
    pub surf: f64,
    /// Area / diameter threshold separating point, strip and tube cells.
    pub deg: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            plane: 1e-9,
            norm: 1e-12,
            step: 1e-9,
            angle: 1e-9,
            sing: 1e-7,
            den: 1e-10,
            surf: 1e-8,
            deg: 1e-8,
        }
    }
}

impl Tolerances {
    /// Smallest and largest value accepted for a tolerance override.
    pub const SANE_RANGE: (f64, f64) = (1e-14, 1e-3);

    /// Checks that every tolerance lies inside [`Self::SANE_RANGE`].
    pub fn check(&self) -> Result<(), String> {
        let (lo, hi) = Self::SANE_RANGE;
        let named = [
            ("plane", self.plane),
            ("norm", self.norm),
            ("step", self.step),
            ("angle", self.angle),
            ("sing", self.sing),
            ("den", self.den),
            ("surf", self.surf),
            ("deg", self.deg),
        ];
        for (name, value) in named {
            if !(lo..=hi).contains(&value) {
                return Err(format!("tolerance {name}={value:e} outside [{lo:e}, {hi:e}]"));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_sane() {
        assert!(Tolerances::default().check().is_ok());
    }

    #[test]
    fn rejects_out_of_range() {
        let tol = Tolerances {
            plane: 1e-2,
            ..Default::default()
        };
        assert!(tol.check().unwrap_err().contains("plane"));
        let tol = Tolerances {
            deg: 0.0,
            ..Default::default()
        };
        assert!(tol.check().is_err());
    }
}

use fueter_core::dirac::StencilSpec;
use fueter_core::singular::Box4;
use fueter_core::{Error, Quaternion, Result};

/// Settings shared by the subcommands.
#[derive(Debug, Clone, PartialEq)]
pub struct Options {
    /// Overrides the tolerance of the finite-difference residual checks.
    pub tol: Option<f64>,
    pub stencil_order: u8,
    /// Fixed stencil step; `None` uses `1e-2·(1 + |q|)`.
    pub h: Option<f64>,
    pub rng_seed: u64,
    pub points: usize,
    pub region: Box4,
}

impl Default for Options {
    fn default() -> Self {
        Self { tol: None, stencil_order: 4, h: None, rng_seed: 0, points: 100, region: Box4::uniform(-2.0, 2.0) }
    }
}

impl Options {
    pub fn stencil(&self, q: Quaternion) -> Result<StencilSpec> {
        StencilSpec::new(self.stencil_order, self.h.unwrap_or(1e-2 * (1.0 + q.norm())))
    }

    pub fn stencil_override(&self) -> Result<Option<StencilSpec>> {
        match self.h {
            Some(h) => StencilSpec::new(self.stencil_order, h).map(Some),
            None if self.stencil_order == 4 => Ok(None),
            None => Err(Error::InvalidArgument("--stencil-order 2 needs an explicit --h for scans".into())),
        }
    }
}

fn parse_interval(s: &str) -> Result<(f64, f64)> {
    let bad = || Error::InvalidArgument(format!("interval {s:?} (expected lo:hi with lo < hi)"));
    let (lo, hi) = s.split_once(':').ok_or_else(bad)?;
    let lo: f64 = lo.trim().parse().map_err(|_| bad())?;
    let hi: f64 = hi.trim().parse().map_err(|_| bad())?;
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(bad());
    }
    Ok((lo, hi))
}

/// `lo:hi` for all four axes, or four comma-separated intervals for
/// `t, x, y, z`.
pub fn parse_box(s: &str) -> Result<Box4> {
    let parts: Vec<&str> = s.split(',').collect();
    match parts.len() {
        1 => {
            let (lo, hi) = parse_interval(parts[0])?;
            Ok(Box4::uniform(lo, hi))
        }
        4 => {
            let mut b = Box4::uniform(0.0, 0.0);
            for (k, p) in parts.iter().enumerate() {
                (b.lo[k], b.hi[k]) = parse_interval(p)?;
            }
            Ok(b)
        }
        _ => Err(Error::InvalidArgument(format!("box {s:?} (expected lo:hi or four intervals)"))),
    }
}

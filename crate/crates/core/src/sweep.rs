//! Parameter grids and the two sweeps: the region of social-value
//! parameters that reproduces all twelve comparisons, and where a
//! Hurwicz agent prefers an ambiguous bet to a risky one.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::prospects::{own_wellbeing, ChanceInfo, Pessimism, Prospect, TOLERANCE};
use crate::social::{PeuParams, Section3Options};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Axis {
    pub name: String,
    pub values: Vec<f64>,
}

impl Axis {
    /// `lo, lo + step, ...` up to `hi` inclusive (within tolerance).
    pub fn range(name: &str, lo: f64, hi: f64, step: f64) -> Result<Self> {
        if ![lo, hi, step].iter().all(|v| v.is_finite()) {
            return Err(Error::InvalidGrid(format!("{name}: non-finite bound")));
        }
        if hi < lo {
            return Err(Error::EmptyGrid(format!("{name}: upper bound {hi} below lower bound {lo}")));
        }
        if step <= 0.0 {
            if hi == lo {
                return Ok(Self { name: name.into(), values: vec![lo] });
            }
            return Err(Error::InvalidGrid(format!("{name}: step must be positive")));
        }
        let n = ((hi - lo) / step + 1e-9).floor() as usize;
        let values = (0..=n).map(|i| round12(lo + i as f64 * step)).collect();
        Ok(Self { name: name.into(), values })
    }

    pub fn point(name: &str, value: f64) -> Result<Self> {
        Self::range(name, value, value, 0.0)
    }
}

fn round12(x: f64) -> f64 {
    (x * 1e12).round() / 1e12
}

/// A named set of axes parsed from `name=lo:hi:step` / `name=value`
/// entries separated by commas. A bare number is a step applied to every
/// default axis.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Grid {
    pub axes: Vec<Axis>,
}

impl Grid {
    pub fn parse(spec: &str, defaults: &[(&str, f64, f64, f64)]) -> Result<Self> {
        let spec = spec.trim();
        let mut axes: Vec<Axis> = defaults
            .iter()
            .map(|&(name, lo, hi, step)| Axis::range(name, lo, hi, step))
            .collect::<Result<_>>()?;
        if spec.is_empty() {
            return Ok(Self { axes });
        }
        if let Ok(step) = spec.parse::<f64>() {
            axes = defaults
                .iter()
                .map(|&(name, lo, hi, _)| Axis::range(name, lo, hi, step))
                .collect::<Result<_>>()?;
            return Ok(Self { axes });
        }
        for entry in spec.split(',') {
            let (name, range) = entry
                .split_once('=')
                .ok_or_else(|| Error::InvalidGrid(format!("entry '{entry}' is not name=range")))?;
            let name = name.trim();
            let slot = axes
                .iter_mut()
                .find(|a| a.name == name)
                .ok_or_else(|| Error::InvalidGrid(format!("unknown axis '{name}'")))?;
            let nums = range
                .split(':')
                .map(|x| x.trim().parse::<f64>().map_err(|_| Error::InvalidGrid(format!("bad number in '{entry}'"))))
                .collect::<Result<Vec<_>>>()?;
            *slot = match nums.as_slice() {
                [v] => Axis::point(name, *v)?,
                [lo, hi, step] => Axis::range(name, *lo, *hi, *step)?,
                _ => return Err(Error::InvalidGrid(format!("'{entry}' needs value or lo:hi:step"))),
            };
        }
        Ok(Self { axes })
    }

    pub fn axis(&self, name: &str) -> &[f64] {
        &self.axes.iter().find(|a| a.name == name).expect("axis exists").values
    }

    pub fn size(&self) -> usize {
        self.axes.iter().map(|a| a.values.len()).product()
    }

    pub fn describe(&self) -> String {
        self.axes
            .iter()
            .map(|a| {
                let (lo, hi) = (a.values[0], a.values[a.values.len() - 1]);
                format!("{}={}:{}({} pts)", a.name, lo, hi, a.values.len())
            })
            .collect::<Vec<_>>()
            .join(",")
    }
}

pub const PEU_AXES: [(&str, f64, f64, f64); 3] = [("alpha", 0.0, 1.0, 0.05), ("beta", 0.0, 1.0, 0.05), ("gamma", 0.0, 1.0, 0.05)];

pub const HEU_AXES: [(&str, f64, f64, f64); 3] = [("alpha", 0.0, 1.0, 0.1), ("q", 0.0, 1.0, 0.05), ("delta", 0.05, 0.25, 0.05)];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PeuRegion {
    pub grid_points: usize,
    /// `(alpha, beta, gamma)` points where all twelve comparisons hold.
    pub points: Vec<[f64; 3]>,
}

impl PeuRegion {
    pub fn contains(&self, alpha: f64, beta: f64, gamma: f64) -> bool {
        self.points
            .iter()
            .any(|p| (p[0] - alpha).abs() < 1e-9 && (p[1] - beta).abs() < 1e-9 && (p[2] - gamma).abs() < 1e-9)
    }
}

/// Grid points (in alpha-major order) where every comparison A-L holds.
pub fn peu_region(grid: &Grid, options: &Section3Options) -> Result<PeuRegion> {
    let (alphas, betas, gammas) = (grid.axis("alpha"), grid.axis("beta"), grid.axis("gamma"));
    if grid.size() == 0 {
        return Err(Error::EmptyGrid("peu-params grid has no points".into()));
    }
    let points: Vec<[f64; 3]> = (0..grid.size())
        .into_par_iter()
        .map(|k| {
            let a = alphas[k / (betas.len() * gammas.len())];
            let b = betas[k / gammas.len() % betas.len()];
            let g = gammas[k % gammas.len()];
            let params = PeuParams::new(a, b, g)?;
            Ok(options.all_match(&params).then_some([a, b, g]))
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();
    Ok(PeuRegion { grid_points: grid.size(), points })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HeuPoint {
    pub alpha: f64,
    pub q: f64,
    pub delta: f64,
    pub lo: f64,
    pub hi: f64,
    pub ambiguous_value: f64,
    pub risky_value: f64,
}

impl HeuPoint {
    pub fn ambiguous_preferred(&self) -> bool {
        self.ambiguous_value > self.risky_value + TOLERANCE
    }

    pub fn risky_weakly_preferred(&self) -> bool {
        !self.ambiguous_preferred()
    }
}

/// Hurwicz values of a unit bet on a risky event with chance `q` and on an
/// ambiguous event with chance in `[q - delta, q + delta]` clipped to
/// `[0, 1]`.
pub fn heu_point(alpha: f64, q: f64, delta: f64) -> Result<HeuPoint> {
    let alpha_p = Pessimism::new(alpha)?;
    if !(0.0..=1.0).contains(&q) {
        return Err(Error::ProbabilityOutOfRange { what: "risky win chance q".into(), value: q });
    }
    if !(delta.is_finite() && delta >= 0.0) {
        return Err(Error::NegativeWeight { name: "delta", value: delta });
    }
    let (lo, hi) = ((q - delta).max(0.0), (q + delta).min(1.0));
    let ambiguous = Prospect::binary(1.0, 0.0, ChanceInfo::interval(lo, hi)?)?;
    let risky = Prospect::binary(1.0, 0.0, ChanceInfo::precise(q)?)?;
    Ok(HeuPoint {
        alpha,
        q,
        delta,
        lo,
        hi,
        ambiguous_value: ambiguous.hurwicz(alpha_p, own_wellbeing(0)),
        risky_value: risky.hurwicz(alpha_p, own_wellbeing(0)),
    })
}

pub fn heu_reversal(grid: &Grid) -> Result<Vec<HeuPoint>> {
    let (alphas, qs, deltas) = (grid.axis("alpha"), grid.axis("q"), grid.axis("delta"));
    if grid.size() == 0 {
        return Err(Error::EmptyGrid("heu-reversal grid has no points".into()));
    }
    (0..grid.size())
        .into_par_iter()
        .map(|k| {
            let a = alphas[k / (qs.len() * deltas.len())];
            let d = deltas[k / qs.len() % deltas.len()];
            let q = qs[k % qs.len()];
            heu_point(a, q, d)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn axis_ranges() {
        let a = Axis::range("a", 0.0, 1.0, 0.05).unwrap();
        assert_eq!(a.values.len(), 21);
        assert!(a.values.contains(&0.8) && a.values.contains(&0.25));
        assert!(matches!(Axis::range("a", 1.0, 0.0, 0.1), Err(Error::EmptyGrid(_))));
        assert!(Axis::range("a", 0.0, 1.0, 0.0).is_err());
        assert_eq!(Axis::point("a", 0.3).unwrap().values, vec![0.3]);
    }

    #[test]
    fn grid_specs() {
        let g = Grid::parse("", &PEU_AXES).unwrap();
        assert_eq!(g.size(), 21 * 21 * 21);
        let g = Grid::parse("0.25", &PEU_AXES).unwrap();
        assert_eq!(g.size(), 125);
        let g = Grid::parse("alpha=0.8,beta=0:1:0.5", &PEU_AXES).unwrap();
        assert_eq!(g.axis("alpha"), &[0.8]);
        assert_eq!(g.axis("beta"), &[0.0, 0.5, 1.0]);
        assert!(Grid::parse("zeta=1", &PEU_AXES).is_err());
        assert!(Grid::parse("alpha=1:2", &PEU_AXES).is_err());
        assert!(Grid::parse("alpha=x", &PEU_AXES).is_err());
    }

    #[test]
    fn heu_examples() {
        let p = heu_point(0.4, 0.1, 0.1).unwrap();
        assert!((p.ambiguous_value - 0.12).abs() < 1e-12);
        assert!(p.ambiguous_preferred());
        for q in [0.0, 0.05, 0.3, 0.9, 1.0] {
            for d in [0.05, 0.2, 0.5] {
                assert!(heu_point(1.0, q, d).unwrap().risky_weakly_preferred());
            }
        }
    }

    #[test]
    fn clipping_reverses_at_low_chances() {
        // With pessimism above one half, only clipping at 0 can favor the
        // ambiguous bet; it does when q < (1 - alpha) * delta / alpha.
        let alpha = 0.6;
        let delta = 0.2;
        let threshold = (1.0 - alpha) * delta / alpha;
        for i in 0..=100 {
            let q = i as f64 / 100.0;
            let p = heu_point(alpha, q, delta).unwrap();
            let expected = q < delta && q < threshold - 1e-12;
            assert_eq!(p.ambiguous_preferred(), expected, "q = {q}");
        }
    }

    #[test]
    fn region_contains_defaults() {
        let g = Grid::parse("alpha=0.8,beta=0.5,gamma=0:0.5:0.25", &PEU_AXES).unwrap();
        let r = peu_region(&g, &Section3Options::new(1.0, 1.0).unwrap()).unwrap();
        assert!(r.contains(0.8, 0.5, 0.25));
        assert!(!r.contains(0.8, 0.5, 0.0));
    }
}

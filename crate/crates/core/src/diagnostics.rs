//! Conserved-quantity ledgers, drift statistics, convergence orders and
//! stability probing.

use crate::error::{Error, Result};
use std::io::Write;

/// One ledger row.
#[derive(Debug, Clone, PartialEq)]
pub struct Entry {
    pub step: u64,
    pub time: f64,
    pub values: Vec<f64>,
}

/// Time series of labelled scalar diagnostics with strictly increasing steps.
#[derive(Debug, Clone, PartialEq)]
pub struct ConservedSeries {
    labels: Vec<String>,
    entries: Vec<Entry>,
}

impl ConservedSeries {
    pub fn new<S: Into<String>>(labels: impl IntoIterator<Item = S>) -> Self {
        Self {
            labels: labels.into_iter().map(Into::into).collect(),
            entries: Vec::new(),
        }
    }

    pub fn push(&mut self, step: u64, time: f64, values: Vec<f64>) -> Result<()> {
        if values.len() != self.labels.len() {
            return Err(Error::Shape(format!(
                "{} labels but {} values",
                self.labels.len(),
                values.len()
            )));
        }
        if let Some(last) = self.entries.last() {
            if step <= last.step {
                return Err(Error::InvalidParameter {
                    name: "step",
                    reason: format!("steps must increase, got {step} after {}", last.step),
                });
            }
        }
        self.entries.push(Entry { step, time, values });
        Ok(())
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn entries(&self) -> &[Entry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn column(&self, label: &str) -> Result<Vec<f64>> {
        let idx = self
            .labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))?;
        Ok(self.entries.iter().map(|e| e.values[idx]).collect())
    }

    /// Header `step,time,<labels>` then one row per entry, floats with 17
    /// significant digits.
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        write!(w, "step,time")?;
        for l in &self.labels {
            write!(w, ",{l}")?;
        }
        writeln!(w)?;
        for e in &self.entries {
            write!(w, "{},{:.16e}", e.step, e.time)?;
            for v in &e.values {
                write!(w, ",{v:.16e}")?;
            }
            writeln!(w)?;
        }
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to a Vec cannot fail");
        String::from_utf8(buf).expect("ascii output")
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DriftReport {
    pub max_abs_drift: f64,
    pub max_rel_drift: f64,
    pub first_value: f64,
}

/// Guard against division by an exactly zero first value.
pub const TINY: f64 = 1e-300;

/// `max_n |x_n − x_0|` and the same over `max(|x_0|, 1e−300)`.
pub fn drift_report(series: &ConservedSeries, label: &str) -> Result<DriftReport> {
    drift_of(&series.column(label)?)
}

/// [`drift_report`] on a bare sequence.
pub fn drift_of(values: &[f64]) -> Result<DriftReport> {
    let first = *values.first().ok_or(Error::EmptySeries)?;
    if !first.is_finite() {
        return Err(Error::InvalidParameter {
            name: "series",
            reason: "first value is not finite".into(),
        });
    }
    let max_abs_drift = values.iter().fold(0.0_f64, |m, x| m.max((x - first).abs()));
    Ok(DriftReport {
        max_abs_drift,
        max_rel_drift: max_abs_drift / first.abs().max(TINY),
        first_value: first,
    })
}

/// Least-squares slope of `log err` against `log h`.
pub fn convergence_order(points: &[(f64, f64)]) -> Result<f64> {
    if points.len() < 3 {
        return Err(Error::InvalidParameter {
            name: "errors",
            reason: format!("need at least 3 points, got {}", points.len()),
        });
    }
    if let Some((h, e)) = points
        .iter()
        .find(|(h, e)| !(*h > 0.0 && *e > 0.0 && h.is_finite() && e.is_finite()))
    {
        return Err(Error::InvalidParameter {
            name: "errors",
            reason: format!("h and err must be positive, got ({h}, {e})"),
        });
    }
    let n = points.len() as f64;
    let xs: Vec<f64> = points.iter().map(|p| p.0.ln()).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.1.ln()).collect();
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    if sxx == 0.0 {
        return Err(Error::InvalidParameter {
            name: "errors",
            reason: "all h values are equal".into(),
        });
    }
    Ok(sxy / sxx)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stability {
    Stable,
    UnstableAt(u64),
}

pub const DEFAULT_BLOWUP: f64 = 1e3;

/// Steps `state` up to `n_steps` times and reports the first step whose
/// norm exceeds `blowup_factor` times the initial norm. A step that fails
/// with an instability error counts as blow-up at that step.
pub fn stability_probe<S>(
    mut step: impl FnMut(&S) -> Result<S>,
    norm: impl Fn(&S) -> f64,
    state: S,
    n_steps: u64,
    blowup_factor: f64,
) -> Result<Stability> {
    if !(blowup_factor > 1.0) {
        return Err(Error::InvalidParameter {
            name: "blowup_factor",
            reason: format!("must exceed 1, got {blowup_factor}"),
        });
    }
    let limit = blowup_factor * norm(&state);
    let mut cur = state;
    for k in 1..=n_steps {
        cur = match step(&cur) {
            Ok(s) => s,
            Err(Error::Instability { .. }) => return Ok(Stability::UnstableAt(k)),
            Err(e) => return Err(e),
        };
        let nrm = norm(&cur);
        if !nrm.is_finite() || nrm > limit {
            return Ok(Stability::UnstableAt(k));
        }
    }
    Ok(Stability::Stable)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn drift_examples() {
        let mut s = ConservedSeries::new(["C"]);
        s.push(0, 0.0, vec![3.0]).unwrap();
        s.push(1, 0.1, vec![3.0]).unwrap();
        assert_eq!(
            drift_report(&s, "C").unwrap(),
            DriftReport {
                max_abs_drift: 0.0,
                max_rel_drift: 0.0,
                first_value: 3.0
            }
        );
        let r = drift_of(&[1.0, 1.0 + 1e-13]).unwrap();
        assert!((r.max_rel_drift - 1e-13).abs() < 1e-16);
        assert!(matches!(drift_report(&s, "X"), Err(Error::UnknownLabel(_))));
        assert!(matches!(drift_of(&[]), Err(Error::EmptySeries)));
    }

    #[test]
    fn series_validation() {
        let mut s = ConservedSeries::new(["a", "b"]);
        assert!(s.push(0, 0.0, vec![1.0]).is_err());
        s.push(2, 0.0, vec![1.0, 2.0]).unwrap();
        assert!(s.push(2, 0.0, vec![1.0, 2.0]).is_err());
    }

    #[test]
    fn csv_layout() {
        let mut s = ConservedSeries::new(["C_n"]);
        s.push(0, 0.0, vec![0.1]).unwrap();
        let text = s.to_csv_string();
        assert_eq!(text, "step,time,C_n\n0,0.0000000000000000e0,1.0000000000000001e-1\n");
    }

    #[test]
    fn orders() {
        let sq: Vec<_> = [0.1, 0.05, 0.025].iter().map(|h| (*h, h * h)).collect();
        assert!((convergence_order(&sq).unwrap() - 2.0).abs() < 1e-12);
        let lin: Vec<_> = [0.1, 0.05, 0.025].iter().map(|h| (*h, 3.0 * h)).collect();
        assert!((convergence_order(&lin).unwrap() - 1.0).abs() < 1e-12);
        assert!(convergence_order(&sq[..2]).is_err());
        assert!(convergence_order(&[(0.1, 0.0), (0.05, 1.0), (0.02, 1.0)]).is_err());
    }

    #[test]
    fn probe_zero_state() {
        let r = stability_probe(|x: &f64| Ok(2.0 * x), |x| x.abs(), 0.0, 100, DEFAULT_BLOWUP).unwrap();
        assert_eq!(r, Stability::Stable);
        let r = stability_probe(|x: &f64| Ok(2.0 * x), |x| x.abs(), 1.0, 100, DEFAULT_BLOWUP).unwrap();
        assert_eq!(r, Stability::UnstableAt(10));
    }
}

//! Test-function catalog.
//!
//! Every function has minimum value 0. The smooth families (sphere, cigar,
//! ellipsoid, discus) attain it at the origin; Rosenbrock at `(1, ..., 1)`;
//! Lunacek at `(2.5, ..., 2.5)`. Formulas, with `d` the dimension and `i`
//! counted from 1:
//!
//! | name | formula |
//! |---|---|
//! | Sphere | `Σ x_i²` |
//! | Cigar | `x_1² + 1e6 Σ_{i≥2} x_i²` |
//! | AltCigar | `x_d² + 1e6 Σ_{i<d} x_i²` |
//! | Ellipsoid | `Σ 10^{6(i-1)/(d-1)} x_i²` |
//! | AltEllipsoid | `Σ 10^{6(d-i)/(d-1)} x_i²` |
//! | StepEllipsoid | Ellipsoid of `round(x_i)` plus `0.01` Ellipsoid of `x` |
//! | Discus | `1e6 x_1² + Σ_{i≥2} x_i²` |
//! | BentCigar | Cigar of `T_asy^{0.5}(x)` |
//! | Rastrigin | `10 d + Σ (x_i² - 10 cos 2πx_i)` |
//! | BucheRastrigin | Rastrigin of `s_i x_i`, `s_i = 10^{(i-1)/(2(d-1))}`, times 10 when `i` is odd and `x_i > 0` |
//! | Griewank | `1 + Σ x_i²/4000 - Π cos(x_i/√i)` |
//! | Rosenbrock | `Σ_{i<d} 100 (x_{i+1} - x_i²)² + (1 - x_i)²` (`(1 - x_1)²` when `d = 1`) |
//! | Ackley | `-20 exp(-0.2 √(Σx_i²/d)) - exp(Σ cos(2πx_i)/d) + 20 + e` |
//! | Lunacek | `min(Σ(x_i-2.5)², d + s Σ(x_i-μ₁)²) + 10 Σ(1 - cos 2π(x_i-2.5))` |
//! | Hm | `Σ x_i² (1.1 + cos(1/x_i))`, a term is 0 when `x_i = 0` |
//! | Multipeak | `min(Σ x_i², 0.5 + Σ (x_i - 2)²)` |
//! | DoubleLinearSlope | `|Σ x_i|` |
//! | StepDoubleLinearSlope | `|Σ round(x_i)|` |
//! | DeceptiveIllcond | `max(|atan(x_2/x_1)|, r, [x_1 > 0])` with `r = √(x_1²+x_2²)` |
//! | DeceptiveMultimodal | `r` if `x_1 > 0` and `|cos(1/r) - atan(x_2/x_1)| ≤ 0.1`, else `1 + r` |
//! | DeceptivePath | `r` if `x_1 > 0` and `|sin(1/r)|·r ≤ |x_2|`, else `1 + r` |
//!
//! The deceptive functions only look at the first two coordinates (the second
//! is taken as 0 when `d = 1`).

use std::f64::consts::{E, PI};
use std::fmt;
use std::str::FromStr;

use crate::error::BenchError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TestFunction {
    Sphere,
    Cigar,
    AltCigar,
    Ellipsoid,
    AltEllipsoid,
    StepEllipsoid,
    Discus,
    BentCigar,
    Rastrigin,
    BucheRastrigin,
    Griewank,
    Rosenbrock,
    Ackley,
    Lunacek,
    Hm,
    Multipeak,
    DoubleLinearSlope,
    StepDoubleLinearSlope,
    DeceptiveIllcond,
    DeceptiveMultimodal,
    DeceptivePath,
}

/// Conditioning constant of the cigar, discus and ellipsoid families.
pub const CONDITIONING: f64 = 1e6;

impl TestFunction {
    pub const ALL: [TestFunction; 21] = [
        TestFunction::Sphere,
        TestFunction::Cigar,
        TestFunction::AltCigar,
        TestFunction::Ellipsoid,
        TestFunction::AltEllipsoid,
        TestFunction::StepEllipsoid,
        TestFunction::Discus,
        TestFunction::BentCigar,
        TestFunction::Rastrigin,
        TestFunction::BucheRastrigin,
        TestFunction::Griewank,
        TestFunction::Rosenbrock,
        TestFunction::Ackley,
        TestFunction::Lunacek,
        TestFunction::Hm,
        TestFunction::Multipeak,
        TestFunction::DoubleLinearSlope,
        TestFunction::StepDoubleLinearSlope,
        TestFunction::DeceptiveIllcond,
        TestFunction::DeceptiveMultimodal,
        TestFunction::DeceptivePath,
    ];

    pub fn name(self) -> &'static str {
        match self {
            TestFunction::Sphere => "Sphere",
            TestFunction::Cigar => "Cigar",
            TestFunction::AltCigar => "AltCigar",
            TestFunction::Ellipsoid => "Ellipsoid",
            TestFunction::AltEllipsoid => "AltEllipsoid",
            TestFunction::StepEllipsoid => "StepEllipsoid",
            TestFunction::Discus => "Discus",
            TestFunction::BentCigar => "BentCigar",
            TestFunction::Rastrigin => "Rastrigin",
            TestFunction::BucheRastrigin => "BucheRastrigin",
            TestFunction::Griewank => "Griewank",
            TestFunction::Rosenbrock => "Rosenbrock",
            TestFunction::Ackley => "Ackley",
            TestFunction::Lunacek => "Lunacek",
            TestFunction::Hm => "Hm",
            TestFunction::Multipeak => "Multipeak",
            TestFunction::DoubleLinearSlope => "DoubleLinearSlope",
            TestFunction::StepDoubleLinearSlope => "StepDoubleLinearSlope",
            TestFunction::DeceptiveIllcond => "DeceptiveIllcond",
            TestFunction::DeceptiveMultimodal => "DeceptiveMultimodal",
            TestFunction::DeceptivePath => "DeceptivePath",
        }
    }

    pub fn evaluate(self, x: &[f64]) -> f64 {
        let d = x.len();
        match self {
            TestFunction::Sphere => sphere(x),
            TestFunction::Cigar => x[0] * x[0] + CONDITIONING * sphere(&x[1..]),
            TestFunction::AltCigar => x[d - 1] * x[d - 1] + CONDITIONING * sphere(&x[..d - 1]),
            TestFunction::Ellipsoid => ellipsoid(x.iter().copied()),
            TestFunction::AltEllipsoid => ellipsoid(x.iter().rev().copied()),
            TestFunction::StepEllipsoid => {
                ellipsoid(x.iter().map(|v| v.round())) + 0.01 * ellipsoid(x.iter().copied())
            }
            TestFunction::Discus => CONDITIONING * x[0] * x[0] + sphere(&x[1..]),
            TestFunction::BentCigar => {
                let z = asymmetric(x, 0.5);
                z[0] * z[0] + CONDITIONING * sphere(&z[1..])
            }
            TestFunction::Rastrigin => rastrigin(x.iter().copied()),
            TestFunction::BucheRastrigin => rastrigin(x.iter().enumerate().map(|(i, &v)| {
                let mut s = 10f64.powf(0.5 * frac(i, d));
                if i % 2 == 0 && v > 0.0 {
                    s *= 10.0;
                }
                s * v
            })),
            TestFunction::Griewank => {
                let sum: f64 = x.iter().map(|v| v * v / 4000.0).sum();
                let prod: f64 = x.iter().enumerate().map(|(i, v)| (v / ((i + 1) as f64).sqrt()).cos()).product();
                1.0 + sum - prod
            }
            TestFunction::Rosenbrock => {
                if d == 1 {
                    return (1.0 - x[0]).powi(2);
                }
                x.windows(2).map(|w| 100.0 * (w[1] - w[0] * w[0]).powi(2) + (1.0 - w[0]).powi(2)).sum()
            }
            TestFunction::Ackley => {
                let n = d as f64;
                let a = (sphere(x) / n).sqrt();
                let b = x.iter().map(|v| (2.0 * PI * v).cos()).sum::<f64>() / n;
                // clamp the rounding residue at the optimum
                (-20.0 * (-0.2 * a).exp() - b.exp() + 20.0 + E).max(0.0)
            }
            TestFunction::Lunacek => {
                let n = d as f64;
                let mu0 = 2.5;
                let s = 1.0 - 1.0 / (2.0 * (n + 20.0).sqrt() - 8.2);
                let mu1 = -((mu0 * mu0 - 1.0) / s).sqrt();
                let first: f64 = x.iter().map(|v| (v - mu0).powi(2)).sum();
                let second: f64 = n + s * x.iter().map(|v| (v - mu1).powi(2)).sum::<f64>();
                let ripple: f64 = x.iter().map(|v| 1.0 - (2.0 * PI * (v - mu0)).cos()).sum();
                first.min(second) + 10.0 * ripple
            }
            TestFunction::Hm => x
                .iter()
                .map(|&v| if v == 0.0 { 0.0 } else { v * v * (1.1 + (1.0 / v).cos()) })
                .sum(),
            TestFunction::Multipeak => sphere(x).min(0.5 + x.iter().map(|v| (v - 2.0).powi(2)).sum::<f64>()),
            TestFunction::DoubleLinearSlope => x.iter().sum::<f64>().abs(),
            TestFunction::StepDoubleLinearSlope => x.iter().map(|v| v.round()).sum::<f64>().abs(),
            TestFunction::DeceptiveIllcond => {
                let (x1, x2) = first_two(x);
                let r = x1.hypot(x2);
                let angle = if x1 == 0.0 { PI / 2.0 } else { (x2 / x1).atan().abs() };
                angle.max(r).max(if x1 > 0.0 { 1.0 } else { 0.0 })
            }
            TestFunction::DeceptiveMultimodal => {
                let (x1, x2) = first_two(x);
                let r = x1.hypot(x2);
                if r > 0.0 && x1 > 0.0 && ((1.0 / r).cos() - (x2 / x1).atan()).abs() <= 0.1 {
                    r
                } else {
                    1.0 + r
                }
            }
            TestFunction::DeceptivePath => {
                let (x1, x2) = first_two(x);
                let r = x1.hypot(x2);
                if r > 0.0 && x1 > 0.0 && (1.0 / r).sin().abs() * r <= x2.abs() {
                    r
                } else {
                    1.0 + r
                }
            }
        }
    }
}

impl fmt::Display for TestFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for TestFunction {
    type Err = BenchError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        TestFunction::ALL
            .into_iter()
            .find(|f| f.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| BenchError::UnknownFunction(s.to_string()))
    }
}

fn sphere(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum()
}

/// `(i - 1) / (d - 1)` for zero-based `i`, 0 when `d = 1`.
fn frac(i: usize, d: usize) -> f64 {
    if d <= 1 {
        0.0
    } else {
        i as f64 / (d - 1) as f64
    }
}

fn ellipsoid(x: impl ExactSizeIterator<Item = f64>) -> f64 {
    let d = x.len();
    x.enumerate().map(|(i, v)| CONDITIONING.powf(frac(i, d)) * v * v).sum()
}

fn rastrigin(x: impl Iterator<Item = f64>) -> f64 {
    x.map(|v| v * v - 10.0 * (2.0 * PI * v).cos() + 10.0).sum::<f64>().max(0.0)
}

/// Asymmetric transform: positive coordinates are raised to
/// `1 + beta * frac(i) * sqrt(x_i)`.
fn asymmetric(x: &[f64], beta: f64) -> Vec<f64> {
    let d = x.len();
    x.iter()
        .enumerate()
        .map(|(i, &v)| if v > 0.0 { v.powf(1.0 + beta * frac(i, d) * v.sqrt()) } else { v })
        .collect()
}

fn first_two(x: &[f64]) -> (f64, f64) {
    (x[0], x.get(1).copied().unwrap_or(0.0))
}

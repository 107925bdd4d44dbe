//! One-dimensional minimization driven one probe at a time.
//!
//! A golden-ratio bracket expansion is followed by Brent's method (golden
//! section with parabolic interpolation). The caller evaluates `probe()` and
//! passes the value to `feed`, which returns the minimizer once converged.

const GOLD: f64 = 1.618_033_988_749_895;
const CGOLD: f64 = 0.381_966_011_250_105_1;
const MAX_EXPANSIONS: usize = 50;
const MAX_BRENT_ITERATIONS: usize = 100;

/// Absolute tolerance on the step length, in units of the initial step.
pub const LINE_TOLERANCE: f64 = 1e-10;
/// Fractional tolerance on the step length. Resolving a minimizer more
/// finely than this buys little inside Powell's outer iteration.
pub const FRACTIONAL_TOLERANCE: f64 = 2e-4;

#[derive(Debug, Clone)]
struct Brent {
    a: f64,
    b: f64,
    x: f64,
    w: f64,
    v: f64,
    fx: f64,
    fw: f64,
    fv: f64,
    d: f64,
    e: f64,
    u: f64,
    iterations: usize,
    abs_tol: f64,
}

impl Brent {
    fn new(ax: f64, bx: f64, cx: f64, fb: f64, abs_tol: f64) -> Self {
        Self {
            a: ax.min(cx),
            b: ax.max(cx),
            x: bx,
            w: bx,
            v: bx,
            fx: fb,
            fw: fb,
            fv: fb,
            d: 0.0,
            e: 0.0,
            u: bx,
            iterations: 0,
            abs_tol,
        }
    }

    /// Next abscissa to evaluate, or `None` when converged.
    fn plan(&mut self) -> Option<f64> {
        if self.iterations >= MAX_BRENT_ITERATIONS {
            return None;
        }
        self.iterations += 1;
        let xm = 0.5 * (self.a + self.b);
        let tol1 = FRACTIONAL_TOLERANCE * self.x.abs() + self.abs_tol;
        let tol2 = 2.0 * tol1;
        if (self.x - xm).abs() <= tol2 - 0.5 * (self.b - self.a) {
            return None;
        }
        let golden = |s: &Self| if s.x >= xm { s.a - s.x } else { s.b - s.x };
        if self.e.abs() > tol1 {
            let r = (self.x - self.w) * (self.fx - self.fv);
            let mut q = (self.x - self.v) * (self.fx - self.fw);
            let mut p = (self.x - self.v) * q - (self.x - self.w) * r;
            q = 2.0 * (q - r);
            if q > 0.0 {
                p = -p;
            }
            q = q.abs();
            let etemp = self.e;
            self.e = self.d;
            if p.abs() >= (0.5 * q * etemp).abs() || p <= q * (self.a - self.x) || p >= q * (self.b - self.x) {
                self.e = golden(self);
                self.d = CGOLD * self.e;
            } else {
                self.d = p / q;
                let u = self.x + self.d;
                if u - self.a < tol2 || self.b - u < tol2 {
                    self.d = tol1.copysign(xm - self.x);
                }
            }
        } else {
            self.e = golden(self);
            self.d = CGOLD * self.e;
        }
        self.u = if self.d.abs() >= tol1 { self.x + self.d } else { self.x + tol1.copysign(self.d) };
        Some(self.u)
    }

    fn feed(&mut self, fu: f64) {
        let u = self.u;
        if fu <= self.fx {
            if u >= self.x {
                self.a = self.x;
            } else {
                self.b = self.x;
            }
            self.v = self.w;
            self.fv = self.fw;
            self.w = self.x;
            self.fw = self.fx;
            self.x = u;
            self.fx = fu;
        } else {
            if u < self.x {
                self.a = u;
            } else {
                self.b = u;
            }
            if fu <= self.fw || self.w == self.x {
                self.v = self.w;
                self.fv = self.fw;
                self.w = u;
                self.fw = fu;
            } else if fu <= self.fv || self.v == self.x || self.v == self.w {
                self.v = u;
                self.fv = fu;
            }
        }
    }
}

#[derive(Debug, Clone)]
enum Phase {
    First { h: f64 },
    Expand { a: (f64, f64), b: (f64, f64), c: f64, expansions: usize },
    Refine(Brent),
}

/// Minimizes `t -> f(origin + t * direction)` starting from `f(origin)`.
#[derive(Debug, Clone)]
pub struct LineSearch {
    f_origin: f64,
    abs_tol: f64,
    phase: Phase,
}

impl LineSearch {
    /// `initial_step` is the first trial step; it also sets the absolute
    /// tolerance (`LINE_TOLERANCE * initial_step`).
    pub fn new(f_origin: f64, initial_step: f64) -> Self {
        let h = initial_step.abs().max(f64::MIN_POSITIVE);
        Self { f_origin, abs_tol: LINE_TOLERANCE * h, phase: Phase::First { h } }
    }

    /// Step length to evaluate next.
    pub fn probe(&self) -> f64 {
        match &self.phase {
            Phase::First { h } => *h,
            Phase::Expand { c, .. } => *c,
            Phase::Refine(brent) => brent.u,
        }
    }

    /// Feeds the value at `probe()`; returns `(t, f(t))` of the best step once done.
    pub fn feed(&mut self, value: f64) -> Option<(f64, f64)> {
        match &mut self.phase {
            Phase::First { h } => {
                let (mut a, mut b) = ((0.0, self.f_origin), (*h, value));
                if b.1 > a.1 {
                    std::mem::swap(&mut a, &mut b);
                }
                let c = b.0 + GOLD * (b.0 - a.0);
                self.phase = Phase::Expand { a, b, c, expansions: 0 };
                None
            }
            Phase::Expand { a, b, c, expansions } => {
                if value < b.1 {
                    if *expansions >= MAX_EXPANSIONS {
                        return Some((*c, value));
                    }
                    *a = *b;
                    *b = (*c, value);
                    *c = b.0 + GOLD * (b.0 - a.0);
                    *expansions += 1;
                    return None;
                }
                let mut brent = Brent::new(a.0, b.0, *c, b.1, self.abs_tol);
                match brent.plan() {
                    Some(_) => {
                        self.phase = Phase::Refine(brent);
                        None
                    }
                    None => Some((brent.x, brent.fx)),
                }
            }
            Phase::Refine(brent) => {
                brent.feed(value);
                match brent.plan() {
                    Some(_) => None,
                    None => Some((brent.x, brent.fx)),
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run<F: Fn(f64) -> f64>(f: F, h: f64) -> (f64, f64, usize) {
        let mut ls = LineSearch::new(f(0.0), h);
        let mut evals = 0;
        loop {
            let t = ls.probe();
            evals += 1;
            if let Some((t, ft)) = ls.feed(f(t)) {
                return (t, ft, evals);
            }
        }
    }

    #[test]
    fn quadratic_minimum_found() {
        let (t, ft, evals) = run(|t| (t - 3.7).powi(2) + 1.0, 1.0);
        assert!((t - 3.7).abs() < 1e-6, "t = {t}");
        assert!((ft - 1.0).abs() < 1e-12);
        assert!(evals < 40, "{evals} evaluations");
    }

    #[test]
    fn minimum_behind_origin() {
        let (t, _, _) = run(|t| (t + 0.02).powi(2), 1.0);
        assert!((t + 0.02).abs() < 1e-7);
    }

    #[test]
    fn never_worse_than_origin() {
        let f = |t: f64| (5.0 * t).sin() + 0.1 * t * t;
        let (_, ft, _) = run(f, 0.3);
        assert!(ft <= f(0.0));
    }
}

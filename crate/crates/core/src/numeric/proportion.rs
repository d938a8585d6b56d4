use super::{generalized_mean, PowerProfile, Tolerance};
use crate::error::{Error, Result};

fn check_component(x: f64, p: f64, what: &str) -> Result<()> {
    if !x.is_finite() || x < 0.0 || (x == 0.0 && p <= 0.0) {
        return Err(Error::domain(format!(
            "{what} = {x} is outside the domain of power {p}"
        )));
    }
    Ok(())
}

/// `a : b ::^p c : d` on scalars, i.e. `a^p + d^p = b^p + c^p`
/// (`a·d = b·c` when `p = 0`) up to `tol`.
pub fn scalar_analogy_holds(a: f64, b: f64, c: f64, d: f64, p: f64, tol: Tolerance) -> Result<bool> {
    for (x, name) in [(a, "a"), (b, "b"), (c, "c"), (d, "d")] {
        check_component(x, p, name)?;
    }
    Ok(scalar_holds_unchecked(a, b, c, d, p, tol))
}

pub(crate) fn scalar_holds_unchecked(a: f64, b: f64, c: f64, d: f64, p: f64, tol: Tolerance) -> bool {
    if p == 0.0 {
        let (ext, mid) = (a * d, b * c);
        return tol.accepts(ext - mid, ext.max(mid));
    }
    let (pa, pb, pc, pd) = (a.powf(p), b.powf(p), c.powf(p), d.powf(p));
    let scale = pa.max(pb).max(pc).max(pd);
    tol.accepts((pa - pb) + (pd - pc), scale)
}

/// Componentwise analogy `a : b ::^p c : d` for vectors in `R₊ⁿ`.
pub fn analogy_holds(
    a: &[f64],
    b: &[f64],
    c: &[f64],
    d: &[f64],
    profile: &PowerProfile,
    tol: Tolerance,
) -> Result<bool> {
    let n = profile.dim();
    for (v, name) in [(a, "a"), (b, "b"), (c, "c"), (d, "d")] {
        if v.len() != n {
            return Err(Error::usage(format!(
                "vector {name} has dimension {}, profile has {n}",
                v.len()
            )));
        }
    }
    let mut holds = true;
    for (j, &p) in profile.p().iter().enumerate() {
        holds &= scalar_analogy_holds(a[j], b[j], c[j], d[j], p, tol)?;
    }
    Ok(holds)
}

/// Solution `y` of `a : b ::^q c : y` with the default tolerance.
pub fn sol(a: f64, b: f64, c: f64, q: f64) -> Result<Option<f64>> {
    sol_with(a, b, c, q, Tolerance::default())
}

/// Solution `y = (b^q + c^q - a^q)^(1/q)` of `a : b ::^q c : y`, or `None`
/// when `a^q > b^q + c^q` beyond `tol`. A radicand within tolerance of zero
/// is clamped to zero.
pub fn sol_with(a: f64, b: f64, c: f64, q: f64, tol: Tolerance) -> Result<Option<f64>> {
    if !(q.is_finite() && q > 0.0) {
        return Err(Error::usage(format!("sol requires q > 0, got {q}")));
    }
    for (x, name) in [(a, "a"), (b, "b"), (c, "c")] {
        if !x.is_finite() || x < 0.0 {
            return Err(Error::domain(format!("{name} = {x} must be a nonnegative real")));
        }
    }
    let (pa, pb, pc) = (a.powf(q), b.powf(q), c.powf(q));
    Ok(solve_radicand((pb - pa) + pc, pa.max(pb).max(pc), q, tol))
}

/// Shared tail of every `sol_q`: `radicand = b^q + c^q - a^q`, `scale` the magnitude it came from.
pub(crate) fn solve_radicand(radicand: f64, scale: f64, q: f64, tol: Tolerance) -> Option<f64> {
    if radicand >= 0.0 {
        Some(radicand.powf(1.0 / q))
    } else if tol.accepts(radicand, scale) {
        Some(0.0)
    } else {
        None
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolvePowerOptions {
    /// Largest `k` tried for the bracket `[-2^k, 2^k]`.
    pub max_doublings: u32,
    pub bisection_steps: u32,
}

impl Default for SolvePowerOptions {
    fn default() -> Self {
        SolvePowerOptions {
            max_doublings: 60,
            bisection_steps: 200,
        }
    }
}

/// The unique analogical power `p` with `m_p(a, d) = m_p(b, c)` for an
/// increasing quadruple `0 < a < b ≤ c < d`, found by bisection.
pub fn solve_power(a: f64, b: f64, c: f64, d: f64, opts: SolvePowerOptions) -> Result<f64> {
    if ![a, b, c, d].iter().all(|v| v.is_finite()) || !(0.0 < a && a < b && b <= c && c < d) {
        return Err(Error::domain(format!(
            "analogical power needs 0 < a < b <= c < d, got ({a}, {b}, {c}, {d})"
        )));
    }
    let phi = |p: f64| -> Result<f64> {
        Ok(generalized_mean(&[a, d], p)? - generalized_mean(&[b, c], p)?)
    };

    let mut k = 0;
    let (mut lo, mut hi) = (-1.0f64, 1.0f64);
    loop {
        let (f_lo, f_hi) = (phi(lo)?, phi(hi)?);
        if f_lo == 0.0 {
            return Ok(lo);
        }
        if f_hi == 0.0 {
            return Ok(hi);
        }
        if f_lo < 0.0 && f_hi > 0.0 {
            break;
        }
        k += 1;
        if k > opts.max_doublings {
            return Err(Error::Convergence { lo, hi });
        }
        lo *= 2.0;
        hi *= 2.0;
    }

    for _ in 0..opts.bisection_steps {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let f_mid = phi(mid)?;
        if f_mid == 0.0 {
            return Ok(mid);
        }
        if f_mid < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    #[test]
    fn scalar_examples() {
        assert!(scalar_analogy_holds(2.0, 4.0, 6.0, 8.0, 1.0, tol()).unwrap());
        assert!(scalar_analogy_holds(1.0, 2.0, 3.0, 6.0, 0.0, tol()).unwrap());
        // 9 + 49 = 58 against 16 + 36 = 52
        assert!(!scalar_analogy_holds(3.0, 4.0, 6.0, 7.0, 2.0, tol()).unwrap());
    }

    #[test]
    fn vector_checks_dimension_and_domain() {
        let prof = PowerProfile::new(vec![1.0, 0.0], 1.0).unwrap();
        assert!(analogy_holds(&[1.0, 1.0], &[2.0, 2.0], &[3.0, 3.0], &[4.0, 6.0], &prof, tol()).unwrap());
        assert!(matches!(
            analogy_holds(&[1.0], &[2.0, 2.0], &[3.0, 3.0], &[4.0, 6.0], &prof, tol()),
            Err(Error::Usage(_))
        ));
        assert!(matches!(
            analogy_holds(&[1.0, 0.0], &[2.0, 2.0], &[3.0, 3.0], &[4.0, 6.0], &prof, tol()),
            Err(Error::Domain(_))
        ));
        // zeros are fine where the exponent is positive
        assert!(analogy_holds(&[0.0, 1.0], &[1.0, 2.0], &[1.0, 3.0], &[2.0, 6.0], &prof, tol()).unwrap());
    }

    #[test]
    fn sol_examples() {
        assert_eq!(sol(1.0, 2.0, 3.0, 1.0).unwrap(), Some(4.0));
        assert_eq!(sol(0.0, 3.0, 4.0, 2.0).unwrap(), Some(5.0));
        assert_eq!(sol(5.0, 1.0, 2.0, 1.0).unwrap(), None);
        for q in [0.3, 1.0, 2.0, 7.5] {
            let y = sol(1.7, 1.7, 4.2, q).unwrap().unwrap();
            assert!((y - 4.2).abs() <= 1e-14 * 4.2, "q={q}: {y}");
        }
        assert!(matches!(sol(1.0, 1.0, 1.0, 0.0), Err(Error::Usage(_))));
    }

    #[test]
    fn sol_clamps_at_boundary() {
        // 3 = 1 + 2 up to rounding; the radicand sits on zero
        let y = sol(3.0, 1.0, 2.0, 1.0).unwrap().unwrap();
        assert_eq!(y, 0.0);
        let a = (0.1f64 + 0.2).sqrt();
        let y = sol(a, 0.1f64.sqrt(), 0.2f64.sqrt(), 2.0).unwrap();
        assert!(y.is_some());
    }

    #[test]
    fn solve_power_examples() {
        let opts = SolvePowerOptions::default();
        assert!((solve_power(3.0, 4.0, 6.0, 7.0, opts).unwrap() - 1.0).abs() < 1e-12);
        assert!(solve_power(1.0, 2.0, 3.0, 6.0, opts).unwrap().abs() < 1e-12);
        // 1 + 4^p = 2·2^p only at 2^p = 1
        assert!(solve_power(1.0, 2.0, 2.0, 4.0, opts).unwrap().abs() < 1e-12);
    }

    #[test]
    fn solve_power_errors() {
        let opts = SolvePowerOptions::default();
        assert!(matches!(solve_power(2.0, 1.0, 3.0, 4.0, opts), Err(Error::Domain(_))));
        assert!(matches!(solve_power(1.0, 2.0, 3.0, 3.0, opts), Err(Error::Domain(_))));
        let tight = SolvePowerOptions {
            max_doublings: 2,
            bisection_steps: 10,
        };
        // 1.01^p = 2 puts the root near p = 70, outside [-4, 4]
        let err = solve_power(1.0, 50.0, 50.0, 50.5, tight).unwrap_err();
        assert_eq!(err, Error::Convergence { lo: -4.0, hi: 4.0 });
    }
}

//! Adaptive Gauss-Kronrod (G7K15) quadrature for the radial decay integrals.
//!
//! The integrands here are smooth and rapidly decaying, so a classic
//! globally-adaptive bisection driven by the Kronrod error estimate
//! converges in a handful of panels. Panel selection scans for the largest
//! error (first index wins ties), keeping results deterministic.

use crate::error::{Error, Result};

// 15-point Kronrod abscissae on [-1, 1]; odd indices are the embedded
// 7-point Gauss nodes.
const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];

const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];

const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

/// One G7K15 panel: returns (kronrod value, error estimate).
fn gk15(f: &impl Fn(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);

    let fc = f(center);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];

    for j in 0..7 {
        let x = half * XGK[j];
        let f1 = f(center - x);
        let f2 = f(center + x);
        kronrod += WGK[j] * (f1 + f2);
        if j % 2 == 1 {
            gauss += WG[j / 2] * (f1 + f2);
        }
    }
    kronrod *= half;
    gauss *= half;

    // |K - G| estimates the embedded-Gauss error and so overestimates the
    // Kronrod error; floored near roundoff so converged panels settle.
    let err = (kronrod - gauss).abs().max(kronrod.abs() * 1e-16);
    (kronrod, err)
}

struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

/// Globally adaptive integral of `f` over [a, b] to the requested
/// tolerances. `max_panels` bounds the subdivision work.
pub fn integrate(
    f: &impl Fn(f64) -> f64,
    a: f64,
    b: f64,
    rel_tol: f64,
    abs_tol: f64,
    max_panels: usize,
) -> Result<f64> {
    if a == b {
        return Ok(0.0);
    }
    let (v, e) = gk15(f, a, b);
    let mut panels = vec![Panel { a, b, value: v, error: e }];

    loop {
        let total: f64 = panels.iter().map(|p| p.value).sum();
        let err: f64 = panels.iter().map(|p| p.error).sum();
        if err <= abs_tol.max(rel_tol * total.abs()) {
            return Ok(total);
        }
        if panels.len() >= max_panels {
            return Err(Error::QuadratureNonConvergence(format!(
                "error {err:.3e} above tolerance after {} panels on [{a}, {b}]",
                panels.len()
            )));
        }
        // split the worst panel
        let worst = panels
            .iter()
            .enumerate()
            .max_by(|(_, p), (_, q)| p.error.partial_cmp(&q.error).expect("finite errors"))
            .map(|(i, _)| i)
            .expect("nonempty");
        let Panel { a: pa, b: pb, .. } = panels[worst];
        let mid = 0.5 * (pa + pb);
        if mid <= pa || mid >= pb {
            // interval exhausted at machine precision; accept what we have
            return Ok(panels.iter().map(|p| p.value).sum());
        }
        let (v1, e1) = gk15(f, pa, mid);
        let (v2, e2) = gk15(f, mid, pb);
        panels[worst] = Panel { a: pa, b: mid, value: v1, error: e1 };
        panels.push(Panel { a: mid, b: pb, value: v2, error: e2 });
    }
}

/// Integral of `f` over [0, infinity) for integrands with super-exponential
/// tails: integrate doubling blocks [R, 2R] until two consecutive blocks
/// contribute below `tail_tol` relative to the running total.
pub fn integrate_to_infinity(f: &impl Fn(f64) -> f64, rel_tol: f64, tail_tol: f64) -> Result<f64> {
    const MAX_DOUBLINGS: usize = 64;
    const MAX_PANELS: usize = 4000;

    let mut right = 1.0f64;
    let mut total = integrate(f, 0.0, right, rel_tol, 0.0, MAX_PANELS)?;
    let mut negligible_blocks = 0;
    for _ in 0..MAX_DOUBLINGS {
        let next = right * 2.0;
        let abs_tol = tail_tol * total.abs();
        let block = integrate(f, right, next, rel_tol, abs_tol, MAX_PANELS)?;
        total += block;
        right = next;
        if block.abs() <= tail_tol * total.abs() || (block == 0.0 && total == 0.0) {
            negligible_blocks += 1;
            if negligible_blocks >= 2 {
                return Ok(total);
            }
        } else {
            negligible_blocks = 0;
        }
    }
    Err(Error::QuadratureNonConvergence(format!(
        "tail still contributing after extending to R = {right:.3e}"
    )))
}

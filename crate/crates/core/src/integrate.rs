//! Classical fixed-step fourth-order Runge-Kutta over small fixed-size states.

/// Advances `y` from `t` by `dt` using the classical RK4 tableau.
///
/// `project` is applied to every stage state before the derivative is
/// evaluated and to the final result, so the derivative closure only ever sees
/// states inside the caller's legal range.
pub fn rk4_step<const N: usize, F, P>(y: [f64; N], t: f64, dt: f64, mut f: F, project: P) -> [f64; N]
where
    F: FnMut(f64, &[f64; N]) -> [f64; N],
    P: Fn([f64; N]) -> [f64; N],
{
    let axpy = |a: &[f64; N], k: &[f64; N], h: f64| -> [f64; N] {
        let mut out = *a;
        for (o, ki) in out.iter_mut().zip(k) {
            *o += h * ki;
        }
        project(out)
    };

    let half = 0.5 * dt;
    let k1 = f(t, &y);
    let k2 = f(t + half, &axpy(&y, &k1, half));
    let k3 = f(t + half, &axpy(&y, &k2, half));
    let k4 = f(t + dt, &axpy(&y, &k3, dt));

    let mut out = y;
    for i in 0..N {
        out[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    project(out)
}

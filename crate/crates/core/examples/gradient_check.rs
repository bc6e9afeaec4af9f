//! Exact input jets and parameter gradients against central differences.
//!
//! ```bash
//! cargo run --example gradient_check
//! ```

use stratified_pinn::net::{accumulate_gradient, eval_jet, forward, init_params, JetAdjoint, JetOrder, Parallelism};
use stratified_pinn::{NetworkShape, Point};

fn main() -> stratified_pinn::Result<()> {
    let params = init_params(&NetworkShape::new(vec![8, 6, 4])?, 3);
    let (x, t) = (0.7, 1.3);
    let j = eval_jet(&params, x, t)?;
    let h = 1e-4;
    let f = |x: f64, t: f64| forward(&params, x, t).unwrap();
    let fd_x = (f(x + h, t) - f(x - h, t)) / (2.0 * h);
    let fd_t = (f(x, t + h) - f(x, t - h)) / (2.0 * h);
    let fd_xx = (f(x + 1e-3, t) - 2.0 * f(x, t) + f(x - 1e-3, t)) / 1e-6;
    println!("u    = {:+.12e}", j.u);
    println!("u_x  = {:+.12e}  fd {:+.12e}", j.u_x, fd_x);
    println!("u_t  = {:+.12e}  fd {:+.12e}", j.u_t, fd_t);
    println!("u_xx = {:+.12e}  fd {:+.12e}", j.u_xx, fd_xx);

    // d/dθ of L = u_xx² at one point.
    let p = Point::new(x, t);
    let mut grad = vec![0.0; params.len()];
    accumulate_gradient(
        &params,
        &[p],
        JetOrder::Full,
        &Parallelism::Serial,
        |_, j| {
            Ok((j.u_xx * j.u_xx, JetAdjoint { u_xx: 2.0 * j.u_xx, ..Default::default() }))
        },
        &mut grad,
    )?;
    let loss = |q: &stratified_pinn::NetworkParams| eval_jet(q, x, t).unwrap().u_xx.powi(2);
    let mut worst = 0.0f64;
    for k in 0..params.len() {
        let mut plus = params.clone();
        plus.as_flat_mut()[k] += 1e-6;
        let mut minus = params.clone();
        minus.as_flat_mut()[k] -= 1e-6;
        let fd = (loss(&plus) - loss(&minus)) / 2e-6;
        worst = worst.max((fd - grad[k]).abs() / fd.abs().max(1e-8));
    }
    println!("\n{} parameter gradients of u_xx^2, worst relative gap to fd: {worst:.2e}", params.len());
    Ok(())
}

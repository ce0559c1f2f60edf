//! Green functions, their time antiderivatives and the double-layer kernel
//! in one, two and three dimensions.

use wavebie::geometry::Point;
use wavebie::kernels::{eval_h, eval_u, eval_w, KernelQuery};

fn main() -> wavebie::Result<()> {
    let x = Point::new(1.0, 0.0, 0.0);
    for dim in 1..=3 {
        let q = KernelQuery::new(dim, x, 2.0, 1.0);
        let u = eval_u(&q)?;
        let w = eval_w(&q)?;
        let h = eval_h(&q.with_direction(Point::new(1.0, 0.0, 0.0)))?;
        println!("N = {dim}: U = {:.6} (impulse {:?}), W = {w:.6}, H = {:.6}", u.regular, u.impulse.map(|i| i.weight), h.regular);
    }

    // ∂W/∂t = U away from the front, checked with a central difference
    let (t, d) = (2.0, 1e-5);
    let w = |t| eval_w(&KernelQuery::new(2, x, t, 1.0)).unwrap();
    let u = eval_u(&KernelQuery::new(2, x, t, 1.0))?.regular;
    println!("N = 2: (W(t+δ) - W(t-δ)) / 2δ = {:.8}, U = {u:.8}", (w(t + d) - w(t - d)) / (2.0 * d));

    // causality: nothing outside the light cone
    let q = KernelQuery::new(3, Point::new(3.0, 0.0, 0.0), 2.0, 1.0);
    println!("N = 3 outside the cone: U = {}", eval_u(&q)?.regular);
    Ok(())
}

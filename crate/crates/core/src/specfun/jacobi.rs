//! Jacobi polynomials by the three-term recurrence.

/// P_n^{(α,β)}(y).
pub fn jacobi_poly(n: u32, alpha: f64, beta: f64, y: f64) -> f64 {
    if n == 0 {
        return 1.0;
    }
    let ab = alpha + beta;
    let mut prev = 1.0;
    let mut cur = 0.5 * (alpha - beta) + (1.0 + 0.5 * ab) * y;
    for k in 2..=n {
        let k = k as f64;
        let c = 2.0 * k + ab;
        let a1 = 2.0 * k * (k + ab) * (c - 2.0);
        let a2 = (c - 1.0) * (alpha * alpha - beta * beta);
        let a3 = (c - 2.0) * (c - 1.0) * c;
        let a4 = 2.0 * (k + alpha - 1.0) * (k + beta - 1.0) * c;
        let next = ((a2 + a3 * y) * cur - a4 * prev) / a1;
        prev = cur;
        cur = next;
    }
    cur
}

//! Small special-function layer on top of libm.

pub use libm::erfc;

pub fn ln_gamma(x: f64) -> f64 {
    libm::lgamma(x)
}

pub fn gamma(x: f64) -> f64 {
    libm::tgamma(x)
}

/// e^{x²} with x² split into head and tail so large x keeps full precision.
fn exp_square(x: f64) -> f64 {
    let hi = x * x;
    let lo = x.mul_add(x, -hi);
    hi.exp() * lo.exp()
}

/// Scaled complementary error function e^{x²}·erfc(x), for x ≥ 0.
///
/// Below x = 26 the product is formed directly; above, a Lentz continued
/// fraction avoids the underflow of erfc.
pub fn erfcx(x: f64) -> f64 {
    if x < 26.0 {
        return exp_square(x) * erfc(x);
    }
    // erfcx(x) = (1/√π) · 1/(x + (1/2)/(x + 1/(x + (3/2)/(x + 2/(x + …)))))
    let tiny = 1e-300;
    let mut f = x;
    let mut c = x;
    let mut d = 0.0;
    for k in 1..200 {
        let a = k as f64 / 2.0;
        d = x + a * d;
        if d.abs() < tiny {
            d = tiny;
        }
        c = x + a / c;
        if c.abs() < tiny {
            c = tiny;
        }
        d = 1.0 / d;
        let delta = c * d;
        f *= delta;
        if (delta - 1.0).abs() < 1e-16 {
            break;
        }
    }
    1.0 / (f * std::f64::consts::PI.sqrt())
}

/// B₂ₚ for p = 1, 2, 3.
pub const BERNOULLI_EVEN: [f64; 3] = [1.0 / 6.0, -1.0 / 30.0, 1.0 / 42.0];

/// ln n! for small integers, exact through ln Γ.
pub fn ln_factorial(n: u32) -> f64 {
    ln_gamma(n as f64 + 1.0)
}

//! Special functions needed by the heat-split kernel evaluators: the gamma
//! function, the exponential integral E₁ and the upper incomplete gamma
//! Γ(a,z) for real order a (including a ≤ 0, which appears for fractional
//! kernels of order s > 2 through a = 2 − s).

/// Euler–Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEFFS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// Lanczos approximation to ln Γ(x), x > 0. Relative accuracy ~1e-13.
pub fn ln_gamma(x: f64) -> f64 {
    assert!(x > 0.0, "ln_gamma requires x > 0, got {x}");
    if x < 0.5 {
        // reflection: Γ(x)Γ(1−x) = π/sin(πx)
        let pi = std::f64::consts::PI;
        return (pi / (pi * x).sin()).ln() - ln_gamma(1.0 - x);
    }
    let x = x - 1.0;
    let mut a = LANCZOS_COEFFS[0];
    let t = x + LANCZOS_G + 0.5;
    for (i, &c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
        a += c / (x + i as f64);
    }
    0.5 * (2.0 * std::f64::consts::PI).ln() + (x + 0.5) * t.ln() - t + a.ln()
}

pub fn gamma(x: f64) -> f64 {
    ln_gamma(x).exp()
}

/// Exponential integral E₁(z) = ∫_z^∞ e^{−t}/t dt for z > 0.
///
/// Power series for z ≤ 1, modified-Lentz continued fraction beyond.
pub fn exp_integral_e1(z: f64) -> f64 {
    assert!(z > 0.0, "E1 requires z > 0, got {z}");
    if z <= 1.0 {
        // E1(z) = -γ - ln z + Σ_{k≥1} (-1)^{k+1} z^k / (k·k!)
        let mut sum = 0.0;
        let mut term = 1.0;
        for k in 1..=40 {
            term *= -z / k as f64;
            let add = -term / k as f64;
            sum += add;
            if add.abs() < 1e-18 * (1.0 + sum.abs()) {
                break;
            }
        }
        -EULER_GAMMA - z.ln() + sum
    } else {
        // E1(z) = e^{-z} · CF, CF = 1/(z+1- 1²/(z+3- 2²/(z+5- ...)))
        e1_continued_fraction(z) * (-z).exp()
    }
}

fn e1_continued_fraction(z: f64) -> f64 {
    let tiny = 1e-300;
    let mut b = z + 1.0;
    let mut c = 1.0 / tiny;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..200 {
        let a = -(i as f64) * (i as f64);
        b += 2.0;
        d = 1.0 / (a * d + b);
        c = b + a / c;
        let del = c * d;
        h *= del;
        if (del - 1.0).abs() < 1e-16 {
            break;
        }
    }
    h
}

/// Upper incomplete gamma Γ(a,z) = ∫_z^∞ t^{a−1} e^{−t} dt for real a, z > 0.
///
/// Orders a that are nonpositive within 1e-9 of an integer are snapped to the
/// integer and handled by downward recurrence from Γ(0,z) = E₁(z); other
/// orders use the continued fraction (z ≥ 1.5) or a series at shifted
/// positive order followed by downward recurrence (z < 1.5). The recurrence
/// is Γ(a,z) = (Γ(a+1,z) − z^a e^{−z}) / a.
pub fn upper_gamma(a: f64, z: f64) -> f64 {
    assert!(z > 0.0, "upper_gamma requires z > 0, got {z}");
    let rounded = a.round();
    if rounded <= 0.0 && (a - rounded).abs() < 1e-9 {
        // integer ladder down from E1
        let n = (-rounded) as i32;
        let mut g = exp_integral_e1(z);
        let emz = (-z).exp();
        for j in 1..=n {
            let aj = -(j as f64);
            g = (g - z.powf(aj) * emz) / aj;
        }
        return g;
    }
    if z >= 1.5 {
        return upper_gamma_cf(a, z);
    }
    // shift to b = a + k ∈ (0, 1], evaluate there, recurse down
    let k = if a > 0.0 { 0 } else { (-a).floor() as i32 + 1 };
    let b = a + k as f64;
    let mut g = upper_gamma_series(b, z);
    let emz = (-z).exp();
    for j in 1..=k {
        let aj = b - j as f64;
        g = (g - z.powf(aj) * emz) / aj;
    }
    g
}

/// Γ(b,z) = Γ(b) − γ_low(b,z) via the lower-gamma series, for b > 0, z < ~2.
fn upper_gamma_series(b: f64, z: f64) -> f64 {
    let mut term = 1.0 / b;
    let mut sum = term;
    for n in 1..200 {
        term *= z / (b + n as f64);
        sum += term;
        if term.abs() < 1e-17 * sum.abs() {
            break;
        }
    }
    let lower = z.powf(b) * (-z).exp() * sum;
    gamma(b) - lower
}

/// Continued fraction for Γ(a,z), reliable for z ≳ 1.5 and a ≤ 2 as used here.
fn upper_gamma_cf(a: f64, z: f64) -> f64 {
    let tiny = 1e-300;
    let mut b = z + 1.0 - a;
    let mut c = 1.0 / tiny;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..300 {
        let an = -(i as f64) * (i as f64 - a);
        b += 2.0;
        d = an * d + b;
        if d.abs() < tiny {
            d = tiny;
        }
        c = b + an / c;
        if c.abs() < tiny {
            c = tiny;
        }
        d = 1.0 / d;
        let del = d * c;
        h *= del;
        if (del - 1.0).abs() < 1e-16 {
            break;
        }
    }
    h * (-z).exp() * z.powf(a)
}

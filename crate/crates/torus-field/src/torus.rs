//! Points and frequency vectors on T⁴ = ℝ⁴/ℤ⁴.

/// A point of the unit 4-torus, coordinates reduced into [0,1).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TorusPoint {
    coords: [f64; 4],
}

impl TorusPoint {
    /// Build a point, reducing every coordinate modulo 1 into [0,1).
    pub fn new(x1: f64, x2: f64, x3: f64, x4: f64) -> Self {
        Self {
            coords: [wrap(x1), wrap(x2), wrap(x3), wrap(x4)],
        }
    }

    pub fn from_array(c: [f64; 4]) -> Self {
        Self::new(c[0], c[1], c[2], c[3])
    }

    pub fn origin() -> Self {
        Self { coords: [0.0; 4] }
    }

    pub fn coords(&self) -> [f64; 4] {
        self.coords
    }

    /// Coordinatewise difference x − y, each component reduced into [−½, ½).
    pub fn separation(&self, other: &TorusPoint) -> [f64; 4] {
        let mut d = [0.0; 4];
        for k in 0..4 {
            let mut u = self.coords[k] - other.coords[k];
            u -= u.round(); // into [-1/2, 1/2]
            d[k] = u;
        }
        d
    }
}

fn wrap(x: f64) -> f64 {
    let y = x - x.floor();
    // x.floor() can leave exactly 1.0 for tiny negative x
    if y >= 1.0 {
        y - 1.0
    } else {
        y
    }
}

/// Geodesic distance on the flat torus: min over integer shifts m of |x−y+m|.
pub fn torus_distance(x: &TorusPoint, y: &TorusPoint) -> f64 {
    let d = x.separation(y);
    (d[0] * d[0] + d[1] * d[1] + d[2] * d[2] + d[3] * d[3]).sqrt()
}

/// An integer frequency vector n ∈ ℤ⁴ labelling the Laplace eigenmode
/// e^{2πi n·x} with eigenvalue of −Δ equal to 4π²|n|².
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FrequencyVector {
    pub n: [i32; 4],
}

impl FrequencyVector {
    pub fn new(n1: i32, n2: i32, n3: i32, n4: i32) -> Self {
        Self {
            n: [n1, n2, n3, n4],
        }
    }

    pub fn zero() -> Self {
        Self { n: [0; 4] }
    }

    pub fn is_zero(&self) -> bool {
        self.n == [0; 4]
    }

    /// |n|² as an integer.
    pub fn norm_sq(&self) -> i64 {
        self.n.iter().map(|&v| (v as i64) * (v as i64)).sum()
    }

    /// Eigenvalue of −Δ on the mode: 4π²|n|².
    pub fn laplace_eigenvalue(&self) -> f64 {
        4.0 * std::f64::consts::PI.powi(2) * self.norm_sq() as f64
    }

    pub fn neg(&self) -> Self {
        Self {
            n: [-self.n[0], -self.n[1], -self.n[2], -self.n[3]],
        }
    }

    /// n·x for a torus point x.
    pub fn dot(&self, x: &TorusPoint) -> f64 {
        let c = x.coords();
        self.n[0] as f64 * c[0]
            + self.n[1] as f64 * c[1]
            + self.n[2] as f64 * c[2]
            + self.n[3] as f64 * c[3]
    }

    /// True when this is the canonical representative of the pair {n, −n}:
    /// the first nonzero component is positive.
    pub fn is_canonical(&self) -> bool {
        for &v in &self.n {
            if v != 0 {
                return v > 0;
            }
        }
        false // zero vector is not part of any pair
    }
}

/// Iterate the full frequency cube |n|_∞ ≤ cutoff in lexicographic order,
/// zero vector included.
pub fn frequency_cube(cutoff: i32) -> impl Iterator<Item = FrequencyVector> {
    let r = -cutoff..=cutoff;
    itertools_product(r.clone(), r.clone(), r.clone(), r)
}

fn itertools_product(
    r1: std::ops::RangeInclusive<i32>,
    r2: std::ops::RangeInclusive<i32>,
    r3: std::ops::RangeInclusive<i32>,
    r4: std::ops::RangeInclusive<i32>,
) -> impl Iterator<Item = FrequencyVector> {
    r1.flat_map(move |a| {
        let (r2, r3, r4) = (r2.clone(), r3.clone(), r4.clone());
        r2.flat_map(move |b| {
            let (r3, r4) = (r3.clone(), r4.clone());
            r3.flat_map(move |c| {
                let r4 = r4.clone();
                r4.map(move |d| FrequencyVector::new(a, b, c, d))
            })
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn distance_half_period() {
        let x = TorusPoint::new(0.0, 0.0, 0.0, 0.0);
        let y = TorusPoint::new(0.5, 0.0, 0.0, 0.0);
        assert!((torus_distance(&x, &y) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn distance_wraparound() {
        let x = TorusPoint::new(0.9, 0.0, 0.0, 0.0);
        let y = TorusPoint::new(0.1, 0.0, 0.0, 0.0);
        assert!((torus_distance(&x, &y) - 0.2).abs() < 1e-15);
    }

    #[test]
    fn distance_diagonal_corner() {
        let x = TorusPoint::new(0.75, 0.75, 0.75, 0.75);
        let y = TorusPoint::origin();
        assert!((torus_distance(&x, &y) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn distance_symmetric_and_bounded() {
        let pts = [
            TorusPoint::new(0.13, 0.77, 0.42, 0.99),
            TorusPoint::new(0.5, 0.25, 0.125, 0.0),
            TorusPoint::new(0.31, 0.31, 0.31, 0.31),
        ];
        for a in &pts {
            for b in &pts {
                let d1 = torus_distance(a, b);
                let d2 = torus_distance(b, a);
                assert!((d1 - d2).abs() < 1e-15);
                assert!(d1 <= 1.0);
            }
        }
    }

    #[test]
    fn wrap_reduces_into_unit_interval() {
        let p = TorusPoint::new(-0.25, 1.5, 3.0, -1e-18);
        for c in p.coords() {
            assert!((0.0..1.0).contains(&c));
        }
        assert!((p.coords()[0] - 0.75).abs() < 1e-15);
        assert!((p.coords()[1] - 0.5).abs() < 1e-15);
    }

    #[test]
    fn frequency_cube_count_and_canonical_split() {
        let all: Vec<_> = frequency_cube(2).collect();
        assert_eq!(all.len(), 5usize.pow(4));
        let canonical = all.iter().filter(|n| n.is_canonical()).count();
        let zero = all.iter().filter(|n| n.is_zero()).count();
        assert_eq!(zero, 1);
        assert_eq!(2 * canonical + 1, all.len());
    }

    #[test]
    fn eigenvalue_matches_norm() {
        let n = FrequencyVector::new(1, -2, 0, 3);
        assert_eq!(n.norm_sq(), 14);
        assert!((n.laplace_eigenvalue() - 4.0 * std::f64::consts::PI.powi(2) * 14.0).abs() < 1e-9);
    }
}

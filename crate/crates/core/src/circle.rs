//! Equal-radius circular obstacles: radius folding and the Gabriel graph of
//! obstacle centers.
//!
//! Centers are exact rationals. Predicates bring them to a common
//! denominator and evaluate in `i128`.

use num_rational::Ratio;
use thiserror::Error;

pub type Rational = Ratio<i64>;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CircleError {
    #[error("robot radius must be positive")]
    NonPositiveRobot,
    #[error("obstacle radius must be non-negative")]
    NegativeRadius,
    #[error("centers {0} and {1} coincide")]
    DuplicateCenter(usize, usize),
    #[error("center coordinates too large for exact evaluation")]
    Overflow,
}

/// Radius of the equivalent robot once obstacles are shrunk to points.
pub fn fold_radius(q: Rational, r: Rational) -> Result<Rational, CircleError> {
    if q <= Rational::from_integer(0) {
        return Err(CircleError::NonPositiveRobot);
    }
    if r < Rational::from_integer(0) {
        return Err(CircleError::NegativeRadius);
    }
    Ok(q + r * 2)
}

#[derive(Clone, Debug, PartialEq)]
pub struct CircleWorld {
    pub centers: Vec<(Rational, Rational)>,
    pub radius: Rational,
}

impl CircleWorld {
    pub fn from_integer_centers(centers: &[(i64, i64)], radius: Rational) -> Self {
        Self {
            centers: centers
                .iter()
                .map(|&(x, y)| (Rational::from_integer(x), Rational::from_integer(y)))
                .collect(),
            radius,
        }
    }

    /// Centers scaled to a common denominator. Squared distances between
    /// scaled centers are the true ones times `den^2`, which preserves every
    /// comparison used here.
    pub fn scaled_centers(&self) -> Result<(Vec<(i128, i128)>, i128), CircleError> {
        let mut den: i128 = 1;
        for (x, y) in &self.centers {
            for v in [x, y] {
                let d = *v.denom() as i128;
                den = den / gcd(den, d) * d;
                if den > 1 << 40 {
                    return Err(CircleError::Overflow);
                }
            }
        }
        let pts: Vec<(i128, i128)> = self
            .centers
            .iter()
            .map(|(x, y)| {
                (*x.numer() as i128 * (den / *x.denom() as i128), *y.numer() as i128 * (den / *y.denom() as i128))
            })
            .collect();
        // Keep products of differences within i128.
        if pts.iter().any(|&(x, y)| x.abs() > 1 << 60 || y.abs() > 1 << 60) {
            return Err(CircleError::Overflow);
        }
        Ok((pts, den))
    }

    pub fn gabriel_edges(&self) -> Result<Vec<GabrielEdge>, CircleError> {
        let (pts, den) = self.scaled_centers()?;
        let mut edges = gabriel_edges(&pts)?;
        for e in &mut edges {
            e.capacity = Ratio::new(e.capacity.to_integer(), den * den);
        }
        Ok(edges)
    }
}

fn gcd(a: i128, b: i128) -> i128 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GabrielEdge {
    pub i: usize,
    pub j: usize,
    /// Squared center distance.
    pub capacity: Ratio<i128>,
}

fn dist2(a: (i128, i128), b: (i128, i128)) -> i128 {
    let (dx, dy) = (a.0 - b.0, a.1 - b.1);
    dx * dx + dy * dy
}

/// Whether `k` lies strictly inside the disc with diameter `(a, b)`:
/// `|2k - a - b|^2 < |a - b|^2`, the midpoint form scaled by 4.
pub fn in_diametral_disc(a: (i128, i128), b: (i128, i128), k: (i128, i128)) -> bool {
    let (mx, my) = (2 * k.0 - a.0 - b.0, 2 * k.1 - a.1 - b.1);
    mx * mx + my * my < dist2(a, b)
}

/// Closed version of [`in_diametral_disc`]: boundary points count.
pub fn in_closed_diametral_disc(a: (i128, i128), b: (i128, i128), k: (i128, i128)) -> bool {
    let (mx, my) = (2 * k.0 - a.0 - b.0, 2 * k.1 - a.1 - b.1);
    mx * mx + my * my <= dist2(a, b)
}

/// First center in the closed diametral disc of `(i, j)`. Cocircular
/// centers on the boundary reject the pair, so four corners of a square
/// keep their sides and drop both (crossing) diagonals.
pub fn witness(pts: &[(i128, i128)], i: usize, j: usize) -> Option<usize> {
    (0..pts.len()).find(|&k| k != i && k != j && in_closed_diametral_disc(pts[i], pts[j], pts[k]))
}

fn check_distinct(pts: &[(i128, i128)]) -> Result<(), CircleError> {
    let mut order: Vec<usize> = (0..pts.len()).collect();
    order.sort_by_key(|&k| pts[k]);
    for w in order.windows(2) {
        if pts[w[0]] == pts[w[1]] {
            return Err(CircleError::DuplicateCenter(w[0].min(w[1]), w[0].max(w[1])));
        }
    }
    Ok(())
}

/// Naive Gabriel graph: every pair against every third center.
pub fn gabriel_edges(pts: &[(i128, i128)]) -> Result<Vec<GabrielEdge>, CircleError> {
    check_distinct(pts)?;
    let mut out = Vec::new();
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            if witness(pts, i, j).is_none() {
                out.push(GabrielEdge { i, j, capacity: Ratio::from_integer(dist2(pts[i], pts[j])) });
            }
        }
    }
    Ok(out)
}

fn orient(a: (i128, i128), b: (i128, i128), c: (i128, i128)) -> i128 {
    (b.0 - a.0) * (c.1 - a.1) - (b.1 - a.1) * (c.0 - a.0)
}

fn on_segment(a: (i128, i128), b: (i128, i128), p: (i128, i128)) -> bool {
    orient(a, b, p) == 0 && a.0.min(b.0) <= p.0 && p.0 <= a.0.max(b.0) && a.1.min(b.1) <= p.1 && p.1 <= a.1.max(b.1)
}

/// Whether segments `pq` and `rs` cross, touching at a shared endpoint
/// excepted. Collinear overlap and an endpoint in the other's interior
/// count as crossing.
pub fn segments_cross(p: (i128, i128), q: (i128, i128), r: (i128, i128), s: (i128, i128)) -> bool {
    let shared = [p, q].iter().filter(|&&a| a == r || a == s).count();
    let (d1, d2) = (orient(p, q, r).signum(), orient(p, q, s).signum());
    let (d3, d4) = (orient(r, s, p).signum(), orient(r, s, q).signum());
    if d1 * d2 < 0 && d3 * d4 < 0 {
        return true;
    }
    if shared == 2 {
        return true;
    }
    let touches = [(p, q, r), (p, q, s), (r, s, p), (r, s, q)]
        .iter()
        .filter(|&&(a, b, c)| c != a && c != b && on_segment(a, b, c))
        .count();
    if touches > 0 {
        return true;
    }
    // Sharing one endpoint: cross only if collinear and overlapping.
    if shared == 1 && d1 == 0 && d2 == 0 {
        let (o, a) = if p == r || p == s { (p, q) } else { (q, p) };
        let b = if r == o { s } else { r };
        let dot = (a.0 - o.0) * (b.0 - o.0) + (a.1 - o.1) * (b.1 - o.1);
        return dot > 0;
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    #[test]
    fn folding() {
        assert_eq!(fold_radius(r(1, 1), r(0, 1)), Ok(r(1, 1)));
        assert_eq!(fold_radius(r(1, 1), r(2, 1)), Ok(r(5, 1)));
        assert_eq!(fold_radius(r(1, 2), r(1, 4)), Ok(r(1, 1)));
        assert_eq!(fold_radius(r(0, 1), r(1, 1)), Err(CircleError::NonPositiveRobot));
        assert_eq!(fold_radius(r(1, 1), r(-1, 1)), Err(CircleError::NegativeRadius));
    }

    #[test]
    fn small_sets() {
        let two = gabriel_edges(&[(0, 0), (4, 0)]).unwrap();
        assert_eq!(two.len(), 1);
        assert_eq!(two[0].capacity, Ratio::from_integer(16));
        let three = gabriel_edges(&[(0, 0), (10, 0), (5, 1)]).unwrap();
        let pairs: Vec<_> = three.iter().map(|e| (e.i, e.j)).collect();
        assert_eq!(pairs, vec![(0, 2), (1, 2)]);
        assert_eq!(gabriel_edges(&[(1, 1), (2, 2), (1, 1)]), Err(CircleError::DuplicateCenter(0, 2)));
    }

    #[test]
    fn square_keeps_sides() {
        let sq = gabriel_edges(&[(0, 0), (2, 0), (2, 2), (0, 2)]).unwrap();
        let pairs: Vec<_> = sq.iter().map(|e| (e.i, e.j)).collect();
        assert_eq!(pairs, vec![(0, 1), (0, 3), (1, 2), (2, 3)]);
    }

    #[test]
    fn rational_centers() {
        let w = CircleWorld {
            centers: vec![(r(0, 1), r(0, 1)), (r(1, 2), r(0, 1)), (r(1, 4), r(1, 3))],
            radius: r(1, 4),
        };
        let edges = w.gabriel_edges().unwrap();
        assert_eq!(edges[0].capacity, Ratio::new(1, 4).into_ratio_i128());
    }

    trait Widen {
        fn into_ratio_i128(self) -> Ratio<i128>;
    }
    impl Widen for Ratio<i64> {
        fn into_ratio_i128(self) -> Ratio<i128> {
            Ratio::new(*self.numer() as i128, *self.denom() as i128)
        }
    }

    #[test]
    fn crossing_predicate() {
        assert!(segments_cross((0, 0), (2, 2), (0, 2), (2, 0)));
        assert!(!segments_cross((0, 0), (2, 2), (2, 2), (4, 0)));
        assert!(segments_cross((0, 0), (4, 0), (2, 0), (2, 3)));
        assert!(segments_cross((0, 0), (4, 0), (0, 0), (2, 0)));
        assert!(!segments_cross((0, 0), (4, 0), (0, 0), (-2, 0)));
        assert!(!segments_cross((0, 0), (1, 0), (2, 0), (3, 0)));
    }
}

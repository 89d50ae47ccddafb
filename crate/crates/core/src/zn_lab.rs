//! Voronoi tilings of periodic ℤᴺ windows and their boundary statistics.

use std::collections::{BTreeMap, HashMap, HashSet};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

pub const MAX_DIM: usize = 3;
pub const MAX_WINDOW: u32 = 256;
/// Points scanned per configuration.
pub const MAX_POINTS: usize = 1 << 22;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ZnError {
    #[error("dimension {0} outside 1..=3")]
    Dimension(usize),
    #[error("window side {0} outside 1..=256")]
    Window(u32),
    #[error("window side {window} is not a multiple of {m} (at least 2m)")]
    GridWindow { window: u32, m: u32 },
    #[error("window has {0} points, too many to scan")]
    TooLarge(usize),
    #[error("marker set is empty")]
    EmptyMarkers,
    #[error("marker {0:?} has the wrong dimension")]
    MarkerShape(Vec<i64>),
    #[error("marker {0:?} repeats modulo the period")]
    DuplicateMarker(Vec<i64>),
    #[error("parameter out of domain: {0}")]
    Domain(String),
}

fn default_n() -> u32 {
    1
}

/// `{"N":2,"mode":"grid","m":8,"window":64,"n":1}` or
/// `{"mode":"explicit","markers":[[x,y],…],"period":[L₁,L₂]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "lowercase")]
pub enum ConfigDocument {
    Grid {
        #[serde(rename = "N")]
        dim: usize,
        m: u32,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        window: Option<u32>,
        #[serde(default = "default_n")]
        n: u32,
    },
    Explicit {
        markers: Vec<Vec<i64>>,
        period: Vec<u32>,
        #[serde(default = "default_n")]
        n: u32,
    },
}

/// Markers on the torus `ℤᴺ / diag(period)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MarkerConfiguration {
    period: Vec<u32>,
    markers: Vec<Vec<i64>>,
    grid: Option<u32>,
    pub n: u32,
}

impl MarkerConfiguration {
    /// Markers `m·ℤᴺ` on a window of side `window`, by default `2m`.
    pub fn grid(dim: usize, m: u32, window: Option<u32>, n: u32) -> Result<Self, ZnError> {
        if !(1..=MAX_DIM).contains(&dim) {
            return Err(ZnError::Dimension(dim));
        }
        if m == 0 {
            return Err(ZnError::Domain("m must be positive".into()));
        }
        let window = window.unwrap_or(2 * m);
        if window == 0 || window > MAX_WINDOW {
            return Err(ZnError::Window(window));
        }
        if !window.is_multiple_of(m) || (m > 1 && window < 2 * m) {
            return Err(ZnError::GridWindow { window, m });
        }
        check_size(dim, window)?;
        let per_axis: Vec<i64> = (0..window / m).map(|i| i64::from(i * m)).collect();
        let mut markers = vec![Vec::new()];
        for _ in 0..dim {
            markers = markers.into_iter().flat_map(|p: Vec<i64>| per_axis.iter().map(move |&c| [p.clone(), vec![c]].concat())).collect();
        }
        Ok(MarkerConfiguration { period: vec![window; dim], markers, grid: Some(m), n })
    }

    pub fn explicit(markers: Vec<Vec<i64>>, period: Vec<u32>, n: u32) -> Result<Self, ZnError> {
        let dim = period.len();
        if !(1..=MAX_DIM).contains(&dim) {
            return Err(ZnError::Dimension(dim));
        }
        if let Some(&l) = period.iter().find(|&&l| l == 0 || l > MAX_WINDOW) {
            return Err(ZnError::Window(l));
        }
        let points: usize = period.iter().map(|&l| l as usize).product();
        if points > MAX_POINTS {
            return Err(ZnError::TooLarge(points));
        }
        if markers.is_empty() {
            return Err(ZnError::EmptyMarkers);
        }
        let mut seen = HashSet::new();
        let mut reduced = Vec::new();
        for mk in markers {
            if mk.len() != dim {
                return Err(ZnError::MarkerShape(mk));
            }
            let r: Vec<i64> = mk.iter().zip(&period).map(|(&x, &l)| x.rem_euclid(i64::from(l))).collect();
            if !seen.insert(r.clone()) {
                return Err(ZnError::DuplicateMarker(mk));
            }
            reduced.push(r);
        }
        Ok(MarkerConfiguration { period, markers: reduced, grid: None, n })
    }

    pub fn from_document(doc: &ConfigDocument) -> Result<Self, ZnError> {
        match doc {
            ConfigDocument::Grid { dim, m, window, n } => Self::grid(*dim, *m, *window, *n),
            ConfigDocument::Explicit { markers, period, n } => Self::explicit(markers.clone(), period.clone(), *n),
        }
    }

    pub fn dim(&self) -> usize {
        self.period.len()
    }

    pub fn period(&self) -> &[u32] {
        &self.period
    }

    pub fn markers(&self) -> &[Vec<i64>] {
        &self.markers
    }

    pub fn grid_spacing(&self) -> Option<u32> {
        self.grid
    }

    pub fn num_points(&self) -> usize {
        self.period.iter().map(|&l| l as usize).product()
    }

    pub fn point(&self, mut index: usize) -> Vec<i64> {
        let mut out = vec![0; self.dim()];
        for (c, &l) in out.iter_mut().zip(&self.period).rev() {
            *c = (index % l as usize) as i64;
            index /= l as usize;
        }
        out
    }

    pub fn index(&self, x: &[i64]) -> usize {
        x.iter().zip(&self.period).fold(0, |acc, (&c, &l)| acc * l as usize + c.rem_euclid(i64::from(l)) as usize)
    }

    fn translate(&self, x: &[i64], p: &[i64]) -> usize {
        self.index(&x.iter().zip(p).map(|(a, b)| a + b).collect::<Vec<_>>())
    }
}

fn check_size(dim: usize, side: u32) -> Result<(), ZnError> {
    let points = (side as usize).pow(dim as u32);
    if points > MAX_POINTS {
        return Err(ZnError::TooLarge(points));
    }
    Ok(())
}

/// Per window point: the chosen displacement `f(x)` and the marker `x + f(x)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VoronoiAssignment {
    pub displacement: Vec<Vec<i64>>,
    pub marker: Vec<usize>,
}

fn norm2(v: &[i64]) -> i64 {
    v.iter().map(|c| c * c).sum()
}

/// Minimal-norm representatives of `δ` modulo `l`, ascending.
fn shortest(delta: i64, l: i64) -> Vec<i64> {
    let d = delta.rem_euclid(l);
    match (d, l - d) {
        (0, _) => vec![0],
        (a, b) if a < b => vec![a],
        (a, b) if a > b => vec![-b],
        (a, b) => vec![-b, a],
    }
}

/// Least displacement to `marker` in (norm, lexicographic) order.
fn displacement_to(x: &[i64], marker: &[i64], period: &[u32]) -> Vec<i64> {
    x.iter().zip(marker).zip(period).map(|((&a, &q), &l)| shortest(q - a, i64::from(l))[0]).collect()
}

/// `f(x)`: lexicographically least among minimal-Euclidean-norm displacements to markers.
pub fn assign_markers(cfg: &MarkerConfiguration) -> VoronoiAssignment {
    match cfg.grid {
        Some(m) => assign_grid(cfg, m),
        None => assign_brute_force(cfg),
    }
}

/// Direct scan over all markers; the reference for the grid shortcut.
pub fn assign_brute_force(cfg: &MarkerConfiguration) -> VoronoiAssignment {
    let n = cfg.num_points();
    let marker_index: HashMap<&Vec<i64>, usize> = cfg.markers.iter().enumerate().map(|(i, m)| (m, i)).collect();
    let mut displacement = Vec::with_capacity(n);
    let mut marker = Vec::with_capacity(n);
    for i in 0..n {
        let x = cfg.point(i);
        let best = cfg
            .markers
            .iter()
            .map(|q| displacement_to(&x, q, &cfg.period))
            .min_by(|a, b| (norm2(a), a).cmp(&(norm2(b), b)))
            .expect("markers nonempty");
        let target = cfg.point(cfg.translate(&x, &best));
        marker.push(marker_index[&target]);
        displacement.push(best);
    }
    VoronoiAssignment { displacement, marker }
}

fn assign_grid(cfg: &MarkerConfiguration, m: u32) -> VoronoiAssignment {
    let m = i64::from(m);
    let n = cfg.num_points();
    let marker_index: HashMap<&Vec<i64>, usize> = cfg.markers.iter().enumerate().map(|(i, q)| (q, i)).collect();
    let mut displacement = Vec::with_capacity(n);
    let mut marker = Vec::with_capacity(n);
    for i in 0..n {
        let x = cfg.point(i);
        // the minimal set is a product over axes, so the lexicographic minimum is taken per axis
        let f: Vec<i64> = x.iter().map(|&c| shortest(-c, m)[0]).collect();
        let target = cfg.point(cfg.translate(&x, &f));
        marker.push(marker_index[&target]);
        displacement.push(f);
    }
    VoronoiAssignment { displacement, marker }
}

/// Window points grouped by their marker.
pub fn orbit_partition(cfg: &MarkerConfiguration, a: &VoronoiAssignment) -> BTreeMap<Vec<i64>, Vec<Vec<i64>>> {
    let mut out: BTreeMap<Vec<i64>, Vec<Vec<i64>>> = BTreeMap::new();
    for (i, &k) in a.marker.iter().enumerate() {
        out.entry(cfg.markers[k].clone()).or_default().push(cfg.point(i));
    }
    out
}

/// Nonzero `p` with `‖p‖ ≤ n`.
pub fn ball(dim: usize, n: u32) -> Vec<Vec<i64>> {
    let r = i64::from(n);
    let mut out = vec![Vec::new()];
    for _ in 0..dim {
        out = out.into_iter().flat_map(|p: Vec<i64>| (-r..=r).map(move |c| [p.clone(), vec![c]].concat())).collect();
    }
    out.retain(|p| p.iter().any(|&c| c != 0) && norm2(p) <= r * r);
    out
}

/// `max_x |{(p,z) : z ∈ K(x), 0 < ‖p‖ ≤ n, z + p ∉ K(x)}| / |K(x)|`, orbit by orbit.
pub fn boundary_ratio(cfg: &MarkerConfiguration, a: &VoronoiAssignment, n: u32) -> BigRational {
    let ball = ball(cfg.dim(), n);
    let mut members: Vec<Vec<usize>> = vec![Vec::new(); cfg.markers.len()];
    for (i, &k) in a.marker.iter().enumerate() {
        members[k].push(i);
    }
    let mut best = BigRational::zero();
    for (k, pts) in members.iter().enumerate().filter(|(_, p)| !p.is_empty()) {
        let mut crossings = 0u64;
        for &i in pts {
            let x = cfg.point(i);
            crossings += ball.iter().filter(|p| a.marker[cfg.translate(&x, p)] != k).count() as u64;
        }
        let r = BigRational::new(BigInt::from(crossings), BigInt::from(pts.len()));
        if r > best {
            best = r;
        }
    }
    best
}

/// Same statistic from one pass over all arrows, tallied per orbit afterwards.
pub fn boundary_ratio_by_arrows(cfg: &MarkerConfiguration, a: &VoronoiAssignment, n: u32) -> BigRational {
    let ball = ball(cfg.dim(), n);
    let mut size = vec![0u64; cfg.markers.len()];
    let mut out = vec![0u64; cfg.markers.len()];
    for i in 0..cfg.num_points() {
        let x = cfg.point(i);
        let k = a.marker[i];
        size[k] += 1;
        for p in &ball {
            let j = cfg.translate(&x, p);
            if a.marker[j] != k {
                out[k] += 1;
            }
        }
    }
    size.iter()
        .zip(&out)
        .filter(|(s, _)| **s > 0)
        .map(|(&s, &o)| BigRational::new(BigInt::from(o), BigInt::from(s)))
        .max()
        .unwrap_or_else(BigRational::zero)
}

/// `[((m+2)^N − (m−2n−2)^N)(m+1)^N / m^N] · 2^N / (m/2 − 2)^N`.
pub fn paper_bound(m: u32, n: u32, dim: u32) -> Result<BigRational, ZnError> {
    if m <= 2 * n + 2 || m <= 4 {
        return Err(ZnError::Domain(format!("need m > 2n + 2 and m > 4, got m = {m}, n = {n}")));
    }
    let (m, n) = (BigInt::from(m), BigInt::from(n));
    let pow = |b: &BigInt| num_traits::pow(b.clone(), dim as usize);
    let two = BigInt::from(2);
    let shell = pow(&(&m + 2)) - pow(&(&m - &two * &n - 2));
    let num = shell * pow(&(&m + 1)) * pow(&two);
    let half = BigRational::new(m.clone(), two) - BigRational::from_integer(BigInt::from(2));
    Ok(BigRational::new(num, pow(&m)) / num_traits::pow(half, dim as usize))
}

/// Minimal marker distance (periodic images included) and covering radius, both squared.
pub fn separation_syndeticity_sq(cfg: &MarkerConfiguration, a: &VoronoiAssignment) -> (i64, i64) {
    let mut sep = cfg.period.iter().map(|&l| i64::from(l) * i64::from(l)).min().unwrap_or(0);
    for (i, p) in cfg.markers.iter().enumerate() {
        for q in &cfg.markers[i + 1..] {
            sep = sep.min(norm2(&displacement_to(p, q, &cfg.period)));
        }
    }
    let synd = a.displacement.iter().map(|d| norm2(d)).max().unwrap_or(0);
    (sep, synd)
}

pub fn separation_syndeticity(cfg: &MarkerConfiguration, a: &VoronoiAssignment) -> (f64, f64) {
    let (s, c) = separation_syndeticity_sq(cfg, a);
    ((s as f64).sqrt(), (c as f64).sqrt())
}

/// Whether the bound's hypotheses hold: `m`-separated, `(m+1)`-syndetic, `m > 2n + 2`, `m > 4`.
pub fn bound_applies(cfg: &MarkerConfiguration, a: &VoronoiAssignment, m: u32, n: u32) -> bool {
    let (sep, synd) = separation_syndeticity_sq(cfg, a);
    let m = i64::from(m);
    sep >= m * m && synd <= (m + 1) * (m + 1) && m > 2 * i64::from(n) + 2 && m > 4
}

/// One CSV row `m,n,N,ratio,bound`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RatioRow {
    pub m: u32,
    pub n: u32,
    #[serde(rename = "N")]
    pub dim: usize,
    pub ratio: String,
    pub bound: String,
}

/// Ratio and, where its hypotheses hold, the bound for a grid configuration.
pub fn grid_row(dim: usize, m: u32, n: u32, window: Option<u32>) -> Result<(RatioRow, BigRational, Option<BigRational>), ZnError> {
    let cfg = MarkerConfiguration::grid(dim, m, window, n)?;
    let a = assign_markers(&cfg);
    let ratio = boundary_ratio(&cfg, &a, n);
    let bound = if bound_applies(&cfg, &a, m, n) { Some(paper_bound(m, n, dim as u32)?) } else { None };
    let row = RatioRow {
        m,
        n,
        dim,
        ratio: ratio.to_string(),
        bound: bound.as_ref().map_or_else(|| "NA".to_string(), ToString::to_string),
    };
    Ok((row, ratio, bound))
}

pub fn ratio_to_f64(r: &BigRational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(a: i64, b: i64) -> BigRational {
        BigRational::new(a.into(), b.into())
    }

    #[test]
    fn grid_assignment() {
        let cfg = MarkerConfiguration::grid(2, 8, Some(64), 1).unwrap();
        let a = assign_markers(&cfg);
        assert_eq!(a.displacement[cfg.index(&[3, 0])], vec![-3, 0]);
        assert_eq!(a.displacement[cfg.index(&[4, 0])], vec![-4, 0]);
        assert_eq!(a.displacement[cfg.index(&[8, 16])], vec![0, 0]);
        let small = MarkerConfiguration::grid(2, 4, Some(12), 1).unwrap();
        assert_eq!(assign_markers(&small), assign_brute_force(&small));
    }

    #[test]
    fn orbits() {
        let cfg = MarkerConfiguration::grid(2, 8, Some(64), 1).unwrap();
        let parts = orbit_partition(&cfg, &assign_markers(&cfg));
        assert_eq!(parts.len(), 64);
        assert!(parts.values().all(|v| v.len() == 64));
        let ones = MarkerConfiguration::grid(2, 1, Some(4), 1).unwrap();
        assert!(orbit_partition(&ones, &assign_markers(&ones)).values().all(|v| v.len() == 1));
        let line = MarkerConfiguration::grid(1, 5, Some(20), 1).unwrap();
        assert!(orbit_partition(&line, &assign_markers(&line)).values().all(|v| v.len() == 5));
    }

    #[test]
    fn ratios() {
        for (m, expect) in [(8, q(1, 2)), (32, q(1, 8))] {
            let cfg = MarkerConfiguration::grid(2, m, None, 1).unwrap();
            let a = assign_markers(&cfg);
            assert_eq!(boundary_ratio(&cfg, &a, 1), expect);
            assert_eq!(boundary_ratio_by_arrows(&cfg, &a, 1), expect);
        }
        let ones = MarkerConfiguration::grid(2, 1, Some(6), 2).unwrap();
        let a = assign_markers(&ones);
        assert_eq!(boundary_ratio(&ones, &a, 2), q(ball(2, 2).len() as i64, 1));
    }

    #[test]
    fn bounds() {
        assert_eq!(paper_bound(32, 1, 2).unwrap(), q(372 * 1089 * 4, 1024 * 196));
        assert!(paper_bound(1000, 1, 1).unwrap() < paper_bound(100, 1, 1).unwrap());
        assert!(paper_bound(4, 1, 2).is_err());
    }

    #[test]
    fn geometry() {
        let cfg = MarkerConfiguration::grid(2, 8, Some(64), 1).unwrap();
        let a = assign_markers(&cfg);
        assert_eq!(separation_syndeticity_sq(&cfg, &a), (64, 32));
        let single = MarkerConfiguration::explicit(vec![vec![3]], vec![11], 1).unwrap();
        assert_eq!(separation_syndeticity_sq(&single, &assign_markers(&single)).0, 121);
        let ones = MarkerConfiguration::grid(2, 1, Some(4), 1).unwrap();
        assert_eq!(separation_syndeticity(&ones, &assign_markers(&ones)), (1.0, 0.0));
    }

    #[test]
    fn documents() {
        let d: ConfigDocument = serde_json::from_str(r#"{"N":2,"mode":"grid","m":8,"window":64,"n":1}"#).unwrap();
        assert_eq!(MarkerConfiguration::from_document(&d).unwrap().markers().len(), 64);
        let e: ConfigDocument = serde_json::from_str(r#"{"mode":"explicit","markers":[[0,0],[5,5]],"period":[10,10]}"#).unwrap();
        let cfg = MarkerConfiguration::from_document(&e).unwrap();
        assert_eq!(cfg.n, 1);
        assert!(MarkerConfiguration::explicit(vec![vec![0], vec![10]], vec![10], 1).is_err());
    }
}

//! Queen adjacency graphs from GeoJSON polygons.
//!
//! Each feature becomes one node (in feature order). Two regions are adjacent
//! when the minimum distance between any of their boundary rings is at most
//! `tol`, so corner contact counts. MultiPolygon regions are adjacent if any
//! part is.

use serde_json::Value;

use crate::{Error, Graph, Result};

pub type Point = [f64; 2];
/// Closed coordinate ring (first point equals last).
pub type Ring = Vec<Point>;

#[derive(Debug, Clone, PartialEq)]
pub struct Region {
    pub id: String,
    /// Polygons as rings; the first ring of each polygon is its exterior.
    pub polygons: Vec<Vec<Ring>>,
    pub centroid: Point,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct RegionSet {
    pub regions: Vec<Region>,
}

fn geom_err(msg: impl Into<String>) -> Error {
    Error::Geometry(msg.into())
}

fn parse_point(v: &Value) -> Result<Point> {
    let coords = v
        .as_array()
        .ok_or_else(|| geom_err("position is not an array"))?;
    if coords.len() < 2 {
        return Err(geom_err("position needs two coordinates"));
    }
    let x = coords[0]
        .as_f64()
        .ok_or_else(|| geom_err("non-numeric coordinate"))?;
    let y = coords[1]
        .as_f64()
        .ok_or_else(|| geom_err("non-numeric coordinate"))?;
    Ok([x, y])
}

fn parse_ring(v: &Value) -> Result<Ring> {
    let ring: Ring = v
        .as_array()
        .ok_or_else(|| geom_err("ring is not an array"))?
        .iter()
        .map(parse_point)
        .collect::<Result<_>>()?;
    if ring.first() != ring.last() || ring.len() < 2 {
        return Err(geom_err("ring is not closed"));
    }
    let mut distinct: Vec<(u64, u64)> = ring
        .iter()
        .map(|p| (p[0].to_bits(), p[1].to_bits()))
        .collect();
    distinct.sort_unstable();
    distinct.dedup();
    if distinct.len() < 3 {
        return Err(geom_err("ring has fewer than 3 distinct vertices"));
    }
    Ok(ring)
}

fn parse_polygon(v: &Value) -> Result<Vec<Ring>> {
    let rings: Vec<Ring> = v
        .as_array()
        .ok_or_else(|| geom_err("polygon is not an array of rings"))?
        .iter()
        .map(parse_ring)
        .collect::<Result<_>>()?;
    if rings.is_empty() {
        return Err(geom_err("polygon without rings"));
    }
    Ok(rings)
}

/// Shoelace signed area and centroid moment of a closed ring.
fn ring_moments(ring: &Ring) -> (f64, f64, f64) {
    let (mut a, mut cx, mut cy) = (0.0, 0.0, 0.0);
    // shift by the first vertex to limit cancellation on projected coordinates
    let o = ring[0];
    for w in ring.windows(2) {
        let (x0, y0) = (w[0][0] - o[0], w[0][1] - o[1]);
        let (x1, y1) = (w[1][0] - o[0], w[1][1] - o[1]);
        let cross = x0 * y1 - x1 * y0;
        a += cross;
        cx += (x0 + x1) * cross;
        cy += (y0 + y1) * cross;
    }
    let area = a / 2.0;
    if area == 0.0 {
        return (0.0, 0.0, 0.0);
    }
    let (gx, gy) = (cx / (6.0 * area) + o[0], cy / (6.0 * area) + o[1]);
    (area.abs(), gx * area.abs(), gy * area.abs())
}

/// Area-weighted centroid over all parts; holes subtract.
fn region_centroid(polygons: &[Vec<Ring>]) -> Result<Point> {
    let (mut area, mut mx, mut my) = (0.0, 0.0, 0.0);
    for polygon in polygons {
        let (ea, ex, ey) = ring_moments(&polygon[0]);
        if ea == 0.0 {
            return Err(geom_err("degenerate polygon with zero area"));
        }
        area += ea;
        mx += ex;
        my += ey;
        for hole in &polygon[1..] {
            let (ha, hx, hy) = ring_moments(hole);
            area -= ha;
            mx -= hx;
            my -= hy;
        }
    }
    if area <= 0.0 {
        return Err(geom_err("degenerate region with zero area"));
    }
    Ok([mx / area, my / area])
}

fn property_id(feature: &Value, key: Option<&str>, index: usize) -> String {
    let value = key.and_then(|k| feature.get("properties").and_then(|p| p.get(k)));
    match value {
        Some(Value::String(s)) => s.clone(),
        Some(Value::Null) | None => index.to_string(),
        Some(other) => other.to_string(),
    }
}

/// Reads a FeatureCollection of Polygon / MultiPolygon features. Region ids
/// come from the `id_property` of each feature, falling back to its index.
pub fn parse_geojson(text: &str, id_property: Option<&str>) -> Result<RegionSet> {
    let root: Value =
        serde_json::from_str(text).map_err(|e| geom_err(format!("invalid JSON: {e}")))?;
    if root.get("type").and_then(Value::as_str) != Some("FeatureCollection") {
        return Err(geom_err("expected a FeatureCollection"));
    }
    let features = root
        .get("features")
        .and_then(Value::as_array)
        .ok_or_else(|| geom_err("FeatureCollection without features"))?;
    let mut regions = Vec::with_capacity(features.len());
    for (index, feature) in features.iter().enumerate() {
        let geometry = feature
            .get("geometry")
            .ok_or_else(|| geom_err("feature without geometry"))?;
        let coords = geometry
            .get("coordinates")
            .ok_or_else(|| geom_err("geometry without coordinates"))?;
        let polygons = match geometry.get("type").and_then(Value::as_str) {
            Some("Polygon") => vec![parse_polygon(coords)?],
            Some("MultiPolygon") => coords
                .as_array()
                .ok_or_else(|| geom_err("MultiPolygon coordinates are not an array"))?
                .iter()
                .map(parse_polygon)
                .collect::<Result<_>>()?,
            other => return Err(geom_err(format!("unsupported geometry type {other:?}"))),
        };
        if polygons.is_empty() {
            return Err(geom_err(format!("feature {index} has no polygons")));
        }
        let centroid =
            region_centroid(&polygons).map_err(|e| geom_err(format!("feature {index}: {e}")))?;
        regions.push(Region {
            id: property_id(feature, id_property, index),
            polygons,
            centroid,
        });
    }
    Ok(RegionSet { regions })
}

#[derive(Debug, Clone, Copy)]
struct BBox {
    min: Point,
    max: Point,
}

impl BBox {
    fn of(points: impl IntoIterator<Item = Point>) -> Self {
        let mut b = BBox {
            min: [f64::INFINITY; 2],
            max: [f64::NEG_INFINITY; 2],
        };
        for p in points {
            for d in 0..2 {
                b.min[d] = b.min[d].min(p[d]);
                b.max[d] = b.max[d].max(p[d]);
            }
        }
        b
    }

    fn near(&self, other: &BBox, tol: f64) -> bool {
        (0..2).all(|d| self.min[d] - tol <= other.max[d] && other.min[d] - tol <= self.max[d])
    }
}

type Segment = (Point, Point);

fn segments(region: &Region) -> Vec<Segment> {
    region
        .polygons
        .iter()
        .flatten()
        .flat_map(|ring| ring.windows(2).map(|w| (w[0], w[1])))
        .collect()
}

fn sub(a: Point, b: Point) -> Point {
    [a[0] - b[0], a[1] - b[1]]
}

fn cross(a: Point, b: Point) -> f64 {
    a[0] * b[1] - a[1] * b[0]
}

fn point_segment_dist(p: Point, (a, b): Segment) -> f64 {
    let ab = sub(b, a);
    let ap = sub(p, a);
    let len2 = ab[0] * ab[0] + ab[1] * ab[1];
    let t = if len2 == 0.0 {
        0.0
    } else {
        ((ap[0] * ab[0] + ap[1] * ab[1]) / len2).clamp(0.0, 1.0)
    };
    let d = [ap[0] - t * ab[0], ap[1] - t * ab[1]];
    d[0].hypot(d[1])
}

fn segments_cross(s: Segment, t: Segment) -> bool {
    let d1 = cross(sub(s.1, s.0), sub(t.0, s.0));
    let d2 = cross(sub(s.1, s.0), sub(t.1, s.0));
    let d3 = cross(sub(t.1, t.0), sub(s.0, t.0));
    let d4 = cross(sub(t.1, t.0), sub(s.1, t.0));
    ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0))
        && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0))
}

fn segment_dist(s: Segment, t: Segment) -> f64 {
    if segments_cross(s, t) {
        return 0.0;
    }
    point_segment_dist(s.0, t)
        .min(point_segment_dist(s.1, t))
        .min(point_segment_dist(t.0, s))
        .min(point_segment_dist(t.1, s))
}

fn boundaries_within(a: &[Segment], b: &[Segment], tol: f64) -> bool {
    a.iter()
        .any(|&s| b.iter().any(|&t| segment_dist(s, t) <= tol))
}

/// Queen adjacency graph of `regions`, with the region id of every node.
pub fn geojson_to_graph(regions: &RegionSet, tol: f64) -> Result<(Graph, Vec<String>)> {
    if regions.regions.is_empty() {
        return Err(geom_err("no regions"));
    }
    if !(tol >= 0.0) {
        return Err(geom_err("tolerance must be non-negative"));
    }
    let segs: Vec<Vec<Segment>> = regions.regions.iter().map(segments).collect();
    let boxes: Vec<BBox> = segs
        .iter()
        .map(|s| BBox::of(s.iter().flat_map(|&(p, q)| [p, q])))
        .collect();
    let mut edges = Vec::new();
    for u in 0..segs.len() {
        for v in u + 1..segs.len() {
            if !boxes[u].near(&boxes[v], tol) {
                continue;
            }
            // only segments near the other region's box can be within tol of it
            let seg_box = |&(p, q): &Segment| BBox::of([p, q]);
            let near_v: Vec<Segment> = segs[u]
                .iter()
                .copied()
                .filter(|s| seg_box(s).near(&boxes[v], tol))
                .collect();
            let near_u: Vec<Segment> = segs[v]
                .iter()
                .copied()
                .filter(|s| seg_box(s).near(&boxes[u], tol))
                .collect();
            if boundaries_within(&near_v, &near_u, tol) {
                edges.push((u, v));
            }
        }
    }
    let graph = Graph::from_edges(segs.len(), &edges)?;
    let ids = regions.regions.iter().map(|r| r.id.clone()).collect();
    Ok((graph, ids))
}

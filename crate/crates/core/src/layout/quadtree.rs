//! Barnes-Hut quadtree for the many-body repulsion.

use super::Point;

const MAX_DEPTH: u32 = 48;

#[derive(Debug)]
struct Cell {
    size: f64,
    /// Sum of body strengths below this cell.
    value: f64,
    /// Strength-weighted centroid.
    cx: f64,
    cy: f64,
    kind: CellKind,
}

#[derive(Debug)]
enum CellKind {
    Leaf(Vec<usize>),
    Internal([Option<usize>; 4]),
}

#[derive(Debug)]
pub struct QuadTree {
    cells: Vec<Cell>,
}

impl QuadTree {
    /// Builds a tree over `points` where body `i` carries `strengths[i]`.
    pub fn build(points: &[Point], strengths: &[f64]) -> Self {
        let mut tree = QuadTree { cells: Vec::new() };
        if points.is_empty() {
            return tree;
        }
        let (mut x0, mut y0) = (f64::INFINITY, f64::INFINITY);
        let (mut x1, mut y1) = (f64::NEG_INFINITY, f64::NEG_INFINITY);
        for p in points {
            x0 = x0.min(p.x);
            y0 = y0.min(p.y);
            x1 = x1.max(p.x);
            y1 = y1.max(p.y);
        }
        let size = (x1 - x0).max(y1 - y0);
        let size = if size > 0.0 { size } else { 1.0 };
        let all: Vec<usize> = (0..points.len()).collect();
        tree.insert(points, strengths, all, x0, y0, size, 0);
        tree
    }

    fn insert(
        &mut self,
        points: &[Point],
        strengths: &[f64],
        bodies: Vec<usize>,
        x0: f64,
        y0: f64,
        size: f64,
        depth: u32,
    ) -> usize {
        let coincident = bodies
            .iter()
            .all(|&i| points[i] == points[bodies[0]]);
        if bodies.len() == 1 || coincident || depth >= MAX_DEPTH {
            let mut value = 0.0;
            let (mut cx, mut cy, mut weight) = (0.0, 0.0, 0.0);
            for &i in &bodies {
                value += strengths[i];
                let c = strengths[i].abs();
                cx += c * points[i].x;
                cy += c * points[i].y;
                weight += c;
            }
            let (cx, cy) = if weight > 0.0 {
                (cx / weight, cy / weight)
            } else {
                (points[bodies[0]].x, points[bodies[0]].y)
            };
            self.cells.push(Cell {
                size,
                value,
                cx,
                cy,
                kind: CellKind::Leaf(bodies),
            });
            return self.cells.len() - 1;
        }

        let half = size / 2.0;
        let (xm, ym) = (x0 + half, y0 + half);
        let mut quads: [Vec<usize>; 4] = Default::default();
        for i in bodies {
            let p = points[i];
            let q = usize::from(p.x >= xm) | (usize::from(p.y >= ym) << 1);
            quads[q].push(i);
        }

        let me = self.cells.len();
        self.cells.push(Cell {
            size,
            value: 0.0,
            cx: 0.0,
            cy: 0.0,
            kind: CellKind::Internal([None; 4]),
        });
        let mut children = [None; 4];
        let (mut value, mut cx, mut cy, mut weight) = (0.0, 0.0, 0.0, 0.0);
        for (q, sub) in quads.into_iter().enumerate() {
            if sub.is_empty() {
                continue;
            }
            let qx = if q & 1 == 1 { xm } else { x0 };
            let qy = if q & 2 == 2 { ym } else { y0 };
            let child = self.insert(points, strengths, sub, qx, qy, half, depth + 1);
            let c = &self.cells[child];
            value += c.value;
            let w = c.value.abs();
            cx += w * c.cx;
            cy += w * c.cy;
            weight += w;
            children[q] = Some(child);
        }
        let cell = &mut self.cells[me];
        cell.value = value;
        if weight > 0.0 {
            cell.cx = cx / weight;
            cell.cy = cy / weight;
        } else {
            cell.cx = x0 + half;
            cell.cy = y0 + half;
        }
        cell.kind = CellKind::Internal(children);
        me
    }

    /// Accumulates the repulsive velocity change on body `body` at `at`.
    /// `jiggle` supplies a tiny offset for exactly coincident axes.
    pub fn apply(
        &self,
        body: usize,
        at: Point,
        strengths: &[f64],
        theta2: f64,
        alpha: f64,
        jiggle: &mut dyn FnMut() -> f64,
    ) -> (f64, f64) {
        let mut dv = (0.0, 0.0);
        if self.cells.is_empty() {
            return dv;
        }
        let mut stack = vec![0usize];
        while let Some(ci) = stack.pop() {
            let cell = &self.cells[ci];
            if cell.value == 0.0 {
                continue;
            }
            let mut dx = cell.cx - at.x;
            let mut dy = cell.cy - at.y;
            let mut l = dx * dx + dy * dy;
            if cell.size * cell.size / theta2 < l {
                // Far enough: treat the cell as one body.
                if dx == 0.0 {
                    dx = jiggle();
                    l += dx * dx;
                }
                if dy == 0.0 {
                    dy = jiggle();
                    l += dy * dy;
                }
                if l < 1.0 {
                    l = l.sqrt();
                }
                dv.0 += dx * cell.value * alpha / l;
                dv.1 += dy * cell.value * alpha / l;
                continue;
            }
            match &cell.kind {
                CellKind::Internal(children) => {
                    stack.extend(children.iter().rev().flatten());
                }
                CellKind::Leaf(bodies) => {
                    let only_self = bodies.len() == 1 && bodies[0] == body;
                    if only_self {
                        continue;
                    }
                    if dx == 0.0 {
                        dx = jiggle();
                        l += dx * dx;
                    }
                    if dy == 0.0 {
                        dy = jiggle();
                        l += dy * dy;
                    }
                    if l < 1.0 {
                        l = l.sqrt();
                    }
                    for &other in bodies {
                        if other == body {
                            continue;
                        }
                        let w = strengths[other] * alpha / l;
                        dv.0 += dx * w;
                        dv.1 += dy * w;
                    }
                }
            }
        }
        dv
    }

    #[cfg(test)]
    fn root_value(&self) -> f64 {
        self.cells.first().map_or(0.0, |c| c.value)
    }
}

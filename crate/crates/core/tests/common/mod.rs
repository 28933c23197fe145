//! Triangulated-sphere oracle for Euler characteristics of sublevel sets.

#![allow(dead_code)]

use std::collections::HashMap;

/// Geodesic icosphere: icosahedron subdivided `level` times, vertices pushed
/// to the unit sphere.
pub struct Icosphere {
    pub vertices: Vec<[f64; 3]>,
    pub edges: Vec<[usize; 2]>,
    pub faces: Vec<[usize; 3]>,
}

fn normalize(v: [f64; 3]) -> [f64; 3] {
    let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
    [v[0] / n, v[1] / n, v[2] / n]
}

impl Icosphere {
    pub fn new(level: usize) -> Self {
        let t = (1.0 + 5f64.sqrt()) / 2.0;
        let mut vertices: Vec<[f64; 3]> = [
            [-1.0, t, 0.0],
            [1.0, t, 0.0],
            [-1.0, -t, 0.0],
            [1.0, -t, 0.0],
            [0.0, -1.0, t],
            [0.0, 1.0, t],
            [0.0, -1.0, -t],
            [0.0, 1.0, -t],
            [t, 0.0, -1.0],
            [t, 0.0, 1.0],
            [-t, 0.0, -1.0],
            [-t, 0.0, 1.0],
        ]
        .into_iter()
        .map(normalize)
        .collect();
        let mut faces: Vec<[usize; 3]> = vec![
            [0, 11, 5],
            [0, 5, 1],
            [0, 1, 7],
            [0, 7, 10],
            [0, 10, 11],
            [1, 5, 9],
            [5, 11, 4],
            [11, 10, 2],
            [10, 7, 6],
            [7, 1, 8],
            [3, 9, 4],
            [3, 4, 2],
            [3, 2, 6],
            [3, 6, 8],
            [3, 8, 9],
            [4, 9, 5],
            [2, 4, 11],
            [6, 2, 10],
            [8, 6, 7],
            [9, 8, 1],
        ];
        for _ in 0..level {
            let mut mid: HashMap<(usize, usize), usize> = HashMap::new();
            let mut next = Vec::with_capacity(faces.len() * 4);
            let mut midpoint = |a: usize, b: usize, vs: &mut Vec<[f64; 3]>| -> usize {
                let key = (a.min(b), a.max(b));
                *mid.entry(key).or_insert_with(|| {
                    let (p, q) = (vs[a], vs[b]);
                    vs.push(normalize([p[0] + q[0], p[1] + q[1], p[2] + q[2]]));
                    vs.len() - 1
                })
            };
            for [a, b, c] in faces {
                let ab = midpoint(a, b, &mut vertices);
                let bc = midpoint(b, c, &mut vertices);
                let ca = midpoint(c, a, &mut vertices);
                next.extend([[a, ab, ca], [b, bc, ab], [c, ca, bc], [ab, bc, ca]]);
            }
            faces = next;
        }
        let mut edges: Vec<[usize; 2]> = faces
            .iter()
            .flat_map(|&[a, b, c]| [[a, b], [b, c], [c, a]])
            .map(|[a, b]| [a.min(b), a.max(b)])
            .collect();
        edges.sort_unstable();
        edges.dedup();
        Icosphere { vertices, edges, faces }
    }

    /// χ of the full subcomplex spanned by the vertices where `inside` holds.
    pub fn induced_chi(&self, inside: impl Fn(&[f64; 3]) -> bool) -> i64 {
        let mask: Vec<bool> = self.vertices.iter().map(inside).collect();
        let v = mask.iter().filter(|m| **m).count() as i64;
        let e = self.edges.iter().filter(|[a, b]| mask[*a] && mask[*b]).count() as i64;
        let f = self.faces.iter().filter(|[a, b, c]| mask[*a] && mask[*b] && mask[*c]).count() as i64;
        v - e + f
    }
}

/// Meshes at increasing levels; χ is accepted when the two finest levels
/// agree. Coarse levels can agree with each other and still both miss a
/// feature smaller than their edge length.
pub struct MeshLadder {
    levels: Vec<Icosphere>,
}

impl MeshLadder {
    pub fn new(first: usize, last: usize) -> Self {
        MeshLadder { levels: (first..=last).map(Icosphere::new).collect() }
    }

    pub fn chi(&self, inside: impl Fn(&[f64; 3]) -> bool) -> Option<i64> {
        let values: Vec<i64> = self.levels.iter().rev().take(2).map(|m| m.induced_chi(&inside)).collect();
        (values.len() == 2 && values[0] == values[1]).then_some(values[0])
    }
}

/// Prints one acceptance line and records the outcome.
pub fn report(failures: &mut Vec<String>, label: &str, ok: bool, detail: String) {
    println!("{} {label}: {detail}", if ok { "PASS" } else { "FAIL" });
    if !ok {
        failures.push(label.to_string());
    }
}

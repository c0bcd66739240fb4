//! The distant graph of a projective line: components, distances, diameters
//! and DOT/JSON export.

use std::collections::VecDeque;
use std::fmt;

use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::projective::{Point, ProjectiveLine};

/// A graph distance; `Infinite` between different components.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Distance {
    Finite(u32),
    Infinite,
}

impl Distance {
    pub fn finite(self) -> Option<u32> {
        match self {
            Distance::Finite(d) => Some(d),
            Distance::Infinite => None,
        }
    }
}

impl fmt::Display for Distance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Distance::Finite(d) => write!(f, "{d}"),
            Distance::Infinite => write!(f, "inf"),
        }
    }
}

impl Serialize for Distance {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Distance::Finite(d) => s.serialize_u32(*d),
            Distance::Infinite => s.serialize_str("inf"),
        }
    }
}

const UNREACHED: u32 = u32::MAX;

/// Adjacency as bitset rows, plus components and all-pairs BFS distances.
#[derive(Debug, Clone)]
pub struct DistantGraph {
    n: usize,
    words: usize,
    adjacency: Vec<u64>,
    component_of: Vec<usize>,
    components: Vec<Vec<usize>>,
    dist: Vec<u32>,
}

impl DistantGraph {
    pub fn build(line: &ProjectiveLine) -> Result<Self> {
        Self::build_with_threads(line, 1)
    }

    /// Builds the graph, running the pairwise distant tests on up to
    /// `threads` workers. The result does not depend on `threads`.
    pub fn build_with_threads(line: &ProjectiveLine, threads: usize) -> Result<Self> {
        let n = line.len();
        let words = n.div_ceil(64).max(1);
        let row = |i: usize| -> Result<Vec<u64>> {
            let mut bits = vec![0u64; words];
            for j in 0..n {
                if line.distant(line.point(i), line.point(j))? {
                    bits[j / 64] |= 1 << (j % 64);
                }
            }
            Ok(bits)
        };
        let rows: Vec<Vec<u64>> = if threads > 1 {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .map_err(|e| Error::Capability(format!("thread pool: {e}")))?;
            pool.install(|| (0..n).into_par_iter().map(row).collect::<Result<_>>())?
        } else {
            (0..n).map(row).collect::<Result<_>>()?
        };
        let adjacency = rows.concat();
        Ok(Self::from_adjacency(n, words, adjacency))
    }

    fn from_adjacency(n: usize, words: usize, adjacency: Vec<u64>) -> Self {
        let mut g = DistantGraph {
            n,
            words,
            adjacency,
            component_of: vec![usize::MAX; n],
            components: Vec::new(),
            dist: vec![UNREACHED; n * n],
        };
        for s in 0..n {
            let reached = g.bfs(s);
            if g.component_of[s] == usize::MAX {
                let id = g.components.len();
                let members: Vec<usize> = (0..n).filter(|&v| reached[v] != UNREACHED).collect();
                for &v in &members {
                    g.component_of[v] = id;
                }
                g.components.push(members);
            }
            g.dist[s * n..(s + 1) * n].copy_from_slice(&reached);
        }
        g
    }

    fn bfs(&self, s: usize) -> Vec<u32> {
        let mut d = vec![UNREACHED; self.n];
        d[s] = 0;
        let mut queue = VecDeque::from([s]);
        while let Some(v) = queue.pop_front() {
            for w in self.neighbors(v) {
                if d[w] == UNREACHED {
                    d[w] = d[v] + 1;
                    queue.push_back(w);
                }
            }
        }
        d
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    #[inline]
    pub fn adjacent(&self, i: usize, j: usize) -> bool {
        self.adjacency[i * self.words + j / 64] >> (j % 64) & 1 == 1
    }

    pub fn neighbors(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.n).filter(move |&j| self.adjacent(i, j))
    }

    pub fn degree(&self, i: usize) -> usize {
        self.adjacency[i * self.words..(i + 1) * self.words]
            .iter()
            .map(|w| w.count_ones() as usize)
            .sum()
    }

    /// Edges `(i, j)` with `i <= j`; loops only occur over the trivial ring.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        (0..self.n)
            .flat_map(|i| {
                (i..self.n)
                    .filter(move |&j| self.adjacent(i, j))
                    .map(move |j| (i, j))
            })
            .collect()
    }

    pub fn components(&self) -> &[Vec<usize>] {
        &self.components
    }

    pub fn component_of(&self, i: usize) -> usize {
        self.component_of[i]
    }

    pub fn is_connected(&self) -> bool {
        self.components.len() <= 1
    }

    pub fn dist(&self, i: usize, j: usize) -> Distance {
        match self.dist[i * self.n + j] {
            UNREACHED => Distance::Infinite,
            d => Distance::Finite(d),
        }
    }

    /// Largest distance inside component `c`.
    pub fn diameter(&self, c: usize) -> Distance {
        let members = &self.components[c];
        let max = members
            .iter()
            .flat_map(|&i| members.iter().map(move |&j| self.dist[i * self.n + j]))
            .max()
            .unwrap_or(0);
        Distance::Finite(max)
    }

    pub fn diameters(&self) -> Vec<Distance> {
        (0..self.components.len())
            .map(|c| self.diameter(c))
            .collect()
    }

    pub fn is_complete(&self) -> bool {
        (0..self.n).all(|i| (0..self.n).all(|j| i == j || self.adjacent(i, j)))
    }

    /// Graphviz rendering; nodes are labelled `R(a,b)`.
    pub fn to_dot(&self, line: &ProjectiveLine) -> String {
        let mut out = String::from("graph distant {\n");
        for (i, &p) in line.points().iter().enumerate() {
            out.push_str(&format!("  n{i} [label=\"{}\"];\n", line.fmt_point(p)));
        }
        for (i, j) in self.edges() {
            out.push_str(&format!("  n{i} -- n{j};\n"));
        }
        out.push_str("}\n");
        out
    }

    pub fn export(&self, line: &ProjectiveLine) -> GraphExport {
        GraphExport {
            ring: line.ring().name().to_string(),
            points: line.points().iter().map(|&p| line.fmt_point(p)).collect(),
            edges: self.edges().into_iter().map(|(i, j)| [i, j]).collect(),
            components: self.components.clone(),
            diameters: self.diameters(),
        }
    }

    pub fn index_pair(&self, line: &ProjectiveLine, p: Point, q: Point) -> Result<(usize, usize)> {
        let find = |x: Point| {
            line.index_of(x)
                .ok_or_else(|| Error::Domain(format!("{} is not on this line", line.fmt_point(x))))
        };
        Ok((find(p)?, find(q)?))
    }
}

/// JSON form of a distant graph.
#[derive(Debug, Clone, Serialize)]
pub struct GraphExport {
    pub ring: String,
    pub points: Vec<String>,
    pub edges: Vec<[usize; 2]>,
    pub components: Vec<Vec<usize>>,
    pub diameters: Vec<Distance>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mat2::{mat_inverse, mat_invertible, Mat2};
    use crate::ring::{FiniteRing, RingSpec};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn line(s: &str) -> ProjectiveLine {
        ProjectiveLine::new(&FiniteRing::from_spec(&RingSpec::parse(s).unwrap()).unwrap()).unwrap()
    }

    #[test]
    fn f3_is_complete_k4() {
        let l = line("F3");
        let g = DistantGraph::build(&l).unwrap();
        assert_eq!(g.len(), 4);
        assert!(g.is_complete());
        assert_eq!(g.components().len(), 1);
        assert_eq!(g.diameter(0), Distance::Finite(1));
        assert_eq!(g.edges().len(), 6);
    }

    #[test]
    fn z4_has_diameter_two() {
        let l = line("Z/4");
        let g = DistantGraph::build(&l).unwrap();
        assert!(g.is_connected());
        assert_eq!(g.diameter(0), Distance::Finite(2));
    }

    #[test]
    fn trivial_ring_graph() {
        let l = line("Z/1");
        let g = DistantGraph::build(&l).unwrap();
        assert_eq!(g.len(), 1);
        assert!(g.adjacent(0, 0));
        assert_eq!(g.edges(), vec![(0, 0)]);
        assert_eq!(g.diameter(0), Distance::Finite(0));
    }

    #[test]
    fn threaded_build_is_identical() {
        let l = line("M2(F2)");
        let a = DistantGraph::build(&l).unwrap();
        let b = DistantGraph::build_with_threads(&l, 4).unwrap();
        assert_eq!(a.edges(), b.edges());
        assert_eq!(a.components(), b.components());
    }

    #[test]
    fn infinite_distance_display() {
        assert_eq!(Distance::Infinite.to_string(), "inf");
        assert_eq!(
            serde_json::to_string(&Distance::Infinite).unwrap(),
            "\"inf\""
        );
        assert_eq!(serde_json::to_string(&Distance::Finite(2)).unwrap(), "2");
        assert!(Distance::Finite(100) < Distance::Infinite);
    }

    #[test]
    fn dot_and_json_export() {
        let l = line("F2");
        let g = DistantGraph::build(&l).unwrap();
        let dot = g.to_dot(&l);
        assert!(dot.contains("label=\"R(1,0)\""));
        assert_eq!(dot.matches(" -- ").count(), 3);
        let json = serde_json::to_string(&g.export(&l)).unwrap();
        assert_eq!(
            json,
            r#"{"ring":"F2","points":["R(0,1)","R(1,0)","R(1,1)"],"edges":[[0,1],[0,2],[1,2]],"components":[[0,1,2]],"diameters":[1]}"#
        );
    }

    #[test]
    fn gl2_preserves_distance() {
        for name in ["Z/4", "F2[e]"] {
            let l = line(name);
            let r = l.ring().clone();
            let g = DistantGraph::build(&l).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(21);
            let mut tested = 0;
            while tested < 100 {
                let m = Mat2::new(
                    r.elem(rng.random_range(0..r.size())),
                    r.elem(rng.random_range(0..r.size())),
                    r.elem(rng.random_range(0..r.size())),
                    r.elem(rng.random_range(0..r.size())),
                );
                if !mat_invertible(&r, &m).unwrap() {
                    continue;
                }
                assert!(mat_inverse(&r, &m).is_ok());
                tested += 1;
                for i in 0..l.len() {
                    for j in 0..l.len() {
                        let pi = l.index_of(l.apply(l.point(i), &m)).unwrap();
                        let pj = l.index_of(l.apply(l.point(j), &m)).unwrap();
                        assert_eq!(g.dist(pi, pj), g.dist(i, j));
                    }
                }
            }
        }
    }
}

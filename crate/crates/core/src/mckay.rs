//! McKay quivers, their collapse to undirected graphs, and recognition of
//! the extended Dynkin diagrams.

use std::collections::VecDeque;
use std::fmt;
use std::sync::Arc;

use crate::chars::{self, CharError, CharacterTable};
use crate::grp::FiniteGroup;

/// m[i][j] = multiplicity of χ_j in χ_Nat ⊗ χ_i, drawn i → j.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct McKayGraph {
    pub degrees: Vec<usize>,
    pub arcs: Vec<Vec<i64>>,
    pub trivial: usize,
    /// Rows occurring in the natural character.
    pub natural: Vec<usize>,
}

pub fn mckay_graph(g: &Arc<FiniteGroup>) -> Result<McKayGraph, CharError> {
    let t = chars::table_of(g)?;
    mckay_from_table(g, &t)
}

pub fn mckay_from_table(g: &FiniteGroup, t: &CharacterTable) -> Result<McKayGraph, CharError> {
    let nat = chars::natural_character(g, t)?;
    let arcs = (0..t.chars.len())
        .map(|i| {
            let f: Vec<_> = t.chars[i]
                .iter()
                .zip(&nat.values)
                .map(|(a, b)| a.mul_ref(b))
                .collect();
            t.decompose(&f)
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(McKayGraph {
        degrees: t.degrees.clone(),
        arcs,
        trivial: 0,
        natural: (0..nat.decomposition.len())
            .filter(|&i| nat.decomposition[i] != 0)
            .collect(),
    })
}

impl McKayGraph {
    pub fn len(&self) -> usize {
        self.degrees.len()
    }

    pub fn is_empty(&self) -> bool {
        self.degrees.is_empty()
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.len()).all(|i| (0..self.len()).all(|j| self.arcs[i][j] == self.arcs[j][i]))
    }

    /// Σ_j m_ij·deg_j = 2·deg_i for every vertex.
    pub fn is_balanced(&self) -> bool {
        (0..self.len()).all(|i| {
            let s: i64 = (0..self.len()).map(|j| self.arcs[i][j] * self.degrees[j] as i64).sum();
            s == 2 * self.degrees[i] as i64
        })
    }
}

/// Undirected edges (i ≤ j, multiplicity) plus leftover directed arcs.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Collapsed {
    pub vertices: usize,
    pub edges: Vec<(usize, usize, i64)>,
    pub arcs: Vec<(usize, usize, i64)>,
}

/// Each reciprocal pair i → j, j → i becomes one undirected edge.
pub fn collapse(g: &McKayGraph) -> Collapsed {
    let n = g.len();
    let mut out = Collapsed {
        vertices: n,
        ..Default::default()
    };
    for i in 0..n {
        for j in i..n {
            let (a, b) = (g.arcs[i][j], g.arcs[j][i]);
            if i == j {
                if a > 0 {
                    out.edges.push((i, i, a));
                }
                continue;
            }
            let both = a.min(b);
            if both > 0 {
                out.edges.push((i, j, both));
            }
            if a > both {
                out.arcs.push((i, j, a - both));
            }
            if b > both {
                out.arcs.push((j, i, b - both));
            }
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Ade {
    A(usize),
    D(usize),
    E6,
    E7,
    E8,
    Disjoint(Vec<Ade>),
    Other,
}

impl fmt::Display for Ade {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ade::A(k) => write!(f, "A~{k}"),
            Ade::D(k) => write!(f, "D~{k}"),
            Ade::E6 => write!(f, "E~6"),
            Ade::E7 => write!(f, "E~7"),
            Ade::E8 => write!(f, "E~8"),
            Ade::Disjoint(parts) => {
                let s: Vec<String> = parts.iter().map(|p| p.to_string()).collect();
                write!(f, "{}", s.join(" + "))
            }
            Ade::Other => write!(f, "other"),
        }
    }
}

/// Connected components of the underlying undirected graph (arcs count).
pub fn components(c: &Collapsed) -> Vec<Vec<usize>> {
    let n = c.vertices;
    let mut adj = vec![Vec::new(); n];
    for &(i, j, _) in c.edges.iter().chain(&c.arcs) {
        adj[i].push(j);
        adj[j].push(i);
    }
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for s in 0..n {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut comp = vec![s];
        let mut q = VecDeque::from([s]);
        while let Some(x) = q.pop_front() {
            for &y in &adj[x] {
                if !seen[y] {
                    seen[y] = true;
                    comp.push(y);
                    q.push_back(y);
                }
            }
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out
}

/// Pattern-matches each component of the undirected part against the
/// extended Dynkin diagrams. Any leftover directed arc gives `Other`.
pub fn classify_ade(c: &Collapsed) -> Ade {
    if !c.arcs.is_empty() {
        return Ade::Other;
    }
    let comps = components(c);
    if comps.is_empty() {
        return Ade::Other;
    }
    let mut parts: Vec<Ade> = comps.iter().map(|v| classify_component(c, v)).collect();
    if parts.len() == 1 {
        parts.pop().unwrap()
    } else {
        Ade::Disjoint(parts)
    }
}

fn classify_component(c: &Collapsed, verts: &[usize]) -> Ade {
    let edges: Vec<(usize, usize, i64)> = c
        .edges
        .iter()
        .copied()
        .filter(|(i, _, _)| verts.contains(i))
        .collect();
    let v = verts.len();
    if v == 1 {
        return match edges.as_slice() {
            [(_, _, 2)] => Ade::A(0),
            _ => Ade::Other,
        };
    }
    if edges.iter().any(|&(i, j, _)| i == j) {
        return Ade::Other;
    }
    if v == 2 {
        return match edges.as_slice() {
            [(_, _, 2)] => Ade::A(1),
            _ => Ade::Other,
        };
    }
    if edges.iter().any(|&(_, _, m)| m != 1) {
        return Ade::Other;
    }
    let deg = |x: usize| edges.iter().filter(|&&(i, j, _)| i == x || j == x).count();
    let degs: Vec<usize> = verts.iter().map(|&x| deg(x)).collect();
    let e = edges.len();
    if e == v && degs.iter().all(|&d| d == 2) {
        return Ade::A(v - 1);
    }
    if e != v - 1 {
        return Ade::Other;
    }
    let neighbours = |x: usize| -> Vec<usize> {
        edges
            .iter()
            .filter_map(|&(i, j, _)| {
                if i == x {
                    Some(j)
                } else if j == x {
                    Some(i)
                } else {
                    None
                }
            })
            .collect()
    };
    let branch: Vec<usize> = verts.iter().copied().filter(|&x| deg(x) >= 3).collect();
    match branch.as_slice() {
        [b] if deg(*b) == 4 && v == 5 => Ade::D(4),
        [b] if deg(*b) == 3 => {
            let mut arms: Vec<usize> = neighbours(*b)
                .into_iter()
                .map(|start| {
                    let (mut prev, mut cur, mut len) = (*b, start, 1);
                    loop {
                        let next: Vec<usize> =
                            neighbours(cur).into_iter().filter(|&y| y != prev).collect();
                        match next.as_slice() {
                            [y] => {
                                prev = cur;
                                cur = *y;
                                len += 1;
                            }
                            _ => break len,
                        }
                    }
                })
                .collect();
            arms.sort_unstable();
            match arms.as_slice() {
                [2, 2, 2] => Ade::E6,
                [1, 3, 3] => Ade::E7,
                [1, 2, 5] => Ade::E8,
                _ => Ade::Other,
            }
        }
        [a, b] if deg(*a) == 3 && deg(*b) == 3 => {
            let leaves_ok = [*a, *b].iter().all(|&x| {
                neighbours(x).into_iter().filter(|&y| deg(y) == 1).count() == 2
            });
            if leaves_ok {
                Ade::D(v - 1)
            } else {
                Ade::Other
            }
        }
        _ => Ade::Other,
    }
}

/// Isomorphism of weighted digraphs given as adjacency matrices, found by
/// backtracking over degree-compatible assignments.
pub fn digraph_isomorphism(a: &[Vec<i64>], b: &[Vec<i64>]) -> Option<Vec<usize>> {
    let mut found = None;
    isomorphisms(a, &vec![0; a.len()], b, &vec![0; b.len()], |m| {
        found = Some(m.to_vec());
        false
    });
    found
}

/// Calls `visit` with every colour-preserving isomorphism a → b (vertex i of
/// `a` goes to `m[i]`) until it returns false.
pub fn isomorphisms<C: Ord + Clone>(
    a: &[Vec<i64>],
    ca: &[C],
    b: &[Vec<i64>],
    cb: &[C],
    mut visit: impl FnMut(&[usize]) -> bool,
) {
    let n = a.len();
    if b.len() != n {
        return;
    }
    let sig = |m: &[Vec<i64>], c: &[C], i: usize| {
        let mut outs: Vec<i64> = m[i].iter().copied().filter(|&x| x != 0).collect();
        let mut ins: Vec<i64> = m.iter().map(|r| r[i]).filter(|&x| x != 0).collect();
        outs.sort_unstable();
        ins.sort_unstable();
        (c[i].clone(), m[i][i], outs, ins)
    };
    let sa: Vec<_> = (0..n).map(|i| sig(a, ca, i)).collect();
    let sb: Vec<_> = (0..n).map(|i| sig(b, cb, i)).collect();
    // Visit vertices in BFS order so each new vertex meets a mapped neighbour.
    let mut order = Vec::with_capacity(n);
    let mut seen = vec![false; n];
    for s in 0..n {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut queue = VecDeque::from([s]);
        while let Some(v) = queue.pop_front() {
            order.push(v);
            for w in 0..n {
                if !seen[w] && (a[v][w] != 0 || a[w][v] != 0) {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
    }
    let mut map = vec![usize::MAX; n];
    let mut used = vec![false; n];
    struct Search<'a, S> {
        a: &'a [Vec<i64>],
        b: &'a [Vec<i64>],
        sa: &'a [S],
        sb: &'a [S],
        order: &'a [usize],
    }
    fn go<S: PartialEq>(
        s: &Search<'_, S>,
        k: usize,
        map: &mut Vec<usize>,
        used: &mut Vec<bool>,
        visit: &mut dyn FnMut(&[usize]) -> bool,
    ) -> bool {
        let n = s.a.len();
        if k == n {
            return visit(map);
        }
        let v = s.order[k];
        for t in 0..n {
            if used[t] || s.sa[v] != s.sb[t] {
                continue;
            }
            let consistent = s.order[..k]
                .iter()
                .all(|&j| s.a[v][j] == s.b[t][map[j]] && s.a[j][v] == s.b[map[j]][t]);
            if !consistent {
                continue;
            }
            map[v] = t;
            used[t] = true;
            let more = go(s, k + 1, map, used, visit);
            used[t] = false;
            map[v] = usize::MAX;
            if !more {
                return false;
            }
        }
        true
    }
    let search = Search {
        a,
        b,
        sa: &sa,
        sb: &sb,
        order: &order,
    };
    go(&search, 0, &mut map, &mut used, &mut visit);
}

/// Adjacency matrix from a list of (from, to) arcs on `n` vertices.
pub fn adjacency(n: usize, arcs: &[(usize, usize)]) -> Vec<Vec<i64>> {
    let mut m = vec![vec![0i64; n]; n];
    for &(i, j) in arcs {
        m[i][j] += 1;
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{self, Family, GroupSpec};

    fn graph(spec: GroupSpec) -> McKayGraph {
        mckay_graph(&catalog::build(&spec).unwrap()).unwrap()
    }

    fn ade(spec: GroupSpec) -> Ade {
        classify_ade(&collapse(&graph(spec)))
    }

    #[test]
    fn trivial_group_has_double_loop() {
        let g = graph(GroupSpec::new(Family::C, 1));
        assert_eq!(g.arcs, vec![vec![2]]);
        assert_eq!(classify_ade(&collapse(&g)), Ade::A(0));
    }

    #[test]
    fn families() {
        assert_eq!(ade(GroupSpec::new(Family::C, 2)), Ade::A(1));
        assert_eq!(ade(GroupSpec::new(Family::C, 5)), Ade::A(4));
        assert_eq!(ade(GroupSpec::new(Family::BD, 2)), Ade::D(4));
        assert_eq!(ade(GroupSpec::new(Family::BD, 5)), Ade::D(7));
        assert_eq!(ade(GroupSpec::poly(Family::BT)), Ade::E6);
        assert_eq!(ade(GroupSpec::poly(Family::BO)), Ade::E7);
        assert_eq!(ade(GroupSpec::poly(Family::BI)), Ade::E8);
    }

    #[test]
    fn balance_and_symmetry() {
        let g = graph(GroupSpec::poly(Family::BT));
        assert!(g.is_symmetric());
        assert!(g.is_balanced());
        assert_eq!(collapse(&g).edges.len(), 6);
    }

    #[test]
    fn empty_collapse() {
        let g = McKayGraph {
            degrees: vec![],
            arcs: vec![],
            trivial: 0,
            natural: vec![],
        };
        let c = collapse(&g);
        assert!(c.edges.is_empty() && c.arcs.is_empty());
    }

    #[test]
    fn isomorphism_of_relabelled_cycle() {
        let a = adjacency(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]);
        let b = adjacency(4, &[(2, 0), (0, 3), (3, 1), (1, 2)]);
        let m = digraph_isomorphism(&a, &b).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                assert_eq!(a[i][j], b[m[i]][m[j]]);
            }
        }
        let c = adjacency(4, &[(0, 1), (1, 0), (2, 3), (3, 2)]);
        assert!(digraph_isomorphism(&a, &c).is_none());
    }
}

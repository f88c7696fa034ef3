// Generators and brute-force oracles shared by the integration tests.
// Nothing here calls into the library's algorithms; only its types.
#![allow(dead_code)]

use elliptic_blocks::{IntMatrix, ModularLabeling, VertexId, WeightedGraph};
use rand::Rng;

pub fn graph_from_edges(n: usize, edges: &[(usize, usize)]) -> WeightedGraph {
    let mut b = WeightedGraph::builder();
    for i in 0..n {
        b.add_vertex(format!("v{i}"));
    }
    for &(u, v) in edges {
        b.add_edge(format!("v{u}"), format!("v{v}"), 1, false);
    }
    b.build().expect("generated graph")
}

/// Adjacency lists indexed by vertex.
pub fn adjacency(n: usize, edges: &[(usize, usize)]) -> Vec<Vec<usize>> {
    let mut adj = vec![Vec::new(); n];
    for &(u, v) in edges {
        adj[u].push(v);
        adj[v].push(u);
    }
    adj
}

fn allowed(adj: &[Vec<usize>], u: usize, v: usize, no_adjacent_trivalent: bool) -> bool {
    if u == v || adj[u].contains(&v) || adj[u].len() >= 3 || adj[v].len() >= 3 {
        return false;
    }
    if !no_adjacent_trivalent {
        return true;
    }
    // degrees after adding uv
    let deg = |x: usize| adj[x].len() + usize::from(x == u || x == v);
    for x in [u, v] {
        if deg(x) == 3 {
            let other = if x == u { v } else { u };
            if adj[x].iter().chain([&other]).any(|&y| deg(y) == 3) {
                return false;
            }
        }
    }
    true
}

/// Random connected simple graph on `n` vertices with max degree 3: a random
/// tree plus up to `chords` extra edges.
pub fn random_connected(
    rng: &mut impl Rng,
    n: usize,
    chords: usize,
    no_adjacent_trivalent: bool,
) -> Vec<(usize, usize)> {
    let mut adj = vec![Vec::new(); n];
    let mut edges = Vec::new();
    for v in 1..n {
        // v - 1 is still a leaf, so there is always a choice
        let choices: Vec<usize> = (0..v)
            .filter(|&u| allowed(&adj, u, v, no_adjacent_trivalent))
            .collect();
        let u = choices[rng.gen_range(0..choices.len())];
        adj[u].push(v);
        adj[v].push(u);
        edges.push((u, v));
    }
    for _ in 0..chords {
        let u = rng.gen_range(0..n);
        let v = rng.gen_range(0..n);
        if allowed(&adj, u, v, no_adjacent_trivalent) {
            adj[u].push(v);
            adj[v].push(u);
            edges.push((u, v));
        }
    }
    edges
}

pub fn is_connected(n: usize, edges: &[(usize, usize)]) -> bool {
    let adj = adjacency(n, edges);
    let mut seen = vec![false; n];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(x) = stack.pop() {
        for &y in &adj[x] {
            if !seen[y] {
                seen[y] = true;
                stack.push(y);
            }
        }
    }
    seen.iter().all(|&s| s)
}

/// Fraction-free elimination over i128; entries must stay within the
/// Hadamard bound of the input, which the callers keep small.
pub fn bareiss_rank(rows: &[Vec<i64>]) -> usize {
    let mut a: Vec<Vec<i128>> = rows
        .iter()
        .map(|r| r.iter().map(|&x| x as i128).collect())
        .collect();
    let m = a.len();
    let n = if m == 0 { 0 } else { a[0].len() };
    let mut rank = 0;
    let mut prev = 1i128;
    for col in 0..n {
        let Some(piv) = (rank..m).find(|&r| a[r][col] != 0) else {
            continue;
        };
        a.swap(rank, piv);
        for r in rank + 1..m {
            for c in col + 1..n {
                a[r][c] = (a[rank][col] * a[r][c] - a[r][col] * a[rank][c]) / prev;
            }
            a[r][col] = 0;
        }
        prev = a[rank][col];
        rank += 1;
    }
    rank
}

/// Rows of the 5/3 system written out by hand.
pub fn five_thirds_rows(n: usize, edges: &[(usize, usize)]) -> Vec<Vec<i64>> {
    let adj = adjacency(n, edges);
    (0..n)
        .map(|v| {
            let mut row = vec![0i64; n];
            row[v] = 2 * adj[v].len() as i64;
            for &w in &adj[v] {
                row[w] += 3;
            }
            row
        })
        .collect()
}

pub fn det_cofactor(m: &[Vec<i64>]) -> i64 {
    let n = m.len();
    match n {
        0 => 1,
        1 => m[0][0],
        _ => (0..n)
            .map(|j| {
                let minor: Vec<Vec<i64>> = m[1..]
                    .iter()
                    .map(|r| r.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, &x)| x).collect())
                    .collect();
                let sign = if j % 2 == 0 { 1 } else { -1 };
                sign * m[0][j] * det_cofactor(&minor)
            })
            .sum(),
    }
}

pub fn to_int_matrix(m: &[Vec<i64>]) -> IntMatrix {
    IntMatrix::from_rows(m)
}

/// All `k` in `(Z/D)^n` with `m k ≡ 0 (mod D)`, i.e. the kernel of `m` on
/// `(1/D Z / Z)^n`, listed as numerator vectors.
pub fn lattice_kernel(m: &[Vec<i64>], d: i64) -> Vec<Vec<i64>> {
    let n = m.len();
    let total = (d as usize).pow(n as u32);
    let mut out = Vec::new();
    for code in 0..total {
        let mut k = vec![0i64; n];
        let mut c = code;
        for x in k.iter_mut().rev() {
            *x = (c % d as usize) as i64;
            c /= d as usize;
        }
        if m
            .iter()
            .all(|row| row.iter().zip(&k).map(|(a, b)| a * b).sum::<i64>().rem_euclid(d) == 0)
        {
            out.push(k);
        }
    }
    out
}

/// Kernel size on `((R/Z)^2)^n` by enumerating pairs of lattice vectors in
/// `(1/D Z)^2n` directly. Only for small `D^(2n)`.
pub fn lattice_kernel_2d_count(m: &[Vec<i64>], d: i64) -> u64 {
    let n = m.len();
    let total = (d as usize).pow(2 * n as u32);
    let mut count = 0;
    for code in 0..total {
        let mut c = code;
        let mut pts = vec![(0i64, 0i64); n];
        for p in pts.iter_mut().rev() {
            p.1 = (c % d as usize) as i64;
            c /= d as usize;
            p.0 = (c % d as usize) as i64;
            c /= d as usize;
        }
        let ok = m.iter().all(|row| {
            let sx: i64 = row.iter().zip(&pts).map(|(a, p)| a * p.0).sum();
            let sy: i64 = row.iter().zip(&pts).map(|(a, p)| a * p.1).sum();
            sx.rem_euclid(d) == 0 && sy.rem_euclid(d) == 0
        });
        if ok {
            count += 1;
        }
    }
    count
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

/// The literal definition: for every vertex `v` and every vertex subset `H`
/// containing it, form the normalized Laplacian of the induced subgraph at
/// `v` minus `5/3 λ(v)`, with division by modular inverses. A zero value
/// with `0 < deg_H(v) < deg(v)` is a violation. Returns the first violating
/// `(v, H)` in (vertex, subset-bitmask) order.
pub fn induced_subgraph_violation(
    n: usize,
    edges: &[(usize, usize)],
    lam: &[u64],
    p: u64,
) -> Option<(usize, u32)> {
    assert!(n <= 20);
    let adj = adjacency(n, edges);
    let five_thirds = 5 * inv_mod(3, p) % p;
    for v in 0..n {
        for h in 0u32..(1 << n) {
            if h >> v & 1 == 0 {
                continue;
            }
            let nh: Vec<usize> = adj[v].iter().copied().filter(|&w| h >> w & 1 == 1).collect();
            let dh = nh.len();
            if dh == 0 || dh == adj[v].len() {
                continue;
            }
            let mut lap = 0u64;
            for &w in &nh {
                lap = (lap + lam[v] + p - lam[w]) % p;
            }
            let f = (lap * inv_mod(dh as u64, p) % p + p - five_thirds * lam[v] % p) % p;
            if f == 0 {
                return Some((v, h));
            }
        }
    }
    None
}

pub fn labeling(g: &WeightedGraph, p: u64, values: Vec<u64>) -> ModularLabeling {
    ModularLabeling::for_graph(g, p, values).expect("labeling")
}

pub fn id(s: &str) -> VertexId {
    VertexId::new(s)
}

/// Walk a 2-regular connected graph starting at `start`, toward the
/// neighbor with the smaller index.
pub fn cycle_order(g: &WeightedGraph, start: usize) -> Vec<usize> {
    let mut order = vec![start];
    let mut prev = usize::MAX;
    let mut cur = start;
    loop {
        let next = g
            .neighbor_indices(cur)
            .filter(|&w| w != prev)
            .min()
            .expect("cycle");
        if next == start {
            break;
        }
        prev = cur;
        cur = next;
        order.push(cur);
        assert!(order.len() <= g.vertex_count());
    }
    order
}

/// True iff the cyclic sequences agree up to rotation, reflection and a
/// nonzero scalar mod `p`.
pub fn same_cycle_up_to_symmetry(a: &[u64], b: &[u64], p: u64) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let n = a.len();
    (1..p).any(|c| {
        let scaled: Vec<u64> = a.iter().map(|x| x * c % p).collect();
        (0..n).any(|shift| {
            let fwd = (0..n).all(|i| scaled[(i + shift) % n] == b[i]);
            let bwd = (0..n).all(|i| scaled[(shift + n - i) % n] == b[i]);
            fwd || bwd
        })
    })
}

/// Brute-force isomorphism test for tiny unit-weight graphs.
pub fn isomorphic(n: usize, a: &[(usize, usize)], b: &[(usize, usize)]) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let norm = |e: &[(usize, usize)], perm: &[usize]| {
        let mut v: Vec<(usize, usize)> = e
            .iter()
            .map(|&(x, y)| {
                let (x, y) = (perm[x], perm[y]);
                (x.min(y), x.max(y))
            })
            .collect();
        v.sort_unstable();
        v
    };
    let ident: Vec<usize> = (0..n).collect();
    let target = norm(b, &ident);
    let mut perm = ident.clone();
    permutations(&mut perm, 0, &mut |p| norm(a, p) == target)
}

fn permutations(perm: &mut [usize], k: usize, f: &mut impl FnMut(&[usize]) -> bool) -> bool {
    if k == perm.len() {
        return f(perm);
    }
    for i in k..perm.len() {
        perm.swap(k, i);
        if permutations(perm, k + 1, f) {
            perm.swap(k, i);
            return true;
        }
        perm.swap(k, i);
    }
    false
}

use super::{Tour, TspInstance};

/// Nearest-neighbour tour from `start`; ties go to the lower city index.
pub fn nearest_neighbor_tour(inst: &TspInstance, start: usize) -> Tour {
    let n = inst.n();
    let mut visited = vec![false; n];
    let mut order = Vec::with_capacity(n);
    let mut at = start;
    visited[at] = true;
    order.push(at);
    for _ in 1..n {
        let next = (0..n)
            .filter(|&c| !visited[c])
            .min_by_key(|&c| (inst.d(at, c), c))
            .expect("unvisited city left");
        visited[next] = true;
        order.push(next);
        at = next;
    }
    Tour::new(inst, order).expect("visits every city once")
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

/// Greedy-edge tour: scan all edges by increasing length (ties by endpoint
/// indices) and keep an edge when both endpoints have degree below two and it
/// closes no premature cycle.
pub fn greedy_edge_tour(inst: &TspInstance) -> Tour {
    let n = inst.n();
    if n <= 3 {
        return Tour::identity(inst);
    }
    let mut edges: Vec<(i64, usize, usize)> = Vec::with_capacity(n * (n - 1) / 2);
    for i in 0..n {
        for j in i + 1..n {
            edges.push((inst.d(i, j), i, j));
        }
    }
    edges.sort_unstable();

    let mut degree = vec![0u8; n];
    let mut parent: Vec<usize> = (0..n).collect();
    let mut adj = vec![[usize::MAX; 2]; n];
    let mut taken = 0;
    for (_, a, b) in edges {
        if taken == n - 1 {
            break;
        }
        if degree[a] == 2 || degree[b] == 2 {
            continue;
        }
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        if ra == rb {
            continue;
        }
        parent[ra] = rb;
        adj[a][degree[a] as usize] = b;
        adj[b][degree[b] as usize] = a;
        degree[a] += 1;
        degree[b] += 1;
        taken += 1;
    }
    // n - 1 edges form a Hamiltonian path; walk it from one end.
    let start = (0..n).find(|&c| degree[c] == 1).expect("path has an end");
    let mut order = Vec::with_capacity(n);
    let (mut prev, mut at) = (usize::MAX, start);
    loop {
        order.push(at);
        let next = adj[at].iter().copied().find(|&c| c != usize::MAX && c != prev);
        match next {
            Some(c) => {
                prev = at;
                at = c;
            }
            None => break,
        }
    }
    Tour::new(inst, order).expect("path covers every city")
}

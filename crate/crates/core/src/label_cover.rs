//! r-hypergraph label cover: instances, satisfaction predicates, synthetic
//! generators, and the brute-force soundness oracle ε*.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::math::{rat, Rational};

pub const DEFAULT_ASSIGNMENT_CAP: u64 = 10_000_000;

/// One vertex per part; `maps[j][l]` is the color of label l at the part-j vertex.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct Hyperedge {
    pub vertices: Vec<usize>,
    pub maps: Vec<Vec<usize>>,
}

impl Hyperedge {
    pub fn color(&self, j: usize, label: usize) -> usize {
        self.maps[j][label]
    }
}

/// Vertices are numbered part by part: part j holds ids
/// `offset(j) .. offset(j) + part_sizes[j]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabelCoverInstance {
    r: usize,
    part_sizes: Vec<usize>,
    num_labels: usize,
    num_colors: usize,
    hyperedges: Vec<Hyperedge>,
}

/// σ: one label per vertex.
pub type Assignment = Vec<usize>;

impl LabelCoverInstance {
    pub fn new(part_sizes: Vec<usize>, num_labels: usize, num_colors: usize, hyperedges: Vec<Hyperedge>) -> Result<Self> {
        let r = part_sizes.len();
        if r < 2 {
            return Err(Error::InvalidArgument("need at least two parts".into()));
        }
        if part_sizes.contains(&0) || num_labels == 0 || num_colors == 0 {
            return Err(Error::InvalidArgument("parts, labels and colors must be non-empty".into()));
        }
        let inst = LabelCoverInstance { r, part_sizes, num_labels, num_colors, hyperedges: Vec::new() };
        for (idx, h) in hyperedges.iter().enumerate() {
            if h.vertices.len() != r || h.maps.len() != r {
                return Err(Error::InvalidArgument(format!("hyperedge {idx} must have one vertex per part")));
            }
            for (j, &u) in h.vertices.iter().enumerate() {
                if u >= inst.num_vertices() || inst.part_of(u) != j {
                    return Err(Error::InvalidArgument(format!("hyperedge {idx}: vertex {u} is not in part {j}")));
                }
                let m = &h.maps[j];
                if m.len() != num_labels || m.iter().any(|&c| c >= num_colors) {
                    return Err(Error::InvalidArgument(format!("hyperedge {idx}: map for part {j} is not L -> C")));
                }
            }
        }
        Ok(LabelCoverInstance { hyperedges, ..inst })
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn part_sizes(&self) -> &[usize] {
        &self.part_sizes
    }

    pub fn num_labels(&self) -> usize {
        self.num_labels
    }

    pub fn num_colors(&self) -> usize {
        self.num_colors
    }

    pub fn hyperedges(&self) -> &[Hyperedge] {
        &self.hyperedges
    }

    pub fn num_vertices(&self) -> usize {
        self.part_sizes.iter().sum()
    }

    pub fn offset(&self, part: usize) -> usize {
        self.part_sizes[..part].iter().sum()
    }

    pub fn vertex(&self, part: usize, ordinal: usize) -> usize {
        self.offset(part) + ordinal
    }

    pub fn part_of(&self, v: usize) -> usize {
        let mut acc = 0;
        for (j, &s) in self.part_sizes.iter().enumerate() {
            acc += s;
            if v < acc {
                return j;
            }
        }
        panic!("vertex {v} out of range")
    }

    /// Number of hyperedges containing v.
    pub fn degree(&self, v: usize) -> usize {
        self.hyperedges.iter().filter(|h| h.vertices.contains(&v)).count()
    }

    /// Colors of h's vertices under σ, by part.
    pub fn colors(&self, h: usize, sigma: &[usize]) -> Vec<usize> {
        let e = &self.hyperedges[h];
        e.vertices.iter().enumerate().map(|(j, &u)| e.color(j, sigma[u])).collect()
    }

    pub fn check_assignment(&self, sigma: &[usize]) -> Result<()> {
        if sigma.len() != self.num_vertices() || sigma.iter().any(|&l| l >= self.num_labels) {
            return Err(Error::InvalidArgument("assignment must give every vertex a label in L".into()));
        }
        Ok(())
    }

    /// |L|^{|V|}, saturating.
    pub fn assignment_count(&self) -> u128 {
        (self.num_labels as u128).saturating_pow(self.num_vertices() as u32)
    }
}

pub fn satisfies(inst: &LabelCoverInstance, sigma: &[usize], h: usize) -> bool {
    let cs = inst.colors(h, sigma);
    cs.iter().all(|&c| c == cs[0])
}

pub fn weakly_satisfies(inst: &LabelCoverInstance, sigma: &[usize], h: usize) -> bool {
    let cs = inst.colors(h, sigma);
    (0..cs.len()).any(|a| (a + 1..cs.len()).any(|b| cs[a] == cs[b]))
}

/// No two distinct vertices of h share a color under any pair of the given assignments.
pub fn is_colorful(inst: &LabelCoverInstance, h: usize, sigmas: &[&[usize]]) -> bool {
    let cols: Vec<Vec<usize>> = sigmas.iter().map(|s| inst.colors(h, s)).collect();
    for a in &cols {
        for b in &cols {
            for u in 0..inst.r {
                for v in 0..inst.r {
                    if u != v && a[u] == b[v] {
                        return false;
                    }
                }
            }
        }
    }
    true
}

pub fn colorful_fraction(inst: &LabelCoverInstance, sigmas: &[&[usize]]) -> Rational {
    let m = inst.hyperedges.len();
    let good = (0..m).filter(|&h| is_colorful(inst, h, sigmas)).count();
    rat(good as i64, m.max(1) as i64)
}

pub fn weak_fraction(inst: &LabelCoverInstance, sigma: &[usize]) -> Rational {
    let m = inst.hyperedges.len();
    let w = (0..m).filter(|&h| weakly_satisfies(inst, sigma, h)).count();
    rat(w as i64, m.max(1) as i64)
}

/// Odometer over all assignments, first vertex most significant.
pub fn for_each_assignment(n: usize, labels: usize, mut f: impl FnMut(&[usize]) -> bool) {
    let mut sigma = vec![0usize; n];
    loop {
        if !f(&sigma) {
            return;
        }
        let mut i = n;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            sigma[i] += 1;
            if sigma[i] < labels {
                break;
            }
            sigma[i] = 0;
        }
    }
}

/// ε*: exact maximum over all assignments of the weakly satisfied fraction,
/// with the first maximizing assignment.
pub fn max_weak_fraction_with_witness(inst: &LabelCoverInstance, cap: u64) -> Result<(Rational, Assignment)> {
    let count = inst.assignment_count();
    if count > cap as u128 {
        return Err(Error::SearchSpaceTooLarge { needed: count.to_string(), cap });
    }
    let m = inst.hyperedges.len();
    let mut best = 0usize;
    let mut witness = vec![0; inst.num_vertices()];
    let mut first = true;
    for_each_assignment(inst.num_vertices(), inst.num_labels, |sigma| {
        let w = (0..m).filter(|&h| weakly_satisfies(inst, sigma, h)).count();
        if first || w > best {
            best = w;
            witness = sigma.to_vec();
            first = false;
        }
        best < m
    });
    Ok((rat(best as i64, m.max(1) as i64), witness))
}

pub fn max_weak_fraction(inst: &LabelCoverInstance, cap: u64) -> Result<Rational> {
    max_weak_fraction_with_witness(inst, cap).map(|(e, _)| e)
}

fn check_gen_args(r: usize, part_size: usize, num_labels: usize, num_colors: usize) -> Result<()> {
    if r < 2 || part_size == 0 || num_labels == 0 || num_colors == 0 {
        return Err(Error::InvalidArgument("need r >= 2 and non-empty parts, labels, colors".into()));
    }
    Ok(())
}

fn sample_vertices(rng: &mut ChaCha8Rng, r: usize, part_size: usize) -> Vec<usize> {
    (0..r).map(|j| j * part_size + rng.gen_range(0..part_size)).collect()
}

/// Instance with a planted assignment σ* satisfying every hyperedge.
pub fn gen_planted(
    r: usize,
    part_size: usize,
    num_labels: usize,
    num_colors: usize,
    num_edges: usize,
    seed: u64,
) -> Result<(LabelCoverInstance, Assignment)> {
    check_gen_args(r, part_size, num_labels, num_colors)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = r * part_size;
    let planted: Assignment = (0..n).map(|_| rng.gen_range(0..num_labels)).collect();
    let mut edges = Vec::with_capacity(num_edges);
    for _ in 0..num_edges {
        let vertices = sample_vertices(&mut rng, r, part_size);
        let target = rng.gen_range(0..num_colors);
        let maps = vertices
            .iter()
            .map(|&u| {
                (0..num_labels)
                    .map(|l| if l == planted[u] { target } else { rng.gen_range(0..num_colors) })
                    .collect()
            })
            .collect();
        edges.push(Hyperedge { vertices, maps });
    }
    Ok((LabelCoverInstance::new(vec![part_size; r], num_labels, num_colors, edges)?, planted))
}

/// Instance with all label-to-color maps uniform.
pub fn gen_random(
    r: usize,
    part_size: usize,
    num_labels: usize,
    num_colors: usize,
    num_edges: usize,
    seed: u64,
) -> Result<LabelCoverInstance> {
    check_gen_args(r, part_size, num_labels, num_colors)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::with_capacity(num_edges);
    for _ in 0..num_edges {
        let vertices = sample_vertices(&mut rng, r, part_size);
        let maps = (0..r).map(|_| (0..num_labels).map(|_| rng.gen_range(0..num_colors)).collect()).collect();
        edges.push(Hyperedge { vertices, maps });
    }
    LabelCoverInstance::new(vec![part_size; r], num_labels, num_colors, edges)
}

/// No-like instance with small ε*: part j draws colors from its own block
/// `j·colors_per_part ..`, except in the first `noisy_edges` hyperedges where
/// every map draws from one shared palette of `colors_per_part` colors.
pub fn gen_disjoint(
    r: usize,
    part_size: usize,
    num_labels: usize,
    colors_per_part: usize,
    num_edges: usize,
    noisy_edges: usize,
    seed: u64,
) -> Result<LabelCoverInstance> {
    check_gen_args(r, part_size, num_labels, colors_per_part)?;
    if noisy_edges > num_edges {
        return Err(Error::InvalidArgument("more noisy edges than edges".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::with_capacity(num_edges);
    for e in 0..num_edges {
        let vertices = sample_vertices(&mut rng, r, part_size);
        let maps = (0..r)
            .map(|j| {
                let base = if e < noisy_edges { 0 } else { j * colors_per_part };
                (0..num_labels).map(|_| base + rng.gen_range(0..colors_per_part)).collect()
            })
            .collect();
        edges.push(Hyperedge { vertices, maps });
    }
    LabelCoverInstance::new(vec![part_size; r], num_labels, r * colors_per_part, edges)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::math::rat_int;

    fn single(maps: Vec<Vec<usize>>, labels: usize, colors: usize) -> LabelCoverInstance {
        let r = maps.len();
        let vertices = (0..r).collect();
        LabelCoverInstance::new(vec![1; r], labels, colors, vec![Hyperedge { vertices, maps }]).unwrap()
    }

    #[test]
    fn predicates() {
        let inst = single(vec![vec![1, 1], vec![1, 1]], 2, 2);
        for s in [[0, 0], [0, 1], [1, 0], [1, 1]] {
            assert!(satisfies(&inst, &s, 0));
        }
        let inst = single(vec![vec![1], vec![2]], 1, 3);
        assert!(!satisfies(&inst, &[0, 0], 0));
        let three = single(vec![vec![1], vec![1], vec![2]], 1, 3);
        assert!(weakly_satisfies(&three, &[0, 0, 0], 0));
        let rainbow = single(vec![vec![0], vec![1], vec![2]], 1, 3);
        assert!(!weakly_satisfies(&rainbow, &[0, 0, 0], 0));
        assert!(is_colorful(&rainbow, 0, &[&[0, 0, 0]]));
    }

    #[test]
    fn eps_star_examples() {
        let swap = single(vec![vec![0, 1], vec![1, 0]], 2, 2);
        assert_eq!(max_weak_fraction(&swap, DEFAULT_ASSIGNMENT_CAP).unwrap(), rat_int(1));
        let disjoint = gen_disjoint(3, 2, 2, 2, 6, 0, 4).unwrap();
        assert_eq!(max_weak_fraction(&disjoint, DEFAULT_ASSIGNMENT_CAP).unwrap(), rat_int(0));
        let (planted, _) = gen_planted(3, 2, 3, 4, 5, 1).unwrap();
        assert_eq!(max_weak_fraction(&planted, DEFAULT_ASSIGNMENT_CAP).unwrap(), rat_int(1));
        assert!(matches!(max_weak_fraction(&planted, 10), Err(Error::SearchSpaceTooLarge { .. })));
    }

    #[test]
    fn planted_generator() {
        let (inst, sigma) = gen_planted(4, 2, 3, 5, 6, 7).unwrap();
        assert_eq!(inst.num_vertices(), 8);
        assert_eq!(inst.hyperedges().len(), 6);
        for h in 0..6 {
            assert!(satisfies(&inst, &sigma, h));
            assert!(weakly_satisfies(&inst, &sigma, h));
        }
        assert_eq!(gen_planted(4, 2, 3, 5, 6, 7).unwrap(), (inst, sigma));
    }

    #[test]
    fn random_generator_is_seeded() {
        let a = gen_random(3, 2, 2, 9, 4, 3).unwrap();
        assert_eq!(a, gen_random(3, 2, 2, 9, 4, 3).unwrap());
        assert_ne!(a, gen_random(3, 2, 2, 9, 4, 4).unwrap());
        for h in a.hyperedges() {
            for (j, &u) in h.vertices.iter().enumerate() {
                assert_eq!(a.part_of(u), j);
            }
        }
    }

    #[test]
    fn colorful_relations() {
        let inst = gen_random(3, 1, 2, 6, 5, 9).unwrap();
        for_each_assignment(3, 2, |s| {
            for h in 0..5 {
                // a single assignment is colorful exactly when it is not weakly satisfying
                assert_eq!(is_colorful(&inst, h, &[s]), !weakly_satisfies(&inst, s, h));
                assert_eq!(is_colorful(&inst, h, &[s, s]), is_colorful(&inst, h, &[s]));
            }
            true
        });
        let mono = single(vec![vec![0, 0], vec![0, 0]], 2, 1);
        assert_eq!(colorful_fraction(&mono, &[&[0, 1], &[1, 0]]), rat_int(0));
    }

    #[test]
    fn colorful_fraction_lower_bound() {
        // at least a 1 - p²ε* fraction of hyperedges are colorful, for any p assignments
        for seed in 0..50u64 {
            let inst = gen_random(3, 1, 2, 10, 6, seed).unwrap();
            let eps = max_weak_fraction(&inst, DEFAULT_ASSIGNMENT_CAP).unwrap();
            for p in 1..=3usize {
                let bound = rat_int(1) - rat_int(p * p) * &eps;
                let mut all = Vec::new();
                for_each_assignment(3, 2, |s| {
                    all.push(s.to_vec());
                    true
                });
                let mut idx = vec![0usize; p];
                loop {
                    let sigmas: Vec<&[usize]> = idx.iter().map(|&i| all[i].as_slice()).collect();
                    assert!(colorful_fraction(&inst, &sigmas) >= bound, "seed {seed} p {p}");
                    let mut i = p;
                    let mut done = true;
                    while i > 0 {
                        i -= 1;
                        idx[i] += 1;
                        if idx[i] < all.len() {
                            done = false;
                            break;
                        }
                        idx[i] = 0;
                    }
                    if done {
                        break;
                    }
                }
            }
        }
    }

    #[test]
    fn validation() {
        let bad = Hyperedge { vertices: vec![1, 0], maps: vec![vec![0], vec![0]] };
        assert!(LabelCoverInstance::new(vec![1, 1], 1, 1, vec![bad]).is_err());
        let bad = Hyperedge { vertices: vec![0, 1], maps: vec![vec![3], vec![0]] };
        assert!(LabelCoverInstance::new(vec![1, 1], 1, 2, vec![bad]).is_err());
    }
}

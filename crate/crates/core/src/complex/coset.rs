//! The coset complex of a group with a generating set of reflections.

use std::sync::Arc;

use super::{ComplexAction, ComplexError, TypedComplex};
use crate::group::GroupTable;

/// Default bound on the number of stored faces.
pub const DEFAULT_SIMPLEX_CAP: u64 = 4_000_000;

/// Left translation of `G` on its coset complex.
#[derive(Clone, Debug)]
pub struct CosetAction {
    table: Arc<GroupTable>,
    /// `block_of[r][g]`: vertex of type `r` incident to the chamber `g`.
    block_of: Vec<Vec<u32>>,
    /// Smallest element of each vertex's coset.
    vertex_rep: Vec<u32>,
    vertex_types: Vec<u16>,
}

impl CosetAction {
    pub fn table(&self) -> &Arc<GroupTable> {
        &self.table
    }

    /// Vertices of the chamber `g`, one per type.
    pub fn chamber(&self, g: u32) -> Vec<u32> {
        self.block_of.iter().map(|b| b[g as usize]).collect()
    }

    /// Vertex of type `r` of the chamber `g`.
    pub fn chamber_vertex(&self, g: u32, r: usize) -> u32 {
        self.block_of[r][g as usize]
    }

    /// Smallest group element of the coset a vertex stands for.
    pub fn vertex_representative(&self, v: u32) -> u32 {
        self.vertex_rep[v as usize]
    }

    fn permutation_from_left(&self, left: &[u32]) -> Vec<u32> {
        self.vertex_rep
            .iter()
            .enumerate()
            .map(|(v, &rep)| {
                let r = self.vertex_types[v] as usize;
                self.block_of[r][left[rep as usize] as usize]
            })
            .collect()
    }
}

impl ComplexAction for CosetAction {
    fn group_order(&self) -> usize {
        self.table.order()
    }

    fn num_generators(&self) -> usize {
        self.table.rank()
    }

    fn generator_permutation(&self, i: usize) -> Vec<u32> {
        self.permutation_from_left(self.table.gen_left_action(i))
    }

    fn vertex_permutation(&self, g: u32) -> Vec<u32> {
        self.permutation_from_left(&self.table.left_multiplication(g))
    }
}

/// Builds the complex of cosets `g G_{R - I}`, one face of type `I` for each
/// such coset and nonempty `I`. Vertices of type `r` are numbered after
/// those of smaller types, in order of their smallest element.
pub fn milnor_fiber_complex(
    table: Arc<GroupTable>,
    simplex_cap: u64,
) -> Result<(TypedComplex, CosetAction), ComplexError> {
    let n = table.rank();
    let labels: Vec<String> = (1..=n).map(|i| format!("r{i}")).collect();
    let full_mask: u32 = (1u32 << n) - 1;
    let complement = |mask: u32| -> Vec<usize> { (0..n).filter(|&i| (full_mask & !mask) >> i & 1 == 1).collect() };

    // vertex partitions first, to get offsets and check the cap
    let mut vertex_parts = Vec::with_capacity(n);
    for r in 0..n {
        vertex_parts.push(table.parabolic_cosets(&complement(1 << r)));
    }
    let mut offsets = Vec::with_capacity(n);
    let mut nv = 0u32;
    for p in &vertex_parts {
        offsets.push(nv);
        nv += p.num_blocks() as u32;
    }
    let mut needed = 1u64;
    let mut parts = Vec::new();
    for mask in 1..=full_mask {
        let p = table.parabolic_cosets(&complement(mask));
        needed += p.num_blocks() as u64;
        if needed > simplex_cap {
            return Err(ComplexError::SimplexCapExceeded {
                needed,
                cap: simplex_cap,
            });
        }
        parts.push((mask, p));
    }
    let block_of: Vec<Vec<u32>> = vertex_parts
        .iter()
        .zip(&offsets)
        .map(|(p, &off)| p.block_of.iter().map(|&b| b + off).collect())
        .collect();
    let mut vertex_types = Vec::with_capacity(nv as usize);
    let mut vertex_rep = Vec::with_capacity(nv as usize);
    for (r, p) in vertex_parts.iter().enumerate() {
        vertex_types.extend(std::iter::repeat_n(r as u16, p.num_blocks()));
        vertex_rep.extend_from_slice(&p.reps);
    }
    let mut levels: Vec<Vec<u32>> = vec![Vec::new(); n];
    for (mask, p) in &parts {
        let types: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
        let level = &mut levels[types.len() - 1];
        for &rep in &p.reps {
            // offsets increase with type, so this face is already sorted
            level.extend(types.iter().map(|&r| block_of[r][rep as usize]));
        }
    }
    let levels = levels
        .into_iter()
        .enumerate()
        .map(|(k, l)| super::sort_dedup_faces(l, k + 1))
        .collect();
    let action = CosetAction {
        table,
        block_of,
        vertex_rep,
        vertex_types: vertex_types.clone(),
    };
    let complex = TypedComplex::from_levels(labels, vertex_types, levels);
    Ok((complex, action))
}

//! Search for central extensions `ℤ_m → Γ → G` on which a 3-cocycle becomes a coboundary.

use std::sync::Arc;

use super::{cohomology_group, pullback, solve_coboundary, solve_coboundary_constrained, Cochain};
use crate::error::{input, Result};
use crate::groups::{make_surjection, Group, GroupTable, Surjection};

#[derive(Clone, Debug)]
pub struct TrivializingExtension {
    pub rho: Surjection,
    /// Normalized 2-cochain on Γ with `dc = ρ*ω`.
    pub c: Cochain,
    /// Whether `c` vanishes on `ker ρ × ker ρ`.
    pub kernel_trivial: bool,
    /// The extension class in `H²(G, ℤ_m)` as coordinates of the computed generators.
    pub extension_class: Vec<u64>,
    pub kernel_order: usize,
}

/// `ℤ_m ×_f G` with product `(a,g)(b,h) = (a + b + f(g,h), gh)`; `(a, g)` has index `a + m·g`.
pub fn twisted_product_group(g: &GroupTable, m: usize, f: &Cochain) -> Result<GroupTable> {
    if f.degree() != 2 || f.group().product_table() != g.product_table() {
        return input("extension cocycle must be a 2-cochain on G");
    }
    let n = g.order();
    let f_int = |x: usize, y: usize| -> Result<usize> {
        let p = f.get(&[x, y]);
        if !(m as u64).is_multiple_of(p.denom()) {
            return input(format!("extension cocycle value {p} is not in (1/{m})ℤ/ℤ"));
        }
        Ok((p.numer() * (m as u64 / p.denom())) as usize)
    };
    let mut rows = vec![vec![0; m * n]; m * n];
    for x in 0..m * n {
        for y in 0..m * n {
            let (a, gx) = (x % m, x / m);
            let (b, gy) = (y % m, y / m);
            rows[x][y] = (a + b + f_int(gx, gy)?) % m + m * g.mul(gx, gy);
        }
    }
    GroupTable::from_rows(format!("Z{m}x_f{}", g.name()), rows)
}

fn is_standard_cyclic(g: &GroupTable) -> bool {
    let n = g.order();
    n > 1 && (0..n).all(|i| g.mul(i, 1) == (i + 1) % n)
}

/// Builds Γ and ρ for one extension class, relabelling Γ as `C_{|Γ|}` when it is cyclic
/// and `G` is a standard cyclic table, so that ρ reads "reduction mod |G|".
fn extension_surjection(g: &Group, m: usize, f: &Cochain) -> Result<Surjection> {
    let gamma = twisted_product_group(g, m, f)?;
    let map: Vec<usize> = (0..gamma.order()).map(|x| x / m).collect();
    let total = gamma.order();
    if is_standard_cyclic(g) {
        if let Some(gen) = (0..total).find(|&x| map[x] == 1 && gamma.element_order(x) == total) {
            let mut order = Vec::with_capacity(total);
            let mut x = 0;
            for _ in 0..total {
                order.push(x);
                x = gamma.mul(x, gen);
            }
            let relabeled = gamma.relabeled(&order, format!("C{total}"))?;
            let new_map = (0..total).map(|i| i % g.order()).collect();
            return make_surjection(Arc::new(relabeled), g.clone(), new_map);
        }
    }
    make_surjection(Arc::new(gamma), g.clone(), map)
}

/// Searches central extensions by ℤ_m, `m ≤ max_kernel_order`, for one on which ρ*ω is a
/// coboundary. Within the first successful `m`-range the first extension admitting a `c`
/// with `c|_{K×K} = 0` wins; otherwise the first extension found at all is returned.
pub fn find_trivializing_extension(
    g: &Group,
    w: &Cochain,
    max_kernel_order: usize,
) -> Result<Option<TrivializingExtension>> {
    if w.degree() != 3 || w.group().product_table() != g.product_table() {
        return input("find_trivializing_extension expects a 3-cocycle on the given group");
    }
    if let Some(c) = solve_coboundary(w)? {
        let rho = Surjection::identity(g.clone());
        return Ok(Some(TrivializingExtension {
            rho,
            c,
            kernel_trivial: true,
            extension_class: vec![],
            kernel_order: 1,
        }));
    }
    let mut fallback: Option<TrivializingExtension> = None;
    for m in 2..=max_kernel_order {
        if g.order() * m > super::MAX_SOLVER_ORDER {
            break;
        }
        let h2 = cohomology_group(g, 2, m as u64)?;
        for idx in 0..h2.order() {
            let f = h2.class_by_index(g, idx)?;
            let rho = extension_surjection(g, m, &f)?;
            let pulled = pullback(&rho, w)?;
            let kernel = rho.kernel.clone();
            let in_kernel = |args: &[usize]| args.iter().all(|x| kernel.binary_search(x).is_ok());
            let coords = coords_of(&h2.elementary_divisors, idx);
            if let Some(c) = solve_coboundary_constrained(&pulled, &in_kernel)? {
                return Ok(Some(TrivializingExtension {
                    rho,
                    c,
                    kernel_trivial: true,
                    extension_class: coords,
                    kernel_order: m,
                }));
            }
            if fallback.is_none() {
                if let Some(c) = solve_coboundary(&pulled)? {
                    fallback = Some(TrivializingExtension {
                        rho,
                        c,
                        kernel_trivial: false,
                        extension_class: coords,
                        kernel_order: m,
                    });
                }
            }
        }
    }
    Ok(fallback)
}

fn coords_of(divisors: &[u64], mut idx: u64) -> Vec<u64> {
    divisors
        .iter()
        .map(|&e| {
            let c = idx % e;
            idx /= e;
            c
        })
        .collect()
}

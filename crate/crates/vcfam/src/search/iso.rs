//! Relabelling isomorphism between set families.

use crate::error::{Error, Result};
use crate::family::SetFamily;

/// True iff some permutation of the ground set maps `a` onto `b`.
///
/// Backtracking over element images with size- and degree-profile pruning;
/// practical for `n <= 8`, rejected beyond `n = 12`.
pub fn relabelling_isomorphic(a: &SetFamily, b: &SetFamily) -> Result<bool> {
    if a.n() != b.n() {
        return Err(Error::range(format!(
            "isomorphism check needs a common ground set, got [{}] and [{}]",
            a.n(),
            b.n()
        )));
    }
    let n = a.n();
    if n > 12 {
        return Err(Error::budget(format!(
            "isomorphism scan over [{n}] exceeds the factorial budget"
        )));
    }
    if a.len() != b.len() {
        return Ok(false);
    }
    if size_profile(a) != size_profile(b) {
        return Ok(false);
    }
    let deg_a = degrees(a);
    let deg_b = degrees(b);
    {
        let mut sa = deg_a.clone();
        let mut sb = deg_b.clone();
        sa.sort_unstable();
        sb.sort_unstable();
        if sa != sb {
            return Ok(false);
        }
    }

    let mut image = vec![0u32; n as usize]; // 0 = unassigned, else 1-based target
    let mut used = 0u128;
    Ok(assign(a, b, &deg_a, &deg_b, &mut image, &mut used, 0))
}

fn size_profile(f: &SetFamily) -> Vec<u32> {
    let mut v: Vec<u32> = f.iter().map(|m| m.size()).collect();
    v.sort_unstable();
    v
}

/// Per-element membership counts.
fn degrees(f: &SetFamily) -> Vec<u32> {
    let n = f.n() as usize;
    let mut deg = vec![0u32; n];
    for m in f.iter() {
        for e in m.elements() {
            deg[(e - 1) as usize] += 1;
        }
    }
    deg
}

fn assign(
    a: &SetFamily,
    b: &SetFamily,
    deg_a: &[u32],
    deg_b: &[u32],
    image: &mut Vec<u32>,
    used: &mut u128,
    pos: usize,
) -> bool {
    let n = a.n() as usize;
    if pos == n {
        return mapped_equals(a, b, image);
    }
    for target in 0..n {
        if *used >> target & 1 == 1 || deg_a[pos] != deg_b[target] {
            continue;
        }
        image[pos] = target as u32 + 1;
        *used |= 1 << target;
        if assign(a, b, deg_a, deg_b, image, used, pos + 1) {
            return true;
        }
        *used &= !(1u128 << target);
        image[pos] = 0;
    }
    false
}

fn mapped_equals(a: &SetFamily, b: &SetFamily, image: &[u32]) -> bool {
    let mut mapped: Vec<u128> = a
        .iter()
        .map(|m| {
            let mut out = 0u128;
            let mut rest = m.bits();
            while rest != 0 {
                let p = rest.trailing_zeros() as usize;
                out |= 1u128 << (image[p] - 1);
                rest &= rest - 1;
            }
            out
        })
        .collect();
    mapped.sort_unstable();
    mapped.iter().zip(b.iter()).all(|(m, t)| *m == t.bits())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::lowsets;
    use crate::family::{GroundSet, Permutation, SubsetMask};

    fn fam(n: u32, sets: &[&[u32]]) -> SetFamily {
        let ground = GroundSet::new(n).unwrap();
        let masks = sets
            .iter()
            .map(|s| SubsetMask::from_elements(s.iter().copied()).unwrap());
        SetFamily::new(ground, masks).unwrap()
    }

    #[test]
    fn identity_and_singletons() {
        let a = fam(4, &[&[1, 2], &[3]]);
        assert!(relabelling_isomorphic(&a, &a).unwrap());
        assert!(relabelling_isomorphic(&fam(3, &[&[1]]), &fam(3, &[&[2]])).unwrap());
    }

    #[test]
    fn size_profiles_separate() {
        let low = lowsets(3, 1).unwrap();
        let square = fam(3, &[&[], &[1], &[2], &[1, 2]]);
        assert!(!relabelling_isomorphic(&low, &square).unwrap());
    }

    #[test]
    fn relabelled_families_are_isomorphic() {
        let a = fam(5, &[&[1, 2], &[2, 3], &[3, 4], &[5]]);
        let p = Permutation::new(vec![4, 2, 5, 1, 3]).unwrap();
        let b = a.relabel(&p).unwrap();
        assert!(relabelling_isomorphic(&a, &b).unwrap());
    }

    #[test]
    fn same_profiles_but_not_isomorphic() {
        // Both 2-uniform and 2-regular on [6]: a six-cycle versus two
        // triangles. Profiles agree, families do not.
        let cycle = fam(6, &[&[1, 2], &[2, 3], &[3, 4], &[4, 5], &[5, 6], &[1, 6]]);
        let triangles = fam(6, &[&[1, 2], &[2, 3], &[1, 3], &[4, 5], &[5, 6], &[4, 6]]);
        assert!(!relabelling_isomorphic(&cycle, &triangles).unwrap());
    }

    #[test]
    fn guards() {
        let a = fam(3, &[&[1]]);
        let b = fam(4, &[&[1]]);
        assert!(relabelling_isomorphic(&a, &b).is_err());
    }
}

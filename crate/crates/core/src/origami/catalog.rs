use alloc::vec;
use alloc::vec::Vec;

use super::Origami;

fn from_cycles(n: usize, h: &[&[usize]], v: &[&[usize]]) -> Origami {
    let perm = |cycles: &[&[usize]]| {
        let mut p: Vec<usize> = (0..n).collect();
        for c in cycles {
            for (k, &x) in c.iter().enumerate() {
                p[x - 1] = c[(k + 1) % c.len()] - 1;
            }
        }
        p
    };
    Origami::new(perm(h), perm(v)).expect("catalog origami is valid")
}

/// L-shaped origami with a bottom row of `a` cells and a left column of `b`
/// cells sharing the corner cell. `l_shaped(2, 2)` is the three-square L.
pub fn l_shaped(a: usize, b: usize) -> Origami {
    assert!(a >= 2 && b >= 2, "L-shape needs both arms");
    let n = a + b - 1;
    let row: Vec<usize> = (1..=a).collect();
    let col: Vec<usize> = core::iter::once(1).chain(a + 1..=n).collect();
    from_cycles(n, &[&row], &[&col])
}

/// Staircase: h = (1 2)(3 4)…, v = (2 3)(4 5)…
pub fn staircase(n: usize) -> Origami {
    assert!(n >= 4, "staircases below four cells have genus < 2");
    let pairs = |start: usize| -> Vec<Vec<usize>> {
        (start..n).step_by(2).map(|k| vec![k, k + 1]).collect()
    };
    let h = pairs(1);
    let v = pairs(2);
    let h: Vec<&[usize]> = h.iter().map(Vec::as_slice).collect();
    let v: Vec<&[usize]> = v.iter().map(Vec::as_slice).collect();
    from_cycles(n, &h, &v)
}

/// Five cells in a plus-shaped pattern: h = (1 2 3), v = (4 2 5).
pub fn cross5() -> Origami {
    from_cycles(5, &[&[1, 2, 3]], &[&[4, 2, 5]])
}

/// The eight-square origami built from right multiplication by i and j in
/// the quaternion group; genus 3 with four cone points of angle 4π.
pub fn eierlegende_wollmilchsau() -> Origami {
    Origami::from_one_based(&[2, 5, 8, 3, 6, 1, 4, 7], &[3, 4, 5, 6, 7, 8, 1, 2]).expect("valid")
}

/// Built-in origamis of genus 2 and 3.
pub fn catalog() -> Vec<(&'static str, Origami)> {
    vec![
        ("L(2,2)", l_shaped(2, 2)),
        ("L(3,2)", l_shaped(3, 2)),
        ("L(3,3)", l_shaped(3, 3)),
        ("staircase4", staircase(4)),
        ("cross5", cross5()),
        ("staircase5", staircase(5)),
        ("staircase6", staircase(6)),
        ("wollmilchsau", eierlegende_wollmilchsau()),
    ]
}

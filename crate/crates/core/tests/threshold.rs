//! Equality cases of the per-unit deficit comparator.
//!
//! `f = ∂/vol + vol/2m` meets `2√(2/m)` exactly when
//! `vol = √(2m)·(2 ± √(4 − ∂))`, so integer equality needs `∂ ∈ {0, 3, 4}`:
//! `vol² = 32m` at `∂ = 0`, `vol² ∈ {2m, 18m}` at `∂ = 3`, `vol² = 8m` at `∂ = 4`.

use maxmod::gadget::{classify_deficit, per_unit_deficit, Threshold};

fn expected_equal(b: u64, vol: u64, m: u64) -> bool {
    let v2 = vol * vol;
    match b {
        0 => v2 == 32 * m,
        3 => v2 == 2 * m || v2 == 18 * m,
        4 => v2 == 8 * m,
        _ => false,
    }
}

#[test]
fn equality_cases_are_exactly_the_boundary_roots() {
    let mut seen = [0usize; 7];
    for m in 1..=400u64 {
        for vol in 1..=400u64 {
            for b in 0..=6u64 {
                let eq = per_unit_deficit(b, vol, m).unwrap().relation == Threshold::Equal;
                assert_eq!(eq, expected_equal(b, vol, m), "∂={b} vol={vol} m={m}");
                seen[b as usize] += usize::from(eq);
            }
        }
    }
    assert!(seen[0] > 0 && seen[3] > 0 && seen[4] > 0);
    assert_eq!(seen[1] + seen[2] + seen[5] + seen[6], 0);
}

#[test]
fn clause_three_window_is_strict() {
    // m = 2: √(2m) = 2, the window edges vol = 2 and vol = 6 are equalities.
    for vol in [2, 6] {
        let r = classify_deficit(3, vol, 2).unwrap();
        assert!(!r.in_window);
        assert_eq!(r.relation, Threshold::Equal);
    }
    assert_eq!(classify_deficit(3, 7, 2).unwrap().relation, Threshold::Above);
    assert_eq!(classify_deficit(3, 1, 2).unwrap().relation, Threshold::Above);
}

use num_bigint::BigInt;
use num_rational::BigRational;

use super::{CheckOutcome, Tally};
use crate::zn_lab::{assign_brute_force, assign_markers, boundary_ratio, boundary_ratio_by_arrows, grid_row, MarkerConfiguration};

const SWEEP: [u32; 4] = [8, 16, 32, 64];

pub fn zn_ratios() -> CheckOutcome {
    let mut t = Tally::new(9, "Z^N ratios");
    let mut ratios = Vec::new();
    for m in SWEEP {
        let (row, ratio, bound) = match grid_row(2, m, 1, None) {
            Ok(r) => r,
            Err(e) => {
                t.fail(format!("m={m}: {e}"));
                continue;
            }
        };
        let expected = BigRational::new(BigInt::from(4), BigInt::from(m));
        t.case(ratio == expected, || format!("m={m}: ratio {} but 4/m = {expected}", row.ratio));
        if m >= 16 {
            match &bound {
                Some(b) => t.case(ratio <= *b, || format!("m={m}: ratio {ratio} exceeds bound {b}")),
                None => t.fail(format!("m={m}: bound hypotheses not met")),
            }
        }
        let cfg = MarkerConfiguration::grid(2, m, None, 1).expect("grid in range");
        let fast = assign_markers(&cfg);
        let slow = assign_brute_force(&cfg);
        t.case(fast == slow, || format!("m={m}: grid assignment differs from brute force"));
        let by_arrows = boundary_ratio_by_arrows(&cfg, &slow, 1);
        t.case(by_arrows == boundary_ratio(&cfg, &slow, 1), || format!("m={m}: per-arrow count gives {by_arrows}"));
        ratios.push(ratio);
    }
    let decreasing = ratios.windows(2).all(|w| w[1] < w[0]);
    t.case(decreasing, || format!("ratios not decreasing: {ratios:?}"));
    let shown: Vec<String> = ratios.iter().map(ToString::to_string).collect();
    t.note(format!("N=2, n=1, m={SWEEP:?}: ratios {}", shown.join(", ")));
    t.finish()
}

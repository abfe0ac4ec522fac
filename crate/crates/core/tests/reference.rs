//! Best L2 coefficients against values computed independently with 50-digit
//! arithmetic (direct quadrature of the moments and a dense solve).

use taylor_l2::l2::{solve, Method};
use taylor_l2::lab::registry_lookup;
use taylor_l2::scalar::Scalar;

const CASES: &[(&str, f64, f64, &[f64])] = &[
    (
        "exp",
        0.0,
        0.1,
        &[
            0.999_999_642_724_845_175_657_5,
            1.001_000_357_209_002_225_205,
            0.500_357_242_078_524_773_933_6,
        ],
    ),
    (
        "runge",
        0.0,
        0.2,
        &[
            0.993_498_792_848_988_239_793_2,
            0.0,
            -21.051_764_390_117_711_630_69,
            0.0,
            226.842_382_552_175_702_807_2,
        ],
    ),
    (
        "atan",
        0.2,
        0.05,
        &[
            0.197_395_472_131_012_467_132_9,
            0.961_538_312_919_823_942_946_9,
            -0.184_560_163_408_051_524_156_8,
            -0.260_494_791_903_500_897_523,
        ],
    ),
    (
        "sin",
        0.5,
        0.5,
        &[
            0.479_319_510_639_570_454_285_8,
            0.877_474_556_170_087_003_539_2,
            -0.235_461_798_092_522_060_240_5,
            -0.144_243_824_561_114_854_098_7,
        ],
    ),
];

#[test]
fn coefficients_match_high_precision_values() {
    for &(name, x0, eps, expected) in CASES {
        let f = registry_lookup(name).unwrap();
        let k = expected.len() - 1;
        for method in [Method::NormalEquations, Method::LegendreProjection] {
            let r = solve(&f, &Scalar::Float(x0), &Scalar::Float(eps), k, method).unwrap();
            for (i, (a, e)) in r.poly.coeffs_f64().iter().zip(expected).enumerate() {
                assert!(
                    (a - e).abs() <= 1e-13 * e.abs().max(1.0),
                    "{name} {method} a_{i}: {a} vs {e}"
                );
            }
        }
    }
}
